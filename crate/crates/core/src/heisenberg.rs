//! Central extensions of finite abelian groups by Q/Z given by bilinear
//! cocycles, and the Heisenberg group of a polarized symplectic space.
//!
//! An extension with cocycle `c` on `Q` is the set `Q/Z x Q` with
//! `(t, u)(t', u') = (t + t' + c(u, u'), u + u')`. Its commutator is
//! `c - c^T`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::finabel::{Element, Group, Subgroup};
use crate::forms::{BilinearForm, QuadraticFunction, SymplecticSpace, QZ};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralExtension {
    base: Group,
    cocycle: BilinearForm,
    modulus: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HeisenbergElement {
    pub scalar: QZ,
    pub point: Element,
}

impl HeisenbergElement {
    pub fn new(scalar: QZ, point: Element) -> Self {
        HeisenbergElement { scalar, point }
    }

    /// The lift `(0, x)` of a point.
    pub fn point(x: Element) -> Self {
        HeisenbergElement {
            scalar: QZ::ZERO,
            point: x,
        }
    }

    pub fn central(t: QZ, g: &Group) -> Self {
        HeisenbergElement {
            scalar: t,
            point: g.zero(),
        }
    }
}

fn gram_modulus(b: &BilinearForm) -> i64 {
    b.gram().iter().flatten().fold(1, |acc, v| num_integer::lcm(acc, v.den()))
}

impl CentralExtension {
    pub fn new(cocycle: BilinearForm) -> Result<Self> {
        if !cocycle.is_square() {
            return invalid("a cocycle must be a form on a single group");
        }
        Ok(CentralExtension {
            base: cocycle.left().clone(),
            modulus: gram_modulus(&cocycle),
            cocycle,
        })
    }

    /// The Heisenberg group of `(K, P)`.
    pub fn heisenberg(space: &SymplecticSpace) -> Self {
        Self::new(space.polarization().clone()).expect("polarizations are square")
    }

    pub fn base(&self) -> &Group {
        &self.base
    }

    pub fn cocycle(&self) -> &BilinearForm {
        &self.cocycle
    }

    /// Least common multiple of the cocycle denominators.
    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn identity(&self) -> HeisenbergElement {
        HeisenbergElement::point(self.base.zero())
    }

    pub fn contains(&self, h: &HeisenbergElement) -> bool {
        self.base.contains(&h.point)
    }

    pub fn mul(&self, h: &HeisenbergElement, h2: &HeisenbergElement) -> HeisenbergElement {
        HeisenbergElement {
            scalar: h.scalar + h2.scalar + self.cocycle.eval(&h.point, &h2.point),
            point: self.base.add(&h.point, &h2.point),
        }
    }

    pub fn inverse(&self, h: &HeisenbergElement) -> HeisenbergElement {
        let minus = self.base.neg(&h.point);
        // (t, u)(s, -u) = (t + s + c(u, -u), 0)
        HeisenbergElement {
            scalar: -h.scalar + self.cocycle.eval(&h.point, &h.point),
            point: minus,
        }
    }

    /// `h h' h^-1 h'^-1`, always central.
    pub fn commutator(&self, h: &HeisenbergElement, h2: &HeisenbergElement) -> HeisenbergElement {
        let a = self.mul(h, h2);
        let b = self.mul(&a, &self.inverse(h));
        self.mul(&b, &self.inverse(h2))
    }

    /// Associativity on every triple of base points.
    pub fn is_associative_exhaustively(&self) -> bool {
        let pts: Vec<Element> = self.base.elements().collect();
        pts.iter().all(|a| {
            pts.iter().all(|b| {
                pts.iter().all(|c| {
                    let (a, b, c) = (
                        HeisenbergElement::point(a.clone()),
                        HeisenbergElement::point(b.clone()),
                        HeisenbergElement::point(c.clone()),
                    );
                    self.mul(&self.mul(&a, &b), &c) == self.mul(&a, &self.mul(&b, &c))
                })
            })
        })
    }

    /// Every element `(k / N, u)` with `N` the given scalar modulus.
    pub fn elements_with_modulus(&self, n: i64) -> Vec<HeisenbergElement> {
        let mut out = Vec::with_capacity(n as usize * self.base.order() as usize);
        for u in self.base.elements() {
            for k in 0..n {
                out.push(HeisenbergElement::new(QZ::new(k, n), u.clone()));
            }
        }
        out
    }
}

/// `(t, x)(t', x') = (t + t' + P(x, x'), x + x')`.
pub fn heisenberg_mul(space: &SymplecticSpace, h: &HeisenbergElement, h2: &HeisenbergElement) -> HeisenbergElement {
    HeisenbergElement {
        scalar: h.scalar + h2.scalar + space.p(&h.point, &h2.point),
        point: space.carrier().add(&h.point, &h2.point),
    }
}

/// `c - c^T`.
pub fn commutator_form(ext: &CentralExtension) -> BilinearForm {
    ext.cocycle.derived_alternating().expect("cocycles are square")
}

/// A cocycle with commutator `omega`: `omega` below the diagonal, zero on
/// and above it.
pub fn extension_from_form(omega: &BilinearForm) -> Result<CentralExtension> {
    if !omega.is_alternating() {
        return invalid("commutator data must be an alternating form");
    }
    let n = omega.left().rank();
    let gram = (0..n)
        .map(|i| (0..n).map(|j| if i > j { omega.gram()[i][j] } else { QZ::ZERO }).collect())
        .collect();
    CentralExtension::new(BilinearForm::new(omega.left().clone(), omega.left().clone(), gram)?)
}

/// A function `lambda` on `H` with `lambda(u + u') - lambda(u) - lambda(u') = c(u, u')`,
/// i.e. a lift of `H` to a subgroup `{(lambda(u), u)}` of the extension.
/// Over Q/Z it exists exactly when the commutator vanishes on `H`.
pub fn splitting_of_extension(ext: &CentralExtension, h: &Subgroup) -> Result<Option<QuadraticFunction>> {
    if h.ambient() != &ext.base {
        return invalid("subgroup does not live in the base of the extension");
    }
    let omega = commutator_form(ext);
    let gens = h.canonical_generators();
    if gens.iter().any(|a| gens.iter().any(|b| !omega.eval(a, b).is_zero())) {
        return Ok(None);
    }
    QuadraticFunction::refine(h, &ext.cocycle).map(Some)
}

/// The pair of mutually inverse isomorphisms between `H(K, P)` and
/// `H(K, P')` for `P' = P + Lambda(q)`.
#[derive(Debug, Clone)]
pub struct TwistMap {
    q: QuadraticFunction,
}

impl TwistMap {
    pub fn quadratic(&self) -> &QuadraticFunction {
        &self.q
    }

    /// `H(K, P) -> H(K, P')`, `(t, x) -> (t + q(x), x)`.
    pub fn forward(&self, h: &HeisenbergElement) -> HeisenbergElement {
        HeisenbergElement::new(h.scalar + self.q.eval(&h.point), h.point.clone())
    }

    /// `H(K, P') -> H(K, P)`, `(t, x) -> (t - q(x), x)`: the twisted operator
    /// `T'_x` goes to `q(x)^-1 T_x`.
    pub fn backward(&self, h: &HeisenbergElement) -> HeisenbergElement {
        HeisenbergElement::new(h.scalar - self.q.eval(&h.point), h.point.clone())
    }
}

/// `P' = P + Lambda(q)` with `Lambda(q)(x, y) = q(x + y) - q(x) - q(y)`.
pub fn twist_polarization(space: &SymplecticSpace, q: &QuadraticFunction) -> Result<(SymplecticSpace, TwistMap)> {
    if q.domain() != &Subgroup::whole(space.carrier()) {
        return invalid("twisting needs a quadratic function on the whole carrier");
    }
    if !q.polar().is_symmetric() {
        return invalid("the polar form of the twist is not symmetric");
    }
    let twisted = space.with_polarization(space.polarization().add(q.polar())?)?;
    Ok((twisted, TwistMap { q: q.clone() }))
}

/// Compares `f(a b)` with `f(a) f(b)` on all pairs of elements with scalars
/// in `(1/n)Z/Z`, and checks injectivity on that set.
pub fn is_isomorphism_on_table(
    source: &CentralExtension,
    target: &CentralExtension,
    n: i64,
    f: impl Fn(&HeisenbergElement) -> HeisenbergElement,
) -> bool {
    let elems = source.elements_with_modulus(n);
    let images: Vec<HeisenbergElement> = elems.iter().map(&f).collect();
    let distinct: std::collections::HashSet<&HeisenbergElement> = images.iter().collect();
    if distinct.len() != elems.len() {
        return false;
    }
    elems.iter().zip(&images).all(|(a, fa)| {
        elems
            .iter()
            .zip(&images)
            .all(|(b, fb)| f(&source.mul(a, b)) == target.mul(fa, fb))
    })
}
