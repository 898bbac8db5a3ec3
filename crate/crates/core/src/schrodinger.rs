//! Schrodinger models `F(Y, alpha)`: functions on `K` with
//! `f(y + x) = chi(-P(y, x) - alpha(y)) f(x)`, in the basis of delta
//! functions at the coset representatives of `K/Y`, together with the
//! Heisenberg action `(T_(t,w) f)(x) = chi(t + P(x, w)) f(x + w)`.

use std::sync::Arc;

use crate::cyclo::{field, Cyclo, CycloField, CycloMatrix, Echelon};
use crate::error::{invalid, Error, Result};
use crate::finabel::{quotient, Element, Quotient, Subgroup};
use crate::forms::{QuadraticFunction, SymplecticSpace, QZ};
use crate::heisenberg::HeisenbergElement;

/// Upper limit on the number of unknowns in `hom_space`.
pub const HOM_SPACE_UNKNOWN_LIMIT: u64 = 4096;

/// A lagrangian subgroup with a quadratic refinement of `P` on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LagrangianPair {
    space: SymplecticSpace,
    y: Subgroup,
    alpha: QuadraticFunction,
}

impl LagrangianPair {
    pub fn new(space: &SymplecticSpace, y: &Subgroup, alpha: QuadraticFunction) -> Result<Self> {
        if !space.is_lagrangian(y)? {
            return invalid("the subgroup of a lagrangian pair must be lagrangian");
        }
        if alpha.domain() != y {
            return invalid("the refinement must be defined on the lagrangian subgroup");
        }
        let g = space.carrier();
        for (a, va) in alpha.values() {
            for (b, vb) in alpha.values() {
                if alpha.eval(&g.add(a, b)) - *va - *vb != space.p(a, b) {
                    return invalid(format!("alpha does not refine P at ({a}, {b})"));
                }
            }
        }
        Ok(LagrangianPair {
            space: space.clone(),
            y: y.clone(),
            alpha,
        })
    }

    /// The canonical refinement of `P|YxY`.
    pub fn canonical(space: &SymplecticSpace, y: &Subgroup) -> Result<Self> {
        let alpha = space.quadratic_refinement(y)?;
        Self::new(space, y, alpha)
    }

    /// Canonical refinement shifted by the character `<a, .>` of `K`.
    pub fn shifted(space: &SymplecticSpace, y: &Subgroup, a: &Element) -> Result<Self> {
        let alpha = space.quadratic_refinement(y)?.add_character(a)?;
        Self::new(space, y, alpha)
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.y
    }

    pub fn alpha(&self) -> &QuadraticFunction {
        &self.alpha
    }

    /// Same subgroup, refinement replaced.
    pub fn with_alpha(&self, alpha: QuadraticFunction) -> Result<Self> {
        Self::new(&self.space, &self.y, alpha)
    }
}

fn form_modulus(space: &SymplecticSpace) -> i64 {
    space
        .polarization()
        .gram()
        .iter()
        .flatten()
        .fold(1, |acc, v| num_integer::lcm(acc, v.den()))
}

#[derive(Debug, Clone)]
pub struct ModelSpace {
    pair: LagrangianPair,
    quotient: Quotient,
    field: Arc<CycloField>,
}

impl PartialEq for ModelSpace {
    fn eq(&self, other: &Self) -> bool {
        self.pair == other.pair
    }
}

impl ModelSpace {
    pub fn new(pair: &LagrangianPair) -> Result<Self> {
        let q = quotient(pair.space.carrier(), &pair.y)?;
        let n = num_integer::lcm(form_modulus(&pair.space), pair.alpha.modulus());
        let ms = ModelSpace {
            pair: pair.clone(),
            quotient: q,
            field: field(n as u64),
        };
        let d = ms.dimension() as u128;
        if d * d != u128::from(pair.space.carrier().order()) {
            return Err(Error::InvariantViolation(format!(
                "model dimension {d} squared differs from |K| = {}",
                pair.space.carrier().order()
            )));
        }
        Ok(ms)
    }

    pub fn pair(&self) -> &LagrangianPair {
        &self.pair
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.pair.space
    }

    pub fn coset_reps(&self) -> &[Element] {
        &self.quotient.coset_reps
    }

    pub fn dimension(&self) -> usize {
        self.quotient.coset_reps.len()
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    /// `(slot, phase)` with `f(x) = chi(phase) f(rep[slot])` for every `f`
    /// in the model.
    pub fn phase(&self, x: &Element) -> (usize, QZ) {
        let (slot, y) = self.quotient.decompose(x);
        let r = &self.quotient.coset_reps[slot];
        (slot, -self.pair.space.p(&y, r) - self.pair.alpha.eval(&y))
    }

    /// Full function on `K`, indexed by the enumeration order of `K`.
    pub fn expand(&self, values: &[Cyclo]) -> Result<Vec<Cyclo>> {
        if values.len() != self.dimension() {
            return invalid(format!("expected {} values, got {}", self.dimension(), values.len()));
        }
        let f = self.field_for(values);
        Ok(self
            .space()
            .carrier()
            .elements()
            .map(|x| {
                let (slot, ph) = self.phase(&x);
                &Cyclo::chi(&f, ph) * &values[slot]
            })
            .collect())
    }

    fn field_for(&self, values: &[Cyclo]) -> Arc<CycloField> {
        let n = values
            .iter()
            .fold(self.field.order(), |acc, v| num_integer::lcm(acc, v.field().order()));
        field(n)
    }

    /// Values at the coset representatives.
    pub fn restrict(&self, function: &[Cyclo]) -> Vec<Cyclo> {
        let g = self.space().carrier();
        self.coset_reps().iter().map(|r| function[g.index_of(r)].clone()).collect()
    }

    /// Whether a full function satisfies the defining constraint on all of
    /// `Y x K`.
    pub fn satisfies_constraint(&self, function: &[Cyclo]) -> bool {
        let g = self.space().carrier();
        let f = self.field_for(function);
        let ys = self.pair.y.elements();
        g.elements().all(|x| {
            ys.iter().all(|y| {
                let ph = -self.space().p(y, &x) - self.pair.alpha.eval(y);
                function[g.index_of(&g.add(y, &x))] == &Cyclo::chi(&f, ph) * &function[g.index_of(&x)]
            })
        })
    }

    /// Transporting a value along `y1` and then `y2` agrees with
    /// transporting along `y1 + y2`, for every coset representative.
    pub fn constraint_is_consistent(&self) -> bool {
        let g = self.space().carrier();
        let p = |a: &Element, b: &Element| self.space().p(a, b);
        let alpha = |a: &Element| self.pair.alpha.eval(a);
        let ys = self.pair.y.elements();
        self.coset_reps().iter().all(|r| {
            ys.iter().all(|y1| {
                ys.iter().all(|y2| {
                    let x1 = g.add(y1, r);
                    let stepwise = -p(y1, r) - alpha(y1) - p(y2, &x1) - alpha(y2);
                    let direct = -p(&g.add(y1, y2), r) - alpha(&g.add(y1, y2));
                    stepwise == direct
                })
            })
        })
    }

    /// `|K| x dim` matrix of `expand`.
    pub fn expansion_matrix(&self) -> CycloMatrix {
        let g = self.space().carrier();
        let mut m = CycloMatrix::zeros(&self.field, g.order() as usize, self.dimension());
        for (i, x) in g.elements().enumerate() {
            let (slot, ph) = self.phase(&x);
            m.set(i, slot, Cyclo::chi(&self.field, ph));
        }
        m
    }
}

/// A linear map between two models, in their delta bases.
#[derive(Debug, Clone)]
pub struct ModelOperator {
    pub source: ModelSpace,
    pub target: ModelSpace,
    pub matrix: CycloMatrix,
}

impl ModelOperator {
    /// `self` after `first`.
    pub fn after(&self, first: &ModelOperator) -> Result<ModelOperator> {
        if first.target != self.source {
            return invalid("operators do not compose: model spaces differ");
        }
        Ok(ModelOperator {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&first.matrix),
        })
    }
}

/// `(T_(t,w) f)(x) = chi(t + P(x, w)) f(x + w)` in the delta basis.
pub fn act(ms: &ModelSpace, h: &HeisenbergElement) -> Result<ModelOperator> {
    let g = ms.space().carrier();
    if !g.contains(&h.point) {
        return invalid(format!("{} is not a point of the carrier", h.point));
    }
    let f = field(num_integer::lcm(ms.field.order(), h.scalar.den() as u64));
    let d = ms.dimension();
    let mut m = CycloMatrix::zeros(&f, d, d);
    for (i, r) in ms.coset_reps().iter().enumerate() {
        let (slot, ph) = ms.phase(&g.add(r, &h.point));
        m.set(i, slot, Cyclo::chi(&f, h.scalar + ms.space().p(r, &h.point) + ph));
    }
    Ok(ModelOperator {
        source: ms.clone(),
        target: ms.clone(),
        matrix: m,
    })
}

/// The same action on arbitrary functions on `K`.
pub fn act_on_function(space: &SymplecticSpace, h: &HeisenbergElement, function: &[Cyclo]) -> Vec<Cyclo> {
    let g = space.carrier();
    let n = function
        .iter()
        .fold(h.scalar.den() as u64, |acc, v| num_integer::lcm(acc, v.field().order()));
    let n = num_integer::lcm(n, form_modulus(space) as u64);
    let f = field(n);
    g.elements()
        .map(|x| &Cyclo::chi(&f, h.scalar + space.p(&x, &h.point)) * &function[g.index_of(&g.add(&x, &h.point))])
        .collect()
}

/// Basis of `{M : M act_1(w) = act_2(w) M for every generator w of K}`.
pub fn hom_space(ms1: &ModelSpace, ms2: &ModelSpace) -> Result<Vec<CycloMatrix>> {
    if ms1.space() != ms2.space() {
        return invalid("models over different symplectic spaces");
    }
    let (d1, d2) = (ms1.dimension(), ms2.dimension());
    let unknowns = (d1 * d2) as u64;
    if unknowns > HOM_SPACE_UNKNOWN_LIMIT {
        return Err(Error::BoundExceeded {
            order: unknowns,
            bound: HOM_SPACE_UNKNOWN_LIMIT,
        });
    }
    let f = field(num_integer::lcm(ms1.field.order(), ms2.field.order()));
    let var = |i: usize, j: usize| i * d1 + j;
    let mut ech = Echelon::new(d1 * d2);
    let g = ms1.space().carrier();
    for k in 0..g.rank() {
        let w = HeisenbergElement::point(g.generator(k));
        let a1 = act(ms1, &w)?.matrix;
        let a2 = act(ms2, &w)?.matrix;
        for i in 0..d2 {
            for j in 0..d1 {
                // (M a1)[i][j] - (a2 M)[i][j]
                let mut row = std::collections::BTreeMap::new();
                for l in 0..d1 {
                    let c = a1.get(l, j);
                    if !c.is_zero() {
                        add_term(&mut row, var(i, l), c.embed(&f));
                    }
                }
                for l in 0..d2 {
                    let c = a2.get(i, l);
                    if !c.is_zero() {
                        add_term(&mut row, var(l, j), -c.embed(&f));
                    }
                }
                ech.insert(row);
            }
        }
    }
    Ok(ech
        .nullspace(&f)
        .into_iter()
        .map(|v| CycloMatrix::from_entries(&f, d2, d1, v))
        .collect())
}

fn add_term(row: &mut std::collections::BTreeMap<usize, Cyclo>, k: usize, c: Cyclo) {
    let v = match row.remove(&k) {
        Some(old) => &old + &c,
        None => c,
    };
    if !v.is_zero() {
        row.insert(k, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finabel::Group;
    use crate::heisenberg::heisenberg_mul;

    fn el(c: &[i64]) -> Element {
        Element::new(c.to_vec())
    }

    fn split(n: i64) -> SymplecticSpace {
        SymplecticSpace::standard(&Group::cyclic(n).unwrap())
    }

    fn pair(s: &SymplecticSpace, gens: &[&[i64]]) -> LagrangianPair {
        let g: Vec<Element> = gens.iter().map(|c| el(c)).collect();
        LagrangianPair::canonical(s, &Subgroup::generated(s.carrier(), &g).unwrap()).unwrap()
    }

    #[test]
    fn split_model_over_z3() {
        let s = split(3);
        let ms = ModelSpace::new(&pair(&s, &[&[1, 0]])).unwrap();
        assert_eq!(ms.dimension(), 3);
        assert_eq!(ms.coset_reps(), &[el(&[0, 0]), el(&[0, 1]), el(&[0, 2])]);
        assert!(ms.constraint_is_consistent());
        let f = ms.field().clone();
        let delta = vec![Cyclo::one(&f), Cyclo::zero(&f), Cyclo::zero(&f)];
        let full = ms.expand(&delta).unwrap();
        assert!(ms.satisfies_constraint(&full));
        let g = s.carrier();
        for x in g.elements() {
            let v = &full[g.index_of(&x)];
            if x.coords[1] == 0 {
                assert!(v.is_one());
            } else {
                assert!(v.is_zero());
            }
        }
        assert_eq!(ms.restrict(&full), delta);
    }

    #[test]
    fn action_is_multiplicative() {
        let s = split(4);
        let ms = ModelSpace::new(&pair(&s, &[&[1, 1]])).unwrap();
        let g = s.carrier();
        for a in g.elements() {
            for b in g.elements() {
                let (ha, hb) = (HeisenbergElement::point(a.clone()), HeisenbergElement::point(b.clone()));
                let lhs = act(&ms, &ha).unwrap().matrix.mul(&act(&ms, &hb).unwrap().matrix);
                let rhs = act(&ms, &heisenberg_mul(&s, &ha, &hb)).unwrap().matrix;
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn model_matrix_matches_full_action() {
        let s = split(2);
        let ms = ModelSpace::new(&pair(&s, &[&[1, 1]])).unwrap();
        let e = ms.expansion_matrix();
        for w in s.carrier().elements() {
            let h = HeisenbergElement::new(QZ::new(1, 4), w);
            let m = act(&ms, &h).unwrap().matrix;
            for j in 0..ms.dimension() {
                let full = act_on_function(&s, &h, &e.column(j));
                assert!(ms.satisfies_constraint(&full));
                assert_eq!(full, e.mul(&m).column(j));
            }
        }
    }

    #[test]
    fn central_elements_act_by_scalars() {
        let s = split(3);
        let ms = ModelSpace::new(&pair(&s, &[&[0, 1]])).unwrap();
        let t = QZ::new(1, 3);
        let m = act(&ms, &HeisenbergElement::central(t, s.carrier())).unwrap().matrix;
        assert_eq!(m.scalar_value(), Some(Cyclo::chi(m.field(), t)));
        let id = act(&ms, &HeisenbergElement::point(s.carrier().zero())).unwrap().matrix;
        assert_eq!(id, CycloMatrix::identity(ms.field(), 3));
    }

    #[test]
    fn schur_property() {
        let s = split(2);
        let a = ModelSpace::new(&pair(&s, &[&[1, 0]])).unwrap();
        let b = ModelSpace::new(&pair(&s, &[&[1, 1]])).unwrap();
        let basis = hom_space(&a, &a).unwrap();
        assert_eq!(basis.len(), 1);
        assert!(basis[0].scalar_value().is_some());
        assert_eq!(hom_space(&a, &b).unwrap().len(), 1);
        let other = ModelSpace::new(&pair(&split(3), &[&[1, 0]])).unwrap();
        assert!(hom_space(&a, &other).is_err());
    }

    #[test]
    fn pairs_reject_bad_input() {
        let s = split(4);
        let iso = Subgroup::generated(s.carrier(), &[el(&[2, 0])]).unwrap();
        assert!(LagrangianPair::canonical(&s, &iso).is_err());
        let y = Subgroup::generated(s.carrier(), &[el(&[1, 0])]).unwrap();
        let other = Subgroup::generated(s.carrier(), &[el(&[0, 1])]).unwrap();
        let alpha = s.quadratic_refinement(&other).unwrap();
        assert!(LagrangianPair::new(&s, &y, alpha).is_err());
    }
}
