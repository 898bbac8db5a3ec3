use std::collections::{BTreeSet, HashSet};

use super::bilinear::BilinearForm;
use super::qz::QZ;
use super::quadratic::QuadraticFunction;
use crate::error::{invalid, violated, Result};
use crate::finabel::{Element, Group, Hom, Subgroup};

/// A finite group with a polarization `P` whose antisymmetrization
/// `e = P - P^T` is nondegenerate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticSpace {
    carrier: Group,
    polarization: BilinearForm,
    alternating: BilinearForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubgroupClass {
    Generic,
    Isotropic,
    Lagrangian,
}

impl SubgroupClass {
    pub fn is_isotropic(self) -> bool {
        self != SubgroupClass::Generic
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SubgroupClass::Generic => "generic",
            SubgroupClass::Isotropic => "isotropic",
            SubgroupClass::Lagrangian => "lagrangian",
        }
    }
}

impl SymplecticSpace {
    pub fn new(polarization: BilinearForm) -> Result<Self> {
        let alternating = polarization.derived_alternating()?;
        if !alternating.is_nondegenerate() {
            return invalid("the alternating form P - P^T is degenerate");
        }
        Ok(SymplecticSpace {
            carrier: polarization.left().clone(),
            polarization,
            alternating,
        })
    }

    /// Space whose polarization is the strictly upper triangular part of a
    /// nondegenerate alternating form `e`, so that `P - P^T = e`.
    pub fn from_alternating(e: &BilinearForm) -> Result<Self> {
        if !e.is_alternating() {
            return invalid("form is not alternating");
        }
        let n = e.left().rank();
        let gram = (0..n)
            .map(|i| (0..n).map(|j| if i < j { e.gram()[i][j] } else { QZ::ZERO }).collect())
            .collect();
        Self::new(BilinearForm::new(e.left().clone(), e.left().clone(), gram)?)
    }

    /// `dual(B) + B` with `P((xi, x), (xi', x')) = <xi, x'>`. Coordinates are
    /// interleaved as `(xi_1, x_1, xi_2, x_2, ...)` so that the factor list
    /// `[d_1, d_1, d_2, d_2, ...]` stays in invariant-factor form.
    pub fn standard(b: &Group) -> Self {
        let k = b.rank();
        let mut factors = Vec::with_capacity(2 * k);
        for &d in b.factors() {
            factors.extend([d, d]);
        }
        let carrier = Group::new(factors).expect("doubled invariant factors stay divisible");
        let mut gram = vec![vec![QZ::ZERO; 2 * k]; 2 * k];
        for (i, &d) in b.factors().iter().enumerate() {
            gram[2 * i][2 * i + 1] = QZ::new(1, d);
        }
        let p = BilinearForm::new(carrier.clone(), carrier, gram).expect("consistent gram");
        Self::new(p).expect("the standard pairing is nondegenerate")
    }

    pub fn carrier(&self) -> &Group {
        &self.carrier
    }

    pub fn polarization(&self) -> &BilinearForm {
        &self.polarization
    }

    pub fn alternating(&self) -> &BilinearForm {
        &self.alternating
    }

    /// Same carrier, new polarization; the alternating form may change.
    pub fn with_polarization(&self, p: BilinearForm) -> Result<Self> {
        if p.left() != &self.carrier {
            return invalid("polarization lives on another group");
        }
        Self::new(p)
    }

    pub fn p(&self, x: &Element, y: &Element) -> QZ {
        self.polarization.eval(x, y)
    }

    pub fn e(&self, x: &Element, y: &Element) -> QZ {
        self.alternating.eval(x, y)
    }

    fn check_subgroup(&self, y: &Subgroup) -> Result<()> {
        if y.ambient() != &self.carrier {
            return invalid(format!("subgroup does not live in the carrier {}", self.carrier));
        }
        Ok(())
    }

    /// `Y^perp = {x : e(x, y) = 0 for all y in Y}`, the kernel of
    /// `x -> (N e(x, y_g))_g` into `(Z/N)^r`, `N` the exponent.
    pub fn perp(&self, y: &Subgroup) -> Result<Subgroup> {
        self.check_subgroup(y)?;
        let gens = y.canonical_generators();
        let n = self.carrier.exponent();
        if gens.is_empty() || n == 1 {
            return Ok(Subgroup::whole(&self.carrier));
        }
        let target = Group::new(vec![n; gens.len()])?;
        let matrix = gens
            .iter()
            .map(|yg| {
                (0..self.carrier.rank())
                    .map(|i| {
                        self.e(&self.carrier.generator(i), yg)
                            .as_multiple_of(n)
                            .expect("pairing values are killed by the exponent")
                    })
                    .collect()
            })
            .collect();
        Ok(Hom::new(self.carrier.clone(), target, matrix)?.kernel())
    }

    pub fn is_isotropic(&self, y: &Subgroup) -> bool {
        let gens = y.canonical_generators();
        gens.iter().all(|a| gens.iter().all(|b| self.e(a, b).is_zero()))
    }

    /// Classifies `Y` by both characterizations (vanishing of `e` on `Y`
    /// with the order count, and comparison with `Y^perp`) and fails if
    /// they disagree.
    pub fn classify_subgroup(&self, y: &Subgroup) -> Result<SubgroupClass> {
        let perp = self.perp(y)?;
        let iso_by_values = self.is_isotropic(y);
        let iso_by_perp = y.is_subgroup_of(&perp);
        if iso_by_values != iso_by_perp {
            return violated(format!(
                "isotropy tests disagree: e|YxY = 0 is {iso_by_values}, Y in Y^perp is {iso_by_perp}"
            ));
        }
        let order = u128::from(y.order());
        let lag_by_order = iso_by_values && order * order == u128::from(self.carrier.order());
        let lag_by_perp = *y == perp;
        if lag_by_order != lag_by_perp {
            return violated(format!(
                "lagrangian tests disagree: order count gives {lag_by_order}, Y = Y^perp gives {lag_by_perp}"
            ));
        }
        Ok(if lag_by_order {
            SubgroupClass::Lagrangian
        } else if iso_by_values {
            SubgroupClass::Isotropic
        } else {
            SubgroupClass::Generic
        })
    }

    pub fn is_lagrangian(&self, y: &Subgroup) -> Result<bool> {
        Ok(self.classify_subgroup(y)? == SubgroupClass::Lagrangian)
    }

    /// Canonical refinement of `P|YxY` for isotropic `Y`.
    pub fn quadratic_refinement(&self, y: &Subgroup) -> Result<QuadraticFunction> {
        if !self.classify_subgroup(y)?.is_isotropic() {
            return invalid("subgroup is not isotropic, so P is not symmetric on it");
        }
        QuadraticFunction::refine(y, &self.polarization)
    }
}

/// All lagrangian subgroups, sorted by canonical form.
///
/// Grows isotropic subgroups one element of `S^perp` at a time. Every
/// maximal isotropic subgroup of a nondegenerate space is lagrangian, since
/// `S^perp / S` carries a nondegenerate alternating form and any nonzero
/// element of it extends `S`.
pub fn enumerate_lagrangians(space: &SymplecticSpace, bound: u64) -> Result<Vec<Subgroup>> {
    let k = space.carrier();
    k.check_bound(bound)?;
    let target = u128::from(k.order());
    let mut seen: HashSet<Subgroup> = HashSet::new();
    let mut found: BTreeSet<Subgroup> = BTreeSet::new();
    let mut stack = vec![Subgroup::trivial(k)];
    seen.insert(Subgroup::trivial(k));
    while let Some(s) = stack.pop() {
        let ord = u128::from(s.order());
        if ord * ord == target {
            found.insert(s);
            continue;
        }
        for x in space.perp(&s)?.elements() {
            if s.contains(&x) {
                continue;
            }
            let bigger = s.with_element(&x)?;
            if seen.insert(bigger.clone()) {
                stack.push(bigger);
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// A lagrangian meeting both `Y` and `Z` trivially, if one exists.
pub fn find_transverse_lagrangian(
    space: &SymplecticSpace,
    y: &Subgroup,
    z: &Subgroup,
    bound: u64,
) -> Result<Option<Subgroup>> {
    for (name, s) in [("Y", y), ("Z", z)] {
        if !space.is_lagrangian(s)? {
            return invalid(format!("{name} is not lagrangian"));
        }
    }
    for t in enumerate_lagrangians(space, bound)? {
        if t.intersection(y)?.order() == 1 && t.intersection(z)?.order() == 1 {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finabel::{enumerate_subgroups, DEFAULT_ENUMERATION_BOUND};

    fn standard(n: i64) -> SymplecticSpace {
        SymplecticSpace::standard(&Group::cyclic(n).unwrap())
    }

    fn sub(space: &SymplecticSpace, gens: &[&[i64]]) -> Subgroup {
        let g: Vec<Element> = gens.iter().map(|c| Element::new(c.to_vec())).collect();
        Subgroup::generated(space.carrier(), &g).unwrap()
    }

    fn filtered(space: &SymplecticSpace) -> Vec<Subgroup> {
        enumerate_subgroups(space.carrier(), DEFAULT_ENUMERATION_BOUND)
            .unwrap()
            .into_iter()
            .filter(|s| space.is_lagrangian(s).unwrap())
            .collect()
    }

    #[test]
    fn lagrangian_counts_match_subgroup_filter() {
        for (n, count) in [(2, 3), (3, 4), (4, 7)] {
            let s = standard(n);
            let lag = enumerate_lagrangians(&s, DEFAULT_ENUMERATION_BOUND).unwrap();
            assert_eq!(lag.len(), count, "(Z/{n})^2");
            assert_eq!(lag, filtered(&s));
        }
    }

    #[test]
    fn classification_examples() {
        let s2 = standard(2);
        assert_eq!(s2.classify_subgroup(&sub(&s2, &[&[1, 0]])).unwrap(), SubgroupClass::Lagrangian);
        let s4 = standard(4);
        assert_eq!(s4.classify_subgroup(&sub(&s4, &[&[2, 0]])).unwrap(), SubgroupClass::Isotropic);
        let whole = Subgroup::whole(s4.carrier());
        assert_eq!(s4.classify_subgroup(&whole).unwrap(), SubgroupClass::Generic);
    }

    #[test]
    fn standard_form_is_nondegenerate_and_skew_dual() {
        let s = standard(4);
        let psi = s.alternating().induced_hom();
        assert!(psi.is_bijective());
        assert_eq!(psi.dual(), psi.neg());
        assert!(standard(2).alternating().induced_hom().is_bijective());
    }

    #[test]
    fn transverse_search() {
        let s2 = standard(2);
        let y = sub(&s2, &[&[1, 0]]);
        let z = sub(&s2, &[&[0, 1]]);
        let t = find_transverse_lagrangian(&s2, &y, &z, 64).unwrap().unwrap();
        assert_eq!(t, sub(&s2, &[&[1, 1]]));
        let t = find_transverse_lagrangian(&s2, &y, &y, 64).unwrap().unwrap();
        assert!(t == z || t == sub(&s2, &[&[1, 1]]));

        let s4 = standard(4);
        let torsion = sub(&s4, &[&[2, 0], &[0, 2]]);
        for z in enumerate_lagrangians(&s4, 64).unwrap() {
            assert_eq!(find_transverse_lagrangian(&s4, &torsion, &z, 64).unwrap(), None);
        }
    }

    #[test]
    fn refinement_requires_isotropy() {
        let s = standard(3);
        assert!(s.quadratic_refinement(&Subgroup::whole(s.carrier())).is_err());
        let q = s.quadratic_refinement(&sub(&s, &[&[1, 1]])).unwrap();
        assert!(q.polarization_holds_exhaustively());
    }

    #[test]
    fn perp_of_trivial_is_everything() {
        let s = standard(4);
        assert_eq!(s.perp(&Subgroup::trivial(s.carrier())).unwrap(), Subgroup::whole(s.carrier()));
        assert_eq!(s.perp(&Subgroup::whole(s.carrier())).unwrap().order(), 1);
    }
}
