//! Intertwiners between Schrodinger models of the same space.
//!
//! For pairs `(Y, alpha)` and `(Z, beta)` whose refinements agree on
//! `Y ∩ Z`, the operator
//! `(Rf)(x) = sum over z in reps(Z / Y∩Z) of chi(P(z, x) + beta(z)) f(z + x)`
//! maps `F(Y, alpha)` to `F(Z, beta)` and commutes with the Heisenberg
//! action.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::cyclo::{field, to_sparse, Cyclo, CycloMatrix, Echelon};
use crate::error::{invalid, violated, Error, Result};
use crate::finabel::{quotient, Element, Group, Subgroup};
use crate::forms::{BilinearForm, SymplecticSpace, QZ};
use crate::heisenberg::HeisenbergElement;
use crate::schrodinger::{act, hom_space, LagrangianPair, ModelOperator, ModelSpace};

/// Comparison of two refinements on the intersection of their domains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchReport {
    pub intersection: Subgroup,
    /// `gamma(u) = beta(u) - alpha(u)` for `u` in the intersection.
    pub gamma: BTreeMap<Element, QZ>,
    /// Kernel of `gamma`.
    pub h0: Subgroup,
    pub matched: bool,
}

fn same_space(p1: &LagrangianPair, p2: &LagrangianPair) -> Result<()> {
    if p1.space() != p2.space() {
        return invalid("lagrangian pairs live on different symplectic spaces");
    }
    Ok(())
}

pub fn mismatch_character(p1: &LagrangianPair, p2: &LagrangianPair) -> Result<MatchReport> {
    same_space(p1, p2)?;
    let g = p1.space().carrier();
    let inter = p1.subgroup().intersection(p2.subgroup())?;
    let gamma: BTreeMap<Element, QZ> = inter
        .elements()
        .into_iter()
        .map(|u| {
            let v = p2.alpha().eval(&u) - p1.alpha().eval(&u);
            (u, v)
        })
        .collect();
    for (a, ga) in &gamma {
        for (b, gb) in &gamma {
            if gamma[&g.add(a, b)] != *ga + *gb {
                return violated(format!("the mismatch is not additive at ({a}, {b})"));
            }
        }
    }
    let kernel: Vec<Element> = gamma.iter().filter(|(_, v)| v.is_zero()).map(|(u, _)| u.clone()).collect();
    let h0 = Subgroup::generated(g, &kernel)?;
    let matched = gamma.values().all(|v| v.is_zero());
    Ok(MatchReport {
        intersection: inter,
        gamma,
        h0,
        matched,
    })
}

/// Result of correcting the second pair so that it matches the first.
#[derive(Debug, Clone)]
pub struct MatchedPair {
    /// `(Z, beta - <a, .>)`.
    pub pair: LagrangianPair,
    /// Character `a` of `K` extending the mismatch.
    pub character: Element,
    /// `v` with `e(v, .) = <a, .>`.
    pub twist_point: Element,
}

/// Extends the mismatch character to all of `K` (lexicographically first
/// extension) and subtracts it from the second refinement.
pub fn match_pair(p1: &LagrangianPair, p2: &LagrangianPair) -> Result<MatchedPair> {
    let report = mismatch_character(p1, p2)?;
    let space = p1.space();
    let g = space.carrier();
    let dual = g.dual();
    let pairing = BilinearForm::duality(g);
    let gens = report.intersection.canonical_generators();
    let a = if report.matched {
        dual.zero()
    } else {
        dual.elements()
            .find(|a| gens.iter().all(|u| pairing.eval(a, u) == report.gamma[u]))
            .ok_or_else(|| Error::InvariantViolation("the mismatch character has no extension".into()))?
    };
    let psi = space.alternating().induced_hom();
    let v = psi.inverse()?.apply(&a);
    let beta = p2.alpha().add_character(&dual.neg(&a))?;
    Ok(MatchedPair {
        pair: p2.with_alpha(beta)?,
        character: a,
        twist_point: v,
    })
}

/// Coset representatives of `Z / H` inside `Z`, the first element of each
/// coset in the enumeration order of `Z`.
fn reps_mod(z: &Subgroup, h: &Subgroup) -> Result<Vec<Element>> {
    let q = quotient(z.ambient(), h)?;
    let mut seen = std::collections::HashSet::new();
    Ok(z.elements()
        .into_iter()
        .filter(|e| seen.insert(q.projection.apply(e)))
        .collect())
}

/// The summation operator `F(Y, alpha) -> F(Z, beta)`.
pub fn intertwiner(p1: &LagrangianPair, p2: &LagrangianPair) -> Result<ModelOperator> {
    let report = mismatch_character(p1, p2)?;
    if !report.matched {
        return invalid(
            "refinements disagree on the intersection; apply match_pair to the second pair first",
        );
    }
    let space = p1.space();
    let g = space.carrier();
    if g.is_trivial() {
        return invalid("degenerate space: the carrier is trivial");
    }
    let ms1 = ModelSpace::new(p1)?;
    let ms2 = ModelSpace::new(p2)?;
    let f = field(num_integer::lcm(ms1.field().order(), ms2.field().order()));
    let zs = reps_mod(p2.subgroup(), &report.h0)?;
    let mut m = CycloMatrix::zeros(&f, ms2.dimension(), ms1.dimension());
    for (i, x) in ms2.coset_reps().iter().enumerate() {
        for z in &zs {
            let (slot, ph) = ms1.phase(&g.add(z, x));
            let v = &Cyclo::chi(&f, space.p(z, x) + p2.alpha().eval(z) + ph) + m.get(i, slot);
            m.set(i, slot, v);
        }
    }
    Ok(ModelOperator {
        source: ms1,
        target: ms2,
        matrix: m,
    })
}

/// The exact identity behind well-definedness of the sum: for `h` in `H0`,
/// `z` in `Z`, `x` in `K`, shifting `z` by `h` leaves the summand unchanged
/// on every `f` in `F(Y, alpha)`.
pub fn summand_is_invariant(p1: &LagrangianPair, p2: &LagrangianPair) -> Result<bool> {
    let report = mismatch_character(p1, p2)?;
    let space = p1.space();
    let g = space.carrier();
    let (alpha, beta) = (p1.alpha(), p2.alpha());
    let zs = p2.subgroup().elements();
    for h in report.h0.elements() {
        for z in &zs {
            let zh = g.add(z, &h);
            for x in g.elements() {
                // f(h + (z + x)) = chi(-P(h, z + x) - alpha(h)) f(z + x)
                let shifted = space.p(&zh, &x) + beta.eval(&zh) - space.p(&h, &g.add(z, &x)) - alpha.eval(&h);
                if shifted != space.p(z, &x) + beta.eval(z) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `U = (multiply by chi<a, .>) after T_v`, an intertwiner from
/// `F(Z, beta)` to `F(Z, beta - <a, .>)`.
pub fn twist_operator(original: &LagrangianPair, matched: &MatchedPair) -> Result<ModelOperator> {
    let from = ModelSpace::new(original)?;
    let to = ModelSpace::new(&matched.pair)?;
    let g = original.space().carrier();
    let pairing = BilinearForm::duality(g);
    let f = field(num_integer::lcm(from.field().order(), to.field().order()));
    let d = from.dimension();
    let mut m = CycloMatrix::zeros(&f, d, d);
    let v = &matched.twist_point;
    for (i, r) in to.coset_reps().iter().enumerate() {
        let (slot, ph) = from.phase(&g.add(r, v));
        let t = pairing.eval(&matched.character, r) + original.space().p(r, v) + ph;
        m.set(i, slot, Cyclo::chi(&f, t));
    }
    Ok(ModelOperator {
        source: from,
        target: to,
        matrix: m,
    })
}

/// `c` with `intertwiner(p2, p1) after intertwiner(p1, p2) = c Id`.
pub fn compose_scalar(p1: &LagrangianPair, p2: &LagrangianPair) -> Result<Cyclo> {
    let r = intertwiner(p1, p2)?;
    let q = intertwiner(p2, p1)?;
    let prod = q.after(&r)?.matrix;
    match prod.scalar_value() {
        Some(c) if !c.is_zero() => Ok(c),
        _ => violated("the round trip of intertwiners is not a nonzero scalar"),
    }
}

/// `s` with `R31 R23 R12 = s Id`.
pub fn maslov_defect(p1: &LagrangianPair, p2: &LagrangianPair, p3: &LagrangianPair) -> Result<Cyclo> {
    let r12 = intertwiner(p1, p2)?;
    let r23 = intertwiner(p2, p3)?;
    let r31 = intertwiner(p3, p1)?;
    let prod = r31.after(&r23.after(&r12)?)?.matrix;
    match prod.scalar_value() {
        Some(s) if !s.is_zero() => Ok(s),
        _ => violated("the triple composition of intertwiners is not a nonzero scalar"),
    }
}

/// Split coordinates `(xi, x)` of an interleaved point of `dual(B) + B`.
pub fn split_coordinates(p: &Element) -> (Element, Element) {
    let xi = p.coords.iter().step_by(2).copied().collect();
    let x = p.coords.iter().skip(1).step_by(2).copied().collect();
    (Element::new(xi), Element::new(x))
}

/// The axes `dual(B) + 0` and `0 + B` of the standard space on `B`.
pub fn standard_axes(space: &SymplecticSpace) -> Result<(Subgroup, Subgroup)> {
    let k = space.carrier();
    let r = k.rank();
    let axis = |offset: usize| -> Result<Subgroup> {
        let gens: Vec<Element> = (offset..r).step_by(2).map(|i| k.generator(i)).collect();
        Subgroup::generated(k, &gens)
    };
    Ok((axis(0)?, axis(1)?))
}

/// The Fourier transform as the intertwiner from `(dual(B) + 0, 0)` to
/// `(0 + B, 0)` in the standard space. In model coordinates (source basis
/// indexed by `x` in `B`, target basis by `xi` in `dual(B)`) the matrix is
/// `[chi(-<xi, x>)]`; this is checked before returning.
pub fn fm_transform(b: &Group) -> Result<ModelOperator> {
    let space = SymplecticSpace::standard(b);
    let (y, z) = standard_axes(&space)?;
    let p1 = LagrangianPair::canonical(&space, &y)?;
    let p2 = LagrangianPair::canonical(&space, &z)?;
    let r = intertwiner(&p1, &p2)?;
    let table = character_table(b, &r.source, &r.target, -1);
    if r.matrix != table {
        return violated("the Fourier intertwiner differs from the character table");
    }
    Ok(r)
}

/// `[chi(sign <xi, x>)]` with rows indexed by the target representatives
/// `(xi, 0)` and columns by the source representatives `(0, x)`.
pub fn character_table(b: &Group, source: &ModelSpace, target: &ModelSpace, sign: i64) -> CycloMatrix {
    let pairing = BilinearForm::duality(b);
    let f = field(b.exponent().max(1) as u64);
    CycloMatrix::from_fn(&f, target.dimension(), source.dimension(), |i, j| {
        let (xi, _) = split_coordinates(&target.coset_reps()[i]);
        let (_, x) = split_coordinates(&source.coset_reps()[j]);
        Cyclo::chi(&f, sign * pairing.eval(&xi, &x))
    })
}

/// Everything checked about one intertwiner.
#[derive(Debug, Clone)]
pub struct IntertwinerReport {
    pub operator: ModelOperator,
    pub summand_invariant: bool,
    pub nonzero: bool,
    pub intertwines_generators: bool,
    pub determinant_nonzero: bool,
    pub oracle_dimension: usize,
    pub in_oracle_span: bool,
    /// `c` with `R^dagger R = c Id`, when that holds with `c` rational.
    pub unitarity_scale: Option<BigRational>,
}

impl IntertwinerReport {
    pub fn all_pass(&self) -> bool {
        self.summand_invariant
            && self.nonzero
            && self.intertwines_generators
            && self.determinant_nonzero
            && self.oracle_dimension == 1
            && self.in_oracle_span
            && self.unitarity_scale.as_ref().is_some_and(|c| c > &BigRational::from_integer(0.into()))
    }
}

pub fn verify_intertwiner(p1: &LagrangianPair, p2: &LagrangianPair) -> Result<IntertwinerReport> {
    let op = intertwiner(p1, p2)?;
    let g = p1.space().carrier();
    let mut intertwines = true;
    for k in 0..g.rank() {
        let w = HeisenbergElement::point(g.generator(k));
        let a1 = act(&op.source, &w)?.matrix;
        let a2 = act(&op.target, &w)?.matrix;
        if op.matrix.mul(&a1) != a2.mul(&op.matrix) {
            intertwines = false;
        }
    }
    let oracle = hom_space(&op.source, &op.target)?;
    let mut ech = Echelon::new(op.matrix.rows() * op.matrix.cols());
    for m in &oracle {
        ech.insert(to_sparse(m.entries()));
    }
    let in_span = ech.contains(to_sparse(op.matrix.entries()));
    let unitarity_scale = op
        .matrix
        .adjoint()
        .mul(&op.matrix)
        .scalar_value()
        .and_then(|c| c.as_rational());
    Ok(IntertwinerReport {
        summand_invariant: summand_is_invariant(p1, p2)?,
        nonzero: !op.matrix.is_zero(),
        intertwines_generators: intertwines,
        determinant_nonzero: !op.matrix.det().is_zero(),
        oracle_dimension: oracle.len(),
        in_oracle_span: in_span,
        unitarity_scale,
        operator: op,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(c: &[i64]) -> Element {
        Element::new(c.to_vec())
    }

    fn space(n: i64) -> SymplecticSpace {
        SymplecticSpace::standard(&Group::cyclic(n).unwrap())
    }

    fn sub(s: &SymplecticSpace, c: &[i64]) -> Subgroup {
        Subgroup::generated(s.carrier(), &[el(c)]).unwrap()
    }

    #[test]
    fn equal_pairs_give_identity() {
        let s = space(3);
        let p = LagrangianPair::canonical(&s, &sub(&s, &[1, 2])).unwrap();
        let r = intertwiner(&p, &p).unwrap();
        assert_eq!(r.matrix, CycloMatrix::identity(r.matrix.field(), 3));
        assert!(compose_scalar(&p, &p).unwrap().is_one());
        assert!(maslov_defect(&p, &p, &p).unwrap().is_one());
    }

    #[test]
    fn dft_over_z3() {
        let r = fm_transform(&Group::cyclic(3).unwrap()).unwrap();
        let f = r.matrix.field().clone();
        let delta = vec![Cyclo::one(&f), Cyclo::zero(&f), Cyclo::zero(&f)];
        assert!(r.matrix.apply(&delta).iter().all(Cyclo::is_one));
        let s = space(3);
        let (y, z) = standard_axes(&s).unwrap();
        let p1 = LagrangianPair::canonical(&s, &y).unwrap();
        let p2 = LagrangianPair::canonical(&s, &z).unwrap();
        assert_eq!(compose_scalar(&p1, &p2).unwrap(), Cyclo::from_int(&f, 3));
    }

    #[test]
    fn mismatch_and_correction() {
        let s = space(2);
        let y = sub(&s, &[1, 0]);
        let p1 = LagrangianPair::canonical(&s, &y).unwrap();
        assert!(p1.alpha().eval(&el(&[1, 0])).is_zero());
        let p2 = LagrangianPair::shifted(&s, &y, &el(&[1, 0])).unwrap();
        let report = mismatch_character(&p1, &p2).unwrap();
        assert_eq!(report.gamma[&el(&[1, 0])], QZ::new(1, 2));
        assert_eq!(report.h0.order(), 1);
        assert!(!report.matched);
        assert!(intertwiner(&p1, &p2).is_err());

        let m = match_pair(&p1, &p2).unwrap();
        assert_eq!(m.pair, p1);
        // e(v, .) = <a, .>
        let pairing = BilinearForm::duality(s.carrier());
        for x in s.carrier().elements() {
            assert_eq!(s.e(&m.twist_point, &x), pairing.eval(&m.character, &x));
        }
        assert!(mismatch_character(&p1, &m.pair).unwrap().matched);
        let again = match_pair(&p1, &m.pair).unwrap();
        assert_eq!(again.pair, m.pair);
        assert!(again.twist_point.is_zero());

        // U intertwines F(Z, beta) with F(Z, beta') for the same action
        let u = twist_operator(&p2, &m).unwrap();
        for w in s.carrier().elements() {
            let h = HeisenbergElement::point(w);
            let a = act(&u.source, &h).unwrap().matrix;
            let b = act(&u.target, &h).unwrap().matrix;
            assert_eq!(u.matrix.mul(&a), b.mul(&u.matrix));
        }
    }

    #[test]
    fn transverse_pair_in_v4_passes_all_checks() {
        let s = space(2);
        let p1 = LagrangianPair::canonical(&s, &sub(&s, &[1, 0])).unwrap();
        let p2 = LagrangianPair::canonical(&s, &sub(&s, &[1, 1])).unwrap();
        let rep = verify_intertwiner(&p1, &p2).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
    }
}
