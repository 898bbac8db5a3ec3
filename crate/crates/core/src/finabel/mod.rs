//! Finite abelian groups in invariant-factor form, their homomorphisms,
//! subgroups, quotients and duals.

mod group;
mod hom;
pub(crate) mod intmat;
mod subgroup;

pub use group::{Element, Group, DEFAULT_ENUMERATION_BOUND};
pub use hom::{all_homs, random_hom, Hom};
pub use subgroup::{enumerate_subgroups, Subgroup, SubgroupRepr};

use crate::error::{invalid, Result};
use intmat::{smith, IntRow};

/// A quotient `g / s` presented in invariant-factor form.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub group: Group,
    pub projection: Hom,
    /// One representative per fiber, the lexicographically smallest element
    /// of its coset, listed in lexicographic order.
    pub coset_reps: Vec<Element>,
    /// `rep_slot[q]` is the position in `coset_reps` of the representative
    /// over the quotient element with enumeration index `q`.
    rep_slot: Vec<usize>,
}

impl Quotient {
    /// Splits `x` as `rep + offset` with `offset` in the subgroup; returns
    /// the slot of `rep` and the offset.
    pub fn decompose(&self, x: &Element) -> (usize, Element) {
        let slot = self.slot_of(x);
        let ambient = self.projection.source();
        (slot, ambient.sub(x, &self.coset_reps[slot]))
    }

    pub fn slot_of(&self, x: &Element) -> usize {
        self.rep_slot[self.group.index_of(&self.projection.apply(x))]
    }
}

/// Quotient by a subgroup, via the Smith form of the subgroup lattice.
pub fn quotient(g: &Group, s: &Subgroup) -> Result<Quotient> {
    if s.ambient() != g {
        return invalid(format!("subgroup does not live in {g}"));
    }
    let k = g.rank();
    let h: Vec<IntRow> = s
        .canonical_basis()
        .iter()
        .map(|r| r.iter().map(|&x| i128::from(x)).collect())
        .collect();
    if k == 0 {
        let projection = Hom::new(g.clone(), Group::trivial(), Vec::new())?;
        return finish_quotient(g, projection);
    }
    // x -> x V sends Z^k / L onto Z^k / diag(s), so the projection reads off
    // the columns of V with nontrivial Smith entries.
    let sm = smith(&h);
    let cols: Vec<usize> = (0..k).filter(|&j| sm.diagonal[j] != 1).collect();
    let factors: Vec<i64> = cols.iter().map(|&j| sm.diagonal[j] as i64).collect();
    let v = sm.col_transform;
    let matrix: Vec<Vec<i64>> = cols
        .iter()
        .zip(&factors)
        .map(|(&j, &sj)| {
            (0..k)
                .map(|i| v[i][j].rem_euclid(i128::from(sj)) as i64)
                .collect()
        })
        .collect();
    let projection = Hom::new(g.clone(), Group::new(factors)?, matrix)?;
    finish_quotient(g, projection)
}

fn finish_quotient(g: &Group, projection: Hom) -> Result<Quotient> {
    let qgroup = projection.target().clone();
    let n = qgroup.order() as usize;
    let mut rep_slot = vec![usize::MAX; n];
    let mut coset_reps = Vec::with_capacity(n);
    for x in g.elements() {
        let q = qgroup.index_of(&projection.apply(&x));
        if rep_slot[q] == usize::MAX {
            rep_slot[q] = coset_reps.len();
            coset_reps.push(x);
            if coset_reps.len() == n {
                break;
            }
        }
    }
    Ok(Quotient {
        group: qgroup,
        projection,
        coset_reps,
        rep_slot,
    })
}

/// Decides whether `g -> g/s` splits. When it does, returns a section
/// `g/s -> g`. Each quotient generator `u_j` of order `q_j` needs a lift of
/// order dividing `q_j`; the fibers are searched exhaustively.
pub fn is_direct_summand(g: &Group, s: &Subgroup) -> Result<Option<(Quotient, Hom)>> {
    let q = quotient(g, s)?;
    let sub_elems = s.elements();
    let mut images = Vec::with_capacity(q.group.rank());
    for j in 0..q.group.rank() {
        let gen = q.group.generator(j);
        let order = q.group.factors()[j];
        let slot = q.rep_slot[q.group.index_of(&gen)];
        let base = &q.coset_reps[slot];
        let lift = sub_elems
            .iter()
            .map(|t| g.add(base, t))
            .find(|x| g.scale(order, x).is_zero());
        match lift {
            Some(x) => images.push(x),
            None => return Ok(None),
        }
    }
    let section = Hom::from_images(q.group.clone(), g.clone(), &images)?;
    Ok(Some((q, section)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(c: &[i64]) -> Element {
        Element::new(c.to_vec())
    }

    #[test]
    fn quotient_of_z4_by_two() {
        let z4 = Group::cyclic(4).unwrap();
        let s = Subgroup::generated(&z4, &[el(&[2])]).unwrap();
        let q = quotient(&z4, &s).unwrap();
        assert_eq!(q.group, Group::cyclic(2).unwrap());
        assert_eq!(q.coset_reps, vec![el(&[0]), el(&[1])]);
        assert!(q.projection.is_surjective());
        assert_eq!(q.projection.kernel(), s);
    }

    #[test]
    fn degenerate_quotients() {
        let g = Group::new(vec![2, 4]).unwrap();
        let q = quotient(&g, &Subgroup::trivial(&g)).unwrap();
        assert_eq!(q.group, g);
        assert_eq!(q.coset_reps.len(), 8);
        let q = quotient(&g, &Subgroup::whole(&g)).unwrap();
        assert!(q.group.is_trivial());
        assert_eq!(q.coset_reps, vec![g.zero()]);
    }

    #[test]
    fn two_torsion_of_z4_squared_is_not_a_summand() {
        let g = Group::new(vec![4, 4]).unwrap();
        let s = Subgroup::generated(&g, &[el(&[2, 0]), el(&[0, 2])]).unwrap();
        assert!(is_direct_summand(&g, &s).unwrap().is_none());
    }

    #[test]
    fn z2_summand_of_z2_z4() {
        let g = Group::new(vec![2, 4]).unwrap();
        let s = Subgroup::generated(&g, &[el(&[1, 0])]).unwrap();
        let (q, sigma) = is_direct_summand(&g, &s).unwrap().expect("splits");
        let round = sigma.then(&q.projection).unwrap();
        assert_eq!(round, Hom::identity(&q.group));
        let (q, sigma) = is_direct_summand(&g, &Subgroup::whole(&g)).unwrap().expect("splits");
        assert!(q.group.is_trivial());
        assert!(sigma.is_zero());
    }
}
