use std::cmp::Ordering;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use super::group::{Element, Group};
use super::intmat::{hermite_with_moduli, smith, IntRow};
use crate::error::{invalid, Result};

/// Subgroup of a finite abelian group.
///
/// The canonical basis is the Hermite normal form of the preimage lattice
/// in `Z^k` (which always contains `d_i e_i`). Two subgroups are equal
/// exactly when their canonical bases agree, so equality, hashing and
/// ordering ignore the generators the subgroup was built from.
#[derive(Debug, Clone)]
pub struct Subgroup {
    ambient: Group,
    generators: Vec<Element>,
    canonical_basis: Vec<Vec<i64>>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.canonical_basis == other.canonical_basis
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.canonical_basis.hash(state);
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.ambient, self.order(), &self.canonical_basis).cmp(&(
            &other.ambient,
            other.order(),
            &other.canonical_basis,
        ))
    }
}

/// JSON form: `{"generators": [[...], ...]}`; the ambient group travels
/// separately with the document that embeds the subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupRepr {
    pub generators: Vec<Vec<i64>>,
}

impl Subgroup {
    pub fn generated(ambient: &Group, generators: &[Element]) -> Result<Self> {
        for g in generators {
            if !ambient.contains(g) {
                return invalid(format!("generator {g} does not lie in {ambient}"));
            }
        }
        let rows: Vec<Vec<i64>> = generators.iter().map(|g| g.coords.clone()).collect();
        let canonical_basis = hermite_with_moduli(&rows, ambient.factors());
        Ok(Subgroup {
            ambient: ambient.clone(),
            generators: generators.to_vec(),
            canonical_basis,
        })
    }

    pub fn from_repr(ambient: &Group, repr: &SubgroupRepr) -> Result<Self> {
        let gens = repr
            .generators
            .iter()
            .map(|c| ambient.element(c.clone()))
            .collect::<Result<Vec<_>>>()?;
        Subgroup::generated(ambient, &gens)
    }

    /// Canonical generators for serialization.
    pub fn to_repr(&self) -> SubgroupRepr {
        SubgroupRepr {
            generators: self
                .canonical_generators()
                .into_iter()
                .map(|e| e.coords)
                .collect(),
        }
    }

    pub fn trivial(ambient: &Group) -> Self {
        Subgroup::generated(ambient, &[]).expect("empty generator list")
    }

    pub fn whole(ambient: &Group) -> Self {
        let gens: Vec<Element> = (0..ambient.rank()).map(|i| ambient.generator(i)).collect();
        Subgroup::generated(ambient, &gens).expect("unit vectors lie in the group")
    }

    pub fn ambient(&self) -> &Group {
        &self.ambient
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn canonical_basis(&self) -> &[Vec<i64>] {
        &self.canonical_basis
    }

    /// Nonzero rows of the canonical basis, reduced into the ambient group.
    pub fn canonical_generators(&self) -> Vec<Element> {
        self.canonical_basis
            .iter()
            .map(|r| self.ambient.reduce(r))
            .filter(|e| !e.is_zero())
            .collect()
    }

    pub fn order(&self) -> u64 {
        self.ambient
            .factors()
            .iter()
            .zip(self.canonical_basis.iter().enumerate())
            .map(|(&d, (i, row))| (d / row[i]) as u64)
            .product()
    }

    pub fn index(&self) -> u64 {
        self.ambient.order() / self.order()
    }

    /// Membership by triangular reduction against the canonical basis.
    pub fn contains(&self, x: &Element) -> bool {
        if !self.ambient.contains(x) {
            return false;
        }
        let mut v: Vec<i128> = x.coords.iter().map(|&c| i128::from(c)).collect();
        for (i, row) in self.canonical_basis.iter().enumerate() {
            let pivot = i128::from(row[i]);
            if v[i] % pivot != 0 {
                return false;
            }
            let q = v[i] / pivot;
            for (t, &r) in v.iter_mut().zip(row) {
                *t -= q * i128::from(r);
            }
        }
        true
    }

    /// All elements, each exactly once: `sum c_i h_i` with
    /// `0 <= c_i < d_i / h_ii`.
    pub fn elements(&self) -> Vec<Element> {
        let counts: Vec<i64> = self
            .ambient
            .factors()
            .iter()
            .enumerate()
            .map(|(i, &d)| d / self.canonical_basis[i][i])
            .collect();
        let total = self.order() as usize;
        let k = self.ambient.rank();
        let mut out = Vec::with_capacity(total);
        let mut c = vec![0i64; k];
        for _ in 0..total {
            let mut acc = vec![0i64; k];
            for (i, &ci) in c.iter().enumerate() {
                for (a, &h) in acc.iter_mut().zip(&self.canonical_basis[i]) {
                    *a += ci * h;
                }
            }
            out.push(self.ambient.reduce(&acc));
            for i in (0..k).rev() {
                c[i] += 1;
                if c[i] < counts[i] {
                    break;
                }
                c[i] = 0;
            }
        }
        out.sort();
        out
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient
            && self.canonical_generators().iter().all(|g| other.contains(g))
    }

    /// Subgroup generated by `self` and `other`.
    pub fn join(&self, other: &Subgroup) -> Result<Subgroup> {
        if self.ambient != other.ambient {
            return invalid("subgroups of different groups");
        }
        let mut gens = self.canonical_generators();
        gens.extend(other.canonical_generators());
        Subgroup::generated(&self.ambient, &gens)
    }

    pub fn with_element(&self, x: &Element) -> Result<Subgroup> {
        let mut gens = self.canonical_generators();
        gens.push(x.clone());
        Subgroup::generated(&self.ambient, &gens)
    }

    pub fn intersection(&self, other: &Subgroup) -> Result<Subgroup> {
        if self.ambient != other.ambient {
            return invalid("subgroups of different groups");
        }
        let (small, big) = if self.order() <= other.order() {
            (self, other)
        } else {
            (other, self)
        };
        let common: Vec<Element> = small
            .elements()
            .into_iter()
            .filter(|x| big.contains(x))
            .collect();
        Subgroup::generated(&self.ambient, &common)
    }

    /// Invariant-factor basis: generators `g_j` of orders `q_j` with
    /// `q_1 | q_2 | ...` such that the subgroup is the direct sum of the
    /// cyclic groups they generate.
    pub fn basis(&self) -> Vec<(Element, i64)> {
        let k = self.ambient.rank();
        let h: Vec<IntRow> = self
            .canonical_basis
            .iter()
            .map(|r| r.iter().map(|&x| i128::from(x)).collect())
            .collect();
        // Rows of D = diag(d_i) written in the basis H (upper triangular).
        let mut c: Vec<IntRow> = Vec::with_capacity(k);
        for (i, &d) in self.ambient.factors().iter().enumerate() {
            let mut target = vec![0i128; k];
            target[i] = i128::from(d);
            let mut coeffs = vec![0i128; k];
            for j in 0..k {
                debug_assert_eq!(target[j] % h[j][j], 0);
                let q = target[j] / h[j][j];
                coeffs[j] = q;
                for (t, &hv) in target.iter_mut().zip(&h[j]) {
                    *t -= q * hv;
                }
            }
            c.push(coeffs);
        }
        if k == 0 {
            return Vec::new();
        }
        let s = smith(&c);
        let mut out = Vec::new();
        for (j, &q) in s.diagonal.iter().enumerate() {
            if q == 1 {
                continue;
            }
            let mut coords = vec![0i128; k];
            for (l, &w) in s.col_transform_inv[j].iter().enumerate() {
                for (t, &hv) in coords.iter_mut().zip(&h[l]) {
                    *t += w * hv;
                }
            }
            let coords: Vec<i64> = coords
                .iter()
                .zip(self.ambient.factors())
                .map(|(&x, &d)| x.rem_euclid(i128::from(d)) as i64)
                .collect();
            out.push((Element::new(coords), q as i64));
        }
        out
    }

    /// The subgroup as an abstract group together with the invariant-factor
    /// basis used to identify the two.
    pub fn abstract_group(&self) -> (Group, Vec<Element>) {
        let basis = self.basis();
        let group = Group::new(basis.iter().map(|(_, q)| *q).collect())
            .expect("smith diagonal forms a divisibility chain");
        (group, basis.into_iter().map(|(g, _)| g).collect())
    }
}

/// Every subgroup of `g`, canonical and duplicate free, sorted by order and
/// then by canonical basis.
pub fn enumerate_subgroups(g: &Group, bound: u64) -> Result<Vec<Subgroup>> {
    g.check_bound(bound)?;
    // One generator per cyclic subgroup suffices for the extension step.
    let mut cyclic_seen: HashSet<Subgroup> = HashSet::new();
    let mut cyclic_gens: Vec<Element> = Vec::new();
    for x in g.elements() {
        let c = Subgroup::generated(g, std::slice::from_ref(&x))?;
        if cyclic_seen.insert(c) {
            cyclic_gens.push(x);
        }
    }
    let trivial = Subgroup::trivial(g);
    let mut seen: HashSet<Subgroup> = HashSet::from([trivial.clone()]);
    let mut frontier = vec![trivial];
    while let Some(s) = frontier.pop() {
        for x in &cyclic_gens {
            if s.contains(x) {
                continue;
            }
            let t = s.with_element(x)?;
            if seen.insert(t.clone()) {
                frontier.push(t);
            }
        }
    }
    let mut all: Vec<Subgroup> = seen.into_iter().collect();
    all.sort();
    Ok(all)
}
