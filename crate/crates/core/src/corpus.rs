//! Seeded instance generators shared by the acceptance suite and the
//! command-line self-test.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::finabel::{random_hom, Group, Hom};
use crate::forms::{enumerate_lagrangians, BilinearForm, QuadraticFunction, SymplecticSpace};
use crate::finabel::Subgroup;
use crate::quasisplit::{SectionData, SplitModel};
use crate::schrodinger::LagrangianPair;
use crate::Result;

pub const DEFAULT_SEED: u64 = 20_240_601;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Invariant factors of the base groups `B` used for standard spaces.
pub const BASE_FACTORS: &[&[i64]] = &[
    &[2],
    &[3],
    &[4],
    &[2, 2],
    &[5],
    &[6],
    &[7],
    &[8],
    &[2, 4],
    &[2, 2, 2],
    &[9],
    &[3, 3],
    &[10],
    &[11],
    &[12],
    &[2, 6],
    &[13],
    &[14],
    &[15],
    &[16],
    &[2, 8],
    &[4, 4],
];

pub fn group(factors: &[i64]) -> Group {
    Group::new(factors.to_vec()).expect("corpus factors are valid")
}

pub fn group_name(g: &Group) -> String {
    if g.is_trivial() {
        return "0".into();
    }
    g.factors().iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join("+")
}

/// Base groups with `|B|^2 <= max_carrier`.
pub fn base_groups(max_carrier: u64) -> Vec<Group> {
    BASE_FACTORS
        .iter()
        .map(|f| group(f))
        .filter(|b| b.order() * b.order() <= max_carrier)
        .collect()
}

/// Every finite abelian group of order at most 16, one per isomorphism class.
pub fn groups_up_to_16() -> Vec<Group> {
    let mut out = vec![Group::trivial()];
    for n in 2..=16 {
        for f in invariant_factorizations(n) {
            out.push(group(&f));
        }
    }
    out
}

fn invariant_factorizations(n: i64) -> Vec<Vec<i64>> {
    // chains d_1 | d_2 | ... with product n, d_1 > 1
    fn go(rest: i64, last: i64, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if rest == 1 {
            out.push(acc.iter().rev().copied().collect());
            return;
        }
        for d in 2..=rest {
            if rest % d == 0 && last % d == 0 {
                acc.push(d);
                go(rest / d, d, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    // build from the largest factor down so each step divides the previous
    for top in 2..=n {
        if n % top == 0 {
            let mut acc = vec![top];
            go(n / top, top, &mut acc, &mut out);
        }
    }
    out.retain(|f| f.windows(2).all(|w| w[1] % w[0] == 0));
    out.sort();
    out.dedup();
    out
}

/// A named symplectic space.
#[derive(Debug, Clone)]
pub struct NamedSpace {
    pub name: String,
    pub space: SymplecticSpace,
}

/// A random symmetric bilinear form on `g`.
pub fn random_symmetric(g: &Group, rng: &mut impl Rng) -> BilinearForm {
    let h = random_hom(g, &g.dual(), rng);
    let f = BilinearForm::from_hom(&h);
    f.add(&f.transpose()).expect("same groups")
}

/// Standard spaces `dual(B) + B` with `|B|^2 <= max_carrier`, each followed
/// by a copy whose polarization is shifted by a random symmetric form.
pub fn spaces(max_carrier: u64, seed: u64) -> Vec<NamedSpace> {
    let mut rng = rng(seed);
    let mut out = Vec::new();
    for b in base_groups(max_carrier) {
        let space = SymplecticSpace::standard(&b);
        let sym = random_symmetric(space.carrier(), &mut rng);
        let shifted = space
            .with_polarization(space.polarization().add(&sym).expect("same groups"))
            .expect("symmetric shifts keep the alternating form");
        out.push(NamedSpace {
            name: format!("std({})", group_name(&b)),
            space,
        });
        out.push(NamedSpace {
            name: format!("std({})+sym", group_name(&b)),
            space: shifted,
        });
    }
    out
}

/// For every lagrangian `Y`: the canonical refinement and one refinement
/// shifted by a random character.
pub fn lagrangian_pairs(space: &SymplecticSpace, rng: &mut impl Rng) -> Result<Vec<LagrangianPair>> {
    let elems: Vec<_> = space.carrier().elements().collect();
    let mut out = Vec::new();
    for y in enumerate_lagrangians(space, space.carrier().order())? {
        out.push(LagrangianPair::canonical(space, &y)?);
        let a = elems.choose(rng).expect("nonempty carrier");
        out.push(LagrangianPair::shifted(space, &y, a)?);
    }
    Ok(out)
}

/// Ordered pairs of lagrangian pairs for the intertwiner suite: all of
/// them when the carrier has order at most `exhaustive_below`, otherwise
/// `sample` random ones.
pub fn intertwiner_pairs(
    space: &SymplecticSpace,
    exhaustive_below: u64,
    sample: usize,
    rng: &mut impl Rng,
) -> Result<Vec<(LagrangianPair, LagrangianPair)>> {
    let pairs = lagrangian_pairs(space, rng)?;
    if space.carrier().order() <= exhaustive_below {
        Ok(pairs
            .iter()
            .flat_map(|a| pairs.iter().map(move |b| (a.clone(), b.clone())))
            .collect())
    } else {
        Ok((0..sample)
            .map(|_| {
                let a = pairs.choose(rng).expect("lagrangians exist");
                let b = pairs.choose(rng).expect("lagrangians exist");
                (a.clone(), b.clone())
            })
            .collect())
    }
}

/// A random quadratic function on the whole carrier with a symmetric polar form.
pub fn random_quadratic(g: &Group, rng: &mut impl Rng) -> Result<QuadraticFunction> {
    let polar = random_symmetric(g, rng);
    let q = QuadraticFunction::refine(&Subgroup::whole(g), &polar)?;
    let elems: Vec<_> = g.dual().elements().collect();
    q.add_character(elems.choose(rng).expect("nonempty"))
}

/// Split-model section data with a skew `psi` that restricts correctly:
/// `psi = psi_e + dual(p) (g - dual(g)) p` and `s(x) = (phi(x), n x)`.
pub struct SectionInstance {
    pub data: SectionData,
    pub psi: Hom,
}

pub fn random_section_instance(max_base: u64, rng: &mut impl Rng) -> Result<SectionInstance> {
    let bases: Vec<Group> = groups_up_to_16().into_iter().filter(|b| b.order() <= max_base).collect();
    let b = bases.choose(rng).expect("nonempty").clone();
    let model = SplitModel::new(&b);
    let phi = random_hom(&b, &b.dual(), rng);
    let n = rng.gen_range(1..=4);
    let g0 = random_hom(&b, &b.dual(), rng);
    let skew = g0.sub(&g0.dual())?;
    let p = model.base_projection();
    let psi = model
        .space()
        .alternating()
        .induced_hom()
        .add(&p.then(&skew)?.then(&p.dual())?)?;
    Ok(SectionInstance {
        data: SectionData::split(&b, &phi, n)?,
        psi,
    })
}
