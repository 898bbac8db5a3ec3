use serde::{Deserialize, Serialize};

use super::group::{Element, Group};
use super::intmat::{integer_kernel, IntRow};
use super::subgroup::Subgroup;
use crate::error::{invalid, Error, Result};

/// Homomorphism between finite abelian groups, stored as an integer matrix
/// with one row per target coordinate and one column per source coordinate.
///
/// Well-definedness requires `matrix[j][i] * d_i == 0 mod d'_j`; entries are
/// kept reduced mod `d'_j`, which makes equality of homs a matrix comparison.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "HomRepr", into = "HomRepr")]
pub struct Hom {
    source: Group,
    target: Group,
    matrix: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct HomRepr {
    source: Group,
    target: Group,
    matrix: Vec<Vec<i64>>,
}

impl TryFrom<HomRepr> for Hom {
    type Error = Error;
    fn try_from(r: HomRepr) -> Result<Self> {
        Hom::new(r.source, r.target, r.matrix)
    }
}

impl From<Hom> for HomRepr {
    fn from(h: Hom) -> Self {
        HomRepr {
            source: h.source,
            target: h.target,
            matrix: h.matrix,
        }
    }
}

impl Hom {
    pub fn new(source: Group, target: Group, matrix: Vec<Vec<i64>>) -> Result<Self> {
        if matrix.len() != target.rank() || matrix.iter().any(|r| r.len() != source.rank()) {
            return invalid(format!(
                "matrix shape does not match {} -> {}",
                source, target
            ));
        }
        let mut reduced = matrix;
        for (j, row) in reduced.iter_mut().enumerate() {
            let dt = target.factors()[j];
            for (i, entry) in row.iter_mut().enumerate() {
                let ds = source.factors()[i];
                *entry = entry.rem_euclid(dt);
                if (*entry as i128 * ds as i128) % dt as i128 != 0 {
                    return invalid(format!(
                        "entry ({j},{i}) = {entry} is not well defined: {entry}*{ds} is not divisible by {dt}"
                    ));
                }
            }
        }
        Ok(Hom {
            source,
            target,
            matrix: reduced,
        })
    }

    /// Builds the hom sending the `i`-th source generator to `images[i]`.
    pub fn from_images(source: Group, target: Group, images: &[Element]) -> Result<Self> {
        if images.len() != source.rank() {
            return invalid("one image per source generator is required");
        }
        let matrix = (0..target.rank())
            .map(|j| images.iter().map(|im| im.coords[j]).collect())
            .collect();
        Hom::new(source, target, matrix)
    }

    pub fn identity(g: &Group) -> Self {
        let n = g.rank();
        Hom {
            source: g.clone(),
            target: g.clone(),
            matrix: (0..n)
                .map(|j| (0..n).map(|i| i64::from(i == j)).collect())
                .collect(),
        }
    }

    pub fn zero(source: &Group, target: &Group) -> Self {
        Hom {
            source: source.clone(),
            target: target.clone(),
            matrix: vec![vec![0; source.rank()]; target.rank()],
        }
    }

    pub fn source(&self) -> &Group {
        &self.source
    }

    pub fn target(&self) -> &Group {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn apply(&self, x: &Element) -> Element {
        let coords: Vec<i64> = self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&x.coords)
                    .map(|(&m, &c)| m as i128 * c as i128)
                    .sum::<i128>() as i64
            })
            .collect();
        let coords = coords
            .iter()
            .zip(self.target.factors())
            .map(|(&c, &d)| c.rem_euclid(d))
            .collect();
        Element::new(coords)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Hom) -> Result<Hom> {
        if self.target != other.source {
            return invalid(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.source, self.target, other.source, other.target
            ));
        }
        let images: Vec<Element> = (0..self.source.rank())
            .map(|i| other.apply(&self.apply(&self.source.generator(i))))
            .collect();
        Hom::from_images(self.source.clone(), other.target.clone(), &images)
    }

    fn same_shape(&self, other: &Hom) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return invalid("homs have different source or target");
        }
        Ok(())
    }

    pub fn add(&self, other: &Hom) -> Result<Hom> {
        self.same_shape(other)?;
        let matrix = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Hom::new(self.source.clone(), self.target.clone(), matrix)
    }

    pub fn neg(&self) -> Hom {
        self.scale(-1)
    }

    pub fn sub(&self, other: &Hom) -> Result<Hom> {
        self.add(&other.neg())
    }

    pub fn scale(&self, n: i64) -> Hom {
        let matrix = self
            .matrix
            .iter()
            .zip(self.target.factors())
            .map(|(r, &d)| {
                r.iter()
                    .map(|&x| (x as i128 * n as i128).rem_euclid(d as i128) as i64)
                    .collect()
            })
            .collect();
        Hom::new(self.source.clone(), self.target.clone(), matrix)
            .expect("a multiple of a well-defined hom is well defined")
    }

    /// The dual hom `f^: dual(target) -> dual(source)` characterised by
    /// `<f^(a), x> = <a, f(x)>`. Its matrix is `M[j][i] * d_i / d'_j`.
    pub fn dual(&self) -> Hom {
        let ds = self.source.factors();
        let dt = self.target.factors();
        let matrix = (0..self.source.rank())
            .map(|i| {
                (0..self.target.rank())
                    .map(|j| {
                        let num = self.matrix[j][i] as i128 * ds[i] as i128;
                        (num / dt[j] as i128) as i64
                    })
                    .collect()
            })
            .collect();
        Hom::new(self.target.dual(), self.source.dual(), matrix)
            .expect("dual of a well-defined hom is well defined")
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|&x| x == 0)
    }

    /// Kernel and image. `|kernel| * |image| = |source|`.
    pub fn kernel_image(&self) -> (Subgroup, Subgroup) {
        (self.kernel(), self.image())
    }

    pub fn image(&self) -> Subgroup {
        let gens: Vec<Element> = (0..self.source.rank())
            .map(|i| self.apply(&self.source.generator(i)))
            .collect();
        Subgroup::generated(&self.target, &gens).expect("images lie in the target")
    }

    /// Kernel through integer relations: `x` lies in the kernel iff
    /// `M x + D' y = 0` for some integer `y`.
    pub fn kernel(&self) -> Subgroup {
        let k = self.source.rank();
        let m = self.target.rank();
        let mut rows: Vec<IntRow> = Vec::with_capacity(k + m);
        for i in 0..k {
            rows.push((0..m).map(|j| i128::from(self.matrix[j][i])).collect());
        }
        for j in 0..m {
            let mut r = vec![0i128; m];
            r[j] = i128::from(self.target.factors()[j]);
            rows.push(r);
        }
        let relations = integer_kernel(&rows);
        let gens: Vec<Element> = relations
            .iter()
            .map(|c| {
                let coords: Vec<i64> = c[..k]
                    .iter()
                    .zip(self.source.factors())
                    .map(|(&x, &d)| x.rem_euclid(i128::from(d)) as i64)
                    .collect();
                Element::new(coords)
            })
            .collect();
        Subgroup::generated(&self.source, &gens).expect("kernel elements lie in the source")
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().order() == 1
    }

    pub fn is_surjective(&self) -> bool {
        self.image().order() == self.target.order()
    }

    pub fn is_bijective(&self) -> bool {
        self.source.order() == self.target.order() && self.is_injective()
    }

    /// Inverse of a bijective hom, found by locating preimages of the
    /// target generators.
    pub fn inverse(&self) -> Result<Hom> {
        if !self.is_bijective() {
            return invalid("hom is not bijective");
        }
        let mut preimage = vec![None; self.target.order() as usize];
        for x in self.source.elements() {
            let y = self.apply(&x);
            preimage[self.target.index_of(&y)] = Some(x);
        }
        let images: Vec<Element> = (0..self.target.rank())
            .map(|j| {
                preimage[self.target.index_of(&self.target.generator(j))]
                    .clone()
                    .expect("bijective")
            })
            .collect();
        Hom::from_images(self.target.clone(), self.source.clone(), &images)
    }
}

/// Every homomorphism `source -> target`. Entry `(j, i)` ranges over the
/// multiples of `d'_j / gcd(d_i, d'_j)`.
pub fn all_homs(source: &Group, target: &Group) -> Vec<Hom> {
    let mut slots: Vec<(usize, usize, i64, i64)> = Vec::new();
    for (j, &dt) in target.factors().iter().enumerate() {
        for (i, &ds) in source.factors().iter().enumerate() {
            let step = dt / num_integer::gcd(ds, dt);
            slots.push((j, i, step, dt / step));
        }
    }
    let mut out = Vec::new();
    let mut counter = vec![0i64; slots.len()];
    loop {
        let mut matrix = vec![vec![0i64; source.rank()]; target.rank()];
        for (&(j, i, step, _), &c) in slots.iter().zip(&counter) {
            matrix[j][i] = c * step;
        }
        out.push(Hom::new(source.clone(), target.clone(), matrix).expect("entries chosen well-defined"));
        let mut pos = slots.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            counter[pos] += 1;
            if counter[pos] < slots[pos].3 {
                break;
            }
            counter[pos] = 0;
        }
    }
}

/// A uniformly random homomorphism `source -> target`.
pub fn random_hom(source: &Group, target: &Group, rng: &mut impl rand::Rng) -> Hom {
    let matrix = target
        .factors()
        .iter()
        .map(|&dt| {
            source
                .factors()
                .iter()
                .map(|&ds| {
                    let step = dt / num_integer::gcd(ds, dt);
                    rng.gen_range(0..dt / step) * step
                })
                .collect()
        })
        .collect();
    Hom::new(source.clone(), target.clone(), matrix).expect("entries chosen well-defined")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: &[i64], x: &[i64], d: &[i64]) -> num_rational::Ratio<i64> {
        a.iter()
            .zip(x)
            .zip(d)
            .map(|((&a, &x), &d)| num_rational::Ratio::new(a * x, d))
            .fold(num_rational::Ratio::from_integer(0), |s, t| s + t)
    }

    fn frac(r: num_rational::Ratio<i64>) -> num_rational::Ratio<i64> {
        r - r.floor()
    }

    #[test]
    fn dual_of_z2_into_z4() {
        let z2 = Group::cyclic(2).unwrap();
        let z4 = Group::cyclic(4).unwrap();
        let f = Hom::new(z2.clone(), z4.clone(), vec![vec![2]]).unwrap();
        let fd = f.dual();
        assert_eq!(fd.matrix(), &[vec![1]]);
        // <f^(a), x> = <a, f(x)> on all 8 pairs
        for a in z4.elements() {
            for x in z2.elements() {
                let lhs = pair(&fd.apply(&a).coords, &x.coords, z2.factors());
                let rhs = pair(&a.coords, &f.apply(&x).coords, z4.factors());
                assert_eq!(frac(lhs), frac(rhs));
            }
        }
    }

    #[test]
    fn malformed_matrix_rejected() {
        let z2 = Group::cyclic(2).unwrap();
        let z4 = Group::cyclic(4).unwrap();
        assert!(Hom::new(z2, z4, vec![vec![1]]).is_err());
    }

    #[test]
    fn kernel_image_of_doubling() {
        let z4 = Group::cyclic(4).unwrap();
        let f = Hom::identity(&z4).scale(2);
        let (k, i) = f.kernel_image();
        let two = Element::new(vec![2]);
        assert_eq!(k.elements(), vec![z4.zero(), two.clone()]);
        assert_eq!(i.elements(), vec![z4.zero(), two]);
        let id = Hom::identity(&z4);
        assert_eq!(id.kernel().order(), 1);
        assert_eq!(id.image().order(), 4);
        let zero = Hom::zero(&z4, &z4);
        assert_eq!(zero.kernel().order(), 4);
        assert_eq!(zero.image().order(), 1);
    }

    #[test]
    fn double_dual_of_identity() {
        let g = Group::new(vec![2, 4]).unwrap();
        let id = Hom::identity(&g);
        assert_eq!(id.dual().dual(), id);
        assert_eq!(id.dual(), Hom::identity(&g.dual()));
    }
}
