use serde::{Deserialize, Serialize};

use super::qz::QZ;
use crate::error::{invalid, Result};
use crate::finabel::{Element, Group, Hom};

/// Q/Z-valued bilinear pairing `left x right -> Q/Z`, given by its values
/// on pairs of generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BilinearForm {
    left: Group,
    right: Group,
    gram: Vec<Vec<QZ>>,
}

/// JSON form of a gram matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GramRepr(pub Vec<Vec<QZ>>);

impl BilinearForm {
    /// Checks `d_i * gram[i][j] = 0` and `d'_j * gram[i][j] = 0`, the
    /// conditions for the gram matrix to extend biadditively.
    pub fn new(left: Group, right: Group, gram: Vec<Vec<QZ>>) -> Result<Self> {
        if gram.len() != left.rank() || gram.iter().any(|r| r.len() != right.rank()) {
            return invalid(format!("gram matrix shape does not match {left} x {right}"));
        }
        for (i, row) in gram.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let (di, dj) = (left.factors()[i], right.factors()[j]);
                if !(di * *v).is_zero() || !(dj * *v).is_zero() {
                    return invalid(format!(
                        "gram entry ({i},{j}) = {v} is not killed by both {di} and {dj}"
                    ));
                }
            }
        }
        Ok(BilinearForm { left, right, gram })
    }

    pub fn zero(left: &Group, right: &Group) -> Self {
        BilinearForm {
            left: left.clone(),
            right: right.clone(),
            gram: vec![vec![QZ::ZERO; right.rank()]; left.rank()],
        }
    }

    /// The evaluation pairing `dual(g) x g -> Q/Z`, `<a,x> = sum a_i x_i / d_i`.
    pub fn duality(g: &Group) -> Self {
        let n = g.rank();
        let gram = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { QZ::new(1, g.factors()[i]) } else { QZ::ZERO })
                    .collect()
            })
            .collect();
        BilinearForm {
            left: g.dual(),
            right: g.clone(),
            gram,
        }
    }

    /// Form with `B(x, y) = <psi(x), y>` for `psi: left -> dual(right)`.
    pub fn from_hom(psi: &Hom) -> Self {
        let right = psi.target().dual();
        let left = psi.source().clone();
        let gram = (0..left.rank())
            .map(|i| {
                let image = psi.apply(&left.generator(i));
                (0..right.rank())
                    .map(|j| QZ::new(image.coords[j], right.factors()[j]))
                    .collect()
            })
            .collect();
        BilinearForm { left, right, gram }
    }

    pub fn left(&self) -> &Group {
        &self.left
    }

    pub fn right(&self) -> &Group {
        &self.right
    }

    pub fn gram(&self) -> &[Vec<QZ>] {
        &self.gram
    }

    pub fn is_square(&self) -> bool {
        self.left == self.right
    }

    pub fn eval(&self, x: &Element, y: &Element) -> QZ {
        let mut acc = QZ::ZERO;
        for (i, &xi) in x.coords.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.coords.iter().enumerate() {
                if yj != 0 {
                    acc += (xi * yj) * self.gram[i][j];
                }
            }
        }
        acc
    }

    pub fn transpose(&self) -> Self {
        let gram = (0..self.right.rank())
            .map(|j| (0..self.left.rank()).map(|i| self.gram[i][j]).collect())
            .collect();
        BilinearForm {
            left: self.right.clone(),
            right: self.left.clone(),
            gram,
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(QZ, QZ) -> QZ) -> Result<Self> {
        if self.left != other.left || self.right != other.right {
            return invalid("forms live on different groups");
        }
        let gram = self
            .gram
            .iter()
            .zip(&other.gram)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect())
            .collect();
        Ok(BilinearForm {
            left: self.left.clone(),
            right: self.right.clone(),
            gram,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        BilinearForm {
            left: self.left.clone(),
            right: self.right.clone(),
            gram: self.gram.iter().map(|r| r.iter().map(|&v| -v).collect()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.gram.iter().flatten().all(|v| v.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && self.transpose() == *self
    }

    /// `B(x,x) = 0` for every `x`: zero diagonal and skew off-diagonal.
    pub fn is_alternating(&self) -> bool {
        self.is_square()
            && (0..self.left.rank()).all(|i| {
                self.gram[i][i].is_zero()
                    && (0..i).all(|j| (self.gram[i][j] + self.gram[j][i]).is_zero())
            })
    }

    /// `e(x, y) = P(x, y) - P(y, x)`.
    pub fn derived_alternating(&self) -> Result<Self> {
        if !self.is_square() {
            return invalid("antisymmetrization needs a form on a single group");
        }
        self.sub(&self.transpose())
    }

    /// `psi_B: left -> dual(right)` with `<psi_B(x), y> = B(x, y)`.
    pub fn induced_hom(&self) -> Hom {
        let matrix = (0..self.right.rank())
            .map(|j| {
                let dj = self.right.factors()[j];
                (0..self.left.rank())
                    .map(|i| self.gram[i][j].as_multiple_of(dj).expect("consistent gram entry"))
                    .collect()
            })
            .collect();
        Hom::new(self.left.clone(), self.right.dual(), matrix)
            .expect("a consistent form induces a well-defined hom")
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.induced_hom().is_bijective()
    }

    /// `(x, y) -> B(f(x), g(y))`.
    pub fn pullback(&self, f: &Hom, g: &Hom) -> Result<Self> {
        if f.target() != &self.left || g.target() != &self.right {
            return invalid("pullback maps do not land in the form's groups");
        }
        let (a, b) = (f.source(), g.source());
        let gram = (0..a.rank())
            .map(|i| {
                let fx = f.apply(&a.generator(i));
                (0..b.rank())
                    .map(|j| self.eval(&fx, &g.apply(&b.generator(j))))
                    .collect()
            })
            .collect();
        BilinearForm::new(a.clone(), b.clone(), gram)
    }

    /// Exhaustive biadditivity check on all triples; meant for small groups.
    pub fn check_biadditive(&self) -> bool {
        let left: Vec<Element> = self.left.elements().collect();
        let right: Vec<Element> = self.right.elements().collect();
        for x in &left {
            for x2 in &left {
                let s = self.left.add(x, x2);
                for y in &right {
                    if self.eval(&s, y) != self.eval(x, y) + self.eval(x2, y) {
                        return false;
                    }
                }
            }
        }
        for y in &right {
            for y2 in &right {
                let s = self.right.add(y, y2);
                for x in &left {
                    if self.eval(x, &s) != self.eval(x, y) + self.eval(x, y2) {
                        return false;
                    }
                }
            }
        }
        true
    }
}
