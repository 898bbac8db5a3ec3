use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Default ceiling on the order of groups handed to exhaustive routines.
pub const DEFAULT_ENUMERATION_BOUND: u64 = 4096;

/// A point of a finite abelian group: one coordinate per invariant factor,
/// each reduced into `[0, d_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element {
    pub coords: Vec<i64>,
}

impl Element {
    pub fn new(coords: Vec<i64>) -> Self {
        Element { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Finite abelian group `Z/d_1 + ... + Z/d_k` in invariant-factor form,
/// `d_1 | d_2 | ... | d_k`, every `d_i >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "GroupRepr", into = "GroupRepr")]
pub struct Group {
    factors: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    factors: Vec<i64>,
}

impl TryFrom<GroupRepr> for Group {
    type Error = Error;
    fn try_from(r: GroupRepr) -> Result<Self> {
        Group::new(r.factors)
    }
}

impl From<Group> for GroupRepr {
    fn from(g: Group) -> Self {
        GroupRepr { factors: g.factors }
    }
}

impl Group {
    pub fn new(factors: Vec<i64>) -> Result<Self> {
        if let Some(d) = factors.iter().find(|&&d| d < 2) {
            return invalid(format!("invariant factor {d} is below 2"));
        }
        if let Some(w) = factors.windows(2).find(|w| w[1] % w[0] != 0) {
            return invalid(format!(
                "invariant factors must form a divisibility chain, {} does not divide {}",
                w[0], w[1]
            ));
        }
        let mut order: i64 = 1;
        for &d in &factors {
            order = order
                .checked_mul(d)
                .ok_or_else(|| Error::InvalidInput("group order overflows".into()))?;
        }
        Ok(Group { factors })
    }

    pub fn trivial() -> Self {
        Group { factors: Vec::new() }
    }

    pub fn cyclic(n: i64) -> Result<Self> {
        if n == 1 {
            Ok(Self::trivial())
        } else {
            Self::new(vec![n])
        }
    }

    pub fn factors(&self) -> &[i64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().map(|&d| d as u64).product()
    }

    /// Largest element order; 1 for the trivial group.
    pub fn exponent(&self) -> i64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// The character group. Characters are coordinate vectors `a` paired
    /// with points through `sum a_i x_i / d_i mod 1`, so the dual carries
    /// the same invariant factors.
    pub fn dual(&self) -> Group {
        self.clone()
    }

    pub fn zero(&self) -> Element {
        Element::new(vec![0; self.rank()])
    }

    /// Reduces arbitrary integer coordinates into canonical range.
    pub fn reduce(&self, coords: &[i64]) -> Element {
        debug_assert_eq!(coords.len(), self.rank());
        Element::new(
            coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, &d)| c.rem_euclid(d))
                .collect(),
        )
    }

    /// Parses a coordinate vector, rejecting out-of-range entries.
    pub fn element(&self, coords: Vec<i64>) -> Result<Element> {
        if coords.len() != self.rank() {
            return invalid(format!(
                "element {:?} has {} coordinates, group has rank {}",
                coords,
                coords.len(),
                self.rank()
            ));
        }
        let e = Element::new(coords);
        if !self.contains(&e) {
            return invalid(format!("element {e} is not reduced for factors {:?}", self.factors));
        }
        Ok(e)
    }

    pub fn contains(&self, x: &Element) -> bool {
        x.coords.len() == self.rank()
            && x.coords
                .iter()
                .zip(&self.factors)
                .all(|(&c, &d)| (0..d).contains(&c))
    }

    pub fn add(&self, x: &Element, y: &Element) -> Element {
        Element::new(
            x.coords
                .iter()
                .zip(&y.coords)
                .zip(&self.factors)
                .map(|((&a, &b), &d)| (a + b) % d)
                .collect(),
        )
    }

    pub fn neg(&self, x: &Element) -> Element {
        Element::new(
            x.coords
                .iter()
                .zip(&self.factors)
                .map(|(&a, &d)| (d - a) % d)
                .collect(),
        )
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Element {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, n: i64, x: &Element) -> Element {
        Element::new(
            x.coords
                .iter()
                .zip(&self.factors)
                .map(|(&a, &d)| ((a as i128 * n as i128).rem_euclid(d as i128)) as i64)
                .collect(),
        )
    }

    /// Order of `x` as a group element.
    pub fn element_order(&self, x: &Element) -> i64 {
        x.coords
            .iter()
            .zip(&self.factors)
            .map(|(&a, &d)| d / num_integer::gcd(a, d))
            .fold(1, num_integer::lcm)
    }

    /// Unit vector along the `i`-th invariant factor.
    pub fn generator(&self, i: usize) -> Element {
        let mut c = vec![0; self.rank()];
        c[i] = 1;
        Element::new(c)
    }

    /// Position of `x` in the lexicographic enumeration of [`Group::elements`].
    pub fn index_of(&self, x: &Element) -> usize {
        x.coords
            .iter()
            .zip(&self.factors)
            .fold(0usize, |acc, (&c, &d)| acc * d as usize + c as usize)
    }

    pub fn element_at(&self, mut index: usize) -> Element {
        let mut coords = vec![0; self.rank()];
        for (slot, &d) in coords.iter_mut().zip(&self.factors).rev() {
            *slot = (index % d as usize) as i64;
            index /= d as usize;
        }
        Element::new(coords)
    }

    /// All elements, lexicographic with the first coordinate most significant.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order() as usize).map(move |i| self.element_at(i))
    }

    pub fn check_bound(&self, bound: u64) -> Result<()> {
        if self.order() > bound {
            Err(Error::BoundExceeded {
                order: self.order(),
                bound,
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        for (i, d) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "Z/{d}")?;
        }
        Ok(())
    }
}
