use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of Q/Z: a reduced fraction `num/den` with `0 <= num < den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "QzRepr", into = "QzRepr")]
pub struct QZ {
    num: i64,
    den: i64,
}

#[derive(Serialize, Deserialize)]
struct QzRepr {
    num: i64,
    den: i64,
}

impl TryFrom<QzRepr> for QZ {
    type Error = Error;
    fn try_from(r: QzRepr) -> Result<Self> {
        if r.den <= 0 {
            return Err(Error::InvalidInput(format!("denominator {} must be positive", r.den)));
        }
        Ok(QZ::new(r.num, r.den))
    }
}

impl From<QZ> for QzRepr {
    fn from(q: QZ) -> Self {
        QzRepr { num: q.num, den: q.den }
    }
}

impl QZ {
    pub const ZERO: QZ = QZ { num: 0, den: 1 };

    /// `num/den mod 1`; panics on a nonpositive denominator.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den > 0, "QZ denominator must be positive");
        let n = num.rem_euclid(den);
        let g = n.gcd(&den);
        QZ {
            num: n / g,
            den: den / g,
        }
    }

    pub fn num(self) -> i64 {
        self.num
    }

    pub fn den(self) -> i64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// Order of the value in Q/Z.
    pub fn order(self) -> i64 {
        self.den
    }

    /// `self / n` for the representative in `[0,1)`. One of the `n` solutions
    /// of `n t = self`.
    pub fn div_int(self, n: i64) -> QZ {
        assert!(n > 0);
        QZ::new(self.num, self.den * n)
    }

    /// The residue `k` with `self = k / n`, if the denominator divides `n`.
    pub fn as_multiple_of(self, n: i64) -> Option<i64> {
        if n % self.den == 0 {
            Some(self.num * (n / self.den))
        } else {
            None
        }
    }
}

impl Add for QZ {
    type Output = QZ;
    fn add(self, o: QZ) -> QZ {
        let l = self.den.lcm(&o.den);
        QZ::new(self.num * (l / self.den) + o.num * (l / o.den), l)
    }
}

impl AddAssign for QZ {
    fn add_assign(&mut self, o: QZ) {
        *self = *self + o;
    }
}

impl Neg for QZ {
    type Output = QZ;
    fn neg(self) -> QZ {
        QZ::new(-self.num, self.den)
    }
}

impl Sub for QZ {
    type Output = QZ;
    fn sub(self, o: QZ) -> QZ {
        self + (-o)
    }
}

impl SubAssign for QZ {
    fn sub_assign(&mut self, o: QZ) {
        *self = *self - o;
    }
}

impl Mul<QZ> for i64 {
    type Output = QZ;
    fn mul(self, q: QZ) -> QZ {
        let n = (i128::from(self) * i128::from(q.num)).rem_euclid(i128::from(q.den));
        QZ::new(n as i64, q.den)
    }
}

impl std::iter::Sum for QZ {
    fn sum<I: Iterator<Item = QZ>>(iter: I) -> QZ {
        iter.fold(QZ::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for QZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_mod_one() {
        let half = QZ::new(1, 2);
        assert_eq!(half + half, QZ::ZERO);
        assert_eq!(-QZ::new(1, 3), QZ::new(2, 3));
        assert_eq!(QZ::new(5, 4), QZ::new(1, 4));
        assert_eq!(3 * QZ::new(1, 3), QZ::ZERO);
        assert_eq!(QZ::new(1, 2).div_int(2), QZ::new(1, 4));
        assert_eq!(QZ::new(-1, 6).den(), 6);
        assert_eq!(QZ::new(4, 6), QZ::new(2, 3));
    }
}
