use std::collections::BTreeMap;

use super::bilinear::BilinearForm;
use super::qz::QZ;
use crate::error::{invalid, violated, Result};
use crate::finabel::{Element, Subgroup};

/// A function `q` on a subgroup `Y` with `q(0) = 0` and
/// `q(y + y') - q(y) - q(y') = b(y, y')` for a declared polar form `b`
/// (given on the ambient group, used on `Y x Y`).
///
/// Values are tabulated over the whole domain; domains handled here are
/// small enough for that.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticFunction {
    domain: Subgroup,
    polar: BilinearForm,
    values: BTreeMap<Element, QZ>,
}

impl QuadraticFunction {
    /// Canonical refinement of a polar form that is symmetric on `domain`.
    ///
    /// On an invariant-factor basis `g_j` of orders `q_j`,
    /// `q(sum c_j g_j) = sum_j c_j a_j + sum_j C(c_j, 2) b(g_j, g_j)
    /// + sum_{j<l} c_j c_l b(g_j, g_l)`, where `a_j = -(q_j - 1) b(g_j, g_j) / 2`
    /// makes the value at `q_j g_j = 0` vanish.
    pub fn refine(domain: &Subgroup, polar: &BilinearForm) -> Result<Self> {
        if !polar.is_square() || polar.left() != domain.ambient() {
            return invalid("polar form must live on the ambient group of the domain");
        }
        let basis = domain.basis();
        for (gi, _) in &basis {
            for (gj, _) in &basis {
                if polar.eval(gi, gj) != polar.eval(gj, gi) {
                    return invalid(format!(
                        "polar form is not symmetric on the domain: b({gi},{gj}) = {} but b({gj},{gi}) = {}",
                        polar.eval(gi, gj),
                        polar.eval(gj, gi)
                    ));
                }
            }
        }
        let ambient = domain.ambient();
        let diag: Vec<QZ> = basis.iter().map(|(g, _)| polar.eval(g, g)).collect();
        let linear: Vec<QZ> = basis
            .iter()
            .zip(&diag)
            .map(|((_, q), p)| QZ::new(-(q - 1) * p.num(), 2 * p.den()))
            .collect();
        let mut values = BTreeMap::new();
        let r = basis.len();
        let mut c = vec![0i64; r];
        loop {
            let mut point = ambient.zero();
            let mut value = QZ::ZERO;
            for j in 0..r {
                point = ambient.add(&point, &ambient.scale(c[j], &basis[j].0));
                value += c[j] * linear[j];
                value += (c[j] * (c[j] - 1) / 2) * diag[j];
                for l in j + 1..r {
                    value += (c[j] * c[l]) * polar.eval(&basis[j].0, &basis[l].0);
                }
            }
            values.insert(point, value);
            let mut j = r;
            loop {
                if j == 0 {
                    let q = QuadraticFunction {
                        domain: domain.clone(),
                        polar: polar.clone(),
                        values,
                    };
                    q.check_polarization_on_generators()?;
                    return Ok(q);
                }
                j -= 1;
                c[j] += 1;
                if c[j] < basis[j].1 {
                    break;
                }
                c[j] = 0;
            }
        }
    }

    /// Wraps an explicit value table, checking it against the polar form.
    pub fn from_table(domain: &Subgroup, polar: &BilinearForm, values: BTreeMap<Element, QZ>) -> Result<Self> {
        let elems = domain.elements();
        if values.len() != elems.len() || elems.iter().any(|e| !values.contains_key(e)) {
            return invalid("value table must list every element of the domain exactly once");
        }
        let q = QuadraticFunction {
            domain: domain.clone(),
            polar: polar.clone(),
            values,
        };
        if let Err(e) = q.check_polarization_on_generators() {
            return invalid(e.to_string());
        }
        Ok(q)
    }

    /// `q(0) = 0` plus the polarization identity against every basis
    /// generator. By induction on word length this gives the identity on
    /// all of `Y x Y`.
    fn check_polarization_on_generators(&self) -> Result<()> {
        let g = self.domain.ambient();
        if !self.eval(&g.zero()).is_zero() {
            return violated("quadratic function does not vanish at 0");
        }
        let gens = self.domain.canonical_generators();
        for y in self.values.keys() {
            for h in &gens {
                let lhs = self.eval(&g.add(y, h)) - self.eval(y) - self.eval(h);
                if lhs != self.polar.eval(y, h) {
                    return violated(format!(
                        "polarization fails at ({y},{h}): {lhs} != {}",
                        self.polar.eval(y, h)
                    ));
                }
            }
        }
        Ok(())
    }

    /// Polarization identity on every pair of the domain.
    pub fn polarization_holds_exhaustively(&self) -> bool {
        let g = self.domain.ambient();
        self.values.iter().all(|(y, qy)| {
            self.values.iter().all(|(y2, qy2)| {
                self.eval(&g.add(y, y2)) - *qy - *qy2 == self.polar.eval(y, y2)
            })
        })
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn polar(&self) -> &BilinearForm {
        &self.polar
    }

    pub fn values(&self) -> &BTreeMap<Element, QZ> {
        &self.values
    }

    /// Value at `y`; panics when `y` is outside the domain.
    pub fn eval(&self, y: &Element) -> QZ {
        *self
            .values
            .get(y)
            .unwrap_or_else(|| panic!("{y} is outside the domain of the quadratic function"))
    }

    pub fn try_eval(&self, y: &Element) -> Option<QZ> {
        self.values.get(y).copied()
    }

    /// `q + chi` for the character `chi(y) = <a, y>`, `a` in the dual of the
    /// ambient group. Every refinement of the same polar form arises this way.
    pub fn add_character(&self, a: &Element) -> Result<Self> {
        let ambient = self.domain.ambient();
        if !ambient.dual().contains(a) {
            return invalid(format!("{a} is not a character of {ambient}"));
        }
        let pairing = BilinearForm::duality(ambient);
        let values = self
            .values
            .iter()
            .map(|(y, v)| (y.clone(), *v + pairing.eval(a, y)))
            .collect();
        Ok(QuadraticFunction {
            domain: self.domain.clone(),
            polar: self.polar.clone(),
            values,
        })
    }

    pub fn neg(&self) -> Self {
        QuadraticFunction {
            domain: self.domain.clone(),
            polar: self.polar.neg(),
            values: self.values.iter().map(|(y, v)| (y.clone(), -*v)).collect(),
        }
    }

    /// Restriction to a subgroup of the domain.
    pub fn restrict(&self, sub: &Subgroup) -> Result<Self> {
        if !sub.is_subgroup_of(&self.domain) {
            return invalid("restriction target is not a subgroup of the domain");
        }
        let values = sub
            .elements()
            .into_iter()
            .map(|y| {
                let v = self.eval(&y);
                (y, v)
            })
            .collect();
        Ok(QuadraticFunction {
            domain: sub.clone(),
            polar: self.polar.clone(),
            values,
        })
    }

    /// Least common multiple of the value denominators.
    pub fn modulus(&self) -> i64 {
        self.values
            .values()
            .fold(1, |acc, v| num_integer::lcm(acc, v.den()))
    }
}
