use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::forms::QZ;

/// The field `Q(zeta_N)` in the power basis `1, zeta, ..., zeta^(phi(N)-1)`.
#[derive(Debug)]
pub struct CycloField {
    order: u64,
    degree: usize,
    /// `powers[k]` is `zeta^k` reduced modulo the cyclotomic polynomial.
    powers: Vec<Vec<i64>>,
}

impl PartialEq for CycloField {
    fn eq(&self, o: &Self) -> bool {
        self.order == o.order
    }
}

impl Eq for CycloField {}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // both monic, lowest degree first
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

fn cyclotomic_polynomial(n: u64, memo: &mut HashMap<u64, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let q = cyclotomic_polynomial(d, memo);
            p = poly_div_exact(&p, &q);
        }
    }
    memo.insert(n, p.clone());
    p
}

impl CycloField {
    fn build(order: u64) -> Self {
        let phi = cyclotomic_polynomial(order, &mut HashMap::new());
        let degree = phi.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by zeta and reduce the overflow with the monic relation
            let top = cur[degree - 1];
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            for i in 0..degree {
                cur[i] -= top * phi[i];
            }
        }
        CycloField {
            order,
            degree,
            powers,
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

/// Shared handle to `Q(zeta_N)`; fields are built once per process.
pub fn field(order: u64) -> Arc<CycloField> {
    assert!(order >= 1, "cyclotomic order must be positive");
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloField>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("field cache poisoned");
    guard
        .entry(order)
        .or_insert_with(|| Arc::new(CycloField::build(order)))
        .clone()
}

/// An element of `Q(zeta_N)`.
#[derive(Clone)]
pub struct Cyclo {
    field: Arc<CycloField>,
    coeffs: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Cyclo {
    pub fn zero(f: &Arc<CycloField>) -> Self {
        Cyclo {
            field: f.clone(),
            coeffs: vec![BigRational::zero(); f.degree],
        }
    }

    pub fn one(f: &Arc<CycloField>) -> Self {
        Self::from_rational(f, BigRational::one())
    }

    pub fn from_int(f: &Arc<CycloField>, n: i64) -> Self {
        Self::from_rational(f, rat(n))
    }

    pub fn from_rational(f: &Arc<CycloField>, q: BigRational) -> Self {
        let mut z = Self::zero(f);
        z.coeffs[0] = q;
        z
    }

    /// `zeta^k`.
    pub fn root(f: &Arc<CycloField>, k: i64) -> Self {
        let idx = k.rem_euclid(f.order as i64) as usize;
        Cyclo {
            field: f.clone(),
            coeffs: f.powers[idx].iter().map(|&c| rat(c)).collect(),
        }
    }

    /// `chi(t) = exp(2 pi i t)`; the denominator of `t` must divide `N`.
    pub fn chi(f: &Arc<CycloField>, t: QZ) -> Self {
        let k = t
            .as_multiple_of(f.order as i64)
            .unwrap_or_else(|| panic!("chi({t}) does not lie in Q(zeta_{})", f.order));
        Self::root(f, k)
    }

    /// Build from power-basis coefficients (fewer than `phi(N)` are padded).
    pub fn from_coeffs(f: &Arc<CycloField>, coeffs: Vec<BigRational>) -> Self {
        assert!(coeffs.len() <= f.degree, "too many coefficients for Q(zeta_{})", f.order);
        let mut c = coeffs;
        c.resize(f.degree, BigRational::zero());
        Cyclo {
            field: f.clone(),
            coeffs: c,
        }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational number, if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn is_positive_rational(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_positive())
    }

    /// Image in `Q(zeta_M)` for `N | M`.
    pub fn embed(&self, target: &Arc<CycloField>) -> Self {
        if Arc::ptr_eq(&self.field, target) {
            return self.clone();
        }
        assert!(
            target.order % self.field.order == 0,
            "Q(zeta_{}) does not embed in Q(zeta_{})",
            self.field.order,
            target.order
        );
        let step = target.order / self.field.order;
        let mut out = Cyclo::zero(target);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.add_scaled_power(c, (i as u64 * step) as usize);
            }
        }
        out
    }

    fn add_scaled_power(&mut self, c: &BigRational, k: usize) {
        for (dst, &p) in self.coeffs.iter_mut().zip(&self.field.powers[k]) {
            if p != 0 {
                *dst += c * rat(p);
            }
        }
    }

    /// Lifts two operands into a common field.
    fn common(a: &Cyclo, b: &Cyclo) -> (Cyclo, Cyclo) {
        let n = num_integer::lcm(a.field.order, b.field.order);
        let f = field(n);
        (a.embed(&f), b.embed(&f))
    }

    /// Complex conjugation, `zeta^k -> zeta^(-k)`.
    pub fn conj(&self) -> Self {
        let n = self.field.order as usize;
        let mut out = Cyclo::zero(&self.field);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.add_scaled_power(c, (n - i) % n);
            }
        }
        out
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Cyclo {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplicative inverse, by solving `self * x = 1` over `Q`.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Cyclo::from_rational(&self.field, q.recip()));
        }
        let d = self.field.degree;
        // column j holds self * zeta^j
        let cols: Vec<Cyclo> = (0..d).map(|j| self * &Cyclo::root(&self.field, j as i64)).collect();
        let mut m: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut row: Vec<BigRational> = cols.iter().map(|c| c.coeffs[i].clone()).collect();
                row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, piv);
            let inv = m[col][col].recip();
            for x in m[col].iter_mut() {
                *x *= &inv;
            }
            for r in 0..d {
                if r != col && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    for c in col..=d {
                        let sub = &factor * &m[col][c];
                        m[r][c] -= sub;
                    }
                }
            }
        }
        Some(Cyclo::from_coeffs(
            &self.field,
            m.into_iter().map(|row| row[d].clone()).collect(),
        ))
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        if self.field.order == other.field.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Cyclo::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclo {}

impl<'a> Add<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn add(self, o: &Cyclo) -> Cyclo {
        if self.field.order != o.field.order {
            let (a, b) = Cyclo::common(self, o);
            return &a + &b;
        }
        Cyclo {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl<'a> Sub<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn sub(self, o: &Cyclo) -> Cyclo {
        self + &(-o)
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }
}

impl<'a> Mul<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn mul(self, o: &Cyclo) -> Cyclo {
        if self.field.order != o.field.order {
            let (a, b) = Cyclo::common(self, o);
            return &a * &b;
        }
        let f = &self.field;
        let n = f.order as usize;
        // convolve in Z[x]/(x^N - 1), then reduce
        let mut raw: Vec<BigRational> = vec![BigRational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[(i + j) % n] += a * b;
                }
            }
        }
        let mut out = Cyclo::zero(f);
        for (k, c) in raw.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < f.degree {
                out.coeffs[k] += c;
            } else {
                out.add_scaled_power(&c, k);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $m(self, o: Cyclo) -> Cyclo {
                (&self).$m(&o)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -&self
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                _ => write!(f, "({c})z{}^{k}", self.field.order)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo[{}]({self})", self.field.order)
    }
}
