use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_integer::lcm;

use super::field::{field, Cyclo, CycloField};

/// Dense matrix over `Q(zeta_N)`.
#[derive(Clone)]
pub struct CycloMatrix {
    field: Arc<CycloField>,
    rows: usize,
    cols: usize,
    entries: Vec<Cyclo>,
}

impl CycloMatrix {
    pub fn zeros(f: &Arc<CycloField>, rows: usize, cols: usize) -> Self {
        CycloMatrix {
            field: f.clone(),
            rows,
            cols,
            entries: vec![Cyclo::zero(f); rows * cols],
        }
    }

    pub fn identity(f: &Arc<CycloField>, n: usize) -> Self {
        Self::scalar(f, n, &Cyclo::one(f))
    }

    pub fn scalar(f: &Arc<CycloField>, n: usize, c: &Cyclo) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_fn(f: &Arc<CycloField>, rows: usize, cols: usize, mut g: impl FnMut(usize, usize) -> Cyclo) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(g(i, j).embed(f));
            }
        }
        CycloMatrix {
            field: f.clone(),
            rows,
            cols,
            entries,
        }
    }

    /// Row-major entries, `rows * cols` of them.
    pub fn from_entries(f: &Arc<CycloField>, rows: usize, cols: usize, entries: Vec<Cyclo>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count does not match the shape");
        let entries = entries.into_iter().map(|e| e.embed(f)).collect();
        CycloMatrix {
            field: f.clone(),
            rows,
            cols,
            entries,
        }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclo {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyclo) {
        self.entries[i * self.cols + j] = v.embed(&self.field);
    }

    pub fn entries(&self) -> &[Cyclo] {
        &self.entries
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<Cyclo> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn embed(&self, f: &Arc<CycloField>) -> Self {
        if Arc::ptr_eq(&self.field, f) {
            return self.clone();
        }
        CycloMatrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.embed(f)).collect(),
        }
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let f = field(lcm(a.field.order(), b.field.order()));
        (a.embed(&f), b.embed(&f))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix shapes do not compose");
        if self.field.order() != o.field.order() {
            let (a, b) = Self::common(self, o);
            return a.mul(&b);
        }
        let mut out = Self::zeros(&self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * o.cols + j;
                        out.entries[idx] = &out.entries[idx] + &(a * b);
                    }
                }
            }
        }
        out
    }

    fn zip(&self, o: &Self, f: impl Fn(&Cyclo, &Cyclo) -> Cyclo) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols, "matrix shapes differ");
        if self.field.order() != o.field.order() {
            let (a, b) = Self::common(self, o);
            return a.zip(&b, f);
        }
        CycloMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, c: &Cyclo) -> Self {
        let f = field(lcm(self.field.order(), c.field().order()));
        let c = c.embed(&f);
        CycloMatrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| &e.embed(&f) * &c).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Conjugate transpose under `zeta -> zeta^-1`.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Cyclo::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// `c` with `self = c * Id`, if `self` is a scalar matrix.
    pub fn scalar_value(&self) -> Option<Cyclo> {
        if !self.is_square() {
            return None;
        }
        let c = if self.rows == 0 {
            Cyclo::one(&self.field)
        } else {
            self.get(0, 0).clone()
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                let ok = if i == j { *e == c } else { e.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// `c` with `self = c * other`, when `other` is nonzero and such `c`
    /// exists.
    pub fn ratio_to(&self, other: &Self) -> Option<Cyclo> {
        if self.rows != other.rows || self.cols != other.cols {
            return None;
        }
        let k = other.entries.iter().position(|e| !e.is_zero())?;
        let c = &self.entries[k] * &other.entries[k].inv()?;
        if self.sub(&other.scale(&c)).is_zero() {
            Some(c)
        } else {
            None
        }
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Cyclo {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m: Vec<Vec<Cyclo>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut det = Cyclo::one(&self.field);
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return Cyclo::zero(&self.field);
            };
            if piv != col {
                m.swap(piv, col);
                det = -det;
            }
            det = &det * &m[col][col];
            let inv = m[col][col].inv().expect("nonzero pivot");
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] * &inv;
                for c in col..n {
                    let sub = &factor * &m[col][c];
                    m[r][c] = &m[r][c] - &sub;
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let f = &self.field;
        let mut m: Vec<Vec<Cyclo>> = (0..n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| if j < n { self.get(i, j).clone() } else if j - n == i { Cyclo::one(f) } else { Cyclo::zero(f) })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
            m.swap(piv, col);
            let inv = m[col][col].inv().expect("nonzero pivot");
            for c in 0..2 * n {
                m[col][c] = &m[col][c] * &inv;
            }
            for r in 0..n {
                if r == col || m[r][col].is_zero() {
                    continue;
                }
                let factor = m[r][col].clone();
                for c in 0..2 * n {
                    let sub = &factor * &m[col][c];
                    m[r][c] = &m[r][c] - &sub;
                }
            }
        }
        Some(Self::from_fn(f, n, n, |i, j| m[i][n + j].clone()))
    }

    pub fn apply(&self, v: &[Cyclo]) -> Vec<Cyclo> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Cyclo::zero(&self.field), |acc, j| {
                    let a = self.get(i, j);
                    if a.is_zero() || v[j].is_zero() {
                        acc
                    } else {
                        &acc + &(a * &v[j])
                    }
                })
            })
            .collect()
    }
}

impl PartialEq for CycloMatrix {
    fn eq(&self, o: &Self) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.entries == o.entries
    }
}

impl Eq for CycloMatrix {}

impl fmt::Debug for CycloMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CycloMatrix[{}] {}x{}", self.field.order(), self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Sparse vector keyed by column.
pub type SparseRow = BTreeMap<usize, Cyclo>;

/// Incrementally maintained reduced row echelon form.
#[derive(Debug, Clone)]
pub struct Echelon {
    ncols: usize,
    /// pivot column -> row normalized to 1 at the pivot and zero at every
    /// other pivot column
    rows: BTreeMap<usize, SparseRow>,
}

fn axpy(target: &mut SparseRow, c: &Cyclo, row: &SparseRow) {
    for (&k, v) in row {
        let prod = c * v;
        let entry = target.remove(&k);
        let sum = match entry {
            Some(old) => &old + &prod,
            None => prod,
        };
        if !sum.is_zero() {
            target.insert(k, sum);
        }
    }
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the current pivots.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        row.retain(|_, v| !v.is_zero());
        let pivots: Vec<usize> = row.keys().copied().filter(|k| self.rows.contains_key(k)).collect();
        for p in pivots {
            if let Some(c) = row.get(&p).cloned() {
                axpy(&mut row, &(-&c), &self.rows[&p]);
            }
        }
        row
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        let Some((&pivot, lead)) = row.iter().next() else {
            return false;
        };
        assert!(pivot < self.ncols, "column index out of range");
        let inv = lead.inv().expect("nonzero lead");
        let row: SparseRow = row.iter().map(|(&k, v)| (k, v * &inv)).collect();
        for other in self.rows.values_mut() {
            if let Some(c) = other.get(&pivot).cloned() {
                axpy(other, &(-&c), &row);
            }
        }
        self.rows.insert(pivot, row);
        true
    }

    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row).is_empty()
    }

    /// Basis of `{v : row . v = 0 for every inserted row}`, one vector per
    /// free column.
    pub fn nullspace(&self, f: &Arc<CycloField>) -> Vec<Vec<Cyclo>> {
        (0..self.ncols)
            .filter(|c| !self.rows.contains_key(c))
            .map(|free| {
                let mut v = vec![Cyclo::zero(f); self.ncols];
                v[free] = Cyclo::one(f);
                for (&p, row) in &self.rows {
                    if let Some(c) = row.get(&free) {
                        v[p] = (-c).embed(f);
                    }
                }
                v
            })
            .collect()
    }
}

pub fn to_sparse(v: &[Cyclo]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}
