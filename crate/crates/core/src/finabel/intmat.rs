//! Integer row reduction used by the group layer: Hermite forms of
//! full-rank lattices, integer kernels and Smith forms with transforms.
//!
//! Everything here runs on `i128` with checked arithmetic. The groups we
//! handle are small, so coefficient growth stays far from the limits; an
//! overflow is reported as a panic with a pointer to the operation.

use num_integer::Integer;

pub(crate) type IntRow = Vec<i128>;

fn checked_axpy(target: &mut [i128], factor: i128, source: &[i128]) {
    for (t, s) in target.iter_mut().zip(source) {
        let prod = factor
            .checked_mul(*s)
            .expect("integer overflow in lattice reduction");
        *t = t
            .checked_sub(prod)
            .expect("integer overflow in lattice reduction");
    }
}

/// Hermite normal form of the lattice generated by `rows` together with
/// `moduli[i] * e_i`.
///
/// The result is the unique upper-triangular basis with positive diagonal
/// and entries above the diagonal reduced into `[0, pivot)`.
pub(crate) fn hermite_with_moduli(rows: &[Vec<i64>], moduli: &[i64]) -> Vec<Vec<i64>> {
    let k = moduli.len();
    let mut work: Vec<IntRow> = rows
        .iter()
        .map(|r| {
            r.iter()
                .zip(moduli)
                .map(|(&x, &d)| i128::from(x.rem_euclid(d)))
                .collect()
        })
        .collect();
    let mut basis: Vec<IntRow> = Vec::with_capacity(k);
    for col in 0..k {
        let mut modulus_row = vec![0i128; k];
        modulus_row[col] = i128::from(moduli[col]);
        work.push(modulus_row);
        // Euclid on column `col` among the remaining rows.
        loop {
            let mut best: Option<usize> = None;
            for (idx, row) in work.iter().enumerate() {
                if row[col] != 0 && best.map_or(true, |b| row[col].abs() < work[b][col].abs()) {
                    best = Some(idx);
                }
            }
            let Some(p) = best else {
                unreachable!("moduli rows keep the lattice full rank")
            };
            let pivot_row = work[p].clone();
            let mut done = true;
            for (idx, row) in work.iter_mut().enumerate() {
                if idx != p && row[col] != 0 {
                    let q = Integer::div_floor(&row[col], &pivot_row[col]);
                    checked_axpy(row, q, &pivot_row);
                    if row[col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                let mut pivot = work.swap_remove(p);
                if pivot[col] < 0 {
                    pivot.iter_mut().for_each(|x| *x = -*x);
                }
                basis.push(pivot);
                break;
            }
        }
        // The modulus rows of the columns to the right are still to be
        // added, so reducing modulo them keeps the lattice unchanged.
        for row in work.iter_mut().chain(basis.iter_mut()) {
            for j in col + 1..k {
                row[j] = row[j].rem_euclid(i128::from(moduli[j]));
            }
        }
        work.retain(|r| r.iter().any(|&x| x != 0));
    }
    for col in 0..k {
        let pivot_row = basis[col].clone();
        for r in 0..col {
            let q = Integer::div_floor(&basis[r][col], &pivot_row[col]);
            if q != 0 {
                checked_axpy(&mut basis[r], q, &pivot_row);
            }
        }
    }
    basis
        .into_iter()
        .map(|r| r.into_iter().map(|x| i64::try_from(x).expect("hermite entry fits i64")).collect())
        .collect()
}

/// Integer relations among `rows`: returns generators of the lattice of
/// coefficient vectors `c` with `sum c_i rows[i] = 0`.
pub(crate) fn integer_kernel(rows: &[IntRow]) -> Vec<IntRow> {
    let n = rows.len();
    if n == 0 {
        return Vec::new();
    }
    let width = rows[0].len();
    let mut work: Vec<(IntRow, IntRow)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut t = vec![0i128; n];
            t[i] = 1;
            (r.clone(), t)
        })
        .collect();
    let mut start = 0;
    for col in 0..width {
        loop {
            let mut best: Option<usize> = None;
            for idx in start..work.len() {
                let v = work[idx].0[col];
                if v != 0 && best.map_or(true, |b| v.abs() < work[b].0[col].abs()) {
                    best = Some(idx);
                }
            }
            let Some(p) = best else { break };
            let (pl, pt) = work[p].clone();
            let mut done = true;
            for idx in start..work.len() {
                if idx != p && work[idx].0[col] != 0 {
                    let q = Integer::div_floor(&work[idx].0[col], &pl[col]);
                    checked_axpy(&mut work[idx].0, q, &pl);
                    checked_axpy(&mut work[idx].1, q, &pt);
                    if work[idx].0[col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                work.swap(start, p);
                start += 1;
                break;
            }
        }
    }
    work.into_iter()
        .skip(start)
        .filter(|(l, _)| l.iter().all(|&x| x == 0))
        .map(|(_, t)| t)
        .collect()
}

/// Smith form of a square nonsingular integer matrix.
pub(crate) struct Smith {
    pub diagonal: Vec<i128>,
    /// Column transform `V` with `U A V = diag`.
    pub col_transform: Vec<IntRow>,
    /// Inverse of `V`.
    pub col_transform_inv: Vec<IntRow>,
}

pub(crate) fn smith(matrix: &[IntRow]) -> Smith {
    let n = matrix.len();
    let mut a: Vec<IntRow> = matrix.to_vec();
    let identity = |n: usize| -> Vec<IntRow> {
        (0..n)
            .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
            .collect()
    };
    let mut v = identity(n);
    let mut vinv = identity(n);

    // Column operation col_j -= q col_i, mirrored on V and V^{-1}.
    fn col_op(a: &mut [IntRow], v: &mut [IntRow], vinv: &mut [IntRow], i: usize, j: usize, q: i128) {
        for row in a.iter_mut().chain(v.iter_mut()) {
            let s = row[i];
            row[j] = row[j]
                .checked_sub(q.checked_mul(s).expect("smith overflow"))
                .expect("smith overflow");
        }
        let src = vinv[j].clone();
        for (t, s) in vinv[i].iter_mut().zip(&src) {
            *t = t
                .checked_add(q.checked_mul(*s).expect("smith overflow"))
                .expect("smith overflow");
        }
    }
    fn col_swap(a: &mut [IntRow], v: &mut [IntRow], vinv: &mut [IntRow], i: usize, j: usize) {
        for row in a.iter_mut().chain(v.iter_mut()) {
            row.swap(i, j);
        }
        vinv.swap(i, j);
    }

    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if a[i][j] != 0 && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                panic!("smith form requested for a singular matrix")
            };
            a.swap(t, pi);
            col_swap(&mut a, &mut v, &mut vinv, t, pj);
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..n {
                if a[i][t] != 0 {
                    let q = Integer::div_floor(&a[i][t], &p);
                    let src = a[t].clone();
                    checked_axpy(&mut a[i], q, &src);
                    if a[i][t] != 0 {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if a[t][j] != 0 {
                    let q = Integer::div_floor(&a[t][j], &p);
                    col_op(&mut a, &mut v, &mut vinv, t, j, q);
                    if a[t][j] != 0 {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    let src = a[i].clone();
                    checked_axpy(&mut a[t], -1, &src);
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            a[t].iter_mut().for_each(|x| *x = -*x);
        }
    }
    Smith {
        diagonal: (0..n).map(|i| a[i][i]).collect(),
        col_transform: v,
        col_transform_inv: vinv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matmul(a: &[IntRow], b: &[IntRow]) -> Vec<IntRow> {
        let m = b[0].len();
        a.iter()
            .map(|row| {
                (0..m)
                    .map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn hermite_of_two_torsion_in_z4_squared() {
        let h = hermite_with_moduli(&[vec![2, 0], vec![0, 2]], &[4, 4]);
        assert_eq!(h, vec![vec![2, 0], vec![0, 2]]);
        let h = hermite_with_moduli(&[vec![1, 3]], &[4, 4]);
        assert_eq!(h, vec![vec![1, 3], vec![0, 4]]);
        let h = hermite_with_moduli(&[vec![3, 1]], &[4, 4]);
        // <(3,1)> = <(1,3)>
        assert_eq!(h, vec![vec![1, 3], vec![0, 4]]);
    }

    #[test]
    fn smith_transform_is_consistent() {
        let a: Vec<IntRow> = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = smith(&a);
        assert_eq!(s.diagonal, vec![2, 6, 12]);
        let prod = matmul(&s.col_transform, &s.col_transform_inv);
        for (i, row) in prod.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert_eq!(x, i128::from(i == j));
            }
        }
    }

    #[test]
    fn kernel_of_dependent_rows() {
        let rows: Vec<IntRow> = vec![vec![2, 4], vec![1, 2], vec![0, 1]];
        let ker = integer_kernel(&rows);
        assert_eq!(ker.len(), 1);
        let c = &ker[0];
        for col in 0..2 {
            let s: i128 = (0..3).map(|i| c[i] * rows[i][col]).sum();
            assert_eq!(s, 0);
        }
    }
}
