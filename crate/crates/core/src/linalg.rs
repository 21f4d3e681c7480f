//! Small dense matrices over certified reals, plus exact rational rank
//! tracking for integer vectors. Everything here targets desk-scale
//! dimensions; elimination is straightforward Gauss-Jordan. Rational inputs
//! stay exact end to end because `CertReal` arithmetic folds rationals.

use crate::error::{LatticeError, NumError};
use crate::numerics::{rat_cmp, CertReal, Rat};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

/// Dense square matrix of certified reals, row-major.
#[derive(Clone, Debug)]
pub struct SqMat {
    pub n: usize,
    pub rows: Vec<Vec<CertReal>>,
}

impl SqMat {
    pub fn from_rows(rows: Vec<Vec<CertReal>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "not square");
        SqMat { n, rows }
    }

    pub fn from_rational_rows(rows: &[Vec<Rat>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|x| CertReal::from_rat(x.clone())).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { CertReal::one() } else { CertReal::zero() })
                    .collect()
            })
            .collect();
        SqMat { n, rows }
    }

    pub fn at(&self, i: usize, j: usize) -> &CertReal {
        &self.rows[i][j]
    }

    pub fn col(&self, j: usize) -> Vec<CertReal> {
        (0..self.n).map(|i| self.rows[i][j].clone()).collect()
    }

    pub fn transpose(&self) -> SqMat {
        SqMat::from_rows((0..self.n).map(|j| self.col(j)).collect())
    }

    pub fn mul_int_vec(&self, z: &[BigInt]) -> Vec<CertReal> {
        assert_eq!(z.len(), self.n);
        self.rows
            .iter()
            .map(|row| {
                let mut acc = CertReal::zero();
                for (a, zi) in row.iter().zip(z) {
                    if !zi.is_zero() {
                        acc = acc + a.clone() * CertReal::from(zi);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul_mat(&self, o: &SqMat) -> SqMat {
        assert_eq!(self.n, o.n);
        let rows = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        let mut acc = CertReal::zero();
                        for k in 0..self.n {
                            acc = acc + self.rows[i][k].clone() * o.rows[k][j].clone();
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        SqMat { n: self.n, rows }
    }

    /// All entries exactly rational?
    pub fn as_rational(&self) -> Option<Vec<Vec<Rat>>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| x.as_rat().cloned()).collect())
            .collect()
    }

    /// Gauss-Jordan inverse together with the determinant. Pivots must be
    /// certifiably nonzero; a column with no such pivot reports `Singular`.
    pub fn invert_with_det(&self) -> Result<(SqMat, CertReal), LatticeError> {
        let n = self.n;
        let mut a = self.rows.clone();
        let mut inv = SqMat::identity(n).rows;
        let mut det = CertReal::one();
        let mut sign_flips = 0usize;
        for col in 0..n {
            let mut pivot = None;
            for r in col..n {
                match a[r][col].sign() {
                    Ok(0) => continue,
                    Ok(_) => {
                        pivot = Some(r);
                        break;
                    }
                    Err(NumError::PrecisionExhausted { .. }) => continue,
                    Err(e) => return Err(e.into()),
                }
            }
            let p = pivot.ok_or(LatticeError::Singular { col })?;
            if p != col {
                a.swap(p, col);
                inv.swap(p, col);
                sign_flips += 1;
            }
            let piv = a[col][col].clone();
            det = det * piv.clone();
            for j in 0..n {
                a[col][j] = a[col][j].clone() / piv.clone();
                inv[col][j] = inv[col][j].clone() / piv.clone();
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r][col].clone();
                if factor.is_zero_rat() {
                    continue;
                }
                for j in 0..n {
                    a[r][j] = a[r][j].clone() - factor.clone() * a[col][j].clone();
                    inv[r][j] = inv[r][j].clone() - factor.clone() * inv[col][j].clone();
                }
            }
        }
        if sign_flips % 2 == 1 {
            det = -det;
        }
        Ok((SqMat { n, rows: inv }, det))
    }
}

pub fn dot_cert(a: &[CertReal], b: &[CertReal]) -> CertReal {
    assert_eq!(a.len(), b.len());
    let mut acc = CertReal::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc + x.clone() * y.clone();
    }
    acc
}

/// The target matrix `A` of the approximation problems: `m x n`, certified
/// entries.
#[derive(Clone, Debug)]
pub struct TargetMatrix {
    pub m: usize,
    pub n: usize,
    entries: Vec<Vec<CertReal>>,
}

impl TargetMatrix {
    pub fn new(entries: Vec<Vec<CertReal>>) -> Self {
        let m = entries.len();
        assert!(m > 0);
        let n = entries[0].len();
        assert!(n > 0 && entries.iter().all(|r| r.len() == n));
        TargetMatrix { m, n, entries }
    }

    pub fn scalar(a: CertReal) -> Self {
        Self::new(vec![vec![a]])
    }

    pub fn at(&self, i: usize, j: usize) -> &CertReal {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<CertReal>] {
        &self.entries
    }

    pub fn transpose(&self) -> TargetMatrix {
        let entries = (0..self.n)
            .map(|j| (0..self.m).map(|i| self.entries[i][j].clone()).collect())
            .collect();
        TargetMatrix::new(entries)
    }

    /// `^tA x` for integer `x` of length `m`: the vector of length `n`.
    pub fn t_apply_int(&self, x: &[BigInt]) -> Vec<CertReal> {
        assert_eq!(x.len(), self.m);
        (0..self.n)
            .map(|j| {
                let mut acc = CertReal::zero();
                for (i, xi) in x.iter().enumerate() {
                    if !xi.is_zero() {
                        acc = acc + self.entries[i][j].clone() * CertReal::from(xi);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn as_rational(&self) -> Option<Vec<Vec<Rat>>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|x| x.as_rat().cloned()).collect())
            .collect()
    }
}

/// Incremental exact rank tracking for rational vectors (row echelon insert).
/// Returns true when the vector enlarged the span.
#[derive(Clone, Debug, Default)]
pub struct RankTracker {
    echelon: Vec<Vec<Rat>>,
}

impl RankTracker {
    pub fn new() -> Self {
        RankTracker { echelon: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.echelon.len()
    }

    pub fn try_insert_int(&mut self, v: &[BigInt]) -> bool {
        let row: Vec<Rat> = v.iter().map(|x| Rat::from_integer(x.clone())).collect();
        self.try_insert(row)
    }

    pub fn try_insert(&mut self, mut row: Vec<Rat>) -> bool {
        for basis in &self.echelon {
            let lead = basis.iter().position(|x| !x.is_zero()).unwrap();
            if !row[lead].is_zero() {
                let f = &row[lead] / &basis[lead];
                for (ri, bi) in row.iter_mut().zip(basis) {
                    *ri -= &f * bi;
                }
            }
        }
        if row.iter().all(|x| x.is_zero()) {
            return false;
        }
        self.echelon.push(row);
        // keep echelon sorted by leading index for stable elimination
        self.echelon.sort_by_key(|r| r.iter().position(|x| !x.is_zero()).unwrap());
        // re-eliminate to maintain the echelon property
        let rows = std::mem::take(&mut self.echelon);
        for r in rows {
            let mut reduced = r;
            for basis in &self.echelon {
                let lead = basis.iter().position(|x| !x.is_zero()).unwrap();
                if !reduced[lead].is_zero() {
                    let f = &reduced[lead] / &basis[lead];
                    for (ri, bi) in reduced.iter_mut().zip(basis) {
                        *ri -= &f * bi;
                    }
                }
            }
            if !reduced.iter().all(|x| x.is_zero()) {
                self.echelon.push(reduced);
            }
        }
        true
    }
}

/// Exact unimodularity test: `u` integer entries and `|det u| = 1`.
pub fn is_unimodular(u: &[Vec<Rat>]) -> bool {
    let n = u.len();
    if u.iter().any(|r| r.len() != n) {
        return false;
    }
    if u.iter().flatten().any(|x| !x.is_integer()) {
        return false;
    }
    let det = rational_det(u);
    det.abs() == Rat::from_integer(BigInt::from(1))
}

/// Exact determinant of a rational matrix by fraction-free style elimination.
pub fn rational_det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut det = Rat::from_integer(BigInt::from(1));
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let piv = a[col][col].clone();
        det *= &piv;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &piv;
            for j in col..n {
                let sub = &f * &a[col][j];
                a[r][j] -= sub;
            }
        }
    }
    det
}

/// Deterministic lexicographic order on integer vectors.
pub fn lex_cmp(a: &[BigInt], b: &[BigInt]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Deterministic order on rational vectors (used for stable sorting only).
pub fn lex_cmp_rat(a: &[Rat], b: &[Rat]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match rat_cmp(x, y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, rat_int};

    #[test]
    fn invert_rational_matrix() {
        let m = SqMat::from_rational_rows(&[
            vec![rat_int(2), rat_int(1)],
            vec![rat_int(1), rat_int(1)],
        ]);
        let (inv, det) = m.invert_with_det().unwrap();
        assert_eq!(det.as_rat(), Some(&rat_int(1)));
        let prod = m.mul_mat(&inv);
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { rat_int(1) } else { Rat::zero() };
                assert_eq!(prod.at(i, j).as_rat(), Some(&expect));
            }
        }
    }

    #[test]
    fn singular_matrix_detected() {
        let m = SqMat::from_rational_rows(&[
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(4)],
        ]);
        assert!(matches!(
            m.invert_with_det(),
            Err(LatticeError::Singular { .. })
        ));
    }

    #[test]
    fn invert_irrational_matrix() {
        // [[sqrt2, 0], [1, 1]] inverse = [[1/sqrt2, 0], [-1/sqrt2, 1]]
        let s2 = CertReal::sqrt_rat(rat_int(2));
        let m = SqMat::from_rows(vec![
            vec![s2.clone(), CertReal::zero()],
            vec![CertReal::one(), CertReal::one()],
        ]);
        let (inv, det) = m.invert_with_det().unwrap();
        assert_eq!(det.compare(&s2).unwrap(), Ordering::Equal);
        let lhs = inv.at(0, 0).clone() * s2.clone();
        assert_eq!(lhs.compare(&CertReal::one()).unwrap(), Ordering::Equal);
    }

    #[test]
    fn rank_tracker_counts() {
        let mut rt = RankTracker::new();
        assert!(rt.try_insert_int(&[BigInt::from(1), BigInt::from(0), BigInt::from(0)]));
        assert!(rt.try_insert_int(&[BigInt::from(1), BigInt::from(1), BigInt::from(0)]));
        assert!(!rt.try_insert_int(&[BigInt::from(3), BigInt::from(2), BigInt::from(0)]));
        assert!(rt.try_insert_int(&[BigInt::from(0), BigInt::from(0), BigInt::from(5)]));
        assert_eq!(rt.rank(), 3);
    }

    #[test]
    fn unimodular_check() {
        let u = vec![vec![rat_int(1), rat_int(3)], vec![rat_int(1), rat_int(4)]];
        assert!(is_unimodular(&u));
        let v = vec![vec![rat_int(2), rat_int(0)], vec![rat_int(0), rat_int(1)]];
        assert!(!is_unimodular(&v));
        let w = vec![vec![rat(1, 2), rat_int(0)], vec![rat_int(0), rat_int(2)]];
        assert!(!is_unimodular(&w));
    }

    #[test]
    fn det_sign_with_swaps() {
        let m = vec![
            vec![Rat::zero(), rat_int(1)],
            vec![rat_int(1), Rat::zero()],
        ];
        assert_eq!(rational_det(&m), rat_int(-1));
    }
}
