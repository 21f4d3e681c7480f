//! Dense multivectors over the lexicographic basis of grade-`k` subsets.
//!
//! Coefficients are certified reals; rational inputs stay exact through all
//! products. The inner product on the dense representation is the Euclidean
//! one on coefficients, which agrees with the Gram-determinant form on
//! decomposables (property-tested, not assumed).

use crate::numerics::{CertReal, Rat};
use num_bigint::BigInt;

/// Binomial coefficient, small arguments.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// All `k`-subsets of `{0..n-1}` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

/// Index of a sorted `k`-subset in lexicographic order.
pub fn subset_rank(n: usize, set: &[usize]) -> usize {
    let k = set.len();
    let mut rank = 0usize;
    let mut prev: isize = -1;
    for (pos, &s) in set.iter().enumerate() {
        for j in (prev + 1) as usize..s {
            rank += binomial(n - j - 1, k - pos - 1);
        }
        prev = s as isize;
    }
    rank
}

/// Sign of merging two disjoint sorted index sets: the parity of the number
/// of transpositions needed to sort the concatenation `s . t`.
pub fn merge_sign(s: &[usize], t: &[usize]) -> i8 {
    let mut inversions = 0usize;
    for &a in s {
        inversions += t.iter().filter(|&&b| b < a).count();
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug)]
pub struct Multivector {
    pub n: usize,
    pub k: usize,
    pub coeffs: Vec<CertReal>,
}

impl Multivector {
    pub fn zero(n: usize, k: usize) -> Self {
        Multivector {
            n,
            k,
            coeffs: vec![CertReal::zero(); binomial(n, k)],
        }
    }

    pub fn new(n: usize, k: usize, coeffs: Vec<CertReal>) -> Self {
        assert_eq!(coeffs.len(), binomial(n, k), "coefficient length");
        Multivector { n, k, coeffs }
    }

    pub fn scalar(n: usize, value: CertReal) -> Self {
        Multivector { n, k: 0, coeffs: vec![value] }
    }

    pub fn from_vector(v: &[CertReal]) -> Self {
        Multivector { n: v.len(), k: 1, coeffs: v.to_vec() }
    }

    pub fn from_int_coeffs(n: usize, k: usize, coeffs: &[BigInt]) -> Self {
        Multivector::new(n, k, coeffs.iter().map(CertReal::from).collect())
    }

    pub fn basis_vector(n: usize, i: usize) -> Self {
        let mut m = Multivector::zero(n, 1);
        m.coeffs[i] = CertReal::one();
        m
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero_exact(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero_rat())
    }

    pub fn as_rational(&self) -> Option<Vec<Rat>> {
        self.coeffs.iter().map(|c| c.as_rat().cloned()).collect()
    }

    pub fn add(&self, o: &Multivector) -> Multivector {
        assert!(self.n == o.n && self.k == o.k);
        Multivector {
            n: self.n,
            k: self.k,
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Multivector {
        Multivector {
            n: self.n,
            k: self.k,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &CertReal) -> Multivector {
        Multivector {
            n: self.n,
            k: self.k,
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// Exterior product, exact sign bookkeeping over lexicographic index
    /// pairs.
    pub fn wedge(&self, o: &Multivector) -> Multivector {
        assert_eq!(self.n, o.n, "ambient dimension mismatch");
        let grade = self.k + o.k;
        assert!(grade <= self.n, "grade overflow");
        let mut out = Multivector::zero(self.n, grade);
        let left = subsets(self.n, self.k);
        let right = subsets(self.n, o.k);
        for (i, s) in left.iter().enumerate() {
            if self.coeffs[i].is_zero_rat() {
                continue;
            }
            for (j, t) in right.iter().enumerate() {
                if o.coeffs[j].is_zero_rat() {
                    continue;
                }
                if s.iter().any(|x| t.contains(x)) {
                    continue;
                }
                let mut merged: Vec<usize> = s.iter().chain(t.iter()).copied().collect();
                let sign = merge_sign(s, t);
                merged.sort_unstable();
                let idx = subset_rank(self.n, &merged);
                let term = self.coeffs[i].clone() * o.coeffs[j].clone();
                let term = if sign < 0 { -term } else { term };
                out.coeffs[idx] = out.coeffs[idx].clone() + term;
            }
        }
        out
    }

    /// Euclidean inner product on coefficients.
    pub fn inner(&self, o: &Multivector) -> CertReal {
        assert!(self.n == o.n && self.k == o.k, "grade mismatch");
        let mut acc = CertReal::zero();
        for (a, b) in self.coeffs.iter().zip(&o.coeffs) {
            acc = acc + a.clone() * b.clone();
        }
        acc
    }

    pub fn norm_sq(&self) -> CertReal {
        self.inner(self)
    }

    pub fn norm(&self) -> CertReal {
        CertReal::sqrt(self.norm_sq())
    }
}

/// Gram-determinant norm squared of a decomposable multivector given by its
/// factors: `det(<u_i, u_j>)`. Used as the independent oracle for the dense
/// Euclidean norm.
pub fn gram_norm_sq(factors: &[Vec<CertReal>]) -> CertReal {
    let t = factors.len();
    let gram: Vec<Vec<CertReal>> = (0..t)
        .map(|i| {
            (0..t)
                .map(|j| crate::linalg::dot_cert(&factors[i], &factors[j]))
                .collect()
        })
        .collect();
    det_cert(&gram)
}

fn det_cert(m: &[Vec<CertReal>]) -> CertReal {
    let n = m.len();
    if n == 0 {
        return CertReal::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    // cofactor expansion; fine at desk-scale grades
    let mut acc = CertReal::zero();
    for j in 0..n {
        if m[0][j].is_zero_rat() {
            continue;
        }
        let minor: Vec<Vec<CertReal>> = (1..n)
            .map(|i| {
                (0..n)
                    .filter(|&c| c != j)
                    .map(|c| m[i][c].clone())
                    .collect()
            })
            .collect();
        let term = m[0][j].clone() * det_cert(&minor);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}
