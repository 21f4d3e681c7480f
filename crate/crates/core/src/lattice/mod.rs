//! Lattice bases, the parametrized approximation lattices and their duals,
//! exact box enumeration, successive minima, and the duality-transfer
//! checks.

mod enumerate;
mod minima;
mod transfer;

pub use enumerate::{enumerate_in_box, enumerate_in_rat_box, LatticePoint, DEFAULT_ENUM_BUDGET};
pub use minima::{mu1_exceeds, successive_minima, successive_minima_body, SuccessiveMinima};
pub use transfer::{
    check_mahler_transfer, mahler_constant, second_theorem_dual_bound, MahlerReport,
    MahlerStatus, SecondTheoremReport,
};

use crate::error::{LatticeError, NumError};
use crate::linalg::{SqMat, TargetMatrix};
use crate::numerics::{CertReal, Rat, WeightVector, WeightedValue};
use num_traits::{One, Signed, Zero};

/// Full-rank lattice `B * Z^d`, generators stored as the columns of `B`.
/// The determinant and the inverse are certified at construction.
#[derive(Clone, Debug)]
pub struct LatticeBasis {
    mat: SqMat,
    inv: SqMat,
    det: CertReal,
}

impl LatticeBasis {
    pub fn from_cols(cols: Vec<Vec<CertReal>>) -> Result<Self, LatticeError> {
        let n = cols.len();
        assert!(n > 0 && cols.iter().all(|c| c.len() == n), "not square");
        let rows = (0..n)
            .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
            .collect();
        let mat = SqMat::from_rows(rows);
        let (inv, det) = mat.invert_with_det()?;
        Ok(LatticeBasis { mat, inv, det })
    }

    pub fn from_rational_cols(cols: &[Vec<Rat>]) -> Result<Self, LatticeError> {
        Self::from_cols(
            cols.iter()
                .map(|c| c.iter().map(|x| CertReal::from_rat(x.clone())).collect())
                .collect(),
        )
    }

    pub fn standard(dim: usize) -> Self {
        let mat = SqMat::identity(dim);
        LatticeBasis {
            inv: mat.clone(),
            mat,
            det: CertReal::one(),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.n
    }

    pub fn det(&self) -> &CertReal {
        &self.det
    }

    pub fn basis_matrix(&self) -> &SqMat {
        &self.mat
    }

    pub fn inverse_matrix(&self) -> &SqMat {
        &self.inv
    }

    pub fn col(&self, j: usize) -> Vec<CertReal> {
        self.mat.col(j)
    }

    /// The lattice point with integer coordinates `z`.
    pub fn point(&self, z: &[num_bigint::BigInt]) -> Vec<CertReal> {
        self.mat.mul_int_vec(z)
    }

    /// Dual lattice: the inverse-transpose basis, so that every pairing
    /// between a lattice vector and a dual basis vector is an integer.
    pub fn dual(&self) -> Result<LatticeBasis, LatticeError> {
        let dual_mat = self.inv.transpose();
        let (dual_inv, dual_det) = dual_mat.invert_with_det()?;
        Ok(LatticeBasis {
            mat: dual_mat,
            inv: dual_inv,
            det: dual_det,
        })
    }

    pub fn as_rational(&self) -> Option<Vec<Vec<Rat>>> {
        self.mat.as_rational()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let cols: Vec<Vec<String>> = (0..self.dim())
            .map(|j| {
                self.col(j)
                    .iter()
                    .map(|x| match x.as_rat() {
                        Some(r) => crate::numerics::format_rat(r),
                        None => format!("~{}", x.to_f64()),
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({ "dim": self.dim(), "cols": cols })
    }
}

/// Axis-aligned box: a translate of `prod [-h_i, h_i]`.
#[derive(Clone, Debug)]
pub struct WeightedBox {
    pub center: Vec<Rat>,
    pub half_widths: Vec<CertReal>,
}

impl WeightedBox {
    pub fn new(center: Vec<Rat>, half_widths: Vec<CertReal>) -> Result<Self, LatticeError> {
        assert_eq!(center.len(), half_widths.len());
        for h in &half_widths {
            if h.sign()? <= 0 {
                return Err(LatticeError::NonPositiveScale(format!("{h:?}")));
            }
        }
        Ok(WeightedBox { center, half_widths })
    }

    pub fn centered(half_widths: Vec<CertReal>) -> Result<Self, LatticeError> {
        let center = vec![Rat::zero(); half_widths.len()];
        Self::new(center, half_widths)
    }

    pub fn unit_cube(dim: usize) -> Self {
        WeightedBox {
            center: vec![Rat::zero(); dim],
            half_widths: vec![CertReal::one(); dim],
        }
    }

    /// The unit ball of the weighted norm at scale `T`: half-widths `T^{w_i}`.
    pub fn weighted_ball(t: &CertReal, w: &WeightVector) -> Result<Self, LatticeError> {
        if t.sign()? <= 0 {
            return Err(LatticeError::NonPositiveScale(format!("{t:?}")));
        }
        let hw = (0..w.dim()).map(|i| t.pow(w.get(i).clone())).collect();
        WeightedBox::centered(hw)
    }

    pub fn dim(&self) -> usize {
        self.half_widths.len()
    }

    pub fn is_centered(&self) -> bool {
        self.center.iter().all(|c| c.is_zero())
    }

    pub fn scaled(&self, lambda: &Rat) -> WeightedBox {
        debug_assert!(lambda.is_positive());
        WeightedBox {
            center: self.center.clone(),
            half_widths: self
                .half_widths
                .iter()
                .map(|h| h.clone() * CertReal::from_rat(lambda.clone()))
                .collect(),
        }
    }
}

/// Symmetric convex body handled by the enumeration machinery: either a
/// centered box or the polar of one (a weighted cross-polytope).
#[derive(Clone, Debug)]
pub enum Body {
    BoxBody(WeightedBox),
    /// Polar of the box with the given half-widths: `{ y : sum h_i |y_i| <= 1 }`.
    PolarOfBox(WeightedBox),
}

impl Body {
    pub fn dim(&self) -> usize {
        match self {
            Body::BoxBody(b) | Body::PolarOfBox(b) => b.dim(),
        }
    }

    /// Gauge (Minkowski functional) of a point; point is inside the body at
    /// dilation `lambda` iff gauge <= lambda.
    pub fn gauge(&self, x: &[CertReal]) -> WeightedValue {
        match self {
            Body::BoxBody(b) => {
                let terms = x
                    .iter()
                    .zip(&b.half_widths)
                    .map(|(xi, h)| (xi.abs() / h.clone(), Rat::one()))
                    .collect();
                WeightedValue::from_terms(terms)
            }
            Body::PolarOfBox(b) => {
                let mut acc = CertReal::zero();
                for (xi, h) in x.iter().zip(&b.half_widths) {
                    acc = acc + h.clone() * xi.abs();
                }
                WeightedValue::from_cert(acc)
            }
        }
    }

    /// Half-widths of the axis-aligned bounding box of `lambda * body`.
    pub fn bounding_half_widths(&self, lambda: &Rat) -> Vec<CertReal> {
        let lam = CertReal::from_rat(lambda.clone());
        match self {
            Body::BoxBody(b) => b
                .half_widths
                .iter()
                .map(|h| h.clone() * lam.clone())
                .collect(),
            Body::PolarOfBox(b) => b
                .half_widths
                .iter()
                .map(|h| lam.clone() / h.clone())
                .collect(),
        }
    }
}

/// The paper-parametrized lattice: columns of
/// `diag(g_s(Q^-1), g_r(T^-1)) * [[I_m, A], [0, I_n]]`.
pub fn build_parametrized_lattice(
    a: &TargetMatrix,
    q: &CertReal,
    t: &CertReal,
    s: &WeightVector,
    r: &WeightVector,
) -> Result<LatticeBasis, LatticeError> {
    assert_eq!(s.dim(), a.m, "s must have dimension m");
    assert_eq!(r.dim(), a.n, "r must have dimension n");
    if q.sign()? <= 0 {
        return Err(LatticeError::NonPositiveScale(format!("Q = {q:?}")));
    }
    if t.sign()? <= 0 {
        return Err(LatticeError::NonPositiveScale(format!("T = {t:?}")));
    }
    let (m, n) = (a.m, a.n);
    let d = m + n;
    let mut cols = vec![vec![CertReal::zero(); d]; d];
    // scale factors Q^{-s_i} and T^{-r_j}
    let qs: Vec<CertReal> = (0..m).map(|i| q.pow(-s.get(i).clone())).collect();
    let tr: Vec<CertReal> = (0..n).map(|j| t.pow(-r.get(j).clone())).collect();
    for j in 0..m {
        cols[j][j] = qs[j].clone();
    }
    for j in 0..n {
        for i in 0..m {
            cols[m + j][i] = qs[i].clone() * a.at(i, j).clone();
        }
        cols[m + j][m + j] = tr[j].clone();
    }
    LatticeBasis::from_cols(cols)
}

/// The displayed closed form of the dual of `build_parametrized_lattice`:
/// columns of `diag(g_s(Q), g_r(T)) * [[I_m, 0], [-^tA, I_n]]`.
pub fn parametrized_dual_closed_form(
    a: &TargetMatrix,
    q: &CertReal,
    t: &CertReal,
    s: &WeightVector,
    r: &WeightVector,
) -> Result<LatticeBasis, LatticeError> {
    let (m, n) = (a.m, a.n);
    let d = m + n;
    let mut cols = vec![vec![CertReal::zero(); d]; d];
    let qs: Vec<CertReal> = (0..m).map(|i| q.pow(s.get(i).clone())).collect();
    let tr: Vec<CertReal> = (0..n).map(|j| t.pow(r.get(j).clone())).collect();
    for j in 0..m {
        cols[j][j] = qs[j].clone();
        for i in 0..n {
            cols[j][m + i] = -(tr[i].clone() * a.at(j, i).clone());
        }
    }
    for j in 0..n {
        cols[m + j][m + j] = tr[j].clone();
    }
    LatticeBasis::from_cols(cols)
}

/// Pairing `<x, y>` of two certified vectors, and the exact-integrality test
/// used by the duality invariants.
pub fn pairing(x: &[CertReal], y: &[CertReal]) -> CertReal {
    crate::linalg::dot_cert(x, y)
}

pub fn pairing_is_integer_exact(x: &[Rat], y: &[Rat]) -> bool {
    let mut acc = Rat::zero();
    for (a, b) in x.iter().zip(y) {
        acc += a * b;
    }
    acc.is_integer()
}

/// `(L*)* = L` up to a unimodular basis change, exact for rational bases.
pub fn double_dual_is_identity(l: &LatticeBasis) -> Result<bool, LatticeError> {
    let dd = l.dual()?.dual()?;
    let lr = match l.as_rational() {
        Some(r) => r,
        None => return Ok(true), // only checked exactly on rational instances
    };
    let ddr = match dd.as_rational() {
        Some(r) => r,
        None => return Ok(true),
    };
    // change of basis U = L^{-1} * L**, must be unimodular
    let inv = l
        .inverse_matrix()
        .as_rational()
        .ok_or_else(|| NumError::DimensionMismatch("rational inverse expected".into()))?;
    let n = l.dim();
    let mut u = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Rat::zero();
            for (k, invik) in inv[i].iter().enumerate() {
                acc += invik * &ddr[k][j];
            }
            u[i][j] = acc;
        }
    }
    let _ = lr;
    Ok(crate::linalg::is_unimodular(&u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, rat_int};
    use std::cmp::Ordering;

    #[test]
    fn standard_lattice_self_dual() {
        let z2 = LatticeBasis::standard(2);
        let dual = z2.dual().unwrap();
        for j in 0..2 {
            for (i, x) in dual.col(j).iter().enumerate() {
                let expect = if i == j { rat_int(1) } else { Rat::zero() };
                assert_eq!(x.as_rat(), Some(&expect));
            }
        }
    }

    #[test]
    fn diagonal_dual() {
        // diag(2, 1/2) dual = diag(1/2, 2)
        let l = LatticeBasis::from_rational_cols(&[
            vec![rat_int(2), Rat::zero()],
            vec![Rat::zero(), rat(1, 2)],
        ])
        .unwrap();
        let d = l.dual().unwrap();
        assert_eq!(d.col(0)[0].as_rat(), Some(&rat(1, 2)));
        assert_eq!(d.col(1)[1].as_rat(), Some(&rat_int(2)));
    }

    #[test]
    fn parametrized_identity_case() {
        // A = 0, Q = T = 1 gives the standard basis
        let a = TargetMatrix::new(vec![vec![CertReal::zero()]]);
        let s = WeightVector::uniform(1);
        let r = WeightVector::uniform(1);
        let l = build_parametrized_lattice(&a, &CertReal::one(), &CertReal::one(), &s, &r)
            .unwrap();
        assert_eq!(l.col(0)[0].as_rat(), Some(&rat_int(1)));
        assert_eq!(l.col(1)[1].as_rat(), Some(&rat_int(1)));
        assert_eq!(l.col(1)[0].as_rat(), Some(&Rat::zero()));
    }

    #[test]
    fn parametrized_half_case() {
        // m=n=1, A=[1/2], Q=T=1: basis [[1, 1/2], [0, 1]]
        let a = TargetMatrix::new(vec![vec![CertReal::from_rat(rat(1, 2))]]);
        let s = WeightVector::uniform(1);
        let r = WeightVector::uniform(1);
        let l = build_parametrized_lattice(&a, &CertReal::one(), &CertReal::one(), &s, &r)
            .unwrap();
        assert_eq!(l.col(1)[0].as_rat(), Some(&rat(1, 2)));
        assert_eq!(l.col(1)[1].as_rat(), Some(&rat_int(1)));
    }

    #[test]
    fn parametrized_determinant() {
        // det = Q^-1 T^-1 since the weights sum to 1
        let a = TargetMatrix::new(vec![
        	vec![CertReal::from_rat(rat(1, 3)), CertReal::from_rat(rat(2, 7))],
        ]);
        let s = WeightVector::new(vec![rat_int(1)]).unwrap();
        let r = WeightVector::new(vec![rat(1, 4), rat(3, 4)]).unwrap();
        let q = CertReal::from_int(16);
        let t = CertReal::from_int(81);
        let l = build_parametrized_lattice(&a, &q, &t, &s, &r).unwrap();
        let expect = CertReal::from_rat(rat(1, 16 * 81));
        assert_eq!(l.det().compare(&expect).unwrap(), Ordering::Equal);
    }

    #[test]
    fn parametrized_dual_matches_closed_form() {
        // rational-collapsing instance: Q, T chosen so Q^{s_i}, T^{r_j} are rational
        let a = TargetMatrix::new(vec![
            vec![CertReal::from_rat(rat(1, 3)), CertReal::from_rat(rat(2, 7))],
        ]);
        let s = WeightVector::new(vec![rat_int(1)]).unwrap();
        let r = WeightVector::new(vec![rat(1, 2), rat(1, 2)]).unwrap();
        let q = CertReal::from_int(5);
        let t = CertReal::from_int(9);
        let l = build_parametrized_lattice(&a, &q, &t, &s, &r).unwrap();
        let dual = l.dual().unwrap();
        let closed = parametrized_dual_closed_form(&a, &q, &t, &s, &r).unwrap();
        let dr = dual.as_rational().expect("rational dual");
        let cr = closed.as_rational().expect("rational closed form");
        assert_eq!(dr, cr);
    }

    #[test]
    fn double_dual_unimodular() {
        let l = LatticeBasis::from_rational_cols(&[
            vec![rat(3, 2), rat(1, 5)],
            vec![rat(-1, 3), rat(7, 4)],
        ])
        .unwrap();
        assert!(double_dual_is_identity(&l).unwrap());
    }
}
