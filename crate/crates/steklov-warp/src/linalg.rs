//! Symmetric tridiagonal systems and the 2x2 generalized eigenproblem.
//!
//! Everything the Dirichlet-to-Neumann reduction needs: an LDL^T
//! factorization for the (positive definite) interior block, and the closed
//! form for a 2x2 symmetric pencil. No general eigensolver is involved; per
//! mode the discrete problem has at most two finite eigenvalues.

use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix, stored as main diagonal and subdiagonal.
#[derive(Debug, Clone)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl SymTridiagonal {
    pub fn zeros(n: usize) -> Self {
        Self {
            diag: vec![0.0; n],
            offdiag: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// y = A x.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        assert_eq!(x.len(), n);
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = self.diag[i] * x[i];
            if i > 0 {
                s += self.offdiag[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += self.offdiag[i] * x[i + 1];
            }
            y[i] = s;
        }
        y
    }

    /// LDL^T factorization; fails if any pivot is not strictly positive.
    pub fn factor_ldlt(&self) -> Result<LdltFactor> {
        let n = self.len();
        if n == 0 {
            return Ok(LdltFactor { d: Vec::new(), l: Vec::new() });
        }
        let mut d = vec![0.0; n];
        let mut l = vec![0.0; n.saturating_sub(1)];
        d[0] = self.diag[0];
        if !(d[0] > 0.0) || !d[0].is_finite() {
            return Err(Error::Numerical(format!(
                "interior block not positive definite (pivot {} at row 0)",
                d[0]
            )));
        }
        for i in 0..n - 1 {
            l[i] = self.offdiag[i] / d[i];
            d[i + 1] = self.diag[i + 1] - l[i] * self.offdiag[i];
            if !(d[i + 1] > 0.0) || !d[i + 1].is_finite() {
                return Err(Error::Numerical(format!(
                    "interior block not positive definite (pivot {} at row {})",
                    d[i + 1],
                    i + 1
                )));
            }
        }
        Ok(LdltFactor { d, l })
    }
}

/// A = L D L^T with unit lower bidiagonal L.
#[derive(Debug, Clone)]
pub struct LdltFactor {
    d: Vec<f64>,
    l: Vec<f64>,
}

impl LdltFactor {
    /// Solve A x = b in place.
    pub fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        assert_eq!(b.len(), n);
        if n == 0 {
            return;
        }
        // forward: L y = b
        for i in 1..n {
            b[i] -= self.l[i - 1] * b[i - 1];
        }
        // diagonal
        for i in 0..n {
            b[i] /= self.d[i];
        }
        // backward: L^T x = y
        for i in (0..n - 1).rev() {
            b[i] -= self.l[i] * b[i + 1];
        }
    }
}

/// Eigenvalues of the pencil S y = sigma W y for 2x2 symmetric S and
/// diagonal positive W = diag(w0, w1). Returns (sigma_1, sigma_2) with
/// sigma_1 <= sigma_2 and the W-orthonormal eigenvectors as columns.
pub fn generalized_eigen_2x2(s: [[f64; 2]; 2], w0: f64, w1: f64) -> ((f64, f64), [[f64; 2]; 2]) {
    // Transform to the standard problem for T = W^{-1/2} S W^{-1/2}.
    let r0 = 1.0 / w0.sqrt();
    let r1 = 1.0 / w1.sqrt();
    let a = s[0][0] * r0 * r0;
    let b = s[0][1] * r0 * r1;
    let c = s[1][1] * r1 * r1;
    let half_trace = 0.5 * (a + c);
    let disc = (0.5 * (a - c)).hypot(b);
    let sig1 = half_trace - disc;
    let sig2 = half_trace + disc;

    // Eigenvector of [[a,b],[b,c]] for eigenvalue m: pick the numerically
    // larger of the two algebraically equivalent forms.
    let vec_for = |m: f64| -> [f64; 2] {
        let v1 = [b, m - a];
        let v2 = [m - c, b];
        let n1 = v1[0].hypot(v1[1]);
        let n2 = v2[0].hypot(v2[1]);
        let v = if n1 >= n2 { v1 } else { v2 };
        let n = v[0].hypot(v[1]);
        if n == 0.0 {
            // S is a multiple of W; any direction works.
            [1.0, 0.0]
        } else {
            [v[0] / n, v[1] / n]
        }
    };
    let u1 = vec_for(sig1);
    let mut u2 = vec_for(sig2);
    if disc == 0.0 {
        u2 = [-u1[1], u1[0]];
    }
    // Back-transform: y = W^{-1/2} u; columns are W-orthogonal.
    let y1 = [u1[0] * r0, u1[1] * r1];
    let y2 = [u2[0] * r0, u2[1] * r1];
    ((sig1, sig2), [[y1[0], y2[0]], [y1[1], y2[1]]])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ldlt_solves_spd_system() {
        // A = tridiag(-1, 2, -1), 4x4; b chosen so x = [1,2,3,4].
        let a = SymTridiagonal {
            diag: vec![2.0; 4],
            offdiag: vec![-1.0; 3],
        };
        let x_true = [1.0, 2.0, 3.0, 4.0];
        let mut b = a.mul_vec(&x_true);
        let f = a.factor_ldlt().unwrap();
        f.solve(&mut b);
        for (xi, ti) in b.iter().zip(x_true.iter()) {
            assert!((xi - ti).abs() < 1e-13, "{xi} vs {ti}");
        }
    }

    #[test]
    fn ldlt_rejects_indefinite() {
        let a = SymTridiagonal {
            diag: vec![1.0, -1.0],
            offdiag: vec![0.0],
        };
        assert!(a.factor_ldlt().is_err());
    }

    #[test]
    fn eigen_2x2_identity_weights() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3.
        let ((s1, s2), v) = generalized_eigen_2x2([[2.0, 1.0], [1.0, 2.0]], 1.0, 1.0);
        assert!((s1 - 1.0).abs() < 1e-14);
        assert!((s2 - 3.0).abs() < 1e-14);
        // W-orthogonality of the two columns.
        let dot = v[0][0] * v[0][1] + v[1][0] * v[1][1];
        assert!(dot.abs() < 1e-14);
    }

    #[test]
    fn eigen_2x2_weighted_matches_hand_solve() {
        // S = [[4,1],[1,3]], W = diag(2, 5): det(S - m W) = 0 gives
        // 10 m^2 - 26 m + 11 = 0.
        let ((s1, s2), v) = generalized_eigen_2x2([[4.0, 1.0], [1.0, 3.0]], 2.0, 5.0);
        let disc = (26.0_f64 * 26.0 - 4.0 * 10.0 * 11.0).sqrt();
        let m1 = (26.0 - disc) / 20.0;
        let m2 = (26.0 + disc) / 20.0;
        assert!((s1 - m1).abs() < 1e-14);
        assert!((s2 - m2).abs() < 1e-14);
        // Residual S y = m W y for both pairs.
        for (m, col) in [(s1, 0), (s2, 1)] {
            let y = [v[0][col], v[1][col]];
            let r0 = 4.0 * y[0] + 1.0 * y[1] - m * 2.0 * y[0];
            let r1 = 1.0 * y[0] + 3.0 * y[1] - m * 5.0 * y[1];
            assert!(r0.abs() < 1e-13 && r1.abs() < 1e-13);
        }
    }
}
