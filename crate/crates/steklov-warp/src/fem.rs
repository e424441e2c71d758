//! Piecewise-linear FEM with exact boundary reduction.
//!
//! The bilinear form int h^2 a' v' + lambda a v dt on hat functions gives a
//! symmetric tridiagonal matrix A; the spectral parameter only multiplies
//! the boundary weights. Eliminating the interior unknowns (one LDL^T
//! factorization, two solves) leaves a 2x2 pencil - the discrete
//! Dirichlet-to-Neumann map - whose generalized eigenvalues are the two
//! Steklov eigenvalues of the mode. The revolution case pins a(L) = 0 first
//! and reduces to a scalar.

use crate::error::{Error, Result};
use crate::linalg::{generalized_eigen_2x2, LdltFactor, SymTridiagonal};
use crate::mode::{element_h2_integral, normalize_boundary, Engine, ModeProblem, ModeSolution};
use crate::profile::ProfileKind;

/// Galerkin matrix of the form: A[i][k] = int h^2 phi_i' phi_k'
/// + lambda phi_i phi_k dt, with 3-point Gauss for h^2 per element and the
/// exact (consistent) mass integrals.
pub fn assemble_mode_matrix(problem: &ModeProblem) -> SymTridiagonal {
    let nodes = problem.grid.nodes();
    let n = nodes.len();
    let mut a = SymTridiagonal::zeros(n);
    for e in 0..n - 1 {
        let (t0, t1) = (nodes[e], nodes[e + 1]);
        let len = t1 - t0;
        let stiff = element_h2_integral(problem.profile, t0, t1) / (len * len);
        let mass_d = problem.lambda * len / 3.0;
        let mass_o = problem.lambda * len / 6.0;
        a.diag[e] += stiff + mass_d;
        a.diag[e + 1] += stiff + mass_d;
        a.offdiag[e] += -stiff + mass_o;
    }
    a
}

/// Discrete Dirichlet-to-Neumann matrix: S = A_bb - A_bi A_ii^{-1} A_ib
/// over the boundary node set ({0, L}, or {0} after pinning a(L) = 0 in
/// the revolution case).
#[derive(Debug, Clone, Copy)]
pub enum DtnMatrix {
    TwoBoundary([[f64; 2]; 2]),
    OneBoundary(f64),
}

pub fn schur_dtn(a: &SymTridiagonal, problem: &ModeProblem) -> Result<DtnMatrix> {
    match problem.profile.kind() {
        ProfileKind::ConditionH => {
            let (s, _, _, _) = schur_two_boundary(a)?;
            Ok(DtnMatrix::TwoBoundary(s))
        }
        ProfileKind::Revolution => {
            let (s, _, _) = schur_one_boundary(a)?;
            Ok(DtnMatrix::OneBoundary(s))
        }
    }
}

/// Two-boundary reduction. Returns (S, interior factor, u0, uL) where
/// u0 = A_ii^{-1} A_i0 and uL = A_ii^{-1} A_iL; the interior part of an
/// eigenfunction with boundary values (a0, aL) is -(a0 u0 + aL uL).
#[allow(clippy::type_complexity)]
fn schur_two_boundary(
    a: &SymTridiagonal,
) -> Result<([[f64; 2]; 2], Option<LdltFactor>, Vec<f64>, Vec<f64>)> {
    let n = a.len();
    if n < 2 {
        return Err(Error::Numerical("mode matrix needs at least two nodes".into()));
    }
    if n == 2 {
        let s = [[a.diag[0], a.offdiag[0]], [a.offdiag[0], a.diag[1]]];
        return Ok((s, None, Vec::new(), Vec::new()));
    }
    let m = n - 2;
    let interior = SymTridiagonal {
        diag: a.diag[1..n - 1].to_vec(),
        offdiag: a.offdiag[1..n - 2].to_vec(),
    };
    let factor = interior.factor_ldlt()?;
    let mut u0 = vec![0.0; m];
    u0[0] = a.offdiag[0];
    factor.solve(&mut u0);
    let mut ul = vec![0.0; m];
    ul[m - 1] = a.offdiag[n - 2];
    factor.solve(&mut ul);
    let s00 = a.diag[0] - a.offdiag[0] * u0[0];
    let sll = a.diag[n - 1] - a.offdiag[n - 2] * ul[m - 1];
    let s0l = -a.offdiag[n - 2] * u0[m - 1];
    Ok(([[s00, s0l], [s0l, sll]], Some(factor), u0, ul))
}

/// Revolution reduction: the row and column of the pinned node t = L are
/// dropped, then the remaining interior is eliminated toward node 0.
fn schur_one_boundary(a: &SymTridiagonal) -> Result<(f64, Option<LdltFactor>, Vec<f64>)> {
    let n = a.len();
    if n < 3 {
        return Err(Error::Numerical("revolution mode matrix needs at least three nodes".into()));
    }
    let m = n - 2; // interior nodes 1..n-2 after pinning node n-1
    let interior = SymTridiagonal {
        diag: a.diag[1..n - 1].to_vec(),
        offdiag: a.offdiag[1..n - 2].to_vec(),
    };
    let factor = interior.factor_ldlt()?;
    let mut u0 = vec![0.0; m];
    u0[0] = a.offdiag[0];
    factor.solve(&mut u0);
    let s = a.diag[0] - a.offdiag[0] * u0[0];
    Ok((s, Some(factor), u0))
}

/// Relative residual ||A a - sigma B a|| / ||A a|| with B the boundary
/// weight matrix.
fn fem_residual(a_mat: &SymTridiagonal, a: &[f64], sigma: f64, w0: f64, w_l: f64) -> f64 {
    let n = a.len();
    let aa = a_mat.mul_vec(a);
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        let b = if i == 0 {
            w0 * a[0]
        } else if i == n - 1 {
            w_l * a[n - 1]
        } else {
            0.0
        };
        let r = aa[i] - sigma * b;
        num += r * r;
        den += aa[i] * aa[i];
    }
    if den > 0.0 {
        (num / den).sqrt()
    } else {
        0.0
    }
}

/// FEM solve of a two-boundary mode: assemble, reduce to the 2x2 pencil,
/// solve it in closed form, reconstruct the interior by back-substitution.
pub fn solve_mode_fem(problem: &ModeProblem) -> Result<ModeSolution> {
    if problem.profile.kind() != ProfileKind::ConditionH {
        return Err(Error::Domain(
            "solve_mode_fem expects a two-boundary profile; use solve_mode_revolution".into(),
        ));
    }
    let a_mat = assemble_mode_matrix(problem);
    let n = a_mat.len();
    let (s, _factor, u0, ul) = schur_two_boundary(&a_mat)?;
    let ((mut sig1, sig2), vecs) = generalized_eigen_2x2(s, problem.w0, problem.w_l);

    let reconstruct = |b0: f64, bl: f64| -> Vec<f64> {
        let mut a = vec![0.0; n];
        a[0] = b0;
        a[n - 1] = bl;
        for i in 0..n - 2 {
            a[i + 1] = -(b0 * u0.get(i).copied().unwrap_or(0.0) + bl * ul.get(i).copied().unwrap_or(0.0));
        }
        a
    };
    let mut a1 = reconstruct(vecs[0][0], vecs[1][0]);
    let mut a2 = reconstruct(vecs[0][1], vecs[1][1]);

    if problem.lambda == 0.0 {
        // The kernel of the reduced operator is exactly the constants.
        sig1 = 0.0;
        let c = 1.0 / (problem.w0 + problem.w_l).sqrt();
        a1 = vec![c; n];
    }
    normalize_boundary(&mut a1, problem.w0, problem.w_l);
    normalize_boundary(&mut a2, problem.w0, problem.w_l);

    let residuals = vec![
        fem_residual(&a_mat, &a1, sig1, problem.w0, problem.w_l),
        fem_residual(&a_mat, &a2, sig2, problem.w0, problem.w_l),
    ];
    Ok(ModeSolution {
        sigma_1: sig1,
        sigma_2: Some(sig2),
        nodes: problem.grid.nodes().to_vec(),
        a_1: a1,
        a_2: Some(a2),
        engine: Engine::FemSchur,
        residuals,
    })
}

/// FEM solve of a revolution mode: Dirichlet pin at t = L on the graded
/// grid, scalar Schur complement at t = 0. For lambda = 0 the eigenvalue
/// is 0 with constant eigenfunction and no linear solve happens.
pub fn solve_mode_revolution(problem: &ModeProblem) -> Result<ModeSolution> {
    if problem.profile.kind() != ProfileKind::Revolution {
        return Err(Error::Domain(
            "solve_mode_revolution expects a revolution profile".into(),
        ));
    }
    let nodes = problem.grid.nodes().to_vec();
    let n = nodes.len();
    if problem.lambda == 0.0 {
        let c = 1.0 / problem.w0.sqrt();
        return Ok(ModeSolution {
            sigma_1: 0.0,
            sigma_2: None,
            nodes,
            a_1: vec![c; n],
            a_2: None,
            engine: Engine::FemSchur,
            residuals: vec![0.0],
        });
    }
    let a_mat = assemble_mode_matrix(problem);
    let (s, _factor, u0) = schur_one_boundary(&a_mat)?;
    let sigma = s / problem.w0;
    let mut a = vec![0.0; n];
    a[0] = 1.0;
    for i in 0..n - 2 {
        a[i + 1] = -u0[i];
    }
    a[n - 1] = 0.0;
    normalize_boundary(&mut a, problem.w0, 0.0);

    // Residual over the pinned system (node L removed).
    let pinned = SymTridiagonal {
        diag: a_mat.diag[..n - 1].to_vec(),
        offdiag: a_mat.offdiag[..n - 2].to_vec(),
    };
    let res = fem_residual(&pinned, &a[..n - 1], sigma, problem.w0, 0.0);
    Ok(ModeSolution {
        sigma_1: sigma,
        sigma_2: None,
        nodes,
        a_1: a,
        a_2: None,
        engine: Engine::FemSchur,
        residuals: vec![res],
    })
}
