//! Per-mode 1D Steklov problems.
//!
//! For one cross-section eigenvalue lambda the radial part a solves
//! (h^2 a')' = lambda a with the spectral parameter in the boundary
//! condition: p(0) = -sigma w0 a(0) and p(L) = sigma wL a(L), where
//! p = h^2 a' and the boundary weights are the boundary areas w0 = h(0)^2,
//! wL = h(L)^2 (wL = 0 in the revolution case, where a(L) = 0 replaces the
//! second condition). Two independent engines solve the same problem: a
//! piecewise-linear FEM reduced to the boundary by a Schur complement, and
//! an adaptive Runge-Kutta shooting method.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::profile::{ProfileKind, WarpProfile};
use crate::{fem, shooting};

/// Which engine produced a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    FemSchur,
    Shooting,
}

impl Engine {
    pub fn tag(self) -> &'static str {
        match self {
            Engine::FemSchur => "fem_schur",
            Engine::Shooting => "shooting",
        }
    }
}

/// One radial problem: profile, mesh, cross-section eigenvalue, and the
/// boundary measure weights.
#[derive(Debug, Clone, Copy)]
pub struct ModeProblem<'a> {
    pub profile: &'a WarpProfile,
    pub grid: &'a Grid,
    pub lambda: f64,
    pub w0: f64,
    pub w_l: f64,
}

impl<'a> ModeProblem<'a> {
    pub fn new(profile: &'a WarpProfile, grid: &'a Grid, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::Domain(format!("lambda = {lambda} must be a nonnegative real")));
        }
        if (grid.length() - profile.length()).abs() > 1e-12 * profile.length() {
            return Err(Error::Domain(format!(
                "grid covers [0, {}] but the profile lives on [0, {}]",
                grid.length(),
                profile.length()
            )));
        }
        let h0 = profile.h(0.0);
        let w0 = h0 * h0;
        if !(w0 > 0.0) {
            return Err(Error::Domain(format!("boundary weight h(0)^2 = {w0} must be positive")));
        }
        let w_l = match profile.kind() {
            ProfileKind::ConditionH => {
                let hl = profile.h(profile.length());
                hl * hl
            }
            ProfileKind::Revolution => 0.0,
        };
        Ok(Self { profile, grid, lambda, w0, w_l })
    }
}

/// Eigenpairs of one mode. For two-boundary problems both branches are
/// present; the revolution problem has a single eigenvalue per mode.
/// Eigenfunctions are sampled on the grid nodes and normalized by
/// w0 a(0)^2 + wL a(L)^2 = 1 with a(0) > 0.
#[derive(Debug, Clone)]
pub struct ModeSolution {
    pub sigma_1: f64,
    pub sigma_2: Option<f64>,
    pub nodes: Vec<f64>,
    pub a_1: Vec<f64>,
    pub a_2: Option<Vec<f64>>,
    pub engine: Engine,
    /// Relative residual per eigenpair (engine-specific; see the solvers).
    pub residuals: Vec<f64>,
}

/// Solve one mode with the requested engine, dispatching on the profile
/// kind.
pub fn solve_mode(problem: &ModeProblem, engine: Engine) -> Result<ModeSolution> {
    match (problem.profile.kind(), engine) {
        (ProfileKind::ConditionH, Engine::FemSchur) => fem::solve_mode_fem(problem),
        (ProfileKind::ConditionH, Engine::Shooting) => shooting::solve_mode_shooting(problem, None),
        (ProfileKind::Revolution, Engine::FemSchur) => fem::solve_mode_revolution(problem),
        (ProfileKind::Revolution, Engine::Shooting) => {
            shooting::solve_mode_revolution_shooting(problem)
        }
    }
}

/// Normalize to unit boundary norm, a(0) > 0 (falling back to a(L) > 0
/// when the trace at 0 vanishes).
pub(crate) fn normalize_boundary(a: &mut [f64], w0: f64, w_l: f64) {
    let n = a.len();
    let norm = (w0 * a[0] * a[0] + w_l * a[n - 1] * a[n - 1]).sqrt();
    if norm > 0.0 {
        let anchor = if a[0].abs() > 1e-8 * a[n - 1].abs() { a[0] } else { a[n - 1] };
        let s = anchor.signum() / norm;
        for v in a.iter_mut() {
            *v *= s;
        }
    }
}

/// Integral of h^2 over [a, b] by 3-point Gauss (exact through degree 5).
pub(crate) fn element_h2_integral(profile: &WarpProfile, a: f64, b: f64) -> f64 {
    const X: f64 = 0.7745966692414834; // sqrt(3/5)
    const W_MID: f64 = 8.0 / 9.0;
    const W_OUT: f64 = 5.0 / 9.0;
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in [(-X, W_OUT), (0.0, W_MID), (X, W_OUT)] {
        let h = profile.h(mid + half * x);
        acc += w * h * h;
    }
    acc * half
}

/// Rayleigh quotient of a node-sampled function:
/// (int a'^2 h^2 + lambda a^2 dt) / (w0 a(0)^2 + wL a(L)^2),
/// with the same element quadrature the assembly uses.
pub fn rayleigh_quotient(a: &[f64], problem: &ModeProblem) -> Result<f64> {
    let nodes = problem.grid.nodes();
    if a.len() != nodes.len() {
        return Err(Error::Domain(format!(
            "sampled function has {} values but the grid has {} nodes",
            a.len(),
            nodes.len()
        )));
    }
    let n = a.len();
    let denom = problem.w0 * a[0] * a[0] + problem.w_l * a[n - 1] * a[n - 1];
    if denom <= 0.0 {
        return Err(Error::Domain("test function has zero boundary trace".into()));
    }
    let mut num = 0.0;
    for i in 0..n - 1 {
        let (t0, t1) = (nodes[i], nodes[i + 1]);
        let len = t1 - t0;
        let slope = (a[i + 1] - a[i]) / len;
        let w = element_h2_integral(problem.profile, t0, t1);
        num += slope * slope * w;
        // Exact integral of the square of a linear function.
        num += problem.lambda * len * (a[i] * a[i] + a[i] * a[i + 1] + a[i + 1] * a[i + 1]) / 3.0;
    }
    Ok(num / denom)
}

/// Least-squares exponent of |a| ~ C (L - t)^alpha over the nodes nearest
/// the degenerate endpoint. Nodes with |a| below 1e-9 of the peak are
/// ignored, and the fit window is the last usable decade of L - t.
pub fn frobenius_exponent_fit(nodes: &[f64], a: &[f64], length: f64) -> Option<f64> {
    let peak = a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return None;
    }
    let usable: Vec<(f64, f64)> = nodes
        .iter()
        .zip(a.iter())
        .filter_map(|(&t, &v)| {
            let d = length - t;
            (d > 0.0 && v.abs() > 1e-9 * peak).then(|| (d, v.abs()))
        })
        .collect();
    let d_min = usable.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    if !d_min.is_finite() {
        return None;
    }
    let window: Vec<(f64, f64)> = usable
        .into_iter()
        .filter(|&(d, _)| d <= 10.0 * d_min)
        .collect();
    if window.len() < 3 {
        return None;
    }
    let n = window.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for (d, v) in window {
        let x = d.ln();
        let y = v.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = n * sxx - sx * sx;
    (denom.abs() > 0.0).then(|| (n * sxy - sx * sy) / denom)
}
