//! Shooting engine: the independent oracle for the FEM path.
//!
//! The first-order system (a, p = h^2 a') with a(0) = 1, p(0) = -sigma w0
//! is integrated by adaptive Dormand-Prince RK45; the boundary mismatch
//! F(sigma) = p(L) - sigma wL a(L) vanishes exactly at Steklov eigenvalues.
//! Because the ODE is linear, F is a quadratic in sigma whose coefficients
//! come from the transfer matrix of the interval (two sigma-independent
//! integrations); its two roots, polished by a bracketed Brent pass on F
//! itself, are sigma_{j,1} <= sigma_{j,2}. The revolution case needs no
//! root search at all: integrating backward from a Frobenius seed
//! a ~ (L-t)^alpha at distance delta from the pole determines sigma as
//! -p(0) / (w0 a(0)).

use crate::error::{Error, Result};
use crate::mode::{normalize_boundary, Engine, ModeProblem, ModeSolution};
use crate::profile::{ProfileKind, WarpProfile};

/// Default relative tolerance of the integrator. Chosen a notch below the
/// root tolerance so boundary values of eigenfunctions are reliable to
/// about 1e-10.
pub const DEFAULT_RTOL: f64 = 1e-12;
const ATOL: f64 = 1e-14;
const ROOT_TOL: f64 = 1e-12;
/// The default bracket [1e-9, 2 L lambda] is accepted after up to six
/// doublings of its upper end.
const MAX_WIDENINGS: usize = 6;

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4)

const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

type State = [f64; 2];

fn axpy(y: State, ks: &[State], coeffs: &[f64], h: f64) -> State {
    let mut out = y;
    for (k, c) in ks.iter().zip(coeffs.iter()) {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// One adaptive segment [t0, t1] (either direction). The right-hand side
/// must be smooth on the open segment; callers split at breakpoints.
fn rk45_segment<F>(f: &F, t0: f64, t1: f64, y0: State, rtol: f64) -> Result<State>
where
    F: Fn(f64, State) -> State,
{
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0;
    let mut h = span;
    let min_step = 1e-14 * span.abs().max(1.0);
    let mut k1 = f(t, y);
    loop {
        let remaining = t1 - t;
        if remaining == 0.0 || remaining.signum() != dir {
            return Ok(y);
        }
        if h.abs() > remaining.abs() {
            h = remaining;
        }
        let k2 = f(t + C[0] * h, axpy(y, &[k1], &A2, h));
        let k3 = f(t + C[1] * h, axpy(y, &[k1, k2], &A3, h));
        let k4 = f(t + C[2] * h, axpy(y, &[k1, k2, k3], &A4, h));
        let k5 = f(t + C[3] * h, axpy(y, &[k1, k2, k3, k4], &A5, h));
        let k6 = f(t + C[4] * h, axpy(y, &[k1, k2, k3, k4, k5], &A6, h));
        let ks5 = [k1, k2, k3, k4, k5, k6];
        let y5 = axpy(y, &ks5, &B5[..6], h);
        let k7 = f(t + h, y5);
        let ks = [k1, k2, k3, k4, k5, k6, k7];
        let y4 = axpy(y, &ks, &B4, h);

        let mut err: f64 = 0.0;
        for i in 0..2 {
            let scale = ATOL + rtol * y[i].abs().max(y5[i].abs());
            err = err.max(((y5[i] - y4[i]) / scale).abs());
        }
        if !err.is_finite() {
            return Err(Error::Numerical(format!(
                "shooting integration diverged near t = {t} (non-finite step error)"
            )));
        }
        if err <= 1.0 {
            t += h;
            y = y5;
            k1 = k7; // first-same-as-last
            let grow = if err > 0.0 { 0.9 * err.powf(-0.2) } else { 5.0 };
            h *= grow.clamp(0.2, 5.0);
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            if h.abs() < min_step {
                return Err(Error::Numerical(format!(
                    "shooting step size underflow near t = {t}"
                )));
            }
        }
    }
}

/// Integrate through an ordered list of checkpoints, returning the state at
/// each (the first checkpoint carries y0). Checkpoints must be monotone.
fn rk45_checkpoints<F>(f: &F, checkpoints: &[f64], y0: State, rtol: f64) -> Result<Vec<State>>
where
    F: Fn(f64, State) -> State,
{
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut y = y0;
    out.push(y);
    for w in checkpoints.windows(2) {
        y = rk45_segment(f, w[0], w[1], y, rtol)?;
        out.push(y);
    }
    Ok(out)
}

/// Split points of [0, L] for forward integration: endpoints plus profile
/// breakpoints.
fn split_points(profile: &WarpProfile) -> Vec<f64> {
    let mut pts = vec![0.0];
    pts.extend(
        profile
            .breakpoints()
            .iter()
            .copied()
            .filter(|&b| b > 0.0 && b < profile.length()),
    );
    pts.push(profile.length());
    pts.sort_by(|a, b| a.total_cmp(b));
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-15 * profile.length());
    pts
}

fn mode_rhs<'a>(profile: &'a WarpProfile, lambda: f64) -> impl Fn(f64, State) -> State + 'a {
    move |t, y| {
        let h = profile.h(t);
        [y[1] / (h * h), lambda * y[0]]
    }
}

/// Boundary mismatch F(sigma) = p(L) - sigma wL a(L) of the initial-value
/// solution with a(0) = 1, p(0) = -sigma w0.
pub(crate) fn shooting_mismatch(problem: &ModeProblem, sigma: f64, rtol: f64) -> Result<f64> {
    let f = mode_rhs(problem.profile, problem.lambda);
    let pts = split_points(problem.profile);
    let y0 = [1.0, -sigma * problem.w0];
    let states = rk45_checkpoints(&f, &pts, y0, rtol)?;
    let end = states[states.len() - 1];
    Ok(end[1] - sigma * problem.w_l * end[0])
}

/// Transfer matrix of (a, p) across [0, L]: column k is the endpoint state
/// of the solution with unit k-th initial component.
fn transfer_matrix(problem: &ModeProblem, rtol: f64) -> Result<[[f64; 2]; 2]> {
    let f = mode_rhs(problem.profile, problem.lambda);
    let pts = split_points(problem.profile);
    let e0 = *rk45_checkpoints(&f, &pts, [1.0, 0.0], rtol)?.last().unwrap();
    let e1 = *rk45_checkpoints(&f, &pts, [0.0, 1.0], rtol)?.last().unwrap();
    Ok([[e0[0], e1[0]], [e0[1], e1[1]]])
}

// ---------------------------------------------------------------------------
// Brent root refinement

fn brent<F>(mut f: F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(Error::Numerical("brent: root not bracketed".into()));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.abs() > fc.abs() {
            std::mem::swap(&mut b, &mut c);
            std::mem::swap(&mut fb, &mut fc);
            a = c;
            fa = fc;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let q0 = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * q0 * (q0 - r) - (b - a) * (r - 1.0));
                q = (q0 - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    Ok(b)
}

// ---------------------------------------------------------------------------
// Two-boundary shooting solve

/// Shooting solve of a two-boundary mode. `bracket` overrides the default
/// sigma interval [1e-9, 2 L lambda].
pub fn solve_mode_shooting(
    problem: &ModeProblem,
    bracket: Option<(f64, f64)>,
) -> Result<ModeSolution> {
    if problem.profile.kind() != ProfileKind::ConditionH {
        return Err(Error::Domain(
            "solve_mode_shooting expects a two-boundary profile".into(),
        ));
    }
    if problem.lambda == 0.0 {
        return solve_zero_mode_shooting(problem);
    }
    let rtol = DEFAULT_RTOL;
    let l = problem.profile.length();
    let (lo, hi0) = bracket.unwrap_or((1e-9, 2.0 * l * problem.lambda));
    if !(hi0 > lo) {
        return Err(Error::Domain(format!("invalid sigma bracket [{lo}, {hi0}]")));
    }

    // Linearity of the ODE makes F a quadratic in sigma:
    //   F(s) = w0 wL M01 s^2 - (w0 M11 + wL M00) s + M10,
    // with M the transfer matrix. Its two roots locate both eigenvalues in
    // one shot; a scan of F cannot, because the roots merge exponentially
    // fast in sqrt(lambda) L (on the cylinder their gap is
    // 2 sqrt(lambda) / sinh(sqrt(lambda) L)).
    let m = transfer_matrix(problem, rtol)?;
    if !m.iter().flatten().all(|v| v.is_finite()) {
        return Err(Error::Numerical(
            "transfer matrix overflowed; lambda is too large for shooting on this profile".into(),
        ));
    }
    let qa = problem.w0 * problem.w_l * m[0][1];
    let qb = -(problem.w0 * m[1][1] + problem.w_l * m[0][0]);
    let qc = m[1][0];
    if !(qa > 0.0) {
        return Err(Error::Numerical(format!(
            "degenerate boundary mismatch (leading coefficient {qa})"
        )));
    }
    // Roundoff can push the discriminant of a near-double root below zero.
    let disc = (qb * qb - 4.0 * qa * qc).max(0.0);
    let q = 0.5 * (qb.abs() + disc.sqrt());
    let (mut sig1, mut sig2) = (qc / q, q / qa);
    if sig1 > sig2 {
        std::mem::swap(&mut sig1, &mut sig2);
    }

    // Polish each root on F itself with a bracketed Brent pass; if F does
    // not change sign in the local bracket (double-root territory) the
    // quadratic value stands.
    let polish = |sigma: f64| -> Result<f64> {
        let w = 1e-6 * sigma.abs() + 1e-12;
        let (s_lo, s_hi) = (sigma - w, sigma + w);
        let f_lo = shooting_mismatch(problem, s_lo, rtol)?;
        let f_hi = shooting_mismatch(problem, s_hi, rtol)?;
        if f_lo == 0.0 {
            return Ok(s_lo);
        }
        if f_hi == 0.0 {
            return Ok(s_hi);
        }
        if f_lo * f_hi < 0.0 {
            brent(|x| shooting_mismatch(problem, x, rtol), s_lo, s_hi, f_lo, f_hi, ROOT_TOL)
        } else {
            Ok(sigma)
        }
    };
    sig1 = polish(sig1)?;
    sig2 = polish(sig2)?;

    // Bracket contract: a caller-supplied bracket must contain both roots;
    // the default one is accepted after its documented widenings.
    let hi_eff = if bracket.is_some() { hi0 } else { hi0 * (1 << MAX_WIDENINGS) as f64 };
    if sig1 < lo || sig2 > hi_eff {
        return Err(Error::RootNotFound {
            lo,
            hi: hi_eff,
            widenings: if bracket.is_some() { 0 } else { MAX_WIDENINGS },
        });
    }

    let (a1, r1) = shooting_eigenfunction(problem, sig1, rtol)?;
    let (a2, r2) = shooting_eigenfunction(problem, sig2, rtol)?;
    Ok(ModeSolution {
        sigma_1: sig1,
        sigma_2: Some(sig2),
        nodes: problem.grid.nodes().to_vec(),
        a_1: a1,
        a_2: Some(a2),
        engine: Engine::Shooting,
        residuals: vec![r1, r2],
    })
}

/// Sample the eigenfunction at the grid nodes for a given root. Returns
/// the normalized values and the relative boundary mismatch.
fn shooting_eigenfunction(
    problem: &ModeProblem,
    sigma: f64,
    rtol: f64,
) -> Result<(Vec<f64>, f64)> {
    let f = mode_rhs(problem.profile, problem.lambda);
    let nodes = problem.grid.nodes();
    let y0 = [1.0, -sigma * problem.w0];
    let states = rk45_checkpoints(&f, nodes, y0, rtol)?;
    let end = states[states.len() - 1];
    let mismatch = end[1] - sigma * problem.w_l * end[0];
    let scale = end[1].abs() + (sigma * problem.w_l * end[0]).abs() + f64::MIN_POSITIVE;
    let mut a: Vec<f64> = states.iter().map(|s| s[0]).collect();
    normalize_boundary(&mut a, problem.w0, problem.w_l);
    Ok((a, mismatch.abs() / scale))
}

/// lambda = 0: p is constant, so a(t) = a(0) - sigma w0 int_0^t h^{-2} and
/// the mismatch is a quadratic in sigma with roots 0 and
/// (w0 + wL) / (w0 wL int h^{-2}). The quadrature runs through the same
/// integrator.
fn solve_zero_mode_shooting(problem: &ModeProblem) -> Result<ModeSolution> {
    let profile = problem.profile;
    let rtol = DEFAULT_RTOL;
    let f = |t: f64, _y: State| -> State {
        let h = profile.h(t);
        [1.0 / (h * h), 0.0]
    };
    let nodes = problem.grid.nodes();
    let states = rk45_checkpoints(&f, nodes, [0.0, 0.0], rtol)?;
    let q: Vec<f64> = states.iter().map(|s| s[0]).collect();
    let integral = q[q.len() - 1];
    let sig2 = (problem.w0 + problem.w_l) / (problem.w0 * problem.w_l * integral);
    let n = nodes.len();
    let mut a1 = vec![1.0; n];
    normalize_boundary(&mut a1, problem.w0, problem.w_l);
    let mut a2: Vec<f64> = q.iter().map(|&qi| 1.0 - sig2 * problem.w0 * qi).collect();
    normalize_boundary(&mut a2, problem.w0, problem.w_l);
    Ok(ModeSolution {
        sigma_1: 0.0,
        sigma_2: Some(sig2),
        nodes: nodes.to_vec(),
        a_1: a1,
        a_2: Some(a2),
        engine: Engine::Shooting,
        residuals: vec![0.0, 0.0],
    })
}

// ---------------------------------------------------------------------------
// Revolution shooting

/// Offset (as a fraction of L) of the Frobenius seed from the pole.
const FROBENIUS_DELTA_FRACTION: f64 = 1e-6;

/// Frobenius exponent of the regular solution at the degenerate endpoint.
pub fn frobenius_exponent(lambda: f64) -> f64 {
    0.5 * (-1.0 + (1.0 + 4.0 * lambda).sqrt())
}

/// Revolution solve by backward integration from a Frobenius seed
/// a = (L-t)^alpha at distance delta = 1e-6 L from the pole; sigma is read
/// off as -p(0) / (w0 a(0)). No root search is involved: the regular
/// solution is unique up to scale. The residual reported is the relative
/// change of sigma when the seed offset is halved.
pub fn solve_mode_revolution_shooting(problem: &ModeProblem) -> Result<ModeSolution> {
    if problem.profile.kind() != ProfileKind::Revolution {
        return Err(Error::Domain(
            "solve_mode_revolution_shooting expects a revolution profile".into(),
        ));
    }
    let nodes = problem.grid.nodes();
    let n = nodes.len();
    if problem.lambda == 0.0 {
        let c = 1.0 / problem.w0.sqrt();
        return Ok(ModeSolution {
            sigma_1: 0.0,
            sigma_2: None,
            nodes: nodes.to_vec(),
            a_1: vec![c; n],
            a_2: None,
            engine: Engine::Shooting,
            residuals: vec![0.0],
        });
    }
    let l = problem.profile.length();
    let delta = FROBENIUS_DELTA_FRACTION * l;
    let (sigma, boundary_a, states, start_idx) =
        integrate_from_pole(problem, delta, DEFAULT_RTOL)?;
    let (sigma_half, _, _, _) = integrate_from_pole(problem, 0.5 * delta, DEFAULT_RTOL)?;
    let residual = (sigma - sigma_half).abs() / sigma.abs().max(f64::MIN_POSITIVE);

    // Assemble nodal values: integrated states below the seed, Frobenius
    // tail above it, exact zero at the pole.
    let alpha = frobenius_exponent(problem.lambda);
    let seed_value = states[0][0];
    let mut a = vec![0.0; n];
    for (offset, s) in states.iter().enumerate() {
        a[start_idx - offset] = s[0];
    }
    for (i, &t) in nodes.iter().enumerate().skip(start_idx + 1) {
        let d = l - t;
        a[i] = if d > 0.0 { seed_value * (d / delta).powf(alpha) } else { 0.0 };
    }
    let scale = 1.0 / (boundary_a * problem.w0.sqrt());
    for v in a.iter_mut() {
        *v *= scale;
    }
    Ok(ModeSolution {
        sigma_1: sigma,
        sigma_2: None,
        nodes: nodes.to_vec(),
        a_1: a,
        a_2: None,
        engine: Engine::Shooting,
        residuals: vec![residual],
    })
}

/// Integrate the mode system from t = L - delta down to 0 with the
/// Frobenius seed. Returns (sigma, a(0), recorded states at grid nodes
/// below the seed in descending order, index of the last node below the
/// seed).
fn integrate_from_pole(
    problem: &ModeProblem,
    delta: f64,
    rtol: f64,
) -> Result<(f64, f64, Vec<State>, usize)> {
    let profile = problem.profile;
    let l = profile.length();
    let lambda = problem.lambda;
    let alpha = frobenius_exponent(lambda);
    let t_seed = l - delta;
    let h_seed = profile.h(t_seed);
    let y_seed = [delta.powf(alpha), -alpha * delta.powf(alpha - 1.0) * h_seed * h_seed];

    let nodes = problem.grid.nodes();
    let start_idx = nodes
        .iter()
        .rposition(|&t| t <= t_seed)
        .ok_or_else(|| Error::Numerical("no grid node below the Frobenius seed".into()))?;
    // Descending checkpoint list: seed, nodes below it, down to 0.
    let mut checkpoints = vec![t_seed];
    for &t in nodes[..=start_idx].iter().rev() {
        checkpoints.push(t);
    }
    let f = mode_rhs(profile, lambda);
    let states = rk45_checkpoints(&f, &checkpoints, y_seed, rtol)?;
    let at_zero = states[states.len() - 1];
    let (a0, p0) = (at_zero[0], at_zero[1]);
    if a0 == 0.0 || !a0.is_finite() || !p0.is_finite() {
        return Err(Error::Numerical(format!(
            "revolution shooting produced unusable boundary data (a(0) = {a0}, p(0) = {p0})"
        )));
    }
    let sigma = -p0 / (problem.w0 * a0);
    // states[0] is the seed itself; drop it so entries align with nodes
    // start_idx, start_idx - 1, ..., 0.
    Ok((sigma, a0, states[1..].to_vec(), start_idx))
}
