//! Warping profiles h on [0, L].
//!
//! Two admissibility classes: two-boundary profiles with h(0) = h(L) = 1,
//! and revolution profiles with h(L) = 0, h'(L) = -1 (the metric closes at
//! the pole, the only boundary is t = 0). Besides the cylinder, the module
//! builds the plateau families that realize the sharp bounds: value 1 (or
//! h0) near the ends, a constant plateau in the middle, and quintic
//! smoothstep transitions of width epsilon so that every profile is C^2.
//! Arbitrary profiles enter as sampled tables with monotone-cubic
//! interpolation.

use crate::error::{Error, Result};

/// Quintic smoothstep: s(0) = 0, s(1) = 1, s' = s'' = 0 at both ends.
fn smoothstep(x: f64) -> f64 {
    x * x * x * (10.0 + x * (-15.0 + 6.0 * x))
}

fn smoothstep_prime(x: f64) -> f64 {
    30.0 * x * x * (1.0 - x) * (1.0 - x)
}

/// Admissibility class of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    /// h(0) = h(L) = 1; Steklov boundary at both ends.
    ConditionH,
    /// h(L) = 0, h'(L) = -1; Steklov boundary at t = 0 only.
    Revolution,
}

#[derive(Debug, Clone)]
enum Shape {
    Cylinder,
    Plateau { eps: f64, plateau: f64 },
    RevolutionPlateau { eps: f64, h0: f64 },
    Capped { h0: f64 },
    Table(MonotoneCubic),
}

/// A warping function on [0, L] with its derivative.
#[derive(Debug, Clone)]
pub struct WarpProfile {
    length: f64,
    kind: ProfileKind,
    label: String,
    breakpoints: Vec<f64>,
    shape: Shape,
}

impl WarpProfile {
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Interior knots where the profile is less smooth than elsewhere;
    /// grids insert these as nodes and integrators split at them.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn h(&self, t: f64) -> f64 {
        self.eval(t).0
    }

    pub fn h_prime(&self, t: f64) -> f64 {
        self.eval(t).1
    }

    /// (h(t), h'(t)).
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let l = self.length;
        match &self.shape {
            Shape::Cylinder => (1.0, 0.0),
            Shape::Plateau { eps, plateau } => {
                let (e, p) = (*eps, *plateau);
                if t <= e || t >= l - e {
                    (1.0, 0.0)
                } else if t < 2.0 * e {
                    let x = (t - e) / e;
                    (1.0 + (p - 1.0) * smoothstep(x), (p - 1.0) * smoothstep_prime(x) / e)
                } else if t <= l - 2.0 * e {
                    (p, 0.0)
                } else {
                    let x = (t - (l - 2.0 * e)) / e;
                    (p + (1.0 - p) * smoothstep(x), (1.0 - p) * smoothstep_prime(x) / e)
                }
            }
            Shape::RevolutionPlateau { eps, h0 } => {
                let (e, h0) = (*eps, *h0);
                let top = h0 / e;
                if t <= e {
                    (h0, 0.0)
                } else if t < 2.0 * e {
                    let x = (t - e) / e;
                    (h0 + (top - h0) * smoothstep(x), (top - h0) * smoothstep_prime(x) / e)
                } else if t <= l - 2.0 * e {
                    (top, 0.0)
                } else if t < l - e {
                    // Blend the plateau into the line L - t; smoothstep ends
                    // make value and slope match both neighbours.
                    let x = (t - (l - 2.0 * e)) / e;
                    let s = smoothstep(x);
                    let sp = smoothstep_prime(x) / e;
                    let line = l - t;
                    ((1.0 - s) * top + s * line, sp * (line - top) - s)
                } else {
                    (l - t, -1.0)
                }
            }
            Shape::Capped { h0 } => {
                // h(t) = (L - t) * (1 + (h0/L - 1) s((L - t)/L)).
                let x = (l - t) / l;
                let c = h0 / l - 1.0;
                let u = 1.0 + c * smoothstep(x);
                let up = c * smoothstep_prime(x);
                (l * x * u, -(u + x * up))
            }
            Shape::Table(cubic) => cubic.eval(t),
        }
    }
}

/// Constant profile h = 1 (the cylinder over the cross-section).
pub fn cylinder(length: f64) -> Result<WarpProfile> {
    if !(length > 0.0) {
        return Err(Error::Domain(format!("interval length {length} must be positive")));
    }
    Ok(WarpProfile {
        length,
        kind: ProfileKind::ConditionH,
        label: format!("cylinder L={length}"),
        breakpoints: Vec::new(),
        shape: Shape::Cylinder,
    })
}

fn check_plateau_params(length: f64, eps: f64) -> Result<()> {
    if !(length > 0.0) {
        return Err(Error::Domain(format!("interval length {length} must be positive")));
    }
    if !(eps > 0.0) || eps >= length / 4.0 {
        return Err(Error::Domain(format!(
            "epsilon {eps} must lie in (0, L/4) = (0, {}) or the plateau vanishes",
            length / 4.0
        )));
    }
    Ok(())
}

/// Two-boundary plateau family: h = 1 on [0, eps] and [L-eps, L], h =
/// `plateau` on [2 eps, L-2 eps], smoothstep transitions in between.
/// Plateau 1/eps drives sigma_j toward the supremum, plateau eps^2 collapses
/// the spectrum to zero.
pub fn plateau_family(length: f64, eps: f64, plateau: f64) -> Result<WarpProfile> {
    check_plateau_params(length, eps)?;
    if !(plateau > 0.0) {
        return Err(Error::Domain(format!("plateau value {plateau} must be positive")));
    }
    Ok(WarpProfile {
        length,
        kind: ProfileKind::ConditionH,
        label: format!("plateau L={length} eps={eps} plateau={plateau}"),
        breakpoints: vec![eps, 2.0 * eps, length - 2.0 * eps, length - eps],
        shape: Shape::Plateau { eps, plateau },
    })
}

/// Revolution plateau family: h = h0 on [0, eps], h = h0/eps on
/// [2 eps, L-2 eps], h = L-t on [L-eps, L]; the endpoint conditions
/// h(L) = 0 and h'(L) = -1 hold exactly by construction.
pub fn revolution_plateau(length: f64, eps: f64, h0: f64) -> Result<WarpProfile> {
    check_plateau_params(length, eps)?;
    if !(h0 > 0.0) {
        return Err(Error::Domain(format!("boundary value h0 = {h0} must be positive")));
    }
    Ok(WarpProfile {
        length,
        kind: ProfileKind::Revolution,
        label: format!("revolution plateau L={length} eps={eps} h0={h0}"),
        breakpoints: vec![eps, 2.0 * eps, length - 2.0 * eps, length - eps],
        shape: Shape::RevolutionPlateau { eps, h0 },
    })
}

/// Generic smooth revolution profile for bound tests:
///
///   h(t) = (L - t) * (1 + (h0/L - 1) * s((L - t)/L)),
///
/// with s the quintic smoothstep. Then h(0) = h0, h(L) = 0, h'(L) = -1
/// exactly, h > 0 on [0, L), and h = (L - t)(1 + O(((L-t)/L)^3)) near the
/// pole.
pub fn capped(length: f64, h0: f64) -> Result<WarpProfile> {
    if !(length > 0.0) {
        return Err(Error::Domain(format!("interval length {length} must be positive")));
    }
    if !(h0 > 0.0) {
        return Err(Error::Domain(format!("boundary value h0 = {h0} must be positive")));
    }
    Ok(WarpProfile {
        length,
        kind: ProfileKind::Revolution,
        label: format!("capped L={length} h0={h0}"),
        breakpoints: Vec::new(),
        shape: Shape::Capped { h0 },
    })
}

/// Profile from a sampled table, monotone-cubic interpolated. The table
/// must include both endpoints; the kind is inferred from h at t = L
/// (zero means revolution).
pub fn table_profile(t: &[f64], h: &[f64]) -> Result<WarpProfile> {
    let cubic = MonotoneCubic::new(t, h)?;
    let length = *t.last().unwrap();
    if t[0] != 0.0 {
        return Err(Error::Domain("table must start at t = 0".into()));
    }
    let kind = if h[h.len() - 1] == 0.0 {
        ProfileKind::Revolution
    } else {
        ProfileKind::ConditionH
    };
    Ok(WarpProfile {
        length,
        kind,
        label: format!("table ({} samples)", t.len()),
        breakpoints: t[1..t.len() - 1].to_vec(),
        shape: Shape::Table(cubic),
    })
}

/// Reproducible random admissible profile for property suites: h = exp(g)
/// with g a low-order random sine series vanishing at both ends, sampled
/// into a table. Always satisfies h(0) = h(L) = 1 and h > 0.
pub fn seeded_profile(length: f64, seed: u64) -> WarpProfile {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<f64> = (1..=4)
        .map(|k| rng.gen_range(-0.5..0.5) / k as f64)
        .collect();
    let g = |t: f64| -> f64 {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * ((i + 1) as f64 * std::f64::consts::PI * t / length).sin())
            .sum()
    };
    let n = 200;
    let ts: Vec<f64> = (0..=n).map(|i| length * i as f64 / n as f64).collect();
    let mut hs: Vec<f64> = ts.iter().map(|&t| g(t).exp()).collect();
    hs[0] = 1.0;
    hs[n] = 1.0;
    let mut profile = table_profile(&ts, &hs).expect("seeded table is well formed");
    profile.label = format!("seeded table #{seed}");
    profile
}

// ---------------------------------------------------------------------------
// Validation

/// One failed check with the location of the first violation.
#[derive(Debug, Clone)]
pub struct ValidationFailure {
    pub what: String,
    pub location: f64,
}

/// Outcome of dense-sampling validation.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub pass: bool,
    pub failures: Vec<ValidationFailure>,
    pub samples: usize,
}

/// Check the kind-specific invariants by dense sampling (default 10^4
/// points) and finite-difference consistency of h' against h.
pub fn validate(profile: &WarpProfile) -> ValidationReport {
    validate_with_samples(profile, 10_000)
}

pub fn validate_with_samples(profile: &WarpProfile, samples: usize) -> ValidationReport {
    let l = profile.length();
    let mut failures = Vec::new();
    let mut fail = |what: String, location: f64| failures.push(ValidationFailure { what, location });

    // Endpoint conditions. Built-in families satisfy them exactly; tables
    // get the finite-difference tolerance on the derivative condition.
    match profile.kind() {
        ProfileKind::ConditionH => {
            for t in [0.0, l] {
                let h = profile.h(t);
                if (h - 1.0).abs() > 1e-9 {
                    fail(format!("condition (H) requires h = 1 at the ends, got {h}"), t);
                }
            }
        }
        ProfileKind::Revolution => {
            let h_end = profile.h(l);
            if h_end.abs() > 1e-9 {
                fail(format!("revolution profile requires h(L) = 0, got {h_end}"), l);
            }
            let hp_end = profile.h_prime(l);
            if (hp_end + 1.0).abs() > 1e-6 {
                fail(format!("revolution profile requires h'(L) = -1, got {hp_end}"), l);
            }
        }
    }

    // Positivity on [0, L) (and at L for two-boundary profiles).
    for i in 0..=samples {
        let t = l * i as f64 / samples as f64;
        let h = profile.h(t);
        if !h.is_finite() {
            fail(format!("h is not finite ({h})"), t);
            break;
        }
        let interior_of_domain = profile.kind() == ProfileKind::ConditionH || i < samples;
        if interior_of_domain && h <= 0.0 {
            fail(format!("h must be positive, got {h}"), t);
            break;
        }
    }

    // Central finite differences of h against the reported h', away from
    // breakpoints and endpoints.
    let delta = 1e-6 * l;
    let scale = (0..=samples)
        .map(|i| profile.h_prime(l * i as f64 / samples as f64).abs())
        .fold(1.0_f64, f64::max);
    let mut fd_failure: Option<(f64, f64, f64)> = None;
    for i in 1..samples {
        let t = l * i as f64 / samples as f64;
        if t < 2.0 * delta || t > l - 2.0 * delta {
            continue;
        }
        if profile.breakpoints().iter().any(|&b| (t - b).abs() < 2.0 * delta) {
            continue;
        }
        let fd = (profile.h(t + delta) - profile.h(t - delta)) / (2.0 * delta);
        let hp = profile.h_prime(t);
        if (fd - hp).abs() > 1e-6 * scale {
            fd_failure = Some((t, fd, hp));
            break;
        }
    }
    if let Some((t, fd, hp)) = fd_failure {
        fail(format!("h' = {hp} inconsistent with finite difference {fd}"), t);
    }

    ValidationReport { pass: failures.is_empty(), failures, samples }
}

// ---------------------------------------------------------------------------
// Monotone cubic interpolation (Fritsch-Carlson) for sampled tables.

#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    t: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(t: &[f64], y: &[f64]) -> Result<Self> {
        if t.len() != y.len() {
            return Err(Error::Domain(format!(
                "table lengths differ: {} abscissae vs {} values",
                t.len(),
                y.len()
            )));
        }
        if t.len() < 2 {
            return Err(Error::Domain("table needs at least two samples".into()));
        }
        for pair in t.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::Domain(format!(
                    "table abscissae must be strictly increasing ({} then {})",
                    pair[0], pair[1]
                )));
            }
        }
        let n = t.len();
        let h: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
        let slope: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
        let mut d = vec![0.0; n];
        for i in 1..n - 1 {
            if slope[i - 1] * slope[i] <= 0.0 {
                d[i] = 0.0;
            } else {
                // Weighted harmonic mean keeps the interpolant monotone.
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                d[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
            }
        }
        d[0] = end_derivative(h[0], h.get(1).copied(), slope[0], slope.get(1).copied());
        d[n - 1] = end_derivative(
            h[n - 2],
            (n >= 3).then(|| h[n - 3]),
            slope[n - 2],
            (n >= 3).then(|| slope[n - 3]),
        );
        Ok(Self { t: t.to_vec(), y: y.to_vec(), d })
    }

    /// (value, derivative) by cubic Hermite on the containing interval.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let n = self.t.len();
        let x = x.clamp(self.t[0], self.t[n - 1]);
        let i = match self.t.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        };
        let h = self.t[i + 1] - self.t[i];
        let s = (x - self.t[i]) / h;
        let (y0, y1, d0, d1) = (self.y[i], self.y[i + 1], self.d[i], self.d[i + 1]);
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        let value = h00 * y0 + h * h10 * d0 + h01 * y1 + h * h11 * d1;
        let dh00 = 6.0 * s * (s - 1.0);
        let dh10 = (1.0 - s) * (1.0 - 3.0 * s);
        let dh01 = -dh00;
        let dh11 = s * (3.0 * s - 2.0);
        let deriv = (dh00 * y0 + h * dh10 * d0 + dh01 * y1 + h * dh11 * d1) / h;
        (value, deriv)
    }
}

/// Shape-preserving three-point end derivative (clamped as in PCHIP).
fn end_derivative(h0: f64, h1: Option<f64>, s0: f64, s1: Option<f64>) -> f64 {
    let (h1, s1) = match (h1, s1) {
        (Some(h1), Some(s1)) => (h1, s1),
        _ => return s0,
    };
    let mut d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if d * s0 <= 0.0 {
        d = 0.0;
    } else if s0 * s1 <= 0.0 && d.abs() > 3.0 * s0.abs() {
        d = 3.0 * s0;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cylinder_is_constant() {
        let p = cylinder(2.0).unwrap();
        assert_eq!(p.h(1.0), 1.0);
        assert_eq!(p.h_prime(0.5), 0.0);
        assert!(validate(&cylinder(1.0).unwrap()).pass);
        assert!(cylinder(0.0).is_err());
        assert!(cylinder(-1.0).is_err());
    }

    #[test]
    fn plateau_family_values() {
        let p = plateau_family(1.0, 0.1, 10.0).unwrap();
        assert_eq!(p.h(0.05), 1.0);
        assert_eq!(p.h(0.5), 10.0);
        let collapse = plateau_family(1.0, 0.1, 0.01).unwrap();
        assert_eq!(collapse.h(0.5), 0.01);
        // Monotone transition strictly between the levels.
        let mid = p.h(0.15);
        assert!(mid > 1.0 && mid < 10.0, "h(0.15) = {mid}");
        assert!(p.h_prime(0.15) > 0.0);
        assert!(plateau_family(1.0, 0.25, 10.0).is_err());
        assert!(plateau_family(1.0, 0.3, 10.0).is_err());
    }

    #[test]
    fn revolution_plateau_endpoints_exact() {
        let p = revolution_plateau(1.0, 0.1, 1.0).unwrap();
        assert!((p.h(0.99) - 0.01).abs() < 1e-16);
        assert_eq!(p.h_prime(0.99), -1.0);
        assert_eq!(p.h(1.0), 0.0);
        assert_eq!(p.h_prime(1.0), -1.0);
        assert!(validate(&p).pass);
        let p2 = revolution_plateau(1.0, 0.1, 2.0).unwrap();
        assert_eq!(p2.h(0.05), 2.0);
        assert!((p2.h(0.5) - 20.0).abs() < 1e-13);
        assert!(revolution_plateau(1.0, 0.25, 1.0).is_err());
    }

    #[test]
    fn capped_profile_postconditions() {
        let p = capped(1.0, 1.0).unwrap();
        assert_eq!(p.h(1.0), 0.0);
        assert_eq!(p.h_prime(1.0), -1.0);
        assert!((p.h(0.0) - 1.0).abs() < 1e-15);
        let min_h = (0..10_000)
            .map(|i| p.h(i as f64 / 10_000.0))
            .fold(f64::INFINITY, f64::min);
        assert!(min_h > 0.0);
        assert!(validate(&p).pass);
    }

    #[test]
    fn validate_flags_bad_end_value() {
        // A table that claims condition (H) but starts at h(0) = 2.
        let t: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let mut h = vec![1.0; 11];
        h[0] = 2.0;
        let p = table_profile(&t, &h).unwrap();
        let report = validate(&p);
        assert!(!report.pass);
        assert_eq!(report.failures[0].location, 0.0);
    }

    #[test]
    fn transitions_are_c1_to_high_accuracy() {
        // One-sided difference quotients of h agree across each junction to
        // 1e-8 relative to the transition slope scale (the transitions are
        // C^2, so the leading mismatch is third order in the step).
        let p = plateau_family(1.0, 0.1, 10.0).unwrap();
        let slope_scale = (0..=1000)
            .map(|i| p.h_prime(i as f64 / 1000.0).abs())
            .fold(1.0_f64, f64::max);
        for bp in p.breakpoints().to_vec() {
            let d = 1e-6;
            let left = (p.h(bp) - p.h(bp - d)) / d;
            let right = (p.h(bp + d) - p.h(bp)) / d;
            assert!(
                (left - right).abs() < 1e-8 * slope_scale,
                "kink at {bp}: {left} vs {right} (scale {slope_scale})"
            );
            // The evaluator's own derivative is continuous there too.
            let jump = (p.h_prime(bp - 1e-12) - p.h_prime(bp + 1e-12)).abs();
            assert!(jump < 1e-8 * slope_scale, "derivative jump {jump} at {bp}");
        }
    }

    #[test]
    fn plateau_at_least_one_stays_above_one_near_left_end() {
        for plateau in [1.0, 2.0, 10.0] {
            let p = plateau_family(1.0, 0.1, plateau).unwrap();
            for i in 0..=200 {
                let t = 0.2 * i as f64 / 200.0;
                assert!(p.h(t) >= 1.0 - 1e-12, "h({t}) = {} below 1", p.h(t));
            }
        }
    }

    #[test]
    fn seeded_profiles_validate_and_hit_the_ends() {
        for seed in 0..20 {
            let p = seeded_profile(1.0, seed);
            assert_eq!(p.kind(), ProfileKind::ConditionH);
            assert_eq!(p.h(0.0), 1.0);
            assert_eq!(p.h(1.0), 1.0);
            let report = validate(&p);
            assert!(report.pass, "seed {seed}: {:?}", report.failures);
        }
    }

    #[test]
    fn monotone_cubic_interpolates_and_stays_in_range() {
        let t = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 3.0, 0.5];
        let c = MonotoneCubic::new(&t, &y).unwrap();
        for (ti, yi) in t.iter().zip(y.iter()) {
            assert!((c.eval(*ti).0 - yi).abs() < 1e-14);
        }
        for i in 0..=300 {
            let x = 3.0 * i as f64 / 300.0;
            let v = c.eval(x).0;
            assert!(v >= 0.5 - 1e-12 && v <= 3.0 + 1e-12, "overshoot at {x}: {v}");
        }
        assert!(MonotoneCubic::new(&[0.0, 0.0], &[1.0, 1.0]).is_err());
        assert!(MonotoneCubic::new(&[0.0], &[1.0]).is_err());
    }

    #[test]
    fn every_constructed_profile_validates() {
        let profiles = vec![
            cylinder(1.0).unwrap(),
            cylinder(2.0).unwrap(),
            plateau_family(1.0, 0.1, 10.0).unwrap(),
            plateau_family(1.0, 0.05, 0.01).unwrap(),
            plateau_family(2.0, 0.4, 3.0).unwrap(),
            revolution_plateau(1.0, 0.1, 1.0).unwrap(),
            revolution_plateau(1.0, 0.05, 2.0).unwrap(),
            capped(1.0, 1.0).unwrap(),
            capped(1.0, 2.0).unwrap(),
            capped(2.0, 0.5).unwrap(),
        ];
        for p in &profiles {
            let report = validate(p);
            assert!(report.pass, "{}: {:?}", p.label(), report.failures);
        }
    }
}
