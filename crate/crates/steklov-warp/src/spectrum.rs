//! Assembly of the global Steklov spectrum.
//!
//! The spectrum of the warped product is the union over modes of the
//! per-mode eigenvalue families, each entry repeated with the multiplicity
//! of its cross-section eigenvalue. Assembly sorts, expands, and truncates
//! with an explicit guard: the requested eigenvalues are only trusted once
//! sigma_(j_max, 1) of the last solved mode lies above them. No a-priori
//! lower bound in j exists (the collapse family drives sigma_(j,1) to zero),
//! so the guard is empirical and failure is an error, not a silent trim.

use crate::cross_section::CrossSectionSpectrum;
use crate::error::{Error, Result};
use crate::mode::ModeSolution;
use serde::Serialize;

/// Which per-mode family an assembled eigenvalue came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    First,
    Second,
    Revolution,
}

impl Branch {
    pub fn tag(self) -> &'static str {
        match self {
            Branch::First => "first",
            Branch::Second => "second",
            Branch::Revolution => "revolution",
        }
    }
}

/// One assembled eigenvalue with its provenance.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectrumEntry {
    pub sigma: f64,
    pub mode: usize,
    pub branch: Branch,
    pub multiplicity: usize,
}

/// The merged, sorted, multiplicity-expanded Steklov spectrum.
#[derive(Debug, Clone, Serialize)]
pub struct SteklovSpectrum {
    /// Sorted by sigma; ties broken by mode index, then branch.
    pub entries: Vec<SpectrumEntry>,
    /// Flattened nondecreasing sigma_0 <= sigma_1 <= ..., truncated to the
    /// requested count.
    pub counted: Vec<f64>,
    /// Largest mode index that entered the assembly.
    pub truncation: usize,
}

/// Merge per-mode solutions (indexed by distinct cross-section eigenvalue)
/// into the global spectrum, keeping `count` eigenvalues.
pub fn assemble(
    solutions: &[(usize, ModeSolution)],
    spectrum: &CrossSectionSpectrum,
    count: usize,
) -> Result<SteklovSpectrum> {
    if count == 0 {
        return Err(Error::Domain("requested eigenvalue count must be positive".into()));
    }
    if solutions.is_empty() {
        return Err(Error::Domain("no mode solutions to assemble".into()));
    }
    let j_max = solutions.iter().map(|(j, _)| *j).max().unwrap();
    for j in 0..=j_max {
        if !solutions.iter().any(|(jj, _)| *jj == j) {
            return Err(Error::Domain(format!("mode solutions must cover j = 0..{j_max}; {j} missing")));
        }
        if j >= spectrum.len() {
            return Err(Error::Domain(format!(
                "mode {j} has no matching cross-section eigenvalue (spectrum carries {})",
                spectrum.len()
            )));
        }
    }

    let mut entries: Vec<SpectrumEntry> = Vec::new();
    for (j, sol) in solutions {
        let multiplicity = spectrum.multiplicity(*j);
        let first_branch = match sol.engine {
            _ if sol.sigma_2.is_some() => Branch::First,
            _ => Branch::Revolution,
        };
        entries.push(SpectrumEntry {
            sigma: sol.sigma_1,
            mode: *j,
            branch: first_branch,
            multiplicity,
        });
        if let Some(sig2) = sol.sigma_2 {
            entries.push(SpectrumEntry { sigma: sig2, mode: *j, branch: Branch::Second, multiplicity });
        }
    }
    entries.sort_by(|a, b| {
        a.sigma
            .total_cmp(&b.sigma)
            .then(a.mode.cmp(&b.mode))
            .then(branch_rank(a.branch).cmp(&branch_rank(b.branch)))
    });

    let mut counted = Vec::with_capacity(count);
    'outer: for e in &entries {
        for _ in 0..e.multiplicity {
            counted.push(e.sigma);
            if counted.len() == count {
                break 'outer;
            }
        }
    }
    if counted.len() < count {
        return Err(Error::Domain(format!(
            "only {} eigenvalues available (count = {count}); solve more modes",
            counted.len()
        )));
    }

    // Truncation guard: the first branch of the deepest solved mode must
    // clear everything we return.
    let last_first = solutions
        .iter()
        .find(|(j, _)| *j == j_max)
        .map(|(_, s)| s.sigma_1)
        .unwrap();
    let cutoff = *counted.last().unwrap();
    if last_first <= cutoff {
        return Err(Error::InsufficientModes { j_max, last_sigma: last_first, cutoff });
    }

    Ok(SteklovSpectrum { entries, counted, truncation: j_max })
}

fn branch_rank(b: Branch) -> u8 {
    match b {
        Branch::First | Branch::Revolution => 0,
        Branch::Second => 1,
    }
}

/// Distinct eigenvalues with total multiplicities; entries equal within
/// relative tolerance 1e-9 are merged.
pub fn distinct_spectrum(s: &SteklovSpectrum) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for e in &s.entries {
        match out.last_mut() {
            Some((sigma, mult)) if (e.sigma - *sigma).abs() <= 1e-9 * sigma.abs().max(1e-300) => {
                *mult += e.multiplicity;
            }
            _ => out.push((e.sigma, e.multiplicity)),
        }
    }
    out
}

/// Consecutive differences, over distinct eigenvalues or over the counted
/// (multiplicity-expanded) list.
pub fn gaps(s: &SteklovSpectrum, distinct: bool) -> Result<Vec<f64>> {
    let values: Vec<f64> = if distinct {
        distinct_spectrum(s).iter().map(|(v, _)| *v).collect()
    } else {
        s.counted.clone()
    };
    if values.len() < 2 {
        return Err(Error::Domain("need at least two eigenvalues to form gaps".into()));
    }
    Ok(values.windows(2).map(|w| w[1] - w[0]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cross_section::{custom_spectrum, sphere_spectrum, Normalization};
    use crate::grid::make_grid;
    use crate::mode::ModeProblem;
    use crate::profile;
    use crate::shooting::{solve_mode_revolution_shooting, solve_mode_shooting};

    fn cylinder_solutions(l: f64, lambdas: &[f64]) -> Vec<(usize, ModeSolution)> {
        let p = profile::cylinder(l).unwrap();
        let g = make_grid(&p, 32).unwrap();
        lambdas
            .iter()
            .enumerate()
            .map(|(j, &lam)| {
                let prob = ModeProblem::new(&p, &g, lam).unwrap();
                (j, solve_mode_shooting(&prob, None).unwrap())
            })
            .collect()
    }

    /// Closed-form cylinder spectrum: the union over modes of
    /// {sqrt(lam) tanh(sqrt(lam) L/2), sqrt(lam) coth(sqrt(lam) L/2)}
    /// (0 and 2/L for lam = 0), each with the mode's multiplicity.
    fn cylinder_counted_oracle(l: f64, spectrum: &CrossSectionSpectrum, count: usize) -> Vec<f64> {
        let mut values: Vec<(f64, usize)> = Vec::new();
        for j in 0..spectrum.len() {
            let lam = spectrum.lambda(j);
            let m = spectrum.multiplicity(j);
            if lam == 0.0 {
                values.push((0.0, m));
                values.push((2.0 / l, m));
            } else {
                let s = lam.sqrt();
                values.push((s * (s * l / 2.0).tanh(), m));
                values.push((s / (s * l / 2.0).tanh(), m));
            }
        }
        values.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut counted = Vec::new();
        for (v, m) in values {
            for _ in 0..m {
                counted.push(v);
                if counted.len() == count {
                    return counted;
                }
            }
        }
        counted
    }

    #[test]
    fn cylinder_assembly_matches_closed_form_union() {
        let l = 2.0;
        let sphere = sphere_spectrum(4, Normalization::UnitRadius).unwrap();
        let lambdas: Vec<f64> = (0..=4).map(|j| sphere.lambda(j)).collect();
        let sols = cylinder_solutions(l, &lambdas);
        let assembled = assemble(&sols, &sphere, 20).unwrap();
        let oracle = cylinder_counted_oracle(l, &sphere, 20);
        assert_eq!(assembled.counted.len(), 20);
        for (got, want) in assembled.counted.iter().zip(oracle.iter()) {
            assert!(
                (got - want).abs() <= 1e-9 * want.max(1.0),
                "assembled {got} vs oracle {want}"
            );
        }
        // sigma_1 = sigma_{0,2} = 2/L, then the multiplicity-3 copies of
        // sqrt(2) tanh(sqrt(2)) = 1.2563669098108796.
        assert_eq!(assembled.counted[0], 0.0);
        assert!((assembled.counted[1] - 1.0).abs() < 1e-11);
        for k in 2..=4 {
            assert!((assembled.counted[k] - 1.2563669098108796).abs() < 1e-9);
        }
    }

    #[test]
    fn cross_family_interleaving() {
        // L = 1, lambda list {0, (2, mult 3), (6, mult 5)}: the three
        // copies of sqrt(2) tanh(sqrt(2)/2) = 0.8610571715805476 land
        // before sigma_{0,2} = 2 (the guard needs the depth-3 mode:
        // sigma_{2,1} = 2.060 clears the returned window).
        let spec = custom_spectrum(&[(0.0, 1), (2.0, 3), (6.0, 5)]).unwrap();
        let sols = cylinder_solutions(1.0, &[0.0, 2.0, 6.0]);
        let assembled = assemble(&sols, &spec, 5).unwrap();
        let expect = [0.0, 0.8610571715805476, 0.8610571715805476, 0.8610571715805476, 2.0];
        for (got, want) in assembled.counted.iter().zip(expect.iter()) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
        assert_eq!(assembled.entries[1].mode, 1);
        assert_eq!(assembled.entries[1].branch, Branch::First);
    }

    #[test]
    fn counted_starts_at_zero_for_condition_h() {
        let spec = sphere_spectrum(2, Normalization::UnitRadius).unwrap();
        let p = profile::plateau_family(1.0, 0.1, 3.0).unwrap();
        let g = make_grid(&p, 256).unwrap();
        let sols: Vec<(usize, ModeSolution)> = (0..=2)
            .map(|j| {
                let prob = ModeProblem::new(&p, &g, spec.lambda(j)).unwrap();
                (j, crate::fem::solve_mode_fem(&prob).unwrap())
            })
            .collect();
        let assembled = assemble(&sols, &spec, 4).unwrap();
        assert_eq!(assembled.counted[0], 0.0);
        for w in assembled.counted.windows(2) {
            assert!(w[1] >= w[0]);
        }
    }

    #[test]
    fn truncation_guard_fires_when_modes_are_too_few() {
        let l = 2.0;
        let sphere = sphere_spectrum(3, Normalization::UnitRadius).unwrap();
        let lambdas: Vec<f64> = (0..=3).map(|j| sphere.lambda(j)).collect();
        let sols = cylinder_solutions(l, &lambdas);
        // count = 20 needs sigma values above sigma_{3,1}; j_max = 3 cannot
        // certify them.
        let err = assemble(&sols, &sphere, 20).unwrap_err();
        assert!(matches!(err, Error::InsufficientModes { j_max: 3, .. }), "{err}");
    }

    #[test]
    fn truncation_is_stable_under_deeper_mode_lists() {
        let l = 2.0;
        let deep = sphere_spectrum(9, Normalization::UnitRadius).unwrap();
        let lam_deep: Vec<f64> = (0..=9).map(|j| deep.lambda(j)).collect();
        let base = assemble(&cylinder_solutions(l, &lam_deep[..=4]), &deep, 20).unwrap();
        let deeper = assemble(&cylinder_solutions(l, &lam_deep), &deep, 20).unwrap();
        for (a, b) in base.counted.iter().zip(deeper.counted.iter()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn revolution_distinct_spectrum_strictly_increasing() {
        let p = profile::capped(1.0, 1.0).unwrap();
        let g = make_grid(&p, 512).unwrap();
        let sphere = sphere_spectrum(3, Normalization::UnitRadius).unwrap();
        let sols: Vec<(usize, ModeSolution)> = (0..=3)
            .map(|j| {
                let prob = ModeProblem::new(&p, &g, sphere.lambda(j)).unwrap();
                (j, solve_mode_revolution_shooting(&prob).unwrap())
            })
            .collect();
        let assembled = assemble(&sols, &sphere, 9).unwrap();
        let distinct = distinct_spectrum(&assembled);
        assert_eq!(distinct[0].0, 0.0);
        for w in distinct.windows(2) {
            assert!(w[1].0 > w[0].0, "distinct spectrum not increasing: {distinct:?}");
        }
        // Multiplicities carried through: 1, 3, 5, 7.
        let mults: Vec<usize> = distinct.iter().map(|(_, m)| *m).collect();
        assert_eq!(mults, vec![1, 3, 5, 7]);
        assert_eq!(assembled.entries[1].branch, Branch::Revolution);
    }

    #[test]
    fn distinct_merges_near_equal_values() {
        let spec = custom_spectrum(&[(0.0, 1), (2.0, 3)]).unwrap();
        let mut sols = cylinder_solutions(1.0, &[0.0, 2.0]);
        // Force a near-tie: nudge sigma_{1,1} to sigma_{0,2} within 1e-12.
        sols[1].1.sigma_1 = 2.0 + 1e-12;
        let assembled = assemble(&sols, &spec, 2).unwrap();
        let distinct = distinct_spectrum(&assembled);
        let two = distinct.iter().find(|(v, _)| (v - 2.0).abs() < 1e-6).unwrap();
        assert_eq!(two.1, 4, "multiplicities of merged entries should sum: {distinct:?}");
    }

    #[test]
    fn gaps_need_two_entries_and_are_nonnegative() {
        let spec = sphere_spectrum(2, Normalization::UnitRadius).unwrap();
        let lambdas: Vec<f64> = (0..=2).map(|j| spec.lambda(j)).collect();
        let sols = cylinder_solutions(1.0, &lambdas);
        let assembled = assemble(&sols, &spec, 5).unwrap();
        for g in gaps(&assembled, false).unwrap() {
            assert!(g >= 0.0);
        }
        let dist = gaps(&assembled, true).unwrap();
        assert!(dist.iter().all(|g| *g > 0.0));
        // First distinct gap is sigma_(1) - 0 = sigma_(1).
        let distinct = distinct_spectrum(&assembled);
        assert!((dist[0] - distinct[1].0).abs() < 1e-15);
        let single = SteklovSpectrum {
            entries: vec![SpectrumEntry { sigma: 0.0, mode: 0, branch: Branch::First, multiplicity: 1 }],
            counted: vec![0.0],
            truncation: 0,
        };
        assert!(gaps(&single, false).is_err());
    }
}
