//! Laplace spectra of the cross-section surface.
//!
//! The mode reduction needs exactly one piece of data about the closed
//! surface: its Laplace eigenvalues with multiplicities. Spectra are inputs
//! here, not computed from a mesh; the sphere generator covers the
//! revolution experiments and arbitrary surfaces enter as explicit lists.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Absolute tolerance for merging equal eigenvalues in user-supplied lists.
/// Inputs are exact rationals or user data; nothing numerical happens here.
pub const MERGE_TOL: f64 = 1e-12;

/// Normalization convention for generated spectra.
///
/// The sphere generator supports both the unit-radius convention
/// (lambda_j = j(j+1), the one the revolution bounds quote literally) and
/// unit area (lambda_j = 4 pi j(j+1), radius (4 pi)^{-1/2}).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    UnitRadius,
    UnitArea,
    Custom,
}

/// One distinct eigenvalue with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub lambda: f64,
    pub multiplicity: usize,
}

/// The Laplace spectrum of the cross-section, sorted strictly increasing,
/// starting with the simple zero eigenvalue of a connected surface.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrossSectionSpectrum {
    entries: Vec<SpectrumEntry>,
    pub normalization: Normalization,
    pub description: String,
}

impl CrossSectionSpectrum {
    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    /// Distinct eigenvalue lambda_(j).
    pub fn lambda(&self, j: usize) -> f64 {
        self.entries[j].lambda
    }

    pub fn multiplicity(&self, j: usize) -> usize {
        self.entries[j].multiplicity
    }

    /// Number of distinct eigenvalues carried.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn check_invariants(entries: &[SpectrumEntry]) -> Result<()> {
        if entries.is_empty() {
            return Err(Error::Domain("spectrum must be nonempty".into()));
        }
        if entries[0].lambda != 0.0 || entries[0].multiplicity != 1 {
            return Err(Error::Domain(
                "spectrum must start with eigenvalue 0 of multiplicity 1 (connected cross-section)"
                    .into(),
            ));
        }
        for pair in entries.windows(2) {
            if pair[1].lambda <= pair[0].lambda {
                return Err(Error::Domain(format!(
                    "eigenvalues must be strictly increasing ({} then {})",
                    pair[0].lambda, pair[1].lambda
                )));
            }
        }
        Ok(())
    }
}

/// Spectrum of the round 2-sphere up to the j_max-th distinct eigenvalue.
///
/// Unit radius gives lambda_(j) = j(j+1); unit area scales by 4 pi. The
/// multiplicity of the j-th distinct eigenvalue is 2j + 1.
pub fn sphere_spectrum(j_max: usize, normalization: Normalization) -> Result<CrossSectionSpectrum> {
    if j_max < 1 {
        return Err(Error::Domain("sphere spectrum needs j_max >= 1".into()));
    }
    let scale = match normalization {
        Normalization::UnitRadius => 1.0,
        Normalization::UnitArea => 4.0 * std::f64::consts::PI,
        Normalization::Custom => {
            return Err(Error::Config(
                "normalization `custom` is only valid for explicit spectra".into(),
            ))
        }
    };
    let entries = (0..=j_max)
        .map(|j| SpectrumEntry {
            lambda: scale * (j * (j + 1)) as f64,
            multiplicity: 2 * j + 1,
        })
        .collect::<Vec<_>>();
    CrossSectionSpectrum::check_invariants(&entries)?;
    Ok(CrossSectionSpectrum {
        entries,
        normalization,
        description: format!("round sphere ({normalization:?}), j <= {j_max}"),
    })
}

/// Spectrum from an explicit (lambda, multiplicity) list. Entries are
/// sorted; eigenvalues equal within `MERGE_TOL` are merged with summed
/// multiplicities.
pub fn custom_spectrum(values: &[(f64, usize)]) -> Result<CrossSectionSpectrum> {
    if values.is_empty() {
        return Err(Error::Domain("spectrum list must be nonempty".into()));
    }
    for &(lambda, mult) in values {
        if lambda < 0.0 || !lambda.is_finite() {
            return Err(Error::Domain(format!("eigenvalue {lambda} must be nonnegative")));
        }
        if mult == 0 {
            return Err(Error::Domain(format!(
                "multiplicity of eigenvalue {lambda} must be positive"
            )));
        }
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut entries: Vec<SpectrumEntry> = Vec::with_capacity(sorted.len());
    for (lambda, mult) in sorted {
        match entries.last_mut() {
            Some(last) if (lambda - last.lambda).abs() <= MERGE_TOL => {
                last.multiplicity += mult;
            }
            _ => entries.push(SpectrumEntry { lambda, multiplicity: mult }),
        }
    }
    CrossSectionSpectrum::check_invariants(&entries)?;
    Ok(CrossSectionSpectrum {
        entries,
        normalization: Normalization::Custom,
        description: "explicit spectrum".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sphere_unit_radius_first_entries() {
        let s = sphere_spectrum(2, Normalization::UnitRadius).unwrap();
        let got: Vec<(f64, usize)> = s.entries().iter().map(|e| (e.lambda, e.multiplicity)).collect();
        assert_eq!(got, vec![(0.0, 1), (2.0, 3), (6.0, 5)]);
    }

    #[test]
    fn sphere_unit_area_scales_by_4pi() {
        let s = sphere_spectrum(1, Normalization::UnitArea).unwrap();
        assert_eq!(s.entries()[0], SpectrumEntry { lambda: 0.0, multiplicity: 1 });
        let eight_pi = 8.0 * std::f64::consts::PI;
        assert!((s.lambda(1) - eight_pi).abs() < 1e-12 * eight_pi);
        assert_eq!(s.multiplicity(1), 3);
    }

    #[test]
    fn normalization_ratio_is_4pi() {
        let ua = sphere_spectrum(4, Normalization::UnitArea).unwrap();
        let ur = sphere_spectrum(4, Normalization::UnitRadius).unwrap();
        for j in 1..=4 {
            let ratio = ua.lambda(j) / ur.lambda(j);
            assert!((ratio - 4.0 * std::f64::consts::PI).abs() < 1e-12);
        }
    }

    #[test]
    fn custom_passthrough_and_sorting() {
        let s = custom_spectrum(&[(0.0, 1), (5.0, 2)]).unwrap();
        assert_eq!(s.len(), 2);
        let s = custom_spectrum(&[(5.0, 2), (0.0, 1)]).unwrap();
        assert_eq!(s.lambda(0), 0.0);
        assert_eq!(s.lambda(1), 5.0);
        assert_eq!(s.multiplicity(1), 2);
    }

    #[test]
    fn custom_merges_equal_eigenvalues() {
        let s = custom_spectrum(&[(0.0, 1), (3.0, 1), (3.0, 2)]).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.lambda(1), 3.0);
        assert_eq!(s.multiplicity(1), 3);
    }

    #[test]
    fn custom_rejects_bad_input() {
        assert!(custom_spectrum(&[]).is_err());
        assert!(custom_spectrum(&[(-1.0, 1)]).is_err());
        assert!(custom_spectrum(&[(0.0, 1), (2.0, 0)]).is_err());
        // No zero eigenvalue at all.
        assert!(custom_spectrum(&[(2.0, 3)]).is_err());
        // Zero eigenvalue with multiplicity 2 (disconnected surface).
        assert!(custom_spectrum(&[(0.0, 2), (2.0, 3)]).is_err());
    }

    #[test]
    fn sphere_rejects_custom_tag() {
        assert!(sphere_spectrum(1, Normalization::Custom).is_err());
        assert!(sphere_spectrum(0, Normalization::UnitRadius).is_err());
    }

    // Independent oracle for the unit-area eigenvalue 8 pi: a finite
    // 1D discretization of the Laplace-Beltrami operator on the round
    // sphere of area one, restricted to zonal (rotation-invariant)
    // functions. In the x = cos(theta) variable the operator is
    // -((1-x^2) u')' = lambda u on (-1, 1); piecewise-linear elements give
    // the pencil (K, M) whose lowest eigenvalues approach j(j+1)/r^2.
    mod zonal_oracle {
        /// Assemble K (weighted stiffness, weight 1-x^2) and M (mass) on a
        /// uniform grid of n elements over [-1, 1].
        fn assemble(n: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
            let m = n + 1;
            let h = 2.0 / n as f64;
            let mut k_diag = vec![0.0; m];
            let mut k_off = vec![0.0; m - 1];
            let mut m_diag = vec![0.0; m];
            let mut m_off = vec![0.0; m - 1];
            // 3-point Gauss on each element; exact for the quadratic weight.
            let gauss = [
                (-(0.6_f64).sqrt(), 5.0 / 9.0),
                (0.0, 8.0 / 9.0),
                ((0.6_f64).sqrt(), 5.0 / 9.0),
            ];
            for e in 0..n {
                let x0 = -1.0 + e as f64 * h;
                let mut w_int = 0.0; // integral of (1 - x^2) over the element
                for (g, wq) in gauss {
                    let x = x0 + 0.5 * h * (g + 1.0);
                    w_int += 0.5 * h * wq * (1.0 - x * x);
                }
                let ks = w_int / (h * h);
                k_diag[e] += ks;
                k_diag[e + 1] += ks;
                k_off[e] -= ks;
                m_diag[e] += h / 3.0;
                m_diag[e + 1] += h / 3.0;
                m_off[e] += h / 6.0;
            }
            (k_diag, k_off, m_diag, m_off)
        }

        /// Number of eigenvalues of (K, M) strictly below mu, by the
        /// inertia of the LDL^T pivots of K - mu M.
        fn count_below(kd: &[f64], ko: &[f64], md: &[f64], mo: &[f64], mu: f64) -> usize {
            let n = kd.len();
            let mut count = 0;
            let mut prev = 0.0_f64;
            for i in 0..n {
                let mut d = kd[i] - mu * md[i];
                if i > 0 {
                    let off = ko[i - 1] - mu * mo[i - 1];
                    d -= off * off / prev;
                }
                if d < 0.0 {
                    count += 1;
                }
                // Guard exact zero pivots the standard way.
                prev = if d == 0.0 { 1e-300 } else { d };
            }
            count
        }

        /// j-th eigenvalue (0-indexed) by bisection on the counting function.
        pub fn zonal_eigenvalue(n_elements: usize, j: usize, upper: f64) -> f64 {
            let (kd, ko, md, mo) = assemble(n_elements);
            let mut lo = -1.0;
            let mut hi = upper;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if count_below(&kd, &ko, &md, &mo, mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        }
    }

    #[test]
    fn unit_area_lambda1_matches_zonal_discretization() {
        // Discretize on the unit-radius sphere, then scale areas: the
        // area-one sphere has radius r with 4 pi r^2 = 1, so eigenvalues
        // scale by 1/r^2 = 4 pi.
        let lam1_disc = zonal_oracle::zonal_eigenvalue(2000, 1, 10.0);
        assert!(
            (lam1_disc - 2.0).abs() < 2e-3,
            "zonal discretization gave {lam1_disc}, expected about 2"
        );
        let scaled = lam1_disc * 4.0 * std::f64::consts::PI;
        let s = sphere_spectrum(1, Normalization::UnitArea).unwrap();
        assert!(
            (s.lambda(1) - scaled).abs() / s.lambda(1) < 2e-3,
            "8 pi = {} vs discretized {scaled}",
            s.lambda(1)
        );
    }

    #[test]
    fn unit_radius_lambda2_matches_zonal_discretization() {
        let lam2_disc = zonal_oracle::zonal_eigenvalue(2000, 2, 20.0);
        assert!(
            (lam2_disc - 6.0).abs() < 2e-2,
            "zonal discretization gave {lam2_disc}, expected about 6"
        );
    }

    proptest! {
        #[test]
        fn custom_constructor_output_satisfies_invariants(
            extra in proptest::collection::vec((0.0_f64..50.0, 1_usize..4), 1..12)
        ) {
            let mut values = vec![(0.0, 1)];
            values.extend(extra.into_iter().filter(|(l, _)| *l > MERGE_TOL));
            if let Ok(s) = custom_spectrum(&values) {
                prop_assert_eq!(s.entries()[0], SpectrumEntry { lambda: 0.0, multiplicity: 1 });
                for pair in s.entries().windows(2) {
                    prop_assert!(pair[1].lambda > pair[0].lambda);
                }
                let total_in: usize = values.iter().map(|v| v.1).sum();
                let total_out: usize = s.entries().iter().map(|e| e.multiplicity).sum();
                prop_assert_eq!(total_in, total_out);
            }
        }

        #[test]
        fn sphere_constructor_output_satisfies_invariants(j_max in 1_usize..12) {
            for norm in [Normalization::UnitRadius, Normalization::UnitArea] {
                let s = sphere_spectrum(j_max, norm).unwrap();
                prop_assert_eq!(s.len(), j_max + 1);
                prop_assert_eq!(s.entries()[0], SpectrumEntry { lambda: 0.0, multiplicity: 1 });
                for pair in s.entries().windows(2) {
                    prop_assert!(pair[1].lambda > pair[0].lambda);
                    prop_assert!(pair[1].multiplicity >= 1);
                }
            }
        }
    }
}
