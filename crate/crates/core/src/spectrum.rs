//! Closed-form bound-state energies and the spectrum table.
//!
//! For κ < 0 the continuum begins at
//!
//! ```text
//! E_th = −√(−κ) − (κ/2)·((D−1)/2)²
//! ```
//!
//! which is half the `x → ∞` limit of the transformed radial potential
//! `q(x)`: there `coth → 1` and the centrifugal `1/sinh²` term vanishes, so
//! `q(∞) = −2√(−κ) − κ((D−1)/2)²` independently of `m`. Substituting
//! `ν⁴ = −1/κ` into the level formula reproduces `E_th` exactly, which is why
//! the level at the cutoff can touch the threshold.

use std::fmt::Write as _;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format;
use crate::model::{CutoffIndex, ProblemSpec};
use crate::reptheory::{total_weight, weyl_dimension};
use crate::Rational;

/// Header of the spectrum CSV.
pub const CSV_HEADER: &str = "I,nu,energy,degeneracy";

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEntry {
    pub principal_index: u32,
    pub nu: Rational,
    pub energy: f64,
    pub degeneracy: BigUint,
}

/// Why a table has the rows it has.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableStatus {
    /// Rows `0..=i_max` were all bound.
    Complete,
    /// The bound-state cutoff stopped the table before `i_max`.
    Truncated,
    /// The cutoff is negative: no bound states at all.
    NoBoundStates,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    pub spec: ProblemSpec,
    pub entries: Vec<SpectrumEntry>,
    pub truncated_at: CutoffIndex,
    /// Continuum onset; present iff κ < 0.
    pub threshold: Option<f64>,
    pub status: TableStatus,
    pub warnings: Vec<String>,
}

fn nu_f64(spec: &ProblemSpec, principal: u32) -> f64 {
    let nu = spec.nu(principal);
    *nu.numer() as f64 / *nu.denom() as f64
}

/// E_I = −1/(2ν²) + (ν² − ((D−1)/2)²)·κ/2.
pub fn energy(spec: &ProblemSpec, principal: u32) -> f64 {
    energy_at_nu(spec, nu_f64(spec, principal))
}

/// The level formula evaluated at a real ν.
pub fn energy_at_nu(spec: &ProblemSpec, nu: f64) -> f64 {
    let half = (f64::from(spec.dim()) - 1.0) / 2.0;
    let nu2 = nu * nu;
    -0.5 / nu2 + (nu2 - half * half) * spec.kappa() / 2.0
}

/// Continuum threshold for κ < 0.
pub fn threshold_energy(spec: &ProblemSpec) -> Result<f64> {
    let kappa = spec.kappa();
    if kappa >= 0.0 {
        return Err(Error::Range {
            what: "kappa",
            value: kappa,
            lo: f64::NEG_INFINITY,
            hi: 0.0,
        });
    }
    let half = (f64::from(spec.dim()) - 1.0) / 2.0;
    Ok(-(-kappa).sqrt() - kappa / 2.0 * half * half)
}

/// Principal index of the `k`-th radial level (k ≥ 1) in sector `l`.
pub fn sector_level_to_principal(l: u32, k: u32) -> u32 {
    assert!(k >= 1, "radial level index starts at 1");
    l + k - 1
}

/// Tabulates levels `0..=min(i_max, I₀)`.
pub fn spectrum_table(spec: &ProblemSpec, i_max: u32) -> SpectrumTable {
    let cutoff = spec.cutoff_index();
    let threshold = threshold_energy(spec).ok();
    let mut warnings = Vec::new();

    let (top, status) = match cutoff {
        CutoffIndex::Infinite => (Some(i_max), TableStatus::Complete),
        CutoffIndex::Finite(c) if c < 0 => {
            warnings.push(format!("I0 = {c} < 0: no bound states for {spec}"));
            (None, TableStatus::NoBoundStates)
        }
        CutoffIndex::Finite(c) => {
            let c = c as u32;
            if c < i_max {
                (Some(c), TableStatus::Truncated)
            } else {
                (Some(i_max), TableStatus::Complete)
            }
        }
    };

    let mut entries: Vec<SpectrumEntry> = match top {
        None => Vec::new(),
        Some(top) => (0..=top)
            .into_par_iter()
            .map(|i| SpectrumEntry {
                principal_index: i,
                nu: spec.nu(i),
                energy: energy(spec, i),
                degeneracy: weyl_dimension(&total_weight(spec, i))
                    .expect("total weight is dominant"),
            })
            .collect(),
    };

    if let Some(th) = threshold {
        let before = entries.len();
        let marginal = spec.is_marginal();
        entries.retain(|e| {
            // Marginal levels sit on the threshold up to rounding.
            let on_threshold =
                marginal && CutoffIndex::Finite(i64::from(e.principal_index)) == cutoff;
            e.energy < th && !on_threshold
        });
        if entries.len() < before {
            warnings.push(format!(
                "marginal level: {} level(s) at or above the threshold {} excluded",
                before - entries.len(),
                format::sig(th, 12)
            ));
        } else if marginal {
            warnings.push("marginal level: cutoff argument is an integer".into());
        }
    }

    SpectrumTable {
        spec: *spec,
        entries,
        truncated_at: cutoff,
        threshold,
        status,
        warnings,
    }
}

impl SpectrumTable {
    /// CSV with header `I,nu,energy,degeneracy`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                e.principal_index,
                format::rational(e.nu),
                format::sig(e.energy, 12),
                e.degeneracy
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(dim: u32, kappa: f64, twice_mu: i64) -> ProblemSpec {
        ProblemSpec::new(dim, kappa, twice_mu).unwrap()
    }

    #[test]
    fn energy_examples() {
        assert_eq!(energy(&spec(3, 0.0, 0), 0), -0.5);
        assert_eq!(energy(&spec(3, 0.02, 0), 0), -0.5);
        assert!((energy(&spec(5, 0.0, 2), 0) + 1.0 / 18.0).abs() < 1e-15);
    }

    #[test]
    fn threshold_examples() {
        let th = threshold_energy(&spec(3, -1.1e-4, 0)).unwrap();
        assert!((th - (-(1.1e-4f64).sqrt() + 1.1e-4 / 2.0)).abs() < 1e-15);
        assert!((th + 0.010433).abs() < 1e-6);
        assert_eq!(threshold_energy(&spec(3, -4.0, 0)).unwrap(), 0.0);
        assert!(threshold_energy(&spec(3, 0.0, 0)).is_err());
        assert!(threshold_energy(&spec(3, 1.0, 0)).is_err());
    }

    #[test]
    fn marginal_identity_spot_check() {
        let s = spec(6, -0.37, 1);
        let nu = (0.37f64).powf(-0.25);
        let th = threshold_energy(&s).unwrap();
        assert!((energy_at_nu(&s, nu) - th).abs() <= 1e-12 * th.abs());
    }

    #[test]
    fn hydrogen_table() {
        let t = spectrum_table(&spec(3, 0.0, 0), 2);
        assert_eq!(t.status, TableStatus::Complete);
        assert!(t.threshold.is_none());
        let rows: Vec<(u32, f64, u32)> = t
            .entries
            .iter()
            .map(|e| {
                (
                    e.principal_index,
                    e.energy,
                    u32::try_from(&e.degeneracy).unwrap(),
                )
            })
            .collect();
        assert_eq!(rows.len(), 3);
        let expect = [(0, -0.5, 1), (1, -0.125, 4), (2, -1.0 / 18.0, 9)];
        for (got, want) in rows.iter().zip(expect) {
            assert_eq!(got.0, want.0);
            assert!((got.1 - want.1).abs() < 1e-15);
            assert_eq!(got.2, want.2);
        }
        assert_eq!(
            t.to_csv(),
            "I,nu,energy,degeneracy\n0,1,-0.500000000000,1\n1,2,-0.125000000000,4\n2,3,-0.0555555555556,9\n"
        );
    }

    #[test]
    fn strongly_curved_table_truncates() {
        let t = spectrum_table(&spec(3, -0.9, 0), 5);
        assert_eq!(t.entries.len(), 1);
        assert_eq!(t.truncated_at, CutoffIndex::Finite(0));
        assert_eq!(t.status, TableStatus::Truncated);
        assert!(t.entries[0].energy < t.threshold.unwrap());
    }

    #[test]
    fn even_dimension_half_charge() {
        let t = spectrum_table(&spec(4, 0.0, 1), 0);
        assert_eq!(t.entries.len(), 1);
        assert_eq!(t.entries[0].degeneracy, BigUint::from(4u32));
        assert_eq!(t.entries[0].nu, Rational::from_integer(2));
        assert_eq!(t.entries[0].energy, -0.125);
    }

    #[test]
    fn empty_table_when_cutoff_negative() {
        let t = spectrum_table(&spec(7, -30.0, 2), 4);
        assert_eq!(t.status, TableStatus::NoBoundStates);
        assert!(t.entries.is_empty());
        assert!(!t.warnings.is_empty());
    }

    #[test]
    fn marginal_level_excluded() {
        // nu_max = 2 exactly: level I = 1 sits on the threshold.
        let t = spectrum_table(&spec(3, -1.0 / 16.0, 0), 5);
        assert_eq!(t.entries.len(), 1);
        assert!(t.warnings.iter().any(|w| w.contains("marginal")));
    }

    #[test]
    fn principal_mapping() {
        assert_eq!(sector_level_to_principal(0, 1), 0);
        assert_eq!(sector_level_to_principal(2, 1), 2);
        assert_eq!(sector_level_to_principal(1, 3), 3);
        let s = spec(3, 0.0, 0);
        assert_eq!(energy(&s, sector_level_to_principal(1, 3)), -1.0 / 32.0);
    }
}
