//! The acceptance suite: numerical oracles against the closed-form spectrum,
//! exact representation-theoretic identities and the gauge identity checks.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::gauge;
use crate::model::{CutoffIndex, ProblemSpec};
use crate::radial::{
    discretize, eigen_lowest, orthonormality_check, sector_compare, sturm_count, RadialGrid,
    SectorSpec,
};
use crate::reptheory::{branching_check, c_identity_check};
use crate::spectrum::{energy, energy_at_nu, threshold_energy};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {} [{}] {}: {} ({:.2} s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

fn timed<F>(id: u32, name: &'static str, limit: Option<f64>, body: F) -> CriterionResult
where
    F: FnOnce() -> Result<(bool, String)>,
{
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match outcome {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(limit) = limit {
        if elapsed.as_secs_f64() > limit {
            passed = false;
            detail.push_str(&format!("; exceeded {limit} s"));
        }
    }
    CriterionResult {
        id,
        name,
        passed,
        detail,
        elapsed,
    }
}

/// 1. Hydrogen anchor.
pub fn hydrogen_anchor() -> CriterionResult {
    timed(1, "hydrogen anchor", Some(10.0), || {
        let sector = SectorSpec::new(ProblemSpec::new(3, 0.0, 0)?, 0);
        let grid = RadialGrid::new(20000, 400.0)?;
        let report = sector_compare(&sector, 3, &grid)?;
        let fd = report
            .rows
            .iter()
            .map(|r| r.relerr_fd())
            .fold(0.0, f64::max);
        let shoot = report
            .rows
            .iter()
            .map(|r| r.relerr_shoot())
            .fold(0.0, nan_max);
        Ok((
            fd <= 1e-4 && shoot <= 1e-8,
            format!("max FD relerr {fd:.3e} (<= 1e-4), max shooting relerr {shoot:.3e} (<= 1e-8)"),
        ))
    })
}

/// `max` that propagates NaN so that a failed oracle never passes.
fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// One case of the parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCase {
    pub spec: ProblemSpec,
    pub l: u32,
    pub points: usize,
    pub bound_levels: usize,
    pub max_relerr_fd: f64,
    pub max_disagreement: f64,
    pub orthonormality: f64,
}

/// The sweep parameter grid, parity-filtered and restricted to sectors that
/// hold at least one bound level.
pub fn sweep_cases(quick: bool) -> Vec<(ProblemSpec, u32)> {
    let dims: &[u32] = if quick { &[3, 4, 5] } else { &[3, 4, 5, 6, 7] };
    let sectors: &[u32] = if quick { &[0, 1] } else { &[0, 1, 2] };
    let mut cases = Vec::new();
    for &dim in dims {
        for twice_mu in 0..=3 {
            for &kappa in &[-1.1e-4, 0.0, 0.01] {
                let Ok(spec) = ProblemSpec::new(dim, kappa, twice_mu) else {
                    continue;
                };
                for &l in sectors {
                    if let CutoffIndex::Finite(i0) = spec.cutoff_index() {
                        if i0 < i64::from(l) {
                            continue;
                        }
                    }
                    cases.push((spec, l));
                }
            }
        }
    }
    cases
}

fn run_case(spec: ProblemSpec, l: u32) -> Result<SweepCase> {
    let sector = SectorSpec::new(spec, l);
    let grid = RadialGrid::auto(&sector, 3, None)?;
    let report = sector_compare(&sector, 3, &grid)?;
    let states = report.wavefunctions()?;
    let mut fd = 0.0f64;
    let mut dis = 0.0f64;
    let mut bound = 0;
    for row in report.bound_rows() {
        bound += 1;
        fd = nan_max(fd, row.relerr_fd());
        dis = nan_max(dis, row.solver_disagreement());
    }
    Ok(SweepCase {
        spec,
        l,
        points: grid.n_points(),
        bound_levels: bound,
        max_relerr_fd: fd,
        max_disagreement: dis,
        orthonormality: orthonormality_check(&sector, &states),
    })
}

/// Runs every sweep case; results keep the order of [`sweep_cases`].
pub fn run_sweep(quick: bool) -> Vec<Result<SweepCase>> {
    sweep_cases(quick)
        .into_par_iter()
        .map(|(spec, l)| run_case(spec, l))
        .collect()
}

fn describe(spec: &ProblemSpec, l: u32) -> String {
    format!("{spec} l={l}")
}

/// 2. Parameter sweep, evaluated on precomputed sweep results.
pub fn parameter_sweep(sweep: &[Result<SweepCase>], elapsed: Duration) -> CriterionResult {
    let mut r = timed(2, "parameter sweep", None, || {
        let mut worst_fd = (0.0f64, String::new());
        let mut worst_dis = (0.0f64, String::new());
        let mut failures = Vec::new();
        for case in sweep {
            match case {
                Err(e) => failures.push(format!("error: {e}")),
                Ok(c) => {
                    let label = describe(&c.spec, c.l);
                    if c.bound_levels < 3 {
                        failures.push(format!("{label}: only {} bound levels", c.bound_levels));
                    }
                    if !(c.max_relerr_fd <= 1e-3 && c.max_disagreement <= 5e-4) {
                        failures.push(format!(
                            "{label}: FD {:.3e}, disagreement {:.3e}",
                            c.max_relerr_fd, c.max_disagreement
                        ));
                    }
                    if c.max_relerr_fd.is_nan() || c.max_relerr_fd > worst_fd.0 {
                        worst_fd = (c.max_relerr_fd, label.clone());
                    }
                    if c.max_disagreement.is_nan() || c.max_disagreement > worst_dis.0 {
                        worst_dis = (c.max_disagreement, label);
                    }
                }
            }
        }
        let mut detail = format!(
            "{} cases; worst FD relerr {:.3e} at {} (<= 1e-3); worst FD/shooting {:.3e} at {} (<= 5e-4)",
            sweep.len(),
            worst_fd.0,
            worst_fd.1,
            worst_dis.0,
            worst_dis.1
        );
        if !failures.is_empty() {
            detail.push_str(&format!("; failures: {}", failures.join("; ")));
        }
        Ok((failures.is_empty(), detail))
    });
    r.elapsed = elapsed;
    if elapsed.as_secs_f64() > 300.0 {
        r.passed = false;
        r.detail.push_str("; exceeded 300 s");
    }
    r
}

fn admissible(dim: u32, twice_mu: i64) -> Option<ProblemSpec> {
    ProblemSpec::new(dim, 0.0, twice_mu).ok()
}

/// 3. Exact angular constant identity.
pub fn casimir_identity() -> CriterionResult {
    timed(3, "Casimir identity", Some(1.0), || {
        let mut checked = 0usize;
        let mut failures = Vec::new();
        for dim in 3..=12 {
            for twice_mu in -5..=5 {
                let Some(spec) = admissible(dim, twice_mu) else {
                    continue;
                };
                for l in 0..=10 {
                    let report = c_identity_check(&spec, l);
                    checked += report.lhs.len();
                    if !report.holds() {
                        failures.push(describe(&spec, l));
                    }
                }
            }
        }
        Ok((
            failures.is_empty() && checked > 0,
            format!(
                "{checked} sector weights exact; mismatches: {}",
                failures.len()
            ),
        ))
    })
}

/// 4. Exact branching dimension identity.
pub fn branching_identity() -> CriterionResult {
    timed(4, "branching dimension identity", Some(1.0), || {
        let mut checked = 0usize;
        let mut failures = Vec::new();
        for dim in 3..=9 {
            for twice_mu in -5..=5 {
                let Some(spec) = admissible(dim, twice_mu) else {
                    continue;
                };
                for principal in 0..=8u32 {
                    let report = branching_check(&spec, principal);
                    checked += 1;
                    if !report.holds() {
                        failures.push(format!("{spec} I={principal}"));
                    }
                    if dim == 3 && twice_mu == 0 {
                        let square = num_bigint::BigUint::from((principal + 1) * (principal + 1));
                        if report.total_dimension != square || report.sector_sum != square {
                            failures.push(format!("hydrogen I={principal} is not (I+1)^2"));
                        }
                    }
                }
            }
        }
        Ok((
            failures.is_empty(),
            if failures.is_empty() {
                format!("{checked} levels exact; no mismatches")
            } else {
                format!("{checked} levels; mismatches: {}", failures.join(", "))
            },
        ))
    })
}

/// 5. Bound-state counting on the pseudo-sphere.
pub fn bound_state_count() -> CriterionResult {
    timed(5, "bound-state counting", Some(60.0), || {
        let kappa = -1.1e-4;
        let spec = ProblemSpec::new(3, kappa, 0)?;
        let expected = match spec.cutoff_index() {
            CutoffIndex::Finite(i0) => i0,
            CutoffIndex::Infinite => unreachable!("negative curvature has a finite cutoff"),
        };
        let sector = SectorSpec::new(spec, 0);
        let levels = expected as u32 + 1;
        let grid = RadialGrid::for_sector(&sector, levels, 40000, None)?;
        let extent_ok = grid.x_max() >= 12.0 / (-kappa).sqrt();
        let op = discretize(&sector, &grid)?;
        let below = sturm_count(
            &op.diagonal,
            &op.off_diagonal,
            2.0 * threshold_energy(&spec)?,
        );
        let pairs = eigen_lowest(&op, below.min(levels as usize))?;
        let worst = pairs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let e = energy(&spec, i as u32);
                (p.value / 2.0 - e).abs() / e.abs()
            })
            .fold(0.0, f64::max);
        Ok((
            expected == 8 && below == 9 && worst <= 1e-3 && extent_ok,
            format!(
                "I0 = {expected}; {below} FD eigenvalues below threshold (x_max {:.1}, N {}); worst relerr {worst:.3e} (<= 1e-3)",
                grid.x_max(),
                grid.n_points()
            ),
        ))
    })
}

/// Hydrogen ground-state FD error on `n` points over `[0, 400]`.
pub fn hydrogen_error(n: usize) -> Result<(f64, f64)> {
    let sector = SectorSpec::new(ProblemSpec::new(3, 0.0, 0)?, 0);
    let grid = RadialGrid::new(n, 400.0)?;
    let op = discretize(&sector, &grid)?;
    let value = crate::radial::lowest_eigenvalues(&op, 1)?[0];
    Ok((grid.spacing(), (value + 1.0).abs()))
}

/// 6. Second-order grid convergence.
pub fn convergence_order() -> CriterionResult {
    timed(6, "convergence order", None, || {
        let samples = [5000, 10000, 20000]
            .iter()
            .map(|&n| hydrogen_error(n))
            .collect::<Result<Vec<_>>>()?;
        let orders: Vec<f64> = samples
            .windows(2)
            .map(|w| (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln())
            .collect();
        let ok = orders.iter().all(|p| (1.8..=2.2).contains(p));
        Ok((
            ok,
            format!(
                "measured orders {:.4}, {:.4} (in [1.8, 2.2])",
                orders[0], orders[1]
            ),
        ))
    })
}

/// 7. Orthonormality in the radial measure over the sweep.
pub fn orthonormality(sweep: &[Result<SweepCase>]) -> CriterionResult {
    timed(7, "orthonormality", None, || {
        let mut worst = 0.0f64;
        for case in sweep {
            match case {
                Ok(c) => worst = nan_max(worst, c.orthonormality),
                Err(e) => return Ok((false, format!("sweep case failed: {e}"))),
            }
        }
        Ok((
            worst <= 1e-6,
            format!(
                "max off-diagonal overlap {worst:.3e} over {} cases (<= 1e-6)",
                sweep.len()
            ),
        ))
    })
}

/// 8. Gauge identity suite.
pub fn gauge_identities(quick: bool) -> CriterionResult {
    timed(8, "gauge identities", Some(30.0), || {
        let checks = gauge::gauge_check(8, if quick { 100 } else { 1000 })?;
        let failed: Vec<&str> = checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name.as_str())
            .collect();
        let summary: Vec<String> = checks
            .iter()
            .map(|c| format!("{} {:.3e}", c.name, c.value))
            .collect();
        Ok((
            failed.is_empty(),
            format!("{}; failed: [{}]", summary.join(", "), failed.join(", ")),
        ))
    })
}

/// 9. Marginal-level identity at random negative curvatures.
pub fn marginal_identity() -> CriterionResult {
    timed(9, "marginal-level identity", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let kappa = -10f64.powf(rng.gen_range(-6.0..1.0));
            let dim = rng.gen_range(3..=12u32);
            let twice_mu = if dim % 2 == 0 {
                rng.gen_range(0..=1)
            } else {
                rng.gen_range(-5..=5)
            };
            let spec = ProblemSpec::new(dim, kappa, twice_mu)?;
            let nu = (-kappa).powf(-0.25);
            let th = threshold_energy(&spec)?;
            worst = worst.max((energy_at_nu(&spec, nu) - th).abs() / th.abs());
        }
        Ok((
            worst <= 1e-12,
            format!("max relative gap {worst:.3e} over 20 draws (<= 1e-12)"),
        ))
    })
}

/// Runs all nine criteria; the result is ordered by criterion id.
pub fn run_all(quick: bool) -> Vec<CriterionResult> {
    let start = Instant::now();
    let sweep = run_sweep(quick);
    let sweep_time = start.elapsed();
    vec![
        hydrogen_anchor(),
        parameter_sweep(&sweep, sweep_time),
        casimir_identity(),
        branching_identity(),
        bound_state_count(),
        convergence_order(),
        orthonormality(&sweep),
        gauge_identities(quick),
        marginal_identity(),
    ]
}
