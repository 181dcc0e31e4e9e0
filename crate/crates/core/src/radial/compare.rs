use std::fmt::Write as _;

use crate::error::Result;
use crate::format;
use crate::model::CutoffIndex;
use crate::spectrum::{energy, sector_level_to_principal, threshold_energy};

use super::tridiag::lowest_eigenvalues;
use super::{
    discretize, eigen_lowest, shooting_eigenvalue, to_radial_r, Eigenpair, RadialFunction,
    RadialGrid, SectorSpec,
};

pub const COMPARE_CSV_HEADER: &str = "k,I,lambda_fd,lambda_shoot,E_closed,relerr_fd,relerr_shoot";

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    /// Radial level, starting at 1.
    pub k: u32,
    pub principal: u32,
    pub lambda_fd: f64,
    /// `NaN` when the shooting oracle could not isolate the level.
    pub lambda_shoot: f64,
    pub energy_closed: f64,
    /// False for levels at or above the continuum threshold or beyond `I₀`.
    pub bound: bool,
    pub nodes_fd: usize,
}

impl ComparisonRow {
    pub fn relerr_fd(&self) -> f64 {
        (self.lambda_fd / 2.0 - self.energy_closed).abs() / self.energy_closed.abs()
    }

    pub fn relerr_shoot(&self) -> f64 {
        (self.lambda_shoot / 2.0 - self.energy_closed).abs() / self.energy_closed.abs()
    }

    /// `|λ_fd − λ_shoot| / |λ_shoot|`.
    pub fn solver_disagreement(&self) -> f64 {
        (self.lambda_fd - self.lambda_shoot).abs() / self.lambda_shoot.abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub sector: SectorSpec,
    pub grid: RadialGrid,
    pub rows: Vec<ComparisonRow>,
    pub eigenpairs: Vec<Eigenpair>,
}

impl ComparisonReport {
    pub fn bound_rows(&self) -> impl Iterator<Item = &ComparisonRow> {
        self.rows.iter().filter(|r| r.bound)
    }

    /// Radial functions of the computed states, normalized in the radial measure.
    pub fn wavefunctions(&self) -> Result<Vec<RadialFunction>> {
        self.eigenpairs
            .iter()
            .map(|p| to_radial_r(&self.sector, &p.vector, &self.grid))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(COMPARE_CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                row.k,
                row.principal,
                format::sig(row.lambda_fd, 12),
                format::sig(row.lambda_shoot, 12),
                format::sig(row.energy_closed, 12),
                format::sig(row.relerr_fd(), 12),
                format::sig(row.relerr_shoot(), 12)
            );
        }
        out
    }
}

/// Solves the first `count` levels of `sector` by finite differences and by
/// shooting, next to the closed-form energy of principal index `l + k − 1`.
pub fn sector_compare(
    sector: &SectorSpec,
    count: u32,
    grid: &RadialGrid,
) -> Result<ComparisonReport> {
    let op = discretize(sector, grid)?;
    let count = count as usize;
    let eigenpairs = eigen_lowest(&op, count)?;
    // one extra eigenvalue to bracket the last requested level from above
    let extended = lowest_eigenvalues(&op, (count + 1).min(op.len()))?;

    let spec = sector.spec();
    let cutoff = spec.cutoff_index();
    let threshold_lambda = threshold_energy(spec).ok().map(|e| 2.0 * e);

    let mut rows = Vec::with_capacity(count);
    for (i, pair) in eigenpairs.iter().enumerate() {
        let k = i as u32 + 1;
        let principal = sector_level_to_principal(sector.l(), k);
        let lambda = pair.value;
        let below = if i > 0 {
            extended[i - 1]
        } else {
            f64::NEG_INFINITY
        };
        let above = extended.get(i + 1).copied().unwrap_or(f64::INFINITY);
        let gap_below = lambda - below;
        let gap_above = above - lambda;
        let half_gap = 0.5 * gap_below.min(gap_above);
        let half_gap = if half_gap.is_finite() {
            half_gap
        } else {
            0.5 * lambda.abs().max(1.0)
        };
        let bracket = (
            lambda
                - if gap_below.is_finite() {
                    0.5 * gap_below
                } else {
                    half_gap
                },
            lambda
                + if gap_above.is_finite() {
                    0.5 * gap_above
                } else {
                    half_gap
                },
        );
        let bound = cutoff.admits(principal)
            && threshold_lambda.is_none_or(|th| lambda < th)
            && !(spec.is_marginal() && CutoffIndex::Finite(i64::from(principal)) == cutoff);
        let lambda_shoot = shooting_eigenvalue(sector, grid, k, bracket)
            .map(|r| r.lambda)
            .unwrap_or(f64::NAN);
        rows.push(ComparisonRow {
            k,
            principal,
            lambda_fd: lambda,
            lambda_shoot,
            energy_closed: energy(spec, principal),
            bound,
            nodes_fd: super::tridiag::sign_changes(&pair.vector),
        });
    }
    Ok(ComparisonReport {
        sector: *sector,
        grid: *grid,
        rows,
        eigenpairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ProblemSpec;

    #[test]
    fn flat_five_dimensional_unit_charge() {
        let sector = SectorSpec::new(ProblemSpec::new(5, 0.0, 2).unwrap(), 0);
        let grid = RadialGrid::for_sector(&sector, 2, 20000, None).unwrap();
        let rep = sector_compare(&sector, 2, &grid).unwrap();
        let expect = [-1.0 / 18.0, -1.0 / 32.0];
        for (row, e) in rep.rows.iter().zip(expect) {
            assert_eq!(row.energy_closed, e);
            assert!(row.relerr_fd() < 1e-3, "{row:?}");
            assert!(row.relerr_shoot() < 1e-6, "{row:?}");
            assert!(row.bound);
        }
        let csv = rep.to_csv();
        assert!(csv.starts_with(COMPARE_CSV_HEADER));
        assert_eq!(csv.lines().count(), 3);
    }
}
