use crate::error::{Error, Result};

use super::SectorSpec;

/// Smallest admissible number of interior nodes.
pub const MIN_POINTS: usize = 16;

/// Uniform grid on `(0, x_max)` with both endpoints excluded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    n_points: usize,
    x_max: f64,
    h: f64,
}

impl RadialGrid {
    pub fn new(n_points: usize, x_max: f64) -> Result<Self> {
        if n_points < MIN_POINTS {
            return Err(Error::Config(format!(
                "grid needs at least {MIN_POINTS} points, got {n_points}"
            )));
        }
        if !(x_max.is_finite() && x_max > 0.0) {
            return Err(Error::Config(format!(
                "grid extent must be positive and finite, got {x_max}"
            )));
        }
        Ok(RadialGrid {
            n_points,
            x_max,
            h: x_max / (n_points as f64 + 1.0),
        })
    }

    /// Grid for `sector` resolving its first `levels` states.
    ///
    /// For κ > 0 the extent is always the analytic endpoint; `x_max` only
    /// overrides the truncation used for κ ≤ 0.
    pub fn for_sector(
        sector: &SectorSpec,
        levels: u32,
        n_points: usize,
        x_max: Option<f64>,
    ) -> Result<Self> {
        let extent = if sector.spec().kappa() > 0.0 {
            sector.x_max_analytic()
        } else {
            match x_max {
                Some(x) => x,
                None => default_x_max(sector, levels),
            }
        };
        Self::new(n_points, extent)
    }

    /// Grid for `sector` with [`default_points`] nodes.
    pub fn auto(sector: &SectorSpec, levels: u32, x_max: Option<f64>) -> Result<Self> {
        let extent = Self::for_sector(sector, levels, MIN_POINTS, x_max)?.x_max();
        Self::new(default_points(sector, extent), extent)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// Node spacing `x_max/(N+1)`.
    pub fn spacing(&self) -> f64 {
        self.h
    }

    /// Interior node `i` (zero-based), i.e. `x = (i+1)·h`.
    pub fn node(&self, i: usize) -> f64 {
        (i as f64 + 1.0) * self.h
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|i| self.node(i))
    }
}

/// Node spacing in units of the smallest ν of a sector.
pub const RELATIVE_SPACING: f64 = 0.02;
pub const BASE_POINTS: usize = 20000;

/// At least 20000 nodes, and enough for a spacing of `0.02·ν` of the most
/// compact state of the sector.
pub fn default_points(sector: &SectorSpec, x_max: f64) -> usize {
    let nu = sector.nu_of_level(1);
    let needed = (x_max / (RELATIVE_SPACING * nu)).ceil() as usize;
    needed.max(BASE_POINTS)
}

/// Truncation of the x domain for κ ≤ 0 (the analytic endpoint for κ > 0).
///
/// κ = 0 uses `max(400, 40 ν²)`; κ < 0 uses `max(400, 12/√(−κ))`, extended to
/// 30 decay lengths of the highest requested level when that is longer.
pub fn default_x_max(sector: &SectorSpec, levels: u32) -> f64 {
    let kappa = sector.spec().kappa();
    let nu_top = sector.nu_of_level(levels.max(1));
    if kappa > 0.0 {
        sector.x_max_analytic()
    } else if kappa == 0.0 {
        (40.0 * nu_top * nu_top).max(400.0)
    } else {
        let base = (12.0 / (-kappa).sqrt()).max(400.0);
        // decay constant of the level: sqrt(q(∞) − λ)
        let lambda = 2.0 * crate::spectrum::energy_at_nu(sector.spec(), nu_top);
        let gap = sector.q_infinity().unwrap_or(0.0) - lambda;
        if gap > 0.0 {
            base.max(30.0 / gap.sqrt())
        } else {
            base
        }
    }
}
