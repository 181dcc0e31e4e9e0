//! The problem triple (D, κ, μ) and the scalar constants derived from it.
//!
//! The magnetic charge is stored as the integer `2μ` so that all parity and
//! representation-theoretic bookkeeping stays exact. Only the curvature is a
//! floating-point quantity.

use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::Rational;

/// Relative distance from an integer below which the bound-state cutoff is
/// treated as landing exactly on a level.
const MARGINAL_TOL: f64 = 1e-12;

/// A validated generalized Kepler problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    dim: u32,
    kappa: f64,
    twice_mu: i64,
    kappa_bar: f64,
    delta_mu: Rational,
}

/// Largest admissible principal index `I₀(κ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffIndex {
    /// Every principal index is bound (κ ≥ 0).
    Infinite,
    /// Indices `0..=value` are bound; a negative value means there are none.
    Finite(i64),
}

impl CutoffIndex {
    /// Whether principal index `i` lies at or below the cutoff.
    pub fn admits(self, i: u32) -> bool {
        match self {
            CutoffIndex::Infinite => true,
            CutoffIndex::Finite(top) => i64::from(i) <= top,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, CutoffIndex::Infinite)
    }
}

impl fmt::Display for CutoffIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutoffIndex::Infinite => write!(f, "inf"),
            CutoffIndex::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl ProblemSpec {
    /// Validates `(dim, kappa, 2μ)` and populates the derived constants.
    pub fn new(dim: u32, kappa: f64, twice_mu: i64) -> Result<Self> {
        if dim < 3 {
            return Err(Error::DimensionTooSmall(dim));
        }
        if !kappa.is_finite() {
            return Err(Error::NonFinite {
                name: "kappa",
                value: kappa,
            });
        }
        if dim.is_multiple_of(2) && !(twice_mu == 0 || twice_mu == 1) {
            return Err(Error::EvenDimensionCharge { dim, twice_mu });
        }
        let n = i64::from(dim / 2);
        let mu = Rational::new(twice_mu, 2);
        let delta_mu = if dim % 2 == 1 {
            mu.abs() * (n - 1) + mu * mu
        } else {
            mu * (n - 1)
        };
        Ok(ProblemSpec {
            dim,
            kappa,
            twice_mu,
            kappa_bar: kappa / 4.0,
            delta_mu,
        })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn twice_mu(&self) -> i64 {
        self.twice_mu
    }

    /// κ̄ = κ/4, the coefficient appearing in the conformal factor of the metric.
    pub fn kappa_bar(&self) -> f64 {
        self.kappa_bar
    }

    pub fn mu(&self) -> Rational {
        Rational::new(self.twice_mu, 2)
    }

    pub fn abs_mu(&self) -> Rational {
        Rational::new(self.twice_mu.abs(), 2)
    }

    pub fn delta_mu(&self) -> Rational {
        self.delta_mu
    }

    /// (D − 1)/2, which recurs in the spectrum and the transformed potential.
    pub fn half_dim_minus_one(&self) -> Rational {
        Rational::new(i64::from(self.dim) - 1, 2)
    }

    /// Radius of the punctured disk for κ < 0, `+∞` otherwise.
    pub fn r_max(&self) -> f64 {
        if self.kappa < 0.0 {
            1.0 / (-self.kappa_bar).sqrt()
        } else {
            f64::INFINITY
        }
    }

    /// V_κ(r) = −1/r + κ̄ r.
    pub fn pre_potential(&self, r: f64) -> Result<f64> {
        self.check_r(r)?;
        Ok(-1.0 / r + self.kappa_bar * r)
    }

    pub(crate) fn check_r(&self, r: f64) -> Result<()> {
        let hi = self.r_max();
        if !(r > 0.0 && r < hi) {
            return Err(Error::Range {
                what: "r",
                value: r,
                lo: 0.0,
                hi,
            });
        }
        Ok(())
    }

    /// The real number whose floor is `I₀(κ)`; `None` for κ ≥ 0.
    pub fn cutoff_argument(&self) -> Option<f64> {
        if self.kappa >= 0.0 {
            return None;
        }
        let abs_mu = self.twice_mu.abs() as f64 / 2.0;
        let half = (f64::from(self.dim) - 1.0) / 2.0;
        Some((-self.kappa).powf(-0.25) - abs_mu - half)
    }

    /// I₀(κ): the largest bound principal index.
    ///
    /// An argument within `MARGINAL_TOL` of an integer is snapped to it so that
    /// the marginal level is reported consistently; see [`Self::is_marginal`].
    pub fn cutoff_index(&self) -> CutoffIndex {
        match self.cutoff_argument() {
            None => CutoffIndex::Infinite,
            Some(arg) => {
                let nearest = arg.round();
                if (arg - nearest).abs() <= MARGINAL_TOL * arg.abs().max(1.0) {
                    CutoffIndex::Finite(nearest as i64)
                } else {
                    CutoffIndex::Finite(arg.floor() as i64)
                }
            }
        }
    }

    /// True when the top level sits exactly on the continuum threshold.
    pub fn is_marginal(&self) -> bool {
        match self.cutoff_argument() {
            None => false,
            Some(arg) => {
                let nearest = arg.round();
                nearest >= 0.0 && (arg - nearest).abs() <= MARGINAL_TOL * arg.abs().max(1.0)
            }
        }
    }

    /// ν = I + (D − 1)/2 + |μ|.
    pub fn nu(&self, principal: u32) -> Rational {
        Rational::from_integer(i64::from(principal)) + self.half_dim_minus_one() + self.abs_mu()
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(D={}, kappa={}, mu={})",
            self.dim,
            self.kappa,
            crate::format::rational(self.mu())
        )
    }
}

/// Convenience wrapper around [`ProblemSpec::new`].
pub fn make_spec(dim: u32, kappa: f64, twice_mu: i64) -> Result<ProblemSpec> {
    ProblemSpec::new(dim, kappa, twice_mu)
}

/// Parses a magnetic charge written as an integer or a half-integer fraction
/// (`0`, `1`, `1/2`, `-3/2`) into `2μ`.
pub fn parse_twice_mu(text: &str) -> Result<i64> {
    let text = text.trim();
    let bad = || {
        Error::Config(format!(
            "magnetic charge must be an integer or p/2, got '{text}'"
        ))
    };
    match text.split_once('/') {
        None => text.parse::<i64>().map(|v| 2 * v).map_err(|_| bad()),
        Some((num, den)) => {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            let den: i64 = den.trim().parse().map_err(|_| bad())?;
            match den {
                1 => Ok(2 * num),
                2 => Ok(num),
                _ => Err(bad()),
            }
        }
    }
}
