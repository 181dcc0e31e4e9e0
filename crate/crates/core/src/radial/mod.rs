//! Reduced one-dimensional eigenproblem of a single angular sector.
//!
//! After `y = (r/(1+κ̄r²))^{(D−1)/2} R` and `dx = dr/(1+κ̄r²)` every sector
//! becomes `−y″ + q(x) y = λ y` with `λ = 2E`. All solvers here work in λ;
//! conversion to energies happens only when reporting.

mod compare;
mod grid;
mod shooting;
mod tridiag;
mod wavefunction;

pub use compare::{sector_compare, ComparisonReport, ComparisonRow, COMPARE_CSV_HEADER};
pub use grid::{default_points, default_x_max, RadialGrid, BASE_POINTS, RELATIVE_SPACING};
pub use shooting::{shooting_eigenvalue, ShootingResult};
pub use tridiag::{
    discretize, eigen_lowest, lowest_eigenvalues, sign_changes, sturm_count, Eigenpair,
    TridiagonalOperator,
};
pub use wavefunction::{
    orthonormality_check, to_radial_r, RadialFunction, WAVEFUNCTION_CSV_HEADER,
};

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::ProblemSpec;
use crate::reptheory::{c_closed_form, sector_m};
use crate::Rational;

/// Natural right endpoint of the x coordinate: `π/√κ` for κ > 0, `+∞` otherwise.
pub fn x_max_analytic(spec: &ProblemSpec) -> f64 {
    if spec.kappa() > 0.0 {
        PI / spec.kappa().sqrt()
    } else {
        f64::INFINITY
    }
}

/// Maps the radius `r` to the flattened coordinate `x`.
pub fn x_of_r(spec: &ProblemSpec, r: f64) -> Result<f64> {
    spec.check_r(r)?;
    let kb = spec.kappa_bar();
    Ok(if kb == 0.0 {
        r
    } else if kb > 0.0 {
        let a = kb.sqrt();
        (a * r).atan() / a
    } else {
        let a = (-kb).sqrt();
        (a * r).atanh() / a
    })
}

/// Inverse of [`x_of_r`].
pub fn r_of_x(spec: &ProblemSpec, x: f64) -> Result<f64> {
    check_x(spec, x)?;
    let kb = spec.kappa_bar();
    Ok(if kb == 0.0 {
        x
    } else if kb > 0.0 {
        let a = kb.sqrt();
        (a * x).tan() / a
    } else {
        let a = (-kb).sqrt();
        (a * x).tanh() / a
    })
}

fn check_x(spec: &ProblemSpec, x: f64) -> Result<()> {
    let hi = x_max_analytic(spec);
    if !(x > 0.0 && x < hi) {
        return Err(Error::Range {
            what: "x",
            value: x,
            lo: 0.0,
            hi,
        });
    }
    Ok(())
}

/// A problem restricted to the angular sector `l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorSpec {
    spec: ProblemSpec,
    l: u32,
    m: Rational,
    c: Rational,
    m_f: f64,
    mm1: f64,
    half_sq: f64,
}

fn to_f64(q: Rational) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

impl SectorSpec {
    pub fn new(spec: ProblemSpec, l: u32) -> Self {
        let m = sector_m(&spec, l);
        let c = c_closed_form(&spec, l);
        let half = to_f64(spec.half_dim_minus_one());
        SectorSpec {
            spec,
            l,
            m,
            c,
            m_f: to_f64(m),
            mm1: to_f64(m * (m + 1)),
            half_sq: half * half,
        }
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// `m = l + |μ| + (D−3)/2`.
    pub fn m(&self) -> Rational {
        self.m
    }

    pub(crate) fn m_f64(&self) -> f64 {
        self.m_f
    }

    /// `c = m(m+1) − (D−1)(D−3)/4`.
    pub fn c(&self) -> Rational {
        self.c
    }

    pub fn x_max_analytic(&self) -> f64 {
        x_max_analytic(&self.spec)
    }

    /// ν of the `k`-th radial level of this sector (k ≥ 1).
    pub fn nu_of_level(&self, k: u32) -> f64 {
        to_f64(self.spec.nu(self.l + k - 1))
    }

    /// The transformed potential `q(x) = −r(x, m)`.
    pub fn potential_q(&self, x: f64) -> Result<f64> {
        check_x(&self.spec, x)?;
        let q = self.q_unchecked(x);
        if !q.is_finite() {
            return Err(Error::Range {
                what: "x",
                value: x,
                lo: 0.0,
                hi: self.x_max_analytic(),
            });
        }
        Ok(q)
    }

    /// `q` without domain checks, for the inner loops of the solvers.
    pub(crate) fn q_unchecked(&self, x: f64) -> f64 {
        let kappa = self.spec.kappa();
        if kappa == 0.0 {
            self.mm1 / (x * x) - 2.0 / x
        } else if kappa > 0.0 {
            let sk = kappa.sqrt();
            let (s, c) = (sk * x).sin_cos();
            kappa * self.mm1 / (s * s) - 2.0 * sk * c / s - kappa * self.half_sq
        } else {
            let sk = (-kappa).sqrt();
            let t = sk * x;
            let sh = t.sinh();
            -kappa * self.mm1 / (sh * sh) - 2.0 * sk / t.tanh() - kappa * self.half_sq
        }
    }

    /// `q(x → ∞)` for κ < 0 (twice the threshold energy), `0` for κ = 0.
    pub(crate) fn q_infinity(&self) -> Option<f64> {
        let kappa = self.spec.kappa();
        if kappa < 0.0 {
            Some(-2.0 * (-kappa).sqrt() - kappa * self.half_sq)
        } else if kappa == 0.0 {
            Some(0.0)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sector(dim: u32, kappa: f64, twice_mu: i64, l: u32) -> SectorSpec {
        SectorSpec::new(ProblemSpec::new(dim, kappa, twice_mu).unwrap(), l)
    }

    #[test]
    fn coordinate_examples() {
        let s = ProblemSpec::new(3, 0.0, 0).unwrap();
        assert_eq!(x_of_r(&s, 3.7).unwrap(), 3.7);
        let s = ProblemSpec::new(3, 1.0, 0).unwrap();
        assert!((x_of_r(&s, 2.0).unwrap() - PI / 2.0).abs() < 1e-15);
        let s = ProblemSpec::new(3, -1.0, 0).unwrap();
        assert!((x_of_r(&s, 1.0).unwrap() - 3f64.ln()).abs() < 1e-15);
        assert!(x_of_r(&s, 2.0).is_err());
        assert!(r_of_x(&ProblemSpec::new(3, 1.0, 0).unwrap(), PI).is_err());
        assert!(r_of_x(&ProblemSpec::new(3, 1.0, 0).unwrap(), -0.1).is_err());
    }

    #[test]
    fn sector_constants() {
        let s = sector(5, 0.0, 2, 0);
        assert_eq!(s.m(), Rational::from_integer(2));
        assert_eq!(s.c(), Rational::from_integer(4));
        let s = sector(4, 0.0, 1, 1);
        assert_eq!(s.m(), Rational::new(2, 1));
        // m ≥ (D−3)/2 and c + (D−1)(D−3)/4 = m(m+1)
        for d in 3..10u32 {
            let s = sector(d, 0.0, i64::from(d % 2), 3);
            let m = s.m();
            let dd = i64::from(d);
            assert!(m >= Rational::new(dd - 3, 2));
            assert_eq!(s.c() + Rational::new((dd - 1) * (dd - 3), 4), m * (m + 1));
        }
    }

    #[test]
    fn potential_examples() {
        assert_eq!(sector(3, 0.0, 0, 0).potential_q(2.0).unwrap(), -1.0);
        assert_eq!(sector(3, 0.0, 0, 1).potential_q(1.0).unwrap(), 0.0);
        let kappa = 0.3;
        let q = sector(3, kappa, 0, 0)
            .potential_q(PI / (2.0 * kappa.sqrt()))
            .unwrap();
        assert!((q + kappa).abs() < 1e-14);
        assert!(sector(3, kappa, 0, 0)
            .potential_q(PI / kappa.sqrt())
            .is_err());
    }

    /// The three closed forms agree with the untransformed expression written
    /// in terms of r, c and κ̄.
    #[test]
    fn potential_matches_untransformed_expression() {
        for &kappa in &[-0.3, -1e-3, 0.0, 1e-3, 0.7] {
            for &(dim, twice_mu, l) in &[(3u32, 0i64, 0u32), (4, 1, 2), (5, 3, 1), (8, 0, 3)] {
                let sec = sector(dim, kappa, twice_mu, l);
                let spec = sec.spec();
                let kb = spec.kappa_bar();
                let c = to_f64(sec.c());
                let h = (f64::from(dim) - 1.0) / 2.0;
                let xs = [0.05, 0.4, 1.3, 2.9];
                for &x in &xs {
                    if x >= sec.x_max_analytic() {
                        continue;
                    }
                    let r = r_of_x(spec, x).unwrap();
                    let p = 1.0 + kb * r * r;
                    let mm = 1.0 - kb * r * r;
                    let rr = 2.0 * mm / r - (p * p * c + h * h * mm * mm - h * p * p) / (r * r);
                    let q = sec.potential_q(x).unwrap();
                    assert!(
                        (q + rr).abs() <= 1e-10 * rr.abs().max(1.0),
                        "kappa={kappa} D={dim} x={x}: {q} vs {}",
                        -rr
                    );
                }
            }
        }
    }
}
