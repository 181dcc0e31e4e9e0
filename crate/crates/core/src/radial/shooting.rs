//! Two-sided shooting with Prüfer-angle matching.
//!
//! The left solution starts from the regular behaviour `y ~ x^{m+1}` at the
//! origin, the right one either decays exponentially (κ ≤ 0) or vanishes like
//! `(L−x)^{m+1}` at the antipodal wall (κ > 0). Near a singular endpoint the
//! integration runs in `s = ln z` (z the distance to the endpoint) with
//! `y = z^{1/2} u`, which turns the centrifugal singularity into the smooth
//! coefficient `u″ = (z²(q − λ) + 1/4) u`. Away from it a fixed-step RK4 in x
//! takes over.
//!
//! With `θ = atan2(y, y′)` followed continuously, the mismatch
//! `θ_L(x_c) − θ_R(x_c)` is strictly increasing in λ and equals `(k−1)π` at the
//! k-th eigenvalue, so the root search never sees the poles of a
//! log-derivative mismatch.

use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::{RadialGrid, SectorSpec};

/// RK4 sub-steps per grid spacing.
const SUBSTEPS: usize = 4;
/// Ratio between the log-segment join point and the uniform step.
const JOIN_FACTOR: f64 = 100.0;
const RESCALE_ABOVE: f64 = 1e100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingResult {
    pub lambda: f64,
    /// Interior sign changes of the matched solution.
    pub nodes: usize,
    pub matching_point: f64,
}

/// State of one integration leg: value, x-derivative, unwrapped Prüfer angle.
#[derive(Debug, Clone, Copy)]
struct Leg {
    y: f64,
    dy: f64,
    theta: f64,
    nodes: usize,
}

impl Leg {
    fn new(y: f64, dy: f64) -> Self {
        Leg {
            y,
            dy,
            theta: y.atan2(dy),
            nodes: 0,
        }
    }

    fn advance(&mut self, y: f64, dy: f64) {
        let raw = y.atan2(dy);
        let mut delta = raw - self.theta.rem_euclid(2.0 * PI);
        delta = (delta + PI).rem_euclid(2.0 * PI) - PI;
        self.theta += delta;
        if y != 0.0 && self.y != 0.0 && y.signum() != self.y.signum() {
            self.nodes += 1;
        }
        self.y = y;
        self.dy = dy;
    }
}

/// `y″ = f(z)·y` with classical RK4, `n` fixed steps of `step` starting at `z0`.
/// `orient` is `dx/dz` (±1) so that the leg tracks the x-derivative.
fn rk4_uniform(leg: &mut Leg, f: &dyn Fn(f64) -> f64, z0: f64, step: f64, n: usize, orient: f64) {
    let mut y = leg.y;
    let mut p = leg.dy * orient;
    let mut f_lo = f(z0);
    for i in 0..n {
        let z = z0 + i as f64 * step;
        let f_mid = f(z + 0.5 * step);
        let f_hi = f(z + step);
        let k1y = p;
        let k1p = f_lo * y;
        let k2y = p + 0.5 * step * k1p;
        let k2p = f_mid * (y + 0.5 * step * k1y);
        let k3y = p + 0.5 * step * k2p;
        let k3p = f_mid * (y + 0.5 * step * k2y);
        let k4y = p + step * k3p;
        let k4p = f_hi * (y + step * k3y);
        y += step / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        p += step / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        let big = y.abs().max(p.abs());
        if big > RESCALE_ABOVE {
            y /= big;
            p /= big;
        }
        leg.advance(y, p * orient);
        f_lo = f_hi;
    }
}

/// Regular solution near a singular endpoint, integrated in `s = ln z` from
/// `z_start` to `z_end`. `coulomb` is the coefficient of `1/z` in q.
fn log_segment(
    q: &dyn Fn(f64) -> f64,
    lambda: f64,
    m: f64,
    coulomb: f64,
    z_start: f64,
    z_end: f64,
    orient: f64,
) -> Leg {
    let a1 = coulomb / (2.0 * (m + 1.0));
    let g = |s: f64| {
        let z = s.exp();
        z * z * (q(z) - lambda) + 0.25
    };
    // y = z^{m+1}(1 + a1 z), with the common factor z^{m+1/2} dropped from u.
    let mut u = 1.0 + a1 * z_start;
    let mut v = (m + 0.5) * u + a1 * z_start;
    let to_xy = |s: f64, u: f64, v: f64| {
        let z = s.exp();
        let root = z.sqrt();
        (root * u, (0.5 * u + v) / root * orient)
    };
    let s0 = z_start.ln();
    let s1 = z_end.ln();
    let ds_max = 0.01 / (1.0 + m / 5.0);
    let n = ((s1 - s0) / ds_max).ceil().max(1.0) as usize;
    let ds = (s1 - s0) / n as f64;
    let (y0, dy0) = to_xy(s0, u, v);
    let mut leg = Leg::new(y0, dy0);
    let mut g_lo = g(s0);
    for i in 0..n {
        let s = s0 + i as f64 * ds;
        let g_mid = g(s + 0.5 * ds);
        let g_hi = g(s + ds);
        let k1u = v;
        let k1v = g_lo * u;
        let k2u = v + 0.5 * ds * k1v;
        let k2v = g_mid * (u + 0.5 * ds * k1u);
        let k3u = v + 0.5 * ds * k2v;
        let k3v = g_mid * (u + 0.5 * ds * k2u);
        let k4u = v + ds * k3v;
        let k4v = g_hi * (u + ds * k3u);
        u += ds / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += ds / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        let big = u.abs().max(v.abs());
        if big > RESCALE_ABOVE {
            u /= big;
            v /= big;
        }
        let (y, dy) = to_xy(s + ds, u, v);
        leg.advance(y, dy);
        g_lo = g_hi;
    }
    leg
}

/// Behaviour of the solution at the right end of the interval.
#[derive(Debug, Clone, Copy)]
pub(crate) enum RightEnd {
    /// Singular wall with `q ≈ m(m+1)/z² + coulomb/z`.
    Wall { m: f64, coulomb: f64 },
    /// Truncated infinite interval: exponential decay into the far region.
    Decay,
}

/// A singular-at-the-origin Sturm–Liouville problem `−y″ + q y = λ y`.
pub(crate) struct ShootingProblem<'a> {
    pub q: &'a (dyn Fn(f64) -> f64 + Sync),
    /// `q ≈ m(m+1)/x² + coulomb/x` near the origin.
    pub m: f64,
    pub coulomb: f64,
    pub right: RightEnd,
    pub x_right: f64,
    pub grid_spacing: f64,
}

struct Setup<'a> {
    problem: &'a ShootingProblem<'a>,
    step: f64,
    join: f64,
    z_start: f64,
}

impl<'a> Setup<'a> {
    fn new(problem: &'a ShootingProblem<'a>) -> Setup<'a> {
        let step = problem.grid_spacing / SUBSTEPS as f64;
        let join = (JOIN_FACTOR * step).min(0.5);
        Setup {
            problem,
            step,
            join,
            z_start: 1e-6 * join,
        }
    }

    fn wall(&self) -> bool {
        matches!(self.problem.right, RightEnd::Wall { .. })
    }

    /// Left leg on `(0, x_c]`.
    fn left(&self, lambda: f64, x_c: f64) -> Leg {
        let q = self.problem.q;
        let z_join = self.join.min(x_c);
        let mut leg = log_segment(
            q,
            lambda,
            self.problem.m,
            self.problem.coulomb,
            self.z_start.min(0.5 * z_join),
            z_join,
            1.0,
        );
        if x_c > z_join {
            let n = ((x_c - z_join) / self.step).ceil() as usize;
            let step = (x_c - z_join) / n as f64;
            rk4_uniform(&mut leg, &|x| q(x) - lambda, z_join, step, n, 1.0);
        }
        leg
    }

    /// Right leg on `[x_c, x_right)`, expressed in x-derivatives.
    fn right(&self, lambda: f64, x_c: f64) -> Leg {
        let xr = self.problem.x_right;
        let q_of_x = self.problem.q;
        let q = |z: f64| q_of_x(xr - z);
        let z_c = xr - x_c;
        match self.problem.right {
            RightEnd::Wall { m, coulomb } => {
                let z_join = self.join.min(z_c);
                let mut leg = log_segment(
                    &q,
                    lambda,
                    m,
                    coulomb,
                    self.z_start.min(0.5 * z_join),
                    z_join,
                    -1.0,
                );
                if z_c > z_join {
                    let n = ((z_c - z_join) / self.step).ceil() as usize;
                    let step = (z_c - z_join) / n as f64;
                    rk4_uniform(&mut leg, &|z| q(z) - lambda, z_join, step, n, -1.0);
                }
                leg
            }
            RightEnd::Decay => {
                // Dirichlet if the level is above the local potential.
                let gap = q(0.0) - lambda;
                let mut leg = if gap > 0.0 {
                    Leg::new(1.0, -gap.sqrt())
                } else {
                    Leg::new(0.0, -1.0)
                };
                let n = (z_c / self.step).ceil().max(1.0) as usize;
                let step = z_c / n as f64;
                rk4_uniform(&mut leg, &|z| q(z) - lambda, 0.0, step, n, -1.0);
                leg
            }
        }
    }

    fn mismatch(&self, lambda: f64, x_c: f64, target: f64) -> (f64, usize) {
        let l = self.left(lambda, x_c);
        let r = self.right(lambda, x_c);
        (l.theta - r.theta - target, l.nodes + r.nodes)
    }

    /// Outer classical turning point of `lambda`, clamped into the interior,
    /// or the potential minimum when `lambda` lies below the whole potential.
    fn matching_point(&self, lambda: f64) -> f64 {
        let xr = self.problem.x_right;
        let lo = 2.0 * self.join;
        let hi = xr - if self.wall() { 2.0 * self.join } else { 0.0 };
        let hi = hi.min(xr * 0.999);
        let n = 4096;
        let dx = (hi - lo) / n as f64;
        let mut lowest = (f64::INFINITY, 0.5 * (lo + hi));
        for i in (0..=n).rev() {
            let x = lo + i as f64 * dx;
            let q = (self.problem.q)(x);
            if q < lambda {
                return x;
            }
            if q < lowest.0 {
                lowest = (q, x);
            }
        }
        lowest.1
    }
}

/// Eigenvalue `λ` of the `level_k`-th state (k ≥ 1) inside `bracket`.
///
/// Uses the grid's extent and a fixed RK4 step of `h/4`. Fails with a
/// bracket error unless exactly the target level crosses inside the bracket.
pub fn shooting_eigenvalue(
    sector: &SectorSpec,
    grid: &RadialGrid,
    level_k: u32,
    bracket: (f64, f64),
) -> Result<ShootingResult> {
    if level_k == 0 {
        return Err(Error::Config("radial level index starts at 1".into()));
    }
    let (lo, hi) = bracket;
    if lo >= hi || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Bracket(format!("invalid bracket ({lo}, {hi})")));
    }
    let q = |x: f64| sector.q_unchecked(x);
    let right = if sector.spec().kappa() > 0.0 {
        RightEnd::Wall {
            m: sector.m_f64(),
            coulomb: 2.0,
        }
    } else {
        RightEnd::Decay
    };
    let problem = ShootingProblem {
        q: &q,
        m: sector.m_f64(),
        coulomb: -2.0,
        right,
        x_right: grid.x_max(),
        grid_spacing: grid.spacing(),
    };
    solve(&problem, level_k, (lo, hi))
}

pub(crate) fn solve(
    problem: &ShootingProblem<'_>,
    level_k: u32,
    bracket: (f64, f64),
) -> Result<ShootingResult> {
    let (mut lo, mut hi) = bracket;
    let setup = Setup::new(problem);
    let x_c = setup.matching_point(0.5 * (lo + hi));
    let target = f64::from(level_k - 1) * PI;

    let (mut f_lo, _) = setup.mismatch(lo, x_c, target);
    let (mut f_hi, _) = setup.mismatch(hi, x_c, target);
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::Bracket(format!(
            "level {level_k} is not isolated in ({lo}, {hi}): phase mismatch {:.3}π at the lower end, {:.3}π at the upper end",
            f_lo / PI,
            f_hi / PI
        )));
    }
    if !(f_lo > -PI && f_hi < PI) {
        return Err(Error::Bracket(format!(
            "bracket ({lo}, {hi}) contains more than one level"
        )));
    }

    // Illinois regula falsi on a monotone function.
    let mut side = 0i8;
    for _ in 0..200 {
        if hi - lo <= 1e-14 * lo.abs().max(hi.abs()).max(1.0) {
            break;
        }
        let mut x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let (fx, _) = setup.mismatch(x, x_c, target);
        if fx == 0.0 {
            lo = x;
            hi = x;
            break;
        }
        if fx < 0.0 {
            lo = x;
            f_lo = fx;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            f_hi = fx;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        }
    }
    let lambda = 0.5 * (lo + hi);
    let (residual, nodes) = setup.mismatch(lambda, x_c, target);
    if !residual.is_finite() {
        return Err(Error::Numeric(format!(
            "shooting integration overflowed at lambda = {lambda}"
        )));
    }
    if nodes != level_k as usize - 1 {
        return Err(Error::Bracket(format!(
            "converged solution has {nodes} nodes, expected {}",
            level_k - 1
        )));
    }
    Ok(ShootingResult {
        lambda,
        nodes,
        matching_point: x_c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ProblemSpec;

    fn hydrogen(l: u32) -> SectorSpec {
        SectorSpec::new(ProblemSpec::new(3, 0.0, 0).unwrap(), l)
    }

    #[test]
    fn hydrogen_ground_state() {
        let grid = RadialGrid::new(20000, 400.0).unwrap();
        let r = shooting_eigenvalue(&hydrogen(0), &grid, 1, (-1.5, -0.5)).unwrap();
        assert!((r.lambda + 1.0).abs() < 1e-8, "{}", r.lambda);
        assert_eq!(r.nodes, 0);
    }

    #[test]
    fn hydrogen_p_wave() {
        let grid = RadialGrid::new(20000, 400.0).unwrap();
        let r = shooting_eigenvalue(&hydrogen(1), &grid, 1, (-0.3, -0.2)).unwrap();
        assert!((r.lambda + 0.25).abs() < 1e-8, "{}", r.lambda);
    }

    #[test]
    fn hydrogen_excited_levels() {
        let grid = RadialGrid::new(20000, 400.0).unwrap();
        let r = shooting_eigenvalue(&hydrogen(0), &grid, 3, (-0.15, -0.08)).unwrap();
        assert!((r.lambda + 1.0 / 9.0).abs() < 1e-8, "{}", r.lambda);
        assert_eq!(r.nodes, 2);
    }

    #[test]
    fn particle_in_a_box() {
        let q = |_x: f64| 0.0;
        let problem = ShootingProblem {
            q: &q,
            m: 0.0,
            coulomb: 0.0,
            right: RightEnd::Wall {
                m: 0.0,
                coulomb: 0.0,
            },
            x_right: PI,
            grid_spacing: PI / 4001.0,
        };
        let r = solve(&problem, 2, (3.0, 5.0)).unwrap();
        assert!((r.lambda - 4.0).abs() < 1e-8, "{}", r.lambda);
        assert_eq!(r.nodes, 1);
        let r = solve(&problem, 1, (0.5, 2.0)).unwrap();
        assert!((r.lambda - 1.0).abs() < 1e-8, "{}", r.lambda);
    }

    #[test]
    fn rejects_bad_brackets() {
        let grid = RadialGrid::new(2000, 100.0).unwrap();
        // contains no level
        let e = shooting_eigenvalue(&hydrogen(0), &grid, 1, (-0.9, -0.8)).unwrap_err();
        assert_eq!(e.code(), "E-BRACKET");
        // contains the second level, not the first
        assert!(shooting_eigenvalue(&hydrogen(0), &grid, 1, (-0.3, -0.2)).is_err());
        assert!(shooting_eigenvalue(&hydrogen(0), &grid, 1, (-0.2, -0.3)).is_err());
        assert!(shooting_eigenvalue(&hydrogen(0), &grid, 0, (-1.5, -0.5)).is_err());
    }
}
