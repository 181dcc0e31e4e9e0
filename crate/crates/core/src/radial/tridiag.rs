//! Three-point discretization and a Sturm-sequence eigensolver.

use crate::error::{Error, Result};

use super::{RadialGrid, SectorSpec};

/// Symmetric tridiagonal matrix together with the grid it was built on.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
    pub grid: RadialGrid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub value: f64,
    /// Normalized so that `Σ yⱼ² h = 1`, first significant entry positive.
    pub vector: Vec<f64>,
}

impl TridiagonalOperator {
    /// Builds an operator from explicit bands; `off_diagonal` has one entry fewer.
    pub fn from_bands(
        diagonal: Vec<f64>,
        off_diagonal: Vec<f64>,
        grid: RadialGrid,
    ) -> Result<Self> {
        if diagonal.len() != grid.n_points() || off_diagonal.len() + 1 != diagonal.len() {
            return Err(Error::Config(format!(
                "band lengths {}/{} do not match a grid of {} points",
                diagonal.len(),
                off_diagonal.len(),
                grid.n_points()
            )));
        }
        Ok(TridiagonalOperator {
            diagonal,
            off_diagonal,
            grid,
        })
    }

    pub fn len(&self) -> usize {
        self.diagonal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonal.is_empty()
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 {
                self.off_diagonal[i - 1].abs()
            } else {
                0.0
            };
            let right = if i + 1 < n {
                self.off_diagonal[i].abs()
            } else {
                0.0
            };
            lo = lo.min(self.diagonal[i] - left - right);
            hi = hi.max(self.diagonal[i] + left + right);
        }
        (lo, hi)
    }

    fn norm_estimate(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }
}

/// Discretizes `−y″ + q y` with the standard three-point Laplacian and
/// Dirichlet conditions at `x = 0` and `x = grid.x_max()`.
pub fn discretize(sector: &SectorSpec, grid: &RadialGrid) -> Result<TridiagonalOperator> {
    if sector.spec().kappa() > 0.0 {
        let analytic = sector.x_max_analytic();
        if (grid.x_max() - analytic).abs() > 1e-12 * analytic {
            return Err(Error::Config(format!(
                "for kappa > 0 the grid must span (0, {analytic}), got x_max = {}",
                grid.x_max()
            )));
        }
    }
    let h = grid.spacing();
    let inv_h2 = 1.0 / (h * h);
    let diagonal = grid
        .nodes()
        .map(|x| sector.potential_q(x).map(|q| 2.0 * inv_h2 + q))
        .collect::<Result<Vec<_>>>()?;
    let off_diagonal = vec![-inv_h2; grid.n_points() - 1];
    Ok(TridiagonalOperator {
        diagonal,
        off_diagonal,
        grid: *grid,
    })
}

/// Number of eigenvalues strictly below `shift`.
///
/// Counts negative pivots of the LDLᵀ factorization of `T − shift·I`, carried
/// in ratio form so that no leading minor is ever formed explicitly.
pub fn sturm_count(diagonal: &[f64], off_diagonal: &[f64], shift: f64) -> usize {
    let max_b2 = off_diagonal.iter().fold(1.0f64, |m, b| m.max(b * b));
    let pivmin = f64::MIN_POSITIVE * max_b2;
    let mut count = 0;
    let mut d = 0.0;
    for (i, &a) in diagonal.iter().enumerate() {
        d = if i == 0 {
            a - shift
        } else {
            let b = off_diagonal[i - 1];
            a - shift - b * b / d
        };
        if d.abs() < pivmin {
            d = -pivmin;
        }
        if d <= 0.0 {
            count += 1;
        }
    }
    count
}

/// The `count` algebraically smallest eigenpairs.
///
/// Eigenvalues come from Sturm bisection refined to `1e-12·max(1, |λ|)`;
/// eigenvectors from inverse iteration with pivoted tridiagonal LU.
pub fn eigen_lowest(op: &TridiagonalOperator, count: usize) -> Result<Vec<Eigenpair>> {
    let values = lowest_eigenvalues(op, count)?;
    let norm = op.norm_estimate();
    let h = op.grid.spacing();
    let mut pairs: Vec<Eigenpair> = Vec::with_capacity(values.len());
    for &value in &values {
        let vector = inverse_iteration(op, value, norm, &pairs, h)?;
        pairs.push(Eigenpair { value, vector });
    }
    Ok(pairs)
}

/// The `count` smallest eigenvalues only.
pub fn lowest_eigenvalues(op: &TridiagonalOperator, count: usize) -> Result<Vec<f64>> {
    let n = op.len();
    if count == 0 || count > n {
        return Err(Error::Config(format!(
            "requested {count} eigenvalues from an operator of size {n}"
        )));
    }
    let (glo, ghi) = op.gershgorin();
    let pad = 1e-9 * glo.abs().max(ghi.abs()).max(1.0);
    let (glo, ghi) = (glo - pad, ghi + pad);
    let mut values = Vec::with_capacity(count);
    let mut floor = glo;
    for k in 0..count {
        let (mut lo, mut hi) = (floor, ghi);
        if sturm_count(&op.diagonal, &op.off_diagonal, lo) > k {
            return Err(Error::Numeric(format!(
                "Sturm count inconsistent at eigenvalue {k}: bracket lower end already exceeded"
            )));
        }
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            let tol = 1e-12 * mid.abs().max(1.0);
            if hi - lo <= tol || mid <= lo || mid >= hi {
                break;
            }
            if sturm_count(&op.diagonal, &op.off_diagonal, mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let value = 0.5 * (lo + hi);
        if !value.is_finite() {
            return Err(Error::Numeric(format!(
                "bisection for eigenvalue {k} diverged"
            )));
        }
        values.push(value);
        floor = lo;
    }
    Ok(values)
}

/// Pivoted LU of the tridiagonal `T − shift·I` (the LAPACK `gttrf` layout).
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(op: &TridiagonalOperator, shift: f64, tiny: f64) -> Self {
        let n = op.len();
        let mut d: Vec<f64> = op.diagonal.iter().map(|a| a - shift).collect();
        let mut dl = op.off_diagonal.clone();
        let mut du = op.off_diagonal.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i].abs() < tiny {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        if n > 0 && d[n - 1].abs() < tiny {
            d[n - 1] = tiny;
        }
        TridiagLu {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i] - self.dl[i] * b[i + 1];
                b[i] = b[i + 1];
                b[i + 1] = temp;
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

fn inverse_iteration(
    op: &TridiagonalOperator,
    value: f64,
    norm: f64,
    previous: &[Eigenpair],
    h: f64,
) -> Result<Vec<f64>> {
    let n = op.len();
    let eps = f64::EPSILON;
    // Perturb the shift slightly so that the factorization is not exactly singular.
    let shift = value + 4.0 * eps * norm.max(value.abs());
    let lu = TridiagLu::factor(op, shift, eps * norm);
    // Vectors whose eigenvalues are this close get re-orthogonalized against.
    let cluster = 1e-3 * norm;
    let neighbours: Vec<&Eigenpair> = previous
        .iter()
        .filter(|p| (p.value - value).abs() < cluster)
        .collect();

    // Deterministic, non-symmetric starting vector.
    let mut v: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.5 * ((i as f64 + 1.0) * 0.7548776662466927).fract())
        .collect();
    for _ in 0..5 {
        orthogonalize(&mut v, &neighbours, h);
        let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Numeric(format!(
                "inverse iteration for eigenvalue {value} collapsed"
            )));
        }
        v.iter_mut().for_each(|x| *x /= scale);
        lu.solve(&mut v);
    }
    orthogonalize(&mut v, &neighbours, h);
    let norm2: f64 = v.iter().map(|x| x * x).sum::<f64>() * h;
    if !(norm2 > 0.0 && norm2.is_finite()) {
        return Err(Error::Numeric(format!(
            "inverse iteration for eigenvalue {value} produced a degenerate vector"
        )));
    }
    let inv = 1.0 / norm2.sqrt();
    let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let sign = v
        .iter()
        .find(|x| x.abs() > 1e-3 * peak)
        .map_or(1.0, |x| x.signum());
    v.iter_mut().for_each(|x| *x *= inv * sign);
    Ok(v)
}

fn orthogonalize(v: &mut [f64], against: &[&Eigenpair], h: f64) {
    for p in against {
        let dot: f64 = v.iter().zip(&p.vector).map(|(a, b)| a * b).sum::<f64>() * h;
        v.iter_mut().zip(&p.vector).for_each(|(a, b)| *a -= dot * b);
    }
}

/// Sign changes of a sampled function, ignoring entries below `1e-10` of its peak.
pub fn sign_changes(y: &[f64]) -> usize {
    let peak = y.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let floor = 1e-10 * peak;
    let mut last = 0.0f64;
    let mut changes = 0;
    for &v in y {
        if v.abs() <= floor {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            changes += 1;
        }
        last = v;
    }
    changes
}
