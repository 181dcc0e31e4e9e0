use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::format;

use super::{r_of_x, RadialGrid, SectorSpec};

pub const WAVEFUNCTION_CSV_HEADER: &str = "x,r,y,R";

/// A radial function sampled on the interior nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunction {
    pub x: Vec<f64>,
    pub r: Vec<f64>,
    pub y: Vec<f64>,
    pub values: Vec<f64>,
    /// `1 + κ̄r²` at each node, evaluated without cancellation.
    conformal: Vec<f64>,
    dim: u32,
    x_end: f64,
}

impl RadialFunction {
    /// Linear interpolation of `R` at radius `r`.
    pub fn eval(&self, r: f64) -> Option<f64> {
        let i = self.r.partition_point(|&ri| ri < r);
        if i == 0 || i >= self.r.len() {
            return None;
        }
        let (r0, r1) = (self.r[i - 1], self.r[i]);
        let t = (r - r0) / (r1 - r0);
        Some(self.values[i - 1] * (1.0 - t) + self.values[i] * t)
    }

    /// Density of the radial measure with respect to `dx`.
    fn weight(&self, i: usize) -> f64 {
        (self.r[i] / self.conformal[i]).powi(self.dim as i32 - 1)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(WAVEFUNCTION_CSV_HEADER);
        out.push('\n');
        for i in 0..self.x.len() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                format::sig(self.x[i], 12),
                format::sig(self.r[i], 12),
                format::sig(self.y[i], 12),
                format::sig(self.values[i], 12)
            );
        }
        out
    }
}

/// Trapezoidal `∫ f dx` over the nodes plus the endpoints, where the
/// integrand vanishes (Dirichlet in y).
fn trapezoid(x: &[f64], f: &[f64], x_end: f64) -> f64 {
    let mut sum = 0.0;
    let mut prev_x = 0.0;
    let mut prev_f = 0.0;
    for (&xi, &fi) in x.iter().zip(f) {
        sum += 0.5 * (xi - prev_x) * (prev_f + fi);
        prev_x = xi;
        prev_f = fi;
    }
    sum + 0.5 * (x_end - prev_x) * prev_f
}

fn conformal_factor(kappa_bar: f64, x: f64) -> f64 {
    if kappa_bar > 0.0 {
        let c = (kappa_bar.sqrt() * x).cos();
        1.0 / (c * c)
    } else if kappa_bar < 0.0 {
        let c = ((-kappa_bar).sqrt() * x).cosh();
        1.0 / (c * c)
    } else {
        1.0
    }
}

/// Reconstructs `R(r) = ((1+κ̄r²)/r)^{(D−1)/2} y(x)` and normalizes it so
/// that `∫ R² dμ = 1` with `dμ = (r/(1+κ̄r²))^D dr/r = (r/(1+κ̄r²))^{D−1} dx`.
pub fn to_radial_r(sector: &SectorSpec, y: &[f64], grid: &RadialGrid) -> Result<RadialFunction> {
    if y.len() != grid.n_points() {
        return Err(Error::Config(format!(
            "vector of length {} does not match a grid of {} points",
            y.len(),
            grid.n_points()
        )));
    }
    let spec = sector.spec();
    let kb = spec.kappa_bar();
    let exponent = (f64::from(spec.dim()) - 1.0) / 2.0;
    let x: Vec<f64> = grid.nodes().collect();
    let r = x
        .iter()
        .map(|&xi| r_of_x(spec, xi))
        .collect::<Result<Vec<_>>>()?;
    let conformal: Vec<f64> = x.iter().map(|&xi| conformal_factor(kb, xi)).collect();
    let raw: Vec<f64> = r
        .iter()
        .zip(&conformal)
        .zip(y)
        .map(|((&ri, &pi), &yi)| (pi / ri).powf(exponent) * yi)
        .collect();
    let mut f = RadialFunction {
        x,
        r,
        y: y.to_vec(),
        values: raw,
        conformal,
        dim: spec.dim(),
        x_end: grid.x_max(),
    };
    let norm = overlap(&f, &f);
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::Numeric("radial function has zero norm".into()));
    }
    let scale = 1.0 / norm.sqrt();
    f.values.iter_mut().for_each(|v| *v *= scale);
    f.y.iter_mut().for_each(|v| *v *= scale);
    Ok(f)
}

/// `∫ R_a R_b dμ` by the trapezoidal rule in x.
pub fn overlap(a: &RadialFunction, b: &RadialFunction) -> f64 {
    let integrand: Vec<f64> = (0..a.x.len())
        .map(|i| a.values[i] * b.values[i] * a.weight(i))
        .collect();
    trapezoid(&a.x, &integrand, a.x_end)
}

/// Largest `|∫ Rᵢ Rⱼ dμ|` over distinct pairs; `0` for fewer than two states.
pub fn orthonormality_check(_sector: &SectorSpec, states: &[RadialFunction]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..states.len() {
        for j in i + 1..states.len() {
            worst = worst.max(overlap(&states[i], &states[j]).abs());
        }
    }
    worst
}
