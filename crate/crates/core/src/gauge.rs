//! Clifford generators and the monopole connection of the fundamental spinor
//! bundle, with numerical checks of its structural identities.
//!
//! Points are `x = (x₀, x₁, …, x_{D−1})`. The connection is
//! `A₀ = 0`, `A_b = −x_a γ_ab / (r(r + x₀))` with `γ_ab = (i/4)[γ_a, γ_b]`,
//! defined away from the negative 0-th axis. The covariant derivative is
//! `∇ = ∂ + iA`, so `[∇_α, ∇_β] = i F_αβ` with
//! `F_αβ = ∂_α A_β − ∂_β A_α + i[A_α, A_β]`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Hermitian generators `γ_a` (`a = 1 … ambient`) with `{γ_a, γ_b} = 2δ_ab`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSet {
    ambient: usize,
    size: usize,
    matrices: Vec<CMatrix>,
    /// `pairs[a][b] = γ_ab`, zero on the diagonal.
    pairs: Vec<Vec<CMatrix>>,
}

fn pauli(which: u8) -> CMatrix {
    let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    match which {
        b'x' => CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        b'y' => CMatrix::from_row_slice(2, 2, &[z, -I, I, z]),
        b'z' => CMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => CMatrix::identity(2, 2),
    }
}

fn kron_chain(factors: &[u8]) -> CMatrix {
    factors
        .iter()
        .fold(CMatrix::identity(1, 1), |acc, &f| acc.kronecker(&pauli(f)))
}

/// Jordan–Wigner generators on `⌊ambient/2⌋` qubits.
pub fn build_gammas(ambient: usize) -> Result<GammaSet> {
    if ambient < 2 {
        return Err(Error::Range {
            what: "ambient dimension",
            value: ambient as f64,
            lo: 2.0,
            hi: f64::INFINITY,
        });
    }
    let qubits = ambient / 2;
    let mut matrices = Vec::with_capacity(ambient);
    for j in 0..qubits {
        for p in *b"xy" {
            let mut f = vec![b'z'; j];
            f.push(p);
            f.resize(qubits, b'1');
            matrices.push(kron_chain(&f));
        }
    }
    if ambient % 2 == 1 {
        matrices.push(kron_chain(&vec![b'z'; qubits]));
    }
    let size = 1usize << qubits;
    let pairs = (0..ambient)
        .map(|a| {
            (0..ambient)
                .map(|b| {
                    let (ga, gb) = (&matrices[a], &matrices[b]);
                    (ga * gb - gb * ga) * (I * 0.25)
                })
                .collect()
        })
        .collect();
    Ok(GammaSet {
        ambient,
        size,
        matrices,
        pairs,
    })
}

impl GammaSet {
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Point dimension `D = ambient + 1`.
    pub fn dim(&self) -> usize {
        self.ambient + 1
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `γ_a` for `a = 1 … ambient`.
    pub fn gamma(&self, a: usize) -> &CMatrix {
        &self.matrices[a - 1]
    }

    /// `γ_ab` for `a, b = 1 … ambient`.
    pub fn pair(&self, a: usize, b: usize) -> &CMatrix {
        &self.pairs[a - 1][b - 1]
    }

    /// Largest entry of `{γ_a, γ_b} − 2δ_ab` over all pairs.
    pub fn anticommutation_residual(&self) -> f64 {
        let id = CMatrix::identity(self.size, self.size);
        let mut worst = 0.0f64;
        for (a, ga) in self.matrices.iter().enumerate() {
            for (b, gb) in self.matrices.iter().enumerate() {
                let mut m = ga * gb + gb * ga;
                if a == b {
                    m -= &id * Complex64::new(2.0, 0.0);
                }
                worst = worst.max(max_entry(&m));
            }
        }
        worst
    }

    /// Largest deviation from Hermiticity among `γ_a` and `γ_ab`, together
    /// with the largest `|tr γ_ab|`.
    pub fn hermiticity_residual(&self) -> (f64, f64) {
        let mut herm = 0.0f64;
        let mut trace = 0.0f64;
        for g in &self.matrices {
            herm = herm.max(max_entry(&(g - g.adjoint())));
        }
        for row in &self.pairs {
            for p in row {
                herm = herm.max(max_entry(&(p - p.adjoint())));
                trace = trace.max(p.trace().norm());
            }
        }
        (herm, trace)
    }
}

/// Largest entry modulus.
pub fn max_entry(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

fn check_point(gammas: &GammaSet, x: &[f64]) -> Result<f64> {
    if x.len() != gammas.dim() {
        return Err(Error::Config(format!(
            "point has {} coordinates, expected {}",
            x.len(),
            gammas.dim()
        )));
    }
    if let Some(&bad) = x.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            name: "coordinate",
            value: bad,
        });
    }
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r == 0.0 || r + x[0] <= 1e-9 * r {
        return Err(Error::CoordinateSingularity { point: x.to_vec() });
    }
    Ok(r)
}

/// The `D` matrices `A_α(x)`.
pub fn gauge_potential(gammas: &GammaSet, x: &[f64]) -> Result<Vec<CMatrix>> {
    let r = check_point(gammas, x)?;
    let n = gammas.size();
    let scale = -1.0 / (r * (r + x[0]));
    let mut out = vec![CMatrix::zeros(n, n)];
    for b in 1..=gammas.ambient() {
        let mut acc = CMatrix::zeros(n, n);
        for (a, &xa) in x.iter().enumerate().skip(1) {
            if a != b && xa != 0.0 {
                acc += gammas.pair(a, b) * Complex64::new(xa, 0.0);
            }
        }
        out.push(acc * Complex64::new(scale, 0.0));
    }
    Ok(out)
}

/// `F_αβ` by central differences of an arbitrary connection.
pub fn curvature_of<P>(potential: P, x: &[f64], step: f64) -> Result<Vec<Vec<CMatrix>>>
where
    P: Fn(&[f64]) -> Result<Vec<CMatrix>>,
{
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Range {
            what: "step",
            value: step,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let d = x.len();
    let center = potential(x)?;
    // derivative[α][β] = ∂_α A_β
    let mut derivative = Vec::with_capacity(d);
    for alpha in 0..d {
        let mut plus = x.to_vec();
        let mut minus = x.to_vec();
        plus[alpha] += step;
        minus[alpha] -= step;
        let (ap, am) = match (potential(&plus), potential(&minus)) {
            (Ok(ap), Ok(am)) => (ap, am),
            _ => {
                return Err(Error::Range {
                    what: "step",
                    value: step,
                    lo: 0.0,
                    hi: 0.0,
                })
            }
        };
        let inv = Complex64::new(0.5 / step, 0.0);
        derivative.push(
            ap.iter()
                .zip(&am)
                .map(|(p, m)| (p - m) * inv)
                .collect::<Vec<_>>(),
        );
    }
    let n = center[0].nrows();
    let mut f = vec![vec![CMatrix::zeros(n, n); d]; d];
    for alpha in 0..d {
        for beta in alpha + 1..d {
            let (aa, ab) = (&center[alpha], &center[beta]);
            let value =
                &derivative[alpha][beta] - &derivative[beta][alpha] + (aa * ab - ab * aa) * I;
            f[beta][alpha] = -&value;
            f[alpha][beta] = value;
        }
    }
    Ok(f)
}

/// `F_αβ(x)` of the monopole connection.
///
/// The step must stay below half the distance to the excluded set.
pub fn curvature_numeric(gammas: &GammaSet, x: &[f64], step: f64) -> Result<Vec<Vec<CMatrix>>> {
    let r = check_point(gammas, x)?;
    let transverse = x[1..].iter().map(|v| v * v).sum::<f64>().sqrt();
    let distance = if x[0] >= 0.0 { r } else { transverse };
    if step > 0.5 * distance {
        return Err(Error::Range {
            what: "step",
            value: step,
            lo: 0.0,
            hi: 0.5 * distance,
        });
    }
    curvature_of(|p| gauge_potential(gammas, p), x, step)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `exp(iθ γ_12)`, a constant spinor rotation in the (1,2)-plane.
pub fn spinor_rotation(gammas: &GammaSet, theta: f64) -> CMatrix {
    // (γ_12)² = 1/4
    let id = CMatrix::identity(gammas.size(), gammas.size());
    id * Complex64::new((0.5 * theta).cos(), 0.0)
        + gammas.pair(1, 2) * (I * (2.0 * (0.5 * theta).sin()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaugeCheck {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    /// Acceptance interval used instead of `bound` when present.
    pub window: Option<(f64, f64)>,
}

impl GaugeCheck {
    fn below(name: impl Into<String>, value: f64, bound: f64) -> Self {
        GaugeCheck {
            name: name.into(),
            value,
            bound,
            window: None,
        }
    }

    pub fn passed(&self) -> bool {
        match self.window {
            Some((lo, hi)) => self.value >= lo && self.value <= hi,
            None => self.value <= self.bound,
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r > 0.1 && r + x[0] > 0.05 * r {
            return x;
        }
    }
}

fn max_in(mats: &[Vec<CMatrix>]) -> f64 {
    mats.iter().flatten().map(max_entry).fold(0.0, f64::max)
}

fn difference(a: &[Vec<CMatrix>], b: &[Vec<CMatrix>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(p, q)| max_entry(&(p - q)))
        .fold(0.0, f64::max)
}

/// Measured order of the central-difference curvature from steps `h, h/2, h/4`.
pub fn curvature_order(gammas: &GammaSet, x: &[f64], h: f64) -> Result<f64> {
    let f1 = curvature_numeric(gammas, x, h)?;
    let f2 = curvature_numeric(gammas, x, h / 2.0)?;
    let f4 = curvature_numeric(gammas, x, h / 4.0)?;
    Ok((difference(&f1, &f2) / difference(&f2, &f4)).log2())
}

/// Full identity suite: generators for ambient dimension `2 … max_dim`, the
/// connection for `D = 3 … max_dim` with `points` random points per D.
pub fn gauge_check(max_dim: usize, points: usize) -> Result<Vec<GaugeCheck>> {
    let mut checks = Vec::new();
    let mut anti = 0.0f64;
    let mut herm = 0.0f64;
    let mut trace = 0.0f64;
    for ambient in 2..=max_dim.max(2) {
        let g = build_gammas(ambient)?;
        anti = anti.max(g.anticommutation_residual());
        let (h, t) = g.hermiticity_residual();
        herm = herm.max(h);
        trace = trace.max(t);
    }
    checks.push(GaugeCheck::below("anticommutator", anti, 1e-13));
    checks.push(GaugeCheck::below("gamma hermiticity", herm, 1e-13));
    checks.push(GaugeCheck::below("pair trace", trace, 1e-13));

    let mut rng = ChaCha8Rng::seed_from_u64(0x6b65706c6572);
    let mut transverse = 0.0f64;
    let mut potential_herm = 0.0f64;
    let mut antisym = 0.0f64;
    let mut order_lo = f64::INFINITY;
    let mut order_hi = f64::NEG_INFINITY;
    for dim in 3..=max_dim.max(3) {
        let g = build_gammas(dim - 1)?;
        for _ in 0..points {
            let x = random_point(&mut rng, dim);
            let a = gauge_potential(&g, &x)?;
            let norm = a
                .iter()
                .map(max_entry)
                .fold(0.0, f64::max)
                .max(f64::MIN_POSITIVE);
            let n = g.size();
            let sum = a
                .iter()
                .zip(&x)
                .fold(CMatrix::zeros(n, n), |acc, (m, &xa)| {
                    acc + m * Complex64::new(xa, 0.0)
                });
            transverse = transverse.max(max_entry(&sum) / norm);
            for m in &a {
                potential_herm = potential_herm.max(max_entry(&(m - m.adjoint())));
            }
        }
        let x = random_point(&mut rng, dim);
        let f = curvature_numeric(&g, &x, 1e-3)?;
        for (i, row) in f.iter().enumerate() {
            for (j, fij) in row.iter().enumerate() {
                antisym = antisym.max(max_entry(&(fij + &f[j][i])));
            }
        }
        let order = curvature_order(&g, &x, 0.02)?;
        order_lo = order_lo.min(order);
        order_hi = order_hi.max(order);
    }
    checks.push(GaugeCheck::below("transversality", transverse, 1e-12));
    checks.push(GaugeCheck::below(
        "potential hermiticity",
        potential_herm,
        1e-13,
    ));
    checks.push(GaugeCheck::below("curvature antisymmetry", antisym, 0.0));
    for (name, value) in [
        ("curvature order (min)", order_lo),
        ("curvature order (max)", order_hi),
    ] {
        checks.push(GaugeCheck {
            name: name.into(),
            value,
            bound: 2.0,
            window: Some((1.8, 2.2)),
        });
    }

    let (field, expected) = monopole_field(1.0)?;
    checks.push(GaugeCheck::below(
        "monopole field strength",
        (field - expected).abs(),
        1e-6,
    ));
    checks.push(GaugeCheck::below(
        "gauge covariance",
        covariance_residual(0.7)?,
        1e-10,
    ));
    Ok(checks)
}

/// Largest eigenvalue of `F₀₂` at `x = (0, r, 0)` for `D = 3`, next to `1/(2r²)`.
pub fn monopole_field(r: f64) -> Result<(f64, f64)> {
    let g = build_gammas(2)?;
    let f = curvature_numeric(&g, &[0.0, r, 0.0], 1e-5 * r)?;
    let eig = hermitian_eigenvalues(&f[0][2]);
    Ok((eig[eig.len() - 1], 0.5 / (r * r)))
}

/// Curvature of `U A U†` against `U F U†` at a fixed `D = 4` point.
pub fn covariance_residual(theta: f64) -> Result<f64> {
    let g = build_gammas(3)?;
    let u = spinor_rotation(&g, theta);
    let ud = u.adjoint();
    let x = [0.3, -0.8, 0.5, 1.1];
    let step = 1e-3;
    let f = curvature_numeric(&g, &x, step)?;
    let rotated = curvature_of(
        |p| {
            Ok(gauge_potential(&g, p)?
                .iter()
                .map(|m| &u * m * &ud)
                .collect())
        },
        &x,
        step,
    )?;
    let conjugated: Vec<Vec<CMatrix>> = f
        .iter()
        .map(|row| row.iter().map(|m| &u * m * &ud).collect())
        .collect();
    Ok(difference(&rotated, &conjugated) / max_in(&f).max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_dimensional_generators() {
        let g = build_gammas(2).unwrap();
        assert_eq!(g.size(), 2);
        assert_eq!(hermitian_eigenvalues(g.pair(1, 2)), vec![-0.5, 0.5]);
        assert_eq!(g.anticommutation_residual(), 0.0);
    }

    #[test]
    fn quaternionic_relations() {
        let g = build_gammas(3).unwrap();
        assert_eq!(g.size(), 2);
        for a in 1..=3 {
            for b in 1..=3 {
                let t = (g.gamma(a) * g.gamma(b)).trace();
                let expect = if a == b { 2.0 } else { 0.0 };
                assert!((t - Complex64::new(expect, 0.0)).norm() < 1e-15);
            }
        }
        // γ₁γ₂ = iγ₃ up to orientation
        let prod = g.gamma(1) * g.gamma(2);
        assert!(max_entry(&(prod - g.gamma(3) * I)) < 1e-15);
    }

    #[test]
    fn sizes_and_residuals() {
        for ambient in 2..=8 {
            let g = build_gammas(ambient).unwrap();
            assert_eq!(g.size(), 1 << (ambient / 2));
            assert!(g.anticommutation_residual() <= 1e-13);
            let (h, t) = g.hermiticity_residual();
            assert!(h <= 1e-13 && t <= 1e-13);
        }
        assert!(build_gammas(1).is_err());
    }

    #[test]
    fn potential_examples() {
        let g = build_gammas(2).unwrap();
        let a = gauge_potential(&g, &[1.0, 0.0, 0.0]).unwrap();
        assert!(a.iter().all(|m| max_entry(m) == 0.0));
        let a = gauge_potential(&g, &[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(max_entry(&a[0]), 0.0);
        assert_eq!(max_entry(&a[1]), 0.0);
        assert!(max_entry(&(&a[2] + g.pair(1, 2))) < 1e-15);
        assert_eq!(hermitian_eigenvalues(&a[2]), vec![-0.5, 0.5]);
    }

    #[test]
    fn excluded_axis() {
        let g = build_gammas(2).unwrap();
        for x in [[-1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [-2.0, 1e-12, 0.0]] {
            assert!(matches!(
                gauge_potential(&g, &x),
                Err(Error::CoordinateSingularity { .. })
            ));
        }
        assert!(gauge_potential(&g, &[1.0, 0.0]).is_err());
        assert!(curvature_numeric(&g, &[-1.0, 1e-3, 0.0], 1e-2).is_err());
        assert!(curvature_numeric(&g, &[1.0, 0.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn monopole_strength() {
        for r in [0.5, 1.0, 3.0] {
            let (field, expected) = monopole_field(r).unwrap();
            assert!((field - expected).abs() < 1e-6 * expected.max(1.0), "r={r}");
        }
    }

    #[test]
    fn second_order_curvature() {
        let g = build_gammas(4).unwrap();
        let order = curvature_order(&g, &[0.4, 0.2, -0.7, 0.9, 0.1], 0.02).unwrap();
        assert!((1.8..=2.2).contains(&order), "{order}");
    }

    #[test]
    fn covariance() {
        assert!(covariance_residual(0.7).unwrap() < 1e-10);
        let g = build_gammas(3).unwrap();
        let u = spinor_rotation(&g, 1.3);
        let id = CMatrix::identity(2, 2);
        assert!(max_entry(&(&u * u.adjoint() - id)) < 1e-15);
    }

    #[test]
    fn suite_passes() {
        let checks = gauge_check(6, 50).unwrap();
        for c in &checks {
            assert!(c.passed(), "{c:?}");
        }
    }
}
