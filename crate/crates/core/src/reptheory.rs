//! Exact representation theory of so(2n+1) and so(2n).
//!
//! Weights live in the orthonormal basis `⟨eᵢ, eⱼ⟩ = δᵢⱼ`, the normalization
//! in which the so(3) weight `(l)` has Casimir `l(l+1)`. Entries are integers
//! or half-integers, stored doubled so everything below is integer arithmetic.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::ProblemSpec;
use crate::Rational;

/// Cartan type of an orthogonal Lie algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Series {
    /// so(2n+1)
    B,
    /// so(2n)
    D,
}

impl Series {
    /// The series and rank of so(`n`).
    pub fn for_so(n: u32) -> (Series, usize) {
        if n % 2 == 1 {
            (Series::B, (n / 2) as usize)
        } else {
            (Series::D, (n / 2) as usize)
        }
    }
}

/// A dominant highest weight of so(2n+1) or so(2n).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HighestWeight {
    series: Series,
    twice: Vec<i64>,
}

impl HighestWeight {
    /// Builds a weight from doubled entries (`2wᵢ`), checking parity and dominance.
    pub fn from_twice(series: Series, twice: Vec<i64>) -> Result<Self> {
        if twice.is_empty() {
            return Err(Error::InvalidWeight("rank must be at least 1".into()));
        }
        let parity = twice[0].rem_euclid(2);
        if twice.iter().any(|t| t.rem_euclid(2) != parity) {
            return Err(Error::InvalidWeight(format!(
                "entries {} mix integers and half-integers",
                fmt_twice(&twice)
            )));
        }
        let n = twice.len();
        let descending = twice
            .windows(2)
            .take(n.saturating_sub(2))
            .all(|w| w[0] >= w[1]);
        let dominant = match series {
            Series::B => twice.windows(2).all(|w| w[0] >= w[1]) && twice[n - 1] >= 0,
            // so(2) is abelian: every weight is dominant.
            Series::D if n == 1 => true,
            Series::D => descending && twice[n - 2] >= twice[n - 1].abs(),
        };
        if !dominant {
            return Err(Error::InvalidWeight(format!(
                "{} is not dominant for series {:?}",
                fmt_twice(&twice),
                series
            )));
        }
        Ok(HighestWeight { series, twice })
    }

    pub fn new(series: Series, entries: &[Rational]) -> Result<Self> {
        let twice = entries
            .iter()
            .map(|e| {
                let t = *e * 2;
                if t.is_integer() {
                    Ok(t.to_integer())
                } else {
                    Err(Error::InvalidWeight(format!(
                        "entry {} is not an integer or half-integer",
                        crate::format::rational(*e)
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_twice(series, twice)
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.twice.len()
    }

    pub fn entries(&self) -> Vec<Rational> {
        self.twice.iter().map(|&t| Rational::new(t, 2)).collect()
    }

    pub fn twice_entries(&self) -> &[i64] {
        &self.twice
    }

    /// The Lie algebra dimension `n` of so(n) this weight belongs to.
    pub fn algebra_dim(&self) -> u32 {
        let r = self.rank() as u32;
        match self.series {
            Series::B => 2 * r + 1,
            Series::D => 2 * r,
        }
    }
}

impl fmt::Display for HighestWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "so({}){}", self.algebra_dim(), fmt_twice(&self.twice))
    }
}

fn fmt_twice(twice: &[i64]) -> String {
    let parts: Vec<String> = twice
        .iter()
        .map(|&t| crate::format::rational(Rational::new(t, 2)))
        .collect();
    format!("({})", parts.join(", "))
}

/// Doubled Weyl vector ρ.
fn twice_rho(series: Series, rank: usize) -> Vec<i64> {
    let n = rank as i64;
    (1..=n)
        .map(|i| match series {
            Series::B => 2 * n - 2 * i + 1,
            Series::D => 2 * (n - i),
        })
        .collect()
}

/// Positive roots as coefficient pairs: `(i, j, sign)` for `eᵢ ± eⱼ`, or
/// `(i, i, 0)` for the short root `eᵢ`.
fn positive_roots(series: Series, rank: usize) -> Vec<(usize, usize, i64)> {
    let mut roots = Vec::new();
    for i in 0..rank {
        for j in i + 1..rank {
            roots.push((i, j, -1));
            roots.push((i, j, 1));
        }
        if series == Series::B {
            roots.push((i, i, 0));
        }
    }
    roots
}

fn pair(v: &[i64], (i, j, sign): (usize, usize, i64)) -> i64 {
    if sign == 0 {
        v[i]
    } else {
        v[i] + sign * v[j]
    }
}

/// Weyl dimension `∏_{α>0} ⟨w+ρ, α⟩ / ⟨ρ, α⟩`.
pub fn weyl_dimension(w: &HighestWeight) -> Result<BigUint> {
    let rho = twice_rho(w.series, w.rank());
    let shifted: Vec<i64> = w.twice.iter().zip(&rho).map(|(a, b)| a + b).collect();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for root in positive_roots(w.series, w.rank()) {
        num *= BigInt::from(pair(&shifted, root));
        den *= BigInt::from(pair(&rho, root));
    }
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() || !q.is_positive() {
        return Err(Error::InvalidWeight(format!(
            "Weyl product for {w} is {num}/{den}, not a positive integer"
        )));
    }
    Ok(q.to_biguint().expect("positive"))
}

/// Quadratic Casimir `⟨w, w + 2ρ⟩`.
pub fn casimir(w: &HighestWeight) -> Rational {
    let rho = twice_rho(w.series, w.rank());
    // (2w)(2w + 4ρ)/4
    let sum: i64 = w.twice.iter().zip(&rho).map(|(t, r)| t * (t + 2 * r)).sum();
    Rational::new(sum, 4)
}

/// Highest weights of the Spin(D) irreducibles in the angular sector `l`.
///
/// Odd D gives a single weight `(l+|μ|, |μ|, …, |μ|)`. Even D gives the two
/// chiral weights `(l+μ, μ, …, ±μ)`, which coincide when μ = 0.
pub fn sector_weights(spec: &ProblemSpec, l: u32) -> Vec<HighestWeight> {
    let (series, rank) = Series::for_so(spec.dim());
    let abs2 = spec.twice_mu().abs();
    let mut twice = vec![abs2; rank];
    twice[0] += 2 * i64::from(l);
    let plus = HighestWeight::from_twice(series, twice.clone()).expect("sector weight is dominant");
    if series == Series::D && abs2 != 0 {
        twice[rank - 1] = -twice[rank - 1];
        let minus = HighestWeight::from_twice(series, twice).expect("sector weight is dominant");
        vec![plus, minus]
    } else {
        vec![plus]
    }
}

/// Number of independent angular states in sector `l`.
pub fn degeneracy(spec: &ProblemSpec, l: u32) -> BigUint {
    sector_weights(spec, l)
        .iter()
        .map(|w| weyl_dimension(w).expect("sector weight is dominant"))
        .sum()
}

/// Spin(D+1) highest weight `(I+|μ|, |μ|, …, |μ|, μ)` of the level `I`.
pub fn total_weight(spec: &ProblemSpec, principal: u32) -> HighestWeight {
    let (series, rank) = Series::for_so(spec.dim() + 1);
    let abs2 = spec.twice_mu().abs();
    let mut twice = vec![abs2; rank];
    twice[rank - 1] = spec.twice_mu();
    twice[0] += 2 * i64::from(principal);
    HighestWeight::from_twice(series, twice).expect("total weight is dominant")
}

/// Both sides of the branching dimension identity for one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchingReport {
    pub principal: u32,
    pub total_dimension: BigUint,
    pub sector_sum: BigUint,
}

impl BranchingReport {
    pub fn holds(&self) -> bool {
        self.total_dimension == self.sector_sum
    }
}

/// Compares `dim Spin(D+1)(total_weight)` with `Σ_{l ≤ I} degeneracy(l)`.
pub fn branching_check(spec: &ProblemSpec, principal: u32) -> BranchingReport {
    let total_dimension =
        weyl_dimension(&total_weight(spec, principal)).expect("total weight is dominant");
    let sector_sum = (0..=principal).map(|l| degeneracy(spec, l)).sum();
    BranchingReport {
        principal,
        total_dimension,
        sector_sum,
    }
}

/// Casimir of so(D−1) on the `2|μ|`-th Young power of the fundamental spinor.
pub fn cbar2(spec: &ProblemSpec) -> Rational {
    if spec.twice_mu() == 0 {
        return Rational::zero();
    }
    let (series, rank) = Series::for_so(spec.dim() - 1);
    let w = HighestWeight::from_twice(series, vec![spec.twice_mu().abs(); rank])
        .expect("Young power weight is dominant");
    casimir(&w)
}

/// `m = l + |μ| + (D−3)/2`.
pub fn sector_m(spec: &ProblemSpec, l: u32) -> Rational {
    Rational::from_integer(i64::from(l))
        + spec.abs_mu()
        + Rational::new(i64::from(spec.dim()) - 3, 2)
}

/// `m(m+1) − (D−1)(D−3)/4`, the constant multiplying the centrifugal term.
pub fn c_closed_form(spec: &ProblemSpec, l: u32) -> Rational {
    let m = sector_m(spec, l);
    let d = i64::from(spec.dim());
    m * (m + 1) - Rational::new((d - 1) * (d - 3), 4)
}

/// Per-weight left-hand sides and the closed-form right-hand side of the
/// angular constant identity.
#[derive(Debug, Clone, PartialEq)]
pub struct CIdentityReport {
    pub l: u32,
    pub lhs: Vec<Rational>,
    pub rhs: Rational,
}

impl CIdentityReport {
    pub fn holds(&self) -> bool {
        self.lhs.iter().all(|v| *v == self.rhs)
    }
}

/// Checks `casimir(w) − c̄₂ + δ_μ = m(m+1) − (D−1)(D−3)/4` for every sector weight.
pub fn c_identity_check(spec: &ProblemSpec, l: u32) -> CIdentityReport {
    let shift = spec.delta_mu() - cbar2(spec);
    let lhs = sector_weights(spec, l)
        .iter()
        .map(|w| casimir(w) + shift)
        .collect();
    CIdentityReport {
        l,
        lhs,
        rhs: c_closed_form(spec, l),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn spec(dim: u32, twice_mu: i64) -> ProblemSpec {
        ProblemSpec::new(dim, 0.0, twice_mu).unwrap()
    }

    /// Brute force su(2) x su(2) dimension for so(4): (a-b+1)(a+b+1).
    fn so4_dim(a: Rational, b: Rational) -> Rational {
        (a - b + 1) * (a + b + 1)
    }

    #[test]
    fn weyl_examples() {
        let w = HighestWeight::new(Series::B, &[r(1, 1), r(0, 1)]).unwrap();
        assert_eq!(weyl_dimension(&w).unwrap(), BigUint::from(5u32));
        let w = HighestWeight::new(Series::D, &[r(1, 2), r(1, 2)]).unwrap();
        assert_eq!(weyl_dimension(&w).unwrap(), BigUint::from(2u32));
        assert_eq!(so4_dim(r(1, 2), r(1, 2)), r(2, 1));
        let w = HighestWeight::new(Series::B, &[r(3, 2)]).unwrap();
        assert_eq!(weyl_dimension(&w).unwrap(), BigUint::from(4u32));
    }

    #[test]
    fn weyl_known_representations() {
        // adjoint of so(n) has dimension n(n-1)/2; spinors 2^rank (times 1 or 2)
        for n in 3..12u32 {
            let (series, rank) = Series::for_so(n);
            let mut adj = vec![0i64; rank];
            adj[0] = 2;
            if rank > 1 {
                adj[1] = 2;
            }
            if n == 4 {
                // so(4) adjoint is reducible; skip
                continue;
            }
            let w = HighestWeight::from_twice(series, adj).unwrap();
            let expect = if n == 3 { 3 } else { n * (n - 1) / 2 };
            assert_eq!(
                weyl_dimension(&w).unwrap(),
                BigUint::from(expect),
                "so({n}) adjoint"
            );
            assert_eq!(casimir(&w), Rational::from_integer(2 * (i64::from(n) - 2)));

            let spinor = HighestWeight::from_twice(series, vec![1; rank]).unwrap();
            let expect = 1u64 << (rank - usize::from(series == Series::D && rank > 0));
            assert_eq!(
                weyl_dimension(&spinor).unwrap(),
                BigUint::from(expect),
                "so({n}) spinor"
            );
        }
    }

    #[test]
    fn so4_brute_force_matches_weyl() {
        for a2 in 0..12i64 {
            for b2 in -a2..=a2 {
                if (a2 - b2) % 2 != 0 {
                    continue;
                }
                let w = HighestWeight::from_twice(Series::D, vec![a2, b2]).unwrap();
                let brute = so4_dim(r(a2, 2), r(b2, 2));
                assert_eq!(
                    Rational::from_integer(i64::try_from(weyl_dimension(&w).unwrap()).unwrap()),
                    brute
                );
            }
        }
    }

    #[test]
    fn invalid_weights() {
        assert!(HighestWeight::from_twice(Series::B, vec![2, 1]).is_err());
        assert!(HighestWeight::from_twice(Series::B, vec![0, 2]).is_err());
        assert!(HighestWeight::from_twice(Series::B, vec![2, -2]).is_err());
        assert!(HighestWeight::from_twice(Series::D, vec![2, 4]).is_err());
        assert!(HighestWeight::from_twice(Series::D, vec![1, -1]).is_ok());
        assert!(HighestWeight::from_twice(Series::D, vec![]).is_err());
        assert!(HighestWeight::new(Series::B, &[r(1, 3)]).is_err());
    }

    #[test]
    fn casimir_examples() {
        let w = HighestWeight::new(Series::B, &[r(1, 1)]).unwrap();
        assert_eq!(casimir(&w), r(2, 1));
        let w = HighestWeight::new(Series::D, &[r(1, 1), r(0, 1)]).unwrap();
        assert_eq!(casimir(&w), r(3, 1));
        // ⟨w,w⟩ + 2⟨w,ρ⟩ with ρ = (1, 0): 2 + 2
        let w = HighestWeight::new(Series::D, &[r(1, 1), r(1, 1)]).unwrap();
        assert_eq!(casimir(&w), r(4, 1));
        // so(2) edge case
        let w = HighestWeight::new(Series::D, &[r(-3, 2)]).unwrap();
        assert_eq!(casimir(&w), r(9, 4));
        assert_eq!(weyl_dimension(&w).unwrap(), BigUint::one());
    }

    #[test]
    fn vector_rep_casimir_is_n_minus_one() {
        for n in 3..14u32 {
            let (series, rank) = Series::for_so(n);
            let mut t = vec![0; rank];
            t[0] = 2;
            let w = HighestWeight::from_twice(series, t).unwrap();
            assert_eq!(casimir(&w), Rational::from_integer(i64::from(n) - 1));
            assert_eq!(weyl_dimension(&w).unwrap(), BigUint::from(n));
        }
    }

    #[test]
    fn sector_weight_examples() {
        let ws = sector_weights(&spec(3, 1), 1);
        assert_eq!(ws.len(), 1);
        assert_eq!(ws[0].entries(), vec![r(3, 2)]);
        let ws = sector_weights(&spec(4, 1), 0);
        assert_eq!(ws.len(), 2);
        assert_eq!(ws[0].entries(), vec![r(1, 2), r(1, 2)]);
        assert_eq!(ws[1].entries(), vec![r(1, 2), r(-1, 2)]);
        let ws = sector_weights(&spec(4, 0), 2);
        assert_eq!(ws.len(), 1);
        assert_eq!(ws[0].entries(), vec![r(2, 1), r(0, 1)]);
        // odd D, negative mu uses |mu|
        let ws = sector_weights(&spec(5, -3), 0);
        assert_eq!(ws[0].entries(), vec![r(3, 2), r(3, 2)]);
    }

    #[test]
    fn degeneracy_examples() {
        assert_eq!(degeneracy(&spec(3, 0), 2), BigUint::from(5u32));
        assert_eq!(degeneracy(&spec(3, 1), 0), BigUint::from(2u32));
        assert_eq!(degeneracy(&spec(4, 1), 0), BigUint::from(4u32));
    }

    #[test]
    fn total_weight_examples() {
        let w = total_weight(&spec(3, 1), 1);
        assert_eq!(
            (w.series(), w.entries()),
            (Series::D, vec![r(3, 2), r(1, 2)])
        );
        let w = total_weight(&spec(3, 0), 2);
        assert_eq!(w.entries(), vec![r(2, 1), r(0, 1)]);
        let w = total_weight(&spec(5, -1), 0);
        assert_eq!(
            (w.series(), w.entries()),
            (Series::D, vec![r(1, 2), r(1, 2), r(-1, 2)])
        );
        let w = total_weight(&spec(4, 1), 0);
        assert_eq!(
            (w.series(), w.entries()),
            (Series::B, vec![r(1, 2), r(1, 2)])
        );
        assert_eq!(weyl_dimension(&w).unwrap(), BigUint::from(4u32));
    }

    #[test]
    fn branching_examples() {
        let rep = branching_check(&spec(3, 0), 3);
        assert!(rep.holds());
        assert_eq!(rep.sector_sum, BigUint::from(16u32));
        let rep = branching_check(&spec(3, 1), 1);
        assert!(rep.holds());
        assert_eq!(rep.total_dimension, BigUint::from(6u32));
        let rep = branching_check(&spec(5, 0), 0);
        assert!(rep.holds());
        assert_eq!(rep.total_dimension, BigUint::one());
    }

    #[test]
    fn cbar2_examples() {
        assert_eq!(cbar2(&spec(3, 1)), r(1, 4));
        assert_eq!(cbar2(&spec(5, 2)), r(4, 1));
        assert_eq!(cbar2(&spec(7, 0)), r(0, 1));
        assert_eq!(cbar2(&spec(4, 1)), r(3, 4));
    }

    #[test]
    fn c_identity_examples() {
        let rep = c_identity_check(&spec(3, 0), 5);
        assert!(rep.holds());
        assert_eq!(rep.rhs, r(30, 1));
        let rep = c_identity_check(&spec(5, 2), 0);
        assert!(rep.holds());
        assert_eq!(rep.rhs, r(4, 1));
        assert_eq!(rep.lhs, vec![r(4, 1)]);
        let rep = c_identity_check(&spec(4, 1), 1);
        assert_eq!(rep.lhs.len(), 2);
        assert!(rep.holds());
    }
}
