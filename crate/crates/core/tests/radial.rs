use genkepler::model::{CutoffIndex, ProblemSpec};
use genkepler::radial::{
    discretize, eigen_lowest, lowest_eigenvalues, sector_compare, sign_changes, sturm_count,
    RadialGrid, SectorSpec,
};
use genkepler::spectrum::{energy, threshold_energy};
use rayon::prelude::*;

fn sector(dim: u32, kappa: f64, twice_mu: i64, l: u32) -> SectorSpec {
    SectorSpec::new(ProblemSpec::new(dim, kappa, twice_mu).unwrap(), l)
}

#[test]
fn node_count_matches_level() {
    for s in [
        sector(3, 0.0, 0, 0),
        sector(4, 0.0, 1, 1),
        sector(5, 0.05, 2, 0),
        sector(3, -1e-3, 1, 2),
    ] {
        let grid = RadialGrid::for_sector(&s, 5, 8000, None).unwrap();
        let op = discretize(&s, &grid).unwrap();
        for (k, pair) in eigen_lowest(&op, 5).unwrap().iter().enumerate() {
            assert_eq!(
                sign_changes(&pair.vector),
                k,
                "{:?} level {}",
                s.spec(),
                k + 1
            );
        }
    }
}

#[test]
fn hydrogen_levels() {
    let s = sector(3, 0.0, 0, 0);
    let grid = RadialGrid::new(20000, 400.0).unwrap();
    let report = sector_compare(&s, 3, &grid).unwrap();
    let expect = [-0.5, -0.125, -1.0 / 18.0];
    for (row, e) in report.rows.iter().zip(expect) {
        assert!((row.energy_closed - e).abs() < 1e-15);
        assert!(row.relerr_fd() <= 1e-4);
        assert!(row.relerr_shoot() <= 1e-8);
        assert_eq!(row.nodes_fd as u32, row.k - 1);
    }
}

/// Eigenvalues at |κ| = 1e−6 minus the explicit curvature term of the level
/// formula stay within 1e−4 of the flat-space values.
#[test]
fn small_curvature_continuity() {
    for (dim, twice_mu, l) in [(3u32, 0i64, 0u32), (5, 1, 1)] {
        let flat = sector(dim, 0.0, twice_mu, l);
        let grid = RadialGrid::new(20000, 400.0).unwrap();
        let base = lowest_eigenvalues(&discretize(&flat, &grid).unwrap(), 2).unwrap();
        for kappa in [-1e-6, 1e-6] {
            let curved = sector(dim, kappa, twice_mu, l);
            // same spacing as the flat grid; κ > 0 must span the whole sphere
            let grid = if kappa > 0.0 {
                let extent = curved.x_max_analytic();
                RadialGrid::new((extent / grid.spacing()) as usize, extent).unwrap()
            } else {
                grid
            };
            let values = lowest_eigenvalues(&discretize(&curved, &grid).unwrap(), 2).unwrap();
            for k in 0..2 {
                let i = l + k as u32;
                let shift = 2.0 * (energy(curved.spec(), i) - energy(flat.spec(), i));
                let rel = (values[k] - shift - base[k]).abs() / base[k].abs();
                assert!(rel <= 1e-4, "D={dim} kappa={kappa} k={k}: {rel:e}");
            }
        }
    }
}

#[test]
fn bound_state_count_per_sector() {
    let spec = ProblemSpec::new(3, -0.01, 0).unwrap();
    let CutoffIndex::Finite(i0) = spec.cutoff_index() else {
        panic!("finite cutoff expected")
    };
    let threshold = 2.0 * threshold_energy(&spec).unwrap();
    for l in 0..=(i0 as u32 + 1) {
        let s = SectorSpec::new(spec, l);
        let grid = RadialGrid::auto(&s, 1, None).unwrap();
        let op = discretize(&s, &grid).unwrap();
        let count = sturm_count(&op.diagonal, &op.off_diagonal, threshold);
        assert_eq!(count as i64, (i0 - i64::from(l) + 1).max(0), "l = {l}");
    }
}

#[test]
fn positive_curvature_spectrum() {
    let s = sector(4, 0.3, 1, 1);
    let grid = RadialGrid::auto(&s, 4, None).unwrap();
    let report = sector_compare(&s, 4, &grid).unwrap();
    for row in &report.rows {
        assert!(row.bound);
        assert!(row.relerr_fd() < 1e-4, "{row:?}");
        assert!(row.solver_disagreement() < 1e-4, "{row:?}");
    }
    // unbounded from above: the levels eventually turn positive
    assert!(report.rows[3].energy_closed > 0.0);
}

#[test]
fn concurrent_solves_are_bit_identical() {
    let cases: Vec<SectorSpec> = (0..6)
        .map(|i| {
            sector(
                3 + 2 * (i % 3),
                [-1e-3, 0.0, 0.02][i as usize % 3],
                1,
                i % 2,
            )
        })
        .collect();
    let run = |s: &SectorSpec| {
        let grid =
            RadialGrid::new(4000, RadialGrid::auto(s, 2, Some(150.0)).unwrap().x_max()).unwrap();
        sector_compare(s, 2, &grid).unwrap().to_csv()
    };
    let serial: Vec<String> = cases.iter().map(run).collect();
    let parallel: Vec<String> = cases.par_iter().map(run).collect();
    assert_eq!(serial, parallel);
    assert_eq!(serial, cases.iter().map(run).collect::<Vec<_>>());
}
