mod common;

use std::f64::consts::PI;

use nalgebra::DVector;
use proptest::prelude::*;

use equivibe::config::{REFERENCE_EIGENVALUES, REFERENCE_R0};
use equivibe::model::{find_equilibrium, hessian, PotentialParams};
use equivibe::spectrum::{
    critical_set, dense_slice_eigenvalues, eigenvalues_with_multiplicity, SpectralReport,
};

use common::{QUOTED_LAMBDA, QUOTED_PERIODS};

fn check_report(p: &PotentialParams) -> Result<(), TestCaseError> {
    let eq = find_equilibrium(p).unwrap();
    let r = SpectralReport::compute(&eq, p).unwrap();
    prop_assert!(r.max_cross_term <= 1e-8, "cross {:e}", r.max_cross_term);
    for b in &r.blocks {
        let scale = b
            .oracle
            .iter()
            .flatten()
            .fold(1.0f64, |m, x| m.max(x.abs()));
        for (row_c, row_o) in b.closed_form.iter().zip(&b.oracle) {
            for (c, o) in row_c.iter().zip(row_o) {
                prop_assert!(
                    (c - o).abs() <= 1e-8 * scale,
                    "block {}: {c} vs {o}",
                    b.index
                );
            }
        }
        if b.oracle.len() == 2 {
            let (a, d, c) = (b.oracle[0][0], b.oracle[0][1], b.oracle[1][1]);
            let mus: Vec<f64> = r
                .modes
                .iter()
                .filter(|m| m.component == b.index)
                .map(|m| m.mu)
                .collect();
            prop_assert_eq!(mus.len(), 2);
            let gap = (mus[0] - mus[1]).powi(2);
            prop_assert!((gap - ((a - c).powi(2) + 4.0 * d * d)).abs() <= 1e-8 * scale * scale);
        }
    }
    let h = hessian(&eq.u0, p).unwrap();
    for m in &r.modes {
        let v = DVector::from_column_slice(&m.vector);
        prop_assert!((v.norm() - 1.0).abs() <= 1e-10);
        prop_assert!((&h * &v - &v * m.mu).norm() <= 1e-8 * (1.0 + m.mu.abs()));
    }
    let records = eigenvalues_with_multiplicity(&r);
    let total: usize = records.iter().map(|x| x.real_multiplicity).sum();
    prop_assert_eq!(total, 2 * p.n - 3);
    let mut dense = dense_slice_eigenvalues(&eq, p).unwrap();
    let mut ours: Vec<f64> = r
        .modes
        .iter()
        .flat_map(|m| std::iter::repeat_n(m.mu, m.real_multiplicity))
        .collect();
    dense.sort_by(f64::total_cmp);
    ours.sort_by(f64::total_cmp);
    prop_assert_eq!(dense.len(), ours.len());
    for (a, b) in dense.iter().zip(&ours) {
        prop_assert!((a - b).abs() <= 1e-8 * (1.0 + a.abs()));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn blocks_agree_with_projection(n in 3usize..=8, a in 0.0..1.0f64, b in 50.0..500.0f64, s in 0.0..1.0f64) {
        check_report(&PotentialParams::new(n, a, b, s).unwrap())?;
    }
}

#[test]
fn harmonic_ring_matches_dense_eigenvalues() {
    for n in 3..=9 {
        let p = PotentialParams::harmonic(n);
        let eq = find_equilibrium(&p).unwrap();
        let r = SpectralReport::compute(&eq, &p).unwrap();
        let mut dense = dense_slice_eigenvalues(&eq, &p).unwrap();
        dense.sort_by(f64::total_cmp);
        let mut ours: Vec<f64> = r
            .modes
            .iter()
            .flat_map(|m| std::iter::repeat_n(m.mu, m.real_multiplicity))
            .collect();
        ours.sort_by(f64::total_cmp);
        for (a, b) in dense.iter().zip(&ours) {
            assert!((a - b).abs() <= 1e-10, "n {n}: {a} vs {b}");
        }
        check_report(&p).unwrap();
    }
}

#[test]
fn reference_ring_has_one_component_per_eigenvalue() {
    let p = PotentialParams::reference();
    let r = SpectralReport::compute(&find_equilibrium(&p).unwrap(), &p).unwrap();
    let records = eigenvalues_with_multiplicity(&r);
    assert_eq!(records.len(), 6);
    for rec in &records {
        assert_eq!(rec.components.len(), 1);
    }
    assert_eq!(
        records.iter().map(|x| x.real_multiplicity).sum::<usize>(),
        9
    );
}

#[test]
fn critical_set_structure() {
    let p = PotentialParams::reference();
    let r = SpectralReport::compute(&find_equilibrium(&p).unwrap(), &p).unwrap();
    let cs = critical_set(&r, 6).unwrap();
    assert_eq!(cs.len(), 6 * 6);
    for w in cs.windows(2) {
        assert!(w[0].lambda < w[1].lambda);
    }
    for c in &cs {
        assert!(c.mu > 0.0 && c.lambda > 0.0);
        assert_eq!(c.limit_period, 2.0 * PI * c.lambda);
        if c.l == 2 {
            let one = cs.iter().find(|d| d.same_label(c.j, 1, c.branch)).unwrap();
            assert_eq!(c.lambda, 2.0 * one.lambda);
        }
    }
    assert!(critical_set(&r, 0).is_err());
}

#[test]
fn supplied_eigenvalues_reproduce_the_quoted_critical_values() {
    let r = SpectralReport::from_labelled(6, REFERENCE_R0, &REFERENCE_EIGENVALUES).unwrap();
    let cs = critical_set(&r, 6).unwrap();
    // the negative eigenvalue contributes nothing
    assert!(cs.iter().all(|c| c.j != 0));
    for (j, l, branch, lambda) in QUOTED_LAMBDA {
        let c = cs.iter().find(|c| c.same_label(j, l, branch)).unwrap();
        assert!(
            (c.lambda - lambda).abs() <= 1e-6,
            "{}: {} vs {lambda}",
            c.label(),
            c.lambda
        );
    }
    for ((j, l, b), period) in QUOTED_PERIODS {
        let c = cs.iter().find(|c| c.same_label(j, l, b)).unwrap();
        assert!((c.limit_period - period).abs() <= 1e-6, "{}", c.label());
    }
}
