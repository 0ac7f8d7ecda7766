use cmera_core::analysis::fit_central_charge;
use cmera_core::gaussian_entropy::{entropy_profile, EntropyProfile};
use cmera_core::theory::{Theory, TheoryConfig};
use cmera_core::Error;

#[test]
fn stitched_profile_is_monotone_and_consistent() {
    let cfg = TheoryConfig::new(Theory::Fermion1d);
    let fine = entropy_profile(&[0.5, 1.0, 1.5, 2.0], 0.05, &cfg, None).unwrap();
    let coarse = entropy_profile(&[2.0, 3.0, 4.0, 6.0], 0.1, &cfg, None).unwrap();
    let s = EntropyProfile::stitch(&fine, &coarse, 5e-3).unwrap();
    assert_eq!(s.points.len(), 7);
    assert!(s.is_monotone(1e-9));
    // the overlap keeps the fine value
    assert_eq!(s.points[3].a, 0.05);
    assert!(matches!(EntropyProfile::stitch(&fine, &coarse, 1e-9), Err(Error::StitchMismatch { .. })));
}

#[test]
fn config_errors_are_not_numerical() {
    let cfg = TheoryConfig::new(Theory::Boson1d);
    for e in [
        entropy_profile(&[1.0], 0.6, &cfg, None).unwrap_err(),
        entropy_profile(&[1.0], 0.1, &cfg, Some(2)).unwrap_err(),
        entropy_profile(&[1.0], 0.1, &cfg.with_epsilon(0.0), None).unwrap_err(),
    ] {
        assert!(!e.is_numerical(), "{e}");
    }
}

#[test]
fn fermion_profile_grows_logarithmically() {
    let cfg = TheoryConfig::new(Theory::Fermion1d);
    let xs: Vec<f64> = (0..6).map(|i| 4.0 * 2f64.powf(i as f64 / 2.0)).collect();
    let p = entropy_profile(&xs, 0.1, &cfg, None).unwrap();
    let c = fit_central_charge(&p.series(), (xs[0], xs[5])).unwrap();
    assert!(c.exponent_or_slope > 0.9 && c.exponent_or_slope < 1.2, "{c:?}");
    assert!(p.points.iter().all(|q| q.discarded_fraction == 0.0));
}
