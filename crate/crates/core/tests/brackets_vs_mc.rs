//! Quadrature brackets against seeded Monte Carlo away from the reference
//! parameters.

use arena_sde::bounds::{logistic_cdf_bracket, logistic_moment_bracket, K2Variant, SystemBounds};
use arena_sde::model::LogisticParams;
use arena_sde::montecarlo::{
    cdf_of, logistic_terminal_samples, moment_of, quantile, system_terminal_samples, Marginal,
    McConfig, McEstimate,
};
use arena_sde::ModelParams;

fn coarse() -> McConfig {
    McConfig {
        dt: 1e-2,
        ..McConfig::default()
    }
}

#[test]
fn moment_bracket_at_long_horizon_in_extinction_regime() {
    // a < sigma^2/2: the mean decays slowly while the typical path dies, so
    // the bound integrals live far out in the Gaussian tail.
    let lp = LogisticParams::new(1.0, 0.1, 1.5, 2.0).unwrap();
    let t = 50.0;
    let samples = logistic_terminal_samples(&lp, t, 4000, 11, &coarse()).unwrap();
    let est = McEstimate::from_samples(&samples, 11);
    let br = logistic_moment_bracket(&lp, 1.0, t, 1e-6).unwrap();
    assert!(
        br.contains(est.mean, 3.0 * est.std_err),
        "{est:?} vs {br:?}"
    );
    assert!(br.upper > 0.1, "upper bound collapsed: {br:?}");
}

#[test]
fn cdf_brackets_hold_for_noisy_law() {
    let lp = LogisticParams::new(1.0, 0.1, 1.5, 2.0).unwrap();
    let t = 5.0;
    let samples = logistic_terminal_samples(&lp, t, 20_000, 12, &coarse()).unwrap();
    for q in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let z = quantile(&samples, q);
        let hits = samples.iter().filter(|&&l| l <= z).count();
        let f = hits as f64 / samples.len() as f64;
        let se = (f * (1.0 - f) / samples.len() as f64).sqrt();
        let br = logistic_cdf_bracket(&lp, z, t, 1e-5).unwrap();
        assert!(br.contains(f, 3.0 * se), "q={q}: {f} vs {br:?}");
    }
}

#[test]
fn system_bounds_in_prey_extinction_regime() {
    let params = ModelParams::figure2(1.5, 1.3);
    let t = 1.0;
    let samples = system_terminal_samples(&params, t, 10_000, 13, &McConfig::default()).unwrap();
    let ex = moment_of(&samples, 1.0, 0.0, t, 13).unwrap();
    let ey = moment_of(&samples, 0.0, 1.0, t, 13).unwrap();
    let ys: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let (mx, my) = (quantile(&xs, 0.5), quantile(&ys, 0.5));
    let fx = cdf_of(&samples, mx, my, Marginal::X, 13);
    let fy = cdf_of(&samples, mx, my, Marginal::Y, 13);

    let sb = SystemBounds::new(params, K2Variant::Corrected).unwrap();
    let lo_x = sb.moment_lower_x(1.0, t).unwrap();
    assert!(lo_x.validity_warning.is_none());
    assert!(
        lo_x.value - lo_x.err_est <= ex.mean + 3.0 * ex.std_err,
        "{lo_x:?} vs {ex:?}"
    );
    let lo_y = sb.moment_lower_y(1.0, t).unwrap();
    assert!(
        lo_y.value - lo_y.err_est <= ey.mean + 3.0 * ey.std_err,
        "{lo_y:?} vs {ey:?}"
    );
    let up_y = sb.joint_moment_upper(0.0, 1.0, t).unwrap();
    assert!(
        up_y.value + up_y.err_est >= ey.mean - 3.0 * ey.std_err,
        "{up_y:?} vs {ey:?}"
    );

    let b = sb.cdf_lower_x(mx, t).unwrap();
    assert!(b.value - b.err_est <= fx.mean + 3.0 * fx.std_err);
    let b = sb.cdf_upper_x(mx, t).unwrap();
    assert!(
        b.value + b.err_est >= fx.mean - 3.0 * fx.std_err,
        "{b:?} vs {fx:?}"
    );
    let b = sb.cdf_lower_y(my, t).unwrap();
    assert!(
        b.value - b.err_est <= fy.mean + 3.0 * fy.std_err,
        "{b:?} vs {fy:?}"
    );
    let b = sb.cdf_upper_y(my, t).unwrap();
    assert!(
        b.value + b.err_est >= fy.mean - 3.0 * fy.std_err,
        "{b:?} vs {fy:?}"
    );
}
