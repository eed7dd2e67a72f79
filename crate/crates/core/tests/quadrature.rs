use hardylab::quadrature::*;
use hardylab::radial::{power_profile, EndpointExponents, RadialPoint};
use hardylab::xf::Xf;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::beta::beta;
use statrs::function::gamma::gamma;

fn value(i: Integral) -> f64 {
    i.value().expect("convergent")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn one() -> hardylab::radial::RadialProfile {
    power_profile(0.0, 1.0)
}

#[test]
fn beta_three_four() {
    let v = value(integrate(&one(), 1.0, &WeightSpec::new(2.0, 3.0, 0.0, 1.0, 1.0), &QuadratureConfig::default()).unwrap());
    assert!(rel(v, 1.0 / 60.0) < 1e-12);
}

#[test]
fn log_reciprocal_is_divergent() {
    let i = integrate(&one(), 1.0, &WeightSpec::new(-1.0, -1.0, 0.0, 1.0, 1.0), &QuadratureConfig::default()).unwrap();
    assert!(i.is_divergent());
    let i = integrate(&one(), 1.0, &WeightSpec::new(0.0, -1.0, 0.0, 1.0, 1.0), &QuadratureConfig::default()).unwrap();
    assert_eq!(i, Integral::Divergent { at: Endpoint::Outer });
}

#[test]
fn ball_volume_moment() {
    let v = value(integrate(&one(), 1.0, &WeightSpec::power(3.0, 1.0), &QuadratureConfig::default()).unwrap());
    assert!(rel(v, 0.25) < 1e-13);
}

#[test]
fn beta_moments_on_random_exponents() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..50 {
        let (a, b) = (rng.random_range(-0.95..6.0), rng.random_range(-0.95..6.0));
        let gamma_exp = rng.random_range(0.3..3.0);
        // ∫₀¹ r^a (1 − r^γ)^b dr = B((a+1)/γ, b+1)/γ
        let exact = beta((a + 1.0) / gamma_exp, b + 1.0) / gamma_exp;
        let v = value(integrate(&one(), 1.0, &WeightSpec::new(a, b, 0.0, gamma_exp, 1.0), &QuadratureConfig::default()).unwrap());
        assert!(rel(v, exact) < 1e-10, "a={a} b={b} γ={gamma_exp}: {v} vs {exact}");
    }
}

#[test]
fn logarithmic_weights() {
    // ∫₀¹ r^a ln(1/r)^c dr = Γ(c+1)/(a+1)^{c+1}
    for (a, c) in [(0.0, -0.5), (0.0, 2.0), (1.5, 0.7), (-0.5, -0.9), (3.0, 4.0)] {
        let exact = gamma(c + 1.0) / f64::powf(a + 1.0, c + 1.0);
        let v = value(integrate(&one(), 1.0, &WeightSpec::new(a, 0.0, c, 1.0, 1.0), &QuadratureConfig::default()).unwrap());
        assert!(rel(v, exact) < 1e-10, "a={a} c={c}");
    }
    let i = integrate(&one(), 1.0, &WeightSpec::new(-1.0, 0.0, -1.0, 1.0, 1.0), &QuadratureConfig::default()).unwrap();
    assert!(i.is_divergent());
    // r^{-1} ln(1/r)^{-2} converges at the origin: ∫₀^½ = 1/ln 2
    let f = |_: &RadialPoint| Xf::ONE;
    let ig = Integrand { f: &f, exponents: EndpointExponents { origin: Some(0.0), outer: None }, support: (0.0, 0.5), breakpoints: vec![], scale: 1.0 };
    let v = value(integrate_fn(&ig, &WeightSpec::new(-1.0, 0.0, -2.0, 1.0, 1.0), &QuadratureConfig::default()).unwrap());
    assert!(rel(v, 1.0 / 2f64.ln()) < 1e-9, "{v}");
}

#[test]
fn supports_spanning_many_decades() {
    let f = |_: &RadialPoint| Xf::ONE;
    let lo: f64 = 1e-7;
    let ig = Integrand { f: &f, exponents: EndpointExponents::COMPACT, support: (lo, 1.0), breakpoints: vec![], scale: 1.0 };
    let v = value(integrate_fn(&ig, &WeightSpec::power(-0.5, 1.0), &QuadratureConfig::default()).unwrap());
    assert!(rel(v, 2.0 * (1.0 - lo.sqrt())) < 1e-11);
    let v = value(integrate_fn(&ig, &WeightSpec::power(-1.0, 1.0), &QuadratureConfig::default()).unwrap());
    assert!(rel(v, -lo.ln()) < 1e-11);
}

#[test]
fn full_space_moments() {
    // ∫₀^∞ r^a e^{-r} dr = Γ(a+1)
    let f = |pt: &RadialPoint| Xf::exp(-pt.r_f64());
    let ig = Integrand { f: &f, exponents: EndpointExponents { origin: Some(0.0), outer: None }, support: (0.0, f64::INFINITY), breakpoints: vec![], scale: 1.0 };
    for a in [0.0, 2.0, -0.5, 3.7] {
        let v = value(integrate_fn(&ig, &WeightSpec::full_space(a), &QuadratureConfig::default()).unwrap());
        assert!(rel(v, gamma(a + 1.0)) < 1e-10, "a={a}: {v}");
    }
}

#[test]
fn tolerance_is_validated() {
    assert!(QuadratureConfig::with_tol(1e-15).is_err());
    assert!(QuadratureConfig::with_tol(0.5).is_err());
    assert!(QuadratureConfig::with_tol(f64::NAN).is_err());
    assert_eq!(QuadratureConfig::with_tol(1e-8).unwrap().tol, 1e-8);
}

#[test]
fn looser_tolerance_still_meets_its_target() {
    let cfg = QuadratureConfig::with_tol(1e-6).unwrap();
    let v = value(integrate(&one(), 1.0, &WeightSpec::new(-0.5, 0.5, 0.0, 2.0, 1.0), &cfg).unwrap());
    assert!(rel(v, beta(0.25, 1.5) / 2.0) < 1e-6);
}

#[test]
fn classifier_reads_exponents() {
    let w = WeightSpec::new(-1.0, 0.0, 0.0, 1.0, 1.0);
    let e = EndpointExponents { origin: Some(0.5), outer: Some(0.0) };
    assert_eq!(classify(&e, (0.0, 1.0), &w), None);
    let e = EndpointExponents { origin: Some(0.0), outer: Some(0.0) };
    assert_eq!(classify(&e, (0.0, 1.0), &w), Some(Endpoint::Origin));
    // away from the origin only the outer end counts
    assert_eq!(classify(&e, (0.1, 1.0), &w), None);
    let w = WeightSpec::new(0.0, -2.0, 0.0, 1.0, 1.0);
    let e = EndpointExponents { origin: Some(0.0), outer: Some(1.0) };
    assert_eq!(classify(&e, (0.0, 1.0), &w), Some(Endpoint::Outer));
    let e = EndpointExponents { origin: Some(0.0), outer: Some(1.01) };
    assert_eq!(classify(&e, (0.0, 1.0), &w), None);
}

#[test]
fn coincident_breakpoints_are_merged() {
    // the derivative of a symmetric bump vanishes exactly at its midpoint cut
    let f = |pt: &RadialPoint| Xf::from_f64(pt.r_f64().sin());
    let mid: f64 = 0.5773502691896258;
    let ig = Integrand { f: &f, exponents: EndpointExponents::COMPACT, support: (0.2, 1.3), breakpoints: vec![mid, mid.next_up(), 1.3 - 1e-17], scale: 1.0 };
    let v = value(integrate_fn(&ig, &WeightSpec::full_space(0.0), &QuadratureConfig::default()).unwrap());
    assert!(rel(v, 0.2f64.cos() - 1.3f64.cos()) < 1e-12);
}
