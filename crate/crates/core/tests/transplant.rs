use hardylab::constants::{s_rad_constant, t_rad_constant, SRadParams};
use hardylab::quadrature::{integrate, QuadratureConfig, WeightSpec};
use hardylab::radial::{apply_grad_k, bump, cap, hs_minimizer, RadialProfile};
use hardylab::transplant::{chart_integrals, pushforward, radius_map, scaled_profile, scaling_map, verify_transplant_equivalence, Chart};

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
fn forward_inverse_round_trip() {
    for (from, to) in [(Chart::Ball, Chart::FullSpace), (Chart::FullSpace, Chart::LogBall), (Chart::Ball, Chart::LogBall)] {
        let m = radius_map(from, to, 1.7, 2.0).unwrap();
        let mut last = 0.0;
        for i in 1..100 {
            // log-ball images of small radii underflow f64, so stay above R/4
            let r = if from == Chart::FullSpace { 0.05 * i as f64 } else { 2.0 * (0.25 + 0.75 * i as f64 / 100.0) };
            let f = m.forward(r).unwrap();
            assert!(f > last, "{from}→{to} not monotone at {r}");
            last = f;
            assert!((m.inverse(f).unwrap() / r - 1.0).abs() < 1e-12, "{from}→{to} at {r}");
        }
    }
}

#[test]
fn round_trip_profile() {
    let u = bump(0.2, 0.9, 0.3, -0.2, 1.0);
    let there = radius_map(Chart::Ball, Chart::FullSpace, 1.3, 1.0).unwrap();
    let back = pushforward(&pushforward(&u, &there), &there.inverse_map());
    for i in 1..100 {
        let r = i as f64 / 100.0;
        let (a, b) = (u.eval(r), back.eval(r));
        assert!((a - b).abs() <= 1e-10 * a.abs().max(1e-300), "{r}: {a} vs {b}");
        let (da, db) = (u.deriv(1, r).unwrap(), back.deriv(1, r).unwrap());
        assert!((da - db).abs() <= 1e-9 * da.abs().max(1.0));
    }
}

#[test]
fn three_charts_agree() {
    let profiles: Vec<RadialProfile> = vec![bump(0.1, 0.95, 0.5, 0.1, 1.0), cap(2.5, 0.3, 1.0), bump(0.5, 0.999, -0.3, 0.2, 1.0)];
    for (n, p, alpha, beta) in [(3, 2.0, 1.0, 2.0), (4, 3.0, 0.5, 2.5), (3, 1.5, -1.0, 3.0)] {
        for u in &profiles {
            let res = verify_transplant_equivalence(u, n, p, alpha, beta, 1.0, &cfg()).unwrap();
            assert!(res.residual_grad < 1e-8 && res.residual_mass < 1e-8, "{} N={n} p={p}: {res:?}", u.label());
        }
    }
}

#[test]
fn zero_profile_has_zero_residuals() {
    let u = cap(2.0, 0.0, 1.0).scaled(0.0);
    let res = verify_transplant_equivalence(&u, 3, 2.0, 1.0, 2.0, 1.0, &cfg()).unwrap();
    assert_eq!((res.residual_grad, res.residual_mass), (0.0, 0.0));
}

#[test]
fn scaling_group_law() {
    let (a, b) = (scaling_map(0.7, 1.3, 2.0, Chart::Ball).unwrap(), scaling_map(2.5, 1.3, 2.0, Chart::Ball).unwrap());
    let ab = scaling_map(1.75, 1.3, 2.0, Chart::Ball).unwrap();
    for i in 1..100 {
        let r = 0.02 * i as f64;
        let lhs = b.forward(a.forward(r).unwrap()).unwrap();
        assert!((lhs / ab.forward(r).unwrap() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn scaling_invariance_on_critical_line() {
    let (n, p, beta) = (3, 2.0, 2.0);
    let gamma = 1.5;
    let alpha = n as f64 - (beta - 1.0) * gamma;
    let u = bump(0.2, 0.9, 0.2, 0.0, 1.0);
    let base = chart_integrals(&u, Chart::Ball, n, p, alpha, beta, gamma, &cfg()).unwrap();
    for lambda in [0.5, 2.0] {
        let s = scaled_profile(&u, lambda, Chart::Ball, n, p, alpha, beta, gamma).unwrap();
        let after = chart_integrals(&s, Chart::Ball, n, p, alpha, beta, gamma, &cfg()).unwrap();
        for i in 0..2 {
            assert!((after[i] / base[i] - 1.0).abs() < 1e-8, "λ={lambda}: {base:?} vs {after:?}");
        }
    }
}

#[test]
fn hs_minimizer_on_full_space() {
    let (n, p, q, alpha, beta) = (3u32, 2.0, 4.0, 1.0, 2.0);
    let nf = n as f64;
    let gamma = (nf - alpha) / (beta - 1.0);
    let u = hs_minimizer(1.0, 1.0, n, p, q, alpha, beta, 1.0).unwrap();
    let v = pushforward(&u, &radius_map(Chart::Ball, Chart::FullSpace, gamma, 1.0).unwrap());
    let num = integrate(&apply_grad_k(&v, 1, n).unwrap(), p, &WeightSpec::full_space(nf - 1.0 + p - alpha), &cfg()).unwrap();
    let den = integrate(&v, q, &WeightSpec::full_space(nf - 1.0 - (nf - q / p * (nf - alpha))), &cfg()).unwrap();
    let omega = hardylab::constants::sphere_area(n);
    let quotient = omega * num.value().unwrap() / (omega * den.value().unwrap()).powf(p / q);
    let t = t_rad_constant(n, p, q, alpha).unwrap();
    let s = s_rad_constant(&SRadParams::new(n, p, (p - alpha) / p, -(nf - q / p * (nf - alpha)) / q).unwrap()).unwrap();
    assert!((quotient / t - 1.0).abs() < 1e-6, "{quotient} vs {t}");
    assert!((s / t - 1.0).abs() < 1e-10);
}

#[test]
fn scaling_breaks_below_critical_line() {
    let (n, p, beta, gamma) = (3, 2.0, 2.0, 1.5);
    let alpha = n as f64 - (beta - 1.0) * gamma - 0.5;
    let u = bump(0.2, 0.9, 0.2, 0.0, 1.0);
    let base = chart_integrals(&u, Chart::Ball, n, p, alpha, beta, gamma, &cfg()).unwrap();
    let s = scaled_profile(&u, 2.0, Chart::Ball, n, p, alpha, beta, gamma).unwrap();
    let after = chart_integrals(&s, Chart::Ball, n, p, alpha, beta, gamma, &cfg()).unwrap();
    let dev = (0..2).map(|i| (after[i] / base[i] - 1.0).abs()).fold(0.0, f64::max);
    assert!(dev > 1e-3, "{dev}");
}
