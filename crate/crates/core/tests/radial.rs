use hardylab::corpus::triples;
use hardylab::radial::*;
use hardylab::HardyError;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

#[test]
fn virtual_extremal_values_and_ode() {
    let u = virtual_extremal(2.0, 2.0, 1.0, 1.0);
    assert!(rel(u.eval(0.5), 1.0) < 1e-15);
    assert!(u.eval(1.0 - 1e-15) < 1e-7);
    let (p, beta, gamma, radius) = (3.0, 2.5, 1.7, 2.0);
    let v = virtual_extremal(p, beta, gamma, radius);
    let c = (beta - 1.0) * gamma / p;
    for i in 1..=100 {
        let r = radius * i as f64 / 101.0;
        let g = 1.0 - (r / radius).powf(gamma);
        let residual = -v.deriv(1, r).unwrap() - c * v.eval(r) / (r * g);
        assert!(residual.abs() <= 1e-10 * (c * v.eval(r) / (r * g)).abs(), "r={r}");
    }
}

#[test]
fn boundary_test_function_support() {
    let (a, delta, gamma, radius) = (0.7, 0.1, 1.5, 2.0);
    let f = boundary_test_function(a, delta, gamma, radius);
    assert_eq!(f.eval(radius), 0.0);
    for r in [0.0, 0.3, 1.0, radius * (1.0 - 2.0 * delta)] {
        assert_eq!(f.eval(r), 0.0, "r={r}");
    }
    for r in [radius * (1.0 - delta), 1.9, 1.99] {
        assert!(rel(f.eval(r), (1.0 - (r / radius).powf(gamma)).powf(a)) < 1e-14);
    }
    // the bridge never overshoots
    assert!((0..200).all(|i| {
        let r = radius * (1.0 - 2.0 * delta + delta * i as f64 / 200.0);
        f.eval(r) <= (1.0 - (r / radius).powf(gamma)).powf(a) * (1.0 + 1e-14)
    }));
}

#[test]
fn origin_test_function_support() {
    let (b, delta) = (1.3, 0.2);
    let g = origin_test_function(b, delta, 1.0);
    assert!(rel(g.eval(delta / 2.0), (delta / 2.0).powf(-b)) < 1e-14);
    assert_eq!(g.eval(3.0 * delta), 0.0);
}

#[test]
fn smoothstep_slope_bound() {
    // |φ_δ'| ≤ 1.875/δ on the bridge
    let (delta, radius) = (0.05, 1.0);
    let f = boundary_test_function(0.0, delta, 1.0, radius);
    let worst = (1..400).map(|i| f.deriv(1, 1.0 - 2.0 * delta + delta * i as f64 / 400.0).unwrap().abs()).fold(0.0, f64::max);
    assert!(worst <= SMOOTHSTEP_MAX_SLOPE / delta * (1.0 + 1e-12) && worst > 0.99 * SMOOTHSTEP_MAX_SLOPE / delta);
}

#[test]
fn hs_minimizer_halfway_value() {
    for (n, p, q, alpha, beta) in [(3, 2.0, 4.0, 1.0, 2.0), (5, 3.0, 4.5, 2.0, 3.0), (4, 1.5, 2.0, -1.0, 1.5)] {
        let u = hs_minimizer(1.0, 1.0, n, p, q, alpha, beta, 1.0).unwrap();
        let gamma = (n as f64 - alpha) / (beta - 1.0);
        let r = 2f64.powf(-1.0 / gamma);
        assert!(rel(u.eval(r), 2f64.powf(-p / (q - p))) < 1e-13);
        assert!(u.eval(1.0 - 1e-12) < 1e-3);
    }
    assert!(matches!(hs_minimizer(0.0, 1.0, 3, 2.0, 4.0, 1.0, 2.0, 1.0), Err(HardyError::Inadmissible { .. })));
}

#[test]
fn low_order_coefficients() {
    let (a, g, n) = (2.7, 1.3, 5);
    assert!(rel(grad_k_coefficients(1, a, g, n).coeffs[0], -g * a) < 1e-15);
    let c2 = grad_k_coefficients(2, a, g, n).coeffs;
    assert!(rel(c2[0], -a * g * (n as f64 + g - 2.0)) < 1e-15);
    assert!(rel(c2[1], a * (a - 1.0) * g * g) < 1e-15);
}

#[test]
fn leading_coefficient_closed_form() {
    for t in triples(11, 20) {
        for k in 1..=6 {
            let expect = (-t.gamma).powi(k as i32) * (1..=k).map(|l| t.a - l as f64 + 1.0).product::<f64>();
            assert!(rel(grad_k_coefficients(k, t.a, t.gamma, t.n).leading(), expect) < 1e-14);
        }
    }
}

const D1: [f64; 9] = [1.0 / 280.0, -4.0 / 105.0, 0.2, -0.8, 0.0, 0.8, -0.2, 4.0 / 105.0, -1.0 / 280.0];
const D2: [f64; 9] = [-1.0 / 560.0, 8.0 / 315.0, -0.2, 1.6, -205.0 / 72.0, 1.6, -0.2, 8.0 / 315.0, -1.0 / 560.0];

fn stencil(f: &dyn Fn(f64) -> f64, r: f64, h: f64, w: &[f64; 9]) -> f64 {
    w.iter().enumerate().map(|(i, c)| c * f(r + (i as f64 - 4.0) * h)).sum()
}

#[test]
fn third_order_expansion_against_finite_differences() {
    for t in triples(5, 6) {
        let nm1 = t.n as f64 - 1.0;
        let f = |r: f64| (1.0 - r.powf(t.gamma)).powf(t.a);
        let h = 1e-2;
        let lap = |r: f64| stencil(&f, r, h, &D2) / (h * h) + nm1 * stencil(&f, r, h, &D1) / (r * h);
        let coeffs = grad_k_coefficients(3, t.a, t.gamma, t.n);
        for i in 0..50 {
            let r = 0.25 + 0.6 * i as f64 / 49.0;
            let fd = stencil(&lap, r, h, &D1) / h;
            let g = 1.0 - r.powf(t.gamma);
            let mag: f64 = coeffs.coeffs.iter().enumerate().map(|(j, c)| {
                let j = (j + 1) as f64;
                (c * r.powf(j * t.gamma - 3.0) * g.powf(t.a - j)).abs()
            }).sum();
            assert!((fd.abs() - coeffs.eval(r)).abs() < 1e-6 * mag, "{t:?} r={r}: {fd} vs {}", coeffs.eval(r));
        }
    }
}

#[test]
fn apply_grad_k_matches_expansion() {
    for t in triples(3, 10) {
        let u = gap_power(t.a, t.gamma, 1.0);
        let g3 = apply_grad_k(&u, 3, t.n).unwrap();
        let coeffs = grad_k_coefficients(3, t.a, t.gamma, t.n);
        for r in [0.2, 0.4, 0.6, 0.8] {
            let (a, b) = (g3.eval(r), coeffs.eval(r));
            if b > 1e-6 {
                assert!(rel(a, b) < 1e-8, "{t:?} r={r}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn apply_grad_k_basics() {
    let sq = power_profile(2.0, 1.0);
    for r in [0.1, 0.5, 0.9] {
        assert!(rel(apply_grad_k(&sq, 2, 5).unwrap().eval(r), 10.0) < 1e-13);
    }
    let v = virtual_extremal(2.0, 3.0, 1.0, 1.0);
    let dv = apply_grad_k(&v, 1, 3).unwrap();
    for r in [0.2, 0.7] {
        assert!(rel(dv.eval(r), v.deriv(1, r).unwrap().abs()) < 1e-14);
    }
    assert!(matches!(apply_grad_k(&apply_grad_k(&v, 8, 3).unwrap(), 1, 3), Err(HardyError::OrderTooLow { .. })));
}

#[test]
fn radial_power_coefficients() {
    assert_eq!(grad_k_radial_power(2, 2.0, 3), 6.0);
    assert_eq!(grad_k_radial_power(1, -2.5, 4), 2.5);
    for (n, alpha, p) in [(9u32, 1.0, 2.0), (11, 2.5, 3.0), (7, -1.0, 1.5), (10, 0.0, 2.5)] {
        let b = -(n as f64 - alpha) / p;
        let c = grad_k_radial_power(4, b, n);
        let g = apply_grad_k(&power_profile(b, 1.0), 4, n).unwrap();
        for r in [0.1, 0.35, 0.6, 0.95] {
            assert!(rel(g.eval(r), c * r.powf(b - 4.0)) < 1e-8, "N={n} b={b} r={r}");
        }
    }
}

#[test]
fn leading_order_law_at_the_sphere() {
    let r: f64 = 1.0 - 1e-6;
    for t in triples(17, 20) {
        for k in 1..=6usize {
            let c = grad_k_coefficients(k, t.a, t.gamma, t.n);
            // an integer A below k makes the leading term vanish
            if (t.a - t.a.round()).abs() < 0.05 && t.a.round() < k as f64 {
                continue;
            }
            let g = 1.0 - r.powf(t.gamma);
            let lhs = apply_grad_k(&gap_power(t.a, t.gamma, 1.0), k, t.n).unwrap().eval(r) / g.powf(t.a - k as f64);
            let rhs = c.leading().abs() * r.powf(k as f64 * (t.gamma - 1.0));
            assert!(rel(lhs, rhs) < 1e-3, "{t:?} k={k}: {lhs} vs {rhs}");
        }
    }
}

/// `d ln|u| / d ln x` between `x` and `2x`, where `x` is `r` at the origin
/// and `1 − r^γ` at the sphere.
fn slope(u: &RadialProfile, at_origin: bool, gamma: f64) -> f64 {
    let x = 1e-4;
    let r_of = |x: f64| if at_origin { x } else { (1.0 - x).powf(1.0 / gamma) };
    (u.eval(r_of(2.0 * x)).abs().ln() - u.eval(r_of(x)).abs().ln()) / 2f64.ln()
}

#[test]
fn declared_exponents_match_slopes() {
    let cases: Vec<(RadialProfile, f64)> = vec![
        (virtual_extremal(2.0, 2.5, 1.5, 1.0), 1.5),
        (virtual_extremal(3.0, 4.0, 0.5, 1.0), 0.5),
        (gap_power(2.3, 1.2, 1.0), 1.2),
        (power_profile(-1.7, 1.0), 1.0),
        (hs_minimizer(1.0, 2.0, 3, 2.0, 4.0, 1.0, 2.0, 1.0).unwrap(), 2.0),
        (cap(2.5, 0.3, 1.0), 2.0),
        (boundary_test_function(0.8, 0.1, 2.0, 1.0), 2.0),
        (origin_test_function(1.4, 0.1, 1.0), 1.0),
    ];
    for (u, gamma) in cases {
        let e = u.exponents();
        if let Some(s) = e.origin {
            let fit = slope(&u, true, gamma);
            assert!((fit - s).abs() <= 0.05 * s.abs().max(1.0), "{}: origin {fit} vs {s}", u.label());
        }
        if let Some(s) = e.outer {
            let fit = slope(&u, false, gamma);
            assert!((fit - s).abs() <= 0.05 * s.abs().max(1.0), "{}: outer {fit} vs {s}", u.label());
        }
    }
}

#[test]
fn derivatives_agree_with_differences() {
    let profiles = [bump(0.1, 0.9, 0.3, -0.2, 1.0), virtual_extremal(2.0, 2.0, 1.0, 1.0), hs_minimizer(1.0, 1.0, 3, 2.0, 3.0, 1.0, 2.0, 1.0).unwrap()];
    let h = 1e-5;
    for u in &profiles {
        for j in 1..=3 {
            for r in [0.3, 0.45, 0.6, 0.75] {
                let fd = (u.deriv(j - 1, r + h).unwrap() - u.deriv(j - 1, r - h).unwrap()) / (2.0 * h);
                let exact = u.deriv(j, r).unwrap();
                assert!((fd - exact).abs() <= 1e-5 * exact.abs().max(1.0), "{} j={j} r={r}: {fd} vs {exact}", u.label());
            }
        }
        assert_eq!(u.deriv(0, 0.5).unwrap(), u.eval(0.5));
    }
}
