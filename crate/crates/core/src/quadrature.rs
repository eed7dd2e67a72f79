//! Weighted radial quadrature with endpoint substitutions.
//!
//! The interval is split into panels at profile breakpoints. A panel that
//! touches the origin is integrated in `t` with `r = r₁e^{−t}`, a panel
//! touching the sphere in `s` with `1 − (r/R)^γ = e^{−s}`, and a panel
//! reaching infinity in `u` with `r = r₁e^{u}`; all three use the exp-sinh
//! rule, interior panels use tanh-sinh. Each panel is refined by halving
//! the step until successive levels agree to the target tolerance.

use crate::error::{HardyError, Result};
use crate::radial::{Domain, EndpointExponents, RadialPoint, RadialProfile};
use crate::xf::Xf;
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

/// Tolerance on exponent comparisons in the divergence classifier.
pub const EXPONENT_TOL: f64 = 1e-12;

/// `r^a (1 − (r/R)^γ)^b (ln(R/r))^c`; `radius = ∞` means the full space,
/// where only `a` may be nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeightSpec {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub gamma: f64,
    pub radius: f64,
}

impl WeightSpec {
    pub fn new(a: f64, b: f64, c: f64, gamma: f64, radius: f64) -> Self {
        WeightSpec { a, b, c, gamma, radius }
    }

    /// Pure power `r^a` on the ball of radius `radius`.
    pub fn power(a: f64, radius: f64) -> Self {
        WeightSpec { a, b: 0.0, c: 0.0, gamma: 1.0, radius }
    }

    pub fn full_space(a: f64) -> Self {
        WeightSpec { a, b: 0.0, c: 0.0, gamma: 1.0, radius: f64::INFINITY }
    }

    pub fn is_full_space(&self) -> bool {
        self.radius.is_infinite()
    }

    /// `ln w` at `pt`.
    pub fn ln_weight(&self, pt: &RadialPoint) -> f64 {
        let mut l = self.a * pt.ln_r();
        if self.b != 0.0 {
            l += self.b * pt.ln_gap(self.gamma);
        }
        if self.c != 0.0 {
            l += self.c * pt.ln_log_ratio();
        }
        l
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadratureConfig {
    /// Target relative tolerance, in `(1e-14, 1e-2)`.
    pub tol: f64,
    pub max_level: usize,
    /// Use the logarithmic endpoint substitutions (otherwise plain
    /// tanh-sinh on every panel).
    pub endpoint_substitution: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { tol: 1e-11, max_level: 9, endpoint_substitution: true }
    }
}

impl QuadratureConfig {
    pub fn with_tol(tol: f64) -> Result<Self> {
        if !(tol > 1e-14 && tol < 1e-2) {
            return Err(HardyError::Invalid(format!("tolerance {tol} outside (1e-14, 1e-2)")));
        }
        Ok(QuadratureConfig { tol, ..Default::default() })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Endpoint {
    Origin,
    Outer,
    Infinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Integral {
    Value { value: f64, error: f64 },
    Divergent { at: Endpoint },
}

impl Integral {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Integral::Value { value, .. } => Some(value),
            Integral::Divergent { .. } => None,
        }
    }

    pub fn error(&self) -> f64 {
        match *self {
            Integral::Value { error, .. } => error,
            Integral::Divergent { .. } => f64::INFINITY,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, Integral::Divergent { .. })
    }

    /// The value, or an error naming `what` when divergent.
    pub fn require(&self, what: &str) -> Result<f64> {
        self.value().ok_or_else(|| HardyError::Divergent(what.to_owned()))
    }
}

/// A nonnegative integrand magnitude `F(r)` (the weight is applied
/// separately) together with the metadata the classifier needs.
pub struct Integrand<'a> {
    pub f: &'a (dyn Fn(&RadialPoint) -> Xf + Sync),
    /// Asymptotic exponents of `F` itself.
    pub exponents: EndpointExponents,
    pub support: (f64, f64),
    pub breakpoints: Vec<f64>,
    /// Reference length for point logs (the ball radius or chart scale).
    pub scale: f64,
}

/// Decide convergence of `∫ w F` at the singular ends from declared
/// exponents alone.
pub fn classify(exps: &EndpointExponents, support: (f64, f64), w: &WeightSpec) -> Option<Endpoint> {
    if support.0 <= 0.0 {
        if let Some(e) = exps.origin {
            let total = w.a + e;
            let ok = total > -1.0 + EXPONENT_TOL || ((total + 1.0).abs() <= EXPONENT_TOL && w.c < -1.0);
            if !ok {
                return Some(Endpoint::Origin);
            }
        }
    }
    if w.is_full_space() {
        if support.1.is_infinite() {
            if let Some(e) = exps.outer {
                if w.a + e >= -1.0 - EXPONENT_TOL {
                    return Some(Endpoint::Infinity);
                }
            }
        }
    } else if support.1 >= w.radius {
        if let Some(e) = exps.outer {
            // near the sphere both 1 − (r/R)^γ and ln(R/r) are linear in R − r
            if w.b + w.c + e <= -1.0 + EXPONENT_TOL {
                return Some(Endpoint::Outer);
            }
        }
    }
    None
}

/// `∫ w(r) |u(r)|^p dr` over the support of `u`.
pub fn integrate(u: &RadialProfile, p: f64, w: &WeightSpec, cfg: &QuadratureConfig) -> Result<Integral> {
    let f = |pt: &RadialPoint| u.jet_at(pt, 0).value().abs().powf(p);
    let e = u.exponents();
    let ig = Integrand {
        f: &f,
        exponents: EndpointExponents { origin: e.origin.map(|s| p * s), outer: e.outer.map(|s| p * s) },
        support: u.support(),
        breakpoints: sign_changes(u, p),
        scale: u.domain().scale(),
    };
    integrate_fn(&ig, w, cfg)
}

/// Breakpoints of `u` plus the interior zeros where `|u|^p` is not smooth.
fn sign_changes(u: &RadialProfile, p: f64) -> Vec<f64> {
    let mut bps = u.breakpoints().to_vec();
    if !(p.fract() == 0.0 && p as i64 % 2 == 0) {
        bps.extend(u.interior_zeros());
    }
    bps
}

/// The support of a profile clipped to its domain.
pub fn profile_support(u: &RadialProfile) -> (f64, f64) {
    let (lo, hi) = u.support();
    match u.domain() {
        Domain::Ball { radius } => (lo.max(0.0), hi.min(radius)),
        Domain::FullSpace { .. } => (lo.max(0.0), hi),
    }
}

enum Panel {
    Origin { r1: f64 },
    Outer { r0: f64 },
    Infinity { r0: f64 },
    Interior { r0: f64, r1: f64 },
    /// Interior panel spanning many decades, integrated in `ln r`.
    Log { r0: f64, r1: f64 },
}

/// Relative distance below which two panel cuts are merged.
const CUT_MERGE: f64 = 1e-12;

/// Interior panels with `r₁/r₀` above this are integrated in `ln r`.
const LOG_PANEL_RATIO: f64 = 1e3;

pub fn integrate_fn(ig: &Integrand<'_>, w: &WeightSpec, cfg: &QuadratureConfig) -> Result<Integral> {
    if let Some(at) = classify(&ig.exponents, ig.support, w) {
        return Ok(Integral::Divergent { at });
    }
    let upper = if w.is_full_space() { f64::INFINITY } else { w.radius };
    let lo = ig.support.0.max(0.0);
    let hi = ig.support.1.min(upper);
    if !(hi > lo) {
        return Ok(Integral::Value { value: 0.0, error: 0.0 });
    }
    // cuts that agree to rounding would leave sliver panels with no
    // meaningful relative accuracy
    let near = |a: f64, b: f64| (a - b).abs() <= CUT_MERGE * a.abs().max(b.abs());
    let mut cuts: Vec<f64> = ig.breakpoints.iter().copied().filter(|&b| b > lo && b < hi && !near(b, lo) && !near(b, hi)).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| near(*a, *b));
    if cuts.is_empty() {
        cuts.push(if hi.is_finite() { 0.5 * (lo + hi) } else { lo.max(ig.scale) * 2.0 });
    }
    let mut nodes = vec![lo];
    nodes.extend(cuts);
    nodes.push(hi);
    let last = nodes.len() - 2;
    let panels = (0..=last).map(|i| {
        let (a, b) = (nodes[i], nodes[i + 1]);
        if i == 0 && a <= 0.0 && cfg.endpoint_substitution {
            Panel::Origin { r1: b }
        } else if i == last && b.is_infinite() {
            Panel::Infinity { r0: a }
        } else if i == last && b >= upper && cfg.endpoint_substitution {
            Panel::Outer { r0: a }
        } else if a > 0.0 && b / a > LOG_PANEL_RATIO && b < upper && cfg.endpoint_substitution {
            Panel::Log { r0: a, r1: b }
        } else {
            Panel::Interior { r0: a, r1: b }
        }
    });
    let mut value = Xf::ZERO;
    let mut error = 0.0;
    for panel in panels {
        let (v, e) = integrate_panel(ig, w, cfg, &panel)?;
        value += v;
        error += e;
    }
    let value = value.to_f64();
    Ok(Integral::Value { value, error })
}

/// Step of level 0 and the fixed left cutoff of the exp-sinh rule.
const H0: f64 = 0.5;
const EXPSINH_LEFT: f64 = 4.3;
/// exp-sinh abscissae beyond this are never generated.
const EXPSINH_CAP: f64 = 1e14;
const TANHSINH_T: f64 = 4.0;

fn integrate_panel(ig: &Integrand<'_>, w: &WeightSpec, cfg: &QuadratureConfig, panel: &Panel) -> Result<(Xf, f64)> {
    let scale = ig.scale;
    let gamma = w.gamma;
    // map a rule variable to (point, ln |dr/dvar|)
    let node = |x: f64, tail: f64| -> (RadialPoint, f64) {
        match *panel {
            Panel::Origin { r1 } => {
                let ln_rel = (r1 / scale).ln() - x;
                let pt = RadialPoint::from_ln_rel(ln_rel, scale);
                (pt, pt.ln_r())
            }
            Panel::Infinity { r0 } => {
                let ln_rel = (r0 / scale).ln() + x;
                let pt = RadialPoint { scale, ln_rel, ln_d: f64::NAN };
                (pt, pt.ln_r())
            }
            Panel::Outer { r0 } => {
                let s0 = -RadialPoint::from_r(r0, w.radius).ln_gap(gamma);
                let s = s0 + x;
                let pt = RadialPoint::from_ln_gap(-s, gamma, w.radius);
                (pt, pt.ln_r() - gamma.ln() - s - gamma * pt.ln_rel)
            }
            Panel::Interior { r0, r1 } => {
                // x is the offset from the nearer end, `tail` says which
                let r = if tail < 0.0 { r0 + x } else { r1 - x };
                let pt = if !w.is_full_space() && r1 >= w.radius && tail > 0.0 {
                    RadialPoint::from_d(x / w.radius, w.radius)
                } else {
                    RadialPoint::from_r(r, scale)
                };
                (pt, 0.0)
            }
            Panel::Log { r0, r1 } => {
                let ln_rel = if tail < 0.0 { (r0 / scale).ln() + x } else { (r1 / scale).ln() - x };
                let pt = RadialPoint::from_ln_rel(ln_rel, scale);
                (pt, pt.ln_r())
            }
        }
    };
    let term = |pt: &RadialPoint, ln_jac: f64, wde: f64| -> Xf {
        let fv = (ig.f)(pt);
        if fv.is_zero() {
            return Xf::ZERO;
        }
        fv * Xf::exp(w.ln_weight(pt) + ln_jac + wde.ln())
    };
    match *panel {
        Panel::Interior { r0, r1 } | Panel::Log { r0, r1 } => {
            let half = match *panel {
                Panel::Log { .. } => 0.5 * (r1 / r0).ln(),
                _ => 0.5 * (r1 - r0),
            };
            let eval = |t: f64| -> Xf {
                let u = FRAC_PI_2 * t.sinh();
                let wde = half * FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
                let x = if t < 0.0 { half * 2.0 / (1.0 + (-2.0 * u).exp()) } else { half * 2.0 / (1.0 + (2.0 * u).exp()) };
                let (pt, lj) = node(x, t.signum());
                if wde == 0.0 {
                    return Xf::ZERO;
                }
                term(&pt, lj, wde)
            };
            refine(&eval, -TANHSINH_T, TANHSINH_T, cfg)
        }
        _ => {
            let eval = |tau: f64| -> Xf {
                let ls = FRAC_PI_2 * tau.sinh();
                let sigma = ls.exp();
                let wde = sigma * FRAC_PI_2 * tau.cosh();
                let (pt, lj) = node(sigma, 1.0);
                term(&pt, lj, wde)
            };
            let right = (EXPSINH_CAP.ln() / FRAC_PI_2).asinh();
            let right = truncate_right(&eval, right, cfg.tol);
            refine(&eval, -EXPSINH_LEFT, right, cfg)
        }
    }
}

/// Find where the exp-sinh terms become negligible on the right.
fn truncate_right(eval: &dyn Fn(f64) -> Xf, cap: f64, tol: f64) -> f64 {
    let mut sum = Xf::ZERO;
    let mut t = -EXPSINH_LEFT;
    while t <= 0.0 {
        sum += eval(t).abs();
        t += H0;
    }
    let mut small = 0;
    let thresh = tol * 1e-4;
    while t < cap {
        let v = eval(t).abs();
        sum += v;
        if v <= sum.scale(thresh) {
            small += 1;
            if small >= 3 {
                return t;
            }
        } else {
            small = 0;
        }
        t += H0;
    }
    cap
}

/// Trapezoidal sums on `[a, b]` with halving step until two levels agree.
fn refine(eval: &dyn Fn(f64) -> Xf, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<(Xf, f64)> {
    let check = |v: Xf| -> Result<Xf> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(HardyError::NotConverged { estimate: f64::NAN, error: f64::INFINITY })
        }
    };
    // the grid ends exactly at `b`: nodes past the exp-sinh cutoff lose
    // the weight to cancellation
    let n0 = ((b - a) / H0).ceil().max(1.0) as i64;
    let mut h = (b - a) / n0 as f64;
    let mut sum = Xf::ZERO;
    for i in 0..=n0 {
        sum += check(eval(a + i as f64 * h))?;
    }
    let mut prev = sum.scale(h);
    let mut err = f64::INFINITY;
    for level in 1..=cfg.max_level {
        h *= 0.5;
        let n = n0 << level;
        let mut add = Xf::ZERO;
        for i in (1..n).step_by(2) {
            add += check(eval(a + i as f64 * h))?;
        }
        sum += add;
        let cur = sum.scale(h);
        let diff = (cur - prev).abs();
        err = diff.to_f64();
        let ok = diff <= cur.abs().scale(cfg.tol) || cur.is_zero();
        if ok && level >= 2 {
            return Ok((cur, err));
        }
        prev = cur;
    }
    Err(HardyError::NotConverged { estimate: prev.to_f64(), error: err })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(_: &RadialPoint) -> Xf {
        Xf::ONE
    }

    fn unit(exps: EndpointExponents) -> Integrand<'static> {
        Integrand { f: &one, exponents: exps, support: (0.0, 1.0), breakpoints: vec![], scale: 1.0 }
    }

    #[test]
    fn beta_moment() {
        let ig = unit(EndpointExponents { origin: Some(0.0), outer: Some(0.0) });
        let w = WeightSpec::new(2.0, 3.0, 0.0, 1.0, 1.0);
        let v = integrate_fn(&ig, &w, &QuadratureConfig::default()).unwrap().value().unwrap();
        assert!((v - 1.0 / 60.0).abs() < 1e-13, "{v}");
    }

    #[test]
    fn divergent_ends() {
        let ig = unit(EndpointExponents { origin: Some(0.0), outer: Some(0.0) });
        let w = WeightSpec::new(-1.0, -1.0, 0.0, 1.0, 1.0);
        assert!(integrate_fn(&ig, &w, &QuadratureConfig::default()).unwrap().is_divergent());
    }

    #[test]
    fn strong_singularities() {
        let ig = unit(EndpointExponents { origin: Some(0.0), outer: Some(0.0) });
        // B(0.002, 0.003)
        let w = WeightSpec::new(-0.998, -0.997, 0.0, 1.0, 1.0);
        let v = integrate_fn(&ig, &w, &QuadratureConfig::default()).unwrap().value().unwrap();
        let want = 833.325_138_636_148_7;
        assert!((v / want - 1.0).abs() < 1e-9, "{v}");
    }
}
