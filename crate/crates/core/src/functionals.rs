//! Rayleigh quotients, remainder terms and the exact remainder identity.

use crate::constants::{sphere_area, t_rad_constant, Form, InequalityParams};
use crate::error::{HardyError, Result};
use crate::quadrature::{integrate, integrate_fn, Integral, Integrand, QuadratureConfig, WeightSpec};
use crate::radial::{apply_grad_k, virtual_extremal, EndpointExponents, RadialPoint, RadialProfile};
use crate::xf::Xf;
use serde::Serialize;

/// One side of an inequality: `coef · ∫ w |∇^order u|^p dx`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Term {
    pub order: usize,
    /// Weight with respect to `dx` (or `dr` for one-dimensional forms).
    pub weight: WeightSpec,
    pub coef: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Layout {
    /// Left-hand integral, without the sharp constant.
    pub den: Term,
    /// Right-hand integral.
    pub num: Term,
    pub one_dim: bool,
}

/// Integrals of each form as displayed, in radial variables.
pub fn layout(params: &InequalityParams) -> Layout {
    let (p, a, b, g, r) = (params.p(), params.alpha(), params.beta(), params.gamma(), params.radius());
    let k = params.k() as usize;
    let kp = k as f64 * p;
    let w = |a: f64, b: f64, c: f64, gamma: f64| WeightSpec::new(a, b, c, gamma, r);
    let t = |order: usize, weight: WeightSpec| Term { order, weight, coef: 1.0 };
    let (den, num) = match params.form() {
        Form::ClassicalHardy => (t(0, w(-a, 0.0, 0.0, 1.0)), t(1, w(p - a, 0.0, 0.0, 1.0))),
        Form::GeometricHardy => (
            Term { order: 0, weight: w(0.0, -b, 0.0, 1.0), coef: r.powf(-b) },
            Term { order: 1, weight: w(0.0, p - b, 0.0, 1.0), coef: r.powf(p - b) },
        ),
        Form::ImprovedHardy => (t(0, w(-a, -b, 0.0, g)), t(1, w(p - a, p - b, 0.0, g))),
        Form::ImprovedHardyA => (t(0, w(-a, -b, 0.0, g)), t(1, w(p - a, -b, 0.0, g))),
        Form::ImprovedHardyB => (t(0, w(g - a, -b, 0.0, g)), t(1, w(-(a - g + (g - 1.0) * p), p - b, 0.0, g))),
        Form::LogHardy => (t(0, w(-a, 0.0, -b, 1.0)), t(1, w(p - a, 0.0, p - b, 1.0))),
        Form::Rellich => (t(0, w(-a, 0.0, 0.0, 1.0)), t(k, w(kp - a, 0.0, 0.0, 1.0))),
        Form::GeometricRellich => (
            Term { order: 0, weight: w(0.0, -2.0 * k as f64, 0.0, 1.0), coef: r.powf(-2.0 * k as f64) },
            t(k, w(0.0, 0.0, 0.0, 1.0)),
        ),
        Form::ImprovedRellichP2 => (t(0, w(-a, -2.0, 0.0, g)), t(2, w(4.0 - a, 0.0, 0.0, g))),
        Form::ImprovedRellichBP2 => (t(0, w(-a, -4.0, 0.0, g)), t(2, w(4.0 - a, 0.0, 0.0, g))),
        Form::ImprovedRellichKP2 => (t(0, w(-a, -2.0, 0.0, g)), t(k, w(kp - a, 0.0, 0.0, g))),
        Form::ImprovedRellichRad => (t(0, w(-a, -p, 0.0, g)), t(k, w(kp - a, 0.0, 0.0, g))),
        Form::ImprovedRellichRadB => (t(0, w(-a, -b, 0.0, g)), t(k, w(kp - a, kp - b, 0.0, g))),
        Form::CriticalRellich => (t(0, w(-a, 0.0, -p, 1.0)), t(k, w(kp - a, 0.0, 0.0, 1.0))),
        Form::OneDimHardy => (t(0, w(a - p, 0.0, 0.0, 1.0)), t(1, w(a, 0.0, 0.0, 1.0))),
        Form::OneDimImprovedHardy => (t(0, w(a, -b, 0.0, g)), t(1, w(a + p, p - b, 0.0, g))),
        Form::HardyRellichStep => (t(1, w(-a, 0.0, 0.0, 1.0)), t(2, w(p - a, 0.0, 0.0, 1.0))),
        Form::ImprovedHardyRellichStep => (t(1, w(-a, -b, 0.0, g)), t(2, w(p - a, p - b, 0.0, g))),
    };
    Layout { den, num, one_dim: params.form().is_one_dim() }
}

/// `coef · ∫ w |∇^order u|^p dx` with the sphere area applied.
pub fn term_integral(u: &RadialProfile, term: &Term, p: f64, n: u32, one_dim: bool, cfg: &QuadratureConfig) -> Result<Integral> {
    let g = if term.order == 0 { u.clone() } else { apply_grad_k(u, term.order, n)? };
    let mut w = term.weight;
    let mut factor = term.coef;
    if !one_dim {
        w.a += n as f64 - 1.0;
        factor *= sphere_area(n);
    }
    Ok(match integrate(&g, p, &w, cfg)? {
        Integral::Value { value, error } => Integral::Value { value: factor * value, error: factor * error },
        d => d,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuotientReport {
    pub form: String,
    /// Right-hand integral; `None` when divergent.
    pub numerator: Option<f64>,
    /// Left-hand integral without the constant; `None` when divergent.
    pub denominator: Option<f64>,
    pub quotient: f64,
    pub sharp_constant: f64,
    /// `quotient / sharp_constant − 1`.
    pub relative_gap: f64,
    pub numerator_divergent: bool,
    pub denominator_divergent: bool,
    /// Relative error bound on the quotient from both quadratures.
    pub error_bound: f64,
}

impl QuotientReport {
    fn assemble(form: String, num: Integral, den: Integral, den_power: f64, sharp: f64) -> Self {
        let (nv, dv) = (num.value(), den.value());
        let quotient = match (nv, dv) {
            (_, None) => f64::NAN,
            (None, Some(_)) => f64::INFINITY,
            (Some(n), Some(d)) => n / d.powf(den_power),
        };
        let rel = |i: &Integral| match i.value() {
            Some(v) if v != 0.0 => i.error() / v.abs(),
            _ => 0.0,
        };
        QuotientReport {
            form,
            numerator: nv,
            denominator: dv,
            quotient,
            sharp_constant: sharp,
            relative_gap: quotient / sharp - 1.0,
            numerator_divergent: num.is_divergent(),
            denominator_divergent: den.is_divergent(),
            error_bound: rel(&num) + den_power * rel(&den),
        }
    }
}

/// Both integrals of the selected form.
pub fn form_integrals(u: &RadialProfile, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<(Integral, Integral)> {
    let lay = layout(params);
    let den = term_integral(u, &lay.den, params.p(), params.n(), lay.one_dim, cfg)?;
    let num = term_integral(u, &lay.num, params.p(), params.n(), lay.one_dim, cfg)?;
    Ok((den, num))
}

/// The quotient of any form.
pub fn quotient(u: &RadialProfile, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<QuotientReport> {
    let (den, num) = form_integrals(u, params, cfg)?;
    Ok(QuotientReport::assemble(params.form().to_string(), num, den, 1.0, params.sharp_constant()))
}

/// Quotient of a first-order (Hardy type) form.
pub fn hardy_quotient(u: &RadialProfile, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<QuotientReport> {
    if !params.form().is_first_order() {
        return Err(HardyError::Unsupported(format!("{} is a higher-order form", params.form())));
    }
    quotient(u, params, cfg)
}

/// Quotient of a higher-order (Rellich type) form.
pub fn rellich_quotient(u: &RadialProfile, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<QuotientReport> {
    if params.form().is_first_order() {
        return Err(HardyError::Unsupported(format!("{} is a first-order form", params.form())));
    }
    quotient(u, params, cfg)
}

/// `(1/p)|η|^p + ((p−1)/p)|ξ|^p − |ξ|^{p−2}ξη`.
pub fn rp_bregman(xi: f64, eta: f64, p: f64) -> f64 {
    let cross = if xi == 0.0 { 0.0 } else { xi.abs().powf(p - 2.0) * xi * eta };
    eta.abs().powf(p) / p + (p - 1.0) / p * xi.abs().powf(p) - cross
}

fn rp_bregman_xf(xi: Xf, eta: Xf, p: f64) -> Xf {
    let cross = if xi.is_zero() { Xf::ZERO } else { xi.abs().powf(p - 2.0) * xi * eta };
    eta.abs().powf(p).scale(1.0 / p) + xi.abs().powf(p).scale((p - 1.0) / p) - cross
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Psi {
    pub value: f64,
    pub critical: bool,
}

fn improved_hardy_gate(params: &InequalityParams) -> Result<()> {
    if params.form() != Form::ImprovedHardy {
        return Err(HardyError::Unsupported("the remainder is defined for improved-hardy".into()));
    }
    if params.p() <= 1.0 {
        return Err(HardyError::Inadmissible { form: "improved-hardy remainder".into(), hypothesis: "p > 1".into() });
    }
    Ok(())
}

/// Whether `α = N − (β−1)γ` up to rounding.
pub fn on_critical_line(params: &InequalityParams) -> bool {
    let bound = params.nf() - (params.beta() - 1.0) * params.gamma();
    (params.alpha() - bound).abs() <= 1e-12 * bound.abs().max(1.0)
}

/// The remainder `ψ(u)`; in the critical case the unspecified constant is
/// `c0`.
pub fn remainder_psi(u: &RadialProfile, params: &InequalityParams, c0: f64, cfg: &QuadratureConfig) -> Result<Psi> {
    improved_hardy_gate(params)?;
    let (n, p, a, b, g, r) = (params.n(), params.p(), params.alpha(), params.beta(), params.gamma(), params.radius());
    let nf = n as f64;
    let c1 = (b - 1.0) * g / p;
    if !on_critical_line(params) {
        let w = WeightSpec::new(nf - 1.0 - a, 1.0 - b, 0.0, g, r);
        let i = integrate(u, p, &w, cfg)?.require("ψ mass")?;
        let value = (nf - a - (b - 1.0) * g) * c1.powf(p - 1.0) * sphere_area(n) * i;
        return Ok(Psi { value, critical: false });
    }
    let v = virtual_extremal(p, b, g, r);
    let (ue, ve) = (u.exponents(), v.exponents());
    let exps = EndpointExponents {
        origin: ue.origin.map(|s| s - ve.origin.unwrap_or(0.0)),
        outer: ue.outer.map(|s| s - ve.outer.unwrap_or(0.0)),
    };
    let num = u.clone();
    let ratio = RadialProfile::new("u/v", u.domain(), u.support(), exps, u.order(), move |var| num.apply(var) / v.apply(var))
        .with_breakpoints(u.breakpoints().to_vec());
    let dratio = apply_grad_k(&ratio, 1, n)?;
    let w = WeightSpec::new(p - 1.0, p - 1.0, 0.0, g, r);
    let grad = integrate(&dratio, p, &w, cfg)?.require("ψ gradient")? * sphere_area(n);
    let value = if p >= 2.0 {
        c0 * grad
    } else {
        // the p-homogeneous combination of the two integrals
        let lay = layout(params);
        let rhs = term_integral(u, &lay.num, p, n, false, cfg)?.require("right-hand side")?;
        c0 * grad.powf(2.0 / p) * rhs.powf((p - 2.0) / p)
    };
    Ok(Psi { value, critical: true })
}

/// All four terms of the exact remainder identity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdentityTerms {
    pub lhs: f64,
    pub main: f64,
    pub bregman: f64,
    pub subcritical: f64,
    pub residual: f64,
}

/// `|LHS − RHS| / max(|LHS|, |RHS|)` for the exact remainder identity of the
/// improved Hardy inequality.
pub fn verify_remainder_identity(u: &RadialProfile, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(remainder_identity_terms(u, params, cfg)?.residual)
}

pub fn remainder_identity_terms(u: &RadialProfile, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<IdentityTerms> {
    improved_hardy_gate(params)?;
    let (n, p, a, b, g, r) = (params.n(), params.p(), params.alpha(), params.beta(), params.gamma(), params.radius());
    let nf = n as f64;
    let omega = sphere_area(n);
    let c1 = (b - 1.0) * g / p;
    let sharp = c1.powf(p);
    let lay = layout(params);
    let mass = term_integral(u, &lay.den, p, n, false, cfg)?.require("left-hand side")?;
    let main = term_integral(u, &lay.num, p, n, false, cfg)?.require("gradient term")?;
    let sub_w = WeightSpec::new(nf - 1.0 - a, 1.0 - b, 0.0, g, r);
    let sub = integrate(u, p, &sub_w, cfg)?.require("subcritical term")? * omega;
    let f = |pt: &RadialPoint| {
        let j = u.jet_at(pt, 1);
        let xi = j.value();
        let eta = -j.deriv(1) * pt.r() * Xf::exp(pt.ln_gap(g)).scale(1.0 / c1);
        rp_bregman_xf(xi, eta, p)
    };
    let e = u.exponents();
    let ig = Integrand {
        f: &f,
        exponents: EndpointExponents { origin: e.origin.map(|s| p * s), outer: e.outer.map(|s| p * s) },
        support: u.support(),
        // the Bregman term inherits the kinks of |u'|^p
        breakpoints: apply_grad_k(u, 1, n)?.breakpoints().to_vec(),
        scale: r,
    };
    let breg = integrate_fn(&ig, &WeightSpec::new(nf - 1.0 - a, -b, 0.0, g, r), cfg)?.require("Bregman term")? * omega;
    let lhs = sharp * mass;
    let bregman = p * sharp * breg;
    let subcritical = (nf - a - (b - 1.0) * g) * c1.powf(p - 1.0) * sub;
    let rhs = main - bregman - subcritical;
    let scale = lhs.abs().max(rhs.abs());
    let residual = if scale == 0.0 { 0.0 } else { (lhs - rhs).abs() / scale };
    Ok(IdentityTerms { lhs, main, bregman, subcritical, residual })
}

/// Quotient of the radial improved Hardy–Sobolev problem,
/// `∫|u'|^p w₁ / (∫|u|^q w₂)^{p/q}`.
#[allow(clippy::too_many_arguments)]
pub fn hs_quotient(
    u: &RadialProfile,
    n: u32,
    p: f64,
    q: f64,
    alpha: f64,
    beta: f64,
    radius: f64,
    cfg: &QuadratureConfig,
) -> Result<QuotientReport> {
    if !(beta > 1.0) {
        return Err(HardyError::Inadmissible { form: "t-rad".into(), hypothesis: "β > 1".into() });
    }
    let sharp = t_rad_constant(n, p, q, alpha)?;
    let nf = n as f64;
    let g = (nf - alpha) / (beta - 1.0);
    let omega = sphere_area(n);
    let grad = apply_grad_k(u, 1, n)?;
    let scale = |i: Integral| match i {
        Integral::Value { value, error } => Integral::Value { value: omega * value, error: omega * error },
        d => d,
    };
    let num = scale(integrate(&grad, p, &WeightSpec::new(nf - 1.0 + p - alpha, p - beta, 0.0, g, radius), cfg)?);
    let wd = WeightSpec::new(nf - 1.0 - (nf - q / p * (nf - alpha)), -(1.0 + (beta - 1.0) * q / p), 0.0, g, radius);
    let den = scale(integrate(u, q, &wd, cfg)?);
    Ok(QuotientReport::assemble("t-rad".into(), num, den, p / q, sharp))
}
