//! Radial changes of variables between the ball, the full space and the
//! log-weighted ball.
//!
//! All three charts share the coordinate `s = |y|^{−γ}`:
//! `s = r^{−γ} − R^{−γ}` on the ball, `s = r^{−γ}` on `ℝ^N` and
//! `s = ln(R/r)` on the log ball. Maps are carried out on `ln s`, which keeps
//! both boundary layers resolved.

use crate::constants::sphere_area;
use crate::error::{HardyError, Result};
use crate::jet::Jet;
use crate::quadrature::{integrate, Integral, QuadratureConfig, WeightSpec};
use crate::radial::{apply_grad_k, Domain, EndpointExponents, RadialPoint, RadialProfile, RadialVar};
use crate::xf::Xf;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Chart {
    /// `x ∈ B_R` with weights in `1 − (|x|/R)^γ`.
    Ball,
    /// `y ∈ ℝ^N` with pure power weights.
    FullSpace,
    /// `z ∈ B_R` with weights in `log(R/|z|)`.
    LogBall,
}

impl Chart {
    pub const ALL: [Chart; 3] = [Chart::Ball, Chart::FullSpace, Chart::LogBall];

    pub fn domain(self, radius: f64) -> Domain {
        match self {
            Chart::FullSpace => Domain::FullSpace { scale: radius },
            _ => Domain::Ball { radius },
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chart::Ball => "ball",
            Chart::FullSpace => "full-space",
            Chart::LogBall => "log-ball",
        })
    }
}

impl FromStr for Chart {
    type Err = HardyError;
    fn from_str(s: &str) -> Result<Self> {
        Chart::ALL
            .into_iter()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| HardyError::Invalid(format!("unknown chart `{s}`")))
    }
}

/// `ln(1 + e^x)` without overflow.
fn ln1p_exp(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Geometry of one chart for fixed `γ` and `R`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Geometry {
    chart: Chart,
    gamma: f64,
    radius: f64,
}

impl Geometry {
    fn upper(&self) -> f64 {
        self.chart.domain(self.radius).upper()
    }

    fn check(&self, r: f64) -> Result<()> {
        if r > 0.0 && r < self.upper() {
            Ok(())
        } else {
            Err(HardyError::Domain { r, limit: self.upper() })
        }
    }

    fn ln_s(&self, pt: &RadialPoint) -> f64 {
        let (g, lr) = (self.gamma, self.radius.ln());
        match self.chart {
            Chart::Ball => -g * lr + pt.ln_gap(g) - g * pt.ln_rel,
            Chart::FullSpace => -g * pt.ln_r(),
            Chart::LogBall => pt.ln_log_ratio(),
        }
    }

    fn point(&self, ln_s: f64) -> RadialPoint {
        let (g, r) = (self.gamma, self.radius);
        match self.chart {
            Chart::Ball => {
                // (r/R)^{−γ} = 1 + t with t = R^γ s
                let ln_t = g * r.ln() + ln_s;
                if ln_t < 0.0 {
                    RadialPoint::from_ln_gap(ln_t - ln1p_exp(ln_t), g, r)
                } else {
                    let ln_rel = -ln1p_exp(ln_t) / g;
                    RadialPoint { scale: r, ln_rel, ln_d: (-ln_rel.exp_m1()).ln() }
                }
            }
            Chart::FullSpace => RadialPoint::from_ln_rel(-ln_s / g - r.ln(), r),
            Chart::LogBall => {
                let l = ln_s.exp();
                let ln_d = if ln_s < -30.0 { ln_s + (-l / 2.0).ln_1p() } else { (-(-l).exp_m1()).ln() };
                RadialPoint { scale: r, ln_rel: -l, ln_d }
            }
        }
    }

    /// Jet of `s` in the chart variable.
    fn s_jet(&self, var: &RadialVar) -> Jet {
        let g = self.gamma;
        match self.chart {
            Chart::Ball => var.inverted_gap(g).scale(self.radius.powf(-g)),
            Chart::FullSpace => var.r.powf(-g),
            Chart::LogBall => var.log_ratio(),
        }
    }

    /// Jet of `r` as a function of `s`.
    fn r_jet(&self, s: &Jet) -> Jet {
        let g = self.gamma;
        match self.chart {
            Chart::Ball => s.add_const(self.radius.powf(-g)).powf(-1.0 / g),
            Chart::FullSpace => s.powf(-1.0 / g),
            Chart::LogBall => (-*s).exp().scale(self.radius),
        }
    }

    /// Exponent of `u` in `s` as `s → ∞` (the origin) from the origin
    /// exponent, or `None` for logarithmic behaviour.
    fn origin_to_s(&self, e: Option<f64>) -> Option<Option<f64>> {
        match (self.chart, e) {
            (_, None) => Some(None),
            (Chart::LogBall, Some(s)) => (s == 0.0).then_some(Some(0.0)),
            (_, Some(s)) => Some(Some(-s / self.gamma)),
        }
    }

    fn origin_from_s(&self, e: Option<Option<f64>>) -> Option<f64> {
        match (self.chart, e) {
            (_, Some(None)) => None,
            // logarithmic behaviour counts as order zero in r
            (Chart::LogBall, _) | (_, None) => Some(0.0),
            (_, Some(Some(s))) => Some(-self.gamma * s),
        }
    }

    /// Exponent of `u` in `s` as `s → 0` (the outer end).
    fn outer_to_s(&self, e: Option<f64>) -> Option<f64> {
        match self.chart {
            Chart::FullSpace => e.map(|t| -t / self.gamma),
            _ => e,
        }
    }

    fn outer_from_s(&self, e: Option<f64>) -> Option<f64> {
        match self.chart {
            Chart::FullSpace => e.map(|s| -self.gamma * s),
            _ => e,
        }
    }
}

/// A monotone radial map `r ↦ r′` between two charts, optionally composed
/// with the scaling `s ↦ λ^{−γ} s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChartMap {
    pub from: Chart,
    pub to: Chart,
    pub gamma: f64,
    pub radius: f64,
    /// `ln(s′/s)`.
    pub ln_s_shift: f64,
}

impl ChartMap {
    fn geo(&self, chart: Chart) -> Geometry {
        Geometry { chart, gamma: self.gamma, radius: self.radius }
    }

    pub fn inverse_map(&self) -> ChartMap {
        ChartMap { from: self.to, to: self.from, ln_s_shift: -self.ln_s_shift, ..*self }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &ChartMap) -> Result<ChartMap> {
        if self.to != next.from || self.gamma != next.gamma || self.radius != next.radius {
            return Err(HardyError::Invalid("maps do not compose".into()));
        }
        Ok(ChartMap { from: self.from, to: next.to, ln_s_shift: self.ln_s_shift + next.ln_s_shift, ..*self })
    }

    pub fn forward_point(&self, pt: &RadialPoint) -> RadialPoint {
        let ln_s = self.geo(self.from).ln_s(pt) + self.ln_s_shift;
        self.geo(self.to).point(ln_s)
    }

    pub fn forward(&self, r: f64) -> Result<f64> {
        let src = self.geo(self.from);
        src.check(r)?;
        Ok(self.forward_point(&RadialPoint::from_r(r, self.radius)).r_f64())
    }

    pub fn inverse(&self, r: f64) -> Result<f64> {
        self.inverse_map().forward(r)
    }

    /// Image of an interval in the closure of the source chart.
    fn map_interval(&self, (lo, hi): (f64, f64)) -> (f64, f64) {
        let src = self.geo(self.from);
        let dst = self.geo(self.to);
        let end = |r: f64| {
            if r <= 0.0 {
                0.0
            } else if r >= src.upper() {
                dst.upper()
            } else {
                self.forward_point(&RadialPoint::from_r(r, self.radius)).r_f64()
            }
        };
        (end(lo), end(hi))
    }
}

/// Map between two charts for `γ > 0`, `R > 0`.
pub fn radius_map(from: Chart, to: Chart, gamma: f64, radius: f64) -> Result<ChartMap> {
    if !(gamma > 0.0) {
        return Err(HardyError::Inadmissible { form: "radius map".into(), hypothesis: "γ > 0".into() });
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(HardyError::Inadmissible { form: "radius map".into(), hypothesis: "R > 0".into() });
    }
    Ok(ChartMap { from, to, gamma, radius, ln_s_shift: 0.0 })
}

/// `v(r′) = u(inverse(r′))` on the target chart, derivatives by the chain
/// rule.
pub fn pushforward(u: &RadialProfile, map: &ChartMap) -> RadialProfile {
    let src = map.geo(map.from);
    let dst = map.geo(map.to);
    let shift = map.ln_s_shift;
    let inner = u.clone();
    let f = move |var: &RadialVar| {
        let ln_s = dst.ln_s(&var.point) - shift;
        let pt = src.point(ln_s);
        let s = dst.s_jet(var).scale(1.0 / shift.exp()).with_value(Xf::exp(ln_s));
        let r = src.r_jet(&s).with_value(pt.r());
        inner.apply(&RadialVar { point: pt, r })
    };
    let e = u.exponents();
    let exps = EndpointExponents {
        origin: dst.origin_from_s(src.origin_to_s(e.origin)),
        outer: dst.outer_from_s(src.outer_to_s(e.outer)),
    };
    let (lo, hi) = map.map_interval(u.support());
    let bps = u.breakpoints().iter().map(|&b| map.map_interval((b, b)).0).collect();
    RadialProfile::new(format!("{}→{}[{}]", map.from, map.to, u.label()), dst.chart.domain(map.radius), (lo, hi), exps, u.order(), f)
        .with_breakpoints(bps)
}

/// The scaling `r ↦ r̃` of a chart, acting as `s ↦ λ^{−γ} s`.
pub fn scaling_map(lambda: f64, gamma: f64, radius: f64, chart: Chart) -> Result<ChartMap> {
    if !(lambda > 0.0) {
        return Err(HardyError::Inadmissible { form: "scaling map".into(), hypothesis: "λ > 0".into() });
    }
    let m = radius_map(chart, chart, gamma, radius)?;
    Ok(ChartMap { ln_s_shift: -gamma * lambda.ln(), ..m })
}

/// `λ^{(N−α)/p} u(x̃)` on the ball or full space, `μ^{−(β−1)/p} w(z̃)` with
/// `μ = λ^{−γ}` on the log ball.
#[allow(clippy::too_many_arguments)]
pub fn scaled_profile(
    u: &RadialProfile,
    lambda: f64,
    chart: Chart,
    n: u32,
    p: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Result<RadialProfile> {
    let radius = u.domain().scale();
    let map = scaling_map(lambda, gamma, radius, chart)?;
    let pre = match chart {
        Chart::LogBall => lambda.powf(-gamma).powf(-(beta - 1.0) / p),
        _ => lambda.powf((n as f64 - alpha) / p),
    };
    Ok(pushforward(u, &map.inverse_map()).scaled(pre).with_label(format!("{}_λ={lambda}", u.label())))
}

/// Weights of both integrals of the improved Hardy inequality in a chart,
/// with the chart factor.
fn chart_weights(chart: Chart, n: u32, p: f64, alpha: f64, beta: f64, gamma: f64, radius: f64) -> [(WeightSpec, f64); 2] {
    let nm1 = n as f64 - 1.0;
    match chart {
        Chart::Ball => [
            (WeightSpec::new(nm1 + p - alpha, p - beta, 0.0, gamma, radius), 1.0),
            (WeightSpec::new(nm1 - alpha, -beta, 0.0, gamma, radius), 1.0),
        ],
        Chart::FullSpace => [(WeightSpec::full_space(nm1 + p - alpha), 1.0), (WeightSpec::full_space(nm1 - alpha), 1.0)],
        Chart::LogBall => [
            (WeightSpec::new(p - 1.0, 0.0, p - beta, 1.0, radius), gamma.powf(p - 1.0)),
            (WeightSpec::new(-1.0, 0.0, -beta, 1.0, radius), 1.0 / gamma),
        ],
    }
}

/// Gradient-side and mass-side integrals of `v` in `chart`.
#[allow(clippy::too_many_arguments)]
pub fn chart_integrals(
    v: &RadialProfile,
    chart: Chart,
    n: u32,
    p: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    cfg: &QuadratureConfig,
) -> Result<[f64; 2]> {
    let [(wg, fg), (wm, fm)] = chart_weights(chart, n, p, alpha, beta, gamma, v.domain().scale());
    let omega = sphere_area(n);
    let grad = integrate(&apply_grad_k(v, 1, n)?, p, &wg, cfg)?;
    let mass = integrate(v, p, &wm, cfg)?;
    let req = |i: Integral, what: &str| i.require(&format!("{what} in the {chart} chart"));
    Ok([fg * omega * req(grad, "gradient integral")?, fm * omega * req(mass, "mass integral")?])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TransplantResiduals {
    pub residual_grad: f64,
    pub residual_mass: f64,
    /// `[ball, full space, log ball]`.
    pub grad: [f64; 3],
    pub mass: [f64; 3],
}

fn max_pairwise(v: &[f64; 3]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in i + 1..3 {
            let scale = v[i].abs().max(v[j].abs());
            if scale > 0.0 {
                worst = worst.max((v[i] - v[j]).abs() / scale);
            }
        }
    }
    worst
}

/// Recompute both integrals of the critical improved Hardy inequality in
/// all three charts, `γ = (N−α)/(β−1)`.
#[allow(clippy::too_many_arguments)]
pub fn verify_transplant_equivalence(
    u: &RadialProfile,
    n: u32,
    p: f64,
    alpha: f64,
    beta: f64,
    radius: f64,
    cfg: &QuadratureConfig,
) -> Result<TransplantResiduals> {
    if !(beta > 1.0 && alpha < n as f64) {
        return Err(HardyError::Inadmissible { form: "transplant".into(), hypothesis: "β > 1 and α < N".into() });
    }
    if u.domain() != (Domain::Ball { radius }) {
        return Err(HardyError::Invalid("profile must live on the ball chart".into()));
    }
    let gamma = (n as f64 - alpha) / (beta - 1.0);
    let mut grad = [0.0; 3];
    let mut mass = [0.0; 3];
    for (i, chart) in Chart::ALL.into_iter().enumerate() {
        let v = pushforward(u, &radius_map(Chart::Ball, chart, gamma, radius)?);
        [grad[i], mass[i]] = chart_integrals(&v, chart, n, p, alpha, beta, gamma, cfg)?;
    }
    Ok(TransplantResiduals { residual_grad: max_pairwise(&grad), residual_mass: max_pairwise(&mass), grad, mass })
}
