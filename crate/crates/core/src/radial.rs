//! Radial profiles `r ↦ u(r)` and their derivatives.
//!
//! A profile is a closure from a [`RadialVar`] to a [`Jet`]: the jet's
//! order is whatever the caller's variable carries, so one closure serves
//! point values, derivatives and iterated Laplacians alike. Points carry
//! `ln(r/R)` and `ln(1 − r/R)` separately, which keeps boundary layers
//! resolvable far below `f64::MIN_POSITIVE`.

use crate::error::{HardyError, Result};
use crate::jet::{Jet, MAX_ORDER};
use crate::xf::Xf;
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

/// Below this `ln d` the boundary gap is expanded in series.
const SERIES_LN: f64 = -30.0;

/// A radius known through logarithms relative to a reference `scale`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialPoint {
    pub scale: f64,
    /// `ln(r / scale)`.
    pub ln_rel: f64,
    /// `ln(1 − r / scale)`; NaN when `r ≥ scale`.
    pub ln_d: f64,
}

impl RadialPoint {
    pub fn from_r(r: f64, scale: f64) -> Self {
        let rel = r / scale;
        if rel > 0.5 && r < scale {
            let d = (scale - r) / scale;
            RadialPoint { scale, ln_rel: (-d).ln_1p(), ln_d: d.ln() }
        } else {
            let ln_d = if rel < 1.0 { (-rel).ln_1p() } else { f64::NAN };
            RadialPoint { scale, ln_rel: rel.ln(), ln_d }
        }
    }

    /// From the relative distance `d = 1 − r/scale`.
    pub fn from_d(d: f64, scale: f64) -> Self {
        RadialPoint { scale, ln_rel: (-d).ln_1p(), ln_d: d.ln() }
    }

    pub fn from_ln_rel(ln_rel: f64, scale: f64) -> Self {
        let ln_d = if ln_rel < 0.0 { (-ln_rel.exp_m1()).ln() } else { f64::NAN };
        RadialPoint { scale, ln_rel, ln_d }
    }

    pub fn from_ln_d(ln_d: f64, scale: f64) -> Self {
        RadialPoint { scale, ln_rel: (-ln_d.exp()).ln_1p(), ln_d }
    }

    /// From `ln g` where `g = 1 − (r/scale)^γ`.
    pub fn from_ln_gap(ln_g: f64, gamma: f64, scale: f64) -> Self {
        let g = ln_g.exp();
        let ln_rel = (-g).ln_1p() / gamma;
        let ln_d = if ln_g < SERIES_LN {
            let s = 1.0 / gamma;
            ln_g + s.ln() + (-(s - 1.0) * g / 2.0).ln_1p()
        } else {
            (-ln_rel.exp_m1()).ln()
        };
        RadialPoint { scale, ln_rel, ln_d }
    }

    pub fn r(&self) -> Xf {
        Xf::exp(self.ln_rel).scale(self.scale)
    }

    pub fn r_f64(&self) -> f64 {
        self.scale * self.ln_rel.exp()
    }

    pub fn ln_r(&self) -> f64 {
        self.ln_rel + self.scale.ln()
    }

    /// `1 − r/scale` as an extended float.
    pub fn d(&self) -> Xf {
        Xf::exp(self.ln_d)
    }

    /// `ln(1 − (r/scale)^γ)`.
    pub fn ln_gap(&self, gamma: f64) -> f64 {
        if self.ln_d < SERIES_LN {
            let d = self.ln_d.exp();
            gamma.ln() + self.ln_d + (-(gamma - 1.0) * d / 2.0).ln_1p()
        } else {
            (-(gamma * self.ln_rel).exp_m1()).ln()
        }
    }

    /// `ln ln(scale/r)`.
    pub fn ln_log_ratio(&self) -> f64 {
        if self.ln_d < SERIES_LN {
            self.ln_d + (self.ln_d.exp() / 2.0).ln_1p()
        } else {
            (-self.ln_rel).ln()
        }
    }
}

/// The independent variable handed to profile closures: a point plus the
/// jet of `r` itself, whose order sets the order of the returned jet.
#[derive(Clone, Copy, Debug)]
pub struct RadialVar {
    pub point: RadialPoint,
    pub r: Jet,
}

impl RadialVar {
    pub fn new(point: RadialPoint, order: usize) -> Self {
        RadialVar { point, r: Jet::variable(point.r(), order) }
    }

    pub fn order(&self) -> usize {
        self.r.order()
    }

    pub fn with_order(&self, order: usize) -> Self {
        RadialVar::new(self.point, order)
    }

    pub fn rel(&self) -> Jet {
        self.r.scale(1.0 / self.point.scale)
    }

    /// `1 − (r/scale)^γ` with an accurate constant term.
    pub fn gap(&self, gamma: f64) -> Jet {
        let g = (-self.rel().powf(gamma)).add_const(1.0);
        g.with_value(Xf::exp(self.point.ln_gap(gamma)))
    }

    /// `(r/scale)^{−γ} − 1`, accurate on both ends.
    pub fn inverted_gap(&self, gamma: f64) -> Jet {
        self.gap(gamma) / self.rel().powf(gamma)
    }

    /// `ln(scale/r)` with an accurate constant term.
    pub fn log_ratio(&self) -> Jet {
        let l = -self.rel().ln_with(Some(self.point.ln_rel));
        l.with_value(Xf::exp(self.point.ln_log_ratio()))
    }
}

/// Where a profile lives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Domain {
    Ball { radius: f64 },
    /// `ℝ^N`; `scale` is only the reference length for point logs.
    FullSpace { scale: f64 },
}

impl Domain {
    pub fn scale(&self) -> f64 {
        match *self {
            Domain::Ball { radius } => radius,
            Domain::FullSpace { scale } => scale,
        }
    }

    pub fn upper(&self) -> f64 {
        match *self {
            Domain::Ball { radius } => radius,
            Domain::FullSpace { .. } => f64::INFINITY,
        }
    }

    pub fn point(&self, r: f64) -> RadialPoint {
        RadialPoint::from_r(r, self.scale())
    }
}

/// Declared asymptotics: `u ~ r^{σ₀}` at the origin and `u ~ d^{σ₁}` at
/// the outer end (`d` the distance to the sphere, or `u ~ r^{σ₁}` at
/// infinity on the full space). `None` means the profile vanishes
/// identically near that end.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EndpointExponents {
    pub origin: Option<f64>,
    pub outer: Option<f64>,
}

impl EndpointExponents {
    pub const COMPACT: EndpointExponents = EndpointExponents { origin: None, outer: None };

    /// Exponents of the `k`-th derivative. Nonnegative integer exponents at
    /// finite ends are taken as smooth behaviour whose derivatives stay
    /// bounded; at infinity `r^σ` differentiates to `r^{σ−k}`.
    pub fn differentiated(self, k: usize, outer_is_infinity: bool) -> Self {
        let kf = k as f64;
        let finite = |s: Option<f64>| {
            s.map(|s| {
                let integral = s >= 0.0 && (s - s.round()).abs() < 1e-12;
                if integral {
                    (s - kf).max(0.0)
                } else {
                    s - kf
                }
            })
        };
        EndpointExponents {
            origin: finite(self.origin),
            outer: if outer_is_infinity { self.outer.map(|s| s - kf) } else { finite(self.outer) },
        }
    }
}

type ProfileFn = dyn Fn(&RadialVar) -> Jet + Send + Sync;

/// An immutable radial function with derivatives up to `order`.
#[derive(Clone)]
pub struct RadialProfile {
    f: Arc<ProfileFn>,
    order: usize,
    domain: Domain,
    support: (f64, f64),
    exponents: EndpointExponents,
    breakpoints: Vec<f64>,
    label: String,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("label", &self.label)
            .field("order", &self.order)
            .field("domain", &self.domain)
            .field("support", &self.support)
            .field("exponents", &self.exponents)
            .finish()
    }
}

impl RadialProfile {
    pub fn new(
        label: impl Into<String>,
        domain: Domain,
        support: (f64, f64),
        exponents: EndpointExponents,
        order: usize,
        f: impl Fn(&RadialVar) -> Jet + Send + Sync + 'static,
    ) -> Self {
        RadialProfile {
            f: Arc::new(f),
            order: order.min(MAX_ORDER),
            domain,
            support,
            exponents,
            breakpoints: Vec::new(),
            label: label.into(),
        }
    }

    pub fn with_breakpoints(mut self, mut bps: Vec<f64>) -> Self {
        bps.retain(|&b| b > self.support.0 && b < self.support.1);
        bps.sort_by(f64::total_cmp);
        bps.dedup();
        self.breakpoints = bps;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn order(&self) -> usize {
        self.order
    }
    pub fn domain(&self) -> Domain {
        self.domain
    }
    pub fn support(&self) -> (f64, f64) {
        self.support
    }
    pub fn exponents(&self) -> EndpointExponents {
        self.exponents
    }
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Whether the support reaches the origin / the outer end.
    pub fn touches_origin(&self) -> bool {
        self.support.0 <= 0.0
    }
    pub fn touches_outer(&self) -> bool {
        self.support.1 >= self.domain.upper()
    }

    fn inside(&self, pt: &RadialPoint) -> bool {
        let r = pt.r_f64();
        let lo_ok = self.support.0 <= 0.0 || r > self.support.0;
        let hi_ok = if self.touches_outer() { true } else { r < self.support.1 };
        lo_ok && hi_ok
    }

    /// Taylor jet of `u` at `pt` with `order + 1` coefficients.
    pub fn jet_at(&self, pt: &RadialPoint, order: usize) -> Jet {
        if !self.inside(pt) {
            return Jet::constant(Xf::ZERO, order);
        }
        (self.f)(&RadialVar::new(*pt, order))
    }

    /// Sign changes of `u` inside a bounded support, located by sampling
    /// and bisection.
    pub fn interior_zeros(&self) -> Vec<f64> {
        const SAMPLES: usize = 256;
        let (lo, hi) = (self.support.0.max(0.0), self.support.1.min(self.domain.upper()));
        if !hi.is_finite() || hi <= lo {
            return Vec::new();
        }
        // geometric sampling when the support spans decades
        let geometric = lo > 0.0 && hi / lo > 1e3;
        let xs: Vec<f64> = (1..SAMPLES)
            .map(|i| {
                let t = i as f64 / SAMPLES as f64;
                if geometric {
                    lo * (hi / lo).powf(t)
                } else {
                    lo + (hi - lo) * t
                }
            })
            .collect();
        let mut zeros = Vec::new();
        for pair in xs.windows(2) {
            let (mut a, mut b) = (pair[0], pair[1]);
            let (fa, fb) = (self.eval(a), self.eval(b));
            if fa == 0.0 || fb == 0.0 || fa.signum() == fb.signum() {
                continue;
            }
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if self.eval(m).signum() == fa.signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            zeros.push(0.5 * (a + b));
        }
        zeros
    }

    /// Evaluate on an existing variable (used when composing profiles).
    pub fn apply(&self, var: &RadialVar) -> Jet {
        if !self.inside(&var.point) {
            return Jet::constant(Xf::ZERO, var.order());
        }
        (self.f)(var)
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.jet_at(&self.domain.point(r), 0).value().to_f64()
    }

    pub fn deriv(&self, j: usize, r: f64) -> Result<f64> {
        if j > self.order {
            return Err(HardyError::OrderTooLow { need: j, have: self.order });
        }
        Ok(self.jet_at(&self.domain.point(r), j).deriv(j).to_f64())
    }

    /// Exponents of the `k`-th derivative.
    pub fn derivative_exponents(&self, k: usize) -> EndpointExponents {
        let inf = matches!(self.domain, Domain::FullSpace { .. });
        self.exponents.differentiated(k, inf)
    }

    /// `c · u`.
    pub fn scaled(&self, c: f64) -> RadialProfile {
        let f = self.f.clone();
        let mut out = self.clone();
        out.f = Arc::new(move |v: &RadialVar| f(v).scale(c));
        out
    }

    /// `u · (1 + c · v)`, keeping the support and exponents of `u`.
    pub fn perturbed(&self, c: f64, v: &RadialProfile) -> RadialProfile {
        let f = self.f.clone();
        let label = format!("{}·(1+{c}·{})", self.label, v.label);
        let v = v.clone();
        let mut out = self.clone();
        let mut bps = self.breakpoints.clone();
        bps.extend(v.breakpoints.iter().copied());
        bps.extend([v.support.0, v.support.1]);
        out.f = Arc::new(move |var: &RadialVar| {
            let w = v.apply(var).scale(c).add_const(1.0);
            f(var) * w
        });
        out.with_breakpoints(bps).with_label(label)
    }
}

fn smoothstep(t: Jet) -> Jet {
    let t0 = t.value().to_f64();
    if t0 <= 0.0 {
        return Jet::constant(Xf::ZERO, t.order());
    }
    if t0 >= 1.0 {
        return Jet::constant(Xf::ONE, t.order());
    }
    let t2 = t.sqr();
    let inner = (t.scale(-15.0) + t2.scale(6.0)).add_const(10.0);
    t2 * t * inner
}

/// Maximal slope of the smoothstep bridge.
pub const SMOOTHSTEP_MAX_SLOPE: f64 = 1.875;

/// `((r/R)^{−γ} − 1)^{(β−1)/p}`, formally extremal for the improved Hardy
/// inequality.
pub fn virtual_extremal(p: f64, beta: f64, gamma: f64, radius: f64) -> RadialProfile {
    let e = (beta - 1.0) / p;
    RadialProfile::new(
        format!("virtual(p={p},β={beta},γ={gamma})"),
        Domain::Ball { radius },
        (0.0, radius),
        EndpointExponents { origin: Some(-e * gamma), outer: Some(e) },
        MAX_ORDER,
        move |v| v.inverted_gap(gamma).powf(e),
    )
}

/// `φ_δ · (1 − (r/R)^γ)^A`: zero on `[0, R(1−2δ)]`, pure power on
/// `[R(1−δ), R]`.
pub fn boundary_test_function(a: f64, delta: f64, gamma: f64, radius: f64) -> RadialProfile {
    let lo = radius * (1.0 - 2.0 * delta);
    let w = radius * delta;
    RadialProfile::new(
        format!("f_A(A={a},δ={delta},γ={gamma})"),
        Domain::Ball { radius },
        (lo, radius),
        EndpointExponents { origin: None, outer: Some(a) },
        MAX_ORDER,
        move |v| {
            let cut = smoothstep(v.r.add_const(-lo).scale(1.0 / w));
            cut * v.gap(gamma).powf(a)
        },
    )
    .with_breakpoints(vec![radius * (1.0 - delta)])
}

/// `ψ_δ · r^{−B}`: pure power on `[0, δR]`, zero beyond `2δR`.
pub fn origin_test_function(b: f64, delta: f64, radius: f64) -> RadialProfile {
    let w = radius * delta;
    RadialProfile::new(
        format!("g_B(B={b},δ={delta})"),
        Domain::Ball { radius },
        (0.0, 2.0 * w),
        EndpointExponents { origin: Some(-b), outer: None },
        MAX_ORDER,
        move |v| {
            let cut = -smoothstep(v.r.add_const(-w).scale(1.0 / w)).add_const(-1.0);
            cut * v.rel().powf(-b).scale(radius.powf(-b))
        },
    )
    .with_breakpoints(vec![w])
}

/// Closed-form minimizer of the radial improved Hardy–Sobolev quotient.
#[allow(clippy::too_many_arguments)]
pub fn hs_minimizer(
    a: f64,
    b: f64,
    n: u32,
    p: f64,
    q: f64,
    alpha: f64,
    beta: f64,
    radius: f64,
) -> Result<RadialProfile> {
    let inv = |h: &str| Err(HardyError::Inadmissible { form: "hs-minimizer".into(), hypothesis: h.into() });
    if !(a > 0.0 && b > 0.0) {
        return inv("a, b > 0");
    }
    if !(p > 1.0 && q > p && q.is_finite()) {
        return inv("1 < p < q < ∞");
    }
    if !(alpha < n as f64) {
        return inv("α < N");
    }
    if !(beta > 1.0) {
        return inv("β > 1");
    }
    let gamma = (n as f64 - alpha) / (beta - 1.0);
    let e = (q - p) * (beta - 1.0) / (p * (p - 1.0));
    let outer = -p / (q - p);
    Ok(RadialProfile::new(
        format!("U(a={a},b={b},q={q})"),
        Domain::Ball { radius },
        (0.0, radius),
        EndpointExponents { origin: Some(0.0), outer: Some((beta - 1.0) / (p - 1.0)) },
        MAX_ORDER,
        move |v| v.inverted_gap(gamma).powf(-e).scale(b).add_const(a).powf(outer),
    ))
}

/// `r^B` on the whole ball.
pub fn power_profile(b: f64, radius: f64) -> RadialProfile {
    RadialProfile::new(
        format!("r^{b}"),
        Domain::Ball { radius },
        (0.0, radius),
        EndpointExponents { origin: Some(b), outer: Some(0.0) },
        MAX_ORDER,
        move |v| v.rel().powf(b).scale(radius.powf(b)),
    )
}

/// `(1 − (r/R)^γ)^A` on the whole ball.
pub fn gap_power(a: f64, gamma: f64, radius: f64) -> RadialProfile {
    RadialProfile::new(
        format!("(1-r^{gamma})^{a}"),
        Domain::Ball { radius },
        (0.0, radius),
        EndpointExponents { origin: Some(0.0), outer: Some(a) },
        MAX_ORDER,
        move |v| v.gap(gamma).powf(a),
    )
}

/// `exp(−1/(t(1−t)))·(1 + c₁t + c₂t²)` with `t = (r−lo)/(hi−lo)`.
pub fn bump(lo: f64, hi: f64, c1: f64, c2: f64, radius: f64) -> RadialProfile {
    let w = hi - lo;
    RadialProfile::new(
        format!("bump[{lo:.4},{hi:.4}]"),
        Domain::Ball { radius },
        (lo, hi),
        EndpointExponents::COMPACT,
        MAX_ORDER,
        move |v| {
            let t = v.r.add_const(-lo).scale(1.0 / w);
            let s = t * (-t).add_const(1.0);
            // composed maps can land a rounding error outside the support
            if s.value().signum() <= 0.0 {
                return Jet::constant(Xf::ZERO, v.order());
            }
            let poly = (t.scale(c1) + t.sqr().scale(c2)).add_const(1.0);
            (-s.recip()).exp() * poly
        },
    )
    .with_breakpoints(vec![lo + 0.5 * w])
}

/// `(1 − (r/R)²)^K (1 + c (r/R)²)`: smooth at the origin, vanishing to
/// order `K` at the sphere.
pub fn cap(kpow: f64, c: f64, radius: f64) -> RadialProfile {
    RadialProfile::new(
        format!("cap(K={kpow},c={c})"),
        Domain::Ball { radius },
        (0.0, radius),
        EndpointExponents { origin: Some(0.0), outer: Some(kpow) },
        MAX_ORDER,
        move |v| {
            let s = v.rel().sqr();
            v.gap(2.0).powf(kpow) * s.scale(c).add_const(1.0)
        },
    )
}

/// `|∇^k u|` for radial `u`: iterated `Δu = u'' + (N−1)u'/r`, with a final
/// radial derivative when `k` is odd.
pub fn apply_grad_k(u: &RadialProfile, k: usize, n: u32) -> Result<RadialProfile> {
    if u.order < k {
        return Err(HardyError::OrderTooLow { need: k, have: u.order });
    }
    let nm1 = n as f64 - 1.0;
    let signed = |abs: bool| {
        let inner = u.clone();
        move |v: &RadialVar| {
            let out_order = v.order();
            let var = v.with_order((out_order + k).min(MAX_ORDER));
            let j = grad_k_jet(&inner.apply(&var), &var.r, k, nm1).truncate(out_order);
            if abs && j.value().signum() < 0.0 {
                -j
            } else {
                j
            }
        }
    };
    let mut out = RadialProfile {
        f: Arc::new(signed(false)),
        order: u.order - k,
        domain: u.domain,
        support: u.support,
        exponents: u.derivative_exponents(k),
        breakpoints: u.breakpoints.clone(),
        label: format!("|∇^{k} {}|", u.label),
    };
    // |∇^k u| has kinks where ∇^k u changes sign
    let zeros = out.interior_zeros();
    out.breakpoints.extend(zeros);
    out.breakpoints.sort_by(f64::total_cmp);
    out.f = Arc::new(signed(true));
    Ok(out)
}

/// Signed `∇^k` on jets (`nm1 = N − 1`).
pub fn grad_k_jet(u: &Jet, r: &Jet, k: usize, nm1: f64) -> Jet {
    let mut cur = *u;
    for _ in 0..k / 2 {
        cur = laplacian_jet(&cur, r, nm1);
    }
    if k % 2 == 1 {
        cur = cur.derivative();
    }
    cur
}

pub fn laplacian_jet(u: &Jet, r: &Jet, nm1: f64) -> Jet {
    let d1 = u.derivative();
    let d2 = d1.derivative();
    let o = d2.order();
    d2 + (d1.truncate(o) / r.truncate(o)).scale(nm1)
}

/// Which even-`k` branch of the coefficient recursion to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Recursion {
    /// The even branch exactly as usually printed, without `γ` on the
    /// `C_{k−1,j−1}` term.
    AsPrinted,
    /// The even branch with the `γ` factor that the divergence of the
    /// odd-level terms produces.
    GammaCorrected,
}

/// Coefficients of `∇^k (1 − r^γ)^A = Σ_j C_{k,j} r^{jγ−k} (1−r^γ)^{A−j}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivCoefficients {
    pub k: usize,
    pub gamma: f64,
    pub a: f64,
    /// `coeffs[j−1] = C_{k,j}`.
    pub coeffs: Vec<f64>,
}

impl DerivCoefficients {
    /// `|Σ_j C_{k,j} r^{jγ−k} (1−r^γ)^{A−j}|` on the unit ball.
    pub fn eval(&self, r: f64) -> f64 {
        let g = -(self.gamma * r.ln()).exp_m1();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let j = (i + 1) as f64;
                c * r.powf(j * self.gamma - self.k as f64) * g.powf(self.a - j)
            })
            .sum::<f64>()
            .abs()
    }

    /// `C_{k,k}`.
    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap_or(&0.0)
    }
}

pub fn grad_k_coefficients(k: usize, a: f64, gamma: f64, n: u32) -> DerivCoefficients {
    grad_k_coefficients_with(k, a, gamma, n, Recursion::GammaCorrected)
}

pub fn grad_k_coefficients_with(k: usize, a: f64, gamma: f64, n: u32, rec: Recursion) -> DerivCoefficients {
    let nf = n as f64;
    let diag = |kk: usize| (1..=kk).map(|l| a - l as f64 + 1.0).product::<f64>() * (-gamma).powi(kk as i32);
    let first = |kk: usize| {
        let m = kk / 2;
        let prod: f64 = (1..=m)
            .map(|l| {
                let l = l as f64;
                (gamma - 2.0 * l + 2.0) * (nf + gamma - 2.0 * l)
            })
            .product();
        if kk.is_multiple_of(2) {
            -a * prod
        } else {
            -a * (gamma - 2.0 * m as f64) * prod
        }
    };
    let mut c = vec![-gamma * a];
    for kk in 2..=k {
        let kf = kk as f64;
        let mut next = vec![0.0; kk];
        next[0] = first(kk);
        next[kk - 1] = diag(kk);
        for j in 2..kk {
            let jf = j as f64;
            let down = c[j - 2] * (a - jf + 1.0);
            next[j - 1] = if kk % 2 == 0 {
                let g = match rec {
                    Recursion::AsPrinted => 1.0,
                    Recursion::GammaCorrected => gamma,
                };
                c[j - 1] * (nf + jf * gamma - kf) - down * g
            } else {
                c[j - 1] * (jf * gamma - kf + 1.0) - down * gamma
            };
        }
        c = next;
    }
    c.truncate(k.max(1));
    DerivCoefficients { k, gamma, a, coeffs: c }
}

/// `c` with `|∇^k r^B| = c · r^{B−k}`.
pub fn grad_k_radial_power(k: usize, b: f64, n: u32) -> f64 {
    let nf = n as f64;
    let m = k / 2;
    let mut c: f64 = (0..m)
        .map(|i| {
            let e = b - 2.0 * i as f64;
            e * (e + nf - 2.0)
        })
        .product();
    if k % 2 == 1 {
        c *= b - 2.0 * m as f64;
    }
    c.abs()
}
