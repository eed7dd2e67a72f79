//! Sharp constants and the admissibility predicates that gate them.

use crate::error::{HardyError, Result};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Slack used when a hypothesis is an inequality between computed reals,
/// so that parameters placed exactly on a critical line are accepted.
const EDGE: f64 = 1e-12;

fn le(a: f64, b: f64) -> bool {
    a <= b + EDGE * b.abs().max(1.0)
}

/// Which inequality a parameter set refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Form {
    ClassicalHardy,
    GeometricHardy,
    ImprovedHardy,
    ImprovedHardyA,
    ImprovedHardyB,
    LogHardy,
    Rellich,
    GeometricRellich,
    ImprovedRellichP2,
    ImprovedRellichBP2,
    ImprovedRellichKP2,
    ImprovedRellichRad,
    ImprovedRellichRadB,
    CriticalRellich,
    OneDimHardy,
    OneDimImprovedHardy,
    HardyRellichStep,
    ImprovedHardyRellichStep,
}

impl Form {
    pub const ALL: [Form; 18] = [
        Form::ClassicalHardy,
        Form::GeometricHardy,
        Form::ImprovedHardy,
        Form::ImprovedHardyA,
        Form::ImprovedHardyB,
        Form::LogHardy,
        Form::Rellich,
        Form::GeometricRellich,
        Form::ImprovedRellichP2,
        Form::ImprovedRellichBP2,
        Form::ImprovedRellichKP2,
        Form::ImprovedRellichRad,
        Form::ImprovedRellichRadB,
        Form::CriticalRellich,
        Form::OneDimHardy,
        Form::OneDimImprovedHardy,
        Form::HardyRellichStep,
        Form::ImprovedHardyRellichStep,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            Form::ClassicalHardy => "classical-hardy",
            Form::GeometricHardy => "geometric-hardy",
            Form::ImprovedHardy => "improved-hardy",
            Form::ImprovedHardyA => "improved-hardy-a",
            Form::ImprovedHardyB => "improved-hardy-b",
            Form::LogHardy => "log-hardy",
            Form::Rellich => "rellich",
            Form::GeometricRellich => "geometric-rellich",
            Form::ImprovedRellichP2 => "improved-rellich-p2",
            Form::ImprovedRellichBP2 => "improved-rellich-b-p2",
            Form::ImprovedRellichKP2 => "improved-rellich-k-p2",
            Form::ImprovedRellichRad => "improved-rellich-rad",
            Form::ImprovedRellichRadB => "improved-rellich-rad-b",
            Form::CriticalRellich => "critical-rellich",
            Form::OneDimHardy => "one-dim-hardy",
            Form::OneDimImprovedHardy => "one-dim-improved-hardy",
            Form::HardyRellichStep => "hardy-rellich-step",
            Form::ImprovedHardyRellichStep => "improved-hardy-rellich-step",
        }
    }

    /// First-order (Hardy type) forms compare `u` against `u'`.
    pub fn is_first_order(self) -> bool {
        matches!(
            self,
            Form::ClassicalHardy
                | Form::GeometricHardy
                | Form::ImprovedHardy
                | Form::ImprovedHardyA
                | Form::ImprovedHardyB
                | Form::LogHardy
                | Form::OneDimHardy
                | Form::OneDimImprovedHardy
        )
    }

    pub fn is_one_dim(self) -> bool {
        matches!(self, Form::OneDimHardy | Form::OneDimImprovedHardy)
    }

    /// A parameter set that satisfies every hypothesis of the form.
    pub fn defaults(self) -> RawParams {
        let base = RawParams { form: self, ..RawParams::default() };
        match self {
            Form::ClassicalHardy => RawParams { n: 5, alpha: 2.0, ..base },
            Form::GeometricHardy => base,
            Form::ImprovedHardy => RawParams { alpha: 1.0, gamma: 2.0, ..base },
            Form::ImprovedHardyA => RawParams { alpha: 1.0, beta: 1.0, ..base },
            Form::ImprovedHardyB => RawParams { alpha: 1.0, ..base },
            Form::LogHardy => RawParams { alpha: 1.0, ..base },
            Form::Rellich | Form::CriticalRellich => RawParams { n: 5, alpha: 3.0, k: 2, ..base },
            Form::GeometricRellich => RawParams { k: 2, ..base },
            Form::ImprovedRellichP2 => RawParams { n: 6, alpha: 4.0, gamma: 2.0, k: 2, ..base },
            Form::ImprovedRellichBP2 => RawParams { n: 7, alpha: 4.0, k: 2, ..base },
            Form::ImprovedRellichKP2 => RawParams { n: 7, alpha: 4.0, k: 3, ..base },
            Form::ImprovedRellichRad => RawParams { n: 7, alpha: 2.0, gamma: 5.0, k: 2, ..base },
            Form::ImprovedRellichRadB => {
                RawParams { n: 5, alpha: -2.0, beta: 4.0, k: 2, ..base }
            }
            Form::OneDimHardy | Form::OneDimImprovedHardy => RawParams { alpha: 0.0, ..base },
            Form::HardyRellichStep => RawParams { n: 5, alpha: 1.0, k: 2, ..base },
            Form::ImprovedHardyRellichStep => RawParams { n: 5, alpha: -4.0, k: 2, ..base },
        }
    }

    /// The hypothesis list of the form evaluated at `raw`, in the order the
    /// checks are reported.
    pub fn hypotheses(self, raw: &RawParams) -> Vec<Hypothesis> {
        let n = raw.n as f64;
        let RawParams { p, alpha: a, beta: b, gamma: g, k, .. } = *raw;
        let m = (k / 2) as f64;
        let mut out = vec![
            Hypothesis::new("N ≥ 2", raw.n >= 2),
            Hypothesis::new("R > 0", raw.radius > 0.0 && raw.radius.is_finite()),
        ];
        let mut h = |text: &str, ok: bool| out.push(Hypothesis::new(text, ok));
        match self {
            Form::ClassicalHardy => {
                h("p > 1", p > 1.0);
                h("α < N", a < n);
            }
            Form::GeometricHardy => {
                h("p > 1", p > 1.0);
                h("β > 1", b > 1.0);
            }
            Form::ImprovedHardy => {
                h("p ≥ 1", p >= 1.0);
                h("β > 1", b > 1.0);
                h("γ > 0", g > 0.0);
                h("α ≤ N − (β−1)γ", le(a, n - (b - 1.0) * g));
            }
            Form::ImprovedHardyA => {
                h("p ≥ 1", p >= 1.0);
                h("β ≥ 0", b >= 0.0);
                h("γ > 0", g > 0.0);
                h("α ≤ N", le(a, n));
            }
            Form::ImprovedHardyB => {
                h("p ≥ 1", p >= 1.0);
                h("β > 1", b > 1.0);
                h("γ > 0", g > 0.0);
                h("α < N − (p−1)γ", a < n - (p - 1.0) * g);
            }
            Form::LogHardy => {
                h("p ≥ 1", p >= 1.0);
                h("β > 1", b > 1.0);
                h("α ≤ N", le(a, n));
            }
            Form::Rellich => {
                h("p > 1", p > 1.0);
                h("k ≥ 2", k >= 2);
                h("α > 2 + 2(m−1)p", a > 2.0 + 2.0 * (m - 1.0) * p);
                h("α < N", a < n);
            }
            Form::GeometricRellich => {
                h("p = 2", p == 2.0);
                h("k ≥ 1", k >= 1);
            }
            Form::ImprovedRellichP2 => {
                h("p = 2", p == 2.0);
                h("k = 2", k == 2);
                h("γ > 0", g > 0.0);
                h("α > 4 − N", a > 4.0 - n);
                h("α ≤ N − γ", le(a, n - g));
            }
            Form::ImprovedRellichBP2 => {
                h("p = 2", p == 2.0);
                h("k = 2", k == 2);
                h("γ > 0", g > 0.0);
                h("α ≥ 3", a >= 3.0);
                h("α ≤ min{N − γ + 2, N − 3γ}", le(a, (n - g + 2.0).min(n - 3.0 * g)));
            }
            Form::ImprovedRellichKP2 => {
                h("p = 2", p == 2.0);
                h("k ≥ 3", k >= 3);
                h("γ > 0", g > 0.0);
                h("α > −2 + 4m", a > -2.0 + 4.0 * m);
                h("α ≤ N − γ", le(a, n - g));
            }
            Form::ImprovedRellichRad => {
                h("p > 1", p > 1.0);
                h("k ≥ 2", k >= 2);
                h("γ > 0", g > 0.0);
                h("α ≤ N − (p−1)γ", le(a, n - (p - 1.0) * g));
            }
            Form::ImprovedRellichRadB => {
                h("p > 1", p > 1.0);
                h("k ≥ 2", k >= 2);
                h("γ > 0", g > 0.0);
                h("β > 1", b > 1.0);
                let bound = (n - (b - p - 1.0) * g - (n - 2.0) * p).min(n - (b - 1.0) * g);
                h("α ≤ min{N − (β−p−1)γ − (N−2)p, N − (β−1)γ}", le(a, bound));
            }
            Form::CriticalRellich => {
                h("p > 1", p > 1.0);
                h("k ≥ 1", k >= 1);
                h("α ≤ N", le(a, n));
            }
            Form::OneDimHardy => {
                h("p ≥ 1", p >= 1.0);
            }
            Form::OneDimImprovedHardy => {
                h("p ≥ 1", p >= 1.0);
                h("γ > 0", g > 0.0);
                h("β > 1", b > 1.0);
                h("α + 1 − (β−1)γ ≥ 0", le(0.0, a + 1.0 - (b - 1.0) * g));
            }
            Form::HardyRellichStep => {
                h("p ≥ 1", p >= 1.0);
                h("α < N", a < n);
            }
            Form::ImprovedHardyRellichStep => {
                h("p ≥ 1", p >= 1.0);
                h("β > 1", b > 1.0);
                h("γ > 0", g > 0.0);
                h("α ≤ N − (β−1)γ − (N−1)p", le(a, n - (b - 1.0) * g - (n - 1.0) * p));
            }
        }
        out
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for Form {
    type Err = HardyError;
    fn from_str(s: &str) -> Result<Form> {
        Form::ALL
            .into_iter()
            .find(|f| f.slug() == s)
            .ok_or_else(|| HardyError::Invalid(format!("unknown form `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Hypothesis {
    pub text: String,
    pub holds: bool,
}

impl Hypothesis {
    fn new(text: &str, holds: bool) -> Hypothesis {
        Hypothesis { text: text.to_owned(), holds }
    }
}

/// Unchecked parameter tuple. For the one-dimensional forms `alpha` is the
/// power `a` of the measure and `beta` is `−b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawParams {
    pub form: Form,
    pub n: u32,
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub radius: f64,
    pub k: u32,
}

impl Default for RawParams {
    fn default() -> Self {
        RawParams {
            form: Form::ImprovedHardy,
            n: 3,
            p: 2.0,
            alpha: 0.0,
            beta: 2.0,
            gamma: 1.0,
            radius: 1.0,
            k: 1,
        }
    }
}

/// A parameter tuple that passed its form's admissibility predicate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InequalityParams(RawParams);

impl InequalityParams {
    pub fn new(raw: RawParams) -> Result<Self> {
        let finite = [raw.p, raw.alpha, raw.beta, raw.gamma].iter().all(|x| x.is_finite());
        if !finite {
            return Err(HardyError::Invalid("parameters must be finite".into()));
        }
        match raw.form.hypotheses(&raw).into_iter().find(|h| !h.holds) {
            Some(h) => Err(HardyError::Inadmissible { form: raw.form.to_string(), hypothesis: h.text }),
            None => Ok(InequalityParams(raw)),
        }
    }

    pub fn raw(&self) -> &RawParams {
        &self.0
    }
    pub fn form(&self) -> Form {
        self.0.form
    }
    pub fn n(&self) -> u32 {
        self.0.n
    }
    pub fn nf(&self) -> f64 {
        self.0.n as f64
    }
    pub fn p(&self) -> f64 {
        self.0.p
    }
    pub fn alpha(&self) -> f64 {
        self.0.alpha
    }
    pub fn beta(&self) -> f64 {
        self.0.beta
    }
    pub fn gamma(&self) -> f64 {
        self.0.gamma
    }
    pub fn radius(&self) -> f64 {
        self.0.radius
    }
    pub fn k(&self) -> u32 {
        self.0.k
    }
    /// `floor(k/2)`.
    pub fn m(&self) -> u32 {
        self.0.k / 2
    }

    /// The sharp constant of the selected form.
    pub fn sharp_constant(&self) -> f64 {
        let (n, p, a, b, g, k) = (self.nf(), self.p(), self.alpha(), self.beta(), self.gamma(), self.k());
        match self.form() {
            Form::ClassicalHardy => ((n - a) / p).powf(p),
            Form::GeometricHardy => ((b - 1.0) / p).powf(p),
            Form::ImprovedHardy | Form::ImprovedHardyB | Form::ImprovedHardyRellichStep => {
                ((b - 1.0) * g / p).powf(p)
            }
            Form::ImprovedHardyA => ((n - a) / p).powf(p),
            Form::LogHardy => ((b - 1.0) / p).powf(p),
            Form::Rellich => rellich_product_constant(k, p, a, self.n()).abs().powf(p),
            Form::GeometricRellich => geometric_rellich_constant(k, p),
            Form::ImprovedRellichP2 => ((n + a - 4.0) * g / 4.0).powi(2),
            Form::ImprovedRellichBP2 => (0.75 * g * g).powi(2),
            Form::ImprovedRellichKP2 => (g * rellich_product_constant(k, 2.0, a, self.n()) / (n - a)).powi(2),
            Form::ImprovedRellichRad => {
                ((p - 1.0) * g * rellich_product_constant(k, p, a, self.n()).abs() / (n - a)).powf(p)
            }
            Form::ImprovedRellichRadB => (0..k)
                .map(|j| (b - j as f64 * p - 1.0) * g / p)
                .product::<f64>()
                .abs()
                .powf(p),
            Form::CriticalRellich => ((p - 1.0) * rellich_product_ratio(k, p, a, self.n())).abs().powf(p),
            Form::OneDimHardy => ((a + 1.0 - p) / p).abs().powf(p),
            Form::OneDimImprovedHardy => ((b - 1.0) * g / p).powf(p),
            Form::HardyRellichStep => ((n * (p - 1.0) + a - p) / p).abs().powf(p),
        }
    }
}

fn gate(form: &str, hypothesis: &str, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(HardyError::Inadmissible { form: form.into(), hypothesis: hypothesis.into() })
    }
}

/// `((N−α)/p)^p`.
pub fn hardy_constant(n: u32, p: f64, alpha: f64) -> Result<f64> {
    gate("classical-hardy", "p > 1", p > 1.0)?;
    gate("classical-hardy", "α < N", alpha < n as f64)?;
    Ok(((n as f64 - alpha) / p).powf(p))
}

/// `((β−1)/p)^p`.
pub fn geometric_hardy_constant(p: f64, beta: f64) -> Result<f64> {
    gate("geometric-hardy", "p > 1", p > 1.0)?;
    gate("geometric-hardy", "β > 1", beta > 1.0)?;
    Ok(((beta - 1.0) / p).powf(p))
}

/// `((β−1)γ/p)^p`.
pub fn improved_hardy_constant(p: f64, beta: f64, gamma: f64) -> Result<f64> {
    gate("improved-hardy", "p ≥ 1", p >= 1.0)?;
    gate("improved-hardy", "β > 1", beta > 1.0)?;
    gate("improved-hardy", "γ > 0", gamma > 0.0)?;
    Ok(((beta - 1.0) * gamma / p).powf(p))
}

fn rellich_pair(j: u32, p: f64, alpha: f64, n: f64) -> (f64, f64) {
    let j = j as f64;
    (n - alpha + 2.0 * j * p, n * (p - 1.0) + alpha - 2.0 * (j + 1.0) * p)
}

/// `A_{k,p,α}`. The sign is kept; `k = 1` gives the Hardy prefix `(N−α)/p`.
pub fn rellich_product_constant(k: u32, p: f64, alpha: f64, n: u32) -> f64 {
    let nf = n as f64;
    let m = k / 2;
    let even: f64 = (0..m)
        .map(|j| {
            let (x, y) = rellich_pair(j, p, alpha, nf);
            x * y / (p * p)
        })
        .product();
    if k % 2 == 1 {
        even * (nf - alpha + 2.0 * m as f64 * p) / p
    } else {
        even
    }
}

/// `A_{k,p,α} / (N−α)` with the vanishing factor cancelled, finite at `α = N`.
pub fn rellich_product_ratio(k: u32, p: f64, alpha: f64, n: u32) -> f64 {
    let nf = n as f64;
    let m = k / 2;
    if m == 0 {
        return 1.0 / p;
    }
    let (_, y0) = rellich_pair(0, p, alpha, nf);
    let rest: f64 = (1..m)
        .map(|j| {
            let (x, y) = rellich_pair(j, p, alpha, nf);
            x * y / (p * p)
        })
        .product();
    let ratio = y0 / (p * p) * rest;
    if k % 2 == 1 {
        ratio * (nf - alpha + 2.0 * m as f64 * p) / p
    } else {
        ratio
    }
}

/// `(∏_{j=1}^k (jp−1)/p)^p`.
pub fn geometric_rellich_constant(k: u32, p: f64) -> f64 {
    (1..=k).map(|j| (j as f64 * p - 1.0) / p).product::<f64>().powf(p)
}

/// Sharp constant of a Rellich-type form.
pub fn improved_rellich_constant(params: &InequalityParams) -> Result<f64> {
    if params.form().is_first_order() {
        return Err(HardyError::Unsupported(format!("{} is not a Rellich form", params.form())));
    }
    Ok(params.sharp_constant())
}

/// `|S^{N−1}| = 2π^{N/2}/Γ(N/2)`.
pub fn sphere_area(n: u32) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * (h * PI.ln() - ln_gamma(h)).exp()
}

fn lgamma_checked(x: f64) -> Result<f64> {
    if x <= 0.0 && x.fract() == 0.0 {
        return Err(HardyError::GammaPole(x));
    }
    if x <= 0.0 {
        return Err(HardyError::Invalid(format!("gamma argument {x} must be positive here")));
    }
    Ok(ln_gamma(x))
}

/// Closed form of the radial improved Hardy–Sobolev infimum.
pub fn t_rad_constant(n: u32, p: f64, q: f64, alpha: f64) -> Result<f64> {
    let form = "t-rad";
    gate(form, "N ≥ 2", n >= 2)?;
    gate(form, "1 < p", p > 1.0)?;
    gate(form, "p < q < ∞", p < q && q.is_finite())?;
    gate(form, "α < N", alpha < n as f64)?;
    let nf = n as f64;
    let d = q - p;
    let e = d / q;
    let lg = lgamma_checked(q / d)? + lgamma_checked(q * (p - 1.0) / d)?
        - lgamma_checked(nf / 2.0)?
        - lgamma_checked(q * p / d)?;
    let ln = (nf * d / (2.0 * q)) * PI.ln()
        + nf.ln()
        + (p - 1.0) * (nf * p / (q * (p - 1.0))).ln()
        + (p - 1.0 + p / q) * (q * (nf - alpha) / (nf * p)).ln()
        + e * (2.0 * q * (p - 1.0) / (nf * d)).ln()
        + e * lg;
    Ok(ln.exp())
}

/// Parameters of the weighted radial Sobolev problem on the full space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SRadParams {
    n: u32,
    p: f64,
    a: f64,
    b: f64,
}

impl SRadParams {
    pub fn new(n: u32, p: f64, a: f64, b: f64) -> Result<Self> {
        let form = "s-rad";
        let nf = n as f64;
        let theta = 1.0 - a + b;
        gate(form, "N ≥ 2", n >= 2)?;
        gate(form, "p > 1", p > 1.0)?;
        gate(form, "(1−A+B)p < N", theta * p < nf)?;
        gate(form, "1 − A + B > 0", theta > 0.0)?;
        gate(form, "A > (p−N)/p", a > (p - nf) / p)?;
        let q = nf * p / (nf - theta * p);
        gate(form, "B > −N/q", b > -nf / q)?;
        Ok(SRadParams { n, p, a, b })
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    fn theta(&self) -> f64 {
        1.0 - self.a + self.b
    }
    /// `q = Np/(N − (1−A+B)p)`.
    pub fn q(&self) -> f64 {
        let nf = self.n as f64;
        nf * self.p / (nf - self.theta() * self.p)
    }
    /// `h = (1−A+B)(N−p+pA)/(N−(1−A+B)p)`.
    pub fn h(&self) -> f64 {
        let nf = self.n as f64;
        self.theta() * (nf - self.p + self.p * self.a) / (nf - self.theta() * self.p)
    }
}

pub fn s_rad_constant(params: &SRadParams) -> Result<f64> {
    let nf = params.n as f64;
    let p = params.p;
    let th = params.theta();
    let e = p * th / nf;
    let lg = lgamma_checked(nf / (p * th))? + lgamma_checked(nf * (p - 1.0) / (p * th))?
        - lgamma_checked(nf / 2.0)?
        - lgamma_checked(nf / th)?;
    let ln = (p * th / 2.0) * PI.ln()
        + nf.ln()
        + (p - 1.0) * ((nf - th * p) / (p - 1.0)).ln()
        + (p - e) * ((nf - p + p * params.a) / (nf - th * p)).ln()
        + e * (2.0 * (p - 1.0) / (th * p)).ln()
        + e * lg;
    Ok(ln.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_admissible() {
        for f in Form::ALL {
            let raw = f.defaults();
            assert!(InequalityParams::new(raw).is_ok(), "{f}: {:?}", f.hypotheses(&raw));
            assert!(InequalityParams::new(raw).unwrap().sharp_constant() > 0.0, "{f}");
        }
    }

    #[test]
    fn slug_round_trip() {
        for f in Form::ALL {
            assert_eq!(f.slug().parse::<Form>().unwrap(), f);
        }
    }

    #[test]
    fn inadmissible_names_hypothesis() {
        let raw = RawParams { gamma: 0.0, ..Form::ImprovedHardy.defaults() };
        let err = InequalityParams::new(raw).unwrap_err();
        assert_eq!(err.to_string(), "improved-hardy: γ > 0 required");
    }

    #[test]
    fn ratio_matches_product() {
        for k in 1..7 {
            let a = rellich_product_constant(k, 2.5, 1.3, 9);
            let r = rellich_product_ratio(k, 2.5, 1.3, 9);
            assert!((a / (9.0 - 1.3) - r).abs() < 1e-12 * r.abs().max(1.0));
        }
    }
}
