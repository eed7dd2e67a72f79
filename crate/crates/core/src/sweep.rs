//! One-parameter sweeps that walk a test family toward the sharp constant
//! or a parameter family toward its limiting inequality.

use crate::constants::{Form, InequalityParams, RawParams};
use crate::error::{HardyError, Result};
use crate::functionals::quotient;
use crate::quadrature::QuadratureConfig;
use crate::radial::{boundary_test_function, bump, origin_test_function, RadialProfile};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    /// Boundary exponent of `φ_δ (1 − r^γ)^A`.
    A,
    /// Origin exponent of `ψ_δ r^{−B}`.
    B,
    /// `γ ↓ 0` against the logarithmic limit of the form.
    Gamma,
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParam::A => "a",
            SweepParam::B => "b",
            SweepParam::Gamma => "gamma",
        })
    }
}

impl FromStr for SweepParam {
    type Err = HardyError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(SweepParam::A),
            "b" => Ok(SweepParam::B),
            "gamma" | "γ" => Ok(SweepParam::Gamma),
            _ => Err(HardyError::Invalid(format!("unknown sweep parameter `{s}` (a, b, gamma)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub quotient: f64,
    pub constant: f64,
    pub gap: f64,
    /// For `γ` sweeps: `quotient/constant` of the limiting form.
    pub limit_ratio: Option<f64>,
    /// For `γ` sweeps: `|ρ_γ/ρ_lim − 1|` with `ρ = quotient/constant`.
    pub limit_difference: Option<f64>,
}

pub const CSV_HEADER: &str = "value,quotient,constant,gap,limit_ratio,limit_difference";

impl SweepRow {
    pub fn csv(&self) -> String {
        let opt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
        format!(
            "{:e},{:e},{:e},{:e},{},{}",
            self.value,
            self.quotient,
            self.constant,
            self.gap,
            opt(self.limit_ratio),
            opt(self.limit_difference)
        )
    }
}

/// The `γ → 0` limit of a form, where one exists.
pub fn limit_form(raw: &RawParams) -> Result<RawParams> {
    match raw.form {
        Form::ImprovedHardy => Ok(RawParams { form: Form::LogHardy, gamma: 1.0, ..*raw }),
        Form::ImprovedRellichP2 => Ok(RawParams { form: Form::CriticalRellich, gamma: 1.0, k: 2, ..*raw }),
        f => Err(HardyError::Unsupported(format!("{f} has no γ → 0 limit here"))),
    }
}

/// The fixed profile compared along a `γ` sweep.
pub fn limit_profile(radius: f64) -> RadialProfile {
    bump(0.2 * radius, 0.8 * radius, 0.3, -0.2, radius)
}

/// Evaluate `base.form` along `values` of `param`. `delta` is the cutoff
/// width of the test functions.
pub fn run_sweep(base: &RawParams, param: SweepParam, values: &[f64], delta: f64, cfg: &QuadratureConfig) -> Result<Vec<SweepRow>> {
    if values.is_empty() {
        return Err(HardyError::Invalid("empty sweep grid".into()));
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(HardyError::Invalid(format!("cutoff width {delta} outside (0, 1/2)")));
    }
    let r = base.radius;
    let limit = match param {
        SweepParam::Gamma => {
            let lp = InequalityParams::new(limit_form(base)?)?;
            let q = quotient(&limit_profile(r), &lp, cfg)?;
            Some(q.quotient / q.sharp_constant)
        }
        _ => None,
    };
    values
        .iter()
        .map(|&v| {
            let (params, u) = match param {
                SweepParam::A => (InequalityParams::new(*base)?, boundary_test_function(v, delta, base.gamma, r)),
                SweepParam::B => (InequalityParams::new(*base)?, origin_test_function(v, delta, r)),
                SweepParam::Gamma => (InequalityParams::new(RawParams { gamma: v, ..*base })?, limit_profile(r)),
            };
            let q = quotient(&u, &params, cfg)?;
            if q.quotient.is_nan() {
                return Err(HardyError::Divergent(format!("left-hand side at {param} = {v}")));
            }
            let ratio = q.quotient / q.sharp_constant;
            Ok(SweepRow {
                value: v,
                quotient: q.quotient,
                constant: q.sharp_constant,
                gap: q.relative_gap,
                limit_ratio: limit,
                limit_difference: limit.map(|l| (ratio / l - 1.0).abs()),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_grid_is_rejected() {
        let base = Form::ImprovedHardy.defaults();
        assert!(run_sweep(&base, SweepParam::A, &[], 0.05, &QuadratureConfig::default()).is_err());
    }

    #[test]
    fn parse_round_trip() {
        for p in [SweepParam::A, SweepParam::B, SweepParam::Gamma] {
            assert_eq!(p.to_string().parse::<SweepParam>().unwrap(), p);
        }
    }
}
