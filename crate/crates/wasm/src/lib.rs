//! Browser bindings. Every export takes and returns JSON strings so the page
//! needs no generated type glue; the `api` module holds the same calls for
//! native use and tests.

use wasm_bindgen::prelude::*;

pub mod api {
    use hardylab::constants::{Form, Hypothesis, InequalityParams, RawParams};
    use hardylab::quadrature::QuadratureConfig;
    use hardylab::radial::{bump, RadialPoint};
    use hardylab::sweep::{run_sweep, SweepParam, SweepRow};
    use hardylab::transplant::{radius_map, verify_transplant_equivalence, Chart, TransplantResiduals};
    use hardylab::{HardyError, Result};
    use serde::{Deserialize, Serialize};

    /// A form plus any parameters that override its defaults.
    #[derive(Debug, Default, Deserialize)]
    pub struct ParamsIn {
        pub form: String,
        pub n: Option<u32>,
        pub p: Option<f64>,
        pub alpha: Option<f64>,
        pub beta: Option<f64>,
        pub gamma: Option<f64>,
        pub radius: Option<f64>,
        pub k: Option<u32>,
    }

    impl ParamsIn {
        pub fn raw(&self) -> Result<RawParams> {
            let d = self.form.parse::<Form>()?.defaults();
            Ok(RawParams {
                n: self.n.unwrap_or(d.n),
                p: self.p.unwrap_or(d.p),
                alpha: self.alpha.unwrap_or(d.alpha),
                beta: self.beta.unwrap_or(d.beta),
                gamma: self.gamma.unwrap_or(d.gamma),
                radius: self.radius.unwrap_or(d.radius),
                k: self.k.unwrap_or(d.k),
                ..d
            })
        }
    }

    fn parse(json: &str) -> Result<ParamsIn> {
        serde_json::from_str(json).map_err(|e| HardyError::Invalid(e.to_string()))
    }

    fn to_json(v: &impl Serialize) -> String {
        serde_json::to_string(v).expect("plain data serializes")
    }

    #[derive(Debug, Serialize)]
    pub struct ConstantOut {
        pub params: RawParams,
        pub constant: Option<f64>,
        pub admissible: bool,
        pub hypotheses: Vec<Hypothesis>,
        pub error: Option<String>,
    }

    pub fn forms() -> Vec<&'static str> {
        Form::ALL.iter().map(|f| f.slug()).collect()
    }

    pub fn defaults(form: &str) -> Result<RawParams> {
        Ok(form.parse::<Form>()?.defaults())
    }

    /// Sharp constant with its checklist. Inadmissible input is reported in
    /// the result, not as an error.
    pub fn constant(input: &ParamsIn) -> Result<ConstantOut> {
        let raw = input.raw()?;
        let hypotheses = raw.form.hypotheses(&raw);
        Ok(match InequalityParams::new(raw) {
            Ok(p) => ConstantOut { params: raw, constant: Some(p.sharp_constant()), admissible: true, hypotheses, error: None },
            Err(e) => ConstantOut { params: raw, constant: None, admissible: false, hypotheses, error: Some(e.to_string()) },
        })
    }

    pub fn sweep(input: &ParamsIn, param: &str, values: &[f64], delta: f64) -> Result<Vec<SweepRow>> {
        let param: SweepParam = param.parse()?;
        run_sweep(&input.raw()?, param, values, delta, &QuadratureConfig::default())
    }

    /// One chart's view of a sampled profile.
    #[derive(Debug, Serialize)]
    pub struct ChartCurve {
        pub chart: String,
        /// `ln r` of the sample points in this chart.
        pub ln_r: Vec<f64>,
    }

    #[derive(Debug, Serialize)]
    pub struct TransplantOut {
        pub gamma: f64,
        /// Profile values, shared by every chart.
        pub values: Vec<f64>,
        pub curves: Vec<ChartCurve>,
        pub residuals: TransplantResiduals,
    }

    /// Transplant a bump on `[lo, hi]` of the unit ball to all three charts of
    /// the critical improved Hardy inequality and compare the integrals.
    pub fn transplant(n: u32, p: f64, alpha: f64, beta: f64, lo: f64, hi: f64, samples: usize) -> Result<TransplantOut> {
        if !(0.0 < lo && lo < hi && hi < 1.0) {
            return Err(HardyError::Invalid("bump support must satisfy 0 < lo < hi < 1".into()));
        }
        if !(2..=2000).contains(&samples) {
            return Err(HardyError::Invalid("between 2 and 2000 samples".into()));
        }
        let u = bump(lo, hi, 0.0, 0.0, 1.0);
        let residuals = verify_transplant_equivalence(&u, n, p, alpha, beta, 1.0, &QuadratureConfig::default())?;
        let gamma = (n as f64 - alpha) / (beta - 1.0);
        let rs: Vec<f64> = (0..samples).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / samples as f64).collect();
        let curves = Chart::ALL
            .into_iter()
            .map(|chart| {
                let m = radius_map(Chart::Ball, chart, gamma, 1.0)?;
                let ln_r = rs.iter().map(|&r| m.forward_point(&RadialPoint::from_r(r, 1.0)).ln_r()).collect();
                Ok(ChartCurve { chart: chart.to_string(), ln_r })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TransplantOut { gamma, values: rs.iter().map(|&r| u.eval(r)).collect(), curves, residuals })
    }

    pub fn constant_json(params: &str) -> Result<String> {
        Ok(to_json(&constant(&parse(params)?)?))
    }

    pub fn defaults_json(form: &str) -> Result<String> {
        Ok(to_json(&defaults(form)?))
    }

    pub fn sweep_json(params: &str, param: &str, values: &str, delta: f64) -> Result<String> {
        let grid = values
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map_err(|_| HardyError::Invalid(format!("`{s}` is not a number"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(to_json(&sweep(&parse(params)?, param, &grid, delta)?))
    }

    pub fn transplant_json(n: u32, p: f64, alpha: f64, beta: f64, lo: f64, hi: f64, samples: usize) -> Result<String> {
        Ok(to_json(&transplant(n, p, alpha, beta, lo, hi, samples)?))
    }
}

fn js(r: hardylab::Result<String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

/// JSON array of form names.
#[wasm_bindgen]
pub fn forms() -> String {
    serde_json::to_string(&api::forms()).expect("strings serialize")
}

/// JSON of the default parameters of `form`.
#[wasm_bindgen]
pub fn defaults(form: &str) -> Result<String, JsError> {
    js(api::defaults_json(form))
}

/// `params` is `{"form": ..., "n": ..., ...}`; missing fields take the
/// form's defaults.
#[wasm_bindgen]
pub fn constant(params: &str) -> Result<String, JsError> {
    js(api::constant_json(params))
}

/// Rows of `quotient/constant/gap` along `values` of `param` (a, b, gamma).
#[wasm_bindgen]
pub fn sweep(params: &str, param: &str, values: &str, delta: f64) -> Result<String, JsError> {
    js(api::sweep_json(params, param, values, delta))
}

/// Chart images of a bump and the three-chart integral residuals.
#[wasm_bindgen]
pub fn transplant(n: u32, p: f64, alpha: f64, beta: f64, lo: f64, hi: f64, samples: usize) -> Result<String, JsError> {
    js(api::transplant_json(n, p, alpha, beta, lo, hi, samples))
}
