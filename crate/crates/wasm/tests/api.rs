use hardylab_wasm::api;
use serde_json::Value;

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn constants_from_json() {
    let v = json(&api::constant_json(r#"{"form": "classical-hardy", "n": 5, "p": 2, "alpha": 2}"#).unwrap());
    assert_eq!(v["constant"], 2.25);
    assert_eq!(v["admissible"], true);
    let v = json(&api::constant_json(r#"{"form": "improved-rellich-b-p2", "gamma": 1}"#).unwrap());
    assert!((v["constant"].as_f64().unwrap() - 0.5625).abs() < 1e-14);
}

#[test]
fn inadmissible_input_is_reported_in_band() {
    let v = json(&api::constant_json(r#"{"form": "improved-hardy", "gamma": 0}"#).unwrap());
    assert_eq!(v["admissible"], false);
    assert!(v["constant"].is_null());
    assert_eq!(v["error"], "improved-hardy: γ > 0 required");
    assert!(api::constant_json(r#"{"form": "nope"}"#).is_err());
    assert!(api::constant_json("not json").is_err());
}

#[test]
fn forms_and_defaults() {
    let forms = api::forms();
    assert_eq!(forms.len(), 18);
    for f in forms {
        let d = json(&api::defaults_json(f).unwrap());
        assert_eq!(d["form"], f);
    }
}

#[test]
fn sweep_rows() {
    let rows = json(&api::sweep_json(r#"{"form": "improved-hardy", "alpha": 1, "gamma": 2}"#, "a", "0.6, 0.55, 0.51", 0.05).unwrap());
    let gaps: Vec<f64> = rows.as_array().unwrap().iter().map(|r| r["gap"].as_f64().unwrap()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));
    assert!(api::sweep_json(r#"{"form": "improved-hardy"}"#, "a", "", 0.05).is_err());
    assert!(api::sweep_json(r#"{"form": "improved-hardy"}"#, "q", "1", 0.05).is_err());
}

#[test]
fn transplant_curves() {
    let v = json(&api::transplant_json(3, 2.0, 1.0, 2.0, 0.2, 0.8, 50).unwrap());
    assert_eq!(v["gamma"], 2.0);
    let curves = v["curves"].as_array().unwrap();
    assert_eq!(curves.len(), 3);
    for c in curves {
        let ln_r: Vec<f64> = c["ln_r"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        assert_eq!(ln_r.len(), 50);
        assert!(ln_r.windows(2).all(|w| w[1] > w[0]), "{}", c["chart"]);
    }
    assert!(v["residuals"]["residual_grad"].as_f64().unwrap() < 1e-8);
    assert!(v["residuals"]["residual_mass"].as_f64().unwrap() < 1e-8);
    assert!(api::transplant_json(3, 2.0, 1.0, 2.0, 0.8, 0.2, 50).is_err());
}
