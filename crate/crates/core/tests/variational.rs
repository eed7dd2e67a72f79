use hardylab::constants::{Form, InequalityParams, RawParams};
use hardylab::variational::{el_eigenpair, extrapolate_el, minimize_quotient, solve_el_eigenproblem};
use hardylab::HardyError;

fn params(form: Form, n: u32, p: f64, alpha: f64, beta: f64) -> InequalityParams {
    InequalityParams::new(RawParams { form, n, p, alpha, beta, gamma: 1.0, radius: 1.0, k: 1 }).unwrap()
}

#[test]
fn improved_hardy_infimum_approaches_quarter() {
    for n in [3, 4] {
        let r = minimize_quotient(&params(Form::ImprovedHardy, n, 2.0, 2.0, 2.0), 2048).unwrap();
        let ratio = r.infimum / 0.25;
        assert!((1.0 - 1e-10..1.02).contains(&ratio), "N={n}: {}", r.infimum);
        assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
    }
}

#[test]
fn classical_hardy_infimum() {
    let r = minimize_quotient(&params(Form::ClassicalHardy, 5, 2.0, 2.0, 2.0), 2048).unwrap();
    assert!(r.infimum >= 2.25 && r.infimum < 2.25 * 1.02, "{}", r.infimum);
    assert!(r.concentration > 0.9);
}

#[test]
fn refinement_closes_the_gap() {
    let p = params(Form::ImprovedHardy, 4, 2.0, 2.0, 2.0);
    let gaps: Vec<f64> = [512, 1024, 2048].iter().map(|&m| minimize_quotient(&p, m).unwrap().infimum - 0.25).collect();
    assert!(gaps.iter().all(|&g| g > 0.0));
    assert!(gaps[1] < 0.75 * gaps[0] && gaps[2] < 0.75 * gaps[1], "{gaps:?}");
}

#[test]
fn every_first_order_form_stays_above_its_constant() {
    for form in Form::ALL.into_iter().filter(|f| f.is_first_order()) {
        let p = InequalityParams::new(form.defaults()).unwrap();
        match minimize_quotient(&p, 512) {
            Ok(r) => assert!(r.infimum >= r.sharp_constant * (1.0 - 1e-9), "{form}: {} < {}", r.infimum, r.sharp_constant),
            Err(HardyError::Unsupported(_)) => {}
            Err(e) => panic!("{form}: {e}"),
        }
    }
}

#[test]
fn descent_for_p_other_than_two() {
    let p = params(Form::GeometricHardy, 3, 3.0, 2.0, 3.0);
    let r = minimize_quotient(&p, 1024).unwrap();
    assert!(r.infimum >= r.sharp_constant && r.infimum < 1.05 * r.sharp_constant, "{} vs {}", r.infimum, r.sharp_constant);
    assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn second_order_forms_are_not_discretized() {
    let p = InequalityParams::new(Form::GeometricRellich.defaults()).unwrap();
    assert!(matches!(minimize_quotient(&p, 256), Err(HardyError::Unsupported(_))));
}

#[test]
fn el_eigenvalue_decreases_to_its_bound() {
    let sweep: Vec<_> = [1e-1, 1e-2, 1e-3, 1e-6, 1e-12].iter().map(|&e| el_eigenpair(1.0, 3, e, 4096).unwrap()).collect();
    assert!(sweep.windows(2).all(|w| w[1].lambda <= w[0].lambda && w[1].concentration >= w[0].concentration));
    assert!(sweep.iter().all(|s| s.lambda >= 0.25));
    let pts: Vec<_> = sweep.iter().map(|s| (s.epsilon, s.lambda)).collect();
    let limit = extrapolate_el(&pts).unwrap();
    assert!((limit - 0.25).abs() < 0.02 * 0.25, "{limit}");
}

#[test]
fn el_rejects_bad_input() {
    assert!(matches!(solve_el_eigenproblem(2.0, 3, 1e-2, 1024), Err(HardyError::Inadmissible { .. })));
    assert!(matches!(solve_el_eigenproblem(1.0, 3, 0.3, 1024), Err(HardyError::Inadmissible { .. })));
    assert!(matches!(solve_el_eigenproblem(1.0, 3, 1e-200, 64), Err(HardyError::MeshTooCoarse(_))));
}
