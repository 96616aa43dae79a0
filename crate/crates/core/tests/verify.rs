use std::collections::BTreeMap;

use proptest::prelude::*;
use singular_heat::fields::{make_grid, GridFunction, Params};
use singular_heat::scheme::{monotone_solve, SolveConfig};
use singular_heat::verify::*;
use singular_heat::{Error, InitialData};

#[test]
fn gronwall_exponential_case_is_exact() {
    let inst = GronwallInstance {
        a: 2.0,
        m: 0.5,
        alpha: 0.0,
        t: 2.0,
    };
    let psi = gronwall_extremal(&inst, 4096).unwrap();
    let err = psi
        .iter()
        .map(|(t, v)| (v - 2.0 * (0.5 * t).exp()).abs())
        .fold(0.0, f64::max);
    assert!(err <= 1e-6, "{err:e}");
    assert!(check_gronwall(&inst, 4096).unwrap().pass);
}

#[test]
fn gronwall_zero_data_stays_zero() {
    let inst = GronwallInstance {
        a: 0.0,
        m: 1.0,
        alpha: 0.5,
        t: 1.0,
    };
    let psi = gronwall_extremal(&inst, 1024).unwrap();
    assert!(psi.iter().all(|(_, v)| v.abs() <= 1e-12));
    assert!(check_gronwall(&inst, 1024).unwrap().pass);
}

#[test]
fn gronwall_rejects_bad_instances() {
    let bad = GronwallInstance {
        a: 1.0,
        m: 1.0,
        alpha: 1.0,
        t: 1.0,
    };
    assert!(gronwall_extremal(&bad, 256).is_err());
    let few = GronwallInstance {
        a: 1.0,
        m: 1.0,
        alpha: 0.5,
        t: 1.0,
    };
    assert!(gronwall_extremal(&few, 8).is_err());
}

#[test]
fn lambda_limit_reports_the_deviations() {
    let r = check_lambda_limit(0.2, 1, &[0.1, 0.01, 0.001]).unwrap();
    assert!(r.pass, "{}", r.summary_line());
    let dev: Vec<f64> = serde_json::from_value(r.parameters["deviations"].clone()).unwrap();
    assert_eq!(dev.len(), 3);
    assert!(dev.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn property_sweeps() {
    assert!(check_positive_part_sweep(0.3, 2000, 5).unwrap().pass);
    assert!(check_g_n_properties(0.7, 2000, 6).unwrap().pass);
}

#[test]
fn radial_maximum_for_every_profile_kind() {
    let grid = make_grid(2, 6.0, 48).unwrap();
    let profiles = [
        RadialProfile::Constant { value: 2.0 },
        RadialProfile::Indicator { radius: 1.5 },
        RadialProfile::Exponential { rate: 0.7 },
        RadialProfile::Steps {
            radii: vec![0.5, 2.0],
            heights: vec![3.0, 1.0],
        },
    ];
    for p in &profiles {
        let r = check_max_at_origin(p, 0.5, &grid).unwrap();
        assert!(r.pass, "{p:?}: {}", r.summary_line());
    }
}

#[test]
fn increasing_profile_is_an_input_error() {
    let p = RadialProfile::Tabulated {
        radii: vec![0.0, 1.0, 2.0],
        values: vec![0.0, 1.0, 2.0],
    };
    let grid = make_grid(1, 4.0, 32).unwrap();
    assert!(matches!(check_max_at_origin(&p, 1.0, &grid), Err(Error::Input(_))));
}

#[test]
fn heaviside_needs_one_dimension() {
    let grid = make_grid(2, 4.0, 16).unwrap();
    assert!(matches!(check_heaviside_gap(&[1.0], &grid), Err(Error::Input(_))));
}

#[test]
fn smoothing_needs_a_decade() {
    assert!(matches!(
        check_smoothing_exponent(0.3, 1, &[1.0, 2.0]),
        Err(Error::Input(_))
    ));
}

#[test]
fn lower_bound_from_zero_data() {
    let params = Params::new(1, 0.5, 0.3).unwrap();
    let grid = default_grid(1).unwrap();
    let config = SolveConfig {
        output_times: vec![0.5, 1.0],
        ..SolveConfig::default()
    };
    let traj = monotone_solve(&GridFunction::zeros(grid), &params, &config).unwrap();
    let r = check_lower_bound(&traj, &params, 5e-3).unwrap();
    assert!(r.pass, "{}", r.summary_line());
    assert!(r.witnesses.len() <= 3);
}

#[test]
fn comparison_of_scaled_data() {
    let params = Params::new(1, 0.5, 0.3).unwrap();
    let grid = make_grid(1, 12.0, 128).unwrap();
    let v0 = InitialData::Gauss { a: 0.5 }.sample(&grid).unwrap();
    let u0 = v0.scale(2.0);
    let r = check_comparison(&u0, &v0, &params, &SolveConfig::default(), 1e-6).unwrap();
    assert!(r.pass, "{}", r.summary_line());
}

#[test]
fn envelope_grows_with_time() {
    let a = uniqueness_envelope(0.5, 0.1, 1, 0.5).unwrap();
    let b = uniqueness_envelope(0.5, 0.1, 1, 1.0).unwrap();
    assert!(b > a && a > 0.0);
}

#[test]
fn merged_report_fails_when_any_part_fails() {
    let ok = CheckReport::new("a", BTreeMap::new(), 1.0, 1e-3, vec![]);
    let bad = CheckReport::new("b", BTreeMap::new(), -1.0, 1e-2, vec![Witness::new("x", &[("v", 1.0)])]);
    let m = CheckReport::merge("ab", BTreeMap::new(), vec![ok.clone(), bad]);
    assert!(!m.pass);
    assert_eq!(m.witnesses[0].location, "case 1: x");
    let m = CheckReport::merge("aa", BTreeMap::new(), vec![ok.clone(), ok]);
    assert!(m.pass);
}

#[test]
fn error_reports_fail() {
    let r = CheckReport::from_error("x", &Error::Regime("too far".into()));
    assert!(!r.pass);
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["worst_margin"], serde_json::Value::Null);
    assert!(json["error"].as_str().unwrap().contains("too far"));
}

#[test]
fn quick_suite_names_and_order() {
    let names: Vec<String> = run_suite(Suite::Quick).into_iter().map(|r| r.name).collect();
    assert_eq!(
        names,
        [
            "gronwall",
            "lambda_limit",
            "positive_part",
            "g_n_properties",
            "smoothing_exponent",
            "heaviside_gap",
            "max_at_origin"
        ]
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn report_pass_rule_survives_json(margin in -1.0f64..1.0, tol in 0.0f64..0.5, v in -1e6f64..1e6) {
        let r = CheckReport::new("p", BTreeMap::new(), margin, tol, vec![Witness::new("here", &[("v", v)])]);
        prop_assert_eq!(r.pass, margin >= -tol);
        let back: CheckReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert_eq!(back, r);
    }
}
