use stlsplit_core::casestudy::{build_casestudy, run_scenario_modular};
use stlsplit_core::io::{read_trace_csv, write_trajectory_csv};
use stlsplit_core::parser::{format_scenario, parse_scenario};
use stlsplit_core::stl::evaluate;

#[test]
fn modular_synthesis_meets_the_mission() {
    let s = build_casestudy();
    let r = run_scenario_modular(&s).unwrap();
    assert!(r.final_verdict);
    assert_eq!(r.states.len(), 46);
    assert_eq!(r.inputs.len(), 45);
    assert!(evaluate(&r.states, 0, &s.formula()).unwrap());
    assert!(r.verdict.overall);
    assert_eq!(r.per_window.len(), 3);
    assert!(r.per_window[1].used_fallback);
    assert_eq!(r.target_achieved_window, Some(3));
    assert_eq!((r.metrics.n, r.metrics.l, r.metrics.n_bar, r.metrics.l_bar), (4, 45, 6, 15));
    assert!(r.robustness >= 0.0);
    let csv = write_trajectory_csv(&r.states, &r.inputs);
    assert_eq!(read_trace_csv(&csv).unwrap(), r.states);
}

#[test]
fn shipped_scenario_file_is_the_case_study() {
    let text = include_str!("../../../scenarios/casestudy.spec");
    assert_eq!(parse_scenario(text).unwrap(), build_casestudy());
    assert_eq!(parse_scenario(&format_scenario(&build_casestudy())).unwrap(), build_casestudy());
}
