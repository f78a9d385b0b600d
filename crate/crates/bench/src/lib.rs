//! Fixtures shared by the criterion benchmarks in `benches/`.

use stlsplit_core::casestudy::build_casestudy;
use stlsplit_core::milp::{encode, MilpModel};
use stlsplit_core::parser::{parse_formula, ScenarioFile};
use stlsplit_core::stl::Formula;

/// The case study's first window model: 16 steps, no target.
pub fn first_window_model() -> MilpModel {
    let s = build_casestudy();
    let phi = first_window_formula(&s);
    encode(&s.x0, 15, &phi, &s.system, s.params).expect("the first window encodes")
}

pub fn first_window_formula(s: &ScenarioFile) -> Formula {
    s.split().expect("the case study splits").windows[0].phi_bar()
}

/// A fragment of length 8 over the axis atoms, the largest the oracle corpus uses.
pub fn oracle_formula() -> Formula {
    parse_formula("G[0,8] (x1 >= 0 | x2 >= 0) & G[0,5] F[0,3] x1 >= 0 & F[2,6] G[0,2] x2 >= 0")
        .expect("literal formula parses")
}
