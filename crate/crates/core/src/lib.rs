//! Timing separation, complete split and modularized MILP synthesis for
//! discrete-time Signal Temporal Logic.

pub mod casestudy;
pub mod io;
pub mod milp;
pub mod modular;
pub mod parser;
pub mod separation;
pub mod split;
pub mod stl;
