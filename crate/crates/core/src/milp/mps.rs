//! Fixed-format MPS writer and a whitespace-delimited reader for round trips.

use std::collections::HashMap;
use std::fmt::Write;

use super::program::{LinearProgram, Sense};
use super::{MilpError, MilpModel};

const OBJ: &str = "OBJ";

fn num(v: f64) -> String {
    let plain = format!("{v}");
    if plain.len() <= 12 {
        plain
    } else {
        format!("{v:e}")
    }
}

fn field_line(out: &mut String, code: &str, f2: &str, f3: &str, f4: &str) {
    let line = format!(" {code:<2} {f2:<8}  {f3:<8}  {f4:>12}");
    out.push_str(line.trim_end());
    out.push('\n');
}

/// Writes the model's program in fixed-format MPS.
pub fn export_mps(model: &MilpModel) -> String {
    write_program(&model.program, "STLSPLIT")
}

pub(crate) fn write_program(lp: &LinearProgram, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "NAME          {name}").unwrap();
    out.push_str("ROWS\n");
    field_line(&mut out, "N", OBJ, "", "");
    for c in &lp.constraints {
        let code = match c.sense {
            Sense::Le => "L",
            Sense::Ge => "G",
            Sense::Eq => "E",
        };
        field_line(&mut out, code, &c.name, "", "");
    }
    let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); lp.vars.len()];
    for (i, c) in lp.constraints.iter().enumerate() {
        for &(j, a) in &c.coeffs {
            columns[j].push((i, a));
        }
    }
    out.push_str("COLUMNS\n");
    let mut in_int = false;
    let mut markers = 0;
    for (j, v) in lp.vars.iter().enumerate() {
        if v.integer != in_int {
            let tag = if v.integer { "'INTORG'" } else { "'INTEND'" };
            let marker = format!("M{markers}");
            markers += 1;
            let line = format!("    {marker:<8}  {:<8}  {tag:>12}", "'MARKER'");
            out.push_str(&line);
            out.push('\n');
            in_int = v.integer;
        }
        let cost = lp.objective[j];
        if cost != 0.0 || columns[j].is_empty() {
            field_line(&mut out, "", &v.name, OBJ, &num(cost));
        }
        for &(i, a) in &columns[j] {
            field_line(&mut out, "", &v.name, &lp.constraints[i].name, &num(a));
        }
    }
    if in_int {
        let line = format!("    M{markers:<7}  {:<8}  {:>12}", "'MARKER'", "'INTEND'");
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("RHS\n");
    for c in &lp.constraints {
        if c.rhs != 0.0 {
            field_line(&mut out, "", "RHS", &c.name, &num(c.rhs));
        }
    }
    out.push_str("BOUNDS\n");
    for v in &lp.vars {
        let (lo, hi) = (v.lo, v.hi);
        if lo == hi {
            field_line(&mut out, "FX", "BND", &v.name, &num(lo));
        } else if lo == f64::NEG_INFINITY && hi == f64::INFINITY {
            field_line(&mut out, "FR", "BND", &v.name, "");
        } else {
            if lo == f64::NEG_INFINITY {
                field_line(&mut out, "MI", "BND", &v.name, "");
            } else if lo != 0.0 || v.integer || hi.is_finite() {
                field_line(&mut out, "LO", "BND", &v.name, &num(lo));
            }
            if hi != f64::INFINITY {
                field_line(&mut out, "UP", "BND", &v.name, &num(hi));
            }
        }
    }
    out.push_str("ENDATA\n");
    out
}

fn err(line: usize, message: impl Into<String>) -> MilpError {
    MilpError::Mps {
        line,
        message: message.into(),
    }
}

fn parse_num(line: usize, s: &str) -> Result<f64, MilpError> {
    s.parse()
        .map_err(|_| err(line, format!("invalid number '{s}'")))
}

/// Reads an MPS document written by [`export_mps`] (or any whitespace-delimited
/// MPS without spaces in names). Constraint coefficients come back ordered by
/// column.
pub fn parse_mps(text: &str) -> Result<LinearProgram, MilpError> {
    let mut lp = LinearProgram::default();
    let mut obj_row: Option<String> = None;
    let mut rows: HashMap<String, usize> = HashMap::new();
    let mut cols: HashMap<String, usize> = HashMap::new();
    let mut section = "";
    let mut integer = false;
    let mut bounded: Vec<bool> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let tok: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with(' ') {
            section = match tok[0] {
                "NAME" => "NAME",
                "ROWS" => "ROWS",
                "COLUMNS" => "COLUMNS",
                "RHS" => "RHS",
                "BOUNDS" => "BOUNDS",
                "ENDATA" => break,
                other => return Err(err(line, format!("unknown section '{other}'"))),
            };
            continue;
        }
        match section {
            "ROWS" => {
                if tok.len() != 2 {
                    return Err(err(line, "row line needs a type and a name"));
                }
                let sense = match tok[0] {
                    "N" => {
                        if obj_row.is_none() {
                            obj_row = Some(tok[1].to_string());
                        }
                        continue;
                    }
                    "L" => Sense::Le,
                    "G" => Sense::Ge,
                    "E" => Sense::Eq,
                    t => return Err(err(line, format!("unknown row type '{t}'"))),
                };
                rows.insert(tok[1].to_string(), lp.constraints.len());
                lp.add_constraint(tok[1].to_string(), Vec::new(), sense, 0.0);
            }
            "COLUMNS" => {
                if tok.len() == 3 && tok[1] == "'MARKER'" {
                    integer = match tok[2] {
                        "'INTORG'" => true,
                        "'INTEND'" => false,
                        t => return Err(err(line, format!("unknown marker {t}"))),
                    };
                    continue;
                }
                if tok.len() != 3 && tok.len() != 5 {
                    return Err(err(line, "column line needs 3 or 5 fields"));
                }
                let j = match cols.get(tok[0]) {
                    Some(&j) => j,
                    None => {
                        let j = lp.add_var(tok[0].to_string(), 0.0, f64::INFINITY, integer);
                        bounded.push(false);
                        cols.insert(tok[0].to_string(), j);
                        j
                    }
                };
                for pair in tok[1..].chunks(2) {
                    let a = parse_num(line, pair[1])?;
                    if Some(pair[0]) == obj_row.as_deref() {
                        lp.objective[j] = a;
                    } else {
                        let i = *rows
                            .get(pair[0])
                            .ok_or_else(|| err(line, format!("unknown row '{}'", pair[0])))?;
                        lp.constraints[i].coeffs.push((j, a));
                    }
                }
            }
            "RHS" => {
                if tok.len() != 3 && tok.len() != 5 {
                    return Err(err(line, "rhs line needs 3 or 5 fields"));
                }
                for pair in tok[1..].chunks(2) {
                    let v = parse_num(line, pair[1])?;
                    if Some(pair[0]) == obj_row.as_deref() {
                        continue;
                    }
                    let i = *rows
                        .get(pair[0])
                        .ok_or_else(|| err(line, format!("unknown row '{}'", pair[0])))?;
                    lp.constraints[i].rhs = v;
                }
            }
            "BOUNDS" => {
                if tok.len() < 3 {
                    return Err(err(line, "bound line needs a type, a set and a column"));
                }
                let j = *cols
                    .get(tok[2])
                    .ok_or_else(|| err(line, format!("unknown column '{}'", tok[2])))?;
                let value = || {
                    tok.get(3)
                        .ok_or_else(|| err(line, "missing bound value"))
                        .and_then(|s| parse_num(line, s))
                };
                let v = &mut lp.vars[j];
                match tok[0] {
                    "FX" => {
                        let x = value()?;
                        v.lo = x;
                        v.hi = x;
                    }
                    "FR" => {
                        v.lo = f64::NEG_INFINITY;
                        v.hi = f64::INFINITY;
                    }
                    "MI" => v.lo = f64::NEG_INFINITY,
                    "PL" => v.hi = f64::INFINITY,
                    "LO" => v.lo = value()?,
                    "UP" => v.hi = value()?,
                    "BV" => {
                        v.lo = 0.0;
                        v.hi = 1.0;
                        v.integer = true;
                    }
                    t => return Err(err(line, format!("unknown bound type '{t}'"))),
                }
                bounded[j] = true;
            }
            _ => return Err(err(line, "data line outside a section")),
        }
    }
    for (j, v) in lp.vars.iter_mut().enumerate() {
        // Integer columns without bounds are binaries.
        if v.integer && !bounded[j] {
            v.hi = 1.0;
        }
    }
    Ok(lp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::{encode, EncodeParams, LinearSystem};
    use crate::parser::parse_formula;

    fn normalized(lp: &LinearProgram) -> LinearProgram {
        let mut lp = lp.clone();
        for c in &mut lp.constraints {
            c.coeffs.retain(|(_, a)| *a != 0.0);
            c.coeffs.sort_by_key(|(j, _)| *j);
        }
        lp
    }

    fn example() -> MilpModel {
        let phi = parse_formula("G[0,1] x1 >= 0").unwrap();
        let sys = LinearSystem::single_integrator(1, 1.0);
        encode(&[1.0], 1, &phi, &sys, EncodeParams::default()).unwrap()
    }

    #[test]
    fn markers_surround_binaries() {
        let text = export_mps(&example());
        assert!(text.starts_with("NAME"));
        assert!(text.ends_with("ENDATA\n"));
        let org = text.matches("'INTORG'").count();
        assert_eq!(org, text.matches("'INTEND'").count());
        assert!(org >= 1);
        let pos = |s: &str| text.find(s).unwrap();
        assert!(pos("'INTORG'") < pos("    z_") && pos("    z_") < pos("'INTEND'"));
        assert!(text.contains(" FX BND       x_0_1"));
    }

    #[test]
    fn fixed_columns() {
        let text = export_mps(&example());
        let line = text.lines().find(|l| l.starts_with("    u_0_1 ")).unwrap();
        assert_eq!(&line[4..12], "u_0_1   ");
        assert_eq!(line[14..22].trim_end(), "dyn_0_1");
        assert_eq!(line[24..36].trim_start(), "-1");
    }

    #[test]
    fn round_trip() {
        let model = example();
        let back = parse_mps(&export_mps(&model)).unwrap();
        assert_eq!(normalized(&back), normalized(&model.program));
    }

    #[test]
    fn empty_constraint_model() {
        let mut lp = LinearProgram::default();
        lp.add_var("x".into(), -1.0, 2.0, false);
        lp.add_var("y".into(), f64::NEG_INFINITY, f64::INFINITY, false);
        let text = write_program(&lp, "EMPTY");
        assert!(text.contains("BOUNDS\n LO BND       x"));
        assert!(text.contains(" FR BND       y"));
        assert_eq!(parse_mps(&text).unwrap(), lp);
    }

    #[test]
    fn long_numbers_round_trip() {
        let mut lp = LinearProgram::default();
        let x = lp.add_var("x".into(), 0.0, 1.0, true);
        lp.objective[x] = 1.0 / 3.0;
        lp.add_constraint("r".into(), vec![(x, 1e-30)], Sense::Le, 1e300);
        let text = write_program(&lp, "T");
        assert_eq!(parse_mps(&text).unwrap(), lp);
    }

    #[test]
    fn reports_bad_lines() {
        assert!(matches!(
            parse_mps("ROWS\n Q  r\n"),
            Err(MilpError::Mps { line: 2, .. })
        ));
        assert!(parse_mps("COLUMNS\n    x  nope  1\n").is_err());
    }
}
