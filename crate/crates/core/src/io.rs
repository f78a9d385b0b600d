//! Trajectory CSV: header `k,x1,..,xn[,u1,..,um]`, one row per time step.

use thiserror::Error;

use crate::stl::{StlError, Trace};

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Stl(#[from] StlError),
}

fn format_err(line: usize, message: impl Into<String>) -> CsvError {
    CsvError::Format {
        line,
        message: message.into(),
    }
}

/// Writes states and inputs; the last row has empty input fields.
pub fn write_trajectory_csv(states: &Trace, inputs: &[Vec<f64>]) -> String {
    let m = inputs.first().map_or(0, Vec::len);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["k".to_string()];
    header.extend((1..=states.dim()).map(|i| format!("x{i}")));
    header.extend((1..=m).map(|i| format!("u{i}")));
    w.write_record(&header).expect("writing to memory");
    for (k, x) in states.samples().iter().enumerate() {
        let mut row = vec![k.to_string()];
        row.extend(x.iter().map(f64::to_string));
        match inputs.get(k) {
            Some(u) => row.extend(u.iter().map(f64::to_string)),
            None => row.extend(std::iter::repeat_n(String::new(), m)),
        }
        w.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is UTF-8")
}

/// Reads the state columns of a trajectory CSV; input columns are ignored.
pub fn read_trace_csv(text: &str) -> Result<Trace, CsvError> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = r.headers()?.clone();
    if header.get(0) != Some("k") {
        return Err(format_err(1, "the first column must be `k`"));
    }
    let mut n = 0;
    for (idx, name) in header.iter().enumerate().skip(1) {
        if name == format!("x{}", n + 1) {
            if idx != n + 1 {
                return Err(format_err(1, "state columns must come right after `k`"));
            }
            n += 1;
        } else if !(name.starts_with('u') && name[1..].parse::<usize>().is_ok()) {
            return Err(format_err(1, format!("unexpected column `{name}`")));
        }
    }
    if n == 0 {
        return Err(format_err(1, "no state columns x1..xn"));
    }
    let mut samples = Vec::new();
    for (row, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map_or(row + 2, |p| p.line() as usize);
        let k: usize = rec
            .get(0)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| format_err(line, "invalid time index"))?;
        if k != samples.len() {
            return Err(format_err(line, format!("expected k = {}, found {k}", samples.len())));
        }
        let x = (1..=n)
            .map(|i| {
                rec.get(i)
                    .and_then(|s| s.parse::<f64>().ok())
                    .ok_or_else(|| format_err(line, format!("invalid value for x{i}")))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        samples.push(x);
    }
    if samples.is_empty() {
        return Err(format_err(2, "no samples"));
    }
    Ok(Trace::new(samples)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let t = Trace::new(vec![vec![0.0, 5.0], vec![1.0, 4.5], vec![0.1, 1e-12]]).unwrap();
        let u = vec![vec![1.0, -0.5], vec![-0.9, -4.5]];
        let text = write_trajectory_csv(&t, &u);
        assert!(text.starts_with("k,x1,x2,u1,u2\n0,0,5,1,-0.5\n"));
        assert!(text.ends_with("2,0.1,0.000000000001,,\n"));
        assert_eq!(read_trace_csv(&text).unwrap(), t);
    }

    #[test]
    fn states_only_and_errors() {
        let t = read_trace_csv("k,x1\n0,1\n1,2\n").unwrap();
        assert_eq!(t.horizon(), 1);
        assert!(read_trace_csv("t,x1\n0,1\n").is_err());
        assert!(read_trace_csv("k,x1\n0,1\n2,2\n").is_err());
        assert!(matches!(
            read_trace_csv("k,x1\n0,1\n1,oops\n"),
            Err(CsvError::Format { line: 3, .. })
        ));
        assert!(read_trace_csv("k,x1\n").is_err());
        assert!(read_trace_csv("k,u1\n0,1\n").is_err());
    }
}
