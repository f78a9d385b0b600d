use crate::stl::{Formula, Interval, Predicate};

use super::lexer::{lex, Spanned, Tok};
use super::{ParseError, ParseErrorKind, RegionTable};

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    regions: &'a RegionTable,
}

/// Parses a formula; `inbox(NAME)` is resolved against `regions`.
pub fn parse_formula_with(text: &str, regions: &RegionTable) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        regions,
    };
    let f = p.or()?;
    if p.peek() != &Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, kind: ParseErrorKind, msg: String) -> ParseError {
        let s = self.here();
        ParseError::new(kind, s.line, s.col, msg)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.error(
            ParseErrorKind::Syntax,
            format!("expected {wanted}, found {}", self.peek().describe()),
        )
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == name)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.and()?];
        while *self.peek() == Tok::Bar {
            self.bump();
            parts.push(self.and()?);
        }
        Ok(Formula::or(parts))
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.until()?];
        while *self.peek() == Tok::Amp {
            self.bump();
            parts.push(self.until()?);
        }
        Ok(Formula::and(parts))
    }

    fn until(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if self.is_ident("U") {
            self.bump();
            let i = self.interval()?;
            let rhs = self.until()?;
            return Ok(Formula::until(lhs, i, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Ident(s) if s == "G" || s == "F" => {
                let always = s == "G";
                self.bump();
                let i = self.interval()?;
                let f = self.unary()?;
                Ok(if always {
                    Formula::always(i, f)
                } else {
                    Formula::eventually(i, f)
                })
            }
            _ => self.atom(),
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        match self.peek() {
            Tok::Int(v) => {
                let v = *v;
                self.bump();
                Ok(v)
            }
            _ => Err(self.unexpected("an integer time bound")),
        }
    }

    /// `[a,b]`, `(a,b)`, `[a,b)`, `(a,b]` or `{k}`, closed on integer time.
    fn interval(&mut self) -> Result<Interval, ParseError> {
        let (line, col) = (self.here().line, self.here().col);
        let (lo, hi) = match self.bump() {
            Tok::LBrace => {
                let k = self.int()?;
                self.expect(Tok::RBrace, "`}`")?;
                (k, k)
            }
            open @ (Tok::LBracket | Tok::LParen) => {
                let a = self.int()?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.int()?;
                let close = match self.peek() {
                    Tok::RBracket | Tok::RParen => self.bump(),
                    _ => return Err(self.unexpected("`]` or `)`")),
                };
                (
                    a + i64::from(open == Tok::LParen),
                    b - i64::from(close == Tok::RParen),
                )
            }
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("an interval"));
            }
        };
        if lo > hi {
            return Err(ParseError::new(
                ParseErrorKind::EmptyInterval,
                line,
                col,
                format!("empty interval: closes to [{lo},{hi}]"),
            ));
        }
        Ok(Interval::new(lo as usize, hi as usize).expect("checked non-empty"))
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.or()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(s) if s == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(s) if s == "false" => {
                self.bump();
                Ok(Formula::falsum())
            }
            Tok::Ident(s) if s == "inbox" => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let name = match self.peek().clone() {
                    Tok::Ident(n) => n,
                    _ => return Err(self.unexpected("a region name")),
                };
                let Some(region) = self.regions.get(&name) else {
                    return Err(self.error(
                        ParseErrorKind::UnknownRegion,
                        format!("unknown region `{name}`"),
                    ));
                };
                self.bump();
                self.expect(Tok::RParen, "`)`")?;
                Ok(region.formula())
            }
            _ => self.predicate(),
        }
    }

    fn predicate(&mut self) -> Result<Formula, ParseError> {
        let (lc, lk) = self.linear()?;
        let ge = match self.peek() {
            Tok::Ge => true,
            Tok::Le => false,
            _ => return Err(self.unexpected("`>=` or `<=`")),
        };
        self.bump();
        let (rc, rk) = self.linear()?;
        let n = lc.len().max(rc.len());
        let sign = if ge { 1.0 } else { -1.0 };
        let coeffs = (0..n)
            .map(|i| sign * (lc.get(i).unwrap_or(&0.0) - rc.get(i).unwrap_or(&0.0)))
            .collect();
        Ok(Formula::pred(Predicate::new(coeffs, sign * (lk - rk))))
    }

    /// `[+|-] term {(+|-) term}` with `term = number | var | number * var`.
    fn linear(&mut self) -> Result<(Vec<f64>, f64), ParseError> {
        let mut coeffs: Vec<f64> = Vec::new();
        let mut constant = 0.0;
        let mut first = true;
        loop {
            let mut sign = 1.0;
            match self.peek() {
                Tok::Plus | Tok::Minus => {
                    if self.bump() == Tok::Minus {
                        sign = -1.0;
                    }
                }
                _ if first => {}
                _ => break,
            }
            first = false;
            let (c, var) = match self.peek().clone() {
                Tok::Int(v) => {
                    self.bump();
                    self.term_tail(v as f64)?
                }
                Tok::Num(v) => {
                    self.bump();
                    self.term_tail(v)?
                }
                Tok::Ident(_) => (1.0, Some(self.var()?)),
                _ => return Err(self.unexpected("a number or a state variable")),
            };
            match var {
                Some(i) => {
                    if coeffs.len() <= i {
                        coeffs.resize(i + 1, 0.0);
                    }
                    coeffs[i] += sign * c;
                }
                None => constant += sign * c,
            }
        }
        Ok((coeffs, constant))
    }

    fn term_tail(&mut self, c: f64) -> Result<(f64, Option<usize>), ParseError> {
        if *self.peek() == Tok::Star {
            self.bump();
            return Ok((c, Some(self.var()?)));
        }
        Ok((c, None))
    }

    /// State variable `x1`, `x2`, ... as a zero-based index.
    fn var(&mut self) -> Result<usize, ParseError> {
        if let Tok::Ident(s) = self.peek() {
            if let Some(i) = s
                .strip_prefix('x')
                .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|i| *i >= 1)
            {
                self.bump();
                return Ok(i - 1);
            }
            let msg = format!("unknown identifier `{s}` (state variables are x1, x2, ...)");
            return Err(self.error(ParseErrorKind::Syntax, msg));
        }
        Err(self.unexpected("a state variable"))
    }
}

/// Deterministic text that parses back to the same formula.
pub fn format_formula_with(phi: &Formula, regions: &RegionTable) -> String {
    let mut out = String::new();
    write_formula(&mut out, phi, regions, false);
    out
}

fn region_name<'a>(phi: &Formula, regions: &'a RegionTable) -> Option<&'a str> {
    if !matches!(phi, Formula::And(_)) {
        return None;
    }
    regions
        .iter()
        .find(|(_, r)| r.formula() == *phi)
        .map(|(n, _)| n.as_str())
}

fn write_formula(out: &mut String, phi: &Formula, regions: &RegionTable, nested: bool) {
    if let Some(name) = region_name(phi, regions) {
        out.push_str("inbox(");
        out.push_str(name);
        out.push(')');
        return;
    }
    let compound = matches!(phi, Formula::And(_) | Formula::Or(_) | Formula::Until(..));
    if nested && compound {
        out.push('(');
    }
    match phi {
        Formula::True => out.push_str("true"),
        Formula::Pred(p) => out.push_str(&format_predicate(p)),
        Formula::Not(f) => {
            out.push('!');
            write_formula(out, f, regions, true);
        }
        Formula::And(fs) | Formula::Or(fs) => {
            let sep = if matches!(phi, Formula::And(_)) { " & " } else { " | " };
            for (i, f) in fs.iter().enumerate() {
                if i > 0 {
                    out.push_str(sep);
                }
                write_formula(out, f, regions, true);
            }
        }
        Formula::Until(l, i, r) => {
            write_formula(out, l, regions, true);
            out.push_str(&format!(" U{i} "));
            write_formula(out, r, regions, true);
        }
        Formula::Always(i, f) | Formula::Eventually(i, f) => {
            out.push(if matches!(phi, Formula::Always(..)) { 'G' } else { 'F' });
            out.push_str(&format!("{i} "));
            write_formula(out, f, regions, true);
        }
    }
    if nested && compound {
        out.push(')');
    }
}

/// `x1 - 2*x2 >= c` form of `coeffs . x + offset >= 0`; written with `<=` when the
/// leading coefficient is negative.
pub fn format_predicate(p: &Predicate) -> String {
    let flip = p.coeffs().iter().find(|c| **c != 0.0).is_some_and(|c| *c < 0.0);
    let sign = if flip { -1.0 } else { 1.0 };
    let mut s = String::new();
    for (i, &c) in p.coeffs().iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let c = sign * c;
        let mag = c.abs();
        if !s.is_empty() {
            s.push_str(if c < 0.0 { " - " } else { " + " });
        }
        if mag != 1.0 {
            s.push_str(&format!("{mag}*"));
        }
        s.push_str(&format!("x{}", i + 1));
    }
    if s.is_empty() {
        s.push('0');
    }
    let rhs = if p.offset() == 0.0 { 0.0 } else { -sign * p.offset() };
    format!("{s} {} {rhs}", if flip { "<=" } else { ">=" })
}
