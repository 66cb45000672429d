//! Line-oriented instance format:
//!
//! ```text
//! moip 1
//! objectives 2
//! variables 2
//! var 0 2
//! var 0 2
//! C
//! 2 1
//! 1 2
//! constraints 1
//! 1 1 <= 2 dualized
//! ```
//!
//! `#` starts a comment. Numbers are decimals or rationals `p/q`. Only the
//! `<=` relation is accepted; the trailing `dualized` keyword is optional.

use std::fmt::Write as _;

use crate::error::{MoipError, Result};
use crate::model::MoipInstance;

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

struct Lines<'a> {
    lines: Vec<(usize, Vec<Token<'a>>)>,
    pos: usize,
    last_line: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> MoipError {
    MoipError::Parse { line, column, message: message.into() }
}

fn tokenize(text: &str) -> Lines<'_> {
    let mut lines = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        last_line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut toks = Vec::new();
        let mut start = None;
        for (j, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(j),
                (true, Some(s)) => {
                    toks.push(Token { text: &body[s..j], line: i + 1, column: body[..s].chars().count() + 1 });
                    start = None;
                }
                _ => {}
            }
        }
        if !toks.is_empty() {
            lines.push((i + 1, toks));
        }
    }
    Lines { lines, pos: 0, last_line }
}

impl<'a> Lines<'a> {
    fn next(&mut self, what: &str) -> Result<&[Token<'a>]> {
        match self.lines.get(self.pos) {
            Some((_, toks)) => {
                self.pos += 1;
                Ok(toks)
            }
            None => Err(err(self.last_line + 1, 1, format!("unexpected end of input, expected {what}"))),
        }
    }

    fn header(&mut self, key: &str) -> Result<usize> {
        let toks = self.next(&format!("`{key}`"))?;
        expect_keyword(&toks[0], key)?;
        expect_len(toks, 2, &format!("`{key} <count>`"))?;
        parse_count(&toks[1])
    }
}

fn expect_keyword(t: &Token, key: &str) -> Result<()> {
    if t.text == key {
        Ok(())
    } else {
        Err(err(t.line, t.column, format!("expected `{key}`, found `{}`", t.text)))
    }
}

fn expect_len(toks: &[Token], n: usize, shape: &str) -> Result<()> {
    if toks.len() == n {
        return Ok(());
    }
    let t = toks.get(n).unwrap_or(&toks[toks.len() - 1]);
    Err(err(t.line, t.column, format!("expected {shape} ({n} fields), found {} fields", toks.len())))
}

fn parse_count(t: &Token) -> Result<usize> {
    t.text.parse().map_err(|_| err(t.line, t.column, format!("expected a count, found `{}`", t.text)))
}

fn parse_int(t: &Token) -> Result<i64> {
    t.text.parse().map_err(|_| err(t.line, t.column, format!("expected an integer, found `{}`", t.text)))
}

fn parse_number(t: &Token) -> Result<f64> {
    let bad = || err(t.line, t.column, format!("expected a number, found `{}`", t.text));
    let v = match t.text.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.parse().map_err(|_| bad())?;
            let q: f64 = q.parse().map_err(|_| bad())?;
            if q == 0.0 {
                return Err(err(t.line, t.column, "zero denominator"));
            }
            p / q
        }
        None => t.text.parse().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

pub fn parse_instance(text: &str) -> Result<MoipInstance> {
    let mut lines = tokenize(text);
    let toks = lines.next("`moip 1`")?;
    expect_keyword(&toks[0], "moip")?;
    expect_len(toks, 2, "`moip 1`")?;
    if toks[1].text != "1" {
        return Err(err(toks[1].line, toks[1].column, format!("unsupported version `{}`", toks[1].text)));
    }
    let k = lines.header("objectives")?;
    let n = lines.header("variables")?;
    let mut boxes = Vec::with_capacity(n);
    for _ in 0..n {
        let toks = lines.next("`var lo hi`")?;
        expect_keyword(&toks[0], "var")?;
        expect_len(toks, 3, "`var lo hi`")?;
        let (lo, hi) = (parse_int(&toks[1])?, parse_int(&toks[2])?);
        if lo > hi {
            return Err(err(toks[1].line, toks[1].column, format!("empty box [{lo}, {hi}]")));
        }
        boxes.push((lo, hi));
    }
    let toks = lines.next("`C`")?;
    expect_keyword(&toks[0], "C")?;
    expect_len(toks, 1, "`C`")?;
    let mut c = Vec::with_capacity(k);
    for _ in 0..k {
        let toks = lines.next("an objective row")?;
        expect_len(toks, n, "an objective row")?;
        c.push(toks.iter().map(parse_number).collect::<Result<Vec<f64>>>()?);
    }
    let m = lines.header("constraints")?;
    let (mut a, mut b, mut dualized) = (Vec::with_capacity(m), Vec::with_capacity(m), Vec::new());
    for i in 0..m {
        let toks = lines.next("a constraint row")?;
        if toks.len() < n + 2 || toks.len() > n + 3 {
            let t = &toks[toks.len().min(n + 2) - 1];
            return Err(err(t.line, t.column, format!("expected `a1 .. a{n} <= rhs [dualized]`")));
        }
        a.push(toks[..n].iter().map(parse_number).collect::<Result<Vec<f64>>>()?);
        let rel = &toks[n];
        if rel.text != "<=" {
            return Err(err(rel.line, rel.column, format!("unsupported relation `{}`, expected `<=`", rel.text)));
        }
        b.push(parse_number(&toks[n + 1])?);
        if let Some(t) = toks.get(n + 2) {
            expect_keyword(t, "dualized")?;
            dualized.push(i);
        }
    }
    if let Some((line, toks)) = lines.lines.get(lines.pos) {
        return Err(err(*line, toks[0].column, format!("unexpected trailing content `{}`", toks[0].text)));
    }
    MoipInstance::new(c, a, b, dualized, boxes)
}

/// Writes the format above; numbers use the shortest representation that
/// parses back to the same value.
pub fn serialize_instance(inst: &MoipInstance) -> String {
    let join = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    let _ = writeln!(out, "moip 1\nobjectives {}\nvariables {}", inst.k(), inst.n());
    for (lo, hi) in inst.boxes() {
        let _ = writeln!(out, "var {lo} {hi}");
    }
    out.push_str("C\n");
    for row in inst.c() {
        let _ = writeln!(out, "{}", join(row));
    }
    let _ = writeln!(out, "constraints {}", inst.m());
    for (i, (row, rhs)) in inst.a().iter().zip(inst.b()).enumerate() {
        let tail = if inst.is_dualized(i) { " dualized" } else { "" };
        let _ = writeln!(out, "{} <= {rhs}{tail}", join(row));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE5: &str = "# two-objective knapsack\nmoip 1\nobjectives 2\nvariables 2\nvar 0 2\nvar 0 2\nC\n2 1\n1 2\nconstraints 1\n1 1 <= 2\n";

    #[test]
    fn parses_example() {
        let inst = parse_instance(EXAMPLE5).unwrap();
        assert_eq!(inst.c(), &[vec![2.0, 1.0], vec![1.0, 2.0]]);
        assert_eq!(inst.b(), &[2.0]);
        assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn rationals_and_dualized() {
        let text = "moip 1\nobjectives 2\nvariables 2\nvar 0 1\nvar 0 1\nC\n1 -1/2\n-1/2 1\nconstraints 1\n1 1 <= 3/2 dualized\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.c()[0], vec![1.0, -0.5]);
        assert_eq!(inst.b(), &[1.5]);
        assert_eq!(inst.dualized(), &[0]);
    }

    #[test]
    fn bad_relation_named() {
        let text = EXAMPLE5.replace("1 1 <= 2", "1 1 >= 2");
        match parse_instance(&text) {
            Err(MoipError::Parse { line, column, message }) => {
                assert_eq!((line, column), (11, 5));
                assert!(message.contains("`>=`"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn truncated_input() {
        let text: String = EXAMPLE5.lines().take(8).collect::<Vec<_>>().join("\n");
        assert!(matches!(parse_instance(&text), Err(MoipError::Parse { line: 9, .. })));
    }

    #[test]
    fn bad_number_position() {
        let text = EXAMPLE5.replace("2 1\n", "2 x\n");
        assert!(matches!(parse_instance(&text), Err(MoipError::Parse { line: 8, column: 3, .. })));
    }
}
