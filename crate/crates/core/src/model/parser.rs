use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::OdeModel;
use crate::algebra::{Field, RatFunc, Rational, Var};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(Rational),
    Sym(char),
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Removes a trailing `#` comment. A `#` glued to an identifier and followed
/// by a digit is a replicate suffix, not a comment.
fn strip_comment(line: &str) -> &str {
    let b: Vec<char> = line.chars().collect();
    let mut byte = 0;
    for (i, &c) in b.iter().enumerate() {
        if c == '#' {
            let glued = i > 0 && is_ident_char(b[i - 1]) && b.get(i + 1).is_some_and(|d| d.is_ascii_digit());
            if !glued {
                return &line[..byte];
            }
        }
        byte += c.len_utf8();
    }
    line
}

fn lex(line: &str, lineno: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |col: usize, msg: String| Error::Parse {
        line: lineno,
        col,
        msg,
    };
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if is_ident_start(c) {
            let s = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            if i + 1 < chars.len() && chars[i] == '#' && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            out.push((Tok::Ident(chars[s..i].iter().collect()), col));
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let int: String = chars[s..i].iter().collect();
            let mut frac = String::new();
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                let fs = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                frac = chars[fs..i].iter().collect();
            }
            let digits = format!("{int}{frac}");
            let n: BigInt = digits
                .parse()
                .map_err(|_| err(col, format!("bad number `{digits}`")))?;
            let d = num_traits::pow(BigInt::from(10), frac.len());
            out.push((Tok::Num(Rational::new(n, d)), col));
        } else if "+-*/^()=,:'".contains(c) {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(err(col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    end_col: usize,
    allowed: &'a BTreeSet<String>,
    /// Names that may carry derivative primes.
    differential: Option<&'a BTreeSet<String>>,
}

impl<'a> ExprParser<'a> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            col: self.col(),
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.fadd(&self.term()?);
            } else if self.eat('-') {
                acc = acc.fsub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.fmul(&self.unary()?);
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let col = self.col();
                self.pos += 1;
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(Error::Semantic(format!(
                        "line {}:{}: division by zero",
                        self.line, col
                    )));
                }
                acc = acc.fdiv(&d);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if self.eat('-') {
            return Ok(self.unary()?.fneg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.primary()?;
        if self.eat('^') {
            let neg = self.eat('-');
            match self.peek().cloned() {
                Some(Tok::Num(n)) if n.is_integer() && !neg => {
                    self.pos += 1;
                    let e: u32 = n
                        .to_integer()
                        .try_into()
                        .map_err(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("exponent must be a nonnegative integer")),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<RatFunc> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RatFunc::from_rational(n))
            }
            Some(Tok::Ident(s)) if self.differential.is_some_and(|d| d.contains(&s)) => {
                self.pos += 1;
                let mut k = 0;
                while self.eat('\'') {
                    k += 1;
                }
                Ok(RatFunc::var(Var::jet(&s, k)))
            }
            Some(Tok::Ident(s)) => {
                if !self.allowed.contains(&s) {
                    return Err(Error::Semantic(format!(
                        "line {}:{}: unknown symbol `{s}`",
                        self.line,
                        self.col()
                    )));
                }
                self.pos += 1;
                Ok(RatFunc::var(Var::new(&s)))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(t) => Err(self.err(format!("unexpected {t:?}"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

/// Parses `text` as an expression over `allowed` symbols.
pub fn parse_expr(text: &str, allowed: &BTreeSet<String>) -> Result<RatFunc> {
    parse_with(text, allowed, None)
}

/// Parses a differential expression: names in `differential` may be followed
/// by primes (`y1''`), other identifiers must be in `allowed`.
pub fn parse_diff_expr(
    text: &str,
    allowed: &BTreeSet<String>,
    differential: &BTreeSet<String>,
) -> Result<RatFunc> {
    parse_with(text, allowed, Some(differential))
}

fn parse_with(
    text: &str,
    allowed: &BTreeSet<String>,
    differential: Option<&BTreeSet<String>>,
) -> Result<RatFunc> {
    let toks = lex(text, 1)?;
    let mut p = ExprParser {
        toks: &toks,
        pos: 0,
        line: 1,
        end_col: text.chars().count() + 1,
        allowed,
        differential,
    };
    let e = p.expr()?;
    if p.pos != toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Parses a model document.
/// Line number, tokens and end-of-line column of an equation.
type PendingEq = (usize, Vec<(Tok, usize)>, usize);

pub fn parse_model(text: &str) -> Result<OdeModel> {
    let mut name: Option<String> = None;
    let mut states: Vec<String> = Vec::new();
    let mut params: Vec<String> = Vec::new();
    let mut inputs: Vec<String> = Vec::new();
    let mut eqs: Vec<PendingEq> = Vec::new();
    let mut seen_section = BTreeSet::new();

    for (ln, raw) in text.lines().enumerate() {
        let lineno = ln + 1;
        let line = strip_comment(raw);
        let toks = lex(line, lineno)?;
        if toks.is_empty() {
            continue;
        }
        let perr = |col: usize, msg: &str| Error::Parse {
            line: lineno,
            col,
            msg: msg.to_string(),
        };
        match (&toks[0].0, toks.get(1).map(|t| &t.0)) {
            (Tok::Ident(k), Some(Tok::Ident(n))) if k == "model" => {
                if toks.len() != 2 {
                    return Err(perr(toks[2].1, "unexpected token after model name"));
                }
                if name.is_some() {
                    return Err(perr(1, "duplicate model header"));
                }
                name = Some(n.clone());
            }
            (Tok::Ident(k), Some(Tok::Sym(':')))
                if matches!(k.as_str(), "states" | "params" | "inputs") =>
            {
                if !seen_section.insert(k.clone()) {
                    return Err(perr(1, &format!("duplicate `{k}:` section")));
                }
                let mut names = Vec::new();
                let mut i = 2;
                while i < toks.len() {
                    match &toks[i].0 {
                        Tok::Ident(n) => names.push(n.clone()),
                        _ => return Err(perr(toks[i].1, "expected identifier")),
                    }
                    i += 1;
                    if i < toks.len() {
                        if toks[i].0 != Tok::Sym(',') {
                            return Err(perr(toks[i].1, "expected `,`"));
                        }
                        i += 1;
                        if i == toks.len() {
                            return Err(perr(toks[i - 1].1, "trailing `,`"));
                        }
                    }
                }
                match k.as_str() {
                    "states" => states = names,
                    "params" => params = names,
                    _ => inputs = names,
                }
            }
            (Tok::Ident(_), _) => eqs.push((lineno, toks, line.chars().count() + 1)),
            (_, _) => return Err(perr(toks[0].1, "expected a declaration or an equation")),
        }
    }

    let name = name.ok_or(Error::Parse {
        line: 1,
        col: 1,
        msg: "missing `model <name>` header".into(),
    })?;
    let allowed: BTreeSet<String> = states
        .iter()
        .chain(&params)
        .chain(&inputs)
        .cloned()
        .collect();
    let mut rhs: Vec<Option<RatFunc>> = vec![None; states.len()];
    let mut outputs: Vec<(String, RatFunc)> = Vec::new();
    for (lineno, toks, end_col) in eqs {
        let Tok::Ident(lhs) = &toks[0].0 else {
            unreachable!()
        };
        let (is_state, eq_at) = if toks.get(1).map(|t| &t.0) == Some(&Tok::Sym('\'')) {
            (true, 2)
        } else {
            (false, 1)
        };
        if toks.get(eq_at).map(|t| &t.0) != Some(&Tok::Sym('=')) {
            let col = toks.get(eq_at).map(|t| t.1).unwrap_or(end_col);
            return Err(Error::Parse {
                line: lineno,
                col,
                msg: "expected `=`".into(),
            });
        }
        let mut p = ExprParser {
            toks: &toks[eq_at + 1..],
            pos: 0,
            line: lineno,
            end_col,
            allowed: &allowed,
            differential: None,
        };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.err("trailing input"));
        }
        if is_state {
            let Some(i) = states.iter().position(|s| s == lhs) else {
                return Err(Error::Semantic(format!(
                    "line {lineno}: `{lhs}'` is not a declared state"
                )));
            };
            if rhs[i].is_some() {
                return Err(Error::Semantic(format!(
                    "line {lineno}: second equation for `{lhs}'`"
                )));
            }
            rhs[i] = Some(e);
        } else {
            if allowed.contains(lhs) || outputs.iter().any(|(n, _)| n == lhs) {
                return Err(Error::Semantic(format!(
                    "line {lineno}: output name `{lhs}` clashes with an existing name"
                )));
            }
            outputs.push((lhs.clone(), e));
        }
    }
    let mut state_rhs = Vec::with_capacity(states.len());
    for (s, r) in states.iter().zip(rhs) {
        match r {
            Some(r) => state_rhs.push(r),
            None => {
                return Err(Error::Semantic(format!("state `{s}` has no equation")));
            }
        }
    }
    OdeModel::new(name, states, params, inputs, state_rhs, outputs)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO: &str = "\
model two_compartment
# linear compartments
states: x1, x2
params: a01, a12, a21
x1' = -(a01 + a21)*x1 + a12*x2
x2' = a21*x1 - a12*x2
y = x2
";

    #[test]
    fn parses_two_compartment() {
        let m = parse_model(TWO).unwrap();
        assert_eq!(m.states().len(), 2);
        assert_eq!(m.params().len(), 3);
        assert_eq!(m.outputs().len(), 1);
        let again = parse_model(&m.to_string()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn unknown_symbol_is_semantic() {
        let t = "model m\nstates: x1\nparams: a\nx1' = a\ny1 = x9\n";
        assert!(matches!(parse_model(t), Err(Error::Semantic(_))));
    }

    #[test]
    fn syntax_error_position() {
        let t = "model m\nstates: x\nparams: a\nx' = a * (x\ny = x\n";
        match parse_model(t) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn replicate_suffixes_and_decimals() {
        let t = "model m\nstates: x#1\nparams: a\nx#1' = 0.5*a*x#1 # half\ny#1 = x#1\n";
        let m = parse_model(t).unwrap();
        assert_eq!(m.states(), &["x#1".to_string()]);
        assert_eq!(m.state_rhs()[0].to_string(), "1/2*a*x#1");
    }

    #[test]
    fn zero_denominator_literal() {
        let t = "model m\nstates: x\nparams: a\nx' = a/0\ny = x\n";
        assert!(matches!(parse_model(t), Err(Error::Semantic(_))));
    }
}
