//! Reading curves from the command line: inline formulas, JSON, or files
//! holding either.
//!
//! Inline syntax is a sum of terms `c z^k`. The coefficient `c` is a real
//! number, an imaginary number (`2i`, `-i`), or a complex number in
//! parentheses (`(1-0.5i)`); `k` is any integer, and `1/z^k` (or `c/z^k`)
//! is sugar for `z^-k`. Rational maps are written `(P)/(Q)` with `P`, `Q`
//! ordinary polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use trigcurve::laurent::LaurentRepr;
use trigcurve::rational::RationalMap;
use trigcurve::{Complex64, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error: {}", self.0)
    }
}

impl std::error::Error for ParseError {}

fn fail<T>(msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError(msg.into()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Curve {
    Laurent { poly: LaurentPoly },
    Rational { map: RationalJson },
}

/// `{"type": "rational", "p": [[re, im], ...], "q": [[re, im], ...]}`,
/// coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalJson {
    pub p: Vec<[f64; 2]>,
    pub q: Vec<[f64; 2]>,
}

impl RationalJson {
    pub fn to_map(&self) -> trigcurve::Result<RationalMap> {
        let conv = |v: &[[f64; 2]]| v.iter().map(|c| Complex64::new(c[0], c[1])).collect();
        RationalMap::new(conv(&self.p), conv(&self.q))
    }

    fn from_dense(p: &[Complex64], q: &[Complex64]) -> Self {
        let conv = |v: &[Complex64]| v.iter().map(|c| [c.re, c.im]).collect();
        RationalJson { p: conv(p), q: conv(q) }
    }
}

/// The argument as given plus what it parsed to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Source {
    pub text: String,
    #[serde(flatten)]
    pub curve: Curve,
}

/// Resolves `arg` as a file path (if one exists), then as JSON (if it
/// starts with `{`), then as an inline formula.
pub fn read_source(arg: &str, rational: bool) -> Result<Source, ParseError> {
    let body = if Path::new(arg).is_file() {
        std::fs::read_to_string(arg).map_err(|e| ParseError(format!("{arg}: {e}")))?
    } else {
        arg.to_string()
    };
    let curve = parse_curve(&body, rational)?;
    Ok(Source { text: arg.to_string(), curve })
}

pub fn parse_curve(body: &str, rational: bool) -> Result<Curve, ParseError> {
    let body = body.trim();
    if body.starts_with('{') {
        return parse_json(body, rational);
    }
    if rational {
        let (p, q) = split_fraction(body);
        let p = dense(&parse_terms(p)?, "numerator")?;
        let q = dense(&parse_terms(q)?, "denominator")?;
        let map = RationalJson::from_dense(&p, &q);
        map.to_map().map_err(|e| ParseError(e.to_string()))?;
        Ok(Curve::Rational { map })
    } else {
        let terms = parse_terms(body)?;
        let poly = LaurentPoly::from_terms(&terms).map_err(|e| ParseError(e.to_string()))?;
        Ok(Curve::Laurent { poly })
    }
}

fn parse_json(body: &str, rational: bool) -> Result<Curve, ParseError> {
    let value: serde_json::Value = serde_json::from_str(body).map_err(|e| ParseError(format!("JSON: {e}")))?;
    match value.get("type").and_then(|t| t.as_str()) {
        Some("rational") => {
            let map: RationalJson = serde_json::from_value(value).map_err(|e| ParseError(format!("JSON: {e}")))?;
            map.to_map().map_err(|e| ParseError(e.to_string()))?;
            Ok(Curve::Rational { map })
        }
        Some("laurent") | None => {
            let repr: LaurentRepr = serde_json::from_value(value).map_err(|e| ParseError(format!("JSON: {e}")))?;
            let poly = LaurentPoly::try_from(repr).map_err(|e| ParseError(e.to_string()))?;
            if rational {
                let map = trigcurve::rational::RationalMap::from_laurent(&poly).map_err(|e| ParseError(e.to_string()))?;
                return Ok(Curve::Rational { map: RationalJson::from_dense(&map.p, &map.q) });
            }
            Ok(Curve::Laurent { poly })
        }
        Some(other) => fail(format!("unknown curve type {other:?}")),
    }
}

/// `(P)/(Q)` at top level, or the whole string over `1`.
fn split_fraction(s: &str) -> (&str, &str) {
    let Some(close) = matching_paren(s, 0) else { return (s, "1") };
    let rest = s[close + 1..].trim_start();
    if let Some(den) = rest.strip_prefix('/') {
        let den = den.trim();
        if den.starts_with('(') && matching_paren(den, 0) == Some(den.len() - 1) {
            return (&s[1..close], &den[1..den.len() - 1]);
        }
    }
    (s, "1")
}

fn matching_paren(s: &str, open: usize) -> Option<usize> {
    if !s[open..].starts_with('(') {
        return None;
    }
    let mut depth = 0;
    for (i, ch) in s.char_indices().skip(open) {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

fn dense(terms: &[(i64, Complex64)], what: &str) -> Result<Vec<Complex64>, ParseError> {
    if let Some((k, _)) = terms.iter().find(|(k, _)| *k < 0) {
        return fail(format!("{what} has a negative power z^{k}"));
    }
    let top = terms.iter().map(|(k, _)| *k).max().unwrap_or(0) as usize;
    let mut out = vec![Complex64::new(0.0, 0.0); top + 1];
    for &(k, c) in terms {
        out[k as usize] += c;
    }
    Ok(out)
}

/// Terms of an inline formula, like powers merged, in ascending order.
pub fn parse_terms(s: &str) -> Result<Vec<(i64, Complex64)>, ParseError> {
    let mut p = Parser { s: s.as_bytes(), pos: 0 };
    let mut acc: BTreeMap<i64, Complex64> = BTreeMap::new();
    p.ws();
    if p.done() {
        return fail("empty polynomial");
    }
    let mut sign = p.sign();
    loop {
        let (k, c) = p.term()?;
        *acc.entry(k).or_default() += sign * c;
        p.ws();
        if p.done() {
            break;
        }
        match p.peek() {
            Some(b'+') | Some(b'-') => sign = p.sign(),
            _ => return fail(format!("unexpected {:?} at offset {}", p.rest(), p.pos)),
        }
    }
    Ok(acc.into_iter().collect())
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn done(&self) -> bool {
        self.pos >= self.s.len()
    }

    fn rest(&self) -> String {
        String::from_utf8_lossy(&self.s[self.pos..]).into_owned()
    }

    fn ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        self.ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Any run of `+`/`-` signs.
    fn sign(&mut self) -> f64 {
        let mut sign = 1.0;
        loop {
            self.ws();
            match self.peek() {
                Some(b'+') => {}
                Some(b'-') => sign = -sign,
                _ => return sign,
            }
            self.pos += 1;
        }
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        self.ws();
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit() || b == b'.') {
            self.pos += 1;
        }
        if self.pos > start && matches!(self.peek(), Some(b'e') | Some(b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if self.peek().is_some_and(|b| b.is_ascii_digit()) {
                while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or_default();
        text.parse().map_err(|_| ParseError(format!("bad number {text:?} at offset {start}")))
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let paren = self.eat(b'(');
        let sign = self.sign();
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or_default();
        let k: i64 = text.parse().map_err(|_| ParseError(format!("bad exponent at offset {start}")))?;
        if paren && !self.eat(b')') {
            return fail("unclosed exponent");
        }
        Ok(if sign < 0.0 { -k } else { k })
    }

    /// A real or imaginary literal, or `a+bi` in parentheses.
    fn coefficient(&mut self) -> Result<Option<Complex64>, ParseError> {
        self.ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let mut total = Complex64::new(0.0, 0.0);
                let mut sign = self.sign();
                loop {
                    total += sign * self.literal()?;
                    self.ws();
                    match self.peek() {
                        Some(b')') => {
                            self.pos += 1;
                            return Ok(Some(total));
                        }
                        Some(b'+') | Some(b'-') => sign = self.sign(),
                        _ => return fail(format!("unclosed complex coefficient at offset {}", self.pos)),
                    }
                }
            }
            Some(b) if b.is_ascii_digit() || b == b'.' || b == b'i' => self.literal().map(Some),
            _ => Ok(None),
        }
    }

    fn literal(&mut self) -> Result<Complex64, ParseError> {
        self.ws();
        let value = if self.peek() == Some(b'i') { 1.0 } else { self.number()? };
        if self.peek() == Some(b'i') {
            self.pos += 1;
            Ok(Complex64::new(0.0, value))
        } else {
            Ok(Complex64::new(value, 0.0))
        }
    }

    fn power(&mut self) -> Result<i64, ParseError> {
        if self.eat(b'^') {
            self.integer()
        } else {
            Ok(1)
        }
    }

    fn term(&mut self) -> Result<(i64, Complex64), ParseError> {
        let coeff = self.coefficient()?;
        self.eat(b'*');
        self.ws();
        let k = match self.peek() {
            Some(b'z') => {
                self.pos += 1;
                self.power()?
            }
            Some(b'/') if coeff.is_some() => {
                self.pos += 1;
                if !self.eat(b'z') {
                    return fail(format!("expected z after '/' at offset {}", self.pos));
                }
                -self.power()?
            }
            _ if coeff.is_some() => 0,
            _ => return fail(format!("expected a term at offset {}: {:?}", self.pos, self.rest())),
        };
        Ok((k, coeff.unwrap_or(Complex64::new(1.0, 0.0))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn plain_polynomial() {
        let t = parse_terms("z^3 + 0.1z^2 + 0.3z").unwrap();
        assert_eq!(t, vec![(1, c(0.3, 0.0)), (2, c(0.1, 0.0)), (3, c(1.0, 0.0))]);
    }

    #[test]
    fn reciprocal_sugar_and_negative_powers() {
        let a = parse_terms("z + 1/z").unwrap();
        let b = parse_terms("z+z^-1").unwrap();
        let d = parse_terms("z + z^(-1)").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, d);
        assert_eq!(parse_terms("2/z^3").unwrap(), vec![(-3, c(2.0, 0.0))]);
    }

    #[test]
    fn complex_coefficients() {
        let t = parse_terms("(1+2i)z^2 - 3i z + i - (0.5-1e-3i)/z").unwrap();
        assert_eq!(t, vec![(-1, c(-0.5, 1e-3)), (0, c(0.0, 1.0)), (1, c(0.0, -3.0)), (2, c(1.0, 2.0))]);
    }

    #[test]
    fn exponent_notation() {
        assert_eq!(parse_terms("1e-3z^2 + 2.5E+1").unwrap(), vec![(0, c(25.0, 0.0)), (2, c(1e-3, 0.0))]);
    }

    #[test]
    fn merges_repeated_powers() {
        assert_eq!(parse_terms("z + z - 2z^2 + z^2").unwrap(), vec![(1, c(2.0, 0.0)), (2, c(-1.0, 0.0))]);
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "z^", "3 4", "(1+2i z", "z^1.5", "x^2", "1/", "+"] {
            assert!(parse_terms(bad).is_err(), "{bad:?} parsed");
        }
    }

    #[test]
    fn rational_inline_and_json() {
        let a = parse_curve("(z^2 + 2)/(z + 3)", true).unwrap();
        let b = parse_curve(r#"{"type":"rational","p":[[2,0],[0,0],[1,0]],"q":[[3,0],[1,0]]}"#, true).unwrap();
        let (Curve::Rational { map: a }, Curve::Rational { map: b }) = (a, b) else { panic!() };
        assert_eq!(a.to_map().unwrap(), b.to_map().unwrap());
        assert!(parse_curve("(z^2)/(z^-1)", true).is_err());
    }

    #[test]
    fn laurent_json_round_trip() {
        let body = r#"{"m": -1, "n": 2, "coeffs": [[1, 0], [0, 0], [0.5, 0], [1, 0]]}"#;
        let Curve::Laurent { poly } = parse_curve(body, false).unwrap() else { panic!() };
        assert_eq!(poly, LaurentPoly::from_terms(&parse_terms("1/z + 0.5z + z^2").unwrap()).unwrap());
    }
}
