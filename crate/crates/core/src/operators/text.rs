//! Canonical text form of a [`DiffOp`].
//!
//! ```text
//! op     := "0" | term (" + " term)*
//! term   := "(" coeff ")" (" " factor)*
//! coeff  := rat | rat " i" | rat " + " rat " i" | rat " - " rat " i"
//! factor := "x" index ["^{" rat "}"] | "d" index ["^{" uint "}"]
//! ```
//!
//! Terms are listed in canonical order, `x` factors precede `d` factors and
//! indices are 1-based and increasing. Rendering is deterministic, so the
//! text of an operator is stable across runs and platforms.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::diffop::{DiffOp, TermKey};
use super::gauss::GaussRat;
use crate::error::{Error, Result};
use crate::parse::{format_rational, parse_rational};

/// Largest derivative order accepted by the parser.
const MAX_DERIVATIVE_ORDER: u32 = 1 << 16;

fn quarter_text(quarters: i32) -> String {
    format_rational(&BigRational::new(BigInt::from(quarters), BigInt::from(4)))
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (t, (key, coeff)) in self.iter().enumerate() {
            if t > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({coeff})")?;
            for (i, &e) in key.xexp.iter().enumerate() {
                match e {
                    0 => {}
                    4 => write!(f, " x{}", i + 1)?,
                    _ => write!(f, " x{}^{{{}}}", i + 1, quarter_text(e))?,
                }
            }
            for (i, &e) in key.dexp.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, " d{}", i + 1)?,
                    _ => write!(f, " d{}^{{{e}}}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

/// One term per line; used for golden files and reports.
pub fn render_lines(op: &DiffOp) -> String {
    if op.is_zero() {
        return "0\n".to_string();
    }
    let mut out = String::new();
    for (key, coeff) in op.iter() {
        let mut single = DiffOp::zero(op.n());
        single.add_term(key.clone(), coeff.clone());
        out.push_str(&single.to_string());
        out.push('\n');
    }
    out
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{token}'")))
        }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn take_until(&mut self, stop: char) -> Result<&'a str> {
        let rest = self.rest();
        let end = rest.find(stop).ok_or_else(|| self.error(&format!("missing '{stop}'")))?;
        self.pos += end;
        Ok(&rest[..end])
    }

    fn digits(&mut self) -> &'a str {
        let rest = self.rest();
        let len = rest.bytes().take_while(u8::is_ascii_digit).count();
        self.pos += len;
        &rest[..len]
    }
}

fn parse_coefficient(text: &str) -> Result<GaussRat> {
    let t = text.trim();
    let Some(body) = t.strip_suffix('i') else {
        return Ok(GaussRat::real(parse_rational(t)?));
    };
    let body = body.strip_suffix(' ').ok_or_else(|| Error::Parse(format!("malformed coefficient '{t}'")))?;
    // The separator between real and imaginary parts is the last " + " or " - ".
    let split = [" + ", " - "]
        .iter()
        .filter_map(|sep| body.rfind(sep).map(|p| (p, *sep)))
        .max_by_key(|(p, _)| *p);
    match split {
        Some((p, sep)) => {
            let re = parse_rational(&body[..p])?;
            let im = parse_rational(&body[p + 3..])?;
            Ok(GaussRat::new(re, if sep == " - " { -im } else { im }))
        }
        None => Ok(GaussRat::imag(parse_rational(body)?)),
    }
}

fn parse_index(cur: &mut Cursor<'_>, n: usize) -> Result<usize> {
    let digits = cur.digits();
    let index: usize = digits
        .parse()
        .map_err(|_| cur.error("expected coordinate index"))?;
    if index == 0 || index > n {
        return Err(cur.error(&format!("coordinate index {index} out of range 1..={n}")));
    }
    Ok(index - 1)
}

fn parse_term(cur: &mut Cursor<'_>, n: usize) -> Result<(TermKey, GaussRat)> {
    cur.expect("(")?;
    let coeff = parse_coefficient(cur.take_until(')')?)?;
    cur.expect(")")?;
    let mut key = TermKey::constant(n);
    let mut last_x: Option<usize> = None;
    let mut last_d: Option<usize> = None;
    while cur.rest().starts_with(' ') && !cur.rest().starts_with(" + ") {
        cur.expect(" ")?;
        if cur.eat("x") {
            if last_d.is_some() {
                return Err(cur.error("coordinate factor after a derivative"));
            }
            let i = parse_index(cur, n)?;
            if last_x.is_some_and(|prev| prev >= i) {
                return Err(cur.error("coordinate factors must have increasing indices"));
            }
            last_x = Some(i);
            let quarters = if cur.eat("^{") {
                let q = parse_rational(cur.take_until('}')?)?;
                cur.expect("}")?;
                let scaled = q * BigRational::from_integer(BigInt::from(4));
                if !scaled.denom().is_one() {
                    return Err(cur.error("exponent is not a multiple of 1/4"));
                }
                scaled.numer().to_i32().ok_or_else(|| cur.error("exponent out of range"))?
            } else {
                4
            };
            if quarters == 0 {
                return Err(cur.error("zero exponent"));
            }
            key.xexp[i] = quarters;
        } else if cur.eat("d") {
            let i = parse_index(cur, n)?;
            if last_d.is_some_and(|prev| prev >= i) {
                return Err(cur.error("derivative factors must have increasing indices"));
            }
            last_d = Some(i);
            let order = if cur.eat("^{") {
                let digits = cur.digits();
                let order: u32 = digits.parse().map_err(|_| cur.error("expected derivative order"))?;
                cur.expect("}")?;
                order
            } else {
                1
            };
            if order == 0 || order > MAX_DERIVATIVE_ORDER {
                return Err(cur.error("derivative order out of range"));
            }
            key.dexp[i] = order;
        } else {
            return Err(cur.error("expected 'x' or 'd' factor"));
        }
    }
    Ok((key, coeff))
}

impl DiffOp {
    /// Parses the canonical text form for an operator on `n` coordinates.
    /// Duplicate terms are merged and zero coefficients dropped.
    pub fn parse(n: usize, text: &str) -> Result<DiffOp> {
        let text = text.trim_end_matches('\n');
        let mut op = DiffOp::zero(n);
        if text == "0" {
            return Ok(op);
        }
        let mut cur = Cursor { s: text, pos: 0 };
        loop {
            let (key, coeff) = parse_term(&mut cur, n)?;
            op.add_term(key, coeff);
            if cur.rest().is_empty() {
                break;
            }
            cur.expect(" + ")?;
        }
        Ok(op)
    }

    /// Parses [`render_lines`] output.
    pub fn parse_lines(n: usize, text: &str) -> Result<DiffOp> {
        let mut op = DiffOp::zero(n);
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let part = DiffOp::parse(n, line)?;
            op = &op + &part;
        }
        Ok(op)
    }
}

impl std::str::FromStr for GaussRat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_coefficient(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn renders_canonical_text() {
        let n = 2;
        let op = &(&DiffOp::x_pow(n, 0, 3) * &DiffOp::d(n, 1)).scale(&GaussRat::ratio(-1, 2))
            + &DiffOp::scalar(n, GaussRat::new(BigRational::new(1.into(), 3.into()), BigRational::new(2.into(), 5.into())));
        assert_eq!(op.to_string(), "(1/3 + 2/5 i) + (-1/2) x1^{3/4} d2");
        assert_eq!(DiffOp::zero(3).to_string(), "0");
        let d2 = &DiffOp::d(n, 0) * &DiffOp::d(n, 0);
        assert_eq!((&DiffOp::x(n, 1) * &d2).to_string(), "(1) x2 d1^{2}");
    }

    #[test]
    fn parses_what_it_renders() {
        let n = 2;
        let op = DiffOp::parse(n, "(1/3 + 2/5 i) + (-1/2) x1^{3/4} d2 + (-7 i) x2^{-1/2} d1^{3}").unwrap();
        assert_eq!(op.term_count(), 3);
        assert_eq!(DiffOp::parse(n, &op.to_string()).unwrap(), op);
        assert_eq!(DiffOp::parse_lines(n, &render_lines(&op)).unwrap(), op);
        assert!(DiffOp::parse(n, "0").unwrap().is_zero());
    }

    #[test]
    fn merges_duplicates_and_drops_zeros() {
        let op = DiffOp::parse(1, "(1) x1 + (-1) x1 + (0) d1").unwrap();
        assert!(op.is_zero());
    }

    #[test]
    fn rejects_malformed_text() {
        for bad in [
            "", "()", "(1", "(1) y1", "(1) x0", "(1) x3", "(1) d1 x1", "(1) x2 x1", "(1) x1^{1/3}",
            "(1) d1^{0}", "(1) x1^{0}", "(1)+(2)", "(1 +) x1", "(i)", "(1) x1^{", "(1) d1^{1/2}",
        ] {
            assert!(DiffOp::parse(2, bad).is_err(), "accepted {bad:?}");
        }
    }

    fn arb_op() -> impl Strategy<Value = DiffOp> {
        let term = (-6i64..6, 1i64..5, -3i64..3, prop::collection::vec(-8i32..9, 2), prop::collection::vec(0u32..3, 2));
        prop::collection::vec(term, 0..6).prop_map(|terms| {
            let mut op = DiffOp::zero(2);
            for (a, b, c, x, d) in terms {
                let coeff = GaussRat::new(BigRational::new(a.into(), b.into()), BigRational::new(c.into(), b.into()));
                op.add_term(TermKey { dexp: d, xexp: x }, coeff);
            }
            op
        })
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(op in arb_op()) {
            prop_assert_eq!(DiffOp::parse(2, &op.to_string()).unwrap(), op);
        }
    }
}
