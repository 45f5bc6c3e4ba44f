use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::bform::BForm;
use super::bpoly::BPoly;
use super::print::monomial;
use super::rat::Rat;
use super::upoly::UPoly;
use crate::error::{Error, Result};

const MAX_EXPONENT: u32 = 4096;

/// Exponents of `(x, y, Y0, Y1)`.
type Mono = [u32; 4];

#[derive(Clone, Debug, Default)]
struct Sparse(BTreeMap<Mono, Rat>);

impl Sparse {
    fn constant(c: Rat) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert([0; 4], c);
        }
        Sparse(m)
    }

    fn var(k: usize) -> Self {
        let mut e = [0; 4];
        e[k] = 1;
        Sparse(BTreeMap::from([(e, Rat::one())]))
    }

    fn add(mut self, o: &Sparse, sign: bool) -> Self {
        for (e, c) in &o.0 {
            let entry = self.0.entry(*e).or_insert_with(Rat::zero);
            if sign {
                *entry += c;
            } else {
                *entry -= c;
            }
            if entry.is_zero() {
                self.0.remove(e);
            }
        }
        self
    }

    fn mul(&self, o: &Sparse) -> Sparse {
        let mut out: BTreeMap<Mono, Rat> = BTreeMap::new();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &o.0 {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]];
                *out.entry(e).or_insert_with(Rat::zero) += c1 * c2;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Sparse(out)
    }

    fn neg(mut self) -> Self {
        for c in self.0.values_mut() {
            *c = -c.clone();
        }
        self
    }

    fn max_exp(&self) -> u32 {
        self.0.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset,
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Sparse> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t, true);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t, false);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Sparse> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Sparse> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let n = self.nat()?;
            let e: u32 = match u32::try_from(&n) {
                Ok(e) if e <= MAX_EXPONENT => e,
                _ => return self.err(at, "exponent too large"),
            };
            if base.max_exp().saturating_mul(e.max(1)) > MAX_EXPONENT {
                return self.err(at, "exponent too large");
            }
            let mut r = Sparse::constant(Rat::one());
            for _ in 0..e {
                r = r.mul(&base);
            }
            return Ok(r);
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Sparse> {
        let Some(c) = self.peek() else {
            return self.err(self.pos, "unexpected end of input");
        };
        let start = self.pos;
        match c {
            b'(' => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err(self.pos, "expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            b'x' => {
                self.pos += 1;
                Ok(Sparse::var(0))
            }
            b'y' => {
                self.pos += 1;
                Ok(Sparse::var(1))
            }
            b'Y' => match self.src.get(self.pos + 1) {
                Some(b'0') => {
                    self.pos += 2;
                    Ok(Sparse::var(2))
                }
                Some(b'1') => {
                    self.pos += 2;
                    Ok(Sparse::var(3))
                }
                _ => self.err(start, "expected Y0 or Y1"),
            },
            b'-' => {
                self.pos += 1;
                if self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
                    Ok(self.rational(start)?.neg())
                } else {
                    // Unary minus on a non-literal factor.
                    Ok(self.factor()?.neg())
                }
            }
            b'0'..=b'9' => self.rational(start),
            _ => self.err(start, format!("unexpected character '{}'", c as char)),
        }
    }

    fn rational(&mut self, start: usize) -> Result<Sparse> {
        let n = self.nat()?;
        let mut value = Rat::from_integer(n);
        let save = self.pos;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            if !self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
                return self.err(self.pos, "expected denominator");
            }
            let d = self.nat()?;
            if d.is_zero() {
                return Err(Error::DivisionByZero { offset: start });
            }
            value /= Rat::from_integer(d);
        } else {
            self.pos = save;
        }
        Ok(Sparse::constant(value))
    }

    fn nat(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(start, "expected a natural number");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }
}

fn parse_sparse(text: &str) -> Result<Sparse> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        let c = p.src[p.pos] as char;
        let msg = if c.is_ascii_alphanumeric() || c == '(' {
            "implicit multiplication is not allowed; use '*'".to_string()
        } else {
            format!("unexpected character '{c}'")
        };
        return p.err(p.pos, msg);
    }
    Ok(e)
}

fn reject_vars(text: &str, names: &[&str]) -> Result<()> {
    for name in names {
        if let Some(off) = find_var(text, name) {
            return Err(Error::Syntax {
                offset: off,
                message: format!("variable {name} is not allowed here"),
            });
        }
    }
    Ok(())
}

fn find_var(text: &str, name: &str) -> Option<usize> {
    let b = text.as_bytes();
    let mut i = 0;
    while let Some(k) = text[i..].find(name) {
        let at = i + k;
        // `y` must not be matched inside `Y0`/`Y1`, which never happens as
        // the cases differ; only guard the `Y` prefix of digits.
        let ok = name != "y" || at == 0 || b[at - 1] != b'Y';
        if ok {
            return Some(at);
        }
        i = at + 1;
    }
    None
}

/// Parses a polynomial in `x` and `y`.
pub fn parse_poly(text: &str) -> Result<BPoly> {
    let s = parse_sparse(text)?;
    reject_vars(text, &["Y0", "Y1"])?;
    let mut f = BPoly::zero();
    for (e, c) in &s.0 {
        f += &BPoly::monomial(c.clone(), e[0] as usize, e[1] as usize);
    }
    Ok(f)
}

/// Parses a binary form in `Y0`, `Y1` with coefficients in Q[x].
pub fn parse_form(text: &str) -> Result<BForm> {
    let s = parse_sparse(text)?;
    reject_vars(text, &["y"])?;
    let d = s.0.keys().map(|e| e[2] + e[3]).max().unwrap_or(0) as usize;
    let bad: Vec<String> =
        s.0.keys()
            .filter(|e| (e[2] + e[3]) as usize != d)
            .map(|e| {
                let m = monomial(&[("x", e[0] as usize), ("Y0", e[2] as usize), ("Y1", e[3] as usize)]);
                if m.is_empty() {
                    "1".to_string()
                } else {
                    m
                }
            })
            .collect();
    if !bad.is_empty() {
        return Err(Error::NotHomogeneous { monomials: bad });
    }
    let mut v = vec![UPoly::zero(); d + 1];
    for (e, c) in &s.0 {
        v[e[2] as usize] += &UPoly::monomial(c.clone(), e[0] as usize);
    }
    Ok(BForm::new(v))
}

/// Parses a univariate polynomial in the given variable (`x` or `y`).
pub fn parse_upoly(text: &str, var: char) -> Result<UPoly> {
    let f = parse_poly(text)?;
    let g = if var == 'y' { f.swap() } else { f };
    if g.d_y() > 0 {
        return Err(Error::Syntax {
            offset: 0,
            message: format!("expected a polynomial in {var} only"),
        });
    }
    Ok(g.coeff_y(0))
}

/// Splits a product of parenthesised factors at top-level `*` signs.
pub fn split_product(text: &str) -> Result<Vec<(usize, &str)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Syntax {
                        offset: i,
                        message: "unbalanced ')'".into(),
                    });
                }
            }
            '*' if depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Syntax {
            offset: text.len(),
            message: "unbalanced '('".into(),
        });
    }
    out.push((start, &text[start..]));
    Ok(out)
}

/// Parses each factor of a product as a form; offsets are reported relative
/// to the whole text.
pub fn parse_form_product(text: &str) -> Result<Vec<BForm>> {
    let mut forms = Vec::new();
    for (off, piece) in split_product(text)? {
        let f = parse_form(piece).map_err(|e| match e {
            Error::Syntax { offset, message } => Error::Syntax {
                offset: offset + off,
                message,
            },
            Error::DivisionByZero { offset } => Error::DivisionByZero { offset: offset + off },
            other => other,
        })?;
        forms.push(f);
    }
    Ok(forms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat::{frac, rat};

    #[test]
    fn counterexample_degrees() {
        let f = parse_poly("x*(x-y^2)^2 - 2*y*(x-y^2) + 1").unwrap();
        assert_eq!((f.d_x(), f.d_y()), (3, 4));
    }

    #[test]
    fn literals() {
        assert!(parse_poly("0").unwrap().is_zero());
        let f = parse_poly("y^2 - 1/2*x").unwrap();
        assert_eq!(f.term(0, 2), rat(1));
        assert_eq!(f.term(1, 0), frac(-1, 2));
        assert_eq!(f.support().count(), 2);
    }

    #[test]
    fn negative_literal_binds_before_power() {
        assert_eq!(parse_poly("-2^2").unwrap(), BPoly::constant(rat(4)));
        assert_eq!(parse_poly("-x^2").unwrap(), BPoly::from_terms(&[(-1, 2, 0)]));
    }

    #[test]
    fn errors() {
        assert_eq!(
            parse_poly("2x").unwrap_err(),
            Error::Syntax {
                offset: 1,
                message: "implicit multiplication is not allowed; use '*'".into()
            }
        );
        assert_eq!(parse_poly("x + 3/0").unwrap_err(), Error::DivisionByZero { offset: 4 });
        assert_eq!(parse_poly("x +").unwrap_err().kind(), "SyntaxError");
        assert_eq!(parse_poly("(x").unwrap_err().kind(), "SyntaxError");
        assert_eq!(parse_poly("x/2").unwrap_err().kind(), "SyntaxError");
        assert_eq!(parse_poly("Y0 + x").unwrap_err().kind(), "SyntaxError");
    }

    #[test]
    fn forms() {
        let f = parse_form("Y1*(Y0^2 + x*Y1^2)").unwrap();
        assert_eq!(f.degree(), 3);
        assert_eq!(parse_form("Y0^2 - x*Y1^2").unwrap().degree(), 2);
        match parse_form("Y0^2 + Y1").unwrap_err() {
            Error::NotHomogeneous { monomials } => assert_eq!(monomials, vec!["Y1".to_string()]),
            e => panic!("unexpected {e:?}"),
        }
        assert_eq!(parse_form("Y0 + y").unwrap_err().kind(), "SyntaxError");
    }

    #[test]
    fn product_split() {
        let fs = parse_form_product("(Y0)*(Y1)*(Y0^2 + x*Y0*Y1 + Y1^2)").unwrap();
        assert_eq!(fs.len(), 3);
        assert_eq!(fs[2].degree(), 2);
    }
}
