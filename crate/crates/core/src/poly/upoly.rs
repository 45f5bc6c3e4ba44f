use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::rat::{denom_lcm, int, numer_gcd, rat, rat_pow, small_divisors, Rat};
use crate::error::{Error, Result};

/// Degree of a univariate polynomial; the zero polynomial has `MinusInfinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::MinusInfinity => None,
        }
    }
}

impl PartialOrd for Degree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Degree {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Degree::MinusInfinity, Degree::MinusInfinity) => Ordering::Equal,
            (Degree::MinusInfinity, _) => Ordering::Less,
            (_, Degree::MinusInfinity) => Ordering::Greater,
            (Degree::Finite(a), Degree::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Dense univariate polynomial over Q; `coeffs[k]` multiplies `x^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<Rat>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UPoly::new(c.iter().map(|&v| rat(v)).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        UPoly::new(vec![c])
    }

    pub fn x() -> Self {
        UPoly::monomial(Rat::one(), 1)
    }

    pub fn monomial(c: Rat, k: usize) -> Self {
        if c.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        UPoly { coeffs: v }
    }

    /// `x - a`
    pub fn linear_root(a: &Rat) -> Self {
        UPoly::new(vec![-a.clone(), Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rat> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn degree(&self) -> Degree {
        if self.coeffs.is_empty() {
            Degree::MinusInfinity
        } else {
            Degree::Finite(self.coeffs.len() - 1)
        }
    }

    /// Degree, with the zero polynomial mapped to `None`.
    pub fn deg(&self) -> Option<usize> {
        self.degree().finite()
    }

    /// Degree with zero mapped to 0; for bookkeeping where that is harmless.
    pub fn deg0(&self) -> usize {
        self.deg().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn lc(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &Rat) -> UPoly {
        if c.is_zero() {
            return UPoly::zero();
        }
        UPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul_xk(&self, k: usize) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![Rat::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        UPoly { coeffs: v }
    }

    /// Terms of degree below `n`.
    pub fn truncate(&self, n: usize) -> UPoly {
        UPoly::new(self.coeffs.iter().take(n).cloned().collect())
    }

    pub fn pow(&self, k: usize) -> UPoly {
        let mut result = UPoly::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        )
    }

    pub fn eval(&self, a: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * a + c;
        }
        acc
    }

    /// `self(g(x))`
    pub fn compose(&self, g: &UPoly) -> UPoly {
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &UPoly::constant(c.clone());
        }
        acc
    }

    /// `self(x + a)`
    pub fn shift(&self, a: &Rat) -> UPoly {
        self.compose(&UPoly::new(vec![a.clone(), Rat::one()]))
    }

    /// `x^deg * self(1/x)` with respect to a declared degree `n >= deg`.
    pub fn reverse(&self, n: usize) -> UPoly {
        let mut v = vec![Rat::zero(); n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[n - k] = c.clone();
        }
        UPoly::new(v)
    }

    /// Euclidean division over Q. Panics on a zero divisor.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.deg().expect("division by the zero polynomial");
        let Some(n) = self.deg() else {
            return (UPoly::zero(), UPoly::zero());
        };
        if n < dd {
            return (UPoly::zero(), self.clone());
        }
        let inv = d.lc().recip();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rat::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[k + i] -= &c * dc;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.div_rem(d).1
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &UPoly) -> Option<UPoly> {
        if d.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &UPoly) -> bool {
        !self.is_zero() && other.rem(self).is_zero()
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        self.scale(&self.lc().recip())
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.primitive_int().1;
        let mut b = other.primitive_int().1;
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.primitive_int().1;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*other = g`, `g` the monic gcd.
    pub fn ext_gcd(&self, other: &UPoly) -> (UPoly, UPoly, UPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (UPoly::one(), UPoly::zero());
        let (mut t0, mut t1) = (UPoly::zero(), UPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Scalar `c` and integer polynomial `p` with coprime coefficients and
    /// positive leading coefficient such that `self = c * p`.
    pub fn primitive_int(&self) -> (Rat, UPoly) {
        if self.is_zero() {
            return (Rat::zero(), UPoly::zero());
        }
        let l = denom_lcm(&self.coeffs);
        let scaled: Vec<Rat> = self.coeffs.iter().map(|c| c * int(&l)).collect();
        let mut g = numer_gcd(&scaled);
        if self.lc().is_negative() {
            g = -g;
        }
        let c = Rat::new(g.clone(), l);
        let p = UPoly {
            coeffs: scaled.iter().map(|s| s / int(&g)).collect(),
        };
        (c, p)
    }

    /// Product of the distinct monic irreducible factors.
    pub fn squarefree_part(&self) -> UPoly {
        if self.is_constant() {
            return if self.is_zero() { UPoly::zero() } else { UPoly::one() };
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).expect("gcd divides").monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).is_constant()
    }

    /// Largest `k` with `(x - a)^k` dividing `self`.
    pub fn ord_at(&self, a: &Rat) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.shift(a).valuation().unwrap_or(0))
    }

    /// Distinct rational roots in increasing order. `None` when a coefficient
    /// is too large for candidate enumeration.
    pub fn rational_roots(&self) -> Option<Vec<Rat>> {
        if self.is_zero() {
            return Some(Vec::new());
        }
        let sf = self.squarefree_part();
        let (_, p) = sf.primitive_int();
        let mut roots = Vec::new();
        let v = p.valuation().unwrap_or(0);
        if v > 0 {
            roots.push(Rat::zero());
        }
        let p = UPoly::new(p.coeffs[v..].to_vec());
        if p.deg().unwrap_or(0) > 0 {
            let a0 = p.coeffs[0].numer().clone();
            let an = p.lc().numer().clone();
            let num_div = small_divisors(&a0)?;
            let den_div = small_divisors(&an)?;
            let mut remaining = p.clone();
            'outer: for q in &den_div {
                for n in &num_div {
                    for sign in [1, -1] {
                        let cand = Rat::new(n * BigInt::from(sign), q.clone());
                        if roots.contains(&cand) {
                            continue;
                        }
                        if remaining.eval(&cand).is_zero() {
                            remaining = remaining
                                .exact_div(&UPoly::linear_root(&cand))
                                .expect("root divides");
                            roots.push(cand);
                            if remaining.is_constant() {
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        roots.sort();
        Some(roots)
    }

    /// Interpolation through the given distinct abscissae (Newton form).
    pub fn interpolate(points: &[(Rat, Rat)]) -> UPoly {
        let n = points.len();
        let mut c: Vec<Rat> = points.iter().map(|(_, y)| y.clone()).collect();
        for k in 1..n {
            for i in (k..n).rev() {
                c[i] = (&c[i] - &c[i - 1]) / (&points[i].0 - &points[i - k].0);
            }
        }
        let mut acc = UPoly::zero();
        for i in (0..n).rev() {
            acc = &(&acc * &UPoly::linear_root(&points[i].0)) + &UPoly::constant(c[i].clone());
        }
        acc
    }

    /// Formats with the given variable name, e.g. `2*x^3 - 1/2`.
    pub fn to_string_in(&self, var: &str) -> String {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let mono = match k {
                    0 => String::new(),
                    1 => var.to_string(),
                    _ => format!("{var}^{k}"),
                };
                (c.clone(), mono)
            });
        super::print::join_terms(terms)
    }

    /// Evaluation of the leading coefficient power helper used by resultants.
    pub fn lc_pow(&self, k: usize) -> Rat {
        rat_pow(&self.lc(), k)
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x"))
    }
}

impl Serialize for UPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl From<Rat> for UPoly {
    fn from(c: Rat) -> Self {
        UPoly::constant(c)
    }
}

impl<'a> Add<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn sub(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UPoly::new(v)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        -&self
    }
}

impl AddAssign<&UPoly> for UPoly {
    fn add_assign(&mut self, o: &UPoly) {
        *self = &*self + o;
    }
}

impl SubAssign<&UPoly> for UPoly {
    fn sub_assign(&mut self, o: &UPoly) {
        *self = &*self - o;
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
    };
}
pub(crate) use owned_ops;
owned_ops!(UPoly);
