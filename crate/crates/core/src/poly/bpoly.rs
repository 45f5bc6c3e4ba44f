use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::print::{join_terms, monomial};
use super::rat::{denom_lcm, int, numer_gcd, rat, Rat};
use super::upoly::{owned_ops, UPoly};
use crate::error::{Error, Result};

/// Dense element of Q[x][y]; `coeffs[j]` is the coefficient of `y^j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BPoly {
    coeffs: Vec<UPoly>,
}

impl BPoly {
    pub fn new(mut coeffs: Vec<UPoly>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        BPoly { coeffs }
    }

    pub fn zero() -> Self {
        BPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        BPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        BPoly::new(vec![UPoly::constant(c)])
    }

    pub fn x() -> Self {
        BPoly::from_x(UPoly::x())
    }

    pub fn y() -> Self {
        BPoly::new(vec![UPoly::zero(), UPoly::one()])
    }

    /// Polynomial in x only.
    pub fn from_x(p: UPoly) -> Self {
        BPoly::new(vec![p])
    }

    /// Polynomial in y only, from a univariate one.
    pub fn from_y(p: &UPoly) -> Self {
        BPoly::new(p.coeffs().iter().map(|c| UPoly::constant(c.clone())).collect())
    }

    /// From `(coefficient, x-exponent, y-exponent)` triples.
    pub fn from_terms(terms: &[(i64, usize, usize)]) -> Self {
        let mut f = BPoly::zero();
        for &(c, i, j) in terms {
            f += &BPoly::monomial(rat(c), i, j);
        }
        f
    }

    pub fn monomial(c: Rat, i: usize, j: usize) -> Self {
        let mut v = vec![UPoly::zero(); j + 1];
        v[j] = UPoly::monomial(c, i);
        BPoly::new(v)
    }

    pub fn coeffs(&self) -> &[UPoly] {
        &self.coeffs
    }

    pub fn coeff_y(&self, j: usize) -> UPoly {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn term(&self, i: usize, j: usize) -> Rat {
        self.coeffs.get(j).map(|c| c.coeff(i)).unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1 && self.coeffs.first().is_none_or(|c| c.is_constant())
    }

    /// Degree in y; 0 for the zero polynomial.
    pub fn d_y(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Degree in x; 0 for the zero polynomial.
    pub fn d_x(&self) -> usize {
        self.coeffs.iter().filter_map(|c| c.deg()).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> usize {
        self.support().map(|(i, j, _)| i + j).max().unwrap_or(0)
    }

    pub fn lc_y(&self) -> UPoly {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Coefficient of `x^{d_x}`, as a polynomial in y.
    pub fn lc_x(&self) -> UPoly {
        let dx = self.d_x();
        UPoly::new(self.coeffs.iter().map(|c| c.coeff(dx)).collect())
    }

    /// `f(x, 0)`
    pub fn const_y(&self) -> UPoly {
        self.coeff_y(0)
    }

    pub fn is_monic_y(&self) -> bool {
        !self.is_zero() && self.lc_y().is_constant()
    }

    /// Nonzero terms as `(x-exponent, y-exponent, coefficient)`.
    pub fn support(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.coeffs.iter().enumerate().flat_map(|(j, c)| {
            c.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(move |(i, a)| (i, j, a))
        })
    }

    pub fn scale(&self, c: &Rat) -> BPoly {
        BPoly::new(self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    pub fn mul_x(&self, u: &UPoly) -> BPoly {
        BPoly::new(self.coeffs.iter().map(|p| p * u).collect())
    }

    pub fn mul_yk(&self, k: usize) -> BPoly {
        if self.is_zero() {
            return BPoly::zero();
        }
        let mut v = vec![UPoly::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        BPoly::new(v)
    }

    pub fn pow(&self, k: usize) -> BPoly {
        let mut result = BPoly::one();
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

    pub fn deriv_y(&self) -> BPoly {
        BPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c.scale(&rat(j as i64)))
                .collect(),
        )
    }

    pub fn deriv_x(&self) -> BPoly {
        BPoly::new(self.coeffs.iter().map(|c| c.derivative()).collect())
    }

    pub fn eval(&self, a: &Rat, b: &Rat) -> Rat {
        self.eval_y(b).eval(a)
    }

    /// `f(a, y)` as a polynomial in y.
    pub fn eval_x(&self, a: &Rat) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| c.eval(a)).collect())
    }

    /// `f(x, b)` as a polynomial in x.
    pub fn eval_y(&self, b: &Rat) -> UPoly {
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(b) + c;
        }
        acc
    }

    /// `f(x, g(x))`
    pub fn eval_y_poly(&self, g: &UPoly) -> UPoly {
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + c;
        }
        acc
    }

    /// `f(y, x)`
    pub fn swap(&self) -> BPoly {
        let dx = self.d_x();
        let mut v = vec![UPoly::zero(); if self.is_zero() { 0 } else { dx + 1 }];
        for (i, slot) in v.iter_mut().enumerate() {
            *slot = UPoly::new(self.coeffs.iter().map(|c| c.coeff(i)).collect());
        }
        BPoly::new(v)
    }

    /// `f(X(x,y), Y(x,y))`
    pub fn compose(&self, xs: &BPoly, ys: &BPoly) -> BPoly {
        let mut acc = BPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * ys) + &upoly_at(c, xs);
        }
        acc
    }

    /// `f(x, Y(x,y))`
    pub fn subst_y(&self, ys: &BPoly) -> BPoly {
        let mut acc = BPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * ys) + &BPoly::from_x(c.clone());
        }
        acc
    }

    /// `f(x + a, y)`
    pub fn shift_x(&self, a: &Rat) -> BPoly {
        BPoly::new(self.coeffs.iter().map(|c| c.shift(a)).collect())
    }

    /// `f(x, y + b)`
    pub fn shift_y(&self, b: &Rat) -> BPoly {
        self.subst_y(&(&BPoly::y() + &BPoly::constant(b.clone())))
    }

    /// Monic gcd over Q[x] of the y-coefficients.
    pub fn content(&self) -> Result<UPoly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut g = UPoly::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        Ok(g)
    }

    /// `(content, primitive part)` with monic content; constants stay in the
    /// primitive part.
    pub fn content_primitive(&self) -> Result<(UPoly, BPoly)> {
        let g = self.content()?;
        let p = self.div_x(&g).ok_or_else(|| Error::Internal("content must divide".into()))?;
        Ok((g, p))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_ok_and(|c| c.is_constant())
    }

    /// Division of every coefficient by a polynomial in x.
    pub fn div_x(&self, u: &UPoly) -> Option<BPoly> {
        let mut v = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            v.push(c.exact_div(u)?);
        }
        Some(BPoly::new(v))
    }

    /// Integer-coefficient scalar multiple with coprime coefficients and a
    /// positive leading term (in y, then x). Canonical representative of the
    /// line through `self`.
    pub fn normalize(&self) -> BPoly {
        if self.is_zero() {
            return BPoly::zero();
        }
        let all: Vec<Rat> = self.support().map(|(_, _, c)| c.clone()).collect();
        let l = denom_lcm(&all);
        let scaled = self.scale(&int(&l));
        let all: Vec<Rat> = scaled.support().map(|(_, _, c)| c.clone()).collect();
        let mut g = numer_gcd(&all);
        if self.lc_y().lc().is_negative() {
            g = -g;
        }
        scaled.scale(&int(&g).recip())
    }

    /// True when `other = c * self` for a nonzero rational `c`.
    pub fn same_up_to_constant(&self, other: &BPoly) -> bool {
        self.normalize() == other.normalize()
    }

    /// Pseudo-remainder in y: `lc(g)^k f = q g + r` with `deg_y r < deg_y g`.
    pub fn prem_y(&self, g: &BPoly) -> BPoly {
        assert!(!g.is_zero(), "pseudo-division by zero");
        let dg = g.d_y();
        let lg = g.lc_y();
        let mut r = self.clone();
        while !r.is_zero() && r.d_y() >= dg {
            let k = r.d_y() - dg;
            let lr = r.lc_y();
            r = &r.mul_x(&lg) - &g.mul_x(&lr).mul_yk(k);
        }
        r
    }

    /// Primitive gcd over Q(x)[y] (content removed, normalized).
    pub fn gcd_y(&self, other: &BPoly) -> BPoly {
        let prim = |p: &BPoly| -> BPoly {
            if p.is_zero() {
                BPoly::zero()
            } else {
                p.content_primitive().expect("nonzero").1
            }
        };
        let (mut a, mut b) = (prim(self), prim(other));
        if a.d_y() < b.d_y() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = prim(&a.prem_y(&b));
            a = b;
            b = r;
        }
        a.normalize()
    }

    /// Exact division in Q[x][y]; `None` when `d` does not divide.
    pub fn exact_div(&self, d: &BPoly) -> Option<BPoly> {
        if d.is_zero() {
            return None;
        }
        let dd = d.d_y();
        let ld = d.lc_y();
        let mut r = self.clone();
        if r.is_zero() {
            return Some(BPoly::zero());
        }
        if r.d_y() < dd {
            return None;
        }
        let mut q = vec![UPoly::zero(); r.d_y() - dd + 1];
        while !r.is_zero() {
            if r.d_y() < dd {
                return None;
            }
            let k = r.d_y() - dd;
            let c = r.lc_y().exact_div(&ld)?;
            r = &r - &d.mul_x(&c).mul_yk(k);
            q[k] = c;
        }
        Some(BPoly::new(q))
    }

    /// True when `f(x, y)` has no y-dependence after removing the constant
    /// scalar, i.e. `f ∈ Q[x]`.
    pub fn is_in_x(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Formats in the given variable names, monomials by decreasing y-degree
    /// then decreasing x-degree.
    pub fn to_string_in(&self, xv: &str, yv: &str) -> String {
        let mut terms = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            for (i, a) in c.coeffs().iter().enumerate().rev() {
                if !a.is_zero() {
                    terms.push((a.clone(), monomial(&[(xv, i), (yv, j)])));
                }
            }
        }
        join_terms(terms)
    }
}

/// `u(X)` for a polynomial `u` in one variable and a bivariate argument.
pub fn upoly_at(u: &UPoly, xs: &BPoly) -> BPoly {
    let mut acc = BPoly::zero();
    for c in u.coeffs().iter().rev() {
        acc = &(&acc * xs) + &BPoly::constant(c.clone());
    }
    acc
}

impl fmt::Display for BPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x", "y"))
    }
}

impl Serialize for BPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl From<UPoly> for BPoly {
    fn from(p: UPoly) -> Self {
        BPoly::from_x(p)
    }
}

impl<'a> Add<&'a BPoly> for &'a BPoly {
    type Output = BPoly;
    fn add(self, o: &BPoly) -> BPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        BPoly::new((0..n).map(|j| &self.coeff_y(j) + &o.coeff_y(j)).collect())
    }
}

impl<'a> Sub<&'a BPoly> for &'a BPoly {
    type Output = BPoly;
    fn sub(self, o: &BPoly) -> BPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        BPoly::new((0..n).map(|j| &self.coeff_y(j) - &o.coeff_y(j)).collect())
    }
}

impl<'a> Mul<&'a BPoly> for &'a BPoly {
    type Output = BPoly;
    fn mul(self, o: &BPoly) -> BPoly {
        if self.is_zero() || o.is_zero() {
            return BPoly::zero();
        }
        let mut v = vec![UPoly::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += &(a * b);
                }
            }
        }
        BPoly::new(v)
    }
}

impl Neg for &BPoly {
    type Output = BPoly;
    fn neg(self) -> BPoly {
        BPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for BPoly {
    type Output = BPoly;
    fn neg(self) -> BPoly {
        -&self
    }
}

impl AddAssign<&BPoly> for BPoly {
    fn add_assign(&mut self, o: &BPoly) {
        *self = &*self + o;
    }
}

impl SubAssign<&BPoly> for BPoly {
    fn sub_assign(&mut self, o: &BPoly) {
        *self = &*self - o;
    }
}

owned_ops!(BPoly);

#[cfg(test)]
mod tests {
    use super::*;

    fn counterexample() -> BPoly {
        // x(x - y^2)^2 - 2y(x - y^2) + 1
        let x = BPoly::x();
        let y = BPoly::y();
        let t = &x - &y.pow(2);
        &(&(&x * &t.pow(2)) - &(&y * &t).scale(&rat(2))) + &BPoly::one()
    }

    #[test]
    fn ring_examples() {
        let x = BPoly::x();
        let y = BPoly::y();
        assert_eq!(&(&y - &x) + &(&y + &x), y.scale(&rat(2)));
        assert_eq!(&(&y - &x) * &(&y + &x), &y.pow(2) - &x.pow(2));
        assert_eq!(
            BPoly::from_terms(&[(1, 1, 4)]).deriv_y(),
            BPoly::from_terms(&[(4, 1, 3)])
        );
    }

    #[test]
    fn degrees_of_counterexample() {
        let f = counterexample();
        assert_eq!((f.d_x(), f.d_y()), (3, 4));
        assert_eq!(f.lc_y(), UPoly::x());
        assert_eq!(f.const_y(), UPoly::from_ints(&[1, 0, 0, 1]));
        assert_eq!(f.lc_x(), UPoly::one());
    }

    #[test]
    fn content_examples() {
        let f = BPoly::from_terms(&[(1, 1, 2), (1, 2, 1)]);
        let (c, p) = f.content_primitive().unwrap();
        assert_eq!(c, UPoly::x());
        assert_eq!(p, BPoly::from_terms(&[(1, 0, 2), (1, 1, 1)]));
        let (c, p) = BPoly::from_terms(&[(2, 0, 1)]).content_primitive().unwrap();
        assert!(c.is_one());
        assert_eq!(p, BPoly::from_terms(&[(2, 0, 1)]));
        assert!(BPoly::zero().content().is_err());
    }

    #[test]
    fn swap_and_compose() {
        let f = BPoly::from_terms(&[(1, 0, 2), (-1, 1, 0)]);
        assert_eq!(f.swap(), BPoly::from_terms(&[(1, 2, 0), (-1, 0, 1)]));
        let g = f.compose(&BPoly::y(), &BPoly::x());
        assert_eq!(g, f.swap());
        assert_eq!(f.compose(&BPoly::x(), &BPoly::y()), f);
    }

    #[test]
    fn gcd_and_division() {
        let a = BPoly::from_terms(&[(1, 0, 1), (-1, 1, 0)]);
        let b = BPoly::from_terms(&[(1, 0, 2), (1, 0, 0)]);
        let c = BPoly::from_terms(&[(1, 0, 1), (1, 2, 0)]);
        let ab = &a * &b;
        let ac = &a * &c;
        assert_eq!(ab.gcd_y(&ac), a.normalize());
        assert_eq!(ab.exact_div(&b), Some(a.clone()));
        assert_eq!(ab.exact_div(&c), None);
    }

    #[test]
    fn printing_order() {
        let f = BPoly::from_terms(&[(2, 3, 2), (-1, 0, 0), (1, 1, 2)]);
        assert_eq!(f.to_string(), "2*x^3*y^2 + x*y^2 - 1");
    }
}
