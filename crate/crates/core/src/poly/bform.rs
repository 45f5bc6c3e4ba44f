use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::bpoly::BPoly;
use super::print::{join_terms, monomial};
use super::rat::{rat, Rat};
use super::upoly::UPoly;

/// Binary form of declared degree `d` in `(Y0, Y1)` over Q[x];
/// `coeffs[k]` multiplies `Y0^k Y1^(d-k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BForm {
    coeffs: Vec<UPoly>,
}

impl BForm {
    /// Builds a form of degree `coeffs.len() - 1`. Panics on an empty vector.
    pub fn new(coeffs: Vec<UPoly>) -> Self {
        assert!(!coeffs.is_empty(), "a form needs at least one coefficient");
        BForm { coeffs }
    }

    pub fn zero(d: usize) -> Self {
        BForm::new(vec![UPoly::zero(); d + 1])
    }

    pub fn y0() -> Self {
        BForm::new(vec![UPoly::zero(), UPoly::one()])
    }

    pub fn y1() -> Self {
        BForm::new(vec![UPoly::one(), UPoly::zero()])
    }

    /// `a*Y0 + b*Y1`
    pub fn linear(a: UPoly, b: UPoly) -> Self {
        BForm::new(vec![b, a])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[UPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &UPoly {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Largest power of `Y1` dividing the form.
    pub fn ord_y1(&self) -> usize {
        match self.coeffs.iter().rposition(|c| !c.is_zero()) {
            Some(k) => self.degree() - k,
            None => self.degree(),
        }
    }

    pub fn homogenize(f: &BPoly) -> BForm {
        if f.is_zero() {
            return BForm::zero(0);
        }
        BForm::new(f.coeffs().to_vec())
    }

    /// `F(y, 1)`; the y-degree drops by `ord_y1`.
    pub fn dehomogenize(&self) -> BPoly {
        BPoly::new(self.coeffs.clone())
    }

    /// `F(Y1, Y0)`
    pub fn swap(&self) -> BForm {
        let mut v = self.coeffs.clone();
        v.reverse();
        BForm::new(v)
    }

    pub fn scale(&self, c: &Rat) -> BForm {
        BForm::new(self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    pub fn add(&self, o: &BForm) -> BForm {
        assert_eq!(self.degree(), o.degree(), "adding forms of different degree");
        BForm::new(self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn mul(&self, o: &BForm) -> BForm {
        let mut v = vec![UPoly::zero(); self.degree() + o.degree() + 1];
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
        BForm::new(v)
    }

    pub fn mul_x(&self, u: &UPoly) -> BForm {
        BForm::new(self.coeffs.iter().map(|c| c * u).collect())
    }

    pub fn pow(&self, k: usize) -> BForm {
        let mut r = BForm::new(vec![UPoly::one()]);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn product(forms: &[BForm]) -> BForm {
        forms
            .iter()
            .fold(BForm::new(vec![UPoly::one()]), |acc, f| acc.mul(f))
    }

    /// `∂F/∂Y0`, a form of degree `d - 1` (requires `d ≥ 1`).
    pub fn deriv_y0(&self) -> BForm {
        let d = self.degree();
        assert!(d >= 1);
        BForm::new((1..=d).map(|k| self.coeffs[k].scale(&rat(k as i64))).collect())
    }

    /// `∂F/∂Y1`, a form of degree `d - 1` (requires `d ≥ 1`).
    pub fn deriv_y1(&self) -> BForm {
        let d = self.degree();
        assert!(d >= 1);
        BForm::new(
            (0..d)
                .map(|k| self.coeffs[k].scale(&rat((d - k) as i64)))
                .collect(),
        )
    }

    /// `F(a*Y0 + b*Y1, c*Y0 + d*Y1)`
    pub fn substitute(&self, a: &UPoly, b: &UPoly, c: &UPoly, d: &UPoly) -> BForm {
        let n = self.degree();
        let l0 = BForm::linear(a.clone(), b.clone());
        let l1 = BForm::linear(c.clone(), d.clone());
        let mut p0 = vec![BForm::new(vec![UPoly::one()])];
        let mut p1 = vec![BForm::new(vec![UPoly::one()])];
        for k in 0..n {
            p0.push(p0[k].mul(&l0));
            p1.push(p1[k].mul(&l1));
        }
        let mut acc = BForm::zero(n);
        for (k, fk) in self.coeffs.iter().enumerate() {
            if fk.is_zero() {
                continue;
            }
            acc = acc.add(&p0[k].mul(&p1[n - k]).mul_x(fk));
        }
        acc
    }

    pub fn eval_x(&self, a: &Rat) -> Vec<Rat> {
        self.coeffs.iter().map(|c| c.eval(a)).collect()
    }

    pub fn d_x(&self) -> usize {
        self.coeffs.iter().filter_map(|c| c.deg()).max().unwrap_or(0)
    }

    /// Nonzero terms as `(x-exponent, Y0-exponent, coefficient)`.
    pub fn support(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.coeffs.iter().enumerate().flat_map(|(k, c)| {
            c.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(move |(i, a)| (i, k, a))
        })
    }

    /// Normalized so that the dehomogenization is normalized; same degree.
    pub fn normalize(&self) -> BForm {
        let n = self.dehomogenize().normalize();
        let mut v = n.coeffs().to_vec();
        v.resize(self.degree() + 1, UPoly::zero());
        BForm::new(v)
    }

    pub fn same_up_to_constant(&self, o: &BForm) -> bool {
        self.degree() == o.degree() && self.normalize() == o.normalize()
    }
}

impl fmt::Display for BForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            for (i, a) in c.coeffs().iter().enumerate().rev() {
                if !a.is_zero() {
                    terms.push((a.clone(), monomial(&[("x", i), ("Y0", k), ("Y1", d - k)])));
                }
            }
        }
        f.write_str(&join_terms(terms))
    }
}

impl Serialize for BForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y2_minus_x() -> BForm {
        BForm::new(vec![-UPoly::x(), UPoly::zero(), UPoly::one()])
    }

    #[test]
    fn homogenize_round_trip() {
        let f = BPoly::from_terms(&[(1, 0, 2), (-1, 1, 0)]);
        let fh = BForm::homogenize(&f);
        assert_eq!(fh, y2_minus_x());
        assert_eq!(fh.dehomogenize(), f);
        assert_eq!(fh.to_string(), "Y0^2 - x*Y1^2");
    }

    #[test]
    fn degree_drop_on_dehomogenize() {
        // Y1*(Y0^2 + x*Y1^2)
        let g = BForm::y1().mul(&BForm::new(vec![UPoly::x(), UPoly::zero(), UPoly::one()]));
        assert_eq!(g.degree(), 3);
        assert_eq!(g.ord_y1(), 1);
        assert_eq!(g.dehomogenize(), BPoly::from_terms(&[(1, 0, 2), (1, 1, 0)]));
    }

    #[test]
    fn substitution_examples() {
        let f = y2_minus_x();
        let (z, o) = (UPoly::zero(), UPoly::one());
        assert_eq!(f.substitute(&o, &z, &z, &o), f);
        assert_eq!(f.substitute(&z, &o, &o, &z), f.swap());
        // F(Y0, x*Y0 + Y1) = (1 - x^3) Y0^2 - 2x^2 Y0 Y1 - x Y1^2
        let g = f.substitute(&o, &z, &UPoly::x(), &o);
        assert_eq!(
            g,
            BForm::new(vec![
                -UPoly::x(),
                UPoly::from_ints(&[0, 0, -2]),
                UPoly::from_ints(&[1, 0, 0, -1]),
            ])
        );
    }

    #[test]
    fn partials() {
        let f = y2_minus_x();
        assert_eq!(f.deriv_y0(), BForm::new(vec![UPoly::zero(), UPoly::from_ints(&[2])]));
        assert_eq!(f.deriv_y1(), BForm::new(vec![UPoly::from_ints(&[0, -2]), UPoly::zero()]));
    }
}
