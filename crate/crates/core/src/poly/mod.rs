mod bform;
mod bpoly;
mod parse;
pub mod print;
pub mod rat;
mod upoly;

use num_traits::Zero;
use serde::Serialize;

pub use bform::BForm;
pub use bpoly::{upoly_at, BPoly};
pub use parse::{parse_form, parse_form_product, parse_poly, parse_upoly, split_product};
pub use rat::{fmt_rat, frac, rat, Rat};
pub use upoly::{Degree, UPoly};

use crate::error::{Error, Result};

/// Degree and leading-coefficient data of a nonzero `f ∈ Q[x][y]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub d_x: usize,
    pub d_y: usize,
    pub lc_y: UPoly,
    /// Coefficient of `x^{d_x}`, a polynomial in y (printed with variable x).
    pub lc_x: UPoly,
    pub const_coeff_y: UPoly,
    pub monic_in_y: bool,
    pub monic_in_x: bool,
    pub primitive_in_y: bool,
    pub separable_in_y: bool,
    pub vanishes_at_inf_inf: bool,
}

pub fn degree_profile(f: &BPoly) -> Result<DegreeProfile> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (d_x, d_y) = (f.d_x(), f.d_y());
    let lc_y = f.lc_y();
    let lc_x = f.lc_x();
    Ok(DegreeProfile {
        d_x,
        d_y,
        monic_in_y: lc_y.is_constant(),
        monic_in_x: lc_x.is_constant(),
        lc_y,
        lc_x,
        const_coeff_y: f.const_y(),
        primitive_in_y: f.is_primitive(),
        separable_in_y: is_separable_in_y(f),
        vanishes_at_inf_inf: f.term(d_x, d_y) == Rat::from_integer(0.into()),
    })
}

/// `gcd(f, ∂_y f)` over Q(x) is constant in y. Constants in y count as
/// separable only when nonzero.
pub fn is_separable_in_y(f: &BPoly) -> bool {
    if f.is_zero() {
        return false;
    }
    if f.d_y() == 0 {
        return true;
    }
    // A coprime specialisation at a point where lc_y survives certifies it.
    let (lc, fy) = (f.lc_y(), f.deriv_y());
    for k in 0..8 {
        let x0 = rat(k);
        if lc.eval(&x0).is_zero() {
            continue;
        }
        if f.eval_x(&x0).gcd(&fy.eval_x(&x0)).is_constant() {
            return true;
        }
    }
    f.gcd_y(&fy).d_y() == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_of_counterexample() {
        let f = parse_poly("x*(x-y^2)^2 - 2*y*(x-y^2) + 1").unwrap();
        let p = degree_profile(&f).unwrap();
        assert_eq!((p.d_x, p.d_y), (3, 4));
        assert_eq!(p.lc_y, UPoly::x());
        assert_eq!(p.const_coeff_y, UPoly::from_ints(&[1, 0, 0, 1]));
        assert!(!p.monic_in_y && p.monic_in_x && p.vanishes_at_inf_inf);
        assert!(p.primitive_in_y && p.separable_in_y);
    }

    #[test]
    fn profile_flags() {
        let p = degree_profile(&parse_poly("y^2 - x").unwrap()).unwrap();
        assert!(p.monic_in_y && p.primitive_in_y && p.separable_in_y);
        let p = degree_profile(&parse_poly("x*y^2").unwrap()).unwrap();
        assert!(!p.primitive_in_y);
        let p = degree_profile(&parse_poly("(y-x)^2").unwrap()).unwrap();
        assert!(!p.separable_in_y);
        assert_eq!(degree_profile(&BPoly::zero()).unwrap_err(), Error::ZeroPolynomial);
    }
}
