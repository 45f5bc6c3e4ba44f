use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{rank_mod_p, rank_rational, rat_mod};
use crate::poly::{is_separable_in_y, BPoly, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FactorCount {
    pub squarefree: bool,
    pub abs_factor_count: usize,
}

pub fn squarefree_in_y(f: &BPoly) -> Result<bool> {
    if f.is_zero() || f.d_y() == 0 {
        return Err(Error::DegreeZeroInY);
    }
    Ok(is_separable_in_y(f))
}

/// Coefficient matrix of the linear map `(G, H) -> f G_x - G f_x - f H_y + H f_y`
/// with `deg G ≤ (m, n-1)` and `deg H ≤ (m-1, n)`; rows are indexed by the
/// monomials of the image.
fn differential_system(f: &BPoly) -> (Vec<Vec<Rat>>, usize) {
    let (m, n) = (f.d_x(), f.d_y());
    let fx = f.deriv_x();
    let fy = f.deriv_y();
    let mut columns: Vec<BPoly> = Vec::new();
    for i in 0..=m {
        for j in 0..n {
            let mono = BPoly::monomial(Rat::from_integer(1.into()), i, j);
            let dx = mono.deriv_x();
            columns.push(&(&dx * f) - &(&mono * &fx));
        }
    }
    for i in 0..m {
        for j in 0..=n {
            let mono = BPoly::monomial(Rat::from_integer(1.into()), i, j);
            let dy = mono.deriv_y();
            columns.push(&(&mono * &fy) - &(&dy * f));
        }
    }
    let (rx, ry) = (2 * m + 1, 2 * n + 1);
    let mut mat = vec![vec![Rat::zero(); columns.len()]; rx * ry];
    for (c, col) in columns.iter().enumerate() {
        for (i, j, a) in col.support() {
            mat[j * rx + i][c] = a.clone();
        }
    }
    mat.retain(|row| row.iter().any(|a| !a.is_zero()));
    let cols = columns.len();
    (mat, cols)
}

/// Number of absolutely irreducible factors of a primitive squarefree `f`
/// with positive degree in both variables.
pub fn absolute_factor_count(f: &BPoly) -> Result<FactorCount> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (m, n) = (f.d_x(), f.d_y());
    if m == 0 || n == 0 {
        return Err(Error::UnivariateInput { d_x: m, d_y: n });
    }
    if !f.is_primitive() {
        return Err(Error::NotPrimitive {
            content: f.content()?.to_string(),
        });
    }
    if !is_separable_in_y(f) {
        return Err(Error::NotSquarefree);
    }
    let (mat, cols) = differential_system(f);
    let modular: Option<Vec<Vec<u64>>> = mat
        .iter()
        .map(|row| row.iter().map(rat_mod).collect())
        .collect();
    if let Some(mp) = modular {
        if cols - rank_mod_p(mp) == 1 {
            return Ok(FactorCount {
                squarefree: true,
                abs_factor_count: 1,
            });
        }
    }
    let nullity = cols - rank_rational(mat);
    Ok(FactorCount {
        squarefree: true,
        abs_factor_count: nullity,
    })
}

/// Absolute irreducibility; polynomials in one variable are irreducible
/// exactly when they are linear.
pub fn is_absolutely_irreducible(f: &BPoly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (m, n) = (f.d_x(), f.d_y());
    if n == 0 {
        return Ok(m == 1);
    }
    if m == 0 {
        return Ok(n == 1);
    }
    if !f.is_primitive() {
        return Ok(false);
    }
    if !is_separable_in_y(f) {
        return Ok(false);
    }
    Ok(absolute_factor_count(f)?.abs_factor_count == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn count(s: &str) -> usize {
        absolute_factor_count(&parse_poly(s).unwrap())
            .unwrap()
            .abs_factor_count
    }

    #[test]
    fn squarefree_examples() {
        assert!(!squarefree_in_y(&parse_poly("(y - x)^2").unwrap()).unwrap());
        assert!(squarefree_in_y(&parse_poly("(y - x)*(y + x)").unwrap()).unwrap());
        assert!(squarefree_in_y(&parse_poly("y^2 - x^3").unwrap()).unwrap());
        assert_eq!(
            squarefree_in_y(&parse_poly("x").unwrap()).unwrap_err(),
            Error::DegreeZeroInY
        );
    }

    #[test]
    fn counts() {
        assert_eq!(count("y^2 - 2*x^2"), 2);
        assert_eq!(count("y^2 - x"), 1);
        assert_eq!(count("(y^2 - x)*(y^2 - x - 1)"), 2);
        assert_eq!(count("y^2 + x^2"), 2);
        assert_eq!(count("(y - x)*(y + x)*(y^3 - x^2 - 1)"), 3);
    }

    #[test]
    fn irreducibility() {
        let ce = parse_poly("x*(x-y^2)^2 - 2*y*(x-y^2) + 1").unwrap();
        assert!(is_absolutely_irreducible(&ce).unwrap());
        assert!(!is_absolutely_irreducible(&parse_poly("y^2 - x^2").unwrap()).unwrap());
        assert!(is_absolutely_irreducible(&parse_poly("y - x^5").unwrap()).unwrap());
        assert!(!is_absolutely_irreducible(&parse_poly("y^2 - 1").unwrap()).unwrap());
        assert!(is_absolutely_irreducible(&parse_poly("2*x + 1").unwrap()).unwrap());
    }

    #[test]
    fn precondition_errors() {
        let e = |s: &str| absolute_factor_count(&parse_poly(s).unwrap()).unwrap_err().kind();
        assert_eq!(e("x*y^2 - x"), "NotPrimitive");
        assert_eq!(e("(y - x)^2*(y + 1)"), "NotSquarefree");
        assert_eq!(e("y^2 - 1"), "UnivariateInput");
    }
}
