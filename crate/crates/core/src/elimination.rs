use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modular::resultant_y_multimodular;
use crate::poly::{rat, BForm, BPoly, Rat, UPoly};

/// Below this y-degree the resultant is taken as a Sylvester determinant.
pub const SYLVESTER_CUTOFF: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscReport {
    pub disc: UPoly,
    /// `None` when the discriminant vanishes (f inseparable in y).
    pub deg: Option<usize>,
    pub upper_bound: usize,
    pub ord_inf: Option<usize>,
    pub d_y: usize,
    pub d_x: usize,
    pub separable: bool,
}

/// Fraction-free determinant over Q[x] (Bareiss elimination).
pub fn bareiss_det(mut m: Vec<Vec<UPoly>>) -> UPoly {
    let n = m.len();
    if n == 0 {
        return UPoly::one();
    }
    let mut negate = false;
    let mut prev = UPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return UPoly::zero();
            };
            m.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Sylvester matrix of `p` and `q` with formal degrees `m` and `n`
/// (coefficient vectors are indexed by ascending degree).
fn sylvester(p: &[UPoly], m: usize, q: &[UPoly], n: usize) -> Vec<Vec<UPoly>> {
    let size = m + n;
    let get = |v: &[UPoly], k: usize| v.get(k).cloned().unwrap_or_default();
    let mut rows = Vec::with_capacity(size);
    for r in 0..n {
        let mut row = vec![UPoly::zero(); size];
        for k in 0..=m {
            row[r + k] = get(p, m - k);
        }
        rows.push(row);
    }
    for r in 0..m {
        let mut row = vec![UPoly::zero(); size];
        for k in 0..=n {
            row[r + k] = get(q, n - k);
        }
        rows.push(row);
    }
    rows
}

/// Resultant with formal degrees, as a Sylvester determinant.
pub fn resultant_sylvester_formal(p: &[UPoly], m: usize, q: &[UPoly], n: usize) -> UPoly {
    bareiss_det(sylvester(p, m, q, n))
}

/// `lc(b)^(deg a - deg b + 1) * a  mod  b` in Q[x][y].
fn prem_exact(a: &BPoly, b: &BPoly) -> BPoly {
    let (da, db) = (a.d_y(), b.d_y());
    let lb = b.lc_y();
    let mut r = a.clone();
    let mut steps = 0;
    while !r.is_zero() && r.d_y() >= db {
        let k = r.d_y() - db;
        let lr = r.lc_y();
        r = &r.mul_x(&lb) - &b.mul_x(&lr).mul_yk(k);
        steps += 1;
    }
    let total = da - db + 1;
    r.mul_x(&lb.pow(total - steps))
}

/// Subresultant resultant for `deg_y a ≥ 1`, `deg_y b ≥ 1` over Q[x].
pub fn resultant_subresultant(f: &BPoly, g: &BPoly) -> UPoly {
    let (mut a, mut b) = (f.clone(), g.clone());
    if a.is_zero() || b.is_zero() {
        return UPoly::zero();
    }
    let mut negate = false;
    if a.d_y() < b.d_y() {
        std::mem::swap(&mut a, &mut b);
        if a.d_y() % 2 == 1 && b.d_y() % 2 == 1 {
            negate = true;
        }
    }
    if b.d_y() == 0 {
        let r = b.lc_y().pow(a.d_y());
        return if negate { -r } else { r };
    }
    let mut g_ = UPoly::one();
    let mut h = UPoly::one();
    loop {
        let delta = a.d_y() - b.d_y();
        if a.d_y() % 2 == 1 && b.d_y() % 2 == 1 {
            negate = !negate;
        }
        let r = prem_exact(&a, &b);
        a = b;
        let div = &g_ * &h.pow(delta);
        b = r.div_x(&div).expect("subresultant division is exact");
        g_ = a.lc_y();
        h = if delta == 0 {
            h
        } else {
            g_.pow(delta)
                .exact_div(&h.pow(delta - 1))
                .expect("subresultant h update is exact")
        };
        if b.is_zero() {
            return UPoly::zero();
        }
        if b.d_y() == 0 {
            break;
        }
    }
    let da = a.d_y();
    let res = b
        .lc_y()
        .pow(da)
        .exact_div(&h.pow(da - 1))
        .expect("final subresultant step is exact");
    if negate {
        -res
    } else {
        res
    }
}

/// `Res_y(f, g)`.
pub fn resultant_y(f: &BPoly, g: &BPoly) -> Result<UPoly> {
    let (m, n) = (f.d_y(), g.d_y());
    if m == 0 && n == 0 {
        return Err(Error::BothConstantInY);
    }
    if f.is_zero() || g.is_zero() {
        return Ok(UPoly::zero());
    }
    if m.max(n) < SYLVESTER_CUTOFF && f.d_x() + g.d_x() < 2 * SYLVESTER_CUTOFF {
        Ok(resultant_sylvester_formal(f.coeffs(), m, g.coeffs(), n))
    } else {
        Ok(resultant_y_multimodular(f, g))
    }
}

/// Resultant of two coefficient vectors with formal degrees `m`, `n`, where
/// leading entries may vanish.
pub fn resultant_formal(p: &BPoly, m: usize, q: &BPoly, n: usize) -> UPoly {
    if p.is_zero() || q.is_zero() {
        return UPoly::zero();
    }
    if m.max(n) < SYLVESTER_CUTOFF {
        return resultant_sylvester_formal(p.coeffs(), m, q.coeffs(), n);
    }
    if p.d_y() == m {
        let drop = n - q.d_y();
        let base = if m == 0 {
            p.lc_y().pow(n)
        } else if q.d_y() == 0 {
            q.lc_y().pow(m)
        } else {
            resultant_y_multimodular(p, q)
        };
        return &base * &p.lc_y().pow(drop);
    }
    if q.d_y() == n {
        let r = resultant_formal(q, n, p, m);
        return if (m * n) % 2 == 1 { -r } else { r };
    }
    UPoly::zero()
}

fn sign_factor(d: usize) -> Rat {
    if (d * (d.saturating_sub(1)) / 2) % 2 == 1 {
        rat(-1)
    } else {
        rat(1)
    }
}

/// `Δ_y(f) = (-1)^{d(d-1)/2} Res_y(f, ∂_y f) / lc_y(f)`.
pub fn discriminant(f: &BPoly) -> Result<UPoly> {
    let d = f.d_y();
    if f.is_zero() || d == 0 {
        return Err(Error::DegreeZeroInY);
    }
    let r = resultant_y(f, &f.deriv_y())?;
    let q = r
        .exact_div(&f.lc_y())
        .ok_or_else(|| Error::Internal("leading coefficient must divide Res(f, f_y)".into()))?;
    Ok(q.scale(&sign_factor(d)))
}

/// `Δ_x(f)`, the discriminant with the variable roles exchanged.
pub fn discriminant_x(f: &BPoly) -> Result<UPoly> {
    discriminant(&f.swap())
}

pub fn disc_affine(f: &BPoly) -> Result<DiscReport> {
    let disc = discriminant(f)?;
    let (d_x, d_y) = (f.d_x(), f.d_y());
    let upper_bound = 2 * d_x * (d_y - 1);
    let deg = disc.deg();
    Ok(DiscReport {
        separable: !disc.is_zero(),
        ord_inf: deg.map(|k| upper_bound - k),
        deg,
        upper_bound,
        d_y,
        d_x,
        disc,
    })
}

/// As `disc_affine`, requiring primitivity and cross-checking the order at
/// infinity against the discriminant of `x^{d_x} f(1/x, y)`.
pub fn disc_degree_report(f: &BPoly) -> Result<DiscReport> {
    if !f.is_zero() && !f.is_primitive() {
        return Err(Error::NotPrimitive {
            content: f.content()?.to_string(),
        });
    }
    let rep = disc_affine(f)?;
    if let Some(ord_inf) = rep.ord_inf {
        let reversed = BPoly::new(f.coeffs().iter().map(|c| c.reverse(rep.d_x)).collect());
        let dr = discriminant(&reversed)?;
        let at_zero = dr.ord_at(&Rat::zero())?;
        if at_zero != ord_inf {
            return Err(Error::Internal(format!(
                "order at infinity {at_zero} disagrees with bound minus degree {ord_inf}"
            )));
        }
    }
    Ok(rep)
}

/// `Δ_Y(F) = (-1)^{d(d-1)/2} Res(∂F/∂Y0, ∂F/∂Y1) / d^{d-2}` with formal degrees.
pub fn disc_form(f: &BForm) -> Result<UPoly> {
    let d = f.degree();
    if d <= 1 {
        return Err(Error::DegreeTooSmall(d));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let p = f.deriv_y0().dehomogenize();
    let q = f.deriv_y1().dehomogenize();
    let r = resultant_formal(&p, d - 1, &q, d - 1);
    let norm = num_traits::pow(rat(d as i64), d - 2);
    Ok(r.scale(&(sign_factor(d) / norm)))
}

/// Resultant of two binary forms with their declared degrees.
pub fn resultant_forms(p: &BForm, q: &BForm) -> UPoly {
    resultant_formal(&p.dehomogenize(), p.degree(), &q.dehomogenize(), q.degree())
}

pub fn ord_at(u: &UPoly, alpha: &Rat) -> Result<usize> {
    u.ord_at(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_form, parse_poly};

    fn p(s: &str) -> BPoly {
        parse_poly(s).unwrap()
    }

    fn u(s: &str) -> UPoly {
        crate::poly::parse_upoly(s, 'x').unwrap()
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(resultant_y(&p("y - x"), &p("y + x")).unwrap(), u("2*x"));
        assert_eq!(resultant_y(&p("y^2 - x"), &p("y^2 + x")).unwrap(), u("4*x^2"));
        assert_eq!(resultant_y(&p("y^2 - x"), &p("y^2 - x - 1")).unwrap(), u("1"));
        assert_eq!(
            resultant_y(&p("x"), &p("x + 1")).unwrap_err(),
            Error::BothConstantInY
        );
    }

    #[test]
    fn both_routes_agree() {
        let pairs = [
            ("y^3 + x*y + 1", "y^2 - x^2*y + 3"),
            ("x*y^4 - y + x^2", "y^3 + 2*x"),
            ("(y - x)*(y^2 + 1)", "(y - x)*(y + 2)"),
            ("y^7 - x*y^3 + 2", "x*y^6 + y - x^3"),
            ("y^2 + 1", "y^9 + x"),
            ("x*y^2 - 1", "(x - 1)*y + x^3"),
            ("y^3 + x", "5"),
        ];
        for (a, b) in pairs {
            let (f, g) = (p(a), p(b));
            let s = resultant_sylvester_formal(f.coeffs(), f.d_y(), g.coeffs(), g.d_y());
            assert_eq!(resultant_subresultant(&f, &g), s, "{a} / {b}");
            assert_eq!(crate::modular::resultant_y_multimodular(&f, &g), s, "{a} / {b}");
            assert_eq!(resultant_y(&f, &g).unwrap(), s);
        }
    }

    #[test]
    fn discriminant_examples() {
        let r = disc_affine(&p("y^2 - x")).unwrap();
        assert_eq!((r.disc.clone(), r.deg, r.upper_bound, r.ord_inf), (u("4*x"), Some(1), 2, Some(1)));
        // depressed cubic with p = x, q = x^2 + 1
        let d = discriminant(&p("y^3 + x*y + x^2 + 1")).unwrap();
        assert_eq!(d, u("-4*x^3 - 27*(x^2 + 1)^2"));
        let r = disc_degree_report(&p("x*(x-y^2)^2 - 2*y*(x-y^2) + 1")).unwrap();
        assert_eq!((r.deg, r.upper_bound, r.ord_inf), (Some(3), 18, Some(15)));
        assert_eq!(r.disc, u("-16*(16*x^3 + 27)"));
        let r = disc_degree_report(&p("y^2 - x^3")).unwrap();
        assert_eq!((r.deg, r.upper_bound, r.ord_inf), (Some(3), 6, Some(3)));
        assert_eq!(discriminant(&p("x*y + 1")).unwrap(), u("1"));
    }

    #[test]
    fn inseparable_gives_zero() {
        let r = disc_affine(&p("(y - x)^2")).unwrap();
        assert!(r.disc.is_zero() && !r.separable && r.deg.is_none());
        assert_eq!(disc_affine(&p("x^2")).unwrap_err(), Error::DegreeZeroInY);
        assert_eq!(
            disc_degree_report(&p("x*y^2 + x")).unwrap_err().kind(),
            "NotPrimitive"
        );
    }

    #[test]
    fn form_discriminants() {
        let f = parse_form("Y0^2 - x*Y1^2").unwrap();
        assert_eq!(disc_form(&f).unwrap(), u("4*x"));
        let g = parse_form("Y1*(Y0^2 + x*Y1^2)").unwrap();
        assert_eq!(disc_form(&g).unwrap().deg(), Some(1));
        let h = parse_form("Y0*Y1*(Y0^2 + x*Y0*Y1 + Y1^2)").unwrap();
        let dh = disc_form(&h).unwrap();
        assert_eq!(dh.monic(), u("x^2 - 4"));
        let c = parse_form("Y0^3 + x*Y0*Y1^2 + (x^2 + 1)*Y1^3").unwrap();
        assert_eq!(disc_form(&c).unwrap(), u("-4*x^3 - 27*(x^2 + 1)^2"));
        assert_eq!(disc_form(&parse_form("Y0").unwrap()).unwrap_err(), Error::DegreeTooSmall(1));
    }

    #[test]
    fn form_agrees_with_affine_when_monic() {
        for s in ["y^2 - x", "y^3 - x*y + x^5", "2*y^4 + x*y - 3", "y^6 + x^2*y^3 - y + x"] {
            let f = p(s);
            assert_eq!(disc_form(&BForm::homogenize(&f)).unwrap(), discriminant(&f).unwrap(), "{s}");
        }
    }

    #[test]
    fn formal_route_matches_sylvester_with_vanishing_leads() {
        let a = parse_form("Y1^2*(Y0^5 + x*Y0^2*Y1^3 - Y1^5)").unwrap();
        let b = parse_form("(x*Y0 + Y1)*(Y0^6 - 2*Y0*Y1^5 + x^2*Y1^6)").unwrap();
        let c = parse_form("Y1*(Y0^6 + Y1^6)").unwrap();
        for (f, g) in [(&a, &b), (&b, &a), (&a, &c), (&c, &b)] {
            let s = resultant_sylvester_formal(
                f.dehomogenize().coeffs(),
                f.degree(),
                g.dehomogenize().coeffs(),
                g.degree(),
            );
            assert_eq!(resultant_forms(f, g), s);
        }
        assert!(resultant_forms(&a, &c).is_zero());
    }

    #[test]
    fn orders() {
        assert_eq!(ord_at(&u("4*x^3"), &rat(0)).unwrap(), 3);
        assert_eq!(ord_at(&u("x^2 - 2*x + 1"), &rat(1)).unwrap(), 2);
        assert_eq!(ord_at(&u("5"), &rat(0)).unwrap(), 0);
    }
}
