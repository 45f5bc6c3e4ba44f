use std::fmt;

use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::{parse_upoly, BForm, BPoly, Rat, UPoly};
use crate::polytope::{edge_char_data, generic_polytope};

/// Invertible 2x2 matrix over Q[x] acting by `F(Y) -> F(aY0 + bY1, cY0 + dY1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GMat {
    a: UPoly,
    b: UPoly,
    c: UPoly,
    d: UPoly,
}

impl GMat {
    pub fn new(a: UPoly, b: UPoly, c: UPoly, d: UPoly) -> Result<Self> {
        let m = GMat { a, b, c, d };
        let det = m.det();
        if det.is_zero() || !det.is_constant() {
            return Err(Error::InvalidMatrix(det.to_string()));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        GMat {
            a: UPoly::one(),
            b: UPoly::zero(),
            c: UPoly::zero(),
            d: UPoly::one(),
        }
    }

    /// The inversion `Y0 <-> Y1`, i.e. `f -> y^{d_y} f(x, 1/y)`.
    pub fn tau() -> Self {
        GMat {
            a: UPoly::zero(),
            b: UPoly::one(),
            c: UPoly::one(),
            d: UPoly::zero(),
        }
    }

    /// De Jonquieres map `y -> lambda*y + h(x)`.
    pub fn jonquieres(lambda: Rat, h: UPoly) -> Result<Self> {
        GMat::new(UPoly::constant(lambda), h, UPoly::zero(), UPoly::one())
    }

    pub fn entries(&self) -> [&UPoly; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> UPoly {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    /// Constant determinant.
    pub fn det_value(&self) -> Rat {
        self.det().coeff(0)
    }

    /// Matrix product `self * o`; acting by the product equals acting by
    /// `self` and then by `o`.
    pub fn mul(&self, o: &GMat) -> GMat {
        GMat {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }

    pub fn inverse(&self) -> GMat {
        let inv = self.det_value().recip();
        GMat {
            a: self.d.scale(&inv),
            b: (-&self.b).scale(&inv),
            c: (-&self.c).scale(&inv),
            d: self.a.scale(&inv),
        }
    }

    pub fn degree(&self) -> usize {
        self.entries().iter().map(|e| e.deg0()).max().unwrap_or(0)
    }

    /// Reads the `[[a, b], [c, d]]` notation produced by `Display`.
    pub fn parse(text: &str) -> Result<GMat> {
        let shape = |offset: usize| Error::Syntax {
            offset,
            message: "expected [[a, b], [c, d]]".into(),
        };
        let mut entries = Vec::new();
        let (mut depth, mut start) = (0usize, 0usize);
        for (i, ch) in text.char_indices() {
            match ch {
                '[' => {
                    depth += 1;
                    if depth > 2 {
                        return Err(shape(i));
                    }
                    start = i + 1;
                }
                ']' | ',' if depth == 2 => {
                    entries.push((start, &text[start..i]));
                    start = i + 1;
                    if ch == ']' {
                        depth -= 1;
                    }
                }
                ']' => depth = depth.checked_sub(1).ok_or_else(|| shape(i))?,
                ',' if depth == 1 => {}
                c if depth == 1 || depth == 0 => {
                    if !c.is_whitespace() {
                        return Err(shape(i));
                    }
                }
                _ => {}
            }
        }
        if depth != 0 || entries.len() != 4 {
            return Err(shape(text.len()));
        }
        let mut polys = Vec::with_capacity(4);
        for (at, e) in entries {
            let u = parse_upoly(e, 'x').map_err(|err| match err {
                Error::Syntax { offset, message } => Error::Syntax { offset: at + offset, message },
                Error::DivisionByZero { offset } => Error::DivisionByZero { offset: at + offset },
                other => other,
            })?;
            polys.push(u);
        }
        let mut it = polys.into_iter();
        let mut next = || it.next().expect("four entries");
        GMat::new(next(), next(), next(), next())
    }
}

impl fmt::Display for GMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl Serialize for GMat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn apply_form(sigma: &GMat, f: &BForm) -> BForm {
    f.substitute(&sigma.a, &sigma.b, &sigma.c, &sigma.d)
}

/// `(cy + d)^{d_y} f(x, (ay + b)/(cy + d))`.
pub fn apply_affine(sigma: &GMat, f: &BPoly) -> Result<BPoly> {
    let g = apply_form(sigma, &BForm::homogenize(f));
    if !g.is_zero() && g.ord_y1() > 0 {
        return Err(Error::DegreeDrop);
    }
    Ok(g.dehomogenize())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub input: BPoly,
    pub output: BPoly,
    /// Generators applied to the input, in order.
    pub steps: Vec<GMat>,
    /// Generators which, applied in order to the output, give back the input.
    pub word: Vec<GMat>,
    pub reduced: bool,
    pub volume_sequence: Vec<i64>,
}

/// Reduced criterion: `d_x = 0`, or `d_y` does not divide `d_x - c`.
pub fn is_reduced_params(d_y: usize, d_x: usize, c: usize) -> bool {
    d_x == 0 || (d_y > 0 && (d_x - c) % d_y != 0)
}

fn is_unit_times_y(f: &BPoly) -> bool {
    f.d_y() == 1 && f.const_y().is_zero() && f.lc_y().is_constant()
}

/// Walks down the G-orbit: normal position by inversion, then kill the
/// right-hand edge while it has `p = 1`.
pub fn g_reduce(f: &BPoly) -> Result<ReductionTrace> {
    if f.is_zero() || f.d_y() == 0 {
        return Err(Error::DegreeZeroInY);
    }
    let mut cur = f.clone();
    let mut steps: Vec<GMat> = Vec::new();
    let mut volumes = Vec::new();
    let guard = 4 * (f.d_x() + 2) * (f.d_y() + 2);
    for _ in 0..guard {
        if cur.const_y().is_zero() {
            if !is_unit_times_y(&cur) {
                return Err(Error::NotMinimal("y divides f".into()));
            }
            volumes.push(0);
            break;
        }
        let poly = generic_polytope(&cur)?;
        volumes.push(poly.two_volume);
        if !poly.normal_position {
            cur = apply_affine(&GMat::tau(), &cur)?;
            steps.push(GMat::tau());
            continue;
        }
        let cd = edge_char_data(&cur)?;
        if cd.p != 1 {
            break;
        }
        let q = usize::try_from(cd.q).map_err(|_| Error::Internal("negative q in normal position".into()))?;
        let kill = GMat::jonquieres(Rat::one(), UPoly::monomial(-cd.beta.clone(), q))?;
        let next = apply_affine(&kill, &cur)?;
        let nv = if next.const_y().is_zero() { 0 } else { generic_polytope(&next)?.two_volume };
        if nv >= poly.two_volume {
            return Err(Error::Internal("edge substitution did not decrease the volume".into()));
        }
        steps.push(kill);
        cur = next;
    }
    let (d_x, d_y) = (cur.d_x(), cur.d_y());
    let c = if cur.const_y().is_zero() { 0 } else { generic_polytope(&cur)?.c };
    let word = steps.iter().rev().map(GMat::inverse).collect();
    Ok(ReductionTrace {
        input: f.clone(),
        reduced: is_reduced_params(d_y, d_x, c),
        output: cur,
        steps,
        word,
        volume_sequence: volumes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case")]
pub enum ReducedCase {
    Case1Line,
    Case2Dx1,
    Case3DxDividesDy,
    Case4GcdWindow { g: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisibilityReport {
    /// `(d_y, d_x, c)` of the input.
    pub input_params: (usize, usize, usize),
    /// True when the input is not reduced, hence `d_y | d_x - c`.
    pub non_reduced_dy_divides: bool,
    pub reduced_params: (usize, usize, usize),
    pub case: ReducedCase,
    pub trace: ReductionTrace,
}

fn params(f: &BPoly) -> Result<(usize, usize, usize)> {
    let c = if f.const_y().is_zero() { 0 } else { generic_polytope(f)?.c };
    Ok((f.d_y(), f.d_x(), c))
}

pub fn divisibility_report(f: &BPoly) -> Result<DivisibilityReport> {
    let rep = crate::minimality::minimality_report(f)?;
    if !rep.minimal {
        return Err(Error::NotMinimal(format!(
            "deg disc = {:?}, d_y = {}, irreducible = {}",
            rep.deg_disc, rep.d_y, rep.abs_irreducible
        )));
    }
    let input_params = params(f)?;
    let (dy0, dx0, c0) = input_params;
    let non_reduced = !is_reduced_params(dy0, dx0, c0);
    if non_reduced && (dx0 - c0) % dy0 != 0 {
        return Err(Error::Internal("non-reduced input without divisibility".into()));
    }
    let trace = g_reduce(f)?;
    let reduced_params = params(&trace.output)?;
    let (dy, dx, c) = reduced_params;
    let alarm = |m: &str| Err(Error::Internal(format!("reduced representative violates {m}")));
    let case = if dx == 0 {
        if c != 0 || dy != 1 {
            return alarm("case 1 (c = 0, d_y = 1)");
        }
        ReducedCase::Case1Line
    } else if dx == 1 {
        if c != 0 || dy <= 1 {
            return alarm("case 2 (c = 0, d_y > 1)");
        }
        ReducedCase::Case2Dx1
    } else if c == 0 {
        if dy % dx != 0 {
            return alarm("case 3 (d_x | d_y)");
        }
        ReducedCase::Case3DxDividesDy
    } else {
        let g = num_integer::gcd(dx - c, dy);
        if !(2 <= g && 2 * g <= dy) {
            return alarm("case 4 (2 <= gcd <= d_y/2)");
        }
        ReducedCase::Case4GcdWindow { g }
    };
    Ok(DivisibilityReport {
        input_params,
        non_reduced_dy_divides: non_reduced,
        reduced_params,
        case,
        trace,
    })
}

/// `f(X/D1, Y/D2)` for `X, Y ∈ Q[x, y]` and `D1, D2 ∈ Q[x]`, provided the
/// result is a polynomial.
pub fn subst_rational(f: &BPoly, x_img: (&BPoly, &UPoly), y_img: (&BPoly, &UPoly)) -> Result<BPoly> {
    let (xn, xd) = x_img;
    let (yn, yd) = y_img;
    if xd.is_zero() || yd.is_zero() {
        return Err(Error::BadParams("zero denominator".into()));
    }
    if f.is_zero() {
        return Ok(BPoly::zero());
    }
    let (dx, dy) = (f.d_x(), f.d_y());
    let xp: Vec<BPoly> = successive_powers(xn, dx);
    let yp: Vec<BPoly> = successive_powers(yn, dy);
    let d1p: Vec<UPoly> = (0..=dx).map(|k| xd.pow(k)).collect();
    let d2p: Vec<UPoly> = (0..=dy).map(|k| yd.pow(k)).collect();
    let mut h = BPoly::zero();
    for (i, j, c) in f.support() {
        let den = &d1p[dx - i] * &d2p[dy - j];
        h += &(&xp[i] * &yp[j]).mul_x(&den).scale(c);
    }
    let total = &d1p[dx] * &d2p[dy];
    if h.is_zero() {
        return Ok(BPoly::zero());
    }
    let g = h.content()?.gcd(&total);
    let rest = total.exact_div(&g).expect("gcd divides");
    if !rest.is_constant() {
        return Err(Error::NotPolynomial(rest.monic().to_string()));
    }
    let reduced = h.div_x(&g).expect("gcd divides the content");
    Ok(reduced.scale(&rest.coeff(0).recip()))
}

fn successive_powers(p: &BPoly, k: usize) -> Vec<BPoly> {
    let mut v = vec![BPoly::one()];
    for i in 0..k {
        let next = &v[i] * p;
        v.push(next);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elimination::{disc_form, discriminant};
    use crate::poly::{parse_form, parse_poly, rat};

    fn p(s: &str) -> BPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn matrices_validate_determinant() {
        assert!(GMat::new(UPoly::x(), UPoly::zero(), UPoly::zero(), UPoly::one()).is_err());
        let m = GMat::new(UPoly::one(), UPoly::x(), UPoly::zero(), UPoly::one()).unwrap();
        assert_eq!(m.mul(&m.inverse()), GMat::identity());
    }

    #[test]
    fn form_action_examples() {
        let f = parse_form("Y0^2 - x*Y1^2").unwrap();
        assert_eq!(apply_form(&GMat::identity(), &f), f);
        assert_eq!(apply_form(&GMat::tau(), &f), parse_form("Y1^2 - x*Y0^2").unwrap());
        let m = GMat::new(UPoly::one(), UPoly::zero(), UPoly::x(), UPoly::one()).unwrap();
        assert_eq!(
            apply_form(&m, &f),
            parse_form("(1 - x^3)*Y0^2 - 2*x^2*Y0*Y1 - x*Y1^2").unwrap()
        );
        let lhs = disc_form(&apply_form(&m, &f)).unwrap();
        assert_eq!(lhs, disc_form(&f).unwrap());
    }

    #[test]
    fn affine_action_examples() {
        assert_eq!(apply_affine(&GMat::tau(), &p("y^2 - x")).unwrap(), p("1 - x*y^2"));
        let dj = GMat::jonquieres(rat(1), UPoly::monomial(rat(1), 3)).unwrap();
        assert_eq!(apply_affine(&dj, &p("y^2 - x")).unwrap(), p("y^2 + 2*x^3*y + x^6 - x"));
        assert_eq!(apply_affine(&GMat::tau(), &p("y*(y - 1)")).unwrap_err(), Error::DegreeDrop);
    }

    #[test]
    fn reduction_examples() {
        let t = g_reduce(&p("y^2 + 2*x^3*y + x^6 - x")).unwrap();
        assert_eq!(t.output, p("y^2 - x"));
        assert_eq!(t.steps.len(), 1);
        assert!(t.reduced);
        let ce = p("x*(x-y^2)^2 - 2*y*(x-y^2) + 1");
        let t = g_reduce(&ce).unwrap();
        assert_eq!(t.output, ce);
        assert!(t.steps.is_empty() && t.reduced);
        let t = g_reduce(&p("y - x^5")).unwrap();
        assert_eq!(t.output, p("y"));
        assert!(t.reduced);
    }

    #[test]
    fn word_restores_input() {
        for s in ["y^2 + 2*x^3*y + x^6 - x", "1 - x*y^2 + 3*x^2*y^2", "x^4*y^3 + y - 1"] {
            let f = p(s);
            let Ok(t) = g_reduce(&f) else { continue };
            let mut g = t.output.clone();
            for m in &t.word {
                g = apply_affine(m, &g).unwrap();
            }
            assert!(g.same_up_to_constant(&f), "{s}");
            assert!(t.volume_sequence.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn divisibility_examples() {
        let r = divisibility_report(&p("x*(x-y^2)^2 - 2*y*(x-y^2) + 1")).unwrap();
        assert_eq!(r.case, ReducedCase::Case4GcdWindow { g: 2 });
        assert!(!r.non_reduced_dy_divides);
        let r = divisibility_report(&p("y^2 - x")).unwrap();
        assert_eq!(r.case, ReducedCase::Case2Dx1);
        let r = divisibility_report(&p("y - x^5")).unwrap();
        assert!(r.non_reduced_dy_divides);
        assert_eq!(r.case, ReducedCase::Case1Line);
        assert_eq!(divisibility_report(&p("y^2 - x^3")).unwrap_err().kind(), "NotMinimal");
    }

    #[test]
    fn cremona_steps() {
        let f = p("x*(x-y^2)^2 - 2*y*(x-y^2) + 1");
        let f1 = subst_rational(&f, (&p("x + y^2"), &UPoly::one()), (&p("y"), &UPoly::one())).unwrap();
        assert_eq!(f1, p("x^3 + (x*y - 1)^2"));
        let f2 = subst_rational(&f1, (&p("x"), &UPoly::one()), (&p("y + 1"), &UPoly::x())).unwrap();
        assert_eq!(f2, p("x^3 + y^2"));
        let printed = subst_rational(&f1, (&p("x"), &UPoly::one()), (&p("y + x"), &UPoly::x())).unwrap();
        assert_ne!(printed, p("x^3 + y^2"));
        assert_eq!(printed, p("x^3 + (y + x - 1)^2"));
        assert_eq!(
            subst_rational(&f, (&p("x"), &UPoly::one()), (&p("y"), &UPoly::one())).unwrap(),
            f
        );
        let e = subst_rational(&p("y"), (&p("x"), &UPoly::one()), (&p("y"), &UPoly::x())).unwrap_err();
        assert_eq!(e.kind(), "NotPolynomial");
    }

    #[test]
    fn matrix_text_round_trip() {
        let m = GMat::new(UPoly::constant(rat(2)), UPoly::from_ints(&[1, 0, -3]), UPoly::zero(), UPoly::one()).unwrap();
        assert_eq!(GMat::parse(&m.to_string()).unwrap(), m);
        assert_eq!(GMat::parse("[[0,1],[1,0]]").unwrap(), GMat::tau());
        assert_eq!(GMat::parse("[[x, 1], [1, 0]]").unwrap().det_value(), rat(-1));
        assert_eq!(GMat::parse("[[x, 0], [0, 1]]").unwrap_err().kind(), "InvalidMatrix");
        assert_eq!(GMat::parse("[[1, 0], [0]]").unwrap_err().kind(), "SyntaxError");
        assert_eq!(GMat::parse("[[1, 0], [0, y]]").unwrap_err().kind(), "SyntaxError");
        assert_eq!(GMat::parse("[[1, 0], [0, 1 +]]").unwrap_err().offset(), Some(16));
    }

    #[test]
    fn scalar_law() {
        let f = parse_form("Y0^3 + x*Y0*Y1^2 - (x^2 + 1)*Y1^3").unwrap();
        let m = GMat::new(UPoly::constant(rat(2)), UPoly::x(), UPoly::zero(), UPoly::one()).unwrap();
        let lhs = disc_form(&apply_form(&m, &f)).unwrap();
        let rhs = disc_form(&f).unwrap().scale(&num_traits::pow(rat(2), 6));
        assert_eq!(lhs, rhs);
        let g = p("y^3 + x*y - x^2 - 1");
        let h = apply_affine(&m, &g).unwrap();
        assert_eq!(discriminant(&h).unwrap().deg(), discriminant(&g).unwrap().deg());
    }
}
