//! Rational Newton-Puiseux expansions over a vertical line `x = alpha` and
//! the local invariants of the fiber.

use num_integer::Integer;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::elimination::{discriminant, resultant_y};
use crate::error::{Error, Result};
use crate::polytope::ser_rat;
use crate::poly::{fmt_rat, is_separable_in_y, rat, BPoly, Rat, UPoly};

/// Hard cap for the automatic truncation doubling.
pub const MAX_ORDER: usize = 1024;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Center {
    Finite(Rat),
    Infinity,
}

impl Serialize for Center {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Center::Finite(r) => s.serialize_str(&fmt_rat(r)),
            Center::Infinity => s.serialize_str("inf"),
        }
    }
}

/// Coordinate in which a branch series is written.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "chart")]
pub enum Chart {
    /// The series is `y(t)`.
    Affine,
    /// The series is `w(t)` with `w = 1/(y - beta)`; used when `lc_y(alpha) = 0`.
    Inverted {
        #[serde(serialize_with = "ser_rat")]
        beta: Rat,
    },
}

/// One place over `x = alpha`, parametrised as
/// `x - alpha = x_scale * t^ramification`, local coordinate `= series(t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PuiseuxBranch {
    pub center_y: Center,
    pub ramification: usize,
    #[serde(serialize_with = "ser_rat")]
    pub x_scale: Rat,
    pub chart: Chart,
    #[serde(serialize_with = "ser_series")]
    pub series: UPoly,
    /// Coefficients are exact through `t^order`.
    pub order: usize,
}

fn ser_series<S: Serializer>(u: &UPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&u.to_string_in("t"))
}

impl PuiseuxBranch {
    /// Conductor of the branch from its characteristic exponents
    /// (`None` if the truncation does not reach them all).
    pub fn conductor(&self) -> Option<usize> {
        let mut e_prev = self.ramification;
        let mut c = 0;
        for (k, a) in self.series.coeffs().iter().enumerate().skip(1) {
            if e_prev == 1 {
                break;
            }
            if a.is_zero() {
                continue;
            }
            let g = e_prev.gcd(&k);
            if g < e_prev {
                c += (e_prev - g) * (k - 1);
                e_prev = g;
            }
        }
        (e_prev == 1).then_some(c)
    }
}

/// Intermediate branch: `X = c * t^e`, `W = w(t)`.
struct Raw {
    c: Rat,
    e: usize,
    w: UPoly,
}

fn rpow(r: &Rat, k: i64) -> Rat {
    let p = num_traits::pow(r.clone(), k.unsigned_abs() as usize);
    if k < 0 {
        p.recip()
    } else {
        p
    }
}

/// Roots with multiplicities, or `None` if some root is irrational.
fn rational_roots_mult(p: &UPoly) -> Option<Vec<(Rat, usize)>> {
    let roots = p.rational_roots()?;
    let out: Vec<(Rat, usize)> = roots
        .into_iter()
        .map(|r| {
            let m = p.ord_at(&r).unwrap_or(0);
            (r, m)
        })
        .collect();
    let total: usize = out.iter().map(|(_, m)| m).sum();
    (total == p.deg0()).then_some(out)
}

/// `h(X, W)` truncated to `X^(n+1)` evaluated at a series `W`.
fn eval_series(h: &BPoly, w: &UPoly, n: usize) -> UPoly {
    let mut acc = UPoly::zero();
    for c in h.coeffs().iter().rev() {
        acc = (&(&acc * w).truncate(n + 1) + c).truncate(n + 1);
    }
    acc
}

/// Smooth branch through `(0, 0)` when `h_W(0, 0) != 0`.
fn solve_simple(h: &BPoly, n: usize) -> UPoly {
    let a = h.coeff_y(1).coeff(0);
    let mut w = UPoly::zero();
    for k in 1..=n {
        let s = eval_series(h, &w, k).coeff(k);
        if !s.is_zero() {
            w = &w + &UPoly::monomial(-s / &a, k);
        }
    }
    w
}

/// Lower convex hull of `(j, v)` points sorted by `j`.
fn lower_hull(pts: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut hull: Vec<(usize, usize)> = Vec::new();
    for &p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as i64 - a.0 as i64) * (p.1 as i64 - a.1 as i64)
                - (b.1 as i64 - a.1 as i64) * (p.0 as i64 - a.0 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

/// `X^-l h(xi^v T^p, T^q (xi^u + W))`.
fn edge_substitute(h: &BPoly, xi: &Rat, p: usize, q: usize, u: i64, v: i64, l: usize) -> BPoly {
    let lin = &BPoly::y() + &BPoly::constant(rpow(xi, u));
    let mut powers = vec![BPoly::one()];
    for k in 0..h.d_y() {
        powers.push(&powers[k] * &lin);
    }
    let mut out = BPoly::zero();
    for (i, j, a) in h.support() {
        let coef = a * rpow(xi, v * i as i64);
        let shift = p * i + q * j - l;
        out += &powers[j].mul_x(&UPoly::monomial(coef, shift));
    }
    out
}

/// All branches of `h = 0` with `W -> 0`, given that `h(0, W)` vanishes
/// to order `>= 1` at `W = 0`.
fn expand(h: &BPoly, n: usize) -> Result<Vec<Raw>> {
    let m = h.eval_x(&Rat::zero()).valuation().ok_or_else(|| {
        Error::Internal("fiber polynomial vanishes identically in the chart".into())
    })?;
    if m == 1 {
        return Ok(vec![Raw { c: rat(1), e: 1, w: solve_simple(h, n) }]);
    }
    let mut out = Vec::new();
    let vals: Vec<Option<usize>> = (0..=m).map(|j| h.coeff_y(j).valuation()).collect();
    let j_min = vals.iter().position(|v| v.is_some()).expect("W^m term present");
    if j_min >= 2 {
        return Err(Error::NotSeparable);
    }
    if j_min == 1 {
        out.push(Raw { c: rat(1), e: 1, w: UPoly::zero() });
    }
    let pts: Vec<(usize, usize)> = (j_min..=m)
        .filter_map(|j| vals[j].map(|v| (j, v)))
        .collect();
    let hull = lower_hull(&pts);
    for seg in hull.windows(2) {
        let ((j0, i0), (j1, i1)) = (seg[0], seg[1]);
        let g = (j1 - j0).gcd(&(i0 - i1));
        let (p, q) = ((j1 - j0) / g, (i0 - i1) / g);
        let phi = UPoly::new(
            (0..=g)
                .map(|s| h.term(i0 - q * s, j0 + p * s))
                .collect(),
        );
        let roots = rational_roots_mult(&phi).ok_or_else(|| {
            Error::NonRationalBranch(format!(
                "edge polynomial {} has irrational roots",
                phi.to_string_in("z")
            ))
        })?;
        let u = (1..=q).find(|u| (u * p) % q == 1 % q).expect("p, q coprime") as i64;
        let v = (u * p as i64 - 1) / q as i64;
        let l = p * i0 + q * j0;
        for (xi, _) in roots {
            let h1 = edge_substitute(h, &xi, p, q, u, v, l);
            for child in expand(&h1, n)? {
                let c = rpow(&xi, v) * rpow(&child.c, p as i64);
                let e = child.e * p;
                let head = UPoly::constant(rpow(&xi, u)) + child.w;
                let w = head
                    .mul_xk(child.e * q)
                    .scale(&rpow(&child.c, q as i64))
                    .truncate(n + 1);
                out.push(Raw { c, e, w });
            }
        }
    }
    Ok(out)
}

fn check_input(f: &BPoly, alpha: &Rat) -> Result<()> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.d_y() == 0 {
        return Err(Error::DegreeZeroInY);
    }
    if f.eval_x(alpha).is_zero() || !f.is_primitive() {
        return Err(Error::NotPrimitive { content: f.content()?.to_string() });
    }
    if !is_separable_in_y(f) {
        return Err(Error::NotSeparable);
    }
    Ok(())
}

/// Every place over `x = alpha`, with series exact through `t^order`.
pub fn puiseux_branches(f: &BPoly, alpha: &Rat, order: usize) -> Result<Vec<PuiseuxBranch>> {
    check_input(f, alpha)?;
    let d = f.d_y();
    let g = f.shift_x(alpha);
    let (chart, big) = if !g.lc_y().coeff(0).is_zero() {
        (Chart::Affine, g)
    } else {
        let beta = (0i64..)
            .flat_map(|k| [rat(k), rat(-k - 1)])
            .find(|b| !g.eval(&Rat::zero(), b).is_zero())
            .expect("fiber polynomial is nonzero");
        // w^d g(x, beta + 1/w)
        let bw1 = &BPoly::y().scale(&beta) + &BPoly::one();
        let mut acc = BPoly::zero();
        for j in 0..=d {
            let cj = g.coeff_y(j);
            if !cj.is_zero() {
                acc += &(&bw1.pow(j) * &BPoly::y().pow(d - j)).mul_x(&cj);
            }
        }
        (Chart::Inverted { beta }, acc)
    };
    let fiber = big.eval_x(&Rat::zero());
    let roots = rational_roots_mult(&fiber).ok_or_else(|| {
        Error::NonRationalBranch(format!(
            "fiber polynomial {} has irrational roots",
            fiber.to_string_in("y")
        ))
    })?;
    let mut out = Vec::new();
    for (c, _) in roots {
        let center_y = match &chart {
            Chart::Affine => Center::Finite(c.clone()),
            Chart::Inverted { beta } if c.is_zero() => {
                let _ = beta;
                Center::Infinity
            }
            Chart::Inverted { beta } => Center::Finite(beta + c.recip()),
        };
        for raw in expand(&big.shift_y(&c), order)? {
            out.push(PuiseuxBranch {
                center_y: center_y.clone(),
                ramification: raw.e,
                x_scale: raw.c,
                chart: chart.clone(),
                series: UPoly::constant(c.clone()) + raw.w,
                order,
            });
        }
    }
    let total: usize = out.iter().map(|b| b.ramification).sum();
    if total != d {
        return Err(Error::Internal(format!("ramification sum {total} differs from d_y = {d}")));
    }
    Ok(out)
}

/// Intersection multiplicity of two branches at the same point, or `None`
/// when the truncation cannot certify it.
fn branch_intersection(b1: &PuiseuxBranch, b2: &PuiseuxBranch) -> Option<usize> {
    let n = b1.order.min(b2.order);
    // Res_s(c2 s^e2 - c1 t^e1, W1(t) - W2(s)) with t as the coefficient variable.
    let mut a = vec![UPoly::zero(); b2.ramification + 1];
    a[0] = UPoly::monomial(-b1.x_scale.clone(), b1.ramification);
    a[b2.ramification] = UPoly::constant(b2.x_scale.clone());
    let a = BPoly::new(a);
    let mut b: Vec<UPoly> = b2
        .series
        .coeffs()
        .iter()
        .map(|c| UPoly::constant(-c.clone()))
        .collect();
    if b.is_empty() {
        b.push(UPoly::zero());
    }
    b[0] = &b[0] + &b1.series;
    let res = resultant_y(&a, &BPoly::new(b)).ok()?;
    let t = res.valuation()?;
    (t < n + 1 && t * b2.ramification < (n + 1) * b1.ramification).then_some(t)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalPoint {
    pub center_y: Center,
    pub branches: usize,
    /// Intersection multiplicity with the vertical line.
    pub multiplicity: usize,
    pub delta: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalReport {
    #[serde(serialize_with = "ser_rat")]
    pub alpha: Rat,
    pub places: usize,
    pub r_alpha: usize,
    pub delta_alpha: usize,
    pub ord_disc: usize,
    pub identity_holds: bool,
    pub points: Vec<LocalPoint>,
    pub order: usize,
}

fn try_local(f: &BPoly, alpha: &Rat, order: usize) -> Result<Option<(Vec<PuiseuxBranch>, Vec<LocalPoint>)>> {
    let branches = puiseux_branches(f, alpha, order)?;
    let mut conductors = Vec::new();
    for b in &branches {
        match b.conductor() {
            Some(c) if c % 2 == 0 => conductors.push(c),
            Some(c) => return Err(Error::Internal(format!("odd branch conductor {c}"))),
            None => return Ok(None),
        }
    }
    let mut points: Vec<LocalPoint> = Vec::new();
    let mut index: Vec<usize> = Vec::new();
    for b in &branches {
        let k = match points.iter().position(|p| p.center_y == b.center_y) {
            Some(k) => k,
            None => {
                points.push(LocalPoint {
                    center_y: b.center_y.clone(),
                    branches: 0,
                    multiplicity: 0,
                    delta: 0,
                });
                points.len() - 1
            }
        };
        index.push(k);
    }
    for (i, b) in branches.iter().enumerate() {
        let pt = &mut points[index[i]];
        pt.branches += 1;
        pt.multiplicity += b.ramification;
        pt.delta += conductors[i] / 2;
    }
    for i in 0..branches.len() {
        for j in i + 1..branches.len() {
            if index[i] != index[j] {
                continue;
            }
            match branch_intersection(&branches[i], &branches[j]) {
                Some(m) => points[index[i]].delta += m,
                None => return Ok(None),
            }
        }
    }
    Ok(Some((branches, points)))
}

/// `r_alpha`, `delta_alpha` and the identity `ord_alpha disc = r + 2 delta`.
pub fn local_invariants(f: &BPoly, alpha: &Rat) -> Result<LocalReport> {
    check_input(f, alpha)?;
    let mut order = (2 * f.d_x() * f.d_y()).max(8);
    let (branches, points) = loop {
        if let Some(found) = try_local(f, alpha, order)? {
            break found;
        }
        if order >= MAX_ORDER {
            return Err(Error::TruncationInsufficient(order));
        }
        order *= 2;
    };
    let places = branches.len();
    let r_alpha = f.d_y() - places;
    let delta_alpha = points.iter().map(|p| p.delta).sum();
    let ord_disc = discriminant(f)?.ord_at(alpha)?;
    Ok(LocalReport {
        alpha: alpha.clone(),
        places,
        r_alpha,
        delta_alpha,
        ord_disc,
        identity_holds: ord_disc == r_alpha + 2 * delta_alpha,
        points,
        order,
    })
}

/// Rational `alpha` with `ord_alpha disc > 0`.
pub fn critical_values(f: &BPoly) -> Result<Vec<Rat>> {
    let disc = discriminant(f)?;
    disc.rational_roots()
        .ok_or_else(|| Error::Internal("discriminant coefficients too large for root search".into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TeissierReport {
    /// Sum of Milnor numbers over the fiber, from `Res_y(f_x, f_y)`.
    pub milnor_sum: usize,
    /// `sum_p (d_p - 1)` over the points of the fiber.
    pub fiber_term: usize,
    pub ord_disc: usize,
    pub holds: bool,
}

/// Independent recount `ord_alpha disc = sum_p (mu_p + d_p - 1)`. `None`
/// when its hypotheses fail (a point at infinity, a polar component through
/// the fiber, or common polar zeros off the curve).
pub fn teissier_check(f: &BPoly, alpha: &Rat) -> Result<Option<TeissierReport>> {
    check_input(f, alpha)?;
    if f.lc_y().eval(alpha).is_zero() {
        return Ok(None);
    }
    let (fx, fy) = (f.deriv_x(), f.deriv_y());
    if fx.is_zero() || (fx.d_y() == 0 && fy.d_y() == 0) {
        return Ok(None);
    }
    let common = fx.eval_x(alpha).gcd(&fy.eval_x(alpha));
    let fiber = f.eval_x(alpha);
    if !common.squarefree_part().divides(&fiber) {
        return Ok(None);
    }
    let res = resultant_y(&fx, &fy)?;
    if res.is_zero() {
        return Ok(None);
    }
    let milnor_sum = res.ord_at(alpha)?;
    let fiber_term = f.d_y() - fiber.squarefree_part().deg0();
    let ord_disc = discriminant(f)?.ord_at(alpha)?;
    Ok(Some(TeissierReport {
        milnor_sum,
        fiber_term,
        ord_disc,
        holds: milnor_sum + fiber_term == ord_disc,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{frac, parse_poly};

    fn p(s: &str) -> BPoly {
        parse_poly(s).unwrap()
    }

    fn zero() -> Rat {
        Rat::zero()
    }

    /// `f(alpha + c t^e, y(t))` (or the inverted chart) vanishes through `t^order`.
    fn vanishes(f: &BPoly, alpha: &Rat, b: &PuiseuxBranch) -> bool {
        let x = UPoly::new(vec![alpha.clone()]) + UPoly::monomial(b.x_scale.clone(), b.ramification);
        let n = b.order;
        let g = match &b.chart {
            Chart::Affine => f.clone(),
            Chart::Inverted { beta } => {
                let d = f.d_y();
                let bw1 = &BPoly::y().scale(beta) + &BPoly::one();
                let mut acc = BPoly::zero();
                for j in 0..=d {
                    acc += &(&bw1.pow(j) * &BPoly::y().pow(d - j)).mul_x(&f.coeff_y(j));
                }
                acc
            }
        };
        let mut acc = UPoly::zero();
        for c in g.coeffs().iter().rev() {
            acc = (&(&acc * &b.series).truncate(n + 1) + &c.compose(&x)).truncate(n + 1);
        }
        acc.is_zero()
    }

    #[test]
    fn cusp_branch() {
        let f = p("y^2 - x^3");
        let bs = puiseux_branches(&f, &zero(), 10).unwrap();
        assert_eq!(bs.len(), 1);
        assert_eq!(bs[0].ramification, 2);
        assert_eq!(bs[0].series, UPoly::monomial(rat(1), 3));
        assert_eq!(bs[0].conductor(), Some(2));
        assert!(vanishes(&f, &zero(), &bs[0]));
    }

    #[test]
    fn node_branches() {
        let f = p("y^2 - x^2*(x + 1)");
        let bs = puiseux_branches(&f, &zero(), 6).unwrap();
        assert_eq!(bs.len(), 2);
        for b in &bs {
            assert_eq!((b.ramification, b.x_scale.clone()), (1, rat(1)));
            assert!(vanishes(&f, &zero(), b));
            let s = b.series.coeff(1);
            assert_eq!(b.series.coeff(2), &s * frac(1, 2));
            assert_eq!(b.series.coeff(3), &s * frac(-1, 8));
        }
    }

    #[test]
    fn irrational_fiber_rejected() {
        let e = puiseux_branches(&p("y^2 - x - 3"), &zero(), 6).unwrap_err();
        assert_eq!(e.kind(), "NonRationalBranch");
        let e = local_invariants(&p("y^2 - 2*x^2 - x^3"), &zero()).unwrap_err();
        assert_eq!(e.kind(), "NonRationalBranch");
    }

    #[test]
    fn invariants_examples() {
        let cases = [
            ("y^2 - x^3", 1, 1, 1, 3),
            ("y^2 - x^2*(x + 1)", 2, 0, 1, 2),
            ("y^2 - x", 1, 1, 0, 1),
            ("y^2 - x^4", 2, 0, 2, 4),
            ("y^3 - x^4", 1, 2, 3, 8),
        ];
        for (s, places, r, delta, ord) in cases {
            let rep = local_invariants(&p(s), &zero()).unwrap();
            assert_eq!(
                (rep.places, rep.r_alpha, rep.delta_alpha, rep.ord_disc),
                (places, r, delta, ord),
                "{s}"
            );
            assert!(rep.identity_holds);
        }
    }

    #[test]
    fn places_at_infinity() {
        // lc_y vanishes at 0: one branch escapes to y = inf.
        let f = p("x*y^2 + y + 1");
        let bs = puiseux_branches(&f, &zero(), 8).unwrap();
        assert!(bs.iter().any(|b| b.center_y == Center::Infinity));
        for b in &bs {
            assert!(vanishes(&f, &zero(), b));
        }
        let rep = local_invariants(&f, &zero()).unwrap();
        assert!(rep.identity_holds, "{rep:?}");
        let f = p("x^2*y^2 + y + x");
        let rep = local_invariants(&f, &zero()).unwrap();
        assert!(rep.identity_holds, "{rep:?}");
    }

    #[test]
    fn counterexample_has_no_rational_critical_fiber() {
        let f = p("x*(x-y^2)^2 - 2*y*(x-y^2) + 1");
        assert!(critical_values(&f).unwrap().is_empty());
        // The fiber over 0 meets the curve at the cube roots of -2.
        let e = local_invariants(&f, &zero()).unwrap_err();
        assert_eq!(e.kind(), "NonRationalBranch");
    }

    #[test]
    fn teissier_examples() {
        for s in ["y^2 - x^3", "y^2 - x^2*(x + 1)", "y^2 - x"] {
            let t = teissier_check(&p(s), &zero()).unwrap().unwrap();
            assert!(t.holds, "{s}: {t:?}");
        }
    }
}
