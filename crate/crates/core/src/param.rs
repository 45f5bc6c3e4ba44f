//! Rational parametrisations `(u(s), v1(s)/v2(s))`, implicitization and the
//! search for reduced nonmonic minimal polynomials.

use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::elimination::{discriminant, resultant_formal};
use crate::error::{Error, Result};
use crate::gaction::is_reduced_params;
use crate::irreducibility::is_absolutely_irreducible;
use crate::polytope::generic_polytope;
use crate::poly::{parse_upoly, rat, BPoly, Rat, UPoly};

/// `x = u(s)`, `y = v_num(s) / v_den(s)` with coprime numerator and denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatParam {
    pub u: UPoly,
    pub v_num: UPoly,
    pub v_den: UPoly,
}

impl RatParam {
    /// Cancels the common factor of `v_num / v_den`.
    pub fn new(u: UPoly, v_num: UPoly, v_den: UPoly) -> Result<Self> {
        if v_den.is_zero() {
            return Err(Error::BadParams("zero denominator".into()));
        }
        let g = v_num.gcd(&v_den);
        let (v_num, v_den) = if g.is_zero() || g.is_constant() {
            (v_num, v_den)
        } else {
            (v_num.exact_div(&g).expect("gcd divides"), v_den.exact_div(&g).expect("gcd divides"))
        };
        Ok(RatParam { u, v_num, v_den })
    }

    pub fn parse(u: &str, v_num: &str, v_den: &str) -> Result<Self> {
        RatParam::new(parse_param_poly(u)?, parse_param_poly(v_num)?, parse_param_poly(v_den)?)
    }

    /// Degrees `(deg u, deg v1, deg v2)`.
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.u.deg0(), self.v_num.deg0(), self.v_den.deg0())
    }
}

impl Serialize for RatParam {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RatParam", 3)?;
        st.serialize_field("u", &self.u.to_string_in("s"))?;
        st.serialize_field("v1", &self.v_num.to_string_in("s"))?;
        st.serialize_field("v2", &self.v_den.to_string_in("s"))?;
        st.end()
    }
}

/// Univariate polynomial in `s` (or `t`).
pub fn parse_param_poly(text: &str) -> Result<UPoly> {
    if let Some(i) = text.find(['x', 'y', 'Y']) {
        return Err(Error::Syntax {
            offset: i,
            message: "parametrisation polynomials use the variable s".into(),
        });
    }
    parse_upoly(&text.replace(['s', 't'], "x"), 'x')
}

/// Normalised radical of `Res_s(u(s) - x, v2(s) y - v1(s))`.
pub fn implicitize(p: &RatParam) -> Result<BPoly> {
    let du = p.u.deg0();
    if du == 0 {
        return Err(Error::DegenerateImage("u is constant: the image lies on a vertical line".into()));
    }
    let dv = p.v_num.deg0().max(p.v_den.deg0());
    // u(s) - x as a polynomial in s with coefficients in Q[x].
    let mut a: Vec<UPoly> = p.u.coeffs().iter().map(|c| UPoly::constant(c.clone())).collect();
    a[0] = &a[0] - &UPoly::x();
    let a = BPoly::new(a);
    let mut points: Vec<(Rat, UPoly)> = Vec::with_capacity(du + 1);
    for k in 0..=du {
        let yk = rat(k as i64);
        let b = BPoly::new(
            (0..=dv)
                .map(|j| UPoly::constant(&p.v_den.coeff(j) * &yk - p.v_num.coeff(j)))
                .collect(),
        );
        points.push((yk, resultant_formal(&a, du, &b, dv)));
    }
    let dx = points.iter().map(|(_, r)| r.deg0()).max().unwrap_or(0);
    let mut coeffs_y = vec![UPoly::zero(); du + 1];
    for i in 0..=dx {
        let col: Vec<(Rat, Rat)> = points.iter().map(|(y, r)| (y.clone(), r.coeff(i))).collect();
        let in_y = UPoly::interpolate(&col);
        for (j, c) in in_y.coeffs().iter().enumerate() {
            coeffs_y[j] += &UPoly::monomial(c.clone(), i);
        }
    }
    let res = BPoly::new(coeffs_y);
    if res.is_zero() || res.d_y() == 0 {
        return Err(Error::DegenerateImage("the resultant does not involve y".into()));
    }
    let g = res.gcd_y(&res.deriv_y());
    let radical = if g.d_y() == 0 { res } else { res.exact_div(&g).expect("gcd divides") };
    let (_, prim) = radical.content_primitive()?;
    Ok(prim.normalize())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamReport {
    pub f: BPoly,
    pub proper: bool,
    /// `(deg u, deg v1, deg v2)`
    pub predicted: (usize, usize, usize),
    /// `(d_y, a, b)` of the implicit equation.
    pub observed: (usize, usize, usize),
    pub deg_disc: Option<usize>,
    pub minimal: bool,
}

pub fn param_report(p: &RatParam) -> Result<ParamReport> {
    let f = implicitize(p)?;
    report_for(p, f)
}

fn report_for(p: &RatParam, f: BPoly) -> Result<ParamReport> {
    let predicted = p.shape();
    let proper = f.d_y() == predicted.0;
    let poly = generic_polytope(&f)?;
    let observed = (f.d_y(), poly.a, poly.b);
    let deg_disc = discriminant(&f)?.deg();
    let minimal = proper
        && deg_disc == Some(f.d_y() - 1)
        && is_absolutely_irreducible(&f)?;
    Ok(ParamReport { f, proper, predicted, observed, deg_disc, minimal })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    /// `(deg u, deg v1, deg v2)`
    pub shape: (usize, usize, usize),
    pub seed: u64,
    /// Number of grid candidates examined.
    pub budget: u64,
    /// Position in the seeded enumeration to start from.
    pub offset: u64,
    /// Coefficients are drawn from `[-coeff_box, coeff_box]`.
    pub coeff_box: i64,
}

impl SearchConfig {
    pub fn new(shape: (usize, usize, usize), seed: u64, budget: u64) -> Self {
        SearchConfig { shape, seed, budget, offset: 0, coeff_box: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchHit {
    /// Position in the seeded enumeration.
    pub index: u64,
    pub param: RatParam,
    pub f: BPoly,
    pub d_y: usize,
    pub d_x: usize,
    pub c: usize,
    pub deg_disc: usize,
    pub reduced: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub grid_size: u64,
    pub examined: u64,
    /// Offset to resume from.
    pub next_offset: u64,
    pub hits: Vec<SearchHit>,
}

/// Coefficient grid. Affine changes of `s`, translation of `x`, and scaling
/// and sign of `y` are used up: `u` is monic with vanishing `s^(du-1)` and
/// constant terms, `v2` is monic and `lc(v1) > 0`.
struct Grid {
    shape: (usize, usize, usize),
    b: i64,
    /// Radix of each slot.
    radix: Vec<u64>,
    size: u64,
}

impl Grid {
    fn new(shape: (usize, usize, usize), b: i64) -> Self {
        let (du, dv1, dv2) = shape;
        let full = (2 * b + 1) as u64;
        let mut radix = Vec::new();
        // u: s^1 .. s^(du-2)
        radix.extend(std::iter::repeat_n(full, du.saturating_sub(2)));
        // v1: s^0 .. s^(dv1-1), then the positive leading coefficient
        radix.extend(std::iter::repeat_n(full, dv1));
        radix.push(b as u64);
        // v2: s^0 .. s^(dv2-1)
        radix.extend(std::iter::repeat_n(full, dv2));
        let size = radix.iter().try_fold(1u64, |acc, r| acc.checked_mul(*r)).unwrap_or(u64::MAX);
        Grid { shape, b, radix, size }
    }

    fn decode(&self, mut idx: u64) -> RatParam {
        let (du, dv1, dv2) = self.shape;
        let mut digits = Vec::with_capacity(self.radix.len());
        for r in &self.radix {
            digits.push(idx % r);
            idx /= r;
        }
        let mut it = digits.into_iter();
        let centered = |it: &mut std::vec::IntoIter<u64>| rat(it.next().unwrap() as i64 - self.b);
        let mut u = vec![Rat::zero(); du + 1];
        u[du] = rat(1);
        if du >= 2 {
            for c in u.iter_mut().take(du - 1).skip(1) {
                *c = centered(&mut it);
            }
        }
        let mut v1 = vec![Rat::zero(); dv1 + 1];
        for c in v1.iter_mut().take(dv1) {
            *c = centered(&mut it);
        }
        v1[dv1] = rat(it.next().unwrap() as i64 + 1);
        let mut v2 = vec![Rat::zero(); dv2 + 1];
        v2[dv2] = rat(1);
        for c in v2.iter_mut().take(dv2) {
            *c = centered(&mut it);
        }
        RatParam { u: UPoly::new(u), v_num: UPoly::new(v1), v_den: UPoly::new(v2) }
    }
}

/// Seeded bijection `i -> (a i + b) mod n`.
fn permutation(seed: u64, n: u64) -> (u64, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if n <= 1 {
        return (1, 0);
    }
    loop {
        let a = rng.gen_range(1..n);
        if a.gcd(&n) == 1 {
            return (a, rng.gen_range(0..n));
        }
    }
}

/// Modular screen: `true` only when `deg_x disc_y(f) > deg u - 1` is
/// certain. With `R = Res_s(u - x, v2 y - v1)` and `G = Res_y(R, R_y)`,
/// `deg disc = deg G - deg lc_y(R) >= deg (G mod p) - deg v2`.
fn certainly_not_minimal(p: &RatParam) -> bool {
    use crate::linalg::{degree_mod_p, interpolate_mod_p, mul_mod, rat_mod, resultant_mod_p, sub_mod};
    let (du, dv1, dv2) = p.shape();
    let dv = dv1.max(dv2);
    let reduce = |u: &UPoly, n: usize| -> Option<Vec<u64>> { (0..=n).map(|k| rat_mod(&u.coeff(k))).collect() };
    let (Some(u), Some(v1), Some(v2)) = (reduce(&p.u, du), reduce(&p.v_num, dv), reduce(&p.v_den, dv)) else {
        return false;
    };
    let ys: Vec<u64> = (0..=du as u64).collect();
    let npts = dv * (2 * du - 1) + 1;
    let xs: Vec<u64> = (1..=npts as u64).collect();
    let mut gs = Vec::with_capacity(npts);
    for &x in &xs {
        let mut ux = u.clone();
        ux[0] = sub_mod(ux[0], x);
        let vals: Vec<u64> = ys
            .iter()
            .map(|&y| {
                let b: Vec<u64> = (0..=dv).map(|j| sub_mod(mul_mod(v2[j], y), v1[j])).collect();
                resultant_mod_p(&ux, du, &b, dv)
            })
            .collect();
        let r = interpolate_mod_p(&ys, &vals);
        let ry: Vec<u64> = (1..=du).map(|j| mul_mod(r[j], j as u64)).collect();
        gs.push(resultant_mod_p(&r, du, &ry, du - 1));
    }
    match degree_mod_p(&interpolate_mod_p(&xs, &gs)) {
        Some(d) => d > du - 1 + dv2,
        None => false,
    }
}

fn evaluate_candidate(index: u64, p: RatParam) -> Option<SearchHit> {
    if !p.v_num.gcd(&p.v_den).is_constant() || certainly_not_minimal(&p) {
        return None;
    }
    let f = implicitize(&p).ok()?;
    if f.d_y() != p.u.deg0() {
        return None;
    }
    let deg = discriminant(&f).ok()?.deg()?;
    if deg + 1 != f.d_y() {
        return None;
    }
    let c = if f.const_y().is_zero() { return None } else { generic_polytope(&f).ok()?.c };
    let (d_y, d_x) = (f.d_y(), f.d_x());
    let reduced = is_reduced_params(d_y, d_x, c);
    if !reduced || c == 0 || !is_absolutely_irreducible(&f).ok()? {
        return None;
    }
    Some(SearchHit { index, param: p, f, d_y, d_x, c, deg_disc: deg, reduced })
}

/// Scans `budget` grid candidates in seeded order starting at `offset` and
/// returns the reduced, nonmonic (`c > 0`) minimal ones, in enumeration order.
pub fn search_minimal(cfg: &SearchConfig) -> Result<SearchOutcome> {
    if cfg.shape.0 == 0 || cfg.coeff_box < 1 {
        return Err(Error::BadParams("need deg u >= 1 and a positive coefficient box".into()));
    }
    let grid = Grid::new(cfg.shape, cfg.coeff_box);
    let n = grid.size;
    let (a, b) = permutation(cfg.seed, n);
    let start = cfg.offset.min(n);
    let end = start.saturating_add(cfg.budget).min(n);
    let hits: Vec<SearchHit> = (start..end)
        .into_par_iter()
        .filter_map(|i| {
            let idx = ((a as u128 * i as u128 + b as u128) % n as u128) as u64;
            evaluate_candidate(i, grid.decode(idx))
        })
        .collect();
    Ok(SearchOutcome { grid_size: n, examined: end - start, next_offset: end, hits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaction::g_reduce;
    use crate::poly::parse_poly;
    use num_traits::Signed;

    fn rp(u: &str, v1: &str, v2: &str) -> RatParam {
        RatParam::parse(u, v1, v2).unwrap()
    }

    #[test]
    fn implicitize_examples() {
        assert_eq!(implicitize(&rp("s^2", "s", "1")).unwrap(), parse_poly("y^2 - x").unwrap());
        assert_eq!(implicitize(&rp("s^2", "s^3", "1")).unwrap(), parse_poly("y^2 - x^3").unwrap());
        let f = implicitize(&rp("s", "s^2", "s - 1")).unwrap();
        assert!(f.same_up_to_constant(&parse_poly("(x - 1)*y - x^2").unwrap()));
        assert_eq!(implicitize(&rp("3", "s", "1")).unwrap_err().kind(), "DegenerateImage");
    }

    #[test]
    fn improper_parametrisation_detected() {
        let r = param_report(&rp("s^4", "s^2", "1")).unwrap();
        assert!(!r.proper);
        assert_eq!(r.f, parse_poly("y^2 - x").unwrap());
    }

    #[test]
    fn report_examples() {
        let r = param_report(&rp("s^2", "s", "1")).unwrap();
        assert!(r.proper && r.minimal);
        assert_eq!((r.predicted, r.observed), ((2, 1, 0), (2, 1, 0)));
        let r = param_report(&rp("s^2", "s^3", "1")).unwrap();
        assert!(r.proper && !r.minimal);
        assert_eq!(r.deg_disc, Some(3));
        let r = param_report(&rp("s^3", "s^2", "1")).unwrap();
        assert!(!r.minimal);
        assert_eq!(r.deg_disc, Some(4));
    }

    #[test]
    fn known_family_member() {
        let p = rp("s^4 + 2*s", "-s^3 - 1", "s");
        let r = param_report(&p).unwrap();
        assert!(r.proper && r.minimal, "{r:?}");
        assert_eq!(r.observed, (4, 3, 1));
        let t = g_reduce(&r.f).unwrap();
        assert!(t.reduced);
        let out = generic_polytope(&t.output).unwrap();
        assert_eq!((t.output.d_y(), t.output.d_x(), out.c), (4, 3, 1));
    }

    #[test]
    fn modular_screen_is_conservative() {
        assert!(!certainly_not_minimal(&rp("s^4 + 2*s", "-s^3 - 1", "s")));
        assert!(!certainly_not_minimal(&rp("s^2", "s", "1")));
        assert!(certainly_not_minimal(&rp("s^2", "s^3", "1")));
    }

    #[test]
    fn grid_decoding_is_normalised() {
        let g = Grid::new((4, 3, 1), 2);
        assert_eq!(g.size, 25 * 250 * 5);
        for idx in [0, 1, 17, g.size - 1] {
            let p = g.decode(idx);
            assert_eq!(p.shape(), (4, 3, 1));
            assert_eq!(p.u.coeff(0), rat(0));
            assert_eq!(p.u.coeff(3), rat(0));
            assert!(p.v_num.lc().is_positive());
        }
    }

    #[test]
    fn conics_are_never_hits() {
        let out = search_minimal(&SearchConfig::new((2, 1, 0), 7, 1000)).unwrap();
        assert!(out.hits.is_empty());
        assert_eq!(out.examined, out.grid_size.min(1000));
    }

    #[test]
    fn search_is_deterministic_and_resumable() {
        let mut cfg = SearchConfig::new((4, 3, 1), 3, 400);
        let whole = search_minimal(&cfg).unwrap();
        cfg.budget = 200;
        let first = search_minimal(&cfg).unwrap();
        cfg.offset = first.next_offset;
        let second = search_minimal(&cfg).unwrap();
        let mut joined = first.hits.clone();
        joined.extend(second.hits);
        assert_eq!(joined, whole.hits);
    }
}
