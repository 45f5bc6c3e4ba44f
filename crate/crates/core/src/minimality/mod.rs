mod aut;

use num_traits::Zero;
use serde::Serialize;

pub use aut::{apply_aut, compose_components, random_coordinate, AutWord, Generator};

use crate::elimination::{discriminant, discriminant_x};
use crate::error::{Error, Result};
use crate::irreducibility::{absolute_factor_count, is_absolutely_irreducible};
use crate::poly::{is_separable_in_y, rat, BPoly, Rat, UPoly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    pub d_y: usize,
    pub deg_disc: usize,
    pub abs_irreducible: bool,
    pub minimal: bool,
    pub almost_minimal: bool,
    /// The genus the curve would have if the lower bound
    /// `2g + d_y - 1 <= deg disc` were attained.
    pub genus_if_extremal: Option<usize>,
}

pub fn minimality_report(f: &BPoly) -> Result<MinimalityReport> {
    if f.is_zero() || f.d_y() == 0 {
        return Err(Error::DegreeZeroInY);
    }
    if !f.is_primitive() {
        return Err(Error::NotPrimitive {
            content: f.content()?.to_string(),
        });
    }
    if !is_separable_in_y(f) {
        return Err(Error::NotSeparable);
    }
    let d_y = f.d_y();
    let deg_disc = discriminant(f)?
        .deg()
        .ok_or_else(|| Error::Internal("separable polynomial with zero discriminant".into()))?;
    let abs_irreducible = is_absolutely_irreducible(f)?;
    let genus_if_extremal = (abs_irreducible && deg_disc + 1 >= d_y && (deg_disc + 1 - d_y) % 2 == 0)
        .then(|| (deg_disc + 1 - d_y) / 2);
    Ok(MinimalityReport {
        d_y,
        deg_disc,
        abs_irreducible,
        minimal: abs_irreducible && deg_disc + 1 == d_y,
        almost_minimal: abs_irreducible && deg_disc == d_y,
        genus_if_extremal,
    })
}

/// `e_n (y + beta x^k)^n` test for the part of `f` of weighted degree
/// `k*n` with weights `(1, k)`, where `n = d_y`. Returns `beta`.
fn weighted_leading_beta(f: &BPoly, k: usize) -> Option<Rat> {
    let n = f.d_y();
    let top = k * n;
    let mut e = vec![Rat::zero(); n + 1];
    for (i, j, c) in f.support() {
        let w = i + k * j;
        if w > top {
            return None;
        }
        if w == top {
            e[j] = c.clone();
        }
    }
    if e[n].is_zero() {
        return None;
    }
    let beta = &e[n - 1] / (rat(n as i64) * &e[n]);
    let mut binom = rat(1);
    for j in (0..=n).rev() {
        let expect = &e[n] * &binom * num_traits::pow(beta.clone(), n - j);
        if e[j] != expect {
            return None;
        }
        if j > 0 {
            binom = binom * rat(j as i64) / rat((n - j + 1) as i64);
        }
    }
    Some(beta)
}

fn not_coordinate(msg: impl Into<String>) -> Error {
    Error::NotMonicMinimal(msg.into())
}

/// Word `σ` with `f ∘ σ = y`, for monic minimal `f` (a coordinate).
pub fn extract_automorphism(f: &BPoly) -> Result<AutWord> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.d_y() >= 1 {
        let monic = f.lc_y().is_constant() || f.lc_x().is_constant();
        if !monic {
            return Err(not_coordinate("neither monic in y nor in x"));
        }
        let deg = discriminant(f)?.deg();
        if deg != Some(f.d_y() - 1) {
            return Err(not_coordinate(format!(
                "deg disc = {:?} differs from d_y - 1 = {}",
                deg,
                f.d_y() - 1
            )));
        }
    }
    let mut word: Vec<Generator> = Vec::new();
    let mut g = f.clone();
    let push = |word: &mut Vec<Generator>, g: &mut BPoly, gens: Vec<Generator>| {
        for gen in gens {
            *g = gen.apply(g);
            word.push(gen);
        }
    };
    loop {
        let (dx, dy) = (g.d_x(), g.d_y());
        if dy == 0 {
            if dx != 1 {
                return Err(not_coordinate("reached a univariate polynomial of degree != 1"));
            }
            push(&mut word, &mut g, vec![Generator::Swap]);
            continue;
        }
        if dx == 0 {
            if dy != 1 {
                return Err(not_coordinate("reached a univariate polynomial of degree != 1"));
            }
            let a = g.term(0, 1);
            let b = g.term(0, 0);
            let gen = Generator::elementary(a.recip(), UPoly::constant(-b / &a))?;
            push(&mut word, &mut g, vec![gen]);
            break;
        }
        if dx % dy == 0 {
            let k = dx / dy;
            let beta = weighted_leading_beta(&g, k)
                .ok_or_else(|| not_coordinate("leading form is not a power of a binomial"))?;
            let gen = Generator::elementary(rat(1), UPoly::monomial(-beta, k))?;
            push(&mut word, &mut g, vec![gen]);
        } else if dy % dx == 0 {
            let k = dy / dx;
            let beta = weighted_leading_beta(&g.swap(), k)
                .ok_or_else(|| not_coordinate("leading form is not a power of a binomial"))?;
            let gen = Generator::elementary(rat(1), UPoly::monomial(-beta, k))?;
            push(&mut word, &mut g, vec![Generator::Swap, gen, Generator::Swap]);
        } else {
            return Err(not_coordinate(format!(
                "neither of d_x = {dx}, d_y = {dy} divides the other"
            )));
        }
        if g.d_x() + g.d_y() >= dx + dy {
            return Err(Error::Internal("reduction step did not lower the degree".into()));
        }
    }
    let w = AutWord(word).simplify();
    if w.apply(f) != BPoly::y() {
        return Err(Error::Internal("extracted word does not map f to y".into()));
    }
    Ok(w)
}

/// Tschirnhausen approximate `r`-th root of a polynomial monic in y with
/// `r | d_y`.
pub fn approximate_root(f: &BPoly, r: usize) -> Result<BPoly> {
    let d = f.d_y();
    if r == 0 || d % r != 0 || !f.is_monic_y() {
        return Err(Error::BadParams("approximate root needs monic f and r | d_y".into()));
    }
    let f = f.scale(&f.lc_y().coeff(0).recip());
    let m = d / r;
    let mut psi = BPoly::monomial(rat(1), 0, m);
    for k in 1..=m {
        let pr = psi.pow(r);
        let c = &f.coeff_y(d - k) - &pr.coeff_y(d - k);
        let ck = c.scale(&rat(r as i64).recip());
        psi += &BPoly::from_x(ck).mul_yk(m - k);
    }
    Ok(psi)
}

/// Expansion `f = Σ a_i ψ^i` with `deg_y a_i < deg_y ψ` (ψ monic in y).
pub fn adic_expansion(f: &BPoly, psi: &BPoly) -> Vec<BPoly> {
    let mut out = Vec::new();
    let mut cur = f.clone();
    while !cur.is_zero() {
        let r = divide_monic(&cur, psi);
        out.push(r.1);
        cur = r.0;
    }
    out
}

fn divide_monic(a: &BPoly, b: &BPoly) -> (BPoly, BPoly) {
    let db = b.d_y();
    let inv = b.lc_y().coeff(0).recip();
    let mut r = a.clone();
    let mut q = BPoly::zero();
    while !r.is_zero() && r.d_y() >= db {
        let k = r.d_y() - db;
        let c = BPoly::from_x(r.lc_y().scale(&inv)).mul_yk(k);
        r -= &(&c * b);
        q += &c;
    }
    (q, r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyWitness {
    pub sigma: AutWord,
    /// `y ∘ σ`
    pub sigma_y: BPoly,
    /// Univariate `g` with `f = g(σ_y)`, printed in the variable x.
    pub g: UPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub r: usize,
    pub d_y: usize,
    pub deg_disc: usize,
    pub attains: bool,
    pub witness: Option<FamilyWitness>,
    pub witness_unavailable: bool,
}

/// Equality test for `deg disc >= d_y - r` on monic squarefree input, with a
/// reconstructed decomposition `f = g(σ_y)` when equality holds.
pub fn monic_family_check(f: &BPoly) -> Result<FamilyReport> {
    if f.is_zero() || f.d_y() == 0 {
        return Err(Error::DegreeZeroInY);
    }
    if !f.is_monic_y() {
        return Err(Error::NotMonic);
    }
    if !is_separable_in_y(f) {
        return Err(Error::NotSeparable);
    }
    let d_y = f.d_y();
    let r = if f.d_x() == 0 {
        d_y
    } else {
        absolute_factor_count(f)?.abs_factor_count
    };
    let deg_disc = discriminant(f)?
        .deg()
        .ok_or_else(|| Error::Internal("separable polynomial with zero discriminant".into()))?;
    if deg_disc + r < d_y {
        return Err(Error::BoundViolated { deg: deg_disc, bound: d_y - r });
    }
    let attains = deg_disc + r == d_y;
    let witness = if attains { family_witness(f, r)? } else { None };
    Ok(FamilyReport {
        r,
        d_y,
        deg_disc,
        attains,
        witness_unavailable: attains && witness.is_none(),
        witness,
    })
}

fn family_witness(f: &BPoly, r: usize) -> Result<Option<FamilyWitness>> {
    if f.d_y() % r != 0 {
        return Ok(None);
    }
    let psi = approximate_root(f, r)?;
    let parts = adic_expansion(f, &psi);
    if parts.iter().any(|a| !a.is_constant()) {
        return Ok(None);
    }
    let g = UPoly::new(parts.iter().map(|a| a.term(0, 0)).collect());
    if aut::univariate_at(&g, &psi) != *f {
        return Err(Error::Internal("approximate-root decomposition does not re-expand".into()));
    }
    let sigma = match extract_automorphism(&psi) {
        Ok(w) => w.inverse(),
        Err(Error::NotMonicMinimal(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let sigma_y = sigma.apply(&BPoly::y());
    if sigma_y != psi || aut::univariate_at(&g, &sigma_y) != *f {
        return Err(Error::Internal("family witness fails to reproduce f".into()));
    }
    Ok(Some(FamilyWitness { sigma, sigma_y, g }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    pub n_x: usize,
    pub n_y: usize,
    pub nondegenerate: bool,
    pub vanishes_at_inf_inf: bool,
    pub deg_disc_y: usize,
    pub deg_disc_x: usize,
    pub eq_a: bool,
    pub eq_b: bool,
    /// The equivalence `eq_a <=> eq_b` is claimed only when this holds.
    pub hypotheses_hold: bool,
}

pub fn symmetry_report(f: &BPoly) -> Result<SymmetryReport> {
    let (d_x, d_y) = (f.d_x(), f.d_y());
    if f.is_zero() || d_x == 0 || d_y == 0 {
        return Err(Error::UnivariateInput { d_x, d_y });
    }
    if !is_absolutely_irreducible(f)? {
        return Err(Error::NotIrreducible);
    }
    let (lcy, lcx) = (f.lc_y(), f.lc_x());
    let n_x = lcy.squarefree_part().deg0();
    let n_y = lcx.squarefree_part().deg0();
    let nondegenerate = n_x == lcy.deg0() && n_y == lcx.deg0();
    let vanishes_at_inf_inf = f.term(d_x, d_y).is_zero();
    let deg_disc_y = discriminant(f)?.deg().ok_or(Error::NotSeparable)?;
    let deg_disc_x = discriminant_x(f)?.deg().ok_or(Error::NotSeparable)?;
    let eq_a = deg_disc_y + 1 == d_y + n_y;
    let eq_b = deg_disc_x + 1 == d_x + n_x;
    let hypotheses_hold = nondegenerate && vanishes_at_inf_inf;
    if hypotheses_hold && eq_a != eq_b {
        return Err(Error::Internal("symmetry equivalence fails".into()));
    }
    Ok(SymmetryReport {
        n_x,
        n_y,
        nondegenerate,
        vanishes_at_inf_inf,
        deg_disc_y,
        deg_disc_x,
        eq_a,
        eq_b,
        hypotheses_hold,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AppendixCReport {
    pub sigma_x: BPoly,
    pub sigma_y: BPoly,
    pub inverse_x: BPoly,
    pub inverse_y: BPoly,
    pub jacobian: UPoly,
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

fn affine_in(f: &BPoly, var_x: bool) -> bool {
    let g = if var_x { f.clone() } else { f.swap() };
    g.d_y() == 0 && g.d_x() == 1
}

/// Structural checks every plane automorphism must pass.
pub fn verify_appendix_c(sigma: &AutWord) -> Result<AppendixCReport> {
    let (sx, sy) = sigma.components();
    let (ix, iy) = sigma.inverse().components();
    let jac = &(&sx.deriv_x() * &sy.deriv_y()) - &(&sx.deriv_y() * &sy.deriv_x());
    let jconst = jac.is_constant() && !jac.is_zero();
    let mut checks = Vec::new();
    let mut check = |name: &'static str, pass: bool| checks.push(Check { name, pass });
    check("jacobian_nonzero_constant", jconst);
    let back_x = sx.compose(&ix, &iy);
    let back_y = sy.compose(&ix, &iy);
    check("inverse_composes_to_identity", back_x == BPoly::x() && back_y == BPoly::y());
    // J_σ · (J_{σ^-1} ∘ σ) = I, with rows indexed by the derivation variable.
    let at_sigma = |p: &BPoly| p.compose(&sx, &sy);
    let (iu_x, iv_x) = (at_sigma(&ix.deriv_x()), at_sigma(&ix.deriv_y()));
    let (iu_y, iv_y) = (at_sigma(&iy.deriv_x()), at_sigma(&iy.deriv_y()));
    let j11 = &(&sx.deriv_x() * &iu_x) + &(&sy.deriv_x() * &iv_x);
    let j12 = &(&sx.deriv_x() * &iu_y) + &(&sy.deriv_x() * &iv_y);
    let j21 = &(&sx.deriv_y() * &iu_x) + &(&sy.deriv_y() * &iv_x);
    let j22 = &(&sx.deriv_y() * &iu_y) + &(&sy.deriv_y() * &iv_y);
    check(
        "jacobian_chain_rule",
        j11 == BPoly::one() && j22 == BPoly::one() && j12.is_zero() && j21.is_zero(),
    );
    check("deg_y sx = deg_y sx^-1", sx.d_y() == ix.d_y());
    check("deg_x sy = deg_x sy^-1", sy.d_x() == iy.d_x());
    check("deg_x sx = deg_y sy^-1", sx.d_x() == iy.d_y());
    check("deg_y sy = deg_x sx^-1", sy.d_y() == ix.d_x());
    let monic_y = |p: &BPoly| p.lc_y().is_constant();
    let monic_x = |p: &BPoly| p.lc_x().is_constant();
    check(
        "sx affine in x or monic in y",
        if sx.d_y() == 0 { affine_in(&sx, true) } else { monic_y(&sx) },
    );
    check(
        "sy affine in y or monic in x",
        if sy.d_x() == 0 { affine_in(&sy, false) } else { monic_x(&sy) },
    );
    check(
        "sx affine in y or monic in x",
        if sx.d_x() == 0 { affine_in(&sx, false) } else { monic_x(&sx) },
    );
    check(
        "sy affine in x or monic in y",
        if sy.d_y() == 0 { affine_in(&sy, true) } else { monic_y(&sy) },
    );
    check(
        "components irreducible",
        is_absolutely_irreducible(&sx)? && is_absolutely_irreducible(&sy)?,
    );
    if sx.d_y() > 0 {
        let deg = discriminant(&sx)?.deg();
        check("deg disc_y sx = deg_y sx - 1", deg == Some(sx.d_y() - 1));
    }
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(AppendixCReport {
        sigma_x: sx,
        sigma_y: sy,
        inverse_x: ix,
        inverse_y: iy,
        jacobian: jac.coeff_y(0),
        checks,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn p(s: &str) -> BPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn report_examples() {
        let r = minimality_report(&p("x*(x-y^2)^2 - 2*y*(x-y^2) + 1")).unwrap();
        assert!(r.minimal && !r.almost_minimal);
        let r = minimality_report(&p("y^2 - x^3 - 1")).unwrap();
        assert!(!r.minimal);
        assert_eq!((r.deg_disc, r.genus_if_extremal), (3, Some(1)));
        let r = minimality_report(&p("y^2 - x^2 - 1")).unwrap();
        assert!(r.almost_minimal && !r.minimal);
        assert_eq!(minimality_report(&p("(y - x)^2")).unwrap_err(), Error::NotSeparable);
    }

    #[test]
    fn extraction_examples() {
        let w = extract_automorphism(&p("y^2 - x")).unwrap();
        assert_eq!(w.to_string(), "S; E(-1, x^2)");
        assert_eq!(w.apply(&p("y^2 - x")), p("y"));
        let w = extract_automorphism(&p("y + x^2")).unwrap();
        assert_eq!(w.components(), (p("x"), p("y - x^2")));
        assert_eq!(extract_automorphism(&p("y^2 - x^3")).unwrap_err().kind(), "NotMonicMinimal");
        let w = extract_automorphism(&p("3*x - 1")).unwrap();
        assert_eq!(w.apply(&p("3*x - 1")), p("y"));
    }

    #[test]
    fn random_coordinates_round_trip() {
        for seed in 0..10 {
            let (f, _) = random_coordinate(seed, 3, 3, 3).unwrap();
            assert!(minimality_report(&f).unwrap().minimal, "seed {seed}: {f}");
            let w = extract_automorphism(&f).unwrap();
            assert_eq!(w.apply(&f), p("y"));
        }
    }

    #[test]
    fn family_examples() {
        let r = monic_family_check(&p("(y^2 - x)*(y^2 - x - 1)")).unwrap();
        assert_eq!((r.r, r.deg_disc, r.attains), (2, 2, true));
        let w = r.witness.unwrap();
        // The approximate root centres the family: f = (y^2 - x - 1/2)^2 - 1/4.
        assert_eq!(w.sigma_y, p("y^2 - x - 1/2"));
        assert_eq!(w.g, UPoly::new(vec![crate::poly::frac(-1, 4), rat(0), rat(1)]));
        let r = monic_family_check(&p("(y^2 - x)*(y^2 - x - 1)*(y^2 - x - 2)")).unwrap();
        assert_eq!((r.r, r.deg_disc, r.attains), (3, 3, true));
        assert!(r.witness.is_some());
        let r = monic_family_check(&p("(y^2 - x)*(y^2 + x)")).unwrap();
        assert_eq!((r.r, r.deg_disc, r.attains), (2, 6, false));
        assert_eq!(monic_family_check(&p("x*y^2 + 1")).unwrap_err(), Error::NotMonic);
    }

    #[test]
    fn symmetry_examples() {
        let r = symmetry_report(&p("x*(x-y^2)^2 - 2*y*(x-y^2) + 1")).unwrap();
        assert_eq!((r.n_x, r.n_y), (1, 0));
        assert!(r.nondegenerate && r.vanishes_at_inf_inf && r.eq_a && r.eq_b);
        assert_eq!((r.deg_disc_y, r.deg_disc_x), (3, 3));
        let r = symmetry_report(&p("y^2 - x")).unwrap();
        assert!(r.eq_a && r.eq_b);
        let r = symmetry_report(&p("x^2*y^2 + y + 1")).unwrap();
        assert!(!r.nondegenerate && !r.hypotheses_hold);
    }

    #[test]
    fn appendix_c_examples() {
        for w in ["S; E(-1, x^2)", "S", "S; E(1, x^2); S", "E(2, x^3 - x); S; E(-1, x^2 + 1)"] {
            let rep = verify_appendix_c(&AutWord::parse(w).unwrap()).unwrap();
            assert!(rep.all_pass, "{w}: {:?}", rep.checks);
        }
        let rep = verify_appendix_c(&AutWord::parse("S; E(1, x^2); S").unwrap()).unwrap();
        assert_eq!(rep.sigma_x, p("x + y^2"));
    }
}
