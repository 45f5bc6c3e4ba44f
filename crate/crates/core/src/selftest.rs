//! Seeded test corpus and the invariant suite behind `mindisc selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{classify_form, normal_form, NormalFamily};
use crate::elimination::{disc_affine, disc_form, discriminant, resultant_y};
use crate::error::Result;
use crate::gaction::{apply_affine, apply_form, subst_rational, GMat};
use crate::irreducibility::{absolute_factor_count, is_absolutely_irreducible};
use crate::localinv::{critical_values, local_invariants};
use crate::minimality::{
    extract_automorphism, minimality_report, monic_family_check, random_coordinate, symmetry_report,
    verify_appendix_c,
};
use crate::param::{param_report, RatParam};
use crate::polytope::generic_polytope;
use crate::poly::{is_separable_in_y, parse_poly, rat, BForm, BPoly, UPoly};

/// `x(x - y^2)^2 - 2 λ y (x - y^2) + λ^2`
pub fn counterexample(lambda: i64) -> BPoly {
    parse_poly(&format!("x*(x-y^2)^2 - 2*({lambda})*y*(x-y^2) + ({lambda})^2")).expect("valid")
}

fn small_upoly(rng: &mut ChaCha8Rng, max_deg: usize, bound: i64) -> UPoly {
    let deg = rng.gen_range(0..=max_deg);
    UPoly::new((0..=deg).map(|_| rat(rng.gen_range(-bound..=bound))).collect())
}

/// Product of one to three random generators: De Jonquières matrices with
/// `deg h ≤ 2`, and the inversion.
pub fn random_gmat(rng: &mut ChaCha8Rng) -> GMat {
    let mut m = GMat::identity();
    for _ in 0..rng.gen_range(1..=3) {
        let g = if rng.gen_bool(0.4) {
            GMat::tau()
        } else {
            let mut lambda = 0;
            while lambda == 0 {
                lambda = rng.gen_range(-3..=3);
            }
            GMat::jonquieres(rat(lambda), small_upoly(rng, 2, 3)).expect("unit determinant")
        };
        m = m.mul(&g);
    }
    m
}

fn normal_form_samples() -> Vec<BPoly> {
    let fams = [
        NormalFamily::Case1 { mu: rat(1), lambda: rat(0), kappa: rat(1) },
        NormalFamily::depressed_cubic(rat(1), rat(2)),
        NormalFamily::Odd { a: vec![rat(0), rat(3)], kappa: rat(1) },
        NormalFamily::Even { a: vec![rat(0), rat(1), rat(-2)], kappa: rat(1) },
        NormalFamily::Even { a: vec![rat(1)], kappa: rat(-3) },
    ];
    fams.iter().map(|f| normal_form(f).expect("valid family").dehomogenize()).collect()
}

/// Seeded corpus of `size` polynomials: random coordinates, their
/// GL2(Q[x]) images, pairwise products, dehomogenised normal forms and a
/// few fixed curves.
pub fn corpus(seed: u64, size: usize) -> Vec<BPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<BPoly> = [1, 2, -3].iter().map(|&l| counterexample(l)).collect();
    for s in ["y^2 - x", "y^2 - x^3 - 1", "y^3 - x^4", "y^2 - x^2*(x+1)", "(y^2 - x)*(y^2 - x - 1)"] {
        out.push(parse_poly(s).expect("valid"));
    }
    out.extend(normal_form_samples());
    let mut coords = Vec::new();
    while out.len() < size {
        match rng.gen_range(0..4) {
            0 | 1 => {
                let steps = rng.gen_range(1..=3);
                let (f, _) = random_coordinate(rng.gen(), steps, 3, 3).expect("valid parameters");
                if f.d_y() * f.d_x().max(1) <= 30 {
                    coords.push(f.clone());
                    out.push(f);
                }
            }
            2 if !coords.is_empty() => {
                let f = &coords[rng.gen_range(0..coords.len())];
                if let Ok(g) = apply_affine(&random_gmat(&mut rng), f) {
                    if g.d_y() * g.d_x().max(1) <= 60 {
                        out.push(g);
                    }
                }
            }
            3 if coords.len() >= 2 => {
                let f = &coords[rng.gen_range(0..coords.len())];
                let g = &coords[rng.gen_range(0..coords.len())];
                let h = f * g;
                if h.d_y() * h.d_x().max(1) <= 40 {
                    out.push(h);
                }
            }
            _ => {}
        }
    }
    out.truncate(size);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundViolations {
    pub checked: usize,
    pub lower_irreducible: Vec<String>,
    pub lower_monic: Vec<String>,
    pub upper: Vec<String>,
}

impl BoundViolations {
    pub fn none(&self) -> bool {
        self.lower_irreducible.is_empty() && self.lower_monic.is_empty() && self.upper.is_empty()
    }
}

/// Checks `deg Δ ≥ d_y - 1` (absolutely irreducible), `deg Δ ≥ d_y - r`
/// (monic squarefree) and `deg Δ ≤ 2 d_x (d_y - 1)` on every member.
pub fn check_bounds(polys: &[BPoly]) -> Result<BoundViolations> {
    type Row = (Option<String>, Option<String>, Option<String>);
    let rows: Vec<Row> = polys
        .par_iter()
        .map(|f| -> Result<Row> {
            let (dy, dx) = (f.d_y(), f.d_x());
            if dy == 0 || !is_separable_in_y(f) {
                return Ok((None, None, None));
            }
            let deg = discriminant(f)?.deg().expect("separable");
            let tag = |what: &str| Some(format!("{what}: {f}"));
            let lower = if is_absolutely_irreducible(f)? && deg + 1 < dy { tag("irreducible") } else { None };
            let monic = if f.lc_y().is_constant() && dx > 0 {
                let r = absolute_factor_count(f)?.abs_factor_count;
                if deg + r < dy { tag("monic") } else { None }
            } else {
                None
            };
            let upper = if deg > 2 * dx * (dy - 1) { tag("upper") } else { None };
            Ok((lower, monic, upper))
        })
        .collect::<Result<_>>()?;
    let mut v = BoundViolations {
        checked: polys.len(),
        lower_irreducible: Vec::new(),
        lower_monic: Vec::new(),
        upper: Vec::new(),
    };
    for (a, b, c) in rows {
        v.lower_irreducible.extend(a);
        v.lower_monic.extend(b);
        v.upper.extend(c);
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelfCheck {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<SelfCheck>,
}

type CheckFn = fn() -> Result<(bool, String)>;

fn p(s: &str) -> BPoly {
    parse_poly(s).expect("valid literal")
}

fn check_round_trip() -> Result<(bool, String)> {
    let c = corpus(7, 60);
    let bad = c.iter().filter(|f| parse_poly(&f.to_string()).ok().as_ref() != Some(*f)).count();
    Ok((bad == 0, format!("{} polynomials, {bad} mismatches", c.len())))
}

fn check_bounds_small() -> Result<(bool, String)> {
    let v = check_bounds(&corpus(11, 80))?;
    Ok((v.none(), format!("{} polynomials checked", v.checked)))
}

fn check_disc_form_affine() -> Result<(bool, String)> {
    let mut n = 0;
    for f in corpus(13, 60).iter().filter(|f| f.d_y() >= 2 && f.lc_y().is_constant()) {
        n += 1;
        let a = disc_affine(f)?.disc;
        let b = disc_form(&BForm::homogenize(f))?;
        if a != b {
            return Ok((false, format!("mismatch on {f}")));
        }
    }
    Ok((true, format!("{n} monic members")))
}

fn check_counterexample() -> Result<(bool, String)> {
    for l in [1, 2, -3] {
        let f = counterexample(l);
        let r = minimality_report(&f)?;
        let poly = generic_polytope(&f)?;
        let ok = r.minimal && r.d_y == 4 && r.deg_disc == 3 && (poly.d_y, poly.d_x, poly.c) == (4, 3, 1);
        if !ok {
            return Ok((false, format!("lambda = {l}")));
        }
    }
    Ok((true, "lambda in {1, 2, -3}: minimal, (4,3,1)".into()))
}

fn check_local() -> Result<(bool, String)> {
    let mut n = 0;
    for s in ["y^2 - x^3", "y^2 - x^2*(x+1)", "y^2 - x^4", "y^2 - x", "y^3 - x^4", "(y^2 - x)*(y - 1)"] {
        let f = p(s);
        for a in critical_values(&f)? {
            n += 1;
            if !local_invariants(&f, &a)?.identity_holds {
                return Ok((false, format!("{s} at {a}")));
            }
        }
    }
    Ok((true, format!("{n} critical fibers")))
}

fn check_coordinates() -> Result<(bool, String)> {
    for seed in 0..20 {
        let (f, w) = random_coordinate(seed, 3, 3, 3)?;
        let extracted = extract_automorphism(&f)?;
        if !minimality_report(&f)?.minimal || extracted.apply(&f) != BPoly::y() || !verify_appendix_c(&w)?.all_pass {
            return Ok((false, format!("seed {seed}")));
        }
    }
    Ok((true, "20 seeded coordinates".into()))
}

fn check_family() -> Result<(bool, String)> {
    let mut f = p("y^2 - x");
    for r in 2..=3 {
        f = &f * &p(&format!("y^2 - x - {}", r - 1));
        let rep = monic_family_check(&f)?;
        if !rep.attains || rep.deg_disc + r != f.d_y() {
            return Ok((false, format!("r = {r}")));
        }
    }
    let spoiler = monic_family_check(&p("(y^2 - x)*(y^2 + x)"))?;
    Ok((!spoiler.attains && spoiler.deg_disc == 6, "r = 2, 3 and the spoiler".into()))
}

fn check_classification() -> Result<(bool, String)> {
    let fams = [
        NormalFamily::Case1 { mu: rat(2), lambda: rat(1), kappa: rat(1) },
        NormalFamily::depressed_cubic(rat(0), rat(1)),
        NormalFamily::Odd { a: vec![rat(0), rat(1)], kappa: rat(1) },
        NormalFamily::Even { a: vec![rat(0), rat(1), rat(2)], kappa: rat(1) },
    ];
    let factored = [
        "(Y0)*(Y1)*(Y0^2 + (2*x + 1)*Y0*Y1 + Y1^2)",
        "(Y1)*(Y0^3 + (x + 1)*Y1^3)",
        "(Y1)*(Y0^2 + x*Y1^2)*(Y0^2 + (x+1)*Y1^2)",
        "(Y0^2 + x*Y1^2)*(Y0^2 + (x+1)*Y1^2)*(Y0^2 + (x+2)*Y1^2)",
    ];
    for (fam, s) in fams.iter().zip(factored) {
        let fs = crate::poly::parse_form_product(s)?;
        if BForm::product(&fs) != normal_form(fam)? || classify_form(&fs)?.outcome != fam.outcome() {
            return Ok((false, s.to_string()));
        }
    }
    Ok((true, "one member per family".into()))
}

fn check_covariance() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let forms = ["Y0^3 + x*Y0*Y1^2 - (x^2 + 1)*Y1^3", "Y0^2 - x*Y1^2", "Y0^4 + Y0*Y1^3 - x*Y1^4"];
    for k in 0..20 {
        let f = crate::poly::parse_form(forms[k % forms.len()])?;
        let s = random_gmat(&mut rng);
        let d = f.degree();
        let lhs = disc_form(&apply_form(&s, &f))?;
        let rhs = disc_form(&f)?.scale(&num_traits::pow(s.det_value(), d * (d - 1)));
        if lhs != rhs {
            return Ok((false, format!("{s} on {f}")));
        }
    }
    Ok((true, "20 random pairs".into()))
}

fn check_cremona() -> Result<(bool, String)> {
    let one = UPoly::one();
    for l in [1i64, 2, -3] {
        let f = counterexample(l);
        let f1 = subst_rational(&f, (&p("x + y^2"), &one), (&p("y"), &one))?;
        let f2 = subst_rational(&f1, (&p("x"), &one), (&p(&format!("y + ({l})")), &UPoly::x()))?;
        if f1 != p(&format!("x^3 + (x*y - ({l}))^2")) || f2 != p("x^3 + y^2") {
            return Ok((false, format!("lambda = {l}")));
        }
    }
    Ok((true, "both substitutions exact".into()))
}

fn check_symmetry() -> Result<(bool, String)> {
    let r = symmetry_report(&counterexample(1))?;
    let s = symmetry_report(&p("y^2 - x"))?;
    Ok((r.eq_a && r.eq_b && s.eq_a && s.eq_b, "counterexample and y^2 - x".into()))
}

fn check_tau() -> Result<(bool, String)> {
    let tau = GMat::tau();
    for f in corpus(17, 40).iter().filter(|f| !f.coeff_y(0).is_zero() && f.d_y() >= 2) {
        let back = apply_affine(&tau, &apply_affine(&tau, f)?)?;
        if &back != f {
            return Ok((false, f.to_string()));
        }
    }
    Ok((true, "tau is an involution".into()))
}

fn check_coordinate_resultant() -> Result<(bool, String)> {
    for seed in 0..10 {
        let (g, _) = random_coordinate(seed, 2, 2, 2)?;
        let h = &g.scale(&rat(3)) + &BPoly::constant(rat(-2));
        let r = resultant_y(&g, &h)?;
        if g.d_y() > 0 && !(r.is_constant() && !r.is_zero()) {
            return Ok((false, format!("seed {seed}")));
        }
    }
    Ok((true, "Res(g, 3g - 2) is a nonzero constant".into()))
}

fn check_parametrisation() -> Result<(bool, String)> {
    let r = param_report(&RatParam::parse("s^4 + 2*s", "-s^3 - 1", "s")?)?;
    Ok((r.proper && r.minimal && r.observed == (4, 3, 1), format!("implicit form {}", r.f)))
}

const CHECKS: &[(&str, CheckFn)] = &[
    ("parse_print_round_trip", check_round_trip),
    ("discriminant_bounds", check_bounds_small),
    ("disc_form_matches_affine", check_disc_form_affine),
    ("counterexample_minimal_reduced", check_counterexample),
    ("local_identity", check_local),
    ("coordinate_round_trip", check_coordinates),
    ("monic_family_equality", check_family),
    ("classification_families", check_classification),
    ("gl2_covariance", check_covariance),
    ("cremona_steps", check_cremona),
    ("symmetry", check_symmetry),
    ("tau_involution", check_tau),
    ("coordinate_resultant_constant", check_coordinate_resultant),
    ("parametrised_minimal", check_parametrisation),
];

/// Runs every check; errors count as failures.
pub fn run() -> SelftestReport {
    let checks: Vec<SelfCheck> = CHECKS
        .par_iter()
        .map(|(name, f)| match f() {
            Ok((pass, detail)) => SelfCheck { name, pass, detail },
            Err(e) => SelfCheck { name, pass: false, detail: e.to_string() },
        })
        .collect();
    let passed = checks.iter().filter(|c| c.pass).count();
    SelftestReport { passed, failed: checks.len() - passed, checks }
}
