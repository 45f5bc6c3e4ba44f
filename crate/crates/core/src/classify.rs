//! The uniform bound `deg disc >= ceil((d-1)/2)` for factored binary forms
//! and recognition of the forms attaining it.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::elimination::{disc_form, resultant_forms};
use crate::error::{Error, Result};
use crate::gaction::{apply_form, g_reduce, GMat};
use crate::irreducibility::is_absolutely_irreducible;
use crate::polytope::ser_rat;
use crate::poly::rat::nth_root;
use crate::poly::{fmt_rat, rat, BForm, Rat, UPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    ConstantDisc,
    EqualityCase1,
    EqualityCase2,
    #[serde(rename = "EqualityCase3_odd")]
    EqualityCase3Odd,
    #[serde(rename = "EqualityCase4_even")]
    EqualityCase4Even,
    AboveBound,
}

fn ser_rats<S: Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(fmt_rat))
}

/// Families attaining the bound. Over Q the quadratic factors are only
/// determined up to the square class `kappa`; `kappa = 1` gives the
/// families over an algebraically closed field verbatim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family")]
pub enum NormalFamily {
    /// `Y0 Y1 (Y0^2 + (mu x + lambda) Y0 Y1 + kappa Y1^2)`
    Case1 {
        #[serde(serialize_with = "ser_rat")]
        mu: Rat,
        #[serde(serialize_with = "ser_rat")]
        lambda: Rat,
        #[serde(serialize_with = "ser_rat")]
        kappa: Rat,
    },
    /// `Y1 (H(Y) + x Y1^3)` for a cubic form `H` with constant coefficients.
    Case2 { h: BForm },
    /// `Y1 prod_i (Y0^2 + kappa (x + a_i) Y1^2)`
    Odd {
        #[serde(serialize_with = "ser_rats")]
        a: Vec<Rat>,
        #[serde(serialize_with = "ser_rat")]
        kappa: Rat,
    },
    /// `prod_i (Y0^2 + kappa (x + a_i) Y1^2)`
    Even {
        #[serde(serialize_with = "ser_rats")]
        a: Vec<Rat>,
        #[serde(serialize_with = "ser_rat")]
        kappa: Rat,
    },
}

impl NormalFamily {
    pub fn outcome(&self) -> Outcome {
        match self {
            NormalFamily::Case1 { .. } => Outcome::EqualityCase1,
            NormalFamily::Case2 { .. } => Outcome::EqualityCase2,
            NormalFamily::Odd { .. } => Outcome::EqualityCase3Odd,
            NormalFamily::Even { .. } => Outcome::EqualityCase4Even,
        }
    }

    /// `Y1 (Y0^3 + a Y0 Y1^2 + (x + b) Y1^3)`, the case 2 member with a
    /// depressed monic cubic.
    pub fn depressed_cubic(a: Rat, b: Rat) -> NormalFamily {
        NormalFamily::Case2 {
            h: BForm::new(vec![
                UPoly::constant(b),
                UPoly::constant(a),
                UPoly::zero(),
                UPoly::one(),
            ]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationVerdict {
    pub d: usize,
    pub deg_disc: usize,
    pub bound: usize,
    pub outcome: Outcome,
    /// For a constant discriminant: `F o witness` has constant coefficients.
    pub witness: Option<GMat>,
    /// Applied left to right, takes the product to `normal_form(family)` up
    /// to a constant factor.
    pub normalising_word: Option<Vec<GMat>>,
    pub family: Option<NormalFamily>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub deg_disc: usize,
    pub bound: usize,
    pub ok: bool,
}

pub fn bound(d: usize) -> usize {
    d / 2
}

fn quadratic(c0: UPoly, c1: UPoly, c2: UPoly) -> BForm {
    BForm::new(vec![c0, c1, c2])
}

fn x_plus(kappa: &Rat, a: &Rat) -> UPoly {
    UPoly::new(vec![kappa * a, kappa.clone()])
}

pub fn normal_form(family: &NormalFamily) -> Result<BForm> {
    let nonzero = |r: &Rat, what: &str| {
        if r.is_zero() {
            Err(Error::BadParams(format!("{what} must be nonzero")))
        } else {
            Ok(())
        }
    };
    let distinct = |a: &[Rat]| {
        for i in 0..a.len() {
            if a[i + 1..].contains(&a[i]) {
                return Err(Error::BadParams("the a_i must be distinct".into()));
            }
        }
        Ok(())
    };
    let form = match family {
        NormalFamily::Case1 { mu, lambda, kappa } => {
            nonzero(mu, "mu")?;
            nonzero(kappa, "kappa")?;
            let p = quadratic(
                UPoly::constant(kappa.clone()),
                UPoly::new(vec![lambda.clone(), mu.clone()]),
                UPoly::one(),
            );
            BForm::product(&[BForm::y0(), BForm::y1(), p])
        }
        NormalFamily::Case2 { h } => {
            if h.degree() != 3 || h.d_x() != 0 {
                return Err(Error::BadParams("H must be a cubic form with constant coefficients".into()));
            }
            let mut c = h.coeffs().to_vec();
            c[0] = &c[0] + &UPoly::x();
            BForm::y1().mul(&BForm::new(c))
        }
        NormalFamily::Odd { a, kappa } | NormalFamily::Even { a, kappa } => {
            nonzero(kappa, "kappa")?;
            distinct(a)?;
            let mut fs: Vec<BForm> = a
                .iter()
                .map(|ai| quadratic(x_plus(kappa, ai), UPoly::zero(), UPoly::one()))
                .collect();
            if matches!(family, NormalFamily::Odd { .. }) {
                fs.insert(0, BForm::y1());
            } else if a.is_empty() {
                return Err(Error::BadParams("the even family needs n >= 1".into()));
            }
            BForm::product(&fs)
        }
    };
    if form.degree() >= 2 && disc_form(&form)?.is_zero() {
        return Err(Error::BadParams("parameters give a form with a repeated factor".into()));
    }
    Ok(form)
}

fn content(f: &BForm) -> UPoly {
    f.coeffs().iter().fold(UPoly::zero(), |g, c| g.gcd(c))
}

fn validate(factors: &[BForm], check_irreducible: bool) -> Result<usize> {
    let d: usize = factors.iter().map(BForm::degree).sum();
    if d < 2 {
        return Err(Error::DegreeTooSmall(d));
    }
    for (i, f) in factors.iter().enumerate() {
        if f.is_zero() || f.degree() == 0 {
            return Err(Error::BadParams(format!("factor {} lies in Q[x]", i + 1)));
        }
        let c = content(f);
        if !c.is_constant() {
            return Err(Error::BadParams(format!("factor {} has the factor {} in Q[x]", i + 1, c)));
        }
        if f.degree() >= 2 && disc_form(f)?.is_zero() {
            return Err(Error::NotSquarefree);
        }
        if check_irreducible && f.degree() >= 2 {
            let irreducible = f.ord_y1() == 0 && is_absolutely_irreducible(&f.dehomogenize())?;
            if !irreducible {
                return Err(Error::NotIrreducible);
            }
        }
    }
    for i in 0..factors.len() {
        for j in i + 1..factors.len() {
            if resultant_forms(&factors[i], &factors[j]).is_zero() {
                return Err(Error::FactorsNotCoprime(i + 1, j + 1));
            }
        }
    }
    Ok(d)
}

/// `deg disc` of the product via `disc(FG) = disc(F) disc(G) Res(F, G)^2`.
pub fn product_disc_degree(factors: &[BForm]) -> Result<usize> {
    let mut deg = 0;
    for f in factors {
        if f.degree() >= 2 {
            deg += disc_form(f)?.deg().ok_or(Error::NotSquarefree)?;
        }
    }
    for i in 0..factors.len() {
        for j in i + 1..factors.len() {
            let r = resultant_forms(&factors[i], &factors[j]);
            deg += 2 * r.deg().ok_or(Error::FactorsNotCoprime(i + 1, j + 1))?;
        }
    }
    Ok(deg)
}

pub fn verify_bound(factors: &[BForm]) -> Result<BoundReport> {
    let d = validate(factors, false)?;
    let deg_disc = product_disc_degree(factors)?;
    let bound = bound(d);
    Ok(BoundReport { deg_disc, bound, ok: deg_disc == 0 || deg_disc >= bound })
}

fn alarm(msg: &str) -> Error {
    Error::Internal(format!("equality case not recognised: {msg}"))
}

/// `r = kappa * s^2` with `kappa` a squarefree integer when the trial
/// division completes.
fn square_class(r: &Rat) -> (Rat, Rat) {
    let mut m: BigInt = (r.numer() * r.denom()).abs();
    let mut sf = BigInt::one();
    let mut p = BigInt::from(2u32);
    let cap = BigInt::from(1_000_000u32);
    while &p * &p <= m && p <= cap {
        let p2 = &p * &p;
        while (&m % &p2).is_zero() {
            m /= &p2;
        }
        if (&m % &p).is_zero() {
            m /= &p;
            sf *= &p;
        }
        p += 1;
    }
    if nth_root(&Rat::from_integer(m.clone()), 2).is_none() {
        sf *= m;
    }
    let kappa = Rat::from_integer(if r.is_negative() { -sf } else { sf });
    let s = nth_root(&(r / &kappa), 2).unwrap_or_else(|| {
        // Only reachable if trial division stopped early; r itself is a
        // valid representative then.
        Rat::one()
    });
    if (&kappa * &s * &s) != *r {
        return (r.clone(), Rat::one());
    }
    (kappa, s)
}

fn diag(s: Rat, t: Rat) -> Result<GMat> {
    GMat::new(UPoly::constant(s), UPoly::zero(), UPoly::zero(), UPoly::constant(t))
}

/// Unimodular matrix taking the primitive linear form `l` to `Y1`.
fn to_y1(l: &BForm) -> Result<GMat> {
    let (a, b) = (l.coeff(1).clone(), l.coeff(0).clone());
    let (g, s, t) = a.ext_gcd(&b);
    if !g.is_one() {
        return Err(alarm("linear factor is not primitive"));
    }
    GMat::new(b, s, -a, t)
}

struct Normaliser {
    word: Vec<GMat>,
    factors: Vec<BForm>,
}

impl Normaliser {
    fn apply(&mut self, m: GMat) {
        if m == GMat::identity() {
            return;
        }
        for f in self.factors.iter_mut() {
            *f = apply_form(&m, f);
        }
        self.word.push(m);
    }

    /// `Y0 -> Y0 + h Y1` removing the `Y0^(k-1) Y1` term of factor `i`.
    fn depress(&mut self, i: usize) -> Result<()> {
        let f = &self.factors[i];
        let k = f.degree();
        let lead = f.coeff(k);
        if !lead.is_constant() {
            return Err(alarm("leading Y0 coefficient is not constant"));
        }
        let h = f.coeff(k - 1).scale(&-(rat(k as i64) * lead.coeff(0)).recip());
        if !h.is_zero() {
            self.apply(GMat::jonquieres(Rat::one(), h)?);
        }
        Ok(())
    }
}

fn normalise(factors: &[BForm], d: usize) -> Result<(Vec<GMat>, NormalFamily)> {
    let lin: Vec<usize> = (0..factors.len()).filter(|&i| factors[i].degree() == 1).collect();
    let non: Vec<usize> = (0..factors.len()).filter(|&i| factors[i].degree() >= 2).collect();
    let mut nm = Normaliser { word: Vec::new(), factors: factors.to_vec() };
    let family = match (d % 2, lin.len()) {
        (1, 1) | (0, 0) => {
            if non.iter().any(|&i| factors[i].degree() != 2) {
                return Err(alarm("nonlinear factor of degree > 2"));
            }
            if let Some(&l) = lin.first() {
                let m = to_y1(&nm.factors[l])?;
                nm.apply(m);
            } else {
                let first = &nm.factors[non[0]];
                let trace = g_reduce(&first.dehomogenize())?;
                for m in trace.steps {
                    nm.apply(m);
                }
            }
            let p1 = non[0];
            nm.depress(p1)?;
            let f = &nm.factors[p1];
            let (alpha, gamma) = (f.coeff(2).coeff(0), f.coeff(0).clone());
            if gamma.deg() != Some(1) {
                return Err(alarm("quadratic factor is not linear in x"));
            }
            let (kappa, s) = square_class(&(gamma.coeff(1) / &alpha));
            nm.apply(diag(s, Rat::one())?);
            let mut a = Vec::new();
            for &i in &non {
                let f = &nm.factors[i];
                let (c0, c1, c2) = (f.coeff(0), f.coeff(1), f.coeff(2));
                if !c1.is_zero() || !c2.is_constant() {
                    return Err(alarm("quadratic factors are not simultaneously diagonal"));
                }
                let g = c0.scale(&(c2.coeff(0) * &kappa).recip());
                if g.deg() != Some(1) || !g.coeff(1).is_one() {
                    return Err(alarm("quadratic factor outside the family"));
                }
                a.push(g.coeff(0));
            }
            if d % 2 == 1 {
                NormalFamily::Odd { a, kappa }
            } else {
                NormalFamily::Even { a, kappa }
            }
        }
        (0, 1) if d == 4 => {
            let m = to_y1(&nm.factors[lin[0]])?;
            nm.apply(m);
            let p = non[0];
            nm.depress(p)?;
            let f = &nm.factors[p];
            let (q0, q1, alpha) = (f.coeff(0), f.coeff(1), f.coeff(3).coeff(0));
            if !q1.is_constant() || q0.deg() != Some(1) {
                return Err(alarm("cubic factor outside the family"));
            }
            let c = q0.coeff(1).recip();
            let h = BForm::new(vec![
                UPoly::constant(q0.coeff(0) * &c),
                UPoly::constant(q1.coeff(0) * &c),
                UPoly::zero(),
                UPoly::constant(alpha * &c),
            ]);
            NormalFamily::Case2 { h }
        }
        (0, 2) if d == 4 => {
            let (l1, l2) = (&nm.factors[lin[0]], &nm.factors[lin[1]]);
            let m = GMat::new(
                l2.coeff(0).clone(),
                -l1.coeff(0),
                -l2.coeff(1),
                l1.coeff(1).clone(),
            )
            .map_err(|_| alarm("linear factors have a nonconstant resultant"))?;
            nm.apply(m);
            let f = &nm.factors[non[0]];
            let (gamma, beta, alpha) = (f.coeff(0), f.coeff(1).clone(), f.coeff(2));
            if !alpha.is_constant() || !gamma.is_constant() || beta.deg() != Some(1) {
                return Err(alarm("quadratic factor outside the family"));
            }
            let (alpha, gamma) = (alpha.coeff(0), gamma.coeff(0));
            let (kappa, s) = square_class(&(&gamma / &alpha));
            let t = s.recip();
            nm.apply(diag(Rat::one(), t.clone())?);
            let b = beta.scale(&(t / &alpha));
            NormalFamily::Case1 { mu: b.coeff(1), lambda: b.coeff(0), kappa }
        }
        _ => return Err(alarm("factor degrees match no family")),
    };
    let reached = BForm::product(&nm.factors);
    if !reached.same_up_to_constant(&normal_form(&family)?) {
        return Err(alarm("normalised form differs from the family member"));
    }
    Ok((nm.word, family))
}

/// Decides which alternative of the bound dichotomy `factors` falls in.
/// Factors must be pairwise coprime, squarefree, free of factors in Q[x],
/// and linear or absolutely irreducible.
pub fn classify_form(factors: &[BForm]) -> Result<ClassificationVerdict> {
    let d = validate(factors, true)?;
    let deg_disc = product_disc_degree(factors)?;
    let bound = bound(d);
    let mut v = ClassificationVerdict {
        d,
        deg_disc,
        bound,
        outcome: Outcome::AboveBound,
        witness: None,
        normalising_word: None,
        family: None,
    };
    if deg_disc == 0 {
        if factors.iter().any(|f| f.degree() != 1) {
            return Err(Error::Internal("constant discriminant with a nonlinear factor".into()));
        }
        let (l1, l2) = (&factors[0], &factors[1]);
        let w = GMat::new(l2.coeff(0).clone(), -l1.coeff(0), -l2.coeff(1), l1.coeff(1).clone())
            .map_err(|_| Error::Internal("constant discriminant with a nonconstant resultant".into()))?;
        if apply_form(&w, &BForm::product(factors)).d_x() != 0 {
            return Err(Error::Internal("witness does not reach Q[Y]".into()));
        }
        v.outcome = Outcome::ConstantDisc;
        v.witness = Some(w);
        return Ok(v);
    }
    if deg_disc < bound {
        return Err(Error::BoundViolated { deg: deg_disc, bound });
    }
    if deg_disc == bound {
        let (word, family) = normalise(factors, d)?;
        v.outcome = family.outcome();
        v.normalising_word = Some(word);
        v.family = Some(family);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{frac, parse_form, parse_form_product};

    fn fs(s: &str) -> Vec<BForm> {
        parse_form_product(s).unwrap()
    }

    #[test]
    fn classify_examples() {
        let v = classify_form(&fs("(Y0^2 + x*Y1^2)")).unwrap();
        assert_eq!((v.outcome, v.deg_disc, v.bound), (Outcome::EqualityCase4Even, 1, 1));
        let v = classify_form(&fs("(Y1)*(Y0^2 + x*Y1^2)")).unwrap();
        assert_eq!((v.outcome, v.deg_disc, v.bound), (Outcome::EqualityCase3Odd, 1, 1));
        let v = classify_form(&fs("(Y0)*(Y1)*(Y0^2 + x*Y0*Y1 + Y1^2)")).unwrap();
        assert_eq!((v.outcome, v.deg_disc, v.bound), (Outcome::EqualityCase1, 2, 2));
        let v = classify_form(&fs("(Y0)*(x*Y0 + Y1)")).unwrap();
        assert_eq!(v.outcome, Outcome::ConstantDisc);
        let w = v.witness.unwrap();
        let image = apply_form(&w, &parse_form("Y0*(x*Y0 + Y1)").unwrap());
        assert!(image.same_up_to_constant(&parse_form("Y0*Y1").unwrap()));
        let v = classify_form(&fs("(Y0)*(Y1)*(x*Y0 + Y1)")).unwrap();
        assert_eq!((v.outcome, v.deg_disc, v.bound), (Outcome::AboveBound, 2, 1));
    }

    #[test]
    fn product_formula_matches_direct_discriminant() {
        for s in [
            "(Y0)*(Y1)*(Y0^2 + x*Y0*Y1 + Y1^2)",
            "(Y1)*(Y0^2 + x*Y1^2)*(Y0^2 + (x+1)*Y1^2)",
            "(Y0 + x*Y1)*(Y0^2 + (x^2 + 1)*Y1^2)*(x*Y0 - Y1)",
        ] {
            let f = fs(s);
            let direct = disc_form(&BForm::product(&f)).unwrap().deg().unwrap();
            assert_eq!(product_disc_degree(&f).unwrap(), direct, "{s}");
        }
    }

    #[test]
    fn validation_errors() {
        assert_eq!(classify_form(&fs("(Y0)*(Y0)")).unwrap_err(), Error::FactorsNotCoprime(1, 2));
        assert_eq!(classify_form(&fs("(Y0^2 - 2*Y0*Y1 + Y1^2)")).unwrap_err(), Error::NotSquarefree);
        assert_eq!(classify_form(&fs("(Y0^2 - Y1^2)")).unwrap_err(), Error::NotIrreducible);
        assert_eq!(classify_form(&fs("(Y0^2 + Y1^2)")).unwrap_err(), Error::NotIrreducible);
        assert_eq!(classify_form(&fs("(x*Y0 + x*Y1)*(Y1)")).unwrap_err().kind(), "BadParams");
        assert_eq!(classify_form(&fs("(Y0)")).unwrap_err(), Error::DegreeTooSmall(1));
    }

    #[test]
    fn normal_form_examples() {
        let f = normal_form(&NormalFamily::Case2 { h: parse_form("Y0^3").unwrap() }).unwrap();
        assert_eq!(f, parse_form("Y1*(Y0^3 + x*Y1^3)").unwrap());
        assert_eq!(f.degree(), 4);
        let f = normal_form(&NormalFamily::Odd { a: vec![rat(0), rat(1)], kappa: rat(1) }).unwrap();
        assert_eq!(f, parse_form("Y1*(Y0^2 + x*Y1^2)*(Y0^2 + (x+1)*Y1^2)").unwrap());
        let f = normal_form(&NormalFamily::Even { a: vec![rat(5)], kappa: rat(1) }).unwrap();
        assert_eq!(f, parse_form("Y0^2 + (x+5)*Y1^2").unwrap());
        let e = normal_form(&NormalFamily::Even { a: vec![rat(1), rat(1)], kappa: rat(1) });
        assert_eq!(e.unwrap_err().kind(), "BadParams");
        let e = normal_form(&NormalFamily::Case1 { mu: rat(0), lambda: rat(1), kappa: rat(1) });
        assert_eq!(e.unwrap_err().kind(), "BadParams");
    }

    #[test]
    fn bound_examples() {
        let f = normal_form(&NormalFamily::Even { a: vec![rat(0), rat(1), rat(2)], kappa: rat(1) }).unwrap();
        let factors = fs("(Y0^2 + x*Y1^2)*(Y0^2 + (x+1)*Y1^2)*(Y0^2 + (x+2)*Y1^2)");
        assert_eq!(BForm::product(&factors), f);
        let r = verify_bound(&factors).unwrap();
        assert_eq!((r.deg_disc, r.bound, r.ok), (3, 3, true));
        let r = verify_bound(&fs("(Y0^3 + 2*Y0*Y1^2 + x*Y1^3)*(Y1)")).unwrap();
        assert_eq!((r.deg_disc, r.bound, r.ok), (2, 2, true));
    }

    #[test]
    fn twisted_and_disguised_members() {
        // Square class 2 survives over Q.
        let v = classify_form(&fs("(Y0^2 + 2*x*Y1^2)")).unwrap();
        assert_eq!(v.family, Some(NormalFamily::Even { a: vec![rat(0)], kappa: rat(2) }));
        // A G-image of the odd family.
        let sigma = GMat::jonquieres(rat(3), UPoly::from_ints(&[1, 0, 1])).unwrap();
        let base = fs("(Y1)*(Y0^2 + x*Y1^2)*(Y0^2 + (x - 1)*Y1^2)");
        let moved: Vec<BForm> = base.iter().map(|f| apply_form(&sigma, f)).collect();
        let v = classify_form(&moved).unwrap();
        assert_eq!(v.outcome, Outcome::EqualityCase3Odd);
        let NormalFamily::Odd { a, kappa } = v.family.unwrap() else { panic!() };
        assert_eq!(a, vec![rat(0), rat(-1)]);
        assert_eq!(kappa, rat(1));
        // Depressed cubic member of case 2 behind an inversion.
        let base = normal_form(&NormalFamily::depressed_cubic(rat(2), frac(1, 2))).unwrap();
        let fac = vec![BForm::y1(), parse_form("Y0^3 + 2*Y0*Y1^2 + (x + 1/2)*Y1^3").unwrap()];
        assert_eq!(BForm::product(&fac), base);
        let moved: Vec<BForm> = fac.iter().map(|f| apply_form(&GMat::tau(), f)).collect();
        let v = classify_form(&moved).unwrap();
        assert_eq!(v.outcome, Outcome::EqualityCase2);
        let mut g = BForm::product(&moved);
        for m in v.normalising_word.unwrap() {
            g = apply_form(&m, &g);
        }
        assert!(g.same_up_to_constant(&normal_form(&v.family.unwrap()).unwrap()));
    }

    #[test]
    fn square_classes() {
        assert_eq!(square_class(&frac(8, 9)), (rat(2), frac(2, 3)));
        assert_eq!(square_class(&frac(-1, 4)), (rat(-1), frac(1, 2)));
        assert_eq!(square_class(&rat(12)), (rat(3), rat(2)));
    }
}
