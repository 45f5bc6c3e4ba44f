use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::{fmt_rat, parse_poly, rat, upoly_at, BPoly, Rat, UPoly};

/// Jung generator of the plane automorphism group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    /// `(x, y) -> (y, x)`
    Swap,
    /// `(x, y) -> (x, lambda*y + p(x))`
    Elementary { lambda: Rat, p: UPoly },
}

impl Generator {
    pub fn elementary(lambda: Rat, p: UPoly) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::BadParams("elementary generator needs lambda != 0".into()));
        }
        Ok(Generator::Elementary { lambda, p })
    }

    pub fn inverse(&self) -> Generator {
        match self {
            Generator::Swap => Generator::Swap,
            Generator::Elementary { lambda, p } => {
                let inv = lambda.recip();
                Generator::Elementary {
                    p: (-p).scale(&inv),
                    lambda: inv,
                }
            }
        }
    }

    /// `f ∘ g`
    pub fn apply(&self, f: &BPoly) -> BPoly {
        match self {
            Generator::Swap => f.swap(),
            Generator::Elementary { lambda, p } => {
                let img = &BPoly::y().scale(lambda) + &BPoly::from_x(p.clone());
                f.subst_y(&img)
            }
        }
    }

    fn is_identity(&self) -> bool {
        matches!(self, Generator::Elementary { lambda, p } if lambda.is_one() && p.is_zero())
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Swap => write!(f, "S"),
            Generator::Elementary { lambda, p } => write!(f, "E({}, {})", fmt_rat(lambda), p),
        }
    }
}

/// A word `[g1, ..., gk]` stands for `σ = g1 ∘ ... ∘ gk`, so `f ∘ σ` applies
/// the generators to `f` from left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AutWord(pub Vec<Generator>);

impl AutWord {
    pub fn identity() -> Self {
        AutWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> AutWord {
        AutWord(self.0.iter().rev().map(Generator::inverse).collect())
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &AutWord) -> AutWord {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        AutWord(v).simplify()
    }

    /// Cancels adjacent swaps, merges adjacent elementary generators and
    /// drops identities.
    pub fn simplify(&self) -> AutWord {
        let mut out: Vec<Generator> = Vec::new();
        for g in &self.0 {
            match (out.last(), g) {
                (Some(Generator::Swap), Generator::Swap) => {
                    out.pop();
                }
                (
                    Some(Generator::Elementary { lambda: l1, p: p1 }),
                    Generator::Elementary { lambda: l2, p: p2 },
                ) => {
                    let merged = Generator::Elementary {
                        lambda: l1 * l2,
                        p: p1 + &p2.scale(l1),
                    };
                    out.pop();
                    out.push(merged);
                }
                _ => out.push(g.clone()),
            }
            if out.last().is_some_and(Generator::is_identity) {
                out.pop();
            }
        }
        AutWord(out)
    }

    /// `f ∘ σ`
    pub fn apply(&self, f: &BPoly) -> BPoly {
        self.0.iter().fold(f.clone(), |acc, g| g.apply(&acc))
    }

    /// `(x ∘ σ, y ∘ σ)`
    pub fn components(&self) -> (BPoly, BPoly) {
        (self.apply(&BPoly::x()), self.apply(&BPoly::y()))
    }

    /// Parses `S; E(-1, x^2); ...`. An empty string is the identity.
    pub fn parse(text: &str) -> Result<AutWord> {
        let mut gens = Vec::new();
        let mut offset = 0;
        for piece in text.split(';') {
            let t = piece.trim();
            let lead = piece.len() - piece.trim_start().len();
            let at = offset + lead;
            offset += piece.len() + 1;
            if t.is_empty() {
                continue;
            }
            if t == "S" || t.eq_ignore_ascii_case("swap") {
                gens.push(Generator::Swap);
                continue;
            }
            let inner = t
                .strip_prefix("E(")
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| Error::Syntax {
                    offset: at,
                    message: "expected S or E(lambda, p)".into(),
                })?;
            let comma = inner.find(',').ok_or_else(|| Error::Syntax {
                offset: at,
                message: "expected E(lambda, p)".into(),
            })?;
            let shift = |e: Error, base: usize| match e {
                Error::Syntax { offset, message } => Error::Syntax {
                    offset: offset + base,
                    message,
                },
                Error::DivisionByZero { offset } => Error::DivisionByZero { offset: offset + base },
                other => other,
            };
            let lam = parse_poly(&inner[..comma]).map_err(|e| shift(e, at + 2))?;
            let p = parse_poly(&inner[comma + 1..]).map_err(|e| shift(e, at + 3 + comma))?;
            if !lam.is_constant() || p.d_y() > 0 {
                return Err(Error::Syntax {
                    offset: at,
                    message: "lambda must be a constant and p a polynomial in x".into(),
                });
            }
            gens.push(Generator::elementary(lam.term(0, 0), p.coeff_y(0))?);
        }
        Ok(AutWord(gens))
    }
}

impl fmt::Display for AutWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|g| g.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

impl Serialize for AutWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `f ∘ σ`
pub fn apply_aut(sigma: &AutWord, f: &BPoly) -> BPoly {
    sigma.apply(f)
}

/// Substitutes polynomial components: `f(X, Y)`.
pub fn compose_components(f: &BPoly, xs: &BPoly, ys: &BPoly) -> BPoly {
    f.compose(xs, ys)
}

fn random_int(rng: &mut ChaCha8Rng, bound: i64, nonzero: bool) -> i64 {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if !nonzero || v != 0 {
            return v;
        }
    }
}

/// Seeded random word with `steps` generators (never two swaps in a row,
/// starting with an elementary one) and `f = y ∘ σ`.
pub fn random_coordinate(
    seed: u64,
    steps: usize,
    coeff_bound: i64,
    deg_bound: usize,
) -> Result<(BPoly, AutWord)> {
    if steps == 0 || coeff_bound < 1 || deg_bound < 1 {
        return Err(Error::BadParams(
            "need steps >= 1, coeff_bound >= 1, deg_bound >= 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens = Vec::with_capacity(steps);
    for k in 0..steps {
        let swap = k > 0 && gens.last() != Some(&Generator::Swap) && rng.gen_bool(0.75);
        if swap {
            gens.push(Generator::Swap);
            continue;
        }
        let lambda = rat(random_int(&mut rng, coeff_bound, true));
        let deg = rng.gen_range(1..=deg_bound);
        let mut c: Vec<Rat> = (0..deg).map(|_| rat(random_int(&mut rng, coeff_bound, false))).collect();
        c.push(rat(random_int(&mut rng, coeff_bound, true)));
        gens.push(Generator::Elementary {
            lambda,
            p: UPoly::new(c),
        });
    }
    let sigma = AutWord(gens);
    Ok((sigma.apply(&BPoly::y()), sigma))
}

/// `u(f)` for a univariate `u`.
pub fn univariate_at(u: &UPoly, f: &BPoly) -> BPoly {
    upoly_at(u, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn word_semantics() {
        let w = AutWord::parse("S; E(-1, x^2)").unwrap();
        let (sx, sy) = w.components();
        assert_eq!(sx, p("x^2 - y"));
        assert_eq!(sy, p("x"));
        assert_eq!(w.apply(&p("y^2 - x")), p("y"));
    }

    #[test]
    fn generator_examples() {
        assert_eq!(AutWord(vec![Generator::Swap]).apply(&p("y^2 - x")), p("x^2 - y"));
        let e = AutWord::parse("E(1, x^3)").unwrap();
        assert_eq!(e.apply(&p("y^2 - x")), p("(y + x^3)^2 - x"));
    }

    #[test]
    fn group_laws() {
        let w = AutWord::parse("E(2, x^2 - 1); S; E(-1/3, x^3 + x); S").unwrap();
        let f = p("x^2*y - 3*y^2 + x");
        assert_eq!(w.apply(&w.inverse().apply(&f)), f);
        assert_eq!(w.inverse().apply(&w.apply(&f)), f);
        assert!(w.compose(&w.inverse()).is_empty());
        let (a, b) = w.components();
        let (ia, ib) = w.inverse().components();
        assert_eq!(compose_components(&a, &ia, &ib), p("x"));
        assert_eq!(compose_components(&b, &ia, &ib), p("y"));
    }

    #[test]
    fn parse_errors() {
        assert_eq!(AutWord::parse("Q").unwrap_err().kind(), "SyntaxError");
        assert_eq!(AutWord::parse("E(0, x)").unwrap_err().kind(), "BadParams");
        assert_eq!(AutWord::parse("E(1, y)").unwrap_err().kind(), "SyntaxError");
        assert_eq!(AutWord::parse("S; E(1/2, x); S").unwrap().to_string(), "S; E(1/2, x); S");
    }

    #[test]
    fn random_words_are_deterministic() {
        let (f1, w1) = random_coordinate(7, 4, 3, 3).unwrap();
        let (f2, w2) = random_coordinate(7, 4, 3, 3).unwrap();
        assert_eq!((f1.clone(), w1.clone()), (f2, w2));
        assert_eq!(w1.len(), 4);
        assert!(matches!(w1.0[0], Generator::Elementary { .. }));
        assert!(w1.0.windows(2).all(|g| !(g[0] == Generator::Swap && g[1] == Generator::Swap)));
        let (f, _) = random_coordinate(1, 1, 3, 4).unwrap();
        assert_eq!(f.d_y(), 1);
        assert!(f.d_x() <= 4);
    }
}
