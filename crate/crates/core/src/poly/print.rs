use num_traits::{One, Signed};

use super::rat::{fmt_rat, Rat};

/// Joins `(coefficient, monomial)` pairs in the input grammar. A leading
/// negative unit is written `-1*m` because the grammar has no unary minus.
pub fn join_terms(terms: impl IntoIterator<Item = (Rat, String)>) -> String {
    let mut out = String::new();
    for (c, mono) in terms {
        let first = out.is_empty();
        let neg = c.is_negative();
        let shown = if first { c.clone() } else { c.abs() };
        if !first {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mono.is_empty() {
            out.push_str(&fmt_rat(&shown));
        } else if shown.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&fmt_rat(&shown));
            out.push('*');
            out.push_str(&mono);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `x^i*y^j`-style monomial with the exponent-1 and exponent-0 cases elided.
pub fn monomial(vars: &[(&str, usize)]) -> String {
    vars.iter()
        .filter(|(_, e)| *e > 0)
        .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}
