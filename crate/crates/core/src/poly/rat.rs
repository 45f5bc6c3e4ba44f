use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number, always stored in lowest terms with positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

/// Renders as `p` or `p/q`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact `k`-th root when `r` is the `k`-th power of a rational.
pub fn nth_root(r: &Rat, k: u32) -> Option<Rat> {
    if k == 0 {
        return None;
    }
    if k == 1 || r.is_zero() {
        return Some(r.clone());
    }
    if r.is_negative() && k % 2 == 0 {
        return None;
    }
    let root_int = |n: &BigInt| -> Option<BigInt> {
        let a = n.abs();
        let c = a.nth_root(k);
        if num_traits::pow(c.clone(), k as usize) == a {
            Some(if n.is_negative() { -c } else { c })
        } else {
            None
        }
    };
    Some(Rat::new(root_int(r.numer())?, root_int(r.denom())?))
}

pub fn rat_pow(r: &Rat, k: usize) -> Rat {
    num_traits::pow(r.clone(), k)
}

/// Lowest common multiple of the denominators.
pub fn denom_lcm<'a>(it: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Gcd of the numerators (after the values are known to be integers).
pub fn numer_gcd<'a>(it: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    it.into_iter().fold(BigInt::zero(), |acc, r| acc.gcd(r.numer()))
}

/// All positive divisors of |n|, for small n. Returns `None` past a size cap.
pub fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return None;
    }
    let cap = BigInt::from(1u64 << 40);
    if n > cap {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
        if d > BigInt::from(2_000_000u64) {
            return None;
        }
    }
    large.reverse();
    small.extend(large);
    Some(small)
}

pub fn gcd_usize(a: usize, b: usize) -> usize {
    a.gcd(&b)
}
