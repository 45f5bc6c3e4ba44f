//! Multimodular resultants over Z[x] with a coefficient bound, so the
//! reconstruction is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::rat::denom_lcm;
use crate::poly::{BPoly, Rat, UPoly};

#[derive(Clone, Copy)]
struct Fp(u64);

impl Fp {
    fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    fn add(self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.0 as u128) as u64
    }

    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + (self.0 - b)
        }
    }

    fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    fn inv(self, a: u64) -> u64 {
        self.pow(a, self.0 - 2)
    }

    fn big(self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.0)).to_u64().expect("residue fits")
    }

    fn eval(self, c: &[u64], x: u64) -> u64 {
        c.iter().rev().fold(0, |acc, &a| self.add(self.mul(acc, x), a))
    }

    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    /// Resultant of univariate polynomials with nonzero leading coefficients.
    fn resultant(self, a: &[u64], b: &[u64]) -> u64 {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        Fp::trim(&mut a);
        Fp::trim(&mut b);
        if a.is_empty() || b.is_empty() {
            return 0;
        }
        let mut acc = 1;
        loop {
            let (da, db) = (a.len() - 1, b.len() - 1);
            if db == 0 {
                return self.mul(acc, self.pow(b[0], da as u64));
            }
            let lb_inv = self.inv(b[db]);
            let mut r = a.clone();
            while r.len() > db {
                let k = r.len() - 1 - db;
                let q = self.mul(r[r.len() - 1], lb_inv);
                for (i, &bi) in b.iter().enumerate() {
                    r[k + i] = self.sub(r[k + i], self.mul(q, bi));
                }
                r.pop();
                Fp::trim(&mut r);
            }
            if r.is_empty() {
                return 0;
            }
            if da % 2 == 1 && db % 2 == 1 {
                acc = self.sub(0, acc);
            }
            acc = self.mul(acc, self.pow(b[db], (da - (r.len() - 1)) as u64));
            a = std::mem::replace(&mut b, r);
        }
    }

    /// Newton interpolation through increasing abscissae.
    fn interpolate(self, xs: &[u64], ys: &[u64]) -> Vec<u64> {
        let n = xs.len();
        let mut c = ys.to_vec();
        // Abscissae are small increasing integers, so differences repeat.
        let span = xs.last().map_or(0, |&x| x as usize);
        let inv: Vec<u64> = (0..=span).map(|d| if d == 0 { 0 } else { self.inv(d as u64) }).collect();
        for k in 1..n {
            for i in (k..n).rev() {
                let num = self.sub(c[i], c[i - 1]);
                c[i] = self.mul(num, inv[(xs[i] - xs[i - k]) as usize]);
            }
        }
        let mut acc: Vec<u64> = Vec::with_capacity(n);
        for i in (0..n).rev() {
            // acc = acc * (x - xs[i]) + c[i]
            let mut next = vec![0; acc.len() + 1];
            for (j, &a) in acc.iter().enumerate() {
                next[j + 1] = self.add(next[j + 1], a);
                next[j] = self.sub(next[j], self.mul(a, xs[i]));
            }
            next[0] = self.add(next[0], c[i]);
            acc = next;
        }
        acc
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let f = Fp(n);
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = f.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = f.mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes just below 2^62, descending.
fn primes() -> impl Iterator<Item = u64> {
    ((1u64 << 61)..(1u64 << 62)).rev().step_by(2).filter(|&n| is_prime(n))
}

/// Integer coefficient rows of `c * f` with `c` clearing all denominators.
fn integral(f: &BPoly) -> (BigInt, Vec<Vec<BigInt>>) {
    let c = denom_lcm(f.coeffs().iter().flat_map(|u| u.coeffs().iter()));
    let c_rat = Rat::from_integer(c.clone());
    let rows = f
        .coeffs()
        .iter()
        .map(|u| u.coeffs().iter().map(|a| (a * &c_rat).to_integer()).collect())
        .collect();
    (c, rows)
}

fn norm1(rows: &[Vec<BigInt>]) -> BigInt {
    rows.iter().flatten().map(|a| a.abs()).sum()
}

/// `Res_y(f, g)` for `deg_y f, deg_y g ≥ 1`, modulo primes near 2^62 until
/// the product exceeds twice `|f|_1^n |g|_1^m`, which bounds every
/// coefficient of the Sylvester determinant.
pub fn resultant_y_multimodular(f: &BPoly, g: &BPoly) -> UPoly {
    let (m, n) = (f.d_y(), g.d_y());
    let (cf, fr) = integral(f);
    let (cg, gr) = integral(g);
    let bound = num_traits::pow(norm1(&fr), n) * num_traits::pow(norm1(&gr), m);
    let deg_bound = n * f.d_x() + m * g.d_x();
    let target = &bound * 2u32;
    let mut modulus = BigInt::one();
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); deg_bound + 1];
    for p in primes() {
        if modulus > target {
            break;
        }
        let fp = Fp(p);
        let fm: Vec<Vec<u64>> = fr.iter().map(|r| r.iter().map(|a| fp.big(a)).collect()).collect();
        let gm: Vec<Vec<u64>> = gr.iter().map(|r| r.iter().map(|a| fp.big(a)).collect()).collect();
        let (mut xs, mut ys) = (Vec::with_capacity(deg_bound + 1), Vec::with_capacity(deg_bound + 1));
        let mut x0 = 0u64;
        while xs.len() <= deg_bound {
            let fa: Vec<u64> = fm.iter().map(|c| fp.eval(c, x0)).collect();
            let ga: Vec<u64> = gm.iter().map(|c| fp.eval(c, x0)).collect();
            if fa[m] != 0 && ga[n] != 0 {
                xs.push(x0);
                ys.push(fp.resultant(&fa, &ga));
            }
            x0 += 1;
        }
        let image = fp.interpolate(&xs, &ys);
        // Garner step: acc ≡ image (mod p), acc ≡ acc (mod modulus).
        let pb = BigInt::from(p);
        let m_inv = fp.inv(fp.big(&modulus));
        for (a, &r) in acc.iter_mut().zip(image.iter().chain(std::iter::repeat(&0))) {
            let t = fp.mul(fp.sub(r, fp.big(a)), m_inv);
            *a += &modulus * BigInt::from(t);
        }
        modulus *= &pb;
    }
    let half = &modulus / 2u32;
    let coeffs: Vec<Rat> = acc
        .into_iter()
        .map(|a| Rat::from_integer(if a > half { a - &modulus } else { a }))
        .collect();
    let scale = num_traits::pow(Rat::from_integer(cf), n) * num_traits::pow(Rat::from_integer(cg), m);
    UPoly::new(coeffs).scale(&scale.recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elimination::resultant_sylvester_formal;
    use crate::poly::parse_poly;

    #[test]
    fn primes_are_prime() {
        assert!(is_prime(2_305_843_009_213_693_951));
        assert!(!is_prime(2_305_843_009_213_693_953));
        let ps: Vec<u64> = primes().take(3).collect();
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(ps.iter().all(|&p| p > 1 << 61));
    }

    #[test]
    fn agrees_with_sylvester() {
        for (a, b) in [
            ("y^3 + x*y + 1", "y^2 - x^2*y + 3"),
            ("1/2*x*y^4 - y + x^2", "y^3 + 2/3*x"),
            ("(y - x)*(y^2 + 1)", "(y - x)*(y + 2)"),
            ("-7*y^7 + 100*x*y^3 - 2", "x*y^6 + y - x^3"),
            ("x*y^2 - 1", "(x - 1)*y + x^3"),
        ] {
            let (f, g) = (parse_poly(a).unwrap(), parse_poly(b).unwrap());
            let s = resultant_sylvester_formal(f.coeffs(), f.d_y(), g.coeffs(), g.d_y());
            assert_eq!(resultant_y_multimodular(&f, &g), s, "{a} / {b}");
        }
    }
}
