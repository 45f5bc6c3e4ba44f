use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::poly::rat::denom_lcm;
use crate::poly::Rat;

/// The Mersenne prime 2^61 - 1.
pub const PRIME: u64 = (1 << 61) - 1;

pub(crate) fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

pub(crate) fn inv_mod(a: u64) -> u64 {
    pow_mod(a, PRIME - 2)
}

fn big_mod(n: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    let r = ((n % &p) + &p) % &p;
    r.to_u64().expect("residue fits")
}

/// Image of a rational in Z/p, or `None` when p divides the denominator.
pub fn rat_mod(r: &Rat) -> Option<u64> {
    let d = big_mod(r.denom());
    if d == 0 {
        return None;
    }
    Some(mul_mod(big_mod(r.numer()), inv_mod(d)))
}

/// Rank over Z/p of a dense matrix.
pub fn rank_mod_p(mut m: Vec<Vec<u64>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = inv_mod(m[rank][c]);
        for j in c..cols {
            m[rank][j] = mul_mod(m[rank][j], inv);
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for j in c..cols {
                if pivot_row[j] != 0 {
                    row[j] = (row[j] + PRIME - mul_mod(f, pivot_row[j])) % PRIME;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub(crate) fn sub_mod(a: u64, b: u64) -> u64 {
    (a + PRIME - b) % PRIME
}

/// Determinant over Z/p.
pub fn det_mod_p(mut m: Vec<Vec<u64>>) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| m[r][c] != 0) else {
            return 0;
        };
        if p != c {
            m.swap(p, c);
            det = sub_mod(0, det);
        }
        det = mul_mod(det, m[c][c]);
        let inv = inv_mod(m[c][c]);
        for r in c + 1..n {
            if m[r][c] == 0 {
                continue;
            }
            let f = mul_mod(m[r][c], inv);
            for j in c..n {
                let t = mul_mod(f, m[c][j]);
                m[r][j] = sub_mod(m[r][j], t);
            }
        }
    }
    det
}

/// Sylvester resultant over Z/p of coefficient vectors (lowest degree
/// first) with formal degrees `m` and `n`.
pub fn resultant_mod_p(p: &[u64], m: usize, q: &[u64], n: usize) -> u64 {
    let size = m + n;
    if size == 0 {
        return 1;
    }
    let at = |v: &[u64], k: usize| v.get(k).copied().unwrap_or(0);
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![0; size];
        for k in 0..=m {
            row[i + k] = at(p, m - k);
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![0; size];
        for k in 0..=n {
            row[i + k] = at(q, n - k);
        }
        rows.push(row);
    }
    det_mod_p(rows)
}

/// Interpolating polynomial over Z/p (Newton form), lowest degree first.
pub fn interpolate_mod_p(xs: &[u64], ys: &[u64]) -> Vec<u64> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for k in 1..n {
        for i in (k..n).rev() {
            let num = sub_mod(dd[i], dd[i - 1]);
            let den = sub_mod(xs[i], xs[i - k]);
            dd[i] = mul_mod(num, inv_mod(den));
        }
    }
    let mut out = vec![0u64; n];
    for i in (0..n).rev() {
        // out = out * (x - xs[i]) + dd[i]
        let mut next = vec![0u64; n];
        for k in 0..n {
            if out[k] == 0 {
                continue;
            }
            if k + 1 < n {
                next[k + 1] = (next[k + 1] + out[k]) % PRIME;
            }
            next[k] = sub_mod(next[k], mul_mod(out[k], xs[i]));
        }
        next[0] = (next[0] + dd[i]) % PRIME;
        out = next;
    }
    out
}

/// Degree of a coefficient vector, `None` for zero.
pub fn degree_mod_p(v: &[u64]) -> Option<usize> {
    v.iter().rposition(|&c| c != 0)
}

/// Rank over Q of a dense matrix. Rows are cleared to integers and reduced
/// by fraction-free (Bareiss) elimination, where every division is exact.
pub fn rank_rational(m: Vec<Vec<Rat>>) -> usize {
    let mut m: Vec<Vec<BigInt>> = m
        .into_iter()
        .map(|row| {
            let l = Rat::from_integer(denom_lcm(row.iter()));
            row.iter().map(|a| (a * &l).to_integer()).collect()
        })
        .collect();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest.iter_mut() {
            for j in c + 1..cols {
                row[j] = (&pivot_row[c] * &row[j] - &row[c] * &pivot_row[j]) / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Kernel basis over Q of a dense matrix (columns are unknowns).
pub fn nullspace_rational(mut m: Vec<Vec<Rat>>, cols: usize) -> Vec<Vec<Rat>> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][c].recip();
        for j in c..cols {
            m[rank][j] = &m[rank][j] * &inv;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..cols {
                if !pivot_row[j].is_zero() {
                    row[j] -= &f * &pivot_row[j];
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rat::zero(); cols];
            v[fc] = Rat::from_integer(1.into());
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][fc].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_helpers() {
        // Res(s^2 - 2, s - 3) = 7
        assert_eq!(resultant_mod_p(&[PRIME - 2, 0, 1], 2, &[PRIME - 3, 1], 1), 7);
        let xs = [1, 2, 3, 4];
        let ys: Vec<u64> = xs.iter().map(|&x| (x * x * x + 5) % PRIME).collect();
        assert_eq!(interpolate_mod_p(&xs, &ys), vec![5, 0, 0, 1]);
        assert_eq!(det_mod_p(vec![vec![0, 1], vec![1, 0]]), PRIME - 1);
    }
    use crate::poly::{frac, rat};

    #[test]
    fn ranks_agree() {
        let m = vec![
            vec![rat(1), rat(2), rat(3)],
            vec![rat(2), rat(4), rat(6)],
            vec![rat(0), rat(1), frac(1, 2)],
        ];
        assert_eq!(rank_rational(m.clone()), 2);
        let mp: Vec<Vec<u64>> = m
            .iter()
            .map(|r| r.iter().map(|x| rat_mod(x).unwrap()).collect())
            .collect();
        assert_eq!(rank_mod_p(mp), 2);
        let ns = nullspace_rational(m.clone(), 3);
        assert_eq!(ns.len(), 1);
        for row in &m {
            let dot: Rat = row.iter().zip(&ns[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn negative_residues() {
        assert_eq!(rat_mod(&rat(-1)), Some(PRIME - 1));
        assert_eq!(mul_mod(rat_mod(&frac(1, 3)).unwrap(), 3), 1);
    }

    proptest::proptest! {
        #[test]
        fn bareiss_rank_matches_nullspace(
            rows in proptest::collection::vec(proptest::collection::vec((-3i64..=3, 1i64..=3), 5), 1..7),
        ) {
            // Duplicate a row so that deficient ranks occur.
            let mut m: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().map(|&(n, d)| frac(n, d)).collect()).collect();
            m.push(m[0].iter().map(|a| a * rat(2)).collect());
            let nullity = nullspace_rational(m.clone(), 5).len();
            proptest::prop_assert_eq!(rank_rational(m), 5 - nullity);
        }
    }
}
