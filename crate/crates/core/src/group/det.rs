//! Exact determinants of Laurent-polynomial matrices.
//!
//! Rows are shifted into `Z[t]`, the determinant is evaluated at enough
//! points modulo enough large primes, interpolated, and lifted by the
//! Chinese remainder theorem. The number of primes comes from a Hadamard
//! type bound, so the result is exact.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::laurent::LaurentPoly;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Large primes below 2^62, descending.
fn primes() -> impl Iterator<Item = u64> {
    let mut n = (1u64 << 62) - 1;
    std::iter::from_fn(move || {
        while !is_prime(n) {
            n -= 2;
        }
        let p = n;
        n -= 2;
        Some(p)
    })
}

fn det_mod(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if piv != col {
            m.swap(piv, col);
            det = (p - det) % p;
        }
        let pv = m[col][col];
        det = mul_mod(det, pv, p);
        let inv = inv_mod(pv, p);
        for r in col + 1..n {
            let f = mul_mod(m[r][col], inv, p);
            if f == 0 {
                continue;
            }
            for c in col..n {
                let sub = mul_mod(f, m[col][c], p);
                m[r][c] = (m[r][c] + p - sub) % p;
            }
        }
    }
    det
}

/// Coefficients (ascending) of the polynomial of degree <= xs.len()-1
/// through the given points, modulo `p`.
fn interpolate(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = (dd[i] + p - dd[i - 1]) % p;
            let den = (xs[i] + p - xs[i - j]) % p;
            dd[i] = mul_mod(num, inv_mod(den, p), p);
        }
    }
    // Horner on the Newton form.
    let mut coeffs = vec![0u64; n];
    for i in (0..n).rev() {
        // coeffs = coeffs * (t - xs[i]) + dd[i]
        let mut next = vec![0u64; n];
        for k in 0..n {
            if coeffs[k] == 0 {
                continue;
            }
            if k + 1 < n {
                next[k + 1] = (next[k + 1] + coeffs[k]) % p;
            }
            let sub = mul_mod(coeffs[k], xs[i], p);
            next[k] = (next[k] + p - sub) % p;
        }
        next[0] = (next[0] + dd[i]) % p;
        coeffs = next;
    }
    coeffs
}

fn to_residue(c: &BigInt, p: u64) -> u64 {
    let r = c % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    r.to_u64().expect("residue fits")
}

/// Determinant of a square matrix of Laurent polynomials.
pub fn laurent_det(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    let mut shift = 0i64;
    let mut rows: Vec<Vec<(i64, Vec<BigInt>)>> = Vec::with_capacity(n);
    let mut degree = 0usize;
    let mut bound = BigInt::one();
    for row in m {
        assert_eq!(row.len(), n, "matrix must be square");
        let Some(lo) = row.iter().filter_map(LaurentPoly::min_exp).min() else {
            return LaurentPoly::zero();
        };
        let hi = row.iter().filter_map(LaurentPoly::max_exp).max().expect("nonzero row");
        shift += lo;
        degree += (hi - lo) as usize;
        bound *= row.iter().map(LaurentPoly::l1_norm).sum::<BigInt>();
        rows.push(
            row.iter()
                .map(|e| {
                    let (elo, dense) = e.to_dense();
                    (elo - lo, dense)
                })
                .collect(),
        );
    }
    let npts = degree + 1;
    let xs: Vec<u64> = (0..npts as u64).collect();
    let target = bound * 2u32 + 1u32;
    let mut modulus = BigInt::one();
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); npts];
    for p in primes() {
        let residues: Vec<Vec<Vec<u64>>> = rows
            .iter()
            .map(|r| r.iter().map(|(_, d)| d.iter().map(|c| to_residue(c, p)).collect()).collect())
            .collect();
        let ys: Vec<u64> = xs
            .iter()
            .map(|&x| {
                let mat: Vec<Vec<u64>> = rows
                    .iter()
                    .zip(&residues)
                    .map(|(r, rr)| {
                        r.iter()
                            .zip(rr)
                            .map(|((off, _), coeffs)| {
                                let mut v = 0u64;
                                for c in coeffs.iter().rev() {
                                    v = (mul_mod(v, x, p) + c) % p;
                                }
                                mul_mod(v, pow_mod(x, *off as u64, p), p)
                            })
                            .collect()
                    })
                    .collect();
                det_mod(mat, p)
            })
            .collect();
        let coeffs = interpolate(&xs, &ys, p);
        // CRT step: acc ≡ acc (mod modulus), acc ≡ coeffs (mod p).
        let bp = BigInt::from(p);
        let minv = BigInt::from(inv_mod(to_residue(&modulus, p), p));
        for (a, c) in acc.iter_mut().zip(&coeffs) {
            let diff = (BigInt::from(*c) - &*a) % &bp;
            let diff = if diff.is_negative() { diff + &bp } else { diff };
            let k = (diff * &minv) % &bp;
            *a += k * &modulus;
        }
        modulus *= &bp;
        if modulus > target {
            break;
        }
    }
    let half = &modulus / 2u32;
    let lifted: Vec<BigInt> = acc.into_iter().map(|a| if a > half { a - &modulus } else { a }).collect();
    LaurentPoly::from_dense(shift, &lifted)
}
