//! Word-size prime field arithmetic, Chinese remaindering and rational
//! reconstruction, used by the interpolation routines.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::FieldElem;

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime; `None` for zero.
pub fn invmod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        None
    } else {
        Some(powmod(a, p - 2, p))
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
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
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes `p < 2^62` with `p = 1 mod 3`, in decreasing order.
pub fn primes() -> impl Iterator<Item = u64> {
    let top = (1u64 << 62) - 1;
    let start = top - (top % 6) + 1;
    let start = if start > top { start - 6 } else { start };
    (0..).map(move |k| start - 6 * k).filter(|&n| is_prime(n))
}

/// A primitive cube root of unity modulo `p`, requires `p = 1 mod 3`.
pub fn cube_root_of_unity(p: u64) -> u64 {
    assert_eq!(p % 3, 1);
    (2..)
        .map(|g| powmod(g, (p - 1) / 3, p))
        .find(|&w| w != 1)
        .expect("p = 1 mod 3 has a primitive cube root")
}

pub fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().expect("reduced residue")
}

pub fn i64_mod(n: i64, p: u64) -> u64 {
    (n as i128).rem_euclid(p as i128) as u64
}

/// Image of a rational number; `None` when `p` divides the denominator.
pub fn rational_mod(q: &BigRational, p: u64) -> Option<u64> {
    let d = bigint_mod(q.denom(), p);
    let n = bigint_mod(q.numer(), p);
    Some(mulmod(n, invmod(d, p)?, p))
}

/// Image of `a + b w` under `w -> omega`.
pub fn elem_mod(c: &FieldElem, p: u64, omega: u64) -> Option<u64> {
    let a = rational_mod(c.re(), p)?;
    if c.is_rational() {
        return Some(a);
    }
    let b = rational_mod(c.om(), p)?;
    Some(addmod(a, mulmod(b, omega, p), p))
}

/// Lifts `(r1 mod m1, r2 mod m2)` to the residue modulo `m1 * m2`.
pub fn crt(r1: &BigInt, m1: &BigInt, r2: u64, m2: u64) -> BigInt {
    let m1_mod = bigint_mod(m1, m2);
    let inv = invmod(m1_mod, m2).expect("coprime moduli");
    let diff = submod(r2, bigint_mod(r1, m2), m2);
    let k = mulmod(diff, inv, m2);
    r1 + m1 * BigInt::from(k)
}

/// Finds `n/d` with `|n|, d <= sqrt(m/2)` congruent to `a` modulo `m`.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let a = a.mod_floor(m);
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if !r1.gcd(&t1).is_one() {
        return None;
    }
    let (n, d) = if t1.sign() == Sign::Minus { (-r1, -t1) } else { (r1, t1) };
    Some(BigRational::new(n, d))
}

/// Result of solving `A X = B` modulo `p` for several right-hand sides.
#[derive(Debug, Clone)]
pub struct ModSolve {
    /// Rank of `A`.
    pub rank: usize,
    /// Per right-hand side: a solution with free unknowns set to zero, or
    /// `None` when that system is inconsistent.
    pub solutions: Vec<Option<Vec<u64>>>,
    /// Pivot columns of the reduced matrix.
    pub pivots: Vec<usize>,
}

/// Gaussian elimination on the augmented matrix `[A | B]`. `a` is
/// row-major with `cols` unknowns, `b` is row-major with `nrhs` columns.
pub fn solve_mod(mut a: Vec<u64>, rows: usize, cols: usize, mut b: Vec<u64>, nrhs: usize, p: u64) -> ModSolve {
    debug_assert_eq!(a.len(), rows * cols);
    debug_assert_eq!(b.len(), rows * nrhs);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(piv) = (row..rows).find(|&r| a[r * cols + col] != 0) else {
            continue;
        };
        if piv != row {
            for c in 0..cols {
                a.swap(piv * cols + c, row * cols + c);
            }
            for c in 0..nrhs {
                b.swap(piv * nrhs + c, row * nrhs + c);
            }
        }
        let inv = invmod(a[row * cols + col], p).expect("nonzero pivot");
        for c in col..cols {
            a[row * cols + c] = mulmod(a[row * cols + c], inv, p);
        }
        for c in 0..nrhs {
            b[row * nrhs + c] = mulmod(b[row * nrhs + c], inv, p);
        }
        let (pivot_a, pivot_b): (Vec<u64>, Vec<u64>) =
            (a[row * cols..(row + 1) * cols].to_vec(), b[row * nrhs..(row + 1) * nrhs].to_vec());
        for r in 0..rows {
            if r == row {
                continue;
            }
            let factor = a[r * cols + col];
            if factor == 0 {
                continue;
            }
            for c in col..cols {
                let v = mulmod(factor, pivot_a[c], p);
                a[r * cols + c] = submod(a[r * cols + c], v, p);
            }
            for c in 0..nrhs {
                let v = mulmod(factor, pivot_b[c], p);
                b[r * nrhs + c] = submod(b[r * nrhs + c], v, p);
            }
        }
        pivots.push(col);
        row += 1;
    }
    let rank = row;
    let solutions = (0..nrhs)
        .map(|k| {
            if (rank..rows).any(|r| b[r * nrhs + k] != 0) {
                return None;
            }
            let mut x = vec![0u64; cols];
            for (r, &c) in pivots.iter().enumerate() {
                x[c] = b[r * nrhs + k];
            }
            Some(x)
        })
        .collect();
    ModSolve { rank, solutions, pivots }
}

/// Inverse of a square matrix modulo `p`, row-major.
pub fn inverse_mod(a: &[u64], n: usize, p: u64) -> Option<Vec<u64>> {
    let mut id = vec![0u64; n * n];
    for i in 0..n {
        id[i * n + i] = 1;
    }
    let s = solve_mod(a.to_vec(), n, n, id, n, p);
    if s.rank < n {
        return None;
    }
    let mut out = vec![0u64; n * n];
    for (k, sol) in s.solutions.into_iter().enumerate() {
        let x = sol?;
        for i in 0..n {
            out[i * n + k] = x[i];
        }
    }
    Some(out)
}

/// Determinant modulo `p`.
pub fn det_mod(a: &[u64], n: usize, p: u64) -> u64 {
    let mut m = a.to_vec();
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| m[r * n + col] != 0) else {
            return 0;
        };
        if piv != col {
            for c in 0..n {
                m.swap(piv * n + c, col * n + c);
            }
            det = submod(0, det, p);
        }
        let pv = m[col * n + col];
        det = mulmod(det, pv, p);
        let inv = invmod(pv, p).expect("nonzero pivot");
        for r in col + 1..n {
            let factor = mulmod(m[r * n + col], inv, p);
            if factor == 0 {
                continue;
            }
            for c in col..n {
                let v = mulmod(factor, m[col * n + c], p);
                m[r * n + c] = submod(m[r * n + c], v, p);
            }
        }
    }
    det
}

/// Accumulates images of one rational unknown across primes and reports
/// when rational reconstruction has stabilized.
#[derive(Debug, Clone)]
pub struct CrtAccumulator {
    residue: BigInt,
    modulus: BigInt,
    last: Option<BigRational>,
}

impl Default for CrtAccumulator {
    fn default() -> Self {
        CrtAccumulator { residue: BigInt::zero(), modulus: BigInt::one(), last: None }
    }
}

impl CrtAccumulator {
    /// Adds one image; returns `true` when the reconstruction agrees with
    /// the previous one (and with the new image).
    pub fn push(&mut self, r: u64, p: u64) -> bool {
        if let Some(q) = &self.last {
            if rational_mod(q, p) == Some(r) {
                self.residue = crt(&self.residue, &self.modulus, r, p);
                self.modulus *= BigInt::from(p);
                return true;
            }
        }
        self.residue = crt(&self.residue, &self.modulus, r, p);
        self.modulus *= BigInt::from(p);
        self.last = rational_reconstruct(&self.residue, &self.modulus);
        false
    }

    pub fn value(&self) -> Option<&BigRational> {
        self.last.as_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_stream() {
        let ps: Vec<u64> = primes().take(3).collect();
        for &p in &ps {
            assert!(p < 1 << 62);
            assert_eq!(p % 3, 1);
            assert!(is_prime(p));
        }
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(!is_prime(3215031751));
        assert!(is_prime(1_000_000_007));
    }

    #[test]
    fn cube_roots() {
        let p = primes().next().unwrap();
        let w = cube_root_of_unity(p);
        assert_eq!(addmod(addmod(mulmod(w, w, p), w, p), 1, p), 0);
    }

    #[test]
    fn reconstruction_recovers_small_fractions() {
        let ps: Vec<u64> = primes().take(3).collect();
        let q = BigRational::new(BigInt::from(-123456789), BigInt::from(9876543211u64));
        let mut acc = CrtAccumulator::default();
        let mut stable = false;
        for &p in &ps {
            stable = acc.push(rational_mod(&q, p).unwrap(), p);
        }
        assert!(stable);
        assert_eq!(acc.value(), Some(&q));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let p = 1_000_000_007;
        // x + y = 1, 2x + 2y = 3
        let a = vec![1, 1, 2, 2];
        let b = vec![1, 1, 3, 2];
        let s = solve_mod(a, 2, 2, b, 2, p);
        assert_eq!(s.rank, 1);
        assert!(s.solutions[0].is_none());
        assert_eq!(s.solutions[1], Some(vec![1, 0]));
    }

    #[test]
    fn inverse_and_det() {
        let p = 1_000_000_007;
        let a = vec![2, 1, 1, 1];
        let inv = inverse_mod(&a, 2, p).unwrap();
        assert_eq!(inv, vec![1, p - 1, p - 1, 2]);
        assert_eq!(det_mod(&a, 2, p), 1);
        assert_eq!(det_mod(&[1, 2, 2, 4], 2, p), 0);
    }
}
