//! Reproducible randomness and sample points, including rational points on
//! a hypersurface found by intersecting it with lines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::field::FieldElem;
use crate::poly::Poly;
use crate::univariate::UPoly;

/// Independent random stream for a `(seed, label)` pair.
pub fn stream(seed: u64, label: &str) -> ChaCha20Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(label.as_bytes());
    ChaCha20Rng::from_seed(h.finalize().into())
}

pub fn random_ints<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-bound..=bound)).collect()
}

pub fn random_point<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<FieldElem> {
    random_ints(rng, n, bound).into_iter().map(FieldElem::from_int).collect()
}

/// Hex SHA-256 of the canonical text of a list of points.
pub fn points_digest(points: &[Vec<FieldElem>]) -> String {
    let mut h = Sha256::new();
    for p in points {
        for c in p {
            h.update(c.to_string().as_bytes());
            h.update(b",");
        }
        h.update(b";");
    }
    hex::encode(h.finalize())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SamplingError {
    #[error("no rational points found on the hypersurface along {0} random lines")]
    NoPoints(usize),
}

const MAX_SEED_CANDIDATES: usize = 20_000;

/// Small integer vectors in `{-1, 0, 1}^n`, ordered by support size, then
/// lexicographically; at most `cap` of them.
pub fn small_vectors(n: usize, cap: usize) -> Vec<Vec<i64>> {
    fn rec(n: usize, start: usize, left: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>, cap: usize) {
        if out.len() >= cap {
            return;
        }
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            for s in [1, -1] {
                cur[i] = s;
                rec(n, i + 1, left - 1, cur, out, cap);
                cur[i] = 0;
                if out.len() >= cap {
                    return;
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    for k in 1..=n {
        rec(n, 0, k, &mut cur, &mut out, cap);
        if out.len() >= cap {
            break;
        }
    }
    out
}

fn is_singular(grad: &[Poly], p: &[FieldElem]) -> bool {
    grad.iter().all(|g| g.eval(p).is_zero())
}

/// Rational points of `V(f)`, found by intersecting `f` with random lines
/// through known points (singular ones first) and with chords between known
/// points. Fails after 50 consecutive unproductive lines.
pub fn hypersurface_points<R: Rng>(f: &Poly, count: usize, rng: &mut R) -> Result<Vec<Vec<FieldElem>>, SamplingError> {
    const MAX_FAILURES: usize = 50;
    let n = f.nvars();
    let grad = f.gradient();
    let mut seeds: Vec<(Vec<FieldElem>, bool)> = small_vectors(n, MAX_SEED_CANDIDATES)
        .into_iter()
        .map(|v| v.into_iter().map(FieldElem::from_int).collect::<Vec<_>>())
        .filter(|p| f.eval(p).is_zero())
        .take(64)
        .map(|p| {
            let s = is_singular(&grad, &p);
            (p, s)
        })
        .collect();
    seeds.sort_by_key(|(_, s)| !*s);
    let mut pool: Vec<Vec<FieldElem>> = seeds.iter().map(|(p, _)| p.clone()).collect();
    let singular: Vec<Vec<FieldElem>> = seeds.iter().filter(|(_, s)| *s).map(|(p, _)| p.clone()).collect();
    let mut out = Vec::new();
    let mut failures = 0;
    let bound = 8 * (f.total_degree().unwrap_or(1) as i64).max(2);
    while out.len() < count {
        if failures >= MAX_FAILURES || pool.is_empty() {
            return Err(SamplingError::NoPoints(MAX_FAILURES));
        }
        let base = if !singular.is_empty() && rng.gen_bool(0.75) {
            singular[rng.gen_range(0..singular.len())].clone()
        } else {
            pool[rng.gen_range(0..pool.len())].clone()
        };
        let dir = if pool.len() > 1 && rng.gen_bool(0.3) {
            pool[rng.gen_range(0..pool.len())].clone()
        } else {
            random_point(rng, n, bound)
        };
        let line = UPoly::from_binary_form(&f.restrict_to_line(&base, &dir));
        let (_, rest) = line.strip_t_power();
        let roots = if rest.is_zero() {
            vec![FieldElem::from_int(rng.gen_range(1..=bound))]
        } else {
            rest.small_degree_roots().unwrap_or_default()
        };
        let mut found = false;
        for t in roots {
            let p: Vec<FieldElem> = base.iter().zip(&dir).map(|(a, b)| a + &(&t * b)).collect();
            if p.iter().all(FieldElem::is_zero) || !f.eval(&p).is_zero() {
                continue;
            }
            found = true;
            pool.push(p.clone());
            out.push(p);
            if out.len() == count {
                break;
            }
        }
        if found {
            failures = 0;
        } else {
            failures += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr_io::parse_poly;
    use crate::field::Field;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<i64> = random_ints(&mut stream(7, "x"), 5, 100);
        let b: Vec<i64> = random_ints(&mut stream(7, "x"), 5, 100);
        let c: Vec<i64> = random_ints(&mut stream(7, "y"), 5, 100);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn points_on_cubics() {
        let f = parse_poly("x0*x2*x4 - x0*x3^2 - x1^2*x4 + 2*x1*x2*x3 - x2^3", 5, Field::Q).unwrap();
        let pts = hypersurface_points(&f, 20, &mut stream(1, "v")).unwrap();
        assert_eq!(pts.len(), 20);
        for p in &pts {
            assert!(f.eval(p).is_zero());
        }
    }

    #[test]
    fn reports_failure() {
        let f = parse_poly("x0^2 + x1^2 + x2^2", 3, Field::Q).unwrap();
        assert!(hypersurface_points(&f, 1, &mut stream(1, "v")).is_err());
    }

    #[test]
    fn small_vector_order() {
        let v = small_vectors(3, 100);
        assert_eq!(v.len(), 26);
        assert_eq!(v[0], vec![1, 0, 0]);
        assert!(v.windows(2).all(|w| {
            w[0].iter().filter(|&&x| x != 0).count() <= w[1].iter().filter(|&&x| x != 0).count()
        }));
    }
}
