//! Torus gradings: all integer weightings of the variables under which a
//! form (and optionally a matrix of forms) is homogeneous. Interpolation only
//! needs monomials of the right weight, which shrinks the fitting systems.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::FieldElem;
use crate::linalg::Mat;
use crate::modp;
use crate::poly::{Monomial, Poly};
use crate::polymat::PolyMatrix;

/// Basis of the weightings. Component `k` of every vector belongs to the
/// `k`-th basis grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    /// `var_weights[k][i]`: weight of `x_i`.
    pub var_weights: Vec<Vec<i64>>,
    /// Weight of `f`.
    pub f_weight: Vec<i64>,
    /// Row and column shifts: `M_ij` has weight `m_weight - row[i] - col[j]`.
    pub row_shift: Vec<Vec<i64>>,
    pub col_shift: Vec<Vec<i64>>,
    pub m_weight: Vec<i64>,
}

impl Grading {
    pub fn len(&self) -> usize {
        self.var_weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.var_weights.is_empty()
    }

    pub fn monomial_key(&self, m: &Monomial) -> Vec<i64> {
        self.var_weights.iter().map(|w| m.weight(w)).collect()
    }

    /// Weight of entry `(i, j)` of `f^r M^{-1}`.
    pub fn inverse_target(&self, i: usize, j: usize, r: u32) -> Vec<i64> {
        (0..self.len())
            .map(|k| r as i64 * self.f_weight[k] - self.m_weight[k] + self.col_shift[k][i] + self.row_shift[k][j])
            .collect()
    }
}

/// Exact kernel of integer rows, selected through a modular rank profile
/// and confirmed against every row.
fn integer_kernel(rows: &HashSet<Vec<i64>>, ncols: usize) -> Vec<Vec<i64>> {
    let p = modp::primes().next().expect("prime");
    let mut all: Vec<&Vec<i64>> = rows.iter().collect();
    all.sort();
    let mut chosen: Vec<Vec<i64>> = Vec::new();
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    for r in &all {
        let mut v: Vec<u64> = r.iter().map(|&x| modp::i64_mod(x, p)).collect();
        for (pc, b) in &basis {
            let c = v[*pc];
            if c != 0 {
                for k in 0..ncols {
                    v[k] = modp::submod(v[k], modp::mulmod(c, b[k], p), p);
                }
            }
        }
        if let Some(pc) = v.iter().position(|&x| x != 0) {
            let inv = modp::invmod(v[pc], p).expect("nonzero");
            for x in v.iter_mut() {
                *x = modp::mulmod(*x, inv, p);
            }
            for (_, b) in basis.iter_mut() {
                let c = b[pc];
                if c != 0 {
                    for k in 0..ncols {
                        b[k] = modp::submod(b[k], modp::mulmod(c, v[k], p), p);
                    }
                }
            }
            basis.push((pc, v));
            chosen.push((*r).clone());
        }
    }
    loop {
        let mat = Mat::from_fn(chosen.len(), ncols, |i, j| FieldElem::from_int(chosen[i][j]));
        let kernel: Vec<Vec<i64>> = if chosen.is_empty() {
            (0..ncols).map(|i| (0..ncols).map(|j| i64::from(i == j)).collect()).collect()
        } else {
            mat.nullspace().iter().map(|v| integerize(v)).collect()
        };
        let bad = all.iter().find(|r| {
            kernel.iter().any(|k| r.iter().zip(k).map(|(a, b)| *a as i128 * *b as i128).sum::<i128>() != 0)
        });
        match bad {
            None => return kernel,
            Some(r) => chosen.push((*r).clone()),
        }
    }
}

fn integerize(v: &[FieldElem]) -> Vec<i64> {
    let mut l = BigInt::one();
    for c in v {
        l = l.lcm(c.re().denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|c| (c.re() * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let g = if g.is_zero() { BigInt::one() } else { g };
    let first_sign_neg = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    ints.iter()
        .map(|x| {
            let y = x / &g;
            let y = if first_sign_neg { -y } else { y };
            y.to_i64().expect("weights fit in 64 bits")
        })
        .collect()
}

fn exps(m: &Monomial, n: usize) -> impl Iterator<Item = i64> + '_ {
    m.exps(n).iter().map(|&e| e as i64)
}

/// Gradings of a single form: returns `(var_weights, f_weight)` per basis
/// grading.
pub fn form_gradings(f: &Poly) -> (Vec<Vec<i64>>, Vec<i64>) {
    let n = f.nvars();
    let mut rows = HashSet::new();
    for (m, _) in f.terms() {
        let mut r: Vec<i64> = exps(m, n).collect();
        r.push(-1);
        rows.insert(r);
    }
    let kernel = integer_kernel(&rows, n + 1);
    let var = kernel.iter().map(|k| k[..n].to_vec()).collect();
    let fw = kernel.iter().map(|k| k[n]).collect();
    (var, fw)
}

/// Joint gradings of `f` and a square matrix `m` of forms.
pub fn matrix_gradings(f: &Poly, m: &PolyMatrix) -> Grading {
    let n = f.nvars();
    let s = m.rows();
    let ncols = n + 2 * s + 2;
    let mut rows = HashSet::new();
    for (mono, _) in f.terms() {
        let mut r = vec![0i64; ncols];
        for (k, e) in exps(mono, n).enumerate() {
            r[k] = e;
        }
        r[n + 2 * s] = -1;
        rows.insert(r);
    }
    for i in 0..s {
        for j in 0..s {
            for (mono, _) in m.get(i, j).terms() {
                let mut r = vec![0i64; ncols];
                for (k, e) in exps(mono, n).enumerate() {
                    r[k] = e;
                }
                r[n + i] += 1;
                r[n + s + j] += 1;
                r[n + 2 * s + 1] = -1;
                rows.insert(r);
            }
        }
    }
    let kernel = integer_kernel(&rows, ncols);
    Grading {
        var_weights: kernel.iter().map(|k| k[..n].to_vec()).collect(),
        row_shift: kernel.iter().map(|k| k[n..n + s].to_vec()).collect(),
        col_shift: kernel.iter().map(|k| k[n + s..n + 2 * s].to_vec()).collect(),
        f_weight: kernel.iter().map(|k| k[n + 2 * s]).collect(),
        m_weight: kernel.iter().map(|k| k[n + 2 * s + 1]).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr_io::parse_poly;
    use crate::field::Field;
    use crate::polymat::hessian;

    #[test]
    fn monomial_form_has_full_torus() {
        let f = parse_poly("x0*x1*x2", 3, Field::Q).unwrap();
        let (w, fw) = form_gradings(&f);
        assert_eq!(w.len(), 3);
        for (wk, fk) in w.iter().zip(&fw) {
            assert_eq!(wk.iter().sum::<i64>(), *fk);
        }
    }

    #[test]
    fn hessian_targets_contain_true_inverse() {
        let f = parse_poly("x0*x1*x2", 3, Field::Q).unwrap();
        let h = hessian(&f).unwrap();
        let g = matrix_gradings(&f, &h);
        // Q_01 = x0*x1/2 must have the target weight
        let m = Monomial::from_exps(&[1, 1, 0]).unwrap();
        assert_eq!(g.monomial_key(&m), g.inverse_target(0, 1, 1));
        let m2 = Monomial::from_exps(&[0, 1, 1]).unwrap();
        assert_ne!(g.monomial_key(&m2), g.inverse_target(0, 1, 1));
    }
}
