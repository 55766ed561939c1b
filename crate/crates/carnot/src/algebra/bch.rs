//! Exact construction of the polynomial group law on a stratified algebra.
//!
//! The product in exponential coordinates of the first kind is
//! `x . y = x + y + Q(x, y)` where `Q` collects every bracket term of the
//! Baker-Campbell-Hausdorff series. On a step-`s` nilpotent algebra any
//! bracket of more than `s` letters vanishes, so the Dynkin expansion
//! truncated at `s` letters is the exact group law, not an approximation.
//! All coefficients are rationals; the caller bakes them into whatever
//! scalar it runs on.

use crate::poly::Poly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;

type Q = BigRational;
/// An algebra element whose coordinates are polynomials in the 2n symbols
/// (x_1..x_n, y_1..y_n).
type Elem = Vec<Poly<Q>>;

/// Structure constants, antisymmetrically closed: (i, j) -> [(k, c_ij^k)].
#[derive(Clone, Debug, Default)]
pub(crate) struct BracketTable {
    pub table: BTreeMap<(usize, usize), Vec<(usize, Q)>>,
}

impl BracketTable {
    /// Bracket of two polynomial-coefficient elements.
    fn bracket(&self, n: usize, nvars: usize, u: &Elem, v: &Elem) -> Elem {
        let mut out: Elem = vec![Poly::zero(nvars); n];
        for (&(i, j), entries) in &self.table {
            if u[i].is_zero() || v[j].is_zero() {
                continue;
            }
            let prod = u[i].mul(&v[j]);
            for (k, c) in entries {
                if c.is_zero() {
                    continue;
                }
                out[*k] = out[*k].add(&prod.scale(c));
            }
        }
        out
    }

    /// Bracket of two numeric coordinate vectors over any scalar, converting
    /// the exact constants on the fly.
    pub fn bracket_vectors<S: crate::scalar::Scalar>(&self, n: usize, u: &[S], v: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); n];
        for (&(i, j), entries) in &self.table {
            let prod = u[i].clone() * v[j].clone();
            if prod.is_zero() {
                continue;
            }
            for (k, c) in entries {
                out[*k] += prod.clone() * S::from_rational(c);
            }
        }
        out
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> Q {
        self.table
            .get(&(i, j))
            .and_then(|v| v.iter().find(|(kk, _)| *kk == k).map(|(_, c)| c.clone()))
            .unwrap_or_else(Q::zero)
    }
}

fn factorial(k: usize) -> Q {
    let mut acc = BigInt::from(1);
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    BigRational::from_integer(acc)
}

/// Accumulates Dynkin coefficients per letter word. Letters: `false` = X,
/// `true` = Y. Multiple block decompositions contribute to the same word.
fn dynkin_word_coefficients(step: usize) -> BTreeMap<Vec<bool>, Q> {
    let mut coeffs: BTreeMap<Vec<bool>, Q> = BTreeMap::new();
    // One stack frame per block sequence: (word so far, weight, #blocks, product of r_i! s_i!).
    let mut stack: Vec<(Vec<bool>, usize, usize, Q)> =
        vec![(Vec::new(), 0, 0, BigRational::from_integer(BigInt::from(1)))];
    while let Some((word, weight, nblocks, fact)) = stack.pop() {
        if nblocks > 0 {
            let m = weight;
            let sign = if nblocks % 2 == 1 { 1 } else { -1 };
            let denom = fact.clone()
                * BigRational::from_integer(BigInt::from(nblocks as i64 * m as i64));
            let c = BigRational::from_integer(BigInt::from(sign)) / denom;
            *coeffs.entry(word.clone()).or_insert_with(Q::zero) += c;
        }
        // Extend with one more block (r, s), r + s >= 1, within the weight budget.
        for r in 0..=(step - weight) {
            for s in 0..=(step - weight - r) {
                if r + s == 0 {
                    continue;
                }
                let mut w2 = word.clone();
                w2.extend(std::iter::repeat(false).take(r));
                w2.extend(std::iter::repeat(true).take(s));
                let f2 = fact.clone() * factorial(r) * factorial(s);
                stack.push((w2, weight + r + s, nblocks + 1, f2));
            }
        }
    }
    coeffs
}

/// Full group-law coordinates `z_l(x, y)` of the truncated BCH series,
/// as polynomials in 2n variables. `z = x + y + Q(x, y)`.
pub(crate) fn bch_group_law(n: usize, step: usize, brackets: &BracketTable) -> Vec<Poly<Q>> {
    let nvars = 2 * n;
    let x_elem: Elem = (0..n).map(|i| Poly::var(nvars, i)).collect();
    let y_elem: Elem = (0..n).map(|i| Poly::var(nvars, n + i)).collect();

    let mut z: Elem = vec![Poly::zero(nvars); n];
    for (word, coeff) in dynkin_word_coefficients(step) {
        if coeff.is_zero() {
            continue;
        }
        // Right-nested bracket [w_1, [w_2, ... [w_{m-1}, w_m] ...]].
        let letter = |b: bool| -> &Elem {
            if b {
                &y_elem
            } else {
                &x_elem
            }
        };
        let mut acc: Elem = letter(*word.last().unwrap()).clone();
        let mut vanished = false;
        for &w in word[..word.len() - 1].iter().rev() {
            acc = brackets.bracket(n, nvars, letter(w), &acc);
            if acc.iter().all(Poly::is_zero) {
                vanished = true;
                break;
            }
        }
        if vanished {
            continue;
        }
        for l in 0..n {
            if !acc[l].is_zero() {
                z[l] = z[l].add(&acc[l].scale(&coeff));
            }
        }
    }
    z
}
