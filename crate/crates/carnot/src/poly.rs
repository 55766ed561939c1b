//! Sparse multivariate polynomials used for the baked group-law tables
//! and for polynomial charts. Monomials are exponent vectors over a fixed
//! variable count; the term map is ordered so polynomial identity is
//! structural equality.

use crate::scalar::Scalar;
use num_rational::BigRational;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S: Scalar> {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range {nvars}");
        let mut e = vec![0u16; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(e, S::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u16], &S)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    fn insert_term(&mut self, e: Vec<u16>, c: S) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, k: &S) -> Self {
        if k.is_zero() {
            return Poly::zero(self.nvars);
        }
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.clone() * k.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u16> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn eval(&self, x: &[S]) -> S {
        assert_eq!(x.len(), self.nvars, "evaluation point has wrong arity");
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (v, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    term *= x[v].powi(exp as u32);
                }
            }
            acc += term;
        }
        acc
    }

    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.nvars);
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.insert_term(e2, c.clone() * S::from_int(e[i] as i64));
        }
        out
    }

    /// Keeps the terms free of variables `>= keep`, reindexed onto `keep`
    /// variables (i.e. substitutes zero for the tail variables).
    pub fn restrict_to_prefix(&self, keep: usize) -> Poly<S> {
        assert!(keep <= self.nvars);
        let mut out = Poly::zero(keep);
        for (e, c) in &self.terms {
            if e[keep..].iter().all(|&x| x == 0) {
                out.insert_term(e[..keep].to_vec(), c.clone());
            }
        }
        out
    }

    /// Variables with a nonzero exponent somewhere.
    pub fn support(&self) -> Vec<usize> {
        let mut used = vec![false; self.nvars];
        for (e, _) in &self.terms {
            for (v, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    used[v] = true;
                }
            }
        }
        used.iter().enumerate().filter(|(_, &u)| u).map(|(v, _)| v).collect()
    }

    /// True when every monomial has weighted degree `deg` under the given
    /// per-variable weights (the empty polynomial is homogeneous of any degree).
    pub fn is_weighted_homogeneous(&self, weights: &[usize], deg: usize) -> bool {
        assert_eq!(weights.len(), self.nvars);
        self.terms.iter().all(|(e, _)| {
            e.iter().zip(weights).map(|(&x, &w)| x as usize * w).sum::<usize>() == deg
        })
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let c2 = f(c);
            if !c2.is_zero() {
                out.terms.insert(e.clone(), c2);
            }
        }
        out
    }
}

impl Poly<BigRational> {
    pub fn convert<T: Scalar>(&self) -> Poly<T> {
        self.map_coeffs(|c| T::from_rational(c))
    }
}

/// Flat term list for the evaluation hot paths (no map traversal, no
/// per-call allocation). Variable indices below the split read from the
/// first slice, the rest from the second.
#[derive(Clone, Debug)]
pub(crate) struct FastPoly<S> {
    terms: Vec<(S, Box<[(u32, u32)]>)>,
}

impl<S: Scalar> FastPoly<S> {
    pub(crate) fn compile(poly: &Poly<S>) -> Self {
        let terms = poly
            .terms
            .iter()
            .map(|(e, c)| {
                let factors: Box<[(u32, u32)]> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &exp)| exp > 0)
                    .map(|(v, &exp)| (v as u32, exp as u32))
                    .collect();
                (c.clone(), factors)
            })
            .collect();
        FastPoly { terms }
    }

    /// Evaluates with the variable vector split as `[a, b]`.
    pub(crate) fn eval_split(&self, a: &[S], b: &[S]) -> S {
        let na = a.len();
        let mut acc = S::zero();
        for (c, factors) in &self.terms {
            let mut term = c.clone();
            for &(v, exp) in factors.iter() {
                let v = v as usize;
                let base = if v < na { &a[v] } else { &b[v - na] };
                term *= if exp == 1 { base.clone() } else { base.powi(exp) };
            }
            acc += term;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn x(i: usize) -> Poly<f64> {
        Poly::var(3, i)
    }

    #[test]
    fn arithmetic_and_eval() {
        // p = x0^2 * x1 - 2 x2
        let p = x(0).mul(&x(0)).mul(&x(1)).sub(&x(2).scale(&2.0));
        assert_eq!(p.eval(&[2.0, 3.0, 5.0]), 12.0 - 10.0);
        let dp0 = p.partial(0);
        assert_eq!(dp0.eval(&[2.0, 3.0, 5.0]), 12.0);
        let dp2 = p.partial(2);
        assert_eq!(dp2.eval(&[0.0, 0.0, 0.0]), -2.0);
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = x(0).add(&x(0).scale(&-1.0));
        assert!(p.is_zero());
    }

    #[test]
    fn restriction_drops_tail_variables() {
        // q = x0 x2 + x1  -> restricted to 2 vars: x1
        let q = x(0).mul(&x(2)).add(&x(1));
        let r = q.restrict_to_prefix(2);
        assert_eq!(r.eval(&[7.0, 4.0]), 4.0);
    }

    #[test]
    fn weighted_homogeneity() {
        let q = x(0).mul(&x(1)); // weights (1,1,2): degree 2
        assert!(q.is_weighted_homogeneous(&[1, 1, 2], 2));
        assert!(!q.add(&x(2)).is_weighted_homogeneous(&[1, 1, 2], 3));
        assert!(x(2).is_weighted_homogeneous(&[1, 1, 2], 2));
    }

    #[test]
    fn exact_conversion() {
        let p: Poly<BigRational> = Poly::var(2, 0).scale(&BigRational::ratio(1, 2));
        let q: Poly<f64> = p.convert();
        assert_eq!(q.eval(&[3.0, 0.0]), 1.5);
        assert!(BigRational::one().is_one());
    }
}
