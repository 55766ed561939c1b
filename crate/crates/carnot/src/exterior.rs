//! Multivector calculus over the graded exterior algebra: wedge products
//! as minor enumeration, homogeneous-degree projections, the dilation
//! action, left translation of multivectors, and the degree profile
//! (ell(p), r_p, D(p), subdegrees) of each grade.

use crate::algebra::{GroupPoint, StratifiedAlgebra};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::{RealScalar, Scalar};
use std::collections::BTreeMap;

/// Strictly increasing multi-index (0-based entries).
pub type MultiIndex = Vec<usize>;

/// All multi-indices of length `p` over `0..n`, lexicographic.
pub fn multi_indices(n: usize, p: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    if p == 0 || p > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..p).collect();
    loop {
        out.push(idx.clone());
        // advance
        let mut i = p;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - p {
                break;
            }
        }
        if idx[i] == i + n - p {
            return out;
        }
        idx[i] += 1;
        for j in i + 1..p {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Degree `d(alpha)` of a multi-index under the algebra's grading.
pub fn index_degree<S: Scalar>(alg: &StratifiedAlgebra<S>, alpha: &[usize]) -> usize {
    alpha.iter().map(|&i| alg.degree_of(i)).sum()
}

/// Sparse element of `Lambda_p` over the graded basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Multivector<S: Scalar> {
    p: usize,
    n: usize,
    coeffs: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> Multivector<S> {
    pub fn zero(n: usize, p: usize) -> Self {
        Multivector { p, n, coeffs: BTreeMap::new() }
    }

    pub fn grade(&self) -> usize {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, alpha: &[usize]) -> S {
        self.coeffs.get(alpha).cloned().unwrap_or_else(S::zero)
    }

    pub fn set_coeff(&mut self, alpha: MultiIndex, c: S) {
        assert_eq!(alpha.len(), self.p, "multi-index grade mismatch");
        assert!(alpha.windows(2).all(|w| w[0] < w[1]), "multi-index must increase");
        assert!(alpha.iter().all(|&i| i < self.n), "multi-index out of range");
        if c.is_zero() {
            self.coeffs.remove(&alpha);
        } else {
            self.coeffs.insert(alpha, c);
        }
    }

    pub fn add_coeff(&mut self, alpha: MultiIndex, c: S) {
        if c.is_zero() {
            return;
        }
        let cur = self.coeff(&alpha);
        self.set_coeff(alpha, cur + c);
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.p, self.n), (other.p, other.n));
        let mut out = self.clone();
        for (a, c) in &other.coeffs {
            out.add_coeff(a.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &S) -> Self {
        let mut out = Multivector::zero(self.n, self.p);
        if k.is_zero() {
            return out;
        }
        for (a, c) in &self.coeffs {
            out.coeffs.insert(a.clone(), c.clone() * k.clone());
        }
        out
    }

    pub fn norm_squared(&self) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.values() {
            acc += c.clone() * c.clone();
        }
        acc
    }

    pub fn max_abs_coeff(&self) -> S {
        let mut m = S::zero();
        for c in self.coeffs.values() {
            let a = c.abs();
            if a > m {
                m = a;
            }
        }
        m
    }

    /// Drops coefficients negligible relative to the largest one.
    pub fn pruned(&self, rel_tol: f64) -> Self {
        let scale = self.max_abs_coeff();
        let mut out = Multivector::zero(self.n, self.p);
        for (a, c) in &self.coeffs {
            if !c.is_negligible(&scale, rel_tol) {
                out.coeffs.insert(a.clone(), c.clone());
            }
        }
        out
    }
}

impl<R: RealScalar> Multivector<R> {
    /// Euclidean norm of the coefficient vector (graded basis orthonormal).
    pub fn norm(&self) -> R {
        self.norm_squared().sqrt()
    }
}

/// Wedge of `p` tangent coefficient vectors: `c_alpha` is the `p x p`
/// minor of the column matrix selecting rows `alpha`.
pub fn wedge<S: Scalar>(columns: &[Vec<S>]) -> Result<Multivector<S>> {
    let p = columns.len();
    if p == 0 {
        return Err(Error::Domain("wedge of zero vectors is undefined here".into()));
    }
    let n = columns[0].len();
    if columns.iter().any(|c| c.len() != n) {
        return Err(Error::DimensionMismatch("wedge vectors must share their length".into()));
    }
    if p > n {
        return Err(Error::Domain(format!("cannot wedge {p} vectors in dimension {n}")));
    }
    let mut out = Multivector::zero(n, p);
    for alpha in multi_indices(n, p) {
        let mut minor = Mat::zeros(p, p);
        for (r, &i) in alpha.iter().enumerate() {
            for (c, col) in columns.iter().enumerate() {
                minor[(r, c)] = col[i].clone();
            }
        }
        let d = minor.det();
        if !d.is_zero() {
            out.coeffs.insert(alpha, d);
        }
    }
    Ok(out)
}

/// Keeps exactly the coefficients of degree `d`. Out-of-range degrees
/// yield the zero multivector.
pub fn project_degree<S: Scalar>(
    alg: &StratifiedAlgebra<S>,
    v: &Multivector<S>,
    d: usize,
) -> Multivector<S> {
    let mut out = Multivector::zero(v.n, v.p);
    for (a, c) in &v.coeffs {
        if index_degree(alg, a) == d {
            out.coeffs.insert(a.clone(), c.clone());
        }
    }
    out
}

/// Dilation action: `c_alpha -> r^{d(alpha)} c_alpha`.
pub fn dilate_multivector<S: Scalar>(
    alg: &StratifiedAlgebra<S>,
    v: &Multivector<S>,
    r: &S,
) -> Result<Multivector<S>> {
    if !(*r > S::zero()) {
        return Err(Error::Domain(format!("dilation factor must be positive, got {r}")));
    }
    let mut out = Multivector::zero(v.n, v.p);
    for (a, c) in &v.coeffs {
        out.coeffs.insert(a.clone(), c.clone() * r.powi(index_degree(alg, a) as u32));
    }
    Ok(out)
}

/// Maximum degree among non-negligible coefficients; `None` for the zero
/// multivector. Exact scalars ignore the tolerance.
pub fn multivector_degree<S: Scalar>(
    alg: &StratifiedAlgebra<S>,
    v: &Multivector<S>,
    rel_tol: f64,
) -> Option<usize> {
    let scale = v.max_abs_coeff();
    if scale.is_zero() {
        return None;
    }
    let mut best = None;
    for (a, c) in &v.coeffs {
        if !c.is_negligible(&scale, rel_tol) {
            let d = index_degree(alg, a);
            best = Some(best.map_or(d, |b: usize| b.max(d)));
        }
    }
    best
}

/// Applies `Lambda_p` of a square matrix to a multivector: each basis
/// wedge `X_alpha` maps to the wedge of the matrix columns `alpha`.
pub fn apply_linear_map<S: Scalar>(m: &Mat<S>, v: &Multivector<S>) -> Result<Multivector<S>> {
    if m.ncols() != v.n || m.nrows() != v.n {
        return Err(Error::DimensionMismatch("matrix does not act on this multivector".into()));
    }
    let mut out = Multivector::zero(v.n, v.p);
    for (alpha, c) in &v.coeffs {
        let cols: Vec<Vec<S>> = alpha.iter().map(|&i| m.column(i)).collect();
        let w = wedge(&cols)?;
        for (beta, d) in w.coeffs {
            out.add_coeff(beta, d * c.clone());
        }
    }
    Ok(out)
}

/// Translates a multivector at the origin to the point `x` through
/// `Lambda_p dl_x` (the left-invariant frame matrix).
pub fn push_to_point<S: Scalar>(
    alg: &StratifiedAlgebra<S>,
    x: &GroupPoint<S>,
    v: &Multivector<S>,
) -> Result<Multivector<S>> {
    apply_linear_map(&alg.frame_matrix(x), v)
}

/// Translates a multivector at `x` back to the origin through
/// `Lambda_p dl_{x^{-1}}`.
pub fn pull_to_origin<S: Scalar>(
    alg: &StratifiedAlgebra<S>,
    x: &GroupPoint<S>,
    v: &Multivector<S>,
) -> Result<Multivector<S>> {
    apply_linear_map(&alg.frame_matrix_inverse(x), v)
}

/// Maximal degree `D(p)` by brute-force enumeration of `I_p`; the
/// independent cross-check for the closed formula.
pub fn brute_force_max_degree<S: Scalar>(alg: &StratifiedAlgebra<S>, p: usize) -> Result<usize> {
    if p == 0 || p > alg.dim() {
        return Err(Error::Domain(format!("grade {p} out of range 1..={}", alg.dim())));
    }
    Ok(multi_indices(alg.dim(), p)
        .into_iter()
        .map(|a| index_degree(alg, &a))
        .max()
        .expect("nonempty index set"))
}

/// The degree bookkeeping of a grade: `ell(p)`, `r_p`, `D(p)`, the
/// transversal subdegree list and the associated `mu_k` prefix counts.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeProfile {
    pub p: usize,
    pub ell: usize,
    pub r_p: usize,
    /// `D(p)`, the maximal degree of a grade-`p` multi-index.
    pub max_degree: usize,
    /// Transversal subdegrees: `r_p` copies of `ell`, then `n_j` copies of
    /// each layer `j > ell`; sums to `D(p)`.
    pub subdegrees: Vec<usize>,
    /// `mu_0..mu_step` for the transversal rank pattern.
    pub mu: Vec<usize>,
    layers: Vec<usize>,
}

impl DegreeProfile {
    pub fn layers(&self) -> &[usize] {
        &self.layers
    }

    /// The transversal layer-rank pattern `alpha_k` (0 below `ell`, `r_p`
    /// at `ell`, full layer dimension above).
    pub fn transversal_ranks(&self) -> Vec<usize> {
        let step = self.layers.len();
        let mut a = vec![0usize; step];
        a[self.ell - 1] = self.r_p;
        for j in self.ell..step {
            a[j] = self.layers[j];
        }
        a
    }
}

pub fn degree_profile<S: Scalar>(alg: &StratifiedAlgebra<S>, p: usize) -> Result<DegreeProfile> {
    let n = alg.dim();
    if p == 0 || p > n {
        return Err(Error::Domain(format!("grade {p} out of range 1..={n}")));
    }
    let layers = alg.layer_dims().to_vec();
    let step = layers.len();
    // suffix[j] = n_{j+1} + ... + n_step  (1-based layer j)
    let suffix = |j: usize| -> usize { layers[j..].iter().sum() };
    let ell = if p <= layers[step - 1] {
        step
    } else {
        (1..=step)
            .find(|&l| suffix(l) < p && p <= suffix(l - 1))
            .expect("ell exists for 1 <= p <= n")
    };
    // Equivalent characterization: the degree of basis index n+1-p.
    let ell_alt = alg.degree_of(n - p);
    assert_eq!(ell, ell_alt, "the two ell(p) formulas must agree");

    let r_p = p - suffix(ell);
    let tail: usize = (ell + 1..=step).map(|j| j * layers[j - 1]).sum();
    let max_degree = ell * r_p + tail;

    let mut subdegrees = vec![ell; r_p];
    for j in ell + 1..=step {
        subdegrees.extend(std::iter::repeat(j).take(layers[j - 1]));
    }
    debug_assert_eq!(subdegrees.len(), p);
    debug_assert_eq!(subdegrees.iter().sum::<usize>(), max_degree);

    let mut mu = vec![0usize; step + 1];
    for k in 1..=step {
        mu[k] = mu[k - 1]
            + if k < ell {
                0
            } else if k == ell {
                r_p
            } else {
                layers[k - 1]
            };
    }

    Ok(DegreeProfile { p, ell, r_p, max_degree, subdegrees, mu, layers })
}

/// Subdilation `lambda_r`: coordinate `j` of the chart parameter scales by
/// `r^{sigma_j}`.
pub fn subdilate<S: Scalar>(profile: &DegreeProfile, r: &S, xi: &[S]) -> Result<Vec<S>> {
    if !(*r > S::zero()) {
        return Err(Error::Domain(format!("subdilation factor must be positive, got {r}")));
    }
    if xi.len() != profile.p {
        return Err(Error::DimensionMismatch(format!(
            "subdilation expects {} parameters, got {}",
            profile.p,
            xi.len()
        )));
    }
    Ok(xi
        .iter()
        .zip(&profile.subdegrees)
        .map(|(v, &s)| v.clone() * r.powi(s as u32))
        .collect())
}
