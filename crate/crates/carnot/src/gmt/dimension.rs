//! Box-counting dimension estimation by log-log regression over covering
//! numbers, and the spherical Hausdorff pre-measure estimator.

use crate::algebra::{GroupPoint, StratifiedAlgebra};
use crate::error::{Error, Result};
use crate::metric::{covering_number, HomogeneousQuasiNorm};
use crate::scalar::{rf, RealScalar};

#[derive(Clone, Debug)]
pub struct DimEstimate<R> {
    pub scales: Vec<R>,
    pub counts: Vec<usize>,
    /// Slope of `log N` against `log(1/r)`.
    pub slope: R,
    /// Two standard errors of the slope.
    pub half_width: R,
    /// Root-mean-square regression residual.
    pub residual: R,
}

/// Least-squares slope of `y` against `x` with the diagnostics used by the
/// dimension estimate. Errors on degenerate predictors.
pub fn log_log_slope<R: RealScalar>(x: &[R], y: &[R]) -> Result<(R, R, R)> {
    let k = x.len();
    if k < 2 || y.len() != k {
        return Err(Error::Domain("regression needs at least two matched samples".into()));
    }
    let kf = rf::<R>(k as f64);
    let xbar = x.iter().fold(R::zero(), |a, v| a + *v) / kf;
    let ybar = y.iter().fold(R::zero(), |a, v| a + *v) / kf;
    let sxx = x.iter().fold(R::zero(), |a, v| a + (*v - xbar) * (*v - xbar));
    if !(sxx > R::zero()) {
        return Err(Error::Domain("degenerate regression: zero variance in the scales".into()));
    }
    let sxy = x
        .iter()
        .zip(y)
        .fold(R::zero(), |a, (u, v)| a + (*u - xbar) * (*v - ybar));
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let mut ssr = R::zero();
    for (u, v) in x.iter().zip(y) {
        let e = *v - (intercept + slope * *u);
        ssr = ssr + e * e;
    }
    let residual = (ssr / kf).sqrt();
    let half_width = if k > 2 {
        rf::<R>(2.0) * (ssr / rf::<R>((k - 2) as f64) / sxx).sqrt()
    } else {
        R::zero()
    };
    Ok((slope, half_width, residual))
}

/// Box-counting dimension of a sampled set: covering numbers at the given
/// scales, slope of `log N(r)` vs `log(1/r)`. Scales must number at least
/// four and span at least two decades.
pub fn box_dimension<R: RealScalar>(
    norm: &HomogeneousQuasiNorm<R>,
    alg: &StratifiedAlgebra<R>,
    points: &[GroupPoint<R>],
    scales: &[R],
) -> Result<DimEstimate<R>> {
    if points.is_empty() {
        return Err(Error::Domain("cannot estimate dimension of an empty sample".into()));
    }
    if scales.len() < 4 {
        return Err(Error::Domain("need at least 4 scales".into()));
    }
    let mut sorted: Vec<R> = scales.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    if !(sorted[sorted.len() - 1] > R::zero()) {
        return Err(Error::Domain("scales must be positive".into()));
    }
    if sorted[0] / sorted[sorted.len() - 1] < rf::<R>(99.99) {
        return Err(Error::Domain("scales must span at least two decades".into()));
    }
    let mut counts = Vec::with_capacity(sorted.len());
    for &r in &sorted {
        counts.push(covering_number(norm, alg, points, r)?);
    }
    let x: Vec<R> = sorted.iter().map(|r| (R::one() / *r).ln()).collect();
    let y: Vec<R> = counts.iter().map(|&c| rf::<R>(c as f64).ln()).collect();
    let (slope, half_width, residual) = log_log_slope(&x, &y)?;
    Ok(DimEstimate { scales: sorted, counts, slope, half_width, residual })
}

/// Upper estimate of the spherical Hausdorff pre-measure `S^q_delta`:
/// greedy-cover the set at the finest admissible scale and sum
/// `(diam B)^q` with the quasi-constant folded into the diameter.
pub fn spherical_premeasure<R: RealScalar>(
    norm: &HomogeneousQuasiNorm<R>,
    alg: &StratifiedAlgebra<R>,
    points: &[GroupPoint<R>],
    q: R,
    delta: R,
    quasi_k: R,
) -> Result<R> {
    if !(q >= R::zero()) {
        return Err(Error::Domain("exponent q must be nonnegative".into()));
    }
    if !(delta > R::zero()) {
        return Err(Error::Domain("delta must be positive".into()));
    }
    let k = if quasi_k > R::one() { quasi_k } else { R::one() };
    let r = delta / (rf::<R>(2.0) * k);
    let n = covering_number(norm, alg, points, r)?;
    // each covering ball has diameter at most 2 K r = delta
    Ok(rf::<R>(n as f64) * delta.powf(q))
}
