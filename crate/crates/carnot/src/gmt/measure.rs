//! Intrinsic and Riemannian surface measures of chart pieces, by tensor
//! midpoint quadrature or seeded Monte Carlo.

use crate::algebra::StratifiedAlgebra;
use crate::error::{Error, Result};
use crate::exterior::{degree_profile, project_degree, wedge};
use crate::linalg::Mat;
use crate::manifold::{tangent_frame_matrix, Chart};
use crate::parallel;
use crate::scalar::{rf, RealScalar};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Estimator {
    TensorQuadrature,
    MonteCarlo,
}

impl std::fmt::Display for Estimator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Estimator::TensorQuadrature => write!(f, "tensor-quadrature"),
            Estimator::MonteCarlo => write!(f, "monte-carlo"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum EstimatorSpec {
    /// Midpoint rule with `grid` cells per axis.
    Quadrature { grid: usize },
    /// Uniform sampling with a fixed seed.
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct MeasureResult<R> {
    pub value: R,
    pub estimator: Estimator,
    pub samples: usize,
    /// Reported for Monte Carlo only.
    pub std_error: Option<R>,
}

fn check_region<R: RealScalar>(chart: &Chart<R>, region: &[(R, R)]) -> Result<()> {
    if region.len() != chart.params() {
        return Err(Error::DimensionMismatch(format!(
            "region has {} intervals for {} parameters",
            region.len(),
            chart.params()
        )));
    }
    for ((lo, hi), (dlo, dhi)) in region.iter().zip(chart.domain()) {
        if !(lo < hi) {
            return Err(Error::Domain("region intervals must be nonempty".into()));
        }
        if lo < dlo || hi > dhi {
            return Err(Error::Domain("region exceeds the chart domain".into()));
        }
    }
    Ok(())
}

/// Integrates `f` over the parameter box with the chosen estimator.
pub(crate) fn integrate<R: RealScalar>(
    region: &[(R, R)],
    spec: EstimatorSpec,
    f: impl Fn(&[R]) -> R + Sync,
) -> MeasureResult<R> {
    let p = region.len();
    let vol = region.iter().fold(R::one(), |acc, (lo, hi)| acc * (*hi - *lo));
    match spec {
        EstimatorSpec::Quadrature { grid } => {
            let grid = grid.max(1);
            let cells = grid.pow(p as u32);
            let values = parallel::map_indexed(cells, |flat| {
                let mut rem = flat;
                let mut t = Vec::with_capacity(p);
                for (lo, hi) in region {
                    let i = rem % grid;
                    rem /= grid;
                    let frac = rf::<R>((i as f64 + 0.5) / grid as f64);
                    t.push(*lo + (*hi - *lo) * frac);
                }
                f(&t)
            });
            let sum = values.into_iter().fold(R::zero(), |a, v| a + v);
            MeasureResult {
                value: sum * vol / rf::<R>(cells as f64),
                estimator: Estimator::TensorQuadrature,
                samples: cells,
                std_error: None,
            }
        }
        EstimatorSpec::MonteCarlo { samples, seed } => {
            let samples = samples.max(2);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let points: Vec<Vec<R>> = (0..samples)
                .map(|_| {
                    region
                        .iter()
                        .map(|(lo, hi)| {
                            *lo + (*hi - *lo) * rf::<R>(rng.random_range(0.0..1.0))
                        })
                        .collect()
                })
                .collect();
            let values = parallel::map_indexed(samples, |i| f(&points[i]));
            let mean = values.iter().fold(R::zero(), |a, v| a + *v) / rf::<R>(samples as f64);
            let var = values.iter().fold(R::zero(), |a, v| a + (*v - mean) * (*v - mean))
                / rf::<R>((samples - 1) as f64);
            MeasureResult {
                value: mean * vol,
                estimator: Estimator::MonteCarlo,
                samples,
                std_error: Some(vol * (var / rf::<R>(samples as f64)).sqrt()),
            }
        }
    }
}

/// The intrinsic measure of the chart piece over `region`: the integral of
/// the norm of the degree-`degree` part of the tangent p-vector in the
/// left-invariant frame. Rank-deficient points contribute zero.
pub fn intrinsic_measure<R: RealScalar>(
    alg: &StratifiedAlgebra<R>,
    chart: &Chart<R>,
    region: &[(R, R)],
    degree: usize,
    spec: EstimatorSpec,
) -> Result<MeasureResult<R>> {
    check_region(chart, region)?;
    let profile = degree_profile(alg, chart.params())?;
    if degree < profile.p || degree > profile.max_degree {
        return Err(Error::Domain(format!(
            "projection degree {degree} outside [{}, {}]",
            profile.p, profile.max_degree
        )));
    }
    let integrand = |t: &[R]| -> R {
        let c = match tangent_frame_matrix(alg, chart, t) {
            Ok(c) => c,
            Err(_) => return R::zero(),
        };
        let mv = match wedge(&c.columns()) {
            Ok(mv) => mv,
            Err(_) => return R::zero(),
        };
        project_degree(alg, &mv, degree).norm()
    };
    Ok(integrate(region, spec, integrand))
}

/// Riemannian surface measure induced by a constant coordinate metric
/// (symmetric positive definite); the identity reproduces the Euclidean
/// surface measure.
pub fn riemannian_measure<R: RealScalar>(
    alg: &StratifiedAlgebra<R>,
    chart: &Chart<R>,
    region: &[(R, R)],
    metric: &Mat<R>,
    spec: EstimatorSpec,
) -> Result<MeasureResult<R>> {
    check_region(chart, region)?;
    if chart.ambient_dim() != alg.dim() {
        return Err(Error::DimensionMismatch("chart does not map into the group".into()));
    }
    check_spd(metric, alg.dim())?;
    let integrand = |t: &[R]| area_element(chart, metric, t);
    Ok(integrate(region, spec, integrand))
}

/// `sqrt(det(J^T G J))` at `t`.
pub(crate) fn area_element<R: RealScalar>(chart: &Chart<R>, metric: &Mat<R>, t: &[R]) -> R {
    let j = chart.jacobian(t);
    let g = j.transpose().matmul(&metric.matmul(&j));
    let d = g.det();
    if d > R::zero() {
        d.sqrt()
    } else {
        R::zero()
    }
}

pub(crate) fn check_spd<R: RealScalar>(metric: &Mat<R>, n: usize) -> Result<()> {
    if metric.nrows() != n || metric.ncols() != n {
        return Err(Error::DimensionMismatch(format!("metric must be {n} x {n}")));
    }
    for i in 0..n {
        for j in 0..n {
            if (metric[(i, j)] - metric[(j, i)]).abs() > rf::<R>(1e-12) {
                return Err(Error::Domain("metric matrix must be symmetric".into()));
            }
        }
    }
    // Cholesky factorization succeeds exactly for positive definite input
    let mut a = metric.clone();
    for k in 0..n {
        let mut d = a[(k, k)];
        for s in 0..k {
            d = d - a[(k, s)] * a[(k, s)];
        }
        if !(d > R::zero()) {
            return Err(Error::Domain("metric matrix is not positive definite".into()));
        }
        let l = d.sqrt();
        a[(k, k)] = l;
        for i in k + 1..n {
            let mut v = a[(i, k)];
            for s in 0..k {
                v = v - a[(i, s)] * a[(k, s)];
            }
            a[(i, k)] = v / l;
        }
    }
    Ok(())
}
