//! The metric factor: Euclidean p-area of a tangent plane section of the
//! unit quasi-ball, estimated by seeded Monte Carlo over a circumscribing
//! box.

use crate::algebra::{GroupPoint, StratifiedAlgebra};
use crate::error::{Error, Result};
use crate::exterior::{multi_indices, Multivector};
use crate::linalg::{orthonormalize, Mat};
use crate::metric::{box_ball_constant, HomogeneousQuasiNorm};
use crate::parallel;
use crate::scalar::{rf, RealScalar};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
pub struct McParams {
    pub samples: usize,
    pub seed: u64,
}

impl Default for McParams {
    fn default() -> Self {
        McParams { samples: 200_000, seed: 0 }
    }
}

/// Wedge `v ^ tau` of a vector with a grade-p multivector.
fn wedge_vector<R: RealScalar>(v: &[R], tau: &Multivector<R>) -> Multivector<R> {
    let n = tau.dim();
    let mut out = Multivector::zero(n, tau.grade() + 1);
    for (alpha, c) in tau.coeffs() {
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() || alpha.contains(&i) {
                continue;
            }
            let mut beta = alpha.clone();
            let pos = beta.partition_point(|&j| j < i);
            beta.insert(pos, i);
            let sign = if pos % 2 == 0 { R::one() } else { -R::one() };
            out.add_coeff(beta, sign * *vi * *c);
        }
    }
    out
}

/// Recovers the plane of a simple multivector as the kernel of
/// `v -> v ^ tau`; a kernel of dimension other than `p` means `tau` is not
/// simple. For grade 2 the Plucker quadrics are checked first.
fn plane_of_simple<R: RealScalar>(tau: &Multivector<R>, rel_tol: f64) -> Result<Vec<Vec<R>>> {
    let n = tau.dim();
    let p = tau.grade();
    if tau.is_zero() {
        return Err(Error::Domain("metric factor of the zero multivector".into()));
    }
    if p == 2 {
        let scale = tau.max_abs_coeff() * tau.max_abs_coeff();
        for q in multi_indices(n, 4) {
            let (i, j, k, l) = (q[0], q[1], q[2], q[3]);
            let pl = tau.coeff(&[i, j]) * tau.coeff(&[k, l])
                - tau.coeff(&[i, k]) * tau.coeff(&[j, l])
                + tau.coeff(&[i, l]) * tau.coeff(&[j, k]);
            if !pl.is_negligible(&scale, rel_tol) {
                return Err(Error::Domain(
                    "multivector is not simple (Plucker relation fails)".into(),
                ));
            }
        }
    }
    if p == n {
        // top grade: the plane is the whole space
        return Ok((0..n)
            .map(|i| {
                let mut e = vec![R::zero(); n];
                e[i] = R::one();
                e
            })
            .collect());
    }
    // rows: coefficients of e_i ^ tau as i varies -> columns of the map
    let idx = multi_indices(n, p + 1);
    let row_of: std::collections::HashMap<Vec<usize>, usize> =
        idx.iter().cloned().enumerate().map(|(r, a)| (a, r)).collect();
    let mut m = Mat::zeros(idx.len(), n);
    for i in 0..n {
        let mut e = vec![R::zero(); n];
        e[i] = R::one();
        let w = wedge_vector(&e, tau);
        for (beta, c) in w.coeffs() {
            m[(row_of[beta], i)] = *c;
        }
    }
    let kernel = m.null_space(rel_tol);
    if kernel.len() != p {
        return Err(Error::Domain(format!(
            "multivector is not simple (annihilator has dimension {}, expected {p})",
            kernel.len()
        )));
    }
    Ok(kernel)
}

/// Metric factor of a simple multivector: the Euclidean p-area of its
/// plane intersected with the open unit ball of the quasi-norm.
pub fn metric_factor<R: RealScalar>(
    alg: &StratifiedAlgebra<R>,
    norm: &HomogeneousQuasiNorm<R>,
    tau: &Multivector<R>,
    params: &McParams,
) -> Result<R> {
    if tau.dim() != alg.dim() {
        return Err(Error::DimensionMismatch("multivector does not live in this group".into()));
    }
    let span = plane_of_simple(tau, 1e-10)?;
    metric_factor_of_span(alg, norm, &span, params)
}

/// Metric factor of the plane spanned by the given vectors.
pub fn metric_factor_of_span<R: RealScalar>(
    alg: &StratifiedAlgebra<R>,
    norm: &HomogeneousQuasiNorm<R>,
    span: &[Vec<R>],
    params: &McParams,
) -> Result<R> {
    let n = alg.dim();
    if span.is_empty() || span.iter().any(|v| v.len() != n) {
        return Err(Error::DimensionMismatch("spanning vectors must have length n".into()));
    }
    let span_f64: Vec<Vec<f64>> =
        span.iter().map(|v| v.iter().map(|x| x.to_f64_lossy()).collect()).collect();
    let basis = orthonormalize(&span_f64, 1e-10);
    let p = span.len();
    if basis.len() != p {
        return Err(Error::Domain("spanning vectors are linearly dependent".into()));
    }
    // circumscribe the unit ball by Box(0, C_BB): any plane point inside
    // the ball has Euclidean norm at most the box diagonal
    let cbb = box_ball_constant(norm, alg, 20_000, params.seed ^ 0x9e3779b97f4a7c15);
    let mut diag2 = R::zero();
    for i in 0..n {
        diag2 = diag2 + cbb.powf(rf::<R>(2.0 * alg.degree_of(i) as f64));
    }
    let radius = diag2.sqrt() * rf::<R>(1.000001);

    let samples = params.samples.max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let draws: Vec<Vec<f64>> = (0..samples)
        .map(|_| (0..p).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let hits = parallel::map_indexed(samples, |s| {
        let xi = &draws[s];
        let mut z = vec![R::zero(); n];
        for (b, &x) in basis.iter().zip(xi.iter()) {
            for (zi, bi) in z.iter_mut().zip(b) {
                *zi = *zi + radius * rf::<R>(x * bi);
            }
        }
        let pt = GroupPoint::new(z);
        if norm.norm(alg, &pt) < R::one() {
            1usize
        } else {
            0
        }
    });
    let hit_count: usize = hits.into_iter().sum();
    let cube_volume = (rf::<R>(2.0) * radius).powf(rf::<R>(p as f64));
    Ok(cube_volume * rf::<R>(hit_count as f64) / rf::<R>(samples as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::wedge;

    fn h1() -> StratifiedAlgebra<f64> {
        StratifiedAlgebra::heisenberg(1).unwrap()
    }

    #[test]
    fn vertical_axis_section_has_length_two() {
        // S = span e3, ball section {|t|^{1/2} < 1} = (-1, 1)
        let alg = h1();
        let norm = HomogeneousQuasiNorm::standard(alg.step());
        let mut tau = Multivector::zero(3, 1);
        tau.set_coeff(vec![2], 1.0);
        let theta = metric_factor(&alg, &norm, &tau, &McParams::default()).unwrap();
        assert!((theta - 2.0).abs() < 0.02, "theta = {theta}");
    }

    #[test]
    fn abelian_coordinate_planes_give_box_sections() {
        // max-norm unit ball in abelian R^n: coordinate p-plane section is
        // the p-cube of side 2
        let alg = StratifiedAlgebra::<f64>::abelian(3).unwrap();
        let norm = HomogeneousQuasiNorm::standard(1);
        for p in 1..=2usize {
            let span: Vec<Vec<f64>> = (0..p)
                .map(|i| {
                    let mut e = vec![0.0; 3];
                    e[i] = 1.0;
                    e
                })
                .collect();
            let theta = metric_factor_of_span(&alg, &norm, &span, &McParams::default()).unwrap();
            let expect = 2.0_f64.powi(p as i32);
            assert!((theta - expect).abs() / expect < 0.02, "p={p}: {theta} vs {expect}");
        }
    }

    #[test]
    fn factor_depends_only_on_the_plane() {
        let alg = h1();
        let norm = HomogeneousQuasiNorm::standard(alg.step());
        let mut tau = Multivector::zero(3, 1);
        tau.set_coeff(vec![2], 1.0);
        let t1 = metric_factor(&alg, &norm, &tau, &McParams::default()).unwrap();
        let t2 = metric_factor(&alg, &norm, &tau.scale(&-7.5), &McParams::default()).unwrap();
        assert_eq!(t1, t2, "scaling the multivector cannot change the section");
    }

    #[test]
    fn non_simple_multivector_rejected() {
        // e1^e2 + e3^e4 in R^4 is not simple
        let alg = StratifiedAlgebra::<f64>::abelian(4).unwrap();
        let norm = HomogeneousQuasiNorm::standard(1);
        let mut tau = Multivector::zero(4, 2);
        tau.set_coeff(vec![0, 1], 1.0);
        tau.set_coeff(vec![2, 3], 1.0);
        assert!(metric_factor(&alg, &norm, &tau, &McParams::default()).is_err());
    }

    #[test]
    fn simple_wedges_are_accepted_and_factored() {
        let alg = StratifiedAlgebra::<f64>::abelian(4).unwrap();
        let norm = HomogeneousQuasiNorm::standard(1);
        let a = vec![1.0, 0.5, -0.25, 0.0];
        let b = vec![0.0, 1.0, 0.75, -0.5];
        let tau = wedge(&[a.clone(), b.clone()]).unwrap();
        let via_mv = metric_factor(&alg, &norm, &tau, &McParams::default()).unwrap();
        let via_span =
            metric_factor_of_span(&alg, &norm, &[a, b], &McParams::default()).unwrap();
        assert!((via_mv - via_span).abs() < 0.05 * via_span.max(1.0));
    }
}
