//! Blow-up verification at transversal points: set convergence of
//! `F ∩ delta_{1/r}(x^{-1} Sigma)` to the tangent homogeneous subgroup and
//! the density ratio `mu~(Sigma ∩ B(x,r)) / r^{D(p)}` against its
//! predicted limit.

use super::factor::{metric_factor, McParams};
use super::measure::area_element;
use crate::algebra::{GroupPoint, StratifiedAlgebra};
use crate::error::{Error, Result};
use crate::exterior::{degree_profile, project_degree, subdilate, wedge, Multivector};
use crate::linalg::Mat;
use crate::manifold::{classify_point, normal_form, Chart, PointClass};
use crate::metric::{box_gauge, quasi_hausdorff_distance, HomogeneousQuasiNorm};
use crate::parallel;
use crate::scalar::{rf, RealScalar};

#[derive(Clone, Copy, Debug)]
pub struct BlowupParams {
    /// Grid resolution per parameter axis for the set-distance sampling.
    pub set_resolution: usize,
    /// Midpoint-quadrature resolution per axis for the density ratio.
    pub ball_grid: usize,
    /// Half width of the rescaled parameter box; must cover the unit box
    /// after blow-up.
    pub xi_half_width: f64,
    /// Monte Carlo budget for the metric factor.
    pub mc: McParams,
    pub rel_tol: f64,
}

impl Default for BlowupParams {
    fn default() -> Self {
        BlowupParams {
            set_resolution: 201,
            ball_grid: 501,
            xi_half_width: 2.5,
            mc: McParams::default(),
            rel_tol: 1e-8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BlowupTrace<R> {
    pub radii: Vec<R>,
    /// Sampled Hausdorff distance (quasi-distance) between the blown-up
    /// piece and the tangent subgroup, both clipped to `Box(0, 1)`.
    pub hausdorff: Vec<R>,
    /// `mu~(Sigma ∩ B(x,r)) / r^{D(p)}` per radius.
    pub density_ratio: Vec<R>,
    /// The limit predicted by the metric factor and the projected unit
    /// tangent vector.
    pub predicted_limit: R,
    /// Set when realizing the subgroup required rotating within a layer
    /// (its identity blocks are not axis-aligned).
    pub subgroup_rotated: bool,
}

impl<R: RealScalar> BlowupTrace<R> {
    /// Relative spread of the last up-to-`k` density ratios.
    pub fn tail_spread(&self, k: usize) -> R {
        let tail: Vec<R> = self.density_ratio.iter().rev().take(k).cloned().collect();
        let mut lo = R::infinity();
        let mut hi = R::zero();
        for v in &tail {
            if *v < lo {
                lo = *v;
            }
            if *v > hi {
                hi = *v;
            }
        }
        if hi > R::zero() {
            (hi - lo) / hi
        } else {
            R::zero()
        }
    }
}

/// Runs the blow-up at `Phi(t0)`, which must be a transversal point.
/// `gtilde` is the constant auxiliary metric (identity when `None`).
pub fn blowup_trace<R: RealScalar>(
    alg: &StratifiedAlgebra<R>,
    norm: &HomogeneousQuasiNorm<R>,
    chart: &Chart<R>,
    t0: &[R],
    radii: &[R],
    gtilde: Option<&Mat<R>>,
    params: &BlowupParams,
) -> Result<BlowupTrace<R>> {
    if radii.is_empty() {
        return Err(Error::Domain("radii list is empty".into()));
    }
    if radii.windows(2).any(|w| !(w[1] < w[0])) || !(radii[radii.len() - 1] > R::zero()) {
        return Err(Error::Domain("radii must be positive and strictly decreasing".into()));
    }
    if !chart.contains(t0) {
        return Err(Error::Domain("blow-up base parameter lies outside the chart domain".into()));
    }
    let p = chart.params();
    let n = alg.dim();
    let profile = degree_profile(alg, p)?;
    let nf = normal_form(alg, chart, t0, params.rel_tol)?;
    if classify_point(&profile, &nf) != PointClass::Transversal {
        return Err(Error::Precondition(format!(
            "blow-up requires a transversal base point (degree D(p) = {}), found degree {}",
            profile.max_degree, nf.degree
        )));
    }
    let identity = Mat::identity(n);
    let metric = gtilde.unwrap_or(&identity);
    super::measure::check_spd(metric, n)?;

    let x = nf.point.clone();
    let x_inv = alg.inverse(&x);

    // leading parts of the reduced columns: the linear parametrization of
    // the tangent subgroup (pivot-layer slices, everything else zero)
    let mut limit_basis: Vec<Vec<R>> = Vec::with_capacity(p);
    for (j, &sigma) in nf.subdegrees.iter().enumerate() {
        let range = alg.layer_range(sigma);
        let mut u = vec![R::zero(); n];
        for row in range {
            u[row] = nf.matrix[(row, j)];
        }
        limit_basis.push(u);
    }
    // rotation flag: a layer-ell pivot column with mass outside its pivot row
    let scale = nf.matrix.max_abs();
    let mut subgroup_rotated = nf.needs_row_permutation;
    for (j, &sigma) in nf.subdegrees.iter().enumerate() {
        if sigma != profile.ell {
            continue;
        }
        let pivot_row = nf.pivots[j].0;
        for row in alg.layer_range(sigma) {
            if row != pivot_row && !nf.matrix[(row, j)].is_negligible(&scale, params.rel_tol) {
                subgroup_rotated = true;
            }
        }
    }

    // predicted limit: theta_g^d of the projected tangent over the norm of
    // the projected unit tangent vector
    let j0 = chart.jacobian(t0);
    let c0 = alg.frame_matrix_inverse(&x).matmul(&j0);
    let tau0 = wedge(&c0.columns())?;
    let pi: Multivector<R> = project_degree(alg, &tau0, profile.max_degree);
    if pi.is_zero() {
        return Err(Error::Precondition(
            "projected tangent vanishes at the base point".into(),
        ));
    }
    let theta = metric_factor(alg, norm, &pi, &params.mc)?;
    let gram = j0.transpose().matmul(&metric.matmul(&j0)).det();
    if !(gram > R::zero()) {
        return Err(Error::SingularPoint("degenerate tangent Gram matrix".into()));
    }
    let predicted_limit = theta * gram.sqrt() / pi.norm();

    let half = rf::<R>(params.xi_half_width);
    let e = &nf.column_transform;
    let one_plus = R::one() + rf::<R>(1e-12);

    let mut hausdorff = Vec::with_capacity(radii.len());
    let mut density_ratio = Vec::with_capacity(radii.len());
    for &r in radii {
        // --- set distance -------------------------------------------------
        let res = params.set_resolution.max(2);
        let nodes = res.pow(p as u32);
        let pairs: Vec<(Option<GroupPoint<R>>, Option<GroupPoint<R>>)> =
            parallel::map_indexed(nodes, |flat| {
                let mut rem = flat;
                let mut xi = Vec::with_capacity(p);
                for _ in 0..p {
                    let i = rem % res;
                    rem /= res;
                    let frac = rf::<R>(i as f64 / (res - 1) as f64);
                    xi.push(-half + (half + half) * frac);
                }
                // limit point: linear combination of the leading parts
                let mut z = vec![R::zero(); n];
                for (u, c) in limit_basis.iter().zip(&xi) {
                    for (zi, ui) in z.iter_mut().zip(u) {
                        *zi = *zi + *c * *ui;
                    }
                }
                let z = GroupPoint::new(z);
                let limit = (box_gauge(alg, &z) <= one_plus).then_some(z);
                // blown point through the anisotropic reparametrization
                let lam = subdilate(&profile, &r, &xi).expect("positive radius");
                let dt = e.apply(&lam);
                let t: Vec<R> = t0.iter().zip(&dt).map(|(a, b)| *a + *b).collect();
                let blown = if chart.contains(&t) {
                    let y = alg.point(chart.eval(&t)).expect("chart dims checked");
                    let w = alg
                        .dilate_unchecked(&(R::one() / r), &alg.product(&x_inv, &y));
                    (box_gauge(alg, &w) <= one_plus).then_some(w)
                } else {
                    None
                };
                (blown, limit)
            });
        let mut blown_set = Vec::new();
        let mut limit_set = Vec::new();
        for (b, l) in pairs {
            if let Some(b) = b {
                blown_set.push(b);
            }
            if let Some(l) = l {
                limit_set.push(l);
            }
        }
        hausdorff.push(quasi_hausdorff_distance(norm, alg, &blown_set, &limit_set));

        // --- density ratio -------------------------------------------------
        // with t = t0 + E lambda_r xi the volume element is
        // |det E| r^{D(p)} d xi, so the ratio is the xi-integral directly
        let grid = params.ball_grid.max(2);
        let cells = grid.pow(p as u32);
        let cell_vol = {
            let side = (half + half) / rf::<R>(grid as f64);
            let mut v = R::one();
            for _ in 0..p {
                v = v * side;
            }
            v
        };
        let contributions = parallel::map_indexed(cells, |flat| {
            let mut rem = flat;
            let mut xi = Vec::with_capacity(p);
            for _ in 0..p {
                let i = rem % grid;
                rem /= grid;
                let frac = rf::<R>((i as f64 + 0.5) / grid as f64);
                xi.push(-half + (half + half) * frac);
            }
            let lam = subdilate(&profile, &r, &xi).expect("positive radius");
            let dt = e.apply(&lam);
            let t: Vec<R> = t0.iter().zip(&dt).map(|(a, b)| *a + *b).collect();
            if !chart.contains(&t) {
                return R::zero();
            }
            let y = alg.point(chart.eval(&t)).expect("chart dims checked");
            if norm.distance(alg, &y, &x) < r {
                area_element(chart, metric, &t)
            } else {
                R::zero()
            }
        });
        let sum = contributions.into_iter().fold(R::zero(), |a, v| a + v);
        let det_e = e.det().abs();
        density_ratio.push(sum * cell_vol * det_e);
    }

    Ok(BlowupTrace {
        radii: radii.to_vec(),
        hausdorff,
        density_ratio,
        predicted_limit,
        subgroup_rotated,
    })
}
