//! Parametrized C^1 submanifolds: charts, the tangent multivector in the
//! left-invariant frame, pointwise degree, the graded echelon normal form,
//! transversality classification and characteristic-set sampling.

use crate::algebra::{GroupPoint, StratifiedAlgebra};
use crate::error::{Error, Result};
use crate::exterior::{multivector_degree, wedge, DegreeProfile, Multivector};
use crate::linalg::Mat;
use crate::parallel;
use crate::poly::Poly;
use crate::scalar::{rf, RealScalar, Scalar};
use std::sync::Arc;

/// Default relative threshold for dropping float coefficients; exact
/// scalars ignore it. Degree is upper semicontinuous, so float noise can
/// only raise spurious degrees; the threshold bounds that damage.
pub const DEFAULT_REL_TOL: f64 = 1e-8;

type EvalFn<S> = dyn Fn(&[S]) -> Vec<S> + Send + Sync;
type JacFn<S> = dyn Fn(&[S]) -> Mat<S> + Send + Sync;

#[derive(Clone)]
pub enum ChartMap<S: Scalar> {
    /// Coordinate functions as polynomials in the `p` parameters.
    Polynomial(Vec<Poly<S>>),
    /// Arbitrary map with an explicit Jacobian.
    Custom { p: usize, n: usize, f: Arc<EvalFn<S>>, jac: Arc<JacFn<S>> },
}

impl<S: Scalar> std::fmt::Debug for ChartMap<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChartMap::Polynomial(c) => write!(f, "ChartMap::Polynomial({} coords)", c.len()),
            ChartMap::Custom { p, n, .. } => write!(f, "ChartMap::Custom({p} -> {n})"),
        }
    }
}

/// A single-chart piece of a p-dimensional submanifold: a map from an
/// axis-aligned parameter box into the group.
#[derive(Clone, Debug)]
pub struct Chart<S: Scalar> {
    map: ChartMap<S>,
    domain: Vec<(S, S)>,
}

impl<S: Scalar> Chart<S> {
    pub fn polynomial(coords: Vec<Poly<S>>, domain: Vec<(S, S)>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Structure("chart needs at least one coordinate".into()));
        }
        let p = coords[0].nvars();
        if coords.iter().any(|c| c.nvars() != p) {
            return Err(Error::Structure("chart coordinates disagree on arity".into()));
        }
        Chart::check_domain(p, &domain)?;
        Ok(Chart { map: ChartMap::Polynomial(coords), domain })
    }

    pub fn custom(
        p: usize,
        n: usize,
        f: Arc<EvalFn<S>>,
        jac: Arc<JacFn<S>>,
        domain: Vec<(S, S)>,
    ) -> Result<Self> {
        Chart::check_domain(p, &domain)?;
        Ok(Chart { map: ChartMap::Custom { p, n, f, jac }, domain })
    }

    fn check_domain(p: usize, domain: &[(S, S)]) -> Result<()> {
        if domain.len() != p {
            return Err(Error::DimensionMismatch(format!(
                "domain has {} intervals for {p} parameters",
                domain.len()
            )));
        }
        if domain.iter().any(|(lo, hi)| !(lo < hi)) {
            return Err(Error::Domain("domain intervals must be nonempty".into()));
        }
        Ok(())
    }

    pub fn params(&self) -> usize {
        match &self.map {
            ChartMap::Polynomial(c) => c[0].nvars(),
            ChartMap::Custom { p, .. } => *p,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match &self.map {
            ChartMap::Polynomial(c) => c.len(),
            ChartMap::Custom { n, .. } => *n,
        }
    }

    pub fn domain(&self) -> &[(S, S)] {
        &self.domain
    }

    pub fn map(&self) -> &ChartMap<S> {
        &self.map
    }

    pub fn contains(&self, t: &[S]) -> bool {
        t.len() == self.params()
            && t.iter().zip(&self.domain).all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    pub fn eval(&self, t: &[S]) -> Vec<S> {
        assert_eq!(t.len(), self.params(), "parameter arity mismatch");
        match &self.map {
            ChartMap::Polynomial(coords) => coords.iter().map(|c| c.eval(t)).collect(),
            ChartMap::Custom { f, .. } => f(t),
        }
    }

    /// The n x p Jacobian in ambient coordinates.
    pub fn jacobian(&self, t: &[S]) -> Mat<S> {
        assert_eq!(t.len(), self.params(), "parameter arity mismatch");
        match &self.map {
            ChartMap::Polynomial(coords) => {
                let p = self.params();
                let n = coords.len();
                let mut m = Mat::zeros(n, p);
                for (l, c) in coords.iter().enumerate() {
                    for i in 0..p {
                        m[(l, i)] = c.partial(i).eval(t);
                    }
                }
                m
            }
            ChartMap::Custom { jac, .. } => jac(t),
        }
    }

    /// Restriction of the same map to a smaller parameter box.
    pub fn with_domain(&self, domain: Vec<(S, S)>) -> Result<Self> {
        Chart::check_domain(self.params(), &domain)?;
        Ok(Chart { map: self.map.clone(), domain })
    }
}

impl<R: RealScalar> Chart<R> {
    /// Custom map with a central finite-difference Jacobian at step
    /// `1e-6 (1 + |t|)`.
    pub fn custom_fd(p: usize, n: usize, f: Arc<EvalFn<R>>, domain: Vec<(R, R)>) -> Result<Self> {
        let f2 = f.clone();
        let jac: Arc<JacFn<R>> = Arc::new(move |t: &[R]| {
            let tnorm = t.iter().fold(R::zero(), |acc, v| acc + *v * *v).sqrt();
            let h = rf::<R>(1e-6) * (R::one() + tnorm);
            let mut m = Mat::zeros(n, p);
            for i in 0..p {
                let mut tp = t.to_vec();
                let mut tm = t.to_vec();
                tp[i] = tp[i] + h;
                tm[i] = tm[i] - h;
                let fp = f2(&tp);
                let fm = f2(&tm);
                for l in 0..n {
                    m[(l, i)] = (fp[l] - fm[l]) / (rf::<R>(2.0) * h);
                }
            }
            m
        });
        Chart::custom(p, n, f, jac, domain)
    }
}

/// Builtin chart families over `[-1, 1]^p`, defined for any group of
/// compatible dimension. All are polynomial, hence exact-mode capable.
pub fn builtin_chart<S: Scalar>(alg: &StratifiedAlgebra<S>, name: &str) -> Result<Chart<S>> {
    let n = alg.dim();
    let unit = |p: usize| vec![(-S::one(), S::one()); p];
    let zero1 = Poly::zero(1);
    let t = Poly::var(1, 0);
    match name {
        "vertical-axis" => {
            // t e_n: the top-layer axis
            let mut coords = vec![zero1; n];
            coords[n - 1] = t;
            Chart::polynomial(coords, unit(1))
        }
        "horizontal-line" => {
            let mut coords = vec![zero1; n];
            coords[0] = t;
            Chart::polynomial(coords, unit(1))
        }
        "transversal-curve" => {
            // t (e_1 + e_n): horizontal and top-layer motion together
            let mut coords = vec![zero1; n];
            coords[0] = t.clone();
            coords[n - 1] = t;
            Chart::polynomial(coords, unit(1))
        }
        "plane" => {
            if n < 2 {
                return Err(Error::Domain("plane chart needs ambient dimension >= 2".into()));
            }
            let mut coords = vec![Poly::zero(2); n];
            coords[0] = Poly::var(2, 0);
            coords[1] = Poly::var(2, 1);
            Chart::polynomial(coords, unit(2))
        }
        "saddle" => {
            if n != 3 {
                return Err(Error::Domain("saddle chart is defined in ambient dimension 3".into()));
            }
            let u = Poly::var(2, 0);
            let v = Poly::var(2, 1);
            let coords = vec![u.clone(), v.clone(), u.mul(&v)];
            Chart::polynomial(coords, unit(2))
        }
        other => Err(Error::Parse(format!(
            "unknown builtin chart '{other}' (expected vertical-axis, horizontal-line, transversal-curve, plane, saddle)"
        ))),
    }
}

/// The frame-coefficient matrix `C` at `t`: Jacobian columns re-expressed
/// in the left-invariant frame at `Phi(t)` (equivalently pulled to the
/// origin), so `v_j = sum_i C_ij X_i(x)`.
pub fn tangent_frame_matrix<S: Scalar>(
    alg: &StratifiedAlgebra<S>,
    chart: &Chart<S>,
    t: &[S],
) -> Result<Mat<S>> {
    if chart.ambient_dim() != alg.dim() {
        return Err(Error::DimensionMismatch(format!(
            "chart maps into dimension {}, group has dimension {}",
            chart.ambient_dim(),
            alg.dim()
        )));
    }
    let x = alg.point(chart.eval(t))?;
    let jac = chart.jacobian(t);
    Ok(alg.frame_matrix_inverse(&x).matmul(&jac))
}

/// Tangent p-vector translated to the origin: the wedge of the frame
/// matrix columns. Errors at rank-deficient (singular) points.
pub fn tangent_multivector<S: Scalar>(
    alg: &StratifiedAlgebra<S>,
    chart: &Chart<S>,
    t: &[S],
    rel_tol: f64,
) -> Result<Multivector<S>> {
    let c = tangent_frame_matrix(alg, chart, t)?;
    let cols = c.columns();
    let mv = wedge(&cols)?;
    // Hadamard-style scale: product of column sup-norms.
    let mut scale = S::one();
    for col in &cols {
        let mut m = S::zero();
        for v in col {
            let a = v.abs();
            if a > m {
                m = a;
            }
        }
        scale = scale * m;
    }
    if mv.max_abs_coeff().is_negligible(&scale, rel_tol) {
        return Err(Error::SingularPoint(format!(
            "Jacobian is rank deficient at t = {t:?} (tangent cone is not a {}-plane)",
            chart.params()
        )));
    }
    Ok(mv)
}

/// Pointwise degree: the largest multi-index degree carried by a
/// non-negligible coefficient of the tangent multivector.
pub fn pointwise_degree<S: Scalar>(
    alg: &StratifiedAlgebra<S>,
    chart: &Chart<S>,
    t: &[S],
    rel_tol: f64,
) -> Result<usize> {
    let mv = tangent_multivector(alg, chart, t, rel_tol)?;
    multivector_degree(alg, &mv, rel_tol)
        .ok_or_else(|| Error::SingularPoint("zero tangent multivector".into()))
}

/// Graded column echelon data of the tangent frame at one point.
#[derive(Clone, Debug)]
pub struct NormalForm<S: Scalar> {
    /// The base point `Phi(t)`.
    pub point: GroupPoint<S>,
    /// Reduced n x p matrix, columns ordered by subdegree then pivot row.
    pub matrix: Mat<S>,
    /// Layer ranks `alpha_1..alpha_step`.
    pub layer_ranks: Vec<usize>,
    /// `(row, column)` of each accepted pivot in the reduced matrix.
    pub pivots: Vec<(usize, usize)>,
    /// Subdegree of each reduced column (ascending).
    pub subdegrees: Vec<usize>,
    /// `sum_k k alpha_k`.
    pub degree: usize,
    /// Whether writing the identity blocks at the top of each layer would
    /// require permuting rows within a layer.
    pub needs_row_permutation: bool,
    /// The p x p matrix of accumulated column operations:
    /// `tangent_frame * column_transform = matrix`. Reparametrizing the
    /// chart by `t0 + column_transform * y` aligns the parameter axes with
    /// the reduced columns to first order.
    pub column_transform: Mat<S>,
}

/// Column echelon reduction through the layers, deepest first: within the
/// rows of layer k, repeatedly take the largest-magnitude entry over the
/// still-unassigned columns as a pivot (ties to the lowest row index),
/// normalize, and eliminate that row from every other column. Columns are
/// only ever combined, so the span is preserved and the multi-set of layer
/// ranks is exactly the grading of the tangent space.
pub fn normal_form<S: Scalar>(
    alg: &StratifiedAlgebra<S>,
    chart: &Chart<S>,
    t: &[S],
    rel_tol: f64,
) -> Result<NormalForm<S>> {
    let c = tangent_frame_matrix(alg, chart, t)?;
    let x = alg.point(chart.eval(t))?;
    normal_form_of_matrix(alg, x, c, rel_tol)
}

pub(crate) fn normal_form_of_matrix<S: Scalar>(
    alg: &StratifiedAlgebra<S>,
    point: GroupPoint<S>,
    mut c: Mat<S>,
    rel_tol: f64,
) -> Result<NormalForm<S>> {
    let n = c.nrows();
    let p = c.ncols();
    if n != alg.dim() {
        return Err(Error::DimensionMismatch("frame matrix does not match the group".into()));
    }
    let scale = c.max_abs();
    if scale.is_zero() {
        return Err(Error::SingularPoint("zero tangent frame".into()));
    }
    let step = alg.step();
    let mut assigned: Vec<Option<usize>> = vec![None; p]; // subdegree per column
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; p];
    let mut layer_ranks = vec![0usize; step];
    let mut transform: Mat<S> = Mat::identity(p);
    for k in (1..=step).rev() {
        let rows = alg.layer_range(k);
        let mut used_rows: Vec<usize> = Vec::new();
        loop {
            // largest-magnitude pivot within the layer block, ties to the
            // lowest row index (rows scanned in order, strict improvement)
            let mut best: Option<(usize, usize, S)> = None;
            for r in rows.clone() {
                if used_rows.contains(&r) {
                    continue;
                }
                for col in 0..p {
                    if assigned[col].is_some() {
                        continue;
                    }
                    let a = c[(r, col)].abs();
                    if a.is_negligible(&scale, rel_tol) {
                        continue;
                    }
                    match &best {
                        Some((_, _, cur)) if !(a > cur.clone()) => {}
                        _ => best = Some((r, col, a)),
                    }
                }
            }
            let Some((r, col, _)) = best else { break };
            // normalize and eliminate row r from every other column
            let d = c[(r, col)].clone();
            for row in 0..n {
                c[(row, col)] = c[(row, col)].clone() / d.clone();
            }
            for row in 0..p {
                transform[(row, col)] = transform[(row, col)].clone() / d.clone();
            }
            for other in 0..p {
                if other == col || c[(r, other)].is_zero() {
                    continue;
                }
                let f = c[(r, other)].clone();
                for row in 0..n {
                    let sub = f.clone() * c[(row, col)].clone();
                    c[(row, other)] -= sub;
                }
                for row in 0..p {
                    let sub = f.clone() * transform[(row, col)].clone();
                    transform[(row, other)] -= sub;
                }
                // the pivot row is now an exact zero regardless of rounding
                c[(r, other)] = S::zero();
            }
            assigned[col] = Some(k);
            pivot_of_col[col] = Some(r);
            used_rows.push(r);
            layer_ranks[k - 1] += 1;
        }
    }
    if assigned.iter().any(Option::is_none) {
        return Err(Error::SingularPoint(
            "tangent frame is rank deficient (point belongs to the singular set)".into(),
        ));
    }
    // order columns by (subdegree, pivot row)
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by_key(|&col| (assigned[col].unwrap(), pivot_of_col[col].unwrap()));
    let mut matrix = Mat::zeros(n, p);
    let mut column_transform = Mat::zeros(p, p);
    let mut pivots = Vec::with_capacity(p);
    let mut subdegrees = Vec::with_capacity(p);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            matrix[(row, new_col)] = c[(row, old_col)].clone();
        }
        for row in 0..p {
            column_transform[(row, new_col)] = transform[(row, old_col)].clone();
        }
        pivots.push((pivot_of_col[old_col].unwrap(), new_col));
        subdegrees.push(assigned[old_col].unwrap());
    }
    // row permutation flag: within each layer the pivot rows should be the
    // leading rows of the layer
    let mut needs_row_permutation = false;
    for k in 1..=step {
        let range = alg.layer_range(k);
        let mut rows_k: Vec<usize> =
            pivots.iter().map(|&(r, _)| r).filter(|r| range.contains(r)).collect();
        rows_k.sort_unstable();
        let expect: Vec<usize> = range.clone().take(layer_ranks[k - 1]).collect();
        if rows_k != expect {
            needs_row_permutation = true;
        }
    }
    let degree = layer_ranks.iter().enumerate().map(|(k, &a)| (k + 1) * a).sum();
    Ok(NormalForm {
        point,
        matrix,
        layer_ranks,
        pivots,
        subdegrees,
        degree,
        needs_row_permutation,
        column_transform,
    })
}

/// Classification of a nonsingular point by its layer-rank pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointClass {
    Transversal,
    /// Some layer above `ell` is not full: `alpha_j < n_j` for a `j >= ell+1`.
    A,
    /// All layers above `ell` full but `alpha_ell < r_p`.
    B,
}

impl std::fmt::Display for PointClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PointClass::Transversal => write!(f, "transversal"),
            PointClass::A => write!(f, "A"),
            PointClass::B => write!(f, "B"),
        }
    }
}

/// Applies the A-rule first, then the B-rule; anything else carries the
/// transversal pattern and realizes degree `D(p)`.
pub fn classify_point<S: Scalar>(profile: &DegreeProfile, nf: &NormalForm<S>) -> PointClass {
    let ell = profile.ell;
    let layers = profile.layers();
    let step = layers.len();
    for j in ell + 1..=step {
        if nf.layer_ranks[j - 1] < layers[j - 1] {
            return PointClass::A;
        }
    }
    if nf.layer_ranks[ell - 1] < profile.r_p {
        return PointClass::B;
    }
    debug_assert_eq!(nf.degree, profile.max_degree);
    PointClass::Transversal
}

/// One evaluated grid sample of a chart.
#[derive(Clone, Debug)]
pub struct CharSample<S: Scalar> {
    pub t: Vec<S>,
    pub x: Vec<S>,
    pub degree: Option<usize>,
    pub class: SampleClass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleClass {
    Transversal,
    A,
    B,
    Singular,
}

impl std::fmt::Display for SampleClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SampleClass::Transversal => write!(f, "transversal"),
            SampleClass::A => write!(f, "A"),
            SampleClass::B => write!(f, "B"),
            SampleClass::Singular => write!(f, "singular"),
        }
    }
}

/// Uniform tensor-grid nodes over the chart domain, `resolution >= 2` per
/// axis, endpoints included.
pub fn grid_nodes<R: RealScalar>(chart: &Chart<R>, resolution: usize) -> Result<Vec<Vec<R>>> {
    if resolution < 2 {
        return Err(Error::Domain("grid resolution must be at least 2 per axis".into()));
    }
    let p = chart.params();
    let total = resolution.pow(p as u32);
    let mut nodes = Vec::with_capacity(total);
    for flat in 0..total {
        let mut rem = flat;
        let mut t = Vec::with_capacity(p);
        for (lo, hi) in chart.domain() {
            let i = rem % resolution;
            rem /= resolution;
            let frac = rf::<R>(i as f64 / (resolution - 1) as f64);
            t.push(*lo + (*hi - *lo) * frac);
        }
        nodes.push(t);
    }
    Ok(nodes)
}

/// Evaluates degree and class on the tensor grid. Singular samples are
/// tagged and kept, not dropped.
pub fn sample_characteristic_set<R: RealScalar>(
    alg: &StratifiedAlgebra<R>,
    chart: &Chart<R>,
    resolution: usize,
    rel_tol: f64,
) -> Result<Vec<CharSample<R>>> {
    let profile = crate::exterior::degree_profile(alg, chart.params())?;
    let nodes = grid_nodes(chart, resolution)?;
    let samples = parallel::map_indexed(nodes.len(), |i| {
        let t = &nodes[i];
        let x = chart.eval(t);
        match normal_form(alg, chart, t, rel_tol) {
            Ok(nf) => {
                let class = match classify_point(&profile, &nf) {
                    PointClass::Transversal => SampleClass::Transversal,
                    PointClass::A => SampleClass::A,
                    PointClass::B => SampleClass::B,
                };
                CharSample { t: t.clone(), x, degree: Some(nf.degree), class }
            }
            Err(_) => CharSample { t: t.clone(), x, degree: None, class: SampleClass::Singular },
        }
    });
    Ok(samples)
}

/// The samples of degree below `D(p)` (classes A and B) plus singular tags.
pub fn characteristic_samples<R: RealScalar>(samples: &[CharSample<R>]) -> Vec<&CharSample<R>> {
    samples.iter().filter(|s| s.class != SampleClass::Transversal).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::degree_profile;
    use num_rational::BigRational;
    use num_traits::Zero;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn h1() -> StratifiedAlgebra<f64> {
        StratifiedAlgebra::heisenberg(1).unwrap()
    }

    fn poly_pow(p: &Poly<f64>, e: usize) -> Poly<f64> {
        let mut acc = Poly::constant(p.nvars(), 1.0);
        for _ in 0..e {
            acc = acc.mul(p);
        }
        acc
    }

    #[test]
    fn straight_charts_have_expected_degrees() {
        let alg = h1();
        let horizontal = builtin_chart(&alg, "horizontal-line").unwrap();
        assert_eq!(pointwise_degree(&alg, &horizontal, &[0.0], DEFAULT_REL_TOL).unwrap(), 1);
        let vertical = builtin_chart(&alg, "vertical-axis").unwrap();
        for t in [-0.7, 0.0, 0.4] {
            assert_eq!(pointwise_degree(&alg, &vertical, &[t], DEFAULT_REL_TOL).unwrap(), 2);
        }
        let mv = tangent_multivector(&alg, &vertical, &[0.3], DEFAULT_REL_TOL).unwrap();
        assert!((mv.coeff(&[2]) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn plane_chart_tangent_and_degree() {
        let alg = h1();
        let plane = builtin_chart(&alg, "plane").unwrap();
        // at the origin: e1 ^ e2, degree 2
        let mv = tangent_multivector(&alg, &plane, &[0.0, 0.0], DEFAULT_REL_TOL).unwrap();
        assert!((mv.coeff(&[0, 1]) - 1.0).abs() < 1e-14);
        assert_eq!(pointwise_degree(&alg, &plane, &[0.0, 0.0], DEFAULT_REL_TOL).unwrap(), 2);
        // away from the origin the frame tilts the wedge but the exact
        // minors come from the closed-form H^1 frame: at (u,v),
        // pulled-back columns are (1,0,v/2+? ) computed below
        let (u, v) = (1.0, 0.0);
        let c = tangent_frame_matrix(&alg, &plane, &[u, v]).unwrap();
        // d Phi = (e1, e2); A(x)^{-1} e1 = e1 + (x2/2) e3, A^{-1} e2 = e2 - (x1/2) e3
        assert!((c[(2, 0)] - v / 2.0).abs() < 1e-14);
        assert!((c[(2, 1)] + u / 2.0).abs() < 1e-14);
        assert_eq!(pointwise_degree(&alg, &plane, &[u, v], DEFAULT_REL_TOL).unwrap(), 3);
    }

    #[test]
    fn singular_points_error() {
        let alg = h1();
        // t -> (t^2, 0, 0) has rank 0 at t = 0
        let t = Poly::<f64>::var(1, 0);
        let coords = vec![t.mul(&t), Poly::zero(1), Poly::zero(1)];
        let chart = Chart::polynomial(coords, vec![(-1.0, 1.0)]).unwrap();
        assert!(matches!(
            pointwise_degree(&alg, &chart, &[0.0], DEFAULT_REL_TOL),
            Err(Error::SingularPoint(_))
        ));
        assert!(pointwise_degree(&alg, &chart, &[0.5], DEFAULT_REL_TOL).is_ok());
    }

    #[test]
    fn custom_fd_jacobian_matches_polynomial() {
        let alg = h1();
        let poly = builtin_chart(&alg, "saddle").unwrap();
        let f = Arc::new(|t: &[f64]| vec![t[0], t[1], t[0] * t[1]]);
        let fd = Chart::custom_fd(2, 3, f, vec![(-1.0, 1.0), (-1.0, 1.0)]).unwrap();
        let t = [0.3, -0.8];
        let ja = poly.jacobian(&t);
        let jb = fd.jacobian(&t);
        for r in 0..3 {
            for c in 0..2 {
                assert!((ja[(r, c)] - jb[(r, c)]).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn normal_form_of_plane_charts() {
        let alg = h1();
        let plane = builtin_chart(&alg, "plane").unwrap();
        let nf = normal_form(&alg, &plane, &[0.0, 0.0], DEFAULT_REL_TOL).unwrap();
        assert_eq!(nf.layer_ranks, vec![2, 0]);
        assert_eq!(nf.degree, 2);
        assert_eq!(nf.subdegrees, vec![1, 1]);
        // transversal at generic points: alpha = (1, 1), degree 3
        let nf = normal_form(&alg, &plane, &[1.0, 0.5], DEFAULT_REL_TOL).unwrap();
        assert_eq!(nf.layer_ranks, vec![1, 1]);
        assert_eq!(nf.degree, 3);
        assert_eq!(nf.subdegrees, vec![1, 2]);
    }

    #[test]
    fn normal_form_degree_agrees_with_multivector_degree() {
        let alg = StratifiedAlgebra::<f64>::engel().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        // random quadratic charts of dimension 2 in the Engel group
        for _ in 0..300 {
            let mut coords = Vec::new();
            for _ in 0..4 {
                let mut poly = Poly::zero(2);
                for e in [[0u16, 0], [1, 0], [0, 1], [1, 1], [2, 0], [0, 2]] {
                    if rng.random_range(0.0..1.0) < 0.6 {
                        let c: f64 = rng.random_range(-1.0..1.0);
                        let mono = poly_pow(&Poly::var(2, 0), e[0] as usize)
                            .mul(&poly_pow(&Poly::var(2, 1), e[1] as usize))
                            .scale(&c);
                        poly = poly.add(&mono);
                    }
                }
                coords.push(poly);
            }
            let chart = match Chart::polynomial(coords, vec![(-1.0, 1.0), (-1.0, 1.0)]) {
                Ok(c) => c,
                Err(_) => continue,
            };
            let t = [rng.random_range(-0.9..0.9), rng.random_range(-0.9..0.9)];
            let (Ok(nf), Ok(deg)) = (
                normal_form(&alg, &chart, &t, DEFAULT_REL_TOL),
                pointwise_degree(&alg, &chart, &t, DEFAULT_REL_TOL),
            ) else {
                continue;
            };
            assert_eq!(nf.degree, deg, "echelon degree vs multivector degree");
            assert_eq!(nf.layer_ranks.iter().sum::<usize>(), 2);
        }
    }

    #[test]
    fn normal_form_preserves_column_span() {
        let alg = StratifiedAlgebra::<f64>::engel().unwrap();
        let chart = {
            let t = Poly::<f64>::var(1, 0);
            Chart::polynomial(
                vec![t.clone(), t.mul(&t), Poly::zero(1), t.clone()],
                vec![(-1.0, 1.0)],
            )
            .unwrap()
        };
        let t = [0.6];
        let c = tangent_frame_matrix(&alg, &chart, &t).unwrap();
        let nf = normal_form(&alg, &chart, &t, DEFAULT_REL_TOL).unwrap();
        // stacking both column sets must not raise the rank
        let mut cols = c.columns();
        cols.extend(nf.matrix.columns());
        let stacked = Mat::from_columns(cols);
        assert_eq!(stacked.rank(1e-10), 1);
        // the recorded column operations reproduce the reduction
        let prod = c.matmul(&nf.column_transform);
        for r in 0..prod.nrows() {
            for cc in 0..prod.ncols() {
                assert!((prod[(r, cc)] - nf.matrix[(r, cc)]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn degree_is_left_translation_invariant() {
        let alg = h1();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let saddle = builtin_chart(&alg, "saddle").unwrap();
        for _ in 0..50 {
            let t = [rng.random_range(-0.9..0.9), rng.random_range(-0.9..0.9)];
            let d0 = pointwise_degree(&alg, &saddle, &t, DEFAULT_REL_TOL).unwrap();
            // translate the whole chart by z^{-1} where z = Phi(t): the
            // translated chart passes through the origin with equal degree
            let x = alg.point(saddle.eval(&t)).unwrap();
            let xinv = alg.inverse(&x);
            let alg2 = alg.clone();
            let saddle2 = saddle.clone();
            let f = Arc::new(move |s: &[f64]| {
                let y = alg2.point(saddle2.eval(s)).unwrap();
                alg2.product(&xinv, &y).into_coords()
            });
            let translated =
                Chart::custom_fd(2, 3, f, vec![(-1.0, 1.0), (-1.0, 1.0)]).unwrap();
            let d1 = pointwise_degree(&alg, &translated, &t, 1e-6).unwrap();
            assert_eq!(d0, d1);
        }
    }

    #[test]
    fn degree_is_reparametrization_invariant() {
        let alg = h1();
        // Phi(t) = (t, 0, t) vs Phi(s^3 + s)
        let t = Poly::<f64>::var(1, 0);
        let curve = Chart::polynomial(
            vec![t.clone(), Poly::zero(1), t.clone()],
            vec![(-1.0, 1.0)],
        )
        .unwrap();
        let s3s = t.mul(&t).mul(&t).add(&t);
        let reparam = Chart::polynomial(
            vec![s3s.clone(), Poly::zero(1), s3s],
            vec![(-0.7, 0.7)],
        )
        .unwrap();
        for s in [-0.5, 0.0, 0.3] {
            let u = s * s * s + s;
            let d0 = pointwise_degree(&alg, &curve, &[u], DEFAULT_REL_TOL).unwrap();
            let d1 = pointwise_degree(&alg, &reparam, &[s], DEFAULT_REL_TOL).unwrap();
            assert_eq!(d0, d1);
        }
    }

    #[test]
    fn classification_matches_rank_patterns() {
        let alg = h1();
        let profile1 = degree_profile(&alg, 1).unwrap();
        // horizontal tangent in H^1, p=1 (ell=2=step): no layer above ell
        // exists, so the A-condition is vacuous and alpha_ell = 0 < r_p = 1
        // puts the point in class B
        let horizontal = builtin_chart(&alg, "horizontal-line").unwrap();
        let nf = normal_form(&alg, &horizontal, &[0.2], DEFAULT_REL_TOL).unwrap();
        assert_eq!(classify_point(&profile1, &nf), PointClass::B);
        // vertical tangent: alpha=(0,1) -> transversal
        let vertical = builtin_chart(&alg, "vertical-axis").unwrap();
        let nf = normal_form(&alg, &vertical, &[0.2], DEFAULT_REL_TOL).unwrap();
        assert_eq!(classify_point(&profile1, &nf), PointClass::Transversal);

        // Engel p=3, pattern alpha=(2,1,0): ell(3)=1 so B is empty; the
        // missing top layer makes it class A
        let engel = StratifiedAlgebra::<f64>::engel().unwrap();
        let profile3 = degree_profile(&engel, 3).unwrap();
        assert_eq!(profile3.ell, 1);
        let u = Poly::<f64>::var(3, 0);
        let v = Poly::<f64>::var(3, 1);
        let w = Poly::<f64>::var(3, 2);
        let chart = Chart::polynomial(
            vec![u, v, w, Poly::zero(3)],
            vec![(-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)],
        )
        .unwrap();
        let nf = normal_form(&engel, &chart, &[0.0, 0.0, 0.0], DEFAULT_REL_TOL).unwrap();
        assert_eq!(nf.layer_ranks, vec![2, 1, 0]);
        assert_eq!(classify_point(&profile3, &nf), PointClass::A);
    }

    #[test]
    fn characteristic_sampling_of_builtin_charts() {
        let alg = h1();
        // vertical axis: everywhere transversal, empty characteristic list
        let vertical = builtin_chart(&alg, "vertical-axis").unwrap();
        let samples = sample_characteristic_set(&alg, &vertical, 11, DEFAULT_REL_TOL).unwrap();
        assert_eq!(samples.len(), 11);
        assert!(characteristic_samples(&samples).is_empty());

        // horizontal line: all characteristic (degree 1 < 2)
        let horizontal = builtin_chart(&alg, "horizontal-line").unwrap();
        let samples = sample_characteristic_set(&alg, &horizontal, 11, DEFAULT_REL_TOL).unwrap();
        assert_eq!(characteristic_samples(&samples).len(), 11);

        // saddle: characteristic exactly on the axes crossing (u,v)=(0,0)
        let saddle = builtin_chart(&alg, "saddle").unwrap();
        let samples = sample_characteristic_set(&alg, &saddle, 11, DEFAULT_REL_TOL).unwrap();
        let chars = characteristic_samples(&samples);
        assert_eq!(chars.len(), 1);
        assert!(chars[0].t.iter().all(|v| v.abs() < 1e-12));
        assert_eq!(chars[0].degree, Some(2));

        assert!(sample_characteristic_set(&alg, &saddle, 1, DEFAULT_REL_TOL).is_err());
    }

    #[test]
    fn exact_mode_degree_is_threshold_free() {
        let alg = StratifiedAlgebra::<BigRational>::heisenberg(1).unwrap();
        let t = Poly::<BigRational>::var(1, 0);
        // Phi(t) = (t, t, t^2): at t=0 the pulled-back tangent is (1,1,0)
        let coords = vec![t.clone(), t.clone(), t.mul(&t)];
        let chart = Chart::polynomial(
            coords,
            vec![(BigRational::from_int(-1), BigRational::from_int(1))],
        )
        .unwrap();
        let zero = [BigRational::zero()];
        assert_eq!(pointwise_degree(&alg, &chart, &zero, 0.0).unwrap(), 1);
        let half = [BigRational::ratio(1, 2)];
        assert_eq!(pointwise_degree(&alg, &chart, &half, 0.0).unwrap(), 2);
    }
}
