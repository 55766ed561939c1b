//! Characteristic-set machinery: the three-case Hausdorff-dimension bound
//! and the empirical covering experiments that mirror the class-A/B
//! counting lemmas.

use crate::algebra::{GroupPoint, StratifiedAlgebra};
use crate::error::{Error, Result};
use crate::exterior::{degree_profile, DegreeProfile};
use crate::manifold::{
    normal_form, sample_characteristic_set, CharSample, Chart, SampleClass,
};
use crate::metric::{greedy_5r_cover, HomogeneousQuasiNorm};
use crate::scalar::{rf, RealScalar, Scalar};

/// The dimension bound for the characteristic set of a C^{1,lambda}
/// submanifold, by the regularity case split.
#[derive(Clone, Debug, PartialEq)]
pub struct CharsetBound<S: Scalar> {
    pub p: usize,
    pub ell: usize,
    pub lambda: S,
    pub bound: S,
}

/// Three cases: `D(p) - lambda` when `ell = 1`; for `ell >= 2`,
/// `D(p) - 1` when `lambda >= 1/(ell-1)` and
/// `D(p) - ell lambda / (1 + lambda)` otherwise. The two `ell >= 2`
/// branches agree at `lambda = 1/(ell-1)`.
pub fn charset_dim_bound<S: Scalar>(profile: &DegreeProfile, lambda: S) -> Result<CharsetBound<S>> {
    if !(lambda > S::zero()) || lambda > S::one() {
        return Err(Error::Domain(format!(
            "holder exponent must lie in (0, 1], got {lambda}"
        )));
    }
    let d = S::from_int(profile.max_degree as i64);
    let ell = profile.ell;
    let bound = if ell == 1 {
        d - lambda.clone()
    } else {
        // lambda >= 1/(ell-1)  <=>  lambda (ell-1) >= 1
        let scaled = lambda.clone() * S::from_int((ell - 1) as i64);
        if scaled >= S::one() {
            d - S::one()
        } else {
            d - S::from_int(ell as i64) * lambda.clone() / (S::one() + lambda.clone())
        }
    };
    Ok(CharsetBound { p: profile.p, ell, lambda, bound })
}

#[derive(Clone, Copy, Debug)]
pub struct ExperimentOptions {
    /// Grid resolution for locating characteristic points on the chart.
    pub locate_resolution: usize,
    /// Grid resolution per axis when sampling the translated piece.
    pub patch_resolution: usize,
    /// Representative characteristic points probed per class.
    pub max_probes: usize,
    pub rel_tol: f64,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        ExperimentOptions {
            locate_resolution: 41,
            patch_resolution: 161,
            max_probes: 3,
            rel_tol: 1e-8,
        }
    }
}

/// Covering audit around the characteristic points of one class.
#[derive(Clone, Debug)]
pub struct ClassAudit<R> {
    pub class: SampleClass,
    /// Parameter of the probed characteristic point.
    pub probe_t: Vec<R>,
    /// Number of covering balls used.
    pub count: usize,
    /// Radius of the covering balls.
    pub radius: R,
    /// The exponent of `r` in the predicted ceiling.
    pub exponent: R,
    /// `count / (eps^H r^exponent)`: the implied constant, which the
    /// counting lemma asserts stays bounded as `r` decreases.
    pub normalized: R,
}

#[derive(Clone, Debug)]
pub struct CharsetExperiment<R> {
    pub class_a: Vec<ClassAudit<R>>,
    pub class_b: Vec<ClassAudit<R>>,
}

impl<R> Default for CharsetExperiment<R> {
    fn default() -> Self {
        CharsetExperiment { class_a: Vec::new(), class_b: Vec::new() }
    }
}

impl<R> CharsetExperiment<R> {
    pub fn is_empty(&self) -> bool {
        self.class_a.is_empty() && self.class_b.is_empty()
    }
}

/// Empirically covers `(x^{-1} Sigma) ∩ B_E(0, r)` around sampled
/// characteristic points by quasi-balls of the lemma's radius and reports
/// the normalized counts against the predicted ceiling (exponents fixed,
/// constants fitted by the caller across scales).
pub fn charset_covering_experiment<R: RealScalar>(
    alg: &StratifiedAlgebra<R>,
    norm: &HomogeneousQuasiNorm<R>,
    chart: &Chart<R>,
    eps: R,
    r: R,
    opts: &ExperimentOptions,
) -> Result<CharsetExperiment<R>> {
    if !(eps > R::zero()) || eps >= R::one() {
        return Err(Error::Domain("eps must lie in (0, 1)".into()));
    }
    if !(r > R::zero()) || r >= R::one() {
        return Err(Error::Domain("r must lie in (0, 1)".into()));
    }
    let p = chart.params();
    let profile = degree_profile(alg, p)?;
    let ell = profile.ell;
    let d = profile.max_degree as f64;

    let samples = sample_characteristic_set(alg, chart, opts.locate_resolution, opts.rel_tol)?;
    let mut experiment = CharsetExperiment::default();
    for class in [SampleClass::A, SampleClass::B] {
        let probes: Vec<&CharSample<R>> =
            samples.iter().filter(|s| s.class == class).take(opts.max_probes).collect();
        for probe in probes {
            // lemma constraints on (eps, r, theta)
            let (theta, exponent, eps_power) = match class {
                SampleClass::A => {
                    let theta = 1.0 / ell as f64;
                    if r > eps.powf(rf::<R>(ell as f64)) {
                        return Err(Error::Precondition(format!(
                            "class-A experiment needs r <= eps^ell = {}",
                            eps.powf(rf::<R>(ell as f64))
                        )));
                    }
                    (theta, p as f64 - theta * d, 1i32)
                }
                SampleClass::B => {
                    // eps = r^lambda with lambda in (0, 1/(ell-1)]
                    let lambda = eps.ln() / r.ln();
                    let lam = lambda.to_f64_lossy();
                    if ell < 2 || lam <= 0.0 || lam > 1.0 / (ell as f64 - 1.0) {
                        return Err(Error::Precondition(format!(
                            "class-B experiment needs eps = r^lambda with lambda in (0, 1/(ell-1)], got lambda = {lam}"
                        )));
                    }
                    let theta = (1.0 + lam) / ell as f64;
                    let nf = normal_form(alg, chart, &probe.t, opts.rel_tol)?;
                    let h = (profile.layers()[ell - 1] - nf.layer_ranks[ell - 1]) as i32;
                    let exp = p as f64
                        - theta * d
                        - (ell as f64 * theta - 1.0)
                            * (profile.layers()[ell - 1] - profile.r_p) as f64;
                    (theta, exp, h)
                }
                _ => unreachable!(),
            };
            let x = alg.point(probe.x.clone())?;
            let x_inv = alg.inverse(&x);
            // sample the translated piece inside the Euclidean r-ball
            let res = opts.patch_resolution.max(2);
            let total = res.pow(p as u32);
            let mut cloud: Vec<GroupPoint<R>> = Vec::new();
            let reach = r * rf::<R>(3.0);
            for flat in 0..total {
                let mut rem = flat;
                let mut t = Vec::with_capacity(p);
                for axis in 0..p {
                    let i = rem % res;
                    rem /= res;
                    let frac = rf::<R>(i as f64 / (res - 1) as f64);
                    t.push(probe.t[axis] - reach + (reach + reach) * frac);
                }
                if !chart.contains(&t) {
                    continue;
                }
                let y = alg.point(chart.eval(&t))?;
                let rel = alg.product(&x_inv, &y);
                if rf::<R>(rel.euclidean_norm()) <= r {
                    cloud.push(rel);
                }
            }
            let radius = r.powf(rf::<R>(theta));
            let cover = greedy_5r_cover(norm, alg, &cloud, radius / rf::<R>(2.0))?;
            let count = cover.count();
            let ceiling = eps.powi(eps_power) * r.powf(rf::<R>(exponent));
            let normalized = rf::<R>(count as f64) / ceiling;
            let audit = ClassAudit {
                class,
                probe_t: probe.t.clone(),
                count,
                radius,
                exponent: rf::<R>(exponent),
                normalized,
            };
            match class {
                SampleClass::A => experiment.class_a.push(audit),
                SampleClass::B => experiment.class_b.push(audit),
                _ => unreachable!(),
            }
        }
    }
    Ok(experiment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::builtin_chart;
    use num_rational::BigRational;

    #[test]
    fn bounds_match_the_heisenberg_cases() {
        // H^n, p >= 2 (ell = 1): bound = p + 1 - lambda
        let h2 = StratifiedAlgebra::<f64>::heisenberg(2).unwrap();
        for p in 2..=4 {
            let profile = degree_profile(&h2, p).unwrap();
            let b = charset_dim_bound(&profile, 0.75).unwrap();
            assert_eq!(b.ell, 1);
            assert!((b.bound - (p as f64 + 1.0 - 0.75)).abs() < 1e-15);
        }
        // H^1 curves (ell = 2), lambda = 1: bound = D(1) - 1 = 1 = 2/(1+1)
        let h1 = StratifiedAlgebra::<f64>::heisenberg(1).unwrap();
        let profile = degree_profile(&h1, 1).unwrap();
        let b = charset_dim_bound(&profile, 1.0).unwrap();
        assert_eq!(b.bound, 1.0);
        // and the third case with exact rationals: lambda = 1/2 gives
        // 2/(1+lambda) = 4/3 exactly
        let h1q = StratifiedAlgebra::<BigRational>::heisenberg(1).unwrap();
        let profq = degree_profile(&h1q, 1).unwrap();
        let bq = charset_dim_bound(&profq, BigRational::ratio(1, 2)).unwrap();
        assert_eq!(bq.bound, BigRational::ratio(4, 3));
        // case agreement at lambda = 1/(ell-1) = 1
        let at_join = charset_dim_bound(&profq, BigRational::ratio(1, 1)).unwrap();
        assert_eq!(at_join.bound, BigRational::from_int(1));
    }

    #[test]
    fn bound_is_continuous_and_below_max_degree() {
        let engel = StratifiedAlgebra::<f64>::engel().unwrap();
        let profile = degree_profile(&engel, 2).unwrap(); // ell = 2
        let join = 1.0 / (profile.ell - 1) as f64;
        let just_below = charset_dim_bound(&profile, join - 1e-9).unwrap().bound;
        let at = charset_dim_bound(&profile, join).unwrap().bound;
        assert!((just_below - at).abs() < 1e-8);
        for lambda in [0.1, 0.3, 0.7, 1.0] {
            let b = charset_dim_bound(&profile, lambda).unwrap();
            assert!(b.bound < profile.max_degree as f64);
        }
        assert!(charset_dim_bound(&profile, 0.0).is_err());
        assert!(charset_dim_bound(&profile, 1.5).is_err());
    }

    #[test]
    fn third_case_formula_value() {
        // ell = 2, lambda = 1/2: bound = D - (2 * 1/2) / (3/2) = D - 2/3
        let engel = StratifiedAlgebra::<BigRational>::engel().unwrap();
        let profile = degree_profile(&engel, 2).unwrap();
        let b = charset_dim_bound(&profile, BigRational::ratio(1, 2)).unwrap();
        let expect = BigRational::from_int(5) - BigRational::ratio(2, 3);
        assert_eq!(b.bound, expect);
    }

    #[test]
    fn saddle_experiment_counts_stay_bounded() {
        let alg = StratifiedAlgebra::<f64>::heisenberg(1).unwrap();
        let norm = HomogeneousQuasiNorm::standard(alg.step());
        let chart = builtin_chart(&alg, "saddle").unwrap();
        let eps = 0.5;
        let mut normalized = Vec::new();
        for &r in &[1e-1, 3e-2, 1e-2] {
            let exp = charset_covering_experiment(
                &alg,
                &norm,
                &chart,
                eps,
                r,
                &ExperimentOptions::default(),
            )
            .unwrap();
            assert!(!exp.is_empty(), "saddle has a characteristic point");
            assert!(exp.class_b.is_empty(), "ell = 1 leaves class B empty");
            let worst = exp
                .class_a
                .iter()
                .map(|a| a.normalized)
                .fold(0.0f64, f64::max);
            normalized.push(worst);
        }
        // the implied constant must not blow up as r decreases
        assert!(
            normalized[2] <= 2.0 * normalized[0].max(normalized[1]) + 1e-9,
            "{normalized:?}"
        );
    }

    #[test]
    fn transversal_chart_yields_empty_experiment() {
        let alg = StratifiedAlgebra::<f64>::heisenberg(1).unwrap();
        let norm = HomogeneousQuasiNorm::standard(alg.step());
        let chart = builtin_chart(&alg, "vertical-axis").unwrap();
        let exp = charset_covering_experiment(
            &alg,
            &norm,
            &chart,
            0.5,
            0.05,
            &ExperimentOptions::default(),
        )
        .unwrap();
        assert!(exp.is_empty());
        // abelian groups have no characteristic points at all
        let ab = StratifiedAlgebra::<f64>::abelian(3).unwrap();
        let nb = HomogeneousQuasiNorm::standard(1);
        let plane = builtin_chart(&ab, "plane").unwrap();
        let exp = charset_covering_experiment(
            &ab,
            &nb,
            &plane,
            0.5,
            0.05,
            &ExperimentOptions::default(),
        )
        .unwrap();
        assert!(exp.is_empty());
    }
}
