//! Stratified Lie algebras and the group arithmetic they induce:
//! validation of the stratification, the baked BCH group law, inverses,
//! dilations, left translations and the left-invariant frame.

mod bch;

pub(crate) use bch::BracketTable;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::poly::Poly;
use crate::scalar::Scalar;
use num_rational::BigRational;
use num_traits::Zero;

/// A point of the group in exponential coordinates of the first kind.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupPoint<S>(Vec<S>);

impl<S: Scalar> GroupPoint<S> {
    pub fn new(coords: Vec<S>) -> Self {
        GroupPoint(coords)
    }

    pub fn zero(n: usize) -> Self {
        GroupPoint(vec![S::zero(); n])
    }

    pub fn coords(&self) -> &[S] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<S> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Euclidean norm of the coordinate vector (graded-basis `|.|`).
    pub fn euclidean_norm(&self) -> f64 {
        self.0.iter().map(|v| v.to_f64_lossy().powi(2)).sum::<f64>().sqrt()
    }
}

impl<S: Scalar> std::ops::Index<usize> for GroupPoint<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

/// One declared bracket `[X_i, X_j] = sum_k c X_k` (0-based indices).
#[derive(Clone, Debug)]
pub struct BracketSpec {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: BigRational,
}

/// Invariant violations found by [`StratifiedAlgebra::validate`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// `c_ij^k != 0` with `d_k != d_i + d_j` (1-based indices reported).
    Grading { i: usize, j: usize, k: usize },
    /// `c_ij^k + c_ji^k != 0`.
    Antisymmetry { i: usize, j: usize, k: usize },
    /// Jacobi identity fails on the basis triple (1-based).
    Jacobi { i: usize, j: usize, k: usize },
    /// `[V_1, V_i]` does not span `V_{i+1}` (layers 1-based).
    Generation { layer: usize, expected_rank: usize, actual_rank: usize },
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_valid() {
            return write!(f, "valid stratified algebra");
        }
        writeln!(f, "{} violation(s):", self.violations.len())?;
        for v in &self.violations {
            match v {
                Violation::Grading { i, j, k } => {
                    writeln!(f, "  grading: c_{{{i},{j}}}^{{{k}}} nonzero but d_{k} != d_{i} + d_{j}")?
                }
                Violation::Antisymmetry { i, j, k } => {
                    writeln!(f, "  antisymmetry: c_{{{i},{j}}}^{{{k}}} != -c_{{{j},{i}}}^{{{k}}}")?
                }
                Violation::Jacobi { i, j, k } => {
                    writeln!(f, "  jacobi: identity fails on (X_{i}, X_{j}, X_{k})")?
                }
                Violation::Generation { layer, expected_rank, actual_rank } => writeln!(
                    f,
                    "  generation: [V_1, V_{layer}] has rank {actual_rank} < {expected_rank} in V_{}",
                    layer + 1
                )?,
            }
        }
        Ok(())
    }
}

/// A stratified Lie algebra together with the group structure it generates.
///
/// The construction runs entirely in exact rational arithmetic: the Dynkin
/// expansion of the BCH series is truncated at the step (exact by
/// nilpotency) and the resulting per-coordinate polynomials `Q_l` and the
/// left-invariant frame coefficients `a_i^l` are then converted once into
/// the working scalar `S`.
#[derive(Clone, Debug)]
pub struct StratifiedAlgebra<S: Scalar> {
    layers: Vec<usize>,
    offsets: Vec<usize>,
    degrees: Vec<usize>,
    raw_brackets: Vec<BracketSpec>,
    brackets: BracketTable,
    bch_exact: Vec<Poly<BigRational>>,
    bch: Vec<Poly<S>>,
    bch_fast: Vec<crate::poly::FastPoly<S>>,
    frame_polys: Vec<Vec<Poly<S>>>,
}

impl<S: Scalar> StratifiedAlgebra<S> {
    /// Builds the algebra and bakes the group-law tables. Structural
    /// problems (bad indices, empty layers) error out; semantic problems
    /// (grading, Jacobi, ...) are left to [`Self::validate`].
    pub fn from_layers_and_brackets(layers: Vec<usize>, raw: Vec<BracketSpec>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Structure("layer list is empty".into()));
        }
        if layers.iter().any(|&d| d == 0) {
            return Err(Error::Structure("every layer must have positive dimension".into()));
        }
        let step = layers.len();
        let n: usize = layers.iter().sum();
        let mut offsets = Vec::with_capacity(step + 1);
        offsets.push(0);
        for &d in &layers {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut degrees = vec![0usize; n];
        for (j, w) in layers.iter().enumerate() {
            for i in offsets[j]..offsets[j] + w {
                degrees[i] = j + 1;
            }
        }
        for b in &raw {
            if b.i >= n || b.j >= n || b.k >= n {
                return Err(Error::Structure(format!(
                    "bracket [X_{}, X_{}] -> X_{} indexes outside dimension {n}",
                    b.i + 1,
                    b.j + 1,
                    b.k + 1
                )));
            }
            if b.i == b.j {
                return Err(Error::Structure(format!(
                    "bracket [X_{}, X_{}] of a vector with itself must be zero",
                    b.i + 1,
                    b.j + 1
                )));
            }
        }

        let mut brackets = BracketTable::default();
        for b in &raw {
            if b.c.is_zero() {
                continue;
            }
            let entry = brackets.table.entry((b.i, b.j)).or_default();
            match entry.iter_mut().find(|(k, _)| *k == b.k) {
                Some((_, c)) => *c += b.c.clone(),
                None => entry.push((b.k, b.c.clone())),
            }
        }
        // Close antisymmetrically where the mirror pair was not declared.
        let declared: Vec<(usize, usize)> = brackets.table.keys().copied().collect();
        for (i, j) in declared {
            if !brackets.table.contains_key(&(j, i)) {
                let neg: Vec<(usize, BigRational)> = brackets.table[&(i, j)]
                    .iter()
                    .map(|(k, c)| (*k, -c.clone()))
                    .collect();
                brackets.table.insert((j, i), neg);
            }
        }

        let bch_exact = bch::bch_group_law(n, step, &brackets);
        // Q_l = z_l - x_l - y_l
        let q_exact: Vec<Poly<BigRational>> = (0..n)
            .map(|l| {
                bch_exact[l]
                    .sub(&Poly::var(2 * n, l))
                    .sub(&Poly::var(2 * n, n + l))
            })
            .collect();
        // a_i^l(x) = delta_i^l + dQ_l/dy_i at y = 0
        let mut frame_exact: Vec<Vec<Poly<BigRational>>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut per_l = Vec::with_capacity(n);
            for (l, q) in q_exact.iter().enumerate() {
                let mut a = q.partial(n + i).restrict_to_prefix(n);
                if l == i {
                    a = a.add(&Poly::constant(n, BigRational::from_integer(1.into())));
                }
                per_l.push(a);
            }
            frame_exact.push(per_l);
        }

        let bch: Vec<Poly<S>> = q_exact.iter().map(Poly::convert).collect();
        let bch_fast = bch.iter().map(crate::poly::FastPoly::compile).collect();
        let frame_polys = frame_exact
            .iter()
            .map(|per_l| per_l.iter().map(Poly::convert).collect())
            .collect();

        Ok(StratifiedAlgebra {
            layers,
            offsets,
            degrees,
            raw_brackets: raw,
            brackets,
            bch_exact: q_exact,
            bch,
            bch_fast,
            frame_polys,
        })
    }

    // ----- structure accessors -------------------------------------------

    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn step(&self) -> usize {
        self.layers.len()
    }

    pub fn layer_dims(&self) -> &[usize] {
        &self.layers
    }

    /// Degree `d_i` of the 0-based basis index.
    pub fn degree_of(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Index range of layer `j` (1-based layer).
    pub fn layer_range(&self, j: usize) -> std::ops::Range<usize> {
        assert!(j >= 1 && j <= self.step(), "layer {j} out of range");
        self.offsets[j - 1]..self.offsets[j]
    }

    /// Layer slice `x^j` of a point (1-based layer).
    pub fn layer_slice<'a>(&self, x: &'a GroupPoint<S>, j: usize) -> &'a [S] {
        &x.coords()[self.layer_range(j)]
    }

    /// Homogeneous dimension `Q = sum_j j * n_j`.
    pub fn homogeneous_dimension(&self) -> usize {
        self.layers.iter().enumerate().map(|(j, &d)| (j + 1) * d).sum()
    }

    pub fn identity(&self) -> GroupPoint<S> {
        GroupPoint::zero(self.dim())
    }

    pub fn point(&self, coords: Vec<S>) -> Result<GroupPoint<S>> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, group has dimension {}",
                coords.len(),
                self.dim()
            )));
        }
        Ok(GroupPoint(coords))
    }

    /// Lie bracket of two coordinate vectors (as algebra elements).
    pub fn bracket(&self, u: &[S], v: &[S]) -> Vec<S> {
        assert_eq!(u.len(), self.dim());
        assert_eq!(v.len(), self.dim());
        self.brackets.bracket_vectors(self.dim(), u, v)
    }

    /// Group-law correction polynomials `Q_l` over the 2n symbols (x, y).
    pub fn group_law_polynomials(&self) -> &[Poly<S>] {
        &self.bch
    }

    /// The same polynomials with their exact rational coefficients, as
    /// produced by the truncated series before scalar conversion.
    pub fn group_law_polynomials_exact(&self) -> &[Poly<BigRational>] {
        &self.bch_exact
    }

    // ----- group operations -----------------------------------------------

    fn check_point(&self, x: &GroupPoint<S>) {
        assert_eq!(
            x.dim(),
            self.dim(),
            "point dimension {} does not match group dimension {}",
            x.dim(),
            self.dim()
        );
    }

    /// Group product `x . y = x + y + Q(x, y)`.
    pub fn product(&self, x: &GroupPoint<S>, y: &GroupPoint<S>) -> GroupPoint<S> {
        self.check_point(x);
        self.check_point(y);
        let mut out = Vec::new();
        self.product_into(x.coords(), y.coords(), &mut out);
        GroupPoint(out)
    }

    /// Allocation-light product on raw coordinate slices.
    pub(crate) fn product_into(&self, x: &[S], y: &[S], out: &mut Vec<S>) {
        out.clear();
        for l in 0..self.dim() {
            out.push(x[l].clone() + y[l].clone() + self.bch_fast[l].eval_split(x, y));
        }
    }

    /// `x^{-1} . y` on raw slices, reusing scratch storage.
    pub(crate) fn relative_into(&self, x: &[S], y: &[S], neg: &mut Vec<S>, out: &mut Vec<S>) {
        neg.clear();
        neg.extend(x.iter().map(|v| -v.clone()));
        let (a, b) = (&*neg, y);
        out.clear();
        for l in 0..self.dim() {
            out.push(a[l].clone() + b[l].clone() + self.bch_fast[l].eval_split(a, b));
        }
    }

    /// Group inverse; `-x` in exponential coordinates of the first kind.
    pub fn inverse(&self, x: &GroupPoint<S>) -> GroupPoint<S> {
        self.check_point(x);
        GroupPoint(x.coords().iter().map(|v| -v.clone()).collect())
    }

    /// Left translation `l_z(x) = z . x`.
    pub fn translate(&self, z: &GroupPoint<S>, x: &GroupPoint<S>) -> GroupPoint<S> {
        self.product(z, x)
    }

    /// Anisotropic dilation: coordinate `i` scales by `r^{d_i}`.
    pub fn dilate(&self, r: &S, x: &GroupPoint<S>) -> Result<GroupPoint<S>> {
        self.check_point(x);
        if !(*r > S::zero()) {
            return Err(Error::Domain(format!("dilation factor must be positive, got {r}")));
        }
        Ok(self.dilate_unchecked(r, x))
    }

    pub(crate) fn dilate_unchecked(&self, r: &S, x: &GroupPoint<S>) -> GroupPoint<S> {
        let coords = x
            .coords()
            .iter()
            .enumerate()
            .map(|(i, v)| v.clone() * r.powi(self.degrees[i] as u32))
            .collect();
        GroupPoint(coords)
    }

    /// Coefficients `a_i^l(x)` of the left-invariant field `X_i` at `x`
    /// (0-based basis index), i.e. column `i` of `d l_x` at the origin.
    pub fn vector_field_coeffs(&self, i: usize, x: &GroupPoint<S>) -> Vec<S> {
        assert!(i < self.dim(), "basis index {i} out of range");
        self.check_point(x);
        self.frame_polys[i].iter().map(|p| p.eval(x.coords())).collect()
    }

    /// The frame matrix `A(x)` with `A[l][i] = a_i^l(x)`: columns are the
    /// left-invariant fields at `x`, equivalently the differential of
    /// `y -> x . y` at `y = 0`.
    pub fn frame_matrix(&self, x: &GroupPoint<S>) -> Mat<S> {
        let n = self.dim();
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            for (l, p) in self.frame_polys[i].iter().enumerate() {
                m[(l, i)] = p.eval(x.coords());
            }
        }
        m
    }

    /// Inverse frame matrix `A(x)^{-1}`: pushes coordinate components of a
    /// tangent vector at `x` to the left-invariant frame (= to the origin).
    pub fn frame_matrix_inverse(&self, x: &GroupPoint<S>) -> Mat<S> {
        // A(x) is unipotent lower-triangular in the graded order, so it is
        // always invertible; the tolerance never fires.
        self.frame_matrix(x).inverse(1e-300).expect("frame matrix is unipotent")
    }

    // ----- validation ------------------------------------------------------

    /// Checks grading, antisymmetry, Jacobi and the generating condition
    /// `V_{i+1} = [V_1, V_i]`, all in exact rational arithmetic.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.dim();
        let step = self.step();

        // grading
        for (&(i, j), entries) in &self.brackets.table {
            for (k, c) in entries {
                if !c.is_zero() && self.degrees[*k] != self.degrees[i] + self.degrees[j] {
                    // report each unordered pair once
                    if i < j {
                        report.violations.push(Violation::Grading { i: i + 1, j: j + 1, k: k + 1 });
                    }
                }
            }
        }
        // antisymmetry
        for (&(i, j), entries) in &self.brackets.table {
            if i >= j {
                continue;
            }
            for (k, c) in entries {
                let mirror = self.brackets.constant(j, i, *k);
                if !(c.clone() + mirror).is_zero() {
                    report.violations.push(Violation::Antisymmetry {
                        i: i + 1,
                        j: j + 1,
                        k: k + 1,
                    });
                }
            }
        }
        // Jacobi on basis triples
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut fails = false;
                    'outer: for l in 0..n {
                        let mut acc = BigRational::zero();
                        for m in 0..n {
                            acc += self.brackets.constant(j, k, m) * self.brackets.constant(i, m, l)
                                + self.brackets.constant(k, i, m) * self.brackets.constant(j, m, l)
                                + self.brackets.constant(i, j, m) * self.brackets.constant(k, m, l);
                        }
                        if !acc.is_zero() {
                            fails = true;
                            break 'outer;
                        }
                    }
                    if fails {
                        report.violations.push(Violation::Jacobi { i: i + 1, j: j + 1, k: k + 1 });
                    }
                }
            }
        }
        // generation: [V_1, V_i] spans V_{i+1}
        for layer in 1..step {
            let v1 = self.offsets[0]..self.offsets[1];
            let vi = self.offsets[layer - 1]..self.offsets[layer];
            let target = self.offsets[layer]..self.offsets[layer + 1];
            let expected = target.len();
            let mut rows: Vec<Vec<BigRational>> = Vec::new();
            for a in v1.clone() {
                for b in vi.clone() {
                    if let Some(entries) = self.brackets.table.get(&(a, b)) {
                        let mut row = vec![BigRational::zero(); expected];
                        for (k, c) in entries {
                            if target.contains(k) {
                                row[k - target.start] = c.clone();
                            }
                        }
                        rows.push(row);
                    }
                }
            }
            let actual = if rows.is_empty() {
                0
            } else {
                Mat::from_rows(rows).rank(0.0)
            };
            if actual < expected {
                report.violations.push(Violation::Generation {
                    layer,
                    expected_rank: expected,
                    actual_rank: actual,
                });
            }
        }
        report
    }

    /// Declared brackets as given (for serialization round-trips).
    pub fn raw_brackets(&self) -> &[BracketSpec] {
        &self.raw_brackets
    }

    // ----- builtin groups --------------------------------------------------

    pub fn abelian(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("abelian group needs positive dimension".into()));
        }
        Self::from_layers_and_brackets(vec![n], Vec::new())
    }

    /// Heisenberg group H^n: layers [2n, 1] with [X_i, X_{n+i}] = X_{2n+1}.
    pub fn heisenberg(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("heisenberg index must be positive".into()));
        }
        let one = BigRational::from_integer(1.into());
        let raw = (0..n)
            .map(|i| BracketSpec { i, j: n + i, k: 2 * n, c: one.clone() })
            .collect();
        Self::from_layers_and_brackets(vec![2 * n, 1], raw)
    }

    /// Engel group: layers [2, 1, 1], [X1, X2] = X3, [X1, X3] = X4.
    pub fn engel() -> Result<Self> {
        let one = BigRational::from_integer(1.into());
        let raw = vec![
            BracketSpec { i: 0, j: 1, k: 2, c: one.clone() },
            BracketSpec { i: 0, j: 2, k: 3, c: one },
        ];
        Self::from_layers_and_brackets(vec![2, 1, 1], raw)
    }

    /// Free nilpotent group of step 2 on m generators: layers
    /// [m, m(m-1)/2] with [X_i, X_j] = X_{k(i,j)} for i < j, lexicographic.
    pub fn free_step2(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Domain("free_step2 needs at least 2 generators".into()));
        }
        let one = BigRational::from_integer(1.into());
        let mut raw = Vec::new();
        let mut k = m;
        for i in 0..m {
            for j in i + 1..m {
                raw.push(BracketSpec { i, j, k, c: one.clone() });
                k += 1;
            }
        }
        Self::from_layers_and_brackets(vec![m, m * (m - 1) / 2], raw)
    }

    /// Builtin lookup by name: `abelian:n`, `heisenberg:n`, `engel`,
    /// `free_step2:m`.
    pub fn builtin(name: &str) -> Result<Self> {
        let (head, arg) = match name.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (name, None),
        };
        let parse_arg = |what: &str| -> Result<usize> {
            let a = arg.ok_or_else(|| {
                Error::Parse(format!("builtin '{head}' needs a parameter, e.g. {head}:{what}"))
            })?;
            a.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad parameter '{a}' for builtin '{head}'")))
        };
        match head {
            "abelian" => Self::abelian(parse_arg("3")?),
            "heisenberg" => Self::heisenberg(parse_arg("1")?),
            "engel" => {
                if arg.is_some() {
                    return Err(Error::Parse("builtin 'engel' takes no parameter".into()));
                }
                Self::engel()
            }
            "free_step2" => Self::free_step2(parse_arg("2")?),
            other => Err(Error::Parse(format!(
                "unknown builtin group '{other}' (expected abelian:n, heisenberg:n, engel, free_step2:m)"
            ))),
        }
    }
}
