//! Truncated full Fock spaces over `ℂⁿ`, creation operators, and the
//! automorphism correspondence over functions on finitely many points.
//!
//! Basis words are ordered level-major, then lexicographically; letters are
//! stored 0-based and printed 1-based. Truncation at level `K` means the
//! creation operators annihilate the top level, so `V_i* V_j = δ_ij (1 - P_K)`
//! while `Σ_i V_i V_i* = 1 - P_vac` holds exactly.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::circle_symbols::LaurentSymbol;
use crate::linalg::{hermitian_eigen, identity, max_abs, max_abs_diff};
use crate::toeplitz_index::toeplitz_section;
use crate::{Error, Result, C64};

pub const MAX_FOCK_DIM: usize = 1_000_000;
/// Largest Fock dimension for which dense operator matrices are formed.
pub const MAX_DENSE_DIM: usize = 2048;
pub const EXACT_TOL: f64 = 1e-12;
pub const TENSOR_ISO_TOL: f64 = 1e-10;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Full Fock space `ℂ ⊕ ℂⁿ ⊕ (ℂⁿ)^{⊗2} ⊕ … ⊕ (ℂⁿ)^{⊗K}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockSpace {
    fiber_dim: usize,
    max_level: usize,
    // offsets[k] = index of the first word of length k; offsets[K+1] = dim
    offsets: Vec<usize>,
}

impl FockSpace {
    pub fn new(fiber_dim: usize, max_level: usize) -> Result<Self> {
        if fiber_dim == 0 || max_level == 0 {
            return Err(Error::InvalidInput(format!(
                "Fock space needs n >= 1 and K >= 1, got n={fiber_dim}, K={max_level}"
            )));
        }
        let mut offsets = vec![0usize];
        let mut level_size = 1usize;
        for _ in 0..=max_level {
            let next = offsets
                .last()
                .and_then(|o| o.checked_add(level_size))
                .filter(|&d| d <= MAX_FOCK_DIM)
                .ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "Fock dimension for n={fiber_dim}, K={max_level} exceeds {MAX_FOCK_DIM}"
                    ))
                })?;
            offsets.push(next);
            level_size = level_size.saturating_mul(fiber_dim);
        }
        Ok(Self {
            fiber_dim,
            max_level,
            offsets,
        })
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    pub fn dim(&self) -> usize {
        self.offsets[self.max_level + 1]
    }

    /// `[start, end)` index range of words of the given length.
    pub fn level_range(&self, level: usize) -> std::ops::Range<usize> {
        self.offsets[level]..self.offsets[level + 1]
    }

    pub fn level_of(&self, index: usize) -> usize {
        assert!(index < self.dim(), "index {index} out of range");
        self.offsets.partition_point(|&o| o <= index) - 1
    }

    /// Index of a word given by 0-based letters.
    pub fn index_of(&self, word: &[usize]) -> Option<usize> {
        if word.len() > self.max_level || word.iter().any(|&l| l >= self.fiber_dim) {
            return None;
        }
        let rank = word.iter().fold(0usize, |acc, &l| acc * self.fiber_dim + l);
        Some(self.offsets[word.len()] + rank)
    }

    /// 0-based letters of the word at `index`.
    pub fn word(&self, index: usize) -> Vec<usize> {
        let level = self.level_of(index);
        let mut rank = index - self.offsets[level];
        let mut word = vec![0; level];
        for slot in word.iter_mut().rev() {
            *slot = rank % self.fiber_dim;
            rank /= self.fiber_dim;
        }
        word
    }

    /// 1-based label, e.g. `"12"`; the vacuum is `"∅"`.
    pub fn label(&self, index: usize) -> String {
        let word = self.word(index);
        if word.is_empty() {
            "∅".into()
        } else {
            word.iter()
                .map(|l| (l + 1).to_string())
                .collect::<Vec<_>>()
                .join(if self.fiber_dim > 9 { "." } else { "" })
        }
    }

    /// Orthogonal projection onto one level.
    pub fn level_projection(&self, level: usize) -> DMatrix<C64> {
        let range = self.level_range(level);
        DMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            if r == c && range.contains(&r) {
                one()
            } else {
                zero()
            }
        })
    }

    fn ensure_dense(&self) -> Result<()> {
        if self.dim() > MAX_DENSE_DIM {
            return Err(Error::InvalidInput(format!(
                "Fock dimension {} exceeds the dense operator limit {MAX_DENSE_DIM}",
                self.dim()
            )));
        }
        Ok(())
    }
}

pub fn build_fock(n: usize, max_level: usize) -> Result<FockSpace> {
    FockSpace::new(n, max_level)
}

/// Creation operator `T_ξ`: prepends `ξ` to every word below the top level.
#[derive(Clone, Debug)]
pub struct CreationOperator {
    xi: Vec<C64>,
    fock: FockSpace,
    matrix: DMatrix<C64>,
}

impl CreationOperator {
    pub fn xi(&self) -> &[C64] {
        &self.xi
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn adjoint(&self) -> DMatrix<C64> {
        self.matrix.adjoint()
    }

    /// `T_ξ* (ξ₁⊗ξ₂⊗…⊗ξ_k) = ⟨ξ,ξ₁⟩ ξ₂⊗…⊗ξ_k`, applied word by word
    /// without going through the matrix.
    pub fn annihilate(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![zero(); self.fock.dim()];
        for (idx, &coeff) in v.iter().enumerate() {
            if coeff == zero() {
                continue;
            }
            let word = self.fock.word(idx);
            if let Some((&first, rest)) = word.split_first() {
                let target = self.fock.index_of(rest).expect("shorter word exists");
                out[target] += self.xi[first].conj() * coeff;
            }
        }
        out
    }
}

pub fn creation(xi: &[C64], fock: &FockSpace) -> Result<CreationOperator> {
    if xi.len() != fock.fiber_dim() {
        return Err(Error::InvalidInput(format!(
            "vector has {} components, fiber dimension is {}",
            xi.len(),
            fock.fiber_dim()
        )));
    }
    if xi.iter().all(|c| *c == zero()) {
        return Err(Error::InvalidInput(
            "creation vector must be nonzero".into(),
        ));
    }
    fock.ensure_dense()?;
    let mut matrix = DMatrix::zeros(fock.dim(), fock.dim());
    for col in 0..fock.offsets[fock.max_level()] {
        let word = fock.word(col);
        for (letter, &c) in xi.iter().enumerate() {
            let mut longer = Vec::with_capacity(word.len() + 1);
            longer.push(letter);
            longer.extend_from_slice(&word);
            let row = fock.index_of(&longer).expect("level below K");
            matrix[(row, col)] = c;
        }
    }
    Ok(CreationOperator {
        xi: xi.to_vec(),
        fock: fock.clone(),
        matrix,
    })
}

/// Standard basis vector `e_i` of `ℂⁿ`.
pub fn unit_vector(n: usize, i: usize) -> Vec<C64> {
    (0..n)
        .map(|j| if i == j { one() } else { zero() })
        .collect()
}

/// Outcome of one identity check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub check: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl RelationCheck {
    pub fn new(check: impl Into<String>, max_residual: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            max_residual,
            tolerance,
            pass: max_residual <= tolerance,
        }
    }
}

/// Ordered list of checks; serializes as a JSON array.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn push(&mut self, check: RelationCheck) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: RelationReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{} ({:e} > {:e})", c.check, c.max_residual, c.tolerance))
            .collect()
    }

    /// Turns any failing check into [`Error::RelationViolation`].
    pub fn ensure(self) -> Result<Self> {
        if self.all_pass() {
            Ok(self)
        } else {
            Err(Error::RelationViolation(Box::new(self)))
        }
    }
}

/// Toeplitz/Cuntz relations for `V_i = T_{e_i}` on the truncated Fock space:
///
/// - `V_i* V_j = δ_ij (1 - P_K)`;
/// - `Σ_i V_i V_i* = 1 - P_vac`;
/// - `1 - Σ_i V_i V_i*` is positive semidefinite;
/// - for `n = 1`, `V_1` on levels below `K` equals the `(K+1)×K` section of
///   the shift symbol `z`.
pub fn check_toeplitz_relations(fock: &FockSpace) -> Result<RelationReport> {
    let n = fock.fiber_dim();
    let dim = fock.dim();
    let ops = (0..n)
        .map(|i| creation(&unit_vector(n, i), fock))
        .collect::<Result<Vec<_>>>()?;
    let top_complement = identity(dim) - fock.level_projection(fock.max_level());
    let mut report = RelationReport::default();

    let mut isometry = 0.0f64;
    for (i, vi) in ops.iter().enumerate() {
        let vi_adj = vi.adjoint();
        for (j, vj) in ops.iter().enumerate() {
            let product = &vi_adj * vj.matrix();
            let residual = if i == j {
                max_abs_diff(&product, &top_complement)
            } else {
                max_abs(&product)
            };
            isometry = isometry.max(residual);
        }
    }
    report.push(RelationCheck::new(
        "isometry_truncated",
        isometry,
        EXACT_TOL,
    ));

    let mut row_sum = DMatrix::<C64>::zeros(dim, dim);
    for v in &ops {
        row_sum += v.matrix() * v.adjoint();
    }
    let vacuum_complement = identity(dim) - fock.level_projection(0);
    report.push(RelationCheck::new(
        "row_sum_vacuum_defect",
        max_abs_diff(&row_sum, &vacuum_complement),
        EXACT_TOL,
    ));

    let defect = identity(dim) - row_sum;
    let smallest = hermitian_eigen(&defect)?.eigenvalues[0];
    report.push(RelationCheck::new(
        "defect_psd",
        (-smallest).max(0.0),
        EXACT_TOL,
    ));

    if n == 1 {
        let k = fock.max_level();
        let shift = toeplitz_section(&LaurentSymbol::z(), k + 1, k);
        let restricted = ops[0].matrix().columns(0, k).into_owned();
        report.push(RelationCheck::new(
            "shift_agreement",
            max_abs_diff(&restricted, &shift),
            EXACT_TOL,
        ));
    }
    Ok(report)
}

/// `B = ℂ^p` under pointwise operations, twisted by a permutation `σ` of the
/// points. The automorphism pushes functions forward: `α(b)(σ(i)) = b(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismCorrespondence {
    images: Vec<usize>,
}

impl AutomorphismCorrespondence {
    /// `images[i]` is `σ(i)`, 0-based.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let p = images.len();
        if p == 0 {
            return Err(Error::InvalidInput("need at least one point".into()));
        }
        let mut seen = vec![false; p];
        for &j in &images {
            if j >= p || std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidInput(format!(
                    "{images:?} is not a permutation of 0..{p}"
                )));
            }
        }
        Ok(Self { images })
    }

    /// Images written 1-based, e.g. `[2, 3, 1]` for the cycle 1→2→3→1.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let invalid = || {
            Error::InvalidInput(format!(
                "{images:?} is not a permutation of 1..={}",
                images.len()
            ))
        };
        if images.contains(&0) {
            return Err(invalid());
        }
        Self::new(images.iter().map(|&j| j - 1).collect()).map_err(|_| invalid())
    }

    pub fn identity(p: usize) -> Result<Self> {
        Self::new((0..p).collect())
    }

    /// The cyclic shift `i ↦ i+1 mod p`.
    pub fn cycle(p: usize) -> Result<Self> {
        Self::new((0..p).map(|i| (i + 1) % p).collect())
    }

    pub fn points(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    fn check_len(&self, b: &[C64]) -> Result<()> {
        if b.len() != self.points() {
            return Err(Error::InvalidInput(format!(
                "B-element has {} entries, expected {}",
                b.len(),
                self.points()
            )));
        }
        Ok(())
    }

    pub fn apply(&self, b: &[C64]) -> Vec<C64> {
        let mut out = vec![zero(); b.len()];
        for (i, &v) in b.iter().enumerate() {
            out[self.images[i]] = v;
        }
        out
    }

    pub fn apply_power(&self, b: &[C64], power: usize) -> Vec<C64> {
        (0..power).fold(b.to_vec(), |acc, _| self.apply(&acc))
    }

    /// Permutation matrix `u e_i = e_{σ(i)}`; `u diag(b) u* = diag(α(b))`.
    pub fn unitary(&self) -> DMatrix<C64> {
        let p = self.points();
        DMatrix::from_fn(
            p,
            p,
            |r, c| if self.images[c] == r { one() } else { zero() },
        )
    }
}

fn pointwise(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Left action of `a` on `x₁⊗…⊗x_k` in `X^{(k)} ≅ B`:
/// `α^k(a) α^{k-1}(x₁) ⋯ α(x_{k-1}) x_k`.
pub fn module_power_action(
    corr: &AutomorphismCorrespondence,
    a: &[C64],
    factors: &[Vec<C64>],
) -> Result<Vec<C64>> {
    let k = factors.len();
    if k == 0 {
        return Err(Error::InvalidInput("tensor power k must be >= 1".into()));
    }
    corr.check_len(a)?;
    for x in factors {
        corr.check_len(x)?;
    }
    let mut out = corr.apply_power(a, k);
    for (pos, x) in factors.iter().enumerate() {
        out = pointwise(&out, &corr.apply_power(x, k - 1 - pos));
    }
    Ok(out)
}

/// Image of a simple tensor under `x ⊗ y ↦ α(x) y`, iterated.
pub fn identify_tensor(corr: &AutomorphismCorrespondence, factors: &[Vec<C64>]) -> Vec<C64> {
    factors
        .iter()
        .skip(1)
        .fold(factors[0].clone(), |acc, x| pointwise(&corr.apply(&acc), x))
}

/// B-valued inner product of two simple tensors, unwound one factor at a
/// time by `⟨ξ₁⊗η₁, ξ₂⊗η₂⟩ = ⟨η₁, φ(⟨ξ₁,ξ₂⟩) η₂⟩` with `φ(b)y = α(b)y`
/// and `⟨x, y⟩ = x̄ y`.
pub fn recursive_inner_product(
    corr: &AutomorphismCorrespondence,
    left: &[Vec<C64>],
    right: &[Vec<C64>],
) -> Vec<C64> {
    let conj_mul =
        |x: &[C64], y: &[C64]| -> Vec<C64> { x.iter().zip(y).map(|(a, b)| a.conj() * b).collect() };
    let mut acc = conj_mul(&left[0], &right[0]);
    for (x, y) in left.iter().zip(right).skip(1) {
        acc = conj_mul(x, &pointwise(&corr.apply(&acc), y));
    }
    acc
}

fn random_element(rng: &mut ChaCha8Rng, p: usize) -> Vec<C64> {
    (0..p)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect()
}

/// Random trials on `X^{(k)}`: the recursive inner product agrees with the
/// inner product of images in `B`; the balanced relation
/// `x b ⊗ y - x ⊗ φ(b) y` maps to zero; the left action agrees with
/// [`module_power_action`]. Trial `t` draws from stream `t` of a seeded
/// ChaCha generator.
pub fn check_tensor_iso(
    corr: &AutomorphismCorrespondence,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<RelationReport> {
    if k == 0 || trials == 0 {
        return Err(Error::InvalidInput("need k >= 1 and trials >= 1".into()));
    }
    let p = corr.points();
    let mut inner = 0.0f64;
    let mut balanced = 0.0f64;
    let mut action = 0.0f64;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let xs: Vec<Vec<C64>> = (0..k).map(|_| random_element(&mut rng, p)).collect();
        let ys: Vec<Vec<C64>> = (0..k).map(|_| random_element(&mut rng, p)).collect();
        let a = random_element(&mut rng, p);
        let b = random_element(&mut rng, p);

        let direct = {
            let (ix, iy) = (identify_tensor(corr, &xs), identify_tensor(corr, &ys));
            ix.iter()
                .zip(&iy)
                .map(|(u, v)| u.conj() * v)
                .collect::<Vec<_>>()
        };
        inner = inner.max(max_diff(&recursive_inner_product(corr, &xs, &ys), &direct));

        for pos in 0..k.saturating_sub(1) {
            let mut moved_left = xs.clone();
            moved_left[pos] = pointwise(&xs[pos], &b);
            let mut moved_right = xs.clone();
            moved_right[pos + 1] = pointwise(&corr.apply(&b), &xs[pos + 1]);
            balanced = balanced.max(max_diff(
                &identify_tensor(corr, &moved_left),
                &identify_tensor(corr, &moved_right),
            ));
        }

        let mut acted = xs.clone();
        acted[0] = pointwise(&corr.apply(&a), &xs[0]);
        action = action.max(max_diff(
            &module_power_action(corr, &a, &xs)?,
            &identify_tensor(corr, &acted),
        ));
    }
    let mut report = RelationReport::default();
    report.push(RelationCheck::new(
        format!("tensor_inner_product_k{k}"),
        inner,
        TENSOR_ISO_TOL,
    ));
    if k >= 2 {
        report.push(RelationCheck::new(
            format!("balanced_relation_k{k}"),
            balanced,
            EXACT_TOL,
        ));
    }
    report.push(RelationCheck::new(
        format!("left_action_k{k}"),
        action,
        EXACT_TOL,
    ));
    Ok(report)
}

/// Generators of the Pimsner–Voiculescu Toeplitz algebra on
/// `ℂ^p ⊗ ℓ²({0..K-1})`: multipliers `b⊗1` and `W = u_α ⊗ T` with `T` the
/// `(K+1)×K` shift section, so `W` is an exact isometry into
/// `ℂ^p ⊗ ℓ²({0..K})`.
///
/// Checks `W*W = 1`, `WW* = 1 - 1⊗P₀`, `u b u* = α(b)`,
/// `W(b⊗1)W* = (α(b)⊗1)WW*` and the two-step version with `α²` for every
/// indicator function `b`.
pub fn pv_generator_check(
    corr: &AutomorphismCorrespondence,
    levels: usize,
) -> Result<RelationReport> {
    if levels < 2 {
        return Err(Error::InvalidInput(format!("need K >= 2, got {levels}")));
    }
    let p = corr.points();
    let u = corr.unitary();
    let shift = |cols: usize| toeplitz_section(&LaurentSymbol::z(), cols + 1, cols);
    let w1 = u.kronecker(&shift(levels));
    let w2 = u.kronecker(&shift(levels + 1));
    let w_twice = &w2 * &w1;
    let mult = |b: &[C64], size: usize| crate::linalg::diagonal(b).kronecker(&identity(size));

    let mut report = RelationReport::default();
    report.push(RelationCheck::new(
        "pv_isometry",
        max_abs_diff(&(w1.adjoint() * &w1), &identity(p * levels)),
        EXACT_TOL,
    ));
    let mut vacuum = DMatrix::<C64>::zeros(levels + 1, levels + 1);
    vacuum[(0, 0)] = one();
    let range_proj = &w1 * w1.adjoint();
    report.push(RelationCheck::new(
        "pv_range_defect",
        max_abs_diff(
            &range_proj,
            &(identity(p * (levels + 1)) - identity(p).kronecker(&vacuum)),
        ),
        EXACT_TOL,
    ));

    let mut inner = 0.0f64;
    let mut single = 0.0f64;
    let mut double = 0.0f64;
    let range_twice = &w_twice * w_twice.adjoint();
    for point in 0..p {
        let b = unit_vector(p, point);
        let ab = corr.apply(&b);
        let a2b = corr.apply_power(&b, 2);
        let db = crate::linalg::diagonal(&b);
        inner = inner.max(max_abs_diff(
            &(&u * db * u.adjoint()),
            &crate::linalg::diagonal(&ab),
        ));
        single = single.max(max_abs_diff(
            &(&w1 * mult(&b, levels) * w1.adjoint()),
            &(mult(&ab, levels + 1) * &range_proj),
        ));
        double = double.max(max_abs_diff(
            &(&w_twice * mult(&b, levels) * w_twice.adjoint()),
            &(mult(&a2b, levels + 2) * &range_twice),
        ));
    }
    report.push(RelationCheck::new(
        "pv_coefficient_covariance",
        inner,
        EXACT_TOL,
    ));
    report.push(RelationCheck::new("pv_covariance", single, EXACT_TOL));
    report.push(RelationCheck::new(
        "pv_covariance_squared",
        double,
        EXACT_TOL,
    ));
    Ok(report)
}
