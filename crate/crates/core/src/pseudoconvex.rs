//! Levi form of a real polynomial defining function `ρ` and a sampled test of
//! strong pseudoconvexity for `Ω = {ρ < 0}`.
//!
//! `ρ` is a finite sum `Σ c_{αβ} z^α z̄^β`. Reality is enforced on the
//! coefficients: `c_{βα} = conj(c_{αβ})` exactly, after merging duplicates.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{hermitian_eigen, hermiticity_residual, max_abs};
use crate::{Error, Result, C64};

pub const DEFAULT_LEVI_TOL: f64 = 1e-6;
/// Samples farther than this from `ρ = 0` are rejected.
pub const BOUNDARY_TOL: f64 = 1e-8;
/// Residual achieved by [`sample_boundary`].
pub const ROOT_TOL: f64 = 1e-10;
pub const CRITICAL_GRADIENT_TOL: f64 = 1e-8;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const RAY_T_MAX: f64 = 1e3;

/// One term `c z^α z̄^β`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub hol_multi_index: Vec<u32>,
    pub antihol_multi_index: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

impl Monomial {
    pub fn new(hol: Vec<u32>, antihol: Vec<u32>, coeff: C64) -> Self {
        Self {
            hol_multi_index: hol,
            antihol_multi_index: antihol,
            re: coeff.re,
            im: coeff.im,
        }
    }

    pub fn coeff(&self) -> C64 {
        C64::new(self.re, self.im)
    }
}

type Key = (Vec<u32>, Vec<u32>);

/// A structurally real polynomial defining function on `ℂⁿ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Monomial>", into = "Vec<Monomial>")]
pub struct DomainSpec {
    complex_dim: usize,
    terms: BTreeMap<Key, C64>,
}

impl TryFrom<Vec<Monomial>> for DomainSpec {
    type Error = Error;

    fn try_from(monomials: Vec<Monomial>) -> Result<Self> {
        Self::new(monomials)
    }
}

impl From<DomainSpec> for Vec<Monomial> {
    fn from(spec: DomainSpec) -> Self {
        spec.monomials()
    }
}

impl DomainSpec {
    pub fn new(monomials: Vec<Monomial>) -> Result<Self> {
        let first = monomials
            .first()
            .ok_or_else(|| Error::InvalidInput("defining function has no terms".into()))?;
        let complex_dim = first.hol_multi_index.len();
        if complex_dim == 0 {
            return Err(Error::InvalidInput("complex dimension must be >= 1".into()));
        }
        let mut terms: BTreeMap<Key, C64> = BTreeMap::new();
        for m in &monomials {
            if m.hol_multi_index.len() != complex_dim || m.antihol_multi_index.len() != complex_dim
            {
                return Err(Error::InvalidInput(format!(
                    "multi-index lengths must all equal {complex_dim}"
                )));
            }
            if !m.re.is_finite() || !m.im.is_finite() {
                return Err(Error::InvalidInput("non-finite coefficient".into()));
            }
            *terms
                .entry((m.hol_multi_index.clone(), m.antihol_multi_index.clone()))
                .or_insert(C64::new(0.0, 0.0)) += m.coeff();
        }
        terms.retain(|_, c| *c != C64::new(0.0, 0.0));
        for ((hol, anti), c) in &terms {
            let mirror = terms
                .get(&(anti.clone(), hol.clone()))
                .copied()
                .unwrap_or(C64::new(0.0, 0.0));
            if mirror != c.conj() {
                return Err(Error::InvalidInput(format!(
                    "rho is not real: coefficient {c} of z^{hol:?} zbar^{anti:?} has conjugate partner {mirror}"
                )));
            }
        }
        if !terms.keys().any(|(hol, _)| hol.iter().any(|&a| a > 0)) {
            return Err(Error::InvalidInput(
                "gradient of rho vanishes identically".into(),
            ));
        }
        Ok(Self { complex_dim, terms })
    }

    pub fn complex_dim(&self) -> usize {
        self.complex_dim
    }

    /// Merged terms in canonical order.
    pub fn monomials(&self) -> Vec<Monomial> {
        self.terms
            .iter()
            .map(|((h, a), c)| Monomial::new(h.clone(), a.clone(), *c))
            .collect()
    }

    fn check_point(&self, z: &[C64]) -> Result<()> {
        if z.len() != self.complex_dim {
            return Err(Error::InvalidInput(format!(
                "point has {} coordinates, domain lives in C^{}",
                z.len(),
                self.complex_dim
            )));
        }
        Ok(())
    }

    /// `Σ_{i} |z_i|^{2 d_i} - 1`, built from `powers = [d_1, …, d_n]`.
    pub fn sum_of_powers(powers: &[u32], signs: &[f64]) -> Result<Self> {
        let n = powers.len();
        let mut monomials = vec![Monomial::new(vec![0; n], vec![0; n], C64::new(-1.0, 0.0))];
        for (i, (&d, &s)) in powers.iter().zip(signs).enumerate() {
            let mut idx = vec![0; n];
            idx[i] = d;
            monomials.push(Monomial::new(idx.clone(), idx, C64::new(s, 0.0)));
        }
        Self::new(monomials)
    }

    pub fn unit_ball(n: usize) -> Result<Self> {
        Self::sum_of_powers(&vec![1; n], &vec![1.0; n])
    }
}

/// `z^α z̄^β`.
fn monomial_value(z: &[C64], hol: &[u32], anti: &[u32]) -> C64 {
    z.iter()
        .zip(hol.iter().zip(anti))
        .fold(C64::new(1.0, 0.0), |acc, (zi, (&a, &b))| {
            acc * zi.powu(a) * zi.conj().powu(b)
        })
}

/// Complex value of the polynomial; real up to round-off.
pub fn eval_complex(domain: &DomainSpec, z: &[C64]) -> Result<C64> {
    domain.check_point(z)?;
    Ok(domain
        .terms
        .iter()
        .map(|((h, a), c)| c * monomial_value(z, h, a))
        .sum())
}

pub fn eval(domain: &DomainSpec, z: &[C64]) -> Result<f64> {
    Ok(eval_complex(domain, z)?.re)
}

/// `(∂ρ/∂z_1, …, ∂ρ/∂z_n)` by formal differentiation of each monomial.
pub fn wirtinger_gradient(domain: &DomainSpec, z: &[C64]) -> Result<Vec<C64>> {
    domain.check_point(z)?;
    let n = domain.complex_dim;
    let mut grad = vec![C64::new(0.0, 0.0); n];
    for ((hol, anti), c) in &domain.terms {
        for i in 0..n {
            if hol[i] == 0 {
                continue;
            }
            let mut reduced = hol.clone();
            reduced[i] -= 1;
            grad[i] += c * f64::from(hol[i]) * monomial_value(z, &reduced, anti);
        }
    }
    Ok(grad)
}

/// `L_ij = ∂²ρ/∂z_i∂z̄_j`, Hermitian for real `ρ`.
pub fn levi_form(domain: &DomainSpec, z: &[C64]) -> Result<DMatrix<C64>> {
    domain.check_point(z)?;
    let n = domain.complex_dim;
    let mut levi = DMatrix::<C64>::zeros(n, n);
    for ((hol, anti), c) in &domain.terms {
        for i in (0..n).filter(|&i| hol[i] > 0) {
            for j in (0..n).filter(|&j| anti[j] > 0) {
                let mut h = hol.clone();
                let mut a = anti.clone();
                h[i] -= 1;
                a[j] -= 1;
                levi[(i, j)] +=
                    c * f64::from(hol[i]) * f64::from(anti[j]) * monomial_value(z, &h, &a);
            }
        }
    }
    let residual = hermiticity_residual(&levi);
    if residual > HERMITIAN_TOL * (1.0 + max_abs(&levi)) {
        return Err(Error::NumericalQuality(format!(
            "Levi form not Hermitian: residual {residual:e}"
        )));
    }
    Ok(levi)
}

/// Orthonormal basis of `{u : Σ_i ∂ρ/∂z_i(z) u_i = 0}`, obtained by
/// Gram–Schmidt on the conjugate gradient followed by the standard basis.
pub fn complex_tangent_basis(domain: &DomainSpec, z: &[C64]) -> Result<Vec<DVector<C64>>> {
    let residual = eval(domain, z)?.abs();
    if residual > BOUNDARY_TOL {
        return Err(Error::OffBoundary {
            residual,
            tol: BOUNDARY_TOL,
        });
    }
    let grad = wirtinger_gradient(domain, z)?;
    let norm = grad.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
    if norm <= CRITICAL_GRADIENT_TOL {
        return Err(Error::CriticalPoint { norm });
    }
    let n = grad.len();
    let normal = DVector::from_iterator(n, grad.iter().map(|g| g.conj() / norm));
    let mut frame = vec![normal];
    for k in 0..n {
        if frame.len() == n {
            break;
        }
        let mut v = DVector::from_fn(n, |r, _| C64::new(if r == k { 1.0 } else { 0.0 }, 0.0));
        for _ in 0..2 {
            for q in &frame {
                let proj = q.dotc(&v);
                v -= q * proj;
            }
        }
        let len = v.norm();
        if len > 1e-6 {
            frame.push(v / C64::new(len, 0.0));
        }
    }
    frame.remove(0);
    Ok(frame)
}

/// Matrix of the Levi form restricted to the complex tangent space,
/// `M_ab = Σ_ij L_ij (u_a)_i conj((u_b)_j)` transposed into Hermitian form.
pub fn restricted_levi_form(domain: &DomainSpec, z: &[C64]) -> Result<DMatrix<C64>> {
    let basis = complex_tangent_basis(domain, z)?;
    let levi = levi_form(domain, z)?;
    let n = domain.complex_dim;
    let u = DMatrix::from_fn(n, basis.len(), |r, c| basis[c][r]);
    Ok(u.adjoint() * levi.transpose() * u)
}

/// Smallest eigenvalue of the restricted Levi form at a boundary point.
pub fn restricted_min_eigenvalue(domain: &DomainSpec, z: &[C64]) -> Result<f64> {
    let m = restricted_levi_form(domain, z)?;
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    Ok(hermitian_eigen(&m)?.eigenvalues[0])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeviVerdict {
    /// Positive beyond tolerance at every sample; not a global certificate.
    StronglyPseudoconvexOnSamples,
    Degenerate,
    Indefinite,
}

impl LeviVerdict {
    pub fn classify(min_eigenvalue: f64, tol: f64) -> Self {
        if min_eigenvalue > tol {
            LeviVerdict::StronglyPseudoconvexOnSamples
        } else if min_eigenvalue < -tol {
            LeviVerdict::Indefinite
        } else {
            LeviVerdict::Degenerate
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeviReport {
    pub sample_count: usize,
    pub min_eigenvalue: f64,
    pub worst_point: Vec<C64>,
    pub tol: f64,
    pub verdict: LeviVerdict,
}

pub fn strong_pseudoconvexity_check(
    domain: &DomainSpec,
    samples: &[Vec<C64>],
    tol: f64,
) -> Result<LeviReport> {
    if domain.complex_dim < 2 {
        return Err(Error::InvalidInput(
            "complex tangent space is trivial for n = 1; need n >= 2".into(),
        ));
    }
    if samples.is_empty() {
        return Err(Error::InvalidInput("no boundary samples".into()));
    }
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be >= 0, got {tol}"
        )));
    }
    let mins = samples
        .par_iter()
        .map(|z| restricted_min_eigenvalue(domain, z))
        .collect::<Result<Vec<f64>>>()?;
    let (worst, &min_eigenvalue) = mins
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
        .expect("non-empty");
    Ok(LeviReport {
        sample_count: samples.len(),
        min_eigenvalue,
        worst_point: samples[worst].clone(),
        tol,
        verdict: LeviVerdict::classify(min_eigenvalue, tol),
    })
}

/// Boundary crossing `t > 0` of `ρ(t·d)`, starting from the interior origin.
pub fn ray_root(domain: &DomainSpec, direction: &[C64]) -> Result<f64> {
    let along = |t: f64| -> Result<f64> {
        let p: Vec<C64> = direction.iter().map(|d| d * t).collect();
        eval(domain, &p)
    };
    let origin = along(0.0)?;
    if origin >= 0.0 {
        return Err(Error::InvalidInput(format!(
            "origin must be interior for ray sampling, rho(0) = {origin}"
        )));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while along(hi)? <= 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > RAY_T_MAX {
            return Err(Error::UnboundedDirection { t_max: RAY_T_MAX });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if along(mid)? <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-6 * hi {
            break;
        }
    }
    // Newton on t ↦ ρ(t d) with d/dt ρ = 2 Re Σ ∂ρ/∂z_i d_i, kept in the bracket
    let mut t = 0.5 * (lo + hi);
    for _ in 0..50 {
        let value = along(t)?;
        if value.abs() <= 1e-15 * (1.0 + t) {
            break;
        }
        if value < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let p: Vec<C64> = direction.iter().map(|d| d * t).collect();
        let slope = 2.0
            * wirtinger_gradient(domain, &p)?
                .iter()
                .zip(direction)
                .map(|(g, d)| (g * d).re)
                .sum::<f64>();
        let newton = t - value / slope;
        let next = if newton.is_finite() && newton >= lo && newton <= hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next == t {
            break;
        }
        t = next;
    }
    let residual = along(t)?.abs();
    if residual > ROOT_TOL {
        return Err(Error::NumericalQuality(format!(
            "ray root polishing stalled at |rho| = {residual:e}"
        )));
    }
    Ok(t)
}

/// A ray with no boundary crossing, reported instead of a point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkippedDirection {
    pub index: usize,
    pub direction: Vec<C64>,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundarySamples {
    pub points: Vec<Vec<C64>>,
    pub skipped: Vec<SkippedDirection>,
}

fn collect_rays(domain: &DomainSpec, directions: Vec<Vec<C64>>) -> Result<BoundarySamples> {
    let roots: Vec<Result<f64>> = directions.par_iter().map(|d| ray_root(domain, d)).collect();
    let mut out = BoundarySamples::default();
    for (index, (direction, root)) in directions.into_iter().zip(roots).enumerate() {
        match root {
            Ok(t) => out.points.push(direction.iter().map(|d| d * t).collect()),
            Err(e @ Error::UnboundedDirection { .. }) => out.skipped.push(SkippedDirection {
                index,
                direction,
                reason: e.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Random unit direction number `index`, drawn from its own stream.
pub fn sample_direction(n: usize, seed: u64, index: usize) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    loop {
        let v: Vec<C64> = (0..n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                C64::new(re, im)
            })
            .collect();
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

/// Boundary points along `count` seeded random rays from the origin.
pub fn sample_boundary(domain: &DomainSpec, count: usize, seed: u64) -> Result<BoundarySamples> {
    if count == 0 {
        return Err(Error::InvalidInput("sample count must be >= 1".into()));
    }
    let n = domain.complex_dim;
    let directions = (0..count).map(|i| sample_direction(n, seed, i)).collect();
    collect_rays(domain, directions)
}

/// Boundary points along the positive coordinate axes.
pub fn axis_boundary_points(domain: &DomainSpec) -> Result<BoundarySamples> {
    let n = domain.complex_dim;
    let directions = (0..n)
        .map(|k| {
            (0..n)
                .map(|r| C64::new(if r == k { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();
    collect_rays(domain, directions)
}
