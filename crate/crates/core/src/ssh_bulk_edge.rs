//! The Su–Schrieffer–Heeger chain: bulk Bloch Hamiltonians, the flat band
//! and Fermi unitary, the first Chern number, the Dirichlet half-space
//! Hamiltonian and its chiral edge index.
//!
//! Basis ordering is chiral-major: all `σ₃ = +1` components first, then all
//! `σ₃ = -1`. Within a chiral sector the fiber index is major and the lattice
//! site minor, so the edge Hamiltonian index is `s·nL + f·L + x`.
//!
//! In this ordering `H = σ₊⊗𝟏⊗U + σ₋⊗𝟏⊗U* + mσ₂⊗𝟏⊗𝟏` is block off-diagonal
//! with upper-right block `U - im` and lower-left block `U* + im`. After
//! Fourier transform `U` acts as `e^{i·s·θ}`, `s` the sign convention.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circle_symbols::PHASE_STEP_GUARD;
use crate::linalg::{
    hermitian_eigen, hermiticity_residual, identity, max_abs, max_abs_diff, unitarity_residual,
    HermitianEigen,
};
use crate::{Error, ErrorKind, Result, C64};

/// Chern quadrature must agree with the determinant winding to this.
pub const CHERN_QUADRATURE_TOL: f64 = 1e-6;
/// Below this the chain counts as gapless.
pub const GAPLESS_TOL: f64 = 1e-6;
/// `δ` must stay this far below the bulk gap.
pub const DELTA_GAP_MARGIN: f64 = 1e-3;
/// No edge eigenvalue may sit this close to `±δ`.
pub const DELTA_RESOLUTION: f64 = 1e-6;
pub const EDGE_INTEGER_TOL: f64 = 1e-8;
pub const FLAT_BAND_TOL: f64 = 1e-10;
pub const MIN_MOMENTUM_GRID: usize = 16;
pub const MIN_EDGE_LENGTH: usize = 4;
/// Step of the centered difference used for `∂_θ U_F` in the Chern integral.
pub const DERIVATIVE_STEP: f64 = 1e-4;

pub const DEFAULT_MOMENTUM_GRID: usize = 256;
pub const DEFAULT_EDGE_LENGTH: usize = 40;
pub const DEFAULT_DELTA_FRACTION: f64 = 0.5;

/// Sign of the Fourier convention: `U ↦ e^{i·sign·θ}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum FourierSign {
    #[default]
    Plus,
    Minus,
}

impl FourierSign {
    pub fn value(self) -> f64 {
        match self {
            FourierSign::Plus => 1.0,
            FourierSign::Minus => -1.0,
        }
    }

    pub fn from_int(sign: i64) -> Result<Self> {
        match sign {
            1 => Ok(FourierSign::Plus),
            -1 => Ok(FourierSign::Minus),
            other => Err(Error::InvalidInput(format!(
                "fourier sign must be +1 or -1, got {other}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SshParams {
    pub mass: f64,
    pub fiber_dim: usize,
    pub lattice_length: usize,
    /// Half-width of the spectral window used by the edge invariant.
    pub delta: f64,
    pub momentum_grid: usize,
    pub fourier_sign: FourierSign,
}

impl SshParams {
    /// Parameters with the default edge length and momentum grid and
    /// `δ = 0.5·|1 - |m||`.
    pub fn new(mass: f64, fiber_dim: usize) -> Self {
        Self {
            mass,
            fiber_dim,
            lattice_length: DEFAULT_EDGE_LENGTH,
            delta: DEFAULT_DELTA_FRACTION * (1.0 - mass.abs()).abs(),
            momentum_grid: DEFAULT_MOMENTUM_GRID,
            fourier_sign: FourierSign::Plus,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.fiber_dim == 0 {
            return Err(Error::InvalidInput(
                "fiber dimension must be positive".into(),
            ));
        }
        if self.momentum_grid < MIN_MOMENTUM_GRID {
            return Err(Error::InvalidInput(format!(
                "momentum grid {} is below {MIN_MOMENTUM_GRID}",
                self.momentum_grid
            )));
        }
        if !self.mass.is_finite() {
            return Err(Error::InvalidInput("mass must be finite".into()));
        }
        Ok(())
    }

    /// `q(θ) = e^{i·s·θ} - i·m`, the upper-right Bloch block.
    pub fn off_diagonal_symbol(&self, theta: f64) -> C64 {
        C64::from_polar(1.0, self.fourier_sign.value() * theta) - C64::new(0.0, self.mass)
    }

    fn momenta(&self) -> Vec<f64> {
        let nk = self.momentum_grid;
        (0..nk).map(|j| 2.0 * PI * j as f64 / nk as f64).collect()
    }
}

/// `H(θ)`, a `2n×2n` Hermitian chiral matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochMatrix {
    pub theta: f64,
    pub fiber_dim: usize,
    pub matrix: DMatrix<C64>,
}

/// `J = diag(+𝟏, -𝟏)` with `half` entries in each sector.
pub fn chiral_operator(half: usize) -> DMatrix<C64> {
    DMatrix::from_fn(2 * half, 2 * half, |r, c| {
        if r != c {
            C64::new(0.0, 0.0)
        } else if r < half {
            C64::new(1.0, 0.0)
        } else {
            C64::new(-1.0, 0.0)
        }
    })
}

/// `max |JHJ + H|`.
pub fn chirality_residual(h: &DMatrix<C64>) -> f64 {
    let j = chiral_operator(h.nrows() / 2);
    max_abs(&(&j * h * &j + h))
}

pub fn bloch_hamiltonian(params: &SshParams, theta: f64) -> BlochMatrix {
    let n = params.fiber_dim;
    let q = params.off_diagonal_symbol(theta);
    let mut matrix = DMatrix::zeros(2 * n, 2 * n);
    for f in 0..n {
        matrix[(f, n + f)] = q;
        matrix[(n + f, f)] = q.conj();
    }
    BlochMatrix {
        theta,
        fiber_dim: n,
        matrix,
    }
}

/// Eigenvalues and eigenvectors of a bulk or edge Hamiltonian.
#[derive(Clone, Debug)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<C64>,
    pub source: SpectralSource,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpectralSource {
    Bulk { theta: f64 },
    Edge,
}

impl SpectralData {
    pub fn new(h: &DMatrix<C64>, source: SpectralSource) -> Result<Self> {
        let HermitianEigen {
            eigenvalues,
            eigenvectors,
        } = hermitian_eigen(h)?;
        Ok(Self {
            eigenvalues,
            eigenvectors,
            source,
        })
    }

    /// `(max |V*V - 1|, max_i ‖H v_i - λ_i v_i‖)`.
    pub fn residuals(&self, h: &DMatrix<C64>) -> (f64, f64) {
        let unitary = unitarity_residual(&self.eigenvectors);
        let eig = (0..self.eigenvalues.len())
            .map(|i| {
                let v = self.eigenvectors.column(i);
                (h * v - v * C64::new(self.eigenvalues[i], 0.0)).norm()
            })
            .fold(0.0, f64::max);
        (unitary, eig)
    }
}

/// Smallest `|λ|` of `H(θ)` over the momentum grid, with the two momenta
/// `θ = ±π/2` (where `|q|` is extremal) always included.
pub fn spectral_gap(params: &SshParams) -> Result<f64> {
    params.validate()?;
    if (params.mass.abs() - 1.0).abs() < GAPLESS_TOL {
        return Err(Error::Gapless {
            mass: params.mass,
            gap: (1.0 - params.mass.abs()).abs(),
        });
    }
    let mut momenta = params.momenta();
    momenta.extend([PI / 2.0, 3.0 * PI / 2.0]);
    let mut gap = f64::INFINITY;
    for theta in momenta {
        let h = bloch_hamiltonian(params, theta);
        let eig = hermitian_eigen(&h.matrix)?;
        gap = eig.eigenvalues.iter().map(|l| l.abs()).fold(gap, f64::min);
    }
    if gap < GAPLESS_TOL {
        return Err(Error::Gapless {
            mass: params.mass,
            gap,
        });
    }
    Ok(gap)
}

/// `Q = sgn(H)` and the associated projection `P_F = (1 - Q)/2`.
#[derive(Clone, Debug)]
pub struct FlatBand {
    pub q: DMatrix<C64>,
}

impl FlatBand {
    pub fn fermi_projection(&self) -> DMatrix<C64> {
        (identity(self.q.nrows()) - &self.q) * C64::new(0.5, 0.0)
    }
}

/// `Q = V·sgn(Λ)·V*` for a gapped Hermitian matrix.
pub fn flat_band(h: &DMatrix<C64>) -> Result<FlatBand> {
    let eig = hermitian_eigen(h)?;
    if let Some(&l) = eig.eigenvalues.iter().find(|l| l.abs() < GAPLESS_TOL) {
        return Err(Error::Gapless {
            mass: f64::NAN,
            gap: l.abs(),
        });
    }
    let v = &eig.eigenvectors;
    let signs = crate::linalg::diagonal(
        &eig.eigenvalues
            .iter()
            .map(|l| C64::new(l.signum(), 0.0))
            .collect::<Vec<_>>(),
    );
    Ok(FlatBand {
        q: v * signs * v.adjoint(),
    })
}

/// Lower-left `n×n` block of a chiral flat band, checked unitary.
pub fn fermi_unitary(q: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    if !q.is_square() || !q.nrows().is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "flat band must be square of even size, got {}x{}",
            q.nrows(),
            q.ncols()
        )));
    }
    let n = q.nrows() / 2;
    let diag = max_abs(&q.view((0, 0), (n, n)).into_owned())
        .max(max_abs(&q.view((n, n), (n, n)).into_owned()));
    if diag > FLAT_BAND_TOL {
        return Err(Error::NumericalQuality(format!(
            "flat band has diagonal chiral blocks of size {diag:e}"
        )));
    }
    let u = q.view((n, 0), (n, n)).into_owned();
    let residual = unitarity_residual(&u);
    if residual > FLAT_BAND_TOL {
        return Err(Error::NumericalQuality(format!(
            "Fermi unitary block deviates from unitarity by {residual:e}"
        )));
    }
    Ok(u)
}

fn fermi_unitary_at(params: &SshParams, theta: f64) -> Result<DMatrix<C64>> {
    let h = bloch_hamiltonian(params, theta);
    fermi_unitary(&flat_band(&h.matrix)?.q)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChernNumber {
    /// Quantized value from the phase winding of `det U_F`.
    pub det: i64,
    /// Trapezoid value of `(i/2π)∫ tr(U_F* ∂_θ U_F) dθ`.
    pub quadrature: f64,
}

/// `(i/2π)·(2π/Nk)·Σ_j tr(U_F(θ_j)* D_j)` where `D_j` is a centered
/// difference of `U_F` with the given step, evaluated at `θ_j ± step`.
fn chern_integral(params: &SshParams, step: f64) -> Result<f64> {
    let nk = params.momentum_grid;
    let mut sum = C64::new(0.0, 0.0);
    for theta in params.momenta() {
        let u = fermi_unitary_at(params, theta)?;
        let plus = fermi_unitary_at(params, theta + step)?;
        let minus = fermi_unitary_at(params, theta - step)?;
        let du = (plus - minus) / C64::new(2.0 * step, 0.0);
        sum += (u.adjoint() * du).trace();
    }
    let value = C64::new(0.0, 1.0) / (2.0 * PI) * sum * (2.0 * PI / nk as f64);
    Ok(value.re)
}

/// First Chern number of the Fermi unitary.
///
/// The integer comes from accumulating principal phase increments of
/// `det U_F(θ_j)` around the grid, oriented so that it quantizes the same
/// integral `(i/2π)∫ tr(U_F* ∂_θ U_F) dθ` that `quadrature` evaluates.
pub fn chern_number(params: &SshParams) -> Result<ChernNumber> {
    spectral_gap(params)?;
    let dets = params
        .momenta()
        .into_iter()
        .map(|t| fermi_unitary_at(params, t).map(|u| u.determinant()))
        .collect::<Result<Vec<_>>>()?;
    let mut phase = 0.0;
    for j in 0..dets.len() {
        let step = (dets[(j + 1) % dets.len()] / dets[j]).arg();
        if step.abs() >= PHASE_STEP_GUARD {
            return Err(Error::PhaseStepTooLarge { index: j, step });
        }
        phase += step;
    }
    let turns = phase / (2.0 * PI);
    let det = -(turns.round()) as i64;
    let quadrature = chern_integral(params, DERIVATIVE_STEP)?;
    if (quadrature - det as f64).abs() > CHERN_QUADRATURE_TOL {
        return Err(Error::NumericalQuality(format!(
            "Chern quadrature {quadrature} differs from the determinant winding {det}"
        )));
    }
    Ok(ChernNumber { det, quadrature })
}

/// Chern integral with the centered difference taken at the grid spacing
/// itself, i.e. from neighbouring grid points only. Converges as `O(Nk⁻²)`;
/// used as a convergence diagnostic.
pub fn chern_quadrature_grid_step(params: &SshParams) -> Result<f64> {
    spectral_gap(params)?;
    chern_integral(params, 2.0 * PI / params.momentum_grid as f64)
}

/// `Ĥ = σ₊⊗𝟏_n⊗T + σ₋⊗𝟏_n⊗T* + mσ₂⊗𝟏_n⊗𝟏` on `L` sites with the nilpotent
/// shift `T e_x = e_{x+1}`, `T e_{L-1} = 0`.
pub fn edge_hamiltonian(params: &SshParams) -> Result<DMatrix<C64>> {
    let (n, l) = (params.fiber_dim, params.lattice_length);
    if n == 0 || l < 2 {
        return Err(Error::InvalidInput(format!(
            "edge Hamiltonian needs n >= 1 and L >= 2, got n={n}, L={l}"
        )));
    }
    let half = n * l;
    let mut h = DMatrix::zeros(2 * half, 2 * half);
    let mass = C64::new(0.0, params.mass);
    for f in 0..n {
        for x in 0..l {
            let plus = f * l + x;
            let minus = half + f * l + x;
            // upper-right block T - im
            h[(plus, minus)] -= mass;
            h[(minus, plus)] += mass;
            if x + 1 < l {
                h[(plus + 1, minus)] += C64::new(1.0, 0.0);
                h[(minus, plus + 1)] += C64::new(1.0, 0.0);
            }
        }
    }
    Ok(h)
}

/// Integer edge invariant with its diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeInvariant {
    pub trace: i64,
    /// `Tr(Ĵ P̂_δ Π_left)` before rounding.
    pub raw_trace: f64,
    /// `Tr(Ĵ P̂_δ)` over the whole chain; zero for any finite chain.
    pub full_trace: f64,
    pub midgap_states: usize,
}

/// Chiral trace of the spectral window `[-δ, δ]` of the Dirichlet chain,
/// localized to the left half `x < L/2`.
///
/// A finite chain has two ends, and for a square chiral block the window
/// trace over the whole chain is always zero: the left-end and right-end
/// modes carry opposite chirality. Restricting the trace to the left half
/// isolates the boundary at the origin, which is the half-space system.
pub fn edge_invariant(params: &SshParams) -> Result<EdgeInvariant> {
    if params.lattice_length < MIN_EDGE_LENGTH {
        return Err(Error::InvalidInput(format!(
            "edge invariant needs L >= {MIN_EDGE_LENGTH}, got {}",
            params.lattice_length
        )));
    }
    let gap = spectral_gap(params)?;
    let delta = params.delta;
    if delta.is_nan() || delta <= 0.0 || delta >= gap - DELTA_GAP_MARGIN {
        return Err(Error::DeltaOutsideGap {
            delta,
            gap,
            margin: DELTA_GAP_MARGIN,
        });
    }
    let h = edge_hamiltonian(params)?;
    let spec = SpectralData::new(&h, SpectralSource::Edge)?;
    if let Some(&l) = spec
        .eigenvalues
        .iter()
        .find(|l| (l.abs() - delta).abs() < DELTA_RESOLUTION)
    {
        return Err(Error::DeltaOnEigenvalue {
            delta,
            eigenvalue: l,
            window: DELTA_RESOLUTION,
        });
    }
    let (n, len) = (params.fiber_dim, params.lattice_length);
    let half = n * len;
    let chirality = |row: usize| if row < half { 1.0 } else { -1.0 };
    let left = |row: usize| (row % len) < len / 2;

    let mut raw = 0.0;
    let mut full = 0.0;
    let mut midgap = 0;
    for (i, &l) in spec.eigenvalues.iter().enumerate() {
        if l.abs() > delta {
            continue;
        }
        midgap += 1;
        let v = spec.eigenvectors.column(i);
        for (row, c) in v.iter().enumerate() {
            let w = chirality(row) * c.norm_sqr();
            full += w;
            if left(row) {
                raw += w;
            }
        }
    }
    let trace = raw.round();
    if (raw - trace).abs() > EDGE_INTEGER_TOL {
        return Err(Error::NumericalQuality(format!(
            "left-localized chiral trace {raw} is not an integer; increase L"
        )));
    }
    Ok(EdgeInvariant {
        trace: trace as i64,
        raw_trace: raw,
        full_trace: full,
        midgap_states: midgap,
    })
}

/// How `δ` is chosen for each row of a sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DeltaChoice {
    Absolute(f64),
    FractionOfGap(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTemplate {
    pub fiber_dim: usize,
    pub lattice_length: usize,
    pub delta: DeltaChoice,
    pub momentum_grid: usize,
    pub fourier_sign: FourierSign,
}

impl Default for SweepTemplate {
    fn default() -> Self {
        Self {
            fiber_dim: 1,
            lattice_length: DEFAULT_EDGE_LENGTH,
            delta: DeltaChoice::FractionOfGap(DEFAULT_DELTA_FRACTION),
            momentum_grid: DEFAULT_MOMENTUM_GRID,
            fourier_sign: FourierSign::Plus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    Transition,
    Error,
}

/// One row of a bulk-edge sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub m: f64,
    pub status: RowStatus,
    pub gap: Option<f64>,
    pub chern_det: Option<i64>,
    pub chern_quadrature: Option<f64>,
    pub edge_trace: Option<i64>,
    #[serde(rename = "L")]
    pub lattice_length: usize,
    pub delta: Option<f64>,
    pub agreement: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub warning: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error_kind: Option<ErrorKind>,
}

impl InvariantReport {
    fn empty(m: f64, template: &SweepTemplate, status: RowStatus) -> Self {
        Self {
            m,
            status,
            gap: None,
            chern_det: None,
            chern_quadrature: None,
            edge_trace: None,
            lattice_length: template.lattice_length,
            delta: None,
            agreement: None,
            warning: None,
            error_kind: None,
        }
    }
}

fn sweep_row(m: f64, template: &SweepTemplate) -> InvariantReport {
    let mut params = SshParams {
        mass: m,
        fiber_dim: template.fiber_dim,
        lattice_length: template.lattice_length,
        delta: 0.0,
        momentum_grid: template.momentum_grid,
        fourier_sign: template.fourier_sign,
    };
    let fail = |err: Error, mut row: InvariantReport| {
        row.status = RowStatus::Error;
        row.error_kind = Some(err.kind());
        row.warning = Some(err.to_string());
        row
    };
    let gap = match spectral_gap(&params) {
        Ok(g) => g,
        Err(Error::Gapless { gap, .. }) => {
            let mut row = InvariantReport::empty(m, template, RowStatus::Transition);
            row.gap = Some(gap);
            row.warning = Some("gap closes: topological phase transition".into());
            return row;
        }
        Err(e) => return fail(e, InvariantReport::empty(m, template, RowStatus::Error)),
    };
    params.delta = match template.delta {
        DeltaChoice::Absolute(d) => d,
        DeltaChoice::FractionOfGap(frac) => frac * gap,
    };
    let mut row = InvariantReport::empty(m, template, RowStatus::Ok);
    row.gap = Some(gap);
    row.delta = Some(params.delta);
    let chern = match chern_number(&params) {
        Ok(c) => c,
        Err(e) => return fail(e, row),
    };
    row.chern_det = Some(chern.det);
    row.chern_quadrature = Some(chern.quadrature);
    let edge = match edge_invariant(&params) {
        Ok(e) => e,
        Err(e) => return fail(e, row),
    };
    row.edge_trace = Some(edge.trace);
    row.agreement = Some(chern.det == edge.trace);
    row
}

/// One report per mass, in input order. Rows are computed in parallel and
/// share no state.
pub fn bulk_edge_sweep(m_values: &[f64], template: &SweepTemplate) -> Vec<InvariantReport> {
    m_values
        .par_iter()
        .map(|&m| sweep_row(m, template))
        .collect()
}

/// Residuals of the flat-band identities at one momentum:
/// `Q² = 1`, `Q* = Q`, `JQJ = -Q`, `P_F² = P_F`, `JP_FJ = 1 - P_F`.
pub fn flat_band_residuals(fb: &FlatBand) -> [f64; 5] {
    let q = &fb.q;
    let dim = q.nrows();
    let j = chiral_operator(dim / 2);
    let p = fb.fermi_projection();
    [
        max_abs_diff(&(q * q), &identity(dim)),
        hermiticity_residual(q),
        max_abs(&(&j * q * &j + q)),
        max_abs_diff(&(&p * &p), &p),
        max_abs_diff(&(&j * &p * &j), &(identity(dim) - &p)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn params(m: f64, n: usize) -> SshParams {
        SshParams::new(m, n)
    }

    fn mat2(a: [[C64; 2]; 2]) -> DMatrix<C64> {
        DMatrix::from_row_slice(2, 2, &[a[0][0], a[0][1], a[1][0], a[1][1]])
    }

    #[test]
    fn bloch_examples() {
        let h = bloch_hamiltonian(&params(0.0, 1), 0.0).matrix;
        assert!(max_abs_diff(&h, &mat2([[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]])) < 1e-15);
        let h = bloch_hamiltonian(&params(0.0, 1), PI / 2.0).matrix;
        assert!(max_abs_diff(&h, &mat2([[c(0., 0.), c(0., 1.)], [c(0., -1.), c(0., 0.)]])) < 1e-15);
        let h = bloch_hamiltonian(&params(2.0, 1), 0.0).matrix;
        assert!(max_abs_diff(&h, &mat2([[c(0., 0.), c(1., -2.)], [c(1., 2.), c(0., 0.)]])) < 1e-15);
    }

    /// Brute force: the periodic `L`-site ring Hamiltonian projected onto the
    /// plane wave `φ_θ = Σ_x e^{-iθx} e_x`, on which `U` acts as `e^{iθ}`.
    #[test]
    fn bloch_matches_periodic_ring_fourier_block() {
        let ring = 16;
        let m = 2.0;
        let dim = 2 * ring;
        let mut h = DMatrix::<C64>::zeros(dim, dim);
        for x in 0..ring {
            let y = (x + 1) % ring;
            // σ₊⊗U: |+,x+1><-,x|
            h[(y, ring + x)] += c(1.0, 0.0);
            h[(ring + x, y)] += c(1.0, 0.0);
            h[(x, ring + x)] += c(0.0, -m);
            h[(ring + x, x)] += c(0.0, m);
        }
        for j in 0..ring {
            let theta = 2.0 * PI * j as f64 / ring as f64;
            let mut basis = DMatrix::<C64>::zeros(dim, 2);
            for x in 0..ring {
                let phase = C64::from_polar(1.0 / (ring as f64).sqrt(), -theta * x as f64);
                basis[(x, 0)] = phase;
                basis[(ring + x, 1)] = phase;
            }
            let block = basis.adjoint() * &h * &basis;
            let bloch = bloch_hamiltonian(&params(m, 1), theta).matrix;
            assert!(max_abs_diff(&block, &bloch) < 1e-12, "theta={theta}");
        }
    }

    #[test]
    fn bloch_is_hermitian_and_chiral() {
        for &(m, n, t) in &[(0.3, 1, 0.2), (-1.7, 3, 4.0), (0.0, 2, 1.0)] {
            let h = bloch_hamiltonian(&params(m, n), t).matrix;
            assert!(hermiticity_residual(&h) < 1e-12);
            assert!(chirality_residual(&h) < 1e-12);
        }
    }

    #[test]
    fn spectral_gap_examples() {
        assert!((spectral_gap(&params(0.0, 1)).unwrap() - 1.0).abs() < 1e-8);
        assert!((spectral_gap(&params(2.0, 1)).unwrap() - 1.0).abs() < 1e-8);
        assert!((spectral_gap(&params(-0.5, 2)).unwrap() - 0.5).abs() < 1e-8);
        assert!(matches!(
            spectral_gap(&params(1.0, 1)),
            Err(Error::Gapless { .. })
        ));
        assert!(matches!(
            spectral_gap(&params(-1.0, 1)),
            Err(Error::Gapless { .. })
        ));
    }

    #[test]
    fn spectral_gap_with_grid_missing_quarter_turns() {
        let mut p = params(1.5, 1);
        p.momentum_grid = 17;
        assert!((spectral_gap(&p).unwrap() - 0.5).abs() < 1e-8);
    }

    #[test]
    fn flat_band_examples() {
        let h = mat2([[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]]);
        assert!(max_abs_diff(&flat_band(&h).unwrap().q, &h) < 1e-12);
        let h = mat2([[c(0., 0.), c(0., 2.)], [c(0., -2.), c(0., 0.)]]);
        let expected = mat2([[c(0., 0.), c(0., 1.)], [c(0., -1.), c(0., 0.)]]);
        assert!(max_abs_diff(&flat_band(&h).unwrap().q, &expected) < 1e-12);
        let gapless = DMatrix::<C64>::zeros(2, 2);
        assert!(matches!(flat_band(&gapless), Err(Error::Gapless { .. })));
    }

    #[test]
    fn fermi_unitary_examples() {
        let q = mat2([[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]]);
        assert!((fermi_unitary(&q).unwrap()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        let q = mat2([[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]]);
        assert!((fermi_unitary(&q).unwrap()[(0, 0)] - c(0.0, 1.0)).norm() < 1e-15);

        let p = params(0.5, 1);
        let theta = 1.0;
        let qv = p.off_diagonal_symbol(theta);
        let u = fermi_unitary_at(&p, theta).unwrap();
        assert!((u[(0, 0)] - qv.conj() / qv.norm()).norm() < 1e-12);

        let bad = mat2([[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]]);
        assert!(fermi_unitary(&bad).is_err());
    }

    #[test]
    fn chern_examples() {
        let ch = chern_number(&params(0.0, 1)).unwrap();
        assert_eq!(ch.det, 1);
        assert!((ch.quadrature - 1.0).abs() < 1e-6);
        // oracle: det U_F = e^{-iθ} at m = 0 has phase winding -1
        let closed: Vec<C64> = (0..256)
            .map(|j| C64::from_polar(1.0, -2.0 * PI * j as f64 / 256.0))
            .collect();
        assert_eq!(
            crate::circle_symbols::winding_of_samples(&closed).unwrap(),
            -1
        );

        assert_eq!(chern_number(&params(2.0, 1)).unwrap().det, 0);
        let three = chern_number(&params(0.0, 3)).unwrap();
        assert_eq!(three.det, 3);
        assert!((three.quadrature - 3.0).abs() < 1e-6);
    }

    #[test]
    fn chern_flips_with_fourier_sign() {
        let mut p = params(0.5, 1);
        p.fourier_sign = FourierSign::Minus;
        assert_eq!(chern_number(&p).unwrap().det, -1);
    }

    #[test]
    fn grid_step_quadrature_converges_quadratically() {
        let mut p = params(0.0, 1);
        p.momentum_grid = 64;
        let e64 = (chern_quadrature_grid_step(&p).unwrap() - 1.0).abs();
        p.momentum_grid = 128;
        let e128 = (chern_quadrature_grid_step(&p).unwrap() - 1.0).abs();
        // sin(h)/h - 1 ≈ -h²/6: error ratio 4 on halving h
        assert!((e64 / e128 - 4.0).abs() < 0.05, "ratio {}", e64 / e128);
    }

    #[test]
    fn edge_hamiltonian_two_sites() {
        let mut p = params(0.0, 1);
        p.lattice_length = 2;
        let h = edge_hamiltonian(&p).unwrap();
        assert_eq!(h.shape(), (4, 4));
        let nonzero: Vec<(usize, usize)> = (0..4)
            .flat_map(|r| (0..4).map(move |c| (r, c)))
            .filter(|&(r, c)| h[(r, c)].norm() > 0.0)
            .collect();
        // |+,1><-,0| and its adjoint
        assert_eq!(nonzero, vec![(1, 2), (2, 1)]);
    }

    #[test]
    fn edge_hamiltonian_zero_modes_at_m0() {
        let mut p = params(0.0, 1);
        p.lattice_length = 20;
        let h = edge_hamiltonian(&p).unwrap();
        assert!(hermiticity_residual(&h) < 1e-12);
        assert!(chirality_residual(&h) < 1e-12);
        let spec = SpectralData::new(&h, SpectralSource::Edge).unwrap();
        let zeros: Vec<usize> = (0..spec.eigenvalues.len())
            .filter(|&i| spec.eigenvalues[i].abs() < 1e-10)
            .collect();
        // one mode per end: |+,0> (chirality +1) and |-,L-1> (chirality -1)
        assert_eq!(zeros.len(), 2);
        let mut p0 = 0.0;
        let mut pend = 0.0;
        for &i in &zeros {
            let v = spec.eigenvectors.column(i);
            p0 += v[0].norm_sqr();
            pend += v[20 + 19].norm_sqr();
        }
        assert!((p0 - 1.0).abs() < 1e-10 && (pend - 1.0).abs() < 1e-10);
        let (unit, res) = spec.residuals(&h);
        assert!(unit < 1e-10 && res < 1e-9);
    }

    #[test]
    fn edge_heavy_mass_has_no_midgap_states() {
        let mut p = params(2.0, 1);
        p.lattice_length = 20;
        let spec = SpectralData::new(&edge_hamiltonian(&p).unwrap(), SpectralSource::Edge).unwrap();
        assert!(spec.eigenvalues.iter().all(|l| l.abs() >= 0.5));
    }

    #[test]
    fn edge_invariant_examples() {
        let mut p = params(0.0, 1);
        p.delta = 0.5;
        let e = edge_invariant(&p).unwrap();
        assert_eq!(e.trace, 1);
        assert!(e.full_trace.abs() < 1e-10);
        let mut p = params(2.0, 1);
        p.delta = 0.5;
        assert_eq!(edge_invariant(&p).unwrap().trace, 0);
        let mut p = params(0.0, 2);
        p.delta = 0.5;
        assert_eq!(edge_invariant(&p).unwrap().trace, 2);
    }

    #[test]
    fn edge_invariant_rejects_bad_delta() {
        let mut p = params(0.0, 1);
        p.delta = 5.0;
        assert!(matches!(
            edge_invariant(&p),
            Err(Error::DeltaOutsideGap { .. })
        ));
        p.delta = 0.0;
        assert!(matches!(
            edge_invariant(&p),
            Err(Error::DeltaOutsideGap { .. })
        ));
        let mut p = params(0.0, 1);
        p.lattice_length = 3;
        assert!(edge_invariant(&p).is_err());
    }

    #[test]
    fn edge_invariant_detects_delta_on_eigenvalue() {
        let mut p = params(0.3, 1);
        p.lattice_length = 10;
        let spec = SpectralData::new(&edge_hamiltonian(&p).unwrap(), SpectralSource::Edge).unwrap();
        let gap = spectral_gap(&p).unwrap();
        // place δ on an eigenvalue strictly inside the bulk gap if there is one,
        // otherwise on the largest eigenvalue below the gap margin
        if let Some(&l) = spec
            .eigenvalues
            .iter()
            .find(|l| **l > 1e-3 && **l < gap - 2e-3)
        {
            p.delta = l;
            assert!(matches!(
                edge_invariant(&p),
                Err(Error::DeltaOnEigenvalue { .. })
            ));
        }
    }

    #[test]
    fn sweep_examples() {
        let template = SweepTemplate::default();
        let rows = bulk_edge_sweep(&[-2.0, -0.5, 0.0, 0.5, 2.0], &template);
        let invariants: Vec<i64> = rows.iter().map(|r| r.chern_det.unwrap()).collect();
        assert_eq!(invariants, vec![0, 1, 1, 1, 0]);
        assert!(rows.iter().all(|r| r.agreement == Some(true)));
        assert_eq!(
            rows.iter().map(|r| r.m).collect::<Vec<_>>(),
            vec![-2.0, -0.5, 0.0, 0.5, 2.0]
        );

        let rows = bulk_edge_sweep(&[1.0], &template);
        assert_eq!(rows[0].status, RowStatus::Transition);
        assert!(rows[0].chern_det.is_none() && rows[0].edge_trace.is_none());

        assert!(bulk_edge_sweep(&[], &template).is_empty());
    }

    #[test]
    fn sweep_captures_row_errors() {
        let template = SweepTemplate {
            delta: DeltaChoice::Absolute(5.0),
            ..SweepTemplate::default()
        };
        let rows = bulk_edge_sweep(&[0.0], &template);
        assert_eq!(rows[0].status, RowStatus::Error);
        assert_eq!(rows[0].error_kind, Some(ErrorKind::InvalidInput));
    }
}
