//! Finite sections of Toeplitz operators and their Fredholm index.
//!
//! A square `N×N` section of `T_f` always has index zero, so sections here
//! are rectangular: `(N+k)×N` with entry `(i, j) = a_{i-j}`. That rectangle
//! is exactly `T_f` applied to vectors supported on the first `N`
//! coordinates, so approximate kernel vectors of `T_f` and of `T_{f*}` show
//! up as singular values that decay geometrically in `N`.
//!
//! Two independent index routes are provided:
//!
//! - [`fredholm_index_svd`] counts small singular values of the sections of
//!   `f` and `f*`;
//! - [`fredholm_index_fedosov`] evaluates `Tr(1 - T_g T_f) - Tr(1 - T_f T_g)`
//!   with `g ≈ 1/f`, using exact compressions of the operator products.
//!
//! [`verify_index_theorem`] runs both together with both winding algorithms
//! and insists on `index = -winding` everywhere.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::circle_symbols::{
    invert_symbol, min_modulus, winding_argument_principle, winding_logderivative, CircleGrid,
    LaurentSymbol, DEFAULT_ZERO_TOL,
};
use crate::linalg::singular_values;
use crate::{Error, Result, C64};

pub const DEFAULT_TRUNCATION: usize = 128;
pub const MAX_TRUNCATION: usize = 2048;
pub const DEFAULT_KERNEL_TOL: f64 = 1e-8;
/// Minimum ratio between the smallest retained and the largest discarded
/// singular value.
pub const MIN_SINGULAR_GAP: f64 = 1e3;
pub const DEFAULT_WINDING_GRID: usize = 4096;
/// Largest inverse bandwidth tried when fitting `g ≈ 1/f`.
pub const MAX_INVERSE_BANDWIDTH: usize = 1024;
pub const INVERSION_RESIDUAL_TOL: f64 = 1e-8;
pub const FEDOSOV_INTEGER_TOL: f64 = 1e-3;
pub const FEDOSOV_WINDOW_FACTOR: usize = 8;

/// Entry `(i, j) = a_{i-j}` for `i < rows`, `j < cols`.
pub(crate) fn toeplitz_section(symbol: &LaurentSymbol, rows: usize, cols: usize) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(rows, cols);
    for (mode, c) in symbol.modes() {
        for j in 0..cols {
            let i = j as i64 + mode;
            if i >= 0 && (i as usize) < rows {
                m[(i as usize, j)] = c;
            }
        }
    }
    m
}

/// Rectangular `(N+k)×N` finite section of `T_f`.
#[derive(Clone, Debug)]
pub struct ToeplitzTruncation {
    symbol: LaurentSymbol,
    domain_size: usize,
    matrix: DMatrix<C64>,
}

impl ToeplitzTruncation {
    pub fn symbol(&self) -> &LaurentSymbol {
        &self.symbol
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }
}

pub fn build_truncation(symbol: &LaurentSymbol, n: usize) -> Result<ToeplitzTruncation> {
    let k = symbol.bandwidth();
    if n < 2 * k + 2 {
        return Err(Error::InvalidInput(format!(
            "truncation N={n} is below 2k+2={} for bandwidth {k}",
            2 * k + 2
        )));
    }
    Ok(ToeplitzTruncation {
        symbol: symbol.clone(),
        domain_size: n,
        matrix: toeplitz_section(symbol, n + k, n),
    })
}

/// Numerical kernel dimension with its separation diagnostic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelCount {
    pub dim: usize,
    /// Smallest singular value at or above `tol` divided by the largest one
    /// below it; infinite when nothing falls below `tol`.
    pub sv_gap: f64,
}

/// Counts singular values below `tol`, plus the `ncols - nrows` directions a
/// wide matrix kills outright.
pub fn numerical_kernel_dim(matrix: &DMatrix<C64>, tol: f64) -> Result<KernelCount> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "kernel tolerance must be positive, got {tol}"
        )));
    }
    let values = singular_values(matrix)?;
    let structural = matrix.ncols().saturating_sub(matrix.nrows());
    let small: Vec<f64> = values.iter().copied().filter(|&s| s < tol).collect();
    let largest_small = small.iter().copied().fold(0.0, f64::max);
    let smallest_large = values
        .iter()
        .copied()
        .filter(|&s| s >= tol)
        .fold(f64::INFINITY, f64::min);
    let sv_gap = if small.is_empty() || largest_small == 0.0 {
        f64::INFINITY
    } else {
        smallest_large / largest_small
    };
    Ok(KernelCount {
        dim: small.len() + structural,
        sv_gap,
    })
}

/// Options shared by the index routines.
#[derive(Clone, Debug)]
pub struct IndexConfig {
    pub n: usize,
    pub max_n: usize,
    pub tol: f64,
    pub zero_tol: f64,
    pub grid_size: usize,
    /// Fixed inverse bandwidth for the defect-trace route; chosen adaptively
    /// when `None`.
    pub inv_bandwidth: Option<usize>,
    /// Zeroes the first column of every section of `f` before counting.
    /// Exists only to exercise the theorem-violation path.
    #[doc(hidden)]
    pub corrupt_truncation: bool,
}

impl Default for IndexConfig {
    fn default() -> Self {
        Self {
            n: DEFAULT_TRUNCATION,
            max_n: MAX_TRUNCATION,
            tol: DEFAULT_KERNEL_TOL,
            zero_tol: DEFAULT_ZERO_TOL,
            grid_size: DEFAULT_WINDING_GRID,
            inv_bandwidth: None,
            corrupt_truncation: false,
        }
    }
}

fn winding_grid(symbol: &LaurentSymbol, requested: usize) -> Result<CircleGrid> {
    CircleGrid::new(requested.max(CircleGrid::floor_for(symbol.bandwidth())))
}

fn ensure_invertible(symbol: &LaurentSymbol, config: &IndexConfig) -> Result<f64> {
    let grid = winding_grid(symbol, config.grid_size)?;
    let m = min_modulus(symbol, &grid);
    if m.is_nan() || m <= config.zero_tol {
        return Err(Error::NonInvertibleSymbol {
            min_modulus: m,
            zero_tol: config.zero_tol,
        });
    }
    Ok(m)
}

/// Index from singular-value counting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SvdIndex {
    pub index: i64,
    pub kernel_dim: usize,
    pub cokernel_dim: usize,
    /// Worst gap over both sections at both sizes.
    pub sv_gap: f64,
    pub n: usize,
    /// The doubled size used for the stability check.
    pub n_check: usize,
}

fn svd_counts(
    symbol: &LaurentSymbol,
    n: usize,
    tol: f64,
    corrupt: bool,
) -> Result<(KernelCount, KernelCount)> {
    let mut forward = build_truncation(symbol, n)?.into_matrix();
    if corrupt {
        forward.column_mut(0).fill(C64::new(0.0, 0.0));
    }
    let adjoint = build_truncation(&symbol.adjoint(), n)?.into_matrix();
    Ok((
        numerical_kernel_dim(&forward, tol)?,
        numerical_kernel_dim(&adjoint, tol)?,
    ))
}

fn svd_index_inner(symbol: &LaurentSymbol, n: usize, config: &IndexConfig) -> Result<SvdIndex> {
    ensure_invertible(symbol, config)?;
    let (ker, coker) = svd_counts(symbol, n, config.tol, config.corrupt_truncation)?;
    let (ker2, coker2) = svd_counts(symbol, 2 * n, config.tol, config.corrupt_truncation)?;
    let gap = [ker.sv_gap, coker.sv_gap, ker2.sv_gap, coker2.sv_gap]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    if gap < MIN_SINGULAR_GAP {
        return Err(Error::AmbiguousGap {
            n,
            gap,
            required: MIN_SINGULAR_GAP,
        });
    }
    let at_n = ker.dim as i64 - coker.dim as i64;
    let at_2n = ker2.dim as i64 - coker2.dim as i64;
    if ker.dim != ker2.dim || coker.dim != coker2.dim {
        return Err(Error::UnstableIndex {
            n,
            n2: 2 * n,
            at_n,
            at_2n,
        });
    }
    Ok(SvdIndex {
        index: at_n,
        kernel_dim: ker.dim,
        cokernel_dim: coker.dim,
        sv_gap: gap,
        n,
        n_check: 2 * n,
    })
}

/// `dim ker T_f - dim ker T_{f*}` from the rectangular sections at `N`,
/// confirmed at `2N`.
pub fn fredholm_index_svd(symbol: &LaurentSymbol, n: usize, tol: f64) -> Result<SvdIndex> {
    let config = IndexConfig {
        tol,
        ..IndexConfig::default()
    };
    svd_index_inner(symbol, n, &config)
}

/// Index from the defect-trace formula.
#[derive(Clone, Debug, PartialEq)]
pub struct FedosovIndex {
    pub index: i64,
    /// `Tr(1 - T_g T_f) - Tr(1 - T_f T_g)` before rounding.
    pub trace: f64,
    pub window: usize,
    pub inv_bandwidth: usize,
    pub inversion_residual: f64,
}

/// `Tr(1 - T_g T_f) - Tr(1 - T_f T_g)` on an `N×N` window, `g ≈ 1/f`.
///
/// The products are compressed exactly: `P_N T_g T_f P_N` is computed as the
/// `N×(N+k)` section of `g` times the `(N+k)×N` section of `f`, since `T_f`
/// maps the first `N` coordinates into the first `N+k`. Products of square
/// sections would have equal traces and always give zero.
pub fn fredholm_index_fedosov(
    symbol: &LaurentSymbol,
    n: usize,
    inv_bandwidth: usize,
) -> Result<FedosovIndex> {
    fedosov_inner(symbol, n, inv_bandwidth, &IndexConfig::default())
}

fn fedosov_inner(
    symbol: &LaurentSymbol,
    n: usize,
    inv_bandwidth: usize,
    config: &IndexConfig,
) -> Result<FedosovIndex> {
    ensure_invertible(symbol, config)?;
    let k = symbol.bandwidth();
    let grid_size = config
        .grid_size
        .max(4 * inv_bandwidth)
        .max(CircleGrid::floor_for(k));
    let inverted = invert_symbol(
        symbol,
        inv_bandwidth,
        &CircleGrid::new(grid_size)?,
        config.zero_tol,
    )?;
    if inverted.residual > INVERSION_RESIDUAL_TOL {
        return Err(Error::NumericalQuality(format!(
            "inverse bandwidth {inv_bandwidth} leaves residual {:e} > {INVERSION_RESIDUAL_TOL:e}",
            inverted.residual
        )));
    }
    let g = &inverted.inverse;
    let kg = g.bandwidth();
    let window = n.max(FEDOSOV_WINDOW_FACTOR * (k + kg.max(1)));

    let gf = toeplitz_section(g, window, window + k) * toeplitz_section(symbol, window + k, window);
    let fg =
        toeplitz_section(symbol, window, window + kg) * toeplitz_section(g, window + kg, window);
    let defect_trace = |prod: &DMatrix<C64>| -> C64 {
        (0..window).map(|i| C64::new(1.0, 0.0) - prod[(i, i)]).sum()
    };
    let value = defect_trace(&gf) - defect_trace(&fg);
    let rounded = value.re.round();
    let deviation = (value - C64::new(rounded, 0.0)).norm();
    if deviation > FEDOSOV_INTEGER_TOL {
        return Err(Error::NumericalQuality(format!(
            "defect-trace difference {value} is {deviation:e} from an integer"
        )));
    }
    Ok(FedosovIndex {
        index: rounded as i64,
        trace: value.re,
        window,
        inv_bandwidth,
        inversion_residual: inverted.residual,
    })
}

fn fedosov_adaptive(
    symbol: &LaurentSymbol,
    n: usize,
    config: &IndexConfig,
) -> Result<FedosovIndex> {
    if let Some(bw) = config.inv_bandwidth {
        return fedosov_inner(symbol, n, bw, config);
    }
    let mut bw = 16.max(2 * symbol.bandwidth());
    loop {
        match fedosov_inner(symbol, n, bw, config) {
            Err(Error::NumericalQuality(_)) if 2 * bw <= MAX_INVERSE_BANDWIDTH => bw *= 2,
            other => return other,
        }
    }
}

fn serialize_gap<S: serde::Serializer>(gap: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if gap.is_finite() {
        s.serialize_some(gap)
    } else {
        s.serialize_none()
    }
}

fn deserialize_gap<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

/// All four index/winding integers plus diagnostics for one symbol.
/// `sv_gap` serializes as `null` when infinite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub symbol: String,
    pub index_svd: i64,
    pub index_fedosov: i64,
    pub winding_ap: i64,
    pub winding_logd: i64,
    pub kernel_dim: usize,
    pub cokernel_dim: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub tol: f64,
    #[serde(serialize_with = "serialize_gap", deserialize_with = "deserialize_gap")]
    pub sv_gap: f64,
    #[serde(rename = "N_check")]
    pub n_check: usize,
    pub fedosov_window: usize,
    pub fedosov_trace: f64,
    pub inv_bandwidth: usize,
    pub inversion_residual: f64,
    pub winding_grid: usize,
    pub min_modulus: f64,
}

impl IndexReport {
    pub fn consistent(&self) -> bool {
        self.index_svd == self.index_fedosov
            && self.index_svd == -self.winding_ap
            && self.index_svd == -self.winding_logd
            && self.index_svd == self.kernel_dim as i64 - self.cokernel_dim as i64
    }
}

/// Runs both index routes and both winding routes; succeeds iff all four
/// satisfy `index = -winding`.
///
/// When the singular-value route is ambiguous or unstable at `config.n` the
/// truncation is doubled, up to `config.max_n`.
pub fn verify_index_theorem(symbol: &LaurentSymbol, config: &IndexConfig) -> Result<IndexReport> {
    let min_mod = ensure_invertible(symbol, config)?;
    let grid = winding_grid(symbol, config.grid_size)?;
    let winding_ap = winding_argument_principle(symbol, &grid, config.zero_tol)?;
    let winding_logd = winding_logderivative(symbol, &grid, config.zero_tol)?;

    let mut n = config.n.max(2 * symbol.bandwidth() + 2);
    let svd = loop {
        match svd_index_inner(symbol, n, config) {
            Err(Error::AmbiguousGap { .. } | Error::UnstableIndex { .. })
                if 2 * n <= config.max_n =>
            {
                n *= 2
            }
            other => break other?,
        }
    };
    let fedosov = fedosov_adaptive(symbol, n, config)?;

    let report = IndexReport {
        symbol: symbol.label(),
        index_svd: svd.index,
        index_fedosov: fedosov.index,
        winding_ap,
        winding_logd,
        kernel_dim: svd.kernel_dim,
        cokernel_dim: svd.cokernel_dim,
        n: svd.n,
        tol: config.tol,
        sv_gap: svd.sv_gap,
        n_check: svd.n_check,
        fedosov_window: fedosov.window,
        fedosov_trace: fedosov.trace,
        inv_bandwidth: fedosov.inv_bandwidth,
        inversion_residual: fedosov.inversion_residual,
        winding_grid: grid.size(),
        min_modulus: min_mod,
    };
    if !report.consistent() {
        return Err(Error::IndexTheoremViolation(Box::new(report)));
    }
    Ok(report)
}
