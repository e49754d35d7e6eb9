//! Laurent-polynomial symbols on the unit circle and their winding numbers.
//!
//! A symbol `f(z) = Σ_{|m| ≤ k} a_m z^m` is stored densely over the modes
//! `-k..=k`, so finite support is structural. Winding numbers are computed
//! two ways: by accumulating per-step principal phase increments of the
//! sampled values, and by trapezoid quadrature of `(1/2πi)∮ f'/f dz` with the
//! derivative taken exactly on the coefficients.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Default threshold on `min |f|` below which a symbol counts as vanishing.
pub const DEFAULT_ZERO_TOL: f64 = 1e-8;
/// Accumulated phase must sit this close to `2π·integer` before rounding.
pub const ARGUMENT_PRINCIPLE_INTEGER_TOL: f64 = 1e-9;
/// Log-derivative quadrature must sit this close to an integer.
pub const LOG_DERIVATIVE_INTEGER_TOL: f64 = 1e-6;
/// Per-step phase increments at or beyond this magnitude mean aliasing.
pub const PHASE_STEP_GUARD: f64 = PI / 2.0;

/// Finitely supported Fourier series on the circle.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSymbol {
    bandwidth: usize,
    // coeffs[m + bandwidth] = a_m
    coeffs: Vec<C64>,
}

impl LaurentSymbol {
    /// Builds a symbol from `(mode, coefficient)` pairs. Repeated modes are
    /// rejected; the bandwidth is the largest `|mode|` carrying a nonzero
    /// coefficient.
    pub fn from_modes<I>(modes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, C64)>,
    {
        let mut seen = std::collections::BTreeMap::new();
        for (mode, c) in modes {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "non-finite coefficient at mode {mode}"
                )));
            }
            if seen.insert(mode, c).is_some() {
                return Err(Error::InvalidInput(format!("mode {mode} given twice")));
            }
        }
        let symbol = Self::from_map(&seen);
        if symbol.is_zero() {
            return Err(Error::InvalidInput(
                "symbol must have at least one nonzero coefficient".into(),
            ));
        }
        Ok(symbol)
    }

    fn from_map(map: &std::collections::BTreeMap<i64, C64>) -> Self {
        let bandwidth = map
            .iter()
            .filter(|(_, c)| **c != C64::new(0.0, 0.0))
            .map(|(m, _)| m.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        let mut coeffs = vec![C64::new(0.0, 0.0); 2 * bandwidth + 1];
        for (&m, &c) in map {
            if m.unsigned_abs() as usize <= bandwidth {
                coeffs[(m + bandwidth as i64) as usize] = c;
            }
        }
        Self { bandwidth, coeffs }
    }

    /// Dense constructor from coefficients of modes `-bandwidth..=bandwidth`.
    /// Trailing zero modes are trimmed; an all-zero input gives the zero symbol.
    fn from_dense(bandwidth: usize, coeffs: Vec<C64>) -> Self {
        debug_assert_eq!(coeffs.len(), 2 * bandwidth + 1);
        let map = coeffs
            .into_iter()
            .enumerate()
            .map(|(i, c)| (i as i64 - bandwidth as i64, c))
            .collect();
        Self::from_map(&map)
    }

    /// The designated zero symbol. Only produced by exact operations such as
    /// [`derivative`] of a constant; all other constructors reject it.
    pub fn zero() -> Self {
        Self {
            bandwidth: 0,
            coeffs: vec![C64::new(0.0, 0.0)],
        }
    }

    pub fn monomial(mode: i64, coeff: C64) -> Result<Self> {
        Self::from_modes([(mode, coeff)])
    }

    pub fn constant(value: C64) -> Result<Self> {
        Self::monomial(0, value)
    }

    /// The coordinate function `z`.
    pub fn z() -> Self {
        Self::monomial(1, C64::new(1.0, 0.0)).expect("nonzero")
    }

    /// The conjugate coordinate `z̄ = z^{-1}` on the circle.
    pub fn zbar() -> Self {
        Self::monomial(-1, C64::new(1.0, 0.0)).expect("nonzero")
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == C64::new(0.0, 0.0))
    }

    /// Coefficient `a_m`, zero outside the support.
    pub fn coeff(&self, mode: i64) -> C64 {
        if mode.unsigned_abs() as usize > self.bandwidth {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[(mode + self.bandwidth as i64) as usize]
        }
    }

    /// Nonzero `(mode, coefficient)` pairs in ascending mode order.
    pub fn modes(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        let k = self.bandwidth as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (i as i64 - k, c))
            .filter(|(_, c)| *c != C64::new(0.0, 0.0))
    }

    /// `f(e^{iθ})` as an exact finite sum.
    pub fn value_at(&self, theta: f64) -> C64 {
        self.modes()
            .map(|(m, c)| c * C64::from_polar(1.0, m as f64 * theta))
            .sum()
    }

    /// Pointwise product on the circle (coefficient convolution).
    pub fn mul(&self, other: &Self) -> Self {
        let k = self.bandwidth + other.bandwidth;
        let mut coeffs = vec![C64::new(0.0, 0.0); 2 * k + 1];
        for (m, a) in self.modes() {
            for (l, b) in other.modes() {
                coeffs[(m + l + k as i64) as usize] += a * b;
            }
        }
        Self::from_dense(k, coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = self.bandwidth.max(other.bandwidth);
        let coeffs = (-(k as i64)..=k as i64)
            .map(|m| self.coeff(m) + other.coeff(m))
            .collect();
        Self::from_dense(k, coeffs)
    }

    pub fn scale(&self, factor: C64) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c * factor).collect();
        Self::from_dense(self.bandwidth, coeffs)
    }

    /// Symbol of the adjoint Toeplitz operator: `f*(z) = Σ conj(a_m) z^{-m}`.
    pub fn adjoint(&self) -> Self {
        let coeffs = self.coeffs.iter().rev().map(|c| c.conj()).collect();
        Self::from_dense(self.bandwidth, coeffs)
    }

    /// Short human-readable label, e.g. `"1*z^-2 + 0.1"`.
    pub fn label(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let fmt_c = |c: C64| {
            if c.im == 0.0 {
                format!("{}", c.re)
            } else {
                format!("({}{:+}i)", c.re, c.im)
            }
        };
        self.modes()
            .map(|(m, c)| match m {
                0 => fmt_c(c),
                1 => format!("{}*z", fmt_c(c)),
                _ => format!("{}*z^{}", fmt_c(c), m),
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// One coefficient in the JSON symbol format.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct CoeffEntry {
    pub mode: i64,
    pub re: f64,
    pub im: f64,
}

/// JSON form: `{"coeffs": [{"mode": -1, "re": 0.0, "im": 0.0}, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SymbolFile {
    pub coeffs: Vec<CoeffEntry>,
}

impl From<&LaurentSymbol> for SymbolFile {
    fn from(symbol: &LaurentSymbol) -> Self {
        Self {
            coeffs: symbol
                .modes()
                .map(|(mode, c)| CoeffEntry {
                    mode,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<SymbolFile> for LaurentSymbol {
    type Error = Error;

    fn try_from(file: SymbolFile) -> Result<Self> {
        LaurentSymbol::from_modes(
            file.coeffs
                .into_iter()
                .map(|e| (e.mode, C64::new(e.re, e.im))),
        )
    }
}

impl Serialize for LaurentSymbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SymbolFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentSymbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = SymbolFile::deserialize(d)?;
        LaurentSymbol::try_from(file).map_err(serde::de::Error::custom)
    }
}

/// Uniform grid `θ_j = 2πj/N` on the circle.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleGrid {
    points: Vec<f64>,
}

impl CircleGrid {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidInput("grid size must be positive".into()));
        }
        let points = (0..size)
            .map(|j| 2.0 * PI * j as f64 / size as f64)
            .collect();
        Ok(Self { points })
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Smallest admissible grid for a symbol of the given bandwidth.
    pub fn floor_for(bandwidth: usize) -> usize {
        4 * bandwidth + 4
    }

    pub fn check_floor(&self, symbol: &LaurentSymbol) -> Result<()> {
        let floor = Self::floor_for(symbol.bandwidth());
        if self.size() < floor {
            return Err(Error::GridTooCoarse {
                grid: self.size(),
                floor,
            });
        }
        Ok(())
    }
}

fn sample(symbol: &LaurentSymbol, grid: &CircleGrid) -> Vec<C64> {
    grid.points().iter().map(|&t| symbol.value_at(t)).collect()
}

/// Values of the symbol on the grid.
pub fn evaluate(symbol: &LaurentSymbol, grid: &CircleGrid) -> Result<Vec<C64>> {
    grid.check_floor(symbol)?;
    Ok(sample(symbol, grid))
}

/// `min_j |f(θ_j)|`.
pub fn min_modulus(symbol: &LaurentSymbol, grid: &CircleGrid) -> f64 {
    grid.points()
        .iter()
        .map(|&t| symbol.value_at(t).norm())
        .fold(f64::INFINITY, f64::min)
}

fn ensure_invertible(values: &[C64], zero_tol: f64) -> Result<()> {
    let min_modulus = values
        .iter()
        .map(|v| v.norm())
        .fold(f64::INFINITY, f64::min);
    if min_modulus.is_nan() || min_modulus <= zero_tol {
        return Err(Error::NonInvertibleSymbol {
            min_modulus,
            zero_tol,
        });
    }
    Ok(())
}

/// Winding number of a closed sampled loop of nonzero complex numbers, by
/// summing principal phase increments `arg(v_{j+1}/v_j)` including the
/// closing step. Any increment of magnitude `≥ π/2` is rejected.
pub fn winding_of_samples(values: &[C64]) -> Result<i64> {
    let n = values.len();
    let mut total = 0.0;
    for j in 0..n {
        let step = (values[(j + 1) % n] / values[j]).arg();
        if step.abs() >= PHASE_STEP_GUARD {
            return Err(Error::PhaseStepTooLarge { index: j, step });
        }
        total += step;
    }
    let turns = total / (2.0 * PI);
    let rounded = turns.round();
    if (turns - rounded).abs() > ARGUMENT_PRINCIPLE_INTEGER_TOL {
        return Err(Error::NumericalQuality(format!(
            "accumulated phase {turns} turns is not an integer"
        )));
    }
    Ok(rounded as i64)
}

/// Winding number by phase accumulation along the grid.
///
/// The anti-aliasing floor is not enforced here: a coarse grid is caught by
/// the per-step π/2 guard instead, which reports a numerical error.
pub fn winding_argument_principle(
    symbol: &LaurentSymbol,
    grid: &CircleGrid,
    zero_tol: f64,
) -> Result<i64> {
    let values = sample(symbol, grid);
    ensure_invertible(&values, zero_tol)?;
    winding_of_samples(&values)
}

/// Raw value of `(1/2πi)∮ f'/f dz` by the trapezoid rule. With `z = e^{iθ}`
/// the integrand becomes `z f'(z)/f(z) dθ/2π`.
pub fn log_derivative_integral(
    symbol: &LaurentSymbol,
    grid: &CircleGrid,
    zero_tol: f64,
) -> Result<C64> {
    let values = sample(symbol, grid);
    ensure_invertible(&values, zero_tol)?;
    let fprime = derivative(symbol);
    let n = grid.size() as f64;
    Ok(grid
        .points()
        .iter()
        .zip(&values)
        .map(|(&t, &f)| C64::from_polar(1.0, t) * fprime.value_at(t) / f)
        .sum::<C64>()
        / n)
}

/// Winding number from the logarithmic-derivative contour integral.
pub fn winding_logderivative(
    symbol: &LaurentSymbol,
    grid: &CircleGrid,
    zero_tol: f64,
) -> Result<i64> {
    let integral = log_derivative_integral(symbol, grid, zero_tol)?;
    let rounded = integral.re.round();
    let deviation = (integral - C64::new(rounded, 0.0)).norm();
    if deviation > LOG_DERIVATIVE_INTEGER_TOL {
        return Err(Error::NumericalQuality(format!(
            "log-derivative quadrature {integral} is {deviation:e} away from an integer"
        )));
    }
    Ok(rounded as i64)
}

/// Exact `d/dz`: mode `m` with coefficient `a_m` becomes mode `m-1` with
/// coefficient `m·a_m`. A constant maps to [`LaurentSymbol::zero`].
pub fn derivative(symbol: &LaurentSymbol) -> LaurentSymbol {
    let k = symbol.bandwidth() + 1;
    let mut coeffs = vec![C64::new(0.0, 0.0); 2 * k + 1];
    for (m, c) in symbol.modes() {
        coeffs[(m - 1 + k as i64) as usize] += c * m as f64;
    }
    LaurentSymbol::from_dense(k, coeffs)
}

/// Approximate reciprocal `g ≈ 1/f` with its sup-norm residual on the grid.
#[derive(Clone, Debug)]
pub struct InvertedSymbol {
    pub inverse: LaurentSymbol,
    /// `max_j |f(θ_j) g(θ_j) - 1|`.
    pub residual: f64,
}

/// Fourier coefficients of `1/f` on modes `[-out_bandwidth, out_bandwidth]`,
/// from the discrete Fourier transform of the reciprocal samples.
pub fn invert_symbol(
    symbol: &LaurentSymbol,
    out_bandwidth: usize,
    grid: &CircleGrid,
    zero_tol: f64,
) -> Result<InvertedSymbol> {
    grid.check_floor(symbol)?;
    if grid.size() < 4 * out_bandwidth {
        return Err(Error::GridTooCoarse {
            grid: grid.size(),
            floor: 4 * out_bandwidth,
        });
    }
    let values = sample(symbol, grid);
    ensure_invertible(&values, zero_tol)?;
    let n = grid.size();
    let reciprocal: Vec<C64> = values.iter().map(|v| v.inv()).collect();
    let coeffs: Vec<C64> = (-(out_bandwidth as i64)..=out_bandwidth as i64)
        .map(|m| {
            reciprocal
                .iter()
                .enumerate()
                .map(|(j, r)| {
                    // e^{-imθ_j} with the phase index reduced mod n for accuracy
                    let idx = (m * j as i64).rem_euclid(n as i64) as f64;
                    r * C64::from_polar(1.0, -2.0 * PI * idx / n as f64)
                })
                .sum::<C64>()
                / n as f64
        })
        .collect();
    let inverse = LaurentSymbol::from_dense(out_bandwidth, coeffs);
    let residual = grid
        .points()
        .iter()
        .zip(&values)
        .map(|(&t, &f)| (f * inverse.value_at(t) - 1.0).norm())
        .fold(0.0, f64::max);
    Ok(InvertedSymbol { inverse, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sym(modes: &[(i64, f64)]) -> LaurentSymbol {
        LaurentSymbol::from_modes(modes.iter().map(|&(m, r)| (m, c(r, 0.0)))).unwrap()
    }

    fn grid(n: usize) -> CircleGrid {
        CircleGrid::new(n).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let g = grid(8);
        let v = evaluate(&LaurentSymbol::z(), &g).unwrap();
        assert!((v[0] - c(1.0, 0.0)).norm() < 1e-15);

        let z_plus_zbar = sym(&[(1, 1.0), (-1, 1.0)]);
        // θ_2 = π/2 on an 8-point grid
        let v = evaluate(&z_plus_zbar, &g).unwrap();
        assert!(v[2].norm() < 1e-15);

        let z2_minus_3 = sym(&[(2, 1.0), (0, -3.0)]);
        let v = evaluate(&z2_minus_3, &grid(12)).unwrap();
        assert!((v[0] - c(-2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn evaluate_rejects_coarse_grid() {
        let z3 = sym(&[(3, 1.0)]);
        assert!(matches!(
            evaluate(&z3, &grid(15)),
            Err(Error::GridTooCoarse {
                grid: 15,
                floor: 16
            })
        ));
        assert!(evaluate(&z3, &grid(16)).is_ok());
    }

    #[test]
    fn symbol_construction_invariants() {
        assert!(LaurentSymbol::from_modes([(2, c(0.0, 0.0))]).is_err());
        assert!(LaurentSymbol::from_modes([(1, c(1.0, 0.0)), (1, c(2.0, 0.0))]).is_err());
        let s = LaurentSymbol::from_modes([(5, c(0.0, 0.0)), (-2, c(1.0, 0.0))]).unwrap();
        assert_eq!(s.bandwidth(), 2);
        assert_eq!(s.coeff(5), c(0.0, 0.0));
        assert_eq!(s.coeff(-2), c(1.0, 0.0));
    }

    #[test]
    fn min_modulus_examples() {
        let g = grid(4096);
        assert!((min_modulus(&LaurentSymbol::z(), &g) - 1.0).abs() < 1e-15);
        assert!(min_modulus(&sym(&[(1, 1.0), (0, -1.0)]), &g) < 1e-15);
        // oracle: brute-force minimum of |e^{iθ} - 0.5| over the grid
        let brute = (0..4096)
            .map(|j| (C64::from_polar(1.0, 2.0 * PI * j as f64 / 4096.0) - 0.5).norm())
            .fold(f64::INFINITY, f64::min);
        let got = min_modulus(&sym(&[(1, 1.0), (0, -0.5)]), &g);
        assert!((got - brute).abs() < 1e-15);
        assert!((got - 0.5).abs() < 1e-15);
    }

    #[test]
    fn winding_examples() {
        let g = grid(4096);
        let tol = DEFAULT_ZERO_TOL;
        assert_eq!(
            winding_argument_principle(&LaurentSymbol::z(), &g, tol).unwrap(),
            1
        );
        assert_eq!(
            winding_argument_principle(&sym(&[(0, 5.0)]), &g, tol).unwrap(),
            0
        );
        let f = sym(&[(-2, 1.0), (0, 0.1)]);
        assert_eq!(winding_argument_principle(&f, &g, tol).unwrap(), -2);
        for (a, expected) in [
            (c(0.3, 0.0), 1),
            (c(0.0, -0.3), 1),
            (c(2.0, 0.0), 0),
            (c(-1.2, 1.6), 0),
        ] {
            let f = LaurentSymbol::from_modes([(1, c(1.0, 0.0)), (0, -a)]).unwrap();
            assert_eq!(
                winding_argument_principle(&f, &g, tol).unwrap(),
                expected,
                "a={a}"
            );
        }
    }

    #[test]
    fn winding_rejects_zero_on_circle() {
        let f = sym(&[(1, 1.0), (0, -1.0)]);
        assert!(matches!(
            winding_argument_principle(&f, &grid(64), DEFAULT_ZERO_TOL),
            Err(Error::NonInvertibleSymbol { .. })
        ));
        assert!(matches!(
            winding_logderivative(&f, &grid(64), DEFAULT_ZERO_TOL),
            Err(Error::NonInvertibleSymbol { .. })
        ));
    }

    #[test]
    fn phase_guard_fires_on_aliased_grid() {
        let z8 = sym(&[(8, 1.0)]);
        assert!(matches!(
            winding_argument_principle(&z8, &grid(16), DEFAULT_ZERO_TOL),
            Err(Error::PhaseStepTooLarge { .. })
        ));
        assert_eq!(
            winding_argument_principle(&z8, &grid(36), DEFAULT_ZERO_TOL).unwrap(),
            8
        );
    }

    #[test]
    fn logderivative_examples() {
        let g = grid(4096);
        let tol = DEFAULT_ZERO_TOL;
        assert_eq!(
            winding_logderivative(&LaurentSymbol::z(), &g, tol).unwrap(),
            1
        );
        assert_eq!(
            winding_logderivative(&sym(&[(3, 1.0)]), &g, tol).unwrap(),
            3
        );
        // (z - 0.5)(z - 3) = z^2 - 3.5 z + 1.5
        let f = sym(&[(2, 1.0), (1, -3.5), (0, 1.5)]);
        assert_eq!(winding_logderivative(&f, &g, tol).unwrap(), 1);
        assert_eq!(winding_argument_principle(&f, &g, tol).unwrap(), 1);
    }

    #[test]
    fn derivative_examples() {
        let d = derivative(&sym(&[(2, 1.0)]));
        assert_eq!(d, sym(&[(1, 2.0)]));
        let d = derivative(&sym(&[(0, 7.0)]));
        assert!(d.is_zero());
        assert_eq!(d, LaurentSymbol::zero());
        let d = derivative(&LaurentSymbol::zbar());
        assert_eq!(d, sym(&[(-2, -1.0)]));
        assert_eq!(d.bandwidth(), 2);
    }

    #[test]
    fn adjoint_reflects_and_conjugates() {
        let f = LaurentSymbol::from_modes([(2, c(1.0, 2.0)), (-1, c(0.5, -1.0))]).unwrap();
        let a = f.adjoint();
        assert_eq!(a.coeff(-2), c(1.0, -2.0));
        assert_eq!(a.coeff(1), c(0.5, 1.0));
        assert_eq!(a.adjoint(), f);
    }

    #[test]
    fn invert_exact_cases() {
        let g = grid(64);
        let inv = invert_symbol(&LaurentSymbol::z(), 4, &g, DEFAULT_ZERO_TOL).unwrap();
        assert!(inv.residual < 1e-14);
        for m in -4..=4 {
            let expected = if m == -1 { c(1.0, 0.0) } else { c(0.0, 0.0) };
            assert!((inv.inverse.coeff(m) - expected).norm() < 1e-14, "mode {m}");
        }
        let inv = invert_symbol(&sym(&[(0, 2.0)]), 4, &g, DEFAULT_ZERO_TOL).unwrap();
        assert!(inv.residual < 1e-14);
        assert!((inv.inverse.coeff(0) - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn invert_geometric_series() {
        // 1/(1 - 0.5 z) = Σ_{m≥0} 0.5^m z^m
        let f = sym(&[(0, 1.0), (1, -0.5)]);
        let inv = invert_symbol(&f, 64, &grid(4096), DEFAULT_ZERO_TOL).unwrap();
        assert!(inv.residual <= 1e-8);
        for m in -64..=64i64 {
            let expected = if m >= 0 { 0.5f64.powi(m as i32) } else { 0.0 };
            assert!(
                (inv.inverse.coeff(m) - c(expected, 0.0)).norm() < 1e-13,
                "mode {m}: {}",
                inv.inverse.coeff(m)
            );
        }
    }

    #[test]
    fn json_roundtrip_and_schema() {
        let json = r#"{"coeffs":[{"mode":-1,"re":2.0,"im":0.0},{"mode":1,"re":1.0,"im":0.0}]}"#;
        let f: LaurentSymbol = serde_json::from_str(json).unwrap();
        assert_eq!(f, sym(&[(1, 1.0), (-1, 2.0)]));
        assert_eq!(serde_json::to_string(&f).unwrap(), json);
        let zero = r#"{"coeffs":[{"mode":0,"re":0.0,"im":0.0}]}"#;
        assert!(serde_json::from_str::<LaurentSymbol>(zero).is_err());
    }
}
