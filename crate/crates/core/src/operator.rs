//! Problem data: periodic coefficients, decaying perturbations, and the
//! companion-matrix form of the operator.
//!
//! An operator `H = c D^n + sum a_k(t) D^k + sum q_k(t) D^k` is described by a
//! [`RawOperatorSpec`]. [`normalize`] divides through by the constant leading
//! coefficient `c`, producing an [`OperatorSpec`] with unit leading coefficient
//! together with the affine eigenvalue map `lambda_raw = c * lambda` used when
//! reporting results in the original convention.
//!
//! Periodic coefficients are truncated Fourier series (period 1), so
//! evaluation is exactly periodic and analytic in `t`. Perturbations come from
//! a closed family of decaying shapes, each carrying a certified exponential
//! decay rate `tau_eff` with `|q(t)| * exp(tau_eff * |t|)` bounded.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectralError};

/// One harmonic of a 1-periodic coefficient: `value * exp(2*pi*i*index*t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierCoefficient {
    pub index: i64,
    pub value: Complex64,
}

impl FourierCoefficient {
    pub fn new(index: i64, value: Complex64) -> Self {
        Self { index, value }
    }

    pub fn real(index: i64, value: f64) -> Self {
        Self::new(index, Complex64::new(value, 0.0))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FourierCoefficientWire {
    index: i64,
    re: f64,
    im: f64,
}

impl Serialize for FourierCoefficient {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        FourierCoefficientWire {
            index: self.index,
            re: self.value.re,
            im: self.value.im,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for FourierCoefficient {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let w = FourierCoefficientWire::deserialize(de)?;
        Ok(Self {
            index: w.index,
            value: Complex64::new(w.re, w.im),
        })
    }
}

/// Evaluate a truncated Fourier series at `t`.
pub fn fourier_eval(coeffs: &[FourierCoefficient], t: f64) -> Complex64 {
    coeffs
        .iter()
        .map(|c| c.value * (Complex64::new(0.0, 2.0 * PI * c.index as f64 * t)).exp())
        .sum()
}

/// Exact antiderivative of a truncated Fourier series from 0 to `t`.
pub fn fourier_integral(coeffs: &[FourierCoefficient], t: f64) -> Complex64 {
    coeffs
        .iter()
        .map(|c| {
            if c.index == 0 {
                c.value * t
            } else {
                let omega = Complex64::new(0.0, 2.0 * PI * c.index as f64);
                c.value * ((omega * t).exp() - 1.0) / omega
            }
        })
        .sum()
}

/// Decaying perturbation shapes. Each family's single shape parameter is
/// `rate`; the certified decay exponent `tau_eff` is family-specific.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationFamily {
    /// `A * exp(-rate * |t|)`, `tau_eff = rate`.
    ExpDecay,
    /// `A * sech(rate * t)^2`, `tau_eff = 2 * rate`.
    SechSq,
    /// `A * exp(-rate * t^2)`, decays faster than any exponential;
    /// certified `tau_eff = 2 * sqrt(rate)` (sup bound `|A| * e`).
    Gaussian,
    /// `A` on `[-w, w]` and 0 outside, with half-width `w = rate`;
    /// certified `tau_eff = 2 / w` (sup bound `|A| * e^2`).
    CompactBump,
}

/// One decaying lower-order term `q_k(t) D^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationTerm {
    /// Derivative order `k` in `0..n-1`.
    pub order: usize,
    pub family: PerturbationFamily,
    pub amplitude: Complex64,
    /// Shape parameter; must be positive. See [`PerturbationFamily`].
    pub rate: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PerturbationTermWire {
    order: usize,
    family: PerturbationFamily,
    amplitude: ComplexWire,
    rate: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexWire {
    re: f64,
    im: f64,
}

impl Serialize for PerturbationTerm {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        PerturbationTermWire {
            order: self.order,
            family: self.family,
            amplitude: ComplexWire {
                re: self.amplitude.re,
                im: self.amplitude.im,
            },
            rate: self.rate,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for PerturbationTerm {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let w = PerturbationTermWire::deserialize(de)?;
        Ok(Self {
            order: w.order,
            family: w.family,
            amplitude: Complex64::new(w.amplitude.re, w.amplitude.im),
            rate: w.rate,
        })
    }
}

impl PerturbationTerm {
    pub fn new(order: usize, family: PerturbationFamily, amplitude: Complex64, rate: f64) -> Self {
        Self {
            order,
            family,
            amplitude,
            rate,
        }
    }

    /// Value of `q_k(t)`.
    pub fn eval(&self, t: f64) -> Complex64 {
        match self.family {
            PerturbationFamily::ExpDecay => self.amplitude * (-self.rate * t.abs()).exp(),
            PerturbationFamily::SechSq => {
                let c = (self.rate * t).cosh();
                self.amplitude / (c * c)
            }
            PerturbationFamily::Gaussian => self.amplitude * (-self.rate * t * t).exp(),
            PerturbationFamily::CompactBump => {
                if t.abs() <= self.rate {
                    self.amplitude
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
        }
    }

    /// Certified decay exponent: `|q(t)| * exp(tau_eff * |t|)` is bounded.
    pub fn tau_eff(&self) -> f64 {
        match self.family {
            PerturbationFamily::ExpDecay => self.rate,
            PerturbationFamily::SechSq => 2.0 * self.rate,
            PerturbationFamily::Gaussian => 2.0 * self.rate.sqrt(),
            PerturbationFamily::CompactBump => 2.0 / self.rate,
        }
    }

    /// Supremum of `|q(t)| * exp(tau_eff * |t|)` over the real line.
    pub fn decay_sup_bound(&self) -> f64 {
        let a = self.amplitude.norm();
        match self.family {
            PerturbationFamily::ExpDecay => a,
            // sech^2(rt) e^{2r|t|} = 4 / (1 + e^{-2r|t|})^2 -> 4 as |t| -> inf.
            PerturbationFamily::SechSq => 4.0 * a,
            // max of e^{-r t^2 + 2 sqrt(r) |t|} at |t| = 1/sqrt(r).
            PerturbationFamily::Gaussian => a * 1.0f64.exp(),
            PerturbationFamily::CompactBump => a * 2.0f64.exp(),
        }
    }
}

/// Affine eigenvalue map between raw and normalized conventions:
/// `lambda_raw = scale * lambda_normalized`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaMap {
    pub scale_re: f64,
    pub scale_im: f64,
}

impl LambdaMap {
    pub fn identity() -> Self {
        Self {
            scale_re: 1.0,
            scale_im: 0.0,
        }
    }

    pub fn scale(&self) -> Complex64 {
        Complex64::new(self.scale_re, self.scale_im)
    }

    pub fn to_raw(&self, lambda_normalized: Complex64) -> Complex64 {
        self.scale() * lambda_normalized
    }

    pub fn to_normalized(&self, lambda_raw: Complex64) -> Complex64 {
        lambda_raw / self.scale()
    }
}

/// Operator description before normalization: `c D^n + sum a_k D^k + sum q_k D^k`.
#[derive(Debug, Clone)]
pub struct RawOperatorSpec {
    pub order: usize,
    /// Constant leading coefficient `c`.
    pub leading_coeff: Complex64,
    /// Fourier series for `a_0 .. a_{n-1}`.
    pub periodic_coeffs: Vec<Vec<FourierCoefficient>>,
    pub perturbations: Vec<PerturbationTerm>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    order: usize,
    leading_sign: i8,
    periodic_coeffs: Vec<Vec<FourierCoefficient>>,
    #[serde(default)]
    perturbations: Vec<PerturbationTerm>,
}

impl RawOperatorSpec {
    /// Parse the JSON operator-spec document.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpecFile = serde_json::from_str(text).map_err(|e| {
            SpectralError::InvalidSpec(format!(
                "line {}, column {}: {}",
                e.line(),
                e.column(),
                e
            ))
        })?;
        if file.leading_sign != 1 && file.leading_sign != -1 {
            return Err(SpectralError::InvalidSpec(format!(
                "field \"leading_sign\" must be 1 or -1, got {}",
                file.leading_sign
            )));
        }
        let raw = Self {
            order: file.order,
            leading_coeff: Complex64::new(file.leading_sign as f64, 0.0),
            periodic_coeffs: file.periodic_coeffs,
            perturbations: file.perturbations,
        };
        raw.validate()?;
        Ok(raw)
    }

    pub fn validate(&self) -> Result<()> {
        if self.order < 1 {
            return Err(SpectralError::InvalidSpec(
                "field \"order\" must be >= 1".into(),
            ));
        }
        if self.periodic_coeffs.len() != self.order {
            return Err(SpectralError::InvalidSpec(format!(
                "field \"periodic_coeffs\" must list {} series (a_0 .. a_{}), got {}",
                self.order,
                self.order - 1,
                self.periodic_coeffs.len()
            )));
        }
        for p in &self.perturbations {
            if p.order >= self.order {
                return Err(SpectralError::InvalidSpec(format!(
                    "perturbation of order {} not allowed for operator order {} (q_n = 0)",
                    p.order, self.order
                )));
            }
            if !(p.rate > 0.0) {
                return Err(SpectralError::InvalidSpec(format!(
                    "perturbation field \"rate\" must be positive, got {}",
                    p.rate
                )));
            }
        }
        Ok(())
    }
}

/// Normalized operator: unit leading coefficient, plus the eigenvalue map
/// back to the raw convention.
#[derive(Debug, Clone)]
pub struct OperatorSpec {
    order: usize,
    periodic_coeffs: Vec<Vec<FourierCoefficient>>,
    perturbations: Vec<PerturbationTerm>,
    lambda_map: LambdaMap,
}

/// Divide through by the constant leading coefficient.
///
/// The eigenvalue problem `H u = lambda_raw u` becomes
/// `H_normalized u = lambda u` with `lambda_raw = c * lambda`.
pub fn normalize(raw: &RawOperatorSpec) -> Result<OperatorSpec> {
    raw.validate()?;
    let c = raw.leading_coeff;
    if c.norm() == 0.0 {
        return Err(SpectralError::NonconstantLeadingCoefficient(
            "leading coefficient is zero".into(),
        ));
    }
    let periodic_coeffs = raw
        .periodic_coeffs
        .iter()
        .map(|series| {
            series
                .iter()
                .map(|fc| FourierCoefficient::new(fc.index, fc.value / c))
                .collect()
        })
        .collect();
    let perturbations = raw
        .perturbations
        .iter()
        .map(|p| PerturbationTerm {
            amplitude: p.amplitude / c,
            ..*p
        })
        .collect();
    Ok(OperatorSpec {
        order: raw.order,
        periodic_coeffs,
        perturbations,
        lambda_map: LambdaMap {
            scale_re: c.re,
            scale_im: c.im,
        },
    })
}

impl OperatorSpec {
    /// Normalized spec straight from parts (leading coefficient already 1).
    pub fn new(
        order: usize,
        periodic_coeffs: Vec<Vec<FourierCoefficient>>,
        perturbations: Vec<PerturbationTerm>,
    ) -> Result<Self> {
        let raw = RawOperatorSpec {
            order,
            leading_coeff: Complex64::new(1.0, 0.0),
            periodic_coeffs,
            perturbations,
        };
        normalize(&raw)
    }

    /// The free operator `D^n`.
    pub fn free(order: usize) -> Self {
        Self::new(order, vec![Vec::new(); order], Vec::new()).expect("order >= 1")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        normalize(&RawOperatorSpec::from_json(text)?)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn lambda_map(&self) -> LambdaMap {
        self.lambda_map
    }

    pub fn perturbations(&self) -> &[PerturbationTerm] {
        &self.perturbations
    }

    pub fn periodic_coeffs(&self) -> &[Vec<FourierCoefficient>] {
        &self.periodic_coeffs
    }

    pub fn has_perturbation(&self) -> bool {
        !self.perturbations.is_empty()
    }

    /// Minimum certified decay exponent over all perturbation terms
    /// (`None` when there are no perturbations).
    pub fn tau(&self) -> Option<f64> {
        self.perturbations
            .iter()
            .map(|p| p.tau_eff())
            .fold(None, |acc, t| Some(acc.map_or(t, |a: f64| a.min(t))))
    }

    /// Evaluate the periodic coefficient `a_k(t)`.
    pub fn coeff(&self, k: usize, t: f64) -> Complex64 {
        fourier_eval(&self.periodic_coeffs[k], t)
    }

    /// Evaluate the perturbation coefficient `q_k(t)` (sum of all terms of order `k`).
    pub fn perturbation_coeff(&self, k: usize, t: f64) -> Complex64 {
        self.perturbations
            .iter()
            .filter(|p| p.order == k)
            .map(|p| p.eval(t))
            .sum()
    }

    /// Companion matrix `A(t, lambda)`: superdiagonal ones, last row
    /// `(lambda - a_0(t), -a_1(t), ..., -a_{n-1}(t))`.
    pub fn companion_matrix(&self, lambda: Complex64, t: f64) -> Array2<Complex64> {
        let n = self.order;
        let mut a = Array2::zeros((n, n));
        for i in 0..n.saturating_sub(1) {
            a[[i, i + 1]] = Complex64::new(1.0, 0.0);
        }
        a[[n - 1, 0]] = lambda - self.coeff(0, t);
        for k in 1..n {
            a[[n - 1, k]] = -self.coeff(k, t);
        }
        a
    }

    /// Perturbation matrix `B_1(t)`: zero except the last row `(q_0, ..., q_{n-1})`.
    pub fn perturbation_matrix(&self, t: f64) -> Array2<Complex64> {
        let n = self.order;
        let mut b = Array2::zeros((n, n));
        for k in 0..n {
            b[[n - 1, k]] = self.perturbation_coeff(k, t);
        }
        b
    }

    /// Row vector `(q_0(t), ..., q_{n-1}(t))` of the perturbation matrix.
    pub fn perturbation_row(&self, t: f64) -> Vec<Complex64> {
        (0..self.order).map(|k| self.perturbation_coeff(k, t)).collect()
    }

    /// Trace of the companion matrix. Equals `-a_{n-1}(t)` for `n >= 2` and
    /// `lambda - a_0(t)` for `n = 1`.
    pub fn companion_trace(&self, lambda: Complex64, t: f64) -> Complex64 {
        if self.order == 1 {
            lambda - self.coeff(0, t)
        } else {
            -self.coeff(self.order - 1, t)
        }
    }

    /// Exact value of `int_0^t trace A(s, lambda) ds` (Fourier antiderivative).
    pub fn companion_trace_integral(&self, lambda: Complex64, t: f64) -> Complex64 {
        if self.order == 1 {
            lambda * t - fourier_integral(&self.periodic_coeffs[0], t)
        } else {
            -fourier_integral(&self.periodic_coeffs[self.order - 1], t)
        }
    }
}

// Free-function forms of the operations, matching the module contract.

pub fn companion_matrix(spec: &OperatorSpec, lambda: Complex64, t: f64) -> Array2<Complex64> {
    spec.companion_matrix(lambda, t)
}

pub fn perturbation_matrix(spec: &OperatorSpec, t: f64) -> Array2<Complex64> {
    spec.perturbation_matrix(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn companion_free_operator() {
        let spec = OperatorSpec::free(2);
        let a = spec.companion_matrix(c(4.0, 0.0), 0.0);
        assert_eq!(a[[0, 0]], c(0.0, 0.0));
        assert_eq!(a[[0, 1]], c(1.0, 0.0));
        assert_eq!(a[[1, 0]], c(4.0, 0.0));
        assert_eq!(a[[1, 1]], c(0.0, 0.0));
    }

    #[test]
    fn companion_cosine_coefficient() {
        // a_0(t) = 2 cos(2 pi t) = e^{2 pi i t} + e^{-2 pi i t}
        let spec = OperatorSpec::new(
            2,
            vec![
                vec![
                    FourierCoefficient::real(1, 1.0),
                    FourierCoefficient::real(-1, 1.0),
                ],
                Vec::new(),
            ],
            Vec::new(),
        )
        .unwrap();
        let a = spec.companion_matrix(c(0.0, 0.0), 0.0);
        assert_abs_diff_eq!(a[[1, 0]].re, -2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(a[[1, 0]].im, 0.0, epsilon = 1e-14);
        assert_eq!(a[[0, 1]], c(1.0, 0.0));
    }

    #[test]
    fn companion_third_order() {
        let spec = OperatorSpec::free(3);
        let a = spec.companion_matrix(c(0.0, 1.0), 0.5);
        assert_eq!(a[[0, 1]], c(1.0, 0.0));
        assert_eq!(a[[1, 2]], c(1.0, 0.0));
        assert_eq!(a[[2, 0]], c(0.0, 1.0));
        assert_eq!(a[[2, 1]], c(0.0, 0.0));
        assert_eq!(a[[2, 2]], c(0.0, 0.0));
        assert_eq!(a[[0, 0]], c(0.0, 0.0));
        assert_eq!(a[[1, 0]], c(0.0, 0.0));
    }

    #[test]
    fn perturbation_matrix_cases() {
        let spec = OperatorSpec::free(2);
        let b = spec.perturbation_matrix(0.7);
        assert!(b.iter().all(|z| z.norm() == 0.0));

        let spec = OperatorSpec::new(
            2,
            vec![Vec::new(), Vec::new()],
            vec![PerturbationTerm::new(
                0,
                PerturbationFamily::ExpDecay,
                c(-2.0, 0.0),
                1.0,
            )],
        )
        .unwrap();
        let b = spec.perturbation_matrix(0.0);
        assert_abs_diff_eq!(b[[1, 0]].re, -2.0, epsilon = 1e-15);
        assert_eq!(b[[1, 1]], c(0.0, 0.0));
        assert_eq!(b[[0, 0]], c(0.0, 0.0));

        let spec = OperatorSpec::new(
            2,
            vec![Vec::new(), Vec::new()],
            vec![PerturbationTerm::new(
                0,
                PerturbationFamily::SechSq,
                c(2.0, 0.0),
                1.0,
            )],
        )
        .unwrap();
        let b = spec.perturbation_matrix(0.0);
        assert_abs_diff_eq!(b[[1, 0]].re, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn normalize_hill_sign() {
        // -u'' + p(t) u with p = cos harmonic: c = -1 maps lambda_raw = -lambda.
        let raw = RawOperatorSpec {
            order: 2,
            leading_coeff: c(-1.0, 0.0),
            periodic_coeffs: vec![vec![FourierCoefficient::real(0, 3.0)], Vec::new()],
            perturbations: Vec::new(),
        };
        let spec = normalize(&raw).unwrap();
        assert_abs_diff_eq!(spec.coeff(0, 0.3).re, -3.0, epsilon = 1e-15);
        let map = spec.lambda_map();
        assert_eq!(map.to_raw(c(2.0, 0.0)), c(-2.0, 0.0));
        assert_eq!(map.to_normalized(c(-2.0, 0.0)), c(2.0, 0.0));
    }

    #[test]
    fn normalize_identity_and_scale() {
        let raw = RawOperatorSpec {
            order: 2,
            leading_coeff: c(1.0, 0.0),
            periodic_coeffs: vec![Vec::new(), Vec::new()],
            perturbations: Vec::new(),
        };
        let spec = normalize(&raw).unwrap();
        assert_eq!(spec.lambda_map().to_raw(c(5.0, 1.0)), c(5.0, 1.0));

        let raw = RawOperatorSpec {
            order: 2,
            leading_coeff: c(2.0, 0.0),
            periodic_coeffs: vec![vec![FourierCoefficient::real(0, 4.0)], Vec::new()],
            perturbations: Vec::new(),
        };
        let spec = normalize(&raw).unwrap();
        assert_abs_diff_eq!(spec.coeff(0, 0.0).re, 2.0, epsilon = 1e-15);
        assert_eq!(spec.lambda_map().to_raw(c(3.0, 0.0)), c(6.0, 0.0));
    }

    #[test]
    fn normalize_rejects_zero_leading() {
        let raw = RawOperatorSpec {
            order: 1,
            leading_coeff: c(0.0, 0.0),
            periodic_coeffs: vec![Vec::new()],
            perturbations: Vec::new(),
        };
        assert!(matches!(
            normalize(&raw),
            Err(SpectralError::NonconstantLeadingCoefficient(_))
        ));
    }

    #[test]
    fn json_round_trip_and_field_names() {
        let text = r#"{
            "order": 2,
            "leading_sign": -1,
            "periodic_coeffs": [[{"index": 1, "re": 1.0, "im": 0.0},
                                 {"index": -1, "re": 1.0, "im": 0.0}], []],
            "perturbations": [{"order": 0, "family": "sech_sq",
                               "amplitude": {"re": -2.0, "im": 0.0}, "rate": 1.0}]
        }"#;
        let spec = OperatorSpec::from_json(text).unwrap();
        assert_eq!(spec.order(), 2);
        assert_eq!(spec.perturbations().len(), 1);
        // Normalized by c = -1.
        assert_abs_diff_eq!(spec.perturbations()[0].amplitude.re, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(spec.tau().unwrap(), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn json_rejects_missing_and_unknown_fields() {
        let missing = r#"{"leading_sign": 1, "periodic_coeffs": []}"#;
        let err = RawOperatorSpec::from_json(missing).unwrap_err();
        assert!(err.to_string().contains("order"), "{err}");

        let unknown = r#"{"order": 1, "leading_sign": 1, "periodic_coeffs": [[]], "extra_knob": 3}"#;
        assert!(RawOperatorSpec::from_json(unknown).is_err());

        let bad_order = r#"{"order": 2, "leading_sign": 1, "periodic_coeffs": [[]],
                            "perturbations": [{"order": 2, "family": "exp_decay",
                                               "amplitude": {"re": 1.0, "im": 0.0}, "rate": 1.0}]}"#;
        assert!(RawOperatorSpec::from_json(bad_order).is_err());
    }

    #[test]
    fn periodicity_of_coefficients() {
        let spec = OperatorSpec::new(
            2,
            vec![
                vec![
                    FourierCoefficient::new(2, c(0.3, -0.1)),
                    FourierCoefficient::new(-1, c(0.0, 0.7)),
                ],
                vec![FourierCoefficient::real(1, 0.2)],
            ],
            Vec::new(),
        )
        .unwrap();
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let t = 100.0 * next() - 50.0;
            for k in 0..2 {
                let d = (spec.coeff(k, t + 1.0) - spec.coeff(k, t)).norm();
                assert!(d <= 1e-12 * (1.0 + spec.coeff(k, t).norm()), "d = {d}");
            }
        }
    }

    #[test]
    fn decay_certificates() {
        let terms = [
            PerturbationTerm::new(0, PerturbationFamily::ExpDecay, c(1.5, 0.5), 0.8),
            PerturbationTerm::new(0, PerturbationFamily::SechSq, c(-2.0, 0.0), 1.3),
            PerturbationTerm::new(1, PerturbationFamily::Gaussian, c(0.0, 1.0), 0.6),
            PerturbationTerm::new(0, PerturbationFamily::CompactBump, c(3.0, 0.0), 1.0),
        ];
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for term in &terms {
            let tau = term.tau_eff();
            let bound = term.decay_sup_bound();
            assert!(tau > 0.0);
            for _ in 0..100 {
                let t = 100.0 * next() - 50.0;
                let weighted = term.eval(t).norm() * (tau * t.abs()).exp();
                assert!(
                    weighted <= (1.0 + 1e-12) * bound,
                    "family {:?}: {weighted} > {bound} at t = {t}",
                    term.family
                );
            }
        }
    }

    #[test]
    fn tau_is_minimum_over_terms() {
        let spec = OperatorSpec::new(
            2,
            vec![Vec::new(), Vec::new()],
            vec![
                PerturbationTerm::new(0, PerturbationFamily::ExpDecay, c(1.0, 0.0), 3.0),
                PerturbationTerm::new(1, PerturbationFamily::SechSq, c(1.0, 0.0), 0.7),
            ],
        )
        .unwrap();
        assert_abs_diff_eq!(spec.tau().unwrap(), 1.4, epsilon = 1e-15);
        assert!(OperatorSpec::free(2).tau().is_none());
    }
}
