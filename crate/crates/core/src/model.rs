//! Model parameters, the coupling surface, and the fixed-gauge MPS tensors.
//!
//! The family is labelled by two discrete signs `(epsilon, eta)` and two
//! continuous parameters `g` and `J >= 0`. On this surface the XYZ ring with a
//! transverse field along `x` has a bond-dimension-2 matrix product ground
//! state built from
//!
//! ```text
//! A0 = [[1, g], [1, eta]]      A1 = epsilon * [[1, -g], [-1, eta]]
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, max_abs, sigma_z, Mat2, C64, ONE, ZERO};

/// A discrete `+1` / `-1` label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_value(v: i64) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::InvalidParameter(format!("sign must be +1 or -1, got {v}"))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Sign> {
        match s.trim() {
            "+1" | "1" | "+" => Ok(Sign::Plus),
            "-1" | "-" => Ok(Sign::Minus),
            other => Err(Error::InvalidParameter(format!(
                "sign must be +1 or -1, got {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub epsilon: Sign,
    pub eta: Sign,
    pub g: f64,
    pub j: f64,
    pub n: usize,
}

impl ModelParams {
    pub fn new(epsilon: Sign, eta: Sign, g: f64, j: f64, n: usize) -> Result<Self> {
        if !g.is_finite() {
            return Err(Error::InvalidParameter(format!("g must be finite, got {g}")));
        }
        if !(j >= 0.0) || !j.is_finite() {
            return Err(Error::InvalidParameter(format!("J must be finite and >= 0, got {j}")));
        }
        if n < 3 {
            return Err(Error::InvalidParameter(format!("ring size must be >= 3, got {n}")));
        }
        Ok(Self { epsilon, eta, g, j, n })
    }

    /// The explicit ground-state construction for `eta = -1` pairs up sites.
    pub fn require_even_for_eta_minus(&self) -> Result<()> {
        if self.eta == Sign::Minus && self.n % 2 == 1 {
            return Err(Error::OddRing(self.n));
        }
        Ok(())
    }

    pub fn with_g(self, g: f64) -> Self {
        Self { g, ..self }
    }

    pub fn with_n(self, n: usize) -> Self {
        Self { n, ..self }
    }

    /// Constant removed when going from the projector form of the local term to
    /// the Pauli form: `c0 = J + (1 + g^2) / 2`.
    pub fn bond_offset(&self) -> f64 {
        self.j + (1.0 + self.g * self.g) / 2.0
    }

    /// Ground energy of the Pauli-form ring Hamiltonian, `-N * c0`.
    pub fn ground_energy(&self) -> f64 {
        -(self.n as f64) * self.bond_offset()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Couplings {
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    /// Field along `x`, per site.
    pub b: f64,
}

pub fn couplings_from_params(p: &ModelParams) -> Couplings {
    let (g, j) = (p.g, p.j);
    let eta = p.eta.value();
    Couplings {
        jx: -j + (1.0 + g * g) / 2.0,
        jy: -eta * j + g,
        jz: -eta * j - g,
        b: p.epsilon.value() * (g * g - 1.0),
    }
}

/// The pre-gauge-fixed entries of `A0 = [[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneralForm {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MpsTensors {
    pub a0: Mat2,
    pub a1: Mat2,
    pub general_form: Option<GeneralForm>,
}

impl MpsTensors {
    pub fn new(a0: Mat2, a1: Mat2) -> Self {
        Self { a0, a1, general_form: None }
    }

    /// Spin-flip-symmetric pair `A0 = [[a,b],[c,d]]`, `A1 = epsilon [[a,-b],[-c,d]]`.
    pub fn from_general(form: GeneralForm, epsilon: Sign) -> Self {
        let GeneralForm { a, b, c: cc, d } = form;
        let e = c(epsilon.value());
        Self {
            a0: Mat2::new(a, b, cc, d),
            a1: Mat2::new(a, -b, -cc, d) * e,
            general_form: Some(form),
        }
    }

    pub fn site(&self, bit: u8) -> &Mat2 {
        if bit == 0 {
            &self.a0
        } else {
            &self.a1
        }
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.a0.iter().chain(self.a1.iter()).all(|z| z.im.abs() <= tol)
    }
}

pub fn mps_matrices(p: &ModelParams) -> MpsTensors {
    let (g, eta) = (c(p.g), c(p.eta.value()));
    MpsTensors::from_general(GeneralForm { a: ONE, b: g, c: ONE, d: eta }, p.epsilon)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Check {
    Pass,
    Fail,
    NotApplicable,
}

impl Check {
    fn from_bool(ok: bool) -> Check {
        if ok {
            Check::Pass
        } else {
            Check::Fail
        }
    }

    pub fn passed_or_na(self) -> bool {
        self != Check::Fail
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    pub spin_flip: Check,
    pub parity: Check,
    pub time_reversal: Check,
}

const SYMMETRY_TOL: f64 = 1e-12;

/// Checks the conjugation symmetries of a tensor pair:
///
/// * spin flip: `X A0 X^-1 = eps A1`, `X A1 X^-1 = eps A0` with `X = sigma_z`;
/// * parity: `Pi A_i^T Pi^-1 = A_i` with `Pi = diag(b, c)` read off `A0`
///   (not applicable when `Pi` is singular);
/// * time reversal: real entries, so `V = 1` works (not applicable otherwise).
pub fn check_symmetries(t: &MpsTensors, epsilon: Sign) -> SymmetryReport {
    let x = sigma_z();
    let e = c(epsilon.value());
    let flip_ok = max_abs(&(x * t.a0 * x - t.a1 * e)) <= SYMMETRY_TOL
        && max_abs(&(x * t.a1 * x - t.a0 * e)) <= SYMMETRY_TOL;

    let (pb, pc) = (t.a0[(0, 1)], t.a0[(1, 0)]);
    let parity = if pb.norm() <= SYMMETRY_TOL || pc.norm() <= SYMMETRY_TOL {
        Check::NotApplicable
    } else {
        let pi = Mat2::new(pb, ZERO, ZERO, pc);
        let pi_inv = Mat2::new(ONE / pb, ZERO, ZERO, ONE / pc);
        let ok = [t.a0, t.a1]
            .iter()
            .all(|a| max_abs(&(pi * a.transpose() * pi_inv - a)) <= SYMMETRY_TOL);
        Check::from_bool(ok)
    };

    let time_reversal = if t.is_real(SYMMETRY_TOL) {
        Check::Pass
    } else {
        Check::NotApplicable
    };

    SymmetryReport { spin_flip: Check::from_bool(flip_ok), parity, time_reversal }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(eps: Sign, eta: Sign, g: f64, j: f64) -> ModelParams {
        ModelParams::new(eps, eta, g, j, 4).unwrap()
    }

    #[test]
    fn coupling_surface_examples() {
        let k = couplings_from_params(&params(Sign::Plus, Sign::Plus, 1.0, 0.0));
        assert_eq!((k.jx, k.jy, k.jz, k.b), (1.0, 1.0, -1.0, 0.0));
        let k = couplings_from_params(&params(Sign::Plus, Sign::Plus, 0.0, 0.0));
        assert_eq!((k.jx, k.jy, k.jz, k.b), (0.5, 0.0, 0.0, -1.0));
        let k = couplings_from_params(&params(Sign::Minus, Sign::Minus, 2.0, 1.0));
        assert_eq!((k.jx, k.jy, k.jz, k.b), (1.5, 3.0, -1.0, -3.0));
    }

    #[test]
    fn model_matrices_examples() {
        let t = mps_matrices(&params(Sign::Plus, Sign::Plus, 1.0, 0.0));
        assert_eq!(t.a0, Mat2::new(ONE, ONE, ONE, ONE));
        assert_eq!(t.a1, Mat2::new(ONE, -ONE, -ONE, ONE));
        let t = mps_matrices(&params(Sign::Plus, Sign::Minus, 0.0, 0.0));
        assert_eq!(t.a0, Mat2::new(ONE, ZERO, ONE, -ONE));
        assert_eq!(t.a1, Mat2::new(ONE, ZERO, -ONE, -ONE));
        assert!(t.is_real(0.0));
    }

    #[test]
    fn symmetry_report_cases() {
        for eps in Sign::BOTH {
            for eta in Sign::BOTH {
                let t = mps_matrices(&params(eps, eta, 0.7, 1.0));
                let r = check_symmetries(&t, eps);
                assert_eq!(r.spin_flip, Check::Pass);
                assert_eq!(r.parity, Check::Pass);
                assert_eq!(r.time_reversal, Check::Pass);

                let r0 = check_symmetries(&mps_matrices(&params(eps, eta, 0.0, 1.0)), eps);
                assert_eq!(r0.spin_flip, Check::Pass);
                assert_eq!(r0.parity, Check::NotApplicable);
            }
        }
        let form = GeneralForm { a: c(1.0), b: ZERO, c: c(2.0), d: c(0.5) };
        let r = check_symmetries(&MpsTensors::from_general(form, Sign::Plus), Sign::Plus);
        assert_eq!(r.parity, Check::NotApplicable);
    }

    #[test]
    fn wrong_epsilon_fails_spin_flip() {
        let t = mps_matrices(&params(Sign::Plus, Sign::Plus, 0.3, 1.0));
        assert_eq!(check_symmetries(&t, Sign::Minus).spin_flip, Check::Fail);
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(Sign::Plus, Sign::Plus, 0.5, -0.1, 4).is_err());
        assert!(ModelParams::new(Sign::Plus, Sign::Plus, 0.5, 1.0, 2).is_err());
        let odd = ModelParams::new(Sign::Plus, Sign::Minus, 0.5, 1.0, 5).unwrap();
        assert_eq!(odd.require_even_for_eta_minus(), Err(Error::OddRing(5)));
        assert!("+1".parse::<Sign>().is_ok() && "-1".parse::<Sign>().is_ok());
        assert!("2".parse::<Sign>().is_err());
    }

    #[test]
    fn sums_of_couplings_eliminate_g() {
        for &g in &[-2.0, -0.3, 0.0, 0.8, 3.1] {
            for eta in Sign::BOTH {
                let p = params(Sign::Plus, eta, g, 0.75);
                let k = couplings_from_params(&p);
                assert_eq!(k.jy + k.jz, -2.0 * eta.value() * 0.75);
                assert!((k.jy - k.jz - 2.0 * g).abs() < 1e-15);
            }
        }
    }
}
