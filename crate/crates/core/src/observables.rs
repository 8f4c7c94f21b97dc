//! Closed-form magnetization and spin correlators of the matrix product ground
//! state, and their `N -> infinity` limits.
//!
//! All finite-`N` expressions are functions of `u = (1 - g)/(1 + g)` and are
//! invariant under `u -> 1/u` up to exchanging `G_y` and `G_z`. Evaluation is
//! done in terms of `w = u` or `w = 1/u`, whichever has `|w| <= 1`, so powers
//! `w^N` never overflow.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Sign;

pub fn u_param(g: f64) -> Result<f64> {
    if g == -1.0 {
        return Err(Error::SingularParameter("g = -1 makes u = (1-g)/(1+g) infinite".into()));
    }
    Ok((1.0 - g) / (1.0 + g))
}

/// `w` with `|w| <= 1`, and whether it is `1/u` rather than `u`.
fn reduced_ratio(g: f64) -> Result<(f64, bool)> {
    let u = u_param(g)?;
    if u.abs() <= 1.0 {
        Ok((u, false))
    } else {
        Ok(((1.0 + g) / (1.0 - g), true))
    }
}

/// `w^k` for `|w| <= 1`; large exponents go through the logarithm.
fn small_pow(w: f64, k: usize) -> f64 {
    if k <= i32::MAX as usize {
        return w.powi(k as i32);
    }
    if w == 0.0 {
        return 0.0;
    }
    let sign = if w < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
    sign * (k as f64 * w.abs().ln()).exp()
}

fn denominator(w: f64, n: usize) -> Result<f64> {
    let d = 1.0 + small_pow(w, n);
    if d.abs() < 1e-300 {
        return Err(Error::SingularParameter(format!("1 + u^N vanishes (u = {w}, N = {n})")));
    }
    Ok(d)
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("ring size must be >= 3, got {n}")));
    }
    Ok(())
}

/// `<sigma_x> = eps u (1 + u^{N-2}) / (1 + u^N)`.
pub fn magnetization_x(eps: Sign, g: f64, n: usize) -> Result<f64> {
    check_n(n)?;
    let (w, _) = reduced_ratio(g)?;
    let d = denominator(w, n)?;
    Ok(eps.value() * w * (1.0 + small_pow(w, n - 2)) / d)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Correlators {
    pub gx: f64,
    pub gy: f64,
    pub gz: f64,
}

impl Correlators {
    pub fn sum(&self) -> f64 {
        self.gx + self.gy + self.gz
    }
}

/// `G_a(1, r)` for `eta = +1`; independent of the separation `r`.
pub fn correlations(g: f64, n: usize) -> Result<Correlators> {
    check_n(n)?;
    let (w, swapped) = reduced_ratio(g)?;
    let d = denominator(w, n)?;
    let w2 = w * w;
    let tail = small_pow(w, n - 2);
    let gx = (w2 + tail) / d;
    let a = tail * (w2 - 1.0) / d;
    let b = (1.0 - w2) / d;
    let (gy, gz) = if swapped { (b, a) } else { (a, b) };
    Ok(Correlators { gx, gy, gz })
}

/// `G_a(1, r)` for either `eta`. For `eta = -1` the alternating pair rotation
/// maps `G_y <-> G_z` with sign `(-1)^{r+1}`; it needs an even ring.
pub fn correlations_at(eta: Sign, g: f64, n: usize, r: usize) -> Result<Correlators> {
    if r < 2 || r > n {
        return Err(Error::InvalidParameter(format!("second site {r} outside 2..={n}")));
    }
    if eta == Sign::Minus && n % 2 == 1 {
        return Err(Error::OddRing(n));
    }
    let base = correlations(g, n)?;
    Ok(match eta {
        Sign::Plus => base,
        Sign::Minus => {
            let s = if r % 2 == 0 { -1.0 } else { 1.0 };
            Correlators { gx: base.gx, gy: s * base.gz, gz: s * base.gy }
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ObservableRecord {
    pub g: f64,
    pub n: usize,
    pub u: f64,
    pub mx: f64,
    pub gx: f64,
    pub gy: f64,
    pub gz: f64,
}

pub fn observable_record(eps: Sign, g: f64, n: usize) -> Result<ObservableRecord> {
    let u = u_param(g)?;
    let mx = magnetization_x(eps, g, n)?;
    let Correlators { gx, gy, gz } = correlations(g, n)?;
    Ok(ObservableRecord { g, n, u, mx, gx, gy, gz })
}

fn require_off_crossing(g: f64) -> Result<()> {
    if g == 0.0 {
        return Err(Error::SingularParameter(
            "g = 0 is the level crossing of the transfer matrix; use zero_crossing_report".into(),
        ));
    }
    Ok(())
}

/// `N -> infinity` limit of [`magnetization_x`]: `eps (1 - |g|) / (1 + |g|)`.
pub fn thermodynamic_magnetization(eps: Sign, g: f64) -> Result<f64> {
    require_off_crossing(g)?;
    let (w, _) = reduced_ratio(g)?;
    Ok(eps.value() * w)
}

/// The reciprocal expression `eps (1 + |g|) / (1 - |g|)`, kept only so reports
/// can show it next to the actual limit.
pub fn inverted_limit_expression(eps: Sign, g: f64) -> f64 {
    eps.value() * (1.0 + g.abs()) / (1.0 - g.abs())
}

/// `N -> infinity` limits of [`correlations`]:
/// `(u^2, 0, 1 - u^2)` for `|u| < 1` and `(u^-2, 1 - u^-2, 0)` for `|u| > 1`.
pub fn thermodynamic_correlations(g: f64) -> Result<Correlators> {
    require_off_crossing(g)?;
    let (w, swapped) = reduced_ratio(g)?;
    let w2 = w * w;
    Ok(if swapped {
        Correlators { gx: w2, gy: 1.0 - w2, gz: 0.0 }
    } else {
        Correlators { gx: w2, gy: 0.0, gz: 1.0 - w2 }
    })
}

/// One-sided behaviour of the infinite-ring observables at `g = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZeroCrossingReport {
    pub mx_left: f64,
    pub mx_right: f64,
    pub slope_left: f64,
    pub slope_right: f64,
    pub corr_left: Correlators,
    pub corr_right: Correlators,
    /// Leading transfer eigenvalues `2(1+g)` and `2(1-g)` cross here.
    pub crossing_gap_left: f64,
    pub crossing_gap_right: f64,
}

pub fn zero_crossing_report(eps: Sign) -> ZeroCrossingReport {
    let e = eps.value();
    // At u -> 1 both branches give (1, 0, 0); they differ in which of G_y,
    // G_z picks up the linear term, and the magnetization slope flips sign.
    ZeroCrossingReport {
        mx_left: e,
        mx_right: e,
        slope_left: 2.0 * e,
        slope_right: -2.0 * e,
        corr_left: Correlators { gx: 1.0, gy: 0.0, gz: 0.0 },
        corr_right: Correlators { gx: 1.0, gy: 0.0, gz: 0.0 },
        crossing_gap_left: -1.0,
        crossing_gap_right: 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn u_examples() {
        assert_eq!(u_param(0.0).unwrap(), 1.0);
        assert!(close(u_param(1.0 / 3.0).unwrap(), 0.5, 1e-15));
        assert!(close(u_param(3.0).unwrap(), -0.5, 1e-15));
        assert!(matches!(u_param(-1.0), Err(Error::SingularParameter(_))));
    }

    #[test]
    fn magnetization_examples() {
        assert!(close(magnetization_x(Sign::Plus, 0.0, 8).unwrap(), 1.0, 1e-15));
        assert!(close(magnetization_x(Sign::Plus, 1.0 / 3.0, 4).unwrap(), 10.0 / 17.0, 1e-15));
        assert!(close(magnetization_x(Sign::Minus, 1.0 / 3.0, 4).unwrap(), -10.0 / 17.0, 1e-15));
        assert!(magnetization_x(Sign::Plus, -1.0, 4).is_err());
    }

    #[test]
    fn correlation_examples() {
        let k = correlations(1.0 / 3.0, 4).unwrap();
        assert!(close(k.gx, 8.0 / 17.0, 1e-15));
        assert!(close(k.gy, -3.0 / 17.0, 1e-15));
        assert!(close(k.gz, 12.0 / 17.0, 1e-15));
        for n in [3, 4, 7, 20] {
            let k = correlations(1.0, n).unwrap();
            assert_eq!((k.gx, k.gy, k.gz), (0.0, 0.0, 1.0));
            let k = correlations(0.0, n).unwrap();
            assert_eq!((k.gx, k.gy, k.gz), (1.0, 0.0, 0.0));
        }
    }

    #[test]
    fn huge_rings_do_not_overflow() {
        for &g in &[-3.0, -0.5, -0.01, 0.01, 0.5, 3.0] {
            let m = magnetization_x(Sign::Plus, g, 1_000_000).unwrap();
            assert!(close(m, thermodynamic_magnetization(Sign::Plus, g).unwrap(), 1e-12));
            let k = correlations(g, 1_000_000).unwrap();
            assert!(close(k.sum(), 1.0, 1e-12));
        }
    }

    #[test]
    fn thermodynamic_examples() {
        assert!(close(thermodynamic_magnetization(Sign::Plus, 0.5).unwrap(), 1.0 / 3.0, 1e-15));
        assert!(close(thermodynamic_magnetization(Sign::Plus, -0.5).unwrap(), 1.0 / 3.0, 1e-15));
        assert!(close(thermodynamic_magnetization(Sign::Plus, 1e-9).unwrap(), 1.0, 1e-8));
        assert!(thermodynamic_magnetization(Sign::Plus, 0.0).is_err());

        let k = thermodynamic_correlations(0.5).unwrap();
        assert!(close(k.gx, 1.0 / 9.0, 1e-15) && k.gy == 0.0 && close(k.gz, 8.0 / 9.0, 1e-15));
        let k = thermodynamic_correlations(-0.5).unwrap();
        assert!(close(k.gx, 1.0 / 9.0, 1e-15) && close(k.gy, 8.0 / 9.0, 1e-15) && k.gz == 0.0);
        assert!(thermodynamic_correlations(0.0).is_err());
        assert!(close(inverted_limit_expression(Sign::Plus, 0.5), 3.0, 1e-15));
    }

    #[test]
    fn finite_ring_converges_geometrically() {
        for &g in &[-1.7, -0.5, 0.3, 0.7, 2.0] {
            let limit = thermodynamic_magnetization(Sign::Plus, g).unwrap();
            let errs: Vec<f64> = [8, 16, 32, 64]
                .iter()
                .map(|&n| (magnetization_x(Sign::Plus, g, n).unwrap() - limit).abs())
                .collect();
            assert!(errs.windows(2).all(|w| w[1] < w[0] || w[1] == 0.0), "g={g}: {errs:?}");
        }
    }

    #[test]
    fn eta_minus_map_signs() {
        let base = correlations(0.3, 6).unwrap();
        let nn = correlations_at(Sign::Minus, 0.3, 6, 2).unwrap();
        assert_eq!((nn.gy, nn.gz), (-base.gz, -base.gy));
        let nnn = correlations_at(Sign::Minus, 0.3, 6, 3).unwrap();
        assert_eq!((nnn.gy, nnn.gz), (base.gz, base.gy));
        assert!(matches!(correlations_at(Sign::Minus, 0.3, 5, 2), Err(Error::OddRing(5))));
    }
}
