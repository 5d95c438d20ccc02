//! Binary entropy, label-channel mutual information and the critical
//! disturbance `η*` at which authorized and eavesdropper information cross.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::scalar::Scalar;

/// Published crossing point of the memoryless attack; no information curve
/// accompanies it.
pub const MEMORYLESS_ETA_STAR: f64 = 0.154;

/// Eavesdropping attack family whose information curve sets `η*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackFamily {
    Collective,
    Individual,
    Memoryless,
}

impl AttackFamily {
    pub const ALL: [AttackFamily; 3] = [Self::Collective, Self::Individual, Self::Memoryless];

    pub fn name(self) -> &'static str {
        match self {
            Self::Collective => "collective",
            Self::Individual => "individual",
            Self::Memoryless => "memoryless",
        }
    }
}

impl std::fmt::Display for AttackFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for AttackFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "collective" => Ok(Self::Collective),
            "individual" => Ok(Self::Individual),
            "memoryless" => Ok(Self::Memoryless),
            other => Err(domain(format!("unknown attack family {other:?}"))),
        }
    }
}

/// Critical disturbance of one attack family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfoCurve<T> {
    pub strategy_kind: AttackFamily,
    pub eta_star: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolevoGap<T> {
    pub eta: T,
    /// `I_authorized − I_eve`; the authorized learner keeps the advantage while non-negative.
    pub gap: T,
}

impl<T: Scalar> HolevoGap<T> {
    pub fn holevo_condition_met(&self) -> bool {
        self.gap >= T::zero()
    }
}

/// How an `η*` value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMethod {
    Solved,
    ClosedForm,
    Constant,
}

impl ThresholdMethod {
    pub fn label(self) -> &'static str {
        match self {
            Self::Solved => "solved",
            Self::ClosedForm => "closed-form",
            Self::Constant => "constant (no curve)",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport<T> {
    pub family: AttackFamily,
    pub eta_star: T,
    pub method: ThresholdMethod,
    /// `|holevo_gap(η*)|`, absent for the memoryless constant.
    pub residual: Option<T>,
    /// Independent bisection root for families that also have a closed form.
    pub solved_root: Option<T>,
}

/// Bracketing tolerance used for `η*`.
pub const ROOT_TOLERANCE: f64 = 1e-10;

/// Bisection for a continuous `f` with a sign change on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `tol` or cannot be split further.
pub fn bisect<T: Scalar>(mut f: impl FnMut(T) -> T, mut lo: T, mut hi: T, tol: T) -> Result<T> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == T::zero() {
        return Ok(lo);
    }
    if f_hi == T::zero() {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Inversion(format!(
            "no sign change on [{lo}, {hi}]: f = {f_lo}, {f_hi}"
        )));
    }
    let half = T::lit(0.5);
    for _ in 0..400 {
        let mid = lo + (hi - lo) * half;
        if hi - lo <= tol || mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == T::zero() {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo + (hi - lo) * half)
}

/// `h(x) = −x log₂x − (1−x) log₂(1−x)`, with `h(0) = h(1) = 0`.
pub fn binary_entropy<T: Scalar>(x: T) -> Result<T> {
    if !(x >= T::zero() && x <= T::one()) {
        return Err(domain(format!(
            "binary entropy argument must lie in [0, 1], got {x}"
        )));
    }
    let term = |p: T| {
        if p > T::zero() {
            -p * p.log2()
        } else {
            T::zero()
        }
    };
    Ok(term(x) + term(T::one() - x))
}

/// Inverse of `h` restricted to `[0, 1/2]`.
pub fn inverse_binary_entropy<T: Scalar>(y: T) -> Result<T> {
    if !(y >= T::zero() && y <= T::one()) {
        return Err(Error::Inversion(format!(
            "entropy value {y} outside [0, 1]"
        )));
    }
    let half = T::lit(0.5);
    if y == T::zero() {
        return Ok(T::zero());
    }
    if y == T::one() {
        return Ok(half);
    }
    bisect(|x| h_unchecked(x) - y, T::zero(), half, T::zero())
}

fn h_unchecked<T: Scalar>(x: T) -> T {
    binary_entropy(x.max(T::zero()).min(T::one())).unwrap_or(T::zero())
}

fn check_half_interval<T: Scalar>(eta: T) -> Result<()> {
    if eta >= T::zero() && eta <= T::lit(0.5) {
        Ok(())
    } else {
        Err(domain(format!("eta must lie in [0, 1/2], got {eta}")))
    }
}

/// Capacity of the authorized learner's label channel, `1 − h(η)`.
pub fn mutual_info_authorized<T: Scalar>(eta: T) -> Result<T> {
    check_half_interval(eta)?;
    Ok(T::one() - binary_entropy(eta)?)
}

/// Information the eavesdropper gains at disturbance `η`.
///
/// Collective: `h(η)`. Individual: `1 − h(1/2 + √(η(1−η)))`.
pub fn mutual_info_eve<T: Scalar>(kind: AttackFamily, eta: T) -> Result<T> {
    check_half_interval(eta)?;
    match kind {
        AttackFamily::Collective => binary_entropy(eta),
        AttackFamily::Individual => {
            let q = (T::lit(0.5) + (eta * (T::one() - eta)).sqrt()).min(T::one());
            Ok(T::one() - binary_entropy(q)?)
        }
        AttackFamily::Memoryless => Err(Error::NoClosedForm(
            "the memoryless attack carries only its published eta* = 0.154".into(),
        )),
    }
}

pub fn holevo_gap<T: Scalar>(kind: AttackFamily, eta: T) -> Result<HolevoGap<T>> {
    let eve = mutual_info_eve(kind, eta)?;
    Ok(HolevoGap {
        eta,
        gap: mutual_info_authorized(eta)? - eve,
    })
}

/// Root of the Holevo gap on `(1e−9, 1/2 − 1e−9)` by bisection.
pub fn solve_eta_star<T: Scalar>(kind: AttackFamily) -> Result<T> {
    // surface NoClosedForm before bracketing
    mutual_info_eve(kind, T::zero())?;
    let margin = T::lit(1e-9);
    bisect(
        |eta| {
            holevo_gap(kind, eta)
                .map(|g| g.gap)
                .unwrap_or_else(|_| T::nan())
        },
        margin,
        T::lit(0.5) - margin,
        T::lit(ROOT_TOLERANCE),
    )
}

/// Closed form `(1 − 1/√2)/2` of the individual-attack crossing.
pub fn individual_eta_star_closed_form<T: Scalar>() -> T {
    (T::one() - T::FRAC_1_SQRT_2()) / T::lit(2.0)
}

/// Critical disturbance of an attack family.
pub fn eta_star<T: Scalar>(kind: AttackFamily) -> T {
    match kind {
        AttackFamily::Collective => {
            solve_eta_star(kind).expect("collective gap changes sign on (0, 1/2)")
        }
        AttackFamily::Individual => individual_eta_star_closed_form(),
        AttackFamily::Memoryless => T::lit(MEMORYLESS_ETA_STAR),
    }
}

pub fn info_curve<T: Scalar>(kind: AttackFamily) -> InfoCurve<T> {
    InfoCurve {
        strategy_kind: kind,
        eta_star: eta_star(kind),
    }
}

/// `η*` together with how it was obtained and its residual.
pub fn threshold_report<T: Scalar>(kind: AttackFamily) -> Result<ThresholdReport<T>> {
    match kind {
        AttackFamily::Collective => {
            let root = solve_eta_star::<T>(kind)?;
            Ok(ThresholdReport {
                family: kind,
                eta_star: root,
                method: ThresholdMethod::Solved,
                residual: Some(holevo_gap(kind, root)?.gap.abs()),
                solved_root: Some(root),
            })
        }
        AttackFamily::Individual => {
            let closed = individual_eta_star_closed_form::<T>();
            Ok(ThresholdReport {
                family: kind,
                eta_star: closed,
                method: ThresholdMethod::ClosedForm,
                residual: Some(holevo_gap(kind, closed)?.gap.abs()),
                solved_root: Some(solve_eta_star(kind)?),
            })
        }
        AttackFamily::Memoryless => Ok(ThresholdReport {
            family: kind,
            eta_star: T::lit(MEMORYLESS_ETA_STAR),
            method: ThresholdMethod::Constant,
            residual: None,
            solved_root: None,
        }),
    }
}

/// Label noise seen by the eavesdropper when the authorized disturbance is
/// `eta_a`: the rate of a binary symmetric channel whose capacity equals the
/// eavesdropper's information, `η_E = h⁻¹(1 − I_eve(η_A))` on `[0, 1/2]`.
pub fn eve_noise_from_disturbance<T: Scalar>(kind: AttackFamily, eta_a: T) -> Result<T> {
    let info = mutual_info_eve(kind, eta_a)?;
    let target = T::one() - info;
    if !(target >= T::zero() && target <= T::one()) {
        return Err(Error::Inversion(format!(
            "1 - I_eve = {target} outside [0, 1] at eta_A = {eta_a}"
        )));
    }
    inverse_binary_entropy(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_relative_eq!(
            binary_entropy(0.11).unwrap(),
            0.499_915_958_164_528,
            max_relative = 1e-13
        );
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.1).is_err());
    }

    #[test]
    fn authorized_information() {
        assert_eq!(mutual_info_authorized(0.0).unwrap(), 1.0);
        assert_eq!(mutual_info_authorized(0.5).unwrap(), 0.0);
        assert!((mutual_info_authorized(0.05_f64).unwrap() - 0.7136).abs() < 5e-5);
        assert!(mutual_info_authorized(0.6).is_err());
    }

    #[test]
    fn eavesdropper_information() {
        assert!(
            (mutual_info_eve(AttackFamily::Collective, 0.05_f64).unwrap() - 0.2864).abs() < 5e-5
        );
        assert_eq!(mutual_info_eve(AttackFamily::Individual, 0.0).unwrap(), 0.0);
        assert_eq!(mutual_info_eve(AttackFamily::Collective, 0.0).unwrap(), 0.0);
        let cross = inverse_binary_entropy(0.5).unwrap();
        assert_relative_eq!(
            mutual_info_eve(AttackFamily::Collective, cross).unwrap(),
            0.5,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            mutual_info_authorized(cross).unwrap(),
            0.5,
            max_relative = 1e-12
        );
        assert!(matches!(
            mutual_info_eve(AttackFamily::Memoryless, 0.1),
            Err(Error::NoClosedForm(_))
        ));
    }

    #[test]
    fn eta_star_values() {
        let c: f64 = eta_star(AttackFamily::Collective);
        assert!((c - 0.110).abs() < 5e-4);
        assert!((binary_entropy(c).unwrap() - 0.5).abs() < 1e-9);
        let i: f64 = eta_star(AttackFamily::Individual);
        assert!((i - 0.1464).abs() < 5e-4);
        let solved: f64 = solve_eta_star(AttackFamily::Individual).unwrap();
        assert!((solved - i).abs() < 1e-9);
        assert_eq!(eta_star::<f64>(AttackFamily::Memoryless), 0.154);
        assert!(solve_eta_star::<f64>(AttackFamily::Memoryless).is_err());
    }

    #[test]
    fn gap_values() {
        assert_eq!(holevo_gap(AttackFamily::Collective, 0.0).unwrap().gap, 1.0);
        let g = holevo_gap(AttackFamily::Collective, 0.05_f64).unwrap();
        assert!((g.gap - 0.4272).abs() < 5e-5);
        assert!(g.holevo_condition_met());
        let at_root = holevo_gap(
            AttackFamily::Collective,
            eta_star::<f64>(AttackFamily::Collective),
        )
        .unwrap();
        assert!(at_root.gap.abs() < 1e-6);
        assert!(!holevo_gap(AttackFamily::Collective, 0.2)
            .unwrap()
            .holevo_condition_met());
    }

    #[test]
    fn eve_noise_mapping() {
        let star: f64 = eta_star(AttackFamily::Collective);
        let at_star = eve_noise_from_disturbance(AttackFamily::Collective, star).unwrap();
        assert!((at_star - star).abs() < 1e-8);
        assert_eq!(
            eve_noise_from_disturbance(AttackFamily::Collective, 0.0).unwrap(),
            0.5
        );
        let e = eve_noise_from_disturbance(AttackFamily::Collective, 0.05).unwrap();
        assert_relative_eq!(e, 0.195_876_011_858_272, max_relative = 1e-10);
        assert!(eve_noise_from_disturbance(AttackFamily::Memoryless, 0.05).is_err());
    }

    #[test]
    fn individual_mapping_has_closed_form() {
        for i in 0..=50 {
            let eta = 0.01 * i as f64;
            let mapped = eve_noise_from_disturbance(AttackFamily::Individual, eta).unwrap();
            let expect = 0.5 - (eta * (1.0 - eta)).sqrt();
            assert!(
                (mapped - expect.max(0.0)).abs() < 1e-9,
                "eta {eta}: {mapped} vs {expect}"
            );
        }
    }

    #[test]
    fn reports_carry_methods() {
        let c = threshold_report::<f64>(AttackFamily::Collective).unwrap();
        assert_eq!(c.method, ThresholdMethod::Solved);
        assert!(c.residual.unwrap() < 1e-9);
        let i = threshold_report::<f64>(AttackFamily::Individual).unwrap();
        assert_eq!(i.method, ThresholdMethod::ClosedForm);
        let m = threshold_report::<f64>(AttackFamily::Memoryless).unwrap();
        assert_eq!(m.method.label(), "constant (no curve)");
        assert_eq!(m.eta_star, 0.154);
    }

    #[test]
    fn bisect_requires_bracket() {
        assert!(bisect(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
        let r = bisect(|x: f64| x * x - 2.0, 0.0, 2.0, 0.0).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn single_precision_thresholds() {
        let c: f32 = eta_star(AttackFamily::Collective);
        assert!((c - 0.110).abs() < 5e-4);
    }
}
