//! Exact single-qubit state algebra on 2×2 density matrices.
//!
//! Global phases cannot be represented, so `X|−⟩ = −|−⟩` and `|−⟩` are the
//! same state here.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Tolerance used when checking density-matrix invariants.
pub const STATE_TOLERANCE: f64 = 1e-12;

/// The four preparations of the protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PreparationLabel {
    Z0,
    Z1,
    Xplus,
    Xminus,
}

impl PreparationLabel {
    pub const ALL: [PreparationLabel; 4] = [Self::Z0, Self::Z1, Self::Xplus, Self::Xminus];

    /// Data preparations are `|0⟩`, `|1⟩`; check preparations are `|±⟩`.
    pub fn is_check(self) -> bool {
        matches!(self, Self::Xplus | Self::Xminus)
    }

    pub fn basis(self) -> Basis {
        if self.is_check() {
            Basis::X
        } else {
            Basis::Z
        }
    }

    /// Outcome bit this preparation yields when measured in its own basis
    /// (`0` for `|0⟩`/`|+⟩`, `1` for `|1⟩`/`|−⟩`).
    pub fn bit(self) -> u8 {
        match self {
            Self::Z0 | Self::Xplus => 0,
            Self::Z1 | Self::Xminus => 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i % 4]
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Self::Z0 => "0",
            Self::Z1 => "1",
            Self::Xplus => "+",
            Self::Xminus => "-",
        }
    }
}

/// Projective measurement basis. Outcome `0` is `|0⟩` (Z) or `|+⟩` (X).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
}

impl Basis {
    pub fn eigenstate<T: Scalar>(self, bit: u8) -> PureState<T> {
        let label = match (self, bit) {
            (Basis::Z, 0) => PreparationLabel::Z0,
            (Basis::Z, _) => PreparationLabel::Z1,
            (Basis::X, 0) => PreparationLabel::Xplus,
            (Basis::X, _) => PreparationLabel::Xminus,
        };
        PureState::of(label)
    }
}

/// Normalized state vector, used as a fidelity reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState<T> {
    amplitudes: [Complex<T>; 2],
}

impl<T: Scalar> PureState<T> {
    pub fn new(a0: Complex<T>, a1: Complex<T>) -> Result<Self> {
        let norm = a0.norm_sqr() + a1.norm_sqr();
        if (norm - T::one()).abs() > T::lit(STATE_TOLERANCE).max(T::epsilon() * T::lit(8.0)) {
            return Err(Error::InvalidState(format!(
                "reference state is not normalized (squared norm {norm})"
            )));
        }
        Ok(Self {
            amplitudes: [a0, a1],
        })
    }

    pub fn of(label: PreparationLabel) -> Self {
        let o = Complex::new(T::one(), T::zero());
        let z = Complex::new(T::zero(), T::zero());
        let s = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
        let amplitudes = match label {
            PreparationLabel::Z0 => [o, z],
            PreparationLabel::Z1 => [z, o],
            PreparationLabel::Xplus => [s, s],
            PreparationLabel::Xminus => [s, -s],
        };
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> [Complex<T>; 2] {
        self.amplitudes
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> QubitState<T> {
        let a = self.amplitudes;
        let mut rho = [[Complex::new(T::zero(), T::zero()); 2]; 2];
        for (i, row) in rho.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = a[i] * a[j].conj();
            }
        }
        QubitState { rho }
    }
}

/// Density operator of one label qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState<T> {
    rho: [[Complex<T>; 2]; 2],
}

fn c<T: Scalar>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

fn matmul<T: Scalar>(a: &[[Complex<T>; 2]; 2], b: &[[Complex<T>; 2]; 2]) -> [[Complex<T>; 2]; 2] {
    let mut out = [[c(T::zero()); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

impl<T: Scalar> QubitState<T> {
    /// Builds a state from raw matrix entries, checking the density-operator invariants.
    pub fn from_matrix(rho: [[Complex<T>; 2]; 2]) -> Result<Self> {
        let state = Self { rho };
        state.validate(T::lit(STATE_TOLERANCE).max(T::epsilon() * T::lit(16.0)))?;
        Ok(state)
    }

    pub fn prepare(label: PreparationLabel) -> Self {
        PureState::of(label).projector()
    }

    pub fn maximally_mixed() -> Self {
        let h = c(T::lit(0.5));
        let z = c(T::zero());
        Self {
            rho: [[h, z], [z, h]],
        }
    }

    pub fn matrix(&self) -> [[Complex<T>; 2]; 2] {
        self.rho
    }

    pub fn trace(&self) -> Complex<T> {
        self.rho[0][0] + self.rho[1][1]
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> T {
        let sq = matmul(&self.rho, &self.rho);
        (sq[0][0] + sq[1][1]).re
    }

    /// Checks hermiticity, unit trace and positivity within `tol`.
    pub fn validate(&self, tol: T) -> Result<()> {
        let r = &self.rho;
        let herm = (r[0][1] - r[1][0].conj()).norm() + r[0][0].im.abs() + r[1][1].im.abs();
        if herm > tol {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {herm})"
            )));
        }
        let tr = self.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        // eigenvalues of a Hermitian 2x2: t/2 ± sqrt((a-d)^2/4 + |b|^2)
        let a = r[0][0].re;
        let d = r[1][1].re;
        let half_gap = ((a - d) * (a - d) / T::lit(4.0) + r[0][1].norm_sqr()).sqrt();
        let low = (a + d) / T::lit(2.0) - half_gap;
        if low < -tol {
            return Err(Error::InvalidState(format!("negative eigenvalue {low}")));
        }
        Ok(())
    }

    /// `ρ → XρX`: swaps both diagonal and both off-diagonal entries.
    pub fn pauli_x(&self) -> Self {
        let r = self.rho;
        Self {
            rho: [[r[1][1], r[1][0]], [r[0][1], r[0][0]]],
        }
    }

    /// `ρ → ZρZ`.
    pub fn pauli_z(&self) -> Self {
        let r = self.rho;
        Self {
            rho: [[r[0][0], -r[0][1]], [-r[1][0], r[1][1]]],
        }
    }

    /// `ρ → YρY`.
    pub fn pauli_y(&self) -> Self {
        self.pauli_x().pauli_z()
    }

    /// Convex combination `(1−w)·self + w·other`.
    pub fn mix(&self, other: &Self, weight: T) -> Self {
        let keep = c(T::one() - weight);
        let w = c(weight);
        let rho = std::array::from_fn(|i| {
            std::array::from_fn(|j| keep * self.rho[i][j] + w * other.rho[i][j])
        });
        Self { rho }
    }

    /// Oracle `F`: conditional Pauli-X on the label bit.
    pub fn apply_oracle(&self, label_bit: u8) -> Self {
        if label_bit & 1 == 1 {
            self.pauli_x()
        } else {
            *self
        }
    }

    /// Born probability of outcome `bit` in `basis`.
    pub fn probability(&self, basis: Basis, bit: u8) -> T {
        self.fidelity_unchecked(&basis.eigenstate(bit))
            .max(T::zero())
            .min(T::one())
    }

    /// Projective measurement driven by one uniform draw `u ∈ [0, 1)`:
    /// outcome `0` iff `u < P(0)`.
    pub fn measure(&self, basis: Basis, u: T) -> (u8, Self) {
        let p0 = self.probability(basis, 0);
        let p1 = self.probability(basis, 1);
        let bit = if u < p0 || p1 <= T::zero() { 0 } else { 1 };
        (bit, basis.eigenstate(bit).projector())
    }

    fn fidelity_unchecked(&self, reference: &PureState<T>) -> T {
        let a = reference.amplitudes;
        let mut acc = c(T::zero());
        for i in 0..2 {
            for j in 0..2 {
                acc = acc + a[i].conj() * self.rho[i][j] * a[j];
            }
        }
        acc.re
    }

    /// `Tr(ρ |ψ⟩⟨ψ|)` against a normalized reference.
    pub fn fidelity(&self, reference: &PureState<T>) -> T {
        self.fidelity_unchecked(reference)
    }

    /// Fidelity against raw amplitudes, rejecting non-normalized references.
    pub fn fidelity_with(&self, a0: Complex<T>, a1: Complex<T>) -> Result<T> {
        Ok(self.fidelity(&PureState::new(a0, a1)?))
    }
}
