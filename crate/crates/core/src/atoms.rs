//! Atomic data and the conversion from laboratory knobs (beam intensity in
//! units of the saturation intensity, detuning in units of the linewidth) to
//! the dimensionless model parameters.
//!
//! Frequencies are measured in units of the upper-level frequency `omega3`
//! and times in units of `1/omega3`; `hbar = 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state_space::{BlockIndex, BlockKind};

/// Dimensionless level structure of an effective three-level atom.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub label: String,
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
    /// Natural linewidth `Gamma / omega3`.
    pub gamma_bar: f64,
    /// Nanoseconds per dimensionless time unit.
    pub time_unit_ns: f64,
}

impl AtomSpec {
    pub fn new(
        label: impl Into<String>,
        omega1: f64,
        omega2: f64,
        omega3: f64,
        gamma_bar: f64,
        time_unit_ns: f64,
    ) -> Result<Self> {
        let atom = Self {
            label: label.into(),
            omega1,
            omega2,
            omega3,
            gamma_bar,
            time_unit_ns,
        };
        atom.validate()?;
        Ok(atom)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.omega1, self.omega2, self.omega3, self.gamma_bar, self.time_unit_ns]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidAtom(format!("{}: non-finite parameter", self.label)));
        }
        if !(self.omega1 < self.omega2 && self.omega2 < self.omega3) {
            return Err(Error::InvalidAtom(format!(
                "{}: level frequencies must satisfy omega1 < omega2 < omega3, got {} / {} / {}",
                self.label, self.omega1, self.omega2, self.omega3
            )));
        }
        if self.omega3 != 1.0 {
            return Err(Error::InvalidAtom(format!(
                "{}: frequencies are in units of omega3, so omega3 must be 1 (got {})",
                self.label, self.omega3
            )));
        }
        if self.gamma_bar <= 0.0 {
            return Err(Error::InvalidAtom(format!("{}: gamma_bar must be positive", self.label)));
        }
        if self.time_unit_ns <= 0.0 {
            return Err(Error::InvalidAtom(format!("{}: time_unit_ns must be positive", self.label)));
        }
        Ok(())
    }

    pub fn omega(&self, k: usize) -> f64 {
        [self.omega1, self.omega2, self.omega3][k]
    }
}

/// Calibrated D1-line atoms: `li6` and `rb87`.
pub fn builtin_atom(name: &str) -> Result<AtomSpec> {
    match name.to_ascii_lowercase().as_str() {
        "li6" => AtomSpec::new("li6", 0.0, 1.0 / 3.0, 1.0, 0.0257, 0.698),
        "rb87" => AtomSpec::new("rb87", 0.0, 0.375, 1.0, 8.407e-4, 2.093),
        _ => Err(Error::UnknownAtom(name.to_string())),
    }
}

/// Rabi frequency `mu = Gamma * sqrt(I / (2 I_sat))`.
pub fn rabi_from_intensity(gamma_bar: f64, intensity_ratio: f64) -> Result<f64> {
    if !(intensity_ratio >= 0.0) || !intensity_ratio.is_finite() {
        return Err(Error::Domain(format!(
            "intensity ratio I/I_sat must be a finite non-negative number, got {intensity_ratio}"
        )));
    }
    Ok(gamma_bar * (intensity_ratio / 2.0).sqrt())
}

/// Inverse of [`rabi_from_intensity`]: `I / I_sat = 2 (mu / Gamma)^2`.
pub fn intensity_from_rabi(gamma_bar: f64, mu: f64) -> f64 {
    2.0 * (mu / gamma_bar).powi(2)
}

/// Detuning `n * Gamma`.
pub fn detuning_from_multiple(gamma_bar: f64, n: f64) -> f64 {
    n * gamma_bar
}

/// Couplings, detunings and the cavity-mode frequencies they imply.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingConfig {
    pub mu13: f64,
    pub mu23: f64,
    pub delta13: f64,
    pub delta23: f64,
    pub omega_field1: f64,
    pub omega_field2: f64,
}

impl CouplingConfig {
    /// Mode frequencies follow from `omega3 - omega1 = Omega1 + Delta13` and
    /// `omega3 - omega2 = Omega2 + Delta23`.
    pub fn new(atom: &AtomSpec, mu13: f64, mu23: f64, delta13: f64, delta23: f64) -> Result<Self> {
        if !(mu13 >= 0.0 && mu23 >= 0.0) {
            return Err(Error::Domain(format!(
                "Rabi frequencies must be non-negative, got mu13={mu13}, mu23={mu23}"
            )));
        }
        if !(delta13.is_finite() && delta23.is_finite()) {
            return Err(Error::Domain("detunings must be finite".into()));
        }
        Ok(Self {
            mu13,
            mu23,
            delta13,
            delta23,
            omega_field1: (atom.omega3 - atom.omega1) - delta13,
            omega_field2: (atom.omega3 - atom.omega2) - delta23,
        })
    }

    pub fn equal_detuning(&self) -> bool {
        self.delta13 == self.delta23
    }
}

/// Block Hamiltonian in the `chi` basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BlockMatrix {
    /// Energy of a one-dimensional (dark) block.
    Scalar(f64),
    Full([[f64; 3]; 3]),
}

/// Atom plus its coupling to the two cavity modes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub atom: AtomSpec,
    pub coupling: CouplingConfig,
}

impl Model {
    pub fn new(atom: AtomSpec, mu13: f64, mu23: f64, delta13: f64, delta23: f64) -> Result<Self> {
        atom.validate()?;
        let coupling = CouplingConfig::new(&atom, mu13, mu23, delta13, delta23)?;
        Ok(Self { atom, coupling })
    }

    /// Common diagonal shift `omega1 + Omega1 (m1 - m2 + 1) + Omega2 (m2 - 1)`.
    pub fn e0(&self, b: BlockIndex) -> f64 {
        let c = &self.coupling;
        self.atom.omega1
            + c.omega_field1 * (b.m1 as f64 - b.m2 as f64 + 1.0)
            + c.omega_field2 * (b.m2 as f64 - 1.0)
    }

    /// Block matrix with the `E0` shift included, for arbitrary detunings.
    pub fn block_matrix(&self, b: BlockIndex) -> BlockMatrix {
        let c = &self.coupling;
        let e0 = self.e0(b);
        match b.kind().expect("block outside lattice") {
            BlockKind::DarkOne => BlockMatrix::Scalar(e0),
            BlockKind::DarkTwo => BlockMatrix::Scalar(e0 + c.delta13 - c.delta23),
            BlockKind::Full => {
                let g13 = c.mu13 * ((b.m1 + 1 - b.m2) as f64).sqrt();
                let g23 = c.mu23 * (b.m2 as f64).sqrt();
                BlockMatrix::Full([
                    [e0, 0.0, g13],
                    [0.0, e0 + c.delta13 - c.delta23, g23],
                    [g13, g23, e0 + c.delta13],
                ])
            }
        }
    }
}
