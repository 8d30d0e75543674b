//! Dressed states of a block under equal detunings `Delta13 = Delta23`.
//!
//! With `s1 = sqrt(m1 - m2 + 1)`, `s2 = sqrt(m2)` and the effective coupling
//! `g^2 = s1^2 mu13^2 + s2^2 mu23^2`, the block eigenvalues are
//!
//! ```text
//! E0,   E+- = E0 + Delta/2 +- eps2,   eps2 = sqrt(Delta^2/4 + g^2)
//! ```
//!
//! with the dark state `Psi0 ~ (-mu23 s2, mu13 s1, 0)` and the brilliant
//! states `Psi+- ~ (mu13 s1, mu23 s2, Delta/2 +- eps2)`.

use serde::Serialize;

use crate::atoms::Model;
use crate::error::{Error, Result};
use crate::state_space::{BlockIndex, BlockKind};

/// Relative size of `g^2` below which a three-dimensional block is treated
/// as decoupled.
pub const DECOUPLED_THRESHOLD: f64 = 1e-14;

/// `sqrt((Delta13/2)^2 + (m1 - m2 + 1) mu13^2 + m2 mu23^2)`.
pub fn epsilon2(m1: usize, m2: usize, delta13: f64, mu13: f64, mu23: f64) -> f64 {
    let s1sq = (m1 + 1).saturating_sub(m2) as f64;
    (0.25 * delta13 * delta13 + s1sq * mu13 * mu13 + m2 as f64 * mu23 * mu23).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DressedBlock {
    pub block: BlockIndex,
    /// Half-splitting `eps2` (for a dark block, `|Delta13| / 2`).
    pub eps2: f64,
    pub e0: f64,
    pub e_plus: f64,
    pub e_minus: f64,
    /// Rows are `Psi+`, `Psi0`, `Psi-` expanded on `chi_1, chi_2, chi_3`.
    /// Identity for a dark block.
    pub o_matrix: [[f64; 3]; 3],
    pub degenerate: bool,
    /// Detuning of the block (copied so the propagator is self-contained).
    pub delta13: f64,
    /// `mu13 sqrt(m1 - m2 + 1)` and `mu23 sqrt(m2)`.
    pub g13: f64,
    pub g23: f64,
    /// `eps2 + Delta13/2` and `eps2 - Delta13/2`, both computed without
    /// cancellation.
    pub eps_plus: f64,
    pub eps_minus: f64,
}

impl DressedBlock {
    /// Squared effective coupling `eps2^2 - Delta13^2/4`.
    pub fn coupling_sq(&self) -> f64 {
        self.g13 * self.g13 + self.g23 * self.g23
    }

    /// Eigenvalues in the row order of `o_matrix`.
    pub fn energies(&self) -> [f64; 3] {
        [self.e_plus, self.e0, self.e_minus]
    }
}

/// Dressed eigensystem of block `b`.
///
/// One-dimensional blocks are the bare dark states `|0, n2; 1_A>` and
/// `|n1, 0; 2_A>`; their single energy is returned in `e0` (and in both
/// `e_plus`/`e_minus`) with `degenerate = true`.
pub fn dressed_block(b: BlockIndex, model: &Model) -> Result<DressedBlock> {
    let c = &model.coupling;
    if !c.equal_detuning() {
        return Err(Error::UnequalDetuning {
            delta13: c.delta13,
            delta23: c.delta23,
        });
    }
    let kind = b.kind().ok_or(Error::InvalidSlot {
        m1: b.m1,
        m2: b.m2,
        k: 0,
    })?;
    let delta = c.delta13;
    let e0 = model.e0(b);

    if kind != BlockKind::Full {
        // m2 = 0 keeps |chi_2> whose diagonal entry carries Delta13 - Delta23 = 0
        let identity = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        return Ok(DressedBlock {
            block: b,
            eps2: 0.5 * delta.abs(),
            e0,
            e_plus: e0,
            e_minus: e0,
            o_matrix: identity,
            degenerate: true,
            delta13: delta,
            g13: 0.0,
            g23: 0.0,
            eps_plus: 0.0,
            eps_minus: 0.0,
        });
    }

    let g13 = c.mu13 * ((b.m1 + 1 - b.m2) as f64).sqrt();
    let g23 = c.mu23 * (b.m2 as f64).sqrt();
    let gsq = g13 * g13 + g23 * g23;
    let eps2 = (0.25 * delta * delta + gsq).sqrt();
    if gsq <= DECOUPLED_THRESHOLD * (0.25 * delta * delta + c.mu13 * c.mu13 + c.mu23 * c.mu23)
        || gsq == 0.0
    {
        return Err(Error::DegenerateBlock { m1: b.m1, m2: b.m2 });
    }

    // eps2 +- Delta/2; the smaller one equals g^2 over the larger.
    let (eps_plus, eps_minus) = if delta >= 0.0 {
        let p = eps2 + 0.5 * delta;
        (p, gsq / p)
    } else {
        let q = eps2 - 0.5 * delta;
        (gsq / q, q)
    };

    let g = gsq.sqrt();
    // 2 eps2^2 +- Delta eps2 = 2 eps2 (eps2 +- Delta/2)
    let n_plus = (2.0 * eps2 * eps_plus).sqrt();
    let n_minus = (2.0 * eps2 * eps_minus).sqrt();
    let o_matrix = [
        [g13 / n_plus, g23 / n_plus, eps_plus / n_plus],
        [-g23 / g, g13 / g, 0.0],
        // Delta/2 - eps2 = -(eps2 - Delta/2)
        [g13 / n_minus, g23 / n_minus, -eps_minus / n_minus],
    ];

    Ok(DressedBlock {
        block: b,
        eps2,
        e0,
        e_plus: e0 + 0.5 * delta + eps2,
        e_minus: e0 + 0.5 * delta - eps2,
        o_matrix,
        degenerate: false,
        delta13: delta,
        g13,
        g23,
        eps_plus,
        eps_minus,
    })
}
