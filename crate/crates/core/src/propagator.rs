//! Closed-form time evolution, block by block.
//!
//! Each three-dimensional block evolves with `U = O^T D(t) O`, written out
//! element by element below; dark blocks only pick up `exp(-i E t)`.
//! Because the excitation numbers are conserved, evolving a packet never
//! moves amplitude between blocks.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::atoms::Model;
use crate::dressed::{dressed_block, DressedBlock};
use crate::error::{Error, Result};
use crate::initial_state::PacketState;
use crate::state_space::{BlockIndex, Lattice};

/// Evolution operator restricted to one block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BlockUnitary {
    Phase(C64),
    Full([[C64; 3]; 3]),
}

impl BlockUnitary {
    /// `out = U c` for the block amplitudes `c` (length 1 or 3).
    pub fn apply(&self, c: &[C64], out: &mut [C64]) {
        match self {
            BlockUnitary::Phase(p) => out[0] = p * c[0],
            BlockUnitary::Full(u) => {
                for (i, row) in u.iter().enumerate() {
                    out[i] = row[0] * c[0] + row[1] * c[1] + row[2] * c[2];
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            BlockUnitary::Phase(_) => 1,
            BlockUnitary::Full(_) => 3,
        }
    }

    /// Entry `(i, j)`; a phase is treated as a 1x1 matrix.
    pub fn get(&self, i: usize, j: usize) -> C64 {
        match self {
            BlockUnitary::Phase(p) => *p,
            BlockUnitary::Full(u) => u[i][j],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockPropagator {
    pub block: BlockIndex,
    pub t: f64,
    pub u: BlockUnitary,
}

/// `sin(x) / x` with a series branch near zero.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-6 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

fn phase(angle: f64) -> C64 {
    C64::from_polar(1.0, -angle)
}

/// Closed-form propagator of a dressed block at time `t`.
pub fn block_propagator(db: &DressedBlock, t: f64) -> BlockPropagator {
    let u = if db.degenerate {
        BlockUnitary::Phase(phase(db.e0 * t))
    } else {
        BlockUnitary::Full(full_block(db, t))
    };
    BlockPropagator {
        block: db.block,
        t,
        u,
    }
}

fn full_block(db: &DressedBlock, t: f64) -> [[C64; 3]; 3] {
    if t == 0.0 {
        let (one, zero) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        return [[one, zero, zero], [zero, one, zero], [zero, zero, one]];
    }
    let eps = db.eps2;
    let delta = db.delta13;
    let (g13, g23) = (db.g13, db.g23);
    let gsq = db.coupling_sq();

    // exp(-i E0 t) and exp(-i (E0 + Delta/2) t)
    let ph0 = phase(db.e0 * t);
    let ph_d = phase((db.e0 + 0.5 * delta) * t);

    // e^{i eps t} / (2 eps^2 - Delta eps) + e^{-i eps t} / (2 eps^2 + Delta eps)
    let (s, c) = (eps * t).sin_cos();
    let bracket = C64::new(c, s) / (2.0 * eps * db.eps_minus)
        + C64::new(c, -s) / (2.0 * eps * db.eps_plus);

    // sin(eps t) / eps
    let sin_over_eps = t * sinc(eps * t);
    let minus_i = C64::new(0.0, -1.0);

    let u11 = ph0 * (g23 * g23 / gsq) + ph_d * bracket * (g13 * g13);
    let u12 = -ph0 * (g13 * g23 / gsq) + ph_d * bracket * (g13 * g23);
    let u22 = ph0 * (g13 * g13 / gsq) + ph_d * bracket * (g23 * g23);
    let u13 = minus_i * ph_d * (g13 * sin_over_eps);
    let u23 = minus_i * ph_d * (g23 * sin_over_eps);
    let u33 = ph_d * C64::new(c, -0.5 * delta * sin_over_eps);

    [[u11, u12, u13], [u12, u22, u23], [u13, u23, u33]]
}

/// Anything that can evolve a packet to an arbitrary time.
pub trait Dynamics: Sync {
    fn lattice(&self) -> &Arc<Lattice>;

    /// Unitary of block number `pos` (position in [`Lattice::blocks`]).
    fn block_unitary(&self, pos: usize, t: f64) -> BlockUnitary;

    fn evolve(&self, packet: &PacketState, t: f64) -> Result<PacketState> {
        let lattice = self.lattice();
        if packet.lattice().m0() != lattice.m0() {
            return Err(Error::LatticeMismatch {
                expected: lattice.m0(),
                found: packet.lattice().m0(),
            });
        }
        let amps = packet.amplitudes();
        let mut out = vec![C64::new(0.0, 0.0); amps.len()];
        for (pos, b) in lattice.blocks().iter().enumerate() {
            let c = &amps[b.range()];
            if c.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
                continue;
            }
            self.block_unitary(pos, t).apply(c, &mut out[b.range()]);
        }
        Ok(packet.with_amplitudes(out))
    }
}

/// Closed-form dynamics for equal detunings.
#[derive(Clone, Debug)]
pub struct Propagator {
    lattice: Arc<Lattice>,
    dressed: Vec<DressedBlock>,
}

impl Propagator {
    pub fn new(model: &Model, lattice: Arc<Lattice>) -> Result<Self> {
        let dressed = lattice
            .blocks()
            .iter()
            .map(|b| dressed_block(b.index, model))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { lattice, dressed })
    }

    pub fn dressed(&self) -> &[DressedBlock] {
        &self.dressed
    }

    pub fn block(&self, b: BlockIndex, t: f64) -> Option<BlockPropagator> {
        let pos = self.lattice.block_position(b)?;
        Some(block_propagator(&self.dressed[pos], t))
    }
}

impl Dynamics for Propagator {
    fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    fn block_unitary(&self, pos: usize, t: f64) -> BlockUnitary {
        block_propagator(&self.dressed[pos], t).u
    }
}
