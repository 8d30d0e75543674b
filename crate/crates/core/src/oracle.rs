//! Brute-force reference dynamics.
//!
//! Block Hamiltonians are assembled directly from the level and mode
//! frequencies and evolved through a numeric eigendecomposition. Nothing
//! here goes through the dressed-state formulas, so agreement with the
//! closed-form propagator is a genuine check.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::atoms::{AtomSpec, CouplingConfig, Model};
use crate::eigen::eigh_real;
use crate::error::Result;
use crate::initial_state::PacketState;
use crate::propagator::{BlockUnitary, Dynamics, Propagator};
use crate::state_space::{chi_sign, chi_to_fock, BlockIndex, Lattice};

/// Default acceptance threshold for analytic-vs-numeric deviations.
pub const ORACLE_TOL: f64 = 1e-8;

/// Block Hamiltonian in the `chi` basis, `E0` shift included.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DenseBlockHamiltonian {
    pub block: BlockIndex,
    pub h: Vec<Vec<f64>>,
}

impl DenseBlockHamiltonian {
    pub fn dim(&self) -> usize {
        self.h.len()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.h[i][i]).sum()
    }
}

/// Bare energy of `|n1, n2; k_A>`.
fn bare_energy(atom: &AtomSpec, coupling: &CouplingConfig, n1: usize, n2: usize, level_index: usize) -> f64 {
    atom.omega(level_index) + coupling.omega_field1 * n1 as f64 + coupling.omega_field2 * n2 as f64
}

/// Block matrix with general detunings, built slot by slot: each diagonal
/// entry is the bare energy of the basis ket, and the couplings are
/// `mu13 sqrt(m1 - m2 + 1)` (`chi1`-`chi3`) and `mu23 sqrt(m2)` (`chi2`-`chi3`).
pub fn assemble_block(block: BlockIndex, coupling: &CouplingConfig, atom: &AtomSpec) -> DenseBlockHamiltonian {
    let kind = block.kind().expect("block outside lattice");
    let levels = kind.levels();
    let n = levels.len();
    let mut h = vec![vec![0.0; n]; n];
    for (i, &level) in levels.iter().enumerate() {
        let f = chi_to_fock(block, level).expect("valid slot");
        h[i][i] = bare_energy(atom, coupling, f.n1, f.n2, level.index());
    }
    if n == 3 {
        let s1 = ((block.m1 + 1 - block.m2) as f64).sqrt();
        let s2 = (block.m2 as f64).sqrt();
        h[0][2] = coupling.mu13 * s1;
        h[2][0] = h[0][2];
        h[1][2] = coupling.mu23 * s2;
        h[2][1] = h[1][2];
    }
    DenseBlockHamiltonian { block, h }
}

/// The same block written in the bare Fock kets `|n1, n2; k_A>`, from the
/// operator action of the RWA Hamiltonian with its `-mu` couplings.
pub fn fock_block_hamiltonian(block: BlockIndex, coupling: &CouplingConfig, atom: &AtomSpec) -> DenseBlockHamiltonian {
    let kind = block.kind().expect("block outside lattice");
    let kets: Vec<_> = kind
        .levels()
        .iter()
        .map(|&l| chi_to_fock(block, l).expect("valid slot"))
        .collect();
    let n = kets.len();
    let mut h = vec![vec![0.0; n]; n];
    for (i, bra) in kets.iter().enumerate() {
        for (j, ket) in kets.iter().enumerate() {
            let (a, b) = (bra.level.number(), ket.level.number());
            h[i][j] = if i == j {
                bare_energy(atom, coupling, ket.n1, ket.n2, ket.level.index())
            } else if (a, b) == (3, 1) && bra.n1 + 1 == ket.n1 && bra.n2 == ket.n2 {
                // a1 A31 |n1, n2; 1> = sqrt(n1) |n1 - 1, n2; 3>
                -coupling.mu13 * (ket.n1 as f64).sqrt()
            } else if (a, b) == (1, 3) && bra.n1 == ket.n1 + 1 && bra.n2 == ket.n2 {
                -coupling.mu13 * (bra.n1 as f64).sqrt()
            } else if (a, b) == (3, 2) && bra.n2 + 1 == ket.n2 && bra.n1 == ket.n1 {
                -coupling.mu23 * (ket.n2 as f64).sqrt()
            } else if (a, b) == (2, 3) && bra.n2 == ket.n2 + 1 && bra.n1 == ket.n1 {
                -coupling.mu23 * (bra.n2 as f64).sqrt()
            } else {
                0.0
            };
        }
    }
    DenseBlockHamiltonian { block, h }
}

/// Eigen-decomposition of a block, stored relative to its mean diagonal.
#[derive(Clone, Debug)]
pub struct SpectralBlock {
    shift: f64,
    values: Vec<f64>,
    vectors: Vec<Vec<f64>>,
}

impl SpectralBlock {
    pub fn new(h: &[Vec<f64>]) -> Result<Self> {
        let n = h.len();
        let shift = (0..n).map(|i| h[i][i]).sum::<f64>() / n as f64;
        let mut centred = h.to_vec();
        for (i, row) in centred.iter_mut().enumerate() {
            row[i] -= shift;
        }
        let (values, vectors) = eigh_real(&centred)?;
        Ok(Self { shift, values, vectors })
    }

    /// Eigenvalues of the original matrix, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.values.iter().map(|v| v + self.shift).collect()
    }

    /// `V diag(e^{-i lambda t}) V^T`.
    pub fn propagator(&self, t: f64) -> Vec<Vec<C64>> {
        let n = self.values.len();
        let global = C64::from_polar(1.0, -self.shift * t);
        let phases: Vec<C64> = self.values.iter().map(|&l| C64::from_polar(1.0, -l * t) * global).collect();
        let mut u = vec![vec![C64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for j in 0..n {
                u[i][j] = (0..n).map(|k| phases[k] * (self.vectors[i][k] * self.vectors[j][k])).sum();
            }
        }
        u
    }
}

/// `exp(-i h t)` by diagonalisation.
pub fn numeric_propagator(h: &[Vec<f64>], t: f64) -> Result<Vec<Vec<C64>>> {
    Ok(SpectralBlock::new(h)?.propagator(t))
}

/// Numeric dynamics over a whole lattice; works for unequal detunings.
#[derive(Clone, Debug)]
pub struct NumericPropagator {
    lattice: Arc<Lattice>,
    blocks: Vec<SpectralBlock>,
}

impl NumericPropagator {
    pub fn new(model: &Model, lattice: Arc<Lattice>) -> Result<Self> {
        let blocks = lattice
            .blocks()
            .iter()
            .map(|b| SpectralBlock::new(&assemble_block(b.index, &model.coupling, &model.atom).h))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { lattice, blocks })
    }

    pub fn spectral_block(&self, pos: usize) -> &SpectralBlock {
        &self.blocks[pos]
    }
}

impl Dynamics for NumericPropagator {
    fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    fn block_unitary(&self, pos: usize, t: f64) -> BlockUnitary {
        let u = self.blocks[pos].propagator(t);
        if u.len() == 1 {
            BlockUnitary::Phase(u[0][0])
        } else {
            BlockUnitary::Full([
                [u[0][0], u[0][1], u[0][2]],
                [u[1][0], u[1][1], u[1][2]],
                [u[2][0], u[2][1], u[2][2]],
            ])
        }
    }
}

/// Outcome of an analytic-vs-numeric comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub analytic_available: bool,
    pub blocks_compared: usize,
    pub times: Vec<f64>,
    /// Max over blocks and times of the entrywise `|u_analytic - u_numeric|`.
    pub max_block_deviation: f64,
    /// Block and time at which the maximum occurs.
    pub worst_block: Option<(usize, usize)>,
    pub worst_time: Option<f64>,
    /// Max over blocks of `|E_dressed - E_numeric|`.
    pub max_spectral_deviation: f64,
    /// Max over times of `||psi_analytic(t) - psi_numeric(t)||`.
    pub max_state_distance: f64,
    /// Max over times of `| ||psi_numeric(t)|| - 1 |`.
    pub max_norm_drift: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn state_distance(a: &PacketState, b: &PacketState) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Compares the closed-form and numeric propagators on every block of the
/// packet's lattice at each time, and the evolved packets themselves.
///
/// With unequal detunings there is no closed form; only the numeric norm
/// drift is checked.
pub fn compare_evolutions(model: &Model, packet: &PacketState, times: &[f64], tolerance: f64) -> Result<ComparisonReport> {
    let lattice = Arc::clone(packet.lattice());
    let numeric = NumericPropagator::new(model, Arc::clone(&lattice))?;
    let mut report = ComparisonReport {
        analytic_available: model.coupling.equal_detuning(),
        blocks_compared: lattice.blocks().len(),
        times: times.to_vec(),
        max_block_deviation: 0.0,
        worst_block: None,
        worst_time: None,
        max_spectral_deviation: 0.0,
        max_state_distance: 0.0,
        max_norm_drift: 0.0,
        tolerance,
        passed: true,
    };
    let analytic = if report.analytic_available {
        Some(Propagator::new(model, Arc::clone(&lattice))?)
    } else {
        None
    };

    if let Some(analytic) = &analytic {
        for (pos, db) in analytic.dressed().iter().enumerate() {
            let mut want = numeric.spectral_block(pos).eigenvalues();
            let mut got: Vec<f64> = if db.degenerate {
                vec![db.e0]
            } else {
                db.energies().to_vec()
            };
            want.sort_by(f64::total_cmp);
            got.sort_by(f64::total_cmp);
            for (a, b) in want.iter().zip(&got) {
                report.max_spectral_deviation = report.max_spectral_deviation.max((a - b).abs());
            }
        }
    }

    for &t in times {
        let psi_num = numeric.evolve(packet, t)?;
        report.max_norm_drift = report.max_norm_drift.max((psi_num.norm_sqr().sqrt() - 1.0).abs());
        let Some(analytic) = &analytic else { continue };
        for (pos, b) in lattice.blocks().iter().enumerate() {
            let ua = analytic.block_unitary(pos, t);
            let un = numeric.block_unitary(pos, t);
            for i in 0..ua.dim() {
                for j in 0..ua.dim() {
                    let dev = (ua.get(i, j) - un.get(i, j)).norm();
                    if dev > report.max_block_deviation {
                        report.max_block_deviation = dev;
                        report.worst_block = Some((b.index.m1, b.index.m2));
                        report.worst_time = Some(t);
                    }
                }
            }
        }
        let psi_an = analytic.evolve(packet, t)?;
        report.max_state_distance = report.max_state_distance.max(state_distance(&psi_an, &psi_num));
    }
    report.passed = report.max_block_deviation < tolerance
        && report.max_state_distance < tolerance
        && report.max_spectral_deviation < tolerance
        && report.max_norm_drift < tolerance;
    Ok(report)
}

/// Converts a `chi`-basis block matrix to the bare Fock basis.
pub fn chi_to_fock_matrix(h: &DenseBlockHamiltonian) -> Vec<Vec<f64>> {
    let levels = h.block.kind().expect("valid block").levels();
    let n = h.dim();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            out[i][j] = chi_sign(levels[i]) * h.h[i][j] * chi_sign(levels[j]);
        }
    }
    out
}
