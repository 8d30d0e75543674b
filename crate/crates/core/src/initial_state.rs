//! Separable initial packets: a two-mode Glauber coherent field times a
//! single-atom superposition, placed on the excitation-number lattice.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::atoms::{BlockMatrix, Model};
use crate::error::{Error, Result};
use crate::special::{poisson_tails, LnFactorial};
use crate::state_space::{
    chi_sign, lattice_dimension, BlockIndex, FockLabel, Lattice, Level,
};

/// Default probability allowed to fall outside the photon-number cutoff.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Upper bound on lattice slots a packet may allocate.
pub const MAX_SLOTS: usize = 20_000_000;

/// Coherent amplitudes of the two cavity modes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FieldAmplitudes {
    pub alpha1: C64,
    pub alpha2: C64,
}

impl FieldAmplitudes {
    pub fn new(alpha1: C64, alpha2: C64) -> Self {
        Self { alpha1, alpha2 }
    }

    /// `alpha_s = sqrt(nbar_s) e^{i phase_s}`.
    pub fn from_mean_photons(nbar1: f64, phase1: f64, nbar2: f64, phase2: f64) -> Result<Self> {
        if !(nbar1 >= 0.0 && nbar2 >= 0.0) {
            return Err(Error::Domain(format!(
                "mean photon numbers must be non-negative, got {nbar1} and {nbar2}"
            )));
        }
        Ok(Self {
            alpha1: C64::from_polar(nbar1.sqrt(), phase1),
            alpha2: C64::from_polar(nbar2.sqrt(), phase2),
        })
    }

    pub fn nbar1(&self) -> f64 {
        self.alpha1.norm_sqr()
    }

    pub fn nbar2(&self) -> f64 {
        self.alpha2.norm_sqr()
    }
}

/// Normalised atomic amplitudes `gamma_k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AtomAmplitudes {
    pub gamma: [C64; 3],
}

impl AtomAmplitudes {
    pub fn basis(level: Level) -> Self {
        let mut gamma = [C64::new(0.0, 0.0); 3];
        gamma[level.index()] = C64::new(1.0, 0.0);
        Self { gamma }
    }

    pub fn probabilities(&self) -> [f64; 3] {
        self.gamma.map(|g| g.norm_sqr())
    }
}

/// `gamma_k = zeta_k e^{i theta_k} / sqrt(sum zeta^2)`.
pub fn normalize_gamma(zetas: [f64; 3], thetas: [f64; 3]) -> Result<AtomAmplitudes> {
    if zetas.iter().any(|z| !(*z >= 0.0) || !z.is_finite()) {
        return Err(Error::Domain(format!("atomic moduli must be non-negative, got {zetas:?}")));
    }
    let norm = zetas.iter().map(|z| z * z).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroAmplitudes);
    }
    let mut gamma = [C64::new(0.0, 0.0); 3];
    for k in 0..3 {
        gamma[k] = C64::from_polar(zetas[k] / norm, thetas[k]);
    }
    Ok(AtomAmplitudes { gamma })
}

/// Smallest photon cutoff `nu` whose Poisson tail `sum_{k > nu}` is below
/// `tail_tol`.
pub fn truncation_level(nbar: f64, tail_tol: f64) -> usize {
    if nbar == 0.0 {
        return 0;
    }
    let k_max = (nbar + 40.0 * (nbar + 1.0).sqrt() + 100.0).ceil() as usize;
    let tails = poisson_tails(nbar, k_max);
    tails
        .iter()
        .position(|&t| t < tail_tol)
        .unwrap_or(k_max)
}

/// Amplitudes on the lattice in the `chi` basis.
#[derive(Clone, Debug, PartialEq)]
pub struct PacketState {
    lattice: Arc<Lattice>,
    amplitudes: Vec<C64>,
    tail_mass: f64,
}

impl PacketState {
    pub fn new(lattice: Arc<Lattice>, amplitudes: Vec<C64>, tail_mass: f64) -> Result<Self> {
        if amplitudes.len() != lattice.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for a lattice of dimension {}",
                amplitudes.len(),
                lattice.total_dim()
            )));
        }
        Ok(Self {
            lattice,
            amplitudes,
            tail_mass,
        })
    }

    /// The single `chi`-basis state `(b, level)`.
    pub fn basis_state(lattice: Arc<Lattice>, b: BlockIndex, level: Level) -> Result<Self> {
        let slot = lattice.slot(b, level).ok_or(Error::InvalidSlot {
            m1: b.m1,
            m2: b.m2,
            k: level.number(),
        })?;
        let mut amplitudes = vec![C64::new(0.0, 0.0); lattice.total_dim()];
        amplitudes[slot] = C64::new(1.0, 0.0);
        Ok(Self {
            lattice,
            amplitudes,
            tail_mass: 0.0,
        })
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Probability discarded by the photon cutoff when the packet was built.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// Same lattice and tail mass, new amplitudes.
    pub fn with_amplitudes(&self, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), self.amplitudes.len());
        Self {
            lattice: Arc::clone(&self.lattice),
            amplitudes,
            tail_mass: self.tail_mass,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `G_k(m1, m2)`; zero for slots outside the lattice.
    pub fn amplitude(&self, b: BlockIndex, level: Level) -> C64 {
        self.lattice
            .slot(b, level)
            .map_or(C64::new(0.0, 0.0), |i| self.amplitudes[i])
    }

    /// Amplitude of the bare ket `|n1, n2; k_A>`.
    pub fn fock_amplitude(&self, label: FockLabel) -> C64 {
        self.lattice
            .fock_slot(label)
            .map_or(C64::new(0.0, 0.0), |i| self.amplitudes[i] * chi_sign(label.level))
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PacketState) -> Result<C64> {
        if self.lattice.m0() != other.lattice.m0() {
            return Err(Error::LatticeMismatch {
                expected: self.lattice.m0(),
                found: other.lattice.m0(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Photon cutoffs chosen for a field, one per mode.
pub fn photon_cutoffs(field: &FieldAmplitudes, tail_tol: f64) -> (usize, usize) {
    // the two modes share the tolerance so the joint tail stays below it
    (
        truncation_level(field.nbar1(), 0.5 * tail_tol),
        truncation_level(field.nbar2(), 0.5 * tail_tol),
    )
}

/// Truncated, renormalised `|alpha1, alpha2> (x) sum_k gamma_k |k_A>`.
pub fn build_packet(field: &FieldAmplitudes, atom: &AtomAmplitudes, tail_tol: f64) -> Result<PacketState> {
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::Domain(format!("tail tolerance must lie in (0, 1), got {tail_tol}")));
    }
    let (nu1, nu2) = photon_cutoffs(field, tail_tol);
    let m0 = nu1 + nu2 + 1;
    let required = lattice_dimension(m0);
    if required > MAX_SLOTS {
        return Err(Error::Capacity {
            required,
            budget: MAX_SLOTS,
        });
    }
    let lattice = Arc::new(Lattice::new(m0));

    let mode1 = coherent_coefficients(field.alpha1, nu1);
    let mode2 = coherent_coefficients(field.alpha2, nu2);
    let mut amplitudes = vec![C64::new(0.0, 0.0); lattice.total_dim()];
    for (n1, c1) in mode1.iter().enumerate() {
        for (n2, c2) in mode2.iter().enumerate() {
            for level in Level::ALL {
                let g = atom.gamma[level.index()];
                if g == C64::new(0.0, 0.0) {
                    continue;
                }
                let slot = lattice
                    .fock_slot(FockLabel::new(n1, n2, level))
                    .expect("cutoffs fit inside M0");
                amplitudes[slot] = c1 * c2 * g * chi_sign(level);
            }
        }
    }
    let kept: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
    let scale = 1.0 / kept.sqrt();
    amplitudes.iter_mut().for_each(|z| *z *= scale);

    let t1 = mode_tail(field.nbar1(), nu1);
    let t2 = mode_tail(field.nbar2(), nu2);
    PacketState::new(lattice, amplitudes, t1 + t2 - t1 * t2)
}

fn mode_tail(nbar: f64, nu: usize) -> f64 {
    if nbar == 0.0 {
        return 0.0;
    }
    let k_max = (nbar + 40.0 * (nbar + 1.0).sqrt() + 100.0).ceil() as usize;
    poisson_tails(nbar, k_max.max(nu))[nu]
}

/// `e^{-|alpha|^2/2} alpha^n / sqrt(n!)` for `n = 0..=nu`.
pub fn coherent_coefficients(alpha: C64, nu: usize) -> Vec<C64> {
    let lnf = LnFactorial::new(nu);
    let r2 = alpha.norm_sqr();
    if r2 == 0.0 {
        let mut v = vec![C64::new(0.0, 0.0); nu + 1];
        v[0] = C64::new(1.0, 0.0);
        return v;
    }
    let (ln_r, arg) = (alpha.norm().ln(), alpha.arg());
    (0..=nu)
        .map(|n| {
            let modulus = (-0.5 * r2 + n as f64 * ln_r - 0.5 * lnf.get(n)).exp();
            C64::from_polar(modulus, n as f64 * arg)
        })
        .collect()
}

/// Expectation values of the three constants of motion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConservedQuantities {
    pub energy: f64,
    pub m1: f64,
    pub m2: f64,
}

/// `<H>`, `<M1>`, `<M2>` summed block by block from the amplitudes.
pub fn conserved_expectations(packet: &PacketState, model: &Model) -> ConservedQuantities {
    let amps = packet.amplitudes();
    let (mut energy, mut m1, mut m2) = (0.0, 0.0, 0.0);
    for b in packet.lattice().blocks() {
        let c = &amps[b.range()];
        let p: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        if p == 0.0 {
            continue;
        }
        m1 += b.index.m1 as f64 * p;
        m2 += b.index.m2 as f64 * p;
        energy += match model.block_matrix(b.index) {
            BlockMatrix::Scalar(e) => e * p,
            BlockMatrix::Full(h) => {
                let mut acc = 0.0;
                for i in 0..3 {
                    acc += h[i][i] * c[i].norm_sqr();
                    for j in i + 1..3 {
                        acc += 2.0 * h[i][j] * (c[i].conj() * c[j]).re;
                    }
                }
                acc
            }
        };
    }
    ConservedQuantities { energy, m1, m2 }
}

/// The same expectations for the untruncated separable state.
pub fn closed_form_conserved(
    field: &FieldAmplitudes,
    atom: &AtomAmplitudes,
    model: &Model,
) -> ConservedQuantities {
    let [g1, g2, g3] = atom.gamma;
    let (a1, a2) = (field.alpha1, field.alpha2);
    let c = &model.coupling;
    let p = atom.probabilities();
    let energy = model.atom.omega1 * p[0]
        + model.atom.omega2 * p[1]
        + model.atom.omega3 * p[2]
        + c.omega_field1 * a1.norm_sqr()
        + c.omega_field2 * a2.norm_sqr()
        - c.mu13 * 2.0 * (a1 * g1 * g3.conj()).re
        - c.mu23 * 2.0 * (a2 * g2 * g3.conj()).re;
    ConservedQuantities {
        energy,
        m1: a1.norm_sqr() + a2.norm_sqr() + p[2],
        m2: a2.norm_sqr() + p[0] + p[2],
    }
}
