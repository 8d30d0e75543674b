//! Matter and field observables of a packet.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::eigen::CMatrix;
use crate::error::{Error, Result};
use crate::initial_state::{AtomAmplitudes, FieldAmplitudes, PacketState};
use crate::special::{poisson_weight, LnFactorial};
use crate::state_space::{chi_sign, chi_to_fock, BlockIndex, Level};

/// Diagonal entries below this are treated as outside a mode's support.
pub const SUPPORT_CUTOFF: f64 = 1e-20;

/// Atomic reduced density matrix `rho^A`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AtomicDensity {
    pub rho: [[C64; 3]; 3],
}

impl AtomicDensity {
    pub fn from_amplitudes(atom: &AtomAmplitudes) -> Self {
        let mut rho = [[C64::new(0.0, 0.0); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                rho[i][j] = atom.gamma[i] * atom.gamma[j].conj();
            }
        }
        Self { rho }
    }

    /// `P_1, P_2, P_3`.
    pub fn probabilities(&self) -> [f64; 3] {
        [self.rho[0][0].re, self.rho[1][1].re, self.rho[2][2].re]
    }

    pub fn chi12(&self) -> C64 {
        self.rho[0][1]
    }

    pub fn chi13(&self) -> C64 {
        self.rho[0][2]
    }

    pub fn chi23(&self) -> C64 {
        self.rho[1][2]
    }

    pub fn trace(&self) -> f64 {
        self.probabilities().iter().sum()
    }

    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_rows(&self.rho.map(|r| r.to_vec())).expect("3x3")
    }
}

/// `rho^A` from the packet amplitudes.
pub fn atomic_rdm(packet: &PacketState) -> AtomicDensity {
    let lattice = packet.lattice();
    let amps = packet.amplitudes();
    let mut rho = [[C64::new(0.0, 0.0); 3]; 3];
    // Pair the three atomic levels that share the photon numbers (n1, n2).
    for n in 0..=lattice.m0() {
        for n2 in 0..=n {
            let n1 = n - n2;
            let mut psi = [C64::new(0.0, 0.0); 3];
            for level in Level::ALL {
                if let Some(i) = lattice.fock_slot(crate::state_space::FockLabel::new(n1, n2, level)) {
                    psi[level.index()] = amps[i] * chi_sign(level);
                }
            }
            for i in 0..3 {
                for j in i..3 {
                    rho[i][j] += psi[i] * psi[j].conj();
                }
            }
        }
    }
    for i in 0..3 {
        for j in 0..i {
            rho[i][j] = rho[j][i].conj();
        }
    }
    AtomicDensity { rho }
}

/// `(Delta P)^2 = P (1 - P)`.
pub fn occupation_fluctuation(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("probability must lie in [0, 1], got {p}")));
    }
    Ok(p * (1.0 - p))
}

/// `C = 2 |chi12| + 2 |chi13| + 2 |chi23|`.
pub fn coherence(rho: &AtomicDensity) -> f64 {
    2.0 * (rho.chi12().norm() + rho.chi13().norm() + rho.chi23().norm())
}

/// Which cavity mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    One,
    Two,
}

/// Reduced density of the two-mode field, stored as the factor `F` with
/// `rho^F = F F^dagger`: row `(n1, n2)`, one column per atomic level.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldDensity {
    /// Photon numbers per mode run over `0..d`.
    d: usize,
    factor: Vec<[C64; 3]>,
}

/// `rho^F` from the packet amplitudes.
pub fn field_rdm(packet: &PacketState) -> FieldDensity {
    let lattice = packet.lattice();
    let d = lattice.m0() + 1;
    let mut factor = vec![[C64::new(0.0, 0.0); 3]; d * d];
    for (b, level, i) in lattice.slots() {
        let f = chi_to_fock(b, level).expect("lattice slots are valid");
        factor[f.n1 * d + f.n2][level.index()] = packet.amplitudes()[i] * chi_sign(level);
    }
    FieldDensity { d, factor }
}

impl FieldDensity {
    pub fn photons_per_mode(&self) -> usize {
        self.d
    }

    /// `(n1, n2)` component of the level-`k` column.
    pub fn factor(&self, n1: usize, n2: usize) -> [C64; 3] {
        self.factor[n1 * self.d + n2]
    }

    pub fn trace(&self) -> f64 {
        self.factor
            .iter()
            .map(|r| r.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum()
    }

    /// `<n1 n2| rho^F |m1 m2>`.
    pub fn element(&self, n1: usize, n2: usize, m1: usize, m2: usize) -> C64 {
        let (a, b) = (self.factor(n1, n2), self.factor(m1, m2));
        (0..3).map(|k| a[k] * b[k].conj()).sum()
    }

    /// Single-mode reduction `rho^{F_s}`.
    pub fn mode(&self, mode: Mode) -> CMatrix {
        let d = self.d;
        let mut rho = CMatrix::zeros(d);
        for nu in 0..d {
            for mu in nu..d {
                let mut acc = C64::new(0.0, 0.0);
                for other in 0..d {
                    let (a, b) = match mode {
                        Mode::One => (self.factor(nu, other), self.factor(mu, other)),
                        Mode::Two => (self.factor(other, nu), self.factor(other, mu)),
                    };
                    acc += a[0] * b[0].conj() + a[1] * b[1].conj() + a[2] * b[2].conj();
                }
                rho[(nu, mu)] = acc;
                rho[(mu, nu)] = acc.conj();
            }
        }
        rho
    }

    /// Dense `rho^F` on `n1 <= max_n1`, `n2 <= max_n2`, index `n1 (max_n2 + 1) + n2`.
    pub fn truncated(&self, max_n1: usize, max_n2: usize) -> CMatrix {
        let (d1, d2) = ((max_n1 + 1).min(self.d), (max_n2 + 1).min(self.d));
        let mut rho = CMatrix::zeros(d1 * d2);
        for i in 0..d1 * d2 {
            for j in i..d1 * d2 {
                let z = self.element(i / d2, i % d2, j / d2, j % d2);
                rho[(i, j)] = z;
                rho[(j, i)] = z.conj();
            }
        }
        rho
    }

    /// Full dense `rho^F`; `d^2 x d^2`, so only sensible for small lattices.
    pub fn matrix(&self) -> CMatrix {
        self.truncated(self.d - 1, self.d - 1)
    }

    /// `F^dagger F`, which shares the non-zero spectrum of `rho^F`.
    pub fn gram(&self) -> CMatrix {
        let mut g = CMatrix::zeros(3);
        for row in &self.factor {
            for k in 0..3 {
                for l in 0..3 {
                    g[(k, l)] += row[k].conj() * row[l];
                }
            }
        }
        g
    }
}

/// Number of leading Fock states that carry population above `cutoff`.
pub fn support_size(rho: &CMatrix, cutoff: f64) -> usize {
    (0..rho.dim())
        .rev()
        .find(|&i| rho[(i, i)].re > cutoff)
        .map_or(1, |i| i + 1)
}

/// Leading `size x size` block.
pub fn leading_block(rho: &CMatrix, size: usize) -> CMatrix {
    let mut out = CMatrix::zeros(size);
    for i in 0..size {
        for j in 0..size {
            out[(i, j)] = rho[(i, j)];
        }
    }
    out
}

/// `rho` with near-empty high Fock states removed.
pub fn trimmed(rho: &CMatrix) -> CMatrix {
    leading_block(rho, support_size(rho, SUPPORT_CUTOFF))
}

/// `(<n>, <n^2>)` of a single-mode density.
pub fn photon_moments(rho: &CMatrix) -> (f64, f64) {
    let (mut m1, mut m2) = (0.0, 0.0);
    for n in 0..rho.dim() {
        let p = rho[(n, n)].re;
        m1 += n as f64 * p;
        m2 += (n * n) as f64 * p;
    }
    (m1, m2)
}

/// Mandel parameter `(<n^2> - <n>^2) / <n> - 1`.
pub fn mandel_q(rho: &CMatrix) -> Result<f64> {
    let (m1, m2) = photon_moments(rho);
    if m1 < 1e-12 {
        return Err(Error::VacuumMode(m1));
    }
    Ok((m2 - m1 * m1) / m1 - 1.0)
}

/// `<beta|n>`-type coefficients `e^{-|beta|^2/2} beta^n / sqrt(n!)`.
fn coherent_overlap(beta: C64, n_max: usize, lnf: &LnFactorial) -> Vec<C64> {
    let r2 = beta.norm_sqr();
    let mut v = vec![C64::new(0.0, 0.0); n_max + 1];
    if r2 == 0.0 {
        v[0] = C64::new(1.0, 0.0);
        return v;
    }
    let (ln_r, arg) = (0.5 * r2.ln(), beta.arg());
    for (n, slot) in v.iter_mut().enumerate() {
        let m = (-0.5 * r2 + n as f64 * ln_r - 0.5 * lnf.get(n)).exp();
        *slot = C64::from_polar(m, n as f64 * arg);
    }
    v
}

fn husimi_with(rho: &CMatrix, beta: C64, lnf: &LnFactorial) -> f64 {
    let n = rho.dim();
    let v = coherent_overlap(beta, n - 1, lnf);
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        if v[i].norm_sqr() == 0.0 {
            continue;
        }
        let row: C64 = (0..n).map(|j| rho[(i, j)] * v[j]).sum();
        acc += v[i].conj() * row;
    }
    acc.re / std::f64::consts::PI
}

/// `Q(beta) = <beta| rho |beta> / pi` at `beta = X + iY`.
pub fn husimi_value(rho: &CMatrix, beta: C64) -> f64 {
    let lnf = LnFactorial::new(rho.dim());
    husimi_with(rho, beta, &lnf)
}

/// Square phase-space window centred on the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub half_width: f64,
    pub step: f64,
}

impl GridSpec {
    /// `[-(sqrt(nbar) + 4), sqrt(nbar) + 4]^2` with step 0.05.
    pub fn for_mean_photons(nbar_max: f64) -> Self {
        Self {
            half_width: nbar_max.max(0.0).sqrt() + 4.0,
            step: 0.05,
        }
    }

    pub fn points(&self) -> usize {
        (2.0 * self.half_width / self.step).round() as usize + 1
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.step
    }
}

/// Husimi function sampled on a grid; `q[iy * n + ix]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseGrid {
    pub spec: GridSpec,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub q: Vec<f64>,
}

impl PhaseGrid {
    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.q[iy * self.xs.len() + ix]
    }

    pub fn max(&self) -> f64 {
        self.q.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.q.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Riemann sum of `Q dX dY`.
    pub fn integral(&self) -> f64 {
        self.q.iter().sum::<f64>() * self.spec.step * self.spec.step
    }

    /// `2 pi sum Q^2 dX dY`, the quadrature estimate of `M^(2)`.
    pub fn second_moment(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.q.iter().map(|q| q * q).sum::<f64>() * self.spec.step * self.spec.step
    }

    /// Rows `X Y Q`.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.q.len() * 64);
        out.push_str("# X Y Q\n");
        for (iy, y) in self.ys.iter().enumerate() {
            for (ix, x) in self.xs.iter().enumerate() {
                out.push_str(&format!("{x:.6} {y:.6} {:.16e}\n", self.value(ix, iy)));
            }
        }
        out
    }
}

/// Husimi function of a single-mode density on `spec`.
pub fn husimi(rho: &CMatrix, spec: GridSpec) -> PhaseGrid {
    let rho = trimmed(rho);
    let lnf = LnFactorial::new(rho.dim());
    let n = spec.points();
    let axis: Vec<f64> = (0..n).map(|i| spec.coordinate(i)).collect();
    let q: Vec<f64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|iy| {
            let y = axis[iy];
            let (rho, lnf, axis) = (&rho, &lnf, &axis);
            axis.iter().map(move |&x| husimi_with(rho, C64::new(x, y), lnf))
        })
        .collect();
    PhaseGrid {
        spec,
        xs: axis.clone(),
        ys: axis,
        q,
    }
}

/// Closed-form `M^(2) = 2 pi Int Q^2 dX dY`, normalised so a coherent state
/// gives 1.
///
/// Uses `Int e^{-2|b|^2} conj(b)^a b^c d^2b = pi delta_ac a! / 2^(a+1)`.
pub fn second_moment(rho: &CMatrix) -> f64 {
    let rho = trimmed(rho);
    let s = rho.dim();
    let lnf = LnFactorial::new(2 * s);
    let ln2 = std::f64::consts::LN_2;
    let mut total = C64::new(0.0, 0.0);
    let mut w = vec![0.0; s];
    for a in 0..=2 * (s - 1) {
        let lo = a.saturating_sub(s - 1);
        let hi = a.min(s - 1);
        for nu in lo..=hi {
            w[nu] = (0.5 * (lnf.get(a) - lnf.get(nu) - lnf.get(a - nu)) - 0.5 * a as f64 * ln2).exp();
        }
        for nu in lo..=hi {
            for mu in lo..=hi {
                total += w[nu] * w[mu] * rho[(nu, mu)] * rho[(a - nu, a - mu)];
            }
        }
    }
    total.re
}

/// Phase-space area `A = 1 / M^(2)`.
pub fn phase_area(rho: &CMatrix) -> f64 {
    1.0 / second_moment(rho)
}

/// `|<psi(0)|psi(t)>|^2`.
pub fn autocorrelation(initial: &PacketState, evolved: &PacketState) -> Result<f64> {
    Ok(initial.inner(evolved)?.norm_sqr())
}

/// Joint and marginal distributions of the excitation numbers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExcitationDistribution {
    /// `(m1, m2, P)` in lattice order.
    pub joint: Vec<(usize, usize, f64)>,
    pub marginal_m1: Vec<f64>,
    pub marginal_m2: Vec<f64>,
}

impl ExcitationDistribution {
    pub fn joint_at(&self, m1: usize, m2: usize) -> f64 {
        self.joint
            .iter()
            .find(|(a, b, _)| *a == m1 && *b == m2)
            .map_or(0.0, |j| j.2)
    }
}

pub fn excitation_distributions(packet: &PacketState) -> ExcitationDistribution {
    let lattice = packet.lattice();
    let amps = packet.amplitudes();
    let m0 = lattice.m0();
    let mut joint = Vec::with_capacity(lattice.blocks().len());
    let mut marginal_m1 = vec![0.0; m0 + 1];
    let mut marginal_m2 = vec![0.0; m0 + 2];
    for b in lattice.blocks() {
        let p: f64 = amps[b.range()].iter().map(|z| z.norm_sqr()).sum();
        joint.push((b.index.m1, b.index.m2, p));
        marginal_m1[b.index.m1] += p;
        marginal_m2[b.index.m2] += p;
    }
    ExcitationDistribution {
        joint,
        marginal_m1,
        marginal_m2,
    }
}

/// Untruncated `P(m1, m2)` of the separable coherent-product state.
pub fn closed_form_joint(field: &FieldAmplitudes, atom: &AtomAmplitudes, m1: usize, m2: usize) -> f64 {
    let lnf = LnFactorial::new(m1 + 2);
    let (a1, a2) = (field.nbar1(), field.nbar2());
    let p = atom.probabilities();
    let pois = |n1: i64, n2: i64| {
        if n1 < 0 || n2 < 0 {
            0.0
        } else {
            poisson_weight(a1, n1 as usize, &lnf) * poisson_weight(a2, n2 as usize, &lnf)
        }
    };
    let (m1, m2) = (m1 as i64, m2 as i64);
    if m2 > m1 + 1 {
        return 0.0;
    }
    p[0] * pois(m1 - m2 + 1, m2 - 1) + p[1] * pois(m1 - m2, m2) + p[2] * pois(m1 - m2, m2 - 1)
}

/// Untruncated `P_{M1}(m1)`.
pub fn closed_form_marginal_m1(field: &FieldAmplitudes, atom: &AtomAmplitudes, m1: usize) -> f64 {
    let lnf = LnFactorial::new(m1);
    let total = field.nbar1() + field.nbar2();
    let p = atom.probabilities();
    let shifted = if m1 == 0 { 0.0 } else { poisson_weight(total, m1 - 1, &lnf) };
    (p[0] + p[1]) * poisson_weight(total, m1, &lnf) + p[2] * shifted
}

/// Untruncated `P_{M2}(m2)`.
pub fn closed_form_marginal_m2(field: &FieldAmplitudes, atom: &AtomAmplitudes, m2: usize) -> f64 {
    let lnf = LnFactorial::new(m2);
    let nbar = field.nbar2();
    let p = atom.probabilities();
    let shifted = if m2 == 0 { 0.0 } else { poisson_weight(nbar, m2 - 1, &lnf) };
    p[1] * poisson_weight(nbar, m2, &lnf) + (p[0] + p[2]) * shifted
}

/// Dark-state populations, per photon number and summed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DarkStateProbabilities {
    /// `|G_1(n, n + 1)|^2`: the state `|0, n; 1_A>`.
    pub pd1: Vec<f64>,
    /// `|G_2(n, 0)|^2`: the state `|n, 0; 2_A>`.
    pub pd2: Vec<f64>,
    pub total1: f64,
    pub total2: f64,
}

pub fn dark_state_probabilities(packet: &PacketState) -> DarkStateProbabilities {
    let m0 = packet.lattice().m0();
    let pd1: Vec<f64> = (0..=m0)
        .map(|n| packet.amplitude(BlockIndex::new(n, n + 1), Level::One).norm_sqr())
        .collect();
    let pd2: Vec<f64> = (0..=m0)
        .map(|n| packet.amplitude(BlockIndex::new(n, 0), Level::Two).norm_sqr())
        .collect();
    let total1 = pd1.iter().sum();
    let total2 = pd2.iter().sum();
    DarkStateProbabilities {
        pd1,
        pd2,
        total1,
        total2,
    }
}

/// `(e^{-|alpha1|^2} |gamma1|^2, e^{-|alpha2|^2} |gamma2|^2)`.
pub fn closed_form_dark_totals(field: &FieldAmplitudes, atom: &AtomAmplitudes) -> (f64, f64) {
    let p = atom.probabilities();
    ((-field.nbar1()).exp() * p[0], (-field.nbar2()).exp() * p[1])
}
