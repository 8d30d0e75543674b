//! Time sweeps and the files a run leaves behind.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::atoms::{AtomSpec, Model};
use crate::eigen::CMatrix;
use crate::entanglement::{entanglement_report, partial_transpose_min_eigenvalue, EntanglementReport};
use crate::error::{Error, Result};
use crate::initial_state::{
    build_packet, conserved_expectations, photon_cutoffs, AtomAmplitudes, FieldAmplitudes, PacketState,
};
use crate::observables::{
    atomic_rdm, autocorrelation, coherence, dark_state_probabilities, field_rdm, husimi, mandel_q,
    occupation_fluctuation, phase_area, second_moment, support_size, trimmed, AtomicDensity, GridSpec, Mode,
    PhaseGrid,
};
use crate::oracle::{compare_evolutions, ComparisonReport, NumericPropagator, ORACLE_TOL};
use crate::propagator::{Dynamics, Propagator};
use crate::scenario::ScenarioConfig;

/// Columns of `observables.csv` after the time column(s).
pub const COLUMNS: [&str; 24] = [
    "P1",
    "P2",
    "P3",
    "varP1",
    "varP2",
    "varP3",
    "C_coh",
    "abs_chi12",
    "abs_chi13",
    "abs_chi23",
    "QM1",
    "QM2",
    "area1",
    "area2",
    "SL_atom",
    "SVN_atom",
    "MI_atom_field",
    "MI_modes",
    "autocorr",
    "Pd1_total",
    "Pd2_total",
    "M1_exp",
    "M2_exp",
    "E_exp",
];

/// Times at which `--oracle` compares the two propagators.
pub const ORACLE_TIMES: [f64; 6] = [0.0, 1.0, 5.0, 25.0, 125.0, 500.0];

/// Tail tolerance used for whole-packet oracle sweeps.
pub const ORACLE_TAIL_TOL: f64 = 1e-10;

/// Largest Fock index per mode kept in the partial-transpose test.
pub const PPT_MAX_PHOTONS: usize = 15;

/// Which propagator drives a simulation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DynamicsKind {
    Analytic,
    Numeric,
}

enum Engine {
    Analytic(Propagator),
    Numeric(NumericPropagator),
}

impl Engine {
    fn dynamics(&self) -> &dyn Dynamics {
        match self {
            Engine::Analytic(p) => p,
            Engine::Numeric(p) => p,
        }
    }
}

/// Everything measured at one time.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Observation {
    pub t: f64,
    pub populations: [f64; 3],
    pub variances: [f64; 3],
    pub coherence: f64,
    pub abs_chi: [f64; 3],
    /// `NaN` for a vacuum mode.
    pub mandel: [f64; 2],
    pub area: [f64; 2],
    pub entropies: EntanglementReport,
    pub autocorrelation: f64,
    pub dark_totals: [f64; 2],
    pub m1: f64,
    pub m2: f64,
    pub energy: f64,
    pub norm: f64,
    pub atomic_trace: f64,
    pub field_trace: f64,
}

impl Observation {
    /// Values in [`COLUMNS`] order.
    pub fn values(&self) -> [f64; 24] {
        let e = &self.entropies;
        [
            self.populations[0],
            self.populations[1],
            self.populations[2],
            self.variances[0],
            self.variances[1],
            self.variances[2],
            self.coherence,
            self.abs_chi[0],
            self.abs_chi[1],
            self.abs_chi[2],
            self.mandel[0],
            self.mandel[1],
            self.area[0],
            self.area[1],
            e.linear_atom,
            e.vn_atom,
            e.mi_atom_field,
            e.mi_modes,
            self.autocorrelation,
            self.dark_totals[0],
            self.dark_totals[1],
            self.m1,
            self.m2,
            self.energy,
        ]
    }
}

/// Matrix entry with explicit indices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub re: f64,
    pub im: f64,
}

fn entries(m: &CMatrix, offset: usize) -> Vec<Entry> {
    let mut out = Vec::with_capacity(m.dim() * m.dim());
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            let z = m[(i, j)];
            out.push(Entry {
                row: i + offset,
                col: j + offset,
                re: z.re,
                im: z.im,
            });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModeSnapshot {
    /// Fock states `0..support` are listed.
    pub support: usize,
    pub mean_photons: f64,
    pub mandel_q: Option<f64>,
    pub area_closed_form: f64,
    pub second_moment_closed_form: f64,
    pub second_moment_grid: Option<f64>,
    pub husimi_integral: Option<f64>,
    pub husimi_max: Option<f64>,
    pub density: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PptSnapshot {
    pub max_n1: usize,
    pub max_n2: usize,
    /// Population of the truncated block before renormalisation.
    pub retained_trace: f64,
    pub min_eigenvalue: f64,
}

/// Density matrices and phase-space data at one time.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Snapshot {
    pub t: f64,
    pub t_ns: f64,
    /// Levels are numbered `1..=3`; rows/cols here are `0..3`.
    pub atomic: Vec<Entry>,
    pub mode1: ModeSnapshot,
    pub mode2: ModeSnapshot,
    pub entropies: EntanglementReport,
    pub ppt: PptSnapshot,
    #[serde(skip)]
    pub husimi: Option<[PhaseGrid; 2]>,
}

/// Resolved parameters echoed next to every run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Manifest {
    pub scenario: String,
    pub atom: AtomSpec,
    pub intensity_ratio_1: f64,
    pub intensity_ratio_2: f64,
    pub detuning_multiple: f64,
    pub delta23_multiple: f64,
    pub mu13: f64,
    pub mu23: f64,
    pub delta13: f64,
    pub delta23: f64,
    pub omega_field1: f64,
    pub omega_field2: f64,
    pub nbar1: f64,
    pub nbar2: f64,
    pub phase1: f64,
    pub phase2: f64,
    pub zetas: [f64; 3],
    pub thetas: [f64; 3],
    /// `[re, im]` per level.
    pub gamma: [[f64; 2]; 3],
    pub tail_tol: f64,
    pub nu_max: [usize; 2],
    pub m0: usize,
    pub total_dim: usize,
    pub tail_mass: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
    pub time_unit: String,
    pub dynamics: DynamicsKind,
    pub entropy_log: String,
    pub columns: Vec<String>,
}

/// A scenario ready to be evaluated at arbitrary times.
pub struct Simulation {
    pub config: ScenarioConfig,
    pub model: Model,
    pub field: FieldAmplitudes,
    pub gamma: AtomAmplitudes,
    pub packet: PacketState,
    pub cutoffs: (usize, usize),
    engine: Engine,
}

impl Simulation {
    /// Closed-form dynamics when the detunings agree; the numeric propagator
    /// otherwise, but only if `allow_numeric`.
    pub fn new(config: &ScenarioConfig, allow_numeric: bool) -> Result<Self> {
        config.validate()?;
        let model = config.model()?;
        let field = config.field()?;
        let gamma = config.atom_amplitudes()?;
        let packet = build_packet(&field, &gamma, config.tail_tol)?;
        let cutoffs = photon_cutoffs(&field, config.tail_tol);
        let lattice = Arc::clone(packet.lattice());
        let engine = if model.coupling.equal_detuning() {
            Engine::Analytic(Propagator::new(&model, lattice)?)
        } else if allow_numeric {
            Engine::Numeric(NumericPropagator::new(&model, lattice)?)
        } else {
            return Err(Error::UnequalDetuning {
                delta13: model.coupling.delta13,
                delta23: model.coupling.delta23,
            });
        };
        Ok(Self {
            config: config.clone(),
            model,
            field,
            gamma,
            packet,
            cutoffs,
            engine,
        })
    }

    pub fn dynamics_kind(&self) -> DynamicsKind {
        match self.engine {
            Engine::Analytic(_) => DynamicsKind::Analytic,
            Engine::Numeric(_) => DynamicsKind::Numeric,
        }
    }

    pub fn dynamics(&self) -> &dyn Dynamics {
        self.engine.dynamics()
    }

    pub fn state_at(&self, t: f64) -> Result<PacketState> {
        self.engine.dynamics().evolve(&self.packet, t)
    }

    pub fn observe_state(&self, t: f64, psi: &PacketState) -> Result<Observation> {
        let rho_a = atomic_rdm(psi);
        let fd = field_rdm(psi);
        let modes = [fd.mode(Mode::One), fd.mode(Mode::Two)];
        let populations = rho_a.probabilities();
        let mut variances = [0.0; 3];
        for k in 0..3 {
            variances[k] = occupation_fluctuation(populations[k].clamp(0.0, 1.0))?;
        }
        let mut mandel = [f64::NAN; 2];
        for (slot, rho) in mandel.iter_mut().zip(&modes) {
            match mandel_q(rho) {
                Ok(q) => *slot = q,
                Err(Error::VacuumMode(_)) => {}
                Err(e) => return Err(e),
            }
        }
        let dark = dark_state_probabilities(psi);
        let conserved = conserved_expectations(psi, &self.model);
        Ok(Observation {
            t,
            populations,
            variances,
            coherence: coherence(&rho_a),
            abs_chi: [rho_a.chi12().norm(), rho_a.chi13().norm(), rho_a.chi23().norm()],
            mandel,
            area: [phase_area(&modes[0]), phase_area(&modes[1])],
            entropies: entanglement_report(&rho_a, &fd)?,
            autocorrelation: autocorrelation(&self.packet, psi)?,
            dark_totals: [dark.total1, dark.total2],
            m1: conserved.m1,
            m2: conserved.m2,
            energy: conserved.energy,
            norm: psi.norm_sqr().sqrt(),
            atomic_trace: rho_a.trace(),
            field_trace: fd.trace(),
        })
    }

    pub fn observe(&self, t: f64) -> Result<Observation> {
        let psi = self.state_at(t)?;
        self.observe_state(t, &psi)
    }

    /// Observations on `times`, evaluated in parallel and returned in order.
    pub fn observe_all(&self, times: &[f64]) -> Result<Vec<Observation>> {
        times.par_iter().map(|&t| self.observe(t)).collect()
    }

    /// Observations on the configured grid.
    pub fn time_series(&self) -> Result<Vec<Observation>> {
        self.observe_all(&self.config.times())
    }

    pub fn snapshot(&self, t: f64) -> Result<Snapshot> {
        let psi = self.state_at(t)?;
        let rho_a: AtomicDensity = atomic_rdm(&psi);
        let fd = field_rdm(&psi);
        let modes = [fd.mode(Mode::One), fd.mode(Mode::Two)];
        let spec = GridSpec::for_mean_photons(self.field.nbar1().max(self.field.nbar2()));
        let grids = if self.config.husimi {
            Some([husimi(&modes[0], spec), husimi(&modes[1], spec)])
        } else {
            None
        };
        let mode_snapshot = |i: usize| {
            let rho = trimmed(&modes[i]);
            let (mean, _) = crate::observables::photon_moments(&rho);
            let grid = grids.as_ref().map(|g| &g[i]);
            ModeSnapshot {
                support: rho.dim(),
                mean_photons: mean,
                mandel_q: mandel_q(&rho).ok(),
                area_closed_form: phase_area(&rho),
                second_moment_closed_form: second_moment(&rho),
                second_moment_grid: grid.map(PhaseGrid::second_moment),
                husimi_integral: grid.map(PhaseGrid::integral),
                husimi_max: grid.map(PhaseGrid::max),
                density: entries(&rho, 0),
            }
        };
        let ppt_cut = |rho: &CMatrix| (support_size(rho, 1e-8) - 1).min(PPT_MAX_PHOTONS);
        let (max_n1, max_n2) = (ppt_cut(&modes[0]), ppt_cut(&modes[1]));
        let block = fd.truncated(max_n1, max_n2);
        let retained = block.trace().re;
        let min_eigenvalue =
            partial_transpose_min_eigenvalue(&block.scale(1.0 / retained), max_n1 + 1, max_n2 + 1)?;
        Ok(Snapshot {
            t,
            t_ns: t * self.config.atom.time_unit_ns,
            atomic: entries(&rho_a.matrix(), 0),
            mode1: mode_snapshot(0),
            mode2: mode_snapshot(1),
            entropies: entanglement_report(&rho_a, &fd)?,
            ppt: PptSnapshot {
                max_n1,
                max_n2,
                retained_trace: retained,
                min_eigenvalue,
            },
            husimi: grids,
        })
    }

    pub fn manifest(&self) -> Manifest {
        let c = &self.config;
        let k = &self.model.coupling;
        Manifest {
            scenario: c.name.clone(),
            atom: c.atom.clone(),
            intensity_ratio_1: c.intensity_ratio_1,
            intensity_ratio_2: c.intensity_ratio_2,
            detuning_multiple: c.detuning_multiple,
            delta23_multiple: c.delta23_multiple,
            mu13: k.mu13,
            mu23: k.mu23,
            delta13: k.delta13,
            delta23: k.delta23,
            omega_field1: k.omega_field1,
            omega_field2: k.omega_field2,
            nbar1: c.nbar1,
            nbar2: c.nbar2,
            phase1: c.phase1,
            phase2: c.phase2,
            zetas: c.zetas,
            thetas: c.thetas,
            gamma: self.gamma.gamma.map(|g: C64| [g.re, g.im]),
            tail_tol: c.tail_tol,
            nu_max: [self.cutoffs.0, self.cutoffs.1],
            m0: self.packet.lattice().m0(),
            total_dim: self.packet.lattice().total_dim(),
            tail_mass: self.packet.tail_mass(),
            t_start: c.t_start,
            t_end: c.t_end,
            steps: c.steps,
            time_unit: "1/omega3".into(),
            dynamics: self.dynamics_kind(),
            entropy_log: "natural".into(),
            columns: COLUMNS.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Analytic-vs-numeric comparison on a packet built at
    /// [`ORACLE_TAIL_TOL`], at [`ORACLE_TIMES`] plus the end of the grid.
    pub fn oracle_report(&self, tolerance: f64) -> Result<ComparisonReport> {
        let tail = self.config.tail_tol.max(ORACLE_TAIL_TOL);
        let packet = build_packet(&self.field, &self.gamma, tail)?;
        let mut times: Vec<f64> = ORACLE_TIMES.to_vec();
        if !times.contains(&self.config.t_end) {
            times.push(self.config.t_end);
        }
        compare_evolutions(&self.model, &packet, &times, tolerance)
    }
}

/// Options beyond the scenario itself.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub oracle: bool,
    pub oracle_tolerance: f64,
    /// Extra snapshot times on top of those in the scenario.
    pub snapshots: Vec<f64>,
    /// Add a `t_ns` column.
    pub ns: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            oracle: false,
            oracle_tolerance: ORACLE_TOL,
            snapshots: Vec::new(),
            ns: false,
        }
    }
}

/// What a run produced.
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub rows: usize,
    pub files: Vec<PathBuf>,
    pub oracle: Option<ComparisonReport>,
}

/// Formats a float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV text for a series of observations.
pub fn csv_text(rows: &[Observation], ns_per_unit: Option<f64>) -> String {
    let mut out = String::with_capacity(rows.len() * 26 * 24);
    out.push('t');
    if ns_per_unit.is_some() {
        out.push_str(",t_ns");
    }
    for c in COLUMNS {
        out.push(',');
        out.push_str(c);
    }
    out.push('\n');
    for r in rows {
        out.push_str(&fmt_f64(r.t));
        if let Some(scale) = ns_per_unit {
            out.push(',');
            out.push_str(&fmt_f64(r.t * scale));
        }
        for v in r.values() {
            out.push(',');
            out.push_str(&fmt_f64(v));
        }
        out.push('\n');
    }
    out
}

fn write(path: PathBuf, contents: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    fs::write(&path, contents)?;
    files.push(path);
    Ok(())
}

/// Runs a scenario and writes `observables.csv`, `manifest.json`,
/// snapshot files and (with `--oracle`) `oracle_report.json` into `out`.
pub fn run_scenario(config: &ScenarioConfig, out: &Path, options: &RunOptions) -> Result<RunSummary> {
    let sim = Simulation::new(config, options.oracle)?;
    fs::create_dir_all(out)?;
    let mut files = Vec::new();

    let manifest = serde_json::to_string_pretty(&sim.manifest())?;
    write(out.join("manifest.json"), &(manifest + "\n"), &mut files)?;

    let rows = sim.time_series()?;
    let ns = options.ns.then_some(config.atom.time_unit_ns);
    write(out.join("observables.csv"), &csv_text(&rows, ns), &mut files)?;

    let mut snap_times = config.snapshots.clone();
    snap_times.extend(&options.snapshots);
    if !snap_times.is_empty() {
        let dir = out.join("snapshots");
        fs::create_dir_all(&dir)?;
        let snaps: Vec<Snapshot> = snap_times
            .par_iter()
            .map(|&t| sim.snapshot(t))
            .collect::<Result<_>>()?;
        for (i, s) in snaps.iter().enumerate() {
            let json = serde_json::to_string_pretty(s)?;
            write(dir.join(format!("snapshot_{i:03}.json")), &(json + "\n"), &mut files)?;
            if let Some(grids) = &s.husimi {
                for (m, g) in grids.iter().enumerate() {
                    write(dir.join(format!("husimi_mode{}_{i:03}.txt", m + 1)), &g.to_text(), &mut files)?;
                }
            }
        }
    }

    let mut oracle = None;
    if options.oracle {
        let report = sim.oracle_report(options.oracle_tolerance)?;
        let json = serde_json::to_string_pretty(&report)?;
        write(out.join("oracle_report.json"), &(json + "\n"), &mut files)?;
        if !report.passed {
            let deviation = report
                .max_block_deviation
                .max(report.max_state_distance)
                .max(report.max_spectral_deviation)
                .max(report.max_norm_drift);
            return Err(Error::OracleMismatch {
                deviation,
                tolerance: report.tolerance,
            });
        }
        oracle = Some(report);
    }
    Ok(RunSummary {
        rows: rows.len(),
        files,
        oracle,
    })
}
