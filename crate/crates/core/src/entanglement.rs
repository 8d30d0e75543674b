//! Entropies, mutual information and the partial-transpose test.

use serde::Serialize;

use crate::eigen::{eigvalsh, CMatrix, SpectrumResult};
use crate::error::{Error, Result};
use crate::observables::{trimmed, AtomicDensity, FieldDensity, Mode};

/// Allowed `|tr rho - 1|`.
pub const TRACE_TOL: f64 = 1e-8;
/// Eigenvalues in `[-EIG_CLAMP, 0)` are treated as zero.
pub const EIG_CLAMP: f64 = 1e-10;

fn check_trace(rho: &CMatrix) -> Result<()> {
    let dev = (rho.trace().re - 1.0).abs();
    if dev > TRACE_TOL {
        return Err(Error::TraceDeviation(dev));
    }
    Ok(())
}

/// `S_L = 1 - tr(rho^2)`.
pub fn linear_entropy(rho: &CMatrix) -> Result<f64> {
    check_trace(rho)?;
    Ok(1.0 - rho.trace_product(rho).re)
}

/// `-sum lambda ln lambda` over a spectrum, with the clamp applied.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &l in eigenvalues {
        if l < -EIG_CLAMP {
            return Err(Error::NegativeEigenvalue(l));
        }
        if l > 0.0 {
            s -= l * l.ln();
        }
    }
    Ok(s)
}

/// `S_VN = -tr(rho ln rho)`, natural logarithm.
pub fn von_neumann_entropy(rho: &CMatrix) -> Result<f64> {
    check_trace(rho)?;
    entropy_of_spectrum(&eigvalsh(rho).eigenvalues)
}

/// Spectrum of a density matrix.
pub fn spectrum(rho: &CMatrix) -> SpectrumResult {
    eigvalsh(rho)
}

/// Joint entropy input for [`mutual_information`].
#[derive(Clone, Copy, Debug)]
pub enum Joint<'a> {
    Density(&'a CMatrix),
    /// The joint state is known to be pure.
    Pure,
}

/// `I = S(A) + S(B) - S(AB)` with von Neumann entropies.
pub fn mutual_information(rho_a: &CMatrix, rho_b: &CMatrix, joint: Joint<'_>) -> Result<f64> {
    let sa = von_neumann_entropy(rho_a)?;
    let sb = von_neumann_entropy(rho_b)?;
    let sab = match joint {
        Joint::Pure => 0.0,
        Joint::Density(rho) => {
            if rho.dim() != rho_a.dim() * rho_b.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "joint density is {0}x{0}, marginals are {1} and {2}",
                    rho.dim(),
                    rho_a.dim(),
                    rho_b.dim()
                )));
            }
            von_neumann_entropy(rho)?
        }
    };
    Ok(sa + sb - sab)
}

/// `rho^{T_2}` of a bipartite matrix with subsystem dimensions `(d1, d2)`:
/// `<j m| rho^{T_2} |k n> = <j n| rho |k m>`.
pub fn partial_transpose(rho: &CMatrix, d1: usize, d2: usize) -> Result<CMatrix> {
    if rho.dim() != d1 * d2 {
        return Err(Error::DimensionMismatch(format!(
            "matrix of size {} is not {d1} x {d2}",
            rho.dim()
        )));
    }
    let mut out = CMatrix::zeros(rho.dim());
    for j in 0..d1 {
        for k in 0..d1 {
            for m in 0..d2 {
                for n in 0..d2 {
                    out[(j * d2 + m, k * d2 + n)] = rho[(j * d2 + n, k * d2 + m)];
                }
            }
        }
    }
    Ok(out)
}

/// Smallest eigenvalue of `rho^{T_2}`; negative values witness entanglement.
pub fn partial_transpose_min_eigenvalue(rho: &CMatrix, d1: usize, d2: usize) -> Result<f64> {
    let pt = partial_transpose(rho, d1, d2)?;
    Ok(*eigvalsh(&pt).eigenvalues.last().expect("non-empty"))
}

/// Entanglement summary for a pure atom-field state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub linear_atom: f64,
    pub linear_field: f64,
    pub vn_atom: f64,
    pub vn_field: f64,
    pub vn_mode1: f64,
    pub vn_mode2: f64,
    /// `S(A) + S(F) - S(AF)` with `S(AF) = 0`.
    pub mi_atom_field: f64,
    /// `S(F1) + S(F2) - S(F)`.
    pub mi_modes: f64,
}

/// Von Neumann entropy of a single-mode density on its populated support.
pub fn mode_entropy(rho: &CMatrix) -> Result<f64> {
    entropy_of_spectrum(&eigvalsh(&trimmed(rho)).eigenvalues)
}

pub fn entanglement_report(rho_a: &AtomicDensity, field: &FieldDensity) -> Result<EntanglementReport> {
    let a = rho_a.matrix();
    // rho^F = F F^dagger shares its non-zero spectrum with F^dagger F
    let g = field.gram();
    let linear_atom = linear_entropy(&a)?;
    let linear_field = linear_entropy(&g)?;
    let vn_atom = von_neumann_entropy(&a)?;
    let vn_field = von_neumann_entropy(&g)?;
    let vn_mode1 = mode_entropy(&field.mode(Mode::One))?;
    let vn_mode2 = mode_entropy(&field.mode(Mode::Two))?;
    Ok(EntanglementReport {
        linear_atom,
        linear_field,
        vn_atom,
        vn_field,
        vn_mode1,
        vn_mode2,
        mi_atom_field: vn_atom + vn_field,
        mi_modes: vn_mode1 + vn_mode2 - vn_field,
    })
}
