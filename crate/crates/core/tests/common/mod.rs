#![allow(dead_code)]

use lambda_cqed::initial_state::PacketState;
use lambda_cqed::state_space::{chi_sign, chi_to_fock};
use num_complex::Complex64 as C64;

/// Dense bare-basis wavefunction `psi[n1][n2][k]` of a packet.
pub struct FockState {
    pub d: usize,
    pub psi: Vec<C64>,
}

impl FockState {
    pub fn from_packet(p: &PacketState) -> Self {
        let d = p.lattice().m0() + 1;
        let mut psi = vec![C64::new(0.0, 0.0); d * d * 3];
        for (b, level, i) in p.lattice().slots() {
            let f = chi_to_fock(b, level).unwrap();
            psi[(f.n1 * d + f.n2) * 3 + level.index()] = p.amplitudes()[i] * chi_sign(level);
        }
        Self { d, psi }
    }

    pub fn get(&self, n1: usize, n2: usize, k: usize) -> C64 {
        self.psi[(n1 * self.d + n2) * 3 + k]
    }

    /// `Tr_F |psi><psi|`.
    pub fn atomic(&self) -> [[C64; 3]; 3] {
        let mut r = [[C64::new(0.0, 0.0); 3]; 3];
        for n1 in 0..self.d {
            for n2 in 0..self.d {
                for i in 0..3 {
                    for j in 0..3 {
                        r[i][j] += self.get(n1, n2, i) * self.get(n1, n2, j).conj();
                    }
                }
            }
        }
        r
    }

    /// Single-mode reduction, mode 1 or 2.
    pub fn mode(&self, mode: usize) -> Vec<Vec<C64>> {
        let d = self.d;
        let mut r = vec![vec![C64::new(0.0, 0.0); d]; d];
        for a in 0..d {
            for b in 0..d {
                for o in 0..d {
                    for k in 0..3 {
                        let (x, y) = if mode == 1 {
                            (self.get(a, o, k), self.get(b, o, k))
                        } else {
                            (self.get(o, a, k), self.get(o, b, k))
                        };
                        r[a][b] += x * y.conj();
                    }
                }
            }
        }
        r
    }

    pub fn overlap(&self, other: &FockState) -> C64 {
        self.psi.iter().zip(&other.psi).map(|(a, b)| a.conj() * b).sum()
    }
}

pub mod golden {
    use std::path::PathBuf;

    use serde_json::Value;

    pub const UPDATE_ENV: &str = "LAMBDA_CQED_UPDATE_GOLDEN";

    pub fn dir() -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
    }

    pub fn file_name(preset: &str, suffix: &str) -> String {
        format!("{}_{suffix}", preset.replace('/', "_"))
    }

    pub fn updating() -> bool {
        std::env::var_os(UPDATE_ENV).is_some()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a.is_nan() && b.is_nan()) || (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    /// Structural JSON equality with a relative tolerance on numbers.
    pub fn json_close(a: &Value, b: &Value, tol: f64, path: &str) -> Result<(), String> {
        match (a, b) {
            (Value::Number(x), Value::Number(y)) => {
                let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
                if close(x, y, tol) {
                    Ok(())
                } else {
                    Err(format!("{path}: {x} != {y}"))
                }
            }
            (Value::Array(x), Value::Array(y)) => {
                if x.len() != y.len() {
                    return Err(format!("{path}: length {} != {}", x.len(), y.len()));
                }
                for (i, (p, q)) in x.iter().zip(y).enumerate() {
                    json_close(p, q, tol, &format!("{path}[{i}]"))?;
                }
                Ok(())
            }
            (Value::Object(x), Value::Object(y)) => {
                let mut keys: Vec<_> = x.keys().chain(y.keys()).collect();
                keys.sort();
                keys.dedup();
                for k in keys {
                    match (x.get(k), y.get(k)) {
                        (Some(p), Some(q)) => json_close(p, q, tol, &format!("{path}.{k}"))?,
                        _ => return Err(format!("{path}.{k}: present on one side only")),
                    }
                }
                Ok(())
            }
            _ if a == b => Ok(()),
            _ => Err(format!("{path}: {a} != {b}")),
        }
    }

    /// Compares CSV text cell by cell.
    pub fn csv_close(a: &str, b: &str, tol: f64) -> Result<(), String> {
        let (la, lb): (Vec<_>, Vec<_>) = (a.lines().collect(), b.lines().collect());
        if la.len() != lb.len() {
            return Err(format!("{} rows != {} rows", la.len(), lb.len()));
        }
        if la[0] != lb[0] {
            return Err("header differs".into());
        }
        for (r, (x, y)) in la.iter().zip(&lb).enumerate().skip(1) {
            let header: Vec<_> = la[0].split(',').collect();
            for (c, (p, q)) in x.split(',').zip(y.split(',')).enumerate() {
                let (p, q): (f64, f64) = (p.parse().unwrap(), q.parse().unwrap());
                if !close(p, q, tol) {
                    return Err(format!("row {r}, column {}: {p} != {q}", header[c]));
                }
            }
        }
        Ok(())
    }

    /// Compares against the stored file, or rewrites it when updating.
    pub fn check_text(name: &str, actual: &str, cmp: impl Fn(&str, &str) -> Result<(), String>) -> Result<(), String> {
        let path = dir().join(name);
        if updating() {
            std::fs::create_dir_all(dir()).unwrap();
            std::fs::write(&path, actual).unwrap();
            return Ok(());
        }
        let stored = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        cmp(&stored, actual).map_err(|e| format!("{name}: {e}"))
    }
}
