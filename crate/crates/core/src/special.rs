//! Log-factorials and Poisson weights.

/// Table of `ln(n!)` for `n = 0..len`.
#[derive(Clone, Debug)]
pub struct LnFactorial {
    table: Vec<f64>,
}

impl LnFactorial {
    pub fn new(max_n: usize) -> Self {
        let mut table = Vec::with_capacity(max_n + 1);
        let mut acc = 0.0;
        table.push(0.0);
        for n in 1..=max_n {
            acc += (n as f64).ln();
            table.push(acc);
        }
        Self { table }
    }

    pub fn get(&self, n: usize) -> f64 {
        self.table[n]
    }

    pub fn max_n(&self) -> usize {
        self.table.len() - 1
    }
}

/// `e^{-nbar} nbar^k / k!`, evaluated in the log domain.
pub fn poisson_weight(nbar: f64, k: usize, lnf: &LnFactorial) -> f64 {
    if nbar == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (-nbar + k as f64 * nbar.ln() - lnf.get(k)).exp()
}

/// Poisson tail `sum_{k > nu} P(k)` for every `nu` in `0..=k_max`, summed
/// from the far end so small tails keep full relative precision.
pub fn poisson_tails(nbar: f64, k_max: usize) -> Vec<f64> {
    let lnf = LnFactorial::new(k_max + 1);
    let mut tails = vec![0.0; k_max + 1];
    let mut acc = 0.0;
    for nu in (0..=k_max).rev() {
        tails[nu] = acc;
        acc += poisson_weight(nbar, nu, &lnf);
    }
    tails
}
