use crate::circuit::oracle_prob_one;
use crate::error::Result;
use crate::fisher::{oracle_qfi, oracle_three_valued_fisher};
use crate::system::SmallSystem;
use qmean_core::{
    prob_one, quantum_fisher, three_valued_fisher, AmplifiedLevel, NoiseModel, Parity, RandomStream,
};

/// Pass thresholds of the verification grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Absolute, on the outcome-"1" probability.
    pub probability: f64,
    /// Relative, on the quantum Fisher information.
    pub qfi: f64,
    /// Relative, on the three-valued classical Fisher information.
    pub three_valued: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            probability: 1e-10,
            qfi: 1e-4,
            three_valued: 1e-5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub qubits: Vec<u32>,
    /// Random instances per qubit count.
    pub instances: u64,
    pub levels: Vec<u32>,
    pub survivals: Vec<f64>,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            qubits: vec![2, 3, 4],
            instances: 20,
            levels: (1..=6).collect(),
            survivals: vec![1.0, 0.9, 0.5],
            seed: 0,
            tolerances: Tolerances::default(),
        }
    }
}

/// One `(instance, alpha, p_q)` comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRow {
    pub n_qubits: u32,
    pub instance: u64,
    pub observable: String,
    pub theta_star: f64,
    pub alpha: u32,
    pub p_q: f64,
    pub prob_abs_error: f64,
    pub qfi_rel_error: f64,
    /// Even levels only.
    pub three_valued_rel_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
    pub max_prob_abs_error: f64,
    pub max_qfi_rel_error: f64,
    pub max_three_valued_rel_error: f64,
    pub tolerances: Tolerances,
}

impl VerifyReport {
    pub fn probability_pass(&self) -> bool {
        self.max_prob_abs_error < self.tolerances.probability
    }

    pub fn qfi_pass(&self) -> bool {
        self.max_qfi_rel_error < self.tolerances.qfi
    }

    pub fn three_valued_pass(&self) -> bool {
        self.max_three_valued_rel_error < self.tolerances.three_valued
    }

    pub fn passed(&self) -> bool {
        self.probability_pass() && self.qfi_pass() && self.three_valued_pass()
    }
}

fn rel(got: f64, want: f64) -> f64 {
    if got == want {
        0.0
    } else {
        ((got - want) / want).abs()
    }
}

/// Compares the simulated circuits with the closed forms on every
/// `(n, instance, alpha, p_q)` of the grid. Instance `i` on `n` qubits draws
/// from stream `(seed, n << 32 | i)`.
pub fn verify_grid(config: &VerifyConfig) -> Result<VerifyReport> {
    let mut rows = Vec::new();
    for &n in &config.qubits {
        for i in 0..config.instances {
            let mut stream = RandomStream::new(config.seed, (u64::from(n) << 32) | i);
            let sys = SmallSystem::random(n, &mut stream)?;
            let theta = sys.theta_star();
            for &p in &config.survivals {
                let noise = NoiseModel::new(p, n)?;
                for &a in &config.levels {
                    let level = AmplifiedLevel::new(a)?;
                    let prob = oracle_prob_one(&sys, level, &noise)?;
                    let qfi = oracle_qfi(&sys, level, &noise)?;
                    let three_valued_rel_error = match level.parity() {
                        Parity::Even => Some(rel(
                            oracle_three_valued_fisher(&sys, level, &noise)?,
                            three_valued_fisher(level, theta, &noise)?,
                        )),
                        Parity::Odd => None,
                    };
                    rows.push(VerifyRow {
                        n_qubits: n,
                        instance: i,
                        observable: sys.observable_label().to_owned(),
                        theta_star: theta,
                        alpha: a,
                        p_q: p,
                        prob_abs_error: (prob - prob_one(level, theta, &noise)?).abs(),
                        qfi_rel_error: rel(qfi, quantum_fisher(level, &noise)),
                        three_valued_rel_error,
                    });
                }
            }
        }
    }
    let max = |f: &dyn Fn(&VerifyRow) -> Option<f64>| rows.iter().filter_map(f).fold(0.0, f64::max);
    Ok(VerifyReport {
        max_prob_abs_error: max(&|r| Some(r.prob_abs_error)),
        max_qfi_rel_error: max(&|r| Some(r.qfi_rel_error)),
        max_three_valued_rel_error: max(&|r| r.three_valued_rel_error),
        tolerances: config.tolerances,
        rows,
    })
}
