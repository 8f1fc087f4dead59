//! Bulk classification of coefficient vectors with brute-force cross-checks.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::classify::classify_full;
use crate::field::Tower;
use crate::oracle::{is_planar_bruteforce, FnTable};
use crate::quad::CoeffVec;

pub const DEFAULT_BUDGET: f64 = 1e9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CensusError {
    #[error("estimated cost {cost:.3e} exceeds budget {budget:.3e}")]
    BudgetExceeded { cost: f64, budget: f64 },
    #[error("cross-check fraction must lie in [0, 1]")]
    BadFraction,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Samples(usize),
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CensusConfig {
    pub mode: Mode,
    /// Fraction of rows checked by brute force; classifier-planar rows are
    /// always checked.
    pub cross_check: f64,
    pub seed: u64,
    pub budget: f64,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig {
            mode: Mode::Samples(1000),
            cross_check: 0.05,
            seed: 0,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub c: String,
    pub coarse: String,
    pub family: String,
    pub class: String,
    pub epsilon: String,
    pub epsilon_square_class: String,
    pub verdict_class: String,
    pub verdict_brute: String,
    pub agree: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CensusSummary {
    pub total: usize,
    pub planar: usize,
    pub cross_checked: usize,
    pub disagreements: usize,
    pub errors: usize,
    pub per_class: BTreeMap<String, usize>,
    pub per_family: BTreeMap<String, usize>,
    pub cost: f64,
}

impl CensusSummary {
    pub fn ok(&self) -> bool {
        self.disagreements == 0 && self.errors == 0
    }
}

/// Work units: classification is charged q^2, brute force q^4.
pub fn estimate_cost(t: &Tower, n: f64, frac: f64) -> f64 {
    let q2 = t.q2() as f64;
    n * (q2 + frac * q2 * q2)
}

fn row_for(t: &Tower, idx: [u32; 4], check: bool) -> (CensusRow, bool, bool, bool) {
    let c = CoeffVec::from_indices(t, idx).expect("nonzero by construction");
    let cs = c.to_string();
    let bool_s = |b: bool| b.to_string();
    match classify_full(&c) {
        Ok(cl) => {
            let planar = cl.verdict.planar;
            let brute =
                (check || planar).then(|| is_planar_bruteforce(t, &FnTable::of_coeffs(&c)).planar);
            let agree = brute.map(|b| b == planar);
            let row = CensusRow {
                c: cs,
                coarse: format!("{:?}", cl.coarse),
                family: cl.family.map(|f| f.to_string()).unwrap_or_default(),
                class: cl.label.tag.to_string(),
                epsilon: cl.label.epsilon.map(|e| e.to_string()).unwrap_or_default(),
                epsilon_square_class: cl
                    .label
                    .epsilon_square_class()
                    .map(|s| format!("{s:?}"))
                    .unwrap_or_default(),
                verdict_class: bool_s(planar),
                verdict_brute: brute.map(bool_s).unwrap_or_default(),
                agree: agree.map(bool_s).unwrap_or_default(),
            };
            (row, brute.is_some(), agree == Some(false), false)
        }
        Err(e) => {
            let row = CensusRow {
                c: cs,
                coarse: String::new(),
                family: String::new(),
                class: format!("error: {e}"),
                epsilon: String::new(),
                epsilon_square_class: String::new(),
                verdict_class: String::new(),
                verdict_brute: String::new(),
                agree: String::new(),
            };
            (row, false, false, true)
        }
    }
}

/// Draws (c, cross-check flag) pairs sequentially from the seeded stream.
fn draw(t: &Tower, cfg: &CensusConfig) -> Vec<([u32; 4], bool)> {
    let q2 = t.q2();
    match cfg.mode {
        Mode::Exhaustive => {
            let base = q2 as u64;
            let f = cfg.cross_check;
            (1..base.pow(4))
                .map(|mut v| {
                    let i = v as f64;
                    let mut idx = [0u32; 4];
                    for slot in idx.iter_mut().rev() {
                        *slot = (v % base) as u32;
                        v /= base;
                    }
                    // evenly spaced checks, about n * f of them
                    (idx, ((i + 1.0) * f).floor() > (i * f).floor())
                })
                .collect()
        }
        Mode::Samples(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut out = Vec::with_capacity(n);
            while out.len() < n {
                let idx: [u32; 4] = std::array::from_fn(|_| rng.gen_range(0..q2));
                let pick = rng.gen::<f64>() < cfg.cross_check;
                if idx != [0; 4] {
                    out.push((idx, pick));
                }
            }
            out
        }
    }
}

pub fn run_census(
    t: &Tower,
    cfg: &CensusConfig,
) -> Result<(Vec<CensusRow>, CensusSummary), CensusError> {
    if !(0.0..=1.0).contains(&cfg.cross_check) {
        return Err(CensusError::BadFraction);
    }
    let n = match cfg.mode {
        Mode::Samples(n) => n as f64,
        Mode::Exhaustive => (t.q2() as f64).powi(4) - 1.0,
    };
    let cost = estimate_cost(t, n, cfg.cross_check);
    if cost > cfg.budget {
        return Err(CensusError::BudgetExceeded {
            cost,
            budget: cfg.budget,
        });
    }
    let mut jobs = draw(t, cfg);
    jobs.sort_by_key(|&(idx, _)| idx);
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(idx, check)| row_for(t, idx, check))
        .collect();

    let mut summary = CensusSummary {
        cost,
        ..Default::default()
    };
    let mut rows = Vec::with_capacity(results.len());
    for (row, checked, disagree, error) in results {
        summary.total += 1;
        summary.planar += usize::from(row.verdict_class == "true");
        summary.cross_checked += usize::from(checked);
        summary.disagreements += usize::from(disagree);
        summary.errors += usize::from(error);
        *summary.per_class.entry(row.class.clone()).or_default() += 1;
        if !row.family.is_empty() {
            *summary.per_family.entry(row.family.clone()).or_default() += 1;
        }
        rows.push(row);
    }
    Ok((rows, summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic() {
        let t = Tower::new(3, 1, 1, None).unwrap();
        let cfg = CensusConfig {
            mode: Mode::Samples(50),
            cross_check: 0.2,
            seed: 7,
            budget: DEFAULT_BUDGET,
        };
        let (a, sa) = run_census(&t, &cfg).unwrap();
        let (b, _) = run_census(&t, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(sa.total, 50);
        assert!(sa.ok());
    }

    #[test]
    fn budget_guard() {
        let t = Tower::new(3, 3, 1, None).unwrap();
        let cfg = CensusConfig {
            mode: Mode::Exhaustive,
            ..Default::default()
        };
        assert!(matches!(
            run_census(&t, &cfg),
            Err(CensusError::BudgetExceeded { .. })
        ));
    }
}
