#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use vartrack::solver::CnfFormula;

/// Clause as (positive mask, negative mask) over variable bits 0..n.
fn masks(clause: &[i32]) -> (u32, u32) {
    clause.iter().fold((0, 0), |(p, n), &l| {
        let bit = 1u32 << (l.unsigned_abs() - 1);
        if l > 0 {
            (p | bit, n)
        } else {
            (p, n | bit)
        }
    })
}

fn satisfies(assignment: u32, clause: (u32, u32)) -> bool {
    assignment & clause.0 != 0 || !assignment & clause.1 != 0
}

/// Every satisfying assignment, by truth-table enumeration.
pub fn models(f: &CnfFormula) -> Vec<u32> {
    assert!(f.num_vars <= 20);
    let cs: Vec<_> = f.clauses.iter().map(|c| masks(c)).collect();
    (0..1u32 << f.num_vars)
        .filter(|&a| cs.iter().all(|&c| satisfies(a, c)))
        .collect()
}

pub fn brute_force_sat(f: &CnfFormula) -> bool {
    !models(f).is_empty()
}

/// `f` implies `clause` iff every model of `f` satisfies it.
pub fn implied_by(models: &[u32], clause: &[i32]) -> bool {
    let c = masks(clause);
    models.iter().all(|&a| satisfies(a, c))
}

pub fn model_bits(model: &[bool]) -> u32 {
    model.iter().enumerate().fold(0, |acc, (i, &b)| acc | ((b as u32) << i))
}

/// Uniform random 3-CNF: three distinct variables per clause.
pub fn random_3cnf(rng: &mut StdRng, num_vars: usize, num_clauses: usize) -> CnfFormula {
    let clauses = (0..num_clauses)
        .map(|_| {
            sample(rng, num_vars, 3)
                .into_iter()
                .map(|v| {
                    let lit = v as i32 + 1;
                    if rng.gen_bool(0.5) {
                        lit
                    } else {
                        -lit
                    }
                })
                .collect()
        })
        .collect();
    CnfFormula::new(num_vars, clauses)
}

/// The corpus used by the oracle comparisons: `count` formulas with 4..=12
/// variables and clause/variable ratios drawn from [2, 6].
pub fn corpus(seed: u64, count: usize) -> Vec<CnfFormula> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(4..=12);
            let ratio: f64 = rng.gen_range(2.0..=6.0);
            let m = (ratio * n as f64).round() as usize;
            random_3cnf(&mut rng, n, m)
        })
        .collect()
}
