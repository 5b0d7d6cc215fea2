//! Input generators shared by the benchmarks.

use rand::rngs::StdRng;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use vartrack::solver::CnfFormula;

/// Random 3-CNF with `num_vars` variables and `round(ratio * num_vars)` clauses.
pub fn random_3cnf(seed: u64, num_vars: usize, ratio: f64) -> CnfFormula {
    let mut rng = StdRng::seed_from_u64(seed);
    let m = (ratio * num_vars as f64).round() as usize;
    let clauses = (0..m)
        .map(|_| {
            sample(&mut rng, num_vars, 3)
                .into_iter()
                .map(|v| if rng.gen_bool(0.5) { v as i32 + 1 } else { -(v as i32 + 1) })
                .collect()
        })
        .collect();
    CnfFormula::new(num_vars, clauses)
}

/// `len` falses followed by a single true; `any` has to walk the whole list.
pub fn late_true(len: usize) -> Vec<bool> {
    let mut v = vec![false; len];
    v.push(true);
    v
}
