//! Inputs shared by the benchmarks.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scsp_core::catalog::{generate_problem, ProblemShape};
use scsp_core::{Problem, Semiring};

/// A seeded problem whose constraints cover every variable, so solving it
/// enumerates `domain^vars` assignments.
pub fn covering_problem(s: &Semiring, vars: usize, domain: usize, seed: u64) -> Problem {
    let shape = ProblemShape {
        vars,
        domain,
        constraints: vars + 2,
        arity: 2,
        con: 2.min(vars),
        max_denominator: 16,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let p = generate_problem(&mut rng, s, &shape).expect("valid shape");
        if p.support().len() == vars {
            return p;
        }
    }
}
