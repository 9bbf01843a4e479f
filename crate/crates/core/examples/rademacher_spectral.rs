//! Rademacher averages of the relaxed labeling set on a cycle, by
//! enumeration and by sampling, against the eigenvalue bound.
//!
//! cargo run -p seqpred --example rademacher_spectral

use seqpred::graphopt::{
    relaxed_rademacher, spectral_rad_bound, RelaxedSet, SolverOptions, WeightedGraph,
};
use seqpred::philib::RademacherMode;
use seqpred::MonteCarlo;

fn main() -> seqpred::Result<()> {
    let graph = WeightedGraph::cycle(10)?;
    let opts = SolverOptions::default();
    println!(
        "{:>6} {:>10} {:>10} {:>10}",
        "kappa", "exhaust", "sampled", "spectral"
    );
    for kappa in [1.0, 4.0, 16.0] {
        let set = RelaxedSet::from_graph(&graph, kappa)?;
        let exact = relaxed_rademacher(&set, RademacherMode::Exhaustive, opts)?;
        let mc = relaxed_rademacher(
            &set,
            RademacherMode::MonteCarlo(MonteCarlo::new(500, 2)),
            opts,
        )?;
        let bound = spectral_rad_bound(&set)?;
        println!(
            "{kappa:>6} {:>10.4} {:>10.4} {bound:>10.4}",
            exact.value(),
            mc.value()
        );
    }
    Ok(())
}
