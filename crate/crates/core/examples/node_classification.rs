//! Online labeling of the vertices of a grid graph whose labels form two
//! blocks, using the convex relaxation of the small-cut labelings.
//!
//! cargo run -p seqpred --example node_classification

use seqpred::graphopt::{
    build_laplacian, cut_value, relaxed_distance, relaxed_graph_phi, relaxed_rademacher,
    spectral_rad_bound, RelaxedSet, SolverOptions, WeightedGraph,
};
use seqpred::philib::{PenaltyConstant, RademacherMode};
use seqpred::stats::RunningStats;
use seqpred::transcript::replay;
use seqpred::{MonteCarlo, PlayoutConfig};

fn main() -> seqpred::Result<()> {
    let (rows, cols) = (4, 5);
    let graph = WeightedGraph::grid(rows, cols);
    let labels: Vec<i8> = (0..rows * cols)
        .map(|v| if v % cols < 2 { 1 } else { -1 })
        .collect();
    let kappa = cut_value(&build_laplacian(&graph), &labels)?;
    let set = RelaxedSet::from_graph(&graph, kappa)?;
    let opts = SolverOptions::default();

    let rad = relaxed_rademacher(
        &set,
        RademacherMode::MonteCarlo(MonteCarlo::new(5000, 1)),
        opts,
    )?;
    println!(
        "kappa {kappa}: Rademacher {:.4} +/- {:.4}, spectral bound {:.4}",
        rad.value(),
        rad.half_width(),
        spectral_rad_bound(&set)?
    );
    println!(
        "relaxed distance of the labels: {:.4}",
        relaxed_distance(&set, &labels, &opts)?.distance
    );

    let conservative = PenaltyConstant::analytic(rad.value() + rad.half_width())?;
    let phi = relaxed_graph_phi(&set, conservative, opts)?;
    let seeds = 0..20u64;
    let mut rates = RunningStats::default();
    for seed in seeds.clone() {
        let s = replay(&phi, PlayoutConfig::monte_carlo(20, seed), seed, &labels)?
            .summary
            .expect("full replay");
        rates.push(s.mu_hat);
    }
    let rate = rates.estimate();
    println!(
        "{} vertices, {} playout seeds: expected error rate {:.3} +/- {:.3}, guarantee {:.3}",
        labels.len(),
        seeds.count(),
        rate.mean,
        rate.half_width,
        phi.eval(&labels)
    );
    Ok(())
}
