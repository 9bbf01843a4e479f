//! Acceptance suite: one PASS/FAIL line per criterion, each checked against
//! an oracle computed here rather than by the library.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use seqpred::forecast::{FnForecaster, Forecast, Forecaster};
use seqpred::graphopt::{
    build_laplacian, relaxed_distance, relaxed_graph_phi, relaxed_rademacher, spectral_rad_bound,
    ExactConstraintSet, RelaxedSet, SolverOptions, WeightedGraph,
};
use seqpred::oracle::{
    adversary_run, average_error_identity, covariate_bound_check, game_value, playout_equivalence,
    uniform_unit, AdversaryKind, PredictorKind, RandomForecaster, MEAN_TOLERANCE,
};
use seqpred::philib::{
    aggregate_phi, class_rademacher, finite_set_phi, imbalance_phi, pattern_family, projection_phi,
    threshold, FiniteVertexSet, FunctionClass, PenaltyConstant, RademacherMode,
};
use seqpred::predictors::{
    multiclass_scores, waterfill, CovariateSampler, ExactPredictor, PlayoutConfig, PlayoutPredictor,
};
use seqpred::sequence::for_each_sequence;
use seqpred::{Alphabet, MonteCarlo, Outcome, PotentialFunction};

type Check = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn lib<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("library error: {e:?}"))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn sequences(alphabet: Alphabet, n: usize) -> Vec<Vec<Outcome>> {
    let mut out = Vec::new();
    for_each_sequence(alphabet, n, |_, y| out.push(y.to_vec()));
    out
}

/// Independent reference for the exact forecaster: the mean is formed by
/// brute force over all future tails and the mistake rate accumulated
/// round by round.
fn naive_mistakes(phi: &PotentialFunction, y: &[Outcome]) -> f64 {
    let n = y.len();
    let mut total = 0.0;
    for t in 0..n {
        let mut diff = 0.0;
        let tails = 1usize << (n - t - 1);
        let mut buf = y.to_vec();
        for tail in 0..tails {
            for s in 0..n - t - 1 {
                buf[t + 1 + s] = if tail >> (n - t - 2 - s) & 1 == 1 {
                    1
                } else {
                    -1
                };
            }
            buf[t] = -1;
            diff += phi.eval(&buf);
            buf[t] = 1;
            diff -= phi.eval(&buf);
        }
        let q = (n as f64 * diff / tails as f64).clamp(-1.0, 1.0);
        total += (1.0 - q * y[t] as f64) / 2.0;
    }
    total / n as f64
}

fn exact_mean_of_two_constants(n: usize) -> f64 {
    // E|eps_1 + ... + eps_n| / (2n)
    let s: f64 = (0..=n)
        .map(|k| binomial(n, k) * (2.0 * k as f64 - n as f64).abs())
        .sum();
    s / 2f64.powi(n as i32) / (2.0 * n as f64)
}

fn equality_at_half() -> Check {
    let mut worst = 0.0f64;
    let mut worst_naive = 0.0f64;
    for n in 2..=12 {
        let set = lib(FiniteVertexSet::new(
            Alphabet::Binary,
            vec![vec![1; n], vec![-1; n]],
        ))?;
        let rad = lib(set.rademacher(RademacherMode::Exhaustive))?;
        let oracle = exact_mean_of_two_constants(n);
        if (rad.value() - oracle).abs() > 1e-12 {
            return Err(format!(
                "n={n}: Rademacher {} vs closed form {oracle}",
                rad.value()
            ));
        }
        let phi = lib(finite_set_phi(&set, rad))?;
        let exact = lib(ExactPredictor::new(&phi))?;
        let mu = lib(exact.expected_mistakes_all())?;
        for (i, y) in sequences(Alphabet::Binary, n).iter().enumerate() {
            let target = phi.eval(y);
            worst = worst.max((mu[i] - target).abs());
            if n <= 10 {
                worst_naive = worst_naive.max((naive_mistakes(&phi, y) - target).abs());
            }
        }
    }
    ensure(
        worst <= 1e-9 && worst_naive <= 1e-9,
        format!("max |mu - phi| = {worst:.2e} (reference forecaster {worst_naive:.2e}), n = 2..12"),
    )
}

fn oracle_average<F: Forecaster + ?Sized>(f: &F) -> Result<f64, String> {
    let alphabet = f.alphabet();
    let n = f.horizon();
    let mut total = 0.0;
    let all = sequences(alphabet, n);
    for y in &all {
        let mut s = 0.0;
        for t in 0..n {
            let q = lib(f.forecast(&y[..t]))?;
            s += match q {
                Forecast::Mean(m) => (1.0 - m * y[t] as f64) / 2.0,
                Forecast::Distribution(p) => 1.0 - p[alphabet.digit(y[t]).expect("valid")],
            };
        }
        total += s / n as f64;
    }
    Ok(total / all.len() as f64)
}

fn average_error() -> Check {
    let mut worst = 0.0f64;
    let mut checked = 0;
    for n in 1..=10 {
        let imbalance = lib(imbalance_phi(n, 0.5))?;
        let patterns = lib(pattern_family(n, n.min(3)))?;
        let pattern_phi = lib(finite_set_phi(&patterns, PenaltyConstant::zero()))?;
        let zero = FnForecaster::new(Alphabet::Binary, n, |_| Forecast::Mean(0.0));
        let follow = FnForecaster::new(Alphabet::Binary, n, |p: &[Outcome]| {
            Forecast::Mean(p.last().map_or(0.0, |&v| 0.8 * v as f64))
        });
        let random = RandomForecaster::new(Alphabet::Binary, n, 17 + n as u64);
        let exact = lib(ExactPredictor::new(&imbalance))?;
        let playout = PlayoutPredictor::new(pattern_phi, PlayoutConfig::single_playout(5));
        let forecasters: [&dyn Forecaster; 5] = [&zero, &follow, &random, &exact, &playout];
        for f in forecasters {
            let a = lib(average_error_identity(f))?;
            let b = oracle_average(f)?;
            worst = worst.max((a - 0.5).abs()).max((b - 0.5).abs());
            checked += 1;
        }
    }
    let mut worst3 = 0.0f64;
    let a3 = Alphabet::Labels(3);
    for n in 1..=6 {
        let target: Vec<Outcome> = (0..n).map(|t| (t % 3 + 1) as Outcome).collect();
        let single = lib(FiniteVertexSet::new(a3, vec![target]))?;
        let phi = lib(finite_set_phi(&single, PenaltyConstant::zero()))?;
        let uniform = FnForecaster::new(a3, n, |_| Forecast::uniform(a3));
        let last = FnForecaster::new(a3, n, |p: &[Outcome]| {
            let mut d = vec![0.1; 3];
            d[p.last().map_or(0, |&v| v as usize - 1)] = 0.8;
            Forecast::Distribution(d)
        });
        let random = RandomForecaster::new(a3, n, 99);
        let exact = lib(ExactPredictor::new(&phi))?;
        let playout = PlayoutPredictor::new(phi.clone(), PlayoutConfig::single_playout(2));
        let forecasters: [&dyn Forecaster; 5] = [&uniform, &last, &random, &exact, &playout];
        for f in forecasters {
            let a = lib(average_error_identity(f))?;
            let b = oracle_average(f)?;
            worst3 = worst3.max((a - 2.0 / 3.0).abs()).max((b - 2.0 / 3.0).abs());
            checked += 1;
        }
    }
    ensure(
        worst <= 1e-12 && worst3 <= 1e-12,
        format!(
            "{checked} forecaster/horizon pairs; k=2 max dev {worst:.1e}, k=3 max dev {worst3:.1e}"
        ),
    )
}

fn imbalance_bound() -> Check {
    let mut worst = f64::NEG_INFINITY;
    for n in [4, 8, 12] {
        let phi = lib(imbalance_phi(n, 0.5))?;
        let mu = lib(lib(ExactPredictor::new(&phi))?.expected_mistakes_all())?;
        for (i, y) in sequences(Alphabet::Binary, n).iter().enumerate() {
            let frac = y.iter().filter(|&&v| v == 1).count() as f64 / n as f64;
            let bound = frac.min(1.0 - frac) + 0.5 / (n as f64).sqrt();
            worst = worst.max(mu[i] - bound);
        }
    }
    ensure(
        worst <= 1e-9,
        format!("max (mu - bound) = {worst:.3e} over n in {{4, 8, 12}}"),
    )
}

fn table_phi(alphabet: Alphabet, n: usize, table: Vec<f64>) -> PotentialFunction {
    PotentialFunction::new(n, alphabet, move |y| table[alphabet.encode(y)])
        .expect("valid potential")
}

fn eq12_objective(psi: &[f64], q: &[f64]) -> f64 {
    psi.iter()
        .zip(q)
        .map(|(p, x)| -x - p)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn random_simplex(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..k).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

fn game_value_and_waterfill() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    let mut instances = 0;
    for k in [2usize, 3, 4] {
        let alphabet = if k == 2 {
            Alphabet::Binary
        } else {
            Alphabet::Labels(k as u8)
        };
        for n in 1..=8 {
            let count = k.pow(n as u32);
            let table: Vec<f64> = (0..count).map(|_| rng.random::<f64>()).collect();
            let mean = table.iter().sum::<f64>() / count as f64;
            let report = lib(game_value(&table_phi(alphabet, n, table)))?;
            worst = worst.max((report.rel0 - ((1.0 - 1.0 / k as f64) - mean)).abs());
            instances += 1;
        }
    }
    if worst > 1e-12 {
        return Err(format!("max |Rel0 - ((1 - 1/k) - E phi)| = {worst:.2e}"));
    }

    let mut states = 0;
    let mut beaten = 0;
    let mut check_state = |psi: &[f64], rng: &mut ChaCha8Rng| -> Result<(), String> {
        let neg: Vec<f64> = psi.iter().map(|p| -p).collect();
        let q = lib(waterfill(&neg))?;
        let best = eq12_objective(psi, &q);
        for _ in 0..10_000 {
            let p = random_simplex(rng, psi.len());
            if eq12_objective(psi, &p) < best - 1e-12 {
                beaten += 1;
            }
        }
        states += 1;
        Ok(())
    };
    for k in [3u8, 4] {
        let a = Alphabet::Labels(k);
        let n = 4;
        let target: Vec<Outcome> = (0..n).map(|t| (t % k as usize + 1) as Outcome).collect();
        let other: Vec<Outcome> = (0..n)
            .map(|t| ((t + 1) % k as usize + 1) as Outcome)
            .collect();
        let phi = lib(finite_set_phi(
            &lib(FiniteVertexSet::new(a, vec![target, other]))?,
            PenaltyConstant::zero(),
        ))?;
        for t in 0..n {
            for p in sequences(a, t) {
                let psi = lib(multiclass_scores(&phi, &p, &PlayoutConfig::exhaustive()))?;
                check_state(&psi, &mut rng)?;
            }
        }
    }
    for _ in 0..50 {
        let k = rng.random_range(2..=6);
        let scale = if rng.random::<bool>() { 0.5 } else { 3.0 };
        let psi: Vec<f64> = (0..k).map(|_| scale * rng.random::<f64>()).collect();
        check_state(&psi, &mut rng)?;
    }
    ensure(
        beaten == 0,
        format!(
            "{instances} recursions, max identity gap {worst:.1e}; water-filling unbeaten in {states} states x 1e4 points ({beaten} beaten)"
        ),
    )
}

fn playout_and_greedy() -> Check {
    let mut lines = Vec::new();
    let imbalance = lib(imbalance_phi(10, 0.5))?;
    let patterns = lib(pattern_family(10, 3))?;
    let rad = lib(patterns.rademacher(RademacherMode::Exhaustive))?;
    let finite = lib(finite_set_phi(&patterns, rad))?;
    let prefix: [Outcome; 9] = [1, 1, -1, 1, -1, -1, 1, 1, 1];
    for (name, phi) in [("imbalance", &imbalance), ("finite set", &finite)] {
        for t in [0, 3, 6, 9] {
            let r = lib(playout_equivalence(
                phi,
                &prefix[..t],
                100_000,
                11 + t as u64,
            ))?;
            if !r.passed {
                return Err(format!(
                    "{name} at t={t}: exact {} vs playout {:?}",
                    r.exact_mean, r.playout
                ));
            }
            lines.push(r.deviation / (r.playout.half_width + MEAN_TOLERANCE));
        }
    }
    let phi = lib(imbalance_phi(12, 0.5))?;
    let r = lib(adversary_run(
        &phi,
        PredictorKind::Playout {
            config: PlayoutConfig::single_playout(0),
        },
        &AdversaryKind::AdaptiveGreedy,
        100_000,
        21,
    ))?;
    ensure(
        r.passed,
        format!(
            "8 playout checks (max deviation {:.2} of the allowed band); greedy margin {:.5} +- {:.5} over 1e5 runs",
            lines.iter().copied().fold(0.0, f64::max),
            r.margin.mean,
            r.margin.half_width
        ),
    )
}

struct GraphCase {
    set: RelaxedSet,
    relaxed: Vec<f64>,
    exact: ExactConstraintSet,
}

fn random_graph(rng: &mut ChaCha8Rng) -> WeightedGraph {
    let n = rng.random_range(4..=10);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < 0.45 {
                let w: f64 = rng.random_range(0.1..=1.0);
                let w = if rng.random::<f64>() < 0.2 { -w } else { w };
                edges.push((u, v, (w * 100.0).round() / 100.0));
            }
        }
    }
    WeightedGraph::new(n, edges).expect("valid random graph")
}

fn graph_cases() -> Result<Vec<GraphCase>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let opts = SolverOptions::default();
    let mut cases = Vec::new();
    for i in 0..20 {
        let g = random_graph(&mut rng);
        let l = build_laplacian(&g);
        let n = g.vertex_count();
        let total: f64 = g.edges().iter().map(|e| e.2.abs()).sum();
        let kappa = if i % 5 == 0 {
            0.0
        } else {
            (rng.random_range(0.05..0.6) * 4.0 * total * 100.0).round() / 100.0
        };
        let set = lib(RelaxedSet::new(l, kappa))?;
        let ys = sequences(Alphabet::Binary, n);
        let sols = ys
            .par_iter()
            .map(|y| relaxed_distance(&set, y, &opts))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| format!("solver: {e}"))?;
        let bound = kappa + 1e-6 * kappa.max(1.0);
        for (y, s) in ys.iter().zip(&sols) {
            let q = set.laplacian().quadratic_form(&s.w);
            if s.w.iter().any(|x| x.abs() > 1.0) || q > bound {
                return Err(format!(
                    "graph {i}: infeasible solution for {y:?}: Q = {q}, kappa = {kappa}"
                ));
            }
        }
        let exact = lib(ExactConstraintSet::new(&set))?;
        cases.push(GraphCase {
            relaxed: sols.iter().map(|s| s.distance).collect(),
            set,
            exact,
        });
    }
    Ok(cases)
}

fn graph_mistake_bound(cases: &[GraphCase]) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_relax = f64::NEG_INFINITY;
    let mut worst_margin = f64::NEG_INFINITY;
    let mut worst_mc_margin = f64::NEG_INFINITY;
    for (gi, case) in cases.iter().enumerate() {
        let n = case.set.dimension();
        let ys = sequences(Alphabet::Binary, n);
        for (y, d) in ys.iter().zip(&case.relaxed) {
            worst_relax = worst_relax.max(d - case.exact.distance(y));
        }
        let rad_exact = 0.5 - case.relaxed.iter().sum::<f64>() / ys.len() as f64;
        let rad_mc = lib(relaxed_rademacher(
            &case.set,
            RademacherMode::MonteCarlo(MonteCarlo::new(10_000, gi as u64)),
            SolverOptions::default(),
        ))?;
        let phi = lib(lib(relaxed_graph_phi(
            &case.set,
            lib(PenaltyConstant::analytic(rad_exact.max(0.0)))?,
            SolverOptions::default(),
        ))?
        .tabulate())?;
        let mu = lib(lib(ExactPredictor::new(&phi))?.expected_mistakes_all())?;
        for s in 0..100 {
            let index = rng.random_range(0..ys.len());
            let y = &ys[index];
            let benchmark = case.exact.distance(y) + rad_mc.value() + rad_mc.half_width();
            worst_margin = worst_margin.max(mu[index] - benchmark);
            let plan = MonteCarlo::new(200, (gi * 1000 + s) as u64);
            let est = lib(plan.run(|r| {
                let p =
                    PlayoutPredictor::new(phi.clone(), PlayoutConfig::single_playout(r.random()));
                seqpred::expected_mistakes(&p, y).unwrap_or(f64::NAN)
            }))?;
            worst_mc_margin = worst_mc_margin.max(est.mean - est.half_width - benchmark);
        }
    }
    ensure(
        worst_relax <= 1e-6 && worst_margin <= 1e-6 && worst_mc_margin <= 1e-6,
        format!(
            "20 graphs x 100 sequences: max (mu - bound) exact {worst_margin:.3e}, sampled {worst_mc_margin:.3e}; max (relaxed - exact distance) {worst_relax:.1e}"
        ),
    )
}

fn spectral_bound(cases: &[GraphCase]) -> Check {
    let edge = lib(RelaxedSet::from_graph(&WeightedGraph::path(2), 4.0))?;
    let closed = {
        let n = 2.0f64;
        let kappa = 4.0;
        let eig_m = [1.0 / (2.0 * n), 1.0 / (2.0 * n) + 2.0 / (2.0 * kappa)];
        (eig_m.iter().map(|x| 1.0 / x).sum::<f64>()).sqrt() / (2.0 * n)
    };
    let b = lib(spectral_rad_bound(&edge))?;
    if (b - closed).abs() > 1e-10 || (b - 6f64.sqrt() / 4.0).abs() > 1e-10 {
        return Err(format!("single edge: {b} vs {closed}"));
    }
    let mut min_slack = f64::INFINITY;
    let mut tested = 0;
    for (gi, case) in cases.iter().enumerate() {
        if case.set.kappa() == 0.0 {
            continue;
        }
        let bound = lib(spectral_rad_bound(&case.set))?;
        let rad_exact = 0.5 - case.relaxed.iter().sum::<f64>() / case.relaxed.len() as f64;
        let rad_mc = lib(relaxed_rademacher(
            &case.set,
            RademacherMode::MonteCarlo(MonteCarlo::new(10_000, 100 + gi as u64)),
            SolverOptions::default(),
        ))?;
        min_slack = min_slack
            .min(bound - rad_exact)
            .min(bound - (rad_mc.value() - rad_mc.half_width()));
        tested += 1;
    }
    ensure(
        min_slack >= -1e-9,
        format!("single edge bound {b:.12} matches closed form; {tested} graphs, min (bound - Rad) = {min_slack:.4}"),
    )
}

/// Best value of `<w, y>` once the free coordinates `w_0..w_{n-2}` are
/// fixed: the last coordinate ranges over the interval cut out of `[-1, 1]`
/// by the quadratic budget.
fn best_last_coordinate(set: &RelaxedSet, y: &[Outcome], free: &[f64]) -> Option<f64> {
    let n = y.len();
    let l = set.laplacian();
    let last = n - 1;
    let a = l.entry(last, last);
    let b: f64 = (0..last).map(|j| l.entry(last, j) * free[j]).sum();
    let c: f64 = (0..last)
        .flat_map(|i| (0..last).map(move |j| (i, j)))
        .map(|(i, j)| l.entry(i, j) * free[i] * free[j])
        .sum();
    let budget = set.kappa() - c;
    let (lo, hi) = if a > 0.0 {
        let disc = b * b + a * budget;
        if disc < 0.0 {
            return None;
        }
        let r = disc.sqrt();
        ((-b - r) / a, (-b + r) / a)
    } else if budget >= 0.0 {
        (-1.0, 1.0)
    } else {
        return None;
    };
    let (lo, hi) = (lo.max(-1.0), hi.min(1.0));
    if lo > hi {
        return None;
    }
    let w_last = if y[last] == 1 { hi } else { lo };
    Some(free.iter().zip(y).map(|(w, &v)| w * v as f64).sum::<f64>() + w_last * y[last] as f64)
}

/// Grid search on a 0.01 lattice over all but the last coordinate, followed
/// by lattice refinement around the incumbent, halving the step whenever
/// no lattice point improves.
fn grid_optimum(set: &RelaxedSet, y: &[Outcome]) -> f64 {
    let n = y.len();
    let free = n - 1;
    let steps: usize = 201;
    let mut best = f64::NEG_INFINITY;
    let mut best_w = vec![0.0; free];
    let mut w = vec![0.0; free];
    for idx in 0..steps.pow(free as u32) {
        let mut r = idx;
        for wi in w.iter_mut() {
            *wi = -1.0 + 0.01 * (r % steps) as f64;
            r /= steps;
        }
        if let Some(o) = best_last_coordinate(set, y, &w) {
            if o > best {
                best = o;
                best_w.copy_from_slice(&w);
            }
        }
    }
    let half = 10i64;
    let side = (2 * half + 1) as usize;
    let mut h = 0.01;
    while h > 1e-12 {
        let center = best_w.clone();
        let mut improved = false;
        for idx in 0..side.pow(free as u32) {
            let mut r = idx;
            for (i, wi) in w.iter_mut().enumerate() {
                *wi = (center[i] + h * ((r % side) as i64 - half) as f64).clamp(-1.0, 1.0);
                r /= side;
            }
            if let Some(o) = best_last_coordinate(set, y, &w) {
                if o > best + 1e-15 {
                    best = o;
                    best_w.copy_from_slice(&w);
                    improved = true;
                }
            }
        }
        if !improved {
            h /= 2.0;
        }
    }
    0.5 - best / (2.0 * n as f64)
}

/// Optimum by enumerating which coordinates sit at `-1`, at `+1`, or are
/// free. Free coordinates maximize a linear function over an ellipsoid,
/// which has a closed-form maximizer when the free block is definite.
fn active_set_optimum(set: &RelaxedSet, y: &[Outcome]) -> f64 {
    let n = y.len();
    let l = set.laplacian().to_dense();
    let kappa = set.kappa();
    let feasible_tol = 1e-9 * kappa.max(1.0);
    let mut best = f64::NEG_INFINITY;
    for code in 0..3usize.pow(n as u32) {
        let mut w = vec![0.0; n];
        let mut free = Vec::new();
        let mut r = code;
        for (i, wi) in w.iter_mut().enumerate() {
            match r % 3 {
                0 => *wi = -1.0,
                1 => *wi = 1.0,
                _ => free.push(i),
            }
            r /= 3;
        }
        if !free.is_empty() {
            let fixed: Vec<usize> = (0..n).filter(|i| !free.contains(i)).collect();
            let m = free.len();
            let a = nalgebra::DMatrix::from_fn(m, m, |i, j| l[(free[i], free[j])]);
            let b = nalgebra::DVector::from_fn(m, |i, _| {
                fixed.iter().map(|&j| l[(free[i], j)] * w[j]).sum::<f64>()
            });
            let c: f64 = fixed
                .iter()
                .flat_map(|&i| fixed.iter().map(move |&j| (i, j)))
                .map(|(i, j)| l[(i, j)] * w[i] * w[j])
                .sum();
            let Some(chol) = a.clone().cholesky() else {
                continue;
            };
            let yf = nalgebra::DVector::from_fn(m, |i, _| y[free[i]] as f64);
            let center = -chol.solve(&b);
            let radius2 = kappa - c + b.dot(&chol.solve(&b));
            if radius2 < 0.0 {
                continue;
            }
            let ay = chol.solve(&yf);
            let scale = (radius2 / yf.dot(&ay)).sqrt();
            for (k, &i) in free.iter().enumerate() {
                w[i] = center[k] + scale * ay[k];
            }
        }
        let in_box = w.iter().all(|x| x.abs() <= 1.0 + 1e-12);
        let q = set.laplacian().quadratic_form(&w);
        if in_box && q <= kappa + feasible_tol {
            best = best.max(w.iter().zip(y).map(|(a, &b)| a * b as f64).sum());
        }
    }
    0.5 - best / (2.0 * n as f64)
}

fn solver_against_grid() -> Check {
    let mut instances: Vec<RelaxedSet> = Vec::new();
    for kappa in [0.0, 0.5, 1.0, 2.0, 3.0] {
        instances.push(lib(RelaxedSet::from_graph(&WeightedGraph::path(2), kappa))?);
        instances.push(lib(RelaxedSet::from_graph(
            &lib(WeightedGraph::new(2, vec![(0, 1, -0.6)]))?,
            kappa,
        ))?);
    }
    let triangles = [
        vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)],
        vec![(0, 1, 1.0), (1, 2, 0.5)],
        vec![(0, 1, -1.0), (1, 2, 0.7), (0, 2, 0.3)],
        vec![(0, 1, -1.0), (1, 2, -1.0), (0, 2, -1.0)],
    ];
    for edges in &triangles {
        for kappa in [0.0, 0.7, 2.0, 5.0] {
            instances.push(lib(RelaxedSet::from_graph(
                &lib(WeightedGraph::new(3, edges.clone()))?,
                kappa,
            ))?);
        }
    }
    let opts = SolverOptions::default();
    let results = instances
        .par_iter()
        .map(|set| {
            let mut worst = 0.0f64;
            let mut worst_grid = f64::NEG_INFINITY;
            let mut worst_feas = f64::NEG_INFINITY;
            for y in sequences(Alphabet::Binary, set.dimension()) {
                let s = relaxed_distance(set, &y, &opts).map_err(|e| e.to_string())?;
                worst = worst.max((s.distance - active_set_optimum(set, &y)).abs());
                worst_grid = worst_grid.max(s.distance - grid_optimum(set, &y));
                let excess = set.laplacian().quadratic_form(&s.w) - set.kappa();
                let box_ok = s.w.iter().all(|x| (-1.0..=1.0).contains(x));
                if !box_ok {
                    return Err(format!("solution leaves the box: {:?}", s.w));
                }
                worst_feas = worst_feas.max(excess / set.kappa().max(1.0));
            }
            Ok((worst, worst_grid, worst_feas))
        })
        .collect::<Result<Vec<_>, String>>()?;
    let worst = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let grid = results
        .iter()
        .map(|r| r.1)
        .fold(f64::NEG_INFINITY, f64::max);
    let feas = results
        .iter()
        .map(|r| r.2)
        .fold(f64::NEG_INFINITY, f64::max);
    ensure(
        worst <= 1e-4 && grid <= 1e-6 && feas <= 1e-6,
        format!(
            "{} instances: max |solver - active-set optimum| = {worst:.2e}, max (solver - grid search) = {grid:.1e}, max relative budget excess {feas:.1e}",
            instances.len()
        ),
    )
}

fn covariate_realizable() -> Check {
    let n = 50;
    let class = lib(FunctionClass::new(
        [0.2, 0.4, 0.6, 0.8].iter().map(|&a| threshold(a)).collect(),
    ))?;
    let rad = lib(class_rademacher(
        &class,
        n,
        uniform_unit,
        MonteCarlo::new(10_000, 1),
    ))?;
    let penalty = lib(PenaltyConstant::analytic(rad.value() + rad.half_width()))?;
    let phi = lib(projection_phi(&class, n, penalty))?;
    let sampler = CovariateSampler::iid(9, uniform_unit);
    let target = threshold(0.6);
    let r = lib(covariate_bound_check(
        &phi,
        &sampler,
        |_, x, _| target(x),
        PlayoutConfig::single_playout(0),
        10_000,
        3,
    ))?;
    let margin = r.margin.ok_or("condition on the mean failed")?;
    let realizable = (r.mean_phi - penalty.value()).abs() < 1e-12;
    ensure(
        r.condition_holds && realizable && margin.mean <= margin.half_width,
        format!(
            "mistakes {:.4} vs E phi {:.4} (= penalty {:.4}); margin {:.4} +- {:.4}",
            r.mean_mistakes,
            r.mean_phi,
            penalty.value(),
            margin.mean,
            margin.half_width
        ),
    )
}

fn aggregation() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut worst = f64::INFINITY;
    for pool in 0..50 {
        let n = rng.random_range(2..=14);
        let size = rng.random_range(1..=8);
        let mut experts = Vec::with_capacity(size);
        for e in 0..size {
            if e % 3 == 2 {
                let members: Vec<Vec<Outcome>> = (0..3)
                    .map(|_| {
                        (0..n)
                            .map(|_| if rng.random::<bool>() { 1 } else { -1 })
                            .collect()
                    })
                    .collect();
                let set = lib(FiniteVertexSet::dedup_from(Alphabet::Binary, members))?;
                let rad = lib(set.rademacher(RademacherMode::Exhaustive))?;
                experts.push(lib(finite_set_phi(&set, rad))?);
            } else {
                let w: Vec<Outcome> = (0..n)
                    .map(|_| if rng.random::<bool>() { 1 } else { -1 })
                    .collect();
                let set = lib(FiniteVertexSet::new(Alphabet::Binary, vec![w]))?;
                experts.push(lib(finite_set_phi(&set, PenaltyConstant::zero()))?);
            }
        }
        let agg = lib(aggregate_phi(&experts, 0.5))?;
        let mut total = 0.0;
        let mut expected_penalty_ok = true;
        for_each_sequence(Alphabet::Binary, n, |_, y| {
            let v = agg.eval(y);
            let min = experts
                .iter()
                .map(|e| e.eval(y))
                .fold(f64::INFINITY, f64::min);
            let c = ((size as f64).ln() / (2.0 * n as f64)).sqrt();
            expected_penalty_ok &= (v - min - c).abs() < 1e-12;
            total += v;
        });
        if !expected_penalty_ok {
            return Err(format!(
                "pool {pool}: aggregate differs from min + sqrt(ln N / 2n)"
            ));
        }
        worst = worst.min(total / 2f64.powi(n as i32));
    }
    ensure(
        worst >= 0.5 - 1e-12,
        format!("50 pools, n <= 14, N <= 8: min E phi = {worst:.5}"),
    )
}

fn main() {
    let mut failed = 0;
    let mut run = |name: &str, check: &dyn Fn() -> Check| {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS  {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} [{secs:.1}s]");
            }
        }
    };
    run(
        "exact predictor attains phi when E phi = 1/2",
        &equality_at_half,
    );
    run(
        "average mistake rate over all sequences is 1 - 1/k",
        &average_error,
    );
    run(
        "imbalance potential bounds the exact predictor",
        &imbalance_bound,
    );
    run(
        "game value recursion and water-filling optimality",
        &game_value_and_waterfill,
    );
    run(
        "single playouts match exact means; greedy adversary",
        &playout_and_greedy,
    );
    let cases = graph_cases();
    match &cases {
        Ok(cases) => {
            run("relaxed graph potential mistake bound", &|| {
                graph_mistake_bound(cases)
            });
            run(
                "spectral bound dominates the relaxed Rademacher average",
                &|| spectral_bound(cases),
            );
        }
        Err(e) => {
            run("relaxed graph potential mistake bound", &|| Err(e.clone()));
            run(
                "spectral bound dominates the relaxed Rademacher average",
                &|| Err(e.clone()),
            );
        }
    }
    run(
        "relaxed solver matches independent optima and stays feasible",
        &solver_against_grid,
    );
    run(
        "covariate forecaster against a realizable nature",
        &covariate_realizable,
    );
    run("aggregated potentials keep mean at least 1/2", &aggregation);
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
