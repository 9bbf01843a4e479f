use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seqpred::philib::{finite_set_phi, imbalance_phi, FiniteVertexSet, PenaltyConstant};
use seqpred::predictors::{
    binary_mean, covariate_forecast, draw, minimax_objective, multiclass_forecast, waterfill,
    CovariateSampler,
};
use seqpred::sequence::for_each_sequence;
use seqpred::{
    check_stability, expected_mistakes, mean_phi, Alphabet, CheckMode, CovariatePotential,
    ExactPredictor, FnForecaster, Forecast, MeanMode, MonteCarlo, Outcome, PlayoutConfig,
    PotentialFunction,
};

fn hamming_to(target: Vec<Outcome>) -> PotentialFunction {
    let n = target.len();
    PotentialFunction::new(n, Alphabet::Binary, move |y| {
        y.iter().zip(&target).filter(|(a, b)| a != b).count() as f64 / n as f64
    })
    .unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn stability_examples() {
    let r = check_stability(&hamming_to(vec![1, 1]), CheckMode::Exhaustive).unwrap();
    assert!(r.max_violation.abs() < 1e-15);

    let first = PotentialFunction::new(2, Alphabet::Binary, |y| y[0] as f64).unwrap();
    let r = check_stability(&first, CheckMode::Exhaustive).unwrap();
    assert!(close(r.max_violation, 1.5, 1e-15));

    let r = check_stability(&imbalance_phi(4, 0.5).unwrap(), CheckMode::Exhaustive).unwrap();
    assert!(r.max_violation < 1e-12);
}

#[test]
fn sampled_stability_never_exceeds_exhaustive() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let table: Vec<f64> = (0..256).map(|_| rng.random::<f64>() * 0.3).collect();
        let phi = PotentialFunction::new(8, Alphabet::Binary, move |y| {
            table[Alphabet::Binary.encode(y)]
        })
        .unwrap();
        let full = check_stability(&phi, CheckMode::Exhaustive).unwrap();
        let sampled = check_stability(
            &phi,
            CheckMode::Sampled {
                samples: 40,
                seed: rng.random(),
            },
        )
        .unwrap();
        assert!(sampled.max_violation <= full.max_violation);
    }
}

#[test]
fn mean_examples() {
    let m = mean_phi(&hamming_to(vec![1]), MeanMode::Exhaustive).unwrap();
    assert_eq!(m.mean, 0.5);
    assert_eq!(m.half_width, 0.0);

    let m = mean_phi(&imbalance_phi(2, 0.5).unwrap(), MeanMode::Exhaustive).unwrap();
    assert!(close(m.mean, 0.25 + 0.5 / 2f64.sqrt(), 1e-15));

    for n in [1, 5, 9] {
        let c = PotentialFunction::constant(n, Alphabet::Binary, 0.5).unwrap();
        assert_eq!(mean_phi(&c, MeanMode::Exhaustive).unwrap().mean, 0.5);
    }

    let m = mean_phi(
        &imbalance_phi(10, 0.5).unwrap(),
        MeanMode::MonteCarlo(MonteCarlo::new(20_000, 1)),
    )
    .unwrap();
    let exact = mean_phi(&imbalance_phi(10, 0.5).unwrap(), MeanMode::Exhaustive).unwrap();
    assert!(m.contains(exact.mean));
}

#[test]
fn mean_is_independent_of_enumeration_order() {
    let phi = imbalance_phi(9, 0.5).unwrap();
    let values = phi.values().unwrap();
    let mut reversed = values.clone();
    reversed.reverse();
    let forward: f64 = values.iter().sum::<f64>() / values.len() as f64;
    let backward: f64 = reversed.iter().sum::<f64>() / values.len() as f64;
    let m = mean_phi(&phi, MeanMode::Exhaustive).unwrap().mean;
    assert!(close(forward, m, 1e-14) && close(backward, m, 1e-14));
}

#[test]
fn expected_mistakes_examples() {
    let zero = FnForecaster::new(Alphabet::Binary, 4, |_| Forecast::Mean(0.0));
    assert_eq!(expected_mistakes(&zero, &[1, -1, -1, 1]).unwrap(), 0.5);

    let y = [1, -1, 1, 1];
    let copy = FnForecaster::new(Alphabet::Binary, 4, move |p: &[Outcome]| {
        Forecast::Mean(y[p.len()] as f64)
    });
    assert_eq!(expected_mistakes(&copy, &y).unwrap(), 0.0);

    let half = FnForecaster::new(Alphabet::Binary, 1, |_| Forecast::Mean(0.5));
    assert_eq!(expected_mistakes(&half, &[1]).unwrap(), 0.25);

    let bad = FnForecaster::new(Alphabet::Binary, 1, |_| Forecast::Mean(1.5));
    assert!(expected_mistakes(&bad, &[1]).is_err());
}

#[test]
fn binary_mean_examples() {
    let w: Vec<Outcome> = vec![1, -1, -1, 1, -1];
    let set = FiniteVertexSet::new(Alphabet::Binary, vec![w.clone()]).unwrap();
    let phi = finite_set_phi(&set, PenaltyConstant::analytic(0.1).unwrap()).unwrap();
    for (t, &wt) in w.iter().enumerate() {
        for_each_sequence(Alphabet::Binary, t, |_, p| {
            let q = binary_mean(&phi, p, &PlayoutConfig::exhaustive()).unwrap();
            assert!(close(q.binary_mean().unwrap(), wt as f64, 1e-12));
        });
    }

    let c = PotentialFunction::constant(4, Alphabet::Binary, 0.5).unwrap();
    for p in [&[][..], &[1][..], &[1, -1, 1][..]] {
        assert_eq!(
            binary_mean(&c, p, &PlayoutConfig::exhaustive())
                .unwrap()
                .binary_mean(),
            Some(0.0)
        );
    }

    let q = binary_mean(
        &imbalance_phi(2, 0.5).unwrap(),
        &[],
        &PlayoutConfig::exhaustive(),
    )
    .unwrap();
    assert!(q.binary_mean().unwrap().abs() < 1e-15);

    assert!(binary_mean(&c, &[1, 1, 1, 1], &PlayoutConfig::exhaustive()).is_err());
}

#[test]
fn waterfill_examples() {
    let q = waterfill(&[0.3, 0.3, 0.3]).unwrap();
    assert!(q.iter().all(|&x| close(x, 1.0 / 3.0, 1e-15)));

    let q = waterfill(&[0.5, 0.2, 0.2]).unwrap();
    for (a, b) in q.iter().zip([8.0 / 15.0, 7.0 / 30.0, 7.0 / 30.0]) {
        assert!(close(*a, b, 1e-12));
    }

    assert_eq!(waterfill(&[2.0, 0.0, 0.0]).unwrap(), vec![1.0, 0.0, 0.0]);
    assert!(waterfill(&[f64::NAN, 0.0]).is_err());
    assert!(waterfill(&[1.0]).is_err());
}

#[test]
fn multiclass_examples() {
    let binary = imbalance_phi(5, 0.5).unwrap();
    let labels = binary.as_labels().unwrap();
    for t in 0..5 {
        for_each_sequence(Alphabet::Binary, t, |_, p| {
            let mapped: Vec<Outcome> = p.iter().map(|&v| if v == 1 { 2 } else { 1 }).collect();
            let Forecast::Distribution(d) =
                multiclass_forecast(&labels, &mapped, &PlayoutConfig::exhaustive()).unwrap()
            else {
                panic!("k-ary forecast expected");
            };
            let q = binary_mean(&binary, p, &PlayoutConfig::exhaustive())
                .unwrap()
                .binary_mean()
                .unwrap();
            assert!(close(d[1] - d[0], q, 1e-12));
        });
    }

    let a3 = Alphabet::Labels(3);
    let c = PotentialFunction::constant(3, a3, 2.0 / 3.0).unwrap();
    let Forecast::Distribution(d) =
        multiclass_forecast(&c, &[2], &PlayoutConfig::exhaustive()).unwrap()
    else {
        panic!()
    };
    assert!(d.iter().all(|&x| close(x, 1.0 / 3.0, 1e-15)));

    let w: Vec<Outcome> = vec![3, 1, 2, 2];
    let set = FiniteVertexSet::new(a3, vec![w.clone()]).unwrap();
    let phi = finite_set_phi(&set, PenaltyConstant::zero()).unwrap();
    for (t, &wt) in w.iter().enumerate() {
        for_each_sequence(a3, t, |_, p| {
            let Forecast::Distribution(d) =
                multiclass_forecast(&phi, p, &PlayoutConfig::exhaustive()).unwrap()
            else {
                panic!()
            };
            for (j, &x) in d.iter().enumerate() {
                let expected = if j + 1 == wt as usize { 1.0 } else { 0.0 };
                assert!(close(x, expected, 1e-12));
            }
        });
    }
}

#[test]
fn covariate_examples() {
    let n = 4;
    let f = |x: &f64| if *x >= 0.5 { 1 } else { -1 };
    let phi = CovariatePotential::new(n, move |x: &[f64], y: &[Outcome]| {
        x.iter().zip(y).filter(|(xs, ys)| f(xs) != **ys).count() as f64 / n as f64
    })
    .unwrap();
    let sampler = CovariateSampler::iid(4, seqpred::oracle::uniform_unit);
    let observed = [0.1, 0.9, 0.7];
    for t in 1..=3 {
        let q = covariate_forecast(
            &phi,
            &observed[..t],
            &vec![1; t - 1],
            &sampler,
            &PlayoutConfig::exhaustive(),
        )
        .unwrap();
        assert!(close(
            q.binary_mean().unwrap(),
            f(&observed[t - 1]) as f64,
            1e-12
        ));
    }

    let plain = imbalance_phi(n, 0.5).unwrap();
    let lifted = CovariatePotential::<f64>::ignoring_covariates(&plain).unwrap();
    for cfg in [
        PlayoutConfig::exhaustive(),
        PlayoutConfig::single_playout(77),
        PlayoutConfig::monte_carlo(50, 5),
    ] {
        let a = covariate_forecast(&lifted, &[0.3, 0.2], &[1], &sampler, &cfg).unwrap();
        let b = binary_mean(&plain, &[1], &cfg).unwrap();
        assert_eq!(a, b);
    }

    let c = CovariatePotential::new(n, |_: &[f64], _: &[Outcome]| 0.5).unwrap();
    let q =
        covariate_forecast(&c, &[0.4], &[], &sampler, &PlayoutConfig::single_playout(1)).unwrap();
    assert_eq!(q.binary_mean(), Some(0.0));
}

#[test]
fn draw_examples() {
    for round in 0..200 {
        assert_eq!(draw(&Forecast::Mean(1.0), 9, round).unwrap(), 1);
        assert_eq!(draw(&Forecast::Mean(-1.0), 9, round).unwrap(), -1);
    }
    let m = 100_000u64;
    let sum: i64 = (0..m)
        .map(|r| draw(&Forecast::Mean(0.0), 12, r).unwrap() as i64)
        .sum();
    let mean = sum as f64 / m as f64;
    assert!(mean.abs() <= 3.0 / (m as f64).sqrt());
    assert_eq!(
        draw(&Forecast::Mean(0.2), 5, 17).unwrap(),
        draw(&Forecast::Mean(0.2), 5, 17).unwrap()
    );
}

/// With exact forecasts from a stable potential of mean 1/2, the loss of the
/// current round plus the conditional mean afterwards does not depend on the
/// outcome of the round.
#[test]
fn exact_forecasts_equalize_both_outcomes() {
    let pool = [hamming_to(vec![1, -1, -1, 1, 1, -1, 1, 1, -1, -1]), {
        let set = FiniteVertexSet::new(Alphabet::Binary, vec![vec![1; 8], vec![-1; 8]]).unwrap();
        let rad = set
            .rademacher(seqpred::philib::RademacherMode::Exhaustive)
            .unwrap();
        finite_set_phi(&set, rad).unwrap()
    }];
    for phi in &pool {
        let n = phi.horizon();
        let exact = ExactPredictor::new(phi).unwrap();
        let stable = check_stability(phi, CheckMode::Exhaustive)
            .unwrap()
            .max_violation
            < 1e-12;
        let half = (exact.mean() - 0.5).abs() < 1e-12;
        assert!(stable && half);
        for t in 0..n {
            for_each_sequence(Alphabet::Binary, t, |_, p| {
                let q = exact
                    .forecast_by_index(t, Alphabet::Binary.encode(p))
                    .unwrap()
                    .binary_mean()
                    .unwrap();
                let side = |v: Outcome| {
                    let mut next = p.to_vec();
                    next.push(v);
                    (1.0 - q * v as f64) / 2.0 - n as f64 * exact.conditional_mean(&next).unwrap()
                };
                assert!(close(side(1), side(-1), 1e-10));
            });
        }
    }
}

proptest! {
    #[test]
    fn waterfill_lands_in_the_simplex_and_is_optimal(psi in prop::collection::vec(-3.0f64..3.0, 2..7), seed in any::<u64>()) {
        let q = waterfill(&psi).unwrap();
        prop_assert!(q.iter().all(|&x| x >= 0.0));
        prop_assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let best = minimax_objective(&psi, &q);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let e: Vec<f64> = psi.iter().map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
            let s: f64 = e.iter().sum();
            let p: Vec<f64> = e.iter().map(|x| x / s).collect();
            prop_assert!(best <= minimax_objective(&psi, &p) + 1e-12);
        }
    }

    #[test]
    fn playout_forecasts_are_valid(seed in any::<u64>(), bits in prop::collection::vec(prop::bool::ANY, 0..9)) {
        let phi = imbalance_phi(9, 0.5).unwrap();
        let prefix: Vec<Outcome> = bits.iter().map(|&b| if b { 1 } else { -1 }).collect();
        for cfg in [PlayoutConfig::single_playout(seed), PlayoutConfig::monte_carlo(16, seed)] {
            let q = binary_mean(&phi, &prefix, &cfg).unwrap().binary_mean().unwrap();
            prop_assert!((-1.0..=1.0).contains(&q));
        }
    }
}
