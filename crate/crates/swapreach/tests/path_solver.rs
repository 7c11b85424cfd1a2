mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use swapreach::model::verify_sequence;
use swapreach::oracle::{self, DEFAULT_CAP};
use swapreach::path_strict::{self, PathError};
use swapreach::{Agent, Object, Reachability};

#[test]
fn figure1_queries() {
    let inst = figure1();
    let set = oracle::reachable_set(&inst, DEFAULT_CAP).unwrap();
    for k in 1..=4 {
        for o in 1..=4 {
            let r = path_strict::solve(&inst, Agent(k), Object(o)).unwrap();
            let truth = set.iter().any(|a| a.object_of(Agent(k)) == Object(o));
            assert_eq!(r.is_reachable(), truth, "k={k} o{o}");
        }
    }
    assert_eq!(path_strict::solve(&inst, Agent(1), Object(1)).unwrap(), Reachability::Reachable(vec![]));
}

#[test]
fn every_small_profile_on_three_agents() {
    // All 6^3 strict profiles with the identity endowment.
    let orders = permutations(&[1usize, 2, 3]);
    for a in &orders {
        for b in &orders {
            for c in &orders {
                let inst = strict_path_listed(&[a, b, c]);
                let set = oracle::reachable_set(&inst, DEFAULT_CAP).unwrap();
                for k in 1..=3 {
                    for o in 1..=3 {
                        let r = path_strict::solve(&inst, Agent(k), Object(o)).unwrap();
                        let truth = set.iter().any(|s| s.object_of(Agent(k)) == Object(o));
                        assert_eq!(r.is_reachable(), truth);
                        if let Some(seq) = r.certificate() {
                            assert_eq!(verify_sequence(&inst, seq).unwrap().object_of(Agent(k)), Object(o));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn input_errors() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let star = swapreach::generate::weak_star(4, &mut rng);
    assert_eq!(path_strict::solve(&star, Agent(1), Object(2)), Err(PathError::NotAPath));
    let weak = swapreach::generate::weak_path(4, &mut rng);
    if !weak.is_strict() {
        assert_eq!(path_strict::solve(&weak, Agent(1), Object(2)), Err(PathError::NotStrict));
    }
    let inst = figure1();
    assert_eq!(path_strict::solve(&inst, Agent(5), Object(1)), Err(PathError::AgentOutOfRange(Agent(5))));
    assert_eq!(path_strict::solve(&inst, Agent(1), Object(0)), Err(PathError::ObjectOutOfRange(Object(0))));
}

#[test]
fn work_grows_polynomially() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in [8usize, 16, 32, 64] {
        let mut worst = path_strict::SolveStats::default();
        for _ in 0..20 {
            let inst = swapreach::generate::strict_path(n, &mut rng);
            let (k, o) = swapreach::generate::query(n, &mut rng);
            let (_, s) = path_strict::solve_with_stats(&inst, k, o).unwrap();
            worst.neat_instances = worst.neat_instances.max(s.neat_instances);
            worst.candidate_checks = worst.candidate_checks.max(s.candidate_checks);
            worst.set_updates = worst.set_updates.max(s.set_updates);
            worst.pair_checks = worst.pair_checks.max(s.pair_checks);
        }
        // At most n neat instances, each with O(n^2) candidate and update
        // work and O(n^2) pair checks of O(n) each.
        assert!(worst.neat_instances <= n);
        assert!(worst.candidate_checks <= 2 * n * n * n, "{n}: {worst:?}");
        assert!(worst.set_updates <= 2 * n * n * n, "{n}: {worst:?}");
        assert!(worst.pair_checks <= 4 * n * n * n, "{n}: {worst:?}");
    }
}
