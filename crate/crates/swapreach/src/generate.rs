//! Seeded random instances for tests and the `gen` command.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::model::{Agent, Instance, InstanceParts, Network, Object, PreferenceProfile};

/// A uniformly random strict order over `o_1..o_n`.
pub fn strict_order<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Vec<Object>> {
    let mut objects: Vec<Object> = (1..=n).map(Object).collect();
    objects.shuffle(rng);
    objects.into_iter().map(|o| alloc::vec![o]).collect()
}

/// A random order cut into tiers; each gap between neighbours in the order
/// becomes a tier boundary with probability `cut`.
pub fn tiered_order<R: Rng + ?Sized>(n: usize, cut: f64, rng: &mut R) -> Vec<Vec<Object>> {
    let mut objects: Vec<Object> = (1..=n).map(Object).collect();
    objects.shuffle(rng);
    let mut tiers: Vec<Vec<Object>> = Vec::new();
    for (i, o) in objects.into_iter().enumerate() {
        if i == 0 || rng.random_bool(cut) {
            tiers.push(Vec::new());
        }
        tiers.last_mut().expect("pushed above").push(o);
    }
    tiers
}

pub fn strict_path<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Instance {
    let prefs = PreferenceProfile::from_tiers((0..n).map(|_| strict_order(n, rng)).collect());
    Instance::new(InstanceParts::new(n, Network::path(n), prefs)).expect("generated instance is valid")
}

/// Weak preferences on a path, tier boundaries drawn with probability 1/2.
pub fn weak_path<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Instance {
    let prefs = PreferenceProfile::from_tiers((0..n).map(|_| tiered_order(n, 0.5, rng)).collect());
    Instance::new(InstanceParts::new(n, Network::path(n), prefs)).expect("generated instance is valid")
}

/// Weak preferences on a star whose center is agent `n`.
pub fn weak_star<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Instance {
    weak_star_centered(n, Agent(n), 0.5, rng)
}

pub fn weak_star_centered<R: Rng + ?Sized>(n: usize, center: Agent, cut: f64, rng: &mut R) -> Instance {
    let prefs = PreferenceProfile::from_tiers((0..n).map(|_| tiered_order(n, cut, rng)).collect());
    Instance::new(InstanceParts::new(n, Network::star(n, center), prefs)).expect("generated instance is valid")
}

/// A uniformly random (agent, object) reachability query.
pub fn query<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (Agent, Object) {
    (Agent(rng.random_range(1..=n)), Object(rng.random_range(1..=n)))
}
