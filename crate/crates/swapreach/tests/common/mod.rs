#![allow(dead_code)]

use rand::Rng;
use swapreach::reductions::Digraph;
use swapreach::twosat::{Lit, TwoSatInstance};
use swapreach::{Agent, Instance, InstanceParts, Network, Object, PreferenceProfile};

/// Strict path; each list names the objects at or above the endowment, best
/// first. Objects left out follow below in increasing index order.
pub fn strict_path_listed(lists: &[&[usize]]) -> Instance {
    let n = lists.len();
    let orders = lists
        .iter()
        .map(|listed| {
            let mut order: Vec<Object> = listed.iter().map(|&x| Object(x)).collect();
            order.extend((1..=n).filter(|x| !listed.contains(x)).map(Object));
            order
        })
        .collect();
    Instance::new(InstanceParts::new(n, Network::path(n), PreferenceProfile::strict(orders))).unwrap()
}

pub fn figure1() -> Instance {
    strict_path_listed(&[&[2, 1, 3, 4], &[4, 3, 1, 2], &[1, 4, 3, 2], &[3, 1, 2, 4]])
}

/// The neat constrained instance with n' = 8 and k = 5.
pub fn example2() -> Instance {
    strict_path_listed(&[
        &[2, 8, 7, 1],
        &[5, 3, 4, 1, 8, 2],
        &[6, 4, 1, 8, 5, 3],
        &[8, 1, 6, 3, 2, 7, 5, 4],
        &[1, 8, 3, 7, 6, 4, 2, 5],
        &[3, 2, 5, 8, 4, 6],
        &[4, 6, 2, 8, 1, 3, 7],
        &[7, 3, 5, 4, 1, 8],
    ])
}

/// Vertices s, v, t, u; arcs s->v, s->t, v->u, t->v, u->t.
pub fn figure10() -> Digraph {
    let names = ["s", "v", "t", "u"];
    let idx = |x: &str| names.iter().position(|&n| n == x).unwrap();
    Digraph {
        vertices: names.iter().map(|s| s.to_string()).collect(),
        arcs: [("s", "v"), ("s", "t"), ("v", "u"), ("t", "v"), ("u", "t")]
            .iter()
            .map(|&(a, b)| (idx(a), idx(b)))
            .collect(),
        start: 0,
    }
}

pub fn objs(xs: &[usize]) -> Vec<Object> {
    xs.iter().map(|&x| Object(x)).collect()
}

pub fn swaps(pairs: &[(usize, usize)]) -> Vec<(Agent, Agent)> {
    pairs.iter().map(|&(a, b)| (Agent(a), Agent(b))).collect()
}

pub fn random_twosat<R: Rng>(rng: &mut R, max_vars: usize, max_clauses: usize) -> TwoSatInstance {
    let v = rng.random_range(1..=max_vars);
    let m = rng.random_range(0..=max_clauses);
    let mut ts = TwoSatInstance::new(v);
    let lit = |rng: &mut R| Lit::new(rng.random_range(1..=v), rng.random_bool(0.5));
    for _ in 0..m {
        let a = lit(rng);
        let b = if rng.random_bool(0.1) { a } else { lit(rng) };
        ts.add_clause(a, b);
    }
    ts
}

/// Satisfiability by trying all 2^v models, clauses as bit masks.
pub fn twosat_by_enumeration(ts: &TwoSatInstance) -> bool {
    let clauses: Vec<[(u32, u32); 2]> = ts
        .clauses()
        .iter()
        .map(|&(a, b)| [a, b].map(|l| ((l.var() - 1) as u32, u32::from(l.is_positive()))))
        .collect();
    (0u32..1 << ts.var_count()).any(|m| {
        clauses
            .iter()
            .all(|c| c.iter().any(|&(v, want)| (m >> v) & 1 == want))
    })
}

/// Satisfaction tier of every agent, 0 = top.
pub fn tier_vector(inst: &Instance, a: &swapreach::Assignment) -> Vec<u32> {
    (1..=inst.n()).map(|i| inst.rank(Agent(i), a.object_of(Agent(i)))).collect()
}

/// Replay `seq` and check no agent's tier ever worsens (and strictly
/// improves for participants under strict preferences).
pub fn satisfaction_is_monotone(inst: &Instance, seq: &[(Agent, Agent)]) -> bool {
    let replay = swapreach::model::replay(inst, seq);
    if replay.error.is_some() {
        return false;
    }
    replay.states.windows(2).zip(seq).all(|(w, &(i, j))| {
        let (before, after) = (tier_vector(inst, &w[0]), tier_vector(inst, &w[1]));
        let weak = before.iter().zip(&after).all(|(b, a)| a <= b);
        let strict = !inst.is_strict() || (after[i.idx()] < before[i.idx()] && after[j.idx()] < before[j.idx()]);
        weak && strict
    })
}

/// On a path, every object's position moves in one direction only.
pub fn tracks_are_monotone(inst: &Instance, seq: &[(Agent, Agent)]) -> bool {
    let replay = swapreach::model::replay(inst, seq);
    if replay.error.is_some() {
        return false;
    }
    (1..=inst.n()).all(|o| {
        let pos: Vec<usize> = replay.states.iter().map(|s| s.holder_of(Object(o)).0).collect();
        pos.windows(2).all(|w| w[1] >= w[0]) || pos.windows(2).all(|w| w[1] <= w[0])
    })
}

/// All orderings of `items`, in lexicographic order of positions.
pub fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, first.clone());
            out.push(tail);
        }
    }
    out
}

/// Random strict path with a random endowment.
pub fn strict_path_shuffled<R: Rng>(n: usize, rng: &mut R) -> Instance {
    use rand::seq::SliceRandom;
    let base = swapreach::generate::strict_path(n, rng);
    let mut endowment: Vec<Object> = (1..=n).map(Object).collect();
    endowment.shuffle(rng);
    Instance::new(base.to_parts().with_endowment(endowment)).unwrap()
}

/// Random weak star: random center, random tier density, random endowment.
pub fn weak_star_shuffled<R: Rng>(n: usize, rng: &mut R) -> Instance {
    use rand::seq::SliceRandom;
    let center = Agent(rng.random_range(1..=n));
    let cut = rng.random_range(0.15..0.95);
    let base = swapreach::generate::weak_star_centered(n, center, cut, rng);
    let mut endowment: Vec<Object> = (1..=n).map(Object).collect();
    if rng.random_bool(0.5) {
        endowment.shuffle(rng);
    }
    Instance::new(base.to_parts().with_endowment(endowment)).unwrap()
}
