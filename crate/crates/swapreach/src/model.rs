//! Agents, objects, preferences, networks and the swap semantics shared by
//! every solver.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// An agent, 1-indexed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Agent(pub usize);

/// An object, 1-indexed. Under the identity endowment agent `i` starts with `Object(i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Object(pub usize);

impl Agent {
    #[inline]
    pub const fn idx(self) -> usize {
        self.0 - 1
    }

    #[inline]
    pub const fn from_idx(i: usize) -> Self {
        Agent(i + 1)
    }
}

impl Object {
    #[inline]
    pub const fn idx(self) -> usize {
        self.0 - 1
    }

    #[inline]
    pub const fn from_idx(i: usize) -> Self {
        Object(i + 1)
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Object {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "o{}", self.0)
    }
}

/// Ordered list of trades; each pair must be a network edge.
pub type SwapSequence = Vec<(Agent, Agent)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NetworkKind {
    Path,
    Star,
    General,
}

impl NetworkKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NetworkKind::Path => "path",
            NetworkKind::Star => "star",
            NetworkKind::General => "general",
        }
    }
}

/// Undirected network. Edges are stored with the smaller endpoint first, in
/// the order they were given; validation rejects loops and duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    kind: NetworkKind,
    edges: Vec<(Agent, Agent)>,
}

impl Network {
    pub fn new(kind: NetworkKind, edges: impl IntoIterator<Item = (Agent, Agent)>) -> Self {
        let edges = edges
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        Network { kind, edges }
    }

    /// The path 1 - 2 - ... - n.
    pub fn path(n: usize) -> Self {
        Network::new(NetworkKind::Path, (1..n).map(|i| (Agent(i), Agent(i + 1))))
    }

    pub fn star(n: usize, center: Agent) -> Self {
        Network::new(
            NetworkKind::Star,
            (1..=n).filter(|&i| i != center.0).map(|i| (center, Agent(i))),
        )
    }

    pub fn kind(&self) -> NetworkKind {
        self.kind
    }

    pub fn edges(&self) -> &[(Agent, Agent)] {
        &self.edges
    }
}

/// Per agent, tiers of objects from best to worst; objects in one tier are
/// equally good.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreferenceProfile {
    tiers: Vec<Vec<Vec<Object>>>,
}

impl PreferenceProfile {
    pub fn from_tiers(tiers: Vec<Vec<Vec<Object>>>) -> Self {
        PreferenceProfile { tiers }
    }

    /// One strict order per agent, best first.
    pub fn strict(orders: Vec<Vec<Object>>) -> Self {
        PreferenceProfile {
            tiers: orders
                .into_iter()
                .map(|order| order.into_iter().map(|o| vec![o]).collect())
                .collect(),
        }
    }

    /// Tiers induced by values: higher value, better tier; ties share a tier.
    /// Objects inside a tier are listed by index.
    pub fn from_values(values: &ValueFunction) -> Self {
        let tiers = values
            .rows
            .iter()
            .map(|row| {
                let mut levels: Vec<i64> = row.clone();
                levels.sort_unstable_by(|a, b| b.cmp(a));
                levels.dedup();
                levels
                    .iter()
                    .map(|&v| {
                        (0..row.len())
                            .filter(|&o| row[o] == v)
                            .map(Object::from_idx)
                            .collect()
                    })
                    .collect()
            })
            .collect();
        PreferenceProfile { tiers }
    }

    pub fn agent_count(&self) -> usize {
        self.tiers.len()
    }

    pub fn tiers(&self, agent: Agent) -> &[Vec<Object>] {
        &self.tiers[agent.idx()]
    }

    pub fn all(&self) -> &[Vec<Vec<Object>>] {
        &self.tiers
    }

    pub fn is_strict(&self) -> bool {
        self.tiers.iter().flatten().all(|tier| tier.len() == 1)
    }
}

/// Integer valuations, `value(i, o)` for agent `i` and object `o`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueFunction {
    rows: Vec<Vec<i64>>,
}

impl ValueFunction {
    pub fn new(rows: Vec<Vec<i64>>) -> Self {
        ValueFunction { rows }
    }

    /// Tier `t` (1-based) of `T` tiers is worth `T - t`.
    pub fn canonical(prefs: &PreferenceProfile) -> Self {
        let n = prefs.agent_count();
        let rows = prefs
            .all()
            .iter()
            .map(|tiers| {
                let mut row = vec![0; n];
                for (t, tier) in tiers.iter().enumerate() {
                    for o in tier {
                        if o.0 >= 1 && o.0 <= n {
                            row[o.idx()] = (tiers.len() - 1 - t) as i64;
                        }
                    }
                }
                row
            })
            .collect();
        ValueFunction { rows }
    }

    pub fn value(&self, agent: Agent, object: Object) -> i64 {
        self.rows[agent.idx()][object.idx()]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }
}

/// Bijection agents -> objects together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    holding: Vec<Object>,
    holder: Vec<Agent>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("not a bijection onto o1..o{n}: {object} is missing or repeated")]
pub struct NotABijection {
    pub n: usize,
    pub object: Object,
}

impl Assignment {
    pub fn identity(n: usize) -> Self {
        Assignment {
            holding: (1..=n).map(Object).collect(),
            holder: (1..=n).map(Agent).collect(),
        }
    }

    /// `holding[i]` is the object held by agent `i + 1`.
    pub fn from_objects(holding: Vec<Object>) -> Result<Self, NotABijection> {
        let n = holding.len();
        let mut holder = vec![Agent(0); n];
        for (i, &o) in holding.iter().enumerate() {
            if o.0 == 0 || o.0 > n || holder[o.idx()].0 != 0 {
                return Err(NotABijection { n, object: o });
            }
            holder[o.idx()] = Agent::from_idx(i);
        }
        Ok(Assignment { holding, holder })
    }

    pub fn n(&self) -> usize {
        self.holding.len()
    }

    #[inline]
    pub fn object_of(&self, agent: Agent) -> Object {
        self.holding[agent.idx()]
    }

    #[inline]
    pub fn holder_of(&self, object: Object) -> Agent {
        self.holder[object.idx()]
    }

    pub fn objects(&self) -> &[Object] {
        &self.holding
    }

    /// Exchange the holdings of `i` and `j` in place.
    pub fn swap(&mut self, i: Agent, j: Agent) {
        let (a, b) = (self.holding[i.idx()], self.holding[j.idx()]);
        self.holding[i.idx()] = b;
        self.holding[j.idx()] = a;
        self.holder[a.idx()] = j;
        self.holder[b.idx()] = i;
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, o) in self.holding.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{o}")?;
        }
        f.write_str(")")
    }
}

/// Exchange the holdings of `i` and `j`, returning a new assignment.
pub fn apply_swap(a: &Assignment, i: Agent, j: Agent) -> Assignment {
    let mut next = a.clone();
    next.swap(i, j);
    next
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Query {
    Reach { agent: Agent, object: Object },
    ParetoFrontier,
    MaxWelfare,
}

/// Everything needed to build an [`Instance`], before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceParts {
    pub n: usize,
    pub network: Network,
    pub preferences: PreferenceProfile,
    pub endowment: Option<Vec<Object>>,
    pub values: Option<ValueFunction>,
    pub agent_labels: Option<Vec<String>>,
}

impl InstanceParts {
    pub fn new(n: usize, network: Network, preferences: PreferenceProfile) -> Self {
        InstanceParts { n, network, preferences, endowment: None, values: None, agent_labels: None }
    }

    pub fn with_endowment(mut self, endowment: Vec<Object>) -> Self {
        self.endowment = Some(endowment);
        self
    }

    pub fn with_values(mut self, values: ValueFunction) -> Self {
        self.values = Some(values);
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.agent_labels = Some(labels);
        self
    }
}

/// One violated instance invariant.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Diagnostic {
    #[error("instance has no agents")]
    NoAgents,
    #[error("edge {index} ({a},{b}) names an agent outside 1..{n}")]
    EdgeOutOfRange { index: usize, a: Agent, b: Agent, n: usize },
    #[error("edge {index} is a loop at agent {agent}")]
    SelfLoop { index: usize, agent: Agent },
    #[error("edge {index} ({a},{b}) is listed twice")]
    DuplicateEdge { index: usize, a: Agent, b: Agent },
    #[error("path edge set mismatch: expected exactly the edges (i,i+1)")]
    PathEdgeSetMismatch,
    #[error("star shape mismatch: need one center adjacent to every other agent and no other edges")]
    StarShapeMismatch,
    #[error("preferences list {found} agents, expected {expected}")]
    PreferenceCount { expected: usize, found: usize },
    #[error("agent {agent}: tier {tier} is empty")]
    EmptyTier { agent: Agent, tier: usize },
    #[error("agent {agent}: object {object} is out of range")]
    PreferenceOutOfRange { agent: Agent, object: Object },
    #[error("agent {agent}: object {object} is ranked twice")]
    PreferenceDuplicate { agent: Agent, object: Object },
    #[error("agent {agent}: preference incomplete, {object} is not ranked")]
    PreferenceIncomplete { agent: Agent, object: Object },
    #[error("endowment lists {found} objects, expected {expected}")]
    EndowmentLength { expected: usize, found: usize },
    #[error("endowment is not a bijection: {object} is missing or repeated")]
    EndowmentNotBijective { object: Object },
    #[error("values matrix row {row} has the wrong length (or the row count is wrong)")]
    ValuesShape { row: usize },
    #[error("agent {agent}: values disagree with preference tiers")]
    ValuesInconsistent { agent: Agent },
    #[error("{found} agent labels given, expected {expected}")]
    LabelCount { expected: usize, found: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid instance ({} problem(s)): {}", .0.len(), .0.first().map(|d| alloc::format!("{d}")).unwrap_or_default())]
pub struct InvalidInstance(pub Vec<Diagnostic>);

/// Report every violated invariant; an empty list means the parts are valid.
pub fn validate_instance(parts: &InstanceParts) -> Vec<Diagnostic> {
    let n = parts.n;
    let mut diags = Vec::new();
    if n == 0 {
        diags.push(Diagnostic::NoAgents);
        return diags;
    }

    let mut seen_edges = Vec::new();
    let mut edges_ok = true;
    for (index, &(a, b)) in parts.network.edges.iter().enumerate() {
        if a.0 == 0 || b.0 > n {
            diags.push(Diagnostic::EdgeOutOfRange { index, a, b, n });
            edges_ok = false;
        } else if a == b {
            diags.push(Diagnostic::SelfLoop { index, agent: a });
            edges_ok = false;
        } else if seen_edges.contains(&(a, b)) {
            diags.push(Diagnostic::DuplicateEdge { index, a, b });
            edges_ok = false;
        } else {
            seen_edges.push((a, b));
        }
    }
    if edges_ok {
        match parts.network.kind {
            NetworkKind::Path => {
                let ok = seen_edges.len() == n - 1
                    && seen_edges.iter().all(|&(a, b)| b.0 == a.0 + 1);
                if !ok {
                    diags.push(Diagnostic::PathEdgeSetMismatch);
                }
            }
            NetworkKind::Star => {
                if star_center(n, &seen_edges).is_none() {
                    diags.push(Diagnostic::StarShapeMismatch);
                }
            }
            NetworkKind::General => {}
        }
    }

    let tiers = parts.preferences.all();
    if tiers.len() != n {
        diags.push(Diagnostic::PreferenceCount { expected: n, found: tiers.len() });
    }
    for (ai, agent_tiers) in tiers.iter().enumerate().take(n) {
        let agent = Agent::from_idx(ai);
        let mut seen = vec![false; n];
        for (t, tier) in agent_tiers.iter().enumerate() {
            if tier.is_empty() {
                diags.push(Diagnostic::EmptyTier { agent, tier: t + 1 });
            }
            for &object in tier {
                if object.0 == 0 || object.0 > n {
                    diags.push(Diagnostic::PreferenceOutOfRange { agent, object });
                } else if seen[object.idx()] {
                    diags.push(Diagnostic::PreferenceDuplicate { agent, object });
                } else {
                    seen[object.idx()] = true;
                }
            }
        }
        for (o, &s) in seen.iter().enumerate() {
            if !s {
                diags.push(Diagnostic::PreferenceIncomplete { agent, object: Object::from_idx(o) });
            }
        }
    }

    if let Some(endowment) = &parts.endowment {
        if endowment.len() != n {
            diags.push(Diagnostic::EndowmentLength { expected: n, found: endowment.len() });
        } else if let Err(e) = Assignment::from_objects(endowment.clone()) {
            diags.push(Diagnostic::EndowmentNotBijective { object: e.object });
        }
    }

    if let Some(values) = &parts.values {
        let rows = values.rows();
        if rows.len() != n {
            diags.push(Diagnostic::ValuesShape { row: rows.len().min(n) + 1 });
        }
        for (ai, row) in rows.iter().enumerate().take(n) {
            if row.len() != n {
                diags.push(Diagnostic::ValuesShape { row: ai + 1 });
                continue;
            }
            let Some(agent_tiers) = tiers.get(ai) else { continue };
            if !values_match_tiers(row, agent_tiers) {
                diags.push(Diagnostic::ValuesInconsistent { agent: Agent::from_idx(ai) });
            }
        }
    }

    if let Some(labels) = &parts.agent_labels {
        if labels.len() != n {
            diags.push(Diagnostic::LabelCount { expected: n, found: labels.len() });
        }
    }
    diags
}

fn values_match_tiers(row: &[i64], tiers: &[Vec<Object>]) -> bool {
    let mut prev: Option<i64> = None;
    for tier in tiers {
        let mut level = None;
        for o in tier {
            let Some(&v) = row.get(o.idx()) else { return false };
            match level {
                None => level = Some(v),
                Some(l) if l != v => return false,
                _ => {}
            }
        }
        if let (Some(p), Some(l)) = (prev, level) {
            if l >= p {
                return false;
            }
        }
        if level.is_some() {
            prev = level;
        }
    }
    true
}

fn star_center(n: usize, edges: &[(Agent, Agent)]) -> Option<Agent> {
    if edges.len() != n - 1 {
        return None;
    }
    if n == 1 {
        return Some(Agent(1));
    }
    let mut degree = vec![0usize; n];
    for &(a, b) in edges {
        degree[a.idx()] += 1;
        degree[b.idx()] += 1;
    }
    // For n = 2 both endpoints qualify; the larger index wins.
    (0..n).rev().find(|&i| degree[i] == n - 1).map(Agent::from_idx)
}

/// A validated instance with precomputed rank and adjacency tables.
#[derive(Clone, Debug)]
pub struct Instance {
    n: usize,
    network: Network,
    prefs: PreferenceProfile,
    endowment: Assignment,
    values: Option<ValueFunction>,
    labels: Option<Vec<String>>,
    rank: Vec<u32>,
    adjacent: Vec<bool>,
    strict: bool,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.network == other.network
            && self.prefs == other.prefs
            && self.endowment == other.endowment
            && self.values == other.values
            && self.labels == other.labels
    }
}

impl Eq for Instance {}

impl Instance {
    pub fn new(parts: InstanceParts) -> Result<Self, InvalidInstance> {
        let diags = validate_instance(&parts);
        if !diags.is_empty() {
            return Err(InvalidInstance(diags));
        }
        let n = parts.n;
        let mut rank = vec![0u32; n * n];
        for (ai, tiers) in parts.preferences.all().iter().enumerate() {
            for (t, tier) in tiers.iter().enumerate() {
                for o in tier {
                    rank[ai * n + o.idx()] = t as u32;
                }
            }
        }
        let mut adjacent = vec![false; n * n];
        for &(a, b) in parts.network.edges() {
            adjacent[a.idx() * n + b.idx()] = true;
            adjacent[b.idx() * n + a.idx()] = true;
        }
        let endowment = match parts.endowment {
            Some(e) => Assignment::from_objects(e).expect("validated"),
            None => Assignment::identity(n),
        };
        let strict = parts.preferences.is_strict();
        Ok(Instance {
            n,
            network: parts.network,
            prefs: parts.preferences,
            endowment,
            values: parts.values,
            labels: parts.agent_labels,
            rank,
            adjacent,
            strict,
        })
    }

    pub fn to_parts(&self) -> InstanceParts {
        let identity = Assignment::identity(self.n);
        InstanceParts {
            n: self.n,
            network: self.network.clone(),
            preferences: self.prefs.clone(),
            endowment: (self.endowment != identity).then(|| self.endowment.objects().to_vec()),
            values: self.values.clone(),
            agent_labels: self.labels.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn prefs(&self) -> &PreferenceProfile {
        &self.prefs
    }

    pub fn endowment(&self) -> &Assignment {
        &self.endowment
    }

    pub fn values(&self) -> Option<&ValueFunction> {
        self.values.as_ref()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, agent: Agent) -> Option<&str> {
        self.labels.as_ref().map(|l| l[agent.idx()].as_str())
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    /// 0 for the top tier, growing downwards.
    #[inline]
    pub fn rank(&self, agent: Agent, object: Object) -> u32 {
        self.rank[agent.idx() * self.n + object.idx()]
    }

    /// `a ≻_agent b`
    #[inline]
    pub fn prefers(&self, agent: Agent, a: Object, b: Object) -> bool {
        self.rank(agent, a) < self.rank(agent, b)
    }

    /// `a ⪰_agent b`
    #[inline]
    pub fn weakly_prefers(&self, agent: Agent, a: Object, b: Object) -> bool {
        self.rank(agent, a) <= self.rank(agent, b)
    }

    #[inline]
    pub fn are_neighbors(&self, i: Agent, j: Agent) -> bool {
        i.0 >= 1 && j.0 >= 1 && i.0 <= self.n && j.0 <= self.n && self.adjacent[i.idx() * self.n + j.idx()]
    }

    /// Both agents weakly gain by exchanging, ignoring the network.
    #[inline]
    pub fn swap_is_acceptable(&self, a: &Assignment, i: Agent, j: Agent) -> bool {
        let (oi, oj) = (a.object_of(i), a.object_of(j));
        self.weakly_prefers(i, oj, oi) && self.weakly_prefers(j, oi, oj)
    }

    /// Same instance, other valuations (tiers unchanged).
    pub fn with_values(&self, values: ValueFunction) -> Result<Self, InvalidInstance> {
        Instance::new(self.to_parts().with_values(values))
    }

    /// Keep the listed agents and objects, in the given order: `agents[t]`
    /// becomes agent `t+1` and `objects[t]` becomes object `t+1`. The kept
    /// agents must hold exactly the kept objects in the endowment. Edges
    /// between kept agents survive.
    pub fn remap(&self, agents: &[Agent], objects: &[Object], kind: NetworkKind) -> Instance {
        let m = agents.len();
        debug_assert_eq!(m, objects.len());
        let mut new_agent = vec![None; self.n];
        for (t, a) in agents.iter().enumerate() {
            new_agent[a.idx()] = Some(Agent::from_idx(t));
        }
        let mut new_object = vec![None; self.n];
        for (t, o) in objects.iter().enumerate() {
            new_object[o.idx()] = Some(Object::from_idx(t));
        }
        let edges: Vec<_> = self
            .network
            .edges()
            .iter()
            .filter_map(|&(a, b)| Some((new_agent[a.idx()]?, new_agent[b.idx()]?)))
            .collect();
        let mut edges: Vec<_> = edges.into_iter().map(|(a, b)| if a < b { (a, b) } else { (b, a) }).collect();
        edges.sort_unstable();
        let tiers = agents
            .iter()
            .map(|&a| {
                self.prefs
                    .tiers(a)
                    .iter()
                    .map(|tier| tier.iter().filter_map(|o| new_object[o.idx()]).collect::<Vec<_>>())
                    .filter(|tier| !tier.is_empty())
                    .collect()
            })
            .collect();
        let endowment = agents
            .iter()
            .map(|&a| new_object[self.endowment.object_of(a).idx()].expect("kept agents hold kept objects"))
            .collect::<Vec<_>>();
        let identity = endowment.iter().enumerate().all(|(i, o)| o.0 == i + 1);
        let values = self.values.as_ref().map(|v| {
            ValueFunction::new(
                agents
                    .iter()
                    .map(|&a| objects.iter().map(|&o| v.value(a, o)).collect())
                    .collect(),
            )
        });
        let labels = self
            .labels
            .as_ref()
            .map(|l| agents.iter().map(|a| l[a.idx()].clone()).collect());
        let parts = InstanceParts {
            n: m,
            network: Network::new(kind, edges),
            preferences: PreferenceProfile::from_tiers(tiers),
            endowment: (!identity).then_some(endowment),
            values,
            agent_labels: labels,
        };
        Instance::new(parts).expect("remap preserves validity")
    }

    /// Rename objects so that the endowment becomes the identity. Returns the
    /// new instance and `old_of[new_index]`, the original object behind each
    /// new name.
    pub fn with_identity_endowment(&self) -> (Instance, Vec<Object>) {
        let agents: Vec<Agent> = (1..=self.n).map(Agent).collect();
        let objects: Vec<Object> = agents.iter().map(|&a| self.endowment.object_of(a)).collect();
        (self.remap(&agents, &objects, self.network.kind), objects)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("agents {0} and {1} are not neighbors")]
pub struct NotNeighbors(pub Agent, pub Agent);

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("instance carries no value function")]
pub struct MissingValues;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("network is not a path")]
pub struct NotAPath;

/// True iff `σ(j) ⪰_i σ(i)` and `σ(i) ⪰_j σ(j)`.
pub fn is_rational_swap(inst: &Instance, a: &Assignment, i: Agent, j: Agent) -> Result<bool, NotNeighbors> {
    if !inst.are_neighbors(i, j) {
        return Err(NotNeighbors(i, j));
    }
    Ok(inst.swap_is_acceptable(a, i, j))
}

/// First failing step of a replayed sequence (`step` is 0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("step {step}: agents {i} and {j} are not neighbors")]
    NotNeighbors { step: usize, i: Agent, j: Agent },
    #[error(
        "step {step}: swap ({i},{j}) is not rational: {i} would trade {i_before} for {i_after}, \
         {j} would trade {j_before} for {j_after}"
    )]
    NotRational {
        step: usize,
        i: Agent,
        j: Agent,
        i_before: Object,
        i_after: Object,
        j_before: Object,
        j_after: Object,
    },
}

impl VerifyError {
    pub fn step(&self) -> usize {
        match *self {
            VerifyError::NotNeighbors { step, .. } | VerifyError::NotRational { step, .. } => step,
        }
    }
}

/// Replay `seq` from the endowment and return the final assignment.
pub fn verify_sequence(inst: &Instance, seq: &[(Agent, Agent)]) -> Result<Assignment, VerifyError> {
    let mut cur = inst.endowment().clone();
    for (step, &(i, j)) in seq.iter().enumerate() {
        check_step(inst, &cur, step, i, j)?;
        cur.swap(i, j);
    }
    Ok(cur)
}

/// Full replay: every intermediate assignment up to the first failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replay {
    pub states: Vec<Assignment>,
    pub error: Option<VerifyError>,
}

pub fn replay(inst: &Instance, seq: &[(Agent, Agent)]) -> Replay {
    let mut states = vec![inst.endowment().clone()];
    for (step, &(i, j)) in seq.iter().enumerate() {
        let cur = states.last().expect("nonempty");
        if let Err(error) = check_step(inst, cur, step, i, j) {
            return Replay { states, error: Some(error) };
        }
        let next = apply_swap(cur, i, j);
        states.push(next);
    }
    Replay { states, error: None }
}

fn check_step(inst: &Instance, cur: &Assignment, step: usize, i: Agent, j: Agent) -> Result<(), VerifyError> {
    if !inst.are_neighbors(i, j) {
        return Err(VerifyError::NotNeighbors { step, i, j });
    }
    if !inst.swap_is_acceptable(cur, i, j) {
        let (oi, oj) = (cur.object_of(i), cur.object_of(j));
        return Err(VerifyError::NotRational {
            step,
            i,
            j,
            i_before: oi,
            i_after: oj,
            j_before: oj,
            j_after: oi,
        });
    }
    Ok(())
}

pub fn welfare(inst: &Instance, a: &Assignment) -> Result<i64, MissingValues> {
    let values = inst.values().ok_or(MissingValues)?;
    Ok((1..=inst.n()).map(|i| values.value(Agent(i), a.object_of(Agent(i)))).sum())
}

/// Everyone weakly prefers `a` to `b` and someone strictly.
pub fn pareto_dominates(inst: &Instance, a: &Assignment, b: &Assignment) -> bool {
    let mut strict = false;
    for i in (1..=inst.n()).map(Agent) {
        let (ra, rb) = (inst.rank(i, a.object_of(i)), inst.rank(i, b.object_of(i)));
        if ra > rb {
            return false;
        }
        strict |= ra < rb;
    }
    strict
}

/// Reverse a path instance: agent `i` becomes `n+1-i`, object `o_i` becomes `o_{n+1-i}`.
pub fn mirror(inst: &Instance, query: &Query) -> Result<(Instance, Query), NotAPath> {
    let m = mirror_instance(inst)?;
    let n = inst.n();
    let q = match *query {
        Query::Reach { agent, object } => Query::Reach {
            agent: Agent(n + 1 - agent.0),
            object: Object(n + 1 - object.0),
        },
        other => other,
    };
    Ok((m, q))
}

pub fn mirror_instance(inst: &Instance) -> Result<Instance, NotAPath> {
    if inst.network().kind() != NetworkKind::Path {
        return Err(NotAPath);
    }
    let n = inst.n();
    let agents: Vec<Agent> = (1..=n).rev().map(Agent).collect();
    let objects: Vec<Object> = (1..=n).rev().map(Object).collect();
    Ok(inst.remap(&agents, &objects, NetworkKind::Path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strict_path(orders: &[&[usize]]) -> Instance {
        let n = orders.len();
        let prefs = PreferenceProfile::strict(
            orders.iter().map(|o| o.iter().map(|&x| Object(x)).collect()).collect(),
        );
        Instance::new(InstanceParts::new(n, Network::path(n), prefs)).unwrap()
    }

    fn figure1() -> Instance {
        strict_path(&[&[2, 1, 3, 4], &[4, 3, 1, 2], &[1, 4, 3, 2], &[3, 1, 2, 4]])
    }

    fn objs(xs: &[usize]) -> Assignment {
        Assignment::from_objects(xs.iter().map(|&x| Object(x)).collect()).unwrap()
    }

    #[test]
    fn smallest_instance_is_valid() {
        let prefs = PreferenceProfile::from_tiers(vec![vec![vec![Object(1)]]]);
        let parts = InstanceParts::new(1, Network::path(1), prefs);
        assert!(validate_instance(&parts).is_empty());
    }

    #[test]
    fn path_with_long_edge_is_rejected() {
        let prefs = PreferenceProfile::strict(vec![vec![Object(1), Object(2), Object(3)]; 3]);
        let net = Network::new(NetworkKind::Path, [(Agent(1), Agent(2)), (Agent(1), Agent(3))]);
        let diags = validate_instance(&InstanceParts::new(3, net, prefs));
        assert_eq!(diags, vec![Diagnostic::PathEdgeSetMismatch]);
        assert!(alloc::format!("{}", diags[0]).contains("path edge set mismatch"));
    }

    #[test]
    fn missing_object_is_reported() {
        let prefs = PreferenceProfile::strict(vec![vec![Object(1)], vec![Object(1), Object(2)]]);
        let diags = validate_instance(&InstanceParts::new(2, Network::path(2), prefs));
        assert_eq!(diags, vec![Diagnostic::PreferenceIncomplete { agent: Agent(1), object: Object(2) }]);
        assert!(alloc::format!("{}", diags[0]).contains("preference incomplete"));
    }

    #[test]
    fn bad_endowment_and_star_are_reported() {
        let prefs = PreferenceProfile::strict(vec![vec![Object(1), Object(2), Object(3)]; 3]);
        let parts = InstanceParts::new(3, Network::path(3), prefs.clone())
            .with_endowment(vec![Object(1), Object(1), Object(3)]);
        assert!(matches!(validate_instance(&parts)[..], [Diagnostic::EndowmentNotBijective { .. }]));
        let net = Network::new(NetworkKind::Star, [(Agent(1), Agent(2))]);
        let diags = validate_instance(&InstanceParts::new(3, net, prefs));
        assert_eq!(diags, vec![Diagnostic::StarShapeMismatch]);
    }

    #[test]
    fn values_must_follow_tiers() {
        let prefs = PreferenceProfile::from_tiers(vec![
            vec![vec![Object(2)], vec![Object(1)]],
            vec![vec![Object(1), Object(2)]],
        ]);
        let good = ValueFunction::new(vec![vec![0, 5], vec![3, 3]]);
        let bad = ValueFunction::new(vec![vec![5, 0], vec![3, 3]]);
        let base = InstanceParts::new(2, Network::path(2), prefs);
        assert!(validate_instance(&base.clone().with_values(good)).is_empty());
        assert_eq!(
            validate_instance(&base.with_values(bad)),
            vec![Diagnostic::ValuesInconsistent { agent: Agent(1) }]
        );
    }

    #[test]
    fn figure1_swaps() {
        let inst = figure1();
        let s0 = inst.endowment().clone();
        assert_eq!(is_rational_swap(&inst, &s0, Agent(1), Agent(2)), Ok(true));
        assert_eq!(is_rational_swap(&inst, &s0, Agent(1), Agent(3)), Err(NotNeighbors(Agent(1), Agent(3))));
        let s1 = apply_swap(&s0, Agent(1), Agent(2));
        assert_eq!(s1, objs(&[2, 1, 3, 4]));
        assert_eq!(apply_swap(&s1, Agent(1), Agent(2)), s0);
        let s2 = apply_swap(&s1, Agent(2), Agent(3));
        assert_eq!(s2, objs(&[2, 3, 1, 4]));
        let fin = verify_sequence(&inst, &[(Agent(1), Agent(2)), (Agent(2), Agent(3))]).unwrap();
        assert_eq!(fin, s2);
        assert_eq!(fin.holder_of(Object(1)), Agent(3));
        assert_eq!(verify_sequence(&inst, &[]).unwrap(), s0);
        assert!(pareto_dominates(&inst, &s2, &s0));
        assert!(!pareto_dominates(&inst, &s0, &s0));
    }

    #[test]
    fn verify_reports_first_failure() {
        let inst = figure1();
        let err = verify_sequence(&inst, &[(Agent(1), Agent(2)), (Agent(1), Agent(2))]).unwrap_err();
        assert_eq!(err.step(), 1);
        let err = verify_sequence(&inst, &[(Agent(1), Agent(3))]).unwrap_err();
        assert_eq!(err, VerifyError::NotNeighbors { step: 0, i: Agent(1), j: Agent(3) });
        let r = replay(&inst, &[(Agent(3), Agent(4)), (Agent(1), Agent(2)), (Agent(1), Agent(2))]);
        assert_eq!(r.states.len(), 3);
        assert_eq!(r.error.map(|e| e.step()), Some(2));
    }

    #[test]
    fn indifferent_pair_may_swap() {
        let prefs = PreferenceProfile::from_tiers(vec![vec![vec![Object(1), Object(2)]]; 2]);
        let inst = Instance::new(InstanceParts::new(2, Network::path(2), prefs)).unwrap();
        assert_eq!(is_rational_swap(&inst, inst.endowment(), Agent(1), Agent(2)), Ok(true));
    }

    #[test]
    fn welfare_needs_values() {
        let inst = figure1();
        assert_eq!(welfare(&inst, inst.endowment()), Err(MissingValues));
        let zero = inst.with_values(ValueFunction::new(vec![vec![0; 4]; 4]));
        // all-zero values flatten every tier, so they contradict strict tiers
        assert!(zero.is_err());
        let canon = inst.with_values(ValueFunction::canonical(inst.prefs())).unwrap();
        // each agent's own object: agent 1 ranks o1 second of four tiers -> 2
        assert_eq!(welfare(&canon, canon.endowment()), Ok(2 + 0 + 1 + 0));
    }

    #[test]
    fn mirror_figure1() {
        let inst = figure1();
        let (m, q) = mirror(&inst, &Query::Reach { agent: Agent(3), object: Object(1) }).unwrap();
        assert_eq!(q, Query::Reach { agent: Agent(2), object: Object(4) });
        // old agent 4 (o3 ≻ o1 ≻ o2 ≻ o4) is new agent 1 (o2 ≻ o4 ≻ o3 ≻ o1)
        let top: Vec<_> = m.prefs().tiers(Agent(1)).iter().map(|t| t[0].0).collect();
        assert_eq!(top, vec![2, 4, 3, 1]);
        let (back, q2) = mirror(&m, &q).unwrap();
        assert_eq!(back, inst);
        assert_eq!(q2, Query::Reach { agent: Agent(3), object: Object(1) });
    }

    #[test]
    fn identity_endowment_renaming() {
        let prefs = PreferenceProfile::strict(vec![vec![Object(2), Object(1)], vec![Object(1), Object(2)]]);
        let inst = Instance::new(
            InstanceParts::new(2, Network::path(2), prefs).with_endowment(vec![Object(2), Object(1)]),
        )
        .unwrap();
        let (canon, old_of) = inst.with_identity_endowment();
        assert_eq!(canon.endowment(), &Assignment::identity(2));
        assert_eq!(old_of, vec![Object(2), Object(1)]);
        // agent 1 holds its favourite, so no swap either way
        assert!(!canon.swap_is_acceptable(canon.endowment(), Agent(1), Agent(2)));
    }
}
