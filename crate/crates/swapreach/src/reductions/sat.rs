//! 2P1N-SAT to weak object reachability on a path.
//!
//! Every variable occurs exactly twice positively and once negatively. The
//! path is `B_n, ..., B_1, C_m, ..., C_1, T`, each block `B_i` being
//! `X̄_i, X_i^p, X_i^q, A_i^3, A_i^2, A_i^1`, where `p` and `q` are the clauses
//! of the first and second positive occurrence. `C_m` asks for `t`, which `T`
//! only gives up once the clause agents have been fed true literals.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::model::{Agent, Assignment, Instance, InstanceParts, Network, Object, PreferenceProfile, SwapSequence};
use crate::reductions::TooLarge;
use crate::twosat::Lit;

/// CNF formula; clause literals use 1-indexed variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<Lit>>) -> Self {
        CnfFormula { num_vars, clauses }
    }

    /// Clauses given DIMACS-style as signed integers.
    pub fn from_signed(num_vars: usize, clauses: &[&[i64]]) -> Self {
        let clauses = clauses
            .iter()
            .map(|c| c.iter().map(|&x| Lit::new(x.unsigned_abs() as usize, x > 0)).collect())
            .collect();
        CnfFormula { num_vars, clauses }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    /// `model[v - 1]` is the value of variable `v`.
    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.eval(model)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FormulaDiagnostic {
    #[error("clause {clause} is empty")]
    EmptyClause { clause: usize },
    #[error("clause {clause} mentions variable {var}, outside 1..{num_vars}")]
    LiteralOutOfRange { clause: usize, var: usize, num_vars: usize },
    #[error("clause {clause} repeats literal {lit}")]
    RepeatedLiteral { clause: usize, lit: Lit },
    #[error("variable {var} occurs {positive} times positively and {negative} times negatively (need 2 and 1)")]
    Occurrences { var: usize, positive: usize, negative: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("not a 2P1N formula: {}", .0.first().map(|d| format!("{d}")).unwrap_or_default())]
pub struct Invalid2P1N(pub Vec<FormulaDiagnostic>);

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error(transparent)]
    Invalid(#[from] Invalid2P1N),
    #[error("the model does not satisfy the formula")]
    ModelDoesNotSatisfy,
}

/// Check the occurrence pattern; clauses are numbered from 1 in messages.
pub fn validate_2p1n(f: &CnfFormula) -> Vec<FormulaDiagnostic> {
    let mut diags = Vec::new();
    let mut pos = vec![0usize; f.num_vars];
    let mut neg = vec![0usize; f.num_vars];
    for (ci, clause) in f.clauses.iter().enumerate() {
        let clause_no = ci + 1;
        if clause.is_empty() {
            diags.push(FormulaDiagnostic::EmptyClause { clause: clause_no });
        }
        let mut seen = BTreeSet::new();
        for &lit in clause {
            if lit.var() == 0 || lit.var() > f.num_vars {
                diags.push(FormulaDiagnostic::LiteralOutOfRange { clause: clause_no, var: lit.var(), num_vars: f.num_vars });
                continue;
            }
            if !seen.insert(lit) {
                diags.push(FormulaDiagnostic::RepeatedLiteral { clause: clause_no, lit });
                continue;
            }
            if lit.is_positive() {
                pos[lit.var() - 1] += 1;
            } else {
                neg[lit.var() - 1] += 1;
            }
        }
    }
    for v in 0..f.num_vars {
        if pos[v] != 2 || neg[v] != 1 {
            diags.push(FormulaDiagnostic::Occurrences { var: v + 1, positive: pos[v], negative: neg[v] });
        }
    }
    diags
}

/// Exhaustive satisfiability check, up to 20 variables.
pub fn brute_sat(f: &CnfFormula) -> Result<bool, TooLarge> {
    Ok(brute_sat_model(f)?.is_some())
}

/// First satisfying model in counting order (variable 1 is the low bit).
pub fn brute_sat_model(f: &CnfFormula) -> Result<Option<Vec<bool>>, TooLarge> {
    const LIMIT: usize = 20;
    if f.num_vars > LIMIT {
        return Err(TooLarge { size: f.num_vars, limit: LIMIT });
    }
    let mut model = vec![false; f.num_vars];
    for mask in 0u32..1 << f.num_vars {
        for (v, x) in model.iter_mut().enumerate() {
            *x = mask >> v & 1 == 1;
        }
        if f.is_satisfied_by(&model) {
            return Ok(Some(model));
        }
    }
    Ok(None)
}

/// A random 2P1N formula with `m` nonempty clauses: each variable's three
/// occurrences land in random clauses, redrawing on empty clauses or a
/// literal repeated inside one clause.
pub fn random_formula<R: Rng + ?Sized>(num_vars: usize, m: usize, rng: &mut R) -> CnfFormula {
    assert!(m >= 1 && m <= 3 * num_vars, "need 1 <= m <= 3n clauses");
    loop {
        let mut clauses: Vec<Vec<Lit>> = vec![Vec::new(); m];
        for v in 1..=num_vars {
            for lit in [Lit::pos(v), Lit::pos(v), Lit::neg(v)] {
                clauses[rng.random_range(0..m)].push(lit);
            }
        }
        let f = CnfFormula::new(num_vars, clauses);
        if validate_2p1n(&f).is_empty() {
            return f;
        }
    }
}

/// Who an agent is in the gadget. Objects are named after their initial holder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    XBar(usize),
    Xp(usize),
    Xq(usize),
    A3(usize),
    A2(usize),
    A1(usize),
    Clause(usize),
    T,
}

impl Role {
    pub fn label(self) -> String {
        match self {
            Role::XBar(i) => format!("Xbar_{i}"),
            Role::Xp(i) => format!("Xp_{i}"),
            Role::Xq(i) => format!("Xq_{i}"),
            Role::A3(i) => format!("A3_{i}"),
            Role::A2(i) => format!("A2_{i}"),
            Role::A1(i) => format!("A1_{i}"),
            Role::Clause(j) => format!("C_{j}"),
            Role::T => String::from("T"),
        }
    }
}

/// The gadget instance and its query (`t` for `C_m`).
#[derive(Clone, Debug)]
pub struct PathGadget {
    pub instance: Instance,
    pub query_agent: Agent,
    pub query_object: Object,
    num_vars: usize,
    num_clauses: usize,
    /// Clause of the first positive, second positive and negative occurrence.
    occurrences: Vec<(usize, usize, usize)>,
}

impl PathGadget {
    pub fn agent(&self, role: Role) -> Agent {
        position(self.num_vars, self.num_clauses, role)
    }

    /// The object initially held by the agent playing `role`.
    pub fn object(&self, role: Role) -> Object {
        Object(self.agent(role).0)
    }

    pub fn roles(&self) -> Vec<Role> {
        roles(self.num_vars, self.num_clauses)
    }

    /// The four swaps inside block `B_var` that let the true side's objects
    /// out: for `true`, `o^p` and `o^q` move to `A^3` and `A^2`; for `false`,
    /// `ō` moves to `A^2`.
    pub fn block_gadget_swaps(&self, var: usize, value: bool) -> [(Agent, Agent); 4] {
        let base = self.agent(Role::XBar(var)).0;
        let offsets = if value { [2, 3, 1, 2] } else { [0, 1, 2, 3] };
        offsets.map(|d| (Agent(base + d), Agent(base + d + 1)))
    }
}

fn position(n: usize, m: usize, role: Role) -> Agent {
    let block = |i: usize, d: usize| Agent((n - i) * 6 + d + 1);
    match role {
        Role::XBar(i) => block(i, 0),
        Role::Xp(i) => block(i, 1),
        Role::Xq(i) => block(i, 2),
        Role::A3(i) => block(i, 3),
        Role::A2(i) => block(i, 4),
        Role::A1(i) => block(i, 5),
        Role::Clause(j) => Agent(6 * n + (m - j) + 1),
        Role::T => Agent(6 * n + m + 1),
    }
}

fn roles(n: usize, m: usize) -> Vec<Role> {
    let mut out = Vec::with_capacity(6 * n + m + 1);
    for i in (1..=n).rev() {
        out.extend([Role::XBar(i), Role::Xp(i), Role::Xq(i), Role::A3(i), Role::A2(i), Role::A1(i)]);
    }
    out.extend((1..=m).rev().map(Role::Clause));
    out.push(Role::T);
    out
}

fn occurrences(f: &CnfFormula) -> Vec<(usize, usize, usize)> {
    (1..=f.num_vars)
        .map(|v| {
            let mut pos = Vec::new();
            let mut neg = 0;
            for (ci, clause) in f.clauses.iter().enumerate() {
                for lit in clause.iter().filter(|l| l.var() == v) {
                    if lit.is_positive() {
                        pos.push(ci + 1);
                    } else {
                        neg = ci + 1;
                    }
                }
            }
            (pos[0], pos[1], neg)
        })
        .collect()
}

pub fn sat_to_weak_path(f: &CnfFormula) -> Result<PathGadget, Invalid2P1N> {
    let diags = validate_2p1n(f);
    if !diags.is_empty() {
        return Err(Invalid2P1N(diags));
    }
    let (n, m) = (f.num_vars, f.clauses.len());
    let total = 6 * n + m + 1;
    let occ = occurrences(f);
    let obj = |role: Role| Object(position(n, m, role).0);

    // L_j: objects of the literals in clause j
    let mut lits: Vec<Vec<Object>> = vec![Vec::new(); m + 1];
    for (v, &(p, q, ng)) in occ.iter().enumerate() {
        let i = v + 1;
        lits[p].push(obj(Role::Xp(i)));
        lits[q].push(obj(Role::Xq(i)));
        lits[ng].push(obj(Role::XBar(i)));
    }

    // W_i: objects every non-clause agent of block i accepts
    let w = |i: usize| -> Vec<Object> {
        let mut s: Vec<Object> = (1..=m).map(|j| obj(Role::Clause(j))).collect();
        for j in 1..=n {
            if j > i {
                s.push(obj(Role::XBar(j)));
                s.push(obj(Role::Xq(j)));
            }
            if j != i {
                s.push(obj(Role::Xp(j)));
            }
            if j < i {
                s.extend([obj(Role::A1(j)), obj(Role::A2(j)), obj(Role::A3(j))]);
            }
        }
        s
    };
    let own = |i: usize, rs: &[fn(usize) -> Role]| -> Vec<Object> { rs.iter().map(|r| obj(r(i))).collect() };
    let union = |mut a: Vec<Object>, b: Vec<Object>| {
        a.extend(b);
        a
    };

    let t = obj(Role::T);
    let c = |j: usize| obj(Role::Clause(j));
    let mut prefs = Vec::with_capacity(total);
    let agent_roles = roles(n, m);
    for &role in &agent_roles {
        let tiers: Vec<Vec<Object>> = match role {
            Role::T => vec![lits[1].clone(), vec![t]],
            Role::Clause(i) => {
                let mut tiers = if i < m {
                    vec![lits[i + 1].clone(), vec![t], lits[i].clone()]
                } else {
                    vec![vec![t], lits[m].clone()]
                };
                for j in 1..i {
                    tiers.push(vec![c(j)]);
                    tiers.push(lits[i - j].clone());
                }
                tiers.push(vec![c(i)]);
                tiers
            }
            Role::XBar(i) => vec![
                union(w(i), own(i, &[Role::A1, Role::A2, Role::A3, Role::Xp, Role::Xq])),
                vec![obj(Role::XBar(i))],
            ],
            Role::Xq(i) => vec![
                union(w(i), own(i, &[Role::A1, Role::A2, Role::A3, Role::XBar, Role::Xp])),
                vec![obj(Role::Xq(i))],
            ],
            Role::Xp(i) => vec![
                union(w(i), own(i, &[Role::A1, Role::A2, Role::A3, Role::Xq, Role::XBar])),
                vec![obj(Role::Xp(i))],
            ],
            Role::A1(i) | Role::A2(i) => vec![union(
                w(i),
                own(i, &[Role::A1, Role::A2, Role::A3, Role::Xp, Role::Xq, Role::XBar]),
            )],
            Role::A3(i) => vec![
                union(w(i), own(i, &[Role::A1, Role::A2, Role::Xp, Role::Xq])),
                vec![obj(Role::XBar(i))],
                vec![obj(Role::A3(i))],
            ],
        };
        prefs.push(complete(tiers, total));
    }

    let labels = agent_roles.iter().map(|r| r.label()).collect();
    let parts = InstanceParts::new(total, Network::path(total), PreferenceProfile::from_tiers(prefs)).with_labels(labels);
    let instance = Instance::new(parts).expect("gadget construction is valid");
    Ok(PathGadget {
        instance,
        query_agent: position(n, m, Role::Clause(m)),
        query_object: t,
        num_vars: n,
        num_clauses: m,
        occurrences: occ,
    })
}

/// Sort each tier and put every unlisted object in one bottom tier.
fn complete(mut tiers: Vec<Vec<Object>>, total: usize) -> Vec<Vec<Object>> {
    let mut listed = vec![false; total];
    for tier in &mut tiers {
        tier.sort_unstable();
        tier.dedup();
        for o in tier.iter() {
            listed[o.idx()] = true;
        }
    }
    let rest: Vec<Object> = (1..=total).map(Object).filter(|o| !listed[o.idx()]).collect();
    if !rest.is_empty() {
        tiers.push(rest);
    }
    tiers
}

/// A certificate that `C_m` can get `t`, built from a satisfying model.
///
/// Per block, the gadget swaps free the true side's objects, then parking
/// swaps move `ō_i` out of the way (to `X^q` when `v_i = 1`, to `A^1` when
/// `v_i = 0`) so objects from blocks further left can pass. Clause by clause,
/// one true literal's object walks right to its clause agent; any not yet
/// delivered object it pushed one step left is swapped straight back.
/// Finally `t` walks from `T` to `C_m`.
pub fn intended_sequence(f: &CnfFormula, model: &[bool]) -> Result<SwapSequence, ReductionError> {
    let g = sat_to_weak_path(f)?;
    if model.len() != f.num_vars || !f.is_satisfied_by(model) {
        return Err(ReductionError::ModelDoesNotSatisfy);
    }
    let mut cur = g.instance.endowment().clone();
    let mut seq = Vec::new();
    let mut step = |cur: &mut Assignment, left: usize| {
        cur.swap(Agent(left), Agent(left + 1));
        seq.push((Agent(left), Agent(left + 1)));
    };

    let mut waiting: Vec<Object> = Vec::new();
    for i in 1..=f.num_vars {
        let base = g.agent(Role::XBar(i)).0;
        let offsets: &[usize] = if model[i - 1] { &[2, 3, 1, 2, 0, 1] } else { &[0, 1, 2, 3, 4] };
        for &d in offsets {
            step(&mut cur, base + d);
        }
        waiting.push(g.object(Role::XBar(i)));
        waiting.push(g.object(Role::Xq(i)));
        if model[i - 1] {
            waiting.push(g.object(Role::Xp(i)));
        }
    }

    for (ci, clause) in f.clauses.iter().enumerate() {
        let l = ci + 1;
        let lit = *clause.iter().find(|lit| lit.eval(model)).expect("model satisfies every clause");
        let (p, _, _) = g.occurrences[lit.var() - 1];
        let chosen = match (lit.is_positive(), p == l) {
            (false, _) => g.object(Role::XBar(lit.var())),
            (true, true) => g.object(Role::Xp(lit.var())),
            (true, false) => g.object(Role::Xq(lit.var())),
        };
        waiting.retain(|&o| o != chosen);
        let mut before: Vec<(usize, Object)> = waiting.iter().map(|&o| (cur.holder_of(o).0, o)).collect();
        let target = g.agent(Role::Clause(l)).0;
        let mut at = cur.holder_of(chosen).0;
        while at < target {
            step(&mut cur, at);
            at += 1;
        }
        before.sort_unstable_by_key(|b| core::cmp::Reverse(b.0));
        for (was, o) in before {
            let now = cur.holder_of(o).0;
            if now + 1 == was {
                step(&mut cur, now);
            }
        }
    }

    for l in 1..=f.clauses.len() {
        step(&mut cur, g.agent(Role::Clause(l)).0);
    }
    Ok(seq)
}
