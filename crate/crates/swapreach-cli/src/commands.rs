//! Subcommand bodies. Each returns the report and the exit code; `main`
//! only parses arguments and prints.

use std::fmt::Write;

use anyhow::{bail, ensure, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use swapreach::model::{verify_sequence, welfare};
use swapreach::oracle::{self, ReachableSet};
use swapreach::reductions::{self, sat::Role};
use swapreach::{
    path_strict, star_weak, Agent, Assignment, Instance, NetworkKind, Object, Reachability,
};

use crate::files::{InstanceFile, QueryFile};
use crate::sources;

pub const YES: i32 = 0;
pub const NO: i32 = 1;
pub const ERROR: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub format: Format,
    pub verbose: bool,
    pub cap: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            format: Format::Text,
            verbose: false,
            cap: oracle::DEFAULT_CAP,
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
}

impl Outcome {
    fn new(code: i32, report: String) -> Self {
        Outcome { code, report }
    }
}

fn pair_list(seq: &[(Agent, Agent)]) -> Vec<[usize; 2]> {
    seq.iter().map(|&(a, b)| [a.0, b.0]).collect()
}

fn count_swaps(n: usize) -> String {
    if n == 1 {
        "1 swap".into()
    } else {
        format!("{n} swaps")
    }
}

fn show_swaps(inst: &Instance, seq: &[(Agent, Agent)]) -> String {
    if seq.is_empty() {
        return "(none)".into();
    }
    let name = |a: Agent| {
        inst.label(a)
            .map(String::from)
            .unwrap_or_else(|| a.to_string())
    };
    let plain: Vec<String> = seq.iter().map(|&(a, b)| format!("({a},{b})")).collect();
    let mut out = plain.join(" ");
    if inst.labels().is_some() {
        let named: Vec<String> = seq
            .iter()
            .map(|&(a, b)| format!("({},{})", name(a), name(b)))
            .collect();
        write!(out, "\n  as labels: {}", named.join(" ")).unwrap();
    }
    out
}

/// Query taken from the flags when given, else from the file.
pub fn reach_query(
    file_query: Option<&QueryFile>,
    agent: Option<usize>,
    object: Option<usize>,
) -> Result<(Agent, Object)> {
    match (agent, object) {
        (Some(a), Some(o)) => Ok((Agent(a), Object(o))),
        (None, None) => {
            let q = file_query.context("no query: give --agent and --object or a [query] table")?;
            match q.to_query()? {
                swapreach::Query::Reach { agent, object } => Ok((agent, object)),
                _ => bail!("the file's query is `{}`, not `reach`", q.kind),
            }
        }
        _ => bail!("--agent and --object go together"),
    }
}

fn check_query(inst: &Instance, k: Agent, o: Object) -> Result<()> {
    ensure!(
        (1..=inst.n()).contains(&k.0),
        "agent {k} is out of range 1..{}",
        inst.n()
    );
    ensure!(
        (1..=inst.n()).contains(&o.0),
        "object {o} is out of range 1..{}",
        inst.n()
    );
    Ok(())
}

enum Solver {
    Path,
    Star,
    Oracle,
}

impl Solver {
    fn name(&self) -> &'static str {
        match self {
            Solver::Path => "path (2-SAT)",
            Solver::Star => "star (auxiliary digraph)",
            Solver::Oracle => "oracle (breadth-first search)",
        }
    }
}

fn pick_solver(inst: &Instance, force_oracle: bool) -> Result<Solver> {
    if force_oracle {
        return Ok(Solver::Oracle);
    }
    match inst.network().kind() {
        NetworkKind::Path if inst.is_strict() => Ok(Solver::Path),
        NetworkKind::Star => Ok(Solver::Star),
        NetworkKind::Path => bail!(
            "object reachability is NP-hard on a path once preferences have ties; \
             no polynomial solver applies. Pass --oracle to search exhaustively"
        ),
        NetworkKind::General => bail!(
            "no polynomial solver for general networks (the problem is NP-hard already on \
             paths with ties). Pass --oracle to search exhaustively"
        ),
    }
}

/// Run the reachability query and report it. Certificates are replayed
/// before they are printed.
pub fn solve(
    inst: &Instance,
    k: Agent,
    o: Object,
    force_oracle: bool,
    opts: &Options,
) -> Result<Outcome> {
    check_query(inst, k, o)?;
    let solver = pick_solver(inst, force_oracle)?;
    let mut stats = serde_json::Map::new();
    let answer = match solver {
        Solver::Path => {
            let (r, s) = path_strict::solve_with_stats(inst, k, o)?;
            stats.insert("neat_instances".into(), s.neat_instances.into());
            stats.insert("candidate_checks".into(), s.candidate_checks.into());
            stats.insert("set_updates".into(), s.set_updates.into());
            stats.insert("pair_checks".into(), s.pair_checks.into());
            r
        }
        Solver::Star => star_weak::solve(inst, k, o)?,
        Solver::Oracle => {
            let set = oracle::reachable_set(inst, opts.cap)?;
            insert_search_stats(&mut stats, &set);
            let hit = set.iter().find(|a| a.object_of(k) == o);
            match hit {
                Some(a) => Reachability::Reachable(set.certificate(&a).expect("stored state")),
                None => Reachability::Unreachable,
            }
        }
    };
    if let Reachability::Reachable(seq) = &answer {
        let end =
            verify_sequence(inst, seq).context("internal error: certificate does not verify")?;
        ensure!(
            end.object_of(k) == o,
            "internal error: certificate ends with {} at agent {k}",
            end.object_of(k)
        );
    }
    let code = if answer.is_reachable() { YES } else { NO };
    let report = match opts.format {
        Format::Json => {
            let mut v = json!({
                "solver": solver.name(),
                "agent": k.0,
                "object": o.0,
                "answer": if answer.is_reachable() { "reachable" } else { "unreachable" },
            });
            if let Some(seq) = answer.certificate() {
                v["certificate"] = json!(pair_list(seq));
                v["verified"] = json!(true);
            }
            v["stats"] = serde_json::Value::Object(stats);
            serde_json::to_string_pretty(&v)? + "\n"
        }
        Format::Text => {
            let mut out = String::new();
            match answer.certificate() {
                Some(seq) => {
                    writeln!(out, "REACHABLE: agent {k} can get {o}").unwrap();
                    writeln!(
                        out,
                        "certificate ({}): {}",
                        count_swaps(seq.len()),
                        show_swaps(inst, seq)
                    )
                    .unwrap();
                    writeln!(
                        out,
                        "verified: replayed, every swap rational, agent {k} ends with {o}"
                    )
                    .unwrap();
                }
                None => writeln!(out, "UNREACHABLE: agent {k} cannot get {o}").unwrap(),
            }
            if opts.verbose {
                writeln!(out, "solver: {}", solver.name()).unwrap();
                for (key, val) in &stats {
                    writeln!(out, "{key}: {val}").unwrap();
                }
            }
            out
        }
    };
    Ok(Outcome::new(code, report))
}

fn insert_search_stats(stats: &mut serde_json::Map<String, serde_json::Value>, set: &ReachableSet) {
    let s = set.stats();
    stats.insert("explored".into(), s.explored.into());
    stats.insert("frontier_peak".into(), s.frontier_peak.into());
    stats.insert("max_depth".into(), s.max_depth.into());
}

/// Parse swaps written as `1-2 2-3` or `1-2,2-3`.
pub fn parse_swaps(text: &str) -> Result<Vec<(Agent, Agent)>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (a, b) = t
                .split_once('-')
                .with_context(|| format!("swap `{t}` is not of the form i-j"))?;
            Ok((Agent(a.trim().parse()?), Agent(b.trim().parse()?)))
        })
        .collect()
}

pub fn verify(
    inst: &Instance,
    seq: &[(Agent, Agent)],
    target: Option<(Agent, Object)>,
    opts: &Options,
) -> Result<Outcome> {
    for &(a, b) in seq {
        ensure!(
            (1..=inst.n()).contains(&a.0) && (1..=inst.n()).contains(&b.0),
            "swap ({a},{b}) names an agent out of range"
        );
    }
    let result = verify_sequence(inst, seq);
    let hit = match (&result, target) {
        (Ok(end), Some((k, o))) => Some(end.object_of(k) == o),
        _ => None,
    };
    let ok = result.is_ok() && hit != Some(false);
    let report = match opts.format {
        Format::Json => {
            let mut v = json!({ "valid": result.is_ok(), "swaps": seq.len() });
            match &result {
                Ok(end) => {
                    v["final"] = json!(end.objects().iter().map(|o| o.0).collect::<Vec<_>>())
                }
                Err(e) => {
                    v["error"] = json!(e.to_string());
                    v["step"] = json!(e.step());
                }
            }
            if let Some(h) = hit {
                v["reaches_target"] = json!(h);
            }
            serde_json::to_string_pretty(&v)? + "\n"
        }
        Format::Text => match &result {
            Ok(end) => {
                let mut out = format!(
                    "VALID: {}, final assignment {end}\n",
                    count_swaps(seq.len())
                );
                if let (Some(h), Some((k, o))) = (hit, target) {
                    let verdict = if h { "holds" } else { "does not hold" };
                    writeln!(out, "agent {k} {verdict} {o} at the end").unwrap();
                }
                out
            }
            Err(e) => format!("INVALID: {e}\n"),
        },
    };
    Ok(Outcome::new(if ok { YES } else { NO }, report))
}

pub fn pareto(inst: &Instance, opts: &Options) -> Result<Outcome> {
    let set = oracle::reachable_set(inst, opts.cap)?;
    let frontier = oracle::frontier_of(inst, set.iter().collect());
    let report = match opts.format {
        Format::Json => {
            let items: Vec<_> = frontier
                .iter()
                .map(|a| {
                    json!({
                        "assignment": a.objects().iter().map(|o| o.0).collect::<Vec<_>>(),
                        "certificate": pair_list(&set.certificate(a).expect("stored state")),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&json!({ "reachable": set.len(), "frontier": items }))?
                + "\n"
        }
        Format::Text => {
            let mut out = format!(
                "{} reachable assignments, {} Pareto optimal\n",
                set.len(),
                frontier.len()
            );
            for a in &frontier {
                let seq = set.certificate(a).expect("stored state");
                writeln!(out, "{a} via {}", show_swaps(inst, &seq)).unwrap();
            }
            out
        }
    };
    Ok(Outcome::new(YES, report))
}

/// Maximum welfare over the reachable set; with a threshold, exit 0 iff it is met.
pub fn max_welfare(inst: &Instance, threshold: Option<i64>, opts: &Options) -> Result<Outcome> {
    ensure!(
        inst.values().is_some(),
        "the instance has no `values` matrix"
    );
    let set = oracle::reachable_set(inst, opts.cap)?;
    let start = welfare(inst, inst.endowment())?;
    let mut best: Option<(i64, Assignment)> = None;
    for a in set.iter() {
        let w = welfare(inst, &a)?;
        if best.as_ref().is_none_or(|(b, _)| w > *b) {
            best = Some((w, a));
        }
    }
    let (best, at) = best.expect("the endowment is always reachable");
    let seq = set.certificate(&at).expect("stored state");
    let met = threshold.map(|t| best >= t);
    let report = match opts.format {
        Format::Json => {
            let mut v = json!({
                "initial_welfare": start,
                "max_welfare": best,
                "assignment": at.objects().iter().map(|o| o.0).collect::<Vec<_>>(),
                "certificate": pair_list(&seq),
                "reachable": set.len(),
            });
            if let (Some(t), Some(m)) = (threshold, met) {
                v["threshold"] = json!(t);
                v["threshold_met"] = json!(m);
            }
            serde_json::to_string_pretty(&v)? + "\n"
        }
        Format::Text => {
            let mut out = format!(
                "initial welfare {start}\nmax welfare {best} at {at}\nvia {}\n",
                show_swaps(inst, &seq)
            );
            if let (Some(t), Some(m)) = (threshold, met) {
                writeln!(out, "threshold {t}: {}", if m { "met" } else { "not met" }).unwrap();
            }
            out
        }
    };
    Ok(Outcome::new(
        if met == Some(false) { NO } else { YES },
        report,
    ))
}

/// The path gadget for a 2P1N formula, asking whether `C_m` can get `t`.
pub fn reduce_sat(cnf_text: &str) -> Result<String> {
    let f = sources::parse_2p1n(cnf_text)?;
    let g = reductions::sat_to_weak_path(&f)?;
    debug_assert_eq!(g.query_object, g.object(Role::T));
    let file = InstanceFile::from_instance(
        &g.instance,
        Some(QueryFile::reach(g.query_agent, g.query_object)),
    );
    Ok(file.to_text())
}

/// The star gadget for a digraph, with the welfare threshold as its query.
pub fn reduce_ham(digraph_text: &str) -> Result<String> {
    let d = sources::parse_digraph(digraph_text)?;
    let g = reductions::digraph_to_star_welfare(&d)?;
    let file =
        InstanceFile::from_instance(&g.instance, Some(QueryFile::welfare(Some(g.threshold))));
    Ok(file.to_text())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GenKind {
    StrictPath,
    WeakPath,
    WeakStar,
}

/// A seeded random instance with a random reach query.
pub fn generate(kind: GenKind, n: usize, seed: u64) -> Result<String> {
    ensure!(n >= 1, "n must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = match kind {
        GenKind::StrictPath => swapreach::generate::strict_path(n, &mut rng),
        GenKind::WeakPath => swapreach::generate::weak_path(n, &mut rng),
        GenKind::WeakStar => swapreach::generate::weak_star(n, &mut rng),
    };
    let (k, o) = swapreach::generate::query(n, &mut rng);
    Ok(InstanceFile::from_instance(&inst, Some(QueryFile::reach(k, o))).to_text())
}
