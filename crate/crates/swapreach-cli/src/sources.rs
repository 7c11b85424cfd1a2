//! Source problems for the reductions.
//!
//! CNF files are DIMACS (`c` comments, a `p cnf VARS CLAUSES` header, clauses
//! terminated by `0`) and must be 2P1N. Digraph files are line based:
//!
//! ```text
//! # comment
//! vertices s v t u
//! start s
//! arc s v
//! arc v u
//! ```

use std::fmt::Write;

use anyhow::{bail, ensure, Context, Result};
use swapreach::reductions::sat::validate_2p1n;
use swapreach::reductions::{CnfFormula, Digraph};
use swapreach::twosat::Lit;

pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            ensure!(header.is_none(), "line {}: second header", lineno + 1);
            let fields: Vec<&str> = rest.split_whitespace().collect();
            ensure!(
                fields.len() == 3 && fields[0] == "cnf",
                "line {}: expected `p cnf VARS CLAUSES`",
                lineno + 1
            );
            header = Some((fields[1].parse()?, fields[2].parse()?));
            continue;
        }
        let Some((vars, _)) = header else {
            bail!("line {}: clause before the `p cnf` header", lineno + 1)
        };
        for tok in line.split_whitespace() {
            let x: i64 = tok
                .parse()
                .with_context(|| format!("line {}: bad literal `{tok}`", lineno + 1))?;
            if x == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            let v = x.unsigned_abs() as usize;
            ensure!(
                v <= vars,
                "line {}: variable {v} exceeds the declared {vars}",
                lineno + 1
            );
            current.push(Lit::new(v, x > 0));
        }
    }
    let Some((vars, count)) = header else {
        bail!("missing `p cnf` header")
    };
    ensure!(current.is_empty(), "last clause is not terminated by 0");
    ensure!(
        clauses.len() == count,
        "header declares {count} clauses, found {}",
        clauses.len()
    );
    Ok(CnfFormula::new(vars, clauses))
}

/// Parse and insist on exactly two positive and one negative occurrence per variable.
pub fn parse_2p1n(text: &str) -> Result<CnfFormula> {
    let f = parse_dimacs(text)?;
    let problems = validate_2p1n(&f);
    if !problems.is_empty() {
        let lines: Vec<String> = problems.iter().map(|d| format!("  - {d}")).collect();
        bail!("formula is not 2P1N:\n{}", lines.join("\n"));
    }
    Ok(f)
}

pub fn write_dimacs(f: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", f.num_vars(), f.clauses().len());
    for clause in f.clauses() {
        for l in clause {
            let v = l.var() as i64;
            write!(out, "{} ", if l.is_positive() { v } else { -v }).unwrap();
        }
        out.push_str("0\n");
    }
    out
}

pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let mut vertices: Option<Vec<String>> = None;
    let mut start: Option<String> = None;
    let mut arcs: Vec<(String, String)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let key = words.next().unwrap();
        let rest: Vec<String> = words.map(String::from).collect();
        match key {
            "vertices" => {
                ensure!(
                    vertices.is_none(),
                    "line {}: vertices listed twice",
                    lineno + 1
                );
                vertices = Some(rest);
            }
            "start" => {
                ensure!(
                    rest.len() == 1,
                    "line {}: expected `start NAME`",
                    lineno + 1
                );
                start = rest.into_iter().next();
            }
            "arc" => {
                ensure!(
                    rest.len() == 2,
                    "line {}: expected `arc FROM TO`",
                    lineno + 1
                );
                let mut it = rest.into_iter();
                arcs.push((it.next().unwrap(), it.next().unwrap()));
            }
            other => bail!("line {}: unknown keyword `{other}`", lineno + 1),
        }
    }
    let vertices = vertices.context("missing `vertices` line")?;
    let find = |name: &str| {
        vertices
            .iter()
            .position(|v| v == name)
            .with_context(|| format!("unknown vertex `{name}`"))
    };
    let start = find(&start.context("missing `start` line")?)?;
    let arcs = arcs
        .iter()
        .map(|(u, v)| Ok((find(u)?, find(v)?)))
        .collect::<Result<Vec<_>>>()?;
    let d = Digraph {
        vertices,
        arcs,
        start,
    };
    d.validate()?;
    Ok(d)
}

pub fn write_digraph(d: &Digraph) -> String {
    let mut out = format!(
        "vertices {}\nstart {}\n",
        d.vertices.join(" "),
        d.vertices[d.start]
    );
    for &(u, v) in &d.arcs {
        writeln!(out, "arc {} {}", d.vertices[u], d.vertices[v]).unwrap();
    }
    out
}
