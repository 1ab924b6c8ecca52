//! Text formats and structural classification.
//!
//! Game files are line-oriented: a `nodes` count, a `colours` palette,
//! one `set` line per node, `edge` lines with optional weight and optional
//! non-zero `bonus` lines. Node ids are 1-based on disk and 0-based in
//! memory. The emitter writes the canonical ordering (sets by node, edges
//! by endpoints, bonuses by node then colour), so emit-of-parse is
//! byte-stable.

use std::fmt::Write as _;

use thiserror::Error;

use crate::chain::{detect_chain, ChainDecomposition, IterationRecord};
use crate::cycle::{classify_cycle, CycleView};
use crate::dag::topological_order;
use crate::dynamics::{ImprovementTrace, TerminalStatus};
use crate::error::Error as GameError;
use crate::model::{CoordinationGame, GameBuilder, JointStrategy};
use crate::reduction::{CnfFormula, Literal};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error(transparent)]
    Game(#[from] GameError),
}

fn line_err<T>(line: usize, message: impl Into<String>) -> Result<T, IoError> {
    Err(IoError::Line {
        line,
        message: message.into(),
    })
}

/// Parses the game file format. Unknown keys are rejected with their line
/// number.
pub fn parse_game(text: &str) -> Result<CoordinationGame, IoError> {
    let mut nodes: Option<usize> = None;
    let mut palette: Option<Vec<String>> = None;
    let mut sets: Vec<(usize, Vec<String>, usize)> = Vec::new();
    let mut edges: Vec<(usize, usize, u64, usize)> = Vec::new();
    let mut bonuses: Vec<(usize, String, u64, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let key = parts.next().unwrap();
        let rest: Vec<&str> = parts.collect();
        match key {
            "nodes" => {
                if nodes.is_some() {
                    return line_err(lineno, "duplicate nodes line");
                }
                let [count] = rest.as_slice() else {
                    return line_err(lineno, "expected: nodes <count>");
                };
                nodes = Some(
                    count
                        .parse()
                        .map_err(|_| IoError::Line {
                            line: lineno,
                            message: format!("bad node count {count}"),
                        })?,
                );
            }
            "colours" => {
                if palette.is_some() {
                    return line_err(lineno, "duplicate colours line");
                }
                if rest.is_empty() {
                    return line_err(lineno, "palette must not be empty");
                }
                palette = Some(rest.iter().map(|s| s.to_string()).collect());
            }
            "set" => {
                let Some((node, colours)) = rest.split_first() else {
                    return line_err(lineno, "expected: set <node> <colour>...");
                };
                let node: usize = node.parse().map_err(|_| IoError::Line {
                    line: lineno,
                    message: format!("bad node id {node}"),
                })?;
                if colours.is_empty() {
                    return line_err(lineno, "empty colour set");
                }
                sets.push((
                    node,
                    colours.iter().map(|s| s.to_string()).collect(),
                    lineno,
                ));
            }
            "edge" => {
                let (u, v, w) = match rest.as_slice() {
                    [u, v] => (u, v, "1"),
                    [u, v, w] => (u, v, *w),
                    _ => return line_err(lineno, "expected: edge <from> <to> [weight]"),
                };
                let parse = |s: &str| -> Result<u64, IoError> {
                    s.parse().map_err(|_| IoError::Line {
                        line: lineno,
                        message: format!("bad number {s}"),
                    })
                };
                edges.push((parse(u)? as usize, parse(v)? as usize, parse(w)?, lineno));
            }
            "bonus" => {
                let [node, colour, value] = rest.as_slice() else {
                    return line_err(lineno, "expected: bonus <node> <colour> <value>");
                };
                let node: usize = node.parse().map_err(|_| IoError::Line {
                    line: lineno,
                    message: format!("bad node id {node}"),
                })?;
                let value: u64 = value.parse().map_err(|_| IoError::Line {
                    line: lineno,
                    message: format!("bad bonus value {value}"),
                })?;
                bonuses.push((node, colour.to_string(), value, lineno));
            }
            other => return line_err(lineno, format!("unknown key {other}")),
        }
    }
    let Some(n) = nodes else {
        return line_err(0, "missing nodes line");
    };
    let Some(palette) = palette else {
        return line_err(0, "missing colours line");
    };
    let names: Vec<&str> = palette.iter().map(|s| s.as_str()).collect();
    let mut builder = GameBuilder::new(&names);
    let mut per_node: Vec<Option<(Vec<String>, usize)>> = vec![None; n];
    for (node, colours, lineno) in sets {
        if node == 0 || node > n {
            return line_err(lineno, format!("node {node} out of range 1..={n}"));
        }
        if per_node[node - 1].is_some() {
            return line_err(lineno, format!("duplicate set for node {node}"));
        }
        per_node[node - 1] = Some((colours, lineno));
    }
    for (i, entry) in per_node.iter().enumerate() {
        let Some((colours, lineno)) = entry else {
            return line_err(0, format!("missing set line for node {}", i + 1));
        };
        let mut ids = Vec::new();
        for c in colours {
            match palette.iter().position(|p| p == c) {
                Some(id) => ids.push(id),
                None => return line_err(*lineno, format!("colour {c} not in palette")),
            }
        }
        builder.node_ids(&ids);
    }
    for (u, v, w, lineno) in edges {
        if u == 0 || u > n || v == 0 || v > n {
            return line_err(lineno, format!("edge endpoint out of range 1..={n}"));
        }
        if w == 0 {
            return line_err(lineno, "edges need positive weight");
        }
        builder.edge(u - 1, v - 1, w);
    }
    for (node, colour, value, lineno) in bonuses {
        if node == 0 || node > n {
            return line_err(lineno, format!("node {node} out of range 1..={n}"));
        }
        match palette.iter().position(|p| p == &colour) {
            Some(id) => {
                builder.bonus_id(node - 1, id, value);
            }
            None => return line_err(lineno, format!("colour {colour} not in palette")),
        }
    }
    Ok(builder.build()?)
}

/// Canonical text form of a game.
pub fn emit_game(game: &CoordinationGame) -> String {
    let mut out = String::new();
    let n = game.node_count();
    writeln!(out, "nodes {n}").unwrap();
    writeln!(out, "colours {}", game.colours().palette().join(" ")).unwrap();
    for i in 0..n {
        let names: Vec<&str> = game
            .colour_set(i)
            .iter()
            .map(|c| game.colours().colour_name(c))
            .collect();
        writeln!(out, "set {} {}", i + 1, names.join(" ")).unwrap();
    }
    for (u, v, w) in game.graph().edges() {
        writeln!(out, "edge {} {} {}", u + 1, v + 1, w).unwrap();
    }
    for i in 0..n {
        for c in game.colour_set(i).iter() {
            let b = game.bonus(i, c);
            if b > 0 {
                writeln!(out, "bonus {} {} {}", i + 1, game.colours().colour_name(c), b).unwrap();
            }
        }
    }
    out
}

/// Strategy files hold one `<node> <colour>` pair per line.
pub fn parse_strategy(text: &str, game: &CoordinationGame) -> Result<JointStrategy, IoError> {
    let n = game.node_count();
    let mut choice: Vec<Option<usize>> = vec![None; n];
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [node, colour] = parts.as_slice() else {
            return line_err(lineno, "expected: <node> <colour>");
        };
        let node: usize = node.parse().map_err(|_| IoError::Line {
            line: lineno,
            message: format!("bad node id {node}"),
        })?;
        if node == 0 || node > n {
            return line_err(lineno, format!("node {node} out of range 1..={n}"));
        }
        let Some(c) = game.colours().colour_id(colour) else {
            return line_err(lineno, format!("colour {colour} not in palette"));
        };
        if choice[node - 1].is_some() {
            return line_err(lineno, format!("duplicate choice for node {node}"));
        }
        choice[node - 1] = Some(c);
    }
    let mut v = Vec::with_capacity(n);
    for (i, c) in choice.into_iter().enumerate() {
        match c {
            Some(c) => v.push(c),
            None => return line_err(0, format!("missing choice for node {}", i + 1)),
        }
    }
    let s = JointStrategy::new(v);
    s.validate(game)?;
    Ok(s)
}

pub fn emit_strategy(game: &CoordinationGame, s: &JointStrategy) -> String {
    let mut out = String::new();
    for i in 0..game.node_count() {
        writeln!(out, "{} {}", i + 1, game.colours().colour_name(s.get(i))).unwrap();
    }
    out
}

/// Parses DIMACS CNF; clauses of one or two literals are padded by
/// repetition, longer clauses are rejected.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, IoError> {
    let mut num_vars = None;
    let mut clauses: Vec<[Literal; 3]> = Vec::new();
    let mut pending: Vec<Literal> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            match parts.as_slice() {
                ["cnf", vars, _clauses] => {
                    num_vars = Some(vars.parse::<usize>().map_err(|_| IoError::Line {
                        line: lineno,
                        message: format!("bad variable count {vars}"),
                    })?);
                }
                _ => return line_err(lineno, "expected: p cnf <vars> <clauses>"),
            }
            continue;
        }
        let Some(vars) = num_vars else {
            return line_err(lineno, "clause before the p cnf header");
        };
        for tok in line.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| IoError::Line {
                line: lineno,
                message: format!("bad literal {tok}"),
            })?;
            if v == 0 {
                match pending.len() {
                    0 => return line_err(lineno, "empty clause"),
                    1..=3 => {
                        while pending.len() < 3 {
                            pending.push(*pending.last().unwrap());
                        }
                        clauses.push([pending[0], pending[1], pending[2]]);
                        pending.clear();
                    }
                    _ => return line_err(lineno, "clauses may hold at most three literals"),
                }
            } else {
                let var = v.unsigned_abs() as usize;
                if var > vars {
                    return line_err(lineno, format!("variable {var} out of range 1..={vars}"));
                }
                pending.push(Literal {
                    var: var - 1,
                    positive: v > 0,
                });
            }
        }
    }
    if !pending.is_empty() {
        return line_err(0, "unterminated clause");
    }
    let Some(vars) = num_vars else {
        return line_err(0, "missing p cnf header");
    };
    CnfFormula::new(vars, clauses).map_err(IoError::Game)
}

/// DOT rendering with colour-set node labels and weight edge labels.
pub fn emit_dot(game: &CoordinationGame) -> String {
    let mut out = String::from("digraph game {\n");
    for i in 0..game.node_count() {
        let names: Vec<&str> = game
            .colour_set(i)
            .iter()
            .map(|c| game.colours().colour_name(c))
            .collect();
        let mut label = format!("{} {{{}}}", i + 1, names.join(","));
        for c in game.colour_set(i).iter() {
            let b = game.bonus(i, c);
            if b > 0 {
                write!(label, " +{}:{}", game.colours().colour_name(c), b).unwrap();
            }
        }
        writeln!(out, "  n{} [label=\"{label}\"];", i + 1).unwrap();
    }
    for (u, v, w) in game.graph().edges() {
        writeln!(out, "  n{} -> n{} [label=\"{w}\"];", u + 1, v + 1).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Structural class of a game graph, in dispatch precedence order.
#[derive(Debug, Clone)]
pub enum GameClass {
    Dag,
    SimpleCycle(CycleView),
    OpenChain {
        decomposition: ChainDecomposition,
        /// Chains are solvable when unweighted and bonus-free.
        plain: bool,
    },
    TwoColour,
    General,
}

/// Classifies with precedence dag > simple cycle > open chain > two
/// colours > general.
pub fn classify(game: &CoordinationGame) -> GameClass {
    if topological_order(game).is_ok() {
        return GameClass::Dag;
    }
    if let Ok(view) = classify_cycle(game) {
        return GameClass::SimpleCycle(view);
    }
    if let Ok(decomposition) = detect_chain(game.graph()) {
        let plain =
            game.graph().non_trivial_weight_count() == 0 && game.bonuses().is_trivial();
        return GameClass::OpenChain {
            decomposition,
            plain,
        };
    }
    if game.palette_len() == 2 {
        return GameClass::TwoColour;
    }
    GameClass::General
}

impl GameClass {
    /// Human-readable classification with the applicable path-length bound.
    pub fn describe(&self, game: &CoordinationGame) -> String {
        let n = game.node_count();
        match self {
            GameClass::Dag => format!(
                "dag: one topological pass, at most {} deviations (n-1 without bonuses)",
                n
            ),
            GameClass::SimpleCycle(view) => {
                use crate::cycle::CycleVariant::*;
                match view.variant {
                    Unsupported => "simple cycle (unsupported variant: three or more bonus \
                                    nodes and heavy edges); a Nash equilibrium may not exist"
                        .to_string(),
                    v => format!(
                        "simple cycle ({}): improvement path of length <= {}",
                        v.name(),
                        v.bound(n)
                    ),
                }
            }
            GameClass::OpenChain {
                decomposition,
                plain,
            } => {
                let m = decomposition.cycle_count();
                let v = decomposition.max_cycle_len();
                if *plain {
                    format!(
                        "open chain of {m} cycles (max length {v}): improvement path of \
                         length <= {}, coalitional <= {}",
                        3 * v * m * m * m,
                        4 * v * m * m * m * m
                    )
                } else {
                    format!("open chain of {m} cycles, but weighted or bonused: unsupported")
                }
            }
            GameClass::TwoColour => format!(
                "two colours: improvement and c-improvement paths of length <= {}",
                2 * n
            ),
            GameClass::General => "general game: exhaustive search only".to_string(),
        }
    }

    pub fn short_name(&self) -> &'static str {
        match self {
            GameClass::Dag => "dag",
            GameClass::SimpleCycle(_) => "simple-cycle",
            GameClass::OpenChain { .. } => "open-chain",
            GameClass::TwoColour => "two-colour",
            GameClass::General => "general",
        }
    }
}

/// One step per line: `step k: nodes {..} colours old->new payoffs
/// old->new`, framed by the initial strategy and the terminal status.
pub fn emit_trace(game: &CoordinationGame, trace: &ImprovementTrace) -> String {
    let mut out = String::new();
    let name = |c: usize| game.colours().colour_name(c);
    writeln!(
        out,
        "initial: {}",
        (0..game.node_count())
            .map(|i| format!("{}={}", i + 1, name(trace.initial.get(i))))
            .collect::<Vec<_>>()
            .join(" ")
    )
    .unwrap();
    for (k, step) in trace.steps.iter().enumerate() {
        let old_colours: Vec<&str> = step.changes.iter().map(|c| name(c.old_colour)).collect();
        let new_colours: Vec<&str> = step.changes.iter().map(|c| name(c.new_colour)).collect();
        let old_pay: Vec<String> = step
            .changes
            .iter()
            .map(|c| c.old_payoff.to_string())
            .collect();
        let new_pay: Vec<String> = step
            .changes
            .iter()
            .map(|c| c.new_payoff.to_string())
            .collect();
        writeln!(
            out,
            "step {}: nodes {} colours {}->{} payoffs {}->{}",
            k + 1,
            step.deviators,
            old_colours.join(","),
            new_colours.join(","),
            old_pay.join(","),
            new_pay.join(",")
        )
        .unwrap();
    }
    let status = match trace.terminal {
        TerminalStatus::Nash => "nash",
        TerminalStatus::Strong => "strong",
        TerminalStatus::CapExhausted => "cap-exhausted",
        TerminalStatus::ScheduleEnded => "schedule-ended",
    };
    writeln!(out, "terminal: {status}").unwrap();
    out
}

/// Grade table CSV: one row for the start and one per iteration, carrying
/// the grade vector and the progress measure.
pub fn emit_grade_csv(initial_grades: &[crate::chain::Grade], records: &[IterationRecord]) -> String {
    let mut out = String::from("iteration,cycle,scenario,grades,guard,flag,prefix_len,neg_nbr\n");
    let grades_str = |grades: &[crate::chain::Grade]| {
        grades
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join(";")
    };
    let mu0 = crate::chain::mu(initial_grades);
    writeln!(
        out,
        "0,,,{},{},{},{},{}",
        grades_str(initial_grades),
        mu0.0,
        mu0.1,
        mu0.2,
        mu0.3
    )
    .unwrap();
    for (k, r) in records.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            k + 1,
            r.cycle_index + 1,
            r.scenario.0,
            grades_str(&r.grades_after),
            r.mu_after.0,
            r.mu_after.1,
            r.mu_after.2,
            r.mu_after.3
        )
        .unwrap();
    }
    out
}
