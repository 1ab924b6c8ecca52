//! Open chains of simple cycles: linear-time decomposition detection, the
//! cycle-by-cycle Nash schedule with its grade/progress-measure
//! instrumentation, and the strong-equilibrium alternation.
//!
//! A chain is a sequence of simple cycles where consecutive cycles share
//! exactly one link node. Cycle `j` is stored in edge order; for `j < m-1`
//! it starts at its up-link (the node shared with cycle `j+1`), the last
//! cycle starts at the successor of its down-link. Indices are 0-based in
//! code while the arithmetic quantities (nbr, guard) keep their natural
//! 1-based values.

use std::collections::BTreeMap;
use std::fmt;

use crate::coalition::find_unicolour_deviation_from_ne;
use crate::cycle::{run_round_robin, RoundRobin, UpdateScenario};
use crate::dynamics::{DeviationStep, ImprovementTrace, TerminalStatus};
use crate::error::Error;
use crate::model::{
    colour_values, payoff, BonusFunction, ColourId, CoordinationGame, JointStrategy,
    WeightedDigraph,
};

/// An open chain of `m >= 2` simple cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainDecomposition {
    /// Node lists per cycle, each in edge order.
    pub cycles: Vec<Vec<usize>>,
    /// Position of the down-link inside each cycle; `None` for the first.
    pub down_link_pos: Vec<Option<usize>>,
}

impl ChainDecomposition {
    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }

    pub fn max_cycle_len(&self) -> usize {
        self.cycles.iter().map(|c| c.len()).max().unwrap_or(0)
    }

    /// Up-link node of cycle `j` (shared with cycle `j+1`).
    pub fn up_link(&self, j: usize) -> Option<usize> {
        if j + 1 < self.cycles.len() {
            Some(self.cycles[j][0])
        } else {
            None
        }
    }

    /// Down-link node of cycle `j` (shared with cycle `j-1`).
    pub fn down_link(&self, j: usize) -> Option<usize> {
        self.down_link_pos[j].map(|k| self.cycles[j][k])
    }

    /// Predecessor of the up-link of cycle `j` inside cycle `j+1`.
    pub fn up_link_outer_pred(&self, j: usize) -> Option<usize> {
        let k = self.down_link_pos[j + 1]?;
        let next = &self.cycles[j + 1];
        Some(next[(k + next.len() - 1) % next.len()])
    }

    /// Predecessor of the down-link of cycle `j` inside cycle `j-1`; that
    /// cycle ends right before its up-link, so this is its last node.
    pub fn down_link_outer_pred(&self, j: usize) -> Option<usize> {
        if j == 0 {
            None
        } else {
            self.cycles[j - 1].last().copied()
        }
    }
}

/// Five-valued per-cycle status: `u`-variants have the cycle's last node
/// coloured like its first, the minus variants have the second node as the
/// only one off its best response, `?` covers everything else.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grade {
    UPlus,
    Plus,
    UMinus,
    Minus,
    Unknown,
}

impl Grade {
    pub fn all_best_response(self) -> bool {
        matches!(self, Grade::UPlus | Grade::Plus)
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Grade::UPlus => "u+",
            Grade::Plus => "+",
            Grade::UMinus => "u-",
            Grade::Minus => "-",
            Grade::Unknown => "?",
        };
        write!(f, "{s}")
    }
}

/// Lexicographically ordered progress quadruple
/// `(guard, flag, prefix length, -nbr)`; `(m+1, 0, 0, 0)` at equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ProgressMeasure(pub i64, pub i64, pub i64, pub i64);

impl fmt::Display for ProgressMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.0, self.1, self.2, self.3)
    }
}

fn walk_through_plain_nodes(
    g: &WeightedDigraph,
    start_edge_target: usize,
) -> Result<(usize, Vec<usize>), Error> {
    let mut via = Vec::new();
    let mut at = start_edge_target;
    let mut hops = 0;
    while g.out_degree(at) == 1 && g.in_degree(at) == 1 {
        via.push(at);
        at = g.out_edges(at)[0].0;
        hops += 1;
        if hops > g.node_count() {
            return Err(Error::NotAChain("stray cycle of plain nodes".into()));
        }
    }
    Ok((at, via))
}

/// Checks the degree conditions, contracts the plain paths between the
/// degree-2 nodes and verifies the contracted graph is a bidirectional
/// simple path with self-loops at its ends; on success labels the cycles.
pub fn detect_chain(g: &WeightedDigraph) -> Result<ChainDecomposition, Error> {
    let n = g.node_count();
    for i in 0..n {
        let (din, dout) = (g.in_degree(i), g.out_degree(i));
        if !((din == 1 && dout == 1) || (din == 2 && dout == 2)) {
            return Err(Error::NotAChain(format!(
                "node {} has in/out degrees ({din},{dout})",
                i + 1
            )));
        }
    }
    for (u, v, _) in g.edges() {
        if g.weight(v, u).is_some() {
            return Err(Error::NotAChain(format!(
                "bidirectional edge between {} and {}",
                u + 1,
                v + 1
            )));
        }
    }
    let links: Vec<usize> = (0..n).filter(|&i| g.out_degree(i) == 2).collect();
    if links.is_empty() {
        return Err(Error::NotAChain("no link nodes, so fewer than two cycles".into()));
    }
    // walks[a] = the two plain-node walks leaving link a, in out-edge order
    let mut walks: BTreeMap<usize, Vec<(usize, Vec<usize>)>> = BTreeMap::new();
    for &a in &links {
        let mut out = Vec::new();
        for &(t, _) in g.out_edges(a) {
            let (target, via) = walk_through_plain_nodes(g, t)?;
            if g.out_degree(target) != 2 {
                return Err(Error::NotAChain("walk ends off a link node".into()));
            }
            out.push((target, via));
        }
        walks.insert(a, out);
    }
    let self_loops = |a: usize| walks[&a].iter().filter(|(t, _)| *t == a).count();
    let neighbours = |a: usize| -> Vec<usize> {
        walks[&a]
            .iter()
            .filter(|(t, _)| *t != a)
            .map(|(t, _)| *t)
            .collect()
    };
    // order the links along the contracted path
    let ordered: Vec<usize> = if links.len() == 1 {
        if self_loops(links[0]) != 2 {
            return Err(Error::NotAChain("single link without both loops".into()));
        }
        links.clone()
    } else {
        let mut ends = Vec::new();
        for &a in &links {
            let nb = neighbours(a);
            match (self_loops(a), nb.len()) {
                (1, 1) => ends.push(a),
                (0, 2) if nb[0] != nb[1] => {}
                _ => {
                    return Err(Error::NotAChain(format!(
                        "link {} breaks the path shape",
                        a + 1
                    )))
                }
            }
            for &b in &nb {
                if !neighbours(b).contains(&a) {
                    return Err(Error::NotAChain("contracted edge is not bidirectional".into()));
                }
            }
        }
        if ends.len() != 2 {
            return Err(Error::NotAChain(format!(
                "expected two path ends, found {}",
                ends.len()
            )));
        }
        let mut ordered = vec![*ends.iter().min().unwrap()];
        let mut prev = None;
        while ordered.len() < links.len() {
            let at = *ordered.last().unwrap();
            let next = neighbours(at)
                .into_iter()
                .find(|&b| Some(b) != prev)
                .ok_or_else(|| Error::NotAChain("contracted path is disconnected".into()))?;
            prev = Some(at);
            ordered.push(next);
        }
        ordered
    };
    let walk_between = |a: usize, b: usize| -> Result<Vec<usize>, Error> {
        walks[&a]
            .iter()
            .find(|(t, _)| *t == b)
            .map(|(_, via)| via.clone())
            .ok_or_else(|| Error::NotAChain("missing walk between links".into()))
    };
    let m = ordered.len() + 1;
    let mut cycles = Vec::with_capacity(m);
    let mut down_link_pos = Vec::with_capacity(m);
    if m == 2 {
        let u = ordered[0];
        let loops = &walks[&u];
        let mut c1 = vec![u];
        c1.extend(loops[0].1.iter());
        let mut c2 = loops[1].1.clone();
        c2.push(u);
        let down = c2.len() - 1;
        cycles.push(c1);
        cycles.push(c2);
        down_link_pos.push(None);
        down_link_pos.push(Some(down));
    } else {
        // first cycle: the loop at the first link
        let u = ordered[0];
        let mut c1 = vec![u];
        c1.extend(walk_between(u, u)?);
        cycles.push(c1);
        down_link_pos.push(None);
        for j in 1..m - 1 {
            let up = ordered[j];
            let down = ordered[j - 1];
            let to_down = walk_between(up, down)?;
            let back_up = walk_between(down, up)?;
            let mut c = vec![up];
            c.extend(to_down.iter());
            let pos = c.len();
            c.push(down);
            c.extend(back_up.iter());
            cycles.push(c);
            down_link_pos.push(Some(pos));
        }
        let u = *ordered.last().unwrap();
        let mut last = walk_between(u, u)?;
        last.push(u);
        let pos = last.len() - 1;
        cycles.push(last);
        down_link_pos.push(Some(pos));
    }
    for c in &cycles {
        if c.len() < 3 {
            return Err(Error::NotAChain("a cycle has fewer than three nodes".into()));
        }
    }
    let mut covered = vec![0usize; n];
    for c in &cycles {
        for &x in c {
            covered[x] += 1;
        }
    }
    let ok = covered.iter().enumerate().all(|(i, &k)| {
        if g.out_degree(i) == 2 {
            k == 2
        } else {
            k == 1
        }
    });
    if !ok {
        return Err(Error::NotAChain("labelling does not cover the graph".into()));
    }
    Ok(ChainDecomposition {
        cycles,
        down_link_pos,
    })
}

/// The bonus function a cycle inherits from the frozen rest of the chain:
/// one point on each link node for the colour of its predecessor in the
/// neighbouring cycle.
pub fn induced_bonus(
    decomp: &ChainDecomposition,
    game: &CoordinationGame,
    s: &JointStrategy,
    j: usize,
) -> BonusFunction {
    let mut b = BonusFunction::zero(game.node_count(), game.palette_len());
    if let (Some(up), Some(outer)) = (decomp.up_link(j), decomp.up_link_outer_pred(j)) {
        b.set(up, s.get(outer), 1);
    }
    if let (Some(down), Some(outer)) = (decomp.down_link(j), decomp.down_link_outer_pred(j)) {
        b.set(down, s.get(outer), 1);
    }
    b
}

fn plays_best_response(game: &CoordinationGame, s: &JointStrategy, i: usize) -> bool {
    let current = payoff(game, s, i);
    colour_values(game, s, i).iter().all(|&(_, v)| v <= current)
}

/// Grade of cycle `j` under `s`.
pub fn grade_of(
    decomp: &ChainDecomposition,
    game: &CoordinationGame,
    s: &JointStrategy,
    j: usize,
) -> Grade {
    let cycle = &decomp.cycles[j];
    let off: Vec<usize> = cycle
        .iter()
        .enumerate()
        .filter(|&(_, &node)| !plays_best_response(game, s, node))
        .map(|(pos, _)| pos)
        .collect();
    let ends_equal = s.get(cycle[cycle.len() - 1]) == s.get(cycle[0]);
    match off.as_slice() {
        [] => {
            if ends_equal {
                Grade::UPlus
            } else {
                Grade::Plus
            }
        }
        [1] => {
            if ends_equal {
                Grade::UMinus
            } else {
                Grade::Minus
            }
        }
        _ => Grade::Unknown,
    }
}

/// Grades of all cycles.
pub fn grades(
    decomp: &ChainDecomposition,
    game: &CoordinationGame,
    s: &JointStrategy,
) -> Vec<Grade> {
    (0..decomp.cycle_count())
        .map(|j| grade_of(decomp, game, s, j))
        .collect()
}

/// 1-based index of the first cycle holding a node off its best response.
pub fn nbr(grades: &[Grade]) -> Result<usize, Error> {
    grades
        .iter()
        .position(|g| !g.all_best_response())
        .map(|i| i + 1)
        .ok_or(Error::NbrOnEquilibrium)
}

/// Largest 1-based `j` whose cycle grades `u+` with only `+`/`u+` before
/// it; 0 when none does.
pub fn guard(grades: &[Grade]) -> usize {
    let mut best = 0;
    for (i, g) in grades.iter().enumerate() {
        if !g.all_best_response() {
            break;
        }
        if *g == Grade::UPlus {
            best = i + 1;
        }
    }
    best
}

/// Length of the longest prefix holding at most one of `-`, `u-`, `?`,
/// cut right after a `?`.
pub fn prefix_len(grades: &[Grade]) -> usize {
    let mut len = 0;
    let mut bads = 0;
    for g in grades {
        let bad = !g.all_best_response();
        if bad && bads == 1 {
            break;
        }
        len += 1;
        if bad {
            bads = 1;
            if *g == Grade::Unknown {
                break;
            }
        }
    }
    len
}

/// The progress measure: `(m+1,0,0,0)` at equilibrium, otherwise
/// `(guard, 1, 0, -nbr)` when the prefix contains `u-` or a `u+` after a
/// `-`, else `(guard, 0, |prefix|, -nbr)`.
pub fn mu(grades: &[Grade]) -> ProgressMeasure {
    let m = grades.len() as i64;
    if grades.iter().all(|g| g.all_best_response()) {
        return ProgressMeasure(m + 1, 0, 0, 0);
    }
    let nbr = nbr(grades).expect("not an equilibrium") as i64;
    let g = guard(grades) as i64;
    let p = prefix_len(grades);
    let mut flagged = false;
    let mut seen_minus = false;
    for grade in &grades[..p] {
        match grade {
            Grade::UMinus => flagged = true,
            Grade::Minus => seen_minus = true,
            Grade::UPlus if seen_minus => flagged = true,
            _ => {}
        }
    }
    if flagged {
        ProgressMeasure(g, 1, 0, -nbr)
    } else {
        ProgressMeasure(g, 0, p as i64, -nbr)
    }
}

/// Instrumentation captured around one correction of one cycle.
#[derive(Debug, Clone)]
pub struct IterationRecord {
    /// 0-based index of the corrected cycle.
    pub cycle_index: usize,
    /// Virtual first letter (from a `u-`/`-` grade) plus the recorded
    /// link-node updates.
    pub scenario: UpdateScenario,
    pub grades_before: Vec<Grade>,
    pub grades_after: Vec<Grade>,
    pub mu_before: ProgressMeasure,
    pub mu_after: ProgressMeasure,
    pub deviations: usize,
}

fn ensure_plain_chain_game(game: &CoordinationGame) -> Result<(), Error> {
    if game.graph().non_trivial_weight_count() != 0 || !game.bonuses().is_trivial() {
        return Err(Error::ChainGameNotPlain);
    }
    Ok(())
}

/// One pass of the correction loop body over cycle `j`.
fn correct_cycle(
    decomp: &ChainDecomposition,
    game: &CoordinationGame,
    s: &mut JointStrategy,
    j: usize,
) -> Result<(Vec<DeviationStep>, UpdateScenario), Error> {
    let cycle = &decomp.cycles[j];
    let v = cycle.len();
    let m = decomp.cycle_count();
    let (order, distinguished, bound): (Vec<usize>, Vec<usize>, usize) = if j == 0 {
        // single induced bonus at the up-link, scheduled last
        let mut order = cycle[1..].to_vec();
        order.push(cycle[0]);
        (order, vec![cycle[0]], 2 * v - 1)
    } else if j + 1 < m {
        // two induced bonuses; the down-link opens the schedule
        let k = decomp.down_link_pos[j].expect("middle cycles have a down-link");
        let order: Vec<usize> = cycle[k..].iter().chain(&cycle[..k]).copied().collect();
        (order, vec![cycle[0], cycle[k]], 3 * v)
    } else {
        // last cycle: stored order already puts the down-link last; its
        // first node acts as the bonus-free upper link and is recorded too
        (cycle.clone(), vec![cycle[0], cycle[v - 1]], 2 * v - 1)
    };
    run_round_robin(
        game,
        s,
        &RoundRobin {
            order: &order,
            distinguished: &distinguished,
            record_from_slot: 0,
            max_deviations: bound,
        },
    )
}

fn chain_ne_loop(
    decomp: &ChainDecomposition,
    game: &CoordinationGame,
    s: &mut JointStrategy,
    steps: &mut Vec<DeviationStep>,
    records: &mut Vec<IterationRecord>,
) -> Result<(), Error> {
    let m = decomp.cycle_count();
    let iteration_cap = m * m * m + 1;
    for _ in 0..iteration_cap {
        let before = grades(decomp, game, s);
        let mu_before = mu(&before);
        if before.iter().all(|g| g.all_best_response()) {
            return Ok(());
        }
        let j = nbr(&before)? - 1;
        let (mut sub_steps, recorded) = correct_cycle(decomp, game, s, j)?;
        let virtual_prefix = match before[j] {
            Grade::UMinus => "i",
            Grade::Minus => "o",
            _ => "",
        };
        let scenario = UpdateScenario(format!("{virtual_prefix}{}", recorded.0));
        let after = grades(decomp, game, s);
        let mu_after = mu(&after);
        if mu_after <= mu_before {
            return Err(Error::Internal(format!(
                "progress measure failed to increase: {mu_before} -> {mu_after}"
            )));
        }
        records.push(IterationRecord {
            cycle_index: j,
            scenario,
            grades_before: before,
            grades_after: after,
            mu_before,
            mu_after,
            deviations: sub_steps.len(),
        });
        steps.append(&mut sub_steps);
    }
    Err(Error::Internal(
        "chain correction loop exceeded its iteration cap".into(),
    ))
}

/// Repeatedly corrects the lowest unstable cycle under its induced bonuses
/// until the whole chain is at a Nash equilibrium. The progress measure
/// strictly increases per iteration and the trace stays within
/// `3 * v * m^3` deviations.
pub fn solve_ne_chain(
    game: &CoordinationGame,
    s0: &JointStrategy,
) -> Result<(JointStrategy, ImprovementTrace, Vec<IterationRecord>), Error> {
    ensure_plain_chain_game(game)?;
    s0.validate(game)?;
    let decomp = detect_chain(game.graph())?;
    let mut s = s0.clone();
    let mut steps = Vec::new();
    let mut records = Vec::new();
    chain_ne_loop(&decomp, game, &mut s, &mut steps, &mut records)?;
    let (m, v) = (decomp.cycle_count(), decomp.max_cycle_len());
    if steps.len() > 3 * v * m * m * m {
        return Err(Error::Internal("chain schedule exceeded 3vm^3 deviations".into()));
    }
    Ok((
        s,
        ImprovementTrace {
            initial: s0.clone(),
            steps,
            terminal: TerminalStatus::Nash,
        },
        records,
    ))
}

/// Alternates the Nash loop with single unicolour coalition jumps until no
/// coalition can profit. Each jump recolours a fresh cycle, so at most
/// `ceil(m/2)` occur and the whole path stays within `4 * v * m^4` steps.
pub fn solve_se_chain(
    game: &CoordinationGame,
    s0: &JointStrategy,
) -> Result<(JointStrategy, ImprovementTrace, Vec<IterationRecord>, usize), Error> {
    ensure_plain_chain_game(game)?;
    s0.validate(game)?;
    let decomp = detect_chain(game.graph())?;
    let (m, v) = (decomp.cycle_count(), decomp.max_cycle_len());
    let jump_cap = m.div_ceil(2);
    let mut s = s0.clone();
    let mut steps = Vec::new();
    let mut records = Vec::new();
    let mut jumps = 0usize;
    loop {
        chain_ne_loop(&decomp, game, &mut s, &mut steps, &mut records)?;
        match find_unicolour_deviation_from_ne(game, &s)? {
            None => break,
            Some((coalition, colour)) => {
                let switches: Vec<(usize, ColourId)> = coalition
                    .members()
                    .iter()
                    .map(|&i| (i, colour))
                    .collect();
                steps.push(DeviationStep::apply(game, &mut s, &switches));
                jumps += 1;
                if jumps > jump_cap {
                    return Err(Error::Internal(format!(
                        "more than ceil(m/2) = {jump_cap} coalition jumps"
                    )));
                }
            }
        }
    }
    if steps.len() > 4 * v * m * m * m * m {
        return Err(Error::Internal("chain schedule exceeded 4vm^4 steps".into()));
    }
    Ok((
        s,
        ImprovementTrace {
            initial: s0.clone(),
            steps,
            terminal: TerminalStatus::Strong,
        },
        records,
        jumps,
    ))
}

/// Checks one iteration's grade change against the transition tables: only
/// the corrected cycle and its neighbours may move, and they move only in
/// the ways the recorded scenario admits.
pub fn check_grade_transition(record: &IterationRecord) -> bool {
    let m = record.grades_before.len();
    let j = record.cycle_index;
    let before = &record.grades_before;
    let after = &record.grades_after;
    if after.len() != m {
        return false;
    }
    for x in 0..m {
        if x + 1 < j || x > j + 1 {
            if after[x] != before[x] {
                return false;
            }
        }
    }
    // the corrected cycle always ends fully stabilised
    if !after[j].all_best_response() {
        return false;
    }
    let unchanged = |x: usize| after[x] == before[x];
    let scenario = record.scenario.0.as_str();
    let j_plus_free = |allowed: bool| j + 1 >= m || allowed || unchanged(j + 1);
    match before[j] {
        Grade::UPlus | Grade::Plus => false,
        Grade::Unknown => {
            if j == 0 {
                // lower neighbour absent; upper may change arbitrarily
                matches!(after[0], Grade::Plus | Grade::UPlus)
            } else {
                let lower_ok = match before[j - 1] {
                    Grade::UPlus => after[j - 1] == Grade::UPlus,
                    Grade::Plus => after[j - 1] != Grade::Unknown,
                    _ => false,
                };
                lower_ok && matches!(after[j], Grade::Plus | Grade::UPlus)
            }
        }
        Grade::UMinus | Grade::Minus => {
            if j == 0 {
                let cj_ok = match before[0] {
                    Grade::UMinus => after[0] == Grade::UPlus,
                    _ => matches!(after[0], Grade::Plus | Grade::UPlus),
                };
                return cj_ok && (m == 1 || unchanged(1));
            }
            let lower_before = before[j - 1];
            if !matches!(lower_before, Grade::Plus | Grade::UPlus) {
                return false;
            }
            // beyond the one-letter scenarios the down-link moved, which
            // needs the lower grade to have been plain plus
            if scenario.len() >= 2 && lower_before != Grade::Plus {
                return false;
            }
            let lower_any = matches!(
                after[j - 1],
                Grade::Plus | Grade::Minus | Grade::UPlus | Grade::UMinus
            );
            let lower_u = matches!(after[j - 1], Grade::UMinus | Grade::UPlus);
            match scenario {
                "i" => after[j] == Grade::UPlus && unchanged(j - 1) && j_plus_free(false),
                "o" => after[j] == Grade::Plus && unchanged(j - 1) && j_plus_free(false),
                "ii" => after[j] == Grade::UPlus && lower_any && j_plus_free(false),
                "oi" => {
                    matches!(after[j], Grade::Plus | Grade::UPlus)
                        && lower_any
                        && j_plus_free(false)
                }
                "io" => {
                    matches!(after[j], Grade::Plus | Grade::UPlus)
                        && lower_u
                        && j_plus_free(false)
                }
                "oo" => after[j] == Grade::Plus && lower_u && j_plus_free(false),
                "ioi" => after[j] == Grade::UPlus && lower_u && j_plus_free(true),
                "ooi" => after[j] == Grade::UPlus && lower_u && j_plus_free(true),
                // the up-link of the last cycle has no outer colours
                "ioo" => j + 1 < m && after[j] == Grade::Plus && lower_u,
                _ => false,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::validate_trace;
    use crate::fixtures;
    use crate::model::is_nash;

    fn figure_chain() -> (CoordinationGame, JointStrategy, ChainDecomposition) {
        let (game, s) = fixtures::five_triangle_chain();
        let decomp = detect_chain(game.graph()).unwrap();
        (game, s, decomp)
    }

    #[test]
    fn five_triangle_chain_decomposes_as_labelled() {
        let (_, _, decomp) = figure_chain();
        assert_eq!(decomp.cycle_count(), 5);
        assert_eq!(decomp.max_cycle_len(), 3);
        assert_eq!(decomp.cycles[0], vec![0, 1, 2]);
        assert_eq!(decomp.cycles[1], vec![3, 4, 0]);
        assert_eq!(decomp.cycles[2], vec![5, 3, 6]);
        assert_eq!(decomp.cycles[3], vec![7, 5, 8]);
        assert_eq!(decomp.cycles[4], vec![9, 10, 7]);
        assert_eq!(decomp.down_link_pos, vec![None, Some(2), Some(1), Some(1), Some(2)]);
    }

    #[test]
    fn single_cycle_is_not_a_chain() {
        let game = fixtures::rotating_cycle(5);
        assert!(matches!(
            detect_chain(game.graph()),
            Err(Error::NotAChain(_))
        ));
    }

    #[test]
    fn chain_with_an_extra_edge_fails_on_degrees() {
        let (game, _) = fixtures::five_triangle_chain();
        let mut edges = game.graph().edges();
        edges.push((1, 4, 1));
        let g = WeightedDigraph::new(game.node_count(), &edges).unwrap();
        match detect_chain(&g) {
            Err(Error::NotAChain(reason)) => assert!(reason.contains("degrees")),
            other => panic!("expected a degree violation, got {other:?}"),
        }
    }

    #[test]
    fn induced_bonus_puts_one_point_on_each_link() {
        let (game, s, decomp) = figure_chain();
        let red = game.colours().colour_id("red").unwrap();
        // first cycle: only its up-link carries a bonus, for the colour of
        // the up-link's predecessor in the second cycle (node 5, red)
        let b = induced_bonus(&decomp, &game, &s, 0);
        assert_eq!(b.get(0, red), 1);
        let total: u64 = (0..game.node_count())
            .map(|i| (0..2).map(|c| b.get(i, c)).sum::<u64>())
            .sum();
        assert_eq!(total, 1);
        // a middle cycle carries bonuses on both links
        let b = induced_bonus(&decomp, &game, &s, 2);
        let positive: Vec<usize> = (0..game.node_count())
            .filter(|&i| (0..2).any(|c| b.get(i, c) > 0))
            .collect();
        assert_eq!(positive, vec![3, 5]);
    }

    #[test]
    fn figure_grades_match_the_reference_vector() {
        let (game, s, decomp) = figure_chain();
        assert_eq!(
            grades(&decomp, &game, &s),
            vec![
                Grade::Minus,
                Grade::UPlus,
                Grade::Unknown,
                Grade::Plus,
                Grade::UPlus
            ]
        );
        assert_eq!(nbr(&grades(&decomp, &game, &s)).unwrap(), 1);
        assert_eq!(guard(&grades(&decomp, &game, &s)), 0);
        assert_eq!(prefix_len(&grades(&decomp, &game, &s)), 2);
    }

    #[test]
    fn reference_progress_measures() {
        use Grade::*;
        let s1 = [Plus, UPlus, UPlus, Plus, Minus, UMinus, Unknown];
        assert_eq!(nbr(&s1).unwrap(), 5);
        assert_eq!(guard(&s1), 3);
        assert_eq!(prefix_len(&s1), 5);
        assert_eq!(mu(&s1), ProgressMeasure(3, 0, 5, -5));
        let s2 = [Plus, UPlus, Minus, Plus, UPlus, UMinus, UMinus, Unknown];
        assert_eq!(nbr(&s2).unwrap(), 3);
        assert_eq!(guard(&s2), 2);
        assert_eq!(prefix_len(&s2), 5);
        assert_eq!(mu(&s2), ProgressMeasure(2, 1, 0, -3));
        let first_row = [Plus, Plus, Plus, Plus, Unknown, UPlus, UPlus, Minus];
        assert_eq!(mu(&first_row), ProgressMeasure(0, 0, 5, -5));
        let nash = [UPlus, Plus, UPlus, Plus, Plus, UPlus, UPlus, Plus];
        assert_eq!(mu(&nash), ProgressMeasure(9, 0, 0, 0));
    }

    #[test]
    fn unicolour_chain_grades_all_u_plus() {
        let (game, _, decomp) = figure_chain();
        let s = JointStrategy::new(vec![0; game.node_count()]);
        assert!(grades(&decomp, &game, &s)
            .iter()
            .all(|&g| g == Grade::UPlus));
        assert_eq!(mu(&grades(&decomp, &game, &s)), ProgressMeasure(6, 0, 0, 0));
    }

    #[test]
    fn figure_colouring_solves_with_increasing_measure() {
        let (game, s0, decomp) = figure_chain();
        let (ne, trace, records) = solve_ne_chain(&game, &s0).unwrap();
        assert!(is_nash(&game, &ne).0);
        assert!(validate_trace(&game, &trace).is_ok());
        let (m, v) = (decomp.cycle_count(), decomp.max_cycle_len());
        assert!(trace.len() <= 3 * v * m * m * m);
        for r in &records {
            assert!(r.mu_before < r.mu_after);
            assert!(check_grade_transition(r), "iteration {r:?}");
        }
    }

    #[test]
    fn nash_start_needs_no_iterations() {
        let (game, _, _) = figure_chain();
        let s = JointStrategy::new(vec![1; game.node_count()]);
        let (ne, trace, records) = solve_ne_chain(&game, &s).unwrap();
        assert_eq!(ne, s);
        assert!(trace.is_empty());
        assert!(records.is_empty());
    }

    #[test]
    fn strong_solve_bounds_coalition_jumps() {
        let (game, s0, decomp) = figure_chain();
        let (se, trace, _, jumps) = solve_se_chain(&game, &s0).unwrap();
        assert!(jumps <= decomp.cycle_count().div_ceil(2));
        assert!(validate_trace(&game, &trace).is_ok());
        assert!(is_nash(&game, &se).0);
        assert_eq!(
            find_unicolour_deviation_from_ne(&game, &se).unwrap(),
            None,
            "no unicolour coalition may remain"
        );
    }

    #[test]
    fn weighted_or_bonused_chains_are_rejected() {
        let (game, _) = fixtures::five_triangle_chain();
        let mut edges = game.graph().edges();
        edges[0].2 = 2;
        let g = WeightedDigraph::new(game.node_count(), &edges).unwrap();
        let heavy = CoordinationGame::new(g, game.colours().clone(), game.bonuses().clone()).unwrap();
        assert!(matches!(
            solve_ne_chain(&heavy, &heavy.lowest_strategy()),
            Err(Error::ChainGameNotPlain)
        ));
    }
}
