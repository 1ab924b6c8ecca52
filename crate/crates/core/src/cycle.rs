//! Nash-equilibrium schedules for coordination games on simple directed
//! cycles, the strong-equilibrium lift and the shared clockwise round-robin
//! driver that the chain solver reuses on its sub-cycles.

use crate::dynamics::{DeviationStep, ImprovementTrace, TerminalStatus};
use crate::error::Error;
use crate::model::{
    best_response_with_pred, colour_values, is_nash_bool, payoff, CoordinationGame, JointStrategy,
    ResponsePolicy,
};
use crate::oracle::{k_equilibrium_brute, OracleConfig};

/// The four solvable families of cycle games, ordered by their deviation
/// bound. A game fitting several classifies as the one with the smallest
/// bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleVariant {
    /// Arbitrary weights, at most one node with bonuses: bound 2n-1.
    AtMostOneBonus,
    /// Arbitrary bonuses, at most one non-trivial weight: bound 3n-1.
    AtMostOneHeavyEdge,
    /// Arbitrary weights, exactly two nodes with bonuses: bound 3n.
    TwoBonusNodes,
    /// Arbitrary bonuses, exactly two non-trivial weights: bound 4n-1.
    TwoHeavyEdges,
    /// Three or more bonus nodes and three or more non-trivial weights;
    /// a Nash equilibrium may not exist.
    Unsupported,
}

impl CycleVariant {
    pub fn bound(self, n: usize) -> usize {
        match self {
            CycleVariant::AtMostOneBonus => 2 * n - 1,
            CycleVariant::AtMostOneHeavyEdge => 3 * n - 1,
            CycleVariant::TwoBonusNodes => 3 * n,
            CycleVariant::TwoHeavyEdges => 4 * n - 1,
            CycleVariant::Unsupported => usize::MAX,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CycleVariant::AtMostOneBonus => "at-most-one-bonus-node",
            CycleVariant::AtMostOneHeavyEdge => "at-most-one-heavy-edge",
            CycleVariant::TwoBonusNodes => "two-bonus-nodes",
            CycleVariant::TwoHeavyEdges => "two-heavy-edges",
            CycleVariant::Unsupported => "unsupported",
        }
    }
}

/// A classified simple cycle: the solving order is the cycle rotated so the
/// distinguished nodes sit where the schedules expect them.
#[derive(Debug, Clone)]
pub struct CycleView {
    /// Nodes in edge order; `solving_order[t]`'s predecessor on the cycle
    /// is `solving_order[t-1]` (wrapping).
    pub solving_order: Vec<usize>,
    pub variant: CycleVariant,
    /// Bonus nodes or heavy-edge targets, depending on the variant.
    pub distinguished: Vec<usize>,
}

/// Sequence of inner (`i`) / outer (`o`) strategy updates recorded at the
/// distinguished nodes: inner adopts the in-cycle predecessor's colour,
/// outer a maximal-bonus colour. A colour that is both records as inner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdateScenario(pub String);

impl UpdateScenario {
    /// The complete scenarios a terminating schedule can produce.
    pub const ADMISSIBLE: [&'static str; 10] = [
        "o", "oi", "oo", "ooi", "i", "ii", "io", "ioi", "ioo", "iooi",
    ];

    /// Empty or one of the ten admissible strings.
    pub fn is_admissible(&self) -> bool {
        self.0.is_empty() || Self::ADMISSIBLE.contains(&self.0.as_str())
    }

    /// No update may follow an `oi` or `ii` record.
    pub fn stops_after_adoption(&self) -> bool {
        for end in 2..self.0.len() {
            let tail = &self.0[end - 2..end];
            if tail == "oi" || tail == "ii" {
                return false;
            }
        }
        true
    }

    pub fn contains_triple_outer(&self) -> bool {
        self.0.contains("ooo")
    }
}

/// Walks the unique successor chain and returns the nodes in edge order
/// starting from node 0. Errors unless every node has in- and out-degree
/// one and the walk covers the whole graph.
fn cycle_ordering(game: &CoordinationGame) -> Result<Vec<usize>, Error> {
    let g = game.graph();
    let n = g.node_count();
    for i in 0..n {
        if g.in_degree(i) != 1 || g.out_degree(i) != 1 {
            return Err(Error::NotACycle);
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut at = 0usize;
    loop {
        order.push(at);
        at = g.out_edges(at)[0].0;
        if at == 0 {
            break;
        }
        if order.len() > n {
            return Err(Error::NotACycle);
        }
    }
    if order.len() != n {
        return Err(Error::NotACycle);
    }
    Ok(order)
}

/// Classifies a simple-cycle game into the least-bounded applicable variant
/// and rotates the ordering per that variant's schedule.
pub fn classify_cycle(game: &CoordinationGame) -> Result<CycleView, Error> {
    let order = cycle_ordering(game)?;
    let n = order.len();
    let bonus_nodes = game.bonus_nodes();
    let heavy_targets: Vec<usize> = {
        let mut t: Vec<usize> = game
            .graph()
            .edges()
            .iter()
            .filter(|&&(_, _, w)| w != 1)
            .map(|&(_, v, _)| v)
            .collect();
        t.sort_unstable();
        t
    };
    let rotate = |order: &[usize], first: usize| -> Vec<usize> {
        let at = order.iter().position(|&x| x == first).unwrap();
        order[at..].iter().chain(&order[..at]).copied().collect()
    };
    let rotate_last = |order: &[usize], last: usize| -> Vec<usize> {
        let at = order.iter().position(|&x| x == last).unwrap();
        let first = order[(at + 1) % n];
        rotate(order, first)
    };
    let view = if bonus_nodes.len() <= 1 {
        let solving_order = match bonus_nodes.first() {
            Some(&b) => rotate_last(&order, b),
            None => order,
        };
        CycleView {
            solving_order,
            variant: CycleVariant::AtMostOneBonus,
            distinguished: bonus_nodes,
        }
    } else if heavy_targets.len() <= 1 {
        let solving_order = match heavy_targets.first() {
            Some(&t) => rotate_last(&order, t),
            None => order,
        };
        CycleView {
            solving_order,
            variant: CycleVariant::AtMostOneHeavyEdge,
            distinguished: heavy_targets,
        }
    } else if bonus_nodes.len() == 2 {
        // the lower-id bonus node becomes node 1
        let solving_order = rotate(&order, bonus_nodes[0]);
        CycleView {
            solving_order,
            variant: CycleVariant::TwoBonusNodes,
            distinguished: bonus_nodes,
        }
    } else if heavy_targets.len() == 2 {
        // the lower-id heavy target becomes node n
        let solving_order = rotate_last(&order, heavy_targets[0]);
        CycleView {
            solving_order,
            variant: CycleVariant::TwoHeavyEdges,
            distinguished: heavy_targets,
        }
    } else {
        CycleView {
            solving_order: order,
            variant: CycleVariant::Unsupported,
            distinguished: Vec::new(),
        }
    };
    Ok(view)
}

/// Clockwise round-robin on `order` (which must follow edge direction):
/// distinguished nodes take plain best responses preferring the in-cycle
/// predecessor's colour on ties and record `i`/`o` letters from
/// `record_from_slot` on; everyone else picks max-bonus best responses.
/// Stops after a full quiet pass; errors if deviations exceed
/// `max_deviations`.
pub(crate) struct RoundRobin<'a> {
    pub order: &'a [usize],
    pub distinguished: &'a [usize],
    pub record_from_slot: usize,
    pub max_deviations: usize,
}

pub(crate) fn run_round_robin(
    game: &CoordinationGame,
    s: &mut JointStrategy,
    spec: &RoundRobin<'_>,
) -> Result<(Vec<DeviationStep>, UpdateScenario), Error> {
    let v = spec.order.len();
    debug_assert!(v >= 2);
    let mut steps = Vec::new();
    let mut scenario = String::new();
    let mut quiet = 0usize;
    let mut slot = 0usize;
    let slot_cap = 4 * v * spec.max_deviations.max(1) + v;
    while quiet < v {
        if slot > slot_cap {
            return Err(Error::Internal(format!(
                "cycle schedule still active after {slot} slots"
            )));
        }
        let pos = slot % v;
        let node = spec.order[pos];
        let pred = spec.order[(pos + v - 1) % v];
        let pred_colour = s.get(pred);
        let values = colour_values(game, s, node);
        let top = values.iter().map(|&(_, val)| val).max().expect("non-empty");
        let current = values
            .iter()
            .find(|&&(c, _)| c == s.get(node))
            .map(|&(_, val)| val)
            .expect("current colour is in the set");
        if current == top {
            quiet += 1;
            slot += 1;
            continue;
        }
        let distinguished = spec.distinguished.contains(&node);
        let policy = if distinguished {
            ResponsePolicy::PreferPredecessor
        } else {
            ResponsePolicy::PreferMb
        };
        let (choice, _) = best_response_with_pred(game, s, node, policy, Some(pred_colour));
        if distinguished && slot >= spec.record_from_slot {
            scenario.push(if choice == pred_colour { 'i' } else { 'o' });
        }
        steps.push(DeviationStep::apply(game, s, &[(node, choice)]));
        if steps.len() > spec.max_deviations {
            return Err(Error::Internal(format!(
                "cycle schedule exceeded its deviation bound {}",
                spec.max_deviations
            )));
        }
        quiet = 0;
        slot += 1;
    }
    Ok((steps, UpdateScenario(scenario)))
}

/// Runs the classified variant's schedule from `s0` (lowest-id colours per
/// node when absent). The returned strategy is a Nash equilibrium and the
/// trace length respects the variant bound; scenarios are recorded for the
/// two-bonus and two-heavy-edge schedules.
pub fn solve_ne_cycle(
    game: &CoordinationGame,
    s0: Option<&JointStrategy>,
) -> Result<(JointStrategy, ImprovementTrace, Option<UpdateScenario>), Error> {
    let view = classify_cycle(game)?;
    if view.variant == CycleVariant::Unsupported {
        return Err(Error::UnsupportedCycleVariant);
    }
    let initial = match s0 {
        Some(s) => {
            s.validate(game)?;
            s.clone()
        }
        None => game.lowest_strategy(),
    };
    let n = game.node_count();
    let record_from = match view.variant {
        CycleVariant::TwoBonusNodes => n,
        CycleVariant::TwoHeavyEdges => 2 * n - 1,
        _ => usize::MAX,
    };
    let mut s = initial.clone();
    let (steps, scenario) = run_round_robin(
        game,
        &mut s,
        &RoundRobin {
            order: &view.solving_order,
            distinguished: &view.distinguished,
            record_from_slot: record_from,
            max_deviations: view.variant.bound(n),
        },
    )?;
    debug_assert!(is_nash_bool(game, &s));
    if !scenario.is_admissible() {
        return Err(Error::Internal(format!(
            "inadmissible update scenario [{}]",
            scenario.0
        )));
    }
    let trace = ImprovementTrace {
        initial,
        steps,
        terminal: TerminalStatus::Nash,
    };
    let scenario = match view.variant {
        CycleVariant::TwoBonusNodes | CycleVariant::TwoHeavyEdges => Some(scenario),
        _ => None,
    };
    Ok((s, trace, scenario))
}

/// From a Nash equilibrium of a supported cycle game, either certifies it
/// strong or returns the unicolour strategy reached by the single
/// profitable deviation of all players, which is then strong.
///
/// Candidate colours are those shared by every node whose adoption strictly
/// improves everyone; among them the bonus of the pivot (the schedule's
/// first node) is maximised, then the lowest id wins.
pub fn lift_to_strong(
    game: &CoordinationGame,
    ne: &JointStrategy,
) -> Result<(JointStrategy, Option<DeviationStep>), Error> {
    let view = classify_cycle(game)?;
    if view.variant == CycleVariant::Unsupported {
        return Err(Error::UnsupportedCycleVariant);
    }
    if !is_nash_bool(game, ne) {
        return Err(Error::NotNash);
    }
    let n = game.node_count();
    let in_weight: Vec<u64> = (0..n).map(|i| game.graph().in_edges(i)[0].1).collect();
    let current: Vec<u64> = (0..n).map(|i| payoff(game, ne, i)).collect();
    let mut candidates = Vec::new();
    'colour: for c in 0..game.palette_len() {
        for i in 0..n {
            if !game.colour_set(i).contains(c) || ne.get(i) == c {
                continue 'colour;
            }
            if in_weight[i] + game.bonus(i, c) <= current[i] {
                continue 'colour;
            }
        }
        candidates.push(c);
    }
    let Some(&first) = candidates.first() else {
        return Ok((ne.clone(), None));
    };
    let pivot = view.solving_order[0];
    let choice = candidates
        .iter()
        .copied()
        .fold(first, |best, c| {
            if game.bonus(pivot, c) > game.bonus(pivot, best) {
                c
            } else {
                best
            }
        });
    let mut s = ne.clone();
    let switches: Vec<(usize, usize)> = (0..n).map(|i| (i, choice)).collect();
    let step = DeviationStep::apply(game, &mut s, &switches);
    Ok((s, Some(step)))
}

/// Exhaustively confirms that a Nash equilibrium of a cycle game admits no
/// profitable coalition of size at most n-1.
pub fn check_k_equilibrium_property(
    game: &CoordinationGame,
    ne: &JointStrategy,
    cfg: &OracleConfig,
) -> Result<bool, Error> {
    cycle_ordering(game)?;
    if !is_nash_bool(game, ne) {
        return Err(Error::NotNash);
    }
    Ok(k_equilibrium_brute(game, ne, game.node_count() - 1, cfg)?.is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::validate_trace;
    use crate::fixtures;
    use crate::model::is_nash;
    use crate::oracle::is_strong_brute;

    #[test]
    fn plain_cycle_classifies_as_single_bonus_variant() {
        let game = fixtures::rotating_cycle(5);
        let view = classify_cycle(&game).unwrap();
        assert_eq!(view.variant, CycleVariant::AtMostOneBonus);
        assert!(view.distinguished.is_empty());
    }

    #[test]
    fn heavy_triangle_is_unsupported() {
        let game = fixtures::heavy_triangle_bonuses();
        let view = classify_cycle(&game).unwrap();
        assert_eq!(view.variant, CycleVariant::Unsupported);
        assert!(matches!(
            solve_ne_cycle(&game, None),
            Err(Error::UnsupportedCycleVariant)
        ));
    }

    #[test]
    fn two_heavy_edges_with_bonuses_classify_and_rename() {
        let mut b = CoordinationGame::builder(&["a", "b", "c"]);
        let nodes: Vec<usize> = (0..5).map(|_| b.node(&["a", "b", "c"])).collect();
        for i in 0..5 {
            let w = if i == 1 || i == 3 { 2 } else { 1 };
            b.edge(nodes[i], nodes[(i + 1) % 5], w);
        }
        b.bonus(nodes[0], "a", 1)
            .bonus(nodes[2], "b", 2)
            .bonus(nodes[4], "c", 3);
        let game = b.build().unwrap();
        let view = classify_cycle(&game).unwrap();
        assert_eq!(view.variant, CycleVariant::TwoHeavyEdges);
        assert_eq!(view.distinguished, vec![2, 4]);
        // the lower-id heavy target sits at the end of the solving order
        assert_eq!(*view.solving_order.last().unwrap(), 2);
    }

    #[test]
    fn non_cycle_is_rejected() {
        let game = fixtures::bidirectional_square();
        assert!(matches!(classify_cycle(&game), Err(Error::NotACycle)));
    }

    #[test]
    fn nash_start_produces_empty_trace() {
        let game = fixtures::rotating_cycle(6);
        let s = JointStrategy::new(vec![1; 6]);
        let (ne, trace, scenario) = solve_ne_cycle(&game, Some(&s)).unwrap();
        assert_eq!(ne, s);
        assert!(trace.is_empty());
        assert_eq!(scenario, None);
    }

    #[test]
    fn single_bonus_schedule_respects_its_bound() {
        // the long-path game has one bonus node; the renamed schedule must
        // finish within 2n-1 even though the unrenamed walk needs 3n-5.
        for n in [5, 6, 9] {
            let game = fixtures::slow_convergence_cycle(n);
            let s0 = fixtures::slow_convergence_start(&game);
            let (ne, trace, _) = solve_ne_cycle(&game, Some(&s0)).unwrap();
            assert!(is_nash(&game, &ne).0);
            assert!(trace.len() <= 2 * n - 1, "n={n} len={}", trace.len());
            assert!(validate_trace(&game, &trace).is_ok());
        }
    }

    #[test]
    fn lift_keeps_maximal_unicolour_equilibrium() {
        let game = fixtures::rotating_cycle(5);
        let ne = JointStrategy::new(vec![0; 5]);
        let (se, step) = lift_to_strong(&game, &ne).unwrap();
        assert_eq!(se, ne);
        assert!(step.is_none());
    }

    #[test]
    fn lift_rejects_non_equilibria() {
        let game = fixtures::rotating_cycle(5);
        let s = JointStrategy::new(vec![0, 1, 0, 0, 0]);
        assert!(matches!(lift_to_strong(&game, &s), Err(Error::NotNash)));
    }

    #[test]
    fn lift_output_is_strong_on_a_bonus_cycle() {
        let mut b = CoordinationGame::builder(&["a", "b"]);
        let nodes: Vec<usize> = (0..4).map(|_| b.node(&["a", "b"])).collect();
        for i in 0..4 {
            b.edge(nodes[i], nodes[(i + 1) % 4], 1);
        }
        b.bonus(nodes[2], "b", 1);
        let game = b.build().unwrap();
        let (ne, trace, _) = solve_ne_cycle(&game, None).unwrap();
        assert!(validate_trace(&game, &trace).is_ok());
        let (se, _) = lift_to_strong(&game, &ne).unwrap();
        let cfg = OracleConfig::default();
        assert!(is_strong_brute(&game, &se, &cfg).unwrap().is_ok());
    }

    #[test]
    fn unicolour_equilibrium_is_n_minus_one_stable() {
        let game = fixtures::rotating_cycle(3);
        let ne = JointStrategy::new(vec![0; 3]);
        let cfg = OracleConfig::default();
        assert!(check_k_equilibrium_property(&game, &ne, &cfg).unwrap());
        let not_ne = JointStrategy::new(vec![0, 1, 0]);
        assert!(matches!(
            check_k_equilibrium_property(&game, &not_ne, &cfg),
            Err(Error::NotNash)
        ));
    }

    #[test]
    fn scenario_admissibility_rules() {
        for s in UpdateScenario::ADMISSIBLE {
            let sc = UpdateScenario(s.to_string());
            assert!(sc.is_admissible());
            assert!(sc.stops_after_adoption(), "{s}");
            assert!(!sc.contains_triple_outer(), "{s}");
        }
        assert!(!UpdateScenario("ooo".into()).is_admissible());
        assert!(!UpdateScenario("oio".into()).stops_after_adoption());
        assert!(!UpdateScenario("iioo".into()).stops_after_adoption());
    }
}
