//! 3-CNF satisfiability to Nash-equilibrium existence: variable nodes feed
//! clause gadgets whose three ports can only stabilise by matching their
//! variable, weight elimination to unweighted form, and the pairwise
//! partial-payoff view of a game.

use std::collections::BTreeMap;

use crate::dag::solve_dag;
use crate::error::Error;
use crate::model::{
    is_nash_bool, ColourId, ColourSet, CoordinationGame, GameBuilder, JointStrategy,
};

/// A propositional literal: variable index (0-based) and polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Self {
        Literal {
            var,
            positive: false,
        }
    }
}

/// CNF formula with exactly three literals per clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<[Literal; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self, Error> {
        if clauses.is_empty() {
            return Err(Error::Internal("a formula needs at least one clause".into()));
        }
        for clause in &clauses {
            for lit in clause {
                if lit.var >= num_vars {
                    return Err(Error::Internal(format!(
                        "literal uses variable {} outside 1..={}",
                        lit.var + 1,
                        num_vars
                    )));
                }
            }
        }
        Ok(Self { num_vars, clauses })
    }

    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause
                .iter()
                .any(|lit| assignment[lit.var] == lit.positive)
        })
    }

    /// Exhaustive satisfiability check; fine for the desk-scale corpora.
    pub fn brute_force_sat(&self) -> Option<Vec<bool>> {
        for bits in 0u64..(1 << self.num_vars) {
            let assignment: Vec<bool> = (0..self.num_vars).map(|v| (bits >> v) & 1 == 1).collect();
            if self.evaluate(&assignment) {
                return Some(assignment);
            }
        }
        None
    }
}

/// Colour names shared by every game the reduction produces. `top`/`bot`
/// stand for the two truth values.
pub const REDUCTION_PALETTE: [&str; 5] = ["red", "green", "blue", "top", "bot"];

fn truth_colour(value: bool) -> &'static str {
    if value {
        "top"
    } else {
        "bot"
    }
}

/// Parameters of one clause gadget: the truth colour each port shares with
/// its variable node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GadgetSpec {
    pub index: usize,
    pub x: bool,
    pub y: bool,
    pub z: bool,
}

/// Node ids of one gadget inside a reduced game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetNodes {
    /// The three ports that receive the weight-4 clause edges.
    pub a_port: usize,
    pub b_port: usize,
    pub c_port: usize,
    /// Fixed-colour feeders guaranteeing each port a payoff of 2.
    pub red_source: usize,
    pub green_source: usize,
    pub blue_source: usize,
    /// Two-colour relays copying a port and feeding the next one.
    pub a_to_b_relay: usize,
    pub b_to_c_relay: usize,
    pub c_to_a_relay: usize,
}

impl GadgetNodes {
    pub fn all(&self) -> [usize; 9] {
        [
            self.a_port,
            self.b_port,
            self.c_port,
            self.red_source,
            self.green_source,
            self.blue_source,
            self.a_to_b_relay,
            self.b_to_c_relay,
            self.c_to_a_relay,
        ]
    }

    pub fn ports(&self) -> [usize; 3] {
        [self.a_port, self.b_port, self.c_port]
    }
}

/// Appends the nine-node gadget to `builder` and wires its internal edges.
fn append_gadget(builder: &mut GameBuilder, spec: GadgetSpec) -> GadgetNodes {
    let a_port = builder.node(&["red", "green", truth_colour(spec.x)]);
    let b_port = builder.node(&["red", "blue", truth_colour(spec.y)]);
    let c_port = builder.node(&["green", "blue", truth_colour(spec.z)]);
    let red_source = builder.node(&["red"]);
    let green_source = builder.node(&["green"]);
    let blue_source = builder.node(&["blue"]);
    let a_to_b_relay = builder.node(&["red", "green"]);
    let b_to_c_relay = builder.node(&["red", "blue"]);
    let c_to_a_relay = builder.node(&["green", "blue"]);
    // inner port cycle
    builder.edge(a_port, b_port, 1);
    builder.edge(b_port, c_port, 1);
    builder.edge(c_port, a_port, 1);
    // constant feeders
    builder.edge(red_source, a_port, 2);
    builder.edge(green_source, c_port, 2);
    builder.edge(blue_source, b_port, 2);
    // relay loops: each port taps the previous one through a relay
    builder.edge(a_port, a_to_b_relay, 1);
    builder.edge(a_to_b_relay, b_port, 2);
    builder.edge(b_port, b_to_c_relay, 1);
    builder.edge(b_to_c_relay, c_port, 2);
    builder.edge(c_port, c_to_a_relay, 1);
    builder.edge(c_to_a_relay, a_port, 2);
    GadgetNodes {
        a_port,
        b_port,
        c_port,
        red_source,
        green_source,
        blue_source,
        a_to_b_relay,
        b_to_c_relay,
        c_to_a_relay,
    }
}

/// The standalone nine-node gadget; it has no Nash equilibrium for any of
/// the eight parameter settings.
pub fn build_gadget(spec: GadgetSpec) -> (CoordinationGame, GadgetNodes) {
    let mut builder = CoordinationGame::builder(&REDUCTION_PALETTE);
    let nodes = append_gadget(&mut builder, spec);
    (builder.build().expect("gadget is valid"), nodes)
}

/// A reduced game together with its node layout.
#[derive(Debug, Clone)]
pub struct ReducedGame {
    pub game: CoordinationGame,
    /// One variable node per propositional variable, in variable order.
    pub variable_nodes: Vec<usize>,
    /// One gadget per clause, in clause order.
    pub gadgets: Vec<GadgetNodes>,
    pub formula: CnfFormula,
}

/// Variable nodes first, then one gadget per clause with a weight-4 edge
/// from each literal's variable to the matching port. The reduced game has
/// a Nash equilibrium exactly when the formula is satisfiable.
pub fn reduce_cnf_to_game(formula: &CnfFormula) -> ReducedGame {
    let mut builder = CoordinationGame::builder(&REDUCTION_PALETTE);
    let variable_nodes: Vec<usize> = (0..formula.num_vars)
        .map(|_| builder.node(&["top", "bot"]))
        .collect();
    let mut gadgets = Vec::with_capacity(formula.clauses.len());
    for (index, clause) in formula.clauses.iter().enumerate() {
        let spec = GadgetSpec {
            index,
            x: clause[0].positive,
            y: clause[1].positive,
            z: clause[2].positive,
        };
        let nodes = append_gadget(&mut builder, spec);
        for (lit, port) in clause.iter().zip(nodes.ports()) {
            builder.edge(variable_nodes[lit.var], port, 4);
        }
        gadgets.push(nodes);
    }
    let game = builder.build().expect("reduced game is valid");
    ReducedGame {
        game,
        variable_nodes,
        gadgets,
        formula: formula.clone(),
    }
}

/// How weight elimination treats weight-1 edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitEdgeRule {
    /// Insert a relay for every edge, weight 1 included.
    Uniform,
    /// Keep weight-1 edges direct.
    PreserveUnits,
}

/// Replaces each weighted edge `i -> j` by `w` relay nodes carrying `i`'s
/// colour set, each wired `i -> relay -> j` with unit weights. Nash
/// equilibria correspond across the two games: relays copy their source.
pub fn eliminate_weights(
    game: &CoordinationGame,
    rule: UnitEdgeRule,
) -> Result<CoordinationGame, Error> {
    let n = game.node_count();
    let palette: Vec<&str> = game
        .colours()
        .palette()
        .iter()
        .map(|s| s.as_str())
        .collect();
    let mut builder = CoordinationGame::builder(&palette);
    for i in 0..n {
        let set: Vec<ColourId> = game.colour_set(i).iter().collect();
        builder.node_ids(&set);
        for c in game.colour_set(i).iter() {
            let b = game.bonus(i, c);
            if b > 0 {
                builder.bonus_id(i, c, b);
            }
        }
    }
    for (u, v, w) in game.graph().edges() {
        if w == 1 && rule == UnitEdgeRule::PreserveUnits {
            builder.edge(u, v, 1);
            continue;
        }
        let set: Vec<ColourId> = game.colour_set(u).iter().collect();
        for _ in 0..w {
            let relay = builder.node_ids(&set);
            builder.edge(u, relay, 1);
            builder.edge(relay, v, 1);
        }
    }
    builder.build()
}

/// Reads the truth assignment off the variable nodes of an equilibrium.
pub fn extract_assignment(reduced: &ReducedGame, ne: &JointStrategy) -> Result<Vec<bool>, Error> {
    if !is_nash_bool(&reduced.game, ne) {
        return Err(Error::NotNash);
    }
    let top = reduced
        .game
        .colours()
        .colour_id("top")
        .expect("reduction palette");
    let assignment: Vec<bool> = reduced
        .variable_nodes
        .iter()
        .map(|&x| ne.get(x) == top)
        .collect();
    if !reduced.formula.evaluate(&assignment) {
        return Err(Error::Internal(
            "equilibrium of a reduced game must satisfy the formula".into(),
        ));
    }
    Ok(assignment)
}

/// Builds a Nash equilibrium of the reduced game from a satisfying
/// assignment: variable nodes take their truth colours, every satisfied
/// port locks onto its variable, and the remaining acyclic part is solved
/// by the one-pass DAG schedule before merging.
pub fn complete_from_assignment(
    reduced: &ReducedGame,
    assignment: &[bool],
) -> Result<JointStrategy, Error> {
    if !reduced.formula.evaluate(assignment) {
        return Err(Error::Internal(
            "assignment does not satisfy the formula".into(),
        ));
    }
    let game = &reduced.game;
    let colour = |name: &str| game.colours().colour_id(name).expect("reduction palette");
    let n = game.node_count();
    let mut fixed: Vec<Option<ColourId>> = vec![None; n];
    for (v, &node) in reduced.variable_nodes.iter().enumerate() {
        fixed[node] = Some(colour(truth_colour(assignment[v])));
    }
    for (clause, gadget) in reduced.formula.clauses.iter().zip(&reduced.gadgets) {
        for (lit, port) in clause.iter().zip(gadget.ports()) {
            if assignment[lit.var] == lit.positive {
                fixed[port] = Some(colour(truth_colour(lit.positive)));
            }
        }
    }
    // residual game: surviving nodes keep their sets, edges among them stay
    let keep: Vec<usize> = (0..n).filter(|&i| fixed[i].is_none()).collect();
    let old_to_new: BTreeMap<usize, usize> =
        keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let palette: Vec<&str> = game
        .colours()
        .palette()
        .iter()
        .map(|s| s.as_str())
        .collect();
    let mut builder = CoordinationGame::builder(&palette);
    for &old in &keep {
        let set: Vec<ColourId> = game.colour_set(old).iter().collect();
        builder.node_ids(&set);
    }
    for (u, v, w) in game.graph().edges() {
        if let (Some(&nu), Some(&nv)) = (old_to_new.get(&u), old_to_new.get(&v)) {
            builder.edge(nu, nv, w);
        }
    }
    let residual = builder.build()?;
    let (residual_ne, _) = solve_dag(&residual, &residual.lowest_strategy())?;
    let mut merged = Vec::with_capacity(n);
    for i in 0..n {
        match fixed[i] {
            Some(c) => merged.push(c),
            None => merged.push(residual_ne.get(old_to_new[&i])),
        }
    }
    let s = JointStrategy::new(merged);
    s.validate(game)?;
    Ok(s)
}

/// Pairwise partial payoff tables: for the edge `j -> i` the observer `i`
/// earns the edge weight whenever the two colours agree. Absent pairs are
/// identically zero. Summing a node's tables over its in-neighbours and
/// adding its bonus reproduces the payoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolymatrixView {
    /// `(observer, neighbour) -> l x l matrix` indexed by
    /// `observer colour * l + neighbour colour`.
    pub tables: BTreeMap<(usize, usize), Vec<u64>>,
    pub palette_len: usize,
}

impl PolymatrixView {
    pub fn partial(&self, observer: usize, neighbour: usize, own: ColourId, theirs: ColourId) -> u64 {
        match self.tables.get(&(observer, neighbour)) {
            Some(t) => t[own * self.palette_len + theirs],
            None => 0,
        }
    }

    /// Payoff reconstructed from the tables plus the bonus.
    pub fn payoff(&self, game: &CoordinationGame, s: &JointStrategy, i: usize) -> u64 {
        let mut total = game.bonus(i, s.get(i));
        for j in 0..game.node_count() {
            if j != i {
                total += self.partial(i, j, s.get(i), s.get(j));
            }
        }
        total
    }
}

/// The game seen as a polymatrix game over its edges.
pub fn export_polymatrix(game: &CoordinationGame) -> PolymatrixView {
    let l = game.palette_len();
    let mut tables = BTreeMap::new();
    for i in 0..game.node_count() {
        for &(j, w) in game.graph().in_edges(i) {
            let mut table = vec![0u64; l * l];
            for own in game.colour_set(i).iter() {
                for theirs in game.colour_set(j).iter() {
                    if own == theirs {
                        table[own * l + theirs] = w;
                    }
                }
            }
            tables.insert((i, j), table);
        }
    }
    PolymatrixView {
        tables,
        palette_len: l,
    }
}

/// Expands a colour set into ids; helper for tests building games off the
/// reduction palette.
pub fn colour_ids(set: &ColourSet) -> Vec<ColourId> {
    set.iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{is_nash, payoff};
    use crate::oracle::{enumerate_nash, OracleConfig, StrategySpace};

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    #[test]
    fn every_gadget_parameterisation_lacks_equilibria() {
        for bits in 0..8u8 {
            let spec = GadgetSpec {
                index: 0,
                x: bits & 1 == 1,
                y: bits & 2 == 2,
                z: bits & 4 == 4,
            };
            let (game, _) = build_gadget(spec);
            assert_eq!(game.node_count(), 9);
            assert_eq!(game.graph().edge_count(), 12);
            assert!(
                enumerate_nash(&game, &cfg()).unwrap().is_empty(),
                "parameters {spec:?}"
            );
        }
    }

    #[test]
    fn removing_the_red_feeder_admits_an_equilibrium() {
        let (game, nodes) = build_gadget(GadgetSpec {
            index: 0,
            x: true,
            y: true,
            z: true,
        });
        let edges: Vec<(usize, usize, u64)> = game
            .graph()
            .edges()
            .into_iter()
            .filter(|&(u, v, _)| (u, v) != (nodes.red_source, nodes.a_port))
            .collect();
        let graph = crate::model::WeightedDigraph::new(game.node_count(), &edges).unwrap();
        let mutated =
            CoordinationGame::new(graph, game.colours().clone(), game.bonuses().clone()).unwrap();
        assert!(!enumerate_nash(&mutated, &cfg()).unwrap().is_empty());
    }

    #[test]
    fn single_positive_clause_reduces_to_a_solvable_game() {
        let formula = CnfFormula::new(
            3,
            vec![[Literal::pos(0), Literal::pos(1), Literal::pos(2)]],
        )
        .unwrap();
        let reduced = reduce_cnf_to_game(&formula);
        assert_eq!(reduced.game.node_count(), 3 + 9);
        let nash = enumerate_nash(&reduced.game, &cfg()).unwrap();
        assert!(!nash.is_empty());
        let assignment = extract_assignment(&reduced, &nash[0]).unwrap();
        assert!(formula.evaluate(&assignment));
    }

    #[test]
    fn contradictory_clauses_reduce_to_an_empty_game() {
        let formula = CnfFormula::new(
            1,
            vec![
                [Literal::pos(0), Literal::pos(0), Literal::pos(0)],
                [Literal::neg(0), Literal::neg(0), Literal::neg(0)],
            ],
        )
        .unwrap();
        let reduced = reduce_cnf_to_game(&formula);
        assert!(enumerate_nash(&reduced.game, &cfg()).unwrap().is_empty());
    }

    #[test]
    fn two_clause_reduction_matches_the_reference_layout() {
        // (!x2 | x3 | x1) and (x4 | !x5 | !x3)
        let formula = CnfFormula::new(
            5,
            vec![
                [Literal::neg(1), Literal::pos(2), Literal::pos(0)],
                [Literal::pos(3), Literal::neg(4), Literal::neg(2)],
            ],
        )
        .unwrap();
        let reduced = reduce_cnf_to_game(&formula);
        assert_eq!(reduced.variable_nodes.len(), 5);
        assert_eq!(reduced.gadgets.len(), 2);
        assert_eq!(reduced.game.node_count(), 5 + 18);
        let heavy: Vec<(usize, usize, u64)> = reduced
            .game
            .graph()
            .edges()
            .into_iter()
            .filter(|&(_, _, w)| w == 4)
            .collect();
        assert_eq!(heavy.len(), 6);
        let g0 = &reduced.gadgets[0];
        let g1 = &reduced.gadgets[1];
        let x = &reduced.variable_nodes;
        assert!(heavy.contains(&(x[1], g0.a_port, 4)));
        assert!(heavy.contains(&(x[2], g0.b_port, 4)));
        assert!(heavy.contains(&(x[0], g0.c_port, 4)));
        assert!(heavy.contains(&(x[3], g1.a_port, 4)));
        assert!(heavy.contains(&(x[4], g1.b_port, 4)));
        assert!(heavy.contains(&(x[2], g1.c_port, 4)));
        // first gadget parameters (bot, top, top); second (top, bot, bot)
        let bot = reduced.game.colours().colour_id("bot").unwrap();
        let top = reduced.game.colours().colour_id("top").unwrap();
        assert!(reduced.game.colour_set(g0.a_port).contains(bot));
        assert!(reduced.game.colour_set(g0.b_port).contains(top));
        assert!(reduced.game.colour_set(g0.c_port).contains(top));
        assert!(reduced.game.colour_set(g1.a_port).contains(top));
        assert!(reduced.game.colour_set(g1.b_port).contains(bot));
        assert!(reduced.game.colour_set(g1.c_port).contains(bot));
    }

    #[test]
    fn completion_produces_an_equilibrium_and_round_trips() {
        let formula = CnfFormula::new(
            2,
            vec![[Literal::pos(0), Literal::neg(1), Literal::neg(1)]],
        )
        .unwrap();
        let reduced = reduce_cnf_to_game(&formula);
        for assignment in [[true, true], [true, false], [false, false]] {
            assert!(formula.evaluate(&assignment));
            let s = complete_from_assignment(&reduced, &assignment).unwrap();
            assert!(is_nash(&reduced.game, &s).0, "assignment {assignment:?}");
            let back = extract_assignment(&reduced, &s).unwrap();
            assert_eq!(back, assignment.to_vec());
        }
    }

    #[test]
    fn weight_elimination_counts_relays_per_unit_of_weight() {
        let formula = CnfFormula::new(
            1,
            vec![[Literal::pos(0), Literal::pos(0), Literal::pos(0)]],
        )
        .unwrap();
        let reduced = reduce_cnf_to_game(&formula);
        let unweighted = eliminate_weights(&reduced.game, UnitEdgeRule::PreserveUnits).unwrap();
        assert!(unweighted.graph().non_trivial_weight_count() == 0);
        // a weight-4 clause edge becomes 4 relays and 8 unit edges
        let n_before = reduced.game.node_count();
        let w2_edges = 6; // six feeder edges of weight 2 per gadget
        let w4_edges = 3;
        assert_eq!(
            unweighted.node_count(),
            n_before + 2 * w2_edges + 4 * w4_edges
        );
    }

    #[test]
    fn weight_elimination_preserves_equilibrium_existence() {
        // positive case: a solvable two-node weighted game
        let mut b = CoordinationGame::builder(&["a", "b"]);
        let u = b.node(&["a", "b"]);
        let v = b.node(&["a", "b"]);
        b.edge(u, v, 3);
        let game = b.build().unwrap();
        for rule in [UnitEdgeRule::Uniform, UnitEdgeRule::PreserveUnits] {
            let flat = eliminate_weights(&game, rule).unwrap();
            assert!(!enumerate_nash(&flat, &cfg()).unwrap().is_empty());
        }
        // negative case: the weighted triangle without equilibria
        let game = fixtures::heavy_triangle_bonuses();
        for rule in [UnitEdgeRule::Uniform, UnitEdgeRule::PreserveUnits] {
            let flat = eliminate_weights(&game, rule).unwrap();
            assert!(enumerate_nash(&flat, &cfg()).unwrap().is_empty(), "{rule:?}");
        }
    }

    #[test]
    fn polymatrix_tables_reproduce_payoffs() {
        let (game, s) = fixtures::satellite_triangle();
        let view = export_polymatrix(&game);
        for i in 0..game.node_count() {
            assert_eq!(view.payoff(&game, &s, i), payoff(&game, &s, i));
        }
        // edge entries are exactly 1 on matching colours of an edge
        for ((i, j), table) in &view.tables {
            assert!(game.graph().weight(*j, *i).is_some());
            for own in 0..game.palette_len() {
                for theirs in 0..game.palette_len() {
                    let expect = if own == theirs
                        && game.colour_set(*i).contains(own)
                        && game.colour_set(*j).contains(theirs)
                    {
                        1
                    } else {
                        0
                    };
                    assert_eq!(table[own * game.palette_len() + theirs], expect);
                }
            }
        }
    }

    #[test]
    fn polymatrix_view_of_random_strategies() {
        let game = fixtures::heavy_triangle_bonuses();
        let view = export_polymatrix(&game);
        for s in StrategySpace::new(&game, 1 << 10).unwrap() {
            for i in 0..game.node_count() {
                assert_eq!(view.payoff(&game, &s, i), payoff(&game, &s, i));
            }
        }
    }
}
