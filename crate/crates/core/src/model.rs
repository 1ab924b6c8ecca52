//! Core game representation: weighted digraphs, colour assignments, bonuses,
//! joint strategies, payoffs and best responses.
//!
//! Nodes are indexed `0..n` internally; the text formats in [`crate::io`]
//! use 1-based ids. Colours are interned to dense ids `0..l` against a
//! palette of names.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;

/// Dense colour id into the game palette.
pub type ColourId = usize;

/// A directed graph without self loops or parallel edges, every edge
/// carrying a positive integer weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedDigraph {
    node_count: usize,
    edge_count: usize,
    // per target node: (source, weight), sorted by source
    in_edges: Vec<Vec<(usize, u64)>>,
    // per source node: (target, weight), sorted by target
    out_edges: Vec<Vec<(usize, u64)>>,
}

impl WeightedDigraph {
    /// Builds a graph over `node_count` nodes from `(source, target, weight)`
    /// triples. Requires `node_count > 1`, no self loops, no duplicate
    /// ordered pairs and weights >= 1.
    pub fn new(node_count: usize, edges: &[(usize, usize, u64)]) -> Result<Self, Error> {
        if node_count < 2 {
            return Err(Error::TooFewNodes(node_count));
        }
        let mut in_edges = vec![Vec::new(); node_count];
        let mut out_edges = vec![Vec::new(); node_count];
        let mut seen = BTreeSet::new();
        for &(u, v, w) in edges {
            if u >= node_count || v >= node_count {
                return Err(Error::NodeOutOfRange {
                    node: u.max(v),
                    count: node_count,
                });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if w == 0 {
                return Err(Error::ZeroWeight { from: u, to: v });
            }
            if !seen.insert((u, v)) {
                return Err(Error::ParallelEdge { from: u, to: v });
            }
            out_edges[u].push((v, w));
            in_edges[v].push((u, w));
        }
        for list in in_edges.iter_mut().chain(out_edges.iter_mut()) {
            list.sort_unstable();
        }
        Ok(Self {
            node_count,
            edge_count: edges.len(),
            in_edges,
            out_edges,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Incoming edges of `node` as `(source, weight)`, sorted by source.
    pub fn in_edges(&self, node: usize) -> &[(usize, u64)] {
        &self.in_edges[node]
    }

    /// Outgoing edges of `node` as `(target, weight)`, sorted by target.
    pub fn out_edges(&self, node: usize) -> &[(usize, u64)] {
        &self.out_edges[node]
    }

    pub fn in_degree(&self, node: usize) -> usize {
        self.in_edges[node].len()
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.out_edges[node].len()
    }

    pub fn weight(&self, from: usize, to: usize) -> Option<u64> {
        self.in_edges[to]
            .iter()
            .find(|&&(u, _)| u == from)
            .map(|&(_, w)| w)
    }

    /// All edges as `(source, target, weight)`, sorted by `(source, target)`.
    pub fn edges(&self) -> Vec<(usize, usize, u64)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, targets) in self.out_edges.iter().enumerate() {
            for &(v, w) in targets {
                out.push((u, v, w));
            }
        }
        out
    }

    /// Number of edges whose weight differs from 1.
    pub fn non_trivial_weight_count(&self) -> usize {
        self.out_edges
            .iter()
            .flatten()
            .filter(|&&(_, w)| w != 1)
            .count()
    }
}

/// Set of colour ids available to one node. Backed by a 64-bit mask while
/// the palette fits, by a sorted id list otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColourSet {
    Mask(u64),
    Sorted(Vec<ColourId>),
}

impl ColourSet {
    pub fn from_ids(ids: &[ColourId], palette_len: usize) -> Result<Self, Error> {
        if ids.is_empty() {
            return Err(Error::EmptyColourSet);
        }
        let mut sorted: Vec<ColourId> = ids.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &c in &sorted {
            if c >= palette_len {
                return Err(Error::ColourOutOfRange {
                    colour: c,
                    palette: palette_len,
                });
            }
        }
        if palette_len <= 64 {
            let mut mask = 0u64;
            for &c in &sorted {
                mask |= 1 << c;
            }
            Ok(ColourSet::Mask(mask))
        } else {
            Ok(ColourSet::Sorted(sorted))
        }
    }

    pub fn contains(&self, c: ColourId) -> bool {
        match self {
            ColourSet::Mask(m) => c < 64 && (m >> c) & 1 == 1,
            ColourSet::Sorted(v) => v.binary_search(&c).is_ok(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ColourSet::Mask(m) => m.count_ones() as usize,
            ColourSet::Sorted(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Colour ids in increasing order.
    pub fn iter(&self) -> Box<dyn Iterator<Item = ColourId> + '_> {
        match self {
            ColourSet::Mask(m) => {
                let m = *m;
                Box::new((0..64).filter(move |c| (m >> c) & 1 == 1))
            }
            ColourSet::Sorted(v) => Box::new(v.iter().copied()),
        }
    }

    /// Smallest colour id in the set.
    pub fn lowest(&self) -> ColourId {
        self.iter().next().expect("colour set is never empty")
    }
}

/// Palette of colour names plus a non-empty colour set per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColourAssignment {
    palette: Vec<String>,
    per_node: Vec<ColourSet>,
}

impl ColourAssignment {
    pub fn new(palette: Vec<String>, per_node: Vec<ColourSet>) -> Result<Self, Error> {
        let mut seen = BTreeSet::new();
        for name in &palette {
            if !seen.insert(name.clone()) {
                return Err(Error::DuplicateColour(name.clone()));
            }
        }
        Ok(Self { palette, per_node })
    }

    pub fn palette(&self) -> &[String] {
        &self.palette
    }

    pub fn palette_len(&self) -> usize {
        self.palette.len()
    }

    pub fn colour_name(&self, c: ColourId) -> &str {
        &self.palette[c]
    }

    pub fn colour_id(&self, name: &str) -> Option<ColourId> {
        self.palette.iter().position(|p| p == name)
    }

    pub fn set(&self, node: usize) -> &ColourSet {
        &self.per_node[node]
    }
}

/// Total map `(node, colour) -> bonus`, implicitly zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BonusFunction {
    palette_len: usize,
    values: Vec<u64>,
}

impl BonusFunction {
    pub fn zero(node_count: usize, palette_len: usize) -> Self {
        Self {
            palette_len,
            values: vec![0; node_count * palette_len],
        }
    }

    pub fn set(&mut self, node: usize, colour: ColourId, value: u64) {
        self.values[node * self.palette_len + colour] = value;
    }

    pub fn get(&self, node: usize, colour: ColourId) -> u64 {
        self.values[node * self.palette_len + colour]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
}

/// A coordination game: weighted digraph, colour sets and bonuses.
///
/// A node's payoff is the summed weight of in-edges from same-coloured
/// neighbours plus the bonus of its chosen colour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinationGame {
    graph: WeightedDigraph,
    colours: ColourAssignment,
    bonuses: BonusFunction,
}

impl CoordinationGame {
    pub fn new(
        graph: WeightedDigraph,
        colours: ColourAssignment,
        bonuses: BonusFunction,
    ) -> Result<Self, Error> {
        let n = graph.node_count();
        if colours.per_node.len() != n {
            return Err(Error::InconsistentNodeCount {
                expected: n,
                got: colours.per_node.len(),
            });
        }
        let l = colours.palette_len();
        if bonuses.palette_len != l || bonuses.values.len() != n * l {
            return Err(Error::InconsistentNodeCount {
                expected: n * l,
                got: bonuses.values.len(),
            });
        }
        for (i, set) in colours.per_node.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::EmptyColourSetAt(i));
            }
        }
        Ok(Self {
            graph,
            colours,
            bonuses,
        })
    }

    pub fn builder(palette: &[&str]) -> GameBuilder {
        GameBuilder::new(palette)
    }

    pub fn graph(&self) -> &WeightedDigraph {
        &self.graph
    }

    pub fn colours(&self) -> &ColourAssignment {
        &self.colours
    }

    pub fn bonuses(&self) -> &BonusFunction {
        &self.bonuses
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn palette_len(&self) -> usize {
        self.colours.palette_len()
    }

    pub fn colour_set(&self, node: usize) -> &ColourSet {
        self.colours.set(node)
    }

    pub fn bonus(&self, node: usize, colour: ColourId) -> u64 {
        self.bonuses.get(node, colour)
    }

    /// True if some available colour of `node` carries a positive bonus.
    pub fn node_has_bonus(&self, node: usize) -> bool {
        self.colour_set(node).iter().any(|c| self.bonus(node, c) > 0)
    }

    /// Nodes with at least one positive bonus on an available colour.
    pub fn bonus_nodes(&self) -> Vec<usize> {
        (0..self.node_count())
            .filter(|&i| self.node_has_bonus(i))
            .collect()
    }

    /// Maximal bonus over the node's available colours.
    pub fn max_bonus(&self, node: usize) -> u64 {
        self.colour_set(node)
            .iter()
            .map(|c| self.bonus(node, c))
            .max()
            .unwrap_or(0)
    }

    /// The set of available colours of `node` attaining its maximal bonus.
    pub fn max_bonus_colours(&self, node: usize) -> Vec<ColourId> {
        let top = self.max_bonus(node);
        self.colour_set(node)
            .iter()
            .filter(|&c| self.bonus(node, c) == top)
            .collect()
    }

    /// Strategy assigning every node its lowest available colour id.
    pub fn lowest_strategy(&self) -> JointStrategy {
        JointStrategy::new((0..self.node_count()).map(|i| self.colour_set(i).lowest()).collect())
    }
}

/// One colour choice per node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JointStrategy {
    choice: Vec<ColourId>,
}

impl JointStrategy {
    pub fn new(choice: Vec<ColourId>) -> Self {
        Self { choice }
    }

    pub fn get(&self, node: usize) -> ColourId {
        self.choice[node]
    }

    pub fn set(&mut self, node: usize, colour: ColourId) {
        self.choice[node] = colour;
    }

    pub fn len(&self) -> usize {
        self.choice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choice.is_empty()
    }

    pub fn choices(&self) -> &[ColourId] {
        &self.choice
    }

    /// Checks that every node picks a colour from its own set.
    pub fn validate(&self, game: &CoordinationGame) -> Result<(), Error> {
        if self.choice.len() != game.node_count() {
            return Err(Error::InconsistentNodeCount {
                expected: game.node_count(),
                got: self.choice.len(),
            });
        }
        for (i, &c) in self.choice.iter().enumerate() {
            if !game.colour_set(i).contains(c) {
                return Err(Error::InvalidChoice { node: i, colour: c });
            }
        }
        Ok(())
    }

    /// Set of nodes on which `self` and `other` differ.
    pub fn diff(&self, other: &JointStrategy) -> Vec<usize> {
        self.choice
            .iter()
            .zip(&other.choice)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Non-empty set of node ids, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coalition {
    members: Vec<usize>,
}

impl Coalition {
    pub fn new(mut members: Vec<usize>) -> Result<Self, Error> {
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::EmptyCoalition);
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, node: usize) -> bool {
        self.members.binary_search(&node).is_ok()
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, m) in self.members.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", m + 1)?;
        }
        write!(f, "}}")
    }
}

/// Tie-breaking rule used when a player switches to a best response.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResponsePolicy {
    /// Lowest colour id among the best responses.
    LowestId,
    /// Restrict the choice to the node's maximal-bonus colours whenever one
    /// of them is a best response, preferring the predecessor's colour when
    /// it qualifies. Falls back to `LowestId` otherwise.
    PreferMb,
    /// On payoff ties prefer the predecessor's colour; the predecessor is
    /// the unique in-neighbour where one exists.
    PreferPredecessor,
}

/// Payoff of `node` under `s`: matched in-edge weights plus the bonus of the
/// chosen colour.
pub fn payoff(game: &CoordinationGame, s: &JointStrategy, node: usize) -> u64 {
    let mine = s.get(node);
    let matched: u64 = game
        .graph()
        .in_edges(node)
        .iter()
        .filter(|&&(j, _)| s.get(j) == mine)
        .map(|&(_, w)| w)
        .sum();
    matched + game.bonus(node, mine)
}

/// Payoff `node` would get by picking `colour` while everyone else follows `s`.
pub fn payoff_if(game: &CoordinationGame, s: &JointStrategy, node: usize, colour: ColourId) -> u64 {
    let matched: u64 = game
        .graph()
        .in_edges(node)
        .iter()
        .filter(|&&(j, _)| s.get(j) == colour)
        .map(|&(_, w)| w)
        .sum();
    matched + game.bonus(node, colour)
}

/// Per-colour values for `node`: `(colour, payoff when picking it)`, in
/// increasing colour id order. Runs in O(l + in-degree).
pub fn colour_values(game: &CoordinationGame, s: &JointStrategy, node: usize) -> Vec<(ColourId, u64)> {
    let l = game.palette_len();
    let mut matched = vec![0u64; l];
    for &(j, w) in game.graph().in_edges(node) {
        matched[s.get(j)] += w;
    }
    game.colour_set(node)
        .iter()
        .map(|c| (c, matched[c] + game.bonus(node, c)))
        .collect()
}

/// Colour of the unique in-neighbour of `node`, when the in-degree is one.
pub fn predecessor_colour(game: &CoordinationGame, s: &JointStrategy, node: usize) -> Option<ColourId> {
    match game.graph().in_edges(node) {
        [(j, _)] => Some(s.get(*j)),
        _ => None,
    }
}

/// A best response of `node` to `s` and its payoff, ties broken per `policy`.
pub fn best_response(
    game: &CoordinationGame,
    s: &JointStrategy,
    node: usize,
    policy: ResponsePolicy,
) -> (ColourId, u64) {
    let pred = predecessor_colour(game, s, node);
    best_response_with_pred(game, s, node, policy, pred)
}

/// As [`best_response`] but with an explicit predecessor colour; the cycle
/// and chain schedules pass the in-cycle predecessor here.
pub fn best_response_with_pred(
    game: &CoordinationGame,
    s: &JointStrategy,
    node: usize,
    policy: ResponsePolicy,
    pred: Option<ColourId>,
) -> (ColourId, u64) {
    let values = colour_values(game, s, node);
    let top = values.iter().map(|&(_, v)| v).max().expect("non-empty set");
    let achieves = |c: ColourId| values.iter().any(|&(d, v)| d == c && v == top);
    match policy {
        ResponsePolicy::LowestId => {}
        ResponsePolicy::PreferMb => {
            let mb = game.max_bonus_colours(node);
            if let Some(p) = pred {
                if mb.contains(&p) && achieves(p) {
                    return (p, top);
                }
            }
            if let Some(&c) = mb.iter().find(|&&c| achieves(c)) {
                return (c, top);
            }
        }
        ResponsePolicy::PreferPredecessor => {
            if let Some(p) = pred {
                if achieves(p) {
                    return (p, top);
                }
            }
        }
    }
    let c = values
        .iter()
        .find(|&&(_, v)| v == top)
        .map(|&(c, _)| c)
        .expect("some colour attains the maximum");
    (c, top)
}

/// If `s2` is a profitable deviation from `s`, the deviating coalition.
///
/// Returns `None` when the strategies coincide or some changed node fails to
/// strictly improve.
pub fn is_profitable_deviation(
    game: &CoordinationGame,
    s: &JointStrategy,
    s2: &JointStrategy,
) -> Option<Coalition> {
    let diff = s.diff(s2);
    if diff.is_empty() {
        return None;
    }
    for &i in &diff {
        if payoff(game, s2, i) <= payoff(game, s, i) {
            return None;
        }
    }
    Some(Coalition::new(diff).expect("non-empty by construction"))
}

/// Whether `s` is a Nash equilibrium; if not, the lowest-id node with a
/// strictly improving colour and the lowest such colour.
pub fn is_nash(game: &CoordinationGame, s: &JointStrategy) -> (bool, Option<(usize, ColourId)>) {
    for i in 0..game.node_count() {
        let current = payoff(game, s, i);
        for (c, v) in colour_values(game, s, i) {
            if v > current {
                return (false, Some((i, c)));
            }
        }
    }
    (true, None)
}

/// Convenience wrapper over [`is_nash`] discarding the witness.
pub fn is_nash_bool(game: &CoordinationGame, s: &JointStrategy) -> bool {
    is_nash(game, s).0
}

/// A sampled violation of positive population monotonicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PpmViolation {
    pub strategy: JointStrategy,
    pub observer: usize,
    pub switcher: usize,
    pub before: i64,
    pub after: i64,
}

/// Samples random `(s, i, j)` triples and checks that `i`'s payoff never
/// drops when `j` adopts `i`'s colour. Coordination games always satisfy
/// this; the harness exists to keep the payoff code honest.
pub fn ppm_holds_sample(
    game: &CoordinationGame,
    samples: usize,
    seed: u64,
) -> Result<(), PpmViolation> {
    let n = game.node_count();
    let payoff_i64 = |s: &JointStrategy, i: usize| payoff(game, s, i) as i64;
    ppm_holds_sample_by(
        n,
        |i| game.colour_set(i).iter().collect(),
        payoff_i64,
        samples,
        seed,
    )
}

/// PPM sampling over an arbitrary payoff function; used to show the check
/// rejects games with negative contributions.
pub fn ppm_holds_sample_by(
    node_count: usize,
    colour_options: impl Fn(usize) -> Vec<ColourId>,
    payoff_of: impl Fn(&JointStrategy, usize) -> i64,
    samples: usize,
    seed: u64,
) -> Result<(), PpmViolation> {
    use rand::prelude::*;
    let mut rng = StdRng::seed_from_u64(seed);
    let options: Vec<Vec<ColourId>> = (0..node_count).map(colour_options).collect();
    let mut done = 0;
    let mut attempts = 0;
    while done < samples && attempts < samples * 20 {
        attempts += 1;
        let s = JointStrategy::new(
            options
                .iter()
                .map(|opts| opts[rng.gen_range(0..opts.len())])
                .collect(),
        );
        let i = rng.gen_range(0..node_count);
        let j = rng.gen_range(0..node_count);
        if i == j || !options[j].contains(&s.get(i)) {
            continue;
        }
        let before = payoff_of(&s, i);
        let mut s2 = s.clone();
        s2.set(j, s.get(i));
        let after = payoff_of(&s2, i);
        if after < before {
            return Err(PpmViolation {
                strategy: s,
                observer: i,
                switcher: j,
                before,
                after,
            });
        }
        done += 1;
    }
    Ok(())
}

/// Incremental builder used by fixtures, generators and the reduction.
pub struct GameBuilder {
    palette: Vec<String>,
    sets: Vec<Vec<ColourId>>,
    edges: Vec<(usize, usize, u64)>,
    bonuses: Vec<(usize, ColourId, u64)>,
}

impl GameBuilder {
    pub fn new(palette: &[&str]) -> Self {
        Self {
            palette: palette.iter().map(|s| s.to_string()).collect(),
            sets: Vec::new(),
            edges: Vec::new(),
            bonuses: Vec::new(),
        }
    }

    pub fn colour_id(&self, name: &str) -> ColourId {
        self.palette
            .iter()
            .position(|p| p == name)
            .unwrap_or_else(|| panic!("colour {name} not in palette"))
    }

    /// Adds a node with the given colour names; returns its id.
    pub fn node(&mut self, colours: &[&str]) -> usize {
        let ids = colours.iter().map(|c| self.colour_id(c)).collect();
        self.sets.push(ids);
        self.sets.len() - 1
    }

    pub fn node_ids(&mut self, colours: &[ColourId]) -> usize {
        self.sets.push(colours.to_vec());
        self.sets.len() - 1
    }

    pub fn edge(&mut self, from: usize, to: usize, weight: u64) -> &mut Self {
        self.edges.push((from, to, weight));
        self
    }

    pub fn bonus(&mut self, node: usize, colour: &str, value: u64) -> &mut Self {
        let c = self.colour_id(colour);
        self.bonuses.push((node, c, value));
        self
    }

    pub fn bonus_id(&mut self, node: usize, colour: ColourId, value: u64) -> &mut Self {
        self.bonuses.push((node, colour, value));
        self
    }

    pub fn node_count(&self) -> usize {
        self.sets.len()
    }

    pub fn build(&self) -> Result<CoordinationGame, Error> {
        let n = self.sets.len();
        let l = self.palette.len();
        let graph = WeightedDigraph::new(n, &self.edges)?;
        let mut per_node = Vec::with_capacity(n);
        for ids in &self.sets {
            per_node.push(ColourSet::from_ids(ids, l)?);
        }
        let colours = ColourAssignment::new(self.palette.clone(), per_node)?;
        let mut bonuses = BonusFunction::zero(n, l);
        for &(i, c, v) in &self.bonuses {
            bonuses.set(i, c, v);
        }
        CoordinationGame::new(graph, colours, bonuses)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn rejects_single_node() {
        assert!(matches!(
            WeightedDigraph::new(1, &[]),
            Err(Error::TooFewNodes(1))
        ));
    }

    #[test]
    fn rejects_self_loops_parallel_edges_and_zero_weights() {
        assert!(matches!(
            WeightedDigraph::new(3, &[(0, 0, 1)]),
            Err(Error::SelfLoop(0))
        ));
        assert!(matches!(
            WeightedDigraph::new(3, &[(0, 1, 1), (0, 1, 2)]),
            Err(Error::ParallelEdge { .. })
        ));
        assert!(matches!(
            WeightedDigraph::new(3, &[(0, 1, 0)]),
            Err(Error::ZeroWeight { .. })
        ));
    }

    #[test]
    fn satellite_triangle_payoffs_match_reference_values() {
        let (game, s) = fixtures::satellite_triangle();
        let expected = [0u64, 1, 2, 1, 1, 1, 0, 0, 0];
        for (i, &want) in expected.iter().enumerate() {
            assert_eq!(payoff(&game, &s, i), want, "node {}", i + 1);
        }
    }

    #[test]
    fn satellite_triangle_strategy_is_not_nash_with_lowest_witness() {
        let (game, s) = fixtures::satellite_triangle();
        let (ok, witness) = is_nash(&game, &s);
        assert!(!ok);
        // node 1 can leave b for a and pick up the fixed-colour feeder.
        let a = game.colours().colour_id("a").unwrap();
        assert_eq!(witness, Some((0, a)));
    }

    #[test]
    fn isolated_node_with_zero_bonus_scores_zero() {
        let mut b = CoordinationGame::builder(&["a", "b"]);
        let u = b.node(&["a", "b"]);
        let v = b.node(&["a", "b"]);
        b.edge(u, v, 1);
        let game = b.build().unwrap();
        let s = game.lowest_strategy();
        assert_eq!(payoff(&game, &s, u), 0);
    }

    #[test]
    fn heavy_triangle_payoffs_at_a_a_c() {
        let game = fixtures::heavy_triangle_bonuses();
        let a = game.colours().colour_id("a").unwrap();
        let c = game.colours().colour_id("c").unwrap();
        let s = JointStrategy::new(vec![a, a, c]);
        // in-edge weights are 2; node 1 keeps only its own bonus, node 2
        // coordinates with node 1, node 3 matches nothing and has no bonus
        // on c.
        assert_eq!(payoff(&game, &s, 0), 1);
        assert_eq!(payoff(&game, &s, 1), 2);
        assert_eq!(payoff(&game, &s, 2), 0);
        let (ok, witness) = is_nash(&game, &s);
        assert!(!ok);
        let b_colour = game.colours().colour_id("b").unwrap();
        assert_eq!(witness, Some((2, b_colour)));
    }

    #[test]
    fn heavy_triangle_best_response_of_node_two() {
        let game = fixtures::heavy_triangle_bonuses();
        let a = game.colours().colour_id("a").unwrap();
        let c = game.colours().colour_id("c").unwrap();
        let s = JointStrategy::new(vec![a, c, c]);
        let (br, value) = best_response(&game, &s, 1, ResponsePolicy::LowestId);
        assert_eq!((br, value), (a, 2), "coordination beats the bonus 1 on c");
    }

    #[test]
    fn singleton_strategy_set_is_its_own_best_response() {
        let mut b = CoordinationGame::builder(&["a", "b"]);
        let u = b.node(&["a"]);
        let v = b.node(&["a", "b"]);
        b.edge(v, u, 3);
        let game = b.build().unwrap();
        let a = 0;
        let s = JointStrategy::new(vec![a, 1]);
        assert_eq!(best_response(&game, &s, u, ResponsePolicy::LowestId), (a, 0));
    }

    #[test]
    fn best_response_on_unweighted_three_cycle() {
        let mut b = CoordinationGame::builder(&["a", "b"]);
        let n0 = b.node(&["a", "b"]);
        let n1 = b.node(&["a", "b"]);
        let n2 = b.node(&["a", "b"]);
        b.edge(n0, n1, 1).edge(n1, n2, 1).edge(n2, n0, 1);
        let game = b.build().unwrap();
        let s = JointStrategy::new(vec![0, 0, 1]);
        let (br, value) = best_response(&game, &s, n2, ResponsePolicy::LowestId);
        assert_eq!((br, value), (0, 1));
    }

    #[test]
    fn profitable_deviation_detection() {
        let game = fixtures::rotating_cycle(4);
        let a = 0;
        let b = 1;
        let s = JointStrategy::new(vec![a, b, b, b]);
        assert_eq!(is_profitable_deviation(&game, &s, &s), None);
        let mut s2 = s.clone();
        s2.set(1, a);
        let coalition = is_profitable_deviation(&game, &s, &s2).unwrap();
        assert_eq!(coalition.members(), &[1]);
    }

    #[test]
    fn three_cycle_all_deviating_needs_strictness_per_member() {
        let game = fixtures::rotating_cycle(3);
        let (a, b) = (0, 1);
        let s = JointStrategy::new(vec![a, a, b]);
        let s2 = JointStrategy::new(vec![b, b, a]);
        // node 1 drops from payoff 1 to 0, so the full switch is not
        // profitable even though node 3 gains.
        assert_eq!(is_profitable_deviation(&game, &s, &s2), None);
    }

    #[test]
    fn unicolour_cycle_is_nash() {
        let game = fixtures::rotating_cycle(5);
        let s = JointStrategy::new(vec![0; 5]);
        assert!(is_nash_bool(&game, &s));
    }

    #[test]
    fn ppm_holds_on_fixture_games() {
        let (game, _) = fixtures::satellite_triangle();
        assert!(ppm_holds_sample(&game, 1000, 7).is_ok());
        let game = fixtures::heavy_triangle_bonuses();
        assert!(ppm_holds_sample(&game, 1000, 7).is_ok());
    }

    #[test]
    fn ppm_check_catches_negative_weights() {
        // two nodes, edge 0 -> 1 of weight -1: observer 1 loses when node 0's
        // colour is adopted... the violation needs a third party, so use
        // 0 -> 2 negative while 1 adopts node 2's colour. Simplest: payoff of
        // node 1 is minus the matched count on edge 0 -> 1.
        let result = ppm_holds_sample_by(
            2,
            |_| vec![0, 1],
            |s, i| {
                if i == 1 && s.get(0) == s.get(1) {
                    -1
                } else {
                    0
                }
            },
            2000,
            11,
        );
        assert!(result.is_err(), "negative weight must violate the PPM");
    }

    #[test]
    fn payoffs_stay_within_declared_range() {
        let (game, s) = fixtures::satellite_triangle();
        for i in 0..game.node_count() {
            let cap: u64 = game
                .graph()
                .in_edges(i)
                .iter()
                .map(|&(_, w)| w)
                .sum::<u64>()
                + game.max_bonus(i);
            assert!(payoff(&game, &s, i) <= cap);
        }
    }
}
