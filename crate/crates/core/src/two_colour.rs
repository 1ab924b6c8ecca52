//! Two-phase solvers for games whose palette has exactly two colours,
//! carried by incrementally maintained per-node payoff pairs and a pending
//! list, plus the coalitional variant built on the maximal-coalition
//! search.

use std::collections::VecDeque;

use crate::coalition::max_profitable_coalition_to_colour;
use crate::dynamics::{DeviationStep, ImprovementTrace, TerminalStatus};
use crate::error::Error;
use crate::model::{is_nash_bool, payoff_if, ColourId, CoordinationGame, JointStrategy};

/// Incremental phase state: for every node the payoff it would collect
/// under either colour given everyone else's current choice, plus the FIFO
/// list of nodes still holding the out-of-phase colour with a strict
/// improvement available.
pub struct TwoColourState<'a> {
    game: &'a CoordinationGame,
    strategy: JointStrategy,
    /// pairs[i][c] = payoff of node i when it picks colour c
    pairs: Vec<[u64; 2]>,
    pending: VecDeque<usize>,
    queued: Vec<bool>,
    phase_colour: ColourId,
}

impl<'a> TwoColourState<'a> {
    pub fn new(
        game: &'a CoordinationGame,
        s0: &JointStrategy,
        phase_colour: ColourId,
    ) -> Result<Self, Error> {
        if game.palette_len() != 2 {
            return Err(Error::NotTwoColours(game.palette_len()));
        }
        s0.validate(game)?;
        let n = game.node_count();
        let pairs: Vec<[u64; 2]> = (0..n)
            .map(|i| [payoff_if(game, s0, i, 0), payoff_if(game, s0, i, 1)])
            .collect();
        let mut state = Self {
            game,
            strategy: s0.clone(),
            pairs,
            pending: VecDeque::new(),
            queued: vec![false; n],
            phase_colour,
        };
        for i in 0..n {
            if state.wants_switch(i) {
                state.pending.push_back(i);
                state.queued[i] = true;
            }
        }
        Ok(state)
    }

    fn wants_switch(&self, i: usize) -> bool {
        let c = self.phase_colour;
        self.strategy.get(i) != c
            && self.game.colour_set(i).contains(c)
            && self.pairs[i][c] > self.pairs[i][self.strategy.get(i)]
    }

    pub fn strategy(&self) -> &JointStrategy {
        &self.strategy
    }

    pub fn pairs(&self) -> &[[u64; 2]] {
        &self.pairs
    }

    /// Pops the next pending node and switches it to the phase colour,
    /// propagating the pair updates to its successors. `None` once the
    /// phase is exhausted.
    pub fn step(&mut self) -> Option<DeviationStep> {
        let i = self.pending.pop_front()?;
        self.queued[i] = false;
        debug_assert!(self.wants_switch(i), "pending entries never go stale");
        let c = self.phase_colour;
        let old = self.strategy.get(i);
        let step = DeviationStep {
            deviators: crate::model::Coalition::new(vec![i]).expect("single deviator"),
            changes: vec![crate::dynamics::MemberChange {
                node: i,
                old_colour: old,
                new_colour: c,
                old_payoff: self.pairs[i][old],
                new_payoff: self.pairs[i][c],
            }],
        };
        self.strategy.set(i, c);
        for &(t, w) in self.game.graph().out_edges(i) {
            self.pairs[t][old] -= w;
            self.pairs[t][c] += w;
            if !self.queued[t] && self.wants_switch(t) {
                self.pending.push_back(t);
                self.queued[t] = true;
            }
        }
        Some(step)
    }
}

/// Nash equilibrium by two monotone phases: first everyone who profits
/// switches to the lower-id colour (FIFO, each node at most once), then to
/// the other colour. At most 2n deviations.
pub fn solve_ne_two_colour(
    game: &CoordinationGame,
    s0: &JointStrategy,
) -> Result<(JointStrategy, ImprovementTrace), Error> {
    let mut steps = Vec::new();
    let mut s = s0.clone();
    for phase_colour in [0usize, 1] {
        let mut state = TwoColourState::new(game, &s, phase_colour)?;
        while let Some(step) = state.step() {
            steps.push(step);
        }
        s = state.strategy().clone();
    }
    if !is_nash_bool(game, &s) {
        return Err(Error::Internal(
            "two-phase schedule ended off equilibrium".into(),
        ));
    }
    if steps.len() > 2 * game.node_count() {
        return Err(Error::Internal(
            "two-colour schedule exceeded 2n deviations".into(),
        ));
    }
    Ok((
        s,
        ImprovementTrace {
            initial: s0.clone(),
            steps,
            terminal: TerminalStatus::Nash,
        },
    ))
}

/// Strong equilibrium by two coalitional phases: the maximal coalition
/// profitably deviating to the phase colour jumps as one step until none
/// remains, first for the lower-id colour, then the other. At most 2n
/// c-steps.
pub fn solve_se_two_colour(
    game: &CoordinationGame,
    s0: &JointStrategy,
) -> Result<(JointStrategy, ImprovementTrace), Error> {
    if game.palette_len() != 2 {
        return Err(Error::NotTwoColours(game.palette_len()));
    }
    s0.validate(game)?;
    let mut steps = Vec::new();
    let mut s = s0.clone();
    for phase_colour in [0usize, 1] {
        while let Some(coalition) = max_profitable_coalition_to_colour(game, &s, phase_colour)? {
            let switches: Vec<(usize, ColourId)> = coalition
                .members()
                .iter()
                .map(|&i| (i, phase_colour))
                .collect();
            steps.push(DeviationStep::apply(game, &mut s, &switches));
            if steps.len() > 2 * game.node_count() {
                return Err(Error::Internal(
                    "coalitional two-colour schedule exceeded 2n steps".into(),
                ));
            }
        }
    }
    Ok((
        s,
        ImprovementTrace {
            initial: s0.clone(),
            steps,
            terminal: TerminalStatus::Strong,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::validate_trace;
    use crate::fixtures;
    use crate::model::{is_nash, payoff_if};
    use crate::oracle::{enumerate_nash, is_strong_brute, OracleConfig};

    #[test]
    fn all_single_colour_nodes_never_move() {
        let mut b = CoordinationGame::builder(&["a", "b"]);
        let u = b.node(&["b"]);
        let v = b.node(&["b"]);
        b.edge(u, v, 1);
        let game = b.build().unwrap();
        let s0 = JointStrategy::new(vec![1, 1]);
        let (ne, trace) = solve_ne_two_colour(&game, &s0).unwrap();
        assert!(trace.is_empty());
        assert_eq!(ne, s0);
    }

    #[test]
    fn alternating_square_reaches_an_oracle_equilibrium() {
        let game = fixtures::bidirectional_square();
        let s0 = JointStrategy::new(vec![0, 1, 0, 1]);
        let (ne, trace) = solve_ne_two_colour(&game, &s0).unwrap();
        assert!(trace.len() <= 8);
        assert!(is_nash(&game, &ne).0);
        let cfg = OracleConfig::default();
        let all = enumerate_nash(&game, &cfg).unwrap();
        assert!(all.contains(&ne));
        assert!(validate_trace(&game, &trace).is_ok());
    }

    #[test]
    fn pairs_track_from_scratch_payoffs_through_a_phase() {
        let game = fixtures::bidirectional_square();
        let s0 = JointStrategy::new(vec![0, 1, 0, 1]);
        let mut state = TwoColourState::new(&game, &s0, 0).unwrap();
        loop {
            for i in 0..game.node_count() {
                assert_eq!(
                    state.pairs()[i],
                    [
                        payoff_if(&game, state.strategy(), i, 0),
                        payoff_if(&game, state.strategy(), i, 1)
                    ],
                    "incremental pair diverged at node {i}"
                );
            }
            if state.step().is_none() {
                break;
            }
        }
    }

    #[test]
    fn coalition_phase_merges_split_square() {
        let game = fixtures::bidirectional_square();
        let s0 = JointStrategy::new(vec![0, 0, 1, 1]);
        let (se, trace) = solve_se_two_colour(&game, &s0).unwrap();
        assert_eq!(se, JointStrategy::new(vec![0, 0, 0, 0]));
        assert_eq!(trace.len(), 1);
        assert_eq!(trace.steps[0].deviators.members(), &[2, 3]);
        let cfg = OracleConfig::default();
        assert!(is_strong_brute(&game, &se, &cfg).unwrap().is_ok());
        assert!(validate_trace(&game, &trace).is_ok());
    }

    #[test]
    fn strong_start_yields_empty_coalition_trace() {
        let game = fixtures::bidirectional_square();
        let s0 = JointStrategy::new(vec![1, 1, 1, 1]);
        let (se, trace) = solve_se_two_colour(&game, &s0).unwrap();
        assert_eq!(se, s0);
        assert!(trace.is_empty());
    }

    #[test]
    fn rejects_wider_palettes() {
        let (game, s) = fixtures::satellite_triangle();
        assert!(matches!(
            solve_ne_two_colour(&game, &s),
            Err(Error::NotTwoColours(3))
        ));
    }
}
