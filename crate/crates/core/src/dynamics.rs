//! Schedules, improvement-path generation and trace recording/validation.
//!
//! A schedule names players in order; a scheduled player already holding a
//! best response is skipped without emitting a step, anyone else switches to
//! a policy-chosen best response. Only actual deviations count towards path
//! lengths.

use crate::error::Error;
use crate::model::{
    best_response, is_nash_bool, payoff, Coalition, ColourId, CoordinationGame, JointStrategy,
    ResponsePolicy,
};

/// Player sequence driving path construction. `Cyclic` repeats its order
/// until a cap or a full skip-pass; `Finite` runs once to the end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Schedule {
    Finite(Vec<usize>),
    Cyclic(Vec<usize>),
}

impl Schedule {
    pub fn round_robin(n: usize) -> Self {
        Schedule::Cyclic((0..n).collect())
    }

    pub fn order(&self) -> &[usize] {
        match self {
            Schedule::Finite(v) | Schedule::Cyclic(v) => v,
        }
    }

    pub fn validate(&self, node_count: usize) -> Result<(), Error> {
        for &i in self.order() {
            if i >= node_count {
                return Err(Error::NodeOutOfRange {
                    node: i,
                    count: node_count,
                });
            }
        }
        Ok(())
    }
}

/// How a trace ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalStatus {
    /// A full skip-pass over all players proved a Nash equilibrium.
    Nash,
    /// A coalitional solver certified the final strategy strong.
    Strong,
    /// The step cap ran out before any terminal condition.
    CapExhausted,
    /// A finite schedule was consumed without a Nash certificate.
    ScheduleEnded,
}

/// One member's change inside a deviation step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemberChange {
    pub node: usize,
    pub old_colour: ColourId,
    pub new_colour: ColourId,
    pub old_payoff: u64,
    pub new_payoff: u64,
}

/// A single (possibly coalitional) profitable deviation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationStep {
    pub deviators: Coalition,
    pub changes: Vec<MemberChange>,
}

impl DeviationStep {
    /// Applies every member's switch to `s` and records payoffs before and
    /// after. Panics if a member does not change colour; profitability is
    /// the caller's business and is re-checked by [`validate_trace`].
    pub fn apply(
        game: &CoordinationGame,
        s: &mut JointStrategy,
        switches: &[(usize, ColourId)],
    ) -> Self {
        let before = s.clone();
        for &(node, c) in switches {
            assert_ne!(s.get(node), c, "a deviator must change colour");
            s.set(node, c);
        }
        let changes = switches
            .iter()
            .map(|&(node, c)| MemberChange {
                node,
                old_colour: before.get(node),
                new_colour: c,
                old_payoff: payoff(game, &before, node),
                new_payoff: payoff(game, s, node),
            })
            .collect();
        let deviators = Coalition::new(switches.iter().map(|&(n, _)| n).collect())
            .expect("deviation steps are non-empty");
        DeviationStep { deviators, changes }
    }
}

/// Ordered list of deviation steps from an initial strategy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImprovementTrace {
    pub initial: JointStrategy,
    pub steps: Vec<DeviationStep>,
    pub terminal: TerminalStatus,
}

impl ImprovementTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Number of single-player steps plus coalitional steps.
    pub fn coalition_steps(&self) -> usize {
        self.steps.iter().filter(|st| st.deviators.len() > 1).count()
    }

    /// Replays the steps on top of the initial strategy.
    pub fn final_strategy(&self) -> JointStrategy {
        let mut s = self.initial.clone();
        for step in &self.steps {
            for ch in &step.changes {
                s.set(ch.node, ch.new_colour);
            }
        }
        s
    }
}

/// Why a trace failed validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceViolation {
    /// Index of the offending step, or `steps.len()` for terminal-status
    /// violations.
    pub step: usize,
    pub reason: String,
}

/// Re-derives every payoff delta from scratch and confirms strict
/// improvement per deviator, step/strategy-diff consistency and the
/// terminal status.
pub fn validate_trace(
    game: &CoordinationGame,
    trace: &ImprovementTrace,
) -> Result<(), TraceViolation> {
    let fail = |step: usize, reason: String| Err(TraceViolation { step, reason });
    if trace.initial.validate(game).is_err() {
        return fail(0, "initial strategy invalid for game".into());
    }
    let mut s = trace.initial.clone();
    for (k, step) in trace.steps.iter().enumerate() {
        if step.changes.len() != step.deviators.len() {
            return fail(k, "change list and deviator set sizes differ".into());
        }
        let mut s2 = s.clone();
        for ch in &step.changes {
            if !step.deviators.contains(ch.node) {
                return fail(k, format!("change for node {} outside deviator set", ch.node + 1));
            }
            if s.get(ch.node) != ch.old_colour {
                return fail(k, format!("stale old colour at node {}", ch.node + 1));
            }
            if ch.old_colour == ch.new_colour {
                return fail(k, format!("node {} does not change colour", ch.node + 1));
            }
            if !game.colour_set(ch.node).contains(ch.new_colour) {
                return fail(k, format!("node {} picks an unavailable colour", ch.node + 1));
            }
            s2.set(ch.node, ch.new_colour);
        }
        let diff = s.diff(&s2);
        if diff != step.deviators.members() {
            return fail(k, "deviator set does not match the strategy diff".into());
        }
        for ch in &step.changes {
            let old = payoff(game, &s, ch.node);
            let new = payoff(game, &s2, ch.node);
            if old != ch.old_payoff || new != ch.new_payoff {
                return fail(
                    k,
                    format!(
                        "recorded payoffs {}->{} disagree with recomputed {}->{} at node {}",
                        ch.old_payoff,
                        ch.new_payoff,
                        old,
                        new,
                        ch.node + 1
                    ),
                );
            }
            if new <= old {
                return fail(k, format!("node {} does not strictly improve", ch.node + 1));
            }
        }
        s = s2;
    }
    match trace.terminal {
        TerminalStatus::Nash | TerminalStatus::Strong => {
            if !is_nash_bool(game, &s) {
                return fail(trace.steps.len(), "final strategy is not a Nash equilibrium".into());
            }
        }
        TerminalStatus::CapExhausted | TerminalStatus::ScheduleEnded => {}
    }
    Ok(())
}

/// Runs `path(s, seq)`: players holding a best response are skipped, others
/// switch to a policy-chosen best response. Cyclic schedules stop once a
/// full pass over the order produces no deviation; `cap` bounds the number
/// of deviations and trips `CapExhausted` rather than truncating silently.
pub fn run_schedule(
    game: &CoordinationGame,
    s0: &JointStrategy,
    schedule: &Schedule,
    policy: ResponsePolicy,
    cap: usize,
) -> Result<ImprovementTrace, Error> {
    s0.validate(game)?;
    schedule.validate(game.node_count())?;
    let mut s = s0.clone();
    let mut steps = Vec::new();
    let order = schedule.order();
    let cyclic = matches!(schedule, Schedule::Cyclic(_));
    let mut quiet_slots = 0usize;
    let mut slot = 0usize;
    let terminal;
    loop {
        if cyclic && !order.is_empty() && quiet_slots >= order.len() {
            terminal = if order.len() == game.node_count() {
                debug_assert!(is_nash_bool(game, &s));
                TerminalStatus::Nash
            } else if is_nash_bool(game, &s) {
                TerminalStatus::Nash
            } else {
                TerminalStatus::ScheduleEnded
            };
            break;
        }
        if slot >= order.len() {
            if !cyclic {
                terminal = if is_nash_bool(game, &s) {
                    TerminalStatus::Nash
                } else {
                    TerminalStatus::ScheduleEnded
                };
                break;
            }
            if order.is_empty() {
                terminal = TerminalStatus::ScheduleEnded;
                break;
            }
            slot = 0;
        }
        let i = order[slot];
        slot += 1;
        let current = payoff(game, &s, i);
        let (c, value) = best_response(game, &s, i, policy);
        if value > current {
            if steps.len() >= cap {
                terminal = TerminalStatus::CapExhausted;
                break;
            }
            let step = DeviationStep::apply(game, &mut s, &[(i, c)]);
            steps.push(step);
            quiet_slots = 0;
        } else {
            quiet_slots += 1;
        }
    }
    Ok(ImprovementTrace {
        initial: s0.clone(),
        steps,
        terminal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::is_nash;

    #[test]
    fn nash_start_yields_empty_trace() {
        let game = fixtures::rotating_cycle(4);
        let s = JointStrategy::new(vec![0; 4]);
        let trace = run_schedule(
            &game,
            &s,
            &Schedule::round_robin(4),
            ResponsePolicy::LowestId,
            100,
        )
        .unwrap();
        assert!(trace.is_empty());
        assert_eq!(trace.terminal, TerminalStatus::Nash);
        assert!(validate_trace(&game, &trace).is_ok());
    }

    #[test]
    fn max_bonus_schedule_walks_the_long_path() {
        for n in [5, 6, 8] {
            let game = fixtures::slow_convergence_cycle(n);
            let s0 = fixtures::slow_convergence_start(&game);
            let trace = run_schedule(
                &game,
                &s0,
                &Schedule::round_robin(n),
                ResponsePolicy::PreferMb,
                10 * n,
            )
            .unwrap();
            assert_eq!(trace.terminal, TerminalStatus::Nash);
            assert_eq!(trace.len(), 3 * n - 5, "n = {n}");
            let c = game.colours().colour_id("c").unwrap();
            assert_eq!(
                trace.final_strategy(),
                JointStrategy::new(vec![c; n]),
                "path must end in all-c"
            );
            assert!(validate_trace(&game, &trace).is_ok());
        }
    }

    #[test]
    fn three_cycle_round_robin_reaches_nash_quickly() {
        let game = fixtures::rotating_cycle(3);
        let s0 = JointStrategy::new(vec![0, 1, 1]);
        let trace = run_schedule(
            &game,
            &s0,
            &Schedule::round_robin(3),
            ResponsePolicy::LowestId,
            100,
        )
        .unwrap();
        assert_eq!(trace.terminal, TerminalStatus::Nash);
        assert!(trace.len() <= 5);
        assert!(is_nash(&game, &trace.final_strategy()).0);
        assert!(validate_trace(&game, &trace).is_ok());
    }

    #[test]
    fn cap_exhaustion_is_flagged() {
        let game = fixtures::slow_convergence_cycle(6);
        let s0 = fixtures::slow_convergence_start(&game);
        let trace = run_schedule(
            &game,
            &s0,
            &Schedule::round_robin(6),
            ResponsePolicy::PreferMb,
            3,
        )
        .unwrap();
        assert_eq!(trace.terminal, TerminalStatus::CapExhausted);
        assert_eq!(trace.len(), 3);
        assert!(validate_trace(&game, &trace).is_ok());
    }

    #[test]
    fn corrupted_payoff_delta_is_rejected() {
        let game = fixtures::rotating_cycle(3);
        let s0 = JointStrategy::new(vec![0, 1, 1]);
        let mut trace = run_schedule(
            &game,
            &s0,
            &Schedule::round_robin(3),
            ResponsePolicy::LowestId,
            100,
        )
        .unwrap();
        assert!(!trace.is_empty());
        trace.steps[0].changes[0].new_payoff += 5;
        let err = validate_trace(&game, &trace).unwrap_err();
        assert_eq!(err.step, 0);
    }

    #[test]
    fn finite_schedule_ends_without_nash_claim() {
        let game = fixtures::heavy_triangle_bonuses();
        let s0 = game.lowest_strategy();
        let trace = run_schedule(
            &game,
            &s0,
            &Schedule::Finite(vec![0, 1]),
            ResponsePolicy::LowestId,
            100,
        )
        .unwrap();
        assert_eq!(trace.terminal, TerminalStatus::ScheduleEnded);
        assert!(validate_trace(&game, &trace).is_ok());
    }
}
