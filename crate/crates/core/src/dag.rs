//! One-pass solver for weighted DAGs with bonuses, where every Nash
//! equilibrium is also strong and the topological payoff vector is a
//! lexicographic potential for coalitional moves.

use crate::dynamics::{DeviationStep, ImprovementTrace, TerminalStatus};
use crate::error::Error;
use crate::model::{
    best_response, is_nash_bool, payoff, CoordinationGame, JointStrategy, ResponsePolicy,
};

/// Node permutation in which every edge points forward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologicalOrder(pub Vec<usize>);

/// Depth-first topological sort with lowest-id roots and lowest-id
/// neighbour expansion, so ties always produce the same order. Errors on a
/// directed cycle.
pub fn topological_order(game: &CoordinationGame) -> Result<TopologicalOrder, Error> {
    let g = game.graph();
    let n = g.node_count();
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let mut mark = vec![Mark::New; n];
    let mut postorder = Vec::with_capacity(n);
    for root in 0..n {
        if mark[root] != Mark::New {
            continue;
        }
        // iterative DFS over out-edges
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        mark[root] = Mark::Active;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            let outs = g.out_edges(node);
            if *next < outs.len() {
                let target = outs[*next].0;
                *next += 1;
                match mark[target] {
                    Mark::New => {
                        mark[target] = Mark::Active;
                        stack.push((target, 0));
                    }
                    Mark::Active => return Err(Error::NotADag),
                    Mark::Done => {}
                }
            } else {
                mark[node] = Mark::Done;
                postorder.push(node);
                stack.pop();
            }
        }
    }
    postorder.reverse();
    Ok(TopologicalOrder(postorder))
}

/// Single pass in topological order, every node switching to a best
/// response when that strictly improves. The result is a Nash equilibrium
/// and, on DAGs, a strong equilibrium. The pass makes at most one deviation
/// per node, and never at bonus-free source nodes, so bonus-free games stay
/// within n-1 deviations.
pub fn solve_dag(
    game: &CoordinationGame,
    s0: &JointStrategy,
) -> Result<(JointStrategy, ImprovementTrace), Error> {
    s0.validate(game)?;
    let order = topological_order(game)?;
    let mut s = s0.clone();
    let mut steps = Vec::new();
    for &i in &order.0 {
        let current = payoff(game, &s, i);
        let (c, value) = best_response(game, &s, i, ResponsePolicy::LowestId);
        if value > current {
            steps.push(DeviationStep::apply(game, &mut s, &[(i, c)]));
        }
    }
    debug_assert!(is_nash_bool(game, &s));
    let trace = ImprovementTrace {
        initial: s0.clone(),
        steps,
        terminal: TerminalStatus::Strong,
    };
    Ok((s, trace))
}

/// Payoffs listed in topological order. Along any profitable coalitional
/// deviation this vector strictly increases lexicographically.
pub fn potential_vector(game: &CoordinationGame, s: &JointStrategy) -> Result<Vec<u64>, Error> {
    let order = topological_order(game)?;
    Ok(order.0.iter().map(|&i| payoff(game, s, i)).collect())
}
