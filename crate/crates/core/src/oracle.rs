//! Brute-force ground truth for small instances: exhaustive Nash / strong
//! equilibrium checks and explicit (c-)improvement-graph analysis.
//!
//! The strategy space is walked by a mixed-radix counter over per-node
//! colour lists, node 0 most significant, which fixes a deterministic
//! lexicographic order. Caps are configuration; exceeding one is an error,
//! never silent sampling.

use crate::error::Error;
use crate::model::{
    colour_values, is_nash_bool, payoff, Coalition, CoordinationGame, JointStrategy,
};

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// Cap on the strategy-space size for enumeration-based checks.
    pub max_strategies: u128,
    /// Cap for the dynamics analysis, whose c-mode edge generation scans
    /// all pairs of strategies.
    pub max_strategies_dynamics: u128,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            max_strategies: 2_000_000,
            max_strategies_dynamics: 20_000,
        }
    }
}

impl OracleConfig {
    pub fn with_cap(cap: u128) -> Self {
        Self {
            max_strategies: cap,
            max_strategies_dynamics: cap.min(20_000),
        }
    }
}

/// Iterator over the whole strategy space in lexicographic order.
pub struct StrategySpace<'a> {
    options: Vec<Vec<usize>>,
    current: Option<Vec<usize>>,
    _game: std::marker::PhantomData<&'a ()>,
}

impl<'a> StrategySpace<'a> {
    pub fn size(game: &CoordinationGame) -> u128 {
        (0..game.node_count())
            .map(|i| game.colour_set(i).len() as u128)
            .product()
    }

    pub fn new(game: &'a CoordinationGame, cap: u128) -> Result<Self, Error> {
        let size = Self::size(game);
        if size > cap {
            return Err(Error::CapExceeded { size, cap });
        }
        let options: Vec<Vec<usize>> = (0..game.node_count())
            .map(|i| game.colour_set(i).iter().collect())
            .collect();
        let current = Some(options.iter().map(|o| o[0]).collect::<Vec<_>>());
        Ok(Self {
            options,
            current,
            _game: std::marker::PhantomData,
        })
    }
}

impl<'a> Iterator for StrategySpace<'a> {
    type Item = JointStrategy;

    fn next(&mut self) -> Option<JointStrategy> {
        let current = self.current.as_mut()?;
        let out = JointStrategy::new(current.clone());
        // advance the counter, least-significant digit last
        let mut k = current.len();
        loop {
            if k == 0 {
                self.current = None;
                break;
            }
            k -= 1;
            let opts = &self.options[k];
            let pos = opts.iter().position(|&c| c == current[k]).unwrap();
            if pos + 1 < opts.len() {
                current[k] = opts[pos + 1];
                for digit in k + 1..current.len() {
                    current[digit] = self.options[digit][0];
                }
                break;
            }
            current[k] = opts[0];
        }
        Some(out)
    }
}

/// All Nash equilibria in lexicographic order.
pub fn enumerate_nash(
    game: &CoordinationGame,
    cfg: &OracleConfig,
) -> Result<Vec<JointStrategy>, Error> {
    let mut out = Vec::new();
    for s in StrategySpace::new(game, cfg.max_strategies)? {
        if is_nash_bool(game, &s) {
            out.push(s);
        }
    }
    Ok(out)
}

/// First Nash equilibrium in lexicographic order, if any.
pub fn first_nash(
    game: &CoordinationGame,
    cfg: &OracleConfig,
) -> Result<Option<JointStrategy>, Error> {
    for s in StrategySpace::new(game, cfg.max_strategies)? {
        if is_nash_bool(game, &s) {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// A deviation disproving strength: the coalition and the strategy it moves
/// to, every member strictly improving.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongWitness {
    pub coalition: Coalition,
    pub target: JointStrategy,
}

/// Scans every other strategy for a profitable coalitional deviation.
pub fn is_strong_brute(
    game: &CoordinationGame,
    s: &JointStrategy,
    cfg: &OracleConfig,
) -> Result<Result<(), StrongWitness>, Error> {
    k_equilibrium_brute(game, s, game.node_count(), cfg)
}

/// Like [`is_strong_brute`] but only coalitions of size at most `k` count.
pub fn k_equilibrium_brute(
    game: &CoordinationGame,
    s: &JointStrategy,
    k: usize,
    cfg: &OracleConfig,
) -> Result<Result<(), StrongWitness>, Error> {
    s.validate(game)?;
    let payoffs: Vec<u64> = (0..game.node_count()).map(|i| payoff(game, s, i)).collect();
    for s2 in StrategySpace::new(game, cfg.max_strategies)? {
        let diff = s.diff(&s2);
        if diff.is_empty() || diff.len() > k {
            continue;
        }
        if diff.iter().all(|&i| payoff(game, &s2, i) > payoffs[i]) {
            return Ok(Err(StrongWitness {
                coalition: Coalition::new(diff).expect("non-empty"),
                target: s2,
            }));
        }
    }
    Ok(Ok(()))
}

/// First strong equilibrium in lexicographic order, if any. Cost is
/// quadratic in the strategy-space size, so the dynamics cap applies.
pub fn first_strong(
    game: &CoordinationGame,
    cfg: &OracleConfig,
) -> Result<Option<JointStrategy>, Error> {
    let inner = OracleConfig {
        max_strategies: cfg.max_strategies_dynamics,
        max_strategies_dynamics: cfg.max_strategies_dynamics,
    };
    for s in StrategySpace::new(game, inner.max_strategies)? {
        if !is_nash_bool(game, &s) {
            continue;
        }
        if is_strong_brute(game, &s, &inner)?.is_ok() {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynamicsMode {
    Single,
    Coalition,
}

/// Result of the improvement-graph analysis.
#[derive(Debug, Clone)]
pub struct DynamicsReport {
    pub mode: DynamicsMode,
    /// Every (c-)improvement path is finite, i.e. the improvement graph is
    /// acyclic.
    pub has_fip: bool,
    /// From every strategy some finite (c-)improvement path exists.
    pub weakly_acyclic: bool,
    /// Number of sinks (Nash equilibria in single mode, strong equilibria
    /// in coalition mode).
    pub sink_count: usize,
    pub strategy_count: usize,
    /// Strategies from which no finite path exists.
    pub non_terminating_starts: Vec<JointStrategy>,
}

/// Builds the explicit (c-)improvement graph and classifies the game.
pub fn analyze_dynamics(
    game: &CoordinationGame,
    mode: DynamicsMode,
    cfg: &OracleConfig,
) -> Result<DynamicsReport, Error> {
    let cap = match mode {
        DynamicsMode::Single => cfg.max_strategies,
        DynamicsMode::Coalition => cfg.max_strategies_dynamics,
    };
    let all: Vec<JointStrategy> = StrategySpace::new(game, cap)?.collect();
    let index = |s: &JointStrategy| -> usize {
        all.binary_search(s).expect("strategy from the same space")
    };
    let n = game.node_count();
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); all.len()];
    match mode {
        DynamicsMode::Single => {
            for (si, s) in all.iter().enumerate() {
                for i in 0..n {
                    let current = payoff(game, s, i);
                    for (c, v) in colour_values(game, s, i) {
                        if v > current {
                            let mut s2 = s.clone();
                            s2.set(i, c);
                            out_edges[si].push(index(&s2));
                        }
                    }
                }
            }
        }
        DynamicsMode::Coalition => {
            let payoffs: Vec<Vec<u64>> = all
                .iter()
                .map(|s| (0..n).map(|i| payoff(game, s, i)).collect())
                .collect();
            for (si, s) in all.iter().enumerate() {
                for (ti, s2) in all.iter().enumerate() {
                    if si == ti {
                        continue;
                    }
                    let diff = s.diff(s2);
                    if diff.is_empty() {
                        continue;
                    }
                    if diff.iter().all(|&i| payoffs[ti][i] > payoffs[si][i]) {
                        out_edges[si].push(ti);
                    }
                }
            }
        }
    }
    let sinks: Vec<usize> = (0..all.len()).filter(|&v| out_edges[v].is_empty()).collect();
    // acyclicity by Kahn's algorithm
    let mut indeg = vec![0usize; all.len()];
    for targets in &out_edges {
        for &t in targets {
            indeg[t] += 1;
        }
    }
    let mut queue: Vec<usize> = (0..all.len()).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0usize;
    while let Some(v) = queue.pop() {
        seen += 1;
        for &t in &out_edges[v] {
            indeg[t] -= 1;
            if indeg[t] == 0 {
                queue.push(t);
            }
        }
    }
    let has_fip = seen == all.len();
    // backwards reachability from the sinks
    let mut in_edges: Vec<Vec<usize>> = vec![Vec::new(); all.len()];
    for (v, targets) in out_edges.iter().enumerate() {
        for &t in targets {
            in_edges[t].push(v);
        }
    }
    let mut reaches_sink = vec![false; all.len()];
    let mut stack = sinks.clone();
    for &v in &sinks {
        reaches_sink[v] = true;
    }
    while let Some(v) = stack.pop() {
        for &p in &in_edges[v] {
            if !reaches_sink[p] {
                reaches_sink[p] = true;
                stack.push(p);
            }
        }
    }
    let non_terminating: Vec<JointStrategy> = (0..all.len())
        .filter(|&v| !reaches_sink[v])
        .map(|v| all[v].clone())
        .collect();
    Ok(DynamicsReport {
        mode,
        has_fip,
        weakly_acyclic: non_terminating.is_empty(),
        sink_count: sinks.len(),
        strategy_count: all.len(),
        non_terminating_starts: non_terminating,
    })
}
