//! Seeded random instance generation for the test sweeps and the bench
//! command.

use rand::prelude::*;
use rand::rngs::StdRng;

use crate::cycle::CycleVariant;
use crate::model::{ColourId, CoordinationGame, GameBuilder, JointStrategy};
use crate::reduction::{CnfFormula, Literal};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

const COLOUR_NAMES: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

fn random_subset(rng: &mut StdRng, l: usize) -> Vec<ColourId> {
    loop {
        let set: Vec<ColourId> = (0..l).filter(|_| rng.gen_bool(0.6)).collect();
        if !set.is_empty() {
            return set;
        }
    }
}

pub fn random_start(rng: &mut StdRng, game: &CoordinationGame) -> JointStrategy {
    JointStrategy::new(
        (0..game.node_count())
            .map(|i| {
                let options: Vec<ColourId> = game.colour_set(i).iter().collect();
                options[rng.gen_range(0..options.len())]
            })
            .collect(),
    )
}

/// A simple-cycle game landing exactly in the requested variant.
pub fn random_cycle_game(
    rng: &mut StdRng,
    variant: CycleVariant,
    n: usize,
    l: usize,
    max_weight: u64,
    max_bonus: u64,
) -> CoordinationGame {
    assert!(n >= 3 && l >= 2 && max_weight >= 2 && max_bonus >= 1);
    let mut builder = GameBuilder::new(&COLOUR_NAMES[..l]);
    let mut sets = Vec::with_capacity(n);
    for _ in 0..n {
        let set = random_subset(rng, l);
        builder.node_ids(&set);
        sets.push(set);
    }
    let (bonus_nodes, heavy_edges): (usize, usize) = match variant {
        CycleVariant::AtMostOneBonus => (rng.gen_range(0..=1), rng.gen_range(0..=n)),
        CycleVariant::AtMostOneHeavyEdge => (rng.gen_range(2..=n.min(4)), rng.gen_range(0..=1)),
        CycleVariant::TwoBonusNodes => (2, rng.gen_range(2..=n)),
        CycleVariant::TwoHeavyEdges => (rng.gen_range(3..=n.min(5)), 2),
        CycleVariant::Unsupported => (3, 3),
    };
    let mut node_order: Vec<usize> = (0..n).collect();
    node_order.shuffle(rng);
    let heavy_targets: Vec<usize> = node_order.iter().copied().take(heavy_edges).collect();
    for i in 0..n {
        let target = (i + 1) % n;
        let w = if heavy_targets.contains(&target) {
            rng.gen_range(2..=max_weight)
        } else {
            1
        };
        builder.edge(i, target, w);
    }
    node_order.shuffle(rng);
    for &node in node_order.iter().take(bonus_nodes) {
        let set = &sets[node];
        let picks = rng.gen_range(1..=set.len().min(2));
        let mut chosen = set.clone();
        chosen.shuffle(rng);
        for &c in chosen.iter().take(picks) {
            builder.bonus_id(node, c, rng.gen_range(1..=max_bonus));
        }
    }
    let game = builder.build().expect("generated cycle is valid");
    debug_assert_eq!(
        crate::cycle::classify_cycle(&game).unwrap().variant,
        variant
    );
    game
}

/// An unweighted, bonus-free open chain of `m` cycles whose lengths come
/// from `lengths` (one per cycle); link positions are random.
pub fn random_chain_game(rng: &mut StdRng, lengths: &[usize], l: usize) -> CoordinationGame {
    assert!(lengths.len() >= 2 && lengths.iter().all(|&v| v >= 3));
    let mut builder = GameBuilder::new(&COLOUR_NAMES[..l]);
    let mut up_link: Option<usize> = None;
    for (j, &v) in lengths.iter().enumerate() {
        let mut cycle = Vec::with_capacity(v);
        // position of the shared node inside this cycle
        let shared_pos = up_link.map(|_| rng.gen_range(1..v));
        for p in 0..v {
            if Some(p) == shared_pos {
                cycle.push(up_link.unwrap());
            } else {
                let set = random_subset(rng, l);
                cycle.push(builder.node_ids(&set));
            }
        }
        for p in 0..v {
            builder.edge(cycle[p], cycle[(p + 1) % v], 1);
        }
        up_link = if j + 1 < lengths.len() {
            // next cycle hooks onto a node that is not already a link
            let candidates: Vec<usize> = (0..v)
                .filter(|&p| Some(p) != shared_pos)
                .map(|p| cycle[p])
                .collect();
            Some(candidates[rng.gen_range(0..candidates.len())])
        } else {
            None
        };
    }
    builder.build().expect("generated chain is valid")
}

/// A weighted DAG: edges only point from lower to higher ids.
pub fn random_dag_game(
    rng: &mut StdRng,
    n: usize,
    l: usize,
    max_weight: u64,
    max_bonus: u64,
    edge_prob: f64,
) -> CoordinationGame {
    let mut builder = GameBuilder::new(&COLOUR_NAMES[..l]);
    let mut sets = Vec::new();
    for _ in 0..n {
        let set = random_subset(rng, l);
        builder.node_ids(&set);
        sets.push(set);
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(edge_prob) {
                builder.edge(i, j, rng.gen_range(1..=max_weight));
            }
        }
    }
    if max_bonus > 0 {
        for (i, set) in sets.iter().enumerate() {
            if rng.gen_bool(0.4) {
                let c = set[rng.gen_range(0..set.len())];
                builder.bonus_id(i, c, rng.gen_range(1..=max_bonus));
            }
        }
    }
    builder.build().expect("generated dag is valid")
}

/// A two-colour game over an arbitrary random digraph.
pub fn random_two_colour_game(
    rng: &mut StdRng,
    n: usize,
    max_weight: u64,
    edge_prob: f64,
) -> CoordinationGame {
    let mut builder = GameBuilder::new(&COLOUR_NAMES[..2]);
    for _ in 0..n {
        let set: Vec<ColourId> = match rng.gen_range(0..6) {
            0 => vec![0],
            1 => vec![1],
            _ => vec![0, 1],
        };
        builder.node_ids(&set);
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(edge_prob) {
                builder.edge(i, j, rng.gen_range(1..=max_weight));
            }
        }
    }
    builder.build().expect("generated game is valid")
}

/// A small general game for oracle sweeps.
pub fn random_game(
    rng: &mut StdRng,
    n: usize,
    l: usize,
    max_weight: u64,
    max_bonus: u64,
    edge_prob: f64,
) -> CoordinationGame {
    let mut builder = GameBuilder::new(&COLOUR_NAMES[..l]);
    let mut sets = Vec::new();
    for _ in 0..n {
        let set = random_subset(rng, l);
        builder.node_ids(&set);
        sets.push(set);
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(edge_prob) {
                builder.edge(i, j, rng.gen_range(1..=max_weight));
            }
        }
    }
    if max_bonus > 0 {
        for (i, set) in sets.iter().enumerate() {
            if rng.gen_bool(0.3) {
                let c = set[rng.gen_range(0..set.len())];
                builder.bonus_id(i, c, rng.gen_range(1..=max_bonus));
            }
        }
    }
    builder.build().expect("generated game is valid")
}

/// A random 3-CNF formula.
pub fn random_formula(rng: &mut StdRng, num_vars: usize, num_clauses: usize) -> CnfFormula {
    let clauses = (0..num_clauses)
        .map(|_| {
            [0; 3].map(|_| Literal {
                var: rng.gen_range(0..num_vars),
                positive: rng.gen_bool(0.5),
            })
        })
        .collect();
    CnfFormula::new(num_vars, clauses).expect("generated formula is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::detect_chain;
    use crate::cycle::classify_cycle;

    #[test]
    fn cycle_generator_hits_each_variant() {
        let mut r = rng(42);
        for variant in [
            CycleVariant::AtMostOneBonus,
            CycleVariant::AtMostOneHeavyEdge,
            CycleVariant::TwoBonusNodes,
            CycleVariant::TwoHeavyEdges,
        ] {
            for _ in 0..20 {
                let n = r.gen_range(3..=10);
                let game = random_cycle_game(&mut r, variant, n, 4, 5, 3);
                assert_eq!(classify_cycle(&game).unwrap().variant, variant);
            }
        }
    }

    #[test]
    fn chain_generator_produces_detectable_chains() {
        let mut r = rng(7);
        for _ in 0..30 {
            let m = r.gen_range(2..=6);
            let lengths: Vec<usize> = (0..m).map(|_| r.gen_range(3..=5)).collect();
            let game = random_chain_game(&mut r, &lengths, 3);
            let decomp = detect_chain(game.graph()).unwrap();
            assert_eq!(decomp.cycle_count(), m);
            let mut got: Vec<usize> = decomp.cycles.iter().map(|c| c.len()).collect();
            let mut want = lengths.clone();
            got.sort_unstable();
            want.sort_unstable();
            assert_eq!(got, want);
        }
    }
}
