//! Coalitional machinery: the maximal profitable unicolour coalition and
//! unicolour deviation search from a Nash equilibrium.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::model::{
    is_nash_bool, payoff, Coalition, ColourId, CoordinationGame, JointStrategy,
};

/// The unique maximal coalition that can profitably deviate to `c`, or
/// `None` when no coalition can.
///
/// Starts from every node that could switch to `c` and strips members that
/// fail to strictly improve under the joint switch; payoff maintenance is
/// incremental, each removal touching only the removed node's successors.
/// The result is order-independent, but removals go lowest-id first for a
/// reproducible run.
pub fn max_profitable_coalition_to_colour(
    game: &CoordinationGame,
    s: &JointStrategy,
    c: ColourId,
) -> Result<Option<Coalition>, Error> {
    if c >= game.palette_len() {
        return Err(Error::ColourOutOfRange {
            colour: c,
            palette: game.palette_len(),
        });
    }
    s.validate(game)?;
    let n = game.node_count();
    let mut in_a = vec![false; n];
    let mut members = 0usize;
    for i in 0..n {
        if game.colour_set(i).contains(c) && s.get(i) != c {
            in_a[i] = true;
            members += 1;
        }
    }
    if members == 0 {
        return Ok(None);
    }
    // prospective[i]: payoff of i when the whole current A plays c and the
    // rest keeps s. Only meaningful while i is in A.
    let mut prospective = vec![0u64; n];
    let baseline: Vec<u64> = (0..n).map(|i| payoff(game, s, i)).collect();
    for i in 0..n {
        if !in_a[i] {
            continue;
        }
        let mut v = game.bonus(i, c);
        for &(j, w) in game.graph().in_edges(i) {
            if in_a[j] || s.get(j) == c {
                v += w;
            }
        }
        prospective[i] = v;
    }
    let mut lagging: BTreeSet<usize> = (0..n)
        .filter(|&i| in_a[i] && prospective[i] <= baseline[i])
        .collect();
    while let Some(&a) = lagging.iter().next() {
        lagging.remove(&a);
        in_a[a] = false;
        members -= 1;
        if members == 0 {
            return Ok(None);
        }
        for &(t, w) in game.graph().out_edges(a) {
            if !in_a[t] {
                continue;
            }
            // a now keeps s(a) instead of c
            if s.get(a) != c {
                prospective[t] -= w;
                if prospective[t] <= baseline[t] {
                    lagging.insert(t);
                }
            }
        }
    }
    let coalition = Coalition::new((0..n).filter(|&i| in_a[i]).collect())?;
    Ok(Some(coalition))
}

/// Searches the palette in id order for a colour admitting a profitable
/// unicolour coalition from the Nash equilibrium `s`.
///
/// Documented as complete for the graph classes studied here (simple
/// cycles, open chains, DAGs, two-colour games): for these, absence of a
/// unicolour deviation certifies `s` strong. General certification goes
/// through the oracle.
pub fn find_unicolour_deviation_from_ne(
    game: &CoordinationGame,
    s: &JointStrategy,
) -> Result<Option<(Coalition, ColourId)>, Error> {
    if !is_nash_bool(game, s) {
        return Err(Error::NotNash);
    }
    for c in 0..game.palette_len() {
        if let Some(k) = max_profitable_coalition_to_colour(game, s, c)? {
            return Ok(Some((k, c)));
        }
    }
    Ok(None)
}

/// Witness that a coalitional deviation from a Nash equilibrium is built on
/// monochromatic directed cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    /// Distinct monochromatic directed simple cycles inside the coalition,
    /// each listed in edge order.
    pub cycles: Vec<Vec<usize>>,
    /// For each coalition member (in coalition order), the index into
    /// `cycles` of the cycle its same-colour predecessor chain reaches.
    pub member_cycle: Vec<usize>,
}

/// For a profitable deviation `(s, s2, coalition)` from a Nash equilibrium,
/// follows each member's same-colour in-neighbours inside the coalition
/// until a directed simple cycle closes.
///
/// Every member has such an in-neighbour (otherwise it could already have
/// improved alone, contradicting the equilibrium), so the walk always ends
/// on a monochromatic cycle; members on a tail reach their cycle through
/// the chain rather than lying on it.
pub fn unicolour_cycle_witness(
    game: &CoordinationGame,
    s: &JointStrategy,
    s2: &JointStrategy,
    coalition: &Coalition,
) -> Result<CycleWitness, Error> {
    if !is_nash_bool(game, s) {
        return Err(Error::NotNash);
    }
    let diff = s.diff(s2);
    if diff != coalition.members() {
        return Err(Error::Internal(
            "coalition does not match the strategy diff".into(),
        ));
    }
    for &i in coalition.members() {
        if payoff(game, s2, i) <= payoff(game, s, i) {
            return Err(Error::Internal(format!(
                "node {} does not strictly improve",
                i + 1
            )));
        }
    }
    // same-colour predecessor within the coalition, lowest id first
    let pred_in_coalition = |i: usize| -> Option<usize> {
        game.graph()
            .in_edges(i)
            .iter()
            .map(|&(j, _)| j)
            .find(|&j| coalition.contains(j) && s2.get(j) == s2.get(i))
    };
    let n = game.node_count();
    // cycle_of[i] = index of the witness cycle node i resolves to
    let mut cycle_of: Vec<Option<usize>> = vec![None; n];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut member_cycle = Vec::with_capacity(coalition.len());
    for &start in coalition.members() {
        if let Some(idx) = cycle_of[start] {
            member_cycle.push(idx);
            continue;
        }
        let mut path = vec![start];
        let mut on_path: BTreeSet<usize> = [start].into();
        let idx = loop {
            let tip = *path.last().unwrap();
            let pred = pred_in_coalition(tip).ok_or_else(|| {
                Error::Internal(format!(
                    "node {} has no same-colour predecessor in the coalition; \
                     the deviation could not have been profitable from an equilibrium",
                    tip + 1
                ))
            })?;
            if let Some(idx) = cycle_of[pred] {
                break idx;
            }
            if on_path.contains(&pred) {
                // close the cycle: path suffix from pred to tip, reversed
                // into edge order
                let at = path.iter().position(|&x| x == pred).unwrap();
                let mut cycle: Vec<usize> = path[at..].to_vec();
                cycle.reverse();
                debug_assert!(cycle
                    .windows(2)
                    .all(|w| game.graph().weight(w[0], w[1]).is_some()));
                cycles.push(cycle);
                break cycles.len() - 1;
            }
            on_path.insert(pred);
            path.push(pred);
        };
        for &node in &path {
            cycle_of[node] = Some(idx);
        }
        member_cycle.push(idx);
    }
    Ok(CycleWitness {
        cycles,
        member_cycle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::is_nash;
    use crate::oracle::{enumerate_nash, OracleConfig};

    #[test]
    fn unicolour_strategy_admits_no_coalition_to_its_own_colour() {
        let game = fixtures::bidirectional_square();
        let s = JointStrategy::new(vec![0; 4]);
        assert_eq!(
            max_profitable_coalition_to_colour(&game, &s, 0).unwrap(),
            None
        );
    }

    #[test]
    fn square_split_pair_yields_the_lagging_pair() {
        let game = fixtures::bidirectional_square();
        let s = JointStrategy::new(vec![0, 0, 1, 1]);
        let k = max_profitable_coalition_to_colour(&game, &s, 0)
            .unwrap()
            .unwrap();
        assert_eq!(k.members(), &[2, 3]);
        // and towards colour 1 the other pair moves
        let k = max_profitable_coalition_to_colour(&game, &s, 1)
            .unwrap()
            .unwrap();
        assert_eq!(k.members(), &[0, 1]);
    }

    #[test]
    fn deviation_search_respects_colour_order() {
        let game = fixtures::bidirectional_square();
        let s = JointStrategy::new(vec![0, 0, 1, 1]);
        let (k, c) = find_unicolour_deviation_from_ne(&game, &s)
            .unwrap()
            .unwrap();
        assert_eq!(c, 0);
        assert_eq!(k.members(), &[2, 3]);
    }

    #[test]
    fn deviation_search_rejects_non_equilibria() {
        let game = fixtures::bidirectional_square();
        let s = JointStrategy::new(vec![0, 1, 0, 1]);
        assert!(!is_nash(&game, &s).0);
        assert!(matches!(
            find_unicolour_deviation_from_ne(&game, &s),
            Err(Error::NotNash)
        ));
    }

    #[test]
    fn unicolour_equilibwith_no_deviation_is_reported_absent() {
        let game = fixtures::bidirectional_square();
        let s = JointStrategy::new(vec![0; 4]);
        assert_eq!(find_unicolour_deviation_from_ne(&game, &s).unwrap(), None);
    }

    #[test]
    fn witness_on_square_pair_deviation() {
        let game = fixtures::bidirectional_square();
        let s = JointStrategy::new(vec![0, 0, 1, 1]);
        let s2 = JointStrategy::new(vec![0, 0, 0, 0]);
        let k = Coalition::new(vec![2, 3]).unwrap();
        let w = unicolour_cycle_witness(&game, &s, &s2, &k).unwrap();
        assert_eq!(w.cycles.len(), 1);
        let mut cycle = w.cycles[0].clone();
        cycle.sort_unstable();
        assert_eq!(cycle, vec![2, 3]);
    }

    #[test]
    fn witness_handles_tail_members_off_the_cycle() {
        // 0 <-> 1 plus 1 -> 2: a profitable all-to-c deviation from an
        // all-zero-payoff equilibrium drags node 2 along even though it
        // lies on no directed cycle.
        let mut b = CoordinationGame::builder(&["a", "b", "c", "d"]);
        let n0 = b.node(&["a", "c"]);
        let n1 = b.node(&["b", "c"]);
        let n2 = b.node(&["d", "c"]);
        b.edge(n0, n1, 1).edge(n1, n0, 1).edge(n1, n2, 1);
        let game = b.build().unwrap();
        let c = game.colours().colour_id("c").unwrap();
        let s = JointStrategy::new(vec![0, 1, 3]); // a, b, d — everyone at 0
        assert!(is_nash(&game, &s).0);
        let s2 = JointStrategy::new(vec![c, c, c]);
        let k = Coalition::new(vec![0, 1, 2]).unwrap();
        let w = unicolour_cycle_witness(&game, &s, &s2, &k).unwrap();
        assert_eq!(w.cycles.len(), 1);
        let mut cycle = w.cycles[0].clone();
        cycle.sort_unstable();
        assert_eq!(cycle, vec![0, 1], "node 2 hangs off the 0<->1 cycle");
        assert_eq!(w.member_cycle, vec![0, 0, 0]);
    }

    #[test]
    fn algorithm_matches_brute_force_on_fixture_equilibria() {
        let game = fixtures::bidirectional_square();
        let cfg = OracleConfig::default();
        for s in enumerate_nash(&game, &cfg).unwrap() {
            for c in 0..game.palette_len() {
                let fast = max_profitable_coalition_to_colour(&game, &s, c).unwrap();
                let brute = brute_max_coalition(&game, &s, c);
                assert_eq!(fast.map(|k| k.members().to_vec()), brute);
            }
        }
    }

    /// Exhaustive maximal profitable-to-c coalition over all subsets.
    pub(crate) fn brute_max_coalition(
        game: &CoordinationGame,
        s: &JointStrategy,
        c: usize,
    ) -> Option<Vec<usize>> {
        let candidates: Vec<usize> = (0..game.node_count())
            .filter(|&i| game.colour_set(i).contains(c) && s.get(i) != c)
            .collect();
        let mut best: Option<Vec<usize>> = None;
        for mask in 1u32..(1 << candidates.len()) {
            let subset: Vec<usize> = candidates
                .iter()
                .enumerate()
                .filter(|(b, _)| (mask >> b) & 1 == 1)
                .map(|(_, &i)| i)
                .collect();
            let mut s2 = s.clone();
            for &i in &subset {
                s2.set(i, c);
            }
            if subset.iter().all(|&i| payoff(game, &s2, i) > payoff(game, s, i)) {
                match &best {
                    Some(b) if b.len() >= subset.len() => {}
                    _ => best = Some(subset),
                }
            }
        }
        best
    }
}
