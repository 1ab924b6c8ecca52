//! Reference games shared by the test suites and the benchmark command.
//!
//! Node ids in comments are 1-based to match the text formats; the code
//! itself uses 0-based indices.

use crate::model::{CoordinationGame, JointStrategy};

/// Nine-node unweighted game with no Nash equilibrium: a directed triangle
/// 1->2->3->1, echo nodes 4,5,6 spliced between them and three fixed-colour
/// feeders 7,8,9. Returns the game and the reference joint strategy
/// (b,c,c,b,c,c,a,c,b) whose payoff vector is (0,1,2,1,1,1,0,0,0).
pub fn satellite_triangle() -> (CoordinationGame, JointStrategy) {
    let mut g = CoordinationGame::builder(&["a", "b", "c"]);
    let n1 = g.node(&["a", "b"]);
    let n2 = g.node(&["a", "c"]);
    let n3 = g.node(&["b", "c"]);
    let n4 = g.node(&["a", "b"]);
    let n5 = g.node(&["a", "c"]);
    let n6 = g.node(&["b", "c"]);
    let n7 = g.node(&["a"]);
    let n8 = g.node(&["c"]);
    let n9 = g.node(&["b"]);
    for (u, v) in [
        (n1, n2),
        (n2, n3),
        (n3, n1),
        (n1, n4),
        (n4, n2),
        (n2, n5),
        (n5, n3),
        (n3, n6),
        (n6, n1),
        (n7, n1),
        (n8, n2),
        (n9, n3),
    ] {
        g.edge(u, v, 1);
    }
    let game = g.build().expect("fixture is valid");
    let c = |name: &str| game.colours().colour_id(name).unwrap();
    let s = JointStrategy::new(vec![
        c("b"),
        c("c"),
        c("c"),
        c("b"),
        c("c"),
        c("c"),
        c("a"),
        c("c"),
        c("b"),
    ]);
    (game, s)
}

/// Three-node cycle 1->2->3->1 with weight 2 on every edge, three bonus
/// nodes and no Nash equilibrium: sets {a,b} / {a,c} / {b,c} with bonus 1
/// on a, c and b respectively.
pub fn heavy_triangle_bonuses() -> CoordinationGame {
    let mut g = CoordinationGame::builder(&["a", "b", "c"]);
    let n1 = g.node(&["a", "b"]);
    let n2 = g.node(&["a", "c"]);
    let n3 = g.node(&["b", "c"]);
    g.edge(n1, n2, 2).edge(n2, n3, 2).edge(n3, n1, 2);
    g.bonus(n1, "a", 1).bonus(n2, "c", 1).bonus(n3, "b", 1);
    g.build().expect("fixture is valid")
}

/// Unweighted directed n-cycle where every node may pick a or b. Has the
/// two unicolour Nash equilibria and an infinite rotation path.
pub fn rotating_cycle(n: usize) -> CoordinationGame {
    let mut g = CoordinationGame::builder(&["a", "b"]);
    let nodes: Vec<usize> = (0..n).map(|_| g.node(&["a", "b"])).collect();
    for i in 0..n {
        g.edge(nodes[i], nodes[(i + 1) % n], 1);
    }
    g.build().expect("fixture is valid")
}

/// Unweighted n-cycle (n >= 5) over colours {a,b,c,d} where node n-2 has the
/// single bonus (1 on c) and restricted sets C(n-2) = {a,c}, C(n-1) = {c,d}.
/// From [`slow_convergence_start`] the clockwise max-bonus schedule walks a
/// unique improvement path of length 3n-5 ending in all-c.
pub fn slow_convergence_cycle(n: usize) -> CoordinationGame {
    assert!(n >= 5);
    let mut g = CoordinationGame::builder(&["a", "b", "c", "d"]);
    let mut nodes = Vec::new();
    for i in 0..n {
        if i == n - 3 {
            nodes.push(g.node(&["a", "c"]));
        } else if i == n - 2 {
            nodes.push(g.node(&["c", "d"]));
        } else {
            nodes.push(g.node(&["a", "b", "c", "d"]));
        }
    }
    for i in 0..n {
        g.edge(nodes[i], nodes[(i + 1) % n], 1);
    }
    g.bonus(nodes[n - 3], "c", 1);
    g.build().expect("fixture is valid")
}

/// Start strategy (b,...,b,a,d,a) for [`slow_convergence_cycle`].
pub fn slow_convergence_start(game: &CoordinationGame) -> JointStrategy {
    let n = game.node_count();
    let c = |name: &str| game.colours().colour_id(name).unwrap();
    let mut v = vec![c("b"); n];
    v[n - 3] = c("a");
    v[n - 2] = c("d");
    v[n - 1] = c("a");
    JointStrategy::new(v)
}

/// Open chain of five triangles over colours {red, blue} with the reference
/// colouring whose grade vector is (-, u+, ?, +, u+). Cycle node lists
/// (1-based ids): C1 = 1,2,3; C2 = 4,5,1; C3 = 6,4,7; C4 = 8,6,9;
/// C5 = 10,11,8. Link nodes: 1, 4, 6, 8.
pub fn five_triangle_chain() -> (CoordinationGame, JointStrategy) {
    let mut g = CoordinationGame::builder(&["red", "blue"]);
    let nodes: Vec<usize> = (0..11).map(|_| g.node(&["red", "blue"])).collect();
    let e = |g: &mut crate::model::GameBuilder, u: usize, v: usize| {
        g.edge(nodes[u], nodes[v], 1);
    };
    // C1
    e(&mut g, 0, 1);
    e(&mut g, 1, 2);
    e(&mut g, 2, 0);
    // C2 (down-link 1 sits at position 3)
    e(&mut g, 3, 4);
    e(&mut g, 4, 0);
    e(&mut g, 0, 3);
    // C3 (down-link 4 sits at position 2)
    e(&mut g, 5, 3);
    e(&mut g, 3, 6);
    e(&mut g, 6, 5);
    // C4 (down-link 6 sits at position 2)
    e(&mut g, 7, 5);
    e(&mut g, 5, 8);
    e(&mut g, 8, 7);
    // C5 (down-link 8 sits at position 3)
    e(&mut g, 9, 10);
    e(&mut g, 10, 7);
    e(&mut g, 7, 9);
    let game = g.build().expect("fixture is valid");
    let red = game.colours().colour_id("red").unwrap();
    let blue = game.colours().colour_id("blue").unwrap();
    let s = JointStrategy::new(vec![
        red,  // [1,1]
        blue, // [1,2]
        blue, // [1,3]
        red,  // [2,1]
        red,  // [2,2]
        blue, // [3,1]
        blue, // [3,3]
        red,  // [4,1]
        blue, // [4,3]
        red,  // [5,1]
        red,  // [5,2]
    ]);
    (game, s)
}

/// Twelve-node strongly connected weighted game whose three unicolour
/// strategies are strong equilibria, yet no c-improvement path from the
/// returned start terminates: a heavy triangle 1,2,3 wrapped in guard nodes
/// 4..9 and anchors 10,11,12 that pin the guards' colours.
pub fn locked_triangle_network() -> (CoordinationGame, JointStrategy) {
    let mut g = CoordinationGame::builder(&["a", "b", "c"]);
    let nodes: Vec<usize> = (0..12).map(|_| g.node(&["a", "b", "c"])).collect();
    // directed triangle
    g.edge(nodes[0], nodes[1], 2);
    g.edge(nodes[1], nodes[2], 2);
    g.edge(nodes[2], nodes[0], 2);
    // bidirectional spokes (1-based pairs): 4-1 w2, 1-5 w3, 2-6 w2, 2-7 w3,
    // 8-3 w2, 9-3 w3, 5-A w3, A-6 w2, B-4 w2, 9-B w3, 8-C w2, C-7 w3.
    let pairs: [(usize, usize, u64); 12] = [
        (3, 0, 2),
        (0, 4, 3),
        (1, 5, 2),
        (1, 6, 3),
        (7, 2, 2),
        (8, 2, 3),
        (4, 9, 3),
        (9, 5, 2),
        (10, 3, 2),
        (8, 10, 3),
        (7, 11, 2),
        (11, 6, 3),
    ];
    for (u, v, w) in pairs {
        g.edge(nodes[u], nodes[v], w);
        g.edge(nodes[v], nodes[u], w);
    }
    let game = g.build().expect("fixture is valid");
    let c = |name: &str| game.colours().colour_id(name).unwrap();
    let s = JointStrategy::new(vec![
        c("a"), // 1
        c("a"), // 2
        c("b"), // 3
        c("b"), // 4
        c("a"), // 5
        c("a"), // 6
        c("c"), // 7
        c("c"), // 8
        c("b"), // 9
        c("a"), // A
        c("b"), // B
        c("c"), // C
    ]);
    (game, s)
}

/// Weight-2 triangle over {a,b,c} where every node has bonuses 3 and 2 on
/// two of the colours; no Nash equilibrium exists and no c-improvement path
/// terminates.
pub fn bonus_rich_heavy_triangle() -> CoordinationGame {
    let mut g = CoordinationGame::builder(&["a", "b", "c"]);
    let n1 = g.node(&["a", "b", "c"]);
    let n2 = g.node(&["a", "b", "c"]);
    let n3 = g.node(&["a", "b", "c"]);
    g.edge(n1, n2, 2).edge(n2, n3, 2).edge(n3, n1, 2);
    g.bonus(n1, "a", 3).bonus(n1, "b", 2);
    g.bonus(n2, "a", 2).bonus(n2, "c", 3);
    g.bonus(n3, "b", 3).bonus(n3, "c", 2);
    g.build().expect("fixture is valid")
}

/// Bidirectional 4-cycle over {a,b}: (a,a,b,b) is Nash but not strong.
pub fn bidirectional_square() -> CoordinationGame {
    let mut g = CoordinationGame::builder(&["a", "b"]);
    let nodes: Vec<usize> = (0..4).map(|_| g.node(&["a", "b"])).collect();
    for i in 0..4 {
        let j = (i + 1) % 4;
        g.edge(nodes[i], nodes[j], 1);
        g.edge(nodes[j], nodes[i], 1);
    }
    g.build().expect("fixture is valid")
}
