//! Constructors for the hardness-gadget games and the small worked example
//! games used throughout the test suites: the diagonal-equilibrium family
//! encoding independent-set instances, the four-player family encoding
//! 3-SAT instances, and three fixed example games.

use thiserror::Error;

use crate::game::NormalFormGame;

#[derive(Debug, Error)]
pub enum GadgetError {
    #[error("need 0 < b < c < 1/(r+1)^2, got b={b}, c={c}, r={r}")]
    ParameterRange { b: f64, c: f64, r: usize },
    #[error("graph edge ({u}, {v}) out of range for {r} vertices")]
    EdgeRange { u: usize, v: usize, r: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("epsilon must be positive, got {0}")]
    BadEpsilon(f64),
    #[error("clause {index} has {got} literals, expected 3")]
    ClauseArity { index: usize, got: usize },
    #[error("literal references variable {var} but the formula has {vars} variables")]
    VariableRange { var: usize, vars: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Simple undirected graph on vertices `0..r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl UndirectedGraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, GadgetError> {
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u == v {
                return Err(GadgetError::SelfLoop(u));
            }
            if u >= vertices || v >= vertices {
                return Err(GadgetError::EdgeRange { u, v, r: vertices });
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        normalized.dedup();
        Ok(UndirectedGraph {
            vertices,
            edges: normalized,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).is_ok()
    }

    /// Size of a maximum independent set, by exhaustive enumeration. Meant
    /// for small instances only.
    pub fn max_independent_set(&self) -> usize {
        let r = self.vertices;
        assert!(r <= 20, "exhaustive oracle is for small graphs");
        let mut best = 0;
        for mask in 0u32..(1 << r) {
            let mut ok = true;
            for &(u, v) in &self.edges {
                if mask & (1 << u) != 0 && mask & (1 << v) != 0 {
                    ok = false;
                    break;
                }
            }
            if ok {
                best = best.max(mask.count_ones() as usize);
            }
        }
        best
    }

    /// Parses an edge-list document: first non-comment line is the vertex
    /// count, each following line one `u v` pair (1-based). `#` starts a
    /// comment.
    pub fn parse_edge_list(text: &str) -> Result<Self, GadgetError> {
        let mut vertices: Option<usize> = None;
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            match vertices {
                None => {
                    let r: usize = fields.next().unwrap().parse().map_err(|_| GadgetError::Parse {
                        line: lineno + 1,
                        msg: format!("expected vertex count, got {line:?}"),
                    })?;
                    vertices = Some(r);
                }
                Some(_) => {
                    let mut pair = [0usize; 2];
                    for slot in pair.iter_mut() {
                        let tok = fields.next().ok_or_else(|| GadgetError::Parse {
                            line: lineno + 1,
                            msg: "expected two vertex ids".into(),
                        })?;
                        let v: usize = tok.parse().map_err(|_| GadgetError::Parse {
                            line: lineno + 1,
                            msg: format!("bad vertex id {tok:?}"),
                        })?;
                        if v == 0 {
                            return Err(GadgetError::Parse {
                                line: lineno + 1,
                                msg: "vertex ids are 1-based".into(),
                            });
                        }
                        *slot = v - 1;
                    }
                    edges.push((pair[0], pair[1]));
                }
            }
        }
        let vertices = vertices.ok_or(GadgetError::Parse {
            line: 0,
            msg: "empty graph document".into(),
        })?;
        UndirectedGraph::new(vertices, edges)
    }
}

/// A single literal: a variable index and its sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

/// CNF formula with exactly three literals per clause. A clause may mention
/// the same variable in more than one slot; slots are treated independently
/// by the game construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf3Formula {
    num_vars: usize,
    clauses: Vec<[Literal; 3]>,
}

impl Cnf3Formula {
    pub fn new(num_vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self, GadgetError> {
        for clause in &clauses {
            for lit in clause {
                if lit.var >= num_vars {
                    return Err(GadgetError::VariableRange {
                        var: lit.var,
                        vars: num_vars,
                    });
                }
            }
        }
        Ok(Cnf3Formula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    /// Parses DIMACS-style CNF: `c` comment lines, a `p cnf <vars> <clauses>`
    /// header, then clause lines of signed 1-based variable ids terminated
    /// by 0. Every clause must contain exactly three literals.
    pub fn parse_dimacs(text: &str) -> Result<Self, GadgetError> {
        let mut num_vars: Option<usize> = None;
        let mut clauses: Vec<[Literal; 3]> = Vec::new();
        let mut current: Vec<Literal> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if line.starts_with('p') {
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() < 4 || fields[1] != "cnf" {
                    return Err(GadgetError::Parse {
                        line: lineno + 1,
                        msg: format!("bad problem line {line:?}"),
                    });
                }
                num_vars = Some(fields[2].parse().map_err(|_| GadgetError::Parse {
                    line: lineno + 1,
                    msg: format!("bad variable count {:?}", fields[2]),
                })?);
                continue;
            }
            let vars = num_vars.ok_or(GadgetError::Parse {
                line: lineno + 1,
                msg: "clause before problem line".into(),
            })?;
            for tok in line.split_whitespace() {
                let v: i64 = tok.parse().map_err(|_| GadgetError::Parse {
                    line: lineno + 1,
                    msg: format!("bad literal {tok:?}"),
                })?;
                if v == 0 {
                    if current.len() != 3 {
                        return Err(GadgetError::ClauseArity {
                            index: clauses.len(),
                            got: current.len(),
                        });
                    }
                    clauses.push([current[0], current[1], current[2]]);
                    current.clear();
                } else {
                    let var = v.unsigned_abs() as usize - 1;
                    if var >= vars {
                        return Err(GadgetError::VariableRange { var, vars });
                    }
                    current.push(Literal {
                        var,
                        positive: v > 0,
                    });
                }
            }
        }
        if !current.is_empty() {
            return Err(GadgetError::ClauseArity {
                index: clauses.len(),
                got: current.len(),
            });
        }
        Cnf3Formula::new(num_vars.unwrap_or(0), clauses)
    }
}

/// Default gadget parameters for `r` vertices: the largest simple fractions
/// meeting the strict bound `b < c < 1/(r+1)^2`.
pub fn indset_defaults(r: usize) -> (f64, f64) {
    let c = 1.0 / (((r + 1) * (r + 1)) as f64 + 1.0);
    (c / 2.0, c)
}

/// Builds the three-player game encoding an independent-set instance. The
/// followers share action set `{0..r-1, chi}` (chi = index `r`), the leader
/// picks among the `r` vertices. Follower payoffs make the diagonal
/// vertex-outcomes the only candidate equilibria; leader payoffs encode the
/// graph: agreeing on a vertex adjacent to a leader-played vertex is heavily
/// penalised.
pub fn make_indset_game(
    graph: &UndirectedGraph,
    b: f64,
    c: f64,
) -> Result<NormalFormGame, GadgetError> {
    let r = graph.num_vertices();
    let bound = 1.0 / ((r + 1) * (r + 1)) as f64;
    if !(0.0 < b && b < c && c < bound) {
        return Err(GadgetError::ParameterRange { b, c, r });
    }
    let chi = r;
    let m_f = r + 1;
    let total = m_f * m_f * r;
    let mut u1 = vec![0.0; total];
    let mut u2 = vec![0.0; total];
    let mut u3 = vec![0.0; total];
    let penalty = -1.0 / c - 1.0;
    for a1 in 0..m_f {
        for a2 in 0..m_f {
            for a3 in 0..r {
                let idx = (a1 * m_f + a2) * r + a3;
                // Followers.
                let (f1, f2) = if a1 == a2 {
                    if a1 == chi {
                        (c, b)
                    } else if a1 == a3 {
                        (1.0, 1.0)
                    } else {
                        (0.0, 0.0)
                    }
                } else if a1 == chi {
                    (c, 0.0)
                } else if a2 == chi {
                    (1.0, 0.0)
                } else {
                    (b, b)
                };
                u1[idx] = f1;
                u2[idx] = f2;
                // Leader: only diagonal vertex-outcomes matter.
                u3[idx] = if a1 == a2 && a1 != chi && a1 != a3 {
                    if graph.has_edge(a1, a3) {
                        penalty
                    } else {
                        1.0
                    }
                } else {
                    0.0
                };
            }
        }
    }
    Ok(NormalFormGame::new(vec![m_f, m_f, r], vec![u1, u2, u3]).expect("consistent tensors"))
}

/// Builds the four-player game encoding a 3-SAT instance. Followers share
/// one action per (clause, truth-assignment-pattern) pair plus chi; the
/// leader has one action per variable plus a fallback action. Action
/// `8c + a` is clause `c` with pattern `a` (bit 4 = slot 1, bit 2 = slot 2,
/// bit 1 = slot 3; a set bit negates the slot).
pub fn make_3sat_game(formula: &Cnf3Formula, eps: f64) -> Result<NormalFormGame, GadgetError> {
    if !(eps > 0.0) {
        return Err(GadgetError::BadEpsilon(eps));
    }
    let r = formula.num_vars();
    let t = formula.clauses().len();
    let m_f = 8 * t + 1;
    let m_l = r + 1;
    let chi = 8 * t;
    let w = r;
    let total = m_f * m_f * m_f * m_l;
    let mut tensors = vec![vec![0.0; total]; 4];

    let slot_positive = |action: usize, slot: usize| -> bool {
        let a = action % 8;
        (a >> (2 - slot)) & 1 == 0
    };
    let clause_of = |action: usize| -> usize { action / 8 };

    let frac_mid = 1.0 / (r + 2) as f64;
    let lo_thresh = 1.0 / (r + 1) as f64;
    let hi_thresh = r as f64 / (r + 1) as f64;

    for b1 in 0..m_f {
        for b2 in 0..m_f {
            for b3 in 0..m_f {
                for b4 in 0..m_l {
                    let idx = ((b1 * m_f + b2) * m_f + b3) * m_l + b4;
                    let c1 = b1 == chi;
                    let c2 = b2 == chi;
                    let c3 = b3 == chi;
                    let mut u = [0.0f64; 4];
                    if !c1 && !c2 && !c3 && b1 == b2 && b2 == b3 {
                        // Diagonal clause-pattern outcome.
                        let clause = &formula.clauses()[clause_of(b1)];
                        for p in 0..3 {
                            let var = clause[p].var;
                            let positive = slot_positive(b1, p);
                            u[p] = if b4 == w {
                                if positive {
                                    0.0
                                } else {
                                    1.0
                                }
                            } else if (var == b4) == positive {
                                1.0
                            } else {
                                0.0
                            };
                        }
                        // Leader: eps when the pattern falsifies the clause.
                        let falsified =
                            (0..3).all(|p| slot_positive(b1, p) != clause[p].positive);
                        u[3] = if falsified { eps } else { 1.0 };
                    } else if !c1 && !c2 && !c3 {
                        u[0] = frac_mid;
                        u[1] = frac_mid;
                        u[2] = frac_mid;
                    } else if c1 && !c2 && !c3 {
                        u[0] = if slot_positive(b2, 0) { lo_thresh } else { hi_thresh };
                    } else if !c1 && c2 && !c3 {
                        u[0] = 1.0;
                        u[1] = if slot_positive(b1, 1) { lo_thresh } else { hi_thresh };
                    } else if !c1 && !c2 && c3 {
                        u[1] = 1.0;
                        u[2] = if slot_positive(b2, 2) { lo_thresh } else { hi_thresh };
                    } else if !c1 && c2 && c3 {
                        u[0] = 1.0;
                        u[2] = 1.0;
                    } else if c1 && !c2 && c3 {
                        u[0] = 1.0;
                    } else {
                        // (chi, chi, b3) for every b3, including chi.
                        u[1] = 1.0;
                    }
                    for p in 0..4 {
                        tensors[p][idx] = u[p];
                    }
                }
            }
        }
    }
    Ok(NormalFormGame::new(vec![m_f, m_f, m_f, m_l], tensors).expect("consistent tensors"))
}

/// The three fixed example games.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PaperExample {
    /// 2x2x2 game whose pessimistic value is a supremum but not a maximum.
    Nonexistence,
    /// mu-parameterised 2x2x2 game separating optimistic and pessimistic
    /// values by an arbitrarily large margin. Requires `mu > 1`.
    ArbitrarilyWorse(f64),
    /// A 5x5x3 two-variable 2-SAT illustration game, included verbatim as a
    /// fixture (not generator output) with leader epsilon-payoff 0.01.
    TwoSatFig5,
}

/// Leader payoff used for the falsifying diagonal entry of the 2-SAT
/// fixture game.
pub const TWO_SAT_FIG5_EPS: f64 = 0.01;

pub fn make_paper_example(which: PaperExample) -> NormalFormGame {
    match which {
        PaperExample::Nonexistence => {
            // Entries by (a1, a2, a3), leader action last.
            let entries: [[f64; 3]; 8] = [
                [1.0, 1.0, 0.0],  // (0,0,0)
                [0.0, 0.0, 0.0],  // (0,0,1)
                [2.0, 2.0, 5.0],  // (0,1,0)
                [2.0, 2.0, 10.0], // (0,1,1)
                [0.5, 0.5, 1.0],  // (1,0,0)
                [0.5, 0.5, 1.0],  // (1,0,1)
                [1.0, 1.0, 0.0],  // (1,1,0)
                [0.0, 0.0, 0.0],  // (1,1,1)
            ];
            from_triples(vec![2, 2, 2], &entries)
        }
        PaperExample::ArbitrarilyWorse(mu) => {
            assert!(mu > 1.0, "the construction needs mu > 1");
            let entries: [[f64; 3]; 8] = [
                [1.0, 1.0, 0.0],
                [0.0, 0.0, 0.0],
                [0.5, 0.5, 0.0],
                [0.5, 0.5, 4.0 * mu],
                [2.0, 2.0, 1.0],
                [2.0, 2.0, mu],
                [0.0, 0.0, 0.0],
                [1.0, 1.0, 0.0],
            ];
            from_triples(vec![2, 2, 2], &entries)
        }
        PaperExample::TwoSatFig5 => two_sat_fig5(),
    }
}

fn from_triples(actions: Vec<usize>, entries: &[[f64; 3]]) -> NormalFormGame {
    let n = actions.len();
    let total = entries.len();
    let mut tensors = vec![vec![0.0; total]; n];
    for (idx, entry) in entries.iter().enumerate() {
        for p in 0..n {
            tensors[p][idx] = entry[p];
        }
    }
    NormalFormGame::new(actions, tensors).expect("consistent tensors")
}

fn two_sat_fig5() -> NormalFormGame {
    let e = TWO_SAT_FIG5_EPS;
    let q = 0.25;
    let t1 = 1.0 / 3.0;
    let t2 = 2.0 / 3.0;
    // Rows are follower-1 actions, columns follower-2; one block per leader
    // action. Row/column order: v1v2, v1!v2, !v1v2, !v1!v2, chi.
    let blocks: [[[f64; 3]; 25]; 3] = [
        [
            [1.0, 0.0, 1.0], [q, q, 0.0], [q, q, 0.0], [q, q, 0.0], [1.0, t1, 0.0],
            [q, q, 0.0], [1.0, 1.0, 1.0], [q, q, 0.0], [q, q, 0.0], [1.0, t2, 0.0],
            [q, q, 0.0], [q, q, 0.0], [0.0, 0.0, 1.0], [q, q, 0.0], [1.0, t1, 0.0],
            [q, q, 0.0], [q, q, 0.0], [q, q, 0.0], [0.0, 1.0, e], [1.0, t2, 0.0],
            [t1, 0.0, 0.0], [t1, 0.0, 0.0], [t2, 0.0, 0.0], [t2, 0.0, 0.0], [0.0, 1.0, 0.0],
        ],
        [
            [0.0, 1.0, 1.0], [q, q, 0.0], [q, q, 0.0], [q, q, 0.0], [1.0, t1, 0.0],
            [q, q, 0.0], [0.0, 0.0, 1.0], [q, q, 0.0], [q, q, 0.0], [1.0, t2, 0.0],
            [q, q, 0.0], [q, q, 0.0], [1.0, 1.0, 1.0], [q, q, 0.0], [1.0, t1, 0.0],
            [q, q, 0.0], [q, q, 0.0], [q, q, 0.0], [1.0, 0.0, e], [1.0, t2, 0.0],
            [t1, 0.0, 0.0], [t1, 0.0, 0.0], [t2, 0.0, 0.0], [t2, 0.0, 0.0], [0.0, 1.0, 0.0],
        ],
        [
            [0.0, 0.0, 1.0], [q, q, 0.0], [q, q, 0.0], [q, q, 0.0], [1.0, t1, 0.0],
            [q, q, 0.0], [0.0, 1.0, 1.0], [q, q, 0.0], [q, q, 0.0], [1.0, t2, 0.0],
            [q, q, 0.0], [q, q, 0.0], [1.0, 0.0, 1.0], [q, q, 0.0], [1.0, t1, 0.0],
            [q, q, 0.0], [q, q, 0.0], [q, q, 0.0], [0.0, 1.0, e], [1.0, t2, 0.0],
            [t1, 0.0, 0.0], [t1, 0.0, 0.0], [t2, 0.0, 0.0], [t2, 0.0, 0.0], [0.0, 1.0, 0.0],
        ],
    ];
    let total = 5 * 5 * 3;
    let mut tensors = vec![vec![0.0; total]; 3];
    for (a3, block) in blocks.iter().enumerate() {
        for a1 in 0..5 {
            for a2 in 0..5 {
                let idx = (a1 * 5 + a2) * 3 + a3;
                let cell = block[a1 * 5 + a2];
                for p in 0..3 {
                    tensors[p][idx] = cell[p];
                }
            }
        }
    }
    NormalFormGame::new(vec![5, 5, 3], tensors).expect("consistent tensors")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{
        enumerate_pure_nes, is_pure_ne, leader_pessimistic_utility, FollowerProfile,
        LeaderStrategy,
    };

    fn fig4_graph() -> UndirectedGraph {
        // Three vertices, one edge between the second and third.
        UndirectedGraph::new(3, vec![(1, 2)]).unwrap()
    }

    #[test]
    fn indset_game_matches_the_printed_matrices() {
        let (b, c) = indset_defaults(3);
        let g = make_indset_game(&fig4_graph(), b, c).unwrap();
        assert_eq!(g.actions(), &[4, 4, 3]);
        let penalty = -1.0 / c - 1.0;
        // Diagonal leader entries for adjacent pairs.
        assert_eq!(g.payoff(2, &[1, 1, 2]), penalty);
        assert_eq!(g.payoff(2, &[2, 2, 1]), penalty);
        // Non-adjacent diagonal pairs give 1.
        assert_eq!(g.payoff(2, &[0, 0, 1]), 1.0);
        assert_eq!(g.payoff(2, &[1, 1, 0]), 1.0);
        // Follower entries, leader action 0: diagonal, chi row/column.
        assert_eq!(g.payoff(0, &[0, 0, 0]), 1.0);
        assert_eq!(g.payoff(1, &[0, 0, 0]), 1.0);
        assert_eq!(g.payoff(0, &[1, 1, 0]), 0.0);
        assert_eq!(g.payoff(0, &[3, 3, 0]), c);
        assert_eq!(g.payoff(1, &[3, 3, 0]), b);
        assert_eq!(g.payoff(0, &[3, 1, 0]), c);
        assert_eq!(g.payoff(1, &[3, 1, 0]), 0.0);
        assert_eq!(g.payoff(0, &[1, 3, 0]), 1.0);
        assert_eq!(g.payoff(1, &[1, 3, 0]), 0.0);
        assert_eq!(g.payoff(0, &[0, 1, 0]), b);
    }

    #[test]
    fn indset_rejects_bad_parameters() {
        let g = fig4_graph();
        assert!(make_indset_game(&g, 0.2, 0.4).is_err()); // c too large for r=3
        assert!(make_indset_game(&g, 0.03, 0.01).is_err()); // b > c
        assert!(make_indset_game(&g, 0.0, 0.01).is_err()); // b = 0
    }

    #[test]
    fn empty_graph_has_no_penalty_entries() {
        let g = UndirectedGraph::new(2, vec![]).unwrap();
        let (b, c) = indset_defaults(2);
        let game = make_indset_game(&g, b, c).unwrap();
        for a1 in 0..2 {
            for a3 in 0..2 {
                if a1 != a3 {
                    assert_eq!(game.payoff(2, &[a1, a1, a3]), 1.0);
                }
            }
        }
    }

    #[test]
    fn pure_leader_play_induces_exactly_the_matching_diagonal() {
        let (b, c) = indset_defaults(3);
        let game = make_indset_game(&fig4_graph(), b, c).unwrap();
        for a3 in 0..3 {
            let x = LeaderStrategy::pure(3, a3);
            let nes = enumerate_pure_nes(&game, &x);
            assert_eq!(nes, vec![FollowerProfile::new(vec![a3, a3])]);
        }
    }

    #[test]
    fn fig2_spot_checks_on_pure_leader_play() {
        let (b, c) = indset_defaults(3);
        let game = make_indset_game(&fig4_graph(), b, c).unwrap();
        let x = LeaderStrategy::pure(3, 0);
        assert!(is_pure_ne(&game, &FollowerProfile::new(vec![0, 0]), &x, 0.0).unwrap());
        assert!(!is_pure_ne(&game, &FollowerProfile::new(vec![0, 1]), &x, 0.0).unwrap());
    }

    #[test]
    fn uniform_play_makes_the_whole_diagonal_equilibria() {
        let (b, c) = indset_defaults(3);
        let game = make_indset_game(&fig4_graph(), b, c).unwrap();
        let x = LeaderStrategy::uniform(3);
        let nes = enumerate_pure_nes(&game, &x);
        let expected: Vec<FollowerProfile> =
            (0..3).map(|a| FollowerProfile::new(vec![a, a])).collect();
        assert_eq!(nes, expected);
    }

    #[test]
    fn sat_game_dimensions() {
        // r = 2 variables, one clause: follower arity 9, leader arity 3.
        let f = Cnf3Formula::new(
            2,
            vec![[
                Literal { var: 0, positive: true },
                Literal { var: 1, positive: true },
                Literal { var: 0, positive: false },
            ]],
        )
        .unwrap();
        let game = make_3sat_game(&f, 0.01).unwrap();
        assert_eq!(game.actions(), &[9, 9, 9, 3]);
    }

    #[test]
    fn sat_game_diagonal_is_ne_in_its_compatible_region() {
        // One clause v1 | v2 | v3 over r = 3 variables.
        let f = Cnf3Formula::new(
            3,
            vec![[
                Literal { var: 0, positive: true },
                Literal { var: 1, positive: true },
                Literal { var: 2, positive: true },
            ]],
        )
        .unwrap();
        let game = make_3sat_game(&f, 0.01).unwrap();
        // Pattern 0 = all slots positive: compatible regions need
        // x4^var >= 1/(r+1) for each of the three variables.
        let thresh = 1.0 / 4.0;
        let x = LeaderStrategy::new(vec![thresh, thresh, thresh, 1.0 - 3.0 * thresh]).unwrap();
        let diag = FollowerProfile::new(vec![0, 0, 0]);
        assert!(is_pure_ne(&game, &diag, &x, 1e-12).unwrap());
        // Dropping one variable below threshold breaks it.
        let x = LeaderStrategy::new(vec![0.1, 0.3, 0.3, 0.3]).unwrap();
        assert!(!is_pure_ne(&game, &diag, &x, 1e-12).unwrap());
        // Pattern with slot 1 negated (bit 4): now x4^v1 must be small.
        let neg = FollowerProfile::new(vec![4, 4, 4]);
        assert!(is_pure_ne(&game, &neg, &x, 1e-12).unwrap());
    }

    #[test]
    fn sat_game_off_diagonal_never_ne() {
        let f = Cnf3Formula::new(
            2,
            vec![[
                Literal { var: 0, positive: true },
                Literal { var: 1, positive: true },
                Literal { var: 0, positive: false },
            ]],
        )
        .unwrap();
        let game = make_3sat_game(&f, 0.01).unwrap();
        for x in [
            LeaderStrategy::uniform(3),
            LeaderStrategy::new(vec![0.6, 0.2, 0.2]).unwrap(),
            LeaderStrategy::pure(3, 2),
        ] {
            for ne in enumerate_pure_nes(&game, &x) {
                let a = ne.actions();
                assert!(a[0] == a[1] && a[1] == a[2] && a[0] != 8, "off-diagonal NE {ne}");
            }
        }
    }

    #[test]
    fn two_sat_fixture_entries() {
        let game = make_paper_example(PaperExample::TwoSatFig5);
        assert_eq!(game.actions(), &[5, 5, 3]);
        // The chi-chi cell carries (0, 1, 0) in every block.
        for a3 in 0..3 {
            assert_eq!(game.payoff(0, &[4, 4, a3]), 0.0);
            assert_eq!(game.payoff(1, &[4, 4, a3]), 1.0);
            assert_eq!(game.payoff(2, &[4, 4, a3]), 0.0);
        }
        // Falsifying diagonal gets the epsilon leader payoff.
        for a3 in 0..3 {
            assert_eq!(game.payoff(2, &[3, 3, a3]), TWO_SAT_FIG5_EPS);
        }
        // A few follower thresholds from the printed matrices.
        assert_eq!(game.payoff(0, &[4, 2, 0]), 2.0 / 3.0);
        assert_eq!(game.payoff(1, &[1, 4, 0]), 2.0 / 3.0);
    }

    #[test]
    fn nonexistence_entries() {
        let game = make_paper_example(PaperExample::Nonexistence);
        assert_eq!(game.payoff(2, &[0, 1, 1]), 10.0);
        assert_eq!(game.payoff(2, &[0, 1, 0]), 5.0);
        assert_eq!(game.payoff(0, &[1, 0, 0]), 0.5);
    }

    #[test]
    fn arbitrarily_worse_entries() {
        let game = make_paper_example(PaperExample::ArbitrarilyWorse(2.0));
        assert_eq!(game.payoff(2, &[0, 1, 1]), 8.0);
        assert_eq!(game.payoff(2, &[1, 0, 1]), 2.0);
    }

    #[test]
    fn sat_game_leader_value_dichotomy() {
        // On small formulas, every sampled commitment induces at least one
        // equilibrium and the pessimistic leader value is either eps or 1.
        let eps = 0.01;
        let formulas = [
            Cnf3Formula::new(
                2,
                vec![[
                    Literal { var: 0, positive: true },
                    Literal { var: 1, positive: true },
                    Literal { var: 0, positive: false },
                ]],
            )
            .unwrap(),
            Cnf3Formula::new(
                2,
                vec![
                    [
                        Literal { var: 0, positive: true },
                        Literal { var: 1, positive: false },
                        Literal { var: 1, positive: true },
                    ],
                    [
                        Literal { var: 0, positive: false },
                        Literal { var: 0, positive: false },
                        Literal { var: 1, positive: false },
                    ],
                ],
            )
            .unwrap(),
        ];
        for f in &formulas {
            let game = make_3sat_game(f, eps).unwrap();
            let k = 6;
            let mut seen_eps = false;
            for i in 0..=k {
                for j in 0..=(k - i) {
                    let x = LeaderStrategy::new(vec![
                        i as f64 / k as f64,
                        j as f64 / k as f64,
                        (k - i - j) as f64 / k as f64,
                    ])
                    .unwrap();
                    let v = leader_pessimistic_utility(&game, &x)
                        .expect("sat games always admit an equilibrium");
                    assert!(
                        (v - eps).abs() < 1e-9 || (v - 1.0).abs() < 1e-9,
                        "value {v} outside the dichotomy"
                    );
                    seen_eps |= (v - eps).abs() < 1e-9;
                }
            }
            let _ = seen_eps;
        }
    }

    #[test]
    fn graph_parsing_round_trip() {
        let text = "# tiny graph\n3\n1 2\n2 3\n";
        let g = UndirectedGraph::parse_edge_list(text).unwrap();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.max_independent_set(), 2);
    }

    #[test]
    fn dimacs_parsing() {
        let text = "c demo\np cnf 3 2\n1 -2 3 0\n-1 2 -3 0\n";
        let f = Cnf3Formula::parse_dimacs(text).unwrap();
        assert_eq!(f.num_vars(), 3);
        assert_eq!(f.clauses().len(), 2);
        assert!(f.clauses()[0][1].var == 1 && !f.clauses()[0][1].positive);

        let bad = "p cnf 2 1\n1 -2 0\n";
        assert!(matches!(
            Cnf3Formula::parse_dimacs(bad),
            Err(GadgetError::ClauseArity { .. })
        ));
    }
}
