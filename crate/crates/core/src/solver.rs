//! Exact signed list-coloring search.
//!
//! Depth-first search with minimum-remaining-values vertex selection and
//! forward checking: coloring `u` with `c` removes `sign(uv) * c` from the
//! domain of every uncolored neighbor `v`. Ties go to the lowest vertex and
//! colors are tried in ascending order, so witnesses are reproducible.
//! When only a witness is wanted, the uncolored vertices are split into
//! connected components after each assignment and each is solved on its own.

use thiserror::Error;

use crate::graph::{Color, Coloring, ListAssignment, Sign, SignedGraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("vertex {0} has an empty list")]
    EmptyList(String),
    #[error("list assignment covers {lists} vertices, graph has {vertices}")]
    ListMismatch { lists: usize, vertices: usize },
    #[error("search space {needed} exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Sat(Coloring),
    Unsat,
}

impl Outcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, Outcome::Sat(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solved {
    pub outcome: Outcome,
    /// Search nodes visited (one per tentative color assignment).
    pub nodes: u64,
}

struct Search<'a> {
    adj: Vec<Vec<(Vertex, Sign)>>,
    domains: Vec<Vec<Color>>,
    assigned: Vec<Option<Color>>,
    nodes: u64,
    trail: Vec<Undo>,
    _g: &'a SignedGraph,
}

enum Undo {
    Assign(Vertex),
    Remove(Vertex, Color),
}

enum Mode<'f> {
    Count(u64),
    Each(&'f mut dyn FnMut(&[Color]) -> bool),
}

impl<'a> Search<'a> {
    fn new(g: &'a SignedGraph, lists: &ListAssignment) -> Result<Self, SolverError> {
        check_lists(g, lists)?;
        Ok(Search {
            adj: g.vertices().map(|v| g.signed_neighbors(v).collect()).collect(),
            domains: lists.lists().to_vec(),
            assigned: vec![None; g.len()],
            nodes: 0,
            trail: Vec::new(),
            _g: g,
        })
    }

    fn pick(&self) -> Option<Vertex> {
        (0..self.assigned.len()).filter(|&v| self.assigned[v].is_none()).min_by_key(|&v| (self.domains[v].len(), v))
    }

    /// Returns `true` to stop the search.
    fn run(&mut self, mode: &mut Mode<'_>) -> bool {
        let Some(v) = self.pick() else {
            return match mode {
                Mode::Count(n) => {
                    *n += 1;
                    false
                }
                Mode::Each(f) => {
                    let colors: Vec<Color> = self.assigned.iter().map(|c| c.unwrap()).collect();
                    !f(&colors)
                }
            };
        };
        let dom = self.domains[v].clone();
        for c in dom {
            self.nodes += 1;
            self.assigned[v] = Some(c);
            let mut removed: Vec<Vertex> = Vec::new();
            let mut dead = false;
            for &(w, s) in &self.adj[v] {
                if self.assigned[w].is_some() {
                    continue;
                }
                let forbidden = s.apply(c);
                if let Ok(i) = self.domains[w].binary_search(&forbidden) {
                    self.domains[w].remove(i);
                    removed.push(w);
                    if self.domains[w].is_empty() {
                        dead = true;
                        break;
                    }
                }
            }
            let stop = !dead && self.run(mode);
            for w in removed {
                let forbidden = self.adj[v].iter().find(|e| e.0 == w).map(|e| e.1.apply(c)).unwrap();
                let i = self.domains[w].binary_search(&forbidden).unwrap_err();
                self.domains[w].insert(i, forbidden);
            }
            if stop {
                return true;
            }
            self.assigned[v] = None;
        }
        false
    }
}

impl Search<'_> {
    /// Uncolored vertices of `scope` grouped into connected components.
    fn components(&self, scope: &[Vertex]) -> Vec<Vec<Vertex>> {
        let n = self.assigned.len();
        let mut inside = vec![false; n];
        for &v in scope {
            inside[v] = self.assigned[v].is_none();
        }
        let mut out = Vec::new();
        for &s in scope {
            if !inside[s] {
                continue;
            }
            inside[s] = false;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let x = comp[i];
                i += 1;
                for &(y, _) in &self.adj[x] {
                    if inside[y] {
                        inside[y] = false;
                        comp.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Undo::Assign(v) => self.assigned[v] = None,
                Undo::Remove(w, c) => {
                    let i = self.domains[w].binary_search(&c).unwrap_err();
                    self.domains[w].insert(i, c);
                }
            }
        }
    }

    /// Colors the connected set `scope` of uncolored vertices, leaving the
    /// assignment in place on success.
    fn first(&mut self, scope: &[Vertex]) -> bool {
        let v = *scope.iter().min_by_key(|&&v| (self.domains[v].len(), v)).expect("nonempty scope");
        for c in self.domains[v].clone() {
            self.nodes += 1;
            let mark = self.trail.len();
            self.assigned[v] = Some(c);
            self.trail.push(Undo::Assign(v));
            let mut dead = false;
            for k in 0..self.adj[v].len() {
                let (w, s) = self.adj[v][k];
                if self.assigned[w].is_some() {
                    continue;
                }
                let forbidden = s.apply(c);
                if let Ok(i) = self.domains[w].binary_search(&forbidden) {
                    self.domains[w].remove(i);
                    self.trail.push(Undo::Remove(w, forbidden));
                    if self.domains[w].is_empty() {
                        dead = true;
                        break;
                    }
                }
            }
            if !dead && self.components(scope).iter().all(|comp| self.first(comp)) {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}

fn check_lists(g: &SignedGraph, lists: &ListAssignment) -> Result<(), SolverError> {
    if lists.len() != g.len() {
        return Err(SolverError::ListMismatch { lists: lists.len(), vertices: g.len() });
    }
    for v in g.vertices() {
        if lists.get(v).is_empty() {
            return Err(SolverError::EmptyList(g.name(v).to_string()));
        }
    }
    Ok(())
}

/// Finds an L-coloring or proves that none exists.
pub fn solve(g: &SignedGraph, lists: &ListAssignment) -> Result<Solved, SolverError> {
    let mut s = Search::new(g, lists)?;
    let all: Vec<Vertex> = g.vertices().collect();
    let found = s.components(&all).iter().all(|comp| s.first(comp));
    let outcome = if found {
        Outcome::Sat(Coloring::new(s.assigned.iter().map(|c| c.unwrap()).collect()))
    } else {
        Outcome::Unsat
    };
    Ok(Solved { outcome, nodes: s.nodes })
}

/// Exact number of L-colorings.
pub fn count_colorings(g: &SignedGraph, lists: &ListAssignment) -> Result<u64, SolverError> {
    let mut s = Search::new(g, lists)?;
    let mut mode = Mode::Count(0);
    s.run(&mut mode);
    match mode {
        Mode::Count(n) => Ok(n),
        _ => unreachable!(),
    }
}

/// Calls `f` on every L-coloring until it returns `false`.
pub fn for_each_coloring(
    g: &SignedGraph,
    lists: &ListAssignment,
    mut f: impl FnMut(&[Color]) -> bool,
) -> Result<(), SolverError> {
    let mut s = Search::new(g, lists)?;
    s.run(&mut Mode::Each(&mut f));
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Greedy {
    Sat(Coloring),
    Stuck(Vertex),
}

/// Colors vertices in reverse removal order, each with the smallest color of
/// its list not forbidden by an already colored neighbor.
pub fn greedy_by_degeneracy(g: &SignedGraph, lists: &ListAssignment, order: &[Vertex]) -> Result<Greedy, SolverError> {
    check_lists(g, lists)?;
    let mut colors: Vec<Option<Color>> = vec![None; g.len()];
    for &v in order.iter().rev() {
        let forbidden: Vec<Color> = g.signed_neighbors(v).filter_map(|(u, s)| colors[u].map(|c| s.apply(c))).collect();
        match lists.get(v).iter().find(|c| !forbidden.contains(c)) {
            Some(&c) => colors[v] = Some(c),
            None => return Ok(Greedy::Stuck(v)),
        }
    }
    Ok(Greedy::Sat(Coloring::new(colors.into_iter().map(|c| c.unwrap_or(0)).collect())))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Choosability {
    /// Every k-list drawn from the universe admits a coloring.
    ChoosableOverUniverse {
        checked: u64,
    },
    Counterexample(ListAssignment),
}

/// Default bounded universe `{0, ±1, …, ±m}` with `m = n·k`.
pub fn default_universe(n: usize, k: usize) -> Vec<Color> {
    let m = (n * k) as i64;
    (-m..=m).collect()
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

fn k_subsets(universe: &[Color], k: usize) -> Vec<Vec<Color>> {
    fn go(u: &[Color], k: usize, start: usize, cur: &mut Vec<Color>, out: &mut Vec<Vec<Color>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..u.len() {
            cur.push(u[i]);
            go(u, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(universe, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Tries every k-list assignment with colors from `universe`; the result is a
/// statement about that universe only.
pub fn choosable_exhaustive(
    g: &SignedGraph,
    k: usize,
    universe: &[Color],
    budget: u128,
) -> Result<Choosability, SolverError> {
    let mut u = universe.to_vec();
    u.sort_unstable();
    u.dedup();
    let per = binomial(u.len(), k);
    let needed = (0..g.len()).try_fold(1u128, |acc, _| acc.checked_mul(per)).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(SolverError::BudgetExceeded { needed, budget });
    }
    let subsets = k_subsets(&u, k);
    if subsets.is_empty() {
        return Ok(Choosability::ChoosableOverUniverse { checked: 0 });
    }
    let n = g.len();
    let mut idx = vec![0usize; n];
    let mut checked = 0u64;
    loop {
        let lists = ListAssignment::from_raw(idx.iter().map(|&i| subsets[i].clone()).collect());
        checked += 1;
        if !solve(g, &lists)?.outcome.is_sat() {
            return Ok(Choosability::Counterexample(lists));
        }
        let mut p = 0;
        loop {
            if p == n {
                return Ok(Choosability::ChoosableOverUniverse { checked });
            }
            idx[p] += 1;
            if idx[p] < subsets.len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_valid_coloring, verify_coloring};
    use crate::planar::{degeneracy_order, fixtures::*};
    use proptest::prelude::*;

    fn cycle(n: usize, negative: &[usize]) -> SignedGraph {
        let mut g = SignedGraph::with_vertices(n);
        for i in 0..n {
            let s = if negative.contains(&i) { Sign::Negative } else { Sign::Positive };
            g.add_edge(i, (i + 1) % n, s).unwrap();
        }
        g
    }

    /// Cross-product enumeration, independent of the search.
    fn naive_count(g: &SignedGraph, l: &ListAssignment) -> u64 {
        let n = g.len();
        let mut idx = vec![0usize; n];
        let mut count = 0;
        loop {
            let c = Coloring::new((0..n).map(|v| l.get(v)[idx[v]]).collect());
            if verify_coloring(g, None, &c).unwrap().is_empty() {
                count += 1;
            }
            let mut p = 0;
            loop {
                if p == n {
                    return count;
                }
                idx[p] += 1;
                if idx[p] < l.get(p).len() {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
        }
    }

    #[test]
    fn solve_examples() {
        let c4 = cycle(4, &[0]);
        let pm = ListAssignment::uniform(4, &[1, -1]);
        assert_eq!(naive_count(&c4, &pm), 0);
        assert_eq!(solve(&c4, &pm).unwrap().outcome, Outcome::Unsat);
        let l12 = ListAssignment::uniform(4, &[1, 2]);
        match solve(&c4, &l12).unwrap().outcome {
            Outcome::Sat(c) => assert!(is_valid_coloring(&c4, Some(&l12), &c)),
            Outcome::Unsat => panic!("expected sat"),
        }
        let one = SignedGraph::with_vertices(1);
        let l0 = ListAssignment::uniform(1, &[0]);
        assert_eq!(solve(&one, &l0).unwrap().outcome, Outcome::Sat(Coloring::new(vec![0])));
        let bad = ListAssignment::from_raw(vec![vec![]]);
        assert_eq!(solve(&one, &bad), Err(SolverError::EmptyList("0".into())));
    }

    #[test]
    fn count_examples() {
        let l12 = ListAssignment::uniform(4, &[1, 2]);
        assert_eq!(naive_count(&cycle(4, &[0]), &l12), 2);
        assert_eq!(count_colorings(&cycle(4, &[0]), &l12).unwrap(), 2);
        let pm4 = ListAssignment::uniform(4, &[1, -1]);
        assert_eq!(count_colorings(&cycle(4, &[]), &pm4).unwrap(), 2);
        let pm3 = ListAssignment::uniform(3, &[1, -1]);
        assert_eq!(count_colorings(&cycle(3, &[]), &pm3).unwrap(), 0);
    }

    #[test]
    fn greedy_examples() {
        let tree = graph_from_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]);
        let (_, order) = degeneracy_order(&tree);
        let l = ListAssignment::uniform(5, &[3, 8]);
        assert!(matches!(greedy_by_degeneracy(&tree, &l, &order).unwrap(), Greedy::Sat(_)));

        // K4 with 3-lists: an uncolorable assignment exists, so greedy must stick
        let k4 = complete(4);
        let l = ListAssignment::uniform(4, &[1, 2, 3]);
        assert_eq!(count_colorings(&k4, &l).unwrap(), 0);
        let (_, order) = degeneracy_order(&k4);
        assert!(matches!(greedy_by_degeneracy(&k4, &l, &order).unwrap(), Greedy::Stuck(_)));
    }

    #[test]
    fn choosability_examples() {
        let r = choosable_exhaustive(&cycle(4, &[]), 2, &[-2, -1, 1, 2], 1 << 20).unwrap();
        assert!(matches!(r, Choosability::ChoosableOverUniverse { checked: 1296 }));
        let r = choosable_exhaustive(&cycle(4, &[0]), 2, &[-1, 1], 1 << 20).unwrap();
        assert_eq!(r, Choosability::Counterexample(ListAssignment::uniform(4, &[-1, 1])));
        let r = choosable_exhaustive(&cycle(3, &[]), 2, &[-1, 1], 1 << 20).unwrap();
        assert!(matches!(r, Choosability::Counterexample(_)));
        let r = choosable_exhaustive(&cycle(4, &[]), 2, &default_universe(4, 2), 100);
        assert!(matches!(r, Err(SolverError::BudgetExceeded { .. })));
    }

    fn arb_instance(max_n: usize, max_list: usize) -> impl Strategy<Value = (SignedGraph, ListAssignment)> {
        (2..=max_n).prop_flat_map(move |n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            let m = pairs.len();
            (
                proptest::collection::vec(0u8..3, m),
                proptest::collection::vec(proptest::collection::vec(-3i64..=3, 1..=max_list), n),
            )
                .prop_map(move |(edge_kind, lists)| {
                    let mut g = SignedGraph::with_vertices(n);
                    for (k, &(i, j)) in pairs.iter().enumerate() {
                        match edge_kind[k] {
                            1 => g.add_edge(i, j, Sign::Positive).unwrap(),
                            2 => g.add_edge(i, j, Sign::Negative).unwrap(),
                            _ => {}
                        }
                    }
                    (g, ListAssignment::from_raw(lists))
                })
        })
    }

    proptest! {
        #[test]
        fn count_matches_naive((g, l) in arb_instance(7, 4)) {
            prop_assert_eq!(count_colorings(&g, &l).unwrap(), naive_count(&g, &l));
        }

        #[test]
        fn solve_sound_and_complete((g, l) in arb_instance(8, 3)) {
            let naive = naive_count(&g, &l);
            match solve(&g, &l).unwrap().outcome {
                Outcome::Sat(c) => prop_assert!(is_valid_coloring(&g, Some(&l), &c)),
                Outcome::Unsat => prop_assert_eq!(naive, 0),
            }
        }
    }
}
