//! Signed graphs, list assignments and colorings.
//!
//! A signed graph is a simple graph whose edges carry a sign. A coloring `c`
//! is proper when every edge `uv` satisfies `c(u) != sign(uv) * c(v)`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

/// Dense vertex index. Indices follow declaration order, which is also the
/// vertex id order used for every deterministic tie-break.
pub type Vertex = usize;

/// Colors are plain machine integers.
pub type Color = i64;

/// Serialized as `1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(into = "i64", try_from = "i64")]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn from_int(s: i64) -> Option<Sign> {
        match s {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }

    pub fn as_int(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    /// The color a neighbor colored `c` forbids across an edge of this sign.
    #[inline]
    pub fn apply(self, c: Color) -> Color {
        match self {
            Sign::Positive => c,
            Sign::Negative => -c,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }
}

impl From<Sign> for i64 {
    fn from(s: Sign) -> i64 {
        s.as_int()
    }
}

impl TryFrom<i64> for Sign {
    type Error = String;
    fn try_from(s: i64) -> Result<Sign, String> {
        Sign::from_int(s).ok_or_else(|| format!("sign must be 1 or -1, got {s}"))
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(String, String),
    #[error("loop at vertex {0}")]
    Loop(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(String),
    #[error("vertex {0} has an empty list")]
    EmptyList(String),
    #[error("vertex {0} has no list")]
    MissingList(String),
    #[error("coloring is missing vertex {0}")]
    PartialColoring(String),
    #[error("sequence is not a circuit: {0}")]
    NotACircuit(String),
    #[error("k must be positive, got {0}")]
    NonPositiveK(i64),
}

/// Simple undirected graph with a signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedGraph {
    names: Vec<String>,
    index: HashMap<String, Vertex>,
    adj: Vec<BTreeMap<Vertex, Sign>>,
    edge_count: usize,
}

impl SignedGraph {
    pub fn new() -> Self {
        SignedGraph { names: Vec::new(), index: HashMap::new(), adj: Vec::new(), edge_count: 0 }
    }

    /// Builds and validates a graph from named vertices and signed edges.
    pub fn build<S: AsRef<str>>(vertices: &[S], edges: &[(S, S, Sign)]) -> Result<SignedGraph, GraphError> {
        let mut g = SignedGraph::new();
        for v in vertices {
            g.add_vertex(v.as_ref())?;
        }
        for (u, v, s) in edges {
            let a = g.require(u.as_ref())?;
            let b = g.require(v.as_ref())?;
            g.add_edge(a, b, *s)?;
        }
        Ok(g)
    }

    /// Numbered vertices `0..n` named by their index.
    pub fn with_vertices(n: usize) -> SignedGraph {
        let mut g = SignedGraph::new();
        for i in 0..n {
            g.add_vertex(&i.to_string()).expect("fresh names");
        }
        g
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<Vertex, GraphError> {
        if self.index.contains_key(name) {
            return Err(GraphError::DuplicateVertex(name.to_string()));
        }
        let v = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), v);
        self.adj.push(BTreeMap::new());
        Ok(v)
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex, s: Sign) -> Result<(), GraphError> {
        if u >= self.len() {
            return Err(GraphError::UnknownVertex(u.to_string()));
        }
        if v >= self.len() {
            return Err(GraphError::UnknownVertex(v.to_string()));
        }
        if u == v {
            return Err(GraphError::Loop(self.names[u].clone()));
        }
        if self.adj[u].contains_key(&v) {
            return Err(GraphError::DuplicateEdge(self.names[u].clone(), self.names[v].clone()));
        }
        self.adj[u].insert(v, s);
        self.adj[v].insert(u, s);
        self.edge_count += 1;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> Option<Sign> {
        let s = self.adj[u].remove(&v)?;
        self.adj[v].remove(&u);
        self.edge_count -= 1;
        Some(s)
    }

    pub fn set_sign(&mut self, u: Vertex, v: Vertex, s: Sign) {
        if let Some(x) = self.adj[u].get_mut(&v) {
            *x = s;
            self.adj[v].insert(u, s);
        }
    }

    pub fn require(&self, name: &str) -> Result<Vertex, GraphError> {
        self.index.get(name).copied().ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn vertex(&self, name: &str) -> Option<Vertex> {
        self.index.get(name).copied()
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.names.len()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj[v].keys().copied()
    }

    pub fn signed_neighbors(&self, v: Vertex) -> impl Iterator<Item = (Vertex, Sign)> + '_ {
        self.adj[v].iter().map(|(&u, &s)| (u, s))
    }

    pub fn sign(&self, u: Vertex, v: Vertex) -> Option<Sign> {
        self.adj[u].get(&v).copied()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].contains_key(&v)
    }

    /// Edges as `(u, v, sign)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, Sign)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, m)| m.range(u + 1..).map(move |(&v, &s)| (u, v, s)))
    }

    pub fn negative_edge_count(&self) -> usize {
        self.edges().filter(|e| e.2.is_negative()).count()
    }

    /// Subgraph induced by `keep`, renumbered in increasing vertex order.
    /// Returns the subgraph and the map from new to old indices.
    pub fn induced(&self, keep: &[bool]) -> (SignedGraph, Vec<Vertex>) {
        let mut g = SignedGraph::new();
        let mut old_to_new = vec![usize::MAX; self.len()];
        let mut new_to_old = Vec::new();
        for v in self.vertices().filter(|&v| keep[v]) {
            old_to_new[v] = g.add_vertex(&self.names[v]).expect("unique names");
            new_to_old.push(v);
        }
        for (u, v, s) in self.edges() {
            if keep[u] && keep[v] {
                g.add_edge(old_to_new[u], old_to_new[v], s).expect("simple");
            }
        }
        (g, new_to_old)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in self.vertices() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for w in self.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn all_positive(&self) -> bool {
        self.edges().all(|e| e.2 == Sign::Positive)
    }
}

impl Default for SignedGraph {
    fn default() -> Self {
        SignedGraph::new()
    }
}

/// Per-vertex finite color lists, each kept sorted and duplicate free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListAssignment {
    lists: Vec<Vec<Color>>,
}

impl ListAssignment {
    /// Validates that every vertex of `g` has a nonempty list.
    pub fn new(g: &SignedGraph, lists: Vec<Vec<Color>>) -> Result<ListAssignment, GraphError> {
        if lists.len() != g.len() {
            let missing = lists.len().min(g.len());
            return Err(GraphError::MissingList(g.names().get(missing).cloned().unwrap_or_default()));
        }
        let mut out = Vec::with_capacity(lists.len());
        for (v, mut l) in lists.into_iter().enumerate() {
            l.sort_unstable();
            l.dedup();
            if l.is_empty() {
                return Err(GraphError::EmptyList(g.name(v).to_string()));
            }
            out.push(l);
        }
        Ok(ListAssignment { lists: out })
    }

    /// The same list on every vertex.
    pub fn uniform(n: usize, list: &[Color]) -> ListAssignment {
        let mut l = list.to_vec();
        l.sort_unstable();
        l.dedup();
        ListAssignment { lists: vec![l; n] }
    }

    /// Unvalidated constructor; lists are normalized but may be empty.
    pub fn from_raw(lists: Vec<Vec<Color>>) -> ListAssignment {
        let lists = lists
            .into_iter()
            .map(|mut l| {
                l.sort_unstable();
                l.dedup();
                l
            })
            .collect();
        ListAssignment { lists }
    }

    pub fn get(&self, v: Vertex) -> &[Color] {
        &self.lists[v]
    }

    pub fn set(&mut self, v: Vertex, mut list: Vec<Color>) {
        list.sort_unstable();
        list.dedup();
        self.lists[v] = list;
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn min_size(&self) -> usize {
        self.lists.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn lists(&self) -> &[Vec<Color>] {
        &self.lists
    }

    pub fn restrict(&self, keep: &[Vertex]) -> ListAssignment {
        ListAssignment { lists: keep.iter().map(|&v| self.lists[v].clone()).collect() }
    }
}

/// A total vertex coloring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    colors: Vec<Color>,
}

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Coloring {
        Coloring { colors }
    }

    /// Converts a partial coloring, failing on the first uncolored vertex.
    pub fn from_partial(g: &SignedGraph, partial: &[Option<Color>]) -> Result<Coloring, GraphError> {
        let mut colors = Vec::with_capacity(g.len());
        for v in g.vertices() {
            match partial.get(v).copied().flatten() {
                Some(c) => colors.push(c),
                None => return Err(GraphError::PartialColoring(g.name(v).to_string())),
            }
        }
        Ok(Coloring { colors })
    }

    pub fn get(&self, v: Vertex) -> Color {
        self.colors[v]
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn restrict(&self, keep: &[Vertex]) -> Coloring {
        Coloring { colors: keep.iter().map(|&v| self.colors[v]).collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Balance {
    Balanced,
    Unbalanced,
}

/// Classifies a circuit given as a cyclic vertex sequence.
pub fn circuit_balance(g: &SignedGraph, cycle: &[Vertex]) -> Result<Balance, GraphError> {
    if cycle.len() < 3 {
        return Err(GraphError::NotACircuit(format!("length {}", cycle.len())));
    }
    let mut seen = vec![false; g.len()];
    let mut negatives = 0;
    for (i, &u) in cycle.iter().enumerate() {
        if u >= g.len() {
            return Err(GraphError::UnknownVertex(u.to_string()));
        }
        if std::mem::replace(&mut seen[u], true) {
            return Err(GraphError::NotACircuit(format!("{} repeats", g.name(u))));
        }
        let v = cycle[(i + 1) % cycle.len()];
        match g.sign(u, v) {
            Some(Sign::Negative) => negatives += 1,
            Some(Sign::Positive) => {}
            None => return Err(GraphError::NotACircuit(format!("{}-{} is not an edge", g.name(u), g.name(v)))),
        }
    }
    Ok(if negatives % 2 == 0 { Balance::Balanced } else { Balance::Unbalanced })
}

/// Switches at `set`: flips the signs of edges leaving `set` and negates lists
/// and colors inside it.
pub fn switch(
    g: &SignedGraph,
    lists: Option<&ListAssignment>,
    coloring: Option<&Coloring>,
    set: &[Vertex],
) -> Result<(SignedGraph, Option<ListAssignment>, Option<Coloring>), GraphError> {
    let mut inside = vec![false; g.len()];
    for &v in set {
        if v >= g.len() {
            return Err(GraphError::UnknownVertex(v.to_string()));
        }
        inside[v] = true;
    }
    let mut h = g.clone();
    for (u, v, s) in g.edges() {
        if inside[u] != inside[v] {
            h.set_sign(u, v, s.flip());
        }
    }
    let lists = lists.map(|l| {
        let mut out = l.clone();
        for v in g.vertices().filter(|&v| inside[v]) {
            out.set(v, l.get(v).iter().map(|&c| -c).collect());
        }
        out
    });
    let coloring = coloring.map(|c| {
        Coloring::new(
            c.colors()
                .iter()
                .enumerate()
                .map(|(v, &x)| if inside.get(v).copied().unwrap_or(false) { -x } else { x })
                .collect(),
        )
    });
    Ok((h, lists, coloring))
}

/// Outcome of the switching-equivalence test against the all-positive signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    /// Switching at this set makes every edge positive.
    Yes(Vec<Vertex>),
    /// An unbalanced circuit, which no switch can repair.
    No(Vec<Vertex>),
}

/// Decides whether `g` is switching equivalent to its all-positive version.
///
/// Each component is 2-colored with negative edges joining different sides;
/// the first conflicting edge closes an unbalanced circuit through the BFS tree.
pub fn equivalent_to_all_positive(g: &SignedGraph) -> Equivalence {
    let n = g.len();
    let mut side = vec![None::<bool>; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    for s in g.vertices() {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let su = side[u].unwrap();
            for (w, sign) in g.signed_neighbors(u) {
                let want = su ^ sign.is_negative();
                match side[w] {
                    None => {
                        side[w] = Some(want);
                        parent[w] = u;
                        depth[w] = depth[u] + 1;
                        queue.push_back(w);
                    }
                    Some(sw) if sw != want => {
                        return Equivalence::No(tree_cycle(&parent, &depth, u, w));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Equivalence::Yes(g.vertices().filter(|&v| side[v] == Some(true)).collect())
}

/// Circuit formed by the non-tree edge `uw` and the tree paths to their
/// common ancestor.
fn tree_cycle(parent: &[usize], depth: &[usize], u: Vertex, w: Vertex) -> Vec<Vertex> {
    let (mut a, mut b) = (u, w);
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        left.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}

/// A violated constraint reported by [`verify_coloring`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Edge { u: Vertex, v: Vertex, sign: Sign },
    NotInList { v: Vertex, color: Color },
}

impl Violation {
    pub fn describe(&self, g: &SignedGraph) -> String {
        match self {
            Violation::Edge { u, v, sign } => {
                format!("edge {}-{} (sign {})", g.name(*u), g.name(*v), sign.as_int())
            }
            Violation::NotInList { v, color } => {
                format!("color {} not in list of {}", color, g.name(*v))
            }
        }
    }
}

/// Checks the signed constraint on every edge and, if given, list membership.
/// Returns every violation; an empty vector means the coloring is valid.
pub fn verify_coloring(
    g: &SignedGraph,
    lists: Option<&ListAssignment>,
    c: &Coloring,
) -> Result<Vec<Violation>, GraphError> {
    if c.len() != g.len() {
        let v = c.len().min(g.len().saturating_sub(1));
        return Err(GraphError::PartialColoring(g.names().get(v).cloned().unwrap_or_default()));
    }
    let mut out = Vec::new();
    if let Some(l) = lists {
        for v in g.vertices() {
            if l.get(v).binary_search(&c.get(v)).is_err() {
                out.push(Violation::NotInList { v, color: c.get(v) });
            }
        }
    }
    for (u, v, s) in g.edges() {
        if c.get(u) == s.apply(c.get(v)) {
            out.push(Violation::Edge { u, v, sign: s });
        }
    }
    Ok(out)
}

/// `true` iff the coloring satisfies every constraint.
pub fn is_valid_coloring(g: &SignedGraph, lists: Option<&ListAssignment>, c: &Coloring) -> bool {
    matches!(verify_coloring(g, lists, c), Ok(v) if v.is_empty())
}

/// Symmetric color set of size `k`: `{±1..±k/2}` for even `k`,
/// `{0, ±1..±(k-1)/2}` for odd `k`.
pub fn mrs_color_set(k: i64) -> Result<Vec<Color>, GraphError> {
    if k < 1 {
        return Err(GraphError::NonPositiveK(k));
    }
    let half = k / 2;
    let mut out: Vec<Color> = (1..=half).flat_map(|i| [-i, i]).collect();
    if k % 2 == 1 {
        out.push(0);
    }
    out.sort_unstable();
    Ok(out)
}

impl fmt::Display for SignedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignedGraph(|V|={}, |E|={})", self.len(), self.edge_count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize, negative: &[usize]) -> SignedGraph {
        let mut g = SignedGraph::with_vertices(n);
        for i in 0..n {
            let s = if negative.contains(&i) { Sign::Negative } else { Sign::Positive };
            g.add_edge(i, (i + 1) % n, s).unwrap();
        }
        g
    }

    #[test]
    fn build_examples() {
        let g = SignedGraph::build(&["v1"], &[]).unwrap();
        assert_eq!((g.len(), g.edge_count()), (1, 0));
        let g = SignedGraph::build(&["a", "b"], &[("a", "b", Sign::Negative)]).unwrap();
        assert_eq!(g.sign(0, 1), Some(Sign::Negative));
        let err =
            SignedGraph::build(&["a", "b"], &[("a", "b", Sign::Positive), ("a", "b", Sign::Negative)]).unwrap_err();
        assert_eq!(err, GraphError::DuplicateEdge("a".into(), "b".into()));
        let err = SignedGraph::build(&["a"], &[("a", "a", Sign::Positive)]).unwrap_err();
        assert_eq!(err, GraphError::Loop("a".into()));
        let err = SignedGraph::build(&["a"], &[("a", "z", Sign::Positive)]).unwrap_err();
        assert_eq!(err, GraphError::UnknownVertex("z".into()));
    }

    #[test]
    fn balance_examples() {
        assert_eq!(circuit_balance(&cycle(3, &[]), &[0, 1, 2]).unwrap(), Balance::Balanced);
        assert_eq!(circuit_balance(&cycle(4, &[0]), &[0, 1, 2, 3]).unwrap(), Balance::Unbalanced);
        assert_eq!(circuit_balance(&cycle(5, &[1, 3]), &[0, 1, 2, 3, 4]).unwrap(), Balance::Balanced);
        assert!(matches!(circuit_balance(&cycle(4, &[]), &[0, 2, 1, 3]), Err(GraphError::NotACircuit(_))));
        assert!(matches!(circuit_balance(&cycle(4, &[]), &[0, 1, 0]), Err(GraphError::NotACircuit(_))));
    }

    #[test]
    fn switch_examples() {
        let g = SignedGraph::build(&["a", "b"], &[("a", "b", Sign::Positive)]).unwrap();
        let l = ListAssignment::new(&g, vec![vec![1, 2], vec![3]]).unwrap();
        let c = Coloring::new(vec![1, 3]);
        let (h, l2, c2) = switch(&g, Some(&l), Some(&c), &[]).unwrap();
        assert_eq!((&h, l2.as_ref(), c2.as_ref()), (&g, Some(&l), Some(&c)));

        let (h, l2, c2) = switch(&g, Some(&l), Some(&c), &[0]).unwrap();
        assert_eq!(h.sign(0, 1), Some(Sign::Negative));
        let l2 = l2.unwrap();
        assert_eq!(l2.get(0), &[-2, -1]);
        assert_eq!(l2.get(1), &[3]);
        assert_eq!(c2.as_ref().unwrap().colors(), &[-1, 3]);

        let (h3, l3, c3) = switch(&h, Some(&l2), c2.as_ref(), &[0]).unwrap();
        assert_eq!((h3, l3.unwrap(), c3.unwrap()), (g.clone(), l, c));
        assert!(switch(&g, None, None, &[7]).is_err());
    }

    #[test]
    fn equivalence_examples() {
        assert_eq!(equivalent_to_all_positive(&cycle(4, &[])), Equivalence::Yes(vec![]));
        match equivalent_to_all_positive(&cycle(4, &[0])) {
            Equivalence::No(c) => {
                let mut s = c.clone();
                s.sort_unstable();
                assert_eq!(s, vec![0, 1, 2, 3]);
                assert_eq!(circuit_balance(&cycle(4, &[0]), &c).unwrap(), Balance::Unbalanced);
            }
            other => panic!("{other:?}"),
        }
        // negative edges 0-1 and 2-3: switching at {1,2} clears both
        let g = cycle(4, &[0, 2]);
        match equivalent_to_all_positive(&g) {
            Equivalence::Yes(x) => {
                let (h, _, _) = switch(&g, None, None, &x).unwrap();
                assert!(h.all_positive());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn verify_examples() {
        let pos = SignedGraph::build(&["u", "v"], &[("u", "v", Sign::Positive)]).unwrap();
        let neg = SignedGraph::build(&["u", "v"], &[("u", "v", Sign::Negative)]).unwrap();
        let bad = verify_coloring(&pos, None, &Coloring::new(vec![1, 1])).unwrap();
        assert_eq!(bad, vec![Violation::Edge { u: 0, v: 1, sign: Sign::Positive }]);
        let bad = verify_coloring(&neg, None, &Coloring::new(vec![1, -1])).unwrap();
        assert_eq!(bad.len(), 1);
        assert!(verify_coloring(&neg, None, &Coloring::new(vec![1, 1])).unwrap().is_empty());
        let l = ListAssignment::new(&neg, vec![vec![2], vec![1]]).unwrap();
        let bad = verify_coloring(&neg, Some(&l), &Coloring::new(vec![1, 1])).unwrap();
        assert_eq!(bad, vec![Violation::NotInList { v: 0, color: 1 }]);
        assert!(matches!(verify_coloring(&neg, None, &Coloring::new(vec![1])), Err(GraphError::PartialColoring(_))));
    }

    #[test]
    fn mrs_examples() {
        assert_eq!(mrs_color_set(1).unwrap(), vec![0]);
        assert_eq!(mrs_color_set(2).unwrap(), vec![-1, 1]);
        assert_eq!(mrs_color_set(5).unwrap(), vec![-2, -1, 0, 1, 2]);
        assert_eq!(mrs_color_set(0), Err(GraphError::NonPositiveK(0)));
        for k in 1..100 {
            let s = mrs_color_set(k).unwrap();
            assert_eq!(s.len() as i64, k);
            assert_eq!(s.contains(&0), k % 2 == 1);
            assert!(s.iter().all(|c| s.contains(&-c)));
        }
    }

    #[test]
    fn empty_lists_rejected() {
        let g = SignedGraph::with_vertices(2);
        assert_eq!(ListAssignment::new(&g, vec![vec![1], vec![]]), Err(GraphError::EmptyList("1".into())));
    }
}
