//! Charges, structure classification and the six discharging rules for
//! plane graphs without 4-circuits, plus reducibility checks for the two
//! forbidden configurations.
//!
//! Vertices start with `3d(v) - 10`, faces with `2d(f) - 10`; on a connected
//! plane graph the total is `-20`. Charges are generic over an exact scalar
//! (see [`crate::Charge`]).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{Debug, Display};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use indexmap::IndexMap;
use num_traits::{FromPrimitive, Num};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{is_valid_coloring, Color, Coloring, ListAssignment, Sign, SignedGraph, Vertex};
use crate::planar::{has_circuit_of_length, Face, RotationEmbedding};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DischargeError {
    #[error("the graph is disconnected")]
    Disconnected,
}

/// Scalars usable as charges.
pub trait Scalar: Num + Clone + PartialOrd + Debug + Display + FromPrimitive {}

impl<T: Num + Clone + PartialOrd + Debug + Display + FromPrimitive> Scalar for T {}

fn q<Q: Scalar>(k: i64) -> Q {
    Q::from_i64(k).expect("small integers convert")
}

fn third<Q: Scalar>(k: i64) -> Q {
    q::<Q>(k) / q::<Q>(3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "id", rename_all = "lowercase")]
pub enum Element {
    Vertex(Vertex),
    Face(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transfer<Q> {
    pub rule: Rule,
    pub from: Element,
    pub to: Element,
    pub amount: Q,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChargeLedger<Q> {
    pub initial: IndexMap<Element, Q>,
    pub transfers: Vec<Transfer<Q>>,
    pub final_charge: IndexMap<Element, Q>,
}

impl<Q: Scalar> ChargeLedger<Q> {
    pub fn total_initial(&self) -> Q {
        sum(self.initial.values())
    }

    pub fn total_final(&self) -> Q {
        sum(self.final_charge.values())
    }

    /// `final = initial + inflow - outflow` for every element.
    pub fn is_consistent(&self) -> bool {
        let mut expect = self.initial.clone();
        for t in &self.transfers {
            let a = expect[&t.from].clone() - t.amount.clone();
            expect[&t.from] = a;
            let b = expect[&t.to].clone() + t.amount.clone();
            expect[&t.to] = b;
        }
        expect == self.final_charge
    }

    /// Elements with negative final charge.
    pub fn negative(&self) -> Vec<(Element, Q)> {
        self.final_charge.iter().filter(|(_, c)| **c < Q::zero()).map(|(e, c)| (*e, c.clone())).collect()
    }

    fn apply(&mut self, rule: Rule, from: Element, to: Element, amount: Q) {
        let a = self.final_charge[&from].clone() - amount.clone();
        self.final_charge[&from] = a;
        let b = self.final_charge[&to].clone() + amount.clone();
        self.final_charge[&to] = b;
        self.transfers.push(Transfer { rule, from, to, amount });
    }

    pub fn to_json(&self) -> serde_json::Value {
        let charges = |m: &IndexMap<Element, Q>| {
            m.iter().map(|(e, c)| serde_json::json!({"element": e, "charge": c.to_string()})).collect::<Vec<_>>()
        };
        serde_json::json!({
            "initial": charges(&self.initial),
            "transfers": self.transfers.iter().map(|t| serde_json::json!({
                "rule": t.rule, "from": t.from, "to": t.to, "amount": t.amount.to_string()
            })).collect::<Vec<_>>(),
            "final": charges(&self.final_charge),
            "total_initial": self.total_initial().to_string(),
            "total_final": self.total_final().to_string(),
        })
    }
}

fn sum<'a, Q: Scalar + 'a>(it: impl Iterator<Item = &'a Q>) -> Q {
    it.fold(Q::zero(), |a, b| a + b.clone())
}

/// Faces of the embedding; an edgeless single vertex has one empty face.
pub fn plane_faces(emb: &RotationEmbedding) -> Vec<Face> {
    let faces = emb.faces();
    if faces.is_empty() {
        vec![Face { walk: Vec::new() }]
    } else {
        faces
    }
}

pub fn initial_charges<Q: Scalar>(emb: &RotationEmbedding) -> Result<ChargeLedger<Q>, DischargeError> {
    let g = emb.graph();
    if g.is_empty() || !g.is_connected() {
        return Err(DischargeError::Disconnected);
    }
    let mut initial = IndexMap::new();
    for v in g.vertices() {
        initial.insert(Element::Vertex(v), q::<Q>(3 * g.degree(v) as i64 - 10));
    }
    for (i, f) in plane_faces(emb).iter().enumerate() {
        initial.insert(Element::Face(i), q::<Q>(2 * f.size() as i64 - 10));
    }
    Ok(ChargeLedger { final_charge: initial.clone(), initial, transfers: Vec::new() })
}

/// Face-level structure needed by the rules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub face_sizes: Vec<usize>,
    /// Distinct vertices on each face, in walk order.
    pub face_vertices: Vec<Vec<Vertex>>,
    pub bad_vertices: Vec<Vertex>,
    pub bad_faces: Vec<usize>,
    pub magic_faces: Vec<usize>,
    /// `(f, g, k)` with `f < g` sharing `k` edges.
    pub adjacent: Vec<(usize, usize, usize)>,
    /// Adjacent pairs sharing exactly the two ends of one edge.
    pub normally_adjacent: Vec<(usize, usize)>,
}

impl Classification {
    pub fn is_bad_vertex(&self, v: Vertex) -> bool {
        self.bad_vertices.binary_search(&v).is_ok()
    }

    pub fn is_bad_face(&self, f: usize) -> bool {
        self.bad_faces.binary_search(&f).is_ok()
    }

    pub fn is_magic(&self, f: usize) -> bool {
        self.magic_faces.binary_search(&f).is_ok()
    }

    /// Faces adjacent to `f` with the number of shared edges.
    pub fn neighbors_of(&self, f: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacent.iter().filter_map(move |&(a, b, k)| {
            if a == f {
                Some((b, k))
            } else if b == f {
                Some((a, k))
            } else {
                None
            }
        })
    }
}

fn distinct(walk: &[Vertex]) -> Vec<Vertex> {
    let mut seen = BTreeSet::new();
    walk.iter().copied().filter(|v| seen.insert(*v)).collect()
}

pub fn classify(emb: &RotationEmbedding) -> Classification {
    let g = emb.graph();
    let faces = plane_faces(emb);
    let face_sizes: Vec<usize> = faces.iter().map(Face::size).collect();
    let face_vertices: Vec<Vec<Vertex>> = faces.iter().map(|f| distinct(&f.walk)).collect();

    let mut sides: BTreeMap<(Vertex, Vertex), Vec<usize>> = BTreeMap::new();
    for (i, f) in faces.iter().enumerate() {
        for (a, b) in f.darts() {
            sides.entry((a.min(b), a.max(b))).or_default().push(i);
        }
    }
    let mut shared: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for fs in sides.values() {
        if let [a, b] = fs[..] {
            if a != b {
                *shared.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
    }
    let adjacent: Vec<(usize, usize, usize)> = shared.iter().map(|(&(a, b), &k)| (a, b, k)).collect();
    let adj_faces = |f: usize| -> Vec<usize> {
        adjacent
            .iter()
            .filter_map(|&(a, b, _)| {
                if a == f {
                    Some(b)
                } else if b == f {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    };
    let normally_adjacent = adjacent
        .iter()
        .filter(|&&(a, b, k)| k == 1 && face_vertices[a].iter().filter(|v| face_vertices[b].contains(v)).count() == 2)
        .map(|&(a, b, _)| (a, b))
        .collect();

    let triangles: Vec<usize> = (0..faces.len()).filter(|&i| face_sizes[i] == 3).collect();
    let bad_vertices: Vec<Vertex> = g
        .vertices()
        .filter(|&v| {
            if g.degree(v) != 4 {
                return false;
            }
            let mine: Vec<usize> = triangles.iter().copied().filter(|&t| faces[t].contains(v)).collect();
            mine.iter()
                .enumerate()
                .any(|(i, &s)| mine[i + 1..].iter().any(|&t| !shared.contains_key(&(s.min(t), s.max(t)))))
        })
        .collect();
    let bad = |v: &Vertex| bad_vertices.binary_search(v).is_ok();
    let bad_faces = triangles.iter().copied().filter(|&t| face_vertices[t].iter().all(bad)).collect();

    let magic_faces = (0..faces.len())
        .filter(|&f| {
            if face_sizes[f] != 5 || !faces[f].is_simple() {
                return false;
            }
            let tri: Vec<usize> = adj_faces(f).into_iter().filter(|&t| face_sizes[t] == 3).collect();
            if tri.len() != 5 {
                return false;
            }
            let mut all: BTreeSet<Vertex> = face_vertices[f].iter().copied().collect();
            for &t in &tri {
                all.extend(face_vertices[t].iter().copied());
            }
            let odd: Vec<Vertex> = all.into_iter().filter(|&v| g.degree(v) != 4).collect();
            odd.len() == 1 && face_vertices[f].contains(&odd[0])
        })
        .collect();

    Classification { face_sizes, face_vertices, bad_vertices, bad_faces, magic_faces, adjacent, normally_adjacent }
}

/// Applies the six rules to the initial charges.
pub fn apply_rules<Q: Scalar>(emb: &RotationEmbedding) -> Result<(ChargeLedger<Q>, Classification), DischargeError> {
    let mut ledger = initial_charges::<Q>(emb)?;
    let cls = classify(emb);
    let g = emb.graph();
    let nf = cls.face_sizes.len();
    let incident = |v: Vertex, size: usize| -> Vec<usize> {
        (0..nf).filter(|&f| cls.face_sizes[f] == size && cls.face_vertices[f].contains(&v)).collect()
    };

    for v in g.vertices() {
        for f in incident(v, 3) {
            let amount = if cls.is_bad_vertex(v) { q(1) } else { q(2) };
            ledger.apply(Rule::R1, Element::Vertex(v), Element::Face(f), amount);
        }
    }
    for v in g.vertices().filter(|&v| g.degree(v) == 5) {
        for f in incident(v, 5) {
            ledger.apply(Rule::R2, Element::Vertex(v), Element::Face(f), third(1));
        }
    }
    for v in g.vertices().filter(|&v| g.degree(v) == 6) {
        for f in incident(v, 5) {
            let fours = cls.face_vertices[f].iter().filter(|&&u| g.degree(u) == 4).count();
            let amount = if cls.is_magic(f) {
                q(1)
            } else if fours == 4 {
                third(2)
            } else {
                assert!(fours <= 3, "a 6-vertex on a 5-face leaves at most four 4-vertices");
                third(1)
            };
            ledger.apply(Rule::R3, Element::Vertex(v), Element::Face(f), amount);
        }
    }
    for v in g.vertices().filter(|&v| g.degree(v) >= 7) {
        for f in incident(v, 5) {
            ledger.apply(Rule::R4, Element::Vertex(v), Element::Face(f), q(1));
        }
    }
    for t in (0..nf).filter(|&t| cls.face_sizes[t] == 3) {
        if cls.face_vertices[t].iter().filter(|&&v| cls.is_bad_vertex(v)).count() > 1 {
            continue;
        }
        let targets: Vec<usize> =
            cls.neighbors_of(t).filter(|&(f, _)| cls.face_sizes[f] == 5).map(|(f, _)| f).collect();
        for f in targets {
            ledger.apply(Rule::R5, Element::Face(t), Element::Face(f), third(1));
        }
    }
    for f in (0..nf).filter(|&f| cls.face_sizes[f] >= 5) {
        let targets: Vec<(usize, usize)> = cls.neighbors_of(f).filter(|&(t, _)| cls.is_bad_face(t)).collect();
        for (t, k) in targets {
            ledger.apply(Rule::R6, Element::Face(f), Element::Face(t), third(k as i64));
        }
    }
    Ok((ledger, cls))
}

/// Circuit-with-chords templates that a minimal counterexample avoids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Template {
    /// `u0..u5` with chord `u0u2`, `d(u0) <= 5`, all others of degree 4.
    Hexagon,
    /// `u0..u9` with chords `u0u8, u2u6, u2u7`, `d(u2) = 6`, all others of degree 4.
    Decagon,
}

impl Template {
    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> usize {
        match self {
            Template::Hexagon => 6,
            Template::Decagon => 10,
        }
    }

    pub fn chords(self) -> &'static [(usize, usize)] {
        match self {
            Template::Hexagon => &[(0, 2)],
            Template::Decagon => &[(0, 8), (2, 6), (2, 7)],
        }
    }

    fn degree_ok(self, i: usize, d: usize) -> bool {
        match (self, i) {
            (Template::Hexagon, 0) => d <= 5,
            (Template::Decagon, 2) => d == 6,
            _ => d == 4,
        }
    }

    /// Internal edges: circuit edges then chords.
    pub fn edges(self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut e: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        e.extend_from_slice(self.chords());
        e
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Occurrence {
    pub template: Template,
    /// `circuit[i]` plays the role of `u_i`.
    pub circuit: Vec<Vertex>,
}

/// Whether the labelled vertex sequence matches the template in `g`.
pub fn matches(g: &SignedGraph, t: Template, c: &[Vertex]) -> bool {
    let n = t.len();
    c.len() == n
        && c.iter().collect::<BTreeSet<_>>().len() == n
        && c.iter().all(|&v| v < g.len())
        && t.edges().iter().all(|&(i, j)| g.has_edge(c[i], c[j]))
        && c.iter().enumerate().all(|(i, &v)| t.degree_ok(i, g.degree(v)))
}

fn extend_paths(g: &SignedGraph, t: Template, path: &mut Vec<Vertex>, found: &mut Vec<Vec<Vertex>>) {
    let n = t.len();
    let i = path.len();
    if i == n {
        if matches(g, t, path) {
            found.push(path.clone());
        }
        return;
    }
    let last = path[i - 1];
    let cands: Vec<Vertex> = g.neighbors(last).collect();
    for w in cands {
        if path.contains(&w) || !t.degree_ok(i, g.degree(w)) {
            continue;
        }
        // Chords and the closing edge whose endpoints are both placed.
        let ok = t
            .edges()
            .iter()
            .filter(|&&(a, b)| a.max(b) == i && a.min(b) < i)
            .all(|&(a, b)| g.has_edge(path[a.min(b)], w));
        if ok {
            path.push(w);
            extend_paths(g, t, path, found);
            path.pop();
        }
    }
}

fn template_occurrences(g: &SignedGraph, t: Template) -> Vec<Vec<Vertex>> {
    let mut found = Vec::new();
    for v in g.vertices().filter(|&v| t.degree_ok(0, g.degree(v))) {
        extend_paths(g, t, &mut vec![v], &mut found);
    }
    found
}

/// All labelled occurrences of both templates. A hexagon whose reflection
/// `u2 u1 u0 u5 u4 u3` also matches is reported once, in its smaller labelling.
pub fn find_claim_configs(g: &SignedGraph) -> Vec<Occurrence> {
    let mut out = BTreeSet::new();
    for c in template_occurrences(g, Template::Hexagon) {
        let r = vec![c[2], c[1], c[0], c[5], c[4], c[3]];
        let circuit = if matches(g, Template::Hexagon, &r) { c.clone().min(r) } else { c };
        out.insert(Occurrence { template: Template::Hexagon, circuit });
    }
    for c in template_occurrences(g, Template::Decagon) {
        out.insert(Occurrence { template: Template::Decagon, circuit: c });
    }
    out.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub name: &'static str,
    pub holds: bool,
    pub witness: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// A checkable necessary condition fails.
    ConditionFailed { conditions: Vec<&'static str> },
    /// All conditions hold and these elements end negative.
    NegativeElement { elements: Vec<Element> },
    /// All conditions hold and nothing is negative: impossible for a
    /// correct ledger, since the total is negative.
    Contradiction,
}

#[derive(Debug, Clone)]
pub struct Audit<Q> {
    pub conditions: Vec<Condition>,
    pub ledger: ChargeLedger<Q>,
    pub classification: Classification,
    pub negative: Vec<(Element, Q)>,
    pub verdict: Verdict,
}

impl<Q: Scalar> Audit<Q> {
    pub fn is_contradiction(&self) -> bool {
        self.verdict == Verdict::Contradiction
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "claim": "no plane graph meets every checkable condition while all final charges are nonnegative",
            "conditions": self.conditions,
            "negative": self.negative.iter().map(|(e, c)| serde_json::json!({"element": e, "charge": c.to_string()})).collect::<Vec<_>>(),
            "verdict": self.verdict,
            "classification": self.classification,
            "ledger": self.ledger.to_json(),
        })
    }
}

pub fn audit_minimal_counterexample<Q: Scalar>(emb: &RotationEmbedding) -> Result<Audit<Q>, DischargeError> {
    let (ledger, classification) = apply_rules::<Q>(emb)?;
    let g = emb.graph();
    let low = g.vertices().find(|&v| g.degree(v) < 4);
    let four = has_circuit_of_length(g, 4);
    let occ = find_claim_configs(g);
    let hex: Vec<&Occurrence> = occ.iter().filter(|o| o.template == Template::Hexagon).collect();
    let dec: Vec<&Occurrence> = occ.iter().filter(|o| o.template == Template::Decagon).collect();
    let planar = crate::planar::is_planar_embedding(emb);
    let conditions = vec![
        Condition { name: "plane_embedding", holds: planar, witness: None },
        Condition {
            name: "min_degree_at_least_4",
            holds: low.is_none(),
            witness: low.map(|v| serde_json::json!({"vertex": v, "degree": g.degree(v)})),
        },
        Condition {
            name: "no_4_circuit",
            holds: four.is_none(),
            witness: four.map(|c| serde_json::json!({"circuit": c})),
        },
        Condition {
            name: "no_chorded_hexagon",
            holds: hex.is_empty(),
            witness: hex.first().map(|o| serde_json::json!({"circuit": o.circuit})),
        },
        Condition {
            name: "no_chorded_decagon",
            holds: dec.is_empty(),
            witness: dec.first().map(|o| serde_json::json!({"circuit": o.circuit})),
        },
    ];
    let negative = ledger.negative();
    let failed: Vec<&'static str> = conditions.iter().filter(|c| !c.holds).map(|c| c.name).collect();
    let verdict = if !failed.is_empty() {
        Verdict::ConditionFailed { conditions: failed }
    } else if !negative.is_empty() {
        Verdict::NegativeElement { elements: negative.iter().map(|(e, _)| *e).collect() }
    } else {
        Verdict::Contradiction
    };
    Ok(Audit { conditions, ledger, classification, negative, verdict })
}

/// A template circuit standing alone, with a sign per template edge (in
/// [`Template::edges`] order) and residual lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigInstance {
    pub template: Template,
    pub signs: Vec<Sign>,
    pub lists: Vec<Vec<Color>>,
}

impl ConfigInstance {
    pub fn graph(&self) -> SignedGraph {
        let mut g = SignedGraph::with_vertices(self.template.len());
        for (&(u, v), &s) in self.template.edges().iter().zip(&self.signs) {
            g.add_edge(u, v, s).expect("template edges are simple");
        }
        g
    }

    pub fn list_assignment(&self) -> ListAssignment {
        ListAssignment::from_raw(self.lists.clone())
    }

    fn back_edges(&self) -> Vec<Vec<(usize, Color)>> {
        let mut back = vec![Vec::new(); self.template.len()];
        for (&(u, v), &s) in self.template.edges().iter().zip(&self.signs) {
            back[u.max(v)].push((u.min(v), s.as_int()));
        }
        back
    }

    /// Exhaustive extension search in vertex order.
    pub fn extends(&self) -> Option<Vec<Color>> {
        let mut c = vec![0; self.template.len()];
        search_extension(0, &self.lists, &self.back_edges(), &mut c).then_some(c)
    }
}

fn search_extension(k: usize, lists: &[Vec<Color>], back: &[Vec<(usize, Color)>], c: &mut [Color]) -> bool {
    if k == lists.len() {
        return true;
    }
    for &x in &lists[k] {
        if back[k].iter().all(|&(j, s)| x != s * c[j]) {
            c[k] = x;
            if search_extension(k + 1, lists, back, c) {
                return true;
            }
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReducibilityReport {
    pub claim: &'static str,
    pub template: Template,
    pub mode: String,
    pub universe: Vec<Color>,
    /// Instances checked (list choice times sign pattern).
    pub instances: u64,
    /// Sign patterns over all template edges for which a normalizing switch was found and verified.
    pub switch_patterns_verified: usize,
    /// Strategy failed although an extension exists.
    pub strategy_gaps: u64,
    /// No extension exists.
    pub counterexamples: u64,
    /// Strategy output invalid, or strategy and search disagree.
    pub inconsistencies: u64,
    /// Up to ten offending instances.
    pub examples: Vec<ConfigInstance>,
}

impl ReducibilityReport {
    pub fn passed(&self) -> bool {
        self.counterexamples == 0 && self.strategy_gaps == 0 && self.inconsistencies == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["status"] = serde_json::json!(if self.passed() { "pass" } else { "fail" });
        v
    }
}

/// Signed permutations of `{-m..m}` fixing 0; they commute with negation and
/// hence preserve colorability of every instance.
fn signed_permutations(m: Color) -> Vec<Vec<Color>> {
    let mut perms: Vec<Vec<Color>> = vec![vec![]];
    for k in 1..=m {
        let mut next = Vec::new();
        for p in &perms {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        perms = next;
    }
    let mut out = Vec::new();
    for p in &perms {
        for flips in 0..1u32 << m {
            out.push(p.iter().enumerate().map(|(i, &x)| if flips >> i & 1 == 1 { -x } else { x }).collect());
        }
    }
    out
}

fn apply_signed(g: &[Color], c: Color) -> Color {
    if c == 0 {
        0
    } else {
        c.signum() * g[(c.unsigned_abs() - 1) as usize]
    }
}

fn subsets(pool: &[Color], k: usize) -> Vec<Vec<Color>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..pool.len() {
        for mut rest in subsets(&pool[i + 1..], k - 1) {
            rest.insert(0, pool[i]);
            out.push(rest);
        }
    }
    out
}

/// Orbit representatives of the 3-subsets of `{-m..m}` under signed permutations.
pub fn triple_representatives(m: Color) -> Vec<Vec<Color>> {
    let group = signed_permutations(m);
    let universe: Vec<Color> = (-m..=m).collect();
    let mut reps = BTreeSet::new();
    for s in subsets(&universe, 3) {
        let canon = group
            .iter()
            .map(|g| {
                let mut t: Vec<Color> = s.iter().map(|&c| apply_signed(g, c)).collect();
                t.sort_unstable();
                t
            })
            .min()
            .expect("group is nonempty");
        reps.insert(canon);
    }
    reps.into_iter().collect()
}

/// Positions `u0, u1, u3` of the hexagon edges to `u2` in template edge order
/// are 1 (`u1u2`), 2 (`u2u3`) and 6 (`u0u2`); the rest are free.
const HEX_FIXED: [usize; 3] = [1, 2, 6];
const HEX_FREE: [usize; 4] = [0, 3, 4, 5];

fn hex_signs(pattern: u32) -> Vec<Sign> {
    let mut s = vec![Sign::Positive; 7];
    for (bit, &e) in HEX_FREE.iter().enumerate() {
        if pattern >> bit & 1 == 1 {
            s[e] = Sign::Negative;
        }
    }
    s
}

/// For every signature of the hexagon, switching at the ends `u_i != u2` of
/// negative edges `u_i u2` makes the three edges at `u2` positive.
fn verify_switch_normalization() -> usize {
    let t = Template::Hexagon;
    let edges = t.edges();
    let mut ok = 0;
    for pattern in 0..1u32 << edges.len() {
        let signs: Vec<Sign> =
            (0..edges.len()).map(|i| if pattern >> i & 1 == 1 { Sign::Negative } else { Sign::Positive }).collect();
        let inst = ConfigInstance { template: t, signs: signs.clone(), lists: vec![vec![]; 6] };
        let g = inst.graph();
        let x: Vec<Vertex> = HEX_FIXED
            .iter()
            .filter(|&&e| signs[e].is_negative())
            .map(|&e| if edges[e].0 == 2 { edges[e].1 } else { edges[e].0 })
            .collect();
        let (h, _, _) = crate::graph::switch(&g, None, None, &x).expect("vertices exist");
        if HEX_FIXED.iter().all(|&e| h.sign(edges[e].0, edges[e].1) == Some(Sign::Positive)) {
            ok += 1;
        }
    }
    ok
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HexagonMode {
    /// All lists over `{-max..max}`, `u2`'s list up to signed permutation.
    Exhaustive { max: Color },
    /// Sampled lists over `{-6..6}`.
    Randomized { seed: u64, samples: u64 },
}

impl HexagonMode {
    pub const SMALL: HexagonMode = HexagonMode::Exhaustive { max: 3 };
}

struct Tally {
    instances: u64,
    counterexamples: u64,
    examples: Vec<ConfigInstance>,
}

impl Tally {
    fn new() -> Tally {
        Tally { instances: 0, counterexamples: 0, examples: Vec::new() }
    }

    fn record(&mut self, inst: &ConfigInstance) {
        self.record_with(inst, &inst.back_edges());
    }

    fn record_with(&mut self, inst: &ConfigInstance, back: &[Vec<(usize, Color)>]) {
        self.instances += 1;
        let mut c = [0; 10];
        if !search_extension(0, &inst.lists, back, &mut c) {
            self.counterexamples += 1;
            if self.examples.len() < 10 {
                self.examples.push(inst.clone());
            }
        }
    }

    fn merge(&mut self, o: Tally) {
        self.instances += o.instances;
        self.counterexamples += o.counterexamples;
        for e in o.examples {
            if self.examples.len() < 10 {
                self.examples.push(e);
            }
        }
    }
}

/// Checks that the chorded hexagon with `|L(u2)| = 3` and 2-lists elsewhere
/// is always colorable, over all 16 free sign patterns.
pub fn check_claim2_reducible(mode: HexagonMode) -> ReducibilityReport {
    let switch_patterns_verified = verify_switch_normalization();
    let (universe, mode_name, tally) = match mode {
        HexagonMode::Exhaustive { max } => {
            let universe: Vec<Color> = (-max..=max).collect();
            (universe.clone(), format!("exhaustive(max={max})"), hexagon_sweep(&universe, max))
        }
        HexagonMode::Randomized { seed, samples } => {
            let universe: Vec<Color> = (-6..=6).collect();
            let mut r = crate::random::rng(seed);
            let mut tally = Tally::new();
            for _ in 0..samples {
                let lists: Vec<Vec<Color>> = (0..6)
                    .map(|i| universe.choose_multiple(&mut r, if i == 2 { 3 } else { 2 }).copied().collect())
                    .collect();
                for pattern in 0..16 {
                    tally.record(&ConfigInstance {
                        template: Template::Hexagon,
                        signs: hex_signs(pattern),
                        lists: lists.clone(),
                    });
                }
            }
            (universe, format!("randomized(seed={seed},samples={samples})"), tally)
        }
    };
    ReducibilityReport {
        claim: "a 6-circuit u0..u5 with chord u0u2, a 3-list on u2 and 2-lists elsewhere is colorable",
        template: Template::Hexagon,
        mode: mode_name,
        universe,
        instances: tally.instances,
        switch_patterns_verified,
        strategy_gaps: 0,
        counterexamples: tally.counterexamples,
        inconsistencies: if switch_patterns_verified == 128 { 0 } else { 1 },
        examples: tally.examples,
    }
}

fn hexagon_sweep(universe: &[Color], max: Color) -> Tally {
    let reps = triple_representatives(max);
    let pairs = subsets(universe, 2);
    let tasks: Vec<(usize, usize)> = (0..reps.len()).flat_map(|a| (0..pairs.len()).map(move |b| (a, b))).collect();
    let next = AtomicUsize::new(0);
    let total = Mutex::new(Tally::new());
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| {
                let mut local = Tally::new();
                loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(&(a, b)) = tasks.get(i) else { break };
                    let mut inst = ConfigInstance {
                        template: Template::Hexagon,
                        signs: hex_signs(0),
                        lists: vec![pairs[b].clone(), vec![], reps[a].clone(), vec![], vec![], vec![]],
                    };
                    for pattern in 0..16 {
                        inst.signs = hex_signs(pattern);
                        let back = inst.back_edges();
                        for l1 in &pairs {
                            inst.lists[1].clone_from(l1);
                            for l3 in &pairs {
                                inst.lists[3].clone_from(l3);
                                for l4 in &pairs {
                                    inst.lists[4].clone_from(l4);
                                    for l5 in &pairs {
                                        inst.lists[5].clone_from(l5);
                                        local.record_with(&inst, &back);
                                    }
                                }
                            }
                        }
                    }
                }
                total.lock().expect("no worker panics").merge(local);
            });
        }
    });
    total.into_inner().expect("no worker panics")
}

/// Colors each template vertex receives from outside the template, given the
/// template degrees (4 everywhere except `u2` at 6).
pub fn decagon_outside_degrees() -> Vec<usize> {
    let t = Template::Decagon;
    let mut inner = vec![0; t.len()];
    for (u, v) in t.edges() {
        inner[u] += 1;
        inner[v] += 1;
    }
    inner.iter().enumerate().map(|(i, &d)| if i == 2 { 6 - d } else { 4 - d }).collect()
}

/// A random decagon instance: 4-lists over `universe`, a forbidden set per
/// vertex of at most its outside degree (biased towards list colors), and a
/// random signature.
pub fn random_decagon(universe: &[Color], r: &mut impl Rng) -> ConfigInstance {
    let outside = decagon_outside_degrees();
    let lists = outside
        .iter()
        .map(|&k| {
            let l: Vec<Color> = universe.choose_multiple(r, 4).copied().collect();
            let forbidden: Vec<Color> = (0..k)
                .map(|_| {
                    if r.gen_bool(0.75) {
                        *l.choose(r).expect("nonempty")
                    } else {
                        *universe.choose(r).expect("nonempty")
                    }
                })
                .collect();
            l.into_iter().filter(|c| !forbidden.contains(c)).collect()
        })
        .collect();
    let signs = (0..Template::Decagon.edges().len())
        .map(|_| if r.gen_bool(0.5) { Sign::Negative } else { Sign::Positive })
        .collect();
    ConfigInstance { template: Template::Decagon, signs, lists }
}

/// The sequential strategy: reserve two colors `alpha, beta` for `u9`, give
/// `u0` a color clashing with neither, color `u1..u8` greedily, then give
/// `u9` whichever reserved color `u8` leaves.
pub fn decagon_strategy(inst: &ConfigInstance) -> Option<Vec<Color>> {
    let edges = Template::Decagon.edges();
    let sign = |a: usize, b: usize| -> Color {
        let i = edges.iter().position(|&(u, v)| (u, v) == (a, b) || (u, v) == (b, a)).expect("template edge");
        inst.signs[i].as_int()
    };
    let back = inst.back_edges();
    let l = &inst.lists;
    let (&alpha, &beta) = (l[9].first()?, l[9].get(1)?);
    let s09 = sign(0, 9);
    let mut c = vec![0; 10];
    c[0] = *l[0].iter().find(|&&x| x != s09 * alpha && x != s09 * beta)?;
    for k in 1..9 {
        c[k] = *l[k].iter().find(|&&x| back[k].iter().all(|&(j, s)| x != s * c[j]))?;
    }
    let s89 = sign(8, 9);
    c[9] = [alpha, beta].into_iter().find(|&x| x != s89 * c[8])?;
    Some(c)
}

/// Runs the strategy on random decagon instances and cross-checks each with
/// exhaustive extension search.
pub fn check_claim3_reducible(seed: u64, samples: u64) -> ReducibilityReport {
    let universe: Vec<Color> = (-6..=6).collect();
    let mut r = crate::random::rng(seed);
    let (mut gaps, mut counter, mut inconsistent) = (0, 0, 0);
    let mut examples = Vec::new();
    for _ in 0..samples {
        let inst = random_decagon(&universe, &mut r);
        let g = inst.graph();
        let lists = inst.list_assignment();
        let strategy = decagon_strategy(&inst);
        let search = inst.extends();
        let bad = match (&strategy, &search) {
            (Some(c), Some(_)) => {
                let ok = is_valid_coloring(&g, Some(&lists), &Coloring::new(c.clone()));
                inconsistent += u64::from(!ok);
                !ok
            }
            (None, Some(_)) => {
                gaps += 1;
                true
            }
            (None, None) => {
                counter += 1;
                true
            }
            (Some(_), None) => {
                inconsistent += 1;
                true
            }
        };
        if bad && examples.len() < 10 {
            examples.push(inst);
        }
    }
    ReducibilityReport {
        claim: "the sequential strategy colors the chorded 10-circuit from its residual lists",
        template: Template::Decagon,
        mode: format!("randomized(seed={seed},samples={samples})"),
        universe,
        instances: samples,
        switch_patterns_verified: 0,
        strategy_gaps: gaps,
        counterexamples: counter,
        inconsistencies: inconsistent,
        examples,
    }
}
