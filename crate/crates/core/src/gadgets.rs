//! Explicit non-choosability constructions and their verification.
//!
//! `G3` is K4 with a claw inserted into every face, twice. `H` is the
//! planted gadget of the 4-list construction; `T` is the cube used nine
//! times, glued at two opposite corners, in the 3-list construction.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use thiserror::Error;

use crate::graph::{Color, ListAssignment, Sign, SignedGraph, Vertex};
use crate::planar::{embed, RotationEmbedding};
use crate::report::Report;

#[derive(Debug, Error)]
pub enum GadgetError {
    #[error("edge position {0} is outside the circuit")]
    BadPosition(usize),
    #[error("circuit needs at least 3 vertices, got {0}")]
    TooShort(usize),
    #[error("list assignment has {lists} lists for {vertices} vertices")]
    ListMismatch { lists: usize, vertices: usize },
    #[error("verification failed at stage {stage}")]
    VerificationFailed { stage: String, report: Box<Report> },
}

/// A signed plane graph with a list assignment and a role tag per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct GadgetInstance {
    pub embedding: RotationEmbedding,
    pub lists: ListAssignment,
    pub roles: Vec<String>,
}

impl GadgetInstance {
    pub fn graph(&self) -> &SignedGraph {
        self.embedding.graph()
    }

    /// Vertices carrying `role`, in id order.
    pub fn with_role(&self, role: &str) -> Vec<Vertex> {
        (0..self.roles.len()).filter(|&v| self.roles[v] == role).collect()
    }
}

pub const G3_LIST: [Color; 4] = [1, 2, 3, 4];

/// K4 with a claw in each face (including the unbounded one), twice.
pub fn build_g3() -> GadgetInstance {
    let mut g = SignedGraph::new();
    for i in 0..4 {
        g.add_vertex(&format!("i{i}")).unwrap();
    }
    for a in 0..4 {
        for b in a + 1..4 {
            g.add_edge(a, b, Sign::Positive).unwrap();
        }
    }
    let rot = vec![vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]];
    let mut emb = RotationEmbedding::new(g, rot).expect("K4 rotation");
    let mut roles = vec!["initial".to_string(); 4];
    for (prefix, role) in [("s", "solid"), ("h", "hollow")] {
        let faces = emb.faces();
        for (i, f) in faces.iter().enumerate() {
            emb.insert_vertex_in_face(&f.walk, &format!("{prefix}{i}"));
            roles.push(role.to_string());
        }
    }
    emb.finish();
    let n = emb.graph().len();
    GadgetInstance { embedding: emb, lists: ListAssignment::uniform(n, &G3_LIST), roles }
}

/// Faces of `G3` with one initial, one solid and one hollow vertex, each
/// given as `[solid, hollow, initial]`, sorted.
pub fn special_faces(g3: &GadgetInstance) -> Vec<[Vertex; 3]> {
    let mut out = BTreeSet::new();
    for f in g3.embedding.faces() {
        if f.size() != 3 {
            continue;
        }
        let pick = |role: &str| f.walk.iter().copied().find(|&v| g3.roles[v] == role);
        if let (Some(s), Some(h), Some(i)) = (pick("solid"), pick("hollow"), pick("initial")) {
            out.insert([s, h, i]);
        }
    }
    out.into_iter().collect()
}

pub const H_INNER: [&str; 8] = ["A", "B", "C", "D", "M", "N", "P", "Q"];

/// Lists of the inner vertices of `H`, in [`H_INNER`] order.
pub fn h_lists() -> [Vec<Color>; 8] {
    [
        vec![1, 2, 6, 7],
        vec![2, 4, 6, 7],
        vec![1, 4, 6, 7],
        vec![1, 2, 4, 5],
        vec![2, 5, 6, -6],
        vec![1, 5, 6, -6],
        vec![2, 3, 6, -6],
        vec![1, 3, 6, -6],
    ]
}

/// Edges of `H` by label; `PQ` is the only negative edge.
pub fn h_edges() -> Vec<(&'static str, &'static str, Sign)> {
    use Sign::{Negative as N, Positive as P};
    vec![
        ("x", "y", P),
        ("y", "z", P),
        ("z", "x", P),
        // D sees x and y, leaving {4, 5}
        ("D", "x", P),
        ("D", "y", P),
        // with D = 4 the triangle ABC is left with {6, 7}
        ("A", "x", P),
        ("A", "y", P),
        ("B", "y", P),
        ("B", "D", P),
        ("C", "x", P),
        ("C", "D", P),
        ("A", "B", P),
        ("B", "C", P),
        ("C", "A", P),
        // with D = 5 the circuit M N Q P is left with {6, -6}
        ("M", "y", P),
        ("M", "D", P),
        ("N", "x", P),
        ("N", "D", P),
        ("P", "y", P),
        ("P", "z", P),
        ("Q", "x", P),
        ("Q", "z", P),
        ("M", "N", P),
        ("N", "Q", P),
        ("Q", "P", N),
        ("P", "M", P),
    ]
}

/// The gadget `H` alone, with the circuit `xyz` as outer face and lists
/// `{1,2,3,4}` on `x, y, z`.
pub fn build_h() -> GadgetInstance {
    let names: Vec<&str> = ["x", "y", "z"].into_iter().chain(H_INNER).collect();
    let g = SignedGraph::build(&names, &h_edges()).expect("H is simple");
    let mut emb = embed(&g).expect("H is planar");
    let faces = emb.faces();
    let outer = faces
        .iter()
        .position(|f| f.size() == 3 && [0, 1, 2].iter().all(|&v| f.contains(v)))
        .expect("xyz bounds a face");
    emb.set_outer_face(outer);
    let mut lists = vec![G3_LIST.to_vec(); 3];
    lists.extend(h_lists());
    GadgetInstance {
        embedding: emb,
        lists: ListAssignment::from_raw(lists),
        roles: names.iter().map(|s| s.to_string()).collect(),
    }
}

/// `G3` with every special face `T_i` carrying a copy `H_i` of `H`, where
/// `x_i, y_i, z_i` are its solid, hollow and initial vertex.
pub fn build_theorem4_instance() -> GadgetInstance {
    let g3 = build_g3();
    let mut g = g3.graph().clone();
    let mut roles = g3.roles.clone();
    let mut lists = g3.lists.lists().to_vec();
    let h = h_lists();
    for (i, t) in special_faces(&g3).iter().enumerate() {
        let mut id = std::collections::HashMap::new();
        for (k, &label) in ["x", "y", "z"].iter().enumerate() {
            id.insert(label, t[k]);
        }
        for (k, &label) in H_INNER.iter().enumerate() {
            let v = g.add_vertex(&format!("{label}{}", i + 1)).unwrap();
            id.insert(label, v);
            roles.push(label.to_string());
            lists.push(h[k].clone());
        }
        for (a, b, s) in h_edges() {
            if !g.has_edge(id[a], id[b]) {
                g.add_edge(id[a], id[b], s).unwrap();
            }
        }
    }
    let emb = embed(&g).expect("four-list instance is planar");
    GadgetInstance { embedding: emb, lists: ListAssignment::from_raw(lists), roles }
}

pub const T_LABELS: [&str; 8] = ["A", "B", "C", "D", "M", "N", "P", "Q"];

fn t_edges() -> [(usize, usize); 12] {
    // A B C D M N P Q = 0..8
    [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7)]
}

/// The cube `T`: circuits `ABCD`, `MNPQ` and edges `AM, BN, CP, DQ`, all
/// positive, with lists `{1,2,3}`.
pub fn build_t() -> GadgetInstance {
    let edges: Vec<(&str, &str, Sign)> =
        t_edges().iter().map(|&(a, b)| (T_LABELS[a], T_LABELS[b], Sign::Positive)).collect();
    let g = SignedGraph::build(&T_LABELS, &edges).expect("cube is simple");
    let emb = embed(&g).expect("cube is planar");
    GadgetInstance {
        embedding: emb,
        lists: ListAssignment::uniform(8, &[1, 2, 3]),
        roles: T_LABELS.iter().map(|s| s.to_string()).collect(),
    }
}

pub fn a_color(i: usize) -> Color {
    i as Color
}

pub fn b_color(j: usize) -> Color {
    j as Color + 3
}

/// Nine copies `T_0..T_8` of the cube sharing `A' = A_k` and `C' = C_k`;
/// `M_k N_k` is negative.
pub fn build_theorem10_instance() -> GadgetInstance {
    let mut g = SignedGraph::new();
    let a = g.add_vertex("A'").unwrap();
    let c = g.add_vertex("C'").unwrap();
    let mut roles = vec!["A'".to_string(), "C'".to_string()];
    let mut lists = vec![(0..3).map(a_color).collect::<Vec<_>>(), (0..3).map(b_color).collect()];
    for i in 0..3 {
        for j in 0..3 {
            let k = 3 * i + j;
            let mut id = [a, 0, c, 0, 0, 0, 0, 0];
            for (t, label) in T_LABELS.iter().enumerate() {
                if t == 0 || t == 2 {
                    continue;
                }
                id[t] = g.add_vertex(&format!("{label}{k}")).unwrap();
                roles.push(label.to_string());
                lists.push(match *label {
                    "B" | "D" => vec![a_color(i), b_color(j), 6],
                    "N" | "Q" => vec![6, 7, -7],
                    "M" => vec![a_color(i), 7, -7],
                    _ => vec![b_color(j), 7, -7],
                });
            }
            for (x, y) in t_edges() {
                let s = if (x, y) == (4, 5) { Sign::Negative } else { Sign::Positive };
                g.add_edge(id[x], id[y], s).unwrap();
            }
        }
    }
    let emb = embed(&g).expect("three-list instance is planar");
    GadgetInstance { embedding: emb, lists: ListAssignment::from_raw(lists), roles }
}

/// The circuit `0 1 .. n-1` whose edge `i` joins `i` and `i+1 mod n`; edges
/// listed in `negative` get sign `-1`.
pub fn build_circuit(n: usize, negative: &[usize], lists: ListAssignment) -> Result<GadgetInstance, GadgetError> {
    if n < 3 {
        return Err(GadgetError::TooShort(n));
    }
    if let Some(&p) = negative.iter().find(|&&p| p >= n) {
        return Err(GadgetError::BadPosition(p));
    }
    if lists.len() != n {
        return Err(GadgetError::ListMismatch { lists: lists.len(), vertices: n });
    }
    let mut g = SignedGraph::with_vertices(n);
    for i in 0..n {
        let s = if negative.contains(&i) { Sign::Negative } else { Sign::Positive };
        g.add_edge(i, (i + 1) % n, s).unwrap();
    }
    let emb = embed(&g).expect("circuits are planar");
    Ok(GadgetInstance { embedding: emb, lists, roles: vec!["circuit".to_string(); n] })
}

/// Lists of `targets` after removing the product colors of the fixed
/// vertices adjacent to them.
pub fn residual_lists(
    g: &SignedGraph,
    lists: &ListAssignment,
    fixed: &[(Vertex, Color)],
    targets: &[Vertex],
) -> Vec<Vec<Color>> {
    targets
        .iter()
        .map(|&v| {
            let banned: Vec<Color> = fixed.iter().filter_map(|&(u, c)| g.sign(u, v).map(|s| s.apply(c))).collect();
            lists.get(v).iter().copied().filter(|c| !banned.contains(c)).collect()
        })
        .collect()
}

/// Number of L-colorings of the subgraph induced by `keep` in which each
/// fixed vertex has its given color.
pub fn count_extensions(g: &SignedGraph, lists: &ListAssignment, fixed: &[(Vertex, Color)], keep: &[Vertex]) -> u64 {
    let mut mask = vec![false; g.len()];
    for &v in keep {
        mask[v] = true;
    }
    for &(v, _) in fixed {
        mask[v] = true;
    }
    let (h, map) = g.induced(&mask);
    let sub: Vec<Vec<Color>> = map
        .iter()
        .map(|&v| match fixed.iter().find(|&&(u, _)| u == v) {
            Some(&(_, c)) => vec![c],
            None => lists.get(v).to_vec(),
        })
        .collect();
    crate::solver::count_colorings(&h, &ListAssignment::from_raw(sub)).expect("lists match")
}

fn pick(list: &[Color], banned: &[Color]) -> Option<Color> {
    list.iter().copied().find(|c| !banned.contains(c))
}

/// Colors the 4-circuit `cycle` from residual lists of size at least 2.
fn color_circuit(
    g: &SignedGraph,
    lists: &ListAssignment,
    colors: &mut [Option<Color>],
    cycle: &[Vertex],
) -> Option<()> {
    let fixed: Vec<(Vertex, Color)> = (0..g.len()).filter_map(|v| colors[v].map(|c| (v, c))).collect();
    let res = residual_lists(g, lists, &fixed, cycle);
    if res.iter().any(|l| l.len() < 2) {
        return None;
    }
    let mut mask = vec![false; g.len()];
    for &v in cycle {
        mask[v] = true;
    }
    let (h, map) = g.induced(&mask);
    let sub: Vec<Vec<Color>> = map.iter().map(|v| res[cycle.iter().position(|x| x == v).unwrap()].clone()).collect();
    match crate::solver::solve(&h, &ListAssignment::from_raw(sub)).ok()?.outcome {
        crate::solver::Outcome::Sat(c) => {
            for (i, &v) in map.iter().enumerate() {
                colors[v] = Some(c.get(i));
            }
            Some(())
        }
        crate::solver::Outcome::Unsat => None,
    }
}

/// Extends a coloring of `x, y, z` into a copy of `H` (given by the ids of
/// `x, y, z, A, B, C, D, M, N, P, Q`) in the order C, A, B, D, then the
/// circuit `M N Q P`. Signs are ignored: this is the unsigned argument.
pub fn extend_h_unsigned(
    g: &SignedGraph,
    lists: &ListAssignment,
    ids: &[Vertex; 11],
    colors: &mut [Option<Color>],
) -> Option<()> {
    let [x, y, _z, a, b, c, d, m, n, p, q] = *ids;
    let col = |colors: &[Option<Color>], v: Vertex| colors[v].expect("colored");
    let (cx, cy) = (col(colors, x), col(colors, y));
    let two: Vec<Color> = lists.get(d).iter().copied().filter(|&k| k != cx && k != cy).take(2).collect();
    if two.len() < 2 {
        return None;
    }
    colors[c] = Some(pick(lists.get(c), &[two[0], two[1], cx])?);
    let cc = col(colors, c);
    colors[a] = Some(pick(lists.get(a), &[cx, cy, cc])?);
    let ca = col(colors, a);
    colors[b] = Some(pick(lists.get(b), &[cy, cc, ca])?);
    let cb = col(colors, b);
    colors[d] = Some(pick(&two, &[cb])?);
    let positive = unsigned(g);
    color_circuit(&positive, lists, colors, &[m, n, q, p])
}

fn unsigned(g: &SignedGraph) -> SignedGraph {
    let mut h = g.clone();
    let edges: Vec<_> = g.edges().collect();
    for (u, v, _) in edges {
        h.set_sign(u, v, Sign::Positive);
    }
    h
}

/// Ids `x, y, z, A, .., Q` of copy `i` (0-based) in the 4-list instance.
fn h_copy_ids(g3_len: usize, face: [Vertex; 3], i: usize) -> [Vertex; 11] {
    let base = g3_len + 8 * i;
    let mut ids = [0; 11];
    ids[..3].copy_from_slice(&face);
    for k in 0..8 {
        ids[3 + k] = base + k;
    }
    ids
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Random trials on single gadget copies.
    pub trials: usize,
    /// Random trials on the whole unsigned instance.
    pub whole_trials: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { trials: 10_000, whole_trials: 100, seed: 1 }
    }
}

fn finish(report: Report) -> Result<Report, GadgetError> {
    match report.first_failure() {
        Some(stage) => {
            Err(GadgetError::VerificationFailed { stage: stage.name.clone(), report: Box::new(report.clone()) })
        }
        None => Ok(report),
    }
}

/// Checks that the signed 4-list instance has no L-coloring while its
/// underlying graph is 4-choosable (randomized for the latter).
pub fn verify_theorem4(opts: VerifyOptions) -> Result<Report, GadgetError> {
    let mut report =
        Report::new("signed 4-list gadget", "signed planar graph that is not 4-choosable, unsigned graph 4-choosable");
    let g3 = build_g3();
    let faces = special_faces(&g3);

    // (a) colorings of G3
    let mut a =
        crate::report::Stage::new("a", "every {1,2,3,4}-coloring of G3 has exactly one special face colored (1,2,3)");
    a.check("initial_solid_hollow_4_4_12", {
        let count = |r: &str| g3.with_role(r).len();
        (count("initial"), count("solid"), count("hollow")) == (4, 4, 12)
    });
    a.put("special_faces", faces.len());
    a.check("special_faces_24", faces.len() == 24);
    let mut colorings = 0u64;
    let mut hits = Vec::new();
    let mut projections = BTreeSet::new();
    crate::solver::for_each_coloring(g3.graph(), &g3.lists, |c| {
        colorings += 1;
        hits.push(faces.iter().filter(|f| (c[f[0]], c[f[1]], c[f[2]]) == (1, 2, 3)).count());
        projections.insert(c[..4].to_vec());
        true
    })
    .expect("lists match");
    a.put("colorings", colorings);
    a.check("colorings_24", colorings == 24);
    a.check("bijection_with_k4_colorings", projections.len() as u64 == colorings);
    a.check("exactly_one_special_face_123", hits.iter().all(|&h| h == 1));
    report.push(a);

    // (b) the signed gadget has no extension of (1,2,3)
    let mut b = crate::report::Stage::new("b", "H admits no extension of boundary colors (1,2,3)");
    let h = build_h();
    let hg = h.graph();
    let v = |name: &str| hg.vertex(name).expect("H label");
    let boundary = [(v("x"), 1), (v("y"), 2), (v("z"), 3)];
    let inner: Vec<Vertex> = H_INNER.iter().map(|l| v(l)).collect();
    let ext = count_extensions(hg, &h.lists, &boundary, &inner);
    b.put("extensions", ext);
    b.check("no_extension", ext == 0);
    let d_left = residual_lists(hg, &h.lists, &boundary, &[v("D")]).remove(0);
    b.check("d_in_4_5", d_left == vec![4, 5]);
    let mut with = |d: Color, group: &[&str], expect: Vec<Color>, key: &str| {
        let mut fixed = boundary.to_vec();
        fixed.push((v("D"), d));
        let ids: Vec<Vertex> = group.iter().map(|l| v(l)).collect();
        let res = residual_lists(hg, &h.lists, &fixed, &ids);
        let all = res.iter().all(|l| *l == expect);
        let mut sub = h.lists.clone();
        for (k, &id) in ids.iter().enumerate() {
            sub.set(id, res[k].clone());
        }
        let count = count_extensions(hg, &sub, &[], &ids);
        b.check(&format!("{key}_residual_lists"), all);
        b.check(&format!("{key}_uncolorable"), count == 0);
    };
    with(4, &["A", "B", "C"], vec![6, 7], "d4_triangle_abc");
    with(5, &["M", "N", "Q", "P"], vec![-6, 6], "d5_circuit_mnqp");
    let inst = build_theorem4_instance();
    let g = inst.graph();
    b.put("vertices", g.len());
    b.check("vertices_212", g.len() == 212);
    b.check("negative_edges_24", g.negative_edge_count() == 24);
    b.check("planar", crate::planar::validate_embedding(&inst.embedding) == crate::planar::Validity::Planar);
    let solved = crate::solver::solve(g, &inst.lists).expect("lists match");
    b.put("whole_instance_nodes", solved.nodes);
    b.check("whole_instance_unsat", !solved.outcome.is_sat());
    report.push(b);

    // (c) unsigned sanity
    let mut c = crate::report::Stage::new(
        "c",
        "the underlying graph is 4-choosable: G3 greedily, then each H copy in a fixed order",
    );
    let mut r = crate::random::rng(opts.seed);
    let (_, order) = crate::planar::degeneracy_order(g3.graph());
    let mut g3_ok = 0;
    let mut h_ok = 0;
    let h_ids: [Vertex; 11] = std::array::from_fn(|k| k);
    for _ in 0..opts.trials {
        let l = crate::random::lists(g3.graph().len(), 4, -5, 6, &mut r);
        if matches!(crate::solver::greedy_by_degeneracy(g3.graph(), &l, &order), Ok(crate::solver::Greedy::Sat(_))) {
            g3_ok += 1;
        }
        let l = crate::random::lists(11, 4, -5, 6, &mut r);
        let mut colors = vec![None; 11];
        let boundary: Vec<Color> = (-5..=6).collect::<Vec<_>>().choose_multiple(&mut r, 3).copied().collect();
        let mut l = l.lists().to_vec();
        for k in 0..3 {
            colors[k] = Some(boundary[k]);
            l[k] = vec![boundary[k]];
        }
        let l = ListAssignment::from_raw(l);
        if extend_h_unsigned(hg, &l, &h_ids, &mut colors).is_some() {
            let col = crate::graph::Coloring::new(colors.into_iter().map(Option::unwrap).collect());
            if crate::graph::is_valid_coloring(&unsigned(hg), Some(&l), &col) {
                h_ok += 1;
            }
        }
    }
    c.put("trials", opts.trials);
    c.put("g3_greedy_successes", g3_ok);
    c.put("h_extensions_found", h_ok);
    c.check("g3_greedy_always", g3_ok == opts.trials);
    c.check("h_extension_always", h_ok == opts.trials);
    let positive = unsigned(g);
    let mut whole_ok = 0;
    for _ in 0..opts.whole_trials {
        let l = crate::random::lists(g.len(), 4, -5, 6, &mut r);
        if color_four_list_unsigned(&positive, &l, &g3, &faces, &order)
            .is_some_and(|col| crate::graph::is_valid_coloring(&positive, Some(&l), &col))
        {
            whole_ok += 1;
        }
    }
    c.put("whole_trials", opts.whole_trials);
    c.put("whole_colorings_found", whole_ok);
    c.check("whole_always", whole_ok == opts.whole_trials);
    report.push(c);
    finish(report)
}

/// Colors the unsigned 4-list instance: `G3` greedily along `order`, then
/// every copy of `H` by [`extend_h_unsigned`].
fn color_four_list_unsigned(
    g: &SignedGraph,
    lists: &ListAssignment,
    g3: &GadgetInstance,
    faces: &[[Vertex; 3]],
    order: &[Vertex],
) -> Option<crate::graph::Coloring> {
    let n3 = g3.graph().len();
    let (sub, _) = g.induced(&(0..g.len()).map(|v| v < n3).collect::<Vec<_>>());
    let base =
        match crate::solver::greedy_by_degeneracy(&sub, &lists.restrict(&(0..n3).collect::<Vec<_>>()), order).ok()? {
            crate::solver::Greedy::Sat(c) => c,
            crate::solver::Greedy::Stuck(_) => return None,
        };
    let mut colors: Vec<Option<Color>> = vec![None; g.len()];
    for (v, c) in colors.iter_mut().enumerate().take(n3) {
        *c = Some(base.get(v));
    }
    for (i, &f) in faces.iter().enumerate() {
        extend_h_unsigned(g, lists, &h_copy_ids(n3, f, i), &mut colors)?;
    }
    Some(crate::graph::Coloring::new(colors.into_iter().map(|c| c.unwrap()).collect()))
}

/// Checks that the signed 3-list instance of nine glued cubes has no
/// L-coloring while its underlying graph is 3-choosable (randomized).
pub fn verify_theorem10(opts: VerifyOptions) -> Result<Report, GadgetError> {
    let mut report = Report::new(
        "signed 3-list gadget",
        "signed planar graph of girth 4 that is not 3-choosable, unsigned graph 3-choosable",
    );
    let inst = build_theorem10_instance();
    let g = inst.graph();
    let v = |name: &str| g.vertex(name).expect("label");
    let (ap, cp) = (v("A'"), v("C'"));

    let mut s = crate::report::Stage::new("structure", "nine cubes glued at A' and C', girth 4, nine negative edges");
    s.put("vertices", g.len());
    s.check("vertices_56", g.len() == 56);
    s.check("girth_4", crate::planar::girth(g) == Some(4));
    s.check("negative_edges_9", g.negative_edge_count() == 9);
    s.check("planar", crate::planar::validate_embedding(&inst.embedding) == crate::planar::Validity::Planar);
    report.push(s);

    let mut s =
        crate::report::Stage::new("copies", "with c(A') = a_p and c(C') = b_q the copy T_{3p+q} has no extension");
    let mut cases = Vec::new();
    for p in 0..3 {
        for q in 0..3 {
            let k = 3 * p + q;
            let fixed = [(ap, a_color(p)), (cp, b_color(q))];
            let copy: Vec<Vertex> = ["B", "D", "M", "N", "P", "Q"].iter().map(|l| v(&format!("{l}{k}"))).collect();
            let ext = count_extensions(g, &inst.lists, &fixed, &copy);
            let bd = residual_lists(g, &inst.lists, &fixed, &copy[..2]);
            let forced = bd.iter().all(|l| *l == vec![6]);
            let mut fixed6 = fixed.to_vec();
            fixed6.extend([(copy[0], 6), (copy[1], 6)]);
            let ring = residual_lists(g, &inst.lists, &fixed6, &copy[2..]);
            let ring_ok = ring.iter().all(|l| *l == vec![-7, 7]);
            cases.push(serde_json::json!({"p": p, "q": q, "copy": k, "extensions": ext, "b_d_forced_6": forced, "circuit_lists_7": ring_ok}));
            s.check(&format!("case_{p}_{q}"), ext == 0 && forced && ring_ok);
        }
    }
    s.put("cases", cases);
    report.push(s);

    let mut s = crate::report::Stage::new("whole", "the 56-vertex instance has no L-coloring");
    let solved = crate::solver::solve(g, &inst.lists).expect("lists match");
    s.put("nodes", solved.nodes);
    s.check("unsat", !solved.outcome.is_sat());
    report.push(s);

    let mut s = crate::report::Stage::new(
        "unsigned",
        "the underlying graph is 3-choosable: A', C', then B_i, D_i, then each circuit",
    );
    let mut r = crate::random::rng(opts.seed);
    let positive = unsigned(g);
    let mut ok = 0;
    for _ in 0..opts.trials {
        let l = crate::random::lists(g.len(), 3, -4, 5, &mut r);
        if color_three_list_unsigned(&positive, &l)
            .is_some_and(|c| crate::graph::is_valid_coloring(&positive, Some(&l), &c))
        {
            ok += 1;
        }
    }
    s.put("trials", opts.trials);
    s.put("colorings_found", ok);
    s.check("always", ok == opts.trials);
    report.push(s);
    finish(report)
}

fn color_three_list_unsigned(g: &SignedGraph, lists: &ListAssignment) -> Option<crate::graph::Coloring> {
    let v = |name: &str| g.vertex(name).expect("label");
    let mut colors: Vec<Option<Color>> = vec![None; g.len()];
    let (ap, cp) = (v("A'"), v("C'"));
    colors[ap] = Some(lists.get(ap)[0]);
    colors[cp] = Some(lists.get(cp)[0]);
    for k in 0..9 {
        for l in ["B", "D"] {
            let x = v(&format!("{l}{k}"));
            colors[x] = Some(pick(lists.get(x), &[colors[ap]?, colors[cp]?])?);
        }
        let ring: Vec<Vertex> = ["M", "N", "P", "Q"].iter().map(|l| v(&format!("{l}{k}"))).collect();
        color_circuit(g, lists, &mut colors, &ring)?;
    }
    Some(crate::graph::Coloring::new(colors.into_iter().map(|c| c.unwrap()).collect()))
}
