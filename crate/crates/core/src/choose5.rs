//! Five-list coloring of signed plane graphs.
//!
//! [`extend_two_precolored`] works on a near-triangulation whose outer
//! boundary is a circuit with two adjacent precolored vertices `v1`, `v2`.
//! Boundary lists have at least 3 colors and interior lists at least 5. Each
//! step is one of:
//!
//! * base: three vertices, color the third one;
//! * chord: split along a chord of the boundary, color the side holding
//!   `v1 v2` first, then the other side with the chord ends as its
//!   precolored pair;
//! * fan: take `v_p`, the boundary neighbor of `v1` other than `v2`, reserve
//!   two colors for it, strip their products from its interior neighbors,
//!   delete it, recurse, and finally give `v_p` a reserved color.
//!
//! Work is driven by an explicit task stack, so deep instances do not
//! exhaust the call stack.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{verify_coloring, Color, Coloring, ListAssignment, Sign, SignedGraph, Vertex};
use crate::planar::{
    connect_components, embed, is_near_triangulation, make_biconnected, triangulate_interior, NotPlanarCertificate,
    PlanarError, RotationEmbedding, SubView,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Choose5Error {
    #[error("graph is not planar")]
    NotPlanar(NotPlanarCertificate),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("internal invariant broken: {0}")]
    InternalInvariantBroken(String),
}

/// Counts of recursion steps taken.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub base: usize,
    pub chord: usize,
    pub fan: usize,
    pub max_depth: usize,
}

enum Task {
    Solve { active: Vec<bool>, v1: Vertex, v2: Vertex, depth: usize },
    Finish { vp: Vertex, gammas: [Color; 2], prev: Vertex },
}

struct Run<'a> {
    emb: &'a RotationEmbedding,
    lists: Vec<Vec<Color>>,
    color: Vec<Option<Color>>,
    trace: Trace,
}

fn broken(msg: impl Into<String>) -> Choose5Error {
    Choose5Error::InternalInvariantBroken(msg.into())
}

fn violated(msg: impl Into<String>) -> Choose5Error {
    Choose5Error::PreconditionViolated(msg.into())
}

impl Run<'_> {
    fn g(&self) -> &SignedGraph {
        self.emb.graph()
    }

    fn sign(&self, u: Vertex, v: Vertex) -> Sign {
        self.g().sign(u, v).expect("edge")
    }

    fn step(&mut self, task: Task, stack: &mut Vec<Task>) -> Result<(), Choose5Error> {
        match task {
            Task::Finish { vp, gammas, prev } => {
                let banned = self.sign(prev, vp).apply(self.color[prev].expect("colored"));
                let c = gammas.into_iter().find(|&c| c != banned).expect("two distinct reserved colors");
                self.color[vp] = Some(c);
                Ok(())
            }
            Task::Solve { active, v1, v2, depth } => self.solve(active, v1, v2, depth, stack),
        }
    }

    fn solve(
        &mut self,
        active: Vec<bool>,
        v1: Vertex,
        v2: Vertex,
        depth: usize,
        stack: &mut Vec<Task>,
    ) -> Result<(), Choose5Error> {
        self.trace.max_depth = self.trace.max_depth.max(depth);
        for v in [v1, v2] {
            match self.color[v] {
                Some(c) => self.lists[v] = vec![c],
                None if self.lists[v].len() == 1 => self.color[v] = Some(self.lists[v][0]),
                None => return Err(broken(format!("{} is not precolored", self.g().name(v)))),
            }
        }
        let view = SubView::new(self.emb, &active);
        let count = view.vertices().count();
        if count == 3 {
            self.trace.base += 1;
            let w = view.vertices().find(|&w| w != v1 && w != v2).unwrap();
            let f1 = self.sign(v1, w).apply(self.color[v1].unwrap());
            let f2 = self.sign(v2, w).apply(self.color[v2].unwrap());
            let c = self.lists[w]
                .iter()
                .copied()
                .find(|&c| c != f1 && c != f2)
                .ok_or_else(|| broken(format!("no color left for {}", self.g().name(w))))?;
            self.color[w] = Some(c);
            return Ok(());
        }

        let (a, b) = view.outer_dart().ok_or_else(|| broken("no outer face"))?;
        let walk = view.face_from(a, b);
        let k = walk.len();
        let mut pos = vec![usize::MAX; active.len()];
        for (i, &v) in walk.iter().enumerate() {
            if pos[v] != usize::MAX {
                return Err(broken("outer boundary is not a circuit"));
            }
            pos[v] = i;
        }
        let (i1, i2) = (pos[v1], pos[v2]);
        if i1 == usize::MAX || i2 == usize::MAX || ((i1 + 1) % k != i2 && (i2 + 1) % k != i1) {
            return Err(broken("v1 v2 is not a boundary edge"));
        }
        for v in view.vertices() {
            if v == v1 || v == v2 {
                continue;
            }
            let need = if pos[v] == usize::MAX { 5 } else { 3 };
            if self.lists[v].len() < need {
                return Err(broken(format!("list of {} shrank below {}", self.g().name(v), need)));
            }
        }

        // chord case
        for i in 0..k {
            let x = walk[i];
            let (l, r) = (walk[(i + k - 1) % k], walk[(i + 1) % k]);
            let chord = view.neighbors(x).find(|&y| pos[y] != usize::MAX && y != l && y != r);
            if let Some(y) = chord {
                self.trace.chord += 1;
                let start = if v1 != x && v1 != y { v1 } else { v2 };
                let mut side = vec![false; active.len()];
                side[start] = true;
                let mut queue = VecDeque::from([start]);
                while let Some(u) = queue.pop_front() {
                    for w in view.neighbors(u) {
                        if w != x && w != y && !side[w] {
                            side[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
                let mut first = side.clone();
                first[x] = true;
                first[y] = true;
                let second: Vec<bool> = (0..active.len()).map(|v| active[v] && !side[v]).collect();
                stack.push(Task::Solve { active: second, v1: x, v2: y, depth: depth + 1 });
                stack.push(Task::Solve { active: first, v1, v2, depth: depth + 1 });
                return Ok(());
            }
        }

        // fan case
        self.trace.fan += 1;
        let (vp, prev) = if walk[(i1 + 1) % k] == v2 {
            (walk[(i1 + k - 1) % k], walk[(i1 + k - 2) % k])
        } else {
            (walk[(i1 + 1) % k], walk[(i1 + 2) % k])
        };
        let alpha = self.color[v1].unwrap();
        let banned = self.sign(v1, vp).apply(alpha);
        let free: Vec<Color> = self.lists[vp].iter().copied().filter(|&c| c != banned).take(2).collect();
        let [g1, g2] = free[..] else {
            return Err(broken(format!("fewer than two colors for {}", self.g().name(vp))));
        };
        let fan: Vec<Vertex> = view.neighbors(vp).filter(|&u| u != v1 && u != prev).collect();
        for u in fan {
            if pos[u] != usize::MAX {
                return Err(broken("fan neighbor on the boundary"));
            }
            let s = self.sign(vp, u);
            let (f1, f2) = (s.apply(g1), s.apply(g2));
            self.lists[u].retain(|&c| c != f1 && c != f2);
        }
        let mut rest = active;
        rest[vp] = false;
        stack.push(Task::Finish { vp, gammas: [g1, g2], prev });
        stack.push(Task::Solve { active: rest, v1, v2, depth: depth + 1 });
        Ok(())
    }
}

fn check_preconditions(
    emb: &RotationEmbedding,
    lists: &ListAssignment,
    v1: Vertex,
    v2: Vertex,
) -> Result<(), Choose5Error> {
    let g = emb.graph();
    if lists.len() != g.len() {
        return Err(violated("list assignment size differs from vertex count"));
    }
    if g.len() < 3 || !g.is_connected() {
        return Err(violated("near-triangulation on at least three vertices"));
    }
    if !is_near_triangulation(emb) {
        return Err(violated("every bounded face is a triangle"));
    }
    let outer = emb.outer_face().ok_or_else(|| violated("outer face designated"))?;
    if !outer.is_simple() || outer.size() < 3 {
        return Err(violated("outer boundary is a circuit"));
    }
    if !outer.darts().any(|d| d == (v1, v2) || d == (v2, v1)) {
        return Err(violated("v1 v2 is an edge of the outer boundary"));
    }
    let (l1, l2) = (lists.get(v1), lists.get(v2));
    if l1.len() != 1 || l2.len() != 1 {
        return Err(violated("v1 and v2 have singleton lists"));
    }
    if l1[0] == g.sign(v1, v2).unwrap().apply(l2[0]) {
        return Err(violated("precolors of v1 and v2 are compatible"));
    }
    for v in g.vertices().filter(|&v| v != v1 && v != v2) {
        let need = if outer.contains(v) { 3 } else { 5 };
        if lists.get(v).len() < need {
            return Err(violated(format!("list of {} has at least {} colors", g.name(v), need)));
        }
    }
    Ok(())
}

/// Colors a near-triangulation from `lists`, given adjacent outer vertices
/// `v1`, `v2` with compatible singleton lists.
pub fn extend_two_precolored(
    emb: &RotationEmbedding,
    lists: &ListAssignment,
    v1: Vertex,
    v2: Vertex,
) -> Result<Coloring, Choose5Error> {
    extend_two_precolored_traced(emb, lists, v1, v2).map(|(c, _)| c)
}

/// [`extend_two_precolored`] together with recursion statistics.
pub fn extend_two_precolored_traced(
    emb: &RotationEmbedding,
    lists: &ListAssignment,
    v1: Vertex,
    v2: Vertex,
) -> Result<(Coloring, Trace), Choose5Error> {
    check_preconditions(emb, lists, v1, v2)?;
    let n = emb.graph().len();
    let mut run = Run { emb, lists: lists.lists().to_vec(), color: vec![None; n], trace: Trace::default() };
    let mut stack = vec![Task::Solve { active: vec![true; n], v1, v2, depth: 0 }];
    while let Some(task) = stack.pop() {
        run.step(task, &mut stack)?;
    }
    let partial = run.color;
    let c = Coloring::from_partial(emb.graph(), &partial).map_err(|_| broken("vertex left uncolored"))?;
    let bad = verify_coloring(emb.graph(), Some(lists), &c).expect("total coloring");
    if let Some(v) = bad.first() {
        return Err(broken(v.describe(emb.graph())));
    }
    Ok((c, run.trace))
}

/// Colors any signed planar graph from lists of at least 5 colors.
///
/// The graph is embedded, connected, made 2-connected and triangulated with
/// positive edges. On the resulting outer edge `v1 v2`, `v1` takes its
/// smallest color and `v2` its smallest compatible color; other outer
/// vertices keep their three smallest colors.
pub fn color_planar_5lists(g: &SignedGraph, lists: &ListAssignment) -> Result<Coloring, Choose5Error> {
    if lists.len() != g.len() {
        return Err(violated("list assignment size differs from vertex count"));
    }
    if let Some(v) = g.vertices().find(|&v| lists.get(v).len() < 5) {
        return Err(violated(format!("list of {} has at least 5 colors", g.name(v))));
    }
    let planar_err = |e: PlanarError| match e {
        PlanarError::NotPlanar(cert) => Choose5Error::NotPlanar(cert),
        other => broken(other.to_string()),
    };
    let mut emb = embed(g).map_err(planar_err)?;
    if g.len() < 3 {
        return Ok(color_tiny(g, lists));
    }
    connect_components(&mut emb);
    make_biconnected(&mut emb).map_err(planar_err)?;
    emb.pick_largest_outer();
    let emb = triangulate_interior(&emb).map_err(planar_err)?;
    let (v1, v2) = emb.outer_dart().ok_or_else(|| broken("no outer face"))?;
    let outer = emb.outer_face().unwrap();
    let alpha = lists.get(v1)[0];
    let s = emb.graph().sign(v1, v2).unwrap();
    let beta = *lists.get(v2).iter().find(|&&b| alpha != s.apply(b)).unwrap();
    let mut shrunk = lists.clone();
    shrunk.set(v1, vec![alpha]);
    shrunk.set(v2, vec![beta]);
    for &v in &outer.walk {
        if v != v1 && v != v2 {
            shrunk.set(v, lists.get(v)[..3].to_vec());
        }
    }
    let c = extend_two_precolored(&emb, &shrunk, v1, v2)?;
    let bad = verify_coloring(g, Some(lists), &c).expect("total coloring");
    if let Some(v) = bad.first() {
        return Err(broken(v.describe(g)));
    }
    Ok(c)
}

fn color_tiny(g: &SignedGraph, lists: &ListAssignment) -> Coloring {
    let mut colors: Vec<Color> = Vec::new();
    for v in g.vertices() {
        let forbidden: Vec<Color> =
            g.signed_neighbors(v).filter(|&(u, _)| u < v).map(|(u, s)| s.apply(colors[u])).collect();
        colors.push(*lists.get(v).iter().find(|c| !forbidden.contains(c)).unwrap());
    }
    Coloring::new(colors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_valid_coloring, switch};
    use crate::planar::fixtures::*;
    use crate::planar::{validate_embedding, Validity};
    use crate::random;
    use crate::solver::solve;
    use rand::seq::SliceRandom;
    use rand::Rng;

    fn triangle(neg: &[(usize, usize)]) -> RotationEmbedding {
        let mut g = graph_from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        for &(u, v) in neg {
            g.set_sign(u, v, Sign::Negative);
        }
        embed(&g).unwrap()
    }

    #[test]
    fn triangle_examples() {
        let emb = triangle(&[]);
        let l = ListAssignment::from_raw(vec![vec![1], vec![2], vec![1, 2, 3]]);
        assert_eq!(extend_two_precolored(&emb, &l, 0, 1).unwrap().get(2), 3);
        let emb = triangle(&[(0, 2)]);
        let l = ListAssignment::from_raw(vec![vec![1], vec![2], vec![-1, 2, 5]]);
        assert_eq!(extend_two_precolored(&emb, &l, 0, 1).unwrap().get(2), 5);
    }

    #[test]
    fn preconditions_named() {
        let emb = triangle(&[]);
        let l = ListAssignment::from_raw(vec![vec![1], vec![1], vec![1, 2, 3]]);
        assert!(matches!(extend_two_precolored(&emb, &l, 0, 1), Err(Choose5Error::PreconditionViolated(_))));
        let l = ListAssignment::from_raw(vec![vec![1], vec![2], vec![1, 2]]);
        assert!(matches!(extend_two_precolored(&emb, &l, 0, 1), Err(Choose5Error::PreconditionViolated(_))));
        let cube_emb = embed(&cube()).unwrap();
        let l = ListAssignment::uniform(8, &[1, 2, 3, 4, 5]);
        assert!(matches!(extend_two_precolored(&cube_emb, &l, 0, 1), Err(Choose5Error::PreconditionViolated(_))));
    }

    /// Random near-triangulation with at most `n` vertices: a triangulation
    /// with some outer vertices peeled off while the boundary stays a circuit.
    fn instance(emb: &RotationEmbedding, r: &mut impl Rng) -> (ListAssignment, Vertex, Vertex) {
        let g = emb.graph();
        let outer = emb.outer_face().unwrap();
        let (v1, v2) = (outer.walk[0], outer.walk[1]);
        let mut l = random::lists(g.len(), 5, -4, 4, r);
        for &v in &outer.walk {
            let mut x = l.get(v).to_vec();
            x.shuffle(r);
            x.truncate(3);
            l.set(v, x);
        }
        let a = l.get(v1)[0];
        let s = g.sign(v1, v2).unwrap();
        let b = *l.get(v2).iter().find(|&&b| a != s.apply(b)).unwrap();
        l.set(v1, vec![a]);
        l.set(v2, vec![b]);
        (l, v1, v2)
    }

    #[test]
    fn k4_agrees_with_solver() {
        let mut r = random::rng(4);
        let mut emb = embed(&complete(4)).unwrap();
        let faces = emb.faces();
        emb.set_outer_face(faces.iter().position(|f| !f.contains(3)).unwrap());
        for _ in 0..200 {
            let mut e = emb.clone();
            random::sign_embedding(&mut e, 0.5, &mut r);
            let (l, v1, v2) = instance(&e, &mut r);
            let c = extend_two_precolored(&e, &l, v1, v2).unwrap();
            assert!(is_valid_coloring(e.graph(), Some(&l), &c));
            assert!(solve(e.graph(), &l).unwrap().outcome.is_sat());
        }
    }

    #[test]
    fn small_near_triangulations_agree_with_solver() {
        let mut r = random::rng(5);
        let (mut chords, mut fans, mut long_outer) = (0, 0, 0);
        for _ in 0..400 {
            let n = r.gen_range(3..=12);
            let mut emb = random::near_triangulation(n, &mut r);
            random::sign_embedding(&mut emb, 0.4, &mut r);
            let (l, v1, v2) = instance(&emb, &mut r);
            let (c, trace) = extend_two_precolored_traced(&emb, &l, v1, v2).unwrap();
            assert!(is_valid_coloring(emb.graph(), Some(&l), &c));
            assert!(solve(emb.graph(), &l).unwrap().outcome.is_sat());
            assert!(trace.max_depth <= emb.graph().len() - 2);
            chords += trace.chord;
            fans += trace.fan;
            long_outer += usize::from(emb.outer_face().unwrap().size() > 3);
        }
        assert!(chords > 0 && fans > 0 && long_outer > 0);
    }

    #[test]
    fn switch_equivariance() {
        let mut r = random::rng(6);
        for _ in 0..100 {
            let n = r.gen_range(4..=20);
            let mut emb = random::near_triangulation(n, &mut r);
            random::sign_embedding(&mut emb, 0.4, &mut r);
            let (l, v1, v2) = instance(&emb, &mut r);
            let x = random::subset(emb.graph().len(), &mut r);
            let (h, hl, _) = switch(emb.graph(), Some(&l), None, &x).unwrap();
            let hl = hl.unwrap();
            let mut he = RotationEmbedding::new(h, emb.rotations().to_vec()).unwrap();
            let (a, b) = emb.outer_dart().unwrap();
            he.set_outer_dart(a, b);
            let hc = extend_two_precolored(&he, &hl, v1, v2).unwrap();
            let (_, _, back) = switch(he.graph(), None, Some(&hc), &x).unwrap();
            assert!(is_valid_coloring(emb.graph(), Some(&l), &back.unwrap()));
        }
    }

    #[test]
    fn wrapper_examples() {
        let l = ListAssignment::uniform(4, &[1, 2, 3, 4, 5]);
        let c = color_planar_5lists(&complete(4), &l).unwrap();
        assert!(is_valid_coloring(&complete(4), Some(&l), &c));

        let mut r = random::rng(7);
        for _ in 0..50 {
            let mut g = icosahedron();
            random::signature(&mut g, 0.5, &mut r);
            let l = random::lists(12, 5, -7, 7, &mut r);
            let c = color_planar_5lists(&g, &l).unwrap();
            assert!(is_valid_coloring(&g, Some(&l), &c));
        }

        let tree = graph_from_edges(6, &[(0, 1), (0, 2), (2, 3), (2, 4), (4, 5)]);
        let l = random::lists(6, 5, -3, 3, &mut r);
        let c = color_planar_5lists(&tree, &l).unwrap();
        assert!(is_valid_coloring(&tree, Some(&l), &c));

        for n in 0..3 {
            let g = SignedGraph::with_vertices(n);
            let l = ListAssignment::uniform(n, &[1, 2, 3, 4, 5]);
            assert!(is_valid_coloring(&g, Some(&l), &color_planar_5lists(&g, &l).unwrap()));
        }

        assert!(matches!(
            color_planar_5lists(&complete(5), &ListAssignment::uniform(5, &[1, 2, 3, 4, 5])),
            Err(Choose5Error::NotPlanar(_))
        ));
    }

    #[test]
    fn wrapper_random_planar() {
        let mut r = random::rng(8);
        for _ in 0..150 {
            let n = r.gen_range(1..=40);
            let emb = random::planar(n, r.gen_range(0.0..0.8), &mut r);
            assert_eq!(validate_embedding(&emb), Validity::Planar);
            let mut g = emb.into_graph();
            random::signature(&mut g, 0.5, &mut r);
            let l = random::lists(g.len(), 5, -5, 5, &mut r);
            let c = color_planar_5lists(&g, &l).unwrap();
            assert!(is_valid_coloring(&g, Some(&l), &c));
        }
    }
}
