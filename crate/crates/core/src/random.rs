//! Seeded random instance generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Color, ListAssignment, Sign, SignedGraph, Vertex};
use crate::planar::{has_circuit_of_length, induced_embedding, is_near_triangulation, RotationEmbedding};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A plane triangulation on `n >= 3` vertices: repeated vertex insertion into
/// a random bounded face, followed by `flips` random edge flips.
pub fn triangulation(n: usize, flips: usize, r: &mut impl Rng) -> RotationEmbedding {
    assert!(n >= 3);
    let mut g = SignedGraph::with_vertices(3);
    g.add_edge(0, 1, Sign::Positive).unwrap();
    g.add_edge(1, 2, Sign::Positive).unwrap();
    g.add_edge(2, 0, Sign::Positive).unwrap();
    let mut emb = RotationEmbedding::new(g, vec![vec![1, 2], vec![2, 0], vec![0, 1]]).unwrap();
    for i in 3..n {
        let faces = emb.faces();
        let outer = emb.outer_face_index(&faces);
        let inner: Vec<usize> = (0..faces.len()).filter(|&f| Some(f) != outer).collect();
        let f = &faces[*inner.choose(r).unwrap()];
        emb.insert_vertex_in_face(&f.walk, &i.to_string());
    }
    for _ in 0..flips {
        flip_random_edge(&mut emb, r);
    }
    emb.finish();
    emb
}

/// Replaces a random edge `uv` shared by triangles `uvw`, `vux` with `wx`,
/// when `wx` is absent and both endpoints keep degree at least 3.
fn flip_random_edge(emb: &mut RotationEmbedding, r: &mut impl Rng) -> bool {
    let edges: Vec<(Vertex, Vertex, Sign)> = emb.graph().edges().collect();
    let &(u, v, s) = edges.choose(r).unwrap();
    if emb.graph().degree(u) <= 3 || emb.graph().degree(v) <= 3 {
        return false;
    }
    let w = emb.succ(v, u);
    let x = emb.succ(u, v);
    if w == x || emb.graph().has_edge(w, x) {
        return false;
    }
    let faces = emb.faces();
    let tri = |a: Vertex, b: Vertex| faces.iter().find(|f| f.darts().any(|d| d == (a, b))).map(|f| f.size());
    if tri(u, v) != Some(3) || tri(v, u) != Some(3) {
        return false;
    }
    let outer = emb.outer_dart();
    emb.remove_edge(u, v);
    let merged = emb.faces().into_iter().find(|f| f.contains(w) && f.contains(x) && f.size() == 4);
    let Some(f) = merged else { unreachable!("two triangles merge into a quadrilateral") };
    let i = f.walk.iter().position(|&y| y == w).unwrap();
    let j = f.walk.iter().position(|&y| y == x).unwrap();
    emb.add_chord(&f.walk.clone(), i, j, s);
    if let Some((a, b)) = outer {
        if !emb.set_outer_dart(a, b) {
            emb.pick_largest_outer();
        }
    }
    true
}

/// A random plane graph on `max(n, 3)` vertices: a triangulation with each
/// edge deleted independently with probability `p_delete`.
pub fn planar(n: usize, p_delete: f64, r: &mut impl Rng) -> RotationEmbedding {
    let mut emb = triangulation(n.max(3), n, r);
    let edges: Vec<(Vertex, Vertex, Sign)> = emb.graph().edges().collect();
    for (u, v, _) in edges {
        if r.gen_bool(p_delete) {
            emb.remove_edge(u, v);
        }
    }
    emb.finish();
    keep_or_pick_outer(&mut emb);
    emb
}

/// A near-triangulation with a circuit as outer boundary on at most `n >= 3`
/// vertices: a random triangulation from which up to three outer vertices
/// are peeled while the result stays a near-triangulation.
pub fn near_triangulation(n: usize, r: &mut impl Rng) -> RotationEmbedding {
    let mut emb = triangulation(n, 2 * n, r);
    let peel = r.gen_range(0..=n.saturating_sub(4).min(3));
    for _ in 0..peel {
        let outer = emb.outer_face().expect("outer face designated");
        let v = *outer.walk.choose(r).expect("outer face is nonempty");
        let keep: Vec<bool> = (0..emb.graph().len()).map(|u| u != v).collect();
        let (cand, _) = induced_embedding(&emb, &keep);
        let ok = cand.graph().len() >= 3
            && cand.graph().is_connected()
            && is_near_triangulation(&cand)
            && cand.outer_face().is_some_and(|f| f.is_simple() && f.size() >= 3);
        if ok {
            emb = cand;
        }
    }
    emb
}

/// A connected plane graph with no 3- or 4-circuit: edges of a random
/// triangulation are visited in random order and deleted while they lie on a
/// circuit of length at most 4.
pub fn girth5(n: usize, r: &mut impl Rng) -> RotationEmbedding {
    let mut emb = triangulation(n.max(3), n, r);
    let mut edges: Vec<(Vertex, Vertex, Sign)> = emb.graph().edges().collect();
    loop {
        edges.shuffle(r);
        let mut changed = false;
        for &(u, v, _) in &edges {
            if emb.graph().has_edge(u, v) && short_detour(emb.graph(), u, v) {
                emb.remove_edge(u, v);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    debug_assert!(has_circuit_of_length(emb.graph(), 3).is_none());
    debug_assert!(has_circuit_of_length(emb.graph(), 4).is_none());
    emb.finish();
    keep_or_pick_outer(&mut emb);
    emb
}

/// A 2-connected plane graph of girth at least 5 on about `n` vertices:
/// starting from a 5-circuit, paths are added inside random faces between
/// two face vertices far enough apart to create no circuit shorter than 5.
pub fn girth5_biconnected(n: usize, r: &mut impl Rng) -> RotationEmbedding {
    let mut g = SignedGraph::with_vertices(5);
    for i in 0..5 {
        g.add_edge(i, (i + 1) % 5, Sign::Positive).unwrap();
    }
    let mut faces: Vec<Vec<Vertex>> = vec![(0..5).collect(), (0..5).rev().collect()];
    let mut misses = 0;
    while g.len() < n && misses < 200 {
        let f = r.gen_range(0..faces.len());
        let m = faces[f].len();
        let a = r.gen_range(0..m);
        let b = r.gen_range(0..m);
        let (a, b) = (a.min(b), a.max(b));
        let len = r.gen_range(1..=4usize);
        let (x, y) = (faces[f][a], faces[f][b]);
        if a == b || (len == 1 && g.has_edge(x, y)) || g.len() + len - 1 > n.max(5) {
            misses += 1;
            continue;
        }
        if distance(&g, x, y) + len < 5 {
            misses += 1;
            continue;
        }
        let mut path = vec![x];
        for _ in 1..len {
            let v = g.add_vertex(&g.len().to_string()).unwrap();
            path.push(v);
        }
        path.push(y);
        for w in path.windows(2) {
            g.add_edge(w[0], w[1], Sign::Positive).unwrap();
        }
        let face = faces.swap_remove(f);
        let inner = &path[1..path.len() - 1];
        let mut one: Vec<Vertex> = face[a..=b].to_vec();
        one.extend(inner.iter().rev());
        let mut two: Vec<Vertex> = face[b..].to_vec();
        two.extend(&face[..=a]);
        two.extend(inner.iter());
        faces.push(one);
        faces.push(two);
    }
    crate::planar::embed(&g).expect("built planar")
}

fn distance(g: &SignedGraph, from: Vertex, to: Vertex) -> usize {
    let mut dist = vec![usize::MAX; g.len()];
    dist[from] = 0;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        for y in g.neighbors(x) {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist[to]
}

/// `true` when `u` and `v` are joined by a path of length 2 or 3 avoiding
/// the edge `uv`.
/// A connected plane graph with no circuit of length exactly `k >= 3`: edges
/// of a random triangulation are visited in random order and deleted while
/// they lie on a `k`-circuit. Deleted edges lie on circuits, so the graph
/// stays connected.
pub fn no_k_circuit(n: usize, k: usize, r: &mut impl Rng) -> RotationEmbedding {
    let mut emb = triangulation(n.max(3), n, r);
    let mut edges: Vec<(Vertex, Vertex, Sign)> = emb.graph().edges().collect();
    loop {
        edges.shuffle(r);
        let mut changed = false;
        for &(u, v, _) in &edges {
            if emb.graph().has_edge(u, v) && on_circuit_of_length(emb.graph(), u, v, k) {
                emb.remove_edge(u, v);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    debug_assert!(has_circuit_of_length(emb.graph(), k).is_none());
    emb.finish();
    keep_or_pick_outer(&mut emb);
    emb
}

/// Whether edge `uv` lies on a circuit of length `k`, i.e. some `u-v` path of
/// `k - 1` edges avoids it.
fn on_circuit_of_length(g: &SignedGraph, u: Vertex, v: Vertex, k: usize) -> bool {
    fn walk(g: &SignedGraph, x: Vertex, v: Vertex, left: usize, on: &mut [bool]) -> bool {
        if left == 1 {
            return g.has_edge(x, v);
        }
        let next: Vec<Vertex> = g.neighbors(x).filter(|&w| w != v && !on[w]).collect();
        for w in next {
            on[w] = true;
            let found = walk(g, w, v, left - 1, on);
            on[w] = false;
            if found {
                return true;
            }
        }
        false
    }
    let mut on = vec![false; g.len()];
    on[u] = true;
    g.neighbors(u).filter(|&w| w != v).collect::<Vec<_>>().into_iter().any(|w| {
        on[w] = true;
        let found = walk(g, w, v, k - 2, &mut on);
        on[w] = false;
        found
    })
}

fn short_detour(g: &SignedGraph, u: Vertex, v: Vertex) -> bool {
    for a in g.neighbors(u) {
        if a == v {
            continue;
        }
        if g.has_edge(a, v) {
            return true;
        }
        for b in g.neighbors(a) {
            if b != u && b != v && g.has_edge(b, v) {
                return true;
            }
        }
    }
    false
}

/// Makes each edge negative with probability `p`.
pub fn signature(g: &mut SignedGraph, p: f64, r: &mut impl Rng) {
    let edges: Vec<(Vertex, Vertex, Sign)> = g.edges().collect();
    for (u, v, _) in edges {
        let s = if r.gen_bool(p) { Sign::Negative } else { Sign::Positive };
        g.set_sign(u, v, s);
    }
}

/// Applies [`signature`] to the graph of an embedding.
pub fn sign_embedding(emb: &mut RotationEmbedding, p: f64, r: &mut impl Rng) {
    let edges: Vec<(Vertex, Vertex, Sign)> = emb.graph().edges().collect();
    for (u, v, _) in edges {
        let s = if r.gen_bool(p) { Sign::Negative } else { Sign::Positive };
        emb.set_sign(u, v, s);
    }
}

/// Uniform random `k`-subsets of `lo..=hi` for each of `n` vertices.
pub fn lists(n: usize, k: usize, lo: Color, hi: Color, r: &mut impl Rng) -> ListAssignment {
    let pool: Vec<Color> = (lo..=hi).collect();
    assert!(pool.len() >= k);
    ListAssignment::from_raw((0..n).map(|_| pool.choose_multiple(r, k).copied().collect()).collect())
}

/// A random subset of the vertices, each included with probability 1/2.
pub fn subset(n: usize, r: &mut impl Rng) -> Vec<Vertex> {
    (0..n).filter(|_| r.gen_bool(0.5)).collect()
}

fn keep_or_pick_outer(emb: &mut RotationEmbedding) {
    match emb.outer_dart() {
        Some((a, b)) if emb.graph().has_edge(a, b) => {}
        _ => emb.pick_largest_outer(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::{girth, is_near_triangulation, validate_embedding, Validity};

    #[test]
    fn triangulations_are_valid() {
        let mut r = rng(1);
        for n in 3..30 {
            let emb = triangulation(n, 2 * n, &mut r);
            assert_eq!(emb.graph().edge_count(), 3 * n - 6);
            assert_eq!(validate_embedding(&emb), Validity::Planar);
            assert!(is_near_triangulation(&emb));
        }
    }

    #[test]
    fn girth5_graphs() {
        let mut r = rng(2);
        for n in 5..40 {
            let emb = girth5(n, &mut r);
            assert!(emb.graph().is_connected());
            assert!(girth(emb.graph()).is_none_or(|g| g >= 5));
            assert_eq!(validate_embedding(&emb), Validity::Planar);
        }
    }

    #[test]
    fn biconnected_girth5_graphs() {
        let mut r = rng(4);
        for n in 5..60 {
            let emb = girth5_biconnected(n, &mut r);
            assert!(girth(emb.graph()).is_none_or(|g| g >= 5));
            assert_eq!(crate::planar::biconnected_blocks(emb.graph()).len(), 1);
            assert_eq!(validate_embedding(&emb), Validity::Planar);
        }
    }

    #[test]
    fn graphs_without_k_circuits() {
        let mut r = rng(6);
        for k in [3, 5, 6] {
            for n in 4..30 {
                let emb = no_k_circuit(n, k, &mut r);
                assert!(emb.graph().is_connected());
                assert!(has_circuit_of_length(emb.graph(), k).is_none());
                assert_eq!(validate_embedding(&emb), Validity::Planar);
            }
        }
    }

    #[test]
    fn planar_graphs_valid() {
        let mut r = rng(3);
        for n in 1..25 {
            let emb = planar(n, 0.3, &mut r);
            assert_eq!(validate_embedding(&emb), Validity::Planar);
        }
    }

    #[test]
    fn deterministic() {
        let a = triangulation(12, 20, &mut rng(9));
        let b = triangulation(12, 20, &mut rng(9));
        assert_eq!(a, b);
    }
}
