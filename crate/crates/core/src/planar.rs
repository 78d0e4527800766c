//! Plane embeddings as rotation systems.
//!
//! `rotation[v]` lists the neighbors of `v` in cyclic order. Faces are traced
//! with the rule: the dart after `u -> v` is `v -> w` where `w` follows `u` in
//! the rotation at `v`. Every dart lies on exactly one face.
//!
//! [`embed`] finds an embedding with the Demoucron–Malgrange–Pertuiset
//! path-addition algorithm, run on each biconnected block; block rotations are
//! concatenated at cut vertices.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::graph::{Sign, SignedGraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanarError {
    #[error("invalid rotation at {0}")]
    InvalidRotation(String),
    #[error("embedding is not 2-connected")]
    NotTwoConnected,
    #[error("triangulating would create a parallel edge in face {0:?}")]
    WouldCreateParallelEdge(Vec<String>),
    #[error("graph is not planar")]
    NotPlanar(NotPlanarCertificate),
}

/// Evidence that no plane embedding exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotPlanarCertificate {
    /// A simple planar graph on `v >= 3` vertices has at most `3v - 6` edges.
    EdgeBound { vertices: usize, edges: usize },
    /// During path addition in a biconnected block, a fragment had no face
    /// containing all of its attachment vertices.
    BlockedFragment { block: Vec<Vertex>, attachments: Vec<Vertex> },
}

/// A closed face walk; `walk[i] -> walk[i+1]` are the darts of the face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub walk: Vec<Vertex>,
}

impl Face {
    pub fn size(&self) -> usize {
        self.walk.len()
    }

    pub fn darts(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let n = self.walk.len();
        (0..n).map(move |i| (self.walk[i], self.walk[(i + 1) % n]))
    }

    /// `true` when no vertex repeats on the walk.
    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::new();
        self.walk.iter().all(|v| seen.insert(*v))
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.walk.contains(&v)
    }
}

/// A signed graph with a cyclic neighbor order at each vertex and a
/// designated outer face (identified by one of its darts).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationEmbedding {
    graph: SignedGraph,
    rotation: Vec<Vec<Vertex>>,
    outer: Option<(Vertex, Vertex)>,
}

impl RotationEmbedding {
    /// Checks that each rotation is a permutation of the neighbors. The outer
    /// face defaults to the largest traced face.
    pub fn new(graph: SignedGraph, rotation: Vec<Vec<Vertex>>) -> Result<Self, PlanarError> {
        if rotation.len() != graph.len() {
            return Err(PlanarError::InvalidRotation("vertex count".into()));
        }
        for v in graph.vertices() {
            let mut r = rotation[v].clone();
            r.sort_unstable();
            let n: Vec<Vertex> = graph.neighbors(v).collect();
            if r != n {
                return Err(PlanarError::InvalidRotation(graph.name(v).to_string()));
            }
        }
        let mut emb = RotationEmbedding { graph, rotation, outer: None };
        emb.normalize();
        emb.pick_largest_outer();
        Ok(emb)
    }

    pub fn graph(&self) -> &SignedGraph {
        &self.graph
    }

    pub fn into_graph(self) -> SignedGraph {
        self.graph
    }

    pub fn rotation(&self, v: Vertex) -> &[Vertex] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<Vertex>] {
        &self.rotation
    }

    pub fn outer_dart(&self) -> Option<(Vertex, Vertex)> {
        self.outer
    }

    /// Designates the face containing dart `u -> v` as outer.
    pub fn set_outer_dart(&mut self, u: Vertex, v: Vertex) -> bool {
        if self.graph.has_edge(u, v) {
            self.outer = Some((u, v));
            true
        } else {
            false
        }
    }

    /// Designates face `idx` (in [`trace_faces`] order) as outer.
    pub fn set_outer_face(&mut self, idx: usize) {
        let faces = self.faces();
        if let Some(d) = faces.get(idx).and_then(|f| f.darts().next()) {
            self.outer = Some(d);
        }
    }

    pub fn pick_largest_outer(&mut self) {
        let faces = self.faces();
        let best = faces.iter().enumerate().max_by(|a, b| a.1.size().cmp(&b.1.size()).then(b.0.cmp(&a.0)));
        self.outer = best.map(|(_, f)| (f.walk[0], f.walk[1 % f.size()]));
    }

    /// Rotations start at the smallest neighbor.
    fn normalize(&mut self) {
        for r in &mut self.rotation {
            if let Some((i, _)) = r.iter().enumerate().min_by_key(|p| p.1) {
                r.rotate_left(i);
            }
        }
    }

    /// The neighbor after `u` in the rotation at `v`.
    pub fn succ(&self, v: Vertex, u: Vertex) -> Vertex {
        let r = &self.rotation[v];
        let i = r.iter().position(|&x| x == u).expect("u is a neighbor of v");
        r[(i + 1) % r.len()]
    }

    pub fn faces(&self) -> Vec<Face> {
        trace_faces_unchecked(&self.rotation)
    }

    /// Index of the outer face in [`RotationEmbedding::faces`] order.
    pub fn outer_face_index(&self, faces: &[Face]) -> Option<usize> {
        let (a, b) = self.outer?;
        faces.iter().position(|f| f.darts().any(|d| d == (a, b)))
    }

    pub fn outer_face(&self) -> Option<Face> {
        let faces = self.faces();
        let i = self.outer_face_index(&faces)?;
        Some(faces[i].clone())
    }

    /// Inserts edge `u x` so that at `u` it follows `u_after` and at `x` it
    /// follows `x_after`. With `u_after = w[i-1]` and `x_after = w[j-1]` for a
    /// face walk `w`, the edge splits that face along the chord `w[i] w[j]`.
    pub fn insert_edge(&mut self, u: Vertex, u_after: Option<Vertex>, x: Vertex, x_after: Option<Vertex>, sign: Sign) {
        self.graph.add_edge(u, x, sign).expect("caller checks simplicity");
        insert_after(&mut self.rotation[u], u_after, x);
        insert_after(&mut self.rotation[x], x_after, u);
    }

    /// Adds the chord `walk[i] walk[j]` inside the face `walk`.
    pub fn add_chord(&mut self, walk: &[Vertex], i: usize, j: usize, sign: Sign) {
        let n = walk.len();
        let (a, b) = (walk[i], walk[j]);
        let pa = walk[(i + n - 1) % n];
        let pb = walk[(j + n - 1) % n];
        self.insert_edge(a, Some(pa), b, Some(pb), sign);
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> Option<Sign> {
        let s = self.graph.remove_edge(u, v)?;
        self.rotation[u].retain(|&x| x != v);
        self.rotation[v].retain(|&x| x != u);
        if let Some((a, b)) = self.outer {
            if (a, b) == (u, v) || (a, b) == (v, u) {
                self.outer = None;
            }
        }
        Some(s)
    }

    pub fn set_sign(&mut self, u: Vertex, v: Vertex, s: Sign) {
        self.graph.set_sign(u, v, s);
    }

    /// Adds a new vertex adjacent to every vertex of the face `walk`, placed
    /// inside that face.
    pub fn insert_vertex_in_face(&mut self, walk: &[Vertex], name: &str) -> Vertex {
        let x = self.graph.add_vertex(name).expect("fresh vertex name");
        let n = walk.len();
        self.rotation.push(Vec::new());
        for i in 0..n {
            let w = walk[i];
            let prev = walk[(i + n - 1) % n];
            self.graph.add_edge(w, x, Sign::Positive).expect("new vertex");
            insert_after(&mut self.rotation[w], Some(prev), x);
        }
        self.rotation[x] = walk.iter().rev().copied().collect();
        self.normalize();
        x
    }

    /// Mirror image: reverses every rotation.
    pub fn mirrored(&self) -> RotationEmbedding {
        let mut e = self.clone();
        for r in &mut e.rotation {
            r.reverse();
        }
        e.normalize();
        e.outer = self.outer.map(|(a, b)| (b, a));
        e
    }

    pub fn finish(&mut self) {
        self.normalize();
        if self.outer.is_none() {
            self.pick_largest_outer();
        }
    }
}

fn insert_after(r: &mut Vec<Vertex>, after: Option<Vertex>, x: Vertex) {
    match after.and_then(|a| r.iter().position(|&y| y == a)) {
        Some(i) => r.insert(i + 1, x),
        None => r.push(x),
    }
}

fn trace_faces_unchecked(rotation: &[Vec<Vertex>]) -> Vec<Face> {
    let pos: Vec<HashMap<Vertex, usize>> =
        rotation.iter().map(|r| r.iter().enumerate().map(|(i, &u)| (u, i)).collect()).collect();
    let mut used: Vec<Vec<bool>> = rotation.iter().map(|r| vec![false; r.len()]).collect();
    let mut faces = Vec::new();
    for v in 0..rotation.len() {
        for i in 0..rotation[v].len() {
            if used[v][i] {
                continue;
            }
            let mut walk = Vec::new();
            let (mut a, mut ia) = (v, i);
            while !used[a][ia] {
                used[a][ia] = true;
                walk.push(a);
                let b = rotation[a][ia];
                let j = pos[b][&a];
                let jn = (j + 1) % rotation[b].len();
                a = b;
                ia = jn;
            }
            faces.push(Face { walk });
        }
    }
    faces
}

/// Traces every face of the embedding.
pub fn trace_faces(emb: &RotationEmbedding) -> Vec<Face> {
    emb.faces()
}

/// Raw-rotation variant that reports rotation defects.
pub fn trace_faces_checked(g: &SignedGraph, rotation: &[Vec<Vertex>]) -> Result<Vec<Face>, PlanarError> {
    let emb = RotationEmbedding::new(g.clone(), rotation.to_vec())?;
    Ok(emb.faces())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    Planar,
    /// `euler_defect` is the summed shortfall `2 - (V - E + F)` over components.
    NotPlanar {
        euler_defect: i64,
    },
}

/// Checks Euler's formula on every connected component.
pub fn validate_embedding(emb: &RotationEmbedding) -> Validity {
    let g = emb.graph();
    let faces = emb.faces();
    let comps = g.components();
    let mut comp_of = vec![0; g.len()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    let mut chi: Vec<i64> = comps.iter().map(|c| c.len() as i64).collect();
    for (u, _, _) in g.edges() {
        chi[comp_of[u]] -= 1;
    }
    for f in &faces {
        chi[comp_of[f.walk[0]]] += 1;
    }
    for (i, c) in comps.iter().enumerate() {
        if c.len() == 1 {
            chi[i] += 1;
        }
    }
    let defect: i64 = chi.iter().map(|x| 2 - x).sum();
    if defect == 0 {
        Validity::Planar
    } else {
        Validity::NotPlanar { euler_defect: defect }
    }
}

pub fn is_planar_embedding(emb: &RotationEmbedding) -> bool {
    validate_embedding(emb) == Validity::Planar
}

/// Finds a plane embedding of `g`, or a certificate that none exists.
/// Deterministic for a fixed input.
pub fn embed(g: &SignedGraph) -> Result<RotationEmbedding, PlanarError> {
    let n = g.len();
    if n >= 3 && g.edge_count() > 3 * n - 6 {
        return Err(PlanarError::NotPlanar(NotPlanarCertificate::EdgeBound { vertices: n, edges: g.edge_count() }));
    }
    let mut rotation: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    for block in biconnected_blocks(g) {
        let local = if block.len() == 2 {
            let (a, b) = (block[0], block[1]);
            let mut m = HashMap::new();
            m.insert(a, vec![b]);
            m.insert(b, vec![a]);
            m
        } else {
            embed_block(g, &block)?
        };
        for &v in &block {
            rotation[v].extend(local[&v].iter().copied());
        }
    }
    let emb = RotationEmbedding::new(g.clone(), rotation)?;
    debug_assert!(is_planar_embedding(&emb));
    Ok(emb)
}

/// Biconnected blocks (vertex lists, sorted); bridges appear as 2-vertex blocks.
/// Isolated vertices belong to no block.
pub fn biconnected_blocks(g: &SignedGraph) -> Vec<Vec<Vertex>> {
    let n = g.len();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut stack: Vec<(Vertex, Vertex)> = Vec::new();
    let mut blocks = Vec::new();
    let adj: Vec<Vec<Vertex>> = g.vertices().map(|v| g.neighbors(v).collect()).collect();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, parent, next neighbor index)
        let mut frames: Vec<(Vertex, Vertex, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&mut (v, parent, ref mut idx)) = frames.last_mut() {
            if *idx < adj[v].len() {
                let w = adj[v][*idx];
                *idx += 1;
                if w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    stack.push((v, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    frames.push((w, v, 0));
                } else if disc[w] < disc[v] {
                    stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                frames.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] >= disc[parent] {
                        let mut verts = BTreeSet::new();
                        while let Some((a, b)) = stack.pop() {
                            verts.insert(a);
                            verts.insert(b);
                            if (a, b) == (parent, v) {
                                break;
                            }
                        }
                        blocks.push(verts.into_iter().collect());
                    }
                }
            }
        }
    }
    blocks.sort();
    blocks
}

/// Path addition on a 2-connected block. Returns the rotation of each block
/// vertex restricted to block edges.
fn embed_block(g: &SignedGraph, block: &[Vertex]) -> Result<HashMap<Vertex, Vec<Vertex>>, PlanarError> {
    let in_block: HashSet<Vertex> = block.iter().copied().collect();
    let nb = |v: Vertex| g.neighbors(v).filter(|w| in_block.contains(w));
    let key = |a: Vertex, b: Vertex| if a < b { (a, b) } else { (b, a) };

    let cycle = find_cycle(g, block, &in_block);
    let mut in_h: HashSet<Vertex> = cycle.iter().copied().collect();
    let mut h_edges: HashSet<(Vertex, Vertex)> = HashSet::new();
    for i in 0..cycle.len() {
        h_edges.insert(key(cycle[i], cycle[(i + 1) % cycle.len()]));
    }
    let mut faces: Vec<Vec<Vertex>> = vec![cycle.clone(), cycle.iter().rev().copied().collect()];
    let total_edges: usize = block.iter().map(|&v| nb(v).count()).sum::<usize>() / 2;

    while h_edges.len() < total_edges {
        // fragments: (attachments, path between two attachments)
        let mut fragments: Vec<(Vec<Vertex>, Vec<Vertex>)> = Vec::new();
        for &u in block {
            if !in_h.contains(&u) {
                continue;
            }
            for w in nb(u) {
                if u < w && in_h.contains(&w) && !h_edges.contains(&(u, w)) {
                    fragments.push((vec![u, w], vec![u, w]));
                }
            }
        }
        let mut seen: HashSet<Vertex> = HashSet::new();
        for &s in block {
            if in_h.contains(&s) || seen.contains(&s) {
                continue;
            }
            let mut comp = vec![s];
            seen.insert(s);
            let mut queue = VecDeque::from([s]);
            let mut attach = BTreeSet::new();
            while let Some(u) = queue.pop_front() {
                for w in nb(u) {
                    if in_h.contains(&w) {
                        attach.insert(w);
                    } else if seen.insert(w) {
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            let attach: Vec<Vertex> = attach.into_iter().collect();
            let comp_set: HashSet<Vertex> = comp.iter().copied().collect();
            let path = fragment_path(g, &comp_set, &in_h, &attach, &in_block);
            fragments.push((attach, path));
        }

        let mut choice: Option<(usize, usize)> = None;
        for (fi, (attach, _)) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter(|(_, f)| attach.iter().all(|a| f.contains(a)))
                .map(|(i, _)| i)
                .collect();
            if admissible.is_empty() {
                return Err(PlanarError::NotPlanar(NotPlanarCertificate::BlockedFragment {
                    block: block.to_vec(),
                    attachments: attach.clone(),
                }));
            }
            if admissible.len() == 1 {
                choice = Some((fi, admissible[0]));
                break;
            }
            if choice.is_none() {
                choice = Some((fi, admissible[0]));
            }
        }
        let (fi, face_idx) = choice.expect("at least one fragment while edges remain");
        let path = fragments[fi].1.clone();
        let face = faces.swap_remove(face_idx);
        let (a, b) = (path[0], *path.last().unwrap());
        let ia = face.iter().position(|&x| x == a).unwrap();
        let ib = face.iter().position(|&x| x == b).unwrap();
        let k = face.len();
        let arc = |from: usize, to: usize| {
            let mut out = Vec::new();
            let mut i = from;
            loop {
                out.push(face[i]);
                if i == to {
                    break;
                }
                i = (i + 1) % k;
            }
            out
        };
        let inner = &path[1..path.len() - 1];
        let mut f1 = arc(ia, ib);
        f1.extend(inner.iter().rev());
        let mut f2 = arc(ib, ia);
        f2.extend(inner.iter());
        faces.push(f1);
        faces.push(f2);
        for w in path.windows(2) {
            h_edges.insert(key(w[0], w[1]));
        }
        in_h.extend(inner.iter().copied());
    }

    // succ maps from oriented faces
    let mut succ: HashMap<Vertex, HashMap<Vertex, Vertex>> = HashMap::new();
    for f in &faces {
        let k = f.len();
        for i in 0..k {
            let (p, v, nx) = (f[(i + k - 1) % k], f[i], f[(i + 1) % k]);
            succ.entry(v).or_default().insert(p, nx);
        }
    }
    let mut out = HashMap::new();
    for &v in block {
        let m = &succ[&v];
        let start = *m.keys().min().unwrap();
        let mut r = vec![start];
        let mut x = m[&start];
        while x != start {
            r.push(x);
            x = m[&x];
        }
        out.insert(v, r);
    }
    Ok(out)
}

/// Some cycle of a 2-connected block: a non-tree edge of a BFS tree closed
/// through the tree paths to the common ancestor.
fn find_cycle(g: &SignedGraph, block: &[Vertex], in_block: &HashSet<Vertex>) -> Vec<Vertex> {
    let root = block[0];
    let mut parent: HashMap<Vertex, Vertex> = HashMap::new();
    let mut depth: HashMap<Vertex, usize> = HashMap::new();
    depth.insert(root, 0);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for w in g.neighbors(u).filter(|w| in_block.contains(w)) {
            if !depth.contains_key(&w) {
                depth.insert(w, depth[&u] + 1);
                parent.insert(w, u);
                queue.push_back(w);
            } else if parent.get(&u) != Some(&w) {
                let (mut a, mut b) = (u, w);
                let mut left = vec![a];
                let mut right = vec![b];
                while depth[&a] > depth[&b] {
                    a = parent[&a];
                    left.push(a);
                }
                while depth[&b] > depth[&a] {
                    b = parent[&b];
                    right.push(b);
                }
                while a != b {
                    a = parent[&a];
                    b = parent[&b];
                    left.push(a);
                    right.push(b);
                }
                right.pop();
                right.reverse();
                left.extend(right);
                return left;
            }
        }
    }
    unreachable!("2-connected block with >= 3 vertices has a cycle")
}

/// A path from the first attachment through the fragment interior to another
/// attachment.
fn fragment_path(
    g: &SignedGraph,
    comp: &HashSet<Vertex>,
    in_h: &HashSet<Vertex>,
    attach: &[Vertex],
    in_block: &HashSet<Vertex>,
) -> Vec<Vertex> {
    let a = attach[0];
    let mut prev: HashMap<Vertex, Vertex> = HashMap::new();
    let mut queue = VecDeque::new();
    for w in g.neighbors(a) {
        if comp.contains(&w) && !prev.contains_key(&w) {
            prev.insert(w, a);
            queue.push_back(w);
        }
    }
    while let Some(u) = queue.pop_front() {
        for w in g.neighbors(u).filter(|w| in_block.contains(w)) {
            if w != a && in_h.contains(&w) {
                let mut path = vec![w, u];
                let mut x = u;
                while prev[&x] != a {
                    x = prev[&x];
                    path.push(x);
                }
                path.push(a);
                path.reverse();
                return path;
            }
            if comp.contains(&w) && !prev.contains_key(&w) {
                prev.insert(w, u);
                queue.push_back(w);
            }
        }
    }
    unreachable!("fragment of a 2-connected block has two attachments")
}

/// Finds a circuit of length exactly `k`, if any.
pub fn has_circuit_of_length(g: &SignedGraph, k: usize) -> Option<Vec<Vertex>> {
    if k < 3 {
        return None;
    }
    fn extend(g: &SignedGraph, k: usize, path: &mut Vec<Vertex>, on: &mut [bool]) -> bool {
        let s = path[0];
        let last = *path.last().unwrap();
        if path.len() == k {
            return g.has_edge(last, s);
        }
        for w in g.neighbors(last) {
            if w > s && !on[w] {
                on[w] = true;
                path.push(w);
                if extend(g, k, path, on) {
                    return true;
                }
                path.pop();
                on[w] = false;
            }
        }
        false
    }
    let mut on = vec![false; g.len()];
    for s in g.vertices() {
        let mut path = vec![s];
        on[s] = true;
        if extend(g, k, &mut path, &mut on) {
            return Some(path);
        }
        on[s] = false;
    }
    None
}

/// Length of a shortest circuit, `None` for forests.
pub fn girth(g: &SignedGraph) -> Option<usize> {
    let mut best: Option<usize> = None;
    for s in g.vertices() {
        let mut dist = vec![usize::MAX; g.len()];
        let mut parent = vec![usize::MAX; g.len()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    let c = dist[u] + dist[w] + 1;
                    best = Some(best.map_or(c, |b| b.min(c)));
                }
            }
        }
    }
    best
}

/// Repeatedly removes a minimum-degree vertex (lowest id on ties). Returns the
/// largest degree seen at removal time and the removal order.
pub fn degeneracy_order(g: &SignedGraph) -> (usize, Vec<Vertex>) {
    let n = g.len();
    let mut deg: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut d = 0;
    for _ in 0..n {
        let v = (0..n).filter(|&v| !removed[v]).min_by_key(|&v| (deg[v], v)).unwrap();
        d = d.max(deg[v]);
        removed[v] = true;
        order.push(v);
        for w in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
            }
        }
    }
    (d, order)
}

/// Joins the components of the embedding with positive edges between their
/// smallest vertices.
pub fn connect_components(emb: &mut RotationEmbedding) {
    let comps = emb.graph().components();
    for c in comps.iter().skip(1) {
        let (u, x) = (comps[0][0], c[0]);
        let ua = emb.rotation(u).first().copied();
        let xa = emb.rotation(x).first().copied();
        emb.insert_edge(u, ua, x, xa, Sign::Positive);
    }
    emb.normalize();
}

/// Adds positive edges across cut vertices until every face is bounded by a
/// circuit. Requires a connected embedding with at least three vertices.
pub fn make_biconnected(emb: &mut RotationEmbedding) -> Result<(), PlanarError> {
    if emb.graph().len() < 3 || !emb.graph().is_connected() {
        return Err(PlanarError::NotTwoConnected);
    }
    'outer: loop {
        let faces = emb.faces();
        for f in &faces {
            let w = &f.walk;
            let k = w.len();
            let mut seen = HashSet::new();
            for i in 0..k {
                if seen.insert(w[i]) {
                    continue;
                }
                // w[i] repeats: cut the corner w[i-1] w[i] w[i+1]
                let (a, c) = (w[(i + k - 1) % k], w[(i + 1) % k]);
                if a != c && !emb.graph().has_edge(a, c) {
                    emb.add_chord(w, (i + k - 1) % k, (i + 1) % k, Sign::Positive);
                    continue 'outer;
                }
            }
            // second pass from the other end catches repeats hidden by the start point
            let mut seen = HashSet::new();
            for i in (0..k).rev() {
                if seen.insert(w[i]) {
                    continue;
                }
                let (a, c) = (w[(i + k - 1) % k], w[(i + 1) % k]);
                if a != c && !emb.graph().has_edge(a, c) {
                    emb.add_chord(w, (i + k - 1) % k, (i + 1) % k, Sign::Positive);
                    continue 'outer;
                }
            }
            if !f.is_simple() {
                return Err(PlanarError::NotTwoConnected);
            }
        }
        break;
    }
    emb.normalize();
    Ok(())
}

/// Triangulates every bounded face with positive chords, fanning from the
/// lowest-id face vertex whose fan would not duplicate an existing edge.
pub fn triangulate_interior(emb: &RotationEmbedding) -> Result<RotationEmbedding, PlanarError> {
    let mut out = emb.clone();
    if out.outer.is_none() {
        out.pick_largest_outer();
    }
    let faces = out.faces();
    if out.graph().len() < 3 || !out.graph().is_connected() || faces.iter().any(|f| !f.is_simple()) {
        return Err(PlanarError::NotTwoConnected);
    }
    loop {
        let faces = out.faces();
        let outer = out.outer_face_index(&faces);
        let target = faces.iter().enumerate().find(|(i, f)| Some(*i) != outer && f.size() > 3);
        let Some((_, face)) = target else { break };
        let w = &face.walk;
        let k = w.len();
        let mut cands: Vec<usize> = (0..k).collect();
        cands.sort_by_key(|&i| w[i]);
        let pick = cands
            .iter()
            .copied()
            .find(|&j| (2..k - 1).all(|d| !out.graph().has_edge(w[j], w[(j + d) % k])))
            .or_else(|| cands.iter().copied().find(|&j| !out.graph().has_edge(w[j], w[(j + 2) % k])));
        let Some(j) = pick else {
            return Err(PlanarError::WouldCreateParallelEdge(
                w.iter().map(|&v| out.graph().name(v).to_string()).collect(),
            ));
        };
        let w = w.clone();
        out.add_chord(&w, j, (j + 2) % k, Sign::Positive);
    }
    out.normalize();
    Ok(out)
}

/// `true` when every face other than the outer one is a triangle.
pub fn is_near_triangulation(emb: &RotationEmbedding) -> bool {
    let faces = emb.faces();
    let outer = emb.outer_face_index(&faces);
    faces.iter().enumerate().all(|(i, f)| Some(i) == outer || f.size() == 3)
}

/// The embedding induced on the vertices marked in `keep`, renumbered in
/// increasing order. The outer face is the one containing the original outer
/// region. Also returns the map from new to old vertex ids.
pub fn induced_embedding(emb: &RotationEmbedding, keep: &[bool]) -> (RotationEmbedding, Vec<Vertex>) {
    let (h, new_to_old) = emb.graph().induced(keep);
    let mut old_to_new = vec![usize::MAX; keep.len()];
    for (i, &v) in new_to_old.iter().enumerate() {
        old_to_new[v] = i;
    }
    let rotation = new_to_old
        .iter()
        .map(|&v| emb.rotation(v).iter().filter(|&&w| keep[w]).map(|&w| old_to_new[w]).collect())
        .collect();
    let mut out = RotationEmbedding::new(h, rotation).expect("restriction of a valid rotation");
    if let Some((a, b)) = SubView::new(emb, keep).outer_dart() {
        out.set_outer_dart(old_to_new[a], old_to_new[b]);
    }
    (out, new_to_old)
}

/// An induced subgraph of an embedding, given by an activity mask; its
/// rotation is the global rotation with inactive vertices skipped.
#[derive(Debug, Clone, Copy)]
pub struct SubView<'a> {
    pub emb: &'a RotationEmbedding,
    pub active: &'a [bool],
}

impl<'a> SubView<'a> {
    pub fn new(emb: &'a RotationEmbedding, active: &'a [bool]) -> Self {
        SubView { emb, active }
    }

    pub fn graph(&self) -> &SignedGraph {
        self.emb.graph()
    }

    pub fn is_active(&self, v: Vertex) -> bool {
        self.active[v]
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.active.len()).filter(move |&v| self.active[v])
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.emb.rotation(v).iter().copied().filter(move |&w| self.active[w])
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbors(v).count()
    }

    /// Active neighbor after `u` in the rotation at `v`.
    pub fn succ(&self, v: Vertex, u: Vertex) -> Vertex {
        let r = self.emb.rotation(v);
        let i = r.iter().position(|&x| x == u).expect("neighbor");
        (1..=r.len()).map(|d| r[(i + d) % r.len()]).find(|&w| self.active[w]).expect("u itself is active")
    }

    /// Active neighbors strictly between `from` and `to` going forward in the
    /// rotation at `v`.
    pub fn between(&self, v: Vertex, from: Vertex, to: Vertex) -> Vec<Vertex> {
        let r = self.emb.rotation(v);
        let i = r.iter().position(|&x| x == from).expect("neighbor");
        let mut out = Vec::new();
        for d in 1..r.len() {
            let w = r[(i + d) % r.len()];
            if w == to {
                break;
            }
            if self.active[w] {
                out.push(w);
            }
        }
        out
    }

    pub fn face_from(&self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        let mut walk = Vec::new();
        let (mut a, mut b) = (u, v);
        loop {
            walk.push(a);
            let c = self.succ(b, a);
            a = b;
            b = c;
            if (a, b) == (u, v) {
                break;
            }
        }
        walk
    }

    pub fn faces(&self) -> Vec<Face> {
        let mut used: HashSet<(Vertex, Vertex)> = HashSet::new();
        let mut faces = Vec::new();
        for v in self.vertices() {
            for w in self.neighbors(v).collect::<Vec<_>>() {
                if used.contains(&(v, w)) {
                    continue;
                }
                let walk = self.face_from(v, w);
                let k = walk.len();
                for i in 0..k {
                    used.insert((walk[i], walk[(i + 1) % k]));
                }
                faces.push(Face { walk });
            }
        }
        faces
    }

    /// A dart of the face of this subgraph that contains the embedding's
    /// outer region. Faces of the full embedding are merged across every edge
    /// with an inactive end; the class of the outer face is then located on
    /// the active darts.
    pub fn outer_dart(&self) -> Option<(Vertex, Vertex)> {
        let faces = self.emb.faces();
        let outer = self.emb.outer_face_index(&faces)?;
        let mut face_of: HashMap<(Vertex, Vertex), usize> = HashMap::new();
        for (i, f) in faces.iter().enumerate() {
            for d in f.darts() {
                face_of.insert(d, i);
            }
        }
        let mut uf: Vec<usize> = (0..faces.len()).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while uf[r] != r {
                r = uf[r];
            }
            let mut y = x;
            while uf[y] != r {
                let n = uf[y];
                uf[y] = r;
                y = n;
            }
            r
        }
        for (u, v, _) in self.graph().edges() {
            if !(self.active[u] && self.active[v]) {
                let a = find(&mut uf, face_of[&(u, v)]);
                let b = find(&mut uf, face_of[&(v, u)]);
                uf[a] = b;
            }
        }
        let root = find(&mut uf, outer);
        for (i, f) in faces.iter().enumerate() {
            if find(&mut uf, i) != root {
                continue;
            }
            for (a, b) in f.darts() {
                if self.active[a] && self.active[b] {
                    return Some((a, b));
                }
            }
        }
        None
    }
}

/// Small named graphs used by tests and examples.
pub mod fixtures {
    use super::*;

    pub fn graph_from_edges(n: usize, edges: &[(usize, usize)]) -> SignedGraph {
        let mut g = SignedGraph::with_vertices(n);
        for &(u, v) in edges {
            g.add_edge(u, v, Sign::Positive).unwrap();
        }
        g
    }

    pub fn complete(n: usize) -> SignedGraph {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        graph_from_edges(n, &e)
    }

    pub fn cube() -> SignedGraph {
        graph_from_edges(
            8,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7)],
        )
    }

    pub fn dodecahedron() -> SignedGraph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((i + 5, 10 + i));
            e.push((i + 5, 10 + (i + 4) % 5));
            e.push((15 + i, 15 + (i + 1) % 5));
            e.push((10 + i, 15 + i));
        }
        graph_from_edges(20, &e)
    }

    pub fn petersen() -> SignedGraph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        graph_from_edges(10, &e)
    }

    pub fn octahedron() -> SignedGraph {
        let mut e = Vec::new();
        for i in 0..6 {
            for j in i + 1..6 {
                if j != i + 3 {
                    e.push((i, j));
                }
            }
        }
        graph_from_edges(6, &e)
    }

    pub fn icosahedron() -> SignedGraph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((0, 1 + i));
            e.push((1 + i, 1 + (i + 1) % 5));
            e.push((1 + i, 6 + i));
            e.push((1 + i, 6 + (i + 4) % 5));
            e.push((6 + i, 6 + (i + 1) % 5));
            e.push((6 + i, 11));
        }
        graph_from_edges(12, &e)
    }

    /// Lengths of all simple cycles, by brute-force path enumeration.
    pub fn all_cycle_lengths(g: &SignedGraph) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        fn go(g: &SignedGraph, path: &mut Vec<Vertex>, on: &mut Vec<bool>, out: &mut BTreeSet<usize>) {
            let s = path[0];
            let last = *path.last().unwrap();
            for w in g.neighbors(last) {
                if w == s && path.len() >= 3 {
                    out.insert(path.len());
                }
                if w > s && !on[w] {
                    on[w] = true;
                    path.push(w);
                    go(g, path, on, out);
                    path.pop();
                    on[w] = false;
                }
            }
        }
        for s in g.vertices() {
            let mut on = vec![false; g.len()];
            on[s] = true;
            go(g, &mut vec![s], &mut on, &mut out);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn sizes(emb: &RotationEmbedding) -> Vec<usize> {
        let mut s: Vec<usize> = emb.faces().iter().map(Face::size).collect();
        s.sort_unstable();
        s
    }

    #[test]
    fn k4_faces() {
        let emb = embed(&complete(4)).unwrap();
        assert_eq!(sizes(&emb), vec![3, 3, 3, 3]);
        assert_eq!(validate_embedding(&emb), Validity::Planar);
    }

    #[test]
    fn cube_faces() {
        let emb = embed(&cube()).unwrap();
        assert_eq!(sizes(&emb), vec![4; 6]);
    }

    #[test]
    fn single_edge_face() {
        let emb = embed(&graph_from_edges(2, &[(0, 1)])).unwrap();
        assert_eq!(sizes(&emb), vec![2]);
        assert_eq!(validate_embedding(&emb), Validity::Planar);
    }

    #[test]
    fn k5_and_k33_rejected() {
        assert!(matches!(embed(&complete(5)), Err(PlanarError::NotPlanar(_))));
        let k33 = graph_from_edges(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]);
        assert!(matches!(embed(&k33), Err(PlanarError::NotPlanar(_))));
        assert!(matches!(embed(&petersen()), Err(PlanarError::NotPlanar(_))));
    }

    #[test]
    fn k5_canonical_rotation_fails_euler() {
        let g = complete(5);
        let rot: Vec<Vec<Vertex>> = (0..5).map(|v| g.neighbors(v).collect()).collect();
        let emb = RotationEmbedding::new(g, rot).unwrap();
        assert!(matches!(validate_embedding(&emb), Validity::NotPlanar { .. }));
    }

    #[test]
    fn forest_is_planar() {
        let g = graph_from_edges(5, &[(0, 1), (1, 2), (3, 4)]);
        let emb = embed(&g).unwrap();
        assert_eq!(validate_embedding(&emb), Validity::Planar);
    }

    #[test]
    fn invalid_rotation_rejected() {
        let g = complete(3);
        assert!(matches!(
            RotationEmbedding::new(g, vec![vec![1], vec![0, 2], vec![0, 1]]),
            Err(PlanarError::InvalidRotation(_))
        ));
    }

    #[test]
    fn face_sizes_sum_to_twice_edges() {
        for g in [complete(4), cube(), dodecahedron(), octahedron(), icosahedron()] {
            let emb = embed(&g).unwrap();
            let total: usize = emb.faces().iter().map(Face::size).sum();
            assert_eq!(total, 2 * g.edge_count());
            assert_eq!(validate_embedding(&emb), Validity::Planar);
        }
    }

    #[test]
    fn circuit_lengths() {
        assert!(has_circuit_of_length(&cube(), 3).is_none());
        let c = has_circuit_of_length(&cube(), 4).unwrap();
        assert_eq!(c.len(), 4);
        let d = dodecahedron();
        assert!(has_circuit_of_length(&d, 3).is_none());
        assert!(has_circuit_of_length(&d, 4).is_none());
        assert!(has_circuit_of_length(&d, 5).is_some());
        assert_eq!(girth(&d), Some(5));
        assert_eq!(girth(&cube()), Some(4));
        assert_eq!(girth(&graph_from_edges(3, &[(0, 1), (1, 2)])), None);
    }

    #[test]
    fn degeneracy_examples() {
        let tree = graph_from_edges(6, &[(0, 1), (0, 2), (2, 3), (2, 4), (4, 5)]);
        assert_eq!(degeneracy_order(&tree).0, 1);
        assert_eq!(degeneracy_order(&complete(4)).0, 3);
        let (d, order) = degeneracy_order(&icosahedron());
        assert_eq!(d, 5);
        assert_eq!(order.len(), 12);
    }

    #[test]
    fn triangulate_c5() {
        let g = graph_from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let emb = embed(&g).unwrap();
        let t = triangulate_interior(&emb).unwrap();
        assert_eq!(t.graph().edge_count(), 7);
        let faces = t.faces();
        let outer = t.outer_face_index(&faces).unwrap();
        assert_eq!(faces[outer].size(), 5);
        assert_eq!(faces.len() - 1, 3);
        assert!(is_near_triangulation(&t));
        // fan from vertex 0
        assert!(t.graph().has_edge(0, 2) && t.graph().has_edge(0, 3));
    }

    #[test]
    fn triangulate_idempotent() {
        let emb = embed(&complete(4)).unwrap();
        let t = triangulate_interior(&emb).unwrap();
        assert_eq!(t, emb);
    }

    #[test]
    fn triangulate_cube() {
        let mut g = cube();
        g.set_sign(0, 1, Sign::Negative);
        let emb = embed(&g).unwrap();
        let t = triangulate_interior(&emb).unwrap();
        assert_eq!(t.graph().edge_count(), 17);
        assert!(is_near_triangulation(&t));
        assert_eq!(validate_embedding(&t), Validity::Planar);
        assert_eq!(t.graph().sign(0, 1), Some(Sign::Negative));
        assert_eq!(t.graph().negative_edge_count(), 1);
    }

    #[test]
    fn triangulate_requires_biconnected() {
        let g = graph_from_edges(3, &[(0, 1), (1, 2)]);
        let emb = embed(&g).unwrap();
        assert_eq!(triangulate_interior(&emb), Err(PlanarError::NotTwoConnected));
    }

    #[test]
    fn biconnect_then_triangulate_tree() {
        let g = graph_from_edges(7, &[(0, 1), (0, 2), (0, 3), (3, 4), (4, 5), (4, 6)]);
        let mut emb = embed(&g).unwrap();
        make_biconnected(&mut emb).unwrap();
        assert!(emb.faces().iter().all(Face::is_simple));
        emb.pick_largest_outer();
        let t = triangulate_interior(&emb).unwrap();
        assert!(is_near_triangulation(&t));
        assert_eq!(validate_embedding(&t), Validity::Planar);
    }

    #[test]
    fn blocks_of_bowtie() {
        let g = graph_from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]);
        assert_eq!(biconnected_blocks(&g), vec![vec![0, 1, 2], vec![2, 3, 4]]);
        let emb = embed(&g).unwrap();
        assert_eq!(validate_embedding(&emb), Validity::Planar);
    }

    #[test]
    fn subview_outer_dart_after_deletion() {
        let g = complete(4);
        let mut emb = embed(&g).unwrap();
        // put vertex 3 inside by making face 0,1,2 outer
        let faces = emb.faces();
        let i = faces.iter().position(|f| !f.contains(3)).unwrap();
        emb.set_outer_face(i);
        let mut active = vec![true; 4];
        active[3] = false;
        let view = SubView::new(&emb, &active);
        let (a, b) = view.outer_dart().unwrap();
        let walk = view.face_from(a, b);
        assert_eq!(walk.len(), 3);
        // the outer walk of the triangle matches the original outer walk
        let orig = emb.outer_face().unwrap();
        assert!(orig.darts().any(|d| d == (a, b)));
    }

    #[test]
    fn circuit_search_matches_brute_force() {
        for g in [complete(5), cube(), petersen(), dodecahedron(), octahedron(), icosahedron()] {
            let lengths = all_cycle_lengths(&g);
            for k in 3..=g.len() {
                let found = has_circuit_of_length(&g, k);
                assert_eq!(found.is_some(), lengths.contains(&k), "k = {k}");
                if let Some(c) = found {
                    assert_eq!(c.len(), k);
                    for i in 0..k {
                        assert!(g.has_edge(c[i], c[(i + 1) % k]));
                    }
                }
            }
            assert_eq!(girth(&g), lengths.first().copied());
        }
    }
}
