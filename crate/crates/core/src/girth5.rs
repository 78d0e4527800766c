//! Three-list coloring of signed plane graphs without 3- and 4-circuits.
//!
//! [`extend_path_girth5`] extends a precoloring of a short path `P` on the
//! outer boundary `D`. An instance is an active vertex set; its colored
//! vertices form `P`. Every instance handed to the recursion satisfies:
//!
//! * `P` is a path or circuit of at most 6 vertices on `D`;
//! * uncolored lists have at least 2 colors on `D` and 3 inside;
//! * no edge joins two vertices with at most two colors, except inside `P`.
//!
//! This is audited on entry; a failed audit is an implementation bug.
//! Reductions are tried in a fixed order: splitting at the colored vertices,
//! end blocks, a fully or almost fully precolored boundary, boundary chords,
//! short separating circuits, 2-paths and 3-paths through the interior, and
//! finally the coloring of the three boundary vertices after `P`.
//!
//! "Deleting" a colored vertex removes its product color `c(x)·σ(xv)` from
//! the list of each uncolored neighbor `v`. Whenever a color is chosen
//! freely, the smallest allowed one is used.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::graph::{verify_coloring, Color, Coloring, ListAssignment, SignedGraph, Vertex};
use crate::planar::{
    biconnected_blocks, embed, has_circuit_of_length, induced_embedding, NotPlanarCertificate, PlanarError,
    RotationEmbedding, SubView,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Girth5Error {
    #[error("graph is not planar")]
    NotPlanar(NotPlanarCertificate),
    #[error("graph has a circuit of length {}", .0.len())]
    GirthTooSmall(Vec<Vertex>),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("internal invariant broken: {0}")]
    InternalInvariantBroken(String),
}

/// Reduction kinds, in the order they are tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    /// The uncolored vertices are split into parts at the colored ones.
    Split,
    /// An instance without precolored vertex gets one.
    Seed,
    /// One uncolored vertex remains.
    Single,
    /// A single precolored vertex is joined by its boundary successor.
    Grow,
    /// An end block avoiding `P` is colored after the rest of the graph.
    EndBlock,
    /// `P` is the whole boundary; one of its vertices is deleted.
    WholeBoundary,
    /// At most two boundary vertices lie outside `P`; they are colored.
    ShortRemainder,
    /// A chord of the boundary splits the instance.
    Chord,
    /// A circuit of length at most 6 with vertices inside it.
    SeparatingCircuit,
    /// A path `v_i u v_j` with `u` inside splits the instance.
    TwoPath,
    /// A path `v_i u w v_j` with `u, w` inside splits the instance.
    ThreePath,
    /// `v_{q+2}` has at least 3 colors: `v_q` is deleted.
    DropLast,
    /// `v_{q+2}` has 2 colors, `v_{q+4}` at least 3: `v_{q+1}, v_{q+2}` are colored.
    ColorTwo,
    /// `v_{q+2}` and `v_{q+4}` have at most 2 colors: `v_{q+1..q+3}` are colored.
    ColorThree,
}

/// Statistics of one run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub steps: BTreeMap<Step, usize>,
    /// Final steps where the vertex joined to `v_4, v_7` (or `v_3, v_k`)
    /// and the `v_{q+1} w z v_{q+3}` path occur together.
    pub flagged: usize,
    pub audits: usize,
    pub max_depth: usize,
}

enum Task {
    Extend { active: Vec<bool>, depth: usize },
    Settle { active: Vec<bool>, deleted: Vec<Vertex>, two_colored: bool, depth: usize },
}

struct Run<'a> {
    emb: &'a RotationEmbedding,
    lists: Vec<Vec<Color>>,
    color: Vec<Option<Color>>,
    trace: Trace,
}

/// A split of an instance into `g1` (solved first) and `g2`.
struct Cut {
    g1: Vec<bool>,
    g2: Vec<bool>,
    size2: usize,
}

fn broken(msg: impl Into<String>) -> Girth5Error {
    Girth5Error::InternalInvariantBroken(msg.into())
}

fn violated(msg: impl Into<String>) -> Girth5Error {
    Girth5Error::PreconditionViolated(msg.into())
}

fn count(mask: &[bool]) -> usize {
    mask.iter().filter(|&&b| b).count()
}

impl Run<'_> {
    fn g(&self) -> &SignedGraph {
        self.emb.graph()
    }

    fn name(&self, v: Vertex) -> String {
        self.g().name(v).to_string()
    }

    fn is_colored(&self, v: Vertex) -> bool {
        self.color[v].is_some()
    }

    /// List size, counting a colored vertex as having one color.
    fn size(&self, v: Vertex) -> usize {
        if self.is_colored(v) {
            1
        } else {
            self.lists[v].len()
        }
    }

    fn bump(&mut self, s: Step) {
        *self.trace.steps.entry(s).or_default() += 1;
    }

    /// Colors `v` with the smallest color of its list avoiding the product
    /// colors of its colored active neighbors and `banned`.
    fn color_vertex(&mut self, v: Vertex, active: &[bool], banned: &[Color]) -> Result<Color, Girth5Error> {
        let forbidden: Vec<Color> = self
            .g()
            .signed_neighbors(v)
            .filter(|&(u, _)| active[u])
            .filter_map(|(u, s)| self.color[u].map(|c| s.apply(c)))
            .chain(banned.iter().copied())
            .collect();
        let c = self.lists[v]
            .iter()
            .copied()
            .find(|c| !forbidden.contains(c))
            .ok_or_else(|| broken(format!("no color left for {}", self.name(v))))?;
        self.color[v] = Some(c);
        self.lists[v] = vec![c];
        Ok(c)
    }

    /// Removes the colored vertex `d` and its product colors.
    fn delete(&mut self, d: Vertex, active: &mut [bool]) {
        let c = self.color[d].expect("deleted vertices are colored");
        let nbrs: Vec<_> = self.g().signed_neighbors(d).collect();
        for (x, s) in nbrs {
            if active[x] && !self.is_colored(x) {
                let f = s.apply(c);
                self.lists[x].retain(|&y| y != f);
            }
        }
        active[d] = false;
    }

    fn outer_walk(&self, active: &[bool]) -> Vec<Vertex> {
        let view = SubView::new(self.emb, active);
        match view.outer_dart() {
            Some((a, b)) => view.face_from(a, b),
            None => view.vertices().take(1).collect(),
        }
    }

    /// Smallest connected set of colored vertices containing `s`.
    fn span(&self, s: &[Vertex], colored: &[bool]) -> Vec<Vertex> {
        if s.is_empty() {
            return Vec::new();
        }
        let n = colored.len();
        let mut keep = vec![false; n];
        let mut queue: VecDeque<Vertex> = s.iter().copied().collect();
        for &x in s {
            keep[x] = true;
        }
        while let Some(x) = queue.pop_front() {
            for y in self.g().neighbors(x) {
                if colored[y] && !keep[y] {
                    keep[y] = true;
                    queue.push_back(y);
                }
            }
        }
        let mut in_s = vec![false; n];
        for &x in s {
            in_s[x] = true;
        }
        let deg = |keep: &[bool], x: Vertex| self.g().neighbors(x).filter(|&y| keep[y]).count();
        loop {
            let leaf = (0..n).find(|&x| keep[x] && !in_s[x] && deg(&keep, x) <= 1);
            match leaf {
                Some(x) => keep[x] = false,
                None => break,
            }
        }
        let optional: Vec<Vertex> = (0..n).filter(|&x| keep[x] && !in_s[x]).collect();
        if optional.len() > 16 {
            return (0..n).filter(|&x| keep[x]).collect();
        }
        // smallest connected superset of s, lowest ids first among equals
        let mut masks: Vec<u32> = (0..1u32 << optional.len()).collect();
        masks.sort_by_key(|&m| (m.count_ones(), std::cmp::Reverse(m.reverse_bits())));
        for m in masks {
            let mut set = in_s.clone();
            for (b, &x) in optional.iter().enumerate() {
                set[x] = m >> b & 1 == 1;
            }
            if self.connected(&set) {
                return (0..n).filter(|&x| set[x]).collect();
            }
        }
        (0..n).filter(|&x| keep[x]).collect()
    }

    fn connected(&self, set: &[bool]) -> bool {
        let Some(first) = set.iter().position(|&b| b) else { return true };
        let mut seen = vec![first];
        let mut i = 0;
        while i < seen.len() {
            let x = seen[i];
            i += 1;
            for y in self.g().neighbors(x) {
                if set[y] && !seen.contains(&y) {
                    seen.push(y);
                }
            }
        }
        seen.len() == set.iter().filter(|&&b| b).count()
    }

    /// Components of the uncolored active vertices, each with the span of
    /// its colored neighbors.
    fn parts(&self, active: &[bool]) -> Vec<Vec<bool>> {
        let n = active.len();
        let colored: Vec<bool> = (0..n).map(|v| active[v] && self.is_colored(v)).collect();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if !active[s] || colored[s] || seen[s] {
                continue;
            }
            let mut part = vec![false; n];
            let mut attach = Vec::new();
            let mut queue = VecDeque::from([s]);
            seen[s] = true;
            while let Some(x) = queue.pop_front() {
                part[x] = true;
                for y in self.g().neighbors(x) {
                    if colored[y] {
                        if !attach.contains(&y) {
                            attach.push(y);
                        }
                    } else if active[y] && !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
            attach.sort_unstable();
            for x in self.span(&attach, &colored) {
                part[x] = true;
            }
            out.push(part);
        }
        out
    }

    /// The two sides of a circuit of the active graph, as vertex masks.
    fn sides(&self, active: &[bool], cycle: &[Vertex]) -> (Vec<bool>, Vec<bool>) {
        let n = active.len();
        let view = SubView::new(self.emb, active);
        let mut on = vec![false; n];
        for &c in cycle {
            on[c] = true;
        }
        let m = cycle.len();
        let mut seeds = (Vec::new(), Vec::new());
        for i in 0..m {
            let (v, nx, pv) = (cycle[i], cycle[(i + 1) % m], cycle[(i + m - 1) % m]);
            seeds.0.extend(view.between(v, nx, pv).into_iter().filter(|&x| !on[x]));
            seeds.1.extend(view.between(v, pv, nx).into_iter().filter(|&x| !on[x]));
        }
        let grow = |seeds: Vec<Vertex>| {
            let mut mask = vec![false; n];
            let mut queue = VecDeque::new();
            for s in seeds {
                if !mask[s] {
                    mask[s] = true;
                    queue.push_back(s);
                }
            }
            while let Some(x) = queue.pop_front() {
                for y in view.neighbors(x) {
                    if !on[y] && !mask[y] {
                        mask[y] = true;
                        queue.push_back(y);
                    }
                }
            }
            mask
        };
        (grow(seeds.0), grow(seeds.1))
    }

    /// Vertices strictly inside `cycle`: the side not holding `outside`.
    fn inside(&self, active: &[bool], cycle: &[Vertex], outside: Vertex) -> Result<Vec<bool>, Girth5Error> {
        let (a, b) = self.sides(active, cycle);
        if a.iter().zip(&b).any(|(x, y)| *x && *y) {
            return Err(broken("circuit sides overlap"));
        }
        match (a[outside], b[outside]) {
            (true, false) => Ok(b),
            (false, true) => Ok(a),
            _ => Err(broken("cannot place a vertex relative to a circuit")),
        }
    }
}

impl Run<'_> {
    /// Checks the extension hypothesis on a connected instance.
    fn audit(&mut self, active: &[bool], walk: &[Vertex]) -> Result<(), Girth5Error> {
        self.trace.audits += 1;
        let n = active.len();
        let p: Vec<Vertex> = (0..n).filter(|&v| active[v] && self.is_colored(v)).collect();
        let fail = |what: &str| Err(broken(format!("hypothesis fails: {what}")));
        if p.len() > 6 {
            return fail("precolored set has at most 6 vertices");
        }
        let in_p = |v: Vertex| active[v] && self.is_colored(v);
        let mut ends = 0;
        for &v in &p {
            let d = self.g().neighbors(v).filter(|&u| in_p(u)).count();
            if d > 2 {
                return fail("precolored set induces a path or circuit");
            }
            ends += usize::from(d < 2);
        }
        let mut reach = p.iter().copied().take(1).collect::<Vec<_>>();
        let mut i = 0;
        while i < reach.len() {
            let x = reach[i];
            i += 1;
            for y in self.g().neighbors(x) {
                if in_p(y) && !reach.contains(&y) {
                    reach.push(y);
                }
            }
        }
        if reach.len() != p.len() || !(ends == 0 && p.len() >= 3 || ends == 2 || p.len() <= 1) {
            return fail("precolored set induces a path or circuit");
        }
        for &v in &p {
            for (u, s) in self.g().signed_neighbors(v) {
                if in_p(u) && self.color[v] == Some(s.apply(self.color[u].unwrap())) {
                    return fail("precoloring is proper");
                }
            }
        }
        let mut on_d = vec![false; n];
        for &v in walk {
            on_d[v] = true;
        }
        if p.iter().any(|&v| !on_d[v]) {
            return fail("precolored vertices lie on the outer boundary");
        }
        for v in (0..n).filter(|&v| active[v] && !self.is_colored(v)) {
            let need = if on_d[v] { 2 } else { 3 };
            if self.lists[v].len() < need {
                return Err(broken(format!(
                    "hypothesis fails: list of {} has {} colors, needs {}",
                    self.name(v),
                    self.lists[v].len(),
                    need
                )));
            }
        }
        for (u, v, _) in self.g().edges() {
            if active[u] && active[v] && self.size(u) <= 2 && self.size(v) <= 2 && !(in_p(u) && in_p(v)) {
                return Err(broken(format!(
                    "hypothesis fails: small lists joined by {}-{}",
                    self.name(u),
                    self.name(v)
                )));
            }
        }
        Ok(())
    }

    /// Splits along the path `walk[i] inner.. walk[j]` (both boundary arcs
    /// nonempty) and returns both orientations that keep the precoloring of
    /// `g1` valid inside `g2` and give `g2` no more precolored vertices.
    fn cuts(
        &self,
        active: &[bool],
        walk: &[Vertex],
        i: usize,
        j: usize,
        inner: &[Vertex],
    ) -> Result<Vec<Cut>, Girth5Error> {
        let k = walk.len();
        let arc = |from: usize, to: usize| {
            let mut out = vec![walk[from]];
            let mut x = from;
            while x != to {
                x = (x + 1) % k;
                out.push(walk[x]);
            }
            out
        };
        let mut ca = arc(i, j);
        ca.extend(inner.iter().rev());
        let mut cb = arc(j, i);
        cb.extend(inner.iter());
        let region = |cycle: &[Vertex], outside: Vertex| -> Result<Vec<bool>, Girth5Error> {
            let mut r = self.inside(active, cycle, outside)?;
            for &c in cycle {
                r[c] = true;
            }
            Ok(r)
        };
        let ra = region(&ca, walk[(j + 1) % k])?;
        let rb = region(&cb, walk[(i + 1) % k])?;
        let n = active.len();
        if (0..n).any(|v| active[v] != (ra[v] || rb[v])) {
            return Err(broken("split regions do not cover the instance"));
        }
        let colored = |r: &[bool]| (0..n).filter(|&v| r[v] && self.is_colored(v)).count();
        let mut out = Vec::new();
        for (g1, g2) in [(&ra, &rb), (&rb, &ra)] {
            if colored(g2) > colored(g1) {
                continue;
            }
            if !self.colored_connected(g1) {
                continue;
            }
            let shared: Vec<Vertex> = (0..n).filter(|&v| g1[v] && g2[v]).collect();
            let invalid = (0..n)
                .filter(|&p| g2[p] && !g1[p] && self.is_colored(p))
                .any(|p| shared.iter().any(|&s| !self.is_colored(s) && self.g().has_edge(p, s)));
            if !invalid {
                out.push(Cut { g1: g1.clone(), g2: g2.clone(), size2: count(g2) });
            }
        }
        Ok(out)
    }
}

impl Run<'_> {
    fn colored_connected(&self, region: &[bool]) -> bool {
        let colored: Vec<Vertex> = (0..region.len()).filter(|&v| region[v] && self.is_colored(v)).collect();
        let Some(&first) = colored.first() else { return true };
        let mut seen = vec![first];
        let mut i = 0;
        while i < seen.len() {
            let x = seen[i];
            i += 1;
            for y in self.g().neighbors(x) {
                if region[y] && self.is_colored(y) && !seen.contains(&y) {
                    seen.push(y);
                }
            }
        }
        seen.len() == colored.len()
    }
}

fn smallest(cuts: Vec<Cut>) -> Option<Cut> {
    let mut best: Option<Cut> = None;
    for c in cuts {
        if best.as_ref().is_none_or(|b| c.size2 < b.size2) {
            best = Some(c);
        }
    }
    best
}

impl Run<'_> {
    fn extend(&mut self, active: Vec<bool>, depth: usize, stack: &mut Vec<Task>) -> Result<(), Girth5Error> {
        self.trace.max_depth = self.trace.max_depth.max(depth);
        let n = active.len();
        let parts = self.parts(&active);
        if parts.is_empty() {
            return Ok(());
        }
        if parts.len() > 1 || parts[0] != active {
            self.bump(Step::Split);
            for p in parts.into_iter().rev() {
                stack.push(Task::Extend { active: p, depth: depth + 1 });
            }
            return Ok(());
        }
        let walk = self.outer_walk(&active);
        let p: Vec<Vertex> = (0..n).filter(|&v| active[v] && self.is_colored(v)).collect();
        self.audit(&active, &walk)?;
        if p.is_empty() {
            self.bump(Step::Seed);
            let v = walk
                .iter()
                .copied()
                .filter(|&v| self.lists[v].len() <= 2)
                .min()
                .unwrap_or_else(|| *walk.iter().min().unwrap());
            self.color_vertex(v, &active, &[])?;
            stack.push(Task::Extend { active, depth });
            return Ok(());
        }
        let free: Vec<Vertex> = (0..n).filter(|&v| active[v] && !self.is_colored(v)).collect();
        if free.len() == 1 {
            self.bump(Step::Single);
            self.color_vertex(free[0], &active, &[])?;
            return Ok(());
        }
        if self.end_block(&active, depth, stack)? {
            return Ok(());
        }

        let k = walk.len();
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in walk.iter().enumerate() {
            if pos[v] != usize::MAX {
                return Err(broken("outer boundary of a 2-connected instance repeats a vertex"));
            }
            pos[v] = i;
        }
        let q = p.len();
        if q == k {
            self.bump(Step::WholeBoundary);
            stack.push(Task::Settle { active, deleted: vec![p[0]], two_colored: false, depth: depth + 1 });
            return Ok(());
        }
        let starts: Vec<usize> =
            (0..k).filter(|&i| self.is_colored(walk[i]) && !self.is_colored(walk[(i + k - 1) % k])).collect();
        if starts.len() != 1 {
            return Err(broken("precolored vertices are not consecutive on the boundary"));
        }
        let mut d = walk.clone();
        d.rotate_left(starts[0]);
        if d[..q].iter().any(|&v| !self.is_colored(v)) {
            return Err(broken("precolored vertices are not consecutive on the boundary"));
        }
        for (i, &v) in d.iter().enumerate() {
            pos[v] = i;
        }

        if k < q + 3 {
            self.bump(Step::ShortRemainder);
            let deleted = d[q..].to_vec();
            self.color_jointly(&deleted, &active)?;
            stack.push(Task::Settle { active, deleted, two_colored: false, depth: depth + 1 });
            return Ok(());
        }

        let view = SubView::new(self.emb, &active);
        let on_d = |v: Vertex| pos[v] != usize::MAX;

        // chords of the boundary
        let mut cuts = Vec::new();
        for i in 0..k {
            for y in view.neighbors(d[i]) {
                let j = pos[y];
                if on_d(y) && i < j && j != i + 1 && !(i == 0 && j == k - 1) {
                    cuts.extend(self.cuts(&active, &d, i, j, &[])?);
                }
            }
        }
        if let Some(c) = smallest(cuts) {
            self.bump(Step::Chord);
            self.push_cut(c, depth, stack);
            return Ok(());
        }

        // short circuits with a nonempty interior
        for cycle in short_circuits(&view) {
            if cycle.iter().all(|&v| on_d(v)) && cycle.len() == k {
                continue;
            }
            let Some(&outside) = d.iter().find(|v| !cycle.contains(v)) else { continue };
            let inner = self.inside(&active, &cycle, outside)?;
            if inner.iter().any(|&b| b) {
                self.bump(Step::SeparatingCircuit);
                let ext: Vec<bool> = (0..n).map(|v| active[v] && !inner[v]).collect();
                let mut int = inner;
                for &c in &cycle {
                    int[c] = true;
                }
                stack.push(Task::Extend { active: int, depth: depth + 1 });
                stack.push(Task::Extend { active: ext, depth: depth + 1 });
                return Ok(());
            }
        }

        let interior: Vec<Vertex> = (0..n).filter(|&v| active[v] && !on_d(v)).collect();

        // 2-paths v_i u v_j through the interior
        let mut cuts = Vec::new();
        for &u in &interior {
            let mut ds: Vec<usize> = view.neighbors(u).filter(|&x| on_d(x)).map(|x| pos[x]).collect();
            ds.sort_unstable();
            for a in 0..ds.len() {
                for b in a + 1..ds.len() {
                    let (i, j) = (ds[a] + 1, ds[b] + 1);
                    if q == 6 && ((i, j) == (4, 7) || (i, j) == (3, k)) {
                        continue;
                    }
                    cuts.extend(self.cuts(&active, &d, ds[a], ds[b], &[u])?);
                }
            }
        }
        if let Some(c) = smallest(cuts) {
            self.bump(Step::TwoPath);
            self.push_cut(c, depth, stack);
            return Ok(());
        }

        // 3-paths v_i u w v_j through the interior
        let mut cuts = Vec::new();
        for &u in &interior {
            for w in view.neighbors(u).filter(|&w| !on_d(w)) {
                for vi in view.neighbors(u).filter(|&x| on_d(x)) {
                    for vj in view.neighbors(w).filter(|&x| on_d(x)) {
                        if vi == vj || self.is_colored(vi) {
                            continue;
                        }
                        let li = self.lists[vi].len();
                        let end = pos[vj] == 0 || pos[vj] == q - 1;
                        if li == 2 || (li == 3 && end) {
                            cuts.extend(self.cuts(&active, &d, pos[vi], pos[vj], &[u, w])?);
                        }
                    }
                }
            }
        }
        if let Some(c) = smallest(cuts) {
            self.bump(Step::ThreePath);
            self.push_cut(c, depth, stack);
            return Ok(());
        }

        self.final_stage(active, &d, &interior, depth, stack)
    }

    /// Colors the few vertices `vs` together, first fit in list order.
    fn color_jointly(&mut self, vs: &[Vertex], active: &[bool]) -> Result<(), Girth5Error> {
        let Some((&v, rest)) = vs.split_first() else { return Ok(()) };
        for c in self.lists[v].clone() {
            let ok = self.g().signed_neighbors(v).all(|(u, s)| !active[u] || self.color[u] != Some(s.apply(c)));
            if !ok {
                continue;
            }
            let saved = std::mem::replace(&mut self.lists[v], vec![c]);
            self.color[v] = Some(c);
            if self.color_jointly(rest, active).is_ok() {
                return Ok(());
            }
            self.color[v] = None;
            self.lists[v] = saved;
        }
        Err(broken(format!("no color left for {}", self.name(v))))
    }

    fn push_cut(&mut self, c: Cut, depth: usize, stack: &mut Vec<Task>) {
        stack.push(Task::Settle { active: c.g2, deleted: Vec::new(), two_colored: false, depth: depth + 1 });
        stack.push(Task::Extend { active: c.g1, depth: depth + 1 });
    }

    /// Colors an end block avoiding the precolored vertices after the rest
    /// of the graph. Returns `false` when the instance is 2-connected.
    fn end_block(&mut self, active: &[bool], depth: usize, stack: &mut Vec<Task>) -> Result<bool, Girth5Error> {
        let (h, map) = self.g().induced(active);
        if h.len() < 3 {
            return Ok(false);
        }
        let blocks: Vec<Vec<Vertex>> =
            biconnected_blocks(&h).into_iter().map(|b| b.into_iter().map(|v| map[v]).collect()).collect();
        if blocks.len() <= 1 {
            return Ok(false);
        }
        let mut membership = vec![0usize; active.len()];
        for b in &blocks {
            for &v in b {
                membership[v] += 1;
            }
        }
        let mut ends: Vec<(Vertex, Vec<Vertex>, Vertex)> = blocks
            .iter()
            .filter_map(|b| {
                let cuts: Vec<Vertex> = b.iter().copied().filter(|&v| membership[v] > 1).collect();
                (cuts.len() == 1 && b.iter().all(|&v| !self.is_colored(v)))
                    .then(|| (*b.iter().min().unwrap(), b.clone(), cuts[0]))
            })
            .collect();
        ends.sort();
        let Some((_, block, u)) = ends.into_iter().next() else {
            return Err(broken("no end block avoids the precolored vertices"));
        };
        self.bump(Step::EndBlock);
        let mut b = vec![false; active.len()];
        for &v in &block {
            b[v] = true;
        }
        let rest: Vec<bool> = (0..active.len()).map(|v| active[v] && (!b[v] || v == u)).collect();
        stack.push(Task::Settle { active: b, deleted: Vec::new(), two_colored: false, depth: depth + 1 });
        stack.push(Task::Extend { active: rest, depth: depth + 1 });
        Ok(true)
    }
}

/// Circuits of length 5 and 6, each listed once.
fn short_circuits(view: &SubView<'_>) -> Vec<Vec<Vertex>> {
    fn go(view: &SubView<'_>, path: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        let s = path[0];
        let last = *path.last().unwrap();
        for w in view.neighbors(last) {
            if w == s && path.len() >= 5 && path[1] < last {
                out.push(path.clone());
            }
            if w > s && !path.contains(&w) && path.len() < 6 {
                path.push(w);
                go(view, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for s in view.vertices() {
        go(view, &mut vec![s], &mut out);
    }
    out
}

impl<'a> Run<'a> {
    /// `d` is the boundary with `P = d[0..q]`; no earlier reduction applies.
    fn final_stage(
        &mut self,
        active: Vec<bool>,
        d: &[Vertex],
        interior: &[Vertex],
        depth: usize,
        stack: &mut Vec<Task>,
    ) -> Result<(), Girth5Error> {
        let k = d.len();
        let q = (0..k).take_while(|&i| self.is_colored(d[i])).count();
        let v = |i: usize| d[(i - 1) % k];
        let g: &'a SignedGraph = self.emb.graph();
        let joined = |a: Vertex, b: Vertex| interior.iter().copied().find(|&x| g.has_edge(x, a) && g.has_edge(x, b));

        if self.size(v(q + 2)) >= 3 && q == 1 {
            self.bump(Step::Grow);
            self.color_vertex(v(2), &active, &[])?;
            stack.push(Task::Extend { active, depth: depth + 1 });
            return Ok(());
        }
        if self.size(v(q + 2)) >= 3 {
            self.bump(Step::DropLast);
            stack.push(Task::Settle { active, deleted: vec![v(q)], two_colored: false, depth: depth + 1 });
            return Ok(());
        }

        let u = if q == 6 { joined(v(4), v(7)) } else { None };
        if k >= q + 4 && self.size(v(q + 4)) >= 3 {
            self.bump(Step::ColorTwo);
            self.color_vertex(v(q + 2), &active, &[])?;
            self.color_vertex(v(q + 1), &active, &[])?;
            let mut deleted = vec![v(q + 1), v(q + 2)];
            if let Some(u) = u {
                self.color_vertex(u, &active, &[])?;
                deleted.extend([v(5), v(6)]);
            }
            stack.push(Task::Settle { active, deleted, two_colored: false, depth: depth + 1 });
            return Ok(());
        }

        self.bump(Step::ColorThree);
        let (a, b) = (v(q + 3), v(q + 4));
        let s = self.g().sign(a, b).expect("boundary edge");
        let banned: Vec<Color> = match self.color[b] {
            Some(c) => vec![s.apply(c)],
            None => self.lists[b].iter().map(|&c| s.apply(c)).collect(),
        };
        self.color_vertex(a, &active, &banned)?;
        self.color_vertex(v(q + 2), &active, &[])?;
        self.color_vertex(v(q + 1), &active, &[])?;
        let mut deleted = vec![v(q + 1), v(q + 2), v(q + 3)];
        let u2 = if q == 6 && k == 9 { joined(v(3), v(k)) } else { None };
        if let Some(u) = u {
            self.color_vertex(u, &active, &[])?;
            deleted.extend([v(5), v(6)]);
        }
        if let Some(u2) = u2 {
            self.color_vertex(u2, &active, &[])?;
            deleted.extend([v(1), v(2)]);
        }
        let wz = interior.iter().copied().find_map(|w| {
            if !self.g().has_edge(w, v(q + 1)) {
                return None;
            }
            interior
                .iter()
                .copied()
                .find(|&z| self.g().has_edge(w, z) && self.g().has_edge(z, v(q + 3)))
                .map(|z| (w, z))
        });
        if let Some((w, z)) = wz {
            self.color_vertex(w, &active, &[])?;
            self.color_vertex(z, &active, &[])?;
            deleted.extend([w, z]);
            if u.is_some() || u2.is_some() {
                self.trace.flagged += 1;
            }
        }
        stack.push(Task::Settle { active, deleted, two_colored: true, depth: depth + 1 });
        Ok(())
    }

    /// Deletes `deleted`, colors every uncolored vertex left with at most two
    /// colors next to a colored one (and, with `two_colored`, every vertex
    /// joined to two colored ones), then recurses on the parts.
    fn settle(
        &mut self,
        mut active: Vec<bool>,
        deleted: Vec<Vertex>,
        two_colored: bool,
        depth: usize,
        stack: &mut Vec<Task>,
    ) -> Result<(), Girth5Error> {
        let mut gone = vec![false; active.len()];
        for &x in &deleted {
            gone[x] = true;
        }
        for &x in &deleted {
            self.delete(x, &mut active);
        }
        loop {
            let mut changed = false;
            for v in 0..active.len() {
                if !active[v] || self.is_colored(v) {
                    continue;
                }
                let kept = self.g().neighbors(v).filter(|&u| active[u] && self.is_colored(u)).count();
                let del = self.g().neighbors(v).filter(|&u| gone[u]).count();
                if (self.lists[v].len() <= 2 && kept > 0) || (two_colored && kept + del >= 2) {
                    self.color_vertex(v, &active, &[])?;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        stack.push(Task::Extend { active, depth });
        Ok(())
    }
}

fn planar_error(e: PlanarError) -> Girth5Error {
    match e {
        PlanarError::NotPlanar(c) => Girth5Error::NotPlanar(c),
        other => broken(other.to_string()),
    }
}

fn check_girth(g: &SignedGraph) -> Result<(), Girth5Error> {
    for len in [3, 4] {
        if let Some(c) = has_circuit_of_length(g, len) {
            return Err(Girth5Error::GirthTooSmall(c));
        }
    }
    Ok(())
}

/// Runs the recursion on a connected embedding whose precolored vertices
/// are already fixed in `color`.
fn run_connected(
    emb: &RotationEmbedding,
    lists: Vec<Vec<Color>>,
    color: Vec<Option<Color>>,
    trace: &mut Trace,
) -> Result<Vec<Color>, Girth5Error> {
    let n = emb.graph().len();
    let mut run = Run { emb, lists, color, trace: std::mem::take(trace) };
    let mut stack = vec![Task::Extend { active: vec![true; n], depth: 0 }];
    let result = (|| {
        while let Some(task) = stack.pop() {
            match task {
                Task::Extend { active, depth } => run.extend(active, depth, &mut stack)?,
                Task::Settle { active, deleted, two_colored, depth } => {
                    run.settle(active, deleted, two_colored, depth, &mut stack)?
                }
            }
        }
        Ok(())
    })();
    *trace = run.trace;
    result?;
    run.color.into_iter().map(|c| c.ok_or_else(|| broken("vertex left uncolored"))).collect()
}

/// Extends the coloring `cp` of the path or circuit `p` (consecutive
/// vertices adjacent) to an L-coloring.
///
/// Components other than the one holding the outer face are treated as
/// plane graphs of their own, with their largest face outside.
pub fn extend_path_girth5(
    emb: &RotationEmbedding,
    lists: &ListAssignment,
    p: &[Vertex],
    cp: &[Color],
) -> Result<Coloring, Girth5Error> {
    extend_path_girth5_traced(emb, lists, p, cp).map(|(c, _)| c)
}

/// [`extend_path_girth5`] together with recursion statistics.
pub fn extend_path_girth5_traced(
    emb: &RotationEmbedding,
    lists: &ListAssignment,
    p: &[Vertex],
    cp: &[Color],
) -> Result<(Coloring, Trace), Girth5Error> {
    let g = emb.graph();
    let n = g.len();
    check_girth(g)?;
    if lists.len() != n {
        return Err(violated("list assignment size differs from vertex count"));
    }
    if p.len() != cp.len() || p.len() > 6 {
        return Err(violated("P has at most 6 vertices, each with one color"));
    }
    let mut in_p = vec![false; n];
    for &v in p {
        if v >= n || std::mem::replace(&mut in_p[v], true) {
            return Err(violated("P lists distinct vertices"));
        }
    }
    if p.windows(2).any(|w| !g.has_edge(w[0], w[1])) {
        return Err(violated("consecutive vertices of P are adjacent"));
    }
    for (i, &v) in p.iter().enumerate() {
        for (j, &u) in p.iter().enumerate() {
            if g.has_edge(u, v) && cp[i] == g.sign(u, v).unwrap().apply(cp[j]) {
                return Err(violated("the coloring of P is proper"));
            }
        }
        let d = p.iter().filter(|&&u| g.has_edge(u, v)).count();
        if d > 2 {
            return Err(violated("P induces a path or circuit"));
        }
    }
    let outer = emb.outer_face().map(|f| f.walk).unwrap_or_default();
    if p.iter().any(|v| !outer.contains(v)) {
        return Err(violated("P lies on the outer boundary"));
    }

    let mut trace = Trace::default();
    let mut colors: Vec<Option<Color>> = vec![None; n];
    for comp in g.components() {
        let mut keep = vec![false; n];
        for &v in &comp {
            keep[v] = true;
        }
        let (sub, map) = induced_embedding(emb, &keep);
        let boundary: Vec<Vertex> = sub.outer_face().map(|f| f.walk).unwrap_or_else(|| vec![0]);
        let mut sub_lists = Vec::with_capacity(map.len());
        let mut sub_color = Vec::with_capacity(map.len());
        for (i, &v) in map.iter().enumerate() {
            if let Some(j) = p.iter().position(|&x| x == v) {
                sub_lists.push(vec![cp[j]]);
                sub_color.push(Some(cp[j]));
                continue;
            }
            let l = lists.get(v);
            let need = if boundary.contains(&i) { 2 } else { 3 };
            if l.len() < need {
                return Err(violated(format!("list of {} has at least {} colors", g.name(v), need)));
            }
            sub_lists.push(l.iter().copied().take(3).collect());
            sub_color.push(None);
        }
        let sub_g = sub.graph();
        for (a, b, _) in sub_g.edges() {
            let small = |x: Vertex| sub_color[x].is_some() || sub_lists[x].len() <= 2;
            if small(a) && small(b) && !(in_p[map[a]] && in_p[map[b]]) {
                return Err(violated("no edge joins two vertices with at most two colors outside P"));
            }
        }
        let got = run_connected(&sub, sub_lists, sub_color, &mut trace)?;
        for (i, &v) in map.iter().enumerate() {
            colors[v] = Some(got[i]);
        }
    }
    let c = Coloring::new(colors.into_iter().map(|c| c.unwrap()).collect());
    let mut check = lists.clone();
    for (i, &v) in p.iter().enumerate() {
        check.set(v, vec![cp[i]]);
    }
    if let Some(v) = verify_coloring(g, Some(&check), &c).expect("total").first() {
        return Err(broken(v.describe(g)));
    }
    Ok((c, trace))
}

/// Colors a signed planar graph without 3- and 4-circuits from lists of at
/// least 3 colors. The lowest outer vertex of the embedding is precolored
/// with its smallest color.
pub fn color_girth5_3lists(g: &SignedGraph, lists: &ListAssignment) -> Result<Coloring, Girth5Error> {
    color_girth5_3lists_traced(g, lists).map(|(c, _)| c)
}

/// [`color_girth5_3lists`] together with recursion statistics.
pub fn color_girth5_3lists_traced(g: &SignedGraph, lists: &ListAssignment) -> Result<(Coloring, Trace), Girth5Error> {
    if lists.len() != g.len() {
        return Err(violated("list assignment size differs from vertex count"));
    }
    if let Some(v) = g.vertices().find(|&v| lists.get(v).len() < 3) {
        return Err(violated(format!("list of {} has at least 3 colors", g.name(v))));
    }
    check_girth(g)?;
    let emb = embed(g).map_err(planar_error)?;
    if g.is_empty() {
        return Ok((Coloring::new(Vec::new()), Trace::default()));
    }
    let start = emb.outer_face().and_then(|f| f.walk.iter().min().copied()).unwrap_or(0);
    extend_path_girth5_traced(&emb, lists, &[start], &[lists.get(start)[0]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_valid_coloring, Sign};
    use crate::planar::fixtures::*;
    use crate::random;
    use crate::solver::solve;
    use rand::seq::SliceRandom;
    use rand::Rng;

    fn c5() -> RotationEmbedding {
        embed(&graph_from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])).unwrap()
    }

    #[test]
    fn c5_edge_precolored() {
        let emb = c5();
        let l = ListAssignment::from_raw(vec![vec![1], vec![2], vec![1, 2, 3], vec![2, 3, 4], vec![1, 3, 5]]);
        let c = extend_path_girth5(&emb, &l, &[0, 1], &[1, 2]).unwrap();
        assert_eq!((c.get(0), c.get(1)), (1, 2));
        assert!(is_valid_coloring(emb.graph(), Some(&l), &c));
    }

    #[test]
    fn c5_with_adjacent_two_lists_is_rejected() {
        let emb = c5();
        let l = ListAssignment::from_raw(vec![vec![1], vec![2], vec![1, 2], vec![2, 3], vec![1, 3]]);
        let err = extend_path_girth5(&emb, &l, &[0, 1], &[1, 2]).unwrap_err();
        assert!(matches!(err, Girth5Error::PreconditionViolated(_)));
        assert!(solve(emb.graph(), &l).unwrap().outcome.is_sat());
    }

    #[test]
    fn whole_circuit_precolored() {
        let emb = c5();
        let l = ListAssignment::from_raw(vec![vec![1, 2, 3]; 5]);
        let cp = [1, 2, 1, 2, 3];
        let c = extend_path_girth5(&emb, &l, &[0, 1, 2, 3, 4], &cp).unwrap();
        assert_eq!(c.colors(), &cp);
    }

    #[test]
    fn dodecahedron_random() {
        let mut r = random::rng(5);
        for _ in 0..50 {
            let mut g = dodecahedron();
            random::signature(&mut g, 0.5, &mut r);
            let l = random::lists(20, 3, -4, 4, &mut r);
            let c = color_girth5_3lists(&g, &l).unwrap();
            assert!(is_valid_coloring(&g, Some(&l), &c));
        }
    }

    #[test]
    fn wrapper_errors() {
        let l = ListAssignment::from_raw(vec![vec![1, 2, 3]; 10]);
        assert!(matches!(color_girth5_3lists(&petersen(), &l), Err(Girth5Error::NotPlanar(_))));
        let l = ListAssignment::from_raw(vec![vec![1, 2, 3]; 8]);
        match color_girth5_3lists(&cube(), &l) {
            Err(Girth5Error::GirthTooSmall(c)) => assert_eq!(c.len(), 4),
            other => panic!("{other:?}"),
        }
        let l = ListAssignment::from_raw(vec![vec![1, 2]; 20]);
        assert!(matches!(color_girth5_3lists(&dodecahedron(), &l), Err(Girth5Error::PreconditionViolated(_))));
    }

    /// A precolored outer path of up to 6 vertices, 2-lists on some boundary
    /// vertices away from other small lists, 3-lists elsewhere.
    fn instance(n: usize, r: &mut impl Rng) -> (RotationEmbedding, ListAssignment, Vec<Vertex>, Vec<Color>) {
        let mut emb = if r.gen_bool(0.5) { random::girth5(n, r) } else { random::girth5_biconnected(n, r) };
        random::sign_embedding(&mut emb, 0.5, r);
        let g = emb.graph().clone();
        let walk = emb.outer_face().map(|f| f.walk).unwrap_or_default();
        let k = walk.len().max(1);
        let start = r.gen_range(0..k);
        let want = r.gen_range(1..=6);
        let mut p: Vec<Vertex> = Vec::new();
        for i in 0..k {
            let v = walk[(start + i) % k];
            if p.len() == want || p.contains(&v) || p.iter().filter(|&&u| g.has_edge(u, v)).count() > 1 {
                break;
            }
            if let Some(&last) = p.last() {
                if !g.has_edge(last, v) {
                    break;
                }
            }
            p.push(v);
        }
        if p.is_empty() {
            p.push(0);
        }
        let mut lists = random::lists(g.len(), 3, -4, 4, r).lists().to_vec();
        let mut cp = Vec::new();
        for (i, &v) in p.iter().enumerate() {
            let used: Vec<Color> = p[..i]
                .iter()
                .zip(&cp)
                .filter(|(&u, _)| g.has_edge(u, v))
                .map(|(&u, &c)| g.sign(u, v).unwrap().apply(c))
                .collect();
            let c = *lists[v].iter().filter(|c| !used.contains(c)).collect::<Vec<_>>().choose(r).unwrap();
            cp.push(*c);
            lists[v] = vec![*c];
        }
        let mut small: Vec<bool> = (0..g.len()).map(|v| p.contains(&v)).collect();
        for &v in &walk {
            if !small[v] && g.neighbors(v).all(|u| !small[u]) && r.gen_bool(0.5) {
                small[v] = true;
                lists[v].truncate(2);
            }
        }
        (emb, ListAssignment::from_raw(lists), p, cp)
    }

    #[test]
    fn random_precolored_paths() {
        let mut r = random::rng(11);
        let mut trace = Trace::default();
        for round in 0..600 {
            let n = r.gen_range(5..=if round % 3 == 0 { 60 } else { 16 });
            let (emb, l, p, cp) = instance(n, &mut r);
            let got = extend_path_girth5_traced(&emb, &l, &p, &cp);
            let (c, t) = got.unwrap_or_else(|e| panic!("round {round}: {e}"));
            assert!(is_valid_coloring(emb.graph(), Some(&l), &c));
            for (i, &v) in p.iter().enumerate() {
                assert_eq!(c.get(v), cp[i]);
            }
            if n <= 14 {
                assert!(solve(emb.graph(), &l).unwrap().outcome.is_sat());
            }
            trace.flagged += t.flagged;
            for (s, x) in t.steps {
                *trace.steps.entry(s).or_default() += x;
            }
        }
        for s in [Step::Chord, Step::TwoPath, Step::ThreePath, Step::ColorThree, Step::DropLast] {
            assert!(trace.steps.get(&s).copied().unwrap_or(0) > 0, "{s:?} never used: {:?}", trace.steps);
        }
    }

    #[test]
    fn random_wrapper() {
        let mut r = random::rng(12);
        for _ in 0..200 {
            let n = r.gen_range(1..=40);
            let mut emb = random::girth5(n, &mut r);
            random::sign_embedding(&mut emb, 0.5, &mut r);
            let g = emb.graph();
            let l = random::lists(g.len(), 3, -3, 3, &mut r);
            let c = color_girth5_3lists(g, &l).unwrap();
            assert!(is_valid_coloring(g, Some(&l), &c));
        }
    }

    #[test]
    fn negative_edges_use_product_colors() {
        let mut g = graph_from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        g.set_sign(1, 2, Sign::Negative);
        let emb = embed(&g).unwrap();
        let l = ListAssignment::from_raw(vec![vec![1], vec![-1, 1, 2], vec![1, 2, 3], vec![1, 2, 3], vec![1, 2, 3]]);
        let c = extend_path_girth5(&emb, &l, &[0], &[1]).unwrap();
        assert!(is_valid_coloring(&g, Some(&l), &c));
    }
}
