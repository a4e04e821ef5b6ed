//! Finite graphs, BFS metrics, deterministic geodesics, Cayley balls and
//! vertex-subset families.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::hash::Hash;

use crate::error::Error;
use crate::Result;

/// Distance value for unreachable pairs.
pub const INF: u32 = u32::MAX;

/// A finite undirected simple graph on vertices `0..n`.
///
/// Self-loops are rejected and duplicate edges are collapsed; the metric and
/// the chain theory built on top only ever see the adjacency relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list. Pairs may repeat in either order.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(Graph { n, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    /// Undirected edges as ordered pairs `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// All-pairs BFS metric with deterministic geodesics.
    ///
    /// From each source the BFS relaxes vertices in increasing order, and the
    /// predecessor stored for a vertex is the smallest one realizing the
    /// distance, so geodesic extraction is reproducible across runs.
    pub fn metric(&self) -> GeodesicTable {
        let n = self.n;
        let mut dist = vec![INF; n * n];
        let mut pred = vec![usize::MAX; n * n];
        for s in 0..n {
            let row = s * n;
            dist[row + s] = 0;
            let mut queue = VecDeque::new();
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                let du = dist[row + u];
                for &v in &self.adj[u] {
                    if dist[row + v] == INF {
                        dist[row + v] = du + 1;
                        pred[row + v] = u;
                        queue.push_back(v);
                    }
                }
            }
        }
        GeodesicTable { n, dist, pred }
    }

    /// Induced subgraph on `vertices`, together with the map from new ids to
    /// the original ones (new ids follow the sorted order of `vertices`).
    pub fn induced(&self, vertices: &BTreeSet<usize>) -> (Graph, Vec<usize>) {
        let old_ids: Vec<usize> = vertices.iter().copied().collect();
        let index: HashMap<usize, usize> =
            old_ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![BTreeSet::new(); old_ids.len()];
        for (i, &v) in old_ids.iter().enumerate() {
            for &w in &self.adj[v] {
                if let Some(&j) = index.get(&w) {
                    adj[i].insert(j);
                }
            }
        }
        (
            Graph {
                n: old_ids.len(),
                adj,
            },
            old_ids,
        )
    }

    /// Whether `vertices` induce a connected subgraph (empty sets count as
    /// disconnected).
    pub fn is_connected_subset(&self, vertices: &BTreeSet<usize>) -> bool {
        let Some(&start) = vertices.iter().next() else {
            return false;
        };
        let mut seen = BTreeSet::new();
        seen.insert(start);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if vertices.contains(&v) && seen.insert(v) {
                    queue.push_back(v);
                }
            }
        }
        seen.len() == vertices.len()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        self.is_connected_subset(&(0..self.n).collect())
    }

    /// Serializes to the graph file format: `graph <n>` then one `u v` line
    /// per edge.
    pub fn to_file_string(&self) -> String {
        let mut s = format!("graph {}\n", self.n);
        for (u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    /// Parses the graph file format.
    pub fn from_file_string(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty graph file".into()))?;
        let mut it = header.split_whitespace();
        if it.next() != Some("graph") {
            return Err(Error::Parse("graph file must start with `graph <n>`".into()));
        }
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad vertex count".into()))?;
        let mut edges = Vec::new();
        for line in lines {
            let mut it = line.split_whitespace();
            let u: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line `{line}`")))?;
            let v: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line `{line}`")))?;
            edges.push((u, v));
        }
        Graph::from_edges(n, &edges)
    }
}

/// All-pairs distances and deterministic predecessors of a [`Graph`].
#[derive(Debug, Clone)]
pub struct GeodesicTable {
    n: usize,
    dist: Vec<u32>,
    pred: Vec<usize>,
}

impl GeodesicTable {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// BFS distance, `INF` when `u` and `v` lie in different components.
    pub fn dist(&self, u: usize, v: usize) -> u32 {
        self.dist[u * self.n + v]
    }

    pub fn connected(&self, u: usize, v: usize) -> bool {
        self.dist(u, v) != INF
    }

    /// Largest finite distance from `v`.
    pub fn eccentricity(&self, v: usize) -> u32 {
        (0..self.n)
            .map(|w| self.dist(v, w))
            .filter(|&d| d != INF)
            .max()
            .unwrap_or(0)
    }

    /// Largest finite pairwise distance.
    pub fn diameter(&self) -> u32 {
        (0..self.n).map(|v| self.eccentricity(v)).max().unwrap_or(0)
    }

    /// The stored predecessor of `v` on the deterministic geodesic from
    /// `source`; `None` when `v == source` or they are disconnected.
    pub fn predecessor(&self, source: usize, v: usize) -> Option<usize> {
        let p = self.pred[source * self.n + v];
        (p != usize::MAX).then_some(p)
    }

    /// The deterministic geodesic from `u` to `v`, as the full vertex
    /// sequence including both endpoints. `u == v` yields the one-vertex
    /// path.
    pub fn geodesic(&self, u: usize, v: usize) -> Result<Vec<usize>> {
        if self.dist(u, v) == INF {
            return Err(Error::Disconnected(u, v));
        }
        let mut path = vec![v];
        let mut cur = v;
        while cur != u {
            cur = self.pred[u * self.n + cur];
            path.push(cur);
        }
        path.reverse();
        Ok(path)
    }
}

/// An ordered list of vertex subsets. Duplicates are allowed: a subset
/// occurring twice names two distinct members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphFamily {
    pub members: Vec<BTreeSet<usize>>,
    pub disjoint: bool,
}

impl SubgraphFamily {
    pub fn new(members: Vec<BTreeSet<usize>>) -> Result<Self> {
        if members.iter().any(BTreeSet::is_empty) {
            return Err(Error::EmptyFamily);
        }
        let disjoint = {
            let mut seen = BTreeSet::new();
            members
                .iter()
                .flat_map(|m| m.iter())
                .all(|&v| seen.insert(v))
        };
        Ok(SubgraphFamily { members, disjoint })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Index of the member containing `v`, if the family is disjoint.
    pub fn member_of(&self, v: usize) -> Option<usize> {
        self.members.iter().position(|m| m.contains(&v))
    }

    /// One member per line, space-separated vertex ids.
    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        for m in &self.members {
            let ids: Vec<String> = m.iter().map(|v| v.to_string()).collect();
            s.push_str(&ids.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_file_string(text: &str) -> Result<Self> {
        let mut members = Vec::new();
        for line in text.lines() {
            if line.trim().is_empty() {
                continue;
            }
            let mut member = BTreeSet::new();
            for tok in line.split_whitespace() {
                let v: usize = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad vertex id `{tok}`")))?;
                member.insert(v);
            }
            members.push(member);
        }
        SubgraphFamily::new(members)
    }
}

/// A group given by its multiplication action on opaque elements.
///
/// Generators are listed by name; the oracle multiplies an element by a
/// generator on the right. The generator list must be closed under inverses
/// (each generator's inverse also appears) for the resulting graph to be
/// undirected.
pub trait GroupOracle {
    type Elem: Clone + Eq + Hash + Ord;

    fn identity(&self) -> Self::Elem;
    fn generator_names(&self) -> Vec<String>;
    fn multiply(&self, e: &Self::Elem, generator: &str) -> Option<Self::Elem>;
    /// Human-readable label; the identity must label as the empty string.
    fn label(&self, e: &Self::Elem) -> String;
}

/// The ball of given radius in a Cayley graph, with vertex labels.
///
/// The graph is exact as the induced subgraph on elements of word length at
/// most `radius`; distances between its vertices may exceed the word metric
/// of the ambient infinite graph when geodesics leave the ball.
#[derive(Debug, Clone)]
pub struct CayleyBall {
    pub graph: Graph,
    pub labels: Vec<String>,
    pub generators: Vec<String>,
    pub radius: u32,
    /// For each vertex, the generator labels of its outgoing edges:
    /// `edge_labels[v]` holds `(generator index, target vertex)` pairs.
    pub edge_labels: Vec<Vec<(usize, usize)>>,
}

/// Enumerates the ball of radius `radius` around the identity and forms the
/// induced graph. Elements are identified through `Eq + Hash`, so the oracle
/// must return equal values for equal group elements.
pub fn cayley_ball<G: GroupOracle>(group: &G, radius: u32) -> Result<CayleyBall> {
    let generators = group.generator_names();
    let id = group.identity();
    let mut index: HashMap<G::Elem, usize> = HashMap::new();
    let mut elems: Vec<G::Elem> = vec![id.clone()];
    index.insert(id, 0);
    let mut frontier = vec![0usize];
    for _ in 0..radius {
        let mut next = Vec::new();
        for &v in &frontier {
            let e = elems[v].clone();
            for g in &generators {
                let w = group
                    .multiply(&e, g)
                    .ok_or_else(|| Error::OracleFailure(group.label(&e)))?;
                if !index.contains_key(&w) {
                    let id = elems.len();
                    index.insert(w.clone(), id);
                    elems.push(w);
                    next.push(id);
                }
            }
        }
        frontier = next;
    }
    let n = elems.len();
    let mut edges = Vec::new();
    let mut edge_labels = vec![Vec::new(); n];
    for (v, e) in elems.iter().enumerate() {
        for (gi, g) in generators.iter().enumerate() {
            let w = group
                .multiply(e, g)
                .ok_or_else(|| Error::OracleFailure(group.label(e)))?;
            if let Some(&u) = index.get(&w) {
                if u != v {
                    edges.push((v, u));
                }
                edge_labels[v].push((gi, u));
            }
        }
    }
    let graph = Graph::from_edges(n, &edges)?;
    let labels = elems.iter().map(|e| group.label(e)).collect();
    Ok(CayleyBall {
        graph,
        labels,
        generators,
        radius,
        edge_labels,
    })
}

/// Splits the ball into the intersections of left cosets of the subgroup
/// generated by `subgroup_generators` with the ball.
///
/// Members are the connected components of the subgraph spanned by edges
/// labelled with subgroup generators; a coset whose intersection with the
/// ball is disconnected therefore contributes one member per component. The
/// members partition the vertex set and are pairwise disjoint.
pub fn coset_family(ball: &CayleyBall, subgroup_generators: &[String]) -> Result<SubgraphFamily> {
    let sub: BTreeSet<usize> = subgroup_generators
        .iter()
        .map(|g| {
            ball.generators
                .iter()
                .position(|h| h == g)
                .ok_or_else(|| Error::Parse(format!("unknown generator `{g}`")))
        })
        .collect::<Result<_>>()?;
    let n = ball.graph.vertex_count();
    if n == 0 {
        return Err(Error::EmptyFamily);
    }
    // Subgroup edges are undirected: an edge belongs to the coset subgraph
    // when a subgroup generator labels either direction, so the generator
    // list need not be closed under inverses.
    let mut sub_adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (v, labels) in ball.edge_labels.iter().enumerate() {
        for &(gi, w) in labels {
            if sub.contains(&gi) && w != v {
                sub_adj[v].insert(w);
                sub_adj[w].insert(v);
            }
        }
    }
    let mut member_of = vec![usize::MAX; n];
    let mut members: Vec<BTreeSet<usize>> = Vec::new();
    for start in 0..n {
        if member_of[start] != usize::MAX {
            continue;
        }
        let mid = members.len();
        let mut component = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        member_of[start] = mid;
        component.insert(start);
        while let Some(u) = queue.pop_front() {
            for &w in &sub_adj[u] {
                if member_of[w] == usize::MAX {
                    member_of[w] = mid;
                    component.insert(w);
                    queue.push_back(w);
                }
            }
        }
        members.push(component);
    }
    SubgraphFamily::new(members)
}

/// Built-in desk-scale groups for the CLI and the test suite.
pub mod groups {
    use super::GroupOracle;

    /// The integers with generators `a = +1`, `A = -1`.
    pub struct IntGroup;

    impl GroupOracle for IntGroup {
        type Elem = i64;

        fn identity(&self) -> i64 {
            0
        }

        fn generator_names(&self) -> Vec<String> {
            vec!["a".into(), "A".into()]
        }

        fn multiply(&self, e: &i64, generator: &str) -> Option<i64> {
            match generator {
                "a" => Some(e + 1),
                "A" => Some(e - 1),
                _ => None,
            }
        }

        fn label(&self, e: &i64) -> String {
            if *e == 0 {
                String::new()
            } else {
                e.to_string()
            }
        }
    }

    /// ℤ² with generators `a = (1,0)`, `b = (0,1)` and their inverses `A`, `B`.
    pub struct LatticeGroup;

    impl GroupOracle for LatticeGroup {
        type Elem = (i64, i64);

        fn identity(&self) -> (i64, i64) {
            (0, 0)
        }

        fn generator_names(&self) -> Vec<String> {
            vec!["a".into(), "A".into(), "b".into(), "B".into()]
        }

        fn multiply(&self, e: &(i64, i64), generator: &str) -> Option<(i64, i64)> {
            match generator {
                "a" => Some((e.0 + 1, e.1)),
                "A" => Some((e.0 - 1, e.1)),
                "b" => Some((e.0, e.1 + 1)),
                "B" => Some((e.0, e.1 - 1)),
                _ => None,
            }
        }

        fn label(&self, e: &(i64, i64)) -> String {
            if *e == (0, 0) {
                String::new()
            } else {
                format!("({},{})", e.0, e.1)
            }
        }
    }

    /// The free group on two letters, elements as reduced words over
    /// `a, A, b, B`.
    pub struct FreeGroup;

    fn inverse_letter(c: u8) -> u8 {
        match c {
            b'a' => b'A',
            b'A' => b'a',
            b'b' => b'B',
            b'B' => b'b',
            _ => c,
        }
    }

    impl GroupOracle for FreeGroup {
        type Elem = Vec<u8>;

        fn identity(&self) -> Vec<u8> {
            Vec::new()
        }

        fn generator_names(&self) -> Vec<String> {
            vec!["a".into(), "A".into(), "b".into(), "B".into()]
        }

        fn multiply(&self, e: &Vec<u8>, generator: &str) -> Option<Vec<u8>> {
            let g = *generator.as_bytes().first()?;
            if !matches!(g, b'a' | b'A' | b'b' | b'B') {
                return None;
            }
            let mut w = e.clone();
            if w.last() == Some(&inverse_letter(g)) {
                w.pop();
            } else {
                w.push(g);
            }
            Some(w)
        }

        fn label(&self, e: &Vec<u8>) -> String {
            String::from_utf8_lossy(e).into_owned()
        }
    }

    /// The cyclic group ℤ/n with generators `a`, `A`.
    pub struct CyclicGroup(pub u64);

    impl GroupOracle for CyclicGroup {
        type Elem = u64;

        fn identity(&self) -> u64 {
            0
        }

        fn generator_names(&self) -> Vec<String> {
            vec!["a".into(), "A".into()]
        }

        fn multiply(&self, e: &u64, generator: &str) -> Option<u64> {
            match generator {
                "a" => Some((e + 1) % self.0),
                "A" => Some((e + self.0 - 1) % self.0),
                _ => None,
            }
        }

        fn label(&self, e: &u64) -> String {
            if *e == 0 {
                String::new()
            } else {
                e.to_string()
            }
        }
    }
}

/// Path graph on `n` vertices.
pub fn path_graph(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges).expect("valid path")
}

/// Cycle graph on `n >= 3` vertices.
pub fn cycle_graph(n: usize) -> Graph {
    let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    edges.push((n - 1, 0));
    Graph::from_edges(n, &edges).expect("valid cycle")
}

/// Complete graph on `n` vertices.
pub fn complete_graph(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges).expect("valid complete graph")
}

/// The `rows x cols` grid graph, vertex `(r, c)` at id `r * cols + c`.
pub fn grid_graph(rows: usize, cols: usize) -> Graph {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    Graph::from_edges(rows * cols, &edges).expect("valid grid")
}

/// Star graph: center `0` joined to `n - 1` leaves.
pub fn star_graph(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
    Graph::from_edges(n, &edges).expect("valid star")
}
