//! Set-valued projections onto a subgraph family, the projection axioms,
//! Rel-set orders and the inductive extension of per-member 1-cocycles.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::chain::Chain;
use crate::cochain::Cochain;
use crate::error::Error;
use crate::graph::{GeodesicTable, Graph, SubgraphFamily, INF};
use crate::ratio::{Ratio, Vector};
use crate::Result;

/// A family together with set-valued projections `π_Y : X → 2^Y`.
///
/// The projection data is arbitrary; whether it satisfies the axioms is a
/// question answered by [`check_axioms`], not an invariant of the type.
#[derive(Debug, Clone)]
pub struct ProjectionSystem {
    pub family: SubgraphFamily,
    /// `projections[k][v]`: sorted, nonempty subset of member `k`.
    pub projections: Vec<Vec<Vec<usize>>>,
}

impl ProjectionSystem {
    pub fn proj(&self, member: usize, v: usize) -> &[usize] {
        &self.projections[member][v]
    }

    /// `π_k` of a whole vertex set, as a sorted deduplicated list.
    pub fn proj_of_set(&self, member: usize, set: &BTreeSet<usize>) -> Vec<usize> {
        let mut out: BTreeSet<usize> = BTreeSet::new();
        for &v in set {
            out.extend(self.proj(member, v).iter().copied());
        }
        out.into_iter().collect()
    }

    /// `d_k(a, b) = diam(π_k(a) ∪ π_k(b))` in the ambient metric.
    pub fn d_member(&self, t: &GeodesicTable, member: usize, a: usize, b: usize) -> u32 {
        union_diameter(t, self.proj(member, a), self.proj(member, b))
    }
}

fn union_diameter(t: &GeodesicTable, a: &[usize], b: &[usize]) -> u32 {
    let mut best = 0;
    let all = a.iter().chain(b.iter());
    for (i, &u) in all.clone().enumerate() {
        for &v in all.clone().skip(i + 1) {
            let d = t.dist(u, v);
            if d > best {
                best = d;
            }
        }
    }
    best
}

/// Builds the nearest-point projection system: `π_Y(v)` is the full set of
/// vertices of `Y` at minimal distance from `v`.
pub fn nearest_point_system(
    g: &Graph,
    t: &GeodesicTable,
    family: &SubgraphFamily,
) -> Result<ProjectionSystem> {
    let n = g.vertex_count();
    let mut projections = Vec::with_capacity(family.len());
    for (k, member) in family.members.iter().enumerate() {
        if !g.is_connected_subset(member) {
            return Err(Error::DisconnectedMember(k));
        }
        let mut per_vertex = Vec::with_capacity(n);
        for v in 0..n {
            let dmin = member.iter().map(|&y| t.dist(v, y)).min().unwrap_or(INF);
            if dmin == INF {
                return Err(Error::UnreachableMember { member: k, vertex: v });
            }
            let set: Vec<usize> = member
                .iter()
                .copied()
                .filter(|&y| t.dist(v, y) == dmin)
                .collect();
            per_vertex.push(set);
        }
        projections.push(per_vertex);
    }
    Ok(ProjectionSystem {
        family: family.clone(),
        projections,
    })
}

/// What the axiom scan measured.
#[derive(Debug, Clone)]
pub struct AxiomReport {
    /// Axiom 1: the largest diameter of a projected point or distinct member.
    pub bounded_projection: u32,
    /// Axiom 2: the smallest `B` with `d_Y(x,y) <= B·d(x,y) + B` everywhere.
    pub coarse_lipschitz: Ratio,
    /// Axiom 3: the largest `min(d_W(Y,x), d_Y(W,x))` over distinct pairs.
    pub behrstock: u32,
    /// The smallest `B'` making the strong Behrstock property hold:
    /// `d_W(Y,Z) >= B'` forces `π_Y(W) = π_Y(Z)`.
    pub strong_behrstock: u32,
    /// Whether the strong property already holds at `max` of axioms 1-3.
    pub strong_holds_at_b: bool,
    /// The system constant: the largest of the per-axiom minima (including
    /// the strong Behrstock constant).
    pub b: Ratio,
    /// Axiom 4 data at the system constant: for each ordered pair of
    /// distinct members, the third members projecting them far apart.
    pub large_projection_sets: Vec<((usize, usize), Vec<usize>)>,
    pub witness_bounded: Option<(usize, ProjectionTarget)>,
    pub witness_lipschitz: Option<(usize, usize, usize)>,
    pub witness_behrstock: Option<(usize, usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProjectionTarget {
    Member(usize),
    Vertex(usize),
}

/// Measures the smallest constants for the four projection axioms and the
/// strengthened Behrstock property. Violations are data, not failures.
pub fn check_axioms(t: &GeodesicTable, sys: &ProjectionSystem) -> AxiomReport {
    let n = t.vertex_count();
    let m = sys.family.len();

    // π_k(Y_j) for all ordered member pairs.
    let mut proj_member: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); m]; m];
    for k in 0..m {
        for j in 0..m {
            if j != k {
                proj_member[k][j] = sys.proj_of_set(k, &sys.family.members[j]);
            }
        }
    }

    // Axiom 1.
    let mut b1 = 0u32;
    let mut witness_bounded = None;
    for k in 0..m {
        for v in 0..n {
            let d = union_diameter(t, sys.proj(k, v), &[]);
            if d > b1 {
                b1 = d;
                witness_bounded = Some((k, ProjectionTarget::Vertex(v)));
            }
        }
        for j in 0..m {
            if j == k {
                continue;
            }
            let d = union_diameter(t, &proj_member[k][j], &[]);
            if d > b1 {
                b1 = d;
                witness_bounded = Some((k, ProjectionTarget::Member(j)));
            }
        }
    }

    // Axiom 2: maximize d_k(x,y) / (d(x,y) + 1).
    let mut b2 = Ratio::zero();
    let mut witness_lipschitz = None;
    for k in 0..m {
        for x in 0..n {
            for y in x..n {
                let dk = sys.d_member(t, k, x, y) as i64;
                if dk == 0 {
                    continue;
                }
                let denom = t.dist(x, y) as i64 + 1;
                let ratio = Ratio::new(dk.into(), denom.into());
                if ratio > b2 {
                    b2 = ratio;
                    witness_lipschitz = Some((k, x, y));
                }
            }
        }
    }

    // Axiom 3.
    let mut b3 = 0u32;
    let mut witness_behrstock = None;
    for w in 0..m {
        for y in (w + 1)..m {
            for x in 0..n {
                let dw = union_diameter(t, &proj_member[w][y], sys.proj(w, x));
                let dy = union_diameter(t, &proj_member[y][w], sys.proj(y, x));
                let v = dw.min(dy);
                if v > b3 {
                    b3 = v;
                    witness_behrstock = Some((w, y, x));
                }
            }
        }
    }

    // Strong Behrstock: find the largest violating d_W(Y,Z).
    let mut max_violating: Option<u32> = None;
    for w in 0..m {
        for y in 0..m {
            for z in 0..m {
                if w == y || w == z || y == z {
                    continue;
                }
                if proj_member[y][w] != proj_member[y][z] {
                    let d = union_diameter(t, &proj_member[w][y], &proj_member[w][z]);
                    if max_violating.is_none_or(|cur| d > cur) {
                        max_violating = Some(d);
                    }
                }
            }
        }
    }
    let strong_behrstock = max_violating.map_or(0, |d| d + 1);

    let base_b = [
        Ratio::from_integer((b1 as i64).into()),
        b2.clone(),
        Ratio::from_integer((b3 as i64).into()),
    ]
    .into_iter()
    .max()
    .unwrap();
    let strong_holds_at_b = Ratio::from_integer((strong_behrstock as i64).into()) <= base_b;
    let b = base_b.max(Ratio::from_integer((strong_behrstock as i64).into()));

    // Axiom 4 data at the system constant.
    let mut large_projection_sets = Vec::new();
    for w in 0..m {
        for y in 0..m {
            if w == y {
                continue;
            }
            let zs: Vec<usize> = (0..m)
                .filter(|&z| z != w && z != y)
                .filter(|&z| {
                    let d = union_diameter(t, &proj_member[z][w], &proj_member[z][y]);
                    Ratio::from_integer((d as i64).into()) >= b
                })
                .collect();
            if !zs.is_empty() {
                large_projection_sets.push(((w, y), zs));
            }
        }
    }

    AxiomReport {
        bounded_projection: b1,
        coarse_lipschitz: b2,
        behrstock: b3,
        strong_behrstock,
        strong_holds_at_b,
        b,
        large_projection_sets,
        witness_bounded,
        witness_lipschitz,
        witness_behrstock,
    }
}

/// The Rel set of a member pair with its total order.
#[derive(Debug, Clone)]
pub struct RelOrder {
    pub w: usize,
    pub y: usize,
    /// Member indices sorted ascending in the order; the last one is `y`.
    pub rel: Vec<usize>,
    pub threshold: Ratio,
}

impl RelOrder {
    pub fn rho(&self) -> usize {
        self.rel.len()
    }

    /// The immediate predecessor of `v` in the order.
    pub fn predecessor(&self, v: usize) -> Option<usize> {
        let pos = self.rel.iter().position(|&u| u == v)?;
        pos.checked_sub(1).map(|i| self.rel[i])
    }

    /// `p(Y)`: the penultimate element.
    pub fn penultimate(&self) -> Option<usize> {
        self.predecessor(self.y)
    }
}

/// Computes `Rel(W, Y) = {Z : d_Z(W, Y) > 10B} ∪ {W, Y}` and sorts it by the
/// projection order `U ≺ V iff π_U(V) = π_U(Y)`, verifying totality,
/// antisymmetry and transitivity before returning.
pub fn rel_order(
    t: &GeodesicTable,
    sys: &ProjectionSystem,
    w: usize,
    y: usize,
    b: &Ratio,
) -> Result<RelOrder> {
    if w == y {
        return Err(Error::Parse("rel_order requires distinct members".into()));
    }
    let m = sys.family.len();
    let threshold = Ratio::from_integer(10.into()) * b;
    let proj_w: Vec<Vec<usize>> = (0..m)
        .map(|z| sys.proj_of_set(z, &sys.family.members[w]))
        .collect();
    let proj_y: Vec<Vec<usize>> = (0..m)
        .map(|z| sys.proj_of_set(z, &sys.family.members[y]))
        .collect();
    let mut rel: Vec<usize> = (0..m)
        .filter(|&z| z != w && z != y)
        .filter(|&z| {
            let d = union_diameter(t, &proj_w[z], &proj_y[z]);
            Ratio::from_integer((d as i64).into()) > threshold
        })
        .collect();
    rel.push(w);
    rel.push(y);
    rel.sort_unstable();

    // Projections of every Rel member onto every other, for the order test.
    let mut proj_pairs: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for &u in &rel {
        for &v in &rel {
            if u != v {
                proj_pairs.insert((u, v), sys.proj_of_set(u, &sys.family.members[v]));
            }
        }
    }

    let precedes = |u: usize, v: usize| -> bool {
        if v == y {
            true
        } else if u == y {
            false
        } else {
            proj_pairs[&(u, v)] == proj_pairs[&(u, y)]
        }
    };

    // Totality and antisymmetry.
    for (i, &u) in rel.iter().enumerate() {
        for &v in rel.iter().skip(i + 1) {
            if precedes(u, v) == precedes(v, u) {
                return Err(Error::OrderNotTotal { w, y, u, v });
            }
        }
    }
    // Transitivity.
    for &u in &rel {
        for &v in &rel {
            for &x in &rel {
                if u != v && v != x && u != x && precedes(u, v) && precedes(v, x) && !precedes(u, x)
                {
                    return Err(Error::OrderNotTotal { w, y, u, v: x });
                }
            }
        }
    }

    let mut sorted = rel.clone();
    sorted.sort_by(|&u, &v| {
        if u == v {
            std::cmp::Ordering::Equal
        } else if precedes(u, v) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    debug_assert_eq!(*sorted.last().unwrap(), y);
    Ok(RelOrder {
        w,
        y,
        rel: sorted,
        threshold,
    })
}

/// A Lipschitz primitive of a 1-cocycle on one member.
#[derive(Debug, Clone)]
pub struct LipschitzPrimitive {
    pub values: BTreeMap<usize, Vector>,
    /// Largest increment over edges of the member.
    pub lipschitz: Ratio,
    pub basepoint: usize,
}

/// Integrates a 1-cocycle on a connected vertex subset: `f(x) = φ(x₀, x)`.
///
/// The cocycle condition is verified exactly (every violating triple has a
/// stored pair among its faces, so scanning the stored support is a complete
/// check). The Lipschitz constant of the result equals the largest value of
/// `φ` on the member's edges.
pub fn lipschitz_primitive(
    g: &Graph,
    t: &GeodesicTable,
    member: &BTreeSet<usize>,
    phi: &Cochain,
    basepoint: usize,
) -> Result<LipschitzPrimitive> {
    assert_eq!(phi.degree(), 1);
    assert!(member.contains(&basepoint), "basepoint must lie in the member");
    if !g.is_connected_subset(member) {
        return Err(Error::DisconnectedBase);
    }
    let _ = t;
    // Cocycle check on member triples, targeted through the stored support.
    for (pair, _) in phi.entries() {
        let (a, b) = (pair[0], pair[1]);
        if !(member.contains(&a) && member.contains(&b)) {
            continue;
        }
        for &v in member {
            for tuple in [[v, a, b], [a, v, b], [a, b, v]] {
                let val = phi.eval(&[tuple[1], tuple[2]]);
                let val = &(&val - &phi.eval(&[tuple[0], tuple[2]])) + &phi.eval(&[tuple[0], tuple[1]]);
                if !val.is_zero() {
                    return Err(Error::NotACocycle(tuple.to_vec()));
                }
            }
        }
    }

    let mut values = BTreeMap::new();
    for &x in member {
        values.insert(x, phi.eval(&[basepoint, x]));
    }
    // δf = φ on the member, exact.
    for &x in member {
        for &y in member {
            let diff = &values[&y] - &values[&x];
            if diff != phi.eval(&[x, y]) {
                return Err(Error::NotACocycle(vec![basepoint, x, y]));
            }
        }
    }
    let mut lipschitz = Ratio::zero();
    for &x in member {
        for y in g.neighbors(x) {
            if member.contains(&y) {
                let inc = (&values[&y] - &values[&x]).sup_norm();
                if inc > lipschitz {
                    lipschitz = inc;
                }
            }
        }
    }
    Ok(LipschitzPrimitive {
        values,
        lipschitz,
        basepoint,
    })
}

/// The global extension produced by [`extend_cocycle`].
///
/// The extension is stored as a vertex potential, so its coboundary is a
/// 1-cocycle by construction on every tuple.
#[derive(Debug, Clone)]
pub struct CocycleExtension {
    pub potential: Vec<Vector>,
    /// The enlarged family actually used (input members first, then the
    /// singletons added to cover the graph).
    pub family: SubgraphFamily,
    pub b: Ratio,
    /// Measured Lipschitz constant of the potential over the graph's edges.
    pub lipschitz: Ratio,
    /// `|Rel(W₀, Y)|` per enlarged member (1 for the root).
    pub rho: Vec<usize>,
}

impl CocycleExtension {
    /// The extended cocycle evaluated on a pair.
    pub fn eval_pair(&self, x: usize, y: usize) -> Vector {
        &self.potential[y] - &self.potential[x]
    }

    /// Materializes the extended cocycle on all ordered pairs of vertices.
    pub fn cocycle(&self) -> Cochain {
        let n = self.potential.len();
        let dim = self.potential.first().map_or(1, Vector::dim);
        let mut out = Cochain::new(1, dim);
        for x in 0..n {
            for y in 0..n {
                out.set(vec![x, y], self.eval_pair(x, y));
            }
        }
        out
    }
}

/// Extends per-member 1-cocycles to a global 1-cocycle, inductively over the
/// Rel-order distance from the root member `w0`.
///
/// Uncovered vertices are adjoined as singleton members carrying the zero
/// cocycle. The constant `b` defaults to the measured system constant of the
/// enlarged family. On every member the coboundary of the result restricts
/// to the given cocycle exactly.
pub fn extend_cocycle(
    g: &Graph,
    t: &GeodesicTable,
    family: &SubgraphFamily,
    phis: &[Cochain],
    w0: usize,
    dim: usize,
    b_override: Option<Ratio>,
) -> Result<CocycleExtension> {
    assert_eq!(phis.len(), family.len(), "one cocycle per member");
    assert!(w0 < family.len(), "root member out of range");
    if !family.disjoint {
        return Err(Error::Parse("extend_cocycle requires a disjoint family".into()));
    }
    let n = g.vertex_count();

    // Enlarge with singletons so the members cover the graph.
    let mut members = family.members.clone();
    let mut phis: Vec<Cochain> = phis.to_vec();
    let covered: BTreeSet<usize> = members.iter().flatten().copied().collect();
    for v in 0..n {
        if !covered.contains(&v) {
            members.push(BTreeSet::from([v]));
            phis.push(Cochain::new(1, dim));
        }
    }
    let enlarged = SubgraphFamily::new(members)?;
    let sys = nearest_point_system(g, t, &enlarged)?;
    let b = match b_override {
        Some(b) => b,
        None => check_axioms(t, &sys).b,
    };

    let m = enlarged.len();
    let mut rho = vec![0usize; m];
    let mut pred = vec![usize::MAX; m];
    let mut orders: Vec<Option<RelOrder>> = vec![None; m];
    rho[w0] = 1;
    for k in 0..m {
        if k == w0 {
            continue;
        }
        let order = rel_order(t, &sys, w0, k, &b)?;
        rho[k] = order.rho();
        pred[k] = order.penultimate().ok_or(Error::InductionGap(k))?;
        orders[k] = Some(order);
    }

    let mut process: Vec<usize> = (0..m).collect();
    process.sort_by_key(|&k| (rho[k], k));

    let mut potential: Vec<Option<Vector>> = vec![None; n];
    let mut done = vec![false; m];
    for k in process {
        let basepoint = *enlarged.members[k].iter().next().unwrap();
        let prim = lipschitz_primitive(g, t, &enlarged.members[k], &phis[k], basepoint)?;
        if k == w0 {
            for (&x, v) in &prim.values {
                potential[x] = Some(v.clone());
            }
            done[k] = true;
            continue;
        }
        let parent = pred[k];
        if !done[parent] {
            return Err(Error::InductionGap(k));
        }
        // b(Y) ∈ π_Y(p(Y)) and s(Y) ∈ π_{p(Y)}(Y), lexicographically minimal.
        let base_in_k = *sys
            .proj_of_set(k, &enlarged.members[parent])
            .first()
            .ok_or(Error::InductionGap(k))?;
        let shadow = *sys
            .proj_of_set(parent, &enlarged.members[k])
            .first()
            .ok_or(Error::InductionGap(k))?;
        let offset = &potential[shadow]
            .clone()
            .ok_or(Error::InductionGap(k))?
            - &prim.values[&base_in_k];
        for (&x, v) in &prim.values {
            potential[x] = Some(v + &offset);
        }
        done[k] = true;
    }

    let potential: Vec<Vector> = potential
        .into_iter()
        .map(|v| v.expect("members cover the graph"))
        .collect();

    // Restriction property: δf on each member reproduces its cocycle.
    for (k, member) in enlarged.members.iter().enumerate() {
        for &x in member {
            for &y in member {
                let diff = &potential[y] - &potential[x];
                if diff != phis[k].eval(&[x, y]) {
                    return Err(Error::NotACocycle(vec![k, x, y]));
                }
            }
        }
    }

    let mut lipschitz = Ratio::zero();
    for (u, v) in g.edges() {
        let inc = (&potential[v] - &potential[u]).sup_norm();
        if inc > lipschitz {
            lipschitz = inc;
        }
    }

    Ok(CocycleExtension {
        potential,
        family: enlarged,
        b,
        lipschitz,
        rho,
    })
}

/// Convenience: the coboundary pairing `⟨δf, c⟩ = ⟨f, ∂c⟩` partner used by
/// tests; evaluates a degree-1 cochain against a 1-chain.
pub fn pair_chain(phi: &Cochain, c: &Chain) -> Vector {
    phi.eval_chain(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle_graph, path_graph, Graph};
    use crate::ratio::ratio;

    fn tree_two_branches() -> (Graph, SubgraphFamily) {
        // 0-1-2 and 3-4-5 subtrees joined by the edge 2-3.
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let fam = SubgraphFamily::new(vec![
            BTreeSet::from([0, 1]),
            BTreeSet::from([4, 5]),
        ])
        .unwrap();
        (g, fam)
    }

    #[test]
    fn nearest_point_in_trees_is_a_gate() {
        let (g, fam) = tree_two_branches();
        let t = g.metric();
        let sys = nearest_point_system(&g, &t, &fam).unwrap();
        // Outside points project to the single closest vertex.
        assert_eq!(sys.proj(0, 4), &[1]);
        assert_eq!(sys.proj(1, 0), &[4]);
        // Points of the member project to themselves.
        assert_eq!(sys.proj(0, 0), &[0]);
    }

    #[test]
    fn cycle_projection_single_member() {
        let g = cycle_graph(6);
        let t = g.metric();
        let fam = SubgraphFamily::new(vec![BTreeSet::from([0])]).unwrap();
        let sys = nearest_point_system(&g, &t, &fam).unwrap();
        assert_eq!(sys.proj(0, 3), &[0]);
    }

    #[test]
    fn tree_axioms_have_zero_bounded_projection() {
        let (g, fam) = tree_two_branches();
        let t = g.metric();
        let sys = nearest_point_system(&g, &t, &fam).unwrap();
        let report = check_axioms(&t, &sys);
        assert_eq!(report.bounded_projection, 0);
        assert_eq!(report.behrstock, 0);
    }

    #[test]
    fn single_member_axioms_vacuous() {
        let g = path_graph(5);
        let t = g.metric();
        let fam = SubgraphFamily::new(vec![BTreeSet::from([0, 1])]).unwrap();
        let sys = nearest_point_system(&g, &t, &fam).unwrap();
        let report = check_axioms(&t, &sys);
        assert_eq!(report.behrstock, 0);
        assert_eq!(report.strong_behrstock, 0);
        assert!(report.large_projection_sets.is_empty());
    }

    #[test]
    fn rel_order_two_elements() {
        let (g, fam) = tree_two_branches();
        let t = g.metric();
        let sys = nearest_point_system(&g, &t, &fam).unwrap();
        let b = check_axioms(&t, &sys).b;
        let order = rel_order(&t, &sys, 0, 1, &b).unwrap();
        assert_eq!(order.rel, vec![0, 1]);
        assert_eq!(order.penultimate(), Some(0));
        assert!(rel_order(&t, &sys, 0, 0, &b).is_err());
    }

    #[test]
    fn chain_of_flats_order_matches_path_order() {
        // Three subtrees spread along a path; the middle one separates the
        // outer two, so projections record the path order.
        let g = path_graph(13);
        let t = g.metric();
        let fam = SubgraphFamily::new(vec![
            BTreeSet::from([0, 1]),
            BTreeSet::from([5, 6, 7]),
            BTreeSet::from([11, 12]),
        ])
        .unwrap();
        let sys = nearest_point_system(&g, &t, &fam).unwrap();
        // With B = 0, every member whose projections of the ends differ is
        // relevant; the order must be 0 < 1 < 2.
        let order = rel_order(&t, &sys, 0, 2, &Ratio::zero()).unwrap();
        assert_eq!(order.rel, vec![0, 1, 2]);
        assert_eq!(order.penultimate(), Some(1));
    }

    #[test]
    fn lipschitz_primitive_integrates_exactly() {
        let g = path_graph(3);
        let t = g.metric();
        let member: BTreeSet<usize> = (0..3).collect();
        // φ = δg₀ for the vertex function g₀ = (0, 1, 3).
        let g0 = [ratio(0), ratio(1), ratio(3)];
        let mut phi = Cochain::new(1, 1);
        for x in 0..3 {
            for y in 0..3 {
                phi.set(vec![x, y], Vector(vec![&g0[y] - &g0[x]]));
            }
        }
        let prim = lipschitz_primitive(&g, &t, &member, &phi, 0).unwrap();
        for x in 0..3 {
            assert_eq!(prim.values[&x], Vector(vec![&g0[x] - &g0[0]]));
        }
        assert_eq!(prim.lipschitz, ratio(2));

        let zero = Cochain::new(1, 1);
        let prim = lipschitz_primitive(&g, &t, &member, &zero, 0).unwrap();
        assert!(prim.values.values().all(Vector::is_zero));
        assert!(prim.lipschitz.is_zero());
    }

    #[test]
    fn primitive_rejects_non_cocycles() {
        let g = cycle_graph(3);
        let t = g.metric();
        let member: BTreeSet<usize> = (0..3).collect();
        let mut phi = Cochain::new(1, 1);
        // Holonomy around the triangle: not a coboundary.
        phi.set(vec![0, 1], Vector(vec![ratio(1)]));
        phi.set(vec![1, 2], Vector(vec![ratio(1)]));
        phi.set(vec![2, 0], Vector(vec![ratio(1)]));
        assert!(matches!(
            lipschitz_primitive(&g, &t, &member, &phi, 0),
            Err(Error::NotACocycle(_))
        ));
    }

    #[test]
    fn extend_single_member_is_the_primitive() {
        let g = path_graph(4);
        let t = g.metric();
        let whole: BTreeSet<usize> = (0..4).collect();
        let fam = SubgraphFamily::new(vec![whole.clone()]).unwrap();
        let mut phi = Cochain::new(1, 1);
        let vals = [ratio(0), ratio(2), ratio(3), ratio(5)];
        for x in 0..4 {
            for y in 0..4 {
                phi.set(vec![x, y], Vector(vec![&vals[y] - &vals[x]]));
            }
        }
        let ext = extend_cocycle(&g, &t, &fam, &[phi.clone()], 0, 1, None).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(ext.eval_pair(x, y), phi.eval(&[x, y]));
            }
        }
    }

    #[test]
    fn extend_zero_cocycles_gives_locally_constant_potential() {
        let (g, fam) = tree_two_branches();
        let t = g.metric();
        let phis = vec![Cochain::new(1, 1), Cochain::new(1, 1)];
        let ext = extend_cocycle(&g, &t, &fam, &phis, 0, 1, None).unwrap();
        for member in &fam.members {
            let vals: BTreeSet<&Vector> = member.iter().map(|&v| &ext.potential[v]).collect();
            assert_eq!(vals.len(), 1, "constant on each member");
        }
        for member in &fam.members {
            for &x in member {
                for &y in member {
                    assert!(ext.eval_pair(x, y).is_zero());
                }
            }
        }
    }

    #[test]
    fn extend_restores_member_cocycles_exactly() {
        let (g, fam) = tree_two_branches();
        let t = g.metric();
        let mut phis = Vec::new();
        for (k, member) in fam.members.iter().enumerate() {
            let mut phi = Cochain::new(1, 1);
            let verts: Vec<usize> = member.iter().copied().collect();
            for (i, &x) in verts.iter().enumerate() {
                for (j, &y) in verts.iter().enumerate() {
                    let v = ratio((j as i64 - i as i64) * (k as i64 + 1));
                    phi.set(vec![x, y], Vector(vec![v]));
                }
            }
            phis.push(phi);
        }
        let ext = extend_cocycle(&g, &t, &fam, &phis, 0, 1, None).unwrap();
        for (k, member) in fam.members.iter().enumerate() {
            for &x in member {
                for &y in member {
                    assert_eq!(ext.eval_pair(x, y), phis[k].eval(&[x, y]));
                }
            }
        }
        // The extension is a coboundary of a potential, so its coboundary
        // vanishes on every triple by construction.
    }
}
