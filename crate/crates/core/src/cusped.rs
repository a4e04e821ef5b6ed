//! Combinatorial horoballs, cusped spaces and the truncated pair.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::graph::{Graph, SubgraphFamily};
use crate::Result;

/// A combinatorial horoball over a connected base graph, truncated at
/// `depth` levels.
///
/// Vertices are pairs `(y, n)` for `y` a base vertex and `0 <= n <= depth`;
/// `(y, n)` and `(y, n+1)` are joined vertically, and `(y1, n)`, `(y2, n)`
/// horizontally exactly when `0 < d_Y(y1, y2) <= 2^n` in the intrinsic
/// metric of the base. Truncation only cuts the quasi-ray above `depth`;
/// distances between level-0 vertices stabilize once the top level is a
/// clique.
#[derive(Debug, Clone)]
pub struct Horoball {
    pub graph: Graph,
    pub depth: u32,
    /// Number of base vertices; vertex `(i, lvl)` has id `lvl * base + i`.
    pub base_size: usize,
}

impl Horoball {
    pub fn vertex_id(&self, base_index: usize, level: u32) -> usize {
        level as usize * self.base_size + base_index
    }

    pub fn coords(&self, vertex: usize) -> (usize, u32) {
        (
            vertex % self.base_size,
            (vertex / self.base_size) as u32,
        )
    }

    /// The depth past which deeper truncation no longer changes distances
    /// between level-0 vertices: the first level whose horizontal relation
    /// is a clique, plus a margin of two.
    pub fn default_depth(base_diameter: u32) -> u32 {
        if base_diameter == 0 {
            1
        } else {
            (32 - (base_diameter - 1).leading_zeros()) + 2
        }
    }
}

/// Builds the combinatorial horoball over `base` (which must be connected).
pub fn horoball(base: &Graph, depth: u32) -> Result<Horoball> {
    if base.vertex_count() == 0 || !base.is_connected() {
        return Err(Error::DisconnectedBase);
    }
    let k = base.vertex_count();
    let t = base.metric();
    let mut edges = Vec::new();
    for lvl in 0..=depth {
        let offset = lvl as usize * k;
        // Vertical edges up to the next level.
        if lvl < depth {
            for i in 0..k {
                edges.push((offset + i, offset + k + i));
            }
        }
        // Horizontal edges at this level.
        let reach: u64 = if lvl >= 63 { u64::MAX } else { 1u64 << lvl };
        for i in 0..k {
            for j in (i + 1)..k {
                if (t.dist(i, j) as u64) <= reach {
                    edges.push((offset + i, offset + j));
                }
            }
        }
    }
    Ok(Horoball {
        graph: Graph::from_edges(k * (depth as usize + 1), &edges)?,
        depth,
        base_size: k,
    })
}

/// Where a cusped-space vertex came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexOrigin {
    Base(usize),
    Horoball {
        member: usize,
        /// Ambient id of the base vertex under this horoball coordinate.
        base_vertex: usize,
        level: u32,
    },
}

/// The cusped space of a pair: the base graph with one combinatorial
/// horoball glued along each family member at level 0.
///
/// Members may overlap or repeat; each occurrence gets its own disjoint
/// horoball.
#[derive(Debug, Clone)]
pub struct CuspedSpace {
    pub graph: Graph,
    pub origin: Vec<VertexOrigin>,
    /// The horoball vertex sets, pairwise disjoint, one per family member.
    pub horoballs: SubgraphFamily,
    pub base_count: usize,
    pub depths: Vec<u32>,
}

/// Builds the cusped space. `depth` of `None` picks, per member, the default
/// depth for its intrinsic diameter.
pub fn cusp(g: &Graph, family: &SubgraphFamily, depth: Option<u32>) -> Result<CuspedSpace> {
    let n = g.vertex_count();
    let mut edges: Vec<(usize, usize)> = g.edges();
    let mut origin: Vec<VertexOrigin> = (0..n).map(VertexOrigin::Base).collect();
    let mut horoball_sets = Vec::new();
    let mut depths = Vec::new();
    let mut next = n;
    for (idx, member) in family.members.iter().enumerate() {
        if !g.is_connected_subset(member) {
            return Err(Error::DisconnectedMember(idx));
        }
        let (base_graph, old_ids) = g.induced(member);
        let d = depth.unwrap_or_else(|| Horoball::default_depth(base_graph.metric().diameter()));
        let ball = horoball(&base_graph, d)?;
        let offset = next;
        for v in 0..ball.graph.vertex_count() {
            let (i, lvl) = ball.coords(v);
            origin.push(VertexOrigin::Horoball {
                member: idx,
                base_vertex: old_ids[i],
                level: lvl,
            });
        }
        for (u, v) in ball.graph.edges() {
            edges.push((offset + u, offset + v));
        }
        // Glue: each base vertex to its level-0 copy.
        for (i, &y) in old_ids.iter().enumerate() {
            edges.push((y, offset + ball.vertex_id(i, 0)));
        }
        horoball_sets.push((offset..offset + ball.graph.vertex_count()).collect::<BTreeSet<_>>());
        depths.push(d);
        next += ball.graph.vertex_count();
    }
    let graph = Graph::from_edges(next, &edges)?;
    let horoballs = if horoball_sets.is_empty() {
        SubgraphFamily {
            members: Vec::new(),
            disjoint: true,
        }
    } else {
        SubgraphFamily::new(horoball_sets)?
    };
    Ok(CuspedSpace {
        graph,
        origin,
        horoballs,
        base_count: n,
        depths,
    })
}

/// The truncated pair: the cusped space cut at depth 1, whose first-layer
/// horoballs form a pairwise-disjoint family quasi-isometric to the input
/// one. Overlapping or repeated members become disjoint copies.
pub fn truncated_pair(g: &Graph, family: &SubgraphFamily) -> Result<CuspedSpace> {
    cusp(g, family, Some(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle_graph, path_graph, INF};

    #[test]
    fn five_path_edge_rule() {
        // Base of diameter 4: the endpoints connect exactly from level 2 up.
        let base = path_graph(5);
        let hb = horoball(&base, 3).unwrap();
        for lvl in 0..=3u32 {
            let a = hb.vertex_id(0, lvl);
            let b = hb.vertex_id(4, lvl);
            assert_eq!(hb.graph.adjacent(a, b), lvl >= 2, "level {lvl}");
        }
        // Exhaustive edge-rule check at every level.
        let t = base.metric();
        for lvl in 0..=3u32 {
            for i in 0..5 {
                for j in (i + 1)..5 {
                    let expected = (t.dist(i, j) as u64) <= (1u64 << lvl);
                    assert_eq!(
                        hb.graph.adjacent(hb.vertex_id(i, lvl), hb.vertex_id(j, lvl)),
                        expected
                    );
                }
            }
        }
    }

    #[test]
    fn singleton_base_is_a_ray() {
        let base = path_graph(1);
        let hb = horoball(&base, 4).unwrap();
        assert_eq!(hb.graph.vertex_count(), 5);
        assert_eq!(hb.graph.edge_count(), 4);
    }

    #[test]
    fn disconnected_base_rejected() {
        let base = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(horoball(&base, 2), Err(Error::DisconnectedBase)));
    }

    #[test]
    fn horoball_shortcut_distance() {
        let base = path_graph(5);
        let hb = horoball(&base, 3).unwrap();
        let t = hb.graph.metric();
        // Level-0 endpoints: direct along the base is 4; over the top it is
        // up-up, across, down-down = 5. BFS certifies the minimum.
        assert_eq!(t.dist(hb.vertex_id(0, 0), hb.vertex_id(4, 0)), 4);
    }

    #[test]
    fn empty_family_gives_back_the_graph() {
        let g = cycle_graph(5);
        let fam = SubgraphFamily {
            members: Vec::new(),
            disjoint: true,
        };
        let c = cusp(&g, &fam, None).unwrap();
        assert_eq!(c.graph, g);
        assert!(c.horoballs.is_empty());
    }

    #[test]
    fn int_ball_whole_member_count() {
        // 7-vertex path with the whole graph as single member, depth 3:
        // 7 base + 7 * 4 horoball vertices.
        let g = path_graph(7);
        let fam = SubgraphFamily::new(vec![(0..7).collect()]).unwrap();
        let c = cusp(&g, &fam, Some(3)).unwrap();
        assert_eq!(c.graph.vertex_count(), 7 + 7 * 4);
        // Gluing edges exist.
        for y in 0..7 {
            let level0 = c
                .horoballs
                .members[0]
                .iter()
                .copied()
                .find(|&v| {
                    matches!(
                        c.origin[v],
                        VertexOrigin::Horoball { base_vertex, level: 0, .. } if base_vertex == y
                    )
                })
                .unwrap();
            assert!(c.graph.adjacent(y, level0));
        }
    }

    #[test]
    fn duplicate_members_get_disjoint_horoballs() {
        let g = path_graph(4);
        let whole: BTreeSet<usize> = (0..4).collect();
        let fam = SubgraphFamily {
            members: vec![whole.clone(), whole],
            disjoint: false,
        };
        let c = cusp(&g, &fam, Some(2)).unwrap();
        assert_eq!(c.horoballs.len(), 2);
        assert!(c.horoballs.disjoint);
        assert!(c.horoballs.members[0].is_disjoint(&c.horoballs.members[1]));
    }

    #[test]
    fn removing_horoballs_recovers_base() {
        let g = cycle_graph(6);
        let fam = SubgraphFamily::new(vec![BTreeSet::from([0, 1, 2]), BTreeSet::from([4])])
            .unwrap();
        let c = cusp(&g, &fam, None).unwrap();
        let base: BTreeSet<usize> = (0..c.base_count).collect();
        let (restored, ids) = c.graph.induced(&base);
        assert_eq!(ids, (0..6).collect::<Vec<_>>());
        assert_eq!(restored, g);
    }

    #[test]
    fn log_distance_shortening() {
        // In the horoball over a long path, level-0 vertices at base
        // distance D are at most 2·ceil(log2 D) + 3 apart.
        let base = path_graph(33);
        let diam = base.metric().diameter();
        let hb = horoball(&base, Horoball::default_depth(diam)).unwrap();
        let t = hb.graph.metric();
        for i in 0..33 {
            for j in (i + 1)..33 {
                let d_base = (j - i) as u32;
                // ceil(log2 D) for D >= 1
                let cl2 = if d_base <= 1 {
                    0
                } else {
                    32 - (d_base - 1).leading_zeros()
                };
                let d = t.dist(hb.vertex_id(i, 0), hb.vertex_id(j, 0));
                assert!(d != INF && d <= 2 * cl2 + 3, "pair ({i},{j}): {d}");
            }
        }
    }

    #[test]
    fn truncated_pair_members_disjoint() {
        let g = cycle_graph(6);
        let overlapping = SubgraphFamily {
            members: vec![BTreeSet::from([0, 1, 2]), BTreeSet::from([2, 3, 4])],
            disjoint: false,
        };
        let c = truncated_pair(&g, &overlapping).unwrap();
        assert!(c.horoballs.disjoint);
        assert_eq!(c.depths, vec![1, 1]);
    }
}
