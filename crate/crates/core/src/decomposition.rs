//! Constructive decompositions of graded 1-chains.
//!
//! [`decompose`] writes a chain supported on adjacent (or equal) vertex
//! pairs as a combination of open paths with endpoints in a prescribed
//! vertex set, closed paths, diagonal terms and reversal pairs, with an
//! exact norm identity. [`reduce_to_c11`] replaces each term of a graded
//! chain by the chain of a deterministic geodesic, producing an explicit
//! degree-2 witness for the difference.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::chain::{path_chain, Chain};
use crate::error::Error;
use crate::graph::{GeodesicTable, INF};
use crate::ratio::Ratio;
use crate::Result;

/// A decomposition of a chain in `C_1^1`.
///
/// Recombining all four parts reproduces the input exactly, and the masses
/// satisfy `Σ|α|·len(p) + Σ|β|·len(q) + Σ|μ| = ‖c‖₁` with `Σ|ν| ≤ ‖c‖₁`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathDecomposition {
    /// `(α, p)` with `p` a vertex path whose endpoints lie in `T`.
    pub open_paths: Vec<(Ratio, Vec<usize>)>,
    /// `(β, q)` with `q` a closed vertex path (`first == last`).
    pub closed_paths: Vec<(Ratio, Vec<usize>)>,
    /// `(μ, x)` standing for `μ·(x,x)`.
    pub diagonal_terms: Vec<(Ratio, usize)>,
    /// `(ν, (y,z))` standing for `ν·[(y,z) + (z,y)]`.
    pub reversal_pairs: Vec<(Ratio, (usize, usize))>,
}

impl PathDecomposition {
    /// Reassembles the chain the decomposition describes.
    pub fn recombine(&self) -> Chain {
        let mut c = Chain::zero(1);
        for (alpha, p) in &self.open_paths {
            c.add_assign(&path_chain(p).scale(alpha));
        }
        for (beta, q) in &self.closed_paths {
            c.add_assign(&path_chain(q).scale(beta));
        }
        for (mu, x) in &self.diagonal_terms {
            c.add_term(vec![*x, *x], mu.clone());
        }
        for (nu, (y, z)) in &self.reversal_pairs {
            c.add_term(vec![*y, *z], nu.clone());
            c.add_term(vec![*z, *y], nu.clone());
        }
        c
    }

    /// The left-hand side of the norm identity:
    /// `Σ|α|·len + Σ|β|·len + Σ|μ|`.
    pub fn weighted_length(&self) -> Ratio {
        let mut total = Ratio::zero();
        for (alpha, p) in &self.open_paths {
            total += alpha.abs() * Ratio::from_integer(((p.len() - 1) as i64).into());
        }
        for (beta, q) in &self.closed_paths {
            total += beta.abs() * Ratio::from_integer(((q.len() - 1) as i64).into());
        }
        for (mu, _) in &self.diagonal_terms {
            total += mu.abs();
        }
        total
    }

    pub fn reversal_mass(&self) -> Ratio {
        self.reversal_pairs
            .iter()
            .fold(Ratio::zero(), |acc, (nu, _)| acc + nu.abs())
    }
}

/// Greedy flow decomposition of a chain in `C_1^1` whose boundary is
/// supported on `T`.
///
/// Terms with negative coefficients are reversed first (producing the
/// reversal pairs), which leaves a nonnegative edge flow. Open paths between
/// imbalanced vertices are peeled off first, walking as far as the residual
/// flow allows and extracting any loop met along the way; what remains is a
/// circulation and splits into closed paths.
pub fn decompose(
    t: &GeodesicTable,
    c: &Chain,
    boundary_support: &std::collections::BTreeSet<usize>,
) -> Result<PathDecomposition> {
    assert_eq!(c.degree(), 1, "decompose applies to 1-chains");

    let mut diagonal_terms = Vec::new();
    let mut reversal_pairs = Vec::new();
    // capacity[(x, y)] > 0: flow x -> y still to be covered.
    let mut capacity: BTreeMap<(usize, usize), Ratio> = BTreeMap::new();
    for (tuple, coeff) in c.terms() {
        let (x, y) = (tuple[0], tuple[1]);
        if x == y {
            diagonal_terms.push((coeff.clone(), x));
            continue;
        }
        if t.dist(x, y) > 1 {
            return Err(Error::NotC11(x, y));
        }
        if coeff.is_positive() {
            *capacity.entry((x, y)).or_insert_with(Ratio::zero) += coeff;
        } else {
            // -|a|·(x,y) = |a|·(y,x) - |a|·[(x,y) + (y,x)]
            *capacity.entry((y, x)).or_insert_with(Ratio::zero) += coeff.abs();
            reversal_pairs.push((coeff.clone(), (x, y)));
        }
    }

    // Net outflow per vertex; must vanish off T.
    let mut excess: BTreeMap<usize, Ratio> = BTreeMap::new();
    for ((x, y), a) in &capacity {
        *excess.entry(*x).or_insert_with(Ratio::zero) += a;
        *excess.entry(*y).or_insert_with(Ratio::zero) -= a;
    }
    for (v, e) in &excess {
        if !e.is_zero() && !boundary_support.contains(v) {
            return Err(Error::BoundaryOffT(*v));
        }
    }

    let mut open_paths = Vec::new();
    let mut closed_paths = Vec::new();

    // Walks forward along residual capacity from `start`, peeling loops as
    // they close, until no outgoing capacity remains. Returns the leftover
    // simple open walk.
    let walk_and_peel = |start: usize,
                             capacity: &mut BTreeMap<(usize, usize), Ratio>,
                             closed: &mut Vec<(Ratio, Vec<usize>)>|
     -> Vec<usize> {
        let mut walk = vec![start];
        loop {
            let cur = *walk.last().unwrap();
            let next = capacity
                .range((cur, 0)..=(cur, usize::MAX))
                .find(|(_, a)| a.is_positive())
                .map(|((_, y), _)| *y);
            let Some(next) = next else {
                return walk;
            };
            if let Some(pos) = walk.iter().position(|&v| v == next) {
                // A loop closed: extract it with the bottleneck coefficient.
                let mut cycle: Vec<usize> = walk[pos..].to_vec();
                cycle.push(next);
                let bottleneck = cycle
                    .windows(2)
                    .map(|w| capacity[&(w[0], w[1])].clone())
                    .min()
                    .unwrap();
                for w in cycle.windows(2) {
                    let slot = capacity.get_mut(&(w[0], w[1])).unwrap();
                    *slot -= &bottleneck;
                }
                closed.push((bottleneck, cycle));
                walk.truncate(pos + 1);
            } else {
                walk.push(next);
            }
        }
    };

    // Open paths: start at vertices with positive out-excess.
    loop {
        let source = excess
            .iter()
            .find(|(_, e)| e.is_positive())
            .map(|(v, _)| *v);
        let Some(source) = source else {
            break;
        };
        let walk = walk_and_peel(source, &mut capacity, &mut closed_paths);
        debug_assert!(walk.len() >= 2, "a source always has an outgoing edge");
        let bottleneck = walk
            .windows(2)
            .map(|w| capacity[&(w[0], w[1])].clone())
            .min()
            .unwrap();
        for w in walk.windows(2) {
            let slot = capacity.get_mut(&(w[0], w[1])).unwrap();
            *slot -= &bottleneck;
        }
        let end = *walk.last().unwrap();
        *excess.get_mut(&source).unwrap() -= &bottleneck;
        *excess.entry(end).or_insert_with(Ratio::zero) += &bottleneck;
        open_paths.push((bottleneck, walk));
    }

    // What is left is a circulation: only loops come out.
    loop {
        let start = capacity
            .iter()
            .find(|(_, a)| a.is_positive())
            .map(|((x, _), _)| *x);
        let Some(start) = start else {
            break;
        };
        let leftover = walk_and_peel(start, &mut capacity, &mut closed_paths);
        debug_assert_eq!(
            leftover,
            vec![start],
            "a circulation leaves no open residue"
        );
    }

    Ok(PathDecomposition {
        open_paths,
        closed_paths,
        diagonal_terms,
        reversal_pairs,
    })
}

/// Result of [`reduce_to_c11`]: `c = boundary_part + short_part`, with
/// `boundary_part = ∂witness`, `witness` of diameter at most `R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub boundary_part: Chain,
    pub short_part: Chain,
    pub witness: Chain,
}

/// Writes `c ∈ C_1^R` as `b + c'` with `c' ∈ C_1^1` a combination of
/// geodesic chains and `b` the boundary of an explicit fan witness.
///
/// The bounds `‖c'‖₁ ≤ R·‖c‖₁` and `‖witness‖₁ ≤ (R+1)·‖c‖₁` hold exactly,
/// and integral input yields integral output.
pub fn reduce_to_c11(t: &GeodesicTable, c: &Chain, r: u32) -> Result<Reduction> {
    assert_eq!(c.degree(), 1, "reduce_to_c11 applies to 1-chains");
    let diam = c.diameter(t);
    if diam == INF {
        let (u, v) = c
            .terms()
            .find_map(|(tuple, _)| {
                (t.dist(tuple[0], tuple[1]) == INF).then(|| (tuple[0], tuple[1]))
            })
            .expect("infinite diameter comes from some tuple");
        return Err(Error::Disconnected(u, v));
    }
    if diam > r {
        return Err(Error::DiameterTooLarge(diam, r));
    }

    let mut short_part = Chain::zero(1);
    let mut witness = Chain::zero(2);
    for (tuple, coeff) in c.terms() {
        let (x, y) = (tuple[0], tuple[1]);
        if t.dist(x, y) <= 1 {
            short_part.add_term(tuple.clone(), coeff.clone());
            continue;
        }
        let p = t.geodesic(x, y)?;
        short_part.add_assign(&path_chain(&p).scale(coeff));
        // (x,y) - <p> = ∂[ (p0,p0,p0) - Σ_j (p0, p_{j-1}, p_j) ]
        witness.add_term(vec![p[0], p[0], p[0]], coeff.clone());
        for w in p.windows(2) {
            witness.add_term(vec![p[0], w[0], w[1]], -coeff.clone());
        }
    }
    let boundary_part = c.sub(&short_part);
    debug_assert_eq!(witness.boundary()?, boundary_part);
    Ok(Reduction {
        boundary_part,
        short_part,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, cycle_graph, path_graph};
    use crate::ratio::{frac, ratio};
    use std::collections::BTreeSet;

    fn check_identity(c: &Chain, d: &PathDecomposition) {
        assert_eq!(&d.recombine(), c);
        assert_eq!(d.weighted_length(), c.l1_norm());
        assert!(d.reversal_mass() <= c.l1_norm());
    }

    #[test]
    fn triangle_example_matches_known_form() {
        // c = (x,y) + (y,z) - (x,z) on a triangle, T empty.
        let g = complete_graph(3);
        let t = g.metric();
        let mut c = Chain::zero(1);
        c.add_term(vec![0, 1], ratio(1));
        c.add_term(vec![1, 2], ratio(1));
        c.add_term(vec![0, 2], ratio(-1));
        let d = decompose(&t, &c, &BTreeSet::new()).unwrap();
        check_identity(&c, &d);
        assert!(d.open_paths.is_empty());
        assert_eq!(d.closed_paths.len(), 1);
        assert_eq!(d.closed_paths[0].1, vec![0, 1, 2, 0]);
        assert_eq!(d.closed_paths[0].0, ratio(1));
        assert_eq!(d.reversal_pairs, vec![(ratio(-1), (0, 2))]);
    }

    #[test]
    fn diagonal_only() {
        let g = path_graph(2);
        let t = g.metric();
        let mut c = Chain::zero(1);
        c.add_term(vec![1, 1], frac(3, 2));
        let d = decompose(&t, &c, &BTreeSet::new()).unwrap();
        check_identity(&c, &d);
        assert_eq!(d.diagonal_terms, vec![(frac(3, 2), 1)]);
    }

    #[test]
    fn simple_path_is_returned_whole() {
        let g = path_graph(4);
        let t = g.metric();
        let c = path_chain(&[0, 1, 2, 3]);
        let d = decompose(&t, &c, &BTreeSet::from([0, 3])).unwrap();
        check_identity(&c, &d);
        assert_eq!(d.open_paths, vec![(ratio(1), vec![0, 1, 2, 3])]);
        assert!(d.closed_paths.is_empty() && d.reversal_pairs.is_empty());
    }

    #[test]
    fn rejects_long_tuples_and_stray_boundary() {
        let g = path_graph(3);
        let t = g.metric();
        let c = Chain::basis(&[0, 2]);
        assert_eq!(
            decompose(&t, &c, &BTreeSet::from([0, 2])),
            Err(Error::NotC11(0, 2))
        );
        let c = Chain::basis(&[0, 1]);
        assert_eq!(
            decompose(&t, &c, &BTreeSet::new()),
            Err(Error::BoundaryOffT(0))
        );
    }

    #[test]
    fn rational_coefficients_keep_identity() {
        let g = cycle_graph(5);
        let t = g.metric();
        let mut c = Chain::zero(1);
        c.add_term(vec![0, 1], frac(1, 2));
        c.add_term(vec![1, 2], frac(3, 2));
        c.add_term(vec![2, 3], frac(3, 2));
        c.add_term(vec![3, 4], ratio(-2));
        let d = decompose(&t, &c, &BTreeSet::from([0, 1, 2, 3, 4])).unwrap();
        check_identity(&c, &d);
    }

    #[test]
    fn reduce_p3_example() {
        let g = path_graph(3);
        let t = g.metric();
        let c = Chain::basis(&[0, 2]);
        let red = reduce_to_c11(&t, &c, 2).unwrap();
        assert_eq!(red.short_part, path_chain(&[0, 1, 2]));
        assert_eq!(red.boundary_part, c.sub(&red.short_part));
        assert_eq!(red.witness.boundary().unwrap(), red.boundary_part);
        assert_eq!(red.short_part.l1_norm(), ratio(2));
        assert!(red.witness.l1_norm() <= ratio(3));
        assert!(red.witness.diameter(&t) <= 2);
    }

    #[test]
    fn reduce_leaves_short_chains_alone() {
        let g = path_graph(3);
        let t = g.metric();
        let c = path_chain(&[0, 1, 2]);
        let red = reduce_to_c11(&t, &c, 2).unwrap();
        assert!(red.boundary_part.is_zero());
        assert_eq!(red.short_part, c);
        assert!(red.witness.is_zero());
    }

    #[test]
    fn reduce_scaled_long_pair() {
        let g = cycle_graph(6);
        let t = g.metric();
        let c = Chain::basis(&[0, 3]).scale(&ratio(3));
        let red = reduce_to_c11(&t, &c, 3).unwrap();
        assert_eq!(red.short_part.l1_norm(), ratio(9));
        assert!(red.witness.l1_norm() <= ratio(12));
        assert!(red.short_part.is_integral() && red.witness.is_integral());
    }

    #[test]
    fn reduce_rejects_disconnected() {
        let g = crate::graph::Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let t = g.metric();
        let c = Chain::basis(&[0, 2]);
        assert_eq!(reduce_to_c11(&t, &c, 5), Err(Error::Disconnected(0, 2)));
    }
}
