//! Sparse chains on ordered vertex tuples with exact rational coefficients.
//!
//! A degree-`i` chain is a finite linear combination of `(i+1)`-tuples of
//! vertex ids. Tuples are ordered and may repeat vertices: degenerate tuples
//! like `(x,x)` and `(x,x,x)` are first-class basis elements.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::graph::{GeodesicTable, INF};
use crate::ratio::Ratio;
use crate::Result;

/// A sparse chain. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    degree: usize,
    terms: BTreeMap<Vec<usize>, Ratio>,
}

impl Chain {
    pub fn zero(degree: usize) -> Self {
        Chain {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// A single basis tuple with coefficient one.
    pub fn basis(tuple: &[usize]) -> Self {
        let mut c = Chain::zero(tuple.len() - 1);
        c.add_term(tuple.to_vec(), Ratio::from_integer(1.into()));
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Ratio)> {
        self.terms.iter()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, tuple: &[usize]) -> Ratio {
        self.terms.get(tuple).cloned().unwrap_or_else(Ratio::zero)
    }

    /// Adds `coeff * tuple`, merging and dropping zeros.
    pub fn add_term(&mut self, tuple: Vec<usize>, coeff: Ratio) {
        debug_assert_eq!(tuple.len(), self.degree + 1);
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(tuple);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let new = e.get() + &coeff;
                if new.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = new;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Chain) {
        debug_assert_eq!(self.degree, other.degree);
        for (t, a) in &other.terms {
            self.add_term(t.clone(), a.clone());
        }
    }

    pub fn sub(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        for (t, a) in &other.terms {
            out.add_term(t.clone(), -a.clone());
        }
        out
    }

    pub fn add(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn scale(&self, factor: &Ratio) -> Chain {
        if factor.is_zero() {
            return Chain::zero(self.degree);
        }
        Chain {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(t, a)| (t.clone(), a * factor))
                .collect(),
        }
    }

    pub fn neg(&self) -> Chain {
        Chain {
            degree: self.degree,
            terms: self.terms.iter().map(|(t, a)| (t.clone(), -a)).collect(),
        }
    }

    /// Alternating-sum face map. Errors on degree-0 chains.
    pub fn boundary(&self) -> Result<Chain> {
        if self.degree == 0 {
            return Err(Error::DegreeZero);
        }
        let mut out = Chain::zero(self.degree - 1);
        for (tuple, coeff) in &self.terms {
            let mut sign = Ratio::from_integer(1.into());
            for j in 0..tuple.len() {
                let mut face = tuple.clone();
                face.remove(j);
                out.add_term(face, coeff * &sign);
                sign = -sign;
            }
        }
        Ok(out)
    }

    /// Sum of absolute coefficient values.
    pub fn l1_norm(&self) -> Ratio {
        self.terms
            .values()
            .fold(Ratio::zero(), |acc, a| acc + a.abs())
    }

    /// Largest pairwise distance over the support; 0 for the zero chain and
    /// `INF` when a tuple crosses components.
    pub fn diameter(&self, table: &GeodesicTable) -> u32 {
        let mut best = 0;
        for tuple in self.terms.keys() {
            for i in 0..tuple.len() {
                for j in (i + 1)..tuple.len() {
                    let d = table.dist(tuple[i], tuple[j]);
                    if d == INF {
                        return INF;
                    }
                    best = best.max(d);
                }
            }
        }
        best
    }

    /// Whether every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|a| a.is_integer())
    }

    /// All vertices appearing in the support.
    pub fn support_vertices(&self) -> std::collections::BTreeSet<usize> {
        self.terms.keys().flatten().copied().collect()
    }

    /// Text form: `chain <degree>` then `num/den v0 v1 [v2]` lines.
    pub fn to_file_string(&self) -> String {
        let mut s = format!("chain {}\n", self.degree);
        for (tuple, coeff) in &self.terms {
            let ids: Vec<String> = tuple.iter().map(|v| v.to_string()).collect();
            s.push_str(&format!(
                "{}/{} {}\n",
                coeff.numer(),
                coeff.denom(),
                ids.join(" ")
            ));
        }
        s
    }

    pub fn from_file_string(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty chain file".into()))?;
        let mut it = header.split_whitespace();
        if it.next() != Some("chain") {
            return Err(Error::Parse("chain file must start with `chain <degree>`".into()));
        }
        let degree: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad chain degree".into()))?;
        let mut chain = Chain::zero(degree);
        for line in lines {
            let mut it = line.split_whitespace();
            let coeff = crate::ratio::parse_ratio(
                it.next()
                    .ok_or_else(|| Error::Parse(format!("bad term `{line}`")))?,
            )?;
            let tuple: Vec<usize> = it
                .map(|t| {
                    t.parse()
                        .map_err(|_| Error::Parse(format!("bad vertex in `{line}`")))
                })
                .collect::<Result<_>>()?;
            if tuple.len() != degree + 1 {
                return Err(Error::Parse(format!(
                    "term `{line}` has {} vertices, expected {}",
                    tuple.len(),
                    degree + 1
                )));
            }
            chain.add_term(tuple, coeff);
        }
        Ok(chain)
    }
}

/// The 1-chain of a path: the sum of its oriented edges, one `(tail, head)`
/// pair per step. Paths are vertex sequences; a single vertex gives the zero
/// chain.
pub fn path_chain(path: &[usize]) -> Chain {
    let mut c = Chain::zero(1);
    for w in path.windows(2) {
        c.add_term(vec![w[0], w[1]], Ratio::from_integer(1.into()));
    }
    c
}

/// Cone over a 1-cycle: replaces each term `α (x,y)` by `α (v,x,y)`.
///
/// When `∂b = 0` the result fills `b` exactly: `∂(cone(v, b)) = b`.
pub fn cone(v: usize, b: &Chain) -> Result<Chain> {
    if !b.boundary()?.is_zero() {
        return Err(Error::NotACycle);
    }
    let mut out = Chain::zero(2);
    for (tuple, coeff) in b.terms() {
        out.add_term(vec![v, tuple[0], tuple[1]], coeff.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle_graph, Graph};
    use crate::ratio::{frac, ratio};

    #[test]
    fn boundary_of_edge_and_triangle() {
        let b = Chain::basis(&[1, 2]).boundary().unwrap();
        let mut expect = Chain::zero(0);
        expect.add_term(vec![2], ratio(1));
        expect.add_term(vec![1], ratio(-1));
        assert_eq!(b, expect);

        let b = Chain::basis(&[0, 1, 2]).boundary().unwrap();
        let mut expect = Chain::zero(1);
        expect.add_term(vec![1, 2], ratio(1));
        expect.add_term(vec![0, 2], ratio(-1));
        expect.add_term(vec![0, 1], ratio(1));
        assert_eq!(b, expect);
    }

    #[test]
    fn boundary_of_degenerate_triple() {
        // ∂(x,x,y) = (x,y) - (x,y) + (x,x) = (x,x)
        let b = Chain::basis(&[3, 3, 5]).boundary().unwrap();
        assert_eq!(b, Chain::basis(&[3, 3]));
    }

    #[test]
    fn degree_zero_boundary_errors() {
        assert_eq!(Chain::basis(&[0]).boundary(), Err(Error::DegreeZero));
    }

    #[test]
    fn l1_norm_merges_terms() {
        assert!(Chain::zero(1).l1_norm().is_zero());

        let mut c = Chain::zero(1);
        c.add_term(vec![0, 1], ratio(1));
        c.add_term(vec![1, 2], ratio(1));
        c.add_term(vec![0, 2], ratio(-1));
        assert_eq!(c.l1_norm(), ratio(3));

        let mut c = Chain::zero(1);
        c.add_term(vec![0, 1], frac(1, 2));
        c.add_term(vec![0, 1], frac(-1, 2));
        assert!(c.is_zero());
        assert!(c.l1_norm().is_zero());
    }

    #[test]
    fn diameter_examples() {
        let c6 = cycle_graph(6);
        let t = c6.metric();
        assert_eq!(Chain::basis(&[2, 2, 2]).diameter(&t), 0);
        assert_eq!(Chain::basis(&[0, 3]).diameter(&t), 3);

        let two = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let t = two.metric();
        assert_eq!(Chain::basis(&[0, 2]).diameter(&t), crate::graph::INF);
    }

    #[test]
    fn cone_fills_cycles() {
        let zero = Chain::zero(1);
        assert!(cone(0, &zero).unwrap().is_zero());

        let mut tri = Chain::zero(1);
        tri.add_term(vec![0, 1], ratio(1));
        tri.add_term(vec![1, 2], ratio(1));
        tri.add_term(vec![0, 2], ratio(-1));
        let c = cone(0, &tri).unwrap();
        assert_eq!(c.boundary().unwrap(), tri);

        let hex: Vec<usize> = vec![0, 1, 2, 3, 4, 5, 0];
        let cycle = path_chain(&hex);
        let c = cone(0, &cycle).unwrap();
        assert_eq!(c.l1_norm(), ratio(6));
        assert_eq!(c.boundary().unwrap(), cycle);

        let not_cycle = Chain::basis(&[0, 1]);
        assert_eq!(cone(0, &not_cycle), Err(Error::NotACycle));
    }

    #[test]
    fn chain_file_round_trip() {
        let mut c = Chain::zero(2);
        c.add_term(vec![0, 1, 2], frac(3, 7));
        c.add_term(vec![2, 2, 5], ratio(-4));
        let back = Chain::from_file_string(&c.to_file_string()).unwrap();
        assert_eq!(c, back);
    }
}
