//! Graded cochains with sup-norm coefficients, the coboundary operator,
//! norm-controlled primitives, relative cochains, pullbacks, homotopy
//! operators and the excision quasi-inverse.
//!
//! A cochain is a total map from vertex tuples to a finite-dimensional
//! rational vector space; only the nonzero values are stored. Norm and
//! cocycle checks exploit that: a tuple absent from the table contributes
//! nothing, so scans over the stored support are complete.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::Chain;
use crate::error::Error;
use crate::filling::{filling_norm, DEFAULT_VARIABLE_CAP};
use crate::graph::{GeodesicTable, Graph, SubgraphFamily, INF};
use crate::lp::{LpProblem, LpStatus};
use crate::ratio::{Ratio, Vector};
use crate::Result;

/// A sparse total cochain: tuples of `degree + 1` vertices mapped to
/// `dim`-dimensional rational vectors; absent tuples are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    dim: usize,
    table: BTreeMap<Vec<usize>, Vector>,
}

impl Cochain {
    pub fn new(degree: usize, dim: usize) -> Self {
        Cochain {
            degree,
            dim,
            table: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support_len(&self) -> usize {
        self.table.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Vector)> {
        self.table.iter()
    }

    pub fn eval(&self, tuple: &[usize]) -> Vector {
        debug_assert_eq!(tuple.len(), self.degree + 1);
        self.table
            .get(tuple)
            .cloned()
            .unwrap_or_else(|| Vector::zero(self.dim))
    }

    pub fn set(&mut self, tuple: Vec<usize>, value: Vector) {
        debug_assert_eq!(tuple.len(), self.degree + 1);
        debug_assert_eq!(value.dim(), self.dim);
        if value.is_zero() {
            self.table.remove(&tuple);
        } else {
            self.table.insert(tuple, value);
        }
    }

    pub fn add_to(&mut self, tuple: Vec<usize>, value: &Vector) {
        let cur = self.eval(&tuple);
        self.set(tuple, &cur + value);
    }

    /// Linear pairing with a chain of the same degree.
    pub fn eval_chain(&self, c: &Chain) -> Vector {
        let mut acc = Vector::zero(self.dim);
        for (tuple, coeff) in c.terms() {
            acc = &acc + &(&self.eval(tuple) * coeff);
        }
        acc
    }

    /// The alternating-sum value of the coboundary on one tuple.
    pub fn coboundary_at(&self, tuple: &[usize]) -> Vector {
        debug_assert_eq!(tuple.len(), self.degree + 2);
        let mut acc = Vector::zero(self.dim);
        let mut sign = false;
        for j in 0..tuple.len() {
            let mut face = tuple.to_vec();
            face.remove(j);
            let v = self.eval(&face);
            acc = if sign { &acc - &v } else { &acc + &v };
            sign = !sign;
        }
        acc
    }

    /// Materializes the coboundary over a graph on `n` vertices: only tuples
    /// with a stored face can be nonzero.
    pub fn coboundary(&self, n: usize) -> Cochain {
        let mut out = Cochain::new(self.degree + 1, self.dim);
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for (tuple, _) in &self.table {
            for j in 0..=(self.degree + 1) {
                for v in 0..n {
                    let mut up = tuple.clone();
                    up.insert(j, v);
                    if seen.insert(up.clone()) {
                        let val = self.coboundary_at(&up);
                        out.set(up, val);
                    }
                }
            }
        }
        out
    }

    /// Verifies `δf = 0` on every tuple, exactly. A violating tuple has a
    /// stored face, so enumerating stored tuples with one vertex inserted in
    /// every position is a complete check.
    pub fn verify_cocycle(&self, n: usize) -> Result<()> {
        for (tuple, _) in &self.table {
            for j in 0..=(self.degree + 1) {
                for v in 0..n {
                    let mut up = tuple.clone();
                    up.insert(j, v);
                    if !self.coboundary_at(&up).is_zero() {
                        return Err(Error::NotACocycle(up));
                    }
                }
            }
        }
        Ok(())
    }

    /// `|f|^R_∞`: the largest sup-norm over tuples of diameter at most `R`.
    pub fn graded_norm(&self, t: &GeodesicTable, r: u32) -> Ratio {
        let mut best = Ratio::zero();
        for (tuple, value) in &self.table {
            let mut diam = 0;
            for i in 0..tuple.len() {
                for j in (i + 1)..tuple.len() {
                    diam = diam.max(t.dist(tuple[i], tuple[j]));
                }
            }
            if diam <= r {
                let v = value.sup_norm();
                if v > best {
                    best = v;
                }
            }
        }
        best
    }

    /// Text form: `cochain <degree> <dim>` then `v0 .. vk val1 .. valm`.
    pub fn to_file_string(&self) -> String {
        let mut s = format!("cochain {} {}\n", self.degree, self.dim);
        for (tuple, value) in &self.table {
            let ids: Vec<String> = tuple.iter().map(|v| v.to_string()).collect();
            let vals: Vec<String> = value.0.iter().map(crate::ratio::format_ratio).collect();
            s.push_str(&format!("{} {}\n", ids.join(" "), vals.join(" ")));
        }
        s
    }

    pub fn from_file_string(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty cochain file".into()))?;
        let mut it = header.split_whitespace();
        if it.next() != Some("cochain") {
            return Err(Error::Parse(
                "cochain file must start with `cochain <degree> <dim>`".into(),
            ));
        }
        let degree: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse("bad cochain degree".into()))?;
        let dim: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse("bad coefficient dimension".into()))?;
        let mut out = Cochain::new(degree, dim);
        for line in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != degree + 1 + dim {
                return Err(Error::Parse(format!("bad cochain line `{line}`")));
            }
            let tuple: Vec<usize> = toks[..degree + 1]
                .iter()
                .map(|s| {
                    s.parse()
                        .map_err(|_| Error::Parse(format!("bad vertex in `{line}`")))
                })
                .collect::<Result<_>>()?;
            let value: Vec<Ratio> = toks[degree + 1..]
                .iter()
                .map(|s| crate::ratio::parse_ratio(s))
                .collect::<Result<_>>()?;
            out.set(tuple, Vector(value));
        }
        Ok(out)
    }
}

/// A cochain vanishing on every tuple drawn from a single family member.
///
/// Stored as `base - δ(correction)` so that the output of
/// [`make_relative`] stays compact: the correction is the degree-1 witness
/// of the cohomology, and evaluation expands the coboundary on demand.
#[derive(Debug, Clone)]
pub struct RelativeCochain {
    pub family: SubgraphFamily,
    base: Cochain,
    correction: Cochain,
}

impl RelativeCochain {
    /// Wraps a plain cochain that already vanishes on the family.
    pub fn plain(cochain: Cochain, family: SubgraphFamily) -> Result<Self> {
        let rc = RelativeCochain {
            correction: Cochain::new(cochain.degree().saturating_sub(1), cochain.dim()),
            base: cochain,
            family,
        };
        rc.validate_on_stored()?;
        Ok(rc)
    }

    pub fn from_parts(base: Cochain, correction: Cochain, family: SubgraphFamily) -> Self {
        RelativeCochain {
            base,
            correction,
            family,
        }
    }

    pub fn degree(&self) -> usize {
        self.base.degree()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn base(&self) -> &Cochain {
        &self.base
    }

    pub fn correction(&self) -> &Cochain {
        &self.correction
    }

    pub fn eval(&self, tuple: &[usize]) -> Vector {
        &self.base.eval(tuple) - &self.correction.coboundary_at(tuple)
    }

    /// Checks vanishing on member-internal tuples over the stored support of
    /// the base (complete when the correction is zero).
    fn validate_on_stored(&self) -> Result<()> {
        for (tuple, _) in self.base.entries() {
            let inside = self
                .family
                .members
                .iter()
                .any(|m| tuple.iter().all(|v| m.contains(v)));
            if inside && !self.eval(tuple).is_zero() {
                return Err(Error::Parse(format!(
                    "cochain does not vanish on member tuple {tuple:?}"
                )));
            }
        }
        Ok(())
    }

    /// Exhaustively verifies vanishing on all member-internal tuples.
    pub fn verify_vanishing(&self) -> Result<()> {
        let k = self.degree() + 1;
        for member in &self.family.members {
            let verts: Vec<usize> = member.iter().copied().collect();
            let mut idx = vec![0usize; k];
            loop {
                let tuple: Vec<usize> = idx.iter().map(|&i| verts[i]).collect();
                if !self.eval(&tuple).is_zero() {
                    return Err(Error::Parse(format!(
                        "relative cochain nonzero on member tuple {tuple:?}"
                    )));
                }
                // odometer
                let mut pos = k;
                loop {
                    if pos == 0 {
                        return Ok(());
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < verts.len() {
                        break;
                    }
                    idx[pos] = 0;
                }
                if idx.iter().all(|&i| i == 0) {
                    break;
                }
            }
        }
        Ok(())
    }
}

/// Tuning knobs for [`construct_primitive`].
#[derive(Debug, Clone)]
pub struct PrimitiveConfig {
    /// Solve the min-max extension with the rational simplex when the graph
    /// has at most this many ordered short pairs; otherwise switch to the
    /// exact maximum-mean-cycle solver for the same program.
    pub lp_pair_cap: usize,
    /// Saturation probe: only fundamental cycles up to this length get a
    /// filling LP.
    pub probe_len_cap: usize,
    /// Cap on the number of probed cycles.
    pub probe_cap: usize,
    /// Variable cap forwarded to the probe filling LPs.
    pub filling_cap: usize,
    /// Alternative-path checks per sampled pair in stage three.
    pub path_samples: usize,
    /// Pairs to sample for the alternative-path check.
    pub sample_pairs: usize,
    /// Exhaustive alternative-path verification when the graph has at most
    /// this many vertices.
    pub exhaustive_limit: usize,
    pub seed: u64,
}

impl Default for PrimitiveConfig {
    fn default() -> Self {
        PrimitiveConfig {
            lp_pair_cap: 220,
            probe_len_cap: 14,
            probe_cap: 4000,
            filling_cap: DEFAULT_VARIABLE_CAP,
            path_samples: 3,
            sample_pairs: 40,
            exhaustive_limit: 8,
            seed: 0x5eed,
        }
    }
}

/// Output of [`construct_primitive`].
#[derive(Debug, Clone)]
pub struct PrimitiveOutcome {
    /// `g` with `δg = f`, materialized sparsely over all ordered pairs.
    pub primitive: Cochain,
    /// The optimal value of the norm-minimizing extension over the short
    /// pairs: `max over pairs of diameter <= R0 of ‖g‖∞`.
    pub extension_norm: Ratio,
    /// Fundamental cycles probed for fillability at `R0`.
    pub probed_cycles: usize,
    pub r0: u32,
}

/// Finds a primitive `g` of a 2-cocycle `f` with graded-norm control.
///
/// The construction follows three stages: `h(b) = f(c)` on boundaries of
/// short chains (well defined exactly because `δf = 0`, which is verified
/// first), a norm-minimizing linear extension of `h` to the short pairs, and
/// the geodesic propagation formula for all remaining pairs. The extension
/// solves `min max |ψ + δη|` over vertex potentials `η`, either by the
/// rational simplex or, past `lp_pair_cap`, by an exact maximum-mean-cycle
/// computation whose optimum is certified by its critical cycle. The
/// returned primitive satisfies `δg = f` on every tuple; this is checked
/// exactly through a cone comparison rather than a cubic scan.
pub fn construct_primitive(
    g: &Graph,
    t: &GeodesicTable,
    f: &Cochain,
    r0: u32,
    cfg: &PrimitiveConfig,
) -> Result<PrimitiveOutcome> {
    assert_eq!(f.degree(), 2, "primitives are built for 2-cochains");
    let n = g.vertex_count();
    assert!(n > 0);
    if !g.is_connected() {
        return Err(Error::Disconnected(0, 0));
    }
    let dim = f.dim();

    f.verify_cocycle(n)?;

    // Short-pair structure: the r0-thickening of the graph.
    let mut thick_adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut ordered_pairs: Vec<(usize, usize)> = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x != y && t.dist(x, y) <= r0 {
                thick_adj[x].push(y);
                ordered_pairs.push((x, y));
            }
        }
    }

    // BFS spanning tree of the thickening (connected since the graph is).
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0u32; n];
    let mut order = vec![0usize];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for &v in &thick_adj[u] {
            if !seen[v] {
                seen[v] = true;
                parent[v] = u;
                depth[v] = depth[u] + 1;
                order.push(v);
            }
        }
    }
    debug_assert_eq!(order.len(), n);
    let tree_path = |mut a: usize, mut b: usize| -> Vec<usize> {
        let mut left = vec![a];
        let mut right = vec![b];
        while depth[a] > depth[b] {
            a = parent[a];
            left.push(a);
        }
        while depth[b] > depth[a] {
            b = parent[b];
            right.push(b);
        }
        while a != b {
            a = parent[a];
            b = parent[b];
            left.push(a);
            right.push(b);
        }
        right.pop();
        right.reverse();
        left.extend(right);
        left
    };

    // h on cycles, through cones: well defined because δf = 0.
    let h_of_cycle = |z: &Chain| -> Vector {
        let apex = z
            .terms()
            .next()
            .map(|(tuple, _)| tuple[0])
            .unwrap_or(0);
        let mut acc = Vector::zero(dim);
        for (tuple, coeff) in z.terms() {
            acc = &acc + &(&f.eval(&[apex, tuple[0], tuple[1]]) * coeff);
        }
        acc
    };

    // Particular solution ψ on all ordered short pairs, agreeing with h on
    // every short cycle. Diagonals are held separately since potentials
    // cannot move them. Tree pairs first: the canonical orientation carries
    // zero, its reverse the pinned reversal sum h((x,y)+(y,x)).
    let one = Ratio::from_integer(1.into());
    let rev_sum = |x: usize, y: usize| -> Vector { &f.eval(&[x, y, x]) + &f.eval(&[x, x, x]) };
    let mut psi: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
    for v in 0..n {
        if parent[v] != usize::MAX {
            let (x, y) = (v.min(parent[v]), v.max(parent[v]));
            psi.insert((x, y), Vector::zero(dim));
            psi.insert((y, x), rev_sum(x, y));
        }
    }
    // Non-tree pairs through their fundamental cycles.
    let mut probed = 0usize;
    for &(x, y) in &ordered_pairs {
        if x > y || psi.contains_key(&(x, y)) {
            continue;
        }
        // Fundamental cycle: (x,y) followed by the tree path back.
        let path = tree_path(y, x);
        let mut z = Chain::zero(1);
        z.add_term(vec![x, y], one.clone());
        for wpair in path.windows(2) {
            z.add_term(vec![wpair[0], wpair[1]], one.clone());
        }
        if probed < cfg.probe_cap && path.len() <= cfg.probe_len_cap {
            match filling_norm(t, &z, r0, cfg.filling_cap) {
                Ok(res) => {
                    probed += 1;
                    if !res.value.is_finite() {
                        return Err(Error::Unsaturated { r0: r0 as usize, u: x, v: y });
                    }
                }
                Err(Error::GraphTooLarge { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        let mut forward = h_of_cycle(&z);
        for wpair in path.windows(2) {
            forward = &forward - &psi[&(wpair[0], wpair[1])];
        }
        let backward = &rev_sum(x, y) - &forward;
        psi.insert((x, y), forward);
        psi.insert((y, x), backward);
    }

    // Stage two: per coordinate, minimize max |ψ + η(y) − η(x)|.
    let mut eta = vec![Vector::zero(dim); n];
    let mut extension_norm = Ratio::zero();
    for c in 0..dim {
        let scalar =
            |p: &(usize, usize)| -> Ratio { psi.get(p).map_or_else(Ratio::zero, |v| v.0[c].clone()) };
        let (t_opt, eta_c) = if ordered_pairs.is_empty() {
            (Ratio::zero(), vec![Ratio::zero(); n])
        } else if ordered_pairs.len() <= cfg.lp_pair_cap {
            minmax_by_lp(n, &ordered_pairs, &scalar)?
        } else {
            minmax_by_mean_cycle(n, &thick_adj, &scalar)?
        };
        // Exact feasibility of the potentials.
        for p in &ordered_pairs {
            let val = scalar(p) + &eta_c[p.1] - &eta_c[p.0];
            assert!(
                val.abs() <= t_opt,
                "extension potentials violate their own bound"
            );
        }
        if t_opt > extension_norm {
            extension_norm = t_opt;
        }
        for (v, e) in eta_c.into_iter().enumerate() {
            eta[v].0[c] = e;
        }
    }
    // Diagonals are forced to h((x,x)) = f((x,x,x)).
    for x in 0..n {
        let dv = f.eval(&[x, x, x]).sup_norm();
        if dv > extension_norm {
            extension_norm = dv;
        }
    }

    let g_short = |x: usize, y: usize| -> Vector {
        if x == y {
            f.eval(&[x, x, x])
        } else {
            &(&psi[&(x, y)] + &eta[y]) - &eta[x]
        }
    };

    // Stage three: geodesic propagation. Along the deterministic BFS
    // predecessor tree of each source the formula evaluates incrementally:
    //   g(a,b) = Σ g_short(p_{i-1}, p_i) − Σ_{i=1}^{m-1} f(a, p_i, p_{i+1}).
    let mut primitive = Cochain::new(1, dim);
    let mut u_vec: Vec<Vector> = vec![Vector::zero(dim); n];
    for a in 0..n {
        let mut by_dist: Vec<usize> = (0..n).collect();
        by_dist.sort_by_key(|&v| (t.dist(a, v), v));
        let mut gsum: Vec<Option<Vector>> = vec![None; n];
        for &bv in &by_dist {
            let value = if bv == a {
                Vector::zero(dim)
            } else {
                let prev = t.predecessor(a, bv).expect("connected graph");
                let mut val = &gsum[prev].clone().expect("predecessors come first")
                    + &g_short(prev, bv);
                if t.dist(a, bv) >= 2 {
                    val = &val - &f.eval(&[a, prev, bv]);
                }
                val
            };
            gsum[bv] = Some(value.clone());
            if t.dist(a, bv) <= r0 {
                assert_eq!(
                    value,
                    g_short(a, bv),
                    "geodesic formula must reproduce the extension on short pairs"
                );
            }
            if a == 0 {
                // u(x) = g(v0, x) − f((v0, v0, x)) for the cone comparison.
                u_vec[bv] = &value - &f.eval(&[0, 0, bv]);
            }
            primitive.set(vec![a, bv], value);
        }
    }

    // Cone comparison: with δf = 0 verified, δg = f on every triple is
    // equivalent to g(a,b) − f((v0,a,b)) being a potential difference.
    for a in 0..n {
        for b in 0..n {
            let lhs = &primitive.eval(&[a, b]) - &f.eval(&[0, a, b]);
            let rhs = &u_vec[b] - &u_vec[a];
            if lhs != rhs {
                return Err(Error::NotWellDefined);
            }
        }
    }

    // Sampled alternative-path independence checks.
    let eval_along = |path: &[usize]| -> Vector {
        let mut val = Vector::zero(dim);
        for w in path.windows(2) {
            val = &val + &g_short(w[0], w[1]);
        }
        for i in 1..path.len().saturating_sub(1) {
            val = &val - &f.eval(&[path[0], path[i], path[i + 1]]);
        }
        val
    };
    let check_via = |a: usize, bv: usize, w: usize| -> bool {
        let mut path = t.geodesic(a, w).expect("connected");
        let tail = t.geodesic(w, bv).expect("connected");
        path.extend_from_slice(&tail[1..]);
        eval_along(&path) == primitive.eval(&[a, bv])
    };
    if n <= cfg.exhaustive_limit {
        for a in 0..n {
            for bv in 0..n {
                for w in 0..n {
                    assert!(check_via(a, bv, w), "path independence failed");
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..cfg.sample_pairs {
            let a = rng.gen_range(0..n);
            let bv = rng.gen_range(0..n);
            for _ in 0..cfg.path_samples {
                let w = rng.gen_range(0..n);
                assert!(check_via(a, bv, w), "path independence failed");
            }
        }
    }

    Ok(PrimitiveOutcome {
        primitive,
        extension_norm,
        probed_cycles: probed,
        r0,
    })
}

/// Solves `min T  s.t.  |ψ(x,y) + η(y) − η(x)| <= T` with the exact simplex.
fn minmax_by_lp(
    n: usize,
    ordered_pairs: &[(usize, usize)],
    psi: &dyn Fn(&(usize, usize)) -> Ratio,
) -> Result<(Ratio, Vec<Ratio>)> {
    // Columns: T, then η⁺/η⁻ per vertex, then one slack per inequality.
    let rows = 2 * ordered_pairs.len();
    let cols = 1 + 2 * n + rows;
    let mut constraints = vec![vec![Ratio::zero(); cols]; rows];
    let mut rhs = vec![Ratio::zero(); rows];
    let one = Ratio::from_integer(1.into());
    for (i, &(x, y)) in ordered_pairs.iter().enumerate() {
        // ψ + η_y − η_x ≤ T:  −T + η_y − η_x + s = −ψ
        let r = 2 * i;
        constraints[r][0] = -one.clone();
        constraints[r][1 + 2 * y] = one.clone();
        constraints[r][1 + 2 * y + 1] = -one.clone();
        constraints[r][1 + 2 * x] = -one.clone();
        constraints[r][1 + 2 * x + 1] = one.clone();
        constraints[r][1 + 2 * n + r] = one.clone();
        rhs[r] = -psi(&(x, y));
        // ψ + η_y − η_x ≥ −T:  T + η_y − η_x − s = −ψ
        let r = 2 * i + 1;
        constraints[r][0] = one.clone();
        constraints[r][1 + 2 * y] = one.clone();
        constraints[r][1 + 2 * y + 1] = -one.clone();
        constraints[r][1 + 2 * x] = -one.clone();
        constraints[r][1 + 2 * x + 1] = one.clone();
        constraints[r][1 + 2 * n + r] = -one.clone();
        rhs[r] = -psi(&(x, y));
    }
    let mut objective = vec![Ratio::zero(); cols];
    objective[0] = one.clone();
    let out = LpProblem::new(objective, constraints, rhs).solve()?;
    assert_eq!(out.status, LpStatus::Optimal, "min-max extension is always feasible");
    let t_opt = out.primal[0].clone();
    let eta: Vec<Ratio> = (0..n)
        .map(|v| &out.primal[1 + 2 * v] - &out.primal[1 + 2 * v + 1])
        .collect();
    Ok((t_opt, eta))
}

/// The same optimum through Karp's maximum-mean-cycle formula on the
/// difference-constraint digraph, with Bellman-Ford potentials at the
/// optimum and the critical cycle as an exactness certificate.
fn minmax_by_mean_cycle(
    n: usize,
    thick_adj: &[Vec<usize>],
    psi: &dyn Fn(&(usize, usize)) -> Ratio,
) -> Result<(Ratio, Vec<Ratio>)> {
    // Arc weight x→y: the tighter of the two inequality directions.
    let weight = |x: usize, y: usize| -> Ratio {
        let a = psi(&(x, y));
        let b = -psi(&(y, x));
        a.max(b)
    };

    // Karp: D[k][v] = max weight of a k-step walk from the root to v.
    let mut dist: Vec<Vec<Option<Ratio>>> = vec![vec![None; n]; n + 1];
    let mut pre: Vec<Vec<usize>> = vec![vec![usize::MAX; n]; n + 1];
    dist[0][0] = Some(Ratio::zero());
    for k in 1..=n {
        for x in 0..n {
            let Some(dx) = dist[k - 1][x].clone() else {
                continue;
            };
            for &y in &thick_adj[x] {
                let cand = &dx + &weight(x, y);
                if dist[k][y].as_ref().is_none_or(|cur| cand > *cur) {
                    dist[k][y] = Some(cand);
                    pre[k][y] = x;
                }
            }
        }
    }
    let mut best: Option<(Ratio, usize)> = None;
    for v in 0..n {
        let Some(dn) = dist[n][v].clone() else {
            continue;
        };
        let mut worst: Option<Ratio> = None;
        for (k, row) in dist.iter().enumerate().take(n) {
            if let Some(dk) = &row[v] {
                let mean = (&dn - dk) / Ratio::from_integer(((n - k) as i64).into());
                if worst.as_ref().is_none_or(|cur| mean < *cur) {
                    worst = Some(mean);
                }
            }
        }
        if let Some(wv) = worst {
            if best.as_ref().is_none_or(|(cur, _)| wv > *cur) {
                best = Some((wv, v));
            }
        }
    }
    let (t_opt, critical) = best.expect("strongly connected digraph has cycles");
    let t_opt = t_opt.max(Ratio::zero());

    // Certificate: a cycle on the critical walk has mean exactly t_opt
    // (when t_opt comes from a cycle rather than the zero floor).
    if t_opt
        != Ratio::zero()
    {
        let mut walk = vec![critical];
        let mut v = critical;
        for k in (1..=n).rev() {
            v = pre[k][v];
            walk.push(v);
        }
        walk.reverse();
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        let mut cycle_bounds = None;
        for (i, &v) in walk.iter().enumerate() {
            if let Some(&j) = seen.get(&v) {
                cycle_bounds = Some((j, i));
                break;
            }
            seen.insert(v, i);
        }
        let (lo, hi) = cycle_bounds.expect("a walk of n steps repeats a vertex");
        let mut total = Ratio::zero();
        for i in lo..hi {
            total += weight(walk[i], walk[i + 1]);
        }
        let mean = total / Ratio::from_integer(((hi - lo) as i64).into());
        assert_eq!(mean, t_opt, "critical cycle certifies the optimum");
    }

    // Feasibility potentials at the optimum: shortest paths under
    // cost(x→y) = t_opt − weight(x,y), which has no negative cycles.
    let mut eta: Vec<Option<Ratio>> = vec![None; n];
    eta[0] = Some(Ratio::zero());
    for _ in 0..n {
        let mut changed = false;
        for x in 0..n {
            let Some(ex) = eta[x].clone() else { continue };
            for &y in &thick_adj[x] {
                let cand = &ex + &(&t_opt - &weight(x, y));
                if eta[y].as_ref().is_none_or(|cur| cand < *cur) {
                    eta[y] = Some(cand);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let eta: Vec<Ratio> = eta
        .into_iter()
        .map(|e| e.expect("connected"))
        .collect();
    Ok((t_opt, eta))
}

/// Output of [`make_relative`].
#[derive(Debug, Clone)]
pub struct MakeRelativeOutcome {
    pub relative: RelativeCochain,
    /// Grades at which each member's primitive construction succeeded.
    pub member_r0: Vec<u32>,
}

/// Turns a 2-cocycle into a cohomologous one vanishing on every member of a
/// disjoint family, by subtracting the coboundary of per-member primitives
/// extended by zero.
pub fn make_relative(
    g: &Graph,
    f: &Cochain,
    family: &SubgraphFamily,
    cfg: &PrimitiveConfig,
) -> Result<MakeRelativeOutcome> {
    assert_eq!(f.degree(), 2);
    if !family.disjoint {
        return Err(Error::Parse("make_relative requires a disjoint family".into()));
    }
    let dim = f.dim();
    let mut correction = Cochain::new(1, dim);
    let mut member_r0 = Vec::with_capacity(family.len());
    for (k, member) in family.members.iter().enumerate() {
        if !g.is_connected_subset(member) {
            return Err(Error::DisconnectedMember(k));
        }
        let (sub, old_ids) = g.induced(member);
        let sub_t = sub.metric();
        // Restrict f to the member in local coordinates.
        let mut local = Cochain::new(2, dim);
        let index: BTreeMap<usize, usize> =
            old_ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        for (tuple, value) in f.entries() {
            if let (Some(&a), Some(&b), Some(&c)) = (
                index.get(&tuple[0]),
                index.get(&tuple[1]),
                index.get(&tuple[2]),
            ) {
                local.set(vec![a, b, c], value.clone());
            }
        }
        // Search the smallest saturating grade.
        let max_r0 = sub_t.diameter().max(1);
        let mut found = None;
        let mut last_err = Error::Unsaturated {
            r0: max_r0 as usize,
            u: 0,
            v: 0,
        };
        for r0 in 1..=max_r0 {
            match construct_primitive(&sub, &sub_t, &local, r0, cfg) {
                Ok(out) => {
                    found = Some((r0, out));
                    break;
                }
                Err(e @ (Error::Unsaturated { .. } | Error::GraphTooLarge { .. })) => {
                    last_err = e;
                }
                Err(e) => return Err(e),
            }
        }
        let Some((r0, out)) = found else {
            return Err(last_err);
        };
        member_r0.push(r0);
        for (pair, value) in out.primitive.entries() {
            correction.add_to(vec![old_ids[pair[0]], old_ids[pair[1]]], value);
        }
    }
    let relative = RelativeCochain::from_parts(f.clone(), correction, family.clone());
    relative.verify_vanishing()?;
    Ok(MakeRelativeOutcome {
        relative,
        member_r0,
    })
}

/// A map of pairs with measured control functions.
#[derive(Debug, Clone)]
pub struct PairMap {
    pub vertex_map: Vec<usize>,
    pub member_map: Vec<usize>,
    /// Largest image distance per source distance, over pairs not sharing a
    /// member; non-decreasing.
    pub rho_plus: Vec<u32>,
    /// Smallest image distance per source distance, same domain;
    /// non-decreasing.
    pub rho_minus: Vec<u32>,
}

/// Builds and validates a relative coarsely uniform map between two pairs.
pub fn pair_map(
    source: (&Graph, &GeodesicTable, &SubgraphFamily),
    target: (&Graph, &GeodesicTable, &SubgraphFamily),
    vertex_map: Vec<usize>,
    member_map: Vec<usize>,
) -> Result<PairMap> {
    let (gs, ts, fs) = source;
    let (gt, tt, ft) = target;
    let n = gs.vertex_count();
    if vertex_map.len() != n || member_map.len() != fs.len() {
        return Err(Error::NotRelativelyUniform(
            "map sizes do not match the pair".into(),
        ));
    }
    for &v in &vertex_map {
        if v >= gt.vertex_count() {
            return Err(Error::NotRelativelyUniform(format!(
                "image vertex {v} out of range"
            )));
        }
    }
    for &k in &member_map {
        if k >= ft.len() {
            return Err(Error::NotRelativelyUniform(format!(
                "image member {k} out of range"
            )));
        }
    }
    // Condition (1): strict containment f(Y) ⊆ f_#(Y).
    for (k, member) in fs.members.iter().enumerate() {
        let image = &ft.members[member_map[k]];
        for &y in member {
            if !image.contains(&vertex_map[y]) {
                return Err(Error::NotRelativelyUniform(format!(
                    "vertex {y} of member {k} maps outside its image member"
                )));
            }
        }
    }
    // Condition (2): measured ρ₊ (and ρ₋ for excision) over pairs without a
    // common member.
    let diam = ts.diameter() as usize;
    let mut rho_plus = vec![0u32; diam + 1];
    let mut rho_minus = vec![u32::MAX; diam + 1];
    for x in 0..n {
        for y in (x + 1)..n {
            let shared = fs
                .members
                .iter()
                .any(|m| m.contains(&x) && m.contains(&y));
            if shared {
                continue;
            }
            let d = ts.dist(x, y);
            if d == INF {
                continue;
            }
            let dimg = tt.dist(vertex_map[x], vertex_map[y]);
            if dimg == INF {
                return Err(Error::NotRelativelyUniform(format!(
                    "images of {x} and {y} are disconnected"
                )));
            }
            let d = d as usize;
            rho_plus[d] = rho_plus[d].max(dimg);
            rho_minus[d] = rho_minus[d].min(dimg);
        }
    }
    // Monotone closures.
    for d in 1..rho_plus.len() {
        rho_plus[d] = rho_plus[d].max(rho_plus[d - 1]);
    }
    for d in (0..rho_minus.len().saturating_sub(1)).rev() {
        rho_minus[d] = rho_minus[d].min(rho_minus[d + 1]);
    }
    for v in rho_minus.iter_mut() {
        if *v == u32::MAX {
            *v = 0;
        }
    }
    Ok(PairMap {
        vertex_map,
        member_map,
        rho_plus,
        rho_minus,
    })
}

/// Pull-back of a relative cochain along a validated map, materialized over
/// every tuple of the source.
pub fn pullback(
    source_n: usize,
    m: &PairMap,
    alpha: &RelativeCochain,
    source_family: &SubgraphFamily,
) -> RelativeCochain {
    let k = alpha.degree();
    let dim = alpha.dim();
    let mut out = Cochain::new(k, dim);
    for_each_tuple(source_n, k + 1, |tuple| {
        let image: Vec<usize> = tuple.iter().map(|&v| m.vertex_map[v]).collect();
        let v = alpha.eval(&image);
        if !v.is_zero() {
            out.set(tuple.to_vec(), v);
        }
    });
    RelativeCochain::from_parts(
        out,
        Cochain::new(k.saturating_sub(1), dim),
        source_family.clone(),
    )
}

fn for_each_tuple(n: usize, len: usize, mut f: impl FnMut(&[usize])) {
    let mut tuple = vec![0usize; len];
    loop {
        f(&tuple);
        let mut pos = len;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < n {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

/// The prism operator of two maps with the same member map:
/// `(hα)(x₀..x_k) = Σ (−1)^i α(f(x₀)..f(x_i), f̂(x_i)..f̂(x_k))`,
/// normalized so that `δ(hα) + h(δα) = m̂*α − m*α` holds on the nose.
pub fn homotopy_operator(
    source_n: usize,
    m: &PairMap,
    m_hat: &PairMap,
    alpha: &Cochain,
) -> Result<Cochain> {
    if m.member_map != m_hat.member_map {
        return Err(Error::MismatchedSharp);
    }
    let k1 = alpha.degree();
    assert!(k1 >= 1, "the homotopy lowers degree by one");
    let k = k1 - 1;
    let dim = alpha.dim();
    let mut out = Cochain::new(k, dim);
    for_each_tuple(source_n, k + 1, |tuple| {
        let mut acc = Vector::zero(dim);
        let mut arg = vec![0usize; k1 + 1];
        for i in 0..=k {
            for (j, slot) in arg.iter_mut().enumerate() {
                *slot = if j <= i {
                    m.vertex_map[tuple[j]]
                } else {
                    m_hat.vertex_map[tuple[j - 1]]
                };
            }
            let v = alpha.eval(&arg);
            acc = if i % 2 == 0 { &acc + &v } else { &acc - &v };
        }
        if !acc.is_zero() {
            out.set(tuple.to_vec(), acc);
        }
    });
    Ok(out)
}

/// Measured relative closeness of two maps with equal member maps: the
/// largest `d(f(x₁), f̂(x₂))` per source distance over pairs without a
/// common member. Errors when the member maps differ.
pub fn relative_closeness(
    source: (&GeodesicTable, &SubgraphFamily),
    target_t: &GeodesicTable,
    m: &PairMap,
    m_hat: &PairMap,
) -> Result<Vec<u32>> {
    if m.member_map != m_hat.member_map {
        return Err(Error::MismatchedSharp);
    }
    let (ts, fs) = source;
    let n = ts.vertex_count();
    let diam = ts.diameter() as usize;
    let mut rho = vec![0u32; diam + 1];
    for x in 0..n {
        for y in 0..n {
            let shared = fs
                .members
                .iter()
                .any(|mem| mem.contains(&x) && mem.contains(&y));
            if shared {
                continue;
            }
            let d = ts.dist(x, y);
            if d == INF {
                continue;
            }
            let dimg = target_t.dist(m.vertex_map[x], m_hat.vertex_map[y]);
            if dimg == INF {
                return Err(Error::NotRelativelyUniform(
                    "closeness is infinite across components".into(),
                ));
            }
            rho[d as usize] = rho[d as usize].max(dimg);
        }
    }
    for d in 1..rho.len() {
        rho[d] = rho[d].max(rho[d - 1]);
    }
    Ok(rho)
}

/// Output of [`excision_inverse`].
#[derive(Debug, Clone)]
pub struct ExcisionOutcome {
    /// The quasi-inverse map of pairs, from the target back to the source.
    pub pi: PairMap,
    /// Closeness of `f∘π` to the identity of the target pair.
    pub closeness_f_pi: Vec<u32>,
    /// Closeness of `π∘f` to the identity of the source pair.
    pub closeness_pi_f: Vec<u32>,
}

/// Constructs the relative coarse inverse of an excision map: member points
/// pull back to the member vertex whose image is nearest, everything else to
/// a chosen preimage. Verifies the excision hypotheses and both composite
/// closeness checks.
pub fn excision_inverse(
    source: (&Graph, &GeodesicTable, &SubgraphFamily),
    target: (&Graph, &GeodesicTable, &SubgraphFamily),
    m: &PairMap,
) -> Result<ExcisionOutcome> {
    let (gs, ts, fs) = source;
    let (gt, tt, ft) = target;
    let ns = gs.vertex_count();
    let nt = gt.vertex_count();

    // f_# must be a bijection.
    {
        let mut seen = vec![false; ft.len()];
        for &k in &m.member_map {
            if seen[k] {
                return Err(Error::HypothesisViolated(format!(
                    "member map hits target member {k} twice"
                )));
            }
            seen[k] = true;
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::HypothesisViolated(
                "member map is not onto the target family".into(),
            ));
        }
    }
    // Membership equivalence.
    for (k, member) in fs.members.iter().enumerate() {
        let image = &ft.members[m.member_map[k]];
        for x in 0..ns {
            let inside = member.contains(&x);
            let image_inside = image.contains(&m.vertex_map[x]);
            if inside != image_inside {
                return Err(Error::HypothesisViolated(format!(
                    "membership equivalence fails at vertex {x} and member {k}"
                )));
            }
        }
    }
    // Surjectivity: X' = f(X) ∪ ∪Y'.
    {
        let mut covered = vec![false; nt];
        for &v in &m.vertex_map {
            covered[v] = true;
        }
        for member in &ft.members {
            for &v in member {
                covered[v] = true;
            }
        }
        if let Some(v) = covered.iter().position(|&c| !c) {
            return Err(Error::HypothesisViolated(format!(
                "target vertex {v} is neither an image nor in a member"
            )));
        }
    }

    // Build π.
    let mut inverse_member = vec![usize::MAX; ft.len()];
    for (k, &k_img) in m.member_map.iter().enumerate() {
        inverse_member[k_img] = k;
    }
    let mut pi_vertex = vec![usize::MAX; nt];
    for x_img in 0..nt {
        let owner = ft.members.iter().position(|mem| mem.contains(&x_img));
        match owner {
            Some(k_img) => {
                let k = inverse_member[k_img];
                // Nearest image point within the source member, lex minimal.
                let mut best: Option<(u32, usize)> = None;
                for &y in &fs.members[k] {
                    let d = tt.dist(x_img, m.vertex_map[y]);
                    if best.is_none_or(|(bd, by)| d < bd || (d == bd && y < by)) {
                        best = Some((d, y));
                    }
                }
                let (d, y) = best.expect("members are nonempty");
                if d == INF {
                    return Err(Error::HypothesisViolated(format!(
                        "member point {x_img} sees no image of its member"
                    )));
                }
                pi_vertex[x_img] = y;
            }
            None => {
                let y = (0..ns).find(|&y| m.vertex_map[y] == x_img).ok_or_else(|| {
                    Error::HypothesisViolated(format!(
                        "vertex {x_img} outside the members has no preimage"
                    ))
                })?;
                pi_vertex[x_img] = y;
            }
        }
    }
    let pi_member: Vec<usize> = inverse_member;

    let pi = pair_map(target, source, pi_vertex, pi_member)?;

    // Composite closeness: f∘π vs id on the target pair.
    let f_pi_vertex: Vec<usize> = pi.vertex_map.iter().map(|&y| m.vertex_map[y]).collect();
    let f_pi = pair_map(target, target, f_pi_vertex, (0..ft.len()).collect())?;
    let id_t = pair_map(
        target,
        target,
        (0..nt).collect(),
        (0..ft.len()).collect(),
    )?;
    let closeness_f_pi = relative_closeness((tt, ft), tt, &f_pi, &id_t)?;

    // π∘f vs id on the source pair.
    let pi_f_vertex: Vec<usize> = m.vertex_map.iter().map(|&v| pi.vertex_map[v]).collect();
    let pi_f = pair_map(source, source, pi_f_vertex, (0..fs.len()).collect())?;
    let id_s = pair_map(source, source, (0..ns).collect(), (0..fs.len()).collect())?;
    let closeness_pi_f = relative_closeness((ts, fs), ts, &pi_f, &id_s)?;

    Ok(ExcisionOutcome {
        pi,
        closeness_f_pi,
        closeness_pi_f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle_graph, path_graph};
    use crate::ratio::{frac, ratio};

    fn scalar(v: i64) -> Vector {
        Vector(vec![ratio(v)])
    }

    #[test]
    fn coboundary_of_constant_vanishes() {
        let mut f = Cochain::new(0, 1);
        for v in 0..4 {
            f.set(vec![v], scalar(7));
        }
        let df = f.coboundary(4);
        assert_eq!(df.support_len(), 0);
    }

    #[test]
    fn coboundary_degree_zero_example() {
        // Values (0, 1, 3) on a path: δf(0,2) = 3.
        let mut f = Cochain::new(0, 1);
        f.set(vec![1], scalar(1));
        f.set(vec![2], scalar(3));
        let df = f.coboundary(3);
        assert_eq!(df.eval(&[0, 2]), scalar(3));
        assert_eq!(df.eval(&[2, 0]), scalar(-3));
        assert_eq!(df.eval(&[1, 2]), scalar(2));
    }

    #[test]
    fn coboundary_squares_to_zero() {
        let mut f = Cochain::new(0, 2);
        f.set(vec![0], Vector(vec![ratio(1), frac(1, 2)]));
        f.set(vec![2], Vector(vec![ratio(-2), ratio(5)]));
        let df = f.coboundary(4);
        let ddf = df.coboundary(4);
        assert_eq!(ddf.support_len(), 0);
        assert!(df.verify_cocycle(4).is_ok());
    }

    #[test]
    fn pairing_adjunction() {
        // ⟨δf, c⟩ = ⟨f, ∂c⟩ for a handful of fixed cases.
        let mut f = Cochain::new(1, 1);
        f.set(vec![0, 1], scalar(2));
        f.set(vec![1, 2], scalar(-3));
        f.set(vec![2, 2], scalar(5));
        let df = f.coboundary(4);
        let mut c = Chain::zero(2);
        c.add_term(vec![0, 1, 2], ratio(2));
        c.add_term(vec![2, 2, 1], frac(-1, 3));
        assert_eq!(df.eval_chain(&c), f.eval_chain(&c.boundary().unwrap()));
    }

    #[test]
    fn cochain_file_round_trip() {
        let mut f = Cochain::new(1, 2);
        f.set(vec![0, 3], Vector(vec![frac(1, 3), ratio(0)]));
        f.set(vec![2, 2], Vector(vec![ratio(-1), ratio(4)]));
        let back = Cochain::from_file_string(&f.to_file_string()).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn primitive_of_zero_is_zero() {
        let g = cycle_graph(5);
        let t = g.metric();
        let f = Cochain::new(2, 1);
        let out = construct_primitive(&g, &t, &f, 2, &PrimitiveConfig::default()).unwrap();
        assert_eq!(out.primitive.support_len(), 0);
        assert!(out.extension_norm.is_zero());
    }

    #[test]
    fn primitive_recovers_coboundary_class() {
        // f = δg₀ for a random-ish g₀; the primitive must satisfy δg = f and
        // g − g₀ must be a cocycle.
        let g = cycle_graph(6);
        let t = g.metric();
        let n = 6;
        let mut g0 = Cochain::new(1, 1);
        let vals = [3i64, -2, 5, 1, -4, 2];
        for x in 0..n {
            for y in 0..n {
                if x != y {
                    g0.set(vec![x, y], scalar(vals[x] - vals[y] + (x as i64 % 3)));
                }
            }
        }
        let f = g0.coboundary(n);
        f.verify_cocycle(n).unwrap();
        let out = construct_primitive(&g, &t, &f, 2, &PrimitiveConfig::default()).unwrap();
        // δ(primitive) = f on all tuples.
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    assert_eq!(out.primitive.coboundary_at(&[a, b, c]), f.eval(&[a, b, c]));
                }
            }
        }
        let mut diff = Cochain::new(1, 1);
        for a in 0..n {
            for b in 0..n {
                diff.set(
                    vec![a, b],
                    &out.primitive.eval(&[a, b]) - &g0.eval(&[a, b]),
                );
            }
        }
        diff.verify_cocycle(n).unwrap();
    }

    #[test]
    fn lp_and_mean_cycle_agree() {
        // The two solvers compute the same optimum of the same program.
        let g = cycle_graph(6);
        let t = g.metric();
        let n = 6;
        let mut g0 = Cochain::new(1, 1);
        for x in 0..n {
            for y in 0..n {
                if x != y {
                    g0.set(vec![x, y], scalar((x as i64 * 2 - y as i64) % 4));
                }
            }
        }
        let f = g0.coboundary(n);
        let mut cfg_lp = PrimitiveConfig::default();
        cfg_lp.lp_pair_cap = 10_000;
        let mut cfg_mc = PrimitiveConfig::default();
        cfg_mc.lp_pair_cap = 0;
        let out_lp = construct_primitive(&g, &t, &f, 2, &cfg_lp).unwrap();
        let out_mc = construct_primitive(&g, &t, &f, 2, &cfg_mc).unwrap();
        assert_eq!(out_lp.extension_norm, out_mc.extension_norm);
    }

    #[test]
    fn primitive_rejects_non_cocycles() {
        let g = path_graph(3);
        let t = g.metric();
        let mut f = Cochain::new(2, 1);
        f.set(vec![0, 1, 2], scalar(1));
        assert!(matches!(
            construct_primitive(&g, &t, &f, 2, &PrimitiveConfig::default()),
            Err(Error::NotACocycle(_))
        ));
    }

    #[test]
    fn hexagon_unsaturated_at_grade_one() {
        // At grade 1 the hexagon's fundamental cycles are unfillable.
        let g = cycle_graph(6);
        let t = g.metric();
        let f = {
            let mut g0 = Cochain::new(1, 1);
            g0.set(vec![0, 1], scalar(2));
            g0.coboundary(6)
        };
        let res = construct_primitive(&g, &t, &f, 1, &PrimitiveConfig::default());
        assert!(matches!(res, Err(Error::Unsaturated { .. })));
    }

    #[test]
    fn relative_cochain_eval_and_vanishing() {
        let fam = SubgraphFamily::new(vec![BTreeSet::from([0, 1])]).unwrap();
        let mut base = Cochain::new(2, 1);
        base.set(vec![0, 1, 2], scalar(1));
        let rc = RelativeCochain::plain(base.clone(), fam.clone()).unwrap();
        assert_eq!(rc.eval(&[0, 1, 2]), scalar(1));
        rc.verify_vanishing().unwrap();

        let mut bad = base;
        bad.set(vec![0, 1, 0], scalar(2));
        assert!(RelativeCochain::plain(bad, fam).is_err());
    }

    #[test]
    fn homotopy_identity_on_small_graph() {
        // δ(hα) + h(δα) = m̂*α − m*α, exhaustively on a 5-vertex cycle.
        let g = cycle_graph(5);
        let t = g.metric();
        let fam = SubgraphFamily::new(vec![BTreeSet::from([0, 1])]).unwrap();
        let n = 5;
        let id: Vec<usize> = (0..n).collect();
        let mut shifted = id.clone();
        shifted[3] = 2; // a one-vertex perturbation fixing the member
        let m = pair_map((&g, &t, &fam), (&g, &t, &fam), id.clone(), vec![0]).unwrap();
        let m_hat = pair_map((&g, &t, &fam), (&g, &t, &fam), shifted, vec![0]).unwrap();

        let mut alpha = Cochain::new(2, 1);
        alpha.set(vec![0, 1, 2], scalar(3));
        alpha.set(vec![2, 4, 1], scalar(-2));
        alpha.set(vec![3, 3, 0], scalar(5));

        let h_alpha = homotopy_operator(n, &m, &m_hat, &alpha).unwrap();
        let d_alpha = alpha.coboundary(n);
        let h_d_alpha = homotopy_operator(n, &m, &m_hat, &d_alpha).unwrap();
        for_each_tuple(n, 3, |tuple| {
            let lhs = &h_alpha.coboundary_at(tuple) + &h_d_alpha.eval(tuple);
            let imaged: Vec<usize> = tuple.iter().map(|&v| m_hat.vertex_map[v]).collect();
            let imaged2: Vec<usize> = tuple.iter().map(|&v| m.vertex_map[v]).collect();
            let rhs = &alpha.eval(&imaged) - &alpha.eval(&imaged2);
            assert_eq!(lhs, rhs);
        });

        // Equal maps make the two sides vanish together.
        let h_same = homotopy_operator(n, &m, &m, &d_alpha).unwrap();
        let h_alpha_same = homotopy_operator(n, &m, &m, &alpha).unwrap();
        for_each_tuple(n, 3, |tuple| {
            let lhs = &h_alpha_same.coboundary_at(tuple) + &h_same.eval(tuple);
            assert!(lhs.is_zero());
        });
    }

    #[test]
    fn homotopy_requires_matching_member_maps() {
        let g = path_graph(4);
        let t = g.metric();
        let fam =
            SubgraphFamily::new(vec![BTreeSet::from([0]), BTreeSet::from([1])]).unwrap();
        let id: Vec<usize> = (0..4).collect();
        let swapped: Vec<usize> = vec![1, 0, 2, 3];
        let m = pair_map((&g, &t, &fam), (&g, &t, &fam), id, vec![0, 1]).unwrap();
        let m2 = pair_map((&g, &t, &fam), (&g, &t, &fam), swapped, vec![1, 0]).unwrap();
        let alpha = Cochain::new(1, 1);
        assert!(matches!(
            homotopy_operator(4, &m, &m2, &alpha),
            Err(Error::MismatchedSharp)
        ));
    }

    #[test]
    fn pullback_along_identity() {
        let g = path_graph(4);
        let t = g.metric();
        let fam = SubgraphFamily::new(vec![BTreeSet::from([0, 1])]).unwrap();
        let id: Vec<usize> = (0..4).collect();
        let m = pair_map((&g, &t, &fam), (&g, &t, &fam), id, vec![0]).unwrap();
        let mut base = Cochain::new(1, 1);
        base.set(vec![2, 3], scalar(4));
        let alpha = RelativeCochain::plain(base, fam.clone()).unwrap();
        let back = pullback(4, &m, &alpha, &fam);
        for_each_tuple(4, 2, |tuple| {
            assert_eq!(back.eval(tuple), alpha.eval(tuple));
        });
    }

    #[test]
    fn excision_identity_map() {
        let g = path_graph(5);
        let t = g.metric();
        let fam = SubgraphFamily::new(vec![BTreeSet::from([0, 1])]).unwrap();
        let id: Vec<usize> = (0..5).collect();
        let m = pair_map((&g, &t, &fam), (&g, &t, &fam), id.clone(), vec![0]).unwrap();
        let out = excision_inverse((&g, &t, &fam), (&g, &t, &fam), &m).unwrap();
        assert_eq!(out.pi.vertex_map, id);
        // Composites are identities, so the measured closeness at source
        // distance d is exactly d.
        for (d, &v) in out.closeness_f_pi.iter().enumerate() {
            assert_eq!(v as usize, d);
        }
        for (d, &v) in out.closeness_pi_f.iter().enumerate() {
            assert_eq!(v as usize, d);
        }
    }

    #[test]
    fn excision_detects_membership_failure() {
        let g = path_graph(4);
        let t = g.metric();
        let fam_s = SubgraphFamily::new(vec![BTreeSet::from([0])]).unwrap();
        let fam_t = SubgraphFamily::new(vec![BTreeSet::from([0, 1])]).unwrap();
        // Vertex 1 is outside the source member but maps into the target
        // member.
        let m = pair_map(
            (&g, &t, &fam_s),
            (&g, &t, &fam_t),
            vec![0, 1, 2, 3],
            vec![0],
        )
        .unwrap();
        assert!(matches!(
            excision_inverse((&g, &t, &fam_s), (&g, &t, &fam_t), &m),
            Err(Error::HypothesisViolated(_))
        ));
    }
}
