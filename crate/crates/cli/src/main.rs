//! Command-line surface for the ellinf toolkit.
//!
//! Output is line-oriented `key=value` text with exact rationals printed as
//! `num/den`, so runs diff cleanly against each other. Exit codes: 0 on
//! success, 1 on a computation error, 2 on a parse error.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};

use ellinf::chain::Chain;
use ellinf::cochain::{
    construct_primitive, excision_inverse, make_relative, pair_map, Cochain, PrimitiveConfig,
};
use ellinf::cusped::{cusp, truncated_pair};
use ellinf::decomposition::decompose;
use ellinf::error::Error;
use ellinf::filling::{
    enumerate_cycle_chains, filling_norm, isoperimetric_profile, linear_ipi_constant,
    FillingValue, DEFAULT_VARIABLE_CAP,
};
use ellinf::graph::{
    cayley_ball, coset_family, groups, CayleyBall, GeodesicTable, Graph, SubgraphFamily,
};
use ellinf::hyperbolicity::{delta_fourpoint, delta_slim, delta_slim_sampled};
use ellinf::projections::{check_axioms, extend_cocycle, nearest_point_system, rel_order};
use ellinf::ratio::{format_ratio, Ratio, Vector};

#[derive(Parser)]
#[command(
    name = "ellinf",
    version,
    about = "Filling norms, cusped spaces and graded cochains on finite graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact filling norm of a 1-chain at grade R.
    Fill(FillArgs),
    /// Empirical isoperimetric profile of a graph.
    Profile(ProfileArgs),
    /// Measured linear-isoperimetric constant over enumerated cycles.
    Ipi(IpiArgs),
    /// Slim-triangle and four-point delta estimates.
    Delta(DeltaArgs),
    /// Cusped space of a graph and family, emitted as graph + family files.
    Cusp(CuspArgs),
    /// Path/cycle decomposition of a chain in C_1^1.
    Decompose(DecomposeArgs),
    /// Nearest-point projection system and its axiom constants.
    Project(ProjectArgs),
    /// Extend per-member 1-cocycles to a global one.
    Extend(ExtendArgs),
    /// Norm-controlled primitive of a 2-cocycle.
    Primitive(PrimitiveArgs),
    /// Replace a cocycle by a cohomologous one vanishing on a family.
    Relative(RelativeArgs),
    /// Excision quasi-inverse of a map of pairs.
    Excise(ExciseArgs),
    /// Cayley ball -> coset family -> cusped space -> full report.
    Pipeline(PipelineArgs),
}

#[derive(Args)]
struct FillArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    chain: PathBuf,
    #[arg(long)]
    r: u32,
    #[arg(long, default_value_t = DEFAULT_VARIABLE_CAP)]
    cap: usize,
    /// Write the optimal witness chain here.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    r: u32,
    #[arg(long, default_value_t = 6)]
    exhaustive_upto: usize,
    #[arg(long, default_value_t = 0)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_VARIABLE_CAP)]
    cap: usize,
}

#[derive(Args)]
struct IpiArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    r: u32,
    /// Enumerate closed walks up to this length.
    #[arg(long, default_value_t = 6)]
    max_len: usize,
    /// Additional cycle chain files.
    #[arg(long)]
    cycle: Vec<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_VARIABLE_CAP)]
    cap: usize,
}

#[derive(Args)]
struct DeltaArgs {
    #[arg(long)]
    graph: PathBuf,
    /// slim, fourpoint or both.
    #[arg(long, default_value = "both")]
    method: String,
    /// Exhaustive four-point cap on the vertex count.
    #[arg(long, default_value_t = 64)]
    cap: usize,
    #[arg(long, default_value_t = 200_000)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct CuspArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    family: PathBuf,
    /// Horoball depth; default picks per-member depths from the diameter.
    #[arg(long)]
    depth: Option<u32>,
    /// Truncate at depth 1 (the disjoint quasi-isometric model).
    #[arg(long, default_value_t = false)]
    truncated: bool,
    #[arg(long)]
    out_graph: PathBuf,
    #[arg(long)]
    out_family: PathBuf,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    chain: PathBuf,
    /// Comma-separated endpoint set T; defaults to the boundary support.
    #[arg(long)]
    endpoints: Option<String>,
}

#[derive(Args)]
struct ProjectArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    family: PathBuf,
    #[arg(long, default_value_t = true)]
    check_axioms: bool,
    /// Also print the Rel order for a member pair `w,y`.
    #[arg(long)]
    rel: Option<String>,
}

#[derive(Args)]
struct ExtendArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    family: PathBuf,
    /// One 1-cocycle file per member, in member order.
    #[arg(long)]
    cocycle: Vec<PathBuf>,
    #[arg(long, default_value_t = 0)]
    root: usize,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Write the extended cocycle here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PrimitiveArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    cochain: PathBuf,
    #[arg(long)]
    r0: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RelativeArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    family: PathBuf,
    #[arg(long)]
    cochain: PathBuf,
    /// Write the degree-1 correction witness here.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Args)]
struct ExciseArgs {
    #[arg(long)]
    source_graph: PathBuf,
    #[arg(long)]
    source_family: PathBuf,
    #[arg(long)]
    target_graph: PathBuf,
    #[arg(long)]
    target_family: PathBuf,
    /// Map file: `map <n> <m>`, then n vertex images, then m member images.
    #[arg(long)]
    map: PathBuf,
}

#[derive(Args)]
struct PipelineArgs {
    /// Group: z, z2, f2 or c<n>.
    #[arg(long)]
    group: String,
    /// Comma-separated subgroup generator names (subset of the ambient
    /// generators).
    #[arg(long)]
    subgroup: String,
    #[arg(long)]
    radius: u32,
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long, default_value_t = 2)]
    r: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Enumerated cycle length cap for the filling constant.
    #[arg(long, default_value_t = 3)]
    cycle_len: usize,
    /// Variable cap per filling LP in the cycle scan; oversized cycles are
    /// skipped and counted.
    #[arg(long, default_value_t = 800)]
    ipi_cap: usize,
    /// Exhaustive slim-triangle scan cap on the vertex count.
    #[arg(long, default_value_t = 220)]
    slim_cap: usize,
    /// Skip the sampled-cocycle relative/extension stage.
    #[arg(long, default_value_t = false)]
    skip_cocycle_stage: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e.downcast_ref::<Error>() {
                Some(Error::Parse(_)) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Fill(a) => cmd_fill(a),
        Command::Profile(a) => cmd_profile(a),
        Command::Ipi(a) => cmd_ipi(a),
        Command::Delta(a) => cmd_delta(a),
        Command::Cusp(a) => cmd_cusp(a),
        Command::Decompose(a) => cmd_decompose(a),
        Command::Project(a) => cmd_project(a),
        Command::Extend(a) => cmd_extend(a),
        Command::Primitive(a) => cmd_primitive(a),
        Command::Relative(a) => cmd_relative(a),
        Command::Excise(a) => cmd_excise(a),
        Command::Pipeline(a) => cmd_pipeline(a),
    }
}

fn load_graph(path: &PathBuf) -> anyhow::Result<(Graph, GeodesicTable)> {
    let text = std::fs::read_to_string(path)?;
    let g = Graph::from_file_string(&text)?;
    let t = g.metric();
    Ok((g, t))
}

fn load_family(path: &PathBuf) -> anyhow::Result<SubgraphFamily> {
    let text = std::fs::read_to_string(path)?;
    Ok(SubgraphFamily::from_file_string(&text)?)
}

fn load_chain(path: &PathBuf) -> anyhow::Result<Chain> {
    let text = std::fs::read_to_string(path)?;
    Ok(Chain::from_file_string(&text)?)
}

fn load_cochain(path: &PathBuf) -> anyhow::Result<Cochain> {
    let text = std::fs::read_to_string(path)?;
    Ok(Cochain::from_file_string(&text)?)
}

fn show_filling_value(v: &FillingValue) -> String {
    match v {
        FillingValue::Finite(r) => format_ratio(r),
        FillingValue::Infinite => "inf".to_string(),
    }
}

fn cmd_fill(a: FillArgs) -> anyhow::Result<()> {
    let (_, t) = load_graph(&a.graph)?;
    let b = load_chain(&a.chain)?;
    let res = filling_norm(&t, &b, a.r, a.cap)?;
    println!("r={}", a.r);
    println!("value={}", show_filling_value(&res.value));
    if let Some(w) = &res.witness {
        println!("witness_norm={}", format_ratio(&w.l1_norm()));
        println!("witness_support={}", w.support_len());
        if let Some(path) = &a.witness {
            std::fs::write(path, w.to_file_string())?;
            println!("witness_file={}", path.display());
        }
    }
    println!("certificate_rows={}", res.rows.len());
    Ok(())
}

fn cmd_profile(a: ProfileArgs) -> anyhow::Result<()> {
    let (g, t) = load_graph(&a.graph)?;
    let p = isoperimetric_profile(&g, &t, a.r, a.exhaustive_upto, a.samples, a.seed, a.cap)?;
    println!("r={}", p.r);
    println!("exhaustive_upto={}", p.exhaustive_upto);
    println!("sampled={}", p.sampled_count);
    for (len, value) in &p.entries {
        println!("profile_{len}={}", show_filling_value(value));
    }
    Ok(())
}

fn cmd_ipi(a: IpiArgs) -> anyhow::Result<()> {
    let (g, t) = load_graph(&a.graph)?;
    let mut cycles = enumerate_cycle_chains(&g, &t, a.max_len);
    let enumerated = cycles.len();
    for path in &a.cycle {
        cycles.push(load_chain(path)?);
    }
    let k = linear_ipi_constant(&t, a.r, &cycles, a.cap)?;
    println!("r={}", a.r);
    println!("cycles_enumerated={enumerated}");
    println!("cycles_supplied={}", cycles.len() - enumerated);
    println!("ipi_constant={}", show_filling_value(&k));
    Ok(())
}

fn cmd_delta(a: DeltaArgs) -> anyhow::Result<()> {
    let (_, t) = load_graph(&a.graph)?;
    println!("n={}", t.vertex_count());
    if a.method == "slim" || a.method == "both" {
        println!("slim={}", delta_slim(&t)?);
    }
    if a.method == "fourpoint" || a.method == "both" {
        let v = delta_fourpoint(&t, a.cap, a.samples, a.seed)?;
        println!("fourpoint={}", format_ratio(&v));
        println!("fourpoint_exhaustive={}", t.vertex_count() <= a.cap);
    }
    Ok(())
}

fn cmd_cusp(a: CuspArgs) -> anyhow::Result<()> {
    let (g, _) = load_graph(&a.graph)?;
    let family = load_family(&a.family)?;
    let space = if a.truncated {
        truncated_pair(&g, &family)?
    } else {
        cusp(&g, &family, a.depth)?
    };
    std::fs::write(&a.out_graph, space.graph.to_file_string())?;
    std::fs::write(&a.out_family, space.horoballs.to_file_string())?;
    println!("base_vertices={}", space.base_count);
    println!("total_vertices={}", space.graph.vertex_count());
    println!("horoballs={}", space.horoballs.len());
    for (k, d) in space.depths.iter().enumerate() {
        println!("depth_{k}={d}");
    }
    println!("graph_file={}", a.out_graph.display());
    println!("family_file={}", a.out_family.display());
    Ok(())
}

fn cmd_decompose(a: DecomposeArgs) -> anyhow::Result<()> {
    let (_, t) = load_graph(&a.graph)?;
    let c = load_chain(&a.chain)?;
    let support = match &a.endpoints {
        Some(s) => s
            .split(',')
            .filter(|tok| !tok.is_empty())
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad endpoint `{tok}`")))
            })
            .collect::<Result<BTreeSet<_>, _>>()?,
        None => c.boundary()?.support_vertices(),
    };
    let d = decompose(&t, &c, &support)?;
    println!("open_paths={}", d.open_paths.len());
    println!("closed_paths={}", d.closed_paths.len());
    println!("diagonal_terms={}", d.diagonal_terms.len());
    println!("reversal_pairs={}", d.reversal_pairs.len());
    for (i, (alpha, p)) in d.open_paths.iter().enumerate() {
        println!(
            "open_{i}={} @ {}",
            format_ratio(alpha),
            p.iter().map(ToString::to_string).collect::<Vec<_>>().join("-")
        );
    }
    for (i, (beta, q)) in d.closed_paths.iter().enumerate() {
        println!(
            "closed_{i}={} @ {}",
            format_ratio(beta),
            q.iter().map(ToString::to_string).collect::<Vec<_>>().join("-")
        );
    }
    for (i, (mu, x)) in d.diagonal_terms.iter().enumerate() {
        println!("diagonal_{i}={} @ {x}", format_ratio(mu));
    }
    for (i, (nu, (y, z))) in d.reversal_pairs.iter().enumerate() {
        println!("reversal_{i}={} @ ({y},{z})", format_ratio(nu));
    }
    println!("norm={}", format_ratio(&c.l1_norm()));
    println!("weighted_length={}", format_ratio(&d.weighted_length()));
    println!("reversal_mass={}", format_ratio(&d.reversal_mass()));
    Ok(())
}

fn cmd_project(a: ProjectArgs) -> anyhow::Result<()> {
    let (g, t) = load_graph(&a.graph)?;
    let family = load_family(&a.family)?;
    let sys = nearest_point_system(&g, &t, &family)?;
    println!("members={}", family.len());
    println!("disjoint={}", family.disjoint);
    if a.check_axioms {
        let report = check_axioms(&t, &sys);
        println!("bounded_projection={}", report.bounded_projection);
        println!("coarse_lipschitz={}", format_ratio(&report.coarse_lipschitz));
        println!("behrstock={}", report.behrstock);
        println!("strong_behrstock={}", report.strong_behrstock);
        println!("strong_holds_at_b={}", report.strong_holds_at_b);
        println!("b={}", format_ratio(&report.b));
        println!(
            "large_projection_pairs={}",
            report.large_projection_sets.len()
        );
        if let Some(rel) = &a.rel {
            let parts: Vec<usize> = rel
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad member index `{s}`")))
                })
                .collect::<Result<_, _>>()?;
            if parts.len() != 2 {
                return Err(Error::Parse("--rel expects `w,y`".into()).into());
            }
            let order = rel_order(&t, &sys, parts[0], parts[1], &report.b)?;
            let chain_str: Vec<String> = order.rel.iter().map(ToString::to_string).collect();
            println!("rel_order={}", chain_str.join("<"));
            println!("rho={}", order.rho());
        }
    }
    Ok(())
}

fn cmd_extend(a: ExtendArgs) -> anyhow::Result<()> {
    let (g, t) = load_graph(&a.graph)?;
    let family = load_family(&a.family)?;
    if a.cocycle.len() != family.len() {
        return Err(Error::Parse(format!(
            "{} cocycle files for {} members",
            a.cocycle.len(),
            family.len()
        ))
        .into());
    }
    let phis: Vec<Cochain> = a
        .cocycle
        .iter()
        .map(load_cochain)
        .collect::<anyhow::Result<_>>()?;
    let ext = extend_cocycle(&g, &t, &family, &phis, a.root, a.dim, None)?;
    println!("members={}", family.len());
    println!("enlarged_members={}", ext.family.len());
    println!("b={}", format_ratio(&ext.b));
    println!("lipschitz={}", format_ratio(&ext.lipschitz));
    if let Some(out) = &a.out {
        std::fs::write(out, ext.cocycle().to_file_string())?;
        println!("cocycle_file={}", out.display());
    }
    Ok(())
}

fn cmd_primitive(a: PrimitiveArgs) -> anyhow::Result<()> {
    let (g, t) = load_graph(&a.graph)?;
    let f = load_cochain(&a.cochain)?;
    let out = construct_primitive(&g, &t, &f, a.r0, &PrimitiveConfig::default())?;
    println!("r0={}", out.r0);
    println!("extension_norm={}", format_ratio(&out.extension_norm));
    println!("probed_cycles={}", out.probed_cycles);
    println!(
        "graded_norm_r0={}",
        format_ratio(&out.primitive.graded_norm(&t, a.r0))
    );
    if let Some(path) = &a.out {
        std::fs::write(path, out.primitive.to_file_string())?;
        println!("primitive_file={}", path.display());
    }
    Ok(())
}

fn cmd_relative(a: RelativeArgs) -> anyhow::Result<()> {
    let (g, _) = load_graph(&a.graph)?;
    let family = load_family(&a.family)?;
    let f = load_cochain(&a.cochain)?;
    let out = make_relative(&g, &f, &family, &PrimitiveConfig::default())?;
    println!("members={}", family.len());
    for (k, r0) in out.member_r0.iter().enumerate() {
        println!("member_{k}_r0={r0}");
    }
    out.relative.verify_vanishing()?;
    println!("vanishes_on_members=true");
    if let Some(path) = &a.witness {
        std::fs::write(path, out.relative.correction().to_file_string())?;
        println!("witness_file={}", path.display());
    }
    Ok(())
}

fn parse_map_file(text: &str) -> Result<(Vec<usize>, Vec<usize>), Error> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty map file".into()))?;
    let mut it = header.split_whitespace();
    if it.next() != Some("map") {
        return Err(Error::Parse("map file must start with `map <n> <m>`".into()));
    }
    let n: usize = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse("bad vertex count".into()))?;
    let m: usize = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse("bad member count".into()))?;
    let values: Vec<usize> = lines
        .map(|l| {
            l.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad map line `{l}`")))
        })
        .collect::<Result<_, _>>()?;
    if values.len() != n + m {
        return Err(Error::Parse(format!(
            "map file has {} entries, expected {}",
            values.len(),
            n + m
        )));
    }
    Ok((values[..n].to_vec(), values[n..].to_vec()))
}

fn cmd_excise(a: ExciseArgs) -> anyhow::Result<()> {
    let (gs, ts) = load_graph(&a.source_graph)?;
    let fs = load_family(&a.source_family)?;
    let (gt, tt) = load_graph(&a.target_graph)?;
    let ft = load_family(&a.target_family)?;
    let text = std::fs::read_to_string(&a.map)?;
    let (vm, mm) = parse_map_file(&text)?;
    let m = pair_map((&gs, &ts, &fs), (&gt, &tt, &ft), vm, mm)?;
    let out = excision_inverse((&gs, &ts, &fs), (&gt, &tt, &ft), &m)?;
    println!("rho_plus={}", fmt_table(&m.rho_plus));
    println!("rho_minus={}", fmt_table(&m.rho_minus));
    println!("closeness_f_pi={}", fmt_table(&out.closeness_f_pi));
    println!("closeness_pi_f={}", fmt_table(&out.closeness_pi_f));
    println!("composites_close=true");
    Ok(())
}

fn fmt_table(t: &[u32]) -> String {
    t.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn build_ball(group: &str, radius: u32) -> anyhow::Result<CayleyBall> {
    match group {
        "z" => Ok(cayley_ball(&groups::IntGroup, radius)?),
        "z2" => Ok(cayley_ball(&groups::LatticeGroup, radius)?),
        "f2" => Ok(cayley_ball(&groups::FreeGroup, radius)?),
        other => {
            if let Some(n) = other.strip_prefix('c').and_then(|s| s.parse::<u64>().ok()) {
                if n >= 3 {
                    return Ok(cayley_ball(&groups::CyclicGroup(n), radius)?);
                }
            }
            Err(Error::Parse(format!("unknown group `{other}`")).into())
        }
    }
}

/// Seeded 2-cocycle on the cusped space that vanishes on all horoballs:
/// the coboundary of a sparse 1-cochain supported on cross-member pairs.
fn sample_relative_cocycle(
    t: &GeodesicTable,
    horoballs: &SubgraphFamily,
    seed: u64,
    terms: usize,
) -> Cochain {
    let n = t.vertex_count();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut g0 = Cochain::new(1, 1);
    let mut placed = 0;
    let mut attempts = 0;
    while placed < terms && attempts < 100 * terms {
        attempts += 1;
        let x = rng.gen_range(0..n);
        let y = rng.gen_range(0..n);
        let co_membered = horoballs
            .members
            .iter()
            .any(|m| m.contains(&x) && m.contains(&y));
        if x == y || co_membered {
            continue;
        }
        let v = rng.gen_range(1..=5i64);
        g0.set(vec![x, y], Vector(vec![Ratio::from_integer(v.into())]));
        placed += 1;
    }
    g0.coboundary(n)
}

fn cmd_pipeline(a: PipelineArgs) -> anyhow::Result<()> {
    println!(
        "# comparative report at radius {}; finite-ball numbers only",
        a.radius
    );
    let ball = build_ball(&a.group, a.radius)?;
    let bt = ball.graph.metric();
    println!("group={}", a.group);
    println!("radius={}", a.radius);
    println!("ball_vertices={}", ball.graph.vertex_count());

    let sub: Vec<String> = a
        .subgroup
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    let family = coset_family(&ball, &sub)?;
    println!("cosets={}", family.len());

    println!("ball_delta_slim={}", delta_slim(&bt)?);
    let fp = delta_fourpoint(&bt, 64, 200_000, a.seed)?;
    println!("ball_delta_fourpoint={}", format_ratio(&fp));

    let space = cusp(&ball.graph, &family, a.depth)?;
    let ct = space.graph.metric();
    println!("cusp_vertices={}", space.graph.vertex_count());
    if space.graph.vertex_count() <= a.slim_cap {
        println!("cusp_delta_slim={}", delta_slim(&ct)?);
        println!("cusp_delta_slim_method=exhaustive");
    } else {
        println!("cusp_delta_slim={}", delta_slim_sampled(&ct, 20_000, a.seed)?);
        println!("cusp_delta_slim_method=sampled");
    }
    let fp = delta_fourpoint(&ct, 64, 200_000, a.seed)?;
    println!("cusp_delta_fourpoint={}", format_ratio(&fp));

    let cycles = enumerate_cycle_chains(&space.graph, &ct, a.cycle_len);
    let mut skipped = 0usize;
    let mut unfillable = 0usize;
    let mut best = Ratio::from_integer(0.into());
    for b in &cycles {
        if b.is_zero() {
            continue;
        }
        match filling_norm(&ct, b, a.r, a.ipi_cap) {
            Ok(res) => match res.value {
                FillingValue::Finite(v) => {
                    let ratio = v / b.l1_norm();
                    if ratio > best {
                        best = ratio;
                    }
                }
                FillingValue::Infinite => unfillable += 1,
            },
            Err(Error::GraphTooLarge { .. }) => skipped += 1,
            Err(e) => return Err(e.into()),
        }
    }
    println!("cusp_ipi_r={}", a.r);
    println!("cusp_ipi_cycles={}", cycles.len());
    println!("cusp_ipi_skipped={skipped}");
    println!("cusp_ipi_unfillable={unfillable}");
    println!("cusp_ipi_constant={}", format_ratio(&best));

    if !space.horoballs.is_empty() {
        let sys = nearest_point_system(&space.graph, &ct, &space.horoballs)?;
        let report = check_axioms(&ct, &sys);
        println!("horoball_bounded_projection={}", report.bounded_projection);
        println!(
            "horoball_coarse_lipschitz={}",
            format_ratio(&report.coarse_lipschitz)
        );
        println!("horoball_behrstock={}", report.behrstock);
        println!("horoball_strong_behrstock={}", report.strong_behrstock);
        println!("horoball_b={}", format_ratio(&report.b));

        if !a.skip_cocycle_stage {
            let f = sample_relative_cocycle(&ct, &space.horoballs, a.seed, 6);
            println!("cocycle_support={}", f.support_len());
            let cfg = PrimitiveConfig {
                probe_cap: 60,
                probe_len_cap: 10,
                filling_cap: 1500,
                sample_pairs: 20,
                ..PrimitiveConfig::default()
            };
            let rel = make_relative(&space.graph, &f, &space.horoballs, &cfg)?;
            rel.relative.verify_vanishing()?;
            println!("relative_vanishes=true");
            let max_r0 = rel.member_r0.iter().max().copied().unwrap_or(0);
            println!("relative_max_member_r0={max_r0}");

            // Primitive on the whole cusped space, restricted per member,
            // re-extended globally; the difference vanishes on horoballs.
            let phi = construct_primitive(&space.graph, &ct, &f, a.r, &cfg)?;
            println!("phi_extension_norm={}", format_ratio(&phi.extension_norm));
            let mut phis = Vec::new();
            for member in &space.horoballs.members {
                let mut phi_y = Cochain::new(1, 1);
                for &x in member {
                    for &y in member {
                        phi_y.set(vec![x, y], phi.primitive.eval(&[x, y]));
                    }
                }
                phis.push(phi_y);
            }
            let ext = extend_cocycle(&space.graph, &ct, &space.horoballs, &phis, 0, 1, None)?;
            println!("psi_lipschitz={}", format_ratio(&ext.lipschitz));
            for member in &space.horoballs.members {
                for &x in member {
                    for &y in member {
                        let diff = &phi.primitive.eval(&[x, y]) - &ext.eval_pair(x, y);
                        assert!(diff.is_zero(), "phi - psi must vanish on horoballs");
                    }
                }
            }
            println!("phi_minus_psi_vanishes=true");
        }
    }
    Ok(())
}
