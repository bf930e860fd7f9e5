use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use steenrod_poly::descriptor::Descriptor;
use steenrod_poly::hai_bridge::{bar_m, dims, free_module, full_faithfulness_report, reference_f_dim};
use steenrod_poly::padic_comb::{
    block_partition, brute_force_partition, p_adic, partition_distinct_sums, partition_powers, SEARCH_BOUND,
};
use steenrod_poly::steenrod::{degree, excess, is_admissible, AdemConvention, SteenrodAlgebra, SteenrodElement};
use steenrod_poly::strictpoly::{hom_p, FunctorSpec};
use steenrod_poly::unstable::{hom_u, Element, ModuleMap, TruncatedModule};
use steenrod_poly::verify::{default_ladder, default_trunc, run_suite, Suite, VerifyConfig};
use steenrod_poly::{Error, Prime};

#[derive(Parser)]
#[command(name = "steenpoly", version, about = "Steenrod algebra, unstable modules and strict polynomial functors")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Prime (2, 3 or 5)
    #[arg(long, global = true, default_value_t = 2)]
    p: u32,
    /// Truncation degree D (default 64 / 81 / 125 for p = 2 / 3 / 5)
    #[arg(long, global = true)]
    trunc: Option<usize>,
    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Truncation ladder, e.g. 24,32,48
    #[arg(long, global = true, value_delimiter = ',')]
    ladder: Option<Vec<usize>>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    Printed,
    Signed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Category {
    Poly,
    Unstable,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form of a Steenrod element in the admissible basis
    Adem {
        element: String,
        #[arg(long, value_enum, default_value_t = Convention::Printed)]
        convention: Convention,
    },
    /// Hom space between functors (poly) or evaluated modules (unstable)
    Hom {
        #[arg(value_enum)]
        category: Category,
        source: String,
        target: String,
        /// Evaluation dimension for poly (default: the degree)
        #[arg(long)]
        n: Option<usize>,
    },
    /// Run a verification suite
    Verify {
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long)]
        quick: bool,
    },
    /// Partition a list of p-powers by the p-adic digits of their sum
    Partition {
        /// Exponents l_i (ascending)
        #[arg(long, value_delimiter = ',', required = true)]
        powers: Vec<u32>,
        #[arg(long)]
        n: Option<u64>,
        /// Block sums with pairwise disjoint p-adic digits
        #[arg(long, value_delimiter = ',')]
        targets: Option<Vec<u64>>,
    },
    /// Consecutive-block partition for λ and δ
    BlockPartition {
        #[arg(long, value_delimiter = ',', required = true)]
        lambda: Vec<usize>,
        #[arg(long)]
        delta: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        powers: Vec<u32>,
    },
    /// Basis and action table of a module descriptor
    Dump { descriptor: String },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::NotPrime(_) | Error::Precondition(_) | Error::SearchBound(..) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, message: msg.into() }
}

type Outcome = Result<(Value, bool, String), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = cli.global.clone();
    if let Some(j) = g.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let start = Instant::now();
    let result = validate(&g).and_then(|p| run(&cli.command, &g, p));
    let millis = start.elapsed().as_millis();
    match result {
        Ok((payload, ok, text)) => {
            let p = g.p;
            let trunc = Prime::new(p).map(|q| g.trunc.unwrap_or_else(|| default_trunc(q))).unwrap_or(0);
            if g.format == Format::Json {
                let report = json!({
                    "command": std::env::args().skip(1).collect::<Vec<_>>(),
                    "config": {"p": p, "trunc": trunc, "seed": g.seed, "jobs": g.jobs, "format": "json"},
                    "result": payload,
                    "ok": ok,
                    "duration_ms": millis,
                });
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            } else {
                print!("{text}");
                if !text.ends_with('\n') {
                    println!();
                }
                println!("# p = {p}, D = {trunc}, {millis} ms");
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn validate(g: &Global) -> Result<Prime, Failure> {
    if ![2, 3, 5].contains(&g.p) {
        return Err(usage(format!("p = {} is not supported (use 2, 3 or 5)", g.p)));
    }
    let p = Prime::new(g.p)?;
    if g.trunc.is_some_and(|d| d > 256 || d == 0) {
        return Err(usage("truncation must lie in 1..=256"));
    }
    if let Some(l) = &g.ladder {
        if l.is_empty() || l.iter().any(|&d| d == 0 || d > 256) {
            return Err(usage("ladder rungs must lie in 1..=256"));
        }
    }
    Ok(p)
}

fn run(cmd: &Command, g: &Global, p: Prime) -> Outcome {
    match cmd {
        Command::Adem { element, convention } => cmd_adem(element, *convention, p),
        Command::Hom { category: Category::Poly, source, target, n } => cmd_hom_poly(source, target, *n, p),
        Command::Hom { category: Category::Unstable, source, target, .. } => cmd_hom_unstable(source, target, g, p),
        Command::Verify { suite, quick } => cmd_verify(suite, *quick, g, p),
        Command::Partition { powers, n, targets } => cmd_partition(powers, *n, targets.as_deref(), p),
        Command::BlockPartition { lambda, delta, powers } => cmd_block_partition(lambda, *delta, powers, p),
        Command::Dump { descriptor } => cmd_dump(descriptor, g, p),
    }
}

fn cmd_adem(text: &str, convention: Convention, p: Prime) -> Outcome {
    let conv = match convention {
        Convention::Printed => AdemConvention::Printed,
        Convention::Signed => AdemConvention::Signed,
    };
    let alg = SteenrodAlgebra::new(p, conv);
    let el = SteenrodElement::parse(text, &alg)?;
    let terms: Vec<Value> = el
        .terms()
        .map(|(m, c)| {
            json!({
                "monomial": m.to_string(),
                "coefficient": c,
                "degree": degree(m, p),
                "excess": excess(m, p),
                "admissible": is_admissible(m, p),
            })
        })
        .collect();
    let admissible = el.terms().all(|(m, _)| is_admissible(m, p));
    let mut text_out = format!("{el}\n");
    for (m, c) in el.terms() {
        text_out.push_str(&format!("  {c} * {m}: degree {}, excess {}\n", degree(m, p), excess(m, p)));
    }
    let payload = json!({
        "input": text,
        "convention": format!("{conv:?}").to_lowercase(),
        "normal_form": el.to_string(),
        "degree": el.degree(),
        "terms": terms,
        "checks": {"admissible": admissible},
    });
    Ok((payload, admissible, text_out))
}

fn parse_descriptor(s: &str) -> Result<Descriptor, Failure> {
    Ok(s.parse::<Descriptor>()?)
}

fn cmd_hom_poly(source: &str, target: &str, n: Option<usize>, p: Prime) -> Outcome {
    let f = parse_descriptor(source)?.functor()?.clone();
    let g = parse_descriptor(target)?.functor()?.clone();
    let n = n.unwrap_or(f.degree().max(g.degree()));
    let h = hom_p(&f, &g, n, p)?;
    let mut text = format!("dim Hom_P({f}, {g}) = {}", h.dim());
    if h.cross_degree {
        text.push_str(&format!(" (degrees {} and {} differ: no nonzero morphism)", f.degree(), g.degree()));
    }
    text.push('\n');
    let mut basis = Vec::new();
    if !h.cross_degree {
        let ef = steenrod_poly::strictpoly::evaluate(&f, n, p)?;
        let eg = steenrod_poly::strictpoly::evaluate(&g, n, p)?;
        for (k, phi) in h.basis.iter().enumerate() {
            let mut lines = Vec::new();
            for j in 0..phi.cols() {
                let terms = combination(&phi.column(j), &eg.labels);
                if terms != "0" {
                    lines.push(format!("{} -> {terms}", ef.labels[j]));
                }
            }
            text.push_str(&format!("basis {k}:\n"));
            for l in &lines {
                text.push_str(&format!("  {l}\n"));
            }
            basis.push(lines);
        }
    }
    let payload = json!({
        "category": "poly",
        "source": f.to_string(),
        "target": g.to_string(),
        "n": n,
        "dim": h.dim(),
        "cross_degree": h.cross_degree,
        "unknowns": h.unknowns,
        "constraints": h.constraint_count,
        "basis": basis,
        "checks": {"equivariance_verified": true},
    });
    Ok((payload, true, text))
}

fn combination(v: &[u32], labels: &[String]) -> String {
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| if c == 1 { labels[i].clone() } else { format!("{c}*{}", labels[i]) })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn build_module(d: &Descriptor, p: Prime, trunc: usize) -> Result<TruncatedModule, Failure> {
    Ok(match d {
        Descriptor::Functor(spec) => bar_m(spec, p, trunc)?,
        Descriptor::Free(n) => free_module(*n, p, trunc)?,
    })
}

/// Images of basis vectors in the lowest degree where the map is nonzero.
fn describe_map(phi: &ModuleMap, m: &TruncatedModule, n: &TruncatedModule) -> Vec<String> {
    for (&d, block) in &phi.blocks {
        if block.is_zero() {
            continue;
        }
        return (0..m.dim(d))
            .map(|i| {
                let img = phi.apply(&Element::basis(m, d, i), n.dim(d));
                format!("{} -> {}", m.labels(d)[i], combination(&img.coords, n.labels(d)))
            })
            .collect();
    }
    Vec::new()
}

fn cmd_hom_unstable(source: &str, target: &str, g: &Global, p: Prime) -> Outcome {
    let ds = parse_descriptor(source)?;
    let dt = parse_descriptor(target)?;
    let ladder = match (&g.ladder, g.trunc) {
        (Some(l), _) => l.clone(),
        (None, Some(t)) => vec![t],
        (None, None) => default_ladder(p),
    };
    let top = *ladder.iter().max().expect("nonempty");
    let m = build_module(&ds, p, top)?;
    let n = build_module(&dt, p, top)?;
    let h = hom_u(&m, &n, top)?;
    let rungs: Vec<(usize, usize)> = ladder.iter().map(|&t| (t, h.dim_at(t))).collect();
    let stable = rungs.windows(2).all(|w| w[0].1 == w[1].1);
    let mut linear = true;
    let mut basis = Vec::new();
    for phi in &h.basis {
        linear &= phi.verify_linear(&m, &n).is_ok();
        basis.push(describe_map(phi, &m, &n));
    }
    let dims_str: Vec<String> = rungs.iter().map(|(_, d)| d.to_string()).collect();
    let mut text = format!("dim Hom_U({ds}, {dt}) along ladder {ladder:?}: {}\n", dims_str.join(","));
    text.push_str(&format!("stable: {stable}; bijective up to degree {top} only\n"));
    for (k, lines) in basis.iter().enumerate() {
        text.push_str(&format!("basis {k}:\n"));
        for l in lines {
            text.push_str(&format!("  {l}\n"));
        }
    }
    let mut payload = json!({
        "category": "unstable",
        "source": ds.to_string(),
        "target": dt.to_string(),
        "ladder": rungs,
        "ladder_stable": stable,
        "dim": h.dim(),
        "basis": basis,
        "checks": {"linear": linear, "ladder_stable": stable},
    });
    // Γ^λ → S^{d,V}: attach the comparison with the polynomial side.
    if let (Descriptor::Functor(FunctorSpec::Gamma(lambda)), Descriptor::Functor(FunctorSpec::SymParam { d, m: mm })) =
        (&ds, &dt)
    {
        if lambda.iter().sum::<usize>() == *d {
            let r = full_faithfulness_report(lambda, *mm, p, &ladder)?;
            text.push_str(&format!(
                "dimP = {}, predicted = {}, bijective_at_truncation = {}\n",
                r.dim_p, r.predicted, r.bijective_at_truncation
            ));
            if let Some(f) = reference_f_dim(lambda, *mm, p) {
                text.push_str(&format!("reference dim Hom_F = {f} (quoted constant, not computed)\n"));
            }
            payload["report"] = serde_json::to_value(&r).expect("serializable");
            if let Some(f) = r.reference_f_dim {
                payload["report"]["reference_F_dim"] = json!(f);
            }
        }
    }
    Ok((payload, linear, text))
}

fn cmd_verify(suite: &str, quick: bool, g: &Global, p: Prime) -> Outcome {
    let suite: Suite = suite.parse()?;
    let mut cfg = VerifyConfig::new(p);
    cfg.quick = quick;
    cfg.seed = g.seed;
    if let Some(t) = g.trunc {
        cfg.trunc = t;
    }
    let checks = run_suite(suite, &cfg);
    let ok = checks.iter().all(|c| c.passed);
    let mut text = String::new();
    for c in &checks {
        text.push_str(&format!(
            "{} {} [{}] {} ({} ms)\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.anchor,
            c.detail,
            c.millis
        ));
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    text.push_str(&format!("{} checks, {failed} failed\n", checks.len()));
    let payload = json!({"suite": suite.to_string(), "quick": quick, "checks": checks, "failed": failed});
    Ok((payload, ok, text))
}

fn cmd_partition(powers: &[u32], n: Option<u64>, targets: Option<&[u64]>, p: Prime) -> Outcome {
    let sum: u64 = powers.iter().map(|&l| (p.value() as u64).pow(l)).sum();
    let n = n.unwrap_or(sum);
    let (part, targets) = match targets {
        Some(t) => (partition_distinct_sums(powers, t, p)?, t.to_vec()),
        None => {
            let part = partition_powers(powers, n, p)?;
            let t = p_adic(n, p).digits.iter().map(|&(c, e)| c * (p.value() as u64).pow(e)).collect();
            (part, t)
        }
    };
    let valid = part.is_valid(powers, &targets, p);
    let in_oracle = if powers.len() <= SEARCH_BOUND {
        Some(brute_force_partition(powers, &targets, p)?.contains(&part))
    } else {
        None
    };
    let ok = valid && in_oracle != Some(false);
    let payload = json!({
        "p": p.value(),
        "powers": powers,
        "n": n,
        "digits": p_adic(n, p).digits,
        "targets": targets,
        "blocks": part.blocks,
        "checks": {"sums_match": valid, "in_brute_force_list": in_oracle, "q_plus_1_ge_k": powers.len() >= p_adic(n, p).length()},
    });
    let text = format!("blocks {:?} (targets {:?}); sums match: {valid}, oracle: {in_oracle:?}\n", part.blocks, targets);
    Ok((payload, ok, text))
}

fn cmd_block_partition(lambda: &[usize], delta: u32, powers: &[u32], p: Prime) -> Outcome {
    let b = block_partition(lambda, delta, powers, p)?;
    let mut text = format!("blocks {:?} (targets {:?}); unique: {}\n", b.blocks, b.targets, b.unique);
    for w in &b.warnings {
        text.push_str(&format!("warning: {w}\n"));
    }
    let ok = !b.hypothesis_holds || (b.unique && b.blocks[0].len() <= lambda[0]);
    Ok((serde_json::to_value(&b).expect("serializable"), ok, text))
}

fn cmd_dump(descriptor: &str, g: &Global, p: Prime) -> Outcome {
    let d = parse_descriptor(descriptor)?;
    let trunc = g.trunc.unwrap_or_else(|| default_trunc(p));
    let m = build_module(&d, p, trunc)?;
    let text = m.dump();
    let payload = json!({
        "descriptor": d.to_string(),
        "dims": dims(&m),
        "dump": text.lines().collect::<Vec<_>>(),
    });
    Ok((payload, true, text))
}
