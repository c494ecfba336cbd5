//! `padic-approx`: reproducible experiments on p-adic approximation sets.
//!
//! Every subcommand prints one JSON document (or CSV where noted) to
//! stdout. Exact rationals are strings in lowest terms; the few floats are
//! rounded to 6 decimals. Hypothesis violations exit with status 2 and a
//! JSON report on stderr; other errors exit with status 1.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use padic_approx::approx::{
    admissible_numerators, build_layer, duffin_schaeffer_sum, khintchine_sum, layer_table,
    measure_claims_check, phi_reference, SeriesSum,
};
use padic_approx::dimension::{
    boxdim_fit, manifold_lower_bound, waterfill_alpha, weighted_checks, ww_exponent, Check,
    ManifoldBound, COARSE_LEVELS_SKIPPED,
};
use padic_approx::exact::{fmt_rational, parse_rational};
use padic_approx::manifold::{
    cover_depth, cover_preimage, dirichlet_h0, dirichlet_solve, dyadic_counts,
    enumerate_s_tau, DirichletSolution,
};
use padic_approx::poly::MapFixture;
use padic_approx::{
    jb_dimension, rynne_dimension, ApproxTuple, ClopenSet, DQEMap, DirichletInstance, Error,
    LinearFormSystem, PAdicInt, Psi, WWInstance, WWVariant,
};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "padic-approx", version, about = "Exact experiments in p-adic Diophantine approximation")]
struct Cli {
    /// Worker threads for parallel sweeps; 1 runs everything on one thread.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact Haar measure of one layer against φ(a0)^n Π p^-t_i.
    MeasureLayer(LayerArgs),
    /// Measure of a reduced layer and its intersection with a second one.
    ClaimsCheck(ClaimsArgs),
    /// Partial sums of Σ q^n Π ψ_i(q).
    Khintchine(SeriesArgs),
    /// Partial sums of Σ φ(q)^n Π ψ_i(q) and their ratio to the Khintchine sums.
    DuffinSchaeffer(SeriesArgs),
    /// Per-a0 table: layer measure, reference, running union, both series.
    PartialLimsup(LimsupArgs),
    /// Small vector making p-adic linear forms small.
    Minkowski(MinkowskiArgs),
    /// Rational point near a polynomial map at a given height.
    DirichletSolve(DirichletArgs),
    /// Rational points of bounded height near a polynomial map.
    EnumerateSTau(EnumerateArgs),
    /// Cover of Z_p^d by rectangles around enumerated points.
    CoverPreimage(CoverArgs),
    /// Dimension formulas.
    Dim {
        #[command(subcommand)]
        which: DimCommand,
    },
    /// Box-dimension estimate from counts or a saved set.
    Boxdim(BoxdimArgs),
}

#[derive(Args)]
struct PsiArgs {
    #[arg(long, default_value_t = 3)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// ψ as `c*q^-e` (e.g. "1/(2q)", "q^(-5/2)") or `table:v1,v2,...`.
    #[arg(long)]
    psi: String,
}

#[derive(Args)]
struct LayerArgs {
    #[command(flatten)]
    psi: PsiArgs,
    #[arg(long)]
    a0: u64,
    /// Require gcd(a_i, a0) = 1.
    #[arg(long)]
    reduced: bool,
    /// Trie depth; defaults to the layer's step exponent.
    #[arg(long)]
    depth: Option<u32>,
}

#[derive(Args)]
struct ClaimsArgs {
    #[command(flatten)]
    psi: PsiArgs,
    #[arg(long)]
    a0: u64,
    #[arg(long)]
    b0: u64,
    #[arg(long)]
    depth: Option<u32>,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long)]
    psi: String,
    #[arg(long)]
    terms: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct LimsupArgs {
    #[command(flatten)]
    psi: PsiArgs,
    #[arg(long, default_value_t = 1)]
    from: u64,
    #[arg(long)]
    to: u64,
    #[arg(long)]
    reduced: bool,
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct MinkowskiArgs {
    #[arg(long)]
    p: u64,
    /// p-adic precision K of the coefficients.
    #[arg(long, default_value_t = 30)]
    precision: u32,
    /// Forms separated by ';', coefficients by ',' (e.g. "1,2/7,-1;3,-1/5,4").
    #[arg(long)]
    forms: String,
    #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = rational)]
    tau: Vec<BigRational>,
    #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = rational)]
    sigma: Vec<BigRational>,
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    heights: Vec<u64>,
}

#[derive(Args)]
struct MapArgs {
    /// Map fixture: a JSON file or an inline JSON object.
    #[arg(long)]
    map: String,
}

#[derive(Args)]
struct DirichletArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Base point coordinates as rationals with p-unit denominators.
    #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = rational, conflicts_with = "seed")]
    x: Vec<BigRational>,
    /// Draw the base point uniformly mod p^precision instead.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 60)]
    precision: u32,
    /// Weights of the dependent coordinates.
    #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = rational)]
    tau: Vec<BigRational>,
    /// Weights of the independent coordinates.
    #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = rational)]
    v: Vec<BigRational>,
    #[arg(long = "height", num_args = 1.., value_delimiter = ',')]
    heights: Vec<u64>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Weights of the dependent coordinates.
    #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = rational)]
    tau: Vec<BigRational>,
    #[arg(long = "Hmax")]
    hmax: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct CoverArgs {
    #[command(flatten)]
    map: MapArgs,
    /// All n = d + m weights, independent coordinates first.
    #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = rational)]
    tau: Vec<BigRational>,
    #[arg(long = "Hmax")]
    hmax: u64,
    #[arg(long, value_parser = rational, default_value = "1")]
    delta: BigRational,
    /// Trie depth; defaults to the finest rectangle.
    #[arg(long)]
    depth: Option<u32>,
    /// Write the set in its text form for later `boxdim --set`.
    #[arg(long)]
    save: Option<PathBuf>,
}

#[derive(Subcommand)]
enum DimCommand {
    /// Jarník–Besicovitch value for weights τ in Z_p^n.
    Jb {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = rational)]
        tau: Vec<BigRational>,
    },
    /// Rynne's value for the real weighted set.
    Rynne {
        #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = rational)]
        tau: Vec<BigRational>,
    },
    /// Wang–Wu exponent min_A over the candidate levels.
    Ww {
        #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = rational)]
        a: Vec<BigRational>,
        #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = rational)]
        t: Vec<BigRational>,
        #[arg(long, value_enum, default_value = "k2-sum")]
        variant: Variant,
    },
    /// Lower bound on manifolds.
    Manifold {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = rational)]
        tau: Vec<BigRational>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    K2Sum,
    K3Sum,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Uniform,
    Curve,
    General,
}

#[derive(Args)]
struct BoxdimArgs {
    /// Counts as `k:N` pairs, e.g. "1:3,2:9,3:27".
    #[arg(long, conflicts_with = "set", requires = "p")]
    counts: Option<String>,
    #[arg(long)]
    p: Option<u64>,
    /// A set saved by `cover-preimage --save`.
    #[arg(long)]
    set: Option<PathBuf>,
    /// Coarse levels to drop before fitting.
    #[arg(long, default_value_t = COARSE_LEVELS_SKIPPED)]
    skip: usize,
}

fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn r(x: &BigRational) -> Value {
    Value::String(fmt_rational(x))
}

fn rs(xs: &[BigRational]) -> Value {
    Value::Array(xs.iter().map(r).collect())
}

fn f6(x: f64) -> Value {
    json!((x * 1e6).round() / 1e6)
}

fn series(s: &SeriesSum) -> Value {
    json!({"exact": s.exact.as_ref().map(r), "approx": f6(s.approx)})
}

fn checks(c: &[Check]) -> Value {
    json!(c)
}

fn psi_tuple(a: &PsiArgs) -> Result<ApproxTuple, Error> {
    ApproxTuple::symmetric(Psi::parse(&a.psi)?, a.n)
}

fn steps_depth(psi: &ApproxTuple, p: u64, a0s: impl Iterator<Item = u64>) -> Result<u32, Error> {
    let mut depth = 1;
    for a0 in a0s {
        depth = depth.max(psi.step_exponents(a0, p)?.into_iter().max().unwrap_or(0));
    }
    Ok(depth)
}

fn load_map(m: &MapArgs) -> Result<DQEMap, Error> {
    let text = if m.map.trim_start().starts_with('{') {
        m.map.clone()
    } else {
        fs::read_to_string(&m.map).map_err(|e| Error::Invalid(format!("{}: {e}", m.map)))?
    };
    let fx: MapFixture = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    DQEMap::from_fixture(&fx)
}

fn measure_layer(a: &LayerArgs) -> Result<Value, Error> {
    let psi = psi_tuple(&a.psi)?;
    let p = a.psi.p;
    let t = psi.step_exponents(a.a0, p)?;
    let depth = match a.depth {
        Some(d) => d,
        None => steps_depth(&psi, p, std::iter::once(a.a0))?,
    };
    let measure = build_layer(p, &psi, a.a0, a.reduced, depth)?.measure();
    let reference = phi_reference(p, &t, a.a0);
    Ok(json!({
        "p": p,
        "n": a.psi.n,
        "psi": a.psi.psi,
        "a0": a.a0,
        "reduced": a.reduced,
        "depth": depth,
        "t": t,
        "numerators": admissible_numerators(a.a0, p, a.reduced).len(),
        "measure": r(&measure),
        "reference": r(&reference),
        "equal": measure == reference,
    }))
}

fn claims_check(a: &ClaimsArgs) -> Result<Value, Error> {
    let psi = psi_tuple(&a.psi)?;
    let p = a.psi.p;
    let depth = match a.depth {
        Some(d) => d,
        None => steps_depth(&psi, p, [a.a0, a.b0].into_iter())?,
    };
    let c = measure_claims_check(p, &psi, a.a0, a.b0, depth)?;
    Ok(json!({
        "p": p,
        "n": a.psi.n,
        "psi": a.psi.psi,
        "a0": c.a0,
        "b0": c.b0,
        "t_a0": c.t_a0,
        "t_b0": c.t_b0,
        "measure": r(&c.measure),
        "reference": r(&c.reference),
        "equal": c.equal,
        "numerators": c.numerators,
        "disjoint_reference": r(&c.disjoint_reference),
        "disjoint": c.disjoint,
        "intersection": r(&c.intersection),
        "volume": f6(c.volume),
        "ratio": f6(c.ratio),
    }))
}

fn khintchine(a: &SeriesArgs) -> Result<Value, Error> {
    let psi = ApproxTuple::symmetric(Psi::parse(&a.psi)?, a.n)?;
    let s = khintchine_sum(&psi, a.terms)?;
    Ok(json!({"n": a.n, "psi": a.psi, "terms": a.terms, "sum": series(&s)}))
}

fn duffin_schaeffer(a: &SeriesArgs) -> Result<Value, Error> {
    let psi = ApproxTuple::symmetric(Psi::parse(&a.psi)?, a.n)?;
    let s = duffin_schaeffer_sum(&psi, a.terms)?;
    Ok(json!({
        "n": a.n,
        "psi": a.psi,
        "terms": a.terms,
        "sum": series(&s.sum),
        "khintchine": series(&s.khintchine),
        "ratio": series(&s.ratio),
    }))
}

/// CSV columns: a0, measure, reference, union_measure, khintchine_exact,
/// khintchine_approx, duffin_schaeffer_exact, duffin_schaeffer_approx.
/// Inexact sums leave the `_exact` column empty.
fn partial_limsup(a: &LimsupArgs) -> Result<Output, Error> {
    let psi = psi_tuple(&a.psi)?;
    let p = a.psi.p;
    let depth = match a.depth {
        Some(d) => d,
        None => steps_depth(&psi, p, a.from..=a.to)?,
    };
    let rows = layer_table(p, &psi, a.from..=a.to, a.reduced, depth)?;
    Ok(match a.format {
        Format::Csv => {
            let mut out = String::from(
                "a0,measure,reference,union_measure,khintchine_exact,khintchine_approx,duffin_schaeffer_exact,duffin_schaeffer_approx\n",
            );
            let exact = |s: &SeriesSum| s.exact.as_ref().map(fmt_rational).unwrap_or_default();
            for row in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{:.6},{},{:.6}\n",
                    row.a0,
                    fmt_rational(&row.measure),
                    fmt_rational(&row.reference),
                    fmt_rational(&row.union_measure),
                    exact(&row.khintchine),
                    row.khintchine.approx,
                    exact(&row.duffin_schaeffer),
                    row.duffin_schaeffer.approx,
                ));
            }
            Output::Text(out)
        }
        Format::Json => Output::Json(json!({
            "p": p,
            "n": a.psi.n,
            "psi": a.psi.psi,
            "reduced": a.reduced,
            "depth": depth,
            "rows": rows.iter().map(|row| json!({
                "a0": row.a0,
                "measure": r(&row.measure),
                "reference": r(&row.reference),
                "union_measure": r(&row.union_measure),
                "khintchine": series(&row.khintchine),
                "duffin_schaeffer": series(&row.duffin_schaeffer),
            })).collect::<Vec<_>>(),
        })),
    })
}

fn minkowski(a: &MinkowskiArgs) -> Result<Value, Error> {
    let coeffs = a
        .forms
        .split(';')
        .map(|row| row.split(',').map(|c| parse_rational(c.trim())).collect())
        .collect::<Result<Vec<Vec<_>>, _>>()?;
    let sys = LinearFormSystem::from_rationals(
        a.p,
        a.precision,
        &coeffs,
        a.heights.clone(),
        a.tau.clone(),
        a.sigma.clone(),
    )?;
    let sol = sys.solve()?;
    Ok(json!({
        "p": a.p,
        "solution": sol.solution,
        "bucket_exponents": sol.bucket_exponents,
        "lemma_valuations": sys.lemma_valuations(),
        "verified": sol.verified,
        "boundary": sol.boundary,
        "method": sol.method,
        "examined": sol.examined,
    }))
}

fn solution_json(sol: &DirichletSolution) -> Value {
    json!({
        "height": sol.height,
        "a": sol.point.a,
        "ratios": rs(&sol.point.ratios()),
        "k": sol.k,
        "method": sol.method,
        "above_threshold": sol.above_threshold,
        "fallback_reason": sol.fallback_reason,
    })
}

fn dirichlet(a: &DirichletArgs) -> Result<Value, Error> {
    let map = load_map(&a.map)?;
    let p = map.prime();
    let point: Vec<PAdicInt> = match a.seed {
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let modulus = BigUint::from(p).pow(a.precision);
            (0..map.d())
                .map(|_| {
                    let words: Vec<u32> = (0..=modulus.bits() / 32).map(|_| rng.gen()).collect();
                    PAdicInt::new(p, a.precision, BigUint::new(words) % &modulus)
                })
                .collect()
        }
        None => a
            .x
            .iter()
            .map(|x| PAdicInt::embed(x, p, a.precision))
            .collect::<Result<_, _>>()?,
    };
    let heights = if a.heights.is_empty() { vec![100] } else { a.heights.clone() };
    let inst = DirichletInstance::new(map, point.clone(), a.tau.clone(), a.v.clone(), heights[0])?;
    let h0 = dirichlet_h0(&inst)?;
    let mut solutions = Vec::new();
    for &h in &heights {
        solutions.push(solution_json(&dirichlet_solve(&inst.with_height(h)?)?));
    }
    Ok(json!({
        "p": p,
        "x": point.iter().map(|x| x.residue().to_string()).collect::<Vec<_>>(),
        "precision": a.precision,
        "tau": rs(&a.tau),
        "v": rs(&a.v),
        "h0": {
            "value": h0.h0.to_string(),
            "approx": f6(h0.h0.to_f64()),
            "binding": h0.binding,
            "min_height": h0.min_height,
            "cases": h0.entries.iter().map(|e| json!({
                "case": e.case,
                "value": e.value.to_string(),
                "approx": f6(e.value.to_f64()),
            })).collect::<Vec<_>>(),
        },
        "solutions": solutions,
    }))
}

fn enumerate(a: &EnumerateArgs) -> Result<Output, Error> {
    let map = load_map(&a.map)?;
    let points = enumerate_s_tau(&map, &a.tau, a.hmax)?;
    Ok(match a.format {
        Format::Csv => {
            let cols: Vec<String> = (0..=map.n()).map(|i| format!("a{i}")).collect();
            let mut out = format!("{},height\n", cols.join(","));
            for pt in &points {
                let a: Vec<String> = pt.a.iter().map(i64::to_string).collect();
                out.push_str(&format!("{},{}\n", a.join(","), pt.height));
            }
            Output::Text(out)
        }
        Format::Json => Output::Json(json!({
            "p": map.prime(),
            "tau": rs(&a.tau),
            "hmax": a.hmax,
            "count": points.len(),
            "dyadic_counts": dyadic_counts(&points)
                .into_iter()
                .map(|(h, c)| json!({"from": h, "count": c}))
                .collect::<Vec<_>>(),
            "points": points.iter().map(|pt| json!({"a": pt.a, "height": pt.height})).collect::<Vec<_>>(),
        })),
    })
}

fn box_counts(set: &ClopenSet) -> Result<Vec<(u32, BigUint)>, Error> {
    (1..=set.depth()).map(|k| Ok((k, set.box_count(k)?))).collect()
}

fn fit_json(counts: &[(u32, BigUint)], p: u64, skip: usize) -> Result<Value, Error> {
    let fit = boxdim_fit(counts, p, skip)?;
    Ok(json!({
        "slope": f6(fit.slope),
        "intercept": f6(fit.intercept),
        "levels": fit.levels,
        "residuals": fit.residuals.iter().map(|&x| f6(x)).collect::<Vec<_>>(),
    }))
}

fn cover(a: &CoverArgs) -> Result<Value, Error> {
    let map = load_map(&a.map)?;
    let depth = a.depth.unwrap_or_else(|| cover_depth(&map, &a.tau, &a.delta, a.hmax));
    let set = cover_preimage(&map, &a.tau, &a.delta, a.hmax, depth)?;
    if let Some(path) = &a.save {
        fs::write(path, set.to_text()).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    }
    let counts = box_counts(&set)?;
    let fit = fit_json(&counts, map.prime(), COARSE_LEVELS_SKIPPED).unwrap_or(Value::Null);
    Ok(json!({
        "p": map.prime(),
        "tau": rs(&a.tau),
        "delta": r(&a.delta),
        "hmax": a.hmax,
        "depth": depth,
        "measure": r(&set.measure()),
        "box_counts": counts.iter().map(|(k, c)| json!({"k": k, "count": c.to_string()})).collect::<Vec<_>>(),
        "boxdim": fit,
    }))
}

fn dim(which: &DimCommand) -> Result<Value, Error> {
    Ok(match which {
        DimCommand::Jb { n, tau } => {
            if let Some(n) = n {
                if *n != tau.len() {
                    return Err(Error::ShapeMismatch(format!("--n {n} with {} weights", tau.len())));
                }
            }
            let value = jb_dimension(tau)?;
            json!({"value": r(&value), "hypothesis_report": checks(&weighted_checks(tau))})
        }
        DimCommand::Rynne { tau } => {
            let v = rynne_dimension(tau)?;
            json!({"value": r(&v.value), "sorted": v.sorted})
        }
        DimCommand::Ww { a, t, variant } => {
            let inst = WWInstance::new(a.clone(), t.clone())?;
            let variant = match variant {
                Variant::K2Sum => WWVariant::K2Sum,
                Variant::K3Sum => WWVariant::K3Sum,
            };
            let v = ww_exponent(&inst, variant);
            json!({
                "value": r(&v.value),
                "argmin": r(&v.argmin),
                "partition": v.partition,
                "variant": variant,
            })
        }
        DimCommand::Manifold { which, d, m, tau } => {
            let bound = match which {
                Which::Uniform => ManifoldBound::Uniform,
                Which::Curve => ManifoldBound::Curve,
                Which::General => ManifoldBound::General,
            };
            let report = manifold_lower_bound(tau, *d, *m, bound)?;
            let mut out = json!({
                "value": r(&report.value),
                "which": bound,
                "hypothesis_report": checks(&report.checks),
            });
            if matches!(bound, ManifoldBound::General) && *m == 0 {
                out["waterfill"] = rs(&waterfill_alpha(tau)?.values);
            }
            out
        }
    })
}

fn boxdim(a: &BoxdimArgs) -> Result<Value, Error> {
    let (p, counts) = match (&a.counts, &a.set) {
        (Some(text), _) => {
            let counts = text
                .split(',')
                .map(|pair| {
                    let (k, c) = pair
                        .split_once(':')
                        .ok_or_else(|| Error::Parse(format!("expected k:N, got {pair:?}")))?;
                    let k = k.trim().parse().map_err(|_| Error::Parse(format!("level {k:?}")))?;
                    let c = c.trim().parse().map_err(|_| Error::Parse(format!("count {c:?}")))?;
                    Ok((k, c))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            (a.p.expect("clap requires --p"), counts)
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
            let set = ClopenSet::from_text(&text)?;
            (set.prime(), box_counts(&set)?)
        }
        (None, None) => return Err(Error::Invalid("give --counts or --set".into())),
    };
    let mut out = fit_json(&counts, p, a.skip)?;
    out["p"] = json!(p);
    Ok(out)
}

enum Output {
    Json(Value),
    Text(String),
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let json = |v: Result<Value, Error>| v.map(Output::Json);
    match &cli.command {
        Command::MeasureLayer(a) => json(measure_layer(a)),
        Command::ClaimsCheck(a) => json(claims_check(a)),
        Command::Khintchine(a) => json(khintchine(a)),
        Command::DuffinSchaeffer(a) => json(duffin_schaeffer(a)),
        Command::PartialLimsup(a) => partial_limsup(a),
        Command::Minkowski(a) => json(minkowski(a)),
        Command::DirichletSolve(a) => json(dirichlet(a)),
        Command::EnumerateSTau(a) => enumerate(a),
        Command::CoverPreimage(a) => json(cover(a)),
        Command::Dim { which } => json(dim(which)),
        Command::Boxdim(a) => json(boxdim(a)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .expect("thread pool is configured once");
    }
    match run(&cli) {
        Ok(Output::Json(mut v)) => {
            v["schema_version"] = json!(SCHEMA_VERSION);
            println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            ExitCode::SUCCESS
        }
        Ok(Output::Text(s)) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Err(Error::Hypothesis(msg)) => {
            let failed: Vec<&str> = msg.split("; ").collect();
            let report = json!({
                "schema_version": SCHEMA_VERSION,
                "error": "hypothesis violated",
                "failed": failed,
            });
            eprintln!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
