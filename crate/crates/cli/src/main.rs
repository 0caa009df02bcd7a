//! `tempered` — exact verification of chain-level identities on groups.
//!
//! Every subcommand prints one JSON document on stdout and a short summary on
//! stderr. Exit status: 0 when everything checked holds, 2 when a
//! mathematical check fails (the report carries the discrepancy), 1 on
//! usage, input or resource errors.
//!
//! Arguments that take a document accept either inline JSON (anything
//! starting with `{` or `[`) or a path to a JSON file.

use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tempered::chains::{Chain, NormSpec};
use tempered::fixtures;
use tempered::groups::GroupSpec;
use tempered::homotopy::{
    contracting_homotopy, elementary_homotopy, homotopy_norm_profile, reduce, verify_combing, verify_contraction,
    verify_homotopy_identity, Combing,
};
use tempered::json as docs;
use tempered::resolutions::{bar_cohomology_finite, cohomology_small_resolution};
use tempered::rips::{build_rips, rips_homology};
use tempered::scalar;

#[derive(Parser)]
#[command(name = "tempered", version, about = "Exact chain-level computations on finitely generated groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Group queries.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Boundaries and norms of chains.
    #[command(subcommand)]
    Chain(ChainCmd),
    /// Elementary homotopies between point maps.
    #[command(subcommand)]
    Homotopy(HomotopyCmd),
    /// Combings: axioms, contracting homotopy, norm growth.
    #[command(subcommand)]
    Comb(CombCmd),
    /// Real cohomology from the bar complex or the tree resolution.
    Cohomology {
        /// Group document.
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value_t = Method::Bar)]
        method: Method,
        /// Highest degree for the bar complex.
        #[arg(long, default_value_t = 2)]
        nmax: usize,
    },
    /// Rips complex of a finite metric space and its homology.
    Rips {
        /// Metric space document `{"points":[…],"dist":[[…]]}`.
        #[arg(long)]
        space: String,
        /// Scale, as an integer, decimal or `p/q`.
        #[arg(long)]
        radius: String,
        #[arg(long)]
        maxdim: usize,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// List `ball(R)` with word lengths.
    Ball {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        radius: usize,
    },
}

#[derive(Args)]
struct ChainInput {
    /// Chain, list of chains, or `{"group":…,"chains":[…]}`.
    #[arg(long = "in")]
    input: String,
    /// Group document, when the chains do not name one.
    #[arg(long)]
    group: Option<String>,
}

#[derive(Subcommand)]
enum ChainCmd {
    /// `δ` of each chain; the output is again a chain set.
    Boundary {
        #[command(flatten)]
        input: ChainInput,
    },
    /// Weighted norm of each chain.
    Norm {
        #[command(flatten)]
        input: ChainInput,
        /// Polynomial weight `(Σℓ+1)^k`.
        #[arg(long, conflicts_with = "alpha", required_unless_present = "alpha")]
        k: Option<u32>,
        /// Exponential weight `α^Σℓ`, `α > 1`.
        #[arg(long)]
        alpha: Option<String>,
    },
}

/// Chains to test: either given explicitly or drawn from a seeded generator.
#[derive(Args)]
struct ChainSource {
    /// Chain set document.
    #[arg(long)]
    chains: Option<String>,
    /// Group document (needed for random chains unless implied elsewhere).
    #[arg(long)]
    group: Option<String>,
    /// Number of random chains to draw when `--chains` is absent.
    #[arg(long, default_value_t = 20)]
    random: usize,
    /// Degrees of the random chains, cycled.
    #[arg(long = "deg", value_delimiter = ',', default_value = "1,2,3")]
    degrees: Vec<usize>,
    /// Support radius of the random chains.
    #[arg(long = "support", default_value_t = 3)]
    support: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum HomotopyCmd {
    /// Check `H(f,f′)δ + δH(f,f′) = f′_* − f_*` on each chain.
    Verify {
        /// Point map document for `f`.
        #[arg(long)]
        f: String,
        /// Point map document for `f′`.
        #[arg(long)]
        fp: String,
        #[command(flatten)]
        source: ChainSource,
    },
}

#[derive(Subcommand)]
enum CombCmd {
    /// Measure the combing constants on `ball(L)`.
    Verify {
        #[arg(long)]
        comb: String,
        #[arg(long)]
        radius: usize,
    },
    /// Apply the contracting homotopy `H` to each chain.
    Contract {
        #[arg(long)]
        comb: String,
        #[command(flatten)]
        source: ChainSource,
        /// Also check `δH + Hδ = id`.
        #[arg(long)]
        check: bool,
        /// Project degree-0 chains onto the augmentation kernel first.
        #[arg(long)]
        reduce: bool,
    },
    /// Shell maxima of `‖H(δ_t)‖^k / (Σℓ+1)^{k+m}`.
    Profile {
        #[arg(long)]
        comb: String,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        deg: usize,
        #[arg(long)]
        len: usize,
        #[arg(long)]
        radius: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Bar,
    Resolution,
}

enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok((report, summary, outcome)) => {
            let text = serde_json::to_string_pretty(&report).expect("reports serialize");
            // a closed pipe downstream (`| head`) is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            eprintln!("{summary}");
            match outcome {
                Outcome::Pass => ExitCode::SUCCESS,
                Outcome::Fail => ExitCode::from(2),
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load(arg: &str) -> anyhow::Result<Value> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    };
    docs::parse_value(&text).with_context(|| format!("parsing {}", describe(arg)))
}

fn describe(arg: &str) -> &str {
    if arg.trim_start().starts_with(['{', '[']) {
        "inline JSON"
    } else {
        arg
    }
}

fn load_group(arg: &Option<String>) -> anyhow::Result<Option<GroupSpec>> {
    arg.as_deref().map(|g| Ok(docs::group_from_json(&load(g)?)?)).transpose()
}

fn load_chains(input: &ChainInput) -> anyhow::Result<(GroupSpec, Vec<Chain>)> {
    let fallback = load_group(&input.group)?;
    Ok(docs::chains_from_json(&load(&input.input)?, fallback.as_ref())?)
}

fn source_chains(
    source: &ChainSource,
    implied: Option<&GroupSpec>,
    reduced: bool,
) -> anyhow::Result<(GroupSpec, Vec<Chain>)> {
    let explicit = load_group(&source.group)?;
    let fallback = explicit.as_ref().or(implied);
    if let Some(chains) = &source.chains {
        return Ok(docs::chains_from_json(&load(chains)?, fallback)?);
    }
    let Some(group) = fallback else { bail!("random chains need --group") };
    if source.degrees.is_empty() {
        bail!("--deg needs at least one degree");
    }
    let mut rng = fixtures::rng(source.seed);
    let chains = (0..source.random)
        .map(|i| {
            let degree = source.degrees[i % source.degrees.len()];
            if reduced {
                fixtures::random_reduced_chain(&mut rng, group, degree, source.support, 6)
            } else {
                fixtures::random_chain(&mut rng, group, degree, source.support, 6)
            }
        })
        .collect();
    Ok((group.clone(), chains))
}

fn verdict(outcome: &Outcome) -> &'static str {
    match outcome {
        Outcome::Pass => "pass",
        Outcome::Fail => "FAIL",
    }
}

fn outcome_of(ok: bool) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn run(command: Command) -> anyhow::Result<(Value, String, Outcome)> {
    match command {
        Command::Group(GroupCmd::Ball { spec, radius }) => {
            let group = docs::group_from_json(&load(&spec)?)?;
            let ball = group.ball(radius);
            let elements: Vec<Value> = ball
                .iter()
                .map(|g| Ok(json!({"element": docs::element_to_json(g), "length": group.word_length(g)?})))
                .collect::<tempered::Result<_>>()?;
            let summary = format!("ball({radius}) of {group}: {} elements", ball.len());
            let report = json!({
                "group": docs::group_to_json(&group),
                "radius": radius,
                "size": ball.len(),
                "elements": elements,
            });
            Ok((report, summary, Outcome::Pass))
        }

        Command::Chain(ChainCmd::Boundary { input }) => {
            let (group, chains) = load_chains(&input)?;
            let boundaries = chains.iter().map(Chain::boundary).collect::<tempered::Result<Vec<_>>>()?;
            let summary = format!("{} boundaries computed", boundaries.len());
            Ok((docs::chains_to_json(&group, &boundaries), summary, Outcome::Pass))
        }

        Command::Chain(ChainCmd::Norm { input, k, alpha }) => {
            let (group, chains) = load_chains(&input)?;
            let (spec, label) = match (k, alpha) {
                (Some(k), _) => (NormSpec::Polynomial(k), json!({"kind": "polynomial", "k": k})),
                (None, Some(a)) => {
                    let a = scalar::parse(&a)?;
                    (NormSpec::exponential(a.clone())?, json!({"kind": "exponential", "alpha": scalar::to_json(&a)}))
                }
                (None, None) => bail!("one of --k or --alpha is required"),
            };
            let values = chains
                .iter()
                .map(|c| Ok(docs::exact(&c.weighted_norm(&group, &spec)?)))
                .collect::<tempered::Result<Vec<_>>>()?;
            let summary = format!("{} norms computed", values.len());
            Ok((json!({"norm": label, "values": values}), summary, Outcome::Pass))
        }

        Command::Homotopy(HomotopyCmd::Verify { f, fp, source }) => {
            let (group, chains) = source_chains(&source, None, false)?;
            let f = docs::map_from_json(&group, &load(&f)?)?;
            let fp = docs::map_from_json(&group, &load(&fp)?)?;
            let mut results = Vec::with_capacity(chains.len());
            let mut failures = 0;
            for (i, c) in chains.iter().enumerate() {
                let check = verify_homotopy_identity(&f, &fp, c)?;
                failures += usize::from(!check.holds);
                let mut entry = docs::check_to_json(&check);
                entry["index"] = json!(i);
                entry["homotopy"] = docs::chain_to_json(&elementary_homotopy(&f, &fp, c)?);
                results.push(entry);
            }
            let outcome = outcome_of(failures == 0);
            let summary =
                format!("homotopy identity: {}/{} chains hold — {}", chains.len() - failures, chains.len(), verdict(&outcome));
            let report = json!({"checked": chains.len(), "failures": failures, "holds": failures == 0, "results": results});
            Ok((report, summary, outcome))
        }

        Command::Comb(CombCmd::Verify { comb, radius }) => {
            let comb = docs::combing_from_json(&load(&comb)?)?;
            let report = verify_combing(&comb, radius)?;
            let outcome = outcome_of(report.axioms_ok);
            let summary = format!(
                "combing on ball({radius}): C_obs = {}, S_obs = {}, max stabilization {} — {}",
                report.quasi_lipschitz_observed,
                report.closeness_observed,
                report.max_stabilization,
                verdict(&outcome)
            );
            Ok((docs::combing_report_to_json(&report), summary, outcome))
        }

        Command::Comb(CombCmd::Contract { comb, source, check, reduce: reduce_first }) => {
            let comb: Combing = docs::combing_from_json(&load(&comb)?)?;
            let (group, chains) = source_chains(&source, Some(comb.group()), true)?;
            if &group != comb.group() {
                bail!("chains live in {group} but the combing is on {}", comb.group());
            }
            let inputs = chains
                .iter()
                .map(|c| if reduce_first { reduce(c, &comb.base_point()) } else { Ok(c.clone()) })
                .collect::<tempered::Result<Vec<_>>>()?;
            let images = inputs
                .iter()
                .map(|c| contracting_homotopy(&comb, c, false))
                .collect::<tempered::Result<Vec<_>>>()?;
            let mut report = docs::chains_to_json(&group, &images);
            let mut outcome = Outcome::Pass;
            let mut summary = format!("contracted {} chains", images.len());
            if check {
                let checks = inputs.iter().map(|c| verify_contraction(&comb, c)).collect::<tempered::Result<Vec<_>>>()?;
                let failures = checks.iter().filter(|c| !c.holds).count();
                outcome = outcome_of(failures == 0);
                report["checks"] = json!(checks.iter().map(docs::check_to_json).collect::<Vec<_>>());
                report["failures"] = json!(failures);
                summary = format!(
                    "{summary}; δH + Hδ = id on {}/{} — {}",
                    checks.len() - failures,
                    checks.len(),
                    verdict(&outcome)
                );
            }
            Ok((report, summary, outcome))
        }

        Command::Comb(CombCmd::Profile { comb, k, deg, len, radius }) => {
            let comb = docs::combing_from_json(&load(&comb)?)?;
            let profile = homotopy_norm_profile(&comb, k, deg, len, radius)?;
            let overall = profile.max_over(0..=len);
            let summary = format!(
                "profile k={k} degree {deg} over ℓ(x₀) ≤ {len}, R = {radius}: max ratio {} ≈ {}",
                overall,
                scalar::decimal(&overall, 6)
            );
            Ok((docs::profile_report_to_json(&profile), summary, Outcome::Pass))
        }

        Command::Cohomology { group, method, nmax } => {
            let group = docs::group_from_json(&load(&group)?)?;
            let (dims, name) = match method {
                Method::Bar => (bar_cohomology_finite(&group, nmax)?, "bar"),
                Method::Resolution => (cohomology_small_resolution(&group)?, "resolution"),
            };
            let summary = format!("H^*({group}) via {name}: {dims:?}");
            Ok((docs::cohomology_report(&group, name, &dims), summary, Outcome::Pass))
        }

        Command::Rips { space, radius, maxdim } => {
            let space = docs::metric_space_from_json(&load(&space)?)?;
            let radius = scalar::parse(&radius)?;
            let complex = build_rips(&space, &radius, maxdim)?;
            let matrices = complex.boundary_matrices();
            let squares_vanish = matrices.windows(2).all(|w| w[0].mul(&w[1]).map(|m| m.is_zero()).unwrap_or(false));
            let homology = if squares_vanish { Some(rips_homology(&complex)?) } else { None };
            let outcome = outcome_of(squares_vanish);
            let summary = format!(
                "Rips complex at R = {radius}: simplices {:?}, homology {:?} — {}",
                complex.counts(),
                homology,
                verdict(&outcome)
            );
            let mut report = docs::complex_to_json(&complex);
            report["radius"] = scalar::to_json(&radius);
            report["boundary_squares_zero"] = json!(squares_vanish);
            report["homology"] = json!(homology);
            Ok((report, summary, outcome))
        }
    }
}
