//! Batch front end: configure (lambda, c, D, d0), run the verification
//! suites, and emit character/singular/operator/map reports.
//!
//! Exit codes: 0 all checks pass, 1 mathematical failure (a counterexample
//! was found), 2 usage or configuration error.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use vcs_core::realize::Realization;
use vcs_core::report::{
    CharacterReport, MapReport, MapRowReport, SingularReport, SingularSpaceReport, SuiteReport,
    VerifyReport,
};
use vcs_core::scalar::{format_rational, int, is_nonnegative_integer, parse_rational, Scalar};
use vcs_core::suite::{
    commutator_suite, contravariance_suite, grading_suite, intertwine_suite, kernel_theorem_suite,
    module_axiom_suite, psd_suite, singular_cross_check,
};
use vcs_core::vcs::image_rank;
use vcs_core::verma::VermaModule;
use vcs_core::GeneratorLabel;

const INTERTWINE_SEED: u64 = 0xA11E;

#[derive(Parser)]
#[command(
    name = "affine-vcs",
    about = "Exact vector coherent state realizations of affine sl(2) highest weight modules",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the exact verification suites for the configured module.
    Verify(RunArgs),
    /// Emit the (weight, depth, dim W, rank) character table.
    Character(RunArgs),
    /// List the singular vectors per weight space and verify their images.
    Singular(RunArgs),
    /// Pretty-print a realized generator, truncated to the degree bound.
    Realize {
        #[command(flatten)]
        args: RunArgs,
        /// Generator: e[n], h[n], f[n], kappa or d.
        generator: String,
    },
    /// Compare Gram ranks with coherent-state image ranks per weight space.
    Map(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Highest weight (nonnegative integer).
    #[arg(long, default_value_t = 0)]
    lambda: i64,

    /// Central charge, a rational like "1" or "5/2".
    #[arg(long, default_value = "1")]
    c: String,

    /// Truncation degree D (= maximal depth).
    #[arg(long, default_value_t = 3)]
    degree: i64,

    /// Eigenvalue of the grading operator on V0.
    #[arg(long, default_value = "0")]
    d0: String,

    /// Output format.
    #[arg(long, default_value = "text", value_parser = ["text", "json"])]
    format: String,

    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,

    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,

    /// Abort if any weight space exceeds this dimension.
    #[arg(long, default_value_t = 2000)]
    cap: usize,
}

struct Config {
    lambda: i64,
    c: Scalar,
    degree: i64,
    d0: Scalar,
    format: String,
    out: Option<std::path::PathBuf>,
    cap: usize,
}

/// A usage/config problem (exit 2), as opposed to a math failure (exit 1).
struct UsageError(String);

impl Config {
    fn from_args(args: &RunArgs) -> Result<Self, UsageError> {
        let c = parse_rational(&args.c).map_err(|e| UsageError(e.to_string()))?;
        let d0 = parse_rational(&args.d0).map_err(|e| UsageError(e.to_string()))?;
        if args.lambda < 0 {
            return Err(UsageError(format!(
                "lambda must be nonnegative, got {}",
                args.lambda
            )));
        }
        if args.degree < 0 {
            return Err(UsageError(format!(
                "degree must be nonnegative, got {}",
                args.degree
            )));
        }
        Ok(Config {
            lambda: args.lambda,
            c,
            degree: args.degree,
            d0,
            format: args.format.clone(),
            out: args.out.clone(),
            cap: args.cap,
        })
    }

    fn c_string(&self) -> String {
        format_rational(&self.c)
    }

    fn verma(&self) -> Result<VermaModule, UsageError> {
        VermaModule::new(self.lambda, self.c.clone()).map_err(|e| UsageError(e.to_string()))
    }

    fn realization(&self) -> Result<Realization, UsageError> {
        Realization::new(self.lambda, self.c.clone(), self.d0.clone())
            .map_err(|e| UsageError(e.to_string()))
    }

    /// Enforce the weight-space dimension cap before any quadratic work.
    fn check_cap(&self, verma: &VermaModule) -> Result<(), UsageError> {
        for key in verma.keys_up_to(self.degree) {
            let dim = verma.weight_basis(key).len();
            if dim > self.cap {
                return Err(UsageError(format!(
                    "weight space (weight {}, depth {}) has dimension {dim} > cap {}; \
                     lower --degree or raise --cap",
                    key.h0_weight, key.depth, self.cap
                )));
            }
        }
        Ok(())
    }

    fn emit(&self, text: String, json: String) -> Result<(), UsageError> {
        let body = if self.format == "json" { json } else { text };
        match &self.out {
            Some(path) => std::fs::write(path, body.as_bytes())
                .map_err(|e| UsageError(format!("cannot write {}: {e}", path.display()))),
            None => {
                println!("{body}");
                Ok(())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args = match &cli.command {
        Command::Verify(a)
        | Command::Character(a)
        | Command::Singular(a)
        | Command::Map(a)
        | Command::Realize { args: a, .. } => a,
    };
    let config = match Config::from_args(args) {
        Ok(c) => c,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot build thread pool: {e}");
            return ExitCode::from(2);
        }
    };
    let result = pool.install(|| match &cli.command {
        Command::Verify(_) => cmd_verify(&config),
        Command::Character(_) => cmd_character(&config),
        Command::Singular(_) => cmd_singular(&config),
        Command::Map(_) => cmd_map(&config),
        Command::Realize { generator, .. } => cmd_realize(&config, generator),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn cmd_verify(cfg: &Config) -> Result<bool, UsageError> {
    let verma = cfg.verma()?;
    let real = cfg.realization()?;
    cfg.check_cap(&verma)?;

    let mode_bound = 3.min(cfg.degree.max(1));
    let small_depth = 3.min(cfg.degree);
    let mut outcomes = vec![
        commutator_suite(&real, mode_bound, cfg.degree),
        grading_suite(
            cfg.lambda,
            &cfg.c,
            std::slice::from_ref(&cfg.d0),
            mode_bound,
            cfg.degree,
        )
        .map_err(|e| UsageError(e.to_string()))?,
        module_axiom_suite(&verma, 2.min(mode_bound), small_depth),
        contravariance_suite(&verma, 200, small_depth, INTERTWINE_SEED),
        intertwine_suite(&verma, &real, 200, small_depth, INTERTWINE_SEED),
        kernel_theorem_suite(&verma, cfg.degree),
        singular_cross_check(&verma, cfg.degree),
    ];
    // the form is positive semidefinite exactly at the integrable points
    if is_nonnegative_integer(&(&cfg.c - int(cfg.lambda))) {
        outcomes.push(psd_suite(&verma, small_depth));
    }

    let failures: Vec<String> = outcomes.iter().flat_map(|o| o.failures.clone()).collect();
    let status = if failures.is_empty() { "pass" } else { "fail" };
    let report = VerifyReport {
        lambda: cfg.lambda,
        c: cfg.c_string(),
        degree: cfg.degree,
        d0: format_rational(&cfg.d0),
        status: status.to_string(),
        suites: outcomes.iter().map(SuiteReport::from).collect(),
        failures: failures.clone(),
    };

    let mut text = format!(
        "verify lambda={} c={} D={} d0={}\n",
        cfg.lambda,
        cfg.c_string(),
        cfg.degree,
        format_rational(&cfg.d0)
    );
    for o in &outcomes {
        let _ = writeln!(
            text,
            "  [{}] {} ({} checks)",
            if o.passed() { "PASS" } else { "FAIL" },
            o.name,
            o.checks
        );
        for f in &o.failures {
            let _ = writeln!(text, "      counterexample: {f}");
        }
    }
    let _ = write!(text, "status: {status}");
    cfg.emit(text, serde_json::to_string_pretty(&report).unwrap())?;
    Ok(failures.is_empty())
}

fn cmd_character(cfg: &Config) -> Result<bool, UsageError> {
    let verma = cfg.verma()?;
    cfg.check_cap(&verma)?;
    let rows = verma.character_table(cfg.degree);
    let report = CharacterReport::new(cfg.lambda, cfg.c_string(), cfg.degree, &rows);

    let mut text = format!(
        "character table lambda={} c={} D={}\n",
        cfg.lambda,
        cfg.c_string(),
        cfg.degree
    );
    let _ = writeln!(
        text,
        "{:>8} {:>6} {:>6} {:>6}",
        "weight", "depth", "dimW", "rank"
    );
    for r in &report.rows {
        let _ = writeln!(
            text,
            "{:>8} {:>6} {:>6} {:>6}",
            r.weight, r.depth, r.dim_w, r.rank
        );
    }
    text.pop();
    cfg.emit(text, serde_json::to_string_pretty(&report).unwrap())?;
    Ok(true)
}

fn cmd_singular(cfg: &Config) -> Result<bool, UsageError> {
    let verma = cfg.verma()?;
    cfg.check_cap(&verma)?;
    let mut spaces = Vec::new();
    let mut all_verified = true;
    let mut keys = verma.keys_up_to(cfg.degree);
    keys.sort_by_key(|k| (k.depth, -k.h0_weight));
    for key in keys {
        let vectors = verma.singular_vectors(key);
        if vectors.is_empty() {
            continue;
        }
        let verified = vectors
            .iter()
            .all(|v| vcs_core::vcs::kernel_check(&verma, v));
        all_verified &= verified;
        spaces.push(SingularSpaceReport {
            weight: key.h0_weight,
            depth: key.depth,
            vectors: vectors.iter().map(|v| v.to_string()).collect(),
            verified_zero_image: verified,
        });
    }
    let report = SingularReport {
        lambda: cfg.lambda,
        c: cfg.c_string(),
        degree: cfg.degree,
        spaces: spaces.clone(),
    };

    let mut text = format!(
        "singular vectors lambda={} c={} D={}\n",
        cfg.lambda,
        cfg.c_string(),
        cfg.degree
    );
    if spaces.is_empty() {
        let _ = write!(text, "  none up to depth {}", cfg.degree);
    } else {
        for s in &spaces {
            let _ = writeln!(
                text,
                "  weight {}, depth {} ({}):",
                s.weight,
                s.depth,
                if s.verified_zero_image {
                    "image verified zero"
                } else {
                    "IMAGE NOT ZERO"
                }
            );
            for v in &s.vectors {
                let _ = writeln!(text, "    {v}");
            }
        }
        text.pop();
    }
    cfg.emit(text, serde_json::to_string_pretty(&report).unwrap())?;
    Ok(all_verified)
}

fn cmd_realize(cfg: &Config, generator: &str) -> Result<bool, UsageError> {
    let g: GeneratorLabel = generator
        .parse()
        .map_err(|e: vcs_core::Error| UsageError(e.to_string()))?;
    let real = cfg.realization()?;
    let rendered = real.operator(g).render(cfg.degree);
    let text = format!("ξ({g}) = {rendered}");
    let json = serde_json::to_string_pretty(&serde_json::json!({
        "lambda": cfg.lambda,
        "c": cfg.c_string(),
        "D": cfg.degree,
        "generator": g.to_string(),
        "operator": rendered,
    }))
    .unwrap();
    cfg.emit(text, json)?;
    Ok(true)
}

fn cmd_map(cfg: &Config) -> Result<bool, UsageError> {
    let verma = cfg.verma()?;
    cfg.check_cap(&verma)?;
    let mut rows = Vec::new();
    let mut all_agree = true;
    for key in verma.keys_up_to(cfg.degree) {
        let dim_w = verma.weight_basis(key).len();
        let rank = verma.gram_rank(key);
        let image = image_rank(&verma, key);
        let agree = rank == image;
        all_agree &= agree;
        rows.push(MapRowReport {
            weight: key.h0_weight,
            depth: key.depth,
            dim_w,
            rank,
            image_rank: image,
            agree,
        });
    }
    rows.sort_by_key(|r| (r.depth, -r.weight));
    let report = MapReport {
        lambda: cfg.lambda,
        c: cfg.c_string(),
        degree: cfg.degree,
        rows: rows.clone(),
    };

    let mut text = format!(
        "coherent-state map lambda={} c={} D={}\n",
        cfg.lambda,
        cfg.c_string(),
        cfg.degree
    );
    let _ = writeln!(
        text,
        "{:>8} {:>6} {:>6} {:>6} {:>10} {:>7}",
        "weight", "depth", "dimW", "rank", "imageRank", "agree"
    );
    for r in &rows {
        let _ = writeln!(
            text,
            "{:>8} {:>6} {:>6} {:>6} {:>10} {:>7}",
            r.weight, r.depth, r.dim_w, r.rank, r.image_rank, r.agree
        );
    }
    text.pop();
    cfg.emit(text, serde_json::to_string_pretty(&report).unwrap())?;
    Ok(all_agree)
}
