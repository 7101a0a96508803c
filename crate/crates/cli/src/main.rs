use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use curvlab::catalog::{self, CatalogEntry};
use curvlab::classify::{classify, Check, ClassifyConfig, Ingredients, StructureReport};
use curvlab::report::{self, MetricFile};
use curvlab::{build_metric, CurvatureBundle, Product, Tensor};
use curvlab::Expr;

#[derive(Parser)]
#[command(name = "curvlab", version, about = "Curvature tensors and curvature-restricted structures of metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the nonzero components of tensors, one per symmetry orbit.
    Components {
        /// Catalog name (optionally `name:key=value,...`) or a metric file.
        metric: String,
        /// R S C P W K G S2 S3 S4 dR dS RR RS RC CR CC QgR QSR QgC QSC KK PR, or any product such as `Q(S^2,R)`.
        #[arg(long, required = true, value_delimiter = ',')]
        tensor: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run structure checks and report the verdicts.
    Classify {
        metric: String,
        /// Run every check.
        #[arg(long)]
        all: bool,
        /// Comma-separated check names.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        /// Also dump these tensors.
        #[arg(long, value_delimiter = ',')]
        tensor: Vec<String>,
        /// Exit with status 1 unless the report matches this expectation file.
        #[arg(long)]
        expect: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Classify two metrics and list similarities and dissimilarities.
    Compare {
        a: String,
        b: String,
        #[command(flatten)]
        common: Common,
    },
    /// Built-in metrics.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List catalog entries.
    List {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Clone)]
struct Common {
    /// `name=value` binding; `a=a` keeps `a` symbolic, `a=3/2` specializes.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    #[arg(long)]
    json: bool,
    /// Seed for randomized zero tests (decimal or 0x-prefixed hex).
    #[arg(long, value_parser = parse_seed)]
    seed: Option<u64>,
    /// Working precision of numeric zero tests, in decimal digits.
    #[arg(long)]
    precision: Option<u32>,
    /// Sample points per zero test.
    #[arg(long)]
    samples: Option<usize>,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("invalid seed `{s}`: {e}"))
}

enum Failure {
    Input(String),
    Mismatch(String),
}

type Outcome = Result<(), Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

impl Common {
    fn config(&self) -> Result<ClassifyConfig, Failure> {
        let mut cfg = ClassifyConfig::default();
        if let Some(s) = self.seed {
            cfg.zero.seed = s;
        }
        if let Some(p) = self.precision {
            if p < 10 {
                return Err(Failure::Input("--precision must be at least 10 digits".into()));
            }
            cfg.zero.digits = p;
            cfg.zero.tolerance_exponent = cfg.zero.tolerance_exponent.min(p.saturating_sub(10).max(5));
        }
        if let Some(n) = self.samples {
            if n == 0 {
                return Err(Failure::Input("--samples must be positive".into()));
            }
            cfg.zero.samples = n;
        }
        Ok(cfg)
    }

    fn bindings(&self) -> Result<Vec<(String, String)>, Failure> {
        self.params.iter().map(|p| split_binding(p)).collect()
    }
}

fn split_binding(p: &str) -> Result<(String, String), Failure> {
    let (k, v) = p
        .split_once('=')
        .ok_or_else(|| Failure::Input(format!("parameter binding `{p}` must look like name=value")))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

/// A catalog name with optional inline bindings, or a metric file.
fn resolve(source: &str, extra: &[(String, String)]) -> Result<CatalogEntry, Failure> {
    let path = Path::new(source);
    if source.ends_with(".toml") || path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{source}: {e}")))?;
        let file = MetricFile::from_toml(&text).map_err(|e| Failure::Input(format!("{source}: {e}")))?;
        let spec = file.to_spec().map_err(|e| Failure::Input(format!("{source}: {e}")))?;
        let entry = CatalogEntry {
            name: file.name.clone(),
            description: format!("metric file {source}"),
            spec,
            ingredients: Ingredients::default(),
            goldens: Vec::new(),
        };
        return catalog::specialize(entry, extra).map_err(input);
    }
    let (name, inline) = match source.split_once(':') {
        Some((n, rest)) => (n, rest.split(',').map(split_binding).collect::<Result<Vec<_>, _>>()?),
        None => (source, Vec::new()),
    };
    let mut bindings = inline;
    bindings.extend(extra.iter().cloned());
    catalog::lookup(name, &bindings).map_err(input)
}

fn bundle_of(entry: &CatalogEntry, cfg: &ClassifyConfig) -> Result<CurvatureBundle, Failure> {
    let field = build_metric(entry.spec.clone(), &cfg.zero).map_err(|e| Failure::Input(format!("{}: {e}", entry.name)))?;
    Ok(CurvatureBundle::new(field))
}

/// Label, name for [`CurvatureBundle::named`], and whether the last slot
/// is a derivative.
fn selector(sel: &str) -> Result<(String, String, bool), Failure> {
    let s = sel.trim();
    let plain = |n: &str| Ok((n.to_string(), n.to_string(), false));
    match s {
        "dR" | "DR" | "nablaR" => return Ok(("R".into(), "nablaR".into(), true)),
        "dS" | "DS" | "nablaS" => return Ok(("S".into(), "nablaS".into(), true)),
        "R" | "S" | "C" | "P" | "W" | "K" | "G" | "g" | "Gamma" | "kappa" => return plain(s),
        _ => {}
    }
    if let Some(k) = s.strip_prefix('S').filter(|k| k.parse::<u8>().is_ok_and(|k| k >= 1)) {
        return plain(&format!("S^{k}"));
    }
    if let Some(k) = s.strip_prefix("S^").filter(|k| k.parse::<u8>().is_ok_and(|k| k >= 1)) {
        return plain(&format!("S^{k}"));
    }
    match s.parse::<Product>() {
        Ok(p) => plain(&p.to_string()),
        Err(_) => Err(Failure::Input(format!(
            "unknown tensor `{s}` (expected one of R, S, C, P, W, K, G, S2, S3, S4, dR, dS, RR, RS, RC, CR, CC, QgR, QSR, QgC, QSC, KK, PR)"
        ))),
    }
}

fn tensors(bundle: &CurvatureBundle, sels: &[String]) -> Result<Vec<(String, Tensor<Expr>, bool)>, Failure> {
    sels.iter()
        .map(|sel| {
            let (label, name, d) = selector(sel)?;
            let t = bundle
                .named(&name)
                .ok_or_else(|| Failure::Input(format!("unknown tensor `{sel}`")))?;
            Ok((label, (*t).clone(), d))
        })
        .collect()
}

fn cmd_components(metric: &str, sels: &[String], common: &Common) -> Outcome {
    let cfg = common.config()?;
    let entry = resolve(metric, &common.bindings()?)?;
    let bundle = bundle_of(&entry, &cfg)?;
    let ts = tensors(&bundle, sels)?;
    if common.json {
        let empty = StructureReport { results: Vec::new() };
        print!("{}", report::to_json_string(&report::report_json(&entry.name, &bundle, &empty, &ts, &cfg)));
    } else {
        for (label, t, d) in &ts {
            print!("{}", report::render_components(label, t, *d));
        }
    }
    Ok(())
}

fn selected_checks(all: bool, names: &[String]) -> Result<Vec<Check>, Failure> {
    if all {
        return Ok(Check::ALL.to_vec());
    }
    names.iter().map(|n| n.parse::<Check>().map_err(input)).collect()
}

fn cmd_classify(
    metric: &str,
    all: bool,
    checks: &[String],
    sels: &[String],
    expect: Option<&Path>,
    common: &Common,
) -> Outcome {
    let cfg = common.config()?;
    let checks = selected_checks(all, checks)?;
    let expect_text = expect
        .map(|p| std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))))
        .transpose()?;
    let entry = resolve(metric, &common.bindings()?)?;
    let bundle = bundle_of(&entry, &cfg)?;
    let ts = tensors(&bundle, sels)?;
    let structure = classify(&bundle, &entry.ingredients, &checks, &cfg);
    let doc = report::report_json(&entry.name, &bundle, &structure, &ts, &cfg);
    if common.json {
        print!("{}", report::to_json_string(&doc));
    } else {
        print!("{}", report::render_text(&entry.name, &structure, &cfg));
        for (label, t, d) in &ts {
            println!();
            print!("{}", report::render_components(label, t, *d));
        }
    }
    if let Some(text) = expect_text {
        let mismatches = report::check_expectations(&doc["results"], &text, entry.spec.symbols()).map_err(input)?;
        if !mismatches.is_empty() {
            let lines: Vec<String> = mismatches
                .iter()
                .map(|m| {
                    let actual = m.actual.as_ref().map_or("missing".to_string(), |v| v.to_string());
                    format!("{}: expected {}, found {actual}", m.path, m.expected)
                })
                .collect();
            return Err(Failure::Mismatch(lines.join("\n")));
        }
    }
    Ok(())
}

fn cmd_compare(a: &str, b: &str, common: &Common) -> Outcome {
    let cfg = common.config()?;
    let bindings = common.bindings()?;
    let ea = resolve(a, &bindings)?;
    let eb = resolve(b, &bindings)?;
    let ra = classify(&bundle_of(&ea, &cfg)?, &ea.ingredients, &Check::ALL, &cfg);
    let rb = classify(&bundle_of(&eb, &cfg)?, &eb.ingredients, &Check::ALL, &cfg);
    let cmp = report::compare(&ra, &rb);
    let names = (a, b);
    if common.json {
        print!("{}", report::to_json_string(&report::comparison_json(names, &cmp, &cfg)));
    } else {
        print!("{}", report::render_comparison(names, &cmp));
    }
    Ok(())
}

fn cmd_catalog_list(json: bool) -> Outcome {
    let rows = [
        ("minkowski", "flat space; --param n=<dimension> (default 4)"),
        ("som-raychaudhuri", "Som-Raychaudhuri spacetime on (t, phi, r, z); parameter a"),
        ("godel", "Gödel spacetime on (x, y, z, t); parameter m"),
        ("godel-type", "Gödel-type metric on (t, phi, r, z); --param h=<expr> --param f=<expr>"),
    ];
    if json {
        let items: Vec<String> = rows
            .iter()
            .map(|(n, d)| format!("  {{\"name\": \"{n}\", \"description\": \"{d}\"}}"))
            .collect();
        println!("[\n{}\n]", items.join(",\n"));
    } else {
        for (n, d) in rows {
            println!("{n:<18} {d}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Components { metric, tensor, common } => cmd_components(metric, tensor, common),
        Command::Classify {
            metric,
            all,
            checks,
            tensor,
            expect,
            common,
        } => cmd_classify(metric, *all, checks, tensor, expect.as_deref(), common),
        Command::Compare { a, b, common } => cmd_compare(a, b, common),
        Command::Catalog {
            command: CatalogCommand::List { json },
        } => cmd_catalog_list(*json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(msg)) => {
            eprintln!("expectation mismatch:\n{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
