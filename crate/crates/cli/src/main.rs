use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dpcert_core::coxtoric::{chart_atlas, make_p, make_q, make_t, x_equation, z_equation, AmbientSpec};
use dpcert_core::critical::{cr_a, cr_f, critical_pairs, random_generic_a, DEFAULT_BUDGET};
use dpcert_core::exactfield::{parse_field_spec, Field, GfField, RationalField};
use dpcert_core::kollar::bigness_certificate;
use dpcert_core::oracle::{compare_chart_singular, compare_crf};
use dpcert_core::pipeline::{default_m, verify_all, ASource, Status, VerifyOptions, DEFAULT_SAMPLES};
use dpcert_core::polyring::{parse_poly, var_list, SparsePoly};
use dpcert_core::singular::{half_point_check, hypersurface_smooth_on_chart, Verdict};

#[derive(Parser)]
#[command(name = "dpcert", version, about = "Exact certificate checks for Klein-quartic del Pezzo fibrations")]
struct Cli {
    /// Compact JSON output (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Toric ambient data.
    Ambient {
        #[command(subcommand)]
        cmd: AmbientCmd,
    },
    /// Chart-by-chart singularity check of X_n or Z_n.
    Smooth {
        #[command(flatten)]
        inst: Instance,
        #[arg(long, value_enum, default_value_t = Which::X)]
        variety: Which,
    },
    /// Critical points of f, of a, and of z on Z.
    Critical {
        #[command(flatten)]
        inst: Instance,
    },
    /// Sections of M^m and the separation test.
    Bigness {
        #[command(flatten)]
        inst: Instance,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Every check, as one report.
    Verify {
        #[command(flatten)]
        inst: Instance,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Worker threads (overrides DPCERT_WORKERS).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Compares elimination against exhaustive search.
    Oracle {
        #[command(subcommand)]
        cmd: OracleCmd,
    },
}

#[derive(Subcommand)]
enum AmbientCmd {
    /// Cox data and chart atlas.
    Dump {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: u32,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Critical points of the Klein quartic.
    Crf {
        #[arg(long, default_value = "q3")]
        field: String,
    },
    /// Rational singular points on every trivial chart of X_n and Z_n.
    Singular {
        #[command(flatten)]
        inst: Instance,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    P,
    Q,
    T,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    X,
    Z,
}

#[derive(Args)]
struct Instance {
    #[arg(long)]
    n: u32,
    /// `a` in the polynomial grammar, a form of degree 2n in w0, w1.
    #[arg(long, conflicts_with_all = ["a_file", "seed"])]
    a: Option<String>,
    /// File holding `a`.
    #[arg(long, conflicts_with = "seed")]
    a_file: Option<std::path::PathBuf>,
    /// Seed for a random generic `a`.
    #[arg(long)]
    seed: Option<u64>,
    /// `qK` for GF(2^K); `Q` for the rationals where supported.
    #[arg(long, default_value = "q10")]
    field: String,
}

struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

impl Instance {
    fn source(&self) -> Result<ASource, Usage> {
        if let Some(a) = &self.a {
            return Ok(ASource::Explicit(a.clone()));
        }
        if let Some(p) = &self.a_file {
            return Ok(ASource::Explicit(std::fs::read_to_string(p)?.trim().to_string()));
        }
        Ok(ASource::Random { seed: self.seed.unwrap_or(0) })
    }

    fn gf(&self) -> Result<GfField, Usage> {
        Ok(parse_field_spec(&self.field)?)
    }

    fn a_over<F: Field>(&self, field: &F, random: impl Fn(u64) -> Result<SparsePoly<F>, Usage>) -> Result<SparsePoly<F>, Usage> {
        match self.source()? {
            ASource::Explicit(text) => Ok(parse_poly(field, &var_list(&["w0", "w1"]), &text)?),
            ASource::Random { seed } => random(seed),
        }
    }

    fn gf_a(&self, field: &GfField) -> Result<SparsePoly<GfField>, Usage> {
        let n = self.n;
        self.a_over(field, |seed| Ok(random_generic_a(n, field, seed, DEFAULT_BUDGET)?))
    }
}

fn is_rational(spec: &str) -> bool {
    spec.eq_ignore_ascii_case("q") || spec.eq_ignore_ascii_case("rationals")
}

fn ambient(family: Family, n: u32) -> Result<AmbientSpec, Usage> {
    let n = n as i64;
    Ok(match family {
        Family::P => make_p(n)?,
        Family::Q => make_q(n)?,
        Family::T => make_t(n)?,
    })
}

fn smooth<F: Field>(a: &SparsePoly<F>, n: u32, which: Which) -> Result<(Value, bool), Usage> {
    let (spec, eq) = match which {
        Which::X => (make_p(n as i64)?, x_equation(a, n)?),
        Which::Z => (make_q(n as i64)?, z_equation(a, n)?),
    };
    let mut reports = Vec::new();
    let mut ok = true;
    for chart in chart_atlas(&spec)? {
        let r = hypersurface_smooth_on_chart(&chart, &eq)?;
        ok &= chart.is_quotient() || r.status == Verdict::Smooth;
        reports.push(r);
    }
    let half = match which {
        Which::X => match half_point_check(n, a) {
            Ok(h) => {
                ok &= h.iter().all(|p| p.ok);
                json!(h)
            }
            Err(e) => {
                ok = false;
                json!({ "error": e.to_string() })
            }
        },
        Which::Z => Value::Null,
    };
    Ok((json!({ "ambient": spec.name, "field": a.field().name(), "a": a.format(), "charts": reports, "half_points": half, "smooth": ok }), ok))
}

fn run(cli: &Cli) -> Result<(Value, bool), Usage> {
    match &cli.cmd {
        Cmd::Ambient { cmd: AmbientCmd::Dump { family, n } } => {
            let spec = ambient(*family, *n)?;
            let charts = chart_atlas(&spec)?;
            Ok((json!({ "ambient": spec, "charts": charts }), true))
        }
        Cmd::Smooth { inst, variety } => {
            if is_rational(&inst.field) {
                let a = inst.a_over(&RationalField, |_| Err(Usage("over Q pass --a or --a-file".into())))?;
                smooth(&a, inst.n, *variety)
            } else {
                let f = inst.gf()?;
                smooth(&inst.gf_a(&f)?, inst.n, *variety)
            }
        }
        Cmd::Critical { inst } => {
            let f = inst.gf()?;
            let a = inst.gf_a(&f)?;
            let crf: Vec<Value> = match cr_f(&f) {
                Ok(pts) => pts
                    .iter()
                    .map(|p| json!({ "point": p.point.iter().map(|c| f.format(c)).collect::<Vec<_>>(), "f": f.format(&p.f_value), "hessian": f.format(&p.hessian) }))
                    .collect(),
                Err(e) => vec![json!({ "error": e.to_string() })],
            };
            let cra = cr_a(&a, inst.n)?;
            let pairs = critical_pairs(&a, inst.n).map_err(|e| Usage(format!("{e}; pick a field of degree divisible by 3")))?;
            let ok = cra.iter().chain(&pairs).all(|p| p.failing.is_empty());
            Ok((json!({ "field": f.name(), "a": a.format(), "cr_f": crf, "cr_a": cra, "critical_pairs": pairs }), ok))
        }
        Cmd::Bigness { inst, m, samples } => {
            let f = inst.gf()?;
            let a = inst.gf_a(&f)?;
            let m = m.or_else(|| default_m(inst.n)).ok_or_else(|| Usage("bigness needs n >= 5".into()))?;
            let c = bigness_certificate(inst.n, m, &a, *samples, inst.seed.unwrap_or(0))?;
            let ok = c.passed();
            Ok((json!(c), ok))
        }
        Cmd::Verify { inst, m, samples, workers } => {
            let mut o = VerifyOptions::new(inst.n, inst.source()?, &inst.field);
            o.m = *m;
            o.samples = *samples;
            o.workers = *workers;
            let r = verify_all(&o)?;
            let ok = matches!(r.overall, Status::Pass | Status::NotApplicable);
            Ok((json!(r), ok))
        }
        Cmd::Oracle { cmd: OracleCmd::Crf { field } } => {
            let c = compare_crf(&parse_field_spec(field)?)?;
            let ok = c.agree;
            Ok((json!(c), ok))
        }
        Cmd::Oracle { cmd: OracleCmd::Singular { inst } } => {
            let f = inst.gf()?;
            let a = inst.gf_a(&f)?;
            let mut out = Vec::new();
            for (spec, eq) in [(make_p(inst.n as i64)?, x_equation(&a, inst.n)?), (make_q(inst.n as i64)?, z_equation(&a, inst.n)?)] {
                for chart in chart_atlas(&spec)?.iter().filter(|c| !c.is_quotient()) {
                    out.push(compare_chart_singular(chart, &eq)?);
                }
            }
            let ok = out.iter().all(|c| c.agree);
            Ok((json!({ "a": a.format(), "comparisons": out, "agree": ok }), ok))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((value, ok)) => {
            let text = if cli.pretty { serde_json::to_string_pretty(&value) } else { serde_json::to_string(&value) };
            println!("{}", text.expect("serializable"));
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(Usage(msg)) => {
            eprintln!("dpcert: {msg}");
            ExitCode::from(2)
        }
    }
}
