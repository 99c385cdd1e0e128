use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qtwm_core::fef::{fef_brute, fef_closed, BruteBudget};
use qtwm_core::protocols::badziag_max;
use qtwm_core::DensityMatrix;
use serde_json::json;

use qtwm_cli::error::CliError;
use qtwm_cli::eval::{describe, evaluate};
use qtwm_cli::matfile::parse_matrix;
use qtwm_cli::output::{fmt_g, Dataset, Format};
use qtwm_cli::spec::{point_from_pins, GridAxis, Pin, Protocol, SweepSpec};
use qtwm_cli::sweep::run_sweep;

/// Teleportation through amplitude damping, protected by weak measurement.
#[derive(Parser)]
#[command(name = "qtwm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a protocol over a parameter grid and emit a dataset.
    Sweep(SweepArgs),
    /// Evaluate a protocol at one point: closed form, pipeline, baseline.
    Eval(EvalArgs),
    /// Fully entangled fraction of a 4x4 density matrix read from a file.
    Fef(FefArgs),
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    protocol: Protocol,
    /// Swept parameter, repeatable. The first axis is the outermost loop.
    #[arg(long = "grid", value_name = "PARAM=MIN:MAX:STEPS")]
    grid: Vec<GridAxis>,
    /// Pinned parameter, repeatable.
    #[arg(long = "fix", value_name = "PARAM=VALUE")]
    fix: Vec<Pin>,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Seed for the brute-force FEF spot checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, env = "QTWM_WORKERS")]
    workers: Option<usize>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, value_enum)]
    protocol: Protocol,
    /// Parameter value, repeatable. For badziag, omitting D scans for the
    /// best damping strength.
    #[arg(long = "fix", value_name = "PARAM=VALUE")]
    fix: Vec<Pin>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct FefArgs {
    /// Matrix file: 4 rows of 4 `a+bi` entries, `#` comments.
    path: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => {
            Box::new(BufWriter::new(File::create(p).map_err(|source| CliError::Io { path: Some(p.clone()), source })?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let spec = SweepSpec::new(args.protocol, args.grid, args.fix)?;
    let rows = run_sweep(&spec, args.workers, args.seed)?;
    let dataset = Dataset::new(spec.protocol, rows);
    let io_err = |source| CliError::Io { path: args.out.clone(), source };
    let mut out = open_out(&args.out)?;
    dataset.write(args.format, &mut out).map_err(io_err)?;
    out.flush().map_err(io_err)
}

fn eval(args: EvalArgs) -> Result<(), CliError> {
    let mut note = None;
    let pins = if args.protocol == Protocol::Badziag && args.fix.is_empty() {
        let best = badziag_max(1001).map_err(CliError::from_eval)?;
        note = Some("D maximizes F over a 1001-point grid");
        vec![Pin { param: "D".into(), value: best.params.d2 }]
    } else {
        args.fix
    };
    let point = point_from_pins(args.protocol, &pins)?;
    let e = evaluate(args.protocol, &point)?;
    let row = e.row(&point);
    let c = &e.closed;
    let text = match args.format {
        Some(Format::Json) => {
            let v = json!({
                "protocol": args.protocol.name(),
                "row": row,
                "pipeline": e.pipeline.map(|p| json!({"f": p.f, "F": p.fidelity, "P_succ": p.p_succ})),
                "measure_zero": c.measure_zero,
            });
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
        Some(Format::Csv) => {
            let mut buf = Vec::new();
            Dataset::new(args.protocol, vec![row]).write(Format::Csv, &mut buf).expect("in-memory write");
            String::from_utf8(buf).expect("utf-8")
        }
        None => {
            let mut s = format!("protocol  {}\nparams    {}\n", args.protocol, describe(&point));
            if let Some(n) = note {
                s += &format!("          ({n})\n");
            }
            if let Some(q) = c.q_opt {
                s += &format!("q_opt     {}\n", fmt_g(q));
            }
            s += &format!("closed    f={} F={} P_succ={}\n", fmt_g(c.f), fmt_g(c.fidelity), fmt_g(c.p_succ));
            match &e.pipeline {
                Some(p) => {
                    s += &format!("pipeline  f={} F={} P_succ={}\n", fmt_g(p.f), fmt_g(p.fidelity), fmt_g(p.p_succ));
                    s +=
                        &format!("diff      |df|={:.3e} |dP|={:.3e}\n", (p.f - c.f).abs(), (p.p_succ - c.p_succ).abs());
                }
                None => s += "pipeline  not compared (success probability below resolution)\n",
            }
            s += &format!("baseline  f={} F={}\n", fmt_g(e.baseline.f), fmt_g(e.baseline.fidelity));
            s +=
                &format!("region    {}\n", if c.is_classical() { "classical (F <= 2/3)" } else { "quantum (F > 2/3)" });
            if c.measure_zero {
                s += "success   measure-zero (reported f is the limiting value)\n";
            }
            s
        }
    };
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: None, source })
}

fn fef(args: FefArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", args.path.display())))?;
    let m = parse_matrix(&text)?;
    let rho = DensityMatrix::new(m).map_err(|e| CliError::Input(format!("{}: {e}", args.path.display())))?;
    let closed = fef_closed(&rho).map_err(CliError::from_eval)?;
    let brute = fef_brute(&rho, &BruteBudget::default()).map_err(CliError::from_eval)?;
    let witness: Vec<[f64; 2]> = closed.witness.iter().map(|z| [z.re, z.im]).collect();
    let text = match args.format {
        Some(Format::Json) => {
            let v = json!({
                "f_closed": closed.f,
                "f_brute": brute.f,
                "F": closed.fidelity,
                "witness": witness,
            });
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
        Some(Format::Csv) => {
            format!("f_closed,f_brute,F\n{},{},{}\n", fmt_g(closed.f), fmt_g(brute.f), fmt_g(closed.fidelity))
        }
        None => {
            let w: Vec<String> = witness.iter().map(|[re, im]| format!("{}{:+}i", fmt_g(*re), im)).collect();
            format!(
                "f (closed)  {}\nf (brute)   {}\nF           {}\nwitness     [{}]\n",
                fmt_g(closed.f),
                fmt_g(brute.f),
                fmt_g(closed.fidelity),
                w.join(", ")
            )
        }
    };
    io::stdout().lock().write_all(text.as_bytes()).map_err(|source| CliError::Io { path: None, source })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Eval(a) => eval(a),
        Command::Fef(a) => fef(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qtwm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
