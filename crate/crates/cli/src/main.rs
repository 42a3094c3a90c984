//! `burgers` — command-line front end for the series solvers, references,
//! and convergence sweeps.
//!
//! Exit status: 0 on success, 2 on validation errors (including usage
//! errors), 3 on numerical-accuracy failures.

// Validation guards use `!(x > 0.0)` so NaN fails them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod ic;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use burgers_core::BurgersError;

#[derive(Parser)]
#[command(
    name = "burgers",
    version,
    about = "Semi-analytic series solvers and convergence diagnostics for the complex Burgers' equation",
    after_help = "Output directory resolution: --out-dir, else $BURGERS_OUT_DIR, else the \
                  current directory.\n\nTabulated initial conditions (`recurse --ic FILE`) are \
                  CSV with two or three columns `x,re[,im]`, an optional header row, and \
                  uniformly spaced x covering exactly one period (the right endpoint is not \
                  repeated)."
)]
struct Cli {
    /// Cap the worker-thread count (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Directory for output files (falls back to $BURGERS_OUT_DIR, then ".")
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    /// Output format; JSON mirrors the CSV content one-to-one
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Backend {
    Spectral,
    GaussHermite,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum RefMethod {
    ColeHopf,
    Fd,
    Both,
}

#[derive(Args)]
struct DomainArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = -2.0 * std::f64::consts::PI)]
    x_min: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 2.0 * std::f64::consts::PI)]
    x_max: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    t_min: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 3.0)]
    t_max: f64,
    /// Spatial nodes of the comparison grid
    #[arg(long, default_value_t = 65)]
    dom_nx: usize,
    /// Time levels of the comparison grid
    #[arg(long, default_value_t = 31)]
    dom_nt: usize,
}

#[derive(Args)]
struct ColeHopfArgs {
    /// Relative tolerance of the Cole-Hopf quadrature
    #[arg(long, default_value_t = 1e-10)]
    ch_tol: f64,
    /// Integration window half-width in units of sqrt(4 nu t)
    #[arg(long, default_value_t = 8.0)]
    ch_radius: f64,
    /// Subdivision budget of the adaptive rule
    #[arg(long, default_value_t = 400)]
    ch_max_subdivisions: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one closed-form series term u_m(x, t)
    Term {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        nu: f64,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
    /// Write partial-sum profiles U_N(x, t) over one or more times
    Solve {
        #[arg(long, default_value_t = 0.3)]
        nu: f64,
        #[arg(long = "N", default_value_t = 30)]
        n_terms: usize,
        /// Comma-separated output times
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = vec![0.0, 1.0, 4.0])]
        t: Vec<f64>,
        #[arg(long, allow_negative_numbers = true, default_value_t = -2.0 * std::f64::consts::PI)]
        x_min: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 2.0 * std::f64::consts::PI)]
        x_max: f64,
        #[arg(long, default_value_t = 257)]
        nx: usize,
        /// Output file (default: solve.csv / solve.json in the out dir)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the Green's-function recursion for a named or tabulated IC
    Recurse {
        /// `exp-iz`, `cos`, or a CSV file of samples
        #[arg(long, default_value = "exp-iz")]
        ic: String,
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
        #[arg(long = "N", default_value_t = 5)]
        n_terms: usize,
        #[arg(long, default_value_t = 128)]
        nx: usize,
        #[arg(long, default_value_t = 64)]
        nt: usize,
        #[arg(long, default_value_t = 3.0)]
        t_end: f64,
        #[arg(long, value_enum, default_value_t = Backend::Spectral)]
        backend: Backend,
        /// Also write each sequence element f_m
        #[arg(long)]
        write_terms: bool,
        /// Also dump the partial sum in the binary grid format
        #[arg(long)]
        binary: bool,
        /// Output stem (default: recurse in the out dir)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the Cole-Hopf and/or time-stepper references on a grid
    Reference {
        #[arg(long, value_enum, default_value_t = RefMethod::Both)]
        method: RefMethod,
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = -2.0 * std::f64::consts::PI)]
        x_min: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 2.0 * std::f64::consts::PI)]
        x_max: f64,
        /// Periodic spatial nodes (power of two for the time stepper)
        #[arg(long, default_value_t = 128)]
        nx: usize,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        t_min: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 3.0)]
        t_max: f64,
        #[arg(long, default_value_t = 31)]
        nt: usize,
        /// Time-stepper step (default: 0.8 of the stability bound)
        #[arg(long)]
        dt: Option<f64>,
        #[command(flatten)]
        cole_hopf: ColeHopfArgs,
        /// Output stem (default: reference in the out dir)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the Burgers-operator residual of the partial sum at a point
    Residual {
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
        #[arg(long = "N", default_value_t = 20)]
        n_terms: usize,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        /// Finite-difference time step
        #[arg(long, default_value_t = 1e-4)]
        h: f64,
    },
    /// Truncation-order error sweep against the Cole-Hopf reference
    #[command(name = "sweep-n")]
    SweepN {
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
        #[arg(long, default_value_t = 25)]
        n_max: usize,
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        cole_hopf: ColeHopfArgs,
        /// Output file (default: sweep_n.csv / .json in the out dir)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a log-scale line plot
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Viscosity error sweep across the divergence threshold
    #[command(name = "sweep-nu")]
    SweepNu {
        /// Comma-separated truncation orders
        #[arg(long = "n-list", value_delimiter = ',', default_values_t = vec![10, 20, 30])]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 0.2)]
        nu_min: f64,
        #[arg(long, default_value_t = 1.0)]
        nu_max: f64,
        #[arg(long, default_value_t = 0.05)]
        nu_step: f64,
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        cole_hopf: ColeHopfArgs,
        /// Output file (default: sweep_nu.csv / .json in the out dir)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a log-scale line plot
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Ratio-test sequence r_m of the term-bound series
    Ratio {
        #[arg(long, default_value_t = 200)]
        m_max: usize,
        /// Output file (default: ratio.csv / .json in the out dir)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code_for(err: &BurgersError) -> u8 {
    match err {
        BurgersError::Domain(_)
        | BurgersError::Input(_)
        | BurgersError::GridMismatch(_)
        | BurgersError::Dependency(_) => 2,
        BurgersError::Accuracy { .. }
        | BurgersError::Overflow { .. }
        | BurgersError::NearSingular(_)
        | BurgersError::BlowUp { .. } => 3,
        BurgersError::Io(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        // A second build_global in the same process is harmless.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let ctx = commands::Context::new(cli.out_dir.clone(), cli.format);
    let result = match &cli.command {
        Command::Term { m, nu, x, t } => commands::term(&ctx, *m, *nu, *x, *t),
        Command::Solve {
            nu,
            n_terms,
            t,
            x_min,
            x_max,
            nx,
            out,
        } => commands::solve(&ctx, *nu, *n_terms, t, *x_min, *x_max, *nx, out.as_deref()),
        Command::Recurse {
            ic,
            nu,
            n_terms,
            nx,
            nt,
            t_end,
            backend,
            write_terms,
            binary,
            out,
        } => commands::recurse(
            &ctx,
            ic,
            *nu,
            *n_terms,
            *nx,
            *nt,
            *t_end,
            *backend,
            *write_terms,
            *binary,
            out.as_deref(),
        ),
        Command::Reference {
            method,
            nu,
            x_min,
            x_max,
            nx,
            t_min,
            t_max,
            nt,
            dt,
            cole_hopf,
            out,
        } => commands::reference(
            &ctx,
            *method,
            *nu,
            *x_min,
            *x_max,
            *nx,
            *t_min,
            *t_max,
            *nt,
            *dt,
            cole_hopf,
            out.as_deref(),
        ),
        Command::Residual {
            nu,
            n_terms,
            x,
            t,
            h,
        } => commands::residual(&ctx, *nu, *n_terms, *x, *t, *h),
        Command::SweepN {
            nu,
            n_max,
            domain,
            cole_hopf,
            out,
            svg,
        } => commands::sweep_n(
            &ctx,
            *nu,
            *n_max,
            domain,
            cole_hopf,
            out.as_deref(),
            svg.as_deref(),
        ),
        Command::SweepNu {
            n_list,
            nu_min,
            nu_max,
            nu_step,
            domain,
            cole_hopf,
            out,
            svg,
        } => commands::sweep_nu(
            &ctx,
            n_list,
            *nu_min,
            *nu_max,
            *nu_step,
            domain,
            cole_hopf,
            out.as_deref(),
            svg.as_deref(),
        ),
        Command::Ratio { m_max, out } => commands::ratio(&ctx, *m_max, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
