//! Subcommand implementations.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use burgers_core::analysis::{self, DomainSpec, ErrorRecord};
use burgers_core::closed_form::{self, EvalPoint, SolverConfig};
use burgers_core::error::Result;
use burgers_core::greens_engine::{recurse as greens_recurse, ConvolutionBackend, QuadratureSpec};
use burgers_core::grid::GridField;
use burgers_core::reference::{cole_hopf, fd_solve, fd_stability_bound, ColeHopfSpec};
use burgers_core::C64;

use crate::ic::InitialCondition;
use crate::svg::{render_log_plot, Series};
use crate::{Backend, ColeHopfArgs, DomainArgs, Format, RefMethod};

pub struct Context {
    out_dir: PathBuf,
    format: Format,
}

impl Context {
    pub fn new(out_dir: Option<PathBuf>, format: Format) -> Self {
        let out_dir = out_dir
            .or_else(|| std::env::var_os("BURGERS_OUT_DIR").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        Context { out_dir, format }
    }

    fn extension(&self) -> &'static str {
        match self.format {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    /// Explicit path if given, else `<out_dir>/<stem>.<ext>`.
    fn resolve(&self, explicit: Option<&Path>, stem: &str) -> PathBuf {
        match explicit {
            Some(p) => p.to_path_buf(),
            None => self.out_dir.join(format!("{stem}.{}", self.extension())),
        }
    }

    fn write(&self, path: &Path, csv: impl FnOnce() -> Result<Vec<u8>>, json: Value) -> Result<()> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                fs::create_dir_all(parent)?;
            }
        }
        match self.format {
            Format::Csv => fs::write(path, csv()?)?,
            Format::Json => fs::write(
                path,
                serde_json::to_string_pretty(&json).expect("valid json"),
            )?,
        }
        println!("wrote {}", path.display());
        Ok(())
    }
}

fn grid_csv(field: &GridField) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    field.write_csv(BufWriter::new(&mut buf))?;
    Ok(buf)
}

fn grid_json(field: &GridField) -> Value {
    let rows: Vec<Value> = field
        .ts()
        .iter()
        .enumerate()
        .flat_map(|(it, &t)| {
            field
                .xs()
                .iter()
                .enumerate()
                .map(move |(ix, &x)| (ix, x, it, t))
        })
        .map(|(ix, x, it, t)| {
            let v = field.value(ix, it);
            json!({ "x": x, "t": t, "re": v.re, "im": v.im })
        })
        .collect();
    Value::Array(rows)
}

pub fn term(ctx: &Context, m: usize, nu: f64, x: f64, t: f64) -> Result<()> {
    let cfg = SolverConfig::new(nu, m.max(1))?;
    let p = EvalPoint::new(x, t)?;
    let value = closed_form::term(m, &cfg, &p)?;
    match ctx.format {
        Format::Csv => println!("{value}"),
        Format::Json => println!(
            "{}",
            json!({ "m": m, "nu": nu, "x": x, "t": t, "re": value.re, "im": value.im })
        ),
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn solve(
    ctx: &Context,
    nu: f64,
    n_terms: usize,
    times: &[f64],
    x_min: f64,
    x_max: f64,
    nx: usize,
    out: Option<&Path>,
) -> Result<()> {
    let cfg = SolverConfig::new(nu, n_terms)?;
    if !(x_min < x_max) || nx < 2 {
        return Err(burgers_core::BurgersError::Domain(
            "solve needs x_min < x_max and nx >= 2".into(),
        ));
    }
    let xs: Vec<f64> = (0..nx)
        .map(|i| x_min + (x_max - x_min) * i as f64 / (nx - 1) as f64)
        .collect();
    let mut ts = times.to_vec();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    for &t in &ts {
        EvalPoint::new(0.0, t)?;
    }
    let field = GridField::sample_cartesian(&xs, &ts, |x, t| {
        closed_form::partial_sum(&cfg, &EvalPoint { x, t }).unwrap_or(C64::new(f64::NAN, f64::NAN))
    });
    if field
        .values()
        .iter()
        .any(|v| !v.re.is_finite() || !v.im.is_finite())
    {
        return Err(burgers_core::BurgersError::Overflow { m: n_terms });
    }
    let path = ctx.resolve(out, "solve");
    ctx.write(&path, || grid_csv(&field), grid_json(&field))
}

#[allow(clippy::too_many_arguments)]
pub fn recurse(
    ctx: &Context,
    ic_spec: &str,
    nu: f64,
    n_terms: usize,
    nx: usize,
    nt: usize,
    t_end: f64,
    backend: Backend,
    write_terms: bool,
    binary: bool,
    out: Option<&Path>,
) -> Result<()> {
    let ic = InitialCondition::parse(ic_spec)?;
    if !(t_end > 0.0) || nt < 9 {
        return Err(burgers_core::BurgersError::Domain(
            "recurse needs t_end > 0 and at least 9 time levels".into(),
        ));
    }
    let (x0, period) = ic.domain();
    let ts: Vec<f64> = (0..nt)
        .map(|j| t_end * j as f64 / (nt - 1) as f64)
        .collect();
    let template = GridField::zeros_periodic(x0, period, nx, ts);
    let q = QuadratureSpec {
        backend: match backend {
            Backend::Spectral => ConvolutionBackend::PeriodicSpectral,
            Backend::GaussHermite => ConvolutionBackend::GaussHermite,
        },
        ..Default::default()
    };
    let solution = greens_recurse(|x| ic.eval(x), nu, &template, n_terms, &q)?;

    let stem_path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| ctx.out_dir.join("recurse"));
    let stem = stem_path.to_string_lossy().into_owned();
    let partial_path = PathBuf::from(format!("{stem}_partial.{}", ctx.extension()));
    ctx.write(
        &partial_path,
        || grid_csv(&solution.partial_sum),
        grid_json(&solution.partial_sum),
    )?;
    if write_terms {
        for (m0, term) in solution.terms.iter().enumerate() {
            let path = PathBuf::from(format!("{stem}_term_{:02}.{}", m0 + 1, ctx.extension()));
            ctx.write(&path, || grid_csv(term), grid_json(term))?;
        }
    }
    if binary {
        let path = PathBuf::from(format!("{stem}_partial.bgf"));
        let mut buf = Vec::new();
        solution.partial_sum.write_binary(&mut buf)?;
        fs::write(&path, buf)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn reference(
    ctx: &Context,
    method: RefMethod,
    nu: f64,
    x_min: f64,
    x_max: f64,
    nx: usize,
    t_min: f64,
    t_max: f64,
    nt: usize,
    dt: Option<f64>,
    ch: &ColeHopfArgs,
    out: Option<&Path>,
) -> Result<()> {
    if !(x_min < x_max) || !(0.0 <= t_min && t_min <= t_max) || nt < 1 {
        return Err(burgers_core::BurgersError::Domain(
            "bad reference grid".into(),
        ));
    }
    let period = x_max - x_min;
    let ts: Vec<f64> = if nt == 1 || t_min == t_max {
        vec![t_min]
    } else {
        (0..nt)
            .map(|j| t_min + (t_max - t_min) * j as f64 / (nt - 1) as f64)
            .collect()
    };
    let stem_path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| ctx.out_dir.join("reference"));
    let stem = stem_path.to_string_lossy().into_owned();

    if matches!(method, RefMethod::ColeHopf | RefMethod::Both) {
        let spec = ColeHopfSpec {
            truncation_radius: ch.ch_radius,
            tol: ch.ch_tol,
            max_subdivisions: ch.ch_max_subdivisions,
        };
        let mut field = GridField::zeros_periodic(x_min, period, nx, ts.clone());
        for it in 0..field.nt() {
            let t = field.ts()[it];
            for ix in 0..field.nx() {
                let x = field.xs()[ix];
                // t = 0 is the kernel's delta limit: the initial condition
                let v = if t == 0.0 {
                    C64::new(0.0, x).exp()
                } else {
                    cole_hopf(nu, x, t, &spec)?
                };
                field.set(ix, it, v);
            }
        }
        let path = PathBuf::from(format!("{stem}_cole_hopf.{}", ctx.extension()));
        ctx.write(&path, || grid_csv(&field), grid_json(&field))?;
    }
    if matches!(method, RefMethod::Fd | RefMethod::Both) {
        let xs: Vec<f64> = (0..nx)
            .map(|j| x_min + period * j as f64 / nx as f64)
            .collect();
        let ic: Vec<C64> = xs.iter().map(|&x| C64::new(0.0, x).exp()).collect();
        let dt = dt.unwrap_or_else(|| 0.8 * fd_stability_bound(nx, period, nu));
        let field = fd_solve(&ic, x_min, period, nu, dt, &ts)?;
        let path = PathBuf::from(format!("{stem}_fd.{}", ctx.extension()));
        ctx.write(&path, || grid_csv(&field), grid_json(&field))?;
    }
    Ok(())
}

pub fn residual(ctx: &Context, nu: f64, n_terms: usize, x: f64, t: f64, h: f64) -> Result<()> {
    let cfg = SolverConfig::new(nu, n_terms)?;
    let p = EvalPoint::new(x, t)?;
    let r = closed_form::residual(&cfg, &p, h)?;
    match ctx.format {
        Format::Csv => {
            println!("residual = {r}");
            println!("|residual| = {:.6e}", r.norm());
        }
        Format::Json => println!(
            "{}",
            json!({
                "nu": nu, "N": n_terms, "x": x, "t": t, "h": h,
                "re": r.re, "im": r.im, "abs": r.norm()
            })
        ),
    }
    Ok(())
}

fn domain_from_args(d: &DomainArgs) -> Result<DomainSpec> {
    DomainSpec::new(d.x_min, d.x_max, d.t_min, d.t_max, d.dom_nx, d.dom_nt)
}

fn cole_hopf_spec(ch: &ColeHopfArgs) -> ColeHopfSpec {
    ColeHopfSpec {
        truncation_radius: ch.ch_radius,
        tol: ch.ch_tol,
        max_subdivisions: ch.ch_max_subdivisions,
    }
}

fn sweep_n_csv(records: &[ErrorRecord]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    analysis::write_sweep_n_csv(records, &mut buf)?;
    Ok(buf)
}

fn sweep_nu_csv(records: &[ErrorRecord]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    analysis::write_sweep_nu_csv(records, &mut buf)?;
    Ok(buf)
}

pub fn sweep_n(
    ctx: &Context,
    nu: f64,
    n_max: usize,
    domain: &DomainArgs,
    ch: &ColeHopfArgs,
    out: Option<&Path>,
    svg: Option<&Path>,
) -> Result<()> {
    let dom = domain_from_args(domain)?;
    let spec = cole_hopf_spec(ch);
    if nu <= 0.7214 {
        eprintln!(
            "warning: nu = {nu} is at or below the provable convergence threshold r/2 ~ 0.7213; \
             errors may not decay"
        );
    }
    let records = analysis::sweep_n(nu, n_max, &dom, &spec)?;
    let json = Value::Array(
        records
            .iter()
            .map(|r| json!({ "N": r.n_terms, "nu": r.nu, "sup_error": r.sup_error }))
            .collect(),
    );
    let path = ctx.resolve(out, "sweep_n");
    ctx.write(&path, || sweep_n_csv(&records), json)?;
    if let Some((slope, r2)) = analysis::log_linear_fit(&records) {
        println!("log10(sup_error) slope per N: {slope:.4} (R^2 = {r2:.4})");
    }
    if let Some(svg_path) = svg {
        let series = Series {
            label: format!("nu = {nu}"),
            points: records
                .iter()
                .map(|r| (r.n_terms as f64, r.sup_error))
                .collect(),
        };
        fs::write(svg_path, render_log_plot(&[series], "N", "sup error"))?;
        println!("wrote {}", svg_path.display());
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn sweep_nu(
    ctx: &Context,
    n_list: &[usize],
    nu_min: f64,
    nu_max: f64,
    nu_step: f64,
    domain: &DomainArgs,
    ch: &ColeHopfArgs,
    out: Option<&Path>,
    svg: Option<&Path>,
) -> Result<()> {
    if !(nu_min > 0.0) || !(nu_step > 0.0) || nu_max < nu_min {
        return Err(burgers_core::BurgersError::Domain(
            "need 0 < nu_min <= nu_max and nu_step > 0".into(),
        ));
    }
    let dom = domain_from_args(domain)?;
    let spec = cole_hopf_spec(ch);
    let count = ((nu_max - nu_min) / nu_step + 1e-9).floor() as usize + 1;
    let nu_grid: Vec<f64> = (0..count).map(|i| nu_min + nu_step * i as f64).collect();
    let records = analysis::sweep_nu(n_list, &nu_grid, &dom, &spec)?;
    let json = Value::Array(
        records
            .iter()
            .map(|r| {
                json!({
                    "nu": r.nu, "N": r.n_terms,
                    "sup_error": r.sup_error, "flag": u8::from(r.flagged)
                })
            })
            .collect(),
    );
    let path = ctx.resolve(out, "sweep_nu");
    ctx.write(&path, || sweep_nu_csv(&records), json)?;
    for &n in n_list {
        if let Some(onset) = analysis::upturn_onset(&records, n) {
            println!("N = {n}: error reaches O(1) below nu ~ {onset:.3}");
        }
    }
    if let Some(svg_path) = svg {
        let series: Vec<Series> = n_list
            .iter()
            .map(|&n| Series {
                label: format!("N = {n}"),
                points: records
                    .iter()
                    .filter(|r| r.n_terms == n)
                    .map(|r| (r.nu, r.sup_error))
                    .collect(),
            })
            .collect();
        fs::write(svg_path, render_log_plot(&series, "nu", "sup error"))?;
        println!("wrote {}", svg_path.display());
    }
    Ok(())
}

pub fn ratio(ctx: &Context, m_max: usize, out: Option<&Path>) -> Result<()> {
    let rs = analysis::estimate_r(m_max)?;
    let json = Value::Array(
        rs.iter()
            .map(|&(m, r)| json!({ "m": m, "r_m": r }))
            .collect(),
    );
    let path = ctx.resolve(out, "ratio");
    ctx.write(
        &path,
        || {
            let mut buf = Vec::new();
            analysis::write_ratio_csv(&rs, &mut buf)?;
            Ok(buf)
        },
        json,
    )?;
    let (m_last, r_last) = *rs.last().expect("m_max >= 2 guarantees entries");
    let accelerated = analysis::richardson_extrapolate(&rs).expect("nonempty");
    println!("r_{m_last} = {r_last:.10}, accelerated r = {accelerated:.10}");
    Ok(())
}
