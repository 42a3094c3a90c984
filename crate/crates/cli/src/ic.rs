//! Initial-condition sources for the `recurse` subcommand: the built-in
//! `exp-iz` and `cos` profiles, or a tabulated one-period sample file
//! (columns `x,re[,im]`, uniform x, right endpoint not repeated) evaluated
//! off-grid by trigonometric interpolation.

use std::path::Path;

use burgers_core::error::{BurgersError, Result};
use burgers_core::spectral::Spectral;
use burgers_core::C64;

pub enum InitialCondition {
    ExpIz,
    Cos,
    Sampled {
        x0: f64,
        period: f64,
        spectral: Spectral,
        modes: Vec<C64>,
    },
}

impl InitialCondition {
    pub fn parse(spec: &str) -> Result<Self> {
        match spec {
            "exp-iz" => Ok(InitialCondition::ExpIz),
            "cos" => Ok(InitialCondition::Cos),
            path => Self::from_file(Path::new(path)),
        }
    }

    fn from_file(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(BurgersError::Input(format!(
                "initial condition '{}' is neither a built-in name (exp-iz, cos) nor a file",
                path.display()
            )));
        }
        let text = std::fs::read_to_string(path)?;
        let mut xs = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if lineno == 0 && cols[0].parse::<f64>().is_err() {
                continue; // header row
            }
            if cols.len() != 2 && cols.len() != 3 {
                return Err(BurgersError::Input(format!(
                    "{}:{}: expected 2 or 3 columns (x, re[, im])",
                    path.display(),
                    lineno + 1
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| {
                    BurgersError::Input(format!("{}:{}: {e}", path.display(), lineno + 1))
                })
            };
            xs.push(parse(cols[0])?);
            let re = parse(cols[1])?;
            let im = if cols.len() == 3 {
                parse(cols[2])?
            } else {
                0.0
            };
            values.push(C64::new(re, im));
        }
        if xs.len() < 4 {
            return Err(BurgersError::Input(
                "need at least 4 initial-condition samples".into(),
            ));
        }
        let n = xs.len();
        let dx = xs[1] - xs[0];
        if dx <= 0.0 {
            return Err(BurgersError::Input(
                "sample abscissae must be increasing".into(),
            ));
        }
        for w in xs.windows(2) {
            if ((w[1] - w[0]) - dx).abs() > 1e-9 * dx.abs() * n as f64 {
                return Err(BurgersError::Input(
                    "sample abscissae must be uniform".into(),
                ));
            }
        }
        let period = dx * n as f64;
        let spectral = Spectral::new(n, xs[0], period);
        let modes = spectral.to_modes(&values);
        Ok(InitialCondition::Sampled {
            x0: xs[0],
            period,
            spectral,
            modes,
        })
    }

    pub fn eval(&self, x: f64) -> C64 {
        match self {
            InitialCondition::ExpIz => C64::new(0.0, x).exp(),
            InitialCondition::Cos => C64::new(x.cos(), 0.0),
            InitialCondition::Sampled {
                spectral, modes, ..
            } => spectral.eval_modes_at(modes, x),
        }
    }

    /// Spatial origin and period of the grid this condition lives on.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            InitialCondition::ExpIz | InitialCondition::Cos => (0.0, 2.0 * std::f64::consts::PI),
            InitialCondition::Sampled { x0, period, .. } => (*x0, *period),
        }
    }
}
