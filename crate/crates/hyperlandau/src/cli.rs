//! Command-line front end: spectrum tables, wavefunction and spinor
//! sampling, figure data emission and the cross-module verification suite.
//! All output is machine-readable CSV or JSON.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::analytic::{self, epsilon_n, radial_eigenpair, weyl_energies};
use crate::dirac::{
    assemble_dirac_solution, dirac_energy, enumerate_solutions, spinor_ratio, EnergyBranch,
    EnergySign, Frame, RatioDirection, WeylSpinor,
};
use crate::model::{max_level, validate, FieldConfig, QuantumNumbers, SystemParams};
use crate::numeric::{discretize, lowest_eigenvalues, Grid};
use crate::susy::{
    intertwining_residual, ladder_apply, shape_invariance_residual, LadderDirection, Superpotential,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Weyl,
    Dirac,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureKind {
    Potentials,
    Levels,
}

/// One resolved run. Defaults mirror the reference figure parameters:
/// A0 = 5, λ = 7, m = 1, natural units.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub a0: f64,
    pub two_lambda: i64,
    pub n: Option<u32>,
    pub mass: f64,
    pub radius: f64,
    pub model: ModelKind,
    pub u_min: Option<f64>,
    pub u_max: Option<f64>,
    pub points: Option<usize>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub frame: Frame,
    /// Self-test hook: perturbs ε₁ inside the spectrum-match check so the
    /// verification suite demonstrably catches faults.
    pub inject_fault: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            a0: 5.0,
            two_lambda: 14,
            n: None,
            mass: 1.0,
            radius: 1.0,
            model: ModelKind::Weyl,
            u_min: None,
            u_max: None,
            points: None,
            format: OutputFormat::Csv,
            out: None,
            frame: Frame::RotationForm,
            inject_fault: None,
        }
    }
}

impl RunConfig {
    pub fn params(&self) -> SystemParams {
        SystemParams {
            mass: self.mass,
            radius: self.radius,
            ..SystemParams::default()
        }
    }

    pub fn lambda(&self) -> f64 {
        self.two_lambda as f64 / 2.0
    }

    fn field(&self) -> FieldConfig {
        FieldConfig { a0: self.a0 }
    }

    fn quantum_numbers(&self) -> QuantumNumbers {
        QuantumNumbers::new(self.two_lambda, self.n.unwrap_or(0))
    }

    /// Model-module validation; warnings are tolerated, errors are not.
    pub fn validated(&self) -> Result<(), CliError> {
        let report = validate(&self.params(), &self.field(), &self.quantum_numbers());
        if report.passed() {
            Ok(())
        } else {
            Err(CliError::Validation {
                issues: report.issues,
            })
        }
    }

    pub fn grid(&self) -> Result<Grid, CliError> {
        let default = Grid::default_for(self.a0);
        let grid = Grid::new(
            self.u_min.unwrap_or(default.u_min),
            self.u_max.unwrap_or(default.u_max),
            self.points.unwrap_or(default.count),
        )?;
        Ok(grid)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("validation failed")]
    Validation {
        issues: Vec<crate::model::ValidationIssue>,
    },
    #[error(transparent)]
    Numeric(#[from] crate::numeric::NumericError),
    #[error(transparent)]
    Analytic(#[from] crate::analytic::AnalyticError),
    #[error(transparent)]
    Dirac(#[from] crate::dirac::DiracError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Stable machine-readable error object for stderr.
    pub fn to_json(&self) -> Value {
        match self {
            CliError::Validation { issues } => json!({
                "error": {"kind": "validation", "issues": issues}
            }),
            other => json!({
                "error": {"kind": "runtime", "message": other.to_string()}
            }),
        }
    }

    pub fn exit_code(&self) -> i32 {
        1
    }
}

/// A rectangular result table plus the parameters that produced it.
/// Serializes to CSV (header row, LF, 17 significant digits) or to JSON as
/// {"params": {...}, "rows": [...]}.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputTable {
    pub params: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

/// Full-precision decimal so downstream plotting is lossless.
pub fn fmt_full(x: f64) -> String {
    format!("{:.16e}", x)
}

impl OutputTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| c.map(fmt_full).unwrap_or_default())
                .collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut params = self.params.clone();
        if let Value::Object(map) = &mut params {
            map.insert("columns".into(), json!(self.columns));
        }
        let doc = json!({
            "params": params,
            "rows": self.rows,
        });
        serde_json::to_string_pretty(&doc).expect("table serializes")
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

fn base_params(config: &RunConfig) -> Value {
    json!({
        "a0": config.a0,
        "two_lambda": config.two_lambda,
        "lambda": config.lambda(),
        "mass": config.mass,
        "radius": config.radius,
        "model": match config.model { ModelKind::Weyl => "weyl", ModelKind::Dirac => "dirac" },
    })
}

/// One row per level: (n, ε_n, E₊, E₋) with the energies from the selected
/// model.
pub fn cmd_spectrum(config: &RunConfig) -> Result<OutputTable, CliError> {
    config.validated()?;
    let params = config.params();
    let mut rows = Vec::new();
    for n in 0..=max_level(config.a0) {
        let eps = epsilon_n(config.a0, n)?;
        let (e_plus, e_minus) = match config.model {
            ModelKind::Weyl => weyl_energies(config.a0, params.radius, params.v_f, params.hbar, n)?,
            ModelKind::Dirac => (
                dirac_energy(eps, &params, EnergySign::Plus),
                dirac_energy(eps, &params, EnergySign::Minus),
            ),
        };
        rows.push(vec![Some(n as f64), Some(eps), Some(e_plus), Some(e_minus)]);
    }
    Ok(OutputTable {
        params: base_params(config),
        columns: vec![
            "n".into(),
            "epsilon".into(),
            "E_plus".into(),
            "E_minus".into(),
        ],
        rows,
    })
}

/// Normalized radial functions sampled on the grid: columns u, g1 and
/// (for n ≥ 1) g2.
pub fn cmd_wavefunction(config: &RunConfig) -> Result<OutputTable, CliError> {
    config.validated()?;
    let n = config.n.unwrap_or(0);
    let pair = radial_eigenpair(config.a0, config.lambda(), n)?;
    let grid = config.grid()?;
    let mut columns = vec!["u".into(), "g1".into()];
    if pair.g2.is_some() {
        columns.push("g2".into());
    }
    let rows = grid
        .nodes()
        .map(|u| {
            let mut row = vec![Some(u), Some(pair.g1.eval(u))];
            if let Some(g2) = &pair.g2 {
                row.push(Some(g2.eval(u)));
            }
            row
        })
        .collect();
    let mut params = base_params(config);
    if let Value::Object(map) = &mut params {
        map.insert("n".into(), json!(n));
        map.insert("epsilon".into(), json!(pair.epsilon));
    }
    Ok(OutputTable {
        params,
        columns,
        rows,
    })
}

/// Spinor components sampled along u at φ = 0. For the Dirac model this is
/// the four-spinor of the positive-energy branch; for Dirac-Weyl the
/// two-spinor with positive ℰ.
pub fn cmd_spinor(config: &RunConfig) -> Result<OutputTable, CliError> {
    config.validated()?;
    let n = config.n.unwrap_or(0);
    let lambda = config.lambda();
    let params = config.params();
    let radial = radial_eigenpair(config.a0, lambda, n)?;
    let wp = WeylSpinor::new(EnergySign::Plus, lambda, radial, config.frame);
    let wm = WeylSpinor::new(EnergySign::Minus, lambda, radial, config.frame);
    let grid = config.grid()?;

    let (columns, rows, energy): (Vec<String>, Vec<Vec<Option<f64>>>, f64) = match config.model {
        ModelKind::Weyl => {
            let columns = vec![
                "u".into(),
                "psi1_re".into(),
                "psi1_im".into(),
                "psi2_re".into(),
                "psi2_im".into(),
            ];
            let rows = grid
                .nodes()
                .map(|u| {
                    let v = wp.eval(u, 0.0);
                    vec![
                        Some(u),
                        Some(v[0].re),
                        Some(v[0].im),
                        Some(v[1].re),
                        Some(v[1].im),
                    ]
                })
                .collect();
            let (e_plus, _) = weyl_energies(config.a0, params.radius, params.v_f, params.hbar, n)?;
            (columns, rows, e_plus)
        }
        ModelKind::Dirac => {
            let branch = if n == 0 {
                EnergyBranch::GroundPlus
            } else {
                EnergyBranch::ParticlePlus
            };
            let sol = assemble_dirac_solution(&wp, &wm, &params, branch)?;
            let columns = vec![
                "u".into(),
                "phi1_re".into(),
                "phi1_im".into(),
                "phi2_re".into(),
                "phi2_im".into(),
                "chi1_re".into(),
                "chi1_im".into(),
                "chi2_re".into(),
                "chi2_im".into(),
            ];
            let rows = grid
                .nodes()
                .map(|u| {
                    let v = sol.four_spinor(u, 0.0);
                    let mut row = vec![Some(u)];
                    for c in v {
                        row.push(Some(c.re));
                        row.push(Some(c.im));
                    }
                    row
                })
                .collect();
            (columns, rows, sol.energy)
        }
    };
    let mut params_v = base_params(config);
    if let Value::Object(map) = &mut params_v {
        map.insert("n".into(), json!(n));
        map.insert("energy".into(), json!(energy));
    }
    Ok(OutputTable {
        params: params_v,
        columns,
        rows,
    })
}

/// Plot-ready data. `Potentials` yields two tables: (u, V1, V2) samples
/// and the horizontal level lines ε_n. `Levels` yields (n, E) for the
/// Dirac-Weyl and Dirac spectra side by side.
pub fn cmd_figure(
    config: &RunConfig,
    which: FigureKind,
) -> Result<Vec<(String, OutputTable)>, CliError> {
    config.validated()?;
    let params = config.params();
    match which {
        FigureKind::Potentials => {
            let grid = Grid::new(
                config.u_min.unwrap_or(0.1),
                config.u_max.unwrap_or(8.0),
                config.points.unwrap_or(800),
            )?;
            let w = Superpotential::constant_field(config.a0, config.lambda());
            let pots = crate::susy::partner_potentials(&w);
            let rows = grid
                .nodes()
                .map(|u| vec![Some(u), Some(pots.v1(u)), Some(pots.v2(u))])
                .collect();
            let potentials = OutputTable {
                params: base_params(config),
                columns: vec!["u".into(), "V1".into(), "V2".into()],
                rows,
            };
            let level_rows = (0..=max_level(config.a0))
                .map(|n| Ok(vec![Some(n as f64), Some(epsilon_n(config.a0, n)?)]))
                .collect::<Result<_, CliError>>()?;
            let levels = OutputTable {
                params: base_params(config),
                columns: vec!["n".into(), "epsilon".into()],
                rows: level_rows,
            };
            Ok(vec![
                ("potentials".into(), potentials),
                ("levels".into(), levels),
            ])
        }
        FigureKind::Levels => {
            let rows = (0..=max_level(config.a0))
                .map(|n| {
                    let eps = epsilon_n(config.a0, n)?;
                    let (w_plus, w_minus) =
                        weyl_energies(config.a0, params.radius, params.v_f, params.hbar, n)?;
                    Ok(vec![
                        Some(n as f64),
                        Some(w_plus),
                        Some(w_minus),
                        Some(dirac_energy(eps, &params, EnergySign::Plus)),
                        Some(dirac_energy(eps, &params, EnergySign::Minus)),
                    ])
                })
                .collect::<Result<_, CliError>>()?;
            Ok(vec![(
                "levels".into(),
                OutputTable {
                    params: base_params(config),
                    columns: vec![
                        "n".into(),
                        "E_weyl_plus".into(),
                        "E_weyl_minus".into(),
                        "E_dirac_plus".into(),
                        "E_dirac_minus".into(),
                    ],
                    rows,
                },
            )])
        }
    }
}

/// One verification check: residual vs pinned tolerance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub tolerance: f64,
    pub residual: f64,
    pub pass: bool,
    pub millis: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn record<F: FnOnce() -> f64>(name: &str, tolerance: f64, f: F) -> CheckRecord {
    let start = Instant::now();
    let residual = f();
    CheckRecord {
        name: name.into(),
        tolerance,
        residual,
        pass: residual.is_finite() && residual <= tolerance,
        millis: start.elapsed().as_millis() as u64,
    }
}

/// Verification concurrency cap from HYPERLANDAU_THREADS (0 or unset =
/// one thread per check).
fn thread_cap(total: usize) -> usize {
    match std::env::var("HYPERLANDAU_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        Some(0) | None => total,
        Some(k) => k.min(total).max(1),
    }
}

/// The cross-module invariant suite: analytic-vs-FD spectrum match, shape
/// invariance, ladder closure, intertwining, isospectrality,
/// normalization, the spinor square identity and gap emptiness.
pub fn cmd_verify(config: &RunConfig) -> Result<VerifyReport, CliError> {
    config.validated()?;
    let a0 = config.a0;
    let lambda = config.lambda();
    let params = config.params();
    let fault = config.inject_fault.unwrap_or(0.0);

    type Check = Box<dyn FnOnce() -> CheckRecord + Send>;
    let checks: Vec<Check> = vec![
        Box::new(move || {
            record("spectrum_fd_match", 1e-3, || {
                let grid = Grid::default_for(a0);
                let w = Superpotential::constant_field(a0, lambda);
                let pots = crate::susy::partner_potentials(&w);
                let op = discretize(|u| pots.v1(u), &grid).expect("finite potential");
                let k = max_level(a0) as usize + 1;
                let eigs = lowest_eigenvalues(&op, k);
                let mut worst = 0.0f64;
                for (n, fd) in eigs.iter().enumerate() {
                    let mut exact = epsilon_n(a0, n as u32).expect("admissible level");
                    if n == 1 {
                        exact += fault;
                    }
                    worst = worst.max((fd - exact).abs() / exact.max(1.0));
                }
                worst
            })
        }),
        Box::new(move || {
            record("shape_invariance", 1e-10, || {
                let mut rng = ChaCha8Rng::seed_from_u64(0x5u64);
                let mut worst = 0.0f64;
                for _ in 0..1000 {
                    let a: f64 = rng.gen_range(0.2..8.0);
                    let l: f64 = a + 1.0 + rng.gen_range(0.1..6.0);
                    let u: f64 = rng.gen_range(0.05..10.0);
                    let res = shape_invariance_residual(a, l, u).abs();
                    let scale = 1.0 + crate::susy::v1_constant_field(a, l, u).abs();
                    worst = worst.max(res / scale);
                }
                worst
            })
        }),
        Box::new(move || {
            record("ladder_closure", 1e-4, || {
                let w = Superpotential::constant_field(a0, lambda);
                let mut worst = 0.0f64;
                for n in 1..=max_level(a0) {
                    let Ok(pair) = radial_eigenpair(a0, lambda, n) else {
                        return f64::INFINITY;
                    };
                    let u_hi = analytic::RadialEigenpair::u_hi(a0, n);
                    let count = (u_hi / 1e-3).round() as usize + 1;
                    let grid = Grid::new(1e-3, u_hi, count).expect("valid grid");
                    let g1 = grid.sample(|u| pair.g1.eval(u));
                    let g2 = grid.sample(|u| pair.g2.expect("n >= 1").eval(u));
                    let root = pair.epsilon.sqrt();
                    let down = ladder_apply(LadderDirection::Lower, &w, &g1).expect("grid ok");
                    let up = ladder_apply(LadderDirection::Raise, &w, &g2).expect("grid ok");
                    worst = worst.max(down.sub(&g2.scaled(root)).expect("same grid").norm());
                    worst = worst.max(up.sub(&g1.scaled(root)).expect("same grid").norm());
                }
                worst
            })
        }),
        Box::new(move || {
            record("intertwining", 1e-3, || {
                let w = Superpotential::constant_field(a0, lambda);
                let grid = Grid::new(1.0, 5.0, 4001).expect("valid grid");
                let f = grid.sample(|u| (-20.0 * (u - 3.0) * (u - 3.0)).exp());
                intertwining_residual(&w, &f).expect("grid ok")
            })
        }),
        Box::new(move || {
            record("isospectrality", 2e-3, || {
                let grid = Grid::default_for(a0);
                let w = Superpotential::constant_field(a0, lambda);
                let pots = crate::susy::partner_potentials(&w);
                let op1 = discretize(|u| pots.v1(u), &grid).expect("finite potential");
                let op2 = discretize(|u| pots.v2(u), &grid).expect("finite potential");
                let k = max_level(a0) as usize + 1;
                let e1 = lowest_eigenvalues(&op1, k);
                let e2 = lowest_eigenvalues(&op2, k.saturating_sub(1));
                let mut worst = e1[0].abs(); // H1's zero mode must be at 0
                for (a, b) in e1[1..].iter().zip(e2.iter()) {
                    worst = worst.max((a - b).abs());
                }
                worst
            })
        }),
        Box::new(move || {
            record("normalization", 1e-8, || {
                let mut worst = 0.0f64;
                for n in 0..=max_level(a0) {
                    let Ok(pair) = radial_eigenpair(a0, lambda, n) else {
                        return f64::INFINITY;
                    };
                    let u_hi = analytic::RadialEigenpair::u_hi(a0, n);
                    let i1 = crate::numeric::integrate_adaptive(
                        |u| pair.g1.eval(u).powi(2),
                        0.0,
                        u_hi,
                        1e-12,
                    );
                    worst = worst.max((i1 - 1.0).abs());
                    if let Some(g2) = pair.g2 {
                        let i2 = crate::numeric::integrate_adaptive(
                            |u| g2.eval(u).powi(2),
                            0.0,
                            u_hi,
                            1e-12,
                        );
                        worst = worst.max((i2 - 1.0).abs());
                    }
                }
                worst
            })
        }),
        Box::new(move || {
            record("spinor_square_identity", 1e-12, || {
                let mc2 = params.mass * params.c * params.c;
                let mut worst = 0.0f64;
                for n in 1..=max_level(a0) {
                    let eps = epsilon_n(a0, n).expect("admissible level");
                    let e = dirac_energy(eps, &params, EnergySign::Plus);
                    for cal_e in [eps.sqrt() / params.radius, -eps.sqrt() / params.radius] {
                        let r = spinor_ratio(e, cal_e, &params, RatioDirection::LowerFromUpper)
                            .expect("E > -mc2");
                        worst = worst.max((r * r - (e - mc2) / (e + mc2)).abs());
                    }
                }
                worst
            })
        }),
        Box::new(move || {
            record("gap_emptiness", 1e-12, || {
                let mc2 = params.mass * params.c * params.c;
                let mut min_abs = f64::INFINITY;
                for n in 0..=max_level(a0) {
                    let Ok(radial) = radial_eigenpair(a0, lambda, n) else {
                        return f64::INFINITY;
                    };
                    let wp = WeylSpinor::new(EnergySign::Plus, lambda, radial, Frame::RotationForm);
                    let wm =
                        WeylSpinor::new(EnergySign::Minus, lambda, radial, Frame::RotationForm);
                    let sols = enumerate_solutions(&wp, &wm, &params).expect("branches assemble");
                    for s in sols {
                        min_abs = min_abs.min(s.energy.abs());
                    }
                }
                (mc2 - min_abs).max(0.0)
            })
        }),
    ];

    let total = checks.len();
    let cap = thread_cap(total);
    let results: Mutex<Vec<Option<CheckRecord>>> = Mutex::new(vec![None; total]);
    let queue: Mutex<Vec<(usize, Check)>> = Mutex::new(checks.into_iter().enumerate().collect());
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..cap {
            scope.spawn(|| loop {
                let _ = next.fetch_add(1, Ordering::Relaxed);
                let item = queue.lock().expect("queue lock").pop();
                match item {
                    Some((idx, check)) => {
                        let rec = check();
                        results.lock().expect("results lock")[idx] = Some(rec);
                    }
                    None => break,
                }
            });
        }
    });
    let checks: Vec<CheckRecord> = results
        .into_inner()
        .expect("results lock")
        .into_iter()
        .map(|r| r.expect("all checks ran"))
        .collect();
    let pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport { checks, pass })
}
