//! The `waveguide` command line: tables behind the bound-state figures,
//! certificates and solver runs, written as CSV.

pub mod args;
pub mod format;

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use waveguide_core::bessel::smallest_zeros;
use waveguide_core::fdsolver::MeshDensity;
use waveguide_core::bracketing::step_ratio;
use waveguide_core::{
    asymptotic_sandwich, bessel_zero, certify_bound_state, count_bound_states_upper,
    dirichlet_bracket_levels, figure_counts, solve_lowest, zeros_below, BesselOrder, BesselZero,
    Mesh, MultiplicityRule, RadialBoundary, ReducedProblem, SpectralError, WaveguideGeometry,
};

use args::{
    BracketArgs, CertifyArgs, Cli, Command, Fig2Args, Fig3Args, Fig4Args, Mult, Outer, SolveArgs,
    ZerosArgs,
};
use format::sig15;

pub const EXIT_OK: u8 = 0;
pub const EXIT_IO: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NO_CERTIFICATE: u8 = 3;
pub const EXIT_SANDWICH: u8 = 4;
pub const EXIT_NO_CONVERGENCE: u8 = 5;

/// A run that could not produce its table.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        let code = match e {
            SpectralError::NoCertificate { .. } => EXIT_NO_CERTIFICATE,
            SpectralError::NoConvergence { .. } | SpectralError::Factorization(_) => {
                EXIT_NO_CONVERGENCE
            }
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        out.write_record(&self.header)?;
        for row in &self.rows {
            out.write_record(row)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// A finished run: the table, a one-line summary, and the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub summary: String,
    pub code: u8,
}

impl Outcome {
    fn ok(table: Table, summary: String) -> Self {
        Self {
            table,
            summary,
            code: EXIT_OK,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Zeros(a) => zeros(a),
        Command::Fig2(a) => fig2(a),
        Command::Fig3(a) => fig3(a),
        Command::Fig4(a) => fig4(a),
        Command::Certify(a) => certify(a),
        Command::Solve(a) => solve(a),
        Command::Bracket(a) => bracket(a),
    }
}

fn single_rule(m: Mult) -> Result<MultiplicityRule, Failure> {
    match m {
        Mult::Single => Ok(MultiplicityRule::Single),
        Mult::Degenerate => Ok(MultiplicityRule::AngularDegeneracy),
        Mult::Both => Err(Failure::usage("--mult both only applies to count tables")),
    }
}

fn rules(m: Mult) -> Vec<MultiplicityRule> {
    match m {
        Mult::Single => vec![MultiplicityRule::Single],
        Mult::Degenerate => vec![MultiplicityRule::AngularDegeneracy],
        Mult::Both => vec![MultiplicityRule::Single, MultiplicityRule::AngularDegeneracy],
    }
}

fn count_columns(m: Mult) -> Vec<&'static str> {
    match m {
        Mult::Both => vec!["count_single", "count_degenerate"],
        _ => vec!["count"],
    }
}

const MAX_GRID: usize = 1_000_000;

/// `lo, lo + step, …` up to `hi` (inclusive within rounding).
fn grid(name: &str, lo: f64, hi: f64, step: f64) -> Result<Vec<f64>, Failure> {
    if !(lo > 0.0 && hi >= lo && step > 0.0) || !hi.is_finite() || !step.is_finite() {
        return Err(Failure::usage(format!(
            "{name} range needs 0 < min <= max and step > 0 (got {lo}, {hi}, {step})"
        )));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    if n >= MAX_GRID {
        return Err(Failure::usage(format!("{name} grid has more than {MAX_GRID} points")));
    }
    Ok((0..=n).map(|k| lo + k as f64 * step).collect())
}

fn geometry(d: f64, a: f64) -> Result<WaveguideGeometry, Failure> {
    Ok(WaveguideGeometry::new(d, a)?)
}

fn zeros(args: &ZerosArgs) -> Result<Outcome, Failure> {
    let mut table = Table::new(&["n", "l", "x"]);
    let push = |t: &mut Table, z: &BesselZero| {
        t.rows.push(vec![
            z.order.get().to_string(),
            z.index.to_string(),
            sig15(z.value),
        ]);
    };
    if let Some(bound) = args.bound {
        for z in zeros_below(bound, single_rule(args.mult)?)? {
            push(&mut table, &z);
        }
    } else {
        let (Some(n_max), Some(l_max)) = (args.n_max, args.l_max) else {
            return Err(Failure::usage("zeros needs --bound or both --n-max and --l-max"));
        };
        if n_max < 0 || l_max < 1 || n_max > 10_000 || l_max > 100_000 {
            return Err(Failure::usage(format!(
                "need 0 <= n-max <= 10000 and 1 <= l-max <= 100000 (got {n_max}, {l_max})"
            )));
        }
        for n in 0..=n_max as u32 {
            for l in 1..=l_max as u32 {
                push(&mut table, &bessel_zero(BesselOrder::new(n), l)?);
            }
        }
    }
    let summary = format!("zeros rows={}", table.rows.len());
    Ok(Outcome::ok(table, summary))
}

fn fig2(args: &Fig2Args) -> Result<Outcome, Failure> {
    let radii = grid("a", args.a_min, args.a_max, args.a_step)?;
    geometry(args.d, radii[0])?;
    // The three smallest zeros over all orders; the scan decides which ones.
    let zeros = smallest_zeros(3);
    let names: Vec<String> = zeros
        .iter()
        .map(|z| format!("level_x{}_{}", z.order.get(), z.index))
        .collect();
    let mut header = vec!["a"];
    header.extend(names.iter().map(String::as_str));
    header.push("continuum");
    let mut table = Table::new(&header);
    let g = geometry(args.d, 1.0)?;
    for &a in &radii {
        let mut row = vec![sig15(a)];
        row.extend(
            zeros
                .iter()
                .map(|z| sig15(g.transverse_ground() + (z.value / a).powi(2))),
        );
        row.push(sig15(g.continuum_threshold()));
        table.rows.push(row);
    }
    let crossings: Vec<String> = zeros
        .iter()
        .map(|z| sig15(step_ratio(z.value) * args.d))
        .collect();
    let summary = format!(
        "fig2 rows={} curves={} crossings_a={}",
        table.rows.len(),
        names.join(";"),
        crossings.join(";")
    );
    Ok(Outcome::ok(table, summary))
}

fn fig3(args: &Fig3Args) -> Result<Outcome, Failure> {
    let g = &args.grid;
    let ratios = grid("ratio", g.ratio_min, g.ratio_max, g.ratio_step)?;
    let mut header = vec!["ratio"];
    header.extend(count_columns(args.mult));
    let mut table = Table::new(&header);
    let columns = rules(args.mult)
        .into_iter()
        .map(|r| figure_counts(&ratios, r))
        .collect::<waveguide_core::Result<Vec<_>>>()?;
    for (k, &ratio) in ratios.iter().enumerate() {
        let mut row = vec![sig15(ratio)];
        row.extend(columns.iter().map(|c| c[k].1.to_string()));
        table.rows.push(row);
    }
    let first_step = step_ratio(smallest_zeros(1)[0].value);
    let summary = format!(
        "fig3 rows={} first_step={} final_counts={}",
        table.rows.len(),
        sig15(first_step),
        columns
            .iter()
            .map(|c| c.last().map_or(0, |r| r.1).to_string())
            .collect::<Vec<_>>()
            .join(";")
    );
    Ok(Outcome::ok(table, summary))
}

fn fig4(args: &Fig4Args) -> Result<Outcome, Failure> {
    let widths = grid("d", args.d_min, args.d_max, args.d_step)?;
    let radii = grid("a", args.a_min, args.a_max, args.a_step)?;
    let mut header = vec!["d", "a", "ratio"];
    header.extend(count_columns(args.mult));
    let mut table = Table::new(&header);
    let mut invariant = true;
    for &d in &widths {
        for &a in &radii {
            let g = geometry(d, a)?;
            let mut row = vec![sig15(d), sig15(a), sig15(g.ratio())];
            for rule in rules(args.mult) {
                // Levels below (π/d)² in energy units, checked against the
                // count that only sees the ratio.
                let by_energy = dirichlet_bracket_levels(&g, g.continuum_threshold(), rule)?.len();
                invariant &= by_energy == count_bound_states_upper(&g, rule);
                row.push(by_energy.to_string());
            }
            table.rows.push(row);
        }
    }
    let summary = format!("fig4 rows={} ratio_invariant={invariant}", table.rows.len());
    Ok(Outcome::ok(table, summary))
}

fn certify(args: &CertifyArgs) -> Result<Outcome, Failure> {
    let g = geometry(args.d, args.a)?;
    let cert = certify_bound_state(&g).map_err(|e| match e {
        SpectralError::Quadrature { .. } => Failure {
            code: EXIT_NO_CERTIFICATE,
            message: e.to_string(),
        },
        other => other.into(),
    })?;
    let mut table = Table::new(&["step", "tau", "epsilon", "closed_form", "quadrature"]);
    for (k, s) in cert.trace.iter().enumerate() {
        table.rows.push(vec![
            k.to_string(),
            sig15(s.tau),
            sig15(s.epsilon),
            sig15(s.closed_form),
            sig15(s.quadrature),
        ]);
    }
    let summary = format!(
        "certified a={} d={} tau={} epsilon={} q={} margin={} delta={}",
        sig15(g.a()),
        sig15(g.d()),
        sig15(cert.params.tau()),
        sig15(cert.params.epsilon),
        sig15(cert.energy),
        sig15(cert.margin()),
        sig15(cert.required_margin)
    );
    Ok(Outcome::ok(table, summary))
}

/// The `count` lowest inner-Dirichlet levels of mode `n`,
/// `((2k+1)π/2d)² + (x_{n,l}/a)²`.
fn mode_dirichlet_levels(g: &WaveguideGeometry, n: BesselOrder, count: usize) -> Result<Vec<f64>, Failure> {
    if g.a() == 0.0 {
        return Ok(vec![f64::INFINITY; count]);
    }
    let mut levels = Vec::with_capacity(count * count);
    for l in 1..=count as u32 {
        let radial = (bessel_zero(n, l)?.value / g.a()).powi(2);
        for k in 0..count as u32 {
            levels.push(g.transverse_level(k) + radial);
        }
    }
    levels.sort_by(f64::total_cmp);
    levels.truncate(count);
    Ok(levels)
}

fn solve(args: &SolveArgs) -> Result<Outcome, Failure> {
    let g = geometry(args.d, args.a)?;
    if args.count == 0 || args.modes.is_empty() {
        return Err(Failure::usage("need at least one mode and --count >= 1"));
    }
    let outer = match args.outer {
        Outer::Dirichlet => RadialBoundary::Dirichlet,
        Outer::Neumann => RadialBoundary::Neumann,
    };
    let mut table = Table::new(&[
        "n",
        "j",
        "lambda",
        "residual",
        "bracket_lo",
        "bracket_hi",
        "error_estimate",
    ]);
    let mut violations = 0;
    let mut bound_states = 0;
    let mut lambda1 = f64::INFINITY;
    let mut mesh_label = String::new();
    for &n in &args.modes {
        let order = BesselOrder::new(n);
        let p = ReducedProblem::new(g, order)
            .with_radius_factor(args.r_factor)?
            .with_outer(outer);
        let mesh = match args.mesh {
            Some((nr, nz)) => Mesh::conforming(&p, nr, nz)?,
            None => MeshDensity { nz: 32 }.mesh(&p)?,
        };
        mesh_label = format!("{}x{}", mesh.nr(), mesh.nz());
        // Discretization error from a companion solve one level off.
        let companion = if mesh.nz() >= 2 * waveguide_core::fdsolver::MIN_NZ {
            Mesh::conforming(&p, mesh.nr() / 2, mesh.nz() / 2)?
        } else {
            mesh.refined()
        };
        let fine = solve_lowest(&p, &mesh, args.count)?;
        let other = solve_lowest(&p, &companion, args.count)?;
        let upper = mode_dirichlet_levels(&g, order, args.count)?;
        let lower = g.transverse_ground();
        for (j, &hi) in upper.iter().enumerate() {
            let lam = fine.eigenvalues[j];
            let err = (lam - other.eigenvalues[j]).abs();
            let slack = err + 1e-9 * lam.abs();
            if lam > hi + slack || lam < lower - slack {
                violations += 1;
            }
            if lam < g.continuum_threshold() {
                bound_states += 1;
            }
            lambda1 = lambda1.min(lam);
            table.rows.push(vec![
                n.to_string(),
                (j + 1).to_string(),
                sig15(lam),
                sig15(fine.residuals[j]),
                sig15(lower),
                sig15(hi),
                sig15(err),
            ]);
        }
    }
    let summary = format!(
        "solve a={} d={} mesh={mesh_label} bound_states={bound_states} lambda1={} violations={violations}",
        sig15(g.a()),
        sig15(g.d()),
        sig15(lambda1)
    );
    Ok(Outcome {
        table,
        summary,
        code: if violations > 0 { EXIT_SANDWICH } else { EXIT_OK },
    })
}

fn bracket(args: &BracketArgs) -> Result<Outcome, Failure> {
    let g = geometry(args.d, args.a)?;
    if let Some(lam) = args.lam {
        let s = asymptotic_sandwich(&g, lam)?;
        let mut table = Table::new(&["lam", "lower", "upper", "width"]);
        table
            .rows
            .push(vec![sig15(lam), sig15(s.lower), sig15(s.upper), sig15(s.width())]);
        let summary = format!("sandwich lam={} lower={} upper={}", sig15(lam), sig15(s.lower), sig15(s.upper));
        return Ok(Outcome::ok(table, summary));
    }
    let rule = single_rule(args.mult)?;
    let levels = if g.a() > 0.0 {
        dirichlet_bracket_levels(&g, g.continuum_threshold(), rule)?
    } else {
        Vec::new()
    };
    let mut table = Table::new(&["k", "n", "l", "zero", "value"]);
    for lv in &levels {
        table.rows.push(vec![
            lv.k.to_string(),
            lv.zero.order.get().to_string(),
            lv.zero.index.to_string(),
            sig15(lv.zero.value),
            sig15(lv.value),
        ]);
    }
    let summary = format!(
        "bracket a={} d={} count={} continuum={}",
        sig15(g.a()),
        sig15(g.d()),
        levels.len(),
        sig15(PI * PI / (g.d() * g.d()))
    );
    Ok(Outcome::ok(table, summary))
}
