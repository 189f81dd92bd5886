use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "waveguide",
    version,
    about = "Bound states of a Dirichlet layer with a Neumann disc window"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the table here; stdout then carries only a one-line summary.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mult {
    Single,
    Degenerate,
    /// Both rules side by side (tables of counts only).
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Outer {
    Dirichlet,
    Neumann,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Zeros x_{n,l} of J_n, by order/index range or below a bound.
    Zeros(ZerosArgs),
    /// Inner Dirichlet levels for the three smallest zeros against a.
    Fig2(Fig2Args),
    /// Bound-state count against a/d.
    Fig3(Fig3Args),
    /// Bound-state count over a (d, a) grid.
    Fig4(Fig4Args),
    /// Variational certificate that a bound state exists.
    Certify(CertifyArgs),
    /// Finite-difference eigenvalues with their bracket.
    Solve(SolveArgs),
    /// Closed-form Dirichlet bracket levels, or the sandwich around an energy.
    Bracket(BracketArgs),
}

#[derive(Debug, Args)]
pub struct ZerosArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub n_max: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub l_max: Option<i64>,
    /// List every zero below this value instead of a range.
    #[arg(long, conflicts_with_all = ["n_max", "l_max"])]
    pub bound: Option<f64>,
    #[arg(long, value_enum, default_value_t = Mult::Single)]
    pub mult: Mult,
}

#[derive(Debug, Args)]
pub struct Fig2Args {
    #[arg(long, default_value_t = 1.0)]
    pub d: f64,
    #[arg(long, default_value_t = 0.5)]
    pub a_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub a_max: f64,
    #[arg(long, default_value_t = 0.5)]
    pub a_step: f64,
}

#[derive(Debug, Args)]
pub struct RatioGrid {
    #[arg(long, default_value_t = 0.1)]
    pub ratio_min: f64,
    #[arg(long, default_value_t = 4.0)]
    pub ratio_max: f64,
    #[arg(long, default_value_t = 0.1)]
    pub ratio_step: f64,
}

#[derive(Debug, Args)]
pub struct Fig3Args {
    #[command(flatten)]
    pub grid: RatioGrid,
    #[arg(long, value_enum, default_value_t = Mult::Single)]
    pub mult: Mult,
}

#[derive(Debug, Args)]
pub struct Fig4Args {
    #[arg(long, default_value_t = 0.5)]
    pub d_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub d_max: f64,
    #[arg(long, default_value_t = 0.5)]
    pub d_step: f64,
    #[arg(long, default_value_t = 0.5)]
    pub a_min: f64,
    #[arg(long, default_value_t = 4.0)]
    pub a_max: f64,
    #[arg(long, default_value_t = 0.5)]
    pub a_step: f64,
    #[arg(long, value_enum, default_value_t = Mult::Single)]
    pub mult: Mult,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub d: f64,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub d: f64,
    /// Angular modes, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub modes: Vec<u32>,
    /// Radial by vertical intervals; defaults to 16 per unit length of d.
    #[arg(long, value_parser = parse_mesh)]
    pub mesh: Option<(usize, usize)>,
    /// Eigenvalues per mode.
    #[arg(long, default_value_t = 3)]
    pub count: usize,
    /// Truncation R = a + factor·d.
    #[arg(long = "R-factor", default_value_t = 5.0)]
    pub r_factor: f64,
    #[arg(long, value_enum, default_value_t = Outer::Dirichlet)]
    pub outer: Outer,
}

#[derive(Debug, Args)]
pub struct BracketArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub d: f64,
    #[arg(long, value_enum, default_value_t = Mult::Single)]
    pub mult: Mult,
    /// Report the sandwich around this energy instead of the level list.
    #[arg(long)]
    pub lam: Option<f64>,
}

fn parse_mesh(s: &str) -> Result<(usize, usize), String> {
    let (nr, nz) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("mesh `{s}` is not of the form NRxNZ"))?;
    let nr = nr.trim().parse().map_err(|e| format!("bad NR in `{s}`: {e}"))?;
    let nz = nz.trim().parse().map_err(|e| format!("bad NZ in `{s}`: {e}"))?;
    Ok((nr, nz))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mesh_spec() {
        assert_eq!(parse_mesh("800x80"), Ok((800, 80)));
        assert_eq!(parse_mesh("10X20"), Ok((10, 20)));
        assert!(parse_mesh("800").is_err());
        assert!(parse_mesh("ax3").is_err());
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
