use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::qubit::Rational;

#[derive(Parser, Debug, Serialize)]
#[command(name = "thermalops", version, about = "Thermal operations on finite-dimensional quantum systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Structural tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,

    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true, visible_alias = "json", value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Write tabular data as CSV.
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,

    /// Write an SVG projection (cone only).
    #[arg(long, global = true, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Hamiltonian spectra and temperatures.
    #[command(subcommand)]
    Ham(HamCommand),
    /// Choi-matrix channels.
    #[command(subcommand)]
    Channel(ChannelCommand),
    /// Thermal-operation specifications.
    #[command(subcommand)]
    Thermal(ThermalCommand),
    /// Qubit coordinates and families.
    #[command(subcommand)]
    Qubit(QubitCommand),
    /// Numeric experiments with pass/fail verdicts.
    #[command(subcommand)]
    Exp(ExpCommand),
}

/// System Hamiltonian: `--energies 0,1,2`, `--levels 0:2,1:3` or a JSON file.
#[derive(Args, Debug, Serialize, Clone)]
pub struct SystemArg {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["levels", "ham"])]
    pub energies: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "ham")]
    pub levels: Option<String>,
    #[arg(long, value_name = "PATH")]
    pub ham: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize, Clone)]
pub struct BathArg {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["bath_levels", "bath"])]
    pub bath_energies: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "bath")]
    pub bath_levels: Option<String>,
    #[arg(long, value_name = "PATH")]
    pub bath: Option<PathBuf>,
}

/// `--beta x`, or `--q x` meaning β = -ln(x) per unit energy.
#[derive(Args, Debug, Serialize, Clone, Copy)]
pub struct TempArg {
    #[arg(long, conflicts_with = "q")]
    pub beta: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HamCommand {
    /// Distinct energy differences and degeneracy.
    Bohr {
        #[command(flatten)]
        system: SystemArg,
    },
    /// Bath level graph under the system's transitions.
    Resonance {
        #[command(flatten)]
        system: SystemArg,
        #[command(flatten)]
        bath: BathArg,
        /// Check whether ρ_ij may mix with ρ_kl, written `i,j:k,l`.
        #[arg(long)]
        mix: Option<String>,
    },
    Gibbs {
        #[command(flatten)]
        system: SystemArg,
        #[command(flatten)]
        temp: TempArg,
    },
    /// Common energy quantum of the spectrum.
    Rational {
        #[command(flatten)]
        system: SystemArg,
        /// Also test the spectrum against this spacing.
        #[arg(long)]
        gap: Option<f64>,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelCommand {
    /// CP/TP residuals; Gibbs and covariance residuals when a Hamiltonian is given.
    Validate {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[command(flatten)]
        system: SystemArg,
        #[command(flatten)]
        temp: TempArg,
    },
    Apply {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        /// Matrix JSON of the input operator.
        #[arg(long, value_name = "PATH")]
        state: PathBuf,
    },
    /// First `--in` after the second.
    Compose {
        #[arg(long = "in", value_name = "PATH", num_args = 1, required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Choi trace distance divided by the dimension.
    Distance {
        #[arg(long = "in", value_name = "PATH", num_args = 1, required = true)]
        inputs: Vec<PathBuf>,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThermalCommand {
    Realize {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
    },
    /// A spec realizing the first `--in` after the second.
    Compose {
        #[arg(long = "in", value_name = "PATH", num_args = 1, required = true)]
        inputs: Vec<PathBuf>,
    },
    /// A spec realizing (k/d)·first + (1-k/d)·second.
    Mix {
        #[arg(long = "in", value_name = "PATH", num_args = 1, required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
    },
    /// Split over resonant bath components.
    Decompose {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        /// Directory for one spec file per component.
        #[arg(long, value_name = "DIR")]
        parts_dir: Option<PathBuf>,
    },
    /// Fill the gaps of a grid bath, coupling with the generator.
    Embed {
        #[command(flatten)]
        system: SystemArg,
        #[command(flatten)]
        bath: BathArg,
        #[command(flatten)]
        temp: TempArg,
        /// Matrix JSON of the energy-conserving generator on system ⊗ bath.
        #[arg(long, value_name = "PATH")]
        generator: PathBuf,
        #[arg(long)]
        gap: f64,
        #[arg(long)]
        alpha: usize,
        /// Write the embedded spec here.
        #[arg(long, value_name = "PATH")]
        spec_out: Option<PathBuf>,
    },
    /// Qubit coordinates of a spin-block operation.
    Blocks {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[command(flatten)]
        temp: TempArg,
        #[arg(long, value_name = "PATH")]
        spec_out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Infinite temperature.
    Infinite,
    /// Coherence at the bound, λ fixed.
    Interior,
    /// Finite temperature, parameter μ.
    Finite,
}

#[derive(Args, Debug, Serialize, Clone, Copy)]
pub struct ParamsArg {
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub r: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi: f64,
    #[arg(long)]
    pub q: f64,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QubitCommand {
    /// Coordinates (λ, c) of a qubit channel.
    Psi {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        /// Classify against this Boltzmann ratio.
        #[arg(long)]
        q: Option<f64>,
    },
    PsiInv {
        #[command(flatten)]
        params: ParamsArg,
    },
    /// Composition of elements written `lambda,re,im`.
    Circ {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
        first: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
        second: Vec<f64>,
        #[arg(long)]
        q: f64,
    },
    Inverse {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
        element: Vec<f64>,
        #[arg(long)]
        q: f64,
    },
    Membership {
        #[command(flatten)]
        params: ParamsArg,
    },
    /// Unitary families approaching the boundary.
    Extreme {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        /// Finite family parameter, `p/s` or an integer, > 1.
        #[arg(long)]
        mu: Option<Rational>,
        /// Largest system ⊗ bath dimension.
        #[arg(long, default_value_t = 4096)]
        cap: u128,
        #[arg(long, value_name = "PATH")]
        spec_out: Option<PathBuf>,
    },
    /// Pure dephasing from phases on a ladder bath.
    Dephase {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
        phases: Vec<f64>,
        #[arg(long)]
        q: f64,
        #[arg(long, value_name = "PATH")]
        spec_out: Option<PathBuf>,
    },
    /// Images of a Bloch vector under all feasible channels.
    Cone {
        #[arg(long)]
        q: f64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
        bloch: Vec<f64>,
        /// λ, radius and phase grid sizes.
        #[arg(long, value_delimiter = ',', num_args = 1, default_value = "40,40,60")]
        grid: Vec<usize>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ConvergeKind {
    FiniteExtreme,
    InfiniteExtreme,
    SpinEmbed,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpCommand {
    DiscontinuityQubit {
        #[arg(long)]
        q: f64,
    },
    DiscontinuityQutrit {
        #[arg(long)]
        q: f64,
    },
    /// Gibbs-state separation on growing baths.
    Cmap {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        beta_prime: f64,
        #[arg(long, value_delimiter = ',', num_args = 1, default_value = "2,4,8,16,32")]
        energies: Vec<f64>,
        #[arg(long, default_value_t = crate::experiments::CMAP_DEFAULT_CAP)]
        cap: u64,
    },
    /// Choi-distance surrogate of the set distance.
    Hausdorff {
        #[arg(long = "a", value_name = "PATH", num_args = 1, required = true)]
        set_a: Vec<PathBuf>,
        #[arg(long = "b", value_name = "PATH", num_args = 1, required = true)]
        set_b: Vec<PathBuf>,
    },
    ThermoMaj {
        #[arg(long, value_delimiter = ',', num_args = 1)]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',', num_args = 1)]
        y: Vec<f64>,
        /// Positive Gibbs weights.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        d: Vec<f64>,
    },
    Converge {
        #[arg(long, value_enum)]
        kind: ConvergeKind,
        #[arg(long, value_delimiter = ',', num_args = 1)]
        schedule: Vec<usize>,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long)]
        mu: Option<Rational>,
        #[arg(long, default_value_t = 4096)]
        cap: u128,
        #[arg(long, default_value_t = 0.8)]
        coupling: f64,
        #[arg(long, default_value_t = 1.0)]
        gap: f64,
        #[command(flatten)]
        system: SystemArg,
        #[command(flatten)]
        bath: BathArg,
        #[command(flatten)]
        temp: TempArg,
    },
}
