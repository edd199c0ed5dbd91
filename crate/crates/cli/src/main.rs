use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

#[derive(Debug, Parser)]
#[command(name = "chromap", version, about = "Exact checks and constructions for map-type plane colourings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a map and report the structural conditions.
    Validate { map: PathBuf },
    /// Exact properness check, optionally against a sampling oracle.
    Properness {
        map: PathBuf,
        /// Half-width of the forbidden distance band, as p/q.
        #[arg(long, default_value = "0")]
        eps: String,
        /// Number of oracle samples.
        #[arg(long)]
        oracle: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Operations on colourings of the unit circle.
    Circle {
        #[command(subcommand)]
        op: CircleOp,
    },
    /// Operations on tri-coloured curves.
    Curve {
        #[command(subcommand)]
        op: CurveOp,
    },
    /// Scan a map for forbidden configurations.
    Scan {
        map: PathBuf,
        /// Run the disk pipeline around (cx, cy), given as p/q.
        #[arg(long, num_args = 2, value_names = ["CX", "CY"], allow_hyphen_values = true)]
        disk: Option<Vec<String>>,
        /// Comma-separated violation kinds (names or tags such as t7,f32,t3,l15).
        #[arg(long, value_delimiter = ',')]
        kinds: Option<Vec<String>>,
    },
    /// Generate a corpus map.
    Generate(GenerateArgs),
    /// Render a map as SVG.
    Render {
        map: PathBuf,
        /// Comma-separated layers: regions, vertices, unit-circles, annulus-curves, violations.
        #[arg(long, value_delimiter = ',', default_value = "regions,vertices")]
        layers: Vec<String>,
        /// Pixels per unit.
        #[arg(long, default_value_t = 50.0)]
        scale: f64,
        /// Centre of a unit circle, as x,y with p/q coordinates; repeatable.
        #[arg(long = "circle")]
        circles: Vec<String>,
        /// Curve file to overlay; repeatable.
        #[arg(long = "curve")]
        curves: Vec<PathBuf>,
        /// Overlay violations found by a full scan.
        #[arg(long)]
        scan: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CircleOp {
    /// Check properness of an arc colouring.
    Proper { file: PathBuf },
    /// Check whether the colouring is cyclic.
    Cyclic { file: PathBuf },
    /// Recolour into a cyclic colouring.
    Recolor {
        file: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Find three far-apart bichromatic points of a colour pair.
    Triple {
        file: PathBuf,
        /// Colour pair as a,b; all three pairs of {1,2,3} when omitted.
        #[arg(long)]
        pair: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CurveOp {
    /// Index of a tri-coloured curve.
    Index {
        file: PathBuf,
        /// Leave out the final transition.
        #[arg(long)]
        exclude_final: bool,
    },
    /// Index difference of two complementary curves.
    CheckPair { gamma1: PathBuf, gamma2: PathBuf },
    /// Build a closed curve in the annulus from boundary samples.
    BuildAnnulus {
        file: PathBuf,
        /// Tangent bound in radians; defaults to eta/10.
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub kind: GenerateKind,
    /// Window width, as p/q.
    #[arg(long, global = true, default_value = "10")]
    pub width: String,
    /// Window height, as p/q.
    #[arg(long, global = true, default_value = "10")]
    pub height: String,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GenerateKind {
    /// Hexagonal tiling with 7 colours.
    Hex7 {
        #[arg(long, default_value = "9/10")]
        d: String,
    },
    /// Hexagonal tiling with colour 7 merged away.
    Hex6 {
        #[arg(long, default_value = "9/10")]
        d: String,
    },
    /// Vertical stripes cycling through k colours.
    Stripes {
        #[arg(long)]
        k: u32,
        #[arg(long = "stripe", default_value = "1/2")]
        stripe: String,
    },
    /// Square grid cycling through k colours.
    Grid {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value = "1")]
        cell: String,
    },
    /// Named fixture.
    Crafted { name: String },
    /// Seeded random map of jittered quadrilaterals.
    Random {
        #[arg(long, default_value_t = 100)]
        regions: usize,
        #[arg(long, default_value_t = 6)]
        k: u32,
    },
}

pub fn read(path: &Path) -> Result<String, commands::Failure> {
    std::fs::read_to_string(path).map_err(|e| commands::Failure::input(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
