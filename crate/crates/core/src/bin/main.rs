use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use endcircle::completion_circle::universal_circle_finite;
use endcircle::scenario_io::{build_scenario, parse_file, render_svg, run_op, Overlays};
use endcircle::triad_order::ends_order;

#[derive(Parser)]
#[command(name = "endcircle", version, about = "Exact end-order and circle-dynamics queries on grid scenarios")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Scenario file (JSON).
    file: PathBuf,
    /// Refinement depth for completion-based queries.
    #[arg(long, default_value_t = 8)]
    depth: u32,
    /// Seed for randomized helpers; fixed queries ignore it.
    #[arg(long)]
    seed: Option<u64>,
    /// Reject unknown fields in the scenario file.
    #[arg(long)]
    strict: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the ends of each continuum.
    Ends(Common),
    /// The circular order of all ends.
    Order(Common),
    /// Separation reports for continuum triples.
    Separates(Common),
    /// Marked angles on the boundary circle.
    Circle(Common),
    /// Boundary traces of the compactification.
    Compactify(Common),
    /// Induced circle maps and closed-orbit verdicts.
    Dynamics(Common),
    /// Emit an SVG figure of the scenario.
    Render(Common),
}

fn run(op: &str, common: &Common) -> Result<String, String> {
    let text = std::fs::read_to_string(&common.file)
        .map_err(|e| format!("cannot read {}: {e}", common.file.display()))?;
    let file = parse_file(&text, common.strict).map_err(|e| e.to_string())?;
    let scenario = build_scenario(&file).map_err(|e| e.to_string())?;
    let _ = (common.depth, common.seed);
    if op == "render" {
        let overlays = match ends_order(&scenario)
            .and_then(|sys| universal_circle_finite(&sys.order))
        {
            Ok(uc) => Overlays {
                circle_marks: uc
                    .marked
                    .iter()
                    .map(|(e, p)| (e.to_string(), p.clone()))
                    .collect(),
                ..Overlays::default()
            },
            Err(_) => Overlays::default(),
        };
        return Ok(render_svg(&scenario, &overlays));
    }
    let results = run_op(op, &file, &scenario);
    let mut out = serde_json::to_string_pretty(&results).map_err(|e| e.to_string())?;
    out.push('\n');
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (op, common) = match &cli.cmd {
        Cmd::Ends(c) => ("ends", c),
        Cmd::Order(c) => ("order", c),
        Cmd::Separates(c) => ("separates", c),
        Cmd::Circle(c) => ("circle", c),
        Cmd::Compactify(c) => ("compactify", c),
        Cmd::Dynamics(c) => ("dynamics", c),
        Cmd::Render(c) => ("render", c),
    };
    match run(op, common) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(msg) => {
            eprintln!("endcircle: {msg}");
            ExitCode::FAILURE
        }
    }
}
