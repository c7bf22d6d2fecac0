//! Small parameter sweep: mean set size and moves as α varies, written as CSV
//! plus an SVG chart next to the system temp dir.

use alphadom::cli::experiment::{sweep, ExperimentSpec, GraphSource};
use alphadom::cli::svg;
use alphadom::engine::Alpha;

pub fn run() {
    let mut spec = ExperimentSpec::new(
        GraphSource::Generated {
            n: 60,
            densities: vec![0.1, 0.5],
        },
        Alpha::grid(5),
    );
    spec.reps = 3;
    spec.seed = 2;
    let result = sweep(&spec).unwrap();

    for group in &result.groups {
        println!(
            "density {:.1} alpha {:>3}: mean |S|/n = {:.3}, mean moves = {:.1}",
            group.density, group.alpha, group.mean.set_ratio, group.mean.moves
        );
    }

    let mut csv = Vec::new();
    result.write_csv(&mut csv).unwrap();
    let path = std::env::temp_dir().join("alphadom_sweep.svg");
    std::fs::write(&path, svg::render(&result)).unwrap();
    println!("{} CSV bytes; chart at {}", csv.len(), path.display());
}

#[allow(dead_code)]
fn main() {
    run();
}
