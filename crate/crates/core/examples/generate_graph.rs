//! Generates a random connected graph at a target density and prints it in
//! edge-list form along with a few statistics.
//!
//! ```text
//! cargo run --example generate_graph
//! ```

use alphadom::graph::{gen_random_connected, target_edge_count, Graph};

pub fn run() {
    let (n, density, seed) = (12, 0.3, 42);
    let g = gen_random_connected(n, density, seed).expect("feasible density");
    assert_eq!(g.edge_count(), target_edge_count(n, density).unwrap());

    println!(
        "n={} m={} density={:.3} max_degree={}",
        g.node_count(),
        g.edge_count(),
        g.density(),
        g.max_degree()
    );
    let text = g.to_edge_list();
    print!("{text}");

    let back: Graph = text.parse().expect("own output parses");
    assert_eq!(back, g);
}

#[allow(dead_code)]
fn main() {
    run();
}
