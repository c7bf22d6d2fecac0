//! Brute-force certificate checks on a small graph.

use alphadom::engine::Alpha;
use alphadom::graph::named;
use alphadom::oracle::{self, NodeSet};

pub fn run() {
    let g = named::cycle(6);
    let alpha = Alpha::HALF;

    let minimum = oracle::minimum_alpha_dominating_set(&g, alpha).unwrap();
    println!("minimum 1/2-dominating set of C6: {:?}", minimum.members());

    let all = oracle::all_minimal_alpha_dominating_sets(&g, alpha).unwrap();
    println!("{} minimal 1/2-dominating sets:", all.len());
    for s in &all {
        println!("  {:?}", s.members());
    }

    let candidate = NodeSet::from_members(6, &[0, 1, 3, 4]);
    println!(
        "{:?}: dominating={} minimal={:?}",
        candidate.members(),
        oracle::is_alpha_dominating(&g, &candidate, alpha),
        oracle::is_minimal_alpha_dominating(&g, &candidate, alpha)
    );
    assert!(all.iter().all(|s| s.len() >= minimum.len()));
}

#[allow(dead_code)]
fn main() {
    run();
}
