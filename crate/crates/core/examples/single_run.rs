//! Runs the protocol once under a central daemon and inspects the trace.

use alphadom::alpha_mds;
use alphadom::engine::{Alpha, Configuration, DaemonPolicy, Selection};
use alphadom::graph::gen_random_connected;
use alphadom::oracle::{self, NodeSet};

pub fn run() {
    let g = gen_random_connected(20, 0.25, 7).unwrap();
    let alpha: Alpha = "1/2".parse().unwrap();
    let c0 = Configuration::all_out(g.node_count());

    let trace = alpha_mds::run(
        &g,
        &c0,
        alpha,
        DaemonPolicy::central(Selection::Random { seed: 3 }),
    );
    assert!(trace.stabilized);
    assert!(alpha_mds::legitimate(&g, &trace.final_config, alpha));

    for m in trace.moves.iter().take(5) {
        println!(
            "step {:>3}: node {:>2} fires {} ({} -> {})",
            m.step, m.node, m.rule, m.pre, m.post
        );
    }
    println!(
        "stabilized after {} moves with |S| = {} of {}: {:?}",
        trace.total_moves(),
        trace.final_config.set_size(),
        g.node_count(),
        trace.final_config.members()
    );

    let s = NodeSet::of_configuration(&trace.final_config);
    assert_eq!(oracle::is_minimal_alpha_dominating(&g, &s, alpha), Ok(true));
    assert!(alpha_mds::check_move_bound(&trace).is_empty());
}

#[allow(dead_code)]
fn main() {
    run();
}
