//! The distance-one variant under a distributed daemon, started from
//! arbitrary register contents.

use alphadom::engine::{
    default_max_steps, initial_configuration, Alpha, DaemonPolicy, InitialKind, Selection,
};
use alphadom::graph::gen_random_connected;
use alphadom::oracle::{self, NodeSet};
use alphadom::transformer;

pub fn run() {
    let g = gen_random_connected(30, 0.2, 11).unwrap();
    let alpha = Alpha::new(2, 3).unwrap();
    let c0 = initial_configuration(InitialKind::Bernoulli { p: 0.5, seed: 1 }, g.node_count());
    let tc0 = transformer::with_random_registers(&g, &c0, 1);

    for policy in [
        DaemonPolicy::distributed(Selection::Random { seed: 5 }),
        DaemonPolicy::synchronous(),
    ] {
        let trace =
            transformer::run_transformed(&g, &tc0, alpha, policy, default_max_steps(&g)).unwrap();
        assert!(trace.stabilized);
        assert!(transformer::movers_independent(&g, &trace));
        assert!(transformer::registers_fresh(&g, &trace.final_config));

        let s = NodeSet::of_configuration(&trace.final_config);
        assert!(oracle::is_alpha_dominating(&g, &s, alpha));
        assert!(oracle::is_minimal_by_single_removal(&g, &s, alpha));
        println!(
            "{policy}: {} moves in {} steps, |S| = {}",
            trace.total_moves(),
            trace.steps,
            s.len()
        );
    }
}

#[allow(dead_code)]
fn main() {
    run();
}
