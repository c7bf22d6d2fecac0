//! Compares scheduling policies on one graph. The stale-first policy keeps
//! moving recently active nodes and starves the rest as long as it can.

use alphadom::alpha_mds;
use alphadom::engine::{Alpha, Configuration, DaemonPolicy, Selection};
use alphadom::graph::gen_random_connected;

pub fn run() {
    let g = gen_random_connected(40, 0.15, 9).unwrap();
    let n = g.node_count();
    let alpha = Alpha::new(3, 4).unwrap();
    let policies = [
        DaemonPolicy::central(Selection::Random { seed: 1 }),
        DaemonPolicy::central(Selection::MinId),
        DaemonPolicy::central(Selection::MaxId),
        DaemonPolicy::central(Selection::AdversarialStale),
    ];
    for c0 in [Configuration::all_out(n), Configuration::all_in(n)] {
        for policy in policies {
            let trace = alpha_mds::run(&g, &c0, alpha, policy);
            assert!(trace.total_moves() <= 2 * n);
            println!(
                "start |S|={:>2} {:<16} moves={:>3} |S|={}",
                c0.set_size(),
                policy.to_string(),
                trace.total_moves(),
                trace.final_config.set_size()
            );
        }
    }
}

#[allow(dead_code)]
fn main() {
    run();
}
