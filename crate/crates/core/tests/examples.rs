//! Every shipped example runs to completion.

macro_rules! example {
    ($name:ident, $file:literal) => {
        #[path = $file]
        mod $name;

        #[test]
        fn $name() {
            $name::run();
        }
    };
}

example!(generate_graph, "../examples/generate_graph.rs");
example!(single_run, "../examples/single_run.rs");
example!(transformed_run, "../examples/transformed_run.rs");
example!(oracle_check, "../examples/oracle_check.rs");
example!(alpha_sweep, "../examples/alpha_sweep.rs");
example!(adversarial_daemon, "../examples/adversarial_daemon.rs");
