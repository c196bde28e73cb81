//! Runs the three trip-based heuristics on a synthetic instance and prints
//! each trace.
//!
//! ```text
//! cargo run --release --example trip_heuristics -- [seed]
//! ```

use std::time::Instant;

use odmts::{eta_grre, generate_synthetic, rho_gagr, rho_grad, Design, GeneratorConfig, TripOptions};

fn main() -> anyhow::Result<()> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1);
    let inst = generate_synthetic(&GeneratorConfig::default(), seed)?;
    let opts = TripOptions::for_instance(&inst);
    println!("step sizes rho = eta = {}", opts.rho);

    type Run = fn(&odmts::Instance, &TripOptions, &Design) -> odmts::Result<odmts::HeuristicOutcome>;
    let runs: [(&str, Run); 3] = [("grad", rho_grad), ("grre", eta_grre), ("gagr", rho_gagr)];
    for (name, run) in runs {
        let start = Instant::now();
        let out = run(&inst, &opts, &Design::empty())?;
        let e = &out.evaluation;
        println!(
            "\n{name}: objective {:.4}, {} arcs, |T^| {}, adopters {}, r_false {:.1}%, a_false {:.1}%, {:.2?}",
            e.objective,
            out.design.len(),
            out.t_hat.len(),
            e.adopters.len(),
            e.r_false,
            e.a_false,
            start.elapsed()
        );
        print!("{}", out.trace.csv_body());
    }
    Ok(())
}
