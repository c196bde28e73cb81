//! Solves the fixed-demand design problem on a synthetic instance and prints
//! the Benders bound log.
//!
//! ```text
//! cargo run --release --example benders_dfd -- [seed]
//! ```

use std::time::Instant;

use odmts::{generate_synthetic, solve_dfd, Design, GeneratorConfig};

fn main() -> anyhow::Result<()> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1);
    let inst = generate_synthetic(&GeneratorConfig::default(), seed)?;

    let start = Instant::now();
    let core = solve_dfd(&inst, &inst.core_trips(), &Design::empty())?;
    println!("core only:   {} arcs, objective {:.4}, {} rounds", core.design.len(), core.objective, core.iterations);
    let all = solve_dfd(&inst, &inst.all_trips(), &Design::empty())?;
    println!("all trips:   {} arcs, objective {:.4}, {} rounds", all.design.len(), all.objective, all.iterations);
    println!("elapsed {:.2?}", start.elapsed());

    println!();
    print!("{}", all.bound_log_csv());
    Ok(())
}
