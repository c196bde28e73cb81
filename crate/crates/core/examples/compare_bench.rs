//! Runs every heuristic on a few mid-size instances and prints the
//! comparison CSV.
//!
//! ```text
//! cargo run --release --example compare_bench -- [instances]
//! ```

use odmts::harness::{compare, compare_csv, Algorithm, RunParams};
use odmts::{generate_synthetic, GeneratorConfig, LatentClass};

fn main() -> anyhow::Result<()> {
    let count: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(3);
    let cfg = GeneratorConfig {
        stops: 40,
        hubs: 5,
        core_trips: 20,
        latent_classes: vec![LatentClass { trips: 30, alpha: 2.0 }, LatentClass { trips: 10, alpha: 1.5 }],
        buses_per_leg: 1.0,
        ..GeneratorConfig::default()
    };
    let instances = (0..count)
        .map(|s| Ok((format!("mid-{s}"), generate_synthetic(&cfg, s)?)))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let rows = compare(&instances, &Algorithm::HEURISTICS, &RunParams::default())?;
    print!("{}", compare_csv(&rows));
    Ok(())
}
