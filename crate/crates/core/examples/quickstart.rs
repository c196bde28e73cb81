//! Generates a small instance, designs it with arc-S2 and prints the
//! resulting network and adoption figures.
//!
//! ```text
//! cargo run --release --example quickstart
//! ```

use odmts::harness::{run_algorithm, Algorithm, RunParams};
use odmts::{generate_synthetic, GeneratorConfig, LatentClass};

fn main() -> anyhow::Result<()> {
    let cfg = GeneratorConfig {
        stops: 30,
        hubs: 4,
        core_trips: 15,
        latent_classes: vec![LatentClass { trips: 25, alpha: 2.0 }, LatentClass { trips: 10, alpha: 1.5 }],
        buses_per_leg: 1.0,
        ..GeneratorConfig::default()
    };
    let inst = generate_synthetic(&cfg, 7)?;
    let out = run_algorithm(&inst, Algorithm::ArcS2, &RunParams::default())?;

    println!("open bus arcs:");
    for [from, to] in out.design.to_stop_pairs(&inst) {
        println!("  {from} -> {to}");
    }
    let e = &out.evaluation;
    println!("objective {:.4}", e.objective);
    println!("adopters  {} of {}", e.adopters.len(), inst.latent_trips().len());
    println!("r_false {:.1}%  a_false {:.1}%", e.r_false, e.a_false);
    Ok(())
}
