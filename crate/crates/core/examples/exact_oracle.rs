//! Solves tiny instances exactly by enumeration and compares the optimum
//! with every heuristic.
//!
//! ```text
//! cargo run --release --example exact_oracle -- [instances]
//! ```

use odmts::harness::{run_algorithm, Algorithm, RunParams};
use odmts::{exact_tiny, generate_synthetic, Design, GeneratorConfig};

fn main() -> anyhow::Result<()> {
    let count: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(5);
    let params = RunParams::default();
    for seed in 0..count {
        let mut cfg = GeneratorConfig::tiny(8, 3, 4, 8);
        cfg.buses_per_leg = 0.25;
        let inst = generate_synthetic(&cfg, seed)?;
        let exact = exact_tiny(&inst, &Design::empty())?;
        println!(
            "seed {seed}: optimum {:.4} over {} designs, {} adopters, re-solve {}",
            exact.evaluation.objective,
            exact.designs_checked,
            exact.evaluation.adopters.len(),
            if exact.reproduces { "reproduces it" } else { "differs" }
        );
        for alg in Algorithm::HEURISTICS {
            let obj = run_algorithm(&inst, alg, &params)?.evaluation.objective;
            let gap = (obj - exact.evaluation.objective) / exact.evaluation.objective.abs() * 100.0;
            println!("  {:<8} {obj:>10.4}  gap {gap:>7.3}%", alg.name());
        }
    }
    Ok(())
}
