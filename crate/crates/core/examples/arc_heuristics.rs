//! Runs arc-S1 with each expansion rule and arc-S2 with rules (d, a) on a
//! synthetic instance.
//!
//! ```text
//! cargo run --release --example arc_heuristics -- [seed]
//! ```

use std::time::Instant;

use odmts::{arc_s1, arc_s2, generate_synthetic, ArcOptions, ArcOutcome, Design, ExpansionRule, GeneratorConfig};

fn show(name: &str, out: &ArcOutcome, secs: f64) {
    let e = &out.outcome.evaluation;
    println!(
        "{name:<10} objective {:>10.4}  arcs {:>2}  cycles fixed {:>2}  |T^| {:>3}  r_false {:>5.1}%  a_false {:>5.1}%  {secs:.2}s",
        e.objective,
        out.outcome.design.len(),
        out.steps.len(),
        out.outcome.t_hat.len(),
        e.r_false,
        e.a_false,
    );
}

fn main() -> anyhow::Result<()> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1);
    let inst = generate_synthetic(&GeneratorConfig::default(), seed)?;
    let opts = ArcOptions::default();
    let empty = Design::empty();

    for rule in [ExpansionRule::A, ExpansionRule::B, ExpansionRule::C, ExpansionRule::D] {
        let start = Instant::now();
        let out = arc_s1(&inst, rule, &empty, &opts)?;
        show(&format!("s1 ({rule})"), &out, start.elapsed().as_secs_f64());
    }
    let start = Instant::now();
    let out = arc_s2(&inst, ExpansionRule::D, ExpansionRule::A, &empty, &opts)?;
    show("s2 (d,a)", &out, start.elapsed().as_secs_f64());
    println!();
    for s in &out.steps {
        println!("stage {} cycle {:?} objective {:.4} expanded {}", s.stage, s.cycle, s.objective, s.expanded.len());
    }
    Ok(())
}
