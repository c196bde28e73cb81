//! Evaluates the empty, core-optimal and full designs and prints the
//! adoption figures and KPIs of each.
//!
//! ```text
//! cargo run --release --example adoption_metrics -- [seed]
//! ```

use odmts::{eval_design, generate_synthetic, solve_dfd, Design, GeneratorConfig};

fn main() -> anyhow::Result<()> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1);
    let inst = generate_synthetic(&GeneratorConfig::default(), seed)?;
    let core = inst.core_trips();
    let designs = [
        ("empty", Design::empty()),
        ("core optimum", solve_dfd(&inst, &core, &Design::empty())?.design),
        ("full", Design::full(&inst)),
    ];
    for (name, z) in &designs {
        let e = eval_design(&inst, z, &core)?;
        let k = &e.kpis;
        println!("{name} ({} arcs)", z.len());
        println!("  objective {:.4}  adopters {}  r_false {:.1}%", e.objective, e.adopters.len(), e.r_false);
        println!("  shuttle km {:.1}  bus investment ${:.0}  net cost ${:.0}", k.shuttle_km, k.bus_investment_dollars, k.agency_net_cost);
        println!("  served riders {}  rider minutes {:.0}", k.served_riders, k.total_convenience_minutes);
    }
    Ok(())
}
