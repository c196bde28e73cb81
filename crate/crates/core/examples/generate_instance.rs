//! Writes a synthetic instance to disk and reads it back.
//!
//! ```text
//! cargo run --release --example generate_instance -- [path] [seed]
//! ```

use std::path::PathBuf;

use odmts::harness::content_hash;
use odmts::{generate_synthetic, load_instance, GeneratorConfig};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = PathBuf::from(args.next().unwrap_or_else(|| "instance.json".into()));
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);

    let inst = generate_synthetic(&GeneratorConfig::default(), seed)?;
    inst.save(&path)?;
    let back = load_instance(&path)?;
    assert_eq!(back.to_json_string(), inst.to_json_string());

    let p = inst.params();
    println!("{}", path.display());
    println!("  stops {}  hubs {}  candidate arcs {}", inst.stop_count(), inst.hubs().len(), inst.arcs().len());
    println!("  core trips {}  latent trips {}", inst.core_trips().len(), inst.latent_trips().len());
    println!("  theta {}  omega {}  ticket {}", p.theta, p.omega, p.ticket);
    println!("  sha256 {}", content_hash(inst.to_json_string().as_bytes()));
    Ok(())
}
