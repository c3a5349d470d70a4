//! Parse a flat config and run it as the `hybridyn` binary would.

use hybridyn::cli::{parse_config, run};

fn main() -> hybridyn::Result<()> {
    let text = "scenario = stern-gerlach\nsg.g = 4\nsg.c_plus = 0.6\nsg.c_minus = 0.8i\n";
    let out = std::env::temp_dir().join("hybridyn-cli-example");
    let cfg = parse_config(text)?.with_overrides(Some(7), Some(out.clone()), false);
    println!("defaults filled: {}", cfg.defaulted.join(", "));
    let report = run(&cfg)?;
    println!("wrote {:?} to {}", report.files, out.display());
    print!("{}", std::fs::read_to_string(out.join("summary.json"))?);
    Ok(())
}
