//! Writes a synthetic BRFSS-shaped CSV for trying the CLI without the real
//! survey extract.
//!
//!     cargo run --example synthetic_brfss -- diabetes.csv [rows] [seed]

use std::fs::File;

use minibqml::storage::write_csv;
use minibqml::synth::{brfss_like, BRFSS_ROWS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "diabetes.csv".into());
    let rows = args.next().map(|s| s.parse()).transpose()?.unwrap_or(BRFSS_ROWS);
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2015);
    let table = brfss_like(rows, seed);
    write_csv(&table, File::create(&path)?)?;
    println!("wrote {rows} rows to {path}");
    Ok(())
}
