//! Writes a seeded mean-reverting weekly price series as `date,close` CSV.
//!
//! ```text
//! cargo run -p nnforecast --example synth_prices -- prices.csv [seed] [points]
//! ```

use std::fs::File;

use nnforecast::timeseries::{synthetic_ar_series, write_csv};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().ok_or("usage: synth_prices <out.csv> [seed] [points]")?;
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(42);
    let points: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(427);
    let series = synthetic_ar_series::<f64>(points, 50.0, 0.95, 0.5, seed)?;
    write_csv(&series, File::create(&path)?)?;
    eprintln!("wrote {points} weekly prices to {path}");
    Ok(())
}
