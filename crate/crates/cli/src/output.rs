use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use lsys_complexity::WindowSeries64;

pub const CSV_HEADER: [&str; 6] = ["window_index", "start_bit", "k0", "te", "lc", "anomaly"];

/// Standard output, or a file when a path is given.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

pub fn write_csv(series: &WindowSeries64, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &series.records {
        w.write_record([
            r.index.to_string(),
            r.start_bit.to_string(),
            cell(r.k0),
            cell(r.te),
            cell(r.lc),
            r.anomaly.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json(series: &WindowSeries64, mut out: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, series)?;
    writeln!(out)?;
    Ok(())
}
