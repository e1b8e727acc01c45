use std::fs::File;
use std::io::{self, Write};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use crate::Cli;

pub fn provenance(cli: &Cli) -> Value {
    let mut p = json!({
        "tool": "mirp-cli",
        "version": env!("CARGO_PKG_VERSION"),
        "library": format!("mirp {}", mirp::VERSION),
        "rng": mirp::rough_path::RNG_NAME,
        "seed": cli.common.seed,
        "command": cli.command,
        "config": cli.common,
    });
    if !cli.common.no_timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        p["unix_time"] = json!(secs);
    }
    p
}

fn sink(cli: &Cli) -> mirp::Result<Box<dyn Write>> {
    Ok(match &cli.common.out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

/// JSON document with the provenance under `"provenance"`.
pub fn write_json(cli: &Cli, mut body: Value) -> mirp::Result<()> {
    if let Value::Object(m) = &mut body {
        m.insert("provenance".into(), provenance(cli));
    } else {
        body = json!({"provenance": provenance(cli), "data": body});
    }
    let mut w = sink(cli)?;
    serde_json::to_writer_pretty(&mut w, &body)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Plain text with the provenance as one leading `#` line.
pub fn write_text(cli: &Cli, body: &str) -> mirp::Result<()> {
    let mut w = sink(cli)?;
    writeln!(w, "# {}", provenance(cli))?;
    w.write_all(body.as_bytes())?;
    w.flush()?;
    Ok(())
}
