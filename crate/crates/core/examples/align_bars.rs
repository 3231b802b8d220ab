//! Per-instrument bar files with gaps, aligned by intersection and by
//! bounded forward fill.
//!
//!     cargo run --example align_bars

use std::io::Write;

use tdascan::io::{align, read_bars, AlignPolicy, FormatSpec, InstrumentBars, TimeStyle};

fn main() -> tdascan::Result<()> {
    let dir = std::env::temp_dir();
    let files = [
        ("es", "timestamp,close\n2010-05-06T14:00,1160.0\n2010-05-06T14:01,1161.5\n2010-05-06T14:02,1159.0\n2010-05-06T14:04,1150.25\n"),
        ("nq", "timestamp,close\n2010-05-06T14:00,1950.0\n2010-05-06T14:01,1952.0\n2010-05-06T14:03,1940.5\n2010-05-06T14:04,1931.0\n"),
    ];
    let spec = FormatSpec::default();
    let mut instruments = Vec::new();
    for (name, body) in files {
        let path = dir.join(format!("tdascan_{name}.csv"));
        std::fs::File::create(&path)
            .and_then(|mut f| f.write_all(body.as_bytes()))
            .map_err(|source| tdascan::Error::Io { path: path.clone(), source })?;
        instruments.push(InstrumentBars { name: name.into(), bars: read_bars(&path, &spec)? });
    }

    for (label, policy) in [
        ("intersection", AlignPolicy::Intersection),
        ("forward fill, max gap 5", AlignPolicy::ForwardFill { max_gap: 5 }),
    ] {
        let s = align(&instruments, policy, TimeStyle::Iso)?;
        println!("{label}:");
        for (row, t) in s.timestamps().iter().enumerate() {
            let closes: Vec<String> = s.closes().iter().map(|c| c[row].to_string()).collect();
            println!("  {}  {}", TimeStyle::Iso.format(*t), closes.join("  "));
        }
    }
    Ok(())
}
