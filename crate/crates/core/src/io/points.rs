use std::fs::File;
use std::path::Path;

use csv::ReaderBuilder;

use crate::error::{Error, Result};
use crate::geometry::PointCloud;

/// Reads a point cloud: one point per row, one coordinate per column.
/// A first row that does not parse as numbers is treated as a header.
pub fn read_points(path: impl AsRef<Path>) -> Result<PointCloud> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut rdr = ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(file);
    let display = path.display().to_string();
    let mut points = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line()).unwrap_or(i as u64 + 1);
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(p) if p.iter().all(|x| x.is_finite()) => points.push(p),
            _ if i == 0 => continue,
            _ => {
                return Err(Error::Input {
                    path: display,
                    line,
                    message: "expected finite numeric coordinates".into(),
                })
            }
        }
    }
    PointCloud::new(points).map_err(|e| Error::Input {
        path: display,
        line: 0,
        message: e.to_string(),
    })
}
