use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use zrelay_core::RateRegion;

use crate::Failure;

/// Where a command's main output goes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Stdout,
    File(PathBuf),
}

impl Target {
    /// `-` means stdout; a missing path falls back to `default`.
    pub fn resolve(path: Option<&Path>, default: impl FnOnce() -> Option<PathBuf>) -> Target {
        match path {
            Some(p) if p.as_os_str() == "-" => Target::Stdout,
            Some(p) => Target::File(p.to_path_buf()),
            None => default().map_or(Target::Stdout, Target::File),
        }
    }

    pub fn write(&self, bytes: &[u8]) -> Result<(), Failure> {
        match self {
            Target::Stdout => std::io::stdout()
                .write_all(bytes)
                .context("writing to stdout")
                .map_err(Failure::Io),
            Target::File(p) => write_file(p, bytes),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Target::Stdout => "stdout".to_string(),
            Target::File(p) => p.display().to_string(),
        }
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Io(anyhow::Error::new(e).context(format!("writing {}", path.display())));
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    fs::write(path, bytes).map_err(io)
}

pub fn region_json(region: &RateRegion) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(region).expect("regions serialize");
    s.push('\n');
    s.into_bytes()
}

/// CSV with a header row; each row is written with shortest round-trip
/// formatting.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row.iter().map(|v| v.to_string())).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn region_csv(region: &RateRegion) -> Vec<u8> {
    csv_table(
        &["r1_bits", "r2_bits"],
        region.vertices().iter().map(|v| v.to_vec()),
    )
}

pub fn curve_csv(points: &[(f64, f64, f64)]) -> Vec<u8> {
    csv_table(
        &["r1_bits", "r2_bits", "beta"],
        points.iter().map(|&(r1, r2, b)| vec![r1, r2, b]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use zrelay_core::Pentagon;

    #[test]
    fn csv_and_json_share_vertices() {
        let r = Pentagon::new(1.0, 2.0, 2.5).unwrap().to_region();
        let json: serde_json::Value = serde_json::from_slice(&region_json(&r)).unwrap();
        let from_json: Vec<[f64; 2]> = serde_json::from_value(json["vertices"].clone()).unwrap();
        let text = String::from_utf8(region_csv(&r)).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("r1_bits,r2_bits"));
        let from_csv: Vec<[f64; 2]> = lines
            .map(|l| {
                let mut it = l.split(',').map(|x| x.parse::<f64>().unwrap());
                [it.next().unwrap(), it.next().unwrap()]
            })
            .collect();
        assert_eq!(from_json, from_csv);
        assert_eq!(json["halfplanes"].as_array().unwrap().len(), r.halfplanes().len());
    }

    #[test]
    fn dash_means_stdout() {
        assert_eq!(Target::resolve(Some(Path::new("-")), || None), Target::Stdout);
        let t = Target::resolve(None, || Some(PathBuf::from("a.json")));
        assert_eq!(t, Target::File(PathBuf::from("a.json")));
    }
}
