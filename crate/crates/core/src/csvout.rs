//! Deterministic CSV emission.
//!
//! Every numeric cell is printed in lowercase scientific notation with 17
//! significant digits, rows end with LF, and files are replaced atomically
//! (write to a sibling temporary file, then rename), so identical inputs
//! produce bit-identical artifacts.

use crate::error::Result;
use std::fs;
use std::path::Path;

/// Canonical cell rendering: lowercase scientific, 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A rectangular table of float cells under a fixed header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(headers: &[S]) -> Self {
        assert!(!headers.is_empty(), "a table needs at least one column");
        Table {
            headers: headers.iter().map(|h| h.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: &[f64]) {
        assert_eq!(
            row.len(),
            self.headers.len(),
            "row width must match the header"
        );
        self.rows.push(row.to_vec());
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Full CSV text: header line plus one line per row, LF endings.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.headers.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_float(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Write `content` to `path` atomically: the data lands in a temporary
/// file in the same directory and is renamed over the target, so readers
/// never observe a half-written artifact.
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let file_name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    let tmp_name = format!(".{file_name}.tmp{}", std::process::id());
    let tmp_path = match dir {
        Some(d) => d.join(&tmp_name),
        None => Path::new(&tmp_name).to_path_buf(),
    };
    fs::write(&tmp_path, content)?;
    match fs::rename(&tmp_path, path) {
        Ok(()) => Ok(()),
        Err(e) => {
            let _ = fs::remove_file(&tmp_path);
            Err(e.into())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_are_lowercase_scientific_17_digits() {
        assert_eq!(format_float(1.5), "1.5000000000000000e0");
        assert_eq!(format_float(0.0), "0.0000000000000000e0");
        assert_eq!(format_float(-0.140625), "-1.4062500000000000e-1");
        assert_eq!(format_float(4.996828e9), "4.9968280000000000e9");
        // Round-trip: 17 significant digits reproduce the f64 exactly.
        let x = std::f64::consts::PI * 1e9;
        assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn render_is_exact_and_stable() {
        let mut t = Table::new(&["freq_hz", "re_S11", "im_S11"]);
        t.push_row(&[5e9, -1.0, 0.5]);
        t.push_row(&[5.1e9, 0.25, -0.125]);
        let expect = "freq_hz,re_S11,im_S11\n\
                      5.0000000000000000e9,-1.0000000000000000e0,5.0000000000000000e-1\n\
                      5.1000000000000000e9,2.5000000000000000e-1,-1.2500000000000000e-1\n";
        assert_eq!(t.render(), expect);
        assert_eq!(t.render(), t.render().clone());
        assert_eq!(t.row_count(), 2);
    }

    #[test]
    fn atomic_write_replaces_and_cleans_up() {
        let dir = std::env::temp_dir().join(format!("csvout_test_{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let target = dir.join("table.csv");
        write_atomic(&target, "a,b\n1.0,2.0\n").unwrap();
        assert_eq!(fs::read_to_string(&target).unwrap(), "a,b\n1.0,2.0\n");
        write_atomic(&target, "a,b\n3.0,4.0\n").unwrap();
        assert_eq!(fs::read_to_string(&target).unwrap(), "a,b\n3.0,4.0\n");
        let leftovers: Vec<_> = fs::read_dir(&dir)
            .unwrap()
            .filter_map(|e| e.ok())
            .filter(|e| e.file_name().to_string_lossy().contains(".tmp"))
            .collect();
        assert!(leftovers.is_empty(), "temporary files must not linger");
        fs::remove_dir_all(&dir).unwrap();
    }
}
