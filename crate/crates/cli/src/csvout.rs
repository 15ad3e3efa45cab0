//! CSV emission: constant column count, LF line endings, 12-significant-digit
//! numeric fields, and tmp+rename writes so a failed run leaves no partial
//! file behind.

use anyhow::{bail, Context, Result};
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

/// Formats one value with 12 significant digits. Scientific notation keeps
/// the digit count independent of magnitude, so files are byte-reproducible.
pub fn sig12(v: f64) -> String {
    format!("{v:.11e}")
}

/// Writes `rows` under `header` to `path`. Data goes to a sibling `.tmp`
/// file first and is renamed into place only after a successful flush; on
/// any failure the temporary is removed.
pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    for (i, row) in rows.iter().enumerate() {
        if row.len() != header.len() {
            bail!(
                "row {} has {} fields, expected {}",
                i + 1,
                row.len(),
                header.len()
            );
        }
    }
    let tmp = tmp_path(path);
    let written = write_all(&tmp, header, rows).and_then(|()| {
        fs::rename(&tmp, path).with_context(|| format!("moving {} into place", tmp.display()))
    });
    if written.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    written
}

fn tmp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".tmp");
    path.with_file_name(name)
}

fn write_all(tmp: &Path, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let file = fs::File::create(tmp).with_context(|| format!("creating {}", tmp.display()))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_has_twelve_significant_digits() {
        assert_eq!(sig12(1.0), "1.00000000000e0");
        assert_eq!(sig12(0.0), "0.00000000000e0");
        assert_eq!(sig12(-2.5e-4), "-2.50000000000e-4");
        assert_eq!(sig12(924.0), "9.24000000000e2");
        assert_eq!(sig12(std::f64::consts::PI), "3.14159265359e0");
    }

    #[test]
    fn writes_header_and_rows_with_lf_endings() {
        let dir = tempfile::tempdir().expect("tempdir");
        let path = dir.path().join("out.csv");
        let header = vec!["z".to_string(), "v".to_string()];
        let rows = vec![vec![sig12(0.0), sig12(1.0)], vec![sig12(0.5), sig12(-1.0)]];
        write_csv(&path, &header, &rows).expect("write");
        let text = fs::read_to_string(&path).expect("read back");
        assert_eq!(
            text,
            "z,v\n0.00000000000e0,1.00000000000e0\n5.00000000000e-1,-1.00000000000e0\n"
        );
        assert!(!dir.path().join("out.csv.tmp").exists());
    }

    #[test]
    fn mismatched_row_arity_leaves_no_file() {
        let dir = tempfile::tempdir().expect("tempdir");
        let path = dir.path().join("bad.csv");
        let header = vec!["a".to_string(), "b".to_string()];
        let rows = vec![vec![sig12(1.0)]];
        assert!(write_csv(&path, &header, &rows).is_err());
        assert!(!path.exists());
        assert!(!dir.path().join("bad.csv.tmp").exists());
    }
}
