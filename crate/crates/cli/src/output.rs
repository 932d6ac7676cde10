//! Table and grid writers. Files are assembled in memory and written by
//! [`write_all`] once every computation has finished.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;

pub const GRID_MAGIC: &[u8; 8] = b"FFGRID01";

pub struct OutFile {
    pub name: String,
    pub bytes: Vec<u8>,
}

/// Provenance shared by every output header.
pub struct Header {
    pub digest: String,
    pub experiment: &'static str,
}

impl Header {
    fn lines(&self) -> String {
        format!(
            "# fracfield {}\n# config_sha256: {}\n# experiment: {}\n",
            env!("CARGO_PKG_VERSION"),
            self.digest,
            self.experiment
        )
    }
}

/// Shortest round-trip scientific notation.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:e}")
    }
}

/// Comma-separated table with a `#` header block, a column row, and
/// optional `#` footer lines.
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    meta: Vec<(String, String)>,
    footer: Vec<(String, String)>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new(), meta: Vec::new(), footer: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn footer(&mut self, key: &str, value: impl ToString) {
        self.footer.push((key.to_string(), value.to_string()));
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self, header: &Header) -> Vec<u8> {
        let mut out = header.lines();
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        out.push_str(&format!("# columns: {}\n", self.columns.join(",")));
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        let body = w.into_inner().expect("in-memory write");
        let mut bytes = out.into_bytes();
        bytes.extend(body);
        for (k, v) in &self.footer {
            bytes.extend(format!("# {k}: {v}\n").into_bytes());
        }
        bytes
    }
}

/// Binary grid: magic, u32 dims, u32 counts, u32 components, then f64
/// values, all little-endian; points in row-major order (last axis
/// fastest) with components innermost.
pub fn grid_bytes(counts: &[usize], components: usize, values: &[f64]) -> Vec<u8> {
    debug_assert_eq!(values.len(), counts.iter().product::<usize>() * components);
    let mut out = Vec::with_capacity(16 + 4 * counts.len() + 8 * values.len());
    out.extend_from_slice(GRID_MAGIC);
    out.extend_from_slice(&(counts.len() as u32).to_le_bytes());
    for c in counts {
        out.extend_from_slice(&(*c as u32).to_le_bytes());
    }
    out.extend_from_slice(&(components as u32).to_le_bytes());
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Inverse of [`grid_bytes`]: (counts, components, values).
pub fn read_grid(bytes: &[u8]) -> Option<(Vec<usize>, usize, Vec<f64>)> {
    let rest = bytes.strip_prefix(GRID_MAGIC.as_slice())?;
    let mut words = rest.chunks_exact(4);
    let mut word = || words.next().map(|w| u32::from_le_bytes(w.try_into().unwrap()) as usize);
    let dims = word()?;
    let counts: Vec<usize> = (0..dims).map(|_| word()).collect::<Option<_>>()?;
    let components = word()?;
    let offset = 8 + 4 * (dims + 2);
    let data = bytes.get(offset..)?;
    let n = counts.iter().product::<usize>() * components;
    if data.len() != 8 * n {
        return None;
    }
    let values = data.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Some((counts, components, values))
}

/// Sidecar text header of a grid file; the part below the comment lines is TOML.
pub fn grid_sidecar(header: &Header, entries: &[(&str, String)]) -> Vec<u8> {
    let mut out = header.lines();
    out.push_str("# layout: magic FFGRID01, u32 dims, u32 counts[dims], u32 components, f64 values (little-endian, row-major, last axis fastest, components innermost)\n");
    for (k, v) in entries {
        out.push_str(&format!("{k} = {v}\n"));
    }
    out.into_bytes()
}

/// Write every file into `dir` through temporary names, so a failed run
/// leaves no partial outputs.
pub fn write_all(dir: &Path, files: &[OutFile]) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir)?;
    let mut staged = Vec::new();
    for f in files {
        let tmp = dir.join(format!(".{}.tmp", f.name));
        if let Err(e) = fs::write(&tmp, &f.bytes) {
            for (t, _) in &staged {
                let _ = fs::remove_file(t);
            }
            let _ = fs::remove_file(&tmp);
            return Err(e.into());
        }
        staged.push((tmp, dir.join(&f.name)));
    }
    let mut written = Vec::new();
    for (tmp, path) in staged {
        fs::rename(&tmp, &path)?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_round_trip() {
        let vals: Vec<f64> = (0..32).map(|i| i as f64 * 0.5).collect();
        let b = grid_bytes(&[4, 4], 2, &vals);
        assert_eq!(read_grid(&b), Some((vec![4, 4], 2, vals)));
        assert!(read_grid(&b[..b.len() - 1]).is_none());
    }

    #[test]
    fn table_layout() {
        let mut t = Table::new(&["a", "b"]);
        t.meta("engine", "direct");
        t.row(vec![num(1.5), num(0.25)]);
        t.footer("slope", num(2.0));
        let h = Header { digest: "ab".into(), experiment: "test" };
        let text = String::from_utf8(t.render(&h)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1], "# config_sha256: ab");
        assert_eq!(lines[4], "# columns: a,b");
        assert_eq!(lines[5], "a,b");
        assert_eq!(lines[6], "1.5e0,2.5e-1");
        assert_eq!(lines[7], "# slope: 2e0");
    }
}
