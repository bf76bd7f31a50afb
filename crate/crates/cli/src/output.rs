use std::io::Write;
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

/// A report file staged in the output directory, published by `commit`.
pub struct Staged {
    tmp: NamedTempFile,
    target: PathBuf,
}

/// Writes `# <config>` followed by `body` to a temporary file next to
/// `dir/name`.
pub fn stage(dir: &Path, name: &str, config: &str, body: &str) -> std::io::Result<Staged> {
    std::fs::create_dir_all(dir)?;
    let mut tmp = NamedTempFile::new_in(dir)?;
    writeln!(tmp, "# {config}")?;
    tmp.write_all(body.as_bytes())?;
    tmp.as_file().sync_all()?;
    Ok(Staged {
        tmp,
        target: dir.join(name),
    })
}

/// Renames every staged file into place.
pub fn commit(files: Vec<Staged>) -> std::io::Result<Vec<PathBuf>> {
    files
        .into_iter()
        .map(|f| {
            f.tmp.persist(&f.target).map_err(|e| e.error)?;
            Ok(f.target)
        })
        .collect()
}

/// Plain-text table with right-aligned numeric columns.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            rows.iter()
                .map(|r| r[c].len())
                .chain([header[c].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i == 0 {
                    format!("{c:<w$}", w = widths[i])
                } else {
                    format!("{c:>w$}", w = widths[i])
                }
            })
            .collect::<Vec<_>>()
            .join("  ")
    };
    let mut out = line(header.to_vec());
    out.push('\n');
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}
