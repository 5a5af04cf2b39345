//! File output: atomic writes, CSV spectra and six-significant-digit formatting.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use gsp_sampling::{CVector, C64};

use crate::error::{CliError, CliResult};

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

/// Writes through a temporary file in the target directory, then renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io_err(&dir))?;
    tmp.write_all(contents.as_bytes()).map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e.error })?;
    Ok(())
}

/// Where artifacts go: a directory, or stdout when none was given.
pub struct Sink {
    dir: Option<PathBuf>,
}

impl Sink {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self { dir }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// Writes `name` under the output directory, or prints it.
    pub fn emit(&self, name: &str, contents: &str) -> CliResult<()> {
        match &self.dir {
            Some(d) => {
                let path = d.join(name);
                write_atomic(&path, contents)?;
                eprintln!("wrote {}", path.display());
                Ok(())
            }
            None => {
                print!("{contents}");
                Ok(())
            }
        }
    }

    /// Like `emit`, but skipped entirely without an output directory.
    pub fn emit_file_only(&self, name: &str, contents: &str) -> CliResult<()> {
        if self.dir.is_some() {
            self.emit(name, contents)?;
        }
        Ok(())
    }
}

/// Rounds to six significant digits and prints the shortest form of the result.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{}", if x == 0.0 { 0.0 } else { x });
    }
    let rounded: f64 = format!("{x:.5e}").parse().expect("formatted float parses");
    if (1e-4..1e7).contains(&rounded.abs()) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// Parts below `1e-12` relative to the modulus are printed as zero.
pub fn complex6(z: C64) -> String {
    let floor = 1e-12 * z.norm().max(1.0);
    let clean = |x: f64| if x.abs() <= floor { 0.0 } else { x };
    let z = C64::new(clean(z.re), clean(z.im));
    if z.im == 0.0 {
        sig6(z.re)
    } else if z.im < 0.0 {
        format!("{}-{}j", sig6(z.re), sig6(-z.im))
    } else {
        format!("{}+{}j", sig6(z.re), sig6(z.im))
    }
}

pub fn vector6(v: &[C64]) -> String {
    let parts: Vec<String> = v.iter().map(|&z| complex6(z)).collect();
    format!("[{}]", parts.join(", "))
}

/// Columns `index,re,im,abs`.
pub fn spectrum_csv(v: &CVector) -> String {
    let mut out = String::from("index,re,im,abs\n");
    for (i, z) in v.iter().enumerate() {
        writeln!(out, "{i},{},{},{}", sig6(z.re), sig6(z.im), sig6(z.norm())).expect("writing to a String");
    }
    out
}

pub fn to_json_line<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
