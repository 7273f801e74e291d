//! Where the three subsystem definitions come from: an explicit manifest,
//! three explicit files, `FUZZGATE_FIS_DIR`, or the copies embedded in the
//! library, in that order of preference.

use std::path::{Path, PathBuf};

use fuzzgate_core::bundled;
use fuzzgate_core::cascade::{build_cascade, LoadError, Manifest};
use fuzzgate_core::dsl::{self, Diagnostic};
use fuzzgate_core::Cascade;

use crate::CliError;

#[derive(Debug, Clone)]
pub enum Source {
    Manifest(PathBuf),
    Files([PathBuf; 3]),
    Embedded,
}

impl Source {
    pub fn resolve(
        manifest: Option<PathBuf>,
        files: [Option<PathBuf>; 3],
        fis_dir: Option<PathBuf>,
    ) -> Result<Self, CliError> {
        if let Some(m) = manifest {
            return Ok(Source::Manifest(m));
        }
        match files {
            [Some(a), Some(b), Some(c)] => return Ok(Source::Files([a, b, c])),
            [None, None, None] => {}
            _ => return Err(CliError::Domain("--fis1, --fis2 and --fis3 must be given together".into())),
        }
        if let Some(dir) = fis_dir {
            let m = dir.join(bundled::MANIFEST_FILE);
            if m.is_file() {
                return Ok(Source::Manifest(m));
            }
            return Ok(Source::Files([
                dir.join(bundled::FS1_FILE),
                dir.join(bundled::FS2_FILE),
                dir.join(bundled::FS3_FILE),
            ]));
        }
        Ok(Source::Embedded)
    }

    /// `(display name, text)` of each definition file.
    pub fn texts(&self) -> Vec<(String, Result<String, CliError>)> {
        match self {
            Source::Embedded => bundled::definitions()
                .into_iter()
                .map(|(name, text)| (format!("<embedded>/{name}"), Ok(text.to_string())))
                .collect(),
            Source::Files(paths) => paths.iter().map(|p| (p.display().to_string(), read(p))).collect(),
            Source::Manifest(m) => match Manifest::load(m) {
                Ok(manifest) => {
                    let base = base_dir(m);
                    manifest
                        .nodes
                        .iter()
                        .map(|(_, p)| {
                            let full = base.join(p);
                            (full.display().to_string(), read(&full))
                        })
                        .collect()
                }
                Err(e) => vec![(m.display().to_string(), Err(load_error(e)))],
            },
        }
    }

    pub fn cascade(&self) -> Result<Cascade, CliError> {
        match self {
            Source::Embedded => Ok(fuzzgate_core::bundled_cascade()),
            Source::Manifest(m) => {
                let manifest = Manifest::load(m).map_err(load_error)?;
                manifest.build_from_dir(&base_dir(m)).map_err(load_error)
            }
            Source::Files(paths) => {
                let mut subs = Vec::with_capacity(3);
                for p in paths {
                    let text = read(p)?;
                    let v = dsl::compile::<f64>(&text).map_err(|d| definition_error(p, &d))?;
                    subs.push(v.subsystem);
                }
                let [a, b, c]: [_; 3] = subs.try_into().expect("three definitions");
                build_cascade(a, b, c).map_err(|e| CliError::Domain(e.to_string()))
            }
        }
    }
}

fn base_dir(manifest: &Path) -> PathBuf {
    manifest.parent().map(Path::to_path_buf).unwrap_or_default()
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn render_diagnostics(file: &str, diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| format!("{file}:{d}\n")).collect()
}

fn definition_error(path: &Path, diags: &[Diagnostic]) -> CliError {
    CliError::Domain(render_diagnostics(&path.display().to_string(), diags).trim_end().to_string())
}

fn load_error(e: LoadError) -> CliError {
    match e {
        LoadError::Io { .. } => CliError::Io(e.to_string()),
        LoadError::Definition { path, diagnostics } => definition_error(&path, &diagnostics),
        other => CliError::Domain(other.to_string()),
    }
}
