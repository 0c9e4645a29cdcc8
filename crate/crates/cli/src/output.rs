//! Writing result files. Everything that could differ between two
//! identical runs goes to the `.meta.json` sidecar.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::json;

use crate::failure::{CliResult, Failure};

pub fn write(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Failure::from(e).context(format!("creating {}", dir.display())))?;
    }
    std::fs::write(path, contents).map_err(|e| Failure::from(e).context(format!("writing {}", path.display())))?;
    log::info!("wrote {}", path.display());
    Ok(())
}

/// Prefixes a CSV body with its `# config_hash=` line.
pub fn csv_with_hash(hash: &str, body: &str) -> String {
    format!("# config_hash={hash}\n{body}")
}

pub fn markdown_with_hash(hash: &str, title: &str, body: &str) -> String {
    format!("# {title}\n\nconfig hash: `{hash}`\n\n{body}")
}

/// Directory name for a setup string.
pub fn slug(setup: &str) -> String {
    let mut s: String = setup
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    while s.contains("__") {
        s = s.replace("__", "_");
    }
    s.trim_matches('_').to_string()
}

pub fn unix_seconds() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

pub struct Sidecar {
    pub command: String,
    pub config_hash: String,
    pub started: u64,
    pub jobs: usize,
    pub outputs: Vec<PathBuf>,
}

impl Sidecar {
    pub fn write(&self, out: &Path) -> CliResult<()> {
        let outputs: Vec<String> = self.outputs.iter().map(|p| p.display().to_string()).collect();
        let v = json!({
            "command": self.command,
            "config_hash": self.config_hash,
            "version": env!("CARGO_PKG_VERSION"),
            "started_unix": self.started,
            "finished_unix": unix_seconds(),
            "jobs": self.jobs,
            "outputs": outputs,
        });
        let text = serde_json::to_string_pretty(&v).expect("json value serializes") + "\n";
        write(&out.join(format!("{}.meta.json", self.command)), &text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slugs() {
        assert_eq!(slug("ling+word(1,1),stop,lowercase:simplog"), "ling_word_1_1_stop_lowercase_simplog");
        assert_eq!(slug("pos(3,3):log,attrsel"), "pos_3_3_log_attrsel");
    }
}
