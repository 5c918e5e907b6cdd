use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::instance::Loaded;
use crate::Failure;

#[derive(Serialize)]
pub struct InstanceRef {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to replay a run. Written next to the outputs as
/// `manifest.json`; the timestamp lives only here so that the outputs
/// themselves stay byte-identical across replays.
#[derive(Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub argv: Vec<String>,
    pub instance: Option<InstanceRef>,
    pub seeds: Vec<u64>,
    pub rng: &'static str,
    pub config: serde_json::Value,
    pub started_unix: u64,
    pub finished_unix: u64,
}

impl RunManifest {
    pub fn new(subcommand: &'static str, instance: Option<&Loaded>, seeds: Vec<u64>, config: serde_json::Value) -> Self {
        let now = unix_now();
        RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            argv: std::env::args().collect(),
            instance: instance.map(|l| InstanceRef {
                path: l.path.display().to_string(),
                sha256: l.sha256.clone(),
            }),
            seeds,
            rng: mingc::RNG_ALGORITHM,
            config,
            started_unix: now,
            finished_unix: now,
        }
    }

    /// Stamps the finish time and writes `manifest.json` into `dir`.
    pub fn write(mut self, dir: Option<&Path>) -> Result<(), Failure> {
        let Some(dir) = dir else {
            return Ok(());
        };
        self.finished_unix = unix_now();
        std::fs::create_dir_all(dir)?;
        let json = serde_json::to_string_pretty(&self).expect("manifest serializes");
        std::fs::write(dir.join("manifest.json"), json + "\n")?;
        Ok(())
    }
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}
