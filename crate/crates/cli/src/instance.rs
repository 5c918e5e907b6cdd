use std::path::{Path, PathBuf};

use clap::ValueEnum;
use sha2::{Digest, Sha256};

use mingc::zoo::format::{parse_graph, parse_set_system, parse_weighted_coverage};
use mingc::zoo::{cds_problem, set_cover_problem, vertex_cover_problem, weighted_coverage_problem};
use mingc::CoverProblem;

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Set system file; elements of the ground set are the sets
    Setcover,
    /// Graph file; unit vertex costs
    Vertexcover,
    /// Graph file; connected dominating set
    Cds,
    /// Weighted coverage file
    Wcoverage,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Setcover => "setcover",
            Kind::Vertexcover => "vertexcover",
            Kind::Cds => "cds",
            Kind::Wcoverage => "wcoverage",
        }
    }
}

pub struct Loaded {
    pub path: PathBuf,
    pub sha256: String,
    pub problem: CoverProblem,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn load(path: &Path, kind: Kind) -> Result<Loaded, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let name = path.file_stem().map_or_else(|| "instance".to_string(), |s| s.to_string_lossy().into_owned());
    let problem = build(&text, &name, kind).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(Loaded {
        path: path.to_path_buf(),
        sha256: sha256_hex(text.as_bytes()),
        problem,
    })
}

fn build(text: &str, name: &str, kind: Kind) -> mingc::Result<CoverProblem> {
    match kind {
        Kind::Setcover => set_cover_problem(&parse_set_system(text, name)?),
        Kind::Vertexcover => vertex_cover_problem(&parse_graph(text, name)?, None),
        Kind::Cds => cds_problem(&parse_graph(text, name)?),
        Kind::Wcoverage => weighted_coverage_problem(&parse_weighted_coverage(text, name)?),
    }
}
