//! Shared plumbing for integration tests: fixture paths and replay deps.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use testforge_core::corpus::{extract_pairs, DataPair, ExtractReport, ProjectRef};
use testforge_core::diag::ClassIndex;
use testforge_core::llm::{Cassette, Client};
use testforge_core::refine::{PipelineConfig, PipelineDeps};
use testforge_core::validate::EmbeddedToolchain;

pub fn fixture_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/fixlib")
}

pub fn diagnostics_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/diagnostics")
}

pub fn cassette_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/cassettes/fixlib.jsonl")
}

pub fn snapshots_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/snapshots")
}

pub fn fixture_project() -> ProjectRef {
    ProjectRef::discover(fixture_root()).expect("fixture project discoverable")
}

pub fn fixture_extract() -> (ProjectRef, ExtractReport) {
    let project = fixture_project();
    let report = extract_pairs(&project).expect("extraction succeeds");
    (project, report)
}

pub fn replay_client() -> Client {
    Client::replay_only(Cassette::replay(&cassette_path()).expect("committed cassette loads"))
}

/// Bundle owning everything [`PipelineDeps`] borrows.
pub struct DepsBundle {
    pub client: Client,
    pub toolchain: EmbeddedToolchain,
    pub index: ClassIndex,
    pub config: PipelineConfig,
}

impl DepsBundle {
    pub fn replay(project: &ProjectRef) -> DepsBundle {
        DepsBundle {
            client: replay_client(),
            toolchain: EmbeddedToolchain::default(),
            index: ClassIndex::build(project).expect("class index"),
            config: PipelineConfig::default(),
        }
    }

    pub fn with_client(project: &ProjectRef, client: Client) -> DepsBundle {
        DepsBundle {
            client,
            toolchain: EmbeddedToolchain::default(),
            index: ClassIndex::build(project).expect("class index"),
            config: PipelineConfig::default(),
        }
    }

    pub fn deps(&self) -> PipelineDeps<'_> {
        PipelineDeps {
            client: &self.client,
            toolchain: &self.toolchain,
            index: &self.index,
            config: &self.config,
        }
    }
}

pub fn pair_by_focal<'a>(pairs: &'a [DataPair], method: &str) -> &'a DataPair {
    pairs
        .iter()
        .find(|p| p.focal.method_name == method)
        .unwrap_or_else(|| panic!("no pair with focal method {method}"))
}
