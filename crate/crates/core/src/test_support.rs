//! Synthetic result builders shared by unit, property, and acceptance tests.

#![allow(clippy::missing_panics_doc)]

use std::path::PathBuf;

use crate::corpus::{BuildSystem, DataPair, MethodRef, ProjectRef};
use crate::prompt::PromptKind;
use crate::refine::{Attempt, PipelineMode, PipelineResult};
use crate::validate::{OutcomeClass, RuntimeFailure};

pub fn dummy_pair(tag: usize) -> DataPair {
    let method = MethodRef {
        file_path: PathBuf::from(format!("src/main/java/com/x/C{tag}.java")),
        class_name: format!("C{tag}"),
        method_name: format!("m{tag}"),
        param_count: 0,
        param_types: vec![],
        start_line: 1,
        end_line: 2,
    };
    let test = MethodRef {
        file_path: PathBuf::from(format!("src/test/java/com/x/C{tag}Test.java")),
        class_name: format!("C{tag}Test"),
        method_name: format!("testM{tag}"),
        param_count: 0,
        param_types: vec![],
        start_line: 1,
        end_line: 2,
    };
    DataPair {
        focal: method,
        test,
        project: ProjectRef {
            root_path: PathBuf::from("/dev/null-project"),
            build_system: BuildSystem::MavenLike,
            source_roots: vec![PathBuf::from("src/main/java")],
            test_roots: vec![PathBuf::from("src/test/java")],
        },
    }
}

/// A one-attempt result with the given outcome flags (kept consistent with
/// the `passed ⇒ compiled ⇒ syntactic_ok` chain by construction).
pub fn synthetic_result(syntactic: bool, compiled: bool, passed: bool) -> PipelineResult {
    let compiled = compiled && syntactic;
    let passed = passed && compiled;
    let outcome = OutcomeClass {
        syntactic_ok: syntactic,
        compiled,
        passed,
        diagnostics: vec![],
        runtime_failure: if compiled && !passed {
            Some(RuntimeFailure {
                exception_type: "java.lang.AssertionError".to_string(),
                message: None,
                failing_line: Some(3),
            })
        } else {
            None
        },
    };
    let attempt = Attempt {
        test_source: "@Test\npublic void t() {\n    assertTrue(true);\n}".to_string(),
        outcome: outcome.clone(),
        prompt_kind: PromptKind::Basic,
        request_hash: "0".repeat(64),
        response_hash: "1".repeat(64),
    };
    PipelineResult {
        pair: dummy_pair(0),
        mode: PipelineMode::Basic,
        intention: None,
        attempts: vec![attempt],
        final_outcome: outcome,
        best_attempt: 0,
        aborted: None,
    }
}
