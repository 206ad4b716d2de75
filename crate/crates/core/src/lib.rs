//! LLM-driven unit test generation with iterative compile-error repair.
//!
//! The pipeline, end to end:
//!
//! 1. [`corpus`] scans a Java project, pairs test methods with their focal
//!    methods, and extracts the focal code context.
//! 2. [`prompt`] builds the four prompt kinds (basic, intention, generation,
//!    refinement) as role-tagged message lists from versioned templates.
//! 3. [`llm`] sends prompts to a chat-completion endpoint, with record and
//!    replay cassettes for deterministic runs; replies are mined for code.
//! 4. [`validate`] materializes each generated test into an isolated scratch
//!    copy of the project and drives a toolchain through syntax, compile,
//!    and execute checks.
//! 5. [`diag`] parses raw compiler/runtime output into structured
//!    diagnostics, classifies them, and resolves the implicated classes for
//!    extra prompt context.
//! 6. [`refine`] orchestrates the modes and the validate-and-fix loop.
//! 7. [`metrics`] aggregates batches of results into correctness metrics and
//!    error breakdowns.
//!
//! Batch entry points fan out over a thread pool when the `parallel`
//! feature (default) is enabled; outputs are order-preserving either way.

pub mod corpus;
pub mod diag;
pub mod llm;
pub mod metrics;
pub mod par;
pub mod prompt;
pub mod record;
pub mod refine;
pub mod validate;

#[doc(hidden)]
pub mod test_support;

pub use corpus::{DataPair, FocalContext, MethodRef, ProjectRef};
pub use diag::{BuggyElement, ClassContext, Diagnostic, ErrorCategory, ErrorKind};
pub use llm::{Cassette, CassetteMode, ChatRequest, ChatResponse, Client};
pub use prompt::{Intention, PromptDoc, PromptKind};
pub use refine::{decide, run_batch, run_pipeline, PipelineMode, PipelineResult, RefinementState};
pub use validate::{OutcomeClass, RuntimeFailure, Toolchain, Workspace};
