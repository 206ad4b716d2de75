//! Pipeline orchestration: the three generation modes and the
//! validate-and-fix refinement loop.
//!
//! The loop's continue/stop rules live in [`decide`], a pure function over
//! [`RefinementState`], so the state machine is exhaustively testable apart
//! from any I/O: zero errors stops with success; a strict decrease in the
//! compile-error count is a valid refinement; anything else is an invalid
//! refinement, and accumulating more than `max_invalid` of those gives up.
//! A hard cap on total iterations backstops oscillation.

use serde::{Deserialize, Serialize};

use crate::corpus::{extract_focal_context, DataPair};
use crate::diag::{locate_buggy_element, resolve_class_context, ClassContext, ClassIndex};
use crate::llm::{extract_code_block, ChatRequest, Client, LlmError};
use crate::prompt::{
    build_basic_prompt, build_generation_prompt, build_intention_prompt,
    build_refinement_prompt, Intention, IntentionSource, PromptDoc, PromptKind,
};
use crate::validate::{
    check_syntax, compile, execute, materialize_test, OutcomeClass, Toolchain,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PipelineMode {
    /// One attempt from the basic prompt.
    Basic,
    /// Intention prompt, then one generation attempt.
    Intention,
    /// Intention + generation, then the iterative refiner.
    Full,
}

impl PipelineMode {
    pub fn parse(s: &str) -> Option<PipelineMode> {
        match s {
            "basic" => Some(PipelineMode::Basic),
            "intention" => Some(PipelineMode::Intention),
            "full" => Some(PipelineMode::Full),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            PipelineMode::Basic => "basic",
            PipelineMode::Intention => "intention",
            PipelineMode::Full => "full",
        }
    }
}

/// Iteration counters driving continue/stop decisions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementState {
    pub iteration: u32,
    pub last_error_count: Option<u32>,
    pub invalid_count: u32,
    pub max_invalid: u32,
}

impl RefinementState {
    pub fn new(max_invalid: u32) -> RefinementState {
        RefinementState {
            iteration: 0,
            last_error_count: None,
            invalid_count: 0,
            max_invalid: max_invalid.max(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    StopSuccess,
    Continue,
    StopGiveUp,
}

/// One controller step. Zero errors terminates with success. A strict
/// decrease against the last iteration is a valid refinement and leaves the
/// invalid counter alone; an equal-or-larger count is an invalid refinement,
/// and the controller gives up once those exceed `max_invalid`
/// (accumulated, never reset). On every `Continue` the error count is
/// remembered and the iteration counter advances.
pub fn decide(state: &RefinementState, new_error_count: u32) -> (Decision, RefinementState) {
    let mut next = state.clone();
    if new_error_count == 0 {
        return (Decision::StopSuccess, next);
    }
    let valid = match state.last_error_count {
        None => true,
        Some(last) => new_error_count < last,
    };
    if !valid {
        if state.invalid_count + 1 > state.max_invalid {
            return (Decision::StopGiveUp, next);
        }
        next.invalid_count += 1;
    }
    next.last_error_count = Some(new_error_count);
    next.iteration += 1;
    (Decision::Continue, next)
}

/// One generation attempt: the extracted test source (empty when the reply
/// carried no code), its validation outcome, and the request/response
/// digests for audit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attempt {
    pub test_source: String,
    pub outcome: OutcomeClass,
    pub prompt_kind: PromptKind,
    pub request_hash: String,
    pub response_hash: String,
}

/// Result of running one data pair through a pipeline mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineResult {
    pub pair: DataPair,
    pub mode: PipelineMode,
    pub intention: Option<Intention>,
    pub attempts: Vec<Attempt>,
    /// Outcome of the last attempt.
    #[serde(rename = "final")]
    pub final_outcome: OutcomeClass,
    /// Index of the attempt with the fewest compile errors (latest wins
    /// ties); the artifact worth inspecting after a give-up.
    pub best_attempt: usize,
    /// Populated when the pipeline aborted (LLM/transport/extraction
    /// failure); partial attempts are retained.
    pub aborted: Option<String>,
}

impl PipelineResult {
    pub fn final_test_source(&self) -> Option<&str> {
        self.attempts
            .get(self.best_attempt)
            .map(|a| a.test_source.as_str())
            .filter(|s| !s.is_empty())
    }
}

/// Everything a pipeline run needs.
pub struct PipelineDeps<'a> {
    pub client: &'a Client,
    pub toolchain: &'a dyn Toolchain,
    pub index: &'a ClassIndex,
    pub config: &'a PipelineConfig,
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub model: String,
    pub temperature: Option<f64>,
    pub max_invalid: u32,
    pub hard_iteration_cap: u32,
    pub token_budget: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            model: "gpt-3.5-turbo".to_string(),
            temperature: None,
            max_invalid: 3,
            hard_iteration_cap: 8,
            token_budget: crate::prompt::DEFAULT_TOKEN_BUDGET,
        }
    }
}

fn sha256_hex(text: &str) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    format!("{:x}", h.finalize())
}

fn empty_outcome() -> OutcomeClass {
    OutcomeClass {
        syntactic_ok: false,
        compiled: false,
        passed: false,
        diagnostics: Vec::new(),
        runtime_failure: None,
    }
}

fn best_attempt_index(attempts: &[Attempt]) -> usize {
    let mut best = 0usize;
    let mut best_errors = u32::MAX;
    for (i, a) in attempts.iter().enumerate() {
        let errors = if a.test_source.is_empty() {
            u32::MAX
        } else {
            a.outcome.diagnostics.len() as u32
        };
        if errors <= best_errors {
            best_errors = errors;
            best = i;
        }
    }
    best
}

fn finish(
    pair: DataPair,
    mode: PipelineMode,
    intention: Option<Intention>,
    attempts: Vec<Attempt>,
    aborted: Option<String>,
) -> PipelineResult {
    let final_outcome = attempts
        .last()
        .map(|a| a.outcome.clone())
        .unwrap_or_else(empty_outcome);
    let best_attempt = best_attempt_index(&attempts);
    PipelineResult {
        pair,
        mode,
        intention,
        attempts,
        final_outcome,
        best_attempt,
        aborted,
    }
}

/// Send a prompt and return (attempt skeleton pieces). LLM failures bubble
/// up; the caller converts them into an aborted result.
fn ask(
    deps: &PipelineDeps<'_>,
    prompt: &PromptDoc,
) -> Result<(String, String, String), LlmError> {
    let req = ChatRequest::from_prompt(&deps.config.model, prompt, deps.config.temperature);
    let hash = req.request_hash();
    let resp = deps.client.send(&req)?;
    Ok((hash, sha256_hex(&resp.raw_text), resp.raw_text))
}

/// Validate one extracted test source: syntax check, materialize, compile,
/// execute when clean. Also returns the materialized file text, which is
/// what compiler line numbers refer to.
fn validate_attempt(
    deps: &PipelineDeps<'_>,
    pair: &DataPair,
    code: &str,
) -> Result<(OutcomeClass, String), String> {
    let syntactic_ok = check_syntax(code);
    let ws = materialize_test(&pair.project, &pair.focal, code).map_err(|e| e.to_string())?;
    let materialized =
        std::fs::read_to_string(ws.test_file_abs()).map_err(|e| e.to_string())?;
    let (diags, _raw) = compile(&ws, deps.toolchain).map_err(|e| e.to_string())?;
    let compiled = syntactic_ok && diags.is_empty();
    let runtime_failure = if compiled {
        execute(&ws, deps.toolchain).map_err(|e| e.to_string())?
    } else {
        None
    };
    let passed = compiled && runtime_failure.is_none();
    Ok((
        OutcomeClass {
            syntactic_ok,
            compiled,
            passed,
            diagnostics: diags,
            runtime_failure,
        },
        materialized,
    ))
}

fn import_lines(code: &str) -> Vec<String> {
    code.lines()
        .map(str::trim)
        .filter(|l| l.starts_with("import "))
        .map(|l| l.to_string())
        .collect()
}

/// Resolve extra class contexts for a refinement round, in diagnostic order,
/// de-duplicated by class.
fn contexts_for(
    deps: &PipelineDeps<'_>,
    outcome: &OutcomeClass,
    code: &str,
) -> Vec<ClassContext> {
    let imports = import_lines(code);
    let mut out: Vec<ClassContext> = Vec::new();
    for d in &outcome.diagnostics {
        let element = locate_buggy_element(d, code);
        if element.element_kind == crate::diag::ElementKind::Unknown {
            continue;
        }
        if let Some(cc) = resolve_class_context(&element, deps.index, &imports) {
            if !out.iter().any(|c| c.class_name == cc.class_name) {
                out.push(cc);
            }
        }
    }
    out
}

/// Run one pair through the pipeline.
pub fn run_pipeline(
    pair: &DataPair,
    mode: PipelineMode,
    deps: &PipelineDeps<'_>,
) -> PipelineResult {
    let budget = deps.config.token_budget;

    let ctx = match extract_focal_context(&pair.focal, &pair.project) {
        Ok(c) => c,
        Err(e) => {
            return finish(
                pair.clone(),
                mode,
                None,
                Vec::new(),
                Some(format!("context extraction failed: {e}")),
            )
        }
    };

    // Stage 1: intention (intention/full modes).
    let intention = if mode == PipelineMode::Basic {
        None
    } else {
        let prompt = build_intention_prompt(&ctx, budget);
        match ask(deps, &prompt) {
            Ok((_, _, raw)) => {
                let text = raw.trim().to_string();
                if text.is_empty() {
                    return finish(
                        pair.clone(),
                        mode,
                        None,
                        Vec::new(),
                        Some("empty intention response".to_string()),
                    );
                }
                Some(Intention {
                    text,
                    source: IntentionSource::Llm,
                })
            }
            Err(e) => {
                return finish(pair.clone(), mode, None, Vec::new(), Some(e.to_string()))
            }
        }
    };

    // Stage 2: initial generation.
    let gen_prompt = match (&mode, &intention) {
        (PipelineMode::Basic, _) => build_basic_prompt(&ctx, budget),
        (_, Some(int)) => match build_generation_prompt(&ctx, int, budget) {
            Ok(p) => p,
            Err(e) => {
                return finish(
                    pair.clone(),
                    mode,
                    intention,
                    Vec::new(),
                    Some(e.to_string()),
                )
            }
        },
        _ => unreachable!("non-basic mode always has an intention here"),
    };

    let mut attempts: Vec<Attempt> = Vec::new();
    let mut state = RefinementState::new(deps.config.max_invalid);
    // Materialized text of the most recent attempt that had code; compiler
    // line numbers index into this, so refinement prompts embed it.
    let mut last_materialized: Option<(String, OutcomeClass)> = None;

    let (mut code, mut kind) = match ask(deps, &gen_prompt) {
        Ok((req_hash, resp_hash, raw)) => {
            let code = extract_code_block(&raw).unwrap_or_default();
            attempts.push(Attempt {
                test_source: code.clone(),
                outcome: empty_outcome(), // placeholder, validated below
                prompt_kind: gen_prompt.kind,
                request_hash: req_hash,
                response_hash: resp_hash,
            });
            (code, gen_prompt.kind)
        }
        Err(e) => {
            return finish(
                pair.clone(),
                mode,
                intention,
                Vec::new(),
                Some(e.to_string()),
            )
        }
    };
    let _ = kind;

    loop {
        // Validate the latest attempt in place.
        let outcome = if code.is_empty() {
            empty_outcome()
        } else {
            match validate_attempt(deps, pair, &code) {
                Ok((o, materialized)) => {
                    if !o.diagnostics.is_empty() {
                        last_materialized = Some((materialized, o.clone()));
                    }
                    o
                }
                Err(e) => {
                    attempts.last_mut().unwrap().outcome = empty_outcome();
                    return finish(
                        pair.clone(),
                        mode,
                        intention,
                        attempts,
                        Some(format!("validation failed: {e}")),
                    );
                }
            }
        };
        attempts.last_mut().unwrap().outcome = outcome.clone();

        if mode != PipelineMode::Full {
            return finish(pair.clone(), mode, intention, attempts, None);
        }

        // No-code replies cannot seed a refinement prompt; count one as an
        // invalid refinement against the previous error count.
        let error_count = if code.is_empty() {
            match state.last_error_count {
                Some(last) => last,
                None => return finish(pair.clone(), mode, intention, attempts, None),
            }
        } else {
            outcome.diagnostics.len() as u32
        };

        let (decision, next_state) = decide(&state, error_count);
        state = next_state;
        match decision {
            Decision::StopSuccess | Decision::StopGiveUp => {
                return finish(pair.clone(), mode, intention, attempts, None);
            }
            Decision::Continue => {
                if state.iteration > deps.config.hard_iteration_cap {
                    return finish(pair.clone(), mode, intention, attempts, None);
                }
            }
        }

        // Build the refinement prompt from the last attempt that had code,
        // using the materialized file so buggy-line numbers line up.
        let (prev_code, prev_outcome) = match &last_materialized {
            Some((text, outcome)) => (text.clone(), outcome.clone()),
            None => return finish(pair.clone(), mode, intention, attempts, None),
        };
        let contexts = contexts_for(deps, &prev_outcome, &prev_code);
        let prompt = match build_refinement_prompt(
            &prev_code,
            &prev_outcome.diagnostics,
            &contexts,
            budget,
        ) {
            Ok(p) => p,
            Err(e) => {
                return finish(
                    pair.clone(),
                    mode,
                    intention,
                    attempts,
                    Some(e.to_string()),
                )
            }
        };

        match ask(deps, &prompt) {
            Ok((req_hash, resp_hash, raw)) => {
                code = extract_code_block(&raw).unwrap_or_default();
                kind = PromptKind::Refinement;
                let _ = kind;
                attempts.push(Attempt {
                    test_source: code.clone(),
                    outcome: empty_outcome(),
                    prompt_kind: PromptKind::Refinement,
                    request_hash: req_hash,
                    response_hash: resp_hash,
                });
            }
            Err(e) => {
                return finish(
                    pair.clone(),
                    mode,
                    intention,
                    attempts,
                    Some(e.to_string()),
                );
            }
        }
    }
}

/// Run a batch of pairs, preserving input order in the output regardless of
/// parallelism.
pub fn run_batch(
    pairs: &[DataPair],
    mode: PipelineMode,
    deps: &PipelineDeps<'_>,
    parallelism: usize,
) -> Vec<PipelineResult> {
    let items: Vec<&DataPair> = pairs.iter().collect();
    crate::par::with_thread_pool(parallelism, || {
        crate::par::map_ordered(items, |pair| run_pipeline(pair, mode, deps))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_errors_is_stop_success() {
        let s = RefinementState::new(3);
        let (d, s2) = decide(&s, 0);
        assert_eq!(d, Decision::StopSuccess);
        assert_eq!(s2.iteration, 0);
    }

    #[test]
    fn strict_decrease_is_valid_refinement() {
        let mut s = RefinementState::new(3);
        s.last_error_count = Some(4);
        let (d, s2) = decide(&s, 2);
        assert_eq!(d, Decision::Continue);
        assert_eq!(s2.invalid_count, 0);
        assert_eq!(s2.last_error_count, Some(2));
        assert_eq!(s2.iteration, 1);
    }

    #[test]
    fn equal_count_with_saturated_invalids_gives_up() {
        let s = RefinementState {
            iteration: 5,
            last_error_count: Some(2),
            invalid_count: 3,
            max_invalid: 3,
        };
        let (d, _) = decide(&s, 2);
        assert_eq!(d, Decision::StopGiveUp);
    }

    #[test]
    fn first_observation_is_valid() {
        let s = RefinementState::new(3);
        let (d, s2) = decide(&s, 5);
        assert_eq!(d, Decision::Continue);
        assert_eq!(s2.last_error_count, Some(5));
        assert_eq!(s2.invalid_count, 0);
    }

    #[test]
    fn invalid_count_accumulates_and_never_resets() {
        let mut s = RefinementState::new(3);
        // 5 -> 4 valid; 4 -> 4 invalid(1); 4 -> 3 valid; 3 -> 3 invalid(2)
        let seq = [(5, 0), (4, 0), (4, 1), (3, 1), (3, 2)];
        for (count, want_invalid) in seq {
            let (d, s2) = decide(&s, count);
            assert_eq!(d, Decision::Continue);
            assert_eq!(s2.invalid_count, want_invalid);
            s = s2;
        }
    }

    #[test]
    fn never_stop_success_with_errors() {
        for last in [None, Some(1), Some(5)] {
            for invalid in 0..=3 {
                let s = RefinementState {
                    iteration: 0,
                    last_error_count: last,
                    invalid_count: invalid,
                    max_invalid: 3,
                };
                for count in 1..=5u32 {
                    let (d, _) = decide(&s, count);
                    assert_ne!(d, Decision::StopSuccess);
                }
            }
        }
    }
}
