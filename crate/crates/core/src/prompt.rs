//! Construction of the four prompt kinds as role-tagged message lists.
//!
//! All builders are pure functions of their inputs and the versioned
//! template assets under `assets/templates/v1/`, so prompts are
//! golden-snapshot testable. The code-context (CC) block is rendered by one
//! function and is byte-identical across the basic, intention, and
//! generation prompts for the same [`FocalContext`] and token budget.

use serde::{Deserialize, Serialize};

use crate::corpus::FocalContext;
use crate::diag::{ClassContext, Diagnostic};

pub const TEMPLATE_VERSION: &str = "v1";

const SYSTEM: &str = include_str!("../assets/templates/v1/system.txt");
const BASIC_INSTRUCTION: &str = include_str!("../assets/templates/v1/basic_instruction.txt");
const INTENTION_INSTRUCTION: &str =
    include_str!("../assets/templates/v1/intention_instruction.txt");
const REFINEMENT_INTRO: &str = include_str!("../assets/templates/v1/refinement_intro.txt");
const REFINEMENT_INSTRUCTION: &str =
    include_str!("../assets/templates/v1/refinement_instruction.txt");

/// Marker inserted above each buggy line in refinement prompts.
pub const BUGGY_LINE_TAG: &str = "<Buggy line>:";

/// Default estimated-token budget per prompt.
pub const DEFAULT_TOKEN_BUDGET: usize = 3_000;

#[derive(Debug, thiserror::Error)]
pub enum PromptError {
    #[error("previous test source is empty")]
    EmptyPreviousTest,
    #[error("refinement prompt requires at least one diagnostic")]
    NoDiagnostics,
    #[error("intention text is empty")]
    EmptyIntention,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PromptKind {
    Basic,
    Intention,
    Generation,
    Refinement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub role: Role,
    pub content: String,
}

/// An ordered, role-tagged message list ready to send.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptDoc {
    pub kind: PromptKind,
    pub messages: Vec<Message>,
    /// `ceil(total characters / 4)`.
    pub token_estimate: usize,
    /// True when context sections were dropped to fit the budget.
    pub truncated: bool,
}

impl PromptDoc {
    fn assemble(kind: PromptKind, user_content: String, truncated: bool) -> PromptDoc {
        let messages = vec![
            Message {
                role: Role::System,
                content: SYSTEM.to_string(),
            },
            Message {
                role: Role::User,
                content: user_content,
            },
        ];
        let token_estimate = estimate_tokens_of(&messages);
        PromptDoc {
            kind,
            messages,
            token_estimate,
            truncated,
        }
    }

    pub fn user_content(&self) -> &str {
        &self.messages[1].content
    }
}

/// Where an intention description came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntentionSource {
    Llm,
    Manual,
}

/// Natural-language description of the focal method's intended behavior.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Intention {
    pub text: String,
    pub source: IntentionSource,
}

pub fn estimate_tokens(text_len: usize) -> usize {
    text_len.div_ceil(4)
}

fn estimate_tokens_of(messages: &[Message]) -> usize {
    estimate_tokens(messages.iter().map(|m| m.content.chars().count()).sum())
}

fn basic_instruction(ctx: &FocalContext, method_name: &str) -> String {
    BASIC_INSTRUCTION
        .replace("{focal_method_name}", method_name)
        .replace("{junit_version}", &ctx.framework_version)
}

fn focal_method_name(ctx: &FocalContext) -> String {
    // First identifier followed by '(' inside the focal method's signature.
    let first_line = ctx.focal_method_source.lines().next().unwrap_or("");
    if let Some(paren) = first_line.find('(') {
        let head = &first_line[..paren];
        if let Some(name) = head.split_whitespace().last() {
            return name.to_string();
        }
    }
    ctx.focal_class_name.clone()
}

/// Render the CC part with the given budget. Signatures are dropped from the
/// end first, then fields; the focal method is never dropped. The truncation
/// decision depends only on (ctx, budget), never on the prompt kind, so all
/// three generation-side prompts share one CC block.
fn render_cc(ctx: &FocalContext, budget: usize) -> (String, bool) {
    let overhead = SYSTEM.chars().count()
        + basic_instruction(ctx, &focal_method_name(ctx)).chars().count()
        + 2; // instruction/CC separator

    let mut n_sigs = ctx.method_signatures.len();
    let mut n_fields = ctx.fields_decls.len();
    loop {
        let cc = render_cc_with(ctx, n_fields, n_sigs);
        let total = overhead + cc.chars().count();
        if estimate_tokens(total) <= budget || (n_sigs == 0 && n_fields == 0) {
            let truncated =
                n_sigs < ctx.method_signatures.len() || n_fields < ctx.fields_decls.len();
            return (cc, truncated);
        }
        if n_sigs > 0 {
            n_sigs -= 1;
        } else {
            n_fields -= 1;
        }
    }
}

fn render_cc_with(ctx: &FocalContext, n_fields: usize, n_sigs: usize) -> String {
    let mut out = String::new();
    out.push_str("// Focal method\n");
    out.push_str(&ctx.focal_method_source);
    if !ctx.focal_method_source.ends_with('\n') {
        out.push('\n');
    }
    out.push('\n');
    out.push_str("// Focal class\n");
    out.push_str(&ctx.class_declaration);
    out.push_str(" {\n");
    if n_fields > 0 {
        out.push_str("    // Fields\n");
        for f in &ctx.fields_decls[..n_fields] {
            out.push_str("    ");
            out.push_str(f);
            out.push('\n');
        }
    }
    if n_sigs > 0 {
        if n_fields > 0 {
            out.push('\n');
        }
        out.push_str("    // Method signatures\n");
        for s in &ctx.method_signatures[..n_sigs] {
            out.push_str("    ");
            out.push_str(s);
            out.push('\n');
        }
    }
    out.push('}');
    out
}

/// Basic prompt: role-playing system message, task instruction, CC part.
pub fn build_basic_prompt(ctx: &FocalContext, token_budget: usize) -> PromptDoc {
    let method = focal_method_name(ctx);
    let (cc, truncated) = render_cc(ctx, token_budget);
    let user = format!("{}\n\n{}", basic_instruction(ctx, &method), cc);
    PromptDoc::assemble(PromptKind::Basic, user, truncated)
}

/// Intention prompt: same CC part, instruction asks for the intended
/// functionality instead of a test.
pub fn build_intention_prompt(ctx: &FocalContext, token_budget: usize) -> PromptDoc {
    let method = focal_method_name(ctx);
    let (cc, truncated) = render_cc(ctx, token_budget);
    let instruction = INTENTION_INSTRUCTION.replace("{focal_method_name}", &method);
    let user = format!("{instruction}\n\n{cc}");
    PromptDoc::assemble(PromptKind::Intention, user, truncated)
}

/// Generation prompt: the basic prompt extended with a delimited intention
/// section ahead of the task instruction.
pub fn build_generation_prompt(
    ctx: &FocalContext,
    intention: &Intention,
    token_budget: usize,
) -> Result<PromptDoc, PromptError> {
    if intention.text.trim().is_empty() {
        return Err(PromptError::EmptyIntention);
    }
    let method = focal_method_name(ctx);
    let (cc, truncated) = render_cc(ctx, token_budget);
    let user = format!(
        "// Method intention\n{}\n\n{}\n\n{}",
        intention.text.trim_end(),
        basic_instruction(ctx, &method),
        cc
    );
    Ok(PromptDoc::assemble(PromptKind::Generation, user, truncated))
}

/// Annotate the previous test with `<Buggy line>:` tags, one per distinct
/// buggy line, each carrying the error types reported for that line.
fn tag_buggy_lines(prev_test: &str, diagnostics: &[Diagnostic]) -> String {
    use std::collections::BTreeMap;
    let mut by_line: BTreeMap<u32, Vec<&str>> = BTreeMap::new();
    for d in diagnostics.iter().filter(|d| d.in_test_file) {
        let types = by_line.entry(d.line).or_default();
        if !types.contains(&d.error_type.as_str()) {
            types.push(&d.error_type);
        }
    }
    let mut out = String::new();
    for (i, line) in prev_test.lines().enumerate() {
        let lineno = i as u32 + 1;
        if let Some(types) = by_line.get(&lineno) {
            let indent: String = line.chars().take_while(|c| c.is_whitespace()).collect();
            out.push_str(&format!("{indent}// {BUGGY_LINE_TAG} {}\n", types.join("; ")));
        }
        out.push_str(line);
        out.push('\n');
    }
    out
}

fn render_class_context(cc: &ClassContext) -> String {
    let simple = cc.class_name.rsplit('.').next().unwrap_or(&cc.class_name);
    let mut out = String::new();
    out.push_str(&format!("// {simple} class\n"));
    out.push_str(&format!("// {} {{\n", cc.class_declaration));
    for sig in &cc.public_method_signatures {
        out.push_str(&format!("//     {sig}\n"));
    }
    out.push_str("// }");
    out
}

/// Refinement prompt: previous test with buggy-line tags, resolved class
/// contexts as commented summaries (in diagnostic order, up to the budget),
/// and the fix instruction.
pub fn build_refinement_prompt(
    prev_test: &str,
    diagnostics: &[Diagnostic],
    extra: &[ClassContext],
    token_budget: usize,
) -> Result<PromptDoc, PromptError> {
    if prev_test.trim().is_empty() {
        return Err(PromptError::EmptyPreviousTest);
    }
    if diagnostics.is_empty() {
        return Err(PromptError::NoDiagnostics);
    }
    let tagged = tag_buggy_lines(prev_test, diagnostics);

    let base_len = SYSTEM.chars().count()
        + REFINEMENT_INTRO.chars().count()
        + tagged.chars().count()
        + REFINEMENT_INSTRUCTION.chars().count()
        + 6;
    let mut sections: Vec<String> = Vec::new();
    let mut used = base_len;
    let mut truncated = false;
    let mut seen: Vec<&str> = Vec::new();
    for cc in extra {
        if seen.contains(&cc.class_name.as_str()) {
            continue;
        }
        seen.push(&cc.class_name);
        let rendered = render_class_context(cc);
        if estimate_tokens(used + rendered.chars().count()) > token_budget {
            truncated = true;
            break;
        }
        used += rendered.chars().count() + 2;
        sections.push(rendered);
    }

    let mut user = String::new();
    user.push_str(REFINEMENT_INTRO);
    user.push_str("\n\n");
    user.push_str(tagged.trim_end());
    user.push('\n');
    for s in &sections {
        user.push('\n');
        user.push_str(s);
        user.push('\n');
    }
    user.push('\n');
    user.push_str(REFINEMENT_INSTRUCTION);

    Ok(PromptDoc::assemble(PromptKind::Refinement, user, truncated))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn ctx() -> FocalContext {
        FocalContext {
            focal_method_source: "public void setCharAt(int index, char ch) {\n    value = value.substring(0, index) + ch + value.substring(index + 1);\n}".to_string(),
            focal_class_name: "StrBuilder".to_string(),
            class_declaration: "public final class StrBuilder".to_string(),
            fields_decls: vec!["private String value;".to_string()],
            method_signatures: vec![
                "public StrBuilder(String initial);".to_string(),
                "public void setCharAt(int index, char ch);".to_string(),
                "public String toString();".to_string(),
            ],
            framework_version: "JUnit 4".to_string(),
        }
    }

    #[test]
    fn basic_prompt_contains_verbatim_instructions() {
        let doc = build_basic_prompt(&ctx(), DEFAULT_TOKEN_BUDGET);
        assert_eq!(doc.messages[0].role, Role::System);
        assert_eq!(
            doc.messages[0].content,
            "You are a professional who writes Java test methods."
        );
        assert!(doc
            .user_content()
            .contains("Please write a test method for the setCharAt"));
        assert!(doc.user_content().contains("using JUnit 4"));
        assert!(!doc.truncated);
        assert_eq!(doc.kind, PromptKind::Basic);
    }

    #[test]
    fn empty_fields_elide_section() {
        let mut c = ctx();
        c.fields_decls.clear();
        let doc = build_basic_prompt(&c, DEFAULT_TOKEN_BUDGET);
        assert!(!doc.user_content().contains("// Fields"));
        assert!(doc.user_content().contains("// Method signatures"));
    }

    #[test]
    fn token_estimate_matches_character_count() {
        let doc = build_basic_prompt(&ctx(), DEFAULT_TOKEN_BUDGET);
        let chars: usize = doc.messages.iter().map(|m| m.content.chars().count()).sum();
        assert_eq!(doc.token_estimate, chars.div_ceil(4));
    }

    #[test]
    fn cc_part_shared_across_kinds() {
        let c = ctx();
        let basic = build_basic_prompt(&c, DEFAULT_TOKEN_BUDGET);
        let intention = build_intention_prompt(&c, DEFAULT_TOKEN_BUDGET);
        let generation = build_generation_prompt(
            &c,
            &Intention {
                text: "Sets the character at the given index.".to_string(),
                source: IntentionSource::Llm,
            },
            DEFAULT_TOKEN_BUDGET,
        )
        .unwrap();
        let cc = basic
            .user_content()
            .split_once("\n\n// Focal method\n")
            .map(|(_, cc)| cc)
            .unwrap();
        assert!(intention.user_content().ends_with(cc));
        assert!(generation.user_content().ends_with(cc));
    }

    #[test]
    fn intention_prompt_has_no_test_directive() {
        let doc = build_intention_prompt(&ctx(), DEFAULT_TOKEN_BUDGET);
        assert!(!doc.user_content().contains("Please write a test method"));
        assert!(doc.user_content().contains("intended functionality"));
    }

    #[test]
    fn generation_prompt_embeds_intention_before_instruction() {
        let intent = Intention {
            text: "sets the character at the given index".to_string(),
            source: IntentionSource::Llm,
        };
        let doc = build_generation_prompt(&ctx(), &intent, DEFAULT_TOKEN_BUDGET).unwrap();
        let user = doc.user_content();
        assert!(user.contains("sets the character at the given index"));
        let intent_at = user.find("// Method intention").unwrap();
        let instr_at = user.find("Please write a test method").unwrap();
        assert!(intent_at < instr_at);
    }

    #[test]
    fn determinism() {
        let c = ctx();
        assert_eq!(
            build_basic_prompt(&c, DEFAULT_TOKEN_BUDGET),
            build_basic_prompt(&c, DEFAULT_TOKEN_BUDGET)
        );
        assert_eq!(
            build_intention_prompt(&c, DEFAULT_TOKEN_BUDGET),
            build_intention_prompt(&c, DEFAULT_TOKEN_BUDGET)
        );
    }

    #[test]
    fn truncation_drops_signatures_first_never_focal_method() {
        let mut c = ctx();
        for i in 0..200 {
            c.method_signatures
                .push(format!("public void generated{i}(int a, int b, int c);"));
        }
        let doc = build_basic_prompt(&c, 120);
        assert!(doc.truncated);
        assert!(doc.user_content().contains("// Focal method"));
        assert!(doc.user_content().contains("setCharAt(int index, char ch) {"));
        assert!(!doc.user_content().contains("generated199"));
        // Fields survive until signatures are exhausted.
        let tiny = build_basic_prompt(&c, 1);
        assert!(tiny.truncated);
        assert!(tiny.user_content().contains("// Focal method"));
        assert!(!tiny.user_content().contains("// Method signatures"));
    }

    fn diag_at(line: u32, error_type: &str) -> Diagnostic {
        Diagnostic {
            error_type: error_type.to_string(),
            file: PathBuf::from("T.java"),
            line,
            symbol: None,
            raw: String::new(),
            in_test_file: true,
        }
    }

    #[test]
    fn refinement_tags_buggy_lines() {
        let prev = "@Test\npublic void t() {\n    Xml xml = new Xml();\n    xml.addAttribute(\"a\", \"b\");\n    assertTrue(true);\n}";
        let diags = vec![diag_at(4, "cannot find symbol")];
        let doc = build_refinement_prompt(prev, &diags, &[], DEFAULT_TOKEN_BUDGET).unwrap();
        let user = doc.user_content();
        assert_eq!(user.matches(BUGGY_LINE_TAG).count(), 1);
        let tag_at = user.find(BUGGY_LINE_TAG).unwrap();
        let line_at = user.find("xml.addAttribute").unwrap();
        assert!(tag_at < line_at);
        assert!(user.contains("// <Buggy line>: cannot find symbol"));
    }

    #[test]
    fn refinement_tag_count_equals_distinct_lines() {
        let prev = "line1();\nline2();\nline3();\nline4();";
        let diags = vec![
            diag_at(2, "cannot find symbol"),
            diag_at(2, "incompatible types: String cannot be converted to int"),
            diag_at(4, "cannot find symbol"),
        ];
        let doc = build_refinement_prompt(prev, &diags, &[], DEFAULT_TOKEN_BUDGET).unwrap();
        assert_eq!(doc.user_content().matches(BUGGY_LINE_TAG).count(), 2);
    }

    #[test]
    fn refinement_renders_class_context() {
        let prev = "Xml xml = new Xml(\"r\");\nxml.addAttribute(\"a\", \"b\");";
        let diags = vec![diag_at(2, "cannot find symbol")];
        let cc = ClassContext {
            class_name: "com.fixture.xml.Xml".to_string(),
            class_declaration: "public class Xml".to_string(),
            public_method_signatures: vec![
                "public Xml(String name);".to_string(),
                "public void setAttribute(String key, String value);".to_string(),
            ],
        };
        let doc = build_refinement_prompt(prev, &diags, &[cc], DEFAULT_TOKEN_BUDGET).unwrap();
        let user = doc.user_content();
        assert!(user.contains("// Xml class"));
        assert!(user.contains("//     public void setAttribute(String key, String value);"));
        assert!(user.contains("Please fix all the compilation errors"));
    }

    #[test]
    fn refinement_preconditions() {
        let diags = vec![diag_at(1, "x")];
        assert!(matches!(
            build_refinement_prompt("", &diags, &[], DEFAULT_TOKEN_BUDGET),
            Err(PromptError::EmptyPreviousTest)
        ));
        assert!(matches!(
            build_refinement_prompt("code();", &[], &[], DEFAULT_TOKEN_BUDGET),
            Err(PromptError::NoDiagnostics)
        ));
    }

    #[test]
    fn empty_context_section_is_fine() {
        let doc =
            build_refinement_prompt("code();", &[diag_at(1, "e")], &[], DEFAULT_TOKEN_BUDGET)
                .unwrap();
        assert!(doc.user_content().contains("Please fix all the compilation errors"));
    }
}
