//! Regenerate the committed fixture cassettes.
//!
//! Runs the full pipeline over the bundled `fixlib` project in record mode
//! with a scripted backend, so every request hash in the cassette is the one
//! the real prompt builders produce. Re-run after any change to prompt
//! templates, diagnostic rendering, or the fixture project:
//!
//! ```sh
//! rm crates/core/tests/fixtures/cassettes/fixlib.jsonl
//! cargo run -p testforge-core --example regen_cassettes
//! ```

use std::path::{Path, PathBuf};

use testforge_core::corpus::{extract_pairs, ProjectRef};
use testforge_core::diag::ClassIndex;
use testforge_core::llm::{Backend, Cassette, ChatRequest, ChatResponse, Client, FinishReason, LlmError};
use testforge_core::refine::{run_batch, PipelineConfig, PipelineDeps, PipelineMode};
use testforge_core::validate::EmbeddedToolchain;

fn fixture_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/fixlib")
}

fn cassette_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/cassettes/fixlib.jsonl")
}

/// The scripted model: answers are keyed off the prompt kind and the focal
/// method named in the instruction.
struct Scripted;

impl Backend for Scripted {
    fn complete(&self, req: &ChatRequest) -> Result<ChatResponse, LlmError> {
        let user = &req.messages[1].content;
        let text = if user.starts_with("Please infer") {
            intention_reply(user)
        } else if user.starts_with("The test method below does not compile") {
            refinement_reply(user)
        } else if user.starts_with("// Method intention") {
            generation_reply(user)
        } else {
            basic_reply(user)
        };
        Ok(ChatResponse {
            raw_text: text,
            finish_reason: FinishReason::Stop,
            latency_ms: 0,
        })
    }
}

fn focal_of(user: &str) -> &'static str {
    for name in [
        "setCharAt",
        "setAttribute",
        "divide",
        "append",
        "greet",
        "find",
        "sum",
    ] {
        if user.contains(&format!("for the {name} ")) || user.contains(&format!("of the {name} ")) {
            return name;
        }
    }
    panic!("prompt names no known focal method:\n{user}");
}

fn intention_reply(user: &str) -> String {
    match focal_of(user) {
        "sum" => "The sum method adds its two integer arguments, stores the result as the calculator's last result, and returns it.",
        "divide" => "The divide method performs integer division of its first argument by the second, remembering and returning the quotient.",
        "setCharAt" => "The setCharAt method replaces the character at the given index of the current value with the supplied character, rejecting out-of-range indexes.",
        "append" => "The append method concatenates the given string onto the current value and returns the builder itself for chaining.",
        "greet" => "The greet method builds a greeting by combining the configured salutation, the given name, and an exclamation mark.",
        "find" => "The find method returns the configured salutation for the key \"greeting\" and null for any other key.",
        "setAttribute" => "The setAttribute method appends a key=\"value\" attribute to the element's attribute list used when rendering.",
        other => panic!("no intention for {other}"),
    }
    .to_string()
}

fn basic_reply(user: &str) -> String {
    let code = match focal_of(user) {
        "sum" => {
            r#"@Test
public void testSum() {
    Calculator calculator = new Calculator();
    int result = calculator.sum(2, 3);
    assertEquals(5, result);
}"#
        }
        "divide" => {
            r#"@Test
public void testDivide() {
    Calculator calculator = new Calculator();
    assertEquals(5, calculator.divide(10, 2));
}"#
        }
        // Compiles, but the oracle is wrong: the builder's value changes.
        "setCharAt" => {
            r#"@Test
public void testSetCharAt() {
    StrBuilder strBuilder = new StrBuilder("Hello World");
    strBuilder.setCharAt(6, 'J');
    assertEquals("Hello World", strBuilder.toString());
}"#
        }
        // One parenthesis too many: syntactically invalid.
        "append" => {
            r#"@Test
public void testAppend() {
    StrBuilder strBuilder = new StrBuilder("ab");
    strBuilder.append("cd");
    assertEquals("abcd", strBuilder.toString()();
}"#
        }
        "greet" => {
            r#"@Test
public void testGreet() {
    Greeter greeter = new Greeter();
    assertEquals("Hello, World!", greeter.greet("World"));
}"#
        }
        // Compiles, dereferences the null miss result at run time.
        "find" => {
            r#"@Test
public void testFind() {
    Greeter greeter = new Greeter();
    String value = greeter.find("missing");
    assertEquals(5, value.length());
}"#
        }
        // Hallucinated method name: does not compile.
        "setAttribute" => {
            r#"@Test
public void testSetAttribute() {
    Xml xml = new Xml("config");
    xml.addAttribute("version", "1.0");
    assertTrue(xml.render().contains("version"));
}"#
        }
        other => panic!("no basic reply for {other}"),
    };
    format!("Here is a test method for you:\n```java\n{code}\n```")
}

fn generation_reply(user: &str) -> String {
    let code = match focal_of(user) {
        "sum" => {
            r#"@Test
public void testSum() {
    Calculator calculator = new Calculator();
    int result = calculator.sum(2, 3);
    assertEquals(5, result);
    assertEquals(5, calculator.lastResult());
}"#
        }
        "divide" => {
            r#"@Test
public void testDivide() {
    Calculator calculator = new Calculator();
    assertEquals(5, calculator.divide(10, 2));
    assertEquals(5, calculator.lastResult());
}"#
        }
        // With the intention in hand the oracle is right this time.
        "setCharAt" => {
            r#"@Test
public void testSetCharAt() {
    StrBuilder strBuilder = new StrBuilder("Hello World");
    strBuilder.setCharAt(6, 'J');
    assertEquals("Hello Jorld", strBuilder.toString());
}"#
        }
        "append" => {
            r#"@Test
public void testAppend() {
    StrBuilder strBuilder = new StrBuilder("ab");
    StrBuilder returned = strBuilder.append("cd");
    assertEquals("abcd", strBuilder.toString());
    assertEquals(4, returned.length());
}"#
        }
        "greet" => {
            r#"@Test
public void testGreet() {
    Greeter greeter = new Greeter();
    String greeting = greeter.greet("World");
    assertEquals("Hello, World!", greeting);
}"#
        }
        // The intention describes the null contract, but the test still
        // dereferences a miss.
        "find" => {
            r#"@Test
public void testFind() {
    Greeter greeter = new Greeter();
    assertEquals("Hello", greeter.find("greeting"));
    String farewell = greeter.find("farewell");
    assertEquals(8, farewell.length());
}"#
        }
        // Still the hallucinated member; the refiner gets to fix this one.
        "setAttribute" => {
            r#"@Test
public void testSetAttribute() {
    Xml xml = new Xml("config");
    xml.addAttribute("version", "1.0");
    assertTrue(xml.render().contains("version"));
}"#
        }
        other => panic!("no generation reply for {other}"),
    };
    format!("```java\n{code}\n```")
}

fn refinement_reply(user: &str) -> String {
    if user.contains("addAttribute") {
        let code = r#"@Test
public void testSetAttribute() {
    Xml xml = new Xml("config");
    xml.setAttribute("version", "1.0");
    assertTrue(xml.render().contains("version=\"1.0\""));
}"#;
        return format!(
            "The Xml class declares setAttribute rather than addAttribute. Corrected test:\n```java\n{code}\n```"
        );
    }
    panic!("unexpected refinement prompt:\n{user}");
}

fn main() {
    let project = ProjectRef::discover(fixture_root()).expect("fixture project");
    let report = extract_pairs(&project).expect("extract pairs");
    println!(
        "fixture pairs: {} (unmapped: {})",
        report.pairs.len(),
        report.unmapped.len()
    );

    let path = cassette_path();
    let client = Client::new(
        Cassette::record(&path).expect("open cassette for record"),
        Some(Box::new(Scripted)),
    );
    let toolchain = EmbeddedToolchain::default();
    let index = ClassIndex::build(&project).expect("class index");
    let config = PipelineConfig::default();
    let deps = PipelineDeps {
        client: &client,
        toolchain: &toolchain,
        index: &index,
        config: &config,
    };

    for mode in [PipelineMode::Basic, PipelineMode::Intention, PipelineMode::Full] {
        let results = run_batch(&report.pairs, mode, &deps, 1);
        let compiled = results.iter().filter(|r| r.final_outcome.compiled).count();
        let passed = results.iter().filter(|r| r.final_outcome.passed).count();
        let aborted = results.iter().filter(|r| r.aborted.is_some()).count();
        println!(
            "{:<9} compiled {compiled}/{} passed {passed}/{} aborted {aborted}",
            mode.as_str(),
            results.len(),
            results.len(),
        );
        for r in &results {
            println!(
                "  {:<14} attempts={} syntactic={} compiled={} passed={}",
                r.pair.focal.method_name,
                r.attempts.len(),
                r.final_outcome.syntactic_ok,
                r.final_outcome.compiled,
                r.final_outcome.passed,
            );
        }
    }
    println!("cassette entries: {}", client.cassette().len());
    println!("wrote {}", path.display());
}
