//! Golden snapshots of rendered prompts, stored beside the tests.
//!
//! Regenerate after an intentional template change with:
//!
//! ```sh
//! UPDATE_SNAPSHOTS=1 cargo test -p testforge-core --test prompt_snapshots
//! ```

mod common;

use std::path::PathBuf;

use testforge_core::corpus::extract_focal_context;
use testforge_core::diag::{ClassContext, Diagnostic};
use testforge_core::prompt::{
    build_basic_prompt, build_generation_prompt, build_intention_prompt,
    build_refinement_prompt, Intention, IntentionSource, PromptDoc, Role, DEFAULT_TOKEN_BUDGET,
};

fn render(doc: &PromptDoc) -> String {
    let mut out = String::new();
    for m in &doc.messages {
        let role = match m.role {
            Role::System => "system",
            Role::User => "user",
        };
        out.push_str(&format!("--- {role} ---\n{}\n", m.content));
    }
    out
}

fn check_snapshot(name: &str, rendered: &str) {
    let path = common::snapshots_dir().join(name);
    if std::env::var("UPDATE_SNAPSHOTS").is_ok() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, rendered).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing snapshot {} (run with UPDATE_SNAPSHOTS=1)", name));
    assert_eq!(
        rendered, expected,
        "snapshot {name} drifted; regenerate deliberately with UPDATE_SNAPSHOTS=1"
    );
}

fn setcharat_context() -> testforge_core::corpus::FocalContext {
    let (project, report) = common::fixture_extract();
    let pair = common::pair_by_focal(&report.pairs, "setCharAt");
    extract_focal_context(&pair.focal, &project).unwrap()
}

#[test]
fn snapshot_basic_prompt() {
    let ctx = setcharat_context();
    let doc = build_basic_prompt(&ctx, DEFAULT_TOKEN_BUDGET);
    check_snapshot("basic_setcharat.txt", &render(&doc));
}

#[test]
fn snapshot_intention_prompt() {
    let ctx = setcharat_context();
    let doc = build_intention_prompt(&ctx, DEFAULT_TOKEN_BUDGET);
    check_snapshot("intention_setcharat.txt", &render(&doc));
}

#[test]
fn snapshot_generation_prompt() {
    let ctx = setcharat_context();
    let intention = Intention {
        text: "The setCharAt method replaces the character at the given index of the current value with the supplied character, rejecting out-of-range indexes.".to_string(),
        source: IntentionSource::Llm,
    };
    let doc = build_generation_prompt(&ctx, &intention, DEFAULT_TOKEN_BUDGET).unwrap();
    check_snapshot("generation_setcharat.txt", &render(&doc));
}

#[test]
fn snapshot_refinement_prompt() {
    let prev = r#"package com.fixture.xml;

import org.junit.Test;
import static org.junit.Assert.*;

public class XmlGeneratedTest {

    @Test
    public void testSetAttribute() {
        Xml xml = new Xml("config");
        xml.addAttribute("version", "1.0");
        assertTrue(xml.render().contains("version"));
    }
}"#;
    let diag = Diagnostic {
        error_type: "cannot find symbol".to_string(),
        file: PathBuf::from("src/main/java/com/fixture/xml/XmlGeneratedTest.java"),
        line: 11,
        symbol: Some("addAttribute".to_string()),
        raw: "  symbol:   method addAttribute(String,String)\n  location: variable xml of type Xml".to_string(),
        in_test_file: true,
    };
    let context = ClassContext {
        class_name: "com.fixture.xml.Xml".to_string(),
        class_declaration: "public class Xml".to_string(),
        public_method_signatures: vec![
            "public Xml(String name);".to_string(),
            "public void setAttribute(String key, String value);".to_string(),
            "public String render();".to_string(),
        ],
    };
    let doc =
        build_refinement_prompt(prev, &[diag], &[context], DEFAULT_TOKEN_BUDGET).unwrap();
    check_snapshot("refinement_xml.txt", &render(&doc));
}
