//! Compiler/runtime output parsing, error taxonomy, and buggy-element
//! resolution.
//!
//! The error-message parser consumes javac-style output (and the maven
//! `[ERROR] file:[line,col]` rewrapping) into structured [`Diagnostic`]s.
//! Categorization maps each diagnostic onto a fixed taxonomy; it is total:
//! anything unrecognized lands in `OtherCompile`/`Runtime` rather than
//! failing.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use javakit::check::ClassTable;
use javakit::parse::parse_java;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::corpus::{ExtractError, ProjectRef};
use crate::validate::RuntimeFailure;

/// One parsed compiler error record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    /// High-level description: the first line of the compiler message.
    pub error_type: String,
    pub file: PathBuf,
    pub line: u32,
    /// Identifier named on the `symbol:` detail line, when present.
    pub symbol: Option<String>,
    /// Full raw record, including detail lines.
    pub raw: String,
    /// False when the record points at a file other than the test file.
    pub in_test_file: bool,
}

/// Compile/runtime error taxonomy.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum ErrorKind {
    SymbolResolution,
    Type,
    Access,
    AbstractInstantiation,
    UnsupportedOperator,
    OtherCompile,
    Assertion,
    Runtime,
}

impl ErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::SymbolResolution => "symbol-resolution",
            ErrorKind::Type => "type",
            ErrorKind::Access => "access",
            ErrorKind::AbstractInstantiation => "abstract-instantiation",
            ErrorKind::UnsupportedOperator => "unsupported-operator",
            ErrorKind::OtherCompile => "other-compile",
            ErrorKind::Assertion => "assertion",
            ErrorKind::Runtime => "runtime",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorCategory {
    pub kind: ErrorKind,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElementKind {
    Class,
    Method,
    Variable,
    Unknown,
}

/// The program element implicated by a diagnostic, used to fetch extra
/// class context for refinement prompts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuggyElement {
    pub identifier: String,
    pub element_kind: ElementKind,
    pub declaring_class_hint: Option<String>,
}

/// Declaration summary of a class referenced by a buggy element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassContext {
    pub class_name: String,
    pub class_declaration: String,
    pub public_method_signatures: Vec<String>,
}

fn javac_header() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^(?P<file>[^\s:][^:]*\.java):(?P<line>\d+):\s*(?P<kind>error|warning):\s*(?P<msg>.*)$")
            .unwrap()
    })
}

fn maven_header() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^\[ERROR\]\s+(?P<file>\S+\.java):\[(?P<line>\d+)(?:,(?P<col>\d+))?\]\s*(?P<msg>.*)$")
            .unwrap()
    })
}

fn trailer() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^\d+\s+errors?$").unwrap())
}

fn symbol_line() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^\s*symbol:\s*(?P<kind>class|method|variable)?\s*(?P<name>[A-Za-z_$][\w$]*)")
            .unwrap()
    })
}

/// Parse raw toolchain output into diagnostics. Records that point at files
/// other than `test_file` are retained but flagged. An output that clearly
/// failed but has no recognizable records yields a single `unparsed`
/// fallback record.
pub fn parse_diagnostics(raw_output: &str, test_file: &Path) -> Vec<Diagnostic> {
    let mut out: Vec<Diagnostic> = Vec::new();
    let mut current: Option<Diagnostic> = None;

    let test_name = test_file.file_name().map(|f| f.to_string_lossy().to_string());

    for line in raw_output.lines() {
        let header = javac_header()
            .captures(line)
            .map(|c| {
                (
                    c["file"].to_string(),
                    c["line"].parse::<u32>().unwrap_or(1),
                    c["msg"].to_string(),
                    &c["kind"] == "warning",
                )
            })
            .or_else(|| {
                maven_header().captures(line).map(|c| {
                    (
                        c["file"].to_string(),
                        c["line"].parse::<u32>().unwrap_or(1),
                        c["msg"].to_string(),
                        false,
                    )
                })
            });

        if let Some((file, lineno, msg, is_warning)) = header {
            if let Some(d) = current.take() {
                out.push(d);
            }
            if is_warning {
                continue;
            }
            let file = PathBuf::from(file);
            let in_test_file = file == test_file
                || test_name
                    .as_deref()
                    .is_some_and(|n| file.file_name().is_some_and(|f| f == n));
            current = Some(Diagnostic {
                error_type: msg.trim().trim_end_matches(';').to_string(),
                file,
                line: lineno,
                symbol: None,
                raw: line.to_string(),
                in_test_file,
            });
            continue;
        }
        if trailer().is_match(line.trim()) {
            if let Some(d) = current.take() {
                out.push(d);
            }
            continue;
        }
        if let Some(d) = current.as_mut() {
            d.raw.push('\n');
            d.raw.push_str(line);
            if d.symbol.is_none() {
                if let Some(c) = symbol_line().captures(line) {
                    d.symbol = Some(c["name"].to_string());
                }
            }
        }
    }
    if let Some(d) = current.take() {
        out.push(d);
    }

    if out.is_empty() {
        let trimmed = raw_output.trim();
        if !trimmed.is_empty() && trimmed.to_lowercase().contains("error") {
            out.push(Diagnostic {
                error_type: "unparsed".to_string(),
                file: test_file.to_path_buf(),
                line: 1,
                symbol: None,
                raw: raw_output.to_string(),
                in_test_file: true,
            });
        }
    }
    out
}

/// Map a compile diagnostic onto the taxonomy. Total: unmatched messages
/// become `OtherCompile`.
pub fn categorize_compile(d: &Diagnostic) -> ErrorCategory {
    let msg = d.error_type.as_str();
    if msg.starts_with("cannot find symbol") {
        let detail = if let Some(c) = symbol_kind_of(d) {
            format!("cannot find symbol {c}")
        } else {
            "cannot find symbol".to_string()
        };
        return ErrorCategory {
            kind: ErrorKind::SymbolResolution,
            detail,
        };
    }
    if msg.starts_with("incompatible types")
        || msg.contains("cannot be applied to given types")
        || msg.contains("incompatible types:")
    {
        return ErrorCategory {
            kind: ErrorKind::Type,
            detail: msg.to_string(),
        };
    }
    if msg.contains("has private access") || msg.contains("is not public in") {
        return ErrorCategory {
            kind: ErrorKind::Access,
            detail: msg.to_string(),
        };
    }
    if msg.contains("is abstract; cannot be instantiated") {
        return ErrorCategory {
            kind: ErrorKind::AbstractInstantiation,
            detail: msg.to_string(),
        };
    }
    if msg.contains("diamond operator is not supported") {
        return ErrorCategory {
            kind: ErrorKind::UnsupportedOperator,
            detail: msg.to_string(),
        };
    }
    ErrorCategory {
        kind: ErrorKind::OtherCompile,
        detail: msg.to_string(),
    }
}

/// The assertion-failure exception families; everything else is a plain
/// runtime error.
pub fn categorize_runtime(f: &RuntimeFailure) -> ErrorCategory {
    const ASSERTION_FAMILIES: &[&str] = &[
        "java.lang.AssertionError",
        "org.opentest4j.AssertionFailedError",
        "org.junit.ComparisonFailure",
        "org.junit.internal.ArrayComparisonFailure",
    ];
    if ASSERTION_FAMILIES.contains(&f.exception_type.as_str()) {
        ErrorCategory {
            kind: ErrorKind::Assertion,
            detail: f.exception_type.clone(),
        }
    } else {
        ErrorCategory {
            kind: ErrorKind::Runtime,
            detail: f.exception_type.clone(),
        }
    }
}

fn symbol_kind_of(d: &Diagnostic) -> Option<&'static str> {
    for line in d.raw.lines() {
        let t = line.trim();
        if let Some(rest) = t.strip_prefix("symbol:") {
            let rest = rest.trim();
            if rest.starts_with("class") {
                return Some("class");
            }
            if rest.starts_with("method") {
                return Some("method");
            }
            if rest.starts_with("variable") {
                return Some("variable");
            }
        }
    }
    None
}

fn location_receiver_type(d: &Diagnostic) -> Option<String> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| {
        Regex::new(r"location:\s*variable\s+[\w$]+\s+of type\s+(?P<ty>[\w$.]+)").unwrap()
    });
    re.captures(&d.raw).map(|c| c["ty"].to_string())
}

/// Identify the class/method/variable implicated by a diagnostic. For
/// member errors the receiver's class is the useful element, since its
/// declaration is what the refinement prompt needs.
pub fn locate_buggy_element(d: &Diagnostic, test_source: &str) -> BuggyElement {
    let msg = d.error_type.as_str();

    // Message shapes that directly name a class.
    static IN_CLASS: OnceLock<Regex> = OnceLock::new();
    let in_class = IN_CLASS.get_or_init(|| {
        Regex::new(r"^(?:method|constructor)\s+[\w$]+\s+in class\s+(?P<c>[\w$.]+)").unwrap()
    });
    if let Some(c) = in_class.captures(msg) {
        let name = c["c"].to_string();
        return BuggyElement {
            identifier: name.clone(),
            element_kind: ElementKind::Class,
            declaring_class_hint: Some(name),
        };
    }
    static PRIVATE: OnceLock<Regex> = OnceLock::new();
    let private = PRIVATE
        .get_or_init(|| Regex::new(r"has private access in\s+(?P<c>[\w$.]+)").unwrap());
    if let Some(c) = private.captures(msg) {
        let name = c["c"].to_string();
        return BuggyElement {
            identifier: name.clone(),
            element_kind: ElementKind::Class,
            declaring_class_hint: Some(name),
        };
    }
    static ABSTRACT: OnceLock<Regex> = OnceLock::new();
    let abstract_re = ABSTRACT.get_or_init(|| {
        Regex::new(r"^(?P<c>[\w$.]+)\s+is abstract; cannot be instantiated").unwrap()
    });
    if let Some(c) = abstract_re.captures(msg) {
        return BuggyElement {
            identifier: c["c"].to_string(),
            element_kind: ElementKind::Class,
            declaring_class_hint: None,
        };
    }

    match symbol_kind_of(d) {
        Some("class") => BuggyElement {
            identifier: d.symbol.clone().unwrap_or_default(),
            element_kind: ElementKind::Class,
            declaring_class_hint: None,
        },
        Some("method") => {
            // Prefer the receiver type from the location line, then from the
            // buggy source line's receiver identifier.
            if let Some(ty) = location_receiver_type(d) {
                return BuggyElement {
                    identifier: ty.clone(),
                    element_kind: ElementKind::Class,
                    declaring_class_hint: Some(ty),
                };
            }
            if let Some(ty) = receiver_type_at_line(d, test_source) {
                return BuggyElement {
                    identifier: ty.clone(),
                    element_kind: ElementKind::Class,
                    declaring_class_hint: Some(ty),
                };
            }
            BuggyElement {
                identifier: d.symbol.clone().unwrap_or_default(),
                element_kind: ElementKind::Method,
                declaring_class_hint: None,
            }
        }
        Some("variable") => BuggyElement {
            identifier: d.symbol.clone().unwrap_or_default(),
            element_kind: ElementKind::Variable,
            declaring_class_hint: location_receiver_type(d),
        },
        _ => BuggyElement {
            identifier: String::new(),
            element_kind: ElementKind::Unknown,
            declaring_class_hint: None,
        },
    }
}

/// Receiver's declared type for `recv.method(...)` on the buggy line,
/// resolved against local declarations in the test source.
fn receiver_type_at_line(d: &Diagnostic, test_source: &str) -> Option<String> {
    let line = test_source.lines().nth(d.line as usize - 1)?;
    let method = d.symbol.as_deref()?;
    let idx = line.find(&format!(".{method}"))?;
    let prefix = &line[..idx];
    let recv: String = prefix
        .chars()
        .rev()
        .take_while(|c| c.is_alphanumeric() || *c == '_' || *c == '$')
        .collect::<String>()
        .chars()
        .rev()
        .collect();
    if recv.is_empty() {
        return None;
    }
    if recv.chars().next().is_some_and(|c| c.is_uppercase()) {
        // Static call: the receiver is already a class name.
        return Some(recv);
    }
    // Scan local declarations for the receiver's declared type.
    let parsed = parse_java(test_source);
    for decl in parsed.unit.all_types() {
        for m in &decl.methods {
            if let Some(body) = &m.body {
                if let Some(ty) = find_local_type(body, &recv) {
                    return Some(javakit::runtime::base_type_name(&ty).to_string());
                }
            }
        }
    }
    None
}

fn find_local_type(body: &[javakit::ast::Stmt], name: &str) -> Option<String> {
    use javakit::ast::Stmt;
    for s in body {
        match s {
            Stmt::Local {
                type_text,
                name: n,
                ..
            } if n == name => return Some(type_text.clone()),
            Stmt::If { then, otherwise, .. } => {
                if let Some(t) = find_local_type(then, name) {
                    return Some(t);
                }
                if let Some(t) = find_local_type(otherwise, name) {
                    return Some(t);
                }
            }
            Stmt::While { body, .. } | Stmt::For { body, .. } => {
                if let Some(t) = find_local_type(body, name) {
                    return Some(t);
                }
            }
            Stmt::Block(inner) => {
                if let Some(t) = find_local_type(inner, name) {
                    return Some(t);
                }
            }
            _ => {}
        }
    }
    None
}

/// Project-wide class index, built once per run and shared read-only.
#[derive(Debug, Clone)]
pub struct ClassIndex {
    table: ClassTable,
}

impl ClassIndex {
    /// Parse every source file under the project's source and test roots.
    pub fn build(project: &ProjectRef) -> Result<ClassIndex, ExtractError> {
        let mut table = ClassTable::new();
        let roots = project
            .source_roots
            .iter()
            .chain(project.test_roots.iter());
        for root in roots {
            let abs = project.abs(root);
            if !abs.is_dir() {
                continue;
            }
            let mut files: Vec<PathBuf> = walkdir::WalkDir::new(&abs)
                .follow_links(false)
                .into_iter()
                .filter_map(|e| e.ok())
                .filter(|e| {
                    e.file_type().is_file() && e.path().extension().is_some_and(|x| x == "java")
                })
                .map(|e| e.path().to_path_buf())
                .collect();
            files.sort();
            for f in files {
                if let Ok(text) = std::fs::read_to_string(&f) {
                    let rel = f.strip_prefix(&project.root_path).unwrap_or(&f);
                    table.add_source(rel, &text);
                }
            }
        }
        Ok(ClassIndex { table })
    }

    /// Build from an already-populated table (used by embedded toolchains).
    pub fn from_table(table: ClassTable) -> ClassIndex {
        ClassIndex { table }
    }

    pub fn table(&self) -> &ClassTable {
        &self.table
    }
}

/// Resolve the class context for a buggy element among project sources.
/// Simple-name matches are refined by the test's import statements; classes
/// outside the project (JDK, third party) yield `None`.
pub fn resolve_class_context(
    element: &BuggyElement,
    index: &ClassIndex,
    test_imports: &[String],
) -> Option<ClassContext> {
    let class_name = match element.element_kind {
        ElementKind::Class => element.identifier.clone(),
        ElementKind::Method | ElementKind::Variable => {
            element.declaring_class_hint.clone()?
        }
        ElementKind::Unknown => return None,
    };
    if class_name.is_empty() {
        return None;
    }
    let simple = javakit::runtime::base_type_name(&class_name)
        .rsplit('.')
        .next()
        .unwrap_or(&class_name)
        .to_string();

    let mut candidates: Vec<&javakit::check::ClassEntry> = index
        .table
        .entries()
        .iter()
        .filter(|e| e.simple_name() == simple)
        .collect();
    if candidates.is_empty() {
        return None;
    }
    if candidates.len() > 1 {
        if let Some(imported) = test_imports.iter().find_map(|imp| {
            let path = imp.trim_end_matches(';').trim();
            candidates
                .iter()
                .find(|c| path.ends_with(&c.qualified))
                .copied()
        }) {
            candidates = vec![imported];
        } else {
            candidates.sort_by(|a, b| a.qualified.cmp(&b.qualified));
        }
    }
    let entry = candidates[0];
    let signatures: Vec<String> = entry
        .decl
        .methods
        .iter()
        .filter(|m| m.modifiers.iter().any(|x| x == "public"))
        .map(|m| m.signature_text.clone())
        .collect();
    Some(ClassContext {
        class_name: entry.qualified.clone(),
        class_declaration: entry.decl.declaration.clone(),
        public_method_signatures: signatures,
    })
}

/// Count diagnostics per category occurrence (not per test).
pub fn breakdown(diags: &[Diagnostic]) -> HashMap<ErrorKind, u64> {
    let mut map = HashMap::new();
    for d in diags {
        *map.entry(categorize_compile(d).kind).or_insert(0) += 1;
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;

    const MISSING_METHOD: &str = r#"src/test/java/com/fixture/xml/XmlGeneratedTest.java:9: error: cannot find symbol
        xml.addAttribute("version", "1.0");
           ^
  symbol:   method addAttribute(String,String)
  location: variable xml of type Xml
1 error
"#;

    #[test]
    fn parses_javac_missing_method() {
        let test_file = Path::new("src/test/java/com/fixture/xml/XmlGeneratedTest.java");
        let diags = parse_diagnostics(MISSING_METHOD, test_file);
        assert_eq!(diags.len(), 1);
        let d = &diags[0];
        assert_eq!(d.error_type, "cannot find symbol");
        assert_eq!(d.line, 9);
        assert_eq!(d.symbol.as_deref(), Some("addAttribute"));
        assert!(d.in_test_file);
        assert!(d.raw.contains("symbol:"));
    }

    #[test]
    fn empty_output_is_empty() {
        assert!(parse_diagnostics("", Path::new("T.java")).is_empty());
    }

    #[test]
    fn two_errors_in_order() {
        let raw = "T.java:3: error: cannot find symbol\n  symbol:   class Foo\nT.java:9: error: incompatible types: String cannot be converted to int\n2 errors\n";
        let diags = parse_diagnostics(raw, Path::new("T.java"));
        assert_eq!(diags.len(), 2);
        assert_eq!(diags[0].line, 3);
        assert_eq!(diags[1].line, 9);
        assert!(diags[1].error_type.starts_with("incompatible types"));
    }

    #[test]
    fn maven_format_accepted() {
        let raw = "[ERROR] /work/src/test/java/FooTest.java:[12,8] cannot find symbol\n";
        let diags = parse_diagnostics(raw, Path::new("src/test/java/FooTest.java"));
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].line, 12);
        assert!(diags[0].in_test_file, "matched by file name");
    }

    #[test]
    fn unparsed_fallback() {
        let raw = "FATAL ERROR: compiler wedged\n";
        let diags = parse_diagnostics(raw, Path::new("T.java"));
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].error_type, "unparsed");
        assert_eq!(diags[0].raw, raw);
    }

    #[test]
    fn foreign_file_flagged() {
        let raw = "src/main/java/Other.java:4: error: cannot find symbol\n1 error\n";
        let diags = parse_diagnostics(raw, Path::new("src/test/java/TTest.java"));
        assert!(!diags[0].in_test_file);
    }

    fn diag(error_type: &str, raw_extra: &str) -> Diagnostic {
        Diagnostic {
            error_type: error_type.to_string(),
            file: PathBuf::from("T.java"),
            line: 5,
            symbol: None,
            raw: format!("T.java:5: error: {error_type}\n{raw_extra}"),
            in_test_file: true,
        }
    }

    #[test]
    fn categorize_table_rows() {
        let cases: Vec<(Diagnostic, ErrorKind)> = vec![
            (diag("cannot find symbol", "  symbol:   class Xml"), ErrorKind::SymbolResolution),
            (diag("cannot find symbol", "  symbol:   method addAttribute(String,String)"), ErrorKind::SymbolResolution),
            (diag("cannot find symbol", "  symbol:   variable v"), ErrorKind::SymbolResolution),
            (diag("incompatible types: String cannot be converted to int", ""), ErrorKind::Type),
            (diag("constructor Xml in class Xml cannot be applied to given types", ""), ErrorKind::Type),
            (diag("method sum in class Calc cannot be applied to given types", ""), ErrorKind::Type),
            (diag("value has private access in StrBuilder", ""), ErrorKind::Access),
            (diag("Shape is abstract; cannot be instantiated", ""), ErrorKind::AbstractInstantiation),
            (diag("diamond operator is not supported in -source 1.6", ""), ErrorKind::UnsupportedOperator),
            (diag("';' expected", ""), ErrorKind::OtherCompile),
        ];
        for (d, want) in cases {
            assert_eq!(categorize_compile(&d).kind, want, "for {:?}", d.error_type);
        }
    }

    #[test]
    fn runtime_taxonomy() {
        let assertion = [
            "java.lang.AssertionError",
            "org.opentest4j.AssertionFailedError",
            "org.junit.ComparisonFailure",
            "org.junit.internal.ArrayComparisonFailure",
        ];
        for fqn in assertion {
            let f = RuntimeFailure {
                exception_type: fqn.to_string(),
                message: None,
                failing_line: None,
            };
            assert_eq!(categorize_runtime(&f).kind, ErrorKind::Assertion);
        }
        for fqn in [
            "java.lang.NullPointerException",
            "java.lang.IllegalArgumentException",
            "java.lang.RuntimeException",
            "com.example.CustomError",
        ] {
            let f = RuntimeFailure {
                exception_type: fqn.to_string(),
                message: None,
                failing_line: None,
            };
            let cat = categorize_runtime(&f);
            assert_eq!(cat.kind, ErrorKind::Runtime);
            assert_eq!(cat.detail, fqn);
        }
    }

    #[test]
    fn buggy_element_from_method_location() {
        let test_file = Path::new("src/test/java/com/fixture/xml/XmlGeneratedTest.java");
        let d = &parse_diagnostics(MISSING_METHOD, test_file)[0];
        let e = locate_buggy_element(d, "");
        assert_eq!(e.identifier, "Xml");
        assert_eq!(e.element_kind, ElementKind::Class);
    }

    #[test]
    fn buggy_element_variable() {
        let raw = "T.java:4: error: cannot find symbol\n        v.toString();\n        ^\n  symbol:   variable v\n  location: class T\n1 error\n";
        let d = &parse_diagnostics(raw, Path::new("T.java"))[0];
        let e = locate_buggy_element(d, "");
        assert_eq!(e.identifier, "v");
        assert_eq!(e.element_kind, ElementKind::Variable);
    }

    #[test]
    fn buggy_element_unknown_for_unparsed() {
        let d = Diagnostic {
            error_type: "unparsed".into(),
            file: PathBuf::from("T.java"),
            line: 1,
            symbol: None,
            raw: "garbage".into(),
            in_test_file: true,
        };
        let e = locate_buggy_element(&d, "");
        assert_eq!(e.element_kind, ElementKind::Unknown);
    }

    #[test]
    fn receiver_type_found_from_source_when_no_location() {
        let raw = "T.java:3: error: cannot find symbol\n  symbol:   method addAttribute(String,String)\n1 error\n";
        let d = &parse_diagnostics(raw, Path::new("T.java"))[0];
        let src = "class T {\n  void m() {\n    Xml xml = new Xml(\"r\"); xml.addAttribute(\"a\", \"b\");\n  }\n}\n";
        // line 3 holds both the declaration and the call
        let e = locate_buggy_element(d, src);
        assert_eq!(e.identifier, "Xml");
        assert_eq!(e.element_kind, ElementKind::Class);
    }
}
