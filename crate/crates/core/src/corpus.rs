//! Test-to-focal-method pairing and focal context extraction.
//!
//! Scans a project tree for annotated test methods, maps each test to its
//! focal method by mirroring the file path and stripping test naming
//! affixes, disambiguates overloads by the call shapes visible in the test
//! body, and extracts the code context that prompts are built from.

use std::fmt;
use std::path::{Path, PathBuf};

use javakit::ast::{call_sites, ArgShape};
use javakit::parse::parse_java;
use javakit::{MethodDecl, TypeDecl};
use serde::{Deserialize, Serialize};

use crate::par;

#[derive(Debug, thiserror::Error)]
pub enum ExtractError {
    #[error("project root {0} is not a readable directory")]
    BadRoot(PathBuf),
    #[error("project has no {0} roots")]
    MissingRoots(&'static str),
    #[error("source and test roots overlap: {0}")]
    OverlappingRoots(PathBuf),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {details}")]
    Unparseable { path: PathBuf, details: String },
    #[error("focal class {class} not found in {path}")]
    ClassNotFound { class: String, path: PathBuf },
    #[error("focal method {method} not found in class {class}")]
    MethodNotFound { method: String, class: String },
}

/// Which toolchain family drives compilation for the project.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuildSystem {
    MavenLike,
    PlainCompiler,
}

/// A project under test. All contained paths are relative to `root_path`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectRef {
    pub root_path: PathBuf,
    pub build_system: BuildSystem,
    pub source_roots: Vec<PathBuf>,
    pub test_roots: Vec<PathBuf>,
}

impl ProjectRef {
    /// Discover a project's layout: maven-style when `pom.xml` and the
    /// conventional roots exist, otherwise `src`/`test` directories.
    pub fn discover(root: impl Into<PathBuf>) -> Result<ProjectRef, ExtractError> {
        let root: PathBuf = root.into();
        if !root.is_dir() {
            return Err(ExtractError::BadRoot(root));
        }
        let has = |p: &str| root.join(p).is_dir();
        let (build_system, source_roots, test_roots) = if root.join("pom.xml").is_file()
            && has("src/main/java")
            && has("src/test/java")
        {
            (
                BuildSystem::MavenLike,
                vec![PathBuf::from("src/main/java")],
                vec![PathBuf::from("src/test/java")],
            )
        } else if has("src/main/java") && has("src/test/java") {
            (
                BuildSystem::PlainCompiler,
                vec![PathBuf::from("src/main/java")],
                vec![PathBuf::from("src/test/java")],
            )
        } else if has("src") && has("test") {
            (
                BuildSystem::PlainCompiler,
                vec![PathBuf::from("src")],
                vec![PathBuf::from("test")],
            )
        } else {
            return Err(ExtractError::MissingRoots("source/test"));
        };
        let p = ProjectRef {
            root_path: root,
            build_system,
            source_roots,
            test_roots,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ExtractError> {
        if !self.root_path.is_dir() {
            return Err(ExtractError::BadRoot(self.root_path.clone()));
        }
        if self.source_roots.is_empty() {
            return Err(ExtractError::MissingRoots("source"));
        }
        if self.test_roots.is_empty() {
            return Err(ExtractError::MissingRoots("test"));
        }
        for s in &self.source_roots {
            for t in &self.test_roots {
                if s.starts_with(t) || t.starts_with(s) {
                    return Err(ExtractError::OverlappingRoots(s.clone()));
                }
            }
        }
        Ok(())
    }

    /// Absolute path for a project-relative path.
    pub fn abs(&self, rel: &Path) -> PathBuf {
        self.root_path.join(rel)
    }

    /// The test root a path lives under, with the remainder.
    fn split_under_test_root<'a>(&self, rel: &'a Path) -> Option<(&PathBuf, &'a Path)> {
        self.test_roots
            .iter()
            .find_map(|r| rel.strip_prefix(r).ok().map(|rest| (r, rest)))
    }

    /// Unit-test framework version from the build manifest; "JUnit 4" when
    /// the manifest declares nothing recognizable.
    pub fn framework_version(&self) -> String {
        for manifest in ["pom.xml", "build.gradle", "build.gradle.kts"] {
            let p = self.root_path.join(manifest);
            if let Ok(text) = std::fs::read_to_string(&p) {
                if text.contains("junit-jupiter") || text.contains("org.junit.jupiter") {
                    return "JUnit 5".to_string();
                }
                if text.contains("junit") {
                    return "JUnit 4".to_string();
                }
            }
        }
        "JUnit 4".to_string()
    }
}

/// A method located in a source file. `file_path` is project-relative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodRef {
    pub file_path: PathBuf,
    /// Dot-joined nesting path for nested classes, e.g. `Outer.Inner`.
    pub class_name: String,
    pub method_name: String,
    pub param_count: usize,
    pub param_types: Vec<String>,
    pub start_line: u32,
    pub end_line: u32,
}

impl MethodRef {
    fn from_decl(file_path: PathBuf, class: &TypeDecl, m: &MethodDecl) -> MethodRef {
        MethodRef {
            file_path,
            class_name: class.nested_name.clone(),
            method_name: m.name.clone(),
            param_count: m.params.len(),
            param_types: m.params.iter().map(|p| p.type_text.clone()).collect(),
            start_line: m.start_line,
            end_line: m.end_line,
        }
    }
}

/// One extracted focal/test pairing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataPair {
    pub focal: MethodRef,
    pub test: MethodRef,
    pub project: ProjectRef,
}

/// Code context handed to prompt builders.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FocalContext {
    pub focal_method_source: String,
    pub focal_class_name: String,
    pub class_declaration: String,
    pub fields_decls: Vec<String>,
    pub method_signatures: Vec<String>,
    pub framework_version: String,
}

/// Why a discovered test produced no pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapFailure {
    NoTestPrefix,
    NoCandidateClass,
    NoCandidateMethod,
    AmbiguousOverload,
}

impl fmt::Display for MapFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MapFailure::NoTestPrefix => "test method name has no 'test' prefix",
            MapFailure::NoCandidateClass => "no mirrored focal class",
            MapFailure::NoCandidateMethod => "no method matches the stripped name",
            MapFailure::AmbiguousOverload => "overloads remain ambiguous",
        };
        f.write_str(s)
    }
}

/// A file that could not be scanned.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileSkip {
    pub path: PathBuf,
    pub reason: String,
}

/// Result of scanning a project's test roots.
#[derive(Debug, Clone, Default)]
pub struct TestScan {
    pub methods: Vec<MethodRef>,
    pub skips: Vec<FileSkip>,
}

/// Full extraction report.
#[derive(Debug, Clone, Default)]
pub struct ExtractReport {
    pub pairs: Vec<DataPair>,
    pub unmapped: Vec<(MethodRef, MapFailure)>,
    pub file_skips: Vec<FileSkip>,
}

/// Test annotations that mark a method as a test case.
const TEST_ANNOTATIONS: &[&str] = &["Test", "ParameterizedTest"];

/// Scan the project's test roots for annotated test methods. Discovery order
/// is deterministic: lexicographic by project-relative path, then by line.
pub fn scan_test_classes(project: &ProjectRef) -> Result<TestScan, ExtractError> {
    project.validate()?;
    let mut files: Vec<PathBuf> = Vec::new();
    for root in &project.test_roots {
        let abs = project.abs(root);
        if !abs.is_dir() {
            continue;
        }
        for entry in walkdir::WalkDir::new(&abs).follow_links(false) {
            let entry = entry.map_err(|e| ExtractError::Io {
                path: abs.clone(),
                source: e.into(),
            })?;
            if entry.file_type().is_file()
                && entry.path().extension().is_some_and(|x| x == "java")
            {
                let rel = entry
                    .path()
                    .strip_prefix(&project.root_path)
                    .unwrap_or(entry.path())
                    .to_path_buf();
                files.push(rel);
            }
        }
    }
    files.sort();

    let parses = par::map_ordered(files, |rel| {
        let abs = project.abs(&rel);
        let text = std::fs::read_to_string(&abs);
        (rel, text.map(|t| parse_java(&t)))
    });

    let mut scan = TestScan::default();
    for (rel, parsed) in parses {
        match parsed {
            Err(e) => scan.skips.push(FileSkip {
                path: rel,
                reason: format!("unreadable: {e}"),
            }),
            Ok(parsed) => {
                if !parsed.is_valid() {
                    scan.skips.push(FileSkip {
                        path: rel,
                        reason: format!(
                            "syntax error at line {}",
                            parsed.syntax_errors.first().map(|e| e.line).unwrap_or(0)
                        ),
                    });
                    continue;
                }
                let mut found: Vec<MethodRef> = Vec::new();
                for decl in parsed.unit.all_types() {
                    for m in &decl.methods {
                        if !m.is_constructor
                            && TEST_ANNOTATIONS.iter().any(|a| m.has_annotation(a))
                        {
                            found.push(MethodRef::from_decl(rel.clone(), decl, m));
                        }
                    }
                }
                found.sort_by_key(|m| m.start_line);
                scan.methods.extend(found);
            }
        }
    }
    Ok(scan)
}

/// Strip the case-insensitive `test` prefix from a test method name. The
/// camel-case hump that follows the prefix is decapitalized when matching,
/// since stripping a prefix re-exposes it (`testSetCharAt` -> `setCharAt`).
pub fn strip_test_prefix(name: &str) -> Option<String> {
    let rest = name
        .strip_prefix("test")
        .or_else(|| name.strip_prefix("Test"))
        .or_else(|| name.strip_prefix("TEST"))?;
    let rest = rest.strip_prefix('_').unwrap_or(rest);
    if rest.is_empty() {
        return None;
    }
    Some(rest.to_string())
}

fn decapitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_lowercase().collect::<String>() + chars.as_str(),
        None => String::new(),
    }
}

fn name_matches(stripped: &str, method: &str) -> bool {
    stripped == method || decapitalize(stripped) == method
}

/// All focal-method candidates for a test, applying the path/name mirror
/// rule. Candidates share a class and method name (overloads).
pub fn focal_candidates(test: &MethodRef, project: &ProjectRef) -> Vec<MethodRef> {
    let stripped = match strip_test_prefix(&test.method_name) {
        Some(s) => s,
        None => return Vec::new(),
    };
    let (_, under) = match project.split_under_test_root(&test.file_path) {
        Some(x) => x,
        None => return Vec::new(),
    };
    let file_stem = match under.file_stem().and_then(|s| s.to_str()) {
        Some(s) => s,
        None => return Vec::new(),
    };
    let focal_stem = file_stem.strip_suffix("Test").unwrap_or(file_stem);
    let mirrored_rel = under.with_file_name(format!("{focal_stem}.java"));

    let mut out = Vec::new();
    for source_root in &project.source_roots {
        let rel = source_root.join(&mirrored_rel);
        let abs = project.abs(&rel);
        let Ok(text) = std::fs::read_to_string(&abs) else {
            continue;
        };
        let parsed = parse_java(&text);
        if !parsed.is_valid() {
            continue;
        }
        for decl in parsed.unit.all_types() {
            if decl.name != focal_stem {
                continue;
            }
            for m in &decl.methods {
                if !m.is_constructor && name_matches(&stripped, &m.name) {
                    out.push(MethodRef::from_decl(rel.clone(), decl, m));
                }
            }
        }
        if !out.is_empty() {
            break;
        }
    }
    out
}

/// Map a test method to its focal method, or `None` when the mirror rule
/// yields no unique match.
pub fn map_test_to_focal(test: &MethodRef, project: &ProjectRef) -> Option<MethodRef> {
    let candidates = focal_candidates(test, project);
    match candidates.len() {
        0 => None,
        1 => Some(candidates.into_iter().next().unwrap()),
        _ => disambiguate_overloads(&candidates, test, project),
    }
}

/// Classify why mapping failed, for extraction notes.
fn map_failure(test: &MethodRef, project: &ProjectRef) -> MapFailure {
    if strip_test_prefix(&test.method_name).is_none() {
        return MapFailure::NoTestPrefix;
    }
    let candidates = focal_candidates(test, project);
    match candidates.len() {
        0 => {
            // Distinguish a missing class from a missing method.
            if mirrored_class_exists(test, project) {
                MapFailure::NoCandidateMethod
            } else {
                MapFailure::NoCandidateClass
            }
        }
        1 => MapFailure::NoCandidateMethod, // unreachable from extract flow
        _ => MapFailure::AmbiguousOverload,
    }
}

fn mirrored_class_exists(test: &MethodRef, project: &ProjectRef) -> bool {
    let Some((_, under)) = project.split_under_test_root(&test.file_path) else {
        return false;
    };
    let Some(stem) = under.file_stem().and_then(|s| s.to_str()) else {
        return false;
    };
    let focal_stem = stem.strip_suffix("Test").unwrap_or(stem);
    let mirrored = under.with_file_name(format!("{focal_stem}.java"));
    project
        .source_roots
        .iter()
        .any(|r| project.abs(&r.join(&mirrored)).is_file())
}

/// Shape-vs-declared-type compatibility for overload filtering. Only
/// literal and constructor-visible types participate; anything opaque
/// matches nothing and anything unknown-typed keeps the candidate alive.
fn shape_compatible(shape: &ArgShape, declared: &str) -> Option<bool> {
    let base = javakit::runtime::base_type_name(declared);
    Some(match shape {
        ArgShape::Int => matches!(base, "int" | "long" | "short" | "byte"),
        ArgShape::Double => matches!(base, "double" | "float"),
        ArgShape::Boolean => base == "boolean",
        ArgShape::Char => base == "char",
        ArgShape::Str => matches!(base, "String" | "CharSequence" | "Object"),
        ArgShape::Null => !matches!(
            base,
            "int" | "long" | "short" | "byte" | "double" | "float" | "boolean" | "char"
        ),
        ArgShape::New(c) => javakit::runtime::base_type_name(c) == base || base == "Object",
        ArgShape::Typed(t) => {
            let t = javakit::runtime::base_type_name(t);
            t == base || base == "Object"
        }
        ArgShape::Opaque => return None,
    })
}

/// Filter same-named overload candidates by the call shapes in the test
/// body. Returns the unique survivor; `None` when zero or several survive.
pub fn disambiguate_overloads(
    candidates: &[MethodRef],
    test: &MethodRef,
    project: &ProjectRef,
) -> Option<MethodRef> {
    if candidates.is_empty() {
        return None;
    }
    if candidates.len() == 1 {
        return Some(candidates[0].clone());
    }
    let method_name = &candidates[0].method_name;

    let text = std::fs::read_to_string(project.abs(&test.file_path)).ok()?;
    let parsed = parse_java(&text);
    let mut calls = Vec::new();
    for decl in parsed.unit.all_types() {
        if decl.nested_name != test.class_name {
            continue;
        }
        for m in &decl.methods {
            if m.name == test.method_name && m.start_line == test.start_line {
                if let Some(body) = &m.body {
                    calls = call_sites(body);
                }
            }
        }
    }
    let relevant: Vec<_> = calls.iter().filter(|c| &c.name == method_name).collect();
    if relevant.is_empty() {
        return None;
    }

    let survivors: Vec<&MethodRef> = candidates
        .iter()
        .filter(|cand| {
            relevant.iter().any(|call| {
                call.args.len() == cand.param_count
                    && call
                        .args
                        .iter()
                        .zip(&cand.param_types)
                        .all(|(shape, declared)| shape_compatible(shape, declared) != Some(false))
                    && call
                        .args
                        .iter()
                        .zip(&cand.param_types)
                        .any(|(shape, declared)| shape_compatible(shape, declared) == Some(true))
                    || (call.args.len() == cand.param_count && cand.param_count == 0)
            })
        })
        .collect();

    // A candidate whose arity is matched by a call with only opaque shapes
    // survives on arity alone; drop the pair when several still stand.
    let survivors = if survivors.is_empty() {
        candidates
            .iter()
            .filter(|cand| relevant.iter().any(|c| c.args.len() == cand.param_count))
            .collect::<Vec<_>>()
    } else {
        survivors
    };

    match survivors.len() {
        1 => Some(survivors[0].clone()),
        _ => None,
    }
}

/// Extract the prompt-facing code context for a focal method.
pub fn extract_focal_context(
    focal: &MethodRef,
    project: &ProjectRef,
) -> Result<FocalContext, ExtractError> {
    let abs = project.abs(&focal.file_path);
    let text = std::fs::read_to_string(&abs).map_err(|e| ExtractError::Io {
        path: abs.clone(),
        source: e,
    })?;
    let parsed = parse_java(&text);
    if !parsed.is_valid() {
        return Err(ExtractError::Unparseable {
            path: focal.file_path.clone(),
            details: parsed
                .syntax_errors
                .first()
                .map(|e| format!("line {}: {}", e.line, e.message))
                .unwrap_or_else(|| "syntax error".to_string()),
        });
    }
    let decl = parsed
        .unit
        .all_types()
        .into_iter()
        .find(|t| t.nested_name == focal.class_name)
        .cloned()
        .ok_or_else(|| ExtractError::ClassNotFound {
            class: focal.class_name.clone(),
            path: focal.file_path.clone(),
        })?;
    let method = decl
        .methods
        .iter()
        .find(|m| {
            m.name == focal.method_name
                && m.params.len() == focal.param_count
                && m.start_line == focal.start_line
        })
        .or_else(|| {
            decl.methods
                .iter()
                .find(|m| m.name == focal.method_name && m.params.len() == focal.param_count)
        })
        .ok_or_else(|| ExtractError::MethodNotFound {
            method: focal.method_name.clone(),
            class: focal.class_name.clone(),
        })?;

    let lines: Vec<&str> = text.lines().collect();
    let lo = (method.start_line as usize).saturating_sub(1);
    let hi = (method.end_line as usize).min(lines.len());
    let focal_method_source = dedent_block(&lines[lo..hi]);

    let mut fields_decls = Vec::new();
    for f in &decl.fields {
        if fields_decls.last() != Some(&f.text) {
            fields_decls.push(f.text.clone());
        }
    }

    let mut method_signatures: Vec<String> = decl
        .methods
        .iter()
        .filter(|m| m.is_constructor || !m.is_static())
        .map(|m| m.signature_text.clone())
        .collect();
    if method.is_static() && !method_signatures.contains(&method.signature_text) {
        method_signatures.push(method.signature_text.clone());
    }

    Ok(FocalContext {
        focal_method_source,
        focal_class_name: decl.name.clone(),
        class_declaration: decl.declaration.clone(),
        fields_decls,
        method_signatures,
        framework_version: project.framework_version(),
    })
}

/// Dedent a snippet of lines for re-wrapping inside a generated class.
pub fn dedent_for_wrap(lines: &[&str]) -> String {
    // Trim leading/trailing blank lines first.
    let start = lines.iter().position(|l| !l.trim().is_empty()).unwrap_or(0);
    let end = lines
        .iter()
        .rposition(|l| !l.trim().is_empty())
        .map(|i| i + 1)
        .unwrap_or(lines.len());
    dedent_block(&lines[start..end])
}

/// Strip the common leading indentation of a method body slice.
fn dedent_block(lines: &[&str]) -> String {
    let indent = lines
        .iter()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.len() - l.trim_start().len())
        .min()
        .unwrap_or(0);
    lines
        .iter()
        .map(|l| if l.len() >= indent { &l[indent..] } else { l.trim_start() })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Run the full extraction over a project.
pub fn extract_pairs(project: &ProjectRef) -> Result<ExtractReport, ExtractError> {
    let scan = scan_test_classes(project)?;
    let mut report = ExtractReport {
        file_skips: scan.skips,
        ..Default::default()
    };
    for test in scan.methods {
        match map_test_to_focal(&test, project) {
            Some(focal) => report.pairs.push(DataPair {
                focal,
                test,
                project: project.clone(),
            }),
            None => {
                let why = map_failure(&test, project);
                report.unmapped.push((test, why));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn write(root: &Path, rel: &str, content: &str) {
        let p = root.join(rel);
        fs::create_dir_all(p.parent().unwrap()).unwrap();
        fs::write(p, content).unwrap();
    }

    fn fixture_project(root: &Path) -> ProjectRef {
        write(
            root,
            "pom.xml",
            r#"<project><dependencies><dependency><groupId>junit</groupId><artifactId>junit</artifactId><version>4.13.2</version></dependency></dependencies></project>"#,
        );
        write(
            root,
            "src/main/java/com/fix/Calc.java",
            r#"package com.fix;

public class Calc {
    private int lastResult;

    public Calc() {
        lastResult = 0;
    }

    public int sum(int a, int b) {
        lastResult = a + b;
        return lastResult;
    }

    public int sum(int a, int b, int c) {
        return a + b + c;
    }

    public String pad(String s) {
        return " " + s;
    }

    public String pad(int n) {
        return "" + n;
    }
}
"#,
        );
        write(
            root,
            "src/test/java/com/fix/CalcTest.java",
            r#"package com.fix;

import org.junit.Test;
import static org.junit.Assert.*;

public class CalcTest {
    @Test
    public void testSum() {
        Calc c = new Calc();
        assertEquals(5, c.sum(2, 3));
    }

    @Test
    public void testPad() {
        Calc c = new Calc();
        assertNotNull(c.pad(helper()));
    }

    @Test
    public void testCube() {
        Calc c = new Calc();
        assertEquals(8, c.sum(2, 2, 4));
    }

    @Test
    public void shouldDoNothing() {
        assertTrue(true);
    }

    private String helper() {
        return "x";
    }
}
"#,
        );
        ProjectRef::discover(root).unwrap()
    }

    #[test]
    fn scan_finds_annotated_tests_in_order() {
        let dir = tempfile::tempdir().unwrap();
        let project = fixture_project(dir.path());
        let scan = scan_test_classes(&project).unwrap();
        let names: Vec<_> = scan.methods.iter().map(|m| m.method_name.as_str()).collect();
        assert_eq!(names, vec!["testSum", "testPad", "testCube", "shouldDoNothing"]);
        assert!(scan.skips.is_empty());
        // helper() is not annotated
        assert!(!names.contains(&"helper"));
    }

    #[test]
    fn scan_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let project = fixture_project(dir.path());
        let a = scan_test_classes(&project).unwrap();
        let b = scan_test_classes(&project).unwrap();
        assert_eq!(a.methods, b.methods);
    }

    #[test]
    fn nested_class_tests_use_qualified_name() {
        let dir = tempfile::tempdir().unwrap();
        let project = fixture_project(dir.path());
        write(
            dir.path(),
            "src/test/java/com/fix/OuterTest.java",
            r#"package com.fix;
import org.junit.Test;
public class OuterTest {
    public static class InnerTest {
        @Test
        public void testThing() { }
    }
}
"#,
        );
        let scan = scan_test_classes(&project).unwrap();
        let inner = scan
            .methods
            .iter()
            .find(|m| m.method_name == "testThing")
            .unwrap();
        assert_eq!(inner.class_name, "OuterTest.InnerTest");
    }

    #[test]
    fn maps_paper_example_shape() {
        let dir = tempfile::tempdir().unwrap();
        let project = fixture_project(dir.path());
        let scan = scan_test_classes(&project).unwrap();
        let test_sum = scan
            .methods
            .iter()
            .find(|m| m.method_name == "testSum")
            .unwrap();
        let focal = map_test_to_focal(test_sum, &project).expect("mapped");
        assert_eq!(focal.method_name, "sum");
        assert_eq!(focal.param_count, 2);
        assert_eq!(focal.file_path, PathBuf::from("src/main/java/com/fix/Calc.java"));
    }

    #[test]
    fn ambiguous_overload_dropped() {
        let dir = tempfile::tempdir().unwrap();
        let project = fixture_project(dir.path());
        let scan = scan_test_classes(&project).unwrap();
        let test_pad = scan
            .methods
            .iter()
            .find(|m| m.method_name == "testPad")
            .unwrap();
        assert_eq!(map_test_to_focal(test_pad, &project), None);
    }

    #[test]
    fn unknown_method_and_prefixless_test_unmapped() {
        let dir = tempfile::tempdir().unwrap();
        let project = fixture_project(dir.path());
        let report = extract_pairs(&project).unwrap();
        let unmapped: Vec<_> = report
            .unmapped
            .iter()
            .map(|(m, why)| (m.method_name.as_str(), why.clone()))
            .collect();
        assert!(unmapped.contains(&("testCube", MapFailure::NoCandidateMethod)));
        assert!(unmapped.contains(&("shouldDoNothing", MapFailure::NoTestPrefix)));
        assert!(unmapped.contains(&("testPad", MapFailure::AmbiguousOverload)));
        // Only testSum maps.
        assert_eq!(report.pairs.len(), 1);
        assert_eq!(report.pairs[0].focal.method_name, "sum");
    }

    #[test]
    fn mapping_roundtrip_holds() {
        let dir = tempfile::tempdir().unwrap();
        let project = fixture_project(dir.path());
        let report = extract_pairs(&project).unwrap();
        for pair in &report.pairs {
            let again = map_test_to_focal(&pair.test, &project).expect("roundtrip");
            assert_eq!(again, pair.focal);
        }
    }

    #[test]
    fn focal_context_counts() {
        let dir = tempfile::tempdir().unwrap();
        write(
            dir.path(),
            "src/main/java/com/fix/Thing.java",
            r#"package com.fix;

public final class Thing {
    private int a;
    private String b;

    public Thing(int a) {
        this.a = a;
    }

    public int getA() { return a; }

    public void setB(String b) { this.b = b; }

    public String describe() { return a + ":" + b; }
}
"#,
        );
        write(
            dir.path(),
            "src/test/java/com/fix/ThingTest.java",
            r#"package com.fix;
import org.junit.Test;
public class ThingTest {
    @Test
    public void testDescribe() {
        Thing t = new Thing(1);
        t.describe();
    }
}
"#,
        );
        write(dir.path(), "pom.xml", "<project>junit</project>");
        let project = ProjectRef::discover(dir.path()).unwrap();
        let report = extract_pairs(&project).unwrap();
        let pair = report
            .pairs
            .iter()
            .find(|p| p.focal.method_name == "describe")
            .unwrap();
        let ctx = extract_focal_context(&pair.focal, &project).unwrap();
        // 2 fields, 1 constructor + 3 instance methods = 4 signatures
        assert_eq!(ctx.fields_decls.len(), 2);
        assert_eq!(ctx.method_signatures.len(), 4);
        assert_eq!(ctx.class_declaration, "public final class Thing");
        assert!(ctx.focal_method_source.starts_with("public String describe()"));
        assert!(ctx
            .method_signatures
            .contains(&"public String describe();".to_string()));
        assert_eq!(ctx.framework_version, "JUnit 4");
        // Context completeness: signatures resolve to declared methods.
        for sig in &ctx.method_signatures {
            let parsed = javakit::parse_java(&format!("class X {{ {} }}", sig.replace(';', " {}")));
            assert!(parsed.is_valid(), "signature does not parse: {sig}");
        }
    }

    #[test]
    fn focal_class_without_fields_gives_empty_fields() {
        let dir = tempfile::tempdir().unwrap();
        write(
            dir.path(),
            "src/main/java/com/fix/Util.java",
            "package com.fix;\npublic class Util {\n    public int one() { return 1; }\n}\n",
        );
        write(
            dir.path(),
            "src/test/java/com/fix/UtilTest.java",
            "package com.fix;\nimport org.junit.Test;\npublic class UtilTest {\n    @Test\n    public void testOne() { }\n}\n",
        );
        let project = ProjectRef::discover(dir.path()).unwrap();
        let report = extract_pairs(&project).unwrap();
        let ctx = extract_focal_context(&report.pairs[0].focal, &project).unwrap();
        assert!(ctx.fields_decls.is_empty());
        assert_eq!(ctx.framework_version, "JUnit 4");
    }

    #[test]
    fn empty_test_roots_scan_empty() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir_all(dir.path().join("src/main/java")).unwrap();
        fs::create_dir_all(dir.path().join("src/test/java")).unwrap();
        let project = ProjectRef::discover(dir.path()).unwrap();
        let scan = scan_test_classes(&project).unwrap();
        assert!(scan.methods.is_empty());
    }

    #[test]
    fn unparseable_test_file_recorded_as_skip() {
        let dir = tempfile::tempdir().unwrap();
        let project = fixture_project(dir.path());
        write(
            dir.path(),
            "src/test/java/com/fix/BrokenTest.java",
            "class BrokenTest { void m( { }",
        );
        let scan = scan_test_classes(&project).unwrap();
        assert_eq!(scan.skips.len(), 1);
        assert!(scan.skips[0].path.ends_with("BrokenTest.java"));
    }
}
