//! Test materialization, compile/execute orchestration, and outcome
//! classification.
//!
//! Generated tests are never written into the original project: each attempt
//! gets a scratch copy of the project tree (a [`Workspace`]), the test file
//! goes into the focal class's directory there, and a [`Toolchain`] compiles
//! and runs it. Toolchains are adapters: the embedded one uses the bundled
//! Java front end in process; [`CommandToolchain`] shells out to a real
//! `javac`/`java` or maven installation with timeouts enforced by kill.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use javakit::check::{check_file, ClassTable};
use javakit::interp::{run_test_class, RunLimits};
use javakit::parse::parse_java;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{MethodRef, ProjectRef};
use crate::diag::{parse_diagnostics, Diagnostic};

#[derive(Debug, thiserror::Error)]
pub enum ValidateError {
    #[error("test source is empty")]
    EmptyTestSource,
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to spawn {program}: {source}")]
    Spawn {
        program: String,
        #[source]
        source: std::io::Error,
    },
    #[error("inconsistent classification inputs: {0}")]
    Inconsistent(String),
    #[error("workspace has no test file materialized")]
    NoTestFile,
}

/// A failure observed while executing a compiled test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuntimeFailure {
    /// Fully qualified exception name, e.g. `java.lang.AssertionError`.
    pub exception_type: String,
    pub message: Option<String>,
    pub failing_line: Option<u32>,
}

/// Classified outcome of one generated-test attempt.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeClass {
    pub syntactic_ok: bool,
    pub compiled: bool,
    pub passed: bool,
    pub diagnostics: Vec<Diagnostic>,
    pub runtime_failure: Option<RuntimeFailure>,
}

/// An isolated scratch copy of the project with one materialized test.
#[derive(Debug)]
pub struct Workspace {
    /// Owns the temp dir; dropped with the workspace.
    _scratch: tempfile::TempDir,
    /// Scratch project root (never the original project root).
    pub scratch_root: PathBuf,
    /// Project layout rebased onto the scratch root.
    pub project: ProjectRef,
    /// Directory of the focal class inside the scratch tree (relative).
    pub focal_dir: PathBuf,
    /// Materialized test file, relative to `scratch_root`.
    pub test_file: PathBuf,
    /// Qualified name of the materialized test class.
    pub test_class: String,
}

impl Workspace {
    pub fn test_file_abs(&self) -> PathBuf {
        self.scratch_root.join(&self.test_file)
    }
}

/// Raw output of one toolchain invocation.
#[derive(Debug, Clone, Default)]
pub struct RawToolOutput {
    pub stdout: String,
    pub stderr: String,
    pub status: Option<i32>,
    pub timed_out: bool,
}

impl RawToolOutput {
    pub fn combined(&self) -> String {
        if self.stderr.is_empty() {
            self.stdout.clone()
        } else if self.stdout.is_empty() {
            self.stderr.clone()
        } else {
            format!("{}\n{}", self.stderr, self.stdout)
        }
    }
}

/// Adapter over the project's compiler/build tool and test runner.
pub trait Toolchain: Send + Sync {
    fn name(&self) -> &str;
    fn compile(&self, ws: &Workspace) -> Result<RawToolOutput, ValidateError>;
    fn run_test(&self, ws: &Workspace, class: &str) -> Result<RawToolOutput, ValidateError>;
}

/// In-process toolchain backed by the bundled Java front end. Compilation is
/// a semantic check rendered in javac's format; execution interprets `@Test`
/// methods with fuel and wall-clock bounds.
pub struct EmbeddedToolchain {
    pub exec_timeout: Duration,
    pub fuel: u64,
}

impl Default for EmbeddedToolchain {
    fn default() -> Self {
        EmbeddedToolchain {
            exec_timeout: Duration::from_secs(60),
            fuel: 5_000_000,
        }
    }
}

impl EmbeddedToolchain {
    fn class_table(&self, ws: &Workspace) -> ClassTable {
        let mut table = ClassTable::new();
        let roots = ws
            .project
            .source_roots
            .iter()
            .chain(ws.project.test_roots.iter());
        let mut files: Vec<PathBuf> = Vec::new();
        for root in roots {
            let abs = ws.scratch_root.join(root);
            if !abs.is_dir() {
                continue;
            }
            for entry in walkdir::WalkDir::new(&abs)
                .follow_links(false)
                .into_iter()
                .filter_map(|e| e.ok())
            {
                if entry.file_type().is_file()
                    && entry.path().extension().is_some_and(|x| x == "java")
                {
                    files.push(entry.path().to_path_buf());
                }
            }
        }
        files.sort();
        for f in files {
            if let Ok(text) = std::fs::read_to_string(&f) {
                let rel = f.strip_prefix(&ws.scratch_root).unwrap_or(&f);
                table.add_source(rel, &text);
            }
        }
        table
    }
}

impl Toolchain for EmbeddedToolchain {
    fn name(&self) -> &str {
        "embedded"
    }

    fn compile(&self, ws: &Workspace) -> Result<RawToolOutput, ValidateError> {
        let table = self.class_table(ws);
        let source =
            std::fs::read_to_string(ws.test_file_abs()).map_err(|e| ValidateError::Io {
                path: ws.test_file_abs(),
                source: e,
            })?;
        let report = check_file(&table, &ws.test_file.to_string_lossy(), &source);
        let rendered = report.render_javac(&source);
        Ok(RawToolOutput {
            stdout: String::new(),
            stderr: rendered,
            status: Some(if report.is_ok() { 0 } else { 1 }),
            timed_out: false,
        })
    }

    fn run_test(&self, ws: &Workspace, class: &str) -> Result<RawToolOutput, ValidateError> {
        let table = self.class_table(ws);
        let limits = RunLimits {
            fuel: self.fuel,
            deadline: Some(Instant::now() + self.exec_timeout),
        };
        match run_test_class(&table, class, limits) {
            Ok((report, text)) => Ok(RawToolOutput {
                stdout: text,
                stderr: String::new(),
                status: Some(report.exit_code()),
                timed_out: false,
            }),
            Err(e) => Ok(RawToolOutput {
                stdout: String::new(),
                stderr: format!("{e}"),
                status: Some(2),
                timed_out: false,
            }),
        }
    }
}

/// One placeholder-expanded command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommandSpec {
    pub program: String,
    pub args: Vec<String>,
}

impl CommandSpec {
    pub fn new(program: impl Into<String>, args: &[&str]) -> CommandSpec {
        CommandSpec {
            program: program.into(),
            args: args.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Expand `{test_file}`, `{class}`, `{root}`, `{out_dir}`,
    /// `{sourcepath}`, `{classpath}` placeholders.
    pub fn expand(&self, ws: &Workspace, class: &str) -> Vec<String> {
        let out_dir = ws.scratch_root.join("tf-classes");
        let sourcepath = ws
            .project
            .source_roots
            .iter()
            .chain(ws.project.test_roots.iter())
            .map(|r| ws.scratch_root.join(r).to_string_lossy().to_string())
            .collect::<Vec<_>>()
            .join(":");
        let extra_cp = std::env::var("TESTFORGE_CLASSPATH").unwrap_or_default();
        let classpath = {
            let mut parts = vec![sourcepath.clone(), out_dir.to_string_lossy().to_string()];
            if !extra_cp.is_empty() {
                parts.push(extra_cp);
            }
            parts.join(":")
        };
        self.args
            .iter()
            .map(|a| {
                a.replace("{test_file}", &ws.test_file.to_string_lossy())
                    .replace("{class}", class)
                    .replace("{root}", &ws.scratch_root.to_string_lossy())
                    .replace("{out_dir}", &out_dir.to_string_lossy())
                    .replace("{sourcepath}", &sourcepath)
                    .replace("{classpath}", &classpath)
            })
            .collect()
    }
}

/// Subprocess toolchain with wall-clock timeouts enforced by kill.
pub struct CommandToolchain {
    pub label: String,
    pub compile_cmd: CommandSpec,
    pub run_cmd: CommandSpec,
    pub compile_timeout: Duration,
    pub run_timeout: Duration,
}

impl CommandToolchain {
    /// Plain `javac` + JUnit console runner. Requires a JDK on PATH and
    /// `TESTFORGE_CLASSPATH` pointing at the test framework jars.
    pub fn javac() -> CommandToolchain {
        CommandToolchain {
            label: "javac".to_string(),
            compile_cmd: CommandSpec::new(
                "javac",
                &[
                    "-encoding",
                    "UTF-8",
                    "-d",
                    "{out_dir}",
                    "-cp",
                    "{classpath}",
                    "-sourcepath",
                    "{sourcepath}",
                    "{test_file}",
                ],
            ),
            run_cmd: CommandSpec::new(
                "java",
                &["-cp", "{classpath}", "org.junit.runner.JUnitCore", "{class}"],
            ),
            compile_timeout: Duration::from_secs(120),
            run_timeout: Duration::from_secs(60),
        }
    }

    /// Maven-wrapped compile and single-test run.
    pub fn maven() -> CommandToolchain {
        CommandToolchain {
            label: "maven".to_string(),
            compile_cmd: CommandSpec::new("mvn", &["-q", "-B", "test-compile"]),
            run_cmd: CommandSpec::new("mvn", &["-q", "-B", "-Dtest={class}", "surefire:test"]),
            compile_timeout: Duration::from_secs(120),
            run_timeout: Duration::from_secs(60),
        }
    }

    fn run(
        &self,
        spec: &CommandSpec,
        ws: &Workspace,
        class: &str,
        timeout: Duration,
    ) -> Result<RawToolOutput, ValidateError> {
        let args = spec.expand(ws, class);
        std::fs::create_dir_all(ws.scratch_root.join("tf-classes")).ok();
        let mut command = Command::new(&spec.program);
        command
            .args(&args)
            .current_dir(&ws.scratch_root)
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped());
        // Own process group so a timeout kill reaps grandchildren too.
        #[cfg(unix)]
        {
            use std::os::unix::process::CommandExt;
            command.process_group(0);
        }
        let mut child = command.spawn().map_err(|e| ValidateError::Spawn {
            program: spec.program.clone(),
            source: e,
        })?;

        let mut stdout_pipe = child.stdout.take().expect("piped stdout");
        let mut stderr_pipe = child.stderr.take().expect("piped stderr");
        let out_thread = std::thread::spawn(move || {
            let mut buf = String::new();
            let _ = stdout_pipe.read_to_string(&mut buf);
            buf
        });
        let err_thread = std::thread::spawn(move || {
            let mut buf = String::new();
            let _ = stderr_pipe.read_to_string(&mut buf);
            buf
        });

        let deadline = Instant::now() + timeout;
        let mut timed_out = false;
        let status = loop {
            match child.try_wait() {
                Ok(Some(status)) => break status.code(),
                Ok(None) => {
                    if Instant::now() >= deadline {
                        #[cfg(unix)]
                        unsafe {
                            libc::kill(-(child.id() as i32), libc::SIGKILL);
                        }
                        let _ = child.kill();
                        let _ = child.wait();
                        timed_out = true;
                        break None;
                    }
                    std::thread::sleep(Duration::from_millis(10));
                }
                Err(e) => {
                    return Err(ValidateError::Spawn {
                        program: spec.program.clone(),
                        source: e,
                    })
                }
            }
        };
        let stdout = out_thread.join().unwrap_or_default();
        let stderr = err_thread.join().unwrap_or_default();
        Ok(RawToolOutput {
            stdout,
            stderr,
            status,
            timed_out,
        })
    }
}

impl Toolchain for CommandToolchain {
    fn name(&self) -> &str {
        &self.label
    }

    fn compile(&self, ws: &Workspace) -> Result<RawToolOutput, ValidateError> {
        self.run(&self.compile_cmd, ws, &ws.test_class, self.compile_timeout)
    }

    fn run_test(&self, ws: &Workspace, class: &str) -> Result<RawToolOutput, ValidateError> {
        self.run(&self.run_cmd, ws, class, self.run_timeout)
    }
}

/// Copy a project tree, skipping build products and VCS metadata.
fn copy_tree(from: &Path, to: &Path) -> Result<(), ValidateError> {
    const SKIP: &[&str] = &[".git", "target", "tf-classes", ".idea", "node_modules"];
    for entry in walkdir::WalkDir::new(from).follow_links(false) {
        let entry = entry.map_err(|e| ValidateError::Io {
            path: from.to_path_buf(),
            source: e.into(),
        })?;
        let rel = entry.path().strip_prefix(from).unwrap();
        if rel
            .components()
            .any(|c| SKIP.contains(&c.as_os_str().to_string_lossy().as_ref()))
        {
            continue;
        }
        let dest = to.join(rel);
        if entry.file_type().is_dir() {
            std::fs::create_dir_all(&dest).map_err(|e| ValidateError::Io {
                path: dest.clone(),
                source: e,
            })?;
        } else if entry.file_type().is_file() {
            if let Some(parent) = dest.parent() {
                std::fs::create_dir_all(parent).map_err(|e| ValidateError::Io {
                    path: parent.to_path_buf(),
                    source: e,
                })?;
            }
            std::fs::copy(entry.path(), &dest).map_err(|e| ValidateError::Io {
                path: dest.clone(),
                source: e,
            })?;
        }
    }
    Ok(())
}

fn normalize_newlines(s: &str) -> String {
    s.replace("\r\n", "\n").replace('\r', "\n")
}

/// Default imports for a wrapped bare test method.
fn framework_imports(framework_version: &str) -> Vec<&'static str> {
    if framework_version.contains('5') {
        vec![
            "import org.junit.jupiter.api.Test;",
            "import static org.junit.jupiter.api.Assertions.*;",
        ]
    } else {
        vec![
            "import org.junit.Test;",
            "import static org.junit.Assert.*;",
        ]
    }
}

/// Materialize a generated test into a scratch copy of the project. Bare
/// methods are wrapped into a `<FocalClass>GeneratedTest` class in the focal
/// class's package; full classes are written as-is (package header fixed if
/// absent). Imports carried by the response are kept, de-duplicated against
/// the defaults.
pub fn materialize_test(
    project: &ProjectRef,
    focal: &MethodRef,
    test_source: &str,
) -> Result<Workspace, ValidateError> {
    if test_source.trim().is_empty() {
        return Err(ValidateError::EmptyTestSource);
    }
    let scratch = tempfile::TempDir::with_prefix("testforge-ws-").map_err(|e| {
        ValidateError::Io {
            path: PathBuf::from("tempdir"),
            source: e,
        }
    })?;
    let scratch_root = scratch.path().join("project");
    copy_tree(&project.root_path, &scratch_root)?;

    let focal_dir = focal
        .file_path
        .parent()
        .map(|p| p.to_path_buf())
        .unwrap_or_default();

    // Focal package from the scratch copy of the focal file.
    let focal_src = std::fs::read_to_string(scratch_root.join(&focal.file_path))
        .map_err(|e| ValidateError::Io {
            path: focal.file_path.clone(),
            source: e,
        })?;
    let focal_package = parse_java(&focal_src).unit.package;

    let source = normalize_newlines(test_source);
    let parsed = parse_java(&source);
    let framework = project.framework_version();

    let (file_text, class_simple) = if parsed.is_valid() && !parsed.unit.types.is_empty() {
        // Full class response.
        let name = parsed.unit.types[0].name.clone();
        let text = if parsed.unit.package.is_none() {
            match &focal_package {
                Some(p) => format!("package {p};\n\n{source}"),
                None => source.clone(),
            }
        } else {
            source.clone()
        };
        (text, name)
    } else {
        // Bare method (possibly preceded by import lines).
        let mut imports: Vec<String> = Vec::new();
        let mut body_lines: Vec<&str> = Vec::new();
        for line in source.lines() {
            let t = line.trim();
            if t.starts_with("import ") {
                imports.push(t.to_string());
            } else if t.starts_with("package ") {
                // Package of the wrapper comes from the focal class.
            } else {
                body_lines.push(line);
            }
        }
        let body = crate::corpus::dedent_for_wrap(&body_lines);

        let focal_simple = focal
            .class_name
            .rsplit('.')
            .next()
            .unwrap_or(&focal.class_name);
        let class_simple = format!("{focal_simple}GeneratedTest");

        let mut text = String::new();
        if let Some(p) = &focal_package {
            text.push_str(&format!("package {p};\n\n"));
        }
        let mut all_imports: Vec<String> = framework_imports(&framework)
            .iter()
            .map(|s| s.to_string())
            .collect();
        for imp in imports {
            if !all_imports.contains(&imp) {
                all_imports.push(imp);
            }
        }
        for imp in &all_imports {
            text.push_str(imp);
            text.push('\n');
        }
        text.push('\n');
        text.push_str(&format!("public class {class_simple} {{\n\n"));
        for line in body.lines() {
            if line.trim().is_empty() {
                text.push('\n');
            } else {
                text.push_str("    ");
                text.push_str(line);
                text.push('\n');
            }
        }
        text.push_str("}\n");
        (text, class_simple)
    };

    let test_file = focal_dir.join(format!("{class_simple}.java"));
    let abs = scratch_root.join(&test_file);
    if let Some(parent) = abs.parent() {
        std::fs::create_dir_all(parent).map_err(|e| ValidateError::Io {
            path: parent.to_path_buf(),
            source: e,
        })?;
    }
    std::fs::write(&abs, &file_text).map_err(|e| ValidateError::Io {
        path: abs.clone(),
        source: e,
    })?;

    let test_class = match &focal_package {
        Some(p) => format!("{p}.{class_simple}"),
        None => class_simple.clone(),
    };

    Ok(Workspace {
        project: ProjectRef {
            root_path: scratch_root.clone(),
            ..project.clone()
        },
        _scratch: scratch,
        scratch_root,
        focal_dir,
        test_file,
        test_class,
    })
}

/// True when the source parses as a compilation unit, either directly or
/// after wrapping a bare method the way materialization would.
pub fn check_syntax(test_source: &str) -> bool {
    let source = normalize_newlines(test_source);
    if source.trim().is_empty() {
        return false;
    }
    let parsed = parse_java(&source);
    if parsed.is_valid() && !parsed.unit.types.is_empty() {
        return true;
    }
    let body: String = source
        .lines()
        .filter(|l| !l.trim_start().starts_with("import ") && !l.trim_start().starts_with("package "))
        .collect::<Vec<_>>()
        .join("\n");
    let wrapped = format!("public class SyntaxProbe {{\n{body}\n}}\n");
    let parsed = parse_java(&wrapped);
    parsed.is_valid() && !parsed.unit.types.is_empty()
}

/// Compile the workspace's test file. Empty diagnostics ⇔ success. A
/// timeout is recorded as a failing diagnostic, not an error.
pub fn compile(
    ws: &Workspace,
    toolchain: &dyn Toolchain,
) -> Result<(Vec<Diagnostic>, RawToolOutput), ValidateError> {
    let raw = toolchain.compile(ws)?;
    let mut diags = parse_diagnostics(&raw.combined(), &ws.test_file);
    if raw.timed_out {
        diags.push(Diagnostic {
            error_type: "compilation timed out".to_string(),
            file: ws.test_file.clone(),
            line: 1,
            symbol: None,
            raw: "compilation timed out".to_string(),
            in_test_file: true,
        });
    } else if raw.status != Some(0) && diags.is_empty() {
        diags.push(Diagnostic {
            error_type: "unparsed".to_string(),
            file: ws.test_file.clone(),
            line: 1,
            symbol: None,
            raw: raw.combined(),
            in_test_file: true,
        });
    }
    Ok((diags, raw))
}

/// Execute the materialized test; `None` means it passed.
pub fn execute(
    ws: &Workspace,
    toolchain: &dyn Toolchain,
) -> Result<Option<RuntimeFailure>, ValidateError> {
    let raw = toolchain.run_test(ws, &ws.test_class)?;
    if raw.timed_out {
        return Ok(Some(RuntimeFailure {
            exception_type: "org.junit.runners.model.TestTimedOutException".to_string(),
            message: Some("execution timed out".to_string()),
            failing_line: None,
        }));
    }
    Ok(parse_junit_output(&raw.combined(), raw.status, &ws.test_class))
}

/// Parse JUnit text-runner output into the first failure, if any.
pub fn parse_junit_output(
    output: &str,
    status: Option<i32>,
    test_class: &str,
) -> Option<RuntimeFailure> {
    if status == Some(0) {
        return None;
    }
    let lines: Vec<&str> = output.lines().collect();
    let mut i = 0;
    while i < lines.len() {
        let line = lines[i].trim_start();
        // "1) testName(com.example.Clazz)"
        let is_failure_header = line
            .split_once(')')
            .map(|(n, rest)| n.chars().all(|c| c.is_ascii_digit()) && rest.contains('('))
            .unwrap_or(false);
        if is_failure_header {
            let mut exception_type = String::new();
            let mut message = None;
            if let Some(next) = lines.get(i + 1) {
                let next = next.trim();
                match next.split_once(": ") {
                    Some((fqn, msg)) if looks_like_fqn(fqn) => {
                        exception_type = fqn.to_string();
                        message = Some(msg.to_string());
                    }
                    _ if looks_like_fqn(next) => exception_type = next.to_string(),
                    _ => {}
                }
            }
            if exception_type.is_empty() {
                exception_type = "unknown.ExecutionFailure".to_string();
            }
            // Failing line: first stack frame inside the test class.
            let mut failing_line = None;
            for frame in lines.iter().skip(i + 1) {
                let f = frame.trim();
                if !f.starts_with("at ") {
                    if f.is_empty() && failing_line.is_some() {
                        break;
                    }
                    continue;
                }
                if f.contains(test_class) {
                    if let Some(ln) = f.rsplit(':').next() {
                        failing_line = ln.trim_end_matches(')').parse::<u32>().ok();
                    }
                    break;
                }
            }
            return Some(RuntimeFailure {
                exception_type,
                message,
                failing_line,
            });
        }
        i += 1;
    }
    if output.contains("OK (") {
        return None;
    }
    // Nonzero exit with no parseable failure block.
    Some(RuntimeFailure {
        exception_type: "unknown.ExecutionFailure".to_string(),
        message: Some(output.trim().chars().take(400).collect()),
        failing_line: None,
    })
}

fn looks_like_fqn(s: &str) -> bool {
    s.contains('.')
        && !s.contains(' ')
        && s.chars()
            .all(|c| c.is_alphanumeric() || c == '.' || c == '_' || c == '$')
}

/// Combine check results into an [`OutcomeClass`], enforcing the
/// `passed ⇒ compiled ⇒ syntactic_ok` chain. `run` may only be supplied for
/// clean compiles.
pub fn classify(
    syntax: bool,
    diags: Vec<Diagnostic>,
    run: Option<RuntimeFailure>,
) -> Result<OutcomeClass, ValidateError> {
    if run.is_some() && (!syntax || !diags.is_empty()) {
        return Err(ValidateError::Inconsistent(
            "runtime result supplied for an attempt that did not compile".to_string(),
        ));
    }
    let compiled = syntax && diags.is_empty();
    let passed = compiled && run.is_none();
    Ok(OutcomeClass {
        syntactic_ok: syntax,
        compiled,
        passed,
        diagnostics: diags,
        runtime_failure: run,
    })
}

/// Content hash of a file tree (sorted relative paths + bytes), for
/// isolation checks.
pub fn hash_tree(root: &Path) -> std::io::Result<String> {
    let mut files: Vec<PathBuf> = walkdir::WalkDir::new(root)
        .follow_links(false)
        .into_iter()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_type().is_file())
        .map(|e| e.path().to_path_buf())
        .collect();
    files.sort();
    let mut hasher = Sha256::new();
    for f in &files {
        let rel = f.strip_prefix(root).unwrap_or(f);
        hasher.update(rel.to_string_lossy().as_bytes());
        hasher.update([0]);
        hasher.update(std::fs::read(f)?);
        hasher.update([0xff]);
    }
    Ok(format!("{:x}", hasher.finalize()))
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

    fn fixture_project(root: &Path) -> (ProjectRef, MethodRef) {
        write(root, "pom.xml", "<project><dependencies><dependency><artifactId>junit</artifactId><version>4.13.2</version></dependency></dependencies></project>");
        write(
            root,
            "src/main/java/com/fix/text/StrBuilder.java",
            r#"package com.fix.text;

public final class StrBuilder {
    private String value;

    public StrBuilder(String initial) {
        this.value = initial;
    }

    public void setCharAt(int index, char ch) {
        value = value.substring(0, index) + ch + value.substring(index + 1);
    }

    public String toString() {
        return value;
    }
}
"#,
        );
        fs::create_dir_all(root.join("src/test/java")).unwrap();
        let project = ProjectRef::discover(root).unwrap();
        let focal = MethodRef {
            file_path: PathBuf::from("src/main/java/com/fix/text/StrBuilder.java"),
            class_name: "StrBuilder".to_string(),
            method_name: "setCharAt".to_string(),
            param_count: 2,
            param_types: vec!["int".into(), "char".into()],
            start_line: 10,
            end_line: 12,
        };
        (project, focal)
    }

    const BARE_TEST: &str = r#"@Test
public void testSetCharAt() {
    StrBuilder sb = new StrBuilder("Hello World");
    sb.setCharAt(6, 'J');
    assertEquals("Hello Jorld", sb.toString());
}"#;

    #[test]
    fn bare_method_wrapped_in_focal_package() {
        let dir = tempfile::tempdir().unwrap();
        let (project, focal) = fixture_project(dir.path());
        let ws = materialize_test(&project, &focal, BARE_TEST).unwrap();
        assert_eq!(
            ws.test_file,
            PathBuf::from("src/main/java/com/fix/text/StrBuilderGeneratedTest.java")
        );
        assert_eq!(ws.test_class, "com.fix.text.StrBuilderGeneratedTest");
        let written = fs::read_to_string(ws.test_file_abs()).unwrap();
        assert!(written.starts_with("package com.fix.text;"));
        assert!(written.contains("import org.junit.Test;"));
        assert!(written.contains("public class StrBuilderGeneratedTest {"));
        assert_ne!(ws.scratch_root, project.root_path);
    }

    #[test]
    fn full_class_written_verbatim_with_package_fix() {
        let dir = tempfile::tempdir().unwrap();
        let (project, focal) = fixture_project(dir.path());
        let full = "import org.junit.Test;\nimport static org.junit.Assert.*;\n\npublic class MyTest {\n    @Test\n    public void testX() { assertTrue(true); }\n}\n";
        let ws = materialize_test(&project, &focal, full).unwrap();
        let written = fs::read_to_string(ws.test_file_abs()).unwrap();
        assert!(written.starts_with("package com.fix.text;"));
        assert!(written.contains("public class MyTest {"));
        assert!(ws.test_file.ends_with("MyTest.java"));
    }

    #[test]
    fn empty_source_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let (project, focal) = fixture_project(dir.path());
        assert!(matches!(
            materialize_test(&project, &focal, "  \n"),
            Err(ValidateError::EmptyTestSource)
        ));
    }

    #[test]
    fn syntax_check() {
        assert!(check_syntax(BARE_TEST));
        assert!(check_syntax(
            "public class T { @Test public void m() { int x = 1; } }"
        ));
        assert!(!check_syntax("@Test public void m() { assertEquals(1, f( ; }"));
        assert!(!check_syntax(""));
    }

    #[test]
    fn embedded_compile_and_run_pass() {
        let dir = tempfile::tempdir().unwrap();
        let (project, focal) = fixture_project(dir.path());
        let ws = materialize_test(&project, &focal, BARE_TEST).unwrap();
        let tc = EmbeddedToolchain::default();
        let (diags, _raw) = compile(&ws, &tc).unwrap();
        assert!(diags.is_empty(), "diags: {diags:?}");
        let failure = execute(&ws, &tc).unwrap();
        assert!(failure.is_none(), "failure: {failure:?}");
    }

    #[test]
    fn embedded_compile_missing_symbol() {
        let dir = tempfile::tempdir().unwrap();
        let (project, focal) = fixture_project(dir.path());
        let bad = "@Test\npublic void testSetCharAt() {\n    Widget w = new Widget();\n}";
        let ws = materialize_test(&project, &focal, bad).unwrap();
        let tc = EmbeddedToolchain::default();
        let (diags, raw) = compile(&ws, &tc).unwrap();
        assert!(!diags.is_empty());
        assert!(diags[0].error_type.contains("cannot find symbol"));
        assert!(raw.combined().contains("error: cannot find symbol"));
    }

    #[test]
    fn embedded_execute_detects_assertion_failure() {
        let dir = tempfile::tempdir().unwrap();
        let (project, focal) = fixture_project(dir.path());
        let wrong = r#"@Test
public void testSetCharAt() {
    StrBuilder sb = new StrBuilder("Hello World");
    sb.setCharAt(6, 'J');
    assertEquals("Hello World", sb.toString());
}"#;
        let ws = materialize_test(&project, &focal, wrong).unwrap();
        let tc = EmbeddedToolchain::default();
        let (diags, _) = compile(&ws, &tc).unwrap();
        assert!(diags.is_empty(), "diags: {diags:?}");
        let failure = execute(&ws, &tc).unwrap().expect("failed");
        assert_eq!(failure.exception_type, "org.junit.ComparisonFailure");
        assert!(failure.failing_line.is_some());
    }

    #[test]
    fn compile_same_workspace_twice_same_diags() {
        let dir = tempfile::tempdir().unwrap();
        let (project, focal) = fixture_project(dir.path());
        let bad = "@Test\npublic void testSetCharAt() {\n    sb.missing();\n}";
        let ws = materialize_test(&project, &focal, bad).unwrap();
        let tc = EmbeddedToolchain::default();
        let (d1, _) = compile(&ws, &tc).unwrap();
        let (d2, _) = compile(&ws, &tc).unwrap();
        assert_eq!(d1, d2);
    }

    #[test]
    fn original_tree_untouched_by_materialize() {
        let dir = tempfile::tempdir().unwrap();
        let (project, focal) = fixture_project(dir.path());
        let before = hash_tree(&project.root_path).unwrap();
        let ws = materialize_test(&project, &focal, BARE_TEST).unwrap();
        let tc = EmbeddedToolchain::default();
        let _ = compile(&ws, &tc).unwrap();
        let _ = execute(&ws, &tc).unwrap();
        drop(ws);
        let after = hash_tree(&project.root_path).unwrap();
        assert_eq!(before, after);
    }

    #[test]
    fn classify_contract() {
        let ok = classify(true, vec![], None).unwrap();
        assert!(ok.passed && ok.compiled && ok.syntactic_ok);
        let diag = Diagnostic {
            error_type: "cannot find symbol".into(),
            file: PathBuf::from("T.java"),
            line: 1,
            symbol: None,
            raw: String::new(),
            in_test_file: true,
        };
        let bad = classify(true, vec![diag.clone()], None).unwrap();
        assert!(!bad.compiled && bad.syntactic_ok && !bad.passed);
        let unsyntactic = classify(false, vec![], None).unwrap();
        assert!(!unsyntactic.syntactic_ok && !unsyntactic.compiled && !unsyntactic.passed);
        let failure = RuntimeFailure {
            exception_type: "java.lang.AssertionError".into(),
            message: None,
            failing_line: None,
        };
        assert!(classify(true, vec![diag], Some(failure)).is_err());
    }

    #[test]
    fn command_toolchain_timeout_kills() {
        let dir = tempfile::tempdir().unwrap();
        let (project, focal) = fixture_project(dir.path());
        let ws = materialize_test(&project, &focal, BARE_TEST).unwrap();
        let tc = CommandToolchain {
            label: "sleepy".to_string(),
            compile_cmd: CommandSpec::new("sh", &["-c", "sleep 30"]),
            run_cmd: CommandSpec::new("sh", &["-c", "sleep 30"]),
            compile_timeout: Duration::from_millis(100),
            run_timeout: Duration::from_millis(100),
        };
        let started = Instant::now();
        let raw = tc.compile(&ws).unwrap();
        assert!(raw.timed_out);
        assert!(started.elapsed() < Duration::from_secs(5));
        let (diags, _) = compile(&ws, &tc).unwrap();
        assert!(diags.iter().any(|d| d.error_type.contains("timed out")));
    }

    #[test]
    fn command_toolchain_captures_output_and_placeholders() {
        let dir = tempfile::tempdir().unwrap();
        let (project, focal) = fixture_project(dir.path());
        let ws = materialize_test(&project, &focal, BARE_TEST).unwrap();
        let tc = CommandToolchain {
            label: "echoer".to_string(),
            compile_cmd: CommandSpec::new("sh", &["-c", "echo file={test_file}; echo err 1>&2"]),
            run_cmd: CommandSpec::new("sh", &["-c", "echo class={class}"]),
            compile_timeout: Duration::from_secs(5),
            run_timeout: Duration::from_secs(5),
        };
        let raw = tc.compile(&ws).unwrap();
        assert!(raw
            .stdout
            .contains("file=src/main/java/com/fix/text/StrBuilderGeneratedTest.java"));
        assert_eq!(raw.stderr.trim(), "err");
        assert_eq!(raw.status, Some(0));
        let run = tc.run_test(&ws, &ws.test_class).unwrap();
        assert!(run.stdout.contains("class=com.fix.text.StrBuilderGeneratedTest"));
    }

    #[test]
    fn junit_output_parses_failure_line() {
        let out = "JUnit version 4.13.2\n.E\nTime: 0.001\nThere was 1 failure:\n1) testX(com.fix.TTest)\norg.junit.ComparisonFailure: expected:<[a]> but was:<[b]>\n\tat org.junit.Assert.assertEquals(Assert.java:118)\n\tat com.fix.TTest.testX(TTest.java:12)\n\nFAILURES!!!\nTests run: 1,  Failures: 1\n";
        let f = parse_junit_output(out, Some(1), "com.fix.TTest").unwrap();
        assert_eq!(f.exception_type, "org.junit.ComparisonFailure");
        assert_eq!(f.failing_line, Some(12));
        assert!(parse_junit_output("JUnit version 4.13.2\n.\nTime: 0.001\n\nOK (1 test)\n", Some(0), "com.fix.TTest").is_none());
    }
}
