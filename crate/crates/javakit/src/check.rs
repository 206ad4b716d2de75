//! Declaration-level semantic checker with javac-style diagnostics.
//!
//! Checks one file (typically a generated test) against a [`ClassTable`]
//! built from the surrounding project sources. The checks cover the error
//! classes that dominate generated-test failures: unresolved classes,
//! methods and variables, argument-list mismatches, literal type
//! incompatibilities, private access, and abstract instantiation. Constructs
//! outside the lattice degrade to an unknown type that suppresses follow-on
//! errors, mirroring javac's poisoning behavior.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use crate::ast::{BinOp, Expr, Stmt, UnOp};
use crate::model::{CompilationUnit, MethodDecl, TypeDecl, TypeKind};
use crate::parse::{parse_java, ParsedFile};
use crate::runtime::{
    self, base_type_name, find_sig, modeled_class, modeled_instance_methods,
    modeled_static_methods, primitive_type, JType, Modeled,
};

/// One entry in the project-wide class table.
#[derive(Debug, Clone)]
pub struct ClassEntry {
    /// Fully qualified name, `com.example.Outer.Inner` for nested types.
    pub qualified: String,
    pub package: Option<String>,
    pub file: PathBuf,
    pub decl: TypeDecl,
}

impl ClassEntry {
    pub fn simple_name(&self) -> &str {
        &self.decl.name
    }
}

/// Index of every type declared under a set of source roots.
#[derive(Debug, Clone, Default)]
pub struct ClassTable {
    by_simple: HashMap<String, Vec<usize>>,
    entries: Vec<ClassEntry>,
    packages: std::collections::HashSet<String>,
}

impl ClassTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Index all types (including nested) of a parsed unit.
    pub fn add_unit(&mut self, file: &Path, unit: &CompilationUnit) {
        if let Some(p) = &unit.package {
            self.packages.insert(p.clone());
        }
        for decl in unit.all_types() {
            let entry = ClassEntry {
                qualified: unit.qualify(&decl.nested_name),
                package: unit.package.clone(),
                file: file.to_path_buf(),
                decl: decl.clone(),
            };
            let idx = self.entries.len();
            self.by_simple
                .entry(decl.name.clone())
                .or_default()
                .push(idx);
            self.entries.push(entry);
        }
    }

    /// Parse and index one source file.
    pub fn add_source(&mut self, file: &Path, source: &str) -> ParsedFile {
        let parsed = parse_java(source);
        self.add_unit(file, &parsed.unit);
        parsed
    }

    pub fn entries(&self) -> &[ClassEntry] {
        &self.entries
    }

    pub fn lookup_simple(&self, name: &str) -> Vec<&ClassEntry> {
        self.by_simple
            .get(name)
            .map(|ids| ids.iter().map(|&i| &self.entries[i]).collect())
            .unwrap_or_default()
    }

    pub fn has_package(&self, package: &str) -> bool {
        self.packages.contains(package)
    }

    /// Resolve a (possibly qualified) class name as javac would inside a unit
    /// with the given package and imports: qualified match, then explicit
    /// import, then same package, then wildcard import.
    pub fn resolve(
        &self,
        name: &str,
        package: Option<&str>,
        imports: &[crate::model::Import],
    ) -> Option<&ClassEntry> {
        let name = base_type_name(name);
        if name.contains('.') {
            return self
                .entries
                .iter()
                .find(|e| e.qualified == name || e.qualified.ends_with(&format!(".{name}")));
        }
        let candidates = self.lookup_simple(name);
        if candidates.is_empty() {
            return None;
        }
        for imp in imports.iter().filter(|i| !i.is_static) {
            if imp.simple_name() == Some(name) {
                if let Some(hit) = candidates.iter().find(|c| c.qualified == imp.path) {
                    return Some(hit);
                }
            }
        }
        if let Some(pkg) = package {
            if let Some(hit) = candidates.iter().find(|c| c.package.as_deref() == Some(pkg)) {
                return Some(hit);
            }
        }
        for imp in imports.iter().filter(|i| !i.is_static) {
            if let Some(wild_pkg) = imp.path.strip_suffix(".*") {
                if let Some(hit) = candidates
                    .iter()
                    .find(|c| c.package.as_deref() == Some(wild_pkg))
                {
                    return Some(hit);
                }
            }
        }
        None
    }
}

/// One checker diagnostic in javac's shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JavaDiag {
    pub path: String,
    pub line: u32,
    pub col: u32,
    pub message: String,
    /// `symbol:` line payload, e.g. `method addAttribute(String,String)`.
    pub symbol: Option<String>,
    /// `location:` line payload, e.g. `variable xml of type Xml`.
    pub location: Option<String>,
    /// Additional indented note lines (`required:`, `found:`, `reason:`).
    pub notes: Vec<String>,
}

/// Result of checking one file.
#[derive(Debug, Clone, Default)]
pub struct CheckReport {
    pub diags: Vec<JavaDiag>,
}

impl CheckReport {
    pub fn is_ok(&self) -> bool {
        self.diags.is_empty()
    }

    /// Render in javac's terminal format, including source echo, caret, and
    /// the trailing error count.
    pub fn render_javac(&self, source: &str) -> String {
        if self.diags.is_empty() {
            return String::new();
        }
        let lines: Vec<&str> = source.lines().collect();
        let mut out = String::new();
        for d in &self.diags {
            out.push_str(&format!("{}:{}: error: {}\n", d.path, d.line, d.message));
            if let Some(src_line) = lines.get(d.line as usize - 1) {
                out.push_str(src_line);
                out.push('\n');
                let mut caret = String::new();
                for (i, ch) in src_line.chars().enumerate() {
                    if i as u32 >= d.col {
                        break;
                    }
                    caret.push(if ch == '\t' { '\t' } else { ' ' });
                }
                caret.push('^');
                out.push_str(&caret);
                out.push('\n');
            }
            if let Some(sym) = &d.symbol {
                out.push_str(&format!("  symbol:   {sym}\n"));
            }
            if let Some(loc) = &d.location {
                out.push_str(&format!("  location: {loc}\n"));
            }
            for n in &d.notes {
                out.push_str(&format!("  {n}\n"));
            }
        }
        let n = self.diags.len();
        out.push_str(&format!("{n} error{}\n", if n == 1 { "" } else { "s" }));
        out
    }
}

/// Check a single file against the table. `path_display` is echoed into
/// diagnostics exactly as given (pass a path relative to the compile root
/// for stable output).
pub fn check_file(table: &ClassTable, path_display: &str, source: &str) -> CheckReport {
    let parsed = parse_java(source);
    let mut report = CheckReport::default();

    if !parsed.is_valid() {
        for e in &parsed.syntax_errors {
            report.diags.push(JavaDiag {
                path: path_display.to_string(),
                line: e.line,
                col: e.col,
                message: e.message.clone(),
                symbol: None,
                location: None,
                notes: Vec::new(),
            });
        }
        return report;
    }

    let mut checker = Checker {
        table,
        unit: &parsed.unit,
        path: path_display.to_string(),
        diags: Vec::new(),
    };
    checker.check_imports();
    for decl in &parsed.unit.types {
        checker.check_type(decl);
    }
    report.diags = checker.diags;
    report
}

/// How a class name resolves in the checker's world.
enum Resolved<'t> {
    Project(&'t ClassEntry),
    /// A type declared in the file being checked.
    Local(TypeDecl),
    Modeled(Modeled),
    Opaque,
    NotFound,
}

struct Checker<'t> {
    table: &'t ClassTable,
    unit: &'t CompilationUnit,
    path: String,
    diags: Vec<JavaDiag>,
}

struct Scope {
    locals: HashMap<String, JType>,
    class_name: String,
    fields: HashMap<String, JType>,
    methods: Vec<MethodDecl>,
    junit_static_import: bool,
}

impl<'t> Checker<'t> {
    fn diag(&mut self, line: u32, col: u32, message: impl Into<String>) -> &mut JavaDiag {
        self.diags.push(JavaDiag {
            path: self.path.clone(),
            line,
            col,
            message: message.into(),
            symbol: None,
            location: None,
            notes: Vec::new(),
        });
        self.diags.last_mut().unwrap()
    }

    fn check_imports(&mut self) {
        for imp in &self.unit.imports {
            let path = imp.path.trim_end_matches(".*").trim_end_matches('.');
            let class_path = if imp.is_static {
                // import static a.b.C.member / a.b.C.*
                match path.rsplit_once('.') {
                    Some((cls, _)) => cls.to_string(),
                    None => path.to_string(),
                }
            } else {
                path.to_string()
            };
            if runtime::is_known_external_package(&class_path) {
                continue;
            }
            if imp.path.ends_with(".*") && !imp.is_static {
                if !self.table.has_package(&class_path) {
                    self.diag(imp.line, 7, format!("package {class_path} does not exist"));
                }
                continue;
            }
            let (pkg, cls) = match class_path.rsplit_once('.') {
                Some((p, c)) => (p.to_string(), c.to_string()),
                None => continue,
            };
            if self
                .table
                .lookup_simple(&cls)
                .iter()
                .any(|e| e.qualified == class_path)
            {
                continue;
            }
            if self.table.has_package(&pkg) {
                let d = self.diag(imp.line, 7, "cannot find symbol");
                d.symbol = Some(format!("class {cls}"));
                d.location = Some(format!("package {pkg}"));
            } else {
                self.diag(imp.line, 7, format!("package {pkg} does not exist"));
            }
        }
    }

    fn junit_static_import(&self) -> bool {
        self.unit.imports.iter().any(|i| {
            i.is_static
                && (i.path.starts_with("org.junit.Assert")
                    || i.path.starts_with("org.junit.jupiter.api.Assertions"))
        })
    }

    fn check_type(&mut self, decl: &TypeDecl) {
        let mut fields = HashMap::new();
        for f in &decl.fields {
            fields.insert(f.name.clone(), self.resolve_type_quiet(&f.type_text));
        }
        let junit = self.junit_static_import();
        for method in &decl.methods {
            let mut scope = Scope {
                locals: HashMap::new(),
                class_name: decl.name.clone(),
                fields: fields.clone(),
                methods: decl.methods.clone(),
                junit_static_import: junit,
            };
            for p in &method.params {
                let t = self.resolve_type(&p.type_text, method.start_line, 0, &decl.name);
                scope.locals.insert(p.name.clone(), t);
            }
            if let Some(body) = &method.body {
                self.check_stmts(body, &mut scope);
            }
        }
        for nested in &decl.nested {
            self.check_type(nested);
        }
    }

    /// Resolve a type name without emitting diagnostics.
    fn resolve_type_quiet(&self, text: &str) -> JType {
        if let Some(t) = primitive_type(base_type_name(text)) {
            return t;
        }
        let base = base_type_name(text);
        match self.resolve_class(base) {
            Resolved::NotFound => JType::Unknown,
            Resolved::Modeled(Modeled::Str) => JType::Str,
            _ => JType::Object(base.to_string()),
        }
    }

    /// Resolve a type name, reporting unknown classes.
    fn resolve_type(&mut self, text: &str, line: u32, col: u32, location_class: &str) -> JType {
        if text.contains("[]") {
            return JType::Unknown;
        }
        if let Some(t) = primitive_type(base_type_name(text)) {
            return t;
        }
        let base = base_type_name(text).to_string();
        match self.resolve_class(&base) {
            Resolved::NotFound => {
                let loc = format!("class {location_class}");
                let d = self.diag(line, col, "cannot find symbol");
                d.symbol = Some(format!("class {base}"));
                d.location = Some(loc);
                JType::Unknown
            }
            Resolved::Modeled(Modeled::Str) => JType::Str,
            _ => JType::Object(base),
        }
    }

    fn resolve_class(&self, name: &str) -> Resolved<'t> {
        let base = base_type_name(name);
        // Types declared in the file being checked win.
        for t in self.unit.all_types() {
            if t.name == base {
                return Resolved::Local(t.clone());
            }
        }
        if let Some(e) = self
            .table
            .resolve(base, self.unit.package.as_deref(), &self.unit.imports)
        {
            return Resolved::Project(e);
        }
        if let Some(m) = modeled_class(base) {
            return Resolved::Modeled(m);
        }
        if runtime::is_opaque_jdk(base) {
            return Resolved::Opaque;
        }
        // Qualified names under known external packages stay opaque.
        if base.contains('.') && runtime::is_known_external_package(base) {
            return Resolved::Opaque;
        }
        Resolved::NotFound
    }

    fn class_decl_of(&self, name: &str) -> Option<TypeDecl> {
        match self.resolve_class(name) {
            Resolved::Project(e) => Some(e.decl.clone()),
            Resolved::Local(d) => Some(d),
            _ => None,
        }
    }

    fn check_stmts(&mut self, stmts: &[Stmt], scope: &mut Scope) {
        for s in stmts {
            self.check_stmt(s, scope);
        }
    }

    fn check_stmt(&mut self, stmt: &Stmt, scope: &mut Scope) {
        match stmt {
            Stmt::Local {
                type_text,
                name,
                init,
                pos,
            } => {
                let declared =
                    self.resolve_type(type_text, pos.line, pos.col, &scope.class_name.clone());
                if let Some(e) = init {
                    let actual = self.infer(e, scope);
                    self.check_assignable(&actual, &declared, e);
                }
                scope.locals.insert(name.clone(), declared);
            }
            Stmt::Expr(e) => {
                self.infer(e, scope);
            }
            Stmt::If {
                cond,
                then,
                otherwise,
                ..
            } => {
                self.infer(cond, scope);
                self.check_stmts(then, scope);
                self.check_stmts(otherwise, scope);
            }
            Stmt::While { cond, body, .. } => {
                self.infer(cond, scope);
                self.check_stmts(body, scope);
            }
            Stmt::For {
                init,
                cond,
                update,
                body,
                ..
            } => {
                if let Some(i) = init {
                    self.check_stmt(i, scope);
                }
                if let Some(c) = cond {
                    self.infer(c, scope);
                }
                for u in update {
                    self.infer(u, scope);
                }
                self.check_stmts(body, scope);
            }
            Stmt::Return { value, .. } => {
                if let Some(v) = value {
                    self.infer(v, scope);
                }
            }
            Stmt::Throw { value, .. } => {
                self.infer(value, scope);
            }
            Stmt::Block(inner) => self.check_stmts(inner, scope),
            Stmt::Unsupported { .. } => {}
        }
    }

    fn check_assignable(&mut self, actual: &JType, declared: &JType, at: &Expr) {
        if !actual.is_concrete() || !declared.is_concrete() {
            return;
        }
        if self.assignable(actual, declared) {
            return;
        }
        let pos = at.pos();
        self.diag(
            pos.line,
            pos.col,
            format!(
                "incompatible types: {} cannot be converted to {}",
                actual.display(),
                declared.display()
            ),
        );
    }

    fn assignable(&self, from: &JType, to: &JType) -> bool {
        use JType::*;
        match (from, to) {
            (a, b) if a == b => true,
            (Null, Str | Object(_)) => true,
            (Int, Double) | (Char, Int) | (Char, Double) => true,
            (Str, Object(c)) if c == "Object" || c == "CharSequence" => true,
            (Object(_), Object(c)) if c == "Object" => true,
            (Object(a), Object(b)) => {
                // Classes outside the project have unknown hierarchies; only
                // reject when both sides are fully resolvable.
                if self.class_decl_of(a).is_none() || self.class_decl_of(b).is_none() {
                    true
                } else {
                    self.is_subclass(a, b)
                }
            }
            (Object(c), Str) | (Str, Object(c)) => self.class_decl_of(c).is_none(),
            _ => false,
        }
    }

    fn is_subclass(&self, sub: &str, sup: &str) -> bool {
        if sub == sup {
            return true;
        }
        let mut current = sub.to_string();
        for _ in 0..16 {
            let decl = match self.class_decl_of(&current) {
                Some(d) => d,
                None => return false,
            };
            match decl.superclass {
                Some(s) => {
                    let s = base_type_name(&s).to_string();
                    if s == sup {
                        return true;
                    }
                    current = s;
                }
                None => return false,
            }
        }
        false
    }

    fn location_for(&self, receiver: &Expr, class_name: &str, scope: &Scope) -> String {
        match receiver {
            Expr::Name(n, _) if scope.locals.contains_key(n) || scope.fields.contains_key(n) => {
                format!("variable {n} of type {class_name}")
            }
            _ => format!("class {class_name}"),
        }
    }

    fn arg_list(args: &[JType]) -> String {
        if args.is_empty() {
            "no arguments".to_string()
        } else {
            args.iter()
                .map(|t| t.display())
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    fn param_list(m: &MethodDecl) -> String {
        if m.params.is_empty() {
            "no arguments".to_string()
        } else {
            m.params
                .iter()
                .map(|p| base_type_name(&p.type_text).to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    /// Member-call checking against a project (or locally declared) class.
    #[allow(clippy::too_many_arguments)]
    fn check_project_call(
        &mut self,
        decl: &TypeDecl,
        is_static_ctx: bool,
        receiver: Option<&Expr>,
        name: &str,
        args: &[JType],
        pos: crate::ast::Pos,
        scope: &Scope,
    ) -> JType {
        let methods: Vec<&MethodDecl> = decl
            .methods
            .iter()
            .filter(|m| !m.is_constructor && m.name == name)
            .collect();
        if methods.is_empty() {
            // Object methods are always available.
            if find_sig(runtime::OBJECT_METHODS, name).is_some() {
                return find_sig(runtime::OBJECT_METHODS, name).map(|s| (s.ret)()).unwrap();
            }
            let location = match receiver {
                Some(r) if !is_static_ctx => self.location_for(r, &decl.name, scope),
                _ => format!("class {}", decl.name),
            };
            let d = self.diag(pos.line, pos.col, "cannot find symbol");
            d.symbol = Some(format!("method {name}({})", Self::arg_list(args).replace("no arguments", "")));
            d.location = Some(location);
            return JType::Unknown;
        }
        let arity_matches: Vec<&&MethodDecl> =
            methods.iter().filter(|m| m.arity() == args.len()).collect();
        if arity_matches.is_empty() {
            let d = self.diag(
                pos.line,
                pos.col,
                format!(
                    "method {name} in class {} cannot be applied to given types;",
                    decl.name
                ),
            );
            d.notes.push(format!("required: {}", Self::param_list(methods[0])));
            d.notes.push(format!("found: {}", Self::arg_list(args)));
            d.notes
                .push("reason: actual and formal argument lists differ in length".to_string());
            return JType::Unknown;
        }
        // Prefer a type-compatible overload among equal-arity candidates.
        let chosen = arity_matches
            .iter()
            .find(|m| self.args_compatible(m, args))
            .copied()
            .or_else(|| arity_matches.first().copied());
        let m = match chosen {
            Some(m) => *m,
            None => return JType::Unknown,
        };
        if !self.args_compatible(m, args) {
            if let Some((from, to)) = self.first_mismatch(m, args) {
                let d = self.diag(
                    pos.line,
                    pos.col,
                    format!(
                        "method {name} in class {} cannot be applied to given types;",
                        decl.name
                    ),
                );
                d.notes.push(format!("required: {}", Self::param_list(m)));
                d.notes.push(format!("found: {}", Self::arg_list(args)));
                d.notes.push(format!(
                    "reason: argument mismatch; {} cannot be converted to {}",
                    from.display(),
                    to.display()
                ));
                return JType::Unknown;
            }
        }
        if m.is_private() {
            self.diag(
                pos.line,
                pos.col,
                format!("{name}() has private access in {}", decl.name),
            );
            return JType::Unknown;
        }
        if is_static_ctx && !m.is_static() {
            self.diag(
                pos.line,
                pos.col,
                format!(
                    "non-static method {name}({}) cannot be referenced from a static context",
                    Self::param_list(m).replace("no arguments", "")
                ),
            );
        }
        self.resolve_type_quiet(&m.return_type)
    }

    fn args_compatible(&self, m: &MethodDecl, args: &[JType]) -> bool {
        if m.arity() != args.len() {
            return false;
        }
        self.first_mismatch(m, args).is_none()
    }

    fn first_mismatch(&self, m: &MethodDecl, args: &[JType]) -> Option<(JType, JType)> {
        for (p, a) in m.params.iter().zip(args) {
            let declared = match primitive_type(base_type_name(&p.type_text)) {
                Some(t) => t,
                None => self.resolve_type_quiet(&p.type_text),
            };
            if !a.is_concrete() || !declared.is_concrete() {
                continue;
            }
            if !self.assignable(a, &declared) {
                return Some((a.clone(), declared));
            }
        }
        None
    }

    fn check_builtin_call(
        &mut self,
        sigs: &[runtime::BuiltinSig],
        class_display: &str,
        receiver: Option<&Expr>,
        name: &str,
        args: &[JType],
        pos: crate::ast::Pos,
        scope: &Scope,
    ) -> JType {
        match find_sig(sigs, name) {
            None => {
                let location = match receiver {
                    Some(r) => self.location_for(r, class_display, scope),
                    None => format!("class {class_display}"),
                };
                let d = self.diag(pos.line, pos.col, "cannot find symbol");
                d.symbol = Some(format!("method {name}({})", Self::arg_list(args).replace("no arguments", "")));
                d.location = Some(location);
                JType::Unknown
            }
            Some(sig) => {
                if !sig.arities.contains(&args.len()) {
                    let d = self.diag(
                        pos.line,
                        pos.col,
                        format!(
                            "method {name} in class {class_display} cannot be applied to given types;"
                        ),
                    );
                    d.notes.push(format!(
                        "required: {} argument{}",
                        sig.arities[0],
                        if sig.arities[0] == 1 { "" } else { "s" }
                    ));
                    d.notes.push(format!("found: {}", Self::arg_list(args)));
                    d.notes.push(
                        "reason: actual and formal argument lists differ in length".to_string(),
                    );
                    JType::Unknown
                } else {
                    (sig.ret)()
                }
            }
        }
    }

    fn infer(&mut self, e: &Expr, scope: &mut Scope) -> JType {
        match e {
            Expr::Null(_) => JType::Null,
            Expr::Int(..) => JType::Int,
            Expr::Double(..) => JType::Double,
            Expr::Bool(..) => JType::Boolean,
            Expr::Char(..) => JType::Char,
            Expr::Str(..) => JType::Str,
            Expr::Name(n, pos) => {
                if n == "this" {
                    return JType::Object(scope.class_name.clone());
                }
                if let Some(t) = scope.locals.get(n) {
                    return t.clone();
                }
                if let Some(t) = scope.fields.get(n) {
                    return t.clone();
                }
                match self.resolve_class(n) {
                    Resolved::NotFound => {
                        let loc = format!("class {}", scope.class_name);
                        let d = self.diag(pos.line, pos.col, "cannot find symbol");
                        d.symbol = Some(format!("variable {n}"));
                        d.location = Some(loc);
                        JType::Unknown
                    }
                    _ => JType::ClassRef(n.clone()),
                }
            }
            Expr::Field { object, name, pos } => {
                let obj_t = self.infer(object, scope);
                match obj_t {
                    JType::ClassRef(c) => match self.class_decl_of(&c) {
                        Some(decl) => match decl.fields.iter().find(|f| f.name == *name) {
                            Some(f) if f.is_private() => {
                                self.diag(
                                    pos.line,
                                    pos.col,
                                    format!("{name} has private access in {c}"),
                                );
                                JType::Unknown
                            }
                            Some(f) => self.resolve_type_quiet(&f.type_text),
                            None => {
                                let d = self.diag(pos.line, pos.col, "cannot find symbol");
                                d.symbol = Some(format!("variable {name}"));
                                d.location = Some(format!("class {c}"));
                                JType::Unknown
                            }
                        },
                        None => JType::Unknown, // modeled/opaque statics stay loose
                    },
                    JType::Object(c) => match self.class_decl_of(&c) {
                        Some(decl) => match decl.fields.iter().find(|f| f.name == *name) {
                            Some(f) if f.is_private() && c != scope.class_name => {
                                self.diag(
                                    pos.line,
                                    pos.col,
                                    format!("{name} has private access in {c}"),
                                );
                                JType::Unknown
                            }
                            Some(f) => self.resolve_type_quiet(&f.type_text),
                            None => {
                                let loc = self.location_for(object, &c, scope);
                                let d = self.diag(pos.line, pos.col, "cannot find symbol");
                                d.symbol = Some(format!("variable {name}"));
                                d.location = Some(loc);
                                JType::Unknown
                            }
                        },
                        None => JType::Unknown,
                    },
                    _ => JType::Unknown,
                }
            }
            Expr::Call {
                receiver,
                name,
                args,
                pos,
            } => {
                let arg_types: Vec<JType> =
                    args.iter().map(|a| self.infer(a, scope)).collect();
                match receiver {
                    None => {
                        // Own method?
                        let own: Vec<MethodDecl> = scope
                            .methods
                            .iter()
                            .filter(|m| !m.is_constructor && m.name == *name)
                            .cloned()
                            .collect();
                        if !own.is_empty() {
                            let decl = TypeDecl {
                                kind: TypeKind::Class,
                                name: scope.class_name.clone(),
                                nested_name: scope.class_name.clone(),
                                declaration: String::new(),
                                modifiers: vec![],
                                superclass: None,
                                fields: vec![],
                                methods: scope.methods.clone(),
                                nested: vec![],
                                start_line: 0,
                                end_line: 0,
                            };
                            return self.check_project_call(
                                &decl, false, None, name, &arg_types, *pos, scope,
                            );
                        }
                        // Statically imported JUnit assertion?
                        if scope.junit_static_import {
                            if find_sig(runtime::ASSERT_STATICS, name).is_some() {
                                return self.check_builtin_call(
                                    runtime::ASSERT_STATICS,
                                    "Assert",
                                    None,
                                    name,
                                    &arg_types,
                                    *pos,
                                    scope,
                                );
                            }
                        }
                        let loc = format!("class {}", scope.class_name);
                        let d = self.diag(pos.line, pos.col, "cannot find symbol");
                        d.symbol = Some(format!(
                            "method {name}({})",
                            Self::arg_list(&arg_types).replace("no arguments", "")
                        ));
                        d.location = Some(loc);
                        JType::Unknown
                    }
                    Some(recv) => {
                        let recv_t = self.infer(recv, scope);
                        match recv_t {
                            JType::ClassRef(c) => match self.resolve_class(&c) {
                                Resolved::Project(e) => {
                                    let decl = e.decl.clone();
                                    self.check_project_call(
                                        &decl, true, Some(recv), name, &arg_types, *pos, scope,
                                    )
                                }
                                Resolved::Local(decl) => self.check_project_call(
                                    &decl, true, Some(recv), name, &arg_types, *pos, scope,
                                ),
                                Resolved::Modeled(m) => self.check_builtin_call(
                                    modeled_static_methods(m),
                                    &c,
                                    Some(recv),
                                    name,
                                    &arg_types,
                                    *pos,
                                    scope,
                                ),
                                _ => JType::Unknown,
                            },
                            JType::Str => self.check_builtin_call(
                                runtime::STRING_METHODS,
                                "String",
                                Some(recv),
                                name,
                                &arg_types,
                                *pos,
                                scope,
                            ),
                            JType::Object(c) => match self.resolve_class(&c) {
                                Resolved::Project(e) => {
                                    let decl = e.decl.clone();
                                    self.check_project_call(
                                        &decl, false, Some(recv), name, &arg_types, *pos, scope,
                                    )
                                }
                                Resolved::Local(decl) => self.check_project_call(
                                    &decl, false, Some(recv), name, &arg_types, *pos, scope,
                                ),
                                Resolved::Modeled(m) => self.check_builtin_call(
                                    modeled_instance_methods(m),
                                    &c,
                                    Some(recv),
                                    name,
                                    &arg_types,
                                    *pos,
                                    scope,
                                ),
                                _ => JType::Unknown,
                            },
                            JType::Null => JType::Unknown,
                            _ => JType::Unknown,
                        }
                    }
                }
            }
            Expr::New {
                class,
                args,
                diamond: _,
                pos,
            } => {
                let arg_types: Vec<JType> =
                    args.iter().map(|a| self.infer(a, scope)).collect();
                match self.resolve_class(class) {
                    Resolved::Project(e) => {
                        let decl = e.decl.clone();
                        self.check_new(&decl, &arg_types, *pos)
                    }
                    Resolved::Local(decl) => self.check_new(&decl, &arg_types, *pos),
                    Resolved::Modeled(Modeled::Str) => JType::Str,
                    Resolved::Modeled(_) | Resolved::Opaque => {
                        JType::Object(base_type_name(class).to_string())
                    }
                    Resolved::NotFound => {
                        let loc = format!("class {}", scope.class_name);
                        let d = self.diag(pos.line, pos.col, "cannot find symbol");
                        d.symbol = Some(format!("class {}", base_type_name(class)));
                        d.location = Some(loc);
                        JType::Unknown
                    }
                }
            }
            Expr::Unary { op, operand, .. } => {
                let t = self.infer(operand, scope);
                match op {
                    UnOp::Not => JType::Boolean,
                    UnOp::Neg => {
                        if t == JType::Double {
                            JType::Double
                        } else {
                            JType::Int
                        }
                    }
                }
            }
            Expr::Binary { op, lhs, rhs, .. } => {
                let lt = self.infer(lhs, scope);
                let rt = self.infer(rhs, scope);
                match op {
                    BinOp::Add if lt == JType::Str || rt == JType::Str => JType::Str,
                    BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div | BinOp::Rem => {
                        if lt == JType::Double || rt == JType::Double {
                            JType::Double
                        } else if lt.is_concrete() && rt.is_concrete() {
                            JType::Int
                        } else {
                            JType::Unknown
                        }
                    }
                    BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => {
                        JType::Boolean
                    }
                    BinOp::And | BinOp::Or => JType::Boolean,
                }
            }
            Expr::Assign {
                target, op, value, ..
            } => {
                let tt = self.infer(target, scope);
                let vt = self.infer(value, scope);
                if op.is_none() {
                    self.check_assignable(&vt, &tt, value);
                }
                tt
            }
            Expr::Ternary {
                cond,
                then,
                otherwise,
                ..
            } => {
                self.infer(cond, scope);
                let tt = self.infer(then, scope);
                self.infer(otherwise, scope);
                tt
            }
            Expr::Cast {
                type_text, value, ..
            } => {
                self.infer(value, scope);
                self.resolve_type_quiet(type_text)
            }
            Expr::Unsupported { .. } => JType::Unknown,
        }
    }

    fn check_new(&mut self, decl: &TypeDecl, args: &[JType], pos: crate::ast::Pos) -> JType {
        if decl.is_abstract() {
            self.diag(
                pos.line,
                pos.col,
                format!("{} is abstract; cannot be instantiated", decl.name),
            );
            return JType::Object(decl.name.clone());
        }
        let ctors: Vec<&MethodDecl> = decl.constructors().collect();
        if ctors.is_empty() {
            // Implicit default constructor.
            if !args.is_empty() {
                let d = self.diag(
                    pos.line,
                    pos.col,
                    format!(
                        "constructor {} in class {} cannot be applied to given types;",
                        decl.name, decl.name
                    ),
                );
                d.notes.push("required: no arguments".to_string());
                d.notes.push(format!("found: {}", Self::arg_list(args)));
                d.notes
                    .push("reason: actual and formal argument lists differ in length".to_string());
            }
            return JType::Object(decl.name.clone());
        }
        let arity_matches: Vec<&&MethodDecl> =
            ctors.iter().filter(|c| c.arity() == args.len()).collect();
        if arity_matches.is_empty() {
            let d = self.diag(
                pos.line,
                pos.col,
                format!(
                    "constructor {} in class {} cannot be applied to given types;",
                    decl.name, decl.name
                ),
            );
            d.notes.push(format!("required: {}", Self::param_list(ctors[0])));
            d.notes.push(format!("found: {}", Self::arg_list(args)));
            d.notes
                .push("reason: actual and formal argument lists differ in length".to_string());
            return JType::Object(decl.name.clone());
        }
        let chosen = arity_matches
            .iter()
            .find(|c| self.args_compatible(c, args))
            .copied();
        if chosen.is_none() {
            if let Some((from, to)) = self.first_mismatch(arity_matches[0], args) {
                let d = self.diag(
                    pos.line,
                    pos.col,
                    format!(
                        "constructor {} in class {} cannot be applied to given types;",
                        decl.name, decl.name
                    ),
                );
                d.notes
                    .push(format!("required: {}", Self::param_list(arity_matches[0])));
                d.notes.push(format!("found: {}", Self::arg_list(args)));
                d.notes.push(format!(
                    "reason: argument mismatch; {} cannot be converted to {}",
                    from.display(),
                    to.display()
                ));
            }
        }
        JType::Object(decl.name.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::Path;

    fn table_with(sources: &[(&str, &str)]) -> ClassTable {
        let mut t = ClassTable::new();
        for (path, src) in sources {
            t.add_source(Path::new(path), src);
        }
        t
    }

    const XML_SRC: &str = r#"package com.fixture.xml;

public class Xml {
    private String name;
    private String attributes;

    public Xml(String name) {
        this.name = name;
        this.attributes = "";
    }

    public void setAttribute(String key, String value) {
        attributes = attributes + " " + key + "=" + value;
    }

    public String render() {
        return "<" + name + attributes + "/>";
    }
}
"#;

    fn test_src(body: &str) -> String {
        format!(
            r#"package com.fixture.xml;

import org.junit.Test;
import static org.junit.Assert.*;

public class XmlGeneratedTest {{
    @Test
    public void testSetAttribute() {{
{body}
    }}
}}
"#
        )
    }

    #[test]
    fn clean_test_produces_no_diags() {
        let table = table_with(&[("src/main/java/com/fixture/xml/Xml.java", XML_SRC)]);
        let src = test_src(
            "        Xml xml = new Xml(\"root\");\n        xml.setAttribute(\"k\", \"v\");\n        assertTrue(xml.render().contains(\"k\"));",
        );
        let report = check_file(&table, "XmlGeneratedTest.java", &src);
        assert!(report.is_ok(), "unexpected diags: {:?}", report.diags);
    }

    #[test]
    fn missing_method_is_cannot_find_symbol() {
        let table = table_with(&[("src/main/java/com/fixture/xml/Xml.java", XML_SRC)]);
        let src = test_src(
            "        Xml xml = new Xml(\"root\");\n        xml.addAttribute(\"k\", \"v\");",
        );
        let report = check_file(&table, "XmlGeneratedTest.java", &src);
        assert_eq!(report.diags.len(), 1);
        let d = &report.diags[0];
        assert_eq!(d.message, "cannot find symbol");
        assert_eq!(d.symbol.as_deref(), Some("method addAttribute(String,String)"));
        assert_eq!(d.location.as_deref(), Some("variable xml of type Xml"));
        let rendered = report.render_javac(&src);
        assert!(rendered.contains("error: cannot find symbol"));
        assert!(rendered.ends_with("1 error\n"));
    }

    #[test]
    fn unknown_class_reported() {
        let table = table_with(&[("src/main/java/com/fixture/xml/Xml.java", XML_SRC)]);
        let src = test_src("        Widget w = new Widget();");
        let report = check_file(&table, "XmlGeneratedTest.java", &src);
        assert_eq!(report.diags.len(), 2); // declared type + constructor
        assert!(report.diags.iter().all(|d| d.message == "cannot find symbol"));
        assert_eq!(report.diags[0].symbol.as_deref(), Some("class Widget"));
    }

    #[test]
    fn wrong_arity_is_cannot_be_applied() {
        let table = table_with(&[("src/main/java/com/fixture/xml/Xml.java", XML_SRC)]);
        let src = test_src(
            "        Xml xml = new Xml(\"root\");\n        xml.setAttribute(\"k\");",
        );
        let report = check_file(&table, "XmlGeneratedTest.java", &src);
        assert_eq!(report.diags.len(), 1);
        assert!(report.diags[0]
            .message
            .starts_with("method setAttribute in class Xml cannot be applied"));
        assert!(report.diags[0]
            .notes
            .iter()
            .any(|n| n.contains("differ in length")));
    }

    #[test]
    fn incompatible_literal_assignment() {
        let table = table_with(&[("src/main/java/com/fixture/xml/Xml.java", XML_SRC)]);
        let src = test_src("        int count = \"three\";");
        let report = check_file(&table, "XmlGeneratedTest.java", &src);
        assert_eq!(report.diags.len(), 1);
        assert_eq!(
            report.diags[0].message,
            "incompatible types: String cannot be converted to int"
        );
    }

    #[test]
    fn private_field_access() {
        let table = table_with(&[("src/main/java/com/fixture/xml/Xml.java", XML_SRC)]);
        let src = test_src(
            "        Xml xml = new Xml(\"root\");\n        xml.name = \"other\";",
        );
        let report = check_file(&table, "XmlGeneratedTest.java", &src);
        assert_eq!(report.diags.len(), 1);
        assert_eq!(report.diags[0].message, "name has private access in Xml");
    }

    #[test]
    fn abstract_instantiation() {
        let table = table_with(&[
            ("src/main/java/com/fixture/xml/Xml.java", XML_SRC),
            (
                "src/main/java/com/fixture/xml/Shape.java",
                "package com.fixture.xml;\npublic abstract class Shape { public abstract int area(); }\n",
            ),
        ]);
        let src = test_src("        Shape s = new Shape();");
        let report = check_file(&table, "XmlGeneratedTest.java", &src);
        assert_eq!(report.diags.len(), 1);
        assert_eq!(
            report.diags[0].message,
            "Shape is abstract; cannot be instantiated"
        );
    }

    #[test]
    fn opaque_jdk_classes_pass() {
        let table = ClassTable::new();
        let src = r#"
import java.util.ArrayList;
import java.util.List;

public class T {
    public void m() {
        List<String> xs = new ArrayList<>();
        xs.add("a");
    }
}
"#;
        let report = check_file(&table, "T.java", src);
        assert!(report.is_ok(), "unexpected diags: {:?}", report.diags);
    }

    #[test]
    fn syntax_errors_short_circuit() {
        let table = ClassTable::new();
        let report = check_file(&table, "T.java", "class T { void m() { int x = ; } }");
        assert!(!report.is_ok());
        let rendered = report.render_javac("class T { void m() { int x = ; } }");
        assert!(rendered.contains("error:"));
    }

    #[test]
    fn unknown_import_package() {
        let table = table_with(&[("src/main/java/com/fixture/xml/Xml.java", XML_SRC)]);
        let src = "import org.jdom.Element;\nclass T { }\n";
        let report = check_file(&table, "T.java", src);
        assert_eq!(report.diags.len(), 1);
        assert_eq!(report.diags[0].message, "package org.jdom does not exist");
    }
}
