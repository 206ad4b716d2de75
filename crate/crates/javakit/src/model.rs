//! Owned declaration-level model of a Java compilation unit.
//!
//! Produced by [`crate::parse::parse_java`]; carries no references into the
//! tree-sitter tree, so it can be stored, indexed, and shared freely.

use crate::ast::{Expr, Stmt};

/// Kind of a top-level or nested type declaration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeKind {
    Class,
    Interface,
    Enum,
}

impl TypeKind {
    pub fn keyword(self) -> &'static str {
        match self {
            TypeKind::Class => "class",
            TypeKind::Interface => "interface",
            TypeKind::Enum => "enum",
        }
    }
}

/// A single `import` statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Import {
    /// Dotted path as written, without `import`/`static`/`;` (may end in `.*`).
    pub path: String,
    pub is_static: bool,
    pub line: u32,
}

impl Import {
    /// Simple name introduced by a non-wildcard import (`a.b.C` -> `C`).
    pub fn simple_name(&self) -> Option<&str> {
        if self.path.ends_with(".*") {
            return None;
        }
        self.path.rsplit('.').next()
    }
}

/// One field declaration. Multi-declarator fields (`int a, b;`) produce one
/// `FieldDecl` per declared name, all sharing the same `text`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldDecl {
    pub name: String,
    pub type_text: String,
    /// Verbatim declaration text, trimmed, e.g. `private String value;`
    pub text: String,
    pub modifiers: Vec<String>,
    pub init: Option<Expr>,
    pub line: u32,
}

impl FieldDecl {
    pub fn is_private(&self) -> bool {
        self.modifiers.iter().any(|m| m == "private")
    }
    pub fn is_static(&self) -> bool {
        self.modifiers.iter().any(|m| m == "static")
    }
}

/// A formal parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub type_text: String,
    pub name: String,
}

/// A method or constructor declaration, with its body lowered to [`Stmt`]s.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodDecl {
    pub name: String,
    pub params: Vec<Param>,
    /// Declared return type text; constructors use the class name.
    pub return_type: String,
    pub modifiers: Vec<String>,
    /// Simple annotation names, without `@` (e.g. `Test`, `Override`).
    pub annotations: Vec<String>,
    /// Header text up to (not including) the body brace, trimmed, plus `;`.
    pub signature_text: String,
    pub is_constructor: bool,
    /// 1-based line span covering the whole declaration.
    pub start_line: u32,
    pub end_line: u32,
    /// Lowered body; `None` for abstract/interface methods without a body.
    pub body: Option<Vec<Stmt>>,
}

impl MethodDecl {
    pub fn is_private(&self) -> bool {
        self.modifiers.iter().any(|m| m == "private")
    }
    pub fn is_static(&self) -> bool {
        self.modifiers.iter().any(|m| m == "static")
    }
    pub fn is_abstract(&self) -> bool {
        self.modifiers.iter().any(|m| m == "abstract")
    }
    pub fn has_annotation(&self, name: &str) -> bool {
        self.annotations.iter().any(|a| a == name)
    }
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

/// A class/interface/enum declaration.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeDecl {
    pub kind: TypeKind,
    /// Simple name (`StrBuilder`); nested types get `Outer.Inner` in
    /// [`TypeDecl::qualified_name`] via their own `name`.
    pub name: String,
    /// Dot-joined nesting path, e.g. `Outer.Inner` (equals `name` when top level).
    pub nested_name: String,
    /// Verbatim header text up to the body brace, e.g.
    /// `public final class StrBuilder implements CharSequence`.
    pub declaration: String,
    pub modifiers: Vec<String>,
    pub superclass: Option<String>,
    pub fields: Vec<FieldDecl>,
    /// Constructors and methods, in declaration order (constructors keep
    /// `is_constructor = true`).
    pub methods: Vec<MethodDecl>,
    pub nested: Vec<TypeDecl>,
    pub start_line: u32,
    pub end_line: u32,
}

impl TypeDecl {
    pub fn is_abstract(&self) -> bool {
        self.kind == TypeKind::Interface || self.modifiers.iter().any(|m| m == "abstract")
    }

    pub fn constructors(&self) -> impl Iterator<Item = &MethodDecl> {
        self.methods.iter().filter(|m| m.is_constructor)
    }

    pub fn methods_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a MethodDecl> {
        self.methods
            .iter()
            .filter(move |m| !m.is_constructor && m.name == name)
    }
}

/// A parsed Java source file.
#[derive(Debug, Clone, PartialEq)]
pub struct CompilationUnit {
    pub package: Option<String>,
    pub imports: Vec<Import>,
    pub types: Vec<TypeDecl>,
}

impl CompilationUnit {
    /// The first top-level type, which names the file in javac convention.
    pub fn primary_type(&self) -> Option<&TypeDecl> {
        self.types.first()
    }

    /// Qualified name of a type declared in this unit.
    pub fn qualify(&self, nested_name: &str) -> String {
        match &self.package {
            Some(p) => format!("{p}.{nested_name}"),
            None => nested_name.to_string(),
        }
    }

    /// All type declarations, including nested ones, depth first.
    pub fn all_types(&self) -> Vec<&TypeDecl> {
        let mut out = Vec::new();
        fn walk<'a>(t: &'a TypeDecl, out: &mut Vec<&'a TypeDecl>) {
            out.push(t);
            for n in &t.nested {
                walk(n, out);
            }
        }
        for t in &self.types {
            walk(t, &mut out);
        }
        out
    }
}
