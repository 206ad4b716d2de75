//! Small Java language toolkit.
//!
//! Four pieces, layered bottom-up:
//!
//! - [`parse`]: tree-sitter front end producing an owned declaration model
//!   with method bodies lowered to a statement/expression subset.
//! - [`model`] / [`ast`]: the owned data types.
//! - [`check`]: a declaration-level semantic checker that resolves names
//!   against a class table and renders javac-style error output.
//! - [`interp`]: a tree-walking interpreter for `@Test` methods that renders
//!   JUnit-style text runner output.
//!
//! The checker and interpreter cover the Java subset that generated unit
//! tests for small projects actually use; anything else is reported rather
//! than silently misevaluated.

pub mod ast;
pub mod check;
pub mod interp;
pub mod model;
pub mod parse;
pub mod runtime;

pub use model::{CompilationUnit, FieldDecl, Import, MethodDecl, Param, TypeDecl, TypeKind};
pub use parse::{is_syntactically_valid, parse_java, ParsedFile, SyntaxError};
