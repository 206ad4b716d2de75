//! tree-sitter based Java front end.
//!
//! Parses a source file into the owned [`CompilationUnit`] model, lowering
//! method bodies into the [`crate::ast`] subset as it goes. Parsing is
//! tolerant: syntax errors are collected, not fatal, so a best-effort model
//! is always available.

use tree_sitter::{Node, Parser};

use crate::ast::{BinOp, Expr, Pos, Stmt, UnOp};
use crate::model::{
    CompilationUnit, FieldDecl, Import, MethodDecl, Param, TypeDecl, TypeKind,
};

/// A syntax error reported by the grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

/// Result of parsing one source file.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedFile {
    pub unit: CompilationUnit,
    pub syntax_errors: Vec<SyntaxError>,
}

impl ParsedFile {
    pub fn is_valid(&self) -> bool {
        self.syntax_errors.is_empty()
    }
}

/// Parse Java source text. Never fails; grammar errors end up in
/// [`ParsedFile::syntax_errors`].
pub fn parse_java(source: &str) -> ParsedFile {
    let mut parser = Parser::new();
    parser
        .set_language(&tree_sitter_java::LANGUAGE.into())
        .expect("tree-sitter-java grammar incompatible with linked tree-sitter");
    let tree = parser.parse(source, None).expect("tree-sitter parse");
    let root = tree.root_node();

    let mut syntax_errors = Vec::new();
    if root.has_error() {
        collect_syntax_errors(root, source, &mut syntax_errors);
    }

    let mut unit = CompilationUnit {
        package: None,
        imports: Vec::new(),
        types: Vec::new(),
    };

    let mut cursor = root.walk();
    for child in root.named_children(&mut cursor) {
        match child.kind() {
            "package_declaration" => {
                let mut c2 = child.walk();
                for n in child.named_children(&mut c2) {
                    if matches!(n.kind(), "scoped_identifier" | "identifier") {
                        unit.package = Some(text(n, source).to_string());
                    }
                }
            }
            "import_declaration" => {
                let mut is_static = false;
                let mut path = String::new();
                let mut wildcard = false;
                let mut c2 = child.walk();
                for n in child.children(&mut c2) {
                    match n.kind() {
                        "static" => is_static = true,
                        "scoped_identifier" | "identifier" => {
                            path = text(n, source).to_string()
                        }
                        "asterisk" => wildcard = true,
                        _ => {}
                    }
                }
                if wildcard {
                    path.push_str(".*");
                }
                unit.imports.push(Import {
                    path,
                    is_static,
                    line: line_of(child),
                });
            }
            "class_declaration" | "interface_declaration" | "enum_declaration" => {
                unit.types.push(extract_type(child, source, ""));
            }
            _ => {}
        }
    }

    ParsedFile {
        unit,
        syntax_errors,
    }
}

/// True when the source parses without grammar errors.
pub fn is_syntactically_valid(source: &str) -> bool {
    parse_java(source).is_valid()
}

fn collect_syntax_errors(node: Node<'_>, source: &str, out: &mut Vec<SyntaxError>) {
    if node.is_error() {
        let snippet: String = text(node, source).chars().take(20).collect();
        out.push(SyntaxError {
            line: line_of(node),
            col: node.start_position().column as u32,
            message: format!("illegal start of expression near '{}'", snippet.trim()),
        });
        return;
    }
    if node.is_missing() {
        out.push(SyntaxError {
            line: line_of(node),
            col: node.start_position().column as u32,
            message: format!("'{}' expected", node.kind()),
        });
        return;
    }
    let mut cursor = node.walk();
    for child in node.children(&mut cursor) {
        if child.has_error() || child.is_missing() {
            collect_syntax_errors(child, source, out);
        }
    }
}

fn text<'s>(node: Node<'_>, source: &'s str) -> &'s str {
    &source[node.byte_range()]
}

fn line_of(node: Node<'_>) -> u32 {
    node.start_position().row as u32 + 1
}

fn pos_of(node: Node<'_>) -> Pos {
    Pos {
        line: line_of(node),
        col: node.start_position().column as u32,
    }
}

fn is_comment(kind: &str) -> bool {
    matches!(kind, "line_comment" | "block_comment")
}

/// Modifier keywords and annotation names from a `modifiers` child.
fn modifiers_of(node: Node<'_>, source: &str) -> (Vec<String>, Vec<String>) {
    let mut keywords = Vec::new();
    let mut annotations = Vec::new();
    let mut cursor = node.walk();
    for child in node.children(&mut cursor) {
        if is_comment(child.kind()) {
            continue;
        }
        match child.kind() {
            "marker_annotation" | "annotation" => {
                if let Some(name) = child.child_by_field_name("name") {
                    annotations.push(text(name, source).to_string());
                }
            }
            _ => keywords.push(text(child, source).to_string()),
        }
    }
    (keywords, annotations)
}

fn find_modifiers(node: Node<'_>) -> Option<Node<'_>> {
    let mut cursor = node.walk();
    let found = node
        .children(&mut cursor)
        .find(|c| c.kind() == "modifiers");
    found
}

/// Collapse all whitespace runs to single spaces; used for header/field text.
fn normalize_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Header text of a declaration: from the first non-annotation token to the
/// byte before `end_byte`, whitespace-normalized.
fn header_text(node: Node<'_>, source: &str, end_byte: usize) -> String {
    let mut start = node.start_byte();
    if let Some(mods) = find_modifiers(node) {
        // Skip leading annotations but keep modifier keywords.
        let mut cursor = mods.walk();
        for child in mods.children(&mut cursor) {
            match child.kind() {
                "marker_annotation" | "annotation" => start = child.end_byte(),
                _ if is_comment(child.kind()) => start = child.end_byte(),
                _ => {
                    start = child.start_byte();
                    break;
                }
            }
        }
        if start >= end_byte {
            start = mods.end_byte().min(end_byte);
        }
    }
    normalize_ws(source[start..end_byte].trim())
}

fn extract_type(node: Node<'_>, source: &str, parent_path: &str) -> TypeDecl {
    let kind = match node.kind() {
        "interface_declaration" => TypeKind::Interface,
        "enum_declaration" => TypeKind::Enum,
        _ => TypeKind::Class,
    };
    let name = node
        .child_by_field_name("name")
        .map(|n| text(n, source).to_string())
        .unwrap_or_default();
    let nested_name = if parent_path.is_empty() {
        name.clone()
    } else {
        format!("{parent_path}.{name}")
    };
    let (modifiers, _annotations) = find_modifiers(node)
        .map(|m| modifiers_of(m, source))
        .unwrap_or_default();

    let body = node.child_by_field_name("body");
    let decl_end = body.map(|b| b.start_byte()).unwrap_or(node.end_byte());
    let declaration = header_text(node, source, decl_end);

    let superclass = node.child_by_field_name("superclass").map(|sc| {
        // `superclass` node spells `extends T`; keep only the type text.
        let t = text(sc, source);
        normalize_ws(t.trim_start_matches("extends").trim())
    });

    let mut fields = Vec::new();
    let mut methods = Vec::new();
    let mut nested = Vec::new();

    if let Some(body) = body {
        let mut cursor = body.walk();
        for child in body.named_children(&mut cursor) {
            match child.kind() {
                "field_declaration" => extract_fields(child, source, &mut fields),
                "method_declaration" => {
                    methods.push(extract_method(child, source, &name, false))
                }
                "constructor_declaration" => {
                    methods.push(extract_method(child, source, &name, true))
                }
                "class_declaration" | "interface_declaration" | "enum_declaration" => {
                    nested.push(extract_type(child, source, &nested_name));
                }
                // enum constants and initializer blocks are outside the subset
                _ => {}
            }
        }
    }

    TypeDecl {
        kind,
        name,
        nested_name,
        declaration,
        modifiers,
        superclass,
        fields,
        methods,
        nested,
        start_line: line_of(node),
        end_line: node.end_position().row as u32 + 1,
    }
}

fn extract_fields(node: Node<'_>, source: &str, out: &mut Vec<FieldDecl>) {
    let (modifiers, _) = find_modifiers(node)
        .map(|m| modifiers_of(m, source))
        .unwrap_or_default();
    let type_text = node
        .child_by_field_name("type")
        .map(|t| normalize_ws(text(t, source)))
        .unwrap_or_default();
    let decl_text = {
        let raw = header_text(node, source, node.end_byte());
        if raw.ends_with(';') {
            raw
        } else {
            format!("{raw};")
        }
    };
    let mut cursor = node.walk();
    for decl in node.children_by_field_name("declarator", &mut cursor) {
        let name = decl
            .child_by_field_name("name")
            .map(|n| text(n, source).to_string())
            .unwrap_or_default();
        let init = decl
            .child_by_field_name("value")
            .map(|v| lower_expr(v, source));
        out.push(FieldDecl {
            name,
            type_text: type_text.clone(),
            text: decl_text.clone(),
            modifiers: modifiers.clone(),
            init,
            line: line_of(node),
        });
    }
}

fn extract_method(
    node: Node<'_>,
    source: &str,
    class_name: &str,
    is_constructor: bool,
) -> MethodDecl {
    let (modifiers, annotations) = find_modifiers(node)
        .map(|m| modifiers_of(m, source))
        .unwrap_or_default();
    let name = node
        .child_by_field_name("name")
        .map(|n| text(n, source).to_string())
        .unwrap_or_default();
    let return_type = if is_constructor {
        class_name.to_string()
    } else {
        node.child_by_field_name("type")
            .map(|t| normalize_ws(text(t, source)))
            .unwrap_or_else(|| "void".to_string())
    };

    let mut params = Vec::new();
    if let Some(plist) = node.child_by_field_name("parameters") {
        let mut cursor = plist.walk();
        for p in plist.named_children(&mut cursor) {
            if p.kind() == "formal_parameter" || p.kind() == "spread_parameter" {
                let ptype = p
                    .child_by_field_name("type")
                    .map(|t| normalize_ws(text(t, source)))
                    .unwrap_or_default();
                let pname = p
                    .child_by_field_name("name")
                    .map(|n| text(n, source).to_string())
                    .unwrap_or_default();
                params.push(Param {
                    type_text: ptype,
                    name: pname,
                });
            }
        }
    }

    let body_node = node.child_by_field_name("body");
    let sig_end = body_node.map(|b| b.start_byte()).unwrap_or(node.end_byte());
    let mut signature_text = header_text(node, source, sig_end);
    if !signature_text.ends_with(';') {
        signature_text.push(';');
    }

    let body = body_node.map(|b| lower_block(b, source));

    MethodDecl {
        name,
        params,
        return_type,
        modifiers,
        annotations,
        signature_text,
        is_constructor,
        start_line: line_of(node),
        end_line: node.end_position().row as u32 + 1,
        body,
    }
}

// ---------------------------------------------------------------------------
// Statement/expression lowering
// ---------------------------------------------------------------------------

fn lower_block(node: Node<'_>, source: &str) -> Vec<Stmt> {
    let mut out = Vec::new();
    let mut cursor = node.walk();
    for child in node.named_children(&mut cursor) {
        if is_comment(child.kind()) {
            continue;
        }
        lower_stmt_into(child, source, &mut out);
    }
    out
}

/// Lower a statement node; wraps non-block bodies into single-element vecs.
fn lower_stmt_list(node: Node<'_>, source: &str) -> Vec<Stmt> {
    if node.kind() == "block" {
        lower_block(node, source)
    } else {
        let mut out = Vec::new();
        lower_stmt_into(node, source, &mut out);
        out
    }
}

fn lower_stmt_into(node: Node<'_>, source: &str, out: &mut Vec<Stmt>) {
    let pos = pos_of(node);
    match node.kind() {
        "local_variable_declaration" => {
            let type_text = node
                .child_by_field_name("type")
                .map(|t| normalize_ws(text(t, source)))
                .unwrap_or_default();
            let mut cursor = node.walk();
            for decl in node.children_by_field_name("declarator", &mut cursor) {
                let name = decl
                    .child_by_field_name("name")
                    .map(|n| text(n, source).to_string())
                    .unwrap_or_default();
                let init = decl
                    .child_by_field_name("value")
                    .map(|v| lower_expr(v, source));
                out.push(Stmt::Local {
                    type_text: type_text.clone(),
                    name,
                    init,
                    pos,
                });
            }
        }
        "expression_statement" => {
            if let Some(e) = node.named_child(0) {
                out.push(Stmt::Expr(lower_expr(e, source)));
            }
        }
        "if_statement" => {
            let cond = node
                .child_by_field_name("condition")
                .map(|c| lower_expr(strip_parens(c), source))
                .unwrap_or(Expr::Bool(true, pos));
            let then = node
                .child_by_field_name("consequence")
                .map(|n| lower_stmt_list(n, source))
                .unwrap_or_default();
            let otherwise = node
                .child_by_field_name("alternative")
                .map(|n| lower_stmt_list(n, source))
                .unwrap_or_default();
            out.push(Stmt::If {
                cond,
                then,
                otherwise,
                pos,
            });
        }
        "while_statement" => {
            let cond = node
                .child_by_field_name("condition")
                .map(|c| lower_expr(strip_parens(c), source))
                .unwrap_or(Expr::Bool(false, pos));
            let body = node
                .child_by_field_name("body")
                .map(|n| lower_stmt_list(n, source))
                .unwrap_or_default();
            out.push(Stmt::While { cond, body, pos });
        }
        "for_statement" => {
            let mut init_stmts = Vec::new();
            let mut cursor = node.walk();
            for i in node.children_by_field_name("init", &mut cursor) {
                lower_stmt_into(i, source, &mut init_stmts);
            }
            let cond = node
                .child_by_field_name("condition")
                .map(|c| lower_expr(strip_parens(c), source));
            let mut update = Vec::new();
            let mut cursor2 = node.walk();
            for u in node.children_by_field_name("update", &mut cursor2) {
                update.push(lower_expr(u, source));
            }
            let body = node
                .child_by_field_name("body")
                .map(|n| lower_stmt_list(n, source))
                .unwrap_or_default();
            // Multiple init declarators: keep the first as the loop header,
            // hoist the rest just before (rare; preserves evaluation order).
            let mut init_iter = init_stmts.into_iter();
            let first = init_iter.next().map(Box::new);
            let rest: Vec<Stmt> = init_iter.collect();
            for s in rest {
                out.push(s);
            }
            out.push(Stmt::For {
                init: first,
                cond,
                update,
                body,
                pos,
            });
        }
        "return_statement" => {
            let value = node.named_child(0).map(|v| lower_expr(v, source));
            out.push(Stmt::Return { value, pos });
        }
        "throw_statement" => {
            let value = node
                .named_child(0)
                .map(|v| lower_expr(v, source))
                .unwrap_or(Expr::Null(pos));
            out.push(Stmt::Throw { value, pos });
        }
        "block" => out.push(Stmt::Block(lower_block(node, source))),
        ";" | "line_comment" | "block_comment" => {}
        other => out.push(Stmt::Unsupported {
            what: other.to_string(),
            pos,
        }),
    }
}

fn strip_parens(node: Node<'_>) -> Node<'_> {
    if node.kind() == "parenthesized_expression" {
        if let Some(inner) = node.named_child(0) {
            return inner;
        }
    }
    node
}

fn lower_expr(node: Node<'_>, source: &str) -> Expr {
    let pos = pos_of(node);
    match node.kind() {
        "decimal_integer_literal"
        | "hex_integer_literal"
        | "octal_integer_literal"
        | "binary_integer_literal" => {
            let t = text(node, source).replace('_', "");
            let t = t.trim_end_matches(['l', 'L']);
            let value = if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
                i64::from_str_radix(hex, 16).unwrap_or(0)
            } else if let Some(bin) = t.strip_prefix("0b").or_else(|| t.strip_prefix("0B")) {
                i64::from_str_radix(bin, 2).unwrap_or(0)
            } else {
                t.parse().unwrap_or(0)
            };
            Expr::Int(value, pos)
        }
        "decimal_floating_point_literal" => {
            let t = text(node, source).replace('_', "");
            let t = t.trim_end_matches(['f', 'F', 'd', 'D']);
            Expr::Double(t.parse().unwrap_or(0.0), pos)
        }
        "true" => Expr::Bool(true, pos),
        "false" => Expr::Bool(false, pos),
        "null_literal" => Expr::Null(pos),
        "character_literal" => {
            let t = text(node, source);
            let inner = t.trim_start_matches('\'').trim_end_matches('\'');
            Expr::Char(unescape(inner).chars().next().unwrap_or('\0'), pos)
        }
        "string_literal" => {
            let mut s = String::new();
            let mut cursor = node.walk();
            for child in node.children(&mut cursor) {
                match child.kind() {
                    "string_fragment" => s.push_str(text(child, source)),
                    "escape_sequence" => s.push_str(&unescape(text(child, source))),
                    _ => {}
                }
            }
            Expr::Str(s, pos)
        }
        "identifier" => Expr::Name(text(node, source).to_string(), pos),
        "this" => Expr::Name("this".to_string(), pos),
        "field_access" => {
            let object = node
                .child_by_field_name("object")
                .map(|o| lower_expr(o, source))
                .unwrap_or(Expr::Null(pos));
            let name = node
                .child_by_field_name("field")
                .map(|f| text(f, source).to_string())
                .unwrap_or_default();
            Expr::Field {
                object: Box::new(object),
                name,
                pos,
            }
        }
        "method_invocation" => {
            let receiver = node
                .child_by_field_name("object")
                .map(|o| Box::new(lower_expr(o, source)));
            let name_node = node.child_by_field_name("name");
            let name = name_node
                .map(|n| text(n, source).to_string())
                .unwrap_or_default();
            let call_pos = name_node.map(pos_of).unwrap_or(pos);
            let args = node
                .child_by_field_name("arguments")
                .map(|a| lower_args(a, source))
                .unwrap_or_default();
            Expr::Call {
                receiver,
                name,
                args,
                pos: call_pos,
            }
        }
        "object_creation_expression" => {
            let type_node = node.child_by_field_name("type");
            let (class, diamond) = match type_node {
                Some(t) if t.kind() == "generic_type" => {
                    let base = t
                        .named_child(0)
                        .map(|n| text(n, source).to_string())
                        .unwrap_or_default();
                    let diamond = t
                        .child_by_field_name("type_arguments")
                        .or_else(|| {
                            let mut c = t.walk();
                            let found =
                                t.children(&mut c).find(|n| n.kind() == "type_arguments");
                            found
                        })
                        .map(|ta| ta.named_child_count() == 0)
                        .unwrap_or(false);
                    (base, diamond)
                }
                Some(t) => (normalize_ws(text(t, source)), false),
                None => (String::new(), false),
            };
            let new_pos = type_node.map(pos_of).unwrap_or(pos);
            let args = node
                .child_by_field_name("arguments")
                .map(|a| lower_args(a, source))
                .unwrap_or_default();
            Expr::New {
                class,
                args,
                diamond,
                pos: new_pos,
            }
        }
        "binary_expression" => {
            let op_text = node
                .child_by_field_name("operator")
                .map(|o| text(o, source))
                .unwrap_or("+");
            let lhs = node
                .child_by_field_name("left")
                .map(|l| lower_expr(l, source))
                .unwrap_or(Expr::Null(pos));
            let rhs = node
                .child_by_field_name("right")
                .map(|r| lower_expr(r, source))
                .unwrap_or(Expr::Null(pos));
            match BinOp::from_str(op_text) {
                Some(op) => Expr::Binary {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                    pos,
                },
                None => Expr::Unsupported {
                    what: format!("operator {op_text}"),
                    pos,
                },
            }
        }
        "unary_expression" => {
            let op_text = node
                .child_by_field_name("operator")
                .map(|o| text(o, source))
                .unwrap_or("-");
            let operand = node
                .child_by_field_name("operand")
                .map(|o| lower_expr(o, source))
                .unwrap_or(Expr::Null(pos));
            let op = match op_text {
                "!" => UnOp::Not,
                _ => UnOp::Neg,
            };
            Expr::Unary {
                op,
                operand: Box::new(operand),
                pos,
            }
        }
        "assignment_expression" => {
            let target = node
                .child_by_field_name("left")
                .map(|l| lower_expr(l, source))
                .unwrap_or(Expr::Null(pos));
            let value = node
                .child_by_field_name("right")
                .map(|r| lower_expr(r, source))
                .unwrap_or(Expr::Null(pos));
            let op_text = node
                .child_by_field_name("operator")
                .map(|o| text(o, source))
                .unwrap_or("=");
            let op = match op_text {
                "=" => None,
                other => BinOp::from_str(other.trim_end_matches('=')),
            };
            Expr::Assign {
                target: Box::new(target),
                op,
                value: Box::new(value),
                pos,
            }
        }
        "update_expression" => {
            // i++ / --i lower to compound assignment; the expression value is
            // the updated value, which is close enough for the subset.
            let t = text(node, source);
            let inc = t.contains("++");
            let operand = node
                .named_child(0)
                .map(|o| lower_expr(o, source))
                .unwrap_or(Expr::Null(pos));
            Expr::Assign {
                target: Box::new(operand),
                op: Some(if inc { BinOp::Add } else { BinOp::Sub }),
                value: Box::new(Expr::Int(1, pos)),
                pos,
            }
        }
        "parenthesized_expression" => node
            .named_child(0)
            .map(|inner| lower_expr(inner, source))
            .unwrap_or(Expr::Null(pos)),
        "ternary_expression" => {
            let cond = node
                .child_by_field_name("condition")
                .map(|c| lower_expr(c, source))
                .unwrap_or(Expr::Bool(true, pos));
            let then = node
                .child_by_field_name("consequence")
                .map(|c| lower_expr(c, source))
                .unwrap_or(Expr::Null(pos));
            let otherwise = node
                .child_by_field_name("alternative")
                .map(|c| lower_expr(c, source))
                .unwrap_or(Expr::Null(pos));
            Expr::Ternary {
                cond: Box::new(cond),
                then: Box::new(then),
                otherwise: Box::new(otherwise),
                pos,
            }
        }
        "cast_expression" => {
            let type_text = node
                .child_by_field_name("type")
                .map(|t| normalize_ws(text(t, source)))
                .unwrap_or_default();
            let value = node
                .child_by_field_name("value")
                .map(|v| lower_expr(v, source))
                .unwrap_or(Expr::Null(pos));
            Expr::Cast {
                type_text,
                value: Box::new(value),
                pos,
            }
        }
        other => Expr::Unsupported {
            what: other.to_string(),
            pos,
        },
    }
}

fn lower_args(node: Node<'_>, source: &str) -> Vec<Expr> {
    let mut out = Vec::new();
    let mut cursor = node.walk();
    for child in node.named_children(&mut cursor) {
        if !is_comment(child.kind()) {
            out.push(lower_expr(child, source));
        }
    }
    out
}

fn unescape(s: &str) -> String {
    let mut out = String::new();
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('n') => out.push('\n'),
            Some('t') => out.push('\t'),
            Some('r') => out.push('\r'),
            Some('b') => out.push('\u{8}'),
            Some('f') => out.push('\u{c}'),
            Some('0') => out.push('\0'),
            Some('\\') => out.push('\\'),
            Some('\'') => out.push('\''),
            Some('"') => out.push('"'),
            Some('u') => {
                let hex: String = chars.by_ref().take(4).collect();
                if let Ok(cp) = u32::from_str_radix(&hex, 16) {
                    if let Some(ch) = char::from_u32(cp) {
                        out.push(ch);
                    }
                }
            }
            Some(other) => out.push(other),
            None => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{ArgShape, call_sites};

    const SAMPLE: &str = r#"package com.example;

import org.junit.Test;
import static org.junit.Assert.*;

public final class StrBuilder {
    private String value;
    private int modCount = 0;

    public StrBuilder(String initial) {
        this.value = initial;
    }

    public void setCharAt(int index, char ch) {
        value = value.substring(0, index) + ch + value.substring(index + 1);
        modCount = modCount + 1;
    }

    public int length() {
        return value.length();
    }

    public String toString() {
        return value;
    }
}
"#;

    #[test]
    fn parses_package_and_imports() {
        let parsed = parse_java(SAMPLE);
        assert!(parsed.is_valid());
        assert_eq!(parsed.unit.package.as_deref(), Some("com.example"));
        assert_eq!(parsed.unit.imports.len(), 2);
        assert!(parsed.unit.imports[1].is_static);
        assert_eq!(parsed.unit.imports[1].path, "org.junit.Assert.*");
        assert_eq!(parsed.unit.imports[0].simple_name(), Some("Test"));
    }

    #[test]
    fn extracts_class_structure() {
        let parsed = parse_java(SAMPLE);
        let t = parsed.unit.primary_type().unwrap();
        assert_eq!(t.name, "StrBuilder");
        assert_eq!(t.declaration, "public final class StrBuilder");
        assert_eq!(t.fields.len(), 2);
        assert_eq!(t.fields[0].text, "private String value;");
        assert!(t.fields[0].is_private());
        assert_eq!(t.methods.len(), 4);
        let ctor = t.constructors().next().unwrap();
        assert_eq!(ctor.signature_text, "public StrBuilder(String initial);");
        let set = t.methods_named("setCharAt").next().unwrap();
        assert_eq!(
            set.signature_text,
            "public void setCharAt(int index, char ch);"
        );
        assert_eq!(set.params.len(), 2);
        assert_eq!(set.params[0].type_text, "int");
    }

    #[test]
    fn annotation_detected_and_stripped_from_signature() {
        let src = r#"
class T {
    @Test
    public void testFoo() { int x = 1; }
}
"#;
        let parsed = parse_java(src);
        let m = &parsed.unit.types[0].methods[0];
        assert!(m.has_annotation("Test"));
        assert_eq!(m.signature_text, "public void testFoo();");
    }

    #[test]
    fn nested_class_names() {
        let src = "class Outer { class Inner { void m() {} } }";
        let parsed = parse_java(src);
        let outer = &parsed.unit.types[0];
        assert_eq!(outer.nested[0].nested_name, "Outer.Inner");
    }

    #[test]
    fn syntax_error_reported() {
        let parsed = parse_java("class T { void m() { int x = ; } }");
        assert!(!parsed.is_valid());
        assert!(parse_java("class Ok { }").is_valid());
    }

    #[test]
    fn call_sites_resolve_local_types() {
        let src = r#"
class T {
    void m() {
        Calc c = new Calc();
        c.sum(2, 3);
        String s = "x";
        c.pad(s);
        c.pad(helper());
    }
}
"#;
        let parsed = parse_java(src);
        let body = parsed.unit.types[0].methods[0].body.as_ref().unwrap();
        let calls = call_sites(body);
        let sum = calls.iter().find(|c| c.name == "sum").unwrap();
        assert_eq!(sum.args, vec![ArgShape::Int, ArgShape::Int]);
        let pads: Vec<_> = calls.iter().filter(|c| c.name == "pad").collect();
        assert_eq!(pads[0].args, vec![ArgShape::Typed("String".into())]);
        assert_eq!(pads[1].args, vec![ArgShape::Opaque]);
    }

    #[test]
    fn string_escapes_unescaped() {
        let src = r#"class T { void m() { String s = "a\nb\"c"; } }"#;
        let parsed = parse_java(src);
        let body = parsed.unit.types[0].methods[0].body.as_ref().unwrap();
        match &body[0] {
            Stmt::Local {
                init: Some(Expr::Str(s, _)),
                ..
            } => assert_eq!(s, "a\nb\"c"),
            other => panic!("unexpected lowering: {other:?}"),
        }
    }
}
