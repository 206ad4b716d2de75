//! Lowered statement/expression AST for method bodies.
//!
//! The checker and the interpreter both work on this form rather than on raw
//! tree-sitter nodes. Constructs outside the supported subset lower to
//! `Unsupported`, which the checker ignores and the interpreter rejects at
//! run time.

/// Binary operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinOp {
    pub fn from_str(s: &str) -> Option<BinOp> {
        Some(match s {
            "+" => BinOp::Add,
            "-" => BinOp::Sub,
            "*" => BinOp::Mul,
            "/" => BinOp::Div,
            "%" => BinOp::Rem,
            "==" => BinOp::Eq,
            "!=" => BinOp::Ne,
            "<" => BinOp::Lt,
            "<=" => BinOp::Le,
            ">" => BinOp::Gt,
            ">=" => BinOp::Ge,
            "&&" => BinOp::And,
            "||" => BinOp::Or,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnOp {
    Neg,
    Not,
}

/// Source position (1-based line, 0-based column) carried for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Null(Pos),
    Int(i64, Pos),
    Double(f64, Pos),
    Bool(bool, Pos),
    Char(char, Pos),
    Str(String, Pos),
    /// Bare identifier, including `this`.
    Name(String, Pos),
    Field {
        object: Box<Expr>,
        name: String,
        pos: Pos,
    },
    Call {
        /// `None` for unqualified calls (own method or static import).
        receiver: Option<Box<Expr>>,
        name: String,
        args: Vec<Expr>,
        pos: Pos,
    },
    New {
        class: String,
        args: Vec<Expr>,
        /// `new ArrayList<>()` style empty type arguments.
        diamond: bool,
        pos: Pos,
    },
    Unary {
        op: UnOp,
        operand: Box<Expr>,
        pos: Pos,
    },
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
        pos: Pos,
    },
    Assign {
        target: Box<Expr>,
        /// Compound assignment operator (`+=` carries `Some(Add)`).
        op: Option<BinOp>,
        value: Box<Expr>,
        pos: Pos,
    },
    Ternary {
        cond: Box<Expr>,
        then: Box<Expr>,
        otherwise: Box<Expr>,
        pos: Pos,
    },
    Cast {
        type_text: String,
        value: Box<Expr>,
        pos: Pos,
    },
    Unsupported {
        what: String,
        pos: Pos,
    },
}

impl Expr {
    pub fn pos(&self) -> Pos {
        match self {
            Expr::Null(p)
            | Expr::Int(_, p)
            | Expr::Double(_, p)
            | Expr::Bool(_, p)
            | Expr::Char(_, p)
            | Expr::Str(_, p)
            | Expr::Name(_, p) => *p,
            Expr::Field { pos, .. }
            | Expr::Call { pos, .. }
            | Expr::New { pos, .. }
            | Expr::Unary { pos, .. }
            | Expr::Binary { pos, .. }
            | Expr::Assign { pos, .. }
            | Expr::Ternary { pos, .. }
            | Expr::Cast { pos, .. }
            | Expr::Unsupported { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    Local {
        type_text: String,
        name: String,
        init: Option<Expr>,
        pos: Pos,
    },
    Expr(Expr),
    If {
        cond: Expr,
        then: Vec<Stmt>,
        otherwise: Vec<Stmt>,
        pos: Pos,
    },
    While {
        cond: Expr,
        body: Vec<Stmt>,
        pos: Pos,
    },
    For {
        init: Option<Box<Stmt>>,
        cond: Option<Expr>,
        update: Vec<Expr>,
        body: Vec<Stmt>,
        pos: Pos,
    },
    Return {
        value: Option<Expr>,
        pos: Pos,
    },
    Throw {
        value: Expr,
        pos: Pos,
    },
    Block(Vec<Stmt>),
    Unsupported {
        what: String,
        pos: Pos,
    },
}

/// Statically-visible shape of a call argument, used for overload matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArgShape {
    Int,
    Double,
    Boolean,
    Char,
    Str,
    Null,
    /// `new T(...)` argument: the constructed type's simple name.
    New(String),
    /// Identifier whose declared local type is visible: the declared type text.
    Typed(String),
    /// Anything whose type is not statically visible here.
    Opaque,
}

/// A call site observed inside a method body.
#[derive(Debug, Clone, PartialEq)]
pub struct CallSite {
    pub name: String,
    pub args: Vec<ArgShape>,
    pub line: u32,
}

/// Collect every call site in a body, resolving identifier arguments against
/// local declarations seen so far (single pass, declaration order).
pub fn call_sites(body: &[Stmt]) -> Vec<CallSite> {
    let mut locals: std::collections::HashMap<String, String> = std::collections::HashMap::new();
    let mut out = Vec::new();
    walk_stmts(body, &mut locals, &mut out);
    out
}

fn walk_stmts(
    stmts: &[Stmt],
    locals: &mut std::collections::HashMap<String, String>,
    out: &mut Vec<CallSite>,
) {
    for s in stmts {
        match s {
            Stmt::Local {
                type_text,
                name,
                init,
                ..
            } => {
                if let Some(e) = init {
                    walk_expr(e, locals, out);
                }
                locals.insert(name.clone(), type_text.clone());
            }
            Stmt::Expr(e) => walk_expr(e, locals, out),
            Stmt::If {
                cond,
                then,
                otherwise,
                ..
            } => {
                walk_expr(cond, locals, out);
                walk_stmts(then, locals, out);
                walk_stmts(otherwise, locals, out);
            }
            Stmt::While { cond, body, .. } => {
                walk_expr(cond, locals, out);
                walk_stmts(body, locals, out);
            }
            Stmt::For {
                init,
                cond,
                update,
                body,
                ..
            } => {
                if let Some(i) = init {
                    walk_stmts(std::slice::from_ref(i), locals, out);
                }
                if let Some(c) = cond {
                    walk_expr(c, locals, out);
                }
                for u in update {
                    walk_expr(u, locals, out);
                }
                walk_stmts(body, locals, out);
            }
            Stmt::Return { value, .. } => {
                if let Some(v) = value {
                    walk_expr(v, locals, out);
                }
            }
            Stmt::Throw { value, .. } => walk_expr(value, locals, out),
            Stmt::Block(inner) => walk_stmts(inner, locals, out),
            Stmt::Unsupported { .. } => {}
        }
    }
}

fn walk_expr(
    e: &Expr,
    locals: &std::collections::HashMap<String, String>,
    out: &mut Vec<CallSite>,
) {
    match e {
        Expr::Call {
            receiver,
            name,
            args,
            pos,
        } => {
            if let Some(r) = receiver {
                walk_expr(r, locals, out);
            }
            for a in args {
                walk_expr(a, locals, out);
            }
            out.push(CallSite {
                name: name.clone(),
                args: args.iter().map(|a| arg_shape(a, locals)).collect(),
                line: pos.line,
            });
        }
        Expr::New { args, .. } => {
            for a in args {
                walk_expr(a, locals, out);
            }
        }
        Expr::Field { object, .. } => walk_expr(object, locals, out),
        Expr::Unary { operand, .. } => walk_expr(operand, locals, out),
        Expr::Binary { lhs, rhs, .. } => {
            walk_expr(lhs, locals, out);
            walk_expr(rhs, locals, out);
        }
        Expr::Assign { target, value, .. } => {
            walk_expr(target, locals, out);
            walk_expr(value, locals, out);
        }
        Expr::Ternary {
            cond,
            then,
            otherwise,
            ..
        } => {
            walk_expr(cond, locals, out);
            walk_expr(then, locals, out);
            walk_expr(otherwise, locals, out);
        }
        Expr::Cast { value, .. } => walk_expr(value, locals, out),
        _ => {}
    }
}

fn arg_shape(e: &Expr, locals: &std::collections::HashMap<String, String>) -> ArgShape {
    match e {
        Expr::Int(..) => ArgShape::Int,
        Expr::Double(..) => ArgShape::Double,
        Expr::Bool(..) => ArgShape::Boolean,
        Expr::Char(..) => ArgShape::Char,
        Expr::Str(..) => ArgShape::Str,
        Expr::Null(..) => ArgShape::Null,
        Expr::New { class, .. } => ArgShape::New(class.clone()),
        Expr::Name(n, _) => match locals.get(n) {
            Some(t) => ArgShape::Typed(t.clone()),
            None => ArgShape::Opaque,
        },
        Expr::Unary { operand, .. } => arg_shape(operand, locals),
        Expr::Cast { type_text, .. } => ArgShape::Typed(type_text.clone()),
        _ => ArgShape::Opaque,
    }
}
