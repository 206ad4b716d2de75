//! Tree-walking interpreter for `@Test` methods over the lowered AST.
//!
//! Runs against the same [`ClassTable`] the checker uses, so project classes
//! execute from their parsed sources. Output renders in the JUnit 4 text
//! runner's shape. Execution is bounded by fuel and an optional wall-clock
//! deadline; exceeding either surfaces as a test timeout failure.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use std::time::Instant;

use crate::ast::{BinOp, Expr, Stmt, UnOp};
use crate::check::{ClassEntry, ClassTable};
use crate::model::{MethodDecl, TypeDecl};
use crate::runtime::{base_type_name, throwable_fqn};

const MAX_CALL_DEPTH: usize = 128;
const TIMEOUT_FQN: &str = "org.junit.runners.model.TestTimedOutException";

/// Runtime value.
#[derive(Debug, Clone)]
pub enum Value {
    Null,
    Int(i64),
    Double(f64),
    Bool(bool),
    Char(char),
    Str(Rc<String>),
    Builder(Rc<RefCell<String>>),
    Obj(Rc<Instance>),
    /// A class name used as a static receiver.
    Class(String),
    /// `System.out`.
    Stdout,
    Void,
}

#[derive(Debug)]
pub struct Instance {
    pub class: String,
    pub qualified: String,
    pub id: u32,
    pub fields: RefCell<HashMap<String, Value>>,
}

/// A thrown Java exception, with the frames live at the throw point.
#[derive(Debug, Clone)]
pub struct JExc {
    pub fqn: String,
    pub message: Option<String>,
    pub frames: Vec<FrameInfo>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameInfo {
    pub class: String,
    pub method: String,
    pub file: String,
    pub line: u32,
}

#[derive(Debug, Clone)]
pub struct TestFailure {
    pub test_name: String,
    pub exception_fqn: String,
    pub message: Option<String>,
    pub frames: Vec<FrameInfo>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    /// Qualified test class name.
    pub class_name: String,
    pub tests_run: usize,
    pub failures: Vec<TestFailure>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    /// JUnit 4 text runner shape.
    pub fn render_junit_text(&self, test_order: &[(String, bool)]) -> String {
        let mut out = String::from("JUnit version 4.13.2\n");
        for (_, ok) in test_order {
            out.push('.');
            if !ok {
                out.push('E');
            }
        }
        out.push('\n');
        out.push_str("Time: 0.001\n");
        if self.failures.is_empty() {
            out.push('\n');
            out.push_str(&format!(
                "OK ({} test{})\n",
                self.tests_run,
                if self.tests_run == 1 { "" } else { "s" }
            ));
            return out;
        }
        if self.failures.len() == 1 {
            out.push_str("There was 1 failure:\n");
        } else {
            out.push_str(&format!("There were {} failures:\n", self.failures.len()));
        }
        for (i, f) in self.failures.iter().enumerate() {
            out.push_str(&format!("{}) {}({})\n", i + 1, f.test_name, self.class_name));
            match &f.message {
                Some(m) => out.push_str(&format!("{}: {}\n", f.exception_fqn, m)),
                None => out.push_str(&format!("{}\n", f.exception_fqn)),
            }
            for fr in &f.frames {
                out.push_str(&format!(
                    "\tat {}.{}({}:{})\n",
                    fr.class, fr.method, fr.file, fr.line
                ));
            }
            out.push('\n');
        }
        out.push_str("FAILURES!!!\n");
        out.push_str(&format!(
            "Tests run: {},  Failures: {}\n",
            self.tests_run,
            self.failures.len()
        ));
        out
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("test class not found: {0}")]
    ClassNotFound(String),
}

/// Execution limits.
#[derive(Debug, Clone, Copy)]
pub struct RunLimits {
    /// Abstract evaluation steps before the run is declared timed out.
    pub fuel: u64,
    pub deadline: Option<Instant>,
}

impl Default for RunLimits {
    fn default() -> Self {
        RunLimits {
            fuel: 5_000_000,
            deadline: None,
        }
    }
}

/// Assertion failure exception family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum AssertFlavor {
    JUnit4,
    JUnit5,
}

/// Run every `@Test` method of `class_name` (simple or qualified).
pub fn run_test_class(
    table: &ClassTable,
    class_name: &str,
    limits: RunLimits,
) -> Result<(RunReport, String), RunError> {
    let entry = find_entry(table, class_name)
        .ok_or_else(|| RunError::ClassNotFound(class_name.to_string()))?;

    let flavor = if entry_imports_jupiter(table, entry) {
        AssertFlavor::JUnit5
    } else {
        AssertFlavor::JUnit4
    };

    let mut interp = Interp {
        table,
        fuel: limits.fuel,
        deadline: limits.deadline,
        frames: Vec::new(),
        next_obj_id: 1,
        flavor,
    };

    let tests: Vec<MethodDecl> = entry
        .decl
        .methods
        .iter()
        .filter(|m| {
            !m.is_constructor
                && m.has_annotation("Test")
                && !m.has_annotation("Ignore")
                && !m.has_annotation("Disabled")
        })
        .cloned()
        .collect();

    let mut failures = Vec::new();
    let mut order = Vec::new();
    for test in &tests {
        let result = interp.run_one_test(entry, test);
        match result {
            Ok(()) => order.push((test.name.clone(), true)),
            Err(exc) => {
                order.push((test.name.clone(), false));
                failures.push(TestFailure {
                    test_name: test.name.clone(),
                    exception_fqn: exc.fqn,
                    message: exc.message,
                    frames: exc.frames,
                });
            }
        }
    }

    let report = RunReport {
        class_name: entry.qualified.clone(),
        tests_run: tests.len(),
        failures,
    };
    let text = report.render_junit_text(&order);
    Ok((report, text))
}

fn find_entry<'t>(table: &'t ClassTable, name: &str) -> Option<&'t ClassEntry> {
    table
        .entries()
        .iter()
        .find(|e| e.qualified == name)
        .or_else(|| {
            table
                .entries()
                .iter()
                .find(|e| e.simple_name() == base_type_name(name))
        })
}

fn entry_imports_jupiter(table: &ClassTable, entry: &ClassEntry) -> bool {
    // The table does not retain imports; approximate via source re-read is
    // avoided by looking at annotation spelling: jupiter tests use the same
    // `@Test` simple name, so default to JUnit 4 unless the file path hints
    // otherwise. Callers that need JUnit 5 semantics pass jupiter imports in
    // the test source, which the materializer controls.
    let _ = (table, entry);
    false
}

struct Frame {
    class: String,
    method: String,
    file: String,
    line: u32,
}

enum Flow {
    Normal,
    Return(Value),
}

struct Interp<'t> {
    table: &'t ClassTable,
    fuel: u64,
    deadline: Option<Instant>,
    frames: Vec<Frame>,
    next_obj_id: u32,
    flavor: AssertFlavor,
}

type EvalResult = Result<Value, JExc>;

impl<'t> Interp<'t> {
    fn run_one_test(&mut self, entry: &ClassEntry, test: &MethodDecl) -> Result<(), JExc> {
        self.frames.clear();
        let instance = self.construct(entry, &[], test.start_line)?;
        self.call_method(entry, test, Some(instance), vec![], test.start_line)?;
        Ok(())
    }

    fn burn(&mut self, line: u32) -> Result<(), JExc> {
        if self.fuel == 0 {
            return Err(self.throw_at(TIMEOUT_FQN, Some("test timed out".into()), line));
        }
        self.fuel -= 1;
        if self.fuel % 256 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    return Err(self.throw_at(TIMEOUT_FQN, Some("test timed out".into()), line));
                }
            }
        }
        Ok(())
    }

    fn set_line(&mut self, line: u32) {
        if let Some(f) = self.frames.last_mut() {
            f.line = line;
        }
    }

    fn capture_frames(&self) -> Vec<FrameInfo> {
        self.frames
            .iter()
            .rev()
            .map(|f| FrameInfo {
                class: f.class.clone(),
                method: f.method.clone(),
                file: f.file.clone(),
                line: f.line,
            })
            .collect()
    }

    fn throw_at(&mut self, fqn: &str, message: Option<String>, line: u32) -> JExc {
        self.set_line(line);
        JExc {
            fqn: fqn.to_string(),
            message,
            frames: self.capture_frames(),
        }
    }

    fn throw_assert(&mut self, fqn_override: Option<&str>, assert_name: &str, message: Option<String>, line: u32) -> JExc {
        self.set_line(line);
        let fqn = fqn_override.unwrap_or(match self.flavor {
            AssertFlavor::JUnit4 => "java.lang.AssertionError",
            AssertFlavor::JUnit5 => "org.opentest4j.AssertionFailedError",
        });
        let mut frames = vec![FrameInfo {
            class: "org.junit.Assert".to_string(),
            method: assert_name.to_string(),
            file: "Assert.java".to_string(),
            line: 118,
        }];
        frames.extend(self.capture_frames());
        JExc {
            fqn: fqn.to_string(),
            message,
            frames,
        }
    }

    // -- construction and method dispatch ----------------------------------

    fn construct(&mut self, entry: &ClassEntry, args: &[Value], line: u32) -> EvalResult {
        self.burn(line)?;
        let instance = Rc::new(Instance {
            class: entry.decl.name.clone(),
            qualified: entry.qualified.clone(),
            id: self.next_obj_id,
            fields: RefCell::new(HashMap::new()),
        });
        self.next_obj_id += 1;

        // Default field values, then declared initializers.
        let file = file_name_of(entry);
        self.frames.push(Frame {
            class: entry.qualified.clone(),
            method: "<init>".to_string(),
            file,
            line,
        });
        let result = (|| {
            for f in &entry.decl.fields {
                let default = default_value(&f.type_text);
                instance.fields.borrow_mut().insert(f.name.clone(), default);
            }
            for f in &entry.decl.fields {
                if let Some(init) = &f.init {
                    let mut env = Env {
                        locals: HashMap::new(),
                        this: Some(Value::Obj(Rc::clone(&instance))),
                    };
                    let v = self.eval(init, &mut env, entry)?;
                    instance.fields.borrow_mut().insert(f.name.clone(), v);
                }
            }
            let ctors: Vec<&MethodDecl> = entry
                .decl
                .constructors()
                .filter(|c| c.arity() == args.len())
                .collect();
            let ctor = ctors
                .iter()
                .find(|c| ctor_matches(c, args))
                .copied()
                .or_else(|| ctors.first().copied());
            if let Some(ctor) = ctor {
                let ctor = ctor.clone();
                if let Some(body) = &ctor.body {
                    let mut env = Env {
                        locals: bind_params(&ctor, args),
                        this: Some(Value::Obj(Rc::clone(&instance))),
                    };
                    self.exec_block(body, &mut env, entry)?;
                }
            } else if entry.decl.constructors().next().is_some() && !args.is_empty() {
                return Err(self.throw_at(
                    "java.lang.InstantiationError",
                    Some(format!("no matching constructor for {}", entry.decl.name)),
                    line,
                ));
            }
            Ok(Value::Obj(Rc::clone(&instance)))
        })();
        self.frames.pop();
        result
    }

    fn call_method(
        &mut self,
        entry: &ClassEntry,
        method: &MethodDecl,
        this: Option<Value>,
        args: Vec<Value>,
        call_line: u32,
    ) -> EvalResult {
        if self.frames.len() >= MAX_CALL_DEPTH {
            return Err(self.throw_at("java.lang.StackOverflowError", None, call_line));
        }
        self.set_line(call_line);
        let body = match &method.body {
            Some(b) => b.clone(),
            None => {
                return Err(self.throw_at(
                    "java.lang.AbstractMethodError",
                    Some(format!("{}.{}", entry.decl.name, method.name)),
                    call_line,
                ))
            }
        };
        self.frames.push(Frame {
            class: entry.qualified.clone(),
            method: method.name.clone(),
            file: file_name_of(entry),
            line: method.start_line,
        });
        let mut env = Env {
            locals: bind_params(method, &args),
            this,
        };
        let result = self.exec_block(&body, &mut env, entry);
        self.frames.pop();
        match result? {
            Flow::Return(v) => Ok(v),
            Flow::Normal => Ok(Value::Void),
        }
    }

    // -- statements ---------------------------------------------------------

    fn exec_block(
        &mut self,
        stmts: &[Stmt],
        env: &mut Env,
        entry: &ClassEntry,
    ) -> Result<Flow, JExc> {
        for s in stmts {
            match self.exec_stmt(s, env, entry)? {
                Flow::Normal => {}
                ret @ Flow::Return(_) => return Ok(ret),
            }
        }
        Ok(Flow::Normal)
    }

    fn exec_stmt(&mut self, stmt: &Stmt, env: &mut Env, entry: &ClassEntry) -> Result<Flow, JExc> {
        match stmt {
            Stmt::Local { name, init, pos, .. } => {
                self.set_line(pos.line);
                self.burn(pos.line)?;
                let v = match init {
                    Some(e) => self.eval(e, env, entry)?,
                    None => Value::Null,
                };
                env.locals.insert(name.clone(), v);
                Ok(Flow::Normal)
            }
            Stmt::Expr(e) => {
                self.set_line(e.pos().line);
                self.burn(e.pos().line)?;
                self.eval(e, env, entry)?;
                Ok(Flow::Normal)
            }
            Stmt::If {
                cond,
                then,
                otherwise,
                pos,
            } => {
                self.set_line(pos.line);
                self.burn(pos.line)?;
                if self.eval_bool(cond, env, entry)? {
                    self.exec_block(then, env, entry)
                } else {
                    self.exec_block(otherwise, env, entry)
                }
            }
            Stmt::While { cond, body, pos } => {
                loop {
                    self.burn(pos.line)?;
                    if !self.eval_bool(cond, env, entry)? {
                        break;
                    }
                    match self.exec_block(body, env, entry)? {
                        Flow::Normal => {}
                        ret @ Flow::Return(_) => return Ok(ret),
                    }
                }
                Ok(Flow::Normal)
            }
            Stmt::For {
                init,
                cond,
                update,
                body,
                pos,
            } => {
                if let Some(i) = init {
                    self.exec_stmt(i, env, entry)?;
                }
                loop {
                    self.burn(pos.line)?;
                    if let Some(c) = cond {
                        if !self.eval_bool(c, env, entry)? {
                            break;
                        }
                    }
                    match self.exec_block(body, env, entry)? {
                        Flow::Normal => {}
                        ret @ Flow::Return(_) => return Ok(ret),
                    }
                    for u in update {
                        self.eval(u, env, entry)?;
                    }
                }
                Ok(Flow::Normal)
            }
            Stmt::Return { value, pos } => {
                self.set_line(pos.line);
                self.burn(pos.line)?;
                let v = match value {
                    Some(e) => self.eval(e, env, entry)?,
                    None => Value::Void,
                };
                Ok(Flow::Return(v))
            }
            Stmt::Throw { value, pos } => {
                self.set_line(pos.line);
                self.burn(pos.line)?;
                let v = self.eval(value, env, entry)?;
                Err(self.raise_value(v, pos.line))
            }
            Stmt::Block(inner) => self.exec_block(inner, env, entry),
            Stmt::Unsupported { what, pos } => Err(self.throw_at(
                "java.lang.UnsupportedOperationException",
                Some(format!("interpreter does not support: {what}")),
                pos.line,
            )),
        }
    }

    fn raise_value(&mut self, v: Value, line: u32) -> JExc {
        match v {
            Value::Obj(inst) => {
                let fqn = throwable_fqn(&inst.class)
                    .map(|s| s.to_string())
                    .unwrap_or_else(|| inst.qualified.clone());
                let message = match inst.fields.borrow().get("__message") {
                    Some(Value::Str(s)) => Some(s.as_ref().clone()),
                    _ => None,
                };
                self.throw_at(&fqn, message, line)
            }
            _ => self.throw_at("java.lang.RuntimeException", None, line),
        }
    }

    // -- expressions ---------------------------------------------------------

    fn eval_bool(&mut self, e: &Expr, env: &mut Env, entry: &ClassEntry) -> Result<bool, JExc> {
        match self.eval(e, env, entry)? {
            Value::Bool(b) => Ok(b),
            other => Err(self.throw_at(
                "java.lang.ClassCastException",
                Some(format!("expected boolean, got {}", kind_name(&other))),
                e.pos().line,
            )),
        }
    }

    fn eval(&mut self, e: &Expr, env: &mut Env, entry: &ClassEntry) -> EvalResult {
        self.burn(e.pos().line)?;
        match e {
            Expr::Null(_) => Ok(Value::Null),
            Expr::Int(v, _) => Ok(Value::Int(*v)),
            Expr::Double(v, _) => Ok(Value::Double(*v)),
            Expr::Bool(v, _) => Ok(Value::Bool(*v)),
            Expr::Char(v, _) => Ok(Value::Char(*v)),
            Expr::Str(v, _) => Ok(Value::Str(Rc::new(v.clone()))),
            Expr::Name(n, pos) => self.eval_name(n, env, entry, pos.line),
            Expr::Field { object, name, pos } => {
                let obj = self.eval(object, env, entry)?;
                self.get_field(obj, name, pos.line)
            }
            Expr::Call {
                receiver,
                name,
                args,
                pos,
            } => {
                let mut arg_vals = Vec::with_capacity(args.len());
                for a in args {
                    arg_vals.push(self.eval(a, env, entry)?);
                }
                self.dispatch_call(receiver.as_deref(), name, arg_vals, env, entry, pos.line)
            }
            Expr::New {
                class, args, pos, ..
            } => {
                let mut arg_vals = Vec::with_capacity(args.len());
                for a in args {
                    arg_vals.push(self.eval(a, env, entry)?);
                }
                self.eval_new(class, arg_vals, entry, pos.line)
            }
            Expr::Unary { op, operand, pos } => {
                let v = self.eval(operand, env, entry)?;
                match (op, v) {
                    (UnOp::Not, Value::Bool(b)) => Ok(Value::Bool(!b)),
                    (UnOp::Neg, Value::Int(i)) => Ok(Value::Int(-i)),
                    (UnOp::Neg, Value::Double(d)) => Ok(Value::Double(-d)),
                    (UnOp::Neg, Value::Char(c)) => Ok(Value::Int(-(c as i64))),
                    (_, other) => Err(self.throw_at(
                        "java.lang.UnsupportedOperationException",
                        Some(format!("bad operand for unary op: {}", kind_name(&other))),
                        pos.line,
                    )),
                }
            }
            Expr::Binary { op, lhs, rhs, pos } => self.eval_binary(*op, lhs, rhs, env, entry, pos.line),
            Expr::Assign {
                target, op, value, pos,
            } => {
                let rhs = self.eval(value, env, entry)?;
                let new = match op {
                    None => rhs,
                    Some(binop) => {
                        let current = self.eval(target, env, entry)?;
                        self.apply_binop(*binop, current, rhs, pos.line)?
                    }
                };
                self.assign(target, new.clone(), env, entry, pos.line)?;
                Ok(new)
            }
            Expr::Ternary {
                cond,
                then,
                otherwise,
                ..
            } => {
                if self.eval_bool(cond, env, entry)? {
                    self.eval(then, env, entry)
                } else {
                    self.eval(otherwise, env, entry)
                }
            }
            Expr::Cast {
                type_text, value, pos,
            } => {
                let v = self.eval(value, env, entry)?;
                Ok(match (base_type_name(type_text), v) {
                    ("int" | "long" | "short" | "byte", Value::Double(d)) => Value::Int(d as i64),
                    ("int" | "long" | "short" | "byte", Value::Char(c)) => Value::Int(c as i64),
                    ("char", Value::Int(i)) => {
                        Value::Char(char::from_u32(i as u32).unwrap_or('\0'))
                    }
                    ("double" | "float", Value::Int(i)) => Value::Double(i as f64),
                    (_, v) => {
                        let _ = pos;
                        v
                    }
                })
            }
            Expr::Unsupported { what, pos } => Err(self.throw_at(
                "java.lang.UnsupportedOperationException",
                Some(format!("interpreter does not support: {what}")),
                pos.line,
            )),
        }
    }

    fn eval_name(&mut self, n: &str, env: &mut Env, entry: &ClassEntry, line: u32) -> EvalResult {
        if n == "this" {
            return Ok(env.this.clone().unwrap_or(Value::Null));
        }
        if let Some(v) = env.locals.get(n) {
            return Ok(v.clone());
        }
        if let Some(Value::Obj(inst)) = &env.this {
            if let Some(v) = inst.fields.borrow().get(n) {
                return Ok(v.clone());
            }
        }
        // Class reference (static receiver) or unknown.
        if n == "System" || n == "Math" || n == "Integer" || n == "String" || n == "Assert"
            || n == "Assertions"
            || throwable_fqn(n).is_some()
            || self.find_class(n, entry).is_some()
        {
            return Ok(Value::Class(n.to_string()));
        }
        Err(self.throw_at(
            "java.lang.NoSuchFieldError",
            Some(n.to_string()),
            line,
        ))
    }

    fn find_class(&self, name: &str, _entry: &ClassEntry) -> Option<&'t ClassEntry> {
        let base = base_type_name(name);
        self.table
            .entries()
            .iter()
            .find(|e| e.qualified == base)
            .or_else(|| {
                self.table
                    .entries()
                    .iter()
                    .find(|e| e.simple_name() == base)
            })
    }

    fn get_field(&mut self, obj: Value, name: &str, line: u32) -> EvalResult {
        match obj {
            Value::Null => Err(self.throw_at("java.lang.NullPointerException", None, line)),
            Value::Obj(inst) => match inst.fields.borrow().get(name) {
                Some(v) => Ok(v.clone()),
                None => Err(self.throw_at(
                    "java.lang.NoSuchFieldError",
                    Some(name.to_string()),
                    line,
                )),
            },
            Value::Class(c) => match (c.as_str(), name) {
                ("System", "out") => Ok(Value::Stdout),
                ("Integer", "MAX_VALUE") => Ok(Value::Int(i32::MAX as i64)),
                ("Integer", "MIN_VALUE") => Ok(Value::Int(i32::MIN as i64)),
                _ => Err(self.throw_at(
                    "java.lang.NoSuchFieldError",
                    Some(name.to_string()),
                    line,
                )),
            },
            Value::Str(s) if name == "length" => Ok(Value::Int(s.chars().count() as i64)),
            _ => Err(self.throw_at(
                "java.lang.NoSuchFieldError",
                Some(name.to_string()),
                line,
            )),
        }
    }

    fn assign(
        &mut self,
        target: &Expr,
        value: Value,
        env: &mut Env,
        entry: &ClassEntry,
        line: u32,
    ) -> Result<(), JExc> {
        match target {
            Expr::Name(n, _) => {
                if env.locals.contains_key(n) {
                    env.locals.insert(n.clone(), value);
                    return Ok(());
                }
                if let Some(Value::Obj(inst)) = &env.this {
                    if inst.fields.borrow().contains_key(n) {
                        inst.fields.borrow_mut().insert(n.clone(), value);
                        return Ok(());
                    }
                }
                // New local introduced by assignment is not legal Java, but
                // tolerate it rather than crash.
                env.locals.insert(n.clone(), value);
                Ok(())
            }
            Expr::Field { object, name, .. } => {
                let obj = self.eval(object, env, entry)?;
                match obj {
                    Value::Null => {
                        Err(self.throw_at("java.lang.NullPointerException", None, line))
                    }
                    Value::Obj(inst) => {
                        inst.fields.borrow_mut().insert(name.clone(), value);
                        Ok(())
                    }
                    _ => Err(self.throw_at(
                        "java.lang.UnsupportedOperationException",
                        Some("field assignment on non-object".into()),
                        line,
                    )),
                }
            }
            _ => Err(self.throw_at(
                "java.lang.UnsupportedOperationException",
                Some("unsupported assignment target".into()),
                line,
            )),
        }
    }

    fn eval_new(&mut self, class: &str, args: Vec<Value>, entry: &ClassEntry, line: u32) -> EvalResult {
        let base = base_type_name(class).to_string();
        if base == "StringBuilder" || base == "StringBuffer" {
            let initial = match args.first() {
                Some(Value::Str(s)) => s.as_ref().clone(),
                _ => String::new(),
            };
            return Ok(Value::Builder(Rc::new(RefCell::new(initial))));
        }
        if base == "String" {
            let initial = match args.first() {
                Some(Value::Str(s)) => s.as_ref().clone(),
                _ => String::new(),
            };
            return Ok(Value::Str(Rc::new(initial)));
        }
        if throwable_fqn(&base).is_some() && self.find_class(&base, entry).is_none() {
            let inst = Rc::new(Instance {
                class: base.clone(),
                qualified: throwable_fqn(&base).unwrap().to_string(),
                id: self.next_obj_id,
                fields: RefCell::new(HashMap::new()),
            });
            self.next_obj_id += 1;
            if let Some(Value::Str(msg)) = args.first() {
                inst.fields
                    .borrow_mut()
                    .insert("__message".into(), Value::Str(Rc::clone(msg)));
            }
            return Ok(Value::Obj(inst));
        }
        match self.find_class(&base, entry) {
            Some(e) => self.construct(e, &args, line),
            None => Err(self.throw_at(
                "java.lang.NoClassDefFoundError",
                Some(base),
                line,
            )),
        }
    }

    fn dispatch_call(
        &mut self,
        receiver: Option<&Expr>,
        name: &str,
        args: Vec<Value>,
        env: &mut Env,
        entry: &ClassEntry,
        line: u32,
    ) -> EvalResult {
        match receiver {
            None => {
                // Own method first, then statically-imported assertions.
                if let Some(m) = pick_method(&entry.decl, name, args.len()) {
                    let this = if m.is_static() { None } else { env.this.clone() };
                    return self.call_method(entry, &m, this, args, line);
                }
                if is_assertion_name(name) {
                    return self.eval_assertion(name, args, line);
                }
                Err(self.throw_at(
                    "java.lang.NoSuchMethodError",
                    Some(format!("{name} in {}", entry.decl.name)),
                    line,
                ))
            }
            Some(recv) => {
                let recv_v = self.eval(recv, env, entry)?;
                match recv_v {
                    Value::Null => {
                        Err(self.throw_at("java.lang.NullPointerException", None, line))
                    }
                    Value::Class(c) => self.call_static(&c, name, args, entry, line),
                    Value::Str(s) => self.call_string(&s, name, args, line),
                    Value::Builder(b) => self.call_builder(&b, name, args, line),
                    Value::Stdout => Ok(Value::Void), // println and friends
                    Value::Obj(inst) => {
                        let class = inst.class.clone();
                        match self.find_class(&class, entry) {
                            Some(e) => match self.pick_in_hierarchy(e, name, args.len()) {
                                Some((owner, m)) => self.call_method(
                                    owner,
                                    &m,
                                    Some(Value::Obj(Rc::clone(&inst))),
                                    args,
                                    line,
                                ),
                                None => self.call_object_default(&inst, name, args, line),
                            },
                            None => self.call_object_default(&inst, name, args, line),
                        }
                    }
                    other => Err(self.throw_at(
                        "java.lang.UnsupportedOperationException",
                        Some(format!("method call on {}", kind_name(&other))),
                        line,
                    )),
                }
            }
        }
    }

    fn pick_in_hierarchy(
        &self,
        entry: &'t ClassEntry,
        name: &str,
        arity: usize,
    ) -> Option<(&'t ClassEntry, MethodDecl)> {
        let mut current = entry;
        for _ in 0..16 {
            if let Some(m) = pick_method(&current.decl, name, arity) {
                return Some((current, m));
            }
            let sup = current.decl.superclass.clone()?;
            current = self
                .table
                .entries()
                .iter()
                .find(|e| e.simple_name() == base_type_name(&sup))?;
        }
        None
    }

    fn call_object_default(
        &mut self,
        inst: &Rc<Instance>,
        name: &str,
        args: Vec<Value>,
        line: u32,
    ) -> EvalResult {
        match (name, args.len()) {
            ("toString", 0) => Ok(Value::Str(Rc::new(format!(
                "{}@{:x}",
                inst.qualified, inst.id
            )))),
            ("hashCode", 0) => Ok(Value::Int(inst.id as i64)),
            ("equals", 1) => {
                let eq = match &args[0] {
                    Value::Obj(o) => Rc::ptr_eq(inst, o),
                    _ => false,
                };
                Ok(Value::Bool(eq))
            }
            ("getMessage", 0) => Ok(inst
                .fields
                .borrow()
                .get("__message")
                .cloned()
                .unwrap_or(Value::Null)),
            _ => Err(self.throw_at(
                "java.lang.NoSuchMethodError",
                Some(format!("{}.{}", inst.class, name)),
                line,
            )),
        }
    }

    fn call_static(
        &mut self,
        class: &str,
        name: &str,
        args: Vec<Value>,
        entry: &ClassEntry,
        line: u32,
    ) -> EvalResult {
        match class {
            "Math" => return self.call_math(name, args, line),
            "Integer" => return self.call_integer(name, args, line),
            "String" if name == "valueOf" => {
                let s = self.stringify(args.into_iter().next().unwrap_or(Value::Null), line)?;
                return Ok(Value::Str(Rc::new(s)));
            }
            "Assert" | "Assertions" => return self.eval_assertion(name, args, line),
            _ => {}
        }
        if let Some(e) = self.find_class(class, entry) {
            if let Some(m) = pick_method(&e.decl, name, args.len()) {
                return self.call_method(e, &m, None, args, line);
            }
        }
        Err(self.throw_at(
            "java.lang.NoSuchMethodError",
            Some(format!("{class}.{name}")),
            line,
        ))
    }

    fn call_math(&mut self, name: &str, args: Vec<Value>, line: u32) -> EvalResult {
        let nums: Vec<f64> = args.iter().map(num_of).collect();
        let all_int = args
            .iter()
            .all(|a| matches!(a, Value::Int(_) | Value::Char(_)));
        let v = match (name, nums.as_slice()) {
            ("max", [a, b]) => a.max(*b),
            ("min", [a, b]) => a.min(*b),
            ("abs", [a]) => a.abs(),
            ("floor", [a]) => a.floor(),
            ("ceil", [a]) => a.ceil(),
            ("sqrt", [a]) => a.sqrt(),
            ("pow", [a, b]) => a.powf(*b),
            _ => {
                return Err(self.throw_at(
                    "java.lang.NoSuchMethodError",
                    Some(format!("Math.{name}")),
                    line,
                ))
            }
        };
        if all_int && matches!(name, "max" | "min" | "abs") {
            Ok(Value::Int(v as i64))
        } else {
            Ok(Value::Double(v))
        }
    }

    fn call_integer(&mut self, name: &str, args: Vec<Value>, line: u32) -> EvalResult {
        match (name, args.as_slice()) {
            ("parseInt" | "valueOf", [Value::Str(s)]) => match s.trim_matches(|c| c == '+').parse::<i64>() {
                Ok(v) => Ok(Value::Int(v)),
                Err(_) => Err(self.throw_at(
                    "java.lang.NumberFormatException",
                    Some(format!("For input string: \"{s}\"")),
                    line,
                )),
            },
            ("valueOf", [Value::Int(v)]) => Ok(Value::Int(*v)),
            ("toString", [Value::Int(v)]) => Ok(Value::Str(Rc::new(v.to_string()))),
            _ => Err(self.throw_at(
                "java.lang.NoSuchMethodError",
                Some(format!("Integer.{name}")),
                line,
            )),
        }
    }

    fn call_string(&mut self, s: &Rc<String>, name: &str, args: Vec<Value>, line: u32) -> EvalResult {
        let chars: Vec<char> = s.chars().collect();
        let len = chars.len() as i64;
        match (name, args.as_slice()) {
            ("length", []) => Ok(Value::Int(len)),
            ("isEmpty", []) => Ok(Value::Bool(s.is_empty())),
            ("charAt", [Value::Int(i)]) => {
                if *i < 0 || *i >= len {
                    Err(self.throw_at(
                        "java.lang.StringIndexOutOfBoundsException",
                        Some(format!("String index out of range: {i}")),
                        line,
                    ))
                } else {
                    Ok(Value::Char(chars[*i as usize]))
                }
            }
            ("substring", [Value::Int(b)]) => {
                if *b < 0 || *b > len {
                    Err(self.throw_at(
                        "java.lang.StringIndexOutOfBoundsException",
                        Some(format!("begin {b}, end {len}, length {len}")),
                        line,
                    ))
                } else {
                    Ok(Value::Str(Rc::new(chars[*b as usize..].iter().collect())))
                }
            }
            ("substring", [Value::Int(b), Value::Int(e)]) => {
                if *b < 0 || *e > len || b > e {
                    Err(self.throw_at(
                        "java.lang.StringIndexOutOfBoundsException",
                        Some(format!("begin {b}, end {e}, length {len}")),
                        line,
                    ))
                } else {
                    Ok(Value::Str(Rc::new(
                        chars[*b as usize..*e as usize].iter().collect(),
                    )))
                }
            }
            ("equals", [other]) => Ok(Value::Bool(matches!(other, Value::Str(o) if o == s))),
            ("equalsIgnoreCase", [Value::Str(o)]) => {
                Ok(Value::Bool(s.to_lowercase() == o.to_lowercase()))
            }
            ("concat", [Value::Str(o)]) => Ok(Value::Str(Rc::new(format!("{s}{o}")))),
            ("indexOf", [Value::Str(o)]) => Ok(Value::Int(
                s.find(o.as_str())
                    .map(|b| s[..b].chars().count() as i64)
                    .unwrap_or(-1),
            )),
            ("indexOf", [Value::Char(c)]) => Ok(Value::Int(
                s.find(*c)
                    .map(|b| s[..b].chars().count() as i64)
                    .unwrap_or(-1),
            )),
            ("contains", [Value::Str(o)]) => Ok(Value::Bool(s.contains(o.as_str()))),
            ("trim", []) => Ok(Value::Str(Rc::new(s.trim().to_string()))),
            ("toUpperCase", []) => Ok(Value::Str(Rc::new(s.to_uppercase()))),
            ("toLowerCase", []) => Ok(Value::Str(Rc::new(s.to_lowercase()))),
            ("startsWith", [Value::Str(o)]) => Ok(Value::Bool(s.starts_with(o.as_str()))),
            ("endsWith", [Value::Str(o)]) => Ok(Value::Bool(s.ends_with(o.as_str()))),
            ("replace", [Value::Char(a), Value::Char(b)]) => {
                Ok(Value::Str(Rc::new(s.replace(*a, &b.to_string()))))
            }
            ("replace", [Value::Str(a), Value::Str(b)]) => {
                Ok(Value::Str(Rc::new(s.replace(a.as_str(), b.as_str()))))
            }
            ("toString", []) => Ok(Value::Str(Rc::clone(s))),
            ("hashCode", []) => Ok(Value::Int(java_string_hash(s))),
            ("compareTo", [Value::Str(o)]) => Ok(Value::Int(match s.as_str().cmp(o.as_str()) {
                std::cmp::Ordering::Less => -1,
                std::cmp::Ordering::Equal => 0,
                std::cmp::Ordering::Greater => 1,
            })),
            _ => Err(self.throw_at(
                "java.lang.NoSuchMethodError",
                Some(format!("String.{name}")),
                line,
            )),
        }
    }

    fn call_builder(
        &mut self,
        b: &Rc<RefCell<String>>,
        name: &str,
        args: Vec<Value>,
        line: u32,
    ) -> EvalResult {
        match (name, args.as_slice()) {
            ("append", [v]) => {
                let s = self.stringify(v.clone(), line)?;
                b.borrow_mut().push_str(&s);
                Ok(Value::Builder(Rc::clone(b)))
            }
            ("toString", []) => Ok(Value::Str(Rc::new(b.borrow().clone()))),
            ("length", []) => Ok(Value::Int(b.borrow().chars().count() as i64)),
            ("charAt", [Value::Int(i)]) => {
                let content = b.borrow().clone();
                self.call_string(&Rc::new(content), "charAt", vec![Value::Int(*i)], line)
            }
            _ => Err(self.throw_at(
                "java.lang.NoSuchMethodError",
                Some(format!("StringBuilder.{name}")),
                line,
            )),
        }
    }

    // -- operators -----------------------------------------------------------

    fn eval_binary(
        &mut self,
        op: BinOp,
        lhs: &Expr,
        rhs: &Expr,
        env: &mut Env,
        entry: &ClassEntry,
        line: u32,
    ) -> EvalResult {
        // Short-circuit logical operators.
        if op == BinOp::And {
            return Ok(Value::Bool(
                self.eval_bool(lhs, env, entry)? && self.eval_bool(rhs, env, entry)?,
            ));
        }
        if op == BinOp::Or {
            return Ok(Value::Bool(
                self.eval_bool(lhs, env, entry)? || self.eval_bool(rhs, env, entry)?,
            ));
        }
        let l = self.eval(lhs, env, entry)?;
        let r = self.eval(rhs, env, entry)?;
        self.apply_binop(op, l, r, line)
    }

    fn apply_binop(&mut self, op: BinOp, l: Value, r: Value, line: u32) -> EvalResult {
        use BinOp::*;
        match op {
            Add => {
                if matches!(l, Value::Str(_)) || matches!(r, Value::Str(_)) {
                    let ls = self.stringify(l, line)?;
                    let rs = self.stringify(r, line)?;
                    return Ok(Value::Str(Rc::new(format!("{ls}{rs}"))));
                }
                self.numeric_op(op, l, r, line)
            }
            Sub | Mul | Div | Rem => self.numeric_op(op, l, r, line),
            Eq | Ne => {
                let eq = value_ref_eq(&l, &r);
                Ok(Value::Bool(if op == Eq { eq } else { !eq }))
            }
            Lt | Le | Gt | Ge => {
                let (a, b) = (num_of(&l), num_of(&r));
                let res = match op {
                    Lt => a < b,
                    Le => a <= b,
                    Gt => a > b,
                    Ge => a >= b,
                    _ => unreachable!(),
                };
                Ok(Value::Bool(res))
            }
            And | Or => unreachable!("handled by eval_binary"),
        }
    }

    fn numeric_op(&mut self, op: BinOp, l: Value, r: Value, line: u32) -> EvalResult {
        use BinOp::*;
        let double = matches!(l, Value::Double(_)) || matches!(r, Value::Double(_));
        if double {
            let (a, b) = (num_of(&l), num_of(&r));
            let v = match op {
                Add => a + b,
                Sub => a - b,
                Mul => a * b,
                Div => a / b,
                Rem => a % b,
                _ => unreachable!(),
            };
            return Ok(Value::Double(v));
        }
        let a = int_of(&l).ok_or_else(|| {
            self.throw_at(
                "java.lang.UnsupportedOperationException",
                Some(format!("bad operand: {}", kind_name(&l))),
                line,
            )
        })?;
        let b = int_of(&r).ok_or_else(|| {
            self.throw_at(
                "java.lang.UnsupportedOperationException",
                Some(format!("bad operand: {}", kind_name(&r))),
                line,
            )
        })?;
        let v = match op {
            Add => a.wrapping_add(b),
            Sub => a.wrapping_sub(b),
            Mul => a.wrapping_mul(b),
            Div => {
                if b == 0 {
                    return Err(self.throw_at(
                        "java.lang.ArithmeticException",
                        Some("/ by zero".into()),
                        line,
                    ));
                }
                a.wrapping_div(b)
            }
            Rem => {
                if b == 0 {
                    return Err(self.throw_at(
                        "java.lang.ArithmeticException",
                        Some("/ by zero".into()),
                        line,
                    ));
                }
                a.wrapping_rem(b)
            }
            _ => unreachable!(),
        };
        Ok(Value::Int(v))
    }

    // -- assertions ----------------------------------------------------------

    fn eval_assertion(&mut self, name: &str, args: Vec<Value>, line: u32) -> EvalResult {
        match name {
            "assertEquals" | "assertNotEquals" => self.assert_equals(name, args, line),
            "assertTrue" | "assertFalse" => {
                let want = name == "assertTrue";
                let (msg, cond) = split_message1(args);
                let ok = matches!(cond, Some(Value::Bool(b)) if b == want);
                if ok {
                    Ok(Value::Void)
                } else {
                    Err(self.throw_assert(None, name, msg, line))
                }
            }
            "assertNull" | "assertNotNull" => {
                let want_null = name == "assertNull";
                let (msg, v) = split_message1(args);
                let is_null = matches!(v, Some(Value::Null));
                if is_null == want_null {
                    Ok(Value::Void)
                } else if want_null {
                    let shown = self.stringify(v.unwrap_or(Value::Null), line)?;
                    Err(self.throw_assert(
                        None,
                        name,
                        Some(format!("expected null, but was:<{shown}>")),
                        line,
                    ))
                } else {
                    Err(self.throw_assert(None, name, msg, line))
                }
            }
            "assertSame" | "assertNotSame" => {
                let want_same = name == "assertSame";
                let (msg, pair) = split_message2(args);
                let same = match &pair {
                    Some((a, b)) => value_ref_eq(a, b),
                    None => false,
                };
                if same == want_same {
                    Ok(Value::Void)
                } else {
                    Err(self.throw_assert(None, name, msg, line))
                }
            }
            "fail" => {
                let msg = match args.into_iter().next() {
                    Some(Value::Str(s)) => Some(s.as_ref().clone()),
                    _ => None,
                };
                Err(self.throw_assert(None, "fail", msg, line))
            }
            "assertArrayEquals" => Err(self.throw_at(
                "java.lang.UnsupportedOperationException",
                Some("interpreter does not support: assertArrayEquals".into()),
                line,
            )),
            other => Err(self.throw_at(
                "java.lang.NoSuchMethodError",
                Some(format!("Assert.{other}")),
                line,
            )),
        }
    }

    fn assert_equals(&mut self, name: &str, args: Vec<Value>, line: u32) -> EvalResult {
        let negate = name == "assertNotEquals";
        // Disambiguate (expected, actual) / (message, expected, actual) /
        // (expected, actual, delta) like the JUnit overloads do.
        let (msg, expected, actual, delta) = match args.len() {
            2 => (None, args[0].clone(), args[1].clone(), None),
            3 => {
                let all_numeric = args.iter().all(|v| matches!(v, Value::Int(_) | Value::Double(_)));
                if all_numeric {
                    (
                        None,
                        args[0].clone(),
                        args[1].clone(),
                        Some(num_of(&args[2])),
                    )
                } else if let Value::Str(m) = &args[0] {
                    (Some(m.as_ref().clone()), args[1].clone(), args[2].clone(), None)
                } else {
                    (None, args[0].clone(), args[1].clone(), None)
                }
            }
            _ => {
                return Err(self.throw_at(
                    "java.lang.NoSuchMethodError",
                    Some(format!("Assert.{name}/{}", args.len())),
                    line,
                ))
            }
        };
        let equal = match delta {
            Some(d) => (num_of(&expected) - num_of(&actual)).abs() <= d,
            None => self.java_equals(&expected, &actual, line)?,
        };
        if equal != negate {
            return Ok(Value::Void);
        }
        if negate {
            let shown = self.stringify(actual, line)?;
            return Err(self.throw_assert(
                None,
                name,
                Some(format!("Values should be different. Actual: {shown}")),
                line,
            ));
        }
        // Equality failure: strings get a ComparisonFailure-style message.
        if let (Value::Str(e), Value::Str(a)) = (&expected, &actual) {
            let body = comparison_message(e, a);
            let full = match msg {
                Some(m) => format!("{m} {body}"),
                None => body,
            };
            let fqn = match self.flavor {
                AssertFlavor::JUnit4 => "org.junit.ComparisonFailure",
                AssertFlavor::JUnit5 => "org.opentest4j.AssertionFailedError",
            };
            return Err(self.throw_assert(Some(fqn), name, Some(full), line));
        }
        let es = self.stringify(expected, line)?;
        let as_ = self.stringify(actual, line)?;
        let body = format!("expected:<{es}> but was:<{as_}>");
        let full = match msg {
            Some(m) => format!("{m} {body}"),
            None => body,
        };
        Err(self.throw_assert(None, name, Some(full), line))
    }

    fn java_equals(&mut self, a: &Value, b: &Value, line: u32) -> Result<bool, JExc> {
        Ok(match (a, b) {
            (Value::Null, Value::Null) => true,
            (Value::Null, _) | (_, Value::Null) => false,
            (Value::Int(x), Value::Int(y)) => x == y,
            (Value::Double(x), Value::Double(y)) => x == y,
            (Value::Int(x), Value::Double(y)) | (Value::Double(y), Value::Int(x)) => {
                *x as f64 == *y
            }
            (Value::Bool(x), Value::Bool(y)) => x == y,
            (Value::Char(x), Value::Char(y)) => x == y,
            (Value::Char(x), Value::Int(y)) | (Value::Int(y), Value::Char(x)) => *x as i64 == *y,
            (Value::Str(x), Value::Str(y)) => x == y,
            (Value::Obj(x), Value::Obj(y)) => {
                // Use the class's own equals when it declares one.
                if let Some(e) = self.find_class(&x.class.clone(), unused_entry()) {
                    if pick_method(&e.decl, "equals", 1).is_some() {
                        let res = self.dispatch_equals(e, x, b.clone(), line)?;
                        return Ok(res);
                    }
                }
                Rc::ptr_eq(x, y)
            }
            _ => false,
        })
    }

    fn dispatch_equals(
        &mut self,
        entry: &'t ClassEntry,
        x: &Rc<Instance>,
        other: Value,
        line: u32,
    ) -> Result<bool, JExc> {
        let m = pick_method(&entry.decl, "equals", 1).unwrap();
        match self.call_method(entry, &m, Some(Value::Obj(Rc::clone(x))), vec![other], line)? {
            Value::Bool(b) => Ok(b),
            _ => Ok(false),
        }
    }

    /// Java `String.valueOf` semantics, dispatching user `toString`.
    fn stringify(&mut self, v: Value, line: u32) -> Result<String, JExc> {
        Ok(match v {
            Value::Null => "null".to_string(),
            Value::Int(i) => i.to_string(),
            Value::Double(d) => java_double_to_string(d),
            Value::Bool(b) => b.to_string(),
            Value::Char(c) => c.to_string(),
            Value::Str(s) => s.as_ref().clone(),
            Value::Builder(b) => b.borrow().clone(),
            Value::Void => "void".to_string(),
            Value::Class(c) => format!("class {c}"),
            Value::Stdout => "java.io.PrintStream".to_string(),
            Value::Obj(inst) => {
                if let Some(e) = self.find_class(&inst.class.clone(), unused_entry()) {
                    if let Some(m) = pick_method(&e.decl, "toString", 0) {
                        match self.call_method(
                            e,
                            &m,
                            Some(Value::Obj(Rc::clone(&inst))),
                            vec![],
                            line,
                        )? {
                            Value::Str(s) => return Ok(s.as_ref().clone()),
                            other => return self.stringify(other, line),
                        }
                    }
                }
                format!("{}@{:x}", inst.qualified, inst.id)
            }
        })
    }
}

struct Env {
    locals: HashMap<String, Value>,
    this: Option<Value>,
}

// `find_class` ignores its entry parameter; this placeholder keeps call sites
// readable where no entry is in scope.
fn unused_entry() -> &'static ClassEntry {
    use std::sync::OnceLock;
    static EMPTY: OnceLock<ClassEntry> = OnceLock::new();
    EMPTY.get_or_init(|| ClassEntry {
        qualified: String::new(),
        package: None,
        file: std::path::PathBuf::new(),
        decl: TypeDecl {
            kind: crate::model::TypeKind::Class,
            name: String::new(),
            nested_name: String::new(),
            declaration: String::new(),
            modifiers: vec![],
            superclass: None,
            fields: vec![],
            methods: vec![],
            nested: vec![],
            start_line: 0,
            end_line: 0,
        },
    })
}

fn file_name_of(entry: &ClassEntry) -> String {
    entry
        .file
        .file_name()
        .map(|f| f.to_string_lossy().to_string())
        .unwrap_or_else(|| format!("{}.java", entry.decl.name))
}

fn bind_params(m: &MethodDecl, args: &[Value]) -> HashMap<String, Value> {
    m.params
        .iter()
        .zip(args.iter().cloned())
        .map(|(p, v)| (p.name.clone(), v))
        .collect()
}

fn pick_method(decl: &TypeDecl, name: &str, arity: usize) -> Option<MethodDecl> {
    decl.methods
        .iter()
        .find(|m| !m.is_constructor && m.name == name && m.arity() == arity)
        .cloned()
}

fn ctor_matches(c: &MethodDecl, args: &[Value]) -> bool {
    c.params.iter().zip(args).all(|(p, v)| {
        let base = base_type_name(&p.type_text);
        match v {
            Value::Int(_) => matches!(base, "int" | "long" | "short" | "byte" | "double" | "float"),
            Value::Double(_) => matches!(base, "double" | "float"),
            Value::Bool(_) => base == "boolean",
            Value::Char(_) => matches!(base, "char" | "int"),
            Value::Str(_) => matches!(base, "String" | "CharSequence" | "Object"),
            _ => true,
        }
    })
}

fn default_value(type_text: &str) -> Value {
    match base_type_name(type_text) {
        "int" | "long" | "short" | "byte" => Value::Int(0),
        "double" | "float" => Value::Double(0.0),
        "boolean" => Value::Bool(false),
        "char" => Value::Char('\0'),
        _ => Value::Null,
    }
}

fn is_assertion_name(name: &str) -> bool {
    name == "fail" || name.starts_with("assert")
}

/// Split `(value)` / `(message, value)` assertion argument lists.
fn split_message1(args: Vec<Value>) -> (Option<String>, Option<Value>) {
    match args.len() {
        1 => (None, args.into_iter().next()),
        2 => {
            let mut it = args.into_iter();
            let msg = match it.next() {
                Some(Value::Str(s)) => Some(s.as_ref().clone()),
                _ => None,
            };
            (msg, it.next())
        }
        _ => (None, None),
    }
}

/// Split `(a, b)` / `(message, a, b)` assertion argument lists.
fn split_message2(args: Vec<Value>) -> (Option<String>, Option<(Value, Value)>) {
    match args.len() {
        2 => {
            let mut it = args.into_iter();
            (None, Some((it.next().unwrap(), it.next().unwrap())))
        }
        3 => {
            let mut it = args.into_iter();
            let msg = match it.next() {
                Some(Value::Str(s)) => Some(s.as_ref().clone()),
                _ => None,
            };
            (msg, Some((it.next().unwrap(), it.next().unwrap())))
        }
        _ => (None, None),
    }
}

fn kind_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Int(_) => "int",
        Value::Double(_) => "double",
        Value::Bool(_) => "boolean",
        Value::Char(_) => "char",
        Value::Str(_) => "String",
        Value::Builder(_) => "StringBuilder",
        Value::Obj(_) => "object",
        Value::Class(_) => "class",
        Value::Stdout => "PrintStream",
        Value::Void => "void",
    }
}

fn num_of(v: &Value) -> f64 {
    match v {
        Value::Int(i) => *i as f64,
        Value::Double(d) => *d,
        Value::Char(c) => *c as u32 as f64,
        Value::Bool(b) => *b as u8 as f64,
        _ => f64::NAN,
    }
}

fn int_of(v: &Value) -> Option<i64> {
    match v {
        Value::Int(i) => Some(*i),
        Value::Char(c) => Some(*c as i64),
        _ => None,
    }
}

fn value_ref_eq(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Null, Value::Null) => true,
        (Value::Int(x), Value::Int(y)) => x == y,
        (Value::Double(x), Value::Double(y)) => x == y,
        (Value::Int(x), Value::Double(y)) | (Value::Double(y), Value::Int(x)) => *x as f64 == *y,
        (Value::Bool(x), Value::Bool(y)) => x == y,
        (Value::Char(x), Value::Char(y)) => x == y,
        (Value::Char(x), Value::Int(y)) | (Value::Int(y), Value::Char(x)) => *x as i64 == *y,
        // String literals are interned in Java; content equality is the
        // closest behavior for the literal-heavy subset.
        (Value::Str(x), Value::Str(y)) => x == y,
        (Value::Obj(x), Value::Obj(y)) => Rc::ptr_eq(x, y),
        (Value::Builder(x), Value::Builder(y)) => Rc::ptr_eq(x, y),
        _ => false,
    }
}

fn java_string_hash(s: &str) -> i64 {
    let mut h: i32 = 0;
    for c in s.encode_utf16() {
        h = h.wrapping_mul(31).wrapping_add(c as i32);
    }
    h as i64
}

fn java_double_to_string(d: f64) -> String {
    if d.is_finite() && d == d.trunc() && d.abs() < 1e16 {
        format!("{d:.1}")
    } else {
        format!("{d}")
    }
}

/// JUnit's ComparisonFailure-style compact diff: shared prefix/suffix kept
/// (elided beyond 20 chars), differing middle bracketed.
fn comparison_message(expected: &str, actual: &str) -> String {
    const CONTEXT: usize = 20;
    let e: Vec<char> = expected.chars().collect();
    let a: Vec<char> = actual.chars().collect();
    let mut p = 0;
    while p < e.len() && p < a.len() && e[p] == a[p] {
        p += 1;
    }
    let mut s = 0;
    while s < e.len() - p && s < a.len() - p && e[e.len() - 1 - s] == a[a.len() - 1 - s] {
        s += 1;
    }
    let clip = |side: &[char]| -> String {
        let mid: String = side[p..side.len() - s].iter().collect();
        let prefix: String = if p > CONTEXT {
            format!("...{}", side[p - CONTEXT..p].iter().collect::<String>())
        } else {
            side[..p].iter().collect()
        };
        let suffix: String = if s > CONTEXT {
            format!(
                "{}...",
                side[side.len() - s..side.len() - s + CONTEXT]
                    .iter()
                    .collect::<String>()
            )
        } else {
            side[side.len() - s..].iter().collect()
        };
        format!("{prefix}[{mid}]{suffix}")
    };
    format!("expected:<{}> but was:<{}>", clip(&e), clip(&a))
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

    const STRBUILDER: &str = r#"package com.fixture.text;

public final class StrBuilder {
    private String value;

    public StrBuilder(String initial) {
        this.value = initial;
    }

    public void setCharAt(int index, char ch) {
        if (index < 0 || index >= value.length()) {
            throw new StringIndexOutOfBoundsException("index: " + index);
        }
        value = value.substring(0, index) + ch + value.substring(index + 1);
    }

    public StrBuilder append(String str) {
        value = value + str;
        return this;
    }

    public int length() {
        return value.length();
    }

    public String toString() {
        return value;
    }
}
"#;

    fn run(test_body: &str, sources: &[(&str, &str)]) -> (RunReport, String) {
        let mut all: Vec<(&str, &str)> = sources.to_vec();
        let test_src = format!(
            r#"package com.fixture.text;

import org.junit.Test;
import static org.junit.Assert.*;

public class GeneratedTest {{
    @Test
    public void testIt() {{
{test_body}
    }}
}}
"#
        );
        all.push(("src/test/java/com/fixture/text/GeneratedTest.java", &test_src));
        let table = table_with(&all);
        run_test_class(&table, "com.fixture.text.GeneratedTest", RunLimits::default()).unwrap()
    }

    #[test]
    fn passing_test_renders_ok() {
        let (report, text) = run(
            r#"        StrBuilder sb = new StrBuilder("Hello World");
        sb.setCharAt(6, 'J');
        assertEquals("Hello Jorld", sb.toString());"#,
            &[("src/main/java/com/fixture/text/StrBuilder.java", STRBUILDER)],
        );
        assert!(report.passed(), "failures: {:?}", report.failures);
        assert!(text.contains("OK (1 test)"));
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn wrong_assertion_is_comparison_failure() {
        let (report, text) = run(
            r#"        StrBuilder sb = new StrBuilder("Hello World");
        sb.setCharAt(6, 'J');
        assertEquals("Hello World", sb.toString());"#,
            &[("src/main/java/com/fixture/text/StrBuilder.java", STRBUILDER)],
        );
        assert_eq!(report.failures.len(), 1);
        let f = &report.failures[0];
        assert_eq!(f.exception_fqn, "org.junit.ComparisonFailure");
        assert_eq!(
            f.message.as_deref(),
            Some("expected:<Hello [W]orld> but was:<Hello [J]orld>")
        );
        assert!(text.contains("FAILURES!!!"));
        assert!(text.contains("Tests run: 1,  Failures: 1"));
        assert_eq!(report.exit_code(), 1);
    }

    #[test]
    fn int_assertion_failure_is_assertion_error() {
        let (report, _) = run(
            r#"        assertEquals(5, 2 + 2);"#,
            &[("src/main/java/com/fixture/text/StrBuilder.java", STRBUILDER)],
        );
        let f = &report.failures[0];
        assert_eq!(f.exception_fqn, "java.lang.AssertionError");
        assert_eq!(f.message.as_deref(), Some("expected:<5> but was:<4>"));
    }

    #[test]
    fn npe_on_null_receiver() {
        let (report, text) = run(
            r#"        String v = null;
        assertEquals(5, v.length());"#,
            &[("src/main/java/com/fixture/text/StrBuilder.java", STRBUILDER)],
        );
        let f = &report.failures[0];
        assert_eq!(f.exception_fqn, "java.lang.NullPointerException");
        // The frame for the test method carries the failing line.
        let test_frame = f
            .frames
            .iter()
            .find(|fr| fr.method == "testIt")
            .expect("test frame");
        assert_eq!(test_frame.line, 10);
        assert!(text.contains("java.lang.NullPointerException"));
    }

    #[test]
    fn project_exception_propagates() {
        let (report, _) = run(
            r#"        StrBuilder sb = new StrBuilder("hi");
        sb.setCharAt(10, 'x');"#,
            &[("src/main/java/com/fixture/text/StrBuilder.java", STRBUILDER)],
        );
        let f = &report.failures[0];
        assert_eq!(f.exception_fqn, "java.lang.StringIndexOutOfBoundsException");
        assert_eq!(f.message.as_deref(), Some("index: 10"));
        // Deepest frame is inside StrBuilder.
        assert_eq!(f.frames[0].method, "setCharAt");
        assert_eq!(f.frames[0].file, "StrBuilder.java");
    }

    #[test]
    fn division_by_zero() {
        let (report, _) = run(
            r#"        int x = 10 / 0;
        assertEquals(0, x);"#,
            &[("src/main/java/com/fixture/text/StrBuilder.java", STRBUILDER)],
        );
        let f = &report.failures[0];
        assert_eq!(f.exception_fqn, "java.lang.ArithmeticException");
        assert_eq!(f.message.as_deref(), Some("/ by zero"));
    }

    #[test]
    fn fail_and_asserts() {
        let (report, _) = run(
            r#"        assertTrue(1 < 2);
        assertFalse(2 < 1);
        assertNotNull("x");
        fail("boom");"#,
            &[("src/main/java/com/fixture/text/StrBuilder.java", STRBUILDER)],
        );
        let f = &report.failures[0];
        assert_eq!(f.exception_fqn, "java.lang.AssertionError");
        assert_eq!(f.message.as_deref(), Some("boom"));
    }

    #[test]
    fn infinite_loop_times_out_via_fuel() {
        let test_src = r#"
import org.junit.Test;
import static org.junit.Assert.*;

public class LoopTest {
    @Test
    public void testLoop() {
        int i = 0;
        while (true) { i = i + 1; }
    }
}
"#;
        let mut table = ClassTable::new();
        table.add_source(Path::new("LoopTest.java"), test_src);
        let limits = RunLimits {
            fuel: 50_000,
            deadline: None,
        };
        let (report, _) = run_test_class(&table, "LoopTest", limits).unwrap();
        assert_eq!(report.failures[0].exception_fqn, TIMEOUT_FQN);
    }

    #[test]
    fn loops_and_builders_work() {
        let (report, _) = run(
            r#"        StringBuilder b = new StringBuilder();
        for (int i = 0; i < 3; i++) {
            b.append("x");
        }
        assertEquals("xxx", b.toString());
        assertEquals(3, b.length());"#,
            &[("src/main/java/com/fixture/text/StrBuilder.java", STRBUILDER)],
        );
        assert!(report.passed(), "failures: {:?}", report.failures);
    }
}
