//! Built-in world model shared by the checker and the interpreter: a small
//! slice of the JDK plus the JUnit assertion surface.
//!
//! Classes fall into three tiers:
//! - *modeled*: members are known and strictly checked (String, Math, ...);
//! - *opaque*: the class resolves (no "cannot find symbol") but members are
//!   not checked — common JDK types we do not model;
//! - everything else is unknown and triggers symbol-resolution errors.

/// Checker type lattice.
#[derive(Debug, Clone, PartialEq)]
pub enum JType {
    Int,
    Double,
    Boolean,
    Char,
    Str,
    Void,
    Null,
    /// Instance of a named class (project, modeled, or opaque).
    Object(String),
    /// A class name used as a static receiver.
    ClassRef(String),
    Unknown,
}

impl JType {
    /// Java-source spelling used in diagnostics.
    pub fn display(&self) -> String {
        match self {
            JType::Int => "int".into(),
            JType::Double => "double".into(),
            JType::Boolean => "boolean".into(),
            JType::Char => "char".into(),
            JType::Str => "String".into(),
            JType::Void => "void".into(),
            JType::Null => "<nulltype>".into(),
            JType::Object(c) | JType::ClassRef(c) => c.clone(),
            JType::Unknown => "?".into(),
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, JType::Int | JType::Double | JType::Char)
    }

    pub fn is_concrete(&self) -> bool {
        !matches!(self, JType::Unknown)
    }
}

/// Map a Java type spelling to the checker lattice. Generic arguments and
/// arrays degrade to `Unknown` members but keep resolvability decisions to
/// the caller (which sees the base name).
pub fn primitive_type(text: &str) -> Option<JType> {
    Some(match text {
        "int" | "long" | "short" | "byte" => JType::Int,
        "double" | "float" => JType::Double,
        "boolean" => JType::Boolean,
        "char" => JType::Char,
        "void" => JType::Void,
        "String" | "java.lang.String" | "CharSequence" => JType::Str,
        _ => return None,
    })
}

/// Strip generic arguments and array suffixes: `List<String>[]` -> `List`.
pub fn base_type_name(text: &str) -> &str {
    let t = text.split('<').next().unwrap_or(text);
    t.trim_end_matches("[]").trim()
}

/// One modeled instance or static method.
pub struct BuiltinSig {
    pub name: &'static str,
    pub arities: &'static [usize],
    pub ret: fn() -> JType,
}

fn t_int() -> JType {
    JType::Int
}
fn t_double() -> JType {
    JType::Double
}
fn t_bool() -> JType {
    JType::Boolean
}
fn t_char() -> JType {
    JType::Char
}
fn t_str() -> JType {
    JType::Str
}
fn t_void() -> JType {
    JType::Void
}
fn t_builder() -> JType {
    JType::Object("StringBuilder".into())
}

pub const STRING_METHODS: &[BuiltinSig] = &[
    BuiltinSig { name: "length", arities: &[0], ret: t_int },
    BuiltinSig { name: "charAt", arities: &[1], ret: t_char },
    BuiltinSig { name: "substring", arities: &[1, 2], ret: t_str },
    BuiltinSig { name: "equals", arities: &[1], ret: t_bool },
    BuiltinSig { name: "equalsIgnoreCase", arities: &[1], ret: t_bool },
    BuiltinSig { name: "concat", arities: &[1], ret: t_str },
    BuiltinSig { name: "indexOf", arities: &[1, 2], ret: t_int },
    BuiltinSig { name: "contains", arities: &[1], ret: t_bool },
    BuiltinSig { name: "isEmpty", arities: &[0], ret: t_bool },
    BuiltinSig { name: "trim", arities: &[0], ret: t_str },
    BuiltinSig { name: "toUpperCase", arities: &[0], ret: t_str },
    BuiltinSig { name: "toLowerCase", arities: &[0], ret: t_str },
    BuiltinSig { name: "startsWith", arities: &[1], ret: t_bool },
    BuiltinSig { name: "endsWith", arities: &[1], ret: t_bool },
    BuiltinSig { name: "replace", arities: &[2], ret: t_str },
    BuiltinSig { name: "toString", arities: &[0], ret: t_str },
    BuiltinSig { name: "hashCode", arities: &[0], ret: t_int },
    BuiltinSig { name: "compareTo", arities: &[1], ret: t_int },
];

pub const STRING_STATICS: &[BuiltinSig] = &[BuiltinSig {
    name: "valueOf",
    arities: &[1],
    ret: t_str,
}];

pub const STRINGBUILDER_METHODS: &[BuiltinSig] = &[
    BuiltinSig { name: "append", arities: &[1], ret: t_builder },
    BuiltinSig { name: "toString", arities: &[0], ret: t_str },
    BuiltinSig { name: "length", arities: &[0], ret: t_int },
    BuiltinSig { name: "charAt", arities: &[1], ret: t_char },
];

pub const MATH_STATICS: &[BuiltinSig] = &[
    BuiltinSig { name: "max", arities: &[2], ret: t_int },
    BuiltinSig { name: "min", arities: &[2], ret: t_int },
    BuiltinSig { name: "abs", arities: &[1], ret: t_int },
    BuiltinSig { name: "floor", arities: &[1], ret: t_double },
    BuiltinSig { name: "ceil", arities: &[1], ret: t_double },
    BuiltinSig { name: "sqrt", arities: &[1], ret: t_double },
    BuiltinSig { name: "pow", arities: &[2], ret: t_double },
];

pub const INTEGER_STATICS: &[BuiltinSig] = &[
    BuiltinSig { name: "parseInt", arities: &[1], ret: t_int },
    BuiltinSig { name: "valueOf", arities: &[1], ret: t_int },
    BuiltinSig { name: "toString", arities: &[1], ret: t_str },
];

pub const OBJECT_METHODS: &[BuiltinSig] = &[
    BuiltinSig { name: "toString", arities: &[0], ret: t_str },
    BuiltinSig { name: "equals", arities: &[1], ret: t_bool },
    BuiltinSig { name: "hashCode", arities: &[0], ret: t_int },
];

/// JUnit assertion surface (JUnit 4 `Assert` and JUnit 5 `Assertions` share
/// these names for the subset we accept).
pub const ASSERT_STATICS: &[BuiltinSig] = &[
    BuiltinSig { name: "assertEquals", arities: &[2, 3], ret: t_void },
    BuiltinSig { name: "assertNotEquals", arities: &[2, 3], ret: t_void },
    BuiltinSig { name: "assertTrue", arities: &[1, 2], ret: t_void },
    BuiltinSig { name: "assertFalse", arities: &[1, 2], ret: t_void },
    BuiltinSig { name: "assertNull", arities: &[1, 2], ret: t_void },
    BuiltinSig { name: "assertNotNull", arities: &[1, 2], ret: t_void },
    BuiltinSig { name: "assertSame", arities: &[2, 3], ret: t_void },
    BuiltinSig { name: "assertNotSame", arities: &[2, 3], ret: t_void },
    BuiltinSig { name: "assertArrayEquals", arities: &[2, 3], ret: t_void },
    BuiltinSig { name: "fail", arities: &[0, 1], ret: t_void },
];

/// Throwable simple names we can construct, mapped to their qualified names.
pub const THROWABLES: &[(&str, &str)] = &[
    ("RuntimeException", "java.lang.RuntimeException"),
    ("Exception", "java.lang.Exception"),
    ("Error", "java.lang.Error"),
    ("AssertionError", "java.lang.AssertionError"),
    ("IllegalArgumentException", "java.lang.IllegalArgumentException"),
    ("IllegalStateException", "java.lang.IllegalStateException"),
    ("NullPointerException", "java.lang.NullPointerException"),
    ("ArithmeticException", "java.lang.ArithmeticException"),
    ("UnsupportedOperationException", "java.lang.UnsupportedOperationException"),
    ("IndexOutOfBoundsException", "java.lang.IndexOutOfBoundsException"),
    ("StringIndexOutOfBoundsException", "java.lang.StringIndexOutOfBoundsException"),
    ("NumberFormatException", "java.lang.NumberFormatException"),
];

pub fn throwable_fqn(simple: &str) -> Option<&'static str> {
    THROWABLES
        .iter()
        .find(|(s, _)| *s == simple)
        .map(|(_, q)| *q)
}

/// Classes with modeled members.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modeled {
    Str,
    StringBuilder,
    Math,
    Integer,
    System,
    Object,
    Assert,
    /// A constructible throwable (0- or 1-arg constructor).
    Throwable,
}

pub fn modeled_class(name: &str) -> Option<Modeled> {
    match base_type_name(name) {
        "String" | "java.lang.String" => Some(Modeled::Str),
        "StringBuilder" | "java.lang.StringBuilder" => Some(Modeled::StringBuilder),
        "Math" | "java.lang.Math" => Some(Modeled::Math),
        "Integer" | "java.lang.Integer" => Some(Modeled::Integer),
        "System" | "java.lang.System" => Some(Modeled::System),
        "Object" | "java.lang.Object" => Some(Modeled::Object),
        "Assert" | "org.junit.Assert" | "Assertions" | "org.junit.jupiter.api.Assertions" => {
            Some(Modeled::Assert)
        }
        n => {
            if throwable_fqn(n).is_some() {
                Some(Modeled::Throwable)
            } else {
                None
            }
        }
    }
}

pub fn modeled_instance_methods(m: Modeled) -> &'static [BuiltinSig] {
    match m {
        Modeled::Str => STRING_METHODS,
        Modeled::StringBuilder => STRINGBUILDER_METHODS,
        Modeled::Object | Modeled::Throwable => OBJECT_METHODS,
        _ => &[],
    }
}

pub fn modeled_static_methods(m: Modeled) -> &'static [BuiltinSig] {
    match m {
        Modeled::Str => STRING_STATICS,
        Modeled::Math => MATH_STATICS,
        Modeled::Integer => INTEGER_STATICS,
        Modeled::Assert => ASSERT_STATICS,
        _ => &[],
    }
}

/// Common JDK types that resolve but are not member-checked.
pub fn is_opaque_jdk(name: &str) -> bool {
    const OPAQUE: &[&str] = &[
        "ArrayList", "List", "LinkedList", "HashMap", "Map", "HashSet", "Set",
        "Arrays", "Collections", "Optional", "Objects", "Iterator", "Comparator",
        "Double", "Boolean", "Character", "Long", "Short", "Byte", "Float",
        "Number", "Thread", "Runnable", "Throwable", "StringBuffer", "Scanner",
        "Random", "BigDecimal", "BigInteger", "Locale", "UUID", "Pattern",
        "Matcher", "File", "URL", "URI",
    ];
    OPAQUE.contains(&base_type_name(name))
}

/// Package prefixes accepted in import statements without a project match.
pub fn is_known_external_package(path: &str) -> bool {
    const PREFIXES: &[&str] = &[
        "java.", "javax.", "org.junit", "org.hamcrest", "org.opentest4j",
    ];
    PREFIXES.iter().any(|p| path.starts_with(p))
}

pub fn find_sig<'a>(sigs: &'a [BuiltinSig], name: &str) -> Option<&'a BuiltinSig> {
    sigs.iter().find(|s| s.name == name)
}
