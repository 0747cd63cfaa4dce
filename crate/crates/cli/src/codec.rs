//! Text forms of symbols and terms, and JSON documents for classes,
//! tree classes and structures.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde_json::{json, Map, Value};
use thiserror::Error;
use tokenspace::rep::{Builtin, RingTables, Topology};
use tokenspace::tree::{mk_tclass, TreeClass, TreeError, TreeTerm};
use tokenspace::{
    mk_class, mk_map, ClassError, Heap, Marker, MarkerKind, Symbol, SymbolMap, Token, TokenClass,
    TokenMap,
};

/// A parse failure at a 0-based byte offset, with 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at line {}, column {} (offset {}): {}",
            self.line, self.column, self.offset, self.message
        )
    }
}

impl std::error::Error for SyntaxError {}

#[derive(Debug, Error)]
pub enum CodecError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("schema error in field `{0}`")]
    Schema(String),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid JSON: {0}")]
    Json(String),
}

fn schema(field: &str) -> CodecError {
    CodecError::Schema(field.to_string())
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn error(&self, at: usize, message: impl Into<String>) -> SyntaxError {
        let before = &self.src[..at.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        SyntaxError {
            offset: at,
            line,
            column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected `{c}`")))
        }
    }

    fn unexpected(&self, what: &str) -> SyntaxError {
        match self.peek() {
            Some(c) => self.error(self.pos, format!("{what}, found `{c}`")),
            None => self.error(self.pos, format!("{what}, found end of input")),
        }
    }

    fn name(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.peek().is_some_and(is_name_char) {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.src[start..self.pos])
    }

    fn quoted(&mut self) -> Result<String, SyntaxError> {
        let start = self.pos;
        self.expect('\'')?;
        let mut out = String::new();
        loop {
            match self.peek() {
                None => return Err(self.error(start, "unterminated quoted name")),
                Some('\'') => {
                    self.pos += 1;
                    return Ok(out);
                }
                Some('\\') => {
                    self.pos += 1;
                    let c = self
                        .peek()
                        .ok_or_else(|| self.error(start, "unterminated quoted name"))?;
                    out.push(c);
                    self.pos += c.len_utf8();
                }
                Some(c) => {
                    out.push(c);
                    self.pos += c.len_utf8();
                }
            }
        }
    }

    fn finish(&mut self) -> Result<(), SyntaxError> {
        self.skip_ws();
        if self.pos < self.src.len() {
            return Err(self.unexpected("expected end of input"));
        }
        Ok(())
    }

    fn symbol(&mut self) -> Result<Symbol, SyntaxError> {
        match self.peek() {
            Some('#') => {
                let start = self.pos;
                self.pos += 1;
                let name = self
                    .name()
                    .ok_or_else(|| self.unexpected("expected a marker name"))?;
                let kind = MarkerKind::from_name(name)
                    .ok_or_else(|| self.error(start, format!("unknown marker #{name}")))?;
                let index = if self.eat('@') {
                    let at = self.pos;
                    let digits = self
                        .name()
                        .ok_or_else(|| self.unexpected("expected a marker index"))?;
                    digits
                        .parse()
                        .map_err(|_| self.error(at, "invalid marker index"))?
                } else {
                    0
                };
                Ok(Symbol::Marker(Marker { kind, index }))
            }
            Some('<') => {
                self.pos += 1;
                let l = self.symbol()?;
                self.expect(',')?;
                let r = self.symbol()?;
                self.expect('>')?;
                Ok(Symbol::pair(l, r))
            }
            Some('\'') => {
                let name = self.quoted()?;
                self.tail(name, true)
            }
            Some(c) if is_name_char(c) => {
                let name = self.name().expect("name").to_string();
                self.tail(name, false)
            }
            _ => Err(self.unexpected("expected a symbol")),
        }
    }

    /// Continues after a leading name: a tag, a function, a subset, a term
    /// or a plain atom.
    fn tail(&mut self, name: String, quoted: bool) -> Result<Symbol, SyntaxError> {
        if !self.eat(':') {
            return Ok(Symbol::Atom(name));
        }
        match (quoted, name.as_str(), self.peek()) {
            (false, "fn", Some('{')) => {
                self.pos += 1;
                let mut graph = BTreeMap::new();
                if !self.eat('}') {
                    loop {
                        let k = self.symbol()?;
                        self.expect('>')?;
                        let v = self.symbol()?;
                        graph.insert(k, v);
                        if self.eat('}') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                Ok(Symbol::Fn(graph))
            }
            (false, "set", Some('{')) => {
                self.pos += 1;
                let mut members = BTreeSet::new();
                if !self.eat('}') {
                    loop {
                        members.insert(self.symbol()?);
                        if self.eat('}') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                Ok(Symbol::Subset(members))
            }
            (false, "term", Some('(')) => Ok(Symbol::from_term(self.term()?)),
            _ => Ok(Symbol::tag(name, self.symbol()?)),
        }
    }

    fn term(&mut self) -> Result<TreeTerm, SyntaxError> {
        let mut parts = vec![self.term_item()?];
        loop {
            self.skip_ws();
            if self.eat('·') || self.eat('.') {
                self.skip_ws();
                parts.push(self.term_item()?);
            } else {
                return Ok(TreeTerm::seq(parts));
            }
        }
    }

    fn term_item(&mut self) -> Result<TreeTerm, SyntaxError> {
        self.skip_ws();
        if self.eat('(') {
            self.skip_ws();
            if self.eat(')') {
                return Ok(TreeTerm::amp(TreeTerm::Eps));
            }
            let mut parts = Vec::new();
            loop {
                parts.push(self.term()?);
                self.skip_ws();
                if self.eat(')') {
                    return Ok(TreeTerm::tuple(parts));
                }
                self.expect(',')?;
            }
        }
        if self.src[self.pos..].starts_with("eps")
            && !self.src[self.pos + 3..].starts_with(|c: char| is_name_char(c) || c == ':')
        {
            self.pos += 3;
            return Ok(TreeTerm::Eps);
        }
        Ok(TreeTerm::Leaf(self.symbol()?))
    }
}

/// Parses a symbol from its text form.
pub fn parse_symbol(text: &str) -> Result<Symbol, SyntaxError> {
    let mut c = Cursor::new(text);
    let s = c.symbol()?;
    c.finish()?;
    Ok(s)
}

fn write_name(out: &mut String, name: &str, reserved: bool) {
    if !reserved && !name.is_empty() && name.chars().all(is_name_char) {
        out.push_str(name);
    } else {
        out.push('\'');
        for c in name.chars() {
            if c == '\'' || c == '\\' {
                out.push('\\');
            }
            out.push(c);
        }
        out.push('\'');
    }
}

fn write_symbol(out: &mut String, s: &Symbol, in_term: bool) {
    match s {
        Symbol::Atom(name) => write_name(out, name, in_term && name == "eps"),
        Symbol::Pair(l, r) => {
            out.push('<');
            write_symbol(out, l, false);
            out.push(',');
            write_symbol(out, r, false);
            out.push('>');
        }
        Symbol::Tag(label, inner) => {
            write_name(out, label, false);
            out.push(':');
            write_symbol(out, inner, false);
        }
        Symbol::Fn(graph) => {
            out.push_str("fn:{");
            for (i, (k, v)) in graph.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_symbol(out, k, false);
                out.push('>');
                write_symbol(out, v, false);
            }
            out.push('}');
        }
        Symbol::Subset(members) => {
            out.push_str("set:{");
            for (i, m) in members.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_symbol(out, m, false);
            }
            out.push('}');
        }
        Symbol::Term(t) => {
            out.push_str("term:");
            write_term(out, t);
        }
        Symbol::Marker(m) => {
            out.push('#');
            out.push_str(m.kind.name());
            if m.index > 0 {
                out.push_str(&format!("@{}", m.index));
            }
        }
    }
}

fn write_term(out: &mut String, t: &TreeTerm) {
    match t {
        TreeTerm::Eps => out.push_str("eps"),
        TreeTerm::Leaf(s) => write_symbol(out, s, true),
        TreeTerm::Concat(parts) => {
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    out.push('·');
                }
                write_term(out, p);
            }
        }
        TreeTerm::Amp(inner) => {
            out.push('(');
            for (i, p) in inner.factors().iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_term(out, p);
            }
            out.push(')');
        }
    }
}

/// The text form of a symbol.
pub fn print_symbol(s: &Symbol) -> String {
    let mut out = String::new();
    write_symbol(&mut out, s, false);
    out
}

/// Parses `term := "eps" | SYMBOL | "(" [term {"," term}] ")"` into normal form.
pub fn parse_term(text: &str) -> Result<TreeTerm, SyntaxError> {
    let mut c = Cursor::new(text);
    let t = c.term()?;
    c.finish()?;
    Ok(t)
}

pub fn print_term(t: &TreeTerm) -> String {
    let mut out = String::new();
    write_term(&mut out, t);
    out
}

pub fn print_token(t: &Token) -> String {
    let body: Vec<String> = t.symbols().iter().map(print_symbol).collect();
    format!("({})", body.join(","))
}

pub fn print_map(m: &SymbolMap) -> String {
    let body: Vec<String> = m
        .iter()
        .map(|(k, v)| format!("{}>{}", print_symbol(k), print_symbol(v)))
        .collect();
    format!("{{{}}}", body.join(","))
}

fn symbol_of(v: &Value, field: &str) -> Result<Symbol, CodecError> {
    let s = v.as_str().ok_or_else(|| schema(field))?;
    Ok(parse_symbol(s)?)
}

fn symbols_of(v: Option<&Value>, field: &str) -> Result<BTreeSet<Symbol>, CodecError> {
    match v {
        None => Ok(BTreeSet::new()),
        Some(v) => v
            .as_array()
            .ok_or_else(|| schema(field))?
            .iter()
            .map(|x| symbol_of(x, field))
            .collect(),
    }
}

fn token_of(v: &Value, field: &str) -> Result<Token, CodecError> {
    let items = v.as_array().ok_or_else(|| schema(field))?;
    Ok(Token(
        items
            .iter()
            .map(|x| symbol_of(x, field))
            .collect::<Result<_, _>>()?,
    ))
}

fn map_of(v: &Value, field: &str) -> Result<SymbolMap, CodecError> {
    let obj = v.as_object().ok_or_else(|| schema(field))?;
    obj.iter()
        .map(|(k, v)| Ok((parse_symbol(k)?, symbol_of(v, field)?)))
        .collect()
}

fn tokens_of(v: &Value, field: &str) -> Result<BTreeSet<Token>, CodecError> {
    v.as_array()
        .ok_or_else(|| schema(field))?
        .iter()
        .map(|t| token_of(t, field))
        .collect()
}

fn two_heaps(v: &Value, field: &str, alpha: &BTreeSet<Symbol>) -> Result<(Heap, Heap), CodecError> {
    match v.as_array().map(Vec::as_slice) {
        Some([a, b]) => Ok((
            heap_expr_of(a, field, alpha)?,
            heap_expr_of(b, field, alpha)?,
        )),
        _ => Err(schema(field)),
    }
}

fn mapped_heap(
    v: &Value,
    field: &str,
    alpha: &BTreeSet<Symbol>,
) -> Result<(SymbolMap, Heap), CodecError> {
    let map = map_of(
        v.get("map")
            .ok_or_else(|| schema(&format!("{field}.map")))?,
        &format!("{field}.map"),
    )?;
    let of = heap_expr_of(
        v.get("of").ok_or_else(|| schema(&format!("{field}.of")))?,
        &format!("{field}.of"),
        alpha,
    )?;
    Ok((map, of))
}

/// Reads a heap expression node; `full` without an alphabet means `alpha`.
fn heap_expr_of(v: &Value, field: &str, alpha: &BTreeSet<Symbol>) -> Result<Heap, CodecError> {
    let obj = v
        .as_object()
        .filter(|o| o.len() == 1)
        .ok_or_else(|| schema(field))?;
    let (tag, body) = obj.iter().next().expect("one entry");
    let here = format!("{field}.{tag}");
    match tag.as_str() {
        "full" => match body.get("alphabet") {
            Some(a) => Ok(Heap::Full(symbols_of(Some(a), &here)?)),
            None if body.is_object() => Ok(Heap::Full(alpha.clone())),
            None => Err(schema(&here)),
        },
        "finite" => Ok(Heap::Finite(tokens_of(body, &here)?)),
        "union" => two_heaps(body, &here, alpha).map(|(a, b)| Heap::union(a, b)),
        "intersect" => two_heaps(body, &here, alpha).map(|(a, b)| Heap::intersect(a, b)),
        "difference" => two_heaps(body, &here, alpha).map(|(a, b)| Heap::difference(a, b)),
        "preimage" => mapped_heap(body, &here, alpha).map(|(m, h)| Heap::preimage(m, h)),
        "imagebij" => mapped_heap(body, &here, alpha).map(|(m, h)| Heap::image_bij(m, h)),
        _ => Err(schema(&here)),
    }
}

fn symbols_json(s: &BTreeSet<Symbol>) -> Value {
    Value::Array(s.iter().map(|x| Value::String(print_symbol(x))).collect())
}

/// Tokens by length, then lexicographically.
fn sorted_tokens(h: &BTreeSet<Token>) -> Vec<&Token> {
    let mut v: Vec<&Token> = h.iter().collect();
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    v
}

fn token_json(t: &Token) -> Value {
    Value::Array(
        t.symbols()
            .iter()
            .map(|s| Value::String(print_symbol(s)))
            .collect(),
    )
}

fn map_json(m: &SymbolMap) -> Value {
    Value::Object(
        m.iter()
            .map(|(k, v)| (print_symbol(k), Value::String(print_symbol(v))))
            .collect(),
    )
}

fn heap_expr_json(h: &Heap) -> Value {
    match h {
        Heap::Finite(ts) => {
            json!({ "finite": sorted_tokens(ts).into_iter().map(token_json).collect::<Vec<_>>() })
        }
        Heap::Full(a) => json!({ "full": { "alphabet": symbols_json(a) } }),
        Heap::Union(a, b) => json!({ "union": [heap_expr_json(a), heap_expr_json(b)] }),
        Heap::Intersect(a, b) => json!({ "intersect": [heap_expr_json(a), heap_expr_json(b)] }),
        Heap::Difference(a, b) => json!({ "difference": [heap_expr_json(a), heap_expr_json(b)] }),
        Heap::Preimage(m, of) => {
            json!({ "preimage": { "map": map_json(m), "of": heap_expr_json(of) } })
        }
        Heap::ImageBij(m, of) => {
            json!({ "imagebij": { "map": map_json(m), "of": heap_expr_json(of) } })
        }
    }
}

/// The class document of `t`.
pub fn class_to_json(t: &TokenClass) -> Value {
    let heap = match t.heap() {
        Heap::Finite(ts) => json!({
            "kind": "finite",
            "tokens": sorted_tokens(ts).into_iter().map(token_json).collect::<Vec<_>>(),
        }),
        other => json!({ "kind": "expr", "expr": heap_expr_json(other) }),
    };
    json!({ "name": t.name(), "base": symbols_json(t.base()), "core": symbols_json(t.core()), "heap": heap })
}

/// Reads and validates a class document.
pub fn class_from_json(v: &Value) -> Result<TokenClass, CodecError> {
    let obj = v.as_object().ok_or_else(|| schema("document"))?;
    let name = obj
        .get("name")
        .map_or(Some("T"), Value::as_str)
        .ok_or_else(|| schema("name"))?;
    let base = symbols_of(Some(obj.get("base").ok_or_else(|| schema("base"))?), "base")?;
    let core = symbols_of(obj.get("core"), "core")?;
    let heap = obj.get("heap").ok_or_else(|| schema("heap"))?;
    let alpha: BTreeSet<Symbol> = base.union(&core).cloned().collect();
    let heap = match heap.get("kind").and_then(Value::as_str) {
        Some("finite") => Heap::Finite(tokens_of(
            heap.get("tokens").ok_or_else(|| schema("heap.tokens"))?,
            "heap.tokens",
        )?),
        Some("expr") => heap_expr_of(
            heap.get("expr").ok_or_else(|| schema("heap.expr"))?,
            "heap.expr",
            &alpha,
        )?,
        _ => return Err(schema("heap.kind")),
    };
    Ok(mk_class(name, base, core, heap)?)
}

/// Canonical pretty JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> Result<Value, CodecError> {
    serde_json::from_str(text).map_err(|e| CodecError::Json(e.to_string()))
}

pub fn read_json(path: &Path) -> Result<Value, CodecError> {
    let text = std::fs::read_to_string(path).map_err(|e| CodecError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_json(&text)
}

pub fn read_class(path: &Path) -> Result<TokenClass, CodecError> {
    class_from_json(&read_json(path)?)
}

pub fn write_class(path: &Path, t: &TokenClass) -> Result<(), CodecError> {
    std::fs::write(path, to_text(&class_to_json(t))).map_err(|e| CodecError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// The map document: `src` and `dst` class documents and the base function `f0`.
pub fn map_to_json(m: &TokenMap) -> Value {
    json!({ "src": class_to_json(m.src()), "dst": class_to_json(m.dst()), "f0": map_json(m.f0()) })
}

pub fn map_from_json(v: &Value) -> Result<TokenMap, CodecError> {
    let obj = v.as_object().ok_or_else(|| schema("document"))?;
    let src = class_from_json(field(obj, "src")?)?;
    let dst = class_from_json(field(obj, "dst")?)?;
    let f0 = map_of(field(obj, "f0")?, "f0")?;
    Ok(mk_map(&src, &dst, f0)?)
}

pub fn read_map(path: &Path) -> Result<TokenMap, CodecError> {
    map_from_json(&read_json(path)?)
}

/// Re-renders a class, map or tree-class document, told apart by its fields.
pub fn canonical(v: &Value) -> Result<Value, CodecError> {
    if v.get("f0").is_some() {
        Ok(map_to_json(&map_from_json(v)?))
    } else if v.get("terms").is_some() {
        let name = v.get("name").and_then(Value::as_str).unwrap_or("T");
        Ok(tree_class_to_json(name, &tree_class_from_json(v)?))
    } else {
        Ok(class_to_json(&class_from_json(v)?))
    }
}

/// The tree-class document: `core`, optional `base`, and `terms` in text form.
pub fn tree_class_to_json(name: &str, t: &TreeClass) -> Value {
    json!({
        "name": name,
        "base": symbols_json(t.base()),
        "core": symbols_json(t.core()),
        "terms": t.heap().iter().map(|r| Value::String(print_term(r))).collect::<Vec<_>>(),
    })
}

pub fn tree_class_from_json(v: &Value) -> Result<TreeClass, CodecError> {
    let obj = v.as_object().ok_or_else(|| schema("document"))?;
    let core = symbols_of(obj.get("core"), "core")?;
    let terms = obj
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("terms"))?;
    let heap: Vec<TreeTerm> = terms
        .iter()
        .map(|t| Ok(parse_term(t.as_str().ok_or_else(|| schema("terms"))?)?))
        .collect::<Result<_, CodecError>>()?;
    match obj.get("base") {
        Some(b) => Ok(mk_tclass(symbols_of(Some(b), "base")?, core, heap)?),
        None => Ok(TreeClass::from_heap(core, heap)?),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value, CodecError> {
    obj.get(name).ok_or_else(|| schema(name))
}

fn pairs_of(v: &Value, name: &str) -> Result<Vec<(Symbol, Symbol)>, CodecError> {
    v.as_array()
        .ok_or_else(|| schema(name))?
        .iter()
        .map(|p| match p.as_array().map(Vec::as_slice) {
            Some([a, b]) => Ok((symbol_of(a, name)?, symbol_of(b, name)?)),
            _ => Err(schema(name)),
        })
        .collect()
}

fn usize_of(obj: &Map<String, Value>, name: &str) -> Result<usize, CodecError> {
    field(obj, name)?
        .as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| schema(name))
}

fn table_of(v: &Value, name: &str) -> Result<BTreeMap<(Symbol, Symbol), Symbol>, CodecError> {
    v.as_array()
        .ok_or_else(|| schema(name))?
        .iter()
        .map(|row| match row.as_array().map(Vec::as_slice) {
            Some([a, b, c]) => Ok((
                (symbol_of(a, name)?, symbol_of(b, name)?),
                symbol_of(c, name)?,
            )),
            _ => Err(schema(name)),
        })
        .collect()
}

fn ring_of(obj: &Map<String, Value>) -> Result<RingTables, CodecError> {
    if let Some(p) = obj.get("preset") {
        return match p.as_str() {
            Some("z2xz2") => Ok(RingTables::z2xz2()),
            Some(s) => s
                .strip_prefix('z')
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n > 0)
                .map(RingTables::zn)
                .ok_or_else(|| schema("preset")),
            None => Err(schema("preset")),
        };
    }
    let carrier = field(obj, "carrier")?
        .as_array()
        .ok_or_else(|| schema("carrier"))?
        .iter()
        .map(|x| symbol_of(x, "carrier"))
        .collect::<Result<Vec<_>, _>>()?;
    let neg = pairs_of(field(obj, "neg")?, "neg")?.into_iter().collect();
    Ok(RingTables {
        carrier,
        add: table_of(field(obj, "add")?, "add")?,
        mul: table_of(field(obj, "mul")?, "mul")?,
        neg,
        zero: symbol_of(field(obj, "zero")?, "zero")?,
    })
}

/// Reads a structure document for the given builtin kind.
pub fn structure_from_json(kind: &str, v: &Value) -> Result<Builtin, CodecError> {
    let obj = v.as_object().ok_or_else(|| schema("document"))?;
    let carrier = || symbols_of(Some(field(obj, "carrier")?), "carrier");
    Ok(match kind {
        "set" => Builtin::Set(carrier()?),
        "pointed" => Builtin::Pointed(carrier()?, symbol_of(field(obj, "point")?, "point")?),
        "ords" => Builtin::Ords(carrier()?, pairs_of(field(obj, "ge")?, "ge")?),
        "gph" => Builtin::Gph(
            symbols_of(Some(field(obj, "vertices")?), "vertices")?,
            pairs_of(field(obj, "edges")?, "edges")?,
        ),
        "rng" => Builtin::Rng(ring_of(obj)?),
        "vct" => Builtin::Vct {
            p: usize_of(obj, "p")?,
            dim: usize_of(obj, "dim")?,
        },
        "vct-prime" => Builtin::VctPrime {
            p: usize_of(obj, "p")?,
            dim: usize_of(obj, "dim")?,
        },
        "top" => {
            let opens = field(obj, "opens")?
                .as_array()
                .ok_or_else(|| schema("opens"))?
                .iter()
                .map(|o| symbols_of(Some(o), "opens"))
                .collect::<Result<_, _>>()?;
            Builtin::TopOp(Topology {
                points: symbols_of(Some(field(obj, "points")?), "points")?,
                opens,
            })
        }
        _ => return Err(schema("kind")),
    })
}
