//! LL(1) recursive-descent parser for spec documents.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use crate::error::{LfwError, Result};
use crate::gfq::{Field, FieldConfig};
use crate::lfield::parse_laurent;

/// What a defined name denotes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NameKind {
    Set,
    Fn,
    Family,
}

impl NameKind {
    fn describe(self) -> &'static str {
        match self {
            NameKind::Set => "a set",
            NameKind::Fn => "a function",
            NameKind::Family => "a family",
        }
    }
}

const RESERVED: &[&str] = &[
    "field", "set", "fn", "family", "check", "scaling_set", "construct", "solve", "simulate",
    "bound", "O", "empty", "zeta", "qhalf", "p", "u",
];

pub fn parse_spec(text: &str) -> Result<Document> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        names: HashMap::new(),
        field: None,
    };
    p.document()
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    names: HashMap<String, NameKind>,
    field: Option<Field>,
}

type Expected<'a> = &'a [&'a str];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn err_at<T>(&self, span: Span, message: String) -> Result<T> {
        Err(LfwError::Parse {
            line: span.line,
            col: span.col,
            message,
        })
    }

    fn unexpected<T>(&self, expected: Expected) -> Result<T> {
        self.err_at(
            self.span(),
            format!("expected one of {{{}}}, found {}", expected.join(", "), self.peek()),
        )
    }

    fn is(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.is(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<Span> {
        if self.is(&t) {
            Ok(self.bump().span)
        } else {
            let shown = t.to_string();
            self.unexpected(&[&shown])
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<()> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            let shown = format!("`{kw}`");
            self.unexpected(&[&shown])
        }
    }

    /// Consumes one of the keywords and returns it.
    fn one_of(&mut self, kws: Expected) -> Result<String> {
        if let Tok::Ident(s) = self.peek() {
            if kws.contains(&s.as_str()) {
                let s = s.clone();
                self.bump();
                return Ok(s);
            }
        }
        let shown: Vec<String> = kws.iter().map(|k| format!("`{k}`")).collect();
        let refs: Vec<&str> = shown.iter().map(String::as_str).collect();
        self.unexpected(&refs)
    }

    fn ident(&mut self) -> Result<Ident> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let span = self.bump().span;
                Ok(Ident { name, span })
            }
            _ => self.unexpected(&["identifier"]),
        }
    }

    fn uint(&mut self) -> Result<u64> {
        match self.peek() {
            Tok::Int(n) => {
                let n = *n;
                self.bump();
                Ok(n)
            }
            _ => self.unexpected(&["integer"]),
        }
    }

    fn sint(&mut self) -> Result<i64> {
        let span = self.span();
        if !matches!(self.peek(), Tok::Minus | Tok::Int(_)) {
            return self.unexpected(&["`-`", "integer"]);
        }
        let neg = self.eat(&Tok::Minus);
        let n = self.uint()?;
        let n = i64::try_from(n).or_else(|_| self.err_at(span, "integer out of range".into()))?;
        Ok(if neg { -n } else { n })
    }

    fn int32(&mut self) -> Result<i32> {
        let span = self.span();
        let n = self.sint()?;
        i32::try_from(n).or_else(|_| self.err_at(span, format!("integer {n} out of range")))
    }

    fn u32_lit(&mut self) -> Result<u32> {
        let span = self.span();
        let n = self.uint()?;
        u32::try_from(n).or_else(|_| self.err_at(span, format!("integer {n} out of range")))
    }

    fn field(&self) -> &Field {
        self.field.as_ref().expect("field block parsed first")
    }

    // ---- names ----

    fn define(&mut self, id: &Ident, kind: NameKind) -> Result<()> {
        if RESERVED.contains(&id.name.as_str()) {
            return self.err_at(id.span, format!("`{}` is a reserved word", id.name));
        }
        if self.names.contains_key(&id.name) {
            return self.err_at(id.span, format!("name `{}` is already defined", id.name));
        }
        self.names.insert(id.name.clone(), kind);
        Ok(())
    }

    fn resolve(&self, id: &Ident, allowed: &[NameKind]) -> Result<NameKind> {
        match self.names.get(&id.name) {
            None => self.err_at(id.span, format!("unknown identifier `{}`", id.name)),
            Some(k) if allowed.contains(k) => Ok(*k),
            Some(k) => self.err_at(
                id.span,
                format!("`{}` is {}, which is not allowed here", id.name, k.describe()),
            ),
        }
    }

    fn name_ref(&mut self, allowed: &[NameKind]) -> Result<Ident> {
        let id = self.ident()?;
        self.resolve(&id, allowed)?;
        Ok(id)
    }

    fn name_list(&mut self, allowed: &[NameKind]) -> Result<Vec<Ident>> {
        self.expect(Tok::LBracket)?;
        let mut out = Vec::new();
        if !self.eat(&Tok::RBracket) {
            loop {
                out.push(self.name_ref(allowed)?);
                if self.eat(&Tok::RBracket) {
                    break;
                }
                if !self.eat(&Tok::Comma) {
                    return self.unexpected(&["`,`", "`]`"]);
                }
            }
        }
        Ok(out)
    }

    // ---- document ----

    fn document(&mut self) -> Result<Document> {
        let field = self.field_block()?;
        let mut items = Vec::new();
        while !self.is(&Tok::Eof) {
            items.push(self.item()?);
        }
        Ok(Document { field, items })
    }

    fn field_block(&mut self) -> Result<Node<FieldDecl>> {
        let span = self.span();
        self.expect_kw("field")?;
        self.expect(Tok::LBrace)?;
        let (mut p, mut c, mut modulus) = (None, None, None);
        loop {
            if self.eat(&Tok::RBrace) {
                break;
            }
            let key_span = self.span();
            let key = self.one_of(&["p", "c", "modulus"])?;
            self.expect(Tok::Eq)?;
            let dup = match key.as_str() {
                "p" => p.replace(self.u32_lit()?).is_some(),
                "c" => c.replace(self.u32_lit()?).is_some(),
                _ => {
                    self.expect(Tok::LBracket)?;
                    let mut m = Vec::new();
                    if !self.eat(&Tok::RBracket) {
                        loop {
                            m.push(self.u32_lit()?);
                            if self.eat(&Tok::RBracket) {
                                break;
                            }
                            if !self.eat(&Tok::Comma) {
                                return self.unexpected(&["`,`", "`]`"]);
                            }
                        }
                    }
                    modulus.replace(m).is_some()
                }
            };
            if dup {
                return self.err_at(key_span, format!("field entry `{key}` given twice"));
            }
            self.eat(&Tok::Comma);
        }
        let Some(p) = p else {
            return self.err_at(span, "field block needs `p`".into());
        };
        let decl = FieldDecl {
            p,
            c: c.unwrap_or(1),
            modulus,
        };
        let field = FieldConfig::new(decl.p, decl.c, decl.modulus.clone()).or_else(|e| {
            self.err_at(span, format!("invalid field: {e}"))
        })?;
        self.field = Some(field);
        Ok(Node::new(decl, span))
    }

    fn item(&mut self) -> Result<Item> {
        let span = self.span();
        if self.is_kw("field") {
            return self.err_at(span, "field block given more than once".into());
        }
        if self.is_kw("set") {
            self.bump();
            let id = self.ident()?;
            self.expect(Tok::Eq)?;
            let e = self.set_expr()?;
            self.define(&id, NameKind::Set)?;
            return Ok(Item::Set(id, e));
        }
        if self.is_kw("fn") {
            self.bump();
            let id = self.ident()?;
            self.expect(Tok::Eq)?;
            let e = self.fn_expr()?;
            self.define(&id, NameKind::Fn)?;
            return Ok(Item::Fn(id, e));
        }
        if self.is_kw("family") {
            self.bump();
            let id = self.ident()?;
            self.expect(Tok::Eq)?;
            let l = self.name_list(&[NameKind::Set, NameKind::Fn, NameKind::Family])?;
            self.define(&id, NameKind::Family)?;
            return Ok(Item::Family(id, l));
        }
        let d = self.directive()?;
        Ok(Item::Directive(Node::new(d, span)))
    }

    // ---- directives ----

    fn directive(&mut self) -> Result<Directive> {
        const SETS: &[NameKind] = &[NameKind::Set, NameKind::Family];
        const FNS: &[NameKind] = &[NameKind::Set, NameKind::Fn, NameKind::Family];
        let kw = self.one_of(&[
            "set", "fn", "family", "check", "scaling_set", "construct", "solve", "simulate", "bound",
        ])?;
        match kw.as_str() {
            "check" => {
                let kind = self.one_of(&[
                    "multiwavelet",
                    "pf_multiwavelet",
                    "superwavelet",
                    "dilation_tiling",
                    "translation",
                    "mra",
                    "frame",
                    "translates",
                    "super",
                    "equivalent",
                ])?;
                let c = match kind.as_str() {
                    "multiwavelet" => Check::Multiwavelet(self.name_list(SETS)?),
                    "pf_multiwavelet" => Check::PfMultiwavelet(self.name_list(SETS)?),
                    "superwavelet" => {
                        let m = self.frame_mode()?;
                        Check::Superwavelet(m, self.name_list(SETS)?)
                    }
                    "dilation_tiling" => Check::DilationTiling(self.set_expr()?),
                    "translation" => {
                        let m = match self.one_of(&["packing", "tiling"])?.as_str() {
                            "packing" => SetMode::Packing,
                            _ => SetMode::Tiling,
                        };
                        Check::Translation(m, self.set_expr()?)
                    }
                    "mra" => {
                        let w = self.name_ref(&[NameKind::Set])?;
                        let s = self.name_ref(&[NameKind::Set])?;
                        Check::Mra(w, s)
                    }
                    "frame" => Check::Frame(self.name_list(FNS)?),
                    "translates" => {
                        let m = self.frame_mode()?;
                        Check::Translates(m, self.name_ref(&[NameKind::Set, NameKind::Fn])?)
                    }
                    "super" => Check::SuperGeneral(self.name_list(FNS)?),
                    _ => {
                        let a = self.name_list(FNS)?;
                        let b = self.name_list(FNS)?;
                        Check::Equivalent(a, b)
                    }
                };
                Ok(Directive::Check(c))
            }
            "scaling_set" => {
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                let source = self.name_ref(&[NameKind::Set])?;
                self.expect_kw("depth")?;
                let depth = self.int32()?;
                self.define(&name, NameKind::Set)?;
                Ok(Directive::ScalingSet {
                    name,
                    source,
                    depth,
                })
            }
            "construct" => {
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                let b = self.one_of(&[
                    "shannon",
                    "annulus",
                    "scaled_shannon",
                    "super47",
                    "ex46_printed",
                    "ex46_existing",
                ])?;
                self.expect(Tok::LParen)?;
                let builder = if b == "shannon" {
                    Builder::Shannon
                } else {
                    let n = self.int32()?;
                    match b.as_str() {
                        "annulus" => Builder::Annulus(n),
                        "scaled_shannon" => Builder::ScaledShannon(n),
                        "super47" => Builder::Super47(n),
                        "ex46_printed" => Builder::Ex46Printed(n),
                        _ => Builder::Ex46Existing(n),
                    }
                };
                self.expect(Tok::RParen)?;
                let kind = if matches!(builder, Builder::Annulus(_)) {
                    NameKind::Set
                } else {
                    NameKind::Family
                };
                self.define(&name, kind)?;
                Ok(Directive::Construct { name, builder })
            }
            "solve" => {
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                self.expect_kw("complement")?;
                let existing = self.name_list(SETS)?;
                self.expect_kw("shells")?;
                let a = self.int32()?;
                self.expect(Tok::DotDot)?;
                let b = self.int32()?;
                self.expect_kw("scale")?;
                let scale = self.int32()?;
                let time = if self.is_kw("time") {
                    self.bump();
                    Some(self.uint()?)
                } else {
                    None
                };
                self.define(&name, NameKind::Set)?;
                Ok(Directive::Solve {
                    name,
                    existing,
                    shells: (a, b),
                    scale,
                    time,
                })
            }
            "simulate" => {
                let kind = self.one_of(&["parseval", "super_parseval", "gram"])?;
                let family = self.name_list(FNS)?;
                self.expect_kw("window")?;
                let r = self.int32()?;
                self.expect(Tok::Comma)?;
                let s = self.int32()?;
                let window = Window { r, s };
                if kind == "gram" {
                    self.expect_kw("at")?;
                    let a = self.translate_index()?;
                    let b = self.translate_index()?;
                    return Ok(Directive::Simulate(Simulation::Gram {
                        family,
                        window,
                        a,
                        b,
                    }));
                }
                self.expect_kw("trials")?;
                let trials = self.uint()?;
                let seed = if self.is_kw("seed") {
                    self.bump();
                    Some(self.uint()?)
                } else {
                    None
                };
                Ok(Directive::Simulate(if kind == "parseval" {
                    Simulation::Parseval {
                        family,
                        window,
                        trials,
                        seed,
                    }
                } else {
                    Simulation::SuperParseval {
                        family,
                        window,
                        trials,
                        seed,
                    }
                }))
            }
            "bound" => {
                let kind = match self.one_of(&["decomposability", "extendability"])?.as_str() {
                    "decomposability" => BoundKind::Decomposability,
                    _ => BoundKind::Extendability,
                };
                Ok(Directive::Bound(kind, self.name_ref(&[NameKind::Set, NameKind::Fn])?))
            }
            _ => unreachable!("handled by item"),
        }
    }

    fn frame_mode(&mut self) -> Result<FrameMode> {
        Ok(match self.one_of(&["orthonormal", "parseval"])?.as_str() {
            "orthonormal" => FrameMode::Orthonormal,
            _ => FrameMode::Parseval,
        })
    }

    fn translate_index(&mut self) -> Result<(i32, u64)> {
        self.expect(Tok::LParen)?;
        let j = self.int32()?;
        self.expect(Tok::Comma)?;
        let k = self.uint()?;
        self.expect(Tok::RParen)?;
        Ok((j, k))
    }

    // ---- sets ----

    fn set_expr(&mut self) -> Result<Node<SetExpr>> {
        let span = self.span();
        let Tok::Ident(word) = self.peek().clone() else {
            return self.unexpected(&["set expression"]);
        };
        self.bump();
        let kind = match word.as_str() {
            "empty" => SetExpr::Empty,
            "O" => {
                if self.eat(&Tok::Star) {
                    SetExpr::Units
                } else {
                    SetExpr::Integers
                }
            }
            "ball" => {
                self.expect(Tok::LParen)?;
                let e = self.element()?;
                self.expect(Tok::Comma)?;
                let k = self.int32()?;
                self.expect(Tok::RParen)?;
                SetExpr::Ball(e, k)
            }
            "ideal" | "shell" => {
                self.expect(Tok::LParen)?;
                let k = self.int32()?;
                self.expect(Tok::RParen)?;
                if word == "ideal" {
                    SetExpr::Ideal(k)
                } else {
                    SetExpr::Shell(k)
                }
            }
            "union" | "inter" => {
                self.expect(Tok::LParen)?;
                let mut parts = Vec::new();
                if !self.eat(&Tok::RParen) {
                    loop {
                        parts.push(self.set_expr()?);
                        if self.eat(&Tok::RParen) {
                            break;
                        }
                        if !self.eat(&Tok::Comma) {
                            return self.unexpected(&["`,`", "`)`"]);
                        }
                    }
                }
                if word == "union" {
                    SetExpr::Union(parts)
                } else {
                    SetExpr::Inter(parts)
                }
            }
            "diff" => {
                self.expect(Tok::LParen)?;
                let a = self.set_expr()?;
                self.expect(Tok::Comma)?;
                let b = self.set_expr()?;
                self.expect(Tok::RParen)?;
                SetExpr::Diff(Box::new(a), Box::new(b))
            }
            "scale" => {
                self.expect(Tok::LParen)?;
                let a = self.set_expr()?;
                self.expect(Tok::Comma)?;
                let j = self.int32()?;
                self.expect(Tok::RParen)?;
                SetExpr::Scale(Box::new(a), j)
            }
            "translate" => {
                self.expect(Tok::LParen)?;
                let a = self.set_expr()?;
                self.expect(Tok::Comma)?;
                let e = self.element()?;
                self.expect(Tok::RParen)?;
                SetExpr::Translate(Box::new(a), e)
            }
            _ => {
                let id = Ident { name: word, span };
                self.resolve(&id, &[NameKind::Set])?;
                SetExpr::Name(id)
            }
        };
        Ok(Node::new(kind, span))
    }

    // ---- elements ----

    fn element(&mut self) -> Result<Node<Element>> {
        let span = self.span();
        let mut terms = Vec::new();
        let mut neg = self.eat(&Tok::Minus);
        loop {
            terms.push(self.elem_term(neg)?);
            if self.eat(&Tok::Plus) {
                neg = false;
            } else if self.eat(&Tok::Minus) {
                neg = true;
            } else {
                break;
            }
        }
        let node = Node::new(Element { terms }, span);
        if let Err(e) = parse_laurent(self.field(), &node.kind.to_string()) {
            return self.err_at(span, format!("invalid element: {e}"));
        }
        Ok(node)
    }

    fn elem_term(&mut self, neg: bool) -> Result<ElemTerm> {
        let digit = match self.peek() {
            Tok::Int(_) => Some(DigitLit::Int(self.u32_lit()?)),
            Tok::LBracket => {
                self.bump();
                let mut cs = Vec::new();
                if !self.eat(&Tok::RBracket) {
                    loop {
                        cs.push(self.u32_lit()?);
                        if self.eat(&Tok::RBracket) {
                            break;
                        }
                        if !self.eat(&Tok::Comma) {
                            return self.unexpected(&["`,`", "`]`"]);
                        }
                    }
                }
                Some(DigitLit::Coords(cs))
            }
            _ => None,
        };
        let atom = if digit.is_none() || self.eat(&Tok::Star) {
            Some(self.atom()?)
        } else {
            None
        };
        Ok(ElemTerm { neg, digit, atom })
    }

    fn atom(&mut self) -> Result<Atom> {
        if self.is_kw("p") {
            self.bump();
            if !self.eat(&Tok::Caret) {
                return Ok(Atom::P(None));
            }
            let e = if self.eat(&Tok::LParen) {
                let e = self.int32()?;
                self.expect(Tok::RParen)?;
                e
            } else {
                self.int32()?
            };
            return Ok(Atom::P(Some(e)));
        }
        if self.is_kw("u") {
            self.bump();
            self.expect(Tok::LParen)?;
            let n = self.uint()?;
            self.expect(Tok::RParen)?;
            return Ok(Atom::U(n));
        }
        self.unexpected(&["digit", "`p`", "`u`"])
    }

    // ---- values ----

    fn value(&mut self) -> Result<Node<ValueExpr>> {
        let span = self.span();
        let mut acc = if self.eat(&Tok::Minus) {
            let t = self.value_term()?;
            Node::new(ValueExpr::Neg(Box::new(t)), span)
        } else {
            self.value_term()?
        };
        loop {
            let add = if self.eat(&Tok::Plus) {
                true
            } else if self.eat(&Tok::Minus) {
                false
            } else {
                break;
            };
            let rhs = self.value_term()?;
            let (a, b) = (Box::new(acc), Box::new(rhs));
            acc = Node::new(
                if add {
                    ValueExpr::Add(a, b)
                } else {
                    ValueExpr::Sub(a, b)
                },
                span,
            );
        }
        Ok(acc)
    }

    fn value_term(&mut self) -> Result<Node<ValueExpr>> {
        let span = self.span();
        let mut acc = self.value_factor()?;
        while self.eat(&Tok::Star) {
            let rhs = self.value_factor()?;
            acc = Node::new(ValueExpr::Mul(Box::new(acc), Box::new(rhs)), span);
        }
        Ok(acc)
    }

    fn value_factor(&mut self) -> Result<Node<ValueExpr>> {
        let span = self.span();
        let kind = match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                let den = if self.eat(&Tok::Slash) {
                    let d_span = self.span();
                    let d = self.uint()?;
                    if d == 0 {
                        return self.err_at(d_span, "zero denominator".into());
                    }
                    Some(BigInt::from(d))
                } else {
                    None
                };
                ValueExpr::Rational(BigInt::from(n), den)
            }
            Tok::Ident(w) if w == "zeta" => {
                self.bump();
                ValueExpr::Zeta(if self.eat(&Tok::Caret) {
                    Some(self.sint()?)
                } else {
                    None
                })
            }
            Tok::Ident(w) if w == "qhalf" => {
                self.bump();
                ValueExpr::Qhalf(if self.eat(&Tok::Caret) {
                    Some(self.int32()?)
                } else {
                    None
                })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.value()?;
                self.expect(Tok::RParen)?;
                ValueExpr::Paren(Box::new(inner))
            }
            _ => return self.unexpected(&["integer", "`zeta`", "`qhalf`", "`(`"]),
        };
        Ok(Node::new(kind, span))
    }

    // ---- functions ----

    fn fn_expr(&mut self) -> Result<Node<FnExpr>> {
        let span = self.span();
        let Tok::Ident(word) = self.peek().clone() else {
            return self.unexpected(&["function expression"]);
        };
        self.bump();
        let kind = match word.as_str() {
            "indicator" => {
                self.expect(Tok::LParen)?;
                let s = self.set_expr()?;
                self.expect(Tok::RParen)?;
                FnExpr::Indicator(s)
            }
            "constant" => {
                self.expect(Tok::LParen)?;
                let s = self.set_expr()?;
                self.expect(Tok::Comma)?;
                let v = self.value()?;
                self.expect(Tok::RParen)?;
                FnExpr::Constant(s, v)
            }
            "step" => {
                self.expect(Tok::LBrace)?;
                let mut cells = Vec::new();
                if !self.eat(&Tok::RBrace) {
                    loop {
                        self.expect(Tok::LParen)?;
                        self.expect_kw("ball")?;
                        self.expect(Tok::LParen)?;
                        let center = self.element()?;
                        self.expect(Tok::Comma)?;
                        let scale = self.int32()?;
                        self.expect(Tok::RParen)?;
                        self.expect(Tok::Comma)?;
                        let value = self.value()?;
                        self.expect(Tok::RParen)?;
                        cells.push(StepCell {
                            center,
                            scale,
                            value,
                        });
                        if self.eat(&Tok::RBrace) {
                            break;
                        }
                        if !self.eat(&Tok::Comma) {
                            return self.unexpected(&["`,`", "`}`"]);
                        }
                    }
                }
                FnExpr::Step(cells)
            }
            "dilate" => {
                self.expect(Tok::LParen)?;
                let f = self.fn_expr()?;
                self.expect(Tok::Comma)?;
                let j = self.int32()?;
                self.expect(Tok::RParen)?;
                FnExpr::Dilate(Box::new(f), j)
            }
            "sum" => {
                self.expect(Tok::LParen)?;
                let mut parts = Vec::new();
                if !self.eat(&Tok::RParen) {
                    loop {
                        parts.push(self.fn_expr()?);
                        if self.eat(&Tok::RParen) {
                            break;
                        }
                        if !self.eat(&Tok::Comma) {
                            return self.unexpected(&["`,`", "`)`"]);
                        }
                    }
                }
                FnExpr::Sum(parts)
            }
            _ => {
                let id = Ident { name: word, span };
                self.resolve(&id, &[NameKind::Set, NameKind::Fn])?;
                FnExpr::Name(id)
            }
        };
        Ok(Node::new(kind, span))
    }
}
