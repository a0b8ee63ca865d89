//! Syntax tree of a spec document. Every node carries the position it was read
//! from; positions are ignored by equality.

use num_bigint::BigInt;

pub use super::lexer::Span;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node<T> {
    pub kind: T,
    pub span: Span,
}

impl<T> Node<T> {
    pub fn new(kind: T, span: Span) -> Self {
        Node { kind, span }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub field: Node<FieldDecl>,
    pub items: Vec<Item>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDecl {
    pub p: u32,
    pub c: u32,
    pub modulus: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Set(Ident, Node<SetExpr>),
    Fn(Ident, Node<FnExpr>),
    Family(Ident, Vec<Ident>),
    Directive(Node<Directive>),
}

/// GF(q) digit: a prime-field integer or ε-coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DigitLit {
    Int(u32),
    Coords(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    /// `p`, `p^e`.
    P(Option<i32>),
    /// `u(n)`.
    U(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElemTerm {
    pub neg: bool,
    pub digit: Option<DigitLit>,
    pub atom: Option<Atom>,
}

/// A field element; no terms means the literal `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub terms: Vec<ElemTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetExpr {
    Name(Ident),
    Empty,
    Integers,
    Units,
    Ball(Node<Element>, i32),
    Ideal(i32),
    Shell(i32),
    Union(Vec<Node<SetExpr>>),
    Inter(Vec<Node<SetExpr>>),
    Diff(Box<Node<SetExpr>>, Box<Node<SetExpr>>),
    Scale(Box<Node<SetExpr>>, i32),
    Translate(Box<Node<SetExpr>>, Node<Element>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueExpr {
    Rational(BigInt, Option<BigInt>),
    Zeta(Option<i64>),
    Qhalf(Option<i32>),
    Neg(Box<Node<ValueExpr>>),
    Add(Box<Node<ValueExpr>>, Box<Node<ValueExpr>>),
    Sub(Box<Node<ValueExpr>>, Box<Node<ValueExpr>>),
    Mul(Box<Node<ValueExpr>>, Box<Node<ValueExpr>>),
    Paren(Box<Node<ValueExpr>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepCell {
    pub center: Node<Element>,
    pub scale: i32,
    pub value: Node<ValueExpr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FnExpr {
    Name(Ident),
    Indicator(Node<SetExpr>),
    Constant(Node<SetExpr>, Node<ValueExpr>),
    Step(Vec<StepCell>),
    Dilate(Box<Node<FnExpr>>, i32),
    Sum(Vec<Node<FnExpr>>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetMode {
    Packing,
    Tiling,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameMode {
    Parseval,
    Orthonormal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Multiwavelet(Vec<Ident>),
    PfMultiwavelet(Vec<Ident>),
    Superwavelet(FrameMode, Vec<Ident>),
    DilationTiling(Node<SetExpr>),
    Translation(SetMode, Node<SetExpr>),
    Mra(Ident, Ident),
    Frame(Vec<Ident>),
    Translates(FrameMode, Ident),
    SuperGeneral(Vec<Ident>),
    Equivalent(Vec<Ident>, Vec<Ident>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builder {
    Shannon,
    Annulus(i32),
    ScaledShannon(i32),
    Super47(i32),
    Ex46Printed(i32),
    Ex46Existing(i32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Decomposability,
    Extendability,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub r: i32,
    pub s: i32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Simulation {
    Parseval {
        family: Vec<Ident>,
        window: Window,
        trials: u64,
        seed: Option<u64>,
    },
    SuperParseval {
        family: Vec<Ident>,
        window: Window,
        trials: u64,
        seed: Option<u64>,
    },
    Gram {
        family: Vec<Ident>,
        window: Window,
        a: (i32, u64),
        b: (i32, u64),
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Directive {
    Check(Check),
    ScalingSet {
        name: Ident,
        source: Ident,
        depth: i32,
    },
    Construct {
        name: Ident,
        builder: Builder,
    },
    Solve {
        name: Ident,
        existing: Vec<Ident>,
        shells: (i32, i32),
        scale: i32,
        time: Option<u64>,
    },
    Simulate(Simulation),
    Bound(BoundKind, Ident),
}
