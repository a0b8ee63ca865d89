//! Canonical text form of a spec document. Parsing the output yields an
//! equal tree.

use std::fmt::{self, Display, Formatter, Write};

use super::ast::*;

fn list<T: Display>(f: &mut Formatter<'_>, open: &str, items: &[T], close: &str) -> fmt::Result {
    f.write_str(open)?;
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str(close)
}

impl Display for Ident {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl<T: Display> Display for Node<T> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        self.kind.fmt(f)
    }
}

impl Display for Atom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Atom::P(None) => f.write_str("p"),
            Atom::P(Some(e)) => write!(f, "p^{e}"),
            Atom::U(n) => write!(f, "u({n})"),
        }
    }
}

impl Display for DigitLit {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            DigitLit::Int(n) => write!(f, "{n}"),
            DigitLit::Coords(cs) => list(f, "[", cs, "]"),
        }
    }
}

impl Display for Element {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            match (i, t.neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match (&t.digit, &t.atom) {
                (Some(d), Some(a)) => write!(f, "{d}*{a}")?,
                (Some(d), None) => write!(f, "{d}")?,
                (None, Some(a)) => write!(f, "{a}")?,
                (None, None) => f.write_str("0")?,
            }
        }
        Ok(())
    }
}

impl Display for SetExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            SetExpr::Name(id) => write!(f, "{id}"),
            SetExpr::Empty => f.write_str("empty"),
            SetExpr::Integers => f.write_str("O"),
            SetExpr::Units => f.write_str("O*"),
            SetExpr::Ball(e, k) => write!(f, "ball({e}, {k})"),
            SetExpr::Ideal(k) => write!(f, "ideal({k})"),
            SetExpr::Shell(k) => write!(f, "shell({k})"),
            SetExpr::Union(xs) => list(f, "union(", xs, ")"),
            SetExpr::Inter(xs) => list(f, "inter(", xs, ")"),
            SetExpr::Diff(a, b) => write!(f, "diff({a}, {b})"),
            SetExpr::Scale(a, j) => write!(f, "scale({a}, {j})"),
            SetExpr::Translate(a, e) => write!(f, "translate({a}, {e})"),
        }
    }
}

impl Display for ValueExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            ValueExpr::Rational(n, None) => write!(f, "{n}"),
            ValueExpr::Rational(n, Some(d)) => write!(f, "{n}/{d}"),
            ValueExpr::Zeta(None) => f.write_str("zeta"),
            ValueExpr::Zeta(Some(k)) => write!(f, "zeta^{k}"),
            ValueExpr::Qhalf(None) => f.write_str("qhalf"),
            ValueExpr::Qhalf(Some(e)) => write!(f, "qhalf^{e}"),
            ValueExpr::Neg(x) => write!(f, "-{x}"),
            ValueExpr::Add(a, b) => write!(f, "{a} + {b}"),
            ValueExpr::Sub(a, b) => write!(f, "{a} - {b}"),
            ValueExpr::Mul(a, b) => write!(f, "{a}*{b}"),
            ValueExpr::Paren(x) => write!(f, "({x})"),
        }
    }
}

impl Display for StepCell {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "(ball({}, {}), {})", self.center, self.scale, self.value)
    }
}

impl Display for FnExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            FnExpr::Name(id) => write!(f, "{id}"),
            FnExpr::Indicator(s) => write!(f, "indicator({s})"),
            FnExpr::Constant(s, v) => write!(f, "constant({s}, {v})"),
            FnExpr::Step(cells) => list(f, "step{", cells, "}"),
            FnExpr::Dilate(g, j) => write!(f, "dilate({g}, {j})"),
            FnExpr::Sum(gs) => list(f, "sum(", gs, ")"),
        }
    }
}

fn mode(m: FrameMode) -> &'static str {
    match m {
        FrameMode::Parseval => "parseval",
        FrameMode::Orthonormal => "orthonormal",
    }
}

impl Display for Check {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Check::Multiwavelet(l) => list(f, "multiwavelet [", l, "]"),
            Check::PfMultiwavelet(l) => list(f, "pf_multiwavelet [", l, "]"),
            Check::Superwavelet(m, l) => list(f, &format!("superwavelet {} [", mode(*m)), l, "]"),
            Check::DilationTiling(s) => write!(f, "dilation_tiling {s}"),
            Check::Translation(SetMode::Packing, s) => write!(f, "translation packing {s}"),
            Check::Translation(SetMode::Tiling, s) => write!(f, "translation tiling {s}"),
            Check::Mra(w, s) => write!(f, "mra {w} {s}"),
            Check::Frame(l) => list(f, "frame [", l, "]"),
            Check::Translates(m, id) => write!(f, "translates {} {id}", mode(*m)),
            Check::SuperGeneral(l) => list(f, "super [", l, "]"),
            Check::Equivalent(a, b) => {
                list(f, "equivalent [", a, "] ")?;
                list(f, "[", b, "]")
            }
        }
    }
}

impl Display for Builder {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Builder::Shannon => f.write_str("shannon()"),
            Builder::Annulus(m) => write!(f, "annulus({m})"),
            Builder::ScaledShannon(m) => write!(f, "scaled_shannon({m})"),
            Builder::Super47(n) => write!(f, "super47({n})"),
            Builder::Ex46Printed(n) => write!(f, "ex46_printed({n})"),
            Builder::Ex46Existing(n) => write!(f, "ex46_existing({n})"),
        }
    }
}

impl Display for Directive {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Directive::Check(c) => write!(f, "check {c}"),
            Directive::ScalingSet {
                name,
                source,
                depth,
            } => write!(f, "scaling_set {name} = {source} depth {depth}"),
            Directive::Construct { name, builder } => write!(f, "construct {name} = {builder}"),
            Directive::Solve {
                name,
                existing,
                shells,
                scale,
                time,
            } => {
                write!(f, "solve {name} = complement ")?;
                list(f, "[", existing, "]")?;
                write!(f, " shells {}..{} scale {scale}", shells.0, shells.1)?;
                if let Some(t) = time {
                    write!(f, " time {t}")?;
                }
                Ok(())
            }
            Directive::Simulate(s) => {
                let (kind, family, w) = match s {
                    Simulation::Parseval { family, window, .. } => ("parseval", family, window),
                    Simulation::SuperParseval { family, window, .. } => {
                        ("super_parseval", family, window)
                    }
                    Simulation::Gram { family, window, .. } => ("gram", family, window),
                };
                list(f, &format!("simulate {kind} ["), family, "]")?;
                write!(f, " window {},{}", w.r, w.s)?;
                match s {
                    Simulation::Parseval { trials, seed, .. }
                    | Simulation::SuperParseval { trials, seed, .. } => {
                        write!(f, " trials {trials}")?;
                        if let Some(x) = seed {
                            write!(f, " seed {x}")?;
                        }
                        Ok(())
                    }
                    Simulation::Gram { a, b, .. } => {
                        write!(f, " at ({},{}) ({},{})", a.0, a.1, b.0, b.1)
                    }
                }
            }
            Directive::Bound(BoundKind::Decomposability, id) => write!(f, "bound decomposability {id}"),
            Directive::Bound(BoundKind::Extendability, id) => write!(f, "bound extendability {id}"),
        }
    }
}

impl Display for Item {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Item::Set(id, e) => write!(f, "set {id} = {e}"),
            Item::Fn(id, e) => write!(f, "fn {id} = {e}"),
            Item::Family(id, l) => list(f, &format!("family {id} = ["), l, "]"),
            Item::Directive(d) => write!(f, "{d}"),
        }
    }
}

impl Display for FieldDecl {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "field {{ p = {}, c = {}", self.p, self.c)?;
        if let Some(m) = &self.modulus {
            list(f, ", modulus = [", m, "]")?;
        }
        f.write_str(" }")
    }
}

impl Display for Document {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        writeln!(out, "{}", self.field)?;
        for item in &self.items {
            writeln!(out, "{item}")?;
        }
        f.write_str(&out)
    }
}
