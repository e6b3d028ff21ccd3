use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Attr(String),
    /// Uniform draw from `[lo, hi)`.
    Rand(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Attribute names referenced anywhere in the expression.
    pub fn attrs<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Num(_) => {}
            Expr::Attr(n) => out.push(n),
            Expr::Rand(a, b) | Expr::Bin(_, a, b) => {
                a.attrs(out);
                b.attrs(out);
            }
            Expr::Neg(a) => a.attrs(out),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RoofKind {
    #[default]
    Flat,
    Gable,
    Hip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompSelector {
    Top,
    Side,
    Bottom,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SplitSizeExpr {
    Absolute(Expr),
    /// `~w`: share of the residual proportional to `w`.
    Relative(Expr),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitEntry {
    pub size: SplitSizeExpr,
    pub symbol: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Operation {
    Extrude(Expr),
    Split { axis: Axis, entries: Vec<SplitEntry> },
    Comp(Vec<(CompSelector, String)>),
    Setback(Expr),
    Roof { kind: RoofKind, pitch: Option<Expr> },
    Color(Expr, Expr, Expr),
    Texture(String),
}

impl Operation {
    /// Split and comp replace the current shape with their parts.
    pub fn consumes_shape(&self) -> bool {
        matches!(self, Operation::Split { .. } | Operation::Comp(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Op(Operation),
    /// Hands the current shape on under a new symbol.
    Emit(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Successor {
    /// Normalized probability; the weights of a rule sum to 1.
    pub weight: f64,
    /// Percentage as written, `None` for a rule with a single
    /// unweighted successor.
    pub percent: Option<f64>,
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub successors: Vec<Successor>,
}

impl Rule {
    pub fn is_stochastic(&self) -> bool {
        self.successors.len() > 1 || self.successors.iter().any(|s| s.percent.is_some())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttrDecl {
    pub name: String,
    pub value: Expr,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GrammarProgram {
    /// Evaluated in order; later declarations may refer to earlier ones.
    pub attrs: Vec<AttrDecl>,
    pub terminals: Vec<String>,
    pub rules: BTreeMap<String, Rule>,
}

impl GrammarProgram {
    pub fn rule(&self, symbol: &str) -> Option<&Rule> {
        self.rules.get(symbol)
    }

    pub fn is_terminal(&self, symbol: &str) -> bool {
        self.terminals.iter().any(|t| t == symbol)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Attr(n) => f.write_str(n),
            Expr::Rand(a, b) => write!(f, "rand({a}, {b})"),
            Expr::Neg(a) => write!(f, "-{a}"),
            Expr::Bin(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

impl fmt::Display for RoofKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RoofKind::Flat => "flat",
            RoofKind::Gable => "gable",
            RoofKind::Hip => "hip",
        })
    }
}

impl fmt::Display for CompSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompSelector::Top => "top",
            CompSelector::Side => "side",
            CompSelector::Bottom => "bottom",
        })
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operation::Extrude(h) => write!(f, "extrude({h})"),
            Operation::Setback(d) => write!(f, "setback({d})"),
            Operation::Color(r, g, b) => write!(f, "color({r}, {g}, {b})"),
            Operation::Texture(n) => write!(f, "texture({n})"),
            Operation::Roof { kind, pitch: None } => write!(f, "roof({kind})"),
            Operation::Roof { kind, pitch: Some(p) } => write!(f, "roof({kind}, {p})"),
            Operation::Split { axis, entries } => {
                write!(f, "split({axis}) {{ ")?;
                for (i, e) in entries.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    match &e.size {
                        SplitSizeExpr::Absolute(x) => write!(f, "{x}: {}", e.symbol)?,
                        SplitSizeExpr::Relative(x) => write!(f, "~{x}: {}", e.symbol)?,
                    }
                }
                f.write_str(" }")
            }
            Operation::Comp(parts) => {
                f.write_str("comp(faces) { ")?;
                for (i, (sel, sym)) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    write!(f, "{sel}: {sym}")?;
                }
                f.write_str(" }")
            }
        }
    }
}

fn write_items(f: &mut fmt::Formatter<'_>, items: &[Item]) -> fmt::Result {
    for item in items {
        match item {
            Item::Op(op) => write!(f, " {op}")?,
            Item::Emit(s) => write!(f, " {s}")?,
        }
    }
    Ok(())
}

/// Canonical source text; parsing it back yields an identical program.
impl fmt::Display for GrammarProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.attrs {
            writeln!(f, "attr {} = {}", a.name, a.value)?;
        }
        if !self.terminals.is_empty() {
            f.write_str("terminal ")?;
            for (i, t) in self.terminals.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                f.write_str(t)?;
            }
            writeln!(f)?;
        }
        for (name, rule) in &self.rules {
            write!(f, "{name} -->")?;
            for s in &rule.successors {
                if let Some(p) = s.percent {
                    write!(f, " {p}%:")?;
                }
                write_items(f, &s.items)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
