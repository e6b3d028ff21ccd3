//! A small CGA-style shape grammar.
//!
//! ```text
//! # attributes are sampled once per derivation
//! attr floor_h = rand(3, 3.6)
//! attr floors  = 4
//! terminal Window
//!
//! Lot      --> setback(1) extrude(floor_h * floors) Mass
//! Mass     --> comp(faces) { top: Top | side: Facade }
//! Top      --> 60%: roof(gable, 35) texture(tiles)  40%: roof(flat)
//! Facade   --> split(z) { ~1: Floor | 0.5: Cornice }
//! Floor    --> color(0.8, 0.75, 0.7)
//! Cornice  --> texture(trim)
//! ```
//!
//! A rule maps a predecessor symbol to one successor, or to stochastic
//! alternatives `p%: ...` whose percentages are normalized. A successor is
//! a sequence of operations optionally ending in a symbol; `split` and
//! `comp` end the successor by handing their parts to new symbols. A shape
//! whose symbol has no rule is terminal and is triangulated into the output
//! mesh. `#` starts a comment.
//!
//! | operation | applies to | effect |
//! |---|---|---|
//! | `extrude(h)` | footprint, top, mass | prism of height `h` |
//! | `split(x\|y\|z) { s: A \| ~w: B }` | footprint, mass, facade | slices along the scope axis; `~w` shares the residual |
//! | `comp(faces) { top: A \| side: B \| bottom: C }` | mass | top, one facade per edge, bottom |
//! | `setback(d)` | footprint, top, mass | insets the polygon by `d` |
//! | `roof(flat\|gable\|hip [, pitch])` | footprint, top, mass | roof solid; pitch in degrees, default 30 |
//! | `color(r, g, b)` | any | flat material, channels in `[0, 1]` |
//! | `texture(name)` | any | palette material |
//!
//! Scope axes: `x` runs along the longer side of the minimum-area bounding
//! rectangle, `y` across it, `z` up. On a facade `x` runs along the wall and
//! `y`/`z` up it.

mod ast;
mod derive;
mod lexer;
mod mesh;
mod parser;
mod split;

use alloc::string::String;

use thiserror::Error;

pub use ast::{
    AttrDecl, Axis, BinOp, CompSelector, Expr, GrammarProgram, Item, Operation, RoofKind, Rule, SplitEntry,
    SplitSizeExpr, Successor,
};
pub use derive::{derive, derive_with, Derivation, DeriveContext, DeriveError, DEFAULT_MAX_DEPTH, DEFAULT_MAX_SHAPES};
pub use mesh::{LabeledMesh, Material, Palette, SemanticClass, Stripe, MIN_TRIANGLE_AREA};
pub use parser::parse_grammar;
pub use split::{apply_split, SplitError, SplitSize, NUDGE_ULPS, SPLIT_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GrammarError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown operation `{name}` at {line}:{column}")]
    UnknownOperation { name: String, line: usize, column: usize },
    #[error("rule `{rule}` refers to undefined symbol `{symbol}`")]
    UndefinedSymbol { symbol: String, rule: String },
    #[error("`{context}` refers to undefined attribute `{name}`")]
    UndefinedAttribute { name: String, context: String },
    #[error("weight {weight} at {line}:{column} must be positive")]
    NonPositiveWeight { weight: f64, line: usize, column: usize },
}

impl GrammarProgram {
    /// Checks that every emitted symbol has a rule or is a declared
    /// terminal and that every attribute reference resolves.
    pub fn link(&self) -> Result<(), GrammarError> {
        parser::link(self)
    }

    /// Parses and links in one step.
    pub fn compile(src: &str) -> Result<GrammarProgram, GrammarError> {
        let p = parse_grammar(src)?;
        p.link()?;
        Ok(p)
    }
}
