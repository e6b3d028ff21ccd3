use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::GrammarError;

const KEYWORDS: [&str; 2] = ["attr", "terminal"];
const OPERATIONS: [&str; 7] = ["extrude", "split", "comp", "setback", "roof", "color", "texture"];

/// Parses grammar source into a program. Symbol references are not
/// resolved here; see [`GrammarProgram::link`](super::GrammarProgram::link).
pub fn parse_grammar(src: &str) -> Result<GrammarProgram, GrammarError> {
    let tokens = tokenize(src)?;
    Parser { tokens, pos: 0 }.program()
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn here(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, t: &Token, message: String) -> GrammarError {
        GrammarError::Syntax { line: t.line, column: t.column, message }
    }

    fn unexpected(&self, expected: &str) -> GrammarError {
        let t = self.here();
        self.error_at(t, format!("expected {expected}, found {}", t.tok.describe()))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token, GrammarError> {
        if *self.peek() == tok {
            Ok(self.advance())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Token), GrammarError> {
        match self.peek().clone() {
            Tok::Ident(s) => Ok((s, self.advance())),
            _ => Err(self.unexpected(what)),
        }
    }

    fn symbol(&mut self) -> Result<String, GrammarError> {
        let (name, tok) = self.ident("a symbol")?;
        if KEYWORDS.contains(&name.as_str()) {
            return Err(self.error_at(&tok, format!("`{name}` is reserved")));
        }
        Ok(name)
    }

    fn at_statement_start(&self) -> bool {
        match self.peek() {
            Tok::Eof => true,
            Tok::Ident(s) => KEYWORDS.contains(&s.as_str()) || *self.peek_at(1) == Tok::Arrow,
            _ => false,
        }
    }

    fn at_alternative(&self) -> bool {
        matches!(self.peek(), Tok::Number(_)) && *self.peek_at(1) == Tok::Percent
    }

    fn program(mut self) -> Result<GrammarProgram, GrammarError> {
        let mut prog = GrammarProgram::default();
        loop {
            let start = self.here().clone();
            match self.peek().clone() {
                Tok::Eof => break,
                Tok::Ident(k) if k == "attr" => {
                    self.advance();
                    let (name, tok) = self.ident("an attribute name")?;
                    if prog.attrs.iter().any(|a| a.name == name) {
                        return Err(self.error_at(&tok, format!("attribute `{name}` declared twice")));
                    }
                    self.expect(Tok::Equals, "`=`")?;
                    let value = self.expr()?;
                    prog.attrs.push(AttrDecl { name, value });
                }
                Tok::Ident(k) if k == "terminal" => {
                    self.advance();
                    loop {
                        let name = self.symbol()?;
                        if !prog.terminals.contains(&name) {
                            prog.terminals.push(name);
                        }
                        if *self.peek() != Tok::Comma {
                            break;
                        }
                        self.advance();
                    }
                }
                Tok::Ident(_) if *self.peek_at(1) == Tok::Arrow => {
                    let name = self.symbol()?;
                    self.advance();
                    if prog.rules.contains_key(&name) {
                        return Err(self.error_at(&start, format!("rule `{name}` defined twice")));
                    }
                    let rule = self.rule_body()?;
                    prog.rules.insert(name, rule);
                }
                Tok::Ident(op) if *self.peek_at(1) == Tok::LParen && !OPERATIONS.contains(&op.as_str()) => {
                    return Err(GrammarError::UnknownOperation { name: op, line: start.line, column: start.column });
                }
                _ => return Err(self.unexpected("a rule, `attr` or `terminal`")),
            }
        }
        Ok(prog)
    }

    fn rule_body(&mut self) -> Result<Rule, GrammarError> {
        if !self.at_alternative() {
            let items = self.items(false)?;
            return Ok(Rule { successors: alloc::vec![Successor { weight: 1.0, percent: None, items }] });
        }
        let mut raw: Vec<(f64, Vec<Item>)> = Vec::new();
        while self.at_alternative() {
            let t = self.advance();
            let Tok::Number(p) = t.tok else { unreachable!() };
            self.advance();
            self.expect(Tok::Colon, "`:` after the percentage")?;
            if !(p > 0.0) || !p.is_finite() {
                return Err(GrammarError::NonPositiveWeight { weight: p, line: t.line, column: t.column });
            }
            let items = self.items(true)?;
            raw.push((p, items));
        }
        let total: f64 = raw.iter().map(|(p, _)| p).sum();
        let successors =
            raw.into_iter().map(|(p, items)| Successor { weight: p / total, percent: Some(p), items }).collect();
        Ok(Rule { successors })
    }

    fn items(&mut self, stochastic: bool) -> Result<Vec<Item>, GrammarError> {
        let mut items = Vec::new();
        let mut closed = false;
        loop {
            if self.at_statement_start() || (stochastic && self.at_alternative()) {
                break;
            }
            if closed {
                return Err(self.unexpected("the end of the successor"));
            }
            let t = self.here().clone();
            match self.peek().clone() {
                Tok::Ident(name) if *self.peek_at(1) == Tok::LParen => {
                    if !OPERATIONS.contains(&name.as_str()) {
                        return Err(GrammarError::UnknownOperation { name, line: t.line, column: t.column });
                    }
                    let op = self.operation(&name)?;
                    closed = op.consumes_shape();
                    items.push(Item::Op(op));
                }
                Tok::Ident(_) => {
                    items.push(Item::Emit(self.symbol()?));
                    closed = true;
                }
                _ => return Err(self.unexpected("an operation or a symbol")),
            }
        }
        Ok(items)
    }

    fn operation(&mut self, name: &str) -> Result<Operation, GrammarError> {
        self.advance();
        self.expect(Tok::LParen, "`(`")?;
        let op = match name {
            "extrude" => Operation::Extrude(self.expr()?),
            "setback" => Operation::Setback(self.expr()?),
            "color" => {
                let r = self.expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let g = self.expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.expr()?;
                Operation::Color(r, g, b)
            }
            "texture" => Operation::Texture(self.ident("a texture name")?.0),
            "roof" => {
                let kind = if *self.peek() == Tok::RParen {
                    RoofKind::Flat
                } else {
                    let (k, tok) = self.ident("a roof kind")?;
                    match k.as_str() {
                        "flat" => RoofKind::Flat,
                        "gable" => RoofKind::Gable,
                        "hip" => RoofKind::Hip,
                        _ => return Err(self.error_at(&tok, format!("unknown roof kind `{k}` (flat, gable, hip)"))),
                    }
                };
                let pitch = if *self.peek() == Tok::Comma {
                    self.advance();
                    Some(self.expr()?)
                } else {
                    None
                };
                Operation::Roof { kind, pitch }
            }
            "split" => {
                let (a, tok) = self.ident("an axis")?;
                let axis = match a.as_str() {
                    "x" => Axis::X,
                    "y" => Axis::Y,
                    "z" => Axis::Z,
                    _ => return Err(self.error_at(&tok, format!("unknown axis `{a}` (x, y, z)"))),
                };
                self.expect(Tok::RParen, "`)`")?;
                self.expect(Tok::LBrace, "`{`")?;
                let mut entries = Vec::new();
                loop {
                    let size = if *self.peek() == Tok::Tilde {
                        self.advance();
                        SplitSizeExpr::Relative(self.expr()?)
                    } else {
                        SplitSizeExpr::Absolute(self.expr()?)
                    };
                    self.expect(Tok::Colon, "`:`")?;
                    let symbol = self.symbol()?;
                    entries.push(SplitEntry { size, symbol });
                    if *self.peek() != Tok::Pipe {
                        break;
                    }
                    self.advance();
                }
                self.expect(Tok::RBrace, "`}`")?;
                return Ok(Operation::Split { axis, entries });
            }
            "comp" => {
                let (a, tok) = self.ident("`faces`")?;
                if a != "faces" {
                    return Err(self.error_at(&tok, format!("comp supports `faces`, found `{a}`")));
                }
                self.expect(Tok::RParen, "`)`")?;
                self.expect(Tok::LBrace, "`{`")?;
                let mut parts: Vec<(CompSelector, String)> = Vec::new();
                loop {
                    let (s, tok) = self.ident("a face selector")?;
                    let sel = match s.as_str() {
                        "top" => CompSelector::Top,
                        "side" => CompSelector::Side,
                        "bottom" => CompSelector::Bottom,
                        _ => {
                            return Err(self.error_at(&tok, format!("unknown face selector `{s}` (top, side, bottom)")))
                        }
                    };
                    if parts.iter().any(|(x, _)| *x == sel) {
                        return Err(self.error_at(&tok, format!("selector `{s}` used twice")));
                    }
                    self.expect(Tok::Colon, "`:`")?;
                    parts.push((sel, self.symbol()?));
                    if *self.peek() != Tok::Pipe {
                        break;
                    }
                    self.advance();
                }
                self.expect(Tok::RBrace, "`}`")?;
                return Ok(Operation::Comp(parts));
            }
            _ => unreachable!("caller checks the operation table"),
        };
        self.expect(Tok::RParen, "`)`")?;
        Ok(op)
    }

    fn expr(&mut self) -> Result<Expr, GrammarError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, GrammarError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, GrammarError> {
        if *self.peek() == Tok::Minus {
            self.advance();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, GrammarError> {
        let t = self.here().clone();
        match t.tok.clone() {
            Tok::Number(v) => {
                self.advance();
                Ok(Expr::Num(v))
            }
            Tok::LParen => {
                self.advance();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) if *self.peek_at(1) == Tok::LParen => {
                if name != "rand" {
                    return Err(GrammarError::UnknownOperation { name, line: t.line, column: t.column });
                }
                self.advance();
                self.advance();
                let lo = self.expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let hi = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::Rand(Box::new(lo), Box::new(hi)))
            }
            Tok::Ident(name) => {
                if KEYWORDS.contains(&name.as_str()) {
                    return Err(self.error_at(&t, format!("`{name}` is reserved")));
                }
                self.advance();
                Ok(Expr::Attr(name))
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}

/// Symbols emitted anywhere in `items`.
pub(super) fn emitted_symbols(items: &[Item]) -> Vec<&str> {
    let mut out = Vec::new();
    for item in items {
        match item {
            Item::Emit(s) => out.push(s.as_str()),
            Item::Op(Operation::Split { entries, .. }) => out.extend(entries.iter().map(|e| e.symbol.as_str())),
            Item::Op(Operation::Comp(parts)) => out.extend(parts.iter().map(|(_, s)| s.as_str())),
            Item::Op(_) => {}
        }
    }
    out
}

/// Expressions appearing in `items`.
pub(super) fn item_exprs(items: &[Item]) -> Vec<&Expr> {
    let mut out = Vec::new();
    for item in items {
        match item {
            Item::Op(Operation::Extrude(e) | Operation::Setback(e)) => out.push(e),
            Item::Op(Operation::Color(r, g, b)) => out.extend([r, g, b]),
            Item::Op(Operation::Roof { pitch: Some(p), .. }) => out.push(p),
            Item::Op(Operation::Split { entries, .. }) => out.extend(entries.iter().map(|e| match &e.size {
                SplitSizeExpr::Absolute(x) | SplitSizeExpr::Relative(x) => x,
            })),
            _ => {}
        }
    }
    out
}

pub(super) fn link(prog: &GrammarProgram) -> Result<(), GrammarError> {
    let mut known: BTreeMap<&str, ()> = BTreeMap::new();
    for (i, a) in prog.attrs.iter().enumerate() {
        let mut refs = Vec::new();
        a.value.attrs(&mut refs);
        for r in refs {
            if !prog.attrs[..i].iter().any(|b| b.name == r) {
                return Err(GrammarError::UndefinedAttribute { name: r.to_string(), context: a.name.clone() });
            }
        }
        known.insert(&a.name, ());
    }
    for (name, rule) in &prog.rules {
        for s in &rule.successors {
            for sym in emitted_symbols(&s.items) {
                if !prog.rules.contains_key(sym) && !prog.is_terminal(sym) {
                    return Err(GrammarError::UndefinedSymbol { symbol: sym.to_string(), rule: name.clone() });
                }
            }
            for e in item_exprs(&s.items) {
                let mut refs = Vec::new();
                e.attrs(&mut refs);
                for r in refs {
                    if !known.contains_key(r) {
                        return Err(GrammarError::UndefinedAttribute { name: r.to_string(), context: name.clone() });
                    }
                }
            }
        }
    }
    Ok(())
}
