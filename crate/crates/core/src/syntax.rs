//! Formulas: terms, atoms, the core connectives, a parser for the concrete
//! grammar and a printer that round-trips with it.
//!
//! Only `~`, `\/{J}` and `E vn/{J}` are primitive. `/\{J}` and `A vn/{J}`
//! are rewritten on the way in:
//!
//! ```text
//! (p /\{J} q)  =>  ~(~p \/{J} ~q)
//! A vn/{J} p   =>  ~E vn/{J} ~p
//! ```

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::model::IndexSet;

pub const DEFAULT_DEPTH_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(usize),
    Const(String),
    App(String, Vec<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Eq(Term, Term),
    Rel(String, Vec<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Atomic(Atom),
    Not(Box<Node>),
    Or(IndexSet, Box<Node>, Box<Node>),
    Exists(usize, IndexSet, Box<Node>),
}

/// A formula together with the number of variables it is read over.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Formula {
    nvars: usize,
    root: Node,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Pos,
    Neg,
}

/// Address of a subformula: `0` under `~`, `1`/`2` under `\/`, `3` under `E`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<u8>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn child(&self, step: u8) -> Self {
        let mut v = self.0.clone();
        v.push(step);
        Position(v)
    }

    pub fn prefixed(&self, step: u8) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(step);
        v.extend_from_slice(&self.0);
        Position(v)
    }

    pub fn polarity(&self) -> Polarity {
        if self.0.iter().filter(|&&d| d == 0).count() % 2 == 0 {
            Polarity::Pos
        } else {
            Polarity::Neg
        }
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Position {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "ε" || s.is_empty() {
            return Ok(Position::root());
        }
        s.chars()
            .map(|c| match c {
                '0'..='3' => Ok(c as u8 - b'0'),
                _ => Err(format!("bad position digit {c:?}")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Position)
    }
}

impl Node {
    pub fn atom(a: Atom) -> Node {
        Node::Atomic(a)
    }

    pub fn eq(l: Term, r: Term) -> Node {
        Node::Atomic(Atom::Eq(l, r))
    }

    pub fn not(x: Node) -> Node {
        Node::Not(Box::new(x))
    }

    pub fn or(j: IndexSet, l: Node, r: Node) -> Node {
        Node::Or(j, Box::new(l), Box::new(r))
    }

    pub fn and(j: IndexSet, l: Node, r: Node) -> Node {
        Node::not(Node::or(j, Node::not(l), Node::not(r)))
    }

    pub fn exists(n: usize, j: IndexSet, x: Node) -> Node {
        Node::Exists(n, j, Box::new(x))
    }

    pub fn forall(n: usize, j: IndexSet, x: Node) -> Node {
        Node::not(Node::exists(n, j, Node::not(x)))
    }

    /// Nesting depth; an atom has depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Node::Atomic(_) => 1,
            Node::Not(x) | Node::Exists(_, _, x) => 1 + x.depth(),
            Node::Or(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Node::Atomic(_) => 1,
            Node::Not(x) | Node::Exists(_, _, x) => 1 + x.size(),
            Node::Or(_, l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn is_slash_free(&self) -> bool {
        match self {
            Node::Atomic(_) => true,
            Node::Not(x) => x.is_slash_free(),
            Node::Or(j, l, r) => j.is_empty() && l.is_slash_free() && r.is_slash_free(),
            Node::Exists(_, j, x) => j.is_empty() && x.is_slash_free(),
        }
    }

    fn max_index(&self) -> Option<usize> {
        let own = match self {
            Node::Atomic(a) => a.max_var(),
            Node::Not(_) => None,
            Node::Or(j, _, _) => j.max_index(),
            Node::Exists(n, j, _) => Some(j.max_index().map_or(*n, |m| m.max(*n))),
        };
        let kids = match self {
            Node::Atomic(_) => None,
            Node::Not(x) | Node::Exists(_, _, x) => x.max_index(),
            Node::Or(_, l, r) => l.max_index().max(r.max_index()),
        };
        own.max(kids)
    }
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn vars(&self, out: &mut Vec<usize>) {
        match self {
            Term::Var(i) => out.push(*i),
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|t| t.vars(out)),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }
}

impl Atom {
    pub fn vars(&self) -> Vec<usize> {
        let mut out = Vec::new();
        match self {
            Atom::Eq(l, r) => {
                l.vars(&mut out);
                r.vars(&mut out);
            }
            Atom::Rel(_, args) => args.iter().for_each(|t| t.vars(&mut out)),
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn max_var(&self) -> Option<usize> {
        self.vars().last().copied()
    }
}

/// One entry of the flattened subformula tree, in preorder.
#[derive(Clone, Debug)]
pub struct TreeNode {
    pub position: Position,
    pub polarity: Polarity,
    /// Variables bound by the quantifiers above this node.
    pub unbound: IndexSet,
    pub kind: Kind,
}

/// Node shape with children given as indices into [`Tree::nodes`].
#[derive(Clone, Debug)]
pub enum Kind {
    Atomic(Atom),
    Not(usize),
    Or(IndexSet, usize, usize),
    Exists(usize, IndexSet, usize),
}

#[derive(Clone, Debug)]
pub struct Tree {
    pub nodes: Vec<TreeNode>,
}

impl Tree {
    pub fn root(&self) -> usize {
        0
    }

    pub fn find(&self, pos: &Position) -> Option<usize> {
        self.nodes.iter().position(|n| &n.position == pos)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("at byte {offset}: expected {expected}, found {found}")]
    Unexpected {
        offset: usize,
        expected: String,
        found: String,
    },
    #[error("at byte {offset}: unknown symbol {ch:?}")]
    UnknownSymbol { offset: usize, ch: char },
    #[error("at byte {offset}: variable v{index} out of range for {nvars} variables")]
    VarOutOfRange {
        offset: usize,
        index: usize,
        nvars: usize,
    },
    #[error("at byte {offset}: slash index {index} out of range for {nvars} variables")]
    SlashOutOfRange {
        offset: usize,
        index: usize,
        nvars: usize,
    },
    #[error("at byte {offset}: formula deeper than {limit}")]
    TooDeep { offset: usize, limit: usize },
    #[error("index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
}

impl Formula {
    /// Wraps a node, checking that every index is below `nvars`.
    pub fn new(nvars: usize, root: Node) -> Result<Formula, SyntaxError> {
        if nvars > IndexSet::CAPACITY {
            return Err(SyntaxError::IndexOutOfRange {
                index: nvars,
                nvars: IndexSet::CAPACITY,
            });
        }
        if let Some(m) = root.max_index() {
            if m >= nvars {
                return Err(SyntaxError::IndexOutOfRange { index: m, nvars });
            }
        }
        Ok(Formula { nvars, root })
    }

    pub fn parse(text: &str, nvars: usize) -> Result<Formula, SyntaxError> {
        Formula::parse_with_limit(text, nvars, DEFAULT_DEPTH_LIMIT)
    }

    pub fn parse_with_limit(text: &str, nvars: usize, limit: usize) -> Result<Formula, SyntaxError> {
        let tokens = lex(text)?;
        let mut p = Parser {
            tokens,
            at: 0,
            nvars,
            limit,
            end: text.len(),
        };
        let root = p.formula(1)?;
        if p.at < p.tokens.len() {
            return Err(p.unexpected("end of input"));
        }
        Formula::new(nvars, root)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn into_root(self) -> Node {
        self.root
    }

    pub fn negated(&self) -> Formula {
        Formula {
            nvars: self.nvars,
            root: Node::not(self.root.clone()),
        }
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn tree(&self) -> Tree {
        let mut nodes = Vec::with_capacity(self.root.size());
        flatten(&self.root, Position::root(), IndexSet::EMPTY, &mut nodes);
        Tree { nodes }
    }

    /// Every subformula in preorder with its position and polarity.
    pub fn subformulas(&self) -> Vec<(Position, &Node, Polarity)> {
        let mut out = Vec::new();
        collect(&self.root, Position::root(), &mut out);
        out
    }

    pub fn unbound_sets(&self) -> BTreeMap<Position, IndexSet> {
        self.tree()
            .nodes
            .into_iter()
            .map(|n| (n.position, n.unbound))
            .collect()
    }

    /// First variable that occurs in an atom outside the scope of a
    /// quantifier binding it.
    pub fn free_occurrence(&self) -> Option<(Position, usize)> {
        self.tree().nodes.into_iter().find_map(|n| match &n.kind {
            Kind::Atomic(a) => a
                .vars()
                .into_iter()
                .find(|v| !n.unbound.contains(*v))
                .map(|v| (n.position.clone(), v)),
            _ => None,
        })
    }

    pub fn is_sentence(&self) -> bool {
        self.nvars == 0 || self.free_occurrence().is_none()
    }

    pub fn with_header(&self) -> String {
        format!("# nvars={}\n{}\n", self.nvars, self)
    }
}

fn flatten(node: &Node, pos: Position, unbound: IndexSet, out: &mut Vec<TreeNode>) -> usize {
    let id = out.len();
    out.push(TreeNode {
        polarity: pos.polarity(),
        position: pos.clone(),
        unbound,
        kind: Kind::Not(usize::MAX),
    });
    let kind = match node {
        Node::Atomic(a) => Kind::Atomic(a.clone()),
        Node::Not(x) => Kind::Not(flatten(x, pos.child(0), unbound, out)),
        Node::Or(j, l, r) => {
            let li = flatten(l, pos.child(1), unbound, out);
            let ri = flatten(r, pos.child(2), unbound, out);
            Kind::Or(*j, li, ri)
        }
        Node::Exists(n, j, x) => {
            let ci = flatten(x, pos.child(3), unbound.with(*n), out);
            Kind::Exists(*n, *j, ci)
        }
    };
    out[id].kind = kind;
    id
}

fn collect<'a>(node: &'a Node, pos: Position, out: &mut Vec<(Position, &'a Node, Polarity)>) {
    out.push((pos.clone(), node, pos.polarity()));
    match node {
        Node::Atomic(_) => {}
        Node::Not(x) => collect(x, pos.child(0), out),
        Node::Or(_, l, r) => {
            collect(l, pos.child(1), out);
            collect(r, pos.child(2), out);
        }
        Node::Exists(_, _, x) => collect(x, pos.child(3), out),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "v{i}"),
            Term::Const(c) => f.write_str(c),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Eq(l, r) => write!(f, "{l}={r}"),
            Atom::Rel(name, args) => write!(f, "{}", Term::App(name.clone(), args.clone())),
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Atomic(a) => write!(f, "{a}"),
            Node::Not(x) => write!(f, "~{x}"),
            Node::Or(j, l, r) => write!(f, "({l} \\/{j} {r})"),
            Node::Exists(n, j, x) => write!(f, "E v{n}/{j} {x}"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Tilde,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Equals,
    Slash,
    OrOp,
    AndOp,
    Word(String),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Tilde => f.write_str("'~'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::LBrace => f.write_str("'{'"),
            Tok::RBrace => f.write_str("'}'"),
            Tok::Comma => f.write_str("','"),
            Tok::Equals => f.write_str("'='"),
            Tok::Slash => f.write_str("'/'"),
            Tok::OrOp => f.write_str("'\\/'"),
            Tok::AndOp => f.write_str("'/\\'"),
            Tok::Word(w) => write!(f, "{w:?}"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => Tok::Tilde,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'{' => Tok::LBrace,
            b'}' => Tok::RBrace,
            b',' => Tok::Comma,
            b'=' => Tok::Equals,
            b'\\' if bytes.get(i + 1) == Some(&b'/') => {
                out.push((i, Tok::OrOp));
                i += 2;
                continue;
            }
            b'/' if bytes.get(i + 1) == Some(&b'\\') => {
                out.push((i, Tok::AndOp));
                i += 2;
                continue;
            }
            b'/' => Tok::Slash,
            c if c.is_ascii_alphanumeric() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Word(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(SyntaxError::UnknownSymbol { offset: i, ch });
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

fn var_index(word: &str) -> Option<usize> {
    let digits = word.strip_prefix('v')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

struct Parser {
    tokens: Vec<(usize, Tok)>,
    at: usize,
    nvars: usize,
    limit: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.at).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.tokens.get(self.at + 1).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.at).map_or(self.end, |(o, _)| *o)
    }

    fn unexpected(&self, expected: &str) -> SyntaxError {
        SyntaxError::Unexpected {
            offset: self.offset(),
            expected: expected.to_string(),
            found: self.peek().map_or("end of input".to_string(), |t| t.to_string()),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), SyntaxError> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn formula(&mut self, depth: usize) -> Result<Node, SyntaxError> {
        if depth > self.limit {
            return Err(SyntaxError::TooDeep {
                offset: self.offset(),
                limit: self.limit,
            });
        }
        match self.peek() {
            Some(Tok::Tilde) => {
                self.at += 1;
                Ok(Node::not(self.formula(depth + 1)?))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let l = self.formula(depth + 1)?;
                let op = self.peek().cloned();
                match op {
                    Some(Tok::OrOp) | Some(Tok::AndOp) => self.at += 1,
                    Some(Tok::RParen) => {
                        self.at += 1;
                        return Ok(l);
                    }
                    _ => return Err(self.unexpected("'\\/', '/\\' or ')'")),
                }
                let j = self.index_set()?;
                let r = self.formula(depth + 1)?;
                self.expect(Tok::RParen)?;
                Ok(if op == Some(Tok::OrOp) {
                    Node::or(j, l, r)
                } else {
                    Node::and(j, l, r)
                })
            }
            Some(Tok::Word(w))
                if (w == "E" || w == "A")
                    && matches!(self.peek2(), Some(Tok::Word(v)) if var_index(v).is_some()) =>
            {
                let universal = w == "A";
                self.at += 1;
                let n = self.variable()?;
                self.expect(Tok::Slash)?;
                let j = self.index_set()?;
                let body = self.formula(depth + 1)?;
                Ok(if universal {
                    Node::forall(n, j, body)
                } else {
                    Node::exists(n, j, body)
                })
            }
            Some(Tok::Word(_)) => self.atom(),
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn variable(&mut self) -> Result<usize, SyntaxError> {
        let offset = self.offset();
        match self.peek() {
            Some(Tok::Word(w)) => match var_index(w) {
                Some(index) => {
                    self.at += 1;
                    if index >= self.nvars {
                        return Err(SyntaxError::VarOutOfRange {
                            offset,
                            index,
                            nvars: self.nvars,
                        });
                    }
                    Ok(index)
                }
                None => Err(self.unexpected("a variable")),
            },
            _ => Err(self.unexpected("a variable")),
        }
    }

    fn index_set(&mut self) -> Result<IndexSet, SyntaxError> {
        self.expect(Tok::LBrace)?;
        let mut j = IndexSet::EMPTY;
        if self.peek() == Some(&Tok::RBrace) {
            self.at += 1;
            return Ok(j);
        }
        loop {
            let offset = self.offset();
            let index = match self.peek() {
                Some(Tok::Word(w)) if w.bytes().all(|b| b.is_ascii_digit()) => {
                    w.parse::<usize>().map_err(|_| self.unexpected("an index"))?
                }
                _ => return Err(self.unexpected("an index")),
            };
            self.at += 1;
            if index >= self.nvars {
                return Err(SyntaxError::SlashOutOfRange {
                    offset,
                    index,
                    nvars: self.nvars,
                });
            }
            j = j.with(index);
            match self.peek() {
                Some(Tok::Comma) => self.at += 1,
                Some(Tok::RBrace) => {
                    self.at += 1;
                    return Ok(j);
                }
                _ => return Err(self.unexpected("',' or '}'")),
            }
        }
    }

    fn atom(&mut self) -> Result<Node, SyntaxError> {
        let lhs = self.term()?;
        if self.peek() == Some(&Tok::Equals) {
            self.at += 1;
            let rhs = self.term()?;
            return Ok(Node::eq(lhs, rhs));
        }
        match lhs {
            Term::App(name, args) => Ok(Node::Atomic(Atom::Rel(name, args))),
            _ => Err(self.unexpected("'='")),
        }
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        let offset = self.offset();
        let word = match self.peek() {
            Some(Tok::Word(w)) => w.clone(),
            _ => return Err(self.unexpected("a term")),
        };
        self.at += 1;
        if let Some(index) = var_index(&word) {
            if index >= self.nvars {
                return Err(SyntaxError::VarOutOfRange {
                    offset,
                    index,
                    nvars: self.nvars,
                });
            }
            return Ok(Term::Var(index));
        }
        if self.peek() != Some(&Tok::LParen) {
            return Ok(Term::Const(word));
        }
        self.at += 1;
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::RParen) {
            self.at += 1;
            return Ok(Term::App(word, args));
        }
        loop {
            args.push(self.term()?);
            match self.peek() {
                Some(Tok::Comma) => self.at += 1,
                Some(Tok::RParen) => {
                    self.at += 1;
                    return Ok(Term::App(word, args));
                }
                _ => return Err(self.unexpected("',' or ')'")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom01() -> Node {
        Node::eq(Term::var(0), Term::var(1))
    }

    #[test]
    fn parses_slashed_existential() {
        let f = Formula::parse("E v1/{0} (v0=v1)", 2).unwrap();
        assert_eq!(f.root(), &Node::exists(1, IndexSet::from_indices([0]), atom01()));
        assert_eq!(Formula::parse("E v1/{0} v0=v1", 2).unwrap(), f);
    }

    #[test]
    fn parses_negation_and_signalling_disjunction() {
        let f = Formula::parse("~(v0=v0)", 1).unwrap();
        assert_eq!(f.root(), &Node::not(Node::eq(Term::var(0), Term::var(0))));
        let f = Formula::parse("(v0=v1 \\/{0,1} ~v0=v1)", 2).unwrap();
        assert_eq!(
            f.root(),
            &Node::or(IndexSet::full(2), atom01(), Node::not(atom01()))
        );
    }

    #[test]
    fn desugars_and_forall() {
        let f = Formula::parse("(v0=v1 /\\{1} v0=v0)", 2).unwrap();
        let g = Formula::parse("~(~v0=v1 \\/{1} ~v0=v0)", 2).unwrap();
        assert_eq!(f, g);
        let f = Formula::parse("A v0/{} v0=v0", 1).unwrap();
        let g = Formula::parse("~E v0/{} ~v0=v0", 1).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn reports_errors_with_offsets() {
        assert_eq!(
            Formula::parse("v0=v2", 2),
            Err(SyntaxError::VarOutOfRange {
                offset: 3,
                index: 2,
                nvars: 2
            })
        );
        assert!(matches!(
            Formula::parse("E v0/{5} v0=v0", 2),
            Err(SyntaxError::SlashOutOfRange { offset: 6, index: 5, .. })
        ));
        assert!(matches!(
            Formula::parse("v0=v0 & v0=v0", 1),
            Err(SyntaxError::UnknownSymbol { offset: 6, ch: '&' })
        ));
        assert!(matches!(
            Formula::parse("(v0=v0 \\/{} ", 1),
            Err(SyntaxError::Unexpected { offset: 12, .. })
        ));
        let deep = format!("{}v0=v0", "~".repeat(16));
        assert!(matches!(Formula::parse(&deep, 1), Err(SyntaxError::TooDeep { .. })));
        assert!(Formula::parse(&deep[1..], 1).is_ok());
    }

    #[test]
    fn relation_and_function_terms() {
        let f = Formula::parse("(R(v0,c) \\/{} f(v1)=g(v0,f(c)))", 2).unwrap();
        let text = f.to_string();
        assert_eq!(text, "(R(v0,c) \\/{} f(v1)=g(v0,f(c)))");
        assert_eq!(Formula::parse(&text, 2).unwrap(), f);
    }

    #[test]
    fn quantifier_keywords_only_before_variables() {
        let f = Formula::parse("E=A", 0).unwrap();
        assert_eq!(f.root(), &Node::eq(Term::constant("E"), Term::constant("A")));
    }

    #[test]
    fn subformula_polarity() {
        let f = Formula::new(1, Node::not(Node::eq(Term::var(0), Term::var(0)))).unwrap();
        let subs = f.subformulas();
        assert_eq!(subs.len(), 2);
        assert_eq!((subs[0].0.to_string(), subs[0].2), ("ε".to_string(), Polarity::Pos));
        assert_eq!((subs[1].0.to_string(), subs[1].2), ("0".to_string(), Polarity::Neg));

        let f = Formula::parse("(v0=v0 \\/{0} v0=v0)", 1).unwrap();
        assert!(f.subformulas().iter().all(|s| s.2 == Polarity::Pos));

        let f = Formula::parse("~~v0=v0", 1).unwrap();
        let last = f.subformulas().pop().unwrap();
        assert_eq!(last.0, Position(vec![0, 0]));
        assert_eq!(last.2, Polarity::Pos);
    }

    #[test]
    fn unbound_sets_accumulate() {
        let f = Formula::parse("E v0/{} E v1/{0} v0=v1", 2).unwrap();
        let u = f.unbound_sets();
        assert_eq!(u[&Position::root()], IndexSet::EMPTY);
        assert_eq!(u[&Position(vec![3])], IndexSet::from_indices([0]));
        assert_eq!(u[&Position(vec![3, 3])], IndexSet::from_indices([0, 1]));

        let f = Formula::parse("E v1/{0} v0=v1", 2).unwrap();
        assert_eq!(f.unbound_sets()[&Position(vec![3])], IndexSet::from_indices([1]));
    }

    #[test]
    fn sentences() {
        assert!(Formula::parse("A v0/{} E v1/{0} v0=v1", 2).unwrap().is_sentence());
        assert!(!Formula::parse("E v1/{0} v0=v1", 2).unwrap().is_sentence());
        assert!(Formula::parse("c=c", 0).unwrap().is_sentence());
        assert_eq!(
            Formula::parse("(E v0/{} v0=v0 \\/{} v0=v0)", 1).unwrap().free_occurrence(),
            Some((Position(vec![2]), 0))
        );
    }

    #[test]
    fn header_records_nvars() {
        let f = Formula::parse("v0=v0", 3).unwrap();
        assert_eq!(f.with_header(), "# nvars=3\nv0=v0\n");
    }
}
