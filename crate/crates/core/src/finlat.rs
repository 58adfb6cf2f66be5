//! Finite De Morgan, Kleene and monadic algebras given by operation tables.
//!
//! Elements are `0..n`. Tables are validated on construction; quantifier
//! axioms are not, since checking them is one of the things this module is
//! for.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::algebra::{AlgebraContext, AlgebraError, Element};
use crate::model::{IndexSet, Team, TeamSet};
use crate::par::Exec;

/// Largest carrier accepted by [`FinAlgebra::congruences`].
pub const CONGRUENCE_LIMIT: usize = 12;
/// Largest carrier accepted by [`search_type1_kleene`].
pub const SEARCH_LIMIT: usize = 6;

#[derive(Debug, Error, PartialEq)]
pub enum FinError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{law} fails at {witness:?}")]
    Axiom { law: &'static str, witness: Vec<usize> },
    #[error("unknown algebra {0:?}")]
    Unknown(String),
    #[error("carrier of {size} exceeds the limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("missing {0} table")]
    Missing(&'static str),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("embedding check failed: {0}")]
    Verification(String),
    #[error("not closed under {0}")]
    NotClosed(&'static str),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAlgebra {
    n: usize,
    bottom: usize,
    top: usize,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    neg: Option<Vec<usize>>,
    nabla: Option<Vec<usize>>,
    names: Vec<String>,
}

/// A partition of the carrier as block ids, numbered by first occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence(pub Vec<usize>);

impl Congruence {
    pub fn identity(n: usize) -> Congruence {
        Congruence((0..n).collect())
    }

    pub fn total(n: usize) -> Congruence {
        Congruence(vec![0; n])
    }

    fn normalized(ids: impl IntoIterator<Item = usize>) -> Congruence {
        let mut seen = HashMap::new();
        Congruence(
            ids.into_iter()
                .map(|b| {
                    let next = seen.len();
                    *seen.entry(b).or_insert(next)
                })
                .collect(),
        )
    }

    pub fn blocks(&self) -> usize {
        self.0.iter().max().map_or(0, |m| m + 1)
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.0[x] == self.0[y]
    }

    pub fn is_identity(&self) -> bool {
        self.blocks() == self.0.len()
    }

    pub fn meet(&self, o: &Congruence) -> Congruence {
        Congruence::normalized(self.0.iter().zip(&o.0).map(|(&a, &b)| a * o.0.len() + b))
    }

    pub fn render(&self, alg: &FinAlgebra) -> String {
        let mut blocks = vec![Vec::new(); self.blocks()];
        for (x, &b) in self.0.iter().enumerate() {
            blocks[b].push(alg.name(x));
        }
        blocks.iter().map(|b| format!("{{{}}}", b.join(","))).collect::<Vec<_>>().join(" ")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuantifierType {
    Type0,
    Type1 { a: usize },
    Type2 { a: usize, b: usize },
    Other,
}

impl QuantifierType {
    pub fn label(self) -> &'static str {
        match self {
            QuantifierType::Type0 => "type0",
            QuantifierType::Type1 { .. } => "type1",
            QuantifierType::Type2 { .. } => "type2",
            QuantifierType::Other => "other",
        }
    }
}

/// Outcome of the pointwise quantifier checks. Each entry is a law name and
/// the first witness against it, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantifierReport {
    pub checks: Vec<(&'static str, Option<Vec<usize>>)>,
    pub range_subalgebra: bool,
}

impl QuantifierReport {
    pub fn holds(&self, law: &str) -> bool {
        self.checks.iter().any(|(l, w)| *l == law && w.is_none())
    }

    pub fn is_quantifier(&self) -> bool {
        ["Q1", "Q2", "Q3", "Q4", "Q5"].iter().all(|l| self.holds(l))
    }

    /// For a lattice quantifier, Q5 holds exactly when the range is a
    /// subalgebra.
    pub fn range_lemma_consistent(&self) -> bool {
        let lattice = ["Q1", "Q2", "Q3", "Q4"].iter().all(|l| self.holds(l));
        !lattice || self.holds("Q5") == self.range_subalgebra
    }

    pub fn first_failure(&self) -> Option<(&'static str, &[usize])> {
        self.checks.iter().find_map(|(l, w)| w.as_deref().map(|w| (*l, w)))
    }
}

impl fmt::Display for QuantifierReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (law, w) in &self.checks {
            match w {
                None => writeln!(f, "{law}: ok")?,
                Some(w) => writeln!(f, "{law}: fails at {w:?}")?,
            }
        }
        writeln!(f, "range-subalgebra: {}", self.range_subalgebra)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VarietyMarkers {
    pub kleene_range: bool,
    pub boolean_range: bool,
    pub fix_marker: bool,
    /// First `x` with `∇(x∧∼x) ≰ ∼∇(x∧∼x)`.
    pub fix_witness: Option<usize>,
}

impl FinAlgebra {
    /// Builds and validates an algebra from explicit tables.
    pub fn new(
        bottom: usize,
        top: usize,
        join: Vec<Vec<usize>>,
        meet: Vec<Vec<usize>>,
        neg: Option<Vec<usize>>,
        nabla: Option<Vec<usize>>,
    ) -> Result<FinAlgebra, FinError> {
        let n = join.len();
        let alg = FinAlgebra {
            n,
            bottom,
            top,
            join,
            meet,
            neg,
            nabla,
            names: (0..n).map(|i| i.to_string()).collect(),
        };
        alg.validate()?;
        Ok(alg)
    }

    /// The lattice of a partial order given by `leq`, with optional negation.
    pub fn from_order(
        names: &[&str],
        leq: impl Fn(usize, usize) -> bool,
        neg: Option<Vec<usize>>,
    ) -> Result<FinAlgebra, FinError> {
        let n = names.len();
        let bound = |x: usize, y: usize, upper: bool| -> Result<usize, FinError> {
            let cands: Vec<usize> = (0..n)
                .filter(|&z| if upper { leq(x, z) && leq(y, z) } else { leq(z, x) && leq(z, y) })
                .collect();
            cands
                .iter()
                .copied()
                .find(|&z| cands.iter().all(|&w| if upper { leq(z, w) } else { leq(w, z) }))
                .ok_or(FinError::Axiom {
                    law: if upper { "join exists" } else { "meet exists" },
                    witness: vec![x, y],
                })
        };
        let mut join = vec![vec![0; n]; n];
        let mut meet = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                join[x][y] = bound(x, y, true)?;
                meet[x][y] = bound(x, y, false)?;
            }
        }
        let bottom = (0..n).find(|&z| (0..n).all(|w| leq(z, w))).ok_or(FinError::Missing("bottom"))?;
        let top = (0..n).find(|&z| (0..n).all(|w| leq(w, z))).ok_or(FinError::Missing("top"))?;
        let mut alg = FinAlgebra::new(bottom, top, join, meet, neg, None)?;
        alg.names = names.iter().map(|s| s.to_string()).collect();
        Ok(alg)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x][y]
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x][y]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.meet[x][y] == x
    }

    pub fn neg_table(&self) -> Option<&[usize]> {
        self.neg.as_deref()
    }

    pub fn nabla_table(&self) -> Option<&[usize]> {
        self.nabla.as_deref()
    }

    pub fn name(&self, x: usize) -> String {
        self.names[x].clone()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|s| s == name)
    }

    pub fn with_names(mut self, names: Vec<String>) -> FinAlgebra {
        assert_eq!(names.len(), self.n);
        self.names = names;
        self
    }

    fn nab(&self) -> Result<&[usize], FinError> {
        self.nabla.as_deref().ok_or(FinError::Missing("nabla"))
    }

    /// Same algebra with `table` as its quantifier. The table is not checked
    /// against Q1–Q5.
    pub fn with_nabla(mut self, table: Vec<usize>) -> Result<FinAlgebra, FinError> {
        check_table(self.n, &table, "nabla")?;
        self.nabla = Some(table);
        Ok(self)
    }

    pub fn without_nabla(mut self) -> FinAlgebra {
        self.nabla = None;
        self
    }

    fn validate(&self) -> Result<(), FinError> {
        let n = self.n;
        if n == 0 {
            return Err(FinError::Parse { line: 0, msg: "empty carrier".into() });
        }
        if self.bottom >= n || self.top >= n {
            return Err(FinError::Parse { line: 0, msg: "bound out of range".into() });
        }
        for (t, name) in [(&self.join, "join"), (&self.meet, "meet")] {
            if t.len() != n {
                return Err(FinError::Parse { line: 0, msg: format!("{name} has {} rows", t.len()) });
            }
            for row in t {
                check_table(n, row, name)?;
            }
        }
        if let Some(t) = &self.neg {
            check_table(n, t, "neg")?;
        }
        if let Some(t) = &self.nabla {
            check_table(n, t, "nabla")?;
        }
        let (j, m) = (&self.join, &self.meet);
        let fail = |law, witness: Vec<usize>| Err(FinError::Axiom { law, witness });
        for x in 0..n {
            if j[x][x] != x || m[x][x] != x {
                return fail("idempotence", vec![x]);
            }
            if j[x][self.bottom] != x || m[x][self.top] != x {
                return fail("bounds", vec![x]);
            }
            for y in 0..n {
                if j[x][y] != j[y][x] || m[x][y] != m[y][x] {
                    return fail("commutativity", vec![x, y]);
                }
                if j[x][m[x][y]] != x || m[x][j[x][y]] != x {
                    return fail("absorption", vec![x, y]);
                }
                for z in 0..n {
                    if j[j[x][y]][z] != j[x][j[y][z]] || m[m[x][y]][z] != m[x][m[y][z]] {
                        return fail("associativity", vec![x, y, z]);
                    }
                    if j[x][m[y][z]] != m[j[x][y]][j[x][z]] {
                        return fail("distributivity", vec![x, y, z]);
                    }
                }
            }
        }
        if let Some(t) = &self.neg {
            for x in 0..n {
                if t[t[x]] != x {
                    return fail("involution", vec![x]);
                }
                for y in 0..n {
                    if t[j[x][y]] != m[t[x]][t[y]] {
                        return fail("de morgan", vec![x, y]);
                    }
                }
            }
        }
        Ok(())
    }

    /// `∼(x∧y) = ∼x∨∼y`, `∼0 = 1`, `∼1 = 0` and order reversal.
    pub fn check_de_morgan_facts(&self) -> Result<(), FinError> {
        let t = self.neg.as_ref().ok_or(FinError::Missing("neg"))?;
        if t[self.bottom] != self.top || t[self.top] != self.bottom {
            return Err(FinError::Axiom { law: "negated bounds", witness: vec![] });
        }
        for x in 0..self.n {
            for y in 0..self.n {
                if t[self.meet[x][y]] != self.join[t[x]][t[y]] {
                    return Err(FinError::Axiom { law: "dual de morgan", witness: vec![x, y] });
                }
                if self.leq(x, y) && !self.leq(t[y], t[x]) {
                    return Err(FinError::Axiom { law: "order reversal", witness: vec![x, y] });
                }
            }
        }
        Ok(())
    }

    /// First pair against `x∧∼x ≤ y∨∼y`, or `None` for a Kleene algebra.
    pub fn kleene_violation(&self) -> Result<Option<(usize, usize)>, FinError> {
        let t = self.neg.as_ref().ok_or(FinError::Missing("neg"))?;
        for x in 0..self.n {
            for y in 0..self.n {
                if !self.leq(self.meet[x][t[x]], self.join[y][t[y]]) {
                    return Ok(Some((x, y)));
                }
            }
        }
        Ok(None)
    }

    pub fn is_kleene(&self) -> bool {
        matches!(self.kleene_violation(), Ok(None))
    }

    pub fn is_boolean(&self) -> bool {
        match &self.neg {
            Some(t) => (0..self.n).all(|x| self.meet[x][t[x]] == self.bottom),
            None => false,
        }
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        match &self.neg {
            Some(t) => (0..self.n).filter(|&x| t[x] == x).collect(),
            None => Vec::new(),
        }
    }

    /// `{x : x∧a = 0}`.
    pub fn annihilator(&self, a: usize) -> Vec<usize> {
        (0..self.n).filter(|&x| self.meet[x][a] == self.bottom).collect()
    }

    /// `[lo, hi]`.
    pub fn interval(&self, lo: usize, hi: usize) -> Vec<usize> {
        (0..self.n).filter(|&x| self.leq(lo, x) && self.leq(x, hi)).collect()
    }

    pub fn check_join_meet_irreducible(&self, a: usize) -> (bool, bool) {
        let mut join_irr = true;
        let mut meet_irr = true;
        for x in 0..self.n {
            for y in 0..self.n {
                if self.join[x][y] == a && x != a && y != a {
                    join_irr = false;
                }
                if self.meet[x][y] == a && x != a && y != a {
                    meet_irr = false;
                }
            }
        }
        (join_irr, meet_irr)
    }

    /// Type 0: `∇x = 1` for `x > 0`.
    pub fn type0_nabla(&self) -> Vec<usize> {
        (0..self.n).map(|x| if x == self.bottom { x } else { self.top }).collect()
    }

    /// Type 1 around the fixed point `a`.
    pub fn type1_nabla(&self, a: usize) -> Vec<usize> {
        (0..self.n)
            .map(|x| match x {
                _ if x == self.bottom => self.bottom,
                _ if self.leq(x, a) => a,
                _ => self.top,
            })
            .collect()
    }

    /// Type 2 around the fixed points `a` and `b`.
    pub fn type2_nabla(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.n)
            .map(|x| match x {
                _ if x == self.bottom => self.bottom,
                _ if self.leq(x, a) => a,
                _ if self.leq(x, b) => b,
                _ => self.top,
            })
            .collect()
    }

    pub fn check_quantifier(&self) -> Result<QuantifierReport, FinError> {
        let d = self.nab()?;
        let n = self.n;
        let (j, m) = (&self.join, &self.meet);
        let unary = |f: &dyn Fn(usize) -> bool| (0..n).find(|&x| !f(x)).map(|x| vec![x]);
        let binary = |f: &dyn Fn(usize, usize) -> bool| {
            (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).find(|&(x, y)| !f(x, y)).map(|(x, y)| vec![x, y])
        };
        let mut checks = vec![
            ("Q1", (d[self.bottom] != self.bottom).then(|| vec![self.bottom])),
            ("Q2", unary(&|x| self.leq(x, d[x]))),
            ("Q3", binary(&|x, y| d[j[x][y]] == j[d[x]][d[y]])),
            ("Q4", binary(&|x, y| d[m[x][d[y]]] == m[d[x]][d[y]])),
        ];
        let q5 = match &self.neg {
            Some(t) => unary(&|x| d[t[d[x]]] == t[d[x]]),
            None => return Err(FinError::Missing("neg")),
        };
        checks.push(("Q5", q5));
        checks.push(("nabla-top", (d[self.top] != self.top).then(|| vec![self.top])));
        checks.push(("idempotent", unary(&|x| d[d[x]] == d[x])));
        let range: BTreeSet<usize> = d.iter().copied().collect();
        let t = self.neg.as_ref().unwrap();
        let range_subalgebra = range.contains(&self.bottom)
            && range.contains(&self.top)
            && range.iter().all(|&x| range.contains(&t[x]))
            && range.iter().all(|&x| range.iter().all(|&y| range.contains(&j[x][y]) && range.contains(&m[x][y])));
        Ok(QuantifierReport { checks, range_subalgebra })
    }

    pub fn classify_quantifier_type(&self) -> Result<QuantifierType, FinError> {
        let d = self.nab()?;
        if d == self.type0_nabla() {
            return Ok(QuantifierType::Type0);
        }
        let fixed = self.fixed_points();
        for &a in &fixed {
            if d == self.type1_nabla(a) {
                return Ok(QuantifierType::Type1 { a });
            }
        }
        for &a in &fixed {
            for &b in &fixed {
                if a < b
                    && self.meet[a][b] == self.bottom
                    && self.join[a][b] == self.top
                    && d == self.type2_nabla(a, b)
                {
                    return Ok(QuantifierType::Type2 { a, b });
                }
            }
        }
        Ok(QuantifierType::Other)
    }

    pub fn check_variety_markers(&self) -> Result<VarietyMarkers, FinError> {
        let d = self.nab()?;
        let t = self.neg.as_ref().ok_or(FinError::Missing("neg"))?;
        let lo = |x: usize| self.meet[d[x]][t[d[x]]];
        let hi = |y: usize| self.join[d[y]][t[d[y]]];
        let kleene_range = (0..self.n).all(|x| (0..self.n).all(|y| self.leq(lo(x), hi(y))));
        let boolean_range = (0..self.n).all(|x| lo(x) == self.bottom);
        let fix_witness = (0..self.n).find(|&x| {
            let u = d[self.meet[x][t[x]]];
            !self.leq(u, t[u])
        });
        Ok(VarietyMarkers {
            kleene_range,
            boolean_range,
            fix_marker: fix_witness.is_none(),
            fix_witness,
        })
    }

    fn unary_ops(&self) -> Vec<&[usize]> {
        self.neg.iter().chain(self.nabla.iter()).map(|t| t.as_slice()).collect()
    }

    /// Whether the partition is compatible with every table.
    pub fn is_compatible(&self, c: &Congruence) -> bool {
        let ops = self.unary_ops();
        (0..self.n).all(|x| {
            (0..self.n).filter(|&y| c.related(x, y)).all(|y| {
                ops.iter().all(|t| c.related(t[x], t[y]))
                    && (0..self.n).all(|z| {
                        c.related(self.join[x][z], self.join[y][z]) && c.related(self.meet[x][z], self.meet[y][z])
                    })
            })
        })
    }

    /// Smallest congruence containing `pairs`.
    fn generated(&self, pairs: &[(usize, usize)]) -> Congruence {
        let mut uf = UnionFind::new(self.n);
        let mut queue: Vec<(usize, usize)> = pairs.to_vec();
        let ops = self.unary_ops();
        while let Some((x, y)) = queue.pop() {
            if !uf.union(x, y) {
                continue;
            }
            for t in &ops {
                queue.push((t[x], t[y]));
            }
            for z in 0..self.n {
                queue.push((self.join[x][z], self.join[y][z]));
                queue.push((self.meet[x][z], self.meet[y][z]));
            }
        }
        Congruence::normalized((0..self.n).map(|x| uf.find(x)))
    }

    pub fn principal_congruence(&self, x: usize, y: usize) -> Congruence {
        self.generated(&[(x, y)])
    }

    fn join_congruences(&self, a: &Congruence, b: &Congruence) -> Congruence {
        let mut pairs = Vec::new();
        for c in [a, b] {
            let mut first = HashMap::new();
            for (x, &blk) in c.0.iter().enumerate() {
                let r = *first.entry(blk).or_insert(x);
                if r != x {
                    pairs.push((r, x));
                }
            }
        }
        self.generated(&pairs)
    }

    /// Every congruence, sorted, from the identity to the total one.
    pub fn congruences(&self) -> Result<Vec<Congruence>, FinError> {
        self.congruences_with(Exec::default())
    }

    pub fn congruences_with(&self, exec: Exec) -> Result<Vec<Congruence>, FinError> {
        if self.n > CONGRUENCE_LIMIT {
            return Err(FinError::TooLarge { size: self.n, limit: CONGRUENCE_LIMIT });
        }
        let n = self.n;
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect();
        let principals: BTreeSet<Congruence> =
            exec.map(&pairs, |&(x, y)| self.principal_congruence(x, y)).into_iter().collect();
        let mut all: BTreeSet<Congruence> = principals.clone();
        all.insert(Congruence::identity(n));
        loop {
            let current: Vec<Congruence> = all.iter().cloned().collect();
            let mut grew = false;
            for a in &current {
                for p in &principals {
                    if all.insert(self.join_congruences(a, p)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let mut out: Vec<Congruence> = all.into_iter().collect();
        out.sort_by_key(|c| std::cmp::Reverse(c.blocks()));
        Ok(out)
    }

    pub fn is_simple(&self) -> Result<bool, FinError> {
        Ok(self.n > 1 && self.congruences()?.len() == 2)
    }

    /// Whether the non-identity congruences have a non-identity meet.
    pub fn is_subdirectly_irreducible(&self) -> Result<bool, FinError> {
        if self.n < 2 {
            return Ok(false);
        }
        let cons = self.congruences()?;
        let meet = cons
            .iter()
            .filter(|c| !c.is_identity())
            .fold(Congruence::total(self.n), |acc, c| acc.meet(c));
        Ok(!meet.is_identity())
    }

    /// Direct product; names become `(x,y)`.
    pub fn product(&self, o: &FinAlgebra) -> Result<FinAlgebra, FinError> {
        let (n, m) = (self.n, o.n);
        let pair = |x: usize, y: usize| x * m + y;
        let table = |f: &dyn Fn(usize, usize, usize, usize) -> usize| -> Vec<Vec<usize>> {
            (0..n * m)
                .map(|p| (0..n * m).map(|q| f(p / m, p % m, q / m, q % m)).collect())
                .collect()
        };
        let join = table(&|a, b, c, d| pair(self.join[a][c], o.join[b][d]));
        let meet = table(&|a, b, c, d| pair(self.meet[a][c], o.meet[b][d]));
        let neg = match (&self.neg, &o.neg) {
            (Some(s), Some(t)) => Some((0..n * m).map(|p| pair(s[p / m], t[p % m])).collect()),
            _ => None,
        };
        let names = (0..n * m).map(|p| format!("({},{})", self.names[p / m], o.names[p % m])).collect();
        Ok(FinAlgebra::new(pair(self.bottom, o.bottom), pair(self.top, o.top), join, meet, neg, None)?.with_names(names))
    }

    /// The subalgebra on `keep`, in the given order.
    pub fn subalgebra(&self, keep: &[usize]) -> Result<FinAlgebra, FinError> {
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let map = |x: usize, what: &'static str| pos.get(&x).copied().ok_or(FinError::NotClosed(what));
        let mut join = Vec::new();
        let mut meet = Vec::new();
        for &x in keep {
            join.push(keep.iter().map(|&y| map(self.join[x][y], "join")).collect::<Result<Vec<_>, _>>()?);
            meet.push(keep.iter().map(|&y| map(self.meet[x][y], "meet")).collect::<Result<Vec<_>, _>>()?);
        }
        let unary = |t: &Option<Vec<usize>>, what| -> Result<Option<Vec<usize>>, FinError> {
            t.as_ref().map(|t| keep.iter().map(|&x| map(t[x], what)).collect()).transpose()
        };
        let neg = unary(&self.neg, "neg")?;
        let nabla = unary(&self.nabla, "nabla")?;
        let alg = FinAlgebra::new(map(self.bottom, "bottom")?, map(self.top, "top")?, join, meet, neg, nabla)?;
        Ok(alg.with_names(keep.iter().map(|&x| self.names[x].clone()).collect()))
    }

    fn by_names(&self, names: &[&str]) -> Result<Vec<usize>, FinError> {
        names.iter().map(|s| self.index_of(s).ok_or_else(|| FinError::Unknown(s.to_string()))).collect()
    }

    /// Text format read by [`FinAlgebra::parse`].
    pub fn render(&self) -> String {
        let mut out = format!("carrier {}\nbottom {}\ntop {}\n", self.n, self.bottom, self.top);
        let line = |row: &[usize]| row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        for (t, name) in [(&self.join, "join"), (&self.meet, "meet")] {
            let _ = writeln!(out, "{name}:");
            for row in t {
                let _ = writeln!(out, "{}", line(row));
            }
        }
        if let Some(t) = &self.neg {
            let _ = writeln!(out, "neg: {}", line(t));
        }
        if let Some(t) = &self.nabla {
            let _ = writeln!(out, "nabla: {}", line(t));
        }
        out
    }

    pub fn parse(text: &str) -> Result<FinAlgebra, FinError> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let mut at = 0;
        let err = |line: usize, msg: String| FinError::Parse { line, msg };
        let nums = |line: usize, s: &str| -> Result<Vec<usize>, FinError> {
            s.split_whitespace()
                .map(|w| w.parse().map_err(|_| err(line, format!("bad number {w:?}"))))
                .collect()
        };
        let mut header = |key: &str| -> Result<usize, FinError> {
            let (ln, l) = *lines.get(at).ok_or_else(|| err(0, format!("missing {key}")))?;
            at += 1;
            let rest = l.strip_prefix(key).ok_or_else(|| err(ln, format!("expected {key}")))?;
            rest.trim().parse().map_err(|_| err(ln, format!("bad {key} value")))
        };
        let n = header("carrier")?;
        let bottom = header("bottom")?;
        let top = header("top")?;
        let mut tables: HashMap<&str, Vec<Vec<usize>>> = HashMap::new();
        while at < lines.len() {
            let (ln, l) = lines[at];
            at += 1;
            let (key, rest) = l.split_once(':').ok_or_else(|| err(ln, format!("expected a table, found {l:?}")))?;
            let key = match key.trim() {
                k @ ("join" | "meet" | "neg" | "nabla") => k,
                k => return Err(err(ln, format!("unknown table {k:?}"))),
            };
            if tables.contains_key(key) {
                return Err(err(ln, format!("duplicate {key} table")));
            }
            let rows = if matches!(key, "join" | "meet") { n } else { 1 };
            let mut t = Vec::new();
            if !rest.trim().is_empty() {
                t.push(nums(ln, rest)?);
            }
            while t.len() < rows {
                let (ln, l) = *lines.get(at).ok_or_else(|| err(ln, format!("{key} table too short")))?;
                at += 1;
                t.push(nums(ln, l)?);
            }
            if t.iter().any(|r| r.len() != n) {
                return Err(err(ln, format!("{key} rows must have {n} entries")));
            }
            tables.insert(key, t);
        }
        let mut take = |k: &'static str| tables.remove(k);
        let join = take("join").ok_or(FinError::Missing("join"))?;
        let meet = take("meet").ok_or(FinError::Missing("meet"))?;
        let neg = take("neg").map(|mut t| t.remove(0));
        let nabla = take("nabla").map(|mut t| t.remove(0));
        FinAlgebra::new(bottom, top, join, meet, neg, nabla)
    }

    /// De Morgan reduct `⟨0, 1, ∼, +_N, ·_N⟩` of a closed set of elements.
    pub fn de_morgan_reduct(ctx: &AlgebraContext, elements: &[Element]) -> Result<FinAlgebra, FinError> {
        FinAlgebra::reduct(ctx, elements, false)
    }

    /// The De Morgan reduct with `C_{0,{0}}` as quantifier; dimension one only.
    pub fn monadic_reduct(ctx: &AlgebraContext, elements: &[Element]) -> Result<FinAlgebra, FinError> {
        if ctx.nvars() != 1 {
            return Err(FinError::Precondition(format!("monadic reduct needs dimension 1, not {}", ctx.nvars())));
        }
        FinAlgebra::reduct(ctx, elements, true)
    }

    fn reduct(ctx: &AlgebraContext, elements: &[Element], nabla: bool) -> Result<FinAlgebra, FinError> {
        let pos: HashMap<&Element, usize> = elements.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let find = |x: &Element, what| pos.get(x).copied().ok_or(FinError::NotClosed(what));
        let all = IndexSet::full(ctx.nvars());
        let mut join = Vec::new();
        let mut meet = Vec::new();
        for x in elements {
            join.push(elements.iter().map(|y| find(&ctx.sum(all, x, y), "sum")).collect::<Result<Vec<_>, _>>()?);
            meet.push(elements.iter().map(|y| find(&ctx.prod(all, x, y), "product")).collect::<Result<Vec<_>, _>>()?);
        }
        let neg = elements.iter().map(|x| find(&x.neg(), "negation")).collect::<Result<Vec<_>, _>>()?;
        let nabla = nabla
            .then(|| elements.iter().map(|x| find(&ctx.cyl(0, all, x), "cylindrification")).collect())
            .transpose()?;
        let (zero, one, omega, mho) = (ctx.zero(), ctx.one(), ctx.omega(), ctx.mho());
        let names = elements
            .iter()
            .enumerate()
            .map(|(i, x)| match x {
                _ if *x == zero => "0".to_string(),
                _ if *x == one => "1".to_string(),
                _ if *x == omega => "Ω".to_string(),
                _ if *x == mho => "℧".to_string(),
                _ => format!("x{i}"),
            })
            .collect();
        let alg = FinAlgebra::new(find(&zero, "zero")?, find(&one, "one")?, join, meet, Some(neg), nabla)?;
        Ok(alg.with_names(names))
    }
}

fn check_table(n: usize, t: &[usize], name: &str) -> Result<(), FinError> {
    if t.len() != n {
        return Err(FinError::Parse { line: 0, msg: format!("{name} needs {n} entries, got {}", t.len()) });
    }
    if let Some(x) = t.iter().find(|&&x| x >= n) {
        return Err(FinError::Parse { line: 0, msg: format!("{name} entry {x} out of range") });
    }
    Ok(())
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, x: usize, y: usize) -> bool {
        let (a, b) = (self.find(x), self.find(y));
        if a == b {
            return false;
        }
        self.0[a.max(b)] = a.min(b);
        true
    }
}

pub const NAMED: [&str; 12] = [
    "B",
    "K",
    "M",
    "K_nabla0",
    "K_nabla1",
    "M_nabla0",
    "M_nabla2",
    "SixKxM",
    "NineMxM",
    "KxK",
    "DoubleDiamond",
    "M_bad_nabla",
];

fn chain(names: &[&str], neg: Vec<usize>) -> FinAlgebra {
    FinAlgebra::from_order(names, |x, y| x <= y, Some(neg)).expect("chain")
}

fn base_b() -> FinAlgebra {
    chain(&["0", "1"], vec![1, 0])
}

fn base_k() -> FinAlgebra {
    chain(&["0", "a", "1"], vec![2, 1, 0])
}

fn base_m() -> FinAlgebra {
    // 0 < a, b < 1 with a and b incomparable
    let leq = |x: usize, y: usize| x == y || x == 0 || y == 3;
    FinAlgebra::from_order(&["0", "a", "b", "1"], leq, Some(vec![3, 1, 2, 0])).expect("M")
}

pub fn named_algebra(id: &str) -> Result<FinAlgebra, FinError> {
    let with = |alg: FinAlgebra, f: &dyn Fn(&FinAlgebra) -> Vec<usize>| {
        let t = f(&alg);
        alg.with_nabla(t)
    };
    match id {
        "B" => Ok(base_b()),
        "K" => Ok(base_k()),
        "M" => Ok(base_m()),
        "K_nabla0" => with(base_k(), &|a| a.type0_nabla()),
        "K_nabla1" => with(base_k(), &|a| a.type1_nabla(1)),
        "M_nabla0" => with(base_m(), &|a| a.type0_nabla()),
        "M_nabla2" => with(base_m(), &|a| a.type2_nabla(1, 2)),
        "M_bad_nabla" => with(base_m(), &|_| vec![0, 1, 3, 3]),
        "KxK" => base_k().product(&base_k()),
        "DoubleDiamond" => {
            let kk = base_k().product(&base_k())?;
            let keep = kk.by_names(&["(0,0)", "(a,0)", "(0,a)", "(a,a)", "(a,1)", "(1,a)", "(1,1)"])?;
            kk.subalgebra(&keep)
        }
        "SixKxM" => {
            // the fixed points of M are named b and c here
            let m = base_m().with_names(["0", "b", "c", "1"].map(String::from).to_vec());
            let km = base_k().product(&m)?;
            let keep = km.by_names(&["(0,0)", "(a,0)", "(a,b)", "(a,c)", "(a,1)", "(1,1)"])?;
            let alg = km.subalgebra(&keep)?;
            let ab = alg.index_of("(a,b)").expect("fixed point");
            with(alg, &|a| a.type1_nabla(ab))
        }
        "NineMxM" => {
            let mm = base_m().product(&base_m())?;
            let keep = mm.by_names(&[
                "(0,0)", "(a,0)", "(0,b)", "(a,a)", "(a,b)", "(b,b)", "(a,1)", "(1,b)", "(1,1)",
            ])?;
            let alg = mm.subalgebra(&keep)?;
            let (aa, bb) = (alg.index_of("(a,a)").unwrap(), alg.index_of("(b,b)").unwrap());
            with(alg, &|a| a.type2_nabla(aa, bb))
        }
        _ => Err(FinError::Unknown(id.to_string())),
    }
}

/// A witness for the embedding of a monadic Kleene algebra into a rooted
/// algebra of dimension one.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub ctx: AlgebraContext,
    /// Proper prime filters of `[c, 1]`, each as a sorted list of elements.
    pub filters: Vec<Vec<usize>>,
    pub h: Vec<Element>,
}

impl Embedding {
    pub fn base_size(&self) -> usize {
        self.filters.len()
    }

    /// How many images are pairs of suits and how many are double suits.
    pub fn suit_counts(&self) -> (usize, usize) {
        let pairs = self.h.iter().filter(|x| x.is_suit_pair()).count();
        let doubles = self.h.iter().filter(|x| x.is_double_suit()).count();
        (pairs, doubles)
    }

    pub fn render(&self, alg: &FinAlgebra) -> String {
        let mut out = format!("base {}\n", self.base_size());
        for (x, img) in self.h.iter().enumerate() {
            let _ = writeln!(out, "h({}) = {}", alg.name(x), self.ctx.render(img));
        }
        out
    }
}

/// Embeds a monadic Kleene algebra with a type 1 quantifier and irreducible
/// bounds into the De Morgan reduct of a rooted algebra of dimension one,
/// then checks the result operation by operation.
pub fn embed_monadic_kleene(alg: &FinAlgebra) -> Result<Embedding, FinError> {
    let pre = |msg: &str| FinError::Precondition(msg.to_string());
    if alg.n < 2 {
        return Err(pre("trivial algebra"));
    }
    let neg = alg.neg.as_ref().ok_or_else(|| pre("no negation"))?;
    let nabla = alg.nab()?;
    if !alg.is_kleene() {
        return Err(pre("not a Kleene algebra"));
    }
    if let Some((law, w)) = alg.check_quantifier()?.first_failure() {
        return Err(FinError::Precondition(format!("{law} fails at {w:?}")));
    }
    let c = match alg.classify_quantifier_type()? {
        QuantifierType::Type1 { a } => a,
        _ => return Err(pre("quantifier is not of type 1")),
    };
    if !alg.check_join_meet_irreducible(alg.bottom).1 {
        return Err(pre("0 is not meet irreducible"));
    }
    if !alg.check_join_meet_irreducible(alg.top).0 {
        return Err(pre("1 is not join irreducible"));
    }

    let l = alg.interval(c, alg.top);
    if l.len() > 16 {
        return Err(FinError::TooLarge { size: l.len(), limit: 16 });
    }
    let mut filters: Vec<Vec<usize>> = (1u32..1 << l.len())
        .map(|mask| (0..l.len()).filter(|i| mask >> i & 1 == 1).map(|i| l[i]).collect::<Vec<_>>())
        .filter(|f| is_prime_filter(alg, &l, f, c))
        .collect();
    filters.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    let k = filters.len();
    if filters.first() != Some(&vec![alg.top]) {
        return Err(FinError::Verification("{1} is not the first prime filter".into()));
    }

    let ctx = AlgebraContext::new(k, 1)?;
    let count = ctx.count();
    // cell of each subset of A: singletons to their own filter, everything
    // else to the filter {1}, which comes first
    let cell = |u: u64| if u.count_ones() == 1 { u.trailing_zeros() as usize } else { 0 };
    let sigma = |x: usize| -> u64 {
        filters.iter().enumerate().filter(|(_, f)| f.contains(&x)).fold(0, |acc, (i, _)| acc | 1 << i)
    };
    let g = |u: u64| -> TeamSet {
        let mut out = TeamSet::bottom(count);
        for sub in 0..1u64 << k {
            if sub != 0 && u >> cell(sub) & 1 == 1 {
                out.insert(Team(sub));
            }
        }
        out
    };
    let big_g = |x: usize| g(sigma(x));
    let h: Vec<Element> = (0..alg.n)
        .map(|x| Element::new(big_g(alg.join[x][c]), big_g(alg.join[neg[x]][c])))
        .collect();

    let fail = |what: &str, w: Vec<usize>| Err(FinError::Verification(format!("{what} at {w:?}")));
    let j0 = IndexSet::full(1);
    if h.iter().collect::<BTreeSet<_>>().len() != alg.n {
        return fail("injectivity", vec![]);
    }
    if h[alg.bottom] != ctx.zero() || h[alg.top] != ctx.one() {
        return fail("bounds", vec![]);
    }
    for x in 0..alg.n {
        if !h[x].is_rooted() {
            return fail("rootedness", vec![x]);
        }
        if h[neg[x]] != h[x].neg() {
            return fail("negation", vec![x]);
        }
        if h[nabla[x]] != ctx.cyl(0, j0, &h[x]) {
            return fail("quantifier", vec![x]);
        }
        for y in 0..alg.n {
            if h[alg.join[x][y]] != ctx.sum(j0, &h[x], &h[y]) {
                return fail("join", vec![x, y]);
            }
            if h[alg.meet[x][y]] != ctx.prod(j0, &h[x], &h[y]) {
                return fail("meet", vec![x, y]);
            }
        }
    }
    Ok(Embedding { ctx, filters, h })
}

fn is_prime_filter(alg: &FinAlgebra, l: &[usize], f: &[usize], c: usize) -> bool {
    if f.contains(&c) {
        return false;
    }
    let has = |x: usize| f.contains(&x);
    f.iter().all(|&x| l.iter().all(|&y| !alg.leq(x, y) || has(y)))
        && f.iter().all(|&x| f.iter().all(|&y| has(alg.meet[x][y])))
        && l.iter().all(|&x| l.iter().all(|&y| !has(alg.join[x][y]) || has(x) || has(y)))
}

/// Every monadic Kleene algebra with a type 1 quantifier, `0` meet
/// irreducible and `1` join irreducible, with at most `max_size` elements,
/// one per isomorphism class, smallest first.
///
/// Lattices come from down-sets of posets; negations are all
/// order-reversing involutions.
pub fn search_type1_kleene(max_size: usize) -> Result<Vec<FinAlgebra>, FinError> {
    if max_size > SEARCH_LIMIT {
        return Err(FinError::TooLarge { size: max_size, limit: SEARCH_LIMIT });
    }
    let mut lattices: Vec<FinAlgebra> = Vec::new();
    let mut seen = BTreeSet::new();
    for k in 1..max_size {
        for order in posets(k) {
            if let Some(lat) = downset_lattice(k, &order, max_size) {
                if seen.insert(canonical_form(&lat)) {
                    lattices.push(lat);
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut found = BTreeSet::new();
    for lat in lattices {
        for neg in order_reversing_involutions(&lat) {
            let alg = FinAlgebra { neg: Some(neg), ..lat.clone() };
            if alg.validate().is_err() || !alg.is_kleene() {
                continue;
            }
            for c in alg.fixed_points() {
                let t = alg.type1_nabla(c);
                let Ok(cand) = alg.clone().with_nabla(t) else { continue };
                let quantifier = cand.check_quantifier().map(|r| r.is_quantifier()).unwrap_or(false);
                let irreducible = cand.check_join_meet_irreducible(cand.bottom).1
                    && cand.check_join_meet_irreducible(cand.top).0;
                if quantifier && irreducible && found.insert(canonical_form(&cand)) {
                    out.push(cand);
                }
            }
        }
    }
    out.sort_by_key(|a| a.n);
    Ok(out)
}

/// Partial orders on `0..k` as bit matrices, one per labelling.
fn posets(k: usize) -> Vec<Vec<u32>> {
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|x| (0..k).filter(move |&y| y != x).map(move |y| (x, y))).collect();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let mut rows: Vec<u32> = (0..k).map(|x| 1 << x).collect();
        for (i, &(x, y)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                rows[x] |= 1 << y;
            }
        }
        let antisym = (0..k).all(|x| (0..k).all(|y| x == y || rows[x] >> y & 1 == 0 || rows[y] >> x & 1 == 0));
        let trans = (0..k).all(|x| (0..k).all(|y| rows[x] >> y & 1 == 0 || rows[y] & !rows[x] == 0));
        if antisym && trans {
            out.push(rows);
        }
    }
    out
}

/// Lattice of down-sets of a poset whose row `x` lists the elements above `x`.
fn downset_lattice(k: usize, above: &[u32], max_size: usize) -> Option<FinAlgebra> {
    let mut sets: Vec<u32> = (0u32..1 << k)
        .filter(|&d| (0..k).all(|x| d >> x & 1 == 0 || (0..k).all(|y| above[y] >> x & 1 == 0 || d >> y & 1 == 1)))
        .collect();
    if sets.len() > max_size {
        return None;
    }
    sets.sort_by_key(|d| (d.count_ones(), *d));
    let n = sets.len();
    let idx = |d: u32| sets.iter().position(|&s| s == d).expect("closed");
    let join = sets.iter().map(|&a| sets.iter().map(|&b| idx(a | b)).collect()).collect();
    let meet = sets.iter().map(|&a| sets.iter().map(|&b| idx(a & b)).collect()).collect();
    FinAlgebra::new(0, n - 1, join, meet, None, None).ok()
}

fn order_reversing_involutions(lat: &FinAlgebra) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; lat.n];
    extend_involution(lat, &mut perm, 0, &mut out);
    out
}

fn extend_involution(lat: &FinAlgebra, perm: &mut Vec<usize>, x: usize, out: &mut Vec<Vec<usize>>) {
    if x == lat.n {
        let reversing = (0..lat.n).all(|a| (0..lat.n).all(|b| !lat.leq(a, b) || lat.leq(perm[b], perm[a])));
        if reversing {
            out.push(perm.clone());
        }
        return;
    }
    if perm[x] != usize::MAX {
        return extend_involution(lat, perm, x + 1, out);
    }
    for y in x..lat.n {
        if perm[y] == usize::MAX {
            perm[x] = y;
            perm[y] = x;
            extend_involution(lat, perm, x + 1, out);
            perm[x] = usize::MAX;
            perm[y] = usize::MAX;
        }
    }
}

/// Least relabelled table encoding over all permutations of the carrier.
fn canonical_form(alg: &FinAlgebra) -> Vec<usize> {
    let n = alg.n;
    let mut best: Option<Vec<usize>> = None;
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        // p maps old index to new index
        let mut inv = vec![0; n];
        for (old, &new) in p.iter().enumerate() {
            inv[new] = old;
        }
        let mut code = vec![p[alg.bottom], p[alg.top]];
        for a in 0..n {
            for b in 0..n {
                code.push(p[alg.join[inv[a]][inv[b]]]);
            }
        }
        for t in alg.unary_ops() {
            code.extend((0..n).map(|a| p[t[inv[a]]]));
        }
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
    });
    best.unwrap_or_default()
}

fn permute(p: &mut Vec<usize>, i: usize, f: &mut dyn FnMut(&[usize])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permute(p, i + 1, f);
        p.swap(i, j);
    }
}
