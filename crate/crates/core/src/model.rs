//! Finite structures, valuations, teams and the combinatorics of restricted
//! information: `≈_J` classes, variants, independent functions and
//! saturated splits.
//!
//! A valuation over `|A|` elements and `N` variables is stored as its
//! little-endian mixed-radix index `Σ aᵢ·|A|^i`; it prints with `v0` first,
//! so `"01"` is `v0=0, v1=1`. A [`Team`] is a bitset over valuation indices
//! and a [`TeamSet`] is a bitset over team bitsets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

use crate::syntax::{Atom, Formula, Kind, Term};

/// Teams are single machine words.
pub const MAX_VALUATIONS: usize = 64;
pub const MAX_FUNCTION_ARITY: usize = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("{name} has arity {expected}, used with {found} arguments")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("{count} valuations do not fit in a team (limit {MAX_VALUATIONS})")]
    TooManyValuations { count: u128 },
    #[error("too many variables: {0}")]
    TooManyVariables(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("bad team {text:?}: {message}")]
    BadTeam { text: String, message: String },
    #[error("function undefined on valuation {0}")]
    Undefined(String),
    #[error("index {index} out of range (limit {limit})")]
    OutOfRange { index: usize, limit: usize },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet(u32);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);
    pub const CAPACITY: usize = 16;

    pub fn full(n: usize) -> IndexSet {
        IndexSet(((1u64 << n) - 1) as u32)
    }

    pub fn from_bits(bits: u32) -> IndexSet {
        IndexSet(bits)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> IndexSet {
        it.into_iter().fold(IndexSet::EMPTY, |s, i| s.with(i))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> IndexSet {
        IndexSet(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> IndexSet {
        IndexSet(self.0 & !(1 << i))
    }

    pub fn union(self, o: IndexSet) -> IndexSet {
        IndexSet(self.0 | o.0)
    }

    pub fn intersection(self, o: IndexSet) -> IndexSet {
        IndexSet(self.0 & o.0)
    }

    pub fn is_subset(self, o: IndexSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn max_index(self) -> Option<usize> {
        (self.0 != 0).then(|| 31 - self.0.leading_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    /// All subsets of `{0..n-1}` in increasing bitmask order.
    pub fn all(n: usize) -> impl Iterator<Item = IndexSet> {
        (0..1u32 << n).map(IndexSet)
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Team(pub u64);

impl Team {
    pub const EMPTY: Team = Team(0);

    pub fn singleton(a: usize) -> Team {
        Team(1 << a)
    }

    pub fn from_valuations<I: IntoIterator<Item = usize>>(it: I) -> Team {
        Team(it.into_iter().fold(0, |t, a| t | 1 << a))
    }

    pub fn contains(self, a: usize) -> bool {
        self.0 >> a & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, o: Team) -> Team {
        Team(self.0 | o.0)
    }

    pub fn intersection(self, o: Team) -> Team {
        Team(self.0 & o.0)
    }

    pub fn minus(self, o: Team) -> Team {
        Team(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Team) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn iter(self) -> TeamIter {
        TeamIter(self.0)
    }

    /// Index of this team inside a [`TeamSet`].
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

pub struct TeamIter(u64);

impl Iterator for TeamIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let a = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(a)
    }
}

/// Iterates the submasks of `mask` in increasing order.
pub fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask {
            None
        } else {
            Some((cur | !mask).wrapping_add(1) & mask)
        };
        Some(cur)
    })
}

/// The valuation space `^N A` with per-`J` class tables.
#[derive(Clone, Debug)]
pub struct Space {
    size: usize,
    nvars: usize,
    count: usize,
    strides: Vec<usize>,
    /// `classes[J]`: the `≈_J` classes of the full space, ordered by least member.
    classes: Vec<Vec<u64>>,
    /// `class_of[J][a]`: position of `a`'s class in `classes[J]`.
    class_of: Vec<Vec<u16>>,
    /// `spread[n][a]`: the team `{a}(n:A)`.
    spread: Vec<Vec<u64>>,
}

impl PartialEq for Space {
    fn eq(&self, o: &Space) -> bool {
        self.size == o.size && self.nvars == o.nvars
    }
}

impl Eq for Space {}

impl Space {
    pub fn new(size: usize, nvars: usize) -> Result<Space, ModelError> {
        if nvars > IndexSet::CAPACITY {
            return Err(ModelError::TooManyVariables(nvars));
        }
        let count = (size as u128).pow(nvars as u32);
        if count > MAX_VALUATIONS as u128 {
            return Err(ModelError::TooManyValuations { count });
        }
        let count = count as usize;
        let strides = (0..nvars).map(|i| size.pow(i as u32)).collect();
        let mut space = Space {
            size,
            nvars,
            count,
            strides,
            classes: Vec::new(),
            class_of: Vec::new(),
            spread: Vec::new(),
        };
        for j in IndexSet::all(nvars) {
            let mut reps: BTreeMap<usize, usize> = BTreeMap::new();
            let mut masks = Vec::new();
            let mut of = vec![0u16; count];
            for a in 0..count {
                let key = space.project_out(a, j);
                let next = reps.len();
                let k = *reps.entry(key).or_insert(next);
                if k == masks.len() {
                    masks.push(0);
                }
                masks[k] |= 1 << a;
                of[a] = k as u16;
            }
            space.classes.push(masks);
            space.class_of.push(of);
        }
        for n in 0..nvars {
            let row = (0..count)
                .map(|a| (0..size).fold(0u64, |t, b| t | 1 << space.with_digit(a, n, b)))
                .collect();
            space.spread.push(row);
        }
        Ok(space)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// `|A|^N`.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn full_team(&self) -> Team {
        if self.count == 64 {
            Team(u64::MAX)
        } else {
            Team((1 << self.count) - 1)
        }
    }

    pub fn full_index(&self) -> IndexSet {
        IndexSet::full(self.nvars)
    }

    pub fn digit(&self, a: usize, i: usize) -> usize {
        a / self.strides[i] % self.size
    }

    pub fn with_digit(&self, a: usize, i: usize, b: usize) -> usize {
        a - self.digit(a, i) * self.strides[i] + b * self.strides[i]
    }

    pub fn digits(&self, a: usize) -> Vec<usize> {
        (0..self.nvars).map(|i| self.digit(a, i)).collect()
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.strides).map(|(d, s)| d * s).sum()
    }

    /// `a` with every coordinate in `j` set to 0.
    pub fn project_out(&self, a: usize, j: IndexSet) -> usize {
        j.iter()
            .filter(|&i| i < self.nvars)
            .fold(a, |a, i| self.with_digit(a, i, 0))
    }

    pub fn agree_outside(&self, a: usize, b: usize, j: IndexSet) -> bool {
        (0..self.nvars).all(|i| j.contains(i) || self.digit(a, i) == self.digit(b, i))
    }

    /// Classes of the whole space under `≈_J`.
    pub fn space_classes(&self, j: IndexSet) -> &[u64] {
        &self.classes[j.bits() as usize]
    }

    pub fn class_index(&self, a: usize, j: IndexSet) -> usize {
        self.class_of[j.bits() as usize][a] as usize
    }

    /// `≈_J` classes of `v`, ordered by least member.
    pub fn classes(&self, v: Team, j: IndexSet) -> Vec<Team> {
        self.space_classes(j)
            .iter()
            .map(|&c| Team(c & v.0))
            .filter(|t| !t.is_empty())
            .collect()
    }

    pub fn variant_const(&self, v: Team, n: usize, b: usize) -> Team {
        Team::from_valuations(v.iter().map(|a| self.with_digit(a, n, b)))
    }

    pub fn variant_all(&self, v: Team, n: usize) -> Team {
        Team(v.iter().fold(0, |t, a| t | self.spread[n][a]))
    }

    pub fn variant(&self, v: Team, n: usize, f: &TeamFunction) -> Result<Team, ModelError> {
        let mut out = Team::EMPTY;
        for a in v.iter() {
            let b = f
                .get(a)
                .ok_or_else(|| ModelError::Undefined(self.render_valuation(a)))?;
            out = out.union(Team::singleton(self.with_digit(a, n, b)));
        }
        Ok(out)
    }

    /// All functions `V → A` constant on the `≈_J` classes of `V`. The `t`-th
    /// function gives class `i` the `i`-th little-endian digit of `t`.
    pub fn independent_functions(&self, v: Team, j: IndexSet) -> impl Iterator<Item = TeamFunction> + '_ {
        let classes = self.classes(v, j);
        let total = (self.size as u128).pow(classes.len() as u32);
        (0..total).map(move |mut t| {
            let mut values = Vec::with_capacity(v.len());
            for c in &classes {
                let b = (t % self.size.max(1) as u128) as usize;
                t /= self.size.max(1) as u128;
                values.extend(c.iter().map(|a| (a, b)));
            }
            values.sort_unstable();
            TeamFunction { domain: v, values }
        })
    }

    /// All ordered pairs `(V₁, V₂)` with `V = V₁ ∪_J V₂`, indexed by the set
    /// of classes sent to `V₁`.
    pub fn saturated_splits(&self, v: Team, j: IndexSet) -> impl Iterator<Item = (Team, Team)> {
        let classes = self.classes(v, j);
        let k = classes.len();
        (0..1u64 << k).map(move |m| {
            let left = (0..k)
                .filter(|i| m >> i & 1 == 1)
                .fold(Team::EMPTY, |t, i| t.union(classes[i]));
            (left, v.minus(left))
        })
    }

    /// Checks `V = V₁ ∪_J V₂` directly from the definition.
    pub fn is_saturated_split(&self, v: Team, v1: Team, v2: Team, j: IndexSet) -> bool {
        if v1.union(v2) != v || !v1.intersection(v2).is_empty() {
            return false;
        }
        v1.iter()
            .all(|a| v2.iter().all(|b| !self.agree_outside(a, b, j)))
    }

    pub fn render_valuation(&self, a: usize) -> String {
        (0..self.nvars)
            .map(|i| char::from_digit(self.digit(a, i) as u32, 36).unwrap_or('?'))
            .collect()
    }

    /// `{00,11}` with members sorted as strings.
    pub fn render_team(&self, v: Team) -> String {
        let mut members: Vec<String> = v.iter().map(|a| self.render_valuation(a)).collect();
        members.sort();
        format!("{{{}}}", members.join(","))
    }

    pub fn render_team_set(&self, s: &TeamSet, sep: &str) -> String {
        s.iter().map(|t| self.render_team(t)).collect::<Vec<_>>().join(sep)
    }

    pub fn parse_valuation(&self, text: &str) -> Result<usize, ModelError> {
        let bad = |message: &str| ModelError::BadTeam {
            text: text.to_string(),
            message: message.to_string(),
        };
        if text.chars().count() != self.nvars {
            return Err(bad(&format!("expected {} digits", self.nvars)));
        }
        let digits = text
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).filter(|&d| d < self.size))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad("digit outside the universe"))?;
        Ok(self.encode(&digits))
    }

    /// Comma-separated valuations; the empty string is the empty team.
    pub fn parse_team(&self, text: &str) -> Result<Team, ModelError> {
        let text = text.trim().trim_start_matches('{').trim_end_matches('}');
        if text.trim().is_empty() {
            return Ok(Team::EMPTY);
        }
        text.split(',')
            .map(|p| self.parse_valuation(p.trim()))
            .collect::<Result<Vec<_>, _>>()
            .map(Team::from_valuations)
    }
}

/// A function from the members of a team into the universe.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TeamFunction {
    domain: Team,
    values: Vec<(usize, usize)>,
}

impl TeamFunction {
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(pairs: I) -> TeamFunction {
        let mut values: Vec<(usize, usize)> = pairs.into_iter().collect();
        values.sort_unstable();
        values.dedup_by_key(|p| p.0);
        let domain = Team::from_valuations(values.iter().map(|p| p.0));
        TeamFunction { domain, values }
    }

    pub fn constant(v: Team, b: usize) -> TeamFunction {
        TeamFunction::new(v.iter().map(|a| (a, b)))
    }

    pub fn domain(&self) -> Team {
        self.domain
    }

    pub fn get(&self, a: usize) -> Option<usize> {
        self.values
            .binary_search_by_key(&a, |p| p.0)
            .ok()
            .map(|k| self.values[k].1)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.values
    }

    pub fn is_independent(&self, space: &Space, j: IndexSet) -> bool {
        self.values.iter().all(|&(a, x)| {
            self.values
                .iter()
                .all(|&(b, y)| x == y || !space.agree_outside(a, b, j))
        })
    }

    pub fn union(&self, o: &TeamFunction) -> TeamFunction {
        TeamFunction::new(self.values.iter().chain(&o.values).copied())
    }
}

/// A set of teams over a space of `count` valuations, as a bitset indexed by
/// the team bitsets themselves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TeamSet {
    count: u8,
    words: SmallVec<[u64; 2]>,
}

/// Team-set bitsets are materialised only up to this many valuations.
pub const MAX_TEAMSET_VALUATIONS: usize = 20;

impl TeamSet {
    fn nwords(count: usize) -> usize {
        assert!(count <= MAX_TEAMSET_VALUATIONS, "team-set over {count} valuations");
        ((1usize << count) + 63) / 64
    }

    fn tail_mask(&self) -> u64 {
        let teams = 1u64 << self.count;
        if teams >= 64 {
            u64::MAX
        } else {
            (1 << teams) - 1
        }
    }

    pub fn empty(count: usize) -> TeamSet {
        TeamSet {
            count: count as u8,
            words: SmallVec::from_elem(0, Self::nwords(count)),
        }
    }

    pub fn full(count: usize) -> TeamSet {
        let mut s = TeamSet {
            count: count as u8,
            words: SmallVec::from_elem(u64::MAX, Self::nwords(count)),
        };
        let m = s.tail_mask();
        if let Some(w) = s.words.last_mut() {
            *w &= m;
        }
        s
    }

    /// `{∅}`.
    pub fn bottom(count: usize) -> TeamSet {
        let mut s = TeamSet::empty(count);
        s.insert(Team::EMPTY);
        s
    }

    /// `𝒫(V)`.
    pub fn powerset(count: usize, v: Team) -> TeamSet {
        let mut s = TeamSet::empty(count);
        for t in submasks(v.0) {
            s.insert(Team(t));
        }
        s
    }

    pub fn from_teams<I: IntoIterator<Item = Team>>(count: usize, it: I) -> TeamSet {
        let mut s = TeamSet::empty(count);
        for t in it {
            s.insert(t);
        }
        s
    }

    pub fn count(&self) -> usize {
        self.count as usize
    }

    /// Number of teams in the universe, `2^count`.
    pub fn universe(&self) -> usize {
        1 << self.count
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn contains(&self, t: Team) -> bool {
        let i = t.index();
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, t: Team) {
        let i = t.index();
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, t: Team) {
        let i = t.index();
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Team> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            TeamIter(w).map(move |b| Team((k * 64 + b) as u64))
        })
    }

    pub fn union(&self, o: &TeamSet) -> TeamSet {
        self.zip(o, |a, b| a | b)
    }

    pub fn intersection(&self, o: &TeamSet) -> TeamSet {
        self.zip(o, |a, b| a & b)
    }

    pub fn difference(&self, o: &TeamSet) -> TeamSet {
        self.zip(o, |a, b| a & !b)
    }

    fn zip(&self, o: &TeamSet, f: impl Fn(u64, u64) -> u64) -> TeamSet {
        debug_assert_eq!(self.count, o.count);
        TeamSet {
            count: self.count,
            words: self.words.iter().zip(&o.words).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn is_subset(&self, o: &TeamSet) -> bool {
        self.words.iter().zip(&o.words).all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_full(&self) -> bool {
        *self == TeamSet::full(self.count())
    }

    pub fn is_bottom(&self) -> bool {
        *self == TeamSet::bottom(self.count())
    }

    /// Closed under subsets.
    pub fn is_downward_closed(&self) -> bool {
        self.iter().all(|t| {
            TeamIter(t.0).all(|a| self.contains(Team(t.0 & !(1 << a))))
        })
    }

    /// A nonempty downward-closed set.
    pub fn is_suit(&self) -> bool {
        !self.is_empty() && self.is_downward_closed()
    }

    /// `Some(V)` when this set is exactly `𝒫(V)`.
    pub fn as_powerset(&self) -> Option<Team> {
        let top = self.iter().fold(Team::EMPTY, |u, t| u.union(t));
        (self.contains(top) && *self == TeamSet::powerset(self.count(), top)).then_some(top)
    }
}

/// A named function table, indexed by the little-endian code of the arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionTable {
    pub arity: usize,
    pub values: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTable {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Structure {
    size: usize,
    constants: BTreeMap<String, usize>,
    functions: BTreeMap<String, FunctionTable>,
    relations: BTreeMap<String, RelationTable>,
}

impl Structure {
    /// Pure equality over `size` elements.
    pub fn new(size: usize) -> Structure {
        Structure {
            size,
            ..Structure::default()
        }
    }

    /// Every element named by a constant spelled as its decimal index.
    pub fn with_named_elements(size: usize) -> Structure {
        let mut s = Structure::new(size);
        for k in 0..size {
            s.constants.insert(k.to_string(), k);
        }
        s
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn constants(&self) -> &BTreeMap<String, usize> {
        &self.constants
    }

    pub fn functions(&self) -> &BTreeMap<String, FunctionTable> {
        &self.functions
    }

    pub fn relations(&self) -> &BTreeMap<String, RelationTable> {
        &self.relations
    }

    pub fn add_constant(&mut self, name: &str, k: usize) -> Result<(), ModelError> {
        self.check_element(k)?;
        self.constants.insert(name.to_string(), k);
        Ok(())
    }

    pub fn add_function<F: Fn(&[usize]) -> usize>(&mut self, name: &str, arity: usize, f: F) -> Result<(), ModelError> {
        if arity > MAX_FUNCTION_ARITY {
            return Err(ModelError::Arity {
                name: name.to_string(),
                expected: MAX_FUNCTION_ARITY,
                found: arity,
            });
        }
        let total = self.size.pow(arity as u32);
        let mut values = Vec::with_capacity(total);
        for code in 0..total {
            let args = self.decode_args(code, arity);
            let b = f(&args);
            self.check_element(b)?;
            values.push(b);
        }
        self.functions.insert(name.to_string(), FunctionTable { arity, values });
        Ok(())
    }

    pub fn add_relation<I: IntoIterator<Item = Vec<usize>>>(&mut self, name: &str, arity: usize, tuples: I) -> Result<(), ModelError> {
        let mut set = BTreeSet::new();
        for t in tuples {
            if t.len() != arity {
                return Err(ModelError::Arity {
                    name: name.to_string(),
                    expected: arity,
                    found: t.len(),
                });
            }
            for &k in &t {
                self.check_element(k)?;
            }
            set.insert(t);
        }
        self.relations.insert(name.to_string(), RelationTable { arity, tuples: set });
        Ok(())
    }

    fn check_element(&self, k: usize) -> Result<(), ModelError> {
        if k < self.size {
            Ok(())
        } else {
            Err(ModelError::OutOfRange {
                index: k,
                limit: self.size,
            })
        }
    }

    fn decode_args(&self, mut code: usize, arity: usize) -> Vec<usize> {
        (0..arity)
            .map(|_| {
                let d = code % self.size;
                code /= self.size;
                d
            })
            .collect()
    }

    fn encode_args(&self, args: &[usize]) -> usize {
        args.iter().rev().fold(0, |c, &a| c * self.size + a)
    }

    pub fn apply(&self, name: &str, args: &[usize]) -> Result<usize, ModelError> {
        let f = self
            .functions
            .get(name)
            .ok_or_else(|| ModelError::UnknownSymbol(name.to_string()))?;
        if f.arity != args.len() {
            return Err(ModelError::Arity {
                name: name.to_string(),
                expected: f.arity,
                found: args.len(),
            });
        }
        Ok(f.values[self.encode_args(args)])
    }

    /// Checks every symbol of `f` against the signature.
    pub fn check_formula(&self, f: &Formula) -> Result<(), ModelError> {
        for node in f.tree().nodes {
            if let Kind::Atomic(a) = &node.kind {
                self.check_atom(a)?;
            }
        }
        Ok(())
    }

    pub fn check_atom(&self, atom: &Atom) -> Result<(), ModelError> {
        match atom {
            Atom::Eq(l, r) => {
                self.check_term(l)?;
                self.check_term(r)
            }
            Atom::Rel(name, args) => {
                let r = self
                    .relations
                    .get(name)
                    .ok_or_else(|| ModelError::UnknownSymbol(name.clone()))?;
                if r.arity != args.len() {
                    return Err(ModelError::Arity {
                        name: name.clone(),
                        expected: r.arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|t| self.check_term(t))
            }
        }
    }

    fn check_term(&self, t: &Term) -> Result<(), ModelError> {
        match t {
            Term::Var(_) => Ok(()),
            Term::Const(c) => self
                .constants
                .contains_key(c)
                .then_some(())
                .ok_or_else(|| ModelError::UnknownSymbol(c.clone())),
            Term::App(name, args) => {
                let f = self
                    .functions
                    .get(name)
                    .ok_or_else(|| ModelError::UnknownSymbol(name.clone()))?;
                if f.arity != args.len() {
                    return Err(ModelError::Arity {
                        name: name.clone(),
                        expected: f.arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|t| self.check_term(t))
            }
        }
    }

    pub fn eval_term(&self, space: &Space, t: &Term, a: usize) -> Result<usize, ModelError> {
        match t {
            Term::Var(i) => {
                if *i >= space.nvars() {
                    return Err(ModelError::OutOfRange {
                        index: *i,
                        limit: space.nvars(),
                    });
                }
                Ok(space.digit(a, *i))
            }
            Term::Const(c) => self
                .constants
                .get(c)
                .copied()
                .ok_or_else(|| ModelError::UnknownSymbol(c.clone())),
            Term::App(name, args) => {
                let vals = args
                    .iter()
                    .map(|s| self.eval_term(space, s, a))
                    .collect::<Result<Vec<_>, _>>()?;
                self.apply(name, &vals)
            }
        }
    }

    /// Classical satisfaction of an atom at valuation `a`.
    pub fn eval_atomic(&self, space: &Space, atom: &Atom, a: usize) -> Result<bool, ModelError> {
        match atom {
            Atom::Eq(l, r) => Ok(self.eval_term(space, l, a)? == self.eval_term(space, r, a)?),
            Atom::Rel(name, args) => {
                let r = self
                    .relations
                    .get(name)
                    .ok_or_else(|| ModelError::UnknownSymbol(name.clone()))?;
                if r.arity != args.len() {
                    return Err(ModelError::Arity {
                        name: name.clone(),
                        expected: r.arity,
                        found: args.len(),
                    });
                }
                let vals = args
                    .iter()
                    .map(|s| self.eval_term(space, s, a))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(r.tuples.contains(&vals))
            }
        }
    }

    /// The team of valuations satisfying `atom`.
    pub fn atom_team(&self, space: &Space, atom: &Atom) -> Result<Team, ModelError> {
        let mut t = Team::EMPTY;
        for a in 0..space.count() {
            if self.eval_atomic(space, atom, a)? {
                t = t.union(Team::singleton(a));
            }
        }
        Ok(t)
    }

    pub fn parse(text: &str) -> Result<Structure, ModelError> {
        let mut size: Option<usize> = None;
        let mut s = Structure::new(0);
        let mut partial: BTreeMap<String, (usize, BTreeMap<Vec<usize>, usize>)> = BTreeMap::new();
        let mut relations: BTreeMap<String, (usize, BTreeSet<Vec<usize>>)> = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let err = |message: String| ModelError::Parse {
                line: line_no,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            if keyword != "universe" && size.is_none() {
                return Err(err("`universe` must come first".into()));
            }
            let n = size.unwrap_or(0);
            let element = |w: &str| -> Result<usize, ModelError> {
                let v: usize = w
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad element {w:?}")))?;
                if v >= n {
                    return Err(err(format!("element {v} outside universe of size {n}")));
                }
                Ok(v)
            };
            match keyword {
                "universe" => {
                    if size.is_some() {
                        return Err(err("duplicate `universe`".into()));
                    }
                    let v = rest.parse().map_err(|_| err(format!("bad size {rest:?}")))?;
                    size = Some(v);
                    s.size = v;
                }
                "constant" => {
                    let (name, value) = rest
                        .split_once('=')
                        .ok_or_else(|| err("expected `constant NAME = k`".into()))?;
                    let name = ident(name.trim()).map_err(err)?;
                    s.constants.insert(name, element(value)?);
                }
                "function" | "relation" => {
                    let (head, body) = rest
                        .split_once(':')
                        .ok_or_else(|| err(format!("expected `{keyword} NAME/ARITY: ...`")))?;
                    let (name, arity) = head
                        .trim()
                        .split_once('/')
                        .ok_or_else(|| err("expected NAME/ARITY".into()))?;
                    let name = ident(name.trim()).map_err(err)?;
                    let arity: usize = arity
                        .trim()
                        .parse()
                        .map_err(|_| err(format!("bad arity {arity:?}")))?;
                    if keyword == "function" {
                        if arity > MAX_FUNCTION_ARITY {
                            return Err(err(format!("arity {arity} above {MAX_FUNCTION_ARITY}")));
                        }
                        let (args, value) = body
                            .split_once("->")
                            .ok_or_else(|| err("expected `a1,..,ak -> b`".into()))?;
                        let args: Vec<usize> = if args.trim().is_empty() {
                            Vec::new()
                        } else {
                            args.split(',').map(element).collect::<Result<_, _>>()?
                        };
                        if args.len() != arity {
                            return Err(err(format!("{name} expects {arity} arguments")));
                        }
                        let entry = partial.entry(name.clone()).or_insert((arity, BTreeMap::new()));
                        if entry.0 != arity {
                            return Err(err(format!("{name} redeclared with arity {arity}")));
                        }
                        if entry.1.insert(args, element(value)?).is_some() {
                            return Err(err(format!("{name} defined twice on the same arguments")));
                        }
                    } else {
                        let entry = relations.entry(name.clone()).or_insert((arity, BTreeSet::new()));
                        if entry.0 != arity {
                            return Err(err(format!("{name} redeclared with arity {arity}")));
                        }
                        for tuple in body.split_whitespace() {
                            let t: Vec<usize> = tuple.split(',').map(element).collect::<Result<_, _>>()?;
                            if t.len() != arity {
                                return Err(err(format!("tuple {tuple} has the wrong arity")));
                            }
                            entry.1.insert(t);
                        }
                    }
                }
                other => return Err(err(format!("unknown keyword {other:?}"))),
            }
        }
        if size.is_none() {
            return Err(ModelError::Parse {
                line: 0,
                message: "missing `universe`".into(),
            });
        }
        for (name, (arity, table)) in partial {
            let total = s.size.pow(arity as u32);
            if table.len() != total {
                return Err(ModelError::Parse {
                    line: 0,
                    message: format!("function {name} is not total: {} of {total} entries", table.len()),
                });
            }
            let mut values = vec![0; total];
            for (args, v) in table {
                values[s.encode_args(&args)] = v;
            }
            s.functions.insert(name, FunctionTable { arity, values });
        }
        for (name, (arity, tuples)) in relations {
            s.relations.insert(name, RelationTable { arity, tuples });
        }
        Ok(s)
    }

    pub fn render(&self) -> String {
        let mut out = format!("universe {}\n", self.size);
        for (name, k) in &self.constants {
            out += &format!("constant {name} = {k}\n");
        }
        for (name, f) in &self.functions {
            for (code, v) in f.values.iter().enumerate() {
                let args = self.decode_args(code, f.arity);
                let args: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                out += &format!("function {name}/{}: {} -> {v}\n", f.arity, args.join(","));
            }
        }
        for (name, r) in &self.relations {
            let tuples: Vec<String> = r
                .tuples
                .iter()
                .map(|t| t.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","))
                .collect();
            out += &format!("relation {name}/{}: {}\n", r.arity, tuples.join(" "));
        }
        out
    }
}

fn ident(w: &str) -> Result<String, String> {
    if !w.is_empty() && w.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_') {
        Ok(w.to_string())
    } else {
        Err(format!("bad name {w:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(size: usize, n: usize) -> Space {
        Space::new(size, n).unwrap()
    }

    fn team(s: &Space, text: &str) -> Team {
        s.parse_team(text).unwrap()
    }

    #[test]
    fn encoding_is_little_endian() {
        let s = sp(3, 2);
        assert_eq!(s.parse_valuation("10").unwrap(), 1);
        assert_eq!(s.parse_valuation("01").unwrap(), 3);
        assert_eq!(s.render_valuation(5), "21");
        assert_eq!(s.with_digit(5, 1, 0), 2);
    }

    #[test]
    fn agreement() {
        let s = sp(2, 2);
        let v = |t| s.parse_valuation(t).unwrap();
        assert!(s.agree_outside(v("01"), v("01"), IndexSet::EMPTY));
        assert!(s.agree_outside(v("01"), v("10"), IndexSet::full(2)));
        assert!(s.agree_outside(v("00"), v("01"), IndexSet::from_indices([1])));
        assert!(!s.agree_outside(v("00"), v("10"), IndexSet::from_indices([1])));
    }

    #[test]
    fn variants() {
        let s = sp(2, 2);
        let v = team(&s, "00,11");
        assert_eq!(s.variant_const(Team::EMPTY, 0, 1), Team::EMPTY);
        let f = TeamFunction::constant(v, 0);
        assert_eq!(s.variant(v, 1, &f).unwrap(), team(&s, "00,10"));
        assert_eq!(s.variant_all(v, 0), team(&s, "00,10,01,11"));
        let partial = TeamFunction::new([(0, 1)]);
        assert!(s.variant(v, 1, &partial).is_err());
    }

    #[test]
    fn classes_group_by_restriction() {
        let s = sp(2, 2);
        let v = team(&s, "00,01,10");
        assert_eq!(s.classes(v, IndexSet::EMPTY).len(), 3);
        assert_eq!(s.classes(v, IndexSet::full(2)), vec![v]);
        let c = s.classes(v, IndexSet::from_indices([1]));
        assert_eq!(c, vec![team(&s, "00,01"), team(&s, "10")]);
    }

    #[test]
    fn independent_function_counts() {
        let s = sp(2, 2);
        let fs: Vec<_> = s.independent_functions(Team::EMPTY, IndexSet::EMPTY).collect();
        assert_eq!(fs.len(), 1);
        assert!(fs[0].pairs().is_empty());
        let full = s.full_team();
        assert_eq!(s.independent_functions(full, IndexSet::full(2)).count(), 2);
        let v = team(&s, "00,01");
        let fs: Vec<_> = s.independent_functions(v, IndexSet::from_indices([1])).collect();
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().all(|f| f.is_independent(&s, IndexSet::from_indices([1]))));
        assert_eq!(sp(3, 2).independent_functions(full, IndexSet::EMPTY).count(), 81);
    }

    #[test]
    fn split_counts() {
        let s = sp(2, 2);
        let splits: Vec<_> = s.saturated_splits(Team::EMPTY, IndexSet::EMPTY).collect();
        assert_eq!(splits, vec![(Team::EMPTY, Team::EMPTY)]);
        let full = s.full_team();
        let splits: Vec<_> = s.saturated_splits(full, IndexSet::full(2)).collect();
        assert_eq!(splits, vec![(Team::EMPTY, full), (full, Team::EMPTY)]);
        assert_eq!(s.saturated_splits(team(&s, "00,11"), IndexSet::EMPTY).count(), 4);
    }

    #[test]
    fn atoms_evaluate_classically() {
        let s = sp(2, 2);
        let st = Structure::new(2);
        let eq = Atom::Eq(Term::var(0), Term::var(1));
        assert!(st.eval_atomic(&s, &eq, s.parse_valuation("00").unwrap()).unwrap());
        assert!(!st.eval_atomic(&s, &eq, s.parse_valuation("01").unwrap()).unwrap());
        let mut st = Structure::new(2);
        st.add_relation("R", 2, [vec![0, 1]]).unwrap();
        let r = Atom::Rel("R".into(), vec![Term::var(0), Term::var(1)]);
        assert!(st.eval_atomic(&s, &r, s.parse_valuation("01").unwrap()).unwrap());
        assert!(!st.eval_atomic(&s, &r, s.parse_valuation("10").unwrap()).unwrap());
        let bad = Atom::Rel("S".into(), vec![]);
        assert_eq!(
            st.eval_atomic(&s, &bad, 0),
            Err(ModelError::UnknownSymbol("S".into()))
        );
        let arity = Atom::Rel("R".into(), vec![Term::var(0)]);
        assert!(matches!(st.eval_atomic(&s, &arity, 0), Err(ModelError::Arity { .. })));
    }

    #[test]
    fn structure_files() {
        let text = "# two elements\nuniverse 2\nconstant c = 1\nfunction f/1: 0 -> 1\nfunction f/1: 1 -> 0\nrelation R/2: 0,1 1,1\nrelation P/1:\n";
        let st = Structure::parse(text).unwrap();
        assert_eq!(st.size(), 2);
        assert_eq!(st.apply("f", &[1]).unwrap(), 0);
        assert_eq!(st.relations()["R"].tuples.len(), 2);
        assert!(st.relations()["P"].tuples.is_empty());
        assert_eq!(Structure::parse(&st.render()).unwrap(), st);

        let partial = "universe 2\nfunction f/1: 0 -> 1\n";
        assert!(Structure::parse(partial).is_err());
        assert!(Structure::parse("universe 2\nconstant c = 2\n").is_err());
        assert!(Structure::parse("constant c = 0\n").is_err());
        assert!(Structure::parse("universe 2\nfunction g/5: 0,0,0,0,0 -> 0\n").is_err());
    }

    #[test]
    fn empty_universe() {
        let s = sp(0, 2);
        assert_eq!(s.count(), 0);
        assert_eq!(s.full_team(), Team::EMPTY);
        let s = sp(0, 0);
        assert_eq!(s.count(), 1);
    }

    #[test]
    fn team_sets() {
        let p = TeamSet::powerset(2, Team(0b11));
        assert_eq!(p.len(), 4);
        assert!(p.is_full());
        assert_eq!(p.as_powerset(), Some(Team(0b11)));
        let b = TeamSet::bottom(4);
        assert!(b.is_suit());
        let mut x = TeamSet::bottom(4);
        x.insert(Team(0b11));
        assert!(!x.is_downward_closed());
        assert_eq!(x.as_powerset(), None);
        let big = TeamSet::full(7);
        assert_eq!(big.len(), 128);
        assert_eq!(big.iter().count(), 128);
    }

    #[test]
    fn submask_order() {
        let v: Vec<u64> = submasks(0b101).collect();
        assert_eq!(v, vec![0, 1, 4, 5]);
        assert_eq!(submasks(0).count(), 1);
    }

    proptest::proptest! {
        #[test]
        fn digits_round_trip(size in 1usize..5, n in 0usize..4, seed in 0usize..1000) {
            let s = sp(size, n);
            let a = seed % s.count();
            proptest::prop_assert_eq!(s.encode(&s.digits(a)), a);
        }

        #[test]
        fn classes_partition_the_team(bits in 0u64..512, j in 0u32..4) {
            let s = sp(3, 2);
            let v = Team(bits);
            let cs = s.classes(v, IndexSet::from_bits(j));
            proptest::prop_assert_eq!(cs.iter().fold(Team::EMPTY, |u, c| u.union(*c)), v);
            proptest::prop_assert_eq!(cs.iter().map(|c| c.len()).sum::<usize>(), v.len());
        }
    }
}
