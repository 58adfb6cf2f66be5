//! Cylindric set algebras over teams.
//!
//! An [`Element`] is a pair `⟨X⁺, X⁻⟩` of team-sets over a fixed base and
//! dimension. [`AlgebraContext`] carries the valuation space and implements
//! the operations `∼`, `+_J`, `·_J`, `C_{n,J}` and its dual directly on the
//! bitsets.

pub mod laws;

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{submasks, IndexSet, ModelError, Space, Structure, Team, TeamSet, MAX_TEAMSET_VALUATIONS};
use crate::par::Exec;
use crate::trump::any_choice;

pub use laws::{check_law, check_laws, law, laws, Expect, Law, LawReport};

/// Default bound on the size of a generated subalgebra.
pub const DEFAULT_CAP: usize = 20_000;
/// Default nesting depth of terms used to seed [`cyls_of`].
pub const DEFAULT_TERM_DEPTH: usize = 2;

/// Saturated left parts are tabulated up to this many valuations.
const SPLIT_TABLE_LIMIT: usize = 12;
/// Cylindrification images are tabulated while the table stays below this
/// many entries.
const CYL_TABLE_LIMIT: usize = 1 << 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{count} valuations exceed the team-set limit of {MAX_TEAMSET_VALUATIONS}")]
    TooLarge { count: usize },
    #[error("subalgebra exceeds the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("index {index} out of range for dimension {nvars}")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub plus: TeamSet,
    pub minus: TeamSet,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Flags {
    pub rooted: bool,
    pub suit_pair: bool,
    pub double_suit: bool,
    pub fixed_point: bool,
    pub flat: bool,
}

impl Element {
    pub fn new(plus: TeamSet, minus: TeamSet) -> Element {
        Element { plus, minus }
    }

    pub fn is_rooted(&self) -> bool {
        self.plus.contains(Team::EMPTY) && self.minus.contains(Team::EMPTY)
    }

    pub fn is_suit_pair(&self) -> bool {
        self.plus.is_suit() && self.minus.is_suit()
    }

    pub fn is_double_suit(&self) -> bool {
        self.is_suit_pair() && self.plus.intersection(&self.minus).is_bottom()
    }

    pub fn is_fixed_point(&self) -> bool {
        self.plus == self.minus
    }

    /// `X⁺ = 𝒫(V)` for a single team `V`.
    pub fn is_flat(&self) -> bool {
        self.plus.as_powerset().is_some()
    }

    pub fn flags(&self) -> Flags {
        Flags {
            rooted: self.is_rooted(),
            suit_pair: self.is_suit_pair(),
            double_suit: self.is_double_suit(),
            fixed_point: self.is_fixed_point(),
            flat: self.is_flat(),
        }
    }

    pub fn neg(&self) -> Element {
        Element {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
        }
    }

    pub fn leq_plus(&self, o: &Element) -> bool {
        self.plus.is_subset(&o.plus)
    }

    pub fn leq_minus(&self, o: &Element) -> bool {
        self.minus.is_subset(&o.minus)
    }

    /// `X ≤ Y` iff `X⁺ ⊆ Y⁺` and `Y⁻ ⊆ X⁻`.
    pub fn leq(&self, o: &Element) -> bool {
        self.leq_plus(o) && o.leq_minus(self)
    }
}

/// Base size and dimension shared by a family of elements.
#[derive(Clone, Debug)]
pub struct AlgebraContext {
    space: Space,
    /// `lefts[J][V]`: every `U ⊆ V` with `V = U ∪_J (V∖U)`.
    lefts: Option<Vec<Vec<Vec<u64>>>>,
    /// `cyl_images[n][J][V]`: the teams `⋃ᵢ V_i[n↦bᵢ]` over the `≈_J` classes `V_i` of `V`.
    cyl_images: Option<Vec<Vec<Vec<Vec<u64>>>>>,
}

impl PartialEq for AlgebraContext {
    fn eq(&self, o: &AlgebraContext) -> bool {
        self.space == o.space
    }
}

impl AlgebraContext {
    pub fn new(size: usize, nvars: usize) -> Result<AlgebraContext, AlgebraError> {
        AlgebraContext::from_space(Space::new(size, nvars)?)
    }

    pub fn from_space(space: Space) -> Result<AlgebraContext, AlgebraError> {
        if space.count() > MAX_TEAMSET_VALUATIONS {
            return Err(AlgebraError::TooLarge { count: space.count() });
        }
        let lefts = (space.count() <= SPLIT_TABLE_LIMIT).then(|| {
            IndexSet::all(space.nvars())
                .map(|j| {
                    (0..1u64 << space.count())
                        .map(|v| left_parts(&space, Team(v), j).collect())
                        .collect()
                })
                .collect()
        });
        let cyl_images = cyl_table(&space);
        Ok(AlgebraContext { space, lefts, cyl_images })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn size(&self) -> usize {
        self.space.size()
    }

    pub fn nvars(&self) -> usize {
        self.space.nvars()
    }

    pub fn count(&self) -> usize {
        self.space.count()
    }

    /// All index sets `J ⊆ {0..N−1}` in ascending bit order.
    pub fn index_sets(&self) -> Vec<IndexSet> {
        IndexSet::all(self.nvars()).collect()
    }

    fn everything(&self) -> TeamSet {
        TeamSet::full(self.count())
    }

    fn bottom(&self) -> TeamSet {
        TeamSet::bottom(self.count())
    }

    pub fn zero(&self) -> Element {
        Element::new(self.bottom(), self.everything())
    }

    pub fn one(&self) -> Element {
        Element::new(self.everything(), self.bottom())
    }

    /// `Ω = ⟨{∅},{∅}⟩`.
    pub fn omega(&self) -> Element {
        Element::new(self.bottom(), self.bottom())
    }

    /// `℧`: every team on both sides.
    pub fn mho(&self) -> Element {
        Element::new(self.everything(), self.everything())
    }

    /// `⟨𝒫(V), 𝒫(V̄)⟩`, the meaning of an atom true exactly on `V`.
    pub fn atom(&self, v: Team) -> Element {
        let full = self.space.full_team();
        Element::new(
            TeamSet::powerset(self.count(), v.intersection(full)),
            TeamSet::powerset(self.count(), full.minus(v)),
        )
    }

    pub fn diag(&self, i: usize, j: usize) -> Result<Element, AlgebraError> {
        for k in [i, j] {
            if k >= self.nvars() {
                return Err(AlgebraError::IndexOutOfRange { index: k, nvars: self.nvars() });
            }
        }
        let s = &self.space;
        let eq = Team::from_valuations((0..s.count()).filter(|&a| s.digit(a, i) == s.digit(a, j)));
        Ok(self.atom(eq))
    }

    /// `0`, `1` and every `D_ij` with `i < j` (`D_ii = 1`).
    pub fn constants(&self) -> Vec<Element> {
        let mut out = vec![self.zero(), self.one()];
        for i in 0..self.nvars() {
            for j in i + 1..self.nvars() {
                out.push(self.diag(i, j).expect("in range"));
            }
        }
        out
    }

    pub fn neg(&self, x: &Element) -> Element {
        x.neg()
    }

    /// `{U₁ ∪_J U₂ : U₁ ∈ a, U₂ ∈ b}`.
    pub fn split_union(&self, j: IndexSet, a: &TeamSet, b: &TeamSet) -> TeamSet {
        let count = self.count();
        if j.intersection(self.space.full_index()) == self.space.full_index() {
            // One class per nonempty team: the only splits are (V,∅) and (∅,V).
            let mut out = TeamSet::empty(count);
            if b.contains(Team::EMPTY) {
                out = out.union(a);
            }
            if a.contains(Team::EMPTY) {
                out = out.union(b);
            }
            return out;
        }
        let mut out = TeamSet::empty(count);
        let full = self.space.full_team().0;
        for v in 0..=full {
            let hit = match &self.lefts {
                Some(t) => t[j.bits() as usize][v as usize]
                    .iter()
                    .any(|&u| a.contains(Team(u)) && b.contains(Team(v & !u))),
                None => left_parts(&self.space, Team(v), j)
                    .any(|u| a.contains(Team(u)) && b.contains(Team(v & !u))),
            };
            if hit {
                out.insert(Team(v));
            }
            if v == full {
                break;
            }
        }
        out
    }

    /// `X +_J Y`.
    pub fn sum(&self, j: IndexSet, x: &Element, y: &Element) -> Element {
        Element::new(self.split_union(j, &x.plus, &y.plus), x.minus.intersection(&y.minus))
    }

    /// `X ·_J Y`, computed directly.
    pub fn prod(&self, j: IndexSet, x: &Element, y: &Element) -> Element {
        Element::new(x.plus.intersection(&y.plus), self.split_union(j, &x.minus, &y.minus))
    }

    /// `C_{n,J}(X)`.
    pub fn cyl(&self, n: usize, j: IndexSet, x: &Element) -> Element {
        let s = &self.space;
        let count = self.count();
        let mut plus = TeamSet::empty(count);
        let mut minus = TeamSet::empty(count);
        let full = s.full_team().0;
        for v in 0..=full {
            let team = Team(v);
            let hit = match &self.cyl_images {
                Some(t) => t[n][j.bits() as usize][v as usize].iter().any(|&u| x.plus.contains(Team(u))),
                None => any_choice(&cyl_images(s, team, n, j), |t| x.plus.contains(t)),
            };
            if hit {
                plus.insert(team);
            }
            if x.minus.contains(s.variant_all(team, n)) {
                minus.insert(team);
            }
            if v == full {
                break;
            }
        }
        Element::new(plus, minus)
    }

    /// `∼C_{n,J}(∼X)`.
    pub fn dual_cyl(&self, n: usize, j: IndexSet, x: &Element) -> Element {
        self.cyl(n, j, &x.neg()).neg()
    }

    pub fn check_index(&self, n: usize) -> Result<(), AlgebraError> {
        if n < self.nvars() {
            Ok(())
        } else {
            Err(AlgebraError::IndexOutOfRange { index: n, nvars: self.nvars() })
        }
    }

    pub fn render(&self, x: &Element) -> String {
        format!(
            "plus=[{}] minus=[{}]",
            self.space.render_team_set(&x.plus, ","),
            self.space.render_team_set(&x.minus, ",")
        )
    }

    /// Header line followed by one element per line, in canonical order.
    pub fn dump(&self, elements: &[Element]) -> String {
        let mut sorted: Vec<&Element> = elements.iter().collect();
        sorted.sort();
        let mut out = format!("base={} dim={} count={}\n", self.size(), self.nvars(), sorted.len());
        for x in sorted {
            let _ = writeln!(out, "{}", self.render(x));
        }
        out
    }

    pub fn parse_team_set(&self, text: &str) -> Result<TeamSet, AlgebraError> {
        let body = text
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| parse_error(0, "expected [...]"))?;
        let mut out = TeamSet::empty(self.count());
        let mut rest = body.trim();
        while !rest.is_empty() {
            let close = rest.find('}').ok_or_else(|| parse_error(0, "unclosed team"))?;
            out.insert(self.space.parse_team(&rest[..=close])?);
            rest = rest[close + 1..].trim_start_matches(',').trim();
        }
        Ok(out)
    }

    /// Reads a dump written by [`AlgebraContext::dump`].
    pub fn parse_dump(text: &str) -> Result<(AlgebraContext, Vec<Element>), AlgebraError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| parse_error(1, "empty dump"))?;
        let mut fields = HashMap::new();
        for part in header.split_whitespace() {
            let (k, v) = part.split_once('=').ok_or_else(|| parse_error(1, "bad header"))?;
            let v: usize = v.parse().map_err(|_| parse_error(1, "bad number"))?;
            fields.insert(k, v);
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| parse_error(1, &format!("missing {k}")));
        let ctx = AlgebraContext::new(get("base")?, get("dim")?)?;
        let mut elements = Vec::new();
        for (i, line) in lines {
            let line = line.trim();
            let at = line.find(" minus=").ok_or_else(|| parse_error(i + 1, "missing minus="))?;
            let plus = line[..at]
                .strip_prefix("plus=")
                .ok_or_else(|| parse_error(i + 1, "missing plus="))?;
            let minus = &line[at + " minus=".len()..];
            elements.push(Element::new(
                ctx.parse_team_set(plus).map_err(|e| parse_error(i + 1, &e.to_string()))?,
                ctx.parse_team_set(minus).map_err(|e| parse_error(i + 1, &e.to_string()))?,
            ));
        }
        Ok((ctx, elements))
    }
}

fn parse_error(line: usize, message: &str) -> AlgebraError {
    AlgebraError::Parse {
        line,
        message: message.to_string(),
    }
}

/// Unions of `≈_J` classes of `v`.
fn left_parts(space: &Space, v: Team, j: IndexSet) -> impl Iterator<Item = u64> {
    let pieces = space.classes(v, j);
    let k = pieces.len();
    (0..1u64 << k).map(move |m| {
        (0..k)
            .filter(|i| m >> i & 1 == 1)
            .fold(0, |t, i| t | pieces[i].0)
    })
}

fn cyl_images(s: &Space, v: Team, n: usize, j: IndexSet) -> Vec<Vec<Team>> {
    s.classes(v, j)
        .into_iter()
        .map(|p| (0..s.size()).map(|b| s.variant_const(p, n, b)).collect())
        .collect()
}

fn cyl_table(s: &Space) -> Option<Vec<Vec<Vec<Vec<u64>>>>> {
    if s.count() > SPLIT_TABLE_LIMIT {
        return None;
    }
    let mut entries = 0usize;
    let mut table = Vec::new();
    for n in 0..s.nvars() {
        let mut by_j = Vec::new();
        for j in IndexSet::all(s.nvars()) {
            let mut by_v = Vec::new();
            for v in 0..1u64 << s.count() {
                let images = cyl_images(s, Team(v), n, j);
                entries += images.iter().map(Vec::len).product::<usize>();
                if entries > CYL_TABLE_LIMIT {
                    return None;
                }
                let mut unions = Vec::new();
                any_choice(&images, |t| {
                    unions.push(t.0);
                    false
                });
                unions.sort_unstable();
                unions.dedup();
                by_v.push(unions);
            }
            by_j.push(by_v);
        }
        table.push(by_j);
    }
    Some(table)
}

/// Closes `generators` together with the constants under `∼`, every `+_J`,
/// `·_J` and `C_{n,J}`. Elements come out in discovery order.
pub fn generate_subalgebra(
    ctx: &AlgebraContext,
    generators: &[Element],
    cap: usize,
    exec: Exec,
) -> Result<Vec<Element>, AlgebraError> {
    close(ctx, generators, cap, exec, |_| false).map(|(out, _)| out)
}

/// Whether `target` lies in the subalgebra generated by `generators`. Stops as
/// soon as it turns up, so the cap only bites when it is absent or late.
pub fn generates(
    ctx: &AlgebraContext,
    generators: &[Element],
    target: &Element,
    cap: usize,
    exec: Exec,
) -> Result<bool, AlgebraError> {
    close(ctx, generators, cap, exec, |x| x == target).map(|(_, hit)| hit)
}

fn close(
    ctx: &AlgebraContext,
    generators: &[Element],
    cap: usize,
    exec: Exec,
    stop: impl Fn(&Element) -> bool,
) -> Result<(Vec<Element>, bool), AlgebraError> {
    let mut seen: HashMap<Element, usize> = HashMap::new();
    let mut out: Vec<Element> = Vec::new();
    let push = |x: Element, seen: &mut HashMap<Element, usize>, out: &mut Vec<Element>| -> Result<(), AlgebraError> {
        if !seen.contains_key(&x) {
            if out.len() == cap {
                return Err(AlgebraError::CapExceeded { cap });
            }
            seen.insert(x.clone(), out.len());
            out.push(x);
        }
        Ok(())
    };
    for x in ctx.constants().into_iter().chain(generators.iter().cloned()) {
        if stop(&x) {
            return Ok((out, true));
        }
        push(x, &mut seen, &mut out)?;
    }
    let js = ctx.index_sets();
    let mut next = 0;
    while next < out.len() {
        let x = out[next].clone();
        let mut fresh = vec![x.neg()];
        for n in 0..ctx.nvars() {
            for &j in &js {
                fresh.push(ctx.cyl(n, j, &x));
            }
        }
        // `+_J` and `·_J` are commutative, so pairs with earlier elements suffice.
        let products = exec.map_range(next + 1, |k| {
            let y = &out[k];
            js.iter()
                .flat_map(|&j| [ctx.sum(j, &x, y), ctx.prod(j, &x, y)])
                .collect::<Vec<_>>()
        });
        fresh.extend(products.into_iter().flatten());
        for y in fresh {
            if stop(&y) {
                return Ok((out, true));
            }
            push(y, &mut seen, &mut out)?;
        }
        next += 1;
    }
    Ok((out, false))
}

/// Value tables of every term over the signature of `structure` with
/// nesting depth at most `depth`.
fn term_tables(structure: &Structure, space: &Space, depth: usize) -> Vec<Vec<usize>> {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut terms: Vec<Vec<usize>> = Vec::new();
    let mut add = |t: Vec<usize>, terms: &mut Vec<Vec<usize>>| {
        if seen.insert(t.clone()) {
            terms.push(t);
        }
    };
    for i in 0..space.nvars() {
        add((0..space.count()).map(|a| space.digit(a, i)).collect(), &mut terms);
    }
    for &c in structure.constants().values() {
        add(vec![c; space.count()], &mut terms);
    }
    for _ in 0..depth {
        let before = terms.len();
        for (name, table) in structure.functions() {
            let snapshot = terms[..before].to_vec();
            for args in tuples(snapshot.len(), table.arity) {
                let t = (0..space.count())
                    .map(|a| {
                        let vals: Vec<usize> = args.iter().map(|&k| snapshot[k][a]).collect();
                        structure.apply(name, &vals).expect("total function")
                    })
                    .collect();
                add(t, &mut terms);
            }
        }
        if terms.len() == before {
            break;
        }
    }
    terms
}

fn tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(k as u32);
    (0..total).map(move |mut t| {
        (0..k)
            .map(|_| {
                let d = t % n;
                t /= n;
                d
            })
            .collect()
    })
}

/// Teams on which some atomic formula is true, over terms of bounded depth.
pub fn atomic_teams(structure: &Structure, space: &Space, depth: usize) -> BTreeSet<Team> {
    let terms = term_tables(structure, space, depth);
    let mut out = BTreeSet::new();
    for s in &terms {
        for t in &terms {
            out.insert(Team::from_valuations((0..space.count()).filter(|&a| s[a] == t[a])));
        }
    }
    for (_, rel) in structure.relations() {
        for args in tuples(terms.len(), rel.arity) {
            out.insert(Team::from_valuations((0..space.count()).filter(|&a| {
                let tuple: Vec<usize> = args.iter().map(|&k| terms[k][a]).collect();
                rel.tuples.contains(&tuple)
            })));
        }
    }
    out
}

/// The algebra of meanings of formulas over `structure` with `nvars`
/// variables, seeded by atoms over terms of depth at most `depth`.
pub fn cyls_of(
    structure: &Structure,
    nvars: usize,
    depth: usize,
    cap: usize,
    exec: Exec,
) -> Result<(AlgebraContext, Vec<Element>), AlgebraError> {
    let ctx = AlgebraContext::new(structure.size(), nvars)?;
    let seeds = atomic_seeds(structure, &ctx, depth);
    let elements = generate_subalgebra(&ctx, &seeds, cap, exec)?;
    Ok((ctx, elements))
}

/// The meanings of the atomic formulas with terms of depth at most `depth`.
pub fn atomic_seeds(structure: &Structure, ctx: &AlgebraContext, depth: usize) -> Vec<Element> {
    atomic_teams(structure, ctx.space(), depth).into_iter().map(|t| ctx.atom(t)).collect()
}

/// Pairs of suits of the full power set algebra passing `filter`. Only
/// sensible for tiny spaces.
pub fn enumerate_elements(ctx: &AlgebraContext, filter: impl Fn(&Element) -> bool) -> Vec<Element> {
    let suits = all_suits(ctx.count());
    let mut out = Vec::new();
    for p in &suits {
        for m in &suits {
            let x = Element::new(p.clone(), m.clone());
            if filter(&x) {
                out.push(x);
            }
        }
    }
    out
}

/// All downward-closed team-sets containing `∅`, for up to 4 valuations.
pub fn all_suits(count: usize) -> Vec<TeamSet> {
    assert!(count <= 4, "suit enumeration over {count} valuations");
    let teams = 1usize << count;
    (0..1u64 << teams)
        .filter(|m| m & 1 == 1)
        .map(|m| TeamSet::from_teams(count, (0..teams).filter(|&t| m >> t & 1 == 1).map(|t| Team(t as u64))))
        .filter(|s| s.is_downward_closed())
        .collect()
}

/// Every rooted element over at most 3 valuations.
pub fn rooted_elements(ctx: &AlgebraContext) -> Vec<Element> {
    let sets = all_rooted_sets(ctx.count());
    sets.iter().flat_map(|p| sets.iter().map(move |m| Element::new(p.clone(), m.clone()))).collect()
}

/// Every team-set over at most 3 valuations containing `∅`.
pub fn all_rooted_sets(count: usize) -> Vec<TeamSet> {
    assert!(count <= 3, "team-set enumeration over {count} valuations");
    let teams = 1usize << count;
    (0..1u64 << teams)
        .filter(|m| m & 1 == 1)
        .map(|m| TeamSet::from_teams(count, (0..teams).filter(|&t| m >> t & 1 == 1).map(|t| Team(t as u64))))
        .collect()
}

/// `𝒫(V)` for each `V` in `teams`, as seen through `submasks`.
pub fn downward_closure(count: usize, teams: impl IntoIterator<Item = Team>) -> TeamSet {
    let mut out = TeamSet::empty(count);
    for t in teams {
        for s in submasks(t.0) {
            out.insert(Team(s));
        }
    }
    out
}
