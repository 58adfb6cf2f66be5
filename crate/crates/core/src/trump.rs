//! Compositional satisfaction `⊨⁺` / `⊨⁻` over teams, meanings and
//! three-valued truth of sentences.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::Element;
use crate::model::{ModelError, Space, Structure, Team, TeamSet};
use crate::par::Exec;
use crate::syntax::{Formula, Kind, Position, Tree};

/// Largest `|A|^N` for which [`meaning`] enumerates every team.
pub const MEANING_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TrumpError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("formula has {formula} variables but the evaluator was built for {space}")]
    Dimension { formula: usize, space: usize },
    #[error("{count} valuations exceed the meaning limit of {MEANING_LIMIT}")]
    TooLarge { count: usize },
    #[error("not a sentence: v{var} occurs free at position {position}")]
    NotASentence { var: usize, position: Position },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Truth {
    True,
    False,
    Undetermined,
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::True => "true",
            Truth::False => "false",
            Truth::Undetermined => "undetermined",
        })
    }
}

/// Trumps and cotrumps of a formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Meaning {
    pub plus: TeamSet,
    pub minus: TeamSet,
}

impl Meaning {
    pub fn to_element(&self) -> Element {
        Element {
            plus: self.plus.clone(),
            minus: self.minus.clone(),
        }
    }

    pub fn render(&self, space: &Space) -> String {
        format!(
            "plus: {}\nminus: {}\n",
            space.render_team_set(&self.plus, " "),
            space.render_team_set(&self.minus, " ")
        )
    }
}

struct Prepared {
    space: Space,
    tree: Tree,
    atoms: Vec<u64>,
}

/// Memoising evaluator for one formula over one structure.
pub struct Evaluator {
    prep: Arc<Prepared>,
    memo: Memo,
}

enum Memo {
    /// Per `(node, sign)`: 0 unknown, 1 false, 2 true, indexed by team.
    Dense(Vec<Vec<u8>>),
    Sparse(HashMap<(u32, bool, u64), bool>),
}

impl Memo {
    fn for_tree(count: usize, nodes: usize) -> Memo {
        if count <= 16 && (nodes * 2) << count <= 1 << 26 {
            Memo::Dense(vec![Vec::new(); nodes * 2])
        } else {
            Memo::Sparse(HashMap::new())
        }
    }
}

impl Evaluator {
    pub fn new(structure: &Structure, formula: &Formula) -> Result<Evaluator, TrumpError> {
        let space = Space::new(structure.size(), formula.nvars())?;
        Evaluator::with_space(structure, formula, space)
    }

    pub fn with_space(structure: &Structure, formula: &Formula, space: Space) -> Result<Evaluator, TrumpError> {
        if space.nvars() != formula.nvars() {
            return Err(TrumpError::Dimension {
                formula: formula.nvars(),
                space: space.nvars(),
            });
        }
        structure.check_formula(formula)?;
        let tree = formula.tree();
        let atoms = tree
            .nodes
            .iter()
            .map(|n| match &n.kind {
                Kind::Atomic(a) => structure.atom_team(&space, a).map(|t| t.0),
                _ => Ok(0),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let memo = Memo::for_tree(space.count(), tree.nodes.len());
        Ok(Evaluator {
            prep: Arc::new(Prepared { space, tree, atoms }),
            memo,
        })
    }

    /// A second evaluator sharing the prepared formula but not the memo.
    pub fn fork(&self) -> Evaluator {
        Evaluator {
            memo: Memo::for_tree(self.prep.space.count(), self.prep.tree.nodes.len()),
            prep: Arc::clone(&self.prep),
        }
    }

    pub fn space(&self) -> &Space {
        &self.prep.space
    }

    pub fn tree(&self) -> &Tree {
        &self.prep.tree
    }

    pub fn satisfies(&mut self, team: Team, sign: Sign) -> bool {
        self.sat(0, sign, team)
    }

    /// Satisfaction of the subformula at tree node `node`.
    pub fn satisfies_at(&mut self, node: usize, team: Team, sign: Sign) -> bool {
        self.sat(node, sign, team)
    }

    fn sat(&mut self, node: usize, sign: Sign, v: Team) -> bool {
        sat(&self.prep, &mut self.memo, node, sign, v)
    }
}

impl Memo {
    fn lookup(&self, node: usize, sign: Sign, v: Team) -> Option<bool> {
        match self {
            Memo::Dense(rows) => {
                let row = &rows[node * 2 + (sign == Sign::Minus) as usize];
                match row.get(v.index()) {
                    Some(1) => Some(false),
                    Some(2) => Some(true),
                    _ => None,
                }
            }
            Memo::Sparse(m) => m.get(&(node as u32, sign == Sign::Plus, v.0)).copied(),
        }
    }

    fn store(&mut self, count: usize, node: usize, sign: Sign, v: Team, value: bool) {
        match self {
            Memo::Dense(rows) => {
                let row = &mut rows[node * 2 + (sign == Sign::Minus) as usize];
                if row.is_empty() {
                    *row = vec![0; 1 << count];
                }
                row[v.index()] = 1 + value as u8;
            }
            Memo::Sparse(m) => {
                m.insert((node as u32, sign == Sign::Plus, v.0), value);
            }
        }
    }
}

fn sat(prep: &Prepared, memo: &mut Memo, node: usize, sign: Sign, v: Team) -> bool {
    match &prep.tree.nodes[node].kind {
        Kind::Atomic(_) => {
            let mask = prep.atoms[node];
            return match sign {
                Sign::Plus => v.0 & !mask == 0,
                Sign::Minus => v.0 & mask == 0,
            };
        }
        Kind::Not(c) => return sat(prep, memo, *c, sign.flip(), v),
        _ => {}
    }
    if let Some(r) = memo.lookup(node, sign, v) {
        return r;
    }
    let space = &prep.space;
    let result = match (&prep.tree.nodes[node].kind, sign) {
        (Kind::Or(_, l, r), Sign::Minus) => {
            sat(prep, memo, *l, sign, v) && sat(prep, memo, *r, sign, v)
        }
        (Kind::Or(j, l, r), Sign::Plus) => {
            let pieces = space.classes(v, *j);
            let k = pieces.len();
            (0..1u64 << k).any(|m| {
                let left = (0..k)
                    .filter(|i| m >> i & 1 == 1)
                    .fold(Team::EMPTY, |t, i| t.union(pieces[i]));
                sat(prep, memo, *l, Sign::Plus, left) && sat(prep, memo, *r, Sign::Plus, v.minus(left))
            })
        }
        (Kind::Exists(n, _, c), Sign::Minus) => sat(prep, memo, *c, sign, space.variant_all(v, *n)),
        (Kind::Exists(n, j, c), Sign::Plus) => {
            let images: Vec<Vec<Team>> = space
                .classes(v, *j)
                .into_iter()
                .map(|p| (0..space.size()).map(|b| space.variant_const(p, *n, b)).collect())
                .collect();
            any_choice(&images, |t| sat(prep, memo, *c, Sign::Plus, t))
        }
        _ => unreachable!(),
    };
    memo.store(space.count(), node, sign, v, result);
    result
}

/// Whether some choice of one image per class gives a union accepted by `f`.
/// Choices are tried with the first class varying fastest.
pub(crate) fn any_choice(images: &[Vec<Team>], mut f: impl FnMut(Team) -> bool) -> bool {
    let k = images.len();
    if images.iter().any(|row| row.is_empty()) {
        return false;
    }
    let mut idx = vec![0usize; k];
    loop {
        let t = idx
            .iter()
            .zip(images)
            .fold(Team::EMPTY, |u, (&i, row)| u.union(row[i]));
        if f(t) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == k {
                return false;
            }
            idx[i] += 1;
            if idx[i] < images[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

pub fn satisfies(structure: &Structure, formula: &Formula, team: Team, sign: Sign) -> Result<bool, TrumpError> {
    Ok(Evaluator::new(structure, formula)?.satisfies(team, sign))
}

pub fn meaning(structure: &Structure, formula: &Formula) -> Result<Meaning, TrumpError> {
    meaning_with(structure, formula, Exec::default())
}

pub fn meaning_with(structure: &Structure, formula: &Formula, exec: Exec) -> Result<Meaning, TrumpError> {
    let space = Space::new(structure.size(), formula.nvars())?;
    if space.count() > MEANING_LIMIT {
        return Err(TrumpError::TooLarge { count: space.count() });
    }
    let base = Evaluator::with_space(structure, formula, space)?;
    Ok(base.meaning(exec))
}

impl Evaluator {
    /// Every team checked for both signs.
    pub fn meaning(&self, exec: Exec) -> Meaning {
        let count = self.prep.space.count();
        let teams = 1usize << count;
        let chunk = 256.min(teams);
        let chunks = teams.div_ceil(chunk);
        let parts = exec.map_range_init(
            chunks,
            || self.fork(),
            |ev, c| {
                (c * chunk..((c + 1) * chunk).min(teams))
                    .map(|t| {
                        let v = Team(t as u64);
                        (ev.satisfies(v, Sign::Plus), ev.satisfies(v, Sign::Minus))
                    })
                    .collect::<Vec<_>>()
            },
        );
        let mut plus = TeamSet::empty(count);
        let mut minus = TeamSet::empty(count);
        for (t, (p, m)) in parts.into_iter().flatten().enumerate() {
            if p {
                plus.insert(Team(t as u64));
            }
            if m {
                minus.insert(Team(t as u64));
            }
        }
        Meaning { plus, minus }
    }
}

pub fn truth_value(structure: &Structure, sentence: &Formula) -> Result<Truth, TrumpError> {
    if let Some((position, var)) = sentence.free_occurrence() {
        if sentence.nvars() > 0 {
            return Err(TrumpError::NotASentence { var, position });
        }
    }
    let mut ev = Evaluator::new(structure, sentence)?;
    let full = ev.space().full_team();
    Ok(if ev.satisfies(full, Sign::Plus) {
        Truth::True
    } else if ev.satisfies(full, Sign::Minus) {
        Truth::False
    } else {
        Truth::Undetermined
    })
}
