//! Semantic games with imperfect information.
//!
//! A position is a subformula, a valuation and the player currently acting
//! as verifier. Player 1 verifies at the root. Strategies assign one move
//! per information set, so uniformity holds by construction; the solver
//! searches those assignments depth first and returns the first winning one
//! in canonical order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::model::{IndexSet, ModelError, Space, Structure, Team};
use crate::syntax::{Formula, Kind, Position, Tree};

/// Default bound on `log2` of the number of strategies the solver may face.
pub const DEFAULT_LOG2_LIMIT: f64 = 24.0;

#[derive(Debug, Error, PartialEq)]
pub enum GameError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("strategy space of 2^{log2:.1} exceeds the limit 2^{limit}")]
    TooLarge { log2: f64, limit: f64 },
    #[error("no move for player {player} at position {position} with valuation {valuation}")]
    Undefined {
        player: u8,
        position: Position,
        valuation: String,
    },
    #[error("player must be 0 or 1, got {0}")]
    BadPlayer(u8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Left,
    Right,
    Element(usize),
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Left => f.write_str("left"),
            Move::Right => f.write_str("right"),
            Move::Element(b) => write!(f, "{b}"),
        }
    }
}

/// A subformula position together with the least valuation of an `≈_J`
/// class over the whole space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfoSet {
    pub position: Position,
    pub class_rep: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    pub owner: u8,
    pub moves: BTreeMap<InfoSet, Move>,
}

impl Strategy {
    pub fn empty(owner: u8) -> Strategy {
        Strategy {
            owner,
            moves: BTreeMap::new(),
        }
    }

    /// One line per information set, `pos=<s> class=<rep> -> <move>`, with
    /// `*` in the hidden coordinates of the representative.
    pub fn render(&self, game: &Game) -> String {
        let mut out = String::new();
        for (info, m) in &self.moves {
            let hidden = game
                .tree
                .find(&info.position)
                .map(|i| game.slash(i))
                .unwrap_or(IndexSet::EMPTY);
            let rep: String = game
                .space
                .render_valuation(info.class_rep)
                .chars()
                .enumerate()
                .map(|(i, c)| if hidden.contains(i) { '*' } else { c })
                .collect();
            out.push_str(&format!("pos={} class={} -> {}\n", info.position, rep, m));
        }
        out
    }
}

/// One position of a play.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GamePosition {
    pub position: Position,
    pub valuation: usize,
    pub verifier: u8,
}

/// The game tree of one formula over one structure.
pub struct Game {
    space: Space,
    tree: Tree,
    atoms: Vec<u64>,
    /// Verifier at each node, with player 1 verifying at the root.
    verifier: Vec<u8>,
}

impl Game {
    pub fn new(structure: &Structure, formula: &Formula) -> Result<Game, GameError> {
        let space = Space::new(structure.size(), formula.nvars())?;
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
        let mut verifier = vec![1u8; tree.nodes.len()];
        for i in 0..tree.nodes.len() {
            match tree.nodes[i].kind {
                Kind::Not(c) => verifier[c] = 1 - verifier[i],
                Kind::Or(_, l, r) => {
                    verifier[l] = verifier[i];
                    verifier[r] = verifier[i];
                }
                Kind::Exists(_, _, c) => verifier[c] = verifier[i],
                Kind::Atomic(_) => {}
            }
        }
        Ok(Game {
            space,
            tree,
            atoms,
            verifier,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    fn slash(&self, node: usize) -> IndexSet {
        match self.tree.nodes[node].kind {
            Kind::Or(j, _, _) | Kind::Exists(_, j, _) => j,
            _ => IndexSet::EMPTY,
        }
    }

    fn moves(&self, node: usize) -> Vec<Move> {
        match self.tree.nodes[node].kind {
            Kind::Or(..) => vec![Move::Left, Move::Right],
            Kind::Exists(..) => (0..self.space.size()).map(Move::Element).collect(),
            _ => Vec::new(),
        }
    }

    fn successor(&self, node: usize, a: usize, m: Move) -> (usize, usize) {
        match (&self.tree.nodes[node].kind, m) {
            (Kind::Or(_, l, _), Move::Left) => (*l, a),
            (Kind::Or(_, _, r), Move::Right) => (*r, a),
            (Kind::Exists(n, _, c), Move::Element(b)) => (*c, self.space.with_digit(a, *n, b)),
            _ => unreachable!("move {m} does not fit node {node}"),
        }
    }

    /// Information-set slot of a choice node and valuation.
    fn info_index(&self, node: usize, a: usize) -> usize {
        let j = self.slash(node);
        self.space.class_index(a, j)
    }

    fn info_set(&self, node: usize, a: usize) -> InfoSet {
        let j = self.slash(node);
        let class = self.space.space_classes(j)[self.info_index(node, a)];
        InfoSet {
            position: self.tree.nodes[node].position.clone(),
            class_rep: class.trailing_zeros() as usize,
        }
    }

    fn is_choice(&self, node: usize) -> bool {
        matches!(self.tree.nodes[node].kind, Kind::Or(..) | Kind::Exists(..))
    }

    /// `log2` of the number of strategies for `player`.
    pub fn strategy_space_log2(&self, player: u8) -> f64 {
        (0..self.tree.nodes.len())
            .filter(|&i| self.is_choice(i) && self.verifier[i] == player)
            .map(|i| {
                let classes = self.space.space_classes(self.slash(i)).len() as f64;
                classes * (self.moves(i).len().max(1) as f64).log2()
            })
            .sum()
    }

    /// Searches for a winning strategy of `player` on `team`.
    pub fn solve(&self, team: Team, player: u8, log2_limit: f64) -> Result<Option<Strategy>, GameError> {
        if player > 1 {
            return Err(GameError::BadPlayer(player));
        }
        if team.is_empty() {
            return Ok(Some(Strategy::empty(player)));
        }
        let log2 = self.strategy_space_log2(player);
        if log2 > log2_limit {
            return Err(GameError::TooLarge { log2, limit: log2_limit });
        }
        let offsets = self.slot_offsets();
        let mut slots = vec![None; *offsets.last().unwrap_or(&0)];
        let goals: Vec<(usize, usize)> = {
            let mut g: Vec<_> = team.iter().map(|a| (0, a)).collect();
            g.reverse();
            g
        };
        let mut solver = Solver {
            game: self,
            player,
            offsets: &offsets,
            slots: &mut slots,
        };
        if !solver.run(goals) {
            return Ok(None);
        }
        let mut moves = BTreeMap::new();
        for node in 0..self.tree.nodes.len() {
            if !self.is_choice(node) {
                continue;
            }
            let classes = self.space.space_classes(self.slash(node));
            for (k, class) in classes.iter().enumerate() {
                if let Some(m) = slots[offsets[node] + k] {
                    let rep = class.trailing_zeros() as usize;
                    moves.insert(self.info_set(node, rep), m);
                }
            }
        }
        Ok(Some(Strategy { owner: player, moves }))
    }

    /// Start of each node's information-set slots; the last entry is the total.
    fn slot_offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.tree.nodes.len() + 1);
        let mut acc = 0;
        for i in 0..self.tree.nodes.len() {
            out.push(acc);
            if self.is_choice(i) {
                acc += self.space.space_classes(self.slash(i)).len();
            }
        }
        out.push(acc);
        out
    }

    fn terminal_winner(&self, node: usize, a: usize) -> u8 {
        let truth = self.atoms[node] >> a & 1 == 1;
        if truth {
            self.verifier[node]
        } else {
            1 - self.verifier[node]
        }
    }

    /// Whether `strategy` wins every play from every valuation of `team`,
    /// whatever the opponent does.
    pub fn is_winning(&self, strategy: &Strategy, team: Team) -> Result<bool, GameError> {
        let mut stack: Vec<(usize, usize)> = team.iter().map(|a| (0, a)).collect();
        while let Some((node, a)) = stack.pop() {
            match &self.tree.nodes[node].kind {
                Kind::Atomic(_) => {
                    if self.terminal_winner(node, a) != strategy.owner {
                        return Ok(false);
                    }
                }
                Kind::Not(c) => stack.push((*c, a)),
                _ if self.verifier[node] == strategy.owner => {
                    let m = self.lookup(strategy, node, a)?;
                    stack.push(self.successor(node, a, m));
                }
                _ => {
                    for m in self.moves(node) {
                        stack.push(self.successor(node, a, m));
                    }
                }
            }
        }
        Ok(true)
    }

    fn lookup(&self, strategy: &Strategy, node: usize, a: usize) -> Result<Move, GameError> {
        strategy
            .moves
            .get(&self.info_set(node, a))
            .copied()
            .ok_or_else(|| GameError::Undefined {
                player: self.verifier[node],
                position: self.tree.nodes[node].position.clone(),
                valuation: self.space.render_valuation(a),
            })
    }

    /// The play from `start` when each player follows their strategy.
    pub fn play_out(&self, strategies: [&Strategy; 2], start: usize) -> Result<(Vec<GamePosition>, u8), GameError> {
        let mut play = Vec::new();
        let (mut node, mut a) = (0, start);
        loop {
            play.push(GamePosition {
                position: self.tree.nodes[node].position.clone(),
                valuation: a,
                verifier: self.verifier[node],
            });
            match &self.tree.nodes[node].kind {
                Kind::Atomic(_) => return Ok((play, self.terminal_winner(node, a))),
                Kind::Not(c) => node = *c,
                _ => {
                    let owner = self.verifier[node] as usize;
                    let m = self.lookup(strategies[owner], node, a)?;
                    (node, a) = self.successor(node, a, m);
                }
            }
        }
    }

    /// Every position occurring in some play from `team`.
    pub fn reachable_positions(&self, team: Team) -> BTreeSet<GamePosition> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<(usize, usize)> = team.iter().map(|a| (0, a)).collect();
        while let Some((node, a)) = stack.pop() {
            let p = GamePosition {
                position: self.tree.nodes[node].position.clone(),
                valuation: a,
                verifier: self.verifier[node],
            };
            if !seen.insert(p) {
                continue;
            }
            match &self.tree.nodes[node].kind {
                Kind::Atomic(_) => {}
                Kind::Not(c) => stack.push((*c, a)),
                _ => {
                    for m in self.moves(node) {
                        stack.push(self.successor(node, a, m));
                    }
                }
            }
        }
        seen
    }
}

struct Solver<'a> {
    game: &'a Game,
    player: u8,
    offsets: &'a [usize],
    slots: &'a mut Vec<Option<Move>>,
}

impl Solver<'_> {
    /// Discharges every goal, extending the assignment as needed. On failure
    /// every slot assigned by this call is cleared again.
    fn run(&mut self, mut goals: Vec<(usize, usize)>) -> bool {
        let g = self.game;
        while let Some((node, a)) = goals.pop() {
            match &g.tree.nodes[node].kind {
                Kind::Atomic(_) => {
                    if g.terminal_winner(node, a) != self.player {
                        return false;
                    }
                }
                Kind::Not(c) => goals.push((*c, a)),
                _ if g.verifier[node] == self.player => {
                    let slot = self.offsets[node] + g.info_index(node, a);
                    if let Some(m) = self.slots[slot] {
                        goals.push(g.successor(node, a, m));
                        continue;
                    }
                    for m in g.moves(node) {
                        self.slots[slot] = Some(m);
                        let mut next = goals.clone();
                        next.push(g.successor(node, a, m));
                        if self.run(next) {
                            return true;
                        }
                    }
                    self.slots[slot] = None;
                    return false;
                }
                _ => {
                    for m in g.moves(node).into_iter().rev() {
                        goals.push(g.successor(node, a, m));
                    }
                }
            }
        }
        true
    }
}

/// `(wins, witness)` for `player` in `G(𝔄, φ, V)`.
pub fn has_winning_strategy(
    structure: &Structure,
    formula: &Formula,
    team: Team,
    player: u8,
) -> Result<(bool, Option<Strategy>), GameError> {
    let game = Game::new(structure, formula)?;
    let s = game.solve(team, player, DEFAULT_LOG2_LIMIT)?;
    Ok((s.is_some(), s))
}

/// The dual strategy for `∼φ`: every position gains a leading `0` and the
/// owner switches sides.
pub fn dualize(strategy: &Strategy) -> Strategy {
    Strategy {
        owner: 1 - strategy.owner,
        moves: strategy
            .moves
            .iter()
            .map(|(k, &m)| {
                (
                    InfoSet {
                        position: k.position.prefixed(0),
                        class_rep: k.class_rep,
                    },
                    m,
                )
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Polarity;

    fn eq2() -> Structure {
        Structure::new(2)
    }

    fn full(n: usize) -> Team {
        Space::new(2, n).unwrap().full_team()
    }

    #[test]
    fn empty_team_is_won_by_both() {
        let f = Formula::parse("A v0/{} E v1/{0} (v0=v1)", 2).unwrap();
        for p in [0, 1] {
            let (won, s) = has_winning_strategy(&eq2(), &f, Team::EMPTY, p).unwrap();
            assert!(won);
            assert!(s.unwrap().moves.is_empty());
        }
    }

    #[test]
    fn matching_pennies_is_undetermined() {
        let f = Formula::parse("A v0/{} E v1/{0} (v0=v1)", 2).unwrap();
        for p in [0, 1] {
            assert!(!has_winning_strategy(&eq2(), &f, full(2), p).unwrap().0);
        }
    }

    #[test]
    fn copy_move() {
        let f = Formula::parse("E v1/{} (v0=v1)", 2).unwrap();
        let game = Game::new(&eq2(), &f).unwrap();
        let s = game.solve(full(2), 1, DEFAULT_LOG2_LIMIT).unwrap().unwrap();
        assert!(game.is_winning(&s, full(2)).unwrap());
        assert_eq!(s.render(&game), "pos=ε class=00 -> 0\npos=ε class=10 -> 1\npos=ε class=01 -> 0\npos=ε class=11 -> 1\n");
    }

    #[test]
    fn dual_strategy_wins_negation() {
        let f = Formula::parse("E v1/{} (v0=v1)", 2).unwrap();
        let s = Game::new(&eq2(), &f).unwrap().solve(full(2), 1, 24.0).unwrap().unwrap();
        let d = dualize(&s);
        assert_eq!(d.owner, 0);
        let g = Game::new(&eq2(), &f.negated()).unwrap();
        assert!(g.is_winning(&d, full(2)).unwrap());
        let back = dualize(&d);
        assert_eq!(back.owner, s.owner);
        assert!(back.moves.keys().all(|k| k.position.0.starts_with(&[0, 0])));
        assert_eq!(back.moves.values().collect::<Vec<_>>(), s.moves.values().collect::<Vec<_>>());
        assert_eq!(dualize(&Strategy::empty(1)), Strategy::empty(0));
    }

    #[test]
    fn plays() {
        let s = eq2();
        let none = [&Strategy::empty(0), &Strategy::empty(1)];
        let atom = Formula::parse("v0=v1", 2).unwrap();
        let g = Game::new(&s, &atom).unwrap();
        let (play, winner) = g.play_out(none, 0).unwrap();
        assert_eq!((play.len(), winner), (1, 1));
        assert_eq!(g.play_out(none, 1).unwrap().1, 0);

        let neg = Formula::parse("~(v0=v1)", 2).unwrap();
        let (play, winner) = Game::new(&s, &neg).unwrap().play_out(none, 0).unwrap();
        assert_eq!(play.len(), 2);
        assert_eq!((play[0].verifier, play[1].verifier, winner), (1, 0, 0));

        let or = Formula::parse("(v0=v1 \\/{} ~(v0=v1))", 2).unwrap();
        let g = Game::new(&s, &or).unwrap();
        let left = Strategy {
            owner: 1,
            moves: [(InfoSet { position: Position::root(), class_rep: 0 }, Move::Left)].into(),
        };
        let (play, _) = g.play_out([&Strategy::empty(0), &left], 0).unwrap();
        assert_eq!(play[1].position.to_string(), "1");
        assert!(matches!(g.play_out([&Strategy::empty(0), &left], 3), Err(GameError::Undefined { .. })));
    }

    #[test]
    fn unreachable_positions() {
        let f = Formula::parse("E v1/{} (v0=v1)", 2).unwrap();
        let g = Game::new(&eq2(), &f).unwrap();
        let sp = g.space().clone();
        let team = sp.parse_team("00,01").unwrap();
        let reach = g.reachable_positions(team);
        let pos = |p: &str, v: &str, e: u8| GamePosition {
            position: p.parse().unwrap(),
            valuation: sp.parse_valuation(v).unwrap(),
            verifier: e,
        };
        assert!(!reach.contains(&pos("ε", "00", 0)));
        assert!(!reach.contains(&pos("3", "11", 1)));
        assert!(!reach.contains(&pos("3", "10", 1)));
        assert!(reach.contains(&pos("3", "01", 1)));
        for p in &reach {
            assert_eq!(p.verifier == 1, p.position.polarity() == Polarity::Pos);
        }
    }

    #[test]
    fn guard() {
        let f = Formula::parse("E v0/{} E v1/{} (v0=v1)", 2).unwrap();
        let g = Game::new(&eq2(), &f).unwrap();
        assert_eq!(g.strategy_space_log2(1), 8.0);
        assert!(matches!(g.solve(full(2), 1, 4.0), Err(GameError::TooLarge { .. })));
    }
}
