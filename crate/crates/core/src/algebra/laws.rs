//! A battery of equational and order laws, checked over every tuple of a
//! finite element set and every admissible choice of indices.
//!
//! Laws marked [`Expect::Fails`] are the unrestricted forms whose side
//! conditions cannot be dropped; a report for one of them is satisfactory
//! only when a counterexample turns up.

use std::fmt;

use super::{AlgebraContext, Element};
use crate::model::IndexSet;
use crate::par::Exec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Expect {
    Holds,
    Fails,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arity {
    /// Checked once, on constants only.
    Const,
    One,
    Two,
    Three,
    /// Checked once, on the whole element set.
    Set,
}

type Check = fn(&Env, &[&Element], &mut u64) -> Result<(), String>;
type SetCheck = fn(&Env, &[Element], &mut u64) -> Result<(), String>;

#[derive(Clone, Copy)]
enum Body {
    Tuple(Check),
    Set(SetCheck),
}

#[derive(Clone, Copy)]
pub struct Law {
    pub id: &'static str,
    pub arity: Arity,
    pub expect: Expect,
    pub summary: &'static str,
    body: Body,
}

impl fmt::Debug for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Law").field("id", &self.id).field("expect", &self.expect).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawReport {
    pub id: &'static str,
    pub expect: Expect,
    /// Admissible instances examined.
    pub instances: u64,
    pub counterexample: Option<String>,
}

impl LawReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }

    /// Whether the outcome matches the expectation.
    pub fn as_expected(&self) -> bool {
        self.holds() == (self.expect == Expect::Holds)
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.holds() { "holds" } else { "fails" };
        let want = match self.expect {
            Expect::Holds => "expected to hold",
            Expect::Fails => "expected to fail",
        };
        write!(f, "{} {} ({} instances, {})", self.id, verdict, self.instances, want)?;
        if let Some(c) = &self.counterexample {
            write!(f, "\n  {}", c.replace('\n', "\n  "))?;
        }
        Ok(())
    }
}

/// Shared constants and shorthands for the checks.
pub struct Env<'a> {
    pub ctx: &'a AlgebraContext,
    js: Vec<IndexSet>,
    full: IndexSet,
    zero: Element,
    one: Element,
    omega: Element,
    mho: Element,
}

impl<'a> Env<'a> {
    pub fn new(ctx: &'a AlgebraContext) -> Env<'a> {
        Env {
            ctx,
            js: ctx.index_sets(),
            full: IndexSet::full(ctx.nvars()),
            zero: ctx.zero(),
            one: ctx.one(),
            omega: ctx.omega(),
            mho: ctx.mho(),
        }
    }

    fn s(&self, j: IndexSet, x: &Element, y: &Element) -> Element {
        self.ctx.sum(j, x, y)
    }

    fn p(&self, j: IndexSet, x: &Element, y: &Element) -> Element {
        self.ctx.prod(j, x, y)
    }

    fn c(&self, n: usize, j: IndexSet, x: &Element) -> Element {
        self.ctx.cyl(n, j, x)
    }

    fn cd(&self, n: usize, j: IndexSet, x: &Element) -> Element {
        self.ctx.dual_cyl(n, j, x)
    }

    fn vars(&self) -> std::ops::Range<usize> {
        0..self.ctx.nvars()
    }

    fn pairs(&self) -> impl Iterator<Item = (IndexSet, IndexSet)> + '_ {
        self.js.iter().flat_map(move |&j| self.js.iter().map(move |&k| (j, k)))
    }

    /// `C_{0,J₀} … C_{N−1,J_{N−1}}(X)`, innermost index applied first.
    fn chain(&self, js: &[IndexSet], x: &Element) -> Element {
        js.iter()
            .enumerate()
            .rev()
            .fold(x.clone(), |acc, (n, &j)| self.c(n, j, &acc))
    }

    /// Every assignment of an index set to each variable.
    fn index_tuples(&self) -> Vec<Vec<IndexSet>> {
        let n = self.ctx.nvars();
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|t| {
                    self.js.iter().map(move |&j| {
                        let mut t = t.clone();
                        t.push(j);
                        t
                    })
                })
                .collect();
        }
        out
    }

    fn name(&self, x: &Element) -> String {
        let named = [
            (&self.zero, "0"),
            (&self.one, "1"),
            (&self.omega, "Ω"),
            (&self.mho, "℧"),
        ];
        named
            .iter()
            .find(|(e, _)| *e == x)
            .map(|(_, n)| n.to_string())
            .unwrap_or_else(|| self.ctx.render(x))
    }
}

macro_rules! holds {
    ($n:expr, $cond:expr, $($fmt:tt)*) => {{
        *$n += 1;
        if !$cond {
            return Err(format!($($fmt)*));
        }
    }};
}

fn ok() -> Result<(), String> {
    Ok(())
}

fn commutativity(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y) = (t[0], t[1]);
    for &j in &e.js {
        holds!(n, e.s(j, x, y) == e.s(j, y, x), "X +_J Y ≠ Y +_J X at J={j}");
        holds!(n, e.p(j, x, y) == e.p(j, y, x), "X ·_J Y ≠ Y ·_J X at J={j}");
    }
    ok()
}

fn associativity_jj(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y, z) = (t[0], t[1], t[2]);
    for &j in &e.js {
        holds!(n, e.s(j, &e.s(j, x, y), z) == e.s(j, x, &e.s(j, y, z)), "+ not associative at J={j}");
        holds!(n, e.p(j, &e.p(j, x, y), z) == e.p(j, x, &e.p(j, y, z)), "· not associative at J={j}");
    }
    ok()
}

fn associativity_jk(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y, z) = (t[0], t[1], t[2]);
    for (j, k) in e.pairs().filter(|(j, k)| j.is_subset(*k)) {
        let l = e.s(k, &e.s(j, x, y), z);
        let r = e.s(j, x, &e.s(k, y, z));
        holds!(n, l.leq_plus(&r) && l.minus == r.minus, "(X +_J Y) +_K Z vs X +_J (Y +_K Z) at J={j} K={k}");
        let l = e.p(k, &e.p(j, x, y), z);
        let r = e.p(j, x, &e.p(k, y, z));
        holds!(n, l.plus == r.plus && l.leq_minus(&r), "(X ·_J Y) ·_K Z vs X ·_J (Y ·_K Z) at J={j} K={k}");
    }
    ok()
}

fn associativity_mixed(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y, z) = (t[0], t[1], t[2]);
    for (j, k) in e.pairs() {
        let l = e.s(k, &e.s(j, x, y), z);
        let r = e.s(j, x, &e.s(k, y, z));
        holds!(
            n,
            l == r,
            "(X +_J Y) +_K Z ≠ X +_J (Y +_K Z) at J={j} K={k}\nleft  {}\nright {}",
            e.ctx.render(&l),
            e.ctx.render(&r)
        );
    }
    ok()
}

fn bounds(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let x = t[0];
    for &j in &e.js {
        holds!(n, e.s(j, x, &e.zero) == *x, "X +_J 0 ≠ X at J={j}");
        holds!(n, e.p(j, x, &e.one) == *x, "X ·_J 1 ≠ X at J={j}");
        let absorbing = e.p(j, x, &e.zero) == e.zero && e.s(j, x, &e.one) == e.one;
        holds!(n, absorbing == x.is_rooted(), "0 and 1 absorb at J={j} iff X rooted");
    }
    ok()
}

fn fixed_constants(e: &Env, _: &[&Element], n: &mut u64) -> Result<(), String> {
    for w in [&e.omega, &e.mho] {
        holds!(n, w.neg() == *w, "∼{} ≠ {}", e.name(w), e.name(w));
        for &j in &e.js {
            holds!(n, e.s(j, w, w) == *w, "{0} +_J {0} ≠ {0} at J={j}", e.name(w));
            holds!(n, e.p(j, w, w) == *w, "{0} ·_J {0} ≠ {0} at J={j}", e.name(w));
        }
    }
    ok()
}

fn omega_sandwich(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y) = (t[0], t[1]);
    if !(x.is_double_suit() && y.is_double_suit() && x.leq(&e.omega) && e.omega.leq(y)) {
        return ok();
    }
    for &j in &e.js {
        holds!(n, e.p(j, x, y) == *x, "X ·_J Y ≠ X at J={j}");
        holds!(n, e.s(j, x, y) == *y, "X +_J Y ≠ Y at J={j}");
    }
    ok()
}

fn rooted_plus(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y) = (t[0], t[1]);
    if !y.is_rooted() {
        return ok();
    }
    for &j in &e.js {
        holds!(n, x.plus.is_subset(&e.s(j, x, y).plus), "X⁺ ⊄ (X +_J Y)⁺ at J={j}");
        holds!(n, x.minus.is_subset(&e.p(j, x, y).minus), "X⁻ ⊄ (X ·_J Y)⁻ at J={j}");
    }
    ok()
}

fn rooted_n_union(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y) = (t[0], t[1]);
    if !(x.is_rooted() && y.is_rooted()) {
        return ok();
    }
    holds!(n, e.s(e.full, x, y).plus == x.plus.union(&y.plus), "(X +_N Y)⁺ ≠ X⁺ ∪ Y⁺");
    holds!(n, e.p(e.full, x, y).minus == x.minus.union(&y.minus), "(X ·_N Y)⁻ ≠ X⁻ ∪ Y⁻");
    ok()
}

fn absorption_jk(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y) = (t[0], t[1]);
    if !(x.is_rooted() && y.is_rooted()) {
        return ok();
    }
    for (j, k) in e.pairs() {
        let a = e.s(j, x, &e.p(k, x, y));
        holds!(n, x.leq_plus(&a) && x.minus == a.minus, "X vs X +_J (X ·_K Y) at J={j} K={k}");
        let b = e.p(j, x, &e.s(k, x, y));
        holds!(n, x.plus == b.plus && x.leq_minus(&b), "X vs X ·_J (X +_K Y) at J={j} K={k}");
    }
    ok()
}

fn absorption_general(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y) = (t[0], t[1]);
    if !(x.is_rooted() && y.is_rooted()) {
        return ok();
    }
    for (j, k) in e.pairs() {
        let a = e.s(j, x, &e.s(k, x, y));
        holds!(
            n,
            a == e.s(k, x, y),
            "X +_J (X +_K Y) ≠ X +_K Y at J={j} K={k}\nvalue {}",
            e.ctx.render(&a)
        );
        holds!(n, e.s(j, x, &e.p(k, x, y)) == *x, "X +_J (X ·_K Y) ≠ X at J={j} K={k}");
        holds!(n, e.p(j, x, &e.s(k, x, y)) == *x, "X ·_J (X +_K Y) ≠ X at J={j} K={k}");
    }
    ok()
}

fn flat_absorption(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y) = (t[0], t[1]);
    if !(x.is_rooted() && y.is_rooted()) {
        return ok();
    }
    for (j, k) in e.pairs() {
        if x.is_flat() {
            holds!(n, e.s(j, x, &e.p(k, x, y)) == *x, "X +_J (X ·_K Y) ≠ X at J={j} K={k}");
        }
        if x.neg().is_flat() {
            holds!(n, e.p(j, x, &e.s(k, x, y)) == *x, "X ·_J (X +_K Y) ≠ X at J={j} K={k}");
        }
    }
    ok()
}

fn absorption_nj(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y) = (t[0], t[1]);
    if !(x.is_rooted() && y.is_rooted()) {
        return ok();
    }
    for &j in &e.js {
        holds!(n, e.s(e.full, x, &e.p(j, x, y)) == *x, "X +_N (X ·_J Y) ≠ X at J={j}");
        holds!(n, e.p(e.full, x, &e.s(j, x, y)) == *x, "X ·_N (X +_J Y) ≠ X at J={j}");
    }
    ok()
}

fn order_agreement(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y) = (t[0], t[1]);
    if !(x.is_rooted() && y.is_rooted()) {
        return ok();
    }
    let le = x.leq(y);
    holds!(n, le == (e.s(e.full, x, y) == *y), "X ≤ Y disagrees with X +_N Y = Y");
    holds!(n, le == (e.p(e.full, x, y) == *x), "X ≤ Y disagrees with X ·_N Y = X");
    ok()
}

fn rooted_bounds(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let x = t[0];
    if x.is_rooted() {
        holds!(n, e.zero.leq(x) && x.leq(&e.one), "not 0 ≤ X ≤ 1");
    }
    ok()
}

fn monotone_index(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y) = (t[0], t[1]);
    for (j, k) in e.pairs().filter(|(j, k)| j.is_subset(*k)) {
        holds!(n, e.s(k, x, y).leq(&e.s(j, x, y)), "X +_K Y ≰ X +_J Y at J={j} K={k}");
        holds!(n, e.p(j, x, y).leq(&e.p(k, x, y)), "X ·_J Y ≰ X ·_K Y at J={j} K={k}");
    }
    ok()
}

fn monotone_ops(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y, z) = (t[0], t[1], t[2]);
    if !x.leq(y) {
        return ok();
    }
    holds!(n, y.neg().leq(&x.neg()), "∼Y ≰ ∼X");
    for &j in &e.js {
        holds!(n, e.s(j, x, z).leq(&e.s(j, y, z)), "X +_J Z ≰ Y +_J Z at J={j}");
        holds!(n, e.s(j, z, x).leq(&e.s(j, z, y)), "Z +_J X ≰ Z +_J Y at J={j}");
        holds!(n, e.p(j, x, z).leq(&e.p(j, y, z)), "X ·_J Z ≰ Y ·_J Z at J={j}");
        holds!(n, e.p(j, z, x).leq(&e.p(j, z, y)), "Z ·_J X ≰ Z ·_J Y at J={j}");
    }
    ok()
}

fn order_chain(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let x = t[0];
    if !x.is_rooted() {
        return ok();
    }
    let none = IndexSet::EMPTY;
    holds!(n, e.p(e.full, x, x) == *x && e.s(e.full, x, x) == *x, "X ·_N X = X = X +_N X fails");
    for &j in &e.js {
        holds!(n, e.p(none, x, x).leq(&e.p(j, x, x)), "X ·_∅ X ≰ X ·_J X at J={j}");
        holds!(n, e.p(j, x, x).leq(x), "X ·_J X ≰ X at J={j}");
        holds!(n, x.leq(&e.s(j, x, x)), "X ≰ X +_J X at J={j}");
        holds!(n, e.s(j, x, x).leq(&e.s(none, x, x)), "X +_J X ≰ X +_∅ X at J={j}");
    }
    ok()
}

fn order_negation(_: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y) = (t[0], t[1]);
    holds!(n, x.leq(y) == y.neg().leq(&x.neg()), "X ≤ Y disagrees with ∼Y ≤ ∼X");
    ok()
}

fn distributivity_jk(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y, z) = (t[0], t[1], t[2]);
    if !x.is_double_suit() {
        return ok();
    }
    for (j, k) in e.pairs() {
        let l = e.p(j, x, &e.s(k, y, z));
        let r = e.s(k, &e.p(j, x, y), &e.p(j, x, z));
        holds!(n, l.leq_plus(&r) && l.leq_minus(&r), "X ·_J (Y +_K Z) ⊄ (X ·_J Y) +_K (X ·_J Z) at J={j} K={k}");
        let l = e.s(j, x, &e.p(k, y, z));
        let r = e.p(k, &e.s(j, x, y), &e.s(j, x, z));
        holds!(n, l.leq_plus(&r) && l.leq_minus(&r), "X +_J (Y ·_K Z) ⊄ (X +_J Y) ·_K (X +_J Z) at J={j} K={k}");
    }
    ok()
}

fn distributivity_jn(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y, z) = (t[0], t[1], t[2]);
    if !(x.is_rooted() && y.is_rooted() && z.is_rooted()) {
        return ok();
    }
    let nn = e.full;
    for &j in &e.js {
        let l = e.p(j, x, &e.s(nn, y, z));
        let r = e.s(nn, &e.p(j, x, y), &e.p(j, x, z));
        holds!(n, l.plus == r.plus, "X ·_J (Y +_N Z) ≠⁺ (X ·_J Y) +_N (X ·_J Z) at J={j}");
        let l = e.p(nn, x, &e.s(j, y, z));
        let r = e.s(j, &e.p(nn, x, y), &e.p(nn, x, z));
        holds!(n, l.minus == r.minus, "X ·_N (Y +_K Z) ≠⁻ (X ·_N Y) +_K (X ·_N Z) at K={j}");
        let l = e.s(nn, x, &e.p(j, y, z));
        let r = e.p(j, &e.s(nn, x, y), &e.s(nn, x, z));
        holds!(n, l.plus == r.plus, "X +_N (Y ·_K Z) ≠⁺ (X +_N Y) ·_K (X +_N Z) at K={j}");
        let l = e.s(j, x, &e.p(nn, y, z));
        let r = e.p(nn, &e.s(j, x, y), &e.s(j, x, z));
        holds!(n, l.minus == r.minus, "X +_J (Y ·_N Z) ≠⁻ (X +_J Y) ·_N (X +_J Z) at J={j}");
    }
    ok()
}

fn distributivity_general(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y, z) = (t[0], t[1], t[2]);
    if !(x.is_double_suit() && y.is_double_suit() && z.is_double_suit()) {
        return ok();
    }
    for (j, k) in e.pairs() {
        let l = e.p(j, x, &e.s(k, y, z));
        let r = e.s(k, &e.p(j, x, y), &e.p(j, x, z));
        holds!(
            n,
            l == r,
            "X ·_J (Y +_K Z) ≠ (X ·_J Y) +_K (X ·_J Z) at J={j} K={k}\nleft  {}\nright {}",
            e.ctx.render(&l),
            e.ctx.render(&r)
        );
    }
    ok()
}

fn de_morgan_pairs(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y) = (t[0], t[1]);
    if !(x.is_rooted() && y.is_rooted()) {
        return ok();
    }
    let nn = e.full;
    holds!(n, e.s(nn, x, y) == e.s(nn, y, x), "join not commutative");
    holds!(n, e.p(nn, x, y) == e.p(nn, y, x), "meet not commutative");
    holds!(n, e.s(nn, x, &e.p(nn, x, y)) == *x, "x ∨ (x ∧ y) ≠ x");
    holds!(n, e.p(nn, x, &e.s(nn, x, y)) == *x, "x ∧ (x ∨ y) ≠ x");
    holds!(n, e.s(nn, x, &e.zero) == *x && e.p(nn, x, &e.one) == *x, "0 or 1 not neutral");
    holds!(n, e.s(nn, x, &e.one) == e.one && e.p(nn, x, &e.zero) == e.zero, "0 or 1 not absorbing");
    holds!(n, x.neg().neg() == *x, "∼∼x ≠ x");
    holds!(n, e.s(nn, x, y).neg() == e.p(nn, &x.neg(), &y.neg()), "∼(x ∨ y) ≠ ∼x ∧ ∼y");
    ok()
}

fn de_morgan_triples(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y, z) = (t[0], t[1], t[2]);
    if !(x.is_rooted() && y.is_rooted() && z.is_rooted()) {
        return ok();
    }
    let nn = e.full;
    let (sxy, syz) = (e.s(nn, x, y), e.s(nn, y, z));
    let (pxy, pyz, pxz) = (e.p(nn, x, y), e.p(nn, y, z), e.p(nn, x, z));
    holds!(n, e.s(nn, &sxy, z) == e.s(nn, x, &syz), "join not associative");
    holds!(n, e.p(nn, &pxy, z) == e.p(nn, x, &pyz), "meet not associative");
    holds!(n, e.p(nn, x, &syz) == e.s(nn, &pxy, &pxz), "x ∧ (y ∨ z) ≠ (x ∧ y) ∨ (x ∧ z)");
    holds!(
        n,
        e.s(nn, x, &pyz) == e.p(nn, &sxy, &e.s(nn, x, z)),
        "x ∨ (y ∧ z) ≠ (x ∨ y) ∧ (x ∨ z)"
    );
    ok()
}

fn kleene(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y) = (t[0], t[1]);
    if !(x.is_double_suit() && y.is_double_suit()) {
        return ok();
    }
    holds!(n, e.p(e.full, x, &x.neg()).leq(&e.s(e.full, y, &y.neg())), "x ∧ ∼x ≰ y ∨ ∼y");
    ok()
}

fn excluded_middle_bound(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y) = (t[0], t[1]);
    if !(x.is_double_suit() && y.is_double_suit()) {
        return ok();
    }
    for (j, k) in e.pairs() {
        holds!(n, e.p(j, x, &x.neg()).leq(&e.s(k, y, &y.neg())), "X ·_J ∼X ≰ Y +_K ∼Y at J={j} K={k}");
    }
    ok()
}

fn complementation(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let x = t[0];
    let shape = x.plus.union(&x.minus).is_full() && x.plus.intersection(&x.minus).is_bottom();
    holds!(n, (e.s(e.full, x, &x.neg()) == e.one) == shape, "X +_N ∼X = 1 disagrees with the set condition");
    holds!(n, (e.p(e.full, x, &x.neg()) == e.zero) == shape, "X ·_N ∼X = 0 disagrees with the set condition");
    ok()
}

fn suited_complementation(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let x = t[0];
    if x.is_double_suit() {
        let bound = *x == e.zero || *x == e.one;
        holds!(n, (e.s(e.full, x, &x.neg()) == e.one) == bound, "X +_N ∼X = 1 but X ∉ {{0,1}} or conversely");
    }
    ok()
}

fn not_complemented(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y) = (t[0], t[1]);
    if e.s(e.full, x, y) == e.one && e.p(e.full, x, y) == e.zero {
        let covered = x.plus.union(&y.plus).is_full() && x.minus.union(&y.minus).is_full();
        let disjoint = x.plus.intersection(&y.plus).is_bottom() && x.minus.intersection(&y.minus).is_bottom();
        holds!(n, covered && disjoint, "complementary pair without the partition shape");
    }
    ok()
}

fn suited_not_complemented(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y) = (t[0], t[1]);
    if x.is_double_suit() && y.is_double_suit() {
        let comp = e.s(e.full, x, y) == e.one && e.p(e.full, x, y) == e.zero;
        let bounds = (*x == e.zero && *y == e.one) || (*x == e.one && *y == e.zero);
        holds!(n, comp == bounds, "complementary double suits other than 0 and 1");
    }
    ok()
}

fn omega_mho_complements(e: &Env, _: &[&Element], n: &mut u64) -> Result<(), String> {
    holds!(n, e.s(e.full, &e.omega, &e.mho) == e.one, "Ω +_N ℧ ≠ 1");
    holds!(n, e.p(e.full, &e.omega, &e.mho) == e.zero, "Ω ·_N ℧ ≠ 0");
    ok()
}

fn complementation_classical(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let x = t[0];
    if x.is_rooted() {
        holds!(n, e.s(e.full, x, &x.neg()) == e.one, "X +_N ∼X ≠ 1");
    }
    ok()
}

fn c1(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let x = t[0];
    for m in e.vars() {
        for &j in &e.js {
            holds!(n, e.c(m, j, &e.zero) == e.zero, "C_{{{m},{j}}}(0) ≠ 0");
            holds!(n, e.c(m, j, &e.one) == e.one, "C_{{{m},{j}}}(1) ≠ 1");
            holds!(n, e.cd(m, j, &e.one) == e.one, "dual C_{{{m},{j}}}(1) ≠ 1");
            holds!(n, e.cd(m, j, &e.zero) == e.zero, "dual C_{{{m},{j}}}(0) ≠ 0");
            for w in [&e.omega, &e.mho] {
                holds!(n, e.c(m, j, w) == *w && e.cd(m, j, w) == *w, "C_{{{m},{j}}} moves {}", e.name(w));
            }
            if x.is_double_suit() {
                holds!(n, (e.c(m, j, x) == e.zero) == (*x == e.zero), "C_{{{m},{j}}}(X) = 0 iff X = 0 fails");
            }
        }
    }
    ok()
}

fn c2(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let x = t[0];
    for m in e.vars() {
        for &j in &e.js {
            let cx = e.c(m, j, x);
            if !j.contains(m) {
                for &k in &e.js {
                    holds!(n, e.p(k, x, &cx).plus == x.plus, "(X ·_K C_{{{m},{j}}}X)⁺ ≠ X⁺ at K={k}");
                }
            }
            if x.minus.is_suit() {
                holds!(n, e.p(e.full, x, &cx).minus == x.minus, "(X ·_N C_{{{m},{j}}}X)⁻ ≠ X⁻");
            }
        }
        if x.is_double_suit() {
            holds!(n, e.p(e.full, x, &e.c(m, IndexSet::EMPTY, x)) == *x, "X ·_N C_{{{m},∅}}X ≠ X");
        }
    }
    ok()
}

fn c2_unconditional(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let x = t[0];
    for m in e.vars() {
        for (j, k) in e.pairs() {
            let v = e.p(k, x, &e.c(m, j, x));
            holds!(
                n,
                v.plus == x.plus,
                "(X ·_K C_{{{m},{j}}}X)⁺ ≠ X⁺ at K={k}\nvalue {}",
                e.ctx.render(&v)
            );
        }
    }
    ok()
}

fn cd_order(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let x = t[0];
    if !x.is_double_suit() {
        return ok();
    }
    for m in e.vars() {
        for &j in e.js.iter().filter(|j| !j.contains(m)) {
            holds!(n, e.cd(m, j, x).leq(x), "dual C_{{{m},{j}}}X ≰ X");
            holds!(n, x.leq(&e.c(m, j, x)), "X ≰ C_{{{m},{j}}}X");
        }
    }
    ok()
}

fn c3_index(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let x = t[0];
    for m in e.vars() {
        for (j, k) in e.pairs().filter(|(j, k)| j.is_subset(*k)) {
            holds!(n, e.c(m, k, x).leq(&e.c(m, j, x)), "C_{{{m},{k}}}X ≰ C_{{{m},{j}}}X");
            holds!(n, e.cd(m, j, x).leq(&e.cd(m, k, x)), "dual C_{{{m},{j}}}X ≰ dual C_{{{m},{k}}}X");
        }
    }
    ok()
}

fn c3_monotone(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y) = (t[0], t[1]);
    if !x.leq(y) {
        return ok();
    }
    for m in e.vars() {
        for &j in &e.js {
            holds!(n, e.c(m, j, x).leq(&e.c(m, j, y)), "C_{{{m},{j}}} not monotone");
            holds!(n, e.cd(m, j, x).leq(&e.cd(m, j, y)), "dual C_{{{m},{j}}} not monotone");
        }
    }
    ok()
}

/// Position of a c3 instance, formatted only on failure.
struct At(usize, IndexSet, IndexSet, IndexSet);

impl fmt::Display for At {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} J={} K={} L={}", self.0, self.1, self.2, self.3)
    }
}

fn c3(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y) = (t[0], t[1]);
    let both = x.is_double_suit() && y.is_double_suit();
    for m in e.vars() {
        for &k in &e.js {
            let cky = e.c(m, k, y);
            for &l in &e.js {
                let inner_arg = e.p(l, x, &cky);
                for &j in &e.js {
                    let cjx = e.c(m, j, x);
                    let lhs = e.c(m, j, &inner_arg);
                    let rhs = e.p(l, &cjx, &cky);
                    let at = At(m, j, k, l);
                    if j.is_subset(k) {
                        let r = e.p(l, &cjx, &e.c(m, j, y));
                        holds!(n, lhs.leq_plus(&r), "part (a) fails at {at}");
                    }
                    if k.contains(m) {
                        holds!(n, lhs.plus == rhs.plus, "part (b) fails at {at}");
                    }
                    if l.contains(m) {
                        holds!(n, rhs.leq_minus(&lhs), "part (c), first inclusion, fails at {at}");
                        for &q in &e.js {
                            holds!(n, lhs.leq_minus(&e.c(m, q, &rhs)), "part (c), second inclusion, fails at {at} P={q}");
                        }
                        if rhs.minus.is_suit() {
                            holds!(n, lhs.minus == rhs.minus, "part (d) fails at {at}");
                        }
                        if both && k.contains(m) {
                            holds!(n, lhs == rhs, "equality for double suits fails at {at}");
                        }
                    }
                }
            }
        }
    }
    ok()
}

fn c3_unconditional(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y) = (t[0], t[1]);
    if !(x.is_double_suit() && y.is_double_suit()) {
        return ok();
    }
    for m in e.vars() {
        for &k in &e.js {
            let cky = e.c(m, k, y);
            for &l in &e.js {
                for &j in &e.js {
                    let lhs = e.c(m, j, &e.p(l, x, &cky));
                    let rhs = e.p(l, &e.c(m, j, x), &cky);
                    holds!(
                        n,
                        lhs == rhs,
                        "C_{{n,J}}(X ·_L C_{{n,K}}Y) ≠ C_{{n,J}}X ·_L C_{{n,K}}Y at n={m} J={j} K={k} L={l}\nleft  {}\nright {}",
                        e.ctx.render(&lhs),
                        e.ctx.render(&rhs)
                    );
                }
            }
        }
    }
    ok()
}

fn c4(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let x = t[0];
    for m in e.vars() {
        for (j, k) in e.pairs() {
            let twice = e.c(m, j, &e.c(m, k, x));
            holds!(n, twice.leq(&e.c(m, j.intersection(k), x)), "C_{{{m},{j}}}C_{{{m},{k}}}X ≰ C_{{{m},J∩K}}X");
            if k.contains(m) {
                holds!(n, twice == e.c(m, k, x), "C_{{{m},{j}}}C_{{{m},{k}}}X ≠ C_{{{m},{k}}}X");
            }
        }
    }
    ok()
}

fn c4_commute(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let x = t[0];
    for a in e.vars() {
        for b in e.vars().filter(|&b| b != a) {
            for (j, k) in e.pairs().filter(|(j, k)| k.contains(a) && j.contains(b)) {
                let l = e.c(a, j, &e.c(b, k, x));
                let r = e.c(b, k, &e.c(a, j, x));
                holds!(n, l == r, "C_{{{a},{j}}}C_{{{b},{k}}}X ≠ C_{{{b},{k}}}C_{{{a},{j}}}X");
            }
        }
    }
    ok()
}

fn c5(e: &Env, _: &[&Element], n: &mut u64) -> Result<(), String> {
    for i in e.vars() {
        for j in e.vars() {
            let d = e.ctx.diag(i, j).expect("in range");
            for &jj in e.js.iter().filter(|s| !s.contains(j)) {
                holds!(n, e.c(i, jj, &d) == e.one, "C_{{{i},{jj}}}(D_{i}{j}) ≠ 1");
            }
        }
    }
    ok()
}

fn c5_unconditional(e: &Env, _: &[&Element], n: &mut u64) -> Result<(), String> {
    for i in e.vars() {
        for j in e.vars() {
            let d = e.ctx.diag(i, j).expect("in range");
            for &jj in &e.js {
                let v = e.c(i, jj, &d);
                holds!(n, v == e.one, "C_{{{i},{jj}}}(D_{i}{j}) ≠ 1\nvalue {}", e.ctx.render(&v));
            }
        }
    }
    ok()
}

fn c6(e: &Env, _: &[&Element], n: &mut u64) -> Result<(), String> {
    let d = |i, j| e.ctx.diag(i, j).expect("in range");
    for i in e.vars() {
        for j in e.vars() {
            for k in e.vars().filter(|&k| k != i && k != j) {
                let inner = e.p(IndexSet::EMPTY, &d(i, k), &d(k, j));
                for &jj in e.js.iter().filter(|s| !s.contains(i) || !s.contains(j)) {
                    holds!(n, e.c(k, jj, &inner) == d(i, j), "C_{{{k},{jj}}}(D_{i}{k} ·_∅ D_{k}{j}) ≠ D_{i}{j}");
                }
            }
        }
    }
    ok()
}

fn c7_pair(e: &Env, x: &Element, i: usize, j: usize, jj: IndexSet, k: IndexSet, l: IndexSet) -> Element {
    let d = e.ctx.diag(i, j).expect("in range");
    e.p(l, &e.c(i, k, &e.p(jj, &d, x)), &e.c(i, k, &e.p(jj, &d, &x.neg())))
}

fn c7_bound(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let x = t[0];
    if !x.is_double_suit() {
        return ok();
    }
    for i in e.vars() {
        for j in e.vars().filter(|&j| j != i) {
            for &jj in &e.js {
                for (k, l) in e.pairs() {
                    let v = c7_pair(e, x, i, j, jj, k, l);
                    holds!(n, v.leq(&e.omega), "bound fails at i={i} j={j} J={jj} K={k} L={l}");
                }
            }
        }
    }
    ok()
}

fn c7_classical(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let x = t[0];
    if !x.is_double_suit() {
        return ok();
    }
    for i in e.vars() {
        for j in e.vars().filter(|&j| j != i) {
            for &jj in &e.js {
                for (k, l) in e.pairs() {
                    let v = c7_pair(e, x, i, j, jj, k, l);
                    holds!(
                        n,
                        v == e.zero,
                        "C_{{i,K}}(D_ij ·_J X) ·_L C_{{i,K}}(D_ij ·_J ∼X) ≠ 0 at i={i} j={j} J={jj} K={k} L={l}\nvalue {}",
                        e.ctx.render(&v)
                    );
                }
            }
        }
    }
    ok()
}

fn cyl_all_rooted(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let x = t[0];
    if !x.is_rooted() {
        return ok();
    }
    let nv = e.ctx.nvars();
    let bottom = e.zero.plus.clone();
    let everything = e.one.plus.clone();
    let all_empty = vec![IndexSet::EMPTY; nv];
    let all_full = vec![e.full; nv];
    let a = e.chain(&all_empty, x);
    holds!(n, a.plus.is_bottom() == x.plus.is_bottom(), "C_{{0,∅}}…(X)⁺ = {{∅}} iff X⁺ = {{∅}} fails");
    let b = e.chain(&all_full, x);
    let s = e.ctx.space();
    let singleton = (0..s.count()).any(|v| x.plus.contains(crate::model::Team::singleton(v)));
    let want = if singleton { &everything } else { &bottom };
    holds!(n, b.plus == *want, "C_{{0,N}}…(X)⁺ is not decided by singletons");
    let top = x.minus.contains(s.full_team());
    let want = if top { &everything } else { &bottom };
    for js in e.index_tuples() {
        holds!(n, e.chain(&js, x).minus == *want, "chain minus part wrong for {js:?}");
    }
    ok()
}

fn cyl_all_suits(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let x = t[0];
    if !x.is_suit_pair() {
        return ok();
    }
    let got = e.chain(&vec![e.full; e.ctx.nvars()], x);
    let want = if *x == e.zero {
        &e.zero
    } else if x.leq(&e.omega) {
        &e.omega
    } else if x.leq(&e.mho) {
        &e.mho
    } else {
        &e.one
    };
    holds!(n, got == *want, "C_{{0,N}}…(X) = {} but expected {}", e.name(&got), e.name(want));
    ok()
}

fn cyl_all_double_suit(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let x = t[0];
    if !x.is_double_suit() {
        return ok();
    }
    let want = if *x == e.zero {
        &e.zero
    } else if x.leq(&e.omega) {
        &e.omega
    } else {
        &e.one
    };
    for js in e.index_tuples() {
        let got = e.chain(&js, x);
        holds!(n, got == *want, "chain {js:?} gives {} but expected {}", e.name(&got), e.name(want));
    }
    ok()
}

fn three_implies_omega(e: &Env, all: &[Element], n: &mut u64) -> Result<(), String> {
    if all.len() <= 2 || !all.iter().all(Element::is_double_suit) {
        return ok();
    }
    holds!(n, all.contains(&e.omega), "a double-suited algebra with {} elements lacks Ω", all.len());
    let full = vec![e.full; e.ctx.nvars()];
    let witness = all
        .iter()
        .any(|x| e.chain(&full, &e.p(e.full, x, &x.neg())) == e.omega);
    holds!(n, witness, "no X with C_{{0,N}}…(X ·_N ∼X) = Ω");
    ok()
}

fn fixed_point_marker(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let x = t[0];
    if !x.is_double_suit() {
        return ok();
    }
    for m in e.vars() {
        for (j, k) in e.pairs() {
            let y = e.c(m, j, &e.p(k, x, &x.neg()));
            holds!(n, y.leq(&y.neg()), "C_{{{m},{j}}}(X ·_{k} ∼X) ≰ its negation");
        }
    }
    ok()
}

fn involution(_: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    holds!(n, t[0].neg().neg() == *t[0], "∼∼X ≠ X");
    ok()
}

fn duality_bridge(e: &Env, t: &[&Element], n: &mut u64) -> Result<(), String> {
    let (x, y) = (t[0], t[1]);
    for &j in &e.js {
        holds!(n, e.p(j, x, y) == e.s(j, &x.neg(), &y.neg()).neg(), "X ·_J Y ≠ ∼(∼X +_J ∼Y) at J={j}");
    }
    ok()
}

macro_rules! law {
    ($id:expr, $arity:ident, $expect:ident, $summary:expr, $f:expr) => {
        Law {
            id: $id,
            arity: Arity::$arity,
            expect: Expect::$expect,
            summary: $summary,
            body: Body::Tuple($f),
        }
    };
}

/// Every law, in a fixed order.
pub fn laws() -> Vec<Law> {
    vec![
        law!("commutativity", Two, Holds, "+_J and ·_J commute", commutativity),
        law!("associativity-jj", Three, Holds, "+_J and ·_J associate", associativity_jj),
        law!("associativity-jk", Three, Holds, "mixed association for J ⊆ K, one side up to ≤", associativity_jk),
        law!("associativity-mixed", Three, Fails, "(X +_J Y) +_K Z = X +_J (Y +_K Z) for all J, K", associativity_mixed),
        law!("bounds", One, Holds, "0 and 1 are neutral; they absorb iff X is rooted", bounds),
        law!("fixed-constants", Const, Holds, "Ω and ℧ are fixed by ∼, +_J, ·_J", fixed_constants),
        law!("omega-sandwich", Two, Holds, "double suits X ≤ Ω ≤ Y give X ·_J Y = X, X +_J Y = Y", omega_sandwich),
        law!("rooted-plus", Two, Holds, "rooted Y enlarges X⁺ under + and X⁻ under ·", rooted_plus),
        law!("rooted-n-union", Two, Holds, "+_N and ·_N are unions on rooted elements", rooted_n_union),
        law!("absorption-jk", Two, Holds, "absorption up to ≤ on one side, rooted", absorption_jk),
        law!("absorption-general", Two, Fails, "absorption and idempotence for all J, K, rooted", absorption_general),
        law!("flat-absorption", Two, Holds, "absorption for flat X, rooted", flat_absorption),
        law!("absorption-nj", Two, Holds, "absorption with outer index N, rooted", absorption_nj),
        law!("order-agreement", Two, Holds, "≤ agrees with the lattice order of +_N, ·_N", order_agreement),
        law!("rooted-bounds", One, Holds, "0 ≤ X ≤ 1 for rooted X", rooted_bounds),
        law!("monotone-index", Two, Holds, "J ⊆ K: X +_K Y ≤ X +_J Y, X ·_J Y ≤ X ·_K Y", monotone_index),
        law!("monotone-ops", Three, Holds, "+_J and ·_J preserve ≤, ∼ reverses it", monotone_ops),
        law!("order-chain", One, Holds, "X ·_∅ X ≤ X ·_J X ≤ X = X +_N X ≤ X +_J X ≤ X +_∅ X", order_chain),
        law!("order-negation", Two, Holds, "X ≤ Y iff ∼Y ≤ ∼X", order_negation),
        law!("distributivity-jk", Three, Holds, "one-sided distributivity for a double suit X", distributivity_jk),
        law!("distributivity-jn", Three, Holds, "half-distributivity with one index N, rooted", distributivity_jn),
        law!("distributivity-general", Three, Fails, "full distributivity for all J, K, double suits", distributivity_general),
        law!("de-morgan-pairs", Two, Holds, "De Morgan axioms in two variables, rooted", de_morgan_pairs),
        law!("de-morgan-triples", Three, Holds, "De Morgan axioms in three variables, rooted", de_morgan_triples),
        law!("kleene", Two, Holds, "x ∧ ∼x ≤ y ∨ ∼y for double suits", kleene),
        law!("excluded-middle-bound", Two, Holds, "X ·_J ∼X ≤ Y +_K ∼Y for double suits", excluded_middle_bound),
        law!("complementation", One, Holds, "X +_N ∼X = 1 iff X⁺, X⁻ partition the teams", complementation),
        law!("suited-complementation", One, Holds, "a double suit has X +_N ∼X = 1 iff X ∈ {0,1}", suited_complementation),
        law!("not-complemented", Two, Holds, "complements partition the teams on both sides", not_complemented),
        law!("suited-not-complemented", Two, Holds, "only 0 and 1 are complementary double suits", suited_not_complemented),
        law!("omega-mho-complements", Const, Holds, "Ω and ℧ are complements", omega_mho_complements),
        law!("complementation-classical", One, Fails, "X +_N ∼X = 1 for every rooted X", complementation_classical),
        law!("c1", One, Holds, "cylindrifications fix 0, 1, Ω, ℧; C(X) = 0 iff X = 0", c1),
        law!("c2", One, Holds, "X ·_K C_{n,J}X agrees with X under the side conditions", c2),
        law!("c2-unconditional", One, Fails, "(X ·_K C_{n,J}X)⁺ = X⁺ for every n, J", c2_unconditional),
        law!("cd-order", One, Holds, "dual C_{n,J}X ≤ X ≤ C_{n,J}X for double suits, n ∉ J", cd_order),
        law!("c3-index", One, Holds, "J ⊆ K: C_{n,K} ≤ C_{n,J} and dually", c3_index),
        law!("c3-monotone", Two, Holds, "C_{n,J} and its dual preserve ≤", c3_monotone),
        law!("c3", Two, Holds, "C_{n,J}(X ·_L C_{n,K}Y) against C_{n,J}X ·_L C_{n,K}Y", c3),
        law!("c3-unconditional", Two, Fails, "C_{n,J}(X ·_L C_{n,K}Y) = C_{n,J}X ·_L C_{n,K}Y always", c3_unconditional),
        law!("c4", One, Holds, "C_{n,J}C_{n,K} ≤ C_{n,J∩K}, equal to C_{n,K} when n ∈ K", c4),
        law!("c4-commute", One, Holds, "C_{m,J}C_{n,K} = C_{n,K}C_{m,J} when m ∈ K, n ∈ J", c4_commute),
        law!("c5", Const, Holds, "C_{i,J}(D_ij) = 1 when j ∉ J", c5),
        law!("c5-unconditional", Const, Fails, "C_{i,J}(D_ij) = 1 for every J", c5_unconditional),
        law!("c6", Const, Holds, "C_{k,J}(D_ik ·_∅ D_kj) = D_ij", c6),
        law!("c7-bound", One, Holds, "C_{i,K}(D_ij ·_J X) ·_L C_{i,K}(D_ij ·_J ∼X) ≤ Ω", c7_bound),
        law!("c7-classical", One, Fails, "the same product equals 0", c7_classical),
        law!("cyl-all-rooted", One, Holds, "full cylindrification chains of rooted elements", cyl_all_rooted),
        law!("cyl-all-suits", One, Holds, "C_{0,N}…C_{N−1,N} of a pair of suits is 0, Ω, ℧ or 1", cyl_all_suits),
        law!("cyl-all-double-suit", One, Holds, "every chain of a double suit is 0, Ω or 1", cyl_all_double_suit),
        Law {
            id: "three-implies-omega",
            arity: Arity::Set,
            expect: Expect::Holds,
            summary: "a double-suited algebra with more than two elements contains Ω",
            body: Body::Set(three_implies_omega),
        },
        law!("fixed-point-marker", One, Holds, "C_{n,J}(X ·_K ∼X) ≤ ∼C_{n,J}(X ·_K ∼X)", fixed_point_marker),
        law!("involution", One, Holds, "∼∼X = X", involution),
        law!("duality-bridge", Two, Holds, "X ·_J Y = ∼(∼X +_J ∼Y)", duality_bridge),
    ]
}

pub fn law(id: &str) -> Option<Law> {
    laws().into_iter().find(|l| l.id == id)
}

/// Runs one law over every tuple drawn from `elements`. The counterexample
/// reported is the first in tuple order, whatever the execution mode.
pub fn check_law(ctx: &AlgebraContext, elements: &[Element], law: &Law, exec: Exec) -> LawReport {
    let env = Env::new(ctx);
    let mut instances = 0;
    let counterexample = match (law.body, law.arity) {
        (Body::Set(f), _) => f(&env, elements, &mut instances).err(),
        (Body::Tuple(f), Arity::Const) => f(&env, &[], &mut instances).err(),
        (Body::Tuple(f), arity) => {
            let k = match arity {
                Arity::One => 1,
                Arity::Two => 2,
                _ => 3,
            };
            let m = elements.len();
            let rows = exec.map_range(m, |i| {
                let mut count = 0;
                let mut idx = vec![i; k];
                let tail = m.pow(k as u32 - 1);
                for r in 0..tail {
                    let mut q = r;
                    for slot in idx.iter_mut().skip(1).rev() {
                        *slot = q % m;
                        q /= m;
                    }
                    let tuple: Vec<&Element> = idx.iter().map(|&a| &elements[a]).collect();
                    if let Err(msg) = f(&env, &tuple, &mut count) {
                        return (count, Some((idx.clone(), msg)));
                    }
                }
                (count, None)
            });
            let mut found = None;
            for (count, cx) in rows {
                instances += count;
                if found.is_none() {
                    found = cx;
                }
            }
            found.map(|(idx, msg)| {
                let names = ["X", "Y", "Z"];
                let mut text = msg;
                for (name, &a) in names.iter().zip(&idx) {
                    text.push_str(&format!("\n{name} = {}", env.name(&elements[a])));
                }
                text
            })
        }
    };
    LawReport {
        id: law.id,
        expect: law.expect,
        instances,
        counterexample,
    }
}

pub fn check_laws(ctx: &AlgebraContext, elements: &[Element], exec: Exec) -> Vec<LawReport> {
    laws().iter().map(|l| check_law(ctx, elements, l, exec)).collect()
}
