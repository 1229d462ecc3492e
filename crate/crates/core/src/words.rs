//! The general localization: zigzag words modulo the four relation families.
//!
//! A word is a path in the zigzag graph, read left to right: `Fwd(u)` walks
//! along `u`, `Bwd(q)` walks back along `q ∈ Σ`. The families are
//!
//! 1. `[Fwd 1_x] ~ ε_x`
//! 2. `[Bwd q, Fwd q] ~ ε_{target q}`
//! 3. `[Fwd q, Bwd q] ~ ε_{source q}`
//! 4. `[Fwd a, Fwd b] ~ [Fwd b∘a]`
//!
//! Each family shortens a word when read left to right, so reduction always
//! terminates, but it is not confluent. Equality is searched for by
//! bidirectional breadth-first search; when Σ admits left fractions the
//! fraction category decides it exactly.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::cat::{CompositionTable, FiniteCategory, Functor, MorId, ObjId, SigmaSet};
use crate::fractions::{build_fraction_category, check_left_fraction_axioms, loc_compatible, FractionCategory, FractionError};
use crate::free::{DirectedGraph, Edge};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Fwd(MorId),
    Bwd(MorId),
}

impl Token {
    pub fn mor(self) -> MorId {
        match self {
            Token::Fwd(m) | Token::Bwd(m) => m,
        }
    }

    pub fn start(self, c: &FiniteCategory) -> ObjId {
        match self {
            Token::Fwd(m) => c.source(m),
            Token::Bwd(m) => c.target(m),
        }
    }

    pub fn end(self, c: &FiniteCategory) -> ObjId {
        match self {
            Token::Fwd(m) => c.target(m),
            Token::Bwd(m) => c.source(m),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("`{0}` is not in sigma and cannot be inverted")]
    NotInSigma(String),
    #[error("token {index} does not start where the word has arrived")]
    NotComposable { index: usize },
    #[error("words have different endpoints")]
    EndpointMismatch,
    #[error(transparent)]
    Fractions(#[from] FractionError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZigzagWord {
    at: ObjId,
    tokens: Vec<Token>,
}

impl ZigzagWord {
    pub fn empty(at: ObjId) -> Self {
        ZigzagWord { at, tokens: Vec::new() }
    }

    /// Checks that backward tokens lie in Σ and that consecutive tokens meet.
    pub fn new(c: &FiniteCategory, s: &SigmaSet, at: ObjId, tokens: Vec<Token>) -> Result<Self, WordError> {
        let mut here = at;
        for (i, t) in tokens.iter().enumerate() {
            if let Token::Bwd(q) = t {
                if !s.contains(*q) {
                    return Err(WordError::NotInSigma(c.mor_name(*q).to_string()));
                }
            }
            if t.start(c) != here {
                return Err(WordError::NotComposable { index: i });
            }
            here = t.end(c);
        }
        Ok(ZigzagWord { at, tokens })
    }

    /// Nonempty word anchored at the start of its first token.
    pub fn from_tokens(c: &FiniteCategory, s: &SigmaSet, tokens: Vec<Token>) -> Result<Self, WordError> {
        let at = tokens.first().expect("nonempty word").start(c);
        Self::new(c, s, at, tokens)
    }

    pub fn source(&self) -> ObjId {
        self.at
    }

    pub fn target(&self, c: &FiniteCategory) -> ObjId {
        self.tokens.last().map_or(self.at, |t| t.end(c))
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Object reached after the first `i` tokens.
    pub fn object_at(&self, c: &FiniteCategory, i: usize) -> ObjId {
        if i == 0 {
            self.at
        } else {
            self.tokens[i - 1].end(c)
        }
    }

    pub fn concat(&self, c: &FiniteCategory, other: &ZigzagWord) -> Result<ZigzagWord, WordError> {
        if self.target(c) != other.at {
            return Err(WordError::EndpointMismatch);
        }
        let mut tokens = self.tokens.clone();
        tokens.extend_from_slice(&other.tokens);
        Ok(ZigzagWord { at: self.at, tokens })
    }

    pub fn display<'a>(&'a self, c: &'a FiniteCategory) -> WordDisplay<'a> {
        WordDisplay { w: self, c }
    }

    fn replaced(&self, c: &FiniteCategory, pos: usize, len: usize, with: &[Token]) -> ZigzagWord {
        let mut tokens = Vec::with_capacity(self.tokens.len() + with.len() - len.min(self.tokens.len()));
        tokens.extend_from_slice(&self.tokens[..pos]);
        tokens.extend_from_slice(with);
        tokens.extend_from_slice(&self.tokens[pos + len..]);
        let at = if pos == 0 && !tokens.is_empty() {
            tokens[0].start(c)
        } else {
            self.at
        };
        ZigzagWord { at, tokens }
    }
}

pub struct WordDisplay<'a> {
    w: &'a ZigzagWord,
    c: &'a FiniteCategory,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.w.tokens.is_empty() {
            return write!(f, "@{}", self.c.obj_name(self.w.at));
        }
        for (i, t) in self.w.tokens.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            match t {
                Token::Fwd(m) => write!(f, "{}", self.c.mor_name(*m))?,
                Token::Bwd(m) => write!(f, "~{}", self.c.mor_name(*m))?,
            }
        }
        Ok(())
    }
}

/// Vertices are the objects; edge `i < |Mor|` is the forward copy of morphism
/// `i`, the remaining edges are backward copies of Σ in canonical order.
pub fn gz_graph(c: &FiniteCategory, s: &SigmaSet) -> DirectedGraph {
    let mut edges: Vec<Edge> = c
        .morphisms()
        .map(|m| Edge {
            name: c.mor_name(m).to_string(),
            source: c.source(m),
            target: c.target(m),
        })
        .collect();
    edges.extend(s.members().map(|q| Edge {
        name: format!("~{}", c.mor_name(q)),
        source: c.target(q),
        target: c.source(q),
    }));
    DirectedGraph::new(c.obj_count(), edges).expect("endpoints are objects")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Identity,
    BackForth,
    ForthBack,
    Composite,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Identity, Family::BackForth, Family::ForthBack, Family::Composite];

    pub fn number(self) -> usize {
        self as usize + 1
    }
}

/// A ground instance `long ~ short` of a relation family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationInstance {
    pub family: Family,
    pub long: ZigzagWord,
    pub short: ZigzagWord,
}

/// All ground instances of the four families, family by family.
pub fn gz_relation_instances(c: &FiniteCategory, s: &SigmaSet) -> Vec<RelationInstance> {
    let mut out = Vec::new();
    for x in c.objects() {
        out.push(RelationInstance {
            family: Family::Identity,
            long: ZigzagWord { at: x, tokens: vec![Token::Fwd(c.identity(x))] },
            short: ZigzagWord::empty(x),
        });
    }
    for q in s.members() {
        out.push(RelationInstance {
            family: Family::BackForth,
            long: ZigzagWord { at: c.target(q), tokens: vec![Token::Bwd(q), Token::Fwd(q)] },
            short: ZigzagWord::empty(c.target(q)),
        });
    }
    for q in s.members() {
        out.push(RelationInstance {
            family: Family::ForthBack,
            long: ZigzagWord { at: c.source(q), tokens: vec![Token::Fwd(q), Token::Bwd(q)] },
            short: ZigzagWord::empty(c.source(q)),
        });
    }
    for a in c.morphisms() {
        for b in c.out_of(c.target(a)) {
            out.push(RelationInstance {
                family: Family::Composite,
                long: ZigzagWord { at: c.source(a), tokens: vec![Token::Fwd(a), Token::Fwd(b)] },
                short: ZigzagWord { at: c.source(a), tokens: vec![Token::Fwd(c.comp(b, a))] },
            });
        }
    }
    out
}

/// Whether `long ~ short` is a ground instance of `family`.
pub fn is_instance(c: &FiniteCategory, s: &SigmaSet, family: Family, long: &[Token], short: &[Token]) -> bool {
    match (family, long, short) {
        (Family::Identity, [Token::Fwd(m)], []) => c.is_identity(*m),
        (Family::BackForth, [Token::Bwd(q), Token::Fwd(r)], []) => q == r && s.contains(*q),
        (Family::ForthBack, [Token::Fwd(q), Token::Bwd(r)], []) => q == r && s.contains(*q),
        (Family::Composite, [Token::Fwd(a), Token::Fwd(b)], [Token::Fwd(h)]) => {
            c.composable(*b, *a) && c.comp(*b, *a) == *h
        }
        _ => false,
    }
}

/// One rewrite: the tokens at `position..position + before.len()` are
/// replaced by `after`. `before`/`after` are the two sides of an instance of
/// `family`, in either orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub family: Family,
    pub position: usize,
    pub before: Vec<Token>,
    pub after: Vec<Token>,
    pub result: ZigzagWord,
}

impl RewriteStep {
    pub fn is_reduction(&self) -> bool {
        self.after.len() < self.before.len()
    }

    fn inverted(&self, start: ZigzagWord) -> RewriteStep {
        RewriteStep {
            family: self.family,
            position: self.position,
            before: self.after.clone(),
            after: self.before.clone(),
            result: start,
        }
    }
}

/// A chain of rewrites from `start` to the last step's result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub start: ZigzagWord,
    pub steps: Vec<RewriteStep>,
}

impl Certificate {
    pub fn end(&self) -> &ZigzagWord {
        self.steps.last().map_or(&self.start, |s| &s.result)
    }

    /// Replays every step, checking it is a ground instance applied in place.
    pub fn validate(&self, c: &FiniteCategory, s: &SigmaSet) -> bool {
        let mut cur = self.start.clone();
        for step in &self.steps {
            let (long, short) = if step.is_reduction() {
                (&step.before, &step.after)
            } else {
                (&step.after, &step.before)
            };
            if !is_instance(c, s, step.family, long, short) {
                return false;
            }
            let end = step.position + step.before.len();
            if end > cur.len() || cur.tokens[step.position..end] != step.before[..] {
                return false;
            }
            // an inserted segment must start where the word is
            if let Some(first) = step.after.first() {
                if first.start(c) != cur.object_at(c, step.position) {
                    return false;
                }
            }
            let next = cur.replaced(c, step.position, step.before.len(), &step.after);
            if ZigzagWord::new(c, s, next.at, next.tokens.clone()).is_err() || next != step.result {
                return false;
            }
            cur = next;
        }
        true
    }

    pub fn lines(&self, c: &FiniteCategory) -> Vec<String> {
        let mut out = vec![format!("  {}", self.start.display(c))];
        for st in &self.steps {
            let dir = if st.is_reduction() { "reduce" } else { "expand" };
            out.push(format!(
                "  = {}    ({dir} by family {} at {})",
                st.result.display(c),
                st.family.number(),
                st.position
            ));
        }
        out
    }

    fn reversed(&self) -> Certificate {
        let mut words = vec![self.start.clone()];
        words.extend(self.steps.iter().map(|s| s.result.clone()));
        let end = words.pop().expect("start");
        let steps = self
            .steps
            .iter()
            .zip(words)
            .rev()
            .map(|(step, prev)| step.inverted(prev))
            .collect();
        Certificate { start: end, steps }
    }

    /// Cuts out every stretch that returns to a word already visited.
    fn without_detours(self) -> Certificate {
        let mut words = vec![self.start.clone()];
        let mut at: HashMap<ZigzagWord, usize> = HashMap::from([(self.start.clone(), 0)]);
        let mut steps: Vec<RewriteStep> = Vec::new();
        for step in self.steps {
            if let Some(&k) = at.get(&step.result) {
                while words.len() > k + 1 {
                    at.remove(&words.pop().expect("nonempty"));
                    steps.pop();
                }
                continue;
            }
            at.insert(step.result.clone(), words.len());
            words.push(step.result.clone());
            steps.push(step);
        }
        Certificate { start: self.start, steps }
    }

    fn then(mut self, other: Certificate) -> Certificate {
        debug_assert_eq!(self.end(), &other.start);
        self.steps.extend(other.steps);
        self
    }
}

/// Order in which [`reduce_word_with`] looks for a redex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionOrder {
    LeftToRight,
    RightToLeft,
}

fn redex_at(c: &FiniteCategory, s: &SigmaSet, w: &ZigzagWord, i: usize) -> Option<(Family, usize, Vec<Token>)> {
    let t = w.tokens[i];
    if let Token::Fwd(m) = t {
        if c.is_identity(m) {
            return Some((Family::Identity, 1, vec![]));
        }
    }
    let u = *w.tokens.get(i + 1)?;
    match (t, u) {
        (Token::Bwd(q), Token::Fwd(r)) if q == r && s.contains(q) => Some((Family::BackForth, 2, vec![])),
        (Token::Fwd(q), Token::Bwd(r)) if q == r && s.contains(q) => Some((Family::ForthBack, 2, vec![])),
        (Token::Fwd(a), Token::Fwd(b)) => Some((Family::Composite, 2, vec![Token::Fwd(c.comp(b, a))])),
        _ => None,
    }
}

/// Applies the families as length-reducing rewrites, leftmost redex first,
/// until none applies.
pub fn reduce_word(c: &FiniteCategory, s: &SigmaSet, w: &ZigzagWord) -> ZigzagWord {
    reduce_word_traced(c, s, w, ReductionOrder::LeftToRight).end().clone()
}

pub fn reduce_word_with(c: &FiniteCategory, s: &SigmaSet, w: &ZigzagWord, order: ReductionOrder) -> ZigzagWord {
    reduce_word_traced(c, s, w, order).end().clone()
}

/// Reduction with the rewrite chain. The chain has at most `w.len()` steps.
pub fn reduce_word_traced(c: &FiniteCategory, s: &SigmaSet, w: &ZigzagWord, order: ReductionOrder) -> Certificate {
    let mut steps = Vec::new();
    let mut cur = w.clone();
    loop {
        let n = cur.len();
        let found = match order {
            ReductionOrder::LeftToRight => (0..n).find_map(|i| redex_at(c, s, &cur, i).map(|r| (i, r))),
            ReductionOrder::RightToLeft => (0..n).rev().find_map(|i| {
                // prefer the pair ending at the rightmost token
                if i > 0 {
                    if let Some(r) = redex_at(c, s, &cur, i - 1).filter(|r| r.1 == 2) {
                        return Some((i - 1, r));
                    }
                }
                redex_at(c, s, &cur, i).filter(|r| r.1 == 1).map(|r| (i, r))
            }),
        };
        let Some((pos, (family, len, after))) = found else {
            break;
        };
        let before = cur.tokens[pos..pos + len].to_vec();
        let next = cur.replaced(c, pos, len, &after);
        steps.push(RewriteStep {
            family,
            position: pos,
            before,
            after,
            result: next.clone(),
        });
        cur = next;
    }
    debug_assert!(steps.len() <= w.len());
    Certificate { start: w.clone(), steps }
}

/// All single rewrites of `w`, in both directions, keeping words of length
/// at most `max_len`.
fn neighbours(c: &FiniteCategory, s: &SigmaSet, w: &ZigzagWord, max_len: usize) -> Vec<RewriteStep> {
    let mut out = Vec::new();
    let n = w.len();
    let push = |out: &mut Vec<RewriteStep>, family, pos: usize, len: usize, after: Vec<Token>| {
        let before = w.tokens[pos..pos + len].to_vec();
        let result = w.replaced(c, pos, len, &after);
        out.push(RewriteStep {
            family,
            position: pos,
            before,
            after,
            result,
        });
    };
    for i in 0..n {
        if let Some((family, len, after)) = redex_at(c, s, w, i) {
            push(&mut out, family, i, len, after);
        }
    }
    if n + 1 <= max_len {
        for i in 0..n {
            // factor a forward token through any intermediate object
            if let Token::Fwd(h) = w.tokens[i] {
                for a in c.out_of(c.source(h)) {
                    for b in c.hom(c.target(a), c.target(h)) {
                        if c.comp(b, a) == h {
                            push(&mut out, Family::Composite, i, 1, vec![Token::Fwd(a), Token::Fwd(b)]);
                        }
                    }
                }
            }
        }
    }
    for i in 0..=n {
        let x = w.object_at(c, i);
        if n + 1 <= max_len {
            push(&mut out, Family::Identity, i, 0, vec![Token::Fwd(c.identity(x))]);
        }
        if n + 2 <= max_len {
            for q in s.members() {
                if c.target(q) == x {
                    push(&mut out, Family::BackForth, i, 0, vec![Token::Bwd(q), Token::Fwd(q)]);
                }
                if c.source(q) == x {
                    push(&mut out, Family::ForthBack, i, 0, vec![Token::Fwd(q), Token::Bwd(q)]);
                }
            }
        }
    }
    out
}

/// Outcome of a bounded search for a rewrite chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Certificate),
    Exhausted { visited: usize, budget_hit: bool },
}

/// Bidirectional breadth-first search between two words.
pub fn bfs_rewrite(
    c: &FiniteCategory,
    s: &SigmaSet,
    from: &ZigzagWord,
    to: &ZigzagWord,
    max_len: usize,
    budget: usize,
) -> SearchOutcome {
    if from == to {
        return SearchOutcome::Found(Certificate { start: from.clone(), steps: vec![] });
    }
    // parent maps: word -> (previous word, step that produced this word)
    type Parents = HashMap<ZigzagWord, Option<(ZigzagWord, RewriteStep)>>;
    let mut seen: [Parents; 2] = [HashMap::new(), HashMap::new()];
    let mut queues = [VecDeque::new(), VecDeque::new()];
    seen[0].insert(from.clone(), None);
    seen[1].insert(to.clone(), None);
    queues[0].push_back(from.clone());
    queues[1].push_back(to.clone());

    let chain = |side: &Parents, mut w: ZigzagWord| -> Certificate {
        let mut steps = Vec::new();
        while let Some(Some((prev, step))) = side.get(&w) {
            steps.push(step.clone());
            w = prev.clone();
        }
        steps.reverse();
        Certificate { start: w, steps }
    };

    let mut visited = 2;
    while !queues[0].is_empty() && !queues[1].is_empty() {
        let side = if queues[0].len() <= queues[1].len() { 0 } else { 1 };
        let layer = std::mem::take(&mut queues[side]);
        for w in layer {
            for step in neighbours(c, s, &w, max_len) {
                let next = step.result.clone();
                if seen[side].contains_key(&next) {
                    continue;
                }
                seen[side].insert(next.clone(), Some((w.clone(), step)));
                visited += 1;
                if seen[1 - side].contains_key(&next) {
                    let a = chain(&seen[0], next.clone());
                    let b = chain(&seen[1], next);
                    return SearchOutcome::Found(a.then(b.reversed()));
                }
                if visited >= budget {
                    return SearchOutcome::Exhausted { visited, budget_hit: true };
                }
                queues[side].push_back(next);
            }
        }
    }
    SearchOutcome::Exhausted { visited, budget_hit: false }
}

pub const DEFAULT_BUDGET: usize = 50_000;

/// How an equality verdict was reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Proven by the rewrite chain.
    Equal(Certificate),
    /// The fraction category identifies the words but no chain was found
    /// within budget.
    EqualByFractions,
    /// The fraction category separates the words.
    Distinct,
    NotProvenEqual { note: String, budget_exhausted: bool },
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal(_) | Verdict::EqualByFractions)
    }
}

/// The word-level decision without materialized certificates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    SameNormalForm,
    Rewritten,
    EqualByFractions,
    Distinct,
    EndpointMismatch,
    NotProvenEqual { budget_exhausted: bool },
}

impl Decision {
    pub fn is_equal(self) -> bool {
        matches!(self, Decision::SameNormalForm | Decision::Rewritten | Decision::EqualByFractions)
    }
}

/// Normal forms already proven equal. Each successful search adds one link
/// to a spanning forest; certificates between members are read off the
/// forest on demand.
#[derive(Default)]
struct Components {
    normal_forms: HashMap<ZigzagWord, Certificate>,
    ids: HashMap<ZigzagWord, usize>,
    words: Vec<ZigzagWord>,
    parent: Vec<usize>,
    links: Vec<Certificate>,
    adjacent: Vec<Vec<(usize, usize)>>,
    failed: HashMap<(usize, usize), bool>,
}

impl Components {
    fn id(&mut self, w: &ZigzagWord) -> usize {
        if let Some(&i) = self.ids.get(w) {
            return i;
        }
        let i = self.words.len();
        self.ids.insert(w.clone(), i);
        self.words.push(w.clone());
        self.parent.push(i);
        self.adjacent.push(Vec::new());
        i
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    /// Records a proven link between two normal forms.
    fn union(&mut self, link: Certificate) {
        let (a, b) = (self.id(&link.start), self.id(link.end()));
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        self.parent[rb] = ra;
        let k = self.links.len();
        self.links.push(link);
        self.adjacent[a].push((b, k));
        self.adjacent[b].push((a, k));
    }

    /// The chain from `a` to `b` through the forest; both must be linked.
    fn path(&self, a: usize, b: usize) -> Certificate {
        let mut prev: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut queue = VecDeque::from([a]);
        prev.insert(a, (a, usize::MAX));
        while let Some(x) = queue.pop_front() {
            if x == b {
                break;
            }
            for &(y, k) in &self.adjacent[x] {
                if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(y) {
                    e.insert((x, k));
                    queue.push_back(y);
                }
            }
        }
        let mut pieces = Vec::new();
        let mut y = b;
        while y != a {
            let (x, k) = prev[&y];
            let link = &self.links[k];
            pieces.push(if link.start == self.words[x] { link.clone() } else { link.reversed() });
            y = x;
        }
        pieces.into_iter().rev().fold(
            Certificate {
                start: self.words[a].clone(),
                steps: vec![],
            },
            |acc, p| acc.then(p),
        )
    }
}

/// A localization presented by zigzag words, with cached normal forms and
/// searches. When `(c, Σ)` admits left fractions the fraction category is
/// built once and used to separate words.
pub struct LocalizedPresentation {
    base: Arc<FiniteCategory>,
    sigma: SigmaSet,
    fractions: Option<(FractionCategory, WordEvaluator)>,
    budget: usize,
    state: Mutex<Components>,
}

impl LocalizedPresentation {
    pub fn new(base: Arc<FiniteCategory>, sigma: SigmaSet) -> Self {
        Self::with_budget(base, sigma, DEFAULT_BUDGET)
    }

    pub fn with_budget(base: Arc<FiniteCategory>, sigma: SigmaSet, budget: usize) -> Self {
        let fractions = check_left_fraction_axioms(&base, &sigma)
            .has_left_fractions()
            .then(|| {
                let frac = build_fraction_category(&base, &sigma).expect("conditions hold");
                let eval = gz_dotted(&base, &sigma, &frac.projection).expect("projection inverts sigma");
                (frac, eval)
            });
        LocalizedPresentation {
            base,
            sigma,
            fractions,
            budget,
            state: Mutex::new(Components::default()),
        }
    }

    pub fn base(&self) -> &Arc<FiniteCategory> {
        &self.base
    }

    pub fn sigma(&self) -> &SigmaSet {
        &self.sigma
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn fractions(&self) -> Option<&FractionCategory> {
        self.fractions.as_ref().map(|(f, _)| f)
    }

    /// Class of a word in the fraction category, if it was built.
    pub fn fraction_class(&self, w: &ZigzagWord) -> Option<MorId> {
        self.fractions.as_ref().map(|(_, e)| e.eval(w))
    }

    /// Left-to-right reduction of `w`, with its rewrite chain.
    pub fn normal_form(&self, w: &ZigzagWord) -> Certificate {
        let mut st = self.state.lock().unwrap();
        Self::normal_form_in(&mut st, &self.base, &self.sigma, w)
    }

    fn normal_form_in(st: &mut Components, c: &FiniteCategory, s: &SigmaSet, w: &ZigzagWord) -> Certificate {
        if let Some(cert) = st.normal_forms.get(w) {
            return cert.clone();
        }
        let cert = reduce_word_traced(c, s, w, ReductionOrder::LeftToRight);
        st.normal_forms.insert(w.clone(), cert.clone());
        cert
    }

    /// Decides equality of two words; see [`LocalizedPresentation::words_equal`].
    pub fn decide(&self, w1: &ZigzagWord, w2: &ZigzagWord) -> Decision {
        self.decide_inner(w1, w2, false).0
    }

    fn decide_inner(&self, w1: &ZigzagWord, w2: &ZigzagWord, want_cert: bool) -> (Decision, Option<Certificate>) {
        let c = &*self.base;
        if w1.source() != w2.source() || w1.target(c) != w2.target(c) {
            return (Decision::EndpointMismatch, None);
        }
        if w1 == w2 {
            return (Decision::SameNormalForm, Some(Certificate { start: w1.clone(), steps: vec![] }));
        }
        if let (Some(k1), Some(k2)) = (self.fraction_class(w1), self.fraction_class(w2)) {
            if k1 != k2 {
                return (Decision::Distinct, None);
            }
        }
        let mut st = self.state.lock().unwrap();
        let r1 = Self::normal_form_in(&mut st, c, &self.sigma, w1);
        let r2 = Self::normal_form_in(&mut st, c, &self.sigma, w2);
        let (n1, n2) = (r1.end().clone(), r2.end().clone());
        if n1 == n2 {
            let cert = want_cert.then(|| r1.then(r2.reversed()).without_detours());
            return (Decision::SameNormalForm, cert);
        }
        let (i1, i2) = (st.id(&n1), st.id(&n2));
        if st.find(i1) != st.find(i2) {
            if let Some(&budget_hit) = st.failed.get(&(i1, i2)) {
                return self.unproven(budget_hit);
            }
            let max_len = w1.len().max(w2.len()) + 4;
            if let Err(budget_hit) = self.link_search(&mut st, &n1, i2, max_len) {
                st.failed.insert((i1, i2), budget_hit);
                st.failed.insert((i2, i1), budget_hit);
                return self.unproven(budget_hit);
            }
        }
        let cert = want_cert.then(|| r1.then(st.path(i1, i2)).then(r2.reversed()).without_detours());
        (Decision::Rewritten, cert)
    }

    /// Breadth-first search from the normal form `from`, reducing every word
    /// reached. A word whose normal form is already known links `from` to
    /// that normal form's component; the search ends once `from` joins the
    /// component of `target`. `Err` reports whether the budget ran out.
    fn link_search(&self, st: &mut Components, from: &ZigzagWord, target: usize, max_len: usize) -> Result<(), bool> {
        let (c, s) = (&*self.base, &self.sigma);
        type Parents = HashMap<ZigzagWord, Option<(ZigzagWord, RewriteStep)>>;
        let chain = |seen: &Parents, mut w: ZigzagWord| -> Certificate {
            let mut steps = Vec::new();
            while let Some(Some((prev, step))) = seen.get(&w) {
                steps.push(step.clone());
                w = prev.clone();
            }
            steps.reverse();
            Certificate { start: w, steps }
        };
        let start = st.id(from);
        let mut seen: Parents = HashMap::new();
        seen.insert(from.clone(), None);
        let mut queue = VecDeque::from([from.clone()]);
        while let Some(w) = queue.pop_front() {
            for step in neighbours(c, s, &w, max_len) {
                let next = step.result.clone();
                if seen.contains_key(&next) {
                    continue;
                }
                seen.insert(next.clone(), Some((w.clone(), step)));
                let reduction = reduce_word_traced(c, s, &next, ReductionOrder::LeftToRight);
                if let Some(&k) = st.ids.get(reduction.end()) {
                    if st.find(k) != st.find(start) {
                        st.union(chain(&seen, next.clone()).then(reduction));
                        if st.find(start) == st.find(target) {
                            return Ok(());
                        }
                    }
                }
                if seen.len() >= self.budget {
                    return Err(true);
                }
                queue.push_back(next);
            }
        }
        Err(false)
    }

    fn unproven(&self, budget_hit: bool) -> (Decision, Option<Certificate>) {
        if self.fractions.is_some() {
            (Decision::EqualByFractions, None)
        } else {
            (
                Decision::NotProvenEqual {
                    budget_exhausted: budget_hit,
                },
                None,
            )
        }
    }

    /// Equality of two words. `Equal` carries a certificate running from `w1`
    /// to `w2`. Words with different endpoints are never equal.
    pub fn words_equal(&self, w1: &ZigzagWord, w2: &ZigzagWord) -> Verdict {
        let (d, cert) = self.decide_inner(w1, w2, true);
        match d {
            Decision::SameNormalForm | Decision::Rewritten => Verdict::Equal(cert.expect("certified")),
            Decision::EqualByFractions => Verdict::EqualByFractions,
            Decision::Distinct => Verdict::Distinct,
            Decision::EndpointMismatch => Verdict::NotProvenEqual {
                note: "words have different endpoints".into(),
                budget_exhausted: false,
            },
            Decision::NotProvenEqual { budget_exhausted } => Verdict::NotProvenEqual {
                note: if budget_exhausted {
                    format!("no rewrite chain within {} nodes", self.budget)
                } else {
                    "no rewrite chain within the length cap".into()
                },
                budget_exhausted,
            },
        }
    }

    /// Every reduction chain and search link found so far; each certificate
    /// handed out is a concatenation of these.
    pub fn component_certificates(&self) -> Vec<Certificate> {
        let st = self.state.lock().unwrap();
        let mut out: Vec<Certificate> = st.normal_forms.values().cloned().collect();
        out.extend(st.links.iter().cloned());
        out
    }
}

pub fn words_equal(
    c: &Arc<FiniteCategory>,
    s: &SigmaSet,
    w1: &ZigzagWord,
    w2: &ZigzagWord,
    budget: usize,
) -> Verdict {
    LocalizedPresentation::with_budget(c.clone(), s.clone(), budget).words_equal(w1, w2)
}

/// `u ↦ [Fwd u]`, identities to the empty word.
pub fn gz_proj(c: &FiniteCategory, u: MorId) -> ZigzagWord {
    if c.is_identity(u) {
        ZigzagWord::empty(c.source(u))
    } else {
        ZigzagWord {
            at: c.source(u),
            tokens: vec![Token::Fwd(u)],
        }
    }
}

/// Evaluates words in the target of a functor that inverts Σ.
#[derive(Clone, Debug)]
pub struct WordEvaluator {
    functor: Functor,
    inverse: Vec<Option<MorId>>,
}

/// The evaluator `Fwd u ↦ F(u)`, `Bwd q ↦ F(q)⁻¹`.
pub fn gz_dotted(c: &FiniteCategory, s: &SigmaSet, f: &Functor) -> Result<WordEvaluator, WordError> {
    if let Err(q) = loc_compatible(f, s) {
        return Err(FractionError::NotLocCompatible(c.mor_name(q).to_string()).into());
    }
    let x = f.target();
    let inverse = c
        .morphisms()
        .map(|q| s.contains(q).then(|| x.inverse(f.mor(q)).expect("checked")))
        .collect();
    Ok(WordEvaluator {
        functor: f.clone(),
        inverse,
    })
}

impl WordEvaluator {
    pub fn functor(&self) -> &Functor {
        &self.functor
    }

    pub fn token(&self, t: Token) -> MorId {
        match t {
            Token::Fwd(u) => self.functor.mor(u),
            Token::Bwd(q) => self.inverse[q.index()].expect("backward tokens are in sigma"),
        }
    }

    pub fn eval(&self, w: &ZigzagWord) -> MorId {
        let x = self.functor.target();
        let start = x.identity(self.functor.ob(w.source()));
        w.tokens().iter().fold(start, |acc, &t| x.comp(self.token(t), acc))
    }
}

/// Morphisms that become invertible in the localization.
pub fn saturation(c: &Arc<FiniteCategory>, s: &SigmaSet) -> Result<SigmaSet, FractionError> {
    let frac = build_fraction_category(c, s)?;
    let l = &frac.category;
    Ok(SigmaSet::new(
        c,
        c.morphisms().filter(|&m| l.inverse(frac.projection.mor(m)).is_some()),
    ))
}

/// The localization at every morphism, checked to be a groupoid.
pub fn groupoid_completion(c: &Arc<FiniteCategory>) -> Result<(Arc<FiniteCategory>, Functor), FractionError> {
    let frac = build_fraction_category(c, &SigmaSet::all(c))?;
    if !frac.category.is_groupoid() {
        return Err(FractionError::Internal("completion is not a groupoid".into()));
    }
    Ok((frac.category.clone(), frac.projection))
}

/// All words of length at most `max_len`, by length then token order.
pub fn enumerate_words(c: &FiniteCategory, s: &SigmaSet, max_len: usize) -> Vec<ZigzagWord> {
    let mut steps: Vec<Vec<Token>> = vec![Vec::new(); c.obj_count()];
    for m in c.morphisms() {
        steps[c.source(m).index()].push(Token::Fwd(m));
    }
    for q in s.members() {
        steps[c.target(q).index()].push(Token::Bwd(q));
    }
    let mut layer: Vec<ZigzagWord> = c.objects().map(ZigzagWord::empty).collect();
    let mut out = layer.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &t in &steps[w.target(c).index()] {
                let mut tokens = w.tokens.clone();
                tokens.push(t);
                next.push(ZigzagWord { at: w.at, tokens });
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Distinct sets of words, for callers that need set semantics.
pub fn word_set(words: &[ZigzagWord]) -> HashSet<&ZigzagWord> {
    words.iter().collect()
}
