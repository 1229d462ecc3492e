//! Enumeration of small finite categories and the test corpus built from it.
//!
//! Categories are enumerated as raw tables: objects `0..n`, identities first,
//! then the non-identity morphisms grouped by hom-set. The composition table
//! is filled by backtracking with associativity pruning.

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cat::{CategoryBuilder, CompositionTable, FiniteCategory, SigmaSet};
use crate::fixtures;
use crate::fractions::check_left_fraction_axioms;

const NONE: usize = usize::MAX;

/// A category as plain index tables. Morphism `i < n_obj` is the identity of
/// object `i`; `comp[g * n + f]` is `g ∘ f` or `NONE`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawCategory {
    pub n_obj: usize,
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    pub comp: Vec<usize>,
}

const OBJECT_NAMES: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

fn mor_name(i: usize) -> String {
    let letters = b"abcdefghijklmnopqrstuvwxyz";
    if i < letters.len() {
        (letters[i] as char).to_string()
    } else {
        format!("z{i:03}")
    }
}

impl RawCategory {
    pub fn n_mor(&self) -> usize {
        self.src.len()
    }

    pub fn compose(&self, g: usize, f: usize) -> usize {
        self.comp[g * self.n_mor() + f]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        m < self.n_obj
    }

    /// Objects are `A, B, ...`; non-identity morphisms `a, b, ...` in index
    /// order, so canonical order agrees with index order.
    pub fn to_category(&self) -> FiniteCategory {
        let mut b = CategoryBuilder::new();
        for x in 0..self.n_obj {
            b.object(OBJECT_NAMES[x]);
        }
        let name = |m: usize| {
            if self.is_identity(m) {
                format!("1_{}", OBJECT_NAMES[m])
            } else {
                mor_name(m - self.n_obj)
            }
        };
        for m in self.n_obj..self.n_mor() {
            b.morphism(&name(m), OBJECT_NAMES[self.src[m]], OBJECT_NAMES[self.tgt[m]]);
        }
        for g in self.n_obj..self.n_mor() {
            for f in self.n_obj..self.n_mor() {
                if self.src[g] == self.tgt[f] {
                    b.compose(&name(g), &name(f), &name(self.compose(g, f)));
                }
            }
        }
        b.build().expect("enumerated tables are categories")
    }

    /// Canonical code up to isomorphism, with Σ membership marked.
    pub fn canonical_code(&self, sigma: &[bool]) -> Vec<usize> {
        let n = self.n_obj;
        let mut best: Option<Vec<usize>> = None;
        let mut perm: Vec<usize> = (0..n).collect();
        permutations(&mut perm, 0, &mut |pi| {
            // group non-identity morphisms by relabelled hom-set
            let mut homs: Vec<Vec<usize>> = vec![Vec::new(); n * n];
            for m in n..self.n_mor() {
                homs[pi[self.src[m]] * n + pi[self.tgt[m]]].push(m);
            }
            let mut choice: Vec<Vec<usize>> = homs.clone();
            hom_orderings(&homs, &mut choice, 0, &mut |order| {
                let mut new_index = vec![0; self.n_mor()];
                for x in 0..n {
                    new_index[x] = pi[x];
                }
                let mut next = n;
                for hom in order {
                    for &m in hom {
                        new_index[m] = next;
                        next += 1;
                    }
                }
                let mut old_of = vec![0; self.n_mor()];
                for (old, &new) in new_index.iter().enumerate() {
                    old_of[new] = old;
                }
                let mut code = Vec::with_capacity(self.n_mor() * (self.n_mor() + 3));
                for &old in &old_of {
                    code.push(pi[self.src[old]]);
                    code.push(pi[self.tgt[old]]);
                    code.push(sigma[old] as usize);
                }
                for &g in &old_of {
                    for &f in &old_of {
                        let h = self.compose(g, f);
                        code.push(if h == NONE { NONE } else { new_index[h] });
                    }
                }
                if best.as_ref().map_or(true, |b| code < *b) {
                    best = Some(code);
                }
            });
        });
        best.expect("at least one relabelling")
    }
}

fn permutations(v: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        visit(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, visit);
        v.swap(k, i);
    }
}

fn hom_orderings(homs: &[Vec<usize>], choice: &mut Vec<Vec<usize>>, k: usize, visit: &mut dyn FnMut(&[Vec<usize>])) {
    if k == homs.len() {
        visit(choice);
        return;
    }
    let mut items = homs[k].clone();
    let len = items.len();
    let mut rec = |p: &[usize], choice: &mut Vec<Vec<usize>>| {
        choice[k] = p.to_vec();
        hom_orderings(homs, choice, k + 1, visit);
    };
    if len <= 1 {
        rec(&items, choice);
        return;
    }
    // permutations of the hom-set
    fn perms(items: &mut Vec<usize>, j: usize, out: &mut Vec<Vec<usize>>) {
        if j == items.len() {
            out.push(items.clone());
            return;
        }
        for i in j..items.len() {
            items.swap(j, i);
            perms(items, j + 1, out);
            items.swap(j, i);
        }
    }
    let mut all = Vec::new();
    perms(&mut items, 0, &mut all);
    for p in all {
        rec(&p, choice);
    }
}

/// Search effort accounting for enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub limit: usize,
    pub used: usize,
}

impl Budget {
    pub fn new(limit: usize) -> Self {
        Budget { limit, used: 0 }
    }

    fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.limit
    }

    pub fn exhausted(&self) -> bool {
        self.used > self.limit
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Enumeration {
    Complete,
    Stopped,
    BudgetExhausted,
}

/// Hom-set size profiles: non-identity counts per ordered object pair.
fn profiles(n_obj: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(slots: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == slots - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for c in (0..=left).rev() {
            cur.push(c);
            rec(slots, left - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n_obj == 0 {
        if k == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(n_obj * n_obj, k, &mut Vec::new(), &mut out);
    out
}

struct TableSearch<'a> {
    raw: RawCategory,
    pairs: Vec<(usize, usize)>,
    candidates: Vec<Vec<usize>>,
    budget: &'a mut Budget,
}

impl TableSearch<'_> {
    fn new<'b>(n_obj: usize, profile: &[usize], budget: &'b mut Budget) -> TableSearch<'b> {
        let mut src: Vec<usize> = (0..n_obj).collect();
        let mut tgt: Vec<usize> = (0..n_obj).collect();
        for x in 0..n_obj {
            for y in 0..n_obj {
                for _ in 0..profile[x * n_obj + y] {
                    src.push(x);
                    tgt.push(y);
                }
            }
        }
        let n = src.len();
        let mut comp = vec![NONE; n * n];
        for m in 0..n {
            comp[tgt[m] * n + m] = m;
            comp[m * n + src[m]] = m;
        }
        let mut pairs = Vec::new();
        let mut candidates = Vec::new();
        for g in n_obj..n {
            for f in n_obj..n {
                if src[g] == tgt[f] {
                    pairs.push((g, f));
                    candidates.push((0..n).filter(|&m| src[m] == src[f] && tgt[m] == tgt[g]).collect());
                }
            }
        }
        TableSearch {
            raw: RawCategory { n_obj, src, tgt, comp },
            pairs,
            candidates,
            budget,
        }
    }

    fn consistent(&self) -> bool {
        let r = &self.raw;
        let n = r.n_mor();
        for f in r.n_obj..n {
            for g in r.n_obj..n {
                if r.src[g] != r.tgt[f] {
                    continue;
                }
                let gf = r.compose(g, f);
                if gf == NONE {
                    continue;
                }
                for h in r.n_obj..n {
                    if r.src[h] != r.tgt[g] {
                        continue;
                    }
                    let hg = r.compose(h, g);
                    if hg == NONE {
                        continue;
                    }
                    let (lhs, rhs) = (r.compose(h, gf), r.compose(hg, f));
                    if lhs != NONE && rhs != NONE && lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn run(
        &mut self,
        k: usize,
        order: &mut dyn FnMut(&mut Vec<usize>),
        visit: &mut dyn FnMut(&RawCategory) -> ControlFlow<()>,
    ) -> Enumeration {
        if k == self.pairs.len() {
            return match visit(&self.raw) {
                ControlFlow::Continue(()) => Enumeration::Complete,
                ControlFlow::Break(()) => Enumeration::Stopped,
            };
        }
        let (g, f) = self.pairs[k];
        let n = self.raw.n_mor();
        let mut cands = self.candidates[k].clone();
        order(&mut cands);
        for m in cands {
            if !self.budget.tick() {
                return Enumeration::BudgetExhausted;
            }
            self.raw.comp[g * n + f] = m;
            if self.consistent() {
                match self.run(k + 1, order, visit) {
                    Enumeration::Complete => {}
                    other => {
                        self.raw.comp[g * n + f] = NONE;
                        return other;
                    }
                }
            }
        }
        self.raw.comp[g * n + f] = NONE;
        Enumeration::Complete
    }
}

/// Visits every category table with `n_obj` objects and `n_mor` morphisms
/// (identities included), in a fixed order. Isomorphic copies are visited
/// separately.
pub fn for_each_category(
    n_obj: usize,
    n_mor: usize,
    budget: &mut Budget,
    visit: &mut dyn FnMut(&RawCategory) -> ControlFlow<()>,
) -> Enumeration {
    if n_mor < n_obj {
        return Enumeration::Complete;
    }
    for profile in profiles(n_obj, n_mor - n_obj) {
        let mut search = TableSearch::new(n_obj, &profile, budget);
        match search.run(0, &mut |_| {}, visit) {
            Enumeration::Complete => {}
            other => return other,
        }
    }
    Enumeration::Complete
}

/// A random category table of the given size, found by randomized
/// backtracking on a random hom-set profile, or `None` if the budget runs out.
pub fn sample_category<R: Rng>(n_obj: usize, n_mor: usize, rng: &mut R, budget: &mut Budget) -> Option<RawCategory> {
    if n_mor < n_obj || n_obj == 0 {
        return None;
    }
    let all = profiles(n_obj, n_mor - n_obj);
    let profile = all.choose(rng)?;
    let mut search = TableSearch::new(n_obj, profile, budget);
    let mut found = None;
    // the closure borrows the rng mutably for shuffling only
    let mut order = |c: &mut Vec<usize>| c.shuffle(rng);
    search.run(0, &mut order, &mut |raw| {
        found = Some(raw.clone());
        ControlFlow::Break(())
    });
    found
}

/// Bit patterns of Σ: identities always in, non-identities per bit of `mask`.
pub fn sigma_from_mask(raw: &RawCategory, mask: u64) -> Vec<bool> {
    (0..raw.n_mor())
        .map(|m| raw.is_identity(m) || mask >> (m - raw.n_obj) & 1 == 1)
        .collect()
}

/// One instance of the test corpus.
#[derive(Clone, Debug)]
pub struct CorpusInstance {
    pub name: String,
    pub category: Arc<FiniteCategory>,
    pub sigma: SigmaSet,
}

fn named(name: &str, c: FiniteCategory, sigma: &[&str]) -> CorpusInstance {
    let s = SigmaSet::new(&c, c.objects().map(|x| c.identity(x)).chain(sigma.iter().map(|n| c.m(n))));
    CorpusInstance {
        name: name.to_string(),
        category: Arc::new(c),
        sigma: s,
    }
}

/// Named instances with Σ admitting left fractions.
pub fn fixture_instances() -> Vec<CorpusInstance> {
    let all = |c: FiniteCategory, name: &str| {
        let s = SigmaSet::all(&c);
        CorpusInstance {
            name: name.to_string(),
            category: Arc::new(c),
            sigma: s,
        }
    };
    vec![
        all(fixtures::terminal(), "terminal"),
        all(fixtures::walking_arrow(), "walking-arrow/all"),
        named("walking-arrow/ids", fixtures::walking_arrow(), &[]),
        all(fixtures::walking_iso(), "walking-iso/all"),
        named("parallel-pair/t", fixtures::parallel_pair(), &["t"]),
        named("parallel-pair/ids", fixtures::parallel_pair(), &[]),
        named("swapped-pair/fg", fixtures::swapped_pair(), &["f", "g"]),
        all(fixtures::z2(), "z2/all"),
        all(fixtures::idempotent(), "idempotent/all"),
        all(fixtures::discrete_pair(), "discrete-pair"),
        all(fixtures::chain(3), "chain3/all"),
        named("chain3/a12", fixtures::chain(3), &["a12"]),
        all(fixtures::chain(4), "chain4/all"),
    ]
}

/// Sizes `(objects, morphisms)` swept by [`enumerated_instances`].
const CORPUS_SIZES: [(usize, usize); 8] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (2, 5), (3, 4), (3, 5)];

/// Every `(category, Σ)` of the swept sizes with Σ admitting left fractions
/// and Σ larger than the identities, one per isomorphism class, in a fixed
/// order.
pub fn enumerated_instances() -> Vec<CorpusInstance> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (n_obj, n_mor) in CORPUS_SIZES {
        let mut budget = Budget::new(usize::MAX);
        let mut raws = Vec::new();
        for_each_category(n_obj, n_mor, &mut budget, &mut |raw| {
            raws.push(raw.clone());
            ControlFlow::Continue(())
        });
        for raw in raws {
            let k = raw.n_mor() - raw.n_obj;
            let mut cat: Option<FiniteCategory> = None;
            for mask in 1..(1u64 << k) {
                let marks = sigma_from_mask(&raw, mask);
                let code = raw.canonical_code(&marks);
                if seen.contains(&code) {
                    continue;
                }
                seen.insert(code);
                let c = cat.get_or_insert_with(|| raw.to_category());
                let s = SigmaSet::new(c, c.morphisms().filter(|m| marks[m.index()]));
                if check_left_fraction_axioms(c, &s).has_left_fractions() {
                    out.push(CorpusInstance {
                        name: format!("enum-{n_obj}x{n_mor}-{}", out.len()),
                        category: Arc::new(c.clone()),
                        sigma: s,
                    });
                }
            }
        }
    }
    out
}

/// The test corpus: the named instances followed by enumerated ones.
pub fn corpus() -> Vec<CorpusInstance> {
    let mut v = fixture_instances();
    v.extend(enumerated_instances());
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(n_obj: usize, n_mor: usize) -> usize {
        let mut n = 0;
        let mut b = Budget::new(usize::MAX);
        for_each_category(n_obj, n_mor, &mut b, &mut |raw| {
            assert_eq!(raw.to_category().validate(), Ok(()));
            n += 1;
            ControlFlow::Continue(())
        });
        n
    }

    #[test]
    fn small_counts() {
        // one object: the monoids {1, e} are e∘e ∈ {1, e}
        assert_eq!(count(1, 2), 2);
        assert_eq!(count(1, 1), 1);
        // two objects, one arrow: an endomorphism of either object (two
        // tables each) or an arrow in either direction
        assert_eq!(count(2, 3), 6);
        assert_eq!(count(0, 0), 1);
    }

    #[test]
    fn monoids_of_order_three_up_to_isomorphism() {
        // there are 7 monoids of order 3 up to isomorphism
        let mut codes = BTreeSet::new();
        let mut b = Budget::new(usize::MAX);
        for_each_category(1, 3, &mut b, &mut |raw| {
            codes.insert(raw.canonical_code(&vec![false; raw.n_mor()]));
            ControlFlow::Continue(())
        });
        assert_eq!(codes.len(), 7);
    }

    #[test]
    fn corpus_is_large_and_valid() {
        let c = corpus();
        assert!(c.len() >= 50, "corpus has {} instances", c.len());
        for inst in &c {
            assert!(inst.category.obj_count() <= 4 && inst.category.mor_count() <= 12);
            assert!(check_left_fraction_axioms(&inst.category, &inst.sigma).has_left_fractions());
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut b = Budget::new(100_000);
            sample_category(2, 5, &mut rng, &mut b)
        };
        assert_eq!(run(3), run(3));
        assert!(run(3).unwrap().to_category().validate().is_ok());
    }

    #[test]
    fn budget_stops_enumeration() {
        let mut b = Budget::new(3);
        let r = for_each_category(1, 4, &mut b, &mut |_| ControlFlow::Continue(()));
        assert_eq!(r, Enumeration::BudgetExhausted);
    }
}
