//! Checks that relate the constructions to each other at desk scale:
//! functor and natural transformation enumeration, the functor-category form
//! of the universal property, uniqueness of localizations, the bridge between
//! zigzag words and fractions, and the search for a pair of equivalent
//! symbols with no common symbol under both.

use std::collections::{BTreeMap, HashMap};
use std::ops::ControlFlow;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cat::{CompositionTable, FiniteCategory, Functor, MorId, ObjId, SigmaSet};
use crate::corpus::{for_each_category, sample_category, sigma_from_mask, Budget, Enumeration, RawCategory};
use crate::fractions::{
    all_symbols, build_fraction_category, build_fraction_category_ordered, check_left_fraction_axioms,
    common_beyond, common_under, compose_symbols, exists_lf_under, fraction_dotted, lf_beyond, lf_equiv, lf_under,
    loc_compatible, weak_three_for_two_witness, FractionError, FractionSymbol, MorOrder,
};
use crate::words::{enumerate_words, gz_relation_instances, Decision, LocalizedPresentation, Token, Verdict, ZigzagWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("search space exceeds the cap of {cap} nodes")]
    SizeBound { cap: usize },
    #[error(transparent)]
    Fractions(#[from] FractionError),
}

/// Default node cap for functor enumeration.
pub const FUNCTOR_CAP: usize = 1 << 22;

/// All functors `src -> tgt`: object maps first, then morphism images
/// consistent with every composite assigned so far.
pub fn enumerate_functors(
    src: &Arc<FiniteCategory>,
    tgt: &Arc<FiniteCategory>,
    cap: usize,
) -> Result<Vec<Functor>, VerifyError> {
    struct State<'a> {
        c: &'a FiniteCategory,
        x: &'a FiniteCategory,
        order: Vec<MorId>,
        ob: Vec<ObjId>,
        mor: Vec<Option<MorId>>,
        nodes: usize,
        cap: usize,
        out: Vec<(Vec<ObjId>, Vec<MorId>)>,
    }

    impl State<'_> {
        fn consistent(&self, m: MorId) -> bool {
            let (c, x) = (self.c, self.x);
            let img = |k: MorId| self.mor[k.index()];
            // pairs with m as either factor, and pairs whose composite is m
            for f in c.into_obj(c.source(m)) {
                if let (Some(ff), Some(h)) = (img(f), img(c.comp(m, f))) {
                    if x.comp(img(m).unwrap(), ff) != h {
                        return false;
                    }
                }
            }
            for g in c.out_of(c.target(m)) {
                if let (Some(gg), Some(h)) = (img(g), img(c.comp(g, m))) {
                    if x.comp(gg, img(m).unwrap()) != h {
                        return false;
                    }
                }
            }
            for f in c.morphisms() {
                for g in c.out_of(c.target(f)) {
                    if c.comp(g, f) == m {
                        if let (Some(ff), Some(gg)) = (img(f), img(g)) {
                            if x.comp(gg, ff) != img(m).unwrap() {
                                return false;
                            }
                        }
                    }
                }
            }
            true
        }

        fn morphisms(&mut self, k: usize) -> Result<(), VerifyError> {
            if k == self.order.len() {
                self.out
                    .push((self.ob.clone(), self.mor.iter().map(|m| m.unwrap()).collect()));
                return Ok(());
            }
            let m = self.order[k];
            let (a, b) = (self.ob[self.c.source(m).index()], self.ob[self.c.target(m).index()]);
            let cands: Vec<MorId> = self.x.hom(a, b).collect();
            for cand in cands {
                self.nodes += 1;
                if self.nodes > self.cap {
                    return Err(VerifyError::SizeBound { cap: self.cap });
                }
                self.mor[m.index()] = Some(cand);
                if self.consistent(m) {
                    self.morphisms(k + 1)?;
                }
            }
            self.mor[m.index()] = None;
            Ok(())
        }

        fn objects(&mut self, k: usize) -> Result<(), VerifyError> {
            if k == self.ob.len() {
                for m in self.c.morphisms() {
                    self.mor[m.index()] = None;
                }
                for o in self.c.objects() {
                    let id = self.c.identity(o);
                    self.mor[id.index()] = Some(self.x.identity(self.ob[o.index()]));
                }
                return self.morphisms(0);
            }
            for y in self.x.objects() {
                self.nodes += 1;
                if self.nodes > self.cap {
                    return Err(VerifyError::SizeBound { cap: self.cap });
                }
                self.ob[k] = y;
                self.objects(k + 1)?;
            }
            Ok(())
        }
    }

    let c: &FiniteCategory = src;
    let x: &FiniteCategory = tgt;
    if c.obj_count() > 0 && x.obj_count() == 0 {
        return Ok(vec![]);
    }
    let mut st = State {
        c,
        x,
        order: c.morphisms().filter(|&m| !c.is_identity(m)).collect(),
        ob: vec![ObjId(0); c.obj_count()],
        mor: vec![None; c.mor_count()],
        nodes: 0,
        cap,
        out: Vec::new(),
    };
    st.objects(0)?;
    Ok(st
        .out
        .into_iter()
        .map(|(ob, mor)| Functor::new(src.clone(), tgt.clone(), ob, mor))
        .collect())
}

/// All natural transformations `F => G`, as component families indexed by
/// object.
pub fn enumerate_nat_trans(f: &Functor, g: &Functor) -> Vec<Vec<MorId>> {
    let c = f.source();
    let x = f.target();
    let objs: Vec<ObjId> = c.objects().collect();
    let mut out = Vec::new();
    let mut comp: Vec<Option<MorId>> = vec![None; objs.len()];

    fn natural_so_far(c: &FiniteCategory, x: &FiniteCategory, f: &Functor, g: &Functor, comp: &[Option<MorId>]) -> bool {
        for m in c.morphisms() {
            if let (Some(a), Some(b)) = (comp[c.source(m).index()], comp[c.target(m).index()]) {
                if x.comp(g.mor(m), a) != x.comp(b, f.mor(m)) {
                    return false;
                }
            }
        }
        true
    }

    fn rec(
        k: usize,
        objs: &[ObjId],
        c: &FiniteCategory,
        x: &FiniteCategory,
        f: &Functor,
        g: &Functor,
        comp: &mut Vec<Option<MorId>>,
        out: &mut Vec<Vec<MorId>>,
    ) {
        if k == objs.len() {
            out.push(comp.iter().map(|m| m.unwrap()).collect());
            return;
        }
        let o = objs[k];
        let cands: Vec<MorId> = x.hom(f.ob(o), g.ob(o)).collect();
        for a in cands {
            comp[k] = Some(a);
            if natural_so_far(c, x, f, g, comp) {
                rec(k + 1, objs, c, x, f, g, comp, out);
            }
        }
        comp[k] = None;
    }

    rec(0, &objs, c, x, f, g, &mut comp, &mut out);
    out
}

/// Natural transformation counts for one ordered pair of functors out of the
/// localization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatCount {
    pub first: usize,
    pub second: usize,
    pub from_localization: usize,
    pub from_base: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma12Report {
    pub functors_from_localization: usize,
    pub functors_from_base: usize,
    pub inverting_functors: usize,
    /// `(i, j)`: functor `i` out of the localization composed with the
    /// projection is inverting functor `j`.
    pub bijection: Vec<(usize, usize)>,
    pub nat_counts: Vec<NatCount>,
    pub failures: Vec<String>,
}

impl Lemma12Report {
    pub fn holds(&self) -> bool {
        self.failures.is_empty() && self.functors_from_localization == self.inverting_functors
    }
}

/// Composition with the projection is a bijection from functors out of the
/// localization onto the Σ-inverting functors out of `c`, and a bijection on
/// natural transformations between each pair.
pub fn check_lemma_1_2(c: &Arc<FiniteCategory>, s: &SigmaSet, x: &Arc<FiniteCategory>) -> Result<Lemma12Report, VerifyError> {
    let frac = build_fraction_category(c, s)?;
    let p = &frac.projection;
    let loc = enumerate_functors(&frac.category, x, FUNCTOR_CAP)?;
    let base = enumerate_functors(c, x, FUNCTOR_CAP)?;
    let inverting: Vec<&Functor> = base.iter().filter(|f| loc_compatible(f, s).is_ok()).collect();
    let mut failures = Vec::new();

    let mut bijection = Vec::new();
    let mut hit = vec![0usize; inverting.len()];
    for (i, g) in loc.iter().enumerate() {
        let gp = g.after(p);
        match inverting.iter().position(|f| f.same_maps(&gp)) {
            Some(j) => {
                bijection.push((i, j));
                hit[j] += 1;
            }
            None => failures.push(format!("functor {i} composed with P does not invert sigma")),
        }
    }
    for (j, &h) in hit.iter().enumerate() {
        if h != 1 {
            failures.push(format!("inverting functor {j} is hit {h} times"));
        }
    }
    // the inverse table, built independently by the dotted functor
    for (i, j) in &bijection {
        match fraction_dotted(&frac, inverting[*j]) {
            Ok(d) if d.same_maps(&loc[*i]) && d.after(p).same_maps(inverting[*j]) => {}
            Ok(_) => failures.push(format!("dotted functor of inverting functor {j} is not functor {i}")),
            Err(e) => failures.push(format!("dotted functor of inverting functor {j}: {e}")),
        }
    }

    let mut nat_counts = Vec::new();
    for (i, g1) in loc.iter().enumerate() {
        for (j, g2) in loc.iter().enumerate() {
            let upstairs = enumerate_nat_trans(g1, g2);
            let downstairs = enumerate_nat_trans(&g1.after(p), &g2.after(p));
            // P is the identity on objects, so a family is sent to itself
            let images_ok = upstairs.iter().all(|a| downstairs.contains(a));
            if !images_ok || upstairs.len() != downstairs.len() {
                failures.push(format!(
                    "natural transformations {i} => {j}: {} upstairs, {} downstairs",
                    upstairs.len(),
                    downstairs.len()
                ));
            }
            nat_counts.push(NatCount {
                first: i,
                second: j,
                from_localization: upstairs.len(),
                from_base: downstairs.len(),
            });
        }
    }
    Ok(Lemma12Report {
        functors_from_localization: loc.len(),
        functors_from_base: base.len(),
        inverting_functors: inverting.len(),
        bijection,
        nat_counts,
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsomorphismReport {
    /// Whether the two builds differ as presentations (names or tables).
    pub builds_differ: bool,
    pub forth_then_back_is_identity: bool,
    pub back_then_forth_is_identity: bool,
    pub factorizations_hold: bool,
}

impl IsomorphismReport {
    pub fn holds(&self) -> bool {
        self.forth_then_back_is_identity && self.back_then_forth_is_identity && self.factorizations_hold
    }
}

/// Builds the localization under canonical and under reversed choice order
/// and checks that the dotted functors between them are mutually inverse.
pub fn check_localizations_isomorphic(c: &Arc<FiniteCategory>, s: &SigmaSet) -> Result<IsomorphismReport, VerifyError> {
    let l1 = build_fraction_category(c, s)?;
    let l2 = build_fraction_category_ordered(c, s, &MorOrder::reversed(c))?;
    let forth = fraction_dotted(&l1, &l2.projection)?;
    let back = fraction_dotted(&l2, &l1.projection)?;
    Ok(IsomorphismReport {
        builds_differ: *l1.category != *l2.category,
        forth_then_back_is_identity: back.after(&forth).is_identity(),
        back_then_forth_is_identity: forth.after(&back).is_identity(),
        factorizations_hold: forth.after(&l1.projection).same_maps(&l2.projection)
            && back.after(&l2.projection).same_maps(&l1.projection),
    })
}

/// The symbol `t⁻¹∘u` obtained by composing the symbols of the tokens.
pub fn symbol_of_word(c: &FiniteCategory, s: &SigmaSet, w: &ZigzagWord) -> Result<FractionSymbol, FractionError> {
    let mut acc = FractionSymbol::identity(c, w.source());
    for &t in w.tokens() {
        let sym = match t {
            Token::Fwd(u) => FractionSymbol::new(u, c.identity(c.target(u))),
            Token::Bwd(q) => FractionSymbol::new(c.identity(c.target(q)), q),
        };
        acc = compose_symbols(c, s, acc, sym)?;
    }
    Ok(acc)
}

/// `(t, f) ↦ [Fwd f, Bwd t]`.
pub fn word_of_symbol(c: &FiniteCategory, sym: FractionSymbol) -> ZigzagWord {
    ZigzagWord::new(
        c,
        &SigmaSet::all(c),
        c.source(sym.fwd),
        vec![Token::Fwd(sym.fwd), Token::Bwd(sym.bwd)],
    )
    .expect("a symbol is a two-token word")
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BridgeReport {
    pub words: usize,
    pub pairs: usize,
    pub equal: usize,
    pub distinct: usize,
    /// Equal pairs with the same normal form.
    pub by_reduction: usize,
    /// Equal pairs whose normal forms are linked by rewrite search.
    pub by_search: usize,
    /// Equal pairs with no rewrite chain within budget, decided by fractions.
    pub fallback: usize,
    pub not_proven: usize,
    /// Pairs of distinct symbols compared by equivalence and by class.
    pub symbol_pairs: usize,
    /// Pairs also run through the per-pair decision procedure.
    pub sampled_pairs: usize,
    pub mismatches: Vec<String>,
    pub certificates_checked: usize,
    pub bad_certificates: usize,
}

impl BridgeReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty() && self.not_proven == 0 && self.bad_certificates == 0
    }

    /// Share of equal pairs that needed the fraction fallback.
    pub fn fallback_rate(&self) -> f64 {
        if self.equal == 0 {
            0.0
        } else {
            self.fallback as f64 / self.equal as f64
        }
    }

    pub fn merge(&mut self, other: &BridgeReport) {
        self.words += other.words;
        self.pairs += other.pairs;
        self.equal += other.equal;
        self.distinct += other.distinct;
        self.by_reduction += other.by_reduction;
        self.by_search += other.by_search;
        self.fallback += other.fallback;
        self.not_proven += other.not_proven;
        self.symbol_pairs += other.symbol_pairs;
        self.sampled_pairs += other.sampled_pairs;
        self.mismatches.extend(other.mismatches.iter().cloned());
        self.certificates_checked += other.certificates_checked;
        self.bad_certificates += other.bad_certificates;
    }
}

/// Pairs per instance replayed through the per-pair decision procedure.
const SAMPLED_PAIRS: usize = 300;

fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Compares word equality with fraction classes on all words of length at
/// most `max_len`.
///
/// Every word is checked to be its symbol `t⁻¹∘u`. Pairs are settled per
/// class: words with one normal form are equal by reduction, distinct normal
/// forms of a class are linked by rewrite search, and words in different
/// classes are distinct; symbol equivalence is compared with class equality
/// on every pair of symbols. A deterministic sample of pairs is then run
/// through [`LocalizedPresentation::decide`] and
/// [`LocalizedPresentation::words_equal`] and must agree.
pub fn check_theorem_lfproperty(
    c: &Arc<FiniteCategory>,
    s: &SigmaSet,
    max_len: usize,
    budget: usize,
) -> Result<BridgeReport, VerifyError> {
    let report_axioms = check_left_fraction_axioms(c, s);
    if !report_axioms.has_left_fractions() {
        return Err(FractionError::AxiomsFail(Box::new(report_axioms)).into());
    }
    let lp = LocalizedPresentation::with_budget(c.clone(), s.clone(), budget);
    let frac = lp.fractions().expect("conditions hold");
    let mut r = BridgeReport::default();
    let cat: &FiniteCategory = c;

    // the four families hold in the fraction category, so rewriting is sound
    for inst in gz_relation_instances(cat, s) {
        if lp.fraction_class(&inst.long) != lp.fraction_class(&inst.short) {
            r.mismatches.push(format!(
                "family {} instance {} ~ {} separated",
                inst.family.number(),
                inst.long.display(cat),
                inst.short.display(cat)
            ));
        }
    }
    for &sym in frac.symbols() {
        let w = word_of_symbol(cat, sym);
        if lp.fraction_class(&w) != Some(frac.class_of(sym)) {
            r.mismatches.push(format!("symbol {} does not round-trip", sym.display(cat)));
        }
    }

    let words = enumerate_words(cat, s, max_len);
    r.words = words.len();
    let mut class = Vec::with_capacity(words.len());
    let mut symbol = Vec::with_capacity(words.len());
    let mut normal = Vec::with_capacity(words.len());
    for w in &words {
        let k = lp.fraction_class(w).expect("fractions built");
        let sym = symbol_of_word(cat, s, w)?;
        if frac.class_of(sym) != k {
            r.mismatches.push(format!("{} is not its symbol {}", w.display(cat), sym.display(cat)));
        }
        // word -> symbol -> word is the identity up to equality
        let back = word_of_symbol(cat, sym);
        if !lp.decide(w, &back).is_equal() {
            r.mismatches.push(format!("{} and {} not equal", w.display(cat), back.display(cat)));
        }
        class.push(k);
        symbol.push(sym);
        normal.push(lp.normal_form(w).end().clone());
    }

    let mut groups: BTreeMap<(ObjId, ObjId), Vec<usize>> = BTreeMap::new();
    for (i, w) in words.iter().enumerate() {
        groups.entry((w.source(), w.target(cat))).or_default().push(i);
    }
    let mut sample_pool: Vec<(usize, usize)> = Vec::new();
    for members in groups.values() {
        r.pairs += choose2(members.len());
        let mut by_class: BTreeMap<MorId, Vec<usize>> = BTreeMap::new();
        for &i in members {
            by_class.entry(class[i]).or_default().push(i);
        }
        for in_class in by_class.values() {
            r.equal += choose2(in_class.len());
            // distinct normal forms with multiplicities, first appearance first
            let mut nfs: Vec<(&ZigzagWord, usize)> = Vec::new();
            let mut position: HashMap<&ZigzagWord, usize> = HashMap::new();
            for &i in in_class {
                let k = *position.entry(&normal[i]).or_insert_with(|| {
                    nfs.push((&normal[i], 0));
                    nfs.len() - 1
                });
                nfs[k].1 += 1;
            }
            let mut comp: Vec<usize> = (0..nfs.len()).collect();
            let linked = |d: Decision| matches!(d, Decision::SameNormalForm | Decision::Rewritten);
            for k in 1..nfs.len() {
                let d = lp.decide(nfs[0].0, nfs[k].0);
                if d == Decision::Distinct {
                    r.mismatches.push(format!("{} and {} in one class but separated", nfs[0].0.display(cat), nfs[k].0.display(cat)));
                }
                if linked(d) {
                    comp[k] = 0;
                }
            }
            // stragglers may still link to each other
            for k in 1..nfs.len() {
                if comp[k] != k {
                    continue;
                }
                for j in 1..k {
                    if comp[j] == j && linked(lp.decide(nfs[j].0, nfs[k].0)) {
                        comp[k] = j;
                        break;
                    }
                }
            }
            let root = |mut k: usize| {
                while comp[k] != k {
                    k = comp[k];
                }
                k
            };
            let mut sizes: HashMap<usize, usize> = HashMap::new();
            for (k, &(_, n)) in nfs.iter().enumerate() {
                r.by_reduction += choose2(n);
                *sizes.entry(root(k)).or_default() += n;
            }
            let linked_pairs: usize = sizes.values().map(|&n| choose2(n)).sum();
            r.by_search += linked_pairs - nfs.iter().map(|&(_, n)| choose2(n)).sum::<usize>();
            r.fallback += choose2(in_class.len()) - linked_pairs;
        }
        r.distinct += choose2(members.len()) - by_class.values().map(|v| choose2(v.len())).sum::<usize>();

        // symbol equivalence against class equality, once per symbol pair
        let mut syms: Vec<FractionSymbol> = members.iter().map(|&i| symbol[i]).collect();
        syms.sort();
        syms.dedup();
        for (a, &x) in syms.iter().enumerate() {
            for &y in &syms[a + 1..] {
                r.symbol_pairs += 1;
                let equiv = lf_equiv(cat, s, x, y).is_some();
                if equiv != (frac.class_of(x) == frac.class_of(y)) {
                    r.mismatches.push(format!(
                        "{} and {}: equivalent {equiv}, same class {}",
                        x.display(cat),
                        y.display(cat),
                        !equiv
                    ));
                }
            }
        }
        let n = members.len();
        let stride = (choose2(n) / SAMPLED_PAIRS + 1).max(1);
        let mut t = 0usize;
        for a in 0..n {
            for b in a + 1..n {
                if t % stride == 0 {
                    sample_pool.push((members[a], members[b]));
                }
                t += 1;
            }
        }
    }

    // the batch verdicts are those of the per-pair procedure
    let stride = sample_pool.len() / SAMPLED_PAIRS + 1;
    for &(i, j) in sample_pool.iter().step_by(stride) {
        r.sampled_pairs += 1;
        let d = lp.decide(&words[i], &words[j]);
        if d.is_equal() != (class[i] == class[j]) {
            r.mismatches.push(format!("{} vs {}: verdict {:?}", words[i].display(cat), words[j].display(cat), d));
        }
        if let Verdict::Equal(cert) = lp.words_equal(&words[i], &words[j]) {
            r.certificates_checked += 1;
            if !cert.validate(cat, s) || cert.start != words[i] || *cert.end() != words[j] {
                r.bad_certificates += 1;
            }
        }
    }
    for cert in lp.component_certificates() {
        r.certificates_checked += 1;
        if !cert.validate(cat, s) {
            r.bad_certificates += 1;
        }
    }
    Ok(r)
}

/// Bounds and effort limits for [`search_beyond_under_counterexample_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_objects: usize,
    pub max_morphisms: usize,
    pub seed: u64,
    /// Node budget of the exhaustive phase.
    pub enumeration_budget: usize,
    /// Number of random categories tried afterwards.
    pub samples: usize,
}

impl SearchConfig {
    pub fn new(max_objects: usize, max_morphisms: usize, seed: u64) -> Self {
        SearchConfig {
            max_objects,
            max_morphisms,
            seed,
            enumeration_budget: 20_000_000,
            samples: 2_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchPhase {
    Enumeration,
    Sampling,
}

#[derive(Clone, Debug)]
pub struct CounterexampleInstance {
    pub category: Arc<FiniteCategory>,
    pub sigma: SigmaSet,
    /// The nearer symbol.
    pub u: FractionSymbol,
    /// A symbol beyond `u`.
    pub v: FractionSymbol,
    pub intermediary: MorId,
    pub phase: SearchPhase,
    pub categories_examined: usize,
    pub transcript: Vec<String>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("no instance within bounds ({categories_examined} categories examined{})", if *.budget_exhausted { ", budget exhausted" } else { "" })]
    NotFound {
        categories_examined: usize,
        budget_exhausted: bool,
    },
    #[error("instance failed re-verification: {0}")]
    Inconsistent(String),
}

/// Search-side check on raw tables, independent of the fractions module.
struct RawCheck<'a> {
    r: &'a RawCategory,
    sigma: Vec<bool>,
}

impl RawCheck<'_> {
    fn n(&self) -> usize {
        self.r.n_mor()
    }

    fn has_left_fractions(&self) -> bool {
        let (r, n, s) = (self.r, self.n(), &self.sigma);
        let comp = |g: usize, f: usize| r.compose(g, f);
        for f in 0..n {
            for g in 0..n {
                if s[f] && s[g] && r.src[g] == r.tgt[f] && !s[comp(g, f)] {
                    return false;
                }
            }
        }
        for sg in (0..n).filter(|&m| s[m]) {
            for u in (0..n).filter(|&u| r.src[u] == r.src[sg]) {
                let square = (0..n).filter(|&rt| s[rt] && r.src[rt] == r.tgt[u]).any(|rt| {
                    (0..n).any(|b| r.src[b] == r.tgt[sg] && r.tgt[b] == r.tgt[rt] && comp(rt, u) == comp(b, sg))
                });
                if !square {
                    return false;
                }
            }
        }
        for f in 0..n {
            for g in 0..n {
                if f == g || r.src[f] != r.src[g] || r.tgt[f] != r.tgt[g] {
                    continue;
                }
                let equalized = (0..n).any(|sg| s[sg] && r.tgt[sg] == r.src[f] && comp(f, sg) == comp(g, sg));
                if equalized && !(0..n).any(|t| s[t] && r.src[t] == r.tgt[f] && comp(t, f) == comp(t, g)) {
                    return false;
                }
            }
        }
        true
    }

    /// `(fwd, bwd)` pairs.
    fn symbols(&self) -> Vec<(usize, usize)> {
        let (r, n) = (self.r, self.n());
        let mut out = Vec::new();
        for t in (0..n).filter(|&t| self.sigma[t]) {
            for f in (0..n).filter(|&f| r.tgt[f] == r.tgt[t]) {
                out.push((f, t));
            }
        }
        out
    }

    fn extends(&self, a: usize, near: (usize, usize), far: (usize, usize)) -> bool {
        let r = self.r;
        r.src[a] == r.tgt[near.0]
            && r.tgt[a] == r.tgt[far.0]
            && r.compose(a, near.0) == far.0
            && r.compose(a, near.1) == far.1
    }

    fn beyond(&self, far: (usize, usize), near: (usize, usize)) -> Option<usize> {
        (0..self.n()).find(|&a| self.extends(a, near, far))
    }

    fn under(&self, far: (usize, usize), near: (usize, usize)) -> bool {
        (0..self.n()).any(|a| self.sigma[a] && self.extends(a, near, far))
    }

    fn find_pair(&self) -> Option<((usize, usize), (usize, usize), usize)> {
        let r = self.r;
        let syms = self.symbols();
        for &u in &syms {
            for &v in &syms {
                let parallel = r.src[u.0] == r.src[v.0] && r.src[u.1] == r.src[v.1];
                if u == v || !parallel {
                    continue;
                }
                if let Some(a) = self.beyond(v, u) {
                    if !syms.iter().any(|&w| self.under(w, u) && self.under(w, v)) {
                        return Some((u, v, a));
                    }
                }
            }
        }
        None
    }
}

pub fn search_beyond_under_counterexample(
    max_objects: usize,
    max_morphisms: usize,
    seed: u64,
) -> Result<CounterexampleInstance, SearchError> {
    search_beyond_under_counterexample_with(SearchConfig::new(max_objects, max_morphisms, seed))
}

/// Exhaustive enumeration by morphism count, then object count, then table
/// order; afterwards seeded random sampling. The first hit is re-verified
/// with the predicates of the fractions module.
pub fn search_beyond_under_counterexample_with(cfg: SearchConfig) -> Result<CounterexampleInstance, SearchError> {
    let mut examined = 0usize;
    let mut hit: Option<(RawCategory, Vec<bool>, (usize, usize), (usize, usize), usize)> = None;
    let mut budget = Budget::new(cfg.enumeration_budget);
    let mut exhausted = false;

    let try_raw = |raw: &RawCategory, examined: &mut usize| {
        *examined += 1;
        let k = raw.n_mor() - raw.n_obj;
        if k >= 64 {
            return None;
        }
        for mask in 0..(1u64 << k) {
            let chk = RawCheck {
                r: raw,
                sigma: sigma_from_mask(raw, mask),
            };
            if !chk.has_left_fractions() {
                continue;
            }
            if let Some((u, v, a)) = chk.find_pair() {
                return Some((raw.clone(), chk.sigma.clone(), u, v, a));
            }
        }
        None
    };

    'outer: for n_mor in 1..=cfg.max_morphisms {
        for n_obj in 1..=cfg.max_objects.min(n_mor) {
            let res = for_each_category(n_obj, n_mor, &mut budget, &mut |raw| match try_raw(raw, &mut examined) {
                Some(h) => {
                    hit = Some(h);
                    ControlFlow::Break(())
                }
                None => ControlFlow::Continue(()),
            });
            match res {
                Enumeration::Stopped => break 'outer,
                Enumeration::BudgetExhausted => {
                    exhausted = true;
                    break 'outer;
                }
                Enumeration::Complete => {}
            }
        }
    }
    let mut phase = SearchPhase::Enumeration;
    if hit.is_none() && exhausted && cfg.max_objects > 0 {
        phase = SearchPhase::Sampling;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..cfg.samples {
            let n_obj = rng.gen_range(1..=cfg.max_objects);
            if n_obj > cfg.max_morphisms {
                continue;
            }
            let n_mor = rng.gen_range(n_obj..=cfg.max_morphisms);
            let mut b = Budget::new(50_000);
            if let Some(raw) = sample_category(n_obj, n_mor, &mut rng, &mut b) {
                if raw.n_mor() - raw.n_obj > 16 {
                    continue;
                }
                if let Some(h) = try_raw(&raw, &mut examined) {
                    hit = Some(h);
                    break;
                }
            }
        }
    }
    let Some((raw, marks, u, v, a)) = hit else {
        return Err(SearchError::NotFound {
            categories_examined: examined,
            budget_exhausted: exhausted,
        });
    };
    let c = Arc::new(raw.to_category());
    let sigma = SigmaSet::new(&c, c.morphisms().filter(|m| marks[m.index()]));
    // raw indices agree with canonical order
    let u = FractionSymbol::new(MorId(u.0), MorId(u.1));
    let v = FractionSymbol::new(MorId(v.0), MorId(v.1));
    let transcript = verify_counterexample(&c, &sigma, u, v)?;
    Ok(CounterexampleInstance {
        category: c,
        sigma,
        u,
        v,
        intermediary: MorId(a),
        phase,
        categories_examined: examined,
        transcript,
    })
}

/// Re-derives every claim about a counterexample from scratch and returns
/// the log. Fails if any claim does not hold.
pub fn verify_counterexample(
    c: &Arc<FiniteCategory>,
    s: &SigmaSet,
    u: FractionSymbol,
    v: FractionSymbol,
) -> Result<Vec<String>, SearchError> {
    let bad = |m: String| Err(SearchError::Inconsistent(m));
    let cat: &FiniteCategory = c;
    let mut log = Vec::new();
    let report = check_left_fraction_axioms(cat, s);
    log.extend(report.lines(cat));
    if !report.has_left_fractions() {
        return bad("left fraction conditions fail".into());
    }
    if report.three_for_two.is_ok() {
        return bad("three-for-two holds, contradicting the absence of a common under-symbol".into());
    }
    let (du, dv) = (u.display(cat).to_string(), v.display(cat).to_string());
    if !u.is_symbol(cat, s) || !v.is_symbol(cat, s) || !u.parallel(cat, &v) {
        return bad("u and v are not parallel symbols".into());
    }
    let Some(a) = lf_beyond(cat, s, v, u) else {
        return bad(format!("{dv} is not beyond {du}"));
    };
    log.push(format!(
        "{dv} is beyond {du} via intermediary {} (in sigma: {})",
        cat.mor_name(a),
        s.contains(a)
    ));
    let Some((ea, eb)) = lf_equiv(cat, s, u, v) else {
        return bad("u and v are not equivalent".into());
    };
    log.push(format!(
        "{du} ~ {dv} with witnesses a = {}, b = {}",
        cat.mor_name(ea),
        cat.mor_name(eb)
    ));
    if common_beyond(cat, s, u, v).is_none() {
        return bad("no common beyond-symbol".into());
    }
    let syms = all_symbols(cat, s);
    let unders = syms
        .iter()
        .filter(|&&w| lf_under(cat, s, w, u).is_some() && lf_under(cat, s, w, v).is_some())
        .count();
    if unders != 0 || common_under(cat, s, u, v).is_some() {
        return bad("a common under-symbol exists".into());
    }
    log.push(format!(
        "scanned all {} symbols: none is under both {du} and {dv}",
        syms.len()
    ));

    // the equivalence is an equivalence relation on this instance
    let mut triples = 0usize;
    for &x in &syms {
        if lf_equiv(cat, s, x, x).is_none() {
            return bad(format!("equivalence not reflexive at {}", x.display(cat)));
        }
        for &y in syms.iter().filter(|y| y.parallel(cat, &x)) {
            let xy = lf_equiv(cat, s, x, y).is_some();
            if xy != lf_equiv(cat, s, y, x).is_some() {
                return bad("equivalence not symmetric".into());
            }
            for &z in syms.iter().filter(|z| z.parallel(cat, &x)) {
                triples += 1;
                if xy && lf_equiv(cat, s, y, z).is_some() && lf_equiv(cat, s, x, z).is_none() {
                    return bad("equivalence not transitive".into());
                }
            }
        }
    }
    log.push(format!(
        "equivalence of symbols is reflexive, symmetric and transitive ({triples} triples)"
    ));

    // sharing a symbol under both is not transitive
    let shares = |x: FractionSymbol, y: FractionSymbol| common_under(cat, s, x, y).is_some();
    match syms
        .iter()
        .find(|&&w| w.parallel(cat, &u) && shares(u, w) && shares(w, v))
    {
        Some(w) => log.push(format!(
            "{du} and {} share an under-symbol, as do {} and {dv}; {du} and {dv} do not",
            w.display(cat),
            w.display(cat)
        )),
        None => log.push("no intermediate symbol links the two by shared under-symbols".into()),
    }

    // the weak form of three-for-two still holds
    for sig in s.members() {
        for x in cat.out_of(cat.target(sig)) {
            if !s.contains(x) && s.contains(cat.comp(x, sig)) {
                let b = weak_three_for_two_witness(cat, s, sig, x).map_err(|e| SearchError::Inconsistent(e.to_string()))?;
                if !s.contains(cat.comp(b, x)) {
                    return bad("weak three-for-two witness does not re-validate".into());
                }
                log.push(format!(
                    "{} is not in sigma but {} . {} is; {} . {} is in sigma",
                    cat.mor_name(x),
                    cat.mor_name(x),
                    cat.mor_name(sig),
                    cat.mor_name(b),
                    cat.mor_name(x)
                ));
            }
        }
    }
    let w = exists_lf_under(cat, s, u, v).map_err(|e| SearchError::Inconsistent(e.to_string()))?;
    if lf_beyond(cat, s, w.symbol, v).is_none() || lf_under(cat, s, w.symbol, u).is_none() {
        return bad("normalized symbol does not re-validate".into());
    }
    log.push(format!(
        "{} is beyond {dv} and under {du}",
        w.symbol.display(cat)
    ));
    Ok(log)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn arc(c: FiniteCategory) -> Arc<FiniteCategory> {
        Arc::new(c)
    }

    #[test]
    fn functor_counts() {
        let t = arc(fixtures::terminal());
        let p = arc(fixtures::parallel_pair());
        let i = arc(fixtures::walking_arrow());
        let iso = arc(fixtures::walking_iso());
        assert_eq!(enumerate_functors(&t, &p, FUNCTOR_CAP).unwrap().len(), 3);
        assert_eq!(enumerate_functors(&i, &p, FUNCTOR_CAP).unwrap().len(), 7);
        assert_eq!(enumerate_functors(&iso, &i, FUNCTOR_CAP).unwrap().len(), 2);
        for f in enumerate_functors(&p, &iso, FUNCTOR_CAP).unwrap() {
            assert_eq!(f.check(), Ok(()));
        }
        assert!(matches!(
            enumerate_functors(&p, &p, 3),
            Err(VerifyError::SizeBound { cap: 3 })
        ));
    }

    // Oracle: every map of objects and morphisms, filtered by the functor laws.
    fn brute_force_functor_count(c: &Arc<FiniteCategory>, x: &Arc<FiniteCategory>) -> usize {
        let n = c.mor_count();
        let m = x.mor_count();
        let mut count = 0;
        let total = m.pow(n as u32);
        for code in 0..total {
            let mut k = code;
            let mor: Vec<MorId> = (0..n)
                .map(|_| {
                    let v = k % m;
                    k /= m;
                    MorId(v)
                })
                .collect();
            let ob: Vec<ObjId> = c.objects().map(|o| x.source(mor[c.identity(o).index()])).collect();
            if Functor::new(c.clone(), x.clone(), ob, mor).check().is_ok() {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn functor_counts_match_brute_force() {
        let cats = [
            arc(fixtures::walking_arrow()),
            arc(fixtures::z2()),
            arc(fixtures::idempotent()),
            arc(fixtures::swapped_pair()),
            arc(fixtures::walking_iso()),
        ];
        for c in &cats {
            for x in &cats {
                assert_eq!(
                    enumerate_functors(c, x, FUNCTOR_CAP).unwrap().len(),
                    brute_force_functor_count(c, x)
                );
            }
        }
    }

    #[test]
    fn nat_trans_counts() {
        let t = arc(fixtures::terminal());
        let i = arc(fixtures::walking_arrow());
        let pick = |name: &str| {
            let o = i.object(name).unwrap();
            Functor::new(t.clone(), i.clone(), vec![o], vec![i.identity(o)])
        };
        let (p0, p1) = (pick("0"), pick("1"));
        assert_eq!(enumerate_nat_trans(&p0, &p1), vec![vec![i.m("f")]]);
        assert!(enumerate_nat_trans(&p1, &p0).is_empty());
        let id = Functor::identity(i.clone());
        let nts = enumerate_nat_trans(&id, &id);
        assert!(nts.contains(&vec![i.m("1_0"), i.m("1_1")]));
    }

    #[test]
    fn lemma_examples() {
        let i = arc(fixtures::walking_arrow());
        let all = SigmaSet::all(&i);
        let iso = arc(fixtures::walking_iso());
        let r = check_lemma_1_2(&i, &all, &iso).unwrap();
        assert!(r.holds(), "{:?}", r.failures);
        assert_eq!((r.functors_from_localization, r.inverting_functors), (4, 4));

        let t = arc(fixtures::terminal());
        let r = check_lemma_1_2(&i, &all, &t).unwrap();
        assert!(r.holds());
        assert_eq!((r.functors_from_localization, r.inverting_functors), (1, 1));

        let r = check_lemma_1_2(&i, &SigmaSet::identities(&i), &i).unwrap();
        assert!(r.holds());
        assert_eq!((r.functors_from_base, r.inverting_functors), (3, 3));
    }

    #[test]
    fn localizations_isomorphic_examples() {
        let i = arc(fixtures::walking_arrow());
        assert!(check_localizations_isomorphic(&i, &SigmaSet::all(&i)).unwrap().holds());
        assert!(check_localizations_isomorphic(&i, &SigmaSet::identities(&i)).unwrap().holds());
        let p = arc(fixtures::parallel_pair());
        let s = SigmaSet::from_names(&p, ["1_X", "1_Y", "1_Z", "t"]).unwrap();
        assert!(check_localizations_isomorphic(&p, &s).unwrap().holds());
    }

    #[test]
    fn bridge_on_parallel_pair() {
        let p = arc(fixtures::parallel_pair());
        let s = SigmaSet::from_names(&p, ["1_X", "1_Y", "1_Z", "t"]).unwrap();
        let r = check_theorem_lfproperty(&p, &s, 3, 50_000).unwrap();
        assert!(r.holds(), "{:?}", r.mismatches);
        let ht = FractionSymbol::new(p.m("h"), p.m("t"));
        let f = FractionSymbol::new(p.m("f"), p.m("1_Y"));
        assert_eq!(lf_equiv(&p, &s, f, ht), Some((p.m("t"), p.m("1_Z"))));
    }

    #[test]
    fn tiny_bounds_find_nothing() {
        assert!(matches!(
            search_beyond_under_counterexample(1, 1, 0),
            Err(SearchError::NotFound { .. })
        ));
    }

    #[test]
    fn search_finds_verified_instance() {
        let a = search_beyond_under_counterexample(4, 12, 1).unwrap();
        let b = search_beyond_under_counterexample(4, 12, 1).unwrap();
        assert_eq!(*a.category, *b.category);
        assert_eq!(a.transcript, b.transcript);
        let c: &FiniteCategory = &a.category;
        assert!(check_left_fraction_axioms(c, &a.sigma).has_left_fractions());
        assert!(check_left_fraction_axioms(c, &a.sigma).three_for_two.is_err());
        assert!(common_under(c, &a.sigma, a.u, a.v).is_none());
    }

    #[test]
    fn swapped_pair_verifies() {
        let w = arc(fixtures::swapped_pair());
        let s = SigmaSet::from_names(&w, ["1_X", "1_Y", "f", "g"]).unwrap();
        let u = FractionSymbol::new(w.m("f"), w.m("f"));
        let v = FractionSymbol::new(w.m("g"), w.m("g"));
        let log = verify_counterexample(&w, &s, u, v).unwrap();
        assert!(log.iter().any(|l| l.contains("none is under both")));
    }
}
