//! Relations on morphisms, their categorical closure, and quotient categories.
//!
//! Relations never identify objects: every related pair is parallel.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::cat::{identity_name, CategoryBuilder, CompositionTable, FiniteCategory, Functor, MorId, ObjId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuotientError {
    #[error("`{0}` and `{1}` are not parallel")]
    NotParallel(String, String),
    #[error("relation is not a categorical equivalence relation: {0}")]
    NotCongruence(RelationDefect),
    #[error("functor is not constant on classes: `{0}` ~ `{1}` have different images")]
    NotConstantOnClasses(String, String),
    #[error("quotient violates the {law} law at {witness}")]
    QuotientNotCategory { law: &'static str, witness: String },
    #[error("pre-category table is not total: `{g} . {f}` missing or ill-typed")]
    NotTotal { g: String, f: String },
}

/// Why a relation fails to be a categorical equivalence relation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationDefect {
    #[error("missing reflexive pair ({0}, {0})")]
    NotReflexive(String),
    #[error("({0}, {1}) present but not ({1}, {0})")]
    NotSymmetric(String, String),
    #[error("({0}, {1}) and ({1}, {2}) present but not ({0}, {2})")]
    NotTransitive(String, String, String),
    #[error("({u}, {v}) related but composites with `{w}` are not")]
    NotCongruent { u: String, v: String, w: String },
}

/// A set of pairs of parallel morphisms of a host table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatRelation {
    n: usize,
    rel: Vec<bool>,
}

impl CatRelation {
    pub fn empty<T: CompositionTable>(host: &T) -> Self {
        let n = host.mor_count();
        CatRelation {
            n,
            rel: vec![false; n * n],
        }
    }

    pub fn new<T: CompositionTable>(
        host: &T,
        pairs: impl IntoIterator<Item = (MorId, MorId)>,
    ) -> Result<Self, QuotientError> {
        let mut r = Self::empty(host);
        for (u, v) in pairs {
            if !host.parallel(u, v) {
                return Err(QuotientError::NotParallel(
                    host.mor_name(u).to_string(),
                    host.mor_name(v).to_string(),
                ));
            }
            r.insert(u, v);
        }
        Ok(r)
    }

    /// The equality relation.
    pub fn equality<T: CompositionTable>(host: &T) -> Self {
        let mut r = Self::empty(host);
        for m in host.morphisms() {
            r.insert(m, m);
        }
        r
    }

    /// Builds a relation from a predicate evaluated on all parallel pairs.
    pub fn from_predicate<T: CompositionTable>(host: &T, mut related: impl FnMut(MorId, MorId) -> bool) -> Self {
        let mut r = Self::empty(host);
        for u in host.morphisms() {
            for v in host.morphisms() {
                if host.parallel(u, v) && related(u, v) {
                    r.insert(u, v);
                }
            }
        }
        r
    }

    pub fn contains(&self, u: MorId, v: MorId) -> bool {
        self.rel[u.index() * self.n + v.index()]
    }

    fn insert(&mut self, u: MorId, v: MorId) -> bool {
        let slot = &mut self.rel[u.index() * self.n + v.index()];
        let fresh = !*slot;
        *slot = true;
        fresh
    }

    pub fn pairs(&self) -> impl Iterator<Item = (MorId, MorId)> + '_ {
        (0..self.n * self.n)
            .filter(|&i| self.rel[i])
            .map(|i| (MorId(i / self.n), MorId(i % self.n)))
    }

    pub fn len(&self) -> usize {
        self.rel.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &CatRelation) -> bool {
        self.rel.iter().zip(&other.rel).all(|(&a, &b)| !a || b)
    }

    /// Equivalence classes, each sorted, ordered by least member. Only
    /// meaningful for an equivalence relation.
    pub fn classes(&self) -> Vec<Vec<MorId>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for u in 0..self.n {
            if seen[u] {
                continue;
            }
            let class: Vec<MorId> = (0..self.n)
                .filter(|&v| v == u || self.rel[u * self.n + v])
                .map(MorId)
                .collect();
            for m in &class {
                seen[m.index()] = true;
            }
            out.push(class);
        }
        out
    }
}

/// Relates every pair of parallel morphisms.
pub fn coarse<T: CompositionTable>(c: &T) -> CatRelation {
    CatRelation::from_predicate(c, |_, _| true)
}

/// Whether `r` is reflexive, symmetric, transitive and compatible with
/// composition on both sides. Reports the first defect found.
pub fn is_cat_equiv_rel<T: CompositionTable>(c: &T, r: &CatRelation) -> Result<(), RelationDefect> {
    let name = |m: MorId| c.mor_name(m).to_string();
    for m in c.morphisms() {
        if !r.contains(m, m) {
            return Err(RelationDefect::NotReflexive(name(m)));
        }
    }
    for (u, v) in r.pairs() {
        if !r.contains(v, u) {
            return Err(RelationDefect::NotSymmetric(name(u), name(v)));
        }
    }
    for (u, v) in r.pairs() {
        for w in c.morphisms() {
            if r.contains(v, w) && !r.contains(u, w) {
                return Err(RelationDefect::NotTransitive(name(u), name(v), name(w)));
            }
        }
    }
    // One-sided compatibility plus transitivity gives two-sided compatibility.
    for (u, v) in r.pairs() {
        for w in c.morphisms() {
            if c.source(w) == c.target(u) {
                if let (Some(wu), Some(wv)) = (c.try_compose(w, u), c.try_compose(w, v)) {
                    if !r.contains(wu, wv) {
                        return Err(RelationDefect::NotCongruent { u: name(u), v: name(v), w: name(w) });
                    }
                }
            }
            if c.target(w) == c.source(u) {
                if let (Some(uw), Some(vw)) = (c.try_compose(u, w), c.try_compose(v, w)) {
                    if !r.contains(uw, vw) {
                        return Err(RelationDefect::NotCongruent { u: name(u), v: name(v), w: name(w) });
                    }
                }
            }
        }
    }
    Ok(())
}

/// The smallest categorical equivalence relation containing `r`, by worklist
/// saturation over the pair set.
pub fn cer<T: CompositionTable>(c: &T, r: &CatRelation) -> CatRelation {
    let mut out = CatRelation::empty(c);
    let mut work: Vec<(MorId, MorId)> = Vec::new();
    let push = |out: &mut CatRelation, work: &mut Vec<(MorId, MorId)>, u: MorId, v: MorId| {
        if out.insert(u, v) {
            work.push((u, v));
        }
    };
    for m in c.morphisms() {
        push(&mut out, &mut work, m, m);
    }
    for (u, v) in r.pairs() {
        push(&mut out, &mut work, u, v);
    }
    while let Some((u, v)) = work.pop() {
        push(&mut out, &mut work, v, u);
        for x in c.morphisms() {
            if out.contains(v, x) {
                push(&mut out, &mut work, u, x);
            }
            if out.contains(x, u) {
                push(&mut out, &mut work, x, v);
            }
        }
        for w in c.morphisms() {
            if c.source(w) == c.target(u) {
                if let (Some(wu), Some(wv)) = (c.try_compose(w, u), c.try_compose(w, v)) {
                    push(&mut out, &mut work, wu, wv);
                }
            }
            if c.target(w) == c.source(u) {
                if let (Some(uw), Some(vw)) = (c.try_compose(u, w), c.try_compose(v, w)) {
                    push(&mut out, &mut work, uw, vw);
                }
            }
        }
    }
    out
}

/// A quotient category together with its projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub category: Arc<FiniteCategory>,
    pub projection: Functor,
    class_of: Vec<MorId>,
    relation: CatRelation,
}

impl Quotient {
    pub fn class_of(&self, m: MorId) -> MorId {
        self.class_of[m.index()]
    }

    pub fn relation(&self) -> &CatRelation {
        &self.relation
    }
}

/// Quotient of `c` by a categorical equivalence relation. Objects are kept;
/// each class is named after its identity, or else its least member.
pub fn quotient_category(c: &Arc<FiniteCategory>, r: &CatRelation) -> Result<Quotient, QuotientError> {
    is_cat_equiv_rel(&**c, r).map_err(QuotientError::NotCongruence)?;
    let pre = PreCategory::from_category(c);
    let assoc = associating_quotient(&pre, r)?;
    let category = Arc::new(assoc.category);
    let projection = Functor::new(
        c.clone(),
        category.clone(),
        c.objects().collect(),
        assoc.class_of.clone(),
    );
    Ok(Quotient {
        category,
        projection,
        class_of: assoc.class_of,
        relation: r.clone(),
    })
}

/// The functor out of the quotient through which `f` factors.
pub fn qdotted(q: &Quotient, f: &Functor) -> Result<Functor, QuotientError> {
    let c = q.projection.source();
    for (u, v) in q.relation.pairs() {
        if f.mor(u) != f.mor(v) {
            return Err(QuotientError::NotConstantOnClasses(
                c.mor_name(u).to_string(),
                c.mor_name(v).to_string(),
            ));
        }
    }
    let mut mor_map = vec![None; q.category.mor_count()];
    for m in c.morphisms() {
        mor_map[q.class_of(m).index()].get_or_insert(f.mor(m));
    }
    Ok(Functor::new(
        q.category.clone(),
        f.target().clone(),
        f.ob_map().to_vec(),
        mor_map.into_iter().map(|m| m.expect("projection is surjective")).collect(),
    ))
}

/// A composition table with designated identities, not required to be
/// associative or unital.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreCategory {
    objects: Vec<String>,
    names: Vec<String>,
    source: Vec<ObjId>,
    target: Vec<ObjId>,
    identity: Vec<MorId>,
    comp: Vec<Option<MorId>>,
}

impl CompositionTable for PreCategory {
    fn mor_count(&self) -> usize {
        self.names.len()
    }
    fn obj_count(&self) -> usize {
        self.objects.len()
    }
    fn source(&self, m: MorId) -> ObjId {
        self.source[m.index()]
    }
    fn target(&self, m: MorId) -> ObjId {
        self.target[m.index()]
    }
    fn identity(&self, x: ObjId) -> MorId {
        self.identity[x.index()]
    }
    fn try_compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.comp[g.index() * self.names.len() + f.index()]
    }
    fn mor_name(&self, m: MorId) -> &str {
        &self.names[m.index()]
    }
}

impl PreCategory {
    /// `morphisms[i] = (name, source, target)`; `compose(g, f)` is queried on
    /// every composable pair and must return a morphism with the right endpoints.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<(String, ObjId, ObjId)>,
        identity: Vec<MorId>,
        mut compose: impl FnMut(MorId, MorId) -> MorId,
    ) -> Result<Self, QuotientError> {
        let n = morphisms.len();
        let names: Vec<String> = morphisms.iter().map(|m| m.0.clone()).collect();
        let source: Vec<ObjId> = morphisms.iter().map(|m| m.1).collect();
        let target: Vec<ObjId> = morphisms.iter().map(|m| m.2).collect();
        let mut comp = vec![None; n * n];
        for g in 0..n {
            for f in 0..n {
                if source[g] != target[f] {
                    continue;
                }
                let h = compose(MorId(g), MorId(f));
                if h.index() >= n || source[h.index()] != source[f] || target[h.index()] != target[g] {
                    return Err(QuotientError::NotTotal {
                        g: names[g].clone(),
                        f: names[f].clone(),
                    });
                }
                comp[g * n + f] = Some(h);
            }
        }
        for (x, &i) in identity.iter().enumerate() {
            assert!(source[i.index()].index() == x && target[i.index()].index() == x);
        }
        Ok(PreCategory {
            objects,
            names,
            source,
            target,
            identity,
            comp,
        })
    }

    pub fn from_category(c: &FiniteCategory) -> Self {
        PreCategory::new(
            c.objects().map(|x| c.obj_name(x).to_string()).collect(),
            c.morphisms()
                .map(|m| (c.mor_name(m).to_string(), c.source(m), c.target(m)))
                .collect(),
            c.objects().map(|x| c.identity(x)).collect(),
            |g, f| c.comp(g, f),
        )
        .expect("a valid category is a total table")
    }

    pub fn obj_name(&self, x: ObjId) -> &str {
        &self.objects[x.index()]
    }

    pub fn comp(&self, g: MorId, f: MorId) -> MorId {
        self.try_compose(g, f).expect("composable pair")
    }
}

/// Result of [`associating_quotient`]: the category of classes and the class
/// of each pre-category morphism.
#[derive(Clone, Debug)]
pub struct AssociatedQuotient {
    pub category: FiniteCategory,
    pub class_of: Vec<MorId>,
    /// Least member of each class, indexed by class id.
    pub representative: Vec<MorId>,
}

/// Quotients a pre-category by an equivalence congruence, checking that the
/// induced composition on classes is associative and unital.
pub fn associating_quotient(p: &PreCategory, r: &CatRelation) -> Result<AssociatedQuotient, QuotientError> {
    is_cat_equiv_rel(p, r).map_err(QuotientError::NotCongruence)?;
    let classes = r.classes();
    let mut class_idx = vec![0usize; p.mor_count()];
    for (k, class) in classes.iter().enumerate() {
        for m in class {
            class_idx[m.index()] = k;
        }
    }
    let rep = |k: usize| classes[k][0];
    let ccomp = |g: usize, f: usize| class_idx[p.comp(rep(g), rep(f)).index()];

    for (k, class) in classes.iter().enumerate() {
        let m = class[0];
        let left = class_idx[p.identity(p.target(m)).index()];
        let right = class_idx[p.identity(p.source(m)).index()];
        if ccomp(left, k) != k {
            return Err(QuotientError::QuotientNotCategory {
                law: "left identity",
                witness: format!("[{}]", p.mor_name(m)),
            });
        }
        if ccomp(k, right) != k {
            return Err(QuotientError::QuotientNotCategory {
                law: "right identity",
                witness: format!("[{}]", p.mor_name(m)),
            });
        }
    }
    let composable = |g: usize, f: usize| p.source(rep(g)) == p.target(rep(f));
    for f in 0..classes.len() {
        for g in 0..classes.len() {
            if !composable(g, f) {
                continue;
            }
            let gf = ccomp(g, f);
            for h in 0..classes.len() {
                if composable(h, g) && ccomp(h, gf) != ccomp(ccomp(h, g), f) {
                    return Err(QuotientError::QuotientNotCategory {
                        law: "associativity",
                        witness: format!(
                            "[{}] . [{}] . [{}]",
                            p.mor_name(rep(h)),
                            p.mor_name(rep(g)),
                            p.mor_name(rep(f))
                        ),
                    });
                }
            }
        }
    }

    let identity_classes: BTreeSet<usize> = (0..p.obj_count())
        .map(|x| class_idx[p.identity(ObjId(x)).index()])
        .collect();
    let class_name = |k: usize| {
        let m = rep(k);
        if identity_classes.contains(&k) {
            identity_name(p.obj_name(p.source(m)))
        } else {
            p.mor_name(m).to_string()
        }
    };
    let mut b = CategoryBuilder::new();
    for x in 0..p.obj_count() {
        b.object(p.obj_name(ObjId(x)));
    }
    for k in 0..classes.len() {
        if !identity_classes.contains(&k) {
            let m = rep(k);
            b.morphism(&class_name(k), p.obj_name(p.source(m)), p.obj_name(p.target(m)));
        }
    }
    for g in 0..classes.len() {
        for f in 0..classes.len() {
            if composable(g, f) && !identity_classes.contains(&g) && !identity_classes.contains(&f) {
                b.compose(&class_name(g), &class_name(f), &class_name(ccomp(g, f)));
            }
        }
    }
    let category = b.build_unchecked().map_err(|e| QuotientError::QuotientNotCategory {
        law: "naming",
        witness: e.to_string(),
    })?;
    if let Err(v) = category.validate() {
        return Err(QuotientError::QuotientNotCategory {
            law: "category",
            witness: v.to_string(),
        });
    }
    let class_ids: Vec<MorId> = (0..classes.len()).map(|k| category.m(&class_name(k))).collect();
    let mut representative = vec![MorId(0); classes.len()];
    for k in 0..classes.len() {
        representative[class_ids[k].index()] = rep(k);
    }
    let class_of = class_idx.iter().map(|&k| class_ids[k]).collect();
    Ok(AssociatedQuotient {
        category,
        class_of,
        representative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Oracle: naive fixed-point iteration of all closure rules until stable.
    fn naive_closure(c: &FiniteCategory, seed: &[(MorId, MorId)]) -> BTreeSet<(MorId, MorId)> {
        let mut s: BTreeSet<(MorId, MorId)> = seed.iter().copied().collect();
        for m in c.morphisms() {
            s.insert((m, m));
        }
        loop {
            let mut next = s.clone();
            for &(u, v) in &s {
                next.insert((v, u));
                for &(x, y) in &s {
                    if x == v {
                        next.insert((u, y));
                    }
                    if c.composable(x, u) && c.composable(y, v) {
                        next.insert((c.comp(x, u), c.comp(y, v)));
                    }
                }
            }
            if next == s {
                return s;
            }
            s = next;
        }
    }

    #[test]
    fn coarse_on_fixtures() {
        let i = fixtures::walking_arrow();
        let r = coarse(&i);
        assert!(r.pairs().all(|(u, v)| u == v));
        assert_eq!(r.len(), 3);

        let p = fixtures::parallel_pair();
        let r = coarse(&p);
        let nontrivial: Vec<_> = r.pairs().filter(|(u, v)| u != v).collect();
        let (f, g) = (p.m("f"), p.m("g"));
        assert_eq!(nontrivial, vec![(f, g), (g, f)]);

        let empty = CategoryBuilder::new().build().unwrap();
        assert!(coarse(&empty).is_empty());
    }

    #[test]
    fn equivalence_checks() {
        let p = fixtures::parallel_pair();
        assert_eq!(is_cat_equiv_rel(&p, &CatRelation::equality(&p)), Ok(()));
        assert_eq!(is_cat_equiv_rel(&p, &coarse(&p)), Ok(()));
        let bare = CatRelation::new(&p, [(p.m("f"), p.m("g"))]).unwrap();
        assert!(matches!(
            is_cat_equiv_rel(&p, &bare),
            Err(RelationDefect::NotReflexive(_))
        ));
        assert!(matches!(
            CatRelation::new(&p, [(p.m("f"), p.m("t"))]),
            Err(QuotientError::NotParallel(..))
        ));
    }

    #[test]
    fn cer_examples() {
        let p = fixtures::parallel_pair();
        assert_eq!(cer(&p, &CatRelation::empty(&p)), CatRelation::equality(&p));
        assert_eq!(cer(&p, &coarse(&p)), coarse(&p));
        let (f, g) = (p.m("f"), p.m("g"));
        let closed = cer(&p, &CatRelation::new(&p, [(f, g)]).unwrap());
        let oracle = naive_closure(&p, &[(f, g)]);
        assert_eq!(closed.pairs().collect::<BTreeSet<_>>(), oracle);
        let nontrivial: Vec<_> = closed.pairs().filter(|(u, v)| u != v).collect();
        assert_eq!(nontrivial, vec![(f, g), (g, f)]);
    }

    fn random_relation(c: &FiniteCategory, rng: &mut ChaCha8Rng, density: f64) -> CatRelation {
        CatRelation::from_predicate(c, |_, _| rng.gen_bool(density))
    }

    #[test]
    fn cer_is_extensive_monotone_idempotent_and_minimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cats = [
            fixtures::parallel_pair(),
            fixtures::swapped_pair(),
            fixtures::chain(3),
            fixtures::z2(),
        ];
        for c in &cats {
            for _ in 0..40 {
                let r = random_relation(c, &mut rng, 0.2);
                let extra = random_relation(c, &mut rng, 0.2);
                let bigger = CatRelation::new(c, r.pairs().chain(extra.pairs())).unwrap();
                let cr = cer(c, &r);
                assert!(r.is_subset(&cr));
                assert!(cr.is_subset(&cer(c, &bigger)));
                assert_eq!(cer(c, &cr), cr);
                assert_eq!(is_cat_equiv_rel(c, &cr), Ok(()));
                let seed: Vec<_> = r.pairs().collect();
                assert_eq!(cr.pairs().collect::<BTreeSet<_>>(), naive_closure(c, &seed));
                // minimality against sampled categorical equivalence relations above r
                for s in [coarse(c), cer(c, &bigger)] {
                    assert!(cr.is_subset(&s));
                }
            }
        }
    }

    #[test]
    fn quotient_examples() {
        let p = Arc::new(fixtures::parallel_pair());
        let q = quotient_category(&p, &CatRelation::equality(&*p)).unwrap();
        assert_eq!(*q.category, *p);

        let (f, g) = (p.m("f"), p.m("g"));
        let r = cer(&*p, &CatRelation::new(&*p, [(f, g)]).unwrap());
        let q = quotient_category(&p, &r).unwrap();
        let (x, y) = (q.category.object("X").unwrap(), q.category.object("Y").unwrap());
        assert_eq!(q.category.hom(x, y).count(), 1);
        assert_eq!(q.category.validate(), Ok(()));
        assert_eq!(q.projection.check(), Ok(()));
        assert_eq!(q.class_of(f), q.class_of(g));

        let i = Arc::new(fixtures::walking_arrow());
        let q = quotient_category(&i, &coarse(&*i)).unwrap();
        assert_eq!(*q.category, *i);

        let bad = CatRelation::new(&*p, [(f, g)]).unwrap();
        assert!(matches!(quotient_category(&p, &bad), Err(QuotientError::NotCongruence(_))));
    }

    #[test]
    fn qdotted_factors_and_is_unique() {
        let p = Arc::new(fixtures::parallel_pair());
        let (f, g) = (p.m("f"), p.m("g"));
        let r = cer(&*p, &CatRelation::new(&*p, [(f, g)]).unwrap());
        let q = quotient_category(&p, &r).unwrap();

        let t = Arc::new(fixtures::terminal());
        let to_t = Functor::to_terminal(p.clone(), t);
        let dotted = qdotted(&q, &to_t).unwrap();
        assert_eq!(dotted.check(), Ok(()));
        assert!(dotted.after(&q.projection).same_maps(&to_t));

        // identity of p is not constant on the class {f, g}
        assert!(matches!(
            qdotted(&q, &Functor::identity(p.clone())),
            Err(QuotientError::NotConstantOnClasses(..))
        ));

        // uniqueness: every functor G out of the quotient is recovered
        for target in [fixtures::walking_arrow(), fixtures::chain(3), fixtures::z2()] {
            let target = Arc::new(target);
            let gs = crate::verify::enumerate_functors(&q.category, &target, 1 << 20).unwrap();
            assert!(!gs.is_empty() || target.obj_count() == 0);
            for gfun in gs {
                let back = qdotted(&q, &gfun.after(&q.projection)).unwrap();
                assert!(back.same_maps(&gfun));
            }
        }

        let eq = quotient_category(&p, &CatRelation::equality(&*p)).unwrap();
        let id = Functor::identity(p.clone());
        let d = qdotted(&eq, &id).unwrap();
        assert!(d.after(&eq.projection).same_maps(&id));
    }

    #[test]
    fn associating_quotient_rejects_non_associative_table() {
        // one object, {1, a, b}: a.a = b, a.b = a, b.a = b, b.b = a
        let idx = |s: &str| match s {
            "1" => MorId(0),
            "a" => MorId(1),
            _ => MorId(2),
        };
        let table = |g: MorId, f: MorId| match (g.index(), f.index()) {
            (0, x) | (x, 0) => MorId(x),
            (1, 1) => idx("b"),
            (1, 2) => idx("a"),
            (2, 1) => idx("b"),
            _ => idx("a"),
        };
        let o = ObjId(0);
        let pre = PreCategory::new(
            vec!["x".into()],
            vec![("1_x".into(), o, o), ("a".into(), o, o), ("b".into(), o, o)],
            vec![MorId(0)],
            table,
        )
        .unwrap();
        let res = associating_quotient(&pre, &CatRelation::equality(&pre));
        assert!(matches!(
            res,
            Err(QuotientError::QuotientNotCategory { law: "associativity", .. })
        ));
    }

    #[test]
    fn associating_quotient_of_category_by_equality() {
        let c = fixtures::swapped_pair();
        let pre = PreCategory::from_category(&c);
        let q = associating_quotient(&pre, &CatRelation::equality(&pre)).unwrap();
        assert_eq!(q.category, c);
    }
}
