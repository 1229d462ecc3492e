//! Finite categories given by an explicit composition table, functors between
//! them, localizing sets of morphisms, and the opposite construction.
//!
//! Objects and morphisms are addressed by dense indices ([`ObjId`], [`MorId`]).
//! Index order always coincides with the lexicographic order of names, so the
//! index order is the canonical order used for every tie-break downstream.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjId(pub(crate) usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MorId(pub(crate) usize);

impl ObjId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl MorId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Name of the identity morphism of an object.
pub fn identity_name(object: &str) -> String {
    format!("1_{object}")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatError {
    #[error("duplicate object `{0}`")]
    DuplicateObject(String),
    #[error("duplicate morphism `{0}`")]
    DuplicateMorphism(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("`{0}` is reserved for an identity morphism")]
    ReservedIdentity(String),
    #[error("composite for `{g} . {f}` given twice")]
    DuplicateComposite { g: String, f: String },
    #[error("`{g}` and `{f}` are not composable")]
    NotComposable { g: String, f: String },
    #[error("invalid category: {0}")]
    Invalid(Violation),
}

/// First violated category axiom, with a witness.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Violation {
    #[error("composite `{g} . {f}` is missing")]
    MissingComposite { g: String, f: String },
    #[error("composite given for non-composable pair `{g} . {f}`")]
    CompositeOutsideDomain { g: String, f: String },
    #[error("composite `{g} . {f} = {h}` has wrong endpoints")]
    CompositeEndpoints { g: String, f: String, h: String },
    #[error("identity law fails for `{f}` on the {side} side")]
    IdentityLaw { f: String, side: Side },
    #[error("associativity fails on `{h} . {g} . {f}`")]
    NotAssociative { h: String, g: String, f: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left => write!(f, "left"),
            Side::Right => write!(f, "right"),
        }
    }
}

/// Read access to a (possibly unlawful) composition table.
///
/// Implemented by [`FiniteCategory`] and by [`crate::quotient::PreCategory`], so
/// relations and their closures work on both.
pub trait CompositionTable {
    fn mor_count(&self) -> usize;
    fn obj_count(&self) -> usize;
    fn source(&self, m: MorId) -> ObjId;
    fn target(&self, m: MorId) -> ObjId;
    fn identity(&self, x: ObjId) -> MorId;
    /// `g ∘ f`, if the table has an entry.
    fn try_compose(&self, g: MorId, f: MorId) -> Option<MorId>;
    fn mor_name(&self, m: MorId) -> &str;

    fn morphisms(&self) -> MorIter {
        MorIter(0..self.mor_count())
    }

    fn parallel(&self, u: MorId, v: MorId) -> bool {
        self.source(u) == self.source(v) && self.target(u) == self.target(v)
    }
}

pub struct MorIter(std::ops::Range<usize>);

impl Iterator for MorIter {
    type Item = MorId;
    fn next(&mut self) -> Option<MorId> {
        self.0.next().map(MorId)
    }
}

impl DoubleEndedIterator for MorIter {
    fn next_back(&mut self) -> Option<MorId> {
        self.0.next_back().map(MorId)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    names: Vec<String>,
    source: Vec<ObjId>,
    target: Vec<ObjId>,
    identity: Vec<MorId>,
    /// Row-major, `comp[g * n + f] = g ∘ f`.
    comp: Vec<Option<MorId>>,
    obj_index: HashMap<String, ObjId>,
    mor_index: HashMap<String, MorId>,
}

impl CompositionTable for FiniteCategory {
    fn mor_count(&self) -> usize {
        self.names.len()
    }
    fn obj_count(&self) -> usize {
        self.objects.len()
    }
    fn source(&self, m: MorId) -> ObjId {
        self.source[m.0]
    }
    fn target(&self, m: MorId) -> ObjId {
        self.target[m.0]
    }
    fn identity(&self, x: ObjId) -> MorId {
        self.identity[x.0]
    }
    fn try_compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.comp[g.0 * self.names.len() + f.0]
    }
    fn mor_name(&self, m: MorId) -> &str {
        &self.names[m.0]
    }
}

impl FiniteCategory {
    pub fn objects(&self) -> impl Iterator<Item = ObjId> + '_ {
        (0..self.objects.len()).map(ObjId)
    }

    pub fn obj_name(&self, x: ObjId) -> &str {
        &self.objects[x.0]
    }

    pub fn object(&self, name: &str) -> Option<ObjId> {
        self.obj_index.get(name).copied()
    }

    pub fn mor(&self, name: &str) -> Option<MorId> {
        self.mor_index.get(name).copied()
    }

    /// Panicking lookup, for tests and fixtures.
    pub fn m(&self, name: &str) -> MorId {
        self.mor(name)
            .unwrap_or_else(|| panic!("no morphism named `{name}`"))
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        self.identity[self.source[m.0].0] == m
    }

    pub fn composable(&self, g: MorId, f: MorId) -> bool {
        self.source[g.0] == self.target[f.0]
    }

    /// `g ∘ f` (apply `f` first).
    pub fn compose(&self, g: MorId, f: MorId) -> Result<MorId, CatError> {
        if !self.composable(g, f) {
            return Err(CatError::NotComposable {
                g: self.names[g.0].clone(),
                f: self.names[f.0].clone(),
            });
        }
        self.try_compose(g, f).ok_or_else(|| CatError::NotComposable {
            g: self.names[g.0].clone(),
            f: self.names[f.0].clone(),
        })
    }

    /// `g ∘ f` on a validated category. Panics on a non-composable pair.
    pub fn comp(&self, g: MorId, f: MorId) -> MorId {
        match self.try_compose(g, f) {
            Some(h) => h,
            None => panic!(
                "`{}` . `{}` is not defined",
                self.names[g.0], self.names[f.0]
            ),
        }
    }

    /// Morphisms `x -> y`, in canonical order.
    pub fn hom(&self, x: ObjId, y: ObjId) -> impl Iterator<Item = MorId> + '_ {
        self.morphisms()
            .filter(move |&m| self.source(m) == x && self.target(m) == y)
    }

    /// Morphisms with the given source, in canonical order.
    pub fn out_of(&self, x: ObjId) -> impl Iterator<Item = MorId> + '_ {
        self.morphisms().filter(move |&m| self.source(m) == x)
    }

    pub fn into_obj(&self, y: ObjId) -> impl Iterator<Item = MorId> + '_ {
        self.morphisms().filter(move |&m| self.target(m) == y)
    }

    /// A two-sided inverse of `m`, least in canonical order.
    pub fn inverse(&self, m: MorId) -> Option<MorId> {
        self.hom(self.target(m), self.source(m)).find(|&g| {
            self.comp(g, m) == self.identity(self.source(m))
                && self.comp(m, g) == self.identity(self.target(m))
        })
    }

    pub fn is_groupoid(&self) -> bool {
        self.morphisms().all(|m| self.inverse(m).is_some())
    }

    /// Checks the category axioms, reporting the first violation.
    pub fn validate(&self) -> Result<(), Violation> {
        let n = self.mor_count();
        let name = |m: MorId| self.names[m.0].clone();
        for g in self.morphisms() {
            for f in self.morphisms() {
                let entry = self.comp[g.0 * n + f.0];
                match (self.composable(g, f), entry) {
                    (true, None) => {
                        return Err(Violation::MissingComposite { g: name(g), f: name(f) })
                    }
                    (false, Some(_)) => {
                        return Err(Violation::CompositeOutsideDomain { g: name(g), f: name(f) })
                    }
                    (true, Some(h)) => {
                        if self.source(h) != self.source(f) || self.target(h) != self.target(g) {
                            return Err(Violation::CompositeEndpoints {
                                g: name(g),
                                f: name(f),
                                h: name(h),
                            });
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        for f in self.morphisms() {
            if self.comp(self.identity(self.target(f)), f) != f {
                return Err(Violation::IdentityLaw { f: name(f), side: Side::Left });
            }
            if self.comp(f, self.identity(self.source(f))) != f {
                return Err(Violation::IdentityLaw { f: name(f), side: Side::Right });
            }
        }
        for f in self.morphisms() {
            for g in self.out_of(self.target(f)) {
                let gf = self.comp(g, f);
                for h in self.out_of(self.target(g)) {
                    if self.comp(h, gf) != self.comp(self.comp(h, g), f) {
                        return Err(Violation::NotAssociative {
                            h: name(h),
                            g: name(g),
                            f: name(f),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Same identifiers, endpoints swapped, composition arguments swapped.
    pub fn opposite(&self) -> FiniteCategory {
        let n = self.mor_count();
        let mut comp = vec![None; n * n];
        for g in 0..n {
            for f in 0..n {
                comp[f * n + g] = self.comp[g * n + f];
            }
        }
        FiniteCategory {
            objects: self.objects.clone(),
            names: self.names.clone(),
            source: self.target.clone(),
            target: self.source.clone(),
            identity: self.identity.clone(),
            comp,
            obj_index: self.obj_index.clone(),
            mor_index: self.mor_index.clone(),
        }
    }

    /// Renames morphisms, returning the renamed category and the old-to-new
    /// index map. Identity names cannot be changed.
    pub fn rename_morphisms(
        &self,
        rename: impl Fn(MorId) -> String,
    ) -> Result<(FiniteCategory, Vec<MorId>), CatError> {
        let mut b = CategoryBuilder::new();
        for x in self.objects() {
            b.object(self.obj_name(x));
        }
        let mut new_names = Vec::with_capacity(self.mor_count());
        for m in self.morphisms() {
            let nm = if self.is_identity(m) {
                self.names[m.0].clone()
            } else {
                rename(m)
            };
            if !self.is_identity(m) {
                b.morphism(
                    &nm,
                    self.obj_name(self.source(m)),
                    self.obj_name(self.target(m)),
                );
            }
            new_names.push(nm);
        }
        for g in self.morphisms() {
            for f in self.morphisms() {
                if self.is_identity(g) || self.is_identity(f) {
                    continue;
                }
                if let Some(h) = self.try_compose(g, f) {
                    b.compose(&new_names[g.0], &new_names[f.0], &new_names[h.0]);
                }
            }
        }
        let c = b.build_unchecked()?;
        let map = new_names.iter().map(|nm| c.m(nm)).collect();
        Ok((c, map))
    }
}

/// Incremental, name-based construction of a [`FiniteCategory`].
///
/// Identities `1_<object>` are generated automatically; their composites are
/// filled in unless an explicit entry was given.
#[derive(Default, Debug, Clone)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    morphisms: Vec<(String, String, String)>,
    comps: Vec<(String, String, String)>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, name: &str) -> &mut Self {
        self.objects.push(name.to_string());
        self
    }

    pub fn morphism(&mut self, name: &str, source: &str, target: &str) -> &mut Self {
        self.morphisms
            .push((name.to_string(), source.to_string(), target.to_string()));
        self
    }

    /// Declares `g ∘ f = h`.
    pub fn compose(&mut self, g: &str, f: &str, h: &str) -> &mut Self {
        self.comps
            .push((g.to_string(), f.to_string(), h.to_string()));
        self
    }

    /// Builds the table without checking category laws.
    pub fn build_unchecked(&self) -> Result<FiniteCategory, CatError> {
        let objects: BTreeSet<String> = {
            let mut set = BTreeSet::new();
            for o in &self.objects {
                if !set.insert(o.clone()) {
                    return Err(CatError::DuplicateObject(o.clone()));
                }
            }
            set
        };
        let objects: Vec<String> = objects.into_iter().collect();
        let obj_index: HashMap<String, ObjId> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.clone(), ObjId(i)))
            .collect();

        let mut decl: BTreeMap<String, (ObjId, ObjId)> = BTreeMap::new();
        for o in &objects {
            let x = obj_index[o];
            decl.insert(identity_name(o), (x, x));
        }
        for (name, s, t) in &self.morphisms {
            if let Some(rest) = name.strip_prefix("1_") {
                if obj_index.contains_key(rest) {
                    return Err(CatError::ReservedIdentity(name.clone()));
                }
            }
            let s = *obj_index
                .get(s)
                .ok_or_else(|| CatError::UnknownObject(s.clone()))?;
            let t = *obj_index
                .get(t)
                .ok_or_else(|| CatError::UnknownObject(t.clone()))?;
            if decl.insert(name.clone(), (s, t)).is_some() {
                return Err(CatError::DuplicateMorphism(name.clone()));
            }
        }
        let names: Vec<String> = decl.keys().cloned().collect();
        let mor_index: HashMap<String, MorId> = names
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), MorId(i)))
            .collect();
        let source: Vec<ObjId> = decl.values().map(|&(s, _)| s).collect();
        let target: Vec<ObjId> = decl.values().map(|&(_, t)| t).collect();
        let identity: Vec<MorId> = objects
            .iter()
            .map(|o| mor_index[&identity_name(o)])
            .collect();

        let n = names.len();
        let mut comp = vec![None; n * n];
        let lookup = |s: &String| {
            mor_index
                .get(s)
                .copied()
                .ok_or_else(|| CatError::UnknownMorphism(s.clone()))
        };
        for (g, f, h) in &self.comps {
            let (gi, fi, hi) = (lookup(g)?, lookup(f)?, lookup(h)?);
            if source[gi.0] != target[fi.0] {
                return Err(CatError::NotComposable { g: g.clone(), f: f.clone() });
            }
            let slot = &mut comp[gi.0 * n + fi.0];
            if slot.is_some() {
                return Err(CatError::DuplicateComposite { g: g.clone(), f: f.clone() });
            }
            *slot = Some(hi);
        }
        for m in 0..n {
            let left = identity[target[m].0];
            let right = identity[source[m].0];
            comp[left.0 * n + m].get_or_insert(MorId(m));
            comp[m * n + right.0].get_or_insert(MorId(m));
        }
        Ok(FiniteCategory {
            objects,
            names,
            source,
            target,
            identity,
            comp,
            obj_index,
            mor_index,
        })
    }

    /// Builds and validates.
    pub fn build(&self) -> Result<FiniteCategory, CatError> {
        let c = self.build_unchecked()?;
        c.validate().map_err(CatError::Invalid)?;
        Ok(c)
    }
}

/// A subset of the morphisms of a host category.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SigmaSet {
    member: Vec<bool>,
}

impl SigmaSet {
    pub fn new(host: &FiniteCategory, members: impl IntoIterator<Item = MorId>) -> Self {
        let mut member = vec![false; host.mor_count()];
        for m in members {
            member[m.0] = true;
        }
        SigmaSet { member }
    }

    pub fn empty(host: &FiniteCategory) -> Self {
        Self::new(host, [])
    }

    pub fn identities(host: &FiniteCategory) -> Self {
        Self::new(host, host.objects().map(|x| host.identity(x)))
    }

    pub fn all(host: &FiniteCategory) -> Self {
        Self::new(host, host.morphisms())
    }

    pub fn from_names<'a>(
        host: &FiniteCategory,
        names: impl IntoIterator<Item = &'a str>,
    ) -> Result<Self, CatError> {
        let ids = names
            .into_iter()
            .map(|n| host.mor(n).ok_or_else(|| CatError::UnknownMorphism(n.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(host, ids))
    }

    pub fn contains(&self, m: MorId) -> bool {
        self.member[m.0]
    }

    pub fn members(&self) -> impl Iterator<Item = MorId> + '_ {
        self.member
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| MorId(i))
    }

    pub fn len(&self) -> usize {
        self.member.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn host_size(&self) -> usize {
        self.member.len()
    }

    pub fn is_subset(&self, other: &SigmaSet) -> bool {
        self.member
            .iter()
            .zip(&other.member)
            .all(|(&a, &b)| !a || b)
    }
}

/// `(C, Σ) ↦ (C^op, Σ)`. Identifiers are shared, so Σ carries over unchanged.
pub fn opposite(c: &FiniteCategory, sigma: &SigmaSet) -> (FiniteCategory, SigmaSet) {
    (c.opposite(), sigma.clone())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FunctorViolation {
    #[error("object map has wrong length")]
    ObjectMapShape,
    #[error("morphism map has wrong length")]
    MorphismMapShape,
    #[error("`{0}` is sent to a morphism with the wrong endpoints")]
    Endpoints(String),
    #[error("identity of `{0}` is not preserved")]
    Identity(String),
    #[error("composite `{g} . {f}` is not preserved")]
    Composition { g: String, f: String },
}

/// A functor between finite categories, given by its object and morphism maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    source: Arc<FiniteCategory>,
    target: Arc<FiniteCategory>,
    ob_map: Vec<ObjId>,
    mor_map: Vec<MorId>,
}

impl Functor {
    /// Assembles a functor without checking the functor laws; see [`Functor::check`].
    pub fn new(
        source: Arc<FiniteCategory>,
        target: Arc<FiniteCategory>,
        ob_map: Vec<ObjId>,
        mor_map: Vec<MorId>,
    ) -> Self {
        Functor {
            source,
            target,
            ob_map,
            mor_map,
        }
    }

    pub fn identity(c: Arc<FiniteCategory>) -> Self {
        let ob_map = c.objects().collect();
        let mor_map = c.morphisms().collect();
        Functor::new(c.clone(), c, ob_map, mor_map)
    }

    /// The unique functor into a category with one object and one morphism.
    pub fn to_terminal(c: Arc<FiniteCategory>, terminal: Arc<FiniteCategory>) -> Self {
        let x = ObjId(0);
        let id = terminal.identity(x);
        Functor::new(
            c.clone(),
            terminal,
            vec![x; c.obj_count()],
            vec![id; c.mor_count()],
        )
    }

    pub fn source(&self) -> &Arc<FiniteCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteCategory> {
        &self.target
    }

    pub fn ob(&self, x: ObjId) -> ObjId {
        self.ob_map[x.0]
    }

    pub fn mor(&self, m: MorId) -> MorId {
        self.mor_map[m.0]
    }

    pub fn ob_map(&self) -> &[ObjId] {
        &self.ob_map
    }

    pub fn mor_map(&self) -> &[MorId] {
        &self.mor_map
    }

    /// `self ∘ before`.
    pub fn after(&self, before: &Functor) -> Functor {
        assert!(
            *before.target == *self.source,
            "functors are not composable"
        );
        Functor::new(
            before.source.clone(),
            self.target.clone(),
            before.ob_map.iter().map(|&x| self.ob(x)).collect(),
            before.mor_map.iter().map(|&m| self.mor(m)).collect(),
        )
    }

    /// Same maps, between the opposite categories.
    pub fn opposite(&self) -> Functor {
        Functor::new(
            Arc::new(self.source.opposite()),
            Arc::new(self.target.opposite()),
            self.ob_map.clone(),
            self.mor_map.clone(),
        )
    }

    /// Whether the two functors have the same maps (sources and targets are
    /// assumed to agree).
    pub fn same_maps(&self, other: &Functor) -> bool {
        self.ob_map == other.ob_map && self.mor_map == other.mor_map
    }

    pub fn is_identity(&self) -> bool {
        *self.source == *self.target
            && self.ob_map.iter().enumerate().all(|(i, x)| x.0 == i)
            && self.mor_map.iter().enumerate().all(|(i, m)| m.0 == i)
    }

    /// Checks endpoints, identities and composition by full table scan.
    pub fn check(&self) -> Result<(), FunctorViolation> {
        let (c, x) = (&*self.source, &*self.target);
        if self.ob_map.len() != c.obj_count() {
            return Err(FunctorViolation::ObjectMapShape);
        }
        if self.mor_map.len() != c.mor_count() {
            return Err(FunctorViolation::MorphismMapShape);
        }
        if self.ob_map.iter().any(|o| o.0 >= x.obj_count())
            || self.mor_map.iter().any(|m| m.0 >= x.mor_count())
        {
            return Err(FunctorViolation::MorphismMapShape);
        }
        for m in c.morphisms() {
            let fm = self.mor(m);
            if x.source(fm) != self.ob(c.source(m)) || x.target(fm) != self.ob(c.target(m)) {
                return Err(FunctorViolation::Endpoints(c.mor_name(m).to_string()));
            }
        }
        for o in c.objects() {
            if self.mor(c.identity(o)) != x.identity(self.ob(o)) {
                return Err(FunctorViolation::Identity(c.obj_name(o).to_string()));
            }
        }
        for f in c.morphisms() {
            for g in c.out_of(c.target(f)) {
                if self.mor(c.comp(g, f)) != x.comp(self.mor(g), self.mor(f)) {
                    return Err(FunctorViolation::Composition {
                        g: c.mor_name(g).to_string(),
                        f: c.mor_name(f).to_string(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Validation report for a category; `Ok(())` means every axiom holds.
pub fn validate_category(c: &FiniteCategory) -> Result<(), Violation> {
    c.validate()
}

pub fn check_functor(f: &Functor) -> Result<(), FunctorViolation> {
    f.check()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn walking_arrow_is_valid() {
        let c = fixtures::walking_arrow();
        assert_eq!(c.validate(), Ok(()));
        assert_eq!(c.mor_count(), 3);
        let f = c.m("f");
        assert_eq!(c.compose(c.m("1_1"), f), Ok(f));
        assert!(matches!(
            c.compose(f, f),
            Err(CatError::NotComposable { .. })
        ));
    }

    #[test]
    fn parallel_pair_table() {
        let c = fixtures::parallel_pair();
        assert_eq!(c.compose(c.m("t"), c.m("f")), Ok(c.m("h")));
        assert_eq!(c.compose(c.m("t"), c.m("g")), Ok(c.m("h")));
        assert_eq!(c.mor_count(), 7);
    }

    #[test]
    fn missing_composite_is_reported() {
        let mut b = CategoryBuilder::new();
        b.object("X").object("Y").object("Z");
        b.morphism("f", "X", "Y").morphism("g", "X", "Y");
        b.morphism("t", "Y", "Z").morphism("h", "X", "Z");
        b.compose("t", "f", "h");
        let c = b.build_unchecked().unwrap();
        assert_eq!(
            c.validate(),
            Err(Violation::MissingComposite {
                g: "t".into(),
                f: "g".into()
            })
        );
    }

    fn brute_force_assoc_failure(c: &FiniteCategory) -> Option<(MorId, MorId, MorId)> {
        for h in c.morphisms() {
            for g in c.morphisms() {
                for f in c.morphisms() {
                    let lhs = c.comp(h, c.comp(g, f));
                    let rhs = c.comp(c.comp(h, g), f);
                    if lhs != rhs {
                        return Some((h, g, f));
                    }
                }
            }
        }
        None
    }

    #[test]
    fn non_associative_magma_is_rejected() {
        // one object, a and b non-identity: a.a = b, a.b = a, b.a = b, b.b = a
        let mut b = CategoryBuilder::new();
        b.object("x").morphism("a", "x", "x").morphism("b", "x", "x");
        b.compose("a", "a", "b")
            .compose("a", "b", "a")
            .compose("b", "a", "b")
            .compose("b", "b", "a");
        let c = b.build_unchecked().unwrap();
        assert!(brute_force_assoc_failure(&c).is_some());
        match c.validate() {
            Err(Violation::NotAssociative { h, g, f }) => {
                let (h, g, f) = (c.m(&h), c.m(&g), c.m(&f));
                assert_ne!(c.comp(h, c.comp(g, f)), c.comp(c.comp(h, g), f));
            }
            other => panic!("expected associativity failure, got {other:?}"),
        }
        assert!(b.build().is_err());
    }

    #[test]
    fn identity_declared_as_morphism_is_rejected() {
        let mut b = CategoryBuilder::new();
        b.object("x").morphism("1_x", "x", "x");
        assert_eq!(
            b.build_unchecked(),
            Err(CatError::ReservedIdentity("1_x".into()))
        );
    }

    #[test]
    fn opposite_swaps_endpoints_and_is_involutive() {
        let c = fixtures::walking_arrow();
        let sigma = SigmaSet::from_names(&c, ["f"]).unwrap();
        let (op, op_sigma) = opposite(&c, &sigma);
        let f = op.m("f");
        assert_eq!(op.obj_name(op.source(f)), "1");
        assert_eq!(op.obj_name(op.target(f)), "0");
        assert!(op_sigma.contains(f));
        assert_eq!(op.validate(), Ok(()));
        let (back, back_sigma) = opposite(&op, &op_sigma);
        assert_eq!(back, c);
        assert_eq!(back_sigma, sigma);

        let p = fixtures::parallel_pair();
        let s = SigmaSet::from_names(&p, ["t"]).unwrap();
        let (pop, ps) = opposite(&p, &s);
        assert_eq!(pop.comp(p.m("f"), p.m("t")), p.m("h"));
        assert_eq!(ps.members().collect::<Vec<_>>(), vec![p.m("t")]);
    }

    #[test]
    fn functor_checks() {
        let c = Arc::new(fixtures::walking_arrow());
        assert_eq!(Functor::identity(c.clone()).check(), Ok(()));
        let t = Arc::new(fixtures::terminal());
        assert_eq!(Functor::to_terminal(c.clone(), t).check(), Ok(()));

        let mut mor_map: Vec<MorId> = c.morphisms().collect();
        mor_map[c.m("f").index()] = c.m("1_0");
        let bad = Functor::new(c.clone(), c.clone(), c.objects().collect(), mor_map);
        assert_eq!(bad.check(), Err(FunctorViolation::Endpoints("f".into())));
    }

    #[test]
    fn compose_agrees_with_table_and_units() {
        for c in [
            fixtures::walking_arrow(),
            fixtures::parallel_pair(),
            fixtures::walking_iso(),
        ] {
            for f in c.morphisms() {
                assert_eq!(c.comp(c.identity(c.target(f)), f), f);
                assert_eq!(c.comp(f, c.identity(c.source(f))), f);
                for g in c.out_of(c.target(f)) {
                    assert_eq!(c.compose(g, f), Ok(c.try_compose(g, f).unwrap()));
                }
            }
        }
    }
}
