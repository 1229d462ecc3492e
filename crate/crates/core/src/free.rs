//! Directed graphs, paths, and the free category on a graph.
//!
//! Paths are stored in diagrammatic order: `edges[0]` is applied first. The
//! free category is exposed lazily (hom-sets enumerated up to a length bound),
//! since it is infinite as soon as the graph has a cycle.

use thiserror::Error;

use crate::cat::{CompositionTable, FiniteCategory, MorId, ObjId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub source: ObjId,
    pub target: ObjId,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreeError {
    #[error("edge `{0}` has an endpoint that is not a vertex")]
    DanglingEdge(String),
    #[error("paths are not composable: first ends at vertex {end}, second starts at {start}")]
    NotComposable { end: usize, start: usize },
    #[error("edge `{0}` is sent to a morphism with mismatched endpoints")]
    EndpointMismatch(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl DirectedGraph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self, FreeError> {
        for e in &edges {
            if e.source.index() >= vertex_count || e.target.index() >= vertex_count {
                return Err(FreeError::DanglingEdge(e.name.clone()));
            }
        }
        Ok(DirectedGraph {
            vertex_count,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn vertices(&self) -> impl Iterator<Item = ObjId> {
        (0..self.vertex_count).map(ObjId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }
}

/// A composable sequence of edges anchored at `at`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub at: ObjId,
    pub edges: Vec<EdgeId>,
}

impl Path {
    pub fn empty(at: ObjId) -> Self {
        Path { at, edges: Vec::new() }
    }

    pub fn single(g: &DirectedGraph, e: EdgeId) -> Self {
        Path {
            at: g.edge(e).source,
            edges: vec![e],
        }
    }

    pub fn from_edges(g: &DirectedGraph, at: ObjId, edges: Vec<EdgeId>) -> Result<Self, FreeError> {
        let mut cur = at;
        for &e in &edges {
            let edge = g.edge(e);
            if edge.source != cur {
                return Err(FreeError::NotComposable {
                    end: cur.index(),
                    start: edge.source.index(),
                });
            }
            cur = edge.target;
        }
        Ok(Path { at, edges })
    }

    pub fn start(&self) -> ObjId {
        self.at
    }

    pub fn end(&self, g: &DirectedGraph) -> ObjId {
        self.edges.last().map_or(self.at, |&e| g.edge(e).target)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// `p` followed by `q`.
pub fn path_concat(g: &DirectedGraph, p: &Path, q: &Path) -> Result<Path, FreeError> {
    let end = p.end(g);
    if end != q.at {
        return Err(FreeError::NotComposable {
            end: end.index(),
            start: q.at.index(),
        });
    }
    let mut edges = p.edges.clone();
    edges.extend_from_slice(&q.edges);
    Ok(Path { at: p.at, edges })
}

/// The free category on a graph: objects are vertices, morphisms are paths.
pub struct FreeCategory<'g> {
    graph: &'g DirectedGraph,
}

pub fn free_category(g: &DirectedGraph) -> FreeCategory<'_> {
    FreeCategory { graph: g }
}

impl<'g> FreeCategory<'g> {
    pub fn graph(&self) -> &'g DirectedGraph {
        self.graph
    }

    pub fn identity(&self, v: ObjId) -> Path {
        Path::empty(v)
    }

    /// Diagrammatic composite: `p` then `q`.
    pub fn compose(&self, p: &Path, q: &Path) -> Result<Path, FreeError> {
        path_concat(self.graph, p, q)
    }

    /// All paths from `v` of length at most `max_len`, shortest first.
    pub fn paths_from(&self, v: ObjId, max_len: usize) -> Vec<Path> {
        let mut out = vec![Path::empty(v)];
        let mut layer = vec![Path::empty(v)];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for p in &layer {
                let end = p.end(self.graph);
                for e in self.graph.edge_ids() {
                    if self.graph.edge(e).source == end {
                        let mut q = p.clone();
                        q.edges.push(e);
                        next.push(q);
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// `hom(v, w)` restricted to paths of length at most `max_len`.
    pub fn hom(&self, v: ObjId, w: ObjId, max_len: usize) -> Vec<Path> {
        self.paths_from(v, max_len)
            .into_iter()
            .filter(|p| p.end(self.graph) == w)
            .collect()
    }
}

/// Evaluates paths of a graph in a finite category: the functor out of the
/// free category determined by a vertex map and an edge map.
#[derive(Clone, Debug)]
pub struct PathEvaluator<'a> {
    graph: &'a DirectedGraph,
    target: &'a FiniteCategory,
    vertex_map: Vec<ObjId>,
    edge_map: Vec<MorId>,
}

pub fn free_functor<'a>(
    g: &'a DirectedGraph,
    vertex_map: Vec<ObjId>,
    edge_map: Vec<MorId>,
    x: &'a FiniteCategory,
) -> Result<PathEvaluator<'a>, FreeError> {
    assert_eq!(vertex_map.len(), g.vertex_count());
    assert_eq!(edge_map.len(), g.edges().len());
    for (e, &m) in g.edges().iter().zip(&edge_map) {
        if x.source(m) != vertex_map[e.source.index()] || x.target(m) != vertex_map[e.target.index()]
        {
            return Err(FreeError::EndpointMismatch(e.name.clone()));
        }
    }
    Ok(PathEvaluator {
        graph: g,
        target: x,
        vertex_map,
        edge_map,
    })
}

impl PathEvaluator<'_> {
    pub fn eval(&self, p: &Path) -> MorId {
        let start = self.target.identity(self.vertex_map[p.at.index()]);
        p.edges
            .iter()
            .fold(start, |acc, &e| self.target.comp(self.edge_map[e.0], acc))
    }

    pub fn graph(&self) -> &DirectedGraph {
        self.graph
    }
}

/// The underlying graph of a category: one edge per morphism, named alike.
pub fn underlying_graph(c: &FiniteCategory) -> DirectedGraph {
    let edges = c
        .morphisms()
        .map(|m| Edge {
            name: c.mor_name(m).to_string(),
            source: c.source(m),
            target: c.target(m),
        })
        .collect();
    DirectedGraph::new(c.obj_count(), edges).expect("category endpoints are objects")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn loop_graph() -> DirectedGraph {
        DirectedGraph::new(
            1,
            vec![Edge {
                name: "e".into(),
                source: ObjId(0),
                target: ObjId(0),
            }],
        )
        .unwrap()
    }

    fn arrow_graph() -> DirectedGraph {
        DirectedGraph::new(
            2,
            vec![Edge {
                name: "e".into(),
                source: ObjId(0),
                target: ObjId(1),
            }],
        )
        .unwrap()
    }

    #[test]
    fn dangling_edge_rejected() {
        let bad = DirectedGraph::new(
            1,
            vec![Edge {
                name: "e".into(),
                source: ObjId(0),
                target: ObjId(3),
            }],
        );
        assert_eq!(bad, Err(FreeError::DanglingEdge("e".into())));
    }

    #[test]
    fn edgeless_graph_has_only_identities() {
        let g = DirectedGraph::new(2, vec![]).unwrap();
        let f = free_category(&g);
        assert_eq!(f.hom(ObjId(0), ObjId(0), 5), vec![Path::empty(ObjId(0))]);
        assert!(f.hom(ObjId(0), ObjId(1), 5).is_empty());
    }

    #[test]
    fn single_edge_homs() {
        let g = arrow_graph();
        let f = free_category(&g);
        assert_eq!(f.hom(ObjId(0), ObjId(1), 4), vec![Path::single(&g, EdgeId(0))]);
        assert_eq!(f.hom(ObjId(0), ObjId(0), 4), vec![Path::empty(ObjId(0))]);
    }

    #[test]
    fn loop_has_paths_of_every_length() {
        let g = loop_graph();
        let f = free_category(&g);
        let homs = f.hom(ObjId(0), ObjId(0), 6);
        let lengths: Vec<usize> = homs.iter().map(Path::len).collect();
        assert_eq!(lengths, vec![0, 1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn concat_units_and_mismatch() {
        let g = arrow_graph();
        let p = Path::single(&g, EdgeId(0));
        assert_eq!(path_concat(&g, &p, &Path::empty(ObjId(1))).unwrap(), p);
        assert_eq!(path_concat(&g, &Path::empty(ObjId(0)), &p).unwrap(), p);
        assert_eq!(
            path_concat(&g, &p, &p),
            Err(FreeError::NotComposable { end: 1, start: 0 })
        );
    }

    #[test]
    fn evaluator_on_fixtures() {
        let c = fixtures::walking_arrow();
        let g = arrow_graph();
        let ev = free_functor(&g, vec![c.object("0").unwrap(), c.object("1").unwrap()], vec![c.m("f")], &c)
            .unwrap();
        assert_eq!(ev.eval(&Path::empty(ObjId(0))), c.m("1_0"));
        assert_eq!(ev.eval(&Path::single(&g, EdgeId(0))), c.m("f"));

        let p = fixtures::parallel_pair();
        let ug = underlying_graph(&p);
        let vmap: Vec<ObjId> = p.objects().collect();
        let emap: Vec<MorId> = p.morphisms().collect();
        let ev = free_functor(&ug, vmap, emap, &p).unwrap();
        let path = Path::from_edges(&ug, p.object("X").unwrap(), vec![EdgeId(p.m("f").index()), EdgeId(p.m("t").index())])
            .unwrap();
        assert_eq!(ev.eval(&path), p.m("h"));
    }

    #[test]
    fn ill_typed_edge_map_rejected() {
        let c = fixtures::walking_arrow();
        let g = arrow_graph();
        let res = free_functor(&g, vec![c.object("0").unwrap(), c.object("1").unwrap()], vec![c.m("1_0")], &c);
        assert!(matches!(res, Err(FreeError::EndpointMismatch(_))));
    }

    fn random_path(g: &DirectedGraph, start: usize, choices: &[usize]) -> Path {
        let mut p = Path::empty(ObjId(start % g.vertex_count()));
        for &c in choices {
            let end = p.end(g);
            let out: Vec<EdgeId> = g.edge_ids().filter(|&e| g.edge(e).source == end).collect();
            if out.is_empty() {
                break;
            }
            p.edges.push(out[c % out.len()]);
        }
        p
    }

    // Independent fold: compose edge images right-to-left from the last edge.
    // Edge ids of the underlying graph coincide with morphism ids.
    fn fold_eval(c: &FiniteCategory, p: &Path) -> MorId {
        let mut acc: Option<MorId> = None;
        for &e in p.edges.iter().rev() {
            let m = MorId(e.0);
            acc = Some(match acc {
                None => m,
                Some(a) => c.comp(a, m),
            });
        }
        acc.unwrap_or_else(|| c.identity(p.at))
    }

    proptest! {
        #[test]
        fn evaluator_matches_fold_and_respects_concat(
            start in 0usize..3,
            a in prop::collection::vec(0usize..8, 0..=6),
            b in prop::collection::vec(0usize..8, 0..=6),
        ) {
            let c = fixtures::chain(3);
            let g = underlying_graph(&c);
            let ev = free_functor(&g, c.objects().collect(), c.morphisms().collect(), &c).unwrap();
            let p = random_path(&g, start, &a);
            prop_assert_eq!(ev.eval(&p), fold_eval(&c, &p));
            let q = random_path(&g, p.end(&g).index(), &b);
            let pq = path_concat(&g, &p, &q).unwrap();
            prop_assert_eq!(ev.eval(&pq), c.comp(ev.eval(&q), ev.eval(&p)));
        }

        #[test]
        fn concat_is_associative(
            a in prop::collection::vec(0usize..8, 0..=4),
            b in prop::collection::vec(0usize..8, 0..=4),
            d in prop::collection::vec(0usize..8, 0..=4),
        ) {
            let g = loop_graph();
            let p = random_path(&g, 0, &a);
            let q = random_path(&g, 0, &b);
            let r = random_path(&g, 0, &d);
            let left = path_concat(&g, &path_concat(&g, &p, &q).unwrap(), &r).unwrap();
            let right = path_concat(&g, &p, &path_concat(&g, &q, &r).unwrap()).unwrap();
            prop_assert_eq!(left.len(), p.len() + q.len() + r.len());
            prop_assert_eq!(left, right);
        }
    }
}
