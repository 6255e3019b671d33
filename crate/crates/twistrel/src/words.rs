//! Free groupoid words over a spine graph.
//!
//! A surface with boundary deformation-retracts onto a spine: an embedded
//! graph with one basepoint vertex per boundary component. Paths in the
//! surface, rel endpoints, correspond one-to-one with reduced edge words, so
//! a boundary-fixing mapping class is captured exactly by a
//! [`GroupoidMorphism`]: the edge-wise action on homotopy classes. Two
//! mapping classes are declared equal iff their reduced actions agree on
//! every edge generator (the Alexander method on a filling system).

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from word and morphism construction.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("letters {prev} and {next} are not composable: target {prev_target} != source {next_source}")]
    NotComposable {
        prev: String,
        next: String,
        prev_target: String,
        next_source: String,
    },
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error(
        "endpoint mismatch: cannot compose word ending at {end} with word starting at {start}"
    )]
    EndpointMismatch { end: String, start: String },
    #[error("morphism image of `{edge}` runs {got_source}->{got_target}, expected {want_source}->{want_target}")]
    EndpointIncompatible {
        edge: String,
        got_source: String,
        got_target: String,
        want_source: String,
        want_target: String,
    },
    #[error(
        "declared inverse fails on edge `{edge}`: {composite} does not reduce to the generator"
    )]
    BadInverse { edge: String, composite: String },
    #[error("morphisms live on different spine graphs")]
    GraphMismatch,
    #[error("edge set {0:?} is not a spanning tree")]
    NotSpanningTree(Vec<String>),
    #[error("word from {from} to {to} is not a loop")]
    NotALoop { from: String, to: String },
    #[error("word parse error: {0}")]
    Parse(String),
}

/// A directed edge of a spine graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub name: String,
    pub from: String,
    pub to: String,
}

/// The spine of a surface: one basepoint vertex per boundary component,
/// edges freely generating the fundamental groupoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpineGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    // edge endpoints as vertex indices, parallel to `edges`
    ends: Vec<(usize, usize)>,
}

impl SpineGraph {
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self, WordError> {
        let index = |name: &str| {
            vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| WordError::UnknownVertex(name.to_string()))
        };
        let mut ends = Vec::with_capacity(edges.len());
        for e in &edges {
            ends.push((index(&e.from)?, index(&e.to)?));
        }
        Ok(SpineGraph {
            vertices,
            edges,
            ends,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_id(&self, name: &str) -> Result<usize, WordError> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| WordError::UnknownVertex(name.to_string()))
    }

    pub fn edge_id(&self, name: &str) -> Result<usize, WordError> {
        self.edges
            .iter()
            .position(|e| e.name == name)
            .ok_or_else(|| WordError::UnknownEdge(name.to_string()))
    }

    pub fn edge_ends(&self, edge: usize) -> (usize, usize) {
        self.ends[edge]
    }

    /// Endpoints of a signed letter: an inverse letter swaps them.
    pub fn letter_ends(&self, letter: Letter) -> (usize, usize) {
        let (s, t) = self.ends[letter.edge];
        if letter.inverse {
            (t, s)
        } else {
            (s, t)
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(s, t) in &self.ends {
                for (a, b) in [(s, t), (t, s)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    /// V - E, which must equal 2 - 2g - b for the modeled surface.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64
    }

    /// The identity morphism on this graph.
    pub fn identity_morphism(&self) -> GroupoidMorphism {
        let map: Vec<Word> = (0..self.edges.len())
            .map(|e| Word::generator(self, e, false))
            .collect();
        GroupoidMorphism {
            map: map.clone(),
            inverse: map,
        }
    }

    /// Parse a whitespace-separated word, e.g. `"a b' a"`; `'` marks an
    /// inverse letter. An empty string is the identity at `basepoint`.
    pub fn parse_word(&self, text: &str, basepoint: &str) -> Result<Word, WordError> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (name, inverse) = match tok.strip_suffix('\'') {
                Some(base) => (base, true),
                None => (tok, false),
            };
            letters.push(Letter {
                edge: self.edge_id(name)?,
                inverse,
            });
        }
        if letters.is_empty() {
            return Ok(Word::identity(self.vertex_id(basepoint)?));
        }
        Word::from_letters(self, letters)
    }

    /// Render a word in the serialization format (`"a b' a"`).
    pub fn format_word(&self, w: &Word) -> String {
        let mut out = String::new();
        for (i, l) in w.letters().iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&self.edges[l.edge].name);
            if l.inverse {
                out.push('\'');
            }
        }
        out
    }
}

/// One signed letter of a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub edge: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inverted(self) -> Self {
        Letter {
            edge: self.edge,
            inverse: !self.inverse,
        }
    }
}

/// A reduced composable word: a path in the fundamental groupoid.
///
/// Words are always held in reduced form; `source`/`target` are kept
/// explicitly so the empty word at a vertex is representable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
    source: usize,
    target: usize,
}

impl Word {
    pub fn identity(vertex: usize) -> Self {
        Word {
            letters: Vec::new(),
            source: vertex,
            target: vertex,
        }
    }

    pub fn generator(graph: &SpineGraph, edge: usize, inverse: bool) -> Self {
        let l = Letter { edge, inverse };
        let (s, t) = graph.letter_ends(l);
        Word {
            letters: vec![l],
            source: s,
            target: t,
        }
    }

    /// Build a word from raw letters, checking composability and reducing.
    pub fn from_letters(graph: &SpineGraph, letters: Vec<Letter>) -> Result<Self, WordError> {
        if letters.is_empty() {
            // No way to infer the basepoint; callers use `identity`.
            return Err(WordError::Parse("empty letter sequence".into()));
        }
        for pair in letters.windows(2) {
            let (_, t) = graph.letter_ends(pair[0]);
            let (s, _) = graph.letter_ends(pair[1]);
            if t != s {
                return Err(WordError::NotComposable {
                    prev: letter_name(graph, pair[0]),
                    next: letter_name(graph, pair[1]),
                    prev_target: graph.vertices[t].clone(),
                    next_source: graph.vertices[s].clone(),
                });
            }
        }
        let source = graph.letter_ends(letters[0]).0;
        let target = graph.letter_ends(*letters.last().unwrap()).1;
        let mut w = Word {
            letters,
            source,
            target,
        };
        w.reduce_in_place();
        Ok(w)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }

    fn reduce_in_place(&mut self) {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match stack.last() {
                Some(&top) if top.edge == l.edge && top.inverse != l.inverse => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        self.letters = stack;
    }

    /// The unique reduced representative. Words are kept reduced, so this is
    /// the identity; it exists as the named operation and for words built by
    /// hand in tests.
    pub fn reduced(&self) -> Word {
        let mut w = self.clone();
        w.reduce_in_place();
        w
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverted()).collect(),
            source: self.target,
            target: self.source,
        }
    }

    /// Reduced concatenation; endpoints must match.
    pub fn compose(&self, graph: &SpineGraph, other: &Word) -> Result<Word, WordError> {
        if self.target != other.source {
            return Err(WordError::EndpointMismatch {
                end: graph.vertices[self.target].clone(),
                start: graph.vertices[other.source].clone(),
            });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        let mut w = Word {
            letters,
            source: self.source,
            target: other.target,
        };
        w.reduce_in_place();
        Ok(w)
    }

    /// Cyclic reduction of a loop: conjugate until the first and last letters
    /// no longer cancel.
    pub fn cyclically_reduced(&self) -> Word {
        let mut letters = self.letters.clone();
        let mut source = self.source;
        while letters.len() >= 2 {
            let first = letters[0];
            let last = *letters.last().unwrap();
            if first.edge == last.edge && first.inverse != last.inverse {
                letters.pop();
                letters.remove(0);
                source = usize::MAX; // fixed below
            } else {
                break;
            }
        }
        // Recompute endpoints; an emptied word sits at the original basepoint
        // only if nothing was peeled, otherwise at the peel point, which we
        // do not track: cyclic words are compared letter-wise only.
        let (s, t) = if letters.is_empty() {
            (self.source, self.source)
        } else if source == usize::MAX {
            (usize::MAX, usize::MAX)
        } else {
            (self.source, self.target)
        };
        Word {
            letters,
            source: s,
            target: t,
        }
    }
}

fn letter_name(graph: &SpineGraph, l: Letter) -> String {
    let mut s = graph.edges()[l.edge].name.clone();
    if l.inverse {
        s.push('\'');
    }
    s
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "e{}{}", l.edge, if l.inverse { "'" } else { "" })?;
        }
        Ok(())
    }
}

/// A boundary-fixing mapping class, represented exactly: for each edge
/// generator, its image word (with matching endpoints), plus a declared
/// inverse table. The vertex map is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidMorphism {
    map: Vec<Word>,
    inverse: Vec<Word>,
}

impl GroupoidMorphism {
    /// Build from edge-image tables, checking endpoint compatibility and
    /// that the declared inverse really inverts.
    pub fn new(graph: &SpineGraph, map: Vec<Word>, inverse: Vec<Word>) -> Result<Self, WordError> {
        assert_eq!(map.len(), graph.edges().len());
        assert_eq!(inverse.len(), graph.edges().len());
        for table in [&map, &inverse] {
            for (e, w) in table.iter().enumerate() {
                let (s, t) = graph.edge_ends(e);
                if w.source() != s || w.target() != t {
                    return Err(WordError::EndpointIncompatible {
                        edge: graph.edges()[e].name.clone(),
                        got_source: graph.vertices()[w.source()].clone(),
                        got_target: graph.vertices()[w.target()].clone(),
                        want_source: graph.vertices()[s].clone(),
                        want_target: graph.vertices()[t].clone(),
                    });
                }
            }
        }
        let m = GroupoidMorphism { map, inverse };
        m.check_inverse(graph)?;
        Ok(m)
    }

    /// Build without the inverse check (images still endpoint-checked).
    /// Used while assembling tables whose inverse is attached later.
    pub fn new_unchecked(map: Vec<Word>, inverse: Vec<Word>) -> Self {
        GroupoidMorphism { map, inverse }
    }

    fn check_inverse(&self, graph: &SpineGraph) -> Result<(), WordError> {
        let inv = self.inverted();
        for e in 0..graph.edges().len() {
            let gen = Word::generator(graph, e, false);
            for (first, second) in [(self, &inv), (&inv, self)] {
                let image = second.apply(graph, &first.apply(graph, &gen)?)?;
                if image != gen {
                    return Err(WordError::BadInverse {
                        edge: graph.edges()[e].name.clone(),
                        composite: graph.format_word(&image),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn image_of_edge(&self, edge: usize) -> &Word {
        &self.map[edge]
    }

    pub fn edge_images(&self) -> &[Word] {
        &self.map
    }

    /// Apply to a word: functorial, image reduced.
    pub fn apply(&self, graph: &SpineGraph, w: &Word) -> Result<Word, WordError> {
        let mut out = Word::identity(w.source());
        for &l in w.letters() {
            let piece = if l.inverse {
                self.map[l.edge].inverse()
            } else {
                self.map[l.edge].clone()
            };
            out = out.compose(graph, &piece)?;
        }
        if w.is_empty() {
            // identity maps to identity at the same basepoint
            return Ok(out);
        }
        Ok(out)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, graph: &SpineGraph, other: &GroupoidMorphism) -> Result<Self, WordError> {
        let map = other
            .map
            .iter()
            .map(|w| self.apply(graph, w))
            .collect::<Result<Vec<_>, _>>()?;
        let inverse = self
            .inverse
            .iter()
            .map(|w| other.inverted().apply(graph, w))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GroupoidMorphism { map, inverse })
    }

    /// The declared inverse morphism.
    pub fn inverted(&self) -> Self {
        GroupoidMorphism {
            map: self.inverse.clone(),
            inverse: self.map.clone(),
        }
    }

    /// Integer power; `power(φ, 0)` is the identity, negative powers go
    /// through the declared inverse.
    pub fn power(&self, graph: &SpineGraph, n: i64) -> Result<Self, WordError> {
        let base = if n < 0 { self.inverted() } else { self.clone() };
        let mut out = graph.identity_morphism();
        for _ in 0..n.unsigned_abs() {
            out = base.compose(graph, &out)?;
        }
        Ok(out)
    }

    /// True iff the reduced images agree on every edge generator.
    pub fn same_action(&self, other: &GroupoidMorphism) -> bool {
        self.map == other.map
    }

    /// First edge where the two actions differ, with both images.
    pub fn first_disagreement(
        &self,
        graph: &SpineGraph,
        other: &GroupoidMorphism,
    ) -> Option<(String, Word, Word)> {
        for e in 0..self.map.len() {
            if self.map[e] != other.map[e] {
                return Some((
                    graph.edges()[e].name.clone(),
                    self.map[e].clone(),
                    other.map[e].clone(),
                ));
            }
        }
        None
    }

    pub fn is_identity(&self, graph: &SpineGraph) -> bool {
        self.same_action(&graph.identity_morphism())
    }
}

/// Free generators of the loop group at `basepoint`: one loop per non-tree
/// edge, `tree` a spanning tree given by edge names.
pub fn loop_basis(
    graph: &SpineGraph,
    basepoint: &str,
    tree: &[String],
) -> Result<Vec<Word>, WordError> {
    let base = graph.vertex_id(basepoint)?;
    let tree_ids: HashSet<usize> = tree
        .iter()
        .map(|n| graph.edge_id(n))
        .collect::<Result<_, _>>()?;
    if tree_ids.len() != graph.vertices().len().saturating_sub(1) {
        return Err(WordError::NotSpanningTree(tree.to_vec()));
    }
    // paths from basepoint to every vertex through tree edges only
    let mut path: Vec<Option<Word>> = vec![None; graph.vertices().len()];
    path[base] = Some(Word::identity(base));
    let mut changed = true;
    while changed {
        changed = false;
        for &e in &tree_ids {
            let (s, t) = graph.edge_ends(e);
            if path[s].is_some() && path[t].is_none() {
                let w = path[s]
                    .clone()
                    .unwrap()
                    .compose(graph, &Word::generator(graph, e, false))?;
                path[t] = Some(w);
                changed = true;
            } else if path[t].is_some() && path[s].is_none() {
                let w = path[t]
                    .clone()
                    .unwrap()
                    .compose(graph, &Word::generator(graph, e, true))?;
                path[s] = Some(w);
                changed = true;
            }
        }
    }
    if path.iter().any(|p| p.is_none()) {
        return Err(WordError::NotSpanningTree(tree.to_vec()));
    }
    let mut basis = Vec::new();
    for e in 0..graph.edges().len() {
        if tree_ids.contains(&e) {
            continue;
        }
        let (s, t) = graph.edge_ends(e);
        let w = path[s]
            .clone()
            .unwrap()
            .compose(graph, &Word::generator(graph, e, false))?
            .compose(graph, &path[t].clone().unwrap().inverse())?;
        basis.push(w);
    }
    Ok(basis)
}

/// True iff two loops at the same basepoint are conjugate: their cyclic
/// reductions agree up to rotation.
pub fn is_conjugate(graph: &SpineGraph, u: &Word, v: &Word) -> Result<bool, WordError> {
    for w in [u, v] {
        if !w.is_loop() {
            return Err(WordError::NotALoop {
                from: graph.vertices()[w.source()].clone(),
                to: graph.vertices()[w.target()].clone(),
            });
        }
    }
    let cu = u.cyclically_reduced();
    let cv = v.cyclically_reduced();
    if cu.len() != cv.len() {
        return Ok(false);
    }
    if cu.is_empty() {
        // trivial loops are conjugate only at the same basepoint component;
        // basepoints are per-boundary so require equality
        return Ok(u.source() == v.source());
    }
    let n = cu.len();
    for shift in 0..n {
        if (0..n).all(|i| cu.letters()[(i + shift) % n] == cv.letters()[i]) {
            return Ok(true);
        }
    }
    Ok(false)
}
