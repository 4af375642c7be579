//! Graphs of groups with free vertex groups and trivial or infinite cyclic
//! edge groups, path words in the Bass group, and the identification of the
//! fundamental group with a free group via a maximal tree.

use std::collections::{HashMap, VecDeque};

use crate::freeword::{is_power_of, Basis, Letter, Word};
use crate::{invalid, Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeGroup {
    Trivial,
    /// Infinite cyclic, given by the image of the positive generator.
    Cyclic(Word),
}

impl EdgeGroup {
    pub fn is_trivial(&self) -> bool {
        matches!(self, EdgeGroup::Trivial)
    }

    pub fn image(&self) -> Option<&Word> {
        match self {
            EdgeGroup::Trivial => None,
            EdgeGroup::Cyclic(u) => Some(u),
        }
    }
}

/// Edge as it appears in input documents; `image` is `None` for a trivial
/// edge group and word text over the terminal vertex basis otherwise.
#[derive(Clone, Debug)]
pub struct RawEdge {
    pub id: String,
    pub bar: String,
    pub to: String,
    pub image: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphOfGroups {
    vertex_names: Vec<String>,
    bases: Vec<Basis>,
    edge_names: Vec<String>,
    bar: Vec<EdgeId>,
    terminal: Vec<VertexId>,
    groups: Vec<EdgeGroup>,
    positive: Vec<bool>,
}

impl GraphOfGroups {
    /// Resolves names and parses images. Structural invariants are left to
    /// [`GraphOfGroups::validate`] so malformed inputs can be reported.
    pub fn new(vertices: Vec<(String, Vec<String>)>, edges: Vec<RawEdge>, orientation: Vec<String>) -> Result<Self> {
        let mut vindex = HashMap::new();
        let mut vertex_names = Vec::new();
        let mut bases = Vec::new();
        for (name, symbols) in vertices {
            if vindex.insert(name.clone(), vertex_names.len()).is_some() {
                return invalid(format!("duplicate vertex {name:?}"));
            }
            bases.push(Basis::with_symbols(symbols).map_err(|e| Error::InvalidInput(format!("vertex {name}: {e}")))?);
            vertex_names.push(name);
        }
        let mut eindex = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            if eindex.insert(e.id.clone(), i).is_some() {
                return invalid(format!("duplicate edge {:?}", e.id));
            }
        }
        let mut bar = Vec::new();
        let mut terminal = Vec::new();
        let mut groups = Vec::new();
        for e in &edges {
            bar.push(*eindex.get(&e.bar).ok_or_else(|| Error::InvalidInput(format!("edge {}: unknown bar {:?}", e.id, e.bar)))?);
            let v = *vindex.get(&e.to).ok_or_else(|| Error::InvalidInput(format!("edge {}: unknown vertex {:?}", e.id, e.to)))?;
            terminal.push(v);
            groups.push(match &e.image {
                None => EdgeGroup::Trivial,
                Some(text) => EdgeGroup::Cyclic(
                    bases[v].parse(text).map_err(|err| Error::InvalidInput(format!("edge {}: {err}", e.id)))?,
                ),
            });
        }
        let mut positive = vec![false; edges.len()];
        for name in orientation {
            let e = *eindex.get(&name).ok_or_else(|| Error::InvalidInput(format!("orientation: unknown edge {name:?}")))?;
            positive[e] = true;
        }
        Ok(GraphOfGroups {
            vertex_names,
            bases,
            edge_names: edges.into_iter().map(|e| e.id).collect(),
            bar,
            terminal,
            groups,
            positive,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_names.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.vertex_count()
    }

    pub fn edges(&self) -> std::ops::Range<EdgeId> {
        0..self.edge_count()
    }

    pub fn positive_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges().filter(|&e| self.positive[e])
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edge_names[e]
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId> {
        self.vertex_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown vertex {name:?}")))
    }

    pub fn edge_id(&self, name: &str) -> Result<EdgeId> {
        self.edge_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown edge {name:?}")))
    }

    pub fn basis(&self, v: VertexId) -> &Basis {
        &self.bases[v]
    }

    pub fn bar(&self, e: EdgeId) -> EdgeId {
        self.bar[e]
    }

    pub fn terminal(&self, e: EdgeId) -> VertexId {
        self.terminal[e]
    }

    pub fn initial(&self, e: EdgeId) -> VertexId {
        self.terminal[self.bar[e]]
    }

    pub fn group(&self, e: EdgeId) -> &EdgeGroup {
        &self.groups[e]
    }

    pub fn is_positive(&self, e: EdgeId) -> bool {
        self.positive[e]
    }

    /// Edges ending at `v`; their number is the valence of `v`.
    pub fn edges_into(&self, v: VertexId) -> Vec<EdgeId> {
        self.edges().filter(|&e| self.terminal[e] == v).collect()
    }

    pub fn valence(&self, v: VertexId) -> usize {
        self.terminal.iter().filter(|&&t| t == v).count()
    }

    pub fn all_edge_groups_trivial(&self) -> bool {
        self.groups.iter().all(EdgeGroup::is_trivial)
    }

    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.vertex_count() == 0 {
            out.push("graph has no vertices".to_string());
            return out;
        }
        for e in self.edges() {
            let name = &self.edge_names[e];
            let b = self.bar[e];
            if b == e {
                out.push(format!("bar({name}) = {name}"));
            }
            if self.bar[b] != e {
                out.push(format!("bar(bar({name})) ≠ {name}"));
                continue;
            }
            if self.groups[e].is_trivial() != self.groups[b].is_trivial() {
                out.push(format!("edge group kinds differ at {name} and {}", self.edge_names[b]));
            }
            if let EdgeGroup::Cyclic(u) = &self.groups[e] {
                if u.is_identity() {
                    out.push(format!("f_e not injective at {name}"));
                }
                if !self.bases[self.terminal[e]].contains(u) {
                    out.push(format!("image at {name} not in the vertex group"));
                }
            }
            if b != e && e < b && self.positive[e] == self.positive[b] {
                out.push(format!("orientation must pick exactly one of {name}, {}", self.edge_names[b]));
            }
        }
        if out.is_empty() && !self.is_connected() {
            out.push("graph not connected".to_string());
        }
        out
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for e in self.edges().filter(|&e| self.initial(e) == v) {
                let w = self.terminal[e];
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Exponent `k` with `r = f_e(k)`, if `r` lies in the edge group image.
    pub fn edge_membership(&self, e: EdgeId, r: &Word) -> Option<i64> {
        match &self.groups[e] {
            EdgeGroup::Trivial => r.is_identity().then_some(0),
            EdgeGroup::Cyclic(u) => is_power_of(r, u),
        }
    }

    /// `f_e(k)`.
    pub fn edge_element(&self, e: EdgeId, k: i64) -> Word {
        match &self.groups[e] {
            EdgeGroup::Trivial => Word::identity(),
            EdgeGroup::Cyclic(u) => u.pow(k),
        }
    }

    pub fn identity_at(&self, v: VertexId) -> PathWord {
        PathWord {
            stops: vec![v],
            verts: vec![Word::identity()],
            edges: Vec::new(),
        }
    }

    pub fn vertex_element(&self, v: VertexId, w: Word) -> PathWord {
        PathWord {
            stops: vec![v],
            verts: vec![w],
            edges: Vec::new(),
        }
    }

    pub fn stable_letter(&self, e: EdgeId) -> PathWord {
        PathWord {
            stops: vec![self.initial(e), self.terminal[e]],
            verts: vec![Word::identity(), Word::identity()],
            edges: vec![e],
        }
    }

    /// Reduces a connected syllable sequence to normal form.
    pub fn reduce(&self, syllables: &[Syllable]) -> Result<PathWord> {
        let start = match syllables.first() {
            None => return invalid("empty syllable sequence"),
            Some(Syllable::Vertex(v, _)) => *v,
            Some(Syllable::Stable(e)) => self.initial(*e),
        };
        self.reduce_from(start, syllables)
    }

    /// Like [`GraphOfGroups::reduce`] with an explicit start vertex, so the
    /// empty sequence is the identity at `start`.
    pub fn reduce_from(&self, start: VertexId, syllables: &[Syllable]) -> Result<PathWord> {
        let mut verts = vec![Word::identity()];
        let mut edges: Vec<EdgeId> = Vec::new();
        let mut cur = start;
        for (pos, s) in syllables.iter().enumerate() {
            match s {
                Syllable::Vertex(v, w) => {
                    if *v != cur {
                        return invalid(format!(
                            "disconnected syllable {pos}: element of {} where {} expected",
                            self.vertex_names[*v], self.vertex_names[cur]
                        ));
                    }
                    if !self.bases[cur].contains(w) {
                        return invalid(format!("syllable {pos} is not in the group of {}", self.vertex_names[cur]));
                    }
                    let last = verts.last_mut().expect("non-empty");
                    *last = last.mul(w);
                }
                Syllable::Stable(e) => {
                    if self.initial(*e) != cur {
                        return invalid(format!("disconnected syllable {pos}: edge {} does not start at {}", self.edge_names[*e], self.vertex_names[cur]));
                    }
                    let backtrack = match edges.last() {
                        Some(&x) if self.bar[x] == *e => self.edge_membership(x, verts.last().expect("non-empty")),
                        _ => None,
                    };
                    if let Some(k) = backtrack {
                        // t_x f_x(k) t_xbar -> f_xbar(k)
                        verts.pop();
                        edges.pop();
                        let last = verts.last_mut().expect("non-empty");
                        *last = last.mul(&self.edge_element(*e, k));
                    } else {
                        edges.push(*e);
                        verts.push(Word::identity());
                    }
                    cur = self.terminal[*e];
                }
            }
        }
        // Left to right: r_{i-1} = r~ f_{ebar_i}(k), and f_{ebar_i}(k) t_i = t_i f_{e_i}(k).
        for i in 1..verts.len() {
            let e = edges[i - 1];
            if let EdgeGroup::Cyclic(u) = &self.groups[self.bar[e]] {
                let (rep, k) = coset_rep(&verts[i - 1], u);
                if k != 0 {
                    verts[i - 1] = rep;
                    verts[i] = self.edge_element(e, k).mul(&verts[i]);
                }
            }
        }
        let mut stops = Vec::with_capacity(verts.len());
        stops.push(start);
        stops.extend(edges.iter().map(|&e| self.terminal[e]));
        debug_assert_eq!(*stops.last().expect("non-empty"), cur);
        Ok(PathWord { stops, verts, edges })
    }

    pub fn multiply(&self, u: &PathWord, v: &PathWord) -> Result<PathWord> {
        if u.end() != v.start() {
            return invalid(format!(
                "cannot multiply: first word ends at {}, second starts at {}",
                self.vertex_names[u.end()], self.vertex_names[v.start()]
            ));
        }
        let mut s = u.syllables();
        s.extend(v.syllables());
        self.reduce_from(u.start(), &s)
    }

    pub fn product<'a>(&self, start: VertexId, words: impl IntoIterator<Item = &'a PathWord>) -> Result<PathWord> {
        let mut s = Vec::new();
        for w in words {
            s.extend(w.syllables());
        }
        self.reduce_from(start, &s)
    }

    pub fn invert(&self, u: &PathWord) -> PathWord {
        let mut s = Vec::with_capacity(2 * u.verts.len());
        for i in (0..u.verts.len()).rev() {
            s.push(Syllable::Vertex(u.vertex_at(i), u.verts[i].inverse()));
            if i > 0 {
                s.push(Syllable::Stable(self.bar[u.edges[i - 1]]));
            }
        }
        self.reduce_from(u.end(), &s).expect("inverse of a connected word is connected")
    }

    pub fn is_cyclically_reduced(&self, u: &PathWord) -> Result<bool> {
        if u.start() != u.end() {
            return invalid("cyclic reducedness needs a closed word");
        }
        let q = u.edges.len();
        if q == 0 {
            return Ok(true);
        }
        let (first, last) = (u.edges[0], u.edges[q - 1]);
        if first != self.bar[last] {
            return Ok(true);
        }
        let joint = u.verts[q].mul(&u.verts[0]);
        Ok(self.edge_membership(last, &joint).is_none())
    }

    /// Text form: vertex syllables in word syntax, stable letters as `@edge`.
    pub fn format_path(&self, u: &PathWord) -> String {
        let mut parts = Vec::new();
        for i in 0..u.verts.len() {
            if i > 0 {
                parts.push(format!("@{}", self.edge_names[u.edges[i - 1]]));
            }
            if !u.verts[i].is_identity() {
                parts.push(self.bases[u.vertex_at(i)].format(&u.verts[i]));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    /// Parses the text form of [`GraphOfGroups::format_path`]. `start` is
    /// needed only when the word has no stable letter or to check it.
    pub fn parse_path(&self, text: &str, start: Option<VertexId>) -> Result<PathWord> {
        let mut segments: Vec<(Option<EdgeId>, &str)> = Vec::new();
        let mut rest = text;
        let mut current: Option<EdgeId> = None;
        loop {
            match rest.find('@') {
                None => {
                    segments.push((current, rest));
                    break;
                }
                Some(i) => {
                    segments.push((current, &rest[..i]));
                    let tail = &rest[i + 1..];
                    let end = tail.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(tail.len());
                    current = Some(self.edge_id(&tail[..end])?);
                    rest = &tail[end..];
                }
            }
        }
        let first_edge = segments.iter().find_map(|(e, _)| *e);
        let start = match (start, first_edge) {
            (Some(v), _) => v,
            (None, Some(e)) => self.initial(e),
            (None, None) => return invalid("vertex element needs an explicit vertex"),
        };
        let mut syllables = Vec::new();
        let mut cur = start;
        for (e, seg) in segments {
            if let Some(e) = e {
                syllables.push(Syllable::Stable(e));
                cur = self.terminal[e];
            }
            if !seg.trim().is_empty() {
                syllables.push(Syllable::Vertex(cur, self.bases[cur].parse(seg)?));
            }
        }
        self.reduce_from(start, &syllables)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Syllable {
    Vertex(VertexId, Word),
    Stable(EdgeId),
}

/// Shortlex-least element of the coset `g <u>`. Returns `(rep, k)` with
/// `g = rep u^k`.
pub fn coset_rep(g: &Word, u: &Word) -> (Word, i64) {
    if g.is_identity() {
        return (Word::identity(), 0);
    }
    let (c, r) = u.cyclic_reduce();
    // |g u^m| >= 2|c| + |m| |r| - |g|, so longer scans cannot beat g.
    let bound = ((2 * g.len() + 3 * c.len()) / r.len() + 1) as i64;
    let mut best = (g.clone(), 0i64);
    for (step, sign) in [(u.clone(), -1i64), (u.inverse(), 1)] {
        let mut x = g.clone();
        for k in 1..=bound {
            x = x.mul(&step);
            if x.shortlex_cmp(&best.0) == std::cmp::Ordering::Less {
                best = (x.clone(), sign * k);
            }
        }
    }
    best
}

/// A reduced word `r_0 t_1 r_1 ... t_q r_q` in normal form: no backtracks,
/// and each `r_{i-1}` is the shortlex-least element of its coset
/// `r_{i-1} f_{ebar_i}(G_e)`, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathWord {
    stops: Vec<VertexId>,
    verts: Vec<Word>,
    edges: Vec<EdgeId>,
}

impl PathWord {
    pub fn start(&self) -> VertexId {
        self.stops[0]
    }

    pub fn end(&self) -> VertexId {
        *self.stops.last().expect("non-empty")
    }

    pub fn path_length(&self) -> usize {
        self.edges.len()
    }

    pub fn path_type(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn vertex_syllables(&self) -> &[Word] {
        &self.verts
    }

    /// Vertex carrying `r_i`.
    pub fn vertex_at(&self, i: usize) -> VertexId {
        self.stops[i]
    }

    pub fn is_closed_at(&self, v: VertexId) -> bool {
        self.start() == v && self.end() == v
    }

    pub fn is_closed(&self) -> bool {
        self.start() == self.end()
    }

    pub fn is_identity(&self) -> bool {
        self.edges.is_empty() && self.verts[0].is_identity()
    }

    /// Syllable sequence, identity vertex syllables omitted.
    pub fn syllables(&self) -> Vec<Syllable> {
        let mut out = Vec::with_capacity(2 * self.verts.len());
        for (i, r) in self.verts.iter().enumerate() {
            if i > 0 {
                out.push(Syllable::Stable(self.edges[i - 1]));
            }
            if !r.is_identity() {
                out.push(Syllable::Vertex(self.stops[i], r.clone()));
            }
        }
        out
    }
}

/// What a free basis letter of the fundamental group stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisEntry {
    /// Generator `index` of the vertex group at `vertex`.
    Vertex(VertexId, usize),
    /// Stable letter of a positively oriented edge outside the tree.
    Edge(EdgeId),
}

/// Identification of the fundamental group at a basepoint with the free
/// group on the vertex generators and the non-tree stable letters.
///
/// With trivial edge groups this is an isomorphism. With infinite cyclic
/// edge groups `encode` is a surjective homomorphism and `decode` is a
/// section on normal forms: `encode(decode(p)) = p` for every normal form
/// `p`, while `decode(encode(w))` need not return `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeIdentification {
    tree: Vec<bool>,
    basepoint: VertexId,
    basis: Basis,
    entries: Vec<BasisEntry>,
    realizations: Vec<PathWord>,
    vertex_letters: Vec<Vec<usize>>,
    edge_letters: Vec<Option<Letter>>,
}

impl TreeIdentification {
    /// `tree` may list either orientation of each tree edge.
    pub fn new(g: &GraphOfGroups, tree: &[EdgeId], basepoint: VertexId, symbols: Vec<(String, BasisEntry)>) -> Result<Self> {
        let mut in_tree = vec![false; g.edge_count()];
        for &e in tree {
            in_tree[e] = true;
            in_tree[g.bar(e)] = true;
        }
        // Spanning tree paths from the basepoint.
        let mut paths: Vec<Option<PathWord>> = vec![None; g.vertex_count()];
        paths[basepoint] = Some(g.identity_at(basepoint));
        let mut queue = VecDeque::from([basepoint]);
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for e in g.edges().filter(|&e| in_tree[e] && g.initial(e) == v) {
                let w = g.terminal(e);
                if paths[w].is_none() {
                    let p = g.multiply(paths[v].as_ref().expect("visited"), &g.stable_letter(e))?;
                    paths[w] = Some(p);
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        let pairs = in_tree.iter().filter(|&&t| t).count() / 2;
        if reached != g.vertex_count() {
            return invalid("tree does not span the graph");
        }
        if pairs + 1 != g.vertex_count() {
            return invalid("tree edges contain a cycle");
        }
        let paths: Vec<PathWord> = paths.into_iter().map(|p| p.expect("spanning")).collect();

        let mut vertex_letters: Vec<Vec<usize>> = g.vertices().map(|v| vec![usize::MAX; g.basis(v).rank()]).collect();
        let mut edge_letters: Vec<Option<Letter>> = vec![None; g.edge_count()];
        let mut realizations = Vec::new();
        let mut entries = Vec::new();
        let mut names = Vec::new();
        for (i, (name, entry)) in symbols.into_iter().enumerate() {
            let real = match entry {
                BasisEntry::Vertex(v, j) => {
                    if j >= g.basis(v).rank() || vertex_letters[v][j] != usize::MAX {
                        return invalid(format!("basis symbol {name}: bad or repeated vertex generator"));
                    }
                    vertex_letters[v][j] = i;
                    let x = g.vertex_element(v, Word::gen(j));
                    g.product(basepoint, [&paths[v], &x, &g.invert(&paths[v])])?
                }
                BasisEntry::Edge(e) => {
                    if in_tree[e] || !g.is_positive(e) || edge_letters[e].is_some() {
                        return invalid(format!("basis symbol {name}: edge must be positive, outside the tree and unique"));
                    }
                    edge_letters[e] = Some(Letter::new(i, true));
                    edge_letters[g.bar(e)] = Some(Letter::new(i, false));
                    let t = g.stable_letter(e);
                    g.product(basepoint, [&paths[g.initial(e)], &t, &g.invert(&paths[g.terminal(e)])])?
                }
            };
            realizations.push(real);
            entries.push(entry);
            names.push(name);
        }
        if vertex_letters.iter().flatten().any(|&x| x == usize::MAX) {
            return invalid("basis map misses a vertex generator");
        }
        if g.positive_edges().any(|e| !in_tree[e] && edge_letters[e].is_none()) {
            return invalid("basis map misses a non-tree edge");
        }
        Ok(TreeIdentification {
            tree: in_tree,
            basepoint,
            basis: Basis::new(names)?,
            entries,
            realizations,
            vertex_letters,
            edge_letters,
        })
    }

    /// Vertex generators keep their names, non-tree edges are named by the
    /// edge id.
    pub fn standard(g: &GraphOfGroups, tree: &[EdgeId], basepoint: VertexId) -> Result<Self> {
        let mut symbols = Vec::new();
        for v in g.vertices() {
            for (j, s) in g.basis(v).symbols().iter().enumerate() {
                symbols.push((s.clone(), BasisEntry::Vertex(v, j)));
            }
        }
        let tree_set: Vec<bool> = {
            let mut t = vec![false; g.edge_count()];
            for &e in tree {
                t[e] = true;
                t[g.bar(e)] = true;
            }
            t
        };
        for e in g.positive_edges().filter(|&e| !tree_set[e]) {
            symbols.push((g.edge_name(e).to_string(), BasisEntry::Edge(e)));
        }
        TreeIdentification::new(g, tree, basepoint, symbols)
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn basepoint(&self) -> VertexId {
        self.basepoint
    }

    pub fn entries(&self) -> &[BasisEntry] {
        &self.entries
    }

    pub fn tree_edges(&self) -> Vec<EdgeId> {
        (0..self.tree.len()).filter(|&e| self.tree[e]).collect()
    }

    pub fn realization(&self, i: usize) -> &PathWord {
        &self.realizations[i]
    }

    /// Letter of vertex generator `j` at `v`.
    pub fn vertex_letter(&self, v: VertexId, j: usize) -> Letter {
        Letter::gen(self.vertex_letters[v][j])
    }

    pub fn encode(&self, g: &GraphOfGroups, w: &Word) -> Result<PathWord> {
        if !self.basis.contains(w) {
            return invalid("word is not over the identification basis");
        }
        let mut s = Vec::new();
        for &l in w.letters() {
            let r = &self.realizations[l.index()];
            if l.is_positive() {
                s.extend(r.syllables());
            } else {
                s.extend(g.invert(r).syllables());
            }
        }
        g.reduce_from(self.basepoint, &s)
    }

    pub fn decode(&self, u: &PathWord) -> Result<Word> {
        if !u.is_closed_at(self.basepoint) {
            return invalid("decode needs a word closed at the basepoint");
        }
        Ok(self.lift(&u.syllables()))
    }

    /// Letter-by-letter image of a syllable sequence: vertex generators map
    /// to their letters, non-tree stable letters to edge letters, tree
    /// stable letters to nothing.
    pub fn lift(&self, syllables: &[Syllable]) -> Word {
        let mut out = Vec::new();
        for s in syllables {
            match s {
                Syllable::Stable(e) => out.extend(self.edge_letters[*e]),
                Syllable::Vertex(v, r) => out.extend(r.letters().iter().map(|l| Letter::new(self.vertex_letters[*v][l.index()], l.is_positive()))),
            }
        }
        Word::from_letters(out)
    }
}
