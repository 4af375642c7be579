//! Graph-of-groups automorphisms, their action on path words, and Dehn
//! twists given by edge exponents or twistors.

use crate::freeword::{centralizer_generator, is_power_of, Morphism, Word};
use crate::gog::{EdgeGroup, EdgeId, GraphOfGroups, PathWord, Syllable, TreeIdentification, VertexId};
use crate::{invalid, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoGAut {
    base: GraphOfGroups,
    vertex_perm: Vec<VertexId>,
    edge_perm: Vec<EdgeId>,
    vertex_maps: Vec<Morphism>,
    vertex_inverses: Vec<Morphism>,
    edge_signs: Vec<i64>,
    corrections: Vec<Word>,
}

impl GoGAut {
    /// Assembles the data; call [`GoGAut::validate`] before relying on it.
    pub fn new(
        base: GraphOfGroups,
        vertex_perm: Vec<VertexId>,
        edge_perm: Vec<EdgeId>,
        vertex_maps: Vec<Morphism>,
        vertex_inverses: Vec<Morphism>,
        edge_signs: Vec<i64>,
        corrections: Vec<Word>,
    ) -> Result<GoGAut> {
        let (nv, ne) = (base.vertex_count(), base.edge_count());
        if vertex_perm.len() != nv || vertex_maps.len() != nv || vertex_inverses.len() != nv {
            return invalid("vertex data does not match the graph");
        }
        if edge_perm.len() != ne || edge_signs.len() != ne || corrections.len() != ne {
            return invalid("edge data does not match the graph");
        }
        if vertex_perm.iter().any(|&v| v >= nv) || edge_perm.iter().any(|&e| e >= ne) {
            return invalid("graph map out of range");
        }
        for v in base.vertices() {
            let (src, dst) = (base.basis(v).rank(), base.basis(vertex_perm[v]).rank());
            if vertex_maps[v].images().len() != src || vertex_inverses[v].images().len() != dst {
                return invalid(format!("vertex map at {} has the wrong arity", base.vertex_name(v)));
            }
        }
        Ok(GoGAut {
            base,
            vertex_perm,
            edge_perm,
            vertex_maps,
            vertex_inverses,
            edge_signs,
            corrections,
        })
    }

    /// Identity on the graph, vertex and edge groups with the given corrections.
    pub fn with_corrections(base: GraphOfGroups, corrections: Vec<Word>) -> Result<GoGAut> {
        let vertex_maps: Vec<Morphism> = base.vertices().map(|v| Morphism::identity(base.basis(v).rank())).collect();
        GoGAut::new(
            base.clone(),
            base.vertices().collect(),
            base.edges().collect(),
            vertex_maps.clone(),
            vertex_maps,
            vec![1; base.edge_count()],
            corrections,
        )
    }

    pub fn base(&self) -> &GraphOfGroups {
        &self.base
    }

    pub fn vertex_image(&self, v: VertexId) -> VertexId {
        self.vertex_perm[v]
    }

    pub fn edge_image(&self, e: EdgeId) -> EdgeId {
        self.edge_perm[e]
    }

    pub fn vertex_map(&self, v: VertexId) -> &Morphism {
        &self.vertex_maps[v]
    }

    pub fn vertex_inverse(&self, v: VertexId) -> &Morphism {
        &self.vertex_inverses[v]
    }

    pub fn edge_sign(&self, e: EdgeId) -> i64 {
        self.edge_signs[e]
    }

    pub fn correction(&self, e: EdgeId) -> &Word {
        &self.corrections[e]
    }

    pub fn corrections(&self) -> &[Word] {
        &self.corrections
    }

    pub fn acts_trivially_on_graph(&self) -> bool {
        self.vertex_perm.iter().enumerate().all(|(i, &v)| i == v) && self.edge_perm.iter().enumerate().all(|(i, &e)| i == e)
    }

    pub fn is_identity_on_groups(&self) -> bool {
        self.vertex_maps.iter().all(Morphism::is_identity) && self.edge_signs.iter().all(|&s| s == 1)
    }

    pub fn validate(&self) -> Vec<String> {
        let g = &self.base;
        let mut out = Vec::new();
        let mut seen_v = vec![false; g.vertex_count()];
        for &v in &self.vertex_perm {
            seen_v[v] = true;
        }
        let mut seen_e = vec![false; g.edge_count()];
        for &e in &self.edge_perm {
            seen_e[e] = true;
        }
        if seen_v.contains(&false) || seen_e.contains(&false) {
            out.push("graph map is not bijective".to_string());
        }
        for e in g.edges() {
            let he = self.edge_perm[e];
            let name = g.edge_name(e);
            if self.edge_perm[g.bar(e)] != g.bar(he) {
                out.push(format!("graph map does not commute with bar at {name}"));
            }
            if g.terminal(he) != self.vertex_perm[g.terminal(e)] {
                out.push(format!("graph map does not commute with terminal vertex at {name}"));
            }
            if g.group(e).is_trivial() != g.group(he).is_trivial() {
                out.push(format!("edge group kind changes at {name}"));
            }
            if self.edge_signs[e].abs() != 1 || self.edge_signs[e] != self.edge_signs[g.bar(e)] {
                out.push(format!("edge map at {name} must be ±1 and agree with its reverse"));
            }
            if !g.basis(g.terminal(he)).contains(&self.corrections[e]) {
                out.push(format!("correction at {name} is not in the target vertex group"));
            }
        }
        for v in g.vertices() {
            let name = g.vertex_name(v);
            let (h, hinv) = (&self.vertex_maps[v], &self.vertex_inverses[v]);
            let target = g.basis(self.vertex_perm[v]);
            if !h.images().iter().all(|w| target.contains(w)) || !hinv.images().iter().all(|w| g.basis(v).contains(w)) {
                out.push(format!("vertex map at {name} leaves its groups"));
                continue;
            }
            if !h.compose(hinv).is_identity() || !hinv.compose(h).is_identity() {
                out.push(format!("vertex map at {name} is not inverted by the supplied inverse"));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for e in g.edges() {
            if let EdgeGroup::Cyclic(u) = g.group(e) {
                let he = self.edge_perm[e];
                let lhs = self.vertex_maps[g.terminal(e)].apply(u);
                let img = g.edge_element(he, self.edge_signs[e]);
                let rhs = img.conjugate_by(&self.corrections[e]);
                if lhs != rhs {
                    out.push(format!("correction at {} is incompatible with the edge map", g.edge_name(e)));
                }
            }
        }
        out
    }

    /// Induced map on path words: vertex maps on vertex syllables and
    /// `t_e -> δ(ē) t_{H(e)} δ(e)^-1` on stable letters.
    pub fn apply(&self, u: &PathWord) -> PathWord {
        let g = &self.base;
        let mut s = Vec::with_capacity(4 * u.path_length() + 1);
        for (i, r) in u.vertex_syllables().iter().enumerate() {
            if i > 0 {
                let e = u.path_type()[i - 1];
                let he = self.edge_perm[e];
                s.push(Syllable::Vertex(g.initial(he), self.corrections[g.bar(e)].clone()));
                s.push(Syllable::Stable(he));
                s.push(Syllable::Vertex(g.terminal(he), self.corrections[e].inverse()));
            }
            let v = u.vertex_at(i);
            s.push(Syllable::Vertex(self.vertex_perm[v], self.vertex_maps[v].apply(r)));
        }
        g.reduce_from(self.vertex_perm[u.start()], &s).expect("image of a connected word is connected")
    }

    /// The automorphism of the free group `id` identifies with the
    /// fundamental group, defined on basis letters by
    /// `x -> decode(H(encode(x)))`.
    pub fn induced_morphism(&self, id: &TreeIdentification) -> Result<Morphism> {
        let v0 = id.basepoint();
        if self.vertex_perm[v0] != v0 {
            return invalid("automorphism moves the basepoint");
        }
        let images = (0..id.basis().rank())
            .map(|i| id.decode(&self.apply(id.realization(i))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Morphism::new(images))
    }
}

/// A Dehn twist: identity on graph and groups, corrections `f_e(γ_e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DehnTwist {
    aut: GoGAut,
    gammas: Vec<i64>,
}

impl DehnTwist {
    pub fn from_gammas(g: GraphOfGroups, gammas: Vec<i64>) -> Result<DehnTwist> {
        if gammas.len() != g.edge_count() {
            return invalid("one exponent per edge required");
        }
        for e in g.edges() {
            if g.group(e).is_trivial() && gammas[e] != 0 {
                return invalid(format!("nonzero exponent on trivial edge group at {}", g.edge_name(e)));
            }
        }
        let corrections = g.edges().map(|e| g.edge_element(e, gammas[e])).collect();
        Ok(DehnTwist {
            aut: GoGAut::with_corrections(g, corrections)?,
            gammas,
        })
    }

    /// `γ_e = -z_e` on positive edges and `0` on the others.
    pub fn from_twistors(g: GraphOfGroups, twistors: &[(EdgeId, i64)]) -> Result<DehnTwist> {
        let mut gammas = vec![0; g.edge_count()];
        for &(e, z) in twistors {
            if !g.is_positive(e) {
                return invalid(format!("twistor given on non-positive edge {}", g.edge_name(e)));
            }
            if g.group(e).is_trivial() && z != 0 {
                return invalid(format!("nonzero twistor on trivial edge group at {}", g.edge_name(e)));
            }
            gammas[e] = -z;
        }
        DehnTwist::from_gammas(g, gammas)
    }

    pub fn aut(&self) -> &GoGAut {
        &self.aut
    }

    pub fn base(&self) -> &GraphOfGroups {
        self.aut.base()
    }

    pub fn gammas(&self) -> &[i64] {
        &self.gammas
    }

    /// `z_e = γ_ē - γ_e`.
    pub fn twistors(&self) -> Vec<i64> {
        let g = self.base();
        g.edges().map(|e| self.gammas[g.bar(e)] - self.gammas[e]).collect()
    }

    pub fn twistor(&self, e: EdgeId) -> i64 {
        self.gammas[self.base().bar(e)] - self.gammas[e]
    }

    pub fn apply(&self, u: &PathWord) -> PathWord {
        self.aut.apply(u)
    }

    /// Equal twistors decide equality of the outer classes when every
    /// infinite cyclic edge ends at a vertex group of rank at least two.
    pub fn same_outer(&self, other: &DehnTwist) -> Result<bool> {
        let g = self.base();
        if g != other.base() {
            return invalid("twists live on different graphs of groups");
        }
        for e in g.edges() {
            if !g.group(e).is_trivial() && g.basis(g.terminal(e)).rank() < 2 {
                return Err(Error::Precondition(format!(
                    "edge group at {} may not be malnormal: vertex {} has rank below two",
                    g.edge_name(e),
                    g.vertex_name(g.terminal(e))
                )));
            }
        }
        Ok(self.twistors() == other.twistors())
    }
}

/// Whether the corrections centralize the edge groups, for `H` acting as
/// the identity on graph and groups.
pub fn is_general_dehn_twist(h: &GoGAut) -> bool {
    let g = h.base();
    h.acts_trivially_on_graph()
        && h.is_identity_on_groups()
        && g.edges().all(|e| match g.group(e) {
            EdgeGroup::Trivial => true,
            EdgeGroup::Cyclic(u) => centralizer_generator(u).is_ok_and(|r| is_power_of(h.correction(e), &r).is_some()),
        })
}

/// A graph-of-groups automorphism acting trivially on the graph that is a
/// Dehn twist away from the special vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialTwistData {
    aut: GoGAut,
    special: Vec<bool>,
}

impl PartialTwistData {
    pub fn new(aut: GoGAut, special: Vec<VertexId>) -> Result<PartialTwistData> {
        let mut flags = vec![false; aut.base().vertex_count()];
        for v in special {
            if v >= flags.len() {
                return invalid("special vertex out of range");
            }
            flags[v] = true;
        }
        Ok(PartialTwistData { aut, special: flags })
    }

    pub fn aut(&self) -> &GoGAut {
        &self.aut
    }

    pub fn is_special(&self, v: VertexId) -> bool {
        self.special[v]
    }

    pub fn special(&self) -> Vec<VertexId> {
        (0..self.special.len()).filter(|&v| self.special[v]).collect()
    }

    pub fn validate(&self) -> Vec<String> {
        let mut out = self.aut.validate();
        let h = &self.aut;
        let g = h.base();
        if !h.acts_trivially_on_graph() {
            out.push("automorphism does not act trivially on the graph".to_string());
            return out;
        }
        for v in g.vertices().filter(|&v| !self.special[v]) {
            if !h.vertex_map(v).is_identity() {
                out.push(format!("vertex map at non-special vertex {} is not the identity", g.vertex_name(v)));
            }
        }
        for e in g.edges() {
            let name = g.edge_name(e);
            if self.special[g.terminal(e)] && !g.group(e).is_trivial() {
                out.push(format!("edge {name} into a special vertex has nontrivial edge group"));
            }
            if h.edge_sign(e) != 1 {
                out.push(format!("edge map at {name} is not the identity"));
            }
            if !self.special[g.terminal(e)] {
                if let EdgeGroup::Cyclic(u) = g.group(e) {
                    let ok = centralizer_generator(u).is_ok_and(|r| is_power_of(h.correction(e), &r).is_some());
                    if !ok {
                        out.push(format!("correction at {name} does not centralize the edge group"));
                    }
                }
            }
        }
        out
    }

    /// Composes with the inner twist `J` that conjugates `G_v` by `g_v` at
    /// each listed special vertex: `H_v -> ad(g_v) H_v` and
    /// `δ(e) -> g_{τ(e)} δ(e)` for edges ending there.
    pub fn absorb_inner(&self, conjugators: &[(VertexId, Word)]) -> Result<PartialTwistData> {
        let g = self.aut.base();
        let mut conj: Vec<Word> = vec![Word::identity(); g.vertex_count()];
        for (v, w) in conjugators {
            if !self.special[*v] {
                return invalid(format!("conjugator given at non-special vertex {}", g.vertex_name(*v)));
            }
            if !g.basis(*v).contains(w) {
                return invalid(format!("conjugator at {} is not in its vertex group", g.vertex_name(*v)));
            }
            conj[*v] = w.clone();
        }
        let mut maps = Vec::new();
        let mut inverses = Vec::new();
        for v in g.vertices() {
            let c = &conj[v];
            let h = self.aut.vertex_map(v);
            let hinv = self.aut.vertex_inverse(v);
            maps.push(Morphism::new(h.images().iter().map(|x| x.conjugate_by(c)).collect()));
            let ci = hinv.apply(c);
            inverses.push(Morphism::new(hinv.images().iter().map(|x| x.conjugate_by(&ci.inverse())).collect()));
        }
        let corrections = g.edges().map(|e| conj[g.terminal(e)].mul(self.aut.correction(e))).collect();
        let aut = GoGAut::new(
            g.clone(),
            g.vertices().collect(),
            g.edges().collect(),
            maps,
            inverses,
            g.edges().map(|e| self.aut.edge_sign(e)).collect(),
            corrections,
        )?;
        Ok(PartialTwistData {
            aut,
            special: self.special.clone(),
        })
    }
}
