//! Linear versus at least quadratic growth for partial Dehn twists relative
//! to local Dehn twists.
//!
//! The top graph of groups has trivial edge groups. At each special vertex
//! `v` the vertex map `H_v` is the automorphism induced by an efficient
//! local twist `D_v` through an identification `θ_v`. The correction terms
//! on edges into special vertices decide the growth: if every one of them
//! is `D_v`-zero the automorphism is a Dehn twist, otherwise a witness word
//! grows quadratically.

use std::collections::{BTreeMap, VecDeque};

use crate::efficiency::{check_minimal, fixed_subgroup_generators, is_efficient};
use crate::freeword::{Letter, Morphism, Word};
use crate::gog::{EdgeId, GraphOfGroups, PathWord, Syllable, TreeIdentification, VertexId};
use crate::growth::{conjugation_cancellation, estimate_degree, find_cancellation_blocker, growth_table, Blocker, DegreeEstimate, GrowthTable};
use crate::hconj::is_phi_zero;
use crate::twist::{DehnTwist, PartialTwistData};
use crate::{invalid, Error, Result};

/// Iterations used by [`classify`] for witness and linearity checks.
pub const DEFAULT_VERIFY_N: usize = 100;

const BLOCKER_FAMILY: usize = 64;
const BLOCKER_POWER: usize = 64;
const BLOCKER_DOUBLINGS: u32 = 2;

/// Efficient local twist at a special vertex. The symbols of `theta`'s
/// basis are the generator names of the vertex group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalTwist {
    pub twist: DehnTwist,
    pub theta: TreeIdentification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeTwistSpec {
    pub h: PartialTwistData,
    pub locals: BTreeMap<VertexId, LocalTwist>,
}

impl RelativeTwistSpec {
    pub fn new(h: PartialTwistData, locals: BTreeMap<VertexId, LocalTwist>) -> Self {
        RelativeTwistSpec { h, locals }
    }

    pub fn top(&self) -> &GraphOfGroups {
        self.h.aut().base()
    }

    /// Identification of `π_1(top, v_0)` for the first vertex `v_0`, with a
    /// breadth-first spanning tree.
    pub fn identification(&self) -> Result<TreeIdentification> {
        let g = self.top();
        TreeIdentification::standard(g, &spanning_tree(g, 0), 0)
    }

    /// Automorphism of the free group induced by `H` through
    /// [`identification`](Self::identification).
    pub fn induced(&self) -> Result<(TreeIdentification, Morphism)> {
        let id = self.identification()?;
        let phi = self.h.aut().induced_morphism(&id)?;
        Ok((id, phi))
    }

    fn local(&self, v: VertexId) -> Result<&LocalTwist> {
        self.locals
            .get(&v)
            .ok_or_else(|| Error::InvalidInput(format!("no local twist at {}", self.top().vertex_name(v))))
    }

    /// Position in `θ_v`'s basis of each generator of `G_v`.
    fn theta_positions(&self, v: VertexId) -> Result<Vec<usize>> {
        let local = self.local(v)?;
        let gv = self.top().basis(v);
        let tb = local.theta.basis();
        if tb.rank() != gv.rank() {
            return invalid(format!("theta basis at {} has rank {}, vertex group has rank {}", self.top().vertex_name(v), tb.rank(), gv.rank()));
        }
        gv.symbols()
            .iter()
            .map(|s| tb.index_of(s).ok_or_else(|| Error::InvalidInput(format!("theta basis at {} lacks generator {s}", self.top().vertex_name(v)))))
            .collect()
    }

    /// A word of `G_v` in the letters of `θ_v`.
    pub fn to_local(&self, v: VertexId, w: &Word) -> Result<Word> {
        let pos = self.theta_positions(v)?;
        Ok(relabel(w, |i| pos[i]))
    }

    /// A word in the letters of `θ_v` as an element of `G_v`.
    pub fn from_local(&self, v: VertexId, w: &Word) -> Result<Word> {
        let pos = self.theta_positions(v)?;
        let mut back = vec![0; pos.len()];
        for (j, &i) in pos.iter().enumerate() {
            back[i] = j;
        }
        Ok(relabel(w, |i| back[i]))
    }
}

fn relabel(w: &Word, f: impl Fn(usize) -> usize) -> Word {
    Word::from_letters(w.letters().iter().map(|l| Letter::new(f(l.index()), l.is_positive())))
}

/// Positive representatives of a breadth-first spanning tree from `root`.
fn spanning_tree(g: &GraphOfGroups, root: VertexId) -> Vec<EdgeId> {
    let mut seen = vec![false; g.vertex_count()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    let mut tree = Vec::new();
    while let Some(v) = queue.pop_front() {
        for e in g.edges().filter(|&e| g.initial(e) == v) {
            let w = g.terminal(e);
            if !seen[w] {
                seen[w] = true;
                tree.push(if g.is_positive(e) { e } else { g.bar(e) });
                queue.push_back(w);
            }
        }
    }
    tree
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    DehnTwistLinear,
    AtLeastQuadratic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticWitness {
    pub edge: EdgeId,
    /// Cyclically reduced closed word at `ι(e)` containing `t_e g t_ē`.
    pub path: PathWord,
    /// `path` in the basis of [`RelativeTwistSpec::identification`].
    pub word: Word,
    /// Fixed element of `G_τ(e)` placed between `t_e` and `t_ē`.
    pub g: Word,
    pub blocker: Blocker,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifiedWitness {
    pub witness: QuadraticWitness,
    pub table: GrowthTable,
    pub estimate: DegreeEstimate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub offending_edges: Vec<EdgeId>,
    pub witnesses: Vec<VerifiedWitness>,
    /// Growth of each basis conjugacy class, computed in the linear case.
    pub linear_guard: Vec<(Word, DegreeEstimate)>,
}

pub fn validate_spec(s: &RelativeTwistSpec) -> Vec<String> {
    let g = s.top();
    let mut out: Vec<String> = g.validate();
    if !g.all_edge_groups_trivial() {
        out.push("top graph has a nontrivial edge group".into());
    }
    if !check_minimal(g) {
        out.push("top graph is not minimal".into());
    }
    out.extend(s.h.validate());
    let special = s.h.special();
    for &v in s.locals.keys() {
        if v >= g.vertex_count() || !s.h.is_special(v) {
            out.push(format!("local twist given at non-special vertex {v}"));
        }
    }
    for v in special {
        let name = g.vertex_name(v);
        let Some(local) = s.locals.get(&v) else {
            out.push(format!("special vertex {name} has no local twist"));
            continue;
        };
        let lg = local.twist.base();
        for m in lg.validate() {
            out.push(format!("local graph at {name}: {m}"));
        }
        let report = is_efficient(&local.twist);
        if !report.efficient {
            out.push(format!("local D_v not efficient at {name}: {report:?}"));
        }
        let pos = match s.theta_positions(v) {
            Ok(p) => p,
            Err(e) => {
                out.push(e.to_string());
                continue;
            }
        };
        let phi = match local.twist.aut().induced_morphism(&local.theta) {
            Ok(p) => p,
            Err(e) => {
                out.push(format!("local identification at {name}: {e}"));
                continue;
            }
        };
        let hv = s.h.aut().vertex_map(v);
        let gv = g.basis(v);
        for (j, &i) in pos.iter().enumerate() {
            let mine = relabel(hv.image(j), |x| pos[x]);
            if &mine != phi.image(i) {
                out.push(format!("H_v differs from the local twist at {name} on generator {}", gv.symbol(j)));
            }
        }
    }
    out
}

fn require_valid(s: &RelativeTwistSpec) -> Result<()> {
    let v = validate_spec(s);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::Precondition(v.join("; ")))
    }
}

fn correction_zero_unchecked(s: &RelativeTwistSpec, e: EdgeId) -> Result<bool> {
    let g = s.top();
    let v = g.terminal(e);
    if !s.h.is_special(v) {
        return invalid(format!("edge {} does not end at a special vertex", g.edge_name(e)));
    }
    let local = s.local(v)?;
    let delta = s.to_local(v, s.h.aut().correction(e))?;
    is_phi_zero(&local.twist, &local.theta, &delta)
}

/// Whether `δ_e` is zero for the local twist at `τ(e)`.
pub fn correction_locally_zero(s: &RelativeTwistSpec, e: EdgeId) -> Result<bool> {
    require_valid(s)?;
    correction_zero_unchecked(s, e)
}

/// Edges into special vertices whose correction is not locally zero.
pub fn offending_edges(s: &RelativeTwistSpec) -> Result<Vec<EdgeId>> {
    require_valid(s)?;
    let g = s.top();
    let mut out = Vec::new();
    for e in g.edges().filter(|&e| s.h.is_special(g.terminal(e))) {
        if !correction_zero_unchecked(s, e)? {
            out.push(e);
        }
    }
    Ok(out)
}

pub fn classify(s: &RelativeTwistSpec) -> Result<Classification> {
    classify_with(s, DEFAULT_VERIFY_N)
}

/// Classifies and verifies with `n` iterations: witness growth in the
/// quadratic case, basis conjugacy classes in the linear case.
pub fn classify_with(s: &RelativeTwistSpec, n: usize) -> Result<Classification> {
    let offending = offending_edges(s)?;
    if offending.is_empty() {
        return Ok(Classification {
            verdict: Verdict::DehnTwistLinear,
            offending_edges: offending,
            witnesses: Vec::new(),
            linear_guard: linearity_guard(s, n)?,
        });
    }
    let mut witnesses = Vec::new();
    for &e in &offending {
        let witness = quadratic_witness(s, e)?;
        let (table, estimate) = verify_witness(s, &witness.word, n)?;
        witnesses.push(VerifiedWitness { witness, table, estimate });
    }
    Ok(Classification {
        verdict: Verdict::AtLeastQuadratic,
        offending_edges: offending,
        witnesses,
        linear_guard: Vec::new(),
    })
}

/// `H_v^(i)(δ_e^-1)` for `i = 1..=count`, in the letters of `G_v`.
pub fn correction_family(s: &RelativeTwistSpec, e: EdgeId, count: usize) -> Vec<Word> {
    let g = s.top();
    let hv = s.h.aut().vertex_map(g.terminal(e));
    let mut term = s.h.aut().correction(e).inverse();
    let mut acc = Word::identity();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        acc = acc.mul(&term);
        out.push(acc.clone());
        term = hv.apply(&term);
    }
    out
}

/// A closed word through `e` then `ē` that stays cyclically reduced and
/// grows quadratically under `H`.
pub fn quadratic_witness(s: &RelativeTwistSpec, e: EdgeId) -> Result<QuadraticWitness> {
    require_valid(s)?;
    let g = s.top();
    if correction_zero_unchecked(s, e)? {
        return Err(Error::Precondition(format!("correction at {} is locally zero", g.edge_name(e))));
    }
    let v = g.terminal(e);
    let local = s.local(v)?;
    let fix = fixed_subgroup_generators(&local.twist, &local.theta)?
        .iter()
        .map(|w| s.from_local(v, w))
        .collect::<Result<Vec<_>>>()?;

    let mut size = BLOCKER_FAMILY;
    let mut power = BLOCKER_POWER;
    let mut attempt = 0;
    let blocker = loop {
        match find_cancellation_blocker(&correction_family(s, e, size), &fix, power) {
            Ok(b) => break b,
            Err(Error::NotFound(_)) if attempt < BLOCKER_DOUBLINGS => {
                size *= 2;
                power *= 2;
                attempt += 1;
            }
            Err(err) => return Err(err),
        }
    };
    let gword = blocker.v.clone();
    if s.h.aut().vertex_map(v).apply(&gword) != gword {
        return Err(Error::VerificationFailed("blocker is not fixed by H_v".into()));
    }

    let u = g.initial(e);
    let mut syl = vec![Syllable::Stable(e), Syllable::Vertex(v, gword.clone()), Syllable::Stable(g.bar(e))];
    syl.extend(return_loop(g, e).ok_or_else(|| Error::Precondition("top graph is not minimal".into()))?);
    let path = g.reduce_from(u, &syl)?;
    if !g.is_cyclically_reduced(&path)? {
        return Err(Error::VerificationFailed("witness is not cyclically reduced".into()));
    }
    let id = s.identification()?;
    let word = id.lift(&path.syllables());
    Ok(QuadraticWitness { edge: e, path, word, g: gword, blocker })
}

/// Closed path at `ι(e)` avoiding `e` and `ē`: out to the nearest vertex
/// with a nontrivial group and back, or else around a circuit.
fn return_loop(g: &GraphOfGroups, e: EdgeId) -> Option<Vec<Syllable>> {
    let u = g.initial(e);
    let allowed = |x: EdgeId| x != e && x != g.bar(e);
    let mut parent: Vec<Option<EdgeId>> = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    let mut order = vec![u];
    seen[u] = true;
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        for f in g.edges().filter(|&f| allowed(f) && g.initial(f) == x) {
            let y = g.terminal(f);
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some(f);
                order.push(y);
                queue.push_back(y);
            }
        }
    }
    let path_to = |mut x: VertexId| {
        let mut edges = Vec::new();
        while let Some(f) = parent[x] {
            edges.push(f);
            x = g.initial(f);
        }
        edges.reverse();
        edges
    };
    let there_and_back = |out: &[EdgeId], middle: Vec<Syllable>| {
        let mut s: Vec<Syllable> = out.iter().map(|&f| Syllable::Stable(f)).collect();
        s.extend(middle);
        s.extend(out.iter().rev().map(|&f| Syllable::Stable(g.bar(f))));
        s
    };

    if let Some(&w) = order.iter().find(|&&w| g.basis(w).rank() > 0) {
        return Some(there_and_back(&path_to(w), vec![Syllable::Vertex(w, Word::gen(0))]));
    }
    let tree_edge = |f: EdgeId| parent[g.terminal(f)] == Some(f) || parent[g.initial(f)] == Some(g.bar(f));
    let h = g.edges().find(|&f| allowed(f) && seen[g.initial(f)] && !tree_edge(f))?;
    let (p, q) = (path_to(g.initial(h)), path_to(g.terminal(h)));
    let common = p.iter().zip(&q).take_while(|(a, b)| a == b).count();
    let mut circuit: Vec<Syllable> = p[common..].iter().map(|&f| Syllable::Stable(f)).collect();
    circuit.push(Syllable::Stable(h));
    circuit.extend(q[common..].iter().rev().map(|&f| Syllable::Stable(g.bar(f))));
    Some(there_and_back(&p[..common], circuit))
}

/// Cyclic lengths of `φ^k(w)` for `k = 0..=n` and their degree estimate.
pub fn conjugacy_growth(s: &RelativeTwistSpec, w: &Word, n: usize) -> Result<(GrowthTable, DegreeEstimate)> {
    let (id, phi) = s.induced()?;
    if !id.basis().contains(w) {
        return invalid("word is not over the top basis");
    }
    let mut table = growth_table(|x| phi.apply(x), w, n, true)?;
    table.subject = id.basis().format(w);
    let est = estimate_degree(&table)?;
    Ok((table, est))
}

/// [`conjugacy_growth`] that fails unless the degree is at least two.
pub fn verify_witness(s: &RelativeTwistSpec, w: &Word, n: usize) -> Result<(GrowthTable, DegreeEstimate)> {
    if n < 32 {
        return invalid("witness verification needs at least 32 iterations");
    }
    let (table, est) = conjugacy_growth(s, w, n)?;
    if est.degree < 2 || !est.ok {
        return Err(Error::VerificationFailed(format!("witness grows with degree {} (ok = {})", est.degree, est.ok)));
    }
    Ok((table, est))
}

/// Length of the vertex syllable between `t_e` and `t_ē` in `H^k(path)`
/// for `k = 0..=n`.
pub fn inner_syllable_lengths(s: &RelativeTwistSpec, w: &QuadraticWitness, n: usize) -> Result<Vec<usize>> {
    let g = s.top();
    let h = s.h.aut();
    let (e, eb) = (w.edge, g.bar(w.edge));
    let mut cur = w.path.clone();
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        if k > 0 {
            cur = h.apply(&cur);
        }
        let ty = cur.path_type();
        let i = (0..ty.len().saturating_sub(1))
            .find(|&i| ty[i] == e && ty[i + 1] == eb)
            .ok_or_else(|| Error::VerificationFailed(format!("image {k} lost the pair e, ebar")))?;
        out.push(cur.vertex_syllables()[i + 1].len());
    }
    Ok(out)
}

/// Bound on the cancellation in `w_k g w_k^-1` over `k = 1..=n`.
pub fn blocker_cancellation(s: &RelativeTwistSpec, w: &QuadraticWitness, n: usize) -> usize {
    correction_family(s, w.edge, n).iter().map(|x| conjugation_cancellation(x, &w.g)).max().unwrap_or(0)
}

/// Degree estimates of every basis conjugacy class; fails on any degree
/// above one.
pub fn linearity_guard(s: &RelativeTwistSpec, n: usize) -> Result<Vec<(Word, DegreeEstimate)>> {
    let id = s.identification()?;
    let mut out = Vec::new();
    for x in id.basis().generators() {
        let (_, est) = conjugacy_growth(s, &x, n)?;
        if est.degree > 1 || !est.ok {
            return Err(Error::VerificationFailed(format!("basis class {} grows with degree {}", id.basis().format(&x), est.degree)));
        }
        out.push((x, est));
    }
    Ok(out)
}
