//! JSON documents and their conversion to core values. Conversion errors
//! carry a JSON pointer to the offending field.

use std::collections::BTreeMap;

use gog_core::dichotomy::{LocalTwist, RelativeTwistSpec};
use gog_core::gog::{BasisEntry, RawEdge};
use gog_core::twist::{DehnTwist, GoGAut, PartialTwistData};
use gog_core::{EdgeId, GraphOfGroups, Morphism, TreeIdentification, VertexId, Word};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub type DocResult<T> = std::result::Result<T, String>;

fn at<E: std::fmt::Display>(ptr: &str) -> impl Fn(E) -> String + '_ {
    move |e| format!("{ptr}: {e}")
}

/// Parses `text` into `T`, reporting the path of the first bad field.
pub fn parse_doc<T: DeserializeOwned>(text: &str) -> DocResult<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        format!("/{}: {}", if path == "." { "" } else { &path }, e.inner())
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: String,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub bar: String,
    pub to: String,
    pub group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GogDoc {
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
    pub orientation: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphMapDoc {
    Named(String),
    Explicit {
        #[serde(default)]
        vertices: BTreeMap<String, String>,
        #[serde(default)]
        edges: BTreeMap<String, String>,
    },
}

type VertexMapsDoc = BTreeMap<String, BTreeMap<String, String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutDoc {
    pub graph_map: GraphMapDoc,
    #[serde(default)]
    pub vertex_maps: VertexMapsDoc,
    #[serde(default)]
    pub vertex_maps_inverse: VertexMapsDoc,
    #[serde(default)]
    pub edge_maps: BTreeMap<String, i64>,
    #[serde(default)]
    pub corrections: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gammas: Option<BTreeMap<String, i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twistors: Option<BTreeMap<String, i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryDoc {
    Vertex { vertex: String, generator: String },
    Edge { edge: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaDoc {
    pub tree: Vec<String>,
    pub basepoint: String,
    pub basis_map: BTreeMap<String, EntryDoc>,
}

/// A graph of groups with one automorphism and an optional identification
/// of the fundamental group with a free group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutFileDoc {
    pub gog: GogDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aut: Option<AutDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<TwistDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<ThetaDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalDoc {
    pub gog: GogDoc,
    pub twist: TwistDoc,
    pub theta: ThetaDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDoc {
    pub top: GogDoc,
    pub aut: AutDoc,
    pub special: Vec<String>,
    pub locals: BTreeMap<String, LocalDoc>,
}

pub fn gog_from_doc(doc: &GogDoc, ptr: &str) -> DocResult<GraphOfGroups> {
    let mut edges = Vec::new();
    for (i, e) in doc.edges.iter().enumerate() {
        let image = match (e.group.as_str(), &e.image) {
            ("1", None) => None,
            ("Z", Some(w)) => Some(w.clone()),
            ("1", Some(_)) => return Err(format!("{ptr}/edges/{i}/image: trivial edge group takes no image")),
            ("Z", None) => return Err(format!("{ptr}/edges/{i}/image: infinite cyclic edge group needs an image")),
            (g, _) => return Err(format!("{ptr}/edges/{i}/group: expected \"1\" or \"Z\", found {g:?}")),
        };
        edges.push(RawEdge {
            id: e.id.clone(),
            bar: e.bar.clone(),
            to: e.to.clone(),
            image,
        });
    }
    let vertices = doc.vertices.iter().map(|v| (v.id.clone(), v.basis.clone())).collect();
    let g = GraphOfGroups::new(vertices, edges, doc.orientation.clone()).map_err(at(ptr))?;
    let violations = g.validate();
    if !violations.is_empty() {
        return Err(format!("{ptr}: {}", violations.join("; ")));
    }
    Ok(g)
}

pub fn gog_to_doc(g: &GraphOfGroups) -> GogDoc {
    GogDoc {
        vertices: g
            .vertices()
            .map(|v| VertexDoc {
                id: g.vertex_name(v).to_string(),
                basis: g.basis(v).symbols().to_vec(),
            })
            .collect(),
        edges: g
            .edges()
            .map(|e| EdgeDoc {
                id: g.edge_name(e).to_string(),
                bar: g.edge_name(g.bar(e)).to_string(),
                to: g.vertex_name(g.terminal(e)).to_string(),
                group: if g.group(e).is_trivial() { "1" } else { "Z" }.to_string(),
                image: g.group(e).image().map(|w| g.basis(g.terminal(e)).format(w)),
            })
            .collect(),
        orientation: g.positive_edges().map(|e| g.edge_name(e).to_string()).collect(),
    }
}

fn vertex(g: &GraphOfGroups, name: &str, ptr: &str) -> DocResult<VertexId> {
    g.vertex_id(name).map_err(|_| format!("{ptr}: unknown vertex {name:?}"))
}

fn edge(g: &GraphOfGroups, name: &str, ptr: &str) -> DocResult<EdgeId> {
    g.edge_id(name).map_err(|_| format!("{ptr}: unknown edge {name:?}"))
}

/// Images of every generator of `source`, parsed over `target`'s basis.
fn morphism(g: &GraphOfGroups, source: VertexId, target: VertexId, images: &BTreeMap<String, String>, ptr: &str) -> DocResult<Morphism> {
    let sb = g.basis(source);
    for name in images.keys() {
        if sb.index_of(name).is_none() {
            return Err(format!("{ptr}/{name}: unknown generator of {}", g.vertex_name(source)));
        }
    }
    let mut out = Vec::new();
    for name in sb.symbols() {
        let text = images.get(name).ok_or_else(|| format!("{ptr}: missing image of {name}"))?;
        out.push(g.basis(target).parse(text).map_err(at(&format!("{ptr}/{name}")))?);
    }
    Ok(Morphism::new(out))
}

pub fn aut_from_doc(g: &GraphOfGroups, doc: &AutDoc, ptr: &str) -> DocResult<GoGAut> {
    let (vperm, eperm) = match &doc.graph_map {
        GraphMapDoc::Named(s) if s == "id" => (g.vertices().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>()),
        GraphMapDoc::Named(s) => return Err(format!("{ptr}/graph_map: expected \"id\" or an explicit map, found {s:?}")),
        GraphMapDoc::Explicit { vertices, edges } => {
            let mut vp: Vec<VertexId> = g.vertices().collect();
            for (k, v) in vertices {
                let p = format!("{ptr}/graph_map/vertices/{k}");
                vp[vertex(g, k, &p)?] = vertex(g, v, &p)?;
            }
            let mut ep: Vec<EdgeId> = g.edges().collect();
            for (k, v) in edges {
                let p = format!("{ptr}/graph_map/edges/{k}");
                ep[edge(g, k, &p)?] = edge(g, v, &p)?;
            }
            (vp, ep)
        }
    };
    for k in doc.vertex_maps_inverse.keys() {
        if !doc.vertex_maps.contains_key(k) {
            return Err(format!("{ptr}/vertex_maps_inverse/{k}: inverse given without a vertex map"));
        }
    }
    let mut maps = Vec::new();
    let mut inverses = Vec::new();
    for v in g.vertices() {
        let name = g.vertex_name(v);
        match doc.vertex_maps.get(name) {
            None => {
                if vperm[v] != v {
                    return Err(format!("{ptr}/vertex_maps: vertex {name} is moved and needs a map"));
                }
                maps.push(Morphism::identity(g.basis(v).rank()));
                inverses.push(Morphism::identity(g.basis(v).rank()));
            }
            Some(images) => {
                maps.push(morphism(g, v, vperm[v], images, &format!("{ptr}/vertex_maps/{name}"))?);
                let inv = doc
                    .vertex_maps_inverse
                    .get(name)
                    .ok_or_else(|| format!("{ptr}/vertex_maps_inverse: missing inverse for {name}"))?;
                inverses.push(morphism(g, vperm[v], v, inv, &format!("{ptr}/vertex_maps_inverse/{name}"))?);
            }
        }
    }
    for k in doc.vertex_maps.keys() {
        vertex(g, k, &format!("{ptr}/vertex_maps/{k}"))?;
    }
    let mut signs = vec![1; g.edge_count()];
    for (k, &s) in &doc.edge_maps {
        signs[edge(g, k, &format!("{ptr}/edge_maps/{k}"))?] = s;
    }
    let mut corrections = vec![Word::identity(); g.edge_count()];
    for (k, text) in &doc.corrections {
        let p = format!("{ptr}/corrections/{k}");
        let e = edge(g, k, &p)?;
        corrections[e] = g.basis(g.terminal(eperm[e])).parse(text).map_err(at(&p))?;
    }
    let h = GoGAut::new(g.clone(), vperm, eperm, maps, inverses, signs, corrections).map_err(at(ptr))?;
    let violations = h.validate();
    if !violations.is_empty() {
        return Err(format!("{ptr}: {}", violations.join("; ")));
    }
    Ok(h)
}

pub fn aut_to_doc(h: &GoGAut) -> AutDoc {
    let g = h.base();
    let graph_map = if h.acts_trivially_on_graph() {
        GraphMapDoc::Named("id".into())
    } else {
        GraphMapDoc::Explicit {
            vertices: g.vertices().map(|v| (g.vertex_name(v).to_string(), g.vertex_name(h.vertex_image(v)).to_string())).collect(),
            edges: g.edges().map(|e| (g.edge_name(e).to_string(), g.edge_name(h.edge_image(e)).to_string())).collect(),
        }
    };
    let mut vertex_maps = BTreeMap::new();
    let mut vertex_maps_inverse = BTreeMap::new();
    for v in g.vertices() {
        let (m, inv) = (h.vertex_map(v), h.vertex_inverse(v));
        if m.is_identity() && h.vertex_image(v) == v {
            continue;
        }
        let (src, dst) = (g.basis(v), g.basis(h.vertex_image(v)));
        let name = g.vertex_name(v).to_string();
        vertex_maps.insert(name.clone(), src.symbols().iter().zip(m.images()).map(|(s, w)| (s.clone(), dst.format(w))).collect());
        vertex_maps_inverse.insert(name, dst.symbols().iter().zip(inv.images()).map(|(s, w)| (s.clone(), src.format(w))).collect());
    }
    AutDoc {
        graph_map,
        vertex_maps,
        vertex_maps_inverse,
        edge_maps: g.edges().filter(|&e| h.edge_sign(e) != 1).map(|e| (g.edge_name(e).to_string(), h.edge_sign(e))).collect(),
        corrections: g
            .edges()
            .filter(|&e| !h.correction(e).is_identity())
            .map(|e| (g.edge_name(e).to_string(), g.basis(g.terminal(h.edge_image(e))).format(h.correction(e))))
            .collect(),
    }
}

pub fn twist_to_doc(d: &DehnTwist) -> TwistDoc {
    let g = d.base();
    TwistDoc {
        gammas: Some(g.edges().filter(|&e| d.gammas()[e] != 0).map(|e| (g.edge_name(e).to_string(), d.gammas()[e])).collect()),
        twistors: None,
    }
}

pub fn theta_to_doc(g: &GraphOfGroups, id: &TreeIdentification) -> ThetaDoc {
    ThetaDoc {
        tree: id.tree_edges().into_iter().filter(|&e| g.is_positive(e)).map(|e| g.edge_name(e).to_string()).collect(),
        basepoint: g.vertex_name(id.basepoint()).to_string(),
        basis_map: id
            .basis()
            .symbols()
            .iter()
            .zip(id.entries())
            .map(|(name, entry)| {
                let doc = match *entry {
                    BasisEntry::Vertex(v, j) => EntryDoc::Vertex {
                        vertex: g.vertex_name(v).to_string(),
                        generator: g.basis(v).symbol(j).to_string(),
                    },
                    BasisEntry::Edge(e) => EntryDoc::Edge { edge: g.edge_name(e).to_string() },
                };
                (name.clone(), doc)
            })
            .collect(),
    }
}

/// Normalized document: twists as nonzero `gammas`, identity data omitted.
pub fn aut_file_to_doc(f: &AutFile) -> AutFileDoc {
    AutFileDoc {
        gog: gog_to_doc(&f.gog),
        aut: if f.twist.is_some() { None } else { Some(aut_to_doc(&f.aut)) },
        twist: f.twist.as_ref().map(twist_to_doc),
        theta: Some(theta_to_doc(&f.gog, &f.theta)),
    }
}

pub fn twist_from_doc(g: &GraphOfGroups, doc: &TwistDoc, ptr: &str) -> DocResult<DehnTwist> {
    match (&doc.gammas, &doc.twistors) {
        (Some(gammas), None) => {
            let mut out = vec![0; g.edge_count()];
            for (k, &n) in gammas {
                out[edge(g, k, &format!("{ptr}/gammas/{k}"))?] = n;
            }
            DehnTwist::from_gammas(g.clone(), out).map_err(at(&format!("{ptr}/gammas")))
        }
        (None, Some(twistors)) => {
            let mut out = Vec::new();
            for (k, &z) in twistors {
                let p = format!("{ptr}/twistors/{k}");
                let e = edge(g, k, &p)?;
                if !g.is_positive(e) {
                    return Err(format!("{p}: twistors are given on positively oriented edges"));
                }
                out.push((e, z));
            }
            DehnTwist::from_twistors(g.clone(), &out).map_err(at(&format!("{ptr}/twistors")))
        }
        _ => Err(format!("{ptr}: give exactly one of gammas and twistors")),
    }
}

pub fn theta_from_doc(g: &GraphOfGroups, doc: &ThetaDoc, ptr: &str) -> DocResult<TreeIdentification> {
    let mut tree = Vec::new();
    for (i, name) in doc.tree.iter().enumerate() {
        tree.push(edge(g, name, &format!("{ptr}/tree/{i}"))?);
    }
    let base = vertex(g, &doc.basepoint, &format!("{ptr}/basepoint"))?;
    let mut symbols = Vec::new();
    for (name, entry) in &doc.basis_map {
        let p = format!("{ptr}/basis_map/{name}");
        let entry = match entry {
            EntryDoc::Vertex { vertex: v, generator } => {
                let v = vertex(g, v, &p)?;
                let j = g.basis(v).index_of(generator).ok_or_else(|| format!("{p}: unknown generator {generator:?}"))?;
                BasisEntry::Vertex(v, j)
            }
            EntryDoc::Edge { edge: e } => BasisEntry::Edge(edge(g, e, &p)?),
        };
        symbols.push((name.clone(), entry));
    }
    TreeIdentification::new(g, &tree, base, symbols).map_err(at(ptr))
}

/// Automorphism file: the graph, the automorphism (or twist), and the
/// identification used to read free-group words.
pub struct AutFile {
    pub gog: GraphOfGroups,
    pub aut: GoGAut,
    pub twist: Option<DehnTwist>,
    pub theta: TreeIdentification,
}

pub fn aut_file_from_doc(doc: &AutFileDoc) -> DocResult<AutFile> {
    let g = gog_from_doc(&doc.gog, "/gog")?;
    let (aut, twist) = match (&doc.aut, &doc.twist) {
        (Some(a), None) => (aut_from_doc(&g, a, "/aut")?, None),
        (None, Some(t)) => {
            let d = twist_from_doc(&g, t, "/twist")?;
            (d.aut().clone(), Some(d))
        }
        _ => return Err("/: give exactly one of aut and twist".into()),
    };
    let theta = match &doc.theta {
        Some(t) => theta_from_doc(&g, t, "/theta")?,
        None => TreeIdentification::standard(&g, &default_tree(&g), 0).map_err(at("/gog"))?,
    };
    Ok(AutFile { gog: g, aut, twist, theta })
}

fn default_tree(g: &GraphOfGroups) -> Vec<EdgeId> {
    let mut seen = vec![false; g.vertex_count()];
    seen[0] = true;
    let mut tree = Vec::new();
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        for e in g.positive_edges().flat_map(|e| [e, g.bar(e)]) {
            if g.initial(e) == v && !seen[g.terminal(e)] {
                seen[g.terminal(e)] = true;
                tree.push(e);
                stack.push(g.terminal(e));
            }
        }
    }
    tree
}

pub fn spec_from_doc(doc: &SpecDoc) -> DocResult<RelativeTwistSpec> {
    let top = gog_from_doc(&doc.top, "/top")?;
    let aut = aut_from_doc(&top, &doc.aut, "/aut")?;
    let mut special = Vec::new();
    for (i, name) in doc.special.iter().enumerate() {
        special.push(vertex(&top, name, &format!("/special/{i}"))?);
    }
    let h = PartialTwistData::new(aut, special).map_err(at("/special"))?;
    let mut locals = BTreeMap::new();
    for (name, local) in &doc.locals {
        let ptr = format!("/locals/{name}");
        let v = vertex(&top, name, &ptr)?;
        let lg = gog_from_doc(&local.gog, &format!("{ptr}/gog"))?;
        let twist = twist_from_doc(&lg, &local.twist, &format!("{ptr}/twist"))?;
        let theta = theta_from_doc(&lg, &local.theta, &format!("{ptr}/theta"))?;
        locals.insert(v, LocalTwist { twist, theta });
    }
    Ok(RelativeTwistSpec::new(h, locals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use gog_core::fixtures;

    #[test]
    fn gog_round_trip() {
        for g in [fixtures::loop_gog(), fixtures::dichotomy_top()] {
            let doc = gog_to_doc(&g);
            assert_eq!(gog_from_doc(&doc, "").unwrap(), g);
            let text = serde_json::to_string(&doc).unwrap();
            assert_eq!(parse_doc::<GogDoc>(&text).unwrap(), doc);
        }
    }

    #[test]
    fn aut_round_trip() {
        for h in [fixtures::dichotomy_partial(true).aut().clone(), fixtures::loop_twist(3).aut().clone()] {
            let doc = aut_to_doc(&h);
            assert_eq!(aut_from_doc(h.base(), &doc, "").unwrap(), h);
        }
    }

    #[test]
    fn pointers_name_the_field() {
        let text = r#"{"vertices":[{"id":"v","basis":["a"]}],"edges":[{"id":"e","bar":"e","to":"v","group":"Q"}],"orientation":[]}"#;
        let doc: GogDoc = parse_doc(text).unwrap();
        assert_eq!(gog_from_doc(&doc, "/gog").unwrap_err(), "/gog/edges/0/group: expected \"1\" or \"Z\", found \"Q\"");
        let err = parse_doc::<GogDoc>(r#"{"vertices":[{"id":"v","basis":"a"}],"edges":[],"orientation":[]}"#).unwrap_err();
        assert!(err.starts_with("/vertices[0].basis:"), "{err}");
    }
}
