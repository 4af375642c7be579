//! Small reference graphs of groups used by the tests, the acceptance
//! suite and the command line tool.

use crate::freeword::{Morphism, Word};
use crate::gog::{BasisEntry, GraphOfGroups, RawEdge, TreeIdentification};
use crate::twist::{DehnTwist, GoGAut, PartialTwistData};

fn edge(id: &str, bar: &str, to: &str, image: Option<&str>) -> RawEdge {
    RawEdge {
        id: id.into(),
        bar: bar.into(),
        to: to.into(),
        image: image.map(Into::into),
    }
}

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// One vertex with group `<a, b>` and a loop `e` with `f_e = a`, `f_ebar = b`.
pub fn loop_gog() -> GraphOfGroups {
    GraphOfGroups::new(
        vec![("v".into(), names(&["a", "b"]))],
        vec![edge("e", "ebar", "v", Some("a")), edge("ebar", "e", "v", Some("b"))],
        names(&["e"]),
    )
    .expect("loop fixture")
}

/// Loop fixture twist with twistor `z` on `e`.
pub fn loop_twist(z: i64) -> DehnTwist {
    let g = loop_gog();
    let e = g.edge_id("e").expect("edge e");
    DehnTwist::from_twistors(g, &[(e, z)]).expect("loop twist")
}

/// Basis `a, b, t` with `t` the stable letter of `e`.
pub fn loop_theta(g: &GraphOfGroups) -> TreeIdentification {
    let e = g.edge_id("e").expect("edge e");
    TreeIdentification::new(
        g,
        &[],
        0,
        vec![
            ("a".into(), BasisEntry::Vertex(0, 0)),
            ("b".into(), BasisEntry::Vertex(0, 1)),
            ("t".into(), BasisEntry::Edge(e)),
        ],
    )
    .expect("loop identification")
}

/// Vertices `u` with group `<c>` and `v` with group `<a, b, t>`, joined by
/// an edge `f` into `v` with trivial edge group.
pub fn dichotomy_top() -> GraphOfGroups {
    GraphOfGroups::new(
        vec![("u".into(), names(&["c"])), ("v".into(), names(&["a", "b", "t"]))],
        vec![edge("f", "fbar", "v", None), edge("fbar", "f", "u", None)],
        names(&["f"]),
    )
    .expect("top fixture")
}

/// Partial twist on [`dichotomy_top`]: the loop twist at `v`, correction
/// `b` on `f` (linear case) or `t` (quadratic case).
pub fn dichotomy_partial(quadratic: bool) -> PartialTwistData {
    let g = dichotomy_top();
    let v = g.vertex_id("v").expect("v");
    let bv = g.basis(v).clone();
    let p = |s: &str| bv.parse(s).expect("word");
    let hv = Morphism::new(vec![p("a"), p("b"), p("t a")]);
    let hv_inv = Morphism::new(vec![p("a"), p("b"), p("t a^-1")]);
    let mut corrections = vec![Word::identity(); g.edge_count()];
    corrections[g.edge_id("f").expect("f")] = p(if quadratic { "t" } else { "b" });
    let u = g.vertex_id("u").expect("u");
    let mut maps = vec![Morphism::identity(1); 2];
    let mut inverses = maps.clone();
    maps[v] = hv;
    inverses[v] = hv_inv;
    maps[u] = Morphism::identity(1);
    let aut = GoGAut::new(
        g.clone(),
        g.vertices().collect(),
        g.edges().collect(),
        maps,
        inverses,
        vec![1; g.edge_count()],
        corrections,
    )
    .expect("partial twist");
    PartialTwistData::new(aut, vec![v]).expect("partial twist")
}
