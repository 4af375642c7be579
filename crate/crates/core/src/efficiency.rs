//! Efficiency conditions for classical Dehn twists and the fixed subgroup
//! they guarantee at the basepoint.

use crate::freeword::{is_conjugate, primitive_root, Word};
use crate::gog::{EdgeGroup, EdgeId, GraphOfGroups, TreeIdentification, VertexId};
use crate::twist::DehnTwist;
use crate::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bond {
    Positive,
    Negative,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EfficiencyReport {
    pub minimal: bool,
    pub invisible_vertices: Vec<VertexId>,
    pub proper_power_edges: Vec<EdgeId>,
    pub unused_edges: Vec<EdgeId>,
    pub bonded_pairs: Vec<(EdgeId, EdgeId, Bond)>,
    pub efficient: bool,
}

/// Whether `f_e` maps onto the vertex group at `τ(e)`.
pub fn is_surjective(g: &GraphOfGroups, e: EdgeId) -> bool {
    let rank = g.basis(g.terminal(e)).rank();
    match g.group(e) {
        EdgeGroup::Trivial => rank == 0,
        EdgeGroup::Cyclic(u) => rank == 1 && u.len() == 1,
    }
}

pub fn check_minimal(g: &GraphOfGroups) -> bool {
    g.vertices().all(|v| {
        let into = g.edges_into(v);
        into.len() != 1 || !is_surjective(g, into[0])
    })
}

pub fn check_invisible(g: &GraphOfGroups) -> Vec<VertexId> {
    g.vertices()
        .filter(|&v| {
            let into = g.edges_into(v);
            into.len() == 2 && into.iter().all(|&e| is_surjective(g, e))
        })
        .collect()
}

pub fn check_proper_power(g: &GraphOfGroups) -> Vec<EdgeId> {
    g.edges()
        .filter(|&e| match g.group(e) {
            EdgeGroup::Cyclic(u) => primitive_root(u).is_ok_and(|(_, k)| k >= 2),
            EdgeGroup::Trivial => false,
        })
        .collect()
}

/// Positively oriented infinite cyclic edges with zero twistor.
pub fn check_unused(d: &DehnTwist) -> Vec<EdgeId> {
    let g = d.base();
    g.positive_edges().filter(|&e| !g.group(e).is_trivial() && d.twistor(e) == 0).collect()
}

/// Bonding of two infinite cyclic edges with a common terminal vertex and
/// nonzero twistors.
pub fn check_bonding(d: &DehnTwist, e1: EdgeId, e2: EdgeId) -> Result<Bond> {
    let g = d.base();
    if g.terminal(e1) != g.terminal(e2) {
        return invalid("bonding needs a common terminal vertex");
    }
    let (Some(u1), Some(u2)) = (g.group(e1).image(), g.group(e2).image()) else {
        return invalid("bonding needs infinite cyclic edge groups");
    };
    let (z1, z2) = (d.twistor(e1), d.twistor(e2));
    if z1 == 0 || z2 == 0 {
        return invalid("bonding needs nonzero twistors");
    }
    let (r1, k1) = primitive_root(u1)?;
    let (r2, k2) = primitive_root(u2)?;
    // f_i(z_i^n) = r_i^(s_i n); conjugate powers need conjugate roots and
    // equal exponents.
    let (s1, s2) = (z1 * k1, z2 * k2);
    let same_direction = if is_conjugate(&r1, &r2).is_some() {
        Some(s1.signum() == s2.signum())
    } else if is_conjugate(&r1, &r2.inverse()).is_some() {
        Some(s1.signum() != s2.signum())
    } else {
        None
    };
    Ok(match same_direction {
        Some(true) => Bond::Positive,
        Some(false) => Bond::Negative,
        None => Bond::None,
    })
}

pub fn is_efficient(d: &DehnTwist) -> EfficiencyReport {
    let g = d.base();
    let minimal = check_minimal(g);
    let invisible_vertices = check_invisible(g);
    let proper_power_edges = check_proper_power(g);
    let unused_edges = check_unused(d);
    let mut bonded_pairs = Vec::new();
    let twisted: Vec<EdgeId> = g.edges().filter(|&e| !g.group(e).is_trivial() && d.twistor(e) != 0).collect();
    for (i, &e1) in twisted.iter().enumerate() {
        for &e2 in &twisted[i + 1..] {
            if g.terminal(e1) == g.terminal(e2) {
                match check_bonding(d, e1, e2) {
                    Ok(Bond::None) | Err(_) => {}
                    Ok(b) => bonded_pairs.push((e1, e2, b)),
                }
            }
        }
    }
    let efficient = minimal
        && invisible_vertices.is_empty()
        && proper_power_edges.is_empty()
        && unused_edges.is_empty()
        && bonded_pairs.iter().all(|&(_, _, b)| b != Bond::Positive);
    EfficiencyReport {
        minimal,
        invisible_vertices,
        proper_power_edges,
        unused_edges,
        bonded_pairs,
        efficient,
    }
}

/// Basepoint vertex generators as words in the identified free group.
/// Each is fixed by the induced automorphism.
pub fn fixed_subgroup_generators(d: &DehnTwist, id: &TreeIdentification) -> Result<Vec<Word>> {
    let report = is_efficient(d);
    if !report.efficient {
        return Err(Error::Precondition(format!("Dehn twist is not efficient: {report:?}")));
    }
    let g = d.base();
    let v0 = id.basepoint();
    let phi = d.aut().induced_morphism(id)?;
    let mut out = Vec::new();
    for j in 0..g.basis(v0).rank() {
        let w = id.decode(&g.vertex_element(v0, Word::gen(j)))?;
        if phi.apply(&w) != w {
            return Err(Error::VerificationFailed(format!("vertex generator {j} is not fixed")));
        }
        out.push(w);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::gog::RawEdge;

    fn raw(id: &str, bar: &str, to: &str, image: Option<&str>) -> RawEdge {
        RawEdge {
            id: id.into(),
            bar: bar.into(),
            to: to.into(),
            image: image.map(Into::into),
        }
    }

    fn single(images: &[(&str, &str)], rank_names: &[&str]) -> GraphOfGroups {
        let mut edges = Vec::new();
        let mut orientation = Vec::new();
        for (i, (x, y)) in images.iter().enumerate() {
            let (e, eb) = (format!("e{i}"), format!("e{i}bar"));
            edges.push(raw(&e, &eb, "v", Some(x)));
            edges.push(raw(&eb, &e, "v", Some(y)));
            orientation.push(e);
        }
        GraphOfGroups::new(vec![("v".into(), rank_names.iter().map(|s| s.to_string()).collect())], edges, orientation).unwrap()
    }

    #[test]
    fn loop_fixture_is_efficient() {
        let r = is_efficient(&fixtures::loop_twist(1));
        assert!(r.efficient, "{r:?}");
        assert!(r.bonded_pairs.is_empty());
        assert!(check_minimal(&fixtures::loop_gog()));
        assert!(check_invisible(&fixtures::loop_gog()).is_empty());
    }

    #[test]
    fn zero_twistor_is_unused() {
        let r = is_efficient(&fixtures::loop_twist(0));
        assert_eq!(r.unused_edges, vec![0]);
        assert!(!r.efficient);
    }

    #[test]
    fn minimality() {
        let g = GraphOfGroups::new(
            vec![("v".into(), vec!["a".into(), "b".into()]), ("w".into(), vec!["x".into()])],
            vec![raw("f", "fbar", "w", Some("x")), raw("fbar", "f", "v", Some("a"))],
            vec!["f".into()],
        )
        .unwrap();
        assert!(!check_minimal(&g));
        let g = GraphOfGroups::new(
            vec![("v".into(), vec!["a".into(), "b".into()]), ("w".into(), vec![])],
            vec![raw("f", "fbar", "w", None), raw("fbar", "f", "v", None)],
            vec!["f".into()],
        )
        .unwrap();
        assert!(!check_minimal(&g));
    }

    #[test]
    fn proper_powers() {
        let g = single(&[("a^2", "b"), ("a b", "b"), ("(a b)^3", "a")], &["a", "b"]);
        let names: Vec<&str> = check_proper_power(&g).into_iter().map(|e| g.edge_name(e)).collect();
        assert_eq!(names, vec!["e0", "e2"]);
    }

    #[test]
    fn bonding_examples() {
        let d = fixtures::loop_twist(1);
        assert_eq!(check_bonding(&d, 0, 1).unwrap(), Bond::None);
        let g = single(&[("a", "b"), ("a^2", "b a b^-1")], &["a", "b"]);
        let d = DehnTwist::from_twistors(g.clone(), &[(0, 1), (2, 1)]).unwrap();
        assert_eq!(check_bonding(&d, 0, 2).unwrap(), Bond::Positive);
        assert_eq!(check_bonding(&d, 2, 0).unwrap(), Bond::Positive);
        let g = single(&[("a", "b"), ("a", "b a b^-1")], &["a", "b"]);
        let d = DehnTwist::from_twistors(g, &[(0, 1), (2, -1)]).unwrap();
        assert_eq!(check_bonding(&d, 0, 2).unwrap(), Bond::Negative);
        assert_eq!(check_bonding(&d, 2, 0).unwrap(), Bond::Negative);
        assert!(check_bonding(&fixtures::loop_twist(0), 0, 1).is_err());
    }

    #[test]
    fn fixed_generators_of_loop() {
        let d = fixtures::loop_twist(1);
        let id = fixtures::loop_theta(d.base());
        let gens = fixed_subgroup_generators(&d, &id).unwrap();
        let b = id.basis();
        assert_eq!(gens, vec![b.parse("a").unwrap(), b.parse("b").unwrap()]);
        assert!(matches!(fixed_subgroup_generators(&fixtures::loop_twist(0), &id), Err(Error::Precondition(_))));
    }

    #[test]
    fn efficient_implies_rank_two() {
        // Small generated corpus of one- and two-vertex graphs.
        let images = ["a", "b", "a^2", "a b", "x", "x^2"];
        for i in images {
            for j in images {
                for ranks in [&["a", "b"][..], &["a"][..]] {
                    let g = GraphOfGroups::new(
                        vec![("v".into(), ranks.iter().map(|s| s.to_string()).collect()), ("w".into(), vec!["x".into()])],
                        vec![raw("f", "fbar", "w", Some(if i.contains('x') { i } else { "x" })), raw("fbar", "f", "v", Some(if j.contains('x') { "a" } else { j }))],
                        vec!["f".into()],
                    );
                    let Ok(g) = g else { continue };
                    if !g.validate().is_empty() {
                        continue;
                    }
                    for z in [-1, 1, 2] {
                        let d = DehnTwist::from_twistors(g.clone(), &[(0, z)]).unwrap();
                        if is_efficient(&d).efficient {
                            assert!(g.vertices().all(|v| g.basis(v).rank() >= 2));
                        }
                    }
                }
            }
        }
    }
}
