//! Twisted conjugation `w -> γ^-1 w H(γ)` for automorphisms acting as the
//! identity on the underlying graph.

use crate::efficiency::is_efficient;
use crate::freeword::Word;
use crate::gog::{PathWord, Syllable, TreeIdentification};
use crate::twist::{DehnTwist, GoGAut};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HReductionTrace {
    pub start: PathWord,
    /// Prefixes `r_0 t_1` moved by each elementary operation, in order.
    pub steps: Vec<PathWord>,
    pub result: PathWord,
    /// `result = γ^-1 start H(γ)`.
    pub conjugator: PathWord,
}

fn check_pre(h: &GoGAut, w: &PathWord) -> Result<()> {
    if !h.acts_trivially_on_graph() {
        return Err(Error::Precondition("automorphism moves the underlying graph".into()));
    }
    if !w.is_closed() {
        return Err(Error::Precondition("word is not closed".into()));
    }
    Ok(())
}

/// `(p, p^-1 w H(p))` with `p = r_0 t_1`.
fn step(h: &GoGAut, w: &PathWord) -> Result<(PathWord, PathWord)> {
    if w.path_length() == 0 {
        return Err(Error::Domain("elementary operation on a vertex element".into()));
    }
    let g = h.base();
    let p = g.reduce_from(
        w.start(),
        &[Syllable::Vertex(w.start(), w.vertex_syllables()[0].clone()), Syllable::Stable(w.path_type()[0])],
    )?;
    let out = g.product(p.end(), [&g.invert(&p), w, &h.apply(&p)])?;
    Ok((p, out))
}

pub fn elementary_op(h: &GoGAut, w: &PathWord) -> Result<PathWord> {
    check_pre(h, w)?;
    Ok(step(h, w)?.1)
}

/// Adopts the first strictly shorter word found among up to `q` successive
/// elementary operations; stops when a full round finds none.
pub fn h_reduce(h: &GoGAut, w: &PathWord) -> Result<HReductionTrace> {
    check_pre(h, w)?;
    let g = h.base();
    let mut steps = Vec::new();
    let mut cur = w.clone();
    let mut conjugator = g.identity_at(w.start());
    'outer: while cur.path_length() > 0 {
        let q = cur.path_length();
        let mut probe = cur.clone();
        let mut moved = Vec::new();
        for _ in 0..q {
            let (p, next) = step(h, &probe)?;
            moved.push(p);
            probe = next;
            if probe.path_length() < q {
                for p in &moved {
                    conjugator = g.multiply(&conjugator, p)?;
                }
                steps.extend(moved);
                cur = probe;
                continue 'outer;
            }
        }
        break;
    }
    Ok(HReductionTrace {
        start: w.clone(),
        steps,
        result: cur,
        conjugator,
    })
}

pub fn h_length(h: &GoGAut, w: &PathWord) -> Result<usize> {
    Ok(h_reduce(h, w)?.result.path_length())
}

/// Exact for Dehn twists. For other automorphisms a `false` only means no
/// shortening was found.
pub fn is_h_zero(h: &GoGAut, w: &PathWord) -> Result<bool> {
    Ok(h_length(h, w)? == 0)
}

/// Whether `w`, read through `id`, is zero for the efficient twist `d`.
pub fn is_phi_zero(d: &DehnTwist, id: &TreeIdentification, w: &Word) -> Result<bool> {
    let report = is_efficient(d);
    if !report.efficient {
        return Err(Error::Precondition(format!("Dehn twist is not efficient: {report:?}")));
    }
    is_h_zero(d.aut(), &id.encode(d.base(), w)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::gog::{EdgeId, GraphOfGroups};
    use proptest::prelude::*;

    fn lp(text: &str) -> (DehnTwist, PathWord) {
        let d = fixtures::loop_twist(1);
        let w = d.base().parse_path(text, Some(0)).unwrap();
        (d, w)
    }

    /// Plain cyclic reduction by ordinary conjugation.
    fn cyclic_reduction(g: &GraphOfGroups, w: &PathWord) -> PathWord {
        let mut w = w.clone();
        while !g.is_cyclically_reduced(&w).unwrap() {
            let p = g.reduce_from(w.start(), &[Syllable::Vertex(w.start(), w.vertex_syllables()[0].clone()), Syllable::Stable(w.path_type()[0])]).unwrap();
            w = g.product(p.end(), [&g.invert(&p), &w, &p]).unwrap();
        }
        w
    }

    fn check_trace(h: &GoGAut, t: &HReductionTrace) {
        let g = h.base();
        let back = g.product(t.result.start(), [&g.invert(&t.conjugator), &t.start, &h.apply(&t.conjugator)]).unwrap();
        assert_eq!(back, t.result);
        assert!(t.result.path_length() <= t.start.path_length());
    }

    #[test]
    fn vertex_element_is_fixed_point() {
        let (d, w) = lp("a b^2");
        let t = h_reduce(d.aut(), &w).unwrap();
        assert!(t.steps.is_empty());
        assert_eq!(t.result, w);
        assert!(is_h_zero(d.aut(), &w).unwrap());
        assert!(matches!(elementary_op(d.aut(), &w), Err(Error::Domain(_))));
    }

    #[test]
    fn backtrack_then_vertex() {
        let (d, w) = lp("@e a^5 @ebar b");
        let t = h_reduce(d.aut(), &w).unwrap();
        assert_eq!(t.result, d.base().parse_path("b^6", Some(0)).unwrap());
        check_trace(d.aut(), &t);
        assert_eq!(h_length(d.aut(), &w).unwrap(), 0);
    }

    #[test]
    fn stable_letter_is_not_zero() {
        let (d, w) = lp("@e");
        assert_eq!(h_length(d.aut(), &w).unwrap(), 1);
        assert!(!is_h_zero(d.aut(), &w).unwrap());
    }

    #[test]
    fn cyclically_reduced_words_rotate() {
        let (d, w) = lp("a @e b^2 @e");
        let once = elementary_op(d.aut(), &w).unwrap();
        assert_eq!(once.path_length(), 2);
        let twice = elementary_op(d.aut(), &once).unwrap();
        assert_eq!(twice.path_type(), w.path_type());
        assert_eq!(h_reduce(d.aut(), &w).unwrap().result, w);
    }

    #[test]
    fn trivial_edge_backtrack_shortens() {
        let g = fixtures::dichotomy_top();
        let d = DehnTwist::from_gammas(g.clone(), vec![0; g.edge_count()]).unwrap();
        let w = g.parse_path("@fbar c @f", None).unwrap();
        let once = elementary_op(d.aut(), &w).unwrap();
        assert_eq!(once.path_length(), 0);
    }

    #[test]
    fn phi_zero_on_loop() {
        let d = fixtures::loop_twist(1);
        let id = fixtures::loop_theta(d.base());
        let b = id.basis().clone();
        assert!(is_phi_zero(&d, &id, &b.parse("a b a").unwrap()).unwrap());
        assert!(!is_phi_zero(&d, &id, &b.parse("t").unwrap()).unwrap());
        assert!(is_phi_zero(&d, &id, &b.parse("t a^5 t^-1 b").unwrap()).unwrap());
        let d0 = fixtures::loop_twist(0);
        assert!(matches!(is_phi_zero(&d0, &id, &b.parse("t").unwrap()), Err(Error::Precondition(_))));
    }

    #[test]
    fn twisted_length_can_exceed_cyclic_length() {
        let (d, w) = lp("@ebar @ebar a @e @e");
        assert_eq!(cyclic_reduction(d.base(), &w).path_length(), 0);
        assert_eq!(h_length(d.aut(), &w).unwrap(), 2);
        // No conjugator of up to seven letters does better.
        let g = d.base();
        let gens: Vec<PathWord> = ["a", "a^-1", "b", "b^-1", "@e", "@ebar"].iter().map(|x| g.parse_path(x, Some(0)).unwrap()).collect();
        let mut frontier = vec![g.identity_at(0)];
        let mut seen = std::collections::HashSet::new();
        for _ in 0..7 {
            let mut next = Vec::new();
            for x in &frontier {
                let r = g.product(0, [&g.invert(x), &w, &d.apply(x)]).unwrap();
                assert!(r.path_length() >= 2);
                for y in &gens {
                    let n = g.multiply(x, y).unwrap();
                    if seen.insert(n.clone()) {
                        next.push(n);
                    }
                }
            }
            frontier = next;
        }
    }

    /// Inverse elementary operation: moves `t_q r_q` to the front.
    fn back_step(h: &GoGAut, w: &PathWord) -> PathWord {
        let g = h.base();
        let q = w.path_length();
        let s = g.reduce_from(
            g.initial(w.path_type()[q - 1]),
            &[Syllable::Stable(w.path_type()[q - 1]), Syllable::Vertex(w.end(), w.vertex_syllables()[q].clone())],
        )
        .unwrap();
        let gamma = g.invert(&s);
        g.product(gamma.end(), [&s, w, &h.apply(&gamma)]).unwrap()
    }

    /// Final lengths of every maximal chain, where each link is the first
    /// shortening met rotating forwards or backwards.
    fn all_final_lengths(h: &GoGAut, w: &PathWord, out: &mut Vec<usize>) {
        let q = w.path_length();
        let mut branched = false;
        for forward in [true, false] {
            let mut probe = w.clone();
            for _ in 0..q {
                probe = if forward { step(h, &probe).unwrap().1 } else { back_step(h, &probe) };
                if probe.path_length() < q {
                    branched = true;
                    all_final_lengths(h, &probe, out);
                    break;
                }
            }
        }
        if !branched {
            out.push(q);
        }
    }

    fn arb_loop_word(max_q: usize) -> impl Strategy<Value = Vec<Syllable>> {
        let vert = prop::collection::vec((0usize..2, any::<bool>()), 0..3);
        prop::collection::vec((vert.clone(), any::<bool>()), 0..=max_q).prop_flat_map(move |body| {
            vert.clone().prop_map(move |tail| {
                let word = |ls: &[(usize, bool)]| Word::from_letters(ls.iter().map(|&(i, p)| crate::freeword::Letter::new(i, p)));
                let mut s = Vec::new();
                for (r, pos) in &body {
                    s.push(Syllable::Vertex(0, word(r)));
                    s.push(Syllable::Stable(if *pos { 0 } else { 1 } as EdgeId));
                }
                s.push(Syllable::Vertex(0, word(&tail)));
                s
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn traces_are_conjugations(s in arb_loop_word(6), z in -2i64..=2) {
            let d = fixtures::loop_twist(z);
            let w = d.base().reduce_from(0, &s).unwrap();
            let t = h_reduce(d.aut(), &w).unwrap();
            check_trace(d.aut(), &t);
        }

        #[test]
        fn reduced_iff_cyclically_reduced(s in arb_loop_word(6), z in -2i64..=2) {
            let d = fixtures::loop_twist(z);
            let g = d.base();
            let w = g.reduce_from(0, &s).unwrap();
            let t = h_reduce(d.aut(), &w).unwrap();
            prop_assert!(g.is_cyclically_reduced(&t.result).unwrap());
            prop_assert_eq!(t.steps.is_empty(), g.is_cyclically_reduced(&w).unwrap());
        }

        #[test]
        fn branch_choice_does_not_matter(s in arb_loop_word(6)) {
            let d = fixtures::loop_twist(1);
            let w = d.base().reduce_from(0, &s).unwrap();
            let mut lens = Vec::new();
            all_final_lengths(d.aut(), &w, &mut lens);
            prop_assert!(lens.iter().all(|&n| n == lens[0]));
            prop_assert_eq!(lens[0], h_length(d.aut(), &w).unwrap());
        }

        #[test]
        fn invariant_under_twisted_conjugation(s in arb_loop_word(4), c in arb_loop_word(3)) {
            let d = fixtures::loop_twist(1);
            let g = d.base();
            let w = g.reduce_from(0, &s).unwrap();
            let x = g.reduce_from(0, &c).unwrap();
            let w2 = g.product(0, [&g.invert(&x), &w, &d.apply(&x)]).unwrap();
            prop_assert_eq!(h_length(d.aut(), &w).unwrap(), h_length(d.aut(), &w2).unwrap());
        }
    }
}
