use std::collections::BTreeSet;

use braidlift::bimodule::MixedWord;
use braidlift::corpus::{stacked_diagrams, stacked_fronts};
use braidlift::lch::LagrangianDiagram;
use braidlift::{mixed_differential, split_dgas, BimoduleError, FrontWord, PoincarePolynomial, StackedLinkDiagram};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn set_text(s: &BTreeSet<PoincarePolynomial>) -> Vec<String> { s.iter().map(|p| p.to_string()).collect() }

/// Bigons that are single faces: two corners, both mixed, positive at the
/// source and negative at the target, not excluded.
fn face_bigons(d: &StackedLinkDiagram) -> BTreeSet<(usize, usize)> {
  let diagram = d.diagram();
  let xs = diagram.crossings();
  let face = diagram.faces();
  let excluded: BTreeSet<usize> = d.excluded().iter().map(|&(c, q)| face[c * 4 + q]).collect();
  let mut corners: Vec<Vec<(usize, usize)>> = vec![Vec::new(); face.iter().max().unwrap() + 1];
  for h in 0..face.len() {
    corners[face[h]].push((h / 4, h % 4));
  }
  let positive = |(c, q): (usize, usize)| q == xs[c].positive.0 || q == xs[c].positive.1;
  let mut out = BTreeSet::new();
  for (f, cs) in corners.iter().enumerate() {
    if excluded.contains(&f) || cs.len() != 2 {
      continue;
    }
    for (a, b) in [(cs[0], cs[1]), (cs[1], cs[0])] {
      if positive(a) && !positive(b) {
        // two bigons between the same corners cancel
        if !out.remove(&(a.0, b.0)) {
          out.insert((a.0, b.0));
        }
      }
    }
  }
  out
}

#[test]
fn pushoff_family_matches_bigon_count() {
  for n in 1..=5 {
    let d = StackedLinkDiagram::circle_pushoff(n);
    let b = mixed_differential(&d).unwrap();
    assert_eq!(b.len(), 2 * n);
    assert!(b.lower().is_empty() && b.upper().is_empty());
    assert!(b.check().passed());
    let mut from_bimodule = BTreeSet::new();
    for x in 0..b.len() {
      for w in b.boundary(x) {
        assert!(w.left.is_empty() && w.right.is_empty());
        from_bimodule.insert((x, w.mixed));
      }
    }
    assert_eq!(from_bimodule, face_bigons(&d), "n = {n}");
    let set = b.bilinearized_homology_set().unwrap();
    assert_eq!(set.len(), 1);
    assert_eq!(set.iter().next().unwrap().total(), 2, "n = {n}");
  }
}

#[test]
fn two_point_pushoff_has_cancelling_bigons() {
  let b = mixed_differential(&StackedLinkDiagram::circle_pushoff(1)).unwrap();
  assert_eq!(b.len(), 2);
  assert!(b.boundary(0).is_empty() && b.boundary(1).is_empty());
  assert_eq!(set_text(&b.bilinearized_homology_set().unwrap()), ["1 + t"]);
}

#[test]
fn without_the_puncture_the_circles_displace() {
  let d = StackedLinkDiagram::circle_pushoff(1);
  let only_outside = StackedLinkDiagram::from_diagram(d.diagram().clone(), 0, 1, vec![(1, 2)]).unwrap();
  let b = mixed_differential(&only_outside).unwrap();
  assert_eq!(set_text(&b.bilinearized_homology_set().unwrap()), ["0"]);
}

#[test]
fn direct_text_roundtrip() {
  let d = StackedLinkDiagram::circle_pushoff(2);
  let back: StackedLinkDiagram = d.to_string().parse().unwrap();
  assert_eq!(back, d);
  let text = d.to_string().replace("exclude 1.0\n", "").replace("exclude 1.2\n", "");
  assert_eq!(text.parse::<StackedLinkDiagram>().unwrap_err(), BimoduleError::NoExcludedFace);
}

#[test]
fn split_dgas_of_corpus_fronts() {
  let sizes: Vec<(usize, usize)> = stacked_fronts().iter().map(|(_, d)| split_dgas(d).map(|(a, b)| (a.len(), b.len())).unwrap()).collect();
  assert_eq!(sizes, [(1, 1), (1, 5)]);
  let single: FrontWord = "L1 R1".parse().unwrap();
  assert_eq!(StackedLinkDiagram::from_front(&single).unwrap_err(), BimoduleError::ComponentCount(1));
}

#[test]
fn labels_and_over_rule_are_enforced() {
  let unlabelled: FrontWord = "L1 L1 X2 X3 R2 R1".parse().unwrap();
  assert_eq!(StackedLinkDiagram::from_front(&unlabelled).unwrap_err(), BimoduleError::Labels);
  let swapped: FrontWord = "L1 lower L1 upper X2 X3 R2 R1".parse().unwrap();
  assert!(matches!(StackedLinkDiagram::from_front(&swapped), Err(BimoduleError::LowerOver(_))));
}

#[test]
fn no_mixed_crossings_gives_empty_bimodule() {
  let d: StackedLinkDiagram = "L1 lower R1 L1 upper R1".parse().unwrap();
  let b = mixed_differential(&d).unwrap();
  assert!(b.is_empty());
  assert_eq!(set_text(&b.bilinearized_homology_set().unwrap()), ["0"]);
  assert_eq!(set_text(&b.stabilize(3).bilinearized_homology_set().unwrap()), ["0"]);
}

#[test]
fn corpus_bimodules_are_sound() {
  for (name, d) in stacked_diagrams() {
    let b = mixed_differential(&d).unwrap();
    assert!(b.check().passed(), "{name}: {:?}", b.check().violations);
    for x in 0..b.len() {
      for e in b.lower().augmentations().unwrap() {
        for f in b.upper().augmentations().unwrap() {
          assert!(b.bilinearize(&e, &f).unwrap().squares_to_zero(), "{name}");
        }
      }
      assert!(b.boundary(x).iter().all(|w| w.mixed < b.len()));
    }
  }
}

#[test]
fn trefoil_over_unknot_words_follow_pattern() {
  let (_, d) = &stacked_fronts()[1];
  let b = mixed_differential(d).unwrap();
  let words: Vec<&MixedWord> = (0..b.len()).flat_map(|x| b.boundary(x).iter()).collect();
  assert!(words.iter().any(|w| !w.right.is_empty()));
  assert_eq!(b.sum_text(b.boundary(2)), "m1 + m1 c1' c2'");
}

/// A random walk of moves from `start` through stacked diagrams only.
fn stacked_walk(start: &FrontWord, steps: usize, rng: &mut ChaCha8Rng) -> StackedLinkDiagram {
  let mut f = start.clone();
  for _ in 0..steps {
    let options: Vec<FrontWord> = f
      .neighbours()
      .into_iter()
      .map(|(_, _, g)| g)
      .filter(|g| g.len() <= start.len() + 8 && StackedLinkDiagram::from_front(g).is_ok())
      .collect();
    f = options[rng.gen_range(0..options.len())].clone();
  }
  StackedLinkDiagram::from_front(&f).unwrap()
}

#[test]
fn random_stacked_walks_satisfy_pattern_and_keep_sets() {
  let mut rng = ChaCha8Rng::seed_from_u64(99);
  let mut with_words = 0;
  for (name, d) in stacked_fronts() {
    let before = mixed_differential(&d).unwrap().bilinearized_homology_set().unwrap();
    // a front link with the upper component over everywhere can be lifted off
    assert!(before.iter().all(|p| p.total() == 0), "{name}");
    for _ in 0..100 {
      let steps = rng.gen_range(1..=6);
      let e = stacked_walk(d.front().unwrap(), steps, &mut rng);
      let b = mixed_differential(&e).unwrap_or_else(|err| panic!("{e}: {err}"));
      assert!(b.check().passed(), "{e}");
      if (0..b.len()).any(|x| b.boundary(x).iter().any(|w| !w.left.is_empty() || !w.right.is_empty())) {
        with_words += 1;
      }
      assert_eq!(b.bilinearized_homology_set().unwrap(), before, "{name} -> {e}");
    }
  }
  assert!(with_words > 20, "{with_words}");
}

#[test]
fn above_preserving_moves_keep_sets() {
  let mut checked = 0;
  for (name, d) in stacked_fronts() {
    let front = d.front().unwrap().clone();
    let before = mixed_differential(&d).unwrap().bilinearized_homology_set().unwrap();
    for (at, mv, g) in front.neighbours() {
      let Ok(e) = StackedLinkDiagram::from_front(&g) else { continue };
      let b = mixed_differential(&e).unwrap();
      assert!(b.check().passed());
      assert_eq!(b.bilinearized_homology_set().unwrap(), before, "{name}: {mv:?} at {at}");
      checked += 1;
    }
  }
  assert!(checked > 30, "{checked}");
  let pushoffs: Vec<_> = (1..=4).map(|n| mixed_differential(&StackedLinkDiagram::circle_pushoff(n)).unwrap().bilinearized_homology_set().unwrap()).collect();
  assert!(pushoffs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn hundred_shuffles_per_corpus_bimodule() {
  let mut rng = ChaCha8Rng::seed_from_u64(1618);
  for (name, d) in stacked_diagrams() {
    let b = mixed_differential(&d).unwrap();
    let before = b.bilinearized_homology_set().unwrap();
    for trial in 0..100 {
      let steps = rng.gen_range(1..=5);
      let m = b.random_tame_shuffle(steps, &mut rng);
      assert!(m.check().passed(), "{name} trial {trial}: {:?}", m.check().violations);
      assert_eq!(m.bilinearized_homology_set().unwrap(), before, "{name} trial {trial}");
    }
  }
}

#[test]
fn direct_diagram_needs_embedded_components() {
  let text = "crossings 1\n0 front 0 1-3 1-3 0-0 | 0.1 0.0 0.3 0.2\n";
  let d: LagrangianDiagram = text.parse().unwrap();
  assert_eq!(StackedLinkDiagram::from_diagram(d, 0, 1, vec![(0, 0)]).unwrap_err(), BimoduleError::PureCrossing(0));
}
