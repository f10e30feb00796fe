//! Named fronts used by the tests, the cross-check pipeline and the CLI.

use crate::front::FrontWord;

/// `(name, front text)` for single-component fronts.
pub const KNOT_FRONTS: &[(&str, &str)] = &[
  ("unknot", "L1 R1"),
  ("trefoil", "L1 L3 X2 X2 X2 R3 R1"),
  // the same knot after moving the second left cusp down through the first strand
  ("trefoil_pushed", "L1 L2 X3 X2 X2 X2 X2 R3 R1"),
  ("trefoil_plat", "L1 L1 L1 X2 X1 X3 X4 X3 X1 R2 R1 R1"),
  ("unknot_plat", "L1 L1 L1 X2 X3 X4 X3 X1 X2 R1 R1 R1"),
  // tb = -3, one stabilization of each sign, no augmentations
  ("unknot_stabilized", "L1 L1 X2 X3 X2 R1 R1"),
  ("chekanov_a", "L1 L1 L2 X1 X3 X1 X2 X4 R3 X2 R1 R1"),
  ("chekanov_b", "L1 L1 L1 X2 X4 X2 R3 X2 X1 X3 R2 R1"),
];

pub fn knot_front(name: &str) -> Option<FrontWord> {
  KNOT_FRONTS.iter().find(|(n, _)| *n == name).map(|(_, t)| t.parse().expect("corpus front parses"))
}

pub fn knot_fronts() -> Vec<(&'static str, FrontWord)> {
  KNOT_FRONTS.iter().map(|(n, t)| (*n, t.parse().expect("corpus front parses"))).collect()
}

/// Labelled two-component fronts with the upper component over at every mixed crossing.
pub const STACKED_FRONTS: &[(&str, &str)] = &[
  ("unknot_over_unknot", "L1 upper L1 lower X2 X3 R2 R1"),
  ("trefoil_over_unknot", "L1 upper L3 upper X2 X2 X2 L1 lower X2 X3 X4 X5 R4 R2 R1"),
];

pub fn stacked_fronts() -> Vec<(&'static str, crate::bimodule::StackedLinkDiagram)> {
  STACKED_FRONTS.iter().map(|(n, t)| (*n, t.parse().expect("corpus stacked front parses"))).collect()
}

/// Every stacked diagram of the corpus: the fronts above and the pushoff pairs
/// of a circle around a puncture crossing it 2 and 4 times.
pub fn stacked_diagrams() -> Vec<(String, crate::bimodule::StackedLinkDiagram)> {
  let mut out: Vec<(String, _)> = stacked_fronts().into_iter().map(|(n, d)| (n.to_string(), d)).collect();
  for n in 1..=2 {
    out.push((format!("circle_pushoff_{n}"), crate::bimodule::StackedLinkDiagram::circle_pushoff(n)));
  }
  out
}
