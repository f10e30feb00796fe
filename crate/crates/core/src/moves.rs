//! Legendrian Reidemeister moves on fronts, as local rewrites of event words.

use thiserror::Error;

use crate::front::{FrontError, FrontEvent, FrontWord, Level};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MoveError {
  #[error("move {mv:?} does not apply at event {at}")]
  NotApplicable { mv: LegendrianMove, at: usize },
  #[error(transparent)]
  Front(#[from] FrontError),
}

/// A local move. `at` indexes the first affected event; for insertions it is
/// the index the new events are placed before.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LegendrianMove {
  /// Adds a zig-zag free kink (swallowtail) to the strand at `position`,
  /// with the new cusps above it or below it.
  KinkInsert { position: usize, below: bool },
  /// Removes a kink `L k+1 X k R k+1` or `L k X k+1 R k`.
  KinkRemove,
  /// Moves a left cusp past the strand just below it (`down`) or above it.
  LeftCuspPass { down: bool },
  /// Undoes `LeftCuspPass`: `L k X k+1 X k` or `L k+1 X k X k+1` back to one cusp.
  LeftCuspUnpass,
  /// Moves a right cusp past the strand just below it (`down`) or above it.
  RightCuspPass { down: bool },
  /// Undoes `RightCuspPass`.
  RightCuspUnpass,
  /// `X k X k+1 X k` ↔ `X k+1 X k X k+1`.
  Triple,
  /// Swaps two adjacent crossings at distant positions.
  Commute,
}

impl LegendrianMove {
  /// Every move that might apply somewhere on a front with at most `max_strands` strands.
  pub fn catalogue(max_strands: usize) -> Vec<LegendrianMove> {
    let mut out = vec![
      LegendrianMove::KinkRemove,
      LegendrianMove::LeftCuspPass { down: true },
      LegendrianMove::LeftCuspPass { down: false },
      LegendrianMove::LeftCuspUnpass,
      LegendrianMove::RightCuspPass { down: true },
      LegendrianMove::RightCuspPass { down: false },
      LegendrianMove::RightCuspUnpass,
      LegendrianMove::Triple,
      LegendrianMove::Commute,
    ];
    for position in 1..=max_strands {
      for below in [false, true] {
        out.push(LegendrianMove::KinkInsert { position, below });
      }
    }
    out
  }
}

use FrontEvent::{Crossing as X, LeftCusp as L, RightCusp as R};

impl FrontWord {
  /// Applies `mv` at event index `at`.
  pub fn apply_move(&self, at: usize, mv: LegendrianMove) -> Result<FrontWord, MoveError> {
    let no = || MoveError::NotApplicable { mv, at };
    let data = self.data()?;
    let ev = self.events();
    let strands = |i: usize| data.slots.get(i).map_or(0, |s| s.len());
    let window = |n: usize| if at + n <= ev.len() { Some(&ev[at..at + n]) } else { None };
    let label = self.labels().get(at).copied().flatten();
    let (len, new): (usize, Vec<FrontEvent>) = match mv {
      LegendrianMove::KinkInsert { position: k, below } => {
        if at > ev.len() || k == 0 || k > strands(at) {
          return Err(no());
        }
        (0, if below { vec![L(k), X(k + 1), R(k)] } else { vec![L(k + 1), X(k), R(k + 1)] })
      }
      LegendrianMove::KinkRemove => match window(3).ok_or_else(no)? {
        [L(a), X(b), R(c)] if *a == b + 1 && c == a => (3, vec![]),
        [L(a), X(b), R(c)] if *b == a + 1 && c == a => (3, vec![]),
        _ => return Err(no()),
      },
      LegendrianMove::LeftCuspPass { down } => match (window(1).ok_or_else(no)?, down) {
        ([L(k)], true) if *k >= 2 => (1, vec![L(k - 1), X(*k), X(k - 1)]),
        ([L(k)], false) if *k <= strands(at) => (1, vec![L(k + 1), X(*k), X(k + 1)]),
        _ => return Err(no()),
      },
      LegendrianMove::LeftCuspUnpass => match window(3).ok_or_else(no)? {
        [L(a), X(b), X(c)] if *b == a + 1 && c == a => (3, vec![L(a + 1)]),
        [L(a), X(b), X(c)] if *a >= 2 && *b == a - 1 && c == a => (3, vec![L(a - 1)]),
        _ => return Err(no()),
      },
      LegendrianMove::RightCuspPass { down } => match (window(1).ok_or_else(no)?, down) {
        ([R(k)], true) if *k >= 2 => (1, vec![X(k - 1), X(*k), R(k - 1)]),
        ([R(k)], false) if k + 2 <= strands(at) => (1, vec![X(k + 1), X(*k), R(k + 1)]),
        _ => return Err(no()),
      },
      LegendrianMove::RightCuspUnpass => match window(3).ok_or_else(no)? {
        [X(a), X(b), R(c)] if *b == a + 1 && c == a => (3, vec![R(a + 1)]),
        [X(a), X(b), R(c)] if *a >= 2 && *b == a - 1 && c == a => (3, vec![R(*b)]),
        _ => return Err(no()),
      },
      LegendrianMove::Triple => match window(3).ok_or_else(no)? {
        [X(a), X(b), X(c)] if a == c && (*b == a + 1 || b + 1 == *a) => (3, vec![X(*b), X(*a), X(*b)]),
        _ => return Err(no()),
      },
      LegendrianMove::Commute => match window(2).ok_or_else(no)? {
        [X(a), X(b)] if a.abs_diff(*b) >= 2 => (2, vec![X(*b), X(*a)]),
        _ => return Err(no()),
      },
    };
    let mut events = ev[..at].to_vec();
    let mut labels: Vec<Option<Level>> = self.labels()[..at].to_vec();
    let cusp_label = if matches!(ev.get(at), Some(L(_))) { label } else { None };
    for e in &new {
      labels.push(if matches!(e, L(_)) { cusp_label } else { None });
      events.push(*e);
    }
    events.extend_from_slice(&ev[at + len..]);
    labels.extend_from_slice(&self.labels()[at + len..]);
    Ok(FrontWord::with_labels(events, labels)?)
  }

  /// All fronts obtained from `self` by one move of the catalogue.
  pub fn neighbours(&self) -> Vec<(usize, LegendrianMove, FrontWord)> {
    let max = self.data().map(|d| d.slots.iter().map(|s| s.len()).max().unwrap_or(0)).unwrap_or(0);
    let mut out = Vec::new();
    for at in 0..=self.len() {
      for mv in LegendrianMove::catalogue(max) {
        if let Ok(f) = self.apply_move(at, mv) {
          out.push((at, mv, f));
        }
      }
    }
    out
  }
}

#[cfg(test)]
mod tests {
  use super::*;

  fn front(s: &str) -> FrontWord { s.parse().unwrap() }

  #[test]
  fn moves_invert() {
    let f = front("L1 L3 X2 X2 X2 R3 R1");
    for (at, mv, g) in f.neighbours() {
      let back = match mv {
        LegendrianMove::KinkInsert { .. } => LegendrianMove::KinkRemove,
        LegendrianMove::LeftCuspPass { .. } => LegendrianMove::LeftCuspUnpass,
        LegendrianMove::RightCuspPass { .. } => LegendrianMove::RightCuspUnpass,
        LegendrianMove::Triple | LegendrianMove::Commute => mv,
        _ => continue,
      };
      assert_eq!(g.apply_move(at, back).unwrap(), f, "{mv:?} at {at}");
    }
  }

  #[test]
  fn moves_keep_classical_invariants() {
    let f = front("L1 L3 X2 X2 X2 R3 R1");
    for (_, mv, g) in f.neighbours() {
      assert_eq!(g.thurston_bennequin(), f.thurston_bennequin(), "{mv:?}");
      assert_eq!(g.rotation(), f.rotation(), "{mv:?}");
      assert_eq!(g.determinant(), f.determinant(), "{mv:?}");
      assert_eq!(g.data().unwrap().components(), 1);
    }
  }

  #[test]
  fn inapplicable_moves_are_reported() {
    let f = front("L1 R1");
    assert!(matches!(f.apply_move(0, LegendrianMove::Triple), Err(MoveError::NotApplicable { .. })));
    assert!(f.apply_move(0, LegendrianMove::LeftCuspPass { down: true }).is_err());
  }
}
