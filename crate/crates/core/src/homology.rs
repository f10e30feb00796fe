//! Sparse chain complexes over Z/2.
//!
//! Homology is computed by repeatedly cancelling a nonzero matrix entry
//! `a -> b` (a Gaussian elimination step, which is a homotopy equivalence).
//! When no entries remain the surviving basis elements span the homology, so
//! graded dimensions can be read from their degrees.

use std::collections::{BTreeMap, HashSet};

/// A finite based complex over Z/2 with an integer (or cyclic) grading.
#[derive(Clone, Debug, Default)]
pub struct Z2Complex {
  degrees: Vec<i64>,
  out: Vec<HashSet<usize>>,
  inc: Vec<HashSet<usize>>,
}

impl Z2Complex {
  pub fn new(degrees: Vec<i64>) -> Self {
    let n = degrees.len();
    Self { degrees, out: vec![HashSet::new(); n], inc: vec![HashSet::new(); n] }
  }

  pub fn len(&self) -> usize { self.degrees.len() }

  pub fn is_empty(&self) -> bool { self.degrees.is_empty() }

  /// Adds `1` to the entry `from -> to`.
  pub fn toggle(&mut self, from: usize, to: usize) {
    if !self.out[from].remove(&to) {
      self.out[from].insert(to);
      self.inc[to].insert(from);
    } else {
      self.inc[to].remove(&from);
    }
  }

  pub fn entry(&self, from: usize, to: usize) -> bool { self.out[from].contains(&to) }

  pub fn degrees(&self) -> &[i64] { &self.degrees }

  /// True when the differential squares to zero.
  pub fn squares_to_zero(&self) -> bool {
    for a in 0..self.len() {
      let mut acc: HashSet<usize> = HashSet::new();
      for &b in &self.out[a] {
        for &c in &self.out[b] {
          if !acc.remove(&c) {
            acc.insert(c);
          }
        }
      }
      if !acc.is_empty() {
        return false;
      }
    }
    true
  }

  /// Rank of the differential.
  pub fn rank(&self) -> usize { self.clone().reduce().1 }

  /// Cancels entries until the differential vanishes; returns the surviving
  /// basis indices and the number of cancelled pairs.
  fn reduce(mut self) -> (Vec<usize>, usize) {
    let n = self.len();
    let mut alive = vec![true; n];
    let mut pairs = 0;
    for a in 0..n {
      while alive[a] {
        // pick the target with the fewest incoming entries to limit fill-in
        let Some(&b) = self.out[a].iter().min_by_key(|&&b| (self.inc[b].len(), b)) else {
          break;
        };
        let xs: Vec<usize> = self.inc[b].iter().copied().filter(|&x| x != a).collect();
        let ys: Vec<usize> = self.out[a].iter().copied().filter(|&y| y != b).collect();
        for &x in &xs {
          for &y in &ys {
            self.toggle(x, y);
          }
        }
        for v in [a, b] {
          for t in std::mem::take(&mut self.out[v]) {
            self.inc[t].remove(&v);
          }
          for s in std::mem::take(&mut self.inc[v]) {
            self.out[s].remove(&v);
          }
          alive[v] = false;
        }
        pairs += 1;
      }
    }
    ((0..n).filter(|&v| alive[v]).collect(), pairs)
  }

  /// Total dimension of homology.
  pub fn homology_dim(&self) -> usize { self.clone().reduce().0.len() }

  /// Graded dimensions of homology, keyed by degree.
  pub fn homology_by_degree(&self) -> BTreeMap<i64, usize> {
    let (survivors, _) = self.clone().reduce();
    let mut out = BTreeMap::new();
    for v in survivors {
      *out.entry(self.degrees[v]).or_insert(0) += 1;
    }
    out
  }
}
