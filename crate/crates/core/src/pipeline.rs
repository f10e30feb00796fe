//! Braid triviality from intersection numbers of the standard arcs, plus
//! sweeps that compare it with the Artin oracle and with zigzag dimensions.
//!
//! A braid `w` passes the criterion when both `I(b_i, f_w(b_j))` and
//! `I(b_i, f_{w^2}(b_j))` coincide with the values for the identity.

use std::fmt;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::arcs::{arc_intersection, ArcError, HalfInteger};
use crate::braid::{BraidError, BraidWord};
use crate::zigzag::{hf_dim, ZigzagError};

#[derive(Debug, Error, PartialEq)]
pub enum PipelineError {
  #[error(transparent)]
  Braid(#[from] BraidError),
  #[error(transparent)]
  Arc(#[from] ArcError),
  #[error(transparent)]
  Zigzag(#[from] ZigzagError),
  #[error("hf({i},{j}) = {hf} but twice the intersection number is {twice} for braid {word}")]
  Mismatch { word: String, i: usize, j: usize, hf: usize, twice: String },
}

/// `m x m` matrix of half-integers, rows `b_i`, columns `f_w(b_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionMatrix {
  m: usize,
  entries: Vec<HalfInteger<BigInt>>,
}

impl IntersectionMatrix {
  /// The matrix of the identity braid: 1 on the diagonal, 1/2 next to it.
  pub fn base(m: usize) -> Self {
    let mut entries = Vec::with_capacity(m * m);
    for i in 1..=m {
      for j in 1..=m {
        entries.push(match i.abs_diff(j) {
          0 => HalfInteger::from_integer(BigInt::from(1)),
          1 => HalfInteger::from_twice(BigInt::from(1)),
          _ => HalfInteger::from_twice(BigInt::from(0)),
        });
      }
    }
    Self { m, entries }
  }

  pub fn m(&self) -> usize { self.m }

  /// Entry for arcs `i, j` counted from 1.
  pub fn get(&self, i: usize, j: usize) -> &HalfInteger<BigInt> { &self.entries[(i - 1) * self.m + (j - 1)] }

  pub fn is_base(&self) -> bool { *self == Self::base(self.m) }
}

/// `m x m` matrix of Floer dimensions from the zigzag model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HfMatrix {
  m: usize,
  entries: Vec<usize>,
}

impl HfMatrix {
  pub fn m(&self) -> usize { self.m }

  pub fn get(&self, i: usize, j: usize) -> usize { self.entries[(i - 1) * self.m + (j - 1)] }
}

fn write_table(f: &mut fmt::Formatter<'_>, m: usize, cell: impl Fn(usize, usize) -> String) -> fmt::Result {
  let head: Vec<String> = (1..=m).map(|j| format!("b{j}")).collect();
  writeln!(f, "\t{}", head.join("\t"))?;
  for i in 1..=m {
    let row: Vec<String> = (1..=m).map(|j| cell(i, j)).collect();
    writeln!(f, "b{i}\t{}", row.join("\t"))?;
  }
  Ok(())
}

/// Tab separated with `b1..bm` headers; half-integers print as `3/2`.
impl fmt::Display for IntersectionMatrix {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result { write_table(f, self.m, |i, j| self.get(i, j).to_string()) }
}

impl fmt::Display for HfMatrix {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result { write_table(f, self.m, |i, j| self.get(i, j).to_string()) }
}

pub fn intersection_matrix(w: &BraidWord) -> Result<IntersectionMatrix, PipelineError> {
  let m = w.rank();
  let mut entries = Vec::with_capacity(m * m);
  for i in 1..=m {
    for j in 1..=m {
      entries.push(arc_intersection(w, i, j)?);
    }
  }
  Ok(IntersectionMatrix { m, entries })
}

/// Zigzag dimensions, checked entrywise against twice the intersection matrix.
pub fn hf_matrix(w: &BraidWord) -> Result<HfMatrix, PipelineError> {
  let inter = intersection_matrix(w)?;
  let m = w.rank();
  let mut entries = Vec::with_capacity(m * m);
  for i in 1..=m {
    for j in 1..=m {
      let hf = hf_dim(w, i, j)?;
      let twice = inter.get(i, j).twice_value();
      if BigInt::from(hf) != *twice {
        return Err(PipelineError::Mismatch { word: w.to_string(), i, j, hf, twice: twice.to_string() });
      }
      entries.push(hf);
    }
  }
  Ok(HfMatrix { m, entries })
}

pub fn is_trivial_criterion(w: &BraidWord) -> Result<bool, PipelineError> {
  Ok(intersection_matrix(w)?.is_base() && intersection_matrix(&w.square())?.is_base())
}

/// `w` looks trivial to the arcs but `w^2` does not.
pub fn square_is_needed(w: &BraidWord) -> Result<bool, PipelineError> {
  Ok(intersection_matrix(w)?.is_base() && !intersection_matrix(&w.square())?.is_base())
}

/// Every freely reduced word of length at most `max_len`, shortlex order.
pub fn reduced_words(strands: usize, max_len: usize) -> Result<Vec<BraidWord>, PipelineError> {
  let gens: Vec<i32> = (1..strands as i32).flat_map(|k| [k, -k]).collect();
  let mut layer: Vec<Vec<i32>> = vec![Vec::new()];
  let mut out = vec![BraidWord::identity(strands)?];
  for _ in 0..max_len {
    let mut next = Vec::new();
    for word in &layer {
      for &g in &gens {
        if word.last() != Some(&-g) {
          let mut w = word.clone();
          w.push(g);
          next.push(w);
        }
      }
    }
    for w in &next {
      out.push(BraidWord::new(strands, w.clone())?);
    }
    layer = next;
  }
  Ok(out)
}

/// Seeded sample of freely reduced words with strands in `strands` and
/// length in `lengths`. Every fifth word is a conjugated braid relation,
/// which is trivial without being freely trivial.
pub fn random_words(
  count: usize,
  seed: u64,
  strands: std::ops::RangeInclusive<usize>,
  lengths: std::ops::RangeInclusive<usize>,
) -> Result<Vec<BraidWord>, PipelineError> {
  let mut rng = ChaCha8Rng::seed_from_u64(seed);
  let mut out = Vec::with_capacity(count);
  for k in 0..count {
    let n = rng.gen_range(strands.clone());
    let len = rng.gen_range(lengths.clone());
    let word = if k % 5 == 4 { conjugated_relation(&mut rng, n, len) } else { random_reduced(&mut rng, n, len) };
    out.push(BraidWord::new(n, word)?);
  }
  Ok(out)
}

fn random_letter<R: Rng>(rng: &mut R, strands: usize) -> i32 {
  let k = rng.gen_range(1..strands as i32);
  if rng.gen_bool(0.5) { k } else { -k }
}

fn random_reduced<R: Rng>(rng: &mut R, strands: usize, len: usize) -> Vec<i32> {
  let mut w: Vec<i32> = Vec::with_capacity(len);
  while w.len() < len {
    let g = random_letter(rng, strands);
    if w.last() != Some(&-g) {
      w.push(g);
    }
  }
  w
}

/// `u r u^-1` for a random braid relation `r` and a random `u`, of roughly `len` letters.
fn conjugated_relation<R: Rng>(rng: &mut R, strands: usize, len: usize) -> Vec<i32> {
  let top = strands as i32 - 1;
  let relation = if top >= 3 && rng.gen_bool(0.5) {
    let i = rng.gen_range(1..=top - 2);
    let j = rng.gen_range(i + 2..=top);
    if rng.gen_bool(0.5) { vec![i, j, -i, -j] } else { vec![j, i, -j, -i] }
  } else {
    let i = rng.gen_range(1..top.max(2));
    let j = if i < top { i + 1 } else { i - 1 };
    vec![i, j, i, -j, -i, -j]
  };
  let u = random_reduced(rng, strands, len.saturating_sub(relation.len()) / 2);
  let mut w = u.clone();
  w.extend(relation);
  w.extend(u.iter().rev().map(|g| -g));
  w
}

/// Outcome of running the criterion over a list of braids.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepReport {
  pub braids: usize,
  pub trivial: usize,
  pub hf_checked: usize,
  /// Braids where the criterion and the Artin oracle differ.
  pub disagreements: Vec<BraidWord>,
  /// Braids whose arcs look trivial under `w` but not under `w^2`.
  pub square_witnesses: Vec<BraidWord>,
}

impl SweepReport {
  pub fn merge(&mut self, other: SweepReport) {
    self.braids += other.braids;
    self.trivial += other.trivial;
    self.hf_checked += other.hf_checked;
    self.disagreements.extend(other.disagreements);
    self.square_witnesses.extend(other.square_witnesses);
  }
}

/// Runs the criterion (and optionally `hf_matrix`, which asserts the
/// doubling identity) on every braid. Results keep the input order.
pub fn sweep(words: &[BraidWord], check_hf: bool) -> Result<SweepReport, PipelineError> {
  let rows: Result<Vec<(bool, bool, bool)>, PipelineError> = words
    .par_iter()
    .map(|w| {
      if check_hf {
        hf_matrix(w)?;
      }
      let first = intersection_matrix(w)?.is_base();
      let second = first && intersection_matrix(&w.square())?.is_base();
      Ok((second, w.is_trivial_oracle(), first && !second))
    })
    .collect();
  let mut report = SweepReport { braids: words.len(), hf_checked: if check_hf { words.len() } else { 0 }, ..Default::default() };
  for (w, (criterion, oracle, witness)) in words.iter().zip(rows?) {
    report.trivial += oracle as usize;
    if criterion != oracle {
      report.disagreements.push(w.clone());
    }
    if witness {
      log::info!("arcs fixed by {w} but not by its square");
      report.square_witnesses.push(w.clone());
    }
  }
  Ok(report)
}

#[cfg(test)]
mod tests {
  use super::*;

  fn bw(n: usize, l: &[i32]) -> BraidWord { BraidWord::new(n, l.to_vec()).unwrap() }

  #[test]
  fn base_matrices() {
    let e = intersection_matrix(&bw(3, &[])).unwrap();
    assert_eq!(e.to_string(), "\tb1\tb2\nb1\t1\t1/2\nb2\t1/2\t1\n");
    assert!(e.is_base());
    assert_eq!(intersection_matrix(&bw(2, &[1])).unwrap().to_string(), "\tb1\nb1\t1\n");
    let hf = hf_matrix(&bw(3, &[])).unwrap();
    assert_eq!(hf.to_string(), "\tb1\tb2\nb1\t2\t1\nb2\t1\t2\n");
    assert_eq!(hf_matrix(&bw(3, &[1, -1])).unwrap(), hf);
  }

  #[test]
  fn criterion_examples() {
    assert!(is_trivial_criterion(&bw(3, &[])).unwrap());
    assert!(!is_trivial_criterion(&bw(3, &[1])).unwrap());
    assert!(is_trivial_criterion(&bw(3, &[1, 2, 1, -2, -1, -2])).unwrap());
    assert!(is_trivial_criterion(&bw(4, &[1, 3, -1, -3])).unwrap());
  }

  #[test]
  fn enumeration_counts() {
    // 1 + 4 + 4*3 + 4*9 words for two generators and their inverses
    assert_eq!(reduced_words(3, 3).unwrap().len(), 1 + 4 + 12 + 36);
    let sample = random_words(50, 7, 3..=5, 5..=10).unwrap();
    assert_eq!(sample, random_words(50, 7, 3..=5, 5..=10).unwrap());
    assert!(sample.iter().filter(|w| w.is_trivial_oracle()).count() >= 10);
  }
}
