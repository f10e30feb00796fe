//! Braid words on `m + 1` strands and the Artin action on the free group.
//!
//! Words are kept as raw signed letter sequences: `k > 0` is the generator
//! `σ_k`, `-k` its inverse. Only free reduction is applied automatically;
//! triviality is decided through the (faithful) Artin action rather than a
//! normal form.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BraidError {
  #[error("braid group needs at least 2 strands, got {0}")]
  TooFewStrands(usize),
  #[error("letter {letter} out of range for {strands} strands")]
  LetterOutOfRange { letter: i32, strands: usize },
  #[error("strand count mismatch: {0} vs {1}")]
  StrandMismatch(usize, usize),
  #[error("free generator {index} out of range for rank {rank}")]
  GeneratorOutOfRange { index: i32, rank: usize },
  #[error("parse error: {0}")]
  Parse(String),
}

/// Freely reduces a sequence of signed letters in place (cancels `g, -g`).
fn free_reduce(letters: &mut Vec<i32>) {
  let mut out: Vec<i32> = Vec::with_capacity(letters.len());
  for &g in letters.iter() {
    if out.last() == Some(&-g) {
      out.pop();
    } else {
      out.push(g);
    }
  }
  *letters = out;
}

/// An element of the braid group `B_{m+1}` given by a freely reduced word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
  strands: usize,
  letters: Vec<i32>,
}

impl BraidWord {
  pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, BraidError> {
    if strands < 2 {
      return Err(BraidError::TooFewStrands(strands));
    }
    for &g in &letters {
      if g == 0 || g.unsigned_abs() as usize >= strands {
        return Err(BraidError::LetterOutOfRange { letter: g, strands });
      }
    }
    let mut letters = letters;
    free_reduce(&mut letters);
    Ok(Self { strands, letters })
  }

  pub fn identity(strands: usize) -> Result<Self, BraidError> { Self::new(strands, Vec::new()) }

  pub fn strands(&self) -> usize { self.strands }

  /// Number of arcs / Artin generators, `m = strands - 1`.
  pub fn rank(&self) -> usize { self.strands - 1 }

  pub fn letters(&self) -> &[i32] { &self.letters }

  pub fn len(&self) -> usize { self.letters.len() }

  pub fn is_empty(&self) -> bool { self.letters.is_empty() }

  pub fn compose(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
    if self.strands != other.strands {
      return Err(BraidError::StrandMismatch(self.strands, other.strands));
    }
    let mut letters = self.letters.clone();
    letters.extend_from_slice(&other.letters);
    free_reduce(&mut letters);
    Ok(BraidWord { strands: self.strands, letters })
  }

  pub fn square(&self) -> BraidWord { self.compose(self).expect("same strand count") }

  pub fn inverse(&self) -> BraidWord {
    BraidWord { strands: self.strands, letters: self.letters.iter().rev().map(|g| -g).collect() }
  }

  /// Image in the symmetric group: `perm[k]` is where the strand starting at
  /// position `k` (0-based) ends up.
  pub fn permutation(&self) -> Vec<usize> {
    let mut pos: Vec<usize> = (0..self.strands).collect();
    // track, for each position, the strand occupying it
    for &g in &self.letters {
      let i = g.unsigned_abs() as usize - 1;
      pos.swap(i, i + 1);
    }
    let mut perm = vec![0; self.strands];
    for (p, &strand) in pos.iter().enumerate() {
      perm[strand] = p;
    }
    perm
  }

  pub fn is_pure(&self) -> bool { self.permutation().iter().enumerate().all(|(k, &p)| k == p) }

  /// The Artin action on the free group of rank `strands`, applied letter by
  /// letter from left to right.
  pub fn artin_act(&self, x: &FreeGroupWord) -> Result<FreeGroupWord, BraidError> {
    if x.rank != self.strands {
      return Err(BraidError::StrandMismatch(self.strands, x.rank));
    }
    let mut cur = x.clone();
    for &g in &self.letters {
      cur = cur.substitute(g);
    }
    Ok(cur)
  }

  /// Ground-truth triviality: the word fixes every free generator.
  pub fn is_trivial_oracle(&self) -> bool {
    (1..=self.strands as i32).all(|k| {
      let x = FreeGroupWord::generator(self.strands, k).expect("in range");
      self.artin_act(&x).expect("rank matches") == x
    })
  }

  /// Parses the text format: a header line `B <strands>` followed by
  /// whitespace-separated signed letters (possibly over several lines).
  pub fn parse(text: &str) -> Result<BraidWord, BraidError> { text.parse() }

  pub fn to_text(&self) -> String { format!("B {}\n{}\n", self.strands, self) }
}

impl fmt::Display for BraidWord {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let parts: Vec<String> = self.letters.iter().map(|g| g.to_string()).collect();
    write!(f, "{}", parts.join(" "))
  }
}

impl FromStr for BraidWord {
  type Err = BraidError;

  fn from_str(text: &str) -> Result<Self, Self::Err> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| BraidError::Parse("missing header".into()))?;
    let mut head = header.split_whitespace();
    if head.next() != Some("B") {
      return Err(BraidError::Parse(format!("expected 'B <strands>', got {header:?}")));
    }
    let strands: usize = head
      .next()
      .and_then(|s| s.parse().ok())
      .ok_or_else(|| BraidError::Parse(format!("bad strand count in {header:?}")))?;
    let mut letters = Vec::new();
    for tok in head.chain(lines.flat_map(str::split_whitespace)) {
      letters.push(tok.parse::<i32>().map_err(|_| BraidError::Parse(format!("bad letter {tok:?}")))?);
    }
    BraidWord::new(strands, letters)
  }
}

/// A freely reduced word in the free group `F_rank` on generators `x_1..x_rank`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeGroupWord {
  rank: usize,
  letters: Vec<i32>,
}

impl FreeGroupWord {
  pub fn new(rank: usize, letters: Vec<i32>) -> Result<Self, BraidError> {
    for &g in &letters {
      if g == 0 || g.unsigned_abs() as usize > rank {
        return Err(BraidError::GeneratorOutOfRange { index: g, rank });
      }
    }
    let mut letters = letters;
    free_reduce(&mut letters);
    Ok(Self { rank, letters })
  }

  pub fn generator(rank: usize, k: i32) -> Result<Self, BraidError> { Self::new(rank, vec![k]) }

  pub fn rank(&self) -> usize { self.rank }

  pub fn letters(&self) -> &[i32] { &self.letters }

  pub fn inverse(&self) -> Self {
    Self { rank: self.rank, letters: self.letters.iter().rev().map(|g| -g).collect() }
  }

  /// Applies the automorphism of one braid letter `g`:
  /// `σ_i: x_i ↦ x_i x_{i+1} x_i⁻¹, x_{i+1} ↦ x_i`, and its inverse for `g < 0`.
  fn substitute(&self, g: i32) -> Self {
    let i = g.unsigned_abs() as i32;
    let image = |x: i32| -> Vec<i32> {
      if g > 0 {
        if x == i {
          vec![i, i + 1, -i]
        } else if x == i + 1 {
          vec![i]
        } else {
          vec![x]
        }
      } else if x == i {
        vec![i + 1]
      } else if x == i + 1 {
        vec![-(i + 1), i, i + 1]
      } else {
        vec![x]
      }
    };
    let mut out = Vec::with_capacity(self.letters.len() * 2);
    for &l in &self.letters {
      let img = image(l.abs());
      if l > 0 {
        out.extend(img);
      } else {
        out.extend(img.iter().rev().map(|y| -y));
      }
    }
    free_reduce(&mut out);
    Self { rank: self.rank, letters: out }
  }
}

#[cfg(test)]
mod tests {
  use super::*;

  fn w(n: usize, l: &[i32]) -> BraidWord { BraidWord::new(n, l.to_vec()).unwrap() }

  fn x(n: usize, l: &[i32]) -> FreeGroupWord { FreeGroupWord::new(n, l.to_vec()).unwrap() }

  #[test]
  fn compose_examples() {
    assert!(w(3, &[1]).compose(&w(3, &[-1])).unwrap().is_empty());
    assert_eq!(w(3, &[1]).compose(&w(3, &[2])).unwrap().letters(), &[1, 2]);
    assert_eq!(w(3, &[]).compose(&w(3, &[2, -1])).unwrap(), w(3, &[2, -1]));
    assert_eq!(w(3, &[1]).compose(&w(4, &[1])), Err(BraidError::StrandMismatch(3, 4)));
  }

  #[test]
  fn square_examples() {
    assert_eq!(w(2, &[1]).square().letters(), &[1, 1]);
    assert!(w(3, &[]).square().is_empty());
    assert_eq!(w(3, &[1, -2]).square().letters(), &[1, -2, 1, -2]);
  }

  #[test]
  fn letters_are_validated() {
    assert!(matches!(BraidWord::new(3, vec![3]), Err(BraidError::LetterOutOfRange { .. })));
    assert!(matches!(BraidWord::new(3, vec![0]), Err(BraidError::LetterOutOfRange { .. })));
    assert_eq!(BraidWord::new(1, vec![]), Err(BraidError::TooFewStrands(1)));
  }

  #[test]
  fn artin_examples() {
    assert_eq!(w(3, &[1]).artin_act(&x(3, &[1])).unwrap(), x(3, &[1, 2, -1]));
    assert_eq!(w(4, &[1]).artin_act(&x(4, &[3])).unwrap(), x(4, &[3]));
    // "1 -1" reduces away before acting, so act letter by letter explicitly too
    let s = w(3, &[1]);
    let t = w(3, &[-1]);
    let once = s.artin_act(&x(3, &[2])).unwrap();
    assert_eq!(t.artin_act(&once).unwrap(), x(3, &[2]));
    assert!(matches!(w(3, &[1]).artin_act(&x(4, &[1])), Err(BraidError::StrandMismatch(3, 4))));
  }

  #[test]
  fn triviality_oracle_examples() {
    assert!(w(3, &[]).is_trivial_oracle());
    assert!(!w(3, &[1]).is_trivial_oracle());
    assert!(w(4, &[1, 3, -1, -3]).is_trivial_oracle());
    assert!(w(3, &[1, 2, 1, -2, -1, -2]).is_trivial_oracle());
  }

  #[test]
  fn permutation_examples() {
    assert_eq!(w(2, &[1]).permutation(), vec![1, 0]);
    assert!(!w(2, &[1]).is_pure());
    assert!(w(2, &[1, 1]).is_pure());
    let p = w(3, &[1, 2]).permutation();
    // a 3-cycle: no fixed points, order 3
    assert!(p.iter().enumerate().all(|(k, &v)| k != v));
    assert_eq!(p[p[p[0]]], 0);
  }

  #[test]
  fn text_format_round_trip() {
    let b: BraidWord = "B 4\n1 -2 1\n3".parse().unwrap();
    assert_eq!(b.strands(), 4);
    assert_eq!(b.letters(), &[1, -2, 1, 3]);
    assert_eq!(BraidWord::parse(&b.to_text()).unwrap(), b);
    assert!(BraidWord::parse("1 2").is_err());
    assert!(BraidWord::parse("B 3\n1 x").is_err());
  }

  mod props {
    use proptest::prelude::*;

    use super::*;

    fn word(strands: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
      let m = (strands - 1) as i32;
      proptest::collection::vec((1..=m, any::<bool>()), 0..max_len).prop_map(move |v| {
        BraidWord::new(strands, v.into_iter().map(|(g, s)| if s { g } else { -g }).collect()).unwrap()
      })
    }

    proptest! {
      #[test]
      fn word_times_inverse_is_trivial(b in word(4, 12)) {
        prop_assert!(b.compose(&b.inverse()).unwrap().is_trivial_oracle());
      }

      #[test]
      fn permutation_is_homomorphism(a in word(5, 10), b in word(5, 10)) {
        let pa = a.permutation();
        let pb = b.permutation();
        let pab = a.compose(&b).unwrap().permutation();
        // strands move by a first, then by b
        for k in 0..5 {
          prop_assert_eq!(pab[k], pb[pa[k]]);
        }
      }

      #[test]
      fn free_reduction_is_idempotent(b in word(4, 16)) {
        let again = BraidWord::new(4, b.letters().to_vec()).unwrap();
        prop_assert_eq!(again, b);
      }

      #[test]
      fn artin_relations_hold(k in 1usize..=4, gens in proptest::collection::vec(-5i32..=5, 0..6)) {
        let gens: Vec<i32> = gens.into_iter().filter(|g| *g != 0).collect();
        let xw = FreeGroupWord::new(5, gens).unwrap();
        let _ = k;
        for i in 1..=4i32 {
          for j in 1..=4i32 {
            if (i - j).abs() >= 2 {
              let a = BraidWord::new(5, vec![i, j]).unwrap().artin_act(&xw).unwrap();
              let b = BraidWord::new(5, vec![j, i]).unwrap().artin_act(&xw).unwrap();
              prop_assert_eq!(a, b);
            }
          }
          if i < 4 {
            let a = BraidWord::new(5, vec![i, i + 1, i]).unwrap().artin_act(&xw).unwrap();
            let b = BraidWord::new(5, vec![i + 1, i, i + 1]).unwrap().artin_act(&xw).unwrap();
            prop_assert_eq!(a, b);
          }
        }
      }
    }
  }
}
