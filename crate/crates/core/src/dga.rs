//! Semi-free differential graded algebras over Z/2: checks, stabilization,
//! tame automorphisms, augmentations and linearized homology.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::homology::Z2Complex;

/// A word in the generators; the empty word is the unit.
pub type Word = Vec<usize>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DgaError {
  #[error("unknown generator `{0}`")]
  UnknownGenerator(String),
  #[error("duplicate generator `{0}`")]
  DuplicateGenerator(String),
  #[error("replacement for `{name}` has degree mismatch or mentions it")]
  BadReplacement { name: String },
  #[error("map is not an augmentation")]
  InvalidAugmentation,
  #[error("too many degree-0 generators for exhaustive search: {0}")]
  SearchTooLarge(usize),
  #[error("line {line}: {msg}")]
  Parse { line: usize, msg: String },
}

/// A Z/2 linear combination of words.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordSum(BTreeSet<Word>);

impl WordSum {
  pub fn zero() -> Self { Self::default() }

  pub fn one() -> Self { Self::from_word(Vec::new()) }

  pub fn from_word(w: Word) -> Self { Self(BTreeSet::from([w])) }

  pub fn from_words<I: IntoIterator<Item = Word>>(words: I) -> Self {
    let mut s = Self::zero();
    for w in words {
      s.toggle(w);
    }
    s
  }

  pub fn is_zero(&self) -> bool { self.0.is_empty() }

  pub fn words(&self) -> impl Iterator<Item = &Word> { self.0.iter() }

  pub fn len(&self) -> usize { self.0.len() }

  pub fn is_empty(&self) -> bool { self.0.is_empty() }

  pub fn toggle(&mut self, w: Word) {
    if !self.0.remove(&w) {
      self.0.insert(w);
    }
  }

  pub fn add_assign(&mut self, other: &WordSum) {
    for w in &other.0 {
      self.toggle(w.clone());
    }
  }

  pub fn mul(&self, other: &WordSum) -> WordSum {
    let mut out = WordSum::zero();
    for a in &self.0 {
      for b in &other.0 {
        let mut w = a.clone();
        w.extend_from_slice(b);
        out.toggle(w);
      }
    }
    out
  }

  /// Image under the algebra map `a ↦ a + u`, fixing the other generators.
  pub fn substitute(&self, a: usize, u: &WordSum) -> WordSum {
    let mut out = WordSum::zero();
    for w in self.words() {
      if !w.contains(&a) {
        out.toggle(w.clone());
        continue;
      }
      let mut acc = WordSum::one();
      for &g in w {
        let mut img = WordSum::from_word(vec![g]);
        if g == a {
          img.add_assign(u);
        }
        acc = acc.mul(&img);
      }
      out.add_assign(&acc);
    }
    out
  }

  pub fn contains(&self, g: usize) -> bool { self.0.iter().any(|w| w.contains(&g)) }
}

/// A semi-free dga over Z/2 with a Z or Z/modulus grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dga {
  names: Vec<String>,
  degrees: Vec<i64>,
  boundary: Vec<WordSum>,
  modulus: i64,
}

/// Outcome of [`Dga::check`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DgaReport {
  pub violations: Vec<String>,
}

impl DgaReport {
  pub fn passed(&self) -> bool { self.violations.is_empty() }
}

impl Dga {
  /// The dga with no generators.
  pub fn trivial() -> Self { Self { names: vec![], degrees: vec![], boundary: vec![], modulus: 0 } }

  pub fn new(names: Vec<String>, degrees: Vec<i64>, boundary: Vec<WordSum>, modulus: i64) -> Result<Self, DgaError> {
    let n = names.len();
    assert_eq!(degrees.len(), n);
    assert_eq!(boundary.len(), n);
    let mut seen = BTreeSet::new();
    for name in &names {
      if !seen.insert(name) {
        return Err(DgaError::DuplicateGenerator(name.clone()));
      }
    }
    for s in &boundary {
      if s.words().flatten().any(|&g| g >= n) {
        return Err(DgaError::UnknownGenerator(format!("#{}", n)));
      }
    }
    let mut dga = Self { names, degrees, boundary, modulus: modulus.abs() };
    if dga.modulus > 0 {
      for d in &mut dga.degrees {
        *d = d.rem_euclid(dga.modulus);
      }
    }
    Ok(dga)
  }

  pub fn len(&self) -> usize { self.names.len() }

  pub fn is_empty(&self) -> bool { self.names.is_empty() }

  pub fn names(&self) -> &[String] { &self.names }

  pub fn degrees(&self) -> &[i64] { &self.degrees }

  pub fn modulus(&self) -> i64 { self.modulus }

  pub fn boundary(&self, g: usize) -> &WordSum { &self.boundary[g] }

  pub fn index_of(&self, name: &str) -> Option<usize> { self.names.iter().position(|n| n == name) }

  pub fn word_degree(&self, w: &[usize]) -> i64 { self.reduce_degree(w.iter().map(|&g| self.degrees[g]).sum()) }

  fn reduce_degree(&self, d: i64) -> i64 { if self.modulus > 0 { d.rem_euclid(self.modulus) } else { d } }

  fn is_degree_zero(&self, g: usize) -> bool { self.reduce_degree(self.degrees[g]) == 0 }

  /// Extends the differential to a word by the Leibniz rule.
  pub fn d_word(&self, w: &[usize]) -> WordSum {
    let mut out = WordSum::zero();
    for (k, &g) in w.iter().enumerate() {
      for dw in self.boundary[g].words() {
        let mut v = w[..k].to_vec();
        v.extend_from_slice(dw);
        v.extend_from_slice(&w[k + 1..]);
        out.toggle(v);
      }
    }
    out
  }

  pub fn d_sum(&self, s: &WordSum) -> WordSum {
    let mut out = WordSum::zero();
    for w in s.words() {
      out.add_assign(&self.d_word(w));
    }
    out
  }

  /// Checks `∂² = 0` and that `∂` has degree −1.
  pub fn check(&self) -> DgaReport {
    let mut violations = Vec::new();
    for g in 0..self.len() {
      let target = self.reduce_degree(self.degrees[g] - 1);
      for w in self.boundary[g].words() {
        if self.word_degree(w) != target {
          violations.push(format!("d {}: word `{}` has degree {}, expected {}", self.names[g], self.word_text(w), self.word_degree(w), target));
        }
      }
      let dd = self.d_sum(&self.boundary[g]);
      if !dd.is_zero() {
        violations.push(format!("d^2 {} = {}", self.names[g], self.sum_text(&dd)));
      }
    }
    DgaReport { violations }
  }

  fn fresh(&self, stem: &str) -> String {
    (0..).map(|k| format!("{stem}{k}")).find(|n| self.index_of(n).is_none()).unwrap()
  }

  /// Adds `s` of degree `k` and `t` of degree `k − 1` with `∂s = t`.
  pub fn stabilize(&self, k: i64) -> Self {
    let mut out = self.clone();
    let s_name = out.fresh("s");
    let t_name = out.fresh("t");
    let s = out.len();
    out.names.extend([s_name, t_name]);
    out.degrees.extend([out.reduce_degree(k), out.reduce_degree(k - 1)]);
    out.boundary.extend([WordSum::from_word(vec![s + 1]), WordSum::zero()]);
    out
  }

  /// Rewrites the differential under the tame automorphism `a ↦ a + u`.
  pub fn elementary_tame(&self, a: usize, u: &WordSum) -> Result<Self, DgaError> {
    let bad = || DgaError::BadReplacement { name: self.names[a].clone() };
    if u.contains(a) {
      return Err(bad());
    }
    if u.words().flatten().any(|&g| g >= self.len()) {
      return Err(DgaError::UnknownGenerator(format!("#{}", self.len())));
    }
    if u.words().any(|w| self.word_degree(w) != self.degrees[a]) {
      return Err(bad());
    }
    // the map is its own inverse over Z/2, so ∂' = Φ ∂ Φ
    let phi = |s: &WordSum| s.substitute(a, u);
    let mut out = self.clone();
    for g in 0..self.len() {
      let mut pre = WordSum::from_word(vec![g]);
      if g == a {
        pre.add_assign(u);
      }
      out.boundary[g] = phi(&self.d_sum(&pre));
    }
    Ok(out)
  }

  /// Evaluates an algebra map `A -> Z/2` given by generator values.
  pub fn evaluate(values: &[bool], s: &WordSum) -> bool {
    s.words().filter(|w| w.iter().all(|&g| values[g])).count() % 2 == 1
  }

  pub fn is_augmentation(&self, eps: &Augmentation) -> bool {
    eps.values.len() == self.len()
      && (0..self.len()).all(|g| !eps.values[g] || self.is_degree_zero(g))
      && self.boundary.iter().all(|s| !Dga::evaluate(&eps.values, s))
  }

  /// All graded augmentations, by exhaustive search over degree-0 generators.
  pub fn augmentations(&self) -> Result<Vec<Augmentation>, DgaError> {
    let zero: Vec<usize> = (0..self.len()).filter(|&g| self.is_degree_zero(g)).collect();
    if zero.len() > 24 {
      return Err(DgaError::SearchTooLarge(zero.len()));
    }
    // only words made of degree-0 letters can evaluate nontrivially
    let constraints: Vec<WordSum> = self
      .boundary
      .iter()
      .map(|s| WordSum::from_words(s.words().filter(|w| w.iter().all(|&g| self.is_degree_zero(g))).cloned()))
      .filter(|s| !s.is_zero())
      .collect();
    let mut out = Vec::new();
    let mut values = vec![false; self.len()];
    for mask in 0u32..(1u32 << zero.len()) {
      for (bit, &g) in zero.iter().enumerate() {
        values[g] = mask >> bit & 1 == 1;
      }
      if constraints.iter().all(|s| !Dga::evaluate(&values, s)) {
        out.push(Augmentation { values: values.clone() });
      }
    }
    Ok(out)
  }

  /// The linearized differential `π₁ ∘ φ^ε ∘ ∂`.
  pub fn linearize(&self, eps: &Augmentation) -> Result<Z2Complex, DgaError> {
    if !self.is_augmentation(eps) {
      return Err(DgaError::InvalidAugmentation);
    }
    let mut cx = Z2Complex::new(self.degrees.clone());
    for g in 0..self.len() {
      for w in self.boundary[g].words() {
        for j in 0..w.len() {
          if w.iter().enumerate().all(|(l, &h)| l == j || eps.values[h]) {
            cx.toggle(g, w[j]);
          }
        }
      }
    }
    Ok(cx)
  }

  /// A random sum of at most two words of length below 3, avoiding `a` and
  /// of the degree of `a`. Usable as the replacement of an elementary tame map.
  pub fn random_replacement<R: Rng + ?Sized>(&self, a: usize, rng: &mut R) -> WordSum {
    let target = self.word_degree(&[a]);
    let others: Vec<usize> = (0..self.len()).filter(|&g| g != a).collect();
    let mut u = WordSum::zero();
    for _ in 0..40 {
      if u.len() == 2 {
        break;
      }
      let len = if others.is_empty() { 0 } else { rng.gen_range(0..3) };
      let w: Vec<usize> = (0..len).map(|_| others[rng.gen_range(0..others.len())]).collect();
      if self.word_degree(&w) == target && rng.gen_bool(0.3) {
        u.toggle(w);
      }
    }
    u
  }

  /// Composes `steps` random stabilizations (degrees -1..=2) and elementary tame maps.
  pub fn random_tame_shuffle<R: Rng + ?Sized>(&self, steps: usize, rng: &mut R) -> Dga {
    let mut d = self.clone();
    for _ in 0..steps {
      if d.is_empty() || rng.gen_bool(0.3) {
        d = d.stabilize(rng.gen_range(-1..=2));
      } else {
        let a = rng.gen_range(0..d.len());
        let u = d.random_replacement(a, rng);
        d = d.elementary_tame(a, &u).expect("replacement avoids a and has its degree");
      }
    }
    d
  }

  /// Poincaré polynomials of linearized homology over all augmentations.
  pub fn linearized_homology_set(&self) -> Result<BTreeSet<PoincarePolynomial>, DgaError> {
    let mut out = BTreeSet::new();
    for eps in self.augmentations()? {
      out.insert(PoincarePolynomial::from_dims(self.linearize(&eps)?.homology_by_degree()));
    }
    Ok(out)
  }

  pub fn word_text(&self, w: &[usize]) -> String {
    if w.is_empty() {
      "1".into()
    } else {
      w.iter().map(|&g| self.names[g].as_str()).collect::<Vec<_>>().join(" ")
    }
  }

  pub fn sum_text(&self, s: &WordSum) -> String {
    if s.is_zero() {
      return "0".into();
    }
    s.words().map(|w| self.word_text(w)).collect::<Vec<_>>().join(" + ")
  }
}

impl fmt::Display for Dga {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if self.modulus > 0 {
      writeln!(f, "modulus {}", self.modulus)?;
    }
    for (name, d) in self.names.iter().zip(&self.degrees) {
      writeln!(f, "gen {name} {d}")?;
    }
    for (g, name) in self.names.iter().enumerate() {
      writeln!(f, "d {name} = {}", self.sum_text(&self.boundary[g]))?;
    }
    Ok(())
  }
}

impl FromStr for Dga {
  type Err = DgaError;

  /// Parses `gen <name> <degree>` and `d <name> = w1 + w2` lines; an optional
  /// `modulus <n>` line sets a cyclic grading. Words are space-separated names.
  fn from_str(s: &str) -> Result<Self, DgaError> {
    let mut names = Vec::new();
    let mut degrees = Vec::new();
    let mut modulus = 0;
    let mut pending = Vec::new();
    for (k, raw) in s.lines().enumerate() {
      let line = raw.split('#').next().unwrap().trim();
      let err = |msg: &str| DgaError::Parse { line: k + 1, msg: msg.into() };
      let mut toks = line.split_whitespace();
      match toks.next() {
        None => {}
        Some("gen") => {
          let (Some(name), Some(deg), None) = (toks.next(), toks.next(), toks.next()) else {
            return Err(err("expected `gen <name> <degree>`"));
          };
          if name == "1" || name == "0" {
            return Err(err("reserved generator name"));
          }
          names.push(name.to_string());
          degrees.push(deg.parse().map_err(|_| err("bad degree"))?);
        }
        Some("modulus") => {
          modulus = toks.next().and_then(|t| t.parse().ok()).ok_or_else(|| err("bad modulus"))?;
        }
        Some("d") => {
          let rest = line[1..].trim();
          let (lhs, rhs) = rest.split_once('=').ok_or_else(|| err("expected `d <name> = ...`"))?;
          pending.push((k + 1, lhs.trim().to_string(), rhs.trim().to_string()));
        }
        Some(t) => return Err(err(&format!("unknown directive `{t}`"))),
      }
    }
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut boundary = vec![WordSum::zero(); names.len()];
    for (line, lhs, rhs) in pending {
      let g = *index.get(lhs.as_str()).ok_or_else(|| DgaError::UnknownGenerator(lhs.clone()))?;
      let mut sum = WordSum::zero();
      for term in rhs.split('+').map(str::trim) {
        if term == "0" {
          continue;
        }
        if term.is_empty() {
          return Err(DgaError::Parse { line, msg: "empty term".into() });
        }
        let mut w = Vec::new();
        for tok in term.split_whitespace() {
          if tok == "1" {
            continue;
          }
          w.push(*index.get(tok).ok_or_else(|| DgaError::UnknownGenerator(tok.into()))?);
        }
        sum.toggle(w);
      }
      boundary[g].add_assign(&sum);
    }
    Dga::new(names, degrees, boundary, modulus)
  }
}

/// A graded augmentation `ε: A -> Z/2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Augmentation {
  pub values: Vec<bool>,
}

impl Augmentation {
  pub fn zero(n: usize) -> Self { Self { values: vec![false; n] } }
}

/// Graded dimension `Σ dim H_k t^k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PoincarePolynomial(BTreeMap<i64, usize>);

impl PoincarePolynomial {
  pub fn from_dims(dims: BTreeMap<i64, usize>) -> Self { Self(dims.into_iter().filter(|&(_, v)| v > 0).collect()) }

  pub fn coefficients(&self) -> &BTreeMap<i64, usize> { &self.0 }

  pub fn coefficient(&self, k: i64) -> usize { self.0.get(&k).copied().unwrap_or(0) }

  pub fn total(&self) -> usize { self.0.values().sum() }

  pub fn is_zero(&self) -> bool { self.0.is_empty() }

  /// Shifted so the lowest occupied degree is 0.
  pub fn normalized(&self) -> Self {
    match self.0.keys().next() {
      None => self.clone(),
      Some(&lo) => Self(self.0.iter().map(|(&k, &v)| (k - lo, v)).collect()),
    }
  }

  /// Representative up to an overall degree shift. With `modulus > 0` the
  /// degrees are cyclic and the least rotation is chosen.
  pub fn normalized_mod(&self, modulus: i64) -> Self {
    if modulus <= 0 {
      return self.normalized();
    }
    (0..modulus)
      .map(|shift| Self(self.0.iter().map(|(&k, &v)| ((k + shift).rem_euclid(modulus), v)).collect()))
      .min()
      .unwrap()
  }
}

impl fmt::Display for PoincarePolynomial {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if self.0.is_empty() {
      return write!(f, "0");
    }
    let terms: Vec<String> = self
      .0
      .iter()
      .map(|(&k, &c)| {
        let mono = match k {
          0 => String::new(),
          1 => "t".into(),
          k => format!("t^{k}"),
        };
        match (c, mono.is_empty()) {
          (c, true) => c.to_string(),
          (1, false) => mono,
          (c, false) => format!("{c}{mono}"),
        }
      })
      .collect();
    write!(f, "{}", terms.join(" + "))
  }
}

#[cfg(test)]
mod tests {
  use super::*;

  const UNKNOT: &str = "gen a 1\nd a = 0\n";
  const TREFOIL: &str = "\
gen a1 1
gen a2 1
gen b1 0
gen b2 0
gen b3 0
d a1 = 1 + b1 + b3 + b1 b2 b3
d a2 = 1 + b1 + b3 + b3 b2 b1
";

  fn poly(pairs: &[(i64, usize)]) -> PoincarePolynomial { PoincarePolynomial::from_dims(pairs.iter().copied().collect()) }

  #[test]
  fn parse_and_print_roundtrip() {
    let a: Dga = TREFOIL.parse().unwrap();
    assert_eq!(a.len(), 5);
    let b: Dga = a.to_string().parse().unwrap();
    assert_eq!(a, b);
    assert!(matches!("gen a 1\nd b = a".parse::<Dga>(), Err(DgaError::UnknownGenerator(_))));
    assert!(matches!("gen a x".parse::<Dga>(), Err(DgaError::Parse { line: 1, .. })));
  }

  #[test]
  fn checks() {
    assert!(Dga::trivial().check().passed());
    assert!(UNKNOT.parse::<Dga>().unwrap().check().passed());
    assert!(TREFOIL.parse::<Dga>().unwrap().check().passed());
    let broken: Dga = TREFOIL.replace("b1 b2 b3", "b1 b2 a2").parse().unwrap();
    let rep = broken.check();
    assert!(!rep.passed());
    assert!(rep.violations[0].starts_with("d a1"));
    let not_square_zero: Dga = "gen a 2\ngen b 1\ngen c 0\nd a = b\nd b = 1".parse().unwrap();
    assert!(!not_square_zero.check().passed());
  }

  #[test]
  fn unknot_invariants() {
    let a: Dga = UNKNOT.parse().unwrap();
    let augs = a.augmentations().unwrap();
    assert_eq!(augs, vec![Augmentation::zero(1)]);
    let cx = a.linearize(&augs[0]).unwrap();
    assert_eq!(cx.homology_by_degree().get(&1), Some(&1));
    assert_eq!(a.linearized_homology_set().unwrap(), BTreeSet::from([poly(&[(1, 1)])]));
    assert_eq!(a.stabilize(5).linearized_homology_set().unwrap(), a.linearized_homology_set().unwrap());
  }

  #[test]
  fn trefoil_augmentations() {
    let a: Dga = TREFOIL.parse().unwrap();
    let augs = a.augmentations().unwrap();
    assert_eq!(augs.len(), 5);
    for e in &augs {
      assert!(a.linearize(e).unwrap().squares_to_zero());
    }
    assert_eq!(a.linearized_homology_set().unwrap(), BTreeSet::from([poly(&[(0, 2), (1, 1)])]));
  }

  #[test]
  fn trivial_and_stabilized() {
    let t = Dga::trivial();
    assert_eq!(t.linearized_homology_set().unwrap(), BTreeSet::from([PoincarePolynomial::default()]));
    let s = t.stabilize(1);
    assert_eq!(s.len(), 2);
    let augs = s.augmentations().unwrap();
    assert_eq!(augs, vec![Augmentation::zero(2)]);
    assert_eq!(s.linearized_homology_set().unwrap(), BTreeSet::from([PoincarePolynomial::default()]));
    let st = t.stabilize(3).stabilize(7);
    let ts = t.stabilize(7).stabilize(3);
    assert_eq!(st.linearized_homology_set().unwrap(), ts.linearized_homology_set().unwrap());
    let mut d1 = st.degrees().to_vec();
    let mut d2 = ts.degrees().to_vec();
    d1.sort();
    d2.sort();
    assert_eq!(d1, d2);
  }

  #[test]
  fn no_augmentations() {
    let a: Dga = "gen a 1\nd a = 1".parse().unwrap();
    assert!(a.check().passed());
    assert!(a.linearized_homology_set().unwrap().is_empty());
  }

  #[test]
  fn tame_maps() {
    let a: Dga = TREFOIL.parse().unwrap();
    assert_eq!(a.elementary_tame(0, &WordSum::zero()).unwrap(), a);
    let u = WordSum::from_words([vec![2], vec![3, 4]]);
    let once = a.elementary_tame(2, &WordSum::from_words([vec![3, 4]])).unwrap();
    assert!(once.check().passed());
    let twice = once.elementary_tame(2, &WordSum::from_words([vec![3, 4]])).unwrap();
    assert_eq!(twice, a);
    assert!(a.elementary_tame(2, &u).is_err());
    assert!(a.elementary_tame(0, &WordSum::from_word(vec![2])).is_err());
    assert_eq!(once.linearized_homology_set().unwrap(), a.linearized_homology_set().unwrap());
  }

  #[test]
  fn cyclic_grading() {
    let a: Dga = "modulus 2\ngen a 3\ngen b 0\nd a = b b".parse().unwrap();
    assert_eq!(a.degrees(), &[1, 0]);
    assert!(a.check().passed());
    assert_eq!(a.augmentations().unwrap().len(), 1);
  }

  #[test]
  fn polynomial_display() {
    assert_eq!(poly(&[(0, 2), (1, 1)]).to_string(), "2 + t");
    assert_eq!(poly(&[(-2, 1), (1, 1), (2, 1)]).to_string(), "t^-2 + t + t^2");
    assert_eq!(PoincarePolynomial::default().to_string(), "0");
    assert_eq!(poly(&[(3, 1), (5, 2)]).normalized(), poly(&[(0, 1), (2, 2)]));
  }
}
