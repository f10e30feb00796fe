//! Two-level stacked links: the bimodule of mixed chords over the dgas of the
//! lower and upper components, and its bilinearized homology.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::dga::{Augmentation, Dga, DgaError, DgaReport, PoincarePolynomial, Word, WordSum};
use crate::front::{FrontError, FrontEvent, FrontWord, Level};
use crate::homology::Z2Complex;
use crate::lch::{front_dga, resolve_front, Crossing, CrossingKind, LagrangianDiagram, LchError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BimoduleError {
  #[error("a stacked link needs exactly two components, found {0}")]
  ComponentCount(usize),
  #[error("both components need a level label, one lower and one upper")]
  Labels,
  #[error("mixed crossing {0} has the lower component over")]
  LowerOver(usize),
  #[error("crossing {0} of a direct diagram is not mixed; only embedded components are supported")]
  PureCrossing(usize),
  #[error("a direct diagram needs at least one excluded face (its unbounded face)")]
  NoExcludedFace,
  #[error("differential of {generator} contains `{word}`, which breaks the lower-mixed-upper pattern")]
  Trichotomy { generator: String, word: String },
  #[error("pure part of the link dga differs from the {0} component dga")]
  SplitMismatch(Level),
  #[error("replacement for {0} is not allowed")]
  BadReplacement(String),
  #[error("augmentation pair is invalid")]
  InvalidAugmentation,
  #[error("{0}")]
  Parse(String),
  #[error(transparent)]
  Lch(#[from] LchError),
  #[error(transparent)]
  Front(#[from] FrontError),
  #[error(transparent)]
  Dga(#[from] DgaError),
}

/// A two-component link whose upper component lies above the lower one.
///
/// Built either from a labelled front, or from a Lagrangian diagram of two
/// embedded curves together with faces no polygon may cover (the unbounded
/// face and any punctured faces).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackedLinkDiagram {
  diagram: LagrangianDiagram,
  lower: usize,
  upper: usize,
  /// `(crossing, quadrant)` corners of excluded faces.
  excluded: Vec<(usize, usize)>,
}

impl StackedLinkDiagram {
  pub fn from_front(front: &FrontWord) -> Result<Self, BimoduleError> {
    let data = front.data()?;
    if data.components() != 2 {
      return Err(BimoduleError::ComponentCount(data.components()));
    }
    let find = |l: Level| data.component_labels.iter().position(|&x| x == Some(l));
    let (lower, upper) = match (find(Level::Lower), find(Level::Upper)) {
      (Some(a), Some(b)) => (a, b),
      _ => return Err(BimoduleError::Labels),
    };
    let diagram = resolve_front(front)?;
    Self::checked(diagram, lower, upper, Vec::new())
  }

  pub fn from_diagram(diagram: LagrangianDiagram, lower: usize, upper: usize, excluded: Vec<(usize, usize)>) -> Result<Self, BimoduleError> {
    if excluded.is_empty() {
      return Err(BimoduleError::NoExcludedFace);
    }
    let n = diagram.crossings().len();
    if let Some(&(c, q)) = excluded.iter().find(|&&(c, q)| c >= n || q >= 4) {
      return Err(BimoduleError::Parse(format!("excluded corner {c}.{q} is outside the diagram")));
    }
    for (c, x) in diagram.crossings().iter().enumerate() {
      if x.components.0 == x.components.1 {
        return Err(BimoduleError::PureCrossing(c));
      }
    }
    Self::checked(diagram, lower, upper, excluded)
  }

  fn checked(diagram: LagrangianDiagram, lower: usize, upper: usize, excluded: Vec<(usize, usize)>) -> Result<Self, BimoduleError> {
    let mut seen = BTreeSet::new();
    for (c, x) in diagram.crossings().iter().enumerate() {
      seen.insert(x.components.0);
      seen.insert(x.components.1);
      if x.components.0 != x.components.1 && x.components.0 != upper {
        return Err(BimoduleError::LowerOver(c));
      }
    }
    if lower == upper || seen.iter().any(|&c| c != lower && c != upper) {
      return Err(BimoduleError::ComponentCount(seen.len().max(1)));
    }
    Ok(Self { diagram, lower, upper, excluded })
  }

  /// Two embedded circles around a puncture, the upper one a pushoff of the
  /// lower crossing it `2n` times. The disk inside both and the unbounded
  /// face are excluded; the `2n` lunes between them are the only polygons.
  pub fn circle_pushoff(n: usize) -> Self {
    assert!(n >= 1);
    let m = 2 * n;
    // the lower curve runs SW -> NE through every crossing; the upper one
    // enters the lower disk at even crossings and leaves at odd ones
    let crossings = (0..m)
      .map(|i| {
        let next = (i + 1) % m;
        let prev = (i + m - 1) % m;
        let mut links = [(0, 0); 4];
        links[0] = (next, 2);
        links[2] = (prev, 0);
        if i % 2 == 0 {
          links[1] = (next, 1);
          links[3] = (prev, 3);
        } else {
          links[3] = (next, 3);
          links[1] = (prev, 1);
        }
        Crossing { kind: CrossingKind::Front, event: i, over: (1, 3), positive: (0, 2), components: (1, 0), links }
      })
      .collect();
    let diagram = LagrangianDiagram::from_crossings(crossings).expect("pushoff diagram is planar");
    // the shared disk meets crossing 1 in its north quadrant, the outside in its south one
    Self::from_diagram(diagram, 0, 1, vec![(1, 0), (1, 2)]).expect("pushoff diagram is stacked")
  }

  pub fn diagram(&self) -> &LagrangianDiagram { &self.diagram }

  pub fn front(&self) -> Option<&FrontWord> { self.diagram.front() }

  pub fn excluded(&self) -> &[(usize, usize)] { &self.excluded }

  /// Indices of crossings between the two components.
  pub fn mixed_crossings(&self) -> Vec<usize> {
    (0..self.diagram.crossings().len()).filter(|&c| self.is_mixed(c)).collect()
  }

  fn is_mixed(&self, c: usize) -> bool {
    let x = &self.diagram.crossings()[c];
    x.components.0 != x.components.1
  }
}

impl fmt::Display for StackedLinkDiagram {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if let Some(front) = self.front() {
      return write!(f, "{front}");
    }
    write!(f, "{}", self.diagram)?;
    writeln!(f, "lower {}", self.lower)?;
    writeln!(f, "upper {}", self.upper)?;
    for (c, q) in &self.excluded {
      writeln!(f, "exclude {c}.{q}")?;
    }
    Ok(())
  }
}

impl FromStr for StackedLinkDiagram {
  type Err = BimoduleError;

  /// A labelled front, or a diagram dump followed by `lower`, `upper` and `exclude c.q` lines.
  fn from_str(s: &str) -> Result<Self, BimoduleError> {
    if !s.contains('|') {
      return StackedLinkDiagram::from_front(&s.parse()?);
    }
    let bad = |m: &str| BimoduleError::Parse(m.to_string());
    let (mut lower, mut upper, mut excluded) = (None, None, Vec::new());
    let mut rest = String::new();
    for line in s.lines() {
      let body = line.split('#').next().unwrap().trim();
      let mut toks = body.split_whitespace();
      match toks.next() {
        Some("lower") => lower = Some(toks.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad(body))?),
        Some("upper") => upper = Some(toks.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad(body))?),
        Some("exclude") => {
          let t = toks.next().ok_or_else(|| bad(body))?;
          let (c, q) = t.split_once('.').ok_or_else(|| bad(t))?;
          excluded.push((c.parse().map_err(|_| bad(t))?, q.parse().map_err(|_| bad(t))?));
        }
        _ => {
          rest.push_str(line);
          rest.push('\n');
        }
      }
    }
    let diagram: LagrangianDiagram = rest.parse()?;
    StackedLinkDiagram::from_diagram(diagram, lower.ok_or_else(|| bad("missing lower"))?, upper.ok_or_else(|| bad("missing upper"))?, excluded)
  }
}

/// One term `(word in A) · c · (word in A′)` of a bimodule differential.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MixedWord {
  pub left: Word,
  pub mixed: usize,
  pub right: Word,
}

pub type MixedSum = BTreeSet<MixedWord>;

fn toggle(s: &mut MixedSum, w: MixedWord) {
  if !s.remove(&w) {
    s.insert(w);
  }
}

/// Semi-free bimodule over `(lower, upper)` on the mixed generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgBimodule {
  lower: Dga,
  upper: Dga,
  names: Vec<String>,
  degrees: Vec<i64>,
  modulus: i64,
  boundary: Vec<MixedSum>,
}

/// The component dgas of a front-based stacked link, computed on the sub-fronts.
pub fn split_dgas(d: &StackedLinkDiagram) -> Result<(Dga, Dga), BimoduleError> {
  let front = d.front().ok_or(LchError::NoFront)?;
  let lower = front_dga(&front.restrict_to_component(d.lower)?.0)?;
  let upper = front_dga(&front.restrict_to_component(d.upper)?.0)?;
  Ok((lower, upper))
}

/// The bimodule differential, read off the polygons with a mixed positive corner.
pub fn mixed_differential(d: &StackedLinkDiagram) -> Result<DgBimodule, BimoduleError> {
  match d.front() {
    Some(front) => front_bimodule(d, front),
    None => planar_bimodule(d),
  }
}

/// Generator index of every non-left-cusp event, in the order the link dga uses.
fn generator_of_event(front: &FrontWord) -> Vec<Option<usize>> {
  let mut g = 0;
  front
    .events()
    .iter()
    .map(|e| match e {
      FrontEvent::LeftCusp(_) => None,
      _ => {
        g += 1;
        Some(g - 1)
      }
    })
    .collect()
}

fn front_bimodule(d: &StackedLinkDiagram, front: &FrontWord) -> Result<DgBimodule, BimoduleError> {
  let link = front_dga(front)?;
  let (lower, upper) = split_dgas(d)?;
  let link_gen = generator_of_event(front);
  // role of each link generator: its index in the lower dga, the upper dga, or among mixed ones
  #[derive(Clone, Copy, PartialEq, Eq)]
  enum Role {
    Lower(usize),
    Upper(usize),
    Mixed(usize),
  }
  let mut role: Vec<Option<Role>> = vec![None; link.len()];
  for (level, comp) in [(Level::Lower, d.lower), (Level::Upper, d.upper)] {
    let (sub, map) = front.restrict_to_component(comp)?;
    let sub_gen = generator_of_event(&sub);
    for (i, j) in map.iter().enumerate() {
      if let (Some(g), Some(j)) = (link_gen[i], j) {
        let h = sub_gen[*j].expect("kept events keep their kind");
        role[g] = Some(if level == Level::Lower { Role::Lower(h) } else { Role::Upper(h) });
      }
    }
  }
  let mut mixed_link = Vec::new();
  for r in role.iter_mut().enumerate().filter(|(_, r)| r.is_none()) {
    *r.1 = Some(Role::Mixed(mixed_link.len()));
    mixed_link.push(r.0);
  }
  let role: Vec<Role> = role.into_iter().map(|r| r.unwrap()).collect();
  let modulus = link.modulus();
  let reduce = |x: i64| if modulus > 0 { x.rem_euclid(modulus) } else { x };
  // pure parts must agree with the sub-front dgas
  for g in 0..link.len() {
    let (dga, h, level) = match role[g] {
      Role::Lower(h) => (&lower, h, Level::Lower),
      Role::Upper(h) => (&upper, h, Level::Upper),
      Role::Mixed(_) => continue,
    };
    let mut image = WordSum::zero();
    for w in link.boundary(g).words() {
      let mut v = Vec::with_capacity(w.len());
      for &x in w {
        match role[x] {
          Role::Lower(y) if level == Level::Lower => v.push(y),
          Role::Upper(y) if level == Level::Upper => v.push(y),
          _ => return Err(BimoduleError::SplitMismatch(level)),
        }
      }
      image.toggle(v);
    }
    if &image != dga.boundary(h) || reduce(link.degrees()[g]) != reduce(dga.degrees()[h]) {
      return Err(BimoduleError::SplitMismatch(level));
    }
  }
  let base = mixed_link.first().map_or(0, |&g| link.degrees()[g]);
  let names: Vec<String> = (1..=mixed_link.len()).map(|i| format!("m{i}")).collect();
  let degrees = mixed_link.iter().map(|&g| reduce(link.degrees()[g] - base)).collect();
  let mut boundary = Vec::with_capacity(mixed_link.len());
  for (b, &g) in mixed_link.iter().enumerate() {
    let mut sum = MixedSum::new();
    for w in link.boundary(g).words() {
      let bad = || BimoduleError::Trichotomy { generator: names[b].clone(), word: link.word_text(w) };
      let mut left = Vec::new();
      let mut mixed = None;
      let mut right = Vec::new();
      for &x in w {
        match (role[x], mixed) {
          (Role::Lower(y), None) => left.push(y),
          (Role::Mixed(y), None) => mixed = Some(y),
          (Role::Upper(y), Some(_)) => right.push(y),
          _ => return Err(bad()),
        }
      }
      toggle(&mut sum, MixedWord { left, mixed: mixed.ok_or_else(bad)?, right });
    }
    boundary.push(sum);
  }
  let out = DgBimodule { lower, upper, names, degrees, modulus, boundary };
  Ok(out)
}

/// Bigons between two embedded curves, found by following each curve from a
/// positive corner and closing up along the other one. A bigon counts when its
/// domain is nonnegative, vanishes on the excluded faces and has convex corners.
fn planar_bimodule(d: &StackedLinkDiagram) -> Result<DgBimodule, BimoduleError> {
  let diagram = &d.diagram;
  let xs = diagram.crossings();
  let n = xs.len();
  let face = diagram.faces();
  let faces = face.iter().max().map_or(0, |&m| m + 1);
  let excluded: BTreeSet<usize> = d.excluded.iter().map(|&(c, q)| face[c * 4 + q]).collect();
  let reference = *excluded.iter().next().ok_or(BimoduleError::NoExcludedFace)?;
  let step = |h: usize| -> usize {
    let (c, s) = xs[h / 4].links[h % 4];
    c * 4 + s
  };
  let names: Vec<String> = (1..=n).map(|i| format!("m{i}")).collect();
  let mut boundary = vec![MixedSum::new(); n];
  for x in 0..n {
    for q in [xs[x].positive.0, xs[x].positive.1] {
      // leave x along slot q, go straight until turning left at some y
      let mut first = vec![x * 4 + q];
      let mut arrive = step(x * 4 + q);
      for _ in 0..4 * n {
        let (y, t) = (arrive / 4, arrive % 4);
        if y == x {
          break;
        }
        let corner = (t + 3) % 4;
        if corner != xs[y].positive.0 && corner != xs[y].positive.1 {
          // close up along the other curve
          let mut path = first.clone();
          let mut h = y * 4 + corner;
          let mut closed = false;
          for _ in 0..4 * n {
            path.push(h);
            let a = step(h);
            if a / 4 == x {
              closed = a % 4 == (q + 1) % 4;
              break;
            }
            h = (a / 4) * 4 + (a % 4 + 2) % 4;
          }
          if closed && bigon_domain_ok(&path, &face, faces, &excluded, reference, step, (x, q), (y, corner)) {
            toggle(&mut boundary[x], MixedWord { left: vec![], mixed: y, right: vec![] });
          }
        }
        let through = y * 4 + (t + 2) % 4;
        first.push(through);
        arrive = step(through);
      }
    }
  }
  // grading mod 2 from the local intersection sign of the oriented curves
  let orient = |comp: usize| -> Vec<Option<usize>> {
    let mut out_slot = vec![None; n];
    let start = (0..n * 4).find(|&h| {
      let x = &xs[h / 4];
      let on_over = h % 4 == x.over.0 || h % 4 == x.over.1;
      (if on_over { x.components.0 } else { x.components.1 }) == comp
    });
    if let Some(start) = start {
      let mut h = start;
      while out_slot[h / 4].is_none() {
        out_slot[h / 4] = Some(h % 4);
        let a = step(h);
        h = (a / 4) * 4 + (a % 4 + 2) % 4;
      }
    }
    out_slot
  };
  let (lo, up) = (orient(d.lower), orient(d.upper));
  let parity: Vec<i64> = (0..n).map(|c| if up[c] == lo[c].map(|s| (s + 1) % 4) { 0 } else { 1 }).collect();
  let degrees = parity.iter().map(|p| (p - parity[0]).rem_euclid(2)).collect();
  Ok(DgBimodule { lower: Dga::trivial(), upper: Dga::trivial(), names, degrees, modulus: 2, boundary })
}

#[allow(clippy::too_many_arguments)]
fn bigon_domain_ok(
  path: &[usize],
  face: &[usize],
  faces: usize,
  excluded: &BTreeSet<usize>,
  reference: usize,
  step: impl Fn(usize) -> usize,
  start: (usize, usize),
  end: (usize, usize),
) -> bool {
  // net traversals per directed edge determine the multiplicity jump across it
  let mut net: BTreeMap<usize, i64> = BTreeMap::new();
  for &h in path {
    *net.entry(h).or_insert(0) += 1;
    *net.entry(step(h)).or_insert(0) -= 1;
  }
  let mut mult: Vec<Option<i64>> = vec![None; faces];
  mult[reference] = Some(0);
  let mut queue = VecDeque::from([reference]);
  let mut adjacency: Vec<Vec<(usize, i64)>> = vec![Vec::new(); faces];
  for h in 0..face.len() {
    // crossing the edge that starts at h from its right side to its left side
    let jump = net.get(&h).copied().unwrap_or(0);
    adjacency[face[step(h)]].push((face[h], jump));
  }
  while let Some(f) = queue.pop_front() {
    let m = mult[f].unwrap();
    for &(g, jump) in &adjacency[f] {
      match mult[g] {
        None => {
          mult[g] = Some(m + jump);
          queue.push_back(g);
        }
        Some(v) if v != m + jump => return false,
        _ => {}
      }
    }
  }
  let mult: Vec<i64> = mult.into_iter().map(|m| m.unwrap_or(0)).collect();
  if mult.iter().any(|&m| m < 0) || excluded.iter().any(|&f| mult[f] != 0) {
    return false;
  }
  let convex = |(c, q): (usize, usize)| {
    let at = |k: usize| mult[face[c * 4 + (q + k) % 4]];
    at(0) == at(2) + 1 && at(1) == at(2) && at(3) == at(2)
  };
  convex(start) && convex(end)
}

impl DgBimodule {
  pub fn new(lower: Dga, upper: Dga, names: Vec<String>, degrees: Vec<i64>, modulus: i64, boundary: Vec<MixedSum>) -> Result<Self, BimoduleError> {
    let b = Self { lower, upper, names, degrees, modulus, boundary };
    for (g, sum) in b.boundary.iter().enumerate() {
      for w in sum {
        if w.mixed >= b.len() || w.left.iter().any(|&a| a >= b.lower.len()) || w.right.iter().any(|&a| a >= b.upper.len()) {
          return Err(BimoduleError::Parse(format!("differential of {} names a missing generator", b.names[g])));
        }
      }
    }
    Ok(b)
  }

  pub fn lower(&self) -> &Dga { &self.lower }

  pub fn upper(&self) -> &Dga { &self.upper }

  pub fn names(&self) -> &[String] { &self.names }

  pub fn degrees(&self) -> &[i64] { &self.degrees }

  pub fn modulus(&self) -> i64 { self.modulus }

  pub fn boundary(&self, b: usize) -> &MixedSum { &self.boundary[b] }

  pub fn len(&self) -> usize { self.names.len() }

  pub fn is_empty(&self) -> bool { self.names.is_empty() }

  fn reduce(&self, x: i64) -> i64 {
    if self.modulus > 0 {
      x.rem_euclid(self.modulus)
    } else {
      x
    }
  }

  pub fn word_degree(&self, w: &MixedWord) -> i64 {
    let l: i64 = w.left.iter().map(|&a| self.lower.degrees()[a]).sum();
    let r: i64 = w.right.iter().map(|&a| self.upper.degrees()[a]).sum();
    self.reduce(l + self.degrees[w.mixed] + r)
  }

  pub fn word_text(&self, w: &MixedWord) -> String {
    let mut parts: Vec<String> = w.left.iter().map(|&a| self.lower.names()[a].clone()).collect();
    parts.push(self.names[w.mixed].clone());
    parts.extend(w.right.iter().map(|&a| format!("{}'", self.upper.names()[a])));
    parts.join(" ")
  }

  pub fn sum_text(&self, s: &MixedSum) -> String {
    if s.is_empty() {
      return "0".into();
    }
    s.iter().map(|w| self.word_text(w)).collect::<Vec<_>>().join(" + ")
  }

  /// `∂` of a mixed word by the Leibniz rule on both sides.
  pub fn d_word(&self, w: &MixedWord) -> MixedSum {
    let mut out = MixedSum::new();
    for l in self.lower.d_word(&w.left).words() {
      toggle(&mut out, MixedWord { left: l.clone(), mixed: w.mixed, right: w.right.clone() });
    }
    for inner in &self.boundary[w.mixed] {
      let mut left = w.left.clone();
      left.extend_from_slice(&inner.left);
      let mut right = inner.right.clone();
      right.extend_from_slice(&w.right);
      toggle(&mut out, MixedWord { left, mixed: inner.mixed, right });
    }
    for r in self.upper.d_word(&w.right).words() {
      toggle(&mut out, MixedWord { left: w.left.clone(), mixed: w.mixed, right: r.clone() });
    }
    out
  }

  pub fn d_sum(&self, s: &MixedSum) -> MixedSum {
    let mut out = MixedSum::new();
    for w in s {
      for v in self.d_word(w) {
        toggle(&mut out, v);
      }
    }
    out
  }

  /// Degree −1 and `∂² = 0` on the mixed generators, together with the checks of both boundary dgas.
  pub fn check(&self) -> DgaReport {
    let mut violations = self.lower.check().violations;
    violations.extend(self.upper.check().violations.into_iter().map(|v| format!("upper: {v}")));
    for b in 0..self.len() {
      let target = self.reduce(self.degrees[b] - 1);
      for w in &self.boundary[b] {
        if self.word_degree(w) != target {
          violations.push(format!("d {}: word `{}` has degree {}, expected {}", self.names[b], self.word_text(w), self.word_degree(w), target));
        }
      }
      let dd = self.d_sum(&self.boundary[b]);
      if !dd.is_empty() {
        violations.push(format!("d^2 {} = {}", self.names[b], self.sum_text(&dd)));
      }
    }
    DgaReport { violations }
  }

  fn fresh(&self, stem: &str) -> String {
    (0..).map(|k| format!("{stem}{k}")).find(|n| !self.names.contains(n)).unwrap()
  }

  /// Adds mixed `s` of degree `k` and `t` of degree `k − 1` with `∂s = t`.
  pub fn stabilize(&self, k: i64) -> Self {
    let mut out = self.clone();
    let (s_name, t_name) = (out.fresh("s"), out.fresh("t"));
    let s = out.len();
    out.names.extend([s_name, t_name]);
    out.degrees.extend([out.reduce(k), out.reduce(k - 1)]);
    out.boundary.push(MixedSum::from([MixedWord { left: vec![], mixed: s + 1, right: vec![] }]));
    out.boundary.push(MixedSum::new());
    out
  }

  /// Rewrites the differential under the mixed tame map `b ↦ b + u`.
  pub fn elementary_tame(&self, b: usize, u: &MixedSum) -> Result<Self, BimoduleError> {
    let bad = || BimoduleError::BadReplacement(self.names[b].clone());
    if u.iter().any(|w| w.mixed == b || w.mixed >= self.len() || self.word_degree(w) != self.reduce(self.degrees[b])) {
      return Err(bad());
    }
    if u.iter().any(|w| w.left.iter().any(|&a| a >= self.lower.len()) || w.right.iter().any(|&a| a >= self.upper.len())) {
      return Err(bad());
    }
    let phi = |s: &MixedSum| -> MixedSum {
      let mut out = MixedSum::new();
      for w in s {
        toggle(&mut out, w.clone());
        if w.mixed == b {
          for v in u {
            let mut left = w.left.clone();
            left.extend_from_slice(&v.left);
            let mut right = v.right.clone();
            right.extend_from_slice(&w.right);
            toggle(&mut out, MixedWord { left, mixed: v.mixed, right });
          }
        }
      }
      out
    };
    let mut out = self.clone();
    for g in 0..self.len() {
      let mut pre = MixedSum::from([MixedWord { left: vec![], mixed: g, right: vec![] }]);
      if g == b {
        for v in u {
          toggle(&mut pre, v.clone());
        }
      }
      out.boundary[g] = phi(&self.d_sum(&pre));
    }
    Ok(out)
  }

  /// Applies the tame map `a ↦ a + u` of the lower (`Level::Lower`) or upper dga.
  pub fn boundary_tame(&self, level: Level, a: usize, u: &WordSum) -> Result<Self, BimoduleError> {
    let mut out = self.clone();
    let sub = |w: &Word| WordSum::from_word(w.clone()).substitute(a, u);
    match level {
      Level::Lower => out.lower = self.lower.elementary_tame(a, u)?,
      Level::Upper => out.upper = self.upper.elementary_tame(a, u)?,
    }
    for g in 0..self.len() {
      let mut next = MixedSum::new();
      for w in &self.boundary[g] {
        match level {
          Level::Lower => {
            for l in sub(&w.left).words() {
              toggle(&mut next, MixedWord { left: l.clone(), mixed: w.mixed, right: w.right.clone() });
            }
          }
          Level::Upper => {
            for r in sub(&w.right).words() {
              toggle(&mut next, MixedWord { left: w.left.clone(), mixed: w.mixed, right: r.clone() });
            }
          }
        }
      }
      out.boundary[g] = next;
    }
    Ok(out)
  }

  /// Matrix of `π ∘ φ^{ε,ε′} ∘ ∂` on the mixed generators.
  pub fn bilinearize(&self, eps: &Augmentation, eps_up: &Augmentation) -> Result<Z2Complex, BimoduleError> {
    if !self.lower.is_augmentation(eps) || !self.upper.is_augmentation(eps_up) {
      return Err(BimoduleError::InvalidAugmentation);
    }
    let mut cx = Z2Complex::new(self.degrees.clone());
    for b in 0..self.len() {
      for w in &self.boundary[b] {
        if w.left.iter().all(|&a| eps.values[a]) && w.right.iter().all(|&a| eps_up.values[a]) {
          cx.toggle(b, w.mixed);
        }
      }
    }
    Ok(cx)
  }

  /// Poincaré polynomials of bilinearized homology over all augmentation pairs, up to shift.
  pub fn bilinearized_homology_set(&self) -> Result<BTreeSet<PoincarePolynomial>, BimoduleError> {
    let (lo, up) = (self.lower.augmentations()?, self.upper.augmentations()?);
    let mut out = BTreeSet::new();
    for e in &lo {
      for f in &up {
        let p = PoincarePolynomial::from_dims(self.bilinearize(e, f)?.homology_by_degree());
        out.insert(p.normalized_mod(self.modulus));
      }
    }
    Ok(out)
  }

  /// Composes `steps` random stabilizations and tame maps on the mixed
  /// generators and on both boundary dgas.
  pub fn random_tame_shuffle<R: Rng + ?Sized>(&self, steps: usize, rng: &mut R) -> Self {
    let mut m = self.clone();
    for _ in 0..steps {
      let pick = rng.gen_range(0..4);
      if pick == 0 || m.is_empty() {
        m = m.stabilize(rng.gen_range(-1..=2));
      } else if pick == 1 {
        let b = rng.gen_range(0..m.len());
        let u = m.random_replacement(b, rng);
        m = m.elementary_tame(b, &u).expect("replacement avoids b and has its degree");
      } else {
        let level = if pick == 2 { Level::Lower } else { Level::Upper };
        let dga = if pick == 2 { &m.lower } else { &m.upper };
        if dga.is_empty() {
          continue;
        }
        let a = rng.gen_range(0..dga.len());
        let u = dga.random_replacement(a, rng);
        m = m.boundary_tame(level, a, &u).expect("replacement avoids a and has its degree");
      }
    }
    m
  }

  /// A sum of at most two mixed words of the degree of `b`, not mentioning `b`.
  pub fn random_replacement<R: Rng + ?Sized>(&self, b: usize, rng: &mut R) -> MixedSum {
    let target = self.reduce(self.degrees[b]);
    let mut u = MixedSum::new();
    let others: Vec<usize> = (0..self.len()).filter(|&g| g != b).collect();
    if others.is_empty() {
      return u;
    }
    for _ in 0..40 {
      if u.len() == 2 {
        break;
      }
      let mut pure = |dga: &Dga| -> Word {
        if dga.is_empty() {
          return vec![];
        }
        (0..rng.gen_range(0..2)).map(|_| rng.gen_range(0..dga.len())).collect()
      };
      let left = pure(&self.lower);
      let right = pure(&self.upper);
      let w = MixedWord { left, mixed: others[rng.gen_range(0..others.len())], right };
      if self.word_degree(&w) == target && rng.gen_bool(0.3) {
        toggle(&mut u, w);
      }
    }
    u
  }
}

impl fmt::Display for DgBimodule {
  /// Lower generators print plain, upper ones with a prime.
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for b in 0..self.len() {
      writeln!(f, "gen {} {}", self.names[b], self.degrees[b])?;
    }
    for b in 0..self.len() {
      writeln!(f, "d {} = {}", self.names[b], self.sum_text(&self.boundary[b]))?;
    }
    Ok(())
  }
}
