//! Complexes of projective modules over the `A_m` zigzag algebra and the
//! braid twist functors acting on them.
//!
//! `dim Hom•(P_i, σ(P_j))` in homology is the categorical stand-in for the
//! Floer homology of the sphere configuration, and equals twice the
//! intersection number of the corresponding arcs.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::braid::BraidWord;
use crate::homology::Z2Complex;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ZigzagError {
  #[error("vertex {vertex} out of range 1..={m}")]
  VertexOutOfRange { vertex: usize, m: usize },
  #[error("strand count {strands} does not match m = {m}")]
  StrandMismatch { strands: usize, m: usize },
  #[error("malformed complex: {0}")]
  Malformed(String),
}

/// A basis path of the zigzag algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Path {
  /// The idempotent `e_v`.
  Idempotent(usize),
  /// The length-one path `(u|v)`, `|u - v| = 1`.
  Arrow(usize, usize),
  /// The loop `X_v = (v|w)(w|v)`.
  Loop(usize),
}

impl Path {
  pub fn source(&self) -> usize {
    match *self {
      Path::Idempotent(v) | Path::Loop(v) => v,
      Path::Arrow(u, _) => u,
    }
  }

  pub fn target(&self) -> usize {
    match *self {
      Path::Idempotent(v) | Path::Loop(v) => v,
      Path::Arrow(_, v) => v,
    }
  }

  /// Path length grading.
  pub fn degree(&self) -> i32 {
    match self {
      Path::Idempotent(_) => 0,
      Path::Arrow(..) => 1,
      Path::Loop(_) => 2,
    }
  }
}

/// The zigzag algebra of the `A_m` quiver over Z/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZigzagAlgebra {
  m: usize,
}

impl ZigzagAlgebra {
  pub fn new(m: usize) -> Self { Self { m } }

  pub fn m(&self) -> usize { self.m }

  pub fn basis(&self) -> Vec<Path> {
    let mut out = Vec::new();
    for v in 1..=self.m {
      out.push(Path::Idempotent(v));
      out.push(Path::Loop(v));
      if v > 1 {
        out.push(Path::Arrow(v, v - 1));
      }
      if v < self.m {
        out.push(Path::Arrow(v, v + 1));
      }
    }
    out
  }

  /// Basis paths from `u` to `v`.
  pub fn paths(&self, u: usize, v: usize) -> Vec<Path> { paths_between(u, v) }

  /// Concatenation `p · q` (first `p`, then `q`); `None` is zero.
  pub fn mul(&self, p: Path, q: Path) -> Option<Path> { concat(p, q) }
}

fn paths_between(u: usize, v: usize) -> Vec<Path> {
  if u == v {
    vec![Path::Idempotent(u), Path::Loop(u)]
  } else if u.abs_diff(v) == 1 {
    vec![Path::Arrow(u, v)]
  } else {
    Vec::new()
  }
}

fn concat(p: Path, q: Path) -> Option<Path> {
  if p.target() != q.source() {
    return None;
  }
  match (p, q) {
    (Path::Idempotent(_), q) => Some(q),
    (p, Path::Idempotent(_)) => Some(p),
    (Path::Arrow(u, _), Path::Arrow(_, w)) if u == w => Some(Path::Loop(u)),
    _ => None,
  }
}

/// A morphism `P_u -> P_v`: a Z/2 combination of basis paths `u -> v`.
/// Bit 0 is `e_u` (when `u = v`) or the arrow, bit 1 is the loop `X_u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Morphism(u8);

impl std::ops::Add for Morphism {
  type Output = Morphism;

  /// Sum over Z/2.
  #[allow(clippy::suspicious_arithmetic_impl)]
  fn add(self, other: Morphism) -> Morphism { Morphism(self.0 ^ other.0) }
}

impl Morphism {
  pub const ZERO: Morphism = Morphism(0);

  pub fn from_path(p: Path) -> Morphism {
    match p {
      Path::Loop(_) => Morphism(2),
      _ => Morphism(1),
    }
  }

  pub fn is_zero(self) -> bool { self.0 == 0 }

  /// The basis paths occurring in the morphism `u -> v`.
  pub fn terms(self, u: usize, v: usize) -> Vec<Path> {
    paths_between(u, v).into_iter().filter(|p| self.0 & Morphism::from_path(*p).0 != 0).collect()
  }

  /// `g ∘ f` where `f: u -> v`, `g: v -> w`.
  pub fn compose(g: Morphism, f: Morphism, u: usize, v: usize, w: usize) -> Morphism {
    let mut out = Morphism::ZERO;
    for p in f.terms(u, v) {
      for q in g.terms(v, w) {
        if let Some(r) = concat(p, q) {
          out = out + Morphism::from_path(r);
        }
      }
    }
    out
  }

  fn is_identity_on(self, u: usize, v: usize) -> bool { u == v && self.0 & 1 == 1 }
}

/// A summand `P_vertex` placed in homological degree `hdeg` with internal shift `qdeg`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Summand {
  pub vertex: usize,
  pub hdeg: i32,
  pub qdeg: i32,
}

/// A bounded complex of projectives; the differential raises `hdeg` by one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjComplex {
  m: usize,
  objects: Vec<Summand>,
  /// `(from, to) -> entry`
  differential: BTreeMap<(usize, usize), Morphism>,
}

impl ProjComplex {
  pub fn projective(m: usize, j: usize) -> Result<Self, ZigzagError> {
    check_vertex(m, j)?;
    Ok(Self { m, objects: vec![Summand { vertex: j, hdeg: 0, qdeg: 0 }], differential: BTreeMap::new() })
  }

  /// Assembles a complex from parts, checking shapes, gradings and `d² = 0`.
  pub fn from_parts(
    m: usize,
    objects: Vec<Summand>,
    entries: Vec<(usize, usize, Morphism)>,
  ) -> Result<Self, ZigzagError> {
    for s in &objects {
      check_vertex(m, s.vertex)?;
    }
    let mut differential = BTreeMap::new();
    for (a, b, f) in entries {
      if a >= objects.len() || b >= objects.len() {
        return Err(ZigzagError::Malformed(format!("entry {a}->{b} out of range")));
      }
      if !f.is_zero() {
        differential.insert((a, b), f);
      }
    }
    let c = Self { m, objects, differential };
    c.validate()?;
    Ok(c)
  }

  pub fn m(&self) -> usize { self.m }

  pub fn objects(&self) -> &[Summand] { &self.objects }

  pub fn len(&self) -> usize { self.objects.len() }

  pub fn is_empty(&self) -> bool { self.objects.is_empty() }

  pub fn entry(&self, a: usize, b: usize) -> Morphism { self.differential.get(&(a, b)).copied().unwrap_or_default() }

  pub fn validate(&self) -> Result<(), ZigzagError> {
    for (&(a, b), &f) in &self.differential {
      let (sa, sb) = (self.objects[a], self.objects[b]);
      if sb.hdeg != sa.hdeg + 1 {
        return Err(ZigzagError::Malformed(format!("entry {a}->{b} does not raise degree by one")));
      }
      for p in f.terms(sa.vertex, sb.vertex) {
        if p.degree() != sb.qdeg - sa.qdeg {
          return Err(ZigzagError::Malformed(format!("entry {a}->{b} is not homogeneous")));
        }
      }
      if f.terms(sa.vertex, sb.vertex).is_empty() {
        return Err(ZigzagError::Malformed(format!("entry {a}->{b} has no path between its vertices")));
      }
    }
    if !self.squares_to_zero() {
      return Err(ZigzagError::Malformed("d^2 != 0".into()));
    }
    Ok(())
  }

  pub fn squares_to_zero(&self) -> bool {
    let mut out: HashMap<usize, Vec<(usize, Morphism)>> = HashMap::new();
    for (&(a, b), &f) in &self.differential {
      out.entry(a).or_default().push((b, f));
    }
    for (&a, edges) in &out {
      let mut acc: HashMap<usize, Morphism> = HashMap::new();
      for &(b, f) in edges {
        for &(c, g) in out.get(&b).map(Vec::as_slice).unwrap_or(&[]) {
          let comp = Morphism::compose(g, f, self.objects[a].vertex, self.objects[b].vertex, self.objects[c].vertex);
          let e = acc.entry(c).or_default();
          *e = *e + comp;
        }
      }
      if acc.values().any(|m| !m.is_zero()) {
        return false;
      }
    }
    true
  }

  /// The twist functor along `P_i` (`sign = +1`) or its inverse (`sign = -1`).
  ///
  /// The positive twist is the cone of evaluation `P_i ⊗ Hom•(P_i, C) -> C`;
  /// the negative twist is the desuspended cone of coevaluation
  /// `C -> P_i ⊗ Hom•(C, P_i)^*`.
  pub fn twist(&self, i: usize, sign: i32) -> Result<Self, ZigzagError> {
    check_vertex(self.m, i)?;
    self.validate()?;
    Ok(if sign > 0 { self.twist_positive(i) } else { self.twist_negative(i) })
  }

  fn twist_positive(&self, i: usize) -> Self {
    let mut objects = self.objects.clone();
    let mut differential = self.differential.clone();
    // copies of P_i indexed by basis elements (s, p: i -> v_s) of Hom(P_i, C)
    let mut copy_of: HashMap<(usize, Path), usize> = HashMap::new();
    for (s, obj) in self.objects.iter().enumerate() {
      for p in paths_between(i, obj.vertex) {
        let idx = objects.len();
        objects.push(Summand { vertex: i, hdeg: obj.hdeg - 1, qdeg: obj.qdeg - p.degree() });
        copy_of.insert((s, p), idx);
        // evaluation
        differential.insert((idx, s), Morphism::from_path(p));
      }
    }
    // Hom complex differential: post-composition with d
    for (&(s, t), &f) in &self.differential {
      let (vs, vt) = (self.objects[s].vertex, self.objects[t].vertex);
      for p in paths_between(i, vs) {
        let comp = Morphism::compose(f, Morphism::from_path(p), i, vs, vt);
        for q in comp.terms(i, vt) {
          let key = (copy_of[&(s, p)], copy_of[&(t, q)]);
          toggle(&mut differential, key, Morphism(1));
        }
      }
    }
    Self { m: self.m, objects, differential }
  }

  fn twist_negative(&self, i: usize) -> Self {
    let mut objects = self.objects.clone();
    let mut differential = self.differential.clone();
    let mut copy_of: HashMap<(usize, Path), usize> = HashMap::new();
    for (s, obj) in self.objects.iter().enumerate() {
      for p in paths_between(obj.vertex, i) {
        let idx = objects.len();
        objects.push(Summand { vertex: i, hdeg: obj.hdeg + 1, qdeg: obj.qdeg + p.degree() });
        copy_of.insert((s, p), idx);
        // coevaluation
        differential.insert((s, idx), Morphism::from_path(p));
      }
    }
    // dual of pre-composition with d
    for (&(a, b), &f) in &self.differential {
      let (va, vb) = (self.objects[a].vertex, self.objects[b].vertex);
      for p in paths_between(vb, i) {
        let comp = Morphism::compose(Morphism::from_path(p), f, va, vb, i);
        for q in comp.terms(va, i) {
          let key = (copy_of[&(a, q)], copy_of[&(b, p)]);
          toggle(&mut differential, key, Morphism(1));
        }
      }
    }
    Self { m: self.m, objects, differential }
  }

  /// Cancels every invertible (idempotent) entry, leaving a minimal complex
  /// homotopy equivalent to `self`.
  pub fn gaussian_reduce(&self) -> Self {
    let n = self.objects.len();
    let mut out: Vec<HashMap<usize, Morphism>> = vec![HashMap::new(); n];
    let mut inc: Vec<HashMap<usize, ()>> = vec![HashMap::new(); n];
    for (&(a, b), &f) in &self.differential {
      out[a].insert(b, f);
      inc[b].insert(a, ());
    }
    let mut alive = vec![true; n];
    let vertex = |k: usize| self.objects[k].vertex;
    for a in 0..n {
      loop {
        if !alive[a] {
          break;
        }
        let pivot = out[a]
          .iter()
          .filter(|(&b, f)| f.is_identity_on(vertex(a), vertex(b)) && self.objects[a].qdeg == self.objects[b].qdeg)
          .map(|(&b, _)| b)
          .min_by_key(|&b| (inc[b].len(), b));
        let Some(b) = pivot else { break };
        let xs: Vec<(usize, Morphism)> =
          inc[b].keys().filter(|&&x| x != a).map(|&x| (x, out[x][&b])).collect();
        let ys: Vec<(usize, Morphism)> = out[a].iter().filter(|(&y, _)| y != b).map(|(&y, &g)| (y, g)).collect();
        for &(x, f) in &xs {
          for &(y, g) in &ys {
            // x -> b --(inverse of the identity pivot)--> a -> y
            let comp = Morphism::compose(g, f, vertex(x), vertex(b), vertex(y));
            if comp.is_zero() {
              continue;
            }
            let e = out[x].entry(y).or_default();
            *e = *e + comp;
            if e.is_zero() {
              out[x].remove(&y);
              inc[y].remove(&x);
            } else {
              inc[y].insert(x, ());
            }
          }
        }
        for v in [a, b] {
          for t in std::mem::take(&mut out[v]).into_keys() {
            inc[t].remove(&v);
          }
          for s in std::mem::take(&mut inc[v]).into_keys() {
            out[s].remove(&v);
          }
          alive[v] = false;
        }
      }
    }
    let mut new_index = vec![usize::MAX; n];
    let mut objects = Vec::new();
    for k in 0..n {
      if alive[k] {
        new_index[k] = objects.len();
        objects.push(self.objects[k]);
      }
    }
    let mut differential = BTreeMap::new();
    for a in 0..n {
      if alive[a] {
        for (&b, &f) in &out[a] {
          differential.insert((new_index[a], new_index[b]), f);
        }
      }
    }
    Self { m: self.m, objects, differential }
  }

  /// Total Z/2 dimension of the homology of `Hom•(P_i, C)`.
  pub fn hom_homology_dim(&self, i: usize) -> Result<usize, ZigzagError> {
    check_vertex(self.m, i)?;
    let mut index: HashMap<(usize, Path), usize> = HashMap::new();
    let mut degrees = Vec::new();
    for (s, obj) in self.objects.iter().enumerate() {
      for p in paths_between(i, obj.vertex) {
        index.insert((s, p), degrees.len());
        degrees.push(obj.hdeg as i64);
      }
    }
    let mut cx = Z2Complex::new(degrees);
    for (&(s, t), &f) in &self.differential {
      let (vs, vt) = (self.objects[s].vertex, self.objects[t].vertex);
      for p in paths_between(i, vs) {
        let comp = Morphism::compose(f, Morphism::from_path(p), i, vs, vt);
        for q in comp.terms(i, vt) {
          cx.toggle(index[&(s, p)], index[&(t, q)]);
        }
      }
    }
    Ok(cx.homology_dim())
  }
}

fn toggle(d: &mut BTreeMap<(usize, usize), Morphism>, key: (usize, usize), f: Morphism) {
  let e = d.entry(key).or_default();
  *e = *e + f;
  if e.is_zero() {
    d.remove(&key);
  }
}

fn check_vertex(m: usize, v: usize) -> Result<(), ZigzagError> {
  if v == 0 || v > m {
    return Err(ZigzagError::VertexOutOfRange { vertex: v, m });
  }
  Ok(())
}

/// Image of `P_j` under the braid `w`, reduced after every letter.
pub fn apply_braid(w: &BraidWord, j: usize) -> Result<ProjComplex, ZigzagError> {
  let m = w.rank();
  let mut c = ProjComplex::projective(m, j)?;
  for &g in w.letters() {
    let i = g.unsigned_abs() as usize;
    c = if g > 0 { c.twist_positive(i) } else { c.twist_negative(i) }.gaussian_reduce();
  }
  Ok(c)
}

/// `dim Hom•(P_i, σ_w(P_j))` in homology.
pub fn hf_dim(w: &BraidWord, i: usize, j: usize) -> Result<usize, ZigzagError> {
  check_vertex(w.rank(), i)?;
  apply_braid(w, j)?.hom_homology_dim(i)
}

#[cfg(test)]
mod tests {
  use super::*;

  fn bw(n: usize, l: &[i32]) -> BraidWord { BraidWord::new(n, l.to_vec()).unwrap() }

  fn dims(c: &ProjComplex) -> Vec<usize> { (1..=c.m()).map(|k| c.hom_homology_dim(k).unwrap()).collect() }

  #[test]
  fn algebra_relations() {
    let a = ZigzagAlgebra::new(4);
    assert_eq!(a.mul(Path::Arrow(1, 2), Path::Arrow(2, 1)), Some(Path::Loop(1)));
    assert_eq!(a.mul(Path::Arrow(1, 2), Path::Arrow(2, 3)), None);
    assert_eq!(a.mul(Path::Loop(2), Path::Arrow(2, 3)), None);
    assert_eq!(a.mul(Path::Arrow(3, 2), Path::Loop(2)), None);
    assert_eq!(a.mul(Path::Loop(2), Path::Loop(2)), None);
    assert_eq!(a.mul(Path::Idempotent(2), Path::Idempotent(2)), Some(Path::Idempotent(2)));
    assert_eq!(a.mul(Path::Idempotent(1), Path::Idempotent(2)), None);
  }

  #[test]
  fn algebra_dimensions_and_associativity() {
    let a = ZigzagAlgebra::new(4);
    for i in 1..=4usize {
      for j in 1..=4 {
        let expect = if i == j {
          2
        } else if i.abs_diff(j) == 1 {
          1
        } else {
          0
        };
        assert_eq!(a.paths(i, j).len(), expect);
      }
    }
    assert_eq!(a.basis().len(), 2 * 4 + 2 * 3);
    let basis = a.basis();
    for &p in &basis {
      for &q in &basis {
        for &r in &basis {
          let left = a.mul(p, q).and_then(|pq| a.mul(pq, r));
          let right = a.mul(q, r).and_then(|qr| a.mul(p, qr));
          assert_eq!(left, right);
        }
      }
    }
    // idempotents sum to the unit
    for &p in &basis {
      let hits: Vec<Path> = (1..=4).filter_map(|v| a.mul(Path::Idempotent(v), p)).collect();
      assert_eq!(hits, vec![p]);
    }
  }

  #[test]
  fn projective_examples() {
    let p = ProjComplex::projective(3, 1).unwrap();
    assert_eq!(p.len(), 1);
    assert!(p.squares_to_zero());
    assert_eq!(dims(&p), vec![2, 1, 0]);
    assert!(ProjComplex::projective(3, 4).is_err());
  }

  #[test]
  fn spherical_twist_shifts() {
    for m in 1..4 {
      for i in 1..=m {
        let t = ProjComplex::projective(m, i).unwrap().twist(i, 1).unwrap().gaussian_reduce();
        assert_eq!(t.len(), 1);
        assert_eq!(t.objects()[0].vertex, i);
        assert_eq!(t.objects()[0].hdeg.abs(), 1);
      }
    }
  }

  #[test]
  fn far_twist_is_trivial() {
    let p = ProjComplex::projective(4, 1).unwrap();
    let t = p.twist(3, 1).unwrap();
    assert_eq!(t, p);
    let t = p.twist(4, -1).unwrap();
    assert_eq!(t, p);
  }

  #[test]
  fn twist_inverse_dimensions() {
    let c = apply_braid(&bw(4, &[1, -2, 3, 2]), 2).unwrap();
    for i in 1..=3 {
      let back = c.twist(i, 1).unwrap().gaussian_reduce().twist(i, -1).unwrap().gaussian_reduce();
      assert_eq!(dims(&back), dims(&c));
    }
  }

  #[test]
  fn gaussian_reduce_examples() {
    let p = ProjComplex::projective(2, 1).unwrap();
    assert_eq!(p.gaussian_reduce(), p);
    let s = Summand { vertex: 1, hdeg: 0, qdeg: 0 };
    let c = ProjComplex::from_parts(
      2,
      vec![s, Summand { hdeg: 1, ..s }],
      vec![(0, 1, Morphism::from_path(Path::Idempotent(1)))],
    )
    .unwrap();
    assert!(c.gaussian_reduce().is_empty());
  }

  #[test]
  fn malformed_complexes_rejected() {
    let s = Summand { vertex: 1, hdeg: 0, qdeg: 0 };
    let wrong_degree =
      ProjComplex::from_parts(2, vec![s, s], vec![(0, 1, Morphism::from_path(Path::Idempotent(1)))]);
    assert!(matches!(wrong_degree, Err(ZigzagError::Malformed(_))));
    let no_path = ProjComplex::from_parts(
      3,
      vec![s, Summand { vertex: 3, hdeg: 1, qdeg: 0 }],
      vec![(0, 1, Morphism(1))],
    );
    assert!(matches!(no_path, Err(ZigzagError::Malformed(_))));
  }

  #[test]
  fn hf_dim_examples() {
    assert_eq!(hf_dim(&bw(4, &[]), 2, 2).unwrap(), 2);
    assert_eq!(hf_dim(&bw(4, &[]), 2, 3).unwrap(), 1);
    assert_eq!(hf_dim(&bw(4, &[]), 1, 3).unwrap(), 0);
    assert_eq!(hf_dim(&bw(2, &[1, 1]), 1, 1).unwrap(), 2);
    let c = apply_braid(&bw(3, &[1, -1]), 2).unwrap();
    assert_eq!(dims(&c), dims(&ProjComplex::projective(2, 2).unwrap()));
    assert!(apply_braid(&bw(3, &[]), 3).is_err());
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
      #![proptest_config(ProptestConfig::with_cases(64))]

      #[test]
      fn d_squared_and_reduction_invariance(w in word(4, 6), j in 1usize..4, i in 1usize..4, s in any::<bool>()) {
        let c = apply_braid(&w, j).unwrap();
        prop_assert!(c.validate().is_ok());
        let t = c.twist(i, if s { 1 } else { -1 }).unwrap();
        prop_assert!(t.validate().is_ok());
        let r = t.gaussian_reduce();
        prop_assert!(r.validate().is_ok());
        prop_assert_eq!(dims(&t), dims(&r));
      }

      #[test]
      fn braid_relations_at_dimension_level(w in word(5, 5), j in 1usize..5) {
        for i in 1..4i32 {
          let a = apply_braid(&w.compose(&BraidWord::new(5, vec![i, i + 1, i]).unwrap()).unwrap(), j).unwrap();
          let b = apply_braid(&w.compose(&BraidWord::new(5, vec![i + 1, i, i + 1]).unwrap()).unwrap(), j).unwrap();
          prop_assert_eq!(dims(&a), dims(&b));
        }
        let a = apply_braid(&w.compose(&BraidWord::new(5, vec![1, 3]).unwrap()).unwrap(), j).unwrap();
        let b = apply_braid(&w.compose(&BraidWord::new(5, vec![3, 1]).unwrap()).unwrap(), j).unwrap();
        prop_assert_eq!(dims(&a), dims(&b));
      }
    }
  }
}
