//! Geometric intersection numbers of the standard arcs `b_1..b_m` under the
//! braid action on the punctured disk.
//!
//! Curves are stored by their normal coordinates with respect to a fixed
//! ideal triangulation of the sphere. The marked points `p_1..p_{m+1}` sit on
//! the real line; two auxiliary points `p_0` and `p_{m+2}` sit outside the
//! disk at either end, and `∞` is the remaining vertex. Edges are
//!
//! * `b_k`: the segment `p_k p_{k+1}`, `k = 0..=m+1`,
//! * `U_k`, `D_k`: vertical rays from `p_k` up (resp. down) to `∞`.
//!
//! Faces are the triangles `(U_k, b_k, U_{k+1})`, `(D_k, b_k, D_{k+1})` and
//! two bigons `(U_0, D_0)`, `(U_{m+2}, D_{m+2})` at the ends. The auxiliary
//! points keep every half-twist away from the bigons, so each twist is four
//! diagonal flips followed by a relabelling; a flip replaces the diagonal
//! `e` of a quadrilateral with sides `a, b, c, d` by `max(a + c, b + d) - e`.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::braid::BraidWord;
use crate::scalar::Coordinate;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArcError {
  #[error("arc index {index} out of range 1..={max}")]
  IndexOutOfRange { index: usize, max: usize },
  #[error("strand count mismatch: lamination has {0}, braid has {1}")]
  StrandMismatch(usize, usize),
  #[error("invalid normal coordinates: {0}")]
  InvalidCoordinates(String),
}

/// Normal coordinates of a multicurve in the `(m+1)`-punctured disk.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lamination<T> {
  strands: usize,
  /// `b[k]` for `k = 0..=strands`.
  b: Vec<T>,
  /// `u[k]`, `d[k]` for `k = 0..=strands + 1`.
  u: Vec<T>,
  d: Vec<T>,
}

impl<T: Coordinate> Lamination<T> {
  pub fn empty(strands: usize) -> Self {
    Self {
      strands,
      b: vec![T::zero(); strands + 1],
      u: vec![T::zero(); strands + 2],
      d: vec![T::zero(); strands + 2],
    }
  }

  /// Builds a lamination from raw coordinates, checking the face conditions.
  pub fn from_coordinates(strands: usize, b: Vec<T>, u: Vec<T>, d: Vec<T>) -> Result<Self, ArcError> {
    if b.len() != strands + 1 || u.len() != strands + 2 || d.len() != strands + 2 {
      return Err(ArcError::InvalidCoordinates("wrong number of coordinates".into()));
    }
    let lam = Self { strands, b, u, d };
    lam.validate()?;
    Ok(lam)
  }

  /// The curve bounding a regular neighbourhood of the arc `b_i`.
  pub fn boundary_curve(strands: usize, i: usize) -> Result<Self, ArcError> {
    check_arc(strands, i)?;
    let mut lam = Self::empty(strands);
    let one = T::one();
    lam.u[i] = one.clone();
    lam.d[i] = one.clone();
    lam.u[i + 1] = one.clone();
    lam.d[i + 1] = one.clone();
    lam.b[i - 1] = one.clone();
    lam.b[i + 1] = one;
    Ok(lam)
  }

  pub fn strands(&self) -> usize { self.strands }

  /// Intersection count with the segment `b_k` (`k = 0..=strands`; 1..m are the arcs).
  pub fn segment(&self, k: usize) -> &T { &self.b[k] }

  pub fn up(&self, k: usize) -> &T { &self.u[k] }

  pub fn down(&self, k: usize) -> &T { &self.d[k] }

  /// Intersection count with the full vertical line through marked point `k`.
  pub fn vertical(&self, k: usize) -> T { self.u[k].clone() + self.d[k].clone() }

  pub fn is_empty(&self) -> bool {
    self.b.iter().chain(&self.u).chain(&self.d).all(|x| x.is_zero())
  }

  /// Checks non-negativity, parity and the triangle inequalities on every face.
  pub fn validate(&self) -> Result<(), ArcError> {
    let n = self.strands;
    for x in self.b.iter().chain(&self.u).chain(&self.d) {
      if x.is_negative() {
        return Err(ArcError::InvalidCoordinates(format!("negative coordinate {x}")));
      }
    }
    let tri = |x: &T, y: &T, z: &T, name: &str, k: usize| -> Result<(), ArcError> {
      let s = x.clone() + y.clone() + z.clone();
      if s.is_odd() || *x > y.clone() + z.clone() || *y > x.clone() + z.clone() || *z > x.clone() + y.clone() {
        return Err(ArcError::InvalidCoordinates(format!("face {name}{k} = ({x}, {y}, {z})")));
      }
      Ok(())
    };
    for k in 0..=n {
      tri(&self.u[k], &self.b[k], &self.u[k + 1], "A", k)?;
      tri(&self.d[k], &self.b[k], &self.d[k + 1], "B", k)?;
    }
    if self.u[0] != self.d[0] || self.u[n + 1] != self.d[n + 1] {
      return Err(ArcError::InvalidCoordinates("end bigon mismatch".into()));
    }
    Ok(())
  }

  /// Normal position is canonical, so isotopy is coordinate equality.
  pub fn is_isotopic(&self, other: &Self) -> bool { self == other }

  /// Image under the half-twist along `b_i` (`sign = +1`) or its inverse.
  pub fn act_half_twist(&self, i: usize, sign: i32) -> Result<Self, ArcError> {
    check_arc(self.strands, i)?;
    self.validate()?;
    Ok(self.twist_unchecked(i, sign > 0))
  }

  fn twist_unchecked(&self, i: usize, positive: bool) -> Self {
    // The negative twist is the positive one conjugated by the reflection in
    // the real line, which swaps the roles of `u` and `d`.
    let (up, down) = if positive { (&self.u, &self.d) } else { (&self.d, &self.u) };
    let b = &self.b;
    let max = |x: T, y: T| if x >= y { x } else { y };
    let c = |v: &T| v.clone();

    // flip D_i in (D_{i-1}, b_{i-1}, D_i) ∪ (D_i, b_i, D_{i+1})
    let p = max(c(&b[i - 1]) + c(&down[i + 1]), c(&b[i]) + c(&down[i - 1])) - c(&down[i]);
    // flip b_{i-1} in (U_{i-1}, b_{i-1}, U_i) ∪ (b_{i-1}, b_i, P)
    let x = max(c(&up[i - 1]) + c(&b[i]), p.clone() + c(&up[i])) - c(&b[i - 1]);
    // flip U_{i+1} in (U_i, b_i, U_{i+1}) ∪ (U_{i+1}, b_{i+1}, U_{i+2})
    let r = max(c(&b[i]) + c(&up[i + 2]), c(&b[i + 1]) + c(&up[i])) - c(&up[i + 1]);
    // flip b_{i+1} in (b_i, b_{i+1}, R) ∪ (D_{i+1}, b_{i+1}, D_{i+2})
    let y = max(c(&b[i]) + c(&down[i + 2]), c(&down[i + 1]) + r.clone()) - c(&b[i + 1]);

    let mut nu = up.clone();
    let mut nd = down.clone();
    let mut nb = b.clone();
    nu[i] = x;
    nu[i + 1] = up[i].clone();
    nd[i] = down[i + 1].clone();
    nd[i + 1] = y;
    nb[i - 1] = p;
    nb[i + 1] = r;
    let (u, d) = if positive { (nu, nd) } else { (nd, nu) };
    Self { strands: self.strands, b: nb, u, d }
  }

  /// Applies the letters of `w` from left to right.
  pub fn act_braid(&self, w: &BraidWord) -> Result<Self, ArcError> {
    if w.strands() != self.strands {
      return Err(ArcError::StrandMismatch(self.strands, w.strands()));
    }
    self.validate()?;
    let mut cur = self.clone();
    for &g in w.letters() {
      cur = cur.twist_unchecked(g.unsigned_abs() as usize, g > 0);
    }
    Ok(cur)
  }
}

fn check_arc(strands: usize, i: usize) -> Result<(), ArcError> {
  if i == 0 || i + 1 > strands {
    return Err(ArcError::IndexOutOfRange { index: i, max: strands.saturating_sub(1) });
  }
  Ok(())
}

/// A non-negative half-integer stored as twice its value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger<T> {
  twice: T,
}

impl<T: Coordinate> HalfInteger<T> {
  pub fn from_twice(twice: T) -> Self { Self { twice } }

  pub fn from_integer(v: T) -> Self { Self { twice: v.clone() + v } }

  pub fn twice_value(&self) -> &T { &self.twice }
}

impl<T: Coordinate> fmt::Display for HalfInteger<T> {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let two = T::one() + T::one();
    if self.twice.is_even() {
      write!(f, "{}", self.twice.clone() / two)
    } else {
      write!(f, "{}/2", self.twice)
    }
  }
}

/// `I(b_i, f_w(b_j))`: the arc-vs-arc intersection number, where shared
/// endpoints count one half and an arc meets itself once.
pub fn arc_intersection_generic<T: Coordinate>(w: &BraidWord, i: usize, j: usize) -> Result<HalfInteger<T>, ArcError> {
  let n = w.strands();
  check_arc(n, i)?;
  check_arc(n, j)?;
  let image = Lamination::<T>::boundary_curve(n, j)?.act_braid(w)?;
  if image.is_isotopic(&Lamination::boundary_curve(n, i)?) {
    return Ok(HalfInteger::from_integer(T::one()));
  }
  // each interior crossing of the arcs gives two crossings of the
  // neighbourhood boundary with b_i, each shared endpoint gives one
  Ok(HalfInteger::from_twice(image.segment(i).clone()))
}

/// [`arc_intersection_generic`] with arbitrary-precision coordinates.
pub fn arc_intersection(w: &BraidWord, i: usize, j: usize) -> Result<HalfInteger<BigInt>, ArcError> {
  arc_intersection_generic::<BigInt>(w, i, j)
}
