//! Chekanov–Eliashberg dgas of Legendrian links from their fronts.
//!
//! A front is resolved into a Lagrangian projection whose crossings are the
//! front crossings plus one loop crossing per right cusp. The resolved
//! picture keeps the strand order of the front, so immersed polygons are
//! found by sweeping leftwards from the positive corner: the disk is a tree
//! of sheets, each bounded above and below by a strand, which turn convex
//! corners at crossings, may split around a right-cusp loop and end at left
//! cusps.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::dga::{Dga, WordSum};
use crate::front::{FrontData, FrontError, FrontEvent, FrontWord};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LchError {
  #[error(transparent)]
  Front(#[from] FrontError),
  #[error("malformed diagram: {0}")]
  Malformed(String),
  #[error("diagram has no front resolution to read disks from")]
  NoFront,
  #[error("generator {generator}: {what} exceeds the enumeration bound {bound}")]
  BoundExceeded { generator: String, what: &'static str, bound: usize },
}

/// Limits on the disk search; exceeding them is an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBound {
  /// Maximal number of times a disk may cover one quadrant of a crossing.
  pub quadrant_multiplicity: usize,
  /// Maximal number of disks with a fixed positive corner.
  pub disks: usize,
}

impl Default for EnumerationBound {
  fn default() -> Self { Self { quadrant_multiplicity: 8, disks: 1 << 20 } }
}

/// Where a crossing of the resolved diagram comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossingKind {
  Front,
  RightCusp,
}

/// Half-edge slots are numbered counterclockwise from the upper right: NE, NW, SW, SE.
/// Quadrant `q` lies between slots `q` and `q + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
  pub kind: CrossingKind,
  /// Front event the crossing comes from.
  pub event: usize,
  /// Slots of the overcrossing strand.
  pub over: (usize, usize),
  /// The two opposite quadrants with positive Reeb sign.
  pub positive: (usize, usize),
  /// Link components of the over and under strands.
  pub components: (usize, usize),
  /// Opposite half-edge `(crossing, slot)` for each slot.
  pub links: [(usize, usize); 4],
}

/// Lagrangian projection as a 4-valent planar map (rotation system).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagrangianDiagram {
  crossings: Vec<Crossing>,
  front: Option<FrontWord>,
}

impl LagrangianDiagram {
  /// Accepts a diagram given directly; only its combinatorics are validated.
  pub fn from_crossings(crossings: Vec<Crossing>) -> Result<Self, LchError> {
    let d = Self { crossings, front: None };
    d.validate()?;
    Ok(d)
  }

  pub fn crossings(&self) -> &[Crossing] { &self.crossings }

  pub fn front(&self) -> Option<&FrontWord> { self.front.as_ref() }

  pub fn edge_count(&self) -> usize { self.crossings.len() * 2 }

  /// Face id of every half-edge `4 * crossing + slot`, taking each half-edge
  /// as the start of a boundary edge with the face on its left. The corner of
  /// that face at the crossing is the quadrant with the same index as the slot.
  pub fn faces(&self) -> Vec<usize> {
    let n = self.crossings.len() * 4;
    let mut face = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
      if face[start] != usize::MAX {
        continue;
      }
      let mut h = start;
      while face[h] == usize::MAX {
        face[h] = count;
        let (c, s) = self.crossings[h / 4].links[h % 4];
        // turn clockwise at the far end so faces sit on the left of travel
        h = c * 4 + (s + 3) % 4;
      }
      count += 1;
    }
    face
  }

  pub fn face_count(&self) -> usize { self.faces().iter().max().map_or(0, |&m| m + 1) }

  pub fn connected_components(&self) -> usize {
    let n = self.crossings.len();
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
      if seen[s] {
        continue;
      }
      count += 1;
      let mut stack = vec![s];
      seen[s] = true;
      while let Some(c) = stack.pop() {
        for &(d, _) in &self.crossings[c].links {
          if !seen[d] {
            seen[d] = true;
            stack.push(d);
          }
        }
      }
    }
    count
  }

  pub fn validate(&self) -> Result<(), LchError> {
    let n = self.crossings.len();
    for (c, x) in self.crossings.iter().enumerate() {
      for (s, &(d, t)) in x.links.iter().enumerate() {
        if d >= n || t >= 4 {
          return Err(LchError::Malformed(format!("crossing {c} slot {s} links outside the diagram")));
        }
        if self.crossings[d].links[t] != (c, s) || (d, t) == (c, s) {
          return Err(LchError::Malformed(format!("crossing {c} slot {s} is not paired consistently")));
        }
      }
      let (a, b) = x.positive;
      if a >= 4 || b != (a + 2) % 4 {
        return Err(LchError::Malformed(format!("crossing {c} positive quadrants are not opposite")));
      }
      let (p, q) = x.over;
      if p >= 4 || q != (p + 2) % 4 {
        return Err(LchError::Malformed(format!("crossing {c} overstrand does not pass straight through")));
      }
    }
    let (v, e, f) = (n as i64, self.edge_count() as i64, self.face_count() as i64);
    if v - e + f != 2 * self.connected_components() as i64 {
      return Err(LchError::Malformed(format!("Euler characteristic check fails: V={v} E={e} F={f}")));
    }
    Ok(())
  }

  /// Plain-text dump: one line per crossing with its rotation data.
  pub fn dump(&self) -> String { self.to_string() }
}

impl fmt::Display for LagrangianDiagram {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    writeln!(f, "crossings {}", self.crossings.len())?;
    writeln!(f, "# id kind event over positive components | NE NW SW SE")?;
    for (c, x) in self.crossings.iter().enumerate() {
      let kind = match x.kind {
        CrossingKind::Front => "front",
        CrossingKind::RightCusp => "cusp",
      };
      write!(
        f,
        "{c} {kind} {} {}-{} {}-{} {}-{} |",
        x.event, x.over.0, x.over.1, x.positive.0, x.positive.1, x.components.0, x.components.1
      )?;
      for (d, t) in x.links {
        write!(f, " {d}.{t}")?;
      }
      writeln!(f)?;
    }
    Ok(())
  }
}

impl FromStr for LagrangianDiagram {
  type Err = LchError;

  fn from_str(s: &str) -> Result<Self, LchError> {
    let bad = |m: &str| LchError::Malformed(m.to_string());
    let pair = |t: &str, sep: char| -> Result<(usize, usize), LchError> {
      let (a, b) = t.split_once(sep).ok_or_else(|| bad(t))?;
      Ok((a.parse().map_err(|_| bad(t))?, b.parse().map_err(|_| bad(t))?))
    };
    let mut crossings = Vec::new();
    for raw in s.lines() {
      let line = raw.split('#').next().unwrap().trim();
      if line.is_empty() || line.starts_with("crossings") {
        continue;
      }
      let (head, tail) = line.split_once('|').ok_or_else(|| bad(line))?;
      let h: Vec<&str> = head.split_whitespace().collect();
      if h.len() != 6 || h[0].parse::<usize>().ok() != Some(crossings.len()) {
        return Err(bad(line));
      }
      let kind = match h[1] {
        "front" => CrossingKind::Front,
        "cusp" => CrossingKind::RightCusp,
        _ => return Err(bad(h[1])),
      };
      let links: Vec<(usize, usize)> = tail.split_whitespace().map(|t| pair(t, '.')).collect::<Result<_, _>>()?;
      let links: [(usize, usize); 4] = links.try_into().map_err(|_| bad(line))?;
      crossings.push(Crossing {
        kind,
        event: h[2].parse().map_err(|_| bad(h[2]))?,
        over: pair(h[3], '-')?,
        positive: pair(h[4], '-')?,
        components: pair(h[5], '-')?,
        links,
      });
    }
    LagrangianDiagram::from_crossings(crossings)
  }
}

const NE: usize = 0;
const NW: usize = 1;
const SW: usize = 2;
const SE: usize = 3;

/// Resolves a front into its Lagrangian projection: left cusps are smoothed,
/// right cusps become small loops with one crossing.
pub fn resolve_front(front: &FrontWord) -> Result<LagrangianDiagram, LchError> {
  let data = front.data()?;
  let mut crossings: Vec<Crossing> = Vec::new();
  // open ends by position: either a half-edge waiting for its partner or a left cusp stub
  #[derive(Clone, Copy)]
  enum End {
    Half(usize, usize),
    Cusp(usize),
  }
  let mut cusp_stub: Vec<Option<(usize, usize)>> = Vec::new();
  let mut open: Vec<End> = Vec::new();
  let attach = |end: End, here: (usize, usize), crossings: &mut Vec<Crossing>, stubs: &mut Vec<Option<(usize, usize)>>| match end {
    End::Half(c, s) => {
      crossings[c].links[s] = here;
      crossings[here.0].links[here.1] = (c, s);
    }
    End::Cusp(id) => match stubs[id] {
      None => stubs[id] = Some(here),
      Some((c, s)) => {
        crossings[c].links[s] = here;
        crossings[here.0].links[here.1] = (c, s);
      }
    },
  };
  for (i, &ev) in front.events().iter().enumerate() {
    let slots = &data.slots[i];
    match ev {
      FrontEvent::LeftCusp(k) => {
        let id = cusp_stub.len();
        cusp_stub.push(None);
        open.insert(k - 1, End::Cusp(id));
        open.insert(k - 1, End::Cusp(id));
      }
      FrontEvent::Crossing(k) | FrontEvent::RightCusp(k) => {
        let c = crossings.len();
        let is_cusp = matches!(ev, FrontEvent::RightCusp(_));
        crossings.push(Crossing {
          kind: if is_cusp { CrossingKind::RightCusp } else { CrossingKind::Front },
          event: i,
          over: (NW, SE),
          positive: (NW, SE),
          components: (data.component[slots[k]], data.component[slots[k - 1]]),
          links: [(c, NE); 4],
        });
        let (lower, upper) = (open[k - 1], open[k]);
        attach(upper, (c, NW), &mut crossings, &mut cusp_stub);
        attach(lower, (c, SW), &mut crossings, &mut cusp_stub);
        if is_cusp {
          crossings[c].links[NE] = (c, SE);
          crossings[c].links[SE] = (c, NE);
          open.drain(k - 1..=k);
        } else {
          open[k] = End::Half(c, NE);
          open[k - 1] = End::Half(c, SE);
        }
      }
    }
  }
  let mut d = LagrangianDiagram::from_crossings(crossings)?;
  d.front = Some(front.clone());
  Ok(d)
}

/// Degrees of the generators of a resolved diagram, in crossing order, and the grading modulus.
///
/// A front crossing has degree `μ(strand of more negative slope) − μ(other strand)`;
/// a right cusp has degree 1.
pub fn gradings(d: &LagrangianDiagram) -> Result<(Vec<i64>, i64), LchError> {
  let front = d.front.as_ref().ok_or(LchError::NoFront)?;
  let data = front.data()?;
  let degrees = d.crossings.iter().map(|x| generator_degree(front, &data, x.event)).collect();
  Ok((degrees, data.modulus))
}

fn generator_degree(front: &FrontWord, data: &FrontData, event: usize) -> i64 {
  let deg = match front.events()[event] {
    FrontEvent::Crossing(k) => {
      let s = &data.slots[event];
      data.potential[s[k]] - data.potential[s[k - 1]]
    }
    _ => 1,
  };
  if data.modulus > 0 { deg.rem_euclid(data.modulus) } else { deg }
}

/// Generator names: crossings `c1, c2, ...` and right cusps `r1, r2, ...` in front order.
pub fn generator_names(front: &FrontWord) -> Vec<String> {
  let (mut c, mut r) = (0, 0);
  front
    .events()
    .iter()
    .filter_map(|ev| match ev {
      FrontEvent::Crossing(_) => {
        c += 1;
        Some(format!("c{c}"))
      }
      FrontEvent::RightCusp(_) => {
        r += 1;
        Some(format!("r{r}"))
      }
      FrontEvent::LeftCusp(_) => None,
    })
    .collect()
}

/// The Chekanov–Eliashberg dga of a resolved front. Each word lists the
/// negative corners of a disk counterclockwise from its positive corner.
pub fn differential(d: &LagrangianDiagram) -> Result<Dga, LchError> { differential_with(d, EnumerationBound::default()) }

pub fn differential_with(d: &LagrangianDiagram, bound: EnumerationBound) -> Result<Dga, LchError> {
  let front = d.front.as_ref().ok_or(LchError::NoFront)?;
  let (degrees, modulus) = gradings(d)?;
  let names = generator_names(front);
  let generator_at: HashMap<usize, usize> = d.crossings.iter().enumerate().map(|(g, x)| (x.event, g)).collect();
  let mut boundary = Vec::with_capacity(names.len());
  for (g, x) in d.crossings.iter().enumerate() {
    let k = front.events()[x.event].position();
    let mut search = DiskSearch { front, generator_at: &generator_at, bound, memo: HashMap::new() };
    let disks = search.sheet(x.event, k + 1, k).map_err(|what| LchError::BoundExceeded {
      generator: names[g].clone(),
      what,
      bound: if what == "disk count" { bound.disks } else { bound.quadrant_multiplicity },
    })?;
    for w in disks.iter() {
      for &h in w {
        if w.iter().filter(|&&x| x == h).count() > bound.quadrant_multiplicity {
          return Err(LchError::BoundExceeded { generator: names[g].clone(), what: "quadrant multiplicity", bound: bound.quadrant_multiplicity });
        }
      }
    }
    // the sweep collects corners clockwise from the positive corner
    let mut sum = WordSum::from_words(disks.iter().map(|w| w.iter().rev().copied().collect()));
    if x.kind == CrossingKind::RightCusp {
      sum.toggle(Vec::new());
    }
    boundary.push(sum);
  }
  Ok(Dga::new(names, degrees, boundary, modulus).expect("generator names are distinct"))
}

/// Convenience: front to dga.
pub fn front_dga(front: &FrontWord) -> Result<Dga, LchError> { differential(&resolve_front(front)?) }

/// Shared list of words found for one sub-search.
type Words = std::rc::Rc<Vec<Vec<usize>>>;

struct DiskSearch<'a> {
  front: &'a FrontWord,
  generator_at: &'a HashMap<usize, usize>,
  bound: EnumerationBound,
  memo: HashMap<(usize, usize, usize), Words>,
}

impl DiskSearch<'_> {
  /// Words of all sheets lying just left of event `event` between the
  /// boundary positions `up > lo`, continued leftwards until they close.
  ///
  /// A sheet reads its upper corners right to left, then whatever it splits
  /// into, then its lower corners left to right. At a right cusp inside the
  /// sheet the disk may fold along either cusp strand, which splits the
  /// sheet in two and puts the cusp generator between them.
  fn sheet(&mut self, event: usize, up: usize, lo: usize) -> Result<std::rc::Rc<Vec<Vec<usize>>>, &'static str> {
    if let Some(r) = self.memo.get(&(event, up, lo)) {
      return Ok(r.clone());
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    if event > 0 {
      let e = event - 1;
      match self.front.events()[e] {
        FrontEvent::LeftCusp(k) => {
          if (up, lo) == (k + 1, k) {
            out.push(Vec::new());
          } else if ![k, k + 1].contains(&up) && ![k, k + 1].contains(&lo) {
            let shift = |p: usize| if p > k + 1 { p - 2 } else { p };
            out.extend(self.sheet(e, shift(up), shift(lo))?.iter().cloned());
          }
        }
        FrontEvent::RightCusp(k) => {
          let shift = |p: usize| if p >= k { p + 2 } else { p };
          let (u, l) = (shift(up), shift(lo));
          out.extend(self.sheet(e, u, l)?.iter().cloned());
          if l < k && k + 1 < u {
            // split around the loop; each sheet either follows its loop strand
            // through the loop crossing or turns a corner there
            let r = self.generator_at[&e];
            for (top_lo, bottom_up, letters) in [(k + 1, k + 1, 1), (k, k, 1), (k, k + 1, 0), (k + 1, k, 2)] {
              let top = self.sheet(e, u, top_lo)?;
              let bottom = self.sheet(e, bottom_up, l)?;
              for w1 in top.iter() {
                for w2 in bottom.iter() {
                  if out.len() >= self.bound.disks {
                    return Err("disk count");
                  }
                  let mut w = w1.clone();
                  w.extend(std::iter::repeat_n(r, letters));
                  w.extend_from_slice(w2);
                  out.push(w);
                }
              }
            }
          }
        }
        FrontEvent::Crossing(k) => {
          let g = self.generator_at[&e];
          let follow = |p: usize| if p == k { k + 1 } else if p == k + 1 { k } else { p };
          let mut up_moves = vec![(follow(up), false)];
          if up == k {
            up_moves.push((k, true));
          }
          let mut lo_moves = vec![(follow(lo), false)];
          if lo == k + 1 {
            lo_moves.push((k + 1, true));
          }
          for &(u, uc) in &up_moves {
            for &(l, lc) in &lo_moves {
              if u <= l {
                continue;
              }
              for w in self.sheet(e, u, l)?.iter() {
                let mut v = Vec::with_capacity(w.len() + 2);
                if uc {
                  v.push(g);
                }
                v.extend_from_slice(w);
                if lc {
                  v.push(g);
                }
                out.push(v);
              }
            }
          }
        }
      }
    }
    if out.len() > self.bound.disks {
      return Err("disk count");
    }
    let out = std::rc::Rc::new(out);
    self.memo.insert((event, up, lo), out.clone());
    Ok(out)
  }
}

#[cfg(test)]
mod tests {
  use std::collections::BTreeSet;

  use super::*;

  fn front(s: &str) -> FrontWord { s.parse().unwrap() }

  #[test]
  fn unknot() {
    let d = resolve_front(&front("L1 R1")).unwrap();
    assert_eq!(d.crossings().len(), 1);
    assert_eq!(d.face_count(), 3);
    let (deg, modulus) = gradings(&d).unwrap();
    assert_eq!((deg, modulus), (vec![1], 0));
    let a = differential(&d).unwrap();
    assert!(a.boundary(0).is_zero());
  }

  #[test]
  fn trefoil() {
    for f in ["L1 L3 X2 X2 X2 R3 R1", "L1 L3 X2 X2 X2 R1 R1"] {
      let d = resolve_front(&front(f)).unwrap();
      assert_eq!(d.crossings().len(), 5);
      let a = differential(&d).unwrap();
      assert!(a.check().passed(), "{:?}", a.check());
      let mut degs = a.degrees().to_vec();
      degs.sort();
      assert_eq!(degs, vec![0, 0, 0, 1, 1]);
      assert_eq!(a.augmentations().unwrap().len(), 5);
      for g in 0..a.len() {
        if a.degrees()[g] == 1 {
          assert!(a.boundary(g).words().any(|w| w.is_empty()));
        }
      }
    }
  }

  #[test]
  fn malformed_fronts() {
    assert!(matches!("L1 X2 R1".parse::<FrontWord>(), Err(FrontError::BadStrand { .. })));
  }

  #[test]
  fn dump_roundtrip() {
    let d = resolve_front(&front("L1 L3 X2 X2 X2 R3 R1")).unwrap();
    let back: LagrangianDiagram = d.dump().parse().unwrap();
    assert_eq!(back.crossings(), d.crossings());
    assert!(back.front().is_none());
    assert_eq!(differential(&back), Err(LchError::NoFront));
  }

  #[test]
  fn rejects_bad_direct_diagrams() {
    let d = resolve_front(&front("L1 R1")).unwrap();
    let mut x = d.crossings().to_vec();
    x[0].positive = (1, 2);
    assert!(LagrangianDiagram::from_crossings(x).is_err());
    let mut x = d.crossings().to_vec();
    x[0].links[0] = (0, 1);
    assert!(LagrangianDiagram::from_crossings(x).is_err());
  }

  #[test]
  fn zigzag_gives_cyclic_grading() {
    let a = front_dga(&front("L1 L2 R3 R1")).unwrap();
    assert_eq!(a.modulus(), 2);
    assert!(a.check().passed());
    assert!(a.augmentations().unwrap().is_empty());
  }

  #[test]
  fn tiny_bound_is_reported() {
    let d = resolve_front(&front("L1 L3 X2 X2 X2 R3 R1")).unwrap();
    let r = differential_with(&d, EnumerationBound { quadrant_multiplicity: 8, disks: 1 });
    assert!(matches!(r, Err(LchError::BoundExceeded { .. })));
    let names: BTreeSet<String> = generator_names(d.front().unwrap()).into_iter().collect();
    assert_eq!(names.len(), 5);
  }
}
