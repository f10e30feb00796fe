//! Front projections of Legendrian links encoded as event words, and the
//! classical data read off them.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FrontError {
  #[error("event {index} ({event}) references a missing strand; {strands} strands present")]
  BadStrand { index: usize, event: FrontEvent, strands: usize },
  #[error("front ends with {0} open strands")]
  Unclosed(usize),
  #[error("component has conflicting labels")]
  ConflictingLabels,
  #[error("line {line}: {msg}")]
  Parse { line: usize, msg: String },
}

/// One event of a front read from left to right. Strand positions count
/// from the bottom, starting at 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FrontEvent {
  /// Left cusp creating strands `k, k+1`.
  LeftCusp(usize),
  /// Crossing of strands `k, k+1`.
  Crossing(usize),
  /// Right cusp joining strands `k, k+1`.
  RightCusp(usize),
}

impl FrontEvent {
  pub fn position(&self) -> usize {
    match *self {
      FrontEvent::LeftCusp(k) | FrontEvent::Crossing(k) | FrontEvent::RightCusp(k) => k,
    }
  }
}

impl fmt::Display for FrontEvent {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match self {
      FrontEvent::LeftCusp(k) => write!(f, "L {k}"),
      FrontEvent::Crossing(k) => write!(f, "X {k}"),
      FrontEvent::RightCusp(k) => write!(f, "R {k}"),
    }
  }
}

/// Component role in a two-level stacked link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
  Lower,
  Upper,
}

impl fmt::Display for Level {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    f.write_str(match self {
      Level::Lower => "lower",
      Level::Upper => "upper",
    })
  }
}

/// A front as a sequence of events, with optional component labels on left cusps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontWord {
  events: Vec<FrontEvent>,
  labels: Vec<Option<Level>>,
}

/// Strand bookkeeping of a valid front.
///
/// An arc runs from a left cusp to a right cusp; crossings do not break it.
#[derive(Clone, Debug)]
pub struct FrontData {
  /// `slots[i]` lists arcs by position just left of event `i`; the last entry is empty.
  pub slots: Vec<Vec<usize>>,
  /// For every arc, its link component.
  pub component: Vec<usize>,
  /// Maslov potential of every arc, relative to the first arc of its component.
  pub potential: Vec<i64>,
  /// `2r` reduced over all components (0 when every rotation number vanishes).
  pub modulus: i64,
  /// Per-component label, if given.
  pub component_labels: Vec<Option<Level>>,
  /// Horizontal direction of travel of every arc under the default orientation (+1 rightward).
  pub direction: Vec<i64>,
  /// Cusps as `(event, lower arc, upper arc)`.
  pub cusps: Vec<(usize, usize, usize)>,
}

impl FrontData {
  pub fn components(&self) -> usize { self.component_labels.len() }
}

impl FrontWord {
  pub fn new(events: Vec<FrontEvent>) -> Result<Self, FrontError> {
    let labels = vec![None; events.len()];
    Self::with_labels(events, labels)
  }

  /// `labels[i]` is read only when event `i` is a left cusp.
  pub fn with_labels(events: Vec<FrontEvent>, labels: Vec<Option<Level>>) -> Result<Self, FrontError> {
    assert_eq!(events.len(), labels.len());
    let w = Self { events, labels };
    w.data()?;
    Ok(w)
  }

  pub fn events(&self) -> &[FrontEvent] { &self.events }

  pub fn labels(&self) -> &[Option<Level>] { &self.labels }

  pub fn len(&self) -> usize { self.events.len() }

  pub fn is_empty(&self) -> bool { self.events.is_empty() }

  pub fn crossings(&self) -> usize { self.events.iter().filter(|e| matches!(e, FrontEvent::Crossing(_))).count() }

  pub fn right_cusps(&self) -> usize { self.events.iter().filter(|e| matches!(e, FrontEvent::RightCusp(_))).count() }

  /// The sub-front of one link component, and for every event its index in
  /// the sub-front (`None` when the event is dropped).
  pub fn restrict_to_component(&self, comp: usize) -> Result<(FrontWord, Vec<Option<usize>>), FrontError> {
    let data = self.data()?;
    let mut events = Vec::new();
    let mut labels = Vec::new();
    let mut map = Vec::with_capacity(self.events.len());
    for (i, &ev) in self.events.iter().enumerate() {
      let (before, k) = match ev {
        FrontEvent::LeftCusp(k) => (&data.slots[i + 1], k),
        FrontEvent::Crossing(k) | FrontEvent::RightCusp(k) => (&data.slots[i], k),
      };
      let keep = |a: usize| data.component[a] == comp;
      let (lo, hi) = (before[k - 1], before[k]);
      if !(keep(lo) && keep(hi)) {
        map.push(None);
        continue;
      }
      let pos = before[..k - 1].iter().filter(|&&a| keep(a)).count() + 1;
      map.push(Some(events.len()));
      events.push(match ev {
        FrontEvent::LeftCusp(_) => FrontEvent::LeftCusp(pos),
        FrontEvent::Crossing(_) => FrontEvent::Crossing(pos),
        FrontEvent::RightCusp(_) => FrontEvent::RightCusp(pos),
      });
      labels.push(self.labels[i]);
    }
    Ok((FrontWord::with_labels(events, labels)?, map))
  }

  /// Validates strand bookkeeping and computes arcs, components and potentials.
  pub fn data(&self) -> Result<FrontData, FrontError> {
    let mut slots = Vec::with_capacity(self.events.len() + 1);
    let mut cur: Vec<usize> = Vec::new();
    let mut arcs = 0usize;
    let mut cusps = Vec::new();
    let mut arc_label: Vec<Option<Level>> = Vec::new();
    for (i, &ev) in self.events.iter().enumerate() {
      slots.push(cur.clone());
      let bad = || FrontError::BadStrand { index: i, event: ev, strands: cur.len() };
      match ev {
        FrontEvent::LeftCusp(k) => {
          if k == 0 || k > cur.len() + 1 {
            return Err(bad());
          }
          let (lo, hi) = (arcs, arcs + 1);
          arcs += 2;
          arc_label.extend([self.labels[i]; 2]);
          cur.insert(k - 1, hi);
          cur.insert(k - 1, lo);
          cusps.push((i, lo, hi));
        }
        FrontEvent::Crossing(k) => {
          if k == 0 || k + 1 > cur.len() {
            return Err(bad());
          }
          cur.swap(k - 1, k);
        }
        FrontEvent::RightCusp(k) => {
          if k == 0 || k + 1 > cur.len() {
            return Err(bad());
          }
          cusps.push((i, cur[k - 1], cur[k]));
          cur.drain(k - 1..=k);
        }
      }
    }
    if !cur.is_empty() {
      return Err(FrontError::Unclosed(cur.len()));
    }
    slots.push(cur);

    // potentials and orientations by propagation across cusps
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); arcs];
    for &(_, lo, hi) in &cusps {
      adj[lo].push((hi, 1));
      adj[hi].push((lo, -1));
    }
    let mut component = vec![usize::MAX; arcs];
    let mut potential = vec![0i64; arcs];
    let mut direction = vec![0i64; arcs];
    let mut modulus = 0i64;
    let mut component_labels = Vec::new();
    for start in 0..arcs {
      if component[start] != usize::MAX {
        continue;
      }
      let c = component_labels.len();
      let mut label = None;
      component[start] = c;
      direction[start] = 1;
      let mut stack = vec![start];
      while let Some(a) = stack.pop() {
        if let Some(l) = arc_label[a] {
          if label.is_some_and(|x| x != l) {
            return Err(FrontError::ConflictingLabels);
          }
          label = Some(l);
        }
        for &(b, step) in &adj[a] {
          if component[b] == usize::MAX {
            component[b] = c;
            potential[b] = potential[a] + step;
            direction[b] = -direction[a];
            stack.push(b);
          } else {
            modulus = modulus.gcd(&(potential[b] - potential[a] - step));
          }
        }
      }
      component_labels.push(label);
    }
    Ok(FrontData { slots, component, potential, modulus, component_labels, direction, cusps })
  }

  /// Thurston–Bennequin number: writhe minus the number of right cusps.
  pub fn thurston_bennequin(&self) -> i64 { self.writhe() - self.right_cusps() as i64 }

  /// Writhe of the front under the default orientation. Crossings whose
  /// strands travel in the same horizontal direction are positive.
  pub fn writhe(&self) -> i64 {
    let data = self.data().expect("validated front");
    let mut w = 0;
    for (i, ev) in self.events.iter().enumerate() {
      if let FrontEvent::Crossing(k) = *ev {
        let s = &data.slots[i];
        w += data.direction[s[k - 1]] * data.direction[s[k]];
      }
    }
    w
  }

  /// Rotation number `(down cusps − up cusps) / 2` under the default orientation.
  pub fn rotation(&self) -> i64 {
    let data = self.data().expect("validated front");
    let mut twice = 0;
    for &(i, lo, _) in &data.cusps {
      let down = match self.events[i] {
        FrontEvent::LeftCusp(_) => data.direction[lo] > 0,
        _ => data.direction[lo] < 0,
      };
      twice += if down { 1 } else { -1 };
    }
    twice / 2
  }

  /// Knot determinant from the Fox colouring matrix of the front, read as a
  /// knot diagram in which the strand of more negative slope passes over.
  pub fn determinant(&self) -> u128 {
    let data = self.data().expect("validated front");
    let arcs = data.component.len();
    // diagram arcs are (front arc, piece index); pieces break at undercrossings
    let mut pieces = vec![0usize; arcs];
    let mut node: HashMap<(usize, usize), usize> = HashMap::new();
    let id = |key: (usize, usize), node: &mut HashMap<(usize, usize), usize>| {
      let n = node.len();
      *node.entry(key).or_insert(n)
    };
    let mut equations = Vec::new();
    for (i, ev) in self.events.iter().enumerate() {
      if let FrontEvent::Crossing(k) = *ev {
        let s = &data.slots[i];
        let (over, under) = (s[k], s[k - 1]);
        let o = id((over, pieces[over]), &mut node);
        let u0 = id((under, pieces[under]), &mut node);
        pieces[under] += 1;
        let u1 = id((under, pieces[under]), &mut node);
        equations.push((o, u0, u1));
      }
    }
    // glue pieces across cusps
    let mut parent: Vec<usize> = Vec::new();
    let mut key_of = Vec::new();
    for (a, &count) in pieces.iter().enumerate().take(arcs) {
      for p in 0..=count {
        let n = id((a, p), &mut node);
        if key_of.len() <= n {
          key_of.resize(n + 1, (0, 0));
        }
        key_of[n] = (a, p);
      }
    }
    parent.extend(0..node.len());
    fn find(parent: &mut [usize], x: usize) -> usize {
      let mut r = x;
      while parent[r] != r {
        r = parent[r];
      }
      parent[x] = r;
      r
    }
    for &(i, lo, hi) in &data.cusps {
      let (a, b) = match self.events[i] {
        FrontEvent::LeftCusp(_) => (node[&(lo, 0)], node[&(hi, 0)]),
        _ => (node[&(lo, pieces[lo])], node[&(hi, pieces[hi])]),
      };
      let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
      parent[ra] = rb;
    }
    let mut class: HashMap<usize, usize> = HashMap::new();
    for n in 0..node.len() {
      let r = find(&mut parent, n);
      let k = class.len();
      class.entry(r).or_insert(k);
    }
    let cols = class.len();
    if equations.is_empty() {
      return 1;
    }
    let mut matrix = vec![vec![0i128; cols]; equations.len()];
    for (row, &(o, u0, u1)) in equations.iter().enumerate() {
      matrix[row][class[&find(&mut parent, o)]] += 2;
      matrix[row][class[&find(&mut parent, u0)]] -= 1;
      matrix[row][class[&find(&mut parent, u1)]] -= 1;
    }
    // a knot diagram has as many arcs as crossings; drop the last row and column
    let n = equations.len().min(cols) - 1;
    let minor: Vec<Vec<i128>> = matrix[..n].iter().map(|r| r[..n].to_vec()).collect();
    bareiss_determinant(minor).unsigned_abs()
  }
}

fn bareiss_determinant(mut m: Vec<Vec<i128>>) -> i128 {
  let n = m.len();
  if n == 0 {
    return 1;
  }
  let mut sign = 1;
  let mut prev = 1i128;
  for k in 0..n - 1 {
    if m[k][k] == 0 {
      match (k + 1..n).find(|&r| m[r][k] != 0) {
        Some(r) => {
          m.swap(k, r);
          sign = -sign;
        }
        None => return 0,
      }
    }
    for i in k + 1..n {
      for j in k + 1..n {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  sign * m[n - 1][n - 1]
}

impl fmt::Display for FrontWord {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (ev, label) in self.events.iter().zip(&self.labels) {
      match (ev, label) {
        (FrontEvent::LeftCusp(_), Some(l)) => writeln!(f, "{ev} {l}")?,
        _ => writeln!(f, "{ev}")?,
      }
    }
    Ok(())
  }
}

impl FromStr for FrontWord {
  type Err = FrontError;

  /// Reads events such as `L 1`, `X2`, `R 1`, separated by whitespace or
  /// newlines. A left cusp may be followed by `lower` or `upper`; a
  /// `component lower|upper` directive labels the next left cusp.
  fn from_str(s: &str) -> Result<Self, FrontError> {
    let mut events = Vec::new();
    let mut labels = Vec::new();
    let mut pending: Option<Level> = None;
    for (ln, raw) in s.lines().enumerate() {
      let err = |msg: String| FrontError::Parse { line: ln + 1, msg };
      let line = raw.split('#').next().unwrap();
      let mut toks = line.split_whitespace().peekable();
      while let Some(tok) = toks.next() {
        let level = |t: &str| match t {
          "lower" => Some(Level::Lower),
          "upper" => Some(Level::Upper),
          _ => None,
        };
        if tok == "component" {
          let t = toks.next().ok_or_else(|| err("missing level".into()))?;
          pending = Some(level(t).ok_or_else(|| err(format!("unknown level `{t}`")))?);
          continue;
        }
        let (kind, rest) = tok.split_at(1);
        let num = if rest.is_empty() { toks.next().ok_or_else(|| err("missing position".into()))? } else { rest };
        let k: usize = num.parse().map_err(|_| err(format!("bad position `{num}`")))?;
        let ev = match kind {
          "L" => FrontEvent::LeftCusp(k),
          "X" => FrontEvent::Crossing(k),
          "R" => FrontEvent::RightCusp(k),
          _ => return Err(err(format!("unknown event `{tok}`"))),
        };
        let mut label = None;
        if let FrontEvent::LeftCusp(_) = ev {
          label = pending.take();
          if let Some(l) = toks.peek().and_then(|t| level(t)) {
            label = Some(l);
            toks.next();
          }
        }
        events.push(ev);
        labels.push(label);
      }
    }
    FrontWord::with_labels(events, labels)
  }
}
