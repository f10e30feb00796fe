//! Searches small fronts for Legendrian 5_2 knots with tb = 1, r = 0 and
//! prints them grouped by linearized homology set.
//!
//! cargo run --release -p braidlift --example chekanov_search -- <left cusps> <crossings>

use std::collections::BTreeMap;

use braidlift::{front_dga, FrontEvent, FrontWord};

fn extend(
  events: &mut Vec<FrontEvent>,
  strands: usize,
  lefts: usize,
  rights: usize,
  crossings: usize,
  out: &mut dyn FnMut(&[FrontEvent]),
) {
  if lefts == 0 && rights == 0 && crossings == 0 {
    if strands == 0 {
      out(events);
    }
    return;
  }
  // strands must be closable by the remaining right cusps
  if strands / 2 + lefts != rights {
    return;
  }
  if lefts > 0 {
    let ks: Vec<usize> = if events.is_empty() { vec![1] } else { (1..=strands + 1).collect() };
    for k in ks {
      events.push(FrontEvent::LeftCusp(k));
      extend(events, strands + 2, lefts - 1, rights, crossings, out);
      events.pop();
    }
  }
  if strands >= 2 {
    if crossings > 0 {
      for k in 1..strands {
        if events.last() == Some(&FrontEvent::Crossing(k)) {
          continue;
        }
        events.push(FrontEvent::Crossing(k));
        extend(events, strands, lefts, rights, crossings - 1, out);
        events.pop();
      }
    }
    if rights > 0 {
      for k in 1..strands {
        events.push(FrontEvent::RightCusp(k));
        extend(events, strands - 2, lefts, rights - 1, crossings, out);
        events.pop();
      }
    }
  }
}

fn main() {
  let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("number")).collect();
  let (cusps, crossings) = (args.first().copied().unwrap_or(2), args.get(1).copied().unwrap_or(5));
  let mut found: BTreeMap<String, Vec<String>> = BTreeMap::new();
  let mut seen = 0usize;
  extend(&mut Vec::new(), 0, cusps, cusps, crossings, &mut |ev| {
    seen += 1;
    let Ok(f) = FrontWord::new(ev.to_vec()) else { return };
    let Ok(data) = f.data() else { return };
    if data.components() != 1 || f.thurston_bennequin() != 1 || f.rotation() != 0 || f.determinant() != 7 {
      return;
    }
    let set = front_dga(&f).unwrap().linearized_homology_set().unwrap();
    let key = set.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ; ");
    let text = f.to_string().lines().collect::<Vec<_>>().join(" ").replace(' ', "");
    found.entry(key).or_default().push(text);
  });
  println!("fronts enumerated: {seen}");
  for (k, v) in &found {
    println!("{{{k}}}: {} fronts, e.g. {}", v.len(), v.iter().take(3).cloned().collect::<Vec<_>>().join(" | "));
  }
}
