//! `crosscheck all`: every module against its oracle on the built-in corpus.

use std::fmt::Write as _;

use braidlift::corpus::{knot_fronts, stacked_diagrams};
use braidlift::pipeline::{random_words, reduced_words, sweep};
use braidlift::{front_dga, mixed_differential, primitive, BraidWord, LiftConfig, PlanarHamiltonian};

use crate::{status, Res};

struct Table<'a> {
  out: &'a mut String,
  all: bool,
}

impl Table<'_> {
  fn row(&mut self, name: &str, ok: bool, detail: String) -> Res<()> {
    self.all &= ok;
    writeln!(self.out, "{name}\t{}\t{detail}", status(ok))?;
    Ok(())
  }
}

fn braids(t: &mut Table, samples: usize, seed: u64) -> Res<()> {
  let mut words = reduced_words(3, 4)?;
  words.extend(reduced_words(4, 4)?);
  let sets = [("braids_exhaustive", words), ("braids_sampled", random_words(samples, seed, 3..=5, 5..=10)?)];
  for (name, words) in sets {
    match sweep(&words, true) {
      Ok(r) => t.row(
        name,
        r.disagreements.is_empty(),
        format!("{} braids, {} trivial, {} disagreements, {} square witnesses", r.braids, r.trivial, r.disagreements.len(), r.square_witnesses.len()),
      )?,
      Err(e) => t.row(name, false, e.to_string())?,
    }
  }
  Ok(())
}

fn fronts(t: &mut Table) -> Res<()> {
  let mut sets = Vec::new();
  for (name, front) in knot_fronts() {
    let dga = front_dga(&front)?;
    let report = dga.check();
    let augs = dga.augmentations()?.len();
    let set = dga.linearized_homology_set()?;
    let text: Vec<String> = set.iter().map(|p| p.to_string()).collect();
    t.row(&format!("dga_{name}"), report.passed(), format!("{} generators, {augs} augmentations, set {{{}}}", dga.len(), text.join(", ")))?;
    let desk = match name {
      "unknot" => Some(augs == 1 && set.iter().all(|p| p.total() == 1)),
      "trefoil" => Some(augs == 5),
      _ => None,
    };
    if let Some(ok) = desk {
      t.row(&format!("desk_{name}"), ok, format!("{augs} augmentations"))?;
    }
    sets.push((name, set));
  }
  let get = |n: &str| sets.iter().find(|(m, _)| *m == n).map(|(_, s)| s.clone());
  let (a, b) = (get("chekanov_a"), get("chekanov_b"));
  t.row("desk_chekanov", a.is_some() && a != b, "linearized homology sets differ".into())
}

fn stacked(t: &mut Table) -> Res<()> {
  for (name, d) in stacked_diagrams() {
    let b = mixed_differential(&d)?;
    let report = b.check();
    let set = b.bilinearized_homology_set()?;
    let text: Vec<String> = set.iter().map(|p| p.to_string()).collect();
    let ok = report.passed() && (!name.starts_with("circle_pushoff") || set.iter().all(|p| p.total() == 2));
    t.row(&format!("bimodule_{name}"), ok, format!("{} mixed chords, set {{{}}}", b.len(), text.join(", ")))?;
  }
  Ok(())
}

fn permutations(t: &mut Table) -> Res<()> {
  let words = reduced_words(4, 2)?;
  let mut bad = 0;
  for a in &words {
    for b in &words {
      let (pa, pb, pab) = (a.permutation(), b.permutation(), a.compose(b)?.permutation());
      bad += (0..4).filter(|&k| pab[k] != pb[pa[k]]).count().min(1);
    }
  }
  t.row("permutation_homomorphism", bad == 0, format!("{} pairs, {bad} failures", words.len() * words.len()))?;
  let squares_pure = (1..=4).all(|i| BraidWord::new(5, vec![i, i]).map(|w| w.is_pure()).unwrap_or(false));
  t.row("generator_squares_pure", squares_pure, "B5".into())
}

fn lift(t: &mut Table) -> Res<()> {
  let h: PlanarHamiltonian<f64> = "0.8 * bump(1.2) * x * y + 0.3 * bump(0.6,0.5,-0.4) * x".parse()?;
  let phi = primitive(&h, &LiftConfig::new(400, 81)?)?;
  let exact = phi.exactness_residual()?;
  t.row("lift_exactness", exact < 1e-5, format!("{exact:.3e}"))?;
  let leak = phi.support_leak(0.05)?;
  t.row("lift_support", leak < 1e-9, format!("{leak:.3e}"))
}

pub fn all(samples: usize, seed: u64, out: &mut String) -> Res<bool> {
  let mut t = Table { out, all: true };
  writeln!(t.out, "check\tstatus\tdetail")?;
  braids(&mut t, samples, seed)?;
  fronts(&mut t)?;
  stacked(&mut t)?;
  permutations(&mut t)?;
  lift(&mut t)?;
  Ok(t.all)
}
