use braidlift::{front_dga, FrontEvent, FrontWord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random closed front with at most `max_strands` strands and about `len` events.
fn random_front(rng: &mut ChaCha8Rng, len: usize, max_strands: usize) -> FrontWord {
  let mut events = Vec::new();
  let mut n = 0usize;
  while events.len() < len || n > 0 {
    let closing = events.len() >= len;
    let r = rng.gen_range(0..10);
    if n == 0 || (!closing && r < 2 && n + 2 <= max_strands) {
      let k = rng.gen_range(1..=n + 1);
      events.push(FrontEvent::LeftCusp(k));
      n += 2;
    } else if n >= 2 && (closing && r < 5 || r < 4) {
      let k = rng.gen_range(1..n);
      events.push(FrontEvent::RightCusp(k));
      n -= 2;
    } else if n >= 2 {
      events.push(FrontEvent::Crossing(rng.gen_range(1..n)));
    }
  }
  FrontWord::new(events).unwrap()
}

#[test]
fn random_fronts_give_valid_dgas() {
  let mut rng = ChaCha8Rng::seed_from_u64(5);
  for _ in 0..5000 {
    let len = rng.gen_range(2..24);
    let f = random_front(&mut rng, len, 8);
    let a = front_dga(&f).unwrap();
    let report = a.check();
    assert!(report.passed(), "front {:?}: {:?}\n{}", f.to_string(), report.violations, a);
  }
}
