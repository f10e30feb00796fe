use braidlift::{arc_intersection, hf_dim, BraidWord};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn check(w: &BraidWord) {
  let m = w.rank();
  for i in 1..=m {
    for j in 1..=m {
      let twice = arc_intersection(w, i, j).unwrap().twice_value().clone();
      let hf = hf_dim(w, i, j).unwrap();
      assert_eq!(BigInt::from(hf), twice, "w = {w}, i = {i}, j = {j}");
    }
  }
}

#[test]
fn generators_and_identity() {
  for n in 2..=5 {
    check(&BraidWord::identity(n).unwrap());
    for g in 1..n as i32 {
      check(&BraidWord::new(n, vec![g]).unwrap());
      check(&BraidWord::new(n, vec![-g]).unwrap());
    }
  }
}

#[test]
fn random_words_agree() {
  let mut rng = ChaCha8Rng::seed_from_u64(17);
  for _ in 0..300 {
    let n = rng.gen_range(3..=5);
    let len = rng.gen_range(0..=8);
    let letters = (0..len)
      .map(|_| {
        let g = rng.gen_range(1..n as i32);
        if rng.gen() { g } else { -g }
      })
      .collect();
    check(&BraidWord::new(n, letters).unwrap());
  }
}
