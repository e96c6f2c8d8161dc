use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tensor_types::array::*;
use tensor_types::scalars::*;
use tensor_types::tensor::for_each_config;
use tensor_types::TensorType;

fn f64_array(shape: Vec<usize>, entries: Vec<f64>) -> Array<f64> {
    Array::new(shape, entries).unwrap()
}

// Row-major position of a configuration.
fn flat(shape: &[usize], cfg: &[usize]) -> usize {
    cfg.iter().zip(shape).fold(0, |acc, (&c, &d)| acc * d + c)
}

// Gather oracle: out(cfg) = a(cfg') with cfg'[perm[k]] = cfg[k].
fn gather(a: &Array<f64>, perm: &[usize]) -> Array<f64> {
    let shape: Vec<usize> = perm.iter().map(|&p| a.shape()[p]).collect();
    let mut out = Vec::new();
    for_each_config(&shape, |cfg| {
        let mut src = vec![0; cfg.len()];
        for (k, &p) in perm.iter().enumerate() {
            src[p] = cfg[k];
        }
        out.push(a.entries()[flat(a.shape(), &src)]);
    });
    f64_array(shape, out)
}

fn shuffled(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.gen_range(0..=i));
    }
    p
}

#[test]
fn outer_product_of_v() {
    let t = ArrayType::new(Real64);
    let v = f64_array(vec![3], vec![0.3, 0.25, 0.45]);
    let vv = t.kron(&v, &v);
    assert_eq!(vv.shape(), &[3, 3]);
    let row0 = &vv.entries()[0..3];
    for (x, y) in row0.iter().zip([0.09, 0.075, 0.135]) {
        assert!((x - y).abs() < 1e-12);
    }
    let inner = t.einsum_pair(&vv, 0, 1).unwrap();
    assert!((inner.entries()[0] - 0.355).abs() < 1e-12);
}

// The printed matrix with row 0 = (0.0625, 0.075, 0.1125) is the outer
// product of Mv = (0.25, 0.3, 0.45), not of v itself.
#[test]
fn outer_product_of_mv() {
    let t = ArrayType::new(Real64);
    let m = f64_array(vec![3, 3], vec![0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    let v = f64_array(vec![3], vec![0.3, 0.25, 0.45]);
    let mv = t.einsum_pair(&t.kron(&m, &v), 1, 2).unwrap();
    assert_eq!(mv.entries(), &[0.25, 0.3, 0.45]);
    let expect = [0.0625, 0.075, 0.1125, 0.075, 0.09, 0.135, 0.1125, 0.135, 0.2025];
    for (x, y) in t.kron(&mv, &mv).entries().iter().zip(expect) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn kron_with_trivial() {
    let t = ArrayType::new(Real64);
    let a = f64_array(vec![2], vec![1.0, 2.0]);
    assert_eq!(t.kron(&a, &t.trivial_array()), a);
    assert_eq!(t.kron(&t.trivial_array(), &a), a);
}

#[test]
fn boolean_kron_is_and() {
    let t = ArrayType::new(Boolean);
    let r = Array::new(vec![2, 2], vec![false, true, false, false]).unwrap();
    let s = Array::new(vec![2, 2], vec![false, false, true, false]).unwrap();
    let rs = t.kron(&r, &s);
    let mut hits = Vec::new();
    for_each_config(&[2, 2, 2, 2], |cfg| {
        if rs.get(cfg) {
            hits.push(cfg.to_vec());
        }
    });
    assert_eq!(hits, vec![vec![0, 1, 1, 0]]);
}

#[test]
fn three_index_trace() {
    let t = ArrayType::new(Real64);
    let a = f64_array(vec![2, 3, 2], (0..12).map(|x| x as f64).collect());
    assert_eq!(t.einsum_pair(&a, 0, 2).unwrap().entries(), &[7.0, 11.0, 15.0]);
}

#[test]
fn identity_trace_and_literals() {
    let t = ArrayType::new(Real64);
    let id = t.identity_array(3).unwrap();
    assert_eq!(t.einsum_pair(&id, 0, 1).unwrap().entries(), &[3.0]);
    assert_eq!(t.identity_array(2).unwrap().entries(), &[1.0, 0.0, 0.0, 1.0]);
    let b = ArrayType::new(Boolean);
    assert_eq!(b.identity_array(2).unwrap().entries(), &[true, false, false, true]);
    let z = ArrayType::new(IntMod::new(5).unwrap());
    assert_eq!(z.trivial_array().entries(), &[1]);
    assert!(ArrayType::new(NonNegReal).identity_array(2).is_ok());
}

#[test]
fn transpose_and_identity_permutation() {
    let t = ArrayType::new(Real64);
    let a = f64_array(vec![2, 2], vec![0.0, 1.0, 2.0, 3.0]);
    assert_eq!(t.permute_array(&a, &[1, 0]).unwrap().entries(), &[0.0, 2.0, 1.0, 3.0]);
    assert_eq!(t.permute_array(&a, &[0, 1]).unwrap(), a);
    assert!(t.permute_array(&a, &[0, 0]).is_err());
}

#[test]
fn mismatched_pair_is_rejected() {
    let t = ArrayType::new(Real64);
    let a = f64_array(vec![2, 3], vec![0.0; 6]);
    assert!(t.einsum_pair(&a, 0, 1).is_err());
}

#[test]
fn cycle_equals_two_swaps() {
    let t = ArrayType::new(Real64);
    let a = f64_array(vec![2, 3, 4], (0..24).map(|x| x as f64).collect());
    let cycle = t.permute_array(&a, &[1, 2, 0]).unwrap();
    let swaps = t.permute_array(&t.permute_array(&a, &[1, 0, 2]).unwrap(), &[0, 2, 1]).unwrap();
    assert_eq!(cycle, swaps);
    assert_eq!(cycle, gather(&a, &[1, 2, 0]));
}

#[test]
fn labels_round_trip() {
    let a = f64_array(vec![2, 3], (0..6).map(|x| x as f64).collect());
    let labels = vec![vec!['x', 'y'], vec!['p', 'q', 'r']];
    let e = skeleton_embed(&a, &labels).unwrap();
    assert_eq!(skeleton_project(&e, &labels).unwrap(), a);
    assert!(skeleton_embed(&a, &[vec!['x', 'x'], vec!['p', 'q', 'r']]).is_err());
}

#[test]
fn relabeling_matches_permutation_gather() {
    // Projecting with reversed labels on slot 0 reverses that axis.
    let a = f64_array(vec![3, 2], (0..6).map(|x| x as f64).collect());
    let labels = vec![vec![0u8, 1, 2], vec![0u8, 1]];
    let e = skeleton_embed(&a, &labels).unwrap();
    let p = skeleton_project(&e, &[vec![2u8, 1, 0], vec![0u8, 1]]).unwrap();
    for i in 0..3 {
        for j in 0..2 {
            assert_eq!(p.get(&[i, j]), a.get(&[2 - i, j]));
        }
    }
}

#[test]
fn empty_slot() {
    let a = f64_array(vec![0, 2], vec![]);
    let e = skeleton_embed::<u8, f64>(&a, &[vec![], vec![0, 1]]).unwrap();
    assert!(e.entries.is_empty());
    let t = ArrayType::new(Real64);
    let s = t.einsum_pair(&t.kron(&a, &f64_array(vec![0], vec![])), 0, 2).unwrap();
    assert_eq!(s.entries(), &[0.0, 0.0]);
}

// Composition of binary relations via one Boolean contraction, against an
// existential brute-force oracle.
#[test]
fn boolean_relation_composition() {
    let t = ArrayType::new(Boolean);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let (n, m, k) = (rng.gen_range(1..4), rng.gen_range(1..4), rng.gen_range(1..4));
        let r: Vec<bool> = (0..n * m).map(|_| rng.gen()).collect();
        let s: Vec<bool> = (0..m * k).map(|_| rng.gen()).collect();
        let ra = Array::new(vec![n, m], r.clone()).unwrap();
        let sa = Array::new(vec![m, k], s.clone()).unwrap();
        let c = t.einsum_pair(&t.kron(&ra, &sa), 1, 2).unwrap();
        for i in 0..n {
            for j in 0..k {
                let exists = (0..m).any(|x| r[i * m + x] && s[x * k + j]);
                assert_eq!(c.get(&[i, j]), exists);
            }
        }
    }
}

proptest! {
    #[test]
    fn permute_matches_gather(seed in any::<u64>(), dims in proptest::collection::vec(1usize..4, 1..5)) {
        let t = ArrayType::new(Real64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = t.random_tensor(&dims, &mut rng).unwrap();
        let p = shuffled(dims.len(), &mut rng);
        prop_assert_eq!(t.permute_array(&a, &p).unwrap(), gather(&a, &p));
        let q = shuffled(dims.len(), &mut rng);
        // Composing permutations composes results.
        let composed: Vec<usize> = q.iter().map(|&k| p[k]).collect();
        let twice = t.permute_array(&t.permute_array(&a, &p).unwrap(), &q).unwrap();
        prop_assert_eq!(twice, t.permute_array(&a, &composed).unwrap());
    }

    #[test]
    fn einsum_matches_naive_sum(seed in any::<u64>(), rest in proptest::collection::vec(1usize..4, 0..3), d in 1usize..4) {
        let t = ArrayType::new(Real64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut dims = rest.clone();
        let i = rng.gen_range(0..=dims.len());
        dims.insert(i, d);
        let j = rng.gen_range(i + 1..=dims.len());
        dims.insert(j, d);
        let a = t.random_tensor(&dims, &mut rng).unwrap();
        let got = t.einsum_pair(&a, i, j).unwrap();
        prop_assert_eq!(got.shape(), &rest[..]);
        let mut k = 0;
        for_each_config(&rest, |cfg| {
            let mut s = 0.0;
            for x in 0..d {
                let mut full = cfg.to_vec();
                full.insert(i, x);
                full.insert(j, x);
                s += a.entries()[flat(&dims, &full)];
            }
            assert!((got.entries()[k] - s).abs() < 1e-12);
            k += 1;
        });
    }

    #[test]
    fn kron_is_strictly_associative(seed in any::<u64>()) {
        let t = ArrayType::new(IntMod::new(7).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = t.random_tensor(&[2], &mut rng).unwrap();
        let b = t.random_tensor(&[3, 1], &mut rng).unwrap();
        let c = t.random_tensor(&[2, 2], &mut rng).unwrap();
        prop_assert_eq!(t.kron(&t.kron(&a, &b), &c), t.kron(&a, &t.kron(&b, &c)));
    }

    #[test]
    fn disjoint_pairs_commute(seed in any::<u64>()) {
        let t = ArrayType::new(Real64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = t.random_tensor(&[2, 3, 2, 3, 2], &mut rng).unwrap();
        let first = t.einsum_pair(&t.einsum_pair(&a, 0, 2).unwrap(), 0, 1).unwrap();
        let second = t.einsum_pair(&t.einsum_pair(&a, 1, 3).unwrap(), 0, 1).unwrap();
        prop_assert!(t.deviation(&first, &second) < 1e-12);
    }
}
