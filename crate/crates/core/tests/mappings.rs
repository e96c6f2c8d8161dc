use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tensor_types::array::{Array, ArrayType};
use tensor_types::fermion;
use tensor_types::linalg::{self, Matrix};
use tensor_types::mappings::*;
use tensor_types::network::*;
use tensor_types::pairing::{Pairing, PairingType};
use tensor_types::scalars::*;
use tensor_types::schur::*;
use tensor_types::{Complex64, TensorType};

fn det_source() -> SchurRect<Real64> {
    SchurRect::new(Real64, -1.0, 1.0, PrefactorMode::Det).unwrap()
}

fn pf_source() -> SchurSquare<Real64> {
    SchurSquare::new(Real64, u_i_sigma_y(&Real64), Symmetry::Anti, PrefactorMode::Pfaffian).unwrap()
}

fn rows(r: &[&[f64]]) -> Matrix<f64> {
    let v: Vec<Vec<f64>> = r.iter().map(|x| x.to_vec()).collect();
    Matrix::from_rows(&v, r.first().map_or(0, |x| x.len())).unwrap()
}

fn run_random<M: TensorMapping>(
    map: &M,
    cfg: &RandomNetworkConfig,
    networks: usize,
    seed: u64,
    tol: f64,
    accept: &dyn Fn(&[<M::Source as TensorType>::Index]) -> bool,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..networks {
        let net = random_network(map.source(), cfg, &mut rng, accept);
        let r = verify_mapping_commutes(map, &net, 3, seed + k as u64, tol).unwrap();
        assert!(r.passed, "network {k}: deviation {}", r.max_deviation);
    }
}

#[test]
fn pairing_examples() {
    let id = map_pairing_to_array(&Pairing::new(vec![1, 1], vec![(0, 1)], 1.0).unwrap());
    assert_eq!(id.entries(), &[1.0, 0.0, 0.0, 1.0]);
    let empty = map_pairing_to_array(&Pairing::new(vec![], vec![], 5.0).unwrap());
    assert_eq!(empty.entries(), &[5.0]);

    let mut lp: NetworkOf<PairingType> = Network::new();
    lp.loops.push(1);
    let r = verify_mapping_commutes(&PairingToArray::new(), &lp, 1, 0, 0.0).unwrap();
    assert!(r.passed);
    assert_eq!(evaluate_with(&lp, &PairingType, &OrderHint::FileOrder).unwrap().prefactor(), 2.0);
}

#[test]
fn pairing_to_array_commutes() {
    let cfg = RandomNetworkConfig { max_atoms: 3, max_bonds: 3, max_open: 2, budget: 2, free_bonds: true, loops: true };
    run_random(&PairingToArray::new(), &cfg, 50, 1, 1e-12, &|e| e.iter().sum::<usize>() <= 6);
}

#[test]
fn determinant_entries() {
    let m = DeterminantMapping::new(det_source()).unwrap();
    let t = det_source().tensor(vec![RectModes::new(1, 1)], rows(&[&[0.7]]), 3.0).unwrap();
    let g = m.map_tensor(&t).unwrap();
    // Configurations: in bit then out bit.
    assert_eq!(g.entries(), &[3.0, 0.0, 0.0, 3.0 * 0.7]);
    let e = det_source().tensor(vec![RectModes::new(0, 0)], Matrix::from_vec(0, 0, vec![]).unwrap(), 2.5).unwrap();
    assert_eq!(m.map_tensor(&e).unwrap().entries(), &[2.5]);
    assert!(DeterminantMapping::new(SchurRect::new(Real64, -1.0, 1.0, PrefactorMode::None).unwrap()).is_err());
    assert!(DeterminantMapping::new(SchurRect::new(Real64, 1.0, 1.0, PrefactorMode::Det).unwrap()).is_err());
}

#[test]
fn determinant_mapping_commutes() {
    let cfg = RandomNetworkConfig { max_atoms: 3, max_bonds: 3, max_open: 2, budget: 2, free_bonds: true, loops: true };
    let m = DeterminantMapping::new(det_source()).unwrap();
    run_random(&m, &cfg, 50, 2, 1e-8, &|e: &[RectModes]| e.iter().map(|b| b.total()).sum::<usize>() <= 4);
}

// <alpha| prod_{i in beta} (sum_j U_ij c_j^dagger) |0> is det(U|beta, alpha);
// the mapped entry lists the same determinant as the coefficient of the
// slot-ordered monomial, which differs by the reordering sign (-1)^{k(k-1)/2}.
#[test]
fn second_quantization() {
    let m = DeterminantMapping::new(det_source()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let n = 3;
        let u = Matrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let t = det_source().tensor(vec![RectModes::new(n, n)], u.clone(), 1.0).unwrap();
        let g = m.map_tensor(&t).unwrap();
        for ins in 0..1usize << n {
            for outs in 0..1usize << n {
                let beta: Vec<usize> = (0..n).filter(|q| ins >> (n - 1 - q) & 1 == 1).collect();
                let alpha: Vec<usize> = (0..n).filter(|q| outs >> (n - 1 - q) & 1 == 1).collect();
                if alpha.len() != beta.len() {
                    assert_eq!(g.get(&[(ins << n) | outs]), 0.0);
                    continue;
                }
                let k = alpha.len();
                let sign = if (k * k.saturating_sub(1) / 2) % 2 == 1 { -1.0 } else { 1.0 };
                let oracle = fermion::single_particle_amplitude(&u, &alpha, &beta);
                assert!((sign * g.get(&[(ins << n) | outs]) - oracle).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn pfaffian_entries() {
    let m = PfaffianMapping::new(pf_source()).unwrap();
    let a = 0.4;
    let t = pf_source().tensor(vec![2], rows(&[&[0.0, a], &[-a, 0.0]]), 2.0).unwrap();
    assert_eq!(m.map_tensor(&t).unwrap().entries(), &[2.0, 0.0, 0.0, 2.0 * a]);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let b = Matrix::from_fn(4, 4, |_, _| rng.gen_range(-1.0..1.0));
    let x = Matrix::from_fn(4, 4, |r, c| b.get(r, c) - b.get(c, r));
    let t = pf_source().tensor(vec![4], x.clone(), 1.5).unwrap();
    let g = m.map_tensor(&t).unwrap();
    let f = |i: usize, j: usize| x.get(i - 1, j - 1);
    let full = f(1, 2) * f(3, 4) - f(1, 3) * f(2, 4) + f(1, 4) * f(2, 3);
    assert!((g.get(&[15]) - 1.5 * full).abs() < 1e-14);
    assert_eq!(g.get(&[0]), 1.5);
    assert_eq!(g.get(&[1]), 0.0);
    assert!(PfaffianMapping::new(
        SchurSquare::new(Real64, u_i_sigma_y(&Real64), Symmetry::Anti, PrefactorMode::None).unwrap()
    )
    .is_err());
}

#[test]
fn pfaffian_mapping_commutes() {
    let cfg = RandomNetworkConfig { max_atoms: 3, max_bonds: 3, max_open: 2, budget: 2, free_bonds: true, loops: true };
    let m = PfaffianMapping::new(pf_source()).unwrap();
    run_random(&m, &cfg, 50, 5, 1e-8, &|e: &[usize]| e.iter().sum::<usize>() <= 4);
}

#[test]
fn antisymmetrization() {
    let src = SchurRect::new(Real64, -1.0, 1.0, PrefactorMode::None).unwrap();
    let dst = SchurSquare::new(Real64, [[0.0, -1.0], [1.0, 0.0]], Symmetry::Anti, PrefactorMode::None).unwrap();
    let m = Antisymmetrization::new(src.clone(), dst).unwrap();
    let c = 0.9;
    let t = src.tensor(vec![RectModes::new(1, 1)], rows(&[&[c]]), 1.0).unwrap();
    assert_eq!(m.map_tensor(&t).unwrap().matrix(), &rows(&[&[0.0, c], &[-c, 0.0]]));
    assert_eq!(m.map_tensor(&src.trivial()).unwrap().matrix().rows(), 0);
    let cfg = RandomNetworkConfig::default();
    run_random(&m, &cfg, 50, 6, 1e-8, &|e: &[RectModes]| e.iter().map(|b| b.total()).sum::<usize>() <= 6);

    let dsrc = det_source();
    let pdst = SchurSquare::new(Real64, [[0.0, -1.0], [1.0, 0.0]], Symmetry::Anti, PrefactorMode::Pfaffian).unwrap();
    let pm = Antisymmetrization::new(dsrc, pdst).unwrap();
    run_random(&pm, &cfg, 50, 7, 1e-8, &|e: &[RectModes]| e.iter().map(|b| b.total()).sum::<usize>() <= 6);

    let bad = SchurSquare::new(Real64, [[0.0, 1.0], [-1.0, 0.0]], Symmetry::Anti, PrefactorMode::Det).unwrap();
    assert!(Antisymmetrization::new(det_source(), bad).is_err());
}

#[test]
fn in_out_pair() {
    let u = [[0.0, 1.0], [-1.0, 0.0]];
    let sq = SchurSquare::new(Real64, u, Symmetry::None, PrefactorMode::Det).unwrap();
    let rect = SchurRect::new(Real64, 1.0, -1.0, PrefactorMode::Det).unwrap();
    let m = InOutPair::new(sq.clone(), rect).unwrap();
    let t = sq.tensor(vec![1], rows(&[&[1.0]]), 1.0).unwrap();
    let r = m.map_tensor(&t).unwrap();
    assert_eq!(r.matrix(), &rows(&[&[1.0]]));
    assert_eq!(r.slots(), &[RectModes::new(1, 1)]);
    assert!(InOutPair::new(sq.clone(), SchurRect::new(Real64, 1.0, 1.0, PrefactorMode::Det).unwrap()).is_err());
    assert!(InOutPair::new(sq, SchurRect::new(Real64, 1.0, -1.0, PrefactorMode::None).unwrap()).is_err());
    run_random(&m, &RandomNetworkConfig::default(), 50, 8, 1e-8, &|e: &[usize]| e.iter().sum::<usize>() <= 5);
}

#[test]
fn entrywise() {
    let c = Array::new(vec![1], vec![Complex64::new(1.0, 1.0)]).unwrap();
    assert_eq!(entrywise_array_mapping(&ComplexConjugate, &c).entries(), &[Complex64::new(1.0, -1.0)]);
    let r = Array::new(vec![2], vec![1.5, -2.0]).unwrap();
    assert!(entrywise_array_mapping(&EmbedRealInComplex, &r).entries().iter().all(|z| z.im == 0.0));

    let ta = ArrayType::new(Real64);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let a = ta.random_tensor(&[2, 3], &mut rng).unwrap();
        let b = ta.random_tensor(&[2], &mut rng).unwrap();
        let tc = ArrayType::new(Complex);
        let lhs = entrywise_array_mapping(&EmbedRealInComplex, &ta.kron(&a, &b));
        let rhs = tc.kron(&entrywise_array_mapping(&EmbedRealInComplex, &a), &entrywise_array_mapping(&EmbedRealInComplex, &b));
        assert!(tc.deviation(&lhs, &rhs) < 1e-14);
    }
    let cfg = RandomNetworkConfig::default();
    run_random(&EntrywiseArray::new(ComplexConjugate), &cfg, 50, 10, 1e-10, &|_| true);
    run_random(&EntrywiseArray::new(EmbedRealInComplex), &cfg, 50, 11, 1e-10, &|_| true);
    run_random(&EntrywiseArray::new(EmbedNonNegInReal), &cfg, 50, 12, 1e-10, &|_| true);
    run_random(&EntrywiseArray::new(ModReduce(IntMod::new(7).unwrap())), &cfg, 50, 13, 0.0, &|_| true);
}

#[test]
fn trivial_mapping() {
    let cfg = RandomNetworkConfig::default();
    run_random(&TrivialMapping::new(PairingType), &cfg, 20, 14, 0.0, &|_| true);
    run_random(&TrivialMapping::new(pf_source()), &cfg, 20, 15, 0.0, &|e: &[usize]| e.iter().sum::<usize>() <= 4);
}

// Cross-check of rect prefactors: a closed two-atom network's prefactor
// equals the scalar entry of the mapped graded network.
#[test]
fn closed_networks_agree_with_graded_evaluation() {
    let s = det_source();
    let m = DeterminantMapping::new(s.clone()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..50 {
        let b = RectModes::new(rng.gen_range(0..2), rng.gen_range(0..2));
        let a = s.random_tensor(&[b, b.dual()], &mut rng).unwrap();
        let mut net: NetworkOf<SchurRect<Real64>> = Network::new();
        net.add_tensor("a", a);
        let k = net.add_atom("a");
        net.bond((k, 0), (k, 1));
        let direct = evaluate_with(&net, &s, &OrderHint::FileOrder).unwrap().prefactor();
        let r = verify_mapping_commutes(&m, &net, 1, 0, 1e-10).unwrap();
        assert!(r.passed);
        let g = m.map_tensor(&evaluate_with(&net, &s, &OrderHint::FileOrder).unwrap()).unwrap();
        assert!((g.entries()[0] - direct).abs() < 1e-12);
    }
    assert!(linalg::det(&Real64, &Matrix::identity(&Real64, 2)).unwrap() == 1.0);
}
