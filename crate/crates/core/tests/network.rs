use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tensor_types::array::{Array, ArrayType};
use tensor_types::graded::{GradedIndex, GradedType};
use tensor_types::network::*;
use tensor_types::pairing::PairingType;
use tensor_types::scalars::{Boolean, IntMod, Real64};
use tensor_types::schur::*;
use tensor_types::tensor::for_each_config;

type ANet = NetworkOf<ArrayType<Real64>>;

fn arr(shape: &[usize], e: &[f64]) -> Array<f64> {
    Array::new(shape.to_vec(), e.to_vec()).unwrap()
}

fn m() -> Array<f64> {
    arr(&[3, 3], &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0])
}

fn v() -> Array<f64> {
    arr(&[3], &[0.3, 0.25, 0.45])
}

#[test]
fn golden_matrix_vector() {
    let t = ArrayType::new(Real64);
    let mut net = ANet::new();
    net.add_tensor("M", m()).add_tensor("v", v());
    let a = net.add_atom("M");
    let b = net.add_atom("v");
    net.bond((b, 0), (a, 1)).open((a, 0));
    let p = plan(&net, &t, &OrderHint::FileOrder).unwrap();
    assert_eq!(p.kinds(), vec!["TensorProduct", "Permute", "Contract"]);
    assert_eq!(evaluate(&net, &t, &p).unwrap().entries(), &[0.25, 0.3, 0.45]);
}

#[test]
fn golden_trace_and_contraction() {
    let t = ArrayType::new(Real64);
    let mut net = ANet::new();
    net.add_tensor("M", m());
    let a = net.add_atom("M");
    let b = net.add_atom("M");
    net.bond((a, 1), (b, 0)).bond((b, 1), (a, 0));
    assert_eq!(evaluate_with(&net, &t, &OrderHint::Greedy).unwrap().entries(), &[3.0]);

    let mut net = ANet::new();
    net.add_tensor("M", m()).add_tensor("t", arr(&[2, 3, 2], &(0..12).map(|x| x as f64).collect::<Vec<_>>()));
    let tt = net.add_atom("t");
    let mm = net.add_atom("M");
    net.bond((mm, 0), (tt, 1)).open((tt, 0)).open((mm, 1)).open((tt, 2));
    let s = evaluate_with(&net, &t, &OrderHint::FileOrder).unwrap();
    let expect = [2.0, 3.0, 0.0, 1.0, 4.0, 5.0, 8.0, 9.0, 6.0, 7.0, 10.0, 11.0];
    assert_eq!(s.shape(), &[2, 3, 2]);
    assert_eq!(s.entries(), &expect);
}

#[test]
fn self_bond_and_loop_plans() {
    let t = ArrayType::new(Real64);
    let mut net = ANet::new();
    net.add_tensor("t", arr(&[2, 3, 2], &(0..12).map(|x| x as f64).collect::<Vec<_>>()));
    let a = net.add_atom("t");
    net.bond((a, 0), (a, 2)).open((a, 1));
    let p = plan(&net, &t, &OrderHint::FileOrder).unwrap();
    assert_eq!(p.kinds(), vec!["Permute", "Contract"]);
    assert_eq!(evaluate(&net, &t, &p).unwrap().entries(), &[7.0, 11.0, 15.0]);

    let pt = PairingType;
    let mut lp: NetworkOf<PairingType> = Network::new();
    lp.loops.push(1);
    let p = plan(&lp, &pt, &OrderHint::FileOrder).unwrap();
    assert_eq!(p.kinds(), vec!["EmitIdentity", "Contract"]);
    assert_eq!(evaluate(&lp, &pt, &p).unwrap().prefactor(), 2.0);
}

#[test]
fn validation_diagnostics() {
    let t = ArrayType::new(Real64);
    let mut ok = ANet::new();
    ok.add_tensor("v", v());
    let a = ok.add_atom("v");
    ok.open((a, 0));
    assert!(validate(&ok, &t).is_ok());

    let mut bad = ANet::new();
    bad.add_tensor("x", arr(&[2], &[1.0, 2.0])).add_tensor("y", arr(&[3], &[1.0, 2.0, 3.0]));
    let x = bad.add_atom("x");
    let y = bad.add_atom("y");
    bad.bond((x, 0), (y, 0));
    let d = validate(&bad, &t).unwrap_err();
    assert!(matches!(d[0], Diagnostic::IndexMismatch { bond: 0, .. }));

    let mut dangling = ANet::new();
    dangling.add_tensor("v", v());
    dangling.add_atom("v");
    assert_eq!(validate(&dangling, &t).unwrap_err(), vec![Diagnostic::DanglingReceptor(Receptor::new(0, 0))]);

    let g = GradedType::z2(Real64);
    let b = GradedIndex::new(vec![0, 1]);
    let mut dir: NetworkOf<GradedType<Real64>> = Network::new();
    dir.add_tensor("o", g.tensor(vec![b.clone(), b.clone()], vec![1.0, 0.0, 0.0, 1.0]).unwrap());
    let p = dir.add_atom("o");
    let q = dir.add_atom("o");
    dir.bond((p, 0), (q, 0)).bond((q, 1), (p, 1));
    let d = validate(&dir, &g).unwrap_err();
    assert!(d.iter().all(|x| matches!(x, Diagnostic::DirectionViolation { .. })));

    let bt = ArrayType::new(Boolean);
    let mut nid: NetworkOf<ArrayType<Boolean>> = Network::new();
    nid.loops.push(2);
    assert!(validate(&nid, &bt).is_ok());
}

#[test]
fn single_atom_is_returned_unchanged() {
    let t = ArrayType::new(IntMod::new(5).unwrap());
    let a = Array::new(vec![2, 2], vec![1, 2, 3, 4]).unwrap();
    let mut net: NetworkOf<ArrayType<IntMod>> = Network::new();
    net.add_tensor("a", a.clone());
    let k = net.add_atom("a");
    net.open((k, 0)).open((k, 1));
    assert_eq!(evaluate_with(&net, &t, &OrderHint::FileOrder).unwrap(), a);
    let mut swapped = net.clone();
    swapped.open = vec![Receptor::new(k, 1), Receptor::new(k, 0)];
    assert_eq!(evaluate_with(&swapped, &t, &OrderHint::FileOrder).unwrap().entries(), &[1, 3, 2, 4]);
}

// Brute-force oracle: one summation variable per bond, product of entries.
fn brute(net: &ANet) -> Vec<f64> {
    let t = ArrayType::new(Real64);
    let mut tensors: Vec<Array<f64>> = net.atoms.iter().map(|n| net.tensors[n].clone()).collect();
    for &d in &net.free_bonds {
        tensors.push(t.identity_array(d).unwrap());
    }
    let bond_dims: Vec<usize> = net.bonds.iter().map(|b| tensors[b.tail.atom].shape()[b.tail.slot]).collect();
    let open_dims: Vec<usize> = net.open.iter().map(|r| tensors[r.atom].shape()[r.slot]).collect();
    let loop_factor: f64 = net.loops.iter().map(|&d| d as f64).product();
    let mut out = Vec::new();
    for_each_config(&open_dims, |ocfg| {
        let mut sum = 0.0;
        for_each_config(&bond_dims, |bcfg| {
            let mut cfgs: Vec<Vec<usize>> = tensors.iter().map(|a| vec![0; a.shape().len()]).collect();
            for (k, b) in net.bonds.iter().enumerate() {
                cfgs[b.tail.atom][b.tail.slot] = bcfg[k];
                cfgs[b.head.atom][b.head.slot] = bcfg[k];
            }
            for (k, r) in net.open.iter().enumerate() {
                cfgs[r.atom][r.slot] = ocfg[k];
            }
            sum += tensors.iter().zip(&cfgs).map(|(a, c)| a.get(c)).product::<f64>();
        });
        out.push(sum * loop_factor);
    });
    out
}

fn dim_of(net: &ANet, r: Receptor) -> usize {
    if r.atom < net.atoms.len() {
        net.tensors[&net.atoms[r.atom]].shape()[r.slot]
    } else {
        net.free_bonds[r.atom - net.atoms.len()]
    }
}

fn insert_identity(net: &ANet, bond: usize) -> ANet {
    let t = ArrayType::new(Real64);
    let mut out = net.clone();
    let b = out.bonds[bond];
    let d = dim_of(net, b.tail);
    // Free-bond pseudo-atoms are numbered after real atoms; shift them.
    let n = out.atoms.len();
    let shift = |r: Receptor| if r.atom >= n { Receptor::new(r.atom + 1, r.slot) } else { r };
    out.bonds = out.bonds.iter().map(|x| Bond { tail: shift(x.tail), head: shift(x.head) }).collect();
    out.open = out.open.iter().map(|&r| shift(r)).collect();
    let b = out.bonds[bond];
    out.add_tensor("#id", t.identity_array(d).unwrap());
    let k = out.add_atom("#id");
    out.bonds[bond] = Bond { tail: b.tail, head: Receptor::new(k, 0) };
    out.bond((k, 1), (b.head.atom, b.head.slot));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arrays_match_brute_force(seed in any::<u64>()) {
        let t = ArrayType::new(Real64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = RandomNetworkConfig { max_atoms: 5, max_bonds: 6, max_open: 2, budget: 3, free_bonds: true, loops: true };
        let net = random_network(&t, &cfg, &mut rng, &|e| e.iter().product::<usize>() <= 400);
        let want = brute(&net);
        for hint in [OrderHint::FileOrder, OrderHint::Greedy, OrderHint::Random(seed)] {
            let got = evaluate_with(&net, &t, &hint).unwrap();
            for (x, y) in got.entries().iter().zip(&want) {
                prop_assert!((x - y).abs() <= 1e-9 * y.abs().max(1.0));
            }
        }
        if !net.bonds.is_empty() {
            let k = seed as usize % net.bonds.len();
            let with_id = evaluate_with(&insert_identity(&net, k), &t, &OrderHint::Greedy).unwrap();
            for (x, y) in with_id.entries().iter().zip(&want) {
                prop_assert!((x - y).abs() <= 1e-9 * y.abs().max(1.0));
            }
        }
        let mut given: Vec<usize> = (0..net.bonds.len()).collect();
        given.reverse();
        let g = evaluate_with(&net, &t, &OrderHint::Given(given)).unwrap();
        prop_assert!(g.entries().iter().zip(&want).all(|(x, y)| (x - y).abs() <= 1e-9 * y.abs().max(1.0)));
    }

    #[test]
    fn relabeling_atoms_changes_nothing(seed in any::<u64>()) {
        let t = SchurRect::new(Real64, 1.0, -1.0, PrefactorMode::Det).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = random_network(&t, &RandomNetworkConfig::default(), &mut rng, &|_| true);
        let r = evaluate_order_independent(&net, &t, 5, seed, 1e-8).unwrap();
        prop_assert!(r.passed, "deviation {}", r.max_deviation);
    }
}

#[test]
fn plans_replay_to_open_order() {
    let t = ArrayType::new(Real64);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let net = random_network(&t, &RandomNetworkConfig::default(), &mut rng, &|_| true);
        let r = evaluate_with(&net, &t, &OrderHint::Greedy).unwrap();
        let want: Vec<usize> = net.open.iter().map(|&o| dim_of(&net, o)).collect();
        assert_eq!(r.shape(), &want[..]);
    }
}

#[test]
fn given_order_must_be_a_permutation() {
    let t = ArrayType::new(Real64);
    let mut net = ANet::new();
    net.add_tensor("M", m());
    let a = net.add_atom("M");
    net.bond((a, 0), (a, 1));
    assert!(plan(&net, &t, &OrderHint::Given(vec![0, 0])).is_err());
    assert!(plan(&net, &t, &OrderHint::Given(vec![0])).is_ok());
}
