//! Physics demos built through the public network API.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tensor_types::array::{Array, ArrayType};
use tensor_types::fermion;
use tensor_types::linalg::Matrix;
use tensor_types::mappings::{verify_mapping_commutes, DeterminantMapping, TensorMapping};
use tensor_types::network::{evaluate_with, Network, NetworkOf, OrderHint};
use tensor_types::scalars::{Boolean, NonNeg, NonNegReal, Real64};
use tensor_types::schur::{PrefactorMode, RectModes, SchurRect};
use tensor_types::tensor::for_each_config;

pub const ISING_MAX_SITES: usize = 16;
pub const DIMER_MAX_SIDE: usize = 4;
pub const FERMION_MAX_MODES: usize = 4;

/// Nearest-neighbour edges of a `width x height` grid, sites numbered row
/// by row. Periodic wrap edges are added only along sides longer than two,
/// where they do not duplicate an existing edge.
pub fn grid_edges(width: usize, height: usize, periodic: bool) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for y in 0..height {
        for x in 0..width {
            let v = y * width + x;
            if x + 1 < width {
                edges.push((v, v + 1));
            } else if periodic && width > 2 {
                edges.push((v, y * width));
            }
            if y + 1 < height {
                edges.push((v, v + width));
            } else if periodic && height > 2 {
                edges.push((v, x));
            }
        }
    }
    edges
}

/// Copy tensor on `legs` binary legs: 1 when all legs agree.
fn delta(legs: usize) -> Array<NonNeg> {
    let dims = vec![2; legs];
    let mut e = Vec::new();
    for_each_config(&dims, |c| {
        let same = c.iter().all(|&x| x == c[0]);
        e.push(NonNeg::new(if same { 1.0 } else { 0.0 }).unwrap());
    });
    if legs == 0 {
        e = vec![NonNeg::new(2.0).unwrap()];
    }
    Array::new(dims, e).unwrap()
}

/// Edge-Boltzmann network of the Ising model; open slots are the observed
/// spins in the order given (index 0 is spin +1).
pub fn ising_network(
    width: usize,
    height: usize,
    beta: f64,
    periodic: bool,
    observe: &[usize],
) -> Result<NetworkOf<ArrayType<NonNegReal>>, String> {
    let n = width * height;
    if n == 0 || n > ISING_MAX_SITES {
        return Err(format!("Ising lattice must have 1..={ISING_MAX_SITES} sites, got {n}"));
    }
    if !beta.is_finite() {
        return Err("beta must be finite".into());
    }
    if let Some(&bad) = observe.iter().find(|&&s| s >= n) {
        return Err(format!("observed site {bad} is outside the lattice"));
    }
    let mut seen = vec![false; n];
    for &s in observe {
        if std::mem::replace(&mut seen[s], true) {
            return Err(format!("site {s} is observed twice"));
        }
    }
    let edges = grid_edges(width, height, periodic);
    let mut degree = vec![0; n];
    for &(a, b) in &edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    let legs: Vec<usize> = (0..n).map(|v| degree[v] + usize::from(seen[v])).collect();

    let mut net: NetworkOf<ArrayType<NonNegReal>> = Network::new();
    for &l in &legs {
        net.add_tensor(&format!("delta{l}"), delta(l));
    }
    let (same, diff) = (NonNeg::new(beta.exp()).unwrap(), NonNeg::new((-beta).exp()).unwrap());
    net.add_tensor("edge", Array::new(vec![2, 2], vec![same, diff, diff, same]).unwrap());
    for &l in &legs {
        net.add_atom(&format!("delta{l}"));
    }
    let mut next_slot = vec![0; n];
    for &(a, b) in &edges {
        let e = net.add_atom("edge");
        let sa = next_slot[a];
        next_slot[a] += 1;
        let sb = next_slot[b];
        next_slot[b] += 1;
        net.bond((a, sa), (e, 0)).bond((e, 1), (b, sb));
    }
    for &s in observe {
        net.open((s, next_slot[s]));
    }
    Ok(net)
}

/// `Z(o)` for every configuration of the observed spins, row-major.
pub fn ising_partition(width: usize, height: usize, beta: f64, periodic: bool, observe: &[usize]) -> Result<Vec<f64>, String> {
    let t = ArrayType::new(NonNegReal);
    let net = ising_network(width, height, beta, periodic, observe)?;
    let z = evaluate_with(&net, &t, &OrderHint::Greedy).map_err(|e| e.to_string())?;
    Ok(z.entries().iter().map(|x| x.get()).collect())
}

/// Binary legs of a dimer vertex: left, right, up, down.
const LEGS: usize = 4;

/// Boolean network of the dimer constraint: every vertex is covered by
/// exactly one edge. Boundary edges are open, listed vertex by vertex in
/// leg order.
pub fn dimer_network(width: usize, height: usize) -> Result<NetworkOf<ArrayType<Boolean>>, String> {
    if !(1..=DIMER_MAX_SIDE).contains(&width) || !(1..=DIMER_MAX_SIDE).contains(&height) {
        return Err(format!("dimer grid sides must be in 1..={DIMER_MAX_SIDE}"));
    }
    let dims = vec![2; LEGS];
    let mut e = Vec::new();
    for_each_config(&dims, |c| e.push(c.iter().sum::<usize>() == 1));
    let mut net: NetworkOf<ArrayType<Boolean>> = Network::new();
    net.add_tensor("vertex", Array::new(dims, e).unwrap());
    for _ in 0..width * height {
        net.add_atom("vertex");
    }
    for y in 0..height {
        for x in 0..width {
            let v = y * width + x;
            if x + 1 < width {
                net.bond((v, 1), (v + 1, 0));
            }
            if y + 1 < height {
                net.bond((v, 3), (v + width, 2));
            }
        }
    }
    for y in 0..height {
        for x in 0..width {
            let v = y * width + x;
            let outside = [x == 0, x + 1 == width, y == 0, y + 1 == height];
            for (leg, &out) in outside.iter().enumerate() {
                if out {
                    net.open((v, leg));
                }
            }
        }
    }
    Ok(net)
}

/// Boundary-feasibility tensor: entry 1 iff some dimer covering uses
/// exactly the marked boundary edges.
pub fn dimer_feasibility(width: usize, height: usize) -> Result<Array<bool>, String> {
    let net = dimer_network(width, height)?;
    evaluate_with(&net, &ArrayType::new(Boolean), &OrderHint::Greedy).map_err(|e| e.to_string())
}

#[derive(Clone, Debug, PartialEq)]
pub struct FreeFermionReport {
    pub modes: usize,
    /// Max error of the mapped single-atom tensor against the many-body
    /// amplitudes.
    pub single_max_error: f64,
    /// Max deviation between the two evaluation paths of a two-atom chain.
    pub chain_deviation: f64,
    pub passed: bool,
}

pub const FERMION_TOL: f64 = 1e-8;

fn det_source() -> SchurRect<Real64> {
    SchurRect::new(Real64, -1.0, 1.0, PrefactorMode::Det).unwrap()
}

/// Compares the determinant mapping of a random single-particle matrix
/// with the many-body amplitudes, and checks that a two-atom chain gives
/// the same result when mapped before or after contraction.
pub fn free_fermion(modes: usize, seed: u64) -> Result<FreeFermionReport, String> {
    if !(1..=FERMION_MAX_MODES).contains(&modes) {
        return Err(format!("modes must be in 1..={FERMION_MAX_MODES}"));
    }
    let n = modes;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = det_source();
    let m = DeterminantMapping::new(s.clone()).map_err(|e| e.to_string())?;
    let u = Matrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let t = s.tensor(vec![RectModes::new(n, n)], u.clone(), 1.0).map_err(|e| e.to_string())?;
    let g = m.map_tensor(&t).map_err(|e| e.to_string())?;
    let mut single: f64 = 0.0;
    for ins in 0..1usize << n {
        for outs in 0..1usize << n {
            let beta: Vec<usize> = (0..n).filter(|q| ins >> (n - 1 - q) & 1 == 1).collect();
            let alpha: Vec<usize> = (0..n).filter(|q| outs >> (n - 1 - q) & 1 == 1).collect();
            let k = beta.len();
            // The mapped entry is the coefficient of the slot-ordered
            // monomial; reordering it to creators-then-annihilators costs
            // (-1)^{k(k-1)/2}.
            let sign = if (k * k.saturating_sub(1) / 2) % 2 == 1 { -1.0 } else { 1.0 };
            let want = if alpha.len() == k { fermion::single_particle_amplitude(&u, &alpha, &beta) } else { 0.0 };
            single = single.max((sign * g.get(&[(ins << n) | outs]) - want).abs());
        }
    }

    let a = s
        .tensor(vec![RectModes::new(n, 0), RectModes::new(0, n)], Matrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0)), 1.0)
        .map_err(|e| e.to_string())?;
    let b = s
        .tensor(vec![RectModes::new(n, 0), RectModes::new(0, n)], Matrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0)), 1.0)
        .map_err(|e| e.to_string())?;
    let mut chain: NetworkOf<SchurRect<Real64>> = Network::new();
    chain.add_tensor("a", a).add_tensor("b", b);
    let x = chain.add_atom("a");
    let y = chain.add_atom("b");
    chain.bond((x, 1), (y, 0)).open((x, 0)).open((y, 1));
    let r = verify_mapping_commutes(&m, &chain, 5, seed, FERMION_TOL).map_err(|e| e.to_string())?;

    Ok(FreeFermionReport {
        modes,
        single_max_error: single,
        chain_deviation: r.max_deviation,
        passed: single <= FERMION_TOL && r.passed,
    })
}
