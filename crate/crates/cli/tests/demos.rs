use tensor_types_cli::demos::*;

// Neighbour pairs built from coordinates; wrap bonds only along sides
// longer than two.
fn lattice_bonds(w: usize, h: usize, periodic: bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let right = if x + 1 < w { Some(x + 1) } else if periodic && w > 2 { Some(0) } else { None };
            let down = if y + 1 < h { Some(y + 1) } else if periodic && h > 2 { Some(0) } else { None };
            if let Some(r) = right {
                out.push((y * w + x, y * w + r));
            }
            if let Some(d) = down {
                out.push((y * w + x, d * w + x));
            }
        }
    }
    out
}

// Sum of Boltzmann weights over all spin configurations with the observed
// spins fixed.
fn ising_brute(w: usize, h: usize, beta: f64, periodic: bool, observe: &[usize]) -> Vec<f64> {
    let n = w * h;
    let bonds = lattice_bonds(w, h, periodic);
    let mut z = vec![0.0; 1 << observe.len()];
    for s in 0..1usize << n {
        let spin = |v: usize| if s >> v & 1 == 0 { 1.0 } else { -1.0 };
        let e: f64 = bonds.iter().map(|&(a, b)| spin(a) * spin(b)).sum();
        let mut k = 0;
        for &o in observe {
            k = 2 * k + (s >> o & 1);
        }
        z[k] += (beta * e).exp();
    }
    z
}

#[test]
fn ising_matches_enumeration() {
    for (w, h, periodic) in [(3, 3, true), (3, 3, false), (2, 3, true), (4, 2, false), (1, 1, true)] {
        for beta in [0.0, 0.2, 0.4, 1.0] {
            for observe in [vec![], vec![0], vec![4 % (w * h), 0]] {
                let observe: Vec<usize> = if observe.len() == 2 && observe[0] == observe[1] { vec![0] } else { observe };
                let got = ising_partition(w, h, beta, periodic, &observe).unwrap();
                let want = ising_brute(w, h, beta, periodic, &observe);
                for (x, y) in got.iter().zip(&want) {
                    assert!((x - y).abs() <= 1e-10 * y, "{w}x{h} {periodic} beta {beta} {observe:?}");
                }
            }
        }
    }
    assert_eq!(ising_partition(2, 2, 0.0, false, &[]).unwrap(), vec![16.0]);
}

#[test]
fn cold_ferromagnet_is_symmetric() {
    let z = ising_partition(3, 3, 8.0, true, &[4]).unwrap();
    assert!((z[0] / (z[0] + z[1]) - 0.5).abs() < 1e-12);
    let z = ising_partition(3, 3, 8.0, true, &[0, 8]).unwrap();
    let total: f64 = z.iter().sum();
    assert!(((z[0] + z[3]) / total - 1.0).abs() < 1e-12);
}

#[test]
fn ising_rejects_bad_input() {
    assert!(ising_network(5, 4, 0.1, false, &[]).is_err());
    assert!(ising_network(2, 2, 0.1, false, &[4]).is_err());
    assert!(ising_network(2, 2, 0.1, false, &[1, 1]).is_err());
    assert!(ising_network(2, 2, f64::NAN, false, &[]).is_err());
}

// All edge subsets, boundary edges included; keeps those covering every
// vertex exactly once and records the boundary pattern.
fn dimer_brute(w: usize, h: usize) -> Vec<bool> {
    let mut internal = Vec::new();
    let mut boundary = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let v = y * w + x;
            if x + 1 < w {
                internal.push((v, v + 1));
            }
            if y + 1 < h {
                internal.push((v, v + w));
            }
            for out in [x == 0, x + 1 == w, y == 0, y + 1 == h] {
                if out {
                    boundary.push(v);
                }
            }
        }
    }
    let nb = boundary.len();
    let mut feasible = vec![false; 1 << nb];
    for bmask in 0..1usize << nb {
        let mut cover = vec![0; w * h];
        for (k, &v) in boundary.iter().enumerate() {
            if bmask >> (nb - 1 - k) & 1 == 1 {
                cover[v] += 1;
            }
        }
        for imask in 0..1usize << internal.len() {
            let mut c = cover.clone();
            for (k, &(a, b)) in internal.iter().enumerate() {
                if imask >> k & 1 == 1 {
                    c[a] += 1;
                    c[b] += 1;
                }
            }
            if c.iter().all(|&x| x == 1) {
                feasible[bmask] = true;
                break;
            }
        }
    }
    feasible
}

#[test]
fn dimer_matches_enumeration() {
    for (w, h) in [(1, 1), (2, 1), (2, 2), (3, 2), (1, 3)] {
        let a = dimer_feasibility(w, h).unwrap();
        assert_eq!(a.shape().len(), 2 * (w + h));
        assert_eq!(a.entries().len(), 1 << (2 * (w + h)));
        assert_eq!(a.entries(), &dimer_brute(w, h)[..], "{w}x{h}");
    }
    let one = dimer_feasibility(1, 1).unwrap();
    assert_eq!(one.entries().iter().filter(|&&x| x).count(), 4);
    assert!(!one.entries()[0]);
    assert!(dimer_feasibility(2, 2).unwrap().entries()[0]);
    assert!(!dimer_feasibility(3, 3).unwrap().entries()[0]);
    assert!(dimer_feasibility(0, 2).is_err());
    assert!(dimer_feasibility(5, 1).is_err());
}

#[test]
fn free_fermion_agrees() {
    for modes in 1..=4 {
        for seed in [0, 7, 11] {
            let r = free_fermion(modes, seed).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }
    assert_eq!(free_fermion(1, 3).unwrap().single_max_error, 0.0);
    assert!(free_fermion(0, 0).is_err());
    assert!(free_fermion(5, 0).is_err());
}
