//! Prefactor pairing tensors: perfect matchings of dots with a real prefactor.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};

use crate::error::Error;
use crate::tensor::{check_permutation, Flags, TensorType};

#[derive(Clone, Debug, PartialEq)]
pub struct Pairing {
    slot_dots: Vec<usize>,
    /// Sorted, each pair with the smaller dot first.
    pairs: Vec<(usize, usize)>,
    prefactor: f64,
}

fn canonical(mut pairs: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    for p in pairs.iter_mut() {
        if p.0 > p.1 {
            *p = (p.1, p.0);
        }
    }
    pairs.sort_unstable();
    pairs
}

impl Pairing {
    pub fn new(slot_dots: Vec<usize>, pairs: Vec<(usize, usize)>, prefactor: f64) -> Result<Self, Error> {
        let total: usize = slot_dots.iter().sum();
        let mut seen = vec![false; total];
        for &(a, b) in &pairs {
            for d in [a, b] {
                if d >= total || seen[d] {
                    return Err(Error::InvalidParameter(format!("{:?} is not a perfect matching of {total} dots", pairs)));
                }
                seen[d] = true;
            }
            if a == b {
                return Err(Error::InvalidParameter(format!("dot {a} paired with itself")));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidParameter(format!("{:?} leaves dots unpaired", pairs)));
        }
        Ok(Pairing { slot_dots, pairs: canonical(pairs), prefactor })
    }

    pub fn slot_dots(&self) -> &[usize] {
        &self.slot_dots
    }
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
    pub fn prefactor(&self) -> f64 {
        self.prefactor
    }
    pub fn total_dots(&self) -> usize {
        self.slot_dots.iter().sum()
    }
    fn partner(&self) -> Vec<usize> {
        let mut p = vec![0; self.total_dots()];
        for &(a, b) in &self.pairs {
            p[a] = b;
            p[b] = a;
        }
        p
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PairingType;

impl PairingType {
    pub fn p_tensor_product(&self, a: &Pairing, b: &Pairing) -> Pairing {
        let off = a.total_dots();
        let mut pairs = a.pairs.clone();
        pairs.extend(b.pairs.iter().map(|&(x, y)| (x + off, y + off)));
        let mut slot_dots = a.slot_dots.clone();
        slot_dots.extend_from_slice(&b.slot_dots);
        Pairing { slot_dots, pairs, prefactor: a.prefactor * b.prefactor }
    }

    /// Glues the dots of slot `x` positionally to those of slot `y`; every
    /// closed loop doubles the prefactor.
    pub fn p_contract(&self, a: &Pairing, x: usize, y: usize) -> Result<Pairing, Error> {
        let n = a.slot_dots.len();
        if x >= n || y >= n || x == y {
            return Err(Error::ShapeMismatch(format!("cannot pair slots {x} and {y} of {n}")));
        }
        if a.slot_dots[x] != a.slot_dots[y] {
            return Err(Error::IndexMismatch(format!(
                "dot counts {} and {} differ",
                a.slot_dots[x], a.slot_dots[y]
            )));
        }
        let offsets: Vec<usize> = a
            .slot_dots
            .iter()
            .scan(0, |acc, &d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect();
        let total = a.total_dots();
        let partner = a.partner();
        // Dashed lines between the glued dots.
        let mut glue = vec![usize::MAX; total];
        for k in 0..a.slot_dots[x] {
            let (p, q) = (offsets[x] + k, offsets[y] + k);
            glue[p] = q;
            glue[q] = p;
        }
        let glued = |d: usize| glue[d] != usize::MAX;
        // New labels for surviving dots.
        let mut label = vec![usize::MAX; total];
        let mut next = 0;
        for d in 0..total {
            if !glued(d) {
                label[d] = next;
                next += 1;
            }
        }
        let mut visited = vec![false; total];
        let mut pairs = Vec::new();
        for start in 0..total {
            if glued(start) || visited[start] {
                continue;
            }
            visited[start] = true;
            let mut d = partner[start];
            while glued(d) {
                visited[d] = true;
                let e = glue[d];
                visited[e] = true;
                d = partner[e];
            }
            visited[d] = true;
            pairs.push((label[start], label[d]));
        }
        let mut loops = 0;
        for start in 0..total {
            if visited[start] {
                continue;
            }
            loops += 1;
            let mut d = start;
            loop {
                visited[d] = true;
                let e = partner[d];
                visited[e] = true;
                d = glue[e];
                if d == start {
                    break;
                }
            }
        }
        let slot_dots = a.slot_dots.iter().enumerate().filter(|&(k, _)| k != x && k != y).map(|(_, &d)| d).collect();
        Ok(Pairing { slot_dots, pairs: canonical(pairs), prefactor: a.prefactor * libm::pow(2.0, loops as f64) })
    }

    pub fn p_identity(&self, dots: usize) -> Pairing {
        Pairing { slot_dots: vec![dots, dots], pairs: (0..dots).map(|i| (i, i + dots)).collect(), prefactor: 1.0 }
    }

    fn relabel(&self, a: &Pairing, perm: &[usize]) -> Pairing {
        let old_off: Vec<usize> = offsets(&a.slot_dots);
        let slot_dots: Vec<usize> = perm.iter().map(|&p| a.slot_dots[p]).collect();
        let new_off = offsets(&slot_dots);
        let mut map = vec![0; a.total_dots()];
        for (k, &p) in perm.iter().enumerate() {
            for i in 0..a.slot_dots[p] {
                map[old_off[p] + i] = new_off[k] + i;
            }
        }
        let pairs = canonical(a.pairs.iter().map(|&(x, y)| (map[x], map[y])).collect());
        Pairing { slot_dots, pairs, prefactor: a.prefactor }
    }
}

fn offsets(dots: &[usize]) -> Vec<usize> {
    let mut o = Vec::with_capacity(dots.len());
    let mut acc = 0;
    for &d in dots {
        o.push(acc);
        acc += d;
    }
    o
}

/// Number of perfect matchings on `dots` dots: `(2n)!/(n! 2^n)`, zero for odd.
pub fn p_count(dots: usize) -> u128 {
    if dots % 2 == 1 {
        return 0;
    }
    (1..dots as u128).step_by(2).product()
}

impl TensorType for PairingType {
    type Index = usize;
    type Tensor = Pairing;

    fn name(&self) -> String {
        "pairing".into()
    }
    fn flags(&self) -> Flags {
        Flags {
            symmetric_contraction: true,
            symmetric_identity: true,
            strict_associativity: true,
            has_dual: false,
            has_identity: true,
        }
    }
    fn slots(&self, t: &Pairing) -> Vec<usize> {
        t.slot_dots.clone()
    }
    fn dual(&self, a: &usize) -> usize {
        *a
    }
    fn index_product(&self, a: &usize, b: &usize) -> Result<usize, Error> {
        Ok(a + b)
    }
    fn unit_index(&self) -> usize {
        0
    }
    fn trivial(&self) -> Pairing {
        Pairing { slot_dots: Vec::new(), pairs: Vec::new(), prefactor: 1.0 }
    }
    fn tensor_product(&self, a: &Pairing, b: &Pairing) -> Result<Pairing, Error> {
        Ok(self.p_tensor_product(a, b))
    }
    fn permute(&self, a: &Pairing, perm: &[usize]) -> Result<Pairing, Error> {
        check_permutation(perm, a.slot_dots.len())?;
        Ok(self.relabel(a, perm))
    }
    fn contract(&self, a: &Pairing) -> Result<Pairing, Error> {
        let n = a.slot_dots.len();
        if n < 2 {
            return Err(Error::ShapeMismatch("contraction needs two slots".into()));
        }
        self.p_contract(a, n - 2, n - 1)
    }
    fn identity(&self, a: &usize) -> Result<Pairing, Error> {
        Ok(self.p_identity(*a))
    }
    fn block(&self, a: &Pairing, at: usize) -> Result<Pairing, Error> {
        if at + 1 >= a.slot_dots.len() {
            return Err(Error::ShapeMismatch(format!("cannot block slot {at}")));
        }
        let mut t = a.clone();
        let d = t.slot_dots.remove(at + 1);
        t.slot_dots[at] += d;
        Ok(t)
    }
    fn split(&self, a: &Pairing, at: usize, first: &usize, second: &usize) -> Result<Pairing, Error> {
        if at >= a.slot_dots.len() || a.slot_dots[at] != first + second {
            return Err(Error::ShapeMismatch(format!("cannot split slot {at} into {first}+{second}")));
        }
        let mut t = a.clone();
        t.slot_dots[at] = *first;
        t.slot_dots.insert(at + 1, *second);
        Ok(t)
    }
    fn deviation(&self, a: &Pairing, b: &Pairing) -> f64 {
        if a.slot_dots != b.slot_dots || a.pairs != b.pairs {
            return f64::INFINITY;
        }
        let d = libm::fabs(a.prefactor - b.prefactor);
        if libm::fabs(a.prefactor) > 1.0 {
            d / libm::fabs(a.prefactor)
        } else {
            d
        }
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn random_index(&self, rng: &mut dyn RngCore, budget: usize) -> usize {
        rng.gen_range(0..=budget)
    }
    fn random_tensor(&self, slots: &[usize], rng: &mut dyn RngCore) -> Option<Pairing> {
        let total: usize = slots.iter().sum();
        if total % 2 == 1 {
            return None;
        }
        let mut dots: Vec<usize> = (0..total).collect();
        dots.shuffle(rng);
        let pairs = dots.chunks(2).map(|c| (c[0], c[1])).collect();
        // Small integer prefactors keep every product exact.
        let prefactor = rng.gen_range(1..=3) as f64;
        Some(Pairing { slot_dots: slots.to_vec(), pairs: canonical(pairs), prefactor })
    }
    fn cost(&self, slots: &[usize]) -> f64 {
        slots.iter().sum::<usize>() as f64
    }
}
