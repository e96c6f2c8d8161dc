//! Skeletal array tensors over a commutative semiring.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::error::Error;
use crate::scalars::Semiring;
use crate::tensor::{check_permutation, for_each_config, strides, Flags, TensorType};

/// A dense row-major array; slot `k` has dimension `shape[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Array<E> {
    shape: Vec<usize>,
    entries: Vec<E>,
}

impl<E: Copy> Array<E> {
    pub fn new(shape: Vec<usize>, entries: Vec<E>) -> Result<Self, Error> {
        let size: usize = shape.iter().product();
        if size != entries.len() {
            return Err(Error::ShapeMismatch(format!(
                "shape {:?} needs {size} entries, got {}",
                shape,
                entries.len()
            )));
        }
        Ok(Array { shape, entries })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }
    pub fn entries(&self) -> &[E] {
        &self.entries
    }
    pub fn get(&self, cfg: &[usize]) -> E {
        let s = strides(&self.shape);
        self.entries[cfg.iter().zip(&s).map(|(c, s)| c * s).sum::<usize>()]
    }
}

/// The array tensor type over ring `R`.
#[derive(Clone, Debug)]
pub struct ArrayType<R> {
    pub ring: R,
}

impl<R: Semiring> ArrayType<R> {
    pub fn new(ring: R) -> Self {
        ArrayType { ring }
    }

    pub fn kron(&self, a: &Array<R::Elem>, b: &Array<R::Elem>) -> Array<R::Elem> {
        let mut entries = Vec::with_capacity(a.entries.len() * b.entries.len());
        for &x in &a.entries {
            for &y in &b.entries {
                entries.push(self.ring.mul(x, y));
            }
        }
        let mut shape = a.shape.clone();
        shape.extend_from_slice(&b.shape);
        Array { shape, entries }
    }

    /// Sums over configurations where slots `i` and `j` agree; the remaining
    /// slots keep their order.
    pub fn einsum_pair(&self, a: &Array<R::Elem>, i: usize, j: usize) -> Result<Array<R::Elem>, Error> {
        let n = a.shape.len();
        if i >= n || j >= n || i == j {
            return Err(Error::ShapeMismatch(format!("cannot pair slots {i} and {j} of {n}")));
        }
        if a.shape[i] != a.shape[j] {
            return Err(Error::IndexMismatch(format!(
                "dimensions {} and {} differ",
                a.shape[i], a.shape[j]
            )));
        }
        let zero = self
            .ring
            .zero()
            .ok_or_else(|| Error::NoIdentity(format!("{} has no zero for empty sums", self.ring.name())))?;
        let keep: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
        let out_shape: Vec<usize> = keep.iter().map(|&k| a.shape[k]).collect();
        let s = strides(&a.shape);
        let d = a.shape[i];
        let mut entries = Vec::with_capacity(out_shape.iter().product());
        for_each_config(&out_shape, |cfg| {
            let base: usize = cfg.iter().zip(&keep).map(|(&c, &k)| c * s[k]).sum();
            let mut acc = zero;
            for x in 0..d {
                acc = self.ring.add(acc, a.entries[base + x * (s[i] + s[j])]);
            }
            entries.push(acc);
        });
        Ok(Array { shape: out_shape, entries })
    }

    pub fn permute_array(&self, a: &Array<R::Elem>, perm: &[usize]) -> Result<Array<R::Elem>, Error> {
        check_permutation(perm, a.shape.len())?;
        let s = strides(&a.shape);
        let shape: Vec<usize> = perm.iter().map(|&p| a.shape[p]).collect();
        let mut entries = Vec::with_capacity(a.entries.len());
        for_each_config(&shape, |cfg| {
            let off: usize = cfg.iter().zip(perm).map(|(&c, &p)| c * s[p]).sum();
            entries.push(a.entries[off]);
        });
        Ok(Array { shape, entries })
    }

    pub fn identity_array(&self, dim: usize) -> Result<Array<R::Elem>, Error> {
        let zero = self
            .ring
            .zero()
            .ok_or_else(|| Error::NoIdentity(format!("{} has no zero", self.ring.name())))?;
        let one = self.ring.one();
        let entries = (0..dim * dim).map(|k| if k / dim == k % dim { one } else { zero }).collect();
        Ok(Array { shape: vec![dim, dim], entries })
    }

    pub fn trivial_array(&self) -> Array<R::Elem> {
        Array { shape: Vec::new(), entries: vec![self.ring.one()] }
    }
}

impl<R: Semiring> TensorType for ArrayType<R> {
    type Index = usize;
    type Tensor = Array<R::Elem>;

    fn name(&self) -> String {
        format!("array/{}", self.ring.name())
    }
    fn flags(&self) -> Flags {
        Flags {
            symmetric_contraction: true,
            symmetric_identity: true,
            strict_associativity: true,
            has_dual: false,
            has_identity: self.ring.has_zero(),
        }
    }
    fn slots(&self, t: &Array<R::Elem>) -> Vec<usize> {
        t.shape.clone()
    }
    fn dual(&self, a: &usize) -> usize {
        *a
    }
    fn index_product(&self, a: &usize, b: &usize) -> Result<usize, Error> {
        Ok(a * b)
    }
    fn unit_index(&self) -> usize {
        1
    }
    fn trivial(&self) -> Array<R::Elem> {
        self.trivial_array()
    }
    fn tensor_product(&self, a: &Array<R::Elem>, b: &Array<R::Elem>) -> Result<Array<R::Elem>, Error> {
        Ok(self.kron(a, b))
    }
    fn permute(&self, a: &Array<R::Elem>, perm: &[usize]) -> Result<Array<R::Elem>, Error> {
        self.permute_array(a, perm)
    }
    fn contract(&self, a: &Array<R::Elem>) -> Result<Array<R::Elem>, Error> {
        let n = a.shape.len();
        if n < 2 {
            return Err(Error::ShapeMismatch("contraction needs two slots".into()));
        }
        self.einsum_pair(a, n - 2, n - 1)
    }
    fn identity(&self, a: &usize) -> Result<Array<R::Elem>, Error> {
        self.identity_array(*a)
    }
    fn block(&self, a: &Array<R::Elem>, at: usize) -> Result<Array<R::Elem>, Error> {
        if at + 1 >= a.shape.len() {
            return Err(Error::ShapeMismatch(format!("cannot block slot {at}")));
        }
        let mut shape = a.shape.clone();
        let d = shape.remove(at + 1);
        shape[at] *= d;
        Ok(Array { shape, entries: a.entries.clone() })
    }
    fn split(&self, a: &Array<R::Elem>, at: usize, first: &usize, second: &usize) -> Result<Array<R::Elem>, Error> {
        if at >= a.shape.len() || a.shape[at] != first * second {
            return Err(Error::ShapeMismatch(format!("cannot split slot {at} into {first}x{second}")));
        }
        let mut shape = a.shape.clone();
        shape[at] = *first;
        shape.insert(at + 1, *second);
        Ok(Array { shape, entries: a.entries.clone() })
    }
    fn deviation(&self, a: &Array<R::Elem>, b: &Array<R::Elem>) -> f64 {
        if a.shape != b.shape {
            return f64::INFINITY;
        }
        a.entries
            .iter()
            .zip(&b.entries)
            .map(|(&x, &y)| self.ring.deviation(x, y))
            .fold(0.0, f64::max)
    }
    fn is_exact(&self) -> bool {
        self.ring.is_exact()
    }
    fn random_index(&self, rng: &mut dyn RngCore, budget: usize) -> usize {
        rng.gen_range(1..=budget.max(1))
    }
    fn random_tensor(&self, slots: &[usize], rng: &mut dyn RngCore) -> Option<Array<R::Elem>> {
        let size: usize = slots.iter().product();
        let entries = (0..size).map(|_| self.ring.sample(rng)).collect();
        Some(Array { shape: slots.to_vec(), entries })
    }
    fn cost(&self, slots: &[usize]) -> f64 {
        slots.iter().map(|&d| d as f64).product()
    }
}

/// An array indexed by arbitrary finite label sets: the finite-set
/// formulation, as a map from label configurations to entries.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledArray<L: Ord, E> {
    pub labels: Vec<Vec<L>>,
    pub entries: BTreeMap<Vec<L>, E>,
}

fn check_labeling<L: Ord + Clone + core::fmt::Debug>(labels: &[L]) -> Result<(), Error> {
    let mut sorted = labels.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != labels.len() {
        return Err(Error::InvalidParameter(format!("labeling {:?} is not a bijection", labels)));
    }
    Ok(())
}

/// Represents a skeletal array on label sets: entry at positions `i` sits at
/// labels `labelings[k][i_k]`.
pub fn skeleton_embed<L: Ord + Clone + core::fmt::Debug, E: Copy>(
    a: &Array<E>,
    labelings: &[Vec<L>],
) -> Result<LabeledArray<L, E>, Error> {
    if labelings.len() != a.shape.len() {
        return Err(Error::ShapeMismatch(format!("{} labelings for {} slots", labelings.len(), a.shape.len())));
    }
    for (k, l) in labelings.iter().enumerate() {
        check_labeling(l)?;
        if l.len() != a.shape[k] {
            return Err(Error::InvalidParameter(format!(
                "slot {k} has dimension {} but {} labels",
                a.shape[k],
                l.len()
            )));
        }
    }
    let mut entries = BTreeMap::new();
    let mut idx = 0;
    for_each_config(&a.shape, |cfg| {
        let key: Vec<L> = cfg.iter().enumerate().map(|(k, &c)| labelings[k][c].clone()).collect();
        entries.insert(key, a.entries[idx]);
        idx += 1;
    });
    Ok(LabeledArray { labels: labelings.to_vec(), entries })
}

/// Chooses positions for labels: label `labelings[k][i]` goes to position
/// `i` of slot `k`.
pub fn skeleton_project<L: Ord + Clone + core::fmt::Debug, E: Copy>(
    a: &LabeledArray<L, E>,
    labelings: &[Vec<L>],
) -> Result<Array<E>, Error> {
    if labelings.len() != a.labels.len() {
        return Err(Error::ShapeMismatch(format!("{} labelings for {} slots", labelings.len(), a.labels.len())));
    }
    for (k, l) in labelings.iter().enumerate() {
        check_labeling(l)?;
        let mut mine = a.labels[k].clone();
        let mut theirs = l.clone();
        mine.sort();
        theirs.sort();
        if mine != theirs {
            return Err(Error::InvalidParameter(format!("labeling of slot {k} does not match its label set")));
        }
    }
    let shape: Vec<usize> = labelings.iter().map(|l| l.len()).collect();
    let mut entries = Vec::with_capacity(shape.iter().product());
    let mut missing = false;
    for_each_config(&shape, |cfg| {
        let key: Vec<L> = cfg.iter().enumerate().map(|(k, &c)| labelings[k][c].clone()).collect();
        match a.entries.get(&key) {
            Some(&e) => entries.push(e),
            None => missing = true,
        }
    });
    if missing {
        return Err(Error::ShapeMismatch("labeled array is missing configurations".into()));
    }
    Array::new(shape, entries)
}
