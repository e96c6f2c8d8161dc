//! The tensor-type contract shared by every payload kind.
//!
//! All shipped types are skeletal and strictly associative: products of
//! 0-data are concatenations of slot lists, so associators and unitors are
//! identities and never materialize. A tensor carries its own slot list.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Debug;

use rand::RngCore;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Flags {
    /// Contracting `(j, j')` equals contracting `(j', j)`.
    pub symmetric_contraction: bool,
    /// The identity tensor is invariant under swapping its slots.
    pub symmetric_identity: bool,
    pub strict_associativity: bool,
    /// 0-data carry a non-trivial dual (directions matter on bonds).
    pub has_dual: bool,
    pub has_identity: bool,
}

pub trait TensorType {
    /// 0-data of one slot.
    type Index: Clone + Debug + PartialEq;
    /// 1-data, including its slot list.
    type Tensor: Clone + Debug;

    fn name(&self) -> String;
    fn flags(&self) -> Flags;

    fn slots(&self, t: &Self::Tensor) -> Vec<Self::Index>;
    fn dual(&self, a: &Self::Index) -> Self::Index;
    /// Product of two slot 0-data, i.e. the 0-data of the blocked slot.
    fn index_product(&self, a: &Self::Index, b: &Self::Index) -> Result<Self::Index, Error>;
    fn unit_index(&self) -> Self::Index;

    /// The unique tensor without slots and unit payload.
    fn trivial(&self) -> Self::Tensor;
    fn tensor_product(&self, a: &Self::Tensor, b: &Self::Tensor) -> Result<Self::Tensor, Error>;
    /// Result slot `k` is input slot `perm[k]`, with whatever commutor signs the
    /// type requires.
    fn permute(&self, a: &Self::Tensor, perm: &[usize]) -> Result<Self::Tensor, Error>;
    /// Contracts the last two slots, the second-to-last being the output
    /// (tail) and the last the input (head) of the bond.
    fn contract(&self, a: &Self::Tensor) -> Result<Self::Tensor, Error>;
    /// Identity on `a`, with slots `(dual(a), a)`: a bond into slot 0 and out
    /// of slot 1 passes straight through.
    fn identity(&self, a: &Self::Index) -> Result<Self::Tensor, Error>;

    /// Merges slots `at` and `at + 1` into one slot carrying their product.
    fn block(&self, a: &Self::Tensor, at: usize) -> Result<Self::Tensor, Error>;
    /// Inverse of `block`: splits slot `at` into two slots with the given 0-data.
    fn split(&self, a: &Self::Tensor, at: usize, first: &Self::Index, second: &Self::Index) -> Result<Self::Tensor, Error>;
    /// Dual automorphor on slot `at`, read as the product `first* ⊗ second*`:
    /// converts it into the dual of `first ⊗ second`. Identity for types where
    /// the two coincide canonically.
    fn dual_automorphor(
        &self,
        a: &Self::Tensor,
        _at: usize,
        _first: &Self::Index,
        _second: &Self::Index,
    ) -> Result<Self::Tensor, Error> {
        Ok(a.clone())
    }

    /// Max deviation between two tensors; infinite for structural mismatch.
    fn deviation(&self, a: &Self::Tensor, b: &Self::Tensor) -> f64;
    /// Tolerance appropriate for comparisons after a few operations.
    fn is_exact(&self) -> bool;

    /// A random slot 0-data whose size is bounded by `budget`.
    fn random_index(&self, rng: &mut dyn RngCore, budget: usize) -> Self::Index;
    /// A random tensor on the given slots, or `None` if no tensor exists there
    /// (e.g. an odd number of pairing dots).
    fn random_tensor(&self, slots: &[Self::Index], rng: &mut dyn RngCore) -> Option<Self::Tensor>;
    /// Payload size estimate used by the greedy planner.
    fn cost(&self, slots: &[Self::Index]) -> f64;

    /// Checks that slots `n-2` and `n-1` form a contractible (tail, head) pair.
    fn check_pair(&self, tail: &Self::Index, head: &Self::Index) -> Result<(), Error> {
        if *head == self.dual(tail) {
            Ok(())
        } else {
            Err(Error::IndexMismatch(format!("cannot contract {:?} with {:?}", tail, head)))
        }
    }
}

/// Validates a permutation of `n` items.
pub fn check_permutation(perm: &[usize], n: usize) -> Result<(), Error> {
    if perm.len() != n {
        return Err(Error::InvalidPermutation(format!("length {} for {n} slots", perm.len())));
    }
    let mut seen = alloc::vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation(format!("{:?} is not a bijection", perm)));
        }
        seen[p] = true;
    }
    Ok(())
}

pub fn inverse_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = alloc::vec![0; perm.len()];
    for (k, &p) in perm.iter().enumerate() {
        inv[p] = k;
    }
    inv
}

/// Moves slots `i` and `j` of an `n`-slot tensor to the end, in that order,
/// keeping the others in place.
pub fn pair_to_end(n: usize, i: usize, j: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
    perm.push(i);
    perm.push(j);
    perm
}

/// Contracts slot `i` (tail) with slot `j` (head) of `a`.
pub fn contract_pair<T: TensorType + ?Sized>(t: &T, a: &T::Tensor, i: usize, j: usize) -> Result<T::Tensor, Error> {
    let n = t.slots(a).len();
    if i >= n || j >= n || i == j {
        return Err(Error::InvalidPermutation(format!("cannot contract slots {i} and {j} of {n}")));
    }
    let perm = pair_to_end(n, i, j);
    let moved = if perm.iter().enumerate().all(|(k, &p)| k == p) { a.clone() } else { t.permute(a, &perm)? };
    t.contract(&moved)
}

/// Row-major strides for the given dimensions.
pub fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = alloc::vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Visits every multi-index of `dims` in row-major order.
pub fn for_each_config(dims: &[usize], mut f: impl FnMut(&[usize])) {
    if dims.iter().any(|&d| d == 0) {
        return;
    }
    let mut cfg = alloc::vec![0; dims.len()];
    loop {
        f(&cfg);
        let mut k = dims.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            cfg[k] += 1;
            if cfg[k] < dims[k] {
                break;
            }
            cfg[k] = 0;
        }
    }
}
