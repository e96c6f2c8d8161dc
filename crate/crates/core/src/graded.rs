//! Z2- and Z-graded (fermionic) array tensors.
//!
//! Every basis element of a slot carries a grade; payloads vanish on
//! configurations whose total grade is odd (Z2) or nonzero (Z). Slots also
//! carry a direction flag which the dual flips, so that bonds between two
//! outputs are caught even when the grades alone are self-dual.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::error::Error;
use crate::scalars::Field;
use crate::tensor::{check_permutation, for_each_config, strides, Flags, TensorType};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedIndex {
    pub grades: Vec<i32>,
    pub dual: bool,
}

impl GradedIndex {
    pub fn new(grades: Vec<i32>) -> Self {
        GradedIndex { grades, dual: false }
    }
    pub fn dim(&self) -> usize {
        self.grades.len()
    }
    pub fn parity(&self, i: usize) -> u32 {
        (self.grades[i].rem_euclid(2)) as u32
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradedTensor<E> {
    slots: Vec<GradedIndex>,
    entries: Vec<E>,
}

impl<E: Copy> GradedTensor<E> {
    pub fn slots(&self) -> &[GradedIndex] {
        &self.slots
    }
    pub fn entries(&self) -> &[E] {
        &self.entries
    }
    pub fn dims(&self) -> Vec<usize> {
        self.slots.iter().map(|s| s.dim()).collect()
    }
    pub fn get(&self, cfg: &[usize]) -> E {
        let s = strides(&self.dims());
        self.entries[cfg.iter().zip(&s).map(|(c, s)| c * s).sum::<usize>()]
    }
}

#[derive(Clone, Debug)]
pub struct GradedType<F> {
    pub ring: F,
    /// Integer grades with a grade-negating dual instead of Z2 parities.
    pub z_graded: bool,
}

impl<F: Field> GradedType<F> {
    pub fn z2(ring: F) -> Self {
        GradedType { ring, z_graded: false }
    }
    pub fn z(ring: F) -> Self {
        GradedType { ring, z_graded: true }
    }

    fn allowed(&self, total: i32) -> bool {
        if self.z_graded {
            total == 0
        } else {
            total.rem_euclid(2) == 0
        }
    }

    fn check_index(&self, a: &GradedIndex) -> Result<(), Error> {
        if !self.z_graded && a.grades.iter().any(|g| *g != 0 && *g != 1) {
            return Err(Error::InvalidParameter(format!("Z2 parities must be 0 or 1, got {:?}", a.grades)));
        }
        Ok(())
    }

    /// Builds a tensor, rejecting nonzero entries on forbidden configurations.
    pub fn tensor(&self, slots: Vec<GradedIndex>, entries: Vec<F::Elem>) -> Result<GradedTensor<F::Elem>, Error> {
        for s in &slots {
            self.check_index(s)?;
        }
        let dims: Vec<usize> = slots.iter().map(|s| s.dim()).collect();
        let size: usize = dims.iter().product();
        if size != entries.len() {
            return Err(Error::ShapeMismatch(format!("shape {:?} needs {size} entries, got {}", dims, entries.len())));
        }
        let zero = self.ring.zero_elem();
        let mut idx = 0;
        let mut bad = None;
        for_each_config(&dims, |cfg| {
            let total: i32 = cfg.iter().zip(&slots).map(|(&c, s)| s.grades[c]).sum();
            if !self.allowed(total) && entries[idx] != zero && bad.is_none() {
                bad = Some(cfg.to_vec());
            }
            idx += 1;
        });
        if let Some(cfg) = bad {
            return Err(Error::SymmetryViolation(format!("nonzero entry at forbidden configuration {:?}", cfg)));
        }
        Ok(GradedTensor { slots, entries })
    }

    pub fn g_tensor_product(&self, a: &GradedTensor<F::Elem>, b: &GradedTensor<F::Elem>) -> GradedTensor<F::Elem> {
        let mut entries = Vec::with_capacity(a.entries.len() * b.entries.len());
        for &x in &a.entries {
            for &y in &b.entries {
                entries.push(self.ring.mul(x, y));
            }
        }
        let mut slots = a.slots.clone();
        slots.extend_from_slice(&b.slots);
        GradedTensor { slots, entries }
    }

    /// Slot permutation with the Koszul sign `(-1)^{|j||k|}` for every pair of
    /// slots whose order is exchanged.
    pub fn g_permute(&self, a: &GradedTensor<F::Elem>, perm: &[usize]) -> Result<GradedTensor<F::Elem>, Error> {
        check_permutation(perm, a.slots.len())?;
        let dims = a.dims();
        let s = strides(&dims);
        let slots: Vec<GradedIndex> = perm.iter().map(|&p| a.slots[p].clone()).collect();
        let out_dims: Vec<usize> = slots.iter().map(|s| s.dim()).collect();
        let inversions: Vec<(usize, usize)> = (0..perm.len())
            .flat_map(|k| (k + 1..perm.len()).map(move |l| (k, l)))
            .filter(|&(k, l)| perm[k] > perm[l])
            .collect();
        let mut entries = Vec::with_capacity(a.entries.len());
        for_each_config(&out_dims, |cfg| {
            let off: usize = cfg.iter().zip(perm).map(|(&c, &p)| c * s[p]).sum();
            let odd = inversions
                .iter()
                .filter(|&&(k, l)| slots[k].parity(cfg[k]) & slots[l].parity(cfg[l]) == 1)
                .count();
            let v = a.entries[off];
            entries.push(if odd % 2 == 1 { self.ring.negate(v) } else { v });
        });
        Ok(GradedTensor { slots, entries })
    }

    /// Exchanges the adjacent slots `at` and `at + 1`.
    pub fn g_commutor(&self, a: &GradedTensor<F::Elem>, at: usize) -> Result<GradedTensor<F::Elem>, Error> {
        let n = a.slots.len();
        if at + 1 >= n {
            return Err(Error::InvalidPermutation(format!("no adjacent pair at {at} of {n}")));
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(at, at + 1);
        self.g_permute(a, &perm)
    }

    /// Plain Einstein sum over slots `i` and `j`, which must be dual.
    pub fn g_contract(&self, a: &GradedTensor<F::Elem>, i: usize, j: usize) -> Result<GradedTensor<F::Elem>, Error> {
        let n = a.slots.len();
        if i >= n || j >= n || i == j {
            return Err(Error::ShapeMismatch(format!("cannot pair slots {i} and {j} of {n}")));
        }
        self.check_pair(&a.slots[i], &a.slots[j])?;
        let dims = a.dims();
        let s = strides(&dims);
        let keep: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
        let slots: Vec<GradedIndex> = keep.iter().map(|&k| a.slots[k].clone()).collect();
        let out_dims: Vec<usize> = slots.iter().map(|s| s.dim()).collect();
        let mut entries = Vec::with_capacity(out_dims.iter().product());
        for_each_config(&out_dims, |cfg| {
            let base: usize = cfg.iter().zip(&keep).map(|(&c, &k)| c * s[k]).sum();
            let mut acc = self.ring.zero_elem();
            for x in 0..dims[i] {
                acc = self.ring.add(acc, a.entries[base + x * (s[i] + s[j])]);
            }
            entries.push(acc);
        });
        Ok(GradedTensor { slots, entries })
    }

    /// Diagonal sign `(-1)^{|j||k|}` on slot `at`, read as the product of
    /// `first` and `second`.
    pub fn g_dual_automorphor(
        &self,
        a: &GradedTensor<F::Elem>,
        at: usize,
        first: &GradedIndex,
        second: &GradedIndex,
    ) -> Result<GradedTensor<F::Elem>, Error> {
        if at >= a.slots.len() || a.slots[at].dim() != first.dim() * second.dim() {
            return Err(Error::ShapeMismatch(format!("slot {at} is not a product of the given factors")));
        }
        let dims = a.dims();
        let m = second.dim();
        let mut entries = a.entries.clone();
        let mut idx = 0;
        for_each_config(&dims, |cfg| {
            let (j, k) = (cfg[at] / m, cfg[at] % m);
            if first.parity(j) & second.parity(k) == 1 {
                entries[idx] = self.ring.negate(entries[idx]);
            }
            idx += 1;
        });
        Ok(GradedTensor { slots: a.slots.clone(), entries })
    }
}

impl<F: Field> TensorType for GradedType<F> {
    type Index = GradedIndex;
    type Tensor = GradedTensor<F::Elem>;

    fn name(&self) -> String {
        format!("graded{}/{}", if self.z_graded { "-z" } else { "" }, self.ring.name())
    }
    fn flags(&self) -> Flags {
        Flags {
            symmetric_contraction: false,
            symmetric_identity: false,
            strict_associativity: true,
            has_dual: true,
            has_identity: true,
        }
    }
    fn slots(&self, t: &Self::Tensor) -> Vec<GradedIndex> {
        t.slots.clone()
    }
    fn dual(&self, a: &GradedIndex) -> GradedIndex {
        let grades = if self.z_graded { a.grades.iter().map(|g| -g).collect() } else { a.grades.clone() };
        GradedIndex { grades, dual: !a.dual }
    }
    fn index_product(&self, a: &GradedIndex, b: &GradedIndex) -> Result<GradedIndex, Error> {
        if a.dual != b.dual {
            return Err(Error::DirectionViolation("cannot block slots of opposite direction".into()));
        }
        let mut grades = Vec::with_capacity(a.dim() * b.dim());
        for &x in &a.grades {
            for &y in &b.grades {
                grades.push(if self.z_graded { x + y } else { (x + y) % 2 });
            }
        }
        Ok(GradedIndex { grades, dual: a.dual })
    }
    fn unit_index(&self) -> GradedIndex {
        GradedIndex::new(alloc::vec![0])
    }
    fn trivial(&self) -> Self::Tensor {
        GradedTensor { slots: Vec::new(), entries: alloc::vec![self.ring.one()] }
    }
    fn tensor_product(&self, a: &Self::Tensor, b: &Self::Tensor) -> Result<Self::Tensor, Error> {
        Ok(self.g_tensor_product(a, b))
    }
    fn permute(&self, a: &Self::Tensor, perm: &[usize]) -> Result<Self::Tensor, Error> {
        self.g_permute(a, perm)
    }
    fn contract(&self, a: &Self::Tensor) -> Result<Self::Tensor, Error> {
        let n = a.slots.len();
        if n < 2 {
            return Err(Error::ShapeMismatch("contraction needs two slots".into()));
        }
        self.g_contract(a, n - 2, n - 1)
    }
    fn identity(&self, a: &GradedIndex) -> Result<Self::Tensor, Error> {
        let d = a.dim();
        let (zero, one) = (self.ring.zero_elem(), self.ring.one());
        let entries = (0..d * d).map(|k| if k / d == k % d { one } else { zero }).collect();
        Ok(GradedTensor { slots: alloc::vec![self.dual(a), a.clone()], entries })
    }
    fn block(&self, a: &Self::Tensor, at: usize) -> Result<Self::Tensor, Error> {
        if at + 1 >= a.slots.len() {
            return Err(Error::ShapeMismatch(format!("cannot block slot {at}")));
        }
        let mut slots = a.slots.clone();
        let second = slots.remove(at + 1);
        slots[at] = self.index_product(&slots[at], &second)?;
        Ok(GradedTensor { slots, entries: a.entries.clone() })
    }
    fn split(&self, a: &Self::Tensor, at: usize, first: &GradedIndex, second: &GradedIndex) -> Result<Self::Tensor, Error> {
        if at >= a.slots.len() || a.slots[at] != self.index_product(first, second)? {
            return Err(Error::ShapeMismatch(format!("slot {at} is not the product of the given factors")));
        }
        let mut slots = a.slots.clone();
        slots[at] = first.clone();
        slots.insert(at + 1, second.clone());
        Ok(GradedTensor { slots, entries: a.entries.clone() })
    }
    fn dual_automorphor(&self, a: &Self::Tensor, at: usize, first: &GradedIndex, second: &GradedIndex) -> Result<Self::Tensor, Error> {
        self.g_dual_automorphor(a, at, first, second)
    }
    fn deviation(&self, a: &Self::Tensor, b: &Self::Tensor) -> f64 {
        if a.slots != b.slots {
            return f64::INFINITY;
        }
        a.entries
            .iter()
            .zip(&b.entries)
            .map(|(&x, &y)| self.ring.deviation(x, y))
            .fold(0.0, f64::max)
    }
    fn is_exact(&self) -> bool {
        false
    }
    fn random_index(&self, rng: &mut dyn RngCore, budget: usize) -> GradedIndex {
        let d = rng.gen_range(1..=budget.max(1));
        let grades = (0..d)
            .map(|_| if self.z_graded { rng.gen_range(-1..=1) } else { rng.gen_range(0..=1) })
            .collect();
        GradedIndex { grades, dual: rng.gen() }
    }
    fn random_tensor(&self, slots: &[GradedIndex], rng: &mut dyn RngCore) -> Option<Self::Tensor> {
        let dims: Vec<usize> = slots.iter().map(|s| s.dim()).collect();
        let mut entries = Vec::with_capacity(dims.iter().product());
        for_each_config(&dims, |cfg| {
            let total: i32 = cfg.iter().zip(slots).map(|(&c, s)| s.grades[c]).sum();
            entries.push(if self.allowed(total) { self.ring.sample(rng) } else { self.ring.zero_elem() });
        });
        Some(GradedTensor { slots: slots.to_vec(), entries })
    }
    fn cost(&self, slots: &[GradedIndex]) -> f64 {
        slots.iter().map(|s| s.dim() as f64).product()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Real64;
    use alloc::vec;

    fn idx(p: &[i32]) -> GradedIndex {
        GradedIndex::new(p.to_vec())
    }

    #[test]
    fn odd_support_rejected() {
        let g = GradedType::z2(Real64);
        assert!(g.tensor(vec![idx(&[0, 1])], vec![1.0, 2.0]).is_err());
        assert!(g.tensor(vec![idx(&[0, 1])], vec![1.0, 0.0]).is_ok());
    }

    #[test]
    fn commutor_signs_odd_odd() {
        let g = GradedType::z2(Real64);
        let a = g.tensor(vec![idx(&[0, 1]), idx(&[0, 1])], vec![1.0, 0.0, 0.0, 2.0]).unwrap();
        let s = g.g_commutor(&a, 0).unwrap();
        assert_eq!(s.entries(), &[1.0, 0.0, 0.0, -2.0]);
        assert_eq!(g.g_commutor(&s, 0).unwrap(), a);
    }

    #[test]
    fn automorphor_is_diagonal() {
        let g = GradedType::z2(Real64);
        let a = g.tensor(vec![idx(&[0, 1, 1, 0]), idx(&[0, 1, 1, 0])], (0..16).map(|k| {
            let (i, j) = (k / 4, k % 4);
            if [0, 1, 1, 0][i] == [0, 1, 1, 0][j] { k as f64 } else { 0.0 }
        }).collect()).unwrap();
        let d = g.g_dual_automorphor(&a, 0, &idx(&[0, 1]), &idx(&[0, 1])).unwrap();
        assert_eq!(d.get(&[3, 0]), -a.get(&[3, 0]));
        assert_eq!(d.get(&[1, 1]), a.get(&[1, 1]));
        let back = g.g_dual_automorphor(&d, 0, &idx(&[0, 1]), &idx(&[0, 1])).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn z_dual_negates() {
        let g = GradedType::z(Real64);
        let d = g.dual(&idx(&[0, -1, 1]));
        assert_eq!(d.grades, vec![0, 1, -1]);
        assert!(d.dual);
        assert_eq!(g.dual(&d), idx(&[0, -1, 1]));
    }
}
