//! Schur-complement tensors.
//!
//! A rectangular tensor is a matrix whose rows are the in-modes and whose
//! columns are the out-modes of its slots, each concatenated in slot order. A
//! square tensor uses the same mode list for rows and columns. Contraction
//! subtracts the u-shift on the contracted modes and takes the Schur
//! complement onto the remaining ones; with prefactors enabled the
//! determinant (or Pfaffian) of the shifted block multiplies the prefactor.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::error::Error;
use crate::linalg::{self, Matrix};
use crate::scalars::Field;
use crate::tensor::{check_permutation, Flags, TensorType};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrefactorMode {
    None,
    Det,
    Pfaffian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    None,
    Sym,
    Anti,
}

/// Slot 0-data of a rectangular tensor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RectModes {
    pub n_in: usize,
    pub n_out: usize,
}

impl RectModes {
    pub fn new(n_in: usize, n_out: usize) -> Self {
        RectModes { n_in, n_out }
    }
    pub fn dual(self) -> Self {
        RectModes { n_in: self.n_out, n_out: self.n_in }
    }
    pub fn total(self) -> usize {
        self.n_in + self.n_out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchurTensor<E, I> {
    slots: Vec<I>,
    matrix: Matrix<E>,
    prefactor: E,
}

impl<E: Copy, I: Clone> SchurTensor<E, I> {
    pub fn slots(&self) -> &[I] {
        &self.slots
    }
    pub fn matrix(&self) -> &Matrix<E> {
        &self.matrix
    }
    pub fn prefactor(&self) -> E {
        self.prefactor
    }
}

fn offsets(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut acc = 0;
    sizes
        .map(|s| {
            let o = acc;
            acc += s;
            o
        })
        .collect()
}

/// Reorders mode blocks: block `k` of the result is block `perm[k]` of the
/// input.
fn block_order(sizes: &[usize], perm: &[usize]) -> Vec<usize> {
    let off = offsets(sizes.iter().copied());
    perm.iter().flat_map(|&p| off[p]..off[p] + sizes[p]).collect()
}

fn random_matrix<F: Field>(k: &F, rows: usize, cols: usize, rng: &mut dyn RngCore) -> Matrix<F::Elem> {
    // Frobenius norm at most 1/2, so shifted blocks stay well conditioned.
    let scale = 0.5 / libm::sqrt(((rows * cols).max(1)) as f64);
    Matrix::from_fn(rows, cols, |_, _| k.mul(k.sample(rng), k.from_f64(scale)))
}

fn tensor_deviation<F: Field, I: PartialEq>(k: &F, a: &SchurTensor<F::Elem, I>, b: &SchurTensor<F::Elem, I>) -> f64 {
    if a.slots != b.slots {
        return f64::INFINITY;
    }
    a.matrix.deviation(k, &b.matrix).max(k.deviation(a.prefactor, b.prefactor))
}

/// Rectangular Schur-complement tensors with shift parameters `(u0, u1)`.
#[derive(Clone, Debug)]
pub struct SchurRect<F: Field> {
    pub ring: F,
    pub u0: F::Elem,
    pub u1: F::Elem,
    pub prefactor_mode: PrefactorMode,
}

pub type RectTensor<E> = SchurTensor<E, RectModes>;

impl<F: Field> SchurRect<F> {
    pub fn new(ring: F, u0: F::Elem, u1: F::Elem, prefactor_mode: PrefactorMode) -> Result<Self, Error> {
        if prefactor_mode == PrefactorMode::Pfaffian {
            return Err(Error::InvalidParameter("rectangular tensors take no Pfaffian prefactor".into()));
        }
        Ok(SchurRect { ring, u0, u1, prefactor_mode })
    }

    pub fn tensor(&self, slots: Vec<RectModes>, matrix: Matrix<F::Elem>, prefactor: F::Elem) -> Result<RectTensor<F::Elem>, Error> {
        let rows: usize = slots.iter().map(|s| s.n_in).sum();
        let cols: usize = slots.iter().map(|s| s.n_out).sum();
        if matrix.rows() != rows || matrix.cols() != cols {
            return Err(Error::ShapeMismatch(format!(
                "slots {:?} need a {rows}x{cols} matrix, got {}x{}",
                slots,
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(SchurTensor { slots, matrix, prefactor })
    }

    pub fn s_direct_sum(&self, a: &RectTensor<F::Elem>, b: &RectTensor<F::Elem>) -> RectTensor<F::Elem> {
        let mut slots = a.slots.clone();
        slots.extend_from_slice(&b.slots);
        SchurTensor {
            slots,
            matrix: Matrix::direct_sum(&self.ring, &a.matrix, &b.matrix),
            prefactor: self.ring.mul(a.prefactor, b.prefactor),
        }
    }

    /// `det` of the shifted block when contracting an identity on `b`, which
    /// the identity prefactor must cancel.
    fn identity_det(&self, b: RectModes) -> F::Elem {
        let k = &self.ring;
        let mut d = k.one();
        for _ in 0..b.n_in {
            d = k.mul(d, k.negate(self.u0));
        }
        for _ in 0..b.n_out {
            d = k.mul(d, k.negate(self.u1));
        }
        if (b.n_in * b.n_out) % 2 == 1 {
            k.negate(d)
        } else {
            d
        }
    }

    /// Contracts slots `tail` and `head`, which must be adjacent at the end.
    pub fn s_contract_rect(&self, a: &RectTensor<F::Elem>) -> Result<RectTensor<F::Elem>, Error> {
        let k = &self.ring;
        let n = a.slots.len();
        if n < 2 {
            return Err(Error::ShapeMismatch("contraction needs two slots".into()));
        }
        let (tail, head) = (a.slots[n - 2], a.slots[n - 1]);
        self.check_pair(&tail, &head)?;
        let (c, d) = (tail.n_in, tail.n_out);
        let spect = &a.slots[..n - 2];
        let i: usize = spect.iter().map(|s| s.n_in).sum();
        let o: usize = spect.iter().map(|s| s.n_out).sum();
        let mut m = a.matrix.clone();
        for x in 0..c {
            m.set(i + x, o + d + x, k.sub(m.get(i + x, o + d + x), self.u0));
        }
        for x in 0..d {
            m.set(i + c + x, o + x, k.sub(m.get(i + c + x, o + x), self.u1));
        }
        let (s, det_z) = linalg::schur_complement(k, &m, i, o)?;
        let prefactor = match self.prefactor_mode {
            PrefactorMode::Det => k.mul(a.prefactor, det_z),
            _ => a.prefactor,
        };
        Ok(SchurTensor { slots: spect.to_vec(), matrix: s, prefactor })
    }

    pub fn s_identity(&self, b: RectModes) -> Result<RectTensor<F::Elem>, Error> {
        let k = &self.ring;
        if k.modulus(self.u0) == 0.0 || k.modulus(self.u1) == 0.0 {
            return Err(Error::NoIdentity("identity needs nonzero u0 and u1".into()));
        }
        let (c, d) = (b.n_in, b.n_out);
        // Rows are [in of b* (d) | in of b (c)], columns [out of b* (c) | out of b (d)].
        let mut m = Matrix::zeros(k, c + d, c + d);
        for x in 0..d {
            m.set(x, c + x, self.u1);
        }
        for x in 0..c {
            m.set(d + x, x, self.u0);
        }
        let prefactor = match self.prefactor_mode {
            PrefactorMode::Det => k.inv(self.identity_det(b)).expect("nonzero u"),
            _ => k.one(),
        };
        Ok(SchurTensor { slots: alloc::vec![b.dual(), b], matrix: m, prefactor })
    }
}

impl<F: Field> TensorType for SchurRect<F> {
    type Index = RectModes;
    type Tensor = RectTensor<F::Elem>;

    fn name(&self) -> String {
        format!("schur-rect/{}", self.ring.name())
    }
    fn flags(&self) -> Flags {
        let has_identity = self.ring.modulus(self.u0) != 0.0 && self.ring.modulus(self.u1) != 0.0;
        let sym = self.u0 == self.u1;
        Flags {
            symmetric_contraction: sym,
            symmetric_identity: sym,
            strict_associativity: true,
            has_dual: true,
            has_identity,
        }
    }
    fn slots(&self, t: &Self::Tensor) -> Vec<RectModes> {
        t.slots.clone()
    }
    fn dual(&self, a: &RectModes) -> RectModes {
        a.dual()
    }
    fn index_product(&self, a: &RectModes, b: &RectModes) -> Result<RectModes, Error> {
        Ok(RectModes::new(a.n_in + b.n_in, a.n_out + b.n_out))
    }
    fn unit_index(&self) -> RectModes {
        RectModes::new(0, 0)
    }
    fn trivial(&self) -> Self::Tensor {
        SchurTensor { slots: Vec::new(), matrix: Matrix::zeros(&self.ring, 0, 0), prefactor: self.ring.one() }
    }
    fn tensor_product(&self, a: &Self::Tensor, b: &Self::Tensor) -> Result<Self::Tensor, Error> {
        Ok(self.s_direct_sum(a, b))
    }
    fn permute(&self, a: &Self::Tensor, perm: &[usize]) -> Result<Self::Tensor, Error> {
        check_permutation(perm, a.slots.len())?;
        let ins: Vec<usize> = a.slots.iter().map(|s| s.n_in).collect();
        let outs: Vec<usize> = a.slots.iter().map(|s| s.n_out).collect();
        let rows = block_order(&ins, perm);
        let cols = block_order(&outs, perm);
        Ok(SchurTensor {
            slots: perm.iter().map(|&p| a.slots[p]).collect(),
            matrix: a.matrix.select(&rows, &cols),
            prefactor: a.prefactor,
        })
    }
    fn contract(&self, a: &Self::Tensor) -> Result<Self::Tensor, Error> {
        self.s_contract_rect(a)
    }
    fn identity(&self, a: &RectModes) -> Result<Self::Tensor, Error> {
        self.s_identity(*a)
    }
    fn block(&self, a: &Self::Tensor, at: usize) -> Result<Self::Tensor, Error> {
        if at + 1 >= a.slots.len() {
            return Err(Error::ShapeMismatch(format!("cannot block slot {at}")));
        }
        let mut t = a.clone();
        let second = t.slots.remove(at + 1);
        t.slots[at] = self.index_product(&t.slots[at], &second)?;
        Ok(t)
    }
    fn split(&self, a: &Self::Tensor, at: usize, first: &RectModes, second: &RectModes) -> Result<Self::Tensor, Error> {
        if at >= a.slots.len() || a.slots[at] != self.index_product(first, second)? {
            return Err(Error::ShapeMismatch(format!("cannot split slot {at}")));
        }
        let mut t = a.clone();
        t.slots[at] = *first;
        t.slots.insert(at + 1, *second);
        Ok(t)
    }
    /// Reordering the shifted block from `[b, c, b*, c*]` to `[b, b*, c, c*]`
    /// costs `(-1)^{c1 d2 + c2 d1}` in its determinant.
    fn dual_automorphor(&self, a: &Self::Tensor, _at: usize, first: &RectModes, second: &RectModes) -> Result<Self::Tensor, Error> {
        let mut t = a.clone();
        let odd = first.n_in * second.n_out + second.n_in * first.n_out;
        if self.prefactor_mode == PrefactorMode::Det && odd % 2 == 1 {
            t.prefactor = self.ring.negate(t.prefactor);
        }
        Ok(t)
    }
    fn deviation(&self, a: &Self::Tensor, b: &Self::Tensor) -> f64 {
        tensor_deviation(&self.ring, a, b)
    }
    fn is_exact(&self) -> bool {
        false
    }
    fn random_index(&self, rng: &mut dyn RngCore, budget: usize) -> RectModes {
        let cap = budget.min(2);
        RectModes::new(rng.gen_range(0..=cap), rng.gen_range(0..=cap))
    }
    fn random_tensor(&self, slots: &[RectModes], rng: &mut dyn RngCore) -> Option<Self::Tensor> {
        let rows: usize = slots.iter().map(|s| s.n_in).sum();
        let cols: usize = slots.iter().map(|s| s.n_out).sum();
        let k = &self.ring;
        let prefactor = k.from_f64(rng.gen_range(0.5..1.5));
        Some(SchurTensor { slots: slots.to_vec(), matrix: random_matrix(k, rows, cols, rng), prefactor })
    }
    fn cost(&self, slots: &[RectModes]) -> f64 {
        slots.iter().map(|s| s.total() as f64).sum()
    }
}

/// Square Schur-complement tensors with a 2x2 shift matrix `u`.
#[derive(Clone, Debug)]
pub struct SchurSquare<F: Field> {
    pub ring: F,
    pub u: [[F::Elem; 2]; 2],
    pub symmetry: Symmetry,
    pub prefactor_mode: PrefactorMode,
}

pub type SquareTensor<E> = SchurTensor<E, usize>;

impl<F: Field> SchurSquare<F> {
    pub fn new(ring: F, u: [[F::Elem; 2]; 2], symmetry: Symmetry, prefactor_mode: PrefactorMode) -> Result<Self, Error> {
        let zero = ring.zero_elem();
        match symmetry {
            Symmetry::Sym if u[0][1] != u[1][0] => {
                return Err(Error::InvalidParameter("symmetric tensors need u01 = u10".into()))
            }
            Symmetry::Anti if u[0][0] != zero || u[1][1] != zero || u[0][1] != ring.negate(u[1][0]) => {
                return Err(Error::InvalidParameter("antisymmetric tensors need u = [[0, a], [-a, 0]]".into()))
            }
            _ => {}
        }
        if prefactor_mode == PrefactorMode::Pfaffian && symmetry != Symmetry::Anti {
            return Err(Error::InvalidParameter("Pfaffian prefactors need antisymmetric tensors".into()));
        }
        Ok(SchurSquare { ring, u, symmetry, prefactor_mode })
    }

    fn check_symmetry(&self, m: &Matrix<F::Elem>, tol: f64) -> Result<(), Error> {
        let ok = match self.symmetry {
            Symmetry::None => true,
            Symmetry::Sym => m.is_symmetric(&self.ring, tol),
            Symmetry::Anti => m.is_antisymmetric(&self.ring, tol),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::SymmetryViolation(format!("matrix is not {:?}", self.symmetry)))
        }
    }

    pub fn tensor(&self, slots: Vec<usize>, matrix: Matrix<F::Elem>, prefactor: F::Elem) -> Result<SquareTensor<F::Elem>, Error> {
        let n: usize = slots.iter().sum();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::ShapeMismatch(format!(
                "slots {:?} need a {n}x{n} matrix, got {}x{}",
                slots,
                matrix.rows(),
                matrix.cols()
            )));
        }
        self.check_symmetry(&matrix, 0.0)?;
        Ok(SchurTensor { slots, matrix, prefactor })
    }

    pub fn s_direct_sum(&self, a: &SquareTensor<F::Elem>, b: &SquareTensor<F::Elem>) -> SquareTensor<F::Elem> {
        let mut slots = a.slots.clone();
        slots.extend_from_slice(&b.slots);
        SchurTensor {
            slots,
            matrix: Matrix::direct_sum(&self.ring, &a.matrix, &b.matrix),
            prefactor: self.ring.mul(a.prefactor, b.prefactor),
        }
    }

    fn shifted_block(&self, z: &Matrix<F::Elem>, n: usize) -> Matrix<F::Elem> {
        let k = &self.ring;
        Matrix::from_fn(2 * n, 2 * n, |r, c| {
            let v = z.get(r, c);
            if r % n == c % n {
                k.sub(v, self.u[r / n][c / n])
            } else {
                v
            }
        })
    }

    pub fn s_contract_square(&self, a: &SquareTensor<F::Elem>) -> Result<SquareTensor<F::Elem>, Error> {
        let k = &self.ring;
        let len = a.slots.len();
        if len < 2 {
            return Err(Error::ShapeMismatch("contraction needs two slots".into()));
        }
        let (tail, head) = (a.slots[len - 2], a.slots[len - 1]);
        self.check_pair(&tail, &head)?;
        let n = tail;
        let spect = &a.slots[..len - 2];
        let i: usize = spect.iter().sum();
        let mut m = a.matrix.clone();
        if n > 0 {
            let z = self.shifted_block(&m.block(i, 2 * n, i, 2 * n), n);
            for r in 0..2 * n {
                for c in 0..2 * n {
                    m.set(i + r, i + c, z.get(r, c));
                }
            }
        }
        let (mut s, det_z) = linalg::schur_complement(k, &m, i, i)?;
        let prefactor = match self.prefactor_mode {
            PrefactorMode::None => a.prefactor,
            PrefactorMode::Det => k.mul(a.prefactor, det_z),
            PrefactorMode::Pfaffian => {
                let z = m.block(i, 2 * n, i, 2 * n);
                k.mul(a.prefactor, linalg::pfaffian(k, &z, 1e-9)?)
            }
        };
        // Restore exact (anti)symmetry lost to rounding.
        match self.symmetry {
            Symmetry::Sym => {
                let t = s.transpose();
                s = Matrix::from_fn(s.rows(), s.cols(), |r, c| k.mul(k.add(s.get(r, c), t.get(r, c)), k.from_f64(0.5)));
            }
            Symmetry::Anti => {
                let t = s.transpose();
                s = Matrix::from_fn(s.rows(), s.cols(), |r, c| k.mul(k.sub(s.get(r, c), t.get(r, c)), k.from_f64(0.5)));
            }
            Symmetry::None => {}
        }
        Ok(SchurTensor { slots: spect.to_vec(), matrix: s, prefactor })
    }

    pub fn s_identity(&self, n: usize) -> Result<SquareTensor<F::Elem>, Error> {
        let k = &self.ring;
        if k.modulus(self.u[0][1]) == 0.0 || k.modulus(self.u[1][0]) == 0.0 {
            return Err(Error::NoIdentity("identity needs nonzero off-diagonal u".into()));
        }
        let v = [[self.u[1][1], self.u[1][0]], [self.u[0][1], self.u[0][0]]];
        let m = Matrix::from_fn(2 * n, 2 * n, |r, c| if r % n == c % n { v[r / n][c / n] } else { k.zero_elem() });
        let prefactor = match self.prefactor_mode {
            PrefactorMode::None => k.one(),
            _ => {
                // Cancels the factor picked up when contracting through the identity.
                let probe = Matrix::from_fn(2 * n, 2 * n, |r, c| {
                    if r % n != c % n {
                        k.zero_elem()
                    } else {
                        match (r / n, c / n) {
                            (0, 0) => k.zero_elem(),
                            (0, 1) => k.negate(self.u[0][1]),
                            (1, 0) => k.negate(self.u[1][0]),
                            _ => k.sub(v[0][0], self.u[1][1]),
                        }
                    }
                });
                let f = if self.prefactor_mode == PrefactorMode::Det {
                    linalg::det(k, &probe)?
                } else {
                    linalg::pfaffian(k, &probe, 1e-12)?
                };
                k.inv(f).ok_or_else(|| Error::NoIdentity("degenerate identity prefactor".into()))?
            }
        };
        Ok(SchurTensor { slots: alloc::vec![n, n], matrix: m, prefactor })
    }

    pub fn norm_constraint_check(&self, a: &SquareTensor<F::Elem>) -> bool {
        linalg::norm_constraint(&self.ring, &a.matrix)
    }
}

impl<F: Field> TensorType for SchurSquare<F> {
    type Index = usize;
    type Tensor = SquareTensor<F::Elem>;

    fn name(&self) -> String {
        format!("schur-square/{}", self.ring.name())
    }
    fn flags(&self) -> Flags {
        let k = &self.ring;
        let sym = self.u[0][1] == self.u[1][0] && self.u[0][0] == self.u[1][1];
        Flags {
            symmetric_contraction: sym,
            symmetric_identity: sym,
            strict_associativity: true,
            has_dual: false,
            has_identity: k.modulus(self.u[0][1]) != 0.0 && k.modulus(self.u[1][0]) != 0.0,
        }
    }
    fn slots(&self, t: &Self::Tensor) -> Vec<usize> {
        t.slots.clone()
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
    fn trivial(&self) -> Self::Tensor {
        SchurTensor { slots: Vec::new(), matrix: Matrix::zeros(&self.ring, 0, 0), prefactor: self.ring.one() }
    }
    fn tensor_product(&self, a: &Self::Tensor, b: &Self::Tensor) -> Result<Self::Tensor, Error> {
        Ok(self.s_direct_sum(a, b))
    }
    fn permute(&self, a: &Self::Tensor, perm: &[usize]) -> Result<Self::Tensor, Error> {
        check_permutation(perm, a.slots.len())?;
        let modes = block_order(&a.slots, perm);
        Ok(SchurTensor {
            slots: perm.iter().map(|&p| a.slots[p]).collect(),
            matrix: a.matrix.select(&modes, &modes),
            prefactor: a.prefactor,
        })
    }
    fn contract(&self, a: &Self::Tensor) -> Result<Self::Tensor, Error> {
        self.s_contract_square(a)
    }
    fn identity(&self, a: &usize) -> Result<Self::Tensor, Error> {
        self.s_identity(*a)
    }
    fn block(&self, a: &Self::Tensor, at: usize) -> Result<Self::Tensor, Error> {
        if at + 1 >= a.slots.len() {
            return Err(Error::ShapeMismatch(format!("cannot block slot {at}")));
        }
        let mut t = a.clone();
        let second = t.slots.remove(at + 1);
        t.slots[at] += second;
        Ok(t)
    }
    fn split(&self, a: &Self::Tensor, at: usize, first: &usize, second: &usize) -> Result<Self::Tensor, Error> {
        if at >= a.slots.len() || a.slots[at] != first + second {
            return Err(Error::ShapeMismatch(format!("cannot split slot {at}")));
        }
        let mut t = a.clone();
        t.slots[at] = *first;
        t.slots.insert(at + 1, *second);
        Ok(t)
    }
    /// Pfaffians pick up `(-1)^{n1 n2}` from the same reordering; determinants
    /// of square blocks under simultaneous row and column moves do not.
    fn dual_automorphor(&self, a: &Self::Tensor, _at: usize, first: &usize, second: &usize) -> Result<Self::Tensor, Error> {
        let mut t = a.clone();
        if self.prefactor_mode == PrefactorMode::Pfaffian && (first * second) % 2 == 1 {
            t.prefactor = self.ring.negate(t.prefactor);
        }
        Ok(t)
    }
    fn deviation(&self, a: &Self::Tensor, b: &Self::Tensor) -> f64 {
        tensor_deviation(&self.ring, a, b)
    }
    fn is_exact(&self) -> bool {
        false
    }
    fn random_index(&self, rng: &mut dyn RngCore, budget: usize) -> usize {
        rng.gen_range(0..=budget.min(2))
    }
    fn random_tensor(&self, slots: &[usize], rng: &mut dyn RngCore) -> Option<Self::Tensor> {
        let k = &self.ring;
        let n: usize = slots.iter().sum();
        let r = random_matrix(k, n, n, rng);
        let half = k.from_f64(0.5);
        let matrix = match self.symmetry {
            Symmetry::None => r,
            Symmetry::Sym => Matrix::from_fn(n, n, |i, j| k.mul(half, k.add(r.get(i, j), r.get(j, i)))),
            Symmetry::Anti => Matrix::from_fn(n, n, |i, j| k.mul(half, k.sub(r.get(i, j), r.get(j, i)))),
        };
        let prefactor = k.from_f64(rng.gen_range(0.5..1.5));
        Some(SchurTensor { slots: slots.to_vec(), matrix, prefactor })
    }
    fn cost(&self, slots: &[usize]) -> f64 {
        slots.iter().sum::<usize>() as f64
    }
}

/// `sigma_x`, the shift of symmetric square tensors.
pub fn u_sigma_x<F: Field>(k: &F) -> [[F::Elem; 2]; 2] {
    [[k.zero_elem(), k.one()], [k.one(), k.zero_elem()]]
}

/// `i sigma_y = [[0, 1], [-1, 0]]`, the shift of antisymmetric square tensors.
pub fn u_i_sigma_y<F: Field>(k: &F) -> [[F::Elem; 2]; 2] {
    [[k.zero_elem(), k.one()], [k.negate(k.one()), k.zero_elem()]]
}
