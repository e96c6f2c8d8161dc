//! Tensor mappings between types, and a harness checking that a mapping
//! commutes with network evaluation.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::array::{Array, ArrayType};
use crate::error::Error;
use crate::graded::{GradedIndex, GradedTensor, GradedType};
use crate::linalg::{self, Matrix};
use crate::network::{evaluate_with, validate, Bond, Network, NetworkOf, OrderHint, Receptor};
use crate::pairing::{Pairing, PairingType};
use crate::scalars::{Field, Real64, RingHom, Semiring};
use crate::schur::{PrefactorMode, RectModes, RectTensor, SchurRect, SchurSquare, SquareTensor, Symmetry};
use crate::tensor::{for_each_config, Flags, TensorType};

pub trait TensorMapping {
    type Source: TensorType;
    type Target: TensorType;

    fn source(&self) -> &Self::Source;
    fn target(&self) -> &Self::Target;
    fn map_index(&self, a: &<Self::Source as TensorType>::Index) -> <Self::Target as TensorType>::Index;
    /// Maps a payload, including the product homomorphor that identifies the
    /// image of a product with the product of images.
    fn map_tensor(
        &self,
        a: &<Self::Source as TensorType>::Tensor,
    ) -> Result<<Self::Target as TensorType>::Tensor, Error>;
    /// Dual homomorphor on slot `at` of a mapped tensor whose source slot
    /// 0-data is `b*`: turns the image of `b*` into the dual of the image of
    /// `b`. Identity where the two coincide.
    fn head_homomorphor(
        &self,
        t: &<Self::Target as TensorType>::Tensor,
        _at: usize,
        _source_index: &<Self::Source as TensorType>::Index,
    ) -> Result<<Self::Target as TensorType>::Tensor, Error> {
        Ok(t.clone())
    }
}

/// Bit `q` (most significant first) of an `m`-bit slot configuration.
fn bit(v: usize, m: usize, q: usize) -> bool {
    (v >> (m - 1 - q)) & 1 == 1
}

/// Pairing tensors as f64 arrays: `a` dots become a `2^a`-dimensional slot,
/// and an entry is the prefactor iff matched dots carry equal bits.
#[derive(Clone, Debug)]
pub struct PairingToArray {
    source: PairingType,
    target: ArrayType<Real64>,
}

impl Default for PairingToArray {
    fn default() -> Self {
        Self::new()
    }
}

impl PairingToArray {
    pub fn new() -> Self {
        PairingToArray { source: PairingType, target: ArrayType::new(Real64) }
    }
}

pub fn map_pairing_to_array(a: &Pairing) -> Array<f64> {
    let shape: Vec<usize> = a.slot_dots().iter().map(|&d| 1 << d).collect();
    let mut bits_of = Vec::new();
    let mut entries = Vec::with_capacity(shape.iter().product());
    for_each_config(&shape, |cfg| {
        bits_of.clear();
        for (k, &v) in cfg.iter().enumerate() {
            let m = a.slot_dots()[k];
            for q in 0..m {
                bits_of.push(bit(v, m, q));
            }
        }
        let ok = a.pairs().iter().all(|&(x, y)| bits_of[x] == bits_of[y]);
        entries.push(if ok { a.prefactor() } else { 0.0 });
    });
    Array::new(shape, entries).expect("consistent shape")
}

impl TensorMapping for PairingToArray {
    type Source = PairingType;
    type Target = ArrayType<Real64>;
    fn source(&self) -> &PairingType {
        &self.source
    }
    fn target(&self) -> &ArrayType<Real64> {
        &self.target
    }
    fn map_index(&self, a: &usize) -> usize {
        1 << a
    }
    fn map_tensor(&self, a: &Pairing) -> Result<Array<f64>, Error> {
        Ok(map_pairing_to_array(a))
    }
}

/// Applies a semiring homomorphism entry by entry.
#[derive(Clone, Debug)]
pub struct EntrywiseArray<H: RingHom> {
    hom: H,
    source: ArrayType<H::Source>,
    target: ArrayType<H::Target>,
}

impl<H: RingHom> EntrywiseArray<H> {
    pub fn new(hom: H) -> Self {
        let source = ArrayType::new(hom.source());
        let target = ArrayType::new(hom.target());
        EntrywiseArray { hom, source, target }
    }
}

pub fn entrywise_array_mapping<H: RingHom>(
    hom: &H,
    a: &Array<<H::Source as Semiring>::Elem>,
) -> Array<<H::Target as Semiring>::Elem> {
    Array::new(a.shape().to_vec(), a.entries().iter().map(|&x| hom.apply(x)).collect()).expect("same shape")
}

impl<H: RingHom> TensorMapping for EntrywiseArray<H> {
    type Source = ArrayType<H::Source>;
    type Target = ArrayType<H::Target>;
    fn source(&self) -> &Self::Source {
        &self.source
    }
    fn target(&self) -> &Self::Target {
        &self.target
    }
    fn map_index(&self, a: &usize) -> usize {
        *a
    }
    fn map_tensor(&self, a: &Array<<H::Source as Semiring>::Elem>) -> Result<Array<<H::Target as Semiring>::Elem>, Error> {
        Ok(entrywise_array_mapping(&self.hom, a))
    }
}

fn parity_sign<F: Field>(k: &F, odd: usize, x: F::Elem) -> F::Elem {
    if odd % 2 == 1 {
        k.negate(x)
    } else {
        x
    }
}

fn pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Rectangular Schur tensors with `u = i sigma_y` to Z-graded arrays: the
/// second-quantization map sending a single-particle matrix to its many-body
/// amplitudes.
///
/// The source must use determinant prefactors and shifts `u0 = -1`, `u1 = 1`,
/// so a contraction adds 1 on the tail-in/head-out block and subtracts 1 on
/// the head-in/tail-out block. An entry with `k` occupied in-modes and
/// out-modes is `P det(A|rows, cols)` times `(-1)^{k(k-1)/2}` and
/// `(-1)^{|a_out||b_in|}` for every pair of slots `a` before `b`. This is the
/// coefficient of the slot-ordered Grassmann monomial in `P exp(psibar A psi)`.
#[derive(Clone, Debug)]
pub struct DeterminantMapping<F: Field> {
    source: SchurRect<F>,
    target: GradedType<F>,
}

impl<F: Field> DeterminantMapping<F> {
    pub fn new(source: SchurRect<F>) -> Result<Self, Error> {
        let k = &source.ring;
        if source.prefactor_mode != PrefactorMode::Det {
            return Err(Error::InvalidParameter("the determinant mapping needs determinant prefactors".into()));
        }
        if source.u0 != k.negate(k.one()) || source.u1 != k.one() {
            return Err(Error::InvalidParameter("the determinant mapping needs u0 = -1, u1 = 1".into()));
        }
        let target = GradedType::z(source.ring.clone());
        Ok(DeterminantMapping { source, target })
    }
}

fn rect_grades(b: RectModes) -> Vec<i32> {
    let m = b.total();
    (0..1usize << m)
        .map(|v| (0..m).map(|q| if !bit(v, m, q) { 0 } else if q < b.n_in { -1 } else { 1 }).sum())
        .collect()
}

impl<F: Field> TensorMapping for DeterminantMapping<F> {
    type Source = SchurRect<F>;
    type Target = GradedType<F>;
    fn source(&self) -> &SchurRect<F> {
        &self.source
    }
    fn target(&self) -> &GradedType<F> {
        &self.target
    }
    fn map_index(&self, a: &RectModes) -> GradedIndex {
        GradedIndex::new(rect_grades(*a))
    }
    fn map_tensor(&self, a: &RectTensor<F::Elem>) -> Result<GradedTensor<F::Elem>, Error> {
        let k = &self.source.ring;
        let slots: Vec<GradedIndex> = a.slots().iter().map(|s| self.map_index(s)).collect();
        let dims: Vec<usize> = slots.iter().map(|s| s.dim()).collect();
        let in_off: Vec<usize> = prefix(a.slots().iter().map(|s| s.n_in));
        let out_off: Vec<usize> = prefix(a.slots().iter().map(|s| s.n_out));
        let mut entries = Vec::with_capacity(dims.iter().product());
        let mut err = None;
        for_each_config(&dims, |cfg| {
            let mut rows = Vec::new();
            let mut cols = Vec::new();
            // Sum over slot pairs of |out before| * |in after|.
            let mut odd = 0;
            for (s, &v) in cfg.iter().enumerate() {
                let b = a.slots()[s];
                let m = b.total();
                let outs_before = cols.len();
                for q in 0..m {
                    if bit(v, m, q) {
                        if q < b.n_in {
                            rows.push(in_off[s] + q);
                            odd += outs_before;
                        } else {
                            cols.push(out_off[s] + q - b.n_in);
                        }
                    }
                }
            }
            if rows.len() != cols.len() {
                entries.push(k.zero_elem());
                return;
            }
            odd += pairs(rows.len());
            let d = match linalg::det(k, &a.matrix().select(&rows, &cols)) {
                Ok(d) => d,
                Err(e) => {
                    err = Some(e);
                    k.zero_elem()
                }
            };
            entries.push(parity_sign(k, odd, k.mul(a.prefactor(), d)));
        });
        if let Some(e) = err {
            return Err(e);
        }
        self.target.tensor(slots, entries)
    }
    fn head_homomorphor(&self, t: &GradedTensor<F::Elem>, at: usize, source_index: &RectModes) -> Result<GradedTensor<F::Elem>, Error> {
        // The head b* = (d, c) lists its bits as [d in | c out], the dual of the
        // image of b = (c, d) as [c | d]. With p and q occupied bits in the two
        // groups the sign is (-1)^{p(p-1)/2 + q(q-1)/2 + cd + d}.
        let (d, c) = (source_index.n_in, source_index.n_out);
        let b = RectModes::new(c, d);
        let k = &self.source.ring;
        let mut slots = t.slots().to_vec();
        slots[at] = self.target.dual(&self.map_index(&b));
        let dims: Vec<usize> = slots.iter().map(|s| s.dim()).collect();
        let mut entries = Vec::with_capacity(t.entries().len());
        let mut old = Vec::new();
        for_each_config(&dims, |cfg| {
            let v = cfg[at];
            let (bc, bd) = (v >> d, v & ((1 << d) - 1));
            old.clear();
            old.extend_from_slice(cfg);
            old[at] = (bd << c) | bc;
            let (p, q) = (bd.count_ones() as usize, bc.count_ones() as usize);
            let odd = pairs(p) + pairs(q) + c * d + d;
            entries.push(parity_sign(k, odd, t.get(&old)));
        });
        self.target.tensor(slots, entries)
    }
}

fn prefix(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut acc = 0;
    sizes
        .map(|s| {
            let o = acc;
            acc += s;
            o
        })
        .collect()
}

/// Antisymmetric square Schur tensors with `u = i sigma_y` and Pfaffian
/// prefactors to Z2-graded arrays: `P Pf(A|modes, modes)`.
#[derive(Clone, Debug)]
pub struct PfaffianMapping<F: Field> {
    source: SchurSquare<F>,
    target: GradedType<F>,
}

impl<F: Field> PfaffianMapping<F> {
    pub fn new(source: SchurSquare<F>) -> Result<Self, Error> {
        if source.prefactor_mode != PrefactorMode::Pfaffian {
            return Err(Error::InvalidParameter("the Pfaffian mapping needs Pfaffian prefactors".into()));
        }
        if source.u != crate::schur::u_i_sigma_y(&source.ring) {
            return Err(Error::InvalidParameter("the Pfaffian mapping needs u = i sigma_y".into()));
        }
        let target = GradedType::z2(source.ring.clone());
        Ok(PfaffianMapping { source, target })
    }
}

impl<F: Field> TensorMapping for PfaffianMapping<F> {
    type Source = SchurSquare<F>;
    type Target = GradedType<F>;
    fn source(&self) -> &SchurSquare<F> {
        &self.source
    }
    fn target(&self) -> &GradedType<F> {
        &self.target
    }
    fn map_index(&self, a: &usize) -> GradedIndex {
        GradedIndex::new((0..1usize << a).map(|v| (v.count_ones() % 2) as i32).collect())
    }
    fn map_tensor(&self, a: &SquareTensor<F::Elem>) -> Result<GradedTensor<F::Elem>, Error> {
        let k = &self.source.ring;
        let slots: Vec<GradedIndex> = a.slots().iter().map(|s| self.map_index(s)).collect();
        let dims: Vec<usize> = slots.iter().map(|s| s.dim()).collect();
        let off = prefix(a.slots().iter().copied());
        let mut entries = Vec::with_capacity(dims.iter().product());
        let mut err = None;
        for_each_config(&dims, |cfg| {
            let mut modes = Vec::new();
            for (s, &v) in cfg.iter().enumerate() {
                let m = a.slots()[s];
                modes.extend((0..m).filter(|&q| bit(v, m, q)).map(|q| off[s] + q));
            }
            if modes.len() % 2 == 1 {
                entries.push(k.zero_elem());
                return;
            }
            let p = match linalg::pfaffian(k, &a.matrix().select(&modes, &modes), 1e-9) {
                Ok(p) => p,
                Err(e) => {
                    err = Some(e);
                    k.zero_elem()
                }
            };
            entries.push(k.mul(a.prefactor(), p));
        });
        if let Some(e) = err {
            return Err(e);
        }
        self.target.tensor(slots, entries)
    }
    fn head_homomorphor(&self, t: &GradedTensor<F::Elem>, at: usize, source_index: &usize) -> Result<GradedTensor<F::Elem>, Error> {
        // (-1)^{h(h+1)/2 + n(n+1)/2} for h occupied modes out of n.
        let k = &self.source.ring;
        let n = *source_index;
        let mut slots = t.slots().to_vec();
        slots[at] = self.target.dual(&self.map_index(&n));
        let dims: Vec<usize> = slots.iter().map(|s| s.dim()).collect();
        let mut entries = Vec::with_capacity(t.entries().len());
        let mut idx = 0;
        for_each_config(&dims, |cfg| {
            let h = cfg[at].count_ones() as usize;
            entries.push(parity_sign(k, pairs(h + 1) + pairs(n + 1), t.entries()[idx]));
            idx += 1;
        });
        self.target.tensor(slots, entries)
    }
}

/// Rectangular tensors with `u0 = -u1` to antisymmetric square ones:
/// `[[0, A], [-A^T, 0]]` with each slot's modes listed as its in-modes
/// followed by its out-modes. Prefactors go from none to none, or from
/// determinant to Pfaffian.
#[derive(Clone, Debug)]
pub struct Antisymmetrization<F: Field> {
    source: SchurRect<F>,
    target: SchurSquare<F>,
}

impl<F: Field> Antisymmetrization<F> {
    pub fn new(source: SchurRect<F>, target: SchurSquare<F>) -> Result<Self, Error> {
        let k = &source.ring;
        let ok = target.symmetry == Symmetry::Anti
            && target.u[0][1] == source.u0
            && target.u[1][0] == source.u1
            && source.u0 == k.negate(source.u1);
        if !ok {
            return Err(Error::InvalidParameter("antisymmetrization needs u0 = -u1 on both sides".into()));
        }
        let modes_ok = matches!(
            (source.prefactor_mode, target.prefactor_mode),
            (PrefactorMode::None, PrefactorMode::None) | (PrefactorMode::Det, PrefactorMode::Pfaffian)
        );
        if !modes_ok {
            return Err(Error::InvalidParameter(
                "antisymmetrization maps no prefactor to none, or determinant to Pfaffian".into(),
            ));
        }
        Ok(Antisymmetrization { source, target })
    }
}

pub fn antisymmetrize<F: Field>(k: &F, a: &RectTensor<F::Elem>) -> (Vec<usize>, Matrix<F::Elem>) {
    let (r, c) = (a.matrix().rows(), a.matrix().cols());
    let big = Matrix::from_fn(r + c, r + c, |i, j| {
        if i < r && j >= r {
            a.matrix().get(i, j - r)
        } else if i >= r && j < r {
            k.negate(a.matrix().get(j, i - r))
        } else {
            k.zero_elem()
        }
    });
    // Interleave so each slot's in-modes and out-modes sit together.
    let in_off = prefix(a.slots().iter().map(|s| s.n_in));
    let out_off = prefix(a.slots().iter().map(|s| s.n_out));
    let mut order = Vec::with_capacity(r + c);
    for (s, b) in a.slots().iter().enumerate() {
        order.extend((0..b.n_in).map(|q| in_off[s] + q));
        order.extend((0..b.n_out).map(|q| r + out_off[s] + q));
    }
    (a.slots().iter().map(|b| b.total()).collect(), big.select(&order, &order))
}

impl<F: Field> TensorMapping for Antisymmetrization<F> {
    type Source = SchurRect<F>;
    type Target = SchurSquare<F>;
    fn source(&self) -> &SchurRect<F> {
        &self.source
    }
    fn target(&self) -> &SchurSquare<F> {
        &self.target
    }
    fn map_index(&self, a: &RectModes) -> usize {
        a.total()
    }
    fn map_tensor(&self, a: &RectTensor<F::Elem>) -> Result<SquareTensor<F::Elem>, Error> {
        let (slots, m) = antisymmetrize(&self.source.ring, a);
        self.target.tensor(slots, m, a.prefactor())
    }
    fn head_homomorphor(&self, t: &SquareTensor<F::Elem>, at: usize, source_index: &RectModes) -> Result<SquareTensor<F::Elem>, Error> {
        // The head b* = (d, c) lists [d | c]; the tail's order is [c | d].
        let (d, c) = (source_index.n_in, source_index.n_out);
        let off: usize = t.slots()[..at].iter().sum();
        let n: usize = t.slots().iter().sum();
        let mut order: Vec<usize> = (0..n).collect();
        for q in 0..c {
            order[off + q] = off + d + q;
        }
        for q in 0..d {
            order[off + c + q] = off + q;
        }
        let m = t.matrix().select(&order, &order);
        let p = if self.target.prefactor_mode == PrefactorMode::Pfaffian {
            parity_sign(&self.source.ring, d + pairs(c) + pairs(d), t.prefactor())
        } else {
            t.prefactor()
        };
        self.target.tensor(t.slots().to_vec(), m, p)
    }
}

/// Square tensors read as rectangular ones with equal in- and out-modes.
#[derive(Clone, Debug)]
pub struct InOutPair<F: Field> {
    source: SchurSquare<F>,
    target: SchurRect<F>,
}

impl<F: Field> InOutPair<F> {
    pub fn new(source: SchurSquare<F>, target: SchurRect<F>) -> Result<Self, Error> {
        let zero = source.ring.zero_elem();
        let ok = source.u[0][0] == zero
            && source.u[1][1] == zero
            && target.u0 == source.u[0][1]
            && target.u1 == source.u[1][0];
        if !ok {
            return Err(Error::InvalidParameter(
                "in-out-pair mapping needs u0 = u~01, u1 = u~10 and a zero diagonal".into(),
            ));
        }
        if source.prefactor_mode != target.prefactor_mode {
            return Err(Error::InvalidParameter("prefactor modes differ".into()));
        }
        Ok(InOutPair { source, target })
    }
}

impl<F: Field> TensorMapping for InOutPair<F> {
    type Source = SchurSquare<F>;
    type Target = SchurRect<F>;
    fn source(&self) -> &SchurSquare<F> {
        &self.source
    }
    fn target(&self) -> &SchurRect<F> {
        &self.target
    }
    fn map_index(&self, a: &usize) -> RectModes {
        RectModes::new(*a, *a)
    }
    fn map_tensor(&self, a: &SquareTensor<F::Elem>) -> Result<RectTensor<F::Elem>, Error> {
        let slots = a.slots().iter().map(|&n| RectModes::new(n, n)).collect();
        self.target.tensor(slots, a.matrix().clone(), a.prefactor())
    }
}

/// The type with a single 0-data and a single 1-data.
#[derive(Clone, Copy, Debug, Default)]
pub struct TrivialType;

impl TensorType for TrivialType {
    type Index = ();
    type Tensor = usize;
    fn name(&self) -> String {
        "trivial".into()
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
    fn slots(&self, t: &usize) -> Vec<()> {
        vec![(); *t]
    }
    fn dual(&self, _: &()) {}
    fn index_product(&self, _: &(), _: &()) -> Result<(), Error> {
        Ok(())
    }
    fn unit_index(&self) {}
    fn trivial(&self) -> usize {
        0
    }
    fn tensor_product(&self, a: &usize, b: &usize) -> Result<usize, Error> {
        Ok(a + b)
    }
    fn permute(&self, a: &usize, perm: &[usize]) -> Result<usize, Error> {
        crate::tensor::check_permutation(perm, *a)?;
        Ok(*a)
    }
    fn contract(&self, a: &usize) -> Result<usize, Error> {
        a.checked_sub(2).ok_or_else(|| Error::ShapeMismatch("contraction needs two slots".into()))
    }
    fn identity(&self, _: &()) -> Result<usize, Error> {
        Ok(2)
    }
    fn block(&self, a: &usize, _: usize) -> Result<usize, Error> {
        Ok(a - 1)
    }
    fn split(&self, a: &usize, _: usize, _: &(), _: &()) -> Result<usize, Error> {
        Ok(a + 1)
    }
    fn deviation(&self, a: &usize, b: &usize) -> f64 {
        if a == b {
            0.0
        } else {
            f64::INFINITY
        }
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn random_index(&self, _: &mut dyn rand::RngCore, _: usize) {}
    fn random_tensor(&self, slots: &[()], _: &mut dyn rand::RngCore) -> Option<usize> {
        Some(slots.len())
    }
    fn cost(&self, _: &[()]) -> f64 {
        1.0
    }
}

/// Sends every tensor of `T` to the trivial type.
#[derive(Clone, Debug)]
pub struct TrivialMapping<T> {
    source: T,
    target: TrivialType,
}

impl<T: TensorType> TrivialMapping<T> {
    pub fn new(source: T) -> Self {
        TrivialMapping { source, target: TrivialType }
    }
}

impl<T: TensorType> TensorMapping for TrivialMapping<T> {
    type Source = T;
    type Target = TrivialType;
    fn source(&self) -> &T {
        &self.source
    }
    fn target(&self) -> &TrivialType {
        &self.target
    }
    fn map_index(&self, _: &T::Index) {}
    fn map_tensor(&self, a: &T::Tensor) -> Result<usize, Error> {
        Ok(self.source.slots(a).len())
    }
}

/// Replaces free bonds and loops by explicit identity atoms.
pub fn materialize_identities<T: TensorType>(net: &NetworkOf<T>, t: &T) -> Result<NetworkOf<T>, Error> {
    let mut out = Network {
        tensors: net.tensors.clone(),
        atoms: net.atoms.clone(),
        bonds: net.bonds.clone(),
        open: net.open.clone(),
        free_bonds: Vec::new(),
        loops: Vec::new(),
    };
    let n = net.atoms.len();
    for (k, b) in net.free_bonds.iter().enumerate() {
        let name = format!("#free{k}");
        out.tensors.insert(name.clone(), t.identity(b)?);
        out.atoms.push(name);
    }
    // Free-bond receptors already point at atoms `n..`, which now exist.
    debug_assert_eq!(out.atoms.len(), n + net.free_bonds.len());
    for (k, b) in net.loops.iter().enumerate() {
        let name = format!("#loop{k}");
        out.tensors.insert(name.clone(), t.identity(b)?);
        out.atoms.push(name);
        let a = out.atoms.len() - 1;
        out.bonds.push(Bond { tail: Receptor::new(a, 0), head: Receptor::new(a, 1) });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MappingReport {
    pub trials: usize,
    pub max_deviation: f64,
    pub passed: bool,
}

/// Compares "evaluate, then map" with "map every atom, then evaluate" under
/// `trials` random contraction orders.
pub fn verify_mapping_commutes<M: TensorMapping>(
    map: &M,
    net: &NetworkOf<M::Source>,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<MappingReport, Error> {
    let s = map.source();
    let t = map.target();
    validate(net, s).map_err(|d| Error::InvalidNetwork(d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")))?;
    let net = materialize_identities(net, s)?;
    let mut mapped: NetworkOf<M::Target> = Network {
        tensors: Default::default(),
        atoms: Vec::new(),
        bonds: net.bonds.clone(),
        open: net.open.clone(),
        free_bonds: Vec::new(),
        loops: Vec::new(),
    };
    for (k, name) in net.atoms.iter().enumerate() {
        let src = &net.tensors[name];
        let slots = s.slots(src);
        let mut img = map.map_tensor(src)?;
        for b in net.bonds.iter().filter(|b| b.head.atom == k) {
            img = map.head_homomorphor(&img, b.head.slot, &slots[b.head.slot])?;
        }
        let key = format!("{k}:{name}");
        mapped.tensors.insert(key.clone(), img);
        mapped.atoms.push(key);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_deviation: f64 = 0.0;
    for trial in 0..trials.max(1) {
        let order = if trial == 0 { OrderHint::FileOrder } else { OrderHint::Random(rng.gen()) };
        let direct = map.map_tensor(&evaluate_with(&net, s, &order)?)?;
        let via = evaluate_with(&mapped, t, &order)?;
        max_deviation = max_deviation.max(t.deviation(&direct, &via));
    }
    Ok(MappingReport { trials: trials.max(1), max_deviation, passed: max_deviation <= tol })
}
