//! Commutative semirings used as entry types for array and graded tensors.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Debug;

use num_complex::Complex64;
use rand::{Rng, RngCore};

use crate::error::Error;

/// Default tolerance for floating comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A commutative semiring, given as a value object so that e.g. the modulus of
/// `IntMod` can be chosen at runtime.
pub trait Semiring: Clone + Debug + Send + Sync {
    type Elem: Copy + Debug + PartialEq + Send + Sync;

    fn name(&self) -> String;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    /// Additive unit, if the semiring has one.
    fn zero(&self) -> Option<Self::Elem>;
    /// Additive inverse, if the semiring has negation.
    fn neg(&self, a: Self::Elem) -> Option<Self::Elem>;
    /// Distance used by all approximate comparisons. Relative for |a| > 1,
    /// absolute otherwise. Discrete rings return 0 or infinity.
    fn deviation(&self, a: Self::Elem, b: Self::Elem) -> f64;
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem;
    /// True when equality is exact (discrete carriers).
    fn is_exact(&self) -> bool;

    fn has_zero(&self) -> bool {
        self.zero().is_some()
    }
    fn has_negation(&self) -> bool {
        self.neg(self.one()).is_some()
    }
    fn approx_eq(&self, a: Self::Elem, b: Self::Elem, tol: f64) -> bool {
        self.deviation(a, b) <= tol
    }
}

/// Semirings that are fields, as needed by Schur complements and graded signs.
pub trait Field: Semiring {
    fn zero_elem(&self) -> Self::Elem;
    fn negate(&self, a: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.add(a, self.negate(b))
    }
    fn inv(&self, a: Self::Elem) -> Option<Self::Elem>;
    fn modulus(&self, a: Self::Elem) -> f64;
    fn conj(&self, a: Self::Elem) -> Self::Elem;
    fn from_f64(&self, x: f64) -> Self::Elem;
    fn div(&self, a: Self::Elem, b: Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }
}

fn float_deviation(a: f64, b: f64) -> f64 {
    let d = libm::fabs(a - b);
    let s = libm::fabs(a);
    if s > 1.0 {
        d / s
    } else {
        d
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Real64;

impl Semiring for Real64 {
    type Elem = f64;
    fn name(&self) -> String {
        "f64".into()
    }
    fn add(&self, a: f64, b: f64) -> f64 {
        a + b
    }
    fn mul(&self, a: f64, b: f64) -> f64 {
        a * b
    }
    fn one(&self) -> f64 {
        1.0
    }
    fn zero(&self) -> Option<f64> {
        Some(0.0)
    }
    fn neg(&self, a: f64) -> Option<f64> {
        Some(-a)
    }
    fn deviation(&self, a: f64, b: f64) -> f64 {
        float_deviation(a, b)
    }
    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        rng.gen_range(-1.0..1.0)
    }
    fn is_exact(&self) -> bool {
        false
    }
}

impl Field for Real64 {
    fn zero_elem(&self) -> f64 {
        0.0
    }
    fn negate(&self, a: f64) -> f64 {
        -a
    }
    fn inv(&self, a: f64) -> Option<f64> {
        (a != 0.0).then(|| 1.0 / a)
    }
    fn modulus(&self, a: f64) -> f64 {
        libm::fabs(a)
    }
    fn conj(&self, a: f64) -> f64 {
        a
    }
    fn from_f64(&self, x: f64) -> f64 {
        x
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Complex;

impl Semiring for Complex {
    type Elem = Complex64;
    fn name(&self) -> String {
        "c64".into()
    }
    fn add(&self, a: Complex64, b: Complex64) -> Complex64 {
        a + b
    }
    fn mul(&self, a: Complex64, b: Complex64) -> Complex64 {
        a * b
    }
    fn one(&self) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
    fn zero(&self) -> Option<Complex64> {
        Some(Complex64::new(0.0, 0.0))
    }
    fn neg(&self, a: Complex64) -> Option<Complex64> {
        Some(-a)
    }
    fn deviation(&self, a: Complex64, b: Complex64) -> f64 {
        let d = (a - b).norm();
        let s = a.norm();
        if s > 1.0 {
            d / s
        } else {
            d
        }
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Complex64 {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }
    fn is_exact(&self) -> bool {
        false
    }
}

impl Field for Complex {
    fn zero_elem(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn negate(&self, a: Complex64) -> Complex64 {
        -a
    }
    fn inv(&self, a: Complex64) -> Option<Complex64> {
        (a.norm_sqr() != 0.0).then(|| a.inv())
    }
    fn modulus(&self, a: Complex64) -> f64 {
        a.norm()
    }
    fn conj(&self, a: Complex64) -> Complex64 {
        a.conj()
    }
    fn from_f64(&self, x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }
}

/// OR as addition, AND as multiplication.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Boolean;

impl Semiring for Boolean {
    type Elem = bool;
    fn name(&self) -> String {
        "bool".into()
    }
    fn add(&self, a: bool, b: bool) -> bool {
        a | b
    }
    fn mul(&self, a: bool, b: bool) -> bool {
        a & b
    }
    fn one(&self) -> bool {
        true
    }
    fn zero(&self) -> Option<bool> {
        Some(false)
    }
    fn neg(&self, _: bool) -> Option<bool> {
        None
    }
    fn deviation(&self, a: bool, b: bool) -> f64 {
        if a == b {
            0.0
        } else {
            f64::INFINITY
        }
    }
    fn sample(&self, rng: &mut dyn RngCore) -> bool {
        rng.gen()
    }
    fn is_exact(&self) -> bool {
        true
    }
}

/// Residues modulo `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntMod {
    n: u64,
}

impl IntMod {
    pub fn new(n: u64) -> Result<Self, Error> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("modulus must be at least 2, got {n}")));
        }
        Ok(IntMod { n })
    }
    pub fn modulus(&self) -> u64 {
        self.n
    }
    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.n as i64) as u64
    }
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.n
    }
}

impl Semiring for IntMod {
    type Elem = u64;
    fn name(&self) -> String {
        format!("zmod:{}", self.n)
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.n as u128) as u64
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.n as u128) as u64
    }
    fn one(&self) -> u64 {
        1
    }
    fn zero(&self) -> Option<u64> {
        Some(0)
    }
    fn neg(&self, a: u64) -> Option<u64> {
        Some((self.n - a % self.n) % self.n)
    }
    fn deviation(&self, a: u64, b: u64) -> f64 {
        if a % self.n == b % self.n {
            0.0
        } else {
            f64::INFINITY
        }
    }
    fn sample(&self, rng: &mut dyn RngCore) -> u64 {
        rng.gen_range(0..self.n)
    }
    fn is_exact(&self) -> bool {
        true
    }
}

/// A double known to be non-negative.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct NonNeg(f64);

impl NonNeg {
    pub fn new(x: f64) -> Result<Self, Error> {
        if x >= 0.0 {
            Ok(NonNeg(x))
        } else {
            Err(Error::NegativeValue(x))
        }
    }
    pub fn get(self) -> f64 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NonNegReal;

impl Semiring for NonNegReal {
    type Elem = NonNeg;
    fn name(&self) -> String {
        "nonneg".into()
    }
    fn add(&self, a: NonNeg, b: NonNeg) -> NonNeg {
        NonNeg(a.0 + b.0)
    }
    fn mul(&self, a: NonNeg, b: NonNeg) -> NonNeg {
        NonNeg(a.0 * b.0)
    }
    fn one(&self) -> NonNeg {
        NonNeg(1.0)
    }
    fn zero(&self) -> Option<NonNeg> {
        Some(NonNeg(0.0))
    }
    fn neg(&self, _: NonNeg) -> Option<NonNeg> {
        None
    }
    fn deviation(&self, a: NonNeg, b: NonNeg) -> f64 {
        float_deviation(a.0, b.0)
    }
    fn sample(&self, rng: &mut dyn RngCore) -> NonNeg {
        NonNeg(rng.gen_range(0.0..2.0))
    }
    fn is_exact(&self) -> bool {
        false
    }
}

/// The integers, only needed as the source of `mod-n-reduce`. Samples stay
/// small so that sampled products never overflow.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Integer;

impl Semiring for Integer {
    type Elem = i64;
    fn name(&self) -> String {
        "int".into()
    }
    fn add(&self, a: i64, b: i64) -> i64 {
        a + b
    }
    fn mul(&self, a: i64, b: i64) -> i64 {
        a * b
    }
    fn one(&self) -> i64 {
        1
    }
    fn zero(&self) -> Option<i64> {
        Some(0)
    }
    fn neg(&self, a: i64) -> Option<i64> {
        Some(-a)
    }
    fn deviation(&self, a: i64, b: i64) -> f64 {
        if a == b {
            0.0
        } else {
            f64::INFINITY
        }
    }
    fn sample(&self, rng: &mut dyn RngCore) -> i64 {
        rng.gen_range(-1000..=1000)
    }
    fn is_exact(&self) -> bool {
        true
    }
}

/// Outcome of one ring axiom over all samples.
#[derive(Clone, Debug, PartialEq)]
pub struct RingAxiomOutcome {
    pub axiom: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RingReport {
    pub ring: String,
    pub samples: usize,
    pub outcomes: Vec<RingAxiomOutcome>,
}

impl RingReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }
}

/// Checks the commutative-semiring axioms on sampled values.
pub fn ring_axiom_suite<R: Semiring>(ring: &R, sample_count: usize, seed: u64, tol: f64) -> RingReport {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let triples: Vec<[R::Elem; 3]> = (0..sample_count)
        .map(|_| [ring.sample(&mut rng), ring.sample(&mut rng), ring.sample(&mut rng)])
        .collect();

    let check = |axiom: &'static str, f: &dyn Fn(&[R::Elem; 3]) -> (R::Elem, R::Elem)| {
        for t in &triples {
            let (l, r) = f(t);
            if !ring.approx_eq(l, r, tol) {
                return RingAxiomOutcome {
                    axiom,
                    passed: false,
                    witness: Some(format!("{:?}: {:?} != {:?}", t, l, r)),
                };
            }
        }
        RingAxiomOutcome { axiom, passed: true, witness: None }
    };

    let mut outcomes = Vec::new();
    outcomes.push(check("add_associative", &|[x, y, z]| {
        (ring.add(ring.add(*x, *y), *z), ring.add(*x, ring.add(*y, *z)))
    }));
    outcomes.push(check("add_commutative", &|[x, y, _]| (ring.add(*x, *y), ring.add(*y, *x))));
    outcomes.push(check("mul_associative", &|[x, y, z]| {
        (ring.mul(ring.mul(*x, *y), *z), ring.mul(*x, ring.mul(*y, *z)))
    }));
    outcomes.push(check("mul_commutative", &|[x, y, _]| (ring.mul(*x, *y), ring.mul(*y, *x))));
    outcomes.push(check("mul_unit", &|[x, _, _]| (ring.mul(*x, ring.one()), *x)));
    outcomes.push(check("distributive", &|[x, y, z]| {
        (ring.mul(*x, ring.add(*y, *z)), ring.add(ring.mul(*x, *y), ring.mul(*x, *z)))
    }));
    if let Some(zero) = ring.zero() {
        outcomes.push(check("add_unit", &|[x, _, _]| (ring.add(*x, zero), *x)));
        outcomes.push(check("zero_annihilates", &|[x, _, _]| (ring.mul(*x, zero), zero)));
        if ring.has_negation() {
            outcomes.push(check("negation", &|[x, _, _]| (ring.add(*x, ring.neg(*x).unwrap()), zero)));
        }
    }
    RingReport { ring: ring.name(), samples: sample_count, outcomes }
}

/// A structure-preserving map between two semirings.
pub trait RingHom {
    type Source: Semiring;
    type Target: Semiring;
    fn source(&self) -> Self::Source;
    fn target(&self) -> Self::Target;
    fn apply(&self, x: <Self::Source as Semiring>::Elem) -> <Self::Target as Semiring>::Elem;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexConjugate;

impl RingHom for ComplexConjugate {
    type Source = Complex;
    type Target = Complex;
    fn source(&self) -> Complex {
        Complex
    }
    fn target(&self) -> Complex {
        Complex
    }
    fn apply(&self, x: Complex64) -> Complex64 {
        x.conj()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EmbedRealInComplex;

impl RingHom for EmbedRealInComplex {
    type Source = Real64;
    type Target = Complex;
    fn source(&self) -> Real64 {
        Real64
    }
    fn target(&self) -> Complex {
        Complex
    }
    fn apply(&self, x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EmbedNonNegInReal;

impl RingHom for EmbedNonNegInReal {
    type Source = NonNegReal;
    type Target = Real64;
    fn source(&self) -> NonNegReal {
        NonNegReal
    }
    fn target(&self) -> Real64 {
        Real64
    }
    fn apply(&self, x: NonNeg) -> f64 {
        x.0
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ModReduce(pub IntMod);

impl RingHom for ModReduce {
    type Source = Integer;
    type Target = IntMod;
    fn source(&self) -> Integer {
        Integer
    }
    fn target(&self) -> IntMod {
        self.0
    }
    fn apply(&self, x: i64) -> u64 {
        self.0.reduce(x)
    }
}

/// A dynamically typed scalar, used where the ring is only known at runtime.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scalar {
    Real(f64),
    Complex(Complex64),
    Bool(bool),
    Mod(u64, u64),
    NonNeg(f64),
    Int(i64),
}

/// The shipped homomorphisms, by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomName {
    ComplexConjugate,
    EmbedRealInComplex,
    EmbedNonNegInReal,
    ModReduce(u64),
}

impl HomName {
    /// Accepts `complex-conjugate`, `embed-real-in-complex`,
    /// `embed-nonneg-in-real` and `mod-<n>-reduce`.
    pub fn parse(name: &str) -> Result<Self, Error> {
        match name {
            "complex-conjugate" => Ok(HomName::ComplexConjugate),
            "embed-real-in-complex" => Ok(HomName::EmbedRealInComplex),
            "embed-nonneg-in-real" => Ok(HomName::EmbedNonNegInReal),
            _ => {
                let n = name
                    .strip_prefix("mod-")
                    .and_then(|r| r.strip_suffix("-reduce"))
                    .and_then(|n| n.parse::<u64>().ok())
                    .filter(|n| *n >= 2);
                n.map(HomName::ModReduce).ok_or_else(|| Error::UnknownHomomorphism(name.into()))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            HomName::ComplexConjugate => "complex-conjugate".into(),
            HomName::EmbedRealInComplex => "embed-real-in-complex".into(),
            HomName::EmbedNonNegInReal => "embed-nonneg-in-real".into(),
            HomName::ModReduce(n) => format!("mod-{n}-reduce"),
        }
    }

    pub fn source_ring(&self) -> &'static str {
        match self {
            HomName::ComplexConjugate => "c64",
            HomName::EmbedRealInComplex => "f64",
            HomName::EmbedNonNegInReal => "nonneg",
            HomName::ModReduce(_) => "int",
        }
    }
}

/// Applies a named homomorphism to a dynamically typed scalar.
pub fn ring_hom_apply(hom: HomName, x: Scalar) -> Result<Scalar, Error> {
    match (hom, x) {
        (HomName::ComplexConjugate, Scalar::Complex(z)) => Ok(Scalar::Complex(ComplexConjugate.apply(z))),
        (HomName::EmbedRealInComplex, Scalar::Real(r)) => Ok(Scalar::Complex(EmbedRealInComplex.apply(r))),
        (HomName::EmbedNonNegInReal, Scalar::NonNeg(r)) => {
            Ok(Scalar::Real(EmbedNonNegInReal.apply(NonNeg::new(r)?)))
        }
        (HomName::ModReduce(n), Scalar::Int(i)) => {
            let m = IntMod::new(n)?;
            Ok(Scalar::Mod(ModReduce(m).apply(i), n))
        }
        (h, x) => Err(Error::RingMismatch(format!("{} cannot be applied to {:?}", h.name(), x))),
    }
}
