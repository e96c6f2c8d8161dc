//! Randomized checks of the structural axioms every tensor type must obey.
//!
//! Each check draws `cases` random instances from per-case seeds, so a
//! failure can be replayed from its recorded seed alone.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::tensor::{contract_pair, TensorType};

/// Per-slot size budget used when sampling 0-data.
pub const SLOT_BUDGET: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomFailure {
    pub seed: u64,
    /// Slot 0-data of the sampled tensor, for replay and inspection.
    pub slots: String,
    pub deviation: f64,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    pub axiom: String,
    pub cases: usize,
    pub failures: Vec<AxiomFailure>,
    /// Extra information, e.g. the witness found for an asymmetric type.
    pub note: Option<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn case_seed(seed: u64, axiom: u64, case: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (axiom << 48) ^ case as u64
}

fn tol_for<T: TensorType>(t: &T, tol: f64) -> f64 {
    if t.is_exact() {
        0.0
    } else {
        tol
    }
}

/// Samples slot lists from `shape` until the type admits a tensor on them.
fn sample<T: TensorType>(
    t: &T,
    rng: &mut dyn RngCore,
    shape: &dyn Fn(&mut dyn RngCore) -> Vec<T::Index>,
) -> Option<(Vec<T::Index>, T::Tensor)> {
    for _ in 0..64 {
        let slots = shape(rng);
        if let Some(a) = t.random_tensor(&slots, rng) {
            return Some((slots, a));
        }
    }
    None
}

/// Two slot 0-data whose product exists. Types whose 0-data carry a
/// direction can only block slots of the same direction.
fn blockable<T: TensorType>(t: &T, rng: &mut dyn RngCore) -> [T::Index; 2] {
    loop {
        let (b, c) = (t.random_index(rng, SLOT_BUDGET), t.random_index(rng, SLOT_BUDGET));
        if t.index_product(&b, &c).is_ok() {
            return [b, c];
        }
    }
}

fn indices<T: TensorType>(t: &T, rng: &mut dyn RngCore, n: usize) -> Vec<T::Index> {
    (0..n).map(|_| t.random_index(rng, SLOT_BUDGET)).collect()
}

/// Runs `cases` cases of `body`, which returns `(slots, deviation)` or an
/// error; skipped cases (no admissible tensor) return `None`.
fn run_cases<T: TensorType>(
    t: &T,
    name: &str,
    id: u64,
    cases: usize,
    seed: u64,
    tol: f64,
    mut body: impl FnMut(&mut ChaCha8Rng) -> Option<Result<(String, f64), (String, Error)>>,
) -> AxiomReport {
    let tol = tol_for(t, tol);
    let mut failures = Vec::new();
    let mut run = 0;
    for case in 0..cases {
        let s = case_seed(seed, id, case);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        match body(&mut rng) {
            None => {}
            Some(Ok((slots, dev))) => {
                run += 1;
                if !(dev <= tol) {
                    failures.push(AxiomFailure { seed: s, slots, deviation: dev, note: String::new() });
                }
            }
            Some(Err((slots, e))) => {
                run += 1;
                failures.push(AxiomFailure { seed: s, slots, deviation: f64::INFINITY, note: e.to_string() });
            }
        }
    }
    AxiomReport { axiom: name.to_string(), cases: run, failures, note: None }
}

fn dbg<I: core::fmt::Debug>(slots: &[I]) -> String {
    format!("{:?}", slots)
}

/// Swapping two blocks of slots twice restores the tensor, and swapping the
/// factors of a product gives the product in the other order.
pub fn check_commutor_involutive<T: TensorType>(t: &T, cases: usize, seed: u64, tol: f64) -> AxiomReport {
    run_cases(t, "commutor_involutive", 1, cases, seed, tol, |rng| {
        let n = rng.gen_range(2..=4);
        let (slots, a) = sample(t, rng, &|r| indices(t, r, n))?;
        let (b_slots, b) = sample(t, rng, &|r| {
            let m = rng_len(r);
            indices(t, r, m)
        })?;
        let k = rng.gen_range(1..n);
        let f = || -> Result<f64, Error> {
            let swap: Vec<usize> = (k..n).chain(0..k).collect();
            let back: Vec<usize> = (n - k..n).chain(0..n - k).collect();
            let twice = t.permute(&t.permute(&a, &swap)?, &back)?;
            let mut dev = t.deviation(&a, &twice);
            // Commutor with an auxiliary leading slot.
            if n >= 3 {
                let mut p: Vec<usize> = (0..n).collect();
                p.swap(1, 2);
                dev = dev.max(t.deviation(&a, &t.permute(&t.permute(&a, &p)?, &p)?));
            }
            let (na, nb) = (n, b_slots.len());
            let ab = t.tensor_product(&a, &b)?;
            let ba = t.tensor_product(&b, &a)?;
            let p: Vec<usize> = (na..na + nb).chain(0..na).collect();
            dev = dev.max(t.deviation(&t.permute(&ab, &p)?, &ba));
            Ok(dev)
        };
        Some(f().map(|d| (dbg(&slots), d)).map_err(|e| (dbg(&slots), e)))
    })
}

fn rng_len(r: &mut dyn RngCore) -> usize {
    r.gen_range(0..=2)
}

/// Braid relation of adjacent commutors, and crossing a line over a blocked
/// pair equals crossing it over both lines.
pub fn check_hexagon<T: TensorType>(t: &T, cases: usize, seed: u64, tol: f64) -> AxiomReport {
    run_cases(t, "hexagon", 2, cases, seed, tol, |rng| {
        let (slots, a) = sample(t, rng, &|r| {
            let mut s = indices(t, r, 2);
            s.extend(blockable(t, r));
            s
        })?;
        let f = || -> Result<f64, Error> {
            let s = |x: &T::Tensor, i: usize| -> Result<T::Tensor, Error> {
                let mut p: Vec<usize> = (0..4).collect();
                p.swap(i, i + 1);
                t.permute(x, &p)
            };
            let left = s(&s(&s(&a, 1)?, 2)?, 1)?;
            let right = s(&s(&s(&a, 2)?, 1)?, 2)?;
            let mut dev = t.deviation(&left, &right);
            // Slot 1 crosses the block (2, 3).
            let blocked = t.block(&a, 2)?;
            let crossed = t.permute(&blocked, &[0, 2, 1])?;
            let unblocked = t.split(&crossed, 1, &slots[2], &slots[3])?;
            let direct = s(&s(&a, 1)?, 2)?;
            dev = dev.max(t.deviation(&unblocked, &direct));
            Ok(dev)
        };
        Some(f().map(|d| (dbg(&slots), d)).map_err(|e| (dbg(&slots), e)))
    })
}

/// Contracting `b` and then `c` equals contracting the blocked pair
/// `b ⊗ c` with `(b ⊗ c)*`.
pub fn check_block_compatibility<T: TensorType>(t: &T, cases: usize, seed: u64, tol: f64) -> AxiomReport {
    run_cases(t, "block_compatibility", 3, cases, seed, tol, |rng| {
        let (slots, a) = sample(t, rng, &|r| {
            let x = t.random_index(r, SLOT_BUDGET);
            let [b, c] = blockable(t, r);
            let (bd, cd) = (t.dual(&b), t.dual(&c));
            alloc::vec![x, b, bd, c, cd]
        })?;
        let f = || -> Result<f64, Error> {
            let sequential = t.contract(&t.contract(&a)?)?;
            let moved = t.permute(&a, &[0, 1, 3, 2, 4])?;
            let blocked = t.block(&t.block(&moved, 1)?, 2)?;
            let fixed = t.dual_automorphor(&blocked, 2, &slots[1], &slots[3])?;
            let at_once = t.contract(&fixed)?;
            Ok(t.deviation(&sequential, &at_once))
        };
        Some(f().map(|d| (dbg(&slots), d)).map_err(|e| (dbg(&slots), e)))
    })
}

/// Two disjoint contractions give the same result in either order.
pub fn check_contractions_commute<T: TensorType>(t: &T, cases: usize, seed: u64, tol: f64) -> AxiomReport {
    run_cases(t, "contractions_commute", 4, cases, seed, tol, |rng| {
        let (slots, a) = sample(t, rng, &|r| {
            let (x, b, c) = (t.random_index(r, SLOT_BUDGET), t.random_index(r, SLOT_BUDGET), t.random_index(r, SLOT_BUDGET));
            let (bd, cd) = (t.dual(&b), t.dual(&c));
            alloc::vec![x, b, bd, c, cd]
        })?;
        let f = || -> Result<f64, Error> {
            let c_first = contract_pair(t, &contract_pair(t, &a, 3, 4)?, 1, 2)?;
            let b_first = contract_pair(t, &contract_pair(t, &a, 1, 2)?, 1, 2)?;
            Ok(t.deviation(&c_first, &b_first))
        };
        Some(f().map(|d| (dbg(&slots), d)).map_err(|e| (dbg(&slots), e)))
    })
}

/// A contraction inside one factor commutes with taking a product, and
/// products are associative.
pub fn check_contraction_tensorproduct<T: TensorType>(t: &T, cases: usize, seed: u64, tol: f64) -> AxiomReport {
    run_cases(t, "contraction_tensorproduct", 5, cases, seed, tol, |rng| {
        let (slots, a) = sample(t, rng, &|r| {
            let (x, b) = (t.random_index(r, SLOT_BUDGET), t.random_index(r, SLOT_BUDGET));
            let bd = t.dual(&b);
            alloc::vec![x, b, bd]
        })?;
        let (_, b) = sample(t, rng, &|r| {
            let m = rng_len(r) + 1;
            indices(t, r, m)
        })?;
        let (_, c) = sample(t, rng, &|r| {
            let m = rng_len(r);
            indices(t, r, m)
        })?;
        let f = || -> Result<f64, Error> {
            let left = t.tensor_product(&t.contract(&a)?, &b)?;
            let right = contract_pair(t, &t.tensor_product(&a, &b)?, 1, 2)?;
            let mut dev = t.deviation(&left, &right);
            // B first: the contracted pair sits after B's slots.
            let nb = t.slots(&b).len();
            let left = t.tensor_product(&b, &t.contract(&a)?)?;
            let right = contract_pair(t, &t.tensor_product(&b, &a)?, nb + 1, nb + 2)?;
            dev = dev.max(t.deviation(&left, &right));
            let ab_c = t.tensor_product(&t.tensor_product(&a, &b)?, &c)?;
            let a_bc = t.tensor_product(&a, &t.tensor_product(&b, &c)?)?;
            dev = dev.max(t.deviation(&ab_c, &a_bc));
            let unit = t.tensor_product(&t.trivial(), &a)?;
            dev = dev.max(t.deviation(&unit, &a));
            Ok(dev)
        };
        Some(f().map(|d| (dbg(&slots), d)).map_err(|e| (dbg(&slots), e)))
    })
}

/// Gluing an identity onto a slot returns the tensor, from either side. When
/// the identity can be glued against its direction, doing so twice must also
/// return the tensor.
pub fn check_identity_axiom<T: TensorType>(t: &T, cases: usize, seed: u64, tol: f64) -> AxiomReport {
    if !t.flags().has_identity {
        return AxiomReport {
            axiom: "identity".into(),
            cases: 0,
            failures: Vec::new(),
            note: Some("type has no identity".into()),
        };
    }
    let flags = t.flags();
    run_cases(t, "identity", 6, cases, seed, tol, |rng| {
        let n = rng.gen_range(1..=3);
        let (slots, a) = sample(t, rng, &|r| indices(t, r, n))?;
        let f = || -> Result<f64, Error> {
            let b = slots[n - 1].clone();
            // Last slot as a tail into id(b).
            let id = t.identity(&b)?;
            let out = contract_pair(t, &t.tensor_product(&a, &id)?, n - 1, n)?;
            let mut dev = t.deviation(&a, &out);
            // Last slot as a head fed by id(dual b).
            let bd = t.dual(&b);
            let id2 = t.identity(&bd)?;
            let glued = contract_pair(t, &t.tensor_product(&id2, &a)?, 1, n + 1)?;
            let mut perm: Vec<usize> = (1..n).collect();
            perm.push(0);
            let back = if n > 1 { t.permute(&glued, &perm)? } else { glued };
            dev = dev.max(t.deviation(&a, &back));
            // Against the direction: the tail b meets slot 1 of id(b*).
            if !flags.symmetric_identity || bd == b {
                let wrong = |x: &T::Tensor| -> Result<T::Tensor, Error> {
                    let w = t.identity(&bd)?;
                    contract_pair(t, &t.tensor_product(x, &w)?, n - 1, n + 1)
                };
                let twice = wrong(&wrong(&a)?)?;
                dev = dev.max(t.deviation(&a, &twice));
            }
            Ok(dev)
        };
        Some(f().map(|d| (dbg(&slots), d)).map_err(|e| (dbg(&slots), e)))
    })
}

/// Contracting `(j, j*)` equals contracting `(j*, j)`. For types flagged as
/// asymmetric the report passes only if a counterexample is found.
pub fn check_symmetric_contraction<T: TensorType>(t: &T, cases: usize, seed: u64, tol: f64) -> AxiomReport {
    let symmetric = t.flags().symmetric_contraction;
    let mut report = run_cases(t, "symmetric_contraction", 7, cases, seed, tol, |rng| {
        let (slots, a) = sample(t, rng, &|r| {
            let (x, b) = (t.random_index(r, SLOT_BUDGET), t.random_index(r, SLOT_BUDGET));
            let bd = t.dual(&b);
            alloc::vec![x, b, bd]
        })?;
        let f = || -> Result<f64, Error> {
            let forward = t.contract(&a)?;
            let backward = t.contract(&t.permute(&a, &[0, 2, 1])?)?;
            Ok(t.deviation(&forward, &backward))
        };
        Some(f().map(|d| (dbg(&slots), d)).map_err(|e| (dbg(&slots), e)))
    });
    if !symmetric {
        let witness = report.failures.iter().find(|f| f.deviation.is_finite()).cloned();
        report.failures.clear();
        match witness {
            Some(w) => {
                report.note = Some(format!(
                    "asymmetric as flagged: seed {} slots {} differ by {:.3e}",
                    w.seed, w.slots, w.deviation
                ))
            }
            None => report.failures.push(AxiomFailure {
                seed,
                slots: String::new(),
                deviation: 0.0,
                note: "flagged asymmetric but no witness found".into(),
            }),
        }
    }
    report
}

/// All seven checks, in a fixed order.
pub fn run_axiom_suite<T: TensorType>(t: &T, cases: usize, seed: u64, tol: f64) -> Vec<AxiomReport> {
    alloc::vec![
        check_commutor_involutive(t, cases, seed, tol),
        check_hexagon(t, cases, seed, tol),
        check_block_compatibility(t, cases, seed, tol),
        check_contractions_commute(t, cases, seed, tol),
        check_contraction_tensorproduct(t, cases, seed, tol),
        check_identity_axiom(t, cases, seed, tol),
        check_symmetric_contraction(t, cases, seed, tol),
    ]
}
