//! Networks of atoms joined by directed bonds, and their evaluation.
//!
//! Receptors address `(atom, slot)`. Free bonds are addressed as extra atoms
//! numbered after the real ones, each with slots 0 and 1 of the identity.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::tensor::TensorType;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Receptor {
    pub atom: usize,
    pub slot: usize,
}

impl Receptor {
    pub fn new(atom: usize, slot: usize) -> Self {
        Receptor { atom, slot }
    }
}

impl fmt::Display for Receptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.atom, self.slot)
    }
}

/// A bond runs from its tail (output) to its head (input).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bond {
    pub tail: Receptor,
    pub head: Receptor,
}

#[derive(Clone, Debug)]
pub struct Network<I, P> {
    pub tensors: BTreeMap<String, P>,
    pub atoms: Vec<String>,
    pub bonds: Vec<Bond>,
    pub open: Vec<Receptor>,
    pub free_bonds: Vec<I>,
    pub loops: Vec<I>,
}

pub type NetworkOf<T> = Network<<T as TensorType>::Index, <T as TensorType>::Tensor>;

impl<I, P> Default for Network<I, P> {
    fn default() -> Self {
        Network {
            tensors: BTreeMap::new(),
            atoms: Vec::new(),
            bonds: Vec::new(),
            open: Vec::new(),
            free_bonds: Vec::new(),
            loops: Vec::new(),
        }
    }
}

impl<I: Clone, P: Clone> Network<I, P> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_tensor(&mut self, name: &str, t: P) -> &mut Self {
        self.tensors.insert(name.to_string(), t);
        self
    }

    /// Appends an atom and returns its index.
    pub fn add_atom(&mut self, name: &str) -> usize {
        self.atoms.push(name.to_string());
        self.atoms.len() - 1
    }

    pub fn bond(&mut self, tail: (usize, usize), head: (usize, usize)) -> &mut Self {
        self.bonds.push(Bond { tail: Receptor::new(tail.0, tail.1), head: Receptor::new(head.0, head.1) });
        self
    }

    pub fn open(&mut self, r: (usize, usize)) -> &mut Self {
        self.open.push(Receptor::new(r.0, r.1));
        self
    }

    /// Adds a free bond and returns its pseudo-atom index. Free bonds must be
    /// added after all atoms.
    pub fn add_free_bond(&mut self, index: I) -> usize {
        self.free_bonds.push(index);
        self.atoms.len() + self.free_bonds.len() - 1
    }

    /// The same network with atoms renumbered: new atom `k` is old atom
    /// `order[k]`.
    pub fn relabel_atoms(&self, order: &[usize]) -> Self {
        let n = self.atoms.len();
        let mut new_of = vec![0; n];
        for (k, &o) in order.iter().enumerate() {
            new_of[o] = k;
        }
        let map = |r: Receptor| {
            if r.atom < n {
                Receptor::new(new_of[r.atom], r.slot)
            } else {
                r
            }
        };
        Network {
            tensors: self.tensors.clone(),
            atoms: order.iter().map(|&o| self.atoms[o].clone()).collect(),
            bonds: self.bonds.iter().map(|b| Bond { tail: map(b.tail), head: map(b.head) }).collect(),
            open: self.open.iter().map(|&r| map(r)).collect(),
            free_bonds: self.free_bonds.clone(),
            loops: self.loops.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Diagnostic {
    UnknownTensor { atom: usize, name: String },
    NoSuchReceptor(Receptor),
    DuplicateReceptor(Receptor),
    DanglingReceptor(Receptor),
    IndexMismatch { bond: usize, detail: String },
    DirectionViolation { bond: usize, detail: String },
    NoIdentity,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::UnknownTensor { atom, name } => write!(f, "atom {atom} refers to unknown tensor `{name}`"),
            Diagnostic::NoSuchReceptor(r) => write!(f, "receptor {r} does not exist"),
            Diagnostic::DuplicateReceptor(r) => write!(f, "receptor {r} is used more than once"),
            Diagnostic::DanglingReceptor(r) => write!(f, "receptor {r} is neither bonded nor open"),
            Diagnostic::IndexMismatch { bond, detail } => write!(f, "bond {bond}: 0-data mismatch, {detail}"),
            Diagnostic::DirectionViolation { bond, detail } => write!(f, "bond {bond}: direction violation, {detail}"),
            Diagnostic::NoIdentity => write!(f, "free bonds or loops need a tensor type with identities"),
        }
    }
}

/// Slot 0-data of every atom and free bond, in atom order.
fn atom_slots<T: TensorType>(net: &NetworkOf<T>, t: &T) -> Result<Vec<Vec<T::Index>>, Vec<Diagnostic>> {
    let mut out = Vec::new();
    let mut diags = Vec::new();
    for (k, name) in net.atoms.iter().enumerate() {
        match net.tensors.get(name) {
            Some(p) => out.push(t.slots(p)),
            None => {
                diags.push(Diagnostic::UnknownTensor { atom: k, name: name.clone() });
                out.push(Vec::new());
            }
        }
    }
    for b in &net.free_bonds {
        out.push(vec![t.dual(b), b.clone()]);
    }
    if diags.is_empty() {
        Ok(out)
    } else {
        Err(diags)
    }
}

pub fn validate<T: TensorType>(net: &NetworkOf<T>, t: &T) -> Result<(), Vec<Diagnostic>> {
    let slots = atom_slots(net, t)?;
    let mut diags = Vec::new();
    if (!net.free_bonds.is_empty() || !net.loops.is_empty()) && !t.flags().has_identity {
        diags.push(Diagnostic::NoIdentity);
    }
    let mut used: Vec<Vec<bool>> = slots.iter().map(|s| vec![false; s.len()]).collect();
    let mut mark = |r: Receptor, diags: &mut Vec<Diagnostic>| -> bool {
        match used.get_mut(r.atom).and_then(|s| s.get_mut(r.slot)) {
            None => {
                diags.push(Diagnostic::NoSuchReceptor(r));
                false
            }
            Some(u) if *u => {
                diags.push(Diagnostic::DuplicateReceptor(r));
                true
            }
            Some(u) => {
                *u = true;
                true
            }
        }
    };
    for (k, b) in net.bonds.iter().enumerate() {
        let ok_t = mark(b.tail, &mut diags);
        let ok_h = mark(b.head, &mut diags);
        if !(ok_t && ok_h) {
            continue;
        }
        let tail = &slots[b.tail.atom][b.tail.slot];
        let head = &slots[b.head.atom][b.head.slot];
        if *head != t.dual(tail) {
            let detail = format!("tail {} is {:?}, head {} is {:?}", b.tail, tail, b.head, head);
            if t.flags().has_dual && head == tail {
                diags.push(Diagnostic::DirectionViolation { bond: k, detail });
            } else {
                diags.push(Diagnostic::IndexMismatch { bond: k, detail });
            }
        }
    }
    for &r in &net.open {
        mark(r, &mut diags);
    }
    for (a, s) in used.iter().enumerate() {
        for (k, &u) in s.iter().enumerate() {
            if !u {
                diags.push(Diagnostic::DanglingReceptor(Receptor::new(a, k)));
            }
        }
    }
    if diags.is_empty() {
        Ok(())
    } else {
        Err(diags)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Step<I> {
    /// Merges group `right` into group `left`, slots of `left` first.
    TensorProduct { left: usize, right: usize },
    Permute { group: usize, perm: Vec<usize> },
    /// Contracts the last two slots of a group; `bond` is `None` for loops.
    Contract { group: usize, bond: Option<usize> },
    /// Creates a new group holding an identity.
    EmitIdentity { index: I },
    /// Creates a new group holding the trivial tensor.
    EmitTrivial,
}

impl<I> Step<I> {
    pub fn kind(&self) -> &'static str {
        match self {
            Step::TensorProduct { .. } => "TensorProduct",
            Step::Permute { .. } => "Permute",
            Step::Contract { .. } => "Contract",
            Step::EmitIdentity { .. } => "EmitIdentity",
            Step::EmitTrivial => "EmitTrivial",
        }
    }
}

/// Groups `0..atoms` start out holding the atoms; emitted groups are numbered
/// after them in emission order.
#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationPlan<I> {
    pub steps: Vec<Step<I>>,
}

impl<I> EvaluationPlan<I> {
    pub fn kinds(&self) -> Vec<&'static str> {
        self.steps.iter().map(|s| s.kind()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderHint {
    /// Bonds in file order.
    FileOrder,
    /// Bonds in the given order (a permutation of bond indices).
    Given(Vec<usize>),
    /// Next bond is the one with the smallest resulting payload estimate.
    Greedy,
    /// Random bond order and random operand sides.
    Random(u64),
}

/// Tracks which receptors each group holds, in slot order.
struct Layout<I> {
    groups: Vec<Option<Vec<(Receptor, I)>>>,
}

impl<I: Clone> Layout<I> {
    fn find(&self, r: Receptor) -> (usize, usize) {
        for (g, s) in self.groups.iter().enumerate() {
            if let Some(s) = s {
                if let Some(p) = s.iter().position(|(x, _)| *x == r) {
                    return (g, p);
                }
            }
        }
        panic!("receptor {r} not held by any group")
    }
}

pub fn plan<T: TensorType>(net: &NetworkOf<T>, t: &T, order: &OrderHint) -> Result<EvaluationPlan<T::Index>, Error> {
    validate(net, t).map_err(|d| Error::InvalidNetwork(d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")))?;
    let slots = atom_slots(net, t).expect("validated");
    let n_atoms = net.atoms.len();
    let mut steps = Vec::new();
    let mut layout = Layout { groups: Vec::new() };
    for a in 0..n_atoms {
        layout.groups.push(Some(slots[a].iter().enumerate().map(|(k, i)| (Receptor::new(a, k), i.clone())).collect()));
    }
    for (k, b) in net.free_bonds.iter().enumerate() {
        let a = n_atoms + k;
        steps.push(Step::EmitIdentity { index: b.clone() });
        layout.groups.push(Some(vec![(Receptor::new(a, 0), t.dual(b)), (Receptor::new(a, 1), b.clone())]));
    }
    let mut rng = match order {
        OrderHint::Random(seed) => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    for b in &net.loops {
        steps.push(Step::EmitIdentity { index: b.clone() });
        let g = layout.groups.len();
        layout.groups.push(Some(Vec::new()));
        steps.push(Step::Contract { group: g, bond: None });
    }

    let mut remaining: Vec<usize> = match order {
        OrderHint::Given(o) => {
            let mut sorted = o.clone();
            sorted.sort_unstable();
            if sorted != (0..net.bonds.len()).collect::<Vec<_>>() {
                return Err(Error::InvalidPermutation(format!("{:?} is not an order of {} bonds", o, net.bonds.len())));
            }
            o.clone()
        }
        _ => (0..net.bonds.len()).collect(),
    };
    if let Some(r) = rng.as_mut() {
        remaining.shuffle(r);
    }
    while !remaining.is_empty() {
        let pick = if *order == OrderHint::Greedy {
            let mut best = (f64::INFINITY, 0);
            for (pos, &bi) in remaining.iter().enumerate() {
                let b = &net.bonds[bi];
                let (gt, _) = layout.find(b.tail);
                let (gh, _) = layout.find(b.head);
                let mut rest: Vec<T::Index> = Vec::new();
                for g in if gt == gh { vec![gt] } else { vec![gt, gh] } {
                    for (r, i) in layout.groups[g].as_ref().unwrap() {
                        if *r != b.tail && *r != b.head {
                            rest.push(i.clone());
                        }
                    }
                }
                let c = t.cost(&rest);
                if c < best.0 {
                    best = (c, pos);
                }
            }
            best.1
        } else {
            0
        };
        let bi = remaining.remove(pick);
        let b = net.bonds[bi];
        let (mut gt, _) = layout.find(b.tail);
        let (gh, _) = layout.find(b.head);
        if gt != gh {
            let swap = rng.as_mut().map(|r| r.gen::<bool>()).unwrap_or(false);
            let (left, right) = if swap { (gh, gt) } else { (gt, gh) };
            steps.push(Step::TensorProduct { left, right });
            let moved = layout.groups[right].take().unwrap();
            layout.groups[left].as_mut().unwrap().extend(moved);
            gt = left;
        }
        let g = gt;
        let labels = layout.groups[g].take().unwrap();
        let pt = labels.iter().position(|(r, _)| *r == b.tail).unwrap();
        let ph = labels.iter().position(|(r, _)| *r == b.head).unwrap();
        let n = labels.len();
        let mut perm: Vec<usize> = (0..n).filter(|&k| k != pt && k != ph).collect();
        perm.push(pt);
        perm.push(ph);
        if perm.iter().enumerate().any(|(k, &p)| k != p) {
            steps.push(Step::Permute { group: g, perm: perm.clone() });
        }
        let kept: Vec<(Receptor, T::Index)> = perm[..n - 2].iter().map(|&p| labels[p].clone()).collect();
        layout.groups[g] = Some(kept);
        steps.push(Step::Contract { group: g, bond: Some(bi) });
    }

    // Fold the remaining components together in group order.
    let live: Vec<usize> = (0..layout.groups.len()).filter(|&g| layout.groups[g].is_some()).collect();
    let root = match live.first() {
        Some(&g) => g,
        None => {
            steps.push(Step::EmitTrivial);
            layout.groups.push(Some(Vec::new()));
            layout.groups.len() - 1
        }
    };
    for &g in live.iter().skip(1) {
        steps.push(Step::TensorProduct { left: root, right: g });
        let moved = layout.groups[g].take().unwrap();
        layout.groups[root].as_mut().unwrap().extend(moved);
    }
    let labels = layout.groups[root].as_ref().unwrap();
    let perm: Vec<usize> = net
        .open
        .iter()
        .map(|r| labels.iter().position(|(x, _)| x == r).expect("open receptor survives"))
        .collect();
    if perm.iter().enumerate().any(|(k, &p)| k != p) {
        steps.push(Step::Permute { group: root, perm });
    }
    Ok(EvaluationPlan { steps })
}

/// Replays a plan. The result has the open receptors' 0-data, in `open` order.
pub fn evaluate<T: TensorType>(net: &NetworkOf<T>, t: &T, plan: &EvaluationPlan<T::Index>) -> Result<T::Tensor, Error> {
    let mut groups: Vec<Option<T::Tensor>> = Vec::new();
    for (k, name) in net.atoms.iter().enumerate() {
        let p = net
            .tensors
            .get(name)
            .ok_or_else(|| Error::InvalidNetwork(format!("atom {k} refers to unknown tensor `{name}`")))?;
        groups.push(Some(p.clone()));
    }
    let take = |groups: &mut Vec<Option<T::Tensor>>, g: usize| -> Result<T::Tensor, Error> {
        groups
            .get_mut(g)
            .and_then(|x| x.take())
            .ok_or_else(|| Error::InvalidNetwork(format!("plan refers to missing group {g}")))
    };
    let mut last = None;
    for step in &plan.steps {
        match step {
            Step::TensorProduct { left, right } => {
                let a = take(&mut groups, *left)?;
                let b = take(&mut groups, *right)?;
                groups[*left] = Some(t.tensor_product(&a, &b)?);
                last = Some(*left);
            }
            Step::Permute { group, perm } => {
                let a = take(&mut groups, *group)?;
                groups[*group] = Some(t.permute(&a, perm)?);
                last = Some(*group);
            }
            Step::Contract { group, bond } => {
                let a = take(&mut groups, *group)?;
                let c = t.contract(&a).map_err(|e| match bond {
                    Some(b) => Error::InvalidNetwork(format!("bond {b}: {e}")),
                    None => e,
                })?;
                groups[*group] = Some(c);
                last = Some(*group);
            }
            Step::EmitIdentity { index } => {
                groups.push(Some(t.identity(index)?));
                last = Some(groups.len() - 1);
            }
            Step::EmitTrivial => {
                groups.push(Some(t.trivial()));
                last = Some(groups.len() - 1);
            }
        }
    }
    let live: Vec<usize> = (0..groups.len()).filter(|&g| groups[g].is_some()).collect();
    match (live.as_slice(), last) {
        ([g], _) => Ok(groups[*g].take().unwrap()),
        ([], _) => Err(Error::InvalidNetwork("plan leaves nothing".into())),
        _ => Err(Error::InvalidNetwork(format!("plan leaves {} disconnected groups", live.len()))),
    }
}

/// Plans with `order` and evaluates.
pub fn evaluate_with<T: TensorType>(net: &NetworkOf<T>, t: &T, order: &OrderHint) -> Result<T::Tensor, Error> {
    let p = plan(net, t, order)?;
    evaluate(net, t, &p)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderReport {
    pub trials: usize,
    pub max_deviation: f64,
    pub passed: bool,
}

/// Evaluates under `trials` random bond orders, operand sides and atom
/// numberings, comparing each against the file-order evaluation.
pub fn evaluate_order_independent<T: TensorType>(
    net: &NetworkOf<T>,
    t: &T,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<OrderReport, Error> {
    let reference = evaluate_with(net, t, &OrderHint::FileOrder)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_deviation: f64 = 0.0;
    for _ in 0..trials {
        let mut order: Vec<usize> = (0..net.atoms.len()).collect();
        order.shuffle(&mut rng);
        let relabeled = net.relabel_atoms(&order);
        let r = evaluate_with(&relabeled, t, &OrderHint::Random(rng.gen()))?;
        max_deviation = max_deviation.max(t.deviation(&reference, &r));
    }
    Ok(OrderReport { trials, max_deviation, passed: max_deviation <= tol })
}

/// Shape limits for [`random_network`].
#[derive(Clone, Debug)]
pub struct RandomNetworkConfig {
    pub max_atoms: usize,
    pub max_bonds: usize,
    pub max_open: usize,
    /// Budget passed to `random_index` for each bond or open slot.
    pub budget: usize,
    pub free_bonds: bool,
    pub loops: bool,
}

impl Default for RandomNetworkConfig {
    fn default() -> Self {
        RandomNetworkConfig { max_atoms: 3, max_bonds: 3, max_open: 2, budget: 2, free_bonds: true, loops: true }
    }
}

/// Draws a random valid network. Atom slots are shuffled, self-bonds are
/// allowed, and free bonds and loops appear when the type has identities.
/// `accept` vets the slot 0-data of every edge (bonds, open slots, free
/// bonds and loops), e.g. to cap the total size.
pub fn random_network<T: TensorType>(
    t: &T,
    cfg: &RandomNetworkConfig,
    rng: &mut dyn rand::RngCore,
    accept: &dyn Fn(&[T::Index]) -> bool,
) -> NetworkOf<T> {
    let ids = t.flags().has_identity;
    loop {
        let n_atoms = rng.gen_range(1..=cfg.max_atoms.max(1));
        let n_bonds = rng.gen_range(0..=cfg.max_bonds);
        let n_open = rng.gen_range(0..=cfg.max_open);
        let n_free = if cfg.free_bonds && ids { rng.gen_range(0..=1) } else { 0 };
        let n_loops = if cfg.loops && ids { rng.gen_range(0..=1) } else { 0 };
        let mut edges = Vec::new();
        for _ in 0..n_bonds + n_open + n_free + n_loops {
            edges.push(t.random_index(rng, cfg.budget));
        }
        if !accept(&edges) {
            continue;
        }
        // Each atom's slots as (edge, end) with end 0 = tail, 1 = head, 2 = open.
        let mut holders: Vec<Vec<(usize, u8)>> = vec![Vec::new(); n_atoms];
        for e in 0..n_bonds {
            holders[rng.gen_range(0..n_atoms)].push((e, 0));
            holders[rng.gen_range(0..n_atoms)].push((e, 1));
        }
        for e in n_bonds..n_bonds + n_open {
            holders[rng.gen_range(0..n_atoms)].push((e, 2));
        }
        // A free bond may feed an atom, be fed by one, or stay fully open.
        let mut free_ends = Vec::new();
        for e in n_bonds + n_open..n_bonds + n_open + n_free {
            let mode = rng.gen_range(0..3u8);
            if mode == 1 {
                holders[rng.gen_range(0..n_atoms)].push((e, 1));
            } else if mode == 2 {
                holders[rng.gen_range(0..n_atoms)].push((e, 0));
            }
            free_ends.push((e, mode));
        }
        for h in holders.iter_mut() {
            h.shuffle(rng);
        }
        let mut net: NetworkOf<T> = Network::new();
        let mut tails = vec![None; edges.len()];
        let mut heads = vec![None; edges.len()];
        let mut failed = false;
        for (a, h) in holders.iter().enumerate() {
            let slots: Vec<T::Index> =
                h.iter().map(|&(e, end)| if end == 1 { t.dual(&edges[e]) } else { edges[e].clone() }).collect();
            let Some(p) = t.random_tensor(&slots, rng) else {
                failed = true;
                break;
            };
            let name = format!("T{a}");
            net.add_tensor(&name, p);
            net.add_atom(&name);
            for (s, &(e, end)) in h.iter().enumerate() {
                match end {
                    0 => tails[e] = Some(Receptor::new(a, s)),
                    1 => heads[e] = Some(Receptor::new(a, s)),
                    _ => net.open.push(Receptor::new(a, s)),
                }
            }
        }
        if failed {
            continue;
        }
        for e in 0..n_bonds {
            net.bonds.push(Bond { tail: tails[e].unwrap(), head: heads[e].unwrap() });
        }
        for &(e, mode) in &free_ends {
            let f = net.add_free_bond(edges[e].clone());
            // Slot 0 of a free bond takes a bond in, slot 1 sends one out.
            match mode {
                1 => {
                    net.bonds.push(Bond { tail: Receptor::new(f, 1), head: heads[e].unwrap() });
                    net.open.push(Receptor::new(f, 0));
                }
                2 => {
                    net.bonds.push(Bond { tail: tails[e].unwrap(), head: Receptor::new(f, 0) });
                    net.open.push(Receptor::new(f, 1));
                }
                _ => {
                    net.open.push(Receptor::new(f, 0));
                    net.open.push(Receptor::new(f, 1));
                }
            }
        }
        for e in n_bonds + n_open + n_free..edges.len() {
            net.loops.push(edges[e].clone());
        }
        net.open.shuffle(rng);
        if validate(&net, t).is_ok() {
            return net;
        }
    }
}
