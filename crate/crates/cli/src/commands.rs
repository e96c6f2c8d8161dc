//! Subcommands of `tt`, runnable in-process for tests.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tensor_types::array::ArrayType;
use tensor_types::axioms::{run_axiom_suite, AxiomReport};
use tensor_types::mappings::*;
use tensor_types::network::*;
use tensor_types::scalars::*;
use tensor_types::schur::{PrefactorMode, SchurRect, SchurSquare, Symmetry};
use tensor_types::TensorType;

use crate::demos;
use crate::format::*;

pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_EVAL: i32 = 4;

/// The nine types every axiom and order check covers.
pub const STANDARD_TYPES: [&str; 9] = [
    "array:f64",
    "array:bool",
    "array:zmod:5",
    "graded",
    "pairing",
    "schur-rect:1,1",
    "schur-rect:1,-1",
    "schur-square:sym",
    "schur-square:anti",
];

#[derive(Parser, Debug)]
#[command(name = "tt", about = "Evaluate and check tensor networks of several tensor types")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Greedy,
    Given,
    Random,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a network file and print the result.
    Eval {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "greedy")]
        order: Order,
        /// Also evaluate under random orders and fail beyond this deviation.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the axiom suite on a named type, or on `all` standard types.
    Axioms {
        type_name: String,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Apply a mapping to a network file and check that it commutes with
    /// evaluation.
    Map {
        file: PathBuf,
        /// pairing2array, det, pfaffian, antisym, inoutpair or entrywise:<hom>
        mapping: String,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Physics demos.
    Demo {
        #[command(subcommand)]
        demo: Demo,
    },
}

#[derive(Subcommand, Debug)]
pub enum Demo {
    /// Ising model probabilities of observed spins.
    Ising {
        #[arg(long, default_value_t = 3)]
        width: usize,
        #[arg(long, default_value_t = 3)]
        height: usize,
        #[arg(long, default_value_t = 0.4)]
        beta: f64,
        #[arg(long)]
        periodic: bool,
        /// Comma-separated site indices, numbered row by row.
        #[arg(long, value_delimiter = ',')]
        observe: Vec<usize>,
    },
    /// Which boundary patterns admit a dimer covering.
    Dimer {
        #[arg(long, default_value_t = 2)]
        width: usize,
        #[arg(long, default_value_t = 2)]
        height: usize,
        /// Print the whole feasibility tensor.
        #[arg(long)]
        full: bool,
    },
    /// Determinant mapping against many-body amplitudes.
    Freefermion {
        #[arg(long, default_value_t = 3)]
        modes: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }
    fn err(code: i32, msg: impl Into<String>) -> Self {
        Outcome { code, stdout: String::new(), stderr: msg.into() + "\n" }
    }
}

/// Parses `args` (program name first) and runs the command. `env_seed`
/// replaces the default seed 0; an explicit `--seed` wins over both.
pub fn run<I, S>(args: I, env_seed: Option<u64>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() { Outcome::err(EXIT_PARSE, text.trim_end()) } else { Outcome::ok(text) };
        }
    };
    let seed = |s: Option<u64>| s.or(env_seed).unwrap_or(0);
    match cli.command {
        Command::Eval { file, order, tol, seed: s } => eval_file(&file, order, tol, seed(s)),
        Command::Axioms { type_name, cases, seed: s, tol } => axioms(&type_name, cases, seed(s), tol),
        Command::Map { file, mapping, trials, seed: s, tol } => map_file(&file, &mapping, trials, seed(s), tol),
        Command::Demo { demo } => match demo {
            Demo::Ising { width, height, beta, periodic, observe } => ising(width, height, beta, periodic, &observe),
            Demo::Dimer { width, height, full } => dimer(width, height, full),
            Demo::Freefermion { modes, seed: s } => freefermion(modes, seed(s)),
        },
    }
}

fn load(file: &PathBuf) -> Result<Value, Outcome> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Outcome::err(EXIT_PARSE, format!("cannot read {}: {e}", file.display())))?;
    serde_json::from_str(&text).map_err(|e| Outcome::err(EXIT_PARSE, format!("parse error: {e}")))
}

fn check<T: TensorType>(net: &NetworkOf<T>, t: &T) -> Result<(), Outcome> {
    validate(net, t).map_err(|d| {
        let all: Vec<String> = d.iter().map(|x| x.to_string()).collect();
        Outcome::err(EXIT_INVALID, format!("invalid network: {}", all.join("; ")))
    })
}

struct EvalRun<'a> {
    doc: &'a Value,
    order: Order,
    tol: Option<f64>,
    seed: u64,
}

impl Visitor for EvalRun<'_> {
    type Out = Outcome;
    fn visit<T: FileType>(self, t: T) -> Outcome {
        let net = match parse_network(&t, self.doc) {
            Ok(n) => n,
            Err(e) => return Outcome::err(EXIT_PARSE, e),
        };
        if let Err(o) = check(&net, &t) {
            return o;
        }
        let hint = match self.order {
            Order::Greedy => OrderHint::Greedy,
            Order::Random => OrderHint::Random(self.seed),
            Order::Given => match given_order(self.doc) {
                Ok(Some(o)) => OrderHint::Given(o),
                Ok(None) => OrderHint::FileOrder,
                Err(e) => return Outcome::err(EXIT_PARSE, format!("\"order\": {e}")),
            },
        };
        let r = match evaluate_with(&net, &t, &hint) {
            Ok(r) => r,
            Err(e) => return Outcome::err(EXIT_EVAL, format!("evaluation failed: {e}")),
        };
        let mut out = Outcome::ok(format!("{}\n{}\n", write_slots(&t, &t.slots(&r)), t.write_tensor(&r)));
        if let Some(tol) = self.tol {
            match evaluate_order_independent(&net, &t, 5, self.seed, tol) {
                Ok(rep) if rep.passed => {
                    out.stderr = format!("order check: max deviation {} over {} orders\n", fmt_float(rep.max_deviation), rep.trials)
                }
                Ok(rep) => {
                    return Outcome::err(
                        EXIT_EVAL,
                        format!("order check failed: max deviation {} exceeds {}", fmt_float(rep.max_deviation), tol),
                    )
                }
                Err(e) => return Outcome::err(EXIT_EVAL, format!("evaluation failed: {e}")),
            }
        }
        out
    }
}

fn eval_file(file: &PathBuf, order: Order, tol: Option<f64>, seed: u64) -> Outcome {
    let doc = match load(file) {
        Ok(d) => d,
        Err(o) => return o,
    };
    eval_doc(&doc, order, tol, seed)
}

/// Evaluates a parsed network document.
pub fn eval_doc(doc: &Value, order: Order, tol: Option<f64>, seed: u64) -> Outcome {
    let (ty, ring, params) = match header(doc) {
        Ok(h) => h,
        Err(e) => return Outcome::err(EXIT_PARSE, e),
    };
    dispatch(&ty, &ring, &params, EvalRun { doc, order, tol, seed }).unwrap_or_else(|e| Outcome::err(EXIT_PARSE, e))
}

/// Instantiates a type by its short name, e.g. `array:zmod:5`,
/// `graded:z`, `schur-rect:1,-1:det` or `schur-square:anti:pfaffian`.
pub fn named_type<V: Visitor>(name: &str, v: V) -> Result<V::Out, String> {
    let (head, rest) = name.split_once(':').unwrap_or((name, ""));
    let mut parts = rest.split(':');
    match head {
        "array" => dispatch("array", rest, &json!({}), v),
        "graded" => dispatch("graded", "f64", &json!({ "grading": if rest.is_empty() { "z2" } else { rest } }), v),
        "pairing" if rest.is_empty() => dispatch("pairing", "f64", &json!({}), v),
        "schur-rect" => {
            let u: Vec<f64> = parts
                .next()
                .unwrap_or("1,1")
                .split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| format!("bad u in `{name}`")))
                .collect::<Result<_, _>>()?;
            let mode = parts.next().unwrap_or("none");
            dispatch("schur-rect", "f64", &json!({ "u": u, "prefactor": mode }), v)
        }
        "schur-square" => {
            let (u, sym) = match parts.next() {
                Some("sym") => ("sx", "sym"),
                Some("anti") => ("isy", "anti"),
                _ => return Err(format!("`{name}`: expected schur-square:sym or schur-square:anti")),
            };
            let mode = parts.next().unwrap_or("none");
            dispatch("schur-square", "f64", &json!({ "u": u, "symmetry": sym, "prefactor": mode }), v)
        }
        _ => Err(format!("unknown type name `{name}`")),
    }
}

pub struct AxiomRun {
    pub cases: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Visitor for AxiomRun {
    type Out = Vec<AxiomReport>;
    fn visit<T: FileType>(self, t: T) -> Vec<AxiomReport> {
        run_axiom_suite(&t, self.cases, self.seed, self.tol)
    }
}

/// Random networks evaluated under random bond orders.
pub struct OrderRun {
    pub networks: usize,
    pub orders: usize,
    pub seed: u64,
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderSummary {
    pub networks: usize,
    pub max_deviation: f64,
    pub passed: bool,
}

impl Visitor for OrderRun {
    type Out = Result<OrderSummary, String>;
    fn visit<T: FileType>(self, t: T) -> Self::Out {
        use rand::SeedableRng;
        let tol = if t.is_exact() { 0.0 } else { self.tol };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.seed);
        // Closing an identity into a loop is Schur-singular for some shift
        // parameters; draw loops only where they evaluate.
        let mut probe = rand_chacha::ChaCha8Rng::seed_from_u64(self.seed);
        let loops = t.flags().has_identity
            && (0..8).all(|_| {
                let b = t.random_index(&mut probe, 2);
                t.identity(&b).and_then(|i| t.contract(&i)).is_ok()
            });
        let cfg = RandomNetworkConfig { loops, ..RandomNetworkConfig::default() };
        let mut max_deviation: f64 = 0.0;
        let mut passed = true;
        for k in 0..self.networks {
            let net = random_network(&t, &cfg, &mut rng, &|_| true);
            let r = evaluate_order_independent(&net, &t, self.orders, self.seed ^ k as u64, tol).map_err(|e| e.to_string())?;
            max_deviation = max_deviation.max(r.max_deviation);
            passed &= r.passed;
        }
        Ok(OrderSummary { networks: self.networks, max_deviation, passed })
    }
}

fn axioms(name: &str, cases: usize, seed: u64, tol: f64) -> Outcome {
    let names: Vec<&str> = if name == "all" { STANDARD_TYPES.to_vec() } else { vec![name] };
    let mut out = String::new();
    let mut failed = false;
    for n in names {
        let reports = match named_type(n, AxiomRun { cases, seed, tol }) {
            Ok(r) => r,
            Err(e) => return Outcome::err(EXIT_PARSE, e),
        };
        for r in reports {
            if r.passed() {
                out += &format!("{n} {}: pass ({} cases)\n", r.axiom, r.cases);
            } else {
                failed = true;
                let f = &r.failures[0];
                out += &format!(
                    "{n} {}: FAIL ({} of {} cases; seed {} slots {} deviation {})\n",
                    r.axiom,
                    r.failures.len(),
                    r.cases,
                    f.seed,
                    f.slots,
                    fmt_float(f.deviation)
                );
            }
            if let Some(note) = r.note {
                out += &format!("  note: {note}\n");
            }
        }
    }
    let mut o = Outcome::ok(out);
    if failed {
        o.code = EXIT_FAIL;
    }
    o
}

fn run_map<M>(m: &M, doc: &Value, trials: usize, seed: u64, tol: f64) -> Outcome
where
    M: TensorMapping,
    M::Source: FileType,
    M::Target: FileType,
{
    let (s, t) = (m.source(), m.target());
    let net = match parse_network(s, doc) {
        Ok(n) => n,
        Err(e) => return Outcome::err(EXIT_PARSE, e),
    };
    if let Err(o) = check(&net, s) {
        return o;
    }
    let mapped = evaluate_with(&net, s, &OrderHint::Greedy).and_then(|r| m.map_tensor(&r));
    let mapped = match mapped {
        Ok(r) => r,
        Err(e) => return Outcome::err(EXIT_EVAL, format!("evaluation failed: {e}")),
    };
    let rep = match verify_mapping_commutes(m, &net, trials, seed, tol) {
        Ok(r) => r,
        Err(e) => return Outcome::err(EXIT_EVAL, format!("evaluation failed: {e}")),
    };
    let verdict = if rep.passed { "commutes" } else { "DOES NOT COMMUTE" };
    let out = format!(
        "{}\n{}\n{verdict}: max deviation {} over {} orders\n",
        write_slots(t, &t.slots(&mapped)),
        t.write_tensor(&mapped),
        fmt_float(rep.max_deviation),
        rep.trials
    );
    Outcome { code: if rep.passed { 0 } else { EXIT_FAIL }, stdout: out, stderr: String::new() }
}

fn map_file(file: &PathBuf, mapping: &str, trials: usize, seed: u64, tol: f64) -> Outcome {
    let doc = match load(file) {
        Ok(d) => d,
        Err(o) => return o,
    };
    map_doc(&doc, mapping, trials, seed, tol)
}

fn expect_type(ty: &str, want: &str, mapping: &str) -> Result<(), Outcome> {
    if ty == want {
        Ok(())
    } else {
        Err(Outcome::err(EXIT_PARSE, format!("mapping `{mapping}` needs a `{want}` network, found `{ty}`")))
    }
}

/// Applies a named mapping to a parsed network document.
pub fn map_doc(doc: &Value, mapping: &str, trials: usize, seed: u64, tol: f64) -> Outcome {
    match map_doc_inner(doc, mapping, trials, seed, tol) {
        Ok(o) | Err(o) => o,
    }
}

fn map_doc_inner(doc: &Value, mapping: &str, trials: usize, seed: u64, tol: f64) -> Result<Outcome, Outcome> {
    let bad = |e: String| Outcome::err(EXIT_PARSE, e);
    let (ty, ring, params) = header(doc).map_err(bad)?;
    if let Some(h) = mapping.strip_prefix("entrywise:") {
        let hom = HomName::parse(h).map_err(|e| bad(e.to_string()))?;
        expect_type(&ty, "array", mapping)?;
        if ring != hom.source_ring() {
            return Err(bad(format!("`{}` acts on ring `{}`, network ring is `{ring}`", hom.name(), hom.source_ring())));
        }
        return Ok(match hom {
            HomName::ComplexConjugate => run_map(&EntrywiseArray::new(ComplexConjugate), doc, trials, seed, tol),
            HomName::EmbedRealInComplex => run_map(&EntrywiseArray::new(EmbedRealInComplex), doc, trials, seed, tol),
            HomName::EmbedNonNegInReal => run_map(&EntrywiseArray::new(EmbedNonNegInReal), doc, trials, seed, tol),
            HomName::ModReduce(n) => {
                let m = IntMod::new(n).map_err(|e| bad(e.to_string()))?;
                run_map(&EntrywiseArray::new(ModReduce(m)), doc, trials, seed, tol)
            }
        });
    }
    if mapping != "pairing2array" && ring != "f64" {
        return Err(bad(format!("mapping `{mapping}` supports ring f64 only")));
    }
    let err = |e: tensor_types::Error| bad(format!("mapping `{mapping}`: {e}"));
    match mapping {
        "pairing2array" => {
            expect_type(&ty, "pairing", mapping)?;
            Ok(run_map(&PairingToArray::new(), doc, trials, seed, tol))
        }
        "det" => {
            expect_type(&ty, "schur-rect", mapping)?;
            let m = DeterminantMapping::new(rect_type(Real64, &params).map_err(bad)?).map_err(err)?;
            Ok(run_map(&m, doc, trials, seed, tol))
        }
        "pfaffian" => {
            expect_type(&ty, "schur-square", mapping)?;
            let m = PfaffianMapping::new(square_type(Real64, &params).map_err(bad)?).map_err(err)?;
            Ok(run_map(&m, doc, trials, seed, tol))
        }
        "antisym" => {
            expect_type(&ty, "schur-rect", mapping)?;
            let src: SchurRect<Real64> = rect_type(Real64, &params).map_err(bad)?;
            let mode = match src.prefactor_mode {
                PrefactorMode::Det => PrefactorMode::Pfaffian,
                m => m,
            };
            let target = SchurSquare::new(Real64, [[0.0, src.u0], [src.u1, 0.0]], Symmetry::Anti, mode).map_err(err)?;
            let m = Antisymmetrization::new(src, target).map_err(err)?;
            Ok(run_map(&m, doc, trials, seed, tol))
        }
        "inoutpair" => {
            expect_type(&ty, "schur-square", mapping)?;
            let src: SchurSquare<Real64> = square_type(Real64, &params).map_err(bad)?;
            let target = SchurRect::new(Real64, src.u[0][1], src.u[1][0], src.prefactor_mode).map_err(err)?;
            let m = InOutPair::new(src, target).map_err(err)?;
            Ok(run_map(&m, doc, trials, seed, tol))
        }
        _ => Err(bad(format!("unknown mapping `{mapping}`"))),
    }
}

fn sign_label(bit: usize) -> &'static str {
    if bit == 0 {
        "+1"
    } else {
        "-1"
    }
}

fn ising(width: usize, height: usize, beta: f64, periodic: bool, observe: &[usize]) -> Outcome {
    let z = match demos::ising_partition(width, height, beta, periodic, observe) {
        Ok(z) => z,
        Err(e) => return Outcome::err(EXIT_PARSE, e),
    };
    let total: f64 = z.iter().sum();
    let mut out = format!("Z = {}\n", fmt_float(total));
    if !observe.is_empty() {
        let dims = vec![2; observe.len()];
        let mut k = 0;
        tensor_types::tensor::for_each_config(&dims, |cfg| {
            let spins: Vec<String> = observe.iter().zip(cfg).map(|(s, &b)| format!("s{s}={}", sign_label(b))).collect();
            out += &format!("P({}) = {}\n", spins.join(", "), fmt_float(z[k] / total));
            k += 1;
        });
    }
    Outcome::ok(out)
}

fn dimer(width: usize, height: usize, full: bool) -> Outcome {
    let a = match demos::dimer_feasibility(width, height) {
        Ok(a) => a,
        Err(e) => return Outcome::err(EXIT_PARSE, e),
    };
    let feasible = a.entries().iter().filter(|&&x| x).count();
    let mut out = format!(
        "boundary edges: {}\nfeasible patterns: {} of {}\nall-uncovered: {}\n",
        a.shape().len(),
        feasible,
        a.entries().len(),
        u8::from(a.entries()[0])
    );
    if full {
        out += &ArrayType::new(Boolean).write_tensor(&a);
        out += "\n";
    }
    Outcome::ok(out)
}

fn freefermion(modes: usize, seed: u64) -> Outcome {
    let r = match demos::free_fermion(modes, seed) {
        Ok(r) => r,
        Err(e) => return Outcome::err(EXIT_PARSE, e),
    };
    let out = format!(
        "modes: {}\nsingle-atom max error: {}\ntwo-atom chain max deviation: {}\n{}\n",
        r.modes,
        fmt_float(r.single_max_error),
        fmt_float(r.chain_deviation),
        if r.passed { "pass" } else { "FAIL" }
    );
    Outcome { code: if r.passed { 0 } else { EXIT_FAIL }, stdout: out, stderr: String::new() }
}
