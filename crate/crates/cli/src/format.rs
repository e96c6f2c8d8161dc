//! JSON network files: parsing, type dispatch and payload literals.

use serde_json::{Map, Value};
use tensor_types::array::{Array, ArrayType};
use tensor_types::graded::{GradedIndex, GradedType};
use tensor_types::linalg::Matrix;
use tensor_types::network::{Network, NetworkOf, Receptor};
use tensor_types::pairing::{Pairing, PairingType};
use tensor_types::scalars::{Boolean, Complex, Field, IntMod, Integer, NonNeg, NonNegReal, Real64, Semiring};
use tensor_types::schur::{u_i_sigma_y, u_sigma_x, PrefactorMode, RectModes, SchurRect, SchurSquare, Symmetry};
use tensor_types::{Complex64, TensorType};

/// Rounds to 12 significant digits and prints the shortest literal.
pub fn fmt_float(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let r = if r == 0.0 { 0.0 } else { r };
    format!("{r:?}")
}

fn join(items: impl Iterator<Item = String>) -> String {
    format!("[{}]", items.collect::<Vec<_>>().join(", "))
}

fn as_f64(v: &Value) -> Result<f64, String> {
    v.as_f64().ok_or_else(|| format!("expected a number, found {v}"))
}

fn as_usize(v: &Value) -> Result<usize, String> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| format!("expected a non-negative integer, found {v}"))
}

fn as_list(v: &Value) -> Result<&Vec<Value>, String> {
    v.as_array().ok_or_else(|| format!("expected a list, found {v}"))
}

/// Scalar literals for a ring.
pub trait RingLit: Semiring {
    fn parse_elem(&self, v: &Value) -> Result<Self::Elem, String>;
    fn write_elem(&self, e: Self::Elem) -> String;
}

impl RingLit for Real64 {
    fn parse_elem(&self, v: &Value) -> Result<f64, String> {
        as_f64(v)
    }
    fn write_elem(&self, e: f64) -> String {
        fmt_float(e)
    }
}

impl RingLit for Complex {
    fn parse_elem(&self, v: &Value) -> Result<Complex64, String> {
        match v {
            Value::Array(p) if p.len() == 2 => Ok(Complex64::new(as_f64(&p[0])?, as_f64(&p[1])?)),
            Value::Number(_) => Ok(Complex64::new(as_f64(v)?, 0.0)),
            _ => Err(format!("expected [re, im], found {v}")),
        }
    }
    fn write_elem(&self, e: Complex64) -> String {
        format!("[{}, {}]", fmt_float(e.re), fmt_float(e.im))
    }
}

impl RingLit for Boolean {
    fn parse_elem(&self, v: &Value) -> Result<bool, String> {
        match v {
            Value::Bool(b) => Ok(*b),
            _ => match v.as_u64() {
                Some(0) => Ok(false),
                Some(1) => Ok(true),
                _ => Err(format!("expected 0 or 1, found {v}")),
            },
        }
    }
    fn write_elem(&self, e: bool) -> String {
        u8::from(e).to_string()
    }
}

impl RingLit for IntMod {
    fn parse_elem(&self, v: &Value) -> Result<u64, String> {
        match v.as_u64() {
            Some(x) if x < self.modulus() => Ok(x),
            _ => Err(format!("expected an integer below {}, found {v}", self.modulus())),
        }
    }
    fn write_elem(&self, e: u64) -> String {
        e.to_string()
    }
}

impl RingLit for NonNegReal {
    fn parse_elem(&self, v: &Value) -> Result<NonNeg, String> {
        NonNeg::new(as_f64(v)?).map_err(|e| e.to_string())
    }
    fn write_elem(&self, e: NonNeg) -> String {
        fmt_float(e.get())
    }
}

impl RingLit for Integer {
    fn parse_elem(&self, v: &Value) -> Result<i64, String> {
        v.as_i64().ok_or_else(|| format!("expected an integer, found {v}"))
    }
    fn write_elem(&self, e: i64) -> String {
        e.to_string()
    }
}

/// Tensor types that have a file representation.
pub trait FileType: TensorType {
    fn parse_index(&self, v: &Value) -> Result<Self::Index, String>;
    fn parse_tensor(&self, slots: Vec<Self::Index>, data: &Value) -> Result<Self::Tensor, String>;
    fn write_index(&self, i: &Self::Index) -> String;
    fn write_tensor(&self, t: &Self::Tensor) -> String;
}

impl<R: RingLit> FileType for ArrayType<R> {
    fn parse_index(&self, v: &Value) -> Result<usize, String> {
        as_usize(v)
    }
    fn parse_tensor(&self, slots: Vec<usize>, data: &Value) -> Result<Array<R::Elem>, String> {
        let ring = &self.ring;
        let entries = as_list(data)?.iter().map(|x| ring.parse_elem(x)).collect::<Result<Vec<_>, _>>()?;
        Array::new(slots, entries).map_err(|e| e.to_string())
    }
    fn write_index(&self, i: &usize) -> String {
        i.to_string()
    }
    fn write_tensor(&self, t: &Array<R::Elem>) -> String {
        let ring = &self.ring;
        join(t.entries().iter().map(|&e| ring.write_elem(e)))
    }
}

impl<F: Field + RingLit> FileType for GradedType<F> {
    fn parse_index(&self, v: &Value) -> Result<GradedIndex, String> {
        let (grades, dual) = match v {
            Value::Object(o) => {
                let g = o.get("grades").or_else(|| o.get("parities")).ok_or("graded index object needs \"grades\"")?;
                (g, o.get("dual").and_then(Value::as_bool).unwrap_or(false))
            }
            _ => (v, false),
        };
        let grades = as_list(grades)?
            .iter()
            .map(|g| g.as_i64().map(|x| x as i32).ok_or_else(|| format!("expected an integer grade, found {g}")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GradedIndex { grades, dual })
    }
    fn parse_tensor(&self, slots: Vec<GradedIndex>, data: &Value) -> Result<Self::Tensor, String> {
        let ring = &self.ring;
        let entries = as_list(data)?.iter().map(|x| ring.parse_elem(x)).collect::<Result<Vec<_>, _>>()?;
        self.tensor(slots, entries).map_err(|e| e.to_string())
    }
    fn write_index(&self, i: &GradedIndex) -> String {
        let g = join(i.grades.iter().map(|x| x.to_string()));
        if i.dual {
            format!("{{\"grades\": {g}, \"dual\": true}}")
        } else {
            g
        }
    }
    fn write_tensor(&self, t: &Self::Tensor) -> String {
        let ring = &self.ring;
        join(t.entries().iter().map(|&e| ring.write_elem(e)))
    }
}

fn prefactor_of<F: RingLit>(ring: &F, o: &Map<String, Value>) -> Result<F::Elem, String> {
    match o.get("prefactor") {
        Some(p) => ring.parse_elem(p),
        None => Ok(ring.one()),
    }
}

impl FileType for PairingType {
    fn parse_index(&self, v: &Value) -> Result<usize, String> {
        as_usize(v)
    }
    fn parse_tensor(&self, slots: Vec<usize>, data: &Value) -> Result<Pairing, String> {
        let o = data.as_object().ok_or("pairing payload must be an object")?;
        let pairs = match o.get("pairs") {
            Some(p) => as_list(p)?
                .iter()
                .map(|q| match q.as_array().map(Vec::as_slice) {
                    Some([a, b]) => Ok((as_usize(a)?, as_usize(b)?)),
                    _ => Err(format!("expected a dot pair [d1, d2], found {q}")),
                })
                .collect::<Result<Vec<_>, _>>()?,
            None => Vec::new(),
        };
        Pairing::new(slots, pairs, prefactor_of(&Real64, o)?).map_err(|e| e.to_string())
    }
    fn write_index(&self, i: &usize) -> String {
        i.to_string()
    }
    fn write_tensor(&self, t: &Pairing) -> String {
        let pairs = join(t.pairs().iter().map(|(a, b)| format!("[{a}, {b}]")));
        format!("{{\"pairs\": {pairs}, \"prefactor\": {}}}", fmt_float(t.prefactor()))
    }
}

fn parse_matrix<F: RingLit>(ring: &F, o: &Map<String, Value>, rows: usize, cols: usize) -> Result<Matrix<F::Elem>, String> {
    let lit = o.get("matrix").ok_or("Schur payload needs \"matrix\"")?;
    let r = as_list(lit)?
        .iter()
        .map(|row| as_list(row)?.iter().map(|x| ring.parse_elem(x)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    if r.len() != rows || r.iter().any(|x| x.len() != cols) {
        return Err(format!("matrix must be {rows}x{cols} for these slots"));
    }
    if rows == 0 {
        return Matrix::from_vec(0, cols, Vec::new()).map_err(|e| e.to_string());
    }
    Matrix::from_rows(&r, cols).map_err(|e| e.to_string())
}

fn write_matrix<F: RingLit>(ring: &F, m: &Matrix<F::Elem>, prefactor: F::Elem) -> String {
    let rows = join((0..m.rows()).map(|r| join((0..m.cols()).map(|c| ring.write_elem(m.get(r, c))))));
    format!("{{\"matrix\": {rows}, \"prefactor\": {}}}", ring.write_elem(prefactor))
}

impl<F: Field + RingLit> FileType for SchurRect<F> {
    fn parse_index(&self, v: &Value) -> Result<RectModes, String> {
        match v.as_array().map(Vec::as_slice) {
            Some([a, b]) => Ok(RectModes::new(as_usize(a)?, as_usize(b)?)),
            _ => Err(format!("expected [n_in, n_out], found {v}")),
        }
    }
    fn parse_tensor(&self, slots: Vec<RectModes>, data: &Value) -> Result<Self::Tensor, String> {
        let o = data.as_object().ok_or("Schur payload must be an object")?;
        let ring = &self.ring;
        let rows = slots.iter().map(|s| s.n_in).sum();
        let cols = slots.iter().map(|s| s.n_out).sum();
        let m = parse_matrix(ring, o, rows, cols)?;
        self.tensor(slots, m, prefactor_of(ring, o)?).map_err(|e| e.to_string())
    }
    fn write_index(&self, i: &RectModes) -> String {
        format!("[{}, {}]", i.n_in, i.n_out)
    }
    fn write_tensor(&self, t: &Self::Tensor) -> String {
        write_matrix(&self.ring, t.matrix(), t.prefactor())
    }
}

impl<F: Field + RingLit> FileType for SchurSquare<F> {
    fn parse_index(&self, v: &Value) -> Result<usize, String> {
        as_usize(v)
    }
    fn parse_tensor(&self, slots: Vec<usize>, data: &Value) -> Result<Self::Tensor, String> {
        let o = data.as_object().ok_or("Schur payload must be an object")?;
        let ring = &self.ring;
        let n = slots.iter().sum();
        let m = parse_matrix(ring, o, n, n)?;
        self.tensor(slots, m, prefactor_of(ring, o)?).map_err(|e| e.to_string())
    }
    fn write_index(&self, i: &usize) -> String {
        i.to_string()
    }
    fn write_tensor(&self, t: &Self::Tensor) -> String {
        write_matrix(&self.ring, t.matrix(), t.prefactor())
    }
}

/// Slot list literal, e.g. `[3, 3]`.
pub fn write_slots<T: FileType>(t: &T, slots: &[T::Index]) -> String {
    join(slots.iter().map(|s| t.write_index(s)))
}

fn receptor(v: &Value) -> Result<(usize, usize), String> {
    match v.as_array().map(Vec::as_slice) {
        Some([a, s]) => Ok((as_usize(a)?, as_usize(s)?)),
        _ => Err(format!("expected a receptor [atom, slot], found {v}")),
    }
}

fn list_field<'a>(doc: &'a Value, key: &str) -> Result<&'a [Value], String> {
    match doc.get(key) {
        None | Some(Value::Null) => Ok(&[]),
        Some(v) => as_list(v).map(Vec::as_slice).map_err(|e| format!("\"{key}\": {e}")),
    }
}

/// Builds the network of a parsed document in type `t`.
pub fn parse_network<T: FileType>(t: &T, doc: &Value) -> Result<NetworkOf<T>, String> {
    let mut net: NetworkOf<T> = Network::new();
    if let Some(ts) = doc.get("tensors") {
        let ts = ts.as_object().ok_or("\"tensors\" must be an object")?;
        for (name, body) in ts {
            let slots = body
                .get("slots")
                .map(|s| as_list(s)?.iter().map(|x| t.parse_index(x)).collect::<Result<Vec<_>, _>>())
                .transpose()
                .map_err(|e| format!("tensor `{name}`: {e}"))?
                .unwrap_or_default();
            let data = body.get("data").ok_or_else(|| format!("tensor `{name}`: missing \"data\""))?;
            let p = t.parse_tensor(slots, data).map_err(|e| format!("tensor `{name}`: {e}"))?;
            net.add_tensor(name, p);
        }
    }
    for (k, a) in list_field(doc, "atoms")?.iter().enumerate() {
        let name = a.as_str().ok_or_else(|| format!("atom {k}: expected a tensor name, found {a}"))?;
        net.add_atom(name);
    }
    for (k, b) in list_field(doc, "bonds")?.iter().enumerate() {
        match b.as_array().map(Vec::as_slice) {
            Some([x, y]) => {
                let tail = receptor(x).map_err(|e| format!("bond {k}: {e}"))?;
                let head = receptor(y).map_err(|e| format!("bond {k}: {e}"))?;
                net.bond(tail, head);
            }
            _ => return Err(format!("bond {k}: expected [[atom, slot], [atom, slot]], found {b}")),
        }
    }
    for (k, r) in list_field(doc, "open")?.iter().enumerate() {
        let (a, s) = receptor(r).map_err(|e| format!("open {k}: {e}"))?;
        net.open.push(Receptor::new(a, s));
    }
    for (k, f) in list_field(doc, "free_bonds")?.iter().enumerate() {
        net.free_bonds.push(t.parse_index(f).map_err(|e| format!("free bond {k}: {e}"))?);
    }
    for (k, l) in list_field(doc, "loops")?.iter().enumerate() {
        net.loops.push(t.parse_index(l).map_err(|e| format!("loop {k}: {e}"))?);
    }
    Ok(net)
}

/// Optional `"order"` field: bond indices for `--order given`.
pub fn given_order(doc: &Value) -> Result<Option<Vec<usize>>, String> {
    match doc.get("order") {
        None | Some(Value::Null) => Ok(None),
        Some(v) => as_list(v)?.iter().map(as_usize).collect::<Result<Vec<_>, _>>().map(Some),
    }
}

/// Receives the concrete type named by a document or type name.
pub trait Visitor {
    type Out;
    fn visit<T: FileType>(self, t: T) -> Self::Out;
}

fn param<'a>(params: &'a Value, key: &str) -> Option<&'a Value> {
    params.get(key).filter(|v| !v.is_null())
}

fn prefactor_mode(params: &Value) -> Result<PrefactorMode, String> {
    match param(params, "prefactor").map(|v| v.as_str().unwrap_or("")) {
        None | Some("none") => Ok(PrefactorMode::None),
        Some("det") => Ok(PrefactorMode::Det),
        Some("pfaffian") => Ok(PrefactorMode::Pfaffian),
        Some(_) => Err("params.prefactor must be \"none\", \"det\" or \"pfaffian\"".into()),
    }
}

/// Rectangular Schur type from `params.u = [u0, u1]` and `params.prefactor`.
pub fn rect_type<F: Field + RingLit>(ring: F, params: &Value) -> Result<SchurRect<F>, String> {
    let (u0, u1) = match param(params, "u").and_then(Value::as_array).map(Vec::as_slice) {
        Some([a, b]) => (ring.parse_elem(a)?, ring.parse_elem(b)?),
        None => (ring.one(), ring.one()),
        _ => return Err("params.u must be [u0, u1]".into()),
    };
    SchurRect::new(ring, u0, u1, prefactor_mode(params)?).map_err(|e| e.to_string())
}

/// Square Schur type from `params.u` ("sx", "isy" or a 2x2 list),
/// `params.symmetry` and `params.prefactor`.
pub fn square_type<F: Field + RingLit>(ring: F, params: &Value) -> Result<SchurSquare<F>, String> {
    let u = match param(params, "u") {
        None => u_sigma_x(&ring),
        Some(Value::String(s)) if s == "sx" => u_sigma_x(&ring),
        Some(Value::String(s)) if s == "isy" => u_i_sigma_y(&ring),
        Some(Value::Array(rows)) if rows.len() == 2 => {
            let mut u = [[ring.zero_elem(); 2]; 2];
            for (r, row) in rows.iter().enumerate() {
                match row.as_array().map(Vec::as_slice) {
                    Some([a, b]) => u[r] = [ring.parse_elem(a)?, ring.parse_elem(b)?],
                    _ => return Err("params.u rows must have two entries".into()),
                }
            }
            u
        }
        Some(v) => return Err(format!("params.u: expected \"sx\", \"isy\" or a 2x2 list, found {v}")),
    };
    let sym = match param(params, "symmetry").map(|v| v.as_str().unwrap_or("")) {
        None | Some("none") => Symmetry::None,
        Some("sym") => Symmetry::Sym,
        Some("anti") => Symmetry::Anti,
        Some(_) => return Err("params.symmetry must be \"none\", \"sym\" or \"anti\"".into()),
    };
    SchurSquare::new(ring, u, sym, prefactor_mode(params)?).map_err(|e| e.to_string())
}

fn graded_type<F: Field>(ring: F, params: &Value) -> Result<GradedType<F>, String> {
    match param(params, "grading").map(|v| v.as_str().unwrap_or("")) {
        None | Some("z2") => Ok(GradedType::z2(ring)),
        Some("z") => Ok(GradedType::z(ring)),
        Some(_) => Err("params.grading must be \"z2\" or \"z\"".into()),
    }
}

/// Instantiates the type described by `type`, `ring` and `params`.
pub fn dispatch<V: Visitor>(ty: &str, ring: &str, params: &Value, v: V) -> Result<V::Out, String> {
    let unsupported = || format!("ring `{ring}` is not supported for type `{ty}`");
    match ty {
        "array" => match ring {
            "f64" => Ok(v.visit(ArrayType::new(Real64))),
            "c64" => Ok(v.visit(ArrayType::new(Complex))),
            "bool" => Ok(v.visit(ArrayType::new(Boolean))),
            "nonneg" => Ok(v.visit(ArrayType::new(NonNegReal))),
            "int" => Ok(v.visit(ArrayType::new(Integer))),
            _ => {
                let n = ring
                    .strip_prefix("zmod:")
                    .and_then(|n| n.parse::<u64>().ok())
                    .ok_or_else(|| format!("unknown ring `{ring}`"))?;
                Ok(v.visit(ArrayType::new(IntMod::new(n).map_err(|e| e.to_string())?)))
            }
        },
        "graded" => match ring {
            "f64" => Ok(v.visit(graded_type(Real64, params)?)),
            "c64" => Ok(v.visit(graded_type(Complex, params)?)),
            _ => Err(unsupported()),
        },
        "pairing" => Ok(v.visit(PairingType)),
        "schur-rect" => match ring {
            "f64" => Ok(v.visit(rect_type(Real64, params)?)),
            "c64" => Ok(v.visit(rect_type(Complex, params)?)),
            _ => Err(unsupported()),
        },
        "schur-square" => match ring {
            "f64" => Ok(v.visit(square_type(Real64, params)?)),
            "c64" => Ok(v.visit(square_type(Complex, params)?)),
            _ => Err(unsupported()),
        },
        _ => Err(format!("unknown tensor type `{ty}`")),
    }
}

/// `type`, `ring` (default "f64") and `params` (default `{}`) of a document.
pub fn header(doc: &Value) -> Result<(String, String, Value), String> {
    let ty = doc.get("type").and_then(Value::as_str).ok_or("missing \"type\"")?;
    let ring = match doc.get("ring") {
        None => "f64",
        Some(r) => r.as_str().ok_or("\"ring\" must be a string")?,
    };
    let params = doc.get("params").cloned().unwrap_or(Value::Object(Map::new()));
    Ok((ty.to_string(), ring.to_string(), params))
}
