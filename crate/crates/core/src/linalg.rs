//! Small dense matrices over a field: LU, determinants, inverses, Schur
//! complements and Pfaffians.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::scalars::Field;

/// Relative pivot threshold below which a block is reported singular.
pub const SINGULAR_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Copy> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Result<Self, Error> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<E>], cols: usize) -> Result<Self, Error> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::ShapeMismatch(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[E] {
        &self.data
    }
    pub fn get(&self, i: usize, j: usize) -> E {
        self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Rows and columns picked by index lists, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    pub fn block(&self, r0: usize, nr: usize, c0: usize, nc: usize) -> Self {
        Matrix::from_fn(nr, nc, |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn map<F: Copy>(&self, f: impl Fn(E) -> F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }
}

impl<E: Copy> Matrix<E> {
    pub fn zeros<K: Field<Elem = E>>(k: &K, rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, k.zero_elem())
    }

    pub fn identity<K: Field<Elem = E>>(k: &K, n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { k.one() } else { k.zero_elem() })
    }

    pub fn direct_sum<K: Field<Elem = E>>(k: &K, a: &Self, b: &Self) -> Self {
        Matrix::from_fn(a.rows + b.rows, a.cols + b.cols, |i, j| {
            if i < a.rows && j < a.cols {
                a.get(i, j)
            } else if i >= a.rows && j >= a.cols {
                b.get(i - a.rows, j - a.cols)
            } else {
                k.zero_elem()
            }
        })
    }

    pub fn mul<K: Field<Elem = E>>(k: &K, a: &Self, b: &Self) -> Result<Self, Error> {
        if a.cols != b.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                a.rows, a.cols, b.rows, b.cols
            )));
        }
        Ok(Matrix::from_fn(a.rows, b.cols, |i, j| {
            let mut s = k.zero_elem();
            for l in 0..a.cols {
                s = k.add(s, k.mul(a.get(i, l), b.get(l, j)));
            }
            s
        }))
    }

    pub fn sub<K: Field<Elem = E>>(k: &K, a: &Self, b: &Self) -> Self {
        Matrix::from_fn(a.rows, a.cols, |i, j| k.sub(a.get(i, j), b.get(i, j)))
    }

    pub fn scale<K: Field<Elem = E>>(&self, k: &K, s: E) -> Self {
        self.map(|x| k.mul(s, x))
    }

    /// Largest entrywise modulus difference, relative to `self` where its
    /// entries exceed one.
    pub fn deviation<K: Field<Elem = E>>(&self, k: &K, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| k.deviation(a, b))
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric<K: Field<Elem = E>>(&self, k: &K, tol: f64) -> bool {
        self.rows == self.cols && self.deviation(k, &self.transpose()) <= tol
    }

    pub fn is_antisymmetric<K: Field<Elem = E>>(&self, k: &K, tol: f64) -> bool {
        self.rows == self.cols && self.deviation(k, &self.transpose().map(|x| k.negate(x))) <= tol
    }
}

/// LU decomposition with partial pivoting, `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu<E> {
    lu: Matrix<E>,
    perm: Vec<usize>,
    swaps: usize,
}

pub fn lu<K: Field>(k: &K, a: &Matrix<K::Elem>) -> Result<Lu<K::Elem>, Error> {
    if a.rows != a.cols {
        return Err(Error::ShapeMismatch(format!("LU of a non-square {}x{} matrix", a.rows, a.cols)));
    }
    let n = a.rows;
    let scale = (0..n)
        .map(|i| a.row(i).iter().map(|&x| k.modulus(x)).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    let threshold = SINGULAR_TOL * if scale > 0.0 { scale } else { 1.0 };
    let mut m = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut swaps = 0;
    for c in 0..n {
        let (p, pmag) = (c..n)
            .map(|r| (r, k.modulus(m.get(r, c))))
            .fold((c, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pmag < threshold {
            return Err(Error::SingularBlock { pivot: pmag, threshold });
        }
        if p != c {
            for j in 0..n {
                let t = m.get(c, j);
                m.set(c, j, m.get(p, j));
                m.set(p, j, t);
            }
            perm.swap(c, p);
            swaps += 1;
        }
        let inv = k.inv(m.get(c, c)).expect("nonzero pivot");
        for r in c + 1..n {
            let f = k.mul(m.get(r, c), inv);
            m.set(r, c, f);
            for j in c + 1..n {
                let v = k.sub(m.get(r, j), k.mul(f, m.get(c, j)));
                m.set(r, j, v);
            }
        }
    }
    Ok(Lu { lu: m, perm, swaps })
}

impl<E: Copy> Lu<E> {
    pub fn det<K: Field<Elem = E>>(&self, k: &K) -> E {
        let mut d = k.one();
        for i in 0..self.lu.rows {
            d = k.mul(d, self.lu.get(i, i));
        }
        if self.swaps % 2 == 1 {
            k.negate(d)
        } else {
            d
        }
    }

    /// Solves `A X = B`.
    pub fn solve<K: Field<Elem = E>>(&self, k: &K, b: &Matrix<E>) -> Matrix<E> {
        let n = self.lu.rows;
        let mut x = Matrix::from_fn(n, b.cols, |i, j| b.get(self.perm[i], j));
        for j in 0..b.cols {
            for i in 0..n {
                let mut s = x.get(i, j);
                for l in 0..i {
                    s = k.sub(s, k.mul(self.lu.get(i, l), x.get(l, j)));
                }
                x.set(i, j, s);
            }
            for i in (0..n).rev() {
                let mut s = x.get(i, j);
                for l in i + 1..n {
                    s = k.sub(s, k.mul(self.lu.get(i, l), x.get(l, j)));
                }
                x.set(i, j, k.div(s, self.lu.get(i, i)).expect("nonzero pivot"));
            }
        }
        x
    }
}

/// Determinant; singular matrices give zero rather than an error.
pub fn det<K: Field>(k: &K, a: &Matrix<K::Elem>) -> Result<K::Elem, Error> {
    if a.rows != a.cols {
        return Err(Error::ShapeMismatch(format!("determinant of a {}x{} matrix", a.rows, a.cols)));
    }
    match lu(k, a) {
        Ok(f) => Ok(f.det(k)),
        Err(Error::SingularBlock { .. }) => Ok(k.zero_elem()),
        Err(e) => Err(e),
    }
}

pub fn inverse<K: Field>(k: &K, a: &Matrix<K::Elem>) -> Result<Matrix<K::Elem>, Error> {
    let f = lu(k, a)?;
    Ok(f.solve(k, &Matrix::identity(k, a.rows)))
}

/// Schur complement `W - X Z^{-1} Y` of the partition where `Z` is the
/// trailing `(rows - keep_rows) x (cols - keep_cols)` block. Returns the
/// complement together with `det(Z)`.
pub fn schur_complement<K: Field>(
    k: &K,
    m: &Matrix<K::Elem>,
    keep_rows: usize,
    keep_cols: usize,
) -> Result<(Matrix<K::Elem>, K::Elem), Error> {
    if keep_rows > m.rows || keep_cols > m.cols || m.rows - keep_rows != m.cols - keep_cols {
        return Err(Error::ShapeMismatch(format!(
            "cannot eliminate a non-square block from {}x{} keeping {keep_rows}x{keep_cols}",
            m.rows, m.cols
        )));
    }
    let z_n = m.rows - keep_rows;
    let w = m.block(0, keep_rows, 0, keep_cols);
    if z_n == 0 {
        return Ok((w, k.one()));
    }
    let x = m.block(0, keep_rows, keep_cols, z_n);
    let y = m.block(keep_rows, z_n, 0, keep_cols);
    let z = m.block(keep_rows, z_n, keep_cols, z_n);
    let f = lu(k, &z)?;
    let zy = f.solve(k, &y);
    let xzy = Matrix::mul(k, &x, &zy)?;
    Ok((Matrix::sub(k, &w, &xzy), f.det(k)))
}

/// Pfaffian of an antisymmetric matrix via Parlett-Reid tridiagonalization
/// with pivoting.
pub fn pfaffian<K: Field>(k: &K, a: &Matrix<K::Elem>, tol: f64) -> Result<K::Elem, Error> {
    if !a.is_antisymmetric(k, tol) {
        return Err(Error::SymmetryViolation("pfaffian of a non-antisymmetric matrix".into()));
    }
    let n = a.rows;
    if n % 2 == 1 {
        return Ok(k.zero_elem());
    }
    let mut m = a.clone();
    let mut pf = k.one();
    let mut c = 0;
    while c + 1 < n {
        // Pivot the largest entry of column c below the diagonal into row c+1.
        let (p, pmag) = (c + 1..n)
            .map(|r| (r, k.modulus(m.get(r, c))))
            .fold((c + 1, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if p != c + 1 {
            swap_sym(&mut m, c + 1, p);
            pf = k.negate(pf);
        }
        if pmag == 0.0 {
            return Ok(k.zero_elem());
        }
        let piv = m.get(c, c + 1);
        pf = k.mul(pf, piv);
        let ipiv = k.inv(m.get(c + 1, c)).expect("nonzero pivot");
        // Eliminate rows/columns c+2.. using row/column c+1 so that the
        // Pfaffian is unchanged.
        for r in c + 2..n {
            let f = k.mul(m.get(r, c), ipiv);
            if k.modulus(f) == 0.0 {
                continue;
            }
            for j in 0..n {
                let v = k.sub(m.get(r, j), k.mul(f, m.get(c + 1, j)));
                m.set(r, j, v);
            }
            for i in 0..n {
                let v = k.sub(m.get(i, r), k.mul(f, m.get(i, c + 1)));
                m.set(i, r, v);
            }
        }
        c += 2;
    }
    Ok(pf)
}

fn swap_sym<E: Copy>(m: &mut Matrix<E>, a: usize, b: usize) {
    let n = m.rows;
    for j in 0..n {
        let t = m.get(a, j);
        m.set(a, j, m.get(b, j));
        m.set(b, j, t);
    }
    for i in 0..n {
        let t = m.get(i, a);
        m.set(i, a, m.get(i, b));
        m.set(i, b, t);
    }
}

/// Pfaffian by expansion along the first row. Exponential; meant as a
/// cross-check for small matrices.
pub fn pfaffian_expansion<K: Field>(k: &K, a: &Matrix<K::Elem>) -> K::Elem {
    let idx: Vec<usize> = (0..a.rows).collect();
    pf_rec(k, a, &idx)
}

fn pf_rec<K: Field>(k: &K, a: &Matrix<K::Elem>, idx: &[usize]) -> K::Elem {
    if idx.is_empty() {
        return k.one();
    }
    if idx.len() % 2 == 1 {
        return k.zero_elem();
    }
    let mut s = k.zero_elem();
    for j in 1..idx.len() {
        let rest: Vec<usize> = idx[1..].iter().enumerate().filter(|&(p, _)| p + 1 != j).map(|(_, &v)| v).collect();
        let term = k.mul(a.get(idx[0], idx[j]), pf_rec(k, a, &rest));
        s = if j % 2 == 1 { k.add(s, term) } else { k.sub(s, term) };
    }
    s
}

/// Largest singular value by power iteration on `M^H M`.
pub fn operator_norm<K: Field>(k: &K, m: &Matrix<K::Elem>, iterations: usize) -> f64 {
    if m.rows == 0 || m.cols == 0 {
        return 0.0;
    }
    let mh = m.transpose().map(|x| k.conj(x));
    // A fixed, generic start vector keeps the result deterministic.
    let mut v: Vec<K::Elem> = (0..m.cols).map(|i| k.from_f64(1.0 + 0.1 * i as f64)).collect();
    let mut lambda = 0.0;
    for _ in 0..iterations {
        let mv: Vec<K::Elem> = (0..m.rows)
            .map(|i| (0..m.cols).fold(k.zero_elem(), |s, j| k.add(s, k.mul(m.get(i, j), v[j]))))
            .collect();
        let w: Vec<K::Elem> = (0..m.cols)
            .map(|i| (0..m.rows).fold(k.zero_elem(), |s, j| k.add(s, k.mul(mh.get(i, j), mv[j]))))
            .collect();
        let norm = libm::sqrt(w.iter().map(|&x| k.modulus(x) * k.modulus(x)).sum::<f64>());
        if norm == 0.0 {
            return 0.0;
        }
        let vnorm = libm::sqrt(v.iter().map(|&x| k.modulus(x) * k.modulus(x)).sum::<f64>());
        lambda = norm / vnorm;
        v = w.iter().map(|&x| k.mul(x, k.from_f64(1.0 / norm))).collect();
    }
    libm::sqrt(lambda)
}

/// True iff the largest singular value is below one, with the power
/// iteration settled to `tol`.
pub fn norm_constraint<K: Field>(k: &K, m: &Matrix<K::Elem>) -> bool {
    operator_norm(k, m, 200) < 1.0 - 1e-10
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Real64;

    #[test]
    fn det_and_inverse() {
        let a = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]], 2).unwrap();
        assert!((det(&Real64, &a).unwrap() - 5.0).abs() < 1e-14);
        let inv = inverse(&Real64, &a).unwrap();
        let p = Matrix::mul(&Real64, &a, &inv).unwrap();
        assert!(p.deviation(&Real64, &Matrix::identity(&Real64, 2)) < 1e-14);
    }

    #[test]
    fn singular_block_reported() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]], 2).unwrap();
        assert!(matches!(lu(&Real64, &a), Err(Error::SingularBlock { .. })));
        assert_eq!(det(&Real64, &a).unwrap(), 0.0);
    }

    #[test]
    fn schur_with_identity_block() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 1.0]], 2).unwrap();
        let (s, dz) = schur_complement(&Real64, &m, 1, 1).unwrap();
        assert_eq!(s.get(0, 0), 1.0 - 6.0);
        assert_eq!(dz, 1.0);
    }

    #[test]
    fn small_pfaffians() {
        let a = Matrix::from_rows(&[vec![0.0, 2.5], vec![-2.5, 0.0]], 2).unwrap();
        assert_eq!(pfaffian(&Real64, &a, 0.0).unwrap(), 2.5);
        let sym = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]], 2).unwrap();
        assert!(pfaffian(&Real64, &sym, 1e-12).is_err());
    }

    #[test]
    fn norms() {
        let h = Matrix::identity(&Real64, 3).scale(&Real64, 0.5);
        assert!(norm_constraint(&Real64, &h));
        assert!(!norm_constraint(&Real64, &Matrix::identity(&Real64, 3)));
    }
}
