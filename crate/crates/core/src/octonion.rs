//! Real octonion algebra via iterated Cayley-Dickson doubling, the
//! 7-dimensional cross product on the imaginary part, and the complexified
//! algebra.
//!
//! The basis is ordered `(1, i, j, k, l, il, jl, kl)` throughout; every
//! coefficient array, table and CSV column follows that order. Products of
//! basis elements are signed basis elements, so the whole algebra is driven
//! by one signed permutation table. The table is generated once by doubling
//! R -> C -> H -> O and cached; it is not recomputed per product.

use crate::error::{Error, Result};
use num_complex::Complex64;
use once_cell::sync::Lazy;

/// Dimension of the full algebra.
pub const DIM: usize = 8;
/// Dimension of the imaginary part.
pub const IM_DIM: usize = 7;

/// Basis symbols in table order.
pub const BASIS_SYMBOLS: [&str; DIM] = ["1", "i", "j", "k", "l", "il", "jl", "kl"];

/// Multiplication structure of an algebra whose basis products are signed
/// basis elements: `e_i * e_j = sign[i][j] * e_{idx[i][j]}`, together with a
/// diagonal conjugation `conj(e_i) = conj_sign[i] * e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MulTable {
    pub dim: usize,
    pub idx: Vec<Vec<usize>>,
    pub sign: Vec<Vec<i8>>,
    pub conj_sign: Vec<i8>,
}

impl MulTable {
    /// The ground field R: a single basis element 1 with 1*1 = 1.
    pub fn real() -> Self {
        MulTable {
            dim: 1,
            idx: vec![vec![0]],
            sign: vec![vec![1]],
            conj_sign: vec![1],
        }
    }
}

/// Cayley-Dickson doubling. Elements of the doubled algebra are pairs
/// `(a, b) = a + b e`; the product is
/// `(a, b)(c, d) = (a c - d conj(b), conj(a) d + c b)`
/// and the conjugation is `conj(a + b e) = conj(a) - b e`.
///
/// Basis index `i < dim` is `e_i` and `dim + i` is the product `e_i e`.
/// Since `e_i e = (0, conj(e_i))`, the table built in the raw pair basis
/// `(0, e_i)` is conjugated by the diagonal sign change `d_{dim+i} =
/// conj_sign[i]` before returning, so that iterated doubling reproduces the
/// basis `(1, i, j, k, l, il, jl, kl)` with `il = i l` and so on.
pub fn cd_double(t: &MulTable) -> MulTable {
    let d = t.dim;
    let n = 2 * d;
    let mut idx = vec![vec![0usize; n]; n];
    let mut sign = vec![vec![0i8; n]; n];
    for i in 0..d {
        for j in 0..d {
            // (e_i, 0)(e_j, 0) = (e_i e_j, 0)
            idx[i][j] = t.idx[i][j];
            sign[i][j] = t.sign[i][j];
            // (e_i, 0)(0, e_j) = (0, conj(e_i) e_j)
            idx[i][d + j] = d + t.idx[i][j];
            sign[i][d + j] = t.conj_sign[i] * t.sign[i][j];
            // (0, e_i)(e_j, 0) = (0, e_j e_i)
            idx[d + i][j] = d + t.idx[j][i];
            sign[d + i][j] = t.sign[j][i];
            // (0, e_i)(0, e_j) = (-e_j conj(e_i), 0)
            idx[d + i][d + j] = t.idx[j][i];
            sign[d + i][d + j] = -t.conj_sign[i] * t.sign[j][i];
        }
    }
    // change of basis (0, e_i) -> e_i e = conj_sign[i] (0, e_i)
    let mut diag = vec![1i8; n];
    for i in 0..d {
        diag[d + i] = t.conj_sign[i];
    }
    for a in 0..n {
        for b in 0..n {
            sign[a][b] *= diag[a] * diag[b] * diag[idx[a][b]];
        }
    }
    let mut conj_sign = vec![0i8; n];
    conj_sign[..d].copy_from_slice(&t.conj_sign);
    for s in conj_sign[d..].iter_mut() {
        *s = -1;
    }
    MulTable {
        dim: n,
        idx,
        sign,
        conj_sign,
    }
}

/// The octonion table, built once by doubling R three times.
pub static OCTONION_TABLE: Lazy<MulTable> =
    Lazy::new(|| cd_double(&cd_double(&cd_double(&MulTable::real()))));

/// Octonion with real coefficients against `(1, i, j, k, l, il, jl, kl)`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Octonion(pub [f64; DIM]);

/// Imaginary octonion: coefficients against `(i, j, k, l, il, jl, kl)`.
/// Identified with R^7; carries the 7-dimensional cross product.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ImOctonion(pub [f64; IM_DIM]);

/// Octonion with complex coefficients, same basis order. Complex
/// conjugation acts on the coefficients only and distributes over products;
/// it is distinct from the octonionic conjugation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexOctonion(pub [Complex64; DIM]);

impl Octonion {
    pub fn zero() -> Self {
        Octonion([0.0; DIM])
    }

    pub fn one() -> Self {
        let mut c = [0.0; DIM];
        c[0] = 1.0;
        Octonion(c)
    }

    /// Basis element by table index (0 = 1, 1 = i, ..., 7 = kl).
    pub fn basis(idx: usize) -> Self {
        let mut c = [0.0; DIM];
        c[idx] = 1.0;
        Octonion(c)
    }

    pub fn from_imaginary(x: ImOctonion) -> Self {
        let mut c = [0.0; DIM];
        c[1..].copy_from_slice(&x.0);
        Octonion(c)
    }

    pub fn real_part(&self) -> f64 {
        self.0[0]
    }

    pub fn imaginary_part(&self) -> ImOctonion {
        let mut c = [0.0; IM_DIM];
        c.copy_from_slice(&self.0[1..]);
        ImOctonion(c)
    }

    /// Octonionic conjugation: negates the imaginary coefficients.
    pub fn conj(&self) -> Self {
        let mut c = self.0;
        for v in c[1..].iter_mut() {
            *v = -*v;
        }
        Octonion(c)
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = self.0;
        for v in out.iter_mut() {
            *v *= c;
        }
        Octonion(out)
    }
}

impl std::ops::Add for Octonion {
    type Output = Octonion;
    fn add(self, o: Octonion) -> Octonion {
        let mut c = self.0;
        for (a, b) in c.iter_mut().zip(o.0.iter()) {
            *a += b;
        }
        Octonion(c)
    }
}

impl std::ops::Sub for Octonion {
    type Output = Octonion;
    fn sub(self, o: Octonion) -> Octonion {
        let mut c = self.0;
        for (a, b) in c.iter_mut().zip(o.0.iter()) {
            *a -= b;
        }
        Octonion(c)
    }
}

impl std::ops::Neg for Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        self.scale(-1.0)
    }
}

impl std::ops::Mul for Octonion {
    type Output = Octonion;
    fn mul(self, o: Octonion) -> Octonion {
        oct_mul(self, o)
    }
}

/// Bilinear octonion product driven by the cached table.
pub fn oct_mul(a: Octonion, b: Octonion) -> Octonion {
    let t = &*OCTONION_TABLE;
    let mut out = [0.0; DIM];
    for i in 0..DIM {
        let ai = a.0[i];
        if ai == 0.0 {
            continue;
        }
        for j in 0..DIM {
            out[t.idx[i][j]] += f64::from(t.sign[i][j]) * ai * b.0[j];
        }
    }
    Octonion(out)
}

/// Octonionic conjugation, `conj(x) = 2 <x, 1> - x`.
pub fn oct_conj(a: Octonion) -> Octonion {
    a.conj()
}

/// Scalar product `<x, y> = (x conj(y) + y conj(x)) / 2`, which equals the
/// Euclidean dot product of the coefficient arrays.
pub fn inner(a: Octonion, b: Octonion) -> f64 {
    a.0.iter().zip(b.0.iter()).map(|(x, y)| x * y).sum()
}

impl ImOctonion {
    pub fn zero() -> Self {
        ImOctonion([0.0; IM_DIM])
    }

    /// Imaginary basis element: 0 = i, 1 = j, 2 = k, 3 = l, 4 = il,
    /// 5 = jl, 6 = kl.
    pub fn basis(idx: usize) -> Self {
        let mut c = [0.0; IM_DIM];
        c[idx] = 1.0;
        ImOctonion(c)
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = self.0;
        for v in out.iter_mut() {
            *v *= c;
        }
        ImOctonion(out)
    }

    pub fn normalize(&self) -> Self {
        self.scale(1.0 / self.norm())
    }

    pub fn dot(&self, o: &ImOctonion) -> f64 {
        self.0.iter().zip(o.0.iter()).map(|(x, y)| x * y).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

impl std::ops::Add for ImOctonion {
    type Output = ImOctonion;
    fn add(self, o: ImOctonion) -> ImOctonion {
        let mut c = self.0;
        for (a, b) in c.iter_mut().zip(o.0.iter()) {
            *a += b;
        }
        ImOctonion(c)
    }
}

impl std::ops::Sub for ImOctonion {
    type Output = ImOctonion;
    fn sub(self, o: ImOctonion) -> ImOctonion {
        let mut c = self.0;
        for (a, b) in c.iter_mut().zip(o.0.iter()) {
            *a -= b;
        }
        ImOctonion(c)
    }
}

impl std::ops::Neg for ImOctonion {
    type Output = ImOctonion;
    fn neg(self) -> ImOctonion {
        self.scale(-1.0)
    }
}

/// Cross product on Im(O): `x × y = (conj(y) x - conj(x) y) / 2`. For
/// imaginary arguments this is the imaginary part of the product `x y`,
/// which is how it is evaluated here (the real parts cancel).
pub fn cross(x: ImOctonion, y: ImOctonion) -> ImOctonion {
    let t = &*OCTONION_TABLE;
    let mut out = [0.0; IM_DIM];
    for i in 0..IM_DIM {
        let xi = x.0[i];
        if xi == 0.0 {
            continue;
        }
        let (row_idx, row_sign) = (&t.idx[i + 1], &t.sign[i + 1]);
        for j in 0..IM_DIM {
            let target = row_idx[j + 1];
            if target != 0 {
                out[target - 1] += f64::from(row_sign[j + 1]) * xi * y.0[j];
            }
        }
    }
    ImOctonion(out)
}

/// Scalar product restricted to the imaginary part.
pub fn inner_im(x: ImOctonion, y: ImOctonion) -> f64 {
    x.dot(&y)
}

impl ComplexOctonion {
    pub fn zero() -> Self {
        ComplexOctonion([Complex64::new(0.0, 0.0); DIM])
    }

    /// Complex combination `re + sqrt(-1) * im` of two imaginary octonions.
    pub fn from_imaginary_pair(re: ImOctonion, im: ImOctonion) -> Self {
        let mut c = [Complex64::new(0.0, 0.0); DIM];
        for n in 0..IM_DIM {
            c[n + 1] = Complex64::new(re.0[n], im.0[n]);
        }
        ComplexOctonion(c)
    }

    pub fn from_real(x: Octonion) -> Self {
        let mut c = [Complex64::new(0.0, 0.0); DIM];
        for n in 0..DIM {
            c[n] = Complex64::new(x.0[n], 0.0);
        }
        ComplexOctonion(c)
    }

    /// Complex conjugation on the coefficients. Distributes over products:
    /// `conj_complex(x y) = conj_complex(x) conj_complex(y)`.
    pub fn conj_complex(&self) -> Self {
        let mut c = self.0;
        for v in c.iter_mut() {
            *v = v.conj();
        }
        ComplexOctonion(c)
    }

    /// Octonionic conjugation extended complex-linearly.
    pub fn conj_oct(&self) -> Self {
        let mut c = self.0;
        for v in c[1..].iter_mut() {
            *v = -*v;
        }
        ComplexOctonion(c)
    }

    pub fn scale(&self, z: Complex64) -> Self {
        let mut c = self.0;
        for v in c.iter_mut() {
            *v *= z;
        }
        ComplexOctonion(c)
    }

    pub fn norm_max(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl std::ops::Add for ComplexOctonion {
    type Output = ComplexOctonion;
    fn add(self, o: ComplexOctonion) -> ComplexOctonion {
        let mut c = self.0;
        for (a, b) in c.iter_mut().zip(o.0.iter()) {
            *a += b;
        }
        ComplexOctonion(c)
    }
}

impl std::ops::Sub for ComplexOctonion {
    type Output = ComplexOctonion;
    fn sub(self, o: ComplexOctonion) -> ComplexOctonion {
        let mut c = self.0;
        for (a, b) in c.iter_mut().zip(o.0.iter()) {
            *a -= b;
        }
        ComplexOctonion(c)
    }
}

/// Product on the complexified algebra: same structure table, complex
/// coefficients.
pub fn cmul(a: ComplexOctonion, b: ComplexOctonion) -> ComplexOctonion {
    let t = &*OCTONION_TABLE;
    let mut out = [Complex64::new(0.0, 0.0); DIM];
    for i in 0..DIM {
        let ai = a.0[i];
        if ai == Complex64::new(0.0, 0.0) {
            continue;
        }
        for j in 0..DIM {
            out[t.idx[i][j]] += f64::from(t.sign[i][j]) * ai * b.0[j];
        }
    }
    ComplexOctonion(out)
}

/// Complex-bilinear extension of the scalar product (no conjugation):
/// the coefficient sum `sum_n a_n b_n`.
pub fn cinner(a: &ComplexOctonion, b: &ComplexOctonion) -> Complex64 {
    a.0.iter().zip(b.0.iter()).map(|(x, y)| x * y).sum()
}

/// Complex-bilinear extension of the cross product,
/// `x × y = (conj(y) x - conj(x) y) / 2` with the octonionic conjugation.
pub fn ccross(a: &ComplexOctonion, b: &ComplexOctonion) -> ComplexOctonion {
    let lhs = cmul(b.conj_oct(), *a) - cmul(a.conj_oct(), *b);
    lhs.scale(Complex64::new(0.5, 0.0))
}

/// 7x7 real matrix acting on Im(O), row-major.
pub type Mat7 = [[f64; IM_DIM]; IM_DIM];

pub fn mat7_identity() -> Mat7 {
    let mut m = [[0.0; IM_DIM]; IM_DIM];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn mat7_apply(m: &Mat7, x: ImOctonion) -> ImOctonion {
    let mut out = [0.0; IM_DIM];
    for (o, row) in out.iter_mut().zip(m.iter()) {
        *o = row.iter().zip(x.0.iter()).map(|(a, b)| a * b).sum();
    }
    ImOctonion(out)
}

/// Transpose application; for orthogonal matrices this is the inverse.
pub fn mat7_apply_transpose(m: &Mat7, x: ImOctonion) -> ImOctonion {
    let mut out = [0.0; IM_DIM];
    for j in 0..IM_DIM {
        for i in 0..IM_DIM {
            out[j] += m[i][j] * x.0[i];
        }
    }
    ImOctonion(out)
}

/// Max-norm deviation of `m^T m` from the identity.
pub fn mat7_orthogonality_dev(m: &Mat7) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..IM_DIM {
        for j in 0..IM_DIM {
            let mut s = 0.0;
            for row in m.iter() {
                s += row[i] * row[j];
            }
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((s - target).abs());
        }
    }
    dev
}

/// The block matrix rotating the (l, il) coordinate plane by 90 degrees;
/// orthogonal but not an algebra automorphism.
pub const BLOCK_ROTATION_A: Mat7 = [
    [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
];

/// Tests whether the linear map `m` on Im(O), extended to O by fixing 1,
/// is an algebra automorphism: orthogonal to `tol` and multiplicative on
/// all 49 ordered imaginary basis pairs (bilinearity makes basis coverage
/// exhaustive).
pub fn is_g2_automorphism(m: &Mat7, tol: f64) -> Result<bool> {
    if m.iter().flatten().any(|c| !c.is_finite()) {
        return Err(Error::InvalidInput(
            "automorphism test: matrix has non-finite entries".into(),
        ));
    }
    if mat7_orthogonality_dev(m) > tol {
        return Ok(false);
    }
    let t = &*OCTONION_TABLE;
    let images: Vec<Octonion> = (0..IM_DIM)
        .map(|a| Octonion::from_imaginary(mat7_apply(m, ImOctonion::basis(a))))
        .collect();
    for a in 0..IM_DIM {
        for b in 0..IM_DIM {
            // m(e_a e_b), with m extended to fix the real axis
            let idx = t.idx[a + 1][b + 1];
            let sign = f64::from(t.sign[a + 1][b + 1]);
            let lhs = if idx == 0 {
                Octonion::one().scale(sign)
            } else {
                Octonion::from_imaginary(mat7_apply(m, ImOctonion::basis(idx - 1))).scale(sign)
            };
            let rhs = oct_mul(images[a], images[b]);
            let dev = (lhs - rhs).0.iter().map(|c| c.abs()).fold(0.0, f64::max);
            if dev > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn signed_symbol(sign: i8, idx: usize) -> String {
    match sign {
        0 => "0".to_string(),
        1 => BASIS_SYMBOLS[idx].to_string(),
        _ => format!("-{}", BASIS_SYMBOLS[idx]),
    }
}

/// The 7x7 imaginary multiplication table as CSV, entries as basis-symbol
/// strings (e.g. "-il"). First column holds the row symbol.
pub fn mul_table_csv() -> String {
    let t = &*OCTONION_TABLE;
    let mut out = String::new();
    out.push_str("lhs");
    for s in &BASIS_SYMBOLS[1..] {
        out.push(',');
        out.push_str(s);
    }
    out.push('\n');
    for i in 1..DIM {
        out.push_str(BASIS_SYMBOLS[i]);
        for j in 1..DIM {
            out.push(',');
            out.push_str(&signed_symbol(t.sign[i][j], t.idx[i][j]));
        }
        out.push('\n');
    }
    out
}

/// The 7x7 cross-product table as CSV. Diagonal entries are 0; off-diagonal
/// entries coincide with the product table restricted to imaginary results.
pub fn cross_table_csv() -> String {
    let t = &*OCTONION_TABLE;
    let mut out = String::new();
    out.push_str("lhs");
    for s in &BASIS_SYMBOLS[1..] {
        out.push(',');
        out.push_str(s);
    }
    out.push('\n');
    for i in 1..DIM {
        out.push_str(BASIS_SYMBOLS[i]);
        for j in 1..DIM {
            out.push(',');
            if i == j {
                out.push('0');
            } else {
                out.push_str(&signed_symbol(t.sign[i][j], t.idx[i][j]));
            }
        }
        out.push('\n');
    }
    out
}
