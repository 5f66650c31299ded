//! Exact scalars and dense tensors.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("singular matrix")]
    Singular,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("field mismatch: {0}")]
    Field(String),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, TensorError>;

/// The ground field: the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Field {
    Q,
    Fp { p: u64 },
}

impl Field {
    pub fn fp(p: u64) -> Result<Field> {
        if p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(TensorError::Field(format!("{p} is not prime")));
        }
        Ok(Field::Fp { p })
    }

    pub fn zero(self) -> Scalar {
        self.int(0)
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    pub fn int(self, v: i64) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
            Field::Fp { p } => Scalar::Fp { v: v.rem_euclid(p as i64) as u64, p },
        }
    }

    pub fn ratio(self, num: i64, den: i64) -> Result<Scalar> {
        self.int(num).div(&self.int(den))
    }

    /// Parses `"3/7"`, `"-2"` or `"2 mod 5"` (the modulus must match).
    pub fn parse(self, s: &str) -> Result<Scalar> {
        let err = || TensorError::Parse(s.to_string());
        let s = s.trim();
        match self {
            Field::Q => {
                if s.contains("mod") {
                    return Err(err());
                }
                BigRational::from_str(s).map(Scalar::Q).map_err(|_| err())
            }
            Field::Fp { p } => {
                let (v, q) = match s.split_once("mod") {
                    Some((v, q)) => (v.trim(), Some(q.trim().parse::<u64>().map_err(|_| err())?)),
                    None => (s, None),
                };
                if q.is_some_and(|q| q != p) {
                    return Err(TensorError::Field(format!("{s:?} is not in F_{p}")));
                }
                match v.split_once('/') {
                    Some((a, b)) => {
                        let a = a.trim().parse::<i64>().map_err(|_| err())?;
                        let b = b.trim().parse::<i64>().map_err(|_| err())?;
                        self.ratio(a, b)
                    }
                    None => Ok(self.int(v.parse::<i64>().map_err(|_| err())?)),
                }
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Fp { p } => write!(f, "F_{p}"),
        }
    }
}

/// An exact scalar.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Q,
            Scalar::Fp { p, .. } => Field::Fp { p: *p },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(TensorError::Singular);
        }
        Ok(match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::Fp { v, p } => Scalar::Fp { v: pow_mod(*v, p - 2, *p), p: *p },
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    fn check(&self, other: &Scalar) {
        assert_eq!(self.field(), other.field(), "scalars from different fields");
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}{}/{}", if q.is_negative() { "-" } else { "" }, q.numer().abs(), q.denom())
                }
            }
            Scalar::Fp { v, p } => write!(f, "{v} mod {p}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.check(o);
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp { v: (a + b) % p, p: *p },
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &-o
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.check(o);
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp { v: a * b % p, p: *p },
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { v, p } => Scalar::Fp { v: (p - v) % p, p: *p },
        }
    }
}

/// A dense tensor with row-major entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tensor {
    field: Field,
    shape: Vec<usize>,
    data: Vec<Scalar>,
}

fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for k in (0..shape.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * shape[k + 1];
    }
    s
}

/// Iterates over all multi-indices of a shape in row-major order.
pub fn multi_indices(shape: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = shape.iter().product();
    let st = strides(shape);
    (0..total).map(move |flat| shape.iter().zip(&st).map(|(&d, &s)| flat / s % d).collect())
}

impl Tensor {
    pub fn zeros(field: Field, shape: Vec<usize>) -> Tensor {
        let n = shape.iter().product();
        Tensor { field, shape, data: vec![field.zero(); n] }
    }

    pub fn scalar(s: Scalar) -> Tensor {
        Tensor { field: s.field(), shape: vec![], data: vec![s] }
    }

    pub fn from_entries(field: Field, shape: Vec<usize>, data: Vec<Scalar>) -> Result<Tensor> {
        if data.len() != shape.iter().product::<usize>() {
            return Err(TensorError::Shape(format!("{} entries for shape {shape:?}", data.len())));
        }
        if let Some(s) = data.iter().find(|s| s.field() != field) {
            return Err(TensorError::Field(format!("entry {s} is not in {field}")));
        }
        Ok(Tensor { field, shape, data })
    }

    pub fn identity(field: Field, d: usize) -> Tensor {
        let mut t = Tensor::zeros(field, vec![d, d]);
        for i in 0..d {
            t.data[i * d + i] = field.one();
        }
        t
    }

    pub fn from_matrix(field: Field, rows: &[Vec<Scalar>]) -> Result<Tensor> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(TensorError::Shape("ragged matrix".into()));
        }
        Tensor::from_entries(field, vec![r, c], rows.concat())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.shape.len(), "index rank");
        idx.iter().zip(&self.shape).fold(0, |acc, (&i, &d)| {
            assert!(i < d, "index out of range");
            acc * d + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> &Scalar {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Scalar) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    pub fn add_at(&mut self, idx: &[usize], v: &Scalar) {
        let o = self.offset(idx);
        self.data[o] = &self.data[o] + v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, s: &Scalar) -> Tensor {
        Tensor { field: self.field, shape: self.shape.clone(), data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        if self.shape != other.shape {
            return Err(TensorError::Shape(format!("{:?} + {:?}", self.shape, other.shape)));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Tensor { field: self.field, shape: self.shape.clone(), data })
    }

    /// Sums over the paired axes `axes1[k]` of `self` and `axes2[k]` of `t2`.
    /// The result carries the free axes of `self` followed by those of `t2`.
    pub fn contract(&self, axes1: &[usize], t2: &Tensor, axes2: &[usize]) -> Result<Tensor> {
        contract(self, axes1, t2, axes2)
    }

    /// Axis `k` of the result is axis `perm[k]` of `self`.
    pub fn permute_axes(&self, perm: &[usize]) -> Result<Tensor> {
        permute_axes(self, perm)
    }

    pub fn outer(&self, other: &Tensor) -> Tensor {
        contract(self, &[], other, &[]).expect("outer product")
    }

    /// Traces out the axis pair `(a, b)` of a single tensor.
    pub fn trace_axes(&self, a: usize, b: usize) -> Result<Tensor> {
        if a == b || a >= self.rank() || b >= self.rank() || self.shape[a] != self.shape[b] {
            return Err(TensorError::Shape(format!("cannot trace axes {a},{b} of {:?}", self.shape)));
        }
        let keep: Vec<usize> = (0..self.rank()).filter(|&k| k != a && k != b).collect();
        let shape: Vec<usize> = keep.iter().map(|&k| self.shape[k]).collect();
        let mut out = Tensor::zeros(self.field, shape.clone());
        let st = strides(&self.shape);
        for (flat, idx) in multi_indices(&shape).enumerate() {
            let base: usize = keep.iter().zip(&idx).map(|(&k, &i)| st[k] * i).sum();
            let mut acc = self.field.zero();
            for i in 0..self.shape[a] {
                acc = &acc + &self.data[base + i * (st[a] + st[b])];
            }
            out.data[flat] = acc;
        }
        Ok(out)
    }

    pub fn matmul(&self, other: &Tensor) -> Result<Tensor> {
        if self.rank() != 2 || other.rank() != 2 {
            return Err(TensorError::Shape("matmul needs matrices".into()));
        }
        contract(self, &[1], other, &[0])
    }

    pub fn transpose(&self) -> Tensor {
        permute_axes(self, &[1, 0]).expect("matrix")
    }

    /// Applies the matrix `m` to axis `axis` (`x_axis -> sum_j m[i][j] x_j`).
    pub fn apply_on_axis(&self, m: &Tensor, axis: usize) -> Result<Tensor> {
        let t = contract(m, &[1], self, &[axis])?;
        // the new axis is in front; move it back into position
        let r = self.rank();
        let mut perm: Vec<usize> = (1..r).collect();
        perm.insert(axis, 0);
        permute_axes(&t, &perm)
    }
}

pub fn contract(t1: &Tensor, axes1: &[usize], t2: &Tensor, axes2: &[usize]) -> Result<Tensor> {
    if t1.field != t2.field {
        return Err(TensorError::Field(format!("{} vs {}", t1.field, t2.field)));
    }
    if axes1.len() != axes2.len() {
        return Err(TensorError::Shape("axis lists differ in length".into()));
    }
    for (&a, &b) in axes1.iter().zip(axes2) {
        if a >= t1.rank() || b >= t2.rank() || t1.shape[a] != t2.shape[b] {
            return Err(TensorError::Shape(format!(
                "cannot pair axis {a} of {:?} with axis {b} of {:?}",
                t1.shape, t2.shape
            )));
        }
    }
    let distinct = |axes: &[usize]| axes.iter().collect::<std::collections::HashSet<_>>().len() == axes.len();
    if !distinct(axes1) || !distinct(axes2) {
        return Err(TensorError::Shape("repeated contraction axis".into()));
    }
    let free1: Vec<usize> = (0..t1.rank()).filter(|k| !axes1.contains(k)).collect();
    let free2: Vec<usize> = (0..t2.rank()).filter(|k| !axes2.contains(k)).collect();
    let s1 = strides(&t1.shape);
    let s2 = strides(&t2.shape);
    let sum_shape: Vec<usize> = axes1.iter().map(|&a| t1.shape[a]).collect();
    let sum_offsets: Vec<(usize, usize)> = multi_indices(&sum_shape)
        .map(|idx| {
            let o1 = axes1.iter().zip(&idx).map(|(&a, &i)| s1[a] * i).sum();
            let o2 = axes2.iter().zip(&idx).map(|(&b, &i)| s2[b] * i).sum();
            (o1, o2)
        })
        .collect();
    let shape1: Vec<usize> = free1.iter().map(|&k| t1.shape[k]).collect();
    let shape2: Vec<usize> = free2.iter().map(|&k| t2.shape[k]).collect();
    let bases2: Vec<usize> =
        multi_indices(&shape2).map(|idx| free2.iter().zip(&idx).map(|(&k, &i)| s2[k] * i).sum()).collect();
    let mut data = Vec::with_capacity(bases2.len() * shape1.iter().product::<usize>());
    let zero = t1.field.zero();
    for idx1 in multi_indices(&shape1) {
        let b1: usize = free1.iter().zip(&idx1).map(|(&k, &i)| s1[k] * i).sum();
        for &b2 in &bases2 {
            let mut acc = zero.clone();
            for &(o1, o2) in &sum_offsets {
                let x = &t1.data[b1 + o1];
                if x.is_zero() {
                    continue;
                }
                let y = &t2.data[b2 + o2];
                if y.is_zero() {
                    continue;
                }
                acc = &acc + &(x * y);
            }
            data.push(acc);
        }
    }
    let mut shape = shape1;
    shape.extend(shape2);
    Ok(Tensor { field: t1.field, shape, data })
}

pub fn permute_axes(t: &Tensor, perm: &[usize]) -> Result<Tensor> {
    let mut seen = vec![false; t.rank()];
    if perm.len() != t.rank() || perm.iter().any(|&p| p >= t.rank() || std::mem::replace(&mut seen[p], true)) {
        return Err(TensorError::Shape(format!("{perm:?} is not a permutation of {} axes", t.rank())));
    }
    let shape: Vec<usize> = perm.iter().map(|&p| t.shape[p]).collect();
    let st = strides(&t.shape);
    let data = multi_indices(&shape)
        .map(|idx| {
            let o: usize = perm.iter().zip(&idx).map(|(&p, &i)| st[p] * i).sum();
            t.data[o].clone()
        })
        .collect();
    Ok(Tensor { field: t.field, shape, data })
}

/// Gauss-Jordan inverse of a square matrix.
pub fn invert(m: &Tensor) -> Result<Tensor> {
    if m.rank() != 2 || m.shape[0] != m.shape[1] {
        return Err(TensorError::Shape(format!("{:?} is not square", m.shape)));
    }
    let d = m.shape[0];
    let f = m.field;
    let mut a: Vec<Vec<Scalar>> = (0..d).map(|i| m.data[i * d..(i + 1) * d].to_vec()).collect();
    let mut inv: Vec<Vec<Scalar>> =
        (0..d).map(|i| (0..d).map(|j| if i == j { f.one() } else { f.zero() }).collect()).collect();
    for col in 0..d {
        let pivot = (col..d).find(|&r| !a[r][col].is_zero()).ok_or(TensorError::Singular)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let s = a[col][col].inv()?;
        for j in 0..d {
            a[col][j] = &a[col][j] * &s;
            inv[col][j] = &inv[col][j] * &s;
        }
        for r in 0..d {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for j in 0..d {
                    a[r][j] = &a[r][j] - &(&factor * &a[col][j]);
                    inv[r][j] = &inv[r][j] - &(&factor * &inv[col][j]);
                }
            }
        }
    }
    Tensor::from_matrix(f, &inv)
}

/// Serialized form `{"shape":[...],"entries":["1/2",...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TensorJson {
    pub shape: Vec<usize>,
    pub entries: Vec<String>,
}

impl From<&Tensor> for TensorJson {
    fn from(t: &Tensor) -> Self {
        TensorJson { shape: t.shape.clone(), entries: t.data.iter().map(ToString::to_string).collect() }
    }
}

impl TensorJson {
    pub fn to_tensor(&self, field: Field) -> Result<Tensor> {
        let data = self.entries.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>()?;
        Tensor::from_entries(field, self.shape.clone(), data)
    }
}
