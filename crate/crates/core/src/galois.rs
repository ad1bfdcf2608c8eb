//! Arithmetic in small finite fields GF(p^m).
//!
//! Elements are encoded by their polynomial-basis coordinates read as a
//! base-p integer (little-endian digits), so `0` and `1` are the additive and
//! multiplicative identities and the prime subfield occupies reps `0..p`.
//! The modulus is the lexicographically smallest monic irreducible of degree
//! `m`, which makes the encoding reproducible from `(p, m)` alone.
//!
//! ```
//! use quenta::galois::Field;
//!
//! let gf4 = Field::new(2, 2).unwrap();
//! let w = gf4.elem(2).unwrap(); // the class of x
//! assert_eq!(gf4.mul(w, w), gf4.add(w, gf4.one()));
//! ```

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;
/// Fields up to this order get log/antilog tables.
const TABLE_ORDER: u32 = 1 << 12;

/// A field element, stored as its integer rep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn rep(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The binary operations of [`Field::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    /// `a` raised to the integer value of `b`'s rep.
    Pow,
    /// Unary; `b` is ignored.
    Inv,
    /// Unary; `b` is ignored.
    Neg,
}

struct Tables {
    /// `exp[i] = g^i` for `i < 2(q-1)`, so products need no reduction.
    exp: Vec<u16>,
    /// `log[a]` for `a != 0`.
    log: Vec<u16>,
}

struct Inner {
    p: u32,
    m: u32,
    order: u32,
    modulus: Vec<u32>,
    /// Addition table for small odd-characteristic extension fields.
    add: Option<Vec<u16>>,
    tables: Option<Tables>,
}

/// A finite field GF(p^m) with `p^m <= 2^16`.
///
/// Cloning is cheap; all clones share the same immutable tables.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.m == other.0.m && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.m)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.0.p, self.0.m)
    }
}

/// JSON descriptor of a field: `"p^m"` plus the modulus coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub field: String,
    /// Coefficients of the modulus, constant term first.
    pub modulus: Vec<u32>,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^m` if it is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut r, mut m) = (q, 0);
    while r % p == 0 {
        r /= p;
        m += 1;
    }
    (r == 1).then_some((p, m))
}

fn digits(mut x: u32, p: u32, m: u32) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Polynomial remainder over GF(p) of `a` by the monic `modulus`; coefficients low to high.
fn poly_rem(mut a: Vec<u32>, modulus: &[u32], p: u32) -> Vec<u32> {
    let dm = modulus.len() - 1;
    while a.len() > dm {
        let lead = a.pop().unwrap();
        if lead != 0 {
            let off = a.len() - dm;
            for (i, &c) in modulus[..dm].iter().enumerate() {
                a[off + i] = (a[off + i] + p - (lead * c) % p) % p;
            }
        }
    }
    a
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() as u32 - 1;
    if m <= 1 {
        return true;
    }
    // Trial division by every monic polynomial of degree 1..=m/2.
    for d in 1..=m / 2 {
        for low in 0..p.pow(d) {
            let mut cand = digits(low, p, d);
            cand.push(1);
            if poly_rem(modulus.to_vec(), &cand, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `m` over GF(p).
///
/// Candidates are visited in order of the integer whose base-p digits are the
/// non-leading coefficients, i.e. comparing coefficients from the top down.
pub fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    if m == 1 {
        return vec![0, 1];
    }
    for low in 0..p.pow(m) {
        let mut cand = digits(low, p, m);
        cand.push(1);
        if cand[0] != 0 && is_irreducible(&cand, p) {
            return cand;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Field {
    /// Builds GF(p^m) with the deterministic modulus.
    pub fn new(p: u32, m: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::ZeroDegree);
        }
        let order = (p as u64).checked_pow(m).filter(|&o| o <= MAX_ORDER as u64);
        let order = order.ok_or(Error::FieldTooLarge { p, m })? as u32;
        let modulus = smallest_irreducible(p, m);
        let mut inner = Inner {
            p,
            m,
            order,
            modulus,
            add: None,
            tables: None,
        };
        if p != 2 && m > 1 && order <= 256 {
            let mut add = vec![0u16; (order * order) as usize];
            for a in 0..order {
                for b in 0..order {
                    add[(a * order + b) as usize] = slow_add(&inner, a, b) as u16;
                }
            }
            inner.add = Some(add);
        }
        if m > 1 && order <= TABLE_ORDER {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(Field(Arc::new(inner)))
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn with_order(q: u32) -> Result<Field> {
        let (p, m) = prime_power(q).ok_or(Error::InvalidArgument(format!("{q} is not a prime power")))?;
        Field::new(p, m)
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.0.order
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.m
    }

    /// Modulus coefficients, constant term first; monic.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            field: self.to_string(),
            modulus: self.0.modulus.clone(),
        }
    }

    /// `Some(q)` when the order is `q^2`.
    pub fn sqrt_order(&self) -> Option<u32> {
        (self.0.m % 2 == 0).then(|| self.0.p.pow(self.0.m / 2))
    }

    #[inline]
    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    #[inline]
    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    pub fn elem(&self, rep: u32) -> Result<Fe> {
        self.check(Fe(rep))?;
        Ok(Fe(rep))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn contains(&self, a: Fe) -> bool {
        a.0 < self.0.order
    }

    fn check(&self, a: Fe) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                rep: a.0,
                order: self.0.order,
            })
        }
    }

    /// All elements in ascending rep order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.0.order).map(Fe)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let f = &*self.0;
        if f.p == 2 {
            Fe(a.0 ^ b.0)
        } else if f.m == 1 {
            let s = a.0 + b.0;
            Fe(if s >= f.p { s - f.p } else { s })
        } else if let Some(add) = &f.add {
            Fe(add[(a.0 * f.order + b.0) as usize] as u32)
        } else {
            Fe(slow_add(f, a.0, b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        let f = &*self.0;
        if f.p == 2 || a.0 == 0 {
            a
        } else if f.m == 1 {
            Fe(f.p - a.0)
        } else {
            let ds: Vec<u32> = digits(a.0, f.p, f.m)
                .into_iter()
                .map(|d| (f.p - d) % f.p)
                .collect();
            Fe(undigits(&ds, f.p))
        }
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        if self.0.p == 2 {
            Fe(a.0 ^ b.0)
        } else {
            self.add(a, self.neg(b))
        }
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let f = &*self.0;
        if f.m == 1 {
            return Fe(((a.0 as u64 * b.0 as u64) % f.p as u64) as u32);
        }
        match &f.tables {
            Some(t) => Fe(t.exp[t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize] as u32),
            None => Fe(slow_mul(f, a.0, b.0)),
        }
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let f = &*self.0;
        match &f.tables {
            Some(t) => {
                let l = t.log[a.0 as usize] as usize;
                Ok(Fe(t.exp[(f.order as usize - 1 - l) % (f.order as usize - 1)] as u32))
            }
            None => Ok(self.pow(a, f.order as u64 - 2)),
        }
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        if let Some(t) = &self.0.tables {
            let l = t.log[a.0 as usize] as u64;
            let r = (l * (e % (self.0.order as u64 - 1))) % (self.0.order as u64 - 1);
            return Fe(t.exp[r as usize] as u32);
        }
        let (mut base, mut acc) = (a, Fe::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^e` for a signed exponent; negative powers of zero are an error.
    pub fn powi(&self, a: Fe, e: i64) -> Result<Fe> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }

    /// The automorphism `a -> a^k`; `k` must be a power of the characteristic.
    pub fn frobenius(&self, a: Fe, k: u64) -> Result<Fe> {
        if !is_power_of(k, self.0.p as u64) {
            return Err(Error::NotCharacteristicPower { k, p: self.0.p });
        }
        Ok(self.pow(a, k))
    }

    /// Absolute trace to the prime subfield.
    pub fn trace(&self, a: Fe) -> Fe {
        let mut acc = Fe::ZERO;
        let mut x = a;
        for _ in 0..self.0.m {
            acc = self.add(acc, x);
            x = self.pow(x, self.0.p as u64);
        }
        acc
    }

    /// Checked entry point for one arithmetic operation.
    pub fn arith(&self, op: ArithOp, a: Fe, b: Fe) -> Result<Fe> {
        self.check(a)?;
        match op {
            ArithOp::Inv => return self.inv(a),
            ArithOp::Neg => return Ok(self.neg(a)),
            ArithOp::Pow => return Ok(self.pow(a, b.0 as u64)),
            _ => {}
        }
        self.check(b)?;
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Div => self.div(a, b)?,
            _ => unreachable!(),
        })
    }

    pub fn sum<I: IntoIterator<Item = Fe>>(&self, it: I) -> Fe {
        it.into_iter().fold(Fe::ZERO, |acc, x| self.add(acc, x))
    }

    pub fn dot(&self, a: &[Fe], b: &[Fe]) -> Fe {
        a.iter()
            .zip(b)
            .fold(Fe::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

pub(crate) fn is_power_of(mut k: u64, p: u64) -> bool {
    if k == 0 {
        return false;
    }
    while k % p == 0 {
        k /= p;
    }
    k == 1
}

fn slow_add(f: &Inner, a: u32, b: u32) -> u32 {
    let (da, db) = (digits(a, f.p, f.m), digits(b, f.p, f.m));
    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % f.p).collect();
    undigits(&s, f.p)
}

fn slow_mul(f: &Inner, a: u32, b: u32) -> u32 {
    let prod = poly_mul(&digits(a, f.p, f.m), &digits(b, f.p, f.m), f.p);
    let mut r = poly_rem(prod, &f.modulus, f.p);
    r.resize(f.m as usize, 0);
    undigits(&r, f.p)
}

fn build_tables(f: &Inner) -> Tables {
    let q = f.order;
    let factors = prime_factors(q - 1);
    let slow_pow = |a: u32, mut e: u32| {
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = slow_mul(f, acc, base);
            }
            base = slow_mul(f, base, base);
            e >>= 1;
        }
        acc
    };
    let g = (2..q)
        .find(|&g| factors.iter().all(|&l| slow_pow(g, (q - 1) / l) != 1))
        .expect("multiplicative group is cyclic");
    let mut exp = vec![0u16; 2 * (q as usize - 1)];
    let mut log = vec![0u16; q as usize];
    let mut x = 1u32;
    for i in 0..(q - 1) as usize {
        exp[i] = x as u16;
        exp[i + q as usize - 1] = x as u16;
        log[x as usize] = i as u16;
        x = slow_mul(f, x, g);
    }
    Tables { exp, log }
}
