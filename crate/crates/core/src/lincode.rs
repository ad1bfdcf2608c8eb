//! Linear block codes: duals, Hermitian duals, hulls and minimum weights.
//!
//! ```
//! use quenta::galois::Field;
//! use quenta::lincode::{Distance, LinearCode};
//! use quenta::matspace::Matrix;
//!
//! let f = Field::new(2, 1).unwrap();
//! let rep = LinearCode::from_generator(&Matrix::from_reps(&f, &[&[1, 1, 1, 1]]).unwrap());
//! assert_eq!(rep.dual().k(), 3);
//! assert_eq!(rep.min_weight(1 << 24).value, Distance::Finite(4));
//! ```

use std::fmt;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::galois::{is_power_of, Fe, Field, FieldDescriptor};
use crate::matspace::{Matrix, Subspace};

/// Default cap on enumerated codewords.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// A Hamming distance, or the sentinel for a minimum over an empty set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(d) => s.serialize_u64(*d as u64),
            Distance::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Result of a minimum-weight computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WeightReport {
    pub value: Distance,
    /// When false, `value` is only a certified lower bound.
    pub exact: bool,
    /// Codewords enumerated, or column subsets examined for [`LinearCode::support_min_weight`].
    pub budget_used: u64,
}

/// JSON header accompanying a generator matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeHeader {
    pub field: FieldDescriptor,
    pub n: usize,
    pub k: usize,
}

pub fn weight(v: &[Fe]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

/// A linear code, stored as its canonical row space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearCode {
    space: Subspace,
}

impl LinearCode {
    pub fn from_generator(g: &Matrix) -> LinearCode {
        LinearCode {
            space: Subspace::from_matrix(g),
        }
    }

    pub fn from_subspace(space: Subspace) -> LinearCode {
        LinearCode { space }
    }

    pub fn zero(field: &Field, n: usize) -> LinearCode {
        LinearCode::from_subspace(Subspace::zero(field, n))
    }

    pub fn full(field: &Field, n: usize) -> LinearCode {
        LinearCode::from_subspace(Subspace::full(field, n))
    }

    pub fn field(&self) -> &Field {
        self.space.field()
    }

    pub fn n(&self) -> usize {
        self.space.ambient()
    }

    pub fn k(&self) -> usize {
        self.space.dim()
    }

    /// Generator in reduced row echelon form.
    pub fn generator(&self) -> &Matrix {
        self.space.basis()
    }

    /// Generator of the dual code.
    pub fn parity_check(&self) -> Matrix {
        self.space.orthogonal().basis().clone()
    }

    pub fn subspace(&self) -> &Subspace {
        &self.space
    }

    pub fn header(&self) -> CodeHeader {
        CodeHeader {
            field: self.field().descriptor(),
            n: self.n(),
            k: self.k(),
        }
    }

    pub fn contains(&self, v: &[Fe]) -> bool {
        self.space.contains(v)
    }

    pub fn is_subcode_of(&self, other: &LinearCode) -> bool {
        self.space.is_subspace_of(&other.space)
    }

    pub fn encode(&self, msg: &[Fe]) -> Vec<Fe> {
        let f = self.field();
        let g = self.generator();
        let mut out = vec![Fe::ZERO; self.n()];
        for (i, &m) in msg.iter().enumerate().take(self.k()) {
            if m.is_zero() {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(g.row(i)) {
                *o = f.add(*o, f.mul(m, x));
            }
        }
        out
    }

    pub fn random_codeword<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Fe> {
        let q = self.field().order();
        let msg: Vec<Fe> = (0..self.k()).map(|_| Fe(rng.random_range(0..q))).collect();
        self.encode(&msg)
    }

    pub fn dual(&self) -> LinearCode {
        LinearCode::from_subspace(self.space.orthogonal())
    }

    /// The code spanned by entrywise `e`-th powers of the generator rows.
    pub fn power_code(&self, e: u64) -> Result<LinearCode> {
        let f = self.field().clone();
        if !is_power_of(e, f.characteristic() as u64) {
            return Err(Error::NotCharacteristicPower {
                k: e,
                p: f.characteristic(),
            });
        }
        Ok(LinearCode::from_subspace(self.space.map_entries(|x| f.pow(x, e))))
    }

    fn sqrt_order(&self) -> Result<u32> {
        self.field()
            .sqrt_order()
            .ok_or(Error::NonSquareOrder(self.field().order()))
    }

    /// `C^{⊥h} = (C^⊥)^q` over GF(q²).
    pub fn hermitian_dual(&self) -> Result<LinearCode> {
        let q = self.sqrt_order()?;
        self.dual().power_code(q as u64)
    }

    pub fn hull(&self, hermitian: bool) -> Result<LinearCode> {
        let d = if hermitian {
            self.hermitian_dual()?
        } else {
            self.dual()
        };
        Ok(LinearCode::from_subspace(self.space.intersect(&d.space)?))
    }

    pub fn is_lcd(&self, hermitian: bool) -> Result<bool> {
        Ok(self.hull(hermitian)?.k() == 0)
    }

    pub fn intersect(&self, other: &LinearCode) -> Result<LinearCode> {
        Ok(LinearCode::from_subspace(self.space.intersect(&other.space)?))
    }

    pub fn sum(&self, other: &LinearCode) -> Result<LinearCode> {
        Ok(LinearCode::from_subspace(self.space.sum(&other.space)?))
    }

    pub fn dim_intersection(&self, other: &LinearCode) -> Result<usize> {
        Ok(self.intersect(other)?.k())
    }

    /// Minimum weight over nonzero codewords by exhaustive enumeration.
    ///
    /// Runs only when `q^k <= budget`; otherwise returns the trivial lower bound 1.
    pub fn min_weight(&self, budget: u64) -> WeightReport {
        self.relative_min_weight(&LinearCode::zero(self.field(), self.n()), budget)
            .expect("the zero code is a subcode")
    }

    /// Minimum weight over codewords of `self` outside the subcode `s`.
    pub fn relative_min_weight(&self, s: &LinearCode, budget: u64) -> Result<WeightReport> {
        let t = self.complement_basis(s)?;
        if t.is_empty() {
            return Ok(WeightReport {
                value: Distance::Infinite,
                exact: true,
                budget_used: 0,
            });
        }
        let q = self.field().order() as u64;
        let fits = q
            .checked_pow(self.k() as u32)
            .is_some_and(|total| total <= budget);
        if !fits {
            return Ok(WeightReport {
                value: Distance::Finite(1),
                exact: false,
                budget_used: 0,
            });
        }
        let mut rows = t.clone();
        rows.extend(s.generator().row_vecs());
        let (w, used) = enumerate_min(self.field(), &rows, t.len(), self.n());
        Ok(WeightReport {
            value: Distance::Finite(w),
            exact: true,
            budget_used: used,
        })
    }

    /// Rows of `self`'s generator that extend a basis of `s` to one of `self`.
    fn complement_basis(&self, s: &LinearCode) -> Result<Vec<Vec<Fe>>> {
        if s.field() != self.field() {
            return Err(Error::FieldMismatch);
        }
        if s.n() != self.n() || !s.is_subcode_of(self) {
            return Err(Error::NotSubcode(format!(
                "[{}, {}] is not contained in [{}, {}]",
                s.n(),
                s.k(),
                self.n(),
                self.k()
            )));
        }
        let mut acc = s.space.clone();
        let mut out = Vec::new();
        for row in self.generator().row_vecs() {
            if !acc.contains(&row) {
                let m = Matrix::from_rows(self.field(), self.n(), std::slice::from_ref(&row))?;
                acc = acc.sum(&Subspace::from_matrix(&m))?;
                out.push(row);
            }
        }
        Ok(out)
    }

    /// Exact minimum weight of `self \ s` by a search over zero patterns.
    ///
    /// A word of weight at most `w` outside `s` exists iff for some set `Z` of
    /// `n - w` coordinates the subcode vanishing on `Z` is not inside `s`. Weights
    /// are tried in increasing order, so when the subset budget runs out the
    /// report still carries a certified lower bound.
    pub fn support_min_weight(&self, s: &LinearCode, budget: u64) -> Result<WeightReport> {
        self.complement_basis(s)?;
        if s.k() == self.k() {
            return Ok(WeightReport {
                value: Distance::Infinite,
                exact: true,
                budget_used: 0,
            });
        }
        let n = self.n();
        let g = self.generator();
        let mut used = 0u64;
        for w in 1..=n {
            for support in (0..n).combinations(w) {
                if used == budget {
                    return Ok(WeightReport {
                        value: Distance::Finite(w),
                        exact: false,
                        budget_used: used,
                    });
                }
                used += 1;
                let zeros: Vec<usize> = (0..n).filter(|c| !support.contains(c)).collect();
                let gz = g.select_columns(&zeros);
                if s.k() == 0 {
                    if gz.rank() < self.k() {
                        return Ok(WeightReport {
                            value: Distance::Finite(w),
                            exact: true,
                            budget_used: used,
                        });
                    }
                    continue;
                }
                let msgs = gz.transpose().kernel();
                if msgs.dim() == 0 {
                    continue;
                }
                let words = msgs.basis().matmul(g)?;
                let escapes = (0..words.rows()).any(|i| !s.contains(words.row(i)));
                if escapes {
                    return Ok(WeightReport {
                        value: Distance::Finite(w),
                        exact: true,
                        budget_used: used,
                    });
                }
            }
        }
        unreachable!("a word outside a proper subcode has weight at most n")
    }

    /// Randomised search for a codeword of `self` outside `s` of weight at most `target`.
    ///
    /// Each round brings the generator to systematic form on a random information
    /// set and tries single rows and all two-row combinations (Lee–Brickell with
    /// `p = 2`). A returned word is a certificate that the minimum weight of
    /// `self \ s` is at most its weight; `None` proves nothing.
    pub fn find_low_weight<R: Rng + ?Sized>(
        &self,
        s: &LinearCode,
        target: usize,
        rounds: usize,
        rng: &mut R,
    ) -> Result<Option<Vec<Fe>>> {
        self.complement_basis(s)?;
        let f = self.field();
        let n = self.n();
        let units: Vec<Fe> = f.elements().skip(1).collect();
        let accept = |w: &[Fe]| weight(w) <= target && !s.contains(w);
        for _ in 0..rounds {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            let (sys, _) = self.generator().select_columns(&perm).echelon();
            let mut rows = Vec::with_capacity(sys.rows());
            for r in 0..sys.rows() {
                let mut w = vec![Fe::ZERO; n];
                for (j, &c) in perm.iter().enumerate() {
                    w[c] = sys.get(r, j);
                }
                rows.push(w);
            }
            for (i, a) in rows.iter().enumerate() {
                if accept(a) {
                    return Ok(Some(a.clone()));
                }
                for b in &rows[i + 1..] {
                    for &u in &units {
                        let w: Vec<Fe> = a.iter().zip(b).map(|(&x, &y)| f.add(x, f.mul(u, y))).collect();
                        if accept(&w) {
                            return Ok(Some(w));
                        }
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Scans messages whose first `lead` coordinates are projectively normalised
/// (first nonzero equals 1) and whose remaining coordinates are free.
fn enumerate_min(f: &Field, rows: &[Vec<Fe>], lead: usize, n: usize) -> (usize, u64) {
    let q = f.order() as usize;
    let k = rows.len();
    // delta[j][a] moves digit j from rep a to rep a+1 (or back to 0 when a = q-1).
    let mult: Vec<Vec<Vec<Fe>>> = rows
        .iter()
        .map(|r| {
            f.elements()
                .map(|a| r.iter().map(|&x| f.mul(a, x)).collect())
                .collect()
        })
        .collect();
    let delta: Vec<Vec<Vec<Fe>>> = mult
        .iter()
        .map(|m| {
            (0..q)
                .map(|a| {
                    let next = &m[(a + 1) % q];
                    next.iter().zip(&m[a]).map(|(&x, &y)| f.sub(x, y)).collect()
                })
                .collect()
        })
        .collect();
    let mut best = usize::MAX;
    let mut used = 0u64;
    for i in 0..lead {
        let mut cw = rows[i].clone();
        let mut digits = vec![0usize; k];
        loop {
            used += 1;
            best = best.min(weight(&cw));
            // Odometer over positions i+1..k, last position fastest.
            let mut j = k;
            let mut done = true;
            while j > i + 1 {
                j -= 1;
                let a = digits[j];
                for (c, &d) in cw.iter_mut().zip(&delta[j][a]) {
                    *c = f.add(*c, d);
                }
                digits[j] = (a + 1) % q;
                if digits[j] != 0 {
                    done = false;
                    break;
                }
            }
            if done {
                break;
            }
        }
    }
    debug_assert!(best <= n);
    (best, used)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u32) -> Field {
        Field::with_order(q).unwrap()
    }

    fn code(f: &Field, rows: &[&[u32]]) -> LinearCode {
        LinearCode::from_generator(&Matrix::from_reps(f, rows).unwrap())
    }

    /// Every codeword, by brute force over all messages.
    fn all_words(c: &LinearCode) -> Vec<Vec<Fe>> {
        let q = c.field().order();
        (0..(q as u64).pow(c.k() as u32))
            .map(|mut idx| {
                let msg: Vec<Fe> = (0..c.k())
                    .map(|_| {
                        let d = (idx % q as u64) as u32;
                        idx /= q as u64;
                        Fe(d)
                    })
                    .collect();
                c.encode(&msg)
            })
            .collect()
    }

    fn rs_4_3() -> LinearCode {
        // Evaluations of 1, x, x^2 at the nonzero elements of GF(5).
        let f = gf(5);
        let rows: Vec<Vec<u32>> = (0..3).map(|e| (1..5u32).map(|x| x.pow(e) % 5).collect()).collect();
        let refs: Vec<&[u32]> = rows.iter().map(|r| r.as_slice()).collect();
        code(&f, &refs)
    }

    #[test]
    fn dual_examples() {
        let f = gf(3);
        assert_eq!(LinearCode::full(&f, 4).dual().k(), 0);
        let c = rs_4_3();
        assert_eq!(c.dual().dual(), c);
        let d = c.dual();
        assert_eq!((d.n(), d.k()), (4, 1));
        let f = gf(5);
        let (cw, dw) = (all_words(&c), all_words(&d));
        assert_eq!((cw.len(), dw.len()), (125, 5));
        for x in &cw {
            for y in &dw {
                assert_eq!(f.dot(x, y), Fe::ZERO);
            }
        }
    }

    #[test]
    fn power_code_examples() {
        let f = gf(4);
        let c = code(&f, &[&[1, 2]]);
        assert_eq!(c.power_code(4).unwrap(), c);
        assert_eq!(c.power_code(2).unwrap(), code(&f, &[&[1, 3]]));
        assert!(c.power_code(3).is_err());
        let f5 = gf(5);
        let c = code(&f5, &[&[1, 2, 3]]);
        assert_eq!(c.power_code(5).unwrap(), c);
    }

    #[test]
    fn hermitian_examples() {
        let f = gf(4);
        assert_eq!(LinearCode::full(&f, 3).hermitian_dual().unwrap().k(), 0);
        let c = code(&f, &[&[1, 1]]);
        // Small-case oracle: v with v . c^2 = 0 for c in C, over all 16 vectors.
        let sols: Vec<[u32; 2]> = (0..16u32)
            .map(|v| [v % 4, v / 4])
            .filter(|v| {
                let w = [Fe(v[0]), Fe(v[1])];
                all_words(&c).iter().all(|x| {
                    let xq: Vec<Fe> = x.iter().map(|&a| f.pow(a, 2)).collect();
                    f.dot(&w, &xq) == Fe::ZERO
                })
            })
            .collect();
        assert_eq!(sols.len(), 4);
        assert!(sols.iter().all(|v| v[0] == v[1]));
        assert_eq!(c.hermitian_dual().unwrap(), c);
        assert_eq!(c.hull(true).unwrap().k(), 1);
        assert!(!c.is_lcd(true).unwrap());
        assert!(matches!(code(&gf(5), &[&[1, 1]]).hermitian_dual(), Err(Error::NonSquareOrder(5))));
        let c = code(&f, &[&[1, 2, 3]]);
        assert_eq!(c.hermitian_dual().unwrap().hermitian_dual().unwrap(), c);
    }

    #[test]
    fn hull_examples() {
        let f = gf(2);
        let c = code(&f, &[&[1, 1, 0, 0], &[0, 0, 1, 1]]);
        assert_eq!(c.hull(false).unwrap(), c);
        let f5 = gf(5);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let lcd = (0..1000)
            .map(|_| {
                let data = (0..18).map(|_| Fe(rng.random_range(0..5))).collect();
                LinearCode::from_generator(&Matrix::new(&f5, 3, 6, data).unwrap())
            })
            .find(|c| c.k() == 3 && c.hull(false).unwrap().k() == 0)
            .expect("random [6,3] codes over GF(5) are usually LCD");
        assert!(lcd.is_lcd(false).unwrap());
    }

    #[test]
    fn min_weight_examples() {
        let f = gf(5);
        let z = LinearCode::zero(&f, 4).min_weight(DEFAULT_BUDGET);
        assert_eq!(z.value, Distance::Infinite);
        let r = rs_4_3().min_weight(DEFAULT_BUDGET);
        let oracle = all_words(&rs_4_3()).iter().map(|w| weight(w)).filter(|&w| w > 0).min();
        assert_eq!(oracle, Some(2));
        assert_eq!((r.value, r.exact, r.budget_used), (Distance::Finite(2), true, 31));
        let rep = code(&f, &[&[1, 1, 1, 1, 1]]);
        assert_eq!(rep.min_weight(DEFAULT_BUDGET).value, Distance::Finite(5));
        let over = rs_4_3().min_weight(100);
        assert_eq!((over.value, over.exact), (Distance::Finite(1), false));
    }

    #[test]
    fn relative_examples() {
        let f = gf(5);
        let c = rs_4_3();
        let zero = LinearCode::zero(&f, 4);
        assert_eq!(c.relative_min_weight(&zero, DEFAULT_BUDGET).unwrap(), c.min_weight(DEFAULT_BUDGET));
        assert_eq!(c.relative_min_weight(&c, DEFAULT_BUDGET).unwrap().value, Distance::Infinite);
        let s = code(&f, &[&[1, 1, 1, 1]]);
        let oracle = all_words(&c)
            .into_iter()
            .filter(|w| !s.contains(w))
            .map(|w| weight(&w))
            .min();
        assert_eq!(oracle, Some(2));
        assert_eq!(c.relative_min_weight(&s, DEFAULT_BUDGET).unwrap().value, Distance::Finite(2));
        let bad = code(&f, &[&[1, 0, 0, 0]]);
        assert!(matches!(c.relative_min_weight(&bad, DEFAULT_BUDGET), Err(Error::NotSubcode(_))));
    }

    #[test]
    fn support_search_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [2u32, 3, 4, 5] {
            let f = gf(q);
            for _ in 0..30 {
                let n = rng.random_range(2..8);
                let k = rng.random_range(1..=n.min(4));
                let data = (0..k * n).map(|_| Fe(rng.random_range(0..q))).collect();
                let c = LinearCode::from_generator(&Matrix::new(&f, k, n, data).unwrap());
                let ks = rng.random_range(0..=c.k());
                let s = LinearCode::from_generator(&Matrix::from_rows(&f, n, &c.generator().row_vecs()[..ks]).unwrap());
                let a = c.relative_min_weight(&s, DEFAULT_BUDGET).unwrap();
                let b = c.support_min_weight(&s, DEFAULT_BUDGET).unwrap();
                assert_eq!(a.value, b.value);
                assert!(b.exact);
            }
        }
    }

    #[test]
    fn dim_intersection_examples() {
        let c = rs_4_3();
        assert_eq!(c.dim_intersection(&c).unwrap(), 3);
        assert_eq!(c.dim_intersection(&c.dual()).unwrap(), c.hull(false).unwrap().k());
        let f = gf(4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let mk = |rng: &mut ChaCha8Rng, k: usize| {
                let data = (0..k * 6).map(|_| Fe(rng.random_range(0..4))).collect();
                LinearCode::from_generator(&Matrix::new(&f, k, 6, data).unwrap())
            };
            let (a, b) = (mk(&mut rng, 3), mk(&mut rng, 4));
            let count = all_words(&a).iter().filter(|w| b.contains(w)).count();
            let log = (count as f64).log(4.0).round() as usize;
            assert_eq!(4usize.pow(log as u32), count);
            assert_eq!(a.dim_intersection(&b).unwrap(), log);
        }
    }

    fn arb_code(q: u32, n: usize) -> impl Strategy<Value = LinearCode> {
        (0..=n).prop_flat_map(move |k| {
            proptest::collection::vec(0..q, k * n).prop_map(move |v| {
                let f = gf(q);
                LinearCode::from_generator(&Matrix::new(&f, k, n, v.into_iter().map(Fe).collect()).unwrap())
            })
        })
    }

    proptest! {
        #[test]
        fn dual_dimension(c in prop::sample::select(vec![2u32, 3, 4, 5, 7, 9]).prop_flat_map(|q| arb_code(q, 6))) {
            prop_assert_eq!(c.dual().k(), c.n() - c.k());
            prop_assert_eq!(c.dual().dual(), c);
        }

        #[test]
        fn hermitian_identities(c in prop::sample::select(vec![4u32, 9, 16]).prop_flat_map(|q| arb_code(q, 5))) {
            let q = c.field().sqrt_order().unwrap() as u64;
            let hd = c.hermitian_dual().unwrap();
            prop_assert_eq!(&hd, &c.dual().power_code(q).unwrap());
            prop_assert_eq!(hd.k(), c.n() - c.k());
            let hull = c.hull(true).unwrap().k();
            prop_assert_eq!(hull, c.dual().dim_intersection(&c.power_code(q).unwrap()).unwrap());
        }

        #[test]
        fn min_weight_monotone(c in prop::sample::select(vec![2u32, 3, 4]).prop_flat_map(|q| arb_code(q, 6)),
                               extra in proptest::collection::vec(0u32..2, 6)) {
            let f = c.field().clone();
            let row: Vec<Fe> = extra.into_iter().map(Fe).collect();
            let bigger = LinearCode::from_generator(&c.generator().vstack(&Matrix::from_rows(&f, 6, &[row]).unwrap()).unwrap());
            let (a, b) = (c.min_weight(DEFAULT_BUDGET), bigger.min_weight(DEFAULT_BUDGET));
            prop_assert!(b.value <= a.value);
        }

        #[test]
        fn basis_subset_lemma(q in prop::sample::select(vec![2u32, 3, 4, 5]), n in 1usize..=8,
                              seed in any::<u64>(), m1 in any::<u8>(), m2 in any::<u8>()) {
            let f = gf(q);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let basis = loop {
                let data = (0..n * n).map(|_| Fe(rng.random_range(0..q))).collect();
                let m = Matrix::new(&f, n, n, data).unwrap();
                if m.rank() == n {
                    break m.row_vecs();
                }
            };
            let pick = |mask: u8| -> Vec<Vec<Fe>> {
                (0..n).filter(|i| mask >> i & 1 == 1).map(|i| basis[i].clone()).collect()
            };
            let span = |rows: Vec<Vec<Fe>>| LinearCode::from_generator(&Matrix::from_rows(&f, n, &rows).unwrap());
            let common = (0..n).filter(|i| (m1 & m2) >> i & 1 == 1).count();
            prop_assert_eq!(span(pick(m1)).dim_intersection(&span(pick(m2))).unwrap(), common);
        }
    }
}
