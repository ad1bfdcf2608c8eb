//! Function fields of three curve families and their Riemann–Roch spaces.
//!
//! * the projective line (genus 0),
//! * the Hermitian curve `y^q + y = x^(q+1)` over GF(q²) (genus `q(q-1)/2`),
//! * elliptic curves `y² + y = x³ + bx + c` in characteristic 2 (genus 1).
//!
//! Only rational places are modelled. Riemann–Roch spaces are computed for
//! divisors supported on the two distinguished places `P0` and `P∞`.
//!
//! ```
//! use quenta::funcfield::Curve;
//!
//! let herm = Curve::hermitian(2).unwrap();
//! assert_eq!(herm.places().len(), 9);
//! let basis = herm.rr_basis(&herm.two_point(1, 1)).unwrap();
//! let shown: Vec<String> = basis.iter().map(|f| f.to_string()).collect();
//! assert_eq!(shown, ["1", "x^2*y^-1"]);
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::galois::{Fe, Field};
use crate::matspace::Matrix;
use crate::series::Laurent;

/// A rational place. Affine places sort before the place at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    /// `y` is `None` on the projective line.
    Affine { x: Fe, y: Option<Fe> },
    Infinity,
}

impl Place {
    pub fn x(&self) -> Option<Fe> {
        match self {
            Place::Affine { x, .. } => Some(*x),
            Place::Infinity => None,
        }
    }

    /// Key used in JSON output.
    pub fn key(&self) -> String {
        match self {
            Place::Affine { x, y: Some(y) } => format!("{},{}", x.0, y.0),
            Place::Affine { x, y: None } => format!("{}", x.0),
            Place::Infinity => "inf".into(),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => f.write_str("Pinf"),
            _ => write!(f, "({})", self.key()),
        }
    }
}

/// A divisor supported on rational places; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Divisor(BTreeMap<Place, i64>);

impl Divisor {
    pub fn new() -> Divisor {
        Divisor::default()
    }

    pub fn single(p: Place, a: i64) -> Divisor {
        Divisor::from_iter([(p, a)])
    }

    /// `1·P` for every listed place.
    pub fn sum_of(places: &[Place]) -> Divisor {
        Divisor::from_iter(places.iter().map(|&p| (p, 1)))
    }

    pub fn coeff(&self, p: &Place) -> i64 {
        self.0.get(p).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (&Place, &i64)> {
        self.0.iter()
    }

    pub fn degree(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn combine(&self, other: &Divisor, op: impl Fn(i64, i64) -> i64) -> Divisor {
        let places: std::collections::BTreeSet<&Place> = self.0.keys().chain(other.0.keys()).collect();
        Divisor::from_iter(places.into_iter().map(|p| (*p, op(self.coeff(p), other.coeff(p)))))
    }

    /// Coefficientwise minimum.
    pub fn meet(&self, other: &Divisor) -> Divisor {
        self.combine(other, i64::min)
    }

    /// Coefficientwise maximum.
    pub fn join(&self, other: &Divisor) -> Divisor {
        self.combine(other, i64::max)
    }

    /// True when every coefficient is at least the other's.
    pub fn dominates(&self, other: &Divisor) -> bool {
        (self - other).0.values().all(|&a| a >= 0)
    }
}

impl FromIterator<(Place, i64)> for Divisor {
    fn from_iter<I: IntoIterator<Item = (Place, i64)>>(iter: I) -> Divisor {
        let mut m = BTreeMap::new();
        for (p, a) in iter {
            *m.entry(p).or_insert(0) += a;
        }
        m.retain(|_, a| *a != 0);
        Divisor(m)
    }
}

impl Add for &Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        self.combine(rhs, |a, b| a + b)
    }
}

impl Sub for &Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &Divisor) -> Divisor {
        self.combine(rhs, |a, b| a - b)
    }
}

impl Neg for &Divisor {
    type Output = Divisor;
    fn neg(self) -> Divisor {
        Divisor(self.0.iter().map(|(p, a)| (*p, -a)).collect())
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.0.iter().map(|(p, a)| format!("{a}*{p}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for Divisor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(self.0.iter().map(|(p, a)| (p.key(), *a)))
    }
}

/// `D - G + (η)`.
pub fn dual_divisor(g: &Divisor, d: &Divisor, eta: &Divisor) -> Divisor {
    &(d - g) + eta
}

/// A function `sum c·x^i·y^j / (x - x0)^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Function {
    terms: Vec<(i64, i64, Fe)>,
    den: Option<(Fe, u32)>,
}

impl Function {
    pub fn constant(a: Fe) -> Function {
        Function::from_terms(vec![(0, 0, a)], None)
    }

    pub fn monomial(i: i64, j: i64) -> Function {
        Function::from_terms(vec![(0, 0, Fe::ONE)], None).times_monomial(i, j)
    }

    /// `x - a`.
    pub fn x_minus(f: &Field, a: Fe) -> Function {
        Function::from_terms(vec![(1, 0, Fe::ONE), (0, 0, f.neg(a))], None)
    }

    pub fn from_terms(terms: Vec<(i64, i64, Fe)>, den: Option<(Fe, u32)>) -> Function {
        let mut m: BTreeMap<(i64, i64), Fe> = BTreeMap::new();
        for (i, j, c) in terms {
            if c.is_zero() {
                continue;
            }
            // Addition of coefficients needs the field; callers pass merged terms.
            assert!(m.insert((i, j), c).is_none(), "duplicate monomial");
        }
        Function {
            terms: m.into_iter().map(|((i, j), c)| (i, j, c)).collect(),
            den: den.filter(|d| d.1 > 0),
        }
    }

    fn times_monomial(mut self, di: i64, dj: i64) -> Function {
        for t in &mut self.terms {
            t.0 += di;
            t.1 += dj;
        }
        self
    }

    /// Terms `(i, j, c)` of the numerator.
    pub fn terms(&self) -> &[(i64, i64, Fe)] {
        &self.terms
    }

    /// Denominator `(x0, e)` meaning `(x - x0)^e`.
    pub fn denominator(&self) -> Option<(Fe, u32)> {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `sum coeffs[k] · fs[k]`; all functions must share the same denominator.
    pub fn combination(field: &Field, fs: &[Function], coeffs: &[Fe]) -> Function {
        let den = fs.first().and_then(|f| f.den);
        let mut m: BTreeMap<(i64, i64), Fe> = BTreeMap::new();
        for (f, &a) in fs.iter().zip(coeffs) {
            assert_eq!(f.den, den, "combination needs a common denominator");
            for &(i, j, c) in &f.terms {
                let e = m.entry((i, j)).or_insert(Fe::ZERO);
                *e = field.add(*e, field.mul(a, c));
            }
        }
        Function::from_terms(m.into_iter().map(|((i, j), c)| (i, j, c)).collect(), den)
    }
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mono = |i: i64, j: i64, c: Fe| {
            let mut parts = Vec::new();
            if c != Fe::ONE || (i == 0 && j == 0) {
                parts.push(c.0.to_string());
            }
            for (v, e) in [("x", i), ("y", j)] {
                match e {
                    0 => {}
                    1 => parts.push(v.to_string()),
                    _ => parts.push(format!("{v}^{e}")),
                }
            }
            parts.join("*")
        };
        let num = if self.terms.is_empty() {
            "0".to_string()
        } else {
            let ts: Vec<String> = self.terms.iter().rev().map(|&(i, j, c)| mono(i, j, c)).collect();
            ts.join(" + ")
        };
        match self.den {
            None => f.write_str(&num),
            Some((x0, e)) => write!(f, "({num})/(x - {})^{e}", x0.0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveKind {
    Rational,
    /// `y^q + y = x^(q+1)` over GF(q²).
    Hermitian { q: u32 },
    /// `y² + y = x³ + bx + c` over GF(2^s).
    Elliptic { b: Fe, c: Fe },
}

struct CurveInner {
    kind: CurveKind,
    field: Field,
    places: Vec<Place>,
    p0: Place,
}

/// A curve together with its enumerated rational places. Cheap to clone.
#[derive(Clone)]
pub struct Curve(Arc<CurveInner>);

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {:?}", self.describe(), self.0.field)
    }
}

impl PartialEq for Curve {
    fn eq(&self, other: &Self) -> bool {
        self.0.kind == other.0.kind && self.0.field == other.0.field && self.0.p0 == other.0.p0
    }
}

impl Eq for Curve {}

fn solve_pairs(field: &Field, lhs: impl Fn(Fe) -> Fe, rhs: impl Fn(Fe) -> Fe) -> Vec<Place> {
    let mut by_value: HashMap<Fe, Vec<Fe>> = HashMap::new();
    for y in field.elements() {
        by_value.entry(lhs(y)).or_default().push(y);
    }
    let mut out = Vec::new();
    for x in field.elements() {
        if let Some(ys) = by_value.get(&rhs(x)) {
            out.extend(ys.iter().map(|&y| Place::Affine { x, y: Some(y) }));
        }
    }
    out.push(Place::Infinity);
    out
}

impl Curve {
    /// The projective line over `field`; `P0` is the zero of `x`.
    pub fn rational(field: &Field) -> Curve {
        let mut places: Vec<Place> = field.elements().map(|x| Place::Affine { x, y: None }).collect();
        places.push(Place::Infinity);
        Curve(Arc::new(CurveInner {
            kind: CurveKind::Rational,
            field: field.clone(),
            places,
            p0: Place::Affine { x: Fe::ZERO, y: None },
        }))
    }

    /// The Hermitian curve over GF(q²); `P0` is the origin.
    pub fn hermitian(q: u32) -> Result<Curve> {
        let field = Field::with_order(q * q)?;
        let f = field.clone();
        let places = solve_pairs(
            &field,
            |y| f.add(f.pow(y, q as u64), y),
            |x| f.pow(x, q as u64 + 1),
        );
        Ok(Curve(Arc::new(CurveInner {
            kind: CurveKind::Hermitian { q },
            field,
            places,
            p0: Place::Affine {
                x: Fe::ZERO,
                y: Some(Fe::ZERO),
            },
        })))
    }

    /// `y² + y = x³ + bx + c` over a field of characteristic 2; `P0` is the
    /// first affine place in enumeration order.
    pub fn elliptic(field: &Field, b: Fe, c: Fe) -> Result<Curve> {
        if field.characteristic() != 2 {
            return Err(Error::InvalidArgument(format!(
                "elliptic backend needs characteristic 2, got {}",
                field.characteristic()
            )));
        }
        for v in [b, c] {
            field.elem(v.0)?;
        }
        let f = field.clone();
        let places = solve_pairs(
            field,
            |y| f.add(f.mul(y, y), y),
            |x| f.add(f.add(f.pow(x, 3), f.mul(b, x)), c),
        );
        let p0 = places[0];
        if p0 == Place::Infinity {
            return Err(Error::InvalidPlaces("the curve has no affine rational place".into()));
        }
        Ok(Curve(Arc::new(CurveInner {
            kind: CurveKind::Elliptic { b, c },
            field: field.clone(),
            places,
            p0,
        })))
    }

    /// Same curve with another affine place as `P0` (elliptic backend only).
    pub fn with_p0(&self, p0: Place) -> Result<Curve> {
        if !matches!(self.0.kind, CurveKind::Elliptic { .. }) {
            return Err(Error::InvalidArgument("P0 is fixed for this backend".into()));
        }
        if p0 == Place::Infinity || !self.0.places.contains(&p0) {
            return Err(Error::InvalidPlaces(format!("{p0} is not an affine rational place")));
        }
        Ok(Curve(Arc::new(CurveInner {
            kind: self.0.kind,
            field: self.0.field.clone(),
            places: self.0.places.clone(),
            p0,
        })))
    }

    pub fn kind(&self) -> CurveKind {
        self.0.kind
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn genus(&self) -> i64 {
        match self.0.kind {
            CurveKind::Rational => 0,
            CurveKind::Hermitian { q } => (q as i64) * (q as i64 - 1) / 2,
            CurveKind::Elliptic { .. } => 1,
        }
    }

    /// Short human-readable description.
    pub fn describe(&self) -> String {
        match self.0.kind {
            CurveKind::Rational => "projective line".into(),
            CurveKind::Hermitian { q } => format!("y^{q} + y = x^{}", q + 1),
            CurveKind::Elliptic { b, c } => format!("y^2 + y = x^3 + {}*x + {}", b.0, c.0),
        }
    }

    /// All rational places: affine ones by ascending `(x, y)`, then `P∞`.
    pub fn places(&self) -> &[Place] {
        &self.0.places
    }

    pub fn affine_places(&self) -> Vec<Place> {
        self.0.places.iter().copied().filter(|p| *p != Place::Infinity).collect()
    }

    pub fn p0(&self) -> Place {
        self.0.p0
    }

    /// `a1·P0 + a2·P∞`.
    pub fn two_point(&self, a1: i64, a2: i64) -> Divisor {
        Divisor::from_iter([(self.0.p0, a1), (Place::Infinity, a2)])
    }

    /// Coefficients `(a1, a2)` of a divisor supported on `{P0, P∞}`.
    pub fn two_point_coeffs(&self, g: &Divisor) -> Result<(i64, i64)> {
        if let Some((p, _)) = g
            .support()
            .find(|(p, _)| **p != self.0.p0 && **p != Place::Infinity)
        {
            return Err(Error::UnsupportedDivisor(format!(
                "{p} lies outside {{P0, Pinf}} for {}",
                self.describe()
            )));
        }
        Ok((g.coeff(&self.0.p0), g.coeff(&Place::Infinity)))
    }

    /// Renders a two-point divisor as `a1*P0 + a2*Pinf`.
    pub fn format_divisor(&self, g: &Divisor) -> String {
        match self.two_point_coeffs(g) {
            Ok((a1, a2)) => format!("{a1}*P0 + {a2}*Pinf"),
            Err(_) => g.to_string(),
        }
    }

    /// Affine places other than `P0`: the evaluation divisor of the Euclidean families.
    pub fn standard_d(&self) -> Vec<Place> {
        self.affine_places().into_iter().filter(|p| *p != self.0.p0).collect()
    }

    fn sorted(places: &[Place]) -> Vec<Place> {
        let mut v = places.to_vec();
        v.sort();
        v
    }

    /// Divisor of the Weil differential used for duals, for a standard evaluation divisor.
    pub fn eta_divisor(&self, d: &[Place]) -> Result<Divisor> {
        let dd = Divisor::sum_of(d);
        let p0 = Divisor::single(self.0.p0, 1);
        let inf = |a: i64| Divisor::single(Place::Infinity, a);
        let given = Curve::sorted(d);
        let q = self.0.field.order() as i64;
        if given == Curve::sorted(&self.standard_d()) {
            let top = match self.0.kind {
                CurveKind::Rational => q - 2,
                CurveKind::Hermitian { q } => {
                    let q = q as i64;
                    q * q * q + q * (q - 1) - 2
                }
                CurveKind::Elliptic { .. } => self.0.places.len() as i64 - 1,
            };
            return Ok(&(&inf(top) - &p0) - &dd);
        }
        if self.0.kind == CurveKind::Rational && given == self.affine_places() {
            return Ok(&inf(q - 2) - &dd);
        }
        Err(Error::NonstandardDivisor(format!(
            "{} places given for {}",
            d.len(),
            self.describe()
        )))
    }

    /// Column multipliers `1/h'(x(P))` with `h` the product of `x - α` over the
    /// affine x-coordinates. The dual of `C_L(D,G)` is `C_L(D,G⊥)` scaled by these.
    pub fn eta_weights(&self, d: &[Place]) -> Result<Vec<Fe>> {
        self.eta_divisor(d)?;
        let f = &self.0.field;
        let mut xs: Vec<Fe> = self.affine_places().iter().filter_map(|p| p.x()).collect();
        xs.dedup();
        d.iter()
            .map(|p| {
                let a = p.x().expect("affine");
                let deriv = xs
                    .iter()
                    .filter(|&&b| b != a)
                    .fold(Fe::ONE, |acc, &b| f.mul(acc, f.sub(a, b)));
                f.inv(deriv)
            })
            .collect()
    }

    /// Pole order at `P∞` of `x` and `y`.
    fn infinity_weights(&self) -> (i64, i64) {
        match self.0.kind {
            CurveKind::Rational => (1, 0),
            CurveKind::Hermitian { q } => (q as i64, q as i64 + 1),
            CurveKind::Elliptic { .. } => (2, 3),
        }
    }

    /// Basis of `L(G)` for `G = a1·P0 + a2·P∞`.
    pub fn rr_basis(&self, g: &Divisor) -> Result<Vec<Function>> {
        let (a1, a2) = self.two_point_coeffs(g)?;
        let deg = a1 + a2;
        let basis = if deg < 0 {
            Vec::new()
        } else {
            match self.0.kind {
                CurveKind::Rational => (-a1..=a2).map(|i| Function::monomial(i, 0)).collect(),
                CurveKind::Hermitian { q } => hermitian_basis(q as i64, a1, a2),
                CurveKind::Elliptic { .. } => self.elliptic_basis(a1, a2)?,
            }
        };
        let gen = self.genus();
        let ok = if deg < 0 {
            basis.is_empty()
        } else if deg > 2 * gen - 2 {
            basis.len() as i64 == deg + 1 - gen
        } else {
            true
        };
        if !ok {
            return Err(Error::Assertion(format!(
                "L({}) on {} has a basis of size {}, expected {}",
                self.format_divisor(g),
                self.describe(),
                basis.len(),
                (deg + 1 - gen).max(0)
            )));
        }
        Ok(basis)
    }

    /// `ℓ(G)`.
    pub fn ell(&self, g: &Divisor) -> Result<usize> {
        Ok(self.rr_basis(g)?.len())
    }

    fn elliptic_basis(&self, a1: i64, a2: i64) -> Result<Vec<Function>> {
        let f = &self.0.field;
        let Place::Affine { x: x0, y: Some(y0) } = self.0.p0 else {
            unreachable!("elliptic P0 is affine")
        };
        // Vanishing conditions are imposed at `at`, then the kernel is taken.
        let (m, at, order, den) = if a1 >= 0 {
            let conj = Place::Affine {
                x: x0,
                y: Some(f.add(y0, Fe::ONE)),
            };
            (2 * a1 + a2, conj, a1, Some((x0, a1 as u32)))
        } else {
            (a2, self.0.p0, -a1, None)
        };
        if m < 0 {
            return Ok(Vec::new());
        }
        let monos: Vec<Function> = (0..=1)
            .flat_map(|j| (0..).take_while(move |i| 2 * i + 3 * j <= m).map(move |i| (i, j)))
            .map(|(i, j)| Function::monomial(i, j))
            .collect();
        let combos: Vec<Vec<Fe>> = if order == 0 {
            (0..monos.len())
                .map(|i| (0..monos.len()).map(|j| if i == j { Fe::ONE } else { Fe::ZERO }).collect())
                .collect()
        } else {
            let rows: Vec<Vec<Fe>> = monos
                .iter()
                .map(|g| self.local_expansion(g, &at, order as usize))
                .collect::<Result<_>>()?;
            let cons = Matrix::from_rows(f, order as usize, &rows)?;
            cons.transpose().kernel().basis().row_vecs()
        };
        Ok(combos
            .iter()
            .map(|lam| {
                let g = Function::combination(f, &monos, lam);
                Function { den: den.filter(|d| d.1 > 0), ..g }
            })
            .collect())
    }

    /// Value of `f` at the affine place `p`.
    pub fn evaluate(&self, f: &Function, p: &Place) -> Result<Fe> {
        let field = &self.0.field;
        let Place::Affine { x, y } = *p else {
            if f.den.is_none() && f.terms.iter().all(|&(i, j, _)| i == 0 && j == 0) {
                return Ok(f.terms.first().map_or(Fe::ZERO, |t| t.2));
            }
            return Err(Error::Ramified("Pinf".into()));
        };
        let y = y.unwrap_or(Fe::ZERO);
        let singular = f.terms.iter().any(|&(i, j, _)| (i < 0 && x.is_zero()) || (j < 0 && y.is_zero()))
            || f.den.is_some_and(|(x0, _)| x0 == x);
        if !singular {
            let mut acc = Fe::ZERO;
            for &(i, j, c) in &f.terms {
                let v = field.mul(c, field.mul(field.powi(x, i)?, field.powi(y, j)?));
                acc = field.add(acc, v);
            }
            if let Some((x0, e)) = f.den {
                acc = field.mul(acc, field.powi(field.sub(x, x0), -(e as i64))?);
            }
            return Ok(acc);
        }
        let s = self.expand(f, p, 1)?;
        Ok(s.coeff(0))
    }

    /// First `order` coefficients of the expansion of `f` in `t = x - x(p)`.
    pub fn local_expansion(&self, f: &Function, p: &Place, order: usize) -> Result<Vec<Fe>> {
        let s = self.expand(f, p, order as i64)?;
        Ok((0..order as i64).map(|e| s.coeff(e)).collect())
    }

    /// Expansion of `f` at `p`, known at least up to `t^upto`; errors on a pole.
    fn expand(&self, f: &Function, p: &Place, upto: i64) -> Result<Laurent> {
        let Place::Affine { x, y } = *p else {
            return Err(Error::Ramified("Pinf".into()));
        };
        let mut margin = 8i64;
        loop {
            let prec = upto + margin;
            let s = self.expand_with(f, x, y, prec)?;
            if s.prec() >= upto.max(1) {
                if let Some(e) = (s.val..0).find(|&e| !s.coeff(e).is_zero()) {
                    return Err(Error::Pole(format!("{p}, order {}", -e)));
                }
                return Ok(s);
            }
            margin *= 2;
            if margin > 1 << 12 {
                return Err(Error::Assertion(format!("expansion of {f} at {p} did not converge")));
            }
        }
    }

    fn y_series(&self, x: Fe, y: Fe, prec: i64) -> Laurent {
        let f = &self.0.field;
        let xs = Laurent::poly(&[x, Fe::ONE], prec);
        // With y = y(p) + Δ the curve equation becomes Δ^e + Δ = s(t).
        let (s, e) = match self.0.kind {
            CurveKind::Hermitian { q } => {
                let top = xs.powi(f, q as i64 + 1, prec).expect("nonnegative power");
                let c = f.pow(x, q as u64 + 1);
                (top.add(f, &Laurent::constant(f.neg(c), prec)), q as i64)
            }
            CurveKind::Elliptic { b, c } => {
                let poly = [c, b, Fe::ZERO, Fe::ONE];
                let rhs = xs.compose_poly(f, &poly, prec);
                let at = f.add(f.add(f.pow(x, 3), f.mul(b, x)), c);
                (rhs.add(f, &Laurent::constant(f.neg(at), prec)), 2)
            }
            CurveKind::Rational => unreachable!("no y on the projective line"),
        };
        let mut delta = s.clone();
        for _ in 0..prec {
            let next = s.add(f, &delta.powi(f, e, prec).expect("nonnegative power").scale(f, f.neg(Fe::ONE)));
            if next == delta {
                break;
            }
            delta = next;
        }
        delta.add(f, &Laurent::constant(y, prec))
    }

    fn expand_with(&self, fun: &Function, x: Fe, y: Option<Fe>, prec: i64) -> Result<Laurent> {
        let f = &self.0.field;
        let xs = Laurent::poly(&[x, Fe::ONE], prec);
        let ys = match (self.0.kind, y) {
            (CurveKind::Rational, _) | (_, None) => None,
            (_, Some(y)) => Some(self.y_series(x, y, prec)),
        };
        let mut acc = Laurent::constant(Fe::ZERO, prec);
        for &(i, j, c) in &fun.terms {
            let mut t = xs.powi(f, i, prec)?;
            if j != 0 {
                let ys = ys.as_ref().ok_or(Error::InvalidArgument("y on the projective line".into()))?;
                t = t.mul(f, &ys.powi(f, j, prec)?);
            }
            acc = acc.add(f, &t.scale(f, c));
        }
        if let Some((x0, e)) = fun.den {
            let d = Laurent::poly(&[f.sub(x, x0), Fe::ONE], prec);
            acc = acc.mul(f, &d.powi(f, -(e as i64), prec)?);
        }
        Ok(acc)
    }

    /// Valuation of the monomial `x^i y^j` at `P∞`.
    pub fn infinity_valuation(&self, i: i64, j: i64) -> i64 {
        let (wx, wy) = self.infinity_weights();
        -(wx * i + wy * j)
    }
}

/// Monomials `x^i y^j` with `j` in a window of `q` consecutive values starting
/// at `-ceil(a1/(q+1))`, kept when both valuation conditions hold.
fn hermitian_basis(q: i64, a1: i64, a2: i64) -> Vec<Function> {
    let j0 = -(a1.div_euclid(q + 1) + i64::from(a1.rem_euclid(q + 1) != 0));
    let mut out = Vec::new();
    for j in j0..j0 + q {
        let mut i = 0;
        while q * i + (q + 1) * j <= a2 {
            if i + j * (q + 1) >= -a1 {
                out.push((q * i + (q + 1) * j, i, j));
            }
            i += 1;
        }
    }
    out.sort();
    out.into_iter().map(|(_, i, j)| Function::monomial(i, j)).collect()
}

/// The elliptic curves `y² + y = x³ + bx + c` over GF(2^s) with known place counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EllipticModel {
    /// `y² + y = x³`
    X3,
    /// `y² + y = x³ + x`
    X3PlusX,
    /// `y² + y = x³ + x + 1`
    X3PlusXPlus1,
    /// `y² + y = x³ + δx` with `Tr(δ) = 1`
    X3PlusDeltaX,
    /// `y² + y = x³ + δ` with `Tr(δ) = 1`
    X3PlusDelta,
}

impl EllipticModel {
    pub const ALL: [EllipticModel; 5] = [
        EllipticModel::X3,
        EllipticModel::X3PlusX,
        EllipticModel::X3PlusXPlus1,
        EllipticModel::X3PlusDeltaX,
        EllipticModel::X3PlusDelta,
    ];

    /// Short selector used on the command line: `x3`, `x3+x`, `x3+x+1`, `x3+dx`, `x3+d`.
    pub fn name(self) -> &'static str {
        match self {
            EllipticModel::X3 => "x3",
            EllipticModel::X3PlusX => "x3+x",
            EllipticModel::X3PlusXPlus1 => "x3+x+1",
            EllipticModel::X3PlusDeltaX => "x3+dx",
            EllipticModel::X3PlusDelta => "x3+d",
        }
    }

    pub fn parse(s: &str) -> Result<EllipticModel> {
        let key: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        EllipticModel::ALL
            .into_iter()
            .find(|m| m.name() == key)
            .ok_or_else(|| Error::Parse(format!("unknown elliptic model {s:?} (expected x3, x3+x, x3+x+1, x3+dx or x3+d)")))
    }

    /// Coefficients `(b, c)` over `field`. `δ` is the smallest element of trace 1.
    pub fn coefficients(self, field: &Field) -> (Fe, Fe) {
        let delta = || {
            field
                .elements()
                .find(|&a| field.trace(a) == Fe::ONE)
                .expect("the trace map is onto")
        };
        match self {
            EllipticModel::X3 => (Fe::ZERO, Fe::ZERO),
            EllipticModel::X3PlusX => (Fe::ONE, Fe::ZERO),
            EllipticModel::X3PlusXPlus1 => (Fe::ONE, Fe::ONE),
            EllipticModel::X3PlusDeltaX => (delta(), Fe::ZERO),
            EllipticModel::X3PlusDelta => (Fe::ZERO, delta()),
        }
    }

    /// Number of rational places over GF(2^s) by direct solution of the equation.
    ///
    /// Unlike [`EllipticModel::curve`] this also works when `P∞` is the only rational place.
    pub fn count_places(self, s: u32) -> Result<usize> {
        let field = Field::new(2, s)?;
        let (b, c) = self.coefficients(&field);
        let f = &field;
        Ok(solve_pairs(
            f,
            |y| f.add(f.mul(y, y), y),
            |x| f.add(f.add(f.pow(x, 3), f.mul(b, x)), c),
        )
        .len())
    }

    pub fn curve(self, s: u32) -> Result<Curve> {
        let field = Field::new(2, s)?;
        let (b, c) = self.coefficients(&field);
        Curve::elliptic(&field, b, c)
    }

    /// Tabulated number of rational places over GF(2^s), when the table covers `s`.
    ///
    /// For `y² + y = x³` the row "s ≡ 0 mod 2" is read as `s ≡ 2 mod 4`, since
    /// `s ≡ 0 mod 4` has its own row.
    pub fn expected_places(self, s: u32) -> Option<i64> {
        let q = 1i64 << s;
        let root_q = || 1i64 << (s / 2);
        let root_2q = || 1i64 << s.div_ceil(2);
        match self {
            EllipticModel::X3 => Some(match s % 4 {
                1 | 3 => q + 1,
                0 => q + 1 - 2 * root_q(),
                _ => q + 1 + 2 * root_q(),
            }),
            EllipticModel::X3PlusX | EllipticModel::X3PlusXPlus1 => {
                let sign = match s % 8 {
                    1 | 7 => 1,
                    3 | 5 => -1,
                    _ => return None,
                };
                let sign = if self == EllipticModel::X3PlusX { sign } else { -sign };
                Some(q + 1 + sign * root_2q())
            }
            EllipticModel::X3PlusDeltaX => (s % 2 == 0).then_some(q + 1),
            EllipticModel::X3PlusDelta => match s % 4 {
                0 => Some(q + 1 + 2 * root_q()),
                2 => Some(q + 1 - 2 * root_q()),
                _ => None,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> Field {
        Field::with_order(q).unwrap()
    }

    #[test]
    fn place_counts() {
        assert_eq!(Curve::rational(&gf(5)).places().len(), 6);
        for q in [2u32, 3, 4] {
            assert_eq!(Curve::hermitian(q).unwrap().places().len() as u32, q * q * q + 1);
        }
        let e = Curve::elliptic(&gf(8), Fe::ZERO, Fe::ZERO).unwrap();
        assert_eq!(e.places().len(), 9);
        assert_eq!(*e.places().last().unwrap(), Place::Infinity);
    }

    #[test]
    fn places_satisfy_equations() {
        let h = Curve::hermitian(3).unwrap();
        let f = h.field().clone();
        for p in h.affine_places() {
            let Place::Affine { x, y: Some(y) } = p else { panic!() };
            assert_eq!(f.add(f.pow(y, 3), y), f.pow(x, 4));
        }
        let mut sorted = h.places().to_vec();
        sorted.sort();
        assert_eq!(sorted, h.places());
    }

    #[test]
    fn divisor_lattice() {
        let c = Curve::rational(&gf(5));
        let a = c.two_point(2, 3);
        let b = c.two_point(1, 5);
        assert_eq!(a.meet(&b), c.two_point(1, 3));
        assert_eq!(a.join(&a), a);
        assert_eq!(a.meet(&b).degree() + a.join(&b).degree(), a.degree() + b.degree());
        assert_eq!(c.two_point(0, 3).coeff(&c.p0()), 0);
        assert_eq!(c.format_divisor(&c.two_point(-2, 2)), "-2*P0 + 2*Pinf");
    }

    #[test]
    fn rational_basis() {
        let c = Curve::rational(&gf(5));
        let b = c.rr_basis(&c.two_point(1, 2)).unwrap();
        let shown: Vec<String> = b.iter().map(|f| f.to_string()).collect();
        assert_eq!(shown, ["x^-1", "1", "x", "x^2"]);
        assert!(c.rr_basis(&c.two_point(-3, 1)).unwrap().is_empty());
        let f = Function::monomial(2, 0);
        assert_eq!(c.evaluate(&f, &Place::Affine { x: Fe(3), y: None }).unwrap(), Fe(4));
        let inv = Function::monomial(-1, 0);
        assert!(matches!(c.evaluate(&inv, &c.p0()), Err(Error::Pole(_))));
        let far = Divisor::single(Place::Affine { x: Fe(2), y: None }, 1);
        assert!(matches!(c.rr_basis(&far), Err(Error::UnsupportedDivisor(_))));
    }

    #[test]
    fn hermitian_two_point_example() {
        let h = Curve::hermitian(2).unwrap();
        let b = h.rr_basis(&h.two_point(1, 1)).unwrap();
        assert_eq!(b.len(), 2);
        // v_P0(x^2/y) = 2 - 3 = -1 and v_Pinf(x^2/y) = -(4 - 3) = -1.
        assert_eq!(h.infinity_valuation(2, -1), -1);
        for f in &b {
            for p in h.standard_d() {
                h.evaluate(f, &p).unwrap();
            }
            assert!(h.evaluate(f, &h.p0()).is_err() || f.terms()[0].0 == 0);
        }
    }

    #[test]
    fn elliptic_basis_at_infinity() {
        let e = Curve::elliptic(&gf(4), Fe::ZERO, Fe::ZERO).unwrap();
        let b = e.rr_basis(&e.two_point(0, 3)).unwrap();
        let shown: Vec<String> = b.iter().map(|f| f.to_string()).collect();
        assert_eq!(shown, ["1", "x", "y"]);
    }

    #[test]
    fn expansions() {
        let e = Curve::elliptic(&gf(2), Fe::ZERO, Fe::ZERO).unwrap();
        let f = e.field().clone();
        let one = Function::constant(Fe::ONE);
        for p in e.affine_places() {
            assert_eq!(e.local_expansion(&one, &p, 4).unwrap(), vec![Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ZERO]);
            let t = Function::x_minus(&f, p.x().unwrap());
            assert_eq!(e.local_expansion(&t, &p, 3).unwrap(), vec![Fe::ZERO, Fe::ONE, Fe::ZERO]);
        }
        // y at the places over x = 1: substitute the truncated series into y^2 + y + x^3.
        for p in e.affine_places().into_iter().filter(|p| p.x() == Some(Fe::ONE)) {
            let ys = e.local_expansion(&Function::monomial(0, 1), &p, 4).unwrap();
            let ys = Laurent::poly(&ys, 4);
            let xs = Laurent::poly(&[Fe::ONE, Fe::ONE], 4);
            let lhs = ys.mul(&f, &ys).add(&f, &ys);
            let rhs = xs.powi(&f, 3, 4).unwrap();
            assert_eq!(lhs.add(&f, &rhs), Laurent::poly(&[], 4));
        }
    }

    #[test]
    fn eta_divisors() {
        let r = Curve::rational(&gf(5));
        let eta = r.eta_divisor(&r.standard_d()).unwrap();
        assert_eq!(eta.coeff(&Place::Infinity), 3);
        assert_eq!(eta.coeff(&r.p0()), -1);
        assert_eq!(eta.degree(), -2);
        let h = Curve::hermitian(2).unwrap();
        let eta = h.eta_divisor(&h.standard_d()).unwrap();
        assert_eq!(eta.coeff(&Place::Infinity), 8);
        assert_eq!(eta.degree(), 2 * h.genus() - 2);
        let d = Divisor::sum_of(&h.standard_d());
        let g = h.two_point(1, 3);
        let gp = dual_divisor(&g, &d, &eta);
        assert_eq!(gp, h.two_point(-2, 5));
        assert_eq!(dual_divisor(&gp, &d, &eta), g);
        assert!(matches!(h.eta_divisor(&h.affine_places()), Err(Error::NonstandardDivisor(_))));
        let g = r.two_point(1, 1);
        let gp = dual_divisor(&g, &Divisor::sum_of(&r.standard_d()), &r.eta_divisor(&r.standard_d()).unwrap());
        assert_eq!(gp, r.two_point(-2, 2));
    }

    #[test]
    fn table1_place_counts() {
        let mut checked = 0;
        for s in 1..=6 {
            for m in EllipticModel::ALL {
                if let Some(e) = m.expected_places(s) {
                    assert_eq!(m.count_places(s).unwrap() as i64, e, "{} over GF(2^{s})", m.name());
                    checked += 1;
                }
            }
        }
        assert_eq!(checked, 18);
        assert_eq!(EllipticModel::X3.curve(3).unwrap().places().len(), 9);
        assert!(EllipticModel::X3PlusDelta.curve(2).is_err());
        assert_eq!(EllipticModel::parse("x3 + x + 1").unwrap(), EllipticModel::X3PlusXPlus1);
        assert!(EllipticModel::parse("x5").is_err());
    }
}
