//! Entanglement-assisted quantum (QUENTA) code parameters.
//!
//! Two constructions turn classical codes into `[[n, k, d; c]]_q` parameters:
//!
//! * Euclidean, from a pair `C1, C2` over GF(q): `c = rank(H1·H2ᵀ)`,
//!   `k = k1 + k2 - n + c`;
//! * Hermitian, from one code `C` over GF(q²): `c = rank(H·H*)`, `k = 2k - n + c`.
//!
//! Every construction computes `c` twice (rank and hull dimension) and refuses to
//! continue if the two disagree. Closed forms from the family theorems are
//! recorded next to the linear-algebra values in [`QuentaParams::closed_forms`];
//! the computed values are the ones reported.
//!
//! ```
//! use quenta::quenta::{rational_family, Provenance};
//!
//! let code = rational_family(5, 1, 0, 0, 1, 1 << 24).unwrap();
//! let p = &code.params;
//! assert_eq!((p.n, p.k, p.c), (4, 2, 2));
//! assert_eq!(p.d_exact.and_then(|d| d.finite()), Some(3));
//! assert_eq!(p.d_provenance, Provenance::Enumerated);
//! assert!(p.flags.mds && p.flags.maximal_entanglement);
//! assert_eq!(p.to_string(), "[[4,2,3;2]]_5");
//! ```

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::agcode::AgCode;
use crate::error::{hypothesis, Error, Result};
use crate::funcfield::{dual_divisor, Curve, CurveKind, Divisor, Place};
use crate::lincode::{weight, Distance, LinearCode};

pub const GENERAL_AG: &str = "Euclidean construction from AG codes";
pub const RATIONAL: &str = "rational family";
pub const HERMITIAN_CURVE: &str = "Hermitian curve family";
pub const ELLIPTIC: &str = "elliptic family";
pub const HERMITIAN_RS: &str = "Hermitian construction on the rational function field";

/// How the reported exact distance was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Every codeword of the relevant sets was visited.
    Enumerated,
    /// Exhaustive search over vanishing patterns (see [`LinearCode::support_min_weight`]).
    ZeroPattern,
    /// The lower bound equals the quantum Singleton bound.
    Squeeze,
    /// A codeword of the lower-bound weight was exhibited.
    Witness,
    /// Only a lower bound is known.
    BoundOnly,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Enumerated => "enumerated",
            Provenance::ZeroPattern => "zero-pattern",
            Provenance::Squeeze => "squeeze",
            Provenance::Witness => "witness",
            Provenance::BoundOnly => "bound-only",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub maximal_entanglement: bool,
    pub mds: bool,
    pub almost_mds: bool,
    /// Both distance sets are empty, so `d` is the infinite sentinel.
    pub degenerate: bool,
}

/// A closed-form prediction next to the value found by linear algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedForm {
    pub source: &'static str,
    pub quantity: &'static str,
    pub formula: i64,
    pub computed: i64,
}

impl ClosedForm {
    pub fn matches(&self) -> bool {
        self.formula == self.computed
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuentaParams {
    /// Size of the quantum alphabet.
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub c: usize,
    /// Certified lower bound on `d`.
    pub d_designed: usize,
    pub d_exact: Option<Distance>,
    pub d_provenance: Provenance,
    pub flags: Flags,
    /// `qsb(n, k, c) - d`, when `d` is known.
    pub singleton_defect: Option<i64>,
    /// `n - k - c`.
    pub entanglement_defect: usize,
    pub construction: &'static str,
    pub inputs: BTreeMap<String, Value>,
    pub closed_forms: Vec<ClosedForm>,
    pub notes: Vec<String>,
}

impl QuentaParams {
    pub fn mismatches(&self) -> impl Iterator<Item = &ClosedForm> {
        self.closed_forms.iter().filter(|c| !c.matches())
    }

    /// `d` as printed: the exact value, or `≥` the lower bound.
    pub fn d_text(&self) -> String {
        match self.d_exact {
            Some(d) => d.to_string(),
            None => format!("≥{}", self.d_designed),
        }
    }
}

impl fmt::Display for QuentaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{},{};{}]]_{}", self.n, self.k, self.d_text(), self.c, self.q)
    }
}

/// Parameters together with the classical codes they came from.
#[derive(Clone, Debug)]
pub struct QuentaCode {
    pub params: QuentaParams,
    /// `[C1, C2]` for the Euclidean construction, `[C]` for the Hermitian one.
    pub classical: Vec<LinearCode>,
    /// Pairs `(code, excluded subcode)`; `d` is the least weight over all differences.
    pub distance_sets: Vec<(LinearCode, LinearCode)>,
}

impl QuentaCode {
    /// Looks for a codeword in the distance sets whose weight equals the lower
    /// bound; on success `d` becomes exact with provenance [`Provenance::Witness`].
    pub fn certify_by_witness<R: Rng + ?Sized>(&mut self, rounds: usize, rng: &mut R) -> Result<bool> {
        if self.params.d_exact.is_some() {
            return Ok(false);
        }
        let target = self.params.d_designed;
        for (code, sub) in &self.distance_sets {
            if let Some(w) = code.find_low_weight(sub, target, rounds, rng)? {
                if weight(&w) < target {
                    return Err(Error::Assertion(format!(
                        "a codeword of weight {} lies below the certified bound {target}",
                        weight(&w)
                    )));
                }
                self.params.d_exact = Some(Distance::Finite(target));
                self.params.d_provenance = Provenance::Witness;
                self.params = classify(self.params.clone());
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Quantum Singleton bound `⌊(n - k + c)/2⌋ + 1`.
pub fn qsb(n: usize, k: usize, c: usize) -> i64 {
    (n as i64 - k as i64 + c as i64).div_euclid(2) + 1
}

/// Fills in flags and defects from `n, k, c` and the distance fields.
pub fn classify(mut p: QuentaParams) -> QuentaParams {
    let bound = qsb(p.n, p.k, p.c);
    p.entanglement_defect = p.n.saturating_sub(p.k + p.c);
    p.flags.maximal_entanglement = p.c + p.k == p.n;
    p.flags.degenerate = p.d_exact == Some(Distance::Infinite);
    p.singleton_defect = match p.d_exact {
        Some(Distance::Finite(d)) => Some(bound - d as i64),
        _ => None,
    };
    p.flags.mds = p.singleton_defect == Some(0);
    p.flags.almost_mds = p.singleton_defect == Some(1);
    p
}

fn zero_pattern_budget(budget: u64, k: usize) -> u64 {
    (budget / (16 * (k as u64 * k as u64 + 1))).max(1)
}

/// Minimum weight over the union of the sets `code \ sub`.
///
/// Tried in order: enumeration within `budget`, the Singleton squeeze on the
/// lower bound `designed`, then a zero-pattern search.
fn certify(
    sets: &[(LinearCode, LinearCode)],
    designed: usize,
    bound: i64,
    budget: u64,
) -> Result<(Option<Distance>, Provenance, usize)> {
    let mut found = Vec::new();
    for (code, sub) in sets {
        let r = code.relative_min_weight(sub, budget)?;
        if !r.exact {
            break;
        }
        found.push(r.value);
    }
    if found.len() == sets.len() {
        return Ok((found.into_iter().min(), Provenance::Enumerated, designed));
    }
    if designed as i64 == bound {
        return Ok((Some(Distance::Finite(designed)), Provenance::Squeeze, designed));
    }
    let mut exact: Vec<Distance> = Vec::new();
    let mut lower: Option<usize> = None;
    for (code, sub) in sets {
        let z = code.support_min_weight(sub, zero_pattern_budget(budget, code.k()))?;
        if z.exact {
            exact.push(z.value);
        } else {
            let w = z.value.finite().unwrap_or(1);
            lower = Some(lower.map_or(w, |l| l.min(w)));
        }
    }
    let best = exact.into_iter().min();
    Ok(match (best, lower) {
        (Some(b), None) => (Some(b), Provenance::ZeroPattern, designed),
        (Some(b), Some(w)) if b <= Distance::Finite(w) => (Some(b), Provenance::ZeroPattern, designed),
        (Some(Distance::Finite(b)), Some(w)) => (None, Provenance::BoundOnly, designed.max(b.min(w))),
        (_, Some(w)) => (None, Provenance::BoundOnly, designed.max(w)),
        (None, None) => unreachable!("at least one distance set"),
    })
}

fn finish(
    q: u32,
    (n, k, c): (usize, usize, usize),
    designed: usize,
    sets: &[(LinearCode, LinearCode)],
    budget: u64,
    construction: &'static str,
) -> Result<QuentaParams> {
    let mut notes = Vec::new();
    let bound = qsb(n, k, c);
    let designed = designed.max(1);
    let (mut d_exact, mut d_provenance, lower) = certify(sets, designed, bound, budget)?;
    if d_exact.is_none() && lower as i64 == bound {
        d_exact = Some(Distance::Finite(lower));
        d_provenance = Provenance::Squeeze;
    }
    match d_exact {
        Some(Distance::Finite(v)) if v as i64 > bound => {
            notes.push(format!("d = {v} exceeds the quantum Singleton bound {bound}"))
        }
        None if lower as i64 > bound => {
            notes.push(format!("lower bound {lower} exceeds the quantum Singleton bound {bound}"))
        }
        _ => {}
    }
    Ok(classify(QuentaParams {
        q,
        n,
        k,
        c,
        d_designed: lower,
        d_exact,
        d_provenance,
        flags: Flags::default(),
        singleton_defect: None,
        entanglement_defect: 0,
        construction,
        inputs: BTreeMap::new(),
        closed_forms: Vec::new(),
        notes,
    }))
}

fn euclidean_inner(c1: &LinearCode, c2: &LinearCode, designed: usize, budget: u64) -> Result<QuentaCode> {
    if c1.field() != c2.field() {
        return Err(Error::FieldMismatch);
    }
    if c1.n() != c2.n() {
        return Err(Error::DimensionMismatch(format!("lengths {} and {}", c1.n(), c2.n())));
    }
    let n = c1.n();
    let c_rank = c1.parity_check().matmul(&c2.parity_check().transpose())?.rank();
    let d1 = c1.dual();
    let d2 = c2.dual();
    let bridge = d1.intersect(c2)?;
    let c_hull = d1.k() - bridge.k();
    if c_rank != c_hull {
        return Err(Error::Assertion(format!(
            "rank(H1·H2ᵀ) = {c_rank} but dim C1⊥ - dim(C1⊥ ∩ C2) = {c_hull}"
        )));
    }
    let c = c_rank;
    let k = (c1.k() + c2.k() + c)
        .checked_sub(n)
        .ok_or_else(|| Error::Assertion("negative quantum dimension".into()))?;
    let sets = vec![(c1.clone(), c1.intersect(&d2)?), (c2.clone(), bridge)];
    let params = finish(c1.field().order(), (n, k, c), designed, &sets, budget, "euclidean")?;
    Ok(QuentaCode {
        params,
        classical: vec![c1.clone(), c2.clone()],
        distance_sets: sets,
    })
}

/// Euclidean construction from `C1, C2` over the same field.
pub fn euclidean_construct(c1: &LinearCode, c2: &LinearCode, budget: u64) -> Result<QuentaCode> {
    euclidean_inner(c1, c2, 1, budget)
}

fn hermitian_inner(code: &LinearCode, designed: usize, budget: u64) -> Result<QuentaCode> {
    let f = code.field().clone();
    let q = f.sqrt_order().ok_or(Error::NonSquareOrder(f.order()))?;
    let n = code.n();
    let h = code.parity_check();
    let h_star = h.transpose().map(|x| f.pow(x, q as u64));
    let c_rank = h.matmul(&h_star)?.rank();
    let herm = code.hermitian_dual()?;
    let hull = herm.intersect(code)?;
    let c_hull = herm.k() - hull.k();
    if c_rank != c_hull {
        return Err(Error::Assertion(format!(
            "rank(H·H*) = {c_rank} but dim C⊥h - dim(C⊥h ∩ C) = {c_hull}"
        )));
    }
    let via_power = code.dual().dim_intersection(&code.power_code(q as u64)?)?;
    if via_power != hull.k() {
        return Err(Error::Assertion(format!(
            "dim(C ∩ C⊥h) = {} but dim(C⊥ ∩ C^q) = {via_power}",
            hull.k()
        )));
    }
    let c = c_rank;
    let k = (2 * code.k() + c)
        .checked_sub(n)
        .ok_or_else(|| Error::Assertion("negative quantum dimension".into()))?;
    let sets = vec![(code.clone(), hull)];
    let params = finish(q, (n, k, c), designed, &sets, budget, "hermitian")?;
    Ok(QuentaCode {
        params,
        classical: vec![code.clone()],
        distance_sets: sets,
    })
}

/// Hermitian construction from a code over GF(q²); the quantum alphabet is `q`.
pub fn hermitian_construct(code: &LinearCode, budget: u64) -> Result<QuentaCode> {
    hermitian_inner(code, 1, budget)
}

fn ag_inputs(curve: &Curve, d: &[Place], g1: &Divisor, g2: &Divisor) -> BTreeMap<String, Value> {
    let mut m = BTreeMap::new();
    m.insert("curve".into(), json!(curve.describe()));
    m.insert("field".into(), json!(curve.field().descriptor()));
    m.insert("genus".into(), json!(curve.genus()));
    m.insert("p0".into(), json!(curve.p0().key()));
    m.insert("d_size".into(), json!(d.len()));
    m.insert("g1".into(), json!(curve.format_divisor(g1)));
    m.insert("g2".into(), json!(curve.format_divisor(g2)));
    m
}

/// Euclidean construction from `C_L(D,G1)` and `C_L(D,G2)` with no hypothesis checks.
///
/// The lower bound `n - max(deg G1, deg G2)` is used for `d`.
pub fn ag_generic(curve: &Curve, d: &[Place], g1: &Divisor, g2: &Divisor, budget: u64) -> Result<QuentaCode> {
    let a = AgCode::evaluation_code(curve, d, g1)?;
    let b = AgCode::evaluation_code(curve, d, g2)?;
    let n = d.len() as i64;
    let designed = (n - g1.degree().max(g2.degree())).max(1) as usize;
    let mut out = euclidean_inner(a.code(), b.code(), designed, budget)?;
    out.params.inputs = ag_inputs(curve, d, g1, g2);
    Ok(out)
}

fn check(theorem: &'static str, conditions: &[(bool, String)]) -> Result<()> {
    match conditions.iter().find(|(ok, _)| !ok) {
        Some((_, text)) => Err(hypothesis(theorem, text.clone())),
        None => Ok(()),
    }
}

/// Euclidean construction on the curve's standard evaluation divisor, with the
/// hypotheses `2g - 2 < deg Gi < n` and `deg(G1⊥ ∪ G2) < n` enforced.
///
/// The closed forms `c = n + g - 1 - deg G1 - ℓ(G1⊥ ∩ G2)` and
/// `k = deg(G1 + G2) - 2g + 2 - n + c` are compared with linear algebra. A
/// mismatch is an error when the residues of the standard differential are equal
/// along `D`. Otherwise `C_L(D,G1)⊥` is `C_L(D,G1⊥)` only up to column scaling
/// (see [`Curve::eta_weights`]), and the mismatch is recorded instead.
pub fn ag_euclidean(curve: &Curve, g1: &Divisor, g2: &Divisor, budget: u64) -> Result<QuentaCode> {
    let d = curve.standard_d();
    let n = d.len() as i64;
    let g = curve.genus();
    let (deg1, deg2) = (g1.degree(), g2.degree());
    let eta = curve.eta_divisor(&d)?;
    let g1p = dual_divisor(g1, &Divisor::sum_of(&d), &eta);
    let union = g1p.join(g2);
    check(
        GENERAL_AG,
        &[
            (
                2 * g - 2 < deg1 && deg1 < n,
                format!("2g - 2 < deg(G1) < n (g = {g}, deg(G1) = {deg1}, n = {n})"),
            ),
            (
                2 * g - 2 < deg2 && deg2 < n,
                format!("2g - 2 < deg(G2) < n (g = {g}, deg(G2) = {deg2}, n = {n})"),
            ),
            (
                union.degree() < n,
                format!(
                    "deg(G1⊥ ∪ G2) < n (G1⊥ ∪ G2 = {}, degree {}, n = {n})",
                    curve.format_divisor(&union),
                    union.degree()
                ),
            ),
        ],
    )?;
    let mut out = ag_generic(curve, &d, g1, g2, budget)?;
    let ell = curve.ell(&g1p.meet(g2))? as i64;
    let c_cf = n + g - 1 - deg1 - ell;
    let k_cf = deg1 + deg2 - 2 * g + 2 - n + c_cf;
    let p = &mut out.params;
    p.inputs.insert("g1_dual".into(), json!(curve.format_divisor(&g1p)));
    let forms = [
        ClosedForm { source: GENERAL_AG, quantity: "c", formula: c_cf, computed: p.c as i64 },
        ClosedForm { source: GENERAL_AG, quantity: "k", formula: k_cf, computed: p.k as i64 },
    ];
    let bad: Vec<String> = forms
        .iter()
        .filter(|f| !f.matches())
        .map(|f| format!("{} = {} by the closed form, {} by linear algebra", f.quantity, f.formula, f.computed))
        .collect();
    p.closed_forms.extend(forms);
    if !bad.is_empty() {
        let w = curve.eta_weights(&d)?;
        if w.iter().all(|&x| x == w[0]) {
            return Err(Error::Assertion(format!("{GENERAL_AG}: {}", bad.join("; "))));
        }
        p.notes.push(format!(
            "the differential has unequal residues along D, so the dual of C_L(D,G1) is C_L(D,G1⊥) only after column scaling; {}",
            bad.join("; ")
        ));
    }
    Ok(out)
}

fn family_closed_forms(
    p: &mut QuentaParams,
    source: &'static str,
    n: i64,
    k: i64,
    c: i64,
    d: i64,
) {
    let comp = [("n", n, p.n as i64), ("k", k, p.k as i64), ("c", c, p.c as i64), ("d_designed", d, p.d_designed as i64)];
    for (quantity, formula, computed) in comp {
        let computed = if quantity == "d_designed" {
            // Compare with the theorem's own bound, not an improved certificate.
            p.inputs.get("designed").and_then(Value::as_i64).unwrap_or(computed)
        } else {
            computed
        };
        p.closed_forms.push(ClosedForm { source, quantity, formula, computed });
    }
}

fn two_point_family(
    curve: &Curve,
    theorem: &'static str,
    (a1, a2, b1, b2): (i64, i64, i64, i64),
    budget: u64,
) -> Result<QuentaCode> {
    let mut out = ag_euclidean(curve, &curve.two_point(a1, a2), &curve.two_point(b1, b2), budget)?;
    let p = &mut out.params;
    p.inputs.insert("theorem".into(), json!(theorem));
    p.inputs.insert("a".into(), json!([a1, a2]));
    p.inputs.insert("b".into(), json!([b1, b2]));
    p.inputs
        .insert("designed".into(), json!(p.n as i64 - (a1 + a2).max(b1 + b2)));
    if [a1, a2, b1, b2].contains(&0) {
        p.notes
            .push("a coefficient is zero: \"positive integers\" is read as non-negative integers".into());
    }
    Ok(out)
}

fn nonneg(a1: i64, a2: i64, b1: i64, b2: i64) -> (bool, String) {
    (
        a1 >= 0 && a2 >= 0 && b1 >= 0 && b2 >= 0,
        format!("a1, a2, b1, b2 >= 0 (got {a1}, {a2}, {b1}, {b2})"),
    )
}

/// Family from the projective line over GF(q), `G1 = a1·P0 + a2·P∞`, `G2 = b1·P0 + b2·P∞`.
pub fn rational_family(q: u32, a1: i64, a2: i64, b1: i64, b2: i64, budget: u64) -> Result<QuentaCode> {
    let field = crate::galois::Field::with_order(q)?;
    let qi = q as i64;
    check(
        RATIONAL,
        &[
            nonneg(a1, a2, b1, b2),
            (b1 <= a2, format!("b1 <= a2 (b1 = {b1}, a2 = {a2})")),
            (b2 <= qi - 2 - a2, format!("b2 <= q - 2 - a2 (b2 = {b2}, q - 2 - a2 = {})", qi - 2 - a2)),
            (a1 + a2 < qi - 1, format!("a1 + a2 < q - 1 (a1 + a2 = {}, q - 1 = {})", a1 + a2, qi - 1)),
            (b1 + b2 < qi - 1, format!("b1 + b2 < q - 1 (b1 + b2 = {}, q - 1 = {})", b1 + b2, qi - 1)),
        ],
    )?;
    let curve = Curve::rational(&field);
    let mut out = two_point_family(&curve, RATIONAL, (a1, a2, b1, b2), budget)?;
    let d = qi - 1 - (a1 + a2).max(b1 + b2);
    let p = &mut out.params;
    if b2 > a1 {
        family_closed_forms(p, "rational family, first bullet", qi - 1, a1 + b1 - 1, qi - 2 - (a2 + b2), d);
    } else {
        family_closed_forms(p, "rational family, second bullet", qi - 1, b1 + b2 + 1, qi - 2 - (a1 + a2), d);
    }
    Ok(out)
}

/// Family from the Hermitian curve `y^q + y = x^(q+1)` over GF(q²).
pub fn hermitian_curve_family(q: u32, a1: i64, a2: i64, b1: i64, b2: i64, budget: u64) -> Result<QuentaCode> {
    let curve = Curve::hermitian(q)?;
    let qi = q as i64;
    let q3 = qi * qi * qi;
    let qq = qi * (qi - 1);
    check(
        HERMITIAN_CURVE,
        &[
            nonneg(a1, a2, b1, b2),
            (b1 <= a2 - qq, format!("b1 <= a2 - q(q-1) (b1 = {b1}, a2 - q(q-1) = {})", a2 - qq)),
            (
                b2 <= q3 + qq - 2 - a2,
                format!("b2 <= q^3 + q(q-1) - 2 - a2 (b2 = {b2}, bound = {})", q3 + qq - 2 - a2),
            ),
            (b1 + b2 < q3 - 1, format!("b1 + b2 < q^3 - 1 (b1 + b2 = {}, q^3 - 1 = {})", b1 + b2, q3 - 1)),
            (a1 + a2 < q3 - 1, format!("a1 + a2 < q^3 - 1 (a1 + a2 = {}, q^3 - 1 = {})", a1 + a2, q3 - 1)),
        ],
    )?;
    let mut out = two_point_family(&curve, HERMITIAN_CURVE, (a1, a2, b1, b2), budget)?;
    let d = q3 - 1 - (a1 + a2).max(b1 + b2);
    let p = &mut out.params;
    if b2 > a1 {
        family_closed_forms(
            p,
            "Hermitian curve family, first bullet",
            q3 - 1,
            a1 + b1 + 1,
            q3 - 2 + qq - (a2 + b2),
            d,
        );
    } else {
        family_closed_forms(
            p,
            "Hermitian curve family, second bullet",
            q3 - 1,
            b1 + b2 + 1 - qq / 2,
            q3 - 2 + qq / 2 - (a1 + a2),
            d,
        );
    }
    Ok(out)
}

/// Family from an elliptic curve `y² + y = x³ + bx + c` with `e` rational places.
///
/// The stated constraints do not imply `deg(G1⊥ ∪ G2) < n` (that needs
/// `b1 <= a2 - 2`), so [`ag_euclidean`] may still reject a grid point.
pub fn elliptic_family(curve: &Curve, a1: i64, a2: i64, b1: i64, b2: i64, budget: u64) -> Result<QuentaCode> {
    if !matches!(curve.kind(), CurveKind::Elliptic { .. }) {
        return Err(Error::InvalidArgument(format!("{} is not an elliptic curve", curve.describe())));
    }
    let e = curve.places().len() as i64;
    check(
        ELLIPTIC,
        &[
            nonneg(a1, a2, b1, b2),
            (b1 <= a2, format!("b1 <= a2 (b1 = {b1}, a2 = {a2})")),
            (b2 <= e - 1 - a2, format!("b2 <= e - 1 - a2 (b2 = {b2}, e - 1 - a2 = {})", e - 1 - a2)),
            (a1 + a2 < e - 2, format!("a1 + a2 < e - 2 (a1 + a2 = {}, e - 2 = {})", a1 + a2, e - 2)),
            (b1 + b2 < e - 2, format!("b1 + b2 < e - 2 (b1 + b2 = {}, e - 2 = {})", b1 + b2, e - 2)),
        ],
    )?;
    let mut out = two_point_family(curve, ELLIPTIC, (a1, a2, b1, b2), budget)?;
    let d = e - 2 - (a1 + a2).max(b1 + b2);
    let p = &mut out.params;
    p.inputs.insert("e".into(), json!(e));
    if b2 > a1 {
        family_closed_forms(p, "elliptic family, first bullet", e - 2, a1 + b1 + 1, e - 1 - (a2 + b2), d);
    } else {
        family_closed_forms(p, "elliptic family, second bullet", e - 2, b1 + b2, e - 2 - (a1 + a2), d);
    }
    Ok(out)
}

/// Exponent sets of the bases of `C^q` and `C⊥` for `C = C_L(D, m·P∞)` over GF(q²)
/// with `D` all affine places, as monomial exponents reduced with `x^(q²) = x`.
pub fn exponent_grid(q: u32, m: u32) -> (Vec<u32>, Vec<u32>) {
    let qq = q * q;
    let reduce = |mut e: u32| {
        while e >= qq {
            e -= qq - 1;
        }
        e
    };
    let mut b1: Vec<u32> = (0..=m).map(|i| reduce(q * i)).collect();
    b1.sort_unstable();
    b1.dedup();
    let b2: Vec<u32> = if m + 2 <= qq { (0..=qq - 2 - m).collect() } else { Vec::new() };
    (b1, b2)
}

/// `|B1 ∩ B2|` for [`exponent_grid`].
pub fn grid_intersection(q: u32, m: u32) -> usize {
    let (b1, b2) = exponent_grid(q, m);
    b1.iter().filter(|e| b2.binary_search(e).is_ok()).count()
}

/// Hermitian construction applied to `C_L(D, m·P∞)` on the projective line over
/// GF(q²), `m = qt + r`, with `D` all `q²` affine places.
pub fn hermitian_construction_rational(q: u32, t: u32, r: u32, budget: u64) -> Result<QuentaCode> {
    let m = q * t + r;
    check(
        HERMITIAN_RS,
        &[
            (t >= 1, format!("t >= 1 (t = {t})")),
            (r < q, format!("0 <= r <= q - 1 (r = {r}, q = {q})")),
            (m < q * q, format!("m = qt + r < q^2 (m = {m}, q^2 = {})", q * q)),
        ],
    )?;
    let field = crate::galois::Field::with_order(q * q)?;
    let curve = Curve::rational(&field);
    let d = curve.affine_places();
    let g = curve.two_point(0, m as i64);
    let ag = AgCode::evaluation_code(&curve, &d, &g)?;
    let n = (q * q) as usize;
    let designed = n - m as usize;
    let mut out = hermitian_inner(ag.code(), designed, budget)?;
    let code = ag.code();
    let grid = grid_intersection(q, m);
    let la = code.dual().dim_intersection(&code.power_code(q as u64)?)?;
    let (q_, t_, r_) = (q as i64, t as i64, r as i64);
    let first = t_ >= q_ - r_ - 1;
    let (grid_cf, c_cf, k_cf, label) = if first {
        (
            (q_ - t_ - 1) * (t_ + 1) + q_ - r_ - 1,
            (q_ - t_ - 1).pow(2),
            (t_ + 1).pow(2) + 2 * r_ + 1 - 2 * q_,
            "Hermitian construction, first bullet",
        )
    } else {
        (
            (q_ - t_) * t_ + r_ + 1,
            (q_ - t_).pow(2) - 2 * (r_ + 1),
            t_ * t_ - 1,
            "Hermitian construction, second bullet",
        )
    };
    let p = &mut out.params;
    let consistent = p.c as i64 == (n - code.k()) as i64 - grid as i64;
    if grid != la || grid as i64 != grid_cf || p.c as i64 != c_cf || !consistent {
        return Err(Error::Assertion(format!(
            "{HERMITIAN_RS} with q = {q}, t = {t}, r = {r}: |B1 ∩ B2| = {grid} (closed form {grid_cf}), \
             dim(C^q ∩ C⊥) = {la}, c = {} (closed form {c_cf})",
            p.c
        )));
    }
    p.inputs.insert("theorem".into(), json!(HERMITIAN_RS));
    p.inputs.insert("t".into(), json!(t));
    p.inputs.insert("r".into(), json!(r));
    p.inputs.insert("m".into(), json!(m));
    p.inputs.insert("grid_intersection".into(), json!(grid));
    p.inputs.insert("designed".into(), json!(designed));
    p.inputs.insert("g".into(), json!(curve.format_divisor(&g)));
    p.inputs.insert("d_size".into(), json!(n));
    family_closed_forms(p, label, n as i64, k_cf, c_cf, designed as i64);
    Ok(out)
}

/// Orders by Singleton defect (unknown last), then rate, and drops repeated
/// `(n, k, c, d)`. The sort is stable, so input order breaks ties.
pub fn rank_results(mut items: Vec<QuentaParams>) -> Vec<QuentaParams> {
    let mut seen = std::collections::HashSet::new();
    items.retain(|p| seen.insert((p.n, p.k, p.c, p.d_text())));
    items.sort_by(|x, y| {
        let dx = x.singleton_defect.unwrap_or(i64::MAX);
        let dy = y.singleton_defect.unwrap_or(i64::MAX);
        // Compare rates k/n without floats.
        dx.cmp(&dy).then_with(|| (y.k * x.n).cmp(&(x.k * y.n)))
    });
    items
}

/// All non-negative `(a1, a2, b1, b2)` with both degrees below `bound`.
pub fn coefficient_grid(bound: i64) -> impl Iterator<Item = (i64, i64, i64, i64)> {
    (0..bound).flat_map(move |s1| {
        (0..bound).flat_map(move |s2| {
            (0..=s1).flat_map(move |a1| (0..=s2).map(move |b1| (a1, s1 - a1, b1, s2 - b1)))
        })
    })
}

/// Runs `build` over a grid, keeping successes and skipping hypothesis violations.
pub fn search<I, F>(grid: I, mut build: F) -> Result<Vec<QuentaParams>>
where
    I: IntoIterator,
    F: FnMut(I::Item) -> Result<QuentaCode>,
{
    let mut out = Vec::new();
    for item in grid {
        match build(item) {
            Ok(code) => out.push(code.params),
            Err(Error::Hypothesis { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(rank_results(out))
}

/// Every codeword weight seen on `samples` random codewords of each classical code.
pub fn spot_check_weights<R: Rng + ?Sized>(code: &QuentaCode, samples: usize, rng: &mut R) -> Option<usize> {
    let mut least: Option<usize> = None;
    for c in &code.classical {
        for _ in 0..samples {
            let w = weight(&c.random_codeword(rng));
            if w > 0 {
                least = Some(least.map_or(w, |l| l.min(w)));
            }
        }
    }
    least
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::Fe;
    use crate::funcfield::EllipticModel;
    use crate::galois::Field;
    use crate::lincode::DEFAULT_BUDGET;
    use crate::matspace::Matrix;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const B: u64 = DEFAULT_BUDGET;

    fn shape(p: &QuentaParams) -> (usize, usize, Option<usize>, usize) {
        (p.n, p.k, p.d_exact.and_then(Distance::finite), p.c)
    }

    #[test]
    fn qsb_examples() {
        assert_eq!(qsb(7, 4, 3), 4);
        assert_eq!(qsb(9, 9, 0), 1);
        assert_eq!(qsb(26, 10, 10), 14);
    }

    #[test]
    fn lcd_pair_gives_maximal_entanglement() {
        let f = Field::new(5, 1).unwrap();
        let c = (0..)
            .map(|seed| random_code(&f, 6, 3, seed))
            .find(|c| c.k() == 3 && c.is_lcd(false).unwrap())
            .unwrap();
        let d = c.min_weight(B).value.finite().unwrap();
        let out = euclidean_construct(&c, &c, B).unwrap();
        assert_eq!(shape(&out.params), (6, 3, Some(d), 3));
        assert!(out.params.flags.maximal_entanglement);
    }

    #[test]
    fn dual_pair_needs_no_entanglement() {
        let curve = Curve::rational(&Field::new(7, 1).unwrap());
        let a = AgCode::standard(&curve, &curve.two_point(0, 2)).unwrap();
        let out = euclidean_construct(a.code(), &a.code().dual(), B).unwrap();
        assert_eq!(out.params.c, 0);
        assert_eq!(out.params.k, 0);
    }

    #[test]
    fn mismatched_inputs() {
        let f5 = Field::new(5, 1).unwrap();
        let f7 = Field::new(7, 1).unwrap();
        let a = LinearCode::full(&f5, 3);
        assert_eq!(euclidean_construct(&a, &LinearCode::full(&f7, 3), B).unwrap_err(), Error::FieldMismatch);
        assert!(matches!(
            euclidean_construct(&a, &LinearCode::full(&f5, 4), B),
            Err(Error::DimensionMismatch(_))
        ));
        assert_eq!(hermitian_construct(&a, B).unwrap_err(), Error::NonSquareOrder(5));
    }

    #[test]
    fn degenerate_sets_give_the_sentinel() {
        let f = Field::new(3, 1).unwrap();
        let full = LinearCode::full(&f, 3);
        let zero = LinearCode::zero(&f, 3);
        let out = euclidean_construct(&full, &zero, B).unwrap();
        // C1 ⊆ C2⊥ and C2 = {0}: both distance sets are empty.
        assert_eq!(out.params.d_exact, Some(Distance::Infinite));
        assert!(out.params.flags.degenerate);
        assert_eq!(out.params.singleton_defect, None);
    }

    #[test]
    fn hermitian_lcd_and_self_orthogonal_cases() {
        let f = Field::new(2, 2).unwrap();
        // span{(1,1)} over GF(4) equals its own Hermitian dual: c = 0.
        let c = LinearCode::from_generator(&Matrix::from_reps(&f, &[&[1, 1]]).unwrap());
        let out = hermitian_construct(&c, B).unwrap();
        assert_eq!((out.params.c, out.params.k), (0, 0));
        // span{(1,0)} is Hermitian LCD: maximal entanglement.
        let c = LinearCode::from_generator(&Matrix::from_reps(&f, &[&[1, 0]]).unwrap());
        let out = hermitian_construct(&c, B).unwrap();
        assert_eq!(shape(&out.params), (2, 1, Some(1), 1));
        assert!(out.params.flags.maximal_entanglement);
    }

    #[test]
    fn rational_examples() {
        let p = rational_family(5, 1, 0, 0, 1, B).unwrap().params;
        assert_eq!(shape(&p), (4, 2, Some(3), 2));
        assert!(p.flags.mds && p.flags.maximal_entanglement);
        let p = rational_family(8, 2, 1, 1, 2, B).unwrap().params;
        assert_eq!(shape(&p), (7, 4, Some(4), 3));
        let p = rational_family(4, 1, 0, 0, 1, B).unwrap().params;
        assert_eq!(shape(&p), (3, 2, Some(2), 1));
        assert_eq!(p.mismatches().count(), 0);
        assert!(p.notes.iter().any(|n| n.contains("non-negative")));
    }

    #[test]
    fn rational_first_bullet_dimension() {
        // b2 >= a1 + 1: linear algebra gives a1 + b1 + 1, the printed form a1 + b1 - 1.
        let p = rational_family(8, 1, 2, 1, 3, B).unwrap().params;
        let k = p
            .closed_forms
            .iter()
            .find(|c| c.quantity == "k" && c.source.starts_with(RATIONAL))
            .unwrap();
        assert_eq!((k.computed, k.formula), (3, 1));
        assert_eq!(p.mismatches().map(|c| c.quantity).collect::<Vec<_>>(), ["k"]);
    }

    #[test]
    fn rational_constraints() {
        let err = rational_family(5, 0, 1, 2, 0, B).unwrap_err();
        assert_eq!(err, hypothesis(RATIONAL, "b1 <= a2 (b1 = 2, a2 = 1)"));
        assert!(matches!(rational_family(5, -1, 1, 0, 0, B), Err(Error::Hypothesis { .. })));
        assert!(matches!(rational_family(5, 0, 4, 0, 0, B), Err(Error::Hypothesis { .. })));
    }

    #[test]
    fn hermitian_curve_examples() {
        let p = hermitian_curve_family(2, 1, 2, 0, 3, B).unwrap().params;
        assert_eq!(shape(&p), (7, 2, Some(4), 3));
        assert_eq!(p.singleton_defect, Some(1));
        let p = hermitian_curve_family(3, 4, 16, 10, 10, B).unwrap().params;
        assert_eq!((p.n, p.k, p.c, p.d_designed), (26, 15, 5, 6));
        assert_eq!(p.entanglement_defect, 6);
        assert_eq!(p.mismatches().count(), 0);
        assert!(!p.flags.maximal_entanglement);
    }

    #[test]
    fn elliptic_hypothesis_gap() {
        let curve = EllipticModel::X3.curve(2).unwrap();
        // Within the printed constraints, but deg(G1⊥ ∪ G2) = 7 = n.
        let err = elliptic_family(&curve, 2, 3, 2, 3, B).unwrap_err();
        let Error::Hypothesis { theorem, constraint } = err else { panic!() };
        assert_eq!(theorem, GENERAL_AG);
        assert!(constraint.starts_with("deg(G1⊥ ∪ G2) < n"));
        // The same divisors without the checks.
        let d = curve.standard_d();
        let p = ag_generic(&curve, &d, &curve.two_point(2, 3), &curve.two_point(2, 3), B).unwrap().params;
        assert_eq!(shape(&p), (7, 3, Some(2), 0));
    }

    #[test]
    fn elliptic_table_rows() {
        let c4 = EllipticModel::X3.curve(2).unwrap();
        let d = c4.standard_d();
        let p = ag_generic(&c4, &d, &c4.two_point(1, 4), &c4.two_point(3, 2), B).unwrap().params;
        assert_eq!(shape(&p), (7, 5, Some(2), 2));
        assert!(p.flags.almost_mds && p.flags.maximal_entanglement);
        let c8 = EllipticModel::X3PlusXPlus1.curve(3).unwrap();
        let p = elliptic_family(&c8, 0, 6, 1, 5, B).unwrap().params;
        assert_eq!(shape(&p), (11, 6, Some(5), 5));
        // Unequal residues: the general closed forms do not apply and are only recorded.
        assert!(p.notes.iter().any(|n| n.contains("unequal residues")));
    }

    #[test]
    fn hermitian_rs_examples() {
        let p = hermitian_construction_rational(4, 2, 2, B).unwrap().params;
        assert_eq!(shape(&p), (16, 7, Some(6), 1));
        assert_eq!(p.d_provenance, Provenance::Squeeze);
        let k = p.closed_forms.iter().find(|c| c.quantity == "k").unwrap();
        assert_eq!((k.computed, k.formula), (7, 6));
        let p = hermitian_construction_rational(4, 2, 0, B).unwrap().params;
        assert_eq!(shape(&p), (16, 4, Some(8), 2));
        assert!(p.flags.mds);
        assert!(matches!(hermitian_construction_rational(4, 0, 1, B), Err(Error::Hypothesis { .. })));
        assert!(matches!(hermitian_construction_rational(4, 4, 0, B), Err(Error::Hypothesis { .. })));
    }

    #[test]
    fn grid_matches_linear_algebra() {
        for q in 2..=4u32 {
            for t in 1..q {
                for r in 0..q {
                    if q * t + r < q * q {
                        hermitian_construction_rational(q, t, r, 1).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn witness_certifies_designed_distance() {
        let mut code = hermitian_curve_family(3, 8, 7, 1, 14, 1 << 12).unwrap();
        assert_eq!(code.params.d_exact, None);
        assert_eq!(code.params.d_designed, 11);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(code.certify_by_witness(200, &mut rng).unwrap());
        assert_eq!(code.params.singleton_defect, Some(3));
        assert_eq!(code.params.entanglement_defect, 6);
    }

    #[test]
    fn ranking_and_dedup() {
        let a = rational_family(8, 2, 1, 1, 2, B).unwrap().params;
        let b = rational_family(8, 1, 2, 1, 3, B).unwrap().params;
        let ranked = rank_results(vec![b.clone(), a.clone(), a.clone()]);
        assert_eq!(ranked.len(), 2);
        assert_eq!(ranked[0], a);
    }

    #[test]
    fn grid_enumerates_every_split() {
        let v: Vec<_> = coefficient_grid(2).collect();
        assert_eq!(v.len(), 9);
        assert!(v.contains(&(1, 0, 0, 1)));
    }

    fn random_code(f: &Field, n: usize, k: usize, seed: u64) -> LinearCode {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<Fe>> = (0..k)
            .map(|_| (0..n).map(|_| Fe(rng.random_range(0..f.order()))).collect())
            .collect();
        LinearCode::from_generator(&Matrix::from_rows(f, n, &rows).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn euclidean_double_entry(q in prop::sample::select(vec![2u32, 3, 4, 5]), n in 2usize..7, k1 in 0usize..7, k2 in 0usize..7, seed: u64) {
            let f = Field::with_order(q).unwrap();
            let c1 = random_code(&f, n, k1.min(n), seed);
            let c2 = random_code(&f, n, k2.min(n), seed ^ 0x9e37);
            let p = euclidean_construct(&c1, &c2, 1 << 16).unwrap().params;
            prop_assert!(p.c <= p.n - p.k);
            if let Some(Distance::Finite(d)) = p.d_exact {
                if p.k > 0 {
                    prop_assert!(d as i64 <= qsb(p.n, p.k, p.c));
                }
            }
        }

        #[test]
        fn hermitian_double_entry(q in prop::sample::select(vec![4u32, 9]), n in 2usize..7, k in 0usize..7, seed: u64) {
            let f = Field::with_order(q).unwrap();
            let c = random_code(&f, n, k.min(n), seed);
            let p = hermitian_construct(&c, 1 << 16).unwrap().params;
            prop_assert!(p.c <= p.n - p.k);
        }

        #[test]
        fn diagonal_rational_is_maximally_entangled(q in prop::sample::select(vec![4u32, 5, 7, 8, 9, 11]), a in 0i64..5) {
            // G1 = G2 = a·P0 + a·P∞, the corollary's diagonal case.
            prop_assume!(2 * a < q as i64 - 1);
            let p = rational_family(q, a, a, a, a, 1 << 16).unwrap().params;
            prop_assert!(p.flags.maximal_entanglement);
            prop_assert_eq!(p.mismatches().count(), 0);
        }
    }
}
