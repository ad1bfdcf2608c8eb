//! Seeded randomized campaigns that re-check the code-level identities on
//! random inputs, plus the exhaustive Riemann–Roch dimension grid.
//!
//! Every campaign draws from one `ChaCha8Rng` seeded by the caller, so a
//! report is reproducible from `(prop, trials, seed, family, q)`.

use std::fmt;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::agcode::AgCode;
use crate::error::{Error, Result};
use crate::funcfield::{dual_divisor, Curve, Divisor, EllipticModel};
use crate::galois::{Fe, Field};
use crate::lincode::LinearCode;
use crate::matspace::{Matrix, Subspace};
use crate::quenta::{euclidean_construct, hermitian_construct};

/// Enumeration budget for distances inside campaigns; only `c` is under test.
const CAMPAIGN_BUDGET: u64 = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prop {
    DivisorMeet,
    DivisorJoin,
    DualDivisor,
    HullBridge,
    CRank,
    HermHull,
    BasisSubset,
    RrDimension,
}

impl Prop {
    pub const ALL: [Prop; 8] = [
        Prop::DivisorMeet,
        Prop::DivisorJoin,
        Prop::DualDivisor,
        Prop::HullBridge,
        Prop::CRank,
        Prop::HermHull,
        Prop::BasisSubset,
        Prop::RrDimension,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Prop::DivisorMeet => "divisor-meet",
            Prop::DivisorJoin => "divisor-join",
            Prop::DualDivisor => "dual-divisor",
            Prop::HullBridge => "hull-bridge",
            Prop::CRank => "c-rank",
            Prop::HermHull => "herm-hull",
            Prop::BasisSubset => "basis-subset",
            Prop::RrDimension => "rr-dimension",
        }
    }

    pub fn parse(s: &str) -> Result<Prop> {
        Prop::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown property {s:?}")))
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Rational,
    Hermitian,
    Elliptic,
}

impl Family {
    pub fn parse(s: &str) -> Result<Family> {
        match s {
            "rational" => Ok(Family::Rational),
            "hermitian" => Ok(Family::Hermitian),
            "elliptic" => Ok(Family::Elliptic),
            _ => Err(Error::Parse(format!("unknown curve family {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Campaign {
    pub trials: usize,
    pub seed: u64,
    /// Restricts curve-based campaigns to one backend.
    pub family: Option<Family>,
    /// Restricts the field: `q` for rational curves and random codes, the
    /// Hermitian parameter for Hermitian curves, ignored for elliptic curves.
    pub q: Option<u32>,
}

impl Default for Campaign {
    fn default() -> Self {
        Campaign { trials: 200, seed: 0, family: None, q: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub prop: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub failures: Vec<String>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}/{} pass (seed {}){}",
            self.prop,
            self.passed,
            self.trials,
            self.seed,
            if self.ok() { "" } else { " FAIL" }
        )
    }
}

pub fn run(prop: Prop, cfg: &Campaign) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pool = match prop {
        Prop::DivisorMeet | Prop::DivisorJoin => curves(cfg, &[Family::Rational, Family::Hermitian])?,
        Prop::DualDivisor | Prop::RrDimension => curves(cfg, &[Family::Rational, Family::Hermitian, Family::Elliptic])?,
        // The bridge needs C_L(D,G)⊥ = C_L(D,G⊥) without column scaling.
        Prop::HullBridge => {
            let all = curves(cfg, &[Family::Rational, Family::Hermitian, Family::Elliptic])?;
            let mut keep = Vec::new();
            for c in all {
                let w = c.eta_weights(&c.standard_d())?;
                if w.iter().all(|&x| x == w[0]) {
                    keep.push(c);
                }
            }
            keep
        }
        _ => Vec::new(),
    };
    if pool.is_empty() && matches!(prop, Prop::DivisorMeet | Prop::DivisorJoin | Prop::DualDivisor | Prop::HullBridge | Prop::RrDimension) {
        return Err(Error::InvalidArgument(format!("no curves available for {prop}")));
    }
    let mut report = Report { prop: prop.name().into(), seed: cfg.seed, trials: cfg.trials, passed: 0, failures: Vec::new() };
    for trial in 0..cfg.trials {
        let outcome = match prop {
            Prop::DivisorMeet => meet_trial(pick(&pool, &mut rng), &mut rng),
            Prop::DivisorJoin => join_trial(pick(&pool, &mut rng), &mut rng),
            Prop::DualDivisor => dual_trial(pick(&pool, &mut rng), &mut rng),
            Prop::HullBridge => bridge_trial(pick(&pool, &mut rng), &mut rng),
            Prop::RrDimension => rr_trial(pick(&pool, &mut rng), &mut rng),
            Prop::CRank => c_rank_trial(cfg.q, &mut rng),
            Prop::HermHull => herm_hull_trial(cfg.q, &mut rng),
            Prop::BasisSubset => basis_subset_trial(cfg.q, &mut rng),
        };
        match outcome {
            Ok(()) => report.passed += 1,
            Err(e) => report.failures.push(format!("trial {trial}: {e}")),
        }
    }
    Ok(report)
}

fn pick<'a, R: Rng + ?Sized>(pool: &'a [Curve], rng: &mut R) -> &'a Curve {
    pool.choose(rng).expect("pool is non-empty")
}

fn curves(cfg: &Campaign, allowed: &[Family]) -> Result<Vec<Curve>> {
    let families: Vec<Family> = match cfg.family {
        Some(f) if allowed.contains(&f) => vec![f],
        Some(_) => return Ok(Vec::new()),
        None => allowed.to_vec(),
    };
    let mut out = Vec::new();
    for fam in families {
        match fam {
            Family::Rational => {
                let qs = cfg.q.map_or(vec![3, 4, 5, 7, 8, 9, 11, 13, 16], |q| vec![q]);
                for q in qs {
                    out.push(Curve::rational(&Field::with_order(q)?));
                }
            }
            Family::Hermitian => {
                for q in cfg.q.map_or(vec![2, 3], |q| vec![q]) {
                    out.push(Curve::hermitian(q)?);
                }
            }
            Family::Elliptic => {
                for model in EllipticModel::ALL {
                    for s in 2..=4 {
                        if model.count_places(s)? >= 6 {
                            out.push(model.curve(s)?);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn n_of(c: &Curve) -> i64 {
    c.standard_d().len() as i64
}

/// A two-point divisor of degree in `lo..=hi` with a random split.
fn random_divisor<R: Rng + ?Sized>(c: &Curve, lo: i64, hi: i64, rng: &mut R) -> Divisor {
    let deg = rng.random_range(lo..=hi.max(lo));
    let a1 = rng.random_range(-2..=deg.max(0) + 2);
    c.two_point(a1, deg - a1)
}

/// Draws pairs until `ok` accepts one (at most 1000 tries).
fn sample_pair<R, F>(c: &Curve, lo: i64, hi: i64, rng: &mut R, ok: F) -> Result<(Divisor, Divisor)>
where
    R: Rng + ?Sized,
    F: Fn(&Divisor, &Divisor) -> Result<bool>,
{
    for _ in 0..1000 {
        let g1 = random_divisor(c, lo, hi, rng);
        let g2 = random_divisor(c, lo, hi, rng);
        if ok(&g1, &g2)? {
            return Ok((g1, g2));
        }
    }
    Err(Error::InvalidArgument(format!("no admissible divisor pair on {}", c.describe())))
}

fn context(c: &Curve, gs: &[&Divisor], e: Error) -> Error {
    let gs: Vec<String> = gs.iter().map(|g| c.format_divisor(g)).collect();
    Error::Assertion(format!("{} with G = [{}]: {e}", c.describe(), gs.join(", ")))
}

fn meet_trial<R: Rng + ?Sized>(c: &Curve, rng: &mut R) -> Result<()> {
    let n = n_of(c);
    let (g1, g2) = sample_pair(c, -1, n - 1, rng, |a, b| Ok(a.join(b).degree() < n))?;
    let run = || -> Result<()> {
        AgCode::standard(c, &g1)?.code_meet(&AgCode::standard(c, &g2)?)?;
        Ok(())
    };
    run().map_err(|e| context(c, &[&g1, &g2], e))
}

fn join_trial<R: Rng + ?Sized>(c: &Curve, rng: &mut R) -> Result<()> {
    let n = n_of(c);
    let g2 = 2 * c.genus() - 2;
    let (g1, h) = sample_pair(c, g2 + 1, n - 1, rng, |a, b| {
        Ok(a.meet(b).degree() > g2 && a.join(b).degree() < n)
    })?;
    let run = || -> Result<()> {
        AgCode::standard(c, &g1)?.code_join(&AgCode::standard(c, &h)?)?;
        Ok(())
    };
    run().map_err(|e| context(c, &[&g1, &h], e))
}

fn dual_trial<R: Rng + ?Sized>(c: &Curve, rng: &mut R) -> Result<()> {
    let n = n_of(c);
    let g = random_divisor(c, -1, n + 2 * c.genus(), rng);
    AgCode::standard(c, &g)
        .and_then(|a| a.dual_code_check())
        .map(|_| ())
        .map_err(|e| context(c, &[&g], e))
}

/// `dim(C_L(D,G1)⊥ ∩ C_L(D,G2)) = ℓ(G1⊥ ∩ G2)`.
fn bridge_trial<R: Rng + ?Sized>(c: &Curve, rng: &mut R) -> Result<()> {
    let n = n_of(c);
    let d = c.standard_d();
    let eta = c.eta_divisor(&d)?;
    let sum = Divisor::sum_of(&d);
    let g = c.genus();
    let (g1, g2) = sample_pair(c, 2 * g - 1, n - 1, rng, |a, b| {
        Ok(dual_divisor(a, &sum, &eta).join(b).degree() < n)
    })?;
    let run = || -> Result<()> {
        let c1 = AgCode::standard(c, &g1)?;
        let c2 = AgCode::standard(c, &g2)?;
        let lhs = c1.code().dual().dim_intersection(c2.code())?;
        let rhs = c.ell(&dual_divisor(&g1, &sum, &eta).meet(&g2))?;
        if lhs != rhs {
            return Err(Error::Assertion(format!("dim(C1⊥ ∩ C2) = {lhs} but ℓ(G1⊥ ∩ G2) = {rhs}")));
        }
        Ok(())
    };
    run().map_err(|e| context(c, &[&g1, &g2], e))
}

fn rr_trial<R: Rng + ?Sized>(c: &Curve, rng: &mut R) -> Result<()> {
    let n = n_of(c);
    let g = c.genus();
    let gd = random_divisor(c, 2 * g - 1, n - 1, rng);
    rr_check(c, &gd).map_err(|e| context(c, &[&gd], e))
}

fn rr_check(c: &Curve, gd: &Divisor) -> Result<()> {
    let got = c.rr_basis(gd)?.len() as i64;
    let want = gd.degree() + 1 - c.genus();
    if got != want {
        return Err(Error::Assertion(format!("ℓ(G) = {got}, expected deg G + 1 - g = {want}")));
    }
    Ok(())
}

/// Checks `ℓ(G) = deg G + 1 − g` for every `G = a1·P0 + a2·P∞` with
/// `2g − 2 < deg G < n` and `|a1| <= n`. Returns the number of divisors checked.
pub fn rr_grid(c: &Curve) -> Result<usize> {
    let n = n_of(c);
    let g = c.genus();
    let mut count = 0;
    for deg in (2 * g - 1).max(0)..n {
        for a1 in -n..=n {
            let gd = c.two_point(a1, deg - a1);
            rr_check(c, &gd).map_err(|e| context(c, &[&gd], e))?;
            count += 1;
        }
    }
    Ok(count)
}

pub fn random_code<R: Rng + ?Sized>(f: &Field, n: usize, k: usize, rng: &mut R) -> Result<LinearCode> {
    let rows: Vec<Vec<Fe>> = (0..k)
        .map(|_| (0..n).map(|_| Fe(rng.random_range(0..f.order()))).collect())
        .collect();
    Ok(LinearCode::from_generator(&Matrix::from_rows(f, n, &rows)?))
}

fn random_field<R: Rng + ?Sized>(q: Option<u32>, choices: &[u32], rng: &mut R) -> Result<Field> {
    Field::with_order(q.unwrap_or_else(|| *choices.choose(rng).expect("non-empty")))
}

fn dump(c: &LinearCode) -> String {
    c.generator().to_text().replace('\n', "; ")
}

/// Both constructions compute `c` twice (rank and hull dimension) and fail on disagreement.
fn c_rank_trial<R: Rng + ?Sized>(q: Option<u32>, rng: &mut R) -> Result<()> {
    let f = random_field(q, &[2, 3, 4, 5, 7, 8, 9], rng)?;
    let n = rng.random_range(1..=9);
    let c1 = random_code(&f, n, rng.random_range(0..=n), rng)?;
    let c2 = random_code(&f, n, rng.random_range(0..=n), rng)?;
    euclidean_construct(&c1, &c2, CAMPAIGN_BUDGET)
        .map_err(|e| Error::Assertion(format!("GF({}) C1 = [{}], C2 = [{}]: {e}", f.order(), dump(&c1), dump(&c2))))?;
    let h = random_field(q.filter(|&q| Field::with_order(q).is_ok_and(|f| f.sqrt_order().is_some())), &[4, 9, 16], rng)?;
    let c = random_code(&h, n, rng.random_range(0..=n), rng)?;
    hermitian_construct(&c, CAMPAIGN_BUDGET)
        .map_err(|e| Error::Assertion(format!("GF({}) C = [{}]: {e}", h.order(), dump(&c))))?;
    Ok(())
}

/// `dim(C ∩ C^{⊥h}) = dim(C⊥ ∩ C^q)`.
fn herm_hull_trial<R: Rng + ?Sized>(q: Option<u32>, rng: &mut R) -> Result<()> {
    let f = random_field(q, &[4, 9, 16, 25], rng)?;
    let r = f.sqrt_order().ok_or(Error::NonSquareOrder(f.order()))?;
    let n = rng.random_range(1..=10);
    let c = random_code(&f, n, rng.random_range(0..=n), rng)?;
    let lhs = c.dim_intersection(&c.hermitian_dual()?)?;
    let rhs = c.dual().dim_intersection(&c.power_code(r as u64)?)?;
    if lhs != rhs {
        return Err(Error::Assertion(format!(
            "GF({}) C = [{}]: dim(C ∩ C⊥h) = {lhs}, dim(C⊥ ∩ C^q) = {rhs}",
            f.order(),
            dump(&c)
        )));
    }
    Ok(())
}

/// Subsets `B1`, `B2` of a random basis of F^n span spaces meeting in dimension `|B1 ∩ B2|`.
fn basis_subset_trial<R: Rng + ?Sized>(q: Option<u32>, rng: &mut R) -> Result<()> {
    let f = random_field(q, &[2, 3, 4, 5, 7, 8, 9, 16], rng)?;
    let n = rng.random_range(1..=8);
    let basis = loop {
        let m = random_code(&f, n, n, rng)?;
        if m.k() == n {
            break m.generator().row_vecs();
        }
    };
    let b1: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
    let b2: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
    let span = |idx: &[usize]| -> Result<Subspace> {
        let rows: Vec<Vec<Fe>> = idx.iter().map(|&i| basis[i].clone()).collect();
        Ok(Subspace::from_matrix(&Matrix::from_rows(&f, n, &rows)?))
    };
    let dim = span(&b1)?.intersect(&span(&b2)?)?.dim();
    let common = b1.iter().filter(|i| b2.contains(i)).count();
    if dim != common {
        return Err(Error::Assertion(format!(
            "GF({}) n = {n}, B1 = {b1:?}, B2 = {b2:?}: dim = {dim}, |B1 ∩ B2| = {common}",
            f.order()
        )));
    }
    Ok(())
}
