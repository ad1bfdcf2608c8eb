//! Evaluation codes `C_L(D,G)` and the code-level identities between them.
//!
//! ```
//! use quenta::agcode::AgCode;
//! use quenta::funcfield::Curve;
//! use quenta::galois::Field;
//!
//! let line = Curve::rational(&Field::new(5, 1).unwrap());
//! let code = AgCode::evaluation_code(&line, &line.standard_d(), &line.two_point(0, 2)).unwrap();
//! assert_eq!((code.n(), code.k(), code.designed_distance()), (4, 3, 2));
//! ```

use std::collections::BTreeSet;

use crate::error::{hypothesis, Error, Result};
use crate::funcfield::{dual_divisor, Curve, Divisor, Function, Place};
use crate::galois::Fe;
use crate::lincode::LinearCode;
use crate::matspace::Matrix;

#[derive(Clone, Debug)]
pub struct AgCode {
    curve: Curve,
    d: Vec<Place>,
    g: Divisor,
    basis: Vec<Function>,
    code: LinearCode,
}

impl AgCode {
    /// `C_L(D,G)`: evaluations of a basis of `L(G)` at the places of `D`, in order.
    pub fn evaluation_code(curve: &Curve, d: &[Place], g: &Divisor) -> Result<AgCode> {
        let distinct: BTreeSet<&Place> = d.iter().collect();
        if distinct.len() != d.len() {
            return Err(Error::InvalidPlaces("evaluation places repeat".into()));
        }
        if let Some(p) = d.iter().find(|p| !curve.places().contains(p) || **p == Place::Infinity) {
            return Err(Error::InvalidPlaces(format!("{p} is not an affine rational place of {}", curve.describe())));
        }
        if let Some((p, _)) = g.support().find(|(p, _)| distinct.contains(p)) {
            return Err(Error::InvalidPlaces(format!("{p} lies in both D and supp(G)")));
        }
        let basis = curve.rr_basis(g)?;
        let f = curve.field();
        let rows: Vec<Vec<Fe>> = basis
            .iter()
            .map(|fun| d.iter().map(|p| curve.evaluate(fun, p)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let code = LinearCode::from_generator(&Matrix::from_rows(f, d.len(), &rows)?);
        let n = d.len() as i64;
        if g.degree() < n && code.k() != basis.len() {
            return Err(Error::Assertion(format!(
                "evaluation map is not injective on L({}) although deg G < n",
                curve.format_divisor(g)
            )));
        }
        Ok(AgCode {
            curve: curve.clone(),
            d: d.to_vec(),
            g: g.clone(),
            basis,
            code,
        })
    }

    /// Evaluation code on the curve's standard evaluation divisor.
    pub fn standard(curve: &Curve, g: &Divisor) -> Result<AgCode> {
        AgCode::evaluation_code(curve, &curve.standard_d(), g)
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn places(&self) -> &[Place] {
        &self.d
    }

    pub fn divisor(&self) -> &Divisor {
        &self.g
    }

    pub fn basis(&self) -> &[Function] {
        &self.basis
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn k(&self) -> usize {
        self.code.k()
    }

    /// `n - deg(G)`.
    pub fn designed_distance(&self) -> i64 {
        self.n() as i64 - self.g.degree()
    }

    fn same_setting(&self, other: &AgCode) -> Result<()> {
        if self.curve != other.curve {
            return Err(Error::InvalidArgument("codes live on different curves".into()));
        }
        if self.d != other.d {
            return Err(Error::InvalidPlaces("codes use different evaluation divisors".into()));
        }
        Ok(())
    }

    /// `C_L(D,G1) ∩ C_L(D,G2) = C_L(D, G1 ∩ G2)`, checked against linear algebra.
    pub fn code_meet(&self, other: &AgCode) -> Result<AgCode> {
        self.same_setting(other)?;
        let join = self.g.join(&other.g);
        if join.degree() >= self.n() as i64 {
            return Err(hypothesis("meet of evaluation codes", format!("deg(G1 ∪ G2) = {} < n = {}", join.degree(), self.n())));
        }
        let meet = AgCode::evaluation_code(&self.curve, &self.d, &self.g.meet(&other.g))?;
        if meet.code != self.code.intersect(&other.code)? {
            return Err(Error::Assertion(format!(
                "C_L(D,G1) ∩ C_L(D,G2) differs from C_L(D, {})",
                self.curve.format_divisor(meet.divisor())
            )));
        }
        Ok(meet)
    }

    /// `C_L(D,G1) + C_L(D,G2) = C_L(D, G1 ∪ G2)`, checked against linear algebra.
    pub fn code_join(&self, other: &AgCode) -> Result<AgCode> {
        self.same_setting(other)?;
        let (meet, join) = (self.g.meet(&other.g), self.g.join(&other.g));
        let g2 = 2 * self.curve.genus() - 2;
        if meet.degree() <= g2 || join.degree() >= self.n() as i64 {
            return Err(hypothesis(
                "sum of evaluation codes",
                format!(
                    "2g - 2 = {g2} < deg(G1 ∩ G2) = {} and deg(G1 ∪ G2) = {} < n = {}",
                    meet.degree(),
                    join.degree(),
                    self.n()
                ),
            ));
        }
        let sum = AgCode::evaluation_code(&self.curve, &self.d, &join)?;
        if sum.code != self.code.sum(&other.code)? {
            return Err(Error::Assertion(format!(
                "C_L(D,G1) + C_L(D,G2) differs from C_L(D, {})",
                self.curve.format_divisor(sum.divisor())
            )));
        }
        Ok(sum)
    }

    /// `G⊥ = D - G + (η)` for the standard differential of this evaluation divisor.
    pub fn dual_divisor(&self) -> Result<Divisor> {
        let eta = self.curve.eta_divisor(&self.d)?;
        Ok(dual_divisor(&self.g, &Divisor::sum_of(&self.d), &eta))
    }

    /// The dual code, asserted equal to `C_L(D, G⊥)` with columns scaled by
    /// [`Curve::eta_weights`] (a constant scaling whenever the differential
    /// has equal residues along `D`).
    pub fn dual_code_check(&self) -> Result<LinearCode> {
        let dual = self.code.dual();
        let gp = self.dual_divisor()?;
        let other = AgCode::evaluation_code(&self.curve, &self.d, &gp)?;
        let scaled = scale_columns(other.code(), &self.curve.eta_weights(&self.d)?);
        if scaled != dual {
            return Err(Error::Assertion(format!(
                "dual of C_L(D, {}) is not C_L(D, {})",
                self.curve.format_divisor(&self.g),
                self.curve.format_divisor(&gp)
            )));
        }
        Ok(dual)
    }
}

/// Multiplies column `i` of every codeword by `w[i]`.
pub fn scale_columns(c: &LinearCode, w: &[Fe]) -> LinearCode {
    let f = c.field();
    let g = c.generator();
    let mut m = g.clone();
    for r in 0..g.rows() {
        for (i, &wi) in w.iter().enumerate() {
            m.set(r, i, f.mul(g.get(r, i), wi));
        }
    }
    LinearCode::from_generator(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::Field;

    fn line5() -> Curve {
        Curve::rational(&Field::new(5, 1).unwrap())
    }

    #[test]
    fn rational_examples() {
        let c = line5();
        let a = AgCode::standard(&c, &c.two_point(0, 2)).unwrap();
        assert_eq!((a.n(), a.k(), a.designed_distance()), (4, 3, 2));
        // deg(G) >= n: the evaluation map loses dimension.
        let big = AgCode::standard(&c, &c.two_point(0, 5)).unwrap();
        assert_eq!(big.k(), 4);
        assert!(big.basis().len() > big.k());
        assert_eq!(AgCode::standard(&c, &c.two_point(-2, 1)).unwrap().k(), 0);
    }

    #[test]
    fn meet_and_join_examples() {
        let c = line5();
        let a = AgCode::standard(&c, &c.two_point(1, 1)).unwrap();
        let b = AgCode::standard(&c, &c.two_point(0, 2)).unwrap();
        let m = a.code_meet(&b).unwrap();
        assert_eq!(m.divisor(), &c.two_point(0, 1));
        assert_eq!(m.k(), 2);
        assert_eq!(a.code_meet(&a).unwrap().code(), a.code());
        let j = a.code_join(&b).unwrap();
        assert_eq!(j.divisor(), &c.two_point(1, 2));
        assert_eq!(j.k(), 4);
    }

    #[test]
    fn errors() {
        let c = line5();
        let mut d = c.standard_d();
        d.push(d[0]);
        assert!(matches!(AgCode::evaluation_code(&c, &d, &c.two_point(0, 1)), Err(Error::InvalidPlaces(_))));
        let d = c.affine_places();
        assert!(matches!(AgCode::evaluation_code(&c, &d, &c.two_point(1, 1)), Err(Error::InvalidPlaces(_))));
        let a = AgCode::standard(&c, &c.two_point(1, 2)).unwrap();
        let b = AgCode::standard(&c, &c.two_point(0, 3)).unwrap();
        assert!(matches!(a.code_meet(&b), Err(Error::Hypothesis { .. })));
    }

    #[test]
    fn dual_examples() {
        let c = line5();
        let a = AgCode::standard(&c, &c.two_point(0, 2)).unwrap();
        assert_eq!(a.dual_divisor().unwrap(), c.two_point(-1, 1));
        let dual = a.dual_code_check().unwrap();
        assert_eq!(dual.dual(), *a.code());
        let h = Curve::hermitian(2).unwrap();
        let a = AgCode::standard(&h, &h.two_point(0, 3)).unwrap();
        a.dual_code_check().unwrap();
    }
}
