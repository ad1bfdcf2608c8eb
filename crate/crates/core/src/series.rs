//! Truncated Laurent series in one variable over a finite field.

use crate::error::{Error, Result};
use crate::galois::{Fe, Field};

/// `sum c[i] t^(val + i)`, known modulo `t^prec` where `prec = val + c.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Laurent {
    pub val: i64,
    pub c: Vec<Fe>,
}

impl Laurent {
    pub fn prec(&self) -> i64 {
        self.val + self.c.len() as i64
    }

    /// A polynomial in `t`, known up to `t^prec`.
    pub fn poly(coeffs: &[Fe], prec: i64) -> Laurent {
        let mut c = vec![Fe::ZERO; prec.max(0) as usize];
        for (i, &x) in coeffs.iter().enumerate().take(c.len()) {
            c[i] = x;
        }
        Laurent { val: 0, c }
    }

    pub fn constant(a: Fe, prec: i64) -> Laurent {
        Laurent::poly(&[a], prec)
    }

    pub fn coeff(&self, e: i64) -> Fe {
        if e < self.val || e >= self.prec() {
            Fe::ZERO
        } else {
            self.c[(e - self.val) as usize]
        }
    }

    /// Drops leading zero coefficients.
    fn normalized(&self) -> Laurent {
        let skip = self.c.iter().take_while(|x| x.is_zero()).count();
        Laurent {
            val: self.val + skip as i64,
            c: self.c[skip..].to_vec(),
        }
    }

    /// Valuation if a nonzero coefficient is known.
    #[cfg(test)]
    pub fn valuation(&self) -> Option<i64> {
        self.c
            .iter()
            .position(|x| !x.is_zero())
            .map(|i| self.val + i as i64)
    }

    pub fn add(&self, f: &Field, other: &Laurent) -> Laurent {
        let val = self.val.min(other.val);
        let prec = self.prec().min(other.prec());
        let c = (val..prec)
            .map(|e| f.add(self.coeff(e), other.coeff(e)))
            .collect();
        Laurent { val, c }
    }

    pub fn scale(&self, f: &Field, a: Fe) -> Laurent {
        Laurent {
            val: self.val,
            c: self.c.iter().map(|&x| f.mul(a, x)).collect(),
        }
    }

    pub fn mul(&self, f: &Field, other: &Laurent) -> Laurent {
        let (a, b) = (self.normalized(), other.normalized());
        let len = a.c.len().min(b.c.len());
        let mut c = vec![Fe::ZERO; len];
        for (i, &x) in a.c.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.c.iter().enumerate().take(len - i) {
                c[i + j] = f.add(c[i + j], f.mul(x, y));
            }
        }
        Laurent {
            val: a.val + b.val,
            c,
        }
    }

    pub fn inv(&self, f: &Field) -> Result<Laurent> {
        let a = self.normalized();
        let Some(&lead) = a.c.first() else {
            return Err(Error::Assertion("series inverse needs more precision".into()));
        };
        let li = f.inv(lead)?;
        let n = a.c.len();
        let mut c = vec![Fe::ZERO; n];
        c[0] = li;
        for k in 1..n {
            let mut s = Fe::ZERO;
            for j in 1..=k {
                s = f.add(s, f.mul(a.c[j], c[k - j]));
            }
            c[k] = f.neg(f.mul(li, s));
        }
        Ok(Laurent { val: -a.val, c })
    }

    pub fn powi(&self, f: &Field, e: i64, prec: i64) -> Result<Laurent> {
        let base = if e < 0 { self.inv(f)? } else { self.clone() };
        let mut acc = Laurent::constant(Fe::ONE, prec.max(base.c.len() as i64));
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(f, &base);
        }
        Ok(acc)
    }

    /// Composition `p(self)` for a polynomial `p` given by coefficients.
    pub fn compose_poly(&self, f: &Field, p: &[Fe], prec: i64) -> Laurent {
        let mut acc = Laurent::constant(Fe::ZERO, prec);
        for &a in p.iter().rev() {
            acc = acc.mul(f, self).add(f, &Laurent::constant(a, prec));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_one_plus_t() {
        let f = Field::new(5, 1).unwrap();
        let s = Laurent::poly(&[Fe(1), Fe(1)], 6);
        let inv = s.inv(&f).unwrap();
        // 1/(1+t) = 1 - t + t^2 - ...
        let expect: Vec<u32> = (0..6).map(|i| if i % 2 == 0 { 1 } else { 4 }).collect();
        assert_eq!(inv.c.iter().map(|x| x.0).collect::<Vec<_>>(), expect);
        let prod = s.mul(&f, &inv);
        assert_eq!(prod.coeff(0), Fe::ONE);
        assert!((1..6).all(|e| prod.coeff(e).is_zero()));
    }

    #[test]
    fn negative_powers_track_valuation() {
        let f = Field::new(2, 2).unwrap();
        let t = Laurent::poly(&[Fe(0), Fe(1)], 8);
        let inv = t.powi(&f, -3, 8).unwrap();
        assert_eq!(inv.valuation(), Some(-3));
        let back = inv.mul(&f, &t.powi(&f, 3, 8).unwrap());
        assert_eq!(back.valuation(), Some(0));
        assert_eq!(back.coeff(0), Fe::ONE);
    }
}
