//! Exact bivariate integer polynomials in `s` and `t`.

use alloc::collections::BTreeMap;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// Sparse polynomial keyed by `(deg_s, deg_t)`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), i64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0, 0)
    }

    pub fn monomial(coeff: i64, s: u32, t: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(s, t, coeff);
        p
    }

    pub fn s() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn t() -> Self {
        Self::monomial(1, 0, 1)
    }

    /// `(s^a t^b - 1)(s^c t^d - 1)`, expanded.
    pub fn binomial_product(a: u32, b: u32, c: u32, d: u32) -> Self {
        (Self::monomial(1, a, b) - Self::one()) * (Self::monomial(1, c, d) - Self::one())
    }

    pub fn add_term(&mut self, s: u32, t: u32, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let e = self.terms.entry((s, t)).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.terms.remove(&(s, t));
        }
    }

    pub fn coeff(&self, s: u32, t: u32) -> i64 {
        self.terms.get(&(s, t)).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms sorted by `(deg_s, deg_t)`.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), i64)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(&d, &c)| (d, c * k)).collect() }
    }

    pub fn eval(&self, s: i64, t: i64) -> i64 {
        self.terms.iter().map(|(&(a, b), &c)| c * s.pow(a) * t.pow(b)).sum()
    }
}

impl AddAssign<&Poly2> for Poly2 {
    fn add_assign(&mut self, rhs: &Poly2) {
        for (&(s, t), &c) in &rhs.terms {
            self.add_term(s, t, c);
        }
    }
}

impl SubAssign<&Poly2> for Poly2 {
    fn sub_assign(&mut self, rhs: &Poly2) {
        for (&(s, t), &c) in &rhs.terms {
            self.add_term(s, t, -c);
        }
    }
}

impl Add for Poly2 {
    type Output = Poly2;
    fn add(mut self, rhs: Poly2) -> Poly2 {
        self += &rhs;
        self
    }
}

impl Sub for Poly2 {
    type Output = Poly2;
    fn sub(mut self, rhs: Poly2) -> Poly2 {
        self -= &rhs;
        self
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        self.scale(-1)
    }
}

impl Mul for Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(a, b), &c) in &self.terms {
            for (&(x, y), &d) in &rhs.terms {
                out.add_term(a + x, b + y, c * d);
            }
        }
        out
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Highest degree first reads more naturally.
        for (i, (&(a, b), &c)) in self.terms.iter().rev().enumerate() {
            let mag = c.unsigned_abs();
            if i == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            }
            let constant = a == 0 && b == 0;
            if mag != 1 || constant {
                write!(f, "{mag}")?;
            }
            match a {
                0 => {}
                1 => f.write_str("s")?,
                _ => write!(f, "s^{a}")?,
            }
            match b {
                0 => {}
                1 => f.write_str("t")?,
                _ => write!(f, "t^{b}")?,
            }
        }
        Ok(())
    }
}
