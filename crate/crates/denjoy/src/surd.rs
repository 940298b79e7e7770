use crate::certified::CertifiedValue;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Exact arithmetic on numbers of the form `a + b*sqrt(d)` with rational
/// `a`, `b` and a fixed positive non-square radicand `d`.
///
/// This is the workhorse behind every "exact" comparison in the crate:
/// quadratic irrationals coming from periodic continued fractions are closed
/// under the field operations used here, so order comparisons never need a
/// tolerance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticSurd {
    a: BigRational,
    b: BigRational,
    d: BigInt,
}

impl QuadraticSurd {
    pub fn new(a: BigRational, b: BigRational, d: BigInt) -> Self {
        assert!(d.is_positive(), "radicand must be positive");
        let (scale, reduced) = extract_square_part(&d);
        let b = b * BigRational::from(scale);
        if reduced.is_one() {
            // the radical collapsed to an integer
            QuadraticSurd {
                a: a + &b,
                b: BigRational::zero(),
                d: BigInt::one(),
            }
        } else if b.is_zero() {
            QuadraticSurd {
                a,
                b,
                d: BigInt::one(),
            }
        } else {
            QuadraticSurd { a, b, d: reduced }
        }
    }

    pub fn from_rational(a: BigRational) -> Self {
        QuadraticSurd {
            a,
            b: BigRational::zero(),
            d: BigInt::one(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    fn check_compatible(&self, other: &QuadraticSurd) -> Result<()> {
        if self.b.is_zero() || other.b.is_zero() || self.d == other.d {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "incompatible radicands {} and {}",
                self.d, other.d
            )))
        }
    }

    fn common_radicand(&self, other: &QuadraticSurd) -> BigInt {
        if self.b.is_zero() {
            other.d.clone()
        } else {
            self.d.clone()
        }
    }

    pub fn add(&self, other: &QuadraticSurd) -> Result<QuadraticSurd> {
        self.check_compatible(other)?;
        let d = self.common_radicand(other);
        Ok(QuadraticSurd::new(
            &self.a + &other.a,
            &self.b + &other.b,
            d,
        ))
    }

    pub fn sub(&self, other: &QuadraticSurd) -> Result<QuadraticSurd> {
        self.check_compatible(other)?;
        let d = self.common_radicand(other);
        Ok(QuadraticSurd::new(
            &self.a - &other.a,
            &self.b - &other.b,
            d,
        ))
    }

    pub fn add_rational(&self, r: &BigRational) -> QuadraticSurd {
        QuadraticSurd {
            a: &self.a + r,
            b: self.b.clone(),
            d: self.d.clone(),
        }
    }

    pub fn mul_rational(&self, r: &BigRational) -> QuadraticSurd {
        if r.is_zero() {
            return QuadraticSurd::from_rational(BigRational::zero());
        }
        QuadraticSurd {
            a: &self.a * r,
            b: &self.b * r,
            d: self.d.clone(),
        }
    }

    pub fn mul_int(&self, n: &BigInt) -> QuadraticSurd {
        self.mul_rational(&BigRational::from(n.clone()))
    }

    pub fn neg(&self) -> QuadraticSurd {
        QuadraticSurd {
            a: -self.a.clone(),
            b: -self.b.clone(),
            d: self.d.clone(),
        }
    }

    /// Multiplicative inverse, via the conjugate.
    pub fn recip(&self) -> Result<QuadraticSurd> {
        let norm = &self.a * &self.a - &self.b * &self.b * BigRational::from(self.d.clone());
        if norm.is_zero() {
            if self.a.is_zero() && self.b.is_zero() {
                return Err(Error::InvalidInput("division by zero".into()));
            }
            // a^2 = b^2 d with a,b nonzero would make sqrt(d) rational
            return Err(Error::InvalidInput("degenerate surd".into()));
        }
        Ok(QuadraticSurd {
            a: &self.a / &norm,
            b: -(&self.b / &norm),
            d: self.d.clone(),
        })
    }

    /// Image under the fractional linear map `(p*x + q) / (r*x + s)`.
    pub fn mobius(&self, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) -> Result<QuadraticSurd> {
        let num = self
            .mul_rational(&BigRational::from(p.clone()))
            .add_rational(&BigRational::from(q.clone()));
        let den = self
            .mul_rational(&BigRational::from(r.clone()))
            .add_rational(&BigRational::from(s.clone()));
        num.mul_surd(&den.recip()?)
    }

    /// Full product; only needed with compatible radicands.
    pub fn mul_surd(&self, other: &QuadraticSurd) -> Result<QuadraticSurd> {
        self.check_compatible(other)?;
        let d = self.common_radicand(other);
        let drat = BigRational::from(d.clone());
        let a = &self.a * &other.a + &self.b * &other.b * &drat;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(QuadraticSurd::new(a, b, d))
    }

    /// Sign of the represented real number.
    pub fn sign(&self) -> Ordering {
        if self.b.is_zero() {
            return self.a.cmp(&BigRational::zero());
        }
        if self.a.is_zero() {
            return self.b.cmp(&BigRational::zero());
        }
        match (self.a.is_positive(), self.b.is_positive()) {
            (true, true) => Ordering::Greater,
            (false, false) => Ordering::Less,
            (true, false) => {
                // a > 0 > b: sign of a^2 - b^2 d
                let lhs = &self.a * &self.a;
                let rhs = &self.b * &self.b * BigRational::from(self.d.clone());
                lhs.cmp(&rhs)
            }
            (false, true) => {
                let lhs = &self.b * &self.b * BigRational::from(self.d.clone());
                let rhs = &self.a * &self.a;
                lhs.cmp(&rhs)
            }
        }
    }

    pub fn cmp_surd(&self, other: &QuadraticSurd) -> Result<Ordering> {
        Ok(self.sub(other)?.sign())
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        self.add_rational(&-r.clone()).sign()
    }

    /// Exact floor, computed through the integer form `(P + sqrt(D)) / Q`.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor().to_integer();
        }
        let (p, q, d) = self.integer_form();
        floor_quadratic(&p, &d, &q)
    }

    pub fn fractional_part(&self) -> QuadraticSurd {
        self.add_rational(&-BigRational::from(self.floor()))
    }

    /// Write the value as `(P + sqrt(D)) / Q` with integer `P`, `Q` and the
    /// radical taken with positive sign.
    fn integer_form(&self) -> (BigInt, BigInt, BigInt) {
        debug_assert!(!self.b.is_zero());
        let qa = self.a.denom();
        let qb = self.b.denom();
        let q0: BigInt = qa.lcm(qb);
        let p = self.a.numer() * (&q0 / qa);
        let r = self.b.numer() * (&q0 / qb);
        let (p, r, q) = if r.is_negative() {
            (-p, -r, -q0)
        } else {
            (p, r, q0)
        };
        let d = &r * &r * &self.d;
        (p, q, d)
    }

    /// Dyadic enclosure with radius `2^-(bits+1)`.
    pub fn enclose_dyadic(&self, bits: u32) -> CertifiedValue {
        if self.b.is_zero() {
            return CertifiedValue::exact(self.a.clone());
        }
        let scale = BigInt::one() << bits;
        let scaled = self.mul_rational(&BigRational::from(scale.clone()));
        let f = scaled.floor();
        let lo = BigRational::new(f.clone(), scale.clone());
        let hi = BigRational::new(f + 1, scale);
        CertifiedValue::from_bounds(lo, hi)
    }

    /// Canonical continued-fraction expansion: returns the partial quotients
    /// before the cycle (starting with the floor) and the primitive cycle.
    ///
    /// Uses the classical `(P + sqrt(D)) / Q` recursion with `Q` dividing
    /// `D - P^2`, which is guaranteed to become periodic.
    pub fn cf_expansion(&self) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
        if self.b.is_zero() {
            return Err(Error::NonQuadratic);
        }
        let (mut p, mut q, d) = self.integer_form();
        // enforce the divisibility invariant Q | D - P^2
        let diff = &d - &p * &p;
        let (mut p, d, mut q) = if (&diff % &q).is_zero() {
            (p, d, q)
        } else {
            let qa = q.abs();
            p *= &qa;
            let d2 = &d * &q * &q;
            q *= &qa;
            (p, d2, q)
        };

        let mut quotients: Vec<BigInt> = Vec::new();
        let mut seen: Vec<(BigInt, BigInt)> = Vec::new();
        loop {
            if let Some(idx) = seen.iter().position(|(sp, sq)| sp == &p && sq == &q) {
                let prefix = quotients[..idx].to_vec();
                let cycle = quotients[idx..].to_vec();
                return Ok((prefix, cycle));
            }
            seen.push((p.clone(), q.clone()));
            let a = floor_quadratic(&p, &d, &q);
            quotients.push(a.clone());
            let p_next = &a * &q - &p;
            let q_next = (&d - &p_next * &p_next) / &q;
            if q_next.is_zero() {
                return Err(Error::InvalidInput(
                    "radicand is a perfect square; value is rational".into(),
                ));
            }
            p = p_next;
            q = q_next;
            if seen.len() > 1_000_000 {
                return Err(Error::InvalidInput(
                    "continued-fraction expansion failed to cycle".into(),
                ));
            }
        }
    }
}

/// floor((P + sqrt(D)) / Q) for non-square D > 0 and Q != 0.
fn floor_quadratic(p: &BigInt, d: &BigInt, q: &BigInt) -> BigInt {
    let s = d.sqrt();
    debug_assert!(&(&s * &s) != d, "radicand must not be a perfect square");
    if q.is_positive() {
        (p + &s).div_floor(q)
    } else {
        // (P + sqrt(D))/Q = (-P - sqrt(D))/(-Q); the numerator lies in the
        // open unit interval (-P - s - 1, -P - s)
        let num: BigInt = -p - &s - BigInt::one();
        num.div_floor(&-q)
    }
}

/// Split `d = s^2 * d0` by trial division and return `(s, d0)`.
fn extract_square_part(d: &BigInt) -> (BigInt, BigInt) {
    let mut rest = d.clone();
    let mut scale = BigInt::one();
    let mut i = BigInt::from(2);
    let limit = BigInt::from(100_000u32);
    while &i * &i <= rest && i <= limit {
        let sq = &i * &i;
        while (&rest % &sq).is_zero() {
            rest /= &sq;
            scale *= &i;
        }
        i += 1;
    }
    (scale, rest)
}

/// sqrt(d) - style constructor helpers used by tests and oracles.
pub fn sqrt_int(d: u64) -> QuadraticSurd {
    QuadraticSurd::new(BigRational::zero(), BigRational::one(), BigInt::from(d))
}
