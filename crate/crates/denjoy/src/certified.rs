use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::fmt;

/// A certified enclosure of a real number: the represented value lies in
/// `[midpoint - radius, midpoint + radius]`, both bounds exact rationals.
///
/// All approximate reals in this crate flow through this type; there is no
/// bare floating point in any contract.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedValue {
    midpoint: BigRational,
    radius: BigRational,
}

impl CertifiedValue {
    pub fn new(midpoint: BigRational, radius: BigRational) -> Self {
        assert!(!radius.is_negative(), "radius must be nonnegative");
        CertifiedValue { midpoint, radius }
    }

    /// Enclosure of an exactly known rational: radius 0.
    pub fn exact(value: BigRational) -> Self {
        CertifiedValue {
            midpoint: value,
            radius: BigRational::zero(),
        }
    }

    pub fn from_bounds(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi);
        let two = BigRational::from(BigInt::from(2));
        CertifiedValue {
            midpoint: (&lo + &hi) / &two,
            radius: (&hi - &lo) / two,
        }
    }

    pub fn midpoint(&self) -> &BigRational {
        &self.midpoint
    }

    pub fn radius(&self) -> &BigRational {
        &self.radius
    }

    pub fn lower(&self) -> BigRational {
        &self.midpoint - &self.radius
    }

    pub fn upper(&self) -> BigRational {
        &self.midpoint + &self.radius
    }

    pub fn is_exact(&self) -> bool {
        self.radius.is_zero()
    }

    pub fn add(&self, other: &CertifiedValue) -> CertifiedValue {
        CertifiedValue {
            midpoint: &self.midpoint + &other.midpoint,
            radius: &self.radius + &other.radius,
        }
    }

    pub fn sub(&self, other: &CertifiedValue) -> CertifiedValue {
        CertifiedValue {
            midpoint: &self.midpoint - &other.midpoint,
            radius: &self.radius + &other.radius,
        }
    }

    pub fn add_exact(&self, value: &BigRational) -> CertifiedValue {
        CertifiedValue {
            midpoint: &self.midpoint + value,
            radius: self.radius.clone(),
        }
    }

    pub fn neg(&self) -> CertifiedValue {
        CertifiedValue {
            midpoint: -self.midpoint.clone(),
            radius: self.radius.clone(),
        }
    }

    /// Translate the midpoint by an integer so it lands in [0, 1).
    /// The enclosure keeps its radius; near the seam it may poke outside
    /// [0, 1), which is read modulo 1.
    pub fn reduce_mod_one(&self) -> CertifiedValue {
        let shift = self.midpoint.floor();
        CertifiedValue {
            midpoint: &self.midpoint - shift,
            radius: self.radius.clone(),
        }
    }

    pub fn contains(&self, value: &BigRational) -> bool {
        &self.lower() <= value && value <= &self.upper()
    }

    /// Certified upper bound on |a - b| over all representatives.
    pub fn distance_upper_bound(&self, other: &CertifiedValue) -> BigRational {
        (&self.midpoint - &other.midpoint).abs() + &self.radius + &other.radius
    }

    /// Certified upper bound on the circle distance between the enclosed
    /// values, both read modulo 1.
    pub fn circle_distance_upper_bound(&self, other: &CertifiedValue) -> BigRational {
        let spread = &self.radius + &other.radius;
        let lo = (&self.midpoint - &other.midpoint) - &spread;
        let hi = (&self.midpoint - &other.midpoint) + &spread;
        let one = BigRational::from(BigInt::from(1));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        if &hi - &lo >= one {
            return half;
        }
        // shift so the interval starts in [0, 1); the norm peaks at every
        // half-integer, so check whether one lies inside
        let f = &lo - lo.floor();
        let g = &f + (&hi - &lo);
        let three_halves = BigRational::new(BigInt::from(3), BigInt::from(2));
        if (f <= half && g >= half) || (f <= three_halves && g >= three_halves) {
            return half;
        }
        let bound_lo = circle_norm(&f);
        let bound_hi = circle_norm(&g);
        if bound_lo > bound_hi {
            bound_lo
        } else {
            bound_hi
        }
    }

    /// `Some(true)` if certainly less, `Some(false)` if certainly greater or
    /// equal beyond doubt fails; `None` when the enclosures overlap.
    pub fn certified_lt(&self, other: &CertifiedValue) -> Option<bool> {
        if self.upper() < other.lower() {
            Some(true)
        } else if self.lower() > other.upper() {
            Some(false)
        } else {
            None
        }
    }
}

/// Distance from a rational in [0, 1] to the nearest integer.
pub fn circle_norm(x: &BigRational) -> BigRational {
    let frac = x - x.floor();
    let one = BigRational::from(BigInt::from(1));
    let alt = &one - &frac;
    if frac < alt {
        frac
    } else {
        alt
    }
}

/// Render an exact rational as "p/q".
pub fn rational_to_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parse "p/q", a plain integer, a decimal like "0.25", or scientific
/// shorthand like "1e-10" into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let num: BigInt = p.trim().parse().ok()?;
        let den: BigInt = q.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    if let Some((mant, exp)) = t.split_once(['e', 'E']) {
        let base = parse_rational(mant)?;
        let exp: i32 = exp.parse().ok()?;
        let ten = BigInt::from(10);
        let scale = ten.pow(exp.unsigned_abs());
        return Some(if exp >= 0 {
            base * BigRational::from(scale)
        } else {
            base / BigRational::from(scale)
        });
    }
    if let Some((int, frac)) = t.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().ok()?
        };
        if frac.is_empty() {
            return Some(BigRational::from(int_part));
        }
        let digits: BigInt = frac.parse().ok()?;
        if digits.is_negative() {
            return None;
        }
        let den = BigInt::from(10).pow(frac.len() as u32);
        let frac_part = BigRational::new(digits, den);
        let int_rat = BigRational::from(int_part);
        return Some(if negative {
            int_rat - frac_part
        } else {
            int_rat + frac_part
        });
    }
    let num: BigInt = t.parse().ok()?;
    Some(BigRational::from(num))
}

impl fmt::Display for CertifiedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} +/- {}",
            rational_to_string(&self.midpoint),
            rational_to_string(&self.radius)
        )
    }
}
