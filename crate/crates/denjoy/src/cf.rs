use crate::certified::CertifiedValue;
use crate::error::{Error, Result};
use crate::surd::QuadraticSurd;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// An irrational rotation number in (0, 1), held as a simple continued
/// fraction `[0; a1, a2, ...]`.
///
/// A present `periodic_tail` marks a quadratic irrational and unlocks exact
/// arithmetic; a missing tail is a finite stream of known partial quotients,
/// for which every operation is depth-limited.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    prefix: Vec<u64>,
    tail: Option<Vec<u64>>,
}

impl ContinuedFraction {
    /// Build and canonicalize. The tail, when present, is reduced to its
    /// primitive period and rolled left into the prefix as far as possible,
    /// so equal values get equal representations.
    pub fn new(prefix: Vec<u64>, tail: Option<Vec<u64>>) -> Result<Self> {
        if prefix.contains(&0) {
            return Err(Error::InvalidInput("partial quotients must be >= 1".into()));
        }
        if let Some(t) = &tail {
            if t.is_empty() {
                return Err(Error::InvalidInput("periodic tail must be nonempty".into()));
            }
            if t.contains(&0) {
                return Err(Error::InvalidInput("partial quotients must be >= 1".into()));
            }
        } else if prefix.is_empty() {
            return Err(Error::InvalidInput(
                "a stream needs at least one partial quotient".into(),
            ));
        }
        let mut prefix = prefix;
        let mut tail = tail;
        if let Some(t) = &mut tail {
            let p = primitive_period(t);
            t.truncate(p);
            while let Some(&last) = prefix.last() {
                if *t.last().expect("tail nonempty") == last {
                    prefix.pop();
                    let moved = t.pop().expect("tail nonempty");
                    t.insert(0, moved);
                } else {
                    break;
                }
            }
        }
        Ok(ContinuedFraction { prefix, tail })
    }

    pub fn quadratic(prefix: Vec<u64>, tail: Vec<u64>) -> Result<Self> {
        ContinuedFraction::new(prefix, Some(tail))
    }

    pub fn stream(prefix: Vec<u64>) -> Result<Self> {
        ContinuedFraction::new(prefix, None)
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn periodic_tail(&self) -> Option<&[u64]> {
        self.tail.as_deref()
    }

    pub fn is_quadratic(&self) -> bool {
        self.tail.is_some()
    }

    /// The canonical tail for equivalence comparisons: the lexicographically
    /// least cyclic rotation of the primitive period.
    pub fn canonical_tail(&self) -> Option<Vec<u64>> {
        self.tail.as_ref().map(|t| least_rotation(t))
    }

    /// Infinite for quadratics, finite for streams.
    pub fn quotients(&self) -> impl Iterator<Item = u64> + '_ {
        self.prefix
            .iter()
            .copied()
            .chain(self.tail.iter().flat_map(|t| t.iter().copied().cycle()))
    }

    pub fn first_quotient(&self) -> Option<u64> {
        self.quotients().next()
    }

    /// The first `max` known partial quotients (fewer for a short stream).
    pub fn known_quotients(&self, max: usize) -> Vec<u64> {
        self.quotients().take(max).collect()
    }

    /// Exact value as a quadratic surd; `NonQuadratic` for streams.
    pub fn value_surd(&self) -> Result<QuadraticSurd> {
        let tail = self.tail.as_ref().ok_or(Error::NonQuadratic)?;
        // purely periodic continuation y = [t1; t2, ..., tl, t1, ...] > 1
        let mut h_prev = BigInt::one();
        let mut h = BigInt::from(tail[0]);
        let mut k_prev = BigInt::zero();
        let mut k = BigInt::one();
        for &t in &tail[1..] {
            let t = BigInt::from(t);
            let h_next = &t * &h + &h_prev;
            h_prev = std::mem::replace(&mut h, h_next);
            let k_next = &t * &k + &k_prev;
            k_prev = std::mem::replace(&mut k, k_next);
        }
        // y = (h y + h_prev) / (k y + k_prev)  =>  k y^2 + (k_prev - h) y - h_prev = 0
        let two_k = BigRational::from(BigInt::from(2) * &k);
        let disc = (&k_prev - &h) * (&k_prev - &h) + BigInt::from(4) * &k * &h_prev;
        let a = BigRational::from(&h - &k_prev) / &two_k;
        let b = BigRational::one() / two_k;
        let mut value = QuadraticSurd::new(a, b, disc);
        // fold the prefix back on: v_i = p_i + 1/v_{i+1}, and finally 1/v_1
        for &p in self.prefix.iter().rev() {
            value = value
                .recip()?
                .add_rational(&BigRational::from(BigInt::from(p)));
        }
        value.recip()
    }

    /// Canonical expansion of a quadratic surd in (0, 1).
    pub fn from_surd(x: &QuadraticSurd) -> Result<Self> {
        if x.sign() != std::cmp::Ordering::Greater
            || x.cmp_rational(&BigRational::one()) != std::cmp::Ordering::Less
        {
            return Err(Error::InvalidInput("value must lie in (0, 1)".into()));
        }
        let (pre, cycle) = x.cf_expansion()?;
        debug_assert!(pre.first().map(|a| a.is_zero()).unwrap_or(false));
        let prefix = pre[1..]
            .iter()
            .map(|a| a.to_u64().ok_or(Error::QuotientOverflow))
            .collect::<Result<Vec<u64>>>()?;
        let tail = cycle
            .iter()
            .map(|a| a.to_u64().ok_or(Error::QuotientOverflow))
            .collect::<Result<Vec<u64>>>()?;
        ContinuedFraction::new(prefix, Some(tail))
    }

    /// First `k` convergents `p_i / q_i` in lowest terms with strictly
    /// increasing denominators. The sequence starts at `0/1` except when
    /// `a1 = 1`, where `0/1` and the next convergent share denominator 1 and
    /// the leading one is dropped.
    pub fn convergents(&self, k: usize) -> Result<Vec<BigRational>> {
        if k == 0 {
            return Err(Error::InvalidInput("k must be >= 1".into()));
        }
        // a1 = 1 makes q_1 = q_0 = 1; drop the leading 0/1 in that case
        let skip = usize::from(self.first_quotient() == Some(1));
        let mut out = Vec::with_capacity(k);
        for (p, q) in self.convergent_pairs().skip(skip) {
            out.push(BigRational::new(p, q));
            if out.len() == k {
                return Ok(out);
            }
        }
        Err(Error::DepthExhausted(format!(
            "needed {} convergents, stream provides {}",
            k,
            out.len()
        )))
    }

    /// All classical convergents `(p_i, q_i)` starting from `p_0/q_0 = 0/1`.
    pub fn convergent_pairs(&self) -> impl Iterator<Item = (BigInt, BigInt)> + '_ {
        ConvergentIter {
            quotients: Box::new(self.quotients()),
            h_prev: BigInt::one(),
            h: BigInt::zero(),
            k_prev: BigInt::zero(),
            k: BigInt::one(),
            emitted_seed: false,
        }
    }

    /// Certified enclosure of the value with radius at most `eps`.
    pub fn eval(&self, eps: &BigRational) -> Result<CertifiedValue> {
        if !eps.is_positive() {
            return Err(Error::InvalidInput("precision must be positive".into()));
        }
        if let Ok(surd) = self.value_surd() {
            return Ok(surd.enclose_dyadic(bits_for(eps)));
        }
        // stream: bracket by the cylinder of the known prefix, whose
        // endpoints are the last convergent and its mediant with the previous
        let mut prev: Option<(BigInt, BigInt)> = None;
        for (p, q) in self.convergent_pairs() {
            if let Some((pp, pq)) = &prev {
                let end_a = BigRational::new(p.clone(), q.clone());
                let end_b = BigRational::new(&p + pp, &q + pq);
                let (lo, hi) = if end_a < end_b {
                    (end_a, end_b)
                } else {
                    (end_b, end_a)
                };
                let enc = CertifiedValue::from_bounds(lo, hi);
                if enc.radius() <= eps {
                    return Ok(enc);
                }
            }
            prev = Some((p, q));
        }
        Err(Error::DepthExhausted(
            "stream too short for requested precision".into(),
        ))
    }

    /// Enclosure of `{ n * alpha }` with radius at most `eps`; the integer
    /// part is removed exactly before rounding, so the radius does not grow
    /// with `|n|`.
    pub fn frac_multiple(&self, n: i64, eps: &BigRational) -> Result<CertifiedValue> {
        if n == 0 {
            return Ok(CertifiedValue::exact(BigRational::zero()));
        }
        if let Ok(surd) = self.value_surd() {
            let frac = surd.mul_int(&BigInt::from(n)).fractional_part();
            return Ok(frac.enclose_dyadic(bits_for(eps)));
        }
        let n_abs = BigRational::from(BigInt::from(n.unsigned_abs()));
        let inner = eps / (BigRational::from(BigInt::from(2)) * &n_abs);
        let base = self.eval(&inner)?;
        let mid = base.midpoint() * BigRational::from(BigInt::from(n));
        let rad = base.radius() * n_abs;
        Ok(CertifiedValue::new(mid, rad).reduce_mod_one())
    }

    /// A positive rational `b` with `min_{0 < |k| <= n} ||k alpha|| >= b`,
    /// taken from the largest convergent denominator `q_j <= n` as
    /// `b = 1 / (q_j + q_{j+1})`.
    pub fn separation_lower_bound(&self, n: u64) -> Result<BigRational> {
        if n == 0 {
            return Err(Error::InvalidInput("orbit bound must be >= 1".into()));
        }
        let n = BigInt::from(n);
        let mut best: Option<(BigInt, BigInt)> = None;
        let mut prev_q: Option<BigInt> = None;
        for (_, q) in self.convergent_pairs() {
            if let Some(pq) = prev_q.clone() {
                if pq <= n {
                    best = Some((pq.clone(), q.clone()));
                }
                if pq > n {
                    break;
                }
            }
            prev_q = Some(q);
        }
        match best {
            Some((qj, qj1)) => Ok(BigRational::new(BigInt::one(), qj + qj1)),
            None => Err(Error::DepthExhausted(
                "stream too short to bracket the orbit bound".into(),
            )),
        }
    }
}

struct ConvergentIter<'a> {
    quotients: Box<dyn Iterator<Item = u64> + 'a>,
    h_prev: BigInt,
    h: BigInt,
    k_prev: BigInt,
    k: BigInt,
    emitted_seed: bool,
}

impl Iterator for ConvergentIter<'_> {
    type Item = (BigInt, BigInt);

    fn next(&mut self) -> Option<(BigInt, BigInt)> {
        if !self.emitted_seed {
            self.emitted_seed = true;
            return Some((self.h.clone(), self.k.clone()));
        }
        let a = BigInt::from(self.quotients.next()?);
        let h_next = &a * &self.h + &self.h_prev;
        self.h_prev = std::mem::replace(&mut self.h, h_next);
        let k_next = &a * &self.k + &self.k_prev;
        self.k_prev = std::mem::replace(&mut self.k, k_next);
        Some((self.h.clone(), self.k.clone()))
    }
}

fn bits_for(eps: &BigRational) -> u32 {
    let mut bits = 0u32;
    let mut radius = BigRational::new(BigInt::one(), BigInt::from(2));
    while &radius > eps {
        bits += 1;
        radius /= BigRational::from(BigInt::from(2));
        if bits > 1_000_000 {
            panic!("unreasonable precision request");
        }
    }
    bits
}

fn primitive_period(t: &[u64]) -> usize {
    for p in 1..t.len() {
        if t.len() % p == 0 && (0..t.len()).all(|i| t[i] == t[i % p]) {
            return p;
        }
    }
    t.len()
}

fn least_rotation(t: &[u64]) -> Vec<u64> {
    let mut best = t.to_vec();
    for shift in 1..t.len() {
        let mut rotated = t[shift..].to_vec();
        rotated.extend_from_slice(&t[..shift]);
        if rotated < best {
            best = rotated;
        }
    }
    best
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[0;")?;
        let mut first = true;
        for q in &self.prefix {
            if first {
                write!(f, " {}", q)?;
                first = false;
            } else {
                write!(f, ", {}", q)?;
            }
        }
        if let Some(t) = &self.tail {
            if first {
                write!(f, " (")?;
            } else {
                write!(f, ", (")?;
            }
            for (i, q) in t.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", q)?;
            }
            write!(f, ")")?;
        }
        write!(f, "]")
    }
}

impl std::str::FromStr for ContinuedFraction {
    type Err = Error;

    /// Parses the text form `[0; 1, 2, (2, 3)]`; the parenthesized block is
    /// the periodic tail and must come last.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| Error::Parse("expected [...] around the expansion".into()))?;
        let (head, rest) = inner
            .split_once(';')
            .ok_or_else(|| Error::Parse("expected `;` after the integer part".into()))?;
        if head.trim() != "0" {
            return Err(Error::Parse("integer part must be 0".into()));
        }
        let mut prefix = Vec::new();
        let mut tail: Option<Vec<u64>> = None;
        let mut remaining = rest.trim();
        while !remaining.is_empty() {
            if tail.is_some() {
                return Err(Error::Parse("periodic tail must be the last item".into()));
            }
            if let Some(after) = remaining.strip_prefix('(') {
                let (group, after_group) = after
                    .split_once(')')
                    .ok_or_else(|| Error::Parse("unterminated periodic tail".into()))?;
                let items = parse_u64_list(group)?;
                if items.is_empty() {
                    return Err(Error::Parse("periodic tail must be nonempty".into()));
                }
                tail = Some(items);
                remaining = after_group.trim().trim_start_matches(',').trim();
            } else {
                let (item, after) = match remaining.split_once(',') {
                    Some((i, a)) => (i, a.trim()),
                    None => (remaining, ""),
                };
                let item = item.trim();
                if item.is_empty() {
                    return Err(Error::Parse("empty partial quotient".into()));
                }
                let q: u64 = item
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad partial quotient `{}`", item)))?;
                prefix.push(q);
                remaining = after;
            }
        }
        ContinuedFraction::new(prefix, tail)
    }
}

fn parse_u64_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| {
            x.parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad partial quotient `{}`", x)))
        })
        .collect()
}

/// An integer 2x2 matrix with determinant +1 or -1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix2 {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl IntegerMatrix2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        let det = &a * &d - &b * &c;
        if det != BigInt::one() && det != -BigInt::one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        Ok(IntegerMatrix2 { a, b, c, d })
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        IntegerMatrix2::new(
            BigInt::from(a),
            BigInt::from(b),
            BigInt::from(c),
            BigInt::from(d),
        )
    }

    pub fn identity() -> Self {
        IntegerMatrix2 {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    pub fn entries(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    pub fn determinant(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn inverse(&self) -> IntegerMatrix2 {
        let adj = IntegerMatrix2 {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        };
        if self.determinant() == BigInt::one() {
            adj
        } else {
            IntegerMatrix2 {
                a: -adj.a,
                b: -adj.b,
                c: -adj.c,
                d: -adj.d,
            }
        }
    }

    pub fn compose(&self, other: &IntegerMatrix2) -> IntegerMatrix2 {
        IntegerMatrix2 {
            a: &self.a * &other.a + &self.b * &other.c,
            b: &self.a * &other.b + &self.b * &other.d,
            c: &self.c * &other.a + &self.d * &other.c,
            d: &self.c * &other.b + &self.d * &other.d,
        }
    }

    /// `(a x + b) / (c x + d)` on an exact rational away from the pole.
    pub fn apply_rational(&self, x: &BigRational) -> Option<BigRational> {
        let den = BigRational::from(self.c.clone()) * x + BigRational::from(self.d.clone());
        if den.is_zero() {
            return None;
        }
        let num = BigRational::from(self.a.clone()) * x + BigRational::from(self.b.clone());
        Some(num / den)
    }
}

impl fmt::Display for IntegerMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Canonical continued fraction of `M . alpha = (a alpha + b)/(c alpha + d)`,
/// reduced by an integer translation into (0, 1).
pub fn mobius_apply(m: &IntegerMatrix2, cf: &ContinuedFraction) -> Result<ContinuedFraction> {
    Ok(mobius_apply_with_effective(m, cf)?.0)
}

/// Like [`mobius_apply`], but also returns the effective matrix
/// `T^-k . M` (with `T` the unit translation and `k` the removed integer
/// part), whose action sends the input exactly to the returned value.
pub fn mobius_apply_with_effective(
    m: &IntegerMatrix2,
    cf: &ContinuedFraction,
) -> Result<(ContinuedFraction, IntegerMatrix2)> {
    let x = cf.value_surd()?;
    let (a, b, c, d) = m.entries();
    let image = x.mobius(a, b, c, d)?;
    let shift = image.floor();
    let reduced = image.add_rational(&-BigRational::from(shift.clone()));
    let out = ContinuedFraction::from_surd(&reduced)?;
    let effective = IntegerMatrix2 {
        a: a - &shift * c,
        b: b - &shift * d,
        c: c.clone(),
        d: d.clone(),
    };
    Ok((out, effective))
}

/// Outcome of the GL(2,Z)-equivalence decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gl2zVerdict {
    /// Equivalent; carries the shared canonical tail as witness.
    Equivalent {
        tail_witness: Vec<u64>,
    },
    NotEquivalent,
    UnknownUpToDepth,
}

/// Decide GL(2,Z)-equivalence of two rotation numbers.
///
/// Two quadratic irrationals are equivalent exactly when their periodic
/// tails agree up to cyclic rotation, so that case is an exact verdict. When
/// a stream is involved, expansions are compared after deleting prefixes of
/// length at most `depth`: `NotEquivalent` then means no such alignment
/// matches on the known overlap, and `UnknownUpToDepth` that some alignment
/// stays consistent as far as the streams reach.
pub fn gl2z_equivalent(
    cf: &ContinuedFraction,
    other: &ContinuedFraction,
    depth: usize,
) -> Gl2zVerdict {
    if let (Some(t1), Some(t2)) = (cf.canonical_tail(), other.canonical_tail()) {
        if t1 == t2 {
            return Gl2zVerdict::Equivalent { tail_witness: t1 };
        }
        return Gl2zVerdict::NotEquivalent;
    }
    let budget = depth + 64;
    let q1 = cf.known_quotients(budget + depth);
    let q2 = other.known_quotients(budget + depth);
    let mut any_consistent = false;
    for i in 0..=depth.min(q1.len()) {
        for j in 0..=depth.min(q2.len()) {
            let s1 = &q1[i..];
            let s2 = &q2[j..];
            let overlap = s1.len().min(s2.len());
            if overlap == 0 {
                any_consistent = true;
                continue;
            }
            if s1[..overlap] == s2[..overlap] {
                any_consistent = true;
            }
        }
    }
    if any_consistent {
        Gl2zVerdict::UnknownUpToDepth
    } else {
        Gl2zVerdict::NotEquivalent
    }
}

/// Brute-force witness search: enumerate all integer matrices with entries
/// bounded by `bound` and determinant +-1, in shells of increasing max-entry
/// norm, and return the first whose certified Moebius image of `cf` lies
/// within `tol` of `other`. This is the independent oracle for
/// [`gl2z_equivalent`].
pub fn gl2z_matrix_search(
    cf: &ContinuedFraction,
    other: &ContinuedFraction,
    bound: u64,
    tol: &BigRational,
) -> Result<Option<IntegerMatrix2>> {
    if bound == 0 {
        return Err(Error::InvalidInput("matrix bound must be >= 1".into()));
    }
    if !tol.is_positive() {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let quarter = tol / BigRational::from(BigInt::from(4));
    let x = cf.eval(&quarter)?;
    let y = other.eval(&quarter)?;
    let (x_lo, x_hi) = (x.lower(), x.upper());
    let (y_lo, y_hi) = (y.lower(), y.upper());

    for shell in 1..=bound {
        let values = shell_values(shell);
        for &a in &values {
            for &b in &values {
                for &c in &values {
                    for &d in &values {
                        let norm = a.abs().max(b.abs()).max(c.abs()).max(d.abs()) as u64;
                        if norm != shell {
                            continue;
                        }
                        let det = a * d - b * c;
                        if det != 1 && det != -1 {
                            continue;
                        }
                        if let Some((img_lo, img_hi)) = mobius_interval(a, b, c, d, &x_lo, &x_hi) {
                            let far1 = (&img_hi - &y_lo).abs();
                            let far2 = (&y_hi - &img_lo).abs();
                            let worst = if far1 > far2 { far1 } else { far2 };
                            if &worst <= tol {
                                let m = IntegerMatrix2::from_i64(a, b, c, d)
                                    .expect("determinant checked");
                                return Ok(Some(m));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Entry values for one search shell, ordered `0, 1, -1, 2, -2, ...` so the
/// first witness is deterministic and translation-free matrices come first.
fn shell_values(shell: u64) -> Vec<i64> {
    let mut v = vec![0i64];
    for k in 1..=shell as i64 {
        v.push(k);
        v.push(-k);
    }
    v
}

/// Image of `[lo, hi]` under `(a x + b)/(c x + d)`, `None` if the pole may
/// lie inside.
fn mobius_interval(
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    lo: &BigRational,
    hi: &BigRational,
) -> Option<(BigRational, BigRational)> {
    let den_lo = BigRational::from(BigInt::from(c)) * lo + BigRational::from(BigInt::from(d));
    let den_hi = BigRational::from(BigInt::from(c)) * hi + BigRational::from(BigInt::from(d));
    if den_lo.is_zero() || den_hi.is_zero() || den_lo.is_positive() != den_hi.is_positive() {
        return None;
    }
    let f = |x: &BigRational| {
        (BigRational::from(BigInt::from(a)) * x + BigRational::from(BigInt::from(b)))
            / (BigRational::from(BigInt::from(c)) * x + BigRational::from(BigInt::from(d)))
    };
    let u = f(lo);
    let v = f(hi);
    Some(if u <= v { (u, v) } else { (v, u) })
}
