//! Exact scalar arithmetic for the geometric realization.
//!
//! Scalars live in the real number field Q(theta) with theta = 2cos(pi/N),
//! where N is chosen from the bond orders of the Coxeter matrix so that
//! cos(pi/m) lies in the field for every bond m. Crystallographic simply-laced
//! systems get plain Q; type B/F gets Q(sqrt 2); H3/H4 the golden field; a
//! general bond m contributes the real cyclotomic field of 2cos(pi/m).
//!
//! Elements are polynomials in theta reduced modulo the minimal polynomial.
//! Comparisons use the real embedding sending theta to 2cos(pi/N), decided
//! exactly by Sturm-sequence root isolation plus interval refinement. No
//! floating point anywhere.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Q = BigRational;

fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn q_ratio(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

// ---------------------------------------------------------------------------
// Dense rational polynomials, little-endian coefficients.

fn trim(p: &mut Vec<Q>) {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn poly_is_zero(p: &[Q]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn poly_add(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    let mut out = vec![Q::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(&mut out);
    out
}

fn poly_neg(a: &[Q]) -> Vec<Q> {
    a.iter().map(|c| -c).collect()
}

fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if poly_is_zero(a) || poly_is_zero(b) {
        return vec![Q::zero()];
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] += ca * cb;
            }
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder of a by b (b nonzero).
fn poly_divmod(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut rem: Vec<Q> = a.to_vec();
    trim(&mut rem);
    let mut bb = b.to_vec();
    trim(&mut bb);
    let db = bb.len() - 1;
    let lead = bb[db].clone();
    assert!(!lead.is_zero(), "division by zero polynomial");
    if rem.len() - 1 < db || poly_is_zero(&rem) {
        return (vec![Q::zero()], rem);
    }
    let mut quot = vec![Q::zero(); rem.len() - db];
    while !poly_is_zero(&rem) && rem.len() > db {
        let dr = rem.len() - 1;
        let c = &rem[dr] / &lead;
        quot[dr - db] = c.clone();
        for i in 0..=db {
            let t = &bb[i] * &c;
            rem[dr - db + i] -= t;
        }
        trim(&mut rem);
        if rem.len() == 1 && rem[0].is_zero() {
            break;
        }
        if rem.len() - 1 < db {
            break;
        }
    }
    trim(&mut quot);
    (quot, rem)
}

fn poly_derivative(p: &[Q]) -> Vec<Q> {
    if p.len() <= 1 {
        return vec![Q::zero()];
    }
    let mut out: Vec<Q> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * q_int(i as i64))
        .collect();
    trim(&mut out);
    out
}

fn poly_eval(p: &[Q], x: &Q) -> Q {
    let mut acc = Q::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Interval evaluation of p over [lo, hi] by Horner with interval arithmetic.
fn poly_eval_interval(p: &[Q], lo: &Q, hi: &Q) -> (Q, Q) {
    let mut alo = Q::zero();
    let mut ahi = Q::zero();
    for c in p.iter().rev() {
        // [alo, ahi] * [lo, hi]
        let cands = [&alo * lo, &alo * hi, &ahi * lo, &ahi * hi];
        let mut nlo = cands[0].clone();
        let mut nhi = cands[0].clone();
        for c in &cands[1..] {
            if *c < nlo {
                nlo = c.clone();
            }
            if *c > nhi {
                nhi = c.clone();
            }
        }
        alo = nlo + c;
        ahi = nhi + c;
    }
    (alo, ahi)
}

/// The n-th cyclotomic polynomial, computed by exact division.
fn cyclotomic(n: u32) -> Vec<Q> {
    let mut num = vec![Q::zero(); n as usize + 1];
    num[0] = -Q::one();
    num[n as usize] = Q::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let (q, r) = poly_divmod(&num, &cyclotomic(d));
            assert!(poly_is_zero(&r), "cyclotomic division must be exact");
            num = q;
        }
    }
    num
}

/// Monic Chebyshev-like polynomials with C_k(2cos t) = 2cos(k t).
fn chebyshev_c(k: u32) -> Vec<Q> {
    let mut prev = vec![q_int(2)]; // C_0 = 2
    if k == 0 {
        return prev;
    }
    let mut cur = vec![Q::zero(), Q::one()]; // C_1 = x
    for _ in 1..k {
        let next = poly_add(&poly_mul(&cur, &[Q::zero(), Q::one()]), &poly_neg(&prev));
        prev = cur;
        cur = next;
    }
    cur
}

/// Minimal polynomial of 2cos(pi/n) for n >= 4, via the palindromic
/// substitution z + 1/z applied to the cyclotomic polynomial of order 2n.
fn min_poly_two_cos_pi_over(n: u32) -> Vec<Q> {
    let phi = cyclotomic(2 * n);
    let deg = phi.len() - 1;
    assert!(deg.is_multiple_of(2), "cyclotomic degree must be even for n >= 4");
    let half = deg / 2;
    // phi(z)/z^half = a_half + sum_k a_{half+k} (z^k + z^-k)
    let mut psi = vec![phi[half].clone()];
    for k in 1..=half {
        psi = poly_add(&psi, &poly_mul(&[phi[half + k].clone()], &chebyshev_c(k as u32)));
    }
    psi
}

fn sturm_chain(p: &[Q]) -> Vec<Vec<Q>> {
    let mut chain = vec![p.to_vec(), poly_derivative(p)];
    loop {
        let n = chain.len();
        let (_, r) = poly_divmod(&chain[n - 2], &chain[n - 1]);
        if poly_is_zero(&r) {
            break;
        }
        chain.push(poly_neg(&r));
    }
    chain
}

fn sign_variations(chain: &[Vec<Q>], x: &Q) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None;
    for p in chain {
        let v = poly_eval(p, x);
        if v.is_zero() {
            continue;
        }
        let pos = v.is_positive();
        if let Some(l) = last {
            if l != pos {
                count += 1;
            }
        }
        last = Some(pos);
    }
    count
}

/// Number of distinct roots in the half-open interval (a, b].
fn roots_in(chain: &[Vec<Q>], a: &Q, b: &Q) -> usize {
    sign_variations(chain, a) - sign_variations(chain, b)
}

// ---------------------------------------------------------------------------

/// The real field Q(2cos(pi/N)) shared by all scalars of one realization.
#[derive(Debug)]
pub struct NumberField {
    /// theta = 2cos(pi/conductor); conductor <= 3 means the field is Q itself.
    conductor: u32,
    degree: usize,
    /// Minimal polynomial of theta (monic), for degree > 1.
    min_poly: Vec<Q>,
    sturm: Vec<Vec<Q>>,
    /// Interval (lo, hi] isolating theta from its conjugates, pre-refined.
    iso_lo: Q,
    iso_hi: Q,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.conductor == other.conductor
    }
}
impl Eq for NumberField {}

impl std::hash::Hash for NumberField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.conductor.hash(state);
    }
}

impl NumberField {
    /// Field of the rationals.
    pub fn rational() -> Arc<NumberField> {
        Arc::new(NumberField {
            conductor: 3,
            degree: 1,
            min_poly: vec![-Q::one(), Q::one()],
            sturm: Vec::new(),
            iso_lo: Q::zero(),
            iso_hi: Q::zero(),
        })
    }

    /// Smallest field of the family containing cos(pi/m) for every listed
    /// bond order. Bonds of 2 and 3 have rational cosine and contribute
    /// nothing; each bond m >= 4 contributes 2cos(pi/m).
    pub fn for_bonds(bonds: &[u32]) -> Arc<NumberField> {
        let mut n: u32 = 1;
        for &m in bonds {
            if m >= 4 {
                n = num_integer::lcm(n, m);
            }
        }
        if n < 4 {
            return Self::rational();
        }
        let min_poly = min_poly_two_cos_pi_over(n);
        let degree = min_poly.len() - 1;
        let sturm = sturm_chain(&min_poly);
        // theta is the largest real root of its minimal polynomial; isolate
        // it in (lo, 2] and then refine the interval for fast sign queries.
        let two = q_int(2);
        let mut lo = Q::one();
        let mut hi_bound = two.clone();
        debug_assert!(roots_in(&sturm, &lo, &two) >= 1);
        while roots_in(&sturm, &lo, &two) != 1 {
            let mid = (&lo + &hi_bound) / q_int(2);
            if roots_in(&sturm, &mid, &two) >= 1 {
                lo = mid;
            } else {
                hi_bound = mid;
            }
        }
        let mut hi = two;
        for _ in 0..96 {
            let mid = (&lo + &hi) / q_int(2);
            if roots_in(&sturm, &mid, &hi) == 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Arc::new(NumberField {
            conductor: n,
            degree,
            min_poly,
            sturm,
            iso_lo: lo,
            iso_hi: hi,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_rational(&self) -> bool {
        self.degree == 1
    }

    fn reduce(&self, mut p: Vec<Q>) -> Vec<Q> {
        trim(&mut p);
        if p.len() > self.degree {
            let (_, r) = poly_divmod(&p, &self.min_poly);
            p = r;
        }
        p.resize(self.degree, Q::zero());
        p
    }

    pub fn scalar_from_rational(self: &Arc<Self>, q: Q) -> Scalar {
        let mut coeffs = vec![Q::zero(); self.degree];
        coeffs[0] = q;
        Scalar {
            field: Arc::clone(self),
            coeffs,
        }
    }

    pub fn zero(self: &Arc<Self>) -> Scalar {
        self.scalar_from_rational(Q::zero())
    }

    pub fn one(self: &Arc<Self>) -> Scalar {
        self.scalar_from_rational(Q::one())
    }

    pub fn integer(self: &Arc<Self>, n: i64) -> Scalar {
        self.scalar_from_rational(q_int(n))
    }

    pub fn ratio(self: &Arc<Self>, n: i64, d: i64) -> Scalar {
        self.scalar_from_rational(q_ratio(n, d))
    }

    /// The generator theta = 2cos(pi/conductor).
    pub fn theta(self: &Arc<Self>) -> Scalar {
        if self.degree == 1 {
            // conductor 3: theta = 1.
            return self.one();
        }
        let mut coeffs = vec![Q::zero(); self.degree];
        coeffs[1] = Q::one();
        Scalar {
            field: Arc::clone(self),
            coeffs,
        }
    }

    /// cos(pi/m) as a field element. Requires m to divide the conductor when
    /// an extension is needed (guaranteed by `for_bonds` construction).
    pub fn cos_pi_over(self: &Arc<Self>, m: u32) -> Scalar {
        match m {
            1 => self.integer(-1),
            2 => self.zero(),
            3 => self.ratio(1, 2),
            _ => {
                assert!(
                    self.conductor.is_multiple_of(m),
                    "cos(pi/{m}) does not lie in Q(2cos(pi/{}))",
                    self.conductor
                );
                let c = chebyshev_c(self.conductor / m);
                let half: Vec<Q> = c.iter().map(|q| q / q_int(2)).collect();
                Scalar {
                    field: Arc::clone(self),
                    coeffs: self.reduce(half),
                }
            }
        }
    }

    /// Exact sign of the real embedding of the reduced coefficient vector.
    fn sign_of(&self, coeffs: &[Q]) -> Ordering {
        if coeffs.iter().all(|c| c.is_zero()) {
            return Ordering::Equal;
        }
        if self.degree == 1 {
            return coeffs[0].cmp(&Q::zero());
        }
        let mut lo = self.iso_lo.clone();
        let mut hi = self.iso_hi.clone();
        loop {
            let (vlo, vhi) = poly_eval_interval(coeffs, &lo, &hi);
            if vlo.is_positive() {
                return Ordering::Greater;
            }
            if vhi.is_negative() {
                return Ordering::Less;
            }
            // Refine the isolating interval and retry; the value is nonzero,
            // so this terminates.
            let mid = (&lo + &hi) / q_int(2);
            if roots_in(&self.sturm, &mid, &hi) == 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
}

/// An element of the ambient number field.
#[derive(Debug, Clone)]
pub struct Scalar {
    field: Arc<NumberField>,
    coeffs: Vec<Q>,
}

impl Scalar {
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn sign(&self) -> Ordering {
        self.field.sign_of(&self.coeffs)
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "division by zero scalar");
        if self.field.degree == 1 {
            return self.field.scalar_from_rational(self.coeffs[0].recip());
        }
        // Extended Euclid in Q[x]: u*self + v*psi = gcd (a nonzero constant).
        let mut r0 = self.field.min_poly.clone();
        let mut r1 = self.coeffs.clone();
        trim(&mut r1);
        let mut u0: Vec<Q> = vec![Q::zero()];
        let mut u1: Vec<Q> = vec![Q::one()];
        while !poly_is_zero(&r1) && r1.len() > 1 {
            let (q, r) = poly_divmod(&r0, &r1);
            let nu = poly_add(&u0, &poly_neg(&poly_mul(&q, &u1)));
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = nu;
        }
        assert!(!poly_is_zero(&r1), "minimal polynomial must be irreducible");
        let g = r1[0].clone();
        let inv: Vec<Q> = u1.iter().map(|c| c / &g).collect();
        Scalar {
            field: Arc::clone(&self.field),
            coeffs: self.field.reduce(inv),
        }
    }

    fn assert_same_field(&self, other: &Scalar) {
        assert!(
            self.field == other.field,
            "scalars from different number fields"
        );
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}
impl Eq for Scalar {}

impl std::hash::Hash for Scalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.assert_same_field(other);
        let diff: Vec<Q> = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        self.field.sign_of(&diff)
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, other: &Scalar) -> Scalar {
                self.assert_same_field(other);
                let $a = self;
                let $b = other;
                $body
            }
        }
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, other: Scalar) -> Scalar {
                (&self).$method(&other)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, other: &Scalar) -> Scalar {
                (&self).$method(other)
            }
        }
    };
}

scalar_binop!(Add, add, |a, b| Scalar {
    field: Arc::clone(&a.field),
    coeffs: a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(x, y)| x + y)
        .collect(),
});

scalar_binop!(Sub, sub, |a, b| Scalar {
    field: Arc::clone(&a.field),
    coeffs: a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(x, y)| x - y)
        .collect(),
});

scalar_binop!(Mul, mul, |a, b| {
    let prod = poly_mul(&a.coeffs, &b.coeffs);
    Scalar {
        field: Arc::clone(&a.field),
        coeffs: a.field.reduce(prod),
    }
});

scalar_binop!(Div, div, |a, b| a.mul(&b.inv()));

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}
impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff_is_one = mag.is_one();
            match k {
                0 => write!(f, "{mag}")?,
                1 => {
                    if coeff_is_one {
                        write!(f, "t")?;
                    } else {
                        write!(f, "{mag}*t")?;
                    }
                }
                _ => {
                    if coeff_is_one {
                        write!(f, "t^{k}")?;
                    } else {
                        write!(f, "{mag}*t^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
