//! Exact rational arithmetic and certified interval enclosures.
//!
//! Every interval endpoint is an exact rational; an `Interval` asserts that
//! the (possibly irrational) value it stands for lies between its endpoints.
//! That guarantee is what turns the later containment and disjointness
//! checks into proofs rather than numerics.

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// Signed integer of unbounded magnitude.
pub type Int = BigInt;
/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Shorthand for small integer literals.
pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Shorthand for small rational literals; panics on zero denominator.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(int(n), int(d))
}

/// `10^(-n)` as an exact rational.
pub fn pow10_neg(n: u32) -> Rational {
    Rational::new(Int::one(), int(10).pow(n))
}

/// A closed interval `[lo, hi]` of exact rationals certified to contain the
/// real value it represents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::EmptyInterval);
        }
        Ok(Interval { lo, hi })
    }

    /// Degenerate interval `[v, v]`.
    pub fn point(v: Rational) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / ratio(2, 1)
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    /// Closed containment `other ⊆ self`.
    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Strict containment of `self` in the open interval `(lo, hi)`.
    pub fn inside_open(&self, lo: &Rational, hi: &Rational) -> bool {
        lo < &self.lo && &self.hi < hi
    }

    pub fn is_disjoint(&self, other: &Interval) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Translate by an exact scalar.
    pub fn translate(&self, c: &Rational) -> Interval {
        Interval { lo: &self.lo + c, hi: &self.hi + c }
    }

    /// Exact interval sum `[a+c, b+d]`.
    pub fn add(&self, other: &Interval) -> Interval {
        Interval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    /// Reciprocal of a sign-definite interval.
    pub fn recip(&self) -> Result<Interval> {
        Mobius::reciprocal().eval(self)
    }

    /// Lower and upper bounds on `|v - ξ|` over all `ξ` in the interval.
    /// The lower bound is zero when `v` lies inside.
    pub fn distance_to(&self, v: &Rational) -> (Rational, Rational) {
        let d_lo = (v - &self.lo).abs();
        let d_hi = (v - &self.hi).abs();
        let upper = d_lo.clone().max(d_hi.clone());
        let lower = if self.contains(v) { Rational::zero() } else { d_lo.min(d_hi) };
        (lower, upper)
    }
}

/// The map `z ↦ (a·z + b) / (c·z + d)` with exact integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mobius {
    pub a: Int,
    pub b: Int,
    pub c: Int,
    pub d: Int,
}

impl Mobius {
    pub fn new(a: Int, b: Int, c: Int, d: Int) -> Self {
        Mobius { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mobius::new(Int::one(), Int::zero(), Int::zero(), Int::one())
    }

    /// `z ↦ 1/z`.
    pub fn reciprocal() -> Self {
        Mobius::new(Int::zero(), Int::one(), Int::one(), Int::zero())
    }

    /// `self ∘ inner`, i.e. the matrix product `self · inner`.
    pub fn compose(&self, inner: &Mobius) -> Mobius {
        Mobius {
            a: &self.a * &inner.a + &self.b * &inner.c,
            b: &self.a * &inner.b + &self.b * &inner.d,
            c: &self.c * &inner.a + &self.d * &inner.c,
            d: &self.c * &inner.b + &self.d * &inner.d,
        }
    }

    fn denominator_at(&self, z: &Rational) -> Rational {
        Rational::from(self.c.clone()) * z + Rational::from(self.d.clone())
    }

    pub fn eval_point(&self, z: &Rational) -> Result<Rational> {
        let den = self.denominator_at(z);
        if den.is_zero() {
            return Err(Error::SingularMobius);
        }
        Ok((Rational::from(self.a.clone()) * z + Rational::from(self.b.clone())) / den)
    }

    /// Exact image of an interval. The denominator `c·z + d` must be
    /// sign-definite on the whole interval; the map is then monotone there,
    /// so evaluating the two endpoints gives the exact image.
    pub fn eval(&self, z: &Interval) -> Result<Interval> {
        let den_lo = self.denominator_at(z.lo());
        let den_hi = self.denominator_at(z.hi());
        if den_lo.is_zero() || den_hi.is_zero() || den_lo.is_positive() != den_hi.is_positive() {
            return Err(Error::SingularMobius);
        }
        let at_lo = self.eval_point(z.lo())?;
        let at_hi = self.eval_point(z.hi())?;
        if at_lo <= at_hi {
            Interval::new(at_lo, at_hi)
        } else {
            Interval::new(at_hi, at_lo)
        }
    }
}

/// Enclosure of `(p·z + p2) / (q·z + q2)` over the interval `z`.
pub fn mobius_eval(p: &Int, p2: &Int, q: &Int, q2: &Int, z: &Interval) -> Result<Interval> {
    Mobius::new(p.clone(), p2.clone(), q.clone(), q2.clone()).eval(z)
}

/// Certified enclosure of the Fredholm-type series `sum_{j>=0} 1/b^(2^j)`.
///
/// The lower bound is the partial sum through `j = J`; the upper bound adds
/// the geometric majorant `b^(-2^(J+1)) · b/(b-1)` of the dropped tail
/// (every dropped exponent `2^j`, `j > J`, occurs among the exponents
/// `>= 2^(J+1)` of the full geometric series). `J` grows until the majorant
/// is at most `eps`, so convergence is doubly exponential in the work done.
pub fn fredholm_enclosure(b: u64, eps: &Rational) -> Result<Interval> {
    if b < 3 {
        return Err(Error::BaseTooSmall(b));
    }
    if !eps.is_positive() {
        return Err(Error::NonPositiveEps);
    }
    let base = Int::from(b);
    let mut pow = base.clone(); // b^(2^J), starting at J = 0
    let mut sum = Rational::new(Int::one(), pow.clone());
    loop {
        let pow_sq = &pow * &pow; // b^(2^(J+1))
        let tail = Rational::new(base.clone(), (&base - Int::one()) * &pow_sq);
        if &tail <= eps {
            let hi = &sum + tail;
            return Interval::new(sum, hi);
        }
        sum += Rational::new(Int::one(), pow_sq.clone());
        pow = pow_sq;
    }
}
