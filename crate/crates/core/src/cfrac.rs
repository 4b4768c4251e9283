//! Finite continued-fraction machinery: the convergent recursion, exact
//! evaluation, tail-substituted evaluation, and the reversed-quotient
//! identity for consecutive denominator ratios.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::numerics::{Int, Interval, Mobius, Rational};

/// A finite continued fraction `[u_0; u_1, ..., u_m]`.
///
/// `terms[0]` is the leading term and may be any value (zero included);
/// every later term must be at least 1, which keeps all intermediate
/// denominators positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCf {
    terms: Vec<u64>,
}

impl FiniteCf {
    pub fn new(terms: Vec<u64>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptyContinuedFraction);
        }
        if let Some(pos) = terms[1..].iter().position(|&t| t == 0) {
            return Err(Error::ZeroQuotient(pos + 1));
        }
        Ok(FiniteCf { terms })
    }

    /// `[0; a_1, ..., a_k]` from a slice of partial quotients.
    pub fn fractional(quotients: &[u64]) -> Result<Self> {
        let mut terms = Vec::with_capacity(quotients.len() + 1);
        terms.push(0);
        terms.extend_from_slice(quotients);
        FiniteCf::new(terms)
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor rejects empty term lists
    }

    pub fn convergents(&self) -> Convergents<std::iter::Copied<std::slice::Iter<'_, u64>>> {
        Convergents::new(self.terms.iter().copied())
    }
}

/// One convergent `s_k / t_k`, in lowest terms by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub index: usize,
    pub num: Int,
    pub den: Int,
}

/// Streaming convergent generator seeded with `s_{-2} = 0, s_{-1} = 1,
/// t_{-2} = 1, t_{-1} = 0`; each step applies `s_k = u_k s_{k-1} + s_{k-2}`
/// (and the same for `t`). State is just the last two pairs.
pub struct Convergents<I> {
    terms: I,
    index: usize,
    prev: (Int, Int),
    cur: (Int, Int),
}

impl<I: Iterator<Item = u64>> Convergents<I> {
    pub fn new(terms: I) -> Self {
        Convergents {
            terms,
            index: 0,
            prev: (Int::zero(), Int::one()), // (s_{-2}, t_{-2})
            cur: (Int::one(), Int::zero()),  // (s_{-1}, t_{-1})
        }
    }
}

impl<I: Iterator<Item = u64>> Iterator for Convergents<I> {
    type Item = Convergent;

    fn next(&mut self) -> Option<Convergent> {
        let a = Int::from(self.terms.next()?);
        let s = &a * &self.cur.0 + &self.prev.0;
        let t = &a * &self.cur.1 + &self.prev.1;
        self.prev = std::mem::replace(&mut self.cur, (s.clone(), t.clone()));
        let index = self.index;
        self.index += 1;
        Some(Convergent { index, num: s, den: t })
    }
}

/// Convergents over an arbitrary term sequence.
pub fn convergents_of<I: IntoIterator<Item = u64>>(terms: I) -> Convergents<I::IntoIter> {
    Convergents::new(terms.into_iter())
}

/// All convergents of a finite continued fraction.
pub fn convergents(cf: &FiniteCf) -> Vec<Convergent> {
    cf.convergents().collect()
}

/// Exact value `s_m / t_m` of the full fraction, via the forward recursion
/// (identical to the right-to-left fold, but single-pass and shareable with
/// the convergent stream).
pub fn eval_exact(cf: &FiniteCf) -> Rational {
    let last = cf.convergents().last().expect("FiniteCf is non-empty");
    Rational::new(last.num, last.den)
}

/// Enclosure of `[u_0; u_1, ..., u_m, z]` where `z` ranges over a positive
/// interval: with `p/q, p'/q'` the last two convergents of the prefix, the
/// value is `(p z + p') / (q z + q')`.
pub fn eval_with_tail(prefix: &FiniteCf, tail: &Interval) -> Result<Interval> {
    if !tail.is_strictly_positive() {
        return Err(Error::NonPositiveTail);
    }
    let mut prev = (Int::zero(), Int::one()); // (p_{-2}, q_{-2})
    let mut cur = (Int::one(), Int::zero()); // (p_{-1}, q_{-1})
    for c in cf_pairs(prefix) {
        prev = std::mem::replace(&mut cur, c);
    }
    let (p, q) = cur;
    let (p2, q2) = prev;
    Mobius::new(p, p2, q, q2).eval(tail)
}

fn cf_pairs(cf: &FiniteCf) -> impl Iterator<Item = (Int, Int)> + '_ {
    cf.convergents().map(|c| (c.num, c.den))
}

/// The reversed-quotient fraction `[a_m; a_{m-1}, ..., a_1]`, whose exact
/// value equals `t_m / t_{m-1}` for the denominators of `[0; a_1, ..., a_m]`.
/// `quotients[i]` holds `a_{i+1}`.
pub fn denominator_ratio_cf(quotients: &[u64], m: usize) -> Result<FiniteCf> {
    if m < 1 {
        return Err(Error::IndexTooSmall { min: 1, got: m });
    }
    if m > quotients.len() {
        return Err(Error::InsufficientQuotients { index: m, len: quotients.len() });
    }
    let mut terms: Vec<u64> = quotients[..m].to_vec();
    terms.reverse();
    FiniteCf::new(terms)
}
