//! Classical Dedekind sums by three independent exact methods: the defining
//! sawtooth sum, reciprocity descent, and the Barkan-Hickerson-Knuth closed
//! form over partial quotients. All arithmetic is exact; the three routes
//! cross-check one another.

use num::{Integer, One, Signed, Zero};

use crate::cfrac::convergents_of;
use crate::error::{Error, Result};
use crate::numerics::{ratio, Int, Rational};

/// The sawtooth function `((r))`: zero at integers, else `r - floor(r) - 1/2`.
pub fn sawtooth(r: &Rational) -> Rational {
    if r.is_integer() {
        return Rational::zero();
    }
    r - r.floor() - ratio(1, 2)
}

/// A Dedekind sum value, carrying both the classical normalization `s(m/n)`
/// and the scaled form `12 s(m/n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DedekindSum {
    s: Rational,
}

impl DedekindSum {
    pub fn from_classical(s: Rational) -> Self {
        DedekindSum { s }
    }

    pub fn from_scaled(scaled: Rational) -> Self {
        DedekindSum { s: scaled / ratio(12, 1) }
    }

    /// `s(m/n)`.
    pub fn classical(&self) -> &Rational {
        &self.s
    }

    /// `S(m/n) = 12 s(m/n)`.
    pub fn scaled(&self) -> Rational {
        &self.s * ratio(12, 1)
    }
}

fn validate_pair(m: &Int, n: &Int) -> Result<()> {
    if !n.is_positive() {
        return Err(Error::NonPositiveModulus);
    }
    if !m.gcd(n).is_one() {
        return Err(Error::NotCoprime { m: m.to_string(), n: n.to_string() });
    }
    Ok(())
}

/// The defining sum `s(m/n) = sum_{k=1}^{n} ((k/n)) ((mk/n))`, term by term.
/// O(n) exact rational operations; the reference oracle for the other routes.
pub fn s_naive(m: &Int, n: &Int) -> Result<DedekindSum> {
    validate_pair(m, n)?;
    let mut sum = Rational::zero();
    let mut k = Int::one();
    while &k <= n {
        let left = sawtooth(&Rational::new(k.clone(), n.clone()));
        if !left.is_zero() {
            let right = sawtooth(&Rational::new(m * &k, n.clone()));
            sum += left * right;
        }
        k += 1;
    }
    Ok(DedekindSum::from_classical(sum))
}

/// Euclid-style descent on the reciprocity law
/// `s(m,n) + s(n,m) = -1/4 + (m/n + n/m + 1/(mn))/12`
/// combined with the periodicity `s(m+n, n) = s(m, n)`; runs in O(log n)
/// exact steps and reaches the base case `s(0, 1) = 0`.
///
/// The accumulation runs on GMP rationals: the per-step canonicalization
/// gcds dominate the cost of deep descents, and GMP's subquadratic gcd
/// keeps convergent-scale denominators (thousands of bits) tractable.
pub fn s_reciprocity(m: &Int, n: &Int) -> Result<DedekindSum> {
    validate_pair(m, n)?;
    let acc = reciprocity_descent(&to_gmp(m), &to_gmp(n));
    // the GMP result is canonical (lowest terms, positive denominator)
    let s = Rational::new_raw(from_gmp(acc.numer()), from_gmp(acc.denom()));
    Ok(DedekindSum::from_classical(s))
}

fn reciprocity_descent(m0: &rug::Integer, n0: &rug::Integer) -> rug::Rational {
    use rug::{Integer as GmpInt, Rational as GmpRat};
    // materialize the remainder pairs (m_i, n_i) of the descent
    let (_, mut m) = <(GmpInt, GmpInt)>::from(m0.div_rem_euc_ref(n0));
    let mut n = n0.clone();
    let mut pairs: Vec<(GmpInt, GmpInt)> = Vec::new();
    while m != 0 {
        let (_, r) = <(GmpInt, GmpInt)>::from(n.div_rem_euc_ref(&m));
        let next_n = std::mem::replace(&mut m, r);
        let prev_n = std::mem::replace(&mut n, next_n.clone());
        pairs.push((next_n, prev_n)); // (m_i, n_i)
    }
    // fold bottom-up through s(m_i, n_i) = f(m_i, n_i) - s(m_{i+1}, n_{i+1})
    // with f(m, n) = (m^2 + n^2 + 1 - 3 m n)/(12 m n); the intermediate
    // values are genuine Dedekind sums, so the reduced denominators stay
    // proportional to the current remainder instead of the full input
    let mut num_acc = GmpInt::new();
    let mut den_acc = GmpInt::from(1);
    for (m, n) in pairs.iter().rev() {
        let mn = GmpInt::from(m * n);
        let num_t =
            GmpInt::from(m * m) + GmpInt::from(n * n) + 1u32 - GmpInt::from(3u32 * &mn);
        let den_t = 12u32 * mn;
        num_acc = num_t * &den_acc - num_acc * &den_t;
        den_acc *= &den_t;
        let g = GmpInt::from(num_acc.gcd_ref(&den_acc));
        if g != 1 {
            num_acc.div_exact_mut(&g);
            den_acc.div_exact_mut(&g);
        }
    }
    GmpRat::from((num_acc, den_acc))
}

fn to_gmp(x: &Int) -> rug::Integer {
    let (sign, bytes) = x.to_bytes_le();
    let magnitude = rug::Integer::from_digits(&bytes, rug::integer::Order::Lsf);
    if sign == num::bigint::Sign::Minus {
        -magnitude
    } else {
        magnitude
    }
}

fn from_gmp(x: &rug::Integer) -> Int {
    let bytes = x.to_digits::<u8>(rug::integer::Order::Lsf);
    let sign = match x.cmp0() {
        std::cmp::Ordering::Less => num::bigint::Sign::Minus,
        std::cmp::Ordering::Equal => num::bigint::Sign::NoSign,
        std::cmp::Ordering::Greater => num::bigint::Sign::Plus,
    };
    Int::from_bytes_le(sign, &bytes)
}

/// The Barkan-Hickerson-Knuth closed form for `S(s_k/t_k)` along the
/// convergents of `[0; a_1, a_2, ...]`:
///
/// `S = sum_{j=1}^{k} (-1)^(j-1) a_j + (s_k + t_{k-1})/t_k - 3`  (k odd)
/// `S = sum_{j=1}^{k} (-1)^(j-1) a_j + (s_k - t_{k-1})/t_k`      (k even)
///
/// `quotients[i]` holds `a_{i+1}`.
pub fn bhk(quotients: &[u64], k: usize) -> Result<DedekindSum> {
    let mut sweep = BhkSweep::new(quotients, k)?;
    let last = (&mut sweep).last().expect("sweep yields k+1 values");
    Ok(last)
}

/// Streaming evaluation of the closed form at every index `0..=k_max` in a
/// single pass over the convergent recursion. Item `k` is `S(s_k/t_k)`.
pub struct BhkSweep<'a> {
    convergents: crate::cfrac::Convergents<TermIter<'a>>,
    prev_den: Int,
    alternating: Int,
    sign_positive: bool,
    remaining: usize,
    quotients: &'a [u64],
    index: usize,
}

type TermIter<'a> = std::iter::Chain<std::iter::Once<u64>, std::iter::Copied<std::slice::Iter<'a, u64>>>;

impl<'a> BhkSweep<'a> {
    pub fn new(quotients: &'a [u64], k_max: usize) -> Result<Self> {
        if k_max > quotients.len() {
            return Err(Error::InsufficientQuotients { index: k_max, len: quotients.len() });
        }
        let terms = std::iter::once(0u64).chain(quotients[..k_max].iter().copied());
        Ok(BhkSweep {
            convergents: convergents_of(terms),
            prev_den: Int::zero(), // t_{-1}
            alternating: Int::zero(),
            sign_positive: true,
            remaining: k_max + 1,
            quotients,
            index: 0,
        })
    }
}

impl Iterator for BhkSweep<'_> {
    type Item = DedekindSum;

    fn next(&mut self) -> Option<DedekindSum> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let c = self.convergents.next()?;
        let k = self.index;
        self.index += 1;
        if k > 0 {
            let a = Int::from(self.quotients[k - 1]);
            if self.sign_positive {
                self.alternating += a;
            } else {
                self.alternating -= a;
            }
            self.sign_positive = !self.sign_positive;
        }
        let correction = if k % 2 == 1 {
            Rational::new(&c.num + &self.prev_den, c.den.clone()) - ratio(3, 1)
        } else {
            Rational::new(&c.num - &self.prev_den, c.den.clone())
        };
        self.prev_den = c.den;
        let scaled = Rational::from(self.alternating.clone()) + correction;
        Some(DedekindSum::from_scaled(scaled))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::int;
    use crate::shallit::expand;

    #[test]
    fn sawtooth_values() {
        assert_eq!(sawtooth(&ratio(7, 1)), ratio(0, 1));
        assert_eq!(sawtooth(&ratio(1, 4)), ratio(-1, 4));
        assert_eq!(sawtooth(&ratio(-1, 3)), ratio(1, 6));
    }

    #[test]
    fn naive_small_values() {
        assert_eq!(s_naive(&int(1), &int(1)).unwrap().classical(), &ratio(0, 1));
        // three-term sum: ((1/3))((1/3)) + ((2/3))((2/3)) = 1/36 + 1/36
        let d = s_naive(&int(1), &int(3)).unwrap();
        assert_eq!(d.classical(), &ratio(1, 18));
        assert_eq!(d.scaled(), ratio(2, 3));
        assert_eq!(s_naive(&int(5), &int(11)).unwrap().scaled(), ratio(-30, 11));
    }

    #[test]
    fn naive_rejects_bad_pairs() {
        assert!(matches!(s_naive(&int(4), &int(10)), Err(Error::NotCoprime { .. })));
        assert_eq!(s_naive(&int(1), &int(0)), Err(Error::NonPositiveModulus));
        assert_eq!(s_naive(&int(1), &int(-3)), Err(Error::NonPositiveModulus));
    }

    #[test]
    fn reciprocity_matches_naive() {
        for (m, n) in [(1i64, 3i64), (5, 11), (3, 7), (7, 19), (100, 101), (-4, 9), (25, 12)] {
            let a = s_reciprocity(&int(m), &int(n)).unwrap();
            let b = s_naive(&int(m), &int(n)).unwrap();
            assert_eq!(a, b, "s({m}/{n})");
        }
    }

    #[test]
    fn reciprocity_oddness() {
        // s(n-1, n) = -s(1, n)
        let n = int(100);
        let lhs = s_reciprocity(&int(99), &n).unwrap();
        let rhs = s_reciprocity(&int(1), &n).unwrap();
        assert_eq!(lhs.classical(), &(-rhs.classical()));
    }

    #[test]
    fn bhk_base_three() {
        let exp = expand(3, 4).unwrap();
        // k = 0: S(0/1) = 0
        assert_eq!(bhk(exp.quotients(), 0).unwrap().scaled(), ratio(0, 1));
        // k = 2: (2 - 5) + (5 - 2)/11 = -30/11
        assert_eq!(bhk(exp.quotients(), 2).unwrap().scaled(), ratio(-30, 11));
    }

    #[test]
    fn bhk_matches_reciprocity_at_k12() {
        let exp = expand(3, 4).unwrap();
        let terms: Vec<u64> =
            std::iter::once(0).chain(exp.quotients()[..12].iter().copied()).collect();
        let c = convergents_of(terms).last().unwrap();
        let via_bhk = bhk(exp.quotients(), 12).unwrap();
        let via_descent = s_reciprocity(&c.num, &c.den).unwrap();
        assert_eq!(via_bhk, via_descent);
    }

    #[test]
    fn bhk_requires_enough_quotients() {
        let exp = expand(3, 2).unwrap();
        assert_eq!(
            bhk(exp.quotients(), 5),
            Err(Error::InsufficientQuotients { index: 5, len: 4 })
        );
    }

    #[test]
    fn sweep_agrees_with_single_shot() {
        let exp = expand(4, 4).unwrap();
        let all: Vec<DedekindSum> = BhkSweep::new(exp.quotients(), 10).unwrap().collect();
        assert_eq!(all.len(), 11);
        for (k, d) in all.iter().enumerate() {
            assert_eq!(d, &bhk(exp.quotients(), k).unwrap(), "k = {k}");
        }
    }
}
