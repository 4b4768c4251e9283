//! The continued-fraction expansion of `x(b) = sum 1/b^(2^j)` by the
//! recursive doubling rule of Shallit (J. Number Theory 11, 1979):
//! start from `[0; b-1, b+2]` and, given the prefix `[0; a_1, ..., a_n]`
//! with `n = 2^j`, append `a_n - 2`, then `a_{n-1}, ..., a_2` reversed,
//! then `a_1 + 1`.
//!
//! The generator is the plain append rule; the symmetry identities of the
//! quotient sequence are checked *against* it, never assumed by it.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

const MAX_LEVEL: u32 = 30;

/// The partial quotients `a_1, ..., a_{2^j}` of the expansion of `x(b)`
/// (`a_0 = 0` is implicit). Doubling is prefix-stable, so `a_k` is the
/// quotient of the infinite expansion for every `k` up to the length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    b: u64,
    quotients: Vec<u64>,
}

impl Expansion {
    pub fn new(b: u64, level: u32) -> Result<Self> {
        if b < 3 {
            return Err(Error::BaseTooSmall(b));
        }
        if level < 1 {
            return Err(Error::LevelTooSmall);
        }
        if level > MAX_LEVEL {
            return Err(Error::LevelTooLarge(level));
        }
        let mut quotients = Vec::with_capacity(1 << level);
        quotients.push(b - 1);
        quotients.push(b + 2);
        for _ in 1..level {
            double(&mut quotients);
        }
        Ok(Expansion { b, quotients })
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// Number of stored quotients, always a power of two.
    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the shortest expansion has two quotients
    }

    pub fn level(&self) -> u32 {
        self.quotients.len().trailing_zeros()
    }

    /// The quotients `a_1, ..., a_{2^j}`; index `i` holds `a_{i+1}`.
    pub fn quotients(&self) -> &[u64] {
        &self.quotients
    }

    /// The quotient `a_k`, 1-based.
    pub fn quotient(&self, k: usize) -> Result<u64> {
        if k < 1 {
            return Err(Error::IndexTooSmall { min: 1, got: k });
        }
        self.quotients
            .get(k - 1)
            .copied()
            .ok_or(Error::InsufficientQuotients { index: k, len: self.quotients.len() })
    }

    /// Grow in place (doubling) until at least `n` quotients are stored.
    pub fn ensure_len(&mut self, n: usize) -> Result<()> {
        while self.quotients.len() < n {
            if self.level() >= MAX_LEVEL {
                return Err(Error::LevelTooLarge(self.level() + 1));
            }
            double(&mut self.quotients);
        }
        Ok(())
    }

    /// Fault-injection hook for end-to-end tests: bumps `a_k` by one,
    /// breaking every identity that involves it.
    #[doc(hidden)]
    pub fn corrupt_quotient(&mut self, k: usize) -> Result<()> {
        if k < 1 || k > self.quotients.len() {
            return Err(Error::InsufficientQuotients { index: k, len: self.quotients.len() });
        }
        self.quotients[k - 1] += 1;
        Ok(())
    }
}

fn double(q: &mut Vec<u64>) {
    let n = q.len();
    q.reserve(n);
    q.push(q[n - 1] - 2);
    // reversed middle a_{n-1}, ..., a_2; empty in the degenerate n = 2 step
    for i in (1..n - 1).rev() {
        q.push(q[i]);
    }
    q.push(q[0] + 1);
}

/// The expansion `C(j, b)` with `2^j` quotients.
pub fn expand(b: u64, level: u32) -> Result<Expansion> {
    Expansion::new(b, level)
}

/// The quotient `a_k` of the infinite expansion, served from a per-base
/// cache of the largest expansion built so far (shared snapshots behind
/// `Arc`, extension under the lock).
pub fn quotient(b: u64, k: usize) -> Result<u64> {
    if k < 1 {
        return Err(Error::IndexTooSmall { min: 1, got: k });
    }
    let quotients = cached_quotients(b, k)?;
    Ok(quotients[k - 1])
}

fn cached_quotients(b: u64, min_len: usize) -> Result<Arc<Vec<u64>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<u64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("quotient cache poisoned");
    if let Some(existing) = map.get(&b) {
        if existing.len() >= min_len {
            return Ok(Arc::clone(existing));
        }
    }
    let level = min_len.next_power_of_two().trailing_zeros().max(1);
    let exp = Expansion::new(b, level)?;
    let arc = Arc::new(exp.quotients);
    map.insert(b, Arc::clone(&arc));
    Ok(arc)
}

/// The three quotient symmetries, each over its stated index range with
/// `n = 2^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    /// `a_{n+k} = a_{n-k+1}` for `2 <= k <= n-1` (the block after `n`
    /// mirrors the block before it); requires `n >= 4`.
    Reflection,
    /// `a_k = a_{n-k+1}` for `2 <= k <= n/2-1`; requires `n >= 8`.
    Palindrome,
    /// `a_k = a_{n+k}` for `2 <= k <= n/2-1`; requires `n >= 8`.
    Repetition,
}

impl Symmetry {
    pub fn label(self) -> &'static str {
        match self {
            Symmetry::Reflection => "reflection",
            Symmetry::Palindrome => "palindrome",
            Symmetry::Repetition => "repetition",
        }
    }
}

/// Whether the symmetry identity holds over its whole stated range.
pub fn check_symmetry(exp: &Expansion, variant: Symmetry, n: usize) -> Result<bool> {
    let min_n = match variant {
        Symmetry::Reflection => 4,
        Symmetry::Palindrome | Symmetry::Repetition => 8,
    };
    if !n.is_power_of_two() || n < min_n {
        return Err(Error::NotPowerOfTwo { value: n as u64, min: min_n as u64 });
    }
    let needed = match variant {
        Symmetry::Reflection => 2 * n - 1,
        Symmetry::Palindrome => n - 1,
        Symmetry::Repetition => n + n / 2 - 1,
    };
    if exp.len() < needed {
        return Err(Error::InsufficientQuotients { index: needed, len: exp.len() });
    }
    let a = |k: usize| exp.quotients[k - 1];
    let ok = match variant {
        Symmetry::Reflection => (2..=n - 1).all(|k| a(n + k) == a(n - k + 1)),
        Symmetry::Palindrome => (2..=n / 2 - 1).all(|k| a(k) == a(n - k + 1)),
        Symmetry::Repetition => (2..=n / 2 - 1).all(|k| a(k) == a(n + k)),
    };
    Ok(ok)
}
