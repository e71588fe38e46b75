//! Smallest-prime-factor sieve and factorization.

use std::sync::OnceLock;

/// Default sieve bound: large enough that every factorization the crate
/// performs at desk scale is a table walk.
const DEFAULT_LIMIT: u32 = 1 << 22;

/// Canonical factorization: primes strictly increasing, exponents ≥ 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.pairs.iter().all(|&(_, e)| e == 1)
    }

    /// The factored integer (as `u128`, products here never exceed it).
    pub fn value(&self) -> u128 {
        self.pairs.iter().map(|&(p, e)| (p as u128).pow(e)).product()
    }

    /// All positive divisors, unsorted.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.pairs {
            let len = out.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out
    }
}

/// Table of smallest prime factors for `n ≤ limit`.
pub struct Sieve {
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl Sieve {
    pub fn new(limit: u32) -> Self {
        let n = limit.max(2) as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                if p > si || (p as usize) * i > n {
                    break;
                }
                spf[p as usize * i] = p;
            }
        }
        Self { spf, primes }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn smallest_prime_factor(&self, n: u64) -> Option<u64> {
        (n >= 2 && n <= self.limit()).then(|| self.spf[n as usize] as u64)
    }

    pub fn factorize(&self, mut n: u64) -> Factorization {
        assert!(n >= 1, "factorize: n must be positive");
        let mut pairs: Vec<(u64, u32)> = Vec::new();
        let push = |p: u64, pairs: &mut Vec<(u64, u32)>| match pairs.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => pairs.push((p, 1)),
        };
        if n > self.limit() {
            for &p in &self.primes {
                let p = p as u64;
                if p * p > n {
                    break;
                }
                while n.is_multiple_of(p) {
                    push(p, &mut pairs);
                    n /= p;
                }
                if n <= self.limit() {
                    break;
                }
            }
            if n > self.limit() {
                // no factor up to the table bound: continue by odd trial division
                let mut d = self.limit() | 1;
                while d.saturating_mul(d) <= n {
                    while n.is_multiple_of(d) {
                        push(d, &mut pairs);
                        n /= d;
                    }
                    d += 2;
                }
                if n > 1 {
                    push(n, &mut pairs);
                }
                return Factorization { pairs };
            }
        }
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            push(p, &mut pairs);
            n /= p;
        }
        Factorization { pairs }
    }
}

/// The process-wide sieve, built on first use.
pub fn sieve() -> &'static Sieve {
    static SIEVE: OnceLock<Sieve> = OnceLock::new();
    SIEVE.get_or_init(|| Sieve::new(DEFAULT_LIMIT))
}

pub fn factorize(n: u64) -> Factorization {
    sieve().factorize(n)
}

/// Primes `≤ n` in increasing order.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    let s = sieve();
    if n <= s.limit() {
        let end = s.primes.partition_point(|&p| (p as u64) <= n);
        return s.primes[..end].iter().map(|&p| p as u64).collect();
    }
    let mut composite = vec![false; n as usize + 1];
    let mut out = Vec::new();
    for i in 2..=n as usize {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n as usize {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let f = factorize(n);
    f.pairs.len() == 1 && f.pairs[0].1 == 1
}
