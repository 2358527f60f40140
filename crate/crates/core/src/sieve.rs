//! Linear sieves for μ, Λ and iterated divisor counts.

use crate::error::{Error, Result};
use std::sync::{Mutex, OnceLock};

pub const SIEVE_CAP: u64 = 100_000_000;

/// μ(1..=n) by linear (smallest-prime-factor) sieve.
pub fn moebius(n: u64) -> Result<Vec<i8>> {
    check_cap(n)?;
    let n = n as usize;
    let mut mu = vec![0i8; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    let mut composite = vec![false; n + 1];
    if n >= 1 {
        mu[1] = 1;
    }
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > n {
                break;
            }
            composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    Ok(mu)
}

/// Λ(1..=n): log p at prime powers p^k, 0 elsewhere.
pub fn von_mangoldt(n: u64) -> Result<Vec<f64>> {
    check_cap(n)?;
    let n = n as usize;
    let mut lam = vec![0.0f64; n + 1];
    let mut spf = vec![0usize; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i;
            primes.push(i);
        }
        for &p in &primes {
            if p > spf[i] || i * p > n {
                break;
            }
            spf[i * p] = p;
        }
    }
    for i in 2..=n {
        // i is a prime power iff stripping all factors of spf[i] leaves 1
        let p = spf[i];
        let mut m = i;
        while m % p == 0 {
            m /= p;
        }
        if m == 1 {
            lam[i] = (p as f64).ln();
        }
    }
    Ok(lam)
}

fn check_cap(n: u64) -> Result<()> {
    if n > SIEVE_CAP {
        return Err(Error::Capacity {
            what: "sieve length N",
            got: n as f64,
            limit: SIEVE_CAP as f64,
        });
    }
    Ok(())
}

/// d_j(1..=n): number of ordered factorizations into j parts, by repeated
/// divisor-convolution (d_1 = 1, d_{j+1} = d_j * 1).
pub fn divisor_iterated(j: u32, n: u64) -> Result<Vec<u64>> {
    check_cap(n)?;
    let n = n as usize;
    let mut d = vec![1u64; n + 1];
    if n >= 1 {
        d[0] = 0;
    }
    for _ in 1..j {
        let mut next = vec![0u64; n + 1];
        for m in 1..=n {
            let dm = d[m];
            let mut k = m;
            while k <= n {
                next[k] += dm;
                k += m;
            }
        }
        d = next;
    }
    Ok(d)
}

// Shared caches so scan loops can look coefficients up without re-sieving.
struct Cache {
    mu: Vec<i8>,
    lam: Vec<f64>,
}

fn cache() -> &'static Mutex<Cache> {
    static CACHE: OnceLock<Mutex<Cache>> = OnceLock::new();
    CACHE.get_or_init(|| {
        Mutex::new(Cache {
            mu: Vec::new(),
            lam: Vec::new(),
        })
    })
}

/// μ table covering 1..=n, grown on demand (doubling), shared process-wide.
pub fn moebius_cached(n: u64) -> Result<std::sync::Arc<Vec<i8>>> {
    check_cap(n)?;
    let mut c = cache().lock().unwrap();
    if (c.mu.len() as u64) < n + 1 {
        let grow = (n + 1).next_power_of_two().max(1 << 10);
        c.mu = moebius(grow.min(SIEVE_CAP))?;
    }
    Ok(std::sync::Arc::new(c.mu.clone()))
}

/// Λ table covering 1..=n, grown on demand.
pub fn von_mangoldt_cached(n: u64) -> Result<std::sync::Arc<Vec<f64>>> {
    check_cap(n)?;
    let mut c = cache().lock().unwrap();
    if (c.lam.len() as u64) < n + 1 {
        let grow = (n + 1).next_power_of_two().max(1 << 10);
        c.lam = von_mangoldt(grow.min(SIEVE_CAP))?;
    }
    Ok(std::sync::Arc::new(c.lam.clone()))
}
