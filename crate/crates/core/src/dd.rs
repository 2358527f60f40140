//! Double-double arithmetic for phase computation.
//!
//! Oscillatory sums need the phase t·log n reduced mod 2π without losing the
//! low bits: at t = 1e8 and n = 1e6 the raw phase is ~1.4e9, so plain f64
//! leaves only ~1e-7 of absolute phase accuracy. Carrying log n (and the
//! product) as an unevaluated hi+lo pair keeps the reduced phase good to
//! ~1e-22, far inside the 1e-12 per-term contract.
//!
//! Only the handful of operations the phase path needs are implemented.

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

pub const TWO_PI: Dd = Dd {
    hi: std::f64::consts::TAU,
    lo: 2.449293598294706e-16,
};

pub const LN_2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.319046813846299_6e-17,
};

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Dekker split; safe for |a| < 2^996, far above anything the phase path sees.
#[inline]
fn split(a: f64) -> (f64, f64) {
    let t = 134_217_729.0 * a; // 2^27 + 1
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

impl Dd {
    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, rhs: Dd) -> Dd {
        self.add(Dd {
            hi: -rhs.hi,
            lo: -rhs.lo,
        })
    }

    #[inline]
    pub fn add_f64(self, rhs: f64) -> Dd {
        let (s, e) = two_sum(self.hi, rhs);
        let e = e + self.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, rhs: f64) -> Dd {
        let (p, e) = two_prod(self.hi, rhs);
        let e = e + self.lo * rhs;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self.sub(rhs.mul_f64(q1));
        let q2 = (r.hi + r.lo) / (rhs.hi + rhs.lo);
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    /// Division by a plain f64 with a remainder correction.
    #[inline]
    pub fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let (p, e) = two_prod(q1, d);
        let r = (self.hi - p) - e + self.lo;
        let (hi, lo) = quick_two_sum(q1, r / d);
        Dd { hi, lo }
    }

    /// exp(self) for |self| ≤ ~750. Range-reduced by ln 2, Taylor on the rest.
    pub fn exp(self) -> Dd {
        let k = (self.hi / LN_2.hi).round();
        let r = self.sub(LN_2.mul_f64(k));
        // |r| <= ln2/2; terms r^j/j! drop below 1e-35 near j = 24.
        let mut term = r;
        let mut sum = Dd::from_f64(1.0).add(r);
        for j in 2..=26 {
            term = term.mul(r).div_f64(j as f64);
            sum = sum.add(term);
            if term.hi.abs() < 1e-35 * sum.hi.abs() {
                break;
            }
        }
        let scale = f64::powi(2.0, k as i32);
        Dd {
            hi: sum.hi * scale,
            lo: sum.lo * scale,
        }
    }
}

/// log n for a positive integer, accurate to ~1e-32 relative.
///
/// One Newton correction of the f64 log: with δ = n·e^(−y₀) − 1 (|δ| ~ 1e-16),
/// log n = y₀ + δ − δ²/2 + O(δ³).
pub fn ln_u64(n: u64) -> Dd {
    debug_assert!(n > 0);
    if n == 1 {
        return Dd::from_f64(0.0);
    }
    let a = n as f64;
    let y0 = a.ln();
    let e = Dd::from_f64(-y0).exp();
    let delta = e.mul_f64(a).add_f64(-1.0);
    let corr = delta.sub(delta.mul(delta).mul_f64(0.5));
    corr.add_f64(y0)
}

const LN_TABLE_SIZE: usize = 1 << 20;

/// log n via a shared table for n < 2^20, direct Newton beyond.
///
/// The table is built once: logs of primes by `ln_u64`, composites as
/// log(spf) + log(n/spf), which keeps every entry within ~1e-31.
pub fn ln_cached(n: u64) -> Dd {
    static TABLE: std::sync::OnceLock<Vec<Dd>> = std::sync::OnceLock::new();
    if n as usize >= LN_TABLE_SIZE {
        return ln_u64(n);
    }
    let table = TABLE.get_or_init(|| {
        let mut spf = vec![0u32; LN_TABLE_SIZE];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..LN_TABLE_SIZE {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            for &p in &primes {
                let ip = i * p as usize;
                if p > spf[i] || ip >= LN_TABLE_SIZE {
                    break;
                }
                spf[ip] = p;
            }
        }
        let mut t = vec![Dd::default(); LN_TABLE_SIZE];
        for i in 2..LN_TABLE_SIZE {
            let p = spf[i] as usize;
            t[i] = if p == i {
                ln_u64(i as u64)
            } else {
                t[p].add(t[i / p])
            };
        }
        t
    });
    table[n as usize]
}

/// Reduce a double-double angle into (−π, π].
pub fn rem_2pi(x: Dd) -> f64 {
    let mut k = (x.hi / TWO_PI.hi).round();
    let mut r = x.sub(TWO_PI.mul_f64(k));
    // boundary nudge; at most one step
    if r.hi > std::f64::consts::PI {
        k += 1.0;
        r = x.sub(TWO_PI.mul_f64(k));
    } else if r.hi < -std::f64::consts::PI {
        k -= 1.0;
        r = x.sub(TWO_PI.mul_f64(k));
    }
    r.to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_u64_matches_reference() {
        // reference digits from a 40-digit computation
        let v = ln_u64(999_983);
        assert_eq!(v.hi, 13.815493557819773);
        assert!((v.lo - -1.522795701172094e-16).abs() < 1e-28);

        let v7 = ln_u64(7);
        assert_eq!(v7.hi, 1.9459101490553132);
        assert!((v7.lo - 7.323586207904907e-17).abs() < 1e-30);

        assert_eq!(ln_u64(1).to_f64(), 0.0);
    }

    #[test]
    fn exp_matches_e() {
        let e = Dd::from_f64(1.0).exp();
        assert_eq!(e.hi, 2.718281828459045);
        assert!((e.lo - 1.4456468917292502e-16).abs() < 1e-30);
    }

    #[test]
    fn phase_reduction_extreme() {
        // 1e8 * ln(999983) mod 2pi, reference 0.616539135644839036073127848227
        let phase = ln_u64(999_983).mul_f64(1e8);
        let r = rem_2pi(phase);
        assert!((r - 0.616539135644839).abs() < 1e-12, "got {r}");

        // fl(12345.6789) * ln(12345) mod 2pi, reference 0.6767300100602568084693842
        let r2 = rem_2pi(ln_u64(12345).mul_f64(12345.6789));
        assert!((r2 - 0.6767300100602568).abs() < 1e-13, "got {r2}");
    }

    #[test]
    fn ln_cached_agrees_with_direct() {
        for n in [2u64, 3, 6, 97, 9973, 360360, 1048575, 1048576, 20_000_003] {
            let a = ln_cached(n);
            let b = ln_u64(n);
            let diff = a.sub(b).to_f64().abs();
            assert!(diff < 1e-28 * a.hi.abs().max(1.0), "n = {n}, diff = {diff}");
        }
    }

    #[test]
    fn rem_2pi_is_in_range() {
        for i in 0..2000 {
            let x = ln_u64(i + 2).mul_f64(1e7 * (i as f64 + 0.37));
            let r = rem_2pi(x);
            assert!(r.abs() <= std::f64::consts::PI + 1e-9);
        }
    }
}
