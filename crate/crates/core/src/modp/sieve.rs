use crate::error::{capability, Result};

/// Largest bound accepted by [`sieve`].
pub const SIEVE_CAP: u64 = 100_000_000;

/// All primes `<= bound`, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSieve {
    bound: u64,
    primes: Vec<u64>,
}

impl PrimeSieve {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Primes in `(lo, hi]`.
    pub fn in_range(&self, lo: u64, hi: u64) -> &[u64] {
        let a = self.primes.partition_point(|&p| p <= lo);
        let b = self.primes.partition_point(|&p| p <= hi);
        &self.primes[a..b.max(a)]
    }
}

/// Sieve of Eratosthenes over odd numbers.
pub fn sieve(bound: u64) -> Result<PrimeSieve> {
    if bound > SIEVE_CAP {
        return capability(format!("sieve bound {bound} exceeds cap {SIEVE_CAP}"));
    }
    let mut primes = Vec::new();
    if bound >= 2 {
        primes.push(2);
    }
    // index i stands for 2i + 1
    let half = (bound as usize).saturating_sub(1) / 2 + 1;
    let mut composite = vec![false; half];
    let mut i = 1;
    while i < half {
        if !composite[i] {
            let p = 2 * i + 1;
            primes.push(p as u64);
            let mut j = (p * p) / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    primes.retain(|&p| p <= bound);
    Ok(PrimeSieve { bound, primes })
}

/// Segmented sieve with base primes found by trial division. Kept as an
/// independent check on [`sieve`].
pub fn segmented_sieve(bound: u64, segment: usize) -> Result<PrimeSieve> {
    if bound > SIEVE_CAP {
        return capability(format!("sieve bound {bound} exceeds cap {SIEVE_CAP}"));
    }
    let root = (bound as f64).sqrt() as u64 + 1;
    let base: Vec<u64> = (2..=root).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)).collect();
    let mut primes = Vec::new();
    let mut lo = 2u64;
    let segment = segment.max(1) as u64;
    while lo <= bound {
        let hi = (lo + segment - 1).min(bound);
        let mut mark = vec![true; (hi - lo + 1) as usize];
        for &p in &base {
            if p * p > hi {
                break;
            }
            let start = (p * p).max(lo.div_ceil(p) * p);
            let mut m = start;
            while m <= hi {
                mark[(m - lo) as usize] = false;
                m += p;
            }
        }
        primes.extend(mark.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| lo + k as u64));
        lo = hi + 1;
    }
    Ok(PrimeSieve { bound, primes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bounds() {
        assert_eq!(sieve(10).unwrap().primes(), &[2, 3, 5, 7]);
        assert_eq!(sieve(100).unwrap().len(), 25);
        assert!(sieve(1).unwrap().is_empty());
        assert_eq!(sieve(2).unwrap().primes(), &[2]);
        assert_eq!(sieve(3).unwrap().primes(), &[2, 3]);
        assert_eq!(sieve(SIEVE_CAP + 1).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn million() {
        let a = sieve(1_000_000).unwrap();
        assert_eq!(a.len(), 78498);
        assert_eq!(a, segmented_sieve(1_000_000, 32768).unwrap());
    }

    #[test]
    fn segment_sizes_agree() {
        for b in [0u64, 1, 2, 30, 97, 1000, 4097] {
            let a = sieve(b).unwrap();
            for s in [1usize, 7, 64, 10_000] {
                assert_eq!(a, segmented_sieve(b, s).unwrap(), "b={b} s={s}");
            }
        }
    }

    #[test]
    fn ranges() {
        let s = sieve(100).unwrap();
        assert_eq!(s.in_range(10, 20), &[11, 13, 17, 19]);
        assert_eq!(s.in_range(0, 2), &[2]);
        assert!(s.in_range(50, 40).is_empty());
    }
}
