//! Linear sieve for the multiplicative bookkeeping used everywhere else:
//! smallest prime factors, Möbius, divisor counts, totients.

/// Smallest-prime-factor table up to a bound, with derived arithmetic functions.
#[derive(Clone, Debug)]
pub struct Sieve {
    limit: usize,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl Sieve {
    pub fn new(limit: usize) -> Self {
        let limit = limit.max(1);
        let mut spf = vec![0u32; limit + 1];
        let mut primes = Vec::new();
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let ip = i * p as usize;
                if p > si || ip > limit {
                    break;
                }
                spf[ip] = p;
            }
        }
        Sieve { limit, spf, primes }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && self.spf[n] as usize == n
    }

    pub fn smallest_prime_factor(&self, n: usize) -> usize {
        self.spf[n] as usize
    }

    /// `(p, k, n / p^k)` where `p = spf(n)` and `p^k || n`. Requires `n >= 2`.
    pub fn split_prime_power(&self, n: usize) -> (usize, u32, usize) {
        let p = self.spf[n] as usize;
        let mut m = n;
        let mut k = 0;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        (p, k, m)
    }

    /// Prime factorisation as `(p, exponent)` pairs, ascending.
    pub fn factorize(&self, mut n: usize) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        while n > 1 {
            let (p, k, m) = self.split_prime_power(n);
            out.push((p, k));
            n = m;
        }
        out
    }

    pub fn divisors(&self, n: usize) -> Vec<usize> {
        let mut divs = vec![1usize];
        for (p, k) in self.factorize(n) {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..k {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    pub fn mobius_table(&self) -> Vec<i8> {
        let mut mu = vec![0i8; self.limit + 1];
        mu[1] = 1;
        for n in 2..=self.limit {
            let p = self.spf[n] as usize;
            let m = n / p;
            mu[n] = if m % p == 0 { 0 } else { -mu[m] };
        }
        mu
    }

    pub fn divisor_count_table(&self) -> Vec<u32> {
        let mut d = vec![0u32; self.limit + 1];
        d[1] = 1;
        for n in 2..=self.limit {
            let (_, k, m) = self.split_prime_power(n);
            d[n] = d[m] * (k + 1);
        }
        d
    }

    pub fn mobius(&self, n: usize) -> i8 {
        let mut sign = 1i8;
        for (_, k) in self.factorize(n) {
            if k > 1 {
                return 0;
            }
            sign = -sign;
        }
        sign
    }

    pub fn totient(&self, n: usize) -> u64 {
        self.factorize(n)
            .into_iter()
            .fold(n as u64, |acc, (p, _)| acc / p as u64 * (p as u64 - 1))
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// Modular inverse of `a` modulo `m >= 1`; `None` if not coprime.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m))
}

/// Trial-division divisor count, for arguments outside any sieve.
pub fn divisor_count(n: u64) -> u32 {
    let mut n = n;
    let mut count = 1;
    let mut p = 2u64;
    while p * p <= n {
        let mut k = 0;
        while n % p == 0 {
            n /= p;
            k += 1;
        }
        count *= k + 1;
        p += 1;
    }
    if n > 1 {
        count *= 2;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        let s = Sieve::new(30);
        assert_eq!(&s.primes()[..6], &[2, 3, 5, 7, 11, 13]);
        let mu = s.mobius_table();
        assert_eq!(&mu[1..11], &[1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
        let d = s.divisor_count_table();
        assert_eq!(&d[1..13], &[1, 2, 2, 3, 2, 4, 2, 4, 3, 4, 2, 6]);
        assert_eq!(s.divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(s.totient(12), 4);
        assert_eq!(s.mobius(30), -1);
    }

    #[test]
    fn inverse_and_gcd() {
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(-1, 7), Some(6));
        assert_eq!(mod_inverse(2, 4), None);
        assert_eq!(mod_inverse(5, 1), Some(0));
        assert_eq!(gcd(-12, 18), 6);
        assert_eq!(gcd(0, 0), 0);
        assert_eq!(divisor_count(360), 24);
    }
}
