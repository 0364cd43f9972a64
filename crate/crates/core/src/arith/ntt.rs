//! Number-theoretic transforms over word-sized primes with Montgomery
//! arithmetic, plus Chinese-remainder reconstruction of signed integers.
//!
//! Each prime has the form `c * 2^k + 1` with `k >= 55`, so power-of-two
//! transforms of any practical length exist. Primes are kept below `2^62`
//! so that Montgomery reduction never overflows `u128`.

use num_bigint::BigInt;

/// An NTT-friendly prime together with a generator of its multiplicative group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NttPrime {
    pub modulus: u64,
    pub generator: u64,
    pub two_adicity: u32,
}

pub const P1: NttPrime = NttPrime { modulus: 4_179_340_454_199_820_289, generator: 3, two_adicity: 57 };
pub const P2: NttPrime = NttPrime { modulus: 1_945_555_039_024_054_273, generator: 5, two_adicity: 56 };
pub const P3: NttPrime = NttPrime { modulus: 2_053_641_430_080_946_177, generator: 7, two_adicity: 55 };

/// The default residue system: three primes, product about `2^182`.
pub const DEFAULT_PRIMES: [NttPrime; 3] = [P1, P2, P3];

/// Montgomery arithmetic modulo an odd prime below `2^62`, with `R = 2^64`.
#[derive(Clone, Debug)]
pub struct Montgomery {
    p: u64,
    /// `-p^{-1} mod 2^64`
    neg_inv: u64,
    /// `R^2 mod p`
    r2: u64,
}

impl Montgomery {
    pub fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p < (1 << 62), "modulus must be odd and below 2^62");
        // Newton iteration for the inverse modulo 2^64.
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Montgomery { p, neg_inv: inv.wrapping_neg(), r2 }
    }

    #[inline(always)]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline(always)]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    pub fn pow(&self, base: u64, mut e: u64) -> u64 {
        let mut acc = self.to_mont(1);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

/// Forward/inverse cyclic transforms of a fixed power-of-two length.
pub struct NttPlan {
    mont: Montgomery,
    log_len: u32,
    /// Twiddles for each stage, in Montgomery form.
    roots: Vec<Vec<u64>>,
    inv_roots: Vec<Vec<u64>>,
    inv_len: u64,
}

impl NttPlan {
    pub fn new(prime: NttPrime, log_len: u32) -> Self {
        assert!(log_len <= prime.two_adicity, "transform length exceeds the prime's 2-adicity");
        let mont = Montgomery::new(prime.modulus);
        let p = prime.modulus;
        let g = mont.to_mont(prime.generator);
        let mut roots = Vec::with_capacity(log_len as usize);
        let mut inv_roots = Vec::with_capacity(log_len as usize);
        for s in 1..=log_len {
            let m = 1u64 << s;
            let w = mont.pow(g, (p - 1) / m);
            let w_inv = mont.pow(w, m - 1);
            let half = (m / 2) as usize;
            let mut fw = Vec::with_capacity(half);
            let mut iw = Vec::with_capacity(half);
            let (mut a, mut b) = (mont.to_mont(1), mont.to_mont(1));
            for _ in 0..half {
                fw.push(a);
                iw.push(b);
                a = mont.mul(a, w);
                b = mont.mul(b, w_inv);
            }
            roots.push(fw);
            inv_roots.push(iw);
        }
        let len_m = mont.to_mont(1u64 << log_len);
        let inv_len = mont.pow(len_m, p - 2);
        NttPlan { mont, log_len, roots, inv_roots, inv_len }
    }

    pub fn len(&self) -> usize {
        1 << self.log_len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn montgomery(&self) -> &Montgomery {
        &self.mont
    }

    fn transform(&self, a: &mut [u64], twiddles: &[Vec<u64>]) {
        let n = a.len();
        debug_assert_eq!(n, self.len());
        let mut j = 0usize;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                a.swap(i, j);
            }
        }
        let mont = &self.mont;
        for (s, tw) in twiddles.iter().enumerate() {
            let half = 1usize << s;
            let m = half << 1;
            for chunk in a.chunks_exact_mut(m) {
                let (lo, hi) = chunk.split_at_mut(half);
                for k in 0..half {
                    let t = mont.mul(tw[k], hi[k]);
                    let u = lo[k];
                    lo[k] = mont.add(u, t);
                    hi[k] = mont.sub(u, t);
                }
            }
        }
    }

    /// In-place forward transform of Montgomery-form residues.
    pub fn forward(&self, a: &mut [u64]) {
        self.transform(a, &self.roots);
    }

    /// In-place inverse transform, including the `1/len` scaling.
    pub fn inverse(&self, a: &mut [u64]) {
        self.transform(a, &self.inv_roots);
        for x in a.iter_mut() {
            *x = self.mont.mul(*x, self.inv_len);
        }
    }

    /// Square a truncated power series (Montgomery form) and keep `keep` terms.
    pub fn square_truncated(&self, a: &[u64], keep: usize) -> Vec<u64> {
        let mut buf = vec![0u64; self.len()];
        buf[..a.len()].copy_from_slice(a);
        self.forward(&mut buf);
        for x in buf.iter_mut() {
            *x = self.mont.mul(*x, *x);
        }
        self.inverse(&mut buf);
        buf.truncate(keep);
        buf
    }
}

/// Smallest `k` with `2^k >= n`.
pub fn ceil_log2(n: usize) -> u32 {
    usize::BITS - n.saturating_sub(1).leading_zeros()
}

/// Signed reconstruction from residues modulo pairwise coprime primes.
///
/// Returns `None` when the centred representative does not fit in `i128`.
pub struct Crt {
    moduli: Vec<u64>,
    /// `garner[i] = (m_0 ... m_{i-1})^{-1} mod m_i`
    garner: Vec<u64>,
    product: BigInt,
}

impl Crt {
    pub fn new(moduli: &[u64]) -> Self {
        let mut garner = Vec::with_capacity(moduli.len());
        for (i, &mi) in moduli.iter().enumerate() {
            let mut prod = 1u128;
            for &mj in &moduli[..i] {
                prod = prod * (mj as u128 % mi as u128) % mi as u128;
            }
            garner.push(if i == 0 { 1 } else { mod_inverse_u64(prod as u64, mi) });
        }
        let product = moduli.iter().fold(BigInt::from(1), |acc, &m| acc * m);
        Crt { moduli: moduli.to_vec(), garner, product }
    }

    pub fn product(&self) -> &BigInt {
        &self.product
    }

    /// Mixed-radix digits `a_i` with `x = a_0 + m_0 a_1 + m_0 m_1 a_2 + ...`.
    fn digits(&self, residues: &[u64]) -> Vec<u64> {
        let k = self.moduli.len();
        let mut digits = Vec::with_capacity(k);
        for i in 0..k {
            let mi = self.moduli[i] as u128;
            // evaluate the partial mixed-radix number modulo m_i
            let mut acc = 0u128;
            let mut radix = 1u128;
            for (j, &d) in digits.iter().enumerate() {
                acc = (acc + d as u128 % mi * radix) % mi;
                radix = radix * (self.moduli[j] as u128 % mi) % mi;
            }
            let diff = (residues[i] as u128 % mi + mi - acc) % mi;
            digits.push((diff * self.garner[i] as u128 % mi) as u64);
        }
        digits
    }

    /// Centred representative in `(-M/2, M/2]`, if it fits in `i128`.
    pub fn reconstruct(&self, residues: &[u64]) -> Option<i128> {
        let digits = self.digits(residues);
        let k = digits.len();
        let top = k - 1;
        let negative = digits[top] as u128 * 2 > self.moduli[top] as u128;
        // Horner evaluation from the top digit, in checked signed arithmetic.
        let mut value: i128 = if negative {
            digits[top] as i128 - self.moduli[top] as i128
        } else {
            digits[top] as i128
        };
        for j in (0..top).rev() {
            value = value.checked_mul(self.moduli[j] as i128)?.checked_add(digits[j] as i128)?;
        }
        Some(value)
    }
}

pub fn mod_inverse_u64(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    assert_eq!(old_r, 1, "{a} is not invertible modulo {m}");
    old_s.rem_euclid(m as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schoolbook_square(a: &[i64], keep: usize) -> Vec<i128> {
        let mut out = vec![0i128; keep];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in a.iter().enumerate() {
                if i + j < keep {
                    out[i + j] += x as i128 * y as i128;
                }
            }
        }
        out
    }

    #[test]
    fn montgomery_matches_u128_arithmetic() {
        for prime in DEFAULT_PRIMES {
            let m = Montgomery::new(prime.modulus);
            let (a, b) = (123_456_789_012_345_678u64 % prime.modulus, 987_654_321_098_765_432u64 % prime.modulus);
            let expect = (a as u128 * b as u128 % prime.modulus as u128) as u64;
            let got = m.from_mont(m.mul(m.to_mont(a), m.to_mont(b)));
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn generators_have_full_order_on_two_power_subgroup() {
        for prime in DEFAULT_PRIMES {
            let m = Montgomery::new(prime.modulus);
            let g = m.to_mont(prime.generator);
            let one = m.to_mont(1);
            // g^((p-1)/2) must be -1 for a generator
            let half = m.pow(g, (prime.modulus - 1) / 2);
            assert_ne!(half, one);
            assert_eq!(m.from_mont(half), prime.modulus - 1);
        }
    }

    #[test]
    fn squaring_matches_schoolbook_after_crt() {
        let a: Vec<i64> = (0..300).map(|i| ((i * 7919) % 2001) as i64 - 1000).collect();
        let keep = 400;
        let expect = schoolbook_square(&a, keep);
        let crt = Crt::new(&DEFAULT_PRIMES.map(|p| p.modulus));
        let log_len = ceil_log2(2 * a.len());
        let mut residues = Vec::new();
        for prime in DEFAULT_PRIMES {
            let plan = NttPlan::new(prime, log_len);
            let mont = plan.montgomery();
            let input: Vec<u64> = a
                .iter()
                .map(|&x| mont.to_mont(x.rem_euclid(prime.modulus as i64) as u64))
                .collect();
            let sq = plan.square_truncated(&input, keep);
            residues.push(sq.iter().map(|&x| mont.from_mont(x)).collect::<Vec<_>>());
        }
        for i in 0..keep {
            let r: Vec<u64> = residues.iter().map(|v| v[i]).collect();
            assert_eq!(crt.reconstruct(&r), Some(expect[i]), "index {i}");
        }
    }

    #[test]
    fn crt_recovers_large_signed_values() {
        let crt = Crt::new(&DEFAULT_PRIMES.map(|p| p.modulus));
        for v in [0i128, 1, -1, i128::MAX / 3, -(i128::MAX / 5), 10i128.pow(36), -(10i128.pow(36))] {
            let r: Vec<u64> = DEFAULT_PRIMES.iter().map(|p| v.rem_euclid(p.modulus as i128) as u64).collect();
            assert_eq!(crt.reconstruct(&r), Some(v));
        }
    }

    #[test]
    fn ceil_log2_edges() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(1024), 10);
        assert_eq!(ceil_log2(1025), 11);
    }
}
