use serde::{Deserialize, Serialize};

use super::ArithError;

/// Which complete DVR the truncated chain ring comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// Z_p, so R/pi^m is Z/p^m.
    Mixed,
    /// F_p[[t]], so R/pi^m is F_p[t]/t^m.
    Equal,
}

/// The finite chain ring R/pi^m R.
///
/// Elements are `u64` in `[0, p^m)`. In both flavors the value encodes the
/// base-p digit string of the element, so that the valuation is the number of
/// trailing zero digits and `x mod p^e` is the canonical residue mod pi^e.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainRing {
    p: u64,
    m: u32,
    flavor: Flavor,
    pw: Vec<u64>,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl ChainRing {
    pub fn new(p: u64, m: u32, flavor: Flavor) -> Result<Self, ArithError> {
        if !is_prime(p) {
            return Err(ArithError::BadRing(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(ArithError::BadRing("precision must be positive".into()));
        }
        let mut pw = vec![1u64];
        for _ in 0..m {
            let last = *pw.last().unwrap();
            match last.checked_mul(p) {
                Some(v) if v < (1u64 << 62) => pw.push(v),
                _ => return Err(ArithError::BadRing(format!("p^m too large for p = {p}, m = {m}"))),
            }
        }
        Ok(ChainRing { p, m, flavor, pw })
    }

    /// Largest precision representable for this prime.
    pub fn max_precision(p: u64) -> u32 {
        let mut v: u64 = 1;
        let mut m = 0;
        while let Some(n) = v.checked_mul(p) {
            if n >= (1u64 << 62) {
                break;
            }
            v = n;
            m += 1;
        }
        m
    }

    pub fn with_precision(&self, m: u32) -> Result<Self, ArithError> {
        ChainRing::new(self.p, m, self.flavor)
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }
    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }
    #[inline]
    pub fn flavor(&self) -> Flavor {
        self.flavor
    }
    #[inline]
    pub fn size(&self) -> u64 {
        self.pw[self.m as usize]
    }
    /// p^k as an integer, k <= m.
    #[inline]
    pub fn ppow(&self, k: u32) -> u64 {
        self.pw[k as usize]
    }

    #[inline]
    pub fn pi_pow(&self, k: u32) -> u64 {
        if k >= self.m {
            0
        } else {
            self.pw[k as usize]
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        match self.flavor {
            Flavor::Mixed => {
                let s = a + b;
                if s >= self.size() {
                    s - self.size()
                } else {
                    s
                }
            }
            Flavor::Equal => {
                if self.p == 2 {
                    return a ^ b;
                }
                let (mut a, mut b) = (a, b);
                let mut out = 0;
                let mut i = 0;
                while a != 0 || b != 0 {
                    let d = (a % self.p + b % self.p) % self.p;
                    out += d * self.pw[i];
                    a /= self.p;
                    b /= self.p;
                    i += 1;
                }
                out
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            return 0;
        }
        match self.flavor {
            Flavor::Mixed => self.size() - a,
            Flavor::Equal => {
                if self.p == 2 {
                    return a;
                }
                let mut a = a;
                let mut out = 0;
                let mut i = 0;
                while a != 0 {
                    let d = a % self.p;
                    if d != 0 {
                        out += (self.p - d) * self.pw[i];
                    }
                    a /= self.p;
                    i += 1;
                }
                out
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        match self.flavor {
            Flavor::Mixed => {
                if a >= b {
                    a - b
                } else {
                    a + self.size() - b
                }
            }
            Flavor::Equal => self.add(a, self.neg(b)),
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        match self.flavor {
            Flavor::Mixed => ((a as u128 * b as u128) % self.size() as u128) as u64,
            Flavor::Equal => {
                if self.p == 2 {
                    let mask = self.size() - 1;
                    let mut acc = 0u64;
                    let mut bb = b;
                    let mut sh = 0;
                    while bb != 0 && sh < self.m {
                        if bb & 1 == 1 {
                            acc ^= a << sh;
                        }
                        bb >>= 1;
                        sh += 1;
                    }
                    return acc & mask;
                }
                let m = self.m as usize;
                let mut da = [0u64; 64];
                let mut db = [0u64; 64];
                let (mut x, mut y) = (a, b);
                let mut la = 0;
                while x != 0 {
                    da[la] = x % self.p;
                    x /= self.p;
                    la += 1;
                }
                let mut lb = 0;
                while y != 0 {
                    db[lb] = y % self.p;
                    y /= self.p;
                    lb += 1;
                }
                let mut out = [0u64; 64];
                for i in 0..la {
                    if da[i] == 0 {
                        continue;
                    }
                    for j in 0..lb.min(m - i) {
                        out[i + j] += da[i] * db[j];
                    }
                }
                let mut v = 0;
                for k in (0..m).rev() {
                    v = v * self.p + out[k] % self.p;
                }
                v
            }
        }
    }

    /// Valuation; `m` for zero.
    #[inline]
    pub fn val(&self, a: u64) -> u32 {
        if a == 0 {
            return self.m;
        }
        if self.p == 2 {
            return a.trailing_zeros();
        }
        let mut a = a;
        let mut v = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        v
    }

    #[inline]
    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.p)
    }

    /// Residue in F_p.
    #[inline]
    pub fn residue(&self, a: u64) -> u64 {
        a % self.p
    }

    /// Multiply by pi^k.
    #[inline]
    pub fn mul_pi(&self, a: u64, k: u32) -> u64 {
        if k >= self.m {
            return 0;
        }
        ((a as u128 * self.pw[k as usize] as u128) % self.size() as u128) as u64
    }

    /// `a / pi^k` for `val(a) >= k`, with the undetermined top digits set to zero.
    #[inline]
    pub fn div_pi(&self, a: u64, k: u32) -> u64 {
        debug_assert!(self.val(a) >= k);
        a / self.pw[k.min(self.m) as usize]
    }

    /// `a = q * pi^e + r` with `r` the canonical residue mod pi^e.
    #[inline]
    pub fn split(&self, a: u64, e: u32) -> (u64, u64) {
        let pe = self.pw[e.min(self.m) as usize];
        (a / pe, a % pe)
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        match self.flavor {
            Flavor::Mixed => {
                let n = self.size() as i128;
                let (mut r0, mut r1) = (n, a as i128);
                let (mut t0, mut t1) = (0i128, 1i128);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (t0, t1) = (t1, t0 - q * t1);
                }
                Some(t0.rem_euclid(n) as u64)
            }
            Flavor::Equal => {
                // Newton iteration x <- x(2 - a x) from the residue inverse.
                let a0 = a % self.p;
                let mut x = modinv_small(a0, self.p);
                let mut prec = 1;
                let two = self.from_i64(2);
                while prec < self.m {
                    let ax = self.mul(a, x);
                    x = self.mul(x, self.sub(two, ax));
                    prec *= 2;
                }
                Some(x)
            }
        }
    }

    /// Integer to ring: reduction mod p^m (mixed) or mod p as a constant (equal).
    pub fn from_i64(&self, c: i64) -> u64 {
        match self.flavor {
            Flavor::Mixed => (c as i128).rem_euclid(self.size() as i128) as u64,
            Flavor::Equal => (c as i128).rem_euclid(self.p as i128) as u64,
        }
    }

    /// sum c_i pi^i
    pub fn from_poly(&self, cs: &[i64]) -> u64 {
        let mut acc = 0;
        for (i, &c) in cs.iter().enumerate() {
            if i as u32 >= self.m {
                break;
            }
            acc = self.add(acc, self.mul_pi(self.from_i64(c), i as u32));
        }
        acc
    }

    /// Base-p digits, least significant first, length m.
    pub fn digits(&self, a: u64) -> Vec<u64> {
        let mut a = a;
        (0..self.m)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    /// Reduce an element of a higher-precision ring of the same flavor.
    pub fn reduce_from(&self, a: u64) -> u64 {
        a % self.size()
    }
}

pub fn modinv_small(a: u64, p: u64) -> u64 {
    let a = a % p;
    let mut r = 1;
    let mut base = a;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    r
}
