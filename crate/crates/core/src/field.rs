//! Exact arithmetic in GF(p^(2e)) with its index-q subfield GF(p^e).
//!
//! Elements are stored as dense integer indices: the index of an element with
//! coefficient vector (c_0, ..., c_{n-1}) over GF(p) is sum c_i p^i. All
//! arithmetic goes through precomputed tables, so operations are exact and
//! cheap. A context is immutable after construction and safe to share.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NonPrime(u32),
    #[error("field too small for a unital (need p^e > 2)")]
    DegenerateField,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not in the base subfield")]
    NotInSubfield,
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("field parameters out of supported range")]
    TooLarge,
}

/// Element of GF(p^n), by index. Only meaningful together with the context
/// that produced it; indices order elements and that ordering is used for
/// every canonical form downstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fe(pub u16);

pub const FE_ZERO: Fe = Fe(0);
pub const FE_ONE: Fe = Fe(1);

/// Conway polynomials for small (p, n), coefficients low degree first,
/// monic. These are the standard published values; primitivity and
/// irreducibility are re-verified at construction time.
const CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 1, &[1, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (3, 1, &[1, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 1, &[3, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 4, &[2, 4, 4, 0, 1]),
    (7, 1, &[4, 1]),
    (7, 2, &[3, 6, 1]),
    (7, 3, &[4, 0, 6, 1]),
    (7, 4, &[3, 4, 5, 0, 1]),
];

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// ---- polynomial arithmetic over GF(p), used only during construction ----

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let c = *r.last().unwrap();
        if c != 0 {
            let f = c * lead_inv % p;
            let shift = r.len() - 1 - dm;
            for (i, &mc) in m.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - f * mc % p) % p;
            }
        }
        r.pop();
    }
    while r.len() < dm {
        r.push(0);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai != 0 {
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % p;
            }
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_powmod(a: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    let mut base = poly_rem(a, m, p);
    let mut acc = vec![0u32; dm];
    acc[0] = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, m, p);
        }
        base = poly_mulmod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

fn poly_is_one(a: &[u32]) -> bool {
    a[0] == 1 && a[1..].iter().all(|&c| c == 0)
}

fn mod_inv(a: u32, p: u32) -> u32 {
    // p prime, a nonzero
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Irreducibility by trial division: a degree-n polynomial with no monic
/// divisor of degree up to n/2 is irreducible.
fn poly_is_irreducible(m: &[u32], p: u32) -> bool {
    let n = m.len() - 1;
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d as u32);
        for k in 0..count {
            // monic divisor candidate of degree d, coefficients from digits of k
            let mut cand = Vec::with_capacity(d + 1);
            let mut kk = k;
            for _ in 0..d {
                cand.push((kk % p as u64) as u32);
                kk /= p as u64;
            }
            cand.push(1);
            let r = poly_rem(m, &cand, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn trial_factor(mut n: u64) -> Vec<u64> {
    let mut fs = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            fs.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        fs.push(n);
    }
    fs
}

/// x generates the multiplicative group iff x^((p^n-1)/l) != 1 for every
/// prime l dividing p^n - 1.
fn poly_is_primitive(m: &[u32], p: u32, n: u32) -> bool {
    let order = (p as u64).pow(n) - 1;
    let x = [0u32, 1];
    if !poly_is_one(&poly_powmod(&x, order, m, p)) {
        return false;
    }
    for l in trial_factor(order) {
        if poly_is_one(&poly_powmod(&x, order / l, m, p)) {
            return false;
        }
    }
    true
}

/// Deterministic modulus for GF(p^n): the Conway polynomial when tabulated,
/// otherwise the first primitive monic polynomial in ascending order of the
/// integer encoding sum a_i p^i of the non-leading coefficients.
fn select_modulus(p: u32, n: u32) -> Result<Vec<u32>, FieldError> {
    for &(cp, cn, coeffs) in CONWAY {
        if cp == p && cn == n {
            return Ok(coeffs.to_vec());
        }
    }
    let count = (p as u64)
        .checked_pow(n)
        .ok_or(FieldError::TooLarge)?;
    for k in 0..count {
        let mut cand = Vec::with_capacity(n as usize + 1);
        let mut kk = k;
        for _ in 0..n {
            cand.push((kk % p as u64) as u32);
            kk /= p as u64;
        }
        cand.push(1);
        if poly_is_irreducible(&cand, p) && poly_is_primitive(&cand, p, n) {
            return Ok(cand);
        }
    }
    unreachable!("a primitive polynomial of every degree exists")
}

/// Table-backed GF(p^n). Addition is digitwise (with a full table for small
/// fields); multiplication runs on discrete logs base the residue class of x.
#[derive(Clone)]
pub(crate) struct Gf {
    pub p: u32,
    pub n: u32,
    pub size: u32,
    pub modulus: Vec<u32>,
    digits: Vec<u8>,
    log: Vec<u16>,
    antilog: Vec<u16>,
    neg: Vec<u16>,
    frob1: Vec<u16>,
    add_table: Option<Vec<u16>>,
}

const LOG_ZERO: u16 = u16::MAX;

impl Gf {
    pub fn new(p: u32, n: u32) -> Result<Gf, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        assert!(n >= 1);
        let size = (p as u64).pow(n);
        if size > u16::MAX as u64 {
            return Err(FieldError::TooLarge);
        }
        let size = size as u32;
        let modulus = select_modulus(p, n)?;
        assert!(poly_is_irreducible(&modulus, p), "modulus must be irreducible");

        let mut digits = vec![0u8; (size * n) as usize];
        for idx in 0..size {
            let mut v = idx;
            for d in 0..n {
                digits[(idx * n + d) as usize] = (v % p) as u8;
                v /= p;
            }
        }

        // raw product via polynomial multiplication, used to seed the log tables
        let pow_p: Vec<u32> = (0..n).map(|i| p.pow(i)).collect();
        let idx_of = |coeffs: &[u32]| -> u32 {
            coeffs.iter().zip(&pow_p).map(|(&c, &w)| c * w).sum()
        };
        let coeffs_of = |idx: u32| -> Vec<u32> {
            (0..n)
                .map(|d| digits[(idx * n + d) as usize] as u32)
                .collect()
        };
        let mul_raw = |a: u32, b: u32| -> u32 {
            idx_of(&poly_mulmod(&coeffs_of(a), &coeffs_of(b), &modulus, p))
        };

        let x_idx = if n == 1 {
            // GF(p): the "omega" is the root of the degree-1 modulus, -a0
            (p - modulus[0] % p) % p
        } else {
            p // index of the polynomial x
        };
        let mut log = vec![LOG_ZERO; size as usize];
        let mut antilog = vec![0u16; (size - 1) as usize];
        let mut cur = 1u32;
        for k in 0..(size - 1) {
            assert_eq!(log[cur as usize], LOG_ZERO, "omega must have order p^n - 1");
            log[cur as usize] = k as u16;
            antilog[k as usize] = cur as u16;
            cur = mul_raw(cur, x_idx);
        }
        assert_eq!(cur, 1, "omega powers must cycle back to 1");

        let neg: Vec<u16> = (0..size)
            .map(|idx| {
                let c: Vec<u32> = coeffs_of(idx).iter().map(|&v| (p - v) % p).collect();
                idx_of(&c) as u16
            })
            .collect();

        let add_idx = |a: u32, b: u32| -> u16 {
            let mut s = 0u32;
            for d in 0..n {
                let v = (digits[(a * n + d) as usize] as u32
                    + digits[(b * n + d) as usize] as u32)
                    % p;
                s += v * pow_p[d as usize];
            }
            s as u16
        };
        let add_table = if size <= 2048 {
            let mut t = vec![0u16; (size * size) as usize];
            for a in 0..size {
                for b in 0..size {
                    t[(a * size + b) as usize] = add_idx(a, b);
                }
            }
            Some(t)
        } else {
            None
        };

        let mut gf = Gf {
            p,
            n,
            size,
            modulus,
            digits,
            log,
            antilog,
            neg,
            frob1: Vec::new(),
            add_table,
        };
        gf.frob1 = (0..size).map(|i| gf.pow_u(Fe(i as u16), p as u64).0).collect();
        Ok(gf)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if let Some(t) = &self.add_table {
            return Fe(t[a.0 as usize * self.size as usize + b.0 as usize]);
        }
        let n = self.n as usize;
        let mut s = 0u32;
        let mut w = 1u32;
        for d in 0..n {
            let v = (self.digits[a.0 as usize * n + d] as u32
                + self.digits[b.0 as usize * n + d] as u32)
                % self.p;
            s += v * w;
            w *= self.p;
        }
        Fe(s as u16)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return FE_ZERO;
        }
        let m = self.size - 1;
        let mut s = self.log[a.0 as usize] as u32 + self.log[b.0 as usize] as u32;
        if s >= m {
            s -= m;
        }
        Fe(self.antilog[s as usize])
    }

    #[inline]
    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let m = self.size - 1;
        let l = self.log[a.0 as usize] as u32;
        Ok(Fe(self.antilog[((m - l) % m) as usize]))
    }

    #[inline]
    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    fn pow_u(&self, a: Fe, e: u64) -> Fe {
        if a.0 == 0 {
            return if e == 0 { FE_ONE } else { FE_ZERO };
        }
        let m = (self.size - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Fe(self.antilog[((l * (e % m)) % m) as usize])
    }

    pub fn pow(&self, a: Fe, e: i64) -> Result<Fe, FieldError> {
        if a.0 == 0 {
            return match e {
                0 => Ok(FE_ONE),
                _ if e > 0 => Ok(FE_ZERO),
                _ => Err(FieldError::DivisionByZero),
            };
        }
        let m = (self.size - 1) as i64;
        Ok(self.pow_u(a, e.rem_euclid(m) as u64))
    }

    /// x^(p^k)
    #[inline]
    pub fn frobenius(&self, a: Fe, k: u32) -> Fe {
        let mut v = a;
        for _ in 0..(k % self.n) {
            v = Fe(self.frob1[v.0 as usize]);
        }
        v
    }

    pub fn log(&self, a: Fe) -> Option<u32> {
        if a.0 == 0 {
            None
        } else {
            Some(self.log[a.0 as usize] as u32)
        }
    }

    pub fn omega_pow(&self, k: u32) -> Fe {
        Fe(self.antilog[(k % (self.size - 1)) as usize])
    }

    pub fn omega(&self) -> Fe {
        self.omega_pow(1)
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        let n = self.n as usize;
        (0..n)
            .map(|d| self.digits[a.0 as usize * n + d] as u32)
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.size).map(|i| Fe(i as u16))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Fe> + '_ {
        (1..self.size).map(|i| Fe(i as u16))
    }

    /// Integer literal c as c * 1 in the prime subfield.
    pub fn from_int(&self, c: u32) -> Fe {
        Fe((c % self.p) as u16)
    }
}

/// GF(q^2) with q = p^e: the ambient field of the Hermitian geometry,
/// carrying conjugation x -> x^q, norm and trace onto GF(q), and the
/// norm/trace fiber solvers.
#[derive(Clone)]
pub struct FieldCtx {
    gf: Gf,
    pub p: u32,
    pub e: u32,
    pub q: u32,
    pub q2: u32,
}

impl FieldCtx {
    pub fn new(p: u32, e: u32) -> Result<FieldCtx, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        assert!(e >= 1);
        let gf = Gf::new(p, 2 * e)?;
        let q = p.pow(e);
        let ctx = FieldCtx {
            p,
            e,
            q,
            q2: gf.size,
            gf,
        };
        // the fixed field of conjugation must be exactly GF(q), closed under + and *
        let fixed: Vec<Fe> = ctx
            .elements()
            .filter(|&x| ctx.conjugate(x) == x)
            .collect();
        assert_eq!(fixed.len(), q as usize);
        for &a in &fixed {
            for &b in &fixed {
                assert!(ctx.in_base_subfield(ctx.add(a, b)));
                assert!(ctx.in_base_subfield(ctx.mul(a, b)));
            }
        }
        Ok(ctx)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.gf.modulus
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        self.gf.add(a, b)
    }
    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.gf.sub(a, b)
    }
    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        self.gf.neg(a)
    }
    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        self.gf.mul(a, b)
    }
    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        self.gf.inv(a)
    }
    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        self.gf.div(a, b)
    }
    pub fn pow(&self, a: Fe, e: i64) -> Result<Fe, FieldError> {
        self.gf.pow(a, e)
    }

    /// x^(p^k) for any k >= 0.
    #[inline]
    pub fn frobenius(&self, a: Fe, k: u32) -> Fe {
        self.gf.frobenius(a, k)
    }

    /// x^q, the involutory automorphism fixing GF(q).
    #[inline]
    pub fn conjugate(&self, a: Fe) -> Fe {
        self.gf.frobenius(a, self.e)
    }

    #[inline]
    pub fn in_base_subfield(&self, a: Fe) -> bool {
        self.conjugate(a) == a
    }

    /// x^(q+1), onto GF(q).
    #[inline]
    pub fn norm(&self, a: Fe) -> Fe {
        self.mul(a, self.conjugate(a))
    }

    /// x + x^q, onto GF(q).
    #[inline]
    pub fn trace(&self, a: Fe) -> Fe {
        self.add(a, self.conjugate(a))
    }

    /// All x with x^(q+1) = eta, for eta in GF(q)*; exactly q+1 of them,
    /// in ascending order of omega exponent.
    pub fn solve_norm(&self, eta: Fe) -> Result<Vec<Fe>, FieldError> {
        if eta == FE_ZERO {
            return Err(FieldError::ZeroArgument);
        }
        if !self.in_base_subfield(eta) {
            return Err(FieldError::NotInSubfield);
        }
        let sols: Vec<Fe> = (0..self.q2 - 1)
            .map(|k| self.gf.omega_pow(k))
            .filter(|&x| self.norm(x) == eta)
            .collect();
        assert_eq!(sols.len(), self.q as usize + 1);
        Ok(sols)
    }

    /// All x with x + x^q = eta, for eta in GF(q); exactly q of them, in
    /// ascending index order.
    pub fn solve_trace(&self, eta: Fe) -> Result<Vec<Fe>, FieldError> {
        if !self.in_base_subfield(eta) {
            return Err(FieldError::NotInSubfield);
        }
        let sols: Vec<Fe> = self.elements().filter(|&x| self.trace(x) == eta).collect();
        assert_eq!(sols.len(), self.q as usize);
        Ok(sols)
    }

    pub fn log(&self, a: Fe) -> Option<u32> {
        self.gf.log(a)
    }

    pub fn omega(&self) -> Fe {
        self.gf.omega()
    }

    pub fn omega_pow(&self, k: u32) -> Fe {
        self.gf.omega_pow(k)
    }

    pub fn from_int(&self, c: u32) -> Fe {
        self.gf.from_int(c)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        self.gf.elements()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Fe> + '_ {
        self.gf.nonzero()
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        self.gf.coeffs(a)
    }

    /// "0", "1", "w", or "w^k".
    pub fn fmt_element(&self, a: Fe) -> String {
        match self.log(a) {
            None => "0".into(),
            Some(0) => "1".into(),
            Some(1) => "w".into(),
            Some(k) => format!("w^{k}"),
        }
    }

    /// Coefficient-vector form "[c0,c1,...]".
    pub fn fmt_coeffs(&self, a: Fe) -> String {
        let cs: Vec<String> = self.coeffs(a).iter().map(|c| c.to_string()).collect();
        format!("[{}]", cs.join(","))
    }

    /// Accepts "0", "1", "w", "w^k", or a decimal integer (reduced mod p).
    pub fn parse_element(&self, s: &str) -> Result<Fe, FieldError> {
        let s = s.trim();
        if s == "w" {
            return Ok(self.omega());
        }
        if let Some(k) = s.strip_prefix("w^") {
            let k: u32 = k.parse().map_err(|_| FieldError::ZeroArgument)?;
            return Ok(self.omega_pow(k));
        }
        if let Ok(c) = s.parse::<u32>() {
            return Ok(self.from_int(c));
        }
        Err(FieldError::ZeroArgument)
    }

    pub(crate) fn raw(&self) -> &Gf {
        &self.gf
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx(GF({}^2), q={}, p={}, e={})", self.q, self.q, self.p, self.e)
    }
}

/// q as p^e, if q is a prime power.
pub fn factor_prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut v = q;
            let mut e = 0;
            while v % p == 0 {
                v /= p;
                e += 1;
            }
            return if v == 1 { Some((p, e)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}
