//! Coefficient arithmetic in a truncated discrete valuation ring `A` of length `a`
//! with residue characteristic `p`: either `F_p[pi]/(pi^a)` (equal characteristic)
//! or `Z/p^a` (mixed characteristic). Both are chain rings — the ideals form the
//! single chain `0 = (w^a) ⊂ (w^(a-1)) ⊂ … ⊂ (w) ⊂ A` for the uniformizer `w`
//! (`pi` resp. `p`) — so every nonzero `x` factors uniquely as `unit · w^v(x)`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// `F_p[pi]/(pi^a)`: scalars are length-`a` coefficient sequences mod `p`.
    EquiChar,
    /// `Z/p^a`: scalars are integers in `[0, p^a)`.
    MixedChar,
}

/// The ring `A` itself: `(p, a, flavor)`. Cheap to copy; every `Scalar` carries one
/// and all binary operations insist the specs match.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingSpec {
    p: u64,
    a: u32,
    flavor: Flavor,
}

/// Desk-scale construction limits; they keep parsing of untrusted input cheap
/// (trial division, per-scalar allocation) without constraining any real use.
pub const MAX_P: u64 = 1 << 31;
pub const MAX_A: u32 = 512;

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl RingSpec {
    pub fn new(p: u64, a: u32, flavor: Flavor) -> Result<Self> {
        if p > MAX_P || !is_prime(p) {
            return Err(Error::precondition(format!(
                "p = {p} is not a prime in [2, 2^31]"
            )));
        }
        if a == 0 || a > MAX_A {
            return Err(Error::precondition(format!(
                "a = {a} is out of range [1, {MAX_A}]"
            )));
        }
        if flavor == Flavor::MixedChar && p.checked_pow(a).is_none() {
            return Err(Error::precondition(format!(
                "p^a = {p}^{a} does not fit in 64 bits"
            )));
        }
        Ok(RingSpec { p, a, flavor })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// `p^a`; only meaningful (and only guaranteed to fit) for MixedChar.
    fn modulus(&self) -> u64 {
        debug_assert_eq!(self.flavor, Flavor::MixedChar);
        self.p.pow(self.a)
    }

    /// `p^k` for `k <= a` (MixedChar).
    pub fn p_pow(&self, k: u32) -> u64 {
        debug_assert!(k <= self.a);
        self.p.pow(k)
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.flavor {
            Flavor::EquiChar => write!(f, "F_{}[pi]/(pi^{})", self.p, self.a),
            Flavor::MixedChar => write!(f, "Z/{}^{}", self.p, self.a),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Coefficient of `pi^i` at index `i`; length exactly `a`, entries in `[0, p)`.
    Poly(Vec<u64>),
    /// Integer in `[0, p^a)`.
    Int(u64),
}

/// An element of `A` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    ring: RingSpec,
    repr: Repr,
}

fn egcd(x: i128, y: i128) -> (i128, i128, i128) {
    if y == 0 {
        (x, 1, 0)
    } else {
        let (g, s, t) = egcd(y, x % y);
        (g, t, s - (x / y) * t)
    }
}

/// Inverse of `x` modulo `m` for `gcd(x, m) = 1`.
fn inv_mod(x: u64, m: u64) -> u64 {
    let (g, s, _) = egcd(x as i128, m as i128);
    debug_assert_eq!(g, 1);
    (s.rem_euclid(m as i128)) as u64
}

impl Scalar {
    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn zero(ring: RingSpec) -> Self {
        match ring.flavor {
            Flavor::EquiChar => Scalar { ring, repr: Repr::Poly(vec![0; ring.a as usize]) },
            Flavor::MixedChar => Scalar { ring, repr: Repr::Int(0) },
        }
    }

    pub fn one(ring: RingSpec) -> Self {
        Scalar::from_int(ring, 1)
    }

    /// Image of an integer under `Z -> A` (negatives allowed).
    pub fn from_int(ring: RingSpec, n: i64) -> Self {
        match ring.flavor {
            Flavor::EquiChar => {
                let mut coeffs = vec![0; ring.a as usize];
                coeffs[0] = (n as i128).rem_euclid(ring.p as i128) as u64;
                Scalar { ring, repr: Repr::Poly(coeffs) }
            }
            Flavor::MixedChar => {
                let m = ring.modulus();
                Scalar { ring, repr: Repr::Int((n as i128).rem_euclid(m as i128) as u64) }
            }
        }
    }

    /// Image of an unsigned integer literal under `Z -> A`.
    pub fn from_u64(ring: RingSpec, n: u64) -> Self {
        match ring.flavor {
            Flavor::EquiChar => {
                let mut coeffs = vec![0; ring.a as usize];
                coeffs[0] = n % ring.p;
                Scalar { ring, repr: Repr::Poly(coeffs) }
            }
            Flavor::MixedChar => Scalar { ring, repr: Repr::Int(n % ring.modulus()) },
        }
    }

    /// EquiChar constructor from `pi`-coefficients (index `i` = coefficient of `pi^i`);
    /// entries are reduced mod `p`, indices `>= a` fall into `(pi^a) = 0`.
    pub fn from_coeffs(ring: RingSpec, coeffs: &[u64]) -> Self {
        assert_eq!(ring.flavor, Flavor::EquiChar, "from_coeffs is EquiChar-only");
        let mut c = vec![0; ring.a as usize];
        for (i, &x) in coeffs.iter().enumerate().take(ring.a as usize) {
            c[i] = x % ring.p;
        }
        Scalar { ring, repr: Repr::Poly(c) }
    }

    /// The uniformizer `w` (`pi` resp. `p`).
    pub fn uniformizer(ring: RingSpec) -> Self {
        Scalar::uniformizer_pow(ring, 1)
    }

    /// `w^k`; zero for `k >= a`.
    pub fn uniformizer_pow(ring: RingSpec, k: u32) -> Self {
        if k >= ring.a {
            return Scalar::zero(ring);
        }
        match ring.flavor {
            Flavor::EquiChar => {
                let mut coeffs = vec![0; ring.a as usize];
                coeffs[k as usize] = 1;
                Scalar { ring, repr: Repr::Poly(coeffs) }
            }
            Flavor::MixedChar => Scalar { ring, repr: Repr::Int(ring.p_pow(k)) },
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Poly(c) => c.iter().all(|&x| x == 0),
            Repr::Int(x) => *x == 0,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == 0
    }

    /// `v(x)`: the exponent in `x = unit · w^v`, with `v(0) = a` by convention.
    pub fn valuation(&self) -> u32 {
        match &self.repr {
            Repr::Poly(c) => c
                .iter()
                .position(|&x| x != 0)
                .map(|i| i as u32)
                .unwrap_or(self.ring.a),
            Repr::Int(x) => {
                if *x == 0 {
                    return self.ring.a;
                }
                let mut v = 0;
                let mut x = *x;
                while x % self.ring.p == 0 {
                    x /= self.ring.p;
                    v += 1;
                }
                v
            }
        }
    }

    /// `a - v(x)`: the least `e` with `w^e · x = 0`.
    pub fn annihilator_exponent(&self) -> u32 {
        self.ring.a - self.valuation()
    }

    /// Canonical unit `u` with `u · w^v(x) = x`. MixedChar: the representative in
    /// `[1, p^(a-v))` coprime to `p` obtained by integer division by `p^v`;
    /// EquiChar: the coefficient sequence shifted down by `v` (degree `< a - v`,
    /// nonzero constant term). Panics on zero input.
    pub fn unit_part(&self) -> Scalar {
        assert!(!self.is_zero(), "unit_part of zero");
        let v = self.valuation();
        match &self.repr {
            Repr::Poly(c) => {
                let mut out = vec![0; self.ring.a as usize];
                for i in (v as usize)..c.len() {
                    out[i - v as usize] = c[i];
                }
                Scalar { ring: self.ring, repr: Repr::Poly(out) }
            }
            Repr::Int(x) => Scalar { ring: self.ring, repr: Repr::Int(x / self.ring.p_pow(v)) },
        }
    }

    /// Multiplicative inverse for units; `None` otherwise.
    pub fn inverse(&self) -> Option<Scalar> {
        if !self.is_unit() {
            return None;
        }
        match &self.repr {
            Repr::Poly(c) => {
                // Power-series inversion: z0 = c0^-1, z_k = -c0^-1 * sum c_i z_(k-i).
                let p = self.ring.p;
                let inv0 = inv_mod(c[0], p);
                let mut z = vec![0u64; c.len()];
                z[0] = inv0;
                for k in 1..c.len() {
                    let mut acc: u128 = 0;
                    for i in 1..=k {
                        acc += (c[i] as u128) * (z[k - i] as u128);
                    }
                    let s = (acc % p as u128) as u64;
                    z[k] = (inv0 as u128 * ((p - s) as u128) % p as u128) as u64;
                }
                Some(Scalar { ring: self.ring, repr: Repr::Poly(z) })
            }
            Repr::Int(x) => {
                let m = self.ring.modulus();
                Some(Scalar { ring: self.ring, repr: Repr::Int(inv_mod(*x, m)) })
            }
        }
    }

    /// Canonical exact division: the quotient `q = unit_part(x) · unit_part(y)^-1 ·
    /// w^(v(x)-v(y))` with `q·y = x`, defined when `y != 0` and `v(x) >= v(y)`
    /// (`None` otherwise). All divisibility questions in a chain ring reduce to
    /// this valuation comparison.
    pub fn exact_divide(&self, y: &Scalar) -> Option<Scalar> {
        assert_eq!(self.ring, y.ring, "ring mismatch");
        if y.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Scalar::zero(self.ring));
        }
        let (vx, vy) = (self.valuation(), y.valuation());
        if vx < vy {
            return None;
        }
        let q = self
            .unit_part()
            .mul(&y.unit_part().inverse().expect("unit part is a unit"))
            .mul(&Scalar::uniformizer_pow(self.ring, vx - vy));
        debug_assert_eq!(q.mul(y), *self);
        Some(q)
    }

    /// Canonical representative of `x mod (w^m)` in the canonical transversal:
    /// EquiChar keeps the `pi`-support below `m`, MixedChar reduces mod `p^m`.
    /// `x - x.truncate(m)` always has valuation `>= m`.
    pub fn truncate(&self, m: u32) -> Scalar {
        let m = m.min(self.ring.a);
        match &self.repr {
            Repr::Poly(c) => {
                let mut out = c.clone();
                for x in out.iter_mut().skip(m as usize) {
                    *x = 0;
                }
                Scalar { ring: self.ring, repr: Repr::Poly(out) }
            }
            Repr::Int(x) => Scalar { ring: self.ring, repr: Repr::Int(x % self.ring.p_pow(m)) },
        }
    }

    /// EquiChar only: the `pi^i`-component (a scalar supported on index `i`).
    pub fn pi_layer(&self, i: u32) -> Scalar {
        match &self.repr {
            Repr::Poly(c) => {
                let mut out = vec![0; self.ring.a as usize];
                if (i as usize) < c.len() {
                    out[i as usize] = c[i as usize];
                }
                Scalar { ring: self.ring, repr: Repr::Poly(out) }
            }
            Repr::Int(_) => panic!("pi_layer is EquiChar-only"),
        }
    }

    /// EquiChar only: true when the support is contained in the single index `i`
    /// (i.e. the scalar lies in the grading piece `A_i`).
    pub fn is_graded_piece(&self, i: u32) -> bool {
        match &self.repr {
            Repr::Poly(c) => c
                .iter()
                .enumerate()
                .all(|(j, &x)| x == 0 || j as u32 == i),
            Repr::Int(_) => panic!("is_graded_piece is EquiChar-only"),
        }
    }

    /// Image in the residue field `A/(w) = F_p`.
    pub fn residue(&self) -> u64 {
        match &self.repr {
            Repr::Poly(c) => c[0],
            Repr::Int(x) => x % self.ring.p,
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        assert_eq!(self.ring, rhs.ring, "ring mismatch");
        match (&self.repr, &rhs.repr) {
            (Repr::Poly(x), Repr::Poly(y)) => {
                let p = self.ring.p;
                let c = x.iter().zip(y).map(|(&u, &w)| (u + w) % p).collect();
                Scalar { ring: self.ring, repr: Repr::Poly(c) }
            }
            (Repr::Int(x), Repr::Int(y)) => {
                let m = self.ring.modulus();
                Scalar { ring: self.ring, repr: Repr::Int(((x % m) + (y % m)) % m) }
            }
            _ => unreachable!("flavor determined by ring"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match &self.repr {
            Repr::Poly(x) => {
                let p = self.ring.p;
                let c = x.iter().map(|&u| (p - u) % p).collect();
                Scalar { ring: self.ring, repr: Repr::Poly(c) }
            }
            Repr::Int(x) => {
                let m = self.ring.modulus();
                Scalar { ring: self.ring, repr: Repr::Int((m - x % m) % m) }
            }
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        assert_eq!(self.ring, rhs.ring, "ring mismatch");
        match (&self.repr, &rhs.repr) {
            (Repr::Poly(x), Repr::Poly(y)) => {
                let p = self.ring.p as u128;
                let n = x.len();
                let mut c = vec![0u64; n];
                for k in 0..n {
                    let mut acc: u128 = 0;
                    for i in 0..=k {
                        acc += (x[i] as u128) * (y[k - i] as u128) % p;
                    }
                    c[k] = (acc % p) as u64;
                }
                Scalar { ring: self.ring, repr: Repr::Poly(c) }
            }
            (Repr::Int(x), Repr::Int(y)) => {
                let m = self.ring.modulus() as u128;
                Scalar {
                    ring: self.ring,
                    repr: Repr::Int(((*x as u128) * (*y as u128) % m) as u64),
                }
            }
            _ => unreachable!("flavor determined by ring"),
        }
    }

    /// MixedChar: the canonical integer value in `[0, p^a)`.
    pub fn int_value(&self) -> u64 {
        match &self.repr {
            Repr::Int(x) => *x,
            Repr::Poly(_) => panic!("int_value is MixedChar-only"),
        }
    }

    /// EquiChar: the `pi`-coefficient sequence (length `a`).
    pub fn coeffs(&self) -> &[u64] {
        match &self.repr {
            Repr::Poly(c) => c,
            Repr::Int(_) => panic!("coeffs is EquiChar-only"),
        }
    }
}

impl fmt::Display for Scalar {
    /// Canonical text form, re-readable by the scalar parser: MixedChar is the
    /// plain integer; EquiChar lists nonzero terms by ascending `pi`-power.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Int(x) => write!(f, "{x}"),
            Repr::Poly(c) => {
                let mut first = true;
                for (i, &x) in c.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    match (i, x) {
                        (0, _) => write!(f, "{x}")?,
                        (1, 1) => write!(f, "pi")?,
                        (1, _) => write!(f, "{x}*pi")?,
                        (_, 1) => write!(f, "pi^{i}")?,
                        (_, _) => write!(f, "{x}*pi^{i}")?,
                    }
                }
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
        }
    }
}
