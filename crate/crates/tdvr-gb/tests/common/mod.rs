//! Seeded random-instance machinery shared by the integration suites. All
//! randomness flows through a caller-provided ChaCha8 stream, so every suite
//! is reproducible from its seed.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use tdvr_gb::chainring::{Flavor, RingSpec, Scalar};
use tdvr_gb::freemod::{
    Element, ModuleMode, ModuleMonomial, MonoOrder, Monomial, TermOrder,
};
use tdvr_gb::oracle::monomials_of_degree;

pub struct RandomInstance {
    pub ring: RingSpec,
    pub order: TermOrder,
    pub nvars: usize,
    pub gens: Vec<Element>,
}

pub fn random_ring(rng: &mut ChaCha8Rng) -> RingSpec {
    let p = [2u64, 3, 5][rng.gen_range(0..3)];
    let a = rng.gen_range(1..=4u32);
    let flavor = if rng.gen_bool(0.5) { Flavor::EquiChar } else { Flavor::MixedChar };
    RingSpec::new(p, a, flavor).expect("small parameters are always valid")
}

pub fn random_order(rng: &mut ChaCha8Rng, rank: usize) -> TermOrder {
    let mono = [MonoOrder::Lex, MonoOrder::DegLex, MonoOrder::DegRevLex][rng.gen_range(0..3)];
    let mode = if rng.gen_bool(0.5) { ModuleMode::Pot } else { ModuleMode::Top };
    let mut priority: Vec<usize> = (0..rank).collect();
    // Fisher-Yates with the shared stream.
    for i in (1..rank).rev() {
        let j = rng.gen_range(0..=i);
        priority.swap(i, j);
    }
    TermOrder::new(mono, mode, priority).expect("permutation by construction")
}

/// Uniform over the whole ring (units and non-units alike); may be zero.
pub fn random_scalar(rng: &mut ChaCha8Rng, ring: RingSpec) -> Scalar {
    let digits: Vec<u64> = (0..ring.a()).map(|_| rng.gen_range(0..ring.p())).collect();
    match ring.flavor() {
        Flavor::EquiChar => Scalar::from_coeffs(ring, &digits),
        Flavor::MixedChar => {
            let mut n = 0u64;
            for (i, &d) in digits.iter().enumerate() {
                n += d * ring.p_pow(i as u32);
            }
            Scalar::from_int(ring, n as i64)
        }
    }
}

pub fn random_nonzero_scalar(rng: &mut ChaCha8Rng, ring: RingSpec) -> Scalar {
    loop {
        let s = random_scalar(rng, ring);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn random_monomial(rng: &mut ChaCha8Rng, nvars: usize, max_degree: u32) -> Monomial {
    let d = rng.gen_range(0..=max_degree);
    let choices = monomials_of_degree(nvars, d);
    choices[rng.gen_range(0..choices.len())].clone()
}

/// A nonzero element with at most `max_terms` terms of x-degree <= `max_degree`.
pub fn random_element(
    rng: &mut ChaCha8Rng,
    ring: RingSpec,
    order: &TermOrder,
    nvars: usize,
    max_degree: u32,
    max_terms: usize,
) -> Element {
    loop {
        let nterms = rng.gen_range(1..=max_terms);
        let terms: Vec<(Scalar, ModuleMonomial)> = (0..nterms)
            .map(|_| {
                let m = ModuleMonomial::new(
                    random_monomial(rng, nvars, max_degree),
                    rng.gen_range(0..order.rank()),
                );
                (random_nonzero_scalar(rng, ring), m)
            })
            .collect();
        let e = Element::from_terms(ring, order.clone(), terms);
        if !e.is_zero() {
            return e;
        }
    }
}

/// A nonzero element all of whose monomials have x-degree exactly `degree`.
pub fn random_x_homogeneous_element(
    rng: &mut ChaCha8Rng,
    ring: RingSpec,
    order: &TermOrder,
    nvars: usize,
    degree: u32,
    max_terms: usize,
) -> Element {
    let choices = monomials_of_degree(nvars, degree);
    loop {
        let nterms = rng.gen_range(1..=max_terms);
        let terms: Vec<(Scalar, ModuleMonomial)> = (0..nterms)
            .map(|_| {
                let m = ModuleMonomial::new(
                    choices[rng.gen_range(0..choices.len())].clone(),
                    rng.gen_range(0..order.rank()),
                );
                (random_nonzero_scalar(rng, ring), m)
            })
            .collect();
        let e = Element::from_terms(ring, order.clone(), terms);
        if !e.is_zero() {
            return e;
        }
    }
}

/// General instance family: p in {2,3,5}, a in 1..=4, n <= 2, r <= 2,
/// <= 4 generators of x-degree <= 3, both flavors, random order.
pub fn random_instance(rng: &mut ChaCha8Rng) -> RandomInstance {
    let ring = random_ring(rng);
    let nvars = rng.gen_range(1..=2usize);
    let rank = rng.gen_range(1..=2usize);
    let order = random_order(rng, rank);
    let ngens = rng.gen_range(1..=4usize);
    let gens: Vec<Element> = (0..ngens)
        .map(|_| random_element(rng, ring, &order, nvars, 3, 3))
        .collect();
    RandomInstance { ring, order, nvars, gens }
}

/// Same family, every generator x-homogeneous (degrees may differ between
/// generators).
pub fn random_x_homogeneous_instance(rng: &mut ChaCha8Rng) -> RandomInstance {
    let ring = random_ring(rng);
    let nvars = rng.gen_range(1..=2usize);
    let rank = rng.gen_range(1..=2usize);
    let order = random_order(rng, rank);
    let ngens = rng.gen_range(1..=4usize);
    let gens: Vec<Element> = (0..ngens)
        .map(|_| {
            let d = rng.gen_range(0..=3u32);
            random_x_homogeneous_element(rng, ring, &order, nvars, d, 3)
        })
        .collect();
    RandomInstance { ring, order, nvars, gens }
}

/// A member by construction: a short random combination `sum c_i x^(a_i) g_i`.
#[allow(dead_code)] // not every suite that includes this module builds members
pub fn random_member(rng: &mut ChaCha8Rng, instance: &RandomInstance) -> Element {
    let mut acc = Element::zero(instance.ring, instance.order.clone());
    let picks = rng.gen_range(1..=2usize);
    for _ in 0..picks {
        let g = &instance.gens[rng.gen_range(0..instance.gens.len())];
        let c = random_nonzero_scalar(rng, instance.ring);
        let m = random_monomial(rng, instance.nvars, 2);
        acc = acc.add(&g.term_mul(&c, &m));
    }
    acc
}

/// An x-homogeneous member of x-degree exactly `degree`, if some generator's
/// degree permits one; `None` otherwise.
#[allow(dead_code)] // not every suite that includes this module builds members
pub fn random_x_homogeneous_member(
    rng: &mut ChaCha8Rng,
    instance: &RandomInstance,
    degree: u32,
) -> Option<Element> {
    let eligible: Vec<&Element> = instance
        .gens
        .iter()
        .filter(|g| g.max_x_degree().map(|d| d as u32 <= degree).unwrap_or(false))
        .collect();
    if eligible.is_empty() {
        return None;
    }
    let mut acc = Element::zero(instance.ring, instance.order.clone());
    let picks = rng.gen_range(1..=2usize);
    for _ in 0..picks {
        let g = eligible[rng.gen_range(0..eligible.len())];
        let gd = g.max_x_degree().unwrap() as u32;
        let mults = monomials_of_degree(instance.nvars, degree - gd);
        let m = mults[rng.gen_range(0..mults.len())].clone();
        let c = random_nonzero_scalar(rng, instance.ring);
        acc = acc.add(&g.term_mul(&c, &m));
    }
    Some(acc)
}
