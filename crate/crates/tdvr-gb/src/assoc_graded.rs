//! Passage to the value-graded side: initial forms over the twin ring, the
//! standard basis of the graded module, per-slice validation against the
//! elementary-divisor oracle, and the flatness routing built on all of it.
//!
//! Over `Z/p^a` the value-graded ring is `F_p[pi]/(pi^a)` with `pi` the class
//! of `p`; over `F_p[pi]/(pi^a)` it is the ring itself. The initial form of an
//! element keeps the terms whose coefficient valuation is minimal, with each
//! coefficient collapsed to its lowest layer. A completed basis of the
//! initial forms decides flatness of the quotient through the m-value table.

use crate::chainring::{Flavor, RingSpec, Scalar};
use crate::error::{Error, Result};
use crate::flatness::{default_degree_bound, is_flat, FlatnessReport};
use crate::freemod::{Element, ModuleMonomial, TermOrder};
use crate::groebner::{buchberger, homogenize_basis, Basis, CompletionConfig, CompletionStats};
use crate::oracle::{fp_row_space_eq, monomials_of_degree, oracle_gr};
use std::collections::VecDeque;

/// The value-graded twin of a coefficient ring.
pub fn graded_twin(ring: RingSpec) -> RingSpec {
    match ring.flavor() {
        Flavor::EquiChar => ring,
        Flavor::MixedChar => {
            RingSpec::new(ring.p(), ring.a(), Flavor::EquiChar).expect("same parameters")
        }
    }
}

/// Initial form of a nonzero element in the twin ring: the terms of minimal
/// coefficient valuation `v`, each coefficient `u·w^v` mapped to
/// `(u mod p)·pi^v`. The zero element maps to zero.
pub fn initial_form(g: &Element, twin: RingSpec) -> Element {
    let v = g.min_valuation();
    let terms = g
        .terms()
        .iter()
        .filter(|(c, _)| c.valuation() == v)
        .map(|(c, m)| {
            let unit = Scalar::from_u64(twin, c.unit_part().residue());
            (unit.mul(&Scalar::uniformizer_pow(twin, v)), m.clone())
        })
        .collect();
    Element::from_terms(twin, g.order().clone(), terms)
}

/// Leading data of `g` as seen in the graded module: among the terms of
/// minimal coefficient valuation, the one with the largest monomial — i.e.
/// the leading term of `initial_form(g)`. Terms are stored descending, so it
/// is the first term at the minimal valuation.
fn gr_leading(g: &Element) -> (&Scalar, &ModuleMonomial) {
    let v = g.min_valuation();
    g.terms()
        .iter()
        .find(|(c, _)| c.valuation() == v)
        .map(|(c, m)| (c, m))
        .expect("nonzero element")
}

/// One exact cancellation of the graded leading term: pick a reducer whose
/// gr-leading monomial divides `f`'s with valuation no larger (minimal
/// reducer valuation, ties by list index) and subtract the matching term
/// multiple. `None` when the gr-leading term of `f` is irreducible.
fn gr_reduce_step(f: &Element, list: &[Element]) -> Option<Element> {
    let (cf, xf) = gr_leading(f);
    let vf = cf.valuation();
    let mut best: Option<(u32, usize)> = None;
    for (i, g) in list.iter().enumerate() {
        let (cg, xg) = gr_leading(g);
        if !xg.divides(xf) {
            continue;
        }
        let vg = cg.valuation();
        if vg > vf {
            continue;
        }
        if best.map(|(v, _)| vg < v).unwrap_or(true) {
            best = Some((vg, i));
        }
    }
    let (_, i) = best?;
    let g = &list[i];
    let (cg, xg) = gr_leading(g);
    let q = cf.exact_divide(cg).expect("valuations admit exact division");
    let xq = xf.mono.quotient(&xg.mono).expect("divisibility checked");
    let h = f.sub(&g.term_mul(&q, &xq));
    // The cancelled term was the w-largest (lowest valuation, then largest
    // monomial); everything the multiple brings in sits strictly below it.
    debug_assert!(h.is_zero() || {
        let (ch, xh) = gr_leading(&h);
        ch.valuation() > vf
            || f.order().compare(xh, xf) == std::cmp::Ordering::Less
    });
    Some(h)
}

/// Iterate `gr_reduce_step` until zero or a stuck gr-leading term. Each step
/// strictly lowers (valuation, monomial) in the well-founded gr order, so
/// this terminates.
fn gr_top_reduce(f: &Element, list: &[Element]) -> Element {
    let mut work = f.clone();
    while !work.is_zero() {
        match gr_reduce_step(&work, list) {
            Some(next) => work = next,
            None => break,
        }
    }
    work
}

/// Lift of the S-pair of two initial forms: both sides are scaled so the
/// gr-leading terms meet at `w^max(v_i,v_j) · lcm(X_i, X_j)` and cancel
/// exactly. Callers only pair elements with equal gr-leading components.
fn gr_s_pair(gi: &Element, gj: &Element) -> Element {
    let (ci, xi) = gr_leading(gi);
    let (cj, xj) = gr_leading(gj);
    assert_eq!(xi.component, xj.component, "gr-S-pair across components");
    let ring = gi.ring();
    let x = xi.mono.lcm(&xj.mono);
    let (vi, vj) = (ci.valuation(), cj.valuation());
    let m = vi.max(vj);
    let mult_i = ci
        .unit_part()
        .inverse()
        .unwrap()
        .mul(&Scalar::uniformizer_pow(ring, m - vi));
    let mult_j = cj
        .unit_part()
        .inverse()
        .unwrap()
        .mul(&Scalar::uniformizer_pow(ring, m - vj));
    let part_i = gi.term_mul(&mult_i, &x.quotient(&xi.mono).unwrap());
    let part_j = gj.term_mul(&mult_j, &x.quotient(&xj.mono).unwrap());
    part_i.sub(&part_j)
}

/// Grow a generating list of the source module until the initial forms of
/// its members generate the whole associated graded module.
///
/// A strong basis is not enough here: cancellation between initial forms can
/// expose members of M whose initial forms lie outside the span of the
/// initial forms of any particular basis. Leading data on this side is
/// valuation-first (`gr_leading`), so a stuck gr-S-pair remainder is exactly
/// such a member, and it joins the list. Annihilator lifts are never queued:
/// `w^k·g` is either zero or has initial form `pi^k·initial_form(g)`, which
/// `g` itself gr-reduces to zero in one exact step. Pairs are processed FIFO;
/// same input, same output list. Terminates because inserted gr-leading data
/// `(component, monomial, valuation)` is pairwise incomparable under
/// (equal, divides, <=) and that order has no infinite antichains.
pub fn saturate_standard_basis(
    gens: &[Element],
    config: &CompletionConfig,
) -> Result<Vec<Element>> {
    let mut list: Vec<Element> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if list.is_empty() {
        return Err(Error::precondition(
            "all generators are zero: the zero module is excluded",
        ));
    }
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    let enqueue_for = |queue: &mut VecDeque<(usize, usize)>, list: &[Element], t: usize| {
        let ct = gr_leading(&list[t]).1.component;
        for i in 0..t {
            if gr_leading(&list[i]).1.component == ct {
                queue.push_back((i, t));
            }
        }
    };
    for t in 0..list.len() {
        enqueue_for(&mut queue, &list, t);
    }

    let mut processed = 0usize;
    while let Some((i, j)) = queue.pop_front() {
        processed += 1;
        if processed > config.pair_budget {
            return Err(Error::precondition(format!(
                "pair budget {} exceeded during standard-basis saturation",
                config.pair_budget
            )));
        }
        let remainder = gr_top_reduce(&gr_s_pair(&list[i], &list[j]), &list);
        if remainder.is_zero() {
            continue;
        }
        let unit = gr_leading(&remainder).0.unit_part().inverse().unwrap();
        let t = list.len();
        list.push(remainder.scalar_mul(&unit));
        enqueue_for(&mut queue, &list, t);
    }
    Ok(list)
}

/// Generators of the associated graded module, over the twin ring: complete
/// the input to a strong basis, saturate it, and take initial forms. The
/// flatness route cross-checks the generation contract slice by slice on
/// x-homogeneous input.
pub fn standard_basis(
    ring: RingSpec,
    order: &TermOrder,
    gens: &[Element],
    config: &CompletionConfig,
) -> Result<Vec<Element>> {
    let (basis, _) = buchberger(ring, order, gens, config)?;
    let saturated = saturate_standard_basis(basis.elements(), config)?;
    let twin = graded_twin(ring);
    Ok(saturated.iter().map(|g| initial_form(g, twin)).collect())
}

/// The standard-basis pipeline applied to a completed basis of the source
/// module: the basis saturated until its initial forms generate the graded
/// module, the initial forms themselves, and their completion over the twin
/// ring.
#[derive(Debug)]
pub struct GradedPipeline {
    pub twin_ring: RingSpec,
    pub standard_basis: Vec<Element>,
    pub initial_forms: Vec<Element>,
    pub graded_basis: Basis,
    pub graded_stats: CompletionStats,
}

pub fn graded_pipeline(source: &Basis, config: &CompletionConfig) -> Result<GradedPipeline> {
    let twin = graded_twin(source.ring());
    let standard = saturate_standard_basis(source.elements(), config)?;
    let initial_forms: Vec<Element> = standard.iter().map(|g| initial_form(g, twin)).collect();
    let order = source.elements()[0].order().clone();
    let (graded_basis, graded_stats) = buchberger(twin, &order, &initial_forms, config)?;
    Ok(GradedPipeline {
        twin_ring: twin,
        standard_basis: standard,
        initial_forms,
        graded_basis,
        graded_stats,
    })
}

/// F_p span of the graded module's `(level, degree)` slice, as residue rows
/// over the slice monomials (the same enumeration the oracle uses: components
/// ascending, exponent vectors lexicographically descending). Elements must be
/// value-homogeneous (initial forms are) and x-homogeneous.
pub fn graded_slice_rows(elements: &[Element], level: u32, degree: u32) -> Result<Vec<Vec<u64>>> {
    let first = elements
        .first()
        .ok_or_else(|| Error::precondition("no graded elements"))?;
    let nvars = first.terms()[0].1.mono.nvars();
    let rank = first.order().rank();
    let mut index = std::collections::HashMap::new();
    let mut ncols = 0;
    for component in 0..rank {
        for m in monomials_of_degree(nvars, degree) {
            index.insert(ModuleMonomial::new(m, component), ncols);
            ncols += 1;
        }
    }
    let mut rows = Vec::new();
    for h in elements {
        let v = h.is_homogeneous().ok_or_else(|| {
            Error::precondition("graded slice rows require value-homogeneous elements")
        })?;
        if v > level {
            continue;
        }
        let dh = h.is_x_homogeneous().ok_or_else(|| {
            Error::precondition("graded slice rows require x-homogeneous elements")
        })?;
        if dh > degree as u64 {
            continue;
        }
        for alpha in monomials_of_degree(nvars, degree - dh as u32) {
            let mut row = vec![0u64; ncols];
            for (c, m) in h.terms() {
                let target = m.mul_mono(&alpha);
                row[index[&target]] = c.unit_part().residue();
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Per-instance validation of the standard basis: on every slice
/// `level < a`, `degree <= max_degree`, its span must coincide with the
/// elementary-divisor oracle computed from the source generators. A mismatch
/// is an internal-contract error naming the first offending slice. Returns
/// the number of slices checked.
pub fn validate_graded_slices(
    source_gens: &[Element],
    graded_elements: &[Element],
    max_degree: u32,
) -> Result<u64> {
    let ring = source_gens
        .first()
        .ok_or_else(|| Error::precondition("no source generators"))?
        .ring();
    let mut checked = 0;
    for degree in 0..=max_degree {
        for level in 0..ring.a() {
            let oracle = oracle_gr(source_gens, level, degree)?;
            let engine = graded_slice_rows(graded_elements, level, degree)?;
            if !fp_row_space_eq(&engine, &oracle.basis_rows, ring.p()) {
                return Err(Error::contract(format!(
                    "graded slice mismatch at level {level}, x-degree {degree}: \
                     the standard basis span disagrees with the elementary-divisor oracle"
                )));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// How the flatness verdict was reached.
#[derive(Debug)]
pub enum FlatDecision {
    /// The module is value-graded (equicharacteristic only): the homogenized
    /// basis is a strong basis of the same module and carries the m-table.
    Graded { basis: Basis, report: FlatnessReport },
    /// Through the initial-form pipeline over the twin ring. When the source
    /// basis is x-homogeneous, every slice was cross-checked against the
    /// oracle (`slices_validated` counts them).
    ViaGraded {
        pipeline: GradedPipeline,
        report: FlatnessReport,
        slices_validated: Option<u64>,
    },
}

impl FlatDecision {
    pub fn report(&self) -> &FlatnessReport {
        match self {
            FlatDecision::Graded { report, .. } => report,
            FlatDecision::ViaGraded { report, .. } => report,
        }
    }

    /// The basis that carries the m-table (and hence rank and normal forms in
    /// the graded world).
    pub fn carrier(&self) -> &Basis {
        match self {
            FlatDecision::Graded { basis, .. } => basis,
            FlatDecision::ViaGraded { pipeline, .. } => &pipeline.graded_basis,
        }
    }
}

/// Decide flatness of `L/M` over the coefficient ring from a completed basis
/// of `M`. Equicharacteristic value-graded modules take the direct route; all
/// others pass through initial forms over the twin ring.
pub fn decide_flat(source: &Basis, config: &CompletionConfig) -> Result<FlatDecision> {
    if source.ring().flavor() == Flavor::EquiChar {
        if let Ok(homogenized) = homogenize_basis(source) {
            let report = is_flat(&homogenized)?;
            return Ok(FlatDecision::Graded { basis: homogenized, report });
        }
    }
    let pipeline = graded_pipeline(source, config)?;
    let report = is_flat(&pipeline.graded_basis)?;
    let x_homogeneous = source.elements().iter().all(|g| g.is_x_homogeneous().is_some());
    let slices_validated = if x_homogeneous {
        let max_degree = default_degree_bound(&pipeline.graded_basis);
        Some(validate_graded_slices(
            source.elements(),
            pipeline.graded_basis.elements(),
            max_degree,
        )?)
    } else {
        None
    };
    Ok(FlatDecision::ViaGraded { pipeline, report, slices_validated })
}
