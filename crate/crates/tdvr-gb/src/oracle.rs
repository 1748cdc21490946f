//! Independent verification path for x-homogeneous instances: per-x-degree
//! linear algebra over the coefficient ring, built on a valuation-pivot Smith
//! normal form with invertible transformation certificates. Deliberately shares
//! only the scalar and free-module layers with the Groebner engine.

use std::collections::HashMap;

use crate::chainring::{RingSpec, Scalar};
use crate::error::{Error, Result};
use crate::freemod::{Element, ModuleMonomial, Monomial};

/// Dense row-major matrix over the coefficient ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarMatrix {
    ring: RingSpec,
    data: Vec<Vec<Scalar>>,
    cols: usize,
}

impl ScalarMatrix {
    pub fn zero(ring: RingSpec, rows: usize, cols: usize) -> Self {
        ScalarMatrix {
            ring,
            data: vec![vec![Scalar::zero(ring); cols]; rows],
            cols,
        }
    }

    pub fn identity(ring: RingSpec, n: usize) -> Self {
        let mut m = ScalarMatrix::zero(ring, n, n);
        for i in 0..n {
            m.data[i][i] = Scalar::one(ring);
        }
        m
    }

    pub fn from_rows(ring: RingSpec, rows: Vec<Vec<Scalar>>, cols: usize) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols);
            for x in r {
                assert_eq!(x.ring(), ring, "ring mismatch");
            }
        }
        ScalarMatrix { ring, data: rows, cols }
    }

    pub fn rows(&self) -> usize {
        self.data.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i][j]
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i]
    }

    pub fn mul(&self, rhs: &ScalarMatrix) -> ScalarMatrix {
        assert_eq!(self.cols, rhs.rows());
        let mut out = ScalarMatrix::zero(self.ring, self.rows(), rhs.cols);
        for i in 0..self.rows() {
            for j in 0..rhs.cols {
                let mut acc = Scalar::zero(self.ring);
                for t in 0..self.cols {
                    acc = acc.add(&self.data[i][t].mul(&rhs.data[t][j]));
                }
                out.data[i][j] = acc;
            }
        }
        out
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.data.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.data {
            row.swap(i, j);
        }
    }

    fn scale_row(&mut self, i: usize, s: &Scalar) {
        for x in &mut self.data[i] {
            *x = x.mul(s);
        }
    }

    fn scale_col(&mut self, j: usize, s: &Scalar) {
        for row in &mut self.data {
            row[j] = row[j].mul(s);
        }
    }

    /// row_i -= q · row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &Scalar) {
        for j in 0..self.cols {
            let sub = self.data[t][j].mul(q);
            self.data[i][j] = self.data[i][j].sub(&sub);
        }
    }

    /// col_j -= q · col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &Scalar) {
        for row in &mut self.data {
            let sub = row[t].mul(q);
            row[j] = row[j].sub(&sub);
        }
    }

    /// col_j += q · col_t
    fn col_add(&mut self, j: usize, t: usize, q: &Scalar) {
        for row in &mut self.data {
            let add = row[t].mul(q);
            row[j] = row[j].add(&add);
        }
    }

    /// row_i += q · row_t
    fn row_add(&mut self, i: usize, t: usize, q: &Scalar) {
        for j in 0..self.cols {
            let add = self.data[t][j].mul(q);
            self.data[i][j] = self.data[i][j].add(&add);
        }
    }
}

/// `U · input · V = diag(w^e_1, …, w^e_k)` with `e_1 <= … <= e_k` (exponent `a`
/// encodes a zero diagonal entry) and `U, V` invertible with recorded inverses.
#[derive(Debug, Clone)]
pub struct SmithResult {
    pub exponents: Vec<u32>,
    pub u: ScalarMatrix,
    pub u_inv: ScalarMatrix,
    pub v: ScalarMatrix,
    pub v_inv: ScalarMatrix,
}

impl SmithResult {
    pub fn diagonal(&self, ring: RingSpec, rows: usize, cols: usize) -> ScalarMatrix {
        let mut d = ScalarMatrix::zero(ring, rows, cols);
        for (t, &e) in self.exponents.iter().enumerate() {
            d.data[t][t] = Scalar::uniformizer_pow(ring, e);
        }
        d
    }

    /// Exact certificate check: transformations multiply back to the input and
    /// the recorded inverses really invert.
    pub fn verify(&self, input: &ScalarMatrix) -> bool {
        let ring = input.ring;
        let (rows, cols) = (input.rows(), input.cols());
        let d = self.diagonal(ring, rows, cols);
        self.u.mul(input).mul(&self.v) == d
            && self.u.mul(&self.u_inv) == ScalarMatrix::identity(ring, rows)
            && self.v.mul(&self.v_inv) == ScalarMatrix::identity(ring, cols)
    }
}

/// Smith normal form over the chain ring. The pivot is always an entry of
/// minimal valuation in the remaining submatrix (ties row-major), which over a
/// chain ring divides every remaining entry — one elimination pass per pivot,
/// and the diagonal exponents come out ascending by construction.
pub fn smith_over_chain_ring(input: &ScalarMatrix) -> SmithResult {
    let ring = input.ring;
    let a = ring.a();
    let (rows, cols) = (input.rows(), input.cols());
    let k = rows.min(cols);

    let mut d = input.clone();
    let mut u = ScalarMatrix::identity(ring, rows);
    let mut u_inv = ScalarMatrix::identity(ring, rows);
    let mut v = ScalarMatrix::identity(ring, cols);
    let mut v_inv = ScalarMatrix::identity(ring, cols);
    let mut exponents = vec![a; k];

    for t in 0..k {
        // Minimal-valuation entry of the trailing submatrix, ties row-major.
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let val = d.data[i][j].valuation();
                if val < a && best.map(|(bv, _, _)| val < bv).unwrap_or(true) {
                    best = Some((val, i, j));
                }
            }
        }
        let (e, pi, pj) = match best {
            Some(b) => b,
            None => break, // trailing submatrix is zero; exponents stay a
        };

        if pi != t {
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
        }
        if pj != t {
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);
        }

        // Normalize the pivot to w^e.
        let w = d.data[t][t].unit_part();
        let w_inv = w.inverse().unwrap();
        d.scale_row(t, &w_inv);
        u.scale_row(t, &w_inv);
        u_inv.scale_col(t, &w);

        let pivot = d.data[t][t].clone();
        for i in (t + 1)..rows {
            if d.data[i][t].is_zero() {
                continue;
            }
            let q = d.data[i][t].exact_divide(&pivot).expect("pivot has minimal valuation");
            d.row_sub(i, t, &q);
            u.row_sub(i, t, &q);
            u_inv.col_add(t, i, &q);
        }
        for j in (t + 1)..cols {
            if d.data[t][j].is_zero() {
                continue;
            }
            let q = d.data[t][j].exact_divide(&pivot).expect("pivot has minimal valuation");
            d.col_sub(j, t, &q);
            v.col_sub(j, t, &q);
            v_inv.row_add(t, j, &q);
        }
        exponents[t] = e;
    }

    let result = SmithResult { exponents, u, u_inv, v, v_inv };
    debug_assert!(result.verify(input));
    result
}

/// All monomials of total degree `d` in `n` variables, lexicographically
/// descending in the exponent vector — a fixed enumeration order shared by all
/// slice data.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if n == 1 {
            prefix.push(d);
            out.push(Monomial::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n - 1, d - e, prefix, out);
            prefix.pop();
        }
    }
    assert!(n >= 1);
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// The degree-`d` slice of `L` and of the monomial multiples of `F` that land
/// in it: `matrix` rows span `M_d` as a module over the coefficient ring.
#[derive(Debug, Clone)]
pub struct DegreeSlice {
    pub degree: u32,
    pub monomials: Vec<ModuleMonomial>,
    pub matrix: ScalarMatrix,
}

fn validated_gens(gens: &[Element]) -> Result<Vec<&Element>> {
    let nonzero: Vec<&Element> = gens.iter().filter(|g| !g.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::precondition(
            "all generators are zero: the zero module is excluded",
        ));
    }
    for g in &nonzero {
        if g.is_x_homogeneous().is_none() {
            return Err(Error::precondition(
                "oracle computations require x-homogeneous generators",
            ));
        }
    }
    Ok(nonzero)
}

impl DegreeSlice {
    pub fn build(gens: &[Element], d: u32) -> Result<DegreeSlice> {
        let gens = validated_gens(gens)?;
        let g0 = gens[0];
        let ring = g0.ring();
        let n = g0.terms()[0].1.mono.nvars();
        let rank = g0.order().rank();

        let mut monomials = Vec::new();
        for component in 0..rank {
            for m in monomials_of_degree(n, d) {
                monomials.push(ModuleMonomial::new(m, component));
            }
        }
        let index: HashMap<&ModuleMonomial, usize> =
            monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();

        let mut rows = Vec::new();
        for g in gens {
            let dg = g.is_x_homogeneous().unwrap();
            if dg > d as u64 {
                continue;
            }
            for alpha in monomials_of_degree(n, d - dg as u32) {
                let shifted = g.mono_mul(&alpha);
                let mut row = vec![Scalar::zero(ring); monomials.len()];
                for (c, m) in shifted.terms() {
                    row[*index.get(m).expect("degree bookkeeping")] = c.clone();
                }
                rows.push(row);
            }
        }
        let cols = monomials.len();
        Ok(DegreeSlice { degree: d, monomials, matrix: ScalarMatrix::from_rows(ring, rows, cols) })
    }
}

/// Isomorphism invariants of the degree-`d` slice of `L/M` as a module over the
/// coefficient ring: `⊕ A/(w^e_i)` with every `e_i` in `[1, a]`; `e_i = a` are
/// the free summands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleInvariants {
    /// Sorted descending.
    pub exponents: Vec<u32>,
    pub free_rank: usize,
}

impl ModuleInvariants {
    pub fn is_free(&self) -> bool {
        // free_rank counts the exponents equal to a, so equality means all are.
        self.free_rank == self.exponents.len()
    }
}

pub fn quotient_invariants(gens: &[Element], d: u32) -> Result<ModuleInvariants> {
    let slice = DegreeSlice::build(gens, d)?;
    let ring = slice.matrix.ring;
    let a = ring.a();
    let smith = smith_over_chain_ring(&slice.matrix);
    let n_cols = slice.matrix.cols();
    let k = smith.exponents.len();
    let mut exponents: Vec<u32> = smith
        .exponents
        .iter()
        .copied()
        .filter(|&e| e > 0)
        .collect();
    exponents.extend(std::iter::repeat(a).take(n_cols - k));
    exponents.sort_unstable_by(|x, y| y.cmp(x));
    let free_rank = exponents.iter().filter(|&&e| e == a).count();
    Ok(ModuleInvariants { exponents, free_rank })
}

#[derive(Debug, Clone)]
pub struct OracleFlatnessReport {
    pub flat: bool,
    /// Invariants for every x-degree `0..=max_degree`.
    pub per_degree: Vec<ModuleInvariants>,
    pub first_non_free_degree: Option<u32>,
    pub max_degree: u32,
}

/// Degree-by-degree freeness of `L/M` up to `max_degree`: for x-homogeneous
/// `M`, the quotient is flat over the coefficient ring iff every slice is free,
/// and the truncated cone certifies every verdict the staircase can reach.
pub fn oracle_is_flat(gens: &[Element], max_degree: u32) -> Result<OracleFlatnessReport> {
    let mut per_degree = Vec::new();
    let mut first_non_free = None;
    for d in 0..=max_degree {
        let inv = quotient_invariants(gens, d)?;
        if first_non_free.is_none() && !inv.is_free() {
            first_non_free = Some(d);
        }
        per_degree.push(inv);
    }
    Ok(OracleFlatnessReport {
        flat: first_non_free.is_none(),
        per_degree,
        first_non_free_degree: first_non_free,
        max_degree,
    })
}

/// Exact membership of an x-homogeneous element in the span of x-homogeneous
/// generators, by solvability of the slice system in Smith coordinates.
pub fn oracle_membership(f: &Element, gens: &[Element]) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    let d = f.is_x_homogeneous().ok_or_else(|| {
        Error::precondition("oracle membership requires an x-homogeneous probe")
    })? as u32;
    let slice = DegreeSlice::build(gens, d)?;
    let ring = slice.matrix.ring;
    let index: HashMap<&ModuleMonomial, usize> =
        slice.monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rhs = vec![Scalar::zero(ring); slice.monomials.len()];
    for (c, m) in f.terms() {
        match index.get(m) {
            Some(&i) => rhs[i] = c.clone(),
            None => return Err(Error::precondition("probe does not live in the slice")),
        }
    }
    let smith = smith_over_chain_ring(&slice.matrix);
    // Solve y·Mat = rhs  ⇔  z·D = rhs·V with z = y·U^{-1}.
    let n = slice.monomials.len();
    let mut w = vec![Scalar::zero(ring); n];
    for j in 0..n {
        let mut acc = Scalar::zero(ring);
        for (i, r) in rhs.iter().enumerate() {
            acc = acc.add(&r.mul(smith.v.at(i, j)));
        }
        w[j] = acc;
    }
    let k = smith.exponents.len();
    for (j, wj) in w.iter().enumerate() {
        let required = if j < k { smith.exponents[j] } else { ring.a() };
        if wj.valuation() < required {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An F_p-basis of `gr^i(M)_d = (M_d ∩ w^i L_d) / (M_d ∩ w^(i+1) L_d)`,
/// as residue-vectors over the slice monomials: row `r` represents the class
/// of `w^i · (Σ_j r_j · X_j)`.
#[derive(Debug, Clone)]
pub struct GrSlice {
    pub level: u32,
    pub degree: u32,
    pub monomials: Vec<ModuleMonomial>,
    pub basis_rows: Vec<Vec<u64>>,
}

/// In Smith coordinates `M_d = span{w^(e_j)·row_j(V^{-1})}` the intersection
/// with `w^i·L_d` decouples to `⊕ w^(max(e_j, i))·A·row_j(V^{-1})`, so the
/// graded slice gets one basis vector per `e_j <= i`: the residue of
/// `row_j(V^{-1})`. Rows of an invertible matrix stay independent mod `w`.
pub fn oracle_gr(gens: &[Element], level: u32, d: u32) -> Result<GrSlice> {
    let slice = DegreeSlice::build(gens, d)?;
    let ring = slice.matrix.ring;
    if level >= ring.a() {
        return Err(Error::precondition(format!(
            "graded level {level} is out of range [0, {})",
            ring.a()
        )));
    }
    let smith = smith_over_chain_ring(&slice.matrix);
    let mut basis_rows = Vec::new();
    for (j, &e) in smith.exponents.iter().enumerate() {
        if e <= level {
            basis_rows.push(smith.v_inv.row(j).iter().map(|x| x.residue()).collect());
        }
    }
    Ok(GrSlice { level, degree: d, monomials: slice.monomials, basis_rows })
}

/// Reduced row echelon form over F_p; canonical, so two row spans are equal
/// iff their RREFs are equal.
pub fn fp_rref(mut rows: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    for r in &mut rows {
        for x in r.iter_mut() {
            *x %= p;
        }
    }
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivot_row = 0;
    for col in 0..ncols {
        let Some(sel) = (pivot_row..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(pivot_row, sel);
        let inv = mod_inverse(rows[pivot_row][col], p);
        for x in rows[pivot_row].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != pivot_row && rows[i][col] != 0 {
                let f = rows[i][col];
                for j in 0..ncols {
                    let sub = f * rows[pivot_row][j] % p;
                    rows[i][j] = (rows[i][j] + p - sub) % p;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.retain(|r| r.iter().any(|&x| x != 0));
    rows
}

fn mod_inverse(x: u64, p: u64) -> u64 {
    // p prime, x != 0 mod p: Fermat.
    let mut result: u64 = 1;
    let mut base = x % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = (result as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        e >>= 1;
    }
    result
}

/// Row-span equality over F_p.
pub fn fp_row_space_eq(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> bool {
    fp_rref(a.to_vec(), p) == fp_rref(b.to_vec(), p)
}
