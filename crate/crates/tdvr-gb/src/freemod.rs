//! The free module `L = R·e_1 ⊕ … ⊕ R·e_r` over `R = A[x_1, …, x_n]`: monomials
//! with component markers, the supported term orders, and elements kept as
//! strictly descending sorted term lists.

use std::cmp::Ordering;
use std::fmt;

use crate::chainring::{RingSpec, Scalar};

/// An exponent vector `x^α`. Exponents are 32-bit; overflow in a product is a
/// hard error, never a wrap.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exp(&self, var: usize) -> u32 {
        self.0[var]
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Total degree (as u64: sums of u32 cannot overflow it at any sane nvars).
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        assert_eq!(self.nvars(), rhs.nvars(), "variable count mismatch");
        Monomial(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(&x, &y)| x.checked_add(y).expect("monomial exponent overflow"))
                .collect(),
        )
    }

    pub fn divides(&self, rhs: &Monomial) -> bool {
        assert_eq!(self.nvars(), rhs.nvars(), "variable count mismatch");
        self.0.iter().zip(&rhs.0).all(|(&x, &y)| x <= y)
    }

    /// `self / rhs` when `rhs` divides `self`.
    pub fn quotient(&self, rhs: &Monomial) -> Option<Monomial> {
        if rhs.divides(self) {
            Some(Monomial(self.0.iter().zip(&rhs.0).map(|(&x, &y)| x - y).collect()))
        } else {
            None
        }
    }

    pub fn lcm(&self, rhs: &Monomial) -> Monomial {
        assert_eq!(self.nvars(), rhs.nvars(), "variable count mismatch");
        Monomial(self.0.iter().zip(&rhs.0).map(|(&x, &y)| x.max(y)).collect())
    }

    pub fn gcd(&self, rhs: &Monomial) -> Monomial {
        assert_eq!(self.nvars(), rhs.nvars(), "variable count mismatch");
        Monomial(self.0.iter().zip(&rhs.0).map(|(&x, &y)| x.min(y)).collect())
    }

    pub fn is_coprime_with(&self, rhs: &Monomial) -> bool {
        self.0.iter().zip(&rhs.0).all(|(&x, &y)| x == 0 || y == 0)
    }

    /// Support contained in the single variable `var` (includes the monomial 1).
    pub fn is_pure_power_of(&self, var: usize) -> bool {
        self.0.iter().enumerate().all(|(i, &e)| e == 0 || i == var)
    }
}

/// A monomial of `L`: `x^α · e_component`. Components are 0-based internally and
/// printed 1-based (`e1`, …, `er`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleMonomial {
    pub mono: Monomial,
    pub component: usize,
}

impl ModuleMonomial {
    pub fn new(mono: Monomial, component: usize) -> Self {
        ModuleMonomial { mono, component }
    }

    /// Divisibility within `L`: same component, monomial divides.
    pub fn divides(&self, rhs: &ModuleMonomial) -> bool {
        self.component == rhs.component && self.mono.divides(&rhs.mono)
    }

    pub fn mul_mono(&self, m: &Monomial) -> ModuleMonomial {
        ModuleMonomial { mono: self.mono.mul(m), component: self.component }
    }

    pub fn degree(&self) -> u64 {
        self.mono.degree()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonoOrder {
    Lex,
    DegLex,
    DegRevLex,
}

impl MonoOrder {
    pub fn name(&self) -> &'static str {
        match self {
            MonoOrder::Lex => "lex",
            MonoOrder::DegLex => "deglex",
            MonoOrder::DegRevLex => "degrevlex",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleMode {
    /// Position over term: component decides first.
    Pot,
    /// Term over position: monomial decides first.
    Top,
}

impl ModuleMode {
    pub fn name(&self) -> &'static str {
        match self {
            ModuleMode::Pot => "pot",
            ModuleMode::Top => "top",
        }
    }
}

/// A module term order: monomial order × POT/TOP × component priority.
/// The priority lists components greatest-first (0-based); the default for rank
/// `r` is degrevlex, POT, priority `(e_1, …, e_r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermOrder {
    mono: MonoOrder,
    mode: ModuleMode,
    priority: Vec<usize>,
    /// `rank_of[c]` = position of component `c` in `priority`; smaller is greater.
    rank_of: Vec<usize>,
}

impl TermOrder {
    pub fn new(mono: MonoOrder, mode: ModuleMode, priority: Vec<usize>) -> crate::Result<Self> {
        let r = priority.len();
        let mut rank_of = vec![usize::MAX; r];
        for (pos, &c) in priority.iter().enumerate() {
            if c >= r || rank_of[c] != usize::MAX {
                return Err(crate::Error::precondition(format!(
                    "component priority {:?} is not a permutation",
                    priority.iter().map(|c| c + 1).collect::<Vec<_>>()
                )));
            }
            rank_of[c] = pos;
        }
        Ok(TermOrder { mono, mode, priority, rank_of })
    }

    pub fn default_for_rank(r: usize) -> Self {
        TermOrder::new(MonoOrder::DegRevLex, ModuleMode::Pot, (0..r).collect()).unwrap()
    }

    pub fn mono_order(&self) -> MonoOrder {
        self.mono
    }

    pub fn module_mode(&self) -> ModuleMode {
        self.mode
    }

    pub fn rank(&self) -> usize {
        self.priority.len()
    }

    /// Component priority, greatest first, 1-based (as printed in reports).
    pub fn priority_display(&self) -> Vec<usize> {
        self.priority.iter().map(|&c| c + 1).collect()
    }

    pub fn compare_mono(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.mono {
            MonoOrder::Lex => a.exps().cmp(b.exps()),
            MonoOrder::DegLex => a
                .degree()
                .cmp(&b.degree())
                .then_with(|| a.exps().cmp(b.exps())),
            MonoOrder::DegRevLex => a.degree().cmp(&b.degree()).then_with(|| {
                for i in (0..a.nvars()).rev() {
                    if a.exp(i) != b.exp(i) {
                        // Reverse-lex tail: the smaller trailing exponent wins.
                        return b.exp(i).cmp(&a.exp(i));
                    }
                }
                Ordering::Equal
            }),
        }
    }

    fn compare_component(&self, a: usize, b: usize) -> Ordering {
        // Smaller rank = higher priority = greater.
        self.rank_of[b].cmp(&self.rank_of[a])
    }

    pub fn compare(&self, a: &ModuleMonomial, b: &ModuleMonomial) -> Ordering {
        match self.mode {
            ModuleMode::Pot => self
                .compare_component(a.component, b.component)
                .then_with(|| self.compare_mono(&a.mono, &b.mono)),
            ModuleMode::Top => self
                .compare_mono(&a.mono, &b.mono)
                .then_with(|| self.compare_component(a.component, b.component)),
        }
    }
}

impl fmt::Display for TermOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} priority", self.mono.name(), self.mode.name())?;
        for c in self.priority_display() {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}

/// An element of `L`: terms sorted strictly descending under the element's
/// order, no zero coefficients. The empty list is the zero element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    ring: RingSpec,
    order: TermOrder,
    terms: Vec<(Scalar, ModuleMonomial)>,
}

impl Element {
    pub fn zero(ring: RingSpec, order: TermOrder) -> Self {
        Element { ring, order, terms: Vec::new() }
    }

    /// Canonicalize an arbitrary term list: sort descending, merge equal
    /// monomials, drop zeros.
    pub fn from_terms(
        ring: RingSpec,
        order: TermOrder,
        mut terms: Vec<(Scalar, ModuleMonomial)>,
    ) -> Self {
        for (c, m) in &terms {
            assert_eq!(c.ring(), ring, "ring mismatch");
            assert!(m.component < order.rank(), "component out of range");
        }
        terms.sort_by(|x, y| order.compare(&y.1, &x.1));
        let mut out: Vec<(Scalar, ModuleMonomial)> = Vec::with_capacity(terms.len());
        for (c, m) in terms {
            match out.last_mut() {
                Some(last) if last.1 == m => last.0 = last.0.add(&c),
                _ => out.push((c, m)),
            }
        }
        out.retain(|(c, _)| !c.is_zero());
        Element { ring, order, terms: out }
    }

    pub fn single(ring: RingSpec, order: TermOrder, c: Scalar, m: ModuleMonomial) -> Self {
        Element::from_terms(ring, order, vec![(c, m)])
    }

    /// The same element re-sorted under a different order of the same rank.
    pub fn reordered(&self, order: &TermOrder) -> Element {
        assert_eq!(order.rank(), self.order.rank(), "rank mismatch");
        Element::from_terms(self.ring, order.clone(), self.terms.clone())
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn terms(&self) -> &[(Scalar, ModuleMonomial)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading term (greatest monomial).
    pub fn lt(&self) -> Option<(&Scalar, &ModuleMonomial)> {
        self.terms.first().map(|(c, m)| (c, m))
    }

    pub fn lp(&self) -> Option<&ModuleMonomial> {
        self.terms.first().map(|(_, m)| m)
    }

    pub fn lc(&self) -> Option<&Scalar> {
        self.terms.first().map(|(c, _)| c)
    }

    /// The element minus its leading term (zero stays zero).
    pub fn tail(&self) -> Element {
        Element {
            ring: self.ring,
            order: self.order.clone(),
            terms: self.terms.iter().skip(1).cloned().collect(),
        }
    }

    fn assert_compatible(&self, rhs: &Element) {
        assert_eq!(self.ring, rhs.ring, "ring mismatch");
        assert_eq!(self.order, rhs.order, "term order mismatch");
    }

    pub fn add(&self, rhs: &Element) -> Element {
        self.assert_compatible(rhs);
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < rhs.terms.len() {
            let (a, b) = (&self.terms[i], &rhs.terms[j]);
            match self.order.compare(&a.1, &b.1) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a.0.add(&b.0);
                    if !c.is_zero() {
                        out.push((c, a.1.clone()));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&rhs.terms[j..]);
        Element { ring: self.ring, order: self.order.clone(), terms: out }
    }

    pub fn neg(&self) -> Element {
        Element {
            ring: self.ring,
            order: self.order.clone(),
            terms: self.terms.iter().map(|(c, m)| (c.neg(), m.clone())).collect(),
        }
    }

    pub fn sub(&self, rhs: &Element) -> Element {
        self.add(&rhs.neg())
    }

    pub fn scalar_mul(&self, s: &Scalar) -> Element {
        assert_eq!(s.ring(), self.ring, "ring mismatch");
        let terms = self
            .terms
            .iter()
            .map(|(c, m)| (c.mul(s), m.clone()))
            .filter(|(c, _)| !c.is_zero())
            .collect();
        Element { ring: self.ring, order: self.order.clone(), terms }
    }

    /// Multiply by a monomial `x^α`; the term order axioms guarantee sortedness
    /// is preserved, so no re-sort happens.
    pub fn mono_mul(&self, m: &Monomial) -> Element {
        let terms = self.terms.iter().map(|(c, mm)| (c.clone(), mm.mul_mono(m))).collect();
        Element { ring: self.ring, order: self.order.clone(), terms }
    }

    /// Multiply by the term `s·x^α`.
    pub fn term_mul(&self, s: &Scalar, m: &Monomial) -> Element {
        self.scalar_mul(s).mono_mul(m)
    }

    /// Coefficient at a monomial (zero when absent).
    pub fn coeff_at(&self, m: &ModuleMonomial) -> Scalar {
        self.terms
            .iter()
            .find(|(_, mm)| mm == m)
            .map(|(c, _)| c.clone())
            .unwrap_or_else(|| Scalar::zero(self.ring))
    }

    /// EquiChar: the image under the projection onto the `pi`-grading piece `i`
    /// (keep each coefficient's `pi^i`-layer).
    pub fn degree_part(&self, i: u32) -> Element {
        let terms = self
            .terms
            .iter()
            .map(|(c, m)| (c.pi_layer(i), m.clone()))
            .filter(|(c, _)| !c.is_zero())
            .collect();
        Element { ring: self.ring, order: self.order.clone(), terms }
    }

    /// Minimum coefficient valuation (`a` for the zero element): the `pi`-adic
    /// level where the element starts.
    pub fn min_valuation(&self) -> u32 {
        self.terms
            .iter()
            .map(|(c, _)| c.valuation())
            .min()
            .unwrap_or(self.ring.a())
    }

    /// EquiChar: `Some(i)` when the element is nonzero and lies in grading piece
    /// `i` (every coefficient supported on `pi^i` alone).
    pub fn is_homogeneous(&self) -> Option<u32> {
        let (c0, _) = self.terms.first()?;
        let i = c0.valuation();
        for (c, _) in &self.terms {
            if !c.is_graded_piece(i) {
                return None;
            }
        }
        Some(i)
    }

    /// `Some(d)` when the element is nonzero and all its monomials have total
    /// x-degree `d` (independent of the coefficient grading).
    pub fn is_x_homogeneous(&self) -> Option<u64> {
        let (_, m0) = self.terms.first()?;
        let d = m0.degree();
        for (_, m) in &self.terms {
            if m.degree() != d {
                return None;
            }
        }
        Some(d)
    }

    pub fn max_x_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(_, m)| m.degree()).max()
    }

    /// Canonical text form using the given variable names; `rank` decides
    /// whether component markers are printed (mandatory for rank > 1).
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let rank = self.order.rank();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, m)| render_term(c, m, names, rank))
            .collect();
        parts.join(" + ")
    }
}

fn scalar_piece(c: &Scalar) -> String {
    let s = c.to_string();
    // Multi-term EquiChar scalars need grouping inside a product.
    if s.contains('+') {
        format!("({s})")
    } else {
        s
    }
}

fn render_term(c: &Scalar, m: &ModuleMonomial, names: &[String], rank: usize) -> String {
    let mut pieces: Vec<String> = Vec::new();
    if *c != Scalar::one(c.ring()) {
        pieces.push(scalar_piece(c));
    }
    for (i, &e) in m.mono.exps().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if e == 1 {
            pieces.push(names[i].clone());
        } else {
            pieces.push(format!("{}^{}", names[i], e));
        }
    }
    if rank > 1 {
        pieces.push(format!("e{}", m.component + 1));
    }
    if pieces.is_empty() {
        "1".to_string()
    } else {
        pieces.join("*")
    }
}

/// Default variable names `x1..xn` for contexts without a parsed instance.
pub fn default_var_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.terms.first().map(|(_, m)| m.mono.nvars()).unwrap_or(0);
        write!(f, "{}", self.render(&default_var_names(n)))
    }
}
