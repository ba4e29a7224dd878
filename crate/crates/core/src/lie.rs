//! The Virasoro algebra and its universal enveloping algebra in exact
//! arithmetic.
//!
//! Basis generators are a central element `c` and a family `l_i` indexed over
//! the integers, with
//!
//! ```text
//! [l_i, l_j] = (j - i) l_{i+j} + delta_{i,-j} (i^3 - i)/12 c,    [l_i, c] = 0.
//! ```
//!
//! Elements of the enveloping algebra are kept in a canonical normal form:
//! powers of `c` are factored to the front and the `l` factors appear with
//! strictly increasing indices from left to right. Multiplication reorders
//! arbitrary products into that form by repeated adjacent swaps
//! `l_a l_b -> l_b l_a + [l_a, l_b]` (for `a > b`), which terminates because
//! each swap either lowers the inversion count or shortens the word.
//!
//! The module also provides the bookkeeping for monomials in the negative
//! generators (`MultiIndex`) and the two total orders used by the descent
//! arguments: plain reverse-lexicographic comparison and the weight-then-
//! degree-then-revlex "principal" order.

use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// A basis generator of the Lie algebra: the central element or one `l_i`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum GenIndex {
    C,
    L(i64),
}

/// The Lie bracket of two basis generators, as an element of the enveloping
/// algebra (at most one `l` term plus one central term).
pub fn bracket(a: GenIndex, b: GenIndex) -> UElement {
    match (a, b) {
        (GenIndex::C, _) | (_, GenIndex::C) => UElement::zero(),
        (GenIndex::L(i), GenIndex::L(j)) => {
            let mut out = UElement::zero();
            let coeff = Scalar::from_int(j - i);
            if !coeff.is_zero() {
                out.add_term(PBWMonomial::l_power(i + j, 1), coeff);
            }
            if i == -j {
                let central = Scalar::ratio(i * i * i - i, 12);
                if !central.is_zero() {
                    out.add_term(PBWMonomial::c_power(1), central);
                }
            }
            out
        }
    }
}

/// A normal-form monomial `c^cpow * l_{i_1}^{e_1} ... l_{i_m}^{e_m}` with
/// `i_1 < i_2 < ... < i_m` and all exponents positive.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PBWMonomial {
    cpow: u32,
    factors: Vec<(i64, u32)>,
}

impl PBWMonomial {
    pub fn identity() -> Self {
        PBWMonomial { cpow: 0, factors: Vec::new() }
    }

    pub fn c_power(p: u32) -> Self {
        PBWMonomial { cpow: p, factors: Vec::new() }
    }

    pub fn l_power(i: i64, e: u32) -> Self {
        assert!(e > 0, "exponent must be positive");
        PBWMonomial { cpow: 0, factors: vec![(i, e)] }
    }

    /// Build from explicit parts, enforcing the normal-form invariants.
    pub fn new(cpow: u32, factors: Vec<(i64, u32)>) -> Result<Self, String> {
        for w in factors.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(format!(
                    "factors must have strictly increasing indices: l[{}] then l[{}]",
                    w[0].0, w[1].0
                ));
            }
        }
        if let Some(&(i, 0)) = factors.iter().find(|&&(_, e)| e == 0) {
            return Err(format!("factor l[{i}] has zero exponent"));
        }
        Ok(PBWMonomial { cpow, factors })
    }

    /// Group a sorted generator word into (index, exponent) runs.
    fn from_sorted_word(cpow: u32, word: &[i64]) -> Self {
        debug_assert!(word.windows(2).all(|w| w[0] <= w[1]));
        let mut factors: Vec<(i64, u32)> = Vec::new();
        for &g in word {
            match factors.last_mut() {
                Some((i, e)) if *i == g => *e += 1,
                _ => factors.push((g, 1)),
            }
        }
        PBWMonomial { cpow, factors }
    }

    pub fn cpow(&self) -> u32 {
        self.cpow
    }

    pub fn factors(&self) -> &[(i64, u32)] {
        &self.factors
    }

    /// The `l` part expanded to a flat word of indices, ascending.
    pub fn word(&self) -> Vec<i64> {
        let mut w = Vec::new();
        for &(i, e) in &self.factors {
            for _ in 0..e {
                w.push(i);
            }
        }
        w
    }

    fn with_cpow_shift(&self, extra: u32) -> Self {
        PBWMonomial { cpow: self.cpow + extra, factors: self.factors.clone() }
    }
}

impl fmt::Display for PBWMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.cpow == 1 {
            parts.push("c".to_string());
        } else if self.cpow > 1 {
            parts.push(format!("c^{}", self.cpow));
        }
        for &(i, e) in &self.factors {
            if e == 1 {
                parts.push(format!("l[{i}]"));
            } else {
                parts.push(format!("l[{i}]^{e}"));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" * "))
        }
    }
}

/// An element of the universal enveloping algebra in PBW normal form: a
/// finite rational combination of [`PBWMonomial`]s. The zero element has no
/// terms; coefficients are never stored as zero.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "UElementRaw", into = "UElementRaw")]
pub struct UElement {
    terms: BTreeMap<PBWMonomial, Scalar>,
}

/// Serialization shape: `{"terms":[{"cpow":0,"factors":[[-2,2],[1,1]],"coeff":"3/2"}]}`.
#[derive(Serialize, Deserialize)]
struct UElementRaw {
    terms: Vec<UTermRaw>,
}

#[derive(Serialize, Deserialize)]
struct UTermRaw {
    cpow: u32,
    factors: Vec<(i64, u32)>,
    coeff: Scalar,
}

impl From<UElement> for UElementRaw {
    fn from(u: UElement) -> Self {
        UElementRaw {
            terms: u
                .terms
                .into_iter()
                .map(|(m, coeff)| UTermRaw { cpow: m.cpow, factors: m.factors, coeff })
                .collect(),
        }
    }
}

impl TryFrom<UElementRaw> for UElement {
    type Error = String;
    fn try_from(raw: UElementRaw) -> Result<Self, String> {
        let mut out = UElement::zero();
        for t in raw.terms {
            let mono = PBWMonomial::new(t.cpow, t.factors)?;
            out.add_term(mono, t.coeff);
        }
        Ok(out)
    }
}

impl UElement {
    pub fn zero() -> Self {
        UElement { terms: BTreeMap::new() }
    }

    pub fn constant(s: Scalar) -> Self {
        let mut u = UElement::zero();
        u.add_term(PBWMonomial::identity(), s);
        u
    }

    pub fn one() -> Self {
        UElement::constant(Scalar::one())
    }

    pub fn gen(g: GenIndex) -> Self {
        let mono = match g {
            GenIndex::C => PBWMonomial::c_power(1),
            GenIndex::L(i) => PBWMonomial::l_power(i, 1),
        };
        UElement::monomial(mono)
    }

    pub fn monomial(m: PBWMonomial) -> Self {
        let mut u = UElement::zero();
        u.add_term(m, Scalar::one());
        u
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PBWMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &PBWMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: PBWMonomial, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &UElement, factor: &Scalar) {
        for (m, coeff) in &other.terms {
            self.add_term(m.clone(), factor * coeff);
        }
    }

    pub fn scaled(&self, factor: &Scalar) -> UElement {
        let mut out = UElement::zero();
        out.add_scaled(self, factor);
        out
    }

    /// Product in the enveloping algebra, straightened into PBW normal form.
    pub fn multiply(&self, rhs: &UElement) -> UElement {
        let mut out = UElement::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let base = PBWMonomial {
                    cpow: ma.cpow + mb.cpow,
                    factors: ma.factors.clone(),
                };
                let mut acc = UElement::monomial(base);
                for g in mb.word() {
                    acc = acc.mul_l_gen(g);
                }
                out.add_scaled(&acc, &(ca * cb));
            }
        }
        out
    }

    /// Right-multiply by a single generator `l_g`.
    fn mul_l_gen(&self, g: i64) -> UElement {
        let mut out = UElement::zero();
        for (m, coeff) in &self.terms {
            let straightened = straighten_append(&m.word(), g);
            for (sm, sc) in &straightened.terms {
                out.add_term(sm.with_cpow_shift(m.cpow), sc * coeff);
            }
        }
        out
    }
}

/// Normal form of `l^word * l_g`, where `word` is already sorted ascending.
///
/// If `g` fits at the right end we are done. Otherwise the last factor `l_a`
/// (with `a > g`) swaps past it:
/// `l^head l_a l_g = (l^head l_g) l_a + (g - a) l^head l_{a+g} [+ central]`,
/// and each piece recurses on strictly smaller words or fewer inversions.
fn straighten_append(word: &[i64], g: i64) -> UElement {
    match word.split_last() {
        None => UElement::monomial(PBWMonomial::l_power(g, 1)),
        Some((&a, _)) if a <= g => {
            let mut w = word.to_vec();
            w.push(g);
            UElement::monomial(PBWMonomial::from_sorted_word(0, &w))
        }
        Some((&a, head)) => {
            let mut out = straighten_append(head, g).mul_l_gen(a);
            out.add_scaled(&straighten_append(head, a + g), &Scalar::from_int(g - a));
            if a == -g {
                let central = Scalar::ratio(a * a * a - a, 12);
                if !central.is_zero() {
                    out.add_term(PBWMonomial::from_sorted_word(1, head), central);
                }
            }
            out
        }
    }
}

impl std::ops::Add for &UElement {
    type Output = UElement;
    fn add(self, rhs: &UElement) -> UElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

impl std::ops::Sub for &UElement {
    type Output = UElement;
    fn sub(self, rhs: &UElement) -> UElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::from_int(-1));
        out
    }
}

impl std::ops::Neg for &UElement {
    type Output = UElement;
    fn neg(self) -> UElement {
        self.scaled(&Scalar::from_int(-1))
    }
}

impl fmt::Display for UElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, (m, coeff)) in self.terms.iter().enumerate() {
            let is_identity = m.cpow == 0 && m.factors.is_empty();
            let magnitude = coeff.abs();
            if pos == 0 {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if is_identity {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{magnitude} * {m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `ad(l_i)^s (l_j)` computed honestly by `s` nested commutators in the
/// enveloping algebra (no closed form is consulted).
pub fn iterated_ad(i: i64, j: i64, s: u32) -> UElement {
    let x = UElement::gen(GenIndex::L(i));
    let mut acc = UElement::gen(GenIndex::L(j));
    for _ in 0..s {
        acc = &x.multiply(&acc) - &acc.multiply(&x);
    }
    acc
}

/// A monomial in the negative generators: the finitely supported exponent
/// family `i = (..., i_2, i_1)` of `l^i = ... l_{-3}^{i_3} l_{-2}^{i_2} l_{-1}^{i_1}`.
/// Positions are >= 1; stored entries always have positive exponent.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct MultiIndex(BTreeMap<u32, u32>);

impl MultiIndex {
    pub fn zero() -> Self {
        MultiIndex(BTreeMap::new())
    }

    /// The unit vector at position `i` (the exponent family of `l_{-i}`).
    pub fn eps(i: u32) -> Self {
        assert!(i >= 1, "positions start at 1");
        let mut m = BTreeMap::new();
        m.insert(i, 1);
        MultiIndex(m)
    }

    pub fn from_pairs(pairs: &[(u32, u32)]) -> Self {
        let mut m = BTreeMap::new();
        for &(pos, exp) in pairs {
            assert!(pos >= 1, "positions start at 1");
            if exp > 0 {
                *m.entry(pos).or_insert(0) += exp;
            }
        }
        MultiIndex(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, pos: u32) -> u32 {
        self.0.get(&pos).copied().unwrap_or(0)
    }

    /// Total number of generator factors.
    pub fn degree(&self) -> u64 {
        self.0.values().map(|&e| e as u64).sum()
    }

    /// Position-weighted size: `sum_s s * i_s`.
    pub fn weight(&self) -> u64 {
        self.0.iter().map(|(&s, &e)| s as u64 * e as u64).sum()
    }

    pub fn min_support(&self) -> Option<u32> {
        self.0.keys().next().copied()
    }

    pub fn add_eps(&self, pos: u32) -> Self {
        let mut m = self.0.clone();
        *m.entry(pos).or_insert(0) += 1;
        MultiIndex(m)
    }

    pub fn sub_eps(&self, pos: u32) -> Option<Self> {
        let mut m = self.0.clone();
        match m.get_mut(&pos) {
            None => None,
            Some(e) => {
                *e -= 1;
                if *e == 0 {
                    m.remove(&pos);
                }
                Some(MultiIndex(m))
            }
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0.iter().map(|(&p, &e)| (p, e))
    }

    /// The corresponding PBW monomial `... l_{-2}^{i_2} l_{-1}^{i_1}`
    /// (negative indices, ascending).
    pub fn to_pbw(&self) -> PBWMonomial {
        let factors: Vec<(i64, u32)> =
            self.0.iter().rev().map(|(&pos, &exp)| (-(pos as i64), exp)).collect();
        PBWMonomial::new(0, factors).expect("positions are distinct, so indices ascend strictly")
    }

    /// Read a multi-index back off a PBW monomial whose factors are all
    /// negative generators with no central power.
    pub fn from_pbw(m: &PBWMonomial) -> Option<Self> {
        if m.cpow() != 0 {
            return None;
        }
        let mut out = BTreeMap::new();
        for &(i, e) in m.factors() {
            if i >= 0 {
                return None;
            }
            out.insert((-i) as u32, e);
        }
        Some(MultiIndex(out))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "1");
        }
        write!(f, "{}", self.to_pbw())
    }
}

/// Reverse-lexicographic comparison of exponent families.
///
/// The zero family is minimal. For distinct nonzero families, the one whose
/// minimal support position is *larger* is *smaller*; on equal minimal
/// position the comparison recurses with one unit stripped from that
/// position. Equivalently: expand each family to its ascending position word
/// (with multiplicity) and compare entry-wise with the entry order reversed,
/// shorter prefixes first.
pub fn cmp_revlex(a: &MultiIndex, b: &MultiIndex) -> Ordering {
    let mut wa = a.0.iter().flat_map(|(&p, &e)| std::iter::repeat_n(p, e as usize));
    let mut wb = b.0.iter().flat_map(|(&p, &e)| std::iter::repeat_n(p, e as usize));
    loop {
        match (wa.next(), wb.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(pa), Some(pb)) => match pa.cmp(&pb) {
                Ordering::Equal => continue,
                // larger minimal position means smaller element
                other => return other.reverse(),
            },
        }
    }
}

/// The principal order: weight first, then degree, then reverse-lex.
pub fn cmp_principal(a: &MultiIndex, b: &MultiIndex) -> Ordering {
    a.weight()
        .cmp(&b.weight())
        .then_with(|| a.degree().cmp(&b.degree()))
        .then_with(|| cmp_revlex(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(i: i64) -> UElement {
        UElement::gen(GenIndex::L(i))
    }

    #[test]
    fn bracket_at_opposite_indices_has_central_part() {
        // [l_2, l_-2] = -4 l_0 + (1/2) c
        let b = bracket(GenIndex::L(2), GenIndex::L(-2));
        let mut expected = UElement::zero();
        expected.add_term(PBWMonomial::l_power(0, 1), Scalar::from_int(-4));
        expected.add_term(PBWMonomial::c_power(1), Scalar::ratio(1, 2));
        assert_eq!(b, expected);
        // [l_1, l_-1] = -2 l_0 with no central part ((1-1)/12 = 0)
        let b = bracket(GenIndex::L(1), GenIndex::L(-1));
        let mut expected = UElement::zero();
        expected.add_term(PBWMonomial::l_power(0, 1), Scalar::from_int(-2));
        assert_eq!(b, expected);
    }

    #[test]
    fn bracket_with_central_element_vanishes() {
        assert!(bracket(GenIndex::C, GenIndex::L(5)).is_zero());
        assert!(bracket(GenIndex::L(-3), GenIndex::C).is_zero());
        assert!(bracket(GenIndex::C, GenIndex::C).is_zero());
    }

    #[test]
    fn bracket_antisymmetry_small_window() {
        for i in -10..=10 {
            for j in -10..=10 {
                let lhs = bracket(GenIndex::L(i), GenIndex::L(j));
                let rhs = -&bracket(GenIndex::L(j), GenIndex::L(i));
                assert_eq!(lhs, rhs, "[l_{i}, l_{j}] != -[l_{j}, l_{i}]");
            }
        }
    }

    #[test]
    fn multiply_straightens_an_inverted_pair() {
        // l_2 * l_-2 = l_-2 l_2 - 4 l_0 + (1/2) c
        let p = l(2).multiply(&l(-2));
        let mut expected = UElement::zero();
        expected.add_term(
            PBWMonomial::new(0, vec![(-2, 1), (2, 1)]).unwrap(),
            Scalar::one(),
        );
        expected.add_term(PBWMonomial::l_power(0, 1), Scalar::from_int(-4));
        expected.add_term(PBWMonomial::c_power(1), Scalar::ratio(1, 2));
        assert_eq!(p, expected);
    }

    #[test]
    fn multiply_merges_equal_indices() {
        let p = l(3).multiply(&l(3));
        assert_eq!(p, UElement::monomial(PBWMonomial::l_power(3, 2)));
    }

    #[test]
    fn multiply_keeps_sorted_products_untouched() {
        let p = l(-5).multiply(&l(7));
        assert_eq!(
            p,
            UElement::monomial(PBWMonomial::new(0, vec![(-5, 1), (7, 1)]).unwrap())
        );
    }

    #[test]
    fn normal_form_words_are_strictly_increasing() {
        // A longer scrambled product; every output monomial must satisfy the
        // normal-form invariant.
        let prod = l(4).multiply(&l(-1)).multiply(&l(2)).multiply(&l(-3));
        assert!(!prod.is_zero());
        for (m, _) in prod.terms() {
            for w in m.factors().windows(2) {
                assert!(w[0].0 < w[1].0, "factors out of order in {m}");
            }
            assert!(m.factors().iter().all(|&(_, e)| e > 0));
        }
    }

    #[test]
    fn central_element_commutes_with_everything() {
        let c = UElement::gen(GenIndex::C);
        for x in [
            l(3).multiply(&l(-3)),
            l(-2).multiply(&l(-2)).multiply(&l(5)),
            UElement::constant(Scalar::ratio(7, 3)),
        ] {
            assert_eq!(c.multiply(&x), x.multiply(&c));
        }
    }

    #[test]
    fn multiply_is_associative_on_a_hard_triple() {
        let a = &l(2) + &l(-2);
        let b = &l(1).multiply(&l(-1)) - &UElement::gen(GenIndex::C);
        let c = &l(-3) + &UElement::one();
        assert_eq!(a.multiply(&b).multiply(&c), a.multiply(&b.multiply(&c)));
    }

    #[test]
    fn iterated_ad_small_cases() {
        // ad(l_2)(l_3) = [l_2, l_3] = l_5
        assert_eq!(iterated_ad(2, 3, 1), l(5));
        // ad(l_2)^2(l_3) = [l_2, l_5] = 3 l_7
        assert_eq!(iterated_ad(2, 3, 2), l(7).scaled(&Scalar::from_int(3)));
        // s = 0 leaves l_j untouched
        assert_eq!(iterated_ad(4, -9, 0), l(-9));
    }

    #[test]
    fn iterated_ad_matches_product_formula_sample() {
        // prod_{t=0}^{s-1} (j + t i - i) * l_{j + s i} away from central cases
        let (i, j, s) = (3, 4, 3);
        let mut scalar = Scalar::one();
        for t in 0..s {
            scalar *= Scalar::from_int(j + t * i - i);
        }
        assert_eq!(
            iterated_ad(i, j, s as u32),
            l(j + s * i).scaled(&scalar)
        );
    }

    #[test]
    fn revlex_examples() {
        let e1 = MultiIndex::eps(1);
        let e2 = MultiIndex::eps(2);
        let e3 = MultiIndex::eps(3);
        // larger minimal position sorts lower
        assert_eq!(cmp_revlex(&e3, &e1), Ordering::Less);
        assert_eq!(cmp_revlex(&e1, &e2), Ordering::Greater);
        // zero is the global minimum
        assert_eq!(cmp_revlex(&MultiIndex::zero(), &e3), Ordering::Less);
        // equal minimal position recurses: 2*eps_1 > eps_1
        let two_e1 = MultiIndex::from_pairs(&[(1, 2)]);
        assert_eq!(cmp_revlex(&two_e1, &e1), Ordering::Greater);
        assert_eq!(cmp_revlex(&e1, &e1), Ordering::Equal);
    }

    #[test]
    fn principal_order_examples() {
        let e1 = MultiIndex::eps(1);
        let e2 = MultiIndex::eps(2);
        let two_e1 = MultiIndex::from_pairs(&[(1, 2)]);
        // weight decides first
        assert_eq!(cmp_principal(&e1, &e2), Ordering::Less);
        // same weight: degree decides
        assert_eq!(cmp_principal(&e2, &two_e1), Ordering::Less);
        // same weight and degree: revlex decides
        let a = MultiIndex::from_pairs(&[(1, 1), (3, 1)]); // w=4, d=2
        let b = MultiIndex::from_pairs(&[(2, 2)]); // w=4, d=2
        assert_eq!(cmp_principal(&a, &b), cmp_revlex(&a, &b));
        assert_eq!(cmp_revlex(&a, &b), Ordering::Greater);
    }

    #[test]
    fn multiindex_pbw_roundtrip() {
        let m = MultiIndex::from_pairs(&[(1, 2), (3, 1)]);
        let pbw = m.to_pbw();
        assert_eq!(pbw.factors(), &[(-3, 1), (-1, 2)]);
        assert_eq!(MultiIndex::from_pbw(&pbw), Some(m));
        assert_eq!(MultiIndex::from_pbw(&PBWMonomial::l_power(2, 1)), None);
    }

    #[test]
    fn weight_and_degree() {
        let m = MultiIndex::from_pairs(&[(1, 2), (3, 1)]);
        assert_eq!(m.degree(), 3);
        assert_eq!(m.weight(), 5);
        assert_eq!(MultiIndex::zero().weight(), 0);
    }

    #[test]
    fn display_matches_expression_grammar() {
        let p = l(2).multiply(&l(-2));
        assert_eq!(p.to_string(), "l[-2] * l[2] - 4 * l[0] + 1/2 * c");
        assert_eq!(UElement::zero().to_string(), "0");
        assert_eq!(UElement::constant(Scalar::ratio(-5, 3)).to_string(), "-5/3");
    }

    #[test]
    fn serde_roundtrip_and_shape() {
        let mut u = UElement::zero();
        u.add_term(
            PBWMonomial::new(0, vec![(-2, 2), (1, 1)]).unwrap(),
            Scalar::ratio(3, 2),
        );
        let json = serde_json::to_string(&u).unwrap();
        assert_eq!(
            json,
            "{\"terms\":[{\"cpow\":0,\"factors\":[[-2,2],[1,1]],\"coeff\":\"3/2\"}]}"
        );
        let back: UElement = serde_json::from_str(&json).unwrap();
        assert_eq!(back, u);
        // out-of-order factors are rejected, not silently reordered
        let bad = "{\"terms\":[{\"cpow\":0,\"factors\":[[1,1],[-2,2]],\"coeff\":\"1\"}]}";
        assert!(serde_json::from_str::<UElement>(bad).is_err());
    }
}
