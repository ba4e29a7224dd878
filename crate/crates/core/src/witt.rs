//! Derivations of the polynomial ring in `n` variables.
//!
//! Basis elements are `x^m d_i` — the monomial `x_1^{m_1} .. x_n^{m_n}`
//! times the partial derivative in direction `i` (directions are 1-based).
//! The bracket of two basis elements is
//! `[x^a d_i, x^b d_j] = b_i x^{a+b-e_i} d_j - a_j x^{a+b-e_j} d_i`,
//! implemented directly but trusted only because it agrees with composing
//! the two derivations on polynomials (see [`WittElement::apply_to_monomial`]
//! and the tests).
//!
//! [`prop62_identity`] packages the two commutator shapes that recover a
//! basis element `x^m d_i` as a bracket of elements with "smaller" monomial
//! data, reporting whether the bracket really is a nonzero scalar multiple.
//!
//! [`lower_central_series`] computes `n_0 ⊇ n_1 ⊇ ...` with
//! `n_t = [n_{t-1}, n_0]` for algebras presented by graded generators whose
//! pairwise brackets are scalar multiples of single generators, truncated at
//! a fixed index bound.

use crate::scalar::Scalar;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// Errors from the derivation-algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WittError {
    #[error("elements live over different variable counts: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("direction {i} out of range for {n} variables")]
    DirectionOutOfRange { i: usize, n: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
}

/// A single derivation `x^m d_i`; `m` is dense of length `n`, `i` is 1-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct WittBasisElt {
    i: usize,
    m: Vec<u32>,
}

impl WittBasisElt {
    pub fn new(i: usize, m: Vec<u32>) -> Result<Self, WittError> {
        if i == 0 || i > m.len() {
            return Err(WittError::DirectionOutOfRange { i, n: m.len() });
        }
        Ok(WittBasisElt { i, m })
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn m(&self) -> &[u32] {
        &self.m
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.m.len()
    }
}

impl fmt::Display for WittBasisElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (pos, &e) in self.m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            write!(f, "x[{}]", pos + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
            write!(f, "*")?;
        }
        write!(f, "d[{}]", self.i)
    }
}

/// A finite rational combination of derivations over a fixed variable count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WittElement {
    n: usize,
    terms: BTreeMap<(Vec<u32>, usize), Scalar>,
}

impl WittElement {
    pub fn zero(n: usize) -> Self {
        WittElement { n, terms: BTreeMap::new() }
    }

    pub fn from_basis(elt: &WittBasisElt) -> Self {
        let mut out = WittElement::zero(elt.n());
        out.push(elt.m().to_vec(), elt.i(), Scalar::one());
        out
    }

    pub fn term(elt: &WittBasisElt, coeff: &Scalar) -> Self {
        let mut out = WittElement::zero(elt.n());
        out.push(elt.m().to_vec(), elt.i(), coeff.clone());
        out
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (WittBasisElt, &Scalar)> + '_ {
        self.terms
            .iter()
            .map(|((m, i), c)| (WittBasisElt { i: *i, m: m.clone() }, c))
    }

    pub fn coeff(&self, elt: &WittBasisElt) -> Scalar {
        self.terms
            .get(&(elt.m().to_vec(), elt.i()))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    fn push(&mut self, m: Vec<u32>, i: usize, coeff: Scalar) {
        debug_assert_eq!(m.len(), self.n);
        if coeff.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry((m, i))
            .or_insert_with(Scalar::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn add_term(&mut self, elt: &WittBasisElt, coeff: &Scalar) {
        assert_eq!(elt.n(), self.n, "variable counts must match");
        self.push(elt.m().to_vec(), elt.i(), coeff.clone());
    }

    pub fn add_scaled(&mut self, other: &WittElement, coeff: &Scalar) {
        assert_eq!(other.n, self.n, "variable counts must match");
        for ((m, i), c) in &other.terms {
            self.push(m.clone(), *i, c * coeff);
        }
    }

    pub fn scaled(&self, coeff: &Scalar) -> WittElement {
        let mut out = WittElement::zero(self.n);
        out.add_scaled(self, coeff);
        out
    }

    /// Bilinear extension of the basis bracket.
    pub fn bracket(&self, other: &WittElement) -> Result<WittElement, WittError> {
        if self.n != other.n {
            return Err(WittError::DimensionMismatch { left: self.n, right: other.n });
        }
        let mut out = WittElement::zero(self.n);
        for ((ma, ia), ca) in &self.terms {
            for ((mb, ib), cb) in &other.terms {
                let a = WittBasisElt { i: *ia, m: ma.clone() };
                let b = WittBasisElt { i: *ib, m: mb.clone() };
                out.add_scaled(&witt_bracket(&a, &b), &(ca * cb));
            }
        }
        Ok(out)
    }

    /// Ground-truth action as a derivation: the image of the monomial `x^expo`
    /// as a sparse polynomial (exponent vector to coefficient).
    pub fn apply_to_monomial(&self, expo: &[u32]) -> BTreeMap<Vec<u32>, Scalar> {
        assert_eq!(expo.len(), self.n, "variable counts must match");
        let mut out: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
        for ((m, i), c) in &self.terms {
            let e = expo[i - 1];
            if e == 0 {
                continue;
            }
            let mut target: Vec<u32> = m.iter().zip(expo).map(|(a, b)| a + b).collect();
            target[i - 1] -= 1;
            let entry = out.entry(target).or_insert_with(Scalar::zero);
            *entry += c * &Scalar::from_int(e as i64);
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

impl fmt::Display for WittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (elt, coeff) in self.terms() {
            let (sign, abs) = if coeff.is_negative() {
                ("-", -coeff)
            } else {
                ("+", coeff.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            if !abs.is_one() {
                write!(f, "{abs} * ")?;
            }
            write!(f, "{elt}")?;
        }
        Ok(())
    }
}

impl std::ops::Add for &WittElement {
    type Output = WittElement;
    fn add(self, rhs: &WittElement) -> WittElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

impl std::ops::Sub for &WittElement {
    type Output = WittElement;
    fn sub(self, rhs: &WittElement) -> WittElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Scalar::one());
        out
    }
}

impl std::ops::Neg for &WittElement {
    type Output = WittElement;
    fn neg(self) -> WittElement {
        self.scaled(&-Scalar::one())
    }
}

#[derive(Serialize, Deserialize)]
struct WittTermRaw {
    i: usize,
    m: Vec<u32>,
    coeff: Scalar,
}

#[derive(Serialize, Deserialize)]
struct WittElementRaw {
    terms: Vec<WittTermRaw>,
}

impl Serialize for WittElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let raw = WittElementRaw {
            terms: self
                .terms
                .iter()
                .map(|((m, i), c)| WittTermRaw { i: *i, m: m.clone(), coeff: c.clone() })
                .collect(),
        };
        raw.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for WittElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = WittElementRaw::deserialize(deserializer)?;
        let n = raw.terms.first().map_or(0, |t| t.m.len());
        let mut out = WittElement::zero(n);
        for t in raw.terms {
            if t.m.len() != n {
                return Err(D::Error::custom(format!(
                    "term over {} variables in an element over {n}",
                    t.m.len()
                )));
            }
            let elt = WittBasisElt::new(t.i, t.m).map_err(D::Error::custom)?;
            out.add_term(&elt, &t.coeff);
        }
        Ok(out)
    }
}

/// `[x^a d_i, x^b d_j] = b_i x^{a+b-e_i} d_j - a_j x^{a+b-e_j} d_i`.
///
/// A term only forms when its leading coefficient (`b_i` resp. `a_j`) is
/// nonzero, so the subtracted exponent is always available.
pub fn witt_bracket(a: &WittBasisElt, b: &WittBasisElt) -> WittElement {
    assert_eq!(a.n(), b.n(), "variable counts must match");
    let mut out = WittElement::zero(a.n());
    let bi = b.m()[a.i() - 1];
    if bi > 0 {
        let mut m: Vec<u32> = a.m().iter().zip(b.m()).map(|(x, y)| x + y).collect();
        m[a.i() - 1] -= 1;
        out.push(m, b.i(), Scalar::from_int(bi as i64));
    }
    let aj = a.m()[b.i() - 1];
    if aj > 0 {
        let mut m: Vec<u32> = a.m().iter().zip(b.m()).map(|(x, y)| x + y).collect();
        m[b.i() - 1] -= 1;
        out.push(m, a.i(), Scalar::from_int(-(aj as i64)));
    }
    out
}

/// Result of one of the two commutator shapes: the computed bracket and
/// whether it is a nonzero scalar multiple of the expected basis element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Prop62Outcome {
    pub result: WittElement,
    pub is_scalar_multiple: bool,
}

/// The two commutator shapes recovering `x^m d_i` with `m = m' + m''`.
///
/// Requires `m'` supported only at position `j` with a positive entry there.
/// For `i == j` the bracket is `[x^{m'+e_i} d_i, x^{m''} d_i]`; otherwise it
/// is `[x^{m'} d_j, x^{m''+e_j} d_i]`. The flag is true exactly when the
/// bracket is a nonzero multiple of `x^{m'+m''} d_i`.
pub fn prop62_identity(
    i: usize,
    j: usize,
    m_prime: &[u32],
    m_dprime: &[u32],
) -> Result<Prop62Outcome, WittError> {
    let n = m_prime.len();
    if m_dprime.len() != n {
        return Err(WittError::DimensionMismatch { left: n, right: m_dprime.len() });
    }
    for dir in [i, j] {
        if dir == 0 || dir > n {
            return Err(WittError::DirectionOutOfRange { i: dir, n });
        }
    }
    if m_prime[j - 1] == 0 {
        return Err(WittError::HypothesisViolated(format!(
            "the left monomial must have a positive entry at position {j}"
        )));
    }
    if m_prime.iter().enumerate().any(|(pos, &e)| pos + 1 != j && e > 0) {
        return Err(WittError::HypothesisViolated(format!(
            "the left monomial must be supported only at position {j}"
        )));
    }

    let (left, right) = if i == j {
        let mut bumped = m_prime.to_vec();
        bumped[i - 1] += 1;
        (
            WittBasisElt::new(i, bumped)?,
            WittBasisElt::new(i, m_dprime.to_vec())?,
        )
    } else {
        let mut bumped = m_dprime.to_vec();
        bumped[j - 1] += 1;
        (
            WittBasisElt::new(j, m_prime.to_vec())?,
            WittBasisElt::new(i, bumped)?,
        )
    };
    let result = witt_bracket(&left, &right);
    let target: Vec<u32> = m_prime.iter().zip(m_dprime).map(|(a, b)| a + b).collect();
    let is_scalar_multiple = result.num_terms() == 1
        && result
            .terms
            .keys()
            .next()
            .is_some_and(|(m, dir)| *m == target && *dir == i);
    Ok(Prop62Outcome { result, is_scalar_multiple })
}

/// Bracket table of a graded generator family: `(a, b)` maps to the scalar
/// and target index of `[g_a, g_b]`, or `None` when the bracket vanishes.
pub type GeneratorBracket = Arc<dyn Fn(u32, u32) -> Option<(Scalar, u32)> + Send + Sync>;

/// A graded Lie algebra presented by one generator per positive index, with
/// pairwise brackets that are scalar multiples of single generators.
#[derive(Clone)]
pub struct GradedGeneratorFamily {
    bracket: GeneratorBracket,
}

impl GradedGeneratorFamily {
    pub fn new(bracket: GeneratorBracket) -> Self {
        GradedGeneratorFamily { bracket }
    }

    /// The family on `l_i, i >= 1` with `[l_a, l_b] = (b - a) l_{a+b}`.
    pub fn virasoro_positive_part() -> Self {
        GradedGeneratorFamily {
            bracket: Arc::new(|a, b| {
                if a == b {
                    None
                } else {
                    Some((Scalar::from_int(b as i64 - a as i64), a + b))
                }
            }),
        }
    }

    pub fn bracket(&self, a: u32, b: u32) -> Option<(Scalar, u32)> {
        (self.bracket)(a, b)
    }
}

/// One layer of the descending series: the generator indices spanning it and
/// its codimension inside the zeroth layer.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeriesLayer {
    pub indices: BTreeSet<u32>,
    pub codim: usize,
}

/// The series `n_0 ⊇ n_1 ⊇ ..` with `n_t = [n_{t-1}, n_0]`, truncated to
/// generator indices `1..=index_bound`; returns `depth + 1` layers.
///
/// Because generator brackets land on single generators, every layer is
/// spanned by a set of generator indices; brackets whose target exceeds the
/// bound are dropped, so each layer is the truncation of the true one.
pub fn lower_central_series(
    family: &GradedGeneratorFamily,
    depth: usize,
    index_bound: u32,
) -> Vec<SeriesLayer> {
    let full: BTreeSet<u32> = (1..=index_bound).collect();
    let mut layers = vec![SeriesLayer { indices: full.clone(), codim: 0 }];
    let mut prev = full.clone();
    for _ in 0..depth {
        let mut next = BTreeSet::new();
        for &a in &prev {
            for &b in &full {
                if let Some((c, target)) = family.bracket(a, b) {
                    if !c.is_zero() && target <= index_bound {
                        next.insert(target);
                    }
                }
            }
        }
        layers.push(SeriesLayer { indices: next.clone(), codim: full.len() - next.len() });
        prev = next;
    }
    layers
}
