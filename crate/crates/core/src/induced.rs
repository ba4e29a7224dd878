//! Induced modules over the full algebra with the central charge specialized.
//!
//! An [`InducedElement`] is a finite sum of tensors `l^i (x) m`: a product of
//! negative generators encoded by a `MultiIndex` on the left, and a quotient
//! basis monomial `m` from a [`QuotientSpec`] module on the right, with the
//! central generator acting as a fixed rational `theta`.
//!
//! The action of any `l_j` is computed by multiplying `l_j` against the
//! negative product in the enveloping algebra, then splitting each normal
//! form word: the negative prefix stays as the new `MultiIndex`, central
//! powers become powers of `theta`, and the nonnegative suffix acts on the
//! right-hand factor through the quotient module.
//!
//! On top of the action sit the leading-term tools: [`theorem1_step`] applies
//! `l_{k+p}` (with `p` the minimal supported position of the leading
//! multi-index) and checks the exact claims about the image, [`descend`]
//! iterates that to the zero-weight layer, and the truncated-closure
//! functions compute operator-stable subspaces on finite slices with exact
//! linear algebra.

use crate::lie::{cmp_principal, GenIndex, MultiIndex, UElement};
use crate::linalg::{ExactMatrix, RowSpace};
use crate::quotient::{
    basis_slice, theorem1_hypotheses, validate_spec, NBasisMonomial, NElement, QuotientSpec,
    SpecError,
};
use crate::scalar::Scalar;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// An element of the induced module at central charge `theta`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InducedElement {
    theta: Scalar,
    spec: QuotientSpec,
    terms: BTreeMap<(MultiIndex, NBasisMonomial), Scalar>,
}

impl InducedElement {
    pub fn zero(theta: Scalar, spec: QuotientSpec) -> Self {
        InducedElement { theta, spec, terms: BTreeMap::new() }
    }

    /// The cyclic vector `1 (x) 1`.
    pub fn cyclic(theta: Scalar, spec: QuotientSpec) -> Self {
        InducedElement::term(
            theta,
            spec,
            MultiIndex::zero(),
            NBasisMonomial::one(),
            Scalar::one(),
        )
    }

    pub fn term(
        theta: Scalar,
        spec: QuotientSpec,
        mi: MultiIndex,
        m: NBasisMonomial,
        coeff: Scalar,
    ) -> Self {
        let mut out = InducedElement::zero(theta, spec);
        out.add_term(mi, m, coeff);
        out
    }

    /// `l^mi (x) m` with coefficient one.
    pub fn tensor(theta: Scalar, spec: QuotientSpec, mi: MultiIndex, m: NBasisMonomial) -> Self {
        InducedElement::term(theta, spec, mi, m, Scalar::one())
    }

    /// Interpret a normal-form operator element as applied to the cyclic
    /// vector: negative factors stay on the left, central powers become
    /// `theta` powers, nonnegative factors act on the quotient module.
    pub fn from_operator(theta: Scalar, spec: QuotientSpec, u: &UElement) -> Self {
        push_through(&theta, &spec, u, &NBasisMonomial::one())
    }

    pub fn theta(&self) -> &Scalar {
        &self.theta
    }

    pub fn spec(&self) -> &QuotientSpec {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(MultiIndex, NBasisMonomial), &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mi: &MultiIndex, m: &NBasisMonomial) -> Scalar {
        self.terms
            .get(&(mi.clone(), m.clone()))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// The set of multi-indices carrying a nonzero right-hand component.
    pub fn support(&self) -> BTreeSet<MultiIndex> {
        self.terms.keys().map(|(mi, _)| mi.clone()).collect()
    }

    /// The maximum of the support under the principal order. Errors on zero.
    pub fn leading_term(&self) -> Result<MultiIndex, SpecError> {
        self.terms
            .keys()
            .map(|(mi, _)| mi)
            .max_by(|a, b| cmp_principal(a, b))
            .cloned()
            .ok_or(SpecError::ZeroVector)
    }

    pub fn add_term(&mut self, mi: MultiIndex, m: NBasisMonomial, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry((mi, m)) {
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

    pub fn add_scaled(&mut self, other: &InducedElement, factor: &Scalar) {
        assert_eq!(
            self.theta, other.theta,
            "cannot combine elements at different central charges"
        );
        assert_eq!(
            self.spec, other.spec,
            "cannot combine elements over different quotient specs"
        );
        for ((mi, m), coeff) in &other.terms {
            self.add_term(mi.clone(), m.clone(), factor * coeff);
        }
    }

    pub fn scaled(&self, factor: &Scalar) -> InducedElement {
        let mut out = InducedElement::zero(self.theta.clone(), self.spec.clone());
        out.add_scaled(self, factor);
        out
    }

    /// The action of `l_j` for any integer `j`.
    pub fn ind_act(&self, j: i64) -> InducedElement {
        let gen = UElement::gen(GenIndex::L(j));
        let mut out = InducedElement::zero(self.theta.clone(), self.spec.clone());
        for ((mi, m), coeff) in &self.terms {
            let u = gen.multiply(&UElement::monomial(mi.to_pbw()));
            out.add_scaled(&push_through(&self.theta, &self.spec, &u, m), coeff);
        }
        out
    }

    /// The action of the central generator: multiplication by `theta`.
    pub fn act_central(&self) -> InducedElement {
        self.scaled(&self.theta)
    }
}

impl std::ops::Add for &InducedElement {
    type Output = InducedElement;
    fn add(self, rhs: &InducedElement) -> InducedElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

impl std::ops::Sub for &InducedElement {
    type Output = InducedElement;
    fn sub(self, rhs: &InducedElement) -> InducedElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::from_int(-1));
        out
    }
}

impl fmt::Display for InducedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, ((mi, m), coeff)) in self.terms.iter().enumerate() {
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
            if !magnitude.is_one() {
                write!(f, "{magnitude} * ")?;
            }
            if mi.is_zero() {
                write!(f, "1")?;
            } else {
                write!(f, "{}", mi.to_pbw())?;
            }
            write!(f, " (x) {m}")?;
        }
        Ok(())
    }
}

impl Serialize for InducedElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            factors: Vec<(i64, u32)>,
            n_factors: Vec<(u32, u32)>,
            coeff: &'a Scalar,
        }
        let mut st = serializer.serialize_struct("InducedElement", 2)?;
        st.serialize_field("theta", &self.theta)?;
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|((mi, m), coeff)| {
                let mut factors: Vec<(i64, u32)> =
                    mi.entries().map(|(pos, e)| (-(pos as i64), e)).collect();
                factors.reverse();
                Term { factors, n_factors: m.entries().collect(), coeff }
            })
            .collect();
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// Distribute a normal-form operator element over the tensor: for each
/// monomial, negative prefix to the left factor, `c`-power to `theta`,
/// nonnegative suffix (applied rightmost first) to the quotient module.
fn push_through(
    theta: &Scalar,
    spec: &QuotientSpec,
    u: &UElement,
    m: &NBasisMonomial,
) -> InducedElement {
    let mut out = InducedElement::zero(theta.clone(), spec.clone());
    for (mono, coeff) in u.terms() {
        let word = mono.word();
        let split = word.partition_point(|&x| x < 0);
        let mut mi = MultiIndex::zero();
        for &x in &word[..split] {
            mi = mi.add_eps((-x) as u32);
        }
        let mut nv = NElement::monomial(spec.clone(), m.clone());
        for &g in word[split..].iter().rev() {
            nv = nv.act(g as u32);
        }
        let factor = coeff * &theta.pow(mono.cpow());
        for (nm, nc) in nv.terms() {
            out.add_term(mi.clone(), nm.clone(), &factor * nc);
        }
    }
    out
}

/// The outcome of one leading-term descent step, with every claimed property
/// of the image checked exactly.
#[derive(Clone, Debug)]
pub struct StepOutcome {
    /// Minimal supported position of the leading multi-index.
    pub p: u32,
    /// `l_{k+p} . v`.
    pub image: InducedElement,
    pub image_nonzero: bool,
    /// Leading term of the image equals the old leading term minus `eps_p`.
    pub leading_check: bool,
    /// Weight of the leading term strictly dropped.
    pub weight_drop: bool,
}

impl StepOutcome {
    pub fn all_flags(&self) -> bool {
        self.image_nonzero && self.leading_check && self.weight_drop
    }
}

/// One descent step: read the leading multi-index, locate its minimal
/// supported position `p`, and act by `l_{k+p}`.
pub fn theorem1_step(v: &InducedElement) -> Result<StepOutcome, SpecError> {
    if v.is_zero() {
        return Err(SpecError::ZeroVector);
    }
    let spec = v.spec();
    if !theorem1_hypotheses(spec) {
        return Err(SpecError::HypothesesNotMet(format!(
            "need k >= 1 with a nonzero scalar at k; conditions are {:?}",
            validate_spec(spec)
        )));
    }
    let lead = v.leading_term()?;
    if lead.weight() == 0 {
        return Err(SpecError::AlreadyAtBottom);
    }
    let p = lead.min_support().expect("positive weight means nonempty support");
    let image = v.ind_act((spec.k() + p) as i64);
    let image_nonzero = !image.is_zero();
    let (leading_check, weight_drop) = if image_nonzero {
        let new_lead = image.leading_term()?;
        let expected = lead.sub_eps(p).expect("p is in the support");
        (new_lead == expected, new_lead.weight() < lead.weight())
    } else {
        (false, false)
    };
    Ok(StepOutcome { p, image, image_nonzero, leading_check, weight_drop })
}

/// A completed descent to the zero-weight layer.
#[derive(Clone, Debug)]
pub struct DescendOutcome {
    /// A nonzero element all of whose terms have the trivial left factor.
    pub bottom: InducedElement,
    pub steps: u32,
}

/// Iterate [`theorem1_step`] until the leading term has weight zero. Any
/// failed step flag or an exhausted budget is reported as an error rather
/// than patched.
pub fn descend(v: &InducedElement, budget: u32) -> Result<DescendOutcome, SpecError> {
    if v.is_zero() {
        return Err(SpecError::ZeroVector);
    }
    if !theorem1_hypotheses(v.spec()) {
        return Err(SpecError::HypothesesNotMet(format!(
            "need k >= 1 with a nonzero scalar at k; conditions are {:?}",
            validate_spec(v.spec())
        )));
    }
    let mut current = v.clone();
    let mut steps = 0;
    loop {
        if current.leading_term()?.weight() == 0 {
            return Ok(DescendOutcome { bottom: current, steps });
        }
        if steps == budget {
            return Err(SpecError::BudgetExhausted { budget });
        }
        let out = theorem1_step(&current)?;
        if !out.all_flags() {
            let claim = if !out.image_nonzero {
                "step-image-nonzero"
            } else if !out.leading_check {
                "step-leading-drop"
            } else {
                "step-weight-drop"
            };
            return Err(SpecError::ClaimViolated {
                claim,
                detail: format!("at step {steps}, element {current}"),
            });
        }
        current = out.image;
        steps += 1;
    }
}

/// A machine-readable description of a truncated closure computation.
#[derive(Clone, Debug, Serialize)]
pub struct ClosureCertificate {
    /// Display forms of the generating elements.
    pub generators: Vec<String>,
    /// The generator indices whose action the space was closed under.
    pub ops: Vec<i64>,
    pub weight_bound: u64,
    pub dimension: usize,
    pub contains_cyclic: bool,
}

/// A truncated closure inside a quotient module: the sliced basis monomials
/// labelling the columns, the reduced basis of the closure, and its
/// certificate.
#[derive(Clone, Debug)]
pub struct NClosure {
    pub columns: Vec<NBasisMonomial>,
    pub basis: ExactMatrix,
    pub certificate: ClosureCertificate,
}

/// A truncated closure inside an induced module.
#[derive(Clone, Debug)]
pub struct InducedClosure {
    pub columns: Vec<(MultiIndex, NBasisMonomial)>,
    pub basis: ExactMatrix,
    pub certificate: ClosureCertificate,
}

/// Smallest subspace of the (weight, degree) <= bound slice of the quotient
/// module that contains the in-slice generators and is stable under every
/// listed `act(op)` whose image stays inside the slice. Images (or
/// generators) leaving the slice are skipped whole, never projected, so
/// every vector in the result genuinely lies in the submodule generated by
/// the input.
pub fn truncated_closure_n(
    spec: &QuotientSpec,
    generators: &[NElement],
    ops: &[u32],
    weight_bound: u64,
) -> NClosure {
    let columns = basis_slice(spec, weight_bound);
    let index: BTreeMap<&NBasisMonomial, usize> =
        columns.iter().enumerate().map(|(n, m)| (m, n)).collect();
    let encode = |v: &NElement| -> Option<Vec<Scalar>> {
        let mut row = vec![Scalar::zero(); columns.len()];
        for (m, c) in v.terms() {
            row[*index.get(m)?] = c.clone();
        }
        Some(row)
    };
    let decode = |row: &[Scalar]| -> NElement {
        let mut v = NElement::zero(spec.clone());
        for (col, c) in row.iter().enumerate() {
            v.add_term(columns[col].clone(), c.clone());
        }
        v
    };
    let mut space = RowSpace::new(columns.len());
    for g in generators {
        assert_eq!(g.spec(), spec, "closure generators must share the spec");
        if let Some(row) = encode(g) {
            space.insert(&row);
        }
    }
    loop {
        let snapshot: Vec<Vec<Scalar>> = space.basis_rows().to_vec();
        let mut grew = false;
        for row in &snapshot {
            let v = decode(row);
            for &op in ops {
                if let Some(enc) = encode(&v.act(op)) {
                    grew |= space.insert(&enc);
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut cyclic_row = vec![Scalar::zero(); columns.len()];
    cyclic_row[index[&NBasisMonomial::one()]] = Scalar::one();
    let certificate = ClosureCertificate {
        generators: generators.iter().map(|g| g.to_string()).collect(),
        ops: ops.iter().map(|&o| o as i64).collect(),
        weight_bound,
        dimension: space.dim(),
        contains_cyclic: space.contains(&cyclic_row),
    };
    let basis = if space.dim() == 0 {
        ExactMatrix::zero(0, columns.len())
    } else {
        ExactMatrix::from_rows(space.basis_rows().to_vec()).expect("rows share the slice length")
    };
    NClosure { columns, basis, certificate }
}

/// All multi-indices of weight at most `bound`, sorted by the principal
/// order.
pub fn multi_indices_up_to(bound: u64) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut stack: Vec<(u32, MultiIndex)> = vec![(1, MultiIndex::zero())];
    while let Some((pos, mi)) = stack.pop() {
        if pos as u64 > bound {
            out.push(mi);
            continue;
        }
        let mut cand = mi;
        loop {
            stack.push((pos + 1, cand.clone()));
            cand = cand.add_eps(pos);
            if cand.weight() > bound {
                break;
            }
        }
    }
    out.sort_by(cmp_principal);
    out
}

/// Induced-module analogue of [`truncated_closure_n`]: columns are the pairs
/// with left weight, right weight, and right degree all at most `bound`,
/// ordered by the principal order on the left factor and then the canonical
/// order on the right.
pub fn truncated_closure(
    spec: &QuotientSpec,
    theta: &Scalar,
    generators: &[InducedElement],
    ops: &[i64],
    weight_bound: u64,
) -> InducedClosure {
    let n_slice = basis_slice(spec, weight_bound);
    let mut columns = Vec::new();
    for mi in multi_indices_up_to(weight_bound) {
        for m in &n_slice {
            columns.push((mi.clone(), m.clone()));
        }
    }
    let index: BTreeMap<&(MultiIndex, NBasisMonomial), usize> =
        columns.iter().enumerate().map(|(n, pair)| (pair, n)).collect();
    let encode = |v: &InducedElement| -> Option<Vec<Scalar>> {
        let mut row = vec![Scalar::zero(); columns.len()];
        for (pair, c) in v.terms() {
            row[*index.get(pair)?] = c.clone();
        }
        Some(row)
    };
    let decode = |row: &[Scalar]| -> InducedElement {
        let mut v = InducedElement::zero(theta.clone(), spec.clone());
        for (col, c) in row.iter().enumerate() {
            let (mi, m) = &columns[col];
            v.add_term(mi.clone(), m.clone(), c.clone());
        }
        v
    };
    let mut space = RowSpace::new(columns.len());
    for g in generators {
        assert_eq!(g.spec(), spec, "closure generators must share the spec");
        assert_eq!(g.theta(), theta, "closure generators must share theta");
        if let Some(row) = encode(g) {
            space.insert(&row);
        }
    }
    loop {
        let snapshot: Vec<Vec<Scalar>> = space.basis_rows().to_vec();
        let mut grew = false;
        for row in &snapshot {
            let v = decode(row);
            for &op in ops {
                if let Some(enc) = encode(&v.ind_act(op)) {
                    grew |= space.insert(&enc);
                }
            }
        }
        if !grew {
            break;
        }
    }
    let cyclic_pair = (MultiIndex::zero(), NBasisMonomial::one());
    let mut cyclic_row = vec![Scalar::zero(); columns.len()];
    cyclic_row[index[&cyclic_pair]] = Scalar::one();
    let certificate = ClosureCertificate {
        generators: generators.iter().map(|g| g.to_string()).collect(),
        ops: ops.to_vec(),
        weight_bound,
        dimension: space.dim(),
        contains_cyclic: space.contains(&cyclic_row),
    };
    let basis = if space.dim() == 0 {
        ExactMatrix::zero(0, columns.len())
    } else {
        ExactMatrix::from_rows(space.basis_rows().to_vec()).expect("rows share the slice length")
    };
    InducedClosure { columns, basis, certificate }
}
