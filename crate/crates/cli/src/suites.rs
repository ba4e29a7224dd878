//! Named verification suites.
//!
//! Each suite builds a list of cases — one per checked instance, with a
//! stable id — and evaluates them exactly over ℚ. A failed case records the
//! violated claim and enough detail to replay it. Randomized suites draw
//! from a counter-based generator seeded from the config, so identical
//! configs produce identical reports.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use virasoro_core::induced::{descend, theorem1_step, truncated_closure_n, InducedElement};
use virasoro_core::lie::{bracket, iterated_ad, GenIndex, MultiIndex, PBWMonomial, UElement};
use virasoro_core::quotient::{
    grel_relations, is_whittaker_closed, quotient_consistency, quotient_consistency_with,
    reduction_coefficient, remark_witness, simplicity_descent, validate_spec, NBasisMonomial,
    NElement, QuotientSpec,
};
use virasoro_core::scalar::Scalar;
use virasoro_core::solvable::{
    classify_c_module, phi_pullback, polynomial_b_module, psi_pullback, psi_with_alpha,
    validate_module, Classification, DEFAULT_WINDOW,
};
use virasoro_core::witt::{
    lower_central_series, prop62_identity, witt_bracket, GradedGeneratorFamily, WittBasisElt,
    WittElement,
};

use crate::parser;

/// The suites `verify` knows about.
pub const SUITE_NAMES: [&str; 10] = [
    "core-axioms",
    "pbw",
    "lemma37",
    "theorem1",
    "lemma31",
    "grel",
    "remark39",
    "prop25",
    "witt-prop62",
    "qnilp",
];

pub const DEFAULT_SEED: u64 = 1729;
pub const DEFAULT_MAX_WEIGHT: u32 = 6;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub max_weight: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: DEFAULT_SEED, max_weight: DEFAULT_MAX_WEIGHT }
    }
}

/// One violated claim, with the case id identifying the inputs.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CaseFailure {
    pub case: String,
    pub claim: String,
    pub detail: String,
}

/// Result of a whole suite; passes iff `failures` is empty. Wall time is
/// reported for humans but kept out of the serialized form so reports are
/// byte-identical across runs.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<CaseFailure>,
    pub seed: u64,
    #[serde(skip)]
    pub wall: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SuiteError {
    #[error(
        "unknown suite `{0}`; valid suites: core-axioms, pbw, lemma37, theorem1, lemma31, grel, remark39, prop25, witt-prop62, qnilp"
    )]
    UnknownSuite(String),
}

struct Case {
    id: String,
    outcome: Result<(), (String, String)>,
}

/// Accumulates evaluated cases.
#[derive(Default)]
struct Cases(Vec<Case>);

impl Cases {
    fn check(
        &mut self,
        id: impl Into<String>,
        claim: &str,
        ok: bool,
        detail: impl FnOnce() -> String,
    ) {
        let outcome = if ok { Ok(()) } else { Err((claim.to_string(), detail())) };
        self.0.push(Case { id: id.into(), outcome });
    }

    fn fail(&mut self, id: impl Into<String>, claim: &str, detail: String) {
        self.0.push(Case { id: id.into(), outcome: Err((claim.to_string(), detail)) });
    }
}

/// Run a named suite with the given config.
pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let start = Instant::now();
    let mut cases = match name {
        "core-axioms" => core_axioms(),
        "pbw" => pbw(config),
        "lemma37" => lemma37(),
        "theorem1" => theorem1(config),
        "lemma31" => lemma31(config),
        "grel" => grel(config),
        "remark39" => remark39(),
        "prop25" => prop25(),
        "witt-prop62" => witt_prop62(config),
        "qnilp" => qnilp(),
        _ => return Err(SuiteError::UnknownSuite(name.to_string())),
    };
    cases.0.sort_by(|a, b| a.id.cmp(&b.id));
    let failures = cases
        .0
        .iter()
        .filter_map(|c| {
            c.outcome.as_ref().err().map(|(claim, detail)| CaseFailure {
                case: c.id.clone(),
                claim: claim.clone(),
                detail: detail.clone(),
            })
        })
        .collect();
    Ok(SuiteReport {
        suite: name.to_string(),
        cases: cases.0.len(),
        failures,
        seed: config.seed,
        wall: start.elapsed(),
    })
}

fn gen_label(g: GenIndex) -> String {
    match g {
        GenIndex::C => "c".to_string(),
        GenIndex::L(i) => format!("l[{i}]"),
    }
}

/// Commutator in the enveloping algebra.
fn comm(x: &UElement, y: &UElement) -> UElement {
    &x.multiply(y) - &y.multiply(x)
}

// ---------------------------------------------------------------------------
// core-axioms: antisymmetry and Jacobi for all generator triples, |index| <= 8
// ---------------------------------------------------------------------------

fn core_axioms() -> Cases {
    let mut cases = Cases::default();
    let gens: Vec<GenIndex> = std::iter::once(GenIndex::C)
        .chain((-8..=8).map(GenIndex::L))
        .collect();
    for &a in &gens {
        for &b in &gens {
            let anti = &bracket(a, b) + &bracket(b, a);
            cases.check(
                format!("antisym ({}, {})", gen_label(a), gen_label(b)),
                "bracket-antisymmetry",
                anti.is_zero(),
                || format!("[x,y] + [y,x] = {anti}"),
            );
        }
    }
    let as_elements: Vec<(String, UElement)> = gens
        .iter()
        .map(|&g| (gen_label(g), UElement::gen(g)))
        .collect();
    for (la, ea) in &as_elements {
        for (lb, eb) in &as_elements {
            for (lc, ec) in &as_elements {
                let jac = &comm(ea, &comm(eb, ec))
                    + &(&comm(eb, &comm(ec, ea)) + &comm(ec, &comm(ea, eb)));
                cases.check(
                    format!("jacobi ({la}, {lb}, {lc})"),
                    "bracket-jacobi",
                    jac.is_zero(),
                    || format!("cyclic sum = {jac}"),
                );
            }
        }
    }
    cases
}

// ---------------------------------------------------------------------------
// pbw: multiply associativity + parse/format round trip
// ---------------------------------------------------------------------------

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let mut num = 0;
    while num == 0 {
        num = rng.random_range(-9..=9);
    }
    Scalar::ratio(num, rng.random_range(1..=9))
}

/// Up to four random terms. Monomials are kept short (at most two factors,
/// exponents at most two): straightening cost grows very fast with word
/// length, and the associativity triples multiply three of these together.
fn random_u_element(rng: &mut ChaCha8Rng, max_terms: u32, max_index: i64) -> UElement {
    let mut out = UElement::zero();
    for _ in 0..rng.random_range(1..=max_terms) {
        let cpow = rng.random_range(0..=1);
        let mut factors: BTreeMap<i64, u32> = BTreeMap::new();
        for _ in 0..rng.random_range(0..=2u32) {
            factors.insert(rng.random_range(-max_index..=max_index), rng.random_range(1..=2));
        }
        let mono = PBWMonomial::new(cpow, factors.into_iter().collect())
            .expect("sorted by construction");
        out.add_term(mono, random_scalar(rng));
    }
    out
}

fn pbw(config: &SuiteConfig) -> Cases {
    let mut cases = Cases::default();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for t in 0..200 {
        let a = random_u_element(&mut rng, 4, 6);
        let b = random_u_element(&mut rng, 4, 6);
        let c = random_u_element(&mut rng, 4, 6);
        let left = a.multiply(&b).multiply(&c);
        let right = a.multiply(&b.multiply(&c));
        cases.check(
            format!("assoc {t:03}"),
            "product-associativity",
            left == right,
            || format!("a = {a}; b = {b}; c = {c}"),
        );
    }
    for t in 0..500 {
        let e = random_u_element(&mut rng, 4, 6);
        let text = e.to_string();
        let ok = parser::parse(&text).map(|back| back == e).unwrap_or(false);
        cases.check(
            format!("roundtrip {t:03}"),
            "parse-format-round-trip",
            ok,
            || format!("formatted as `{text}`"),
        );
    }
    cases
}

// ---------------------------------------------------------------------------
// lemma37: iterated bracket against its closed form
// ---------------------------------------------------------------------------

fn lemma37() -> Cases {
    let mut cases = Cases::default();
    for i in 1..=5i64 {
        for j in -10..=10i64 {
            for s in 0..=5u32 {
                let got = iterated_ad(i, j, s);
                if got.terms().any(|(m, _)| m.cpow() > 0) {
                    // A central contribution survives only when the chain
                    // hits l_{-i} at the final step; the closed form does
                    // not apply there.
                    continue;
                }
                let mut scalar = Scalar::one();
                for t in 0..s as i64 {
                    scalar *= Scalar::from_int(j + (t - 1) * i);
                }
                let expected = UElement::gen(GenIndex::L(j + s as i64 * i)).scaled(&scalar);
                cases.check(
                    format!("ad i={i} j={j:+} s={s}"),
                    "iterated-bracket-closed-form",
                    got == expected,
                    || format!("got {got}, closed form {expected}"),
                );
            }
        }
    }
    cases
}

// ---------------------------------------------------------------------------
// theorem1: the descent step and full descent on induced modules
// ---------------------------------------------------------------------------

fn theorem1_specs() -> Vec<(&'static str, QuotientSpec)> {
    vec![
        (
            "ow(1,1)",
            QuotientSpec::whittaker_k2(Scalar::one(), Scalar::one()),
        ),
        (
            "ow(0,1)",
            QuotientSpec::whittaker_k2(Scalar::zero(), Scalar::one()),
        ),
        (
            "k3(1,1)",
            QuotientSpec::upper_half(3, &[Scalar::one(), Scalar::one()]).expect("valid"),
        ),
        ("q5(1,0,1)", spec_q5()),
    ]
}

fn spec_q5() -> QuotientSpec {
    QuotientSpec::new(
        5,
        [2, 4, 5].into_iter().collect(),
        [
            (2, Scalar::one()),
            (4, Scalar::zero()),
            (5, Scalar::one()),
        ]
        .into_iter()
        .collect(),
    )
    .expect("valid")
}

/// A random multi-index of exactly the given weight (zero weight gives the
/// empty index).
fn random_multi_index(rng: &mut ChaCha8Rng, weight: u32) -> MultiIndex {
    let mut mi = MultiIndex::zero();
    let mut remaining = weight;
    while remaining > 0 {
        let part = rng.random_range(1..=remaining);
        mi = mi.add_eps(part);
        remaining -= part;
    }
    mi
}

/// A random quotient-module basis monomial of weight at most `max_weight`.
fn random_n_monomial(rng: &mut ChaCha8Rng, spec: &QuotientSpec, max_weight: u32) -> NBasisMonomial {
    let free = spec.free_indices();
    let mut m = NBasisMonomial::one();
    let mut budget = max_weight;
    for _ in 0..rng.random_range(0..=2u32) {
        let i = free[rng.random_range(0..free.len())];
        if i == 0 {
            for _ in 0..rng.random_range(1..=2u32) {
                m = m.bump(0);
            }
        } else if i <= budget {
            m = m.bump(i);
            budget -= i;
        }
    }
    m
}

/// A random nonzero induced element whose leading multi-index has weight in
/// `1..=max_weight`.
fn random_induced(
    rng: &mut ChaCha8Rng,
    theta: &Scalar,
    spec: &QuotientSpec,
    max_weight: u32,
) -> InducedElement {
    let mut v = InducedElement::zero(theta.clone(), spec.clone());
    let terms = rng.random_range(1..=3u32);
    for t in 0..terms {
        let w = if t == 0 {
            rng.random_range(1..=max_weight)
        } else {
            rng.random_range(0..=max_weight)
        };
        v.add_term(
            random_multi_index(rng, w),
            random_n_monomial(rng, spec, 4),
            random_scalar(rng),
        );
    }
    // Random cancellation may have flattened (or zeroed) the element; the
    // step under test needs a leading term of positive weight.
    let flat = v
        .leading_term()
        .map(|lead| lead.weight() == 0)
        .unwrap_or(true);
    if flat {
        v.add_term(MultiIndex::eps(1), NBasisMonomial::one(), Scalar::one());
    }
    v
}

fn theorem1(config: &SuiteConfig) -> Cases {
    let mut cases = Cases::default();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for (label, spec) in theorem1_specs() {
        for theta in [Scalar::zero(), Scalar::ratio(1, 2)] {
            for t in 0..100 {
                let v = random_induced(&mut rng, &theta, &spec, config.max_weight);
                let id = format!("{label} theta={theta} v{t:03}");
                match theorem1_step(&v) {
                    Err(e) => cases.fail(format!("{id} step"), "step-error", e.to_string()),
                    Ok(step) => {
                        let claim = if !step.image_nonzero {
                            Some("step-image-nonzero")
                        } else if !step.leading_check {
                            Some("step-leading-drop")
                        } else if !step.weight_drop {
                            Some("step-weight-drop")
                        } else {
                            None
                        };
                        cases.check(format!("{id} step"), claim.unwrap_or("step"), claim.is_none(), || {
                            format!("v = {v}; p = {}", step.p)
                        });
                    }
                }
                let budget = v.leading_term().expect("nonzero").weight() as u32;
                match descend(&v, budget) {
                    Err(e) => cases.fail(format!("{id} descend"), "descent-error", e.to_string()),
                    Ok(out) => cases.check(
                        format!("{id} descend"),
                        "descent-bottom-nonzero",
                        !out.bottom.is_zero() && out.steps <= budget,
                        || format!("v = {v}; bottom = {}; steps = {}", out.bottom, out.steps),
                    ),
                }
            }
        }
    }
    cases
}

// ---------------------------------------------------------------------------
// lemma31: leading-term descent inside the quotient module
// ---------------------------------------------------------------------------

fn random_n_element(rng: &mut ChaCha8Rng, spec: &QuotientSpec, max_weight: u32) -> NElement {
    let mut v = NElement::zero(spec.clone());
    for _ in 0..rng.random_range(1..=3u32) {
        v.add_term(random_n_monomial(rng, spec, max_weight), random_scalar(rng));
    }
    if v.is_zero() {
        v = NElement::cyclic(spec.clone());
    }
    v
}

fn descent_reaches_constant(cases: &mut Cases, id: String, v: &NElement) {
    let budget = v.max_degree() as u32;
    match simplicity_descent(v, budget) {
        Err(e) => cases.fail(id, "descent-error", format!("v = {v}: {e}")),
        Ok(out) => cases.check(
            id,
            "descent-reaches-constant",
            !out.witness.is_zero() && out.witness.max_weight() == 0 && out.witness.max_degree() == 0,
            || format!("v = {v}; witness = {}; steps = {}", out.witness, out.steps),
        ),
    }
}

fn lemma31(config: &SuiteConfig) -> Cases {
    let mut cases = Cases::default();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let specs = [
        (
            "k3(1,1)",
            QuotientSpec::upper_half(3, &[Scalar::one(), Scalar::one()]).expect("valid"),
        ),
        ("q5(1,0,1)", spec_q5()),
    ];
    for (label, spec) in specs {
        for t in 0..100 {
            let v = random_n_element(&mut rng, &spec, config.max_weight);
            descent_reaches_constant(&mut cases, format!("{label} v{t:03}"), &v);
        }
    }
    cases
}

// ---------------------------------------------------------------------------
// grel: the k=4 relation family, consistency checks, closure properness,
// and the k=3 descent
// ---------------------------------------------------------------------------

fn grel(config: &SuiteConfig) -> Cases {
    let mut cases = Cases::default();
    for lam in [Scalar::one(), Scalar::from_int(2)] {
        let spec = QuotientSpec::ends_marked(4, Scalar::zero(), lam.clone()).expect("valid");
        let label = format!("k=4 lam={lam}");

        match grel_relations(&spec) {
            Err(e) => cases.fail(format!("{label} relation"), "relation-error", e.to_string()),
            Ok(rels) => {
                // The single relation must be 4*lam*l[2] - l[3]^2.
                let mut expected = NElement::term(
                    spec.clone(),
                    NBasisMonomial::unit(2),
                    Scalar::from_int(4) * lam.clone(),
                );
                expected.add_term(
                    NBasisMonomial::from_pairs(&[(3, 2)]),
                    -Scalar::one(),
                );
                let ok = rels.len() == 1 && !rels[0].is_zero() && rels[0] == expected;
                cases.check(
                    format!("{label} relation"),
                    "relation-frozen-form",
                    ok,
                    || format!("got {:?}", rels.iter().map(|r| r.to_string()).collect::<Vec<_>>()),
                );

                let closure = truncated_closure_n(&spec, &rels, &[0, 1, 2, 3, 4], 8);
                cases.check(
                    format!("{label} closure"),
                    "relation-closure-proper",
                    closure.certificate.dimension > 0 && !closure.certificate.contains_cyclic,
                    || {
                        format!(
                            "dimension {} contains_cyclic {}",
                            closure.certificate.dimension, closure.certificate.contains_cyclic
                        )
                    },
                );
            }
        }

        match quotient_consistency(&spec, 5) {
            Err(e) => cases.fail(format!("{label} consistency"), "consistency-error", e.to_string()),
            Ok(ok) => cases.check(
                format!("{label} consistency"),
                "pairwise-consistency",
                ok,
                || "a bracket identity failed under the square reduction".to_string(),
            ),
        }

        let corrupted = reduction_coefficient(&spec)
            .map(|a2| a2 + Scalar::one())
            .expect("coefficient exists for k=4");
        match quotient_consistency_with(&spec, &corrupted, 5) {
            Err(e) => cases.fail(format!("{label} corruption"), "consistency-error", e.to_string()),
            Ok(ok) => cases.check(
                format!("{label} corruption"),
                "consistency-detects-corruption",
                !ok,
                || "the corrupted reduction coefficient went unnoticed".to_string(),
            ),
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for lam1 in [Scalar::zero(), Scalar::one()] {
        let spec = QuotientSpec::ends_marked(3, lam1.clone(), Scalar::one()).expect("valid");
        for t in 0..25 {
            let v = random_n_element(&mut rng, &spec, config.max_weight);
            descent_reaches_constant(
                &mut cases,
                format!("k=3 lam1={lam1} v{t:02}"),
                &v,
            );
        }
    }
    cases
}

// ---------------------------------------------------------------------------
// remark39: reducibility witnesses for every spec failing the pairing
// condition
// ---------------------------------------------------------------------------

fn remark39() -> Cases {
    let mut cases = Cases::default();
    let mut seen: BTreeSet<(u32, Vec<u32>)> = BTreeSet::new();
    for k in 1..=7u32 {
        for mask in 0..(1u32 << (k - 1)) {
            let mut marked: BTreeSet<u32> = (1..k).filter(|i| mask & (1 << (i - 1)) != 0).collect();
            marked.insert(k);
            let lambda: BTreeMap<u32, Scalar> = marked
                .iter()
                .map(|&i| (i, if i == k { Scalar::one() } else { Scalar::zero() }))
                .collect();
            let spec = QuotientSpec::new(k, marked.clone(), lambda).expect("valid shape");
            let conds = validate_spec(&spec);
            if !conds.sums_compatible || conds.complement_paired {
                continue;
            }
            let listed: Vec<u32> = marked.iter().copied().collect();
            let id = format!(
                "witness k={k} S={{{}}}",
                listed.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
            );
            seen.insert((k, listed));
            match remark_witness(&spec).and_then(|w| Ok((is_whittaker_closed(&w)?, w))) {
                Err(e) => cases.fail(id, "witness-error", e.to_string()),
                Ok((closed, w)) => cases.check(
                    id,
                    "witness-whittaker-closed",
                    closed && !w.is_zero() && w.max_weight() > 0,
                    || format!("witness = {w}"),
                ),
            }
        }
    }
    cases.check(
        "coverage single-generator shape k=4 S={3,4}",
        "enumeration-covers-both-shapes",
        seen.contains(&(4, vec![3, 4])),
        || "the enumeration skipped the single-generator witness shape".to_string(),
    );
    cases.check(
        "coverage square-combination shape k=6 S={1,6}",
        "enumeration-covers-both-shapes",
        seen.contains(&(6, vec![1, 6])),
        || "the enumeration skipped the square-combination witness shape".to_string(),
    );
    cases
}

// ---------------------------------------------------------------------------
// prop25: pullback validation and the classification trichotomy
// ---------------------------------------------------------------------------

fn prop25() -> Cases {
    let mut cases = Cases::default();
    for lam1 in [Scalar::one(), Scalar::from_int(3), Scalar::ratio(-1, 2)] {
        let m = polynomial_b_module(lam1.clone());
        cases.check(
            format!("validate family lam1={lam1}"),
            "module-validates",
            validate_module(&m, DEFAULT_WINDOW),
            || "the bracket identity failed on the window".to_string(),
        );
    }

    let base = polynomial_b_module(Scalar::one());
    for lam in [Scalar::zero(), Scalar::one(), Scalar::ratio(1, 3), Scalar::from_int(-2)] {
        let ok = phi_pullback(&lam, &base)
            .map(|m| validate_module(&m, DEFAULT_WINDOW))
            .unwrap_or(false);
        cases.check(
            format!("validate phi lam={lam}"),
            "module-validates",
            ok,
            || "the squared-shift pullback failed the bracket identity".to_string(),
        );
    }

    let half = psi_with_alpha(&Scalar::ratio(1, 2), &base).expect("b-module");
    cases.check(
        "psi alpha=1/2",
        "alpha-half-fails",
        !validate_module(&half, DEFAULT_WINDOW),
        || "the printed coefficient 1/2 unexpectedly validates".to_string(),
    );
    let two = psi_with_alpha(&Scalar::from_int(2), &base).expect("b-module");
    cases.check(
        "psi alpha=2",
        "alpha-two-validates",
        validate_module(&two, DEFAULT_WINDOW),
        || "coefficient 2 fails the bracket identity".to_string(),
    );
    match psi_pullback(&base) {
        Err(e) => cases.fail("psi pullback", "alpha-two-validates", e.to_string()),
        Ok(out) => cases.check(
            "psi pullback",
            "alpha-two-validates",
            out.alpha == Scalar::from_int(2),
            || format!("selected alpha = {}", out.alpha),
        ),
    }

    let phi0 = phi_pullback(&Scalar::zero(), &base).expect("b-module");
    cases.check(
        "classify phi lam=0",
        "pullback-classification",
        classify_c_module(&phi0, DEFAULT_WINDOW) == Classification::L2Kills,
        || format!("got {:?}", classify_c_module(&phi0, DEFAULT_WINDOW)),
    );
    let psi = psi_pullback(&base).expect("validates").module;
    cases.check(
        "classify psi",
        "pullback-classification",
        classify_c_module(&psi, DEFAULT_WINDOW) == Classification::L1Kills,
        || format!("got {:?}", classify_c_module(&psi, DEFAULT_WINDOW)),
    );
    for mu in [Scalar::one(), Scalar::ratio(1, 3), Scalar::from_int(-2)] {
        let m = phi_pullback(&mu, &base).expect("b-module");
        let got = classify_c_module(&m, DEFAULT_WINDOW);
        cases.check(
            format!("classify phi mu={mu}"),
            "pullback-classification",
            got == Classification::ScalarRelation(mu.inv()),
            || format!("mu = {mu}: got {got:?}, want the reciprocal scalar"),
        );
    }
    cases
}

// ---------------------------------------------------------------------------
// witt-prop62: bracket vs derivation composition, and the two commutator
// shapes
// ---------------------------------------------------------------------------

/// All exponent vectors of the given length with total degree at most
/// `max_total`.
fn exponent_vectors(len: usize, max_total: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for stem in &out {
            let used: u32 = stem.iter().sum();
            for e in 0..=(max_total - used) {
                let mut grown = stem.clone();
                grown.push(e);
                next.push(grown);
            }
        }
        out = next;
    }
    out
}

fn apply_to_poly(
    elt: &WittElement,
    p: &BTreeMap<Vec<u32>, Scalar>,
) -> BTreeMap<Vec<u32>, Scalar> {
    let mut out: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
    for (expo, c) in p {
        for (target, c2) in elt.apply_to_monomial(expo) {
            let entry = out.entry(target).or_insert_with(Scalar::zero);
            *entry += &c2 * c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// The two derivations composed both ways on a single monomial — the ground
/// truth for the bracket formula.
fn composed_commutator(
    a: &WittElement,
    b: &WittElement,
    expo: &[u32],
) -> BTreeMap<Vec<u32>, Scalar> {
    let seed = BTreeMap::from([(expo.to_vec(), Scalar::one())]);
    let mut out = apply_to_poly(a, &apply_to_poly(b, &seed));
    for (m, c) in apply_to_poly(b, &apply_to_poly(a, &seed)) {
        let entry = out.entry(m).or_insert_with(Scalar::zero);
        *entry -= c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn random_witt_basis(rng: &mut ChaCha8Rng, n: usize) -> WittBasisElt {
    let mut m = vec![0u32; n];
    for _ in 0..rng.random_range(0..=4u32) {
        m[rng.random_range(0..n)] += 1;
    }
    WittBasisElt::new(rng.random_range(1..=n), m).expect("direction in range")
}

fn witt_prop62(config: &SuiteConfig) -> Cases {
    let mut cases = Cases::default();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for t in 0..200 {
        let n = rng.random_range(1..=3usize);
        let a = random_witt_basis(&mut rng, n);
        let b = random_witt_basis(&mut rng, n);
        let got = witt_bracket(&a, &b);
        let (ea, eb) = (WittElement::from_basis(&a), WittElement::from_basis(&b));
        let ok = exponent_vectors(n, 4)
            .iter()
            .all(|probe| got.apply_to_monomial(probe) == composed_commutator(&ea, &eb, probe));
        cases.check(
            format!("oracle {t:03}"),
            "bracket-matches-composition",
            ok,
            || format!("[{ea}, {eb}] computed as {got}"),
        );
    }

    for i in 1..=2usize {
        for j in 1..=2usize {
            for mpj in 1..=4u32 {
                let mut m_prime = vec![0u32; 2];
                m_prime[j - 1] = mpj;
                for m_dprime in exponent_vectors(2, 4 - mpj) {
                    let target_m: Vec<u32> =
                        m_prime.iter().zip(&m_dprime).map(|(a, b)| a + b).collect();
                    let scalar = if i == j {
                        Scalar::from_int(m_dprime[i - 1] as i64 - m_prime[i - 1] as i64 - 1)
                    } else {
                        Scalar::from_int(m_dprime[j - 1] as i64 + 1)
                    };
                    let target = WittBasisElt::new(i, target_m).expect("in range");
                    let expected = WittElement::term(&target, &scalar);
                    let id = format!(
                        "shape i={i} j={j} m'={m_prime:?} m''={m_dprime:?}"
                    );
                    match prop62_identity(i, j, &m_prime, &m_dprime) {
                        Err(e) => cases.fail(id, "commutator-recovers-target", e.to_string()),
                        Ok(out) => cases.check(
                            id,
                            "commutator-recovers-target",
                            out.result == expected
                                && out.is_scalar_multiple == !scalar.is_zero(),
                            || {
                                format!(
                                    "got {} (flag {}), want {} * {target}",
                                    out.result, out.is_scalar_multiple, scalar
                                )
                            },
                        ),
                    }
                }
            }
        }
    }
    cases
}

// ---------------------------------------------------------------------------
// qnilp: the descending series of the positive part
// ---------------------------------------------------------------------------

fn qnilp() -> Cases {
    let mut cases = Cases::default();
    let family = GradedGeneratorFamily::virasoro_positive_part();
    let layers = lower_central_series(&family, 10, 30);
    for (t, layer) in layers.iter().enumerate() {
        let expected: BTreeSet<u32> = if t == 0 {
            (1..=30).collect()
        } else {
            (t as u32 + 2..=30).collect()
        };
        let expected_codim = if t == 0 { 0 } else { t + 1 };
        cases.check(
            format!("layer {t:02}"),
            "series-layer-shape",
            layer.indices == expected && layer.codim == expected_codim,
            || format!("indices {:?} codim {}", layer.indices, layer.codim),
        );
    }
    let increments_ok = layers
        .windows(2)
        .skip(1)
        .all(|pair| pair[1].codim == pair[0].codim + 1);
    cases.check(
        "codimension-increments",
        "codimension-increments",
        increments_ok,
        || format!("codims {:?}", layers.iter().map(|l| l.codim).collect::<Vec<_>>()),
    );
    cases
}
