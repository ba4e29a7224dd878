//! Finite-dimensional truncations of the nonnegative half and their modules.
//!
//! [`TruncatedAlgebra`] is the Lie algebra on `l_0, .., l_n` with
//! `[l_i, l_j] = (j - i) l_{i+j}` when `i + j <= n` and zero otherwise. The
//! two smallest interesting cases are `n = 1` (here called `b`) and `n = 2`
//! (called `c`).
//!
//! A [`TruncatedModule`] carries one action closure per generator over a
//! countable basis `e_0, e_1, ...`; closures are exact and total, and
//! [`validate_module`] checks the bracket compatibility
//! `rho_i rho_j - rho_j rho_i = rho([l_i, l_j])` on a finite window of basis
//! vectors. The shipped module is the polynomial family where `l_0`
//! multiplies (`e_d -> e_{d+1}`) and `l_1` substitutes the variable down by
//! one and scales.
//!
//! On top sit the two pullbacks along the surjections from `c` onto `b` —
//! [`phi_pullback`] sending `l_2` to a multiple of the square of `l_1`, and
//! [`psi_pullback`] killing `l_1` — plus [`classify_c_module`], which decides
//! which of the three shapes a `c`-module has on a window: `l_2` acts by
//! zero, `l_1` acts by zero, or the square of `l_1` is a fixed rational
//! multiple of `l_2`.

use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Sparse vector over the module basis `e_0, e_1, ...`.
pub type ModuleVec = BTreeMap<usize, Scalar>;

/// One generator's action: basis index to exact sparse image.
pub type ModuleAction = Arc<dyn Fn(usize) -> ModuleVec + Send + Sync>;

/// Errors from the pullback and validation layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolvableError {
    #[error("module is over the truncation at {found}, expected {expected}")]
    WrongAlgebra { expected: u32, found: u32 },
    #[error("neither candidate zero-generator coefficient (1/2, 2) validates")]
    NoValidAlpha,
}

/// The Lie algebra on `l_0..l_n` with brackets truncated above `n`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TruncatedAlgebra {
    n: u32,
}

impl TruncatedAlgebra {
    pub fn new(n: u32) -> Self {
        TruncatedAlgebra { n }
    }

    /// The two-dimensional truncation on `l_0, l_1`.
    pub fn b() -> Self {
        TruncatedAlgebra::new(1)
    }

    /// The three-dimensional truncation on `l_0, l_1, l_2`.
    pub fn c() -> Self {
        TruncatedAlgebra::new(2)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of generators, `n + 1`.
    pub fn dim(&self) -> usize {
        self.n as usize + 1
    }

    /// `[l_i, l_j]` as at most one weighted generator.
    pub fn bracket(&self, i: u32, j: u32) -> Option<(u32, Scalar)> {
        assert!(i <= self.n && j <= self.n, "generator index out of range");
        if i == j || i + j > self.n {
            return None;
        }
        Some((i + j, Scalar::from_int(j as i64 - i as i64)))
    }

    /// Exhaustive antisymmetry and Jacobi check over generator triples.
    pub fn validate(&self) -> bool {
        let gens = 0..=self.n;
        for i in gens.clone() {
            for j in gens.clone() {
                let ij = self.bracket(i, j);
                let ji = self.bracket(j, i);
                let antisym = match (&ij, &ji) {
                    (None, None) => true,
                    (Some((m, c)), Some((m2, c2))) => m == m2 && (c + c2).is_zero(),
                    _ => false,
                };
                if !antisym {
                    return false;
                }
            }
        }
        for i in gens.clone() {
            for j in gens.clone() {
                for k in gens.clone() {
                    let mut total: BTreeMap<u32, Scalar> = BTreeMap::new();
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        if let Some((m, inner)) = self.bracket(b, c) {
                            if let Some((target, outer)) = self.bracket(a, m) {
                                let entry = total.entry(target).or_insert_with(Scalar::zero);
                                *entry += &inner * &outer;
                            }
                        }
                    }
                    if total.values().any(|c| !c.is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// A module over a truncated algebra, presented by one exact action closure
/// per generator.
#[derive(Clone)]
pub struct TruncatedModule {
    algebra: TruncatedAlgebra,
    actions: Vec<ModuleAction>,
}

impl TruncatedModule {
    pub fn new(algebra: TruncatedAlgebra, actions: Vec<ModuleAction>) -> Self {
        assert_eq!(
            actions.len(),
            algebra.dim(),
            "need exactly one action per generator"
        );
        TruncatedModule { algebra, actions }
    }

    pub fn algebra(&self) -> &TruncatedAlgebra {
        &self.algebra
    }

    pub fn action(&self, g: usize) -> &ModuleAction {
        &self.actions[g]
    }

    /// `rho(l_g) e_d`, with zero entries dropped.
    pub fn act(&self, g: usize, d: usize) -> ModuleVec {
        let mut out = (self.actions[g])(d);
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// `rho(l_g)` applied to a sparse vector.
    pub fn act_vec(&self, g: usize, v: &ModuleVec) -> ModuleVec {
        let mut out = ModuleVec::new();
        for (&d, coeff) in v {
            for (t, c) in self.act(g, d) {
                let entry = out.entry(t).or_insert_with(Scalar::zero);
                *entry += &c * coeff;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

impl std::fmt::Debug for TruncatedModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TruncatedModule")
            .field("algebra", &self.algebra)
            .field("actions", &format!("<{} closures>", self.actions.len()))
            .finish()
    }
}

/// Bracket compatibility on the window: for every generator pair and every
/// `e_d` with `d < window`, the commutator of the actions equals the action
/// of the bracket.
pub fn validate_module(m: &TruncatedModule, window: usize) -> bool {
    let n = m.algebra().n();
    for i in 0..=n {
        for j in i + 1..=n {
            for d in 0..window {
                let e_d = ModuleVec::from([(d, Scalar::one())]);
                let lhs_ij = m.act_vec(i as usize, &m.act(j as usize, d));
                let lhs_ji = m.act_vec(j as usize, &m.act(i as usize, d));
                let mut lhs = lhs_ij;
                for (t, c) in lhs_ji {
                    let entry = lhs.entry(t).or_insert_with(Scalar::zero);
                    *entry -= c;
                }
                lhs.retain(|_, c| !c.is_zero());
                let rhs = match m.algebra().bracket(i, j) {
                    None => ModuleVec::new(),
                    Some((g, c)) => {
                        let mut image = m.act_vec(g as usize, &e_d);
                        for coeff in image.values_mut() {
                            *coeff *= c.clone();
                        }
                        image.retain(|_, coeff| !coeff.is_zero());
                        image
                    }
                };
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// Coefficients of `(x + shift)^d` in the basis `x^t`, index `t`.
fn shifted_power_coeffs(d: usize, shift: i64) -> Vec<Scalar> {
    let mut coeffs = vec![Scalar::one()];
    for _ in 0..d {
        let mut next = vec![Scalar::zero(); coeffs.len() + 1];
        for (t, c) in coeffs.iter().enumerate() {
            next[t + 1] = &next[t + 1] + c;
            next[t] = &next[t] + &(c * &Scalar::from_int(shift));
        }
        coeffs = next;
    }
    coeffs
}

/// The shipped module over the `n = 1` truncation: basis `e_d` standing for
/// the `d`-th power of the zeroth generator, `l_0` acting as multiplication
/// (`e_d -> e_{d+1}`) and `l_1` as the scaled substitution
/// `f(x) -> lambda_1 f(x - 1)`.
pub fn polynomial_b_module(lambda1: Scalar) -> TruncatedModule {
    let mult: ModuleAction = Arc::new(|d| ModuleVec::from([(d + 1, Scalar::one())]));
    let shift: ModuleAction = Arc::new(move |d| {
        shifted_power_coeffs(d, -1)
            .into_iter()
            .enumerate()
            .map(|(t, c)| (t, &c * &lambda1))
            .collect()
    });
    TruncatedModule::new(TruncatedAlgebra::b(), vec![mult, shift])
}

/// Pull a module over the `n = 1` truncation back along the map that keeps
/// `l_0` and `l_1` and sends `l_2` to `lambda` times the square of `l_1`.
pub fn phi_pullback(lambda: &Scalar, l: &TruncatedModule) -> Result<TruncatedModule, SolvableError> {
    if l.algebra().n() != 1 {
        return Err(SolvableError::WrongAlgebra { expected: 1, found: l.algebra().n() });
    }
    let a0 = l.action(0).clone();
    let a1 = l.action(1).clone();
    let square = {
        let a1 = a1.clone();
        let lambda = lambda.clone();
        Arc::new(move |d: usize| {
            let mut out = ModuleVec::new();
            for (t, c) in a1(d) {
                for (s, c2) in a1(t) {
                    let entry = out.entry(s).or_insert_with(Scalar::zero);
                    *entry += &(&c * &c2) * &lambda;
                }
            }
            out
        })
    };
    Ok(TruncatedModule::new(TruncatedAlgebra::c(), vec![a0, a1, square]))
}

/// Pull a module over the `n = 1` truncation back along the map that kills
/// `l_1`, sends `l_2` to `l_1`, and scales `l_0` by `alpha`.
pub fn psi_with_alpha(alpha: &Scalar, l: &TruncatedModule) -> Result<TruncatedModule, SolvableError> {
    if l.algebra().n() != 1 {
        return Err(SolvableError::WrongAlgebra { expected: 1, found: l.algebra().n() });
    }
    let a0 = l.action(0).clone();
    let scaled0: ModuleAction = {
        let alpha = alpha.clone();
        Arc::new(move |d| {
            a0(d)
                .into_iter()
                .map(|(t, c)| (t, &c * &alpha))
                .collect()
        })
    };
    let kill: ModuleAction = Arc::new(|_| ModuleVec::new());
    let a1 = l.action(1).clone();
    Ok(TruncatedModule::new(TruncatedAlgebra::c(), vec![scaled0, kill, a1]))
}

/// The default validation window used throughout the classification layer.
pub const DEFAULT_WINDOW: usize = 12;

/// A pullback killing `l_1` together with the zero-generator coefficient
/// that made it validate.
#[derive(Clone, Debug)]
pub struct PsiOutcome {
    pub module: TruncatedModule,
    pub alpha: Scalar,
}

/// Try the zero-generator coefficients 1/2 and 2 in turn and return the
/// first pullback that validates on the default window. (Only 2 is
/// compatible with the bracket `[l_0, l_2] = 2 l_2` once `l_1` acts
/// nontrivially; both candidates are kept so the discrepancy stays visible
/// in the outcome.)
pub fn psi_pullback(l: &TruncatedModule) -> Result<PsiOutcome, SolvableError> {
    for alpha in [Scalar::ratio(1, 2), Scalar::from_int(2)] {
        let module = psi_with_alpha(&alpha, l)?;
        if validate_module(&module, DEFAULT_WINDOW) {
            return Ok(PsiOutcome { module, alpha });
        }
    }
    Err(SolvableError::NoValidAlpha)
}

/// Outcome of the trichotomy test for a module over the `n = 2` truncation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Classification {
    /// `l_2` acts by zero on the window.
    L2Kills,
    /// `l_1` acts by zero on the window.
    L1Kills,
    /// The square of `l_1` equals this multiple of `l_2` on the window.
    ScalarRelation(Scalar),
    /// None of the three shapes holds at this truncation.
    Inconclusive,
}

/// Decide which of the three shapes a module over the `n = 2` truncation
/// has, testing in order: `l_2` kills, `l_1` kills, an exact scalar with
/// `l_1^2 = scalar * l_2` solved componentwise on the window.
pub fn classify_c_module(m: &TruncatedModule, window: usize) -> Classification {
    assert_eq!(m.algebra().n(), 2, "classification expects the n = 2 truncation");
    if (0..window).all(|d| m.act(2, d).is_empty()) {
        return Classification::L2Kills;
    }
    if (0..window).all(|d| m.act(1, d).is_empty()) {
        return Classification::L1Kills;
    }
    // Some rho(l_2) e_d is nonzero; the first nonzero component pins the
    // only possible scalar, the rest of the window must confirm it.
    let mut lambda: Option<Scalar> = None;
    for d in 0..window {
        let w = m.act(2, d);
        if let Some((t, c)) = w.iter().next() {
            let u = m.act_vec(1, &m.act(1, d));
            let candidate = &u.get(t).cloned().unwrap_or_else(Scalar::zero) / c;
            lambda = Some(candidate);
            break;
        }
    }
    let lambda = lambda.expect("l2-kills case already excluded");
    for d in 0..window {
        let u = m.act_vec(1, &m.act(1, d));
        let mut expected = m.act(2, d);
        for c in expected.values_mut() {
            *c *= lambda.clone();
        }
        expected.retain(|_, c| !c.is_zero());
        if u != expected {
            return Classification::Inconclusive;
        }
    }
    Classification::ScalarRelation(lambda)
}
