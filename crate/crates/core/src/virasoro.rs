//! Virasoro operators on the Fock space and their commutation relations.
//!
//! `L_n(alpha)` is the normal-ordered quadratic expression in Heisenberg
//! operators contracted against the diagonal pushforward of `alpha`. For
//! `n != 0` the two factors of each term commute exactly, so the printed
//! order is already normal; `L_0` is normal-ordered explicitly (annihilation
//! applied first), since the as-printed operator order would produce a
//! divergent constant on every state.
//!
//! Koszul conventions for the quadratic expressions on models with odd
//! cohomology are not pinned down by the Heisenberg relations alone, so
//! everything here rejects models with odd classes; the Heisenberg layer
//! itself is checked in the odd case.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::fock::{apply_basis_op, enumerate_basis, weight, FockState, Monomial};
use crate::linalg;
use crate::rat::Rat;
use crate::report::CheckReport;
use crate::surface::{Elem, FrobeniusModel};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VirasoroError {
    #[error("virasoro operators require an even-cohomology model (b1 = b3 = 0)")]
    OddCohomology,
    #[error("integration pairing is singular")]
    SingularPairing,
}

/// `L_n(alpha)`: level and the tensor legs of `delta_*(alpha)`.
#[derive(Clone, Debug)]
pub struct VirasoroOp {
    pub level: i32,
    legs: Vec<(usize, usize, Rat)>,
}

/// Builds `L_n(alpha)` for an even-cohomology model.
pub fn virasoro_op(
    model: &FrobeniusModel,
    level: i32,
    alpha: &Elem,
) -> Result<VirasoroOp, VirasoroError> {
    if model.has_odd_classes() {
        return Err(VirasoroError::OddCohomology);
    }
    let legs = crate::fock::diagonal_pushforward(model, alpha)
        .map_err(|_| VirasoroError::SingularPairing)?;
    Ok(VirasoroOp { level, legs })
}

/// `s_l`: +1 on annihilation levels, `(-1)^{|l|-1}` on creation levels.
/// Rescaling the creation side by this untwists the Heisenberg commutator
/// to `n delta_{n,-m} integral(ab)`.
fn creation_twist(level: i32) -> i64 {
    if level >= 0 || level % 2 != 0 {
        1
    } else {
        -1
    }
}

/// Immutable evaluation data shared across states and threads.
struct Shared<'a> {
    model: &'a FrobeniusModel,
    pairing: linalg::Mat,
    parities: Vec<bool>,
    /// Diagonal legs of every basis class.
    delta: Vec<Vec<(usize, usize, Rat)>>,
}

impl<'a> Shared<'a> {
    fn new(model: &'a FrobeniusModel) -> Result<Self, VirasoroError> {
        if model.has_odd_classes() {
            return Err(VirasoroError::OddCohomology);
        }
        let dim = model.dim();
        let pairing = model.pairing_matrix();
        if linalg::inverse(&pairing).is_none() {
            return Err(VirasoroError::SingularPairing);
        }
        let parities = (0..dim).map(|i| model.is_odd(i)).collect();
        let delta = (0..dim)
            .map(|c| {
                crate::fock::diagonal_pushforward(model, &model.basis_elem(c))
                    .expect("pairing is nonsingular")
            })
            .collect();
        Ok(Shared { model, pairing, parities, delta })
    }

    fn apply_p_state(&self, n: i32, class: usize, state: &FockState) -> FockState {
        let mut out = FockState::zero();
        for (m, coeff) in state.terms() {
            let part = apply_basis_op(self.model, n, class, m, &self.pairing, &self.parities);
            out.add_scaled(&part, coeff);
        }
        out
    }

    /// `L_n` with explicit legs applied to one basis monomial.
    ///
    /// Normalization: the quadratic expression is built from the rescaled
    /// generators `q_l = s_l p_l` with `s_l = 1` for annihilation and
    /// `s_l = (-1)^{|l|-1}` for creation, which satisfy the untwisted
    /// commutator `[q_n, q_m] = n delta_{n,-m} integral(ab)`. With the
    /// sign-twisted Heisenberg normalization itself the quadratic sum
    /// cannot close onto the Virasoro relations over the rationals (the
    /// contraction factor must be linear in the level), so
    /// `L_n = (1/2) sum_nu :q_nu q_{n-nu}: delta_*` for `n != 0` and
    /// `L_0 = sum_{nu>0} q_{-nu} q_nu delta_*`. The relation checker pins
    /// this choice: it is the unique one reproducing
    /// `(n-m) L_{n+m} + (n^3-n)/12 integral(c_2 a b)`.
    ///
    /// The `nu` range `[n - w, max(w, n-1)]` provably contains every
    /// contributing term at weight `w`: an annihilation factor must hit a
    /// level present in the state, which bounds both factors.
    fn l_mono_with_legs(
        &self,
        n: i32,
        legs: &[(usize, usize, Rat)],
        mono: &Monomial,
    ) -> FockState {
        let w = weight(mono) as i32;
        let mut out = FockState::zero();
        if n == 0 {
            for (i, j, coef) in legs {
                for nu in 1..=w {
                    let t1 = apply_basis_op(self.model, nu, *i, mono, &self.pairing, &self.parities);
                    if t1.is_zero() {
                        continue;
                    }
                    let t2 = self.apply_p_state(-nu, *j, &t1);
                    let sc = if creation_twist(-nu) < 0 { -coef.clone() } else { coef.clone() };
                    out.add_scaled(&t2, &sc);
                }
            }
        } else {
            let half = Rat::new(1, 2);
            for (i, j, coef) in legs {
                let scaled = coef * &half;
                for nu in (n - w)..=w.max(n - 1) {
                    if nu == 0 || nu == n {
                        continue;
                    }
                    let t1 =
                        apply_basis_op(self.model, n - nu, *j, mono, &self.pairing, &self.parities);
                    if t1.is_zero() {
                        continue;
                    }
                    let t2 = self.apply_p_state(nu, *i, &t1);
                    let sgn = creation_twist(nu) * creation_twist(n - nu);
                    let sc = if sgn < 0 { -scaled.clone() } else { scaled.clone() };
                    out.add_scaled(&t2, &sc);
                }
            }
        }
        out
    }
}

/// Per-task evaluator: memoizes `L_n(e_c)` on basis monomials.
struct Evaluator<'a, 'b> {
    shared: &'b Shared<'a>,
    memo: HashMap<(i32, u8, Monomial), FockState>,
}

impl<'a, 'b> Evaluator<'a, 'b> {
    fn new(shared: &'b Shared<'a>) -> Self {
        Evaluator { shared, memo: HashMap::new() }
    }

    fn l_mono(&mut self, n: i32, c: u8, mono: &Monomial) -> FockState {
        let key = (n, c, mono.clone());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let out = self
            .shared
            .l_mono_with_legs(n, &self.shared.delta[c as usize], mono);
        self.memo.insert(key, out.clone());
        out
    }

    fn l_state(&mut self, n: i32, c: u8, state: &FockState) -> FockState {
        let terms: Vec<(Monomial, Rat)> =
            state.terms().map(|(m, r)| (m.clone(), r.clone())).collect();
        let mut out = FockState::zero();
        for (m, coeff) in terms {
            let part = self.l_mono(n, c, &m);
            out.add_scaled(&part, &coeff);
        }
        out
    }

    /// `L_n(alpha)` for a general element, by linearity in the class.
    fn l_elem(&mut self, n: i32, alpha: &Elem, state: &FockState) -> FockState {
        let mut out = FockState::zero();
        for (c, coeff) in alpha.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let part = self.l_state(n, c as u8, state);
            out.add_scaled(&part, coeff);
        }
        out
    }
}

/// Applies `L_n(alpha)` to a state.
pub fn apply_virasoro(
    model: &FrobeniusModel,
    op: &VirasoroOp,
    state: &FockState,
) -> Result<FockState, VirasoroError> {
    let shared = Shared::new(model)?;
    let mut out = FockState::zero();
    for (m, coeff) in state.terms() {
        let part = shared.l_mono_with_legs(op.level, &op.legs, m);
        out.add_scaled(&part, coeff);
    }
    Ok(out)
}

/// The central coefficient `(n^3 - n)/12` of the relation.
pub fn central_coefficient(n: i32) -> Rat {
    let n = n as i64;
    Rat::new(n * n * n - n, 12)
}

/// Verifies
/// `[L_n(a), L_m(b)] = (n-m) L_{n+m}(ab) + delta_{n,-m} (n^3-n)/12 integral(c_2 a b) id`
/// exactly on every basis state of weight `<= weight_bound`, for all
/// `|n|, |m| <= level_bound` and the given class pairs (`None` = all basis
/// class pairs). Each unordered operator pair is verified once; the
/// transposed bracket is the antisymmetric flip. Models with odd cohomology
/// are rejected.
pub fn check_virasoro_relations(
    model: &FrobeniusModel,
    level_bound: u32,
    weight_bound: u32,
    class_pairs: Option<&[(usize, usize)]>,
) -> Result<CheckReport, VirasoroError> {
    let shared = Shared::new(model)?;
    let dim = model.dim();
    let pairs: Vec<(usize, usize)> = match class_pairs {
        Some(p) => p.to_vec(),
        None => (0..dim).flat_map(|a| (0..dim).map(move |b| (a, b))).collect(),
    };
    let states = enumerate_basis(model, weight_bound);
    let levels: Vec<i32> = (-(level_bound as i32)..=level_bound as i32).collect();

    let per_state: Vec<(u64, Vec<String>)> = states
        .par_iter()
        .map(|v| check_virasoro_on_state(&shared, v, &levels, &pairs))
        .collect();

    let mut combos = 0u64;
    let mut failures: Vec<String> = Vec::new();
    for (c, f) in per_state {
        combos += c;
        failures.extend(f);
    }

    let mut report = CheckReport { entries: Vec::new(), combinations_checked: combos };
    for (ni, &n) in levels.iter().enumerate() {
        for &m in &levels[ni..] {
            let params = format!(
                "[L_n(a), L_m(b)] with n={n}, m={m} (and transpose), {} class pairs, weight <= {weight_bound}",
                pairs.len()
            );
            let fails: Vec<&String> = failures
                .iter()
                .filter(|w| w.starts_with(&format!("[{n},{m}] ")))
                .collect();
            if fails.is_empty() {
                report.push_pass("virasoro", params);
            } else {
                report.push_fail("virasoro", params, fails[0].clone());
            }
        }
    }
    Ok(report)
}

fn check_virasoro_on_state(
    shared: &Shared<'_>,
    v: &Monomial,
    levels: &[i32],
    pairs: &[(usize, usize)],
) -> (u64, Vec<String>) {
    let model = shared.model;
    let mut eval = Evaluator::new(shared);
    let vstate = FockState::basis(v.clone());
    let euler = model.euler_class().clone();
    let mut combos = 0u64;
    let mut failures = Vec::new();

    for (ni, &n) in levels.iter().enumerate() {
        for &m in &levels[ni..] {
            for &(a, b) in pairs {
                if n == m && a > b {
                    continue;
                }
                combos += 1;
                let first_b = eval.l_state(m, b as u8, &vstate);
                let first_a = eval.l_state(n, a as u8, &vstate);
                let mut bracket = eval.l_state(n, a as u8, &first_b);
                let second = eval.l_state(m, b as u8, &first_a);
                bracket.add_scaled(&second, &Rat::from_int(-1));

                let ab = model.mul_basis(a, b).clone();
                let mut expected = eval
                    .l_elem(n + m, &ab, &vstate)
                    .scaled(&Rat::from_int((n - m) as i64));
                if n == -m {
                    let c2ab = model.mul(&euler, &ab);
                    let central = central_coefficient(n) * model.integral_of(&c2ab);
                    expected.add_scaled(&vstate, &central);
                }
                if bracket != expected {
                    failures.push(format!(
                        "[{n},{m}] a={a} b={b} state={v:?}: got {bracket:?}, expected {expected:?}"
                    ));
                }
            }
        }
    }
    (combos, failures)
}
