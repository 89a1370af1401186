//! Reduction operators relative to `X^(m)`, the θ bijection with
//! subspaces, the lattice (∧, ∨, ⪯), confluence of pairs, and the
//! distinguished confluence-algebra elements σ, γ₁, γ₂, λ and Λ.
//!
//! Operators are stored by their action on basis words; rows that agree
//! with the fallback (identity or zero) are implicit, which keeps the
//! degree-8 computations cheap. Alternating products of operators are
//! represented with the same type even though the intermediate
//! compositions are not themselves projectors.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use num::BigRational;
use num::{One, Zero};

use crate::error::KoszulError;
use crate::linalg::Subspace;
use crate::word::{Alphabet, HomogPoly, Word};

/// Behavior on words with no explicit row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fallback {
    Identity,
    Zero,
}

#[derive(Debug, Clone)]
pub struct ReductionOperator {
    alphabet: Alphabet,
    degree: usize,
    fallback: Fallback,
    rows: BTreeMap<Word, HomogPoly>,
}

impl ReductionOperator {
    pub fn identity(alphabet: &Alphabet, degree: usize) -> Self {
        ReductionOperator {
            alphabet: alphabet.clone(),
            degree,
            fallback: Fallback::Identity,
            rows: BTreeMap::new(),
        }
    }

    pub fn zero(alphabet: &Alphabet, degree: usize) -> Self {
        ReductionOperator {
            alphabet: alphabet.clone(),
            degree,
            fallback: Fallback::Zero,
            rows: BTreeMap::new(),
        }
    }

    pub fn from_rows(
        alphabet: &Alphabet,
        degree: usize,
        fallback: Fallback,
        rows: BTreeMap<Word, HomogPoly>,
    ) -> Self {
        let mut op = ReductionOperator {
            alphabet: alphabet.clone(),
            degree,
            fallback,
            rows,
        };
        op.normalize();
        op
    }

    fn normalize(&mut self) {
        let fb = self.fallback;
        self.rows.retain(|w, p| match fb {
            Fallback::Identity => !p.is_word(w),
            Fallback::Zero => !p.is_zero(),
        });
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Rows that differ from the identity, in descending word order.
    pub fn nontrivial_rows(&self) -> Vec<(Word, HomogPoly)> {
        match self.fallback {
            Fallback::Identity => {
                let mut v: Vec<_> = self.rows.iter().map(|(w, p)| (w.clone(), p.clone())).collect();
                v.sort_by(|a, b| b.0.cmp(&a.0));
                v
            }
            Fallback::Zero => {
                let mut v = Vec::new();
                for w in self.alphabet.words_desc(self.degree) {
                    let img = self.apply_word(&w);
                    if !img.is_word(&w) {
                        v.push((w, img));
                    }
                }
                v
            }
        }
    }

    pub fn apply_word(&self, w: &Word) -> HomogPoly {
        match self.rows.get(w) {
            Some(p) => p.clone(),
            None => match self.fallback {
                Fallback::Identity => HomogPoly::monomial(w.clone()),
                Fallback::Zero => HomogPoly::zero(self.degree),
            },
        }
    }

    pub fn apply(&self, f: &HomogPoly) -> HomogPoly {
        let mut out = HomogPoly::zero(self.degree);
        for (w, c) in f.terms() {
            out = out.add_scaled(c, &self.apply_word(w));
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ReductionOperator) -> ReductionOperator {
        debug_assert_eq!(self.degree, other.degree);
        let fallback = match (self.fallback, other.fallback) {
            (Fallback::Identity, Fallback::Identity) => Fallback::Identity,
            _ => Fallback::Zero,
        };
        let mut keys: BTreeSet<&Word> = self.rows.keys().collect();
        keys.extend(other.rows.keys());
        let mut rows = BTreeMap::new();
        for w in keys {
            rows.insert(w.clone(), self.apply(&other.apply_word(w)));
        }
        ReductionOperator::from_rows(&self.alphabet, self.degree, fallback, rows)
    }

    pub fn is_projector(&self) -> bool {
        self.rows
            .iter()
            .all(|(_, p)| self.apply(p) == *p)
    }

    /// Every word maps to itself, to zero, or to a combination with a
    /// strictly smaller leading word.
    pub fn strict_descent_ok(&self) -> bool {
        for (w, p) in &self.rows {
            if p.is_word(w) || p.is_zero() {
                continue;
            }
            match p.leading() {
                Ok((lm, _)) => {
                    if lm >= w {
                        return false;
                    }
                }
                Err(_) => {}
            }
        }
        true
    }

    pub fn is_reduction_operator(&self) -> bool {
        self.is_projector() && self.strict_descent_ok()
    }

    /// Kernel as a canonical subspace. Only meaningful for projectors.
    pub fn kernel(&self) -> Subspace {
        let mut gens: Vec<HomogPoly> = Vec::new();
        match self.fallback {
            Fallback::Identity => {
                for (w, p) in &self.rows {
                    gens.push(HomogPoly::monomial(w.clone()).sub(p));
                }
            }
            Fallback::Zero => {
                for w in self.alphabet.words_desc(self.degree) {
                    let p = self.apply_word(&w);
                    if !p.is_word(&w) {
                        gens.push(HomogPoly::monomial(w).sub(&p));
                    }
                }
            }
        }
        Subspace::span(self.degree, &gens).expect("kernel generators share degree")
    }

    /// Image dimension; `dim ker + dim im = |X^(m)|` for projectors.
    pub fn image_dim(&self) -> usize {
        self.alphabet.len().pow(self.degree as u32) - self.kernel().dim()
    }

    /// `id^(⊗left) ⊗ self ⊗ id^(⊗right)`.
    pub fn tensor_with_identity(&self, left: usize, right: usize) -> ReductionOperator {
        let degree = left + self.degree + right;
        let mut rows = BTreeMap::new();
        let fallback = match self.fallback {
            Fallback::Identity => Fallback::Identity,
            // A zero block makes every word map through it; enumerate all.
            Fallback::Zero => Fallback::Zero,
        };
        let mids: Vec<&Word> = match self.fallback {
            Fallback::Identity => self.rows.keys().collect(),
            Fallback::Zero => return self.tensor_zero_block(left, right),
        };
        for mid in mids {
            let img = self.apply_word(mid);
            for lw in self.alphabet.words_desc(left) {
                for rw in self.alphabet.words_desc(right) {
                    let w = lw.concat(mid).concat(&rw);
                    let p = crate::word::tensor_expand(
                        &crate::word::tensor_expand(&HomogPoly::monomial(lw.clone()), &img),
                        &HomogPoly::monomial(rw.clone()),
                    );
                    rows.insert(w, p);
                }
            }
        }
        ReductionOperator::from_rows(&self.alphabet, degree, fallback, rows)
    }

    fn tensor_zero_block(&self, left: usize, right: usize) -> ReductionOperator {
        let degree = left + self.degree + right;
        let mut rows = BTreeMap::new();
        for lw in self.alphabet.words_desc(left) {
            for mid in self.alphabet.words_desc(self.degree) {
                let img = self.apply_word(&mid);
                for rw in self.alphabet.words_desc(right) {
                    let w = lw.concat(&mid).concat(&rw);
                    let p = crate::word::tensor_expand(
                        &crate::word::tensor_expand(&HomogPoly::monomial(lw.clone()), &img),
                        &HomogPoly::monomial(rw.clone()),
                    );
                    rows.insert(w, p);
                }
            }
        }
        ReductionOperator::from_rows(&self.alphabet, degree, Fallback::Zero, rows)
    }
}

impl PartialEq for ReductionOperator {
    fn eq(&self, other: &Self) -> bool {
        if self.degree != other.degree {
            return false;
        }
        if self.fallback == other.fallback {
            return self.rows == other.rows;
        }
        // Differing fallbacks: compare on every basis word.
        self.alphabet
            .words_desc(self.degree)
            .iter()
            .all(|w| self.apply_word(w) == other.apply_word(w))
    }
}

impl Eq for ReductionOperator {}

/// θ: operator to kernel.
pub fn theta(t: &ReductionOperator) -> Subspace {
    t.kernel()
}

/// θ⁻¹: the unique reduction operator with the given kernel. Each
/// echelon basis vector `e` (monic, pivot `lm(e)`) gives the row
/// `lm(e) ↦ lm(e) − e`; non-pivot words are fixed.
pub fn theta_inv(alphabet: &Alphabet, w: &Subspace) -> ReductionOperator {
    let mut rows = BTreeMap::new();
    for e in w.basis() {
        let lm = e.leading().expect("nonzero basis vector").0.clone();
        let row = HomogPoly::monomial(lm.clone()).sub(e);
        rows.insert(lm, row);
    }
    ReductionOperator::from_rows(alphabet, w.degree(), Fallback::Identity, rows)
}

fn check_degrees(t1: &ReductionOperator, t2: &ReductionOperator) -> Result<(), KoszulError> {
    if t1.degree() != t2.degree() {
        return Err(KoszulError::DegreeMismatch {
            left: t1.degree(),
            right: t2.degree(),
        });
    }
    Ok(())
}

/// `T₁ ∧ T₂ = θ⁻¹(ker T₁ + ker T₂)`.
pub fn meet(
    t1: &ReductionOperator,
    t2: &ReductionOperator,
) -> Result<ReductionOperator, KoszulError> {
    check_degrees(t1, t2)?;
    let k = theta(t1).sum(&theta(t2))?;
    Ok(theta_inv(t1.alphabet(), &k))
}

/// `T₁ ∨ T₂ = θ⁻¹(ker T₁ ∩ ker T₂)`.
pub fn join(
    t1: &ReductionOperator,
    t2: &ReductionOperator,
) -> Result<ReductionOperator, KoszulError> {
    check_degrees(t1, t2)?;
    let k = theta(t1).intersect(&theta(t2))?;
    Ok(theta_inv(t1.alphabet(), &k))
}

/// `T₁ ⪯ T₂ ⇔ ker(T₂) ⊆ ker(T₁)`.
pub fn leq(t1: &ReductionOperator, t2: &ReductionOperator) -> Result<bool, KoszulError> {
    check_degrees(t1, t2)?;
    Ok(theta(t1).includes(&theta(t2)))
}

/// `⟨T_a, T_b⟩^k`: the k-factor alternating composition with rightmost
/// factor `T_b` (k=1 → T_b; k=2 → T_a∘T_b; k=3 → T_b∘T_a∘T_b, …).
pub fn alternating_product(
    t_a: &ReductionOperator,
    t_b: &ReductionOperator,
    k: usize,
) -> Result<ReductionOperator, KoszulError> {
    check_degrees(t_a, t_b)?;
    if k == 0 {
        return Err(KoszulError::Input("alternating product needs k >= 1".into()));
    }
    let mut acc = t_b.clone();
    for i in 2..=k {
        let factor = if i % 2 == 0 { t_a } else { t_b };
        acc = factor.compose(&acc);
    }
    Ok(acc)
}

#[derive(Debug, Clone)]
pub struct ConfluenceWitness {
    pub confluent: bool,
    /// Minimal k with `⟨T₁,T₂⟩^k = ⟨T₂,T₁⟩^k` when confluent; the
    /// stabilization index otherwise.
    pub k: usize,
    pub limit: Option<ReductionOperator>,
    /// Index at which both alternating sequences stopped changing.
    pub stabilized_at: usize,
}

/// Searches k = 1, 2, … for `⟨T₁,T₂⟩^k = ⟨T₂,T₁⟩^k`. Reports
/// non-confluence only after both alternating sequences have stabilized
/// (prepending the next factor changes nothing for two consecutive
/// steps); errors with `UndeterminedAtKMax` when neither happens by
/// `k_max`.
pub fn confluence(
    t1: &ReductionOperator,
    t2: &ReductionOperator,
    k_max: usize,
) -> Result<ConfluenceWitness, KoszulError> {
    check_degrees(t1, t2)?;
    let mut a = t2.clone(); // ⟨T1,T2⟩^1
    let mut b = t1.clone(); // ⟨T2,T1⟩^1
    let mut a_streak = 0usize;
    let mut b_streak = 0usize;
    let mut k = 1usize;
    loop {
        if a == b {
            return Ok(ConfluenceWitness {
                confluent: true,
                k,
                limit: Some(a),
                stabilized_at: k,
            });
        }
        if a_streak >= 2 && b_streak >= 2 {
            return Ok(ConfluenceWitness {
                confluent: false,
                k,
                limit: None,
                stabilized_at: k,
            });
        }
        if k >= k_max {
            return Err(KoszulError::UndeterminedAtKMax { k_max });
        }
        k += 1;
        let fa = if k % 2 == 0 { t1 } else { t2 };
        let fb = if k % 2 == 0 { t2 } else { t1 };
        let next_a = fa.compose(&a);
        let next_b = fb.compose(&b);
        a_streak = if next_a == a { a_streak + 1 } else { 0 };
        b_streak = if next_b == b { b_streak + 1 } else { 0 };
        a = next_a;
        b = next_b;
    }
}

/// Linear combination `c0·id + Σ cᵢ·opᵢ`, materialized with an exact
/// fallback when the off-row behavior is uniformly zero or the identity.
fn lincomb(
    alphabet: &Alphabet,
    degree: usize,
    c0: &BigRational,
    parts: &[(BigRational, &ReductionOperator)],
) -> ReductionOperator {
    // Scalar acting on words not listed in any row.
    let mut default_scalar = c0.clone();
    for (c, op) in parts {
        if op.fallback == Fallback::Identity {
            default_scalar += c;
        }
    }
    let fallback = if default_scalar.is_zero() {
        Fallback::Zero
    } else if default_scalar.is_one() {
        Fallback::Identity
    } else {
        // No compact fallback: list every word explicitly below.
        Fallback::Zero
    };
    let explicit_everywhere = !default_scalar.is_zero() && !default_scalar.is_one();
    let mut keys: BTreeSet<Word> = BTreeSet::new();
    if explicit_everywhere {
        keys.extend(alphabet.words_desc(degree));
    } else {
        for (_, op) in parts {
            keys.extend(op.rows.keys().cloned());
        }
    }
    let mut rows = BTreeMap::new();
    for w in keys {
        let mut p = HomogPoly::monomial(w.clone()).scale(c0);
        for (c, op) in parts {
            p = p.add_scaled(c, &op.apply_word(&w));
        }
        rows.insert(w, p);
    }
    ReductionOperator::from_rows(alphabet, degree, fallback, rows)
}

/// A confluent pair with a chosen exponent and the images of the four
/// distinguished confluence-algebra elements under the P-representation.
#[derive(Debug, Clone)]
pub struct PRepresentation {
    pub k: usize,
    pub sigma: ReductionOperator,
    pub gamma1: ReductionOperator,
    pub gamma2: ReductionOperator,
    /// `id − φ(λ) = σ + γ₁ + γ₂` (equals T₁∨T₂ after the self-check).
    pub one_minus_lambda: ReductionOperator,
}

fn gamma_image(
    first: &ReductionOperator,
    second: &ReductionOperator,
    k: usize,
) -> Result<ReductionOperator, KoszulError> {
    // γ₁ for (T1,T2) is (1−s₂)·Σ_{i odd, 1≤i≤k−1} ⟨s₂,s₁⟩^i with
    // s₁ = first, s₂ = second.
    let alphabet = first.alphabet();
    let degree = first.degree();
    let mut sum_parts: Vec<ReductionOperator> = Vec::new();
    let mut i = 1;
    while i <= k.saturating_sub(1) {
        sum_parts.push(alternating_product(second, first, i)?);
        i += 2;
    }
    if sum_parts.is_empty() {
        return Ok(ReductionOperator::zero(alphabet, degree));
    }
    let one = BigRational::one();
    let parts: Vec<(BigRational, &ReductionOperator)> =
        sum_parts.iter().map(|op| (one.clone(), op)).collect();
    let m = lincomb(alphabet, degree, &BigRational::zero(), &parts);
    let tm = second.compose(&m);
    Ok(lincomb(
        alphabet,
        degree,
        &BigRational::zero(),
        &[(BigRational::one(), &m), (-BigRational::one(), &tm)],
    ))
}

/// Builds the P-representation images for a confluent pair. The exponent
/// starts at the minimal witness and is escalated through further valid
/// witnesses until the identities `φ(σ) = T₁∧T₂` and
/// `id − φ(λ) = T₁∨T₂` hold.
pub fn p_representation(
    t1: &ReductionOperator,
    t2: &ReductionOperator,
    k_max: usize,
) -> Result<PRepresentation, KoszulError> {
    check_degrees(t1, t2)?;
    let witness = confluence(t1, t2, k_max)?;
    if !witness.confluent {
        return Err(KoszulError::Precondition(
            "pair is not confluent; no P-representation".into(),
        ));
    }
    let expected_meet = meet(t1, t2)?;
    let expected_join = join(t1, t2)?;
    let cap = witness.stabilized_at + 2;
    let mut last_err_k = witness.k;
    for k in witness.k..=cap.max(witness.k) {
        // Every exponent used must itself be a witness.
        let a = alternating_product(t1, t2, k)?;
        let b = alternating_product(t2, t1, k)?;
        if a != b {
            continue;
        }
        let sigma = a;
        let gamma1 = gamma_image(t1, t2, k)?;
        let gamma2 = gamma_image(t2, t1, k)?;
        let one_minus_lambda = lincomb(
            t1.alphabet(),
            t1.degree(),
            &BigRational::zero(),
            &[
                (BigRational::one(), &sigma),
                (BigRational::one(), &gamma1),
                (BigRational::one(), &gamma2),
            ],
        );
        if sigma == expected_meet && one_minus_lambda == expected_join {
            return Ok(PRepresentation {
                k,
                sigma,
                gamma1,
                gamma2,
                one_minus_lambda,
            });
        }
        last_err_k = k;
    }
    Err(KoszulError::RepresentationIdentities { k: last_err_k })
}

/// Λ: the alternating product of the complements, `⟨id−T₂, id−T₁⟩^k`.
/// Verifies that both bracket orders agree and that the expansion
/// identity from the side-confluence argument holds exactly.
pub fn complemented_alternating(
    t1: &ReductionOperator,
    t2: &ReductionOperator,
    k: usize,
) -> Result<ReductionOperator, KoszulError> {
    check_degrees(t1, t2)?;
    let alphabet = t1.alphabet();
    let degree = t1.degree();
    let one = BigRational::one();
    let u1 = lincomb(alphabet, degree, &one, &[(-one.clone(), t1)]);
    let u2 = lincomb(alphabet, degree, &one, &[(-one.clone(), t2)]);
    let lam = alternating_product(&u2, &u1, k)?;
    let lam_swapped = alternating_product(&u1, &u2, k)?;
    if lam != lam_swapped {
        return Err(KoszulError::Invariant(
            "complemented alternating products disagree".into(),
        ));
    }
    // Λ = id + Σ_{i=1}^{k−1} (−1)^i (⟨T₁,T₂⟩^i + ⟨T₂,T₁⟩^i) + (−1)^k ⟨T₂,T₁⟩^k
    let mut owned: Vec<(BigRational, ReductionOperator)> = Vec::new();
    for i in 1..k {
        let s = if i % 2 == 0 { one.clone() } else { -one.clone() };
        owned.push((s.clone(), alternating_product(t1, t2, i)?));
        owned.push((s, alternating_product(t2, t1, i)?));
    }
    let s_k = if k % 2 == 0 { one.clone() } else { -one.clone() };
    owned.push((s_k, alternating_product(t2, t1, k)?));
    let parts: Vec<(BigRational, &ReductionOperator)> =
        owned.iter().map(|(c, op)| (c.clone(), op)).collect();
    let expansion = lincomb(alphabet, degree, &one, &parts);
    if lam != expansion {
        return Err(KoszulError::Invariant(
            "complemented alternating expansion identity failed".into(),
        ));
    }
    Ok(lam)
}
