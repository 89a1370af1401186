//! N-homogeneous presentations: validation and interreduction, normal
//! forms, the operator S, critical branchings, and the side-confluence
//! and extra-condition decisions.

use std::collections::{HashMap, HashSet};
use std::sync::RwLock;

use serde::Serialize;

use crate::error::KoszulError;
use crate::linalg::{tensor_space_words, tensor_words_space, Subspace};
use crate::redop::{confluence, theta_inv, ReductionOperator};
use crate::word::{Alphabet, HomogPoly, Word};

/// An overlap of two relation leading words: `w1·w2 = lm(f)` and
/// `w2·w3 = lm(g)` with all three words non-empty. The source
/// `w1·w2·w3` has length between N+1 and 2N−1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalBranching {
    pub w1: Word,
    pub w2: Word,
    pub w3: Word,
    /// Index of the relation whose leading word is the prefix `w1·w2`.
    pub f: usize,
    /// Index of the relation whose leading word is the suffix `w2·w3`.
    pub g: usize,
}

impl CriticalBranching {
    pub fn source(&self) -> Word {
        self.w1.concat(&self.w2).concat(&self.w3)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfluenceReport {
    pub side_confluent: bool,
    /// `(total degree, witness k)` for each degree N+1 … 2N−1 where the
    /// pair is confluent.
    pub witnesses: Vec<(usize, usize)>,
    pub extra_condition: bool,
    /// First total degree at which the pair fails to be confluent.
    pub failing_degree: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtraConditionReport {
    pub holds: bool,
    /// Per shift m in 2 … N−1: `(m, dim of the two-sided intersection,
    /// dim of the middle space, contained?)`.
    pub shifts: Vec<(usize, usize, usize, bool)>,
    /// A vector of the intersection outside the middle space, printed
    /// in the alphabet, when the condition fails.
    pub witness: Option<String>,
}

#[derive(Debug)]
pub struct Presentation {
    alphabet: Alphabet,
    n: usize,
    relations: Vec<HomogPoly>,
    rbar: Subspace,
    s_op: ReductionOperator,
    lm_set: HashSet<Word>,
    nf_cache: RwLock<HashMap<Word, HomogPoly>>,
    ideal_cache: RwLock<HashMap<usize, Subspace>>,
}

impl Presentation {
    /// Validates the raw relations, scales them monic, and interreduces
    /// them. Relations all live in one degree, so interreduction to a
    /// reduced presentation (distinct leading words, tails irreducible)
    /// is exactly the reduced echelon basis of their span.
    pub fn load_and_interreduce(
        alphabet: Alphabet,
        n: usize,
        raw: Vec<HomogPoly>,
    ) -> Result<Presentation, KoszulError> {
        if n < 2 {
            return Err(KoszulError::Input(format!(
                "homogeneity degree N must be at least 2, got {n}"
            )));
        }
        for (i, r) in raw.iter().enumerate() {
            if r.is_zero() {
                return Err(KoszulError::Input(format!("relation {} is zero", i + 1)));
            }
            if r.degree() != n {
                return Err(KoszulError::Input(format!(
                    "relation {} has degree {}, expected N = {}",
                    i + 1,
                    r.degree(),
                    n
                )));
            }
        }
        let rbar = Subspace::span(n, &raw)?;
        let relations: Vec<HomogPoly> = rbar.basis().to_vec();
        let s_op = theta_inv(&alphabet, &rbar);
        let lm_set = relations
            .iter()
            .map(|r| r.leading().expect("nonzero relation").0.clone())
            .collect();
        Ok(Presentation {
            alphabet,
            n,
            relations,
            rbar,
            s_op,
            lm_set,
            nf_cache: RwLock::new(HashMap::new()),
            ideal_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn relations(&self) -> &[HomogPoly] {
        &self.relations
    }

    pub fn rbar(&self) -> &Subspace {
        &self.rbar
    }

    /// The operator S of the presentation: `ker S = R̄`, normal words of
    /// length N are fixed, leading words map below themselves.
    pub fn s_op(&self) -> &ReductionOperator {
        &self.s_op
    }

    /// Position of the leftmost length-N window of `w` that is a
    /// relation leading word.
    fn reducible_window(&self, w: &Word) -> Option<usize> {
        let m = w.len();
        if m < self.n {
            return None;
        }
        (0..=m - self.n).find(|&i| self.lm_set.contains(&w.subword(i, self.n)))
    }

    pub fn is_normal_word(&self, w: &Word) -> bool {
        self.reducible_window(w).is_none()
    }

    pub fn normal_words(&self, m: usize) -> Vec<Word> {
        self.alphabet
            .words_desc(m)
            .into_iter()
            .filter(|w| self.is_normal_word(w))
            .collect()
    }

    /// Normal form of a single word, leftmost-outermost strategy,
    /// memoized. Terminates by strict descent of the leading word.
    pub fn normal_form_word(&self, w: &Word) -> HomogPoly {
        if let Some(p) = self.nf_cache.read().unwrap().get(w) {
            return p.clone();
        }
        let result = match self.reducible_window(w) {
            None => HomogPoly::monomial(w.clone()),
            Some(i) => {
                let window = w.subword(i, self.n);
                let prefix = w.subword(0, i);
                let suffix = w.subword(i + self.n, w.len() - i - self.n);
                let reduced = self.s_op.apply_word(&window);
                let mut out = HomogPoly::zero(w.len());
                for (mid, c) in reduced.terms() {
                    let next = prefix.concat(mid).concat(&suffix);
                    out = out.add_scaled(c, &self.normal_form_word(&next));
                }
                out
            }
        };
        self.nf_cache
            .write()
            .unwrap()
            .insert(w.clone(), result.clone());
        result
    }

    /// Normal form of a homogeneous polynomial: no relation leading word
    /// occurs as a factor of any term of the result. Unique under
    /// side-confluence.
    pub fn normal_form(&self, f: &HomogPoly) -> HomogPoly {
        let mut out = HomogPoly::zero(f.degree());
        for (w, c) in f.terms() {
            out = out.add_scaled(c, &self.normal_form_word(w));
        }
        out
    }

    /// All overlaps of relation leading words, ordered by source word,
    /// descending.
    pub fn critical_branchings(&self) -> Vec<CriticalBranching> {
        let mut out = Vec::new();
        for (fi, f) in self.relations.iter().enumerate() {
            let lmf = f.leading().expect("nonzero").0;
            for (gi, g) in self.relations.iter().enumerate() {
                let lmg = g.leading().expect("nonzero").0;
                // Proper overlap: a length-o suffix of lm(f) equals a
                // length-o prefix of lm(g), 1 ≤ o ≤ N−1.
                for o in 1..self.n {
                    let suffix = lmf.subword(self.n - o, o);
                    let prefix = lmg.subword(0, o);
                    if suffix == prefix {
                        out.push(CriticalBranching {
                            w1: lmf.subword(0, self.n - o),
                            w2: suffix,
                            w3: lmg.subword(o, self.n - o),
                            f: fi,
                            g: gi,
                        });
                    }
                }
            }
        }
        out.sort_by(|a, b| b.source().cmp(&a.source()));
        out
    }

    /// For each m in 1 … N−1, decides whether `S⊗id^(⊗m)` and
    /// `id^(⊗m)⊗S` form a confluent pair on `X^(N+m)`.
    pub fn check_side_confluence(&self, k_max: usize) -> Result<ConfluenceReport, KoszulError> {
        let mut witnesses = Vec::new();
        let mut failing = None;
        for m in 1..self.n {
            let s1 = self.s_op.tensor_with_identity(0, m);
            let s2 = self.s_op.tensor_with_identity(m, 0);
            let wit = confluence(&s1, &s2, k_max)?;
            if wit.confluent {
                witnesses.push((self.n + m, wit.k));
            } else if failing.is_none() {
                failing = Some(self.n + m);
            }
        }
        let side_confluent = failing.is_none();
        let extra_condition = self.extra_condition_report().holds;
        Ok(ConfluenceReport {
            side_confluent,
            witnesses,
            extra_condition,
            failing_degree: failing,
        })
    }

    /// `(X^(m)⊗R̄) ∩ (R̄⊗X^(m)) ⊆ X^(m−1)⊗R̄⊗X` for 2 ≤ m ≤ N−1;
    /// vacuously true for N = 2.
    pub fn check_extra_condition(&self) -> bool {
        self.extra_condition_report().holds
    }

    pub fn extra_condition_report(&self) -> ExtraConditionReport {
        let mut shifts = Vec::new();
        let mut witness = None;
        for m in 2..self.n {
            let left = tensor_words_space(&self.alphabet, m, &self.rbar);
            let right = tensor_space_words(&self.rbar, &self.alphabet, m);
            let inter = right.intersect(&left).expect("same degree");
            let middle_core = tensor_space_words(
                &tensor_words_space(&self.alphabet, m - 1, &self.rbar),
                &self.alphabet,
                1,
            );
            let contained = middle_core.includes(&inter);
            shifts.push((m, inter.dim(), middle_core.dim(), contained));
            if !contained && witness.is_none() {
                let bad = inter
                    .basis()
                    .iter()
                    .find(|v| !middle_core.contains(v))
                    .expect("non-containment has a basis witness");
                witness = Some(self.alphabet.format_poly(bad));
            }
        }
        ExtraConditionReport {
            holds: shifts.iter().all(|&(_, _, _, ok)| ok),
            shifts,
            witness,
        }
    }

    /// For each critical branching with source `x₁…x_m`, checks that the
    /// window `x_{m−N}…x_{m−1}` (dropping the last letter) is a relation
    /// leading word. Requires side-confluence and the extra-condition.
    pub fn branching_suffix_property(
        &self,
        k_max: usize,
    ) -> Result<Vec<(CriticalBranching, bool)>, KoszulError> {
        let report = self.check_side_confluence(k_max)?;
        if !report.side_confluent {
            return Err(KoszulError::Precondition(
                "branching suffix property requires a side-confluent presentation".into(),
            ));
        }
        if !report.extra_condition {
            return Err(KoszulError::Precondition(
                "branching suffix property requires the extra-condition".into(),
            ));
        }
        let mut out = Vec::new();
        for b in self.critical_branchings() {
            let src = b.source();
            let len = src.len();
            let window = src.subword(len - 1 - self.n, self.n);
            let ok = self.lm_set.contains(&window);
            if !ok {
                return Err(KoszulError::Invariant(format!(
                    "window {} of branching source {} is a normal form",
                    self.alphabet.format_word(&window),
                    self.alphabet.format_word(&src)
                )));
            }
            out.push((b, ok));
        }
        Ok(out)
    }

    /// `I(R)_m`, built from the normal-form rows `{w − nf(w) : w not
    /// normal}`. These are already a reduced echelon basis (pivot w, all
    /// other terms normal words), so no elimination is needed. Correct
    /// whenever normal forms are unique (side-confluence); see
    /// `ideal_component_definitional` for the definition-level build.
    pub fn ideal_component(&self, m: usize) -> Subspace {
        if let Some(s) = self.ideal_cache.read().unwrap().get(&m) {
            return s.clone();
        }
        let space = if m < self.n {
            Subspace::zero(m)
        } else {
            let mut rows = Vec::new();
            for w in self.alphabet.words_desc(m) {
                if !self.is_normal_word(&w) {
                    rows.push(HomogPoly::monomial(w.clone()).sub(&self.normal_form_word(&w)));
                }
            }
            Subspace::from_echelon_unchecked(m, rows)
        };
        self.ideal_cache
            .write()
            .unwrap()
            .insert(m, space.clone());
        space
    }

    /// `I(R)_m = Σ_i X^(i)⊗R̄⊗X^(m−N−i)`, computed from the definition.
    /// Slower; used as an independent cross-check.
    pub fn ideal_component_definitional(&self, m: usize) -> Subspace {
        if m < self.n {
            return Subspace::zero(m);
        }
        let mut acc = Subspace::zero(m);
        for i in 0..=m - self.n {
            let shifted = tensor_words_space(
                &self.alphabet,
                i,
                &tensor_space_words(&self.rbar, &self.alphabet, m - self.n - i),
            );
            acc = acc.sum(&shifted).expect("same degree");
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;

    fn yang_mills() -> Presentation {
        let ab = Alphabet::new(vec!["x1", "x2"]).unwrap();
        let rels = vec![
            parse_poly(&ab, "x2*x1*x1 - 2*x1*x2*x1 + x1*x1*x2").unwrap(),
            parse_poly(&ab, "x2*x2*x1 - 2*x2*x1*x2 + x1*x2*x2").unwrap(),
        ];
        Presentation::load_and_interreduce(ab, 3, rels).unwrap()
    }

    fn xyx() -> Presentation {
        let ab = Alphabet::new(vec!["x", "y"]).unwrap();
        let rels = vec![parse_poly(&ab, "x*y*x").unwrap()];
        Presentation::load_and_interreduce(ab, 3, rels).unwrap()
    }

    fn symmetric_d3() -> Presentation {
        let ab = Alphabet::new(vec!["x1", "x2", "x3"]).unwrap();
        let rels = vec![
            parse_poly(&ab, "x2*x1 - x1*x2").unwrap(),
            parse_poly(&ab, "x3*x1 - x1*x3").unwrap(),
            parse_poly(&ab, "x3*x2 - x2*x3").unwrap(),
        ];
        Presentation::load_and_interreduce(ab, 2, rels).unwrap()
    }

    #[test]
    fn yang_mills_loads_unchanged() {
        let p = yang_mills();
        assert_eq!(p.relations().len(), 2);
        let ab = p.alphabet().clone();
        assert_eq!(
            p.relations()[0],
            parse_poly(&ab, "x2*x2*x1 - 2*x2*x1*x2 + x1*x2*x2").unwrap()
        );
        assert_eq!(
            p.relations()[1],
            parse_poly(&ab, "x2*x1*x1 - 2*x1*x2*x1 + x1*x1*x2").unwrap()
        );
    }

    #[test]
    fn duplicate_relations_collapse() {
        let ab = Alphabet::new(vec!["x1", "x2"]).unwrap();
        let r = parse_poly(&ab, "x2*x1 - x1*x2").unwrap();
        let p = Presentation::load_and_interreduce(
            ab.clone(),
            2,
            vec![r.clone(), r.scale(&num::BigRational::from_integer(2.into()))],
        )
        .unwrap();
        assert_eq!(p.relations().len(), 1);
        assert_eq!(p.relations()[0], r);
    }

    #[test]
    fn rejects_bad_inputs() {
        let ab = Alphabet::new(vec!["x1", "x2"]).unwrap();
        let r2 = parse_poly(&ab, "x2*x1").unwrap();
        assert!(Presentation::load_and_interreduce(ab.clone(), 3, vec![r2.clone()]).is_err());
        assert!(Presentation::load_and_interreduce(ab.clone(), 1, vec![]).is_err());
        let z = HomogPoly::zero(2);
        assert!(Presentation::load_and_interreduce(ab, 2, vec![z]).is_err());
    }

    #[test]
    fn yang_mills_normal_form() {
        let p = yang_mills();
        let ab = p.alphabet().clone();
        let w = Word::from_indices(&[1, 1, 0, 0]);
        let nf = p.normal_form_word(&w);
        assert_eq!(
            nf,
            parse_poly(&ab, "2*x2*x1*x2*x1 - 2*x1*x2*x1*x2 + x1*x1*x2*x2").unwrap()
        );
        // Path independence at the only critical branching: reducing the
        // suffix redex first gives the same result.
        let alt = {
            let reduced = p.s_op().apply_word(&Word::from_indices(&[1, 0, 0]));
            let mut acc = HomogPoly::zero(4);
            for (mid, c) in reduced.terms() {
                let next = Word::from_indices(&[1]).concat(mid);
                acc = acc.add_scaled(c, &p.normal_form_word(&next));
            }
            acc
        };
        assert_eq!(nf, alt);
    }

    #[test]
    fn normal_word_fixed() {
        let p = yang_mills();
        let w = Word::from_indices(&[0, 1, 0, 1]);
        assert!(p.normal_form_word(&w).is_word(&w));
    }

    #[test]
    fn symmetric_normal_form_sorts() {
        let p = symmetric_d3();
        let w = Word::from_indices(&[2, 1, 0]); // x3x2x1
        assert!(p.normal_form_word(&w).is_word(&Word::from_indices(&[0, 1, 2])));
    }

    #[test]
    fn yang_mills_unique_branching() {
        let p = yang_mills();
        let bs = p.critical_branchings();
        assert_eq!(bs.len(), 1);
        let b = &bs[0];
        assert_eq!(
            p.alphabet().format_word(&b.source()),
            "x2*x2*x1*x1"
        );
        // w1·w2 = lm of relation f, w2·w3 = lm of relation g.
        assert_eq!(p.alphabet().format_word(&b.w1), "x2");
        assert_eq!(p.alphabet().format_word(&b.w2), "x2*x1");
        assert_eq!(p.alphabet().format_word(&b.w3), "x1");
    }

    #[test]
    fn xyx_branching() {
        let p = xyx();
        let bs = p.critical_branchings();
        assert_eq!(bs.len(), 1);
        let b = &bs[0];
        assert_eq!(p.alphabet().format_word(&b.w1), "x*y");
        assert_eq!(p.alphabet().format_word(&b.w2), "x");
        assert_eq!(p.alphabet().format_word(&b.w3), "y*x");
        assert_eq!(p.alphabet().format_word(&b.source()), "x*y*x*y*x");
    }

    #[test]
    fn free_algebra_no_branchings() {
        let ab = Alphabet::new(vec!["x", "y"]).unwrap();
        let p = Presentation::load_and_interreduce(ab, 2, vec![]).unwrap();
        assert!(p.critical_branchings().is_empty());
        assert!(p.check_side_confluence(8).unwrap().side_confluent);
        assert_eq!(p.ideal_component(3).dim(), 0);
    }

    #[test]
    fn yang_mills_side_confluence_report() {
        let p = yang_mills();
        let r = p.check_side_confluence(64).unwrap();
        assert!(r.side_confluent);
        assert_eq!(r.witnesses, vec![(4, 3), (5, 5)]);
        assert!(r.extra_condition);
        assert_eq!(r.failing_degree, None);
    }

    #[test]
    fn symmetric_side_confluence_k3() {
        let p = symmetric_d3();
        let r = p.check_side_confluence(64).unwrap();
        assert!(r.side_confluent);
        assert_eq!(r.witnesses, vec![(3, 3)]);
        // N = 2: the extra-condition is empty.
        assert!(r.extra_condition);
    }

    #[test]
    fn xyx_side_confluent_but_extra_condition_fails() {
        let p = xyx();
        let r = p.check_side_confluence(64).unwrap();
        assert!(r.side_confluent);
        assert!(!r.extra_condition);
        let ec = p.extra_condition_report();
        assert!(!ec.holds);
        assert_eq!(ec.shifts.len(), 1);
        let (m, inter_dim, _, contained) = ec.shifts[0];
        assert_eq!(m, 2);
        assert!(inter_dim > 0);
        assert!(!contained);
        assert!(ec.witness.is_some());
    }

    #[test]
    fn suffix_property_yang_mills() {
        let p = yang_mills();
        let res = p.branching_suffix_property(64).unwrap();
        assert_eq!(res.len(), 1);
        assert!(res[0].1);
        // The checked window of x2x2x1x1 is x2x2x1 = lm of a relation.
        let src = res[0].0.source();
        assert_eq!(
            p.alphabet().format_word(&src.subword(0, 3)),
            "x2*x2*x1"
        );
    }

    #[test]
    fn suffix_property_gated_on_extra_condition() {
        let p = xyx();
        assert!(matches!(
            p.branching_suffix_property(64),
            Err(KoszulError::Precondition(_))
        ));
    }

    #[test]
    fn ideal_components_agree_with_definition() {
        let p = yang_mills();
        for m in 0..=6 {
            assert_eq!(p.ideal_component(m), p.ideal_component_definitional(m));
        }
        let p = xyx();
        for m in 0..=6 {
            assert_eq!(p.ideal_component(m), p.ideal_component_definitional(m));
        }
    }

    #[test]
    fn basis_count_property() {
        let p = yang_mills();
        for m in 0..=8 {
            let total = 2usize.pow(m as u32);
            assert_eq!(p.normal_words(m).len() + p.ideal_component(m).dim(), total);
        }
    }

    #[test]
    fn normal_form_is_idempotent_and_ideal_compatible() {
        let p = yang_mills();
        let ab = p.alphabet().clone();
        let f = parse_poly(&ab, "3*x2*x2*x1*x1 - x2*x1*x2*x1 + 1/2*x1*x1*x1*x2").unwrap();
        let nf = p.normal_form(&f);
        assert_eq!(p.normal_form(&nf), nf);
        assert!(p.ideal_component_definitional(4).contains(&f.sub(&nf)));
    }
}
