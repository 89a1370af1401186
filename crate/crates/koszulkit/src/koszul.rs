//! The graded Koszul complex of a side-confluent presentation, the
//! reduction pairs P_{n,m}, the left-bound contracting homotopy, and the
//! exact verifier for ∂h + h∂ = id.
//!
//! All work happens in the normalised complex: the graded piece
//! K_n^(m) is spanned by (normal word of length m−l_N(n)) ⊗ (echelon
//! basis vector of J_n), flattened into the word space of degree m.
//! Differentials and bounds are stored as exact rational matrices over
//! these canonical bases.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use num::BigRational;
use num::{One, Zero};
use serde::Serialize;

use crate::error::KoszulError;
use crate::linalg::{tensor_space_words, tensor_words_space, Subspace};
use crate::presentation::Presentation;
use crate::redop::{
    join, meet, p_representation, ConfluenceWitness, PRepresentation, ReductionOperator,
};
use crate::word::{tensor_expand, HomogPoly, Word};

/// `l_N(2k) = kN`, `l_N(2k+1) = kN + 1`: the internal degree of the
/// n-th Koszul space.
pub fn l_n(big_n: usize, n: usize) -> usize {
    let k = n / 2;
    if n % 2 == 0 {
        k * big_n
    } else {
        k * big_n + 1
    }
}

/// The reduction pair of bi-degree (n, m): `ker F1 =
/// I(R)_{m−l_N(n)}⊗X^(l_N(n))`; F2 is the identity below internal
/// degree l_N(n+1) and otherwise has kernel `X^(m−l_N(n+1))⊗J_{n+1}`.
#[derive(Debug, Clone)]
pub struct ReductionPair {
    pub n: usize,
    pub m: usize,
    pub f1: ReductionOperator,
    pub f2: ReductionOperator,
    pub witness: ConfluenceWitness,
}

/// Basis of the graded piece K_n^(m): normal words (descending) ×
/// echelon basis of J_n, flattened into degree-m polynomials. The
/// flattened family is reduced echelon with pivots `w·lm(e)`, so
/// coordinates are solved by greedy pivot elimination.
#[derive(Debug)]
pub struct CellBasis {
    pub n: usize,
    pub m: usize,
    pub labels: Vec<String>,
    flat: Vec<HomogPoly>,
    pivots: HashMap<Word, usize>,
}

impl CellBasis {
    pub fn dim(&self) -> usize {
        self.flat.len()
    }

    pub fn flat(&self) -> &[HomogPoly] {
        &self.flat
    }

    /// Coordinates of `f` in this basis; errors when `f` lies outside
    /// the span.
    pub fn solve(&self, f: &HomogPoly) -> Result<Vec<BigRational>, KoszulError> {
        if f.degree() != self.m {
            return Err(KoszulError::DegreeMismatch {
                left: self.m,
                right: f.degree(),
            });
        }
        let mut coords = vec![BigRational::zero(); self.flat.len()];
        let mut residual = f.clone();
        while let Ok((lm, c)) = residual.leading() {
            let idx = *self.pivots.get(lm).ok_or(KoszulError::NotInSubspace)?;
            let c = c.clone();
            residual = residual.add_scaled(&-c.clone(), &self.flat[idx]);
            coords[idx] += c;
        }
        Ok(coords)
    }
}

/// An exact rational matrix between two graded pieces; column j holds
/// the target-basis coordinates of the image of source basis vector j.
#[derive(Debug, Clone)]
pub struct GradedMap {
    pub name: String,
    /// (homological degree, total degree) of the source piece.
    pub source: (usize, usize),
    pub target: (usize, usize),
    pub source_dim: usize,
    pub target_dim: usize,
    pub columns: Vec<Vec<BigRational>>,
}

impl GradedMap {
    fn zero(name: &str, source: (usize, usize), target: (usize, usize), sd: usize, td: usize) -> Self {
        GradedMap {
            name: name.to_string(),
            source,
            target,
            source_dim: sd,
            target_dim: td,
            columns: vec![vec![BigRational::zero(); td]; sd],
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(self.source_dim, other.target_dim);
        let mut columns = Vec::with_capacity(other.source_dim);
        for col in &other.columns {
            let mut out = vec![BigRational::zero(); self.target_dim];
            for (i, c) in col.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (t, a) in self.columns[i].iter().enumerate() {
                    if !a.is_zero() {
                        out[t] += c * a;
                    }
                }
            }
            columns.push(out);
        }
        GradedMap {
            name: format!("{}∘{}", self.name, other.name),
            source: other.source,
            target: self.target,
            source_dim: other.source_dim,
            target_dim: self.target_dim,
            columns,
        }
    }

    pub fn add(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(self.source_dim, other.source_dim);
        assert_eq!(self.target_dim, other.target_dim);
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        GradedMap {
            name: format!("{}+{}", self.name, other.name),
            source: self.source,
            target: self.target,
            source_dim: self.source_dim,
            target_dim: self.target_dim,
            columns,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.source_dim == self.target_dim
            && self.columns.iter().enumerate().all(|(j, col)| {
                col.iter()
                    .enumerate()
                    .all(|(i, c)| if i == j { c.is_one() } else { c.is_zero() })
            })
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for col in &self.columns {
            rows.push(col.clone());
        }
        let mut rank = 0;
        let width = self.target_dim;
        for pivot_col in 0..width {
            if let Some(r) = (rank..rows.len()).find(|&r| !rows[r][pivot_col].is_zero()) {
                rows.swap(rank, r);
                let inv = rows[rank][pivot_col].clone();
                for v in rows[rank].iter_mut() {
                    *v /= inv.clone();
                }
                for r in 0..rows.len() {
                    if r != rank && !rows[r][pivot_col].is_zero() {
                        let f = rows[r][pivot_col].clone();
                        for c in 0..width {
                            let delta = &f * &rows[rank][c];
                            rows[r][c] -= delta;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    pub fn kernel_dim(&self) -> usize {
        self.source_dim - self.rank()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CellWitness {
    pub basis_label: String,
    /// Terms of (∂h + h∂ − id) applied to that basis vector, as
    /// (basis label, rational coefficient) pairs.
    pub defect: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellReport {
    pub n: usize,
    pub m: usize,
    pub dim: usize,
    pub pass: bool,
    pub witness: Option<CellWitness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomotopyReport {
    pub n_max: usize,
    pub m_max: usize,
    pub all_pass: bool,
    pub cells: Vec<CellReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionRelationReport {
    pub n: usize,
    pub m: usize,
    /// The relation (r_{n,m}): the meet of the (n,m) pair and the join
    /// of the (n−1,m) pair agree on K_n^(m).
    pub holds: bool,
    /// `F1^{n,m} ∧ (F1^{n−1,m} ∨ F2^{n−1,m}) = F1^{n,m} ∧ F2^{n,m}` as
    /// a full operator identity (only when m ≥ l_N(n+1)).
    pub meet_absorption: Option<bool>,
    /// Whether `F1^{n,m}` commutes with `F1^{n−1,m} ∨ F2^{n−1,m}`.
    pub commutes: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeVerdict {
    pub rule: String,
    pub holds: bool,
}

pub struct KoszulEngine<'a> {
    p: &'a Presentation,
    k_max: usize,
    j_cache: RwLock<HashMap<usize, Arc<Subspace>>>,
    rep_cache: RwLock<HashMap<(usize, usize), Arc<(ReductionPair, PRepresentation)>>>,
    cell_cache: RwLock<HashMap<(usize, usize), Arc<CellBasis>>>,
}

impl<'a> KoszulEngine<'a> {
    pub fn new(p: &'a Presentation, k_max: usize) -> Self {
        KoszulEngine {
            p,
            k_max,
            j_cache: RwLock::new(HashMap::new()),
            rep_cache: RwLock::new(HashMap::new()),
            cell_cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn presentation(&self) -> &Presentation {
        self.p
    }

    pub fn l(&self, n: usize) -> usize {
        l_n(self.p.n(), n)
    }

    /// `J_0 = K`, `J_1 = V`, `J_2 = R̄`, and for n ≥ 3 the iterated
    /// intersection of the shifted copies of R̄ inside degree l_N(n).
    pub fn j_space(&self, n: usize) -> Arc<Subspace> {
        if let Some(s) = self.j_cache.read().unwrap().get(&n) {
            return s.clone();
        }
        let ab = self.p.alphabet();
        let space = match n {
            0 => Subspace::full(ab, 0),
            1 => Subspace::full(ab, 1),
            2 => self.p.rbar().clone(),
            _ => {
                let l = self.l(n);
                let prev = self.j_space(n - 1);
                if prev.dim() == 0 {
                    // J_n is contained in J_{n−1} ⊗ V^(⊗d).
                    Subspace::zero(l)
                } else {
                    let big_n = self.p.n();
                    let mut acc = tensor_words_space(ab, 0, &{
                        tensor_space_words(self.p.rbar(), ab, l - big_n)
                    });
                    for i in 1..=l - big_n {
                        let factor = tensor_words_space(
                            ab,
                            i,
                            &tensor_space_words(self.p.rbar(), ab, l - big_n - i),
                        );
                        acc = acc.intersect(&factor).expect("same degree");
                        if acc.dim() == 0 {
                            break;
                        }
                    }
                    acc
                }
            }
        };
        let arc = Arc::new(space);
        self.j_cache.write().unwrap().insert(n, arc.clone());
        arc
    }

    /// Smallest n with `J_n = 0` or with internal degree beyond `m_max`;
    /// all cells above it are trivial.
    pub fn suggested_n_max(&self, m_max: usize) -> usize {
        let mut n = 0;
        loop {
            if self.l(n) > m_max || self.j_space(n).dim() == 0 {
                return n;
            }
            n += 1;
        }
    }

    pub fn cell_basis(&self, n: usize, m: usize) -> Arc<CellBasis> {
        if let Some(c) = self.cell_cache.read().unwrap().get(&(n, m)) {
            return c.clone();
        }
        let l = self.l(n);
        let ab = self.p.alphabet();
        let mut labels = Vec::new();
        let mut flat = Vec::new();
        let mut pivots = HashMap::new();
        if m >= l {
            let j = self.j_space(n);
            for w in self.p.normal_words(m - l) {
                for e in j.basis() {
                    let v = tensor_expand(&HomogPoly::monomial(w.clone()), e);
                    let pivot = v.leading().expect("nonzero basis vector").0.clone();
                    labels.push(format!(
                        "{} ⊗ {}",
                        ab.format_word(&w),
                        ab.format_poly(e)
                    ));
                    pivots.insert(pivot, flat.len());
                    flat.push(v);
                }
            }
        }
        let arc = Arc::new(CellBasis {
            n,
            m,
            labels,
            flat,
            pivots,
        });
        self.cell_cache.write().unwrap().insert((n, m), arc.clone());
        arc
    }

    fn f1_operator(&self, n: usize, m: usize) -> ReductionOperator {
        let l = self.l(n);
        let ab = self.p.alphabet();
        let ker = tensor_space_words(&self.p.ideal_component(m - l), ab, l);
        crate::redop::theta_inv(ab, &ker)
    }

    fn f2_operator(&self, n: usize, m: usize) -> ReductionOperator {
        let ab = self.p.alphabet();
        let l_next = self.l(n + 1);
        if m < l_next {
            ReductionOperator::identity(ab, m)
        } else {
            let ker = tensor_words_space(ab, m - l_next, &self.j_space(n + 1));
            crate::redop::theta_inv(ab, &ker)
        }
    }

    fn pair_and_rep(
        &self,
        n: usize,
        m: usize,
    ) -> Result<Arc<(ReductionPair, PRepresentation)>, KoszulError> {
        if let Some(r) = self.rep_cache.read().unwrap().get(&(n, m)) {
            return Ok(r.clone());
        }
        if m < self.l(n) {
            return Err(KoszulError::Precondition(format!(
                "total degree {m} below internal degree {} of homological degree {n}",
                self.l(n)
            )));
        }
        let f1 = self.f1_operator(n, m);
        let f2 = self.f2_operator(n, m);
        let rep = p_representation(&f1, &f2, self.k_max).map_err(|e| match e {
            KoszulError::Precondition(_) => KoszulError::Invariant(format!(
                "reduction pair ({n},{m}) is not confluent; \
                 the input presentation cannot be side-confluent"
            )),
            other => other,
        })?;
        let witness = ConfluenceWitness {
            confluent: true,
            k: rep.k,
            limit: Some(rep.sigma.clone()),
            stabilized_at: rep.k,
        };
        let arc = Arc::new((
            ReductionPair {
                n,
                m,
                f1,
                f2,
                witness,
            },
            rep,
        ));
        self.rep_cache.write().unwrap().insert((n, m), arc.clone());
        Ok(arc)
    }

    pub fn reduction_pair(&self, n: usize, m: usize) -> Result<ReductionPair, KoszulError> {
        Ok(self.pair_and_rep(n, m)?.0.clone())
    }

    /// Matrix of ∂'ₙ on K_n^(m): flatten, normalize the prefix of
    /// length m − l_N(n−1) of every term, re-express in K_{n−1}^(m).
    pub fn differential(&self, n: usize, m: usize) -> Result<GradedMap, KoszulError> {
        if n == 0 {
            return Err(KoszulError::Precondition(
                "the differential is defined for homological degree n >= 1".into(),
            ));
        }
        let source = self.cell_basis(n, m);
        let target = self.cell_basis(n - 1, m);
        let split_at = m - self.l(n - 1);
        let mut columns = Vec::with_capacity(source.dim());
        for b in source.flat() {
            let mut image = HomogPoly::zero(m);
            for (u, c) in b.terms() {
                let (pw, sw) = u.split(split_at)?;
                let nfp = self.p.normal_form_word(&pw);
                image = image.add_scaled(c, &tensor_expand(&nfp, &HomogPoly::monomial(sw)));
            }
            let coords = target.solve(&image).map_err(|_| {
                KoszulError::Invariant(format!(
                    "image of the differential at cell ({n},{m}) leaves the graded piece"
                ))
            })?;
            columns.push(coords);
        }
        Ok(GradedMap {
            name: format!("d'_{n}"),
            source: (n, m),
            target: (n - 1, m),
            source_dim: source.dim(),
            target_dim: target.dim(),
            columns,
        })
    }

    /// Matrix of the left bound h'ₙ on K_n^(m): the γ₁ image of the
    /// reduction pair P_{n,m}, re-expressed in K_{n+1}^(m).
    pub fn left_bound(&self, n: usize, m: usize) -> Result<GradedMap, KoszulError> {
        let source = self.cell_basis(n, m);
        let target = self.cell_basis(n + 1, m);
        if source.dim() == 0 {
            return Ok(GradedMap::zero(
                &format!("h'_{n}"),
                (n, m),
                (n + 1, m),
                0,
                target.dim(),
            ));
        }
        let rep = self.pair_and_rep(n, m)?;
        let gamma1 = &rep.1.gamma1;
        let mut columns = Vec::with_capacity(source.dim());
        for b in source.flat() {
            let image = gamma1.apply(b);
            if target.dim() == 0 {
                if !image.is_zero() {
                    return Err(KoszulError::Invariant(format!(
                        "left bound at cell ({n},{m}) lands outside the trivial target piece"
                    )));
                }
                columns.push(Vec::new());
                continue;
            }
            let coords = target.solve(&image).map_err(|_| {
                KoszulError::Invariant(format!(
                    "left bound at cell ({n},{m}) not representable as normal prefix ⊗ J"
                ))
            })?;
            columns.push(coords);
        }
        Ok(GradedMap {
            name: format!("h'_{n}"),
            source: (n, m),
            target: (n + 1, m),
            source_dim: source.dim(),
            target_dim: target.dim(),
            columns,
        })
    }

    /// Checks ∂'_{n+1}∘h'ₙ + h'_{n−1}∘∂'ₙ = id on K_n^(m). The n = 0
    /// base case uses ε' (which kills positive degrees) and h₋₁(1) = 1:
    /// for m ≥ 1 the second summand vanishes, for m = 0 it is the
    /// identity.
    pub fn verify_cell(&self, n: usize, m: usize) -> Result<CellReport, KoszulError> {
        let cell = self.cell_basis(n, m);
        let dim = cell.dim();
        if dim == 0 {
            return Ok(CellReport {
                n,
                m,
                dim,
                pass: true,
                witness: None,
            });
        }
        let h_n = self.left_bound(n, m)?;
        let first = if self.cell_basis(n + 1, m).dim() == 0 {
            GradedMap::zero("0", (n, m), (n, m), dim, dim)
        } else {
            self.differential(n + 1, m)?.compose(&h_n)
        };
        let second = if n == 0 {
            let mut z = GradedMap::zero("h₋₁ε'", (0, m), (0, m), dim, dim);
            if m == 0 {
                for (j, col) in z.columns.iter_mut().enumerate() {
                    col[j] = BigRational::one();
                }
            }
            z
        } else {
            self.left_bound(n - 1, m)?.compose(&self.differential(n, m)?)
        };
        let total = first.add(&second);
        if total.is_identity() {
            return Ok(CellReport {
                n,
                m,
                dim,
                pass: true,
                witness: None,
            });
        }
        // First defective column, reported against the cell labels.
        let (j, col) = total
            .columns
            .iter()
            .enumerate()
            .find(|(j, col)| {
                col.iter()
                    .enumerate()
                    .any(|(i, c)| if i == *j { !c.is_one() } else { !c.is_zero() })
            })
            .expect("non-identity map has a defective column");
        let mut defect = Vec::new();
        for (i, c) in col.iter().enumerate() {
            let mut v = c.clone();
            if i == j {
                v -= BigRational::one();
            }
            if !v.is_zero() {
                defect.push((cell.labels[i].clone(), v.to_string()));
            }
        }
        Ok(CellReport {
            n,
            m,
            dim,
            pass: false,
            witness: Some(CellWitness {
                basis_label: cell.labels[j].clone(),
                defect,
            }),
        })
    }

    /// Verifies every cell with 0 ≤ n ≤ n_max and l_N(n) ≤ m ≤ m_max.
    /// Failures are data; only non-confluence or an exceeded k_max are
    /// errors. `jobs` > 1 verifies cells concurrently after the shared
    /// caches are warmed single-threaded.
    pub fn verify_homotopy(
        &self,
        n_max: usize,
        m_max: usize,
        jobs: usize,
    ) -> Result<HomotopyReport, KoszulError> {
        let mut cells_idx = Vec::new();
        for n in 0..=n_max {
            for m in self.l(n)..=m_max {
                cells_idx.push((n, m));
            }
        }
        let mut cells: Vec<CellReport> = Vec::with_capacity(cells_idx.len());
        if jobs <= 1 {
            for &(n, m) in &cells_idx {
                cells.push(self.verify_cell(n, m)?);
            }
        } else {
            // Warm the caches that every cell shares.
            for n in 0..=n_max + 1 {
                self.j_space(n);
            }
            let next = Mutex::new(0usize);
            let results: Mutex<Vec<(usize, Result<CellReport, KoszulError>)>> =
                Mutex::new(Vec::new());
            std::thread::scope(|scope| {
                for _ in 0..jobs {
                    scope.spawn(|| loop {
                        let idx = {
                            let mut guard = next.lock().unwrap();
                            let i = *guard;
                            *guard += 1;
                            i
                        };
                        if idx >= cells_idx.len() {
                            break;
                        }
                        let (n, m) = cells_idx[idx];
                        let r = self.verify_cell(n, m);
                        results.lock().unwrap().push((idx, r));
                    });
                }
            });
            let mut collected = results.into_inner().unwrap();
            collected.sort_by_key(|(i, _)| *i);
            for (_, r) in collected {
                cells.push(r?);
            }
        }
        let all_pass = cells.iter().all(|c| c.pass);
        Ok(HomotopyReport {
            n_max,
            m_max,
            all_pass,
            cells,
        })
    }

    /// The relation (r_{n,m}) plus the two diagnostic identities.
    pub fn reduction_relation_report(
        &self,
        n: usize,
        m: usize,
    ) -> Result<ReductionRelationReport, KoszulError> {
        if n == 0 {
            return Err(KoszulError::Precondition(
                "the reduction relation compares pairs (n,m) and (n−1,m); need n >= 1".into(),
            ));
        }
        let cur = self.pair_and_rep(n, m)?;
        let prev = self.pair_and_rep(n - 1, m)?;
        let lhs = meet(&cur.0.f1, &cur.0.f2)?;
        let rhs = join(&prev.0.f1, &prev.0.f2)?;
        let cell = self.cell_basis(n, m);
        let holds = cell.flat().iter().all(|b| lhs.apply(b) == rhs.apply(b));
        let meet_absorption = if m >= self.l(n + 1) {
            Some(meet(&cur.0.f1, &rhs)? == lhs)
        } else {
            None
        };
        let commutes = cur.0.f1.compose(&rhs) == rhs.compose(&cur.0.f1);
        Ok(ReductionRelationReport {
            n,
            m,
            holds,
            meet_absorption,
            commutes,
        })
    }

    pub fn reduction_relation_check(&self, n: usize, m: usize) -> Result<bool, KoszulError> {
        Ok(self.reduction_relation_report(n, m)?.holds)
    }

    fn s_i(&self, m: usize, i: usize) -> ReductionOperator {
        self.p
            .s_op()
            .tensor_with_identity(i, m - self.p.n() - i)
    }

    /// The §4.3 lattice identities at total degree m, valid under the
    /// extra-condition:
    /// interval joins `S_r ∨ S_{r+k} = S_r ∨ … ∨ S_{r+k}`, the meet
    /// absorption `(S_r ∧ … ∧ S_{r+k−1}) ∨ S_{r+k} = S_{r+k−1} ∨
    /// S_{r+k}`, and `T_{n,m} ∨ F2^{n−1,m} = F2^{n,m}`.
    pub fn extra_condition_lattice_checks(
        &self,
        m: usize,
    ) -> Result<Vec<LatticeVerdict>, KoszulError> {
        if !self.p.check_extra_condition() {
            return Err(KoszulError::Precondition(
                "lattice identities require the extra-condition".into(),
            ));
        }
        let big_n = self.p.n();
        let mut out = Vec::new();
        if m >= big_n + 2 {
            for k in 2..big_n {
                for r in 0..=m.saturating_sub(big_n).saturating_sub(k) {
                    let chain: Vec<ReductionOperator> =
                        (r..=r + k).map(|i| self.s_i(m, i)).collect();
                    let mut j_all = chain[0].clone();
                    for s in &chain[1..] {
                        j_all = join(&j_all, s)?;
                    }
                    let j_ends = join(&chain[0], &chain[k])?;
                    out.push(LatticeVerdict {
                        rule: format!("interval join r={r} k={k}"),
                        holds: j_ends == j_all,
                    });
                    let mut m_front = chain[0].clone();
                    for s in &chain[1..k] {
                        m_front = meet(&m_front, s)?;
                    }
                    let lhs = join(&m_front, &chain[k])?;
                    let rhs = join(&chain[k - 1], &chain[k])?;
                    out.push(LatticeVerdict {
                        rule: format!("meet absorption r={r} k={k}"),
                        holds: lhs == rhs,
                    });
                }
            }
        }
        // T_{n,m} ∨ F2^{n−1,m} = F2^{n,m} for n ≥ 2, m ≥ l_N(n+2).
        for n in 2.. {
            if m < self.l(n + 2) {
                break;
            }
            let lo = m - self.l(n + 2) + 1;
            let hi = m - self.l(n + 1);
            let mut t = self.s_i(m, lo);
            for i in lo + 1..=hi {
                t = meet(&t, &self.s_i(m, i))?;
            }
            let f2_prev = self.f2_operator(n - 1, m);
            let f2_cur = self.f2_operator(n, m);
            out.push(LatticeVerdict {
                rule: format!("T join n={n}"),
                holds: join(&t, &f2_prev)? == f2_cur,
            });
        }
        Ok(out)
    }

    /// `(dim ker ∂'ₙ, rank ∂'_{n+1})` on the degree-m graded pieces.
    pub fn homology_dims(&self, n: usize, m: usize) -> Result<(usize, usize), KoszulError> {
        let ker = self.differential(n, m)?.kernel_dim();
        let im = if m >= self.l(n + 1) && self.cell_basis(n + 1, m).dim() > 0 {
            self.differential(n + 1, m)?.rank()
        } else {
            0
        };
        Ok((ker, im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;
    use crate::word::Alphabet;

    fn yang_mills() -> Presentation {
        let ab = Alphabet::new(vec!["x1", "x2"]).unwrap();
        let rels = vec![
            parse_poly(&ab, "x2*x1*x1 - 2*x1*x2*x1 + x1*x1*x2").unwrap(),
            parse_poly(&ab, "x2*x2*x1 - 2*x2*x1*x2 + x1*x2*x2").unwrap(),
        ];
        Presentation::load_and_interreduce(ab, 3, rels).unwrap()
    }

    #[test]
    fn l_values() {
        assert_eq!(l_n(3, 0), 0);
        assert_eq!(l_n(3, 1), 1);
        assert_eq!(l_n(3, 2), 3);
        assert_eq!(l_n(3, 3), 4);
        assert_eq!(l_n(3, 4), 6);
        assert_eq!(l_n(3, 5), 7);
        for n in 0..10 {
            assert_eq!(l_n(2, n), n);
        }
    }

    #[test]
    fn yang_mills_j_spaces() {
        let p = yang_mills();
        let eng = KoszulEngine::new(&p, 64);
        assert_eq!(eng.j_space(0).dim(), 1);
        assert_eq!(eng.j_space(1).dim(), 2);
        assert_eq!(eng.j_space(2).dim(), 2);
        assert_eq!(eng.j_space(3).dim(), 1);
        assert_eq!(eng.j_space(4).dim(), 0);
        assert_eq!(eng.j_space(5).dim(), 0);
        let ab = p.alphabet().clone();
        let v = parse_poly(
            &ab,
            "x2*x2*x1*x1 - 2*x2*x1*x2*x1 + x2*x1*x1*x2 \
             + x1*x2*x2*x1 - 2*x1*x2*x1*x2 + x1*x1*x2*x2",
        )
        .unwrap();
        assert_eq!(eng.j_space(3).solve_in_basis(&v).unwrap().len(), 1);
        assert!(eng.j_space(3).solve_in_basis(&v).unwrap()[0].is_one());
        assert_eq!(eng.suggested_n_max(9), 4);
    }

    #[test]
    fn differential_on_generators() {
        let p = yang_mills();
        let eng = KoszulEngine::new(&p, 64);
        // ∂'₁(1⊗x) = x̄ for every generator.
        let d1 = eng.differential(1, 1).unwrap();
        assert_eq!(d1.source_dim, 2);
        assert_eq!(d1.target_dim, 2);
        assert_eq!(d1.rank(), 2);
        let src = eng.cell_basis(1, 1);
        let tgt = eng.cell_basis(0, 1);
        for (j, b) in src.flat().iter().enumerate() {
            let coords = tgt.solve(b).unwrap();
            assert_eq!(d1.columns[j], coords);
        }
    }

    #[test]
    fn yang_mills_d3_of_v() {
        let p = yang_mills();
        let eng = KoszulEngine::new(&p, 64);
        let d3 = eng.differential(3, 4).unwrap();
        assert_eq!(d3.source_dim, 1);
        // ∂'₃(1⊗v) = x̄2⊗f1 + x̄1⊗f2 in the K_2^(4) basis.
        let tgt = eng.cell_basis(2, 4);
        let col = &d3.columns[0];
        let nonzero: Vec<(usize, &BigRational)> =
            col.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        assert_eq!(nonzero.len(), 2);
        let labels: Vec<&str> = nonzero.iter().map(|(i, _)| tgt.labels[*i].as_str()).collect();
        assert!(labels
            .iter()
            .any(|l| l.starts_with("x2 ⊗") && l.contains("x2*x1*x1")));
        assert!(labels
            .iter()
            .any(|l| l.starts_with("x1 ⊗") && l.contains("x2*x2*x1")));
        assert!(nonzero.iter().all(|(_, c)| c.is_one()));
    }

    #[test]
    fn complex_property_d_squared_zero() {
        let p = yang_mills();
        let eng = KoszulEngine::new(&p, 64);
        for n in 2..=3usize {
            for m in eng.l(n)..=7 {
                let d_n = eng.differential(n, m).unwrap();
                let d_n1 = eng.differential(n - 1, m).unwrap();
                let comp = d_n1.compose(&d_n);
                assert!(comp.columns.iter().all(|col| col.iter().all(|c| c.is_zero())));
            }
        }
    }

    #[test]
    fn reduction_pair_shapes() {
        let p = yang_mills();
        let eng = KoszulEngine::new(&p, 64);
        // n = 0, m ≥ 1: F2 is the zero operator.
        let pr = eng.reduction_pair(0, 3).unwrap();
        assert_eq!(pr.f2, ReductionOperator::zero(p.alphabet(), 3));
        assert!(pr.witness.confluent);
        // l_N(n) ≤ m < l_N(n+1): F2 is the identity.
        let pr = eng.reduction_pair(2, 3).unwrap();
        assert_eq!(pr.f2, ReductionOperator::identity(p.alphabet(), 3));
        // Yang-Mills n=2, m=4: F2 = θ⁻¹(J_3) sends x2x2x1x1 to x2x2x1x1 − v.
        let pr = eng.reduction_pair(2, 4).unwrap();
        let ab = p.alphabet().clone();
        let w = Word::from_indices(&[1, 1, 0, 0]);
        let expected = parse_poly(
            &ab,
            "2*x2*x1*x2*x1 - x2*x1*x1*x2 - x1*x2*x2*x1 + 2*x1*x2*x1*x2 - x1*x1*x2*x2",
        )
        .unwrap();
        assert_eq!(pr.f2.apply_word(&w), expected);
    }

    #[test]
    fn yang_mills_homotopy_small() {
        let p = yang_mills();
        let eng = KoszulEngine::new(&p, 64);
        let report = eng.verify_homotopy(4, 6, 1).unwrap();
        assert!(report.all_pass);
        // Every nontrivial cell is actually exercised.
        assert!(report.cells.iter().any(|c| c.dim > 0 && c.n == 3));
    }

    #[test]
    fn yang_mills_homotopy_parallel_matches() {
        let p = yang_mills();
        let eng = KoszulEngine::new(&p, 64);
        let seq = eng.verify_homotopy(3, 5, 1).unwrap();
        let par = eng.verify_homotopy(3, 5, 3).unwrap();
        assert_eq!(seq.all_pass, par.all_pass);
        assert_eq!(seq.cells.len(), par.cells.len());
        for (a, b) in seq.cells.iter().zip(par.cells.iter()) {
            assert_eq!((a.n, a.m, a.dim, a.pass), (b.n, b.m, b.dim, b.pass));
        }
    }

    #[test]
    fn yang_mills_reduction_relations() {
        let p = yang_mills();
        let eng = KoszulEngine::new(&p, 64);
        for n in 1..=3usize {
            for m in eng.l(n)..=6 {
                let r = eng.reduction_relation_report(n, m).unwrap();
                assert!(r.holds, "relation failed at ({n},{m})");
                if let Some(ok) = r.meet_absorption {
                    assert!(ok, "meet absorption failed at ({n},{m})");
                }
            }
        }
    }

    #[test]
    fn xyx_counterexample_behaviour() {
        let ab = Alphabet::new(vec!["x", "y"]).unwrap();
        let p = Presentation::load_and_interreduce(
            ab.clone(),
            3,
            vec![parse_poly(&ab, "x*y*x").unwrap()],
        )
        .unwrap();
        let eng = KoszulEngine::new(&p, 64);
        assert_eq!(eng.j_space(3).dim(), 0);
        // At total degree 5 the kernel of ∂'₂ strictly contains the
        // image of ∂'₃.
        let (ker, im) = eng.homology_dims(2, 5).unwrap();
        assert!(ker > im, "expected strict inclusion, got ker {ker}, im {im}");
        // The witness x̄y ⊗ xyx is a kernel element.
        let d2 = eng.differential(2, 5).unwrap();
        let src = eng.cell_basis(2, 5);
        let idx = src
            .labels
            .iter()
            .position(|l| l == "x*y ⊗ x*y*x")
            .expect("witness basis vector present");
        assert!(d2.columns[idx].iter().all(|c| c.is_zero()));
        // The homotopy identity fails somewhere.
        let report = eng.verify_homotopy(3, 6, 1).unwrap();
        assert!(!report.all_pass);
        let failing = report.cells.iter().find(|c| !c.pass).unwrap();
        assert!(failing.witness.is_some());
        // Prop. 4.2.5 is an iff, so a reduction relation must fail too.
        let mut some_false = false;
        for n in 1..=3usize {
            for m in eng.l(n)..=6 {
                if !eng.reduction_relation_check(n, m).unwrap() {
                    some_false = true;
                }
            }
        }
        assert!(some_false);
        // Gate: the lattice identities require the extra-condition.
        assert!(matches!(
            eng.extra_condition_lattice_checks(5),
            Err(KoszulError::Precondition(_))
        ));
    }

    #[test]
    fn free_algebra_complex() {
        let ab = Alphabet::new(vec!["x", "y"]).unwrap();
        let p = Presentation::load_and_interreduce(ab, 2, vec![]).unwrap();
        let eng = KoszulEngine::new(&p, 64);
        assert_eq!(eng.j_space(2).dim(), 0);
        assert_eq!(eng.suggested_n_max(6), 2);
        let report = eng.verify_homotopy(2, 5, 1).unwrap();
        assert!(report.all_pass);
        // h'ₙ = 0 for n ≥ 1: the target pieces vanish.
        let h1 = eng.left_bound(1, 4).unwrap();
        assert_eq!(h1.target_dim, 0);
    }

    #[test]
    fn yang_mills_lattice_checks() {
        let p = yang_mills();
        let eng = KoszulEngine::new(&p, 64);
        let verdicts = eng.extra_condition_lattice_checks(7).unwrap();
        assert!(!verdicts.is_empty());
        assert!(verdicts.iter().all(|v| v.holds), "{verdicts:?}");
        assert!(verdicts.iter().any(|v| v.rule.starts_with("T join n=2")));
    }
}
