//! Exact rational linear algebra over the ordered word basis `X^(m)`.
//!
//! A `Subspace` is stored as a reduced echelon basis with pivots on the
//! greatest word (descending order). This pivot convention is what makes
//! the bijection with reduction operators work: the echelon basis of a
//! kernel directly yields the operator rows.

use num::BigRational;
use num::{One, Zero};

use crate::error::KoszulError;
use crate::word::{Alphabet, HomogPoly, Word};

/// A subspace of `span(X^(m))` in reduced echelon form: every basis
/// vector is monic, leading words are pairwise distinct, and no basis
/// vector's leading word occurs in another basis vector. Basis vectors
/// are kept sorted descending by leading word, so two subspaces are equal
/// iff their representations are identical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    degree: usize,
    basis: Vec<HomogPoly>,
}

impl Subspace {
    pub fn zero(degree: usize) -> Self {
        Subspace {
            degree,
            basis: Vec::new(),
        }
    }

    /// Full word space of degree `m`.
    pub fn full(alphabet: &Alphabet, degree: usize) -> Self {
        let basis = alphabet
            .words_desc(degree)
            .into_iter()
            .map(HomogPoly::monomial)
            .collect();
        Subspace { degree, basis }
    }

    /// Reduced echelon basis of the span of `vectors`; deterministic
    /// canonical form. All vectors must share `degree`.
    pub fn span(degree: usize, vectors: &[HomogPoly]) -> Result<Self, KoszulError> {
        let mut sp = Subspace::zero(degree);
        for v in vectors {
            if v.degree() != degree {
                return Err(KoszulError::DegreeMismatch {
                    left: degree,
                    right: v.degree(),
                });
            }
            sp.insert(v.clone());
        }
        Ok(sp)
    }

    /// Builds a subspace from rows already known to be a reduced echelon
    /// basis. Checked in debug builds only.
    pub(crate) fn from_echelon_unchecked(degree: usize, mut basis: Vec<HomogPoly>) -> Self {
        basis.sort_by(|a, b| {
            let la = a.leading().expect("nonzero").0;
            let lb = b.leading().expect("nonzero").0;
            lb.cmp(la)
        });
        let sp = Subspace { degree, basis };
        debug_assert!(sp.check_reduced_echelon(), "basis not reduced echelon");
        sp
    }

    #[allow(dead_code)]
    fn check_reduced_echelon(&self) -> bool {
        for (i, b) in self.basis.iter().enumerate() {
            let (lm, lc) = match b.leading() {
                Ok(x) => x,
                Err(_) => return false,
            };
            if !lc.is_one() {
                return false;
            }
            for (j, other) in self.basis.iter().enumerate() {
                if i != j && !other.coeff(lm).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[HomogPoly] {
        &self.basis
    }

    pub fn leading_words(&self) -> Vec<&Word> {
        self.basis
            .iter()
            .map(|b| b.leading().expect("nonzero basis vector").0)
            .collect()
    }

    /// Eliminates every pivot word from `v`; the residual has no
    /// occurrence of any leading word of the basis.
    pub fn reduce(&self, v: &HomogPoly) -> HomogPoly {
        let mut v = v.clone();
        // Pivots descending: eliminations only introduce smaller words,
        // which later (smaller) pivots still catch.
        for b in &self.basis {
            let lm = b.leading().expect("nonzero").0;
            let c = v.coeff(lm);
            if !c.is_zero() {
                v = v.add_scaled(&-c, b);
            }
        }
        v
    }

    fn insert(&mut self, v: HomogPoly) -> bool {
        let r = self.reduce(&v);
        if r.is_zero() {
            return false;
        }
        let r = r.monic().expect("nonzero residual");
        let lm = r.leading().expect("nonzero").0.clone();
        // Back-reduce existing rows against the new pivot.
        for b in &mut self.basis {
            let c = b.coeff(&lm);
            if !c.is_zero() {
                *b = b.add_scaled(&-c, &r);
            }
        }
        let at = self
            .basis
            .partition_point(|b| b.leading().expect("nonzero").0 > &lm);
        self.basis.insert(at, r);
        true
    }

    pub fn contains(&self, v: &HomogPoly) -> bool {
        self.degree == v.degree() && self.reduce(v).is_zero()
    }

    pub fn includes(&self, other: &Subspace) -> bool {
        self.degree == other.degree && other.basis.iter().all(|b| self.contains(b))
    }

    /// Unique coordinates of `v` in the echelon basis.
    pub fn solve_in_basis(&self, v: &HomogPoly) -> Result<Vec<BigRational>, KoszulError> {
        if v.degree() != self.degree {
            return Err(KoszulError::DegreeMismatch {
                left: self.degree,
                right: v.degree(),
            });
        }
        let mut v = v.clone();
        let mut coords = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            let lm = b.leading().expect("nonzero").0;
            let c = v.coeff(lm);
            if !c.is_zero() {
                v = v.add_scaled(&-c.clone(), b);
            }
            coords.push(c);
        }
        if !v.is_zero() {
            return Err(KoszulError::NotInSubspace);
        }
        Ok(coords)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, KoszulError> {
        if self.degree != other.degree {
            return Err(KoszulError::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        let mut out = self.clone();
        for b in &other.basis {
            out.insert(b.clone());
        }
        Ok(out)
    }

    /// Intersection, computed by reducing one basis against the other and
    /// extracting the kernel of the residual rows.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, KoszulError> {
        if self.degree != other.degree {
            return Err(KoszulError::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        // Reduce the smaller basis against the larger.
        let (big, small) = if self.dim() >= other.dim() {
            (self, other)
        } else {
            (other, self)
        };
        // Rows: residual of each small-basis vector, with coordinate
        // tracking in terms of the small basis.
        let n = small.dim();
        let mut echelon: Vec<(HomogPoly, Vec<BigRational>)> = Vec::new();
        let mut members: Vec<HomogPoly> = Vec::new();
        for (i, v) in small.basis.iter().enumerate() {
            let mut coords = vec![BigRational::zero(); n];
            coords[i] = BigRational::one();
            let mut r = big.reduce(v);
            // Gaussian elimination by leading word against accumulated rows.
            'elim: while !r.is_zero() {
                let lm = r.leading().expect("nonzero").0.clone();
                for (e, ec) in &echelon {
                    let elm = e.leading().expect("nonzero").0;
                    if *elm == lm {
                        let c = r.coeff(&lm);
                        r = r.add_scaled(&-c.clone(), e);
                        for (a, b) in coords.iter_mut().zip(ec.iter()) {
                            *a -= &c * b;
                        }
                        continue 'elim;
                    }
                }
                break;
            }
            if r.is_zero() {
                // A combination of small-basis vectors lying in `big`.
                let mut comb = HomogPoly::zero(self.degree);
                for (c, b) in coords.iter().zip(small.basis.iter()) {
                    if !c.is_zero() {
                        comb = comb.add_scaled(c, b);
                    }
                }
                members.push(comb);
            } else {
                let lc = r.leading().expect("nonzero").1.clone();
                let inv = BigRational::one() / lc;
                let r = r.scale(&inv);
                let coords = coords.iter().map(|c| c * &inv).collect();
                echelon.push((r, coords));
            }
        }
        Subspace::span(self.degree, &members)
    }
}

/// `U ⊗ span(X^(extra))`: each basis vector tensored with every word.
/// The result of tensoring a reduced echelon basis with a word basis is
/// again reduced echelon.
pub fn tensor_space_words(
    u: &Subspace,
    alphabet: &Alphabet,
    extra: usize,
) -> Subspace {
    let mut basis = Vec::with_capacity(u.dim() * alphabet.len().pow(extra as u32));
    for b in u.basis() {
        for w in alphabet.words_desc(extra) {
            basis.push(crate::word::tensor_expand(b, &HomogPoly::monomial(w)));
        }
    }
    Subspace::from_echelon_unchecked(u.degree() + extra, basis)
}

/// `span(X^(extra)) ⊗ U`.
pub fn tensor_words_space(
    alphabet: &Alphabet,
    extra: usize,
    u: &Subspace,
) -> Subspace {
    let mut basis = Vec::with_capacity(u.dim() * alphabet.len().pow(extra as u32));
    for w in alphabet.words_desc(extra) {
        let m = HomogPoly::monomial(w);
        for b in u.basis() {
            basis.push(crate::word::tensor_expand(&m, b));
        }
    }
    Subspace::from_echelon_unchecked(u.degree() + extra, basis)
}
