//! Chain complexes of a finite semigroup with zero and their homology.
//!
//! Degree `n` of the 0-complex is one copy of the coefficient group per
//! `n`-tuple of nonzero elements with nonzero product; the bar complex of a
//! plain finite semigroup takes all tuples instead. Both share the standard
//! inhomogeneous boundary: the first face acts by the leading element, inner
//! faces multiply adjacent entries, the last face drops the tail.
//!
//! Besides the matrix-level complexes the module evaluates chains
//! symbolically: [`zero_boundary`] and [`reflector_boundary`] apply the
//! boundary formula term by term, [`embed_zero_chain`] sends a tuple to the
//! tuple of singleton reflector sequences, and [`retract_reflector_chain`]
//! maps reflector chains back, collapsing everything whose interior is not
//! made of singletons. The retraction is a one-sided inverse of the
//! embedding, and on semigroups categorical at zero it intertwines the two
//! boundaries; those identities are what connect the finite computation to
//! the homology of the 0-reflector.
//!
//! No global basis of reflector chains is ever materialized: the 0-reflector
//! is infinite in general, so reflector chains are formal sums evaluated
//! generator by generator.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::abelian::{
    homology_of_complex, smith_normal_form, AbelianError, AbelianGroupClass, ChainComplexFG,
    FGAbelianGroup, IntMatrix,
};
use crate::reflector::{validate_sequence, ReflectorElement, ReflectorError};
use crate::semigroup::{FiniteSemigroup, FiniteZeroSemigroup};
use crate::zmodule::{SemigroupModuleAction, ZeroModuleAction};

/// Cap on the number of basis tuples in one degree.
pub const DEFAULT_BASIS_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomologyError {
    /// The action lives over a different semigroup than the one supplied.
    SemigroupMismatch,
    InvalidDimension {
        dimension: usize,
    },
    BasisTooLarge {
        dimension: usize,
        cap: usize,
    },
    /// A chain term's tuple has zero product, so it is not a valid basis
    /// element of the 0-complex.
    NotInBasis {
        tuple: Vec<usize>,
    },
    DimensionMismatch {
        expected: usize,
        got: usize,
    },
    CoefficientLength {
        expected: usize,
        got: usize,
    },
    /// The retraction is only defined in dimensions 2 and up.
    RetractionDimension {
        dimension: usize,
    },
    Reflector(ReflectorError),
    Abelian(AbelianError),
}

impl fmt::Display for HomologyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomologyError::SemigroupMismatch => {
                write!(f, "module action and semigroup disagree")
            }
            HomologyError::InvalidDimension { dimension } => {
                write!(f, "dimension {dimension} not supported here")
            }
            HomologyError::BasisTooLarge { dimension, cap } => {
                write!(f, "basis at dimension {dimension} exceeds cap {cap}")
            }
            HomologyError::NotInBasis { tuple } => {
                write!(f, "tuple {tuple:?} has zero product")
            }
            HomologyError::DimensionMismatch { expected, got } => {
                write!(f, "expected a chain of dimension {expected}, got {got}")
            }
            HomologyError::CoefficientLength { expected, got } => {
                write!(f, "coefficient vector of length {got}, expected {expected}")
            }
            HomologyError::RetractionDimension { dimension } => {
                write!(f, "retraction undefined in dimension {dimension}")
            }
            HomologyError::Reflector(e) => write!(f, "{e}"),
            HomologyError::Abelian(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for HomologyError {}

impl From<ReflectorError> for HomologyError {
    fn from(e: ReflectorError) -> Self {
        HomologyError::Reflector(e)
    }
}

impl From<AbelianError> for HomologyError {
    fn from(e: AbelianError) -> Self {
        HomologyError::Abelian(e)
    }
}

/// An ordered basis of `n`-tuples of semigroup elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleBasis {
    dimension: usize,
    tuples: Vec<Vec<usize>>,
}

impl TupleBasis {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

/// All `n`-tuples of nonzero elements whose product is nonzero, in
/// lexicographic order. Prefixes of such tuples have nonzero products, so the
/// enumeration prunes by running product.
pub fn nonzero_tuples(s: &FiniteZeroSemigroup, n: usize) -> Result<TupleBasis, HomologyError> {
    nonzero_tuples_capped(s, n, DEFAULT_BASIS_CAP)
}

pub fn nonzero_tuples_capped(
    s: &FiniteZeroSemigroup,
    n: usize,
    cap: usize,
) -> Result<TupleBasis, HomologyError> {
    if n == 0 {
        return Err(HomologyError::InvalidDimension { dimension: 0 });
    }
    let mut tuples = Vec::new();
    let mut prefix: Vec<usize> = Vec::with_capacity(n);
    let mut products: Vec<usize> = Vec::with_capacity(n);
    // depth-first in ascending index order = lexicographic output
    fn descend(
        s: &FiniteZeroSemigroup,
        n: usize,
        cap: usize,
        prefix: &mut Vec<usize>,
        products: &mut Vec<usize>,
        tuples: &mut Vec<Vec<usize>>,
    ) -> Result<(), HomologyError> {
        for x in 1..s.size() {
            let prod = match products.last() {
                None => x,
                Some(&p) => s.product(p, x),
            };
            if prod == 0 {
                continue;
            }
            prefix.push(x);
            products.push(prod);
            if prefix.len() == n {
                if tuples.len() >= cap {
                    return Err(HomologyError::BasisTooLarge { dimension: n, cap });
                }
                tuples.push(prefix.clone());
            } else {
                descend(s, n, cap, prefix, products, tuples)?;
            }
            prefix.pop();
            products.pop();
        }
        Ok(())
    }
    descend(s, n, cap, &mut prefix, &mut products, &mut tuples)?;
    Ok(TupleBasis {
        dimension: n,
        tuples,
    })
}

/// All `n`-tuples over the whole carrier, in lexicographic order.
pub fn all_tuples(s: &FiniteSemigroup, n: usize, cap: usize) -> Result<TupleBasis, HomologyError> {
    if n == 0 {
        return Err(HomologyError::InvalidDimension { dimension: 0 });
    }
    let count = s.size().checked_pow(n as u32).filter(|&c| c <= cap);
    let Some(count) = count else {
        return Err(HomologyError::BasisTooLarge { dimension: n, cap });
    };
    let mut tuples = Vec::with_capacity(count);
    let mut current = vec![0usize; n];
    loop {
        tuples.push(current.clone());
        // increment as a base-`size` counter, most significant digit first
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(TupleBasis {
                    dimension: n,
                    tuples,
                });
            }
            pos -= 1;
            current[pos] += 1;
            if current[pos] < s.size() {
                break;
            }
            current[pos] = 0;
        }
    }
}

/// Builds the complex over the given bases: degree `n` is one copy of the
/// base group per basis tuple, and the boundary is the inhomogeneous one.
/// Every face of a basis tuple must again be a basis tuple.
fn complex_from_bases(
    base: &FGAbelianGroup,
    matrix_of: &dyn Fn(usize) -> IntMatrix,
    product: &dyn Fn(usize, usize) -> usize,
    bases: &[TupleBasis],
) -> Result<ChainComplexFG, HomologyError> {
    let k = base.rank();
    let ident = IntMatrix::identity(k);
    let mut groups = vec![base.clone()];
    let mut boundaries = Vec::new();

    for (level, basis) in bases.iter().enumerate() {
        let n = level + 1;
        groups.push(base.repeat(basis.len()));
        let rows = if n == 1 {
            k
        } else {
            k * bases[level - 1].len()
        };
        let mut boundary = IntMatrix::zeros(rows, k * basis.len());
        if n == 1 {
            for (j, tuple) in basis.tuples().iter().enumerate() {
                boundary.add_block(0, j * k, &matrix_of(tuple[0]), 1);
                boundary.add_block(0, j * k, &ident, -1);
            }
        } else {
            let previous: BTreeMap<&[usize], usize> = bases[level - 1]
                .tuples()
                .iter()
                .enumerate()
                .map(|(i, t)| (t.as_slice(), i))
                .collect();
            let block_of = |t: &[usize]| -> Result<usize, HomologyError> {
                previous
                    .get(t)
                    .copied()
                    .ok_or_else(|| HomologyError::NotInBasis { tuple: t.to_vec() })
            };
            for (j, tuple) in basis.tuples().iter().enumerate() {
                let col = j * k;
                let target = block_of(&tuple[1..])?;
                boundary.add_block(target * k, col, &matrix_of(tuple[0]), 1);
                for i in 1..n {
                    let mut face = Vec::with_capacity(n - 1);
                    face.extend_from_slice(&tuple[..i - 1]);
                    face.push(product(tuple[i - 1], tuple[i]));
                    face.extend_from_slice(&tuple[i + 1..]);
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    let target = block_of(&face)?;
                    boundary.add_block(target * k, col, &ident, sign);
                }
                let target = block_of(&tuple[..n - 1])?;
                let sign = if n % 2 == 0 { 1 } else { -1 };
                boundary.add_block(target * k, col, &ident, sign);
            }
        }
        boundaries.push(boundary);
    }
    Ok(ChainComplexFG::new(groups, boundaries)?)
}

/// The 0-chain complex of `(s, a)` up to degree `maxdim`: degree `n` is one
/// copy of the coefficient group per nonzero-product tuple, degree 0 is the
/// group itself. Faces of nonzero-product tuples keep nonzero products, so no
/// boundary block is ever dropped.
pub fn zero_chain_complex(
    s: &FiniteZeroSemigroup,
    a: &ZeroModuleAction,
    maxdim: usize,
) -> Result<ChainComplexFG, HomologyError> {
    if maxdim == 0 {
        return Err(HomologyError::InvalidDimension { dimension: 0 });
    }
    if a.semigroup().as_ref() != s {
        return Err(HomologyError::SemigroupMismatch);
    }
    let bases = (1..=maxdim)
        .map(|n| nonzero_tuples(s, n))
        .collect::<Result<Vec<_>, _>>()?;
    complex_from_bases(
        a.base(),
        &|x| a.matrix(x).clone(),
        &|x, y| s.product(x, y),
        &bases,
    )
}

/// The bar complex of a plain finite semigroup with module coefficients, up
/// to degree `maxdim`, with all of `S^n` as the degree-`n` basis.
pub fn bar_complex(
    a: &SemigroupModuleAction,
    maxdim: usize,
    cap: usize,
) -> Result<ChainComplexFG, HomologyError> {
    if maxdim == 0 {
        return Err(HomologyError::InvalidDimension { dimension: 0 });
    }
    let s = a.semigroup().clone();
    let bases = (1..=maxdim)
        .map(|n| all_tuples(&s, n, cap))
        .collect::<Result<Vec<_>, _>>()?;
    complex_from_bases(
        a.base(),
        &|x| a.matrix(x).clone(),
        &|x, y| s.product(x, y),
        &bases,
    )
}

/// The `n`-th 0-homology group of `(s, a)`. Degree 0 is the group of
/// coinvariants, matching [`coinvariants`].
pub fn zero_homology(
    s: &FiniteZeroSemigroup,
    a: &ZeroModuleAction,
    n: usize,
) -> Result<AbelianGroupClass, HomologyError> {
    let complex = zero_chain_complex(s, a, n.max(1) + 1)?;
    Ok(homology_of_complex(&complex, n)?)
}

/// Degree-0 homology computed directly: the coefficient group modulo the
/// subgroup generated by all `a*s - a`, as the cokernel of the stacked
/// matrices `M(s) - 1` with the torsion relations adjoined.
pub fn coinvariants(a: &ZeroModuleAction) -> AbelianGroupClass {
    let k = a.base().rank();
    let size = a.semigroup().size();
    let mut stacked = IntMatrix::zeros(k, k * (size - 1));
    let ident = IntMatrix::identity(k);
    for s in 1..size {
        stacked.add_block(0, (s - 1) * k, a.matrix(s), 1);
        stacked.add_block(0, (s - 1) * k, &ident, -1);
    }
    let with_torsion = stacked.hstack(&a.base().torsion_columns());
    let snf = smith_normal_form(&with_torsion);
    let diagonal = snf.diagonal();
    let nonzero = diagonal.iter().filter(|d| !d.is_zero()).count();
    AbelianGroupClass {
        free_rank: k - nonzero,
        torsion: diagonal
            .iter()
            .filter(|d| !d.is_zero() && !num_traits::One::is_one(*d))
            .cloned()
            .collect(),
    }
}

/// Homology of the bar complex at degree `n`.
pub fn bar_homology(
    a: &SemigroupModuleAction,
    n: usize,
) -> Result<AbelianGroupClass, HomologyError> {
    bar_homology_capped(a, n, DEFAULT_BASIS_CAP)
}

pub fn bar_homology_capped(
    a: &SemigroupModuleAction,
    n: usize,
    cap: usize,
) -> Result<AbelianGroupClass, HomologyError> {
    let complex = bar_complex(a, n.max(1) + 1, cap)?;
    Ok(homology_of_complex(&complex, n)?)
}

fn reduce_coeff(base: &FGAbelianGroup, v: &mut [BigInt]) {
    base.reduce(v);
}

/// A formal 0-chain: finitely many tuples of nonzero elements, each with a
/// coefficient vector in the module. Dimension 0 chains are carried on the
/// empty tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroChain {
    dimension: usize,
    terms: BTreeMap<Vec<usize>, Vec<BigInt>>,
}

impl ZeroChain {
    pub fn zero(dimension: usize) -> Self {
        ZeroChain {
            dimension,
            terms: BTreeMap::new(),
        }
    }

    /// A single term `coeff * [tuple]`, normalized.
    pub fn generator(
        a: &ZeroModuleAction,
        tuple: Vec<usize>,
        coeff: Vec<BigInt>,
    ) -> Result<Self, HomologyError> {
        if coeff.len() != a.base().rank() {
            return Err(HomologyError::CoefficientLength {
                expected: a.base().rank(),
                got: coeff.len(),
            });
        }
        if !tuple.is_empty() && a.semigroup().word_product(&tuple) == 0 {
            return Err(HomologyError::NotInBasis { tuple });
        }
        let mut chain = ZeroChain::zero(tuple.len());
        chain.accumulate(a.base(), tuple, coeff, 1);
        Ok(chain)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, Vec<BigInt>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn accumulate(
        &mut self,
        base: &FGAbelianGroup,
        key: Vec<usize>,
        delta: Vec<BigInt>,
        sign: i64,
    ) {
        let entry = self
            .terms
            .entry(key.clone())
            .or_insert_with(|| vec![BigInt::zero(); base.rank()]);
        let s = BigInt::from(sign);
        for (e, d) in entry.iter_mut().zip(delta) {
            *e += &s * d;
        }
        reduce_coeff(base, entry);
        if entry.iter().all(Zero::is_zero) {
            self.terms.remove(&key);
        }
    }
}

/// A formal chain over tuples of reflector sequences, each entry a raw
/// sequence vector; dimension 0 chains sit on the empty tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectorChain {
    dimension: usize,
    terms: BTreeMap<Vec<Vec<usize>>, Vec<BigInt>>,
}

impl ReflectorChain {
    pub fn zero(dimension: usize) -> Self {
        ReflectorChain {
            dimension,
            terms: BTreeMap::new(),
        }
    }

    /// A single term over a tuple of reflector elements.
    pub fn generator(
        a: &ZeroModuleAction,
        tuple: &[ReflectorElement],
        coeff: Vec<BigInt>,
    ) -> Result<Self, HomologyError> {
        if coeff.len() != a.base().rank() {
            return Err(HomologyError::CoefficientLength {
                expected: a.base().rank(),
                got: coeff.len(),
            });
        }
        for x in tuple {
            if x.semigroup().as_ref() != a.semigroup().as_ref() {
                return Err(HomologyError::SemigroupMismatch);
            }
        }
        let key: Vec<Vec<usize>> = tuple.iter().map(|x| x.seq().to_vec()).collect();
        let mut chain = ReflectorChain::zero(tuple.len());
        chain.accumulate(a.base(), key, coeff, 1);
        Ok(chain)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Vec<usize>>, Vec<BigInt>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn accumulate(
        &mut self,
        base: &FGAbelianGroup,
        key: Vec<Vec<usize>>,
        delta: Vec<BigInt>,
        sign: i64,
    ) {
        let entry = self
            .terms
            .entry(key.clone())
            .or_insert_with(|| vec![BigInt::zero(); base.rank()]);
        let s = BigInt::from(sign);
        for (e, d) in entry.iter_mut().zip(delta) {
            *e += &s * d;
        }
        reduce_coeff(base, entry);
        if entry.iter().all(Zero::is_zero) {
            self.terms.remove(&key);
        }
    }
}

/// The boundary of a 0-chain, evaluated by the face formula term by term.
/// Every face of a nonzero-product tuple keeps a nonzero product, so the
/// result is again a 0-chain. Dimension must be at least 1.
pub fn zero_boundary(a: &ZeroModuleAction, chain: &ZeroChain) -> Result<ZeroChain, HomologyError> {
    let n = chain.dimension();
    if n == 0 {
        return Err(HomologyError::InvalidDimension { dimension: 0 });
    }
    let s = a.semigroup().clone();
    let mut out = ZeroChain::zero(n - 1);
    for (tuple, coeff) in chain.terms() {
        if tuple.len() != n {
            return Err(HomologyError::DimensionMismatch {
                expected: n,
                got: tuple.len(),
            });
        }
        if s.word_product(tuple) == 0 {
            return Err(HomologyError::NotInBasis {
                tuple: tuple.clone(),
            });
        }
        // face 0: act by the leading element
        out.accumulate(
            a.base(),
            tuple[1..].to_vec(),
            a.matrix(tuple[0]).apply(coeff),
            1,
        );
        // inner faces: multiply neighbors
        for i in 1..n {
            let mut face = Vec::with_capacity(n - 1);
            face.extend_from_slice(&tuple[..i - 1]);
            face.push(s.product(tuple[i - 1], tuple[i]));
            face.extend_from_slice(&tuple[i + 1..]);
            let sign = if i % 2 == 0 { 1 } else { -1 };
            out.accumulate(a.base(), face, coeff.clone(), sign);
        }
        // last face: drop the tail
        let sign = if n % 2 == 0 { 1 } else { -1 };
        out.accumulate(a.base(), tuple[..n - 1].to_vec(), coeff.clone(), sign);
    }
    Ok(out)
}

/// The canonical embedding of 0-chains into reflector chains: every tuple
/// entry becomes the singleton sequence of itself. Dimension 0 is the
/// identity.
pub fn embed_zero_chain(chain: &ZeroChain) -> ReflectorChain {
    let mut out = ReflectorChain::zero(chain.dimension());
    for (tuple, coeff) in chain.terms() {
        let key: Vec<Vec<usize>> = tuple.iter().map(|&x| vec![x]).collect();
        out.terms.insert(key, coeff.clone());
    }
    out
}

/// Seam product of two reflector sequences: merge when the seam product is
/// nonzero, concatenate otherwise.
fn multiply_seqs(s: &FiniteZeroSemigroup, x: &[usize], y: &[usize]) -> Vec<usize> {
    let seam = s.product(*x.last().expect("nonempty"), y[0]);
    let mut out = Vec::with_capacity(x.len() + y.len());
    if seam != 0 {
        out.extend_from_slice(&x[..x.len() - 1]);
        out.push(seam);
        out.extend_from_slice(&y[1..]);
    } else {
        out.extend_from_slice(x);
        out.extend_from_slice(y);
    }
    out
}

/// Action of a whole reflector sequence on a coefficient vector: apply the
/// entries in order.
fn apply_sequence(a: &ZeroModuleAction, seq: &[usize], coeff: &[BigInt]) -> Vec<BigInt> {
    let mut v = coeff.to_vec();
    for &x in seq {
        v = a.matrix(x).apply(&v);
    }
    v
}

/// The boundary of a reflector chain: same face formula, with seam products
/// in the 0-reflector and the leading component acting through the module
/// correspondence.
pub fn reflector_boundary(
    a: &ZeroModuleAction,
    chain: &ReflectorChain,
) -> Result<ReflectorChain, HomologyError> {
    let n = chain.dimension();
    if n == 0 {
        return Err(HomologyError::InvalidDimension { dimension: 0 });
    }
    let s = a.semigroup().clone();
    let mut out = ReflectorChain::zero(n - 1);
    for (tuple, coeff) in chain.terms() {
        if tuple.len() != n {
            return Err(HomologyError::DimensionMismatch {
                expected: n,
                got: tuple.len(),
            });
        }
        for seq in tuple {
            validate_sequence(&s, seq).map_err(HomologyError::Reflector)?;
        }
        out.accumulate(
            a.base(),
            tuple[1..].to_vec(),
            apply_sequence(a, &tuple[0], coeff),
            1,
        );
        for i in 1..n {
            let mut face = Vec::with_capacity(n - 1);
            face.extend_from_slice(&tuple[..i - 1]);
            face.push(multiply_seqs(&s, &tuple[i - 1], &tuple[i]));
            face.extend_from_slice(&tuple[i + 1..]);
            let sign = if i % 2 == 0 { 1 } else { -1 };
            out.accumulate(a.base(), face, coeff.clone(), sign);
        }
        let sign = if n % 2 == 0 { 1 } else { -1 };
        out.accumulate(a.base(), tuple[..n - 1].to_vec(), coeff.clone(), sign);
    }
    Ok(out)
}

/// The retraction of one reflector-chain generator to a 0-chain, for
/// dimension at least 2.
///
/// The generator survives only when every interior component is a singleton
/// and the word of marked letters multiplies to something nonzero; the marked
/// letters are the last letter of the first component, the interior
/// singletons, and the first letter of the last component. The coefficient is
/// acted on by the first component minus its last letter (an empty prefix
/// acts as the identity), and the rest of the last component is dropped.
pub fn retract_reflector_generator(
    a: &ZeroModuleAction,
    tuple: &[ReflectorElement],
    coeff: &[BigInt],
) -> Result<ZeroChain, HomologyError> {
    let key: Vec<Vec<usize>> = tuple.iter().map(|x| x.seq().to_vec()).collect();
    for x in tuple {
        if x.semigroup().as_ref() != a.semigroup().as_ref() {
            return Err(HomologyError::SemigroupMismatch);
        }
    }
    retract_raw(a, &key, coeff)
}

fn retract_raw(
    a: &ZeroModuleAction,
    tuple: &[Vec<usize>],
    coeff: &[BigInt],
) -> Result<ZeroChain, HomologyError> {
    let n = tuple.len();
    if n < 2 {
        return Err(HomologyError::RetractionDimension { dimension: n });
    }
    if coeff.len() != a.base().rank() {
        return Err(HomologyError::CoefficientLength {
            expected: a.base().rank(),
            got: coeff.len(),
        });
    }
    let s = a.semigroup().clone();
    for seq in tuple {
        validate_sequence(&s, seq).map_err(HomologyError::Reflector)?;
    }
    if tuple[1..n - 1].iter().any(|seq| seq.len() != 1) {
        return Ok(ZeroChain::zero(n));
    }
    let mut letters = Vec::with_capacity(n);
    letters.push(*tuple[0].last().expect("nonempty"));
    for seq in &tuple[1..n - 1] {
        letters.push(seq[0]);
    }
    letters.push(tuple[n - 1][0]);
    if s.word_product(&letters) == 0 {
        return Ok(ZeroChain::zero(n));
    }
    let prefix = &tuple[0][..tuple[0].len() - 1];
    let acted = apply_sequence(a, prefix, coeff);
    let mut out = ZeroChain::zero(n);
    out.accumulate(a.base(), letters, acted, 1);
    Ok(out)
}

/// The retraction extended by linearity over a whole reflector chain.
pub fn retract_reflector_chain(
    a: &ZeroModuleAction,
    chain: &ReflectorChain,
) -> Result<ZeroChain, HomologyError> {
    let n = chain.dimension();
    if n < 2 {
        return Err(HomologyError::RetractionDimension { dimension: n });
    }
    let mut out = ZeroChain::zero(n);
    for (tuple, coeff) in chain.terms() {
        let piece = retract_raw(a, tuple, coeff)?;
        for (key, v) in piece.terms {
            out.accumulate(a.base(), key, v, 1);
        }
    }
    Ok(out)
}

/// Convenience for tests and callers: the tuple basis and the coefficient
/// standard basis vectors of one degree of the 0-complex, as generator
/// chains.
pub fn zero_chain_generators(
    s: &FiniteZeroSemigroup,
    a: &ZeroModuleAction,
    n: usize,
) -> Result<Vec<ZeroChain>, HomologyError> {
    let basis = nonzero_tuples(s, n)?;
    let k = a.base().rank();
    let mut out = Vec::with_capacity(basis.len() * k);
    for tuple in basis.tuples() {
        for i in 0..k {
            let mut coeff = vec![BigInt::zero(); k];
            coeff[i] = BigInt::from(1);
            out.push(ZeroChain::generator(a, tuple.clone(), coeff)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use std::sync::Arc;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// {0,a,b,c,d,x} with ab = cd = x.
    fn example_one() -> Arc<FiniteZeroSemigroup> {
        let names = ["0", "a", "b", "c", "d", "x"].map(String::from).to_vec();
        let mut table = vec![0; 36];
        table[1 * 6 + 2] = 5;
        table[3 * 6 + 4] = 5;
        Arc::new(FiniteZeroSemigroup::new(names, table).unwrap())
    }

    /// {0,a,b,c,ab} with a*b = a*c = ab.
    fn example_two() -> Arc<FiniteZeroSemigroup> {
        let names = ["0", "a", "b", "c", "ab"].map(String::from).to_vec();
        let mut table = vec![0; 25];
        table[1 * 5 + 2] = 4;
        table[1 * 5 + 3] = 4;
        Arc::new(FiniteZeroSemigroup::new(names, table).unwrap())
    }

    fn null_semigroup(n: usize) -> Arc<FiniteZeroSemigroup> {
        let names = (0..n).map(|i| format!("e{i}")).collect();
        Arc::new(FiniteZeroSemigroup::new(names, vec![0; n * n]).unwrap())
    }

    #[test]
    fn nonzero_tuples_of_example_one() {
        let s = example_one();
        let basis = nonzero_tuples(&s, 2).unwrap();
        assert_eq!(basis.tuples(), &[vec![1, 2], vec![3, 4]]);
    }

    #[test]
    fn nonzero_tuples_of_null_semigroup_empty() {
        let s = null_semigroup(4);
        assert!(nonzero_tuples(&s, 2).unwrap().is_empty());
    }

    #[test]
    fn nonzero_tuples_vanish_at_nilpotency_degree() {
        // S^3 = 0 in example one
        let s = example_one();
        assert_eq!(s.nilpotency_degree(), Some(3));
        assert!(nonzero_tuples(&s, 3).unwrap().is_empty());
        assert!(nonzero_tuples(&s, 5).unwrap().is_empty());
    }

    #[test]
    fn tuple_caps_are_hard_errors() {
        let c2 = FiniteSemigroup::new(vec!["e".into(), "g".into()], vec![0, 1, 1, 0]).unwrap();
        let with_zero = Arc::new(c2.adjoin_zero());
        assert!(matches!(
            nonzero_tuples_capped(&with_zero, 4, 10),
            Err(HomologyError::BasisTooLarge { dimension: 4, .. })
        ));
        assert!(matches!(
            all_tuples(&c2, 4, 10),
            Err(HomologyError::BasisTooLarge { dimension: 4, .. })
        ));
    }

    #[test]
    fn boundary_of_example_one_two_chain() {
        // boundary of alpha[a,b] = alpha*a [b] - alpha[x] + alpha[a]
        let s = example_one();
        let a = ZeroModuleAction::trivial(s.clone(), FGAbelianGroup::free(1));
        let chain = ZeroChain::generator(&a, vec![1, 2], big(&[1])).unwrap();
        let b = zero_boundary(&a, &chain).unwrap();
        let mut expected = ZeroChain::zero(1);
        expected.accumulate(a.base(), vec![2], big(&[1]), 1);
        expected.accumulate(a.base(), vec![5], big(&[1]), -1);
        expected.accumulate(a.base(), vec![1], big(&[1]), 1);
        assert_eq!(b, expected);
    }

    #[test]
    fn boundary_squared_vanishes_on_generators() {
        let s = example_two();
        let a = ZeroModuleAction::trivial(s.clone(), FGAbelianGroup::from_i64(&[4, 0]));
        for chain in zero_chain_generators(&s, &a, 2).unwrap() {
            let once = zero_boundary(&a, &chain).unwrap();
            let twice = zero_boundary(&a, &once).unwrap();
            assert!(twice.is_zero(), "{chain:?}");
        }
    }

    #[test]
    fn complex_degree_one_boundary_matches_action() {
        let s = example_two();
        let a = ZeroModuleAction::zero_action(s.clone(), FGAbelianGroup::free(1));
        let c = zero_chain_complex(&s, &a, 2).unwrap();
        // d1 block for [s] is M(s) - 1 = -1 for the zero action
        let d1 = c.boundary(1);
        assert_eq!(d1.rows(), 1);
        assert_eq!(d1.cols(), 4);
        for j in 0..4 {
            assert_eq!(d1[(0, j)], BigInt::from(-1));
        }
    }

    #[test]
    fn complex_rejects_foreign_action() {
        let s = example_one();
        let other = example_two();
        let a = ZeroModuleAction::trivial(other, FGAbelianGroup::free(1));
        assert!(matches!(
            zero_chain_complex(&s, &a, 2),
            Err(HomologyError::SemigroupMismatch)
        ));
    }

    #[test]
    fn degree_two_homology_of_example_one_vanishes() {
        let s = example_one();
        for base in [FGAbelianGroup::free(1), FGAbelianGroup::from_i64(&[4])] {
            let a = ZeroModuleAction::trivial(s.clone(), base);
            assert!(zero_homology(&s, &a, 2).unwrap().is_trivial());
        }
        let a = ZeroModuleAction::zero_action(s.clone(), FGAbelianGroup::free(1));
        assert!(zero_homology(&s, &a, 2).unwrap().is_trivial());
    }

    #[test]
    fn degree_two_homology_of_example_two_is_kernel_of_a() {
        let s = example_two();
        // zero action on Z: kernel of M(a) = 0 is all of Z
        let a = ZeroModuleAction::zero_action(s.clone(), FGAbelianGroup::free(1));
        assert_eq!(
            zero_homology(&s, &a, 2).unwrap(),
            AbelianGroupClass::free(1)
        );
        // trivial action: M(a) = 1 is injective, kernel 0
        let a = ZeroModuleAction::trivial(s.clone(), FGAbelianGroup::free(1));
        assert!(zero_homology(&s, &a, 2).unwrap().is_trivial());
    }

    #[test]
    fn coinvariants_of_trivial_module_is_base() {
        let s = example_one();
        let base = FGAbelianGroup::from_i64(&[2, 0]);
        let a = ZeroModuleAction::trivial(s.clone(), base.clone());
        assert_eq!(coinvariants(&a), base.class());
        // and the complex route agrees
        assert_eq!(zero_homology(&s, &a, 0).unwrap(), base.class());
    }

    #[test]
    fn coinvariants_of_zero_action_vanish() {
        let s = example_one();
        let a = ZeroModuleAction::zero_action(s.clone(), FGAbelianGroup::free(1));
        assert!(coinvariants(&a).is_trivial());
        assert!(zero_homology(&s, &a, 0).unwrap().is_trivial());
    }

    #[test]
    fn bar_homology_of_one_element_semigroup() {
        let e = FiniteSemigroup::new(vec!["e".into()], vec![0]).unwrap();
        let a = SemigroupModuleAction::trivial(Arc::new(e), FGAbelianGroup::free(1));
        assert!(bar_homology(&a, 1).unwrap().is_trivial());
    }

    #[test]
    fn bar_homology_of_cyclic_two_group() {
        let names = vec!["e".into(), "g".into()];
        let table = vec![0, 1, 1, 0];
        let c2 = Arc::new(FiniteSemigroup::new(names, table).unwrap());
        let a = SemigroupModuleAction::trivial(c2, FGAbelianGroup::free(1));
        assert_eq!(bar_homology(&a, 0).unwrap(), AbelianGroupClass::free(1));
        let h1 = bar_homology(&a, 1).unwrap();
        assert_eq!(h1.free_rank, 0);
        assert_eq!(h1.torsion, vec![BigInt::from(2)]);
        assert!(bar_homology(&a, 2).unwrap().is_trivial());
        let h3 = bar_homology(&a, 3).unwrap();
        assert_eq!(h3.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn adjoined_zero_matches_bar_homology() {
        let names = vec!["e".into(), "g".into()];
        let table = vec![0, 1, 1, 0];
        let c2 = Arc::new(FiniteSemigroup::new(names, table).unwrap());
        let total = SemigroupModuleAction::trivial(c2, FGAbelianGroup::free(1));
        let zero_mod = total.over_adjoined_zero();
        let with_zero = Arc::clone(zero_mod.semigroup());
        for n in 0..=3 {
            assert_eq!(
                zero_homology(&with_zero, &zero_mod, n).unwrap(),
                bar_homology(&total, n).unwrap(),
                "degree {n}"
            );
        }
    }

    #[test]
    fn embedding_keeps_dimension_zero_intact() {
        let s = example_one();
        let a = ZeroModuleAction::trivial(s.clone(), FGAbelianGroup::free(1));
        let c = ZeroChain::generator(&a, vec![], big(&[7])).unwrap();
        let e = embed_zero_chain(&c);
        assert_eq!(e.dimension(), 0);
        assert_eq!(e.terms().len(), 1);
        assert_eq!(e.terms().get(&vec![] as &Vec<Vec<usize>>), Some(&big(&[7])));
    }

    #[test]
    fn embedding_of_generator_is_singletons() {
        let s = example_one();
        let a = ZeroModuleAction::trivial(s.clone(), FGAbelianGroup::free(1));
        let c = ZeroChain::generator(&a, vec![1, 2], big(&[1])).unwrap();
        let e = embed_zero_chain(&c);
        let key: Vec<Vec<usize>> = vec![vec![1], vec![2]];
        assert_eq!(e.terms().get(&key), Some(&big(&[1])));
    }

    #[test]
    fn chain_map_square_commutes_on_generators() {
        let s = example_two();
        let a = ZeroModuleAction::trivial(s.clone(), FGAbelianGroup::from_i64(&[6]));
        for n in 1..=3 {
            for chain in zero_chain_generators(&s, &a, n).unwrap() {
                let lhs = embed_zero_chain(&zero_boundary(&a, &chain).unwrap());
                let rhs = reflector_boundary(&a, &embed_zero_chain(&chain)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn retraction_inverts_embedding() {
        let s = example_one();
        let a = ZeroModuleAction::trivial(s.clone(), FGAbelianGroup::free(2));
        for n in 2..=2 {
            for chain in zero_chain_generators(&s, &a, n).unwrap() {
                let embedded = embed_zero_chain(&chain);
                let back = retract_reflector_chain(&a, &embedded).unwrap();
                assert_eq!(back, chain);
            }
        }
    }

    #[test]
    fn retraction_kills_long_interior_components() {
        let s = example_one();
        let a = ZeroModuleAction::trivial(s.clone(), FGAbelianGroup::free(1));
        // interior component <b, a> of length 2 forces zero
        let x = ReflectorElement::singleton(s.clone(), 1).unwrap();
        let mid = ReflectorElement::new(s.clone(), vec![2, 1]).unwrap();
        let y = ReflectorElement::singleton(s.clone(), 2).unwrap();
        let out =
            retract_reflector_generator(&a, &[x.clone(), mid, y.clone()], &big(&[1])).unwrap();
        assert!(out.is_zero());
        // and dimension below 2 is refused
        assert!(matches!(
            retract_reflector_generator(&a, &[x], &big(&[1])),
            Err(HomologyError::RetractionDimension { dimension: 1 })
        ));
    }

    #[test]
    fn retraction_drops_tail_of_last_component() {
        let s = example_one();
        let a = ZeroModuleAction::trivial(s.clone(), FGAbelianGroup::free(1));
        // first component <b, a>: prefix <b> acts, last letter a is marked;
        // last component <b, a>: first letter b is marked, tail dropped;
        // marked word a*b = x nonzero, so the generator survives
        let first = ReflectorElement::new(s.clone(), vec![2, 1]).unwrap();
        let last = ReflectorElement::new(s.clone(), vec![2, 1]).unwrap();
        let out = retract_reflector_generator(&a, &[first, last], &big(&[1])).unwrap();
        let mut expected = ZeroChain::zero(2);
        expected.accumulate(a.base(), vec![1, 2], big(&[1]), 1);
        assert_eq!(out, expected);
    }
}
