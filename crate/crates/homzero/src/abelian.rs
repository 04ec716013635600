//! Exact integer linear algebra: dense matrices over arbitrary-precision
//! integers, Smith normal form, and homology of chain complexes of finitely
//! generated abelian groups.
//!
//! Everything downstream reduces to [`smith_normal_form`]. Chains are column
//! vectors and boundary matrices multiply on the left; this convention is
//! fixed here once and shared by every module that builds matrices.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            entries: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let cur = &out[(i, j)] + a * b;
                        out[(i, j)] = cur;
                    }
                }
            }
        }
        out
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in apply");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    /// Copies `block` into `self` at offset `(r0, c0)`, scaled by `scale`,
    /// accumulating on top of existing entries.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &IntMatrix, scale: i64) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        let s = BigInt::from(scale);
        for i in 0..block.rows {
            for j in 0..block.cols {
                let v = &self[(r0 + i, c0 + j)] + &s * &block[(i, j)];
                self[(r0 + i, c0 + j)] = v;
            }
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let mut out = IntMatrix::zeros(self.rows, self.cols + other.cols);
        out.add_block(0, 0, self, 1);
        out.add_block(0, self.cols, other, 1);
        out
    }

    /// The submatrix of columns `lo..hi`.
    pub fn columns(&self, lo: usize, hi: usize) -> IntMatrix {
        assert!(lo <= hi && hi <= self.cols);
        let mut out = IntMatrix::zeros(self.rows, hi - lo);
        for i in 0..self.rows {
            for j in lo..hi {
                out[(i, j - lo)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// The submatrix of rows `0..k`.
    pub fn top_rows(&self, k: usize) -> IntMatrix {
        assert!(k <= self.rows);
        IntMatrix {
            rows: k,
            cols: self.cols,
            entries: self.entries[..k * self.cols].to_vec(),
        }
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row a += q * row b
    fn add_row_multiple(&mut self, a: usize, b: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(a, j)] + q * &self[(b, j)];
            self[(a, j)] = v;
        }
    }

    /// col a += q * col b
    fn add_col_multiple(&mut self, a: usize, b: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, a)] + q * &self[(i, b)];
            self[(i, a)] = v;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -&self[(a, j)];
            self[(a, j)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Result of a Smith normal form computation: `u * m * v = d` with `u`, `v`
/// unimodular and `d` diagonal, nonnegative, each entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Balanced division: returns `q` with `|a - q b|` at most `|b| / 2`.
fn balanced_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_mod_floor(b);
    // div_mod_floor gives 0 <= r < |b| for b > 0, and b < r <= 0 for b < 0.
    if &r * 2u8 > b.abs() {
        q += b.signum();
    }
    q
}

/// Smith normal form of an integer matrix.
///
/// Pivots are chosen by minimal absolute value to limit coefficient growth.
/// Total: every integer matrix, including empty and zero ones, has a form.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let steps = m.rows.min(m.cols);

    for k in 0..steps {
        'pivot: loop {
            // Minimal-absolute-value nonzero pivot in the trailing submatrix.
            let mut pivot: Option<(usize, usize)> = None;
            for i in k..d.rows {
                for j in k..d.cols {
                    if !d[(i, j)].is_zero()
                        && pivot.is_none_or(|(pi, pj)| d[(i, j)].abs() < d[(pi, pj)].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break 'pivot; // trailing submatrix is zero
            };
            d.swap_rows(k, pi);
            u.swap_rows(k, pi);
            d.swap_cols(k, pj);
            v.swap_cols(k, pj);
            if d[(k, k)].is_negative() {
                d.negate_row(k);
                u.negate_row(k);
            }

            // Reduce column k; a nonzero remainder becomes a smaller pivot.
            let mut dirty = false;
            for i in k + 1..d.rows {
                if !d[(i, k)].is_zero() {
                    let q = -balanced_quotient(&d[(i, k)], &d[(k, k)]);
                    d.add_row_multiple(i, k, &q);
                    u.add_row_multiple(i, k, &q);
                    if !d[(i, k)].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in k + 1..d.cols {
                if !d[(k, j)].is_zero() {
                    let q = -balanced_quotient(&d[(k, j)], &d[(k, k)]);
                    d.add_col_multiple(j, k, &q);
                    v.add_col_multiple(j, k, &q);
                    if !d[(k, j)].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue 'pivot;
            }

            // Pivot must divide the rest of the submatrix for the chain.
            for i in k + 1..d.rows {
                for j in k + 1..d.cols {
                    if !d[(i, j)].mod_floor(&d[(k, k)]).is_zero() {
                        let one = BigInt::one();
                        d.add_row_multiple(k, i, &one);
                        u.add_row_multiple(k, i, &one);
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
    }

    debug_assert!(u.mul(m).mul(&v) == d, "smith postcondition u*m*v = d");
    SmithDecomposition { u, d, v }
}

/// A basis of the integer kernel of `m`, one generator per column. The basis
/// spans a saturated sublattice of the column domain.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    snf.v.columns(snf.rank(), m.cols())
}

/// Isomorphism class of a finitely generated abelian group in invariant-factor
/// form: free rank plus torsion orders `d1 | d2 | ...`, every `di >= 2`.
///
/// This is the only shape in which the crate reports a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroupClass {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroupClass {
    pub fn trivial() -> Self {
        AbelianGroupClass {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroupClass {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Class of `Z^ambient / <diagonal entries>`: factors with `d = 1` are
    /// dropped, `d = 0` columns contribute nothing, missing columns are free.
    fn from_quotient(ambient: usize, diagonal: &[BigInt]) -> Self {
        let nonzero = diagonal.iter().filter(|d| !d.is_zero()).count();
        let torsion = diagonal
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .map(|d| d.abs())
            .collect();
        AbelianGroupClass {
            free_rank: ambient - nonzero,
            torsion,
        }
    }

    /// Class of the direct sum, renormalized to a divisibility chain.
    pub fn direct_sum(&self, other: &AbelianGroupClass) -> AbelianGroupClass {
        let all: Vec<BigInt> = self
            .torsion
            .iter()
            .chain(other.torsion.iter())
            .cloned()
            .collect();
        let mut diag = IntMatrix::zeros(all.len(), all.len());
        for (i, t) in all.iter().enumerate() {
            diag[(i, i)] = t.clone();
        }
        let snf = smith_normal_form(&diag);
        let mut out = Self::from_quotient(all.len(), &snf.diagonal());
        out.free_rank = self.free_rank + other.free_rank;
        out
    }
}

impl fmt::Display for AbelianGroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" (+) "))
    }
}

/// A finitely generated abelian group presented coordinatewise: coordinate
/// `i` is free when `moduli[i] = 0` and cyclic of order `moduli[i]` otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FGAbelianGroup {
    moduli: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbelianError {
    /// A coordinate modulus of 1 would denote a trivial coordinate; moduli
    /// must be 0 (free) or at least 2.
    InvalidModulus {
        index: usize,
        modulus: BigInt,
    },
    DegreeOutOfRange {
        degree: usize,
        top: usize,
    },
    BoundaryShapeMismatch {
        degree: usize,
    },
    /// A boundary does not descend to the quotient groups.
    BoundaryNotWellDefined {
        degree: usize,
        coordinate: usize,
    },
    /// Some composite of consecutive boundaries is nonzero in the quotient.
    BoundaryCompositeNonzero {
        degree: usize,
    },
}

impl fmt::Display for AbelianError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbelianError::InvalidModulus { index, modulus } => {
                write!(f, "coordinate {index} has invalid modulus {modulus}")
            }
            AbelianError::DegreeOutOfRange { degree, top } => {
                write!(f, "degree {degree} outside complex range 0..={top}")
            }
            AbelianError::BoundaryShapeMismatch { degree } => {
                write!(f, "boundary at degree {degree} has wrong shape")
            }
            AbelianError::BoundaryNotWellDefined { degree, coordinate } => write!(
                f,
                "boundary at degree {degree} is not well defined on torsion coordinate {coordinate}"
            ),
            AbelianError::BoundaryCompositeNonzero { degree } => write!(
                f,
                "composite of boundaries at degrees {degree}+1, {degree} is nonzero"
            ),
        }
    }
}

impl std::error::Error for AbelianError {}

impl FGAbelianGroup {
    pub fn new(moduli: Vec<BigInt>) -> Result<Self, AbelianError> {
        for (i, m) in moduli.iter().enumerate() {
            if m.is_negative() || m.is_one() {
                return Err(AbelianError::InvalidModulus {
                    index: i,
                    modulus: m.clone(),
                });
            }
        }
        Ok(FGAbelianGroup { moduli })
    }

    pub fn from_i64(moduli: &[i64]) -> Self {
        Self::new(moduli.iter().map(|&m| BigInt::from(m)).collect()).expect("valid moduli")
    }

    pub fn free(rank: usize) -> Self {
        FGAbelianGroup {
            moduli: vec![BigInt::zero(); rank],
        }
    }

    /// Number of coordinates (free and torsion together).
    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }

    /// The group `⊕ A` of `copies` blocks.
    pub fn repeat(&self, copies: usize) -> FGAbelianGroup {
        FGAbelianGroup {
            moduli: self
                .moduli
                .iter()
                .cycle()
                .take(self.moduli.len() * copies)
                .cloned()
                .collect(),
        }
    }

    /// Canonical coordinate reduction: free coordinates untouched, torsion
    /// coordinates into `0..m`.
    pub fn reduce(&self, v: &mut [BigInt]) {
        assert_eq!(v.len(), self.rank());
        for (x, m) in v.iter_mut().zip(&self.moduli) {
            if !m.is_zero() {
                *x = x.mod_floor(m);
            }
        }
    }

    pub fn is_zero_vector(&self, v: &[BigInt]) -> bool {
        v.iter().zip(&self.moduli).all(|(x, m)| {
            if m.is_zero() {
                x.is_zero()
            } else {
                x.mod_floor(m).is_zero()
            }
        })
    }

    /// Relation columns of the presentation: one column `m_i e_i` per torsion
    /// coordinate.
    pub fn torsion_columns(&self) -> IntMatrix {
        let t = self.moduli.iter().filter(|m| !m.is_zero()).count();
        let mut out = IntMatrix::zeros(self.rank(), t);
        let mut col = 0;
        for (i, m) in self.moduli.iter().enumerate() {
            if !m.is_zero() {
                out[(i, col)] = m.clone();
                col += 1;
            }
        }
        out
    }

    /// Invariant-factor class of the group itself.
    pub fn class(&self) -> AbelianGroupClass {
        let mut diag = IntMatrix::zeros(self.rank(), self.rank());
        for (i, m) in self.moduli.iter().enumerate() {
            diag[(i, i)] = m.clone();
        }
        let snf = smith_normal_form(&diag);
        AbelianGroupClass::from_quotient(self.rank(), &snf.diagonal())
    }
}

/// A bounded chain complex of finitely generated abelian groups.
///
/// `groups[n]` is the degree-`n` chain group for `0 <= n <= top`;
/// `boundary(n)` maps degree `n` to degree `n - 1` for `1 <= n <= top`.
#[derive(Clone, Debug)]
pub struct ChainComplexFG {
    groups: Vec<FGAbelianGroup>,
    boundaries: Vec<IntMatrix>,
}

impl ChainComplexFG {
    /// Validates shapes, well-definedness of each boundary on the quotient
    /// groups, and vanishing of all composites modulo the target moduli.
    pub fn new(
        groups: Vec<FGAbelianGroup>,
        boundaries: Vec<IntMatrix>,
    ) -> Result<Self, AbelianError> {
        assert!(!groups.is_empty(), "complex needs at least degree 0");
        assert_eq!(
            boundaries.len() + 1,
            groups.len(),
            "one boundary per positive degree"
        );
        for n in 1..groups.len() {
            let b = &boundaries[n - 1];
            if b.rows() != groups[n - 1].rank() || b.cols() != groups[n].rank() {
                return Err(AbelianError::BoundaryShapeMismatch { degree: n });
            }
            // m_j * b[:, j] must vanish in the target for torsion coordinates.
            for (j, m) in groups[n].moduli().iter().enumerate() {
                if m.is_zero() {
                    continue;
                }
                let col: Vec<BigInt> = (0..b.rows()).map(|i| &b[(i, j)] * m).collect();
                if !groups[n - 1].is_zero_vector(&col) {
                    return Err(AbelianError::BoundaryNotWellDefined {
                        degree: n,
                        coordinate: j,
                    });
                }
            }
        }
        for n in 1..boundaries.len() {
            // composite of degree n+1 then degree n lands in degree n-1
            let comp = boundaries[n - 1].mul(&boundaries[n]);
            for j in 0..comp.cols() {
                if !groups[n - 1].is_zero_vector(&comp.column(j)) {
                    return Err(AbelianError::BoundaryCompositeNonzero { degree: n });
                }
            }
        }
        Ok(ChainComplexFG { groups, boundaries })
    }

    pub fn top_degree(&self) -> usize {
        self.groups.len() - 1
    }

    pub fn group(&self, n: usize) -> &FGAbelianGroup {
        &self.groups[n]
    }

    /// The boundary matrix out of degree `n`, `1 <= n <= top`.
    pub fn boundary(&self, n: usize) -> &IntMatrix {
        &self.boundaries[n - 1]
    }
}

/// Solves `a * x = b` exactly over the integers for `a` of full column rank.
/// Panics when no integral solution exists; the homology callers guarantee
/// one by the complex invariants.
fn solve_exact(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    assert_eq!(rank, a.cols(), "solve_exact needs full column rank");
    let ub = snf.u.mul(b);
    let mut scaled = IntMatrix::zeros(a.cols(), b.cols());
    for i in 0..ub.rows() {
        for j in 0..ub.cols() {
            if i < rank {
                let (q, r) = ub[(i, j)].div_rem(&snf.d[(i, i)]);
                assert!(r.is_zero(), "relation lattice escapes the kernel lattice");
                scaled[(i, j)] = q;
            } else {
                assert!(
                    ub[(i, j)].is_zero(),
                    "relation lattice escapes the kernel lattice"
                );
            }
        }
    }
    snf.v.mul(&scaled)
}

/// Homology of the complex at degree `n`, in invariant-factor form.
///
/// The computation lifts to free covers: the kernel lattice at degree `n` is
/// cut out by the boundary with the degree-`n-1` torsion relations adjoined
/// as extra columns, and the quotient divides out the next image together
/// with the degree-`n` torsion relations. Degree 0 takes the whole group as
/// the kernel; any augmentation is the caller's business.
pub fn homology_of_complex(
    c: &ChainComplexFG,
    n: usize,
) -> Result<AbelianGroupClass, AbelianError> {
    let top = c.top_degree();
    if n > top {
        return Err(AbelianError::DegreeOutOfRange { degree: n, top });
    }
    let k_n = c.group(n).rank();

    // Basis of the kernel lattice, one generator per column.
    let kernel = if n == 0 {
        IntMatrix::identity(k_n)
    } else {
        let augmented = c.boundary(n).hstack(&c.group(n - 1).torsion_columns());
        // The torsion columns are independent, so projecting the kernel of
        // the augmented matrix back to the first k_n coordinates is injective
        // and the projected columns stay a basis.
        kernel_basis(&augmented).top_rows(k_n)
    };

    // Generators of the subgroup to divide out: next image plus torsion.
    let torsion_n = c.group(n).torsion_columns();
    let relations = if n < top {
        c.boundary(n + 1).hstack(&torsion_n)
    } else {
        torsion_n
    };

    if kernel.cols() == 0 {
        return Ok(AbelianGroupClass::trivial());
    }
    let in_kernel_coords = solve_exact(&kernel, &relations);
    let snf = smith_normal_form(&in_kernel_coords);
    Ok(AbelianGroupClass::from_quotient(
        kernel.cols(),
        &snf.diagonal(),
    ))
}
