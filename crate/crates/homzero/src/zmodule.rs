//! 0-modules over a finite semigroup with zero, and ordinary module actions
//! over plain finite semigroups.
//!
//! A 0-module is an abelian group with a right action of the nonzero part of
//! the semigroup, associative wherever the product stays nonzero; products
//! falling into zero impose no condition at all. Coefficients are restricted
//! to finitely generated abelian groups in diagonal presentation, and each
//! acting element is an integer matrix.
//!
//! Column convention: a coefficient is a column vector, so "a acted by s then
//! by t" is `M(t) * M(s) * a` and the right-module law reads
//! `M(t) * M(s) = M(s*t)` modulo the moduli. The semigroup writes its action
//! on the right, the matrices compose on the left; this is the one place
//! where the two notations meet, so the rule is checked literally here.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::Zero;

use crate::abelian::{FGAbelianGroup, IntMatrix};
use crate::semigroup::{FiniteSemigroup, FiniteZeroSemigroup};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionError {
    WrongShape {
        element: usize,
        rows: usize,
        cols: usize,
    },
    WrongCount {
        expected: usize,
        got: usize,
    },
    /// `M(s)` does not descend to the quotient group.
    NotWellDefined {
        element: usize,
        row: usize,
        col: usize,
    },
    /// Witness pair with `s*t != 0` but `M(t) * M(s) != M(s*t)`.
    CompositionViolated {
        s: usize,
        t: usize,
    },
    /// Part embedding does not match the union table.
    PartMismatch {
        part_element: usize,
    },
}

impl fmt::Display for ActionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionError::WrongShape {
                element,
                rows,
                cols,
            } => {
                write!(f, "action of element {element} has shape {rows}x{cols}")
            }
            ActionError::WrongCount { expected, got } => {
                write!(f, "expected {expected} action matrices, got {got}")
            }
            ActionError::NotWellDefined { element, row, col } => write!(
                f,
                "action of element {element} not well defined at entry ({row},{col})"
            ),
            ActionError::CompositionViolated { s, t } => {
                write!(f, "composition law fails at pair ({s},{t})")
            }
            ActionError::PartMismatch { part_element } => {
                write!(f, "part element {part_element} maps outside the union")
            }
        }
    }
}

impl std::error::Error for ActionError {}

/// Checks that `m` induces an endomorphism of the group presented by
/// `moduli`: the image of a torsion generator must have compatible order,
/// so `m[i][j] * moduli[j] = 0 mod moduli[i]` whenever `moduli[j] > 0`.
fn well_defined_witness(base: &FGAbelianGroup, m: &IntMatrix) -> Option<(usize, usize)> {
    let moduli = base.moduli();
    for j in 0..m.cols() {
        if moduli[j].is_zero() {
            continue;
        }
        for i in 0..m.rows() {
            let v = &m[(i, j)] * &moduli[j];
            let ok = if moduli[i].is_zero() {
                v.is_zero()
            } else {
                v.mod_floor(&moduli[i]).is_zero()
            };
            if !ok {
                return Some((i, j));
            }
        }
    }
    None
}

fn congruent(base: &FGAbelianGroup, a: &IntMatrix, b: &IntMatrix) -> bool {
    let moduli = base.moduli();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let diff = &a[(i, j)] - &b[(i, j)];
            let ok = if moduli[i].is_zero() {
                diff.is_zero()
            } else {
                diff.mod_floor(&moduli[i]).is_zero()
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// A 0-module: a finitely generated abelian group with one action matrix per
/// nonzero semigroup element.
#[derive(Clone, Debug)]
pub struct ZeroModuleAction {
    base: FGAbelianGroup,
    semigroup: Arc<FiniteZeroSemigroup>,
    /// `act[i]` is the matrix of element `i + 1`.
    act: Vec<IntMatrix>,
}

impl ZeroModuleAction {
    /// Builds and fully validates the action: shapes, well-definedness on the
    /// quotient group, and the composition law on every pair with nonzero
    /// product.
    pub fn new(
        semigroup: Arc<FiniteZeroSemigroup>,
        base: FGAbelianGroup,
        act: Vec<IntMatrix>,
    ) -> Result<Self, ActionError> {
        let expected = semigroup.size() - 1;
        if act.len() != expected {
            return Err(ActionError::WrongCount {
                expected,
                got: act.len(),
            });
        }
        let k = base.rank();
        for (idx, m) in act.iter().enumerate() {
            if m.rows() != k || m.cols() != k {
                return Err(ActionError::WrongShape {
                    element: idx + 1,
                    rows: m.rows(),
                    cols: m.cols(),
                });
            }
        }
        let module = ZeroModuleAction {
            base,
            semigroup,
            act,
        };
        if let Some(w) = module.violation_witness() {
            return Err(w);
        }
        Ok(module)
    }

    /// First axiom violation, if any: a matrix that is not well defined or a
    /// pair breaking the composition law. Linearity is automatic for matrix
    /// actions, so these two checks decide validity.
    pub fn violation_witness(&self) -> Option<ActionError> {
        for s in 1..self.semigroup.size() {
            if let Some((row, col)) = well_defined_witness(&self.base, self.matrix(s)) {
                return Some(ActionError::NotWellDefined {
                    element: s,
                    row,
                    col,
                });
            }
        }
        for s in 1..self.semigroup.size() {
            for t in 1..self.semigroup.size() {
                let st = self.semigroup.product(s, t);
                if st == 0 {
                    continue;
                }
                let composed = self.matrix(t).mul(self.matrix(s));
                if !congruent(&self.base, &composed, self.matrix(st)) {
                    return Some(ActionError::CompositionViolated { s, t });
                }
            }
        }
        None
    }

    /// Every element acts as the identity.
    pub fn trivial(semigroup: Arc<FiniteZeroSemigroup>, base: FGAbelianGroup) -> Self {
        let k = base.rank();
        let act = vec![IntMatrix::identity(k); semigroup.size() - 1];
        ZeroModuleAction {
            base,
            semigroup,
            act,
        }
    }

    /// Every element acts as zero.
    pub fn zero_action(semigroup: Arc<FiniteZeroSemigroup>, base: FGAbelianGroup) -> Self {
        let k = base.rank();
        let act = vec![IntMatrix::zeros(k, k); semigroup.size() - 1];
        ZeroModuleAction {
            base,
            semigroup,
            act,
        }
    }

    pub fn base(&self) -> &FGAbelianGroup {
        &self.base
    }

    pub fn semigroup(&self) -> &Arc<FiniteZeroSemigroup> {
        &self.semigroup
    }

    /// Action matrix of the nonzero element `s`.
    pub fn matrix(&self, s: usize) -> &IntMatrix {
        assert!(s >= 1, "zero does not act");
        &self.act[s - 1]
    }

    /// Restriction along a component of a 0-direct union: the part's nonzero
    /// element `i` sits at union index `offset + i - 1`. Within-part products
    /// must agree with the union table.
    pub fn restrict_to_part(
        &self,
        part: Arc<FiniteZeroSemigroup>,
        offset: usize,
    ) -> Result<ZeroModuleAction, ActionError> {
        let embed = |i: usize| offset + i - 1;
        for s in 1..part.size() {
            if embed(s) >= self.semigroup.size() {
                return Err(ActionError::PartMismatch { part_element: s });
            }
            for t in 1..part.size() {
                let in_part = part.product(s, t);
                let in_union = self.semigroup.product(embed(s), embed(t));
                let expected = if in_part == 0 { 0 } else { embed(in_part) };
                if in_union != expected {
                    return Err(ActionError::PartMismatch { part_element: s });
                }
            }
        }
        let act = (1..part.size())
            .map(|s| self.matrix(embed(s)).clone())
            .collect();
        Ok(ZeroModuleAction {
            base: self.base.clone(),
            semigroup: part,
            act,
        })
    }
}

/// A total right-module action over a plain finite semigroup: every element
/// acts, and the composition law holds for every pair. Coefficients for the
/// bar complex.
#[derive(Clone, Debug)]
pub struct SemigroupModuleAction {
    base: FGAbelianGroup,
    semigroup: Arc<FiniteSemigroup>,
    act: Vec<IntMatrix>,
}

impl SemigroupModuleAction {
    pub fn new(
        semigroup: Arc<FiniteSemigroup>,
        base: FGAbelianGroup,
        act: Vec<IntMatrix>,
    ) -> Result<Self, ActionError> {
        if act.len() != semigroup.size() {
            return Err(ActionError::WrongCount {
                expected: semigroup.size(),
                got: act.len(),
            });
        }
        let k = base.rank();
        for (idx, m) in act.iter().enumerate() {
            if m.rows() != k || m.cols() != k {
                return Err(ActionError::WrongShape {
                    element: idx,
                    rows: m.rows(),
                    cols: m.cols(),
                });
            }
            if let Some((row, col)) = well_defined_witness(&base, m) {
                return Err(ActionError::NotWellDefined {
                    element: idx,
                    row,
                    col,
                });
            }
        }
        for s in 0..semigroup.size() {
            for t in 0..semigroup.size() {
                let st = semigroup.product(s, t);
                if !congruent(&base, &act[t].mul(&act[s]), &act[st]) {
                    return Err(ActionError::CompositionViolated { s, t });
                }
            }
        }
        Ok(SemigroupModuleAction {
            base,
            semigroup,
            act,
        })
    }

    pub fn trivial(semigroup: Arc<FiniteSemigroup>, base: FGAbelianGroup) -> Self {
        let k = base.rank();
        let act = vec![IntMatrix::identity(k); semigroup.size()];
        SemigroupModuleAction {
            base,
            semigroup,
            act,
        }
    }

    pub fn base(&self) -> &FGAbelianGroup {
        &self.base
    }

    pub fn semigroup(&self) -> &Arc<FiniteSemigroup> {
        &self.semigroup
    }

    pub fn matrix(&self, s: usize) -> &IntMatrix {
        &self.act[s]
    }

    /// The same coefficients viewed as a 0-module over the semigroup with an
    /// adjoined zero: indices shift by one, matrices stay.
    pub fn over_adjoined_zero(&self) -> ZeroModuleAction {
        let with_zero = Arc::new(self.semigroup.adjoin_zero());
        ZeroModuleAction {
            base: self.base.clone(),
            semigroup: with_zero,
            act: self.act.clone(),
        }
    }
}
