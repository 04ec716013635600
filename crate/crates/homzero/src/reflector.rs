//! The 0-reflector of a finite semigroup with zero, as a calculus on
//! sequences.
//!
//! Elements are nonempty sequences of nonzero semigroup elements whose
//! consecutive products vanish. Multiplication either merges at the seam or
//! concatenates, and two sequences represent the same reflector element when
//! they are connected by the elementary moves of [`neighbor_sequences`].
//! Whether that equivalence is decidable is open territory, so
//! [`sequences_equivalent`] is a bounded bidirectional search with an honest
//! `Unknown` verdict.
//!
//! Sequences hash and compare as raw sequences, never as equivalence classes.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::abelian::IntMatrix;
use crate::presentation::{Presentation, RelationRhs};
use crate::semigroup::FiniteZeroSemigroup;
use crate::zmodule::ZeroModuleAction;

/// Default cap on sequences visited by one equivalence search.
pub const DEFAULT_SEQUENCE_BUDGET: usize = 10_000;
/// Default cap on the length of sequences the search will expand.
pub const DEFAULT_LENGTH_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReflectorError {
    EmptySequence,
    ZeroEntry {
        position: usize,
    },
    /// Adjacent entries with nonzero product.
    NonzeroAdjacentProduct {
        position: usize,
    },
    EntryOutOfRange {
        position: usize,
        value: usize,
    },
    MixedSemigroups,
}

impl fmt::Display for ReflectorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReflectorError::EmptySequence => write!(f, "reflector sequence must be nonempty"),
            ReflectorError::ZeroEntry { position } => {
                write!(f, "sequence entry {position} is the zero element")
            }
            ReflectorError::NonzeroAdjacentProduct { position } => write!(
                f,
                "entries {position},{} have nonzero product",
                position + 1
            ),
            ReflectorError::EntryOutOfRange { position, value } => {
                write!(f, "sequence entry {position} = {value} out of range")
            }
            ReflectorError::MixedSemigroups => {
                write!(f, "operands live over different semigroups")
            }
        }
    }
}

impl std::error::Error for ReflectorError {}

/// An element of the 0-reflector: a sequence of nonzero elements of a fixed
/// semigroup with vanishing consecutive products.
#[derive(Clone)]
pub struct ReflectorElement {
    semigroup: Arc<FiniteZeroSemigroup>,
    seq: Vec<usize>,
}

impl PartialEq for ReflectorElement {
    fn eq(&self, other: &Self) -> bool {
        self.seq == other.seq && *self.semigroup == *other.semigroup
    }
}

impl Eq for ReflectorElement {}

impl fmt::Debug for ReflectorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.seq.iter().map(|&i| self.semigroup.name(i)).collect();
        write!(f, "<{}>", names.join(","))
    }
}

/// Checks the defining invariant of a reflector sequence: nonempty, nonzero
/// in-range entries, vanishing consecutive products.
pub(crate) fn validate_sequence(
    s: &FiniteZeroSemigroup,
    seq: &[usize],
) -> Result<(), ReflectorError> {
    if seq.is_empty() {
        return Err(ReflectorError::EmptySequence);
    }
    for (i, &x) in seq.iter().enumerate() {
        if x >= s.size() {
            return Err(ReflectorError::EntryOutOfRange {
                position: i,
                value: x,
            });
        }
        if x == 0 {
            return Err(ReflectorError::ZeroEntry { position: i });
        }
    }
    for i in 0..seq.len() - 1 {
        if s.product(seq[i], seq[i + 1]) != 0 {
            return Err(ReflectorError::NonzeroAdjacentProduct { position: i });
        }
    }
    Ok(())
}

impl ReflectorElement {
    pub fn new(
        semigroup: Arc<FiniteZeroSemigroup>,
        seq: Vec<usize>,
    ) -> Result<Self, ReflectorError> {
        validate_sequence(&semigroup, &seq)?;
        Ok(ReflectorElement { semigroup, seq })
    }

    /// The singleton sequence of one nonzero element.
    pub fn singleton(
        semigroup: Arc<FiniteZeroSemigroup>,
        element: usize,
    ) -> Result<Self, ReflectorError> {
        Self::new(semigroup, vec![element])
    }

    pub fn seq(&self) -> &[usize] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        false // sequences are nonempty by construction
    }

    pub fn semigroup(&self) -> &Arc<FiniteZeroSemigroup> {
        &self.semigroup
    }

    /// Product in the 0-reflector: merge at the seam when the seam product is
    /// nonzero, else concatenate. Merging cannot break the zero-product
    /// invariant (associativity pushes the old zeros through the merged
    /// entry), but the result is re-validated and any violation reported.
    pub fn multiply(&self, other: &ReflectorElement) -> Result<ReflectorElement, ReflectorError> {
        if *self.semigroup != *other.semigroup {
            return Err(ReflectorError::MixedSemigroups);
        }
        let s = &self.semigroup;
        let last = *self.seq.last().expect("nonempty");
        let first = other.seq[0];
        let seam = s.product(last, first);
        let mut seq = Vec::with_capacity(self.seq.len() + other.seq.len());
        if seam != 0 {
            seq.extend_from_slice(&self.seq[..self.seq.len() - 1]);
            seq.push(seam);
            seq.extend_from_slice(&other.seq[1..]);
        } else {
            seq.extend_from_slice(&self.seq);
            seq.extend_from_slice(&other.seq);
        }
        validate_sequence(s, &seq)?;
        Ok(ReflectorElement {
            semigroup: Arc::clone(s),
            seq,
        })
    }

    /// The matrix of the induced action of this reflector element on a
    /// 0-module: `M(s_n) * ... * M(s_1)` in column convention.
    pub fn action(&self, module: &ZeroModuleAction) -> IntMatrix {
        let mut m = module.matrix(self.seq[0]).clone();
        for &x in &self.seq[1..] {
            m = module.matrix(x).mul(&m);
        }
        m
    }
}

/// All sequences reachable from `seq` by one elementary move, in either
/// direction: same-length moves shift a factor across a seam, and length
/// moves split one entry in two or merge two entries into one. Only moves
/// whose result is again a valid sequence are emitted.
pub fn neighbor_sequences(s: &FiniteZeroSemigroup, seq: &[usize]) -> BTreeSet<Vec<usize>> {
    debug_assert!(validate_sequence(s, seq).is_ok());
    let mut out = BTreeSet::new();
    let m = seq.len();

    let valid = |candidate: &[usize]| validate_sequence(s, candidate).is_ok();

    // Same length, shifting across the seam at (i, i+1).
    for i in 0..m.saturating_sub(1) {
        // forward: seq[i] = t*u, replace by (t, u*seq[i+1])
        for &(t, u) in s.factorizations(seq[i]) {
            if t == 0 || u == 0 {
                continue;
            }
            let glued = s.product(u, seq[i + 1]);
            if glued == 0 {
                continue;
            }
            let mut cand = seq.to_vec();
            cand[i] = t;
            cand[i + 1] = glued;
            if valid(&cand) {
                out.insert(cand);
            }
        }
        // backward: seq[i+1] = u*w, replace by (seq[i]*u, w)
        for &(u, w) in s.factorizations(seq[i + 1]) {
            if u == 0 || w == 0 {
                continue;
            }
            let glued = s.product(seq[i], u);
            if glued == 0 {
                continue;
            }
            let mut cand = seq.to_vec();
            cand[i] = glued;
            cand[i + 1] = w;
            if valid(&cand) {
                out.insert(cand);
            }
        }
    }

    // Merge: an interior entry seq[i] = u*v folds into its neighbors.
    // Interior means both neighbors exist.
    for i in 1..m.saturating_sub(1) {
        for &(u, v) in s.factorizations(seq[i]) {
            if u == 0 || v == 0 {
                continue;
            }
            let left = s.product(seq[i - 1], u);
            let right = s.product(v, seq[i + 1]);
            if left == 0 || right == 0 {
                continue;
            }
            let mut cand = Vec::with_capacity(m - 1);
            cand.extend_from_slice(&seq[..i - 1]);
            cand.push(left);
            cand.push(right);
            cand.extend_from_slice(&seq[i + 2..]);
            if valid(&cand) {
                out.insert(cand);
            }
        }
    }

    // Split: insert a fresh interior entry u*v between positions i-1 and i,
    // peeling u off seq[i-1] on the left and v off seq[i] on the right.
    for i in 1..m {
        for &(left, u) in s.factorizations(seq[i - 1]) {
            if left == 0 || u == 0 {
                continue;
            }
            for &(v, right) in s.factorizations(seq[i]) {
                if v == 0 || right == 0 {
                    continue;
                }
                let mid = s.product(u, v);
                if mid == 0 {
                    continue;
                }
                let mut cand = Vec::with_capacity(m + 1);
                cand.extend_from_slice(&seq[..i - 1]);
                cand.push(left);
                cand.push(mid);
                cand.push(right);
                cand.extend_from_slice(&seq[i + 1..]);
                if valid(&cand) {
                    out.insert(cand);
                }
            }
        }
    }

    out.remove(seq);
    out
}

/// Verdict of a bounded equivalence search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceVerdict {
    Equivalent,
    Distinct,
    /// The search budget or length cap was exhausted first.
    Unknown,
}

/// Search bounds for [`sequences_equivalent`].
#[derive(Debug, Clone, Copy)]
pub struct SearchBounds {
    /// Total sequences visited across both sides.
    pub budget: usize,
    /// Sequences longer than this are not expanded.
    pub length_cap: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            budget: DEFAULT_SEQUENCE_BUDGET,
            length_cap: DEFAULT_LENGTH_CAP,
        }
    }
}

/// Decides, within bounds, whether two sequences represent the same reflector
/// element: bidirectional breadth-first search over elementary moves.
/// `Distinct` is only returned when both equivalence classes were exhausted
/// without truncation.
pub fn sequences_equivalent(
    x: &ReflectorElement,
    y: &ReflectorElement,
    bounds: SearchBounds,
) -> Result<SequenceVerdict, ReflectorError> {
    if *x.semigroup != *y.semigroup {
        return Err(ReflectorError::MixedSemigroups);
    }
    if x.seq == y.seq {
        return Ok(SequenceVerdict::Equivalent);
    }
    let s = &x.semigroup;

    let mut visited: [HashSet<Vec<usize>>; 2] = [HashSet::new(), HashSet::new()];
    let mut queue: [VecDeque<Vec<usize>>; 2] = [VecDeque::new(), VecDeque::new()];
    visited[0].insert(x.seq.clone());
    queue[0].push_back(x.seq.clone());
    visited[1].insert(y.seq.clone());
    queue[1].push_back(y.seq.clone());

    let mut truncated = false;
    let mut spent = 0usize;

    while !queue[0].is_empty() || !queue[1].is_empty() {
        // expand the smaller live frontier first
        let side =
            if queue[1].is_empty() || (!queue[0].is_empty() && queue[0].len() <= queue[1].len()) {
                0
            } else {
                1
            };
        let current = queue[side].pop_front().expect("nonempty frontier");
        if current.len() > bounds.length_cap {
            truncated = true;
            continue;
        }
        for next in neighbor_sequences(s, &current) {
            if visited[side].contains(&next) {
                continue;
            }
            if visited[1 - side].contains(&next) {
                return Ok(SequenceVerdict::Equivalent);
            }
            spent += 1;
            if spent > bounds.budget {
                return Ok(SequenceVerdict::Unknown);
            }
            visited[side].insert(next.clone());
            queue[side].push_back(next);
        }
    }

    if truncated {
        Ok(SequenceVerdict::Unknown)
    } else {
        Ok(SequenceVerdict::Distinct)
    }
}

/// Drops every zero relation from a presentation, leaving a presentation of
/// the 0-reflector on the same generators: explicit `= 0` relations and the
/// zero-pair set go away, and a two-sided relation whose value is zero
/// (detected by bounded zero-pair exposure) goes with them.
pub fn drop_zero_relations(p: &Presentation) -> Presentation {
    let bounds = crate::presentation::RewriteBounds::for_presentation(p);
    let relations = p
        .relations()
        .iter()
        .filter(|rel| match &rel.rhs {
            RelationRhs::Zero => false,
            RelationRhs::Word(_) => {
                // keep unless provably zero within bounds
                !matches!(
                    crate::presentation::word_is_zero(p, &rel.lhs, &bounds),
                    Some(true)
                )
            }
        })
        .cloned()
        .collect();
    Presentation::new(p.generators().to_vec(), relations, BTreeSet::new())
        .expect("surviving relations stay well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Word;

    fn arc(s: FiniteZeroSemigroup) -> Arc<FiniteZeroSemigroup> {
        Arc::new(s)
    }

    /// {0,a,b,c,d,x} with ab = cd = x, everything else zero.
    fn example_table() -> Arc<FiniteZeroSemigroup> {
        let names = ["0", "a", "b", "c", "d", "x"].map(String::from).to_vec();
        let mut table = vec![0; 36];
        table[1 * 6 + 2] = 5;
        table[3 * 6 + 4] = 5;
        arc(FiniteZeroSemigroup::new(names, table).unwrap())
    }

    /// {0,a,b,c,ab,bc} with a*b = ab and b*c = bc only.
    fn chain_table() -> Arc<FiniteZeroSemigroup> {
        let names = ["0", "a", "b", "c", "ab", "bc"].map(String::from).to_vec();
        let mut table = vec![0; 36];
        table[1 * 6 + 2] = 4;
        table[2 * 6 + 3] = 5;
        arc(FiniteZeroSemigroup::new(names, table).unwrap())
    }

    fn null_semigroup(n: usize) -> Arc<FiniteZeroSemigroup> {
        let names = (0..n).map(|i| format!("e{i}")).collect();
        arc(FiniteZeroSemigroup::new(names, vec![0; n * n]).unwrap())
    }

    #[test]
    fn new_rejects_nonzero_adjacent_products() {
        let s = example_table();
        assert!(matches!(
            ReflectorElement::new(s, vec![1, 2]),
            Err(ReflectorError::NonzeroAdjacentProduct { position: 0 })
        ));
    }

    #[test]
    fn multiply_merges_when_seam_is_nonzero() {
        let s = example_table();
        let a = ReflectorElement::singleton(s.clone(), 1).unwrap();
        let b = ReflectorElement::singleton(s.clone(), 2).unwrap();
        let ab = a.multiply(&b).unwrap();
        assert_eq!(ab.seq(), &[5]); // <a><b> = <x>
    }

    #[test]
    fn multiply_concatenates_when_seam_is_zero() {
        let s = example_table();
        let a = ReflectorElement::singleton(s.clone(), 1).unwrap();
        let b = ReflectorElement::singleton(s.clone(), 2).unwrap();
        let ba = b.multiply(&a).unwrap();
        assert_eq!(ba.seq(), &[2, 1]); // <b><a> = <b,a>
    }

    #[test]
    fn multiply_rejects_mixed_semigroups() {
        let a = ReflectorElement::singleton(example_table(), 1).unwrap();
        let b = ReflectorElement::singleton(null_semigroup(3), 1).unwrap();
        assert_eq!(a.multiply(&b), Err(ReflectorError::MixedSemigroups));
    }

    #[test]
    fn neighbor_contains_factor_shift() {
        // (ab, c) relates to (a, bc): ab = a*b and b*c = bc
        let s = chain_table();
        let moves = neighbor_sequences(&s, &[4, 3]);
        assert!(moves.contains(&vec![1, 5]));
        // singletons admit no moves at all: both move families need at
        // least one adjacent pair
        assert!(neighbor_sequences(&s, &[4]).is_empty());
    }

    #[test]
    fn singleton_in_null_semigroup_has_no_moves() {
        let s = null_semigroup(4);
        assert!(neighbor_sequences(&s, &[2]).is_empty());
    }

    #[test]
    fn equivalence_reflexive_and_one_step() {
        let s = chain_table();
        let x = ReflectorElement::new(s.clone(), vec![4, 3]).unwrap();
        let y = ReflectorElement::new(s.clone(), vec![1, 5]).unwrap();
        assert_eq!(
            sequences_equivalent(&x, &x, SearchBounds::default()).unwrap(),
            SequenceVerdict::Equivalent
        );
        assert_eq!(
            sequences_equivalent(&x, &y, SearchBounds::default()).unwrap(),
            SequenceVerdict::Equivalent
        );
    }

    #[test]
    fn distinct_singletons_in_null_semigroup() {
        let s = null_semigroup(3);
        let x = ReflectorElement::singleton(s.clone(), 1).unwrap();
        let y = ReflectorElement::singleton(s.clone(), 2).unwrap();
        assert_eq!(
            sequences_equivalent(&x, &y, SearchBounds::default()).unwrap(),
            SequenceVerdict::Distinct
        );
    }

    #[test]
    fn zero_budget_reports_unknown() {
        // (ab, c) and the singleton (b) are distinct, but certifying that
        // needs the closure of (ab, c) which a zero budget cannot afford
        let s = chain_table();
        let x = ReflectorElement::new(s.clone(), vec![4, 3]).unwrap();
        let y = ReflectorElement::singleton(s.clone(), 2).unwrap();
        let bounds = SearchBounds {
            budget: 0,
            length_cap: 12,
        };
        assert_eq!(
            sequences_equivalent(&x, &y, bounds).unwrap(),
            SequenceVerdict::Unknown
        );
    }

    #[test]
    fn multiply_associative_up_to_equivalence() {
        let s = example_table();
        // all length-<=2 sequences over the example table
        let mut elements = Vec::new();
        for i in 1..6 {
            elements.push(ReflectorElement::singleton(s.clone(), i).unwrap());
            for j in 1..6 {
                if let Ok(e) = ReflectorElement::new(s.clone(), vec![i, j]) {
                    elements.push(e);
                }
            }
        }
        for x in &elements {
            for y in &elements {
                for z in &elements {
                    let left = x.multiply(y).unwrap().multiply(z).unwrap();
                    let right = x.multiply(&y.multiply(z).unwrap()).unwrap();
                    let verdict =
                        sequences_equivalent(&left, &right, SearchBounds::default()).unwrap();
                    assert_eq!(verdict, SequenceVerdict::Equivalent, "{x:?} {y:?} {z:?}");
                }
            }
        }
    }

    #[test]
    fn action_of_singleton_is_the_matrix() {
        let s = example_table();
        let module = ZeroModuleAction::trivial(s.clone(), crate::abelian::FGAbelianGroup::free(2));
        let x = ReflectorElement::new(s, vec![2, 1]).unwrap();
        assert_eq!(x.action(&module), IntMatrix::identity(2));
    }

    #[test]
    fn action_multiplicative_over_multiply() {
        use crate::abelian::FGAbelianGroup;
        let s = null_semigroup(4);
        // diagonal action by 2 and 3 on Z/12: any assignment works over a
        // null semigroup
        let act = vec![
            IntMatrix::from_rows(&[vec![2]]),
            IntMatrix::from_rows(&[vec![3]]),
            IntMatrix::from_rows(&[vec![5]]),
        ];
        let module =
            ZeroModuleAction::new(s.clone(), FGAbelianGroup::from_i64(&[12]), act).unwrap();
        let x = ReflectorElement::new(s.clone(), vec![1, 2]).unwrap();
        let y = ReflectorElement::new(s.clone(), vec![3, 1]).unwrap();
        let xy = x.multiply(&y).unwrap();
        let lhs = xy.action(&module);
        let rhs = y.action(&module).mul(&x.action(&module));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn drop_zero_relations_removes_explicit_zeros() {
        let gens = vec!["a".into(), "b".into(), "c".into(), "d".into()];
        let relations = vec![
            crate::presentation::Relation {
                lhs: Word::new(vec![0, 1]).unwrap(),
                rhs: RelationRhs::Word(Word::new(vec![2, 3]).unwrap()),
            },
            crate::presentation::Relation {
                lhs: Word::new(vec![1, 0]).unwrap(),
                rhs: RelationRhs::Zero,
            },
        ];
        let p = Presentation::new(gens, relations, BTreeSet::new()).unwrap();
        let reflector = drop_zero_relations(&p);
        assert_eq!(reflector.relations().len(), 1);
        assert!(reflector.zero_pairs().is_empty());
    }

    #[test]
    fn drop_zero_relations_on_pure_zero_presentation_gives_free() {
        let gens = vec!["a".into(), "b".into()];
        let relations = vec![crate::presentation::Relation {
            lhs: Word::new(vec![0, 0]).unwrap(),
            rhs: RelationRhs::Zero,
        }];
        let mut gamma = BTreeSet::new();
        gamma.insert((1, 1));
        let p = Presentation::new(gens, relations, gamma).unwrap();
        let reflector = drop_zero_relations(&p);
        assert!(reflector.relations().is_empty());
        assert!(reflector.zero_pairs().is_empty());
    }

    #[test]
    fn drop_zero_relations_identity_without_zeros() {
        let gens = vec!["a".into(), "b".into(), "c".into(), "d".into()];
        let relations = vec![crate::presentation::Relation {
            lhs: Word::new(vec![0, 1]).unwrap(),
            rhs: RelationRhs::Word(Word::new(vec![2, 3]).unwrap()),
        }];
        let p = Presentation::new(gens.clone(), relations.clone(), BTreeSet::new()).unwrap();
        let reflector = drop_zero_relations(&p);
        assert_eq!(reflector.relations(), p.relations());
        assert_eq!(reflector.generators(), p.generators());
    }

    #[test]
    fn graph_construction_round_trips_through_zero_dropping() {
        // building zero pairs from the relation graph and then dropping all
        // zero structure returns exactly the original relations
        let gens = vec!["a".into(), "b".into(), "c".into(), "d".into(), "e".into()];
        let relations = vec![
            crate::presentation::Relation {
                lhs: Word::new(vec![0, 1]).unwrap(),
                rhs: RelationRhs::Word(Word::new(vec![2, 3]).unwrap()),
            },
            crate::presentation::Relation {
                lhs: Word::new(vec![0, 4, 1]).unwrap(),
                rhs: RelationRhs::Word(Word::new(vec![2, 4, 3]).unwrap()),
            },
        ];
        let p = Presentation::new(gens, relations, BTreeSet::new()).unwrap();
        let with_pairs = crate::presentation::cat0_from_graph(&p).unwrap();
        assert!(!with_pairs.zero_pairs().is_empty());
        let back = drop_zero_relations(&with_pairs);
        assert_eq!(back, p);
    }

    #[test]
    fn verdict_symmetry_and_closure_under_multiply() {
        let s = chain_table();
        let mut elements = vec![
            ReflectorElement::new(s.clone(), vec![4, 3]).unwrap(),
            ReflectorElement::new(s.clone(), vec![1, 5]).unwrap(),
            ReflectorElement::singleton(s.clone(), 2).unwrap(),
            ReflectorElement::new(s.clone(), vec![5, 1]).unwrap(),
        ];
        for i in 1..6 {
            elements.push(ReflectorElement::singleton(s.clone(), i).unwrap());
        }
        let bounds = SearchBounds::default();
        for x in &elements {
            for y in &elements {
                let xy = sequences_equivalent(x, y, bounds).unwrap();
                let yx = sequences_equivalent(y, x, bounds).unwrap();
                assert_eq!(xy, yx, "verdict not symmetric for {x:?}, {y:?}");
                if xy == SequenceVerdict::Equivalent {
                    for z in &elements {
                        let zx = z.multiply(x).unwrap();
                        let zy = z.multiply(y).unwrap();
                        assert_eq!(
                            sequences_equivalent(&zx, &zy, bounds).unwrap(),
                            SequenceVerdict::Equivalent,
                            "left multiplication broke equivalence"
                        );
                        let xz = x.multiply(z).unwrap();
                        let yz = y.multiply(z).unwrap();
                        assert_eq!(
                            sequences_equivalent(&xz, &yz, bounds).unwrap(),
                            SequenceVerdict::Equivalent,
                            "right multiplication broke equivalence"
                        );
                    }
                }
            }
        }
    }
}
