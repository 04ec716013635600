//! End-to-end computation of homology groups of a finitely presented
//! semigroup through a finite categorical-at-zero model.
//!
//! Given a presentation of `T` without zero structure, the pipeline builds a
//! finite semigroup `S` whose 0-reflector is `T` by one of two routes: the
//! quotient by the ideal of non-divisors, or the zero-pair complement of the
//! relation graph. It then checks categoricity at zero on the actual table,
//! interprets the given generator matrices as a 0-module over `S`, computes
//! 0-homology in a range of degrees, and reports the groups as the homology
//! of `T`. Every hypothesis that was machine-checked is recorded in the
//! outcome.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::abelian::{AbelianGroupClass, FGAbelianGroup, IntMatrix};
use crate::homology::{zero_chain_complex, HomologyError};
use crate::presentation::{
    cat0_from_graph, entrance_exit_check, finite_quotient, ideal_quotient, Presentation,
    PresentationError, PresentedQuotient, RelationRhs, RewriteBounds,
};
use crate::zmodule::{ActionError, ZeroModuleAction};

/// Which finite model to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PipelineRoute {
    /// Quotient by the ideal of elements dividing no relation side.
    Ideal,
    /// Zero pairs on the complement of the relation graph.
    Graph,
}

impl fmt::Display for PipelineRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineRoute::Ideal => write!(f, "ideal"),
            PipelineRoute::Graph => write!(f, "graph"),
        }
    }
}

/// A hypothesis the pipeline verified mechanically before using it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifiedFact {
    IdealHypotheses,
    EntranceExit,
    LongestPath {
        length: usize,
    },
    CategoricalAtZero,
    ModuleRelationsConsistent,
    /// Degrees above this bound have empty tuple bases, so their groups
    /// vanish; recorded when the relation graph is acyclic.
    VanishingAbove {
        degree: usize,
    },
}

impl fmt::Display for VerifiedFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifiedFact::IdealHypotheses => {
                write!(f, "non-divisor ideal nonempty and free of generators")
            }
            VerifiedFact::EntranceExit => {
                write!(f, "relation words start at entrances and end at exits")
            }
            VerifiedFact::LongestPath { length } => {
                write!(f, "longest relation-graph path has {length} edges")
            }
            VerifiedFact::CategoricalAtZero => write!(f, "finite model is categorical at zero"),
            VerifiedFact::ModuleRelationsConsistent => {
                write!(f, "generator matrices satisfy the defining relations")
            }
            VerifiedFact::VanishingAbove { degree } => {
                write!(f, "all groups above degree {degree} vanish")
            }
        }
    }
}

#[derive(Debug)]
pub enum PipelineError {
    Presentation(PresentationError),
    /// The finite model is not categorical at zero; witness triple attached.
    NotCategorical {
        witness: (usize, usize, usize),
    },
    /// A generator matrix assignment breaks a defining relation.
    ModuleInconsistent {
        relation: usize,
    },
    Action(ActionError),
    Homology(HomologyError),
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineError::Presentation(e) => write!(f, "{e}"),
            PipelineError::NotCategorical { witness } => {
                write!(
                    f,
                    "finite model not categorical at zero, witness {witness:?}"
                )
            }
            PipelineError::ModuleInconsistent { relation } => {
                write!(f, "generator matrices violate relation {relation}")
            }
            PipelineError::Action(e) => write!(f, "{e}"),
            PipelineError::Homology(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for PipelineError {}

impl From<PresentationError> for PipelineError {
    fn from(e: PresentationError) -> Self {
        PipelineError::Presentation(e)
    }
}

impl From<ActionError> for PipelineError {
    fn from(e: ActionError) -> Self {
        PipelineError::Action(e)
    }
}

impl From<HomologyError> for PipelineError {
    fn from(e: HomologyError) -> Self {
        PipelineError::Homology(e)
    }
}

/// Generator matrices defining module coefficients for a presented semigroup:
/// the base group plus one square matrix per generator.
#[derive(Debug, Clone)]
pub struct GeneratorActions {
    pub base: FGAbelianGroup,
    pub matrices: Vec<IntMatrix>,
}

impl GeneratorActions {
    /// Every generator acts as the identity.
    pub fn trivial(generator_count: usize, base: FGAbelianGroup) -> Self {
        let m = IntMatrix::identity(base.rank());
        GeneratorActions {
            base,
            matrices: vec![m; generator_count],
        }
    }

    /// Every generator acts as zero.
    pub fn zero(generator_count: usize, base: FGAbelianGroup) -> Self {
        let m = IntMatrix::zeros(base.rank(), base.rank());
        GeneratorActions {
            base,
            matrices: vec![m; generator_count],
        }
    }

    /// Matrix of a word, in column convention: letters act in order.
    fn word_matrix(&self, word: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::identity(self.base.rank());
        for &letter in word {
            m = self.matrices[letter].mul(&m);
        }
        m
    }
}

/// Everything the pipeline produced.
#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub route: PipelineRoute,
    pub model: PresentedQuotient,
    pub verified: Vec<VerifiedFact>,
    /// `groups[n]` is the degree-`n` homology group, `0 <= n <= max_dim`.
    pub groups: Vec<AbelianGroupClass>,
}

fn congruent_matrices(base: &FGAbelianGroup, a: &IntMatrix, b: &IntMatrix) -> bool {
    use num_integer::Integer;
    use num_traits::Zero;
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

/// Interprets generator matrices as a 0-module over a finite model whose
/// elements carry defining words: each element acts by its word's matrix.
/// Consistency across the defining relations is checked first, which makes
/// the assignment independent of the chosen representative words.
pub fn module_over_model(
    presentation: &Presentation,
    model: &PresentedQuotient,
    actions: &GeneratorActions,
) -> Result<ZeroModuleAction, PipelineError> {
    for (k, rel) in presentation.relations().iter().enumerate() {
        if let RelationRhs::Word(rhs) = &rel.rhs {
            let lhs_m = actions.word_matrix(rel.lhs.letters());
            let rhs_m = actions.word_matrix(rhs.letters());
            if !congruent_matrices(&actions.base, &lhs_m, &rhs_m) {
                return Err(PipelineError::ModuleInconsistent { relation: k });
            }
        }
    }
    let matrices: Vec<IntMatrix> = model
        .element_words
        .iter()
        .map(|w| actions.word_matrix(w))
        .collect();
    let semigroup = Arc::new(model.semigroup.clone());
    Ok(ZeroModuleAction::new(
        semigroup,
        actions.base.clone(),
        matrices,
    )?)
}

/// Runs the whole pipeline: build the finite model along the chosen route,
/// verify its hypotheses, interpret the coefficients, and compute homology
/// for all degrees up to `max_dim`.
pub fn run_pipeline(
    presentation: &Presentation,
    actions: &GeneratorActions,
    route: PipelineRoute,
    max_dim: usize,
    bounds: &RewriteBounds,
) -> Result<PipelineOutcome, PipelineError> {
    let mut verified = Vec::new();

    let model = match route {
        PipelineRoute::Ideal => {
            let q = ideal_quotient(presentation, bounds)?;
            verified.push(VerifiedFact::IdealHypotheses);
            q
        }
        PipelineRoute::Graph => {
            let graph = entrance_exit_check(presentation)?;
            verified.push(VerifiedFact::EntranceExit);
            if let Ok(length) = graph.longest_path() {
                verified.push(VerifiedFact::LongestPath { length });
                verified.push(VerifiedFact::VanishingAbove { degree: length + 1 });
            }
            let with_pairs = cat0_from_graph(presentation)?;
            finite_quotient(&with_pairs, bounds)?
        }
    };

    if let Some(witness) = model.semigroup.categoricity_witness() {
        return Err(PipelineError::NotCategorical { witness });
    }
    verified.push(VerifiedFact::CategoricalAtZero);

    let module = module_over_model(presentation, &model, actions)?;
    verified.push(VerifiedFact::ModuleRelationsConsistent);

    let semigroup = Arc::new(model.semigroup.clone());
    let complex = zero_chain_complex(&semigroup, &module, max_dim + 1)?;
    let mut groups = Vec::with_capacity(max_dim + 1);
    for n in 0..=max_dim {
        let h = crate::abelian::homology_of_complex(&complex, n).map_err(HomologyError::from)?;
        groups.push(h);
    }

    Ok(PipelineOutcome {
        route,
        model,
        verified,
        groups,
    })
}

/// Element names of the finite model keyed by their defining words, spelled
/// in the presentation's generators.
pub fn element_spellings(
    presentation: &Presentation,
    model: &PresentedQuotient,
) -> BTreeMap<String, usize> {
    model
        .element_words
        .iter()
        .enumerate()
        .map(|(i, w)| (presentation.spell(w), i + 1))
        .collect()
}
