//! Semigroup presentations: generators, two-sided relations, and a set of
//! generator pairs forced to multiply to zero.
//!
//! The module decides categoricity at zero from the relations alone, builds
//! the adjacent-letter digraph of a relation system with its entrance/exit
//! structure, and realizes two finite models of a presented semigroup: the
//! quotient by the ideal of non-divisors, and the nilpotent quotient of a
//! presentation whose allowed-pair graph is acyclic.
//!
//! The word problem backend is a bounded congruence closure: relations are
//! applied in both directions under a word-length cap, classes live in a
//! union-find, and any truncated search surfaces as an `Undecided` error
//! rather than a wrong answer.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::semigroup::FiniteZeroSemigroup;
use crate::semigroup::SemigroupError;

/// Default cap on congruence-closure work, in visited words.
pub const DEFAULT_CLOSURE_BUDGET: usize = 100_000;

/// A nonempty word in the generators, by index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<usize>,
}

impl Word {
    pub fn new(letters: Vec<usize>) -> Result<Self, PresentationError> {
        if letters.is_empty() {
            return Err(PresentationError::EmptyWord);
        }
        Ok(Word { letters })
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    pub fn first(&self) -> usize {
        self.letters[0]
    }

    pub fn last(&self) -> usize {
        *self.letters.last().expect("nonempty")
    }
}

/// Right-hand side of a defining relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationRhs {
    Word(Word),
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub lhs: Word,
    pub rhs: RelationRhs,
}

/// A presentation: named generators, defining relations, and the set of
/// ordered generator pairs `(i, j)` with `a_i a_j = 0`.
///
/// Two-sided relations are normalized so the left side is at least as long
/// as the right side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relations: Vec<Relation>,
    zero_pairs: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PresentationError {
    EmptyWord,
    LetterOutOfRange {
        letter: usize,
    },
    PairOutOfRange {
        pair: (usize, usize),
    },
    Parse {
        line: usize,
        message: String,
    },
    /// The operation needs every relation two-sided.
    ZeroRelationPresent {
        relation: usize,
    },
    /// The operation needs a presentation without zero structure.
    ZeroStructurePresent,
    /// A first letter is not an entrance or a last letter is not an exit.
    EntranceExitViolated {
        letter: usize,
    },
    /// The graph has a circuit; witness lists its vertices in order.
    CyclePresent {
        cycle: Vec<usize>,
    },
    /// The word problem search ran out of its budget or length cap.
    Undecided {
        context: String,
    },
    /// Every generator must divide some relation's left side.
    GeneratorInIdeal {
        generator: usize,
    },
    /// The set of non-divisors could not be certified nonempty.
    IdealNotCertified,
    NoRelations,
    /// A two-sided relation whose value is zero in the quotient.
    DisguisedZeroRelation {
        relation: usize,
    },
    TableConstruction(SemigroupError),
}

impl fmt::Display for PresentationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresentationError::EmptyWord => write!(f, "words must be nonempty"),
            PresentationError::LetterOutOfRange { letter } => {
                write!(f, "letter {letter} outside the generator range")
            }
            PresentationError::PairOutOfRange { pair } => {
                write!(f, "zero pair {pair:?} outside the generator range")
            }
            PresentationError::Parse { line, message } => {
                write!(f, "parse error at line {line}: {message}")
            }
            PresentationError::ZeroRelationPresent { relation } => {
                write!(f, "relation {relation} has a zero right-hand side")
            }
            PresentationError::ZeroStructurePresent => {
                write!(f, "presentation carries zero relations or zero pairs")
            }
            PresentationError::EntranceExitViolated { letter } => {
                write!(f, "letter {letter} violates the entrance/exit condition")
            }
            PresentationError::CyclePresent { cycle } => {
                write!(f, "graph contains the circuit {cycle:?}")
            }
            PresentationError::Undecided { context } => {
                write!(f, "undecided within bounds: {context}")
            }
            PresentationError::GeneratorInIdeal { generator } => {
                write!(f, "generator {generator} divides no relation side")
            }
            PresentationError::IdealNotCertified => {
                write!(f, "could not certify a nonempty ideal of non-divisors")
            }
            PresentationError::NoRelations => write!(f, "presentation has no relations"),
            PresentationError::DisguisedZeroRelation { relation } => {
                write!(f, "relation {relation} equates words that are zero")
            }
            PresentationError::TableConstruction(e) => write!(f, "quotient table invalid: {e}"),
        }
    }
}

impl std::error::Error for PresentationError {}

impl Presentation {
    /// Validates ranges and normalizes each two-sided relation so that
    /// `lhs` is at least as long as `rhs`.
    pub fn new(
        generators: Vec<String>,
        relations: Vec<Relation>,
        zero_pairs: BTreeSet<(usize, usize)>,
    ) -> Result<Self, PresentationError> {
        let n = generators.len();
        let check_word = |w: &Word| {
            w.letters.iter().find(|&&l| l >= n).map_or(Ok(()), |&l| {
                Err(PresentationError::LetterOutOfRange { letter: l })
            })
        };
        let mut normalized = Vec::with_capacity(relations.len());
        for rel in relations {
            check_word(&rel.lhs)?;
            match rel.rhs {
                RelationRhs::Zero => normalized.push(rel),
                RelationRhs::Word(rhs) => {
                    check_word(&rhs)?;
                    if rhs.len() > rel.lhs.len() {
                        normalized.push(Relation {
                            lhs: rhs,
                            rhs: RelationRhs::Word(rel.lhs),
                        });
                    } else {
                        normalized.push(Relation {
                            lhs: rel.lhs,
                            rhs: RelationRhs::Word(rhs),
                        });
                    }
                }
            }
        }
        for &(i, j) in &zero_pairs {
            if i >= n || j >= n {
                return Err(PresentationError::PairOutOfRange { pair: (i, j) });
            }
        }
        Ok(Presentation {
            generators,
            relations: normalized,
            zero_pairs,
        })
    }

    /// Parses the presentation text format:
    ///
    /// ```text
    /// generators: a b c d e
    /// a.b = c.d
    /// a.e.b = c.e.d
    /// gamma: a.a b.c            # explicit zero pairs, or:
    /// gamma = complement-of-delta
    /// ```
    ///
    /// Relations may have a `0` right side. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        let mut generators: Option<Vec<String>> = None;
        let mut relations: Vec<Relation> = Vec::new();
        let mut zero_pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut complement_of_delta = false;

        let err = |line: usize, message: &str| PresentationError::Parse {
            line,
            message: message.to_string(),
        };

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("generators:") {
                if generators.is_some() {
                    return Err(err(line_no, "generators listed twice"));
                }
                let names: Vec<String> = rest.split_whitespace().map(String::from).collect();
                if names.is_empty() {
                    return Err(err(line_no, "no generator names"));
                }
                let mut seen = BTreeSet::new();
                for name in &names {
                    if !seen.insert(name) {
                        return Err(err(line_no, &format!("duplicate generator '{name}'")));
                    }
                }
                generators = Some(names);
                continue;
            }
            let gens = generators
                .as_ref()
                .ok_or_else(|| err(line_no, "generators must come first"))?;
            let index_of = |name: &str| gens.iter().position(|g| g == name);
            let parse_word = |spelled: &str| -> Result<Word, PresentationError> {
                let letters = spelled
                    .split('.')
                    .map(|part| {
                        index_of(part.trim())
                            .ok_or_else(|| err(line_no, &format!("unknown generator '{part}'")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Word::new(letters)
            };
            if line == "gamma = complement-of-delta" {
                complement_of_delta = true;
                continue;
            }
            if let Some(rest) = line.strip_prefix("gamma:") {
                for pair in rest.split_whitespace() {
                    let w = parse_word(pair)?;
                    if w.len() != 2 {
                        return Err(err(line_no, "zero pairs must have exactly two letters"));
                    }
                    zero_pairs.insert((w.letters[0], w.letters[1]));
                }
                continue;
            }
            let Some((lhs_text, rhs_text)) = line.split_once('=') else {
                return Err(err(line_no, "expected a relation 'LHS = RHS'"));
            };
            let lhs = parse_word(lhs_text.trim())?;
            let rhs = if rhs_text.trim() == "0" {
                RelationRhs::Zero
            } else {
                RelationRhs::Word(parse_word(rhs_text.trim())?)
            };
            relations.push(Relation { lhs, rhs });
        }

        let generators = generators.ok_or_else(|| err(0, "missing generators line"))?;
        let p = Presentation::new(generators, relations, zero_pairs)?;
        if complement_of_delta {
            cat0_from_graph(&p)
        } else {
            Ok(p)
        }
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn zero_pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.zero_pairs
    }

    /// Relations with a word on both sides, with indices into `relations`.
    fn two_sided(&self) -> impl Iterator<Item = (usize, &Word, &Word)> {
        self.relations.iter().enumerate().filter_map(|(k, rel)| {
            if let RelationRhs::Word(rhs) = &rel.rhs {
                Some((k, &rel.lhs, rhs))
            } else {
                None
            }
        })
    }

    fn has_zero_structure(&self) -> bool {
        !self.zero_pairs.is_empty()
            || self
                .relations
                .iter()
                .any(|r| matches!(r.rhs, RelationRhs::Zero))
    }

    /// Spells a word in generator names, dot-joining multi-character names.
    pub fn spell(&self, letters: &[usize]) -> String {
        let plain = self.generators.iter().all(|g| g.chars().count() == 1);
        let parts: Vec<&str> = letters
            .iter()
            .map(|&l| self.generators[l].as_str())
            .collect();
        if plain {
            parts.concat()
        } else {
            parts.join(".")
        }
    }

    /// The left and right zero-pair sets of a generator: elements `j` with
    /// `(j, g)` respectively `(g, j)` forced to zero.
    pub fn gamma_sets(&self, g: usize) -> (BTreeSet<usize>, BTreeSet<usize>) {
        let left = self
            .zero_pairs
            .iter()
            .filter(|&&(_, j)| j == g)
            .map(|&(i, _)| i)
            .collect();
        let right = self
            .zero_pairs
            .iter()
            .filter(|&&(i, _)| i == g)
            .map(|&(_, j)| j)
            .collect();
        (left, right)
    }
}

/// Which half of the categoricity criterion failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriterionSide {
    /// Left zero-pair sets of the two first letters differ.
    FirstLetters,
    /// Right zero-pair sets of the two last letters differ.
    LastLetters,
}

/// Verdict of the relation-level categoricity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cat0Criterion {
    Satisfied,
    Failed {
        relation: usize,
        side: CriterionSide,
    },
}

/// Relation-level categoricity test: for every two-sided relation, the first
/// letters of both sides must have equal left zero-pair sets, and the last
/// letters equal right zero-pair sets. Decides categoricity at zero of the
/// presented semigroup when the zero pairs are exactly the vanishing products.
pub fn check_cat0_criterion(p: &Presentation) -> Result<Cat0Criterion, PresentationError> {
    if let Some(k) = p
        .relations()
        .iter()
        .position(|r| matches!(r.rhs, RelationRhs::Zero))
    {
        return Err(PresentationError::ZeroRelationPresent { relation: k });
    }
    for (k, lhs, rhs) in p.two_sided() {
        let (left_p, _) = p.gamma_sets(lhs.first());
        let (left_r, _) = p.gamma_sets(rhs.first());
        if left_p != left_r {
            return Ok(Cat0Criterion::Failed {
                relation: k,
                side: CriterionSide::FirstLetters,
            });
        }
        let (_, right_q) = p.gamma_sets(lhs.last());
        let (_, right_s) = p.gamma_sets(rhs.last());
        if right_q != right_s {
            return Ok(Cat0Criterion::Failed {
                relation: k,
                side: CriterionSide::LastLetters,
            });
        }
    }
    Ok(Cat0Criterion::Satisfied)
}

/// Digraph of adjacent letter pairs across all relation words, with its
/// entrance (no in-edge) and exit (no out-edge) vertex sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationGraph {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
    entrances: BTreeSet<usize>,
    exits: BTreeSet<usize>,
}

impl RelationGraph {
    fn from_edges(vertex_count: usize, edges: BTreeSet<(usize, usize)>) -> Self {
        let entrances = (0..vertex_count)
            .filter(|&v| edges.iter().all(|&(_, j)| j != v))
            .collect();
        let exits = (0..vertex_count)
            .filter(|&v| edges.iter().all(|&(i, _)| i != v))
            .collect();
        RelationGraph {
            vertex_count,
            edges,
            entrances,
            exits,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn entrances(&self) -> &BTreeSet<usize> {
        &self.entrances
    }

    pub fn exits(&self) -> &BTreeSet<usize> {
        &self.exits
    }

    /// A circuit, as a vertex list with the repeated vertex first, if one
    /// exists.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Color {
            White,
            Gray,
            Black,
        }
        let mut color = vec![Color::White; self.vertex_count];
        let mut stack_trace: Vec<usize> = Vec::new();

        fn dfs(
            v: usize,
            g: &RelationGraph,
            color: &mut [Color],
            trace: &mut Vec<usize>,
        ) -> Option<Vec<usize>> {
            color[v] = Color::Gray;
            trace.push(v);
            for &(i, j) in &g.edges {
                if i != v {
                    continue;
                }
                match color[j] {
                    Color::Gray => {
                        let start = trace.iter().position(|&x| x == j).expect("on stack");
                        return Some(trace[start..].to_vec());
                    }
                    Color::White => {
                        if let Some(c) = dfs(j, g, color, trace) {
                            return Some(c);
                        }
                    }
                    Color::Black => {}
                }
            }
            trace.pop();
            color[v] = Color::Black;
            None
        }

        for v in 0..self.vertex_count {
            if color[v] == Color::White {
                if let Some(c) = dfs(v, self, &mut color, &mut stack_trace) {
                    return Some(c);
                }
            }
        }
        None
    }

    /// Length of the longest path in edges. Refuses cyclic graphs with a
    /// circuit witness.
    pub fn longest_path(&self) -> Result<usize, PresentationError> {
        if let Some(cycle) = self.find_cycle() {
            return Err(PresentationError::CyclePresent { cycle });
        }
        // longest path by memoized DFS over the DAG
        let mut memo: Vec<Option<usize>> = vec![None; self.vertex_count];
        fn depth(v: usize, g: &RelationGraph, memo: &mut Vec<Option<usize>>) -> usize {
            if let Some(d) = memo[v] {
                return d;
            }
            let mut best = 0;
            for &(i, j) in &g.edges {
                if i == v {
                    best = best.max(1 + depth(j, g, memo));
                }
            }
            memo[v] = Some(best);
            best
        }
        Ok((0..self.vertex_count)
            .map(|v| depth(v, self, &mut memo))
            .max()
            .unwrap_or(0))
    }
}

/// Builds the adjacent-letter digraph of the two-sided relations. Zero
/// relations are rejected.
pub fn relation_graph(p: &Presentation) -> Result<RelationGraph, PresentationError> {
    if let Some(k) = p
        .relations()
        .iter()
        .position(|r| matches!(r.rhs, RelationRhs::Zero))
    {
        return Err(PresentationError::ZeroRelationPresent { relation: k });
    }
    let mut edges = BTreeSet::new();
    for (_, lhs, rhs) in p.two_sided() {
        for word in [lhs, rhs] {
            for pair in word.letters().windows(2) {
                edges.insert((pair[0], pair[1]));
            }
        }
    }
    Ok(RelationGraph::from_edges(p.generators().len(), edges))
}

/// Checks that every relation word starts at an entrance and ends at an exit
/// of the relation graph; returns the graph on success, the first offending
/// letter otherwise.
pub fn entrance_exit_check(p: &Presentation) -> Result<RelationGraph, PresentationError> {
    let graph = relation_graph(p)?;
    for (_, lhs, rhs) in p.two_sided() {
        for word in [lhs, rhs] {
            if !graph.entrances().contains(&word.first()) {
                return Err(PresentationError::EntranceExitViolated {
                    letter: word.first(),
                });
            }
            if !graph.exits().contains(&word.last()) {
                return Err(PresentationError::EntranceExitViolated {
                    letter: word.last(),
                });
            }
        }
    }
    Ok(graph)
}

/// Turns a plain presentation whose relation words pass the entrance/exit
/// check into one with zero pairs on the complement of the relation graph.
/// The result satisfies the categoricity criterion by construction.
pub fn cat0_from_graph(p: &Presentation) -> Result<Presentation, PresentationError> {
    if p.has_zero_structure() {
        return Err(PresentationError::ZeroStructurePresent);
    }
    let graph = entrance_exit_check(p)?;
    let n = p.generators().len();
    let mut zero_pairs = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if !graph.edges().contains(&(i, j)) {
                zero_pairs.insert((i, j));
            }
        }
    }
    Presentation::new(p.generators().to_vec(), p.relations().to_vec(), zero_pairs)
}

/// Bounds for the word problem search.
#[derive(Debug, Clone, Copy)]
pub struct RewriteBounds {
    pub max_word_len: usize,
    pub budget: usize,
}

impl RewriteBounds {
    /// Default bounds: words up to twice the longest relation side plus two,
    /// and the standard closure budget.
    pub fn for_presentation(p: &Presentation) -> Self {
        let longest = p
            .relations()
            .iter()
            .map(|r| {
                let rhs = match &r.rhs {
                    RelationRhs::Word(w) => w.len(),
                    RelationRhs::Zero => 0,
                };
                r.lhs.len().max(rhs)
            })
            .max()
            .unwrap_or(1);
        RewriteBounds {
            max_word_len: 2 * longest + 2,
            budget: DEFAULT_CLOSURE_BUDGET,
        }
    }

    pub fn with_budget(self, budget: usize) -> Self {
        RewriteBounds { budget, ..self }
    }
}

/// All one-step rewrites of `word` by the two-sided relations, in both
/// directions, at every position.
fn one_step_rewrites(p: &Presentation, word: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for (_, lhs, rhs) in p.two_sided() {
        for (from, to) in [(lhs, rhs), (rhs, lhs)] {
            let f = from.letters();
            if f.len() > word.len() {
                continue;
            }
            for start in 0..=word.len() - f.len() {
                if &word[start..start + f.len()] == f {
                    let mut next = Vec::with_capacity(word.len() - f.len() + to.len());
                    next.extend_from_slice(&word[..start]);
                    next.extend_from_slice(to.letters());
                    next.extend_from_slice(&word[start + f.len()..]);
                    out.push(next);
                }
            }
        }
    }
    out
}

fn has_zero_pair(p: &Presentation, word: &[usize]) -> bool {
    word.windows(2)
        .any(|w| p.zero_pairs().contains(&(w[0], w[1])))
}

/// An adjacent zero pair, or the left side of an explicit zero relation as a
/// factor: either one forces the word to zero.
fn exposes_zero(p: &Presentation, word: &[usize]) -> bool {
    if has_zero_pair(p, word) {
        return true;
    }
    p.relations().iter().any(|rel| {
        matches!(rel.rhs, RelationRhs::Zero)
            && word.windows(rel.lhs.len()).any(|w| w == rel.lhs.letters())
    })
}

/// Whether the word's value is zero in the presented semigroup: searches the
/// congruence class for a word exposing an adjacent zero pair or an explicit
/// zero relation. `None` when the search was truncated before finding one.
pub fn word_is_zero(p: &Presentation, w: &Word, bounds: &RewriteBounds) -> Option<bool> {
    if p.zero_pairs().is_empty()
        && !p
            .relations()
            .iter()
            .any(|r| matches!(r.rhs, RelationRhs::Zero))
    {
        return Some(false);
    }
    let mut visited: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
    let mut truncated = false;
    visited.insert(w.letters().to_vec());
    queue.push_back(w.letters().to_vec());
    while let Some(current) = queue.pop_front() {
        if exposes_zero(p, &current) {
            return Some(true);
        }
        for next in one_step_rewrites(p, &current) {
            if next.len() > bounds.max_word_len {
                truncated = true;
                continue;
            }
            if visited.contains(&next) {
                continue;
            }
            if visited.len() >= bounds.budget {
                return None;
            }
            visited.insert(next.clone());
            queue.push_back(next);
        }
    }
    if truncated {
        None
    } else {
        Some(false)
    }
}

/// Shared congruence closure over words: a union-find keyed by word, filled
/// class by class through bounded breadth-first search.
pub struct CongruenceEngine<'p> {
    presentation: &'p Presentation,
    bounds: RewriteBounds,
    ids: HashMap<Vec<usize>, usize>,
    words: Vec<Vec<usize>>,
    parent: Vec<usize>,
    /// Valid at roots: whether the class was enumerated without truncation.
    complete: Vec<bool>,
    /// Valid at roots: whether the class has been explored at all.
    explored: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassInfo {
    pub root: usize,
    pub complete: bool,
}

impl<'p> CongruenceEngine<'p> {
    pub fn new(presentation: &'p Presentation, bounds: RewriteBounds) -> Self {
        CongruenceEngine {
            presentation,
            bounds,
            ids: HashMap::new(),
            words: Vec::new(),
            parent: Vec::new(),
            complete: Vec::new(),
            explored: Vec::new(),
        }
    }

    fn intern(&mut self, w: &[usize]) -> usize {
        if let Some(&id) = self.ids.get(w) {
            return id;
        }
        let id = self.words.len();
        self.ids.insert(w.to_vec(), id);
        self.words.push(w.to_vec());
        self.parent.push(id);
        self.complete.push(false);
        self.explored.push(false);
        id
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> usize {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return ra;
        }
        let explored = self.explored[ra] || self.explored[rb];
        let complete =
            (self.explored[ra] && self.complete[ra]) || (self.explored[rb] && self.complete[rb]);
        self.parent[rb] = ra;
        self.explored[ra] = explored;
        self.complete[ra] = complete;
        ra
    }

    /// Explores the whole congruence class of `w` within bounds and returns
    /// its root with a completeness flag. `Err` means the budget ran out.
    pub fn class_of(&mut self, w: &[usize]) -> Result<ClassInfo, PresentationError> {
        if w.len() > self.bounds.max_word_len {
            return Err(PresentationError::Undecided {
                context: format!("word of length {} exceeds the cap", w.len()),
            });
        }
        let start = self.intern(w);
        let root = self.find(start);
        if self.explored[root] {
            return Ok(ClassInfo {
                root,
                complete: self.complete[root],
            });
        }

        let mut truncated = false;
        let mut frontier: VecDeque<usize> = VecDeque::new();
        frontier.push_back(start);
        let mut seen: BTreeSet<usize> = [start].into();
        while let Some(current) = frontier.pop_front() {
            let word = self.words[current].clone();
            for next in one_step_rewrites(self.presentation, &word) {
                if next.len() > self.bounds.max_word_len {
                    truncated = true;
                    continue;
                }
                if self.words.len() >= self.bounds.budget {
                    return Err(PresentationError::Undecided {
                        context: "congruence closure budget exhausted".to_string(),
                    });
                }
                let id = self.intern(&next);
                let id_root = self.find(id);
                let merged_known = self.explored[id_root] && self.complete[id_root];
                self.union(current, id);
                if merged_known {
                    // landed in a fully enumerated class: nothing new beyond it
                    let root = self.find(start);
                    self.explored[root] = true;
                    self.complete[root] = true;
                    return Ok(ClassInfo {
                        root,
                        complete: true,
                    });
                }
                if seen.insert(id) {
                    frontier.push_back(id);
                }
            }
        }
        let root = self.find(start);
        self.explored[root] = true;
        self.complete[root] = !truncated;
        Ok(ClassInfo {
            root,
            complete: !truncated,
        })
    }

    /// All interned members of the class of `root`.
    pub fn members(&mut self, root: usize) -> Vec<Vec<usize>> {
        let root = self.find(root);
        let mut out = Vec::new();
        for i in 0..self.words.len() {
            if self.find(i) == root {
                out.push(self.words[i].clone());
            }
        }
        out
    }

    /// Shortlex-minimal member of the class.
    pub fn representative(&mut self, root: usize) -> Vec<usize> {
        self.members(root)
            .into_iter()
            .min_by(|a, b| shortlex(a, b))
            .expect("classes are nonempty")
    }
}

fn shortlex(a: &[usize], b: &[usize]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// The congruence class of a word, as its shortlex-minimal representative.
/// `Undecided` when the class could not be fully enumerated within bounds.
pub fn rewrite_class(
    p: &Presentation,
    w: &Word,
    bounds: &RewriteBounds,
) -> Result<Word, PresentationError> {
    let mut engine = CongruenceEngine::new(p, *bounds);
    let info = engine.class_of(w.letters())?;
    if !info.complete {
        return Err(PresentationError::Undecided {
            context: "class enumeration truncated by the length cap".to_string(),
        });
    }
    Word::new(engine.representative(info.root))
}

/// A finite model of a presented semigroup, with the defining word of each
/// nonzero element.
#[derive(Debug, Clone)]
pub struct PresentedQuotient {
    pub semigroup: FiniteZeroSemigroup,
    /// `element_words[i]` spells nonzero element `i + 1`.
    pub element_words: Vec<Vec<usize>>,
}

/// Quotient of a plain presented semigroup by the ideal of elements dividing
/// no relation's left side (divisibility with an identity adjoined on both
/// sides). Verifies the hypotheses: the ideal is nonempty and no generator
/// falls into it. The result's nonzero elements are the divisor classes.
pub fn ideal_quotient(
    p: &Presentation,
    bounds: &RewriteBounds,
) -> Result<PresentedQuotient, PresentationError> {
    if p.has_zero_structure() {
        return Err(PresentationError::ZeroStructurePresent);
    }
    if p.relations().is_empty() {
        return Err(PresentationError::NoRelations);
    }
    let mut engine = CongruenceEngine::new(p, *bounds);

    // Divisors: classes of factors of any word equal to a relation side.
    let mut divisor_roots: BTreeSet<usize> = BTreeSet::new();
    let mut max_member_len = 0usize;
    let relation_sides: Vec<Word> = p.relations().iter().map(|r| r.lhs.clone()).collect();
    for side in &relation_sides {
        let info = engine.class_of(side.letters())?;
        if !info.complete {
            return Err(PresentationError::Undecided {
                context: "relation side class truncated".to_string(),
            });
        }
        for member in engine.members(info.root) {
            max_member_len = max_member_len.max(member.len());
            for i in 0..member.len() {
                for j in i + 1..=member.len() {
                    let factor = &member[i..j];
                    let finfo = engine.class_of(factor)?;
                    if !finfo.complete {
                        return Err(PresentationError::Undecided {
                            context: "factor class truncated".to_string(),
                        });
                    }
                    divisor_roots.insert(finfo.root);
                }
            }
        }
    }
    // roots may have merged since insertion; renormalize
    let divisor_roots: BTreeSet<usize> =
        divisor_roots.into_iter().map(|r| engine.find(r)).collect();

    // Hypothesis: every generator divides some relation side.
    for g in 0..p.generators().len() {
        let info = engine.class_of(&[g])?;
        if !divisor_roots.contains(&engine.find(info.root)) {
            return Err(PresentationError::GeneratorInIdeal { generator: g });
        }
    }

    // Hypothesis: some element divides nothing, so the ideal is nonempty.
    // A fully enumerated class of an over-long word cannot be a divisor.
    let mut certified = false;
    'probe: for g in 0..p.generators().len() {
        let probe = vec![g; max_member_len + 1];
        if probe.len() > bounds.max_word_len {
            break 'probe;
        }
        let info = match engine.class_of(&probe) {
            Ok(info) => info,
            Err(PresentationError::Undecided { .. }) => continue 'probe,
            Err(e) => return Err(e),
        };
        if info.complete && !divisor_roots.contains(&engine.find(info.root)) {
            certified = true;
            break 'probe;
        }
    }
    if !certified {
        return Err(PresentationError::IdealNotCertified);
    }

    build_quotient_table(p, &mut engine, &divisor_roots, |_| Ok(false))
}

/// Finite nilpotent model of a presentation with zero pairs: nonzero elements
/// are the congruence classes of words avoiding zero pairs. Requires the
/// allowed-pair graph (the complement of the zero pairs) to be acyclic, which
/// bounds every nonzero word by the longest allowed path.
pub fn finite_quotient(
    p: &Presentation,
    bounds: &RewriteBounds,
) -> Result<PresentedQuotient, PresentationError> {
    if let Some(k) = p
        .relations()
        .iter()
        .position(|r| matches!(r.rhs, RelationRhs::Zero))
    {
        return Err(PresentationError::ZeroRelationPresent { relation: k });
    }
    let n = p.generators().len();
    let allowed: BTreeSet<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|pair| !p.zero_pairs().contains(pair))
        .collect();
    let allowed_graph = RelationGraph::from_edges(n, allowed.clone());
    if let Some(cycle) = allowed_graph.find_cycle() {
        return Err(PresentationError::CyclePresent { cycle });
    }

    // Allowed words are simple paths in an acyclic digraph: enumerate by DFS.
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..n).map(|g| vec![g]).collect();
    while let Some(w) = stack.pop() {
        if words.len() + stack.len() > bounds.budget {
            return Err(PresentationError::Undecided {
                context: "allowed-word enumeration budget exhausted".to_string(),
            });
        }
        words.push(w.clone());
        let last = *w.last().expect("nonempty");
        for j in 0..n {
            if allowed.contains(&(last, j)) {
                let mut next = w.clone();
                next.push(j);
                stack.push(next);
            }
        }
    }

    // Zero detection per allowed word; truncation is surfaced, never guessed.
    let mut engine = CongruenceEngine::new(p, *bounds);
    let mut zero_status: BTreeMap<Vec<usize>, bool> = BTreeMap::new();
    for w in &words {
        let word = Word::new(w.clone()).expect("paths are nonempty");
        match word_is_zero(p, &word, bounds) {
            Some(z) => {
                zero_status.insert(w.clone(), z);
            }
            None => {
                return Err(PresentationError::Undecided {
                    context: format!("zero test truncated for '{}'", p.spell(w)),
                })
            }
        }
    }

    // Disguised zero relations break the form invariant.
    for (k, lhs, _) in p.two_sided() {
        let lhs_zero = word_is_zero(p, lhs, bounds);
        if lhs_zero != Some(false) {
            return Err(PresentationError::DisguisedZeroRelation { relation: k });
        }
    }

    let mut nonzero_roots: BTreeSet<usize> = BTreeSet::new();
    for w in &words {
        if !zero_status[w] {
            let info = engine.class_of(w)?;
            if !info.complete {
                return Err(PresentationError::Undecided {
                    context: "nonzero class truncated".to_string(),
                });
            }
            nonzero_roots.insert(info.root);
        }
    }
    let nonzero_roots: BTreeSet<usize> =
        nonzero_roots.into_iter().map(|r| engine.find(r)).collect();

    build_quotient_table(p, &mut engine, &nonzero_roots, |w| {
        Ok(*zero_status.get(w).unwrap_or(&true))
    })
}

/// Assembles the multiplication table over `{0} + chosen classes`: the product
/// of two representatives is their concatenation's class when that class is
/// chosen and not a zero word, and 0 otherwise.
fn build_quotient_table(
    p: &Presentation,
    engine: &mut CongruenceEngine,
    chosen: &BTreeSet<usize>,
    is_zero_word: impl Fn(&Vec<usize>) -> Result<bool, PresentationError>,
) -> Result<PresentedQuotient, PresentationError> {
    let mut reps: Vec<Vec<usize>> = chosen.iter().map(|&r| engine.representative(r)).collect();
    reps.sort_by(|a, b| shortlex(a, b));

    let mut index_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, rep) in reps.iter().enumerate() {
        let info = engine.class_of(rep)?;
        index_of_root.insert(engine.find(info.root), i + 1);
    }

    let size = reps.len() + 1;
    let mut table = vec![0usize; size * size];
    for (i, u) in reps.iter().enumerate() {
        for (j, v) in reps.iter().enumerate() {
            let concat: Vec<usize> = u.iter().chain(v.iter()).copied().collect();
            if has_zero_pair(p, &concat) || is_zero_word(&concat)? {
                continue;
            }
            let info = engine.class_of(&concat)?;
            if !info.complete {
                return Err(PresentationError::Undecided {
                    context: "product class truncated".to_string(),
                });
            }
            if let Some(&target) = index_of_root.get(&engine.find(info.root)) {
                table[(i + 1) * size + (j + 1)] = target;
            }
        }
    }

    let mut names = vec!["0".to_string()];
    names.extend(reps.iter().map(|w| p.spell(w)));
    let semigroup =
        FiniteZeroSemigroup::new(names, table).map_err(PresentationError::TableConstruction)?;
    Ok(PresentedQuotient {
        semigroup,
        element_words: reps,
    })
}
