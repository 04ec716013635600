//! Finite semigroups as multiplication tables.
//!
//! A [`FiniteZeroSemigroup`] keeps the absorbing zero at index 0; every other
//! module in the crate relies on that normalization. Labels are carried for
//! reporting only, all algorithms work on indices.

use std::collections::BTreeSet;
use std::fmt;

/// A finite semigroup given by its full multiplication table. No element is
/// distinguished and no absorption is assumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSemigroup {
    size: usize,
    names: Vec<String>,
    table: Vec<usize>,
}

/// A finite semigroup with zero: a validated table whose index 0 is absorbing.
///
/// Also carries a factorization index `v -> {(t, u) : t*u = v}`, built once at
/// validation time; the 0-reflector calculus walks it heavily.
#[derive(Clone)]
pub struct FiniteZeroSemigroup {
    size: usize,
    names: Vec<String>,
    table: Vec<usize>,
    factorizations: Vec<Vec<(usize, usize)>>,
}

impl PartialEq for FiniteZeroSemigroup {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.table == other.table
    }
}

impl Eq for FiniteZeroSemigroup {}

impl fmt::Debug for FiniteZeroSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteZeroSemigroup({:?}, table {:?})",
            self.names, self.table
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemigroupError {
    TableNotSquare {
        entries: usize,
    },
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
    },
    /// Witness triple with (s*t)*u != s*(t*u).
    NotAssociative {
        s: usize,
        t: usize,
        u: usize,
    },
    /// Witness element with 0*s != 0 or s*0 != 0.
    ZeroNotAbsorbing {
        s: usize,
    },
    EmptyUnion,
    /// Witness pair (x, t) with x in the set but x*t or t*x outside it.
    NotAnIdeal {
        x: usize,
        t: usize,
    },
    EmptyIdeal,
    NameCountMismatch {
        names: usize,
        size: usize,
    },
}

impl fmt::Display for SemigroupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemigroupError::TableNotSquare { entries } => {
                write!(f, "table with {entries} entries is not square")
            }
            SemigroupError::EntryOutOfRange { row, col, value } => {
                write!(f, "table entry ({row},{col}) = {value} out of range")
            }
            SemigroupError::NotAssociative { s, t, u } => {
                write!(f, "not associative at triple ({s},{t},{u})")
            }
            SemigroupError::ZeroNotAbsorbing { s } => {
                write!(f, "index 0 is not absorbing against element {s}")
            }
            SemigroupError::EmptyUnion => write!(f, "0-direct union of no parts"),
            SemigroupError::NotAnIdeal { x, t } => {
                write!(f, "set is not an ideal: witness pair ({x},{t})")
            }
            SemigroupError::EmptyIdeal => write!(f, "ideal must be nonempty"),
            SemigroupError::NameCountMismatch { names, size } => {
                write!(f, "{names} names for {size} elements")
            }
        }
    }
}

impl std::error::Error for SemigroupError {}

fn check_table(size: usize, names: &[String], table: &[usize]) -> Result<(), SemigroupError> {
    if names.len() != size {
        return Err(SemigroupError::NameCountMismatch {
            names: names.len(),
            size,
        });
    }
    if table.len() != size * size {
        return Err(SemigroupError::TableNotSquare {
            entries: table.len(),
        });
    }
    for i in 0..size {
        for j in 0..size {
            let v = table[i * size + j];
            if v >= size {
                return Err(SemigroupError::EntryOutOfRange {
                    row: i,
                    col: j,
                    value: v,
                });
            }
        }
    }
    let prod = |a: usize, b: usize| table[a * size + b];
    for s in 0..size {
        for t in 0..size {
            for u in 0..size {
                if prod(prod(s, t), u) != prod(s, prod(t, u)) {
                    return Err(SemigroupError::NotAssociative { s, t, u });
                }
            }
        }
    }
    Ok(())
}

impl FiniteSemigroup {
    pub fn new(names: Vec<String>, table: Vec<usize>) -> Result<Self, SemigroupError> {
        let size = names.len();
        check_table(size, &names, &table)?;
        Ok(FiniteSemigroup { size, names, table })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b]
    }

    /// Adjoins a fresh absorbing zero at index 0, shifting everything up.
    pub fn adjoin_zero(&self) -> FiniteZeroSemigroup {
        let n = self.size + 1;
        let mut names = Vec::with_capacity(n);
        names.push("0".to_string());
        names.extend(self.names.iter().cloned());
        let mut table = vec![0; n * n];
        for a in 0..self.size {
            for b in 0..self.size {
                table[(a + 1) * n + (b + 1)] = self.product(a, b) + 1;
            }
        }
        FiniteZeroSemigroup::new(names, table).expect("adjoined zero stays valid")
    }

    /// Rees quotient by a nonempty two-sided ideal: the ideal collapses to a
    /// zero at index 0, all other products survive.
    pub fn rees_quotient(
        &self,
        ideal: &BTreeSet<usize>,
    ) -> Result<FiniteZeroSemigroup, SemigroupError> {
        if ideal.is_empty() {
            return Err(SemigroupError::EmptyIdeal);
        }
        for &x in ideal {
            for t in 0..self.size {
                if !ideal.contains(&self.product(x, t)) || !ideal.contains(&self.product(t, x)) {
                    return Err(SemigroupError::NotAnIdeal { x, t });
                }
            }
        }
        let mut index = vec![0usize; self.size];
        let mut names = vec!["0".to_string()];
        for i in 0..self.size {
            if !ideal.contains(&i) {
                index[i] = names.len();
                names.push(self.names[i].clone());
            }
        }
        let n = names.len();
        let mut table = vec![0; n * n];
        for a in 0..self.size {
            if ideal.contains(&a) {
                continue;
            }
            for b in 0..self.size {
                if ideal.contains(&b) {
                    continue;
                }
                let p = self.product(a, b);
                table[index[a] * n + index[b]] = if ideal.contains(&p) { 0 } else { index[p] };
            }
        }
        FiniteZeroSemigroup::new(names, table)
    }
}

impl FiniteZeroSemigroup {
    /// Validates the table: square, in range, associative, zero absorbing.
    pub fn new(names: Vec<String>, table: Vec<usize>) -> Result<Self, SemigroupError> {
        let size = names.len();
        check_table(size, &names, &table)?;
        for s in 0..size {
            if table[s] != 0 || table[s * size] != 0 {
                return Err(SemigroupError::ZeroNotAbsorbing { s });
            }
        }
        let mut factorizations = vec![Vec::new(); size];
        for t in 0..size {
            for u in 0..size {
                factorizations[table[t * size + u]].push((t, u));
            }
        }
        Ok(FiniteZeroSemigroup {
            size,
            names,
            table,
            factorizations,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b]
    }

    /// Product of a nonempty word of element indices, left to right.
    pub fn word_product(&self, word: &[usize]) -> usize {
        let mut acc = word[0];
        for &x in &word[1..] {
            acc = self.product(acc, x);
        }
        acc
    }

    /// All pairs `(t, u)` with `t * u = v`.
    pub fn factorizations(&self, v: usize) -> &[(usize, usize)] {
        &self.factorizations[v]
    }

    /// Forgets the distinguished zero.
    pub fn as_plain(&self) -> FiniteSemigroup {
        FiniteSemigroup {
            size: self.size,
            names: self.names.clone(),
            table: self.table.clone(),
        }
    }

    /// Witness `(x, y, z)` with `xyz = 0`, `xy != 0`, `yz != 0`, if any.
    pub fn categoricity_witness(&self) -> Option<(usize, usize, usize)> {
        for x in 1..self.size {
            for y in 1..self.size {
                let xy = self.product(x, y);
                if xy == 0 {
                    continue;
                }
                for z in 1..self.size {
                    if self.product(y, z) != 0 && self.product(xy, z) == 0 {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    /// Whether `xyz = 0` always forces `xy = 0` or `yz = 0`.
    pub fn is_categorical_at_zero(&self) -> bool {
        self.categoricity_witness().is_none()
    }

    /// Least `k` with every product of `k` elements equal to zero, if one
    /// exists. The descending chain of product sets stabilizes within
    /// `size + 1` steps, so the search is total.
    pub fn nilpotency_degree(&self) -> Option<usize> {
        let mut current: BTreeSet<usize> = (0..self.size).collect();
        for k in 1..=self.size + 1 {
            if current.iter().all(|&v| v == 0) {
                return Some(k);
            }
            let next: BTreeSet<usize> = current
                .iter()
                .flat_map(|&v| (0..self.size).map(move |s| (v, s)))
                .map(|(v, s)| self.product(v, s))
                .collect();
            if next == current {
                return None;
            }
            current = next;
        }
        None
    }

    /// Union index of the first nonzero element of part `idx` in
    /// [`zero_direct_union`]: parts are laid out consecutively after the
    /// shared zero.
    pub fn union_part_offset(parts: &[FiniteZeroSemigroup], idx: usize) -> usize {
        1 + parts[..idx].iter().map(|p| p.size() - 1).sum::<usize>()
    }
}

/// Glues the parts at a shared zero: within-part products survive, products
/// across different parts are zero. Part `i`'s nonzero elements map to the
/// contiguous index range starting at [`FiniteZeroSemigroup::union_part_offset`].
pub fn zero_direct_union(
    parts: &[FiniteZeroSemigroup],
) -> Result<FiniteZeroSemigroup, SemigroupError> {
    if parts.is_empty() {
        return Err(SemigroupError::EmptyUnion);
    }
    let n = 1 + parts.iter().map(|p| p.size() - 1).sum::<usize>();
    let mut names = vec!["0".to_string()];
    let mut seen: BTreeSet<String> = names.iter().cloned().collect();
    for (pi, p) in parts.iter().enumerate() {
        for i in 1..p.size() {
            let mut name = p.name(i).to_string();
            if !seen.insert(name.clone()) {
                name = format!("{name}#{pi}");
                seen.insert(name.clone());
            }
            names.push(name);
        }
    }
    let mut table = vec![0; n * n];
    for (pi, p) in parts.iter().enumerate() {
        let off = FiniteZeroSemigroup::union_part_offset(parts, pi);
        for a in 1..p.size() {
            for b in 1..p.size() {
                let v = p.product(a, b);
                table[(off + a - 1) * n + (off + b - 1)] = if v == 0 { 0 } else { off + v - 1 };
            }
        }
    }
    FiniteZeroSemigroup::new(names, table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(n: usize) -> Vec<String> {
        (0..n)
            .map(|i| {
                if i == 0 {
                    "0".to_string()
                } else {
                    char::from(b'a' + (i - 1) as u8).to_string()
                }
            })
            .collect()
    }

    /// All products zero.
    fn null_semigroup(n: usize) -> FiniteZeroSemigroup {
        FiniteZeroSemigroup::new(named(n), vec![0; n * n]).unwrap()
    }

    /// 0, a, a^2, ..., a^n with a^(n+1) = 0.
    fn monogenic_nilpotent(n: usize) -> FiniteZeroSemigroup {
        let size = n + 1;
        let mut table = vec![0; size * size];
        for i in 1..size {
            for j in 1..size {
                if i + j < size {
                    table[i * size + j] = i + j;
                }
            }
        }
        let names = (0..size)
            .map(|i| match i {
                0 => "0".into(),
                1 => "a".into(),
                k => format!("a^{k}"),
            })
            .collect();
        FiniteZeroSemigroup::new(names, table).unwrap()
    }

    fn cyclic_group(m: usize) -> FiniteSemigroup {
        let names = (0..m).map(|i| format!("g{i}")).collect();
        let mut table = vec![0; m * m];
        for a in 0..m {
            for b in 0..m {
                table[a * m + b] = (a + b) % m;
            }
        }
        FiniteSemigroup::new(names, table).unwrap()
    }

    #[test]
    fn validate_singleton_zero() {
        let s = FiniteZeroSemigroup::new(vec!["0".into()], vec![0]).unwrap();
        assert_eq!(s.size(), 1);
    }

    #[test]
    fn validate_null_semigroup() {
        assert_eq!(null_semigroup(3).size(), 3);
    }

    #[test]
    fn validate_reports_associativity_witness() {
        // {0, a, b}: a*a = b, a*b = a, rest 0; then (a*a)*a = 0 but
        // a*(a*a) = a*b = a.
        let r = FiniteZeroSemigroup::new(named(3), vec![0, 0, 0, 0, 2, 1, 0, 0, 0]);
        match r {
            Err(SemigroupError::NotAssociative { s, t, u }) => {
                assert_eq!((s, t, u), (1, 1, 1));
            }
            other => panic!("expected associativity witness, got {other:?}"),
        }
    }

    #[test]
    fn validate_reports_absorption_witness() {
        // right-zero band: associative, but 0*a = a
        let r = FiniteZeroSemigroup::new(named(2), vec![0, 1, 0, 1]);
        assert!(matches!(r, Err(SemigroupError::ZeroNotAbsorbing { s: 1 })));
    }

    #[test]
    fn null_semigroup_is_categorical() {
        assert!(null_semigroup(4).is_categorical_at_zero());
    }

    #[test]
    fn monogenic_cube_zero_is_not_categorical() {
        // a*a != 0 but a*a*a = 0
        let s = monogenic_nilpotent(2);
        assert_eq!(s.categoricity_witness(), Some((1, 1, 1)));
    }

    #[test]
    fn nilpotency_degrees() {
        assert_eq!(null_semigroup(1).nilpotency_degree(), Some(1));
        assert_eq!(null_semigroup(4).nilpotency_degree(), Some(2));
        assert_eq!(monogenic_nilpotent(2).nilpotency_degree(), Some(3));
        // an idempotent blocks nilpotency
        let idem = FiniteZeroSemigroup::new(named(2), vec![0, 0, 0, 1]).unwrap();
        assert_eq!(idem.nilpotency_degree(), None);
    }

    #[test]
    fn union_of_singletons_is_singleton() {
        let z = null_semigroup(1);
        let u = zero_direct_union(&[z.clone(), z]).unwrap();
        assert_eq!(u.size(), 1);
    }

    #[test]
    fn union_sizes_share_zero() {
        let parts = [null_semigroup(3), monogenic_nilpotent(2)];
        let u = zero_direct_union(&parts).unwrap();
        assert_eq!(u.size(), 1 + 2 + 2);
        // cross products vanish, within-part products survive
        let off = FiniteZeroSemigroup::union_part_offset(&parts, 1);
        assert_eq!(u.product(1, off), 0);
        assert_eq!(u.product(off, off), off + 1); // a*a = a^2 in the part
    }

    #[test]
    fn union_of_categorical_parts_is_categorical() {
        let a = monogenic_nilpotent(1); // {0, a}, a^2 = 0: categorical
        let b = null_semigroup(3);
        assert!(a.is_categorical_at_zero());
        let u = zero_direct_union(&[a.clone(), b]).unwrap();
        assert!(u.is_categorical_at_zero());
        // and a non-categorical part poisons the union
        let bad = monogenic_nilpotent(2);
        let u2 = zero_direct_union(&[a, bad]).unwrap();
        assert!(!u2.is_categorical_at_zero());
    }

    #[test]
    fn adjoin_zero_to_idempotent() {
        let e = FiniteSemigroup::new(vec!["e".into()], vec![0]).unwrap();
        let s = e.adjoin_zero();
        assert_eq!(s.size(), 2);
        assert_eq!(s.product(1, 1), 1);
        assert_eq!(s.product(0, 1), 0);
    }

    #[test]
    fn adjoin_zero_to_cyclic_group() {
        let s = cyclic_group(2).adjoin_zero();
        assert_eq!(s.size(), 3);
        assert_eq!(s.product(2, 2), 1); // g*g = e shifted by one
        assert!(s.is_categorical_at_zero()); // no zero products among nonzeros
    }

    #[test]
    fn rees_quotient_by_everything_is_zero() {
        let s = cyclic_group(3);
        let ideal: BTreeSet<usize> = (0..3).collect();
        let q = s.rees_quotient(&ideal).unwrap();
        assert_eq!(q.size(), 1);
    }

    #[test]
    fn rees_quotient_by_zero_ideal_is_identity() {
        let s = monogenic_nilpotent(2);
        let ideal: BTreeSet<usize> = [0].into();
        let q = s.as_plain().rees_quotient(&ideal).unwrap();
        assert_eq!(q, s);
    }

    #[test]
    fn rees_quotient_rejects_non_ideal() {
        let s = cyclic_group(3);
        let not_ideal: BTreeSet<usize> = [1].into();
        assert!(matches!(
            s.rees_quotient(&not_ideal),
            Err(SemigroupError::NotAnIdeal { .. })
        ));
    }

    #[test]
    fn union_categoricity_is_conjunction_over_parts() {
        // cross-part triples always contain a zero pair, so only parts matter
        let blocks = [
            null_semigroup(2),
            null_semigroup(3),
            monogenic_nilpotent(1),
            monogenic_nilpotent(2),
            monogenic_nilpotent(3),
            cyclic_group(2).adjoin_zero(),
        ];
        for x in &blocks {
            for y in &blocks {
                let u = zero_direct_union(&[x.clone(), y.clone()]).unwrap();
                assert_eq!(
                    u.is_categorical_at_zero(),
                    x.is_categorical_at_zero() && y.is_categorical_at_zero(),
                    "{x:?} + {y:?}"
                );
            }
        }
    }

    #[test]
    fn nilpotency_degree_characterizes_products() {
        for s in [
            null_semigroup(3),
            monogenic_nilpotent(2),
            monogenic_nilpotent(4),
            zero_direct_union(&[monogenic_nilpotent(2), null_semigroup(2)]).unwrap(),
        ] {
            let k = s.nilpotency_degree().unwrap();
            // every product of k elements vanishes
            let mut all_products = vec![Vec::new()];
            for _ in 0..k {
                all_products = all_products
                    .into_iter()
                    .flat_map(|w: Vec<usize>| {
                        (1..s.size()).map(move |x| {
                            let mut v = w.clone();
                            v.push(x);
                            v
                        })
                    })
                    .collect();
            }
            assert!(all_products.iter().all(|w| s.word_product(w) == 0));
            // and some product of k-1 elements survives
            if k > 1 {
                let mut shorter = vec![Vec::new()];
                for _ in 0..k - 1 {
                    shorter = shorter
                        .into_iter()
                        .flat_map(|w: Vec<usize>| {
                            (1..s.size()).map(move |x| {
                                let mut v = w.clone();
                                v.push(x);
                                v
                            })
                        })
                        .collect();
                }
                assert!(shorter.iter().any(|w| s.word_product(w) != 0));
            }
        }
    }

    #[test]
    fn rees_quotient_of_monoid_minimal_ideal_validates() {
        // left-zero band {x, y} with an identity adjoined by hand
        let names = vec!["e".into(), "x".into(), "y".into()];
        #[rustfmt::skip]
        let table = vec![
            0, 1, 2,
            1, 1, 1,
            2, 2, 2,
        ];
        let s = FiniteSemigroup::new(names, table).unwrap();
        let ideal: BTreeSet<usize> = [1, 2].into();
        let q = s.rees_quotient(&ideal).unwrap();
        assert_eq!(q.size(), 2); // 0 and e
        assert_eq!(q.product(1, 1), 1);
    }
}
