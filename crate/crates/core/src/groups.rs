//! Finite group actions on finite spaces of conceptual variables.
//!
//! A permutation is stored as its image list: `p[i]` is where point `i`
//! goes, and `compose(g, h)` is `g ∘ h` (apply `h` first).

use std::collections::{BTreeMap, HashSet};

use serde::Deserialize;

use crate::error::{Error, Result};

pub type Permutation = Vec<usize>;

/// Largest space for which the full symmetric group is enumerated.
pub const MAX_ENUMERATED_SPACE: usize = 8;

pub fn compose(g: &[usize], h: &[usize]) -> Permutation {
    h.iter().map(|&x| g[x]).collect()
}

pub fn inverse(g: &[usize]) -> Permutation {
    let mut inv = vec![0; g.len()];
    for (i, &gi) in g.iter().enumerate() {
        inv[gi] = i;
    }
    inv
}

pub fn identity_perm(n: usize) -> Permutation {
    (0..n).collect()
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    if p.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    p.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

/// Group generated by `gens`, by breadth-first multiplication from the
/// identity.
pub fn generate(n: usize, gens: &[Permutation]) -> HashSet<Permutation> {
    let id = identity_perm(n);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(g) = frontier.pop() {
        for s in gens {
            let next = compose(s, &g);
            if seen.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    seen
}

/// A finite group of permutations acting on labelled points.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteAction {
    space: Vec<String>,
    elements: Vec<Permutation>,
}

impl FiniteAction {
    /// Validates that `elements` are permutations of the space forming a
    /// group (identity, inverses, closure). Duplicates are rejected.
    pub fn new(space: Vec<String>, elements: Vec<Permutation>) -> Result<Self> {
        let n = space.len();
        if let Some(bad) = elements.iter().find(|p| !is_permutation(p, n)) {
            return Err(Error::InvalidAction(format!("{bad:?} is not a permutation of {n} points")));
        }
        let set: HashSet<&Permutation> = elements.iter().collect();
        if set.len() != elements.len() {
            return Err(Error::InvalidAction("duplicate group elements".into()));
        }
        if !set.contains(&identity_perm(n)) {
            return Err(Error::NotAGroup("identity missing".into()));
        }
        if let Some(g) = elements.iter().find(|g| !set.contains(&inverse(g))) {
            return Err(Error::NotAGroup(format!("inverse of {g:?} missing")));
        }
        // Closure: greedily pick generators until they generate a superset
        // of the elements; the set is closed iff that group is the set itself.
        let mut gens: Vec<Permutation> = Vec::new();
        let mut span = generate(n, &gens);
        for g in &elements {
            if !span.contains(g) {
                gens.push(g.clone());
                span = generate(n, &gens);
            }
        }
        if span.len() != elements.len() {
            let witness = span.iter().find(|p| !set.contains(p)).cloned().unwrap_or_default();
            return Err(Error::NotAGroup(format!("not closed: {witness:?} is a product of elements")));
        }
        Ok(Self { space, elements })
    }

    /// Group generated by `gens` on `space`.
    pub fn generated_by(space: Vec<String>, gens: &[Permutation]) -> Result<Self> {
        let n = space.len();
        if let Some(bad) = gens.iter().find(|p| !is_permutation(p, n)) {
            return Err(Error::InvalidAction(format!("{bad:?} is not a permutation of {n} points")));
        }
        let mut elements: Vec<Permutation> = generate(n, gens).into_iter().collect();
        elements.sort();
        Self::new(space, elements)
    }

    pub fn trivial(space: Vec<String>) -> Self {
        let n = space.len();
        Self { space, elements: vec![identity_perm(n)] }
    }

    /// Rotations φ → φ + k mod n.
    pub fn cyclic(space: Vec<String>) -> Result<Self> {
        let n = space.len();
        let shift: Permutation = (0..n).map(|i| (i + 1) % n).collect();
        Self::generated_by(space, &[shift])
    }

    /// Parses `{"space": [...], "elements": [[...], ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            space: Vec<serde_json::Value>,
            elements: Vec<Permutation>,
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| Error::InvalidAction(e.to_string()))?;
        let space = doc.space.into_iter().map(label_of).collect();
        Self::new(space, doc.elements)
    }

    pub fn space(&self) -> &[String] {
        &self.space
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Point index for a label.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.space.iter().position(|s| s == label)
    }

    /// The action restricted to `subset`, if every element maps it into
    /// itself.
    pub fn restrict(&self, subset: &[usize]) -> Result<Self> {
        let position: BTreeMap<usize, usize> = subset.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        if position.len() != subset.len() || subset.iter().any(|&x| x >= self.space.len()) {
            return Err(Error::InvalidArgument("subset has repeated or unknown points".into()));
        }
        let mut elements: Vec<Permutation> = Vec::new();
        let mut seen = HashSet::new();
        for g in &self.elements {
            let restricted: Option<Permutation> = subset.iter().map(|&x| position.get(&g[x]).copied()).collect();
            let r = restricted.ok_or_else(|| Error::InvalidAction("subset is not invariant".into()))?;
            if seen.insert(r.clone()) {
                elements.push(r);
            }
        }
        let space = subset.iter().map(|&x| self.space[x].clone()).collect();
        Self::new(space, elements)
    }
}

fn label_of(v: serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s,
        other => other.to_string(),
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut root = x;
    while parent[root] != root {
        root = parent[root];
    }
    let mut cur = x;
    while parent[cur] != root {
        cur = std::mem::replace(&mut parent[cur], root);
    }
    root
}

/// Orbits as sorted blocks of point indices, ordered by smallest member.
pub fn orbits(g: &FiniteAction) -> Vec<Vec<usize>> {
    let n = g.space.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for p in &g.elements {
        for (i, &j) in p.iter().enumerate() {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        blocks.entry(r).or_default().push(i);
    }
    blocks.into_values().collect()
}

/// True iff `subset` is a union of orbits.
pub fn is_invariant_set(g: &FiniteAction, subset: &[usize]) -> bool {
    let members: HashSet<usize> = subset.iter().copied().collect();
    g.elements.iter().all(|p| members.iter().all(|&x| members.contains(&p[x])))
}

pub fn is_transitive(g: &FiniteAction) -> bool {
    orbits(g).len() <= 1
}

/// A function on the points of a space, stored as one label per point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptVariable {
    values: Vec<String>,
}

impl ConceptVariable {
    pub fn new(values: Vec<String>) -> Self {
        Self { values }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> String) -> Self {
        Self { values: (0..n).map(f).collect() }
    }

    pub fn value(&self, point: usize) -> &str {
        &self.values[point]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Distinct values in order of first appearance.
    pub fn range(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for v in &self.values {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        out
    }

    /// Index into [`Self::range`] for each point.
    fn level_ids(&self) -> Vec<usize> {
        let range = self.range();
        self.values.iter().map(|v| range.iter().position(|r| r == v).expect("in range")).collect()
    }
}

fn check_variable(g: &FiniteAction, eta: &ConceptVariable) -> Result<()> {
    if eta.len() != g.space.len() {
        return Err(Error::DimMismatch { left: g.space.len(), right: eta.len() });
    }
    Ok(())
}

/// η(φ1) = η(φ2) implies η(hφ1) = η(hφ2) for every h and every such pair.
pub fn is_permissible(g: &FiniteAction, eta: &ConceptVariable) -> Result<bool> {
    check_variable(g, eta)?;
    let ids = eta.level_ids();
    let n = ids.len();
    for h in &g.elements {
        for a in 0..n {
            for b in (a + 1)..n {
                if ids[a] == ids[b] && ids[h[a]] != ids[h[b]] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Action h̃ η(φ) = η(hφ) on the range of a permissible η.
pub fn induced_action(g: &FiniteAction, eta: &ConceptVariable) -> Result<FiniteAction> {
    if !is_permissible(g, eta)? {
        return Err(Error::NotPermissible);
    }
    let mut elements: Vec<Permutation> = Vec::new();
    let mut seen = HashSet::new();
    for h in &g.elements {
        let induced = induced_permutation(eta, h);
        if seen.insert(induced.clone()) {
            elements.push(induced);
        }
    }
    FiniteAction::new(eta.range(), elements)
}

/// h̃ on indices of `eta.range()`, read off one representative per level.
/// Only meaningful when η is permissible for `h`.
pub fn induced_permutation(eta: &ConceptVariable, h: &[usize]) -> Permutation {
    let ids = eta.level_ids();
    let levels = eta.range().len();
    (0..levels)
        .map(|v| {
            let phi = ids.iter().position(|&x| x == v).expect("every level attained");
            ids[h[phi]]
        })
        .collect()
}

/// Next permutation in lexicographic order, in place; false after the last.
fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All permutations of `space` that map η-level sets onto η-level sets,
/// i.e. η(φ1) = η(φ2) ⇔ η(hφ1) = η(hφ2).
pub fn maximal_permissible_group(space: Vec<String>, eta: &ConceptVariable) -> Result<FiniteAction> {
    let n = space.len();
    if n > MAX_ENUMERATED_SPACE {
        return Err(Error::SpaceTooLarge(n));
    }
    if eta.len() != n {
        return Err(Error::DimMismatch { left: n, right: eta.len() });
    }
    let ids = eta.level_ids();
    let levels = eta.range().len();
    let mut elements = Vec::new();
    let mut p = identity_perm(n);
    loop {
        if preserves_partition(&p, &ids, levels) {
            elements.push(p.clone());
        }
        if !next_permutation(&mut p) {
            break;
        }
    }
    FiniteAction::new(space, elements)
}

fn preserves_partition(p: &[usize], ids: &[usize], levels: usize) -> bool {
    // Level l must land inside a single level, and distinct levels on
    // distinct ones.
    let mut image: Vec<Option<usize>> = vec![None; levels];
    for (x, &l) in ids.iter().enumerate() {
        let target = ids[p[x]];
        match image[l] {
            None => image[l] = Some(target),
            Some(t) if t != target => return false,
            _ => {}
        }
    }
    let mut used = vec![false; levels];
    image.into_iter().flatten().all(|t| !std::mem::replace(&mut used[t], true))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    /// Within-stratum permutations on strata {0,1} and {2,3,4}.
    fn strata_group() -> FiniteAction {
        FiniteAction::generated_by(
            labels(5),
            &[vec![1, 0, 2, 3, 4], vec![0, 1, 3, 2, 4], vec![0, 1, 2, 4, 3]],
        )
        .unwrap()
    }

    fn reflection() -> FiniteAction {
        FiniteAction::new(
            vec!["-c".into(), "0".into(), "c".into()],
            vec![vec![0, 1, 2], vec![2, 1, 0]],
        )
        .unwrap()
    }

    fn parity4() -> ConceptVariable {
        ConceptVariable::from_fn(4, |i| (i % 2).to_string())
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(orbits(&FiniteAction::trivial(labels(3))), vec![vec![0], vec![1], vec![2]]);
        let g = strata_group();
        assert_eq!(g.order(), 12);
        assert_eq!(orbits(&g), vec![vec![0, 1], vec![2, 3, 4]]);
        assert_eq!(orbits(&reflection()), vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn group_validation() {
        let space = labels(3);
        assert!(matches!(
            FiniteAction::new(space.clone(), vec![vec![1, 0, 2]]),
            Err(Error::NotAGroup(_))
        ));
        // Identity and a 3-cycle without its inverse.
        assert!(matches!(
            FiniteAction::new(space.clone(), vec![vec![0, 1, 2], vec![1, 2, 0]]),
            Err(Error::NotAGroup(_))
        ));
        // Closed under inverses but not products.
        assert!(matches!(
            FiniteAction::new(space.clone(), vec![vec![0, 1, 2], vec![1, 0, 2], vec![0, 2, 1]]),
            Err(Error::NotAGroup(_))
        ));
        assert!(matches!(
            FiniteAction::new(space, vec![vec![0, 0, 2]]),
            Err(Error::InvalidAction(_))
        ));
    }

    #[test]
    fn invariant_sets() {
        let r = reflection();
        assert!(is_invariant_set(&r, &[0, 2]));
        assert!(!is_invariant_set(&r, &[0]));
        let g = strata_group();
        assert!(is_invariant_set(&g, &[0, 1, 2, 3, 4]));
        assert!(is_invariant_set(&g, &[2, 3, 4]));
        assert!(!is_invariant_set(&g, &[1, 2, 3, 4]));
    }

    #[test]
    fn transitivity() {
        assert!(is_transitive(&FiniteAction::cyclic(labels(4)).unwrap()));
        assert!(!is_transitive(&FiniteAction::trivial(labels(2))));
        assert!(!is_transitive(&strata_group()));
    }

    #[test]
    fn permissibility_examples() {
        let z4 = FiniteAction::cyclic(labels(4)).unwrap();
        let constant = ConceptVariable::from_fn(4, |_| "k".into());
        assert!(is_permissible(&z4, &constant).unwrap());
        assert!(is_permissible(&z4, &parity4()).unwrap());
        let zero = ConceptVariable::from_fn(4, |i| (i == 0).to_string());
        assert!(!is_permissible(&z4, &zero).unwrap());
    }

    #[test]
    fn induced_action_examples() {
        let z4 = FiniteAction::cyclic(labels(4)).unwrap();
        let constant = ConceptVariable::from_fn(4, |_| "k".into());
        assert_eq!(induced_action(&z4, &constant).unwrap().order(), 1);

        let eta = parity4();
        let induced = induced_action(&z4, &eta).unwrap();
        assert_eq!(induced.order(), 2);
        assert!(induced.elements().contains(&vec![1, 0]));
        let range = eta.range();
        let level = |phi: usize| range.iter().position(|r| r == eta.value(phi)).unwrap();
        for h in z4.elements() {
            let ht = induced_permutation(&eta, h);
            for phi in 0..4 {
                assert_eq!(range[ht[level(phi)]], eta.value(h[phi]));
            }
        }

        let abs = ConceptVariable::new(vec!["c".into(), "0".into(), "c".into()]);
        let on_abs = induced_action(&reflection(), &abs).unwrap();
        assert_eq!(on_abs.elements(), &[vec![0, 1]]);

        let zero = ConceptVariable::from_fn(4, |i| (i == 0).to_string());
        assert!(matches!(induced_action(&z4, &zero), Err(Error::NotPermissible)));
    }

    #[test]
    fn maximal_group_examples() {
        let constant = ConceptVariable::from_fn(4, |_| "k".into());
        assert_eq!(maximal_permissible_group(labels(4), &constant).unwrap().order(), 24);
        let injective = ConceptVariable::from_fn(3, |i| i.to_string());
        assert_eq!(maximal_permissible_group(labels(3), &injective).unwrap().order(), 6);
        assert_eq!(maximal_permissible_group(labels(4), &parity4()).unwrap().order(), 8);
        assert!(matches!(
            maximal_permissible_group(labels(9), &ConceptVariable::from_fn(9, |_| "k".into())),
            Err(Error::SpaceTooLarge(9))
        ));
    }

    #[test]
    fn full_symmetric_group_on_eight_points() {
        let constant = ConceptVariable::from_fn(8, |_| "k".into());
        assert_eq!(maximal_permissible_group(labels(8), &constant).unwrap().order(), 40320);
    }

    #[test]
    fn json_round() {
        let g = FiniteAction::from_json(r#"{"space":[-1, 0, 1], "elements":[[0,1,2],[2,1,0]]}"#).unwrap();
        assert_eq!(g.space(), &["-1", "0", "1"]);
        assert_eq!(orbits(&g), vec![vec![0, 2], vec![1]]);
        assert!(FiniteAction::from_json(r#"{"space":["a"], "elements":[[1]]}"#).is_err());
    }

    #[test]
    fn restriction_to_invariant_sets() {
        let g = strata_group();
        assert_eq!(g.restrict(&[2, 3, 4]).unwrap().order(), 6);
        assert!(g.restrict(&[1, 2]).is_err());
    }
}
