//! Permutations of the nine letters `1..=9` and the finite groups they generate.
//!
//! Products compose left to right: `a * b` applies `a` first, then `b`.
//! This is the order in which loops concatenate, so the monodromy of a
//! concatenated loop is the product of the monodromies.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const LETTERS: usize = 9;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    // 0-based images
    img: [u8; LETTERS],
}

impl Perm {
    pub fn identity() -> Self {
        let mut img = [0u8; LETTERS];
        for (k, v) in img.iter_mut().enumerate() {
            *v = k as u8;
        }
        Perm { img }
    }

    /// From 1-based images: `images[k]` is the image of letter `k + 1`.
    pub fn from_images(images: [usize; LETTERS]) -> Result<Self> {
        let mut seen = [false; LETTERS];
        let mut img = [0u8; LETTERS];
        for (k, &v) in images.iter().enumerate() {
            if !(1..=LETTERS).contains(&v) || seen[v - 1] {
                return Err(Error::Invalid(format!("not a permutation of 1..9: {images:?}")));
            }
            seen[v - 1] = true;
            img[k] = (v - 1) as u8;
        }
        Ok(Perm { img })
    }

    /// 1-based images.
    pub fn images(&self) -> [usize; LETTERS] {
        self.img.map(|v| v as usize + 1)
    }

    /// Image of a 1-based letter.
    pub fn apply(&self, letter: usize) -> usize {
        self.img[letter - 1] as usize + 1
    }

    pub fn inverse(&self) -> Self {
        let mut img = [0u8; LETTERS];
        for (k, &v) in self.img.iter().enumerate() {
            img[v as usize] = k as u8;
        }
        Perm { img }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { *self };
        (0..e.unsigned_abs()).fold(Perm::identity(), |acc, _| acc * base)
    }

    pub fn is_identity(&self) -> bool {
        *self == Perm::identity()
    }

    /// Disjoint cycles (1-based), each starting at its smallest letter,
    /// sorted by that letter; fixed points omitted.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = [false; LETTERS];
        let mut out = Vec::new();
        for start in 0..LETTERS {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start + 1];
            seen[start] = true;
            let mut k = self.img[start] as usize;
            while k != start {
                seen[k] = true;
                cyc.push(k + 1);
                k = self.img[k] as usize;
            }
            if cyc.len() > 1 {
                out.push(cyc);
            }
        }
        out
    }

    /// Cycle lengths including fixed points, in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        let moved: usize = t.iter().sum();
        t.extend(std::iter::repeat_n(1, LETTERS - moved));
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn order(&self) -> usize {
        self.cycles().iter().fold(1, |acc, c| lcm(acc, c.len()))
    }

    /// `sigma^-1 * self * sigma`: the same permutation with every letter
    /// renamed by `sigma`.
    pub fn relabel(&self, sigma: &Perm) -> Perm {
        sigma.inverse() * *self * *sigma
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl Mul for Perm {
    type Output = Perm;
    /// Apply `self`, then `rhs`.
    fn mul(self, rhs: Perm) -> Perm {
        Perm {
            img: self.img.map(|v| rhs.img[v as usize]),
        }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let s: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", s.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{self}")
    }
}

impl FromStr for Perm {
    type Err = Error;

    /// Parses cycle notation such as `(2,8,5)(3,6,9)` or `()`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Invalid(format!("bad cycle notation: {s:?}"));
        let mut img: [usize; LETTERS] = std::array::from_fn(|k| k + 1);
        let mut used = [false; LETTERS];
        let mut rest = s.as_str();
        if rest.is_empty() {
            return Err(bad());
        }
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(bad)?;
            let end = body.find(')').ok_or_else(bad)?;
            let inner = &body[..end];
            rest = &body[end + 1..];
            if inner.is_empty() {
                continue;
            }
            let letters: Vec<usize> = inner
                .split(',')
                .map(|t| t.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            for &l in &letters {
                if !(1..=LETTERS).contains(&l) || used[l - 1] {
                    return Err(bad());
                }
                used[l - 1] = true;
            }
            for (k, &l) in letters.iter().enumerate() {
                img[l - 1] = letters[(k + 1) % letters.len()];
            }
        }
        Perm::from_images(img)
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parse cycle notation, panicking on malformed input. For literals in code.
pub fn p(s: &str) -> Perm {
    s.parse().expect("valid cycle notation")
}

pub fn g0() -> Perm {
    p("(1,2,4)(5,6,8)(3,9,7)")
}
pub fn g1() -> Perm {
    p("(4,5,6)(7,9,8)")
}
pub fn g2() -> Perm {
    p("(2,8,5)(3,6,9)")
}
pub fn g3() -> Perm {
    p("(1,4,7)(3,9,6)")
}
pub fn g4() -> Perm {
    p("(1,7,4)(2,5,8)")
}

/// The Hesse group `<g0, g1>` of order 216.
pub fn hes() -> PermGroup {
    PermGroup::closure(&[g0(), g1()])
}

/// The stabilizer of the first letter in the Hesse group, `<g1, g2>`.
pub fn hes1() -> PermGroup {
    PermGroup::closure(&[g1(), g2()])
}

/// Finite subgroup of S9 with all elements materialized, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    generators: Vec<Perm>,
    elements: Vec<Perm>,
}

impl PermGroup {
    /// Breadth-first closure under right multiplication by generators.
    pub fn closure(gens: &[Perm]) -> Self {
        let mut seen: HashSet<Perm> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(Perm::identity());
        queue.push_back(Perm::identity());
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = x * *g;
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Perm> = seen.into_iter().collect();
        elements.sort_unstable();
        PermGroup {
            generators: gens.to_vec(),
            elements,
        }
    }

    pub fn trivial() -> Self {
        Self::closure(&[])
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: &Perm) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.generators.iter().all(|g| other.contains(g)) && self.elements.iter().all(|g| other.contains(g))
    }

    /// Orbit of a 1-based letter, sorted.
    pub fn orbit(&self, letter: usize) -> Vec<usize> {
        let mut o: Vec<usize> = self.elements.iter().map(|g| g.apply(letter)).collect();
        o.sort_unstable();
        o.dedup();
        o
    }

    /// Orbit partition, each block sorted, blocks sorted by smallest letter.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for l in 1..=LETTERS {
            if !out.iter().any(|o| o.contains(&l)) {
                out.push(self.orbit(l));
            }
        }
        out
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.orbits().iter().map(|o| o.len()).collect();
        s.sort_unstable();
        s
    }

    pub fn stabilizer(&self, letter: usize) -> PermGroup {
        let els: Vec<Perm> = self.elements.iter().copied().filter(|g| g.apply(letter) == letter).collect();
        Self::from_elements(els)
    }

    /// Wrap an element list that is already known to be a group, choosing a
    /// small generating set greedily.
    fn from_elements(mut elements: Vec<Perm>) -> PermGroup {
        elements.sort_unstable();
        let mut gens = Vec::new();
        let mut current = PermGroup::trivial();
        for x in &elements {
            if !current.contains(x) {
                gens.push(*x);
                current = PermGroup::closure(&gens);
            }
        }
        debug_assert_eq!(current.elements, elements);
        PermGroup {
            generators: gens,
            elements,
        }
    }

    /// Whether the group acts transitively on ordered `k`-tuples of distinct letters.
    pub fn is_k_transitive(&self, k: usize) -> bool {
        if k == 0 || k > LETTERS {
            return k == 0;
        }
        let base: Vec<usize> = (1..=k).collect();
        let mut images: HashSet<Vec<usize>> = HashSet::new();
        for g in &self.elements {
            images.insert(base.iter().map(|&l| g.apply(l)).collect());
        }
        let want: usize = (LETTERS - k + 1..=LETTERS).product();
        images.len() == want
    }

    pub fn conjugacy_class(&self, x: &Perm) -> Vec<Perm> {
        let mut c: Vec<Perm> = self.elements.iter().map(|h| *h * *x * h.inverse()).collect();
        c.sort_unstable();
        c.dedup();
        c
    }

    /// The group with every letter renamed by `sigma`.
    pub fn relabel(&self, sigma: &Perm) -> PermGroup {
        let gens: Vec<Perm> = self.generators.iter().map(|g| g.relabel(sigma)).collect();
        let mut elements: Vec<Perm> = self.elements.iter().map(|g| g.relabel(sigma)).collect();
        elements.sort_unstable();
        PermGroup {
            generators: gens,
            elements,
        }
    }

    /// Multiset of cycle types over all elements.
    fn cycle_type_profile(&self) -> Vec<Vec<usize>> {
        let mut t: Vec<Vec<usize>> = self.elements.iter().map(|g| g.cycle_type()).collect();
        t.sort();
        t
    }
}

/// A renaming `sigma` of the letters with `g.relabel(sigma) = h`, i.e.
/// `sigma^-1 * G * sigma = H`. Brute force over S9.
pub fn conjugate_in_s9(g: &PermGroup, h: &PermGroup) -> Option<Perm> {
    if g.order() != h.order() || g.cycle_type_profile() != h.cycle_type_profile() {
        return None;
    }
    let gens = if g.generators.is_empty() { &g.elements } else { &g.generators };
    let mut letters: [usize; LETTERS] = std::array::from_fn(|k| k + 1);
    loop {
        let sigma = Perm::from_images(letters).expect("permutation");
        if gens.iter().all(|x| h.contains(&x.relabel(&sigma))) {
            return Some(sigma);
        }
        if !next_permutation(&mut letters) {
            return None;
        }
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    let n = a.len();
    let Some(i) = (0..n - 1).rev().find(|&i| a[i] < a[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| a[j] > a[i]).unwrap();
    a.swap(i, j);
    a[i + 1..].reverse();
    true
}

/// Permutation action of `g`'s generators on the right cosets `H x` of `h`,
/// the coset of `reps[i]` being named by the letter `labels[i]`.
/// Letters not used as labels are fixed. The coset `H x` is sent to `H x g`.
pub fn coset_action(g: &PermGroup, h: &PermGroup, reps: &[Perm], labels: &[usize]) -> Result<PermGroup> {
    if !h.is_subgroup_of(g) {
        return Err(Error::NotSubgroup);
    }
    let index = g.order() / h.order();
    if reps.len() != index || labels.len() != index {
        return Err(Error::IndexMismatch {
            index,
            labels: labels.len(),
        });
    }
    let coset_of = |x: &Perm| -> Option<usize> { reps.iter().position(|r| h.contains(&(*x * r.inverse()))) };
    for (i, r) in reps.iter().enumerate() {
        if !g.contains(r) || coset_of(r) != Some(i) {
            return Err(Error::Invalid(format!("representative {i} does not name a distinct coset")));
        }
    }
    let mut seen = [false; LETTERS];
    for &l in labels {
        if !(1..=LETTERS).contains(&l) || seen[l - 1] {
            return Err(Error::Invalid(format!("bad coset labels {labels:?}")));
        }
        seen[l - 1] = true;
    }
    let mut gens = Vec::new();
    for x in &g.generators {
        let mut img: [usize; LETTERS] = std::array::from_fn(|k| k + 1);
        for (i, r) in reps.iter().enumerate() {
            let j = coset_of(&(*r * *x)).expect("cosets cover the group");
            img[labels[i] - 1] = labels[j];
        }
        gens.push(Perm::from_images(img)?);
    }
    Ok(PermGroup::closure(&gens))
}

/// A word in numbered generators: `(generator index, exponent)` factors,
/// multiplied left to right.
pub type Word = Vec<(usize, i64)>;

/// Parses words such as `g1 g2^2 g1^-1` (factors separated by spaces or `*`);
/// `1` or `e` denotes the empty word.
pub fn parse_word(s: &str) -> Result<Word> {
    let mut w = Word::new();
    for tok in s.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
        if tok == "1" || tok == "e" {
            continue;
        }
        let bad = || Error::Invalid(format!("bad word factor {tok:?}"));
        let body = tok.strip_prefix('g').ok_or_else(bad)?;
        let (idx, exp) = match body.split_once('^') {
            Some((i, e)) => (i, e.parse::<i64>().map_err(|_| bad())?),
            None => (body, 1),
        };
        w.push((idx.parse::<usize>().map_err(|_| bad())?, exp));
    }
    Ok(w)
}

pub fn eval_word(gens: &[Perm], w: &Word) -> Result<Perm> {
    w.iter().try_fold(Perm::identity(), |acc, &(i, e)| {
        let g = gens
            .get(i)
            .ok_or_else(|| Error::Invalid(format!("generator g{i} not supplied")))?;
        Ok(acc * g.pow(e))
    })
}

/// Checks each relation `lhs = rhs` among the supplied generators, where
/// `gens[i]` is the value of `g{i}`.
pub fn verify_relations(gens: &[Perm], relations: &[(Word, Word)]) -> Result<Vec<bool>> {
    relations
        .iter()
        .map(|(l, r)| Ok(eval_word(gens, l)? == eval_word(gens, r)?))
        .collect()
}

/// Parses `lhs = rhs` into a pair of words.
pub fn parse_relation(s: &str) -> Result<(Word, Word)> {
    let (l, r) = s
        .split_once('=')
        .ok_or_else(|| Error::Invalid(format!("relation without '=': {s:?}")))?;
    Ok((parse_word(l)?, parse_word(r)?))
}

/// The named generators `g0..g4`, indexable by [`eval_word`].
pub fn named_generators() -> Vec<Perm> {
    vec![g0(), g1(), g2(), g3(), g4()]
}

/// Right-coset representatives of `<g1>` in `<g1, g2>`, named by the letters
/// `2..=9` they send `2` to. Each word lists its factors in the order they
/// act on the coset, last factor first.
pub fn hes1_coset_words() -> Vec<(usize, &'static str)> {
    vec![
        (2, "1"),
        (3, "g2^2 g1 g2^2"),
        (4, "g1^2 g2^2"),
        (5, "g2^2"),
        (6, "g1 g2^2"),
        (7, "g1 g2"),
        (8, "g2"),
        (9, "g1^2 g2"),
    ]
}

/// Evaluates a word whose factors act right to left.
pub fn eval_word_functional(gens: &[Perm], w: &Word) -> Result<Perm> {
    let rev: Word = w.iter().rev().copied().collect();
    eval_word(gens, &rev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use proptest::prelude::*;
    use rand::seq::IndexedRandom;

    #[test]
    fn notation_round_trip() {
        for s in ["()", "(2,8,5)(3,6,9)", "(1,2,4)(3,9,7)(5,6,8)", "(1,9)"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("(3,9,7)(1,2,4)").to_string(), "(1,2,4)(3,9,7)");
        assert!("(1,2".parse::<Perm>().is_err());
        assert!("(1,1)".parse::<Perm>().is_err());
        assert!("(0,2)".parse::<Perm>().is_err());
    }

    #[test]
    fn products_apply_left_first() {
        let a = p("(1,2)");
        let b = p("(2,3)");
        assert_eq!((a * b).apply(1), 3);
        assert_eq!(p("(1,2,3)").pow(-1), p("(1,3,2)"));
    }

    #[test]
    fn hesse_group_orders() {
        assert_eq!(hes().order(), 216);
        assert_eq!(hes1().order(), 24);
        assert_eq!(PermGroup::closure(&[Perm::identity()]).order(), 1);
    }

    #[test]
    fn g2_is_conjugate_of_g1() {
        assert_eq!(g0() * g1() * g0().inverse(), g2());
    }

    #[test]
    fn relations() {
        let gens = named_generators();
        let rels: Vec<_> = ["g1 g2 g1 = g2 g1 g2", "g1^3 = 1", "g2 g3 = g4^-1"]
            .iter()
            .map(|s| parse_relation(s).unwrap())
            .collect();
        assert_eq!(verify_relations(&gens, &rels).unwrap(), vec![true, true, true]);
        let wrong = parse_relation("g1 g2 = g2 g1").unwrap();
        assert_eq!(verify_relations(&gens, &[wrong]).unwrap(), vec![false]);
    }

    #[test]
    fn orbit_partitions() {
        assert_eq!(hes().orbits(), vec![(1..=9).collect::<Vec<_>>()]);
        assert_eq!(
            PermGroup::closure(&[g2(), g3()]).orbits(),
            vec![vec![1, 4, 7], vec![2, 5, 8], vec![3, 6, 9]]
        );
        assert_eq!(hes1().orbits(), vec![vec![1], (2..=9).collect::<Vec<_>>()]);
    }

    #[test]
    fn stabilizers() {
        assert_eq!(hes().stabilizer(1).elements(), hes1().elements());
        assert_eq!(PermGroup::closure(&[g1()]).stabilizer(1).order(), 3);
        assert_eq!(hes1().stabilizer(2).elements(), PermGroup::closure(&[g1()]).elements());
    }

    #[test]
    fn transitivity() {
        assert!(hes().is_k_transitive(2));
        assert!(!hes().is_k_transitive(3));
        assert!(!PermGroup::trivial().is_k_transitive(1));
    }

    #[test]
    fn conjugacy_in_s9() {
        let a = hes();
        let s = conjugate_in_s9(&a, &a).unwrap();
        assert_eq!(a.relabel(&s).elements(), a.elements());
        let s1 = hes().stabilizer(1);
        let s5 = hes().stabilizer(5);
        let sigma = conjugate_in_s9(&s1, &s5).unwrap();
        assert_eq!(s1.relabel(&sigma).elements(), s5.elements());
        let c3 = PermGroup::closure(&[p("(1,2,3)")]);
        let v4 = PermGroup::closure(&[p("(1,2)(3,4)")]);
        assert!(conjugate_in_s9(&c3, &v4).is_none());
    }

    #[test]
    fn stabilizers_conjugate_within_hes() {
        let g = hes();
        let s1 = g.stabilizer(1);
        let s5 = g.stabilizer(5);
        assert!(g.elements().iter().any(|x| s1.relabel(x).elements() == s5.elements()));
    }

    #[test]
    fn class_of_g1_in_hes1_has_four_elements() {
        assert_eq!(hes1().conjugacy_class(&g1()).len(), 4);
    }

    #[test]
    fn coset_action_matches_point_action() {
        let gens = named_generators();
        let g = PermGroup::closure(&[g1(), g2()]);
        let h = PermGroup::closure(&[g1()]);
        let (labels, reps): (Vec<usize>, Vec<Perm>) = hes1_coset_words()
            .into_iter()
            .map(|(l, w)| (l, eval_word_functional(&gens, &parse_word(w).unwrap()).unwrap()))
            .unzip();
        for (l, r) in labels.iter().zip(&reps) {
            assert_eq!(r.apply(2), *l);
        }
        let act = coset_action(&g, &h, &reps, &labels).unwrap();
        assert_eq!(act.generators(), &[g1(), g2()]);
    }

    #[test]
    fn coset_action_errors() {
        let g = hes1();
        let t = PermGroup::closure(&[p("(1,2)")]);
        assert!(matches!(coset_action(&g, &t, &[Perm::identity()], &[1]), Err(Error::NotSubgroup)));
        assert!(matches!(
            coset_action(&g, &g, &[Perm::identity(), g1()], &[1, 2]),
            Err(Error::IndexMismatch { .. })
        ));
        let one = coset_action(&g, &g, &[Perm::identity()], &[1]).unwrap();
        assert_eq!(one.order(), 1);
    }

    #[test]
    fn orbit_stabilizer_on_random_subgroups() {
        let mut rng = seeded(77);
        let elems = hes().elements().to_vec();
        for _ in 0..60 {
            let gens: Vec<Perm> = elems.choose_multiple(&mut rng, 2).copied().collect();
            let g = PermGroup::closure(&gens);
            for l in 1..=9 {
                assert_eq!(g.stabilizer(l).order() * g.orbit(l).len(), g.order());
            }
        }
    }

    fn arb_perm() -> impl Strategy<Value = Perm> {
        Just((1..=9).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(|v| Perm::from_images(v.try_into().unwrap()).unwrap())
    }

    #[test]
    fn closure_is_idempotent() {
        for g in [hes(), hes1(), PermGroup::closure(&[g2(), g3()])] {
            assert_eq!(PermGroup::closure(g.elements()).elements(), g.elements());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn inverse_and_closure_laws(a in arb_perm(), b in arb_perm()) {
            prop_assert!((a * a.inverse()).is_identity());
            prop_assert_eq!((a * b).inverse(), b.inverse() * a.inverse());
            prop_assert_eq!(a.to_string().parse::<Perm>().unwrap(), a);
            let g = PermGroup::closure(&[a, b]);
            prop_assert_eq!(362_880 % g.order(), 0);
            prop_assert!(a.pow(a.order() as i64).is_identity());
        }
    }
}
