//! Seeded generators for the fixture corpus. The same kind, size and seed
//! always produce the same category, with the same ids and names.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::{artin_gluing, GrothendieckData};
use crate::error::Error;
use crate::fincat::{terminal_object, FinCategory, Functor, Obj, SizeGuard};
use crate::fixtures::{chain, finset_guarded, monotone, poset};
use crate::io::Document;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorpusKind {
    Poset,
    Lattice,
    Finset,
    Groth,
    Gluing,
}

impl CorpusKind {
    pub const ALL: [CorpusKind; 5] = [
        CorpusKind::Poset,
        CorpusKind::Lattice,
        CorpusKind::Finset,
        CorpusKind::Groth,
        CorpusKind::Gluing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CorpusKind::Poset => "poset",
            CorpusKind::Lattice => "lattice",
            CorpusKind::Finset => "finset",
            CorpusKind::Groth => "groth",
            CorpusKind::Gluing => "gluing",
        }
    }

    /// Size used when none is given: elements for posets and lattices, `n` for
    /// `FinSet_≤n`, base length for Grothendieck data, lattice size for gluings.
    pub fn default_size(self) -> usize {
        match self {
            CorpusKind::Poset => 5,
            CorpusKind::Lattice => 6,
            CorpusKind::Finset => 2,
            CorpusKind::Groth => 3,
            CorpusKind::Gluing => 4,
        }
    }
}

impl fmt::Display for CorpusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CorpusKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        CorpusKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Schema(format!("unknown corpus kind {s:?}")))
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random partial order on `n` elements: each `i < j` is drawn with
/// probability `density`, then closed transitively. Ids are a linear extension.
pub fn random_poset(n: usize, density: f64, rng: &mut impl Rng) -> FinCategory {
    let mut lt = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            lt[i][j] = rng.gen_bool(density);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if lt[i][k] && lt[k][j] {
                    lt[i][j] = true;
                }
            }
        }
    }
    let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    poset(&names, |i, j| i == j || lt[i][j])
}

/// A random lattice with at most `n` elements (exactly `n` unless the draw
/// gets stuck): an intersection-closed family of subsets of a small set,
/// containing the whole set, ordered by inclusion. Ids are a linear extension.
pub fn random_lattice(n: usize, rng: &mut impl Rng) -> FinCategory {
    let n = n.max(1);
    let bits = (n as f64).log2().ceil() as u32 + 2;
    let full: u32 = (1 << bits) - 1;
    let mut family: BTreeSet<u32> = BTreeSet::from([full]);
    for _ in 0..64 * n {
        if family.len() == n {
            break;
        }
        let s = rng.gen_range(0..full);
        let mut next = family.clone();
        let mut todo = vec![s];
        while let Some(x) = todo.pop() {
            if next.insert(x) {
                todo.extend(next.iter().map(|&y| x & y));
            }
        }
        if next.len() <= n {
            family = next;
        }
    }
    let mut sets: Vec<u32> = family.into_iter().collect();
    sets.sort_by_key(|&s| (s.count_ones(), s));
    let names: Vec<String> = (0..sets.len()).map(|i| format!("l{i}")).collect();
    poset(&names, |i, j| sets[i] & sets[j] == sets[i])
}

/// A random monotone map between thin categories whose ids are linear
/// extensions. With `keep_top` the top of the source goes to the top of the
/// target.
pub fn random_monotone(
    l: &Arc<FinCategory>,
    m: &Arc<FinCategory>,
    keep_top: bool,
    rng: &mut impl Rng,
) -> Result<Functor, Error> {
    let top_l = terminal_object(l);
    let top_m = terminal_object(m);
    let mut obj_map: Vec<Obj> = Vec::with_capacity(l.num_objects());
    for x in l.objects() {
        if keep_top && Some(x) == top_l {
            obj_map.push(top_m.ok_or_else(|| Error::NoTerminal("target".into()))?);
            continue;
        }
        let below: Vec<Obj> = l
            .objects()
            .take(x.idx())
            .filter(|&w| !l.hom(w, x).is_empty())
            .map(|w| obj_map[w.idx()])
            .collect();
        let candidates: Vec<Obj> = m
            .objects()
            .filter(|&y| below.iter().all(|&fw| !m.hom(fw, y).is_empty()))
            .collect();
        let y = *candidates
            .choose(rng)
            .ok_or_else(|| Error::Precondition("no upper bound for a monotone image".into()))?;
        obj_map.push(y);
    }
    monotone(l.clone(), m.clone(), obj_map)
}

fn random_chain_map(a: usize, b: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut v: Vec<usize> = (0..a).map(|_| rng.gen_range(0..b)).collect();
    v.sort_unstable();
    v
}

/// Strict Grothendieck data over `chain(len)` with chain fibers and monotone
/// transitions, composites taken on the nose.
pub fn random_grothendieck(len: usize, rng: &mut impl Rng) -> Result<GrothendieckData, Error> {
    let len = len.max(1);
    let base = Arc::new(chain(len));
    let sizes: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=3)).collect();
    let fibers: Vec<Arc<FinCategory>> = sizes.iter().map(|&k| Arc::new(chain(k))).collect();
    let steps: Vec<Vec<usize>> = (0..len.saturating_sub(1))
        .map(|i| random_chain_map(sizes[i], sizes[i + 1], rng))
        .collect();
    let mut transitions = Vec::with_capacity(base.num_morphisms());
    for u in base.morphisms() {
        let (i, j) = (base.src(u).idx(), base.tgt(u).idx());
        let map: Vec<Obj> = (0..sizes[i])
            .map(|x| Obj((i..j).fold(x, |x, k| steps[k][x]) as u32))
            .collect();
        transitions.push(monotone(fibers[i].clone(), fibers[j].clone(), map)?);
    }
    GrothendieckData::new(base, fibers, transitions)
}

/// One corpus item. `size` defaults per kind.
pub fn generate(
    kind: CorpusKind,
    size: Option<usize>,
    seed: u64,
    guard: SizeGuard,
) -> Result<Document, Error> {
    let n = size.unwrap_or(kind.default_size());
    let mut r = rng(seed);
    let doc = match kind {
        CorpusKind::Poset => Document::Category(random_poset(n, 0.4, &mut r)),
        CorpusKind::Lattice => Document::Category(random_lattice(n, &mut r)),
        CorpusKind::Finset => Document::Category(finset_guarded(n, guard)?),
        CorpusKind::Groth => Document::Grothendieck(random_grothendieck(n, &mut r)?),
        CorpusKind::Gluing => {
            let f = gluing_functor(n, seed)?;
            Document::Fibration(crate::constructions::artin_gluing_guarded(&f, guard)?.fibration)
        }
    };
    if let Document::Category(c) = &doc {
        guard.check(c.num_morphisms())?;
    }
    Ok(doc)
}

/// The top-preserving monotone map between random lattices that the gluing
/// corpus item for `seed` glues along.
pub fn gluing_functor(size: usize, seed: u64) -> Result<Functor, Error> {
    let mut r = rng(seed);
    let l = Arc::new(random_lattice(size, &mut r));
    let m = Arc::new(random_lattice(size, &mut r));
    random_monotone(&l, &m, true, &mut r)
}

/// Random lattice-to-lattice functors: meet maps `x ↦ x ∧ a` (lex) and
/// top-preserving monotone maps, alternating by seed.
pub fn sample_functor(seed: u64, size: usize) -> Result<Functor, Error> {
    let mut r = rng(seed);
    let l = Arc::new(random_lattice(size, &mut r));
    if seed.is_multiple_of(2) {
        let a = Obj(r.gen_range(0..l.num_objects()) as u32);
        crate::fixtures::meet_map(&l, a)
    } else {
        let m = Arc::new(random_lattice(size, &mut r));
        random_monotone(&l, &m, true, &mut r)
    }
}

/// `gl(F)` for [`sample_functor`].
pub fn sample_gluing(seed: u64, size: usize) -> Result<crate::fibration::Fibration, Error> {
    Ok(artin_gluing(&sample_functor(seed, size)?)?.fibration)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::is_lex_category;

    #[test]
    fn deterministic_by_seed() {
        for kind in CorpusKind::ALL {
            let a = generate(kind, None, 7, SizeGuard::default()).unwrap();
            let b = generate(kind, None, 7, SizeGuard::default()).unwrap();
            assert_eq!(crate::io::document_to_json(&a), crate::io::document_to_json(&b));
        }
    }

    #[test]
    fn lattices_are_lex() {
        for seed in 1..=20 {
            let c = random_lattice(6, &mut rng(seed));
            c.check_laws().unwrap();
            assert!(is_lex_category(&c), "seed {seed}");
            assert!(c.num_objects() <= 6);
        }
    }

    #[test]
    fn finset_three_has_sixty_morphisms() {
        match generate(CorpusKind::Finset, Some(3), 1, SizeGuard::default()).unwrap() {
            Document::Category(c) => {
                assert_eq!(c.num_objects(), 4);
                assert_eq!(c.num_morphisms(), (0..4u32).flat_map(|i| (0..4u32).map(move |j| j.pow(i))).sum::<u32>() as usize);
                assert_eq!(c.num_morphisms(), 60);
            }
            d => panic!("{}", d.kind()),
        }
    }

    #[test]
    fn monotone_maps_keep_top() {
        for seed in 1..=10 {
            let mut r = rng(seed);
            let l = Arc::new(random_lattice(5, &mut r));
            let m = Arc::new(random_lattice(5, &mut r));
            let f = random_monotone(&l, &m, true, &mut r).unwrap();
            assert_eq!(Some(f.ob(terminal_object(&l).unwrap())), terminal_object(&m));
        }
    }
}
