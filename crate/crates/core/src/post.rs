//! The six duality-closed Boolean classes of 0,1-preserving functions, and
//! the family `Π(F)` of a conservative clone.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::clone::{FunctionSet, GeneratorSet, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::func::{table_len, FiniteFunction};

/// Canonical listing of a Boolean slice: tables per arity `1..=bound`.
pub type Fingerprint = Vec<Vec<Vec<u8>>>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "ClassRepr", try_from = "ClassRepr")]
pub enum PostClassId {
    O1,
    D1,
    D2,
    L4,
    A4,
    C4,
    Other(Fingerprint),
}

#[derive(Serialize, Deserialize)]
struct ClassRepr {
    class: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fingerprint: Option<Fingerprint>,
}

impl From<PostClassId> for ClassRepr {
    fn from(id: PostClassId) -> Self {
        match id {
            PostClassId::Other(fp) => ClassRepr { class: "Other".into(), fingerprint: Some(fp) },
            named => ClassRepr { class: named.name().into(), fingerprint: None },
        }
    }
}

impl TryFrom<ClassRepr> for PostClassId {
    type Error = Error;

    fn try_from(r: ClassRepr) -> Result<Self> {
        match (r.class.as_str(), r.fingerprint) {
            ("Other", Some(fp)) => Ok(PostClassId::Other(fp)),
            ("Other", None) => Err(Error::input("class Other needs a fingerprint")),
            (name, _) => PostClassId::from_name(name),
        }
    }
}

impl PostClassId {
    pub const NAMED: [PostClassId; 6] =
        [PostClassId::O1, PostClassId::D1, PostClassId::D2, PostClassId::L4, PostClassId::A4, PostClassId::C4];

    pub fn name(&self) -> &'static str {
        match self {
            PostClassId::O1 => "O1",
            PostClassId::D1 => "D1",
            PostClassId::D2 => "D2",
            PostClassId::L4 => "L4",
            PostClassId::A4 => "A4",
            PostClassId::C4 => "C4",
            PostClassId::Other(_) => "Other",
        }
    }

    pub fn from_name(name: &str) -> Result<PostClassId> {
        PostClassId::NAMED
            .iter()
            .find(|c| c.name() == name)
            .cloned()
            .ok_or_else(|| Error::input(format!("unknown Post class {name:?}")))
    }

    /// Whether every member is self-dual.
    pub fn is_self_dual_class(&self) -> bool {
        matches!(self, PostClassId::O1 | PostClassId::D1 | PostClassId::D2 | PostClassId::L4)
    }

    /// The self-dual members of a named class form this class.
    pub fn self_dual_core(&self) -> Result<PostClassId> {
        match self {
            PostClassId::A4 => Ok(PostClassId::D2),
            PostClassId::C4 => Ok(PostClassId::D1),
            PostClassId::Other(_) => Err(Error::input("self-dual core is only defined for the named classes")),
            named => Ok(named.clone()),
        }
    }

    /// Semantic membership test for the named classes, at any arity.
    pub fn contains(&self, f: &FiniteFunction) -> Result<bool> {
        if f.k() != 2 {
            return Err(Error::CarrierMismatch { expected: 2, found: f.k() });
        }
        let p = Profile::of(f);
        Ok(match self {
            PostClassId::O1 => f.is_projection().is_some(),
            PostClassId::L4 => p.linear && p.self_dual && p.keeps_constants,
            PostClassId::D2 => p.monotone && p.self_dual && p.keeps_constants,
            PostClassId::D1 => p.self_dual && p.keeps_constants,
            PostClassId::A4 => p.monotone && p.keeps_constants,
            PostClassId::C4 => p.keeps_constants,
            PostClassId::Other(fp) => match fp.get(f.arity() - 1) {
                Some(tables) => tables.iter().any(|t| t.as_slice() == f.table()),
                None => return Err(Error::NotClosed(f.arity())),
            },
        })
    }
}

impl fmt::Display for PostClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

struct Profile {
    keeps_constants: bool,
    self_dual: bool,
    monotone: bool,
    linear: bool,
}

impl Profile {
    fn of(f: &FiniteFunction) -> Profile {
        let t = f.table();
        let len = t.len();
        let n = f.arity();
        let keeps_constants = t[0] == 0 && t[len - 1] == 1;
        // negating every argument flips every bit of the cell code
        let self_dual = (0..len).all(|c| t[c ^ (len - 1)] == 1 - t[c]);
        let bit = |i: usize| 1usize << (n - 1 - i);
        let monotone = (0..len).all(|c| (0..n).all(|i| c & bit(i) != 0 || t[c] <= t[c | bit(i)]));
        let a0 = t[0];
        let coef: Vec<u8> = (0..n).map(|i| t[bit(i)] ^ a0).collect();
        let linear = (0..len).all(|c| {
            let v = (0..n).filter(|&i| c & bit(i) != 0).fold(a0, |acc, i| acc ^ coef[i]);
            v == t[c]
        });
        Profile { keeps_constants, self_dual, monotone, linear }
    }
}

/// `f* = ¬f(¬x_0, .., ¬x_{n-1})`.
pub fn dualize(f: &FiniteFunction) -> Result<FiniteFunction> {
    if f.k() != 2 {
        return Err(Error::CarrierMismatch { expected: 2, found: f.k() });
    }
    let len = f.table().len();
    let table = (0..len).map(|c| 1 - f.table()[c ^ (len - 1)]).collect();
    FiniteFunction::new(2, f.arity(), table)
}

/// Highest arity for which semantic slices are enumerated.
pub const MAX_SEMANTIC_ARITY: usize = 4;

/// The members of a named class of arity `1..=max_arity`, by filtering all
/// Boolean functions.
pub fn semantic_slice(id: &PostClassId, max_arity: usize) -> Result<FunctionSet> {
    if matches!(id, PostClassId::Other(_)) {
        return Err(Error::input("semantic slices exist only for the six named classes"));
    }
    if max_arity == 0 || max_arity > MAX_SEMANTIC_ARITY {
        return Err(Error::input(format!("arity bound must be in 1..={MAX_SEMANTIC_ARITY}")));
    }
    let mut out = Vec::new();
    for n in 1..=max_arity {
        let len = table_len(2, n).expect("small");
        for code in 0u64..(1u64 << len) {
            let table = (0..len).map(|c| ((code >> (len - 1 - c)) & 1) as u8).collect();
            let f = FiniteFunction::new(2, n, table)?;
            if id.contains(&f)? {
                out.push(f);
            }
        }
    }
    FunctionSet::new(2, Some(max_arity), out)
}

fn cached_slice(id: &PostClassId) -> &'static FunctionSet {
    static CACHE: OnceLock<Vec<FunctionSet>> = OnceLock::new();
    let all =
        CACHE.get_or_init(|| PostClassId::NAMED.iter().map(|c| semantic_slice(c, 3).expect("named class")).collect());
    let i = PostClassId::NAMED.iter().position(|c| c == id).expect("named class");
    &all[i]
}

/// Generators used for the named classes: each class's own members of
/// arity at most 3, which generate it.
pub fn class_generators(id: &PostClassId) -> Result<GeneratorSet> {
    if matches!(id, PostClassId::Other(_)) {
        return Err(Error::input("generators exist only for the six named classes"));
    }
    GeneratorSet::new(2, cached_slice(id).iter().filter(|f| f.is_projection().is_none()).cloned())
}

fn fingerprint(set: &FunctionSet, bound: usize) -> Fingerprint {
    (1..=bound).map(|n| set.arity_slice(n).iter().map(|f| f.table().to_vec()).collect()).collect()
}

/// Identifies a Boolean set of 0,1-preserving functions closed up to
/// `bound` by comparing its slices with the semantic ones.
pub fn identify_post_class(set: &FunctionSet, bound: usize) -> Result<PostClassId> {
    if set.k() != 2 {
        return Err(Error::CarrierMismatch { expected: 2, found: set.k() });
    }
    match set.closed_up_to() {
        Some(b) if b >= bound => {}
        _ => return Err(Error::NotClosed(bound)),
    }
    if bound == 0 {
        return Err(Error::input("bound must be at least 1"));
    }
    if let Some(f) = set.iter().find(|f| !f.is_conservative()) {
        return Err(Error::input(format!("{f:?} does not preserve 0 and 1")));
    }
    // Slices above the enumerable arity are compared by membership only.
    let enumerated = bound.min(MAX_SEMANTIC_ARITY);
    for id in PostClassId::NAMED.iter() {
        let sem = if enumerated <= 3 { cached_slice(id).clone() } else { semantic_slice(id, enumerated)? };
        let matches = (1..=enumerated).all(|n| sem.arity_slice(n) == set.arity_slice(n))
            && (enumerated + 1..=bound).all(|n| set.arity_slice(n).iter().all(|f| id.contains(f).unwrap_or(false)));
        if matches {
            return Ok(id.clone());
        }
    }
    Ok(PostClassId::Other(fingerprint(set, bound)))
}

/// Identifies the Boolean clone generated by `gens`.
pub fn identify_generated(gens: &GeneratorSet, bound: usize) -> Result<PostClassId> {
    identify_post_class(&FunctionSet::generate(gens, bound, DEFAULT_CAP)?, bound)
}

/// `Π_B` for one 2-subset together with the labeling chosen for it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiEntry {
    pub b: [u8; 2],
    pub class: PostClassId,
    /// Images of `b[0]` and `b[1]` in `{0, 1}`.
    pub labeling: [u8; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiFamily {
    pub k: usize,
    pub entries: Vec<PiEntry>,
}

pub fn pi_family(gens: &GeneratorSet, bound: usize) -> Result<PiFamily> {
    if let Some(g) = gens.functions().iter().find(|g| !g.is_conservative()) {
        return Err(Error::input(format!("{g:?} is not conservative")));
    }
    let k = gens.k() as u8;
    let mut entries = Vec::new();
    for x in 0..k {
        for y in x + 1..k {
            let restricted = gens.restrict(&[x, y])?;
            let plain = FunctionSet::generate(&restricted, bound, DEFAULT_CAP)?;
            let swapped = FunctionSet::new(2, Some(bound), plain.iter().map(dualize).collect::<Result<Vec<_>>>()?)?;
            let (chosen, labeling) = if fingerprint(&swapped, bound) < fingerprint(&plain, bound) {
                (swapped, [1, 0])
            } else {
                (plain, [0, 1])
            };
            let class = identify_post_class(&chosen, bound)?;
            entries.push(PiEntry { b: [x, y], class, labeling });
        }
    }
    Ok(PiFamily { k: gens.k(), entries })
}

/// `Π_0(F)`: the common class of a constant family.
pub fn pi_zero(fam: &PiFamily) -> Result<PostClassId> {
    let first = fam.entries.first().ok_or_else(|| Error::input("empty family"))?;
    if let Some(other) = fam.entries.iter().find(|e| e.class != first.class) {
        return Err(Error::NonConstantPi {
            first: first.b,
            first_class: first.class.to_string(),
            second: other.b,
            second_class: other.class.to_string(),
        });
    }
    Ok(first.class.clone())
}
