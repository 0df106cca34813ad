use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex, MutexGuard, OnceLock, Weak};

struct Node {
    id: u64,
    rank: u32,
    members: Box<[HfSet]>,
}

type Table = HashMap<Box<[u64]>, Weak<Node>>;

fn table() -> MutexGuard<'static, Table> {
    static TABLE: OnceLock<Mutex<Table>> = OnceLock::new();
    TABLE
        .get_or_init(|| Mutex::new(HashMap::new()))
        .lock()
        .unwrap_or_else(|poisoned| poisoned.into_inner())
}

static NEXT_ID: AtomicU64 = AtomicU64::new(0);

fn key_of(members: &[HfSet]) -> Box<[u64]> {
    members.iter().map(|m| m.0.id).collect()
}

impl Drop for Node {
    fn drop(&mut self) {
        let key = key_of(&self.members);
        let mut t = table();
        // Another thread may already have re-interned this extension.
        if t.get(&key).is_some_and(|w| w.strong_count() == 0) {
            t.remove(&key);
        }
    }
}

/// A hereditarily finite set.
///
/// Values are hash-consed: two `HfSet`s with the same extension share one
/// node, so equality and hashing are O(1). Members are stored in a
/// canonical structural order (rank, then size, then members
/// lexicographically), which also fixes the rendering order.
#[derive(Clone)]
pub struct HfSet(Arc<Node>);

impl HfSet {
    pub fn empty() -> Self {
        Self::intern(Vec::new())
    }

    /// `{a}`
    pub fn singleton(a: &HfSet) -> Self {
        Self::intern(vec![a.clone()])
    }

    pub fn from_members(members: impl IntoIterator<Item = HfSet>) -> Self {
        let mut ms: Vec<HfSet> = members.into_iter().collect();
        ms.sort();
        ms.dedup();
        Self::intern(ms)
    }

    // `members` must already be sorted and duplicate-free.
    fn intern(members: Vec<HfSet>) -> Self {
        let key = key_of(&members);
        let mut t = table();
        if let Some(node) = t.get(&key).and_then(Weak::upgrade) {
            drop(t);
            return HfSet(node);
        }
        let rank = members.iter().map(|m| m.rank() + 1).max().unwrap_or(0);
        let node = Arc::new(Node {
            id: NEXT_ID.fetch_add(1, AtomicOrdering::Relaxed),
            rank,
            members: members.into_boxed_slice(),
        });
        t.insert(key, Arc::downgrade(&node));
        drop(t);
        HfSet(node)
    }

    pub fn rank(&self) -> u32 {
        self.0.rank
    }

    pub fn members(&self) -> &[HfSet] {
        &self.0.members
    }

    pub fn len(&self) -> usize {
        self.0.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.members.is_empty()
    }

    /// `a ∈ self`
    pub fn contains(&self, a: &HfSet) -> bool {
        if a.rank() >= self.rank() {
            return false;
        }
        self.members().binary_search(a).is_ok()
    }

    pub fn is_subset(&self, other: &HfSet) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut theirs = other.members().iter();
        'outer: for m in self.members() {
            for o in theirs.by_ref() {
                match o.cmp(m) {
                    Ordering::Less => continue,
                    Ordering::Equal => continue 'outer,
                    Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    pub fn is_disjoint(&self, other: &HfSet) -> bool {
        first_common(self, other).is_none()
    }

    pub fn diff(&self, other: &HfSet) -> HfSet {
        Self::merged(self, other, |in_a, in_b| in_a && !in_b)
    }

    pub fn union(&self, other: &HfSet) -> HfSet {
        Self::merged(self, other, |in_a, in_b| in_a || in_b)
    }

    pub fn inter(&self, other: &HfSet) -> HfSet {
        Self::merged(self, other, |in_a, in_b| in_a && in_b)
    }

    fn merged(a: &HfSet, b: &HfSet, keep: impl Fn(bool, bool) -> bool) -> HfSet {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let (xs, ys) = (a.members(), b.members());
        while i < xs.len() || j < ys.len() {
            let ord = match (xs.get(i), ys.get(j)) {
                (Some(x), Some(y)) => x.cmp(y),
                (Some(_), None) => Ordering::Less,
                (None, _) => Ordering::Greater,
            };
            let (m, in_a, in_b) = match ord {
                Ordering::Less => {
                    i += 1;
                    (&xs[i - 1], true, false)
                }
                Ordering::Greater => {
                    j += 1;
                    (&ys[j - 1], false, true)
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    (&xs[i - 1], true, true)
                }
            };
            if keep(in_a, in_b) {
                out.push(m.clone());
            }
        }
        Self::intern(out)
    }
}

fn first_common<'a>(a: &'a HfSet, b: &HfSet) -> Option<&'a HfSet> {
    let (mut i, mut j) = (0, 0);
    let (xs, ys) = (a.members(), b.members());
    while i < xs.len() && j < ys.len() {
        match xs[i].cmp(&ys[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => return Some(&xs[i]),
        }
    }
    None
}

impl PartialEq for HfSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for HfSet {}

impl Hash for HfSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state);
    }
}

impl Ord for HfSet {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.rank()
            .cmp(&other.rank())
            .then_with(|| self.len().cmp(&other.len()))
            .then_with(|| self.members().cmp(other.members()))
    }
}

impl PartialOrd for HfSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Brace notation: `{}`, `{{}}`, `{{},{{}}}`.
impl fmt::Display for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.members().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed set literal at offset {offset}")]
pub struct ParseHfError {
    pub offset: usize,
}

impl FromStr for HfSet {
    type Err = ParseHfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes: Vec<(usize, u8)> = s
            .bytes()
            .enumerate()
            .filter(|(_, b)| !b.is_ascii_whitespace())
            .collect();
        let mut pos = 0;
        let set = parse_braces(&bytes, &mut pos)?;
        match bytes.get(pos) {
            None => Ok(set),
            Some(&(offset, _)) => Err(ParseHfError { offset }),
        }
    }
}

fn parse_braces(bytes: &[(usize, u8)], pos: &mut usize) -> Result<HfSet, ParseHfError> {
    let err = |pos: usize| ParseHfError {
        offset: bytes.get(pos).map_or(usize::MAX, |b| b.0),
    };
    if bytes.get(*pos).map(|b| b.1) != Some(b'{') {
        return Err(err(*pos));
    }
    *pos += 1;
    let mut members = Vec::new();
    if bytes.get(*pos).map(|b| b.1) == Some(b'}') {
        *pos += 1;
        return Ok(HfSet::empty());
    }
    loop {
        members.push(parse_braces(bytes, pos)?);
        match bytes.get(*pos).map(|b| b.1) {
            Some(b',') => *pos += 1,
            Some(b'}') => {
                *pos += 1;
                return Ok(HfSet::from_members(members));
            }
            _ => return Err(err(*pos)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> HfSet {
        text.parse().unwrap()
    }

    #[test]
    fn empty_difference() {
        let e = HfSet::empty();
        assert_eq!(e.diff(&e), e);
        assert_eq!(e.rank(), 0);
    }

    #[test]
    fn singleton_of_singleton_empty() {
        let one = HfSet::singleton(&HfSet::empty());
        let two = HfSet::singleton(&one);
        assert_eq!(two.to_string(), "{{{}}}");
        assert_eq!(two.rank(), 2);
    }

    #[test]
    fn independent_constructions_share_a_node() {
        let a = s("{{},{{}}}");
        let b = HfSet::from_members([HfSet::singleton(&HfSet::empty()), HfSet::empty()]);
        assert!(Arc::ptr_eq(&a.0, &b.0));
        let c = s("{{{}},{},{}}");
        assert_eq!(a, c);
    }

    #[test]
    fn rendering_is_canonical() {
        assert_eq!(s("{ {{}} , {} }").to_string(), "{{},{{}}}");
    }

    #[test]
    fn membership_and_subset() {
        let a = s("{{},{{}}}");
        assert!(a.contains(&HfSet::empty()));
        assert!(!a.contains(&a));
        assert!(s("{{}}").is_subset(&a));
        assert!(!a.is_subset(&s("{{}}")));
        assert!(HfSet::empty().is_subset(&HfSet::empty()));
        assert!(s("{{}}").is_disjoint(&s("{{{}}}")));
        assert!(!a.is_disjoint(&s("{{{}}}")));
    }

    #[test]
    fn boolean_operations() {
        let a = s("{{},{{}}}");
        let b = s("{{{}},{{{}}}}");
        assert_eq!(a.diff(&b), s("{{}}"));
        assert_eq!(a.union(&b), s("{{},{{}},{{{}}}}"));
        assert_eq!(a.inter(&b), s("{{{}}}"));
    }

    #[test]
    fn malformed_literals() {
        assert!("{".parse::<HfSet>().is_err());
        assert!("{}}".parse::<HfSet>().is_err());
        assert!("{,}".parse::<HfSet>().is_err());
        assert!("x".parse::<HfSet>().is_err());
    }

    #[test]
    fn interning_is_thread_safe() {
        let handles: Vec<_> = (0..4)
            .map(|_| {
                std::thread::spawn(|| {
                    let mut acc = HfSet::empty();
                    for _ in 0..50 {
                        acc = HfSet::from_members([acc.clone(), HfSet::singleton(&acc)]);
                    }
                    acc
                })
            })
            .collect();
        let sets: Vec<HfSet> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(sets.windows(2).all(|w| w[0] == w[1]));
    }
}
