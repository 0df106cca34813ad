use super::{HfError, HfSet};

/// Largest level [`enumerate_level`] will materialise; `V_5` already has
/// 65536 members.
pub const MAX_ENUMERATED_LEVEL: u32 = 4;

/// All sets of the von Neumann level `V_n`.
#[derive(Debug, Clone)]
pub struct LevelTable {
    pub n: u32,
    pub sets: Vec<HfSet>,
}

impl LevelTable {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// `chain(0) = {}`, `chain(k + 1) = {chain(k)}`; `rank(chain(k)) = k`.
pub fn chain(k: u32) -> HfSet {
    let mut s = HfSet::empty();
    for _ in 0..k {
        s = HfSet::singleton(&s);
    }
    s
}

/// All subsets of `base`, indexed by bitmask.
fn powerset(base: &[HfSet]) -> Vec<HfSet> {
    (0u64..1 << base.len())
        .map(|mask| {
            HfSet::from_members(
                base.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, s)| s.clone()),
            )
        })
        .collect()
}

/// Enumerate `V_n`, each set exactly once. `V_0` is empty and
/// `V_{n+1}` is the powerset of `V_n`.
pub fn enumerate_level(n: u32) -> Result<LevelTable, HfError> {
    if n > MAX_ENUMERATED_LEVEL {
        return Err(HfError::LevelTooLarge {
            n,
            max: MAX_ENUMERATED_LEVEL,
        });
    }
    let mut sets = Vec::new();
    for _ in 0..n {
        sets = powerset(&sets);
    }
    Ok(LevelTable { n, sets })
}

/// Number of sets of rank exactly `n`, counted by building every subset of
/// `V_n` and checking its rank. Valid for `n <= 4`.
pub fn count_rank_exact(n: u32) -> Result<u64, HfError> {
    let level = enumerate_level(n)?;
    let count = (0u64..1 << level.len())
        .filter(|mask| {
            let s = HfSet::from_members(
                level
                    .sets
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, s)| s.clone()),
            );
            s.rank() == n
        })
        .count();
    Ok(count as u64)
}

/// The injection from nonempty variable subsets into sets of rank
/// `flat_rank` used to contract Venn regions.
///
/// Index `W` with binary digits `J` maps to
/// `{chain(flat_rank - 1)} ∪ {chain(j) : j ∈ J}`; the top chain pins the rank
/// and `J` ranges over `{0, ..., flat_rank - 2}`, so `2^(flat_rank - 1) - 1`
/// indices are available.
pub fn im_inject(index: u128, flat_rank: u32) -> Result<HfSet, HfError> {
    let bits: Vec<u32> = (0..128).filter(|b| index >> b & 1 == 1).collect();
    im_inject_bits(&bits, flat_rank).map_err(|e| match e {
        HfError::IndexOutOfRange { flat_rank, .. } => HfError::IndexOutOfRange { index, flat_rank },
        other => other,
    })
}

/// [`im_inject`] with the index given as its set bits.
pub fn im_inject_bits(bits: &[u32], flat_rank: u32) -> Result<HfSet, HfError> {
    if flat_rank == 0 {
        return Err(HfError::FlatRankTooSmall {
            flat_rank,
            needed: 1,
        });
    }
    let top = flat_rank - 1;
    if bits.is_empty() || bits.iter().any(|&b| b >= top) {
        let index = bits
            .iter()
            .fold(0u128, |acc, &b| if b < 128 { acc | 1 << b } else { acc });
        return Err(HfError::IndexOutOfRange { index, flat_rank });
    }
    Ok(HfSet::from_members(
        std::iter::once(chain(top)).chain(bits.iter().map(|&j| chain(j))),
    ))
}
