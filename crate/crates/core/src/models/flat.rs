use indexmap::IndexMap;

use super::{ModelError, SetAssignment};
use crate::decide::AbstractModel;
use crate::hf::{im_inject_bits, HfSet};
use crate::syntax::Var;

/// The flat rank and the set each realized region was contracted to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatParams {
    pub flat_rank: u32,
    /// Region signature (indices into the flattened variable list) to the
    /// rank-`flat_rank` set standing for it.
    pub region_index: IndexMap<Vec<usize>, HfSet>,
}

/// Contract every nonempty region of `model` to a single set of rank
/// `flat_rank`.
///
/// An element of `model` with signature `W` (the variables among `vars` it
/// belongs to) becomes the set assigned to `W` by the rank-exact injection;
/// each variable then holds the images of the signatures that contain it.
/// Variables absent from `model` are empty.
pub fn flatten(
    model: &AbstractModel,
    vars: &[Var],
    flat_rank: u32,
) -> Result<(SetAssignment, FlatParams), ModelError> {
    let needed = vars.len() as u32 + 1;
    if flat_rank < needed {
        return Err(ModelError::FlatRankTooSmall { flat_rank, needed });
    }
    let mut region_index: IndexMap<Vec<usize>, HfSet> = IndexMap::new();
    for e in 0..model.elements() {
        let sig: Vec<usize> = (0..vars.len())
            .filter(|&i| model.contains(e, &vars[i]))
            .collect();
        if sig.is_empty() || region_index.contains_key(&sig) {
            continue;
        }
        let bits: Vec<u32> = sig.iter().map(|&i| i as u32).collect();
        let image = im_inject_bits(&bits, flat_rank)?;
        region_index.insert(sig, image);
    }
    let assignment = vars
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let members = region_index
                .iter()
                .filter(|(sig, _)| sig.contains(&i))
                .map(|(_, s)| s.clone());
            (v.clone(), HfSet::from_members(members))
        })
        .collect();
    Ok((
        assignment,
        FlatParams {
            flat_rank,
            region_index,
        },
    ))
}

/// Whether every member of every value has rank exactly `flat_rank`.
pub fn is_flat(m: &SetAssignment, flat_rank: u32) -> bool {
    m.iter()
        .all(|(_, s)| s.members().iter().all(|u| u.rank() == flat_rank))
}

/// Nonempty region signatures of an assignment over `vars`: for every
/// member of some value, the indices of the values containing it.
pub fn region_signatures(m: &SetAssignment, vars: &[Var]) -> Result<Vec<Vec<usize>>, ModelError> {
    let values: Vec<&HfSet> = vars.iter().map(|v| m.value(v)).collect::<Result<_, _>>()?;
    let mut out: Vec<Vec<usize>> = values
        .iter()
        .flat_map(|s| s.members().iter())
        .map(|u| {
            (0..values.len())
                .filter(|&i| values[i].contains(u))
                .collect()
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}
