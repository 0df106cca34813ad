use super::{ModelError, SetAssignment};
use crate::hf::HfSet;
use crate::syntax::Var;

/// The map `M -> M_{x,y}`.
///
/// Every non-auxiliary value meeting `Mx` loses its intersection with `Mx`
/// and gains the single member `My`; every other value, and every
/// companion variable, is kept. Requires `My` to be a member of no
/// non-auxiliary value.
pub fn transform(m: &SetAssignment, x: &Var, y: &Var) -> Result<SetAssignment, ModelError> {
    let mx = m.value(x)?.clone();
    let my = m.value(y)?.clone();
    for (v, s) in m.iter() {
        if !v.is_auxiliary() && s.contains(&my) {
            return Err(ModelError::PreconditionViolated { var: v.clone() });
        }
    }
    let single = HfSet::singleton(&my);
    Ok(m.iter()
        .map(|(v, s)| {
            let value = if v.is_auxiliary() || s.is_disjoint(&mx) {
                s.clone()
            } else {
                s.diff(&mx).union(&single)
            };
            (v.clone(), value)
        })
        .collect())
}
