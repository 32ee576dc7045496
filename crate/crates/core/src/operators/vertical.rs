use std::str::FromStr;

use super::{concretize, refine};
use crate::code::CodeMap;
use crate::error::{Error, Result};
use crate::label::CompatRel;
use crate::lts::Lts;
use crate::simulation::simulates;

/// Which operator lifts the abstract system before comparing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerticalMode {
    Gamma,
    Rho,
}

impl FromStr for VerticalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma" => Ok(VerticalMode::Gamma),
            "rho" => Ok(VerticalMode::Rho),
            other => Err(Error::InvalidLabel(format!("unknown vertical mode {other:?}"))),
        }
    }
}

/// Vertical implementation relation between a concrete `m` and an abstract
/// `n`: `m ⊑ γ_{R,I}(n)` in [`VerticalMode::Gamma`], `m ⊑ ρ_R(n)` in
/// [`VerticalMode::Rho`]. `rel` is only used in gamma mode.
pub fn vertical_check(m: &Lts, n: &Lts, code: &CodeMap, mode: VerticalMode, rel: &CompatRel) -> Result<bool> {
    let lifted = match mode {
        VerticalMode::Gamma => concretize(code, rel, n)?,
        VerticalMode::Rho => refine(code, n)?,
    };
    Ok(simulates(m, &lifted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn shared_prefix_system_implements_choice() {
        for mode in [VerticalMode::Gamma, VerticalMode::Rho] {
            let ok = vertical_check(
                &fixtures::shared_prefix_refinement(),
                &fixtures::choice(),
                &fixtures::choice_code(),
                mode,
                &CompatRel::Identity,
            )
            .unwrap();
            assert!(ok, "{mode:?}");
        }
    }

    #[test]
    fn refinement_is_related_to_its_source() {
        let n = fixtures::letter_loops();
        let code = fixtures::ascii_code();
        let m = refine(&code, &n).unwrap();
        assert!(vertical_check(&m, &n, &code, VerticalMode::Rho, &CompatRel::Identity).unwrap());
    }
}
