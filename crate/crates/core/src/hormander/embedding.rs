use super::norm::SpaceTag;
use crate::error::{Error, Result};

/// Outcome of comparing two space indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    /// True when `H^{a} ⊆ H^{b}` continuously.
    pub embeds: bool,
    pub reason: String,
}

/// Radii at which `phi_b / phi_a` is sampled when `s_a = s_b`.
const RATIO_RADII: [f64; 5] = [1.0, 10.0, 1e3, 1e6, 1e9];
const RATIO_SLACK: f64 = 1e-12;

/// Decides whether `H^{s_a, s_a gamma; phi_a}` embeds continuously into
/// `H^{s_b, s_b gamma; phi_b}`.
///
/// A strict gain in `s` always embeds, since class-M parameters grow or
/// decay slower than any power. At equal `s` the embedding holds iff
/// `phi_b / phi_a` is bounded, judged on a sampled radius ladder: the
/// ratio at `r = 1e9` must not exceed the ratio at `r = 1e6`.
///
/// The trend test composes additively in `ln(phi_b / phi_a)`, which keeps
/// the relation transitive.
pub fn embedding_order(a: &SpaceTag, b: &SpaceTag) -> Result<Embedding> {
    if a.gamma != b.gamma {
        return Err(Error::input(format!(
            "spaces with gamma = {} and gamma = {} are not comparable",
            a.gamma, b.gamma
        )));
    }
    if a.s > b.s {
        return Ok(Embedding { embeds: true, reason: format!("s drops from {} to {}", a.s, b.s) });
    }
    if a.s < b.s {
        return Ok(Embedding { embeds: false, reason: format!("s grows from {} to {}", a.s, b.s) });
    }
    let mut ln_ratios = Vec::with_capacity(RATIO_RADII.len());
    for r in RATIO_RADII {
        let u = r.ln();
        ln_ratios.push(b.phi.ln_at_log(u)? - a.phi.ln_at_log(u)?);
    }
    let (near, far) = (ln_ratios[3], ln_ratios[4]);
    let embeds = far <= near + RATIO_SLACK * (1.0 + near.abs());
    let samples: Vec<String> = ln_ratios.iter().map(|l| format!("{:.6e}", l.exp())).collect();
    let reason = format!(
        "phi_b/phi_a at r = 1, 1e1, 1e3, 1e6, 1e9: {} ({})",
        samples.join(", "),
        if embeds { "bounded" } else { "still growing" }
    );
    Ok(Embedding { embeds, reason })
}
