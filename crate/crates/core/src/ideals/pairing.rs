//! The pairing `γ ⋅∧ ϑ` of symmetric-slot forms with 𝔨-valued forms.

use crate::algebroid::{Section, VForm};
use crate::connections::{unit, SymForm};
use crate::error::{Error, Result};
use crate::weil::WeilCochain;

use super::IdealBundle;

/// `γ ⋅∧ ϑ = Σ_b ϑ^b ∧ γ(u_b, ·)`.
pub fn wedgedot(ideal: &IdealBundle, gamma: &SymForm, theta: &VForm) -> Result<SymForm> {
    if gamma.slots == 0 {
        return Err(Error::structural("no symmetric slot left to pair with"));
    }
    if theta.rank() != ideal.rank() || gamma.alg_rank != ideal.algebroid().rank() {
        return Err(Error::structural("pairing needs a 𝔨-valued form"));
    }
    let n = gamma.nvars;
    let mut out = SymForm::zero(
        n,
        gamma.alg_rank,
        gamma.rank,
        gamma.degree + theta.degree(),
        gamma.slots - 1,
    );
    for b in 0..ideal.rank() {
        let tb = theta.value_component(b);
        if tb.is_zero() {
            continue;
        }
        let inner = gamma.insert(&ideal.include(&unit(n, ideal.rank(), b)));
        for (slots, w) in inner.components() {
            out.add(slots.clone(), &VForm::wedge_scalar_left(&tb, w));
        }
    }
    Ok(out)
}

/// `γ ⋅∧ (ϑ_1, …, ϑ_l) = γ ⋅∧ ϑ_l ⋅∧ … ⋅∧ ϑ_1`.
pub fn wedgedot_multiple(ideal: &IdealBundle, gamma: &SymForm, thetas: &[VForm]) -> Result<SymForm> {
    let mut acc = gamma.clone();
    for t in thetas.iter().rev() {
        acc = wedgedot(ideal, &acc, t)?;
    }
    Ok(acc)
}

/// `c_j(α ‖ β, ·) ⋅∧ (ϑ_1, …, ϑ_l)` for a cochain, with the `l` free slots
/// filled from 𝔨: `Σ ϑ_1^{b_1} ∧ … ∧ ϑ_l^{b_l} ∧ c_j(α ‖ β, u_{b_1}, …, u_{b_l})`.
pub(crate) fn pair_cochain(
    ideal: &IdealBundle,
    c: &WeilCochain,
    j: usize,
    antis: &[Section],
    syms: &mut Vec<Section>,
    thetas: &[VForm],
) -> Result<VForm> {
    let Some((first, rest)) = thetas.split_first() else {
        return c.evaluate(j, antis, syms);
    };
    let n = c.chart_dim();
    let m = ideal.rank();
    let deg = c.degree() - j + thetas.iter().map(VForm::degree).sum::<usize>();
    let mut out = VForm::zero(n, c.value_rank(), deg);
    if deg > n {
        return Ok(out);
    }
    for b in 0..m {
        let tb = first.value_component(b);
        if tb.is_zero() {
            continue;
        }
        syms.push(ideal.include(&unit(n, m, b)));
        let inner = pair_cochain(ideal, c, j, antis, syms, rest);
        syms.pop();
        let inner = inner?;
        if !inner.is_zero() {
            out.add_assign(&VForm::wedge_scalar_left(&tb, &inner));
        }
    }
    Ok(out)
}
