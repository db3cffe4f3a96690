use alloc::format;
use alloc::vec::Vec;

use super::SLHModel;
use crate::error::{Error, Result};
use crate::opalg::{expand_indices, from_blocks, identity, im_part, min_singular_value, inverse, select, select_blocks, CMatrix};
use super::feedback::WELL_POSED_TOL;

/// An SLH component whose ports are split into a left lead `Y` and a right lead `X`.
///
/// Inputs on `Y` travel rightwards (`+`), outputs on `Y` leave leftwards (`−`).
#[derive(Clone, Debug, PartialEq)]
pub struct TwoLeadSLH {
    pub model: SLHModel,
    pub lead_y: Vec<usize>,
    pub lead_x: Vec<usize>,
}

impl TwoLeadSLH {
    pub fn new(model: SLHModel, lead_y: Vec<usize>, lead_x: Vec<usize>) -> Result<Self> {
        let n = model.ports();
        let mut seen = alloc::vec![false; n];
        for &p in lead_y.iter().chain(lead_x.iter()) {
            if p >= n {
                return Err(Error::InvalidPartition(format!("port {p} out of range 0..{n}")));
            }
            if seen[p] {
                return Err(Error::InvalidPartition(format!("port {p} appears twice")));
            }
            seen[p] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidPartition("leads must cover every port".into()));
        }
        Ok(TwoLeadSLH { model, lead_y, lead_x })
    }

    /// Blocks `(S^{−+}, S^{−−}, S^{++}, S^{+−}, L^−, L^+)`.
    fn faces(&self) -> Faces {
        let d = self.model.dim();
        let s = self.model.s();
        let (y, x) = (&self.lead_y, &self.lead_x);
        let cols: Vec<usize> = (0..d).collect();
        Faces {
            s_mp: select_blocks(s, y, y, d),
            s_mm: select_blocks(s, y, x, d),
            s_pp: select_blocks(s, x, y, d),
            s_pm: select_blocks(s, x, x, d),
            l_m: select(self.model.l(), &expand_indices(y, d), &cols),
            l_p: select(self.model.l(), &expand_indices(x, d), &cols),
        }
    }
}

struct Faces {
    s_mp: CMatrix,
    s_mm: CMatrix,
    s_pp: CMatrix,
    s_pm: CMatrix,
    l_m: CMatrix,
    l_p: CMatrix,
}

/// Star product: the right lead of `ga` is joined to the left lead of `gb`.
///
/// The result's left lead is `Y` of `ga` and its right lead is `X` of `gb`.
pub fn redheffer_star(ga: &TwoLeadSLH, gb: &TwoLeadSLH) -> Result<TwoLeadSLH> {
    if ga.lead_x.len() != gb.lead_y.len() {
        return Err(Error::InvalidPartition(format!(
            "joined leads have multiplicities {} and {}",
            ga.lead_x.len(),
            gb.lead_y.len()
        )));
    }
    if ga.model.space() != gb.model.space() {
        return Err(Error::InvalidSpace("star product needs a common space".into()));
    }
    let space = ga.model.space().clone();
    let d = space.total_dim();
    let a = ga.faces();
    let b = gb.faces();
    let inner = ga.lead_x.len() * d;

    let loop_p = identity(inner) - &a.s_pm * &b.s_mp;
    let loop_m = identity(inner) - &b.s_mp * &a.s_pm;
    let sigma_min = min_singular_value(&loop_p).min(min_singular_value(&loop_m));
    if !(sigma_min > WELL_POSED_TOL) {
        return Err(Error::IllPosed { sigma_min });
    }
    let z_p = inverse(&loop_p, "Redheffer loop Z+")?;
    let z_m = inverse(&loop_m, "Redheffer loop Z-")?;
    let w_pm = &a.s_pm * &z_m;
    let w_mp = &b.s_mp * &z_p;

    let s11 = &a.s_mp + &a.s_mm * &w_mp * &a.s_pp;
    let s12 = &a.s_mm * &z_m * &b.s_mm;
    let s21 = &b.s_pp * &z_p * &a.s_pp;
    let s22 = &b.s_pm + &b.s_pp * &w_pm * &b.s_mm;
    let s = from_blocks(&[&[&s11, &s12], &[&s21, &s22]])?;

    let l1 = &a.l_m + &a.s_mm * &z_m * (&b.l_m + &b.s_mp * &a.l_p);
    let l2 = &b.l_p + &b.s_pp * &z_p * (&a.l_p + &a.s_pm * &b.l_m);
    let l = from_blocks(&[&[&l1], &[&l2]])?;

    let row = from_blocks(&[&[
        &(a.l_p.adjoint() + b.l_p.adjoint() * &b.s_pp),
        &(b.l_m.adjoint() + a.l_m.adjoint() * &a.s_mm),
    ]])?;
    let loops = from_blocks(&[&[&z_p, &w_pm], &[&w_mp, &z_m]])?;
    let col = from_blocks(&[&[&a.l_p], &[&b.l_m]])?;
    let h = ga.model.h() + gb.model.h() + im_part(&(row * loops * col));

    let ny = ga.lead_y.len();
    let nx = gb.lead_x.len();
    let model = SLHModel::from_parts(space, s, l, h);
    Ok(TwoLeadSLH { model, lead_y: (0..ny).collect(), lead_x: (ny..ny + nx).collect() })
}
