use std::collections::BTreeSet;

use crate::circle::PlCircleMap;
use crate::curve::{Axis, PlCurve};
use crate::geometry::ScalarKey;
use crate::scalar::Scalar;

use super::split::{split_top_bottom, unravel, Unraveled};
use super::RelationError;

/// Curve parameter on the arc `from..=to` (unraveled indices, monotone
/// levels) where the level equals `p`.
fn position_at_level<S: Scalar>(un: &Unraveled<S>, from: usize, to: usize, p: &S, n: usize) -> S {
    for j in from..to {
        let (l0, l1) = (un.level(j), un.level(j + 1));
        let (lo, hi) = if l0 < l1 { (l0, l1) } else { (l1, l0) };
        if p >= lo && p <= hi {
            let t = (p.clone() - l0.clone()) / (l1.clone() - l0.clone());
            let u0 = un.param(j, n);
            return u0.clone() + (un.param(j + 1, n) - u0) * t;
        }
    }
    unreachable!("level inside [0, 1] lies on every monotone arc")
}

/// The involution exchanging the two points over each point of the shadow
/// along `axis`, as a map of the parameter circle (`c` stands for the curve
/// point at parameter `n·c`).
///
/// Only defined when the projection is exactly 2-to-1 over the interior of
/// the shadow, i.e. the top arc climbs and the bottom arc descends strictly.
/// The result has degree `-1` and fixes exactly the two split points.
pub fn flip_map_demo<S: Scalar>(curve: &PlCurve<S>, axis: Axis) -> Result<PlCircleMap<S>, RelationError> {
    let split = split_top_bottom(curve, axis)?;
    let un = unravel(curve, &split)?;
    let (n, m, k) = (curve.len(), un.curve.len(), un.a_tilde_index);
    let climbs = (0..k).all(|j| un.level(j) < un.level(j + 1));
    let descends = (k..m).all(|j| un.level(j) > un.level(j + 1));
    if !climbs || !descends {
        return Err(RelationError::NotTwoToOne { axis });
    }
    let levels: Vec<S> =
        (0..m).map(|j| ScalarKey(un.level(j).clone())).collect::<BTreeSet<_>>().into_iter().map(|k| k.0).collect();
    let top: Vec<S> = levels.iter().map(|p| position_at_level(&un, 0, k, p, n)).collect();
    let bottom: Vec<S> = levels.iter().map(|p| position_at_level(&un, k, m, p, n)).collect();
    let last = levels.len() - 1;
    let mut params = top.clone();
    let mut images = bottom.clone();
    for j in (1..last).rev() {
        params.push(bottom[j].clone());
        images.push(top[j].clone());
    }
    let n_s = S::from_i64(n as i64);
    let scale = |v: Vec<S>| v.into_iter().map(|u| u / n_s.clone()).collect::<Vec<S>>();
    let f = PlCircleMap::from_period(&scale(params), &scale(images), -1)?;
    if f.fixed_points().len() != 2 {
        return Err(RelationError::Internal("flip map does not have exactly two fixed points".into()));
    }
    Ok(f)
}
