//! Littlewood–Richardson coefficients by enumeration of LR tableaux.
//!
//! The boxes labelled `k` of a tableau of skew shape `ν/λ` and content `μ` are
//! added as a horizontal strip; the reverse reading word is lattice iff, for
//! every row `r`, the number of `k`s in rows `≤ r` does not exceed the number of
//! `k−1`s in rows `< r`.

use std::collections::BTreeMap;

use crate::partition::Partition;

/// `s_λ s_μ = Σ_ν c^ν_{λμ} s_ν`, optionally restricted to `ν ⊆ bound`.
pub fn lr_product(lambda: &Partition, mu: &Partition, bound: Option<&Partition>) -> BTreeMap<Partition, u64> {
    let mut out = BTreeMap::new();
    let shape: Vec<u32> = lambda.parts().to_vec();
    let prev = Vec::new();
    place_label(0, &shape, &prev, mu.parts(), bound, &mut out);
    out
}

/// A single coefficient `c^ν_{λμ}`.
pub fn lr_coefficient(nu: &Partition, lambda: &Partition, mu: &Partition) -> u64 {
    if lambda.weight() + mu.weight() != nu.weight() || !nu.contains(lambda) || !nu.contains(mu) {
        return 0;
    }
    lr_product(lambda, mu, Some(nu)).get(nu).copied().unwrap_or(0)
}

fn place_label(
    k: usize,
    shape: &[u32],
    prev_counts: &[u32],
    content: &[u32],
    bound: Option<&Partition>,
    out: &mut BTreeMap<Partition, u64>,
) {
    if k == content.len() {
        *out.entry(Partition::from_sorted(shape.to_vec())).or_insert(0) += 1;
        return;
    }
    let rows = shape.len() + 1;
    let mut new_shape = shape.to_vec();
    new_shape.push(0);
    let mut counts = vec![0u32; rows];
    strip(
        0,
        content[k],
        0,
        0,
        k == 0,
        shape,
        prev_counts,
        &mut new_shape,
        &mut counts,
        &mut |ns: &[u32], cs: &[u32]| {
            let trimmed: Vec<u32> = ns.iter().copied().take_while(|&p| p > 0).collect();
            place_label(k + 1, &trimmed, cs, content, bound, out);
        },
        bound,
    );
}

#[allow(clippy::too_many_arguments)]
fn strip(
    row: usize,
    remaining: u32,
    cum_this: u32,
    cum_prev_above: u32,
    unconstrained: bool,
    shape: &[u32],
    prev_counts: &[u32],
    new_shape: &mut Vec<u32>,
    counts: &mut Vec<u32>,
    emit: &mut dyn FnMut(&[u32], &[u32]),
    bound: Option<&Partition>,
) {
    if remaining == 0 {
        emit(new_shape, counts);
        return;
    }
    if row >= new_shape.len() {
        return;
    }
    let base = shape.get(row).copied().unwrap_or(0);
    // horizontal strip: row length may not exceed the previous row of the old shape
    let mut cap = if row == 0 { base + remaining } else { shape[row - 1] };
    if let Some(b) = bound {
        cap = cap.min(b.part(row));
    }
    if cap < base {
        return;
    }
    let max_add = (cap - base).min(remaining);
    for add in (0..=max_add).rev() {
        let cum = cum_this + add;
        if !unconstrained && cum > cum_prev_above {
            continue;
        }
        new_shape[row] = base + add;
        counts[row] = add;
        let prev_here = prev_counts.get(row).copied().unwrap_or(0);
        strip(
            row + 1,
            remaining - add,
            cum,
            cum_prev_above + prev_here,
            unconstrained,
            shape,
            prev_counts,
            new_shape,
            counts,
            emit,
            bound,
        );
    }
    new_shape[row] = base;
    counts[row] = 0;
}
