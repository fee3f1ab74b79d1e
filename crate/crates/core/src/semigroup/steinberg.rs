//! The semigroup presented by `x_0 + t = x_0` and `x_i + t = x_{i-1}`.
//!
//! Normal forms are `t^a x_{i1} ⋯ x_{ik}`: no generator `x_i` is ever
//! followed by a `t`. Concatenating two normal forms can only create a
//! redex at the seam, where the trailing `t` block of the right operand is
//! absorbed by the last `x` of the left operand.
//!
//! Enumeration orders normal forms by weight `a + Σ (i_j + 1)`, then by
//! `(a, [i_1, …, i_k])` lexicographically. There are exactly `2^w` normal
//! forms of weight `w`, so the rank of the first form of weight `w` is
//! `2^w - 2`.

use super::element::Word;

pub(crate) fn add(u: &Word, v: &Word) -> Option<Word> {
    match u.x.split_last() {
        None => Some(Word { t: u.t.checked_add(v.t)?, x: v.x.clone() }),
        Some((&last, init)) => {
            let mut x = Vec::with_capacity(u.x.len() + v.x.len());
            x.extend_from_slice(init);
            x.push(last.saturating_sub(v.t));
            x.extend_from_slice(&v.x);
            Some(Word { t: u.t, x })
        }
    }
}

pub(crate) fn weight(w: &Word) -> Option<u64> {
    w.x.iter()
        .try_fold(w.t, |acc, &i| acc.checked_add(i.checked_add(1)?))
}

/// Number of compositions of `m` (ordered sequences of positive parts).
fn compositions(m: u64) -> Option<u64> {
    match m {
        0 => Some(1),
        1..=63 => Some(1 << (m - 1)),
        _ => None,
    }
}

pub(crate) fn rank(w: &Word) -> Option<u64> {
    let wt = weight(w)?;
    if wt == 0 || wt >= 63 {
        return None;
    }
    let mut r = (1u64 << wt) - 2;
    // forms with the same weight and fewer leading t's come first
    for a in 0..w.t {
        r += compositions(wt - a)?;
    }
    let mut rest = wt - w.t;
    for &i in &w.x {
        let part = i + 1;
        for q in 1..part {
            r += compositions(rest - q)?;
        }
        rest -= part;
    }
    Some(r)
}

pub(crate) fn unrank(r: u64) -> Option<Word> {
    // weight w covers ranks [2^w - 2, 2^{w+1} - 2)
    let mut wt = 1u64;
    while wt < 62 && r >= (1u64 << (wt + 1)) - 2 {
        wt += 1;
    }
    if wt >= 62 {
        return None;
    }
    let mut pos = r - ((1u64 << wt) - 2);
    let mut t = 0;
    loop {
        let count = compositions(wt - t)?;
        if pos < count {
            break;
        }
        pos -= count;
        t += 1;
    }
    let mut rest = wt - t;
    let mut x = Vec::new();
    while rest > 0 {
        let mut part = 1;
        loop {
            let count = compositions(rest - part)?;
            if pos < count {
                break;
            }
            pos -= count;
            part += 1;
        }
        x.push(part - 1);
        rest -= part;
    }
    Some(Word { t, x })
}
