use std::collections::{BTreeMap, BTreeSet};

use super::LinearSystem;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const MAX_FM_VARIABLES: usize = 8;

type Row = (Vec<Rational>, Rational);

/// Indices of the input rows a derived row combines.
type History = BTreeSet<usize>;

/// Scales a row so its first nonzero coefficient has magnitude one, which
/// lets duplicates collapse in the map.
fn normalize((a, b): Row) -> Row {
    match a.iter().find(|x| !x.is_zero()) {
        None => (a, b),
        Some(lead) => {
            let s = lead.abs().recip();
            (a.iter().map(|x| x * &s).collect(), &b * &s)
        }
    }
}

fn insert(rows: &mut BTreeMap<Row, History>, row: Row, history: History) {
    match rows.get(&row) {
        Some(h) if h.len() <= history.len() => {}
        _ => {
            rows.insert(row, history);
        }
    }
}

/// Decides feasibility by eliminating variables one at a time. Each round
/// eliminates the variable producing the fewest new rows, and drops rows
/// combining more than `k + 1` input rows after `k` eliminations, which
/// are implied by the others (Chernikov's rule).
pub(super) fn feasible(system: &LinearSystem) -> Result<bool> {
    let n = system.num_vars;
    if n > MAX_FM_VARIABLES {
        return Err(Error::Capacity(format!(
            "Fourier-Motzkin is limited to {MAX_FM_VARIABLES} variables, got {n}"
        )));
    }
    let mut input: Vec<Row> = system.constraints.iter().map(|c| c.as_le()).collect();
    for &j in &system.nonneg {
        let mut a = vec![Rational::zero(); n];
        a[j] = -Rational::one();
        input.push((a, Rational::zero()));
    }
    let mut rows = BTreeMap::new();
    for (k, row) in input.into_iter().enumerate() {
        insert(&mut rows, normalize(row), History::from([k]));
    }

    let mut remaining: Vec<usize> = (0..n).collect();
    let mut eliminated = 0usize;
    loop {
        // Rows with no variable left are decided now.
        let mut violated = false;
        rows.retain(|(a, b), _| {
            if a.iter().all(Rational::is_zero) {
                violated |= b.is_negative();
                false
            } else {
                true
            }
        });
        if violated {
            return Ok(false);
        }
        if remaining.is_empty() || rows.is_empty() {
            return Ok(true);
        }
        let cost = |var: usize| {
            let up = rows.keys().filter(|(a, _)| a[var].is_positive()).count();
            let down = rows.keys().filter(|(a, _)| a[var].is_negative()).count();
            up * down
        };
        let pos = (0..remaining.len())
            .min_by_key(|&p| cost(remaining[p]))
            .expect("nonempty");
        let var = remaining.remove(pos);
        eliminated += 1;

        let mut upper = Vec::new();
        let mut lower = Vec::new();
        let mut rest = BTreeMap::new();
        for (row, history) in rows {
            let c = &row.0[var];
            if c.is_positive() {
                upper.push((row, history));
            } else if c.is_negative() {
                lower.push((row, history));
            } else {
                insert(&mut rest, row, history);
            }
        }
        for ((ua, ub), uh) in &upper {
            let cu = ua[var].recip();
            for ((la, lb), lh) in &lower {
                let history: History = uh.union(lh).copied().collect();
                if history.len() > eliminated + 1 {
                    continue;
                }
                let cl = (-&la[var]).recip();
                let a: Vec<Rational> = ua
                    .iter()
                    .zip(la)
                    .map(|(u, l)| u * &cu + l * &cl)
                    .collect();
                let b = ub * &cu + lb * &cl;
                insert(&mut rest, normalize((a, b)), history);
            }
        }
        rows = rest;
    }
}
