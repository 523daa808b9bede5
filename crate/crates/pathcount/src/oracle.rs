//! Brute-force reference implementations. These power the derived values
//! in tests and the equivalence suites; they are deliberately naive and
//! share no dynamic-programming logic with the engines. Engines never call
//! into this module — tests call both sides.

use std::time::Instant;

use thiserror::Error;

use crate::graph::Graph;
use crate::matching::{Matching, SmInstance};
use crate::problems::{check_labeling, Labeling, LabelingProblem};

/// Caps on enumeration size and wall-clock time.
#[derive(Debug, Clone)]
pub struct EnumerationBudget {
    pub max_items: u64,
    pub max_millis: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_items: 20_000_000,
            max_millis: 60_000,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("oracle budget exceeded: {0}")]
pub struct OracleBudgetExceeded(pub String);

fn check_size(what: &str, items: f64, budget: &EnumerationBudget) -> Result<(), OracleBudgetExceeded> {
    if items > budget.max_items as f64 {
        return Err(OracleBudgetExceeded(format!(
            "{what} needs {items:.0} items, budget allows {}",
            budget.max_items
        )));
    }
    Ok(())
}

fn check_time(start: Instant, budget: &EnumerationBudget) -> Result<(), OracleBudgetExceeded> {
    if start.elapsed().as_millis() as u64 > budget.max_millis {
        return Err(OracleBudgetExceeded(format!(
            "time budget of {} ms exhausted",
            budget.max_millis
        )));
    }
    Ok(())
}

/// All valid labelings, by scanning every one of the `c^n` candidates.
pub fn enumerate_valid_labelings(
    g: &Graph,
    prob: &LabelingProblem,
    budget: &EnumerationBudget,
) -> Result<Vec<Labeling>, OracleBudgetExceeded> {
    let n = g.n();
    let c = prob.alphabet_size();
    check_size("labeling scan", (c as f64).powi(n as i32), budget)?;
    let start = Instant::now();
    let mut out = Vec::new();
    let mut digits = vec![0usize; n];
    loop {
        let candidate = Labeling::new(digits.clone());
        if check_labeling(g, prob, &candidate).expect("oracle inputs are compatible") {
            out.push(candidate);
        }
        // Odometer increment over base-c digit vectors.
        let mut i = 0;
        loop {
            if i == n {
                return Ok(out);
            }
            digits[i] += 1;
            if digits[i] < c {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if out.len() % 4096 == 0 {
            check_time(start, budget)?;
        }
    }
}

/// All nonempty cliques, by scanning every nonempty vertex subset.
pub fn enumerate_cliques(
    g: &Graph,
    budget: &EnumerationBudget,
) -> Result<Vec<Vec<usize>>, OracleBudgetExceeded> {
    let n = g.n();
    check_size("clique scan", 2f64.powi(n as i32), budget)?;
    let start = Instant::now();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        let members: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let is_clique = members
            .iter()
            .enumerate()
            .all(|(i, &u)| members[i + 1..].iter().all(|&w| g.adjacent(u, w)));
        if is_clique {
            out.push(members);
        }
        if mask % 65536 == 0 {
            check_time(start, budget)?;
        }
    }
    Ok(out)
}

/// True if no man-woman pair prefers each other to their partners.
pub fn is_stable(inst: &SmInstance, matching: &Matching) -> bool {
    let n = inst.n();
    for m in 0..n {
        let w_of_m = matching.woman_of(m);
        for w in 0..n {
            if w == w_of_m {
                continue;
            }
            let m_of_w = matching.man_of(w);
            if inst.man_prefers(m, w, w_of_m) && inst.woman_prefers(w, m, m_of_w) {
                return false;
            }
        }
    }
    true
}

/// All stable matchings, by testing every one of the `n!` perfect
/// matchings against the blocking-pair definition.
pub fn enumerate_stable_matchings(
    inst: &SmInstance,
    budget: &EnumerationBudget,
) -> Result<Vec<Matching>, OracleBudgetExceeded> {
    let n = inst.n();
    let factorial: f64 = (1..=n).map(|i| i as f64).product();
    check_size("matching scan", factorial, budget)?;
    let start = Instant::now();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        let matching = Matching::new(p.to_vec());
        if is_stable(inst, &matching) {
            out.push(matching);
        }
    });
    check_time(start, budget)?;
    Ok(out)
}

fn permute(perm: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        visit(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, visit);
        perm.swap(k, i);
    }
}

/// Exact pathwidth by the vertex-separation definition: a bottom-up table
/// over all vertex subsets, where `f(S)` is the best achievable maximum
/// boundary over orderings that place `S` first.
pub fn exact_pathwidth(g: &Graph, budget: &EnumerationBudget) -> Result<usize, OracleBudgetExceeded> {
    let n = g.n();
    if n == 0 {
        return Ok(0);
    }
    check_size("pathwidth table", 2f64.powi(n as i32), budget)?;
    if n > 25 {
        return Err(OracleBudgetExceeded(format!(
            "pathwidth oracle supports at most 25 vertices, graph has {n}"
        )));
    }
    let masks: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    let full: u32 = (1u32 << n) - 1;
    let boundary = |s: u32| -> u8 {
        let outside = full & !s;
        (0..n)
            .filter(|&v| s >> v & 1 == 1 && masks[v] & outside != 0)
            .count() as u8
    };
    let mut f = vec![u8::MAX; 1 << n];
    f[0] = 0;
    for s in 1u32..=full {
        let best = (0..n)
            .filter(|&v| s >> v & 1 == 1)
            .map(|v| f[(s & !(1 << v)) as usize])
            .min()
            .unwrap();
        f[s as usize] = best.max(boundary(s));
    }
    Ok(f[full as usize] as usize)
}
