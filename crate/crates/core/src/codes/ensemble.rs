//! LDPC ensembles sampled from the configuration (socket permutation) model.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{LinearCode, SparseParityCheck};
use crate::error::{Error, Result};

/// Full reshuffles before giving up on a simple (multi-edge free) graph.
const MAX_PERMUTATION_ATTEMPTS: usize = 200;

/// Edge-perspective degree distribution pair `(λ, ρ)`.
///
/// Each entry is `(degree, fraction of edges attached to nodes of that degree)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeDistribution {
    lambda: Vec<(usize, f64)>,
    rho: Vec<(usize, f64)>,
}

impl DegreeDistribution {
    pub fn new(lambda: Vec<(usize, f64)>, rho: Vec<(usize, f64)>) -> Result<Self> {
        validate_side("lambda", &lambda)?;
        validate_side("rho", &rho)?;
        let dd = DegreeDistribution { lambda, rho };
        let rate = dd.design_rate();
        if !(0.0..=1.0).contains(&rate) {
            return Err(Error::IncompatibleEnsemble(format!(
                "design rate {rate} outside [0, 1]"
            )));
        }
        Ok(dd)
    }

    /// `(dv, dc)`-regular: λ(x) = x^(dv-1), ρ(x) = x^(dc-1).
    pub fn regular(dv: usize, dc: usize) -> Result<Self> {
        Self::new(vec![(dv, 1.0)], vec![(dc, 1.0)])
    }

    pub fn lambda(&self) -> &[(usize, f64)] {
        &self.lambda
    }

    pub fn rho(&self) -> &[(usize, f64)] {
        &self.rho
    }

    /// λ(x) = Σ λ_i x^(i-1)
    pub fn lambda_poly(&self, x: f64) -> f64 {
        poly(&self.lambda, x)
    }

    /// ρ(x) = Σ ρ_i x^(i-1)
    pub fn rho_poly(&self, x: f64) -> f64 {
        poly(&self.rho, x)
    }

    /// 1 - (Σ ρ_i / i) / (Σ λ_i / i)
    pub fn design_rate(&self) -> f64 {
        1.0 - inverse_mean(&self.rho) / inverse_mean(&self.lambda)
    }

    pub fn is_regular(&self) -> Option<(usize, usize)> {
        match (self.lambda.as_slice(), self.rho.as_slice()) {
            ([(dv, _)], [(dc, _)]) => Some((*dv, *dc)),
            _ => None,
        }
    }
}

fn validate_side(name: &str, side: &[(usize, f64)]) -> Result<()> {
    if side.is_empty() {
        return Err(Error::IncompatibleEnsemble(format!("{name} has no terms")));
    }
    for &(deg, frac) in side {
        if deg == 0 {
            return Err(Error::IncompatibleEnsemble(format!("{name} has a degree-0 term")));
        }
        if !(frac >= 0.0 && frac.is_finite()) {
            return Err(Error::IncompatibleEnsemble(format!(
                "{name} coefficient {frac} for degree {deg} is negative or not finite"
            )));
        }
    }
    let total: f64 = side.iter().map(|t| t.1).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::IncompatibleEnsemble(format!(
            "{name} coefficients sum to {total}, not 1"
        )));
    }
    Ok(())
}

fn poly(terms: &[(usize, f64)], x: f64) -> f64 {
    terms.iter().map(|&(d, c)| c * x.powi(d as i32 - 1)).sum()
}

fn inverse_mean(terms: &[(usize, f64)]) -> f64 {
    terms.iter().map(|&(d, c)| c / d as f64).sum()
}

/// Samples a `(dv, dc)`-regular LDPC code of length `n`.
///
/// Every column of the returned check matrix has weight `dv`, every row weight
/// `dc`, and no variable meets a check twice. Output is a deterministic
/// function of `(n, dv, dc, seed)`.
pub fn regular_ldpc(n: usize, dv: usize, dc: usize, seed: u64) -> Result<LinearCode> {
    if dv == 0 || dc == 0 || dv >= dc {
        return Err(Error::IncompatibleEnsemble(format!(
            "need 1 <= dv < dc, got dv = {dv}, dc = {dc}"
        )));
    }
    if n == 0 || !(n * dv).is_multiple_of(dc) {
        return Err(Error::IncompatibleEnsemble(format!(
            "n * dv = {} is not a positive multiple of dc = {dc}",
            n * dv
        )));
    }
    if dc > n {
        return Err(Error::IncompatibleEnsemble(format!(
            "check degree {dc} exceeds block length {n}"
        )));
    }
    let m = n * dv / dc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = sample_configuration(&vec![dv; n], &vec![dc; m], &mut rng)?;
    let sparse = SparseParityCheck::from_checks(n, checks)?;
    Ok(LinearCode::from_sparse(sparse)?.with_ensemble(DegreeDistribution::regular(dv, dc)?))
}

/// Samples an LDPC code of length `n` whose node degrees follow `dd`.
///
/// Node counts are rounded from the edge-perspective fractions by largest
/// remainder; leftover check sockets are spread over the lowest-degree checks,
/// so the realized check profile can differ slightly from ρ at small `n`.
pub fn ldpc_from_degree_distribution(n: usize, dd: &DegreeDistribution, seed: u64) -> Result<LinearCode> {
    if n == 0 {
        return Err(Error::invalid("block length must be positive"));
    }
    let var_degrees = node_degrees(dd.lambda(), n);
    let edges: usize = var_degrees.iter().sum();
    let m = ((edges as f64) * inverse_mean(dd.rho())).round().max(1.0) as usize;
    let mut check_degrees = node_degrees(dd.rho(), m);
    let mut total: usize = check_degrees.iter().sum();
    // Balance socket counts.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&c| check_degrees[c]);
    let mut i = 0;
    while total < edges {
        check_degrees[order[i % m]] += 1;
        total += 1;
        i += 1;
    }
    order.reverse();
    let mut i = 0;
    while total > edges {
        let c = order[i % m];
        if check_degrees[c] > 1 {
            check_degrees[c] -= 1;
            total -= 1;
        }
        i += 1;
    }
    if check_degrees.iter().any(|&d| d > n) {
        return Err(Error::IncompatibleEnsemble(format!(
            "a check degree exceeds block length {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = sample_configuration(&var_degrees, &check_degrees, &mut rng)?;
    let sparse = SparseParityCheck::from_checks(n, checks)?;
    Ok(LinearCode::from_sparse(sparse)?.with_ensemble(dd.clone()))
}

/// Node degree list of length `count` matching edge fractions `terms`.
fn node_degrees(terms: &[(usize, f64)], count: usize) -> Vec<usize> {
    let norm = inverse_mean(terms);
    let shares: Vec<f64> = terms
        .iter()
        .map(|&(d, c)| count as f64 * (c / d as f64) / norm)
        .collect();
    let mut counts: Vec<usize> = shares.iter().map(|s| s.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut by_remainder: Vec<usize> = (0..terms.len()).collect();
    by_remainder.sort_by(|&a, &b| {
        let ra = shares[a] - shares[a].floor();
        let rb = shares[b] - shares[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &t in by_remainder.iter().cycle().take(count.saturating_sub(assigned)) {
        counts[t] += 1;
    }
    terms
        .iter()
        .zip(&counts)
        .flat_map(|(&(d, _), &k)| std::iter::repeat_n(d, k))
        .collect()
}

/// Pairs variable sockets with a random permutation of check sockets, then
/// removes parallel edges by random socket swaps. Returns check supports.
fn sample_configuration(
    var_degrees: &[usize],
    check_degrees: &[usize],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<usize>>> {
    let edge_var: Vec<usize> = var_degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v, d))
        .collect();
    let base_check: Vec<usize> = check_degrees
        .iter()
        .enumerate()
        .flat_map(|(c, &d)| std::iter::repeat_n(c, d))
        .collect();
    assert_eq!(edge_var.len(), base_check.len(), "socket counts must match");
    let edges = edge_var.len();
    let mut multiplicity: HashMap<(usize, usize), u32> = HashMap::with_capacity(edges);

    for _ in 0..MAX_PERMUTATION_ATTEMPTS {
        let mut edge_check = base_check.clone();
        edge_check.shuffle(rng);

        multiplicity.clear();
        let mut conflicts = Vec::new();
        for e in 0..edges {
            let count = multiplicity.entry((edge_var[e], edge_check[e])).or_insert(0);
            *count += 1;
            if *count > 1 {
                conflicts.push(e);
            }
        }

        let mut budget = 50 * edges.max(1);
        while let Some(e) = conflicts.pop() {
            while budget > 0 {
                budget -= 1;
                let f = rng.random_range(0..edges);
                let (ve, ce) = (edge_var[e], edge_check[e]);
                let (vf, cf) = (edge_var[f], edge_check[f]);
                if f == e || ce == cf {
                    continue;
                }
                let free = |pair| multiplicity.get(&pair).copied().unwrap_or(0) == 0;
                if !free((ve, cf)) || !free((vf, ce)) {
                    continue;
                }
                for old in [(ve, ce), (vf, cf)] {
                    if let Some(count) = multiplicity.get_mut(&old) {
                        *count -= 1;
                    }
                }
                *multiplicity.entry((ve, cf)).or_insert(0) += 1;
                *multiplicity.entry((vf, ce)).or_insert(0) += 1;
                edge_check.swap(e, f);
                break;
            }
            if budget == 0 {
                break;
            }
        }
        if multiplicity.values().any(|&count| count > 1) {
            continue;
        }
        let mut checks = vec![Vec::new(); check_degrees.len()];
        for e in 0..edges {
            checks[edge_check[e]].push(edge_var[e]);
        }
        for c in &mut checks {
            c.sort_unstable();
        }
        return Ok(checks);
    }
    Err(Error::MultiEdgeRetriesExhausted {
        attempts: MAX_PERMUTATION_ATTEMPTS,
    })
}
