use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;

use super::partition::{lr_coefficient, partitions_of, Partition};
use super::CatalogError;
use crate::exact_rings::{GradingSpec, LaurentPoly};
use crate::graded_qh::{BasisElement, PresentationData, QhElement, RingPresentation};

/// Default cap on the basis rank of generated rings.
pub const DEFAULT_SIZE_BOUND: usize = 64;

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Name of the Schubert class of `lambda`.
pub fn schubert_name(lambda: &Partition) -> String {
    if lambda.is_empty() {
        "1".into()
    } else {
        let parts: Vec<String> = lambda.parts().iter().map(|p| p.to_string()).collect();
        format!("s[{}]", parts.join(","))
    }
}

/// Reduces a partition with at most `k` rows to the `k x (n-k)` box by
/// removing `n`-rim hooks. Returns `(sign, q power, reduced)`, or `None`
/// when the class vanishes in the quantum ring.
///
/// Works with beta-numbers `l_j = nu_j + k - j`: removing an `n`-rim hook
/// subtracts `n` from one beta-number, and the hook's sign
/// `(-1)^(k - height)` equals `(-1)^(k-1)` times the sign of the permutation
/// that re-sorts the beta-numbers.
pub fn rim_hook_reduce(nu: &Partition, k: usize, n: usize) -> Option<(i64, u32, Partition)> {
    if nu.len() > k {
        return None;
    }
    let mut beta: Vec<i64> = (0..k).map(|j| (nu.part(j) + k - 1 - j) as i64).collect();
    let n = n as i64;
    let mut sign = 1i64;
    let mut power = 0u32;
    while beta[0] >= n {
        let reduced = beta[0] - n;
        if beta.contains(&reduced) {
            return None;
        }
        // Insert the reduced value back in decreasing order; each beta-number
        // it passes is one transposition.
        let pos = beta.iter().rposition(|&b| b > reduced).unwrap_or(0);
        beta.remove(0);
        beta.insert(pos, reduced);
        let passed = pos as i64;
        if (k as i64 - 1 + passed) % 2 != 0 {
            sign = -sign;
        }
        power += 1;
    }
    let parts: Vec<usize> = (0..k).map(|j| (beta[j] - (k - 1 - j) as i64) as usize).collect();
    Some((sign, power, Partition::new(&parts).expect("sorted beta-numbers give a partition")))
}

/// Classical Littlewood-Richardson expansion restricted to partitions with at
/// most `rows` rows.
fn classical_expansion(lambda: &Partition, mu: &Partition, rows: usize) -> Vec<(Partition, u64)> {
    let size = lambda.size() + mu.size();
    let cols = lambda.part(0) + mu.part(0);
    partitions_of(size, rows, cols)
        .into_iter()
        .filter_map(|nu| {
            let c = lr_coefficient(lambda, mu, &nu);
            (c > 0).then_some((nu, c))
        })
        .collect()
}

/// Quantum product `sigma_lambda * sigma_mu` in `QH(Gr(k, n))` as signed
/// coefficients of `q^d sigma_nu`.
pub fn quantum_schubert_product(
    lambda: &Partition,
    mu: &Partition,
    k: usize,
    n: usize,
) -> Result<BTreeMap<(u32, Partition), i64>, CatalogError> {
    let mut out: BTreeMap<(u32, Partition), i64> = BTreeMap::new();
    for (nu, c) in classical_expansion(lambda, mu, k) {
        if let Some((sign, d, red)) = rim_hook_reduce(&nu, k, n) {
            *out.entry((d, red)).or_default() += sign * c as i64;
        }
    }
    out.retain(|_, c| *c != 0);
    if let Some(((d, nu), c)) = out.iter().find(|(_, c)| **c < 0) {
        return Err(CatalogError::NegativeCoefficient(format!(
            "{} * {} has coefficient {c} on q^{d} {}",
            schubert_name(lambda),
            schubert_name(mu),
            schubert_name(nu)
        )));
    }
    Ok(out)
}

/// Quantum cohomology of the Grassmannian of `k`-planes in `C^n` in the
/// Schubert basis, with `deg q = 2n`.
pub fn build_grassmannian(k: usize, n: usize) -> Result<RingPresentation<LaurentPoly>, CatalogError> {
    build_grassmannian_bounded(k, n, DEFAULT_SIZE_BOUND)
}

pub fn build_grassmannian_bounded(
    k: usize,
    n: usize,
    bound: usize,
) -> Result<RingPresentation<LaurentPoly>, CatalogError> {
    if k == 0 || k >= n {
        return Err(CatalogError::InvalidParameters(format!("need 1 <= k < n, got k = {k}, n = {n}")));
    }
    let rank = binomial(n, k);
    if rank > bound as u128 {
        return Err(CatalogError::SizeBound { rank, bound });
    }
    let m = n - k;
    let parts = Partition::all_in_box(k, m);
    let rank = parts.len();
    let index: HashMap<&Partition, usize> = parts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let basis: Vec<BasisElement> =
        parts.iter().map(|p| BasisElement::new(schubert_name(p), 2 * p.size() as i64)).collect();

    let mut pairing = vec![vec![0i64; rank]; rank];
    for (i, p) in parts.iter().enumerate() {
        pairing[i][index[&p.complement(k, m)]] = 1;
    }

    let pairs: Vec<(usize, usize)> = (0..rank).flat_map(|i| (i..rank).map(move |j| (i, j))).collect();
    let computed: Vec<((usize, usize), BTreeMap<(u32, Partition), i64>)> = pairs
        .par_iter()
        .map(|&(i, j)| quantum_schubert_product(&parts[i], &parts[j], k, n).map(|r| ((i, j), r)))
        .collect::<Result<_, _>>()?;

    let mut products = vec![vec![QhElement::zero(rank); rank]; rank];
    let mut cup = vec![vec![vec![BigInt::from(0); rank]; rank]; rank];
    for ((i, j), terms) in computed {
        let mut coords = vec![LaurentPoly::zero(); rank];
        for ((d, nu), c) in terms {
            let t = index[&nu];
            coords[t] = &coords[t] + &LaurentPoly::monomial(c, d as i64);
            if d == 0 {
                cup[i][j][t] = BigInt::from(c);
                cup[j][i][t] = BigInt::from(c);
            }
        }
        let e = QhElement::from_coords(coords);
        products[i][j] = e.clone();
        products[j][i] = e;
    }

    let sigma1 = Partition::new(&[1]).expect("valid partition");
    let mut omega = QhElement::zero(rank);
    let mut c1 = QhElement::zero(rank);
    if let Some(&i) = index.get(&sigma1) {
        omega = QhElement::basis(rank, i);
        c1 = omega.scale(&LaurentPoly::constant(n as i64));
    }
    let classes = BTreeMap::from([("omega".to_string(), omega), ("c1".to_string(), c1)]);

    RingPresentation::new(PresentationData {
        name: format!("Gr({k},{n})"),
        basis,
        grading: GradingSpec::new(n as i64).expect("n >= 2"),
        dimension: k * m,
        pairing,
        products,
        cup: Some(cup),
        classes,
    })
    .map_err(CatalogError::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts).unwrap()
    }

    #[test]
    fn rim_hook_on_gr24() {
        // (3,1) has an outer 4-hook of height 2; removing it leaves the
        // empty partition with sign +1.
        assert_eq!(rim_hook_reduce(&p(&[3, 1]), 2, 4), Some((1, 1, p(&[]))));
        // (4) has a horizontal 4-hook of height 1: sign (-1)^(2-1).
        assert_eq!(rim_hook_reduce(&p(&[4]), 2, 4), Some((-1, 1, p(&[]))));
        // (3) in Gr(2,4) has no 4-rim hook.
        assert_eq!(rim_hook_reduce(&p(&[3]), 2, 4), None);
        assert_eq!(rim_hook_reduce(&p(&[2, 1]), 2, 4), Some((1, 0, p(&[2, 1]))));
    }

    #[test]
    fn gr24_product() {
        let prod = quantum_schubert_product(&p(&[1]), &p(&[2, 1]), 2, 4).unwrap();
        let expected = BTreeMap::from([((0, p(&[2, 2])), 1), ((1, p(&[])), 1)]);
        assert_eq!(prod, expected);
    }

    #[test]
    fn cp1_is_gr12() {
        let r = build_grassmannian(1, 2).unwrap();
        let s = r.basis_element("s[1]").unwrap();
        let sq = r.quantum_mul(&s, &s).unwrap();
        assert_eq!(sq, r.one().scale(&LaurentPoly::q()));
    }

    #[test]
    fn size_bound() {
        assert!(matches!(build_grassmannian(4, 9), Err(CatalogError::SizeBound { .. })));
        assert!(build_grassmannian_bounded(2, 6, 15).is_ok());
    }
}
