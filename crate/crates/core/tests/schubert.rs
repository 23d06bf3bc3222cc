use std::collections::BTreeMap;

use qhsd_core::catalog::{build_cpn, build_grassmannian, lr_coefficient, schubert_name, Partition};
use qhsd_core::exact_rings::LaurentPoly;
use qhsd_core::graded_qh::{QhElement, RingPresentation};

type Poly = BTreeMap<Vec<u32>, i64>;

/// Schur polynomial in `vars` variables as a sum over semistandard tableaux.
fn schur(shape: &[usize], vars: usize) -> Poly {
    let cells: Vec<(usize, usize)> = shape.iter().enumerate().flat_map(|(r, &len)| (0..len).map(move |c| (r, c))).collect();
    let mut filling = vec![vec![0u32; shape.first().copied().unwrap_or(0)]; shape.len()];
    let mut out = Poly::new();
    fill(&cells, 0, &mut filling, vars as u32, &mut out);
    out
}

fn fill(cells: &[(usize, usize)], at: usize, t: &mut [Vec<u32>], vars: u32, out: &mut Poly) {
    if at == cells.len() {
        let mut exp = vec![0u32; vars as usize];
        for (r, c) in cells {
            exp[t[*r][*c] as usize - 1] += 1;
        }
        *out.entry(exp).or_default() += 1;
        return;
    }
    let (r, c) = cells[at];
    let lo_row = if c > 0 { t[r][c - 1] } else { 1 };
    let lo_col = if r > 0 { t[r - 1][c] + 1 } else { 1 };
    for v in lo_row.max(lo_col)..=vars {
        t[r][c] = v;
        fill(cells, at + 1, t, vars, out);
    }
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_default() += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Expands a symmetric polynomial in Schur polynomials by peeling off the
/// lexicographically largest monomial.
fn schur_expand(mut p: Poly, vars: usize) -> BTreeMap<Vec<usize>, i64> {
    let mut out = BTreeMap::new();
    while let Some((lead, &c)) = p.iter().next_back() {
        let shape: Vec<usize> = lead.iter().map(|&e| e as usize).filter(|&e| e > 0).collect();
        for (e, sc) in schur(&shape, vars) {
            *p.entry(e).or_default() -= c * sc;
        }
        p.retain(|_, v| *v != 0);
        out.insert(shape, c);
    }
    out
}

fn box_partitions(k: usize, n: usize) -> Vec<Partition> {
    Partition::all_in_box(k, n - k)
}

fn coefficient(ring: &RingPresentation<LaurentPoly>, a: &QhElement<LaurentPoly>, name: &str, q: i64) -> i64 {
    let c = a.coord(ring.index_of(name).unwrap()).coeff(q);
    i64::try_from(c).unwrap()
}

#[test]
fn lr_coefficients_match_schur_expansion() {
    let shapes: Vec<Partition> = (0..=6).flat_map(|s| qhsd_core::catalog::partitions_of(s, 3, 4)).collect();
    let mut compared = 0;
    for l in &shapes {
        for m in &shapes {
            if l.size() + m.size() > 7 {
                continue;
            }
            let expansion = schur_expand(poly_mul(&schur(l.parts(), 3), &schur(m.parts(), 3)), 3);
            for (nu, c) in &expansion {
                assert_eq!(lr_coefficient(l, m, &Partition::new(nu).unwrap()) as i64, *c, "{l:?} {m:?} {nu:?}");
                compared += 1;
            }
            // and nothing outside the expansion
            for nu in qhsd_core::catalog::partitions_of(l.size() + m.size(), 3, 8) {
                if !expansion.contains_key(nu.parts()) {
                    assert_eq!(lr_coefficient(l, m, &nu), 0);
                }
            }
        }
    }
    assert!(compared > 300);
}

#[test]
fn classical_part_of_quantum_product_is_schur_calculus() {
    for n in 4..=5 {
        let k = 2;
        let ring = build_grassmannian(k, n).unwrap();
        let parts = box_partitions(k, n);
        for l in &parts {
            for m in &parts {
                let prod = ring.product_unchecked(&ring.class(&schubert_name(l)).unwrap(), &ring.class(&schubert_name(m)).unwrap());
                let expansion = schur_expand(poly_mul(&schur(l.parts(), k), &schur(m.parts(), k)), k);
                for nu in &parts {
                    let want = expansion.get(nu.parts()).copied().unwrap_or(0);
                    assert_eq!(coefficient(&ring, &prod, &schubert_name(nu), 0), want, "Gr({k},{n}) {l:?} * {m:?} at {nu:?}");
                }
            }
        }
    }
}

#[test]
fn quantum_pieri_for_the_hyperplane_class() {
    for (k, n) in [(2, 4), (2, 5), (2, 6), (3, 6), (2, 7), (3, 5)] {
        let ring = build_grassmannian(k, n).unwrap();
        let s1 = ring.class("s[1]").unwrap();
        for l in box_partitions(k, n) {
            let prod = ring.product_unchecked(&s1, &ring.class(&schubert_name(&l)).unwrap());
            let mut want: BTreeMap<(String, i64), i64> = BTreeMap::new();
            for i in 0..k {
                let mut p: Vec<usize> = (0..k).map(|j| l.part(j)).collect();
                p[i] += 1;
                if let Some(mu) = Partition::new(&p) {
                    if mu.fits_box(k, n - k) {
                        want.insert((schubert_name(&mu), 0), 1);
                    }
                }
            }
            if l.part(0) == n - k && l.part(k - 1) >= 1 {
                let p: Vec<usize> = (1..k).map(|j| l.part(j) - 1).collect();
                want.insert((schubert_name(&Partition::new(&p).unwrap()), 1), 1);
            }
            let mut got = BTreeMap::new();
            for (i, b) in ring.basis().iter().enumerate() {
                for (e, c) in prod.coord(i).terms() {
                    got.insert((b.name.clone(), e), i64::try_from(c.clone()).unwrap());
                }
            }
            assert_eq!(got, want, "Gr({k},{n}) s1 * {l:?}");
        }
    }
}

fn transpose(p: &Partition) -> Partition {
    let cols = p.part(0);
    let t: Vec<usize> = (0..cols).map(|c| p.parts().iter().filter(|&&r| r > c).count()).collect();
    Partition::new(&t).unwrap()
}

#[test]
fn grassmannian_duality_preserves_quantum_products() {
    for (k, n) in [(2, 5), (2, 6), (1, 4)] {
        let a = build_grassmannian(k, n).unwrap();
        let b = build_grassmannian(n - k, n).unwrap();
        let parts = box_partitions(k, n);
        for l in &parts {
            for m in &parts {
                let pa = a.product_unchecked(&a.class(&schubert_name(l)).unwrap(), &a.class(&schubert_name(m)).unwrap());
                let pb = b.product_unchecked(
                    &b.class(&schubert_name(&transpose(l))).unwrap(),
                    &b.class(&schubert_name(&transpose(m))).unwrap(),
                );
                for nu in &parts {
                    let ca = pa.coord(a.index_of(&schubert_name(nu)).unwrap());
                    let cb = pb.coord(b.index_of(&schubert_name(&transpose(nu))).unwrap());
                    assert_eq!(ca, cb, "Gr({k},{n}) {l:?} * {m:?} at {nu:?}");
                }
            }
        }
    }
}

#[test]
fn pairing_is_the_top_coefficient_of_the_classical_product() {
    for (k, n) in [(2, 4), (2, 5), (3, 6)] {
        let ring = build_grassmannian(k, n).unwrap();
        let parts = box_partitions(k, n);
        let top: Vec<usize> = vec![n - k; k];
        for (i, l) in parts.iter().enumerate() {
            for (j, m) in parts.iter().enumerate() {
                let expansion = schur_expand(poly_mul(&schur(l.parts(), k), &schur(m.parts(), k)), k);
                let want = expansion.get(&top).copied().unwrap_or(0);
                assert_eq!(ring.pairing()[i][j], want, "Gr({k},{n}) {l:?} . {m:?}");
            }
        }
    }
}

#[test]
fn projective_space_is_a_grassmannian_of_lines() {
    for n in 1..=6 {
        let cp = build_cpn(n);
        let gr = build_grassmannian(1, n + 1).unwrap();
        let rename = |i: usize| match i {
            0 => "1".to_string(),
            i => format!("s[{i}]"),
        };
        assert_eq!(cp.grading(), gr.grading());
        for i in 0..=n {
            for j in 0..=n {
                let a = cp.product_unchecked(&QhElement::basis(n + 1, i), &QhElement::basis(n + 1, j));
                let b = gr.product_unchecked(&gr.class(&rename(i)).unwrap(), &gr.class(&rename(j)).unwrap());
                for r in 0..=n {
                    assert_eq!(a.coord(r), b.coord(gr.index_of(&rename(r)).unwrap()), "CP^{n}: {i} * {j}");
                }
            }
        }
    }
}

#[test]
fn quantum_structure_constants_are_nonnegative() {
    for (k, n) in [(2, 4), (2, 5), (2, 6), (3, 6), (2, 7)] {
        let ring = build_grassmannian(k, n).unwrap();
        for i in 0..ring.rank() {
            for j in 0..ring.rank() {
                for c in ring.structure_constant(i, j).coords() {
                    assert!(c.terms().all(|(_, v)| v.sign() != num_bigint::Sign::Minus));
                }
            }
        }
    }
}
