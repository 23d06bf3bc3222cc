use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::exact_rings::{Coefficient, GradingSpec, LaurentPoly, NovikovElem, TExp};
use crate::graded_qh::{BasisElement, PresentationData, QhElement, RingPresentation};

/// `QH(CP^n)` with basis `1, h, ..., h^n`, `h * h^n = q` and `deg q = 2(n+1)`.
pub fn build_cpn(n: usize) -> RingPresentation<LaurentPoly> {
    assert!(n >= 1, "CP^n needs n >= 1");
    let rank = n + 1;
    let name = |i: usize| match i {
        0 => "1".to_string(),
        1 => "h".to_string(),
        _ => format!("h^{i}"),
    };
    let basis = (0..rank).map(|i| BasisElement::new(name(i), 2 * i as i64)).collect();
    let mut pairing = vec![vec![0i64; rank]; rank];
    let mut products = vec![vec![QhElement::zero(rank); rank]; rank];
    let mut cup = vec![vec![vec![BigInt::from(0); rank]; rank]; rank];
    for i in 0..rank {
        pairing[i][n - i] = 1;
        for j in 0..rank {
            let s = i + j;
            let mut coords = vec![LaurentPoly::zero(); rank];
            if s <= n {
                coords[s] = LaurentPoly::one();
                cup[i][j][s] = BigInt::from(1);
            } else {
                coords[s - rank] = LaurentPoly::q();
            }
            products[i][j] = QhElement::from_coords(coords);
        }
    }
    let h = QhElement::basis(rank, 1);
    let classes = BTreeMap::from([
        ("omega".to_string(), h.clone()),
        ("c1".to_string(), h.scale(&LaurentPoly::constant(rank as i64))),
    ]);
    RingPresentation::new(PresentationData {
        name: format!("CP^{n}"),
        basis,
        grading: GradingSpec::new(rank as i64).expect("positive"),
        dimension: n,
        pairing,
        products,
        cup: Some(cup),
        classes,
    })
    .expect("CP^n presentation is well formed")
}

fn t(s: i64) -> TExp {
    TExp::from_integer(s)
}

/// `QH(CP^1 x CP^1)` over the Novikov ring for the non-monotone form with
/// `[omega] = 2 alpha + beta`: `alpha * alpha = q T^2`, `beta * beta = q T`.
pub fn build_p1xp1_paper() -> RingPresentation<NovikovElem> {
    let (one, a, b, ab) = (0, 1, 2, 3);
    let rank = 4;
    let mono = |c: i64, q: i64, s: i64| NovikovElem::monomial(c, q, t(s));
    let elem = |entries: &[(usize, NovikovElem)]| {
        let mut coords = vec![NovikovElem::zero(); rank];
        for (i, c) in entries {
            coords[*i] = c.clone();
        }
        QhElement::from_coords(coords)
    };
    let table: [(usize, usize, QhElement<NovikovElem>); 10] = [
        (one, one, elem(&[(one, mono(1, 0, 0))])),
        (one, a, elem(&[(a, mono(1, 0, 0))])),
        (one, b, elem(&[(b, mono(1, 0, 0))])),
        (one, ab, elem(&[(ab, mono(1, 0, 0))])),
        (a, a, elem(&[(one, mono(1, 1, 2))])),
        (b, b, elem(&[(one, mono(1, 1, 1))])),
        (a, b, elem(&[(ab, mono(1, 0, 0))])),
        (a, ab, elem(&[(b, mono(1, 1, 2))])),
        (b, ab, elem(&[(a, mono(1, 1, 1))])),
        (ab, ab, elem(&[(one, mono(1, 2, 3))])),
    ];
    let mut products = vec![vec![QhElement::zero(rank); rank]; rank];
    let mut cup = vec![vec![vec![BigInt::from(0); rank]; rank]; rank];
    for (i, j, e) in table {
        for k in 0..rank {
            let c = e.coord(k).constant_term();
            cup[i][j][k] = c.clone();
            cup[j][i][k] = c;
        }
        products[i][j] = e.clone();
        products[j][i] = e;
    }
    let mut pairing = vec![vec![0i64; rank]; rank];
    pairing[one][ab] = 1;
    pairing[ab][one] = 1;
    pairing[a][b] = 1;
    pairing[b][a] = 1;
    let int = |c: i64| NovikovElem::from_int(BigInt::from(c));
    let classes = BTreeMap::from([
        ("omega".to_string(), elem(&[(a, int(2)), (b, int(1))])),
        ("c1".to_string(), elem(&[(a, int(2)), (b, int(2))])),
        // Seidel element of the pencil, [omega] T + beta T^2.
        ("seidel".to_string(), elem(&[(a, mono(2, 0, 1)), (b, &mono(1, 0, 1) + &mono(1, 0, 2))])),
    ]);
    RingPresentation::new(PresentationData {
        name: "CP1xCP1 (omega = 2 alpha + beta)".into(),
        basis: vec![
            BasisElement::new("1", 0),
            BasisElement::new("alpha", 2),
            BasisElement::new("beta", 2),
            BasisElement::new("ab", 4),
        ],
        grading: GradingSpec::new(2).expect("positive"),
        dimension: 2,
        pairing,
        products,
        cup: Some(cup),
        classes,
    })
    .expect("CP1xCP1 presentation is well formed")
}

/// The monotone `CP^1 x CP^1` over `Z[q, q^-1]`, obtained by setting `T = 1`;
/// the distinguished class is `alpha + beta`.
pub fn build_p1xp1_monotone() -> RingPresentation<LaurentPoly> {
    let paper = build_p1xp1_paper();
    let mut ring = paper.map_coefficients("CP1xCP1 (monotone, omega = alpha + beta)", |c| {
        c.specialize_t_to_one().expect("exact structure constants")
    });
    let omega = ring.element_from_ints(&[("alpha", 1), ("beta", 1)]).expect("basis names");
    ring.set_class("omega", omega);
    ring
}
