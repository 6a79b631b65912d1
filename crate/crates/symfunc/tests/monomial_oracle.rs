//! Cross-checks against brute-force symmetric polynomials in explicit variables.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use schurfn::{kronecker, outer, partitions, plethysm, skew, Partition, SchurExpr};

const VARS: usize = 7;

type Poly = BTreeMap<Vec<u32>, i64>;

fn add_into(acc: &mut Poly, p: &Poly, scale: i64) {
    for (m, c) in p {
        let e = acc.entry(m.clone()).or_insert(0);
        *e += c * scale;
        if *e == 0 {
            acc.remove(m);
        }
    }
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            *out.entry(m).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Semistandard tableaux of shape `shape` with entries `0..n`, as flat row-major fillings.
fn ssyt(shape: &[u32], n: usize) -> Vec<Vec<usize>> {
    let cells: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c)))
        .collect();
    let mut out = Vec::new();
    let mut fill = vec![0usize; cells.len()];
    fn go(
        k: usize,
        cells: &[(usize, usize)],
        shape: &[u32],
        n: usize,
        fill: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == cells.len() {
            out.push(fill.clone());
            return;
        }
        let (r, c) = cells[k];
        let offset = |row: usize| -> usize { shape[..row].iter().map(|&x| x as usize).sum() };
        let mut lo = 0;
        if c > 0 {
            lo = lo.max(fill[k - 1]);
        }
        if r > 0 {
            lo = lo.max(fill[offset(r - 1) + c] + 1);
        }
        for v in lo..n {
            fill[k] = v;
            go(k + 1, cells, shape, n, fill, out);
        }
    }
    go(0, &cells, shape, n, &mut fill, &mut out);
    out
}

/// `s_λ` evaluated on a multiset of monomials (each a variable of the outer polynomial).
fn schur_on(shape: &Partition, monos: &[Vec<u32>]) -> Poly {
    let mut out = Poly::new();
    if shape.len() > monos.len() {
        return out;
    }
    for t in ssyt(shape.parts(), monos.len()) {
        let mut m = vec![0u32; VARS];
        for &v in &t {
            for (x, y) in m.iter_mut().zip(&monos[v]) {
                *x += y;
            }
        }
        *out.entry(m).or_insert(0) += 1;
    }
    out
}

fn variables() -> Vec<Vec<u32>> {
    (0..VARS)
        .map(|i| {
            let mut m = vec![0; VARS];
            m[i] = 1;
            m
        })
        .collect()
}

fn schur_poly(p: &Partition) -> Poly {
    schur_on(p, &variables())
}

fn expr_poly(e: &SchurExpr) -> Poly {
    let mut out = Poly::new();
    for (p, c) in e.terms() {
        let c: i64 = c.try_into().unwrap();
        add_into(&mut out, &schur_poly(p), c);
    }
    out
}

/// Peels off leading dominant monomials to write a symmetric polynomial in Schur functions.
fn to_schur(mut poly: Poly) -> SchurExpr {
    let mut out = SchurExpr::zero();
    while let Some((m, &c)) = poly.iter().next_back() {
        let lam = Partition::new(m.clone()).expect("leading monomial is a partition");
        out.add_term(lam.clone(), c);
        add_into(&mut poly, &schur_poly(&lam), -c);
    }
    out
}

fn partitions_upto(n: u32) -> Vec<Partition> {
    (0..=n).flat_map(partitions).collect()
}

#[test]
fn outer_matches_monomial_products() {
    for a in partitions_upto(4) {
        for b in partitions_upto(6 - a.weight()) {
            let got = outer(&a.clone().into(), &b.clone().into());
            let want = to_schur(mul(&schur_poly(&a), &schur_poly(&b)));
            assert_eq!(got, want, "{a} · {b}");
        }
    }
}

#[test]
fn pieri_example() {
    let got = outer(&SchurExpr::from_parts(&[2, 1]), &SchurExpr::from_parts(&[1]));
    assert_eq!(got, "{3,1} + {2,2} + {2,1,1}".parse().unwrap());
}

#[test]
fn skew_is_adjoint_to_outer() {
    // <s_λ/s_μ, s_ν> = <s_λ, s_μ s_ν>
    for lam in partitions_upto(6) {
        for mu in partitions_upto(lam.weight()) {
            let sk = skew(&lam.clone().into(), &mu.clone().into());
            for nu in partitions(lam.weight() - mu.weight()) {
                let prod = outer(&mu.clone().into(), &nu.clone().into());
                assert_eq!(sk.coefficient(&nu), prod.coefficient(&lam), "{lam}/{mu} at {nu}");
            }
        }
    }
    let got = skew(&SchurExpr::from_parts(&[2, 1]), &SchurExpr::from_parts(&[1]));
    assert_eq!(got, "{2} + {1,1}".parse().unwrap());
}

#[test]
fn plethysm_matches_monomial_substitution() {
    for inner in partitions_upto(3).into_iter().filter(|p| !p.is_empty()) {
        for outer_shape in partitions_upto(6 / inner.weight()).into_iter().filter(|p| !p.is_empty()) {
            let monos: Vec<Vec<u32>> = schur_poly(&inner)
                .into_iter()
                .flat_map(|(m, c)| std::iter::repeat_n(m, c as usize))
                .collect();
            let want = to_schur(schur_on(&outer_shape, &monos));
            let got = plethysm(&inner.clone().into(), &outer_shape.clone().into()).unwrap();
            assert_eq!(got, want, "{inner} ⊗ {outer_shape}");
        }
    }
}

/// Frobenius: χ^λ(ρ) is the coefficient of x^{λ+δ} in a_δ · p_ρ (n variables).
fn frobenius_character(lam: &Partition, rho: &Partition) -> i64 {
    let n = lam.weight().max(1) as usize;
    let mut poly: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    // a_δ as a signed sum over permutations
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |p| {
        let mut m = vec![0u32; n];
        for (i, &pi) in p.iter().enumerate() {
            m[pi] = (n - 1 - i) as u32;
        }
        *poly.entry(m).or_insert(0) += sign(p);
    });
    for &k in rho.parts() {
        let mut next = BTreeMap::new();
        for (m, c) in &poly {
            for v in 0..n {
                let mut m2 = m.clone();
                m2[v] += k;
                *next.entry(m2).or_insert(0) += c;
            }
        }
        poly = next;
    }
    let target: Vec<u32> = (0..n).map(|i| lam.part(i) + (n - 1 - i) as u32).collect();
    poly.get(&target).copied().unwrap_or(0)
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

fn sign(p: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 { 1 } else { -1 }
}

#[test]
fn kronecker_matches_frobenius_characters() {
    for n in 1..=5u32 {
        let parts = partitions(n);
        let n_fact: i64 = (1..=n as i64).product();
        let chi: Vec<Vec<i64>> = parts
            .iter()
            .map(|l| parts.iter().map(|r| frobenius_character(l, r)).collect())
            .collect();
        let class: Vec<i64> = parts.iter().map(|r| n_fact / r.z() as i64).collect();
        for (i, a) in parts.iter().enumerate() {
            for (j, b) in parts.iter().enumerate() {
                let got = kronecker(&a.clone().into(), &b.clone().into()).unwrap();
                for (k, c) in parts.iter().enumerate() {
                    let g: i64 = (0..parts.len())
                        .map(|r| class[r] * chi[i][r] * chi[j][r] * chi[k][r])
                        .sum::<i64>()
                        / n_fact;
                    assert_eq!(got.coefficient(c), BigInt::from(g), "g({a},{b};{c})");
                }
            }
        }
    }
}

#[test]
fn kronecker_small_examples() {
    let k = |a: &[u32], b: &[u32]| kronecker(&SchurExpr::from_parts(a), &SchurExpr::from_parts(b)).unwrap();
    assert_eq!(k(&[2, 1], &[2, 1]), "{3} + {2,1} + {1,1,1}".parse().unwrap());
    assert_eq!(k(&[2], &[1, 1]), "{1,1}".parse().unwrap());
    assert_eq!(k(&[1, 1, 1, 1], &[1, 1, 1, 1]), "{4}".parse().unwrap());
    assert!(k(&[2], &[1]).is_zero());
}

#[test]
fn expr_poly_roundtrip() {
    let e: SchurExpr = "2{3,1} + {2,2} + {1}".parse().unwrap();
    assert_eq!(to_schur(expr_poly(&e)), e);
}
