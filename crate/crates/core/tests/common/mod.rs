//! Reference implementations used as test oracles. Deliberately naive and
//! independent of the library's algorithms.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `r − p` is a rational multiple of `q − p`, found by solving on one
/// nonzero coordinate and substituting into the rest.
pub fn collinear_oracle(p: &[i64], q_: &[i64], r: &[i64]) -> bool {
    let u: Vec<BigRational> = q_.iter().zip(p).map(|(a, b)| qi(*a) - qi(*b)).collect();
    let v: Vec<BigRational> = r.iter().zip(p).map(|(a, b)| qi(*a) - qi(*b)).collect();
    let Some(i) = u.iter().position(|c| !c.is_zero()) else {
        return true;
    };
    let t = &v[i] / &u[i];
    u.iter().zip(&v).all(|(a, b)| &t * a == *b)
}

/// First collinear triple `(i, j, k)` in lexicographic index order.
pub fn first_triple(points: &[Vec<i64>]) -> Option<(usize, usize, usize)> {
    let k = points.len();
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                if collinear_oracle(&points[i], &points[j], &points[l]) {
                    return Some((i, j, l));
                }
            }
        }
    }
    None
}

pub fn grid(n: i64, d: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=n).map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

/// Largest no-three-in-line subset of `{1..n}^d` by enumerating every such
/// subset. No pruning by size.
pub fn naive_max(n: i64, d: usize) -> usize {
    fn extend(cells: &[Vec<i64>], from: usize, chosen: &mut Vec<Vec<i64>>, best: &mut usize) {
        *best = (*best).max(chosen.len());
        for i in from..cells.len() {
            let c = &cells[i];
            let ok = (0..chosen.len())
                .all(|a| (a + 1..chosen.len()).all(|b| !collinear_oracle(&chosen[a], &chosen[b], c)));
            if ok {
                chosen.push(c.clone());
                extend(cells, i + 1, chosen, best);
                chosen.pop();
            }
        }
    }
    let cells = grid(n, d);
    let mut best = 0;
    extend(&cells, 0, &mut Vec::new(), &mut best);
    best
}

/// `Σ (x_i − m/x_i)²`.
pub fn gap_sq_oracle(x: &[BigRational], m: &BigRational) -> BigRational {
    x.iter().map(|c| {
        let t = c - m / c;
        &t * &t
    }).fold(BigRational::zero(), |a, b| a + b)
}

pub fn mass_oracle(x: &[BigRational], m: &BigRational) -> BigRational {
    x.iter().map(|c| m / c).fold(BigRational::zero(), |a, b| a + b)
}

/// `H(N)` by plain rational summation.
pub fn harmonic_oracle(n: u64) -> BigRational {
    (1..=n as i64).map(|k| q(1, k)).fold(BigRational::zero(), |a, b| a + b)
}

pub fn one() -> BigRational {
    BigRational::one()
}
