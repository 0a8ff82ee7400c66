//! Integer kernel lattices of rational linear forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Basis of the lattice `{x ∈ Z^d : ell·x = 0}` in column Hermite normal form.
///
/// The basis is found by unimodular column reduction of `ell` (an extended
/// gcd on its entries) and then normalized so that the result depends only on
/// the lattice, not on the reduction path.
pub fn integer_kernel_basis(ell: &[BigInt]) -> Vec<Vec<BigInt>> {
    let d = ell.len();
    let mut a = ell.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..d)
        .map(|i| (0..d).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect();
    let pivot = loop {
        let nz: Vec<usize> = (0..d).filter(|&i| !a[i].is_zero()).collect();
        if nz.len() <= 1 {
            break nz.first().copied();
        }
        let p = *nz.iter().min_by_key(|&&i| a[i].abs()).unwrap();
        for &j in &nz {
            if j == p {
                continue;
            }
            let q = &a[j] / &a[p];
            if q.is_zero() {
                continue;
            }
            a[j] = &a[j] - &q * &a[p];
            for row in u.iter_mut() {
                let v = &row[j] - &q * &row[p];
                row[j] = v;
            }
        }
    };
    let cols: Vec<usize> = (0..d).filter(|&j| Some(j) != pivot).collect();
    let mut basis: Vec<Vec<BigInt>> = cols.iter().map(|&j| u.iter().map(|row| row[j].clone()).collect()).collect();
    column_hnf(&mut basis);
    basis
}

/// Column Hermite normal form of the lattice spanned by `cols` (each entry is
/// one column vector). Lower echelon with positive pivots and entries left of
/// each pivot reduced into `[0, pivot)`.
pub fn column_hnf(cols: &mut [Vec<BigInt>]) {
    let m = cols.len();
    if m == 0 {
        return;
    }
    let d = cols[0].len();
    let mut c = 0;
    for i in 0..d {
        if c >= m {
            break;
        }
        loop {
            let nz: Vec<usize> = (c..m).filter(|&j| !cols[j][i].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&j| cols[j][i].abs()).unwrap();
            for &j in &nz {
                if j != p {
                    let q = &cols[j][i] / &cols[p][i];
                    let pc = cols[p].clone();
                    for (x, y) in cols[j].iter_mut().zip(&pc) {
                        *x -= &q * y;
                    }
                }
            }
        }
        let Some(p) = (c..m).find(|&j| !cols[j][i].is_zero()) else { continue };
        cols.swap(p, c);
        if cols[c][i].is_negative() {
            for x in cols[c].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot = cols[c][i].clone();
        for j in 0..c {
            let q = cols[j][i].div_floor(&pivot);
            if !q.is_zero() {
                let pc = cols[c].clone();
                for (x, y) in cols[j].iter_mut().zip(&pc) {
                    *x -= &q * y;
                }
            }
        }
        c += 1;
    }
}
