//! Fixed matrices of the monad construction and the worked liaison example.

use crate::error::Result;
use crate::module::{FreeModule, GradedMatrix, Vector};
use crate::parse::parse_polynomial;
use crate::poly::{Polynomial, Ring};

fn poly(ring: &Ring, s: &str) -> Polynomial {
    parse_polynomial(ring, s).expect("built-in polynomial")
}

/// `f0 = (x0, x1, x2, x3^2, x4^2)`, presenting the module `M`.
pub fn f0(ring: &Ring) -> Result<GradedMatrix> {
    let row: Vec<Polynomial> = ["x0", "x1", "x2", "x3^2", "x4^2"].iter().map(|s| poly(ring, s)).collect();
    GradedMatrix::from_rows(FreeModule::new(vec![0]), &[row])
}

/// Twists of `F2`, indexed by the pairs 01, 02, 12, 03, 13, 23, 04, 14, 24, 34.
pub const F2_TWISTS: [i32; 10] = [2, 2, 2, 3, 3, 3, 3, 3, 3, 4];
/// Twists of `F3`.
pub const F3_TWISTS: [i32; 10] = [3, 4, 4, 4, 4, 4, 4, 5, 5, 5];

const F2_ROWS: [[&str; 10]; 10] = [
    ["x2", "x3^2", "0", "0", "x4^2", "0", "0", "0", "0", "0"],
    ["-x1", "0", "x3^2", "0", "0", "x4^2", "0", "0", "0", "0"],
    ["x0", "0", "0", "x3^2", "0", "0", "x4^2", "0", "0", "0"],
    ["0", "-x1", "-x2", "0", "0", "0", "0", "x4^2", "0", "0"],
    ["0", "x0", "0", "-x2", "0", "0", "0", "0", "x4^2", "0"],
    ["0", "0", "x0", "x1", "0", "0", "0", "0", "0", "x4^2"],
    ["0", "0", "0", "0", "-x1", "-x2", "0", "-x3^2", "0", "0"],
    ["0", "0", "0", "0", "x0", "0", "-x2", "0", "-x3^2", "0"],
    ["0", "0", "0", "0", "0", "x0", "x1", "0", "0", "-x3^2"],
    ["0", "0", "0", "0", "0", "0", "0", "x0", "x1", "x2"],
];

/// The map `f2 : F3 -> F2` whose image is the second syzygy module `B` of `M`.
pub fn f2(ring: &Ring) -> Result<GradedMatrix> {
    let rows: Vec<Vec<Polynomial>> =
        F2_ROWS.iter().map(|r| r.iter().map(|s| poly(ring, s)).collect()).collect();
    GradedMatrix::from_rows_with_source(
        FreeModule::new(F2_TWISTS.to_vec()),
        FreeModule::new(F3_TWISTS.to_vec()),
        &rows,
    )
}

/// `phi = (1, 0, 0, 0, 0, -x0, 0, 0, x1, 0) : F2 -> S(-2)`.
pub fn phi(ring: &Ring) -> Result<GradedMatrix> {
    let row: Vec<Polynomial> = ["1", "0", "0", "0", "0", "-x0", "0", "0", "x1", "0"]
        .iter()
        .map(|s| poly(ring, s))
        .collect();
    GradedMatrix::from_rows_with_source(
        FreeModule::new(vec![2]),
        FreeModule::new(F2_TWISTS.to_vec()),
        &[row],
    )
}

/// `psi : S(-4) -> F3`, the transpose of `(0,0,0,1,0,1,0,0,0,0)`.
pub fn psi(ring: &Ring) -> Vector {
    let mut v = vec![Polynomial::zero(); 10];
    v[3] = ring.one();
    v[5] = ring.one();
    Vector::from_polys(&v)
}

/// `psi' : S(-5) -> F3`, the transpose of `(0,x1,0,0,x0,0,0,0,0,1)`.
pub fn psi_prime(ring: &Ring) -> Vector {
    let mut v = vec![Polynomial::zero(); 10];
    v[1] = ring.var(1);
    v[4] = ring.var(0);
    v[9] = ring.one();
    Vector::from_polys(&v)
}
