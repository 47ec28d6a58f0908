//! Three lines in the plane: the intersection closure, its graded pieces and
//! the excess they carry.

use posetmod::linalg::{Field, Matrix, Subspace};
use posetmod::multiflag::{GradedPolicy, MultiFlag};

fn line(x: i64, y: i64) -> Subspace {
    Subspace::span(&Matrix::from_i64(Field::Rational, &[&[x], &[y]]))
}

fn main() -> posetmod::Result<()> {
    let lines = [line(1, 0), line(0, 1), line(1, 1)];
    for k in 1..=lines.len() {
        let flag = MultiFlag::close(Field::Rational, 2, &lines[..k], 64)?;
        let graded = flag.graded(&GradedPolicy::Complement)?;
        println!(
            "{k} line(s): {} members, semi-flag {}, piece dims {:?}, excess {}",
            flag.len(),
            flag.is_semi_flag(),
            graded.piece_dims(),
            graded.excess
        );
    }
    Ok(())
}
