//! Tours the operator catalogue: resolvents, Yosida approximations,
//! reflected resolvents, and zero-set oracles for each variant.
//!
//! Run with `cargo run --example resolvent_catalogue`.

use nalgebra::DMatrix;
use relaxed_ppa::operators::{ConvexSet, ConvexSetSpec, Emptiness, OperatorSpec};
use relaxed_ppa::Vector;

fn v(s: &[f64]) -> Vector {
    Vector::from_column_slice(s)
}

fn show(name: &str, op: &OperatorSpec, c: f64, x: &Vector) {
    let j = op.resolvent(c, x).unwrap();
    let yos = op.yosida(c, x).unwrap();
    let refl = op.reflected_resolvent(c, x).unwrap();
    println!("{name}:");
    println!("  J_{{{c}A}}({}) = {}", fmt(x), fmt(&j));
    println!("  yosida        = {}", fmt(&yos));
    println!("  2J - Id       = {}", fmt(&refl));
    let oracle = op.zero_set_oracle();
    match oracle.emptiness {
        Emptiness::KnownEmpty => println!("  zer A = (empty)"),
        Emptiness::Unknown => println!("  zer A = (no exact description)"),
        Emptiness::KnownNonempty => {
            let p = oracle.project(x).unwrap().unwrap();
            println!("  P_zer({}) = {}", fmt(x), fmt(&p));
        }
    }
}

fn fmt(x: &Vector) -> String {
    let parts: Vec<String> = x.iter().map(|v| format!("{v:.4}")).collect();
    format!("({})", parts.join(", "))
}

fn main() {
    // affine A(x) = Qx + b, full rank
    let q = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
    let affine = OperatorSpec::affine_psd(q, v(&[-1.0, 0.5])).unwrap();
    show("affine (full rank)", &affine, 1.0, &v(&[2.0, -1.0]));

    // rank-deficient affine: zero set is a line
    let q = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
    let flat = OperatorSpec::affine_psd(q, v(&[-1.0, 0.0])).unwrap();
    show("affine (rank deficient)", &flat, 2.0, &v(&[5.0, 7.0]));

    // normal cone of the unit box: resolvent is the clamp, stepsize-free
    let boxcone = OperatorSpec::normal_cone(
        ConvexSet::new(ConvexSetSpec::Box {
            lower: vec![-1.0, -1.0],
            upper: vec![1.0, 1.0],
        })
        .unwrap(),
    );
    show("normal cone of [-1,1]^2", &boxcone, 7.0, &v(&[3.0, 0.5]));

    // constant operator: empty zero set, resolvent shifts by -cv
    let constant = OperatorSpec::constant(v(&[1.0, 0.0])).unwrap();
    show("constant v = (1,0)", &constant, 3.0, &v(&[0.0, 0.0]));

    // scalar piecewise-linear subdifferential: |y| gives soft thresholding
    let soft = OperatorSpec::piecewise_linear_1d(vec![0.0], vec![-1.0, 1.0]).unwrap();
    show("subdifferential of |y|", &soft, 1.0, &v(&[3.0]));

    // ball-restricted augmentation of the affine operator
    let inner = OperatorSpec::affine_psd(
        DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]),
        v(&[0.5, -1.0]),
    )
    .unwrap();
    let augmented = OperatorSpec::ball_augmented(inner, 0.6).unwrap();
    show(
        "ball-restricted affine (r = 0.6)",
        &augmented,
        0.7,
        &v(&[3.0, -2.0]),
    );
    let y = augmented.resolvent(0.7, &v(&[3.0, -2.0])).unwrap();
    println!("  boundary check: ‖y‖ = {:.12} (radius 0.6)", y.norm());

    // positive scaling: J_{c(γA)} = J_{(cγ)A}
    let scaled = OperatorSpec::scaled(OperatorSpec::identity(1), 3.0).unwrap();
    show("scaled identity (γ = 3)", &scaled, 2.0, &v(&[7.0]));
}
