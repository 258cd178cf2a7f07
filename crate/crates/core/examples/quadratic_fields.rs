//! Quadratic fields through binary forms: class groups, fundamental units and
//! Hilbert's count of the Pólya group.

use polya::abelian::format_invariants;
use polya::quadratic::units::fundamental_unit;
use polya::quadratic::{hilbert_predicted_order, polya_group_quad, QuadraticField};

pub fn run() -> polya::Result<()> {
    println!("{:>6} {:>6} {:>3} {:>12} {:>12} {:>9}", "d", "disc", "s", "Cl", "Po", "predicted");
    for d in [-5, -21, -105, 10, 34, 79, 82, 2210] {
        let k = QuadraticField::new(d)?;
        let po = polya_group_quad(&k)?;
        let pred = hilbert_predicted_order(&k)?;
        println!(
            "{:>6} {:>6} {:>3} {:>12} {:>12} {:>9}",
            d,
            k.disc(),
            k.ramified_primes().len(),
            format_invariants(&po.class_group.group.invariants()),
            format_invariants(&po.presentation().invariants()),
            pred.order
        );
        assert_eq!(po.order(), pred.order);
    }
    let u = fundamental_unit(94)?;
    println!("fundamental unit of Q(sqrt 94): ({} + {} sqrt 94)/{}, norm {}", u.x, u.y, u.denom, u.norm);
    Ok(())
}

#[allow(dead_code)]
fn main() -> polya::Result<()> {
    run()
}
