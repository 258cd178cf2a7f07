//! Class groups by relation search, certified by ruling out principal classes of
//! prime order.

use polya::abelian::format_invariants;
use polya::numberfield::classgroup::ClassGroupBudget;
use polya::numberfield::families::{compositum, FieldDescriptor};

pub fn run() -> polya::Result<()> {
    let k1 = "quad:-5".parse::<FieldDescriptor>()?.build()?;
    let k2 = "ccubic:cond7".parse::<FieldDescriptor>()?.build()?;
    let l = compositum(&k1, &k2)?.field;
    println!("L = {}, degree {}, disc {}", l.descriptor(), l.degree(), l.disc());
    println!("Minkowski bound {:.1}", l.minkowski_bound());

    let mut cg = l.class_group_with(0, &ClassGroupBudget::default())?;
    println!("Cl(L) = {} from {} factor-base primes", format_invariants(&cg.group.invariants()), cg.factor_base.len());
    let units = l.unit_group()?;
    println!("unit rank {}, regulator {:.4}", units.rank, units.regulator);
    let outcome = cg.certify(&l, &units)?;
    println!("certificate: {outcome:?}, {:?}", cg.certification);
    Ok(())
}

#[allow(dead_code)]
fn main() -> polya::Result<()> {
    run()
}
