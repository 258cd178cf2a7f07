//! Finite abelian groups from relations: Smith invariants, subgroups, direct sums.

use polya::abelian::{format_invariants, is_internal_direct_sum, AbelianGroup, GroupElement};

pub fn run() -> polya::Result<()> {
    // Z^3 / <(2,0,0), (0,4,0), (0,0,6), (0,2,3)>
    let g = AbelianGroup::new(3, vec![vec![2.into(), 0.into(), 0.into()], vec![0.into(), 4.into(), 0.into()], vec![0.into(), 0.into(), 6.into()], vec![0.into(), 2.into(), 3.into()]])?;
    println!("G = {} (order {})", format_invariants(&g.invariants()), g.order().expect("finite"));

    let a = GroupElement::from_i64(&[1, 0, 0]);
    let b = GroupElement::from_i64(&[0, 1, 0]);
    let c = GroupElement::from_i64(&[0, 0, 1]);
    for (name, x) in [("a", &a), ("b", &b), ("c", &c)] {
        println!("order of {name}: {}", g.element_order(x)?);
    }

    let h1 = g.subgroup(std::slice::from_ref(&a))?;
    let h2 = g.subgroup(&[b.clone(), c.clone()])?;
    println!("<a> = {}, <b, c> = {}", format_invariants(&h1.invariants()), format_invariants(&h2.invariants()));
    let w = is_internal_direct_sum(&g, &h1, &h2)?;
    println!("G = <a> (+) <b, c>: direct {}, spans {}", w.is_direct, w.spans_group);
    Ok(())
}

#[allow(dead_code)]
fn main() -> polya::Result<()> {
    run()
}
