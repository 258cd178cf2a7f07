//! Pólya groups of Galois fields from the classes of the ramified Π_{p*}, against the
//! order formula |Po| · |H¹| = ∏ e_p.

use polya::abelian::format_invariants;
use polya::numberfield::classgroup::ClassGroupBudget;
use polya::numberfield::families::FieldDescriptor;
use polya::polya::{h1_order_cyclic_over_q, polya_group, ramification_product, FieldData};

pub fn run() -> polya::Result<()> {
    for desc in ["ccubic:cond9", "ccubic:cond63", "quad:-21", "biquad:-1,5", "biquad:-3,-5"] {
        let k = desc.parse::<FieldDescriptor>()?.build()?;
        let data = FieldData::new(k, 0, &ClassGroupBudget::default())?;
        let po = polya_group(&data, 50)?;
        println!(
            "{desc}: Cl = {}, Po = {}, prod e = {}",
            format_invariants(&data.group().invariants()),
            format_invariants(&po.group.invariants()),
            ramification_product(&data.field)?
        );
        for (p, x) in &po.generators {
            println!("  Pi_{p}: order {}", data.group().element_order(x)?);
        }
        if data.field.galois_label().is_some_and(|l| l.starts_with('C')) {
            println!("  |H1| = {}", h1_order_cyclic_over_q(&data)?);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> polya::Result<()> {
    run()
}
