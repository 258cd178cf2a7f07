//! The relative Pólya group of L/K and the capitulation and norm maps on classes.

use polya::abelian::format_invariants;
use polya::numberfield::classgroup::ClassGroupBudget;
use polya::numberfield::families::{compositum, FieldDescriptor};
use polya::polya::{eps_map, nu_map, polya_group, predicted_order_cyclic, relative_polya_group, FieldData, RelativeExtension};

pub fn run() -> polya::Result<()> {
    let budget = ClassGroupBudget::default();
    let k = "quad:-5".parse::<FieldDescriptor>()?.build()?;
    let k2 = "quad:-1".parse::<FieldDescriptor>()?.build()?;
    let c = compositum(&k, &k2)?;
    let ext = RelativeExtension::new(&k, &c.field, c.emb1.clone())?;
    let dk = FieldData::new(k, 0, &budget)?;
    let dl = FieldData::new(c.field, 0, &budget)?;

    println!("L/K = {} / {}, degree {}", dl.field.descriptor(), dk.field.descriptor(), ext.degree);
    for r in &ext.ramified {
        println!("  ramified over {}: e = {}, f = {}", r.prime.p, r.e, r.f);
    }
    let rel = relative_polya_group(&ext, &dk, &dl)?;
    let abs = polya_group(&dl, 30)?;
    println!("Cl(K) = {}, Cl(L) = {}", format_invariants(&dk.group().invariants()), format_invariants(&dl.group().invariants()));
    println!("Po(L/K) = {}, Po(L) = {}", format_invariants(&rel.group.invariants()), format_invariants(&abs.group.invariants()));
    println!("predicted |Po(L/K)|: {:?}", predicted_order_cyclic(&ext, &dk, &dl)?);

    let eps = eps_map(&ext.emb, &dk, &dl)?;
    let nu = nu_map(&ext.emb, &dk, &dl)?;
    for x in &eps.images {
        println!("  eps image {:?}, nu(eps) = {:?}", dl.group().smith_coords(x)?, dk.group().smith_coords(&nu.apply(dk.group(), x)?)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> polya::Result<()> {
    run()
}
