//! Deciding principality and recovering generators.

use polya::numberfield::families::FieldDescriptor;
use polya::numberfield::principal::{verify_generator, Principality};

pub fn run() -> polya::Result<()> {
    for desc in ["quad:-5", "quad:10", "ccubic:cond63"] {
        let k = desc.parse::<FieldDescriptor>()?.build()?;
        let units = k.unit_group()?;
        println!("{desc}");
        for p in [2u64, 3, 5, 7] {
            for pr in k.factor_prime(p)? {
                match k.is_principal(&pr.ideal, Some(&units)) {
                    Principality::Principal(g) => {
                        assert!(verify_generator(&k, &pr.ideal, &g));
                        println!("  prime over {p} (f={}): generated by {:?}", pr.f, g);
                    }
                    Principality::NotPrincipal => println!("  prime over {p} (f={}): not principal", pr.f),
                    Principality::Unknown(why) => println!("  prime over {p} (f={}): unknown ({why})", pr.f),
                }
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> polya::Result<()> {
    run()
}
