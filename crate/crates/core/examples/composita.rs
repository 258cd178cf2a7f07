//! Composita of Galois fields and the maps between their ideal groups.

use polya::numberfield::families::{compositum, FieldDescriptor};

pub fn run() -> polya::Result<()> {
    let k1 = "quad:-1".parse::<FieldDescriptor>()?.build()?;
    let k2 = "ccubic:cond9".parse::<FieldDescriptor>()?.build()?;
    let c = compositum(&k1, &k2)?;
    let l = &c.field;
    println!("L = {}: degree {}, disc {}, Galois group {:?}", l.descriptor(), l.degree(), l.disc(), l.galois_label());
    for p in l.ramified_primes()? {
        let big = l.factor_prime(p)?;
        println!("  {p}: e = {}, f = {}, g = {}", big[0].e, big[0].f, big.len());
    }
    // extension and norm of the prime above 3 in Q(i)
    let p3 = k1.factor_prime(3)?.remove(0);
    let up = c.emb1.extend_ideal(l, &p3.ideal);
    let back = c.emb1.relative_norm(&k1, l, &up)?;
    println!("N(3 O_L) = (3 O_K)^{}: {}", c.emb1.relative_degree(), back == k1.ideal_pow(&p3.ideal, 3));
    Ok(())
}

#[allow(dead_code)]
fn main() -> polya::Result<()> {
    run()
}
