//! Maximal orders and the splitting of rational primes.

use polya::numberfield::families::FieldDescriptor;

pub fn run() -> polya::Result<()> {
    for desc in ["ccubic:cond7", "biquad:5,-1", "poly:-2,0,0,1"] {
        let k = desc.parse::<FieldDescriptor>()?.build()?;
        println!("{desc}: degree {}, disc {}, signature {:?}", k.degree(), k.disc(), k.signature());
        for p in [2u64, 3, 5, 7, 13] {
            let primes = k.factor_prime(p)?;
            let parts: Vec<String> = primes.iter().map(|pr| format!("(e={}, f={})", pr.e, pr.f)).collect();
            let total: u32 = primes.iter().map(|pr| pr.e * pr.f).sum();
            assert_eq!(total as usize, k.degree());
            println!("  {p}: {}", parts.join(" "));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> polya::Result<()> {
    run()
}
