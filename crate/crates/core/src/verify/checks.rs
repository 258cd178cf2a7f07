use num_bigint::BigInt;
use num_integer::Integer;
use serde_json::{json, Value};

use super::{timed, CheckId, CheckResult, FieldCache, SkipReason, Verdict};
use crate::abelian::is_internal_direct_sum;
use crate::arith::primes_up_to;
use crate::error::{Error, Result};
use crate::numberfield::embedding::Embedding;
use crate::numberfield::families::FieldDescriptor;
use crate::numberfield::principal::{verify_generator, Principality};
use crate::numberfield::{Ideal, NumberField, PrimeIdeal};
use crate::polya::{
    eps_map, h1_order_cyclic_over_q, h1_order_quadratic, nu_map, pi_star, polya_group, predicted_order_cyclic,
    predicted_order_prime_cyclic, ramification_product, relative_polya_group, is_galois_polya_extension,
    FieldData, Prediction, RelativeExtension,
};
use crate::quadratic::{hilbert_predicted_order, polya_group_quad, QuadraticField};

fn skip(reason: SkipReason, detail: impl Into<String>) -> Result<(Verdict, Value)> {
    Ok((Verdict::skip(reason, detail), Value::Null))
}

fn not_galois(k: &NumberField) -> Option<Result<(Verdict, Value)>> {
    (!k.is_galois()).then(|| skip(SkipReason::Unsupported, format!("{} is not Galois over Q", crate::polya::label(k))))
}

/// e_p of a Galois field.
fn e_of(k: &NumberField, p: u64) -> Result<u32> {
    Ok(k.factor_prime(p)?[0].e)
}

/// The common exponent of an ambiguous ideal at the primes above p, if it is one.
fn exponent_at(l: &NumberField, above: &[PrimeIdeal], a: &Ideal) -> Option<i64> {
    let v: Vec<i64> = above.iter().map(|pr| l.ideal_valuation(pr, a)).collect();
    v.windows(2).all(|w| w[0] == w[1]).then(|| v[0])
}

/// |Po(K)| = 2^{s−1} (or the clamped/narrow variant) against the form class group.
pub fn check_hilbert(d: i64) -> CheckResult {
    check_hilbert_with(d, 0)
}

/// As [`check_hilbert`], with `fault` added to the prediction (for exercising the
/// failure path).
pub fn check_hilbert_with(d: i64, fault: u64) -> CheckResult {
    timed(CheckId::Hilbert, format!("quad:{d}"), || {
        let k = QuadraticField::new(d)?;
        let po = polya_group_quad(&k)?;
        let pred = hilbert_predicted_order(&k)?;
        let predicted = pred.order + fault;
        let w = json!({
            "d": d,
            "disc": k.disc(),
            "ramified": k.ramified_primes(),
            "class_invariants": po.class_group.group.invariants_u64(),
            "polya_invariants": po.presentation().invariants_u64(),
            "computed": po.order(),
            "predicted": predicted,
            "unit_norm": pred.unit_norm,
            "clamped": pred.clamped,
        });
        Ok((Verdict::from_bool(po.order() == predicted), w))
    })
}

/// H¹ · |Po| = ∏ e_p for Q(√d), along the quadratic code path.
pub fn check_order_formula_quadratic(d: i64) -> CheckResult {
    timed(CheckId::OrderFormula, format!("quad:{d}"), || {
        let k = QuadraticField::new(d)?;
        let po = polya_group_quad(&k)?.order();
        let h1 = h1_order_quadratic(d)?;
        let prod = 1u64 << k.ramified_primes().len();
        let w = json!({ "d": d, "polya_order": po, "h1": h1, "ramification_product": prod });
        Ok((Verdict::from_bool(h1 * po == prod), w))
    })
}

/// Π_{p*}(K) is principal for every unramified p ≤ bound, with a verified generator.
pub fn check_ostrowski(cache: &FieldCache, desc: &FieldDescriptor, bound: u64) -> CheckResult {
    timed(CheckId::Ostrowski, format!("{desc} p<={bound}"), || {
        let k = cache.field(desc)?;
        if let Some(r) = not_galois(&k) {
            return r;
        }
        let units = k.unit_group()?;
        let ram = k.ramified_primes()?;
        let mut certified = Vec::new();
        let mut unknown = Vec::new();
        for p in primes_up_to(bound) {
            if ram.contains(&p) {
                continue;
            }
            let pi = pi_star(&k, p)?;
            match k.is_principal(&pi.ideal, Some(&units)) {
                Principality::Principal(g) => {
                    if !verify_generator(&k, &pi.ideal, &g) {
                        return Ok((Verdict::Fail, json!({ "field": desc.to_string(), "p": p, "error": "generator does not verify" })));
                    }
                    certified.push(p);
                }
                Principality::NotPrincipal => {
                    return Ok((Verdict::Fail, json!({ "field": desc.to_string(), "p": p, "principal": false })));
                }
                Principality::Unknown(why) => unknown.push(json!({ "p": p, "why": why })),
            }
        }
        if !unknown.is_empty() {
            return Ok((Verdict::skip(SkipReason::Resource, "principality undecided"), json!({ "undecided": unknown })));
        }
        Ok((Verdict::Pass, json!({ "field": desc.to_string(), "bound": bound, "certified": certified })))
    })
}

/// Ramification indices of a pair at p, skipping when p divides both (wild on both sides).
fn tame_indices(k1: &NumberField, k2: &NumberField, p: u64) -> Result<std::result::Result<(u32, u32), String>> {
    let e1 = e_of(k1, p)?;
    let e2 = e_of(k2, p)?;
    if (e1 as u64).is_multiple_of(p) && (e2 as u64).is_multiple_of(p) {
        return Ok(Err(format!("p = {p} divides both ramification indices ({e1}, {e2})")));
    }
    Ok(Ok((e1, e2)))
}

fn galois_pair(cache: &FieldCache, d1: &FieldDescriptor, d2: &FieldDescriptor) -> Result<(std::sync::Arc<NumberField>, std::sync::Arc<NumberField>)> {
    let k1 = cache.field(d1)?;
    let k2 = cache.field(d2)?;
    for k in [&k1, &k2] {
        if !k.is_galois() {
            return Err(Error::Unsupported(format!("{} is not Galois over Q", crate::polya::label(k))));
        }
    }
    Ok((k1, k2))
}

/// e_p(K1K2) = lcm(e_1, e_2) when p is tame on one side.
pub fn check_abhyankar(cache: &FieldCache, d1: &FieldDescriptor, d2: &FieldDescriptor, p: u64) -> CheckResult {
    timed(CheckId::Abhyankar, format!("{d1} * {d2} p={p}"), || {
        let (k1, k2) = galois_pair(cache, d1, d2)?;
        let (e1, e2) = match tame_indices(&k1, &k2, p)? {
            Ok(e) => e,
            Err(why) => return skip(SkipReason::HypothesisUnmet, why),
        };
        let pair = cache.pair(d1, d2)?;
        let es: Vec<u32> = pair.l.factor_prime(p)?.iter().map(|q| q.e).collect();
        let lcm = e1.lcm(&e2);
        let w = json!({ "p": p, "e1": e1, "e2": e2, "e_L": es, "lcm": lcm });
        Ok((Verdict::from_bool(es.iter().all(|&e| e == lcm)), w))
    })
}

struct LocalData {
    e1: u32,
    e2: u32,
    m: u32,
    pi: Ideal,
    pi1: Ideal,
    pi2: Ideal,
    /// Exponents of Π_1O_L, Π_2O_L and pO_L on Π, when uniform.
    a1: Option<i64>,
    a2: Option<i64>,
    a0: Option<i64>,
}

fn local_data(pair: &super::Pair, p: u64, e1: u32, e2: u32) -> Result<LocalData> {
    let l = &pair.l;
    let above = l.factor_prime(p)?;
    let m = above[0].e;
    let pi = pi_star(l, p)?.ideal;
    let pi1 = pair.emb1.extend_ideal(l, &pi_star(&pair.k1, p)?.ideal);
    let pi2 = pair.emb2.extend_ideal(l, &pi_star(&pair.k2, p)?.ideal);
    let po = l.int_ideal(&BigInt::from(p));
    Ok(LocalData {
        e1,
        e2,
        m,
        a1: exponent_at(l, &above, &pi1),
        a2: exponent_at(l, &above, &pi2),
        a0: exponent_at(l, &above, &po),
        pi,
        pi1,
        pi2,
    })
}

/// Π_iO_L = Π^{m/e_i}, Π_1^{u_1}Π_2^{u_2}O_L = Π, and ⟨[Π_1O_L],[Π_2O_L]⟩ = ⟨[Π]⟩ in Cl(L).
pub fn check_lemma_subgroup(cache: &FieldCache, d1: &FieldDescriptor, d2: &FieldDescriptor, p: u64) -> CheckResult {
    timed(CheckId::LemmaSubgroup, format!("{d1} * {d2} p={p}"), || {
        let (k1, k2) = galois_pair(cache, d1, d2)?;
        let (e1, e2) = match tame_indices(&k1, &k2, p)? {
            Ok(e) => e,
            Err(why) => return skip(SkipReason::HypothesisUnmet, why),
        };
        let pair = cache.pair(d1, d2)?;
        let l = &pair.l;
        let ld = local_data(&pair, p, e1, e2)?;
        let mut w = json!({ "p": p, "e": [ld.e1, ld.e2, ld.m] });
        if ld.m % ld.e1 != 0 || ld.m % ld.e2 != 0 {
            w["error"] = json!("e_i does not divide e_L");
            return Ok((Verdict::Fail, w));
        }
        let a1 = (ld.m / ld.e1) as i64;
        let a2 = (ld.m / ld.e2) as i64;
        let ok1 = l.ideal_eq(&ld.pi1, &l.ideal_pow(&ld.pi, a1 as u64));
        let ok2 = l.ideal_eq(&ld.pi2, &l.ideal_pow(&ld.pi, a2 as u64));
        let eg = BigInt::from(a1).extended_gcd(&BigInt::from(a2));
        let (u1, u2): (i64, i64) = (i64::try_from(&eg.x).unwrap(), i64::try_from(&eg.y).unwrap());
        w["exponents"] = json!([a1, a2]);
        w["bezout"] = json!([u1, u2]);
        let bezout_ok = if eg.gcd == BigInt::from(1) {
            let pw = |a: &Ideal, u: i64| l.ideal_pow(a, u.unsigned_abs());
            let mut lhs = l.unit_ideal();
            let mut rhs = ld.pi.clone();
            for (a, u) in [(&ld.pi1, u1), (&ld.pi2, u2)] {
                if u >= 0 {
                    lhs = l.ideal_mul(&lhs, &pw(a, u));
                } else {
                    rhs = l.ideal_mul(&rhs, &pw(a, u));
                }
            }
            l.ideal_eq(&lhs, &rhs)
        } else {
            false
        };
        w["ideal_identities"] = json!([ok1, ok2, bezout_ok]);
        let dl = cache.data_for(l)?;
        let c1 = dl.dlog(&ld.pi1)?;
        let c2 = dl.dlog(&ld.pi2)?;
        let c = dl.dlog(&ld.pi)?;
        let lhs = dl.group().subgroup(&[c1, c2])?;
        let rhs = dl.group().subgroup(&[c])?;
        let class_ok = lhs == rhs;
        w["class_subgroup"] = json!(rhs.invariants().iter().map(|x| x.to_string()).collect::<Vec<_>>());
        w["class_equal"] = json!(class_ok);
        Ok((Verdict::from_bool(ok1 && ok2 && bezout_ok && class_ok), w))
    })
}

/// ⟨Π_1O_L⟩ ∩ ⟨Π_2O_L⟩ = ⟨pO_L⟩ exactly when gcd(e_1, e_2) = 1.
pub fn check_lemma_intersection(cache: &FieldCache, d1: &FieldDescriptor, d2: &FieldDescriptor, p: u64) -> CheckResult {
    timed(CheckId::LemmaIntersection, format!("{d1} * {d2} p={p}"), || {
        let (k1, k2) = galois_pair(cache, d1, d2)?;
        let (e1, e2) = match tame_indices(&k1, &k2, p)? {
            Ok(e) => e,
            Err(why) => return skip(SkipReason::HypothesisUnmet, why),
        };
        let pair = cache.pair(d1, d2)?;
        let ld = local_data(&pair, p, e1, e2)?;
        let (Some(a1), Some(a2), Some(a0)) = (ld.a1, ld.a2, ld.a0) else {
            return Ok((Verdict::Fail, json!({ "p": p, "error": "extended Π ideal is not ambiguous" })));
        };
        let inter = a1.lcm(&a2);
        let equal = inter == a0;
        let coprime = e1.gcd(&e2) == 1;
        let w = json!({
            "p": p, "e": [e1, e2, ld.m], "exponents": [a1, a2, a0],
            "intersection_exponent": inter, "equality": equal, "gcd_e": e1.gcd(&e2),
        });
        Ok((Verdict::from_bool(equal == coprime), w))
    })
}

/// Ideal-level amalgamated sum at every ramified p: j(I_1) + j(I_2) = I_L^G and
/// j(I_1) ∩ j(I_2) = j(I_0).
pub fn check_amalgam(cache: &FieldCache, d1: &FieldDescriptor, d2: &FieldDescriptor) -> CheckResult {
    timed(CheckId::Amalgam, format!("{d1} * {d2}"), || {
        let k1 = cache.field(d1)?;
        let k2 = cache.field(d2)?;
        if k1.degree().gcd(&k2.degree()) != 1 {
            return skip(SkipReason::HypothesisUnmet, format!("degrees {} and {} are not coprime", k1.degree(), k2.degree()));
        }
        galois_pair(cache, d1, d2)?;
        let pair = cache.pair(d1, d2)?;
        let mut rows = Vec::new();
        let mut ok = true;
        for p in pair.l.ramified_primes()? {
            let ld = local_data(&pair, p, e_of(&k1, p)?, e_of(&k2, p)?)?;
            let (Some(a1), Some(a2), Some(a0)) = (ld.a1, ld.a2, ld.a0) else {
                return Ok((Verdict::Fail, json!({ "p": p, "error": "extended Π ideal is not ambiguous" })));
            };
            let span = a1.gcd(&a2) == 1;
            let inter = a1.lcm(&a2) == a0;
            ok &= span && inter;
            rows.push(json!({ "p": p, "e": [ld.e1, ld.e2, ld.m], "exponents": [a1, a2, a0], "span": span, "intersection": inter }));
        }
        if rows.is_empty() {
            return skip(SkipReason::HypothesisUnmet, "no ramified primes");
        }
        Ok((Verdict::from_bool(ok), json!({ "primes": rows })))
    })
}

struct SumData {
    po1: crate::abelian::Subgroup,
    po2: crate::abelian::Subgroup,
    pol: crate::abelian::Subgroup,
    img1: crate::abelian::Subgroup,
    img2: crate::abelian::Subgroup,
    dl: std::sync::Arc<FieldData>,
}

fn sum_data(cache: &FieldCache, pair: &super::Pair) -> Result<SumData> {
    let dk1 = cache.data_for(&pair.k1)?;
    let dk2 = cache.data_for(&pair.k2)?;
    let dl = cache.data_for(&pair.l)?;
    let po1 = polya_group(&dk1, 0)?.subgroup;
    let po2 = polya_group(&dk2, 0)?.subgroup;
    let pol = polya_group(&dl, 0)?.subgroup;
    let img1 = eps_map(&pair.emb1, &dk1, &dl)?.image(dl.group(), &po1, dk1.group())?;
    let img2 = eps_map(&pair.emb2, &dk2, &dl)?.image(dl.group(), &po2, dk2.group())?;
    Ok(SumData { po1, po2, pol, img1, img2, dl })
}

fn inv(h: &crate::abelian::Subgroup) -> Value {
    json!(h.invariants().iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

/// Po(L) = ε_1(Po(K_1)) + ε_2(Po(K_2)) when every p is tame in K_1 or K_2.
pub fn check_tame_sum(cache: &FieldCache, d1: &FieldDescriptor, d2: &FieldDescriptor) -> CheckResult {
    timed(CheckId::TameSum, format!("{d1} * {d2}"), || {
        let (k1, k2) = galois_pair(cache, d1, d2)?;
        let mut ram = k1.ramified_primes()?;
        ram.extend(k2.ramified_primes()?);
        ram.sort_unstable();
        ram.dedup();
        for &p in &ram {
            if let Err(why) = tame_indices(&k1, &k2, p)? {
                return skip(SkipReason::HypothesisUnmet, why);
            }
        }
        let pair = cache.pair(d1, d2)?;
        let s = sum_data(cache, &pair)?;
        let sum = s.img1.sum(&s.img2);
        let w = json!({
            "class_group": s.dl.group().invariants_u64(),
            "certified": s.dl.is_certified(),
            "po_k1": inv(&s.po1), "po_k2": inv(&s.po2), "po_l": inv(&s.pol),
            "eps1": inv(&s.img1), "eps2": inv(&s.img2), "sum": inv(&sum),
        });
        Ok((Verdict::from_bool(sum == s.pol), w))
    })
}

/// Po(L) = ε_1(Po(K_1)) ⊕ ε_2(Po(K_2)) and |Po(L)| = |Po(K_1)|·|Po(K_2)| for
/// coprime degrees over the Pólya field Q.
pub fn check_direct_sum(cache: &FieldCache, d1: &FieldDescriptor, d2: &FieldDescriptor) -> CheckResult {
    timed(CheckId::DirectSum, format!("{d1} * {d2}"), || {
        let k1 = cache.field(d1)?;
        let k2 = cache.field(d2)?;
        if k1.degree().gcd(&k2.degree()) != 1 {
            return skip(SkipReason::HypothesisUnmet, format!("degrees {} and {} are not coprime", k1.degree(), k2.degree()));
        }
        let q = cache.data_for(&NumberField::rationals())?;
        if q.class_number() != 1 {
            return Ok((Verdict::Fail, json!({ "error": "Po(Q) computed nontrivial" })));
        }
        galois_pair(cache, d1, d2)?;
        let pair = cache.pair(d1, d2)?;
        let s = sum_data(cache, &pair)?;
        let ds = is_internal_direct_sum(s.dl.group(), &s.img1, &s.img2)?;
        let sum = s.img1.sum(&s.img2);
        let orders = s.pol.order() == s.po1.order() * s.po2.order();
        let w = json!({
            "class_group": s.dl.group().invariants_u64(),
            "certified": s.dl.is_certified(),
            "po_k1": inv(&s.po1), "po_k2": inv(&s.po2), "po_l": inv(&s.pol),
            "direct": ds.is_direct, "sum_equals_po_l": sum == s.pol, "orders_multiply": orders,
        });
        Ok((Verdict::from_bool(ds.is_direct && sum == s.pol && orders), w))
    })
}

/// ε restricted to Po(K_1) is injective with image in Po(L), for L = K_1 (when
/// `d2` is None) or L = K_1K_2.
pub fn check_embedding(cache: &FieldCache, d1: &FieldDescriptor, d2: Option<&FieldDescriptor>) -> CheckResult {
    let instance = match d2 {
        Some(d2) => format!("{d1} in {d1} * {d2}"),
        None => format!("{d1} in {d1}"),
    };
    timed(CheckId::Embedding, instance, || {
        let k1 = cache.field(d1)?;
        let (l, emb) = match d2 {
            Some(d2) => {
                galois_pair(cache, d1, d2)?;
                let pair = cache.pair(d1, d2)?;
                (pair.l.clone(), pair.emb1.clone())
            }
            None => (k1.clone(), Embedding::from_theta_image(&k1, &k1, &k1.theta())?),
        };
        if let Some(r) = not_galois(&k1).or_else(|| not_galois(&l)) {
            return r;
        }
        let rel = emb.relative_degree();
        if rel.gcd(&k1.degree()) != 1 {
            return skip(SkipReason::HypothesisUnmet, format!("[L:K1] = {rel} and [K1:Q] = {} are not coprime", k1.degree()));
        }
        let dk = cache.data_for(&k1)?;
        let dl = cache.data_for(&l)?;
        let po1 = polya_group(&dk, 0)?.subgroup;
        let pol = polya_group(&dl, 0)?.subgroup;
        let img = eps_map(&emb, &dk, &dl)?.image(dl.group(), &po1, dk.group())?;
        let injective = img.order() == po1.order();
        let inside = img.is_subgroup_of(&pol);
        let w = json!({ "po_k1": inv(&po1), "image": inv(&img), "po_l": inv(&pol), "injective": injective, "contained": inside });
        Ok((Verdict::from_bool(injective && inside), w))
    })
}

/// |Po(L)| = ∏ e_p / |H¹| for cyclic L/Q, together with the corollary formulas;
/// for non-cyclic L the inferred |H¹| is reported as a skip.
pub fn check_order_formula(cache: &FieldCache, desc: &FieldDescriptor) -> CheckResult {
    timed(CheckId::OrderFormula, desc.to_string(), || {
        let dl = cache.data(desc)?;
        let l = &dl.field;
        if let Some(r) = not_galois(l) {
            return r;
        }
        let po = polya_group(&dl, cache.budget.ostrowski_bound().min(50))?;
        let prod = ramification_product(l)?;
        let mut w = json!({
            "field": desc.to_string(),
            "class_group": dl.group().invariants_u64(),
            "certified": dl.is_certified(),
            "polya": po.invariants(),
            "polya_order": po.order(),
            "ramification_product": prod,
            "unramified_consistent": po.unramified_consistent,
        });
        if !po.unramified_consistent {
            return Ok((Verdict::Fail, w));
        }
        if crate::polya::require_cyclic(l).is_err() {
            w["inferred_h1"] = json!(format!("{}", num_rational::Ratio::new(prod, po.order())));
            let detail = format!("not cyclic; inferred |H1| = {}", w["inferred_h1"].as_str().unwrap_or(""));
            return Ok((Verdict::skip(SkipReason::HypothesisUnmet, detail), w));
        }
        let h1 = h1_order_cyclic_over_q(&dl)?;
        w["h1"] = json!(h1);
        let mut ok = h1 * po.order() == prod;
        let q = cache.data_for(&NumberField::rationals())?;
        let ext = RelativeExtension::over_q(l)?;
        match predicted_order_cyclic(&ext, &q, &dl)? {
            Prediction::Value(v) => {
                w["predicted_cyclic"] = json!(v);
                ok &= v == po.order();
            }
            Prediction::Unavailable(why) => return Ok((Verdict::skip(SkipReason::Resource, why), w)),
        }
        if crate::arith::is_prime(l.degree() as u64) {
            let pc = predicted_order_prime_cyclic(&ext, &q, &dl)?;
            w["predicted_prime_cyclic"] = serde_json::to_value(&pc).unwrap_or(Value::Null);
            ok &= pc.order_with_infinite == Some(po.order());
            if ext.infinite_ramification == 0 {
                ok &= pc.order_finite_only == Some(po.order());
            }
        }
        Ok((Verdict::from_bool(ok), w))
    })
}

fn relative_setup(cache: &FieldCache, base: &FieldDescriptor, other: &FieldDescriptor) -> Result<(RelativeExtension, std::sync::Arc<FieldData>, std::sync::Arc<FieldData>)> {
    let pair = cache.pair(base, other)?;
    let ext = RelativeExtension::new(&pair.k1, &pair.l, pair.emb1.clone())?;
    if !ext.galois {
        return Err(Error::Unsupported("L/K is not Galois".into()));
    }
    Ok((ext, cache.data_for(&pair.k1)?, cache.data_for(&pair.l)?))
}

/// |Po(L/K)| = h_K ∏ e_𝔭 / |H¹| for L = K·K' over K, with |H¹| from the cyclic
/// formula.
pub fn check_relative_order_formula(cache: &FieldCache, base: &FieldDescriptor, other: &FieldDescriptor) -> CheckResult {
    timed(CheckId::OrderFormula, format!("{base} * {other} / {base}"), || {
        let (ext, dk, dl) = relative_setup(cache, base, other)?;
        let rel = relative_polya_group(&ext, &dk, &dl)?;
        let e_fin: u64 = ext.ramified.iter().map(|r| r.e as u64).product();
        let inferred = num_rational::Ratio::new(dk.class_number() * e_fin, rel.order());
        let mut w = json!({
            "degree": ext.degree,
            "h_k": dk.class_number(),
            "ramified": ext.ramified.iter().map(|r| json!({ "p": r.prime.p, "e": r.e, "f": r.f })).collect::<Vec<_>>(),
            "infinite_ramification": ext.infinite_ramification,
            "relative_polya": rel.invariants(),
            "inferred_h1": inferred.to_string(),
        });
        if !ext.is_cyclic(&dl.field) {
            return Ok((Verdict::skip(SkipReason::HypothesisUnmet, format!("not cyclic; inferred |H1| = {inferred}")), w));
        }
        match predicted_order_cyclic(&ext, &dk, &dl)? {
            Prediction::Value(v) => {
                w["predicted"] = json!(v);
                Ok((Verdict::from_bool(v == rel.order()), w))
            }
            Prediction::Unavailable(why) => Ok((Verdict::skip(SkipReason::Resource, why), w)),
        }
    })
}

/// Po(L) ⊆ Po(L/K); also reports whether L/K is a Galois Pólya extension.
pub fn check_relative_containment(cache: &FieldCache, base: &FieldDescriptor, other: &FieldDescriptor) -> CheckResult {
    timed(CheckId::RelativeContainment, format!("{base} * {other} / {base}"), || {
        let (ext, dk, dl) = relative_setup(cache, base, other)?;
        if let Some(r) = not_galois(&dl.field) {
            return r;
        }
        let pol = polya_group(&dl, 0)?;
        let rel = relative_polya_group(&ext, &dk, &dl)?;
        let contained = pol.subgroup.is_subgroup_of(&rel.subgroup);
        let gp = is_galois_polya_extension(&ext, &dk, &dl)?;
        let w = json!({ "po_l": pol.invariants(), "relative_polya": rel.invariants(), "contained": contained, "galois_polya_extension": gp });
        Ok((Verdict::from_bool(contained), w))
    })
}

/// ν∘ε = [L:K] on Cl(K); ε(Po(K)) ⊆ Po(L) and ν(Po(L)) ⊆ Po(K) when K is Galois.
pub fn check_norm_extension(cache: &FieldCache, base: &FieldDescriptor, other: &FieldDescriptor) -> CheckResult {
    timed(CheckId::NormExtension, format!("{base} * {other} / {base}"), || {
        let pair = cache.pair(base, other)?;
        let dk = cache.data_for(&pair.k1)?;
        let dl = cache.data_for(&pair.l)?;
        let eps = eps_map(&pair.emb1, &dk, &dl)?;
        let nu = nu_map(&pair.emb1, &dk, &dl)?;
        let deg = BigInt::from(pair.emb1.relative_degree());
        let mut ok = true;
        for i in 0..dk.group().num_generators() {
            let x = dk.group().generator(i);
            let back = nu.apply(dk.group(), &eps.apply(dl.group(), &x)?)?;
            ok &= dk.group().elements_equal(&back, &x.scale(&deg))?;
        }
        let mut w = json!({ "degree": pair.emb1.relative_degree(), "nu_eps_is_power": ok });
        if pair.k1.is_galois() && pair.l.is_galois() {
            let pok = polya_group(&dk, 0)?.subgroup;
            let pol = polya_group(&dl, 0)?.subgroup;
            let up = eps.image(dl.group(), &pok, dk.group())?.is_subgroup_of(&pol);
            let down = nu.image(dk.group(), &pol, dl.group())?.is_subgroup_of(&pok);
            w["eps_po"] = json!(up);
            w["nu_po"] = json!(down);
            ok &= up && down;
        }
        Ok((Verdict::from_bool(ok), w))
    })
}
