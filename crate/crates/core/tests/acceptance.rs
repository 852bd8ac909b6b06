//! One PASS/FAIL line per acceptance criterion.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tkc_core::families::{example, family_kn, family_ras, family_torus, ExampleName, Fixture};
use tkc_core::invariants::{affine_data, odd_writhe, q_delta_class, q_polynomial, BarParity, DeltaClass};
use tkc_core::moves::{apply, enumerate_moves, MoveKind};
use tkc_core::poly::Poly2;
use tkc_core::search::{certify, unknotting_search, Certificate, CountedSet, SearchConfig, SearchOutcome, SearchTrace};
use tkc_core::{parse_gauss_code, TwistedGaussCode};

type Outcome = Result<String, String>;

fn sq(a: u32, b: u32) -> Poly2 {
    Poly2::binomial_product(a, b, a, b)
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn closed_form_kn() -> Outcome {
    for n in 1..=5u32 {
        let q = q_polynomial(&family_kn(n).unwrap().code);
        let want = sq(1, 1) + sq(0, 1) + sq(1, 0).scale(2 * i64::from(n) - 1);
        check(q == want, || format!("n={n}: got {q}"))?;
    }
    Ok("n = 1..5".into())
}

fn closed_form_torus() -> Outcome {
    for n in 1..=5u32 {
        let k = i64::from(n);
        let q = q_polynomial(&family_torus(n, false).unwrap().code);
        check(q == sq(1, 1).scale(k) + sq(1, 0).scale(k), || format!("unbarred n={n}: got {q}"))?;
        let q = q_polynomial(&family_torus(n, true).unwrap().code);
        check(q == Poly2::binomial_product(1, 1, 1, 0).scale(2 * k), || format!("barred n={n}: got {q}"))?;
    }
    Ok("n = 1..5, both variants".into())
}

fn closed_form_ras() -> Outcome {
    for n in 1..=5u32 {
        let k = i64::from(n);
        let q = q_polynomial(&family_ras(n).unwrap().code);
        check(q == sq(1, 1).scale(k) - sq(1, 0).scale(k), || format!("n={n}: got {q}"))?;
    }
    Ok("n = 1..5".into())
}

fn odd_writhe_families() -> Outcome {
    for n in 1..=5u32 {
        let want = 2 * i64::from(n);
        for f in [family_kn(n), family_torus(n, false), family_torus(n, true)] {
            let f = f.unwrap();
            let j = odd_writhe(&f.code);
            check(j == want, || format!("{} n={n}: J={j}", f.name))?;
        }
    }
    Ok("J = 2n for n = 1..5".into())
}

fn tables() -> Outcome {
    let mut rows = 0;
    for n in [2u32, 3] {
        for f in [family_kn(n), family_torus(n, false), family_torus(n, true), family_ras(n)] {
            let f = f.unwrap();
            for r in &f.expected_table {
                let a = affine_data(&f.code, r.chord).unwrap();
                check((a.rho, a.p_over, a.p_under) == (r.rho, r.p_over, r.p_under), || {
                    format!("{} n={n} {}: got {a:?}", f.name, r.label)
                })?;
                if let Some(ind) = r.ind_over {
                    check(a.ind_over == ind, || format!("{} n={n} {}: ind {}", f.name, r.label, a.ind_over))?;
                }
                rows += 1;
            }
        }
    }
    Ok(format!("{rows} rows"))
}

struct Ledger {
    certificates: Vec<(String, Certificate)>,
    arc_traces: Vec<(String, SearchTrace)>,
}

fn config(set: CountedSet, max: u32) -> SearchConfig {
    let mut c = SearchConfig::new(set, max);
    c.node_cap = 10_000_000;
    c
}

fn arcshift_numbers(ledger: &mut Ledger) -> Outcome {
    let mut detail = Vec::new();
    for n in [1u32, 2] {
        let fixtures: Vec<Fixture> =
            vec![family_kn(n).unwrap(), family_torus(n, false).unwrap(), family_torus(n, true).unwrap()];
        for f in fixtures {
            let t = Instant::now();
            let cert =
                certify(&f.code, &config(CountedSet::ArcShift, n)).map_err(|e| format!("{} n={n}: {e}", f.name))?;
            let a = &cert.arcshift;
            let label = format!("{} n={n}", f.name);
            check(a.exact && a.upper == Some(u64::from(n)), || format!("{label}: {:?}/{:?}", a.lower, a.upper))?;
            let trace = a.trace.clone().unwrap();
            trace.replay(CountedSet::ArcShift).map_err(|e| format!("{label}: replay {e}"))?;
            detail.push(format!("{label} {:.1}s", t.elapsed().as_secs_f64()));
            ledger.arc_traces.push((label.clone(), trace));
            ledger.certificates.push((label, cert));
        }
    }
    Ok(detail.join(", "))
}

fn strict_example(ledger: &mut Ledger) -> Outcome {
    let f = example(ExampleName::StrictIneqFig17);
    let two = unknotting_search(&f.code, &config(CountedSet::Forbidden, 2));
    let trace = two.trace().ok_or_else(|| format!("depth 2: {:?}", two.outcome))?;
    check(trace.counted_used == 2, || format!("used {}", trace.counted_used))?;
    trace.replay(CountedSet::Forbidden).map_err(|e| format!("replay {e}"))?;
    let one = unknotting_search(&f.code, &config(CountedSet::Forbidden, 1));
    check(one.outcome == SearchOutcome::NoSequence, || format!("depth 1: {:?}", one.outcome))?;
    let cert = certify(&f.code, &config(CountedSet::Forbidden, 2)).map_err(|e| e.to_string())?;
    ledger.certificates.push(("fig17".into(), cert));
    Ok(format!("2-move sequence found, depth 1 refuted over {} states", one.nodes))
}

fn free_invariance() -> Outcome {
    let mut applied = 0;
    for (i, code) in common::corpus(1000, 8).enumerate() {
        let j = odd_writhe(&code);
        let q = q_polynomial(&code);
        for m in enumerate_moves(&code, &MoveKind::FREE) {
            let after = apply(&code, &m).map_err(|e| format!("code {i}: {e}"))?;
            check(odd_writhe(&after) == j && q_polynomial(&after) == q, || format!("{m} on {code}"))?;
            applied += 1;
        }
    }
    Ok(format!("1000 codes, {applied} free moves"))
}

fn forbidden_deltas() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let groups: [(&str, &[MoveKind]); 3] = [
        ("F1/F2", &[MoveKind::F1, MoveKind::F2]),
        ("F3/F4", &[MoveKind::F3, MoveKind::F4]),
        ("T4Del", &[MoveKind::T4Del]),
    ];
    for (name, kinds) in groups {
        let mut done = 0;
        let mut seed = 0u64;
        while done < 1000 {
            seed += 1;
            let code = common::corpus(1, seed * 7919 + done).next().unwrap();
            let Some(m) = enumerate_moves(&code, kinds).choose(&mut rng).cloned() else { continue };
            let after = apply(&code, &m).map_err(|e| e.to_string())?;
            let parity = BarParity::of(code.bar_count());
            let class = match (parity, name) {
                (BarParity::Odd, _) => DeltaClass::OddBar,
                (_, "F1/F2") => DeltaClass::F1F2Even,
                (_, "F3/F4") => DeltaClass::F3F4Even,
                _ => DeltaClass::T4Even,
            };
            let v = q_delta_class(&q_polynomial(&code), &q_polynomial(&after), parity);
            check(v.contains(class), || format!("{name}: {m} on {code}"))?;
            done += 1;
        }
    }
    Ok("1000 each of F1/F2, F3/F4, T4Del".into())
}

fn arc_shift_delta_j(ledger: &Ledger) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut done = 0;
    let mut seed = 0u64;
    while done < 1000 {
        seed += 1;
        let code = common::corpus(1, seed).next().unwrap();
        let Some(m) = enumerate_moves(&code, &MoveKind::ARC_SHIFT).choose(&mut rng).cloned() else { continue };
        let after = apply(&code, &m).map_err(|e| e.to_string())?;
        let d = (odd_writhe(&after) - odd_writhe(&code)).abs();
        check(d == 0 || d == 2, || format!("{m} on {code}: |dJ| = {d}"))?;
        done += 1;
    }
    for (label, t) in &ledger.arc_traces {
        let j0 = odd_writhe(&parse_gauss_code(&t.start.text).unwrap());
        check(j0.unsigned_abs() <= 2 * u64::from(t.counted_used), || format!("{label}: |J| = {j0}"))?;
        let mut used = 0u64;
        for s in &t.steps {
            used += u64::from(s.counted);
            let j = odd_writhe(&parse_gauss_code(&s.result.text).unwrap());
            check((j0 - j).unsigned_abs() <= 2 * used, || format!("{label}: J drops too fast at {}", s.mv))?;
        }
    }
    Ok(format!("1000 random arc shifts, {} traces", ledger.arc_traces.len()))
}

fn tripwire(ledger: &mut Ledger) -> Outcome {
    let extra: Vec<(String, TwistedGaussCode)> = vec![
        ("ras n=1".into(), family_ras(1).unwrap().code),
        ("fig11".into(), example(ExampleName::RegionFig11).code),
        ("empty".into(), TwistedGaussCode::empty()),
    ];
    for (label, code) in extra {
        let cert = certify(&code, &config(CountedSet::Forbidden, 2)).map_err(|e| format!("{label}: {e}"))?;
        ledger.certificates.push((label, cert));
    }
    for code in common::corpus(40, 11) {
        let cert = certify(&code, &config(CountedSet::Forbidden, 1)).map_err(|e| format!("{code}: {e}"))?;
        ledger.certificates.push((code.to_string(), cert));
    }
    for (label, c) in &ledger.certificates {
        for (name, b) in [("arcshift", &c.arcshift), ("forbidden", &c.forbidden)] {
            if let Some(u) = b.upper {
                check(u >= b.lower, || format!("{label} {name}: {u} < {}", b.lower))?;
            }
        }
        if let (Some(r), Some(f)) = (c.region_arcshift.upper, c.forbidden.upper) {
            check(r <= f, || format!("{label}: region {r} > forbidden {f}"))?;
        }
    }
    Ok(format!("{} certificates", ledger.certificates.len()))
}

fn oracle() -> Outcome {
    let codes = common::all_codes(2, 2);
    for c in &codes {
        let a = q_polynomial(c);
        let b = common::literal_q(c);
        check(a == b, || format!("{c}: {a} vs {b}"))?;
    }
    Ok(format!("{} codes", codes.len()))
}

fn main() -> ExitCode {
    let mut ledger = Ledger { certificates: Vec::new(), arc_traces: Vec::new() };
    let mut failed = 0;
    let mut report = |id: u32, name: &str, r: Outcome| match &r {
        Ok(d) => println!("PASS {id:>2} {name}: {d}"),
        Err(e) => {
            failed += 1;
            println!("FAIL {id:>2} {name}: {e}")
        }
    };
    report(1, "closed-form Q, K_n family", closed_form_kn());
    report(2, "closed-form Q, torus family", closed_form_torus());
    report(3, "closed-form Q, region arc shift family", closed_form_ras());
    report(4, "odd writhe", odd_writhe_families());
    report(5, "table reproduction", tables());
    report(6, "certified arc shift numbers", arcshift_numbers(&mut ledger));
    report(7, "strict-inequality example", strict_example(&mut ledger));
    report(8, "free-move invariance", free_invariance());
    report(9, "forbidden-move Q deltas", forbidden_deltas());
    report(10, "arc shift odd writhe change", arc_shift_delta_j(&ledger));
    report(11, "bound-consistency tripwire", tripwire(&mut ledger));
    report(12, "literal walker oracle", oracle());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
