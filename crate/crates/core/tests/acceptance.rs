//! Acceptance criteria, one PASS/FAIL line each. Runs as a plain binary so the
//! lines show up in `cargo test` output.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kgdf_core::corpus::{default_corpus, CorpusEntry};
use kgdf_core::diagram::BasedKnotDiagram;
use kgdf_core::gdf::{self, cached_table, enumerate_arrow_diagrams, mixed_coefficients, pair, Gdf};
use kgdf_core::poly::{rat, ratio, LaurentPoly2, Rational};
use kgdf_core::skein;
use kgdf_core::state::{self, JonesModel};
use kgdf_core::verify::{self, Limits};
use num_traits::{One, Signed, Zero};

type Outcome = Result<(), String>;

fn poly(terms: &[(i64, i32, i32)]) -> LaurentPoly2 {
    terms.iter().map(|&(c, a, z)| LaurentPoly2::monomial(c, a, z)).sum()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn trefoil() -> BasedKnotDiagram {
    "O1- U2- O3- U1- O2- U3-".parse().unwrap()
}

fn knot<'a>(corpus: &'a [CorpusEntry], name: &str) -> &'a CorpusEntry {
    corpus.iter().find(|e| e.name == name).unwrap_or_else(|| panic!("corpus lacks {name}"))
}

fn suite_outcome(report: verify::Report) -> Outcome {
    let fails: Vec<String> = report.failures().map(|c| c.to_string()).collect();
    ensure(fails.is_empty(), || fails.join("; "))
}

fn trefoil_regression(_: &[CorpusEntry]) -> Outcome {
    let g = trefoil();
    let d = poly(&[(2, -1, 0), (-1, 1, 0), (1, 2, 1), (-1, 0, 1), (1, -1, 2), (-1, 1, 2)]);
    let dk = poly(&[(2, 2, 0), (-1, 4, 0), (1, 5, 1), (-1, 3, 1), (1, 2, 2), (-1, 4, 2)]);
    let got_d = skein::dubrovnik_d(&g);
    let got_dk = skein::dubrovnik_dk(&g);
    ensure(got_d == d, || format!("D = {got_d}"))?;
    ensure(got_dk == dk, || format!("DK = {got_dk}"))
}

fn state_model_equivalence(corpus: &[CorpusEntry]) -> Outcome {
    for e in corpus.iter().filter(|e| e.diagram.arrow_count() <= 7) {
        let dk = skein::dubrovnik_dk(&e.diagram);
        let mut g = e.diagram.clone();
        let turns = if g.arrow_count() <= 5 { g.endpoints().len().max(1) } else { 1 };
        for r in 0..turns {
            let s = state::dk_state_sum(&g);
            ensure(s == dk, || format!("{} rotation {r}: state sum {s} vs {dk}", e.name))?;
            g = g.move_base_point();
        }
    }
    Ok(())
}

fn normalization(corpus: &[CorpusEntry]) -> Outcome {
    for e in corpus {
        let dk = skein::dubrovnik_dk(&e.diagram);
        ensure(dk.evaluate_a1() == LaurentPoly2::one(), || format!("{}: DK(1,z) = {}", e.name, dk.evaluate_a1()))?;
        let p = skein::p_table(&e.diagram, 4).map_err(|x| x.to_string())?;
        ensure(p[&(0, 0)] == rat(1), || format!("{}: p0_0 = {}", e.name, p[&(0, 0)]))?;
        for n in 1..=4 {
            ensure(p[&(0, n)].is_zero(), || format!("{}: p0_{n} = {}", e.name, p[&(0, n)]))?;
        }
    }
    Ok(())
}

fn representation(corpus: &[CorpusEntry]) -> Outcome {
    let table = cached_table(4).map_err(|x| x.to_string())?;
    let small = ["unknot", "left-trefoil", "right-trefoil"];
    for e in corpus {
        let order = if small.contains(&e.name.as_str()) { 4 } else { 3 };
        let p = skein::p_table(&e.diagram, order).map_err(|x| x.to_string())?;
        let direct = gdf::eval_direct_table(&e.diagram, order).map_err(|x| x.to_string())?;
        for (kl, want) in e.expected_p() {
            ensure(p.get(&kl) == Some(&want), || format!("{} p{kl:?}: oracle {want}, skein {:?}", e.name, p.get(&kl)))?;
        }
        for k in 0..=order {
            for l in 0..=order - k {
                let paired = pair(&table.a_kl(k, l), &e.diagram);
                let want = &p[&(k, l)];
                ensure(&paired == want && &direct[&(k, l)] == want, || {
                    format!("{} p{k}_{l}: skein {want}, pair {paired}, direct {}", e.name, direct[&(k, l)])
                })?;
            }
        }
    }
    for name in small {
        ensure(corpus.iter().any(|e| e.name == name), || format!("corpus lacks {name}"))?;
    }
    Ok(())
}

fn signs(v: &[Rational]) -> (usize, usize) {
    let pos = v.iter().filter(|c| c.is_positive()).count();
    (pos, v.len() - pos)
}

fn reference_gdf_data(_: &[CorpusEntry]) -> Outcome {
    let table = cached_table(3).map_err(|x| x.to_string())?;
    let a20 = gdf::unsigned_collapse(&table.a_kl(2, 0)).map_err(|x| x.to_string())?;
    ensure(a20.coefficients() == vec![rat(-4)], || format!("A2,0 collapses to {a20}"))?;
    let a11 = gdf::unsigned_collapse(&table.a_kl(1, 1)).map_err(|x| x.to_string())?;
    ensure(a11.coefficients() == vec![rat(2)], || format!("A1,1 collapses to {a11}"))?;
    for n in 1..=3 {
        ensure(table.a_kl(0, n).is_empty(), || format!("A0,{n} is not zero"))?;
    }
    for (k, l, scale, terms, pos, neg) in [(3, 0, ratio(1, 8), 9, 7, 2), (1, 2, ratio(1, 2), 15, 10, 5), (2, 1, ratio(-1, 4), 14, 12, 2)] {
        let c = mixed_coefficients(&table.a_kl(k, l).scale(&scale)).map_err(|x| x.to_string())?;
        let unit = c.iter().all(|x| x.abs() == Rational::one());
        ensure(c.len() == terms && signs(&c) == (pos, neg) && unit, || {
            format!("A{k},{l}: {} terms, signs {:?}", c.len(), signs(&c))
        })?;
    }
    Ok(())
}

/// Whether some arrow has head and foot adjacent with nothing between them.
fn has_isolated_arrow(a: &BasedKnotDiagram) -> bool {
    a.endpoints().windows(2).any(|w| w[0].arrow == w[1].arrow)
}

fn isolated_arrow(_: &[CorpusEntry]) -> Outcome {
    let mut checked = 0;
    for m in 1..=4 {
        for a in enumerate_arrow_diagrams(m).iter().filter(|a| has_isolated_arrow(a)) {
            let w = state::w_arrow(a);
            ensure(w.is_zero(), || format!("W = {w} for {}", a.canonical_key()))?;
            checked += 1;
        }
    }
    ensure(checked > 0, || "no diagrams checked".into())
}

fn order3_relation(corpus: &[CorpusEntry]) -> Outcome {
    for e in corpus {
        let p = skein::p_table(&e.diagram, 3).map_err(|x| x.to_string())?;
        let terms = [ratio(1, 2) * &p[&(1, 2)], ratio(1, 4) * &p[&(2, 1)], ratio(1, 8) * &p[&(3, 0)]];
        let sum: Rational = terms.iter().sum();
        ensure(sum.is_zero(), || format!("{}: relation gives {sum}", e.name))?;
        if e.name == "left-trefoil" {
            ensure(terms == [rat(-1), rat(2), rat(-1)], || format!("trefoil terms {terms:?}"))?;
        }
    }
    knot(corpus, "left-trefoil");
    Ok(())
}

fn homfly_degree4(corpus: &[CorpusEntry]) -> Outcome {
    for e in corpus {
        let h = skein::h_table(&e.diagram, 4).map_err(|x| x.to_string())?;
        let lin = rat(48) * &h[&(0, 4)] + rat(12) * &h[&(2, 2)] + rat(3) * &h[&(4, 0)] + rat(4) * &h[&(0, 2)];
        ensure(h[&(3, 1)].is_zero() && h[&(1, 3)].is_zero() && lin.is_zero(), || {
            format!("{}: H3,1={} H1,3={} relation={lin}", e.name, h[&(3, 1)], h[&(1, 3)])
        })?;
    }
    Ok(())
}

fn jones_cross_model(corpus: &[CorpusEntry]) -> Outcome {
    let table = cached_table(3).map_err(|x| x.to_string())?;
    let ah: Vec<Gdf> = (0..=3).map(|k| table.a_jones(JonesModel::Homfly, k)).collect();
    let adk: Vec<Gdf> = (0..=3).map(|k| table.a_jones(JonesModel::Kauffman, k)).collect();
    for e in corpus {
        let jd = skein::jones_from_dk(&e.diagram).map_err(|x| x.to_string())?;
        let jh = skein::jones_from_homfly(&e.diagram).map_err(|x| x.to_string())?;
        ensure(jd == jh, || format!("{}: J via DK {jd}, via HOMFLY {jh}", e.name))?;
        let c = skein::jones_series(&jd, 3).map_err(|x| x.to_string())?;
        for k in 2..=3 {
            let (x, y) = (pair(&ah[k], &e.diagram), pair(&adk[k], &e.diagram));
            ensure(x == c.coeff(k as u32) && y == c.coeff(k as u32), || {
                format!("{}: c{k}={} A^H {x} A^DK {y}", e.name, c.coeff(k as u32))
            })?;
        }
    }
    ensure(ah[2] != adk[2], || "A2^H equals A2^DK".into())?;
    let h2 = mixed_coefficients(&ah[2]).map_err(|x| x.to_string())?;
    let dk2 = mixed_coefficients(&adk[2]).map_err(|x| x.to_string())?;
    ensure(h2 == vec![rat(-48)], || format!("A2^H coefficients {h2:?}"))?;
    ensure(dk2 == vec![rat(-36), rat(-12)], || format!("A2^DK coefficients {dk2:?}"))?;
    let mut printed: Vec<Rational> = [
        72, -72, -72, -72, -72, -48, -24, 216, -216, -216, -216, -216, -264, -192, -96, -96, -48, -24, -48, -24, 48,
        -24, -72, 192, -240, -96,
    ]
    .iter()
    .map(|&c| rat(c))
    .collect();
    printed.sort();
    let dk3 = mixed_coefficients(&adk[3]).map_err(|x| x.to_string())?;
    ensure(dk3 == printed, || format!("A3^DK coefficients {:?}", dk3.iter().map(|c| c.to_string()).collect::<Vec<_>>()))
}

fn vassiliev(corpus: &[CorpusEntry]) -> Outcome {
    let limits = Limits::default();
    suite_outcome(verify::vassiliev_suite(corpus, &limits).map_err(|x| x.to_string())?)
}

fn linking(corpus: &[CorpusEntry]) -> Outcome {
    for e in corpus {
        let (a, b) = verify::linking_counts(&e.diagram);
        ensure(a == b, || format!("{}: linking counts {a} vs {b}", e.name))?;
    }
    let report = verify::identities_suite(corpus, &Limits::default()).map_err(|x| x.to_string())?;
    let deg2: Vec<_> = report.checks.into_iter().filter(|c| c.name == "deg2-diagrams").collect();
    ensure(deg2.len() == corpus.len(), || "degree-2 checks missing".into())?;
    suite_outcome(verify::Report { checks: deg2 })
}

type Criterion = (u32, &'static str, u64, fn(&[CorpusEntry]) -> Outcome);

fn main() -> ExitCode {
    let corpus = default_corpus();
    let criteria: [Criterion; 11] = [
        (1, "trefoil D and DK regression", 1, trefoil_regression),
        (2, "state sum equals skein DK (corpus, rotations)", 30, state_model_equivalence),
        (3, "DK(1,z)=1, p0_0=1, p0_n=0", 5, normalization),
        (4, "direct = paired A_kl = skein p_kl", 300, representation),
        (5, "A2,0, A1,1, A0,n and order-3 displays", 120, reference_gdf_data),
        (6, "isolated arrow gives W=0 (<=4 arrows)", 120, isolated_arrow),
        (7, "order-3 relation, trefoil -1+2-1", 10, order3_relation),
        (8, "HOMFLY degree-4 relations", 30, homfly_degree4),
        (9, "Jones cross-model and A_k^H, A_k^DK data", 300, jones_cross_model),
        (10, "Vassiliev finite differences", 300, vassiliev),
        (11, "linking-number identity and degree-2 pairings", 10, linking),
    ];
    let mut failed = 0;
    for (n, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run(&corpus);
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= Duration::from_secs(budget), || format!("took {elapsed:.1?}, budget {budget}s"))
        });
        match outcome {
            Ok(()) => println!("PASS criterion {n:>2}: {name} ({elapsed:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {n:>2}: {name} ({elapsed:.2?}): {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
