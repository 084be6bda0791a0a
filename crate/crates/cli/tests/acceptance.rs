//! One line per acceptance criterion. Sizes and seeds are fixed, and every
//! comparison is exact equality.

mod common;

use std::process::ExitCode;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cdc_core::combinatorics::SetPartitions;
use cdc_core::diffcomb::{check_faa_di_bruno, check_hd_identities, CheckConfig, PowerRuleMutant};
use cdc_core::dsl::{pretty_print, ModelKind, Outcome, Session};
use cdc_core::jets::{jet_compose, jet_primitive, JetModel, PRIMITIVES};
use cdc_core::metric::{check_convergence_of, convergence_profile, DyadicDistance};
use cdc_core::report::AxiomReport;
use cdc_core::suite::Suite;
use cdc_core::taylor::{graded_component, taylor_expand, taylor_monomial};
use cdc_core::{Model, PolyModel, SampleModel, Scalar, Semiring, Status};

const Q: Semiring = Semiring::Rat;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn cfg(seed: u64, samples: usize) -> CheckConfig {
    CheckConfig {
        seed,
        samples,
        ..CheckConfig::default()
    }
}

/// `Ok` when every listed clause holds; otherwise the first offender.
fn holding(reports: &[AxiomReport], wanted: &[&str]) -> Result<usize, String> {
    let mut instances = 0;
    for id in wanted {
        let r = reports
            .iter()
            .find(|r| r.axiom == *id)
            .ok_or_else(|| format!("{id} missing"))?;
        if !r.holds() {
            return Err(format!("{id} {}", r.status));
        }
        instances += r.samples;
    }
    Ok(instances)
}

fn ids(prefix: &str, items: &[&str]) -> Vec<String> {
    items.iter().map(|i| format!("{prefix}.{i}")).collect()
}

fn all_ids(reports: &[AxiomReport]) -> Vec<&str> {
    reports.iter().map(|r| r.axiom.as_str()).collect()
}

fn summarize(parts: Vec<Result<String, String>>) -> Verdict {
    let pass = parts.iter().all(Result::is_ok);
    let text: Vec<String> = parts.into_iter().map(|p| p.unwrap_or_else(|e| format!("FAILED {e}"))).collect();
    verdict(pass, text.join("; "))
}

fn cd_axioms() -> Verdict {
    let clauses: Vec<String> = (1..=7).map(|i| format!("CD.{i}")).collect();
    let clauses: Vec<&str> = clauses.iter().map(String::as_str).collect();
    let mut parts = Vec::new();
    for ring in [Q, Semiring::ZMod(5)] {
        let reports = Suite::Cd.run(&PolyModel::new(ring), &cfg(42, 200)).unwrap();
        parts.push(holding(&reports, &clauses).map(|_| format!("{ring}: 7 axioms x 200 samples hold")));
    }
    let mutant = Suite::Cd.run(&PowerRuleMutant::new(Q), &cfg(42, 200)).unwrap();
    let caught: Vec<&AxiomReport> = mutant.iter().filter(|r| r.status == Status::Violated).collect();
    parts.push(match caught.first() {
        Some(r) if r.witness.is_some() => Ok(format!("mutant caught by {} with witness", r.axiom)),
        _ => Err("mutant not caught".into()),
    });
    summarize(parts)
}

fn faa_di_bruno() -> Verdict {
    let partitions = SetPartitions::new(4).count();
    let report = check_faa_di_bruno(&PolyModel::new(Q), &cfg(42, 100)).unwrap();
    summarize(vec![
        if partitions == 15 {
            Ok("15 partitions of a 4-set".into())
        } else {
            Err(format!("{partitions} partitions of a 4-set"))
        },
        holding(std::slice::from_ref(&report), &["HD.5"]).map(|n| format!("HD.5 holds on {n} (pair, k) instances, k <= 4")),
    ])
}

fn hd_suite() -> Verdict {
    let reports = check_hd_identities(&PolyModel::new(Q), &cfg(42, 50)).unwrap();
    let wanted = ["HD.0", "HD.1", "HD.2", "HD.3", "HD.4", "HD.6", "HD.7", "HD.8"];
    summarize(vec![holding(&reports, &wanted).map(|n| format!("HD.0-4, HD.6-8 hold, {n} instances"))])
}

fn eval_text(ring: Semiring, text: &str) -> String {
    Session::new(ring, ModelKind::Poly).unwrap().eval(text, None).unwrap().to_string()
}

fn cli_line(args: &[&str]) -> String {
    let out = common::cdc().args(args).output().unwrap();
    String::from_utf8(out.stdout).unwrap()
}

fn z2_counterexample() -> Verdict {
    let z2 = Semiring::ZMod(2);
    let cases = [
        (z2, "D(x0^2)", "0"),
        (z2, "DEG(x0^2)", "0"),
        (Q, "DEG(x0^2)", "2"),
    ];
    let mut parts = Vec::new();
    for (ring, expr, want) in cases {
        let lib = eval_text(ring, expr);
        let token = ring.to_string();
        let cli = cli_line(&["eval", "--semiring", &token, expr]);
        let ok = lib == want && cli == format!("{want}\n");
        let line = format!("{token} {expr} prints {cli:?}");
        parts.push(if ok { Ok(line) } else { Err(line) });
    }
    summarize(parts)
}

fn degree_laws() -> Verdict {
    let reports = Suite::Dpoly.run(&PolyModel::new(Q), &cfg(42, 100)).unwrap();
    let wanted = ids("DP", &["iv", "v", "vi", "vii"]);
    let wanted: Vec<&str> = wanted.iter().map(String::as_str).collect();
    summarize(vec![holding(&reports, &wanted).map(|n| format!("DP.iv-vii hold, {n} instances"))])
}

fn taylor_lemma() -> Verdict {
    let reports = Suite::Taylor.run(&PolyModel::new(Q), &cfg(42, 100)).unwrap();
    let ids = all_ids(&reports);
    summarize(vec![holding(&reports, &ids).map(|_| format!("{} items hold for orders <= 4", ids.len()))])
}

fn monomial_oracle() -> Verdict {
    let model = PolyModel::new(Q);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for i in 0..300 {
        let (n, m, d) = (rng.gen_range(1..=3), rng.gen_range(1..=2), rng.gen_range(0..=4));
        let f = model.random_map(&mut rng, n, m, d);
        for k in 0..=f.total_degree() {
            if taylor_monomial(&model, &f, k).unwrap() != graded_component(&f, k) {
                return verdict(false, format!("sample {i}, n = {k}: {f}"));
            }
            checked += 1;
        }
    }
    verdict(true, format!("300 maps, {checked} (map, n) pairs agree"))
}

fn ultrametric() -> Verdict {
    let reports = Suite::Ultrametric.run(&PolyModel::new(Q), &cfg(42, 500)).unwrap();
    summarize(vec![
        holding(&reports, &["UM.i", "UM.ii", "UM.iii"]).map(|_| "UM.i-iii hold on 500 triples".to_string()),
        holding(&reports, &["UM.iv"]).map(|n| format!("UM.iv holds on {n} pairs")),
    ])
}

/// The composition bound fails for inner maps with `f(0) != 0`; the other
/// clauses hold.
fn enrichment() -> (Verdict, bool) {
    let reports = Suite::Enrichment.run(&PolyModel::new(Q), &cfg(42, 200)).unwrap();
    let others = holding(&reports, &["EN.i.pointed", "EN.ii", "EN.iii", "EN.iv"]);
    let en_i = reports.iter().find(|r| r.axiom == "EN.i").unwrap();
    let pass = others.is_ok() && en_i.holds();
    let no_undetermined = reports.iter().all(|r| r.status != Status::Undetermined);
    let documented = others.is_ok()
        && no_undetermined
        && en_i.status == Status::Violated
        && en_i.witness.as_ref().is_some_and(|w| w.lhs == "2^-0");
    let detail = match &en_i.witness {
        Some(w) => format!(
            "EN.i {}: d = {} > {} with {}; EN.i.pointed, EN.ii-iv {}",
            en_i.status,
            w.lhs,
            w.rhs,
            w.inputs.join(", "),
            if others.is_ok() { "hold" } else { "FAILED" }
        ),
        None => format!("EN.i {}", en_i.status),
    };
    (verdict(pass, detail), documented)
}

fn convergence() -> Verdict {
    let reports = Suite::Convergence.run(&PolyModel::new(Q), &cfg(42, 100)).unwrap();
    let ids = all_ids(&reports);
    let mut parts = vec![holding(&reports, &ids).map(|_| "CV.i-iii hold on 100 maps".to_string())];
    let k = 8;
    let jets = JetModel::new(k).unwrap();
    for name in PRIMITIVES {
        let f = jet_primitive(name, k).unwrap();
        let profile = convergence_profile(&jets, &f, k).unwrap();
        let bounded = profile
            .iter()
            .enumerate()
            .take(k)
            .all(|(n, d)| d.leq(DyadicDistance::Exp(n + 1)) == cdc_core::metric::Truth::True);
        let frontier = profile.get(k) == Some(&DyadicDistance::AtMost(k + 1));
        let suite = check_convergence_of(&jets, &f, k).unwrap();
        let ok = bounded && frontier && suite.iter().all(AxiomReport::holds);
        let line = format!("{name}: d(T(n), f) <= 2^-(n+1) for n < 8, <=2^-9 at n = 8");
        parts.push(if ok { Ok(line) } else { Err(format!("{name}: {profile:?}")) });
    }
    summarize(parts)
}

fn finite_reconstruction() -> Verdict {
    let model = PolyModel::new(Q);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..200 {
        let (n, m, d) = (rng.gen_range(1..=3), rng.gen_range(1..=2), rng.gen_range(0..=4));
        let f = model.random_map(&mut rng, n, m, d);
        let pieces: Vec<_> = taylor_expand(&model, &f, f.total_degree())
            .unwrap()
            .into_iter()
            .map(|p| p.map)
            .collect();
        let sum = model.sum(n, m, &pieces).unwrap();
        if sum != f {
            return verdict(false, format!("sample {i}: {f} vs {sum}"));
        }
    }
    verdict(true, "200 maps equal the sum of their Taylor pieces")
}

fn jets_are_a_cdc() -> Verdict {
    let reports = Suite::Cd.run(&JetModel::new(4).unwrap(), &cfg(42, 100)).unwrap();
    let ids = all_ids(&reports);
    let e = jet_primitive("expm1", 8).unwrap();
    let ee = jet_compose(&e, &e).unwrap();
    let want = [(1, 1), (1, 1), (5, 6)];
    let got: Vec<Scalar> = (1..=3).map(|k| ee.coefficient(k)).collect();
    let fixture = got
        .iter()
        .zip(want)
        .all(|(g, (n, d))| *g == Scalar::Rat(BigRational::new(n.into(), d.into())));
    let shown: Vec<String> = got.iter().map(ToString::to_string).collect();
    summarize(vec![
        holding(&reports, &ids).map(|_| "CD.1-7 hold on 100 jets at K = 4".to_string()),
        if fixture {
            Ok(format!("expm1.expm1 = {} + ...", shown.join(", ")))
        } else {
            Err(format!("expm1.expm1 coefficients {shown:?}"))
        },
    ])
}

fn dsl_round_trip() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let rings = [Q, Semiring::Nat, Semiring::ZMod(7)];
    let mut parts = Vec::new();
    let mut bad = None;
    for i in 0..500 {
        let ring = rings[i % 3];
        let model = PolyModel::new(ring);
        let (n, m, d) = (rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(0..=4));
        let f = model.random_map(&mut rng, n, m, d);
        let back = Session::new(ring, ModelKind::Poly)
            .unwrap()
            .eval(&pretty_print(&f), Some(n))
            .unwrap();
        if back != Outcome::Map(f.clone()) {
            bad = Some(format!("{ring} {f}"));
            break;
        }
    }
    parts.push(match bad {
        None => Ok("500 maps round-trip".to_string()),
        Some(f) => Err(f),
    });
    let cases = common::golden_cases().len();
    let mismatched = common::golden_mismatches();
    parts.push(if mismatched.is_empty() {
        Ok(format!("{cases} golden transcripts byte-identical"))
    } else {
        Err(format!("transcripts differ: {mismatched:?}"))
    });
    summarize(parts)
}

fn main() -> ExitCode {
    let mut unexpected = 0;
    let mut line = |n: usize, title: &str, v: Verdict, expected: bool| {
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("{tag} {n:>2} {title}: {}", v.detail);
        if v.pass != expected {
            unexpected += 1;
        }
    };
    line(1, "CD axioms", cd_axioms(), true);
    line(2, "Faa di Bruno", faa_di_bruno(), true);
    line(3, "higher-derivative identities", hd_suite(), true);
    line(4, "Z/2 counterexample", z2_counterexample(), true);
    line(5, "degree laws", degree_laws(), true);
    line(6, "Taylor identity lemma", taylor_lemma(), true);
    line(7, "monomial oracle", monomial_oracle(), true);
    line(8, "ultrametric", ultrametric(), true);
    let (v, documented) = enrichment();
    line(9, "enrichment", v, false);
    line(10, "convergence", convergence(), true);
    line(11, "finite Taylor reconstruction", finite_reconstruction(), true);
    line(12, "jet model is a CDC", jets_are_a_cdc(), true);
    line(13, "DSL round trip and goldens", dsl_round_trip(), true);
    if !documented {
        println!("criterion 9 did not fail in the documented way");
        unexpected += 1;
    }
    if unexpected == 0 {
        println!("acceptance: 12 of 13 pass; criterion 9 fails only on EN.i (non-pointed inner map)");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {unexpected} unexpected outcome(s)");
        ExitCode::FAILURE
    }
}
