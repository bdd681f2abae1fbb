//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! The process exits nonzero only when a criterion's outcome differs from
//! the recorded expectation, so a criterion known to be unattainable is
//! printed as FAIL without breaking the test run.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_rational::BigRational;
use serde_json::Value;
use tarskikit::absorption::{build_absorber, find_avoiding_rotation, first_collision, standard_origin_absorber, CirclePoint};
use tarskikit::actions::choose_representatives;
use tarskikit::actions::corpus::corpus;
use tarskikit::doubling::{orbit_double, stabilizer_certify, strong_form_plan, DerivationCert, NodeKind};
use tarskikit::equideco::finite::{random_bsb_instance, shift_cert};
use tarskikit::equideco::{bsb_combine, EquidecompositionCert, SetView};
use tarskikit::freegroup::{
    group_doubling_certs, verify_doubling_pair, verify_group_doubling, word_set, Letter, PieceLabel, Word,
};
use tarskikit::rotact::{check_on_sphere, evaluate, find_stabilizer, SphereTriple};
use tarskikit_cli::run;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn cli(args: &[&str]) -> (i32, Value, String) {
    let o = run(std::iter::once("tarskikit").chain(args.iter().copied()));
    let v = serde_json::from_str(&o.stdout).unwrap_or(Value::Null);
    (o.code, v, o.stdout)
}

fn criterion_1() -> Outcome {
    let expected = 2 * 3u64.pow(10) - 2;
    let start = Instant::now();
    let (code, v, _) = cli(&["certify-freeness", "--depth", "10"]);
    let secs = start.elapsed().as_secs_f64();
    let r = &v["result"];
    let pass = code == 0
        && r["words_checked"] == expected
        && r["violations"].as_array().is_some_and(Vec::is_empty)
        && r["collisions"].as_array().is_some_and(Vec::is_empty)
        && secs < 30.0;
    outcome(pass, format!("{} words, 0 violations, 0 collisions, {secs:.2} s", r["words_checked"]))
}

fn criterion_2() -> Outcome {
    let phi = evaluate(&Word::letter(Letter::SIGMA));
    let phi_ok = phi == SphereTriple::new(1, 2, 0, 1);
    let ending: Vec<Word> = Letter::ALL
        .iter()
        .filter(|&&l| l != Letter::SIGMA_INV)
        .map(|&l| Word::from_letters([l, Letter::SIGMA]))
        .collect();
    let bs: Vec<String> = ending.iter().map(|w| evaluate(w).b.to_string()).collect();
    let b_ok = ending.len() == 3
        && ending.iter().all(|w| {
            let b = evaluate(w).b;
            b == 2.into() || b == 4.into() || b == (-2).into() || b == (-4).into()
        });
    let (checked, bad) = check_on_sphere(10);
    let sphere_ok = bad.is_none() && checked == 2 * 3u64.pow(10) - 1;
    outcome(
        phi_ok && b_ok && sphere_ok,
        format!("phi(e_x) = {phi}; b for ss, ts, Ts = {}; on-sphere {checked}/{checked}", bs.join(", ")),
    )
}

type WordCert = EquidecompositionCert<Word>;

fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

/// Corrupted variants of the doubling pair, each expected to fail.
fn mutants() -> Vec<(String, WordCert, WordCert)> {
    use PieceLabel::*;
    let (s, t) = group_doubling_certs();
    let mut out = Vec::new();
    let mut push = |name: String, a: WordCert, b: WordCert| out.push((name, a, b));
    for m in ["e", "S", "t", "T", "ss", "st", "Ts"] {
        let mut a = s.clone();
        a.pieces[0].motion = w(m);
        push(format!("sigma piece 0 moved by {m}"), a, t.clone());
        let mut b = t.clone();
        b.pieces[0].motion = w(m.replace('t', "x").replace('s', "t").replace('x', "s").replace('T', "Y").replace('S', "T").replace('Y', "S").as_str());
        push(format!("tau piece 0 moved by the swapped {m}"), s.clone(), b);
    }
    for m in ["s", "S", "t", "T"] {
        let mut a = s.clone();
        a.pieces[1].motion = w(m);
        push(format!("sigma piece 1 moved by {m}"), a, t.clone());
    }
    let mut a = s.clone();
    let m0 = a.pieces[0].motion.clone();
    a.pieces[0].motion = a.pieces[1].motion.clone();
    a.pieces[1].motion = m0;
    push("sigma motions swapped".into(), a, t.clone());
    for i in 0..2 {
        let mut a = s.clone();
        a.pieces.remove(i);
        push(format!("sigma piece {i} dropped"), a, t.clone());
        let mut b = t.clone();
        b.pieces.remove(i);
        push(format!("tau piece {i} dropped"), s.clone(), b);
    }
    let mut a = s.clone();
    a.target = word_set("F2", &PieceLabel::ALL);
    push("sigma target is the whole group".into(), a, t.clone());
    let mut a = s.clone();
    a.target = word_set("W(s)", &[WSigma]);
    push("sigma target shrunk to W(s)".into(), a, t.clone());
    let mut a = s.clone();
    a.pieces[1].set = word_set("W(S)+W(t)", &[WSigmaInv, WTau]);
    push("sigma pieces overlap".into(), a, t.clone());
    let mut a = s.clone();
    a.pieces.push(a.pieces[0].clone());
    push("sigma piece duplicated".into(), a, t.clone());
    let mut a = s.clone();
    a.pieces[0].set = word_set("Q_s without e", &[WSigma, WTau, WTauInv]);
    push("sigma piece misses the identity".into(), a, t.clone());
    push("second certificate equals the first".into(), s.clone(), s.clone());
    let mut a = s.clone();
    a.pieces[0].set = SetView::finite([w("e"), w("s"), w("t")]);
    push("sigma piece truncated to three words".into(), a, t.clone());
    out
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let r = verify_group_doubling(12);
    let base_secs = start.elapsed().as_secs_f64();
    let ms = mutants();
    let mut caught = 0;
    let mut escaped = Vec::new();
    for (name, a, b) in &ms {
        let m = verify_doubling_pair(a, b, 6);
        match &m.failure {
            Some(f) if !m.pass && !f.witness.is_empty() => caught += 1,
            _ => escaped.push(name.clone()),
        }
    }
    let pass = r.pass && ms.len() >= 20 && escaped.is_empty();
    let mut detail = format!(
        "depth 12 {} ({:.1} s, {} words); {caught}/{} mutants fail with a witness",
        if r.pass { "verifies" } else { "fails" },
        base_secs,
        r.counts.get("ball").copied().unwrap_or(0),
        ms.len()
    );
    if !escaped.is_empty() {
        detail.push_str(&format!("; escaped: {}", escaped.join(", ")));
    }
    outcome(pass, detail)
}

fn criterion_4() -> Outcome {
    let literal = SphereTriple::new(0, 2, 1, 1);
    let literal_ok = stabilizer_certify(&literal, 14);
    let witness = find_stabilizer(&literal, 14).map(|w| w.to_string()).unwrap_or_default();
    let mut detail = format!(
        "base [0, 2√2, 1]/3: stabilizer check to 14 {}{}",
        if literal_ok { "passes" } else { "fails" },
        if witness.is_empty() { String::new() } else { format!(", fixed by {witness}") }
    );
    let base = SphereTriple::default_base();
    let start = Instant::now();
    let sub_stab = stabilizer_certify(&base, 14);
    let stab_secs = start.elapsed().as_secs_f64();
    let sub = orbit_double(&base, 7);
    let (distinct, t1, t2) = match &sub {
        Ok(d) => (d.report.counts["distinct"], d.report.counts["first.trimmed"], d.report.counts["second.trimmed"]),
        Err(_) => (0, 0, 0),
    };
    let sub_ok = sub_stab && distinct == 4373 && t1 == 1457 && t2 == 1457;
    detail.push_str(&format!(
        "; default base {base}: stabilizer to 14 {} ({stab_secs:.2} s), {distinct} distinct points, trimmed copies {t1}/{t2}",
        if sub_stab { "passes" } else { "fails" }
    ));
    outcome(literal_ok && sub_ok, detail)
}

/// Chain-decomposition oracle for a finite Schröder–Bernstein instance.
fn chain_oracle(a: &BTreeSet<usize>, g: &BTreeMap<usize, usize>, f: &BTreeMap<usize, usize>) -> BTreeMap<usize, usize> {
    let g_inv: BTreeMap<usize, usize> = g.iter().map(|(&x, &y)| (y, x)).collect();
    let f_inv: BTreeMap<usize, usize> = f.iter().map(|(&x, &y)| (y, x)).collect();
    a.iter()
        .map(|&x| {
            let mut cur = x;
            let mut seen = BTreeSet::new();
            let by_g = loop {
                if !seen.insert(cur) {
                    break true;
                }
                let Some(&y) = f_inv.get(&cur) else { break true };
                let Some(&z) = g_inv.get(&y) else { break false };
                cur = z;
            };
            (x, if by_g { g[&x] } else { f_inv[&x] })
        })
        .collect()
}

fn criterion_5() -> Outcome {
    let mut ok = 0;
    let mut bad = Vec::new();
    for seed in 0..500u64 {
        let size = 1 + (seed as usize * 37) % 64;
        let inst = random_bsb_instance(size, 6, seed);
        let Ok(out) = bsb_combine(&inst.g, &inst.f, 0) else {
            bad.push(seed);
            continue;
        };
        let g: BTreeMap<usize, usize> = inst.g.induced_map(0).unwrap();
        let f: BTreeMap<usize, usize> = inst.f.induced_map(0).unwrap();
        let verified = out.cert.verify(0).pass;
        let matches = out.cert.induced_map(0).ok() == Some(chain_oracle(&inst.a, &g, &f));
        let bounded = out.cert.piece_count() <= inst.g.piece_count() + inst.f.piece_count();
        if verified && matches && bounded {
            ok += 1;
        } else {
            bad.push(seed);
        }
    }
    let shift = bsb_combine(&shift_cert(1), &shift_cert(2), 60);
    let shift_ok = shift.as_ref().is_ok_and(|o| {
        o.cert.verify(60).pass && (0..=60).filter(|x| !o.fixed_point.contains(x)).all(|x| x % 3 == 2)
    });
    outcome(
        bad.is_empty() && shift_ok,
        format!(
            "{ok}/500 random instances verify, match the chain oracle and stay within p+q pieces; shifted naturals {}",
            if shift_ok { "give A∖D = {2, 5, 8, …}" } else { "fail" }
        ),
    )
}

fn criterion_6() -> Outcome {
    let actions = corpus(8);
    let mut failures = Vec::new();
    let mut free_count = 0;
    let mut samples = 0u64;
    for (name, act) in &actions {
        let p = act.orbits();
        let covered: usize = p.blocks.iter().map(BTreeSet::len).sum();
        let union: BTreeSet<usize> = p.blocks.iter().flatten().copied().collect();
        if covered != act.carrier_size() || union.len() != covered {
            failures.push(format!("{name}: orbits"));
        }
        // freeness by brute force, independent of the library predicate
        let free = (1..act.order()).all(|g| g == act.identity() || (0..act.carrier_size()).all(|x| act.act(g, x) != x));
        free_count += free as usize;
        let m = choose_representatives(&p);
        if act.translates_partition(&m).pass != free {
            failures.push(format!("{name}: translates"));
        }
        for g in 0..act.order() {
            for mask in [0b1u32, 0b101, 0b110, 0b1011, 0xff] {
                let b: BTreeSet<usize> = (0..act.order()).filter(|&h| mask >> h & 1 == 1).collect();
                samples += 1;
                if act.star(&act.left_translate(g, &b), &m) != act.act_set(g, &act.star(&b, &m)) {
                    failures.push(format!("{name}: star at g={g}"));
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} actions ({free_count} free); orbit partitions, translate test and {samples} star samples agree{}",
            actions.len(),
            if failures.is_empty() { String::new() } else { format!("; failures: {}", failures.join(", ")) }
        ),
    )
}

fn circle(t: (i64, i64)) -> CirclePoint {
    let t = BigRational::new(t.0.into(), t.1.into());
    let one = BigRational::from_integer(1.into());
    let den = &one + &t * &t;
    CirclePoint::new((&one - &t * &t) / &den, (&t + &t) / &den).unwrap()
}

fn criterion_7() -> Outcome {
    let sets: Vec<Vec<CirclePoint>> = vec![
        vec![circle((0, 1))],
        (0..16).map(|i| circle((i - 5, 3))).collect(),
        (1..=16).map(|i| circle((1, i))).collect(),
        vec![circle((0, 1)), circle((2, 1)), circle((1, 2)), circle((-1, 2))],
    ];
    let mut lines = Vec::new();
    let mut pass = true;
    for pts in &sets {
        match find_avoiding_rotation(pts, 10_000, 16) {
            Ok((tau, rejected)) => {
                let clean = first_collision(&tau, pts, 10_000).is_none();
                let q = build_absorber(&pts.iter().cloned().collect(), tau.clone(), 100);
                let shift = q.as_ref().is_ok_and(|q| q.shift_identity().pass);
                pass &= clean && shift;
                lines.push(format!("|P|={} -> {tau} after {} rejections", pts.len(), rejected.len()));
            }
            Err(e) => {
                pass = false;
                lines.push(format!("|P|={}: {e}", pts.len()));
            }
        }
    }
    let origin = standard_origin_absorber(100, 16);
    let origin_ok = origin.as_ref().is_ok_and(|o| o.verify().pass);
    pass &= origin_ok;
    outcome(
        pass,
        format!(
            "{}; shift identity at N=100 exact; ball origin absorption at N=100 {}",
            lines.join("; "),
            if origin_ok { "exact" } else { "fails" }
        ),
    )
}

fn rules_hold(p: &DerivationCert) -> bool {
    p.validate().pass
        && p.nodes.iter().all(|n| {
            let kids: Vec<_> = n.children.iter().map(|&c| p.nodes[c].bound.clone()).collect();
            match n.kind {
                NodeKind::Compose => n.bound == kids.iter().product(),
                NodeKind::Bsb => n.bound == kids.iter().sum(),
                _ => true,
            }
        })
}

fn criterion_8() -> Outcome {
    let r = |n: i64| BigRational::from_integer(n.into());
    let up = strong_form_plan(&r(1), &r(1), &r(2), &r(2));
    let down = strong_form_plan(&r(2), &r(2), &r(1), &r(1));
    let (Ok(up), Ok(down)) = (up, down) else {
        return outcome(false, "a plan failed to build");
    };
    let again = strong_form_plan(&r(1), &r(1), &r(2), &r(2)).unwrap();
    let (_, _, cli_a) = cli(&["plan-strong-form", "--rq", "1", "--RQ", "1", "--rt", "2", "--RT", "2"]);
    let (_, _, cli_b) = cli(&["plan-strong-form", "--rq", "1", "--RQ", "1", "--rt", "2", "--RT", "2"]);
    let stable = up.to_json() == again.to_json() && cli_a == cli_b;
    let pass = rules_hold(&up) && rules_hold(&down) && stable;
    outcome(
        pass,
        format!(
            "unit→radius 2: {} nodes, bound has {} digits; radius 2→unit: {} nodes; bound rules hold; byte-identical reruns {}",
            up.nodes.len(),
            up.bound().to_string().len(),
            down.nodes.len(),
            if stable { "yes" } else { "no" }
        ),
    )
}

fn main() {
    let criteria: [(u32, fn() -> Outcome, bool); 8] = [
        (1, criterion_1, true),
        (2, criterion_2, true),
        (3, criterion_3, true),
        (4, criterion_4, false),
        (5, criterion_5, true),
        (6, criterion_6, true),
        (7, criterion_7, true),
        (8, criterion_8, true),
    ];
    let mut unexpected = Vec::new();
    for (n, f, expected) in criteria {
        let o = f();
        println!("criterion {n}: {} - {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if o.pass != expected {
            unexpected.push(n);
        }
    }
    println!(
        "note: criterion 4 is expected to FAIL: the requested base point lies on the axis of a conjugate of a generator; \
         the substitute default base meets every numeric target"
    );
    if !unexpected.is_empty() {
        eprintln!("criteria with unexpected outcome: {unexpected:?}");
        std::process::exit(1);
    }
}
