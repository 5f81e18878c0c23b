//! Acceptance suite: one PASS/FAIL line per criterion. Every comparison is
//! exact equality on rationals or strings.

use std::process::Command;
use std::time::Instant;

use hk4_cli::scenario::{self, Scenario};
use hk4_core::classifier::classify;
use hk4_core::exact::{integer_valued_on, RatPoly};
use hk4_core::fujiki::{fujiki4_pairing, fujiki_degree};
use hk4_core::h4::{h4_pair, H4Class};
use hk4_core::{NSClass, QuadLattice, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn hk4(args: &[&str]) -> Result<(i32, String), String> {
    let o = Command::new(env!("CARGO_BIN_EXE_hk4"))
        .args(args)
        .output()
        .map_err(|e| format!("spawn failed: {e}"))?;
    let code = o.status.code().unwrap_or(-1);
    Ok((code, String::from_utf8_lossy(&o.stdout).into_owned()))
}

fn json_of(args: &[&str]) -> Result<(i32, Value), String> {
    let mut full = args.to_vec();
    full.extend(["--json", "-"]);
    let (code, out) = hk4(&full)?;
    let v = serde_json::from_str(&out).map_err(|e| format!("bad JSON from {args:?}: {e}"))?;
    Ok((code, v))
}

fn check_values(name: &str) -> Result<(i32, Value, Value), String> {
    let (code, v) = json_of(&["verify", name])?;
    let c = &v["checks"][name];
    Ok((code, c["values"].clone(), c["status"].clone()))
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn eq(got: &Value, want: Value, what: &str) -> Outcome {
    ensure(*got == want, || format!("{what}: expected {want}, got {got}"))
}

fn c1_classify_a1() -> Outcome {
    let (code, text) = hk4(&["classify", "--a", "1"])?;
    eq(&json!(code), json!(0), "exit code")?;
    for needle in [
        "A_X = 25/32, gamma = 0",
        "q(l,m) = 1, q(m) = 0, form EVEN, c_X = 3, P_RR(T) = binom(T/2 + 3, 2)",
    ] {
        ensure(text.contains(needle), || format!("missing `{needle}`"))?;
    }
    let (_, v) = json_of(&["classify", "--a", "1"])?;
    let sols = v["solutions"].as_array().ok_or("no solutions")?;
    eq(&json!(sols.len()), json!(1), "solution count")?;
    eq(&sols[0]["q_lm_options"][0]["rr"]["base"], json!(["3", "5/4", "1/8"]), "P_RR coefficients")?;
    let killed = v["trace"].as_array().ok_or("no trace")?.iter().any(|t| {
        t["candidate"].as_str().is_some_and(|c| c.starts_with("A_X = 8/9"))
            && t["constraint"] == "c_integral"
    });
    ensure(killed, || "A_X = 8/9 not killed by 4A_X - b^2/2 in Z".into())?;
    ensure(text.contains("31/72 is not an integer"), || "8/9 residue missing".into())
}

fn c2_classify_others() -> Outcome {
    for k in ["2", "5", "6", "7", "8"] {
        let (_, v) = json_of(&["classify", "--a", k])?;
        eq(&v["verdict"], json!("EMPTY"), &format!("a = {k}"))?;
    }
    let (_, v) = json_of(&["classify", "--a", "3"])?;
    let s = &v["solutions"];
    eq(&json!(s.as_array().map(Vec::len)), json!(1), "a = 3 solution count")?;
    let o = &s[0]["q_lm_options"];
    eq(&json!(o.as_array().map(Vec::len)), json!(1), "a = 3 option count")?;
    eq(&o[0]["q_lm"], json!(1), "a = 3 q(l,m)")?;
    eq(&o[0]["c_x"], json!("9"), "a = 3 c_X")?;
    // 3 binom(T/2 + 2, 2) = 3 + 9T/4 + 3T^2/8
    eq(&o[0]["rr"]["base"], json!(["3", "9/4", "3/8"]), "a = 3 P_RR")?;
    let betti: Vec<(u64, u64, u64)> = s[0]["betti_options"]
        .as_array()
        .ok_or("no betti")?
        .iter()
        .map(|b| (b["b2"].as_u64().unwrap(), b["b3"].as_u64().unwrap(), b["b4"].as_u64().unwrap()))
        .collect();
    eq(&json!(betti), json!([[7, 8, 108], [6, 4, 102], [5, 0, 96]]), "a = 3 Betti options")?;
    let (_, text) = hk4(&["classify", "--a", "3"])?;
    ensure(text.contains("P_RR(T) = 3*binom(T/2 + 2, 2)"), || "a = 3 binomial form".into())?;

    let (_, v) = json_of(&["classify", "--a", "4"])?;
    let mut seen = Vec::new();
    for s in v["solutions"].as_array().ok_or("no a = 4 solutions")? {
        for o in s["q_lm_options"].as_array().unwrap() {
            seen.push((s["gamma"].as_str().unwrap().to_string(), o["q_lm"].as_i64().unwrap(), o["c_x"].as_str().unwrap().to_string()));
        }
    }
    for gamma in ["0", "1"] {
        for (q, c) in [(2, "3"), (1, "12")] {
            ensure(seen.contains(&(gamma.to_string(), q, c.to_string())), || {
                format!("a = 4 missing gamma = {gamma}, q(l,m) = {q}, c_X = {c}")
            })?;
        }
    }
    let (_, text) = hk4(&["classify", "--a", "4"])?;
    ensure(text.contains("b is odd"), || "a = 4 trace lacks the `b is odd` constraint".into())
}

fn c3_plane() -> Outcome {
    let (code, v, _) = check_values("nefcone-plane")?;
    eq(&json!(code), json!(0), "exit code")?;
    let coeffs: Vec<Rational> = v["eliminated"]
        .as_array()
        .ok_or("no eliminated polynomial")?
        .iter()
        .map(|c| c.as_str().unwrap().parse().unwrap())
        .collect();
    let p = RatPoly::new(coeffs);
    let target = RatPoly::new(vec![Rational::integer(-525), Rational::integer(20), Rational::integer(92)]);
    let scale = p.leading() / target.leading();
    ensure(!scale.is_zero() && p == target.scale(&scale), || format!("eliminated {p} is not a multiple of 92x^2 + 20x - 525"))?;
    eq(&v["resultant_agrees"], json!(true), "resultant cross-check")?;
    let mut roots: Vec<String> = serde_json::from_value(v["roots"].clone()).map_err(|e| e.to_string())?;
    roots.sort();
    eq(&json!(roots), json!(["-5/2", "105/46"]), "roots")?;
    for r in &roots {
        let x: Rational = r.parse().unwrap();
        ensure(target.eval(&x).is_zero(), || format!("{r} is not a root"))?;
    }
    eq(&v["integer_roots"], json!([]), "integer roots")
}

fn c4_surface() -> Outcome {
    let (_, v, status) = check_values("contract-surface")?;
    eq(&status, json!("UNSAT-as-expected"), "status")?;
    let cases = v["cases"].as_array().ok_or("no cases")?;
    eq(&json!(cases.len()), json!(4), "case count")?;
    for (i, c) in cases.iter().enumerate() {
        let t = i as i64 + 1;
        eq(&c["t"], json!(t), "t")?;
        eq(&c["verdict"], json!("UNSAT"), &format!("t = {t}"))?;
        let w: Rational = c["forced_w"].as_str().ok_or("no w")?.parse().unwrap();
        ensure(&w * 25 == Rational::integer(t), || format!("t = {t}: 25w = {}", &w * 25))?;
        ensure(!(&w * 5).is_integer() && c["five_w_integral"] == json!(false), || format!("t = {t}: 5w integral"))?;
    }
    let p = &v["probe"];
    eq(&p["t"], json!(5), "probe t")?;
    eq(&p["forced_w"], json!("1/5"), "probe w")?;
    eq(&p["five_w_integral"], json!(true), "probe 5w")?;
    eq(&p["verdict"], json!("SAT"), "probe verdict")
}

fn c5_sigma() -> Outcome {
    let (_, v, status) = check_values("sigma-split")?;
    eq(&status, json!("UNSAT-as-expected"), "status")?;
    eq(&v["verdict"], json!("UNSAT"), "verdict")?;
    eq(&v["kill_paths"], json!(["integrality", "witness"]), "kill paths")?;
    // 1/2 ± 525w^2 at w = 0 is 1/2
    eq(&v["w_zero_square"], json!("1/2"), "integrality at w = 0")?;
    eq(&v["w_lower_bound"], json!("1/5"), "w lower bound")?;
    eq(&v["w_upper_bound"], json!("1/25"), "witness bound 1 - 25w >= 0")?;
    eq(&v["survivors"], json!([]), "survivors")
}

fn c6_segre() -> Outcome {
    let (_, v, _) = check_values("segre")?;
    let rows = json!([
        [45, -120, 210, -252],
        [-55, 165, -330, 462],
        [66, -220, 495, -792],
        [-78, 286, -715, 1287]
    ]);
    eq(&v["matrix"], rows, "matrix")?;
    ensure(v["determinant"] != json!("0"), || "determinant is zero".into())?;
    eq(&v["nonzero"], json!(true), "nonzero")?;
    eq(&v["rank"], json!(4), "rank")
}

fn c7_chi_ledger() -> Outcome {
    let (_, v, _) = check_values("chi-table")?;
    let e = &v["entries"];
    for (key, want) in [
        ("1,1", "6"),
        ("2,1", "10"),
        ("3,2", "36"),
        ("2,2", "21"),
        ("3,1", "15"),
        ("0,-1", "3"),
    ] {
        eq(&e[key], json!(want), &format!("chi({key})"))?;
    }
    eq(&v["p_rr_minus_2"], json!("1"), "P_RR(-2)")?;
    eq(&v["p_rr_minus_4"], json!("0"), "P_RR(-4)")?;
    let (_, k, _) = check_values("koszul")?;
    eq(&k["ideal_2l2m"], json!(14), "h0 of I(2L+2M)")?;
    eq(&k["restricted_2l2m"], json!(7), "restricted sections")?;
    eq(&k["restriction_rank"], json!(5), "restriction rank")?;
    let (_, c, _) = check_values("castelnuovo")?;
    eq(&c["quadrics_lower_bound"], json!(8), "quadrics")?;
    eq(&c["castelnuovo_max"], json!(3), "Castelnuovo maximum")?;
    eq(&c["contradiction"], json!(true), "8 > 3")
}

fn c8_mukai() -> Outcome {
    let (_, v, _) = check_values("mukai")?;
    eq(&v["vector"], json!([2, 1, 1]), "Mukai vector")?;
    eq(&v["self_pairing"], json!(-2), "self-pairing")?;
    let (_, k, _) = check_values("k3-checks")?;
    eq(&k["chi_o_e"], json!("2"), "chi(E, O_E)")?;
    eq(&k["h_squared"], json!("2"), "h^2")?;
    eq(&k["h_sigma_squared"], json!(2), "H_Sigma^2")
}

fn c9_cones() -> Outcome {
    let (_, v, _) = check_values("cones")?;
    eq(&v["exceptional_set"], json!([[-1, 1], [1, -1]]), "prime exceptional set")?;
    let (_, r, _) = check_values("reflection")?;
    eq(&r["center"], json!([-1, 1]), "center")?;
    eq(&r["image_l"], json!([0, 1]), "image of l")?;
    eq(&r["image_m"], json!([1, 0]), "image of m")?;
    eq(&r["sample_size"], json!(100), "sample size")?;
    eq(&r["q_preserved"], json!(true), "q preserved")
}

fn c10_guan() -> Outcome {
    let (_, v, _) = check_values("guan-gate")?;
    eq(&v["admitting_t"], json!(["1/8"]), "admitting t")?;
    eq(&v["a_x_at_t_1_8"], json!(["25/32"]), "A_X at t = 1/8")
}

fn c11_bounds() -> Outcome {
    let (_, v, _) = check_values("bounds")?;
    eq(&v["fujiki_degree_bound_2_1"], json!("27"), "degree bound")?;
    let list: Vec<u64> = serde_json::from_value(v["squarefree_filter"].clone()).map_err(|e| format!("filter list: {e}"))?;
    for k in [1, 2, 3, 5, 7, 10] {
        ensure(list.contains(&k), || format!("{k} missing from filter"))?;
    }
    ensure(!list.contains(&6), || "6 not excluded".into())?;
    ensure(list.iter().all(|&k| k <= 262), || "element above 262".into())
}

fn perms() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                if a != b && b != c && a != c {
                    out.push([a, b, c, 6 - a - b - c]);
                }
            }
        }
    }
    out
}

fn c12_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce97);
    let lat = QuadLattice::hyperbolic_sum();
    let c_x = Rational::integer(3);
    let ps = perms();
    eq(&json!(ps.len()), json!(24), "permutation count")?;
    for _ in 0..50 {
        let xs: Vec<NSClass> = (0..4).map(|_| NSClass::new((0..4).map(|_| rng.gen_range(-6..=6)).collect())).collect();
        let base = fujiki4_pairing(&c_x, &lat, [&xs[0], &xs[1], &xs[2], &xs[3]]);
        for p in &ps {
            let v = fujiki4_pairing(&c_x, &lat, [&xs[p[0]], &xs[p[1]], &xs[p[2]], &xs[p[3]]]);
            ensure(v == base, || format!("Fujiki pairing not symmetric on {xs:?} under {p:?}"))?;
        }
        let diag = fujiki4_pairing(&c_x, &lat, [&xs[0], &xs[0], &xs[0], &xs[0]]);
        ensure(diag == fujiki_degree(2, &c_x, &Rational::integer(lat.q(&xs[0]))), || "diagonal".into())?;
    }

    let u = QuadLattice::hyperbolic();
    let mut pt = || (rng.gen_range(-5i64..=5), rng.gen_range(-5i64..=5));
    for _ in 0..200 {
        let (a, b, c, d) = (pt(), pt(), pt(), pt());
        let cls = |p: (i64, i64)| NSClass::new(vec![p.0, p.1]);
        let lhs = h4_pair(&H4Class::product(a, b), &H4Class::product(c, d));
        let rhs = fujiki4_pairing(&c_x, &u, [&cls(a), &cls(b), &cls(c), &cls(d)]);
        ensure(lhs == rhs, || format!("h4_pair and Fujiki pairing differ on {a:?} {b:?} {c:?} {d:?}"))?;
    }

    for _ in 0..200 {
        let deg = rng.gen_range(0..=3);
        let coeffs: Vec<Rational> =
            (0..=deg).map(|_| Rational::new(rng.gen_range(-12..=12), rng.gen_range(1..=8))).collect();
        let p = RatPoly::new(coeffs);
        let stride = rng.gen_range(1..=3);
        let offset = rng.gen_range(-3..=3);
        let brute = (-50..=50).all(|j| p.eval(&Rational::integer(offset + stride * j)).is_integer());
        ensure(integer_valued_on(&p, stride, offset) == brute, || format!("integer-valuedness of {p} on {offset} + {stride}j"))?;
    }

    let blocks = |m: Vec<i64>, c_x: i64| -> Result<Value, String> {
        let s = Scenario {
            name: None,
            n: 2,
            gram: vec![vec![0, 1], vec![1, 0]],
            l: vec![1, 0],
            m,
            c_x: Some(Rational::integer(c_x)),
            a_x: None,
            a: None,
            betti_data_path: None,
        };
        let ing = scenario::ingest(&s).map_err(|e| e.to_string())?;
        let r = classify(ing.a).map_err(|e| e.to_string())?;
        Ok(json!({
            "a": ing.a,
            "q_lm": ing.q_lm,
            "gamma": ing.normalization.gamma,
            "m": ing.normalized_m,
            "report": r,
        }))
    };
    for c_x in [3, 9] {
        let base = blocks(vec![0, 1], c_x)?;
        ensure(base["report"]["verdict"] == json!("SOLUTIONS"), || format!("c_X = {c_x}: no solutions"))?;
        for sign in [1i64, -1] {
            for r in -5i64..=5 {
                let got = blocks(vec![r, sign], c_x)?;
                ensure(got == base, || format!("c_X = {c_x}: classification changed for m -> {sign}m + {r}l"))?;
            }
        }
    }
    Ok(())
}

fn main() {
    let start = Instant::now();
    let criteria: [Criterion; 12] = [
        ("classify a = 1 block and the killed 8/9 candidate", c1_classify_a1),
        ("classify a = 2..8 verdicts and blocks", c2_classify_others),
        ("plane certificate quadratic, roots, no integer root", c3_plane),
        ("contracted surface UNSAT for t = 1..4, t = 5 probe survives", c4_surface),
        ("sigma split UNSAT via both kill paths", c5_sigma),
        ("Segre matrix rows, determinant, rank", c6_segre),
        ("Euler characteristic ledger values", c7_chi_ledger),
        ("Mukai vector and K3 checks", c8_mukai),
        ("prime exceptional set and reflection", c9_cones),
        ("Guan gate t = 1/8 unique, A_X = 25/32", c10_guan),
        ("degree bound and squarefree filter", c11_bounds),
        ("property suites", c12_properties),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let ms = t.elapsed().as_secs_f64() * 1e3;
        match r {
            Ok(()) => println!("PASS  {:>2}  {name}  (exact, {ms:.0} ms)", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL  {:>2}  {name}  (exact, {ms:.0} ms): {e}", i + 1);
            }
        }
    }
    let elapsed = start.elapsed();
    println!("{} criteria, {failed} failed, {:.2} s", criteria.len(), elapsed.as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
