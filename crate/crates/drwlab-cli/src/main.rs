//! drwlab: exact computations in truncated de Rham-Witt groups over the
//! Laurent line, with verification suites for the pole/zero filtration
//! structure and the residue duality.
//!
//! Subcommands:
//!   conductor "<expr>"   minimal saturated filtration level of an element
//!   fil-basis            generator listing of a filtration layer
//!   verify <suite>       run a verification suite (exit 0 iff all pass)
//!   duality              residue-pairing report
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage or parse error,
//! 3 resource error.

mod json;
mod parser;

use drwlab_core::duality::{self, ComplexSide};
use drwlab_core::filtration::{self, FilKind, FiltrationId};
use drwlab_core::linalg::WindowSpec;
use drwlab_core::modulus;
use drwlab_core::report::{CheckReport, SuiteReport};
use drwlab_core::sample::Rng;
use drwlab_core::{Error, PrimeContext};
use json::Json;
use std::time::Instant;

#[derive(Debug, Clone)]
struct Config {
    p: u64,
    n: u32,
    r: u64,
    q: u8,
    window: (i64, i64),
    window_set: bool,
    format_json: bool,
    seed: u64,
    jobs: usize,
    rw: u32,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            p: 2,
            n: 2,
            r: 3,
            q: 1,
            window: (-16, 16),
            window_set: false,
            format_json: false,
            seed: 0xd15ea5e,
            jobs: 1,
            rw: 1,
        }
    }
}

impl Config {
    fn describe(&self) -> String {
        format!(
            "p={} n={} r={} q={} window={}:{}",
            self.p, self.n, self.r, self.q, self.window.0, self.window.1
        )
    }

    fn ctx(&self) -> Result<PrimeContext, Error> {
        PrimeContext::new(self.p, self.n)
    }

    /// Window sized for level `r` unless the user pinned one.
    fn window_for(&self, q: u8, r: u64) -> WindowSpec {
        if self.window_set {
            WindowSpec::new(q, self.window.0, self.window.1)
        } else {
            WindowSpec::new(q, -(r as i64).max(1) - 8, (r as i64) + 10)
        }
    }
}

fn usage() -> String {
    "usage: drwlab <command> [flags]\n\
     commands:\n\
       conductor \"<expr>\"          minimal filtration level of the element\n\
       fil-basis --kind <k>         list generators (k: log|logp|fil|fild|filp)\n\
       verify <suite>               suites: filp-levels, rfil, n1-closed-form,\n\
                                    fvr, conductor, strhwm, longseq, zeros,\n\
                                    bzn, duality, cartier, graded,\n\
                                    artin-schreier, operators, all\n\
       duality                      residue pairing report\n\
     flags: --p P --n N --r R --q Q --window MIN:MAX --format text|json\n\
            --seed S --jobs J --rw RW\n"
        .into()
}

fn parse_flags(args: &[String]) -> Result<(Vec<String>, Config), String> {
    let mut cfg = Config::default();
    let mut positional = Vec::new();
    let mut it = args.iter().peekable();
    while let Some(a) = it.next() {
        let mut grab = |name: &str| -> Result<String, String> {
            it.next().cloned().ok_or_else(|| format!("flag {name} needs a value"))
        };
        match a.as_str() {
            "--p" => cfg.p = grab("--p")?.parse().map_err(|_| "bad --p".to_string())?,
            "--n" => cfg.n = grab("--n")?.parse().map_err(|_| "bad --n".to_string())?,
            "--r" => cfg.r = grab("--r")?.parse().map_err(|_| "bad --r".to_string())?,
            "--q" => cfg.q = grab("--q")?.parse().map_err(|_| "bad --q".to_string())?,
            "--rw" => cfg.rw = grab("--rw")?.parse().map_err(|_| "bad --rw".to_string())?,
            "--seed" => cfg.seed = grab("--seed")?.parse().map_err(|_| "bad --seed".to_string())?,
            "--jobs" => cfg.jobs = grab("--jobs")?.parse().map_err(|_| "bad --jobs".to_string())?,
            "--window" => {
                let v = grab("--window")?;
                let (lo, hi) = v.split_once(':').ok_or("bad --window, expected MIN:MAX")?;
                cfg.window = (
                    lo.parse().map_err(|_| "bad --window min".to_string())?,
                    hi.parse().map_err(|_| "bad --window max".to_string())?,
                );
                cfg.window_set = true;
            }
            "--format" => {
                let v = grab("--format")?;
                cfg.format_json = match v.as_str() {
                    "json" => true,
                    "text" => false,
                    _ => return Err("bad --format, expected text or json".into()),
                };
            }
            other => positional.push(other.to_string()),
        }
    }
    if cfg.q > 1 {
        return Err("--q must be 0 or 1".into());
    }
    Ok((positional, cfg))
}

fn emit_error(cfg_json: bool, code: i32, msg: &str) -> i32 {
    if cfg_json {
        let obj = Json::Obj(vec![(
            "error".into(),
            Json::Obj(vec![
                ("code".into(), Json::Int(code as i64)),
                ("message".into(), Json::Str(msg.into())),
            ]),
        )]);
        println!("{}", obj.render());
    } else {
        eprintln!("error: {msg}");
    }
    code
}

fn check_json(c: &CheckReport) -> Json {
    let mut fields = vec![
        ("name".into(), Json::Str(c.name.clone())),
        ("ref".into(), Json::Str(c.refid.into())),
        ("verdict".into(), Json::Str(if c.verdict { "pass" } else { "fail" }.into())),
    ];
    if !c.lengths.is_empty() {
        fields.push((
            "lengths".into(),
            Json::Obj(c.lengths.iter().map(|(k, v)| (k.clone(), Json::UInt(*v))).collect()),
        ));
    }
    if let Some(w) = &c.witness {
        fields.push(("witness".into(), Json::Str(w.clone())));
    }
    Json::Obj(fields)
}

fn emit_report(cfg: &Config, report: &SuiteReport) {
    if cfg.format_json {
        let obj = Json::Obj(vec![
            ("config".into(), Json::Str(report.config.clone())),
            ("suite".into(), Json::Str(report.suite.clone())),
            ("checks".into(), Json::Arr(report.checks.iter().map(check_json).collect())),
            ("elapsed".into(), Json::Float(report.elapsed_secs)),
        ]);
        println!("{}", obj.render());
    } else {
        println!("suite {} [{}]", report.suite, report.config);
        for c in &report.checks {
            let lengths = if c.lengths.is_empty() {
                String::new()
            } else {
                let parts: Vec<String> = c.lengths.iter().map(|(k, v)| format!("{k}={v}")).collect();
                format!("  ({})", parts.join(", "))
            };
            println!("  [{}] {}{}", if c.verdict { "pass" } else { "FAIL" }, c.name, lengths);
        }
        println!("  elapsed {:.3}s", report.elapsed_secs);
    }
}

fn run_suite(name: &str, cfg: &Config) -> Result<SuiteReport, Error> {
    let started = Instant::now();
    let mut rep = SuiteReport::new(name, cfg.describe());
    let ctx = cfg.ctx()?;
    match name {
        "filp-levels" => {
            for q in [0u8, 1] {
                let w = cfg.window_for(q, 1);
                let f0 = filtration::window_space(&FiltrationId { kind: FilKind::FilP, r: 0, q, ctx }, w)?;
                rep.push(
                    CheckReport::of(
                        format!("level 0 equals the regular space (q={q})"),
                        "filp.level0",
                        f0.equals(&filtration::regular_space(ctx, q, w)),
                    )
                    .with_length("space", f0.length()),
                );
                let f1 = filtration::window_space(&FiltrationId { kind: FilKind::FilP, r: 1, q, ctx }, w)?;
                rep.push(
                    CheckReport::of(
                        format!("level 1 equals the log space (q={q})"),
                        "filp.level1",
                        f1.equals(&filtration::log_regular_space(ctx, q, w)),
                    )
                    .with_length("space", f1.length()),
                );
            }
        }
        "rfil" => {
            let one = PrimeContext::new(cfg.p, 1)?;
            for r in 0..=cfg.r.max(4) {
                let q = cfg.q;
                let up = PrimeContext::new(cfg.p, cfg.n + 1)?;
                let w = cfg.window_for(q, r);
                let space = filtration::window_space(&FiltrationId { kind: FilKind::FilP, r, q, ctx: up }, w)?;
                let amb1 = drwlab_core::linalg::Ambient::for_forms(one, w);
                let image = modulus::map_module(&space, amb1.clone(), |g| {
                    let mut h = g.clone();
                    for _ in 0..cfg.n {
                        h = modulus::r_form(&h)?;
                    }
                    Some(h)
                });
                let pn = cfg.p.pow(cfg.n);
                let v_p_r = if r == 0 {
                    u32::MAX
                } else {
                    let mut v = 0u32;
                    let mut rr = r;
                    while rr % cfg.p == 0 {
                        rr /= cfg.p;
                        v += 1;
                    }
                    v
                };
                let expect = if r == 0 {
                    filtration::regular_space_in(one, q, w, amb1)
                } else if v_p_r > cfg.n {
                    modulus::twisted_pole_space(cfg.p, 0, 0, (r / pn) as i64, q, w, amb1)?
                } else {
                    modulus::twisted_pole_space(cfg.p, 0, 1, r.div_ceil(pn) as i64 - 1, q, w, amb1)?
                };
                rep.push(
                    CheckReport::of(format!("restriction image at r={r}"), "rfil.case", image.equals(&expect))
                        .with_length("image", image.length())
                        .with_length("expected", expect.length()),
                );
            }
        }
        "n1-closed-form" => {
            let one = PrimeContext::new(cfg.p, 1)?;
            for r in 0..=cfg.r.max(6) {
                let q = cfg.q;
                let w = cfg.window_for(q, r);
                let space = filtration::window_space(&FiltrationId { kind: FilKind::FilP, r, q, ctx: one }, w)?;
                let expect = if r == 0 {
                    filtration::regular_space_in(one, q, w, space.ambient.clone())
                } else if r % cfg.p != 0 {
                    modulus::twisted_pole_space(cfg.p, 0, 1, r as i64 - 1, q, w, space.ambient.clone())?
                } else {
                    modulus::twisted_pole_space(cfg.p, 0, 0, r as i64, q, w, space.ambient.clone())?
                };
                rep.push(
                    CheckReport::of(format!("length-one closed form at r={r}"), "filp.n1", space.equals(&expect))
                        .with_length("space", space.length()),
                );
            }
        }
        "fvr" => {
            let q = cfg.q;
            let r = cfg.r;
            let w = cfg.window_for(q, r * cfg.p);
            let up = PrimeContext::new(cfg.p, cfg.n + 1)?;
            let space = filtration::window_space(&FiltrationId { kind: FilKind::FilP, r, q, ctx }, w)?;
            let space_up = filtration::window_space(&FiltrationId { kind: FilKind::FilP, r, q, ctx: up }, w)?;
            let mut stable = true;
            for g in space.gen_forms(0) {
                stable &= space_up.contains_form(0, &modulus::v_pow(&g, 1).unwrap());
                stable &= space_up.contains_form(0, &modulus::pline_pow(&g, 1).unwrap());
            }
            for g in space_up.gen_forms(0) {
                stable &= space.contains_form(0, &modulus::r_form(&g).unwrap());
            }
            rep.push(CheckReport::of("V/pline/R stability", "filp.fvr", stable));
            let pl_img = modulus::map_module(&space, space_up.ambient.clone(), |g| modulus::pline_pow(g, 1));
            let pr = filtration::window_space(&FiltrationId { kind: FilKind::FilP, r: r * cfg.p, q, ctx: up }, w)?;
            let mut p_pr = drwlab_core::linalg::WindowModule::empty(space_up.ambient.clone());
            for g in pr.gen_forms(0) {
                let s = g.int_mul(cfg.p as i64);
                if !s.is_zero() {
                    p_pr.insert_form(0, &s)?;
                }
            }
            rep.push(
                CheckReport::of("pline(FilP_r) = p FilP_(pr)", "filp.psat", pl_img.equals(&p_pr))
                    .with_length("pline", pl_img.length())
                    .with_length("scaled", p_pr.length()),
            );
        }
        "conductor" => {
            let mut rng = Rng::new(cfg.seed);
            let mut ok = true;
            for _ in 0..200 {
                let q = rng.below(2) as u8;
                let (a, b) = if q == 0 {
                    (
                        drwlab_core::forms::Form::Zero(rng.nf0(&ctx, 2, -4, 4)),
                        drwlab_core::forms::Form::Zero(rng.nf0(&ctx, 2, -4, 4)),
                    )
                } else {
                    (
                        drwlab_core::forms::Form::One(rng.nf1(&ctx, 2, -4, 4)),
                        drwlab_core::forms::Form::One(rng.nf1(&ctx, 2, -4, 4)),
                    )
                };
                let ca = filtration::conductor(&a);
                if ca == 0 {
                    ok &= a.is_zero() || a.is_regular();
                }
                let sum = match (&a, &b) {
                    (drwlab_core::forms::Form::Zero(x), drwlab_core::forms::Form::Zero(y)) => {
                        drwlab_core::forms::Form::Zero(x.add(y))
                    }
                    (drwlab_core::forms::Form::One(x), drwlab_core::forms::Form::One(y)) => {
                        drwlab_core::forms::Form::One(x.add(y))
                    }
                    _ => unreachable!(),
                };
                ok &= filtration::conductor(&sum) <= ca.max(filtration::conductor(&b));
            }
            rep.push(CheckReport::of(
                "vanishing level is regular; subadditive under max",
                "conductor.axioms",
                ok,
            ));
        }
        "strhwm" => {
            for c in modulus::verify_strhwm(cfg.p, cfg.n, cfg.q, cfg.r, cfg.window_for(cfg.q, cfg.r))? {
                rep.push(c);
            }
        }
        "longseq" => {
            for c in modulus::verify_long_mod_seq(cfg.p, cfg.n, cfg.q, cfg.rw, cfg.r, cfg.window_for(cfg.q, cfg.r))? {
                rep.push(c);
            }
        }
        "zeros" => {
            for c in modulus::verify_zero_side(cfg.p, cfg.n.max(1), cfg.q, cfg.r, cfg.window_for(cfg.q, cfg.r))? {
                rep.push(c);
            }
        }
        "bzn" => {
            for c in modulus::verify_bzn_recursion(cfg.p, cfg.n, cfg.q, cfg.r, cfg.window_for(cfg.q, cfg.r))? {
                rep.push(c);
            }
        }
        "duality" => {
            let (checks, _rep) = duality::verify_local_duality(ctx, cfg.r, cfg.window_for(1, cfg.r))?;
            for c in checks {
                rep.push(c);
            }
        }
        "cartier" => {
            let (checks, _r1, _r2) =
                duality::verify_cartier_duality(cfg.p, cfg.n, cfg.q, cfg.r, cfg.window_for(cfg.q, cfg.r))?;
            for c in checks {
                rep.push(c);
            }
        }
        "graded" => {
            let r = cfg.r.max(2);
            let g = filtration::graded_char_check(ctx, cfg.q, r, cfg.window_for(cfg.q, r))?;
            rep.push(CheckReport::of("graded characteristic map injective", "graded.char", g.injective));
            rep.push(CheckReport::of("graded d-leg exact", "graded.dleg", g.exact_d_leg));
            rep.push(CheckReport::of("graded F-leg exact", "graded.fleg", g.exact_f_leg));
        }
        "artin-schreier" => {
            let w = cfg.window_for(0, cfg.r);
            let hom = duality::log_complex_homology(ctx, ComplexSide::Pole, 0, 0, w)?;
            rep.push(
                CheckReport::of(
                    "fixed points of the Frobenius complex are the constants",
                    "as.fixed",
                    !hom.domain_failure && hom.kernel_length == cfg.n as u64,
                )
                .with_length("kernel", hom.kernel_length)
                .with_length("cokernel", hom.cokernel_length),
            );
            let hom2 = duality::log_complex_homology(ctx, ComplexSide::Pole, 0, 0, w.grow(4))?;
            rep.push(
                CheckReport::of("verdict stable under guard band", "as.stable", hom2.kernel_length == cfg.n as u64)
                    .with_length("kernel", hom2.kernel_length),
            );
            let z = duality::log_complex_homology(ctx, ComplexSide::ZeroSide, cfg.q, cfg.r, w)?;
            rep.push(
                CheckReport::pass("zero-side homology (reported per window)", "as.zeroside")
                    .with_length("kernel", z.kernel_length)
                    .with_length("cokernel", z.cokernel_length),
            );
        }
        "operators" => {
            let mut rng = Rng::new(cfg.seed);
            let mut ok = true;
            for _ in 0..1000 {
                let x = rng.nf0(&ctx, 3, -6, 6);
                let w = rng.nf1(&ctx, 3, -6, 6);
                ok &= x.v().unwrap().f().unwrap() == x.int_mul(cfg.p as i64);
                ok &= x.v().unwrap().d().f().unwrap() == x.d();
                ok &= x.d().v().unwrap() == x.v().unwrap().d().int_mul(cfg.p as i64);
                ok &= w.pline().unwrap().f().unwrap().v().unwrap() == w.pline().unwrap().int_mul(cfg.p as i64);
                ok &= drwlab_core::forms::NormalForm0::decompose(ctx, &x.recompose()) == x;
            }
            rep.push(CheckReport::of("operator relations on sampled forms", "ops.relations", ok));
        }
        other => {
            return Err(Error::BadContext(format!("unknown suite '{other}'")));
        }
    }
    rep.elapsed_secs = started.elapsed().as_secs_f64();
    Ok(rep)
}

const ALL_SUITES: &[&str] = &[
    "filp-levels",
    "rfil",
    "n1-closed-form",
    "fvr",
    "conductor",
    "strhwm",
    "longseq",
    "zeros",
    "bzn",
    "duality",
    "cartier",
    "graded",
    "artin-schreier",
    "operators",
];

fn cmd_verify(suites: &[String], cfg: &Config) -> i32 {
    let mut names: Vec<String> = Vec::new();
    for s in suites {
        if s == "all" {
            names.extend(ALL_SUITES.iter().map(|s| s.to_string()));
        } else if !s.starts_with("--") {
            names.push(s.clone());
        }
    }
    if names.is_empty() {
        return emit_error(cfg.format_json, 2, "verify needs a suite name (or 'all')");
    }
    names.sort();
    names.dedup();
    // Fan suites out across jobs; output is ordered by suite name regardless
    // of completion order.
    let results: Vec<Result<SuiteReport, Error>> = if cfg.jobs > 1 {
        std::thread::scope(|scope| {
            let handles: Vec<_> = names
                .iter()
                .map(|name| {
                    let cfg = cfg.clone();
                    let name = name.clone();
                    scope.spawn(move || run_suite(&name, &cfg))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
        })
    } else {
        names.iter().map(|name| run_suite(name, cfg)).collect()
    };
    let mut all_pass = true;
    for res in results {
        match res {
            Ok(rep) => {
                all_pass &= rep.passed();
                emit_report(cfg, &rep);
            }
            Err(e) => {
                let code = match e {
                    Error::TermBudget { .. } | Error::CoefficientOverflow => 3,
                    _ => 2,
                };
                return emit_error(cfg.format_json, code, &e.to_string());
            }
        }
    }
    if all_pass {
        0
    } else {
        1
    }
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (positional, cfg) = match parse_flags(&args) {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("error: {msg}\n{}", usage());
            std::process::exit(2);
        }
    };
    let Some(command) = positional.first() else {
        eprintln!("{}", usage());
        std::process::exit(2);
    };
    let code = match command.as_str() {
        "conductor" => {
            let Some(src) = positional.get(1) else {
                std::process::exit(emit_error(cfg.format_json, 2, "conductor needs an expression"));
            };
            match cfg.ctx() {
                Err(e) => emit_error(cfg.format_json, 2, &e.to_string()),
                Ok(ctx) => match parser::parse(src).and_then(|e| parser::eval(&e, ctx)) {
                    Err(e) => emit_error(cfg.format_json, 2, &e.to_string()),
                    Ok(form) => {
                        let c = filtration::conductor(&form);
                        if cfg.format_json {
                            let obj = Json::Obj(vec![
                                ("config".into(), Json::Str(cfg.describe())),
                                ("element".into(), Json::Str(parser::print_form(&form))),
                                ("conductor".into(), Json::UInt(c)),
                            ]);
                            println!("{}", obj.render());
                        } else {
                            println!("{c}");
                        }
                        0
                    }
                },
            }
        }
        "fil-basis" => {
            let mut kind = FilKind::FilP;
            for (i, a) in positional.iter().enumerate() {
                if a == "--kind" {
                    kind = match positional.get(i + 1).map(|s| s.as_str()) {
                        Some("log") => FilKind::Log,
                        Some("logp") => FilKind::LogPrime,
                        Some("fil") => FilKind::Fil,
                        Some("fild") => FilKind::FilD,
                        Some("filp") | None => FilKind::FilP,
                        Some(other) => {
                            std::process::exit(emit_error(
                                cfg.format_json,
                                2,
                                &format!("unknown kind '{other}'"),
                            ));
                        }
                    };
                }
            }
            match cfg.ctx() {
                Err(e) => emit_error(cfg.format_json, 2, &e.to_string()),
                Ok(ctx) => {
                    let id = FiltrationId { kind, r: cfg.r, q: cfg.q, ctx };
                    let w = cfg.window_for(cfg.q, cfg.r);
                    match filtration::window_space(&id, w) {
                        Err(e) => emit_error(cfg.format_json, 2, &e.to_string()),
                        Ok(space) => {
                            let gens = space.gen_forms(0);
                            if cfg.format_json {
                                let obj = Json::Obj(vec![
                                    ("config".into(), Json::Str(cfg.describe())),
                                    ("kind".into(), Json::Str(format!("{kind:?}"))),
                                    ("length".into(), Json::UInt(space.length())),
                                    (
                                        "basis".into(),
                                        Json::Arr(
                                            gens.iter().map(|g| Json::Str(parser::print_form(g))).collect(),
                                        ),
                                    ),
                                ]);
                                println!("{}", obj.render());
                            } else {
                                println!(
                                    "# {kind:?} [{}], length {}",
                                    cfg.describe(),
                                    space.length()
                                );
                                for g in gens {
                                    println!("{}", parser::print_form(&g));
                                }
                            }
                            0
                        }
                    }
                }
            }
        }
        "verify" => cmd_verify(&positional[1..], &cfg),
        "duality" => match cfg.ctx() {
            Err(e) => emit_error(cfg.format_json, 2, &e.to_string()),
            Ok(ctx) => match duality::verify_local_duality(ctx, cfg.r, cfg.window_for(1, cfg.r)) {
                Err(e) => emit_error(cfg.format_json, 2, &e.to_string()),
                Ok((checks, pairing)) => {
                    let mut rep = SuiteReport::new("duality", cfg.describe());
                    for c in checks {
                        rep.push(c);
                    }
                    emit_report(&cfg, &rep);
                    if !cfg.format_json {
                        println!(
                            "pairing: {} (lengths {}/{}, kernels {}/{}, divisors {:?})",
                            if pairing.perfect { "perfect" } else { "degenerate" },
                            pairing.left_length,
                            pairing.right_length,
                            pairing.left_kernel_length,
                            pairing.right_kernel_length,
                            pairing.divisors,
                        );
                    }
                    if rep.passed() {
                        0
                    } else {
                        1
                    }
                }
            },
        },
        _ => {
            eprintln!("{}", usage());
            2
        }
    };
    std::process::exit(code);
}
