use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use super::{Command, JobResult, Options, Outcome};
use crate::algebra::{parse, parse_element, HomogeneousElement, Parsed};
use crate::error::{Error, Result};
use crate::fresco::{
    exact_sequence_check, fresco_bernstein_polynomial, is_fresco, module_from_element,
    module_from_presentation, presentation_from_module, principal_jh, FrescoPresentation,
};
use crate::io::{expansion_from_json, read_input, CanonicalFormJson, ElementJson, InputFile, ModuleJson, SeriesJson};
use crate::module::{
    bernstein_char_poly, bernstein_polynomial, change_of_variable, polynomial_is_geometric,
    saturate, AbModule, SaturationStatus,
};
use crate::scalars::{fmt_rational, parse_rational, Polynomial, Rational, TruncatedSeries};
use crate::theme::{
    canonical_form, fundamental_data, hom_dimension, is_theme, theme_from_canonical,
};
use crate::xi::{
    co_semisimple_filtration, generate_theme, is_semisimple, log_filtration, primitive_filtration,
    Realization, XiElement, XiSpace,
};

type Job = (String, Box<dyn Fn() -> JobResult + Send + Sync>);

fn job(label: String, f: impl Fn() -> JobResult + Send + Sync + 'static) -> Job {
    (label, Box::new(f))
}

fn per_file(files: Vec<PathBuf>, opts: &Options, f: fn(&InputFile, &Options) -> JobResult) -> Vec<Job> {
    files
        .into_iter()
        .map(|p| {
            let o = opts.clone();
            job(p.display().to_string(), move || f(&load(&p, &o)?, &o))
        })
        .collect()
}

pub(super) fn jobs(cmd: Command, opts: &Options) -> Vec<Job> {
    match cmd {
        Command::Bernstein { files, pi } => {
            let mut out = Vec::new();
            if let Some(text) = pi {
                let o = opts.clone();
                out.push(job(text.clone(), move || {
                    let input = match parse(&text, o.precision())? {
                        Parsed::Presentation(p) => InputFile::Presentation(p),
                        Parsed::Element(e) => InputFile::Element(e),
                    };
                    bernstein(&input, &o)
                }));
            }
            out.extend(per_file(files, opts, bernstein));
            out
        }
        Command::Saturate { files } => per_file(files, opts, saturate_cmd),
        Command::Jh { files } => per_file(files, opts, jh),
        Command::ThemeOf { files } => per_file(files, opts, theme_of),
        Command::CanonicalForm { files } => per_file(files, opts, canonical),
        Command::HomDim { source, target } => {
            let o = opts.clone();
            let label = format!("{} -> {}", source.display(), target.display());
            vec![job(label, move || {
                let a = module_of(&load(&source, &o)?, &o)?;
                let b = module_of(&load(&target, &o)?, &o)?;
                let r = hom_dimension(&a, &b)?;
                Ok(Outcome {
                    json: json!({"dimension": r.dimension, "stabilized": r.stabilized, "precision": r.precision}),
                    text: format!(
                        "dim Hom = {}\nstabilized (N-1 vs N): {}\n",
                        r.dimension,
                        yes(r.stabilized)
                    ),
                    failed: false,
                })
            })]
        }
        Command::ChangeVar { files, theta } => files
            .into_iter()
            .map(|p| {
                let o = opts.clone();
                let t = theta.clone();
                job(p.display().to_string(), move || change_var(&load(&p, &o)?, &t, &o))
            })
            .collect(),
        Command::Filtrations { files, lambda_set } => files
            .into_iter()
            .map(|p| {
                let o = opts.clone();
                let ls = lambda_set.clone();
                job(p.display().to_string(), move || filtrations(&load(&p, &o)?, ls.as_deref(), &o))
            })
            .collect(),
        Command::Check { files } => per_file(files, opts, check),
    }
}

fn load(path: &Path, opts: &Options) -> Result<InputFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    read_input(&text, opts.precision())
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn expansion(input: &InputFile, opts: &Options) -> Result<XiElement> {
    match input {
        InputFile::Expansion(t) => expansion_from_json(t, opts.shift_precision()),
        _ => Err(Error::InvalidInput("expected an expansion file".into())),
    }
}

fn realization(input: &InputFile, opts: &Options) -> Result<Realization> {
    let x = expansion(input, opts)?;
    match opts.log_prec {
        Some(n) if x.log_degree().unwrap_or(0) > n => Err(Error::InvalidInput(format!(
            "expansion has log degree {} above --log-prec {n}",
            x.log_degree().unwrap_or(0)
        ))),
        _ => generate_theme(&x),
    }
}

/// The module described by any input kind.
fn module_of(input: &InputFile, opts: &Options) -> Result<AbModule> {
    let n = opts.precision();
    match input {
        InputFile::Module(m) => Ok(m.with_precision(n.min(m.precision()))),
        InputFile::Presentation(p) => module_from_presentation(p, n),
        InputFile::Element(e) => module_from_element(&e.with_precision(n.min(e.precision()))),
        InputFile::Canonical(cf) => theme_from_canonical(cf, n),
        InputFile::Expansion(_) => Ok(realization(input, opts)?.module),
    }
}

fn factored(p: &HomogeneousElement) -> String {
    match p.factor() {
        Ok(l) => FrescoPresentation::from_lambdas(l, 1).to_string(),
        Err(_) => p.to_string(),
    }
}

fn series_text(s: &TruncatedSeries) -> String {
    s.to_pretty("b")
}

fn bernstein(input: &InputFile, opts: &Options) -> JobResult {
    let m = module_of(input, opts)?;
    let b = bernstein_polynomial(&m)?;
    let geometric = polynomial_is_geometric(&b);
    let mut text = String::new();
    let mut js = json!({"precision": m.precision(), "bernstein": b.to_pretty(), "geometric": geometric});
    if let InputFile::Element(e) = input {
        writeln!(text, "input is not a factored presentation; using the module of Ã/ÃΠ, Π = {e}").unwrap();
        js["fallback"] = json!(true);
    }
    writeln!(text, "B(x) = {}", b.factored_display()).unwrap();
    if geometric && is_fresco(&m)? {
        let two_paths = fresco_bernstein_polynomial(&m);
        let p = presentation_from_module(&m, None)?.initial_form;
        writeln!(text, "Bernstein element P = {}", factored(&p)).unwrap();
        writeln!(text, "saturation and initial form agree: {}", yes(two_paths.is_ok())).unwrap();
        js["bernstein_element"] = json!(p.to_string());
        js["paths_agree"] = json!(two_paths.is_ok());
    }
    writeln!(text, "geometric: {}", yes(geometric)).unwrap();
    Ok(Outcome { json: js, text, failed: false })
}

fn saturate_cmd(input: &InputFile, opts: &Options) -> JobResult {
    let m = module_of(input, opts)?;
    let s = saturate(&m, None);
    let status = match &s.status {
        SaturationStatus::Saturated => "saturated".to_string(),
        SaturationStatus::NotStabilized(r) => format!("not stabilized ({r:?})"),
    };
    let mut text = format!("status: {status}\nsteps: {}\ngap δ: {}\nvaluations: {:?}\n", s.steps, s.gap, s.valuations);
    let mut js = json!({"status": status, "steps": s.steps, "gap": s.gap, "valuations": s.valuations});
    match s.saturated() {
        Ok(sm) => {
            write!(text, "saturated module: {sm}").unwrap();
            js["module"] = serde_json::to_value(ModuleJson::from_module(sm)).unwrap();
            Ok(Outcome { json: js, text, failed: false })
        }
        Err(e) => Err(e),
    }
}

fn jh(input: &InputFile, opts: &Options) -> JobResult {
    let m = module_of(input, opts)?;
    let seq = principal_jh(&m)?;
    let mut text = format!(
        "principal λ-sequence: ({})\n",
        seq.lambdas().iter().map(fmt_rational).collect::<Vec<_>>().join(", ")
    );
    let mut stages = Vec::new();
    for (j, s) in seq.stages.iter().enumerate() {
        let g: Vec<String> = s.generator.iter().map(series_text).collect();
        writeln!(text, "  F_{}: λ = {}, generator [{}]", j + 1, fmt_rational(&s.lambda), g.join(", ")).unwrap();
        stages.push(json!({
            "lambda": fmt_rational(&s.lambda),
            "generator": s.generator.iter().map(SeriesJson::from_series).collect::<Vec<_>>(),
        }));
    }
    Ok(Outcome {
        json: json!({"lambdas": seq.lambdas().iter().map(fmt_rational).collect::<Vec<_>>(), "stages": stages}),
        text,
        failed: false,
    })
}

fn theme_of(input: &InputFile, opts: &Options) -> JobResult {
    let r = realization(input, opts)?;
    let k = r.rank();
    let mut text = format!("rank: {k}\npresentation: {} = 0\n", r.relation);
    let mut js = json!({
        "rank": k,
        "relation": ElementJson::from_element(&r.relation),
        "module": ModuleJson::from_module(&r.module),
    });
    if r.relation.order() == Some(k) {
        if let Some(p) = HomogeneousElement::from_element(&r.relation.homogeneous_part(k), k) {
            writeln!(text, "Bernstein element: {}", factored(&p)).unwrap();
            js["bernstein_element"] = json!(p.to_string());
            if let Ok(b) = p.bernstein_polynomial() {
                writeln!(text, "Bernstein polynomial: {}", b.factored_display()).unwrap();
                js["bernstein"] = json!(b.to_pretty());
            }
        }
    }
    match fundamental_data(&r.module) {
        Ok(d) => {
            writeln!(text, "fundamental data: {d}").unwrap();
            js["fundamental_data"] = serde_json::to_value(&d).unwrap();
        }
        Err(e) => writeln!(text, "fundamental data: not primitive ({e})").unwrap(),
    }
    Ok(Outcome { json: js, text, failed: false })
}

fn canonical(input: &InputFile, opts: &Options) -> JobResult {
    let m = module_of(input, opts)?;
    let r = canonical_form(&m)?;
    let unique = match r.unique {
        Some(true) => "yes",
        Some(false) => "no",
        None => "undecided",
    };
    Ok(Outcome {
        json: json!({"form": CanonicalFormJson::from_form(&r.form), "unique": r.unique}),
        text: format!("fundamental data: {}\ncanonical form: {}\nunique: {unique}\n", r.form.data, r.form),
        failed: false,
    })
}

pub(crate) fn parse_theta(text: &str, precision: usize) -> Result<TruncatedSeries> {
    let src = text.replace('z', "b");
    parse_element(&src, precision)?
        .as_series()
        .ok_or_else(|| Error::InvalidTheta(format!("{text} is not a series in z")))
}

fn change_var(input: &InputFile, theta: &str, opts: &Options) -> JobResult {
    let m = module_of(input, opts)?;
    let t = parse_theta(theta, 4 * opts.precision())?;
    let out = change_of_variable(&m, &t)?;
    let b0 = bernstein_char_poly(&m)?;
    let b1 = bernstein_char_poly(&out)?;
    Ok(Outcome {
        json: json!({"module": ModuleJson::from_module(&out), "bernstein_before": b0.to_pretty(), "bernstein_after": b1.to_pretty()}),
        text: format!("θ = {}\n{out}Bernstein polynomial before: {}\nafter: {}\n", t.to_pretty("z"), b0.factored_display(), b1.factored_display()),
        failed: b0 != b1,
    })
}

fn filtrations(input: &InputFile, lambda_set: Option<&str>, opts: &Options) -> JobResult {
    let r = realization(input, opts)?;
    let ss: Vec<usize> = log_filtration(&r).iter().map(|p| p.rank).collect();
    let mut text = format!("rank: {}\nsemisimple filtration ranks: {ss:?}\n", r.rank());
    let mut js = json!({"rank": r.rank(), "ss": ss});
    match co_semisimple_filtration(&r) {
        Ok(c) => {
            let ranks: Vec<usize> = c.iter().map(|p| p.rank).collect();
            writeln!(text, "co-semisimple filtration ranks: {ranks:?}").unwrap();
            js["co_ss"] = json!(ranks);
        }
        Err(e) => {
            writeln!(text, "co-semisimple filtration: {e}").unwrap();
            js["co_ss_error"] = json!(e.code());
        }
    }
    let classes: Vec<Vec<Rational>> = match lambda_set {
        Some(s) => vec![s
            .split(',')
            .map(|x| parse_rational(x).ok_or_else(|| Error::InvalidInput(format!("bad class {x:?}"))))
            .collect::<Result<_>>()?],
        None => r.space.lambdas().iter().map(|l| vec![l.clone()]).collect(),
    };
    let mut prim = Vec::new();
    for cl in classes {
        let piece = primitive_filtration(&r, &cl);
        let names: Vec<String> = cl.iter().map(fmt_rational).collect();
        writeln!(text, "primitive part for {{{}}}: rank {}", names.join(", "), piece.rank).unwrap();
        prim.push(json!({"classes": names, "rank": piece.rank}));
    }
    js["primitive"] = json!(prim);
    Ok(Outcome { json: js, text, failed: false })
}

struct Checks {
    lines: Vec<(String, bool, String)>,
}

impl Checks {
    fn add(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.lines.push((name.to_string(), ok, detail.into()));
    }

    fn add_result<T>(&mut self, name: &str, r: Result<T>, ok: impl Fn(&T) -> (bool, String)) {
        match r {
            Ok(v) => {
                let (b, d) = ok(&v);
                self.add(name, b, d);
            }
            Err(e) => self.add(name, false, format!("error [{}]: {e}", e.code())),
        }
    }
}

fn module_checks(c: &mut Checks, m: &AbModule) -> Result<()> {
    let sat = saturate(m, None);
    c.add("saturation stabilizes", sat.is_saturated(), format!("{} steps, gap {}", sat.steps, sat.gap));
    sat.saturated()?;
    let b = bernstein_polynomial(m)?;
    let geometric = polynomial_is_geometric(&b);
    c.add("geometric", true, format!("B(x) = {}, geometric: {}", b.factored_display(), yes(geometric)));
    if !geometric || !is_fresco(m)? {
        return Ok(());
    }
    c.add_result("Bernstein: saturation = initial form", fresco_bernstein_polynomial(m), |b: &Polynomial| {
        (true, b.factored_display())
    });
    let data = presentation_from_module(m, None)?;
    c.add_result("presentation round trip", module_from_element(&data.relation), |m2| {
        let p2 = presentation_from_module(m2, None).map(|d| d.initial_form);
        (p2.as_ref().ok() == Some(&data.initial_form), factored(&data.initial_form))
    });
    let seq = principal_jh(m);
    c.add_result("principal J-H sequence", seq.clone(), |s: &crate::fresco::JhSequence| {
        let ok = s
            .stages
            .iter()
            .all(|st| st.quotient_action == TruncatedSeries::monomial(st.lambda.clone(), 1, st.quotient_action.precision()));
        (ok, s.lambdas().iter().map(fmt_rational).collect::<Vec<_>>().join(", "))
    });
    if let Ok(s) = seq {
        for j in 1..m.rank() {
            let gens: Vec<_> = s.stages[..j].iter().map(|st| st.generator.clone()).collect();
            c.add_result(&format!("exact sequence at F_{j}"), exact_sequence_check(m, &gens), |r| {
                (r.initial_forms_multiply && r.bernstein_multiplies, format!("P_G = {}, P_H = {}", r.p_g, r.p_h))
            });
        }
    }
    let theme = is_theme(m)?;
    c.add("theme detection", true, format!("theme: {}", yes(theme.is_theme)));
    if theme.is_theme {
        if let Ok(d) = fundamental_data(m) {
            c.add_result("canonical form round trip", canonical_form(m), |r| {
                let back = theme_from_canonical(&r.form, m.precision()).and_then(|t| fundamental_data(&t));
                (back.as_ref().ok() == Some(&d), format!("{} ({d})", r.form))
            });
            c.add_result("semisimple themes have rank ≤ 1", is_semisimple(m), |ss| {
                (!*ss || m.rank() <= 1, format!("semisimple: {}", yes(*ss)))
            });
        }
        c.add_result("End(Θ) contains the identity", hom_dimension(m, m), |h| {
            (h.dimension >= 1, format!("dim End = {}, stabilized: {}", h.dimension, yes(h.stabilized)))
        });
    }
    let theta = TruncatedSeries::new(vec![0.into(), 1.into(), 1.into()].into_iter().map(Rational::from_integer).collect(), 4 * m.precision());
    c.add_result("change of variable z + z^2 keeps B", change_of_variable(m, &theta), |out| {
        let b1 = bernstein_char_poly(out);
        let b0 = bernstein_char_poly(m);
        (b0.is_ok() && b0.ok() == b1.ok(), "θ = z + z^2".to_string())
    });
    Ok(())
}

fn check(input: &InputFile, opts: &Options) -> JobResult {
    let mut c = Checks { lines: Vec::new() };
    match input {
        InputFile::Expansion(_) => {
            let r = realization(input, opts)?;
            let k = r.rank();
            c.add("theme generated", true, format!("rank {k}"));
            let p = HomogeneousElement::from_element(&r.relation.homogeneous_part(k), k);
            if let Some(p) = p.filter(|_| r.relation.order() == Some(k)) {
                let via_alg = p.bernstein_polynomial();
                let via_sat = bernstein_char_poly(&r.module);
                let ok = via_alg.is_ok() && via_alg.as_ref().ok() == via_sat.as_ref().ok();
                c.add("Bernstein: algebra = saturation", ok, factored(&p));
            }
            let ranks: Vec<usize> = log_filtration(&r).iter().map(|p| p.rank).collect();
            c.add("log filtration increases to the rank", ranks.windows(2).all(|w| w[0] <= w[1]) && ranks.last() == Some(&k), format!("{ranks:?}"));
            let sp = XiSpace::of_element(&r.element)?;
            let total: usize = sp.lambdas().iter().map(|l| primitive_filtration(&r, &[l.clone()]).rank).sum();
            c.add("primitive parts fit in the rank", total <= k, format!("sum of ranks {total}"));
            module_checks(&mut c, &r.module)?;
        }
        other => module_checks(&mut c, &module_of(other, opts)?)?,
    }
    let failed = c.lines.iter().any(|(_, ok, _)| !ok);
    let mut text = String::new();
    for (n, ok, d) in &c.lines {
        writeln!(text, "{} {n}: {d}", if *ok { "PASS" } else { "FAIL" }).unwrap();
    }
    let js: Vec<Value> = c.lines.iter().map(|(n, ok, d)| json!({"check": n, "pass": ok, "detail": d})).collect();
    Ok(Outcome { json: json!({"checks": js}), text, failed })
}
