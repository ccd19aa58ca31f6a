use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};
use teich_core::boundary::{
    boundary_samples, check_compatibility, cross_ratio_norm, extremal_fits, holder_fit,
    is_orientation_preserving, BoundarySample, CompatibilityReport, CrossRatioNorm, HolderFit,
    SampleKind, DEFAULT_PAIR_CAP,
};
use teich_core::marked_group::{punctured_torus, thrice_punctured_sphere, TorusRoot};
use teich_core::report::{self, Meta};
use teich_core::spectra::{self, verify, SearchOptions};
use teich_core::{
    Error, ExtendedReal, IsometryClass, MarkedGroup, MarkedIsomorphism, MoebiusMap, Tolerances,
    Word,
};

use crate::args::{Check, Cli, Command, Format, Pair, Parabolic};

#[derive(Debug)]
pub enum Failure {
    /// A verification ran and did not pass.
    Checks,
    Usage(String),
    Budget(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            Error::InvalidParameter(_) | Error::InvalidWord(_) => Failure::Usage(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

#[derive(Debug, Serialize)]
struct RunConfig {
    command: String,
    inputs: Vec<String>,
    max_len: Option<u64>,
    depth: Option<u32>,
    seed: Option<u64>,
    tol: BTreeMap<String, f64>,
    out: Option<PathBuf>,
    format: Format,
    params: BTreeMap<&'static str, Value>,
}

impl RunConfig {
    fn new(cli: &Cli, command: &str, inputs: &[&String]) -> Self {
        RunConfig {
            command: command.to_string(),
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            max_len: None,
            depth: None,
            seed: None,
            tol: BTreeMap::new(),
            out: cli.out.clone(),
            format: cli.format,
            params: BTreeMap::new(),
        }
    }
}

struct Run<'a> {
    cli: &'a Cli,
    config: RunConfig,
    tol: Tolerances,
}

impl<'a> Run<'a> {
    fn new(cli: &'a Cli, command: &str, inputs: &[&String]) -> Result<Self, Failure> {
        let mut config = RunConfig::new(cli, command, inputs);
        let mut tol = Tolerances::default();
        for spec in &cli.tol {
            tol.apply_override(spec)?;
            let (key, value) = spec.split_once('=').expect("validated override");
            config.tol.insert(
                key.trim().to_string(),
                value.trim().parse().expect("validated override"),
            );
        }
        Ok(Run { cli, config, tol })
    }

    fn param(&mut self, key: &'static str, value: impl Serialize) {
        self.config
            .params
            .insert(key, serde_json::to_value(value).expect("plain data"));
    }

    fn json<R: Serialize>(&self, result: &R) -> Result<String, Failure> {
        let meta = (!self.cli.no_meta).then(Meta::now);
        Ok(report::to_json(&self.config, result, meta)?)
    }

    fn write(&self, text: &str) -> Result<(), Failure> {
        match &self.cli.out {
            Some(path) => fs::write(path, text)
                .map_err(|e| Failure::Other(format!("writing {}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    /// Writes a companion file next to `--out`, if any.
    fn write_beside(&self, extension: &str, text: &str) -> Result<(), Failure> {
        if let Some(path) = &self.cli.out {
            let path = path.with_extension(extension);
            fs::write(&path, text)
                .map_err(|e| Failure::Other(format!("writing {}: {e}", path.display())))?;
        }
        Ok(())
    }

    fn load(&self, spec: &str) -> Result<MarkedGroup, Failure> {
        load_group(spec, &self.tol)
    }
}

/// Reads a group file or builds a builtin group.
pub fn load_group(spec: &str, tol: &Tolerances) -> Result<MarkedGroup, Failure> {
    if let Some(rest) = spec.strip_prefix("builtin:") {
        return builtin(rest).map_err(|e| match e {
            Failure::Usage(msg) => Failure::Usage(format!("{spec}: {msg}")),
            other => other,
        });
    }
    let text =
        fs::read_to_string(spec).map_err(|e| Failure::Other(format!("reading {spec}: {e}")))?;
    MarkedGroup::from_json(&text, tol).map_err(|e| match e {
        Error::BudgetExceeded { .. } => e.into(),
        e => Failure::Other(format!("{spec}: {e}")),
    })
}

fn builtin(name: &str) -> Result<MarkedGroup, Failure> {
    if name == "tps" {
        return Ok(thrice_punctured_sphere());
    }
    let Some(params) = name.strip_prefix("torus:") else {
        return Err(Failure::Usage(format!(
            "unknown builtin `{name}` (expected tps or torus:X,Y[,plus|minus])"
        )));
    };
    let parts: Vec<&str> = params.split(',').map(str::trim).collect();
    let number = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| Failure::Usage(format!("torus trace `{s}` is not a number")))
    };
    let (x, y, root) = match parts.as_slice() {
        [x, y] => (number(x)?, number(y)?, TorusRoot::Plus),
        [x, y, r] => (number(x)?, number(y)?, r.parse::<TorusRoot>()?),
        _ => return Err(Failure::Usage("expected torus:X,Y[,plus|minus]".into())),
    };
    Ok(punctured_torus(x, y, root)?)
}

/// Parses `"1 -2"` or `"1,-2"`.
fn parse_word(s: &str) -> Result<Word, Failure> {
    let letters = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i32>()
                .map_err(|_| Failure::Usage(format!("word `{s}`: `{t}` is not a generator index")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Word::new(letters)?)
}

pub fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Classify { group } => classify(cli, group),
        Command::Distance {
            source,
            target,
            method,
            max_len,
            depth,
        } => {
            let mut run = Run::new(cli, "distance", &[source, target])?;
            run.config.max_len = Some(*max_len);
            run.config.depth = Some(*depth);
            run.param("method", spectra::Method::from(*method));
            distance(
                run,
                source,
                target,
                (*method).into(),
                *max_len as usize,
                *depth,
            )
        }
        Command::Verify { check } => verify_check(cli, check),
        Command::Boundary {
            source,
            target,
            max_len,
            anchor,
            fits,
            window,
            norm,
            tuples,
            seed,
        } => {
            let mut run = Run::new(cli, "boundary", &[source, target])?;
            run.config.max_len = Some(*max_len);
            run.config.seed = *seed;
            run.param("anchor", anchor);
            run.param("fits", fits);
            run.param("window", window);
            run.param("norm", norm);
            if *norm {
                run.param("tuples", tuples);
            }
            let opts = BoundaryOptions {
                max_len: *max_len as usize,
                anchors: anchor,
                fits: *fits,
                window: *window,
                norm: norm.then(|| (*tuples, seed.expect("clap requires --seed with --norm"))),
            };
            boundary(run, source, target, &opts)
        }
    }
}

#[derive(Debug, Serialize)]
struct Element {
    role: &'static str,
    word: Word,
    matrix: [[f64; 2]; 2],
    trace: f64,
    #[serde(flatten)]
    class: IsometryClass,
}

#[derive(Debug, Serialize)]
struct Classification {
    label: String,
    rank: usize,
    elements: Vec<Element>,
}

fn classify(cli: &Cli, spec: &String) -> Result<(), Failure> {
    let run = Run::new(cli, "classify", &[spec])?;
    let group = run.load(spec)?;
    let mut elements = Vec::new();
    let generators =
        (1..=group.rank() as i32).map(|i| ("generator", Word::new([i]).expect("letter")));
    let peripherals = group
        .peripherals()
        .iter()
        .map(|w| ("peripheral", w.clone()));
    for (role, word) in generators.chain(peripherals) {
        let map = group.evaluate(&word);
        elements.push(Element {
            role,
            matrix: map.rows(),
            trace: map.trace(),
            class: map.classify_with(&run.tol)?,
            word,
        });
    }
    let result = Classification {
        label: group.label().to_string(),
        rank: group.rank(),
        elements,
    };
    let text = match cli.format {
        Format::Json => run.json(&result)?,
        Format::Csv => {
            let point = |p: Option<ExtendedReal>| p.map(|p| p.to_string()).unwrap_or_default();
            report::csv_table(
                &[
                    "role",
                    "word",
                    "kind",
                    "trace",
                    "lambda",
                    "omega",
                    "attracting",
                    "repelling",
                ],
                result.elements.iter().map(|e| {
                    vec![
                        e.role.to_string(),
                        e.word.to_string(),
                        serde_json::to_value(e.class.kind())
                            .ok()
                            .and_then(|v| v.as_str().map(str::to_string))
                            .unwrap_or_default(),
                        e.trace.to_string(),
                        e.class.lambda().to_string(),
                        e.class.omega().map(|w| w.to_string()).unwrap_or_default(),
                        point(e.class.attracting()),
                        point(e.class.repelling()),
                    ]
                }),
            )?
        }
    };
    run.write(&text)
}

fn distance(
    run: Run,
    source: &str,
    target: &str,
    method: spectra::Method,
    max_len: usize,
    depth: u32,
) -> Result<(), Failure> {
    let (x, y) = (run.load(source)?, run.load(target)?);
    let opts = SearchOptions::new(max_len)
        .with_depth(depth)
        .with_tol(run.tol);
    let result = spectra::distance(&x, &y, method, &opts)?;
    let traces = report::distance_traces_csv(&result)?;
    match run.cli.format {
        Format::Json => {
            run.write(&run.json(&result)?)?;
            run.write_beside("trace.csv", &traces)
        }
        Format::Csv => run.write(&traces),
    }
}

fn hyperbolic_at_zero(lambda: f64, repelling: f64) -> Result<MoebiusMap, Failure> {
    Ok(MoebiusMap::hyperbolic(
        lambda,
        ExtendedReal::Finite(0.0),
        ExtendedReal::Finite(repelling),
    )?)
}

fn pair_maps(p: &Pair) -> Result<(MoebiusMap, MoebiusMap), Failure> {
    Ok((
        hyperbolic_at_zero(p.lsrc, p.nsrc)?,
        hyperbolic_at_zero(p.ltgt, p.ntgt)?,
    ))
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn verify_check(cli: &Cli, check: &Check) -> Result<(), Failure> {
    if cli.format == Format::Csv {
        return Err(Failure::Usage(
            "verify writes PASS/FAIL lines and JSON only".into(),
        ));
    }
    let name = match check {
        Check::Tr(_) => "tr",
        Check::Square(_) => "square",
        Check::Eq2(_) => "eq2",
        Check::Eq3 { .. } => "eq3",
        Check::Bn(_) => "bn",
    };
    let mut run = Run::new(cli, &format!("verify {name}"), &[])?;
    let (pass, line, result) = match check {
        Check::Tr(p) => {
            run.param("pair", p);
            let (s, t) = pair_maps(p)?;
            let r = verify::verify_lemma_tr(&s, &t, p.nmax)?;
            let (first, last) = (&r.points[1], &r.points[r.points.len() - 1]);
            let line = format!(
                "s_lambda={} s_tr({})={} s_tr({})={} max_residual={:e}",
                r.s_lambda, first.n, first.s_tr, last.n, last.s_tr, r.max_residual
            );
            (r.pass, line, json!(r))
        }
        Check::Square(Parabolic { omega, fixed }) => {
            run.param("omega", omega);
            run.param("fixed", fixed);
            let r = verify::verify_square(*omega, *fixed)?;
            let line = format!(
                "signed={} expected={} residual={:e}",
                r.signed, r.expected, r.residual
            );
            (r.pass, line, json!(r))
        }
        Check::Eq2(Parabolic { omega, fixed }) => {
            run.param("omega", omega);
            run.param("fixed", fixed);
            let r = verify::verify_eq2(*omega, *fixed)?;
            let line = format!(
                "trace={} expected={} residual={:e}",
                r.trace, r.expected, r.residual
            );
            (r.pass, line, json!(r))
        }
        Check::Eq3 {
            lambda,
            repelling,
            n,
        } => {
            run.param("lambda", lambda);
            run.param("N", repelling);
            run.param("n", n);
            let g = hyperbolic_at_zero(*lambda, *repelling)?;
            let r = verify::verify_eq3(&g, *n, &run.tol)?;
            let line = format!(
                "closed_form={} direct={} relative_error={:e}",
                r.closed_form, r.direct, r.relative_error
            );
            (r.pass, line, json!(r))
        }
        Check::Bn(p) => {
            run.param("pair", p);
            let (s, t) = pair_maps(p)?;
            let r = verify::verify_bn_limit(&s, &t, p.nmax, &run.tol)?;
            let (first, last) = (r.b[0], r.b[r.b.len() - 1]);
            let line = format!(
                "a={} b_1={first} b_{}={last} |b_1-a|={:e} |b_{}-a|={:e}",
                r.a,
                r.b.len(),
                (first - r.a).abs(),
                r.b.len(),
                (last - r.a).abs()
            );
            (r.pass, line, json!(r))
        }
    };
    println!("{name}: {} {line}", verdict(pass));
    if run.cli.out.is_some() {
        run.write(&run.json(&json!({ "check": name, "pass": pass, "report": result }))?)?;
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

struct BoundaryOptions<'a> {
    max_len: usize,
    anchors: &'a [String],
    fits: usize,
    window: f64,
    /// Tuple count and seed.
    norm: Option<(usize, u64)>,
}

#[derive(Debug, Serialize)]
struct BoundaryReport {
    samples: usize,
    orientation_preserving: bool,
    compatibility: CompatibilityReport,
    fits: Vec<HolderFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    norm: Option<CrossRatioNorm>,
}

/// Index of the sample at the fixed point of `spec`, appending that point
/// when no sample sits there yet.
fn anchor_index(
    iso: &MarkedIsomorphism,
    samples: &mut Vec<BoundarySample>,
    spec: &str,
    tol: &Tolerances,
) -> Result<usize, Failure> {
    let word = parse_word(spec)?;
    if word.is_empty() || word.max_generator() > iso.source().rank() {
        return Err(Failure::Usage(format!(
            "anchor `{spec}` is not a non-trivial word in the generators"
        )));
    }
    let (s, t) = iso.evaluate(&word);
    let (cs, ct) = (s.classify_with(tol)?, t.classify_with(tol)?);
    let (Some(x), Some(y)) = (cs.attracting(), ct.attracting()) else {
        return Err(Failure::Usage(format!(
            "anchor `{spec}` is neither hyperbolic nor parabolic"
        )));
    };
    if let Some(i) = samples.iter().position(|p| p.x.approx_eq(x, tol.pt)) {
        return Ok(i);
    }
    let kind = match cs {
        IsometryClass::Parabolic { .. } => SampleKind::ParabolicFix,
        _ => SampleKind::AttractingHyp,
    };
    samples.push(BoundarySample { word, x, y, kind });
    Ok(samples.len() - 1)
}

fn boundary(run: Run, source: &str, target: &str, opts: &BoundaryOptions) -> Result<(), Failure> {
    let tol = run.tol;
    let iso = MarkedIsomorphism::new(run.load(source)?, run.load(target)?, &tol)?;
    let samples = boundary_samples(&iso, opts.max_len, &tol)?;
    let fits = if opts.anchors.is_empty() {
        extremal_fits(&iso, &samples, opts.fits, opts.window, &tol)?
    } else {
        let mut points = samples.clone();
        let mut fits = Vec::new();
        for a in opts.anchors {
            let i = anchor_index(&iso, &mut points, a, &tol)?;
            fits.push(holder_fit(&points, i, opts.window, &tol)?);
        }
        fits
    };
    let norm = match opts.norm {
        Some((tuples, seed)) => Some(cross_ratio_norm(&iso, &samples, tuples, seed, &tol)?),
        None => None,
    };
    let result = BoundaryReport {
        samples: samples.len(),
        orientation_preserving: is_orientation_preserving(&samples),
        compatibility: check_compatibility(&iso, opts.max_len, DEFAULT_PAIR_CAP, &tol)?,
        fits,
        norm,
    };
    let table = report::samples_csv(&samples)?;
    match run.cli.format {
        Format::Json => {
            run.write(&run.json(&result)?)?;
            run.write_beside("samples.csv", &table)
        }
        Format::Csv => run.write(&table),
    }
}
