//! Command-line front end for the `localfields` library.
//!
//! Exit codes: 0 on success, 2 for invalid input (bad flags, malformed
//! polynomials or polygons, out-of-range selectors), 3 for an internal
//! consistency failure (a generated record that does not reproduce its own
//! invariants) — never silent.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use localfields::{
    aut_count, aut_upper_bound, enumerate_polygons, invariant_orbits, krasner_precision, orbit,
    ore_range, partition_star, polygon_of_int_polynomial, polygon_of_valuations, polygon_sort_key,
    residuals_of_polynomial, run_job, summarize, validate_polygon, validate_residuals, EisPoly,
    EnumerationJob, EnumerationOutcome, Error as LibError, ExtensionRecord, LocalField,
    PolygonCheck, RamPolygon, ResidualCheck, ResidualTuple, ResidueElem, ResidueField, Selector,
};

#[derive(Parser)]
#[command(
    name = "localfields",
    version,
    about = "Enumerate totally ramified extensions of p-adic fields by ramification polygon \
             and residual-polynomial invariants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Base-field selection: a JSON config file or a bare prime.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct FieldOpt {
    /// Path to a JSON field config, e.g. {"p":2,"unramified":[1,1,1]}
    #[arg(long, value_name = "PATH")]
    field: Option<PathBuf>,
    /// Use K = Q_p for this prime
    #[arg(short, long, value_name = "P")]
    prime: Option<u64>,
}

/// Discriminant level: the exponent itself or J_0 directly.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct LevelOpt {
    /// Discriminant exponent v_π(disc); J_0 = disc − n + 1
    #[arg(long)]
    disc: Option<u64>,
    /// J_0 directly
    #[arg(long)]
    j0: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// List the ramification polygons for a degree and discriminant
    Polygons {
        #[command(flatten)]
        field: FieldOpt,
        /// Extension degree n
        #[arg(short = 'n', long = "degree")]
        degree: u64,
        #[command(flatten)]
        level: LevelOpt,
        /// One JSON object per polygon instead of text
        #[arg(long)]
        json: bool,
    },
    /// List residual-polynomial orbits and their A*-classes per polygon
    Invariants {
        #[command(flatten)]
        field: FieldOpt,
        /// Extension degree n
        #[arg(short = 'n', long = "degree")]
        degree: u64,
        #[command(flatten)]
        level: LevelOpt,
        /// Restrict to one polygon, written as {(1,14),(3,6),(9,0)}
        #[arg(long, value_name = "POINTS")]
        polygon: Option<String>,
        /// Restrict to the polygon at this position in the listing
        #[arg(long, value_name = "IDX")]
        polygon_index: Option<usize>,
        /// One JSON object per polygon instead of text
        #[arg(long)]
        json: bool,
    },
    /// Enumerate extensions, one record per line
    Enumerate {
        #[command(flatten)]
        field: FieldOpt,
        /// Extension degree n
        #[arg(short = 'n', long = "degree")]
        degree: u64,
        #[command(flatten)]
        level: LevelOpt,
        /// Restrict to one polygon, written as {(1,14),(3,6),(9,0)}
        #[arg(long, value_name = "POINTS")]
        polygon: Option<String>,
        /// Restrict to the orbit at this position in the polygon's listing
        #[arg(long, value_name = "IDX", requires = "polygon")]
        invariant: Option<usize>,
        /// Print the template-count total instead of records
        #[arg(long)]
        count_only: bool,
        /// Emit full template streams without the root-counting filter
        #[arg(long)]
        no_filter: bool,
        /// One JSON record per line instead of text
        #[arg(long)]
        json: bool,
        /// Worker threads (0 = all cores)
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Report polygon, invariant orbit and aut bound of one polynomial
    Verify {
        #[command(flatten)]
        field: FieldOpt,
        /// Count the polynomial's roots in its own field (|Aut|)
        #[arg(long)]
        roots: bool,
        /// One JSON object instead of text
        #[arg(long)]
        json: bool,
        /// Monic integer polynomial, e.g. "x^9+6x^3+9x+3"
        polynomial: String,
    },
}

// ---- error classification ----

/// Invalid input; exits with code 2.
#[derive(Debug)]
struct UserError(String);

impl fmt::Display for UserError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UserError {}

/// Internal consistency failure; exits with code 3.
#[derive(Debug)]
struct InternalError(String);

impl fmt::Display for InternalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InternalError {}

fn user_err(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UserError(msg.into()))
}

fn internal_err(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(InternalError(msg.into()))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<InternalError>().is_some() {
        return 3;
    }
    if err.downcast_ref::<UserError>().is_some() {
        return 2;
    }
    if let Some(le) = err.downcast_ref::<LibError>() {
        return match le {
            LibError::DivisionByZero | LibError::InsufficientPrecision(_) => 3,
            _ => 2,
        };
    }
    2
}

fn main() -> ExitCode {
    // Die quietly on SIGPIPE (e.g. `localfields enumerate ... | head`)
    // instead of panicking mid-println.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Polygons { field, degree, level, json } => {
            cmd_polygons(&load_field(&field)?, degree, &level, json)
        }
        Command::Invariants { field, degree, level, polygon, polygon_index, json } => {
            cmd_invariants(&load_field(&field)?, degree, &level, polygon, polygon_index, json)
        }
        Command::Enumerate {
            field,
            degree,
            level,
            polygon,
            invariant,
            count_only,
            no_filter,
            json,
            jobs,
        } => cmd_enumerate(
            &load_field(&field)?,
            degree,
            &level,
            polygon,
            invariant,
            count_only,
            no_filter,
            json,
            jobs,
        ),
        Command::Verify { field, roots, json, polynomial } => {
            cmd_verify(&load_field(&field)?, &polynomial, roots, json)
        }
    }
}

// ---- shared plumbing ----

fn load_field(f: &FieldOpt) -> Result<LocalField> {
    match (&f.field, f.prime) {
        (Some(path), None) => {
            let s = fs::read_to_string(path)
                .with_context(|| format!("cannot read field config {}", path.display()))?;
            Ok(LocalField::from_json_str(&s)?)
        }
        (None, Some(p)) => Ok(LocalField::qp(p)?),
        _ => Err(user_err("exactly one of --field or --prime is required")),
    }
}

/// Turn --disc/--j0 into an admissible J_0 or a code-2 error naming the
/// valid range.
fn resolve_j0(k: &LocalField, n: u64, level: &LevelOpt) -> Result<u64> {
    if n < 2 {
        return Err(user_err("degree must be at least 2"));
    }
    let admissible = ore_range(k, n);
    let (lo, hi) = match (admissible.first(), admissible.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => return Err(user_err(format!("no admissible discriminant for degree {n}"))),
    };
    let j0 = match (level.disc, level.j0) {
        (Some(d), None) => {
            if d + 1 < n + lo {
                return Err(user_err(format!(
                    "discriminant exponent {d} is below the minimum {} for degree {n}",
                    n + lo - 1
                )));
            }
            d + 1 - n
        }
        (None, Some(j)) => j,
        _ => unreachable!("clap enforces exactly one of --disc/--j0"),
    };
    if !admissible.contains(&j0) {
        return Err(user_err(format!(
            "discriminant exponent {} (J_0 = {j0}) is not admissible for degree {n}: \
             the exponent must lie between {} and {}, with J_0 in {admissible:?}",
            n + j0 - 1,
            n + lo - 1,
            n + hi - 1,
        )));
    }
    Ok(j0)
}

/// Parse a braced point list: {(1,14),(3,6),(9,0)}.
fn parse_points(s: &str) -> Result<Vec<(u64, u64)>> {
    let bad = |what: &str| user_err(format!("malformed polygon '{s}': {what}"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = t
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| bad("expected {(x,y),...}"))?;
    let mut pts = Vec::new();
    let mut rest = inner;
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
        let (pair, after) = body.split_once(')').ok_or_else(|| bad("missing ')'"))?;
        let (xs, ys) = pair.split_once(',').ok_or_else(|| bad("expected (x,y)"))?;
        let x: u64 = xs.parse().map_err(|_| bad("abscissa is not a number"))?;
        let y: u64 = ys.parse().map_err(|_| bad("ordinate is not a number"))?;
        pts.push((x, y));
        rest = after.strip_prefix(',').unwrap_or(after);
    }
    if pts.is_empty() {
        return Err(bad("no points"));
    }
    Ok(pts)
}

fn polygon_from_arg(k: &LocalField, n: u64, j0: u64, arg: &str) -> Result<RamPolygon> {
    let pts = parse_points(arg)?;
    let r = match validate_polygon(k, n, &pts)? {
        PolygonCheck::Valid(r) => r,
        PolygonCheck::Invalid(v) => {
            return Err(user_err(format!(
                "polygon {arg} is not realizable ({}: {})",
                v.condition, v.detail
            )))
        }
    };
    if r.j0() != j0 {
        return Err(user_err(format!(
            "polygon {arg} has J_0 = {}, but the requested level is J_0 = {j0}",
            r.j0()
        )));
    }
    Ok(r)
}

// ---- rendering ----

fn render_points(r: &RamPolygon) -> String {
    let pts: Vec<String> = r
        .points()
        .iter()
        .filter(|pt| pt.s.is_some())
        .map(|pt| format!("({},{})", pt.x, pt.y))
        .collect();
    format!("{{{}}}", pts.join(","))
}

fn render_elem(rf: &ResidueField, e: ResidueElem) -> String {
    let co = rf.coords(e);
    if co.len() == 1 {
        co[0].to_string()
    } else {
        let parts: Vec<String> = co.iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

fn render_seg_poly(rf: &ResidueField, coeffs: &[ResidueElem]) -> String {
    let mut terms = Vec::new();
    for (j, &c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let cs = render_elem(rf, c);
        terms.push(match j {
            0 => cs,
            _ => {
                let xs = if j == 1 { "x".to_string() } else { format!("x^{j}") };
                if cs == "1" {
                    xs
                } else {
                    format!("{cs}{xs}")
                }
            }
        });
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

fn render_tuple(rf: &ResidueField, a: &ResidualTuple) -> String {
    let segs: Vec<String> = a.segments().iter().map(|s| render_seg_poly(rf, s)).collect();
    format!("({})", segs.join(", "))
}

fn render_record(k: &LocalField, rec: &ExtensionRecord) -> String {
    let gen = rec
        .generator
        .to_integer_string(k)
        .unwrap_or_else(|| rec.generator.to_json(k).to_string());
    let mut line = gen;
    if let Some(a) = rec.aut_count {
        line.push_str(&format!("  aut={a}"));
    }
    if rec.siblings_merged > 1 {
        line.push_str(&format!("  merged={}", rec.siblings_merged));
    }
    line
}

// ---- subcommands ----

fn cmd_polygons(k: &LocalField, n: u64, level: &LevelOpt, json: bool) -> Result<()> {
    let j0 = resolve_j0(k, n, level)?;
    for r in enumerate_polygons(k, n, j0)? {
        if json {
            println!("{}", r.to_json());
            continue;
        }
        println!("{}", render_points(&r));
        for seg in r.segments() {
            let (l, rt) = (&r.points()[seg.left], &r.points()[seg.right]);
            let slope = if seg.h == 0 {
                "0".to_string()
            } else {
                format!("-{}/{}", seg.h, seg.e)
            };
            println!("  segment ({},{})->({},{}): slope {slope}", l.x, l.y, rt.x, rt.y);
            if seg.h == 0 {
                continue;
            }
            let ((num, den), at) = r.hasse_herbrand(seg.h, seg.e);
            let val = if den == 1 { num.to_string() } else { format!("{num}/{den}") };
            let xs: Vec<String> = at.iter().map(|x| x.to_string()).collect();
            println!(
                "  n·φ at slope {}/{}: {val} (attained at x = {})",
                seg.h,
                seg.e,
                xs.join(",")
            );
        }
    }
    Ok(())
}

fn cmd_invariants(
    k: &LocalField,
    n: u64,
    level: &LevelOpt,
    polygon: Option<String>,
    polygon_index: Option<usize>,
    json: bool,
) -> Result<()> {
    let j0 = resolve_j0(k, n, level)?;
    let polys = enumerate_polygons(k, n, j0)?;
    let selected: Vec<(usize, RamPolygon)> = match (&polygon, polygon_index) {
        (Some(_), Some(_)) => {
            return Err(user_err("give at most one of --polygon and --polygon-index"))
        }
        (Some(arg), None) => {
            let r = polygon_from_arg(k, n, j0, arg)?;
            let idx = polys
                .iter()
                .position(|p| polygon_sort_key(p) == polygon_sort_key(&r))
                .ok_or_else(|| user_err(format!("polygon {arg} is not in the listing")))?;
            vec![(idx, r)]
        }
        (None, Some(idx)) => {
            if idx >= polys.len() {
                return Err(user_err(format!(
                    "polygon index {idx} out of range: {} polygon(s) at this level",
                    polys.len()
                )));
            }
            vec![(idx, polys[idx].clone())]
        }
        (None, None) => polys.into_iter().enumerate().collect(),
    };
    let rf = k.residue_field();
    for (idx, r) in &selected {
        let orbits = invariant_orbits(k, r)?;
        if json {
            let os: Vec<serde_json::Value> = orbits
                .iter()
                .map(|o| {
                    let classes: Vec<serde_json::Value> = partition_star(k, r, o)
                        .iter()
                        .map(|class| {
                            serde_json::Value::Array(
                                class.iter().map(|a| a.to_json(rf)).collect(),
                            )
                        })
                        .collect();
                    serde_json::json!({
                        "canonical": o.canonical().to_json(rf),
                        "size": o.orbit_size(),
                        "stabilizer": o.stabilizer_size(),
                        "classes": classes,
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::json!({ "polygon": r.to_json(), "orbits": os })
            );
            continue;
        }
        println!("polygon {idx}: {}", render_points(r));
        for (oi, o) in orbits.iter().enumerate() {
            println!(
                "  orbit {oi}: canonical {}, size {}, stabilizer {}",
                render_tuple(rf, o.canonical()),
                o.orbit_size(),
                o.stabilizer_size()
            );
            let classes = partition_star(k, r, o);
            for (ci, class) in classes.iter().enumerate() {
                let members: Vec<String> = class.iter().map(|a| render_tuple(rf, a)).collect();
                println!("    class {ci}: {}", members.join(" "));
            }
            for delta0 in rf.nth_power_class_reps(r.n()) {
                let mut valid = Vec::new();
                for (ci, class) in classes.iter().enumerate() {
                    for a in class {
                        if matches!(validate_residuals(k, r, a, delta0)?, ResidualCheck::Valid) {
                            valid.push(ci.to_string());
                            break;
                        }
                    }
                }
                println!(
                    "    δ_0 = {}: valid classes [{}]",
                    render_elem(rf, delta0),
                    valid.join(",")
                );
            }
        }
    }
    Ok(())
}

/// Every record must reproduce the polygon, orbit and δ_0 it was filed
/// under; a mismatch is an internal error (exit 3), never silent.
fn round_trip_check(k: &LocalField, recs: &[ExtensionRecord]) -> Result<()> {
    for (i, rec) in recs.iter().enumerate() {
        let again = polygon_of_valuations(k, &rec.generator.valuations())?;
        if polygon_sort_key(&again) != polygon_sort_key(&rec.polygon) {
            return Err(internal_err(format!(
                "record {i}: generator polygon {} differs from prescribed {}",
                render_points(&again),
                render_points(&rec.polygon)
            )));
        }
        let tup = residuals_of_polynomial(k, &rec.generator, &rec.polygon)?;
        let o = orbit(k, &rec.polygon, &tup)?;
        if o.canonical() != &rec.invariant {
            return Err(internal_err(format!(
                "record {i}: generator residuals land in a different orbit"
            )));
        }
        if rec.generator.digit(0, 1) != rec.delta0 {
            return Err(internal_err(format!(
                "record {i}: generator constant digit differs from its δ_0 class"
            )));
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)] // thin flag-to-job adapter
fn cmd_enumerate(
    k: &LocalField,
    n: u64,
    level: &LevelOpt,
    polygon: Option<String>,
    invariant: Option<usize>,
    count_only: bool,
    no_filter: bool,
    json: bool,
    jobs: usize,
) -> Result<()> {
    let j0 = resolve_j0(k, n, level)?;
    let selector = match polygon {
        Some(arg) => {
            let r = polygon_from_arg(k, n, j0, &arg)?;
            match invariant {
                Some(idx) => {
                    let orbits = invariant_orbits(k, &r)?;
                    if idx >= orbits.len() {
                        return Err(user_err(format!(
                            "invariant index {idx} out of range: polygon has {} orbit(s)",
                            orbits.len()
                        )));
                    }
                    Selector::ByOrbit(r, orbits[idx].canonical().clone())
                }
                None => Selector::ByPolygon(r),
            }
        }
        None => Selector::ByDisc { n, j0 },
    };
    let job = EnumerationJob { selector, count_only, no_filter, threads: jobs };
    match run_job(k, &job)? {
        EnumerationOutcome::Count(c) => println!("{c}"),
        EnumerationOutcome::Records(recs) => {
            round_trip_check(k, &recs)?;
            if json {
                for rec in &recs {
                    println!("{}", rec.to_json(k));
                }
                return Ok(());
            }
            for rec in &recs {
                println!("{}", render_record(k, rec));
            }
            let rf = k.residue_field();
            println!();
            println!("summary:");
            for row in summarize(&recs) {
                let mut line = format!(
                    "  {} A={} δ_0={}: {} extension(s)",
                    render_points(&row.polygon),
                    render_tuple(rf, &row.invariant),
                    render_elem(rf, row.delta0),
                    row.extensions
                );
                if row.filtered {
                    let auts: Vec<String> =
                        row.aut_counts.iter().map(|(a, m)| format!("{a}x{m}")).collect();
                    line.push_str(&format!(
                        " (filtered from {} polynomials; aut {})",
                        row.polynomials,
                        auts.join(",")
                    ));
                }
                println!("{line}");
            }
            println!(
                "total: {} extension(s) of degree {n}, disc exponent {} (J_0 = {j0})",
                recs.len(),
                n + j0 - 1
            );
        }
    }
    Ok(())
}

/// Parse a monic integer polynomial like "x^9+6x^3+9x+3" into ascending
/// coefficients.
fn parse_int_poly(s: &str) -> Result<Vec<i64>> {
    let bad = |what: String| user_err(format!("cannot parse polynomial '{s}': {what}"));
    let t: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad("empty input".into()));
    }
    let mut terms: Vec<(u32, i64)> = Vec::new();
    let mut i = 0usize;
    let mut sign: i64 = 1;
    if t[0] == '+' || t[0] == '-' {
        sign = if t[0] == '-' { -1 } else { 1 };
        i = 1;
    }
    loop {
        // one term: [digits] ['x' ['^' digits]]
        let digit_start = i;
        while i < t.len() && t[i].is_ascii_digit() {
            i += 1;
        }
        let coef: Option<i64> = if i > digit_start {
            Some(
                t[digit_start..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| bad("coefficient out of range".into()))?,
            )
        } else {
            None
        };
        let mut exp = 0u32;
        if i < t.len() && (t[i] == 'x' || t[i] == 'X') {
            i += 1;
            exp = 1;
            if i < t.len() && t[i] == '^' {
                i += 1;
                let e_start = i;
                while i < t.len() && t[i].is_ascii_digit() {
                    i += 1;
                }
                if i == e_start {
                    return Err(bad("missing exponent after '^'".into()));
                }
                exp = t[e_start..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| bad("exponent out of range".into()))?;
            }
        } else if coef.is_none() {
            let what = match t.get(i) {
                Some(ch) => format!("unexpected character '{ch}'"),
                None => "dangling sign".into(),
            };
            return Err(bad(what));
        }
        terms.push((exp, sign * coef.unwrap_or(1)));
        if i == t.len() {
            break;
        }
        sign = match t[i] {
            '+' => 1,
            '-' => -1,
            ch => return Err(bad(format!("expected '+' or '-', found '{ch}'"))),
        };
        i += 1;
        if i == t.len() {
            return Err(bad("dangling sign".into()));
        }
    }
    let degree = terms.iter().map(|&(e, _)| e).max().unwrap() as usize;
    let mut coeffs = vec![0i64; degree + 1];
    for (e, c) in terms {
        coeffs[e as usize] += c;
    }
    Ok(coeffs)
}

fn cmd_verify(k: &LocalField, polynomial: &str, roots: bool, json: bool) -> Result<()> {
    if k.e_abs() != 1 || k.residue_field().q() != k.p() {
        return Err(user_err(
            "verify parses integer polynomials, which needs the base field to be Q_p; \
             pass --prime or a config without tower steps",
        ));
    }
    let coeffs = parse_int_poly(polynomial)?;
    if coeffs.len() < 3 {
        return Err(user_err("polynomial must have degree at least 2"));
    }
    if *coeffs.last().unwrap() != 1 {
        return Err(user_err("polynomial must be monic"));
    }
    let r = polygon_of_int_polynomial(k, &coeffs)?;
    let n = r.n();
    let depth = krasner_precision(n, r.j0()) + 2;
    let phi = EisPoly::from_int_coeffs(k, &coeffs, depth)?;
    let tup = residuals_of_polynomial(k, &phi, &r)?;
    let o = orbit(k, &r, &tup)?;
    let bound = aut_upper_bound(k, &r, &tup)?;
    let counted = if roots { Some(aut_count(k, &phi)?) } else { None };
    let rf = k.residue_field();
    if json {
        println!(
            "{}",
            serde_json::json!({
                "polynomial": polynomial,
                "degree": n,
                "disc_exponent": n + r.j0() - 1,
                "polygon": r.to_json(),
                "invariant": tup.to_json(rf),
                "orbit_members": o.members().iter().map(|a| a.to_json(rf)).collect::<Vec<_>>(),
                "aut_bound": bound,
                "aut_count": counted,
            })
        );
        return Ok(());
    }
    println!("polynomial: {polynomial}");
    println!("degree: {n}, disc exponent: {} (J_0 = {})", n + r.j0() - 1, r.j0());
    println!("polygon: {}", render_points(&r));
    println!("residual invariant: {}", render_tuple(rf, &tup));
    let members: Vec<String> = o.members().iter().map(|a| render_tuple(rf, a)).collect();
    println!("orbit: {{{}}}", members.join(", "));
    println!("aut bound: {bound}");
    if let Some(a) = counted {
        println!("aut count: {a}");
    }
    Ok(())
}
