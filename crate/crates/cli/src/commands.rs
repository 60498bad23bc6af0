use std::collections::BTreeMap;

use lsb_core::brace::{enumerate_braces, BraceError, FiniteSkewBrace, Triviality};
use lsb_core::formats::{self, FormatError};
use lsb_core::group::{isomorphic, FiniteGroup};
use lsb_core::grouplaw::{
    self, check_brace_numeric, check_group_numeric, extract_bracket, extract_triangle, BraceLaw, GroupLaw,
    GroupLawError, RATIONALIZE_TOLERANCE,
};
use lsb_core::lie::{check_postlie, sub_adjacent, IdealFamily, LieAlgebra, LieError, PostLieAlgebra, Rigidity};
use lsb_core::linalg::{format_rational, BilinearMap, RationalSubspace};
use lsb_core::presets;

use crate::report::{element_set, sci, yes_no, Report};
use crate::{CliError, Options};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Group,
    Brace,
    LieAlg,
    PostLie,
    GroupLaw,
    BraceLaw,
}

impl Kind {
    fn keyword(self) -> &'static str {
        match self {
            Kind::Group => "group",
            Kind::Brace => "brace",
            Kind::LieAlg => "liealg",
            Kind::PostLie => "postlie",
            Kind::GroupLaw => "grouplaw",
            Kind::BraceLaw => "bracelaw",
        }
    }
}

enum Structure {
    Group(FiniteGroup),
    Brace(FiniteSkewBrace),
    LieAlg(BilinearMap),
    PostLie(BilinearMap, BilinearMap),
    GroupLaw(GroupLaw),
    BraceLaw(BraceLaw),
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Syntax { .. } => CliError::Usage(e.to_string()),
            other => CliError::Math(other.to_string()),
        }
    }
}

impl From<GroupLawError> for CliError {
    fn from(e: GroupLawError) -> Self {
        match e {
            GroupLawError::Syntax { .. } | GroupLawError::UnknownVariable { .. } | GroupLawError::DimensionMismatch { .. } => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Math(other.to_string()),
        }
    }
}

impl From<LieError> for CliError {
    fn from(e: LieError) -> Self {
        match e {
            LieError::DimTooLarge { .. } => CliError::Usage(e.to_string()),
            other => CliError::Math(other.to_string()),
        }
    }
}

impl From<BraceError> for CliError {
    fn from(e: BraceError) -> Self {
        match e {
            BraceError::OrderBoundExceeded { .. } => CliError::Usage(format!("{e} (raise --max-order)")),
            other => CliError::Math(other.to_string()),
        }
    }
}

fn load(spec: &str, allowed: &[Kind]) -> Result<Structure, CliError> {
    let expected = || allowed.iter().map(|k| k.keyword()).collect::<Vec<_>>().join(", ");
    if let Some(name) = spec.strip_prefix("presets:") {
        for kind in allowed {
            let found = match kind {
                Kind::Group => presets::group(name).map(Structure::Group),
                Kind::Brace => presets::brace(name).map(Structure::Brace),
                Kind::LieAlg => presets::lie_algebra(name).map(|l| Structure::LieAlg(l.bracket().clone())),
                Kind::PostLie => {
                    presets::postlie(name).map(|p| Structure::PostLie(p.dot().bracket().clone(), p.triangle().clone()))
                }
                Kind::GroupLaw => None,
                Kind::BraceLaw => presets::brace_law(name).map(Structure::BraceLaw),
            };
            if let Some(s) = found {
                return Ok(s);
            }
        }
        return Err(CliError::Usage(format!("no preset `{name}` of kind {}", expected())));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| CliError::Io(format!("cannot read {spec}: {e}")))?;
    let keyword = formats::detect_kind(&text).unwrap_or("");
    let Some(kind) = allowed.iter().find(|k| k.keyword() == keyword) else {
        return Err(CliError::Usage(format!("{spec}: expected a file of kind {}", expected())));
    };
    Ok(match kind {
        Kind::Group => Structure::Group(formats::parse_group(&text)?),
        Kind::Brace => Structure::Brace(formats::parse_brace(&text)?),
        Kind::LieAlg => Structure::LieAlg(formats::parse_liealg(&text)?),
        Kind::PostLie => {
            let (c, t) = formats::parse_postlie(&text)?;
            Structure::PostLie(c, t)
        }
        Kind::GroupLaw => Structure::GroupLaw(grouplaw::parse_grouplaw_file(&text)?),
        Kind::BraceLaw => Structure::BraceLaw(grouplaw::parse_bracelaw_file(&text)?),
    })
}

fn verified_postlie(report: &mut Report, dot: &BilinearMap, triangle: &BilinearMap) -> Result<PostLieAlgebra, CliError> {
    let dot = LieAlgebra::new(dot.clone()).map_err(|e| CliError::Math(format!("dot bracket: {e}")))?;
    report.kv("dot_jacobi", "ok");
    let p = check_postlie(&dot, triangle)?;
    report.kv("axioms", "ok");
    report.kv("circ_jacobi", "ok");
    Ok(p)
}

pub(crate) fn check_group(input: &str, opts: &Options, report: &mut Report) -> Result<(), CliError> {
    match load(input, &[Kind::Group, Kind::GroupLaw])? {
        Structure::Group(g) => {
            report.kv("order", g.order());
            report.kv("abelian", yes_no(g.is_abelian()));
            report.kv("solvable", yes_no(g.is_solvable()));
            report.kv("identification", identify(&g));
            report.pass();
        }
        Structure::GroupLaw(law) => {
            report.kv("dim", law.dim());
            sampling_header(report, opts);
            let r = check_group_numeric(&law, opts.samples, opts.tol, opts.seed)?;
            report.kv("identity_residual", sci(r.identity_residual));
            report.kv("associativity_residual", sci(r.associativity_residual));
            report.kv("inverse_residual", sci(r.inverse_residual));
            report.kv("max_residual", sci(r.max_residual()));
            if r.passed() {
                report.pass();
            } else {
                report.fail("residual at or above tolerance");
            }
        }
        _ => unreachable!("load returns an allowed kind"),
    }
    Ok(())
}

fn sampling_header(report: &mut Report, opts: &Options) {
    report.kv("samples", opts.samples);
    report.kv("seed", opts.seed);
    report.kv("tol", sci(opts.tol));
}

pub(crate) fn check_brace(input: &str, opts: &Options, report: &mut Report) -> Result<(), CliError> {
    match load(input, &[Kind::Brace, Kind::BraceLaw])? {
        Structure::Brace(b) => {
            report.kv("order", b.order());
            let triviality = b.classify_triviality();
            let solvable = b.derived_series().solvable;
            let ideals = b.all_ideals(opts.max_order)?.len();
            report.kv("triviality", triviality);
            report.kv("solvable", yes_no(solvable));
            report.kv("ideals", ideals);
            report.kv("simple", yes_no(b.order() > 1 && ideals == 2));
            report.kv("additive_group", identify(b.dot()));
            report.kv("multiplicative_group", identify(b.circ()));
            let solv = if solvable { "solvable" } else { "not solvable" };
            report.kv("summary", format!("{triviality}, {solv}, ideals: {ideals}"));
            report.pass();
        }
        Structure::BraceLaw(law) => {
            numeric_brace(&law, opts, report)?;
            report.pass();
        }
        _ => unreachable!("load returns an allowed kind"),
    }
    Ok(())
}

fn numeric_brace(law: &BraceLaw, opts: &Options, report: &mut Report) -> Result<(), CliError> {
    report.kv("dim", law.dot.dim());
    sampling_header(report, opts);
    let r = check_brace_numeric(&law.dot, &law.circ, opts.samples, opts.tol, opts.seed)?;
    report.kv("dot_max_residual", sci(r.dot.max_residual()));
    report.kv("circ_max_residual", sci(r.circ.max_residual()));
    report.kv("max_brace_residual", sci(r.brace_residual));
    if !r.passed() {
        return Err(CliError::Math("residual at or above tolerance".into()));
    }
    Ok(())
}

fn subspace_line(s: &RationalSubspace) -> String {
    format!("dim {} {s}", s.dim())
}

pub(crate) fn ideals(input: &str, opts: &Options, report: &mut Report) -> Result<(), CliError> {
    match load(input, &[Kind::Brace, Kind::LieAlg, Kind::PostLie])? {
        Structure::Brace(b) => {
            let ideals = b.all_ideals(opts.max_order)?;
            report.kv("order", b.order());
            report.kv("ideals", ideals.len());
            for i in &ideals {
                report.kv("ideal", format!("size {} {}", i.elements.len(), element_set(&i.elements)));
            }
            report.pass();
        }
        Structure::LieAlg(bracket) => {
            let l = LieAlgebra::new(bracket)?;
            let lattice = l.all_ideals_lowdim()?;
            report.kv("dim", l.dim());
            report.kv("ideals", lattice.ideals.len());
            report.kv("continuous_families", lattice.families.len());
            for i in &lattice.ideals {
                report.kv("ideal", subspace_line(i));
            }
            for f in &lattice.families {
                report.kv("family", family_line(f));
            }
            report.pass();
        }
        Structure::PostLie(dot, triangle) => {
            report.kv("dim", dot.dim());
            let p = verified_postlie(report, &dot, &triangle)?;
            let circ = p.circ().all_ideals_lowdim()?;
            report.kv("circ_ideals", circ.ideals.len());
            report.kv("circ_continuous_families", circ.families.len());
            for i in &circ.ideals {
                let r = p.brace_ideal_test(i)?;
                report.kv(
                    "circ_ideal",
                    format!(
                        "{} dot_ideal={} triangle_stable={}",
                        subspace_line(i),
                        yes_no(r.dot_ideal),
                        yes_no(r.triangle_stable)
                    ),
                );
            }
            for f in &circ.families {
                report.kv("circ_family", family_line(f));
            }
            let brace = p.brace_ideals_lowdim()?;
            report.kv("brace_ideals", brace.ideals.len());
            report.kv("brace_continuous_families", brace.families.len());
            for i in &brace.ideals {
                report.kv("brace_ideal", subspace_line(i));
            }
            for f in &brace.families {
                report.kv("brace_family", family_line(f));
            }
            report.kv("simple", yes_no(p.is_simple_brace_infinitesimal()?));
            report.pass();
        }
        _ => unreachable!("load returns an allowed kind"),
    }
    Ok(())
}

fn family_line(f: &IdealFamily) -> String {
    match f {
        IdealFamily::Lines(s) => format!("every line in {s}"),
        IdealFamily::Hyperplanes(s) => format!("kernel of every nonzero functional in {s}"),
    }
}

fn dims(series: &[RationalSubspace]) -> String {
    series.iter().map(|s| s.dim().to_string()).collect::<Vec<_>>().join(" ")
}

pub(crate) fn derived(input: &str, _opts: &Options, report: &mut Report) -> Result<(), CliError> {
    match load(input, &[Kind::Brace, Kind::LieAlg, Kind::PostLie])? {
        Structure::Brace(b) => {
            let series = b.derived_series();
            let sizes: Vec<String> = series.terms.iter().map(|t| t.elements.len().to_string()).collect();
            report.kv("order", b.order());
            report.kv("sizes", sizes.join(" "));
            for (i, t) in series.terms.iter().enumerate() {
                report.kv(&format!("term {i}"), element_set(&t.elements));
            }
            report.kv("solvable", yes_no(series.solvable));
            report.pass();
        }
        Structure::LieAlg(bracket) => {
            let l = LieAlgebra::new(bracket)?;
            let ds = l.derived_series();
            report.kv("dim", l.dim());
            report.kv("derived_dims", dims(&ds));
            for (i, t) in ds.iter().enumerate() {
                report.kv(&format!("term {i}"), t);
            }
            report.kv("lower_central_dims", dims(&l.lower_central_series()));
            report.kv("solvable", yes_no(l.is_solvable()));
            report.kv("nilpotent", yes_no(l.is_nilpotent()));
            report.kv("semisimple", yes_no(l.is_semisimple()));
            report.pass();
        }
        Structure::PostLie(dot, triangle) => {
            report.kv("dim", dot.dim());
            let p = verified_postlie(report, &dot, &triangle)?;
            let (series, solvable) = p.brace_derived_series()?;
            report.kv("derived_dims", dims(&series));
            for (i, t) in series.iter().enumerate() {
                report.kv(&format!("term {i}"), t);
            }
            report.kv("solvable", yes_no(solvable));
            report.kv("dot_solvable", yes_no(p.dot().is_solvable()));
            report.kv("circ_solvable", yes_no(p.circ().is_solvable()));
            report.pass();
        }
        _ => unreachable!("load returns an allowed kind"),
    }
    Ok(())
}

pub(crate) fn quotient(input: &str, ideal: &[usize], _opts: &Options, report: &mut Report) -> Result<(), CliError> {
    let Structure::Brace(b) = load(input, &[Kind::Brace])? else {
        unreachable!("load returns an allowed kind")
    };
    let mut set = ideal.to_vec();
    set.sort_unstable();
    set.dedup();
    if let Some(&bad) = set.iter().find(|&&x| x >= b.order()) {
        return Err(CliError::Usage(format!("element {bad} is out of range for order {}", b.order())));
    }
    report.kv("order", b.order());
    report.kv("ideal", element_set(&set));
    let (q, _) = b.quotient(&set)?;
    report.kv("quotient_order", q.order());
    report.kv("quotient_triviality", q.classify_triviality());
    report.kv("quotient_verified", "yes");
    report.pass();
    report.set_artifact(formats::write_brace(&q));
    Ok(())
}

/// Small groups with preset names, tried in order when naming a group.
const KNOWN_GROUPS: [&str; 17] = [
    "v4", "s3", "q8", "c4xc2", "c2cubed", "d4", "a4", "d6", "dic3", "c6xc2", "s4", "c3xc2cubed", "a4xc2", "d12", "c12xc2",
    "s3xc2squared", "q8xc3",
];

/// A preset name for `g` up to isomorphism, or `unidentified`.
fn identify(g: &FiniteGroup) -> String {
    let n = g.order();
    let mut names = vec![format!("c{n}")];
    names.extend(KNOWN_GROUPS.iter().map(|s| s.to_string()));
    for name in names {
        if let Some(h) = presets::group(&name) {
            if h.order() == n && isomorphic(g, &h) {
                return name;
            }
        }
    }
    format!("unidentified (order {n})")
}

pub(crate) fn enumerate(additive: &str, report_simple: bool, opts: &Options, report: &mut Report) -> Result<(), CliError> {
    let Structure::Group(g) = load(additive, &[Kind::Group])? else {
        unreachable!("load returns an allowed kind")
    };
    let braces = enumerate_braces(&g, opts.max_order)?;
    report.kv("additive_order", g.order());
    report.kv("additive_group", identify(&g));
    report.kv("braces", braces.len());
    let mut by_class: BTreeMap<String, usize> = BTreeMap::new();
    for b in &braces {
        *by_class.entry(b.classify_triviality().to_string()).or_default() += 1;
    }
    for t in [Triviality::Trivial, Triviality::AlmostTrivial, Triviality::Neither] {
        let key = t.to_string();
        report.kv(&key.replace(' ', "_"), by_class.get(&key).copied().unwrap_or(0));
    }
    if report_simple {
        let subgroups = g.all_subgroups();
        let simple: Vec<&FiniteSkewBrace> = braces
            .iter()
            .filter(|b| b.order() > 1 && b.ideals_among(&subgroups).len() == 2)
            .collect();
        report.kv("simple", simple.len());
        let mut representatives: Vec<&FiniteSkewBrace> = Vec::new();
        for b in &simple {
            if !representatives.iter().any(|r| r.is_isomorphic(b)) {
                representatives.push(b);
            }
        }
        report.kv("simple_isomorphism_classes", representatives.len());
        let mut classes: BTreeMap<(String, String), usize> = BTreeMap::new();
        for b in &simple {
            *classes
                .entry((identify(b.circ()), b.classify_triviality().to_string()))
                .or_default() += 1;
        }
        for ((circ, triviality), count) in classes {
            report.kv("simple_class", format!("circ={circ} triviality={triviality} count={count}"));
        }
    }
    report.pass();
    Ok(())
}

fn load_postlie(input: &str) -> Result<(BilinearMap, BilinearMap), CliError> {
    match load(input, &[Kind::PostLie])? {
        Structure::PostLie(c, t) => Ok((c, t)),
        _ => unreachable!("load returns an allowed kind"),
    }
}

fn constant_lines(report: &mut Report, key: &str, t: &BilinearMap) {
    for (i, j, k, v) in t.nonzero_entries() {
        if i < j {
            report.kv(key, format!("{} {} {} {}", i + 1, j + 1, k + 1, format_rational(v)));
        }
    }
}

pub(crate) fn postlie_check(input: &str, report: &mut Report) -> Result<(), CliError> {
    let (dot, triangle) = load_postlie(input)?;
    report.kv("dim", dot.dim());
    let p = verified_postlie(report, &dot, &triangle)?;
    constant_lines(report, "circ", p.circ().bracket());
    report.pass();
    Ok(())
}

pub(crate) fn rigidity(input: &str, report: &mut Report) -> Result<(), CliError> {
    let (dot, triangle) = load_postlie(input)?;
    report.kv("dim", dot.dim());
    let p = verified_postlie(report, &dot, &triangle)?;
    match p.rigidity_classify()? {
        Rigidity::CaseI => {
            report.kv("circ_simple", "yes");
            report.kv("classification", "case (i): ▷ = 0, circ = dot");
            report.pass();
        }
        Rigidity::CaseII => {
            report.kv("circ_simple", "yes");
            report.kv("classification", "case (ii): ▷ = −[·,·], circ = −dot");
            report.pass();
        }
        Rigidity::Violation { mismatches } => {
            report.kv("circ_simple", "yes");
            for (i, j, k) in &mismatches {
                report.kv("mismatch", format!("{} {} {}", i + 1, j + 1, k + 1));
            }
            return Err(CliError::Math("triangle is neither 0 nor the negated bracket".into()));
        }
    }
    Ok(())
}

pub(crate) fn lsb_check(input: &str, opts: &Options, report: &mut Report) -> Result<(), CliError> {
    let Structure::BraceLaw(law) = load(input, &[Kind::BraceLaw])? else {
        unreachable!("load returns an allowed kind")
    };
    numeric_brace(&law, opts, report)?;
    report.pass();
    Ok(())
}

pub(crate) fn extract(input: &str, opts: &Options, report: &mut Report) -> Result<(), CliError> {
    let Structure::BraceLaw(law) = load(input, &[Kind::BraceLaw])? else {
        unreachable!("load returns an allowed kind")
    };
    numeric_brace(&law, opts, report)?;
    let dot_num = extract_bracket(&law.dot);
    let circ_num = extract_bracket(&law.circ);
    let tri_num = extract_triangle(&law.dot, &law.circ)?;
    report.kv("max_den", opts.max_den);
    report.kv("dot_bracket_error", sci(dot_num.error_bound()));
    report.kv("circ_bracket_error", sci(circ_num.error_bound()));
    report.kv("triangle_error", sci(tri_num.error_bound()));
    let dot = dot_num.rationalize(opts.max_den, RATIONALIZE_TOLERANCE)?;
    let circ = circ_num.rationalize(opts.max_den, RATIONALIZE_TOLERANCE)?;
    let triangle = tri_num.rationalize(opts.max_den, RATIONALIZE_TOLERANCE)?;
    let p = verified_postlie(report, &dot, &triangle)?;
    let consistent = sub_adjacent(p.dot(), &triangle)? == circ;
    report.kv("circ_matches_extraction", yes_no(consistent));
    if !consistent {
        return Err(CliError::Math("extracted circ bracket differs from the sub-adjacent bracket".into()));
    }
    constant_lines(report, "circ", &circ);
    report.pass();
    report.set_artifact(formats::write_postlie(&dot, &triangle));
    Ok(())
}

pub(crate) fn presets(name: Option<&str>, report: &mut Report) -> Result<(), CliError> {
    let Some(name) = name else {
        for (kind, names) in presets::catalog() {
            report.kv(kind, names);
        }
        report.pass();
        return Ok(());
    };
    let mut shown = Vec::new();
    if let Some(g) = presets::group(name) {
        shown.push(("group", formats::write_group(&g)));
    }
    if let Some(b) = presets::brace(name) {
        shown.push(("brace", formats::write_brace(&b)));
    }
    if let Some(l) = presets::lie_algebra(name) {
        shown.push(("liealg", formats::write_liealg(l.bracket())));
    }
    if let Some(p) = presets::postlie(name) {
        shown.push(("postlie", formats::write_postlie(p.dot().bracket(), p.triangle())));
    }
    if presets::brace_law(name).is_some() {
        shown.push(("bracelaw", bracelaw_text(name)));
    }
    if shown.is_empty() {
        return Err(CliError::Usage(format!("no preset named `{name}`")));
    }
    report.kv("name", name);
    report.kv("kinds", shown.iter().map(|(k, _)| *k).collect::<Vec<_>>().join(" "));
    report.pass();
    let artifact: Vec<String> = shown.into_iter().map(|(_, text)| text).collect();
    report.set_artifact(artifact.join("\n"));
    Ok(())
}

fn bracelaw_text(name: &str) -> String {
    if let Some(src) = grouplaw::preset_source(name) {
        return src.to_string();
    }
    let law = presets::brace_law(name).expect("checked by caller");
    let mut out = format!("bracelaw\ndim {}\n", law.dot.dim());
    for (label, l) in [("dot:", &law.dot), ("circ:", &law.circ)] {
        out.push_str(label);
        out.push('\n');
        for e in l.components() {
            out.push_str(&format!("{e}\n"));
        }
    }
    out
}
