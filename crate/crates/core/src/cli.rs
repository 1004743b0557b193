//! Command-line front end over a project directory.
//!
//! A project directory holds `project.conf` (plain `key=value` lines) next to
//! the input files it names. Exit codes: 0 success, 1 invalid data, 2 usage
//! or I/O failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;

use crate::analysis::{
    compare_spaces, correlate_activity, rank_media, score_survey, topology_series, type_share, MetricKey, Segment,
};
use crate::ingest::{
    parse_answer_key, parse_event_ledger, parse_event_ledger_in_window, parse_media_registry, parse_survey,
    validate_events_text, validate_registry_text, validate_survey_text, EventLedger, IngestError, Issue, IssueCode,
    MediaRegistry, ValidationReport, Window,
};
use crate::metrics::{metrics_table, modality, net_range, place_density, response_rate};
use crate::model::{MediaType, MediumId, PopperMapping};
use crate::render::format::{apportion_percent, format_percent, format_units};
use crate::render::{
    emit_table, render_density_map, render_ranking, render_topology, survey_groups_table, survey_options_table,
    survey_understanding_table, ChartSpec, Decimal, DensityTable, Table, TableFormat, ToTable,
};

pub const CONFIG_FILE: &str = "project.conf";

#[derive(Debug)]
pub enum CliError {
    /// Exit 1.
    Invalid(String),
    /// Exit 2.
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Usage(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Invalid(m) | CliError::Usage(m) => m,
        }
    }
}

fn ingest_error(file: &Path, e: IngestError) -> CliError {
    match e {
        IngestError::Invalid(issue) => CliError::Invalid(format!("{}: {issue}", file.display())),
        IngestError::Syntax(m) => CliError::Usage(format!("{}: syntax error: {m}", file.display())),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hybridspace",
    version,
    about = "Media metrics, rankings and charts for hybrid spaces"
)]
pub struct Cli {
    /// Project directory containing project.conf.
    #[arg(long, global = true, env = "HYBRIDSPACE_PROJECT", default_value = ".")]
    pub project: PathBuf,
    /// Output directory; overrides `out` in project.conf.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Use a decimal comma in terminal and Markdown output.
    #[arg(long, global = true)]
    pub locale_comma: bool,
    /// Size of the leading ranking segment.
    #[arg(long, global = true)]
    pub top_n: Option<usize>,
    /// Size of the trailing ranking segment.
    #[arg(long, global = true)]
    pub bottom_m: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MetricArg {
    Range,
    Interactions,
    ResponseRate,
}

impl From<MetricArg> for MetricKey {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Range => MetricKey::Range,
            MetricArg::Interactions => MetricKey::Interactions,
            MetricArg::ResponseRate => MetricKey::ResponseRate,
        }
    }
}

#[derive(Debug, Args)]
pub struct TopologyArgs {
    #[arg(long, value_enum)]
    pub metric: MetricArg,
    /// Also write the bubble chart.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every input file and report all problems.
    Validate,
    /// Per-medium range, interactions and response rate, plus modality.
    Metrics,
    /// Rank media by one metric and break segments down by media type.
    Rank {
        #[arg(long, value_enum)]
        by: MetricArg,
    },
    /// Day-by-day metric bubbles per medium.
    Topology(TopologyArgs),
    /// Persons per location as a circle map.
    DensityMap,
    /// Survey aggregates, knowledge scores and completion rate.
    SurveyReport,
    /// Compare media-type mix with another project.
    Compare {
        /// The other project directory.
        other: PathBuf,
    },
}

/// Settings from `project.conf`, with paths resolved against the project
/// directory. Paths named explicitly must exist; default names are optional.
#[derive(Debug, Clone)]
pub struct ProjectConfig {
    pub dir: PathBuf,
    pub label: String,
    pub media: PathBuf,
    pub events: Option<PathBuf>,
    pub survey: Option<PathBuf>,
    pub answer_key: Option<PathBuf>,
    pub popper: Option<PathBuf>,
    pub window: Option<Window>,
    pub out: PathBuf,
    pub top_n: Option<usize>,
    pub bottom_m: Option<usize>,
    pub survey_medium: Option<MediumId>,
}

const KEYS: [&str; 12] = [
    "label",
    "media",
    "events",
    "survey",
    "answer_key",
    "popper",
    "window_start",
    "window_end",
    "out",
    "top_n",
    "bottom_m",
    "survey_medium",
];

impl ProjectConfig {
    pub fn load(dir: &Path) -> Result<Self, CliError> {
        let path = dir.join(CONFIG_FILE);
        let text = fs::read_to_string(&path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        Self::parse(&text, dir)
    }

    pub fn parse(text: &str, dir: &Path) -> Result<Self, CliError> {
        let mut values: BTreeMap<&str, &str> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |m: &str| CliError::Usage(format!("{CONFIG_FILE} line {}: {m}", i + 1));
            let (k, v) = line.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(bad(&format!("unknown key {k:?}")));
            }
            if values.insert(k, v).is_some() {
                return Err(bad(&format!("key {k:?} repeated")));
            }
        }
        let file = |key: &str, default: &str| -> Result<Option<PathBuf>, CliError> {
            match values.get(key) {
                Some(v) => {
                    let p = dir.join(v);
                    if p.is_file() {
                        Ok(Some(p))
                    } else {
                        Err(CliError::Usage(format!("{key}: {} does not exist", p.display())))
                    }
                }
                None => {
                    let p = dir.join(default);
                    Ok(p.is_file().then_some(p))
                }
            }
        };
        let media =
            file("media", "media.csv")?.ok_or_else(|| CliError::Usage(format!("{}: no media.csv", dir.display())))?;
        let date = |key: &str| -> Result<Option<NaiveDate>, CliError> {
            values
                .get(key)
                .map(|v| {
                    NaiveDate::parse_from_str(v, "%Y-%m-%d")
                        .map_err(|_| CliError::Usage(format!("{key}: {v:?} is not a YYYY-MM-DD date")))
                })
                .transpose()
        };
        let window = match (date("window_start")?, date("window_end")?) {
            (Some(s), Some(e)) => Some(Window::new(s, e).map_err(|e| CliError::Usage(e.to_string()))?),
            (None, None) => None,
            _ => {
                return Err(CliError::Usage(
                    "window_start and window_end must be given together".into(),
                ))
            }
        };
        let count = |key: &str| -> Result<Option<usize>, CliError> {
            values
                .get(key)
                .map(|v| {
                    v.parse()
                        .map_err(|_| CliError::Usage(format!("{key}: {v:?} is not a count")))
                })
                .transpose()
        };
        let label = values
            .get("label")
            .map(|s| s.to_string())
            .or_else(|| {
                dir.canonicalize()
                    .ok()?
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
            })
            .unwrap_or_else(|| "project".into());
        Ok(ProjectConfig {
            dir: dir.to_path_buf(),
            label,
            media,
            events: file("events", "events.csv")?,
            survey: file("survey", "survey.json")?,
            answer_key: file("answer_key", "answer_key.json")?,
            popper: file("popper", "popper.csv")?,
            window,
            out: dir.join(values.get("out").copied().unwrap_or("out")),
            top_n: count("top_n")?,
            bottom_m: count("bottom_m")?,
            survey_medium: values.get("survey_medium").map(|s| MediumId::new(*s)),
        })
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn required<'a>(p: &'a Option<PathBuf>, what: &str) -> Result<&'a Path, CliError> {
    p.as_deref()
        .ok_or_else(|| CliError::Usage(format!("project has no {what} file")))
}

struct Ctx<'a> {
    config: ProjectConfig,
    out: PathBuf,
    sep: Decimal,
    top_n: Option<usize>,
    bottom_m: Option<usize>,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn registry(&self) -> Result<MediaRegistry, CliError> {
        let path = &self.config.media;
        parse_media_registry(&read(path)?).map_err(|e| ingest_error(path, e))
    }

    fn ledger(&self, registry: &MediaRegistry) -> Result<EventLedger, CliError> {
        let path = required(&self.config.events, "events")?;
        let text = read(path)?;
        match self.config.window {
            Some(w) => parse_event_ledger_in_window(&text, registry, w),
            None => parse_event_ledger(&text, registry),
        }
        .map_err(|e| ingest_error(path, e))
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        fs::create_dir_all(&self.out).map_err(|e| CliError::Usage(format!("{}: {e}", self.out.display())))?;
        let path = self.out.join(name);
        fs::write(&path, contents).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        writeln!(self.stderr, "wrote {}", path.display()).ok();
        Ok(())
    }

    /// CSV with a decimal point, Markdown with the configured separator.
    fn write_rows(&mut self, stem: &str, rows: &impl ToTable) -> Result<(), CliError> {
        let sep = self.sep;
        self.write(&format!("{stem}.csv"), &emit_table(rows, TableFormat::Csv, sep))?;
        self.write(&format!("{stem}.md"), &emit_table(rows, TableFormat::Markdown, sep))
    }

    fn say(&mut self, line: impl AsRef<str>) {
        writeln!(self.stdout, "{}", line.as_ref()).ok();
    }
}

fn type_lines(shares: &[(MediaType, crate::metrics::Fraction)], sep: Decimal) -> Vec<String> {
    let parts: Vec<_> = shares.iter().map(|(_, s)| *s).collect();
    shares
        .iter()
        .zip(apportion_percent(&parts, 2))
        .map(|((t, _), u)| format!("{} {}%", t.name(), format_units(u, 2, sep)))
        .collect()
}

fn cmd_validate(ctx: &mut Ctx) -> Result<(), CliError> {
    let mut report = ValidationReport::default();
    let note = |report: &mut ValidationReport, file: &Path, mut r: ValidationReport| {
        for i in r.errors.iter_mut().chain(r.warnings.iter_mut()) {
            i.message = format!("{}: {}", file.display(), i.message);
        }
        report.merge(r);
    };
    let syntax = |file: &Path, m: String| CliError::Usage(format!("{}: syntax error: {m}", file.display()));
    let as_report = |file: &Path, r: Result<ValidationReport, IngestError>| match r {
        Ok(r) => Ok(r),
        Err(IngestError::Syntax(m)) => Err(syntax(file, m)),
        Err(IngestError::Invalid(issue)) => Ok(ValidationReport {
            errors: vec![issue],
            warnings: Vec::new(),
        }),
    };

    let media_path = ctx.config.media.clone();
    let media_text = read(&media_path)?;
    note(
        &mut report,
        &media_path,
        as_report(&media_path, validate_registry_text(&media_text))?,
    );
    let registry = parse_media_registry(&media_text).ok();

    if let Some(path) = ctx.config.events.clone() {
        let text = read(&path)?;
        match &registry {
            Some(reg) => {
                let r = as_report(&path, validate_events_text(&text, reg, ctx.config.window))?;
                note(&mut report, &path, r);
            }
            None => writeln!(ctx.stderr, "skipping {}: registry did not load", path.display()).unwrap_or(()),
        }
    }

    if let Some(path) = ctx.config.answer_key.clone() {
        match parse_answer_key(&read(&path)?) {
            Ok(key) => {
                if let Some(spath) = ctx.config.survey.clone() {
                    let r = as_report(&spath, validate_survey_text(&read(&spath)?, &key))?;
                    note(&mut report, &spath, r);
                }
            }
            Err(IngestError::Syntax(m)) => return Err(syntax(&path, m)),
            Err(IngestError::Invalid(issue)) => note(
                &mut report,
                &path,
                ValidationReport {
                    errors: vec![issue],
                    warnings: Vec::new(),
                },
            ),
        }
    }

    if let Some(path) = ctx.config.popper.clone() {
        if let Err(e) = PopperMapping::parse(&read(&path)?) {
            note(
                &mut report,
                &path,
                ValidationReport {
                    errors: vec![Issue::new(0, IssueCode::MalformedRow, e.to_string())],
                    warnings: Vec::new(),
                },
            );
        }
    }

    writeln!(ctx.stderr, "{report}").ok();
    if report.is_accepted() {
        Ok(())
    } else {
        Err(CliError::Invalid(format!("{} error(s)", report.errors.len())))
    }
}

/// Without an events file only the modality is reported.
fn cmd_metrics(ctx: &mut Ctx) -> Result<(), CliError> {
    let registry = ctx.registry()?;
    if ctx.config.events.is_some() {
        let ledger = ctx.ledger(&registry)?;
        let table = metrics_table(&ledger, &registry).map_err(|e| CliError::Invalid(e.to_string()))?;
        ctx.write_rows("metrics", &table)?;
    }
    let mix = modality(&registry).map_err(|e| CliError::Invalid(e.to_string()))?;
    ctx.write_rows("metrics-modality", &mix)?;
    ctx.say(format!("modality ({} media)", mix.total()));
    for line in type_lines(&mix.shares(), ctx.sep) {
        ctx.say(line);
    }
    Ok(())
}

fn segments(ctx: &Ctx, total: usize) -> Result<(Segment, Segment), CliError> {
    let n = ctx.top_n.or(ctx.config.top_n).unwrap_or(10.min(total));
    let m = ctx.bottom_m.or(ctx.config.bottom_m).unwrap_or(total.saturating_sub(n));
    if n + m > total {
        return Err(CliError::Usage(format!(
            "top_n {n} + bottom_m {m} exceed the {total} media"
        )));
    }
    Ok((Segment::TopN(n), Segment::BottomM(m)))
}

fn cmd_rank(ctx: &mut Ctx, key: MetricKey) -> Result<(), CliError> {
    let registry = ctx.registry()?;
    let ledger = ctx.ledger(&registry)?;
    let table = metrics_table(&ledger, &registry).map_err(|e| CliError::Invalid(e.to_string()))?;
    let ranking = rank_media(&table, key, &registry);
    let stem = format!("rank-{}", key.name());
    ctx.write_rows(&stem, &ranking)?;

    let mut seg_table = Table::new(&["segment", "media_type", "count", "share"]);
    for seg in <[Segment; 2]>::from(segments(ctx, ranking.len())?) {
        if seg.size() == 0 {
            continue;
        }
        let share = type_share(&ranking, seg).map_err(|e| CliError::Usage(e.to_string()))?;
        for row in share.to_table(Decimal::Point).rows {
            seg_table.push(std::iter::once(seg.label()).chain(row).collect());
        }
    }
    ctx.write(&format!("{stem}-segments.csv"), &seg_table.to_csv())?;
    let svg = render_ranking(&ranking, &registry, &ChartSpec::ranking_bars())
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    ctx.write(&format!("{stem}.svg"), &svg.to_svg_string())?;

    let sep = ctx.sep;
    for row in ranking.to_table(sep).rows {
        ctx.say(row.join(" "));
    }
    Ok(())
}

fn cmd_topology(ctx: &mut Ctx, key: MetricKey, svg: bool) -> Result<(), CliError> {
    let registry = ctx.registry()?;
    let ledger = ctx.ledger(&registry)?;
    let series = topology_series(&ledger, &registry, key).map_err(|e| CliError::Usage(e.to_string()))?;
    let stem = format!("topology-{}", key.name());
    ctx.write_rows(&stem, &series)?;
    if svg {
        let doc = render_topology(&series, &registry, &ChartSpec::topology_bubbles())
            .map_err(|e| CliError::Invalid(e.to_string()))?;
        ctx.write(&format!("{stem}.svg"), &doc.to_svg_string())?;
    }
    ctx.say(format!(
        "{} points over {} days",
        series.points.len(),
        series.window.days()
    ));
    Ok(())
}

fn cmd_density(ctx: &mut Ctx) -> Result<(), CliError> {
    let registry = ctx.registry()?;
    let ledger = ctx.ledger(&registry)?;
    let densities = place_density(&ledger);
    let rows = DensityTable {
        densities: &densities,
        registry: &registry,
    };
    let sep = ctx.sep;
    ctx.write("density-map.csv", &emit_table(&rows, TableFormat::Csv, sep))?;
    ctx.write("density-map.md", &emit_table(&rows, TableFormat::Markdown, sep))?;
    let doc = render_density_map(&densities, &registry, &ChartSpec::density_map())
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    ctx.write("density-map.svg", &doc.to_svg_string())?;
    for d in &densities {
        ctx.say(format!("{} {}", d.location.label(), d.persons));
    }
    Ok(())
}

fn cmd_survey(ctx: &mut Ctx) -> Result<(), CliError> {
    let key_path = required(&ctx.config.answer_key, "answer_key")?.to_path_buf();
    let survey_path = required(&ctx.config.survey, "survey")?.to_path_buf();
    let key = parse_answer_key(&read(&key_path)?).map_err(|e| ingest_error(&key_path, e))?;
    let dataset = parse_survey(&read(&survey_path)?, &key).map_err(|e| ingest_error(&survey_path, e))?;
    let report = score_survey(&dataset, &key);
    let sep = ctx.sep;

    ctx.write_rows("survey-report-participants", &report)?;
    for (stem, table) in [
        ("survey-report-options", survey_options_table(&report, Decimal::Point)),
        ("survey-report-groups", survey_groups_table(&report, Decimal::Point)),
        (
            "survey-report-understanding",
            survey_understanding_table(&report, Decimal::Point),
        ),
    ] {
        ctx.write(&format!("{stem}.csv"), &table.to_csv())?;
        let md = match stem {
            "survey-report-options" => survey_options_table(&report, sep),
            "survey-report-groups" => survey_groups_table(&report, sep),
            _ => survey_understanding_table(&report, sep),
        };
        ctx.write(&format!("{stem}.md"), &md.to_markdown())?;
    }

    let c = report.completion;
    ctx.say(format!("participants: {}", c.participants));
    ctx.say(format!("completers: {}", c.completers));
    ctx.say(format!(
        "completion_rate: {}",
        c.rate.map(|r| format_percent(r, 2, sep)).unwrap_or_else(|| "-".into())
    ));
    if let Some(id) = ctx.config.survey_medium.clone() {
        let registry = ctx.registry()?;
        let ledger = ctx.ledger(&registry)?;
        let range = net_range(&ledger, &registry, &id).map_err(|e| CliError::Invalid(e.to_string()))?;
        let line = match range {
            Some(r) if r > 0 => format_percent(response_rate(c.participants, r).expect("positive range"), 1, sep),
            _ => "-".into(),
        };
        ctx.say(format!("response_rate: {line}"));
    }
    let corr = correlate_activity(&report);
    let rho = corr
        .rho
        .map(|r| {
            let s = format!("{r:.2}");
            if sep == Decimal::Comma {
                s.replace('.', ",")
            } else {
                s
            }
        })
        .unwrap_or_else(|| "-".into());
    ctx.say(format!(
        "correlation {}~{}: rho={rho} n={} ({})",
        corr.x_label,
        corr.y_label,
        corr.n,
        corr.tag.name()
    ));
    Ok(())
}

fn cmd_compare(ctx: &mut Ctx, other: &Path) -> Result<(), CliError> {
    let registry = ctx.registry()?;
    let other_config = ProjectConfig::load(other)?;
    let other_registry = {
        let path = &other_config.media;
        parse_media_registry(&read(path)?).map_err(|e| ingest_error(path, e))?
    };
    let cmp = compare_spaces((&registry, &ctx.config.label), (&other_registry, &other_config.label))
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    ctx.write_rows("compare-modality", &cmp)?;
    let sep = ctx.sep;
    let table = cmp.to_table(sep);
    ctx.say(table.headers.join(" "));
    for row in table.rows {
        ctx.say(row.join(" "));
    }
    let l1 = cmp.l1_distance();
    let l1 = Ratio::new(*l1.numer() as u64, *l1.denom() as u64);
    ctx.say(format!("l1_distance: {}", format_percent(l1, 2, sep)));
    Ok(())
}

/// Runs with explicit output streams; returns the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                write!(stdout, "{text}").ok();
            } else {
                write!(stderr, "{text}").ok();
            }
            return code;
        }
    };
    let config = match ProjectConfig::load(&cli.project) {
        Ok(c) => c,
        Err(e) => {
            writeln!(stderr, "error: {}", e.message()).ok();
            return e.exit_code();
        }
    };
    let out = cli.out.clone().unwrap_or_else(|| config.out.clone());
    let mut ctx = Ctx {
        config,
        out,
        sep: Decimal::from_comma_flag(cli.locale_comma),
        top_n: cli.top_n,
        bottom_m: cli.bottom_m,
        stdout,
        stderr,
    };
    let result = match &cli.command {
        Command::Validate => cmd_validate(&mut ctx),
        Command::Metrics => cmd_metrics(&mut ctx),
        Command::Rank { by } => cmd_rank(&mut ctx, (*by).into()),
        Command::Topology(t) => cmd_topology(&mut ctx, t.metric.into(), t.svg),
        Command::DensityMap => cmd_density(&mut ctx),
        Command::SurveyReport => cmd_survey(&mut ctx),
        Command::Compare { other } => cmd_compare(&mut ctx, other),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            writeln!(ctx.stderr, "error: {}", e.message()).ok();
            e.exit_code()
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
