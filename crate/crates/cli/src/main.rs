use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use jitower_core::actions::{is_subprimitive, SubprimitivityMethod};
use jitower_core::builders::{
    build_cyclic_tower, build_example64, build_wreath_tower, ActionStrategy,
};
use jitower_core::chief::{chief_series, melnikov_crosscheck};
use jitower_core::io::{read_group, read_subgroup, read_tower, ChiefFactorFile, GroupFile, TowerFile};
use jitower_core::lattice::{all_subgroups, is_narrow, normal_subgroups, obliquity};
use jitower_core::towers::{verify, ClassDescriptor, Criteria, MultiplierTable, VerifyOptions};
use jitower_core::{corpus, Caps, Error, FiniteGroup, GroupAction};

/// Normal lattices, chief series and level-by-level verification of towers of finite groups.
#[derive(Parser, Debug)]
#[command(name = "jitower", version)]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Config {
    /// largest group whose elements are tabulated for lattice work
    #[arg(long, global = true, env = "JITOWER_MAX_ORDER")]
    max_order: Option<u128>,
    /// largest group for exhaustive subgroup enumeration
    #[arg(long, global = true, env = "JITOWER_MAX_SUBGROUP_ORDER")]
    max_subgroup_order: Option<u128>,
    /// JSON object mapping simple-group orders to multiplier orders
    #[arg(long, global = true, env = "JITOWER_MULTIPLIER_TABLE")]
    multiplier_table: Option<PathBuf>,
    /// write the report here instead of standard output
    #[arg(long, global = true, env = "JITOWER_REPORT")]
    report: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text, env = "JITOWER_FORMAT")]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Summarize the normal structure of a group
    Analyze {
        group: PathBuf,
        /// subgroup files whose obliquity cores are reported
        #[arg(long = "subgroup")]
        subgroups: Vec<PathBuf>,
    },
    /// Build a tower from a preset and write it as JSON
    Build {
        /// cyclic:p=2,levels=3[,start=2] | wreath:bottom=C2,levels=3 |
        /// example64[:top=C2,simple=A5,perfect=A5,strategy=regular,levels=2]
        preset: String,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Verify a tower against a family of conditions
    Verify {
        tower: PathBuf,
        /// introthm | mainjithm | hji | wilson | pro-p:<p> | primhji
        #[arg(long, env = "JITOWER_CRITERIA")]
        criteria: String,
        /// class descriptors for the chief-factor conditions, e.g. ea:2,simple:60
        #[arg(long, value_delimiter = ',', env = "JITOWER_CLASSES")]
        classes: Vec<String>,
        /// also check the centralizer condition of the chief-factor family
        #[arg(long)]
        require_centralizer: bool,
    },
    /// Cross-check a group against brute-force computations
    Oracle { group: PathBuf },
}

/// Bad input or parameters; exits with code 2.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let caps = caps(&cli.config);
    match &cli.command {
        Command::Analyze { group, subgroups } => {
            let g = read_group(&read(group)?, caps)?;
            let subs = subgroups
                .iter()
                .map(|p| read_subgroup(&read(p)?, &g).map_err(Failure::from))
                .collect::<Result<Vec<_>, _>>()?;
            let report = analyze(&g, &subs);
            emit(&cli.config, &report, analyze_text(&report))?;
            Ok(0)
        }
        Command::Build { preset, out } => {
            let file = build(preset, caps)?;
            let text = serde_json::to_string(&file).map_err(|e| Failure(e.to_string()))?;
            match out {
                Some(p) => std::fs::write(p, text + "\n")?,
                None => println!("{text}"),
            }
            Ok(0)
        }
        Command::Verify {
            tower,
            criteria,
            classes,
            require_centralizer,
        } => {
            let criteria: Criteria = criteria.parse()?;
            let t = read_tower(&read(tower)?, caps)?;
            let table = match &cli.config.multiplier_table {
                Some(p) => MultiplierTable::from_json(&read(p)?, p.display().to_string())?,
                None => MultiplierTable::default(),
            };
            let classes = classes
                .iter()
                .map(|c| c.parse::<ClassDescriptor>())
                .collect::<Result<Vec<_>, _>>()?;
            let opts = VerifyOptions {
                classes,
                require_centralizer: *require_centralizer,
                table,
            };
            let report = verify(&t, criteria, &opts);
            emit(&cli.config, &report, report.to_text())?;
            Ok(report.exit_code() as u8)
        }
        Command::Oracle { group } => {
            let g = read_group(&read(group)?, caps)?;
            let report = oracle(&g);
            let failed = report.checks.iter().any(|c| c.status == "mismatch");
            emit(&cli.config, &report, oracle_text(&report))?;
            Ok(if failed { 1 } else { 0 })
        }
    }
}

fn caps(c: &Config) -> Caps {
    let mut caps = Caps::default();
    if let Some(m) = c.max_order {
        caps.lattice = m;
        caps.enumeration = caps.enumeration.min(m);
    }
    if let Some(m) = c.max_subgroup_order {
        caps.subgroups = m;
    }
    caps
}

fn read(p: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(p).map_err(|e| Failure(format!("{}: {e}", p.display())))
}

fn emit<T: Serialize>(config: &Config, report: &T, text: String) -> Result<(), Failure> {
    let body = match config.format {
        Format::Json => serde_json::to_string_pretty(report).map_err(|e| Failure(e.to_string()))? + "\n",
        Format::Text => text,
    };
    match &config.report {
        Some(p) => std::fs::write(p, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

/// A section that is either computed or skipped with a reason.
#[derive(Serialize)]
#[serde(rename_all = "lowercase")]
enum Section<T> {
    Computed(T),
    Skipped(String),
}

impl<T> Section<T> {
    fn from(r: jitower_core::Result<T>) -> Self {
        match r {
            Ok(v) => Section::Computed(v),
            Err(e) => Section::Skipped(e.to_string()),
        }
    }
}

#[derive(Serialize)]
struct NarrowEntry {
    order: u128,
    generators: Vec<Vec<u32>>,
    melnikov_order: u128,
}

#[derive(Serialize)]
struct ObliquityEntry {
    order: u128,
    ob_order: Section<u128>,
    ob_star_order: Section<u128>,
}

#[derive(Serialize)]
struct AnalyzeReport {
    order: u128,
    degree: usize,
    normal_subgroup_orders: Section<Vec<u128>>,
    chief_series: Section<Vec<ChiefFactorFile>>,
    narrow: Section<Vec<NarrowEntry>>,
    obliquity: Vec<ObliquityEntry>,
}

fn analyze(g: &FiniteGroup, subs: &[jitower_core::Subgroup]) -> AnalyzeReport {
    let lattice = normal_subgroups(g);
    let normal_subgroup_orders = Section::from(lattice.as_ref().map(|l| l.orders()).map_err(Clone::clone));
    let chief = Section::from(
        chief_series(g).and_then(|s| s.iter().map(ChiefFactorFile::of).collect::<jitower_core::Result<Vec<_>>>()),
    );
    let narrow = Section::from(lattice.as_ref().map_err(Clone::clone).and_then(|l| {
        let mut out = Vec::new();
        for a in l.members().iter().filter(|a| !a.is_trivial()) {
            let n = is_narrow(g, a)?;
            if let Some(m) = n.unique_max {
                out.push(NarrowEntry {
                    order: a.order(),
                    generators: a.generators().iter().map(|x| x.images().to_vec()).collect(),
                    melnikov_order: m.order(),
                });
            }
        }
        Ok(out)
    }));
    let obliquity = subs
        .iter()
        .map(|h| ObliquityEntry {
            order: h.order(),
            ob_order: Section::from(obliquity(g, h, false).map(|o| o.order())),
            ob_star_order: Section::from(obliquity(g, h, true).map(|o| o.order())),
        })
        .collect();
    AnalyzeReport {
        order: g.order(),
        degree: g.degree(),
        normal_subgroup_orders,
        chief_series: chief,
        narrow,
        obliquity,
    }
}

fn section_text<T>(out: &mut String, title: &str, s: &Section<T>, body: impl FnOnce(&mut String, &T)) {
    match s {
        Section::Computed(v) => body(out, v),
        Section::Skipped(why) => {
            let _ = writeln!(out, "{title}: skipped ({why})");
        }
    }
}

fn analyze_text(r: &AnalyzeReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "order {} on {} points", r.order, r.degree);
    section_text(&mut out, "normal subgroups", &r.normal_subgroup_orders, |out, v| {
        let _ = writeln!(out, "normal subgroups: {} with orders {:?}", v.len(), v);
    });
    section_text(&mut out, "chief series", &r.chief_series, |out, v| {
        let _ = writeln!(out, "chief series of length {}:", v.len());
        for f in v {
            let _ = writeln!(out, "  |K| = {}, |L| = {}, {}", f.order_k, f.order_l, f.classification);
        }
    });
    section_text(&mut out, "narrow subgroups", &r.narrow, |out, v| {
        let _ = writeln!(out, "narrow normal subgroups: {}", v.len());
        for a in v {
            let _ = writeln!(out, "  order {} with M_G(A) of order {}", a.order, a.melnikov_order);
        }
    });
    for o in &r.obliquity {
        let show = |s: &Section<u128>| match s {
            Section::Computed(v) => v.to_string(),
            Section::Skipped(why) => format!("skipped ({why})"),
        };
        let _ = writeln!(
            out,
            "subgroup of order {}: |Ob| = {}, |Ob*| = {}",
            o.order,
            show(&o.ob_order),
            show(&o.ob_star_order)
        );
    }
    out
}

fn named_group(name: &str) -> Result<FiniteGroup, Failure> {
    let bad = || Failure(format!("unknown group {name:?}"));
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    Ok(match name {
        "V4" => corpus::klein(),
        "Q8" => corpus::quaternion(),
        "SL25" => corpus::sl2_5(),
        _ if name.len() > 1 => {
            let (kind, n) = name.split_at(1);
            let n = num(n)?;
            if n == 0 || n > 64 {
                return Err(bad());
            }
            match kind {
                "C" => corpus::cyclic(n),
                "S" if n <= 8 => corpus::symmetric(n),
                "A" if n <= 8 => corpus::alternating(n),
                "D" if n >= 3 => corpus::dihedral(n),
                _ => return Err(bad()),
            }
        }
        _ => return Err(bad()),
    })
}

/// `name[:key=value,...]`.
fn parse_preset(s: &str) -> Result<(String, Vec<(String, String)>), Failure> {
    let (name, rest) = s.split_once(':').unwrap_or((s, ""));
    let mut params = Vec::new();
    for kv in rest.split(',').filter(|kv| !kv.is_empty()) {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Failure(format!("bad preset parameter {kv:?}")))?;
        params.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok((name.to_string(), params))
}

struct Params(Vec<(String, String)>, Vec<&'static str>);

impl Params {
    fn take(&mut self, key: &'static str) -> Option<String> {
        self.1.push(key);
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.clone())
    }

    fn number<T: std::str::FromStr>(&mut self, key: &'static str, default: Option<T>) -> Result<T, Failure> {
        match self.take(key) {
            Some(v) => v
                .parse()
                .map_err(|_| Failure(format!("parameter {key} must be a number, found {v:?}"))),
            None => default.ok_or_else(|| Failure(format!("missing parameter {key}"))),
        }
    }

    fn finish(&self) -> Result<(), Failure> {
        match self.0.iter().find(|(k, _)| !self.1.contains(&k.as_str())) {
            Some((k, _)) => Err(Failure(format!("unknown parameter {k:?}"))),
            None => Ok(()),
        }
    }
}

fn build(preset: &str, caps: Caps) -> Result<TowerFile, Failure> {
    let (name, params) = parse_preset(preset)?;
    let mut p = Params(params, Vec::new());
    let file = match name.as_str() {
        "cyclic" => {
            let prime: u64 = p.number("p", None)?;
            let levels: usize = p.number("levels", None)?;
            let start: u32 = p.number("start", Some(2))?;
            p.finish()?;
            TowerFile::of(&build_cyclic_tower(prime, levels, start)?)
        }
        "wreath" => {
            let bottom = named_group(&p.take("bottom").unwrap_or_else(|| "C2".into()))?;
            let levels: usize = p.number("levels", None)?;
            p.finish()?;
            TowerFile::of(&build_wreath_tower(&bottom.with_new_caps(caps), levels)?)
        }
        "example64" => {
            let top = named_group(&p.take("top").unwrap_or_else(|| "C2".into()))?.with_new_caps(caps);
            let simple = named_group(&p.take("simple").unwrap_or_else(|| "A5".into()))?;
            let perfect = named_group(&p.take("perfect").unwrap_or_else(|| "A5".into()))?;
            let strategy = match p.take("strategy").as_deref().unwrap_or("regular") {
                "regular" => ActionStrategy::Regular,
                "product" => ActionStrategy::Product,
                other => return Err(Failure(format!("unknown strategy {other:?}"))),
            };
            let levels: usize = p.number("levels", Some(2))?;
            p.finish()?;
            let e = build_example64(&GroupAction::natural(&top), &[simple], &[perfect], &strategy, levels)?;
            let mut file = TowerFile::of(&e.tower);
            file.symbolic = Some(serde_json::to_value(&e.spec).map_err(|e| Failure(e.to_string()))?);
            file
        }
        other => return Err(Failure(format!("unknown preset {other:?}"))),
    };
    Ok(file)
}

#[derive(Serialize)]
struct OracleCheck {
    name: &'static str,
    status: &'static str,
    detail: String,
}

#[derive(Serialize)]
struct OracleReport {
    group: GroupFile,
    order: u128,
    checks: Vec<OracleCheck>,
}

fn check(name: &'static str, r: jitower_core::Result<(bool, String)>) -> OracleCheck {
    match r {
        Ok((true, detail)) => OracleCheck { name, status: "agree", detail },
        Ok((false, detail)) => OracleCheck { name, status: "mismatch", detail },
        Err(e) => OracleCheck {
            name,
            status: "skipped",
            detail: e.to_string(),
        },
    }
}

fn oracle(g: &FiniteGroup) -> OracleReport {
    let caps = g.caps();
    let mut checks = Vec::new();
    checks.push(check("order", {
        if g.order() > caps.lattice {
            Err(Error::CapExceeded {
                what: "enumeration",
                order: g.order(),
                cap: caps.lattice,
            })
        } else {
            g.elements().map(|e| {
                let n = e.len() as u128;
                (n == g.order(), format!("stabilizer chain {} vs enumeration {n}", g.order()))
            })
        }
    }));
    checks.push(check(
        "normal lattice",
        normal_subgroups(g).and_then(|l| {
            let mut by_enum: Vec<_> = all_subgroups(g, caps.subgroups)?
                .into_iter()
                .filter(|h| h.is_normal())
                .map(|h| h.key().clone())
                .collect();
            by_enum.sort();
            let mut by_lattice: Vec<_> = l.members().iter().map(|h| h.key().clone()).collect();
            by_lattice.sort();
            Ok((
                by_enum == by_lattice,
                format!("{} from the lattice, {} from subgroup enumeration", by_lattice.len(), by_enum.len()),
            ))
        }),
    ));
    checks.push(check("subprimitivity", {
        let a = GroupAction::natural(g);
        is_subprimitive(&a, SubprimitivityMethod::Def13).and_then(|d| {
            let l = is_subprimitive(&a, SubprimitivityMethod::Lemma62)?;
            Ok((d == l, format!("natural action: by definition {d}, by normal pairs {l}")))
        })
    }));
    checks.push(check(
        "melnikov relations",
        normal_subgroups(g).and_then(|l| {
            let mut bad = 0;
            let members: Vec<_> = l.members().iter().filter(|a| !a.is_trivial()).cloned().collect();
            for a in &members {
                if !melnikov_crosscheck(g, a)?.all_hold() {
                    bad += 1;
                }
            }
            Ok((bad == 0, format!("{bad} of {} normal subgroups violate a relation", members.len())))
        }),
    ));
    OracleReport {
        group: GroupFile::of(g),
        order: g.order(),
        checks,
    }
}

fn oracle_text(r: &OracleReport) -> String {
    let mut out = format!("group of order {}\n", r.order);
    for c in &r.checks {
        let _ = writeln!(out, "{:<20} {:<8} {}", c.name, c.status, c.detail);
    }
    out
}
