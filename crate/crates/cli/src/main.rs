use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use ncat_galois::descent::{build_edm, is_edm_sufficient, DescentGap};
use ncat_galois::factor::{classify, ml_factorize, reflective_factorize, MorphismClass};
use ncat_galois::limits::{coproduct, product, pullback};
use ncat_galois::reflect::reflect;
use ncat_galois::{NCat, NFunctor};
use ncat_galois_cli::format::{self, FormatError};
use ncat_galois_cli::suites::{self, Params, Suite};

#[derive(Parser)]
#[command(name = "ncat-galois", version, about = "Finite strict n-categories and their reflection into n-preorders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum System {
    Reflective,
    Ml,
}

#[derive(Subcommand)]
enum Command {
    /// Check every n-category law.
    Validate { file: PathBuf },
    /// Write the reflection into n-preorders and its unit.
    Reflect {
        file: PathBuf,
        #[arg(short, long)]
        o: PathBuf,
    },
    /// Print the four class flags of a functor, with witnesses.
    Classify { file: PathBuf },
    /// Factor a functor and write both factors and the middle object.
    Factor {
        #[arg(long, value_enum)]
        system: System,
        file: PathBuf,
        #[arg(short, long)]
        o: PathBuf,
    },
    /// Pullback of two functors with a common codomain.
    Pullback {
        f: PathBuf,
        g: PathBuf,
        #[arg(short, long)]
        o: PathBuf,
    },
    Product {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        o: PathBuf,
    },
    Coproduct {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(short, long)]
        o: PathBuf,
    },
    /// Build the canonical effective descent cover and check sufficiency.
    Edm {
        file: PathBuf,
        #[arg(short, long)]
        o: PathBuf,
    },
    /// Run a randomized property suite.
    Check {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

enum Failure {
    /// A law or property does not hold; exit 1.
    Property(String),
    /// Bad input or usage; exit 2.
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Invalid { .. } | FormatError::InvalidFunctor { .. } => Failure::Property(e.to_string()),
            other => Failure::Input(other.into()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property(msg)) => {
            println!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn out_dir(dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn write_cat(dir: &Path, name: &str, c: &NCat) -> Result<(), Failure> {
    Ok(format::write(&dir.join(name), &format::ncat_to_string(c))?)
}

fn write_fun(dir: &Path, name: &str, f: &NFunctor, dom: &str, cod: &str) -> Result<(), Failure> {
    Ok(format::write(&dir.join(name), &format::nfunctor_to_string_with_paths(f, dom, cod))?)
}

fn flags(k: &MorphismClass) -> String {
    format!(
        "vertical={} stably_vertical={} trivial_covering={} covering={}",
        k.vertical, k.stably_vertical, k.trivial_covering, k.covering
    )
}

fn witness_lines(k: &MorphismClass) -> Vec<String> {
    let w = &k.witnesses;
    [
        ("vertical", &w.vertical),
        ("stably_vertical", &w.stably_vertical),
        ("trivial_covering", &w.trivial_covering),
        ("covering", &w.covering),
    ]
    .into_iter()
    .filter_map(|(name, x)| x.as_ref().map(|x| format!("{name}: {x}")))
    .collect()
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { file } => {
            format::read_ncat(&file)?;
            println!("OK");
        }
        Command::Reflect { file, o } => {
            let a = Arc::new(format::read_ncat(&file)?);
            let r = reflect(&a);
            out_dir(&o)?;
            write_cat(&o, "source.ncat", &a)?;
            write_cat(&o, "image.ncat", &r.image)?;
            write_fun(&o, "unit.nfun", &r.unit, "source.ncat", "image.ncat")?;
            println!("image: {:?} cells per level", levels(&r.image));
        }
        Command::Classify { file } => {
            let f = format::read_nfunctor(&file)?;
            let k = classify(&f).map_err(|e| Failure::Input(e.into()))?;
            println!("{}", flags(&k));
            for line in witness_lines(&k) {
                println!("{line}");
            }
        }
        Command::Factor { system, file, o } => {
            let f = format::read_nfunctor(&file)?;
            let fac = match system {
                System::Reflective => reflective_factorize(&f),
                System::Ml => ml_factorize(&f),
            };
            out_dir(&o)?;
            write_cat(&o, "dom.ncat", f.dom())?;
            write_cat(&o, "middle.ncat", &fac.middle)?;
            write_cat(&o, "cod.ncat", f.cod())?;
            write_fun(&o, "e.nfun", &fac.e, "dom.ncat", "middle.ncat")?;
            write_fun(&o, "m.nfun", &fac.m, "middle.ncat", "cod.ncat")?;
            let (ke, km) = (classify(&fac.e).map_err(|e| anyhow!(e))?, classify(&fac.m).map_err(|e| anyhow!(e))?);
            let recomposes = fac.m.after(&fac.e).map_err(|e| anyhow!(e))? == f;
            let cert = serde_json::json!({
                "e": class_json(&ke),
                "m": class_json(&km),
                "recomposes": recomposes,
                "system": match system { System::Reflective => "reflective", System::Ml => "ml" },
            });
            format::write(&o.join("certificate.json"), &(serde_json::to_string_pretty(&cert).unwrap() + "\n"))?;
            println!("e: {}", flags(&ke));
            println!("m: {}", flags(&km));
            println!("recomposes={recomposes}");
        }
        Command::Pullback { f, g, o } => {
            let (f, g) = (format::read_nfunctor(&f)?, format::read_nfunctor(&g)?);
            let pb = pullback(&f, &g).map_err(|e| Failure::Input(e.into()))?;
            out_dir(&o)?;
            write_cat(&o, "a.ncat", f.dom())?;
            write_cat(&o, "b.ncat", g.dom())?;
            write_cat(&o, "apex.ncat", &pb.apex)?;
            write_fun(&o, "p1.nfun", &pb.p1, "apex.ncat", "a.ncat")?;
            write_fun(&o, "p2.nfun", &pb.p2, "apex.ncat", "b.ncat")?;
            println!("apex: {:?} cells per level", levels(&pb.apex));
        }
        Command::Product { a, b, o } => {
            let (a, b) = (Arc::new(format::read_ncat(&a)?), Arc::new(format::read_ncat(&b)?));
            if a.n() != b.n() {
                return Err(Failure::Input(anyhow!("factors have dimensions {} and {}", a.n(), b.n())));
            }
            let pb = product(&a, &b);
            out_dir(&o)?;
            write_cat(&o, "a.ncat", &a)?;
            write_cat(&o, "b.ncat", &b)?;
            write_cat(&o, "apex.ncat", &pb.apex)?;
            write_fun(&o, "p1.nfun", &pb.p1, "apex.ncat", "a.ncat")?;
            write_fun(&o, "p2.nfun", &pb.p2, "apex.ncat", "b.ncat")?;
            println!("apex: {:?} cells per level", levels(&pb.apex));
        }
        Command::Coproduct { files, o } => {
            let cats = files.iter().map(|f| format::read_ncat(f).map(Arc::new)).collect::<Result<Vec<_>, _>>()?;
            let n = cats[0].n();
            let co = coproduct(&cats, n).map_err(|e| Failure::Input(e.into()))?;
            out_dir(&o)?;
            write_cat(&o, "apex.ncat", &co.apex)?;
            for (k, (c, inj)) in cats.iter().zip(&co.injections).enumerate() {
                let name = format!("summand{k}.ncat");
                write_cat(&o, &name, c)?;
                write_fun(&o, &format!("in{k}.nfun"), inj, &name, "apex.ncat")?;
            }
            println!("apex: {:?} cells per level", levels(&co.apex));
        }
        Command::Edm { file, o } => {
            let b = Arc::new(format::read_ncat(&file)?);
            let edm = build_edm(&b).map_err(|e| Failure::Input(e.into()))?;
            out_dir(&o)?;
            write_cat(&o, "base.ncat", &b)?;
            write_cat(&o, "cover.ncat", &edm.e)?;
            write_fun(&o, "p.nfun", &edm.p, "cover.ncat", "base.ncat")?;
            println!("cover: {:?} cells per level", levels(&edm.e));
            match is_edm_sufficient(&edm.p) {
                Ok(()) => println!("sufficient=true"),
                Err(gap) => {
                    let text = match gap {
                        DescentGap::Config(c) => format!("{c:?}"),
                        DescentGap::Triple(t) => format!("{t:?}"),
                    };
                    return Err(Failure::Property(format!("sufficient=false missing {text}")));
                }
            }
        }
        Command::Check { suite, n, size, seed, trials } => {
            let results = suites::run(suite, Params { n, size, seed, trials });
            let mut failed = 0;
            for t in &results {
                match &t.result {
                    Ok(stats) => println!("trial {} seed {}: ok {stats:?}", t.index, t.seed),
                    Err(why) => {
                        failed += 1;
                        println!("trial {} seed {}: FAIL {why}", t.index, t.seed);
                    }
                }
            }
            println!("{} of {} trials passed", results.len() - failed, results.len());
            if failed > 0 {
                return Err(Failure::Property(format!("{failed} trials failed")));
            }
        }
    }
    Ok(())
}

fn levels(c: &NCat) -> Vec<usize> {
    (0..=c.n()).map(|l| c.len(l)).collect()
}

fn class_json(k: &MorphismClass) -> serde_json::Value {
    let w = |x: &Option<ncat_galois::factor::Witness>| x.as_ref().map(|w| w.to_string());
    serde_json::json!({
        "covering": k.covering,
        "stably_vertical": k.stably_vertical,
        "trivial_covering": k.trivial_covering,
        "vertical": k.vertical,
        "witnesses": {
            "covering": w(&k.witnesses.covering),
            "stably_vertical": w(&k.witnesses.stably_vertical),
            "trivial_covering": w(&k.witnesses.trivial_covering),
            "vertical": w(&k.witnesses.vertical),
        },
    })
}
