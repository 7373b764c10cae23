use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anderson::algebra::{self, EndAlgebraReport};
use anderson::error::ErrorClass;
use anderson::format::{parse_motive, serialize};
use anderson::local;
use anderson::morphisms::{self, Morphism};
use anderson::motive::Motive;
use anderson::newton::{newton_polygon, Place};
use anderson::{Error, Result, TMatrix, TPoly};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

mod corpus;

#[derive(Parser)]
#[command(name = "amot", version, about = "Pure Anderson motives over finite fields")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rank, dimension, weight, purity, semisimplicity, χ and μ.
    Analyze { file: PathBuf },
    /// Frobenius matrix Π with its characteristic and minimal polynomials.
    Frobenius { file: PathBuf },
    /// Zeta function as a product of det(1 − u·∧^iΠ)^(±1).
    Zeta { file: PathBuf },
    /// Slopes of χ at ∞ or at a finite place.
    Slopes {
        file: PathBuf,
        #[arg(long, default_value = "inf")]
        place: String,
    },
    /// A-basis of Hom(M, M').
    Hom { source: PathBuf, target: PathBuf },
    /// A-basis of End(M), with dim_Q E for semisimple M.
    End { file: PathBuf },
    /// Decide whether two motives are isogenous and produce a witness.
    IsogenyTest { source: PathBuf, target: PathBuf },
    /// Components of End(M) ⊗ Q with Hasse invariants above ε and ∞.
    Hasse { file: PathBuf },
    /// Tate module at a finite place v ≠ ε.
    Tate {
        file: PathBuf,
        #[arg(long)]
        place: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Base extension to F_(q^(e·m)), printed in file format.
    Extend {
        file: PathBuf,
        #[arg(long)]
        degree: u32,
    },
    /// Degree of an isogeny: Frobenius, a scalar a ∈ A, or an explicit matrix.
    DegreeOf {
        file: PathBuf,
        /// Use the Frobenius endomorphism.
        #[arg(long, conflicts_with_all = ["scalar", "map"])]
        frobenius: bool,
        /// Coefficient list over F_q of a ∈ A.
        #[arg(long, conflicts_with = "map")]
        scalar: Option<String>,
        /// Matrix rows separated by `|`, entries as in motive files.
        #[arg(long)]
        map: Option<String>,
        /// Target motive for --map (default: the source).
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Run the fixture corpus and report each claim.
    Corpus {
        /// Directory of .motive fixtures (default: the built-in corpus).
        dir: Option<PathBuf>,
    },
}

fn load(path: &Path) -> Result<Motive> {
    let text = fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    parse_motive(&text)
}

fn parse_coeffs(s: &str, f: &anderson::Field) -> Result<TPoly> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| Error::Parse {
            line: 1,
            col: 1,
            msg: format!("expected a bracketed coefficient list, found `{s}`"),
        })?;
    let mut cs = Vec::new();
    for (i, tok) in inner.split(',').enumerate() {
        let v: u64 = tok.trim().parse().map_err(|_| Error::Parse {
            line: 1,
            col: i + 2,
            msg: format!("bad coefficient `{}`", tok.trim()),
        })?;
        cs.push(f.decode(v)?);
    }
    Ok(TPoly::from_coeffs(f, cs))
}

fn parse_place(s: &str, m: &Motive) -> Result<Place> {
    if s.trim() == "inf" {
        return Ok(Place::Inf);
    }
    let v = parse_coeffs(s, m.base())?;
    if v.deg() < 1 || !v.is_monic() || !anderson::ffactor::is_irreducible(&v) {
        return Err(Error::Invalid(format!("place {s} is not a monic irreducible")));
    }
    Ok(Place::Finite(v))
}

fn parse_map(s: &str, m: &Motive) -> Result<TMatrix> {
    let l = m.field();
    let rows = s
        .split('|')
        .map(|row| row.split(';').map(|e| parse_coeffs(e, l)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(Error::Invalid("ragged matrix".into()));
    }
    Ok(TMatrix::from_rows(l, rows))
}

fn poly(p: &TPoly) -> String {
    p.display("t")
}

fn matrix_json(t: &TMatrix) -> Value {
    Value::Array(
        t.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(|p| json!(poly(p))).collect()))
            .collect(),
    )
}

fn matrix_text(t: &TMatrix) -> String {
    t.to_rows()
        .iter()
        .map(|r| format!("  [{}]", r.iter().map(poly).collect::<Vec<_>>().join(", ")))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Output: a JSON document and its human-readable rendering.
struct Out {
    json: Value,
    text: String,
}

fn analyze(m: &Motive) -> Result<Out> {
    let rep = m.report()?;
    let text = format!(
        "r={} d={} weight={} pure={} semisimple={} chi=\"{}\" mu=\"{}\" epsilon=\"{}\"",
        rep.r,
        rep.d,
        rep.weight,
        rep.pure,
        rep.semisimple,
        rep.chi,
        rep.mu,
        poly(&rep.epsilon)
    );
    Ok(Out {
        json: json!({
            "r": rep.r, "d": rep.d, "weight": rep.weight.to_string(), "pure": rep.pure,
            "semisimple": rep.semisimple, "chi": rep.chi.to_string(), "mu": rep.mu.to_string(),
            "epsilon": poly(&rep.epsilon),
        }),
        text,
    })
}

fn frobenius(m: &Motive) -> Result<Out> {
    let pi = m.frobenius_matrix();
    let factors: Vec<Value> = m
        .chi_factors()?
        .iter()
        .map(|(f, k)| json!({"factor": f.to_string(), "multiplicity": k}))
        .collect();
    let text = format!(
        "pi =\n{}\nchi = {}\nmu = {}\nfactors: {}",
        matrix_text(pi),
        m.chi()?,
        m.mu()?,
        m.chi_factors()?
            .iter()
            .map(|(f, k)| format!("({f})^{k}"))
            .collect::<Vec<_>>()
            .join(" ")
    );
    Ok(Out {
        json: json!({"pi": matrix_json(pi), "chi": m.chi()?.to_string(), "mu": m.mu()?.to_string(), "chi_factors": factors}),
        text,
    })
}

fn zeta(m: &Motive) -> Result<Out> {
    let z = m.zeta()?;
    let parts: Vec<(String, i32)> = z
        .factors
        .iter()
        .enumerate()
        .map(|(i, f)| (f.display("u"), anderson::motive::ZetaFunction::exponent(i)))
        .collect();
    let text = parts
        .iter()
        .enumerate()
        .map(|(i, (f, e))| format!("N_{i}(u) = {f}   exponent {e:+}"))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Out {
        json: json!({"factors": parts.iter().map(|(f, e)| json!({"poly": f, "exponent": e})).collect::<Vec<_>>()}),
        text,
    })
}

fn slopes(m: &Motive, place: &str) -> Result<Out> {
    let p = parse_place(place, m)?;
    let np = newton_polygon(m.chi()?, &p);
    let segs: Vec<Value> = np
        .segments
        .iter()
        .map(|s| json!({"slope": s.slope.to_string(), "length": s.length}))
        .collect();
    let mut text = np
        .segments
        .iter()
        .map(|s| format!("slope {} length {}", s.slope, s.length))
        .collect::<Vec<_>>()
        .join("\n");
    let mut doc = json!({"place": format!("{p:?}"), "segments": segs});
    if p == Place::Inf {
        let sl: Vec<String> = m.slopes_at_infinity()?.iter().map(|s| s.to_string()).collect();
        let rh = m.rh_check()?;
        text.push_str(&format!("\neigenvalue slopes at inf: {}\nrh_check={rh}", sl.join(" ")));
        doc["eigenvalue_slopes"] = json!(sl);
        doc["rh_check"] = json!(rh);
    }
    Ok(Out { json: doc, text })
}

fn hom(m: &Motive, mp: &Motive) -> Result<Out> {
    let hb = morphisms::solve_hom(m, mp)?;
    let mut text = format!("rank={} bound={}\nincrements={:?}", hb.rank, hb.bound, hb.increments);
    for (i, g) in hb.gens.iter().enumerate() {
        text.push_str(&format!("\ng{i} =\n{}", matrix_text(&g.f)));
    }
    let mut doc = json!({
        "rank": hb.rank, "bound": hb.bound, "increments": hb.increments,
        "generators": hb.gens.iter().map(|g| matrix_json(&g.f)).collect::<Vec<_>>(),
    });
    if m.is_semisimple()? && mp.is_semisimple()? {
        let d = algebra::hom_dimension(m, mp)?;
        text.push_str(&format!("\nr_value={d}"));
        doc["r_value"] = json!(d);
    }
    Ok(Out { json: doc, text })
}

fn isogeny_test(m: &Motive, mp: &Motive) -> Result<Out> {
    let (eq, w) = algebra::isogeny_equivalent(m, mp)?;
    let mut text = format!("isogenous={eq}");
    let mut doc = json!({"isogenous": eq});
    if let Some(w) = w {
        let d = morphisms::isogeny_data(&w)?;
        text.push_str(&format!("\nwitness =\n{}\ndegree={}", matrix_text(&w.f), poly(&d.degree)));
        doc["witness"] = matrix_json(&w.f);
        doc["degree"] = json!(poly(&d.degree));
    }
    Ok(Out { json: doc, text })
}

fn invs(v: &[algebra::LocalInvariant]) -> Vec<String> {
    v.iter().map(|l| l.inv.to_string()).collect()
}

fn hasse_out(rep: &EndAlgebraReport) -> Out {
    let comps: Vec<Value> = rep
        .components
        .iter()
        .map(|c| {
            json!({
                "mu": c.mu.to_string(), "multiplicity": c.multiplicity, "degree": c.degree,
                "dim_over_center": c.dim_over_center, "index": c.index,
                "invariants": {"inf": invs(&c.at_infinity), "char": invs(&c.at_char)},
                "places": {
                    "inf": c.at_infinity.iter().map(|l| json!({"e": l.e, "f": l.f, "v_pi": l.v_pi.to_string()})).collect::<Vec<_>>(),
                    "char": c.at_char.iter().map(|l| json!({"e": l.e, "f": l.f, "v_pi": l.v_pi.to_string()})).collect::<Vec<_>>(),
                },
            })
        })
        .collect();
    let mut text = format!("dim_Q E = {}", rep.dim);
    for c in &rep.components {
        text.push_str(&format!(
            "\ncomponent mu={} m={} [F:Q]={} index={}\n  inf: {}\n  char: {}",
            c.mu,
            c.multiplicity,
            c.degree,
            c.index,
            invs(&c.at_infinity).join(" "),
            invs(&c.at_char).join(" ")
        ));
    }
    Out {
        json: json!({"dim": rep.dim, "components": comps}),
        text,
    }
}

fn hasse(m: &Motive) -> Result<Out> {
    let rep = algebra::hasse_invariants(m)?;
    let simple = algebra::is_simple(m)?;
    let mut out = hasse_out(&rep);
    out.text.push_str(&format!("\nsimple={simple}"));
    out.json["simple"] = json!(simple);
    Ok(out)
}

fn tate(m: &Motive, place: &str, n: usize) -> Result<Out> {
    let Place::Finite(v) = parse_place(place, m)? else {
        return Err(Error::Invalid("Tate modules need a finite place".into()));
    };
    let t = local::tate_module(m, &v, n)?;
    let text = format!(
        "splitting degree m={}\nfixed points: q^{}\nfrobenius =\n{}\npi mod v^n =\n{}",
        t.m,
        t.fixed_dim,
        matrix_text(&t.frobenius),
        matrix_text(&t.pi)
    );
    Ok(Out {
        json: json!({"m": t.m, "fixed_dim": t.fixed_dim, "frobenius": matrix_json(&t.frobenius), "pi": matrix_json(&t.pi)}),
        text,
    })
}

fn degree_of(
    m: &Motive,
    frob: bool,
    scalar: Option<&str>,
    map: Option<&str>,
    target: Option<&Motive>,
) -> Result<Out> {
    let f = if frob {
        Morphism::frobenius(m)
    } else if let Some(s) = scalar {
        Morphism::scalar(m, &parse_coeffs(s, m.base())?)
    } else if let Some(s) = map {
        Morphism::new(m, target.unwrap_or(m), parse_map(s, m)?)?
    } else {
        return Err(Error::Invalid("one of --frobenius, --scalar, --map is required".into()));
    };
    let d = morphisms::isogeny_data(&f)?;
    let kind = match d.kind {
        morphisms::IsogenyKind::Separable => "separable",
        morphisms::IsogenyKind::PurelyInseparable => "purely_inseparable",
        morphisms::IsogenyKind::Mixed => "mixed",
    };
    let divs: Vec<String> = d.elementary_divisors.iter().map(poly).collect();
    let text = format!(
        "degree={}\nseparable={}\ninseparable={}\ncoker_dim={}\nkind={kind}\nelementary_divisors={}",
        poly(&d.degree),
        poly(&d.separable_part),
        poly(&d.inseparable_part),
        d.coker_dim,
        divs.join(", ")
    );
    Ok(Out {
        json: json!({
            "degree": poly(&d.degree), "separable": poly(&d.separable_part),
            "inseparable": poly(&d.inseparable_part), "coker_dim": d.coker_dim,
            "kind": kind, "elementary_divisors": divs,
        }),
        text,
    })
}

fn run(cli: &Cli) -> Result<(Out, bool)> {
    let out = match &cli.cmd {
        Cmd::Analyze { file } => analyze(&load(file)?)?,
        Cmd::Frobenius { file } => frobenius(&load(file)?)?,
        Cmd::Zeta { file } => zeta(&load(file)?)?,
        Cmd::Slopes { file, place } => slopes(&load(file)?, place)?,
        Cmd::Hom { source, target } => hom(&load(source)?, &load(target)?)?,
        Cmd::End { file } => {
            let m = load(file)?;
            hom(&m, &m)?
        }
        Cmd::IsogenyTest { source, target } => isogeny_test(&load(source)?, &load(target)?)?,
        Cmd::Hasse { file } => hasse(&load(file)?)?,
        Cmd::Tate { file, place, n } => tate(&load(file)?, place, *n)?,
        Cmd::Extend { file, degree } => {
            let m = load(file)?.base_extend(*degree)?;
            let s = serialize(&m);
            Out {
                json: json!({"motive": s}),
                text: s.trim_end().to_string(),
            }
        }
        Cmd::DegreeOf {
            file,
            frobenius,
            scalar,
            map,
            target,
        } => {
            let m = load(file)?;
            let t = target.as_deref().map(load).transpose()?;
            degree_of(&m, *frobenius, scalar.as_deref(), map.as_deref(), t.as_ref())?
        }
        Cmd::Corpus { dir } => {
            let report = corpus::run(dir.as_deref())?;
            let ok = report.all_passed();
            return Ok((
                Out {
                    json: report.to_json(),
                    text: report.to_text(),
                },
                ok,
            ));
        }
    };
    Ok((out, true))
}

fn exit_code(e: &Error) -> u8 {
    match e.class() {
        ErrorClass::Parse => 2,
        ErrorClass::Validation => 3,
        ErrorClass::Computation => 4,
        ErrorClass::Internal => 5,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, ok)) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else {
                println!("{}", out.text);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({"error": e.to_string(), "exit_code": exit_code(&e)}));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
