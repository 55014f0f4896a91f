use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use massey_core::dga::{Cochain, MultiDegree};
use massey_core::face::{
    golod_test, hochster_table, mainlemma_check, support_class, mask_of, rk_model, triple_massey_scan_with,
    triple_massey_search, zk_massey, SimplicialComplex, SimplicialCochain,
};
use massey_core::generators;
use massey_core::io::{
    betti_to_csv, betti_to_json, class_json, complex_from_json, complex_to_json, lie_from_json, named_lie,
    outcome_json, pairs_to_csv, parse_form, report, ring_from_json, ring_to_json,
};
use massey_core::lie::{ce_window, goncharova_weights, GradedLie};
use massey_core::massey::{k_step_massey, massey_product, MasseyOptions};
use massey_core::resolution::{golod_series_check, koszul_homology, RESOLUTION_CAP};
use massey_core::ring::{golod_test_model, GolodReport, GolodVerdict, GolodWitness, MonomialQuotient};
use massey_core::{Error, Field};

#[derive(Parser)]
#[command(name = "massey", version, about = "Exact cohomology and Massey products")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Coefficient field: `q` or `fp:<p>`.
    #[arg(long, global = true, default_value = "q")]
    field: String,
    /// Parameter budget for products of four or more classes.
    #[arg(long, global = true, default_value_t = 8)]
    budget: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Input file (standard input when absent).
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    /// Output file (standard output when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Cohomology table of a Lie algebra window or of a moment-angle complex.
    Cohomology {
        /// `m0` or `witt_plus`; otherwise the input is read.
        #[arg(long)]
        lie: Option<String>,
        #[arg(long, default_value_t = 3)]
        qmax: usize,
        #[arg(long, default_value_t = 12)]
        wmax: i32,
    },
    /// Dimensions of H^q_w(W⁺) against the pentagonal weights.
    Goncharova {
        #[arg(long, default_value_t = 3)]
        qmax: usize,
        #[arg(long, default_value_t = 16)]
        wmax: i32,
    },
    /// A Massey product of Lie forms or of simplicial classes on disjoint supports.
    Massey(MasseyArgs),
    /// The k-step product of Lie forms.
    Kstep {
        #[command(flatten)]
        args: MasseyArgs,
        #[arg(long)]
        k: usize,
    },
    /// Multigraded Betti numbers of a complex or a monomial ring.
    Betti,
    /// Golodness test up to a Massey order.
    Golod {
        #[arg(long)]
        order_cap: Option<usize>,
    },
    /// Triple Massey products over a complex, one JSON line per product.
    TripleScan {
        /// Search all basis classes instead of missing edges only.
        #[arg(long)]
        all_classes: bool,
        /// Stop after this many nontrivial products (with --all-classes).
        #[arg(long, default_value_t = 1)]
        max_hits: usize,
    },
    /// Vanishing conditions for definedness and strictness.
    Mainlemma {
        #[arg(long)]
        supports: String,
        /// Cohomological degree of each class (defaults to the lowest nonzero one).
        #[arg(long)]
        degrees: Option<String>,
    },
    /// Poincaré series of Tor(k, k) against the Serre bound.
    Poincare {
        #[arg(long, default_value_t = RESOLUTION_CAP)]
        terms: usize,
    },
    /// Emit a named complex or ring as JSON.
    Generate {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        r: Option<u32>,
        /// Copies per vertex for `multiwedge`, e.g. `2,1,1,1`.
        #[arg(long)]
        j: Option<String>,
    },
}

#[derive(Args, Clone)]
struct MasseyArgs {
    /// Lie algebra (`m0`, `witt_plus`); without it a Lie presentation or complex is read.
    #[arg(long)]
    lie: Option<String>,
    /// Lie forms separated by `;`, e.g. `e1;e2;e2`.
    #[arg(long)]
    classes: Option<String>,
    /// Vertex supports separated by `;`, e.g. `1,4;2,5;3,6`.
    #[arg(long)]
    supports: Option<String>,
    #[arg(long)]
    degrees: Option<String>,
    #[arg(long)]
    wmax: Option<i32>,
    #[arg(long)]
    qmax: Option<usize>,
    /// Allow parameters in every auxiliary degree.
    #[arg(long)]
    full_scope: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Cube,
    Qn,
    Polygon,
    Dodecahedron,
    Simplex,
    Multiwedge,
    Anr,
}

enum Input {
    Complex(SimplicialComplex),
    Ring(MonomialQuotient),
    Lie(GradedLie),
}

struct Ctx {
    run: RunConfig,
    field: Field,
}

impl Ctx {
    fn opts(&self) -> MasseyOptions {
        MasseyOptions {
            budget: self.run.budget,
            seed: self.run.seed,
            ..MasseyOptions::default()
        }
    }

    fn read_text(&self) -> anyhow::Result<String> {
        let mut s = String::new();
        match &self.run.input {
            Some(p) => {
                s = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            }
            None => {
                std::io::stdin().read_to_string(&mut s)?;
            }
        }
        Ok(s)
    }

    fn read_input(&self) -> anyhow::Result<Input> {
        let text = self.read_text()?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::InvalidInput(e.to_string()))?;
        if v.get("m").is_some() {
            Ok(Input::Complex(complex_from_json(&text)?))
        } else if v.get("gens").is_some() {
            Ok(Input::Ring(ring_from_json(&text, self.field)?))
        } else {
            Ok(Input::Lie(lie_from_json(&text, self.field)?))
        }
    }

    fn read_complex(&self) -> anyhow::Result<SimplicialComplex> {
        match self.read_input()? {
            Input::Complex(k) => Ok(k),
            _ => Err(Error::InvalidInput("expected a simplicial complex".into()).into()),
        }
    }

    fn emit(&self, text: &str) -> anyhow::Result<()> {
        match &self.run.out {
            Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn emit_json(&self, command: &str, payload: Value) -> anyhow::Result<()> {
        self.emit(&format!("{}\n", report(command, payload)))
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Error> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|_| Error::InvalidInput(format!("bad {what} {t:?}"))))
        .collect()
}

fn parse_supports(s: &str) -> Result<Vec<Vec<usize>>, Error> {
    s.split(';').map(|p| parse_list(p, "vertex")).collect()
}

fn golod_json(r: &GolodReport) -> Value {
    let witness = match &r.verdict {
        GolodVerdict::NotGolod(GolodWitness::Product(p)) => json!({
            "kind": "product",
            "left": p.left.degree.aux, "right": p.right.degree.aux,
        }),
        GolodVerdict::NotGolod(GolodWitness::Massey(cs)) => json!({
            "kind": "massey",
            "classes": cs.iter().map(|c| c.degree.aux.clone()).collect::<Vec<_>>(),
        }),
        GolodVerdict::Unknown { reason } => json!({"kind": "unknown", "reason": reason}),
        GolodVerdict::GolodUpToCap { .. } => Value::Null,
    };
    json!({
        "verdict": r.verdict.label(),
        "witness": witness,
        "trivial_multiplication": r.trivial_multiplication,
        "massey_trivial_up_to_cap": r.massey_trivial_up_to_cap,
        "order_cap": r.order_cap,
        "examined": r.examined,
    })
}

fn lie_setup(ctx: &Ctx, a: &MasseyArgs) -> anyhow::Result<(GradedLie, Vec<Cochain<u64>>, usize, i32)> {
    let text = a.classes.as_deref().ok_or_else(|| Error::InvalidInput("--classes is required".into()))?;
    let forms: Vec<Cochain<u64>> = text.split(';').map(|t| parse_form(t, ctx.field)).collect::<Result<_, _>>()?;
    let n = forms.len();
    let coh: usize = forms
        .iter()
        .map(|f| f.terms.keys().next().map(|m| m.count_ones() as usize).unwrap_or(1))
        .sum();
    let top_index: usize = forms
        .iter()
        .map(|f| f.terms.keys().map(|m| 64 - m.leading_zeros() as usize).max().unwrap_or(1))
        .sum();
    let default_w = top_index.max(n) as i32 + 2;
    let lie = match &a.lie {
        Some(name) => named_lie(name, a.wmax.map(|w| w as usize).unwrap_or(default_w as usize), ctx.field)?,
        None => match ctx.read_input()? {
            Input::Lie(g) => g,
            _ => return Err(Error::InvalidInput("expected a Lie algebra".into()).into()),
        },
    };
    let wmax = a.wmax.unwrap_or(lie.truncation_weight).min(lie.truncation_weight);
    let qmax = a.qmax.unwrap_or((coh + 3).saturating_sub(n));
    Ok((lie, forms, qmax, wmax))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let field = Field::parse(&cli.run.field)?;
    let ctx = Ctx { run: cli.run, field };
    let csv = ctx.run.format == Format::Csv;
    match cli.command {
        Command::Goncharova { qmax, wmax } => {
            if qmax == 0 || wmax <= 0 {
                return Err(Error::InvalidInput("caps must be positive".into()).into());
            }
            let cx = ce_window(GradedLie::witt_plus(wmax.max(2) as usize, field)?, qmax, wmax)?;
            let cells: Vec<(usize, i32)> = (0..=qmax).flat_map(|q| (0..=wmax).map(move |w| (q, w))).collect();
            let dims = cells
                .par_iter()
                .map(|(q, w)| cx.cohomology_at(&MultiDegree::new(*q as i32, vec![*w])).map(|h| h.dim()))
                .collect::<Result<Vec<_>, _>>()?;
            let mut rows = Vec::new();
            let mut matches = true;
            for ((q, w), d) in cells.iter().zip(&dims) {
                let expected = usize::from(*q == 0 && *w == 0 || *q > 0 && goncharova_weights(*q).contains(w));
                matches &= expected == *d;
                rows.push((*q, *w, *d, expected));
            }
            if csv {
                let mut s = String::from("q,w,dim,expected\n");
                for (q, w, d, e) in rows {
                    s.push_str(&format!("{q},{w},{d},{e}\n"));
                }
                return ctx.emit(&s);
            }
            let table: Vec<Value> = rows
                .iter()
                .map(|(q, w, d, e)| json!({"q": q, "w": w, "dim": d, "expected": e}))
                .collect();
            ctx.emit_json("goncharova", json!({"field": field.to_string(), "table": table, "pentagonal": matches}))
        }
        Command::Cohomology { lie, qmax, wmax } => {
            let input = match lie {
                Some(name) => Input::Lie(named_lie(&name, wmax.max(2) as usize, field)?),
                None => ctx.read_input()?,
            };
            match input {
                Input::Lie(g) => {
                    let wmax = wmax.min(g.truncation_weight);
                    let name = g.name.clone();
                    let cx = ce_window(g, qmax, wmax)?;
                    let cells: Vec<(usize, i32)> = (0..=qmax).flat_map(|q| (0..=wmax).map(move |w| (q, w))).collect();
                    let dims = cells
                        .par_iter()
                        .map(|(q, w)| cx.cohomology_at(&MultiDegree::new(*q as i32, vec![*w])).map(|h| h.dim()))
                        .collect::<Result<Vec<_>, _>>()?;
                    let entries: Vec<(usize, i32, usize)> =
                        cells.iter().zip(&dims).filter(|(_, d)| **d > 0).map(|((q, w), d)| (*q, *w, *d)).collect();
                    if csv {
                        let mut s = String::from("q,w,dim\n");
                        for (q, w, d) in entries {
                            s.push_str(&format!("{q},{w},{d}\n"));
                        }
                        return ctx.emit(&s);
                    }
                    let e: Vec<Value> = entries.iter().map(|(q, w, d)| json!({"q": q, "w": w, "dim": d})).collect();
                    ctx.emit_json(
                        "cohomology",
                        json!({"algebra": name, "field": field.to_string(), "qmax": qmax, "wmax": wmax, "entries": e}),
                    )
                }
                Input::Complex(k) => {
                    let t = massey_core::face::rk_cohomology(&k, field)?.table;
                    if csv {
                        return ctx.emit(&betti_to_csv(&t));
                    }
                    ctx.emit_json("cohomology", json!({"complex": complex_to_json(&k), "table": betti_to_json(&t)}))
                }
                Input::Ring(a) => {
                    let t = koszul_homology(&a)?.table;
                    if csv {
                        return ctx.emit(&betti_to_csv(&t));
                    }
                    ctx.emit_json("cohomology", json!({"ring": ring_to_json(&a), "table": betti_to_json(&t)}))
                }
            }
        }
        Command::Betti => {
            let (t, source) = match ctx.read_input()? {
                Input::Complex(k) => (hochster_table(&k, field)?, complex_to_json(&k)),
                Input::Ring(a) => (koszul_homology(&a)?.table, ring_to_json(&a)),
                Input::Lie(_) => return Err(Error::InvalidInput("betti needs a complex or a ring".into()).into()),
            };
            if csv {
                return ctx.emit(&betti_to_csv(&t));
            }
            ctx.emit_json("betti", json!({"input": source, "table": betti_to_json(&t), "totals": t.totals()}))
        }
        Command::Golod { order_cap } => {
            let r = match ctx.read_input()? {
                Input::Complex(k) => {
                    let cap = order_cap.unwrap_or_else(|| massey_core::face::default_order_cap(&k));
                    golod_test(&k, field, cap)?
                }
                Input::Ring(a) => {
                    let cx = massey_core::resolution::koszul_model(&a)?;
                    golod_test_model(&cx, order_cap.unwrap_or(a.n_vars.saturating_sub(1).clamp(2, 5)), &ctx.opts())?
                }
                Input::Lie(_) => return Err(Error::InvalidInput("golod needs a complex or a ring".into()).into()),
            };
            let v = golod_json(&r);
            if csv {
                let rows: Vec<(String, String)> = v
                    .as_object()
                    .unwrap()
                    .iter()
                    .map(|(k, x)| (k.clone(), x.to_string()))
                    .collect();
                return ctx.emit(&pairs_to_csv(&rows));
            }
            ctx.emit_json("golod", v)
        }
        Command::Poincare { terms } => {
            let a = match ctx.read_input()? {
                Input::Ring(a) => a,
                Input::Complex(k) => k.face_ring(field)?,
                Input::Lie(_) => return Err(Error::InvalidInput("poincare needs a ring".into()).into()),
            };
            let c = golod_series_check(&a, terms)?;
            if csv {
                let mut s = String::from("t,poincare,bound\n");
                for (i, (p, b)) in c.poincare.coefficients.iter().zip(&c.bound.coefficients).enumerate() {
                    s.push_str(&format!("{i},{p},{b}\n"));
                }
                return ctx.emit(&s);
            }
            ctx.emit_json("poincare", json!({"ring": ring_to_json(&a), "series": serde_json::to_value(&c)?}))
        }
        Command::Mainlemma { supports, degrees } => {
            let k = ctx.read_complex()?;
            let sets = parse_supports(&supports)?;
            let qs: Vec<Option<i32>> = match &degrees {
                Some(d) => parse_list::<i32>(d, "degree")?.into_iter().map(Some).collect(),
                None => vec![None; sets.len()],
            };
            if qs.len() != sets.len() {
                return Err(Error::InvalidInput("one degree per support is needed".into()).into());
            }
            let mut dims = Vec::new();
            for (s, q) in sets.iter().zip(&qs) {
                dims.push(support_class(&k, s, *q, field)?.q);
            }
            let masks: Vec<u32> = sets.iter().map(|s| mask_of(s)).collect();
            let r = mainlemma_check(&k, &masks, &dims, field)?;
            ctx.emit_json(
                "mainlemma",
                json!({"supports": sets, "degrees": dims, "cond1": r.cond1, "cond2": r.cond2,
                       "strict": r.cond1 && r.cond2}),
            )
        }
        Command::Massey(a) => {
            if let Some(sup) = &a.supports {
                let k = ctx.read_complex()?;
                let sets = parse_supports(sup)?;
                let qs: Vec<Option<i32>> = match &a.degrees {
                    Some(d) => parse_list::<i32>(d, "degree")?.into_iter().map(Some).collect(),
                    None => vec![None; sets.len()],
                };
                if qs.len() != sets.len() {
                    return Err(Error::InvalidInput("one degree per support is needed".into()).into());
                }
                let classes: Vec<SimplicialCochain> = sets
                    .iter()
                    .zip(&qs)
                    .map(|(s, q)| support_class(&k, s, *q, field))
                    .collect::<Result<_, _>>()?;
                let r = zk_massey(&k, &classes, field, &ctx.opts())?;
                let model = rk_model(&k, field)?;
                return ctx.emit_json(
                    "massey",
                    json!({
                        "supports": sets,
                        "degrees": classes.iter().map(|c| c.q).collect::<Vec<_>>(),
                        "mainlemma": {"cond1": r.mainlemma.cond1, "cond2": r.mainlemma.cond2},
                        "outcome": outcome_json(&model, &r.outcome)?,
                    }),
                );
            }
            let (lie, forms, qmax, wmax) = lie_setup(&ctx, &a)?;
            let name = lie.name.clone();
            let cx = ce_window(lie, qmax, wmax)?;
            let mut opts = ctx.opts();
            opts.homogeneous = !a.full_scope;
            let o = massey_product(&cx, &forms, &opts)?;
            ctx.emit_json(
                "massey",
                json!({
                    "algebra": name,
                    "classes": forms.iter().map(|f| cx.format(f)).collect::<Vec<_>>(),
                    "outcome": outcome_json(&cx, &o)?,
                }),
            )
        }
        Command::Kstep { args, k } => {
            let (lie, forms, qmax, wmax) = lie_setup(&ctx, &args)?;
            let name = lie.name.clone();
            let cx = ce_window(lie, qmax, wmax)?;
            let mut opts = ctx.opts();
            opts.homogeneous = !args.full_scope;
            let o = k_step_massey(&cx, &forms, k, &opts)?;
            let value = match &o.defined {
                None => json!({"defined": false, "proven": o.proven}),
                Some(v) => json!({
                    "defined": true,
                    "triviality": v.triviality.label(),
                    "classes": v.classes.iter().map(|c| class_json(&cx, c)).collect::<Result<Vec<_>, _>>()?,
                }),
            };
            ctx.emit_json(
                "kstep",
                json!({"algebra": name, "k": k, "params": o.params, "complete": o.complete, "result": value}),
            )
        }
        Command::TripleScan { all_classes, max_hits } => {
            let k = ctx.read_complex()?;
            let model = rk_model(&k, field)?;
            let out = &ctx;
            let mut lines = String::new();
            let mut nontrivial = 0usize;
            let total;
            if all_classes {
                let s = triple_massey_search(&k, field, &ctx.opts(), max_hits.max(1))?;
                for h in &s.hits {
                    let line = json!({"supports": h.supports, "outcome": outcome_json(&model, &h.outcome)?});
                    lines.push_str(&format!("{line}\n"));
                }
                nontrivial = s.hits.len();
                total = s.examined;
            } else {
                let entries = triple_massey_scan_with(&k, field, &ctx.opts(), |_| true)?;
                total = entries.len();
                for e in &entries {
                    if e.outcome.triviality == massey_core::massey::Triviality::Nontrivial {
                        nontrivial += 1;
                    }
                    let line = json!({"pairs": e.pairs, "status": e.outcome.status.label(),
                                      "triviality": e.outcome.triviality.label()});
                    lines.push_str(&format!("{line}\n"));
                }
            }
            let summary = report(
                "triple-scan",
                json!({"examined": total, "nontrivial": nontrivial, "all_classes": all_classes}),
            );
            lines.push_str(&format!("{summary}\n"));
            out.emit(&lines)
        }
        Command::Generate { kind, n, m, r, j } => {
            let need = |x: Option<usize>, flag: &str| x.ok_or_else(|| Error::InvalidInput(format!("--{flag} is required")));
            let v = match kind {
                Kind::Cube => complex_to_json(&generators::cube(need(n, "n")?)?),
                Kind::Qn => complex_to_json(&generators::qn(need(n, "n")?)?),
                Kind::Polygon => complex_to_json(&generators::polygon(need(m.or(n), "m")?)?),
                Kind::Dodecahedron => complex_to_json(&generators::dodecahedron_nerve()?),
                Kind::Simplex => complex_to_json(&SimplicialComplex::simplex(need(m.or(n), "m")?)?),
                Kind::Multiwedge => {
                    let k = ctx.read_complex()?;
                    let js = parse_list::<usize>(j.as_deref().unwrap_or(""), "multiplicity")?;
                    complex_to_json(&generators::multiwedge(&k, &js)?)
                }
                Kind::Anr => {
                    let r = r.ok_or_else(|| Error::InvalidInput("--r is required".into()))?;
                    ring_to_json(&generators::anr(need(n, "n")?, r, field)?)
                }
            };
            ctx.emit(&format!("{v}\n"))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::CapExceeded(_)) => 3,
        Some(Error::Internal(_)) => 1,
        Some(_) => 2,
        None if e.downcast_ref::<std::io::Error>().is_some() => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = std::env::var("MASSEY_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if t > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
