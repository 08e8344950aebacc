use anyhow::{anyhow, bail, Context, Result};
use chaindyn::chaingraph::CyclicDecomposition;
use chaindyn::dc1::{
    approximate_dc1_near, build_schedule, build_xi, certify_dc1, dc1_statistics, dyadic_grid, entropy_lower_bound,
    factor_construct, gather_blocks, BlockGrid, BoundKind, DC1Schedule,
};
use chaindyn::pairlab::{
    classify_pair, extract_pstar_pair, liyorke_to_relation, thick_profile, ExtractOptions, Thresholds,
};
use chaindyn::pstar::{property_star, PStarOutcome, PStarWitness};
use chaindyn::relation::{relate_schedule, PairRelation};
use chaindyn::scalar::parse_rational;
use chaindyn::shadowing::{shadow_points, tracking_average, PseudoOrbit, PseudoOrbitKind};
use chaindyn::systems::discretize;
use chaindyn::{ExactGraph, ExactPoint, ExactSystem, Point, Rational, Scalar, SymbolSeq};
use serde_json::{json, Value};

use crate::config::parse_system;
use crate::store::{Artifact, Inputs};
use crate::{Command, Dc1Args, Dc1Command, GraphEmit, Grid, Outcome};

fn num(text: &str, what: &str) -> Result<Rational> {
    parse_rational(text).ok_or_else(|| anyhow!("{what}: cannot parse {text:?} as an exact number"))
}

fn s(r: &Rational) -> String {
    r.to_string()
}

fn point(spec: &ExactSystem, text: &str, what: &str) -> Result<ExactPoint> {
    let p = if spec.is_subshift() {
        Point::Symbolic(SymbolSeq::parse(text).with_context(|| format!("{what}: not a symbol sequence"))?)
    } else {
        Point::Real(num(text, what)?)
    };
    spec.check_point(&p).with_context(|| format!("{what} is not in the phase space"))?;
    Ok(p)
}

fn binary(text: &str, what: &str) -> Result<Vec<u8>> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => bail!("{what} must be a binary string"),
        })
        .collect()
}

fn json_artifact(name: &str, v: &Value) -> Artifact {
    Artifact::new(name, serde_json::to_string_pretty(v).expect("json values serialize") + "\n")
}

fn load(inputs: &mut Inputs, path: &std::path::Path) -> Result<ExactSystem> {
    parse_system(&inputs.read(path)?).with_context(|| format!("in {}", path.display()))
}

/// `(boxes, δ)` from optional flags: subshifts default to their word depth
/// and `2^-k`, box systems need `--boxes` and default to one box width.
fn resolution(spec: &ExactSystem, boxes: Option<usize>, delta: Option<&str>) -> Result<(usize, Rational)> {
    let n = match (boxes, spec.subshift()) {
        (Some(n), _) => n,
        (None, Some(sft)) => sft.depth(),
        (None, None) => bail!("--boxes is required for a {} system", spec.kind_name()),
    };
    if n == 0 {
        bail!("--boxes must be positive");
    }
    let d = match (delta, spec.is_subshift()) {
        (Some(t), _) => num(t, "--delta")?,
        (None, true) => Rational::dyadic(n as u32),
        (None, false) => Rational::from_ratio(1, n as i64),
    };
    Ok((n, d))
}

/// Comma-separated `δ` or `boxes:δ` entries.
fn schedule(spec: &ExactSystem, text: &str, boxes: Option<usize>) -> Result<Vec<(usize, Rational)>> {
    text.split(',')
        .map(|entry| {
            let entry = entry.trim();
            if let Some((n, d)) = entry.split_once(':') {
                let n: usize = n.trim().parse().with_context(|| format!("bad box count in {entry:?}"))?;
                return Ok((n, num(d, "schedule")?));
            }
            let d = num(entry, "schedule")?;
            if let Some(n) = boxes {
                return Ok((n, d));
            }
            if d <= Rational::from_integer(0.into()) {
                bail!("schedule entry {entry:?} needs an explicit box count");
            }
            let n = if spec.is_subshift() {
                (1..=64u32).find(|&k| Rational::dyadic(k) <= d).unwrap_or(64) as usize
            } else {
                (Rational::from_integer(1.into()) / d.clone()).ceil().to_integer().try_into()?
            };
            Ok((n, d))
        })
        .collect()
}

fn graph_json(spec: &ExactSystem, g: &ExactGraph) -> Value {
    json!({
        "system": spec.kind_name(),
        "boxes": g.len(),
        "delta": s(g.delta()),
        "vertices": (0..g.len()).map(|v| json!({"id": v, "label": g.label(v)})).collect::<Vec<_>>(),
        "edges": g.edges().map(|(u, v)| json!([u, v])).collect::<Vec<_>>(),
    })
}

fn decomposition_json(g: &ExactGraph, dec: &CyclicDecomposition) -> Value {
    json!({
        "vertex_count": dec.vertex_count(),
        "chain_recurrent": g.chain_recurrent_set(),
        "components": dec.components.iter().map(|c| json!({
            "id": c.id,
            "period": c.period,
            "classes": c.classes,
        })).collect::<Vec<_>>(),
    })
}

fn relation_json(r: &PairRelation) -> Value {
    let class = |c: Option<chaindyn::chaingraph::ClassIndex>| {
        c.map_or(Value::Null, |c| json!({"component": c.component, "class": c.class}))
    };
    json!({"related": r.related, "u_class": class(r.u_class), "v_class": class(r.v_class)})
}

fn witness_json(w: &PStarWitness<Rational>) -> Value {
    json!({
        "r": s(&w.r),
        "k": w.k,
        "cycle1": w.cycle1,
        "cycle2": w.cycle2,
        "separations": w.separations.iter().map(s).collect::<Vec<_>>(),
        "margins": w.margins.iter().map(s).collect::<Vec<_>>(),
        "min_margin": s(&w.min_margin()),
    })
}

fn execute_graph(grid: &Grid, inputs: &mut Inputs) -> Result<(ExactSystem, ExactGraph)> {
    let spec = load(inputs, &grid.system)?;
    let (n, d) = resolution(&spec, grid.boxes, grid.delta.as_deref())?;
    let g = discretize(&spec, n, &d)?;
    Ok((spec, g))
}

fn dc1_schedule(d: &Dc1Args, inputs: &mut Inputs, levels: Option<usize>) -> Result<(ExactSystem, DC1Schedule<Rational>)> {
    let spec = load(inputs, &d.system)?;
    let nmax = d.nmax.or(levels).unwrap_or(5);
    let default = |sym: &str, flag: &str| -> Result<String> {
        if spec.is_subshift() {
            Ok(sym.to_string())
        } else {
            bail!("{flag} is required for a {} system", spec.kind_name())
        }
    };
    let z = point(&spec, &d.z.clone().map_or_else(|| default("(0)", "--z"), Ok)?, "--z")?;
    let w = point(&spec, &d.w.clone().map_or_else(|| default("(1)", "--w"), Ok)?, "--w")?;
    let grid = match (&d.grid, spec.is_subshift()) {
        (Some(text), _) => BlockGrid::Boxes(schedule(&spec, text, None)?),
        (None, true) => BlockGrid::Words,
        (None, false) => bail!("--grid is required for a {} system", spec.kind_name()),
    };
    let blocks = gather_blocks(&spec, &z, &w, &num(&d.r, "--r")?, nmax, &grid)?;
    let sched = build_schedule(blocks, nmax)?;
    Ok((spec, sched))
}

fn blocks_json(sched: &DC1Schedule<Rational>) -> Result<Value> {
    let b = &sched.blocks;
    let levels: Vec<Value> = b
        .levels
        .iter()
        .map(|l| {
            let g = &b.graphs[l.graph];
            let labels = |c: &[usize]| c.iter().map(|&v| g.label(v)).collect::<Vec<_>>();
            json!({
                "n": l.n,
                "a": l.a,
                "z_box": l.z_box,
                "w_box": l.w_box,
                "gamma0": labels(&l.gamma0),
                "gamma1": labels(&l.gamma1),
                "alpha": labels(&l.alpha),
                "beta": labels(&l.beta),
            })
        })
        .collect();
    Ok(json!({
        "r": s(&b.r),
        "z": b.z.to_string(),
        "w": b.w.to_string(),
        "verified": b.verify()?,
        "levels": levels,
    }))
}

fn rows_csv(sched: &DC1Schedule<Rational>) -> String {
    let mut out = String::from("n,a,m,b,c\n");
    for r in &sched.rows {
        out += &format!("{},{},{},{},{}\n", r.n, r.a, r.m, r.b, r.c);
    }
    out
}

fn grid_list(text: Option<&str>) -> Result<Vec<Rational>> {
    match text {
        None => Ok(dyadic_grid()),
        Some(t) => t.split(',').map(|x| num(x, "--deltas")).collect(),
    }
}

fn f(r: &Rational) -> String {
    format!("{:.9}", r.to_f64_lossy())
}

fn gnuplot(deltas: &[Rational]) -> String {
    let mut p = String::from(
        "set datafile separator ','\nset key outside right\nset logscale x\nset xlabel 'checkpoint c_n'\n\
         set ylabel 'fraction'\nset yrange [0:1.05]\nplot \\\n",
    );
    let mut lines = Vec::new();
    for (j, d) in deltas.iter().enumerate() {
        lines.push(format!("  'stats.csv' using 2:{} with linespoints title 'Phi({})'", j + 3, d));
    }
    lines.push(format!("  'stats.csv' using 2:{} with linespoints title 'Psi(r/3)'", deltas.len() + 3));
    p += &lines.join(", \\\n");
    p + "\n"
}

fn dc1(cmd: &Dc1Command, inputs: &mut Inputs) -> Result<Outcome> {
    match cmd {
        Dc1Command::Gather(d) => {
            let (_, sched) = dc1_schedule(d, inputs, None)?;
            let v = blocks_json(&sched)?;
            let summary = vec![
                ("levels".into(), sched.blocks.levels.len().to_string()),
                ("a_1".into(), sched.blocks.levels[0].a.to_string()),
            ];
            Ok(Outcome { artifacts: vec![json_artifact("blocks.json", &v)], summary })
        }
        Dc1Command::Schedule(d) => {
            let (_, sched) = dc1_schedule(d, inputs, None)?;
            let rows: Vec<Value> = sched
                .rows
                .iter()
                .map(|r| json!({"n": r.n, "a": r.a.to_string(), "m": r.m.to_string(), "b": r.b.to_string(), "c": r.c.to_string()}))
                .collect();
            let last = sched.rows.last().unwrap();
            Ok(Outcome {
                artifacts: vec![json_artifact("schedule.json", &json!({"rows": rows})), Artifact::new("schedule.csv", rows_csv(&sched))],
                summary: vec![("levels".into(), sched.rows.len().to_string()), ("c_max".into(), last.c.to_string())],
            })
        }
        Dc1Command::BuildXi { dc1, u } => {
            let u = binary(u, "--u")?;
            let (_, sched) = dc1_schedule(dc1, inputs, Some(u.len()))?;
            let xi = build_xi(&u, &sched)?;
            let g = &sched.blocks.graphs[0];
            let segments: Vec<Value> = xi
                .segments()
                .iter()
                .map(|sg| json!({"level": sg.level, "chain": sg.chain.iter().map(|&v| g.label(v)).collect::<Vec<_>>(), "reps": sg.reps}))
                .collect();
            let blocks: Vec<Value> =
                (1..=u.len()).filter_map(|n| xi.block_range(n)).map(|(a, b)| json!([a, b])).collect();
            let v = json!({
                "u": u.iter().map(|b| char::from(b'0' + b)).collect::<String>(),
                "len": xi.len(),
                "blocks": blocks,
                "terminal": g.label(xi.terminal()),
                "segments": segments,
            });
            Ok(Outcome {
                artifacts: vec![json_artifact("xi.json", &v)],
                summary: vec![("entries".into(), xi.len().to_string())],
            })
        }
        Dc1Command::Stats { dc1, u, v, deltas, plot } => {
            let (u, v) = (binary(u, "--u")?, binary(v, "--v")?);
            let (spec, sched) = dc1_schedule(dc1, inputs, Some(u.len()))?;
            let deltas = grid_list(deltas.as_deref())?;
            let third = sched.blocks.r.clone() / Rational::from_usize(3);
            let stats = dc1_statistics(&spec, &sched, &u, &v, &deltas, std::slice::from_ref(&third))?;
            let mut csv = String::from("n,c");
            for d in &deltas {
                csv += &format!(",phi_{d}");
            }
            csv += &format!(",psi_{third},eps0,eps1\n");
            for cp in &stats.checkpoints {
                csv += &format!("{},{}", cp.n, cp.c);
                for j in 0..deltas.len() {
                    csv += &format!(",{}", f(&cp.phi(j)));
                }
                let (e0, e1) = cp.eps.clone().unwrap_or_default();
                csv += &format!(",{},{},{}\n", f(&cp.psi(0)), f(&e0), f(&e1));
            }
            let mut artifacts = vec![Artifact::new("stats.csv", csv)];
            if *plot {
                artifacts.push(Artifact::new("stats.gp", gnuplot(&deltas)));
            }
            Ok(Outcome { artifacts, summary: vec![("checkpoints".into(), stats.checkpoints.len().to_string())] })
        }
        Dc1Command::Certify { dc1, u, v, deltas } => {
            let (u, v) = (binary(u, "--u")?, binary(v, "--v")?);
            let (spec, sched) = dc1_schedule(dc1, inputs, Some(u.len()))?;
            let cert = certify_dc1(&spec, &sched, &u, &v, &grid_list(deltas.as_deref())?)?;
            let kind = |k: BoundKind| match k {
                BoundKind::Closeness => "closeness",
                BoundKind::Separation => "separation",
            };
            let checks: Vec<Value> = cert
                .checks
                .iter()
                .map(|c| {
                    json!({
                        "n": c.n, "checkpoint": c.checkpoint, "kind": kind(c.kind), "threshold": s(&c.threshold),
                        "measured": c.measured, "eps": [s(&c.eps.0), s(&c.eps.1)], "bound": s(&c.bound),
                        "margin": s(&c.margin), "fraction_margin": s(&c.fraction_margin), "passed": c.passed,
                    })
                })
                .collect();
            let mut csv = String::from("n,checkpoint,kind,threshold,fraction,bound,margin,passed\n");
            for c in &cert.checks {
                let frac = Rational::from_usize(c.measured as usize) / Rational::from_usize(c.checkpoint as usize);
                csv += &format!(
                    "{},{},{},{},{},{},{},{}\n",
                    c.n, c.checkpoint, kind(c.kind), c.threshold, f(&frac), f(&c.bound), f(&c.margin), c.passed
                );
            }
            let v = json!({
                "r": s(&cert.r), "passed": cert.passed, "verdict": cert.verdict, "checks": checks,
                "u": dc1_word(&cert.u), "v": dc1_word(&cert.v),
            });
            Ok(Outcome {
                artifacts: vec![json_artifact("certificate.json", &v), Artifact::new("certificate.csv", csv)],
                summary: vec![("verdict".into(), cert.verdict.clone())],
            })
        }
        Dc1Command::Factor { system, x, y, epsilon, s: word, near } => {
            let spec = load(inputs, system)?;
            let (x, y) = (point(&spec, x, "--x")?, point(&spec, y, "--y")?);
            let eps = num(epsilon, "--epsilon")?;
            let fm = factor_construct(&spec, &x, &y, &eps)?;
            let eb = entropy_lower_bound(&fm);
            let g = &fm.graph;
            let labels = |c: &[usize]| c.iter().map(|&v| g.label(v)).collect::<Vec<_>>();
            let mut v = json!({
                "depth": fm.depth,
                "a": fm.a,
                "epsilon": s(&fm.epsilon),
                "x_box": g.label(fm.x_box),
                "y_box": g.label(fm.y_box),
                "chains": (0..2u8).flat_map(|i| (0..2u8).map(move |j| (i, j)))
                    .map(|(i, j)| json!({"from": i, "to": j, "boxes": labels(fm.chain(i, j))}))
                    .collect::<Vec<_>>(),
                "entropy_lower_bound": eb.bound,
                "sft_entropy": eb.sft_entropy,
            });
            let mut summary = vec![("a".into(), fm.a.to_string()), ("entropy bound".into(), format!("{:.6}", eb.bound))];
            if let Some(w) = word {
                let smp = fm.sample(&binary(w, "--s")?)?;
                v["sample"] = json!({
                    "s": w,
                    "point": smp.point.to_string(),
                    "distances": smp.distances.iter().map(s).collect::<Vec<_>>(),
                    "in_cylinder": smp.in_cylinder,
                    "within_epsilon": smp.within_epsilon,
                });
            }
            if let Some(n) = near {
                let np = approximate_dc1_near(&spec, &x, &y, &eps, *n)?;
                v["near"] = json!({
                    "depth": np.depth, "z": np.z.to_string(), "w": np.w.to_string(),
                    "dz": s(&np.dz), "dw": s(&np.dw), "r": s(&np.r),
                    "passed": np.certificate.passed, "verdict": np.certificate.verdict,
                });
                summary.push(("near pair".into(), np.certificate.verdict.clone()));
            }
            Ok(Outcome { artifacts: vec![json_artifact("factor.json", &v)], summary })
        }
    }
}

fn dc1_word(w: &[u8]) -> String {
    w.iter().map(|b| char::from(b'0' + b)).collect()
}

fn read_pseudo_orbit(spec: &ExactSystem, text: &str) -> Result<Vec<ExactPoint>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let v: Value = serde_json::from_str(line).with_context(|| format!("line {}: not JSON", i + 1))?;
            let t = match v {
                Value::String(t) => t,
                Value::Number(n) => n.to_string(),
                other => bail!("line {}: expected a string or number, got {other}", i + 1),
            };
            point(spec, &t, &format!("line {}", i + 1))
        })
        .collect()
}

pub(crate) fn execute(cmd: &Command, inputs: &mut Inputs) -> Result<Outcome> {
    match cmd {
        Command::Discretize { grid, emit } => {
            let (spec, g) = execute_graph(grid, inputs)?;
            let summary = vec![("boxes".into(), g.len().to_string()), ("edges".into(), g.edge_count().to_string())];
            let art = match emit {
                GraphEmit::Json => json_artifact("graph.json", &graph_json(&spec, &g)),
                GraphEmit::Dot => Artifact::new("graph.dot", g.to_dot()),
            };
            Ok(Outcome { artifacts: vec![art], summary })
        }
        Command::Decompose { grid, emit } => {
            let (_, g) = execute_graph(grid, inputs)?;
            let dec = g.cyclic_decomposition();
            let summary = vec![
                ("components".into(), dec.components.len().to_string()),
                ("periods".into(), dec.components.iter().map(|c| c.period.to_string()).collect::<Vec<_>>().join(",")),
                ("chain recurrent".into(), g.chain_recurrent_set().len().to_string()),
            ];
            let mut artifacts = vec![json_artifact("decomposition.json", &decomposition_json(&g, &dec))];
            if *emit == GraphEmit::Dot {
                artifacts.insert(0, Artifact::new("graph.dot", g.to_dot()));
            }
            Ok(Outcome { artifacts, summary })
        }
        Command::Relate { system, x, y, schedule: sch, boxes } => {
            let spec = load(inputs, system)?;
            let (x, y) = (point(&spec, x, "--x")?, point(&spec, y, "--y")?);
            let verdict = relate_schedule(&spec, &x, &y, &schedule(&spec, sch, *boxes)?)?;
            let records: Vec<Value> = verdict
                .records
                .iter()
                .map(|r| {
                    let mut v = relation_json(&r.relation);
                    v["boxes"] = json!(r.boxes);
                    v["delta"] = json!(s(&r.delta));
                    v["u_box"] = json!(r.u_box);
                    v["v_box"] = json!(r.v_box);
                    v
                })
                .collect();
            let v = json!({"records": records, "related_for_all_tested": verdict.related_for_all_tested});
            Ok(Outcome {
                artifacts: vec![json_artifact("relation.json", &v)],
                summary: vec![("related".into(), verdict.related_for_all_tested.to_string())],
            })
        }
        Command::Pstar { grid, x, y, r } => {
            let (spec, g) = execute_graph(grid, inputs)?;
            let (x, y) = (point(&spec, x, "--x")?, point(&spec, y, "--y")?);
            let (u, v) = (spec.locate(g.cover(), &x)?, spec.locate(g.cover(), &y)?);
            let (out, summary) = match property_star(&g, u, v, &num(r, "--r")?)? {
                PStarOutcome::Found(w) => (
                    json!({"found": true, "u_box": u, "v_box": v, "witness": witness_json(&w)}),
                    ("witness".to_string(), format!("k = {}", w.k)),
                ),
                PStarOutcome::Absent(reason) => (
                    json!({"found": false, "u_box": u, "v_box": v, "reason": reason}),
                    ("witness".to_string(), format!("inconclusive: {reason}")),
                ),
            };
            Ok(Outcome { artifacts: vec![json_artifact("pstar.json", &out)], summary: vec![summary] })
        }
        Command::Dc1 { command } => dc1(command, inputs),
        Command::Track { system, po, horizon, y } => {
            let spec = load(inputs, system)?;
            let entries = read_pseudo_orbit(&spec, &inputs.read(po)?)?;
            let po = PseudoOrbit::new(&spec, entries, PseudoOrbitKind::Finite)?;
            let y = match (y, spec.subshift()) {
                (Some(t), _) => point(&spec, t, "--y")?,
                (None, Some(sft)) => Point::Symbolic(shadow_points(&po, sft.depth(), sft)?),
                (None, None) => bail!("--y is required for a {} system", spec.kind_name()),
            };
            let eps = tracking_average(&spec, &y, &po, *horizon)?;
            let mut csv = String::from("m,eps_m\n");
            for (m, e) in eps.iter().enumerate() {
                csv += &format!("{},{}\n", m + 1, f(e));
            }
            Ok(Outcome {
                artifacts: vec![Artifact::new("track.csv", csv)],
                summary: vec![
                    ("tracking point".into(), y.to_string()),
                    ("eps_n".into(), eps.last().map_or_else(String::new, f)),
                ],
            })
        }
        Command::Classify { system, x, y, horizon, low, high, extract, grid, relate } => {
            let spec = load(inputs, system)?;
            let (x, y) = (point(&spec, x, "--x")?, point(&spec, y, "--y")?);
            let t = Thresholds { low: num(low, "--low")?, high: num(high, "--high")? };
            let class = classify_pair(&spec, &x, &y, *horizon, &t)?;
            let labels: Vec<String> = class.labels.iter().map(|l| format!("{l:?}")).collect();
            let mut v = json!({
                "horizon": class.horizon,
                "thresholds": {"low": s(&t.low), "high": s(&t.high)},
                "min_distance": s(&class.min_distance),
                "tail_min": s(&class.tail_min),
                "tail_max": s(&class.tail_max),
                "labels": labels,
            });
            let mut summary = vec![("labels".into(), labels.join(", "))];
            if *extract {
                let mut opts = ExtractOptions::new(*horizon);
                opts.delta0 = t.high.clone();
                if let Some(gtext) = grid {
                    opts.grid = schedule(&spec, gtext, None)?.into_iter().next();
                }
                v["extraction"] = match extract_pstar_pair(&spec, &x, &y, &opts) {
                    Err(chaindyn::Error::Precondition(why)) => {
                        summary.push(("extraction".into(), format!("refused: {why}")));
                        json!({"refused": why})
                    }
                    Err(e) => return Err(e.into()),
                    Ok(ex) => {
                        let note = ex.inconclusive.clone().map_or_else(
                            || "witness found".to_string(),
                            |why| format!("inconclusive: {why}"),
                        );
                        summary.push(("extraction".into(), note));
                        json!({
                            "run": [ex.run_start, ex.run_len],
                            "z": ex.candidate.as_ref().map(|c| c.z.to_string()),
                            "w": ex.candidate.as_ref().map(|c| c.w.to_string()),
                            "exact": ex.candidate.as_ref().map(|c| c.exact),
                            "how": ex.candidate.as_ref().map(|c| c.how.clone()),
                            "boxes": ex.boxes.map(|(a, b)| json!([a, b])),
                            "relation": ex.relation.as_ref().map(relation_json),
                            "r": ex.r.as_ref().map(s),
                            "witness": ex.witness.as_ref().map(witness_json),
                            "inconclusive": ex.inconclusive,
                        })
                    }
                };
            }
            if let Some(sch) = relate {
                let out = liyorke_to_relation(&spec, &x, &y, *horizon, &t.high, &schedule(&spec, sch, None)?)?;
                summary.push((
                    "relation".into(),
                    match (&out.verdict, &out.inconclusive) {
                        (Some(vd), _) => format!("related for all tested: {}", vd.related_for_all_tested),
                        (None, Some(why)) => format!("inconclusive: {why}"),
                        _ => "inconclusive".into(),
                    },
                ));
                v["relation"] = json!({
                    "z": out.candidate.as_ref().map(|c| c.z.to_string()),
                    "w": out.candidate.as_ref().map(|c| c.w.to_string()),
                    "related_for_all_tested": out.verdict.as_ref().map(|vd| vd.related_for_all_tested),
                    "records": out.verdict.as_ref().map(|vd| vd.records.iter().map(|r| {
                        let mut j = relation_json(&r.relation);
                        j["boxes"] = json!(r.boxes);
                        j["delta"] = json!(s(&r.delta));
                        j
                    }).collect::<Vec<_>>()),
                    "inconclusive": out.inconclusive,
                });
            }
            Ok(Outcome { artifacts: vec![json_artifact("classify.json", &v)], summary })
        }
        Command::Thick { bits, horizon } => {
            let text = inputs.read(bits)?;
            let bits = text
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => bail!("unexpected character {other:?} in bit file"),
                })
                .collect::<Result<Vec<bool>>>()?;
            let h = horizon.unwrap_or(bits.len());
            let p = thick_profile(&bits, h)?;
            let v = json!({
                "horizon": p.horizon,
                "max_run": p.max_run,
                "max_run_start": p.max_run_start,
                "thick_to": p.thick_to(),
            });
            Ok(Outcome {
                artifacts: vec![json_artifact("thick.json", &v)],
                summary: vec![("longest run".into(), p.max_run.to_string())],
            })
        }
        Command::Replay { .. } => unreachable!("replay is handled by the driver"),
    }
}

