use crate::report::{digest, RunReport};
use crate::{Cli, Command, Proposers};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use stablepairs::analysis::{eq_deg_match, necessary_conditions};
use stablepairs::formats::*;
use stablepairs::realize::{
    nae3sat_graph, realize_grid, realize_lattice_subcubic, realize_product, realize_regular, regularize,
    witness_from_assignment, NaeFormula, NaeWitness,
};
use stablepairs::recognize::{recognize, Algorithm};
use stablepairs::rotation::{rotation_interaction_graphs, rotation_poset, validate_rotation_system};
use stablepairs::{families, BipartiteGraph, Error, Instance, Matching, Result, RotationSystem, Side};
use std::path::{Path, PathBuf};
use std::time::Instant;

pub fn name(c: &Command) -> &'static str {
    match c {
        Command::Recognize { .. } => "recognize",
        Command::Generate { .. } => "generate",
        Command::Analyze { .. } => "analyze",
        Command::Validate { .. } => "validate",
        Command::Gs { .. } => "gs",
        Command::Lattice { .. } => "lattice",
        Command::Bench { .. } => "bench",
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    rep: &'a mut RunReport,
    inputs: Vec<Vec<u8>>,
    written: Vec<String>,
}

impl Ctx<'_> {
    fn read(&mut self, path: &Path) -> Result<String> {
        let data = std::fs::read(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.push(data.clone());
        let refs: Vec<&[u8]> = self.inputs.iter().map(Vec::as_slice).collect();
        self.rep.input_digest = digest(&refs);
        String::from_utf8(data).map_err(|_| Error::Input(format!("{} is not UTF-8", path.display())))
    }

    fn graph(&mut self, path: &Path) -> Result<BipartiteGraph> {
        parse_graph(&self.read(path)?)
    }

    fn instance(&mut self, path: &Path) -> Result<Instance> {
        parse_instance(&self.read(path)?)
    }

    fn system(&mut self, path: &Path, g: &BipartiteGraph) -> Result<RotationSystem> {
        parse_rotation_system(&self.read(path)?, g)
    }

    fn write(&mut self, path: &Path, contents: &str) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| Error::Input(format!("cannot create {}: {e}", dir.display())))?;
        }
        std::fs::write(path, contents).map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
        self.written.push(path.display().to_string());
        self.rep.set("files", self.written.clone());
        Ok(())
    }

    fn write_pair(&mut self, dir: &Path, stem: &str, rs: &RotationSystem) -> Result<()> {
        self.write(&dir.join(format!("{stem}.bg")), &write_graph(rs.graph()))?;
        self.write(&dir.join(format!("{stem}.rsys")), &write_rotation_system(rs))
    }
}

pub fn run(cli: &Cli, rep: &mut RunReport) -> Result<()> {
    let mut cx = Ctx {
        cli,
        rep,
        inputs: Vec::new(),
        written: Vec::new(),
    };
    match &cli.command {
        Command::Recognize {
            graph,
            algorithm,
            witness,
        } => cmd_recognize(&mut cx, graph, (*algorithm).into(), witness.as_deref()),
        Command::Generate { family, params, out } => cmd_generate(&mut cx, family, params, out),
        Command::Analyze { input } => cmd_analyze(&mut cx, input),
        Command::Validate { graph, system } => cmd_validate(&mut cx, graph, system),
        Command::Gs { instance, proposers } => cmd_gs(&mut cx, instance, *proposers),
        Command::Lattice { instance } => cmd_lattice(&mut cx, instance),
        Command::Bench { graphs, algorithms } => {
            let algs: Vec<Algorithm> = algorithms.iter().map(|&a| a.into()).collect();
            cmd_bench(&mut cx, graphs, &algs)
        }
    }
}

fn alg_name(a: Algorithm) -> &'static str {
    match a {
        Algorithm::Oracle => "oracle",
        Algorithm::Path => "path",
        Algorithm::Dp => "dp",
    }
}

fn pairs_json(m: &Matching, left: &[String], right: &[String]) -> Value {
    m.pairs()
        .iter()
        .map(|&(l, r)| json!([left[l], right[r]]))
        .collect()
}

fn cmd_recognize(cx: &mut Ctx, path: &Path, alg: Algorithm, witness: Option<&Path>) -> Result<()> {
    let g = cx.graph(path)?;
    let r = recognize(&g, alg, &cx.cli.limits())?;
    cx.rep.states = Some(r.states);
    cx.rep.set("algorithm", alg_name(alg));
    cx.rep.set("vertices", g.n());
    cx.rep.set("edges", g.m());
    cx.rep.set("realizable", r.realizable);
    cx.rep.line(format!(
        "{}: {} ({} algorithm, {} states)",
        path.display(),
        if r.realizable { "realizable" } else { "not realizable" },
        alg_name(alg),
        r.states
    ));
    if !r.realizable {
        let failures = necessary_conditions(&g).failures();
        if !failures.is_empty() {
            cx.rep.line(format!("failed necessary conditions: {}", failures.join(", ")));
        }
        cx.rep.set("failed_conditions", failures);
    }
    if let Some(out) = witness {
        match &r.witness {
            Some(w) => {
                cx.write(out, &write_rotation_system(w))?;
                cx.rep.line(format!("witness written to {}", out.display()));
            }
            None if r.realizable => cx.rep.line("this algorithm does not produce witnesses"),
            None => {}
        }
    }
    cx.rep.exit_code = if r.realizable { 0 } else { 1 };
    Ok(())
}

fn param<T: std::str::FromStr>(params: &[String], i: usize, what: &str) -> Result<T> {
    params
        .get(i)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Input(format!("expected {what} as parameter {}", i + 1)))
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into())
}

fn arity(family: &str, params: &[String], n: usize) -> Result<()> {
    if params.len() != n {
        return Err(Error::Input(format!("{family} takes {n} parameters, got {}", params.len())));
    }
    Ok(())
}

fn cmd_generate(cx: &mut Ctx, family: &str, params: &[String], out: &Path) -> Result<()> {
    cx.rep.set("family", family);
    match family {
        "grid" => {
            arity(family, params, 2)?;
            let (a, b): (usize, usize) = (param(params, 0, "rows")?, param(params, 1, "columns")?);
            if a == 0 || b == 0 {
                return Err(Error::Input("grid sides must be positive".into()));
            }
            let stem = format!("grid_{a}x{b}");
            match realize_grid(a, b)? {
                Some(rs) => cx.write_pair(out, &stem, &rs)?,
                None => cx.write(&out.join(format!("{stem}.bg")), &write_graph(&families::grid(a, b)))?,
            }
            let yes = cx.written.len() == 2;
            cx.rep.set("realizable", yes);
            cx.rep.line(format!("{a}x{b} grid: {}", if yes { "realizable, witness written" } else { "not realizable" }));
        }
        "product" => {
            arity(family, params, 4)?;
            let p: Vec<PathBuf> = params.iter().map(PathBuf::from).collect();
            let g = cx.graph(&p[0])?;
            let rg = cx.system(&p[1], &g)?;
            let h = cx.graph(&p[2])?;
            let rh = cx.system(&p[3], &h)?;
            let rs = realize_product(&rg, &rh)?;
            cx.write_pair(out, &format!("{}_x_{}", stem(&p[0]), stem(&p[2])), &rs)?;
            cx.rep.line(format!("product with {} edges and {} rotations", rs.graph().m(), rs.rotations().len()));
        }
        "lattice" => {
            arity(family, params, 1)?;
            let path = PathBuf::from(&params[0]);
            let p = parse_poset(&cx.read(&path)?)?;
            let (_, rs) = realize_lattice_subcubic(&p)?;
            cx.write_pair(out, &stem(&path), &rs)?;
            cx.rep.line(format!(
                "subcubic graph with {} vertices and {} edges",
                rs.graph().n(),
                rs.graph().m()
            ));
        }
        "regular" => {
            arity(family, params, 1)?;
            let path = PathBuf::from(&params[0]);
            let g = cx.graph(&path)?;
            let inst = realize_regular(&g)?;
            cx.write(&out.join(format!("{}.smi", stem(&path))), &write_instance(&inst))?;
            cx.rep.line("instance whose stable pairs are the edges written");
        }
        "regularize" => {
            arity(family, params, 1)?;
            let path = PathBuf::from(&params[0]);
            let g = cx.graph(&path)?;
            let (h, _) = regularize(&g);
            cx.write(&out.join(format!("{}_regular.bg", stem(&path))), &write_graph(&h))?;
            cx.rep.line(format!("regular supergraph with {} vertices and {} edges", h.n(), h.m()));
        }
        "nae3sat" => gen_nae(cx, params, out)?,
        "all-small" => {
            arity(family, params, 1)?;
            let m: usize = param(params, 0, "maximum edge count")?;
            let graphs = families::all_small(m);
            let mut per = vec![0usize; m + 1];
            for g in &graphs {
                let k = per[g.m()];
                per[g.m()] += 1;
                cx.write(&out.join(format!("m{:02}_{k:05}.bg", g.m())), &write_graph(g))?;
            }
            cx.rep.set("graphs", graphs.len());
            cx.rep.set("per_edge_count", per[1..].to_vec());
            cx.rep.line(format!("{} connected bipartite graphs with at most {m} edges", graphs.len()));
        }
        other => return Err(Error::Input(format!("unknown family `{other}`"))),
    }
    Ok(())
}

fn gen_nae(cx: &mut Ctx, params: &[String], out: &Path) -> Result<()> {
    let (f, planted, name) = match params.len() {
        1 => {
            let path = PathBuf::from(&params[0]);
            (parse_nae(&cx.read(&path)?)?, None, stem(&path))
        }
        2 => {
            let (v, c): (usize, usize) = (param(params, 0, "variables")?, param(params, 1, "clauses")?);
            if v == 0 {
                return Err(Error::Input("at least one variable is needed".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cx.cli.seed);
            let (f, a) = NaeFormula::random_planted(v, c, &mut rng);
            let name = format!("nae_{v}_{c}_s{}", cx.cli.seed);
            cx.write(&out.join(format!("{name}.nae")), &write_nae(&f))?;
            (f, Some(a), name)
        }
        n => return Err(Error::Input(format!("nae3sat takes a formula file or <vars> <clauses>, got {n} parameters"))),
    };
    let (g, meta) = nae3sat_graph(&f)?;
    cx.write(&out.join(format!("{name}.bg")), &write_graph(&g))?;
    cx.rep.set("vertices", g.n());
    cx.rep.set("edges", g.m());
    cx.rep.line(format!("gadget graph with {} vertices and {} edges", g.n(), g.m()));
    if let Some(a) = planted {
        if let NaeWitness::System(rs) = witness_from_assignment(&g, &meta, &a)? {
            cx.write(&out.join(format!("{name}.rsys")), &write_rotation_system(&rs))?;
            cx.rep.line("witness for the planted assignment written");
        }
    }
    Ok(())
}

fn cmd_analyze(cx: &mut Ctx, path: &Path) -> Result<()> {
    if path.extension().is_some_and(|e| e == "smi") {
        analyze_instance(cx, path)
    } else {
        analyze_graph(cx, path)
    }
}

fn analyze_instance(cx: &mut Ctx, path: &Path) -> Result<()> {
    let inst = cx.instance(path)?;
    let ms = inst.enumerate_stable_matchings(cx.cli.limits().max_matchings)?;
    let rs = rotation_poset(&inst);
    let ig = rotation_interaction_graphs(&rs, false)?;
    let sp = inst.stable_pairs_graph();
    let (s, r) = (inst.student_ids(), inst.residency_ids());
    cx.rep.set("kind", "instance");
    cx.rep.set("stable_matchings", ms.len());
    cx.rep.set("rotations", rs.rotations().len());
    cx.rep.set("stable_pairs", sp.m());
    cx.rep.set("student_optimal", pairs_json(&inst.gale_shapley(Side::Students), s, r));
    cx.rep.set("residency_optimal", pairs_json(&inst.gale_shapley(Side::Residencies), s, r));
    cx.rep.set("shared_edge_pairs", ig.shared_edge.len());
    cx.rep.set("comparable_pairs", ig.comparability.len());
    cx.rep.line(format!("{} students, {} residencies", s.len(), r.len()));
    cx.rep.line(format!("{} stable matchings, {} rotations", ms.len(), rs.rotations().len()));
    cx.rep.line(format!("{} stably matchable pairs", sp.m()));
    Ok(())
}

fn analyze_graph(cx: &mut Ctx, path: &Path) -> Result<()> {
    let g = cx.graph(path)?;
    cx.rep.set("kind", "graph");
    cx.rep.set("vertices", g.n());
    cx.rep.set("edges", g.m());
    cx.rep.line(format!("{} vertices, {} edges", g.n(), g.m()));
    let nc = necessary_conditions(&g);
    let failures = nc.failures();
    cx.rep.set("failed_conditions", failures.clone());
    let arts: Vec<&str> = nc.articulation_vertices.iter().map(|&v| g.name(v)).collect();
    cx.rep.set("articulation_vertices", arts.clone());
    if failures.is_empty() {
        cx.rep.line("necessary conditions hold");
    } else {
        cx.rep.line(format!("failed necessary conditions: {}", failures.join(", ")));
        if !arts.is_empty() {
            cx.rep.line(format!("articulation vertices: {}", arts.join(" ")));
        }
    }
    let degrees: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    let d = degrees.first().copied().unwrap_or(0);
    let regular = d > 0 && degrees.iter().all(|&x| x == d);
    cx.rep.set("regular", regular);
    if regular {
        let ok = realize_regular(&g).is_ok();
        cx.rep.set("realizable", ok);
        cx.rep.line(format!("{d}-regular; realizable via the regular construction"));
    }
    if g.max_degree() <= 3 {
        let r = eq_deg_match(&g)?;
        cx.rep.set("eq_deg_necessary", r.necessary_holds);
        cx.rep.set("eq_deg_sufficient", r.sufficient_holds);
        cx.rep.line(format!(
            "subcubic; degree classes: necessary {}, sufficient {}",
            if r.necessary_holds { "holds" } else { "fails" },
            if r.sufficient_holds { "holds" } else { "fails" }
        ));
        if r.witness.is_some() {
            cx.rep.set("realizable", true);
        } else if !r.necessary_holds {
            cx.rep.set("realizable", false);
        }
    }
    if !failures.is_empty() {
        cx.rep.set("realizable", false);
    }
    Ok(())
}

fn cmd_validate(cx: &mut Ctx, gpath: &Path, spath: &Path) -> Result<()> {
    let g = cx.graph(gpath)?;
    let rs = cx.system(spath, &g)?;
    let report = validate_rotation_system(&rs);
    let msgs: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
    cx.rep.set("valid", msgs.is_empty());
    cx.rep.set("violations", msgs.clone());
    if msgs.is_empty() {
        cx.rep.line(format!("valid rotation system with {} rotations", rs.rotations().len()));
    } else {
        cx.rep.line(format!("{} violations", msgs.len()));
        for m in &msgs {
            cx.rep.line(format!("  {m}"));
        }
    }
    cx.rep.exit_code = if msgs.is_empty() { 0 } else { 1 };
    Ok(())
}

fn cmd_gs(cx: &mut Ctx, path: &Path, proposers: Proposers) -> Result<()> {
    let inst = cx.instance(path)?;
    let side = match proposers {
        Proposers::Students => Side::Students,
        Proposers::Residencies => Side::Residencies,
    };
    let m = inst.gale_shapley(side);
    let (s, r) = (inst.student_ids(), inst.residency_ids());
    cx.rep.set("matching", pairs_json(&m, s, r));
    cx.rep.text.extend(write_matching(&m, s, r).lines().map(str::to_string));
    Ok(())
}

fn cmd_lattice(cx: &mut Ctx, path: &Path) -> Result<()> {
    let inst = cx.instance(path)?;
    let ms = inst.enumerate_stable_matchings(cx.cli.limits().max_matchings)?;
    let rs = rotation_poset(&inst);
    let (s, r) = (inst.student_ids(), inst.residency_ids());
    cx.rep.set("stable_matchings", ms.iter().map(|m| pairs_json(m, s, r)).collect::<Vec<_>>());
    cx.rep.set("rotations", rs.rotations().len());
    cx.rep.set("rotation_covers", rs.order().hasse().iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>());
    cx.rep.line(format!("{} stable matchings", ms.len()));
    for (i, m) in ms.iter().enumerate() {
        let pairs: Vec<String> = m.pairs().iter().map(|&(a, b)| format!("{}-{}", s[a], r[b])).collect();
        cx.rep.line(format!("M{i}: {}", pairs.join(" ")));
    }
    cx.rep.line("rotation poset:");
    cx.rep.text.extend(write_rotation_system(&rs).lines().map(|l| format!("  {l}")));
    Ok(())
}

fn cmd_bench(cx: &mut Ctx, graphs: &[PathBuf], algs: &[Algorithm]) -> Result<()> {
    let limits = cx.cli.limits();
    let mut rows = Vec::new();
    let mut total = 0u64;
    cx.rep.line(format!("{:<32} {:>5} {:>7} {:>13} {:>12} {:>10}", "graph", "m", "alg", "decision", "states", "ms"));
    for path in graphs {
        let g = cx.graph(path)?;
        for &alg in algs {
            let t = Instant::now();
            let res = recognize(&g, alg, &limits);
            let ms = t.elapsed().as_secs_f64() * 1e3;
            let (decision, states) = match &res {
                Ok(r) => (if r.realizable { "realizable" } else { "unrealizable" }.to_string(), r.states),
                Err(Error::Resource { .. }) => ("resource-limit".to_string(), 0),
                Err(e) => (format!("error: {e}"), 0),
            };
            total += states;
            let name = path.display().to_string();
            cx.rep.line(format!(
                "{:<32} {:>5} {:>7} {:>13} {:>12} {:>10.2}",
                name,
                g.m(),
                alg_name(alg),
                decision,
                states,
                ms
            ));
            rows.push(json!({
                "graph": name,
                "m": g.m(),
                "algorithm": alg_name(alg),
                "decision": decision,
                "states": states,
                "ms": ms,
            }));
        }
    }
    cx.rep.states = Some(total);
    cx.rep.set("rows", rows);
    Ok(())
}
