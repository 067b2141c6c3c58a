use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use subdirekt::oracle::{self, IsoVerdict, NonIsoWitness, Preservation};
use subdirekt::separating::{check_s1, check_s2, format_set, parse_set};
use subdirekt::suites::{self, SUITES};
use subdirekt::witness::{self, build_sm, triple_criterion, FamilyMember};
use subdirekt::{
    Ambient, FiniteSemigroup, GeneratedSub, GeneratorMap, GradedElement, SeparatingSet,
};

use crate::{
    Cli, Command, Family, GensCommand, OracleCommand, Outcome, SepsetCommand, SmCommand, TableArg,
};

pub const MAX_CELLS_VAR: &str = "SUBDIREKT_MAX_CELLS";

struct Out {
    json: bool,
}

impl Out {
    /// Prints `record` in JSON mode, otherwise the text rendering.
    fn emit(&self, record: Value, text: impl FnOnce() -> String) {
        if self.json {
            println!("{record}");
        } else {
            let t = text();
            if !t.is_empty() {
                println!("{t}");
            }
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let out = Out { json: cli.json };
    match &cli.command {
        Command::Classify { table } => classify(&out, table),
        Command::Sepset(SepsetCommand::Check { set }) => sepset_check(&out, set),
        Command::Sepset(SepsetCommand::Extend { set, to }) => sepset_extend(&out, set, *to),
        Command::Sm(SmCommand::Iso { m, n, perm, degree }) => sm_iso(&out, m, n, perm, *degree),
        Command::Witness {
            family,
            table,
            m,
            bound,
        } => family_witness(&out, *family, table, m, *bound),
        Command::Gens(GensCommand::Extract {
            file,
            table,
            out: dest,
        }) => extract(&out, file, table, dest.as_deref()),
        Command::Closure { file, table, bound } => closure(&out, file, table, *bound),
        Command::Oracle(OracleCommand::Relations {
            file,
            table,
            degree,
        }) => relations(&out, file, table, *degree),
        Command::Oracle(OracleCommand::Iso {
            first,
            second,
            table,
            degree,
        }) => oracle_iso(&out, first, second, table, *degree),
        Command::Oracle(OracleCommand::Census { order, out: dir }) => {
            census(&out, *order, dir.as_deref())
        }
        Command::Verify { suite } => verify(&out, suite),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_table(path: &Path) -> Result<Arc<FiniteSemigroup>> {
    let s: FiniteSemigroup = read(path)?
        .parse()
        .with_context(|| format!("in {}", path.display()))?;
    Ok(Arc::new(s))
}

fn load_sub(path: &Path, table: Option<&Path>) -> Result<GeneratedSub> {
    let s = table.map(load_table).transpose()?;
    GeneratedSub::parse(&read(path)?, s).with_context(|| format!("in {}", path.display()))
}

fn max_cells() -> Result<Option<usize>> {
    match std::env::var(MAX_CELLS_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| anyhow!("{MAX_CELLS_VAR} must be a positive integer, got {v:?}")),
        Err(_) => Ok(None),
    }
}

fn element_json(amb: &Ambient, e: &GradedElement) -> Value {
    json!({ "grade": e.grade, "coordinates": e.coordinates(), "text": amb.format(e) })
}

fn elements_text(amb: &Ambient, es: &[GradedElement]) -> String {
    es.iter()
        .map(|e| amb.format(e))
        .collect::<Vec<_>>()
        .join(" ")
}

fn classify(out: &Out, path: &Path) -> Result<Outcome> {
    let s = load_table(path)?;
    let non_group = s.non_group_element();
    let (verdict, reason) = match non_group {
        None => ("countable", "S is a union of groups".to_string()),
        Some(x) => (
            "uncountable",
            format!("H-class of {} contains no idempotent", s.label(x)),
        ),
    };
    out.emit(
        json!({
            "kind": "classification", "criterion": "thmD", "objects": "subsemigroups of N x S",
            "verdict": verdict, "union_of_groups": non_group.is_none(),
            "witness": non_group.map(|x| s.label(x)), "reason": reason,
        }),
        || format!("thmD  subsemigroups of N x S: {verdict} ({reason})"),
    );
    let violators = s.relative_identity_violators();
    let (verdict, reason) = match violators.first() {
        None => (
            "countable",
            "every element has a relative identity".to_string(),
        ),
        Some(&x) => (
            "uncountable",
            format!("no t with ts = s or st = s for s = {}", s.label(x)),
        ),
    };
    out.emit(
        json!({
            "kind": "classification", "criterion": "thmE", "objects": "subdirect products of N and S",
            "verdict": verdict, "relative_identities": violators.is_empty(),
            "witness": violators.first().map(|&x| s.label(x)), "reason": reason,
        }),
        || format!("thmE  subdirect products of N and S: {verdict} ({reason})"),
    );
    Ok(Outcome::Success)
}

fn sepset_check(out: &Out, text: &str) -> Result<Outcome> {
    let set = parse_set(text)?;
    let s1 = check_s1(&set)?;
    let s2 = check_s2(&set)?;
    out.emit(
        json!({
            "kind": "sepset_check", "set": set, "s1": s1.holds(), "s2": s2.holds(),
            "s1_counterexample": s1.counterexample(), "s2_counterexample": s2.counterexample(),
            "strongly_separating": s1.holds() && s2.holds(),
        }),
        || {
            let mut t = format!("set {}\n", format_set(&set));
            t += &match s1.counterexample() {
                None => "(S1) holds".to_string(),
                Some((m, n)) => format!("(S1) fails: triples {m:?} and {n:?} satisfy the identity"),
            };
            t += "\n";
            t += &match s2.counterexample() {
                None => "(S2) holds".to_string(),
                Some((p, q)) => format!("(S2) fails: pairs {p:?} and {q:?} have equal differences"),
            };
            t
        },
    );
    Ok(if s1.holds() && s2.holds() {
        Outcome::Success
    } else {
        Outcome::Failure
    })
}

fn sepset_extend(out: &Out, text: &str, to: Option<usize>) -> Result<Outcome> {
    let set = SeparatingSet::strongly_separating(&parse_set(text)?)?;
    let target = to.unwrap_or(set.len() + 1);
    if target < set.len() {
        bail!(
            "--to {target} is smaller than the set ({} elements)",
            set.len()
        );
    }
    let mut cur = set;
    out.emit(
        json!({ "kind": "sepset", "size": cur.len(), "elements": cur.elements() }),
        || format!("{cur}"),
    );
    while cur.len() < target {
        cur = cur.extend()?;
        out.emit(
            json!({ "kind": "sepset", "size": cur.len(), "elements": cur.elements() }),
            || format!("{cur}"),
        );
    }
    Ok(Outcome::Success)
}

fn parse_triple(text: &str, name: &str) -> Result<[u64; 3]> {
    let v = parse_set(text)?;
    <[u64; 3]>::try_from(v.as_slice())
        .map_err(|_| anyhow!("{name} must have exactly 3 distinct elements"))
}

fn parse_perm(text: &str) -> Result<Vec<Vec<usize>>> {
    if text == "all" {
        return Ok(vec![
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0],
        ]);
    }
    let p = text
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| anyhow!("bad permutation {text:?}"))?;
    let mut sorted = p.clone();
    sorted.sort_unstable();
    if sorted != [0, 1, 2] {
        bail!("permutation must rearrange 0,1,2, got {text:?}");
    }
    Ok(vec![p])
}

fn sm_iso(out: &Out, m: &str, n: &str, perm: &str, degree: Option<u64>) -> Result<Outcome> {
    let (m, n) = (parse_triple(m, "--M")?, parse_triple(n, "--N")?);
    let degree = degree.unwrap_or(2 * m.iter().sum::<u64>());
    let (sm, sn) = (build_sm(&m)?, build_sm(&n)?);
    let mut outcome = Outcome::Success;
    for p in parse_perm(perm)? {
        let nt = [n[p[0]], n[p[1]], n[p[2]]];
        let criterion = triple_criterion(m, nt)?.holds;
        // generator lists are sorted; send (1, m[i]) to (1, nt[i])
        let pos = |sub: &GeneratedSub, x: u64| {
            sub.generators()
                .iter()
                .position(|g| *g == GradedElement::pair(1, x))
        };
        let mut image = vec![0; 3];
        for i in 0..3 {
            image[pos(&sm, m[i]).expect("generator")] = pos(&sn, nt[i]).expect("generator");
        }
        let map = GeneratorMap::new(sm.clone(), sn.clone(), image)?;
        let verdict = oracle::map_preserves(&map, degree)?;
        if criterion != verdict.is_preserved() {
            outcome = Outcome::Failure;
        }
        let violation = match &verdict {
            Preservation::Violated(v) => Some(v),
            Preservation::Preserved => None,
        };
        out.emit(
            json!({
                "kind": "correspondence", "m": m, "n": nt, "criterion": criterion,
                "degree": degree, "preserved": verdict.is_preserved(), "violation": violation,
            }),
            || {
                let mut t = format!(
                    "{m:?} -> {nt:?}: criterion {}, relations up to degree {degree} {}",
                    if criterion { "holds" } else { "fails" },
                    if verdict.is_preserved() {
                        "preserved"
                    } else {
                        "violated"
                    }
                );
                if let Some(v) = violation {
                    t += &format!(
                        "\n    {:?} relation {:?} = {:?} (value {}) maps to {} and {}",
                        v.direction,
                        v.relation.lhs,
                        v.relation.rhs,
                        v.value,
                        v.images.0,
                        v.images.1
                    );
                }
                t
            },
        );
    }
    Ok(outcome)
}

fn family_witness(
    out: &Out,
    family: Family,
    table: &Path,
    m: &str,
    bound: Option<u64>,
) -> Result<Outcome> {
    let s = load_table(table)?;
    let params = parse_set(m)?;
    let w: FamilyMember = match family {
        Family::NonGroup => witness::non_group_family(s, &params)?,
        Family::Subdirect => witness::subdirect_family(s, &params)?,
    };
    let amb = w.sub.ambient();
    let d = bound.unwrap_or_else(|| w.indecomposability_bound());
    let trunc = w.sub.truncated_closure_limited(d, max_cells()?)?;
    let ind = trunc.indecomposables();
    let mut gens = w.sub.generators().to_vec();
    gens.sort();
    let all_indecomposable = ind == gens;
    let relations = w.linkage_relations();
    let relations_hold = relations.iter().all(|(_, l, r)| l == r);
    let profile = witness::power_linkage_profile(&w.sub, d, 4 * d)?;
    let sg = amb.semigroup().expect("family ambients are N x S");
    out.emit(
        json!({
            "kind": "witness", "family": match family { Family::NonGroup => "thmD", Family::Subdirect => "thmE" },
            "parameters": w.parameters, "element": sg.label(w.element), "idempotent_power": w.idempotent_power,
            "generators": w.sub.generators().iter().map(|g| element_json(amb, g)).collect::<Vec<_>>(),
            "subdirect": w.sub.is_subdirect(), "bound": d, "all_indecomposable": all_indecomposable,
            "relations": relations.iter().map(|(m, l, r)| json!({"m": m, "lhs": amb.format(l), "rhs": amb.format(r), "holds": l == r})).collect::<Vec<_>>(),
            "power_linkage_profile": profile,
        }),
        || {
            let mut t = format!(
                "element {} with {}^{} idempotent\ngenerators {}\nsubdirect {}\nall generators indecomposable at D = {d}: {all_indecomposable}",
                sg.label(w.element),
                sg.label(w.element),
                w.idempotent_power,
                elements_text(amb, w.sub.generators()),
                w.sub.is_subdirect()
            );
            for (m, l, r) in &relations {
                t += &format!("\nm = {m}: (1,x^k)^(mk) = {} and (m,x)^k = {}", amb.format(l), amb.format(r));
            }
            t
        },
    );
    Ok(if all_indecomposable && relations_hold {
        Outcome::Success
    } else {
        Outcome::Failure
    })
}

fn extract(out: &Out, file: &Path, table: &Path, dest: Option<&Path>) -> Result<Outcome> {
    let sub = load_sub(file, Some(table))?;
    let x = sub.extract_generators()?;
    let bound = x.check_bound();
    let regenerated = sub.regenerates(&x.generators, bound)?;
    let amb = sub.ambient();
    if let Some(dest) = dest {
        let text = sub.with_generators(x.generators.clone())?.to_text();
        fs::write(dest, text).with_context(|| format!("cannot write {}", dest.display()))?;
    }
    out.emit(
        json!({
            "kind": "extraction",
            "generators": x.generators.iter().map(|g| element_json(amb, g)).collect::<Vec<_>>(),
            "period": x.layers.period, "threshold": x.layers.threshold,
            "check_bound": bound, "regenerated": regenerated,
        }),
        || {
            format!(
                "X = {{{}}}\nperiod m = {}, threshold n0 = {}\nregenerates up to grade {bound}: {regenerated}",
                elements_text(amb, &x.generators),
                x.layers.period,
                x.layers.threshold
            )
        },
    );
    Ok(if regenerated {
        Outcome::Success
    } else {
        Outcome::Failure
    })
}

fn closure(out: &Out, file: &Path, table: &TableArg, bound: Option<u64>) -> Result<Outcome> {
    let sub = load_sub(file, table.table.as_deref())?;
    let d = bound.unwrap_or(4 * sub.max_grade());
    let t = sub.truncated_closure_limited(d, max_cells()?)?;
    let amb = sub.ambient();
    for (i, e) in t.elements().iter().enumerate() {
        let ind = !t.is_decomposable(i);
        let mut rec = element_json(amb, e);
        rec["kind"] = json!("element");
        rec["indecomposable"] = json!(ind);
        out.emit(rec, || {
            format!("{}{}", amb.format(e), if ind { " *" } else { "" })
        });
    }
    let ind = t.indecomposables();
    out.emit(
        json!({ "kind": "closure", "bound": d, "size": t.len(), "indecomposables": ind.len() }),
        || {
            format!(
                "{} elements up to grade {d}, {} indecomposable (*)",
                t.len(),
                ind.len()
            )
        },
    );
    Ok(Outcome::Success)
}

fn relations(out: &Out, file: &Path, table: &TableArg, degree: Option<u64>) -> Result<Outcome> {
    let sub = load_sub(file, table.table.as_deref())?;
    let degree = degree.unwrap_or(8);
    let t = oracle::relations_up_to(&sub, degree)?;
    let amb = sub.ambient();
    for g in &t.groups {
        out.emit(
            json!({ "kind": "relation_group", "value": element_json(amb, &g.value), "expressions": g.expressions }),
            || {
                let exprs: Vec<String> = g.expressions.iter().map(|e| format!("{e:?}")).collect();
                format!("{}: {}", amb.format(&g.value), exprs.join(" = "))
            },
        );
    }
    out.emit(
        json!({ "kind": "relations", "degree": degree, "count": t.len() }),
        || format!("{} relations up to degree {degree}", t.len()),
    );
    Ok(Outcome::Success)
}

fn default_iso_degree(subs: &[&GeneratedSub]) -> u64 {
    if subs.iter().any(|s| s.ambient().semigroup().is_some()) {
        return 6;
    }
    subs.iter()
        .flat_map(|s| s.generators())
        .map(|g| g.coordinates().into_iter().max().unwrap_or(1))
        .sum()
}

fn oracle_iso(
    out: &Out,
    a: &Path,
    b: &Path,
    table: &TableArg,
    degree: Option<u64>,
) -> Result<Outcome> {
    let (sa, sb) = (
        load_sub(a, table.table.as_deref())?,
        load_sub(b, table.table.as_deref())?,
    );
    let degree = degree.unwrap_or_else(|| default_iso_degree(&[&sa, &sb]));
    let verdict = oracle::iso_semidecision(&sa, &sb, degree)?;
    out.emit(json!({ "kind": "iso", "degree": degree, "verdict": verdict }), || match &verdict {
        IsoVerdict::ConsistentUpTo { degree, bijection } => format!(
            "consistent up to degree {degree} via bijection {bijection:?} (not a proof of isomorphism)"
        ),
        IsoVerdict::NonIsomorphic(NonIsoWitness::IndecomposableCount { source, target }) => {
            format!("non-isomorphic: {source} vs {target} indecomposables")
        }
        IsoVerdict::NonIsomorphic(NonIsoWitness::AllBijectionsViolated(all)) => {
            let mut t = format!("non-isomorphic: all {} bijections violate a relation", all.len());
            for (p, v) in all {
                t += &format!("\n    {p:?}: {:?} {:?} = {:?}", v.direction, v.relation.lhs, v.relation.rhs);
            }
            t
        }
    });
    Ok(Outcome::Success)
}

fn census(out: &Out, n: usize, dir: Option<&Path>) -> Result<Outcome> {
    let all = oracle::census(n)?;
    if let Some(dir) = dir {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    for (i, s) in all.iter().enumerate() {
        let file = format!("order{n}_{:03}.tbl", i + 1);
        if let Some(dir) = dir {
            let path = dir.join(&file);
            fs::write(&path, s.to_text())
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
        let flags = (
            s.is_union_of_groups(),
            s.has_relative_identities(),
            s.is_monoid(),
        );
        out.emit(
            json!({
                "kind": "semigroup", "index": i + 1, "file": file, "table": s.rows().collect::<Vec<_>>(),
                "union_of_groups": flags.0, "relative_identities": flags.1, "monoid": flags.2,
            }),
            || {
                let rows: Vec<String> =
                    s.rows().map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("")).collect();
                format!(
                    "{:>3} {}  union-of-groups={} relative-identities={} monoid={}",
                    i + 1,
                    rows.join("/"),
                    flags.0,
                    flags.1,
                    flags.2
                )
            },
        );
    }
    out.emit(
        json!({ "kind": "census", "order": n, "count": all.len() }),
        || format!("{} semigroups of order {n} up to isomorphism", all.len()),
    );
    Ok(Outcome::Success)
}

fn verify(out: &Out, suite: &str) -> Result<Outcome> {
    if suite == "list" {
        for s in SUITES {
            out.emit(json!({ "kind": "suite", "name": s }), || s.to_string());
        }
        return Ok(Outcome::Success);
    }
    let report = suites::run(suite)?;
    for c in &report.checks {
        out.emit(
            json!({ "kind": "check", "suite": suite, "name": c.name, "passed": c.passed, "detail": c.detail }),
            || {
                let mark = if c.passed { "ok  " } else { "FAIL" };
                if c.detail.is_empty() {
                    format!("{mark} {}", c.name)
                } else {
                    format!("{mark} {}: {}", c.name, c.detail)
                }
            },
        );
    }
    let passed = report.passed();
    out.emit(
        json!({ "kind": "suite_result", "suite": suite, "passed": passed }),
        || format!("{suite}: {}", if passed { "pass" } else { "fail" }),
    );
    Ok(if passed {
        Outcome::Success
    } else {
        Outcome::Failure
    })
}
