// SPDX-License-Identifier: MIT
// One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.
mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;

use common::*;
use mpdagkit::adjustment::{AdjustmentQuery, ListOptions};
use mpdagkit::extension::enumerate_dags;
use mpdagkit::fixtures::*;
use mpdagkit::ida::possible_parent_sets;
use mpdagkit::meek::{
    construct_max_pdag, construct_max_pdag_with, cpdag_of, BackgroundKnowledge, ClosureOrder, MeekRule,
};
use mpdagkit::paths::{b_possible_ancestors, b_possible_descendants, oracle_reach, Direction};
use mpdagkit::regression::ols;
use mpdagkit::sem::{
    add_background_fraction, choose_xy, random_dag, run_simulation, sample_data, true_total_effect, SimConfig, SimRow,
};
use mpdagkit::{Execution, NodeSet, PdagGraph};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

type Outcome = (bool, String);

fn names(g: &PdagGraph, s: &[&str]) -> NodeSet {
    g.node_set(s).unwrap()
}

fn class_enumeration() -> Outcome {
    let cp = enumerate_dags(&graph(FIG1_CPDAG), None);
    let mp = enumerate_dags(&graph(FIG1_MPDAG), None);
    let key = |d: &PdagGraph| d.to_text();
    let got: BTreeSet<String> = mp.dags.iter().map(key).collect();
    let want: BTreeSet<String> = (0..5).map(|i| key(&fig1_dag(i))).collect();
    let all: BTreeSet<String> = cp.dags.iter().map(key).collect();
    let every: BTreeSet<String> = (0..10).map(|i| key(&fig1_dag(i))).collect();
    let ok = cp.len() == 10 && mp.len() == 5 && got == want && all == every;
    (ok, format!("|[CPDAG]|={} |[MPDAG]|={} first-five match={}", cp.len(), mp.len(), got == want))
}

fn reach_fixtures() -> Outcome {
    let cp = graph(FIG1_CPDAG);
    let mp = graph(FIG1_MPDAG);
    let de = |g: &PdagGraph, v: &str| g.format_set(&b_possible_descendants(g, &names(g, &[v])).unwrap().nodes);
    let mut ok = de(&cp, "B") == "{A,B,C,D}" && de(&mp, "B") == "{A,B,C}";
    for v in ["A", "C", "D"] {
        ok &= de(&cp, v) == de(&mp, v);
    }
    (ok, format!("B: {} vs {}", de(&cp, "B"), de(&mp, "B")))
}

fn adjustment_fixtures() -> Outcome {
    let c = graph(FIG3_CPDAG);
    let g1 = graph(FIG3_G1);
    let g2 = graph(FIG3_G2);
    let xy = |g: &PdagGraph| (names(g, &["X"]), names(g, &["Y"]));
    let (x, y) = xy(&c);
    let cq = AdjustmentQuery::new(&c, &x, &y).unwrap();
    let (x, y) = xy(&g1);
    let mut q1 = AdjustmentQuery::new(&g1, &x, &y).unwrap();
    let forb = g1.format_set(&q1.forbidden().unwrap().nodes);
    let opts = ListOptions::default();
    let sets: Vec<String> = q1.list(&opts).unwrap().iter().map(|s| g1.format_set(s)).collect();
    let (x, y) = xy(&g2);
    let mut q2 = AdjustmentQuery::new(&g2, &x, &y).unwrap();
    let none2 = q2.list(&opts).unwrap().is_empty() && q2.adjust_set().unwrap().is_none();
    let ok = !cq.amenability().amenable && forb == "{V2,Y}" && sets == ["{}", "{V1}"] && none2 && q2.zero_effect();
    (ok, format!("forb(G1)={forb} sets(G1)={sets:?} zero(G2)={}", q2.zero_effect()))
}

fn parent_set_fixtures() -> Outcome {
    let g = graph(FIG1_MPDAG);
    let (c, d) = (g.node("C").unwrap(), g.node("D").unwrap());
    let single: Vec<String> =
        possible_parent_sets(&g, &[c]).unwrap().parent_sets().iter().map(|t| g.format_set(&t[0])).collect();
    let joint: Vec<String> = possible_parent_sets(&g, &[c, d])
        .unwrap()
        .parent_sets()
        .iter()
        .map(|t| format!("({},{})", g.format_set(&t[0]), g.format_set(&t[1])))
        .collect();
    let want_single: BTreeSet<&str> = ["{}", "{D}", "{B,D}"].into();
    let want_joint: BTreeSet<&str> = ["({},{C})", "({D},{})", "({B,D},{})", "({B,D},{A})"].into();
    let got_single: BTreeSet<&str> = single.iter().map(String::as_str).collect();
    let got_joint: BTreeSet<&str> = joint.iter().map(String::as_str).collect();
    let ok = single.len() == 3
        && got_single == want_single
        && !got_single.contains("{B}")
        && joint.len() == 4
        && got_joint == want_joint;
    (ok, format!("C: {single:?} (C,D): {joint:?}"))
}

struct Sweep {
    graphs: usize,
    criterion: usize,
    existence: usize,
    first: Option<String>,
}

fn adjustment_sweep() -> Sweep {
    let mut r = rng(0x5eed_0005);
    let mut s = Sweep { graphs: 0, criterion: 0, existence: 0, first: None };
    for _ in 0..300 {
        let p = r.random_range(2..=6);
        let (g, _) = random_instance(p, &mut r);
        let dags = enumerate_dags(&g, None).dags;
        s.graphs += 1;
        for x in 0..p {
            for y in (0..p).filter(|&y| y != x) {
                let (xs, ys) = (set(&[x]), set(&[y]));
                let mut q = AdjustmentQuery::new(&g, &xs, &ys).unwrap();
                let rest: Vec<usize> = (0..p).filter(|&v| v != x && v != y).collect();
                let mut any = false;
                for z in subsets(&rest) {
                    let every = dags.iter().all(|d| dag_adjustment(d, &xs, &ys, &z));
                    any |= every;
                    if q.verdict(&z).unwrap().overall != every {
                        s.criterion += 1;
                        s.first.get_or_insert_with(|| format!("x={x} y={y} z={z:?}\n{}", g.to_text()));
                    }
                }
                if q.adjust_set().unwrap().is_some() != any {
                    s.existence += 1;
                    s.first.get_or_insert_with(|| format!("existence x={x} y={y}\n{}", g.to_text()));
                }
            }
        }
    }
    s
}

fn reach_sweep() -> Outcome {
    let mut r = rng(0x5eed_0007);
    let mut bad = 0;
    let mut queries = 0;
    for _ in 0..500 {
        let p = r.random_range(2..=7);
        let (g, _) = random_instance(p, &mut r);
        for v in 0..g.n() {
            let q = set(&[v]);
            queries += 2;
            if b_possible_descendants(&g, &q).unwrap() != oracle_reach(&g, &q, Direction::Descendants).unwrap() {
                bad += 1;
            }
            if b_possible_ancestors(&g, &q).unwrap() != oracle_reach(&g, &q, Direction::Ancestors).unwrap() {
                bad += 1;
            }
        }
    }
    (bad == 0, format!("{queries} queries, {bad} disagreements"))
}

fn confluence() -> Outcome {
    let mut r = rng(0x5eed_0008);
    let mut bad = 0;
    let mut fails = 0;
    for _ in 0..200 {
        let p = r.random_range(2..=8);
        let (g, dag) = random_instance(p, &mut r);
        let mut bg = random_true_knowledge(&g, &dag, &mut r);
        if r.random::<bool>() {
            if let Some(&(a, b)) = dag.directed_edges().choose(&mut r) {
                bg.push(b, a);
            }
        }
        let base = construct_max_pdag(&g, &bg).unwrap();
        fails += usize::from(!base.is_success());
        for _ in 0..4 {
            let mut rules = MeekRule::ALL.to_vec();
            rules.shuffle(&mut r);
            let mut pairs = g.undirected_edges();
            pairs.shuffle(&mut r);
            let order = ClosureOrder { rules, pair_order: Some(pairs) };
            let mut edges = bg.edges().to_vec();
            edges.shuffle(&mut r);
            let permuted = BackgroundKnowledge::from_edges(edges).unwrap();
            let other = construct_max_pdag_with(&g, &permuted, &order);
            if other.is_success() != base.is_success() || other.graph() != base.graph() {
                bad += 1;
            }
        }
    }
    (bad == 0, format!("200 instances ({fails} FAIL), {bad} disagreements"))
}

fn statistical_adjustment() -> Outcome {
    let mut r = rng(0x5eed_0009);
    let (mut used, mut covered) = (0, 0);
    while used < 100 {
        let p = r.random_range(2..=10);
        let m = random_dag(p, r.random_range(1.0..=3.0f64.min((p - 1) as f64)), &mut r).unwrap();
        let Ok((x, y)) = choose_xy(m.dag(), &mut r) else { continue };
        let cpdag = cpdag_of(m.dag()).unwrap();
        let g = add_background_fraction(&cpdag, m.dag(), r.random(), &mut r).unwrap();
        let Some(z) = mpdagkit::adjustment::adjust_set(&g, &set(&[x]), &set(&[y])).unwrap() else { continue };
        let data = sample_data(&m, 10_000, &mut r);
        let mut regressors = vec![x];
        regressors.extend(z.iter().copied());
        let Some(fit) = ols(data.values(), y, &regressors) else { continue };
        let truth = true_total_effect(&m, &[x], y).unwrap()[0];
        used += 1;
        if (fit.coefficients[0] - truth).abs() <= 3.0 * fit.std_errors[0] {
            covered += 1;
        }
    }
    (covered >= 95, format!("{covered}/100 within 3 SE"))
}

fn simulation_trends() -> Outcome {
    let cfg = SimConfig::desk(20_170_101);
    let rows = run_simulation(&cfg, Execution::default()).unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for &p in &cfg.ps {
        for &en in &cfg.ens {
            let sel: Vec<SimRow> = rows.iter().filter(|r| r.p == p && r.en == en).cloned().collect();
            let ident = mean_identifiable(&sel);
            ok &= ident.windows(2).all(|w| w[1].1 >= w[0].1);
            ok &= ident.last().map(|l| l.1) == Some(1.0);
            notes.push(format!("p={p} en={en}: {:.3}", ident[0].1));
        }
    }
    ok &= rows.iter().filter(|r| r.fraction == 1.0).all(|r| r.n_unique == 1);
    let p20: Vec<SimRow> = rows.iter().filter(|r| r.p == 20).cloned().collect();
    let base = mean_identifiable(&p20)[0].1;
    ok &= (base - 0.9).abs() <= 0.10;
    (ok, format!("p=20 identifiable at fraction 0: {base:.3} (per setting {})", notes.join(", ")))
}

fn mean_identifiable(rows: &[SimRow]) -> Vec<(f64, f64)> {
    mpdagkit::sem::mean_by_fraction(rows, |r| f64::from(u8::from(r.identifiable)))
}

fn main() -> ExitCode {
    let mut all = true;
    let mut report = |k: usize, title: &str, (ok, detail): Outcome| {
        all &= ok;
        println!("criterion {k:>2} {}: {title}: {detail}", if ok { "PASS" } else { "FAIL" });
    };
    report(1, "class enumeration", class_enumeration());
    report(2, "b-possible descendants on fixtures", reach_fixtures());
    report(3, "adjustment on fixtures", adjustment_fixtures());
    report(4, "possible parent sets on fixtures", parent_set_fixtures());
    let s = adjustment_sweep();
    let first = s.first.clone().map(|f| format!("; first: {f}")).unwrap_or_default();
    report(
        5,
        "criterion equals every-DAG verdict",
        (s.criterion == 0, format!("{} graphs, {} disagreements{first}", s.graphs, s.criterion)),
    );
    report(
        6,
        "adjust set passes iff some set passes",
        (s.existence == 0, format!("{} graphs, {} disagreements", s.graphs, s.existence)),
    );
    report(7, "reach sets equal oracle", reach_sweep());
    report(8, "orientation confluence", confluence());
    report(9, "adjusted OLS covers the true effect", statistical_adjustment());
    report(10, "simulation trends", simulation_trends());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
