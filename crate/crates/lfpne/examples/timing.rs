use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(|s| s.as_str()).unwrap_or("bnb4");
    match which {
        "bnb4" => bench_bnb(3, 4, 5),
        "bnb6" => bench_bnb(3, 6, 3),
        "bnb44" => bench_bnb(4, 4, 2),
        "enum4" => bench_enum(3, 4, 5),
        "enum42" => bench_enum(4, 2, 5),
        "milp4" => bench_milp(4, 3),
        "indset" => bench_indset(),
        _ => eprintln!("unknown bench {which}"),
    }
}

fn bench_bnb(n: usize, m: usize, count: u64) {
    for seed in 0..count {
        let game = lfpne::generator::generate_random_game(n, m, seed);
        let t = Instant::now();
        let report = lfpne::bnb::solve_bnb(&game, 0.1).unwrap();
        println!(
            "bnb n={n} m={m} seed={seed}: sup={:?} attained={} nodes={} empt={} lex={} in {:.2?}",
            report.supremum, report.attained, report.stats.nodes,
            report.stats.emptiness_checks, report.stats.lex_solves, t.elapsed()
        );
    }
}

fn bench_enum(n: usize, m: usize, count: u64) {
    for seed in 0..count {
        let game = lfpne::generator::generate_random_game(n, m, seed);
        let t = Instant::now();
        let report = lfpne::enumerate::solve_enum(&game, 0.1).unwrap();
        println!(
            "enum n={n} m={m} seed={seed}: sup={:?} masks={} empt={} lex={} in {:.2?}",
            report.supremum, report.stats.nodes, report.stats.emptiness_checks,
            report.stats.lex_solves, t.elapsed()
        );
    }
}

fn bench_milp(m: usize, count: u64) {
    for seed in 0..count {
        let game = lfpne::generator::generate_random_game(3, m, seed);
        for big_m in [10.0, 100.0, 1000.0] {
            let t = Instant::now();
            let out = lfpne::restricted::solve_restricted_milp(&game, big_m).unwrap();
            match out {
                lfpne::restricted::RestrictedResult::Feasible { value, proven_optimal, .. } =>
                    println!("milp m={m} seed={seed} M={big_m}: value={value:.3} proven={proven_optimal} in {:.2?}", t.elapsed()),
                lfpne::restricted::RestrictedResult::Infeasible =>
                    println!("milp m={m} seed={seed} M={big_m}: infeasible in {:.2?}", t.elapsed()),
            }
        }
    }
}

fn bench_indset() {
    // r=4 complete-ish graph and r=5 cycle as stress cases.
    let cases: Vec<(usize, Vec<(usize, usize)>)> = vec![
        (4, vec![(0,1),(0,2),(0,3),(1,2),(1,3),(2,3)]),
        (4, vec![(0,1),(1,2)]),
        (5, vec![(0,1),(1,2),(2,3),(3,4),(4,0)]),
        (5, vec![]),
    ];
    for (r, edges) in cases {
        let g = lfpne::gadgets::UndirectedGraph::new(r, edges.clone()).unwrap();
        let (b, c) = lfpne::gadgets::indset_defaults(r);
        let game = lfpne::gadgets::make_indset_game(&g, b, c).unwrap();
        let t = Instant::now();
        let report = lfpne::bnb::solve_bnb(&game, 0.05).unwrap();
        println!(
            "indset r={r} |E|={}: sup={:?} nodes={} in {:.2?}",
            edges.len(), report.supremum, report.stats.nodes, t.elapsed()
        );
    }
}
