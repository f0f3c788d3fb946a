//! One line per acceptance criterion. Tolerances live as constants in `almabel::tables`.

use almabel::tables::{self, Check};

fn report(c: &Check) -> bool {
    let secs = c.elapsed.as_secs_f64();
    let in_time = secs <= c.limit_seconds;
    let ok = c.pass && in_time;
    println!(
        "{} criterion {}: {} ({:.2}s, limit {:.0}s)",
        if ok { "PASS" } else { "FAIL" },
        c.id,
        c.name,
        secs,
        c.limit_seconds
    );
    if !c.pass {
        println!("{}", serde_json::to_string_pretty(&c.details).unwrap());
    }
    ok
}

fn main() {
    let checks = [
        tables::table3_integrability as fn() -> Check,
        tables::skt_route_agreement,
        tables::torsion_list,
        tables::non_exactness,
        tables::poisson_catalog,
        tables::dolbeault_oracle,
        tables::split_gk,
        tables::non_split_obstruction,
        tables::flow_solitons,
        tables::catalog_round_trip,
    ];
    let mut failed = Vec::new();
    for f in checks {
        let c = f();
        if !report(&c) {
            failed.push(c.id);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} criteria pass", checks.len());
}
