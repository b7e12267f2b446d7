//! End-to-end acceptance gate: each test pins one release criterion with its
//! exact expected values, tolerance, and time budget. A failure here means
//! the crate no longer reproduces its reference results.

mod common;

use std::time::{Duration, Instant};

use flexload::adequacy::{
    is_adequate, is_exactly_adequate, llf_allocate, verify_allocation, verify_allocation_exact,
};
use flexload::dayahead::{
    ScenarioDistribution, TwoStagePrices, convexity_probe, minimize_dayahead,
};
use flexload::demand::{DemandProfile, DurationVector, SupplyProfile};
use flexload::majorization::{majorizes, rh_chain, rh_transfer, sort_desc};
use flexload::market::{
    Curvature, UtilitySpec, efficiency_gap, equilibrium, social_welfare_optimum, spot_simulate,
    verify_equilibrium,
};
use flexload::procurement::{optimal_supplement_cost, oracle_purchase, runtime_purchase};
use flexload::rate::{RateSpec, compose_allocation, decompose, split_allocation};
use flexload::rational::{Rational, rat, ratq};
use rand::RngExt;

fn assert_within(elapsed: Duration, budget: Duration, what: &str) {
    assert!(
        elapsed <= budget,
        "{what} took {elapsed:?}, budget {budget:?}"
    );
}

#[test]
fn criterion_01_worked_allocation_example() {
    // Warm up allocators and page cache before the timed run.
    let h = DemandProfile::new(vec![1, 2, 2, 3, 6], 6).unwrap();
    let _ = h.duration_vector();

    let start = Instant::now();
    let d = h.duration_vector();
    assert_eq!(d.counts(), &[5, 4, 2, 1, 1, 1]);

    let exact = SupplyProfile::new(vec![1, 5, 3, 1, 2, 2]);
    assert_eq!(is_exactly_adequate(&exact, &d), Ok(true));

    let short = SupplyProfile::new(vec![2, 5, 3, 2, 2, 0]);
    assert_eq!(is_adequate(&short, &d), Ok(false));

    let allocation = llf_allocate(&exact, &h).unwrap();
    assert!(verify_allocation(&allocation, &exact, &h));
    assert!(verify_allocation_exact(&allocation, &exact, &h));
    let elapsed = start.elapsed();

    assert_within(
        elapsed,
        Duration::from_millis(1),
        "worked allocation example",
    );
    println!("PASS criterion 1: worked example reproduced exactly in {elapsed:?}");
}

#[test]
fn criterion_02_procurement_routes_agree() {
    let start = Instant::now();

    // Pinned trace: one missing unit in the deepest tail costs exactly one.
    let d = DurationVector::new(vec![5, 4, 2, 1, 1, 1], 5).unwrap();
    let stream = SupplyProfile::new(vec![2, 5, 3, 2, 2, 0]);
    let (plan, _) = runtime_purchase(&d, &stream, rat(1)).unwrap();
    assert_eq!(plan.purchases, vec![0, 0, 0, 0, 0, 1]);
    assert_eq!(plan.total_cost, rat(1));
    assert_eq!(
        optimal_supplement_cost(&stream, &d, rat(1)).unwrap(),
        rat(1)
    );

    let mut rng = common::rng(0xAC02);
    for _ in 0..5_000 {
        let horizon = rng.random_range(1usize..=8);
        let mut counts: Vec<u32> = (0..horizon).map(|_| rng.random_range(0u32..=6)).collect();
        counts.sort_unstable_by(|a, b| b.cmp(a));
        let d = DurationVector::new(counts.clone(), counts[0]).unwrap();
        let p = SupplyProfile::new((0..horizon).map(|_| rng.random_range(0u32..=6)).collect());
        let price = ratq(rng.random_range(1i64..=9), rng.random_range(1i64..=3));

        let closed_form = optimal_supplement_cost(&p, &d, price).unwrap();
        let oracle = oracle_purchase(&p, &d, price).unwrap();
        let (policy, allocation) = runtime_purchase(&d, &p, price).unwrap();
        assert_eq!(closed_form, oracle.total_cost);
        assert_eq!(closed_form, policy.total_cost);

        // Independent route: units certified missing by a max-flow.
        let flow_units = common::min_extra_units(p.slots(), d.demand_profile().durations());
        assert_eq!(closed_form, price * rat(flow_units as i64));

        let combined = p
            .plus(&SupplyProfile::new(policy.purchases.clone()))
            .unwrap();
        assert!(verify_allocation(
            &allocation,
            &combined,
            &d.demand_profile()
        ));
    }

    let elapsed = start.elapsed();
    assert_within(
        elapsed,
        Duration::from_secs(30),
        "procurement agreement sweep",
    );
    println!("PASS criterion 2: 5000 instances, all procurement routes equal, in {elapsed:?}");
}

#[test]
fn criterion_03_adequacy_matches_max_flow() {
    let start = Instant::now();
    let mut rng = common::rng(0xAC03);
    let mut adequate_seen = 0u32;
    for _ in 0..10_000 {
        let horizon = rng.random_range(1usize..=6);
        let loads = rng.random_range(0usize..=6);
        let durations: Vec<u32> = (0..loads)
            .map(|_| rng.random_range(0..=horizon as u32))
            .collect();
        let supply: Vec<u32> = (0..horizon).map(|_| rng.random_range(0u32..=6)).collect();

        let h = DemandProfile::new(durations.clone(), horizon).unwrap();
        let p = SupplyProfile::new(supply.clone());
        let verdict = is_adequate(&p, &h.duration_vector()).unwrap();
        assert_eq!(
            verdict,
            common::serves_fully(&supply, &durations),
            "supply {supply:?} vs durations {durations:?}"
        );
        adequate_seen += u32::from(verdict);
    }
    assert!(
        adequate_seen > 500 && adequate_seen < 9_500,
        "degenerate corpus"
    );

    let elapsed = start.elapsed();
    assert_within(elapsed, Duration::from_secs(60), "adequacy/flow sweep");
    println!("PASS criterion 3: 10000 instances, tail test == max-flow, in {elapsed:?}");
}

#[test]
fn criterion_04_dayahead_toy_and_convexity() {
    let start = Instant::now();

    let d = DurationVector::new(vec![1, 1], 1).unwrap();
    let dist = ScenarioDistribution::new(vec![
        (SupplyProfile::new(vec![1, 1]), ratq(1, 2)),
        (SupplyProfile::new(vec![0, 0]), ratq(1, 2)),
    ])
    .unwrap();
    let prices = TwoStagePrices::new(rat(1), rat(3)).unwrap();

    let sol = minimize_dayahead(&d, &dist, &prices, Some(2)).unwrap();
    assert_eq!(sol.purchase, vec![1, 1]);
    assert_eq!(sol.cost, rat(2));

    // Exhaustive cross-check computed from scratch over the whole box,
    // costing shortfalls with the independent max-flow.
    let durations = d.demand_profile().durations().to_vec();
    let mut best: Option<(Rational, (u32, u32))> = None;
    for y0 in 0..=2u32 {
        for y1 in 0..=2u32 {
            let mut cost = rat(i64::from(y0 + y1));
            for (r, mass) in dist.scenarios() {
                let combined = [r.slots()[0] + y0, r.slots()[1] + y1];
                cost += *mass * rat(3) * rat(common::min_extra_units(&combined, &durations) as i64);
            }
            if best.is_none_or(|(c, _)| cost < c) {
                best = Some((cost, (y0, y1)));
            }
        }
    }
    assert_eq!(best, Some((rat(2), (1, 1))));

    // 1,000 random segment triples within tolerance 1e-9 (pinned in the probe).
    assert_eq!(convexity_probe(&d, &dist, &prices, 1_000, 0xAC04), Ok(true));

    let elapsed = start.elapsed();
    assert_within(elapsed, Duration::from_secs(10), "day-ahead toy optimum");
    println!("PASS criterion 4: toy optimum (1,1) at J=2 and 1000 convex triples, in {elapsed:?}");
}

fn square_utility() -> UtilitySpec {
    UtilitySpec::new(
        (0..=6).map(|h| rat(h * h)).collect(),
        Curvature::ConvexIncrements,
    )
    .unwrap()
}

fn saturating_utility() -> UtilitySpec {
    let values = [0, 12, 14, 15, 15, 15, 15]
        .iter()
        .map(|&v| rat(v))
        .collect();
    UtilitySpec::new(values, Curvature::ConcaveIncrements).unwrap()
}

#[test]
fn criterion_05_forward_market_rising_increments() {
    let start = Instant::now();
    let r = SupplyProfile::new(vec![5, 4, 2, 1, 1, 0]);
    let u = square_utility();
    let c_da = ratq(21, 2);

    let out = equilibrium(&r, 14, &u, c_da).unwrap();
    assert_eq!(out.demand.duration_vector().counts(), &[5, 4, 2, 1, 1, 1]);
    assert_eq!(out.production, vec![1, 2, 1, 0, 0, 1]);
    let menu: Vec<Rational> = (1..=6).map(|h| rat(h * h)).collect();
    assert_eq!(out.prices.values(), &menu[..]);
    assert!(verify_equilibrium(&out, &r, &u, c_da));

    let optimum = social_welfare_optimum(&r, 14, &u, c_da).unwrap();
    assert_eq!(
        optimum.welfare,
        common::brute_welfare(r.slots(), 14, u.values(), c_da)
    );

    let elapsed = start.elapsed();
    assert_within(
        elapsed,
        Duration::from_secs(5),
        "rising-increment market golden",
    );
    println!("PASS criterion 5: rising-increment golden equilibrium verified, in {elapsed:?}");
}

#[test]
fn criterion_06_forward_market_falling_increments() {
    let r = SupplyProfile::new(vec![5, 4, 2, 1, 1, 0]);
    let u = saturating_utility();
    let c_da = rat(3); // first increment 12 covers it, second increment 2 does not

    let out = equilibrium(&r, 14, &u, c_da).unwrap();
    assert_eq!(out.demand.duration_vector().counts(), &[14, 0, 0, 0, 0, 0]);
    assert_eq!(out.production[0], 14);
    assert_eq!(&out.production[1..], &[0, 0, 0, 0, 0]);
    let linear: Vec<Rational> = (1..=6).map(|h| rat(3 * h)).collect();
    assert_eq!(out.prices.values(), &linear[..]);
    assert!(verify_equilibrium(&out, &r, &u, c_da));

    println!("PASS criterion 6: falling-increment golden clears 14 unit services at linear prices");
}

#[test]
fn criterion_07_spot_market_inefficiency() {
    let start = Instant::now();
    let r = SupplyProfile::new(vec![0, 1]);

    let late =
        UtilitySpec::new(vec![rat(0), rat(0), rat(10)], Curvature::ConvexIncrements).unwrap();
    assert_eq!(
        efficiency_gap(&r, 1, &late, rat(8)),
        Ok((rat(2), rat(0), rat(2)))
    );

    let early =
        UtilitySpec::new(vec![rat(0), rat(5), rat(5)], Curvature::ConcaveIncrements).unwrap();
    assert_eq!(
        efficiency_gap(&r, 1, &early, rat(2)),
        Ok((rat(5), rat(3), rat(2)))
    );
    let trace = spot_simulate(&r, 1, &early, rat(2)).unwrap();
    assert_eq!(trace.consumer_net, rat(3));
    assert_eq!(trace.supplier_profit, rat(0));

    let elapsed = start.elapsed();
    assert_within(elapsed, Duration::from_secs(1), "spot inefficiency goldens");
    println!("PASS criterion 7: forward 2 vs spot 0, and forward 5 vs spot 3, in {elapsed:?}");
}

#[test]
fn criterion_08_equilibrium_sweep() {
    let start = Instant::now();
    for (class, seed) in [
        (Curvature::ConvexIncrements, 0xAC08u64),
        (Curvature::ConcaveIncrements, 0xAC09u64),
    ] {
        let mut rng = common::rng(seed);
        for _ in 0..2_000 {
            let horizon = rng.random_range(1usize..=4);
            let r = SupplyProfile::new((0..horizon).map(|_| rng.random_range(0u32..=2)).collect());
            let population = r.total() as u32 + rng.random_range(0u32..=2);

            let mut increments: Vec<Rational> = (0..horizon)
                .map(|_| ratq(rng.random_range(0i64..=8), rng.random_range(1i64..=2)))
                .collect();
            increments.sort_unstable();
            if class == Curvature::ConcaveIncrements {
                increments.reverse();
            }
            let mut values = vec![rat(0)];
            for inc in increments {
                values.push(*values.last().unwrap() + inc);
            }
            let u = UtilitySpec::new(values, class).unwrap();
            let c_da = ratq(rng.random_range(0i64..=6), rng.random_range(1i64..=2));

            let out = equilibrium(&r, population, &u, c_da).unwrap();
            assert!(verify_equilibrium(&out, &r, &u, c_da), "r={:?}", r.slots());

            let optimum = social_welfare_optimum(&r, population, &u, c_da).unwrap();
            assert_eq!(
                optimum.welfare,
                common::brute_welfare(r.slots(), population, u.values(), c_da)
            );
        }
    }
    let elapsed = start.elapsed();
    assert_within(elapsed, Duration::from_secs(120), "equilibrium sweep");
    println!("PASS criterion 8: 2000 verified equilibria per curvature class, in {elapsed:?}");
}

#[test]
fn criterion_09_rate_decomposition_round_trip() {
    let start = Instant::now();

    let mut rng = common::rng(0xAC0A);
    for _ in 0..5_000 {
        let horizon = rng.random_range(1usize..=8);
        let max_rate = rng.random_range(0u32..=4);
        let energy = rng.random_range(0..=(max_rate * horizon as u32).min(20));
        let spec = RateSpec::new(energy, max_rate, horizon).unwrap();

        let mut schedule = vec![0u32; horizon];
        for _ in 0..energy {
            loop {
                let t = rng.random_range(0..horizon);
                if schedule[t] < max_rate {
                    schedule[t] += 1;
                    break;
                }
            }
        }
        let rows = split_allocation(&schedule, &spec).unwrap();
        assert_eq!(compose_allocation(&rows, &spec).unwrap(), schedule);
    }

    // Exhaustive tiny comparison against the direct characterization: the
    // substitute loads are servable iff the rate-capped supply covers E.
    for horizon in 1usize..=4 {
        for max_rate in 0u32..=3 {
            for energy in 0..=(max_rate * horizon as u32).min(8) {
                let spec = RateSpec::new(energy, max_rate, horizon).unwrap();
                let d = decompose(&spec).duration_vector();
                let mut supply = vec![0u32; horizon];
                'boxes: loop {
                    let usable: u32 = supply.iter().map(|&p| p.min(max_rate)).sum();
                    assert_eq!(
                        is_adequate(&SupplyProfile::new(supply.clone()), &d).unwrap(),
                        usable >= energy
                    );
                    for t in (0..horizon).rev() {
                        if supply[t] < 3 {
                            supply[t] += 1;
                            for v in &mut supply[t + 1..] {
                                *v = 0;
                            }
                            continue 'boxes;
                        }
                        supply[t] = 0;
                    }
                    break;
                }
            }
        }
    }

    let elapsed = start.elapsed();
    assert_within(elapsed, Duration::from_secs(30), "rate round trips");
    println!("PASS criterion 9: 5000 round trips and exhaustive tiny equivalence, in {elapsed:?}");
}

#[test]
fn criterion_10_transfer_chain_replay() {
    let start = Instant::now();
    let mut rng = common::rng(0xAC0B);
    for _ in 0..1_000 {
        let len = rng.random_range(1usize..8);
        let a: Vec<u32> = (0..len).map(|_| rng.random_range(0u32..9)).collect();
        let mut b = sort_desc(&a);
        for _ in 0..rng.random_range(0usize..6) {
            let from = rng.random_range(0..len);
            let to = rng.random_range(0..len);
            if b[from] > b[to] {
                b = rh_transfer(&b, from, to).unwrap();
            }
        }
        assert_eq!(majorizes(&a, &b), Ok(true));

        let chain = rh_chain(&a, &b).unwrap();
        let mut v = sort_desc(&a);
        for step in &chain {
            v = rh_transfer(&v, step.from, step.to).unwrap();
            assert_eq!(majorizes(&a, &v), Ok(true), "chain fell below its start");
            assert_eq!(majorizes(&v, &b), Ok(true), "chain overshot its target");
        }
        assert_eq!(v, sort_desc(&b));
    }
    let elapsed = start.elapsed();
    assert_within(elapsed, Duration::from_secs(10), "transfer chain replay");
    println!("PASS criterion 10: 1000 transfer chains replay monotonically, in {elapsed:?}");
}
