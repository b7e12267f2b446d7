//! One handler per subcommand. Each returns the JSON `result` object plus a
//! CSV table of the series most useful for plotting the outcome.

use std::fmt::Write as _;

use serde_json::{Value, json};

use flexload::adequacy::{is_adequate, is_exactly_adequate, llf_allocate};
use flexload::dayahead::minimize_dayahead;
use flexload::demand::DemandProfile;
use flexload::majorization::first_tail_violation;
use flexload::market::{
    Curvature, efficiency_gap, equilibrium, social_welfare_optimum, spot_simulate,
    verify_equilibrium,
};
use flexload::procurement::{optimal_supplement_cost, oracle_purchase, runtime_purchase};
use flexload::rational::format_rational;

use crate::error::CliError;
use crate::output::{rational_list, rational_value};
use crate::scenario::ScenarioFile;

pub type CommandOutput = (Value, String);

fn threshold_meaning(curvature: Curvature) -> &'static str {
    match curvature {
        Curvature::ConvexIncrements => {
            "sorted supply is tracked down to this index, then held flat for full-horizon service"
        }
        Curvature::ConcaveIncrements => {
            "every consumer is served for exactly this many slots (0 means no paid service)"
        }
    }
}

pub fn adequacy(sc: &ScenarioFile) -> Result<CommandOutput, CliError> {
    let h = sc.demand_profile()?;
    let p = sc.supply()?;
    let d = h.duration_vector();

    let adequate = is_adequate(&p, &d)?;
    let exact = is_exactly_adequate(&p, &d)?;
    let mut result = json!({ "adequate": adequate, "exact": exact });
    if let Some(tail) = first_tail_violation(d.counts(), p.slots())? {
        result["first_violated_tail"] = json!(tail);
    }

    let sorted = p.sorted_desc();
    let mut plot = String::from("slot,demand_count,supply,supply_sorted\n");
    for (t, sorted_t) in sorted.iter().enumerate() {
        writeln!(plot, "{t},{},{},{sorted_t}", d.counts()[t], p.slots()[t]).unwrap();
    }
    Ok((result, plot))
}

pub fn allocate(sc: &ScenarioFile) -> Result<CommandOutput, CliError> {
    let h = sc.demand_profile()?;
    let p = sc.supply()?;
    let allocation = llf_allocate(&p, &h)?;

    let result = json!({
        "rows": allocation.rows(),
        "row_sums": allocation.row_sums(),
        "column_sums": allocation.column_sums(),
        "interruptions": allocation.interruption_counts(),
    });

    let d = h.duration_vector();
    let served = allocation.column_sums();
    let mut plot = String::from("slot,demand_count,supply,served\n");
    for (t, served_t) in served.iter().enumerate() {
        writeln!(plot, "{t},{},{},{served_t}", d.counts()[t], p.slots()[t]).unwrap();
    }
    Ok((result, plot))
}

pub fn procure(sc: &ScenarioFile) -> Result<CommandOutput, CliError> {
    let d = sc.demand_profile()?.duration_vector();
    let p = sc.supply()?;
    let price = sc.price_real_time()?;

    let closed_form = optimal_supplement_cost(&p, &d, price)?;
    let oracle = oracle_purchase(&p, &d, price)?;
    let (runtime, _) = runtime_purchase(&d, &p, price)?;

    let result = json!({
        "unit_price": rational_value(price),
        "units": oracle.units(),
        "closed_form_cost": rational_value(closed_form),
        "oracle": {
            "purchases": oracle.purchases,
            "cost": rational_value(oracle.total_cost),
        },
        "runtime": {
            "purchases": runtime.purchases,
            "cost": rational_value(runtime.total_cost),
        },
    });

    let oracle_result = &result["oracle"]["purchases"];
    let runtime_result = &result["runtime"]["purchases"];
    let mut plot = String::from("slot,stream,oracle_purchase,runtime_purchase\n");
    for t in 0..p.horizon() {
        writeln!(
            plot,
            "{t},{},{},{}",
            p.slots()[t],
            oracle_result[t],
            runtime_result[t]
        )
        .unwrap();
    }
    Ok((result, plot))
}

pub fn dayahead(sc: &ScenarioFile) -> Result<CommandOutput, CliError> {
    let d = sc.demand_profile()?.duration_vector();
    let dist = sc.distribution()?;
    let prices = sc.two_stage_prices()?;
    let solution = minimize_dayahead(&d, &dist, &prices, sc.day_ahead_cap)?;

    let result = json!({
        "purchase": solution.purchase,
        "cost": rational_value(solution.cost),
        "cap_hit": solution.cap_hit,
    });

    let mut plot = String::from("slot,demand_count,purchase\n");
    for t in 0..d.horizon() {
        writeln!(plot, "{t},{},{}", d.counts()[t], solution.purchase[t]).unwrap();
    }
    Ok((result, plot))
}

pub fn welfare(sc: &ScenarioFile) -> Result<CommandOutput, CliError> {
    let r = sc.supply()?;
    let u = sc.utility()?;
    let optimum = social_welfare_optimum(&r, sc.consumers()?, &u, sc.price_day_ahead()?)?;

    let result = json!({
        "duration_counts": optimum.demand.counts(),
        "purchase": optimum.purchase,
        "welfare": rational_value(optimum.welfare),
        "threshold": optimum.threshold,
        "threshold_meaning": threshold_meaning(u.curvature()),
    });

    let sorted = r.sorted_desc();
    let mut plot = String::from("slot,duration_count,purchase,supply_sorted\n");
    for (t, sorted_t) in sorted.iter().enumerate() {
        writeln!(
            plot,
            "{t},{},{},{sorted_t}",
            optimum.demand.counts()[t],
            optimum.purchase[t]
        )
        .unwrap();
    }
    Ok((result, plot))
}

pub fn equilibrium_cmd(sc: &ScenarioFile) -> Result<CommandOutput, CliError> {
    let r = sc.supply()?;
    let u = sc.utility()?;
    let c_da = sc.price_day_ahead()?;
    let outcome = equilibrium(&r, sc.consumers()?, &u, c_da)?;
    let verified = verify_equilibrium(&outcome, &r, &u, c_da);

    let result = json!({
        "price_menu": rational_list(outcome.prices.values()),
        "production": outcome.production,
        "duration_counts": outcome.demand.duration_vector().counts(),
        "dayahead_purchase": outcome.dayahead_purchase,
        "threshold": outcome.threshold,
        "threshold_meaning": threshold_meaning(u.curvature()),
        "verified": verified,
    });

    let mut plot = String::from("duration,price,production\n");
    for h in 1..=r.horizon() {
        writeln!(
            plot,
            "{h},{},{}",
            format_rational(outcome.prices.price(h)),
            outcome.production[h - 1]
        )
        .unwrap();
    }
    Ok((result, plot))
}

pub fn spot(sc: &ScenarioFile) -> Result<CommandOutput, CliError> {
    let r = sc.supply()?;
    let u = sc.utility()?;
    let trace = spot_simulate(&r, sc.consumers()?, &u, sc.price_real_time()?)?;

    let steps: Vec<Value> = trace
        .steps
        .iter()
        .enumerate()
        .map(|(slot, step)| {
            json!({
                "slot": slot,
                "price": rational_value(step.price),
                "histogram": step.histogram,
                "buyers": step.buyers,
                "topup": step.topup,
            })
        })
        .collect();
    let result = json!({
        "steps": steps,
        "final_holdings": trace.final_holdings,
        "utilities": rational_list(&trace.utilities),
        "payments": rational_list(&trace.payments),
        "consumer_net": rational_value(trace.consumer_net),
        "supplier_profit": rational_value(trace.supplier_profit),
        "welfare": rational_value(trace.welfare),
    });

    let mut plot = String::from("slot,free_supply,price,buyers,topup\n");
    for (slot, step) in trace.steps.iter().enumerate() {
        writeln!(
            plot,
            "{slot},{},{},{},{}",
            r.slots()[slot],
            format_rational(step.price),
            step.buyers.len(),
            step.topup
        )
        .unwrap();
    }
    Ok((result, plot))
}

pub fn compare(sc: &ScenarioFile) -> Result<CommandOutput, CliError> {
    let r = sc.supply()?;
    let u = sc.utility()?;
    let c_da = sc.price_day_ahead()?;
    let c_rt = sc.price_real_time()?;
    if c_da != c_rt {
        return Err(CliError::validation(
            "compare needs a single common price: set prices.day_ahead == prices.real_time",
        ));
    }
    let (forward, spot, gap) = efficiency_gap(&r, sc.consumers()?, &u, c_da)?;

    let result = json!({
        "forward": rational_value(forward),
        "spot": rational_value(spot),
        "gap": rational_value(gap),
    });
    let plot = format!(
        "metric,value\nforward,{}\nspot,{}\ngap,{}\n",
        format_rational(forward),
        format_rational(spot),
        format_rational(gap)
    );
    Ok((result, plot))
}

pub fn decompose(sc: &ScenarioFile) -> Result<CommandOutput, CliError> {
    let h = DemandProfile::new(sc.durations()?, sc.horizon()?)?;

    let result = json!({
        "durations": h.durations(),
        "load_count": h.load_count(),
        "total_energy": h.total_energy(),
    });
    let mut plot = String::from("load,duration\n");
    for (i, &d) in h.durations().iter().enumerate() {
        writeln!(plot, "{i},{d}").unwrap();
    }
    Ok((result, plot))
}
