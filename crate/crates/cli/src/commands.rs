use diophant::arith::parse_scalar;
use diophant::census::{census, census_dual, proportion_trend, CensusReport};
use diophant::dirichlet::{linear_witness, simultaneous_witness};
use diophant::matrix::IntMatrix;
use diophant::periods::{check_period_sandwich, compute_periods, dynamical_periods, Stop};
use diophant::resonance::{normal_form, resonance_module, shortest_resonance};
use diophant::snf::smith_normal_form;
use diophant::transfer::{
    estimate_linear, estimate_period_growth, estimate_simultaneous, map_lin_to_sim,
    map_sim_to_lin, mu, proof_trace_batch, proof_trace_with, resonant_witnesses,
    ExponentReport, GrowthHypothesis, ProofTrace, SplitVector,
};
use diophant::{Declaration, Error, Vector};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::args::{Command, Declare, Format, Kind, Mode, TransferOp};
use crate::config::Settings;
use crate::render::{int, ints, rows, to_text, Render};
use crate::Failure;

/// Everything the manifest needs besides the output itself.
pub struct Outcome {
    pub text: String,
    pub input: Option<String>,
}

fn rational(text: &str, what: &str) -> Result<BigRational, Failure> {
    parse_scalar(text)?
        .to_rational()
        .ok_or_else(|| Failure::usage(format!("{what} must be rational")))
}

fn vector(text: &str, declare: Declare) -> Result<Vector, Failure> {
    let v = Vector::parse(text)?;
    Ok(v.with_declaration(match declare {
        Declare::None => Declaration::Undeclared,
        Declare::NonResonant => Declaration::NonResonant,
        Declare::Block => Declaration::IrrationalBlockNonResonant,
    }))
}

fn check_box(s: &Settings, n: usize, radius: u64) -> Result<(), Failure> {
    let size = (2 * radius as u128 + 1).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > s.box_guard {
        return Err(Error::BoxTooLarge {
            size,
            limit: s.box_guard,
        }
        .into());
    }
    Ok(())
}

fn check_grid(s: &Settings, t: u64, n: usize) -> Result<(), Failure> {
    let size = (t as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > s.grid_guard {
        return Err(Error::GridTooLarge {
            size,
            limit: s.grid_guard,
        }
        .into());
    }
    Ok(())
}

pub fn run(cmd: &Command, s: &Settings) -> Result<Outcome, Failure> {
    let r = Render {
        decimals: s.decimals,
    };
    let (text, input) = match cmd {
        Command::Periods {
            omega,
            max_period,
            max_index,
            dynamical,
            sandwich,
            format,
        } => {
            let v = vector(omega, Declare::None)?;
            let seq = if *dynamical {
                if max_index.is_some() {
                    return Err(Failure::usage("--dynamical takes --max-period only".into()));
                }
                let m = max_period
                    .ok_or_else(|| Failure::usage("--dynamical needs --max-period".into()))?;
                dynamical_periods(&v, m, s.prec)?
            } else {
                let stop = Stop {
                    max_period: *max_period,
                    max_index: *max_index,
                };
                compute_periods(&v, stop, s.prec)?
            };
            let text = if *sandwich {
                let recs = check_period_sandwich(&seq, v.dim(), s.prec)?;
                match format {
                    Format::Json => to_text(&Value::Array(
                        recs.iter()
                            .map(|x| {
                                json!({
                                    "i": x.index,
                                    "T": x.period,
                                    "T_next": x.next_period,
                                    "lower_bound": r.rational(&x.lower_bound),
                                    "lower_holds": x.lower_holds,
                                    "upper_product": r.real(&x.upper_product),
                                    "upper_holds": x.upper_holds,
                                })
                            })
                            .collect(),
                    )),
                    Format::Csv => {
                        let mut out = String::from("i,T,T_next,lower_bound,lower_holds,upper_product,upper_holds\n");
                        for x in &recs {
                            out += &format!(
                                "{},{},{},{},{},{},{}\n",
                                x.index,
                                x.period,
                                x.next_period,
                                x.lower_bound,
                                x.lower_holds,
                                r.cell(&x.upper_product),
                                x.upper_holds
                            );
                        }
                        out
                    }
                }
            } else {
                match format {
                    Format::Json => to_text(&Value::Array(
                        seq.entries
                            .iter()
                            .map(|e| {
                                json!({
                                    "i": e.index,
                                    "T": e.period,
                                    "delta": r.real(&e.delta),
                                    "witness": ints(&e.witness),
                                })
                            })
                            .collect(),
                    )),
                    Format::Csv => {
                        let mut out = String::from("i,T,delta,witness\n");
                        for e in &seq.entries {
                            let w: Vec<String> = e.witness.iter().map(|x| x.to_string()).collect();
                            out += &format!("{},{},{},{}\n", e.index, e.period, r.cell(&e.delta), w.join(";"));
                        }
                        out
                    }
                }
            };
            (text, Some(v.to_string()))
        }

        Command::Dirichlet { omega, q, mode } => {
            let v = vector(omega, Declare::None)?;
            let q = rational(q, "Q")?;
            let out = match mode {
                Mode::Simultaneous => {
                    let w = simultaneous_witness(&v, &q, s.prec)?;
                    json!({
                        "mode": "simultaneous",
                        "Q": r.rational(&w.q),
                        "T": w.time,
                        "distance": r.real(&w.distance),
                    })
                }
                Mode::Linear => {
                    let radius: BigInt = q.ceil().to_integer() - 1;
                    let radius = u64::try_from(radius.max(BigInt::from(0)))
                        .map_err(|_| Failure::usage("Q too large".into()))?;
                    check_box(s, v.dim(), radius)?;
                    let w = linear_witness(&v, &q, s.prec, s.exec)?;
                    json!({
                        "mode": "linear",
                        "Q": r.rational(&w.q),
                        "k": w.k,
                        "divisor": r.real(&w.divisor),
                    })
                }
            };
            (to_text(&out), Some(v.to_string()))
        }

        Command::Resonance {
            omega,
            normal_form: nf,
            e_value,
            declare,
        } => {
            let v = vector(omega, *declare)?;
            let m = resonance_module(&v)?;
            let mut out = Map::new();
            out.insert("dim".into(), json!(m.dim));
            out.insert("rank".into(), json!(m.rank()));
            out.insert("basis".into(), rows(&m.basis));
            out.insert("factors".into(), ints(&m.factors));
            out.insert("A".into(), rows(&m.a.to_rows()));
            if *nf {
                let f = normal_form(&v)?;
                out.insert(
                    "normal_form".into(),
                    json!({
                        "A": rows(&f.a.to_rows()),
                        "image": f.image.components().iter().map(|c| r.real(c)).collect::<Vec<_>>(),
                        "rank": f.rank,
                        "factors": ints(&f.factors),
                    }),
                );
            }
            if *e_value {
                let (e, k) = shortest_resonance(&v)?;
                out.insert("e_value".into(), json!({ "e": e, "k": k }));
            }
            (to_text(&Value::Object(out)), Some(v.to_string()))
        }

        Command::Snf { matrix } => {
            let b = IntMatrix::parse(matrix)?;
            let d = smith_normal_form(&b);
            let out = json!({
                "C": rows(&d.c.to_rows()),
                "Lambda": rows(&d.lambda.to_rows()),
                "A": rows(&d.a.to_rows()),
                "factors": ints(&d.factors),
            });
            (to_text(&out), Some(b.to_string()))
        }

        Command::Census {
            t,
            n,
            threshold,
            dual,
            format,
        } => {
            check_grid(s, *t, *n)?;
            let rep = if *dual {
                census_dual(*t, *n, *threshold)?
            } else {
                census(*t, *n, *threshold, s.exec)?
            };
            (census_table(&[rep], *format, &r), None)
        }

        Command::CensusTrend {
            t_list,
            n,
            tau,
            format,
        } => {
            let tau = rational(tau, "τ")?;
            for &t in t_list {
                check_grid(s, t, *n)?;
            }
            let reps = proportion_trend(t_list, *n, &tau, s.exec)?;
            (census_table(&reps, *format, &r), None)
        }

        Command::Transfer { op } => transfer(op, s, &r)?,

        Command::Replay { .. } => unreachable!("replay is dispatched by main"),
    };
    Ok(Outcome { text, input })
}

fn census_table(reps: &[CensusReport], format: Format, r: &Render) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from("T,A,count,total,bound,proportion\n");
            for c in reps {
                out += &format!(
                    "{},{},{},{},{},{}\n",
                    c.t,
                    c.threshold,
                    c.count,
                    c.total,
                    c.bound,
                    r.cell(&diophant::Real::from_rational(c.proportion.clone()))
                );
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = reps
                .iter()
                .map(|c| {
                    json!({
                        "T": c.t,
                        "n": c.n,
                        "A": c.threshold,
                        "count": c.count,
                        "total": c.total,
                        "bound": int(&c.bound),
                        "proportion": r.rational(&c.proportion),
                        "within_bound": c.within_bound(),
                    })
                })
                .collect();
            if rows.len() == 1 {
                to_text(&rows[0])
            } else {
                to_text(&Value::Array(rows))
            }
        }
    }
}

fn exponent_report(rep: &ExponentReport, r: &Render) -> Value {
    json!({
        "kind": rep.kind.name(),
        "tau": rep.tau.as_ref().map(|e| r.enclosure(e)),
        "tail_tau": rep.tail_tau.as_ref().map(|e| r.enclosure(e)),
        "constant": rep.constant.as_ref().map(|e| r.enclosure(e)),
        "constant_tau": rep.constant_tau.as_ref().map(|t| r.rational(t)),
        "depth": rep.depth,
        "observations": rep.observations,
        "resonant": rep.resonant,
    })
}

fn trace_json(t: &ProofTrace, r: &Render) -> Value {
    json!({
        "k": t.k,
        "i": t.i,
        "j": t.j,
        "tau": r.rational(&t.hypothesis.tau),
        "C_pow": r.rational(&t.hypothesis.c_pow),
        "mu": r.rational(&t.mu),
        "all_hold": t.all_hold(),
        "records": t.records.iter().map(|x| json!({
            "name": x.name,
            "relation": x.relation.to_string(),
            "lhs": r.real(&x.lhs),
            "rhs": r.real(&x.rhs),
            "holds": x.holds,
        })).collect::<Vec<_>>(),
    })
}

fn transfer(op: &TransferOp, s: &Settings, r: &Render) -> Result<(String, Option<String>), Failure> {
    Ok(match op {
        TransferOp::Map { tau, n } => {
            let t = rational(tau, "τ")?;
            let out = json!({
                "tau": r.rational(&t),
                "n": n,
                "sim_to_lin": r.rational(&map_sim_to_lin(&t, *n)?),
                "lin_to_sim": r.rational(&map_lin_to_sim(&t, *n)?),
            });
            (to_text(&out), None)
        }
        TransferOp::Mu { tau, n } => {
            let t = rational(tau, "τ")?;
            let out = json!({ "tau": r.rational(&t), "n": n, "mu": r.rational(&mu(&t, *n)?) });
            (to_text(&out), None)
        }
        TransferOp::Estimate { omega, kind, depth } => {
            let v = vector(omega, Declare::None)?;
            let rep = match kind {
                Kind::Growth => {
                    let seq = compute_periods(&v, Stop::period(*depth), s.prec)?;
                    estimate_period_growth(&seq)?
                }
                Kind::Sim => estimate_simultaneous(&v, *depth, s.prec)?,
                Kind::Lin => {
                    check_box(s, v.dim(), *depth)?;
                    estimate_linear(&v, *depth, s.prec)?
                }
            };
            (to_text(&exponent_report(&rep, r)), Some(v.to_string()))
        }
        TransferOp::Trace {
            omega,
            k,
            radius,
            max_period,
            tau,
        } => {
            let v = vector(omega, Declare::NonResonant)?;
            let seq = compute_periods(&v, Stop::period(*max_period), s.prec)?;
            let hyp = match tau {
                Some(t) => GrowthHypothesis::fit(&seq, &rational(t, "τ")?)?,
                None => GrowthHypothesis::from_sequence(&seq, v.dim())?,
            };
            let out = match (k, radius) {
                (Some(k), _) => {
                    let k: Vec<i64> = k
                        .split(',')
                        .map(|x| x.trim().parse())
                        .collect::<Result<_, _>>()
                        .map_err(|_| Failure::usage(format!("bad integer vector {k:?}")))?;
                    trace_json(&proof_trace_with(&v, &k, &seq, &hyp, s.prec)?, r)
                }
                (None, Some(radius)) => {
                    check_box(s, v.dim(), (*radius).max(0) as u64)?;
                    let batch = proof_trace_batch(&v, *radius, &seq, &hyp, s.prec, s.exec);
                    let mut passed = 0usize;
                    let items: Vec<Value> = batch
                        .into_iter()
                        .map(|(k, res)| match res {
                            Ok(t) => {
                                passed += usize::from(t.all_hold());
                                trace_json(&t, r)
                            }
                            Err(e) => json!({ "k": k, "error": e.to_string() }),
                        })
                        .collect();
                    json!({ "traces": items, "count": items.len(), "passed": passed })
                }
                (None, None) => unreachable!("clap requires --k or --radius"),
            };
            (to_text(&out), Some(v.to_string()))
        }
        TransferOp::ResonantWitnesses {
            omega,
            count,
            matrix,
        } => {
            let split = SplitVector::parse(omega, matrix.as_deref())?;
            let ws = resonant_witnesses(&split, *count, s.prec)?;
            let out = json!({
                "p": int(&split.p()),
                "C_pow": int(&split.constant_pow()),
                "witnesses": ws.iter().map(|w| json!({
                    "T": w.t,
                    "T_prime": w.t_prime,
                    "distance": r.real(&w.distance),
                    "holds": w.holds,
                })).collect::<Vec<_>>(),
            });
            let canonical = format!(
                "{} | {}",
                Vector::new(split.irrational.clone())
                    .map(|v| v.to_string())
                    .unwrap_or_default(),
                split.last
            );
            (to_text(&out), Some(canonical))
        }
    })
}
