use elliptic_bailey::bailey::{d_entry, m_entry};
use elliptic_bailey::harness::ComplexArg;
use elliptic_bailey::special::{elliptic_gamma, elliptic_pochhammer, qpochhammer_inf, theta};
use elliptic_bailey::{Error, NomePair, TruncationPolicy, C64};

use crate::{EvalCommand, Status};

fn nome(p: ComplexArg, q: ComplexArg, tol: f64) -> Result<NomePair, Error> {
    if !(tol > 0.0) {
        return Err(Error::Config(format!("--tol must be positive, got {tol}")));
    }
    NomePair::with_policy(p.0, q.0, TruncationPolicy::adaptive(tol))
}

fn single_order(policy: &TruncationPolicy, base: C64, z: C64) -> usize {
    policy.product_order(base.norm(), z.norm())
}

/// The value and a description of the truncation used.
fn evaluate(cmd: EvalCommand) -> Result<(C64, String), Error> {
    match cmd {
        EvalCommand::Gamma { z, p, q, opts } => {
            let nome = nome(p, q, opts.tol)?;
            let value = elliptic_gamma(z.0, &nome)?;
            let scale = z.0.norm().max((p.0 * q.0 / z.0).norm());
            let (rows, cutoff) = nome.policy().double_product_cutoff(p.0.norm(), q.0.norm(), scale);
            Ok((value, format!("{rows} rows in p, factors cut below {cutoff:e}")))
        }
        EvalCommand::Theta { z, p, opts } => {
            let policy = TruncationPolicy::adaptive(opts.tol);
            let value = theta(z.0, p.0, &policy)?;
            let left = single_order(&policy, p.0, z.0);
            let right = single_order(&policy, p.0, p.0 / z.0);
            Ok((value, format!("{left} + {right} factors")))
        }
        EvalCommand::Pochhammer { z, q, p, n, opts } => match (p, n) {
            (Some(p), Some(n)) => {
                let nome = nome(p, q, opts.tol)?;
                let value = elliptic_pochhammer(z.0, n, &nome)?;
                let order = single_order(nome.policy(), p.0, z.0);
                Ok((value, format!("{} theta factors of up to {order} + {order} terms", n.unsigned_abs())))
            }
            _ => {
                let policy = TruncationPolicy::adaptive(opts.tol);
                let value = qpochhammer_inf(z.0, q.0, &policy)?;
                Ok((value, format!("{} factors", single_order(&policy, q.0, z.0))))
            }
        },
        EvalCommand::MEntry { n, m, a, k, p, q, opts } => {
            let nome = nome(p, q, opts.tol)?;
            let value = m_entry(n, m, a.0, k.0, &nome)?;
            Ok((value, format!("theta factors at relative tolerance {:e}", opts.tol)))
        }
        EvalCommand::DEntry { m, a, b, c, p, q, opts } => {
            let nome = nome(p, q, opts.tol)?;
            let value = d_entry(m, a.0, b.0, c.0, &nome)?;
            Ok((value, format!("theta factors at relative tolerance {:e}", opts.tol)))
        }
    }
}

pub fn run(cmd: EvalCommand) -> Status {
    match evaluate(cmd) {
        Ok((value, truncation)) => {
            println!("{}", ComplexArg(value));
            println!("truncation: {truncation}");
            Status::Pass
        }
        Err(e) => {
            eprintln!("error: {e}");
            Status::Config
        }
    }
}
