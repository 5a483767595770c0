//! A quantum Turing machine whose head performs a Hadamard walk, run on a
//! truncated tape both directly and through the dilation.
//!
//!     cargo run --release --example turing_machine

use sparse_unitary::models::qtm::{
    qtm_run, qtm_step_bound, qtm_truncate, qtm_validate, QtmInput, QtmMethod, QtmRunOptions, TransitionRule,
};
use sparse_unitary::trotter::Order;

fn main() -> sparse_unitary::Result<()> {
    let rule = TransitionRule::hadamard_walk(1)?;
    println!("rule:\n{}", rule.to_json()?);
    let report = qtm_validate(&rule, 3)?;
    println!("interior defect {:.1e}, with boundary {:.3}", report.interior_defect, report.full_defect);
    let m = qtm_truncate(&rule, 3)?;
    println!("radius 3: {} configurations, at most {} nonzeros per row", m.dim(), m.max_row_nnz());

    let input = QtmInput { tape: vec![], state: 0 };
    let steps = 4;
    let direct = qtm_run(&rule, &input, steps, &QtmRunOptions::default())?;
    let via = QtmRunOptions {
        method: QtmMethod::Dilation { epsilon: 1e-4, order: Order::Second },
        ..Default::default()
    };
    let dilated = qtm_run(&rule, &input, steps, &via)?;
    println!(
        "{steps} steps at radius {}: per-step bound {:.3e}, direct/dilation distance {:.3e}",
        direct.radius(),
        qtm_step_bound(direct.radius()),
        direct.state.distance(&dilated.state)?
    );
    for (idx, a) in direct.state.amps().iter().enumerate().filter(|(_, a)| a.norm() > 1e-12) {
        let c = direct.machine.decode(idx);
        println!("  head {:>2} state q{}  p = {:.4}", c.head, c.state, a.norm_sqr());
    }

    let random = TransitionRule::random_unidirectional(2, 2, 7)?;
    let input = QtmInput { tape: vec![1, 0, 1], state: 0 };
    let run = qtm_run(&random, &input, 3, &QtmRunOptions::default())?;
    println!("random rule, 3 steps: norm deviation {:.1e} (bound {:.3e})", run.norm_deviation, run.bound);
    Ok(())
}
