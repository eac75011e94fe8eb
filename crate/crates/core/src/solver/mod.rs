//! Constraint solving: minimal booleans by saturation, guard substitution,
//! exact-rational linear feasibility, and integer scaling.
//!
//! Completeness rests on the minimal-boolean property: if the whole store
//! has any solution, it has one whose boolean part is the minimal solution
//! of the boolean class, so substituting the minimal booleans into the mixed
//! guards loses nothing. Rational feasibility then suffices because the
//! solution set is closed under multiplication by positive integers.

mod boolean;
mod simplex;

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

pub use boolean::{apply_guards, solve_boolean_minimal, BoolAssignment, BoolUnsat, DerivationStep};
pub use simplex::{Infeasible, Rel, Row, RowOrigin, SimplexError};

use crate::constraints::{type_combinations, Atom, Constraint, ConstraintClass, GenOutput};
use crate::decor::{check_admissible, Instantiation, IntParam, LinComb};

/// Extra constraints injected by `--goal`: unification atoms tying the
/// conclusion's parameters to a user-supplied decoration, plus integer pins
/// for the goal's own fresh parameters.
#[derive(Debug, Clone, Default)]
pub struct GoalConstraints {
    pub atoms: Vec<Constraint>,
    pub pins: Vec<(IntParam, i64)>,
}

#[derive(Debug, Clone)]
pub enum SolveOutcome {
    Solved { phi: Instantiation, derivation: Vec<DerivationStep> },
    UnsatBoolean { conflict: String, derivation: Vec<DerivationStep> },
    UnsatLinear { excess: String, conflicting: Vec<Constraint>, goal_involved: bool },
    Internal(String),
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveStats {
    pub boolean_ms: f64,
    pub linear_ms: f64,
}

/// Multiply a rational point by the least common multiple of its
/// denominators. All generated atoms are homogeneous or of the form
/// `c >= k` with k in {0, 1}, so positive integer scaling preserves them.
pub fn scale_to_integers(
    point: &BTreeMap<IntParam, BigRational>,
) -> Result<BTreeMap<IntParam, i64>, String> {
    let mut lcm = BigInt::one();
    for v in point.values() {
        lcm = lcm.lcm(v.denom());
    }
    let mut out = BTreeMap::new();
    for (p, v) in point {
        let scaled = v * BigRational::from(lcm.clone());
        debug_assert!(scaled.is_integer());
        let as_int = scaled
            .to_integer()
            .to_i64()
            .ok_or_else(|| format!("scaled value for {p} overflows 64 bits"))?;
        out.insert(*p, as_int);
    }
    Ok(out)
}

/// Decide the whole store: minimal booleans, guard substitution, rational
/// feasibility, integer scaling. Returns an admissible integer instantiation
/// or the unsatisfiable phase with its certificate.
pub fn solve_all(
    gen: &GenOutput,
    goal: Option<&GoalConstraints>,
    minimize: bool,
) -> (SolveOutcome, SolveStats) {
    let mut stats = SolveStats::default();
    let store = &gen.store;

    let empty = GoalConstraints::default();
    let goal = goal.unwrap_or(&empty);

    // boolean phase
    let t0 = Instant::now();
    let mut bool_refs: Vec<&Constraint> =
        store.atoms_of_class(ConstraintClass::Boolean);
    bool_refs.extend(goal.atoms.iter().filter(|c| c.atom.class() == ConstraintClass::Boolean));
    let (psi, derivation) = match solve_boolean_minimal(&bool_refs) {
        Ok(ok) => ok,
        Err(unsat) => {
            stats.boolean_ms = t0.elapsed().as_secs_f64() * 1e3;
            return (
                SolveOutcome::UnsatBoolean {
                    conflict: unsat.conflict.to_string(),
                    derivation: unsat.derivation,
                },
                stats,
            );
        }
    };
    stats.boolean_ms = t0.elapsed().as_secs_f64() * 1e3;

    // linear phase
    let t1 = Instant::now();
    let mut vars: Vec<IntParam> = store.int_params.iter().copied().collect();
    for c in &goal.atoms {
        if let Atom::LinEq(c1, c2) = &c.atom {
            vars.extend(c1.params());
            vars.extend(c2.params());
        }
    }
    vars.extend(goal.pins.iter().map(|(p, _)| *p));
    vars.sort();
    vars.dedup();
    let var_index =
        |p: IntParam| -> usize { vars.binary_search(&p).expect("variable in index") };

    let diff_coeffs = |c1: &LinComb, c2: &LinComb| -> Vec<(usize, i64)> {
        let mut terms: BTreeMap<usize, i64> = BTreeMap::new();
        for (p, k) in c1.terms() {
            *terms.entry(var_index(p)).or_insert(0) += k as i64;
        }
        for (p, k) in c2.terms() {
            *terms.entry(var_index(p)).or_insert(0) -= k as i64;
        }
        terms.into_iter().filter(|(_, k)| *k != 0).collect()
    };
    let comb_coeffs = |c: &LinComb| -> Vec<(usize, i64)> {
        c.terms().map(|(p, k)| (var_index(p), k as i64)).collect()
    };

    // deduplicate identical rows, merging origins
    let mut row_map: BTreeMap<(Vec<(usize, i64)>, bool, i64), Vec<RowOrigin>> = BTreeMap::new();
    let mut add_row = |coeffs: Vec<(usize, i64)>, rel: Rel, rhs: i64, origin: RowOrigin| {
        row_map.entry((coeffs, rel == Rel::Eq, rhs)).or_default().push(origin);
    };
    for (idx, c) in store.constraints.iter().enumerate() {
        match &c.atom {
            Atom::LinEq(c1, c2) => {
                add_row(diff_coeffs(c1, c2), Rel::Eq, 0, RowOrigin::Constraint(idx))
            }
            Atom::LinGeq(comb, k) => {
                add_row(comb_coeffs(comb), Rel::Geq, *k as i64, RowOrigin::Constraint(idx))
            }
            Atom::LinEqZero(comb) => {
                add_row(comb_coeffs(comb), Rel::Eq, 0, RowOrigin::Constraint(idx))
            }
            Atom::Mixed(b, comb) if psi.value(*b) => {
                add_row(comb_coeffs(comb), Rel::Geq, 1, RowOrigin::Constraint(idx))
            }
            _ => {}
        }
    }
    for c in &goal.atoms {
        if let Atom::LinEq(c1, c2) = &c.atom {
            add_row(diff_coeffs(c1, c2), Rel::Eq, 0, RowOrigin::Goal(c.atom.to_string()));
        }
    }
    for (p, k) in &goal.pins {
        // pins may demand any nonnegative count
        add_row(vec![(var_index(*p), 1)], Rel::Eq, *k, RowOrigin::Goal(format!("{p} = {k}")));
    }
    let rows: Vec<Row> = row_map
        .into_iter()
        .map(|((coeffs, eq, rhs), origin)| Row {
            coeffs,
            rel: if eq { Rel::Eq } else { Rel::Geq },
            rhs,
            origin,
        })
        .collect();

    let objective = if minimize {
        let mut weights: BTreeMap<IntParam, i64> = BTreeMap::new();
        for comb in type_combinations(&gen.typed.term) {
            for (p, k) in comb.terms() {
                *weights.entry(p).or_insert(0) += k as i64;
            }
        }
        Some(
            vars.iter()
                .map(|p| BigRational::from(BigInt::from(weights.get(p).copied().unwrap_or(0))))
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };

    let solved = match simplex::solve(vars.len(), &rows, objective.as_deref()) {
        Ok(r) => r,
        Err(e) => return (SolveOutcome::Internal(e.to_string()), stats),
    };
    stats.linear_ms = t1.elapsed().as_secs_f64() * 1e3;

    let point = match solved {
        Ok(point) => point,
        Err(inf) => {
            let mut conflicting = Vec::new();
            let mut goal_involved = false;
            for origin in &inf.origins {
                match origin {
                    RowOrigin::Constraint(i) => conflicting.push(store.constraints[*i].clone()),
                    RowOrigin::Goal(_) => goal_involved = true,
                }
            }
            return (
                SolveOutcome::UnsatLinear {
                    excess: inf.excess.to_string(),
                    conflicting,
                    goal_involved,
                },
                stats,
            );
        }
    };

    let rational: BTreeMap<IntParam, BigRational> =
        vars.iter().copied().zip(point).collect();
    let ints = match scale_to_integers(&rational) {
        Ok(ints) => ints,
        Err(e) => return (SolveOutcome::Internal(e), stats),
    };

    let mut phi = Instantiation::new();
    for b in psi.trues() {
        phi.set_bool(b, true);
    }
    for b in store.bool_params.iter() {
        if !psi.value(*b) {
            phi.set_bool(*b, false);
        }
    }
    for (p, v) in &ints {
        phi.set_int(*p, *v);
    }
    for p in store.int_params.iter() {
        if !ints.contains_key(p) {
            phi.set_int(*p, 0);
        }
    }

    // soundness: the returned instantiation must satisfy every atom exactly
    // and be admissible for the decoration
    if let Some(bad) = store.first_violated(&phi) {
        return (
            SolveOutcome::Internal(format!("solution violates stored constraint: {bad}")),
            stats,
        );
    }
    for c in &goal.atoms {
        if !c.atom.is_satisfied(&phi) {
            return (
                SolveOutcome::Internal(format!("solution violates goal constraint: {}", c.atom)),
                stats,
            );
        }
    }
    for (p, k) in &goal.pins {
        if phi.int_value(*p) != *k {
            return (SolveOutcome::Internal(format!("goal pin {p} = {k} violated")), stats);
        }
    }
    if let Err(e) = check_admissible(&gen.typed.term, &phi) {
        return (SolveOutcome::Internal(format!("solution is not admissible: {e}")), stats);
    }

    (SolveOutcome::Solved { phi, derivation }, stats)
}
