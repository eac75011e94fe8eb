use thiserror::Error;

use crate::constraints::{gen_all, Atom};
use crate::decor::{free_decoration, instantiate, BoolParam, Instantiation, IntParam};
use crate::fterm::FTerm;

use super::check::verify_all;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SearchCapExceeded {
    #[error("search space of {space} assignments exceeds the cap of {cap}")]
    Space { space: u128, cap: u128 },
    #[error("pruned search exceeded the node budget of {cap}")]
    Nodes { cap: u64 },
}

/// Exhaustively enumerate instantiations with integer parameters in
/// `[-bound, bound]` and booleans in {0, 1}, keeping those that are
/// admissible and pass every condition check. The full product must fit
/// under `cap`.
pub fn bounded_search(
    m: &FTerm,
    bound: i64,
    cap: u128,
) -> Result<Vec<Instantiation>, SearchCapExceeded> {
    let pterm = free_decoration(m);
    let (bools, ints) = pterm.parameters();
    let bools: Vec<BoolParam> = bools.into_iter().collect();
    let ints: Vec<IntParam> = ints.into_iter().collect();

    let width = 2 * bound as u128 + 1;
    let mut space: u128 = 1;
    for _ in 0..ints.len() {
        space = space.checked_mul(width).ok_or(SearchCapExceeded::Space {
            space: u128::MAX,
            cap,
        })?;
    }
    for _ in 0..bools.len() {
        space = space
            .checked_mul(2)
            .ok_or(SearchCapExceeded::Space { space: u128::MAX, cap })?;
    }
    if space > cap {
        return Err(SearchCapExceeded::Space { space, cap });
    }

    let mut found = Vec::new();
    let mut int_vals = vec![-bound; ints.len()];
    let mut bool_vals = vec![false; bools.len()];
    loop {
        let mut phi = Instantiation::new();
        for (p, v) in bools.iter().zip(&bool_vals) {
            phi.set_bool(*p, *v);
        }
        for (p, v) in ints.iter().zip(&int_vals) {
            phi.set_int(*p, *v);
        }
        if let Ok(t) = instantiate(&pterm, &phi) {
            if verify_all(&t).is_ok() {
                found.push(phi);
            }
        }
        // odometer: booleans advance fastest
        let mut carried = true;
        for v in bool_vals.iter_mut() {
            if !*v {
                *v = true;
                carried = false;
                break;
            }
            *v = false;
        }
        if carried {
            for v in int_vals.iter_mut() {
                if *v < bound {
                    *v += 1;
                    carried = false;
                    break;
                }
                *v = -bound;
            }
        }
        if carried {
            return Ok(found);
        }
    }
}

/// Same answer as [`bounded_search`] computed by depth-first search over the
/// generated constraint atoms with interval propagation, so that large
/// parameter spaces stay tractable. Every candidate that survives the atoms
/// is confirmed by admissibility and the condition checks before being
/// returned.
pub fn bounded_search_pruned(
    m: &FTerm,
    bound: i64,
    node_cap: u64,
) -> Result<Vec<Instantiation>, SearchCapExceeded> {
    let gen = gen_all(m).expect("bounded search requires a typechecked term");
    let pterm = &gen.typed.term;
    let (bools, ints) = pterm.parameters();
    let bools: Vec<BoolParam> = bools.into_iter().collect();
    let ints: Vec<IntParam> = ints.into_iter().collect();
    let bool_index = |p: BoolParam| bools.binary_search(&p).unwrap();
    let int_index = |p: IntParam| ints.binary_search(&p).unwrap();

    enum CAtom {
        BConst(usize, bool),
        BEq(usize, usize),
        BImpl(usize, usize),
        Lin { terms: Vec<(usize, i64)>, eq: bool, k: i64 },
        Mixed { b: usize, terms: Vec<(usize, i64)> },
    }

    let mut atoms = Vec::new();
    for c in &gen.store.constraints {
        let catom = match &c.atom {
            Atom::BoolConst(b, v) => CAtom::BConst(bool_index(*b), *v),
            Atom::BoolEq(a, b) => CAtom::BEq(bool_index(*a), bool_index(*b)),
            Atom::BoolImpl(a, b) => CAtom::BImpl(bool_index(*a), bool_index(*b)),
            Atom::LinEq(c1, c2) => {
                let mut terms: Vec<(usize, i64)> =
                    c1.terms().map(|(p, k)| (int_index(p), k as i64)).collect();
                for (p, k) in c2.terms() {
                    let idx = int_index(p);
                    match terms.iter_mut().find(|(j, _)| *j == idx) {
                        Some(t) => t.1 -= k as i64,
                        None => terms.push((idx, -(k as i64))),
                    }
                }
                terms.retain(|(_, a)| *a != 0);
                CAtom::Lin { terms, eq: true, k: 0 }
            }
            Atom::LinGeq(c, k) => CAtom::Lin {
                terms: c.terms().map(|(p, k)| (int_index(p), k as i64)).collect(),
                eq: false,
                k: *k as i64,
            },
            Atom::LinEqZero(c) => CAtom::Lin {
                terms: c.terms().map(|(p, k)| (int_index(p), k as i64)).collect(),
                eq: true,
                k: 0,
            },
            Atom::Mixed(b, c) => CAtom::Mixed {
                b: bool_index(*b),
                terms: c.terms().map(|(p, k)| (int_index(p), k as i64)).collect(),
            },
        };
        atoms.push(catom);
    }

    #[derive(Clone)]
    struct State {
        bdom: Vec<Option<bool>>,
        idom: Vec<(i64, i64)>,
    }

    fn term_range(a: i64, (lo, hi): (i64, i64)) -> (i64, i64) {
        if a >= 0 {
            (a * lo, a * hi)
        } else {
            (a * hi, a * lo)
        }
    }

    fn div_ceil(n: i64, d: i64) -> i64 {
        debug_assert!(d > 0);
        n.div_euclid(d) + i64::from(n.rem_euclid(d) != 0)
    }

    fn div_floor(n: i64, d: i64) -> i64 {
        debug_assert!(d > 0);
        n.div_euclid(d)
    }

    // tighten a row `sum terms >= k`, and also `<= k` when eq
    fn narrow_row(st: &mut State, terms: &[(usize, i64)], eq: bool, k: i64) -> Result<bool, ()> {
        let mut changed = false;
        let (mut min_s, mut max_s) = (0i64, 0i64);
        for (j, a) in terms {
            let (lo, hi) = term_range(*a, st.idom[*j]);
            min_s += lo;
            max_s += hi;
        }
        if max_s < k || (eq && min_s > k) {
            return Err(());
        }
        for (j, a) in terms {
            let (tlo, thi) = term_range(*a, st.idom[*j]);
            let rest_max = max_s - thi;
            let rest_min = min_s - tlo;
            let (mut lo, mut hi) = st.idom[*j];
            // a*x >= k - rest_max
            let l = k - rest_max;
            if *a > 0 {
                lo = lo.max(div_ceil(l, *a));
            } else {
                hi = hi.min(div_floor(-l, -*a));
            }
            if eq {
                // a*x <= k - rest_min
                let u = k - rest_min;
                if *a > 0 {
                    hi = hi.min(div_floor(u, *a));
                } else {
                    lo = lo.max(div_ceil(-u, -*a));
                }
            }
            if lo > hi {
                return Err(());
            }
            if (lo, hi) != st.idom[*j] {
                st.idom[*j] = (lo, hi);
                changed = true;
            }
        }
        Ok(changed)
    }

    fn set_bool(st: &mut State, i: usize, v: bool) -> Result<bool, ()> {
        match st.bdom[i] {
            None => {
                st.bdom[i] = Some(v);
                Ok(true)
            }
            Some(x) if x == v => Ok(false),
            Some(_) => Err(()),
        }
    }

    let propagate = |st: &mut State| -> Result<(), ()> {
        loop {
            let mut changed = false;
            for atom in &atoms {
                match atom {
                    CAtom::BConst(i, v) => changed |= set_bool(st, *i, *v)?,
                    CAtom::BEq(i, j) => {
                        if let Some(v) = st.bdom[*i] {
                            changed |= set_bool(st, *j, v)?;
                        }
                        if let Some(v) = st.bdom[*j] {
                            changed |= set_bool(st, *i, v)?;
                        }
                    }
                    CAtom::BImpl(i, j) => {
                        if st.bdom[*i] == Some(true) {
                            changed |= set_bool(st, *j, true)?;
                        }
                        if st.bdom[*j] == Some(false) {
                            changed |= set_bool(st, *i, false)?;
                        }
                    }
                    CAtom::Lin { terms, eq, k } => {
                        changed |= narrow_row(st, terms, *eq, *k)?;
                    }
                    CAtom::Mixed { b, terms } => match st.bdom[*b] {
                        Some(true) => changed |= narrow_row(st, terms, false, 1)?,
                        Some(false) => {}
                        None => {
                            let max_s: i64 = terms
                                .iter()
                                .map(|(j, a)| term_range(*a, st.idom[*j]).1)
                                .sum();
                            if max_s < 1 {
                                changed |= set_bool(st, *b, false)?;
                            }
                        }
                    },
                }
            }
            if !changed {
                return Ok(());
            }
        }
    };

    struct Dfs<'a> {
        nodes: u64,
        cap: u64,
        found: Vec<(Vec<bool>, Vec<i64>)>,
        propagate: &'a dyn Fn(&mut State) -> Result<(), ()>,
    }

    impl Dfs<'_> {
        fn run(&mut self, st: State) -> Result<(), SearchCapExceeded> {
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(SearchCapExceeded::Nodes { cap: self.cap });
            }
            // branch on the first unfixed boolean, else the narrowest
            // unfixed integer interval
            if let Some(i) = st.bdom.iter().position(Option::is_none) {
                for v in [false, true] {
                    let mut next = st.clone();
                    next.bdom[i] = Some(v);
                    if (self.propagate)(&mut next).is_ok() {
                        self.run(next)?;
                    }
                }
                return Ok(());
            }
            let unfixed = st
                .idom
                .iter()
                .enumerate()
                .filter(|(_, (lo, hi))| lo < hi)
                .min_by_key(|(_, (lo, hi))| hi - lo);
            match unfixed {
                Some((j, (lo, hi))) => {
                    for v in *lo..=*hi {
                        let mut next = st.clone();
                        next.idom[j] = (v, v);
                        if (self.propagate)(&mut next).is_ok() {
                            self.run(next)?;
                        }
                    }
                    Ok(())
                }
                None => {
                    let bools: Vec<bool> = st.bdom.iter().map(|b| b.unwrap()).collect();
                    let ints: Vec<i64> = st.idom.iter().map(|(lo, _)| *lo).collect();
                    self.found.push((bools, ints));
                    Ok(())
                }
            }
        }
    }

    let mut init = State {
        bdom: vec![None; bools.len()],
        idom: vec![(-bound, bound); ints.len()],
    };
    let mut dfs = Dfs { nodes: 0, cap: node_cap, found: Vec::new(), propagate: &propagate };
    if propagate(&mut init).is_ok() {
        dfs.run(init)?;
    }

    let mut out = Vec::new();
    for (bvals, ivals) in dfs.found {
        let mut phi = Instantiation::new();
        for (p, v) in bools.iter().zip(&bvals) {
            phi.set_bool(*p, *v);
        }
        for (p, v) in ints.iter().zip(&ivals) {
            phi.set_int(*p, *v);
        }
        // the atoms characterize the conditions; confirm each candidate
        // against the independent checker anyway
        if let Ok(t) = instantiate(pterm, &phi) {
            if verify_all(&t).is_ok() {
                out.push(phi);
            }
        }
    }
    out.sort_by_key(|phi| {
        (
            ints.iter().map(|p| phi.int_value(*p)).collect::<Vec<_>>(),
            bools.iter().map(|p| phi.bool_value(*p)).collect::<Vec<_>>(),
        )
    });
    Ok(out)
}
