// scratch probe, not part of the crate
use dlal::constraints::gen_all;
use dlal::decor::{instantiate, star_inverse, depth, is_pi1, print_dlal_type, StarType};
use dlal::fterm::{corpus, typecheck, print_type, term_size};
use dlal::solver::{solve_all, SolveOutcome};
use dlal::verify::verify_all;

fn main() {
    for e in corpus() {
        let t0 = std::time::Instant::now();
        let gen = match gen_all(&e.term) {
            Ok(g) => g,
            Err(err) => { println!("{:12} GEN-ERR {err}", e.name); continue; }
        };
        let (b, l, m) = gen.store.class_counts();
        let nb = gen.store.bool_params.len();
        let ni = gen.store.int_params.len();
        let (outcome, _) = solve_all(&gen, None, false);
        match outcome {
            SolveOutcome::Solved { phi, .. } => {
                let dec = instantiate(&gen.typed.term, &phi).expect("admissible");
                let v = verify_all(&dec);
                let conc = dec.clone();
                let types = verify_all(&conc).ok();
                let conclusion = types.as_ref().map(|ty| ty[&dlal::fterm::Path::root()].clone());
                let dl = conclusion.as_ref().map(|c| star_inverse(&StarType::Lin(c.clone())).unwrap());
                println!("{:12} TYPABLE  atoms B{b}/L{l}/M{m} params b{nb}+i{ni} verify={} depth={:?} pi1={:?} type={} ({}ms, size {})",
                    e.name,
                    v.is_ok(),
                    dl.as_ref().map(depth),
                    dl.as_ref().map(is_pi1),
                    dl.as_ref().map(print_dlal_type).unwrap_or_default(),
                    t0.elapsed().as_millis(),
                    term_size(&e.term));
            }
            SolveOutcome::UnsatBoolean { conflict, .. } => {
                println!("{:12} UNTYPABLE(bool {conflict}) atoms B{b}/L{l}/M{m} ({}ms)", e.name, t0.elapsed().as_millis());
            }
            SolveOutcome::UnsatLinear { excess, conflicting, .. } => {
                println!("{:12} UNTYPABLE(linear, excess {excess}, {} atoms) B{b}/L{l}/M{m} ({}ms)", e.name, conflicting.len(), t0.elapsed().as_millis());
            }
            SolveOutcome::Internal(e2) => println!("{:12} INTERNAL {e2}", e.name),
        }
        let _ = (typecheck(&e.term), print_type(&typecheck(&e.term).unwrap()));
    }
}
