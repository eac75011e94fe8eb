//! Built-in corpus: Church words over {0,1}, Church numerals, the word
//! reversal function, composition helpers, and the duplicating/exponential
//! family used as negative tests.

use super::alpha::alpha_normalize;
use super::ast::{FTerm, FType};
use super::parse::{parse_term, parse_type};

/// A named corpus term with a short human note.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub term: FTerm,
    pub note: String,
}

/// `forall a. (a -> a) -> (a -> a) -> a -> a` — the type of Church words.
pub fn word_type() -> FType {
    parse_type("forall a. (a -> a) -> (a -> a) -> a -> a").unwrap()
}

/// `forall a. (a -> a) -> a -> a` — the type of Church numerals.
pub fn nat_type() -> FType {
    parse_type("forall a. (a -> a) -> a -> a").unwrap()
}

/// The Church word for a string over {0,1}: the leftmost letter is applied
/// outermost. `word("10")` is `/\a. \s0. \s1. \x. s1 (s0 x)`.
pub fn word(s: &str) -> FTerm {
    assert!(s.chars().all(|c| c == '0' || c == '1'), "word must be over {{0,1}}");
    let mut body = String::from("x");
    for c in s.chars().rev() {
        body = format!("s{c} ({body})");
    }
    let src = format!("/\\a. \\s0:a -> a. \\s1:a -> a. \\x:a. {body}");
    parse_term(&src).unwrap()
}

/// The Church numeral for `n`.
pub fn church_nat(n: u32) -> FTerm {
    let mut body = String::from("z");
    for _ in 0..n {
        body = format!("s ({body})");
    }
    let src = format!("/\\a. \\s:a -> a. \\z:a. {body}");
    parse_term(&src).unwrap()
}

/// The polymorphic identity `/\a. \x:a. x`.
pub fn identity() -> FTerm {
    parse_term(r"/\a. \x:a. x").unwrap()
}

const WORD_TY: &str = "forall w. (w -> w) -> (w -> w) -> w -> w";
const NAT_TY: &str = "forall n. (n -> n) -> n -> n";

/// Word reversal by a single higher-order iteration at type `b -> b`.
pub fn rev() -> FTerm {
    let src = format!(
        "\\l:{WORD_TY}. /\\b. \\s0:b -> b. \\s1:b -> b. \
         l [b -> b] (\\a:b -> b. \\x:b. a (s0 x)) (\\a:b -> b. \\x:b. a (s1 x)) \
         ((/\\c. \\z:c. z) [b])"
    );
    parse_term(&src).unwrap()
}

/// `rev` applied to the Church word for `s`.
pub fn rev_applied(s: &str) -> FTerm {
    alpha_normalize(&FTerm::app(rev(), word(s)))
}

/// Word concatenation: iterates both words over shared step functions.
pub fn append() -> FTerm {
    let src = format!(
        "\\u:{WORD_TY}. \\v:{WORD_TY}. /\\a. \\s0:a -> a. \\s1:a -> a. \\x:a. \
         u [a] s0 s1 (v [a] s0 s1 x)"
    );
    parse_term(&src).unwrap()
}

/// Exchange the 0- and 1-step functions of a word.
pub fn swap01() -> FTerm {
    let src =
        format!("\\w:{WORD_TY}. /\\a. \\s0:a -> a. \\s1:a -> a. \\x:a. w [a] s1 s0 x");
    parse_term(&src).unwrap()
}

/// Numeral doubling by addition `n + n`; duplicates its argument.
pub fn double() -> FTerm {
    let src = format!("\\n:{NAT_TY}. /\\a. \\s:a -> a. \\x:a. n [a] s (n [a] s x)");
    parse_term(&src).unwrap()
}

/// Iterate the duplicating `double` over a numeral: `\n. n [N] double one`.
/// Computes 2^n, so no decoration can exist.
pub fn exp() -> FTerm {
    let src = format!(
        "\\n:{NAT_TY}. n [{NAT_TY}] \
         (\\m:{NAT_TY}. /\\a. \\s:a -> a. \\x:a. m [a] s (m [a] s x)) \
         (/\\a. \\s:a -> a. \\x:a. s x)"
    );
    parse_term(&src).unwrap()
}

/// The named corpus exposed by the `corpus` CLI subcommand and exercised by
/// the test suites.
pub fn corpus() -> Vec<CorpusEntry> {
    let entry = |name: &str, term: FTerm, note: &str| CorpusEntry {
        name: name.to_string(),
        term,
        note: note.to_string(),
    };
    vec![
        entry("id", identity(), "polymorphic identity"),
        entry("word_empty", word(""), "Church word for the empty word"),
        entry("word_1010", word("1010"), "Church word for 1010"),
        entry("rev", rev(), "word reversal by higher-order iteration"),
        entry("rev_1010", rev_applied("1010"), "rev applied to 1010"),
        entry("append", append(), "word concatenation"),
        entry("swap01", swap01(), "exchange the letter step functions"),
        entry("nat_2", church_nat(2), "Church numeral 2"),
        entry("double", double(), "numeral doubling n + n (duplicates n)"),
        entry("exp", exp(), "iterated doubling: computes 2^n, untypable"),
    ]
}

#[cfg(test)]
mod tests {
    use super::super::reduce::{beta_normalize, term_size};
    use super::super::typecheck::typecheck;
    use super::*;

    #[test]
    fn words_typecheck_at_word_type() {
        for s in ["", "0", "1", "1010", "0011"] {
            let ty = typecheck(&word(s)).unwrap();
            assert!(ty.alpha_eq(&word_type()), "word {s:?}");
        }
    }

    #[test]
    fn numerals_typecheck_at_nat_type() {
        for n in [0, 1, 2, 5] {
            let ty = typecheck(&church_nat(n)).unwrap();
            assert!(ty.alpha_eq(&nat_type()), "numeral {n}");
        }
    }

    #[test]
    fn rev_typechecks_at_word_to_word() {
        let ty = typecheck(&rev()).unwrap();
        let expect = FType::arrow(word_type(), word_type());
        assert!(ty.alpha_eq(&expect));
    }

    #[test]
    fn whole_corpus_typechecks() {
        for e in corpus() {
            typecheck(&e.term).unwrap_or_else(|err| panic!("{}: {err}", e.name));
        }
    }

    #[test]
    fn rev_reverses() {
        // independent oracle: rev(1010) must normalize to the word 0101
        let nf = beta_normalize(&rev_applied("1010"), 10_000).unwrap();
        assert!(nf.term.alpha_eq(&word("0101")), "got {:?}", nf.term);
        assert!(nf.steps > 0);
    }

    #[test]
    fn exp_computes_powers_of_two() {
        let t = alpha_normalize(&FTerm::app(exp(), church_nat(3)));
        let nf = beta_normalize(&t, 100_000).unwrap();
        assert!(nf.term.alpha_eq(&church_nat(8)));
    }

    #[test]
    fn append_concatenates() {
        let t = alpha_normalize(&FTerm::apps(append(), [word("10"), word("01")]));
        let nf = beta_normalize(&t, 10_000).unwrap();
        assert!(nf.term.alpha_eq(&word("1001")));
    }

    #[test]
    fn swap_swaps() {
        let t = alpha_normalize(&FTerm::app(swap01(), word("100")));
        let nf = beta_normalize(&t, 10_000).unwrap();
        assert!(nf.term.alpha_eq(&word("011")));
    }

    #[test]
    fn empty_word_shape() {
        let w = word("");
        assert_eq!(term_size(&w), 5); // /\a. \s0. \s1. \x. x
    }
}
