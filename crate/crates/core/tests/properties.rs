use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gzloc::cat::{CompositionTable, FiniteCategory, SigmaSet};
use gzloc::corpus::{sample_category, sigma_from_mask, Budget};
use gzloc::format::{parse, serialize};
use gzloc::fractions::{all_symbols, build_fraction_category, check_left_fraction_axioms, compose_symbols, lf_equiv};
use gzloc::words::{enumerate_words, reduce_word, LocalizedPresentation};

fn random_category(seed: u64, n_obj: usize, n_mor: usize) -> Option<FiniteCategory> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut budget = Budget::new(20_000);
    sample_category(n_obj, n_mor.max(n_obj), &mut rng, &mut budget).map(|r| r.to_category())
}

/// A random category with a random Σ admitting left fractions.
fn random_instance(seed: u64, n_obj: usize, n_mor: usize, mask: u64) -> Option<(Arc<FiniteCategory>, SigmaSet)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut budget = Budget::new(20_000);
    let raw = sample_category(n_obj, n_mor.max(n_obj), &mut rng, &mut budget)?;
    let k = raw.n_mor() - raw.n_obj;
    let marks = sigma_from_mask(&raw, mask & ((1u64 << k) - 1));
    let c = raw.to_category();
    let s = SigmaSet::new(&c, c.morphisms().filter(|m| marks[m.index()]));
    check_left_fraction_axioms(&c, &s)
        .has_left_fractions()
        .then(|| (Arc::new(c), s))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_tables_are_categories(seed in any::<u64>(), n_obj in 1usize..4, n_mor in 1usize..8) {
        if let Some(c) = random_category(seed, n_obj, n_mor) {
            prop_assert_eq!(c.validate(), Ok(()));
            prop_assert_eq!(c.opposite().opposite(), c.clone());
            let text = serialize(&c, &SigmaSet::identities(&c));
            let back = parse(&text).unwrap();
            prop_assert_eq!(back.category, c);
        }
    }

    #[test]
    fn projection_inverts_sigma(seed in any::<u64>(), n_obj in 1usize..4, n_mor in 2usize..7, mask in any::<u64>()) {
        if let Some((c, s)) = random_instance(seed, n_obj, n_mor, mask) {
            let frac = build_fraction_category(&c, &s).unwrap();
            let l = &frac.category;
            for q in s.members() {
                let inv = frac.inverse_of(q).unwrap();
                prop_assert_eq!(l.comp(inv, frac.projection.mor(q)), l.identity(c.source(q)));
            }
        }
    }

    #[test]
    fn composition_respects_equivalence(seed in any::<u64>(), n_obj in 1usize..4, n_mor in 2usize..7, mask in any::<u64>()) {
        if let Some((c, s)) = random_instance(seed, n_obj, n_mor, mask) {
            let syms = all_symbols(&c, &s);
            for &a in &syms {
                for &a2 in syms.iter().filter(|&&x| lf_equiv(&c, &s, a, x).is_some()) {
                    for &b in syms.iter().filter(|b| b.source(&c) == a.target(&c)) {
                        let x = compose_symbols(&c, &s, a, b).unwrap();
                        let y = compose_symbols(&c, &s, a2, b).unwrap();
                        prop_assert!(lf_equiv(&c, &s, x, y).is_some());
                    }
                }
            }
        }
    }

    #[test]
    fn reduction_preserves_class(seed in any::<u64>(), n_obj in 1usize..3, n_mor in 2usize..6, mask in any::<u64>()) {
        if let Some((c, s)) = random_instance(seed, n_obj, n_mor, mask) {
            let lp = LocalizedPresentation::new(c.clone(), s.clone());
            for w in enumerate_words(&c, &s, 3) {
                let r = reduce_word(&c, &s, &w);
                prop_assert!(r.len() <= w.len());
                prop_assert_eq!(lp.fraction_class(&r), lp.fraction_class(&w));
            }
        }
    }
}
