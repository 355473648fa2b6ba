//! Randomized invariants over generated types, processes and derivations.

use proptest::prelude::*;

use scpkit::linearity::lin_check;
use scpkit::metatheory::{check_weakening, generate_typed, GenConfig, Generated};
use scpkit::reduction::{enumerate_steps, equiv_check, equivalents, replay_equiv, EnumOptions};
use scpkit::syntax::binding::{all_names, freshen};
use scpkit::syntax::{
    alpha_eq, canonical, Calculus, CpProcess, ProcessExt, SessionType, TypingContext,
};
use scpkit::textio::{judgment, parse_cp_judgment, parse_scp_judgment, parse_type};
use scpkit::translation::{decode, encode, encode_derivation};
use scpkit::typing::{cp_check, scp_check, validate_cp, validate_scp, CpDerivation};

fn session_type() -> impl Strategy<Value = SessionType> {
    let atom = prop_oneof![Just(SessionType::One), Just(SessionType::Bot)];
    atom.prop_recursive(4, 32, 2, |inner| {
        (0..4u8, inner.clone(), inner).prop_map(|(k, a, b)| match k {
            0 => SessionType::tensor(a, b),
            1 => SessionType::par(a, b),
            2 => SessionType::plus(a, b),
            _ => SessionType::with(a, b),
        })
    })
}

/// A generated CP judgment and its derivation.
fn typed_cp() -> impl Strategy<Value = (TypingContext, CpProcess, CpDerivation)> {
    (any::<u64>(), 1..8usize, 1..3usize).prop_map(|(seed, max_depth, type_depth)| {
        match generate_typed(&GenConfig {
            seed,
            max_depth,
            type_depth,
            calculus: Calculus::Cp,
        })
        .expect("generator succeeds")
        {
            Generated::Cp {
                context,
                process,
                derivation,
            } => (context, process, derivation),
            Generated::Scp { .. } => unreachable!("asked for CP"),
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn dual_is_an_involution(a in session_type()) {
        prop_assert_eq!(a.dual().dual(), a.clone());
        prop_assert_ne!(a.dual(), a);
    }

    #[test]
    fn types_print_and_parse_back(a in session_type()) {
        prop_assert_eq!(parse_type(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn judgments_print_and_parse_back((ctx, p, _) in typed_cp()) {
        let (c2, p2) = parse_cp_judgment(&judgment(&ctx, &p)).unwrap();
        prop_assert!(c2.same_bindings(&ctx));
        prop_assert!(alpha_eq(&p2, &p));
        let e = encode(&p);
        let (c3, e2) = parse_scp_judgment(&judgment(&ctx, &e)).unwrap();
        prop_assert!(c3.same_bindings(&ctx));
        prop_assert!(alpha_eq(&e2, &e));
    }

    #[test]
    fn generated_derivations_are_checker_output((ctx, p, d) in typed_cp()) {
        prop_assert!(validate_cp(&d));
        prop_assert!(cp_check(&ctx, &p).unwrap().same_as(&d));
        let (sd, lins) = encode_derivation(&d).unwrap();
        prop_assert!(validate_scp(&sd));
        prop_assert!(scp_check(&ctx, &sd.process).unwrap().same_as(&sd));
        prop_assert_eq!(lins.keys().cloned().collect::<Vec<_>>(), ctx.names().into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn translation_round_trips((_, p, _) in typed_cp()) {
        prop_assert!(alpha_eq(&decode(&encode(&p)), &p));
    }

    #[test]
    fn freshening_preserves_alpha_class((ctx, p, _) in typed_cp()) {
        let q = freshen(&p, &all_names(&p));
        prop_assert_eq!(canonical(&q), canonical(&p));
        prop_assert!(cp_check(&ctx, &q).is_some());
    }

    #[test]
    fn equivalence_is_symmetric_and_replayable((_, p, _) in typed_cp()) {
        let e = encode(&p);
        for (q, d) in equivalents(&e, 2) {
            prop_assert!(d.validate());
            prop_assert!(alpha_eq(&replay_equiv(&d, &e).unwrap(), &q));
            prop_assert!(equiv_check(&q, &e, 2).is_some());
        }
    }

    #[test]
    fn steps_replay_to_their_targets((_, p, _) in typed_cp()) {
        let opts = EnumOptions::with_closure(2);
        let e = encode(&p);
        for s in enumerate_steps(&e, opts) {
            prop_assert!(s.is_consistent());
            prop_assert!(alpha_eq(&s.replay().unwrap(), &s.target));
        }
        let again: Vec<_> = enumerate_steps(&e, opts).into_iter().map(|s| s.target).collect();
        let first: Vec<_> = enumerate_steps(&e, opts).into_iter().map(|s| s.target).collect();
        prop_assert_eq!(again, first);
    }

    #[test]
    fn linear_names_are_free((_, p, _) in typed_cp()) {
        let e = encode(&p);
        let free = e.free_names();
        for x in all_names(&e) {
            if lin_check(&x, &e).is_some() {
                prop_assert!(free.contains(&x), "lin({}; {}) but not free", x, e);
            }
        }
    }

    #[test]
    fn weakening_round_trips((_, p, d) in typed_cp()) {
        let _ = p;
        let (sd, _) = encode_derivation(&d).unwrap();
        let r = check_weakening(&sd);
        prop_assert!(r.is_ok(), "{}", r);
    }
}
