//! Seeded random construction of typed processes.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linearity::LinWitnesses;
use crate::syntax::binding::size;
use crate::syntax::{Calculus, CpProcess, Name, ScpProcess, SessionType, TypingContext};
use crate::translation::{encode, encode_derivation};
use crate::typing::{cp_check, CpDerivation, ScpDerivation};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GenConfig {
    pub seed: u64,
    /// Maximum height of the derivation.
    pub max_depth: usize,
    /// Maximum depth of types at cuts and at the root.
    pub type_depth: usize,
    pub calculus: Calculus,
}

#[derive(Clone, Debug)]
pub enum Generated {
    Cp {
        context: TypingContext,
        process: CpProcess,
        derivation: CpDerivation,
    },
    Scp {
        context: TypingContext,
        process: ScpProcess,
        derivation: ScpDerivation,
        lins: LinWitnesses,
    },
}

impl Generated {
    pub fn context(&self) -> &TypingContext {
        match self {
            Generated::Cp { context, .. } | Generated::Scp { context, .. } => context,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("max_depth and type_depth must be at least 1")]
    BadConfig,
    #[error("no process generated after {0} attempts")]
    Exhausted(usize),
}

const ATTEMPTS: usize = 10_000;

type Entries = Vec<(Name, SessionType)>;

struct Builder {
    rng: ChaCha8Rng,
    type_depth: usize,
    next: u32,
    /// Free names introduced during construction, with their types.
    extra: Entries,
}

impl Builder {
    fn name(&mut self) -> Name {
        self.next += 1;
        Name::new("c", self.next)
    }

    fn ty(&mut self, depth: usize) -> SessionType {
        if depth <= 1 || self.rng.gen_bool(0.4) {
            return if self.rng.gen() {
                SessionType::One
            } else {
                SessionType::Bot
            };
        }
        let a = self.ty(depth - 1);
        let b = self.ty(depth - 1);
        match self.rng.gen_range(0..4) {
            0 => SessionType::tensor(a, b),
            1 => SessionType::par(a, b),
            2 => SessionType::plus(a, b),
            _ => SessionType::with(a, b),
        }
    }

    fn split(&mut self, entries: Entries) -> (Entries, Entries) {
        entries.into_iter().partition(|_| self.rng.gen())
    }

    fn open(&mut self) -> Entries {
        let x = self.name();
        let a = self.ty(self.type_depth);
        self.extra.push((x.clone(), a.clone()));
        vec![(x, a)]
    }

    /// A process of derivation height at most `d` typed by `req` plus any
    /// names it adds to `extra`.
    fn build(&mut self, req: Entries, d: usize) -> Option<CpProcess> {
        self.build_biased(req, d, 0.2)
    }

    /// `cut_bias` is the probability of trying a cut at this node.
    fn build_biased(&mut self, req: Entries, d: usize, cut_bias: f64) -> Option<CpProcess> {
        use SessionType as T;
        let req = if req.is_empty() { self.open() } else { req };
        let axiom_fits = match req.as_slice() {
            [_] => true,
            [(_, a), (_, b)] => *b == a.dual(),
            _ => false,
        };
        if axiom_fits && (d <= 1 || self.rng.gen_bool(0.15)) {
            return Some(match req.as_slice() {
                [(x, T::One)] => CpProcess::Close(x.clone()),
                [(x, a)] => {
                    let y = self.name();
                    self.extra.push((y.clone(), a.dual()));
                    CpProcess::Fwd(x.clone(), y)
                }
                [(x, _), (y, _)] => CpProcess::Fwd(x.clone(), y.clone()),
                _ => unreachable!(),
            });
        }
        if d <= 1 {
            return None;
        }
        if self.rng.gen_bool(cut_bias) {
            let z = self.name();
            let a = self.ty(self.type_depth);
            let (mut l, mut r) = self.split(req);
            l.push((z.clone(), a.clone()));
            r.push((z.clone(), a.dual()));
            let l = self.build(l, d - 1)?;
            let r = self.build(r, d - 1)?;
            return Some(CpProcess::cut(z, a, l, r));
        }
        let candidates: Vec<usize> = (0..req.len()).filter(|&i| req[i].1 != T::One).collect();
        let &i = candidates.choose(&mut self.rng)?;
        let mut rest = req;
        let (x, a) = rest.remove(i);
        match a {
            T::One => unreachable!(),
            T::Bot => Some(CpProcess::wait(x, self.build(rest, d - 1)?)),
            T::Tensor(b, c) => {
                let y = self.name();
                let (mut l, mut r) = self.split(rest);
                l.push((y.clone(), (*b).clone()));
                r.push((x.clone(), (*c).clone()));
                let l = self.build(l, d - 1)?;
                let r = self.build(r, d - 1)?;
                Some(CpProcess::out(x, y, l, r))
            }
            T::Par(b, c) => {
                let y = self.name();
                rest.push((x.clone(), (*c).clone()));
                rest.push((y.clone(), (*b).clone()));
                Some(CpProcess::inp(x, y, self.build(rest, d - 1)?))
            }
            T::Plus(b, c) => {
                if self.rng.gen() {
                    rest.push((x.clone(), (*b).clone()));
                    Some(CpProcess::inl(x, self.build(rest, d - 1)?))
                } else {
                    rest.push((x.clone(), (*c).clone()));
                    Some(CpProcess::inr(x, self.build(rest, d - 1)?))
                }
            }
            T::With(b, c) => {
                let mut l = rest.clone();
                l.push((x.clone(), (*b).clone()));
                let mut r = rest;
                r.push((x.clone(), (*c).clone()));
                // names added by one branch must also be typed in the other
                let before = self.extra.len();
                let lp = self.build(l, d - 1)?;
                let added: Entries = self.extra[before..].to_vec();
                r.extend(added);
                let rp = self.build_exact(r, d - 1)?;
                Some(CpProcess::case(x, lp, rp))
            }
        }
    }

    /// Like `build`, but fails instead of adding free names.
    fn build_exact(&mut self, req: Entries, d: usize) -> Option<CpProcess> {
        let before = self.extra.len();
        let p = self.build(req, d)?;
        (self.extra.len() == before).then_some(p)
    }
}

/// Builds a random CP derivation top-down, then translates it for SCP.
///
/// The result is a deterministic function of `cfg`. Failed attempts are
/// retried with the same random stream.
pub fn generate_typed(cfg: &GenConfig) -> Result<Generated, GenError> {
    if cfg.max_depth == 0 || cfg.type_depth == 0 {
        return Err(GenError::BadConfig);
    }
    let mut b = Builder {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        type_depth: cfg.type_depth,
        next: 0,
        extra: vec![],
    };
    for _ in 0..ATTEMPTS {
        b.next = 0;
        b.extra.clear();
        // a cut at the root makes reduction suites see redexes more often
        let Some(p) = b.build_biased(vec![], cfg.max_depth, 0.6) else {
            continue;
        };
        // small terms are covered exhaustively elsewhere
        if size(&p) < cfg.max_depth {
            continue;
        }
        let context = TypingContext::from_entries(b.extra.clone()).expect("fresh names");
        let derivation = cp_check(&context, &p)
            .unwrap_or_else(|| panic!("constructed processes are typed: {context} |- {p}"));
        return Ok(match cfg.calculus {
            Calculus::Cp => Generated::Cp {
                context,
                process: p,
                derivation,
            },
            Calculus::Scp => {
                let (derivation, lins) =
                    encode_derivation(&derivation).expect("valid CP derivations translate");
                Generated::Scp {
                    context,
                    process: encode(&p),
                    derivation,
                    lins,
                }
            }
        });
    }
    Err(GenError::Exhausted(ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typing::{validate_cp, validate_scp, CpRule};

    fn cfg(seed: u64, max_depth: usize, calculus: Calculus) -> GenConfig {
        GenConfig {
            seed,
            max_depth,
            type_depth: 2,
            calculus,
        }
    }

    #[test]
    fn depth_one_gives_an_axiom() {
        for seed in 0..20 {
            let Generated::Cp { derivation, .. } =
                generate_typed(&cfg(seed, 1, Calculus::Cp)).unwrap()
            else {
                panic!("asked for CP")
            };
            assert!(matches!(derivation.rule, CpRule::One | CpRule::Id));
        }
    }

    #[test]
    fn outputs_validate_and_are_deterministic() {
        for seed in 0..50 {
            let c = cfg(seed, 5, Calculus::Cp);
            let Generated::Cp {
                process,
                derivation,
                ..
            } = generate_typed(&c).unwrap()
            else {
                panic!("asked for CP")
            };
            assert!(validate_cp(&derivation));
            let Generated::Cp { process: again, .. } = generate_typed(&c).unwrap() else {
                panic!("asked for CP")
            };
            assert_eq!(process, again);

            let Generated::Scp { derivation, .. } =
                generate_typed(&cfg(seed, 5, Calculus::Scp)).unwrap()
            else {
                panic!("asked for SCP")
            };
            assert!(validate_scp(&derivation));
        }
    }

    #[test]
    fn zero_depth_is_rejected() {
        assert_eq!(
            generate_typed(&cfg(0, 0, Calculus::Cp)).unwrap_err(),
            GenError::BadConfig
        );
    }
}
