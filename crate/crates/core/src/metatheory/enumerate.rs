//! Exhaustive, type-directed enumeration of CP judgments.

use std::collections::BTreeSet;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use crate::syntax::{CpProcess, Name, SessionType, TypingContext};
use crate::typing::{cp_check, CpDerivation};

/// `{1, ⊥, 1⊕⊥, 1&⊥, 1⊗⊥, ⊥⅋1}` together with the duals of its members.
pub fn alphabet() -> &'static [SessionType] {
    static ALPHABET: OnceLock<Vec<SessionType>> = OnceLock::new();
    ALPHABET.get_or_init(|| {
        use SessionType as T;
        let base = [
            T::One,
            T::Bot,
            T::plus(T::One, T::Bot),
            T::with(T::One, T::Bot),
            T::tensor(T::One, T::Bot),
            T::par(T::Bot, T::One),
        ];
        let mut out: Vec<SessionType> = base.to_vec();
        for t in base {
            let d = t.dual();
            if !out.contains(&d) {
                out.push(d);
            }
        }
        out
    })
}

/// Root free names in the order they are assigned.
const ROOT_NAMES: [&str; 8] = ["x", "y", "z", "u", "v", "s", "t", "r"];

fn root_name(i: usize) -> Name {
    Name::new(ROOT_NAMES[i], 0)
}

/// A binder name not bound in `ctx`, so it captures nothing free below it.
fn binder(ctx: &Entries) -> Name {
    (0..)
        .map(|i| Name::new("n", i))
        .find(|n| ctx.iter().all(|(m, _)| m != n))
        .expect("finite context")
}

type Entries = Vec<(Name, SessionType)>;

/// Every split of `rest` into (chosen, remaining) such that the two parts
/// plus one new name each fit sizes `k` and `total - k` for some `k ≥ 1`.
fn splits(rest: &Entries, total: usize) -> impl Iterator<Item = (Entries, Entries)> + '_ {
    let len = rest.len();
    (0u32..1 << len)
        .filter(move |mask| {
            let a = mask.count_ones() as usize;
            // a process of size s types at most s + 1 names
            a.max(1) + (len - a) <= total
        })
        .map(move |mask| {
            let mut a = Vec::new();
            let mut b = Vec::new();
            for (i, e) in rest.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    a.push(e.clone());
                } else {
                    b.push(e.clone());
                }
            }
            (a, b)
        })
}

fn without(ctx: &Entries, x: &Name) -> Entries {
    ctx.iter().filter(|(n, _)| n != x).cloned().collect()
}

/// `ctx` with `x` (re)bound to `a`, kept sorted by name.
fn with(ctx: &Entries, x: &Name, a: &SessionType) -> Entries {
    let mut out = without(ctx, x);
    out.push((x.clone(), a.clone()));
    out.sort();
    out
}

type Memo = HashMap<(Entries, usize), Arc<Vec<CpProcess>>>;

fn gen(memo: &mut Memo, ctx: &Entries, n: usize) -> Arc<Vec<CpProcess>> {
    if n == 0 || ctx.is_empty() || ctx.len() > n + 1 {
        return Arc::new(Vec::new());
    }
    let key = (ctx.clone(), n);
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let out = Arc::new(gen_uncached(memo, ctx, n));
    memo.insert(key, out.clone());
    out
}

/// All processes of exactly `n` constructors typed by `ctx`.
fn gen_uncached(memo: &mut Memo, ctx: &Entries, n: usize) -> Vec<CpProcess> {
    use SessionType as T;
    let mut out = Vec::new();
    if n == 1 {
        match ctx.as_slice() {
            [(x, T::One)] => out.push(CpProcess::Close(x.clone())),
            [(x, a), (y, b)] if *b == a.dual() => {
                out.push(CpProcess::Fwd(x.clone(), y.clone()));
                out.push(CpProcess::Fwd(y.clone(), x.clone()));
            }
            _ => {}
        }
        return out;
    }
    // cut
    if n >= 3 {
        let z = binder(ctx);
        for a in alphabet() {
            for (c1, c2) in splits(ctx, n - 1) {
                let l_ctx = with(&c1, &z, a);
                let r_ctx = with(&c2, &z, &a.dual());
                for k in 1..n - 1 {
                    let ls = gen(memo, &l_ctx, k);
                    if ls.is_empty() {
                        continue;
                    }
                    let rs = gen(memo, &r_ctx, n - 1 - k);
                    for l in ls.iter() {
                        for r in rs.iter() {
                            out.push(CpProcess::cut(z.clone(), a.clone(), l.clone(), r.clone()));
                        }
                    }
                }
            }
        }
    }
    for (x, a) in ctx {
        let rest = without(ctx, x);
        match a {
            T::One => {}
            T::Bot => {
                for p in gen(memo, &rest, n - 1).iter() {
                    out.push(CpProcess::wait(x.clone(), p.clone()));
                }
            }
            T::Tensor(b, c) if n >= 3 => {
                let y = binder(ctx);
                for (c1, c2) in splits(&rest, n - 1) {
                    let l_ctx = with(&c1, &y, b);
                    let r_ctx = with(&c2, x, c);
                    for k in 1..n - 1 {
                        let ls = gen(memo, &l_ctx, k);
                        if ls.is_empty() {
                            continue;
                        }
                        for r in gen(memo, &r_ctx, n - 1 - k).iter() {
                            for l in ls.iter() {
                                out.push(CpProcess::out(
                                    x.clone(),
                                    y.clone(),
                                    l.clone(),
                                    r.clone(),
                                ));
                            }
                        }
                    }
                }
            }
            T::Tensor(..) => {}
            T::Par(b, c) => {
                let y = binder(ctx);
                let body_ctx = with(&with(ctx, x, c), &y, b);
                for p in gen(memo, &body_ctx, n - 1).iter() {
                    out.push(CpProcess::inp(x.clone(), y.clone(), p.clone()));
                }
            }
            T::Plus(b, c) => {
                for p in gen(memo, &with(ctx, x, b), n - 1).iter() {
                    out.push(CpProcess::inl(x.clone(), p.clone()));
                }
                for p in gen(memo, &with(ctx, x, c), n - 1).iter() {
                    out.push(CpProcess::inr(x.clone(), p.clone()));
                }
            }
            T::With(b, c) if n >= 3 => {
                let lc = with(ctx, x, b);
                let rc = with(ctx, x, c);
                for k in 1..n - 1 {
                    let ls = gen(memo, &lc, k);
                    if ls.is_empty() {
                        continue;
                    }
                    for r in gen(memo, &rc, n - 1 - k).iter() {
                        for l in ls.iter() {
                            out.push(CpProcess::case(x.clone(), l.clone(), r.clone()));
                        }
                    }
                }
            }
            T::With(..) => {}
        }
    }
    out
}

/// Every multiset of alphabet types of size `k`, as sorted index vectors.
fn multisets(k: usize, from: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if acc.len() == k {
        out.push(acc.clone());
        return;
    }
    for i in from..alphabet().len() {
        acc.push(i);
        multisets(k, i, acc, out);
        acc.pop();
    }
}

/// Root contexts with at most `max_len` entries, one per multiset of types.
pub fn root_contexts(max_len: usize) -> Vec<TypingContext> {
    let mut shapes = Vec::new();
    for k in 1..=max_len.min(ROOT_NAMES.len()) {
        multisets(k, 0, &mut Vec::new(), &mut shapes);
    }
    shapes
        .into_iter()
        .map(|idx| {
            TypingContext::from_entries(
                idx.iter()
                    .enumerate()
                    .map(|(i, &t)| (root_name(i), alphabet()[t].clone())),
            )
            .expect("distinct root names")
        })
        .collect()
}

/// Every derivable CP judgment with at most `max_ast_size` constructors.
///
/// Contexts range over multisets of [`alphabet`] types with root names
/// assigned in order, so every derivable judgment over the alphabet appears
/// up to a renaming of its free names and α. Cut annotations also range over
/// the alphabet. Results are ordered by size, then context.
pub fn enumerate_typed_cp(max_ast_size: usize) -> Vec<(TypingContext, CpProcess, CpDerivation)> {
    let contexts = root_contexts(max_ast_size + 1);
    let mut found: Vec<(usize, usize, Vec<CpProcess>)> = contexts
        .par_iter()
        .enumerate()
        .map_init(Memo::new, |memo, (i, ctx)| {
            let mut entries: Entries = ctx.iter().cloned().collect();
            entries.sort();
            (1..=max_ast_size)
                .map(|n| (n, i, gen(memo, &entries, n).to_vec()))
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect();
    found.sort_by_key(|(n, i, _)| (*n, *i));
    found
        .into_par_iter()
        .flat_map_iter(|(_, i, ps)| {
            let ctx = &contexts[i];
            ps.into_iter().map(move |p| {
                let d = cp_check(ctx, &p).expect("enumerated processes are typed");
                (ctx.clone(), p, d)
            })
        })
        .collect()
}

/// Distinct judgments in an enumeration, keyed by printed context and process.
pub fn distinct_judgments(items: &[(TypingContext, CpProcess, CpDerivation)]) -> usize {
    items
        .iter()
        .map(|(c, p, _)| format!("{c} |- {p}"))
        .collect::<BTreeSet<_>>()
        .len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::parse_cp_judgment;
    use crate::typing::validate_cp;

    fn contains(items: &[(TypingContext, CpProcess, CpDerivation)], src: &str) -> bool {
        let (c, p) = parse_cp_judgment(src).unwrap();
        items
            .iter()
            .any(|(c2, p2, _)| c2.same_bindings(&c) && crate::syntax::alpha_eq(p2, &p))
    }

    #[test]
    fn alphabet_is_closed_under_duality() {
        let a = alphabet();
        assert_eq!(a.len(), 8);
        assert!(a.iter().all(|t| a.contains(&t.dual())));
    }

    #[test]
    fn axioms_appear() {
        let items = enumerate_typed_cp(2);
        assert!(contains(&items, "x:1 |- close x"));
        for a in alphabet() {
            let mut want = vec![a.to_string(), a.dual().to_string()];
            want.sort();
            let found = items.iter().any(|(c, p, _)| {
                let mut tys: Vec<String> = c.iter().map(|(_, t)| t.to_string()).collect();
                tys.sort();
                matches!(p, CpProcess::Fwd(..)) && tys == want
            });
            assert!(found, "fwd at {a}");
        }
        assert!(items.iter().all(|(_, _, d)| validate_cp(d)));
    }

    #[test]
    fn small_counts_are_stable() {
        let items = enumerate_typed_cp(3);
        assert_eq!(items.len(), distinct_judgments(&items));
    }
}
