use std::collections::BTreeSet;
use std::sync::Arc;

use super::binding::{self, make_hygienic, Scope, Tag, Term, View};
use super::{Name, SessionType};

/// Processes of Classical Processes, where continuations reuse the principal
/// channel name implicitly.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum CpProcess {
    /// `fwd x y`
    Fwd(Name, Name),
    /// `nu x:A (P | Q)`; `chan` is bound in both sides.
    Cut {
        chan: Name,
        ann: SessionType,
        left: Arc<CpProcess>,
        right: Arc<CpProcess>,
    },
    /// `x[y](P | Q)`; `sent` is bound in `payload` only.
    Out {
        chan: Name,
        sent: Name,
        payload: Arc<CpProcess>,
        cont: Arc<CpProcess>,
    },
    /// `x(y). P`
    Inp {
        chan: Name,
        recv: Name,
        body: Arc<CpProcess>,
    },
    Inl {
        chan: Name,
        body: Arc<CpProcess>,
    },
    Inr {
        chan: Name,
        body: Arc<CpProcess>,
    },
    Case {
        chan: Name,
        left: Arc<CpProcess>,
        right: Arc<CpProcess>,
    },
    Close(Name),
    Wait {
        chan: Name,
        body: Arc<CpProcess>,
    },
}

/// Processes of Structural Classical Processes: every prefix whose channel
/// persists binds an explicit continuation channel.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ScpProcess {
    Fwd(Name, Name),
    Cut {
        chan: Name,
        ann: SessionType,
        left: Arc<ScpProcess>,
        right: Arc<ScpProcess>,
    },
    /// `x[y>w](P | Q)`: `sent` bound in `payload`, `cont` bound in `body`.
    Out {
        chan: Name,
        sent: Name,
        payload: Arc<ScpProcess>,
        cont: Name,
        body: Arc<ScpProcess>,
    },
    /// `x(w, y). P`: continuation `cont` and received `recv`, both bound in `body`.
    Inp {
        chan: Name,
        cont: Name,
        recv: Name,
        body: Arc<ScpProcess>,
    },
    Inl {
        chan: Name,
        cont: Name,
        body: Arc<ScpProcess>,
    },
    Inr {
        chan: Name,
        cont: Name,
        body: Arc<ScpProcess>,
    },
    /// `case x {w. P; v. Q}` with independent continuation binders.
    Case {
        chan: Name,
        left_cont: Name,
        left: Arc<ScpProcess>,
        right_cont: Name,
        right: Arc<ScpProcess>,
    },
    Close(Name),
    Wait {
        chan: Name,
        body: Arc<ScpProcess>,
    },
}

fn scope<'a, T>(binders: Vec<&'a Name>, body: &'a T) -> Scope<'a, T> {
    Scope { binders, body }
}

impl Term for CpProcess {
    fn view(&self) -> View<'_, Self> {
        use CpProcess::*;
        let (tag, ann, names, scopes) = match self {
            Fwd(x, y) => (Tag::Fwd, None, vec![x, y], vec![]),
            Cut {
                chan,
                ann,
                left,
                right,
            } => (
                Tag::Cut,
                Some(ann),
                vec![],
                vec![scope(vec![chan], &**left), scope(vec![chan], &**right)],
            ),
            Out {
                chan,
                sent,
                payload,
                cont,
            } => (
                Tag::Out,
                None,
                vec![chan],
                vec![scope(vec![sent], &**payload), scope(vec![], &**cont)],
            ),
            Inp { chan, recv, body } => {
                (Tag::Inp, None, vec![chan], vec![scope(vec![recv], &**body)])
            }
            Inl { chan, body } => (Tag::Inl, None, vec![chan], vec![scope(vec![], &**body)]),
            Inr { chan, body } => (Tag::Inr, None, vec![chan], vec![scope(vec![], &**body)]),
            Case { chan, left, right } => (
                Tag::Case,
                None,
                vec![chan],
                vec![scope(vec![], &**left), scope(vec![], &**right)],
            ),
            Close(x) => (Tag::Close, None, vec![x], vec![]),
            Wait { chan, body } => (Tag::Wait, None, vec![chan], vec![scope(vec![], &**body)]),
        };
        View {
            tag,
            ann,
            names,
            scopes,
        }
    }

    fn rebuild(&self, names: Vec<Name>, scopes: Vec<(Vec<Name>, Self)>) -> Self {
        use CpProcess::*;
        let mut names = names.into_iter();
        let mut scopes = scopes.into_iter();
        let mut name = || names.next().expect("name slot");
        let mut next = || {
            let (bs, body) = scopes.next().expect("scope slot");
            (bs, Arc::new(body))
        };
        match self {
            Fwd(..) => Fwd(name(), name()),
            Cut { ann, .. } => {
                let (mut b1, left) = next();
                let (b2, right) = next();
                let chan = b1.remove(0);
                debug_assert_eq!(b2.first(), Some(&chan), "cut binders must agree");
                Cut {
                    chan,
                    ann: ann.clone(),
                    left,
                    right,
                }
            }
            Out { .. } => {
                let chan = name();
                let (mut b, payload) = next();
                let (_, cont) = next();
                Out {
                    chan,
                    sent: b.remove(0),
                    payload,
                    cont,
                }
            }
            Inp { .. } => {
                let chan = name();
                let (mut b, body) = next();
                Inp {
                    chan,
                    recv: b.remove(0),
                    body,
                }
            }
            Inl { .. } => Inl {
                chan: name(),
                body: next().1,
            },
            Inr { .. } => Inr {
                chan: name(),
                body: next().1,
            },
            Case { .. } => {
                let chan = name();
                let left = next().1;
                let right = next().1;
                Case { chan, left, right }
            }
            Close(_) => Close(name()),
            Wait { .. } => Wait {
                chan: name(),
                body: next().1,
            },
        }
    }
}

impl Term for ScpProcess {
    fn view(&self) -> View<'_, Self> {
        use ScpProcess::*;
        let (tag, ann, names, scopes) = match self {
            Fwd(x, y) => (Tag::Fwd, None, vec![x, y], vec![]),
            Cut {
                chan,
                ann,
                left,
                right,
            } => (
                Tag::Cut,
                Some(ann),
                vec![],
                vec![scope(vec![chan], &**left), scope(vec![chan], &**right)],
            ),
            Out {
                chan,
                sent,
                payload,
                cont,
                body,
            } => (
                Tag::Out,
                None,
                vec![chan],
                vec![scope(vec![sent], &**payload), scope(vec![cont], &**body)],
            ),
            Inp {
                chan,
                cont,
                recv,
                body,
            } => (
                Tag::Inp,
                None,
                vec![chan],
                vec![scope(vec![cont, recv], &**body)],
            ),
            Inl { chan, cont, body } => {
                (Tag::Inl, None, vec![chan], vec![scope(vec![cont], &**body)])
            }
            Inr { chan, cont, body } => {
                (Tag::Inr, None, vec![chan], vec![scope(vec![cont], &**body)])
            }
            Case {
                chan,
                left_cont,
                left,
                right_cont,
                right,
            } => (
                Tag::Case,
                None,
                vec![chan],
                vec![
                    scope(vec![left_cont], &**left),
                    scope(vec![right_cont], &**right),
                ],
            ),
            Close(x) => (Tag::Close, None, vec![x], vec![]),
            Wait { chan, body } => (Tag::Wait, None, vec![chan], vec![scope(vec![], &**body)]),
        };
        View {
            tag,
            ann,
            names,
            scopes,
        }
    }

    fn rebuild(&self, names: Vec<Name>, scopes: Vec<(Vec<Name>, Self)>) -> Self {
        use ScpProcess::*;
        let mut names = names.into_iter();
        let mut scopes = scopes.into_iter();
        let mut name = || names.next().expect("name slot");
        let mut next = || {
            let (bs, body) = scopes.next().expect("scope slot");
            (bs, Arc::new(body))
        };
        match self {
            Fwd(..) => Fwd(name(), name()),
            Cut { ann, .. } => {
                let (mut b1, left) = next();
                let (b2, right) = next();
                let chan = b1.remove(0);
                debug_assert_eq!(b2.first(), Some(&chan), "cut binders must agree");
                Cut {
                    chan,
                    ann: ann.clone(),
                    left,
                    right,
                }
            }
            Out { .. } => {
                let chan = name();
                let (mut b1, payload) = next();
                let (mut b2, body) = next();
                Out {
                    chan,
                    sent: b1.remove(0),
                    payload,
                    cont: b2.remove(0),
                    body,
                }
            }
            Inp { .. } => {
                let chan = name();
                let (mut b, body) = next();
                let cont = b.remove(0);
                let recv = b.remove(0);
                Inp {
                    chan,
                    cont,
                    recv,
                    body,
                }
            }
            Inl { .. } => {
                let chan = name();
                let (mut b, body) = next();
                Inl {
                    chan,
                    cont: b.remove(0),
                    body,
                }
            }
            Inr { .. } => {
                let chan = name();
                let (mut b, body) = next();
                Inr {
                    chan,
                    cont: b.remove(0),
                    body,
                }
            }
            Case { .. } => {
                let chan = name();
                let (mut b1, left) = next();
                let (mut b2, right) = next();
                Case {
                    chan,
                    left_cont: b1.remove(0),
                    left,
                    right_cont: b2.remove(0),
                    right,
                }
            }
            Close(_) => Close(name()),
            Wait { .. } => Wait {
                chan: name(),
                body: next().1,
            },
        }
    }
}

/// Operations common to both calculi, available as methods.
pub trait ProcessExt: Term {
    fn free_names(&self) -> BTreeSet<Name> {
        binding::free_names(self)
    }
    fn rename(&self, from: &Name, to: &Name) -> Self {
        binding::rename(self, from, to)
    }
    fn alpha_eq(&self, other: &Self) -> bool {
        binding::alpha_eq(self, other)
    }
    fn size(&self) -> usize {
        binding::size(self)
    }
    /// The channel a prefix acts on; `None` for cuts and forwarders.
    fn principal(&self) -> Option<&Name> {
        let v = self.view();
        match v.tag {
            Tag::Cut | Tag::Fwd => None,
            _ => v.names.first().copied(),
        }
    }
    fn tag(&self) -> Tag {
        self.view().tag
    }
    fn freshen(&self, avoid: &BTreeSet<Name>) -> Self {
        binding::freshen(self, avoid)
    }
}

impl<T: Term> ProcessExt for T {}

// Smart constructors. Each one renames a binder that would clash with a
// free name of the node it builds.

impl CpProcess {
    pub fn fwd(x: Name, y: Name) -> Self {
        CpProcess::Fwd(x, y)
    }
    pub fn cut(chan: Name, ann: SessionType, left: CpProcess, right: CpProcess) -> Self {
        CpProcess::Cut {
            chan,
            ann,
            left: Arc::new(left),
            right: Arc::new(right),
        }
    }
    pub fn out(chan: Name, sent: Name, payload: CpProcess, cont: CpProcess) -> Self {
        make_hygienic(CpProcess::Out {
            chan,
            sent,
            payload: Arc::new(payload),
            cont: Arc::new(cont),
        })
    }
    pub fn inp(chan: Name, recv: Name, body: CpProcess) -> Self {
        make_hygienic(CpProcess::Inp {
            chan,
            recv,
            body: Arc::new(body),
        })
    }
    pub fn inl(chan: Name, body: CpProcess) -> Self {
        CpProcess::Inl {
            chan,
            body: Arc::new(body),
        }
    }
    pub fn inr(chan: Name, body: CpProcess) -> Self {
        CpProcess::Inr {
            chan,
            body: Arc::new(body),
        }
    }
    pub fn case(chan: Name, left: CpProcess, right: CpProcess) -> Self {
        CpProcess::Case {
            chan,
            left: Arc::new(left),
            right: Arc::new(right),
        }
    }
    pub fn close(x: Name) -> Self {
        CpProcess::Close(x)
    }
    pub fn wait(chan: Name, body: CpProcess) -> Self {
        CpProcess::Wait {
            chan,
            body: Arc::new(body),
        }
    }
}

impl ScpProcess {
    pub fn fwd(x: Name, y: Name) -> Self {
        ScpProcess::Fwd(x, y)
    }
    pub fn cut(chan: Name, ann: SessionType, left: ScpProcess, right: ScpProcess) -> Self {
        ScpProcess::Cut {
            chan,
            ann,
            left: Arc::new(left),
            right: Arc::new(right),
        }
    }
    pub fn out(chan: Name, sent: Name, payload: ScpProcess, cont: Name, body: ScpProcess) -> Self {
        make_hygienic(ScpProcess::Out {
            chan,
            sent,
            payload: Arc::new(payload),
            cont,
            body: Arc::new(body),
        })
    }
    pub fn inp(chan: Name, cont: Name, recv: Name, body: ScpProcess) -> Self {
        make_hygienic(ScpProcess::Inp {
            chan,
            cont,
            recv,
            body: Arc::new(body),
        })
    }
    pub fn inl(chan: Name, cont: Name, body: ScpProcess) -> Self {
        make_hygienic(ScpProcess::Inl {
            chan,
            cont,
            body: Arc::new(body),
        })
    }
    pub fn inr(chan: Name, cont: Name, body: ScpProcess) -> Self {
        make_hygienic(ScpProcess::Inr {
            chan,
            cont,
            body: Arc::new(body),
        })
    }
    pub fn case(
        chan: Name,
        left_cont: Name,
        left: ScpProcess,
        right_cont: Name,
        right: ScpProcess,
    ) -> Self {
        make_hygienic(ScpProcess::Case {
            chan,
            left_cont,
            left: Arc::new(left),
            right_cont,
            right: Arc::new(right),
        })
    }
    pub fn close(x: Name) -> Self {
        ScpProcess::Close(x)
    }
    pub fn wait(chan: Name, body: ScpProcess) -> Self {
        ScpProcess::Wait {
            chan,
            body: Arc::new(body),
        }
    }
}
