use std::sync::Arc;

/// Session types: propositions of multiplicative-additive classical linear
/// logic read as protocols on a channel.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SessionType {
    /// Send a termination signal.
    One,
    /// Receive a termination signal.
    Bot,
    /// Send a channel of the left type, continue as the right.
    Tensor(Arc<SessionType>, Arc<SessionType>),
    /// Receive a channel of the left type, continue as the right.
    Par(Arc<SessionType>, Arc<SessionType>),
    /// Send a label, continue as the chosen side.
    Plus(Arc<SessionType>, Arc<SessionType>),
    /// Receive a label, continue as the chosen side.
    With(Arc<SessionType>, Arc<SessionType>),
}

impl SessionType {
    pub fn tensor(a: SessionType, b: SessionType) -> SessionType {
        SessionType::Tensor(Arc::new(a), Arc::new(b))
    }

    pub fn par(a: SessionType, b: SessionType) -> SessionType {
        SessionType::Par(Arc::new(a), Arc::new(b))
    }

    pub fn plus(a: SessionType, b: SessionType) -> SessionType {
        SessionType::Plus(Arc::new(a), Arc::new(b))
    }

    pub fn with(a: SessionType, b: SessionType) -> SessionType {
        SessionType::With(Arc::new(a), Arc::new(b))
    }

    /// Exchanges sending and receiving throughout the type.
    pub fn dual(&self) -> SessionType {
        use SessionType::*;
        match self {
            One => Bot,
            Bot => One,
            Tensor(a, b) => SessionType::par(a.dual(), b.dual()),
            Par(a, b) => SessionType::tensor(a.dual(), b.dual()),
            Plus(a, b) => SessionType::with(a.dual(), b.dual()),
            With(a, b) => SessionType::plus(a.dual(), b.dual()),
        }
    }

    /// Atoms have depth 1.
    pub fn depth(&self) -> usize {
        match self.children() {
            None => 1,
            Some((a, b)) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn children(&self) -> Option<(&SessionType, &SessionType)> {
        use SessionType::*;
        match self {
            One | Bot => None,
            Tensor(a, b) | Par(a, b) | Plus(a, b) | With(a, b) => Some((a, b)),
        }
    }

    pub fn is_atom(&self) -> bool {
        self.children().is_none()
    }
}

/// Free-function form of [`SessionType::dual`].
pub fn dual(a: &SessionType) -> SessionType {
    a.dual()
}

/// All types of depth at most `depth`, ordered by depth then constructor.
pub fn types_up_to_depth(depth: usize) -> Vec<SessionType> {
    let mut all = Vec::new();
    if depth == 0 {
        return all;
    }
    all.push(SessionType::One);
    all.push(SessionType::Bot);
    let mut shallower_count = 0;
    for _ in 1..depth {
        let previous = all.clone();
        let start = shallower_count;
        shallower_count = previous.len();
        let mut next = Vec::new();
        for ctor in [
            SessionType::tensor as fn(SessionType, SessionType) -> SessionType,
            SessionType::par,
            SessionType::plus,
            SessionType::with,
        ] {
            for (i, a) in previous.iter().enumerate() {
                for (j, b) in previous.iter().enumerate() {
                    // at least one side must come from the newest layer
                    if i < start && j < start {
                        continue;
                    }
                    next.push(ctor(a.clone(), b.clone()));
                }
            }
        }
        all.extend(next);
    }
    all
}
