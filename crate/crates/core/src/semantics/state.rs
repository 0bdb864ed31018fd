use std::collections::BTreeMap;
use std::fmt;

use crate::nat::Nat;
use crate::syntax::Var;

/// Total map from variables to naturals; unbound variables read as zero.
///
/// Only non-zero bindings are stored, so two states are equal exactly when
/// they agree on every variable.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct State {
    bindings: BTreeMap<Var, Nat>,
}

impl State {
    pub fn new() -> State {
        State::default()
    }

    /// Initial state for a run: `x1..xn` bound to `inputs`, everything else 0.
    pub fn from_inputs(inputs: &[Nat]) -> State {
        let mut s = State::new();
        for (i, v) in inputs.iter().enumerate() {
            s.set(Var::new(i as u64 + 1), v.clone());
        }
        s
    }

    pub fn get(&self, v: &Var) -> &Nat {
        self.bindings.get(v).unwrap_or(&Nat::ZERO)
    }

    pub fn set(&mut self, v: Var, value: Nat) {
        if value.is_zero() {
            self.bindings.remove(&v);
        } else {
            self.bindings.insert(v, value);
        }
    }

    /// Non-zero bindings in variable order.
    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Nat)> {
        self.bindings.iter()
    }

    /// The program's result, by convention held in `x0`.
    pub fn output(&self) -> &Nat {
        self.get(&Var::new(0))
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.bindings.iter()).finish()
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bindings.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self.bindings.iter().map(|(k, v)| format!("{k} = {v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::x;

    #[test]
    fn lookup_is_total_and_zero_is_unbound() {
        let mut s = State::from_inputs(&[Nat::small(4), Nat::ZERO]);
        assert_eq!(*s.get(&x(1)), Nat::small(4));
        assert!(s.get(&x(99)).is_zero());
        s.set(x(1), Nat::ZERO);
        assert_eq!(s, State::new());
    }
}
