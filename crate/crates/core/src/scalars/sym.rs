use std::collections::HashSet;
use std::fmt;
use std::sync::Mutex;

static INTERNER: Mutex<Option<HashSet<&'static str>>> = Mutex::new(None);

/// An interned variable name.
///
/// Ordering puts `t` (the deformation variable) before every other name,
/// then sorts alphabetically. This is the variable precedence of the
/// graded-lexicographic monomial order used for canonical forms.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Sym(&'static str);

impl Sym {
    pub fn new(name: &str) -> Sym {
        let mut guard = INTERNER.lock().unwrap();
        let set = guard.get_or_insert_with(HashSet::new);
        if let Some(s) = set.get(name) {
            return Sym(s);
        }
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        set.insert(leaked);
        Sym(leaked)
    }

    /// The reserved deformation variable.
    pub fn t() -> Sym {
        Sym::new("t")
    }

    pub fn name(&self) -> &'static str {
        self.0
    }

    pub fn is_t(&self) -> bool {
        self.0 == "t"
    }
}

impl Ord for Sym {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (!self.is_t(), self.0).cmp(&(!other.is_t(), other.0))
    }
}

impl PartialOrd for Sym {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_sorts_first() {
        let t = Sym::t();
        let a = Sym::new("alpha");
        let z = Sym::new("zz");
        assert!(t < a);
        assert!(a < z);
        assert!(t < z);
    }

    #[test]
    fn interning_is_stable() {
        assert_eq!(Sym::new("lambda"), Sym::new("lambda"));
        assert!(std::ptr::eq(Sym::new("lambda").name(), Sym::new("lambda").name()));
    }
}
