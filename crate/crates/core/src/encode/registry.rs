use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use super::{Encoding, HighestBit, OneHot, Prefix};

/// Encodings keyed by name.
#[derive(Clone, Default)]
pub struct EncodingRegistry {
    entries: BTreeMap<&'static str, Arc<dyn Encoding>>,
}

impl EncodingRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `prefix`, `highest_bit` and `one_hot`.
    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register(Arc::new(Prefix));
        r.register(Arc::new(HighestBit));
        r.register(Arc::new(OneHot));
        r
    }

    /// Adds an encoding, replacing any previous one with the same name.
    pub fn register(&mut self, encoding: Arc<dyn Encoding>) {
        self.entries.insert(encoding.name(), encoding);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn Encoding>> {
        self.entries.get(name).cloned()
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }
}

/// The process-wide registry of built-in encodings.
pub fn registry() -> &'static EncodingRegistry {
    static REGISTRY: OnceLock<EncodingRegistry> = OnceLock::new();
    REGISTRY.get_or_init(EncodingRegistry::with_builtins)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_registered() {
        let names: Vec<_> = registry().names().collect();
        assert_eq!(names, ["highest_bit", "one_hot", "prefix"]);
        assert!(registry().get("one_hot").is_some());
        assert!(registry().get("order").is_none());
    }
}
