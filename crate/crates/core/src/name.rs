//! Variable names and the fresh-name supply.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

/// A term or type variable name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Name {
        // Keep the fresh supply ahead of every `_<n>` suffix in use, so that
        // `fresh` never hands out a name that already exists somewhere.
        if let Some((_, tail)) = s.rsplit_once('_') {
            if let Ok(n) = tail.parse::<u64>() {
                FRESH.fetch_max(n.saturating_add(1), Ordering::Relaxed);
            }
        }
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The name with any `_<digits>` freshness suffixes stripped.
    pub fn base(&self) -> &str {
        let mut s: &str = &self.0;
        while let Some(idx) = s.rfind('_') {
            let tail = &s[idx + 1..];
            if idx > 0 && !tail.is_empty() && tail.bytes().all(|b| b.is_ascii_digit()) {
                s = &s[..idx];
            } else {
                break;
            }
        }
        if s.is_empty() {
            "v"
        } else {
            s
        }
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Name {
        Name::new(s)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

static FRESH: AtomicU64 = AtomicU64::new(0);

/// Draw a name `<base>_<n>` from the global counter, skipping any candidate
/// rejected by `taken`.
pub fn fresh(hint: &str, taken: impl Fn(&Name) -> bool) -> Name {
    let base = Name::new(hint);
    let base = base.base();
    loop {
        let n = FRESH.fetch_add(1, Ordering::Relaxed);
        let candidate = Name::new(&format!("{base}_{n}"));
        if !taken(&candidate) {
            return candidate;
        }
    }
}
