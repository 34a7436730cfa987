//! In-memory policy store shared by the service.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};
use std::time::SystemTime;

use ptacl_core::{parse_policy, ParseError, Policy};
use thiserror::Error;

#[derive(Debug)]
pub struct StoredPolicy {
    pub id: String,
    pub source: String,
    pub policy: Policy,
    pub loaded_at: SystemTime,
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("policy `{0}` is already registered")]
    Duplicate(String),
    #[error("invalid policy id `{0}`: use letters, digits, `-`, `_` or `.`")]
    InvalidId(String),
    #[error("{0}")]
    Parse(ParseError),
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}:{rendered}", path.display())]
    Parse { path: PathBuf, rendered: String },
    #[error("{}: {source}", path.display())]
    Store { path: PathBuf, source: StoreError },
}

/// Policies keyed by id. Entries are never replaced or removed, so readers
/// only ever see complete policies.
fn io(path: &Path) -> impl Fn(std::io::Error) -> LoadError + '_ {
    move |source| LoadError::Io {
        path: path.to_owned(),
        source,
    }
}

#[derive(Debug, Default)]
pub struct PolicyStore {
    policies: RwLock<BTreeMap<String, Arc<StoredPolicy>>>,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c))
}

impl PolicyStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses and registers `source` under `id`.
    pub fn insert(&self, id: &str, source: &str) -> Result<Arc<StoredPolicy>, StoreError> {
        if !valid_id(id) {
            return Err(StoreError::InvalidId(id.to_owned()));
        }
        let policy = parse_policy(source).map_err(StoreError::Parse)?;
        let mut policies = self.policies.write().expect("store lock poisoned");
        if policies.contains_key(id) {
            return Err(StoreError::Duplicate(id.to_owned()));
        }
        let stored = Arc::new(StoredPolicy {
            id: id.to_owned(),
            source: source.to_owned(),
            policy,
            loaded_at: SystemTime::now(),
        });
        policies.insert(id.to_owned(), Arc::clone(&stored));
        Ok(stored)
    }

    pub fn get(&self, id: &str) -> Option<Arc<StoredPolicy>> {
        self.policies.read().expect("store lock poisoned").get(id).cloned()
    }

    pub fn ids(&self) -> Vec<String> {
        self.policies.read().expect("store lock poisoned").keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.policies.read().expect("store lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Loads every `*.ptp` file in `dir`, keyed by file stem. Any failure
    /// aborts the whole load.
    pub fn load_dir(dir: &Path) -> Result<PolicyStore, LoadError> {
        let mut paths = Vec::new();
        for entry in std::fs::read_dir(dir).map_err(io(dir))? {
            let path = entry.map_err(io(dir))?.path();
            if path.extension().is_some_and(|e| e == "ptp") && path.is_file() {
                paths.push(path);
            }
        }
        paths.sort();
        let store = PolicyStore::new();
        for path in paths {
            let source = std::fs::read_to_string(&path).map_err(io(&path))?;
            let id = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_owned();
            match store.insert(&id, &source) {
                Ok(_) => {}
                Err(StoreError::Parse(e)) => {
                    return Err(LoadError::Parse {
                        rendered: e.render(&source),
                        path,
                    })
                }
                Err(source) => return Err(LoadError::Store { path, source }),
            }
        }
        Ok(store)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique() {
        let store = PolicyStore::new();
        store.insert("p", "allow").unwrap();
        assert!(matches!(store.insert("p", "deny"), Err(StoreError::Duplicate(_))));
        assert_eq!(store.get("p").unwrap().policy, Policy::Allow);
        assert!(matches!(store.insert("a/b", "allow"), Err(StoreError::InvalidId(_))));
        assert!(matches!(store.insert("q", "allow and"), Err(StoreError::Parse(_))));
        assert_eq!(store.ids(), vec!["p"]);
    }

    #[test]
    fn directory_loading() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("one.ptp"), "allow").unwrap();
        std::fs::write(dir.path().join("notes.txt"), "not a policy").unwrap();
        let store = PolicyStore::load_dir(dir.path()).unwrap();
        assert_eq!(store.ids(), vec!["one"]);

        std::fs::write(dir.path().join("two.ptp"), "{ a ? allow").unwrap();
        let err = PolicyStore::load_dir(dir.path()).unwrap_err();
        assert!(err.to_string().starts_with(&format!("{}:1:", dir.path().join("two.ptp").display())), "{err}");
    }
}
