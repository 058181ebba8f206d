//! Token vocabulary with dense ids and document frequencies.

use std::collections::HashMap;

/// Tokens surviving the min-df filter, id-ordered lexicographically so that
/// vocabulary construction is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    ids: HashMap<String, usize>,
    doc_freq: Vec<u32>,
}

impl Vocabulary {
    /// Build from tokenized documents, keeping tokens that appear in at
    /// least `min_df` documents.
    pub fn build(docs: &[Vec<String>], min_df: usize) -> Self {
        let mut df: HashMap<&str, u32> = HashMap::new();
        for doc in docs {
            let mut seen: Vec<&str> = doc.iter().map(String::as_str).collect();
            seen.sort_unstable();
            seen.dedup();
            for token in seen {
                *df.entry(token).or_insert(0) += 1;
            }
        }
        let mut kept: Vec<(&str, u32)> = df
            .into_iter()
            .filter(|&(_, n)| n as usize >= min_df.max(1))
            .collect();
        kept.sort_unstable_by_key(|&(token, _)| token);
        let tokens: Vec<String> = kept.iter().map(|&(t, _)| t.to_string()).collect();
        let doc_freq: Vec<u32> = kept.iter().map(|&(_, n)| n).collect();
        let ids = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Self {
            tokens,
            ids,
            doc_freq,
        }
    }

    /// Vocabulary with the given tokens (df = 1 each), mostly for tests and
    /// deserialization.
    pub fn from_tokens(tokens: Vec<String>) -> Self {
        let ids = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        let doc_freq = vec![1; tokens.len()];
        Self {
            tokens,
            ids,
            doc_freq,
        }
    }

    pub(crate) fn from_parts(tokens: Vec<String>, doc_freq: Vec<u32>) -> Self {
        let ids = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Self {
            tokens,
            ids,
            doc_freq,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn id(&self, token: &str) -> Option<usize> {
        self.ids.get(token).copied()
    }

    pub fn token(&self, id: usize) -> &str {
        &self.tokens[id]
    }

    pub fn doc_freq(&self, id: usize) -> u32 {
        self.doc_freq[id]
    }

    /// Map a token sequence to known ids, dropping unknown tokens.
    pub fn encode(&self, tokens: &[String]) -> Vec<usize> {
        tokens.iter().filter_map(|t| self.id(t)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn docs(raw: &[&[&str]]) -> Vec<Vec<String>> {
        raw.iter()
            .map(|d| d.iter().map(|s| s.to_string()).collect())
            .collect()
    }

    #[test]
    fn min_df_filters_rare_tokens() {
        let d = docs(&[
            &["alpha", "beta"],
            &["alpha", "gamma"],
            &["alpha", "beta"],
        ]);
        let v = Vocabulary::build(&d, 2);
        assert_eq!(v.len(), 2);
        assert!(v.id("alpha").is_some());
        assert!(v.id("beta").is_some());
        assert!(v.id("gamma").is_none());
        assert_eq!(v.doc_freq(v.id("alpha").unwrap()), 3);
    }

    #[test]
    fn ids_are_dense_and_lexicographic() {
        let d = docs(&[&["zeta", "alpha", "mid"]]);
        let v = Vocabulary::build(&d, 1);
        assert_eq!(v.token(0), "alpha");
        assert_eq!(v.token(1), "mid");
        assert_eq!(v.token(2), "zeta");
    }

    #[test]
    fn repeated_tokens_count_once_per_doc() {
        let d = docs(&[&["dup", "dup", "dup"], &["other"]]);
        let v = Vocabulary::build(&d, 2);
        assert!(v.id("dup").is_none());
    }
}
