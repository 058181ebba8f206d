//! Abstract tokenization: lowercase, strip non-alphanumerics, drop English
//! stop words, Porter-stem, and keep stems of length >= 2.

pub mod porter;
pub mod stopwords;

pub use porter::stem;
pub use stopwords::is_stopword;

/// Tokenize a raw abstract. Empty text yields an empty sequence.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty() && !is_stopword(t))
        .map(stem)
        .filter(|t| t.len() >= 2)
        .collect()
}

/// Pre-tokenization word count (whitespace-separated), used by the
/// minimum-abstract-length rule for training documents.
pub fn word_count(text: &str) -> usize {
    text.split_whitespace().count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stems_match_expected_pipeline() {
        assert_eq!(
            tokenize("Financial accounting manages corporations."),
            vec!["financi", "account", "manag", "corpor"]
        );
    }

    #[test]
    fn empty_and_stopword_only_text() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("the of and").is_empty());
    }

    #[test]
    fn punctuation_splits_tokens() {
        assert_eq!(tokenize("gene-editing (CRISPR)"), vec!["gene", "edit", "crispr"]);
    }

    #[test]
    fn word_count_is_pre_tokenization() {
        assert_eq!(word_count("the quick brown fox"), 4);
        assert_eq!(word_count("  "), 0);
    }
}
