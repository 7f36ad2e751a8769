use super::{Bm25Params, LmParams, Model, RankingError, TfIdfParams};

/// Named parameter settings, one per (model, stemming) cell of the reference
/// experiments.
pub const PRESETS: &[(&str, Model)] = &[
    ("tfidf-nostem", Model::TfIdf(TfIdfParams { k1: 1.0, k3: 1000.0, b: 0.2 })),
    ("tfidf-stem", Model::TfIdf(TfIdfParams { k1: 1.0, k3: 1000.0, b: 0.4 })),
    ("okapi-nostem", Model::Bm25(Bm25Params { k1: 1.4, k3: 1000.0, b: 0.1, clamp_negative_idf: true })),
    ("okapi-stem", Model::Bm25(Bm25Params { k1: 1.0, k3: 1000.0, b: 0.75, clamp_negative_idf: true })),
    ("lm-dirichlet-nostem", Model::Lm(LmParams::dirichlet(2000.0))),
    ("lm-dirichlet-stem", Model::Lm(LmParams::dirichlet(500.0))),
];

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}

pub fn preset(name: &str) -> Result<Model, RankingError> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, m)| *m)
        .ok_or_else(|| RankingError::UnknownPreset { name: name.to_string(), available: preset_names().join(", ") })
}
