use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use async_trait::async_trait;
use serde::Deserialize;
use serde_json::json;

use super::store::EmbeddingStore;
use super::vector::{mean_pool, EmbeddingVector};
use crate::http::{send_with_retry, HttpRequest, HttpTransport, RetryPolicy};
use crate::{Error, Result};

/// Returns one pooled vector per input text, in input order.
#[async_trait]
pub trait EmbeddingProvider: Send + Sync {
    async fn embed(&self, texts: &[String]) -> Result<Vec<EmbeddingVector>>;
}

/// Serves vectors from a loaded [`EmbeddingStore`].
pub struct StoreProvider {
    store: EmbeddingStore,
}

impl StoreProvider {
    pub fn new(store: EmbeddingStore) -> Self {
        Self { store }
    }
}

#[async_trait]
impl EmbeddingProvider for StoreProvider {
    async fn embed(&self, texts: &[String]) -> Result<Vec<EmbeddingVector>> {
        texts
            .iter()
            .map(|t| {
                self.store
                    .get(t)
                    .cloned()
                    .ok_or_else(|| Error::Consistency(format!("embedding store has no vector for {t:?}")))
            })
            .collect()
    }
}

#[derive(Deserialize)]
struct EmbedResponse {
    vectors: Option<Vec<Vec<f64>>>,
    token_vectors: Option<Vec<Vec<Vec<f64>>>>,
}

/// POSTs `{texts}` and accepts either `{vectors}` or per-token
/// `{token_vectors}` (mean-pooled here). Results are cached per text.
pub struct HttpEmbeddingProvider {
    transport: Arc<dyn HttpTransport>,
    endpoint: String,
    api_key: Option<String>,
    policy: RetryPolicy,
    cache: Mutex<HashMap<String, EmbeddingVector>>,
}

impl HttpEmbeddingProvider {
    pub fn new(transport: Arc<dyn HttpTransport>, endpoint: impl Into<String>, api_key: Option<String>) -> Self {
        Self {
            transport,
            endpoint: endpoint.into(),
            api_key,
            policy: RetryPolicy::default(),
            cache: Mutex::new(HashMap::new()),
        }
    }
}

#[async_trait]
impl EmbeddingProvider for HttpEmbeddingProvider {
    async fn embed(&self, texts: &[String]) -> Result<Vec<EmbeddingVector>> {
        let missing: Vec<String> = {
            let cache = self.cache.lock().expect("cache lock");
            let mut seen = std::collections::HashSet::new();
            texts.iter().filter(|t| !cache.contains_key(*t) && seen.insert(*t)).cloned().collect()
        };
        if !missing.is_empty() {
            let request = HttpRequest::post_json(self.endpoint.clone(), json!({ "texts": missing }))
                .with_bearer(self.api_key.clone());
            let resp = send_with_retry(self.transport.as_ref(), &request, &self.policy, None).await?;
            let body: EmbedResponse = serde_json::from_str(&resp.body)
                .map_err(|e| Error::Protocol(format!("unexpected embedding response: {e}")))?;
            let vectors = match (body.vectors, body.token_vectors) {
                (Some(v), _) => v.into_iter().map(EmbeddingVector::new).collect::<Result<Vec<_>>>()?,
                (None, Some(tv)) => tv.iter().map(|m| mean_pool(m)).collect::<Result<Vec<_>>>()?,
                (None, None) => return Err(Error::Protocol("embedding response has neither vectors nor token_vectors".into())),
            };
            if vectors.len() != missing.len() {
                return Err(Error::Protocol(format!(
                    "asked for {} embeddings, received {}",
                    missing.len(),
                    vectors.len()
                )));
            }
            let mut cache = self.cache.lock().expect("cache lock");
            for (t, v) in missing.into_iter().zip(vectors) {
                cache.insert(t, v);
            }
        }
        let cache = self.cache.lock().expect("cache lock");
        Ok(texts.iter().map(|t| cache[t].clone()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::http::testing::ScriptedTransport;

    #[tokio::test]
    async fn token_vectors_are_pooled_and_cached() {
        let t = Arc::new(ScriptedTransport::new(vec![ScriptedTransport::ok(
            r#"{"token_vectors":[[[1.0,0.0],[0.0,1.0]],[[2.0,2.0]]]}"#,
        )]));
        let p = HttpEmbeddingProvider::new(t.clone(), "http://x/embed", None);
        let texts = vec!["a".to_string(), "b".to_string()];
        let v = p.embed(&texts).await.unwrap();
        assert_eq!(v[0].values(), &[0.5, 0.5]);
        assert_eq!(v[1].values(), &[2.0, 2.0]);
        let again = p.embed(&texts).await.unwrap();
        assert_eq!(v, again);
        assert_eq!(t.call_count(), 1);
    }

    #[tokio::test]
    async fn store_miss_is_consistency_error() {
        let p = StoreProvider::new(EmbeddingStore::new());
        assert!(matches!(p.embed(&["x".into()]).await, Err(Error::Consistency(_))));
    }
}
