use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use chrono::{DateTime, Utc};
use futures::stream::{self, StreamExt, TryStreamExt};
use serde::Deserialize;

use super::{CacheEntry, PopularityCache, PopularityRecord};
use crate::http::{send_with_retry, HttpRequest, HttpTransport, RateLimiter, RetryPolicy};
use crate::{Error, Result, TermRecord};

pub const DEFAULT_ESEARCH_URL: &str = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils/esearch.fcgi";
pub const PMC_DB: &str = "pmc";

/// Exact-phrase query over all fields.
pub fn identifier_query(identifier: &str) -> String {
    phrase(identifier)
}

pub fn term_query(label: &str) -> String {
    phrase(label)
}

fn phrase(text: &str) -> String {
    let cleaned: String = text.chars().map(|c| if c == '"' { ' ' } else { c }).collect();
    format!("\"{}\"[All Fields]", cleaned.split_whitespace().collect::<Vec<_>>().join(" "))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PmcCount {
    pub count: u64,
    pub retrieved_at: DateTime<Utc>,
}

#[derive(Deserialize)]
struct EsearchEnvelope {
    esearchresult: EsearchResult,
}

#[derive(Deserialize)]
struct EsearchResult {
    count: Option<String>,
    #[serde(rename = "ERROR")]
    error: Option<String>,
}

/// Full-text hit counts from the PMC search endpoint.
pub struct PmcClient {
    transport: Arc<dyn HttpTransport>,
    limiter: Arc<RateLimiter>,
    cache: Mutex<PopularityCache>,
    endpoint: String,
    api_key: Option<String>,
    policy: RetryPolicy,
    offline: bool,
}

impl PmcClient {
    pub fn new(transport: Arc<dyn HttpTransport>, limiter: Arc<RateLimiter>, cache: PopularityCache) -> Self {
        Self {
            transport,
            limiter,
            cache: Mutex::new(cache),
            endpoint: DEFAULT_ESEARCH_URL.to_string(),
            api_key: None,
            policy: RetryPolicy::default(),
            offline: false,
        }
    }

    pub fn with_endpoint(mut self, endpoint: impl Into<String>) -> Self {
        self.endpoint = endpoint.into();
        self
    }

    pub fn with_api_key(mut self, key: Option<String>) -> Self {
        self.api_key = key.filter(|k| !k.is_empty());
        self
    }

    pub fn with_retry_policy(mut self, policy: RetryPolicy) -> Self {
        self.policy = policy;
        self
    }

    /// Serve only from the cache; a miss is a validation error.
    pub fn offline(mut self, offline: bool) -> Self {
        self.offline = offline;
        self
    }

    pub async fn fetch_pmc_count(&self, query: &str) -> Result<PmcCount> {
        if let Some(hit) = self.cache.lock().expect("cache lock").get(query, PMC_DB) {
            return Ok(PmcCount { count: hit.count, retrieved_at: hit.retrieved_at });
        }
        if self.offline {
            return Err(Error::Validation(format!("offline mode: no cached count for {query}")));
        }
        let mut params = vec![
            ("db".to_string(), PMC_DB.to_string()),
            ("term".to_string(), query.to_string()),
            ("retmode".to_string(), "json".to_string()),
            ("rettype".to_string(), "count".to_string()),
        ];
        if let Some(key) = &self.api_key {
            params.push(("api_key".to_string(), key.clone()));
        }
        let request = HttpRequest::get(self.endpoint.clone(), params);
        let resp = send_with_retry(self.transport.as_ref(), &request, &self.policy, Some(&self.limiter)).await?;
        let count = parse_count(&resp.body)?;
        let retrieved_at = Utc::now();
        self.cache.lock().expect("cache lock").insert(CacheEntry {
            query: query.to_string(),
            db: PMC_DB.to_string(),
            count,
            retrieved_at,
        })?;
        Ok(PmcCount { count, retrieved_at })
    }

    /// Gathers the three popularity proxies for every record, keeping input
    /// order. Identifiers absent from `annotations` get 0.
    pub async fn collect_popularity(
        &self,
        records: &[TermRecord],
        annotations: &BTreeMap<String, u64>,
        concurrency: usize,
    ) -> Result<Vec<PopularityRecord>> {
        stream::iter(records)
            .map(|r| async move {
                let id = self.fetch_pmc_count(&identifier_query(&r.identifier)).await?;
                let term = self.fetch_pmc_count(&term_query(&r.label)).await?;
                Ok::<_, Error>(PopularityRecord {
                    terminology: r.terminology,
                    identifier: r.identifier.clone(),
                    label: r.label.clone(),
                    id_count_pmc: id.count,
                    term_count_pmc: term.count,
                    annotation_count: annotations.get(&r.identifier).copied().unwrap_or(0),
                    retrieved_at: Some(id.retrieved_at.max(term.retrieved_at)),
                })
            })
            .buffered(concurrency.max(1))
            .try_collect()
            .await
    }
}

fn parse_count(body: &str) -> Result<u64> {
    let env: EsearchEnvelope = serde_json::from_str(body)
        .map_err(|e| Error::Protocol(format!("unexpected esearch response: {e}")))?;
    if let Some(err) = env.esearchresult.error {
        return Err(Error::Protocol(format!("esearch reported an error: {err}")));
    }
    let raw = env
        .esearchresult
        .count
        .ok_or_else(|| Error::Protocol("esearch response has no count".into()))?;
    raw.parse().map_err(|_| Error::Protocol(format!("esearch count {raw:?} is not an integer")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::http::testing::ScriptedTransport;

    fn client(t: Arc<ScriptedTransport>) -> PmcClient {
        PmcClient::new(t, Arc::new(RateLimiter::new(1000.0, 1000)), PopularityCache::in_memory())
    }

    fn body(count: &str) -> String {
        format!(r#"{{"header":{{"type":"esearch"}},"esearchresult":{{"count":"{count}"}}}}"#)
    }

    #[test]
    fn query_format() {
        assert_eq!(identifier_query("HP:0001337"), r#""HP:0001337"[All Fields]"#);
        assert_eq!(term_query("tremor  of \"hands\""), r#""tremor of hands"[All Fields]"#);
    }

    #[tokio::test(start_paused = true)]
    async fn echoes_count() {
        let t = Arc::new(ScriptedTransport::new(vec![ScriptedTransport::ok(&body("1234"))]));
        let c = client(t.clone()).with_api_key(Some("k".into()));
        assert_eq!(c.fetch_pmc_count("\"tremor\"[All Fields]").await.unwrap().count, 1234);
        let req = t.requests.lock().unwrap()[0].clone();
        assert!(req.query.contains(&("db".into(), "pmc".into())));
        assert!(req.query.contains(&("rettype".into(), "count".into())));
        assert!(req.query.contains(&("api_key".into(), "k".into())));
    }

    #[tokio::test(start_paused = true)]
    async fn retries_on_429() {
        let t = Arc::new(ScriptedTransport::new(vec![
            ScriptedTransport::status(429),
            ScriptedTransport::status(429),
            ScriptedTransport::ok(&body("7")),
        ]));
        assert_eq!(client(t.clone()).fetch_pmc_count("q").await.unwrap().count, 7);
        assert_eq!(t.call_count(), 3);
    }

    #[tokio::test(start_paused = true)]
    async fn zero_hits() {
        let t = Arc::new(ScriptedTransport::new(vec![ScriptedTransport::ok(&body("0"))]));
        assert_eq!(client(t).fetch_pmc_count("q").await.unwrap().count, 0);
    }

    #[tokio::test(start_paused = true)]
    async fn cache_prevents_second_call() {
        let t = Arc::new(ScriptedTransport::new(vec![ScriptedTransport::ok(&body("3"))]));
        let c = client(t.clone());
        let first = c.fetch_pmc_count("q").await.unwrap();
        let second = c.fetch_pmc_count("q").await.unwrap();
        assert_eq!(first, second);
        assert_eq!(t.call_count(), 1);
    }

    #[tokio::test(start_paused = true)]
    async fn malformed_body_is_protocol_error() {
        let t = Arc::new(ScriptedTransport::new(vec![ScriptedTransport::ok("<html>")]));
        assert!(matches!(client(t).fetch_pmc_count("q").await, Err(Error::Protocol(_))));
    }

    #[tokio::test(start_paused = true)]
    async fn offline_miss() {
        let t = Arc::new(ScriptedTransport::new(vec![]));
        let c = client(t.clone()).offline(true);
        assert!(matches!(c.fetch_pmc_count("q").await, Err(Error::Validation(_))));
        assert_eq!(t.call_count(), 0);
    }
}
