use std::collections::HashMap;
use std::sync::Arc;

use async_trait::async_trait;
use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::transcript::{prompt_hash, TranscriptEntry};
use crate::http::{send_with_retry, HttpRequest, HttpTransport, RateLimiter, RetryPolicy};

pub const DEFAULT_MAX_TOKENS: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecodingParams {
    pub temperature: f64,
    pub max_tokens: u32,
}

impl Default for DecodingParams {
    fn default() -> Self {
        Self { temperature: 0.0, max_tokens: DEFAULT_MAX_TOKENS }
    }
}

/// Outcome of one completion call plus the transcript record it produced.
#[derive(Debug, Clone)]
pub struct Exchange {
    pub output: Result<String, String>,
    pub entry: Option<TranscriptEntry>,
}

#[async_trait]
pub trait CompletionProvider: Send + Sync {
    async fn complete(&self, prompt_text: &str, model_id: &str, params: &DecodingParams) -> Exchange;
}

pub(crate) fn request_body(prompt_text: &str, model_id: &str, params: &DecodingParams) -> Value {
    json!({
        "model": model_id,
        "messages": [{"role": "user", "content": prompt_text}],
        "temperature": params.temperature,
        "max_tokens": params.max_tokens,
    })
}

fn content_of(response: &Value) -> Result<String, String> {
    if let Some(err) = response.get("error") {
        return Err(match err {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        });
    }
    response
        .pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| "response has no choices[0].message.content".to_string())
}

/// Chat-completions endpoint over HTTP; every call yields a transcript entry.
pub struct HttpCompletionProvider {
    transport: Arc<dyn HttpTransport>,
    endpoint: String,
    api_key: Option<String>,
    policy: RetryPolicy,
    limiter: Option<Arc<RateLimiter>>,
}

impl HttpCompletionProvider {
    pub fn new(transport: Arc<dyn HttpTransport>, endpoint: impl Into<String>, api_key: Option<String>) -> Self {
        Self { transport, endpoint: endpoint.into(), api_key, policy: RetryPolicy::default(), limiter: None }
    }

    pub fn with_retry_policy(mut self, policy: RetryPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_limiter(mut self, limiter: Arc<RateLimiter>) -> Self {
        self.limiter = Some(limiter);
        self
    }
}

#[async_trait]
impl CompletionProvider for HttpCompletionProvider {
    async fn complete(&self, prompt_text: &str, model_id: &str, params: &DecodingParams) -> Exchange {
        let body = request_body(prompt_text, model_id, params);
        let request = HttpRequest::post_json(self.endpoint.clone(), body.clone()).with_bearer(self.api_key.clone());
        let sent = send_with_retry(self.transport.as_ref(), &request, &self.policy, self.limiter.as_deref()).await;
        let response = match sent {
            Ok(resp) => serde_json::from_str::<Value>(&resp.body)
                .unwrap_or_else(|e| json!({"error": format!("response is not JSON: {e}")})),
            Err(e) => json!({"error": e.to_string()}),
        };
        let output = content_of(&response);
        Exchange {
            output,
            entry: Some(TranscriptEntry {
                prompt_hash: prompt_hash(model_id, prompt_text),
                request: body,
                response,
                timestamp: Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true),
            }),
        }
    }
}

/// Answers from a recorded transcript, keyed by prompt hash (last record
/// wins). Recorded entries are passed through unchanged, timestamps
/// included.
pub struct ReplayProvider {
    entries: HashMap<String, TranscriptEntry>,
}

impl ReplayProvider {
    pub fn new(entries: Vec<TranscriptEntry>) -> Self {
        Self { entries: entries.into_iter().map(|e| (e.prompt_hash.clone(), e)).collect() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[async_trait]
impl CompletionProvider for ReplayProvider {
    async fn complete(&self, prompt_text: &str, model_id: &str, _params: &DecodingParams) -> Exchange {
        let hash = prompt_hash(model_id, prompt_text);
        match self.entries.get(&hash) {
            Some(entry) => Exchange { output: content_of(&entry.response), entry: Some(entry.clone()) },
            None => Exchange { output: Err(format!("no recorded response for prompt hash {hash}")), entry: None },
        }
    }
}
