//! Minimal HTTP abstraction shared by the E-utilities, completion and
//! embedding clients, plus the retry policy and rate limiter they use.
//!
//! Production code goes through [`ReqwestTransport`]; tests substitute a
//! scripted [`HttpTransport`].

use std::sync::{Arc, OnceLock};
use std::time::Duration;

use async_trait::async_trait;
use tokio::sync::Mutex;
use tokio::time::Instant;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Get,
    Post,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HttpRequest {
    pub method: Method,
    pub url: String,
    pub query: Vec<(String, String)>,
    pub bearer_token: Option<String>,
    pub json_body: Option<serde_json::Value>,
}

impl HttpRequest {
    pub fn get(url: impl Into<String>, query: Vec<(String, String)>) -> Self {
        Self { method: Method::Get, url: url.into(), query, bearer_token: None, json_body: None }
    }

    pub fn post_json(url: impl Into<String>, body: serde_json::Value) -> Self {
        Self { method: Method::Post, url: url.into(), query: Vec::new(), bearer_token: None, json_body: Some(body) }
    }

    pub fn with_bearer(mut self, token: Option<String>) -> Self {
        self.bearer_token = token;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpResponse {
    pub status: u16,
    pub body: String,
}

/// A failure below the HTTP layer (connection refused, timeout, ...).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionError(pub String);

#[async_trait]
pub trait HttpTransport: Send + Sync {
    async fn send(&self, request: &HttpRequest) -> std::result::Result<HttpResponse, ConnectionError>;
}

pub struct ReqwestTransport {
    client: reqwest::Client,
}

impl ReqwestTransport {
    pub fn new(timeout: Duration) -> Result<Self> {
        let client = reqwest::Client::builder()
            .timeout(timeout)
            .user_agent(concat!("termbench/", env!("CARGO_PKG_VERSION")))
            .build()
            .map_err(|e| Error::PermanentTransport(format!("building HTTP client: {e}")))?;
        Ok(Self { client })
    }
}

#[async_trait]
impl HttpTransport for ReqwestTransport {
    async fn send(&self, request: &HttpRequest) -> std::result::Result<HttpResponse, ConnectionError> {
        let mut builder = match request.method {
            Method::Get => self.client.get(&request.url),
            Method::Post => self.client.post(&request.url),
        };
        if !request.query.is_empty() {
            builder = builder.query(&request.query);
        }
        if let Some(token) = &request.bearer_token {
            builder = builder.bearer_auth(token);
        }
        if let Some(body) = &request.json_body {
            builder = builder.json(body);
        }
        let response = builder.send().await.map_err(|e| ConnectionError(e.to_string()))?;
        let status = response.status().as_u16();
        let body = response.text().await.map_err(|e| ConnectionError(e.to_string()))?;
        Ok(HttpResponse { status, body })
    }
}

/// Exponential backoff: attempt `i` (0-based) waits `base · factor^i`
/// before the next try.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetryPolicy {
    pub base: Duration,
    pub factor: u32,
    pub max_attempts: u32,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self { base: Duration::from_secs(1), factor: 2, max_attempts: 5 }
    }
}

impl RetryPolicy {
    pub fn delay_after(&self, attempt: u32) -> Duration {
        self.base * self.factor.saturating_pow(attempt)
    }
}

fn is_retryable(status: u16) -> bool {
    status == 429 || (500..600).contains(&status)
}

/// Sends `request`, retrying 429, 5xx and connection failures under
/// `policy`. Returns the first 2xx response body.
pub async fn send_with_retry(
    transport: &dyn HttpTransport,
    request: &HttpRequest,
    policy: &RetryPolicy,
    limiter: Option<&RateLimiter>,
) -> Result<HttpResponse> {
    let mut last = String::new();
    for attempt in 0..policy.max_attempts {
        if let Some(limiter) = limiter {
            limiter.acquire().await;
        }
        match transport.send(request).await {
            Ok(resp) if (200..300).contains(&resp.status) => return Ok(resp),
            Ok(resp) if is_retryable(resp.status) => {
                last = format!("HTTP {} from {}", resp.status, request.url);
            }
            Ok(resp) => {
                return Err(Error::PermanentTransport(format!(
                    "HTTP {} from {}: {}",
                    resp.status,
                    request.url,
                    truncate(&resp.body, 200)
                )))
            }
            Err(ConnectionError(msg)) => last = format!("{}: {msg}", request.url),
        }
        if attempt + 1 < policy.max_attempts {
            log::debug!("retrying after {last} (attempt {})", attempt + 1);
            tokio::time::sleep(policy.delay_after(attempt)).await;
        }
    }
    Err(Error::TransientTransport(format!("{last} after {} attempts", policy.max_attempts)))
}

fn truncate(s: &str, n: usize) -> &str {
    match s.char_indices().nth(n) {
        Some((i, _)) => &s[..i],
        None => s,
    }
}

/// Token bucket limiter. The bucket holds at most `burst` tokens and refills
/// at `rate` tokens per second.
#[derive(Debug)]
pub struct RateLimiter {
    rate: f64,
    burst: f64,
    state: Mutex<Bucket>,
}

#[derive(Debug)]
struct Bucket {
    tokens: f64,
    refilled_at: Instant,
}

impl RateLimiter {
    pub fn new(rate_per_second: f64, burst: u32) -> Self {
        assert!(rate_per_second > 0.0 && burst > 0);
        Self {
            rate: rate_per_second,
            burst: f64::from(burst),
            state: Mutex::new(Bucket { tokens: f64::from(burst), refilled_at: Instant::now() }),
        }
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub async fn acquire(&self) {
        loop {
            let wait = {
                let mut bucket = self.state.lock().await;
                let now = Instant::now();
                let elapsed = now.duration_since(bucket.refilled_at).as_secs_f64();
                bucket.tokens = (bucket.tokens + elapsed * self.rate).min(self.burst);
                bucket.refilled_at = now;
                if bucket.tokens >= 1.0 {
                    bucket.tokens -= 1.0;
                    return;
                }
                Duration::from_secs_f64((1.0 - bucket.tokens) / self.rate)
            };
            tokio::time::sleep(wait).await;
        }
    }
}

/// The process-wide E-utilities limiter: 3 requests/second without an API
/// key, 10 with one. The first caller fixes the rate for the process.
pub fn eutils_limiter(has_api_key: bool) -> Arc<RateLimiter> {
    static LIMITER: OnceLock<Arc<RateLimiter>> = OnceLock::new();
    LIMITER
        .get_or_init(|| {
            let rate = if has_api_key { 10.0 } else { 3.0 };
            Arc::new(RateLimiter::new(rate, 1))
        })
        .clone()
}

#[cfg(test)]
pub(crate) mod testing {
    use std::collections::VecDeque;
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Mutex as StdMutex;

    use super::*;

    /// Replays a fixed queue of responses and counts calls.
    pub struct ScriptedTransport {
        script: StdMutex<VecDeque<std::result::Result<HttpResponse, ConnectionError>>>,
        pub calls: AtomicUsize,
        pub requests: StdMutex<Vec<HttpRequest>>,
    }

    impl ScriptedTransport {
        pub fn new(script: Vec<std::result::Result<HttpResponse, ConnectionError>>) -> Self {
            Self { script: StdMutex::new(script.into()), calls: AtomicUsize::new(0), requests: StdMutex::new(vec![]) }
        }

        pub fn ok(body: &str) -> std::result::Result<HttpResponse, ConnectionError> {
            Ok(HttpResponse { status: 200, body: body.to_string() })
        }

        pub fn status(status: u16) -> std::result::Result<HttpResponse, ConnectionError> {
            Ok(HttpResponse { status, body: String::new() })
        }

        pub fn call_count(&self) -> usize {
            self.calls.load(Ordering::SeqCst)
        }
    }

    #[async_trait]
    impl HttpTransport for ScriptedTransport {
        async fn send(&self, request: &HttpRequest) -> std::result::Result<HttpResponse, ConnectionError> {
            self.calls.fetch_add(1, Ordering::SeqCst);
            self.requests.lock().unwrap().push(request.clone());
            self.script
                .lock()
                .unwrap()
                .pop_front()
                .unwrap_or_else(|| Err(ConnectionError("script exhausted".into())))
        }
    }
}
