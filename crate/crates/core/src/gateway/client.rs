//! Provider-agnostic completion client with bounded concurrency and retries.

use std::sync::{Arc, Condvar, Mutex};
use std::time::{Duration, Instant};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A completion backend. Implementations must be shareable across threads.
pub trait Provider: Send + Sync {
    fn id(&self) -> &str;
    fn complete(&self, prompt: &str) -> std::result::Result<String, ProviderFailure>;
}

/// Failure reported by a provider. Retryable failures (timeouts, 5xx,
/// rate limits) are retried with backoff; the rest abort immediately.
#[derive(Debug, Clone)]
pub struct ProviderFailure {
    pub retryable: bool,
    pub auth: bool,
    pub message: String,
}

impl ProviderFailure {
    pub fn transient(message: impl Into<String>) -> Self {
        ProviderFailure {
            retryable: true,
            auth: false,
            message: message.into(),
        }
    }

    pub fn fatal(message: impl Into<String>) -> Self {
        ProviderFailure {
            retryable: false,
            auth: false,
            message: message.into(),
        }
    }

    pub fn auth(message: impl Into<String>) -> Self {
        ProviderFailure {
            retryable: false,
            auth: true,
            message: message.into(),
        }
    }
}

/// Retry contract: up to `max_attempts` tries with exponential backoff
/// starting at `base_delay_ms`, jittered.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub base_delay_ms: u64,
    pub jitter: bool,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_attempts: 5,
            base_delay_ms: 1000,
            jitter: true,
        }
    }
}

impl RetryPolicy {
    /// Zero-delay policy for tests and mock runs.
    pub fn immediate(max_attempts: u32) -> Self {
        RetryPolicy {
            max_attempts,
            base_delay_ms: 0,
            jitter: false,
        }
    }

    fn delay(&self, attempt: u32) -> Duration {
        if self.base_delay_ms == 0 {
            return Duration::ZERO;
        }
        let base = self.base_delay_ms.saturating_mul(1u64 << (attempt - 1).min(16));
        let ms = if self.jitter {
            let factor: f64 = rand::rng().random_range(0.5..1.5);
            (base as f64 * factor) as u64
        } else {
            base
        };
        Duration::from_millis(ms)
    }
}

/// One request/response exchange; an append-only audit record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompletionExchange {
    pub template_name: String,
    pub rendered_prompt: String,
    pub reply: String,
    pub provider_id: String,
    pub attempt_count: u32,
    pub latency_ms: u64,
}

/// Per-worker exchange buffer. Workers keep their own log and the stage
/// writer concatenates buffers in work-item order, so audit output is
/// deterministic regardless of scheduling.
pub type ExchangeLog = Vec<CompletionExchange>;

/// Counting semaphore bounding in-flight requests.
struct Permits {
    state: Mutex<usize>,
    cv: Condvar,
}

impl Permits {
    fn new(count: usize) -> Self {
        Permits {
            state: Mutex::new(count.max(1)),
            cv: Condvar::new(),
        }
    }

    fn acquire(&self) -> PermitGuard<'_> {
        let mut available = self.state.lock().unwrap();
        while *available == 0 {
            available = self.cv.wait(available).unwrap();
        }
        *available -= 1;
        PermitGuard { permits: self }
    }
}

struct PermitGuard<'a> {
    permits: &'a Permits,
}

impl Drop for PermitGuard<'_> {
    fn drop(&mut self) {
        let mut available = self.permits.state.lock().unwrap();
        *available += 1;
        self.permits.cv.notify_one();
    }
}

/// The completion client. Cheap to clone and safe to share.
#[derive(Clone)]
pub struct Gateway {
    provider: Arc<dyn Provider>,
    retry: RetryPolicy,
    permits: Arc<Permits>,
}

impl Gateway {
    pub fn new(provider: Arc<dyn Provider>, retry: RetryPolicy, permits: usize) -> Gateway {
        Gateway {
            provider,
            retry,
            permits: Arc::new(Permits::new(permits)),
        }
    }

    pub fn provider_id(&self) -> &str {
        self.provider.id()
    }

    /// Completes a prompt, retrying transient failures, and appends the
    /// exchange to `log`.
    pub fn complete(&self, template_name: &str, prompt: &str, log: &mut ExchangeLog) -> Result<String> {
        let _permit = self.permits.acquire();
        let started = Instant::now();
        let mut last_message = String::new();
        for attempt in 1..=self.retry.max_attempts {
            match self.provider.complete(prompt) {
                Ok(reply) => {
                    log.push(CompletionExchange {
                        template_name: template_name.to_string(),
                        rendered_prompt: prompt.to_string(),
                        reply: reply.clone(),
                        provider_id: self.provider.id().to_string(),
                        attempt_count: attempt,
                        latency_ms: started.elapsed().as_millis() as u64,
                    });
                    return Ok(reply);
                }
                Err(failure) if failure.auth => {
                    return Err(Error::Auth(failure.message));
                }
                Err(failure) if !failure.retryable => {
                    return Err(Error::Transport {
                        attempts: attempt,
                        message: failure.message,
                    });
                }
                Err(failure) => {
                    last_message = failure.message;
                    if attempt < self.retry.max_attempts {
                        std::thread::sleep(self.retry.delay(attempt));
                    }
                }
            }
        }
        Err(Error::Transport {
            attempts: self.retry.max_attempts,
            message: last_message,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicU32, Ordering};

    struct FlakyProvider {
        fail_times: AtomicU32,
        reply: String,
    }

    impl Provider for FlakyProvider {
        fn id(&self) -> &str {
            "flaky"
        }
        fn complete(&self, _prompt: &str) -> std::result::Result<String, ProviderFailure> {
            if self.fail_times.fetch_update(Ordering::SeqCst, Ordering::SeqCst, |v| v.checked_sub(1)).is_ok()
            {
                Err(ProviderFailure::transient("injected"))
            } else {
                Ok(self.reply.clone())
            }
        }
    }

    struct AuthFailProvider;

    impl Provider for AuthFailProvider {
        fn id(&self) -> &str {
            "authfail"
        }
        fn complete(&self, _prompt: &str) -> std::result::Result<String, ProviderFailure> {
            Err(ProviderFailure::auth("invalid credential"))
        }
    }

    #[test]
    fn two_transient_failures_then_success() {
        let gateway = Gateway::new(
            Arc::new(FlakyProvider {
                fail_times: AtomicU32::new(2),
                reply: "ok".into(),
            }),
            RetryPolicy::immediate(5),
            2,
        );
        let mut log = ExchangeLog::new();
        let reply = gateway.complete("test", "prompt", &mut log).unwrap();
        assert_eq!(reply, "ok");
        assert_eq!(log.len(), 1);
        assert_eq!(log[0].attempt_count, 3);
    }

    #[test]
    fn exhausted_retries_is_transport_error() {
        let gateway = Gateway::new(
            Arc::new(FlakyProvider {
                fail_times: AtomicU32::new(100),
                reply: "never".into(),
            }),
            RetryPolicy::immediate(3),
            1,
        );
        let mut log = ExchangeLog::new();
        match gateway.complete("test", "p", &mut log) {
            Err(Error::Transport { attempts, .. }) => assert_eq!(attempts, 3),
            other => panic!("expected transport error, got {other:?}"),
        }
        assert!(log.is_empty());
    }

    #[test]
    fn auth_failure_not_retried() {
        let gateway = Gateway::new(Arc::new(AuthFailProvider), RetryPolicy::immediate(5), 1);
        let mut log = ExchangeLog::new();
        match gateway.complete("test", "p", &mut log) {
            Err(Error::Auth(_)) => {}
            other => panic!("expected auth error, got {other:?}"),
        }
    }
}
