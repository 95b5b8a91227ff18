//! HTTP provider speaking the common chat-completions wire format.
//!
//! POSTs `{model, messages: [{role: "user", content: prompt}]}` to the
//! configured endpoint with a bearer credential read from an environment
//! variable, and extracts `choices[0].message.content`.

use std::time::Duration;

use serde_json::json;

use crate::error::{Error, Result};

use super::client::{Provider, ProviderFailure};

pub struct HttpProvider {
    endpoint: String,
    model: String,
    api_key: String,
    client: reqwest::blocking::Client,
}

impl HttpProvider {
    /// `credential_env` names the environment variable holding the API key;
    /// credentials never live in config files.
    pub fn new(endpoint: &str, model: &str, credential_env: &str) -> Result<HttpProvider> {
        let api_key = std::env::var(credential_env).map_err(|_| {
            Error::Auth(format!("environment variable {credential_env} is not set"))
        })?;
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(120))
            .build()
            .map_err(|e| Error::Validation(e.to_string()))?;
        Ok(HttpProvider {
            endpoint: endpoint.trim_end_matches('/').to_string(),
            model: model.to_string(),
            api_key,
            client,
        })
    }
}

impl Provider for HttpProvider {
    fn id(&self) -> &str {
        &self.model
    }

    fn complete(&self, prompt: &str) -> std::result::Result<String, ProviderFailure> {
        let body = json!({
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
        });
        let response = self
            .client
            .post(format!("{}/chat/completions", self.endpoint))
            .bearer_auth(&self.api_key)
            .json(&body)
            .send()
            .map_err(|e| ProviderFailure::transient(e.to_string()))?;
        let status = response.status();
        if status.as_u16() == 401 || status.as_u16() == 403 {
            return Err(ProviderFailure::auth(format!("provider rejected credential ({status})")));
        }
        if status.as_u16() == 429 || status.is_server_error() {
            return Err(ProviderFailure::transient(format!("status {status}")));
        }
        if !status.is_success() {
            return Err(ProviderFailure::fatal(format!("status {status}")));
        }
        let value: serde_json::Value = response
            .json()
            .map_err(|e| ProviderFailure::fatal(format!("bad response body: {e}")))?;
        value["choices"][0]["message"]["content"]
            .as_str()
            .map(|s| s.to_string())
            .ok_or_else(|| ProviderFailure::fatal("response lacks choices[0].message.content".into()))
    }
}
