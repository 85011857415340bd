//! HTTP client for an external model endpoint that reports first-token
//! log-probabilities.

use std::sync::{Condvar, Mutex};
use std::time::Duration;

use base64::Engine;
use serde::{Deserialize, Serialize};

use super::{
    ExplorationInput, MapInput, Oracle, OracleError, PerceptionInput, PromptBundle, SelectionDistribution, Stage,
};
use crate::params::DecodingParams;

/// Environment variable holding the endpoint URL.
pub const ORACLE_URL_ENV: &str = "SEMNAV_ORACLE_URL";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRequest {
    pub purpose: Stage,
    pub instruction: String,
    /// Base64-encoded PNG images.
    pub images: Vec<String>,
    pub options: Vec<String>,
    pub temperature: f64,
    pub top_p: f64,
    pub max_tokens: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenLogprob {
    pub token: String,
    pub logprob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreResponse {
    pub text: String,
    #[serde(default)]
    pub token_logprobs: Vec<TokenLogprob>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RemoteConfig {
    pub url: String,
    pub timeout: Duration,
    pub max_in_flight: usize,
    pub decoding: DecodingParams,
}

impl RemoteConfig {
    /// Reads the URL from [`ORACLE_URL_ENV`].
    pub fn from_env(max_in_flight: usize, decoding: DecodingParams) -> Result<Self, OracleError> {
        let url = std::env::var(ORACLE_URL_ENV)
            .map_err(|_| OracleError::Transport(format!("{ORACLE_URL_ENV} is not set")))?;
        Ok(Self {
            url,
            timeout: Duration::from_secs(60),
            max_in_flight,
            decoding,
        })
    }
}

struct Gate {
    used: Mutex<usize>,
    freed: Condvar,
    limit: usize,
}

impl Gate {
    fn run<T>(&self, f: impl FnOnce() -> T) -> T {
        {
            let mut used = self.used.lock().expect("gate lock");
            while *used >= self.limit {
                used = self.freed.wait(used).expect("gate lock");
            }
            *used += 1;
        }
        let out = f();
        *self.used.lock().expect("gate lock") -= 1;
        self.freed.notify_one();
        out
    }
}

pub struct RemoteOracle {
    config: RemoteConfig,
    client: reqwest::blocking::Client,
    gate: Gate,
}

fn normalize_token(t: &str) -> String {
    t.trim()
        .trim_start_matches('\u{2581}')
        .trim_start_matches('Ġ')
        .to_ascii_lowercase()
}

/// Softmax restricted to `options` over the first-token log-probabilities;
/// falls back to matching the answer text when no option token is present.
pub fn extract_distribution(
    options: &[String],
    response: &ScoreResponse,
) -> Result<SelectionDistribution, OracleError> {
    let mut logits = vec![f64::NEG_INFINITY; options.len()];
    for tl in &response.token_logprobs {
        let tok = normalize_token(&tl.token);
        if let Some(i) = options.iter().position(|o| o.to_ascii_lowercase() == tok) {
            logits[i] = logits[i].max(tl.logprob);
        }
    }
    if logits.iter().any(|l| l.is_finite()) {
        return Ok(SelectionDistribution::softmax(options.to_vec(), &logits));
    }
    let words: Vec<String> = response
        .text
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(|w| w.to_ascii_lowercase())
        .collect();
    for w in &words {
        if let Some(i) = options.iter().position(|o| o.to_ascii_lowercase() == *w) {
            let mut d = SelectionDistribution::one_hot(options.to_vec(), i);
            d.degraded = true;
            return Ok(d);
        }
    }
    Err(OracleError::Contract(format!(
        "answer names none of {options:?}: {:?}",
        response.text
    )))
}

impl RemoteOracle {
    pub fn new(config: RemoteConfig) -> Result<Self, OracleError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(config.timeout)
            .build()
            .map_err(|e| OracleError::Transport(e.to_string()))?;
        let limit = config.max_in_flight.max(1);
        Ok(Self {
            config,
            client,
            gate: Gate {
                used: Mutex::new(0),
                freed: Condvar::new(),
                limit,
            },
        })
    }

    pub fn request_for(&self, prompt: &PromptBundle) -> ScoreRequest {
        let b64 = base64::engine::general_purpose::STANDARD;
        ScoreRequest {
            purpose: prompt.stage,
            instruction: prompt.instruction.clone(),
            images: prompt.images.iter().map(|i| b64.encode(i)).collect(),
            options: prompt.options.clone(),
            temperature: self.config.decoding.temperature,
            top_p: self.config.decoding.top_p,
            max_tokens: self.config.decoding.max_tokens,
        }
    }

    fn post_once(&self, req: &ScoreRequest) -> Result<ScoreResponse, OracleError> {
        let resp = self.client.post(&self.config.url).json(req).send().map_err(|e| {
            if e.is_timeout() {
                OracleError::Timeout
            } else {
                OracleError::Transport(e.to_string())
            }
        })?;
        if !resp.status().is_success() {
            return Err(OracleError::Transport(format!("status {}", resp.status())));
        }
        resp.json::<ScoreResponse>()
            .map_err(|e| OracleError::Contract(e.to_string()))
    }

    /// Sends a prompt, retrying once on transport failure or timeout.
    pub fn query(&self, prompt: &PromptBundle) -> Result<ScoreResponse, OracleError> {
        let req = self.request_for(prompt);
        self.gate.run(|| match self.post_once(&req) {
            Err(OracleError::Transport(_)) | Err(OracleError::Timeout) => self.post_once(&req),
            other => other,
        })
    }

    fn yes_probability(&self, prompt: &PromptBundle) -> Result<f64, OracleError> {
        let d = extract_distribution(&prompt.options, &self.query(prompt)?)?;
        d.prob("Yes")
            .ok_or_else(|| OracleError::Contract("prompt options lack Yes".into()))
    }
}

impl Oracle for RemoteOracle {
    fn wants_images(&self) -> bool {
        true
    }

    fn perceive(&self, input: &PerceptionInput<'_>) -> Result<String, OracleError> {
        Ok(self.query(input.prompt)?.text)
    }

    fn exploration_score(&self, input: &ExplorationInput<'_>) -> Result<f64, OracleError> {
        self.yes_probability(input.prompt)
    }

    fn judgment_score(&self, input: &MapInput<'_>) -> Result<f64, OracleError> {
        self.yes_probability(input.prompt)
    }

    fn decision_scores(&self, input: &MapInput<'_>) -> Result<SelectionDistribution, OracleError> {
        extract_distribution(&input.prompt.options, &self.query(input.prompt)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resp(text: &str, lps: &[(&str, f64)]) -> ScoreResponse {
        ScoreResponse {
            text: text.into(),
            token_logprobs: lps
                .iter()
                .map(|(t, l)| TokenLogprob {
                    token: t.to_string(),
                    logprob: *l,
                })
                .collect(),
        }
    }

    fn yes_no() -> Vec<String> {
        vec!["Yes".into(), "No".into()]
    }

    #[test]
    fn restricted_softmax_ignores_other_tokens() {
        let d = extract_distribution(
            &yes_no(),
            &resp(
                "Yes",
                &[("Yes", (0.6f64).ln()), ("No", (0.2f64).ln()), ("Maybe", (0.2f64).ln())],
            ),
        )
        .unwrap();
        assert!((d.probs[0] - 0.75).abs() < 1e-12);
        assert!(!d.degraded);
    }

    #[test]
    fn text_fallback_is_flagged() {
        let d = extract_distribution(&yes_no(), &resp("No, keep going back.", &[])).unwrap();
        assert_eq!(d.probs, [0.0, 1.0]);
        assert!(d.degraded);
        assert!(extract_distribution(&yes_no(), &resp("perhaps", &[])).is_err());
    }
}
