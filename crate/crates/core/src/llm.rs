//! Chat-completion client with record/replay cassettes.
//!
//! Every request is content-addressed by a digest over (model, messages,
//! temperature) with a fixed serialization, so a cassette recorded on one
//! machine replays byte-identically on another. Replay mode never touches
//! the network; record mode appends to the cassette under a writer lock and
//! reuses stored entries, making batch recording resumable.

use std::collections::HashMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Condvar, Mutex, RwLock};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::prompt::{Message, PromptDoc, Role};

#[derive(Debug, thiserror::Error)]
pub enum LlmError {
    #[error("cassette miss for request {hash} (replay mode)")]
    CassetteMiss { hash: String },
    #[error("cassette io error on {path}: {source}")]
    CassetteIo {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cassette line {line} is malformed: {details}")]
    CassetteFormat { line: usize, details: String },
    #[error("no backend configured for {0} mode")]
    NoBackend(&'static str),
    #[error("transport failure after {attempts} attempts: {details}")]
    Transport { attempts: u32, details: String },
    #[error("endpoint returned no choices")]
    EmptyResponse,
    #[error("response contains no extractable code")]
    NoCode,
    #[error("API key missing: set {0}")]
    MissingApiKey(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FinishReason {
    Stop,
    Length,
    Other,
}

/// A chat request; `request_hash` is recomputable from the other fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub model: String,
    pub messages: Vec<Message>,
    /// `None` uses the endpoint default; recorded into the cassette either
    /// way so replays pin it.
    pub temperature: Option<f64>,
}

impl ChatRequest {
    pub fn from_prompt(model: &str, prompt: &PromptDoc, temperature: Option<f64>) -> ChatRequest {
        ChatRequest {
            model: model.to_string(),
            messages: prompt.messages.clone(),
            temperature,
        }
    }

    /// Stable content digest: sha256 over a fixed-field-order JSON
    /// serialization of (model, messages, temperature).
    pub fn request_hash(&self) -> String {
        #[derive(Serialize)]
        struct Canonical<'a> {
            model: &'a str,
            messages: &'a [Message],
            temperature: &'a Option<f64>,
        }
        let canonical = serde_json::to_string(&Canonical {
            model: &self.model,
            messages: &self.messages,
            temperature: &self.temperature,
        })
        .expect("canonical request serialization");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        format!("{:x}", hasher.finalize())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatResponse {
    pub raw_text: String,
    pub finish_reason: FinishReason,
    pub latency_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CassetteMode {
    Record,
    Replay,
    Passthrough,
}

/// One cassette line: the full request alongside its response, keyed by the
/// request hash.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct CassetteEntry {
    request_hash: String,
    model: String,
    temperature: Option<f64>,
    messages: Vec<Message>,
    response: ChatResponse,
}

/// A line-delimited store of request-hash → response.
pub struct Cassette {
    pub mode: CassetteMode,
    path: Option<PathBuf>,
    entries: RwLock<HashMap<String, CassetteEntry>>,
    writer: Mutex<Option<std::fs::File>>,
}

impl Cassette {
    /// Open for replay: all entries are loaded up front; lookups never hit
    /// the network or the disk again.
    pub fn replay(path: &Path) -> Result<Cassette, LlmError> {
        let entries = Self::load(path)?;
        Ok(Cassette {
            mode: CassetteMode::Replay,
            path: Some(path.to_path_buf()),
            entries: RwLock::new(entries),
            writer: Mutex::new(None),
        })
    }

    /// Open for recording; existing entries are kept and reused (last entry
    /// for a hash wins, keeping the format append-friendly).
    pub fn record(path: &Path) -> Result<Cassette, LlmError> {
        let entries = if path.exists() {
            Self::load(path)?
        } else {
            HashMap::new()
        };
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| LlmError::CassetteIo {
                path: parent.to_path_buf(),
                source: e,
            })?;
        }
        let file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| LlmError::CassetteIo {
                path: path.to_path_buf(),
                source: e,
            })?;
        Ok(Cassette {
            mode: CassetteMode::Record,
            path: Some(path.to_path_buf()),
            entries: RwLock::new(entries),
            writer: Mutex::new(Some(file)),
        })
    }

    /// No storage at all; every send goes to the backend.
    pub fn passthrough() -> Cassette {
        Cassette {
            mode: CassetteMode::Passthrough,
            path: None,
            entries: RwLock::new(HashMap::new()),
            writer: Mutex::new(None),
        }
    }

    fn load(path: &Path) -> Result<HashMap<String, CassetteEntry>, LlmError> {
        let text = std::fs::read_to_string(path).map_err(|e| LlmError::CassetteIo {
            path: path.to_path_buf(),
            source: e,
        })?;
        let mut map = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let entry: CassetteEntry =
                serde_json::from_str(line).map_err(|e| LlmError::CassetteFormat {
                    line: i + 1,
                    details: e.to_string(),
                })?;
            map.insert(entry.request_hash.clone(), entry);
        }
        Ok(map)
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, hash: &str) -> bool {
        self.entries.read().unwrap().contains_key(hash)
    }

    fn get(&self, hash: &str) -> Option<ChatResponse> {
        self.entries
            .read()
            .unwrap()
            .get(hash)
            .map(|e| e.response.clone())
    }

    fn store(&self, req: &ChatRequest, hash: &str, response: &ChatResponse) -> Result<(), LlmError> {
        let entry = CassetteEntry {
            request_hash: hash.to_string(),
            model: req.model.clone(),
            temperature: req.temperature,
            messages: req.messages.clone(),
            response: response.clone(),
        };
        let mut writer = self.writer.lock().unwrap();
        if let Some(file) = writer.as_mut() {
            let line = serde_json::to_string(&entry).expect("cassette entry serialization");
            writeln!(file, "{line}").map_err(|e| LlmError::CassetteIo {
                path: self.path.clone().unwrap_or_default(),
                source: e,
            })?;
        }
        self.entries
            .write()
            .unwrap()
            .insert(hash.to_string(), entry);
        Ok(())
    }
}

/// Anything that can answer a chat request: the HTTP endpoint in production,
/// a scripted function in tests and cassette authoring.
pub trait Backend: Send + Sync {
    fn complete(&self, req: &ChatRequest) -> Result<ChatResponse, LlmError>;
}

/// Scripted backend over a closure.
pub struct FnBackend<F>(pub F);

impl<F> Backend for FnBackend<F>
where
    F: Fn(&ChatRequest) -> Result<ChatResponse, LlmError> + Send + Sync,
{
    fn complete(&self, req: &ChatRequest) -> Result<ChatResponse, LlmError> {
        self.0(req)
    }
}

/// Counting semaphore bounding live in-flight requests.
struct Semaphore {
    permits: Mutex<usize>,
    cv: Condvar,
}

impl Semaphore {
    fn new(permits: usize) -> Semaphore {
        Semaphore {
            permits: Mutex::new(permits.max(1)),
            cv: Condvar::new(),
        }
    }

    fn acquire(&self) -> SemaphoreGuard<'_> {
        let mut p = self.permits.lock().unwrap();
        while *p == 0 {
            p = self.cv.wait(p).unwrap();
        }
        *p -= 1;
        SemaphoreGuard(self)
    }
}

struct SemaphoreGuard<'a>(&'a Semaphore);

impl Drop for SemaphoreGuard<'_> {
    fn drop(&mut self) {
        *self.0.permits.lock().unwrap() += 1;
        self.0.cv.notify_one();
    }
}

/// Environment variable holding the API key.
pub const API_KEY_ENV: &str = "TESTFORGE_API_KEY";
/// Environment variable overriding the chat-completion endpoint URL.
pub const API_BASE_ENV: &str = "TESTFORGE_API_BASE";
const DEFAULT_ENDPOINT: &str = "https://api.openai.com/v1/chat/completions";

/// Live chat-completion backend. Retries transport failures and rate-limit
/// signals with exponential backoff.
pub struct HttpBackend {
    endpoint: String,
    api_key: String,
    client: reqwest::blocking::Client,
    max_attempts: u32,
    backoff_base: Duration,
    inflight: Semaphore,
}

impl HttpBackend {
    pub fn from_env(max_inflight: usize) -> Result<HttpBackend, LlmError> {
        let api_key = std::env::var(API_KEY_ENV)
            .or_else(|_| std::env::var("OPENAI_API_KEY"))
            .map_err(|_| LlmError::MissingApiKey(API_KEY_ENV))?;
        let endpoint =
            std::env::var(API_BASE_ENV).unwrap_or_else(|_| DEFAULT_ENDPOINT.to_string());
        Ok(HttpBackend {
            endpoint,
            api_key,
            client: reqwest::blocking::Client::builder()
                .timeout(Duration::from_secs(120))
                .build()
                .expect("http client"),
            max_attempts: 3,
            backoff_base: Duration::from_millis(500),
            inflight: Semaphore::new(max_inflight),
        })
    }

    fn attempt(&self, req: &ChatRequest) -> Result<ChatResponse, String> {
        #[derive(Serialize)]
        struct WireMessage<'a> {
            role: &'a str,
            content: &'a str,
        }
        #[derive(Serialize)]
        struct Body<'a> {
            model: &'a str,
            messages: Vec<WireMessage<'a>>,
            #[serde(skip_serializing_if = "Option::is_none")]
            temperature: Option<f64>,
            n: u32,
        }
        #[derive(Deserialize)]
        struct Choice {
            message: WireContent,
            finish_reason: Option<String>,
        }
        #[derive(Deserialize)]
        struct WireContent {
            content: Option<String>,
        }
        #[derive(Deserialize)]
        struct Reply {
            choices: Vec<Choice>,
        }

        let body = Body {
            model: &req.model,
            messages: req
                .messages
                .iter()
                .map(|m| WireMessage {
                    role: match m.role {
                        Role::System => "system",
                        Role::User => "user",
                    },
                    content: &m.content,
                })
                .collect(),
            temperature: req.temperature,
            n: 1,
        };

        let started = std::time::Instant::now();
        let resp = self
            .client
            .post(&self.endpoint)
            .bearer_auth(&self.api_key)
            .json(&body)
            .send()
            .map_err(|e| format!("send: {e}"))?;
        let status = resp.status();
        if status.as_u16() == 429 || status.is_server_error() {
            return Err(format!("retryable status {status}"));
        }
        if !status.is_success() {
            let text = resp.text().unwrap_or_default();
            return Err(format!("status {status}: {text}"));
        }
        let reply: Reply = resp.json().map_err(|e| format!("decode: {e}"))?;
        let choice = reply.choices.into_iter().next().ok_or("no choices")?;
        let finish_reason = match choice.finish_reason.as_deref() {
            Some("stop") => FinishReason::Stop,
            Some("length") => FinishReason::Length,
            _ => FinishReason::Other,
        };
        Ok(ChatResponse {
            raw_text: choice.message.content.unwrap_or_default(),
            finish_reason,
            latency_ms: started.elapsed().as_millis() as u64,
        })
    }
}

impl Backend for HttpBackend {
    fn complete(&self, req: &ChatRequest) -> Result<ChatResponse, LlmError> {
        let _permit = self.inflight.acquire();
        let mut last = String::new();
        for attempt in 0..self.max_attempts {
            if attempt > 0 {
                std::thread::sleep(self.backoff_base * 2u32.pow(attempt - 1));
            }
            match self.attempt(req) {
                Ok(resp) => return Ok(resp),
                Err(e) => {
                    log::warn!("chat attempt {} failed: {e}", attempt + 1);
                    last = e;
                }
            }
        }
        Err(LlmError::Transport {
            attempts: self.max_attempts,
            details: last,
        })
    }
}

/// Cassette-aware client facade.
pub struct Client {
    cassette: Cassette,
    backend: Option<Box<dyn Backend>>,
}

impl Client {
    pub fn new(cassette: Cassette, backend: Option<Box<dyn Backend>>) -> Client {
        Client { cassette, backend }
    }

    pub fn replay_only(cassette: Cassette) -> Client {
        Client {
            cassette,
            backend: None,
        }
    }

    pub fn cassette(&self) -> &Cassette {
        &self.cassette
    }

    /// Send a request through the cassette policy:
    /// - replay: stored response or a cassette-miss error, never network;
    /// - record: stored response when present, else live + append;
    /// - passthrough: always live.
    pub fn send(&self, req: &ChatRequest) -> Result<ChatResponse, LlmError> {
        let hash = req.request_hash();
        match self.cassette.mode {
            CassetteMode::Replay => self
                .cassette
                .get(&hash)
                .ok_or(LlmError::CassetteMiss { hash }),
            CassetteMode::Record => {
                if let Some(hit) = self.cassette.get(&hash) {
                    return Ok(hit);
                }
                let backend = self
                    .backend
                    .as_ref()
                    .ok_or(LlmError::NoBackend("record"))?;
                let resp = backend.complete(req)?;
                self.cassette.store(req, &hash, &resp)?;
                Ok(resp)
            }
            CassetteMode::Passthrough => {
                let backend = self
                    .backend
                    .as_ref()
                    .ok_or(LlmError::NoBackend("passthrough"))?;
                backend.complete(req)
            }
        }
    }
}

/// Extract test source from a model reply: the first fenced code block, or
/// the longest region that parses as a method or class. Line endings are
/// normalized.
pub fn extract_code_block(raw_text: &str) -> Result<String, LlmError> {
    let text = raw_text.replace("\r\n", "\n").replace('\r', "\n");

    // First fenced block wins.
    let mut in_fence = false;
    let mut block: Vec<&str> = Vec::new();
    for line in text.lines() {
        let t = line.trim_start();
        if t.starts_with("```") {
            if in_fence {
                return finish_block(&block);
            }
            in_fence = true;
            continue;
        }
        if in_fence {
            block.push(line);
        }
    }
    if in_fence && !block.is_empty() {
        // Unterminated fence: take what's there.
        return finish_block(&block);
    }

    // No fences: find the longest region that parses as a method or class.
    let lines: Vec<&str> = text.lines().collect();
    let mut best: Option<String> = None;
    for (i, line) in lines.iter().enumerate() {
        let t = line.trim_start();
        let looks_like_decl = t.starts_with('@')
            || t.starts_with("public ")
            || t.starts_with("protected ")
            || t.starts_with("private ")
            || t.starts_with("void ")
            || t.starts_with("class ")
            || t.starts_with("import ");
        if !looks_like_decl {
            continue;
        }
        // Expand to the last line where braces balance.
        let mut depth = 0i32;
        let mut opened = false;
        for (j, candidate_line) in lines.iter().enumerate().skip(i) {
            for c in candidate_line.chars() {
                match c {
                    '{' => {
                        depth += 1;
                        opened = true;
                    }
                    '}' => depth -= 1,
                    _ => {}
                }
            }
            if opened && depth == 0 {
                let snippet = lines[i..=j].join("\n");
                if crate::validate::check_syntax(&snippet)
                    && best.as_ref().map(|b| b.len() < snippet.len()).unwrap_or(true)
                {
                    best = Some(snippet);
                }
                break;
            }
        }
    }
    best.ok_or(LlmError::NoCode)
}

fn finish_block(lines: &[&str]) -> Result<String, LlmError> {
    // Drop a leading language tag line that some models emit inside fences.
    let body: Vec<&str> = lines
        .iter()
        .copied()
        .skip_while(|l| matches!(l.trim(), "java" | "Java"))
        .collect();
    let joined = body.join("\n");
    if joined.trim().is_empty() {
        Err(LlmError::NoCode)
    } else {
        Ok(joined)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prompt::{Message, Role};

    fn request(content: &str) -> ChatRequest {
        ChatRequest {
            model: "gpt-3.5-turbo".to_string(),
            messages: vec![
                Message {
                    role: Role::System,
                    content: "You are a professional who writes Java test methods.".to_string(),
                },
                Message {
                    role: Role::User,
                    content: content.to_string(),
                },
            ],
            temperature: None,
        }
    }

    fn response(text: &str) -> ChatResponse {
        ChatResponse {
            raw_text: text.to_string(),
            finish_reason: FinishReason::Stop,
            latency_ms: 12,
        }
    }

    #[test]
    fn request_hash_is_stable() {
        // Frozen digest: guards the canonical serialization across
        // platforms and refactorings.
        let req = request("hello");
        assert_eq!(
            req.request_hash(),
            "1884763bf61e896e33050d933112289abcac75f5453d47ceb77e8f533568b949"
        );
        assert_eq!(req.request_hash(), req.request_hash());
        let mut other = req.clone();
        other.temperature = Some(0.0);
        assert_ne!(req.request_hash(), other.request_hash());
    }

    #[test]
    fn record_then_replay_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cassette.jsonl");
        let req = request("write a test");
        let canned = response("```java\n@Test public void t() {}\n```");

        let recorder = Client::new(
            Cassette::record(&path).unwrap(),
            Some(Box::new(FnBackend(move |_: &ChatRequest| Ok(canned.clone())))),
        );
        let first = recorder.send(&req).unwrap();
        // Second send reuses the stored entry without calling the backend.
        let second = recorder.send(&req).unwrap();
        assert_eq!(first, second);
        drop(recorder);

        let replayer = Client::replay_only(Cassette::replay(&path).unwrap());
        let replayed = replayer.send(&req).unwrap();
        assert_eq!(replayed, first);
    }

    #[test]
    fn replay_miss_never_hits_backend() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cassette.jsonl");
        std::fs::write(&path, "").unwrap();
        let called = std::sync::Arc::new(std::sync::atomic::AtomicBool::new(false));
        let called2 = called.clone();
        let client = Client::new(
            Cassette::replay(&path).unwrap(),
            Some(Box::new(FnBackend(move |_: &ChatRequest| {
                called2.store(true, std::sync::atomic::Ordering::SeqCst);
                Ok(response("x"))
            }))),
        );
        let err = client.send(&request("missing")).unwrap_err();
        match err {
            LlmError::CassetteMiss { hash } => {
                assert_eq!(hash, request("missing").request_hash())
            }
            other => panic!("unexpected error: {other}"),
        }
        assert!(!called.load(std::sync::atomic::Ordering::SeqCst));
    }

    #[test]
    fn last_entry_wins_on_duplicate_hash() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cassette.jsonl");
        let req = request("dup");
        let hash = req.request_hash();
        let mk = |text: &str| {
            serde_json::to_string(&CassetteEntry {
                request_hash: hash.clone(),
                model: req.model.clone(),
                temperature: None,
                messages: req.messages.clone(),
                response: response(text),
            })
            .unwrap()
        };
        std::fs::write(&path, format!("{}\n{}\n", mk("old"), mk("new"))).unwrap();
        let client = Client::replay_only(Cassette::replay(&path).unwrap());
        assert_eq!(client.send(&req).unwrap().raw_text, "new");
    }

    #[test]
    fn extracts_first_fenced_block() {
        let raw = "Here is a test:\n```java\n@Test\npublic void t() { assertTrue(true); }\n```\nAnd another:\n```java\nsecond();\n```";
        let code = extract_code_block(raw).unwrap();
        assert!(code.contains("assertTrue(true)"));
        assert!(!code.contains("second()"));
    }

    #[test]
    fn prose_only_is_no_code() {
        assert!(matches!(
            extract_code_block("I cannot write that test, sorry."),
            Err(LlmError::NoCode)
        ));
    }

    #[test]
    fn unfenced_method_recovered() {
        let raw = "Sure!\n@Test\npublic void testX() {\n    assertEquals(1, 1);\n}\nHope this helps.";
        let code = extract_code_block(raw).unwrap();
        assert!(code.starts_with("@Test"));
        assert!(code.ends_with('}'));
    }

    #[test]
    fn crlf_normalized() {
        let raw = "```java\r\n@Test\r\npublic void t() {}\r\n```\r\n";
        let code = extract_code_block(raw).unwrap();
        assert!(!code.contains('\r'));
    }
}
