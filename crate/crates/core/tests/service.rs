//! Wire protocol: golden bodies and the HTTP client against a local mock.

mod common;

use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use evcoder::backend::{Embedder, QaAnswer, QaBackend, ScoreRange, Scorer};
use evcoder::model::ScoredLabel;
use evcoder::service::{
    ClassifyRequest, ClassifyResponse, EmbedRequest, EmbedResponse, QaRequest, ServiceClient, VERSION_HEADER,
};
use evcoder::BackendError;

fn golden(name: &str) -> String {
    common::read_fixture(&format!("protocol/{name}")).trim_end().to_string()
}

const TEXT: &str = "Police fired tear gas at protesters in Nairobi.";

#[test]
fn request_bodies_match_golden_bytes() {
    let c = ClassifyRequest {
        text: TEXT.into(),
        labels: vec!["PROTEST".into(), "ASSAULT".into()],
    };
    assert_eq!(serde_json::to_string(&c).unwrap(), golden("classify_request.json"));
    let q = QaRequest {
        context: TEXT.into(),
        question: "Where did the protest take place?".into(),
    };
    assert_eq!(serde_json::to_string(&q).unwrap(), golden("qa_request.json"));
    let e = EmbedRequest {
        texts: vec!["Barack Obama".into(), "44th president of the United States".into()],
    };
    assert_eq!(serde_json::to_string(&e).unwrap(), golden("embed_request.json"));
}

#[test]
fn response_bodies_round_trip() {
    for name in ["classify_response.json", "qa_response.json", "embed_response.json"] {
        let src = golden(name);
        let again = match name {
            "classify_response.json" => {
                serde_json::to_string(&serde_json::from_str::<ClassifyResponse>(&src).unwrap()).unwrap()
            }
            "qa_response.json" => serde_json::to_string(&serde_json::from_str::<QaAnswer>(&src).unwrap()).unwrap(),
            _ => serde_json::to_string(&serde_json::from_str::<EmbedResponse>(&src).unwrap()).unwrap(),
        };
        assert_eq!(again, src, "{name}");
    }
    let none: Option<QaAnswer> = serde_json::from_str(&golden("qa_response_unanswerable.json")).unwrap();
    assert!(none.is_none());
}

struct Reply {
    status: u16,
    body: String,
    version: Option<&'static str>,
}

impl Reply {
    fn ok(body: String) -> Self {
        Reply {
            status: 200,
            body,
            version: Some("mock-1.2"),
        }
    }
}

/// Serve `replies` in order; every request (path, body) is sent back on the
/// returned channel.
fn mock(replies: Vec<Reply>) -> (String, mpsc::Receiver<(String, String)>, thread::JoinHandle<()>) {
    let server = tiny_http::Server::http("127.0.0.1:0").unwrap();
    let url = format!("http://{}", server.server_addr().to_ip().unwrap());
    let (tx, rx) = mpsc::channel();
    let h = thread::spawn(move || {
        for r in replies {
            let mut req = server.recv().unwrap();
            let mut body = String::new();
            req.as_reader().read_to_string(&mut body).unwrap();
            tx.send((req.url().to_string(), body)).unwrap();
            let mut resp = tiny_http::Response::from_string(r.body).with_status_code(r.status);
            if let Some(v) = r.version {
                resp.add_header(tiny_http::Header::from_bytes(VERSION_HEADER.as_bytes(), v.as_bytes()).unwrap());
            }
            req.respond(resp).unwrap();
        }
    });
    (url, rx, h)
}

fn client(url: &str) -> ServiceClient {
    ServiceClient::new(url, Duration::from_secs(5))
}

#[test]
fn classify_sends_golden_body_and_records_version() {
    let (url, rx, h) = mock(vec![Reply::ok(golden("classify_response.json"))]);
    let c = client(&url);
    let got = c.score(TEXT, &["PROTEST".into(), "ASSAULT".into()]).unwrap();
    assert_eq!(
        got,
        vec![ScoredLabel::new("PROTEST", 0.91, true), ScoredLabel::new("ASSAULT", 0.12, false)]
    );
    let (path, body) = rx.recv().unwrap();
    assert_eq!(path, "/classify");
    assert_eq!(body, golden("classify_request.json"));
    assert_eq!(c.model_version().as_deref(), Some("mock-1.2"));
    assert!(Scorer::id(&c).ends_with("@mock-1.2"));
    assert_eq!(c.range(), ScoreRange::UNIT);
    h.join().unwrap();
}

#[test]
fn classify_with_no_labels_makes_no_request() {
    let c = client("http://127.0.0.1:9");
    assert!(c.classify(TEXT, &[]).unwrap().is_empty());
}

#[test]
fn qa_answer_and_unanswerable() {
    let (url, rx, h) = mock(vec![
        Reply::ok(golden("qa_response.json")),
        Reply::ok(golden("qa_response_unanswerable.json")),
    ]);
    let c = client(&url);
    let a = c.answer(TEXT, "Where did the protest take place?").unwrap().unwrap();
    assert_eq!(a.answer_text, "Nairobi");
    assert_eq!((a.char_start, a.char_end), (39, 46));
    assert_eq!(c.answer(TEXT, "Who was arrested?").unwrap(), None);
    let (path, body) = rx.recv().unwrap();
    assert_eq!(path, "/qa");
    assert_eq!(body, golden("qa_request.json"));
    h.join().unwrap();
}

#[test]
fn embed_checks_vector_count_and_length() {
    let (url, _rx, h) = mock(vec![
        Reply::ok(golden("embed_response.json")),
        Reply::ok(r#"{"vectors":[[0.1,0.2]]}"#.into()),
        Reply::ok(r#"{"vectors":[[0.1,0.2],[0.3]]}"#.into()),
    ]);
    let c = client(&url);
    let texts = ["Barack Obama", "44th president of the United States"];
    let v = c.embed(&texts).unwrap();
    assert_eq!(v, vec![vec![0.5, 0.5, 0.0], vec![0.25, 0.75, 0.0]]);
    assert!(matches!(c.embed(&texts), Err(BackendError::Protocol(_))));
    assert!(matches!(c.embed(&texts), Err(BackendError::Protocol(_))));
    h.join().unwrap();
}

#[test]
fn missing_version_header_is_a_protocol_error() {
    let (url, _rx, h) = mock(vec![Reply {
        version: None,
        ..Reply::ok(golden("classify_response.json"))
    }]);
    let err = client(&url).classify(TEXT, &["PROTEST".into()]).unwrap_err();
    assert!(matches!(err, BackendError::Protocol(ref m) if m.contains(VERSION_HEADER)), "{err}");
    assert!(!err.is_retryable());
    h.join().unwrap();
}

#[test]
fn server_errors_are_retryable() {
    let (url, _rx, h) = mock(vec![
        Reply {
            status: 503,
            ..Reply::ok("overloaded".into())
        },
        Reply {
            status: 429,
            ..Reply::ok("slow down".into())
        },
        Reply {
            status: 400,
            ..Reply::ok("bad labels".into())
        },
    ]);
    let c = client(&url);
    let labels = ["PROTEST".to_string()];
    let e = c.classify(TEXT, &labels).unwrap_err();
    assert!(matches!(e, BackendError::Unavailable(_)) && e.is_retryable(), "{e}");
    assert!(c.classify(TEXT, &labels).unwrap_err().is_retryable());
    let e = c.classify(TEXT, &labels).unwrap_err();
    assert!(matches!(e, BackendError::Other(ref m) if m.contains("400")), "{e}");
    h.join().unwrap();
}

#[test]
fn malformed_body_is_a_protocol_error() {
    let (url, _rx, h) = mock(vec![Reply::ok("{\"scores\": [".into())]);
    let e = client(&url).classify(TEXT, &["PROTEST".into()]).unwrap_err();
    assert!(matches!(e, BackendError::Protocol(_)), "{e}");
    h.join().unwrap();
}

#[test]
fn unreachable_service_is_unavailable() {
    let server = tiny_http::Server::http("127.0.0.1:0").unwrap();
    let url = format!("http://{}", server.server_addr().to_ip().unwrap());
    drop(server);
    let e = client(&url).answer(TEXT, "Who?").unwrap_err();
    assert!(e.is_retryable(), "{e}");
}
