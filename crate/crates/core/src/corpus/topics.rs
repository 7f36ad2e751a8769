use std::collections::HashSet;

use super::{CorpusError, Topic};

/// Parse a topic file. Two syntaxes are accepted, chosen by the first
/// non-blank character: `<top>` blocks with `<num>` and `<title>` fields,
/// or `qid<TAB>text` lines.
pub fn parse_topics(text: &str) -> Result<Vec<Topic>, CorpusError> {
    let topics = if text.trim_start().starts_with('<') { parse_sgml(text)? } else { parse_lines(text)? };
    let mut seen = HashSet::new();
    for t in &topics {
        if !seen.insert(t.qid.as_str()) {
            return Err(CorpusError::DuplicateTopic(t.qid.clone()));
        }
    }
    Ok(topics)
}

fn parse_lines(text: &str) -> Result<Vec<Topic>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let err = |msg: &str| CorpusError::Topic { location: format!("line {}", i + 1), msg: msg.into() };
        let (qid, query) = line.split_once('\t').ok_or_else(|| err("expected `qid<TAB>text`"))?;
        let qid = qid.trim();
        if qid.is_empty() {
            return Err(err("empty topic id"));
        }
        out.push(Topic { qid: qid.to_string(), text: query.trim().to_string() });
    }
    Ok(out)
}

/// Content of field `tag` inside `block`: from the end of the opening tag to
/// the next `<`, whitespace-normalised. TREC topic files often omit closing
/// tags, so none is required.
fn field(block: &str, lower: &str, tag: &str) -> Option<String> {
    let open = format!("<{tag}>");
    let start = lower.find(&open)? + open.len();
    let end = block[start..].find('<').map_or(block.len(), |p| p + start);
    Some(block[start..end].split_whitespace().collect::<Vec<_>>().join(" "))
}

fn parse_sgml(text: &str) -> Result<Vec<Topic>, CorpusError> {
    // ASCII lowercasing keeps byte offsets aligned with `text`.
    let lower = text.to_ascii_lowercase();
    let mut out = Vec::new();
    let mut from = 0;
    while let Some(p) = lower[from..].find("<top>") {
        let start = from + p;
        let err = |msg: &str| CorpusError::Topic { location: format!("byte {start}"), msg: msg.into() };
        let body_start = start + "<top>".len();
        let end = lower[body_start..].find("</top>").map(|e| e + body_start).ok_or_else(|| err("unclosed <top>"))?;
        let (block, block_lower) = (&text[body_start..end], &lower[body_start..end]);

        let mut qid = field(block, block_lower, "num").ok_or_else(|| err("missing <num>"))?;
        if let Some(rest) = qid.strip_prefix("Number:") {
            qid = rest.trim().to_string();
        }
        if qid.is_empty() {
            return Err(err("empty <num>"));
        }
        let title = field(block, block_lower, "title").ok_or_else(|| err("missing <title>"))?;
        out.push(Topic { qid, text: title });
        from = end + "</top>".len();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tab_lines() {
        let t = parse_topics("5\tdeprem haberleri\n").unwrap();
        assert_eq!(t, [Topic { qid: "5".into(), text: "deprem haberleri".into() }]);
    }

    #[test]
    fn sgml_blocks() {
        let t = parse_topics("<top><num>7</num><title>seçim</title></top>").unwrap();
        assert_eq!(t, [Topic { qid: "7".into(), text: "seçim".into() }]);

        let trec = "<top>\n<num> Number: 301\n<title> Uluslararası\n organize suç\n\n<desc> Description:\nx\n</top>\n\
                    <top>\n<num> Number: 302\n<title> Polio\n</top>";
        let t = parse_topics(trec).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].qid, "301");
        assert_eq!(t[0].text, "Uluslararası organize suç");
        assert_eq!(t[1].qid, "302");
    }

    #[test]
    fn duplicate_qid() {
        let err = parse_topics("5\ta\n5\tb\n").unwrap_err();
        assert!(matches!(err, CorpusError::DuplicateTopic(q) if q == "5"));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_topics("5 no tab\n"), Err(CorpusError::Topic { .. })));
        assert!(matches!(parse_topics("<top><title>x</title></top>"), Err(CorpusError::Topic { .. })));
        assert!(matches!(parse_topics("<top><num>1</num><title>x"), Err(CorpusError::Topic { .. })));
    }
}
