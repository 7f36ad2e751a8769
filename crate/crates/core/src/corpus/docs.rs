use std::io::BufRead;

use super::{CorpusError, Document, Encoding};

const DOC_OPEN: &[u8] = b"<doc>";
const DOC_CLOSE: &[u8] = b"</doc>";

fn ends_with_tag(buf: &[u8], tag: &[u8]) -> bool {
    buf.len() >= tag.len() && buf[buf.len() - tag.len()..].eq_ignore_ascii_case(tag)
}

fn find_ci(haystack_lower: &[u8], needle: &[u8], from: usize) -> Option<usize> {
    if from > haystack_lower.len() {
        return None;
    }
    haystack_lower[from..].windows(needle.len()).position(|w| w == needle).map(|p| p + from)
}

/// Streaming reader over `<DOC>…</DOC>` blocks.
///
/// Memory use is bounded by the largest single block. A malformed block
/// yields an error carrying the byte offset of its `<DOC>` tag; reading then
/// resumes at the next `<DOC>`.
pub struct TrecDocReader<R> {
    reader: R,
    encoding: Encoding,
    /// Bytes consumed so far.
    offset: u64,
    chunk: Vec<u8>,
    /// Body of the block being read, and the offset of its `<DOC>` tag.
    pending: Option<(u64, Vec<u8>)>,
    done: bool,
}

impl<R: BufRead> TrecDocReader<R> {
    pub fn new(reader: R, encoding: Encoding) -> Self {
        TrecDocReader { reader, encoding, offset: 0, chunk: Vec::new(), pending: None, done: false }
    }

    /// Next chunk ending in `>` (or at EOF). Returns false at EOF with an
    /// empty chunk.
    fn read_chunk(&mut self) -> Result<bool, CorpusError> {
        self.chunk.clear();
        let n = self.reader.read_until(b'>', &mut self.chunk)?;
        self.offset += n as u64;
        Ok(n > 0)
    }

    fn finish_block(&self, start: u64, body: &[u8]) -> Result<Document, CorpusError> {
        let malformed = |reason: &str| CorpusError::MalformedDoc { offset: start, reason: reason.into() };
        let lower = body.to_ascii_lowercase();

        let open = find_ci(&lower, b"<docno>", 0).ok_or_else(|| malformed("missing <DOCNO>"))?;
        let no_start = open + b"<docno>".len();
        let no_end = find_ci(&lower, b"</docno>", no_start).ok_or_else(|| malformed("unclosed <DOCNO>"))?;
        let docno = self
            .encoding
            .decode(&body[no_start..no_end])
            .ok_or(CorpusError::Encoding { offset: start })?
            .trim()
            .to_string();
        if docno.is_empty() {
            return Err(malformed("empty <DOCNO>"));
        }

        let mut text = String::new();
        let mut from = 0;
        let mut first = true;
        while let Some(open) = find_ci(&lower, b"<text>", from) {
            let s = open + b"<text>".len();
            let e = find_ci(&lower, b"</text>", s).ok_or_else(|| malformed("unclosed <TEXT>"))?;
            let part = self.encoding.decode(&body[s..e]).ok_or(CorpusError::Encoding { offset: start })?;
            if !first {
                text.push(' ');
            }
            text.push_str(&part);
            first = false;
            from = e + b"</text>".len();
        }
        Ok(Document { docno, text })
    }
}

impl<R: BufRead> Iterator for TrecDocReader<R> {
    type Item = Result<Document, CorpusError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        loop {
            match self.read_chunk() {
                Err(e) => {
                    self.done = true;
                    return Some(Err(e));
                }
                Ok(false) => {
                    self.done = true;
                    return self.pending.take().map(|(start, _)| {
                        Err(CorpusError::MalformedDoc {
                            offset: start,
                            reason: "unclosed <DOC> at end of input".into(),
                        })
                    });
                }
                Ok(true) => {}
            }
            let tag_start = self.offset;
            match self.pending.as_mut() {
                None => {
                    if ends_with_tag(&self.chunk, DOC_OPEN) {
                        self.pending = Some((tag_start - DOC_OPEN.len() as u64, Vec::new()));
                    }
                }
                Some((start, body)) => {
                    body.extend_from_slice(&self.chunk);
                    if ends_with_tag(body, DOC_CLOSE) {
                        let (start, mut body) = self.pending.take().unwrap();
                        body.truncate(body.len() - DOC_CLOSE.len());
                        return Some(self.finish_block(start, &body));
                    }
                    if ends_with_tag(body, DOC_OPEN) {
                        // A new block opened before this one closed.
                        let err = CorpusError::MalformedDoc {
                            offset: *start,
                            reason: "unclosed <DOC> (next <DOC> found first)".into(),
                        };
                        self.pending = Some((tag_start - DOC_OPEN.len() as u64, Vec::new()));
                        return Some(Err(err));
                    }
                }
            }
        }
    }
}

/// Parse every block of a TREC document stream.
pub fn parse_trec_docs<R: BufRead>(reader: R, encoding: Encoding) -> TrecDocReader<R> {
    TrecDocReader::new(reader, encoding)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(s: &str) -> Vec<Result<Document, CorpusError>> {
        parse_trec_docs(s.as_bytes(), Encoding::Utf8).collect()
    }

    #[test]
    fn single_block() {
        let docs = parse("<DOC><DOCNO>A1</DOCNO><TEXT>kedi</TEXT></DOC>");
        assert_eq!(docs.len(), 1);
        assert_eq!(docs[0].as_ref().unwrap(), &Document { docno: "A1".into(), text: "kedi".into() });
    }

    #[test]
    fn blocks_in_order_with_multiple_text_fields() {
        let s = "<DOC>\n<DOCNO> A1 </DOCNO>\n<HEADLINE>h</HEADLINE>\n<TEXT>bir</TEXT><TEXT>iki</TEXT>\n</DOC>\n\
                 <DOC><DOCNO>A2</DOCNO><TEXT> üç </TEXT></DOC>";
        let docs: Vec<_> = parse(s).into_iter().map(Result::unwrap).collect();
        assert_eq!(docs[0].docno, "A1");
        assert_eq!(docs[0].text, "bir iki");
        assert_eq!(docs[1].docno, "A2");
        assert_eq!(docs[1].text, " üç ");
    }

    #[test]
    fn missing_docno_is_reported_and_skipped() {
        let s = "<DOC><TEXT>x</TEXT></DOC><DOC><DOCNO>B</DOCNO><TEXT>y</TEXT></DOC>";
        let docs = parse(s);
        assert_eq!(docs.len(), 2);
        match &docs[0] {
            Err(CorpusError::MalformedDoc { offset: 0, reason }) => assert!(reason.contains("DOCNO")),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(docs[1].as_ref().unwrap().docno, "B");
    }

    #[test]
    fn unclosed_doc_resumes_at_next_block() {
        let s = "xx<DOC><DOCNO>A</DOCNO><TEXT>a</TEXT><DOC><DOCNO>B</DOCNO></DOC><DOC><DOCNO>C</DOCNO>";
        let docs = parse(s);
        assert_eq!(docs.len(), 3);
        assert_eq!(docs[0].as_ref().unwrap_err().offset(), Some(2));
        assert_eq!(docs[1].as_ref().unwrap().docno, "B");
        assert_eq!(docs[1].as_ref().unwrap().text, "");
        let third_offset = s.rfind("<DOC>").unwrap() as u64;
        assert_eq!(docs[2].as_ref().unwrap_err().offset(), Some(third_offset));
    }

    #[test]
    fn lowercase_tags_and_latin5() {
        let mut bytes = b"<doc><docno>T1</docno><text>".to_vec();
        bytes.extend_from_slice(&[0xFE, b'e', b'h', b'i', b'r']);
        bytes.extend_from_slice(b"</text></doc>");
        let docs: Vec<_> = parse_trec_docs(&bytes[..], Encoding::Latin5).collect();
        assert_eq!(docs[0].as_ref().unwrap().text, "şehir");
        let docs: Vec<_> = parse_trec_docs(&bytes[..], Encoding::Utf8).collect();
        assert!(matches!(docs[0], Err(CorpusError::Encoding { offset: 0 })));
    }

    proptest! {
        #[test]
        fn k_blocks_parse_to_k_documents(bodies in proptest::collection::vec("[a-zçğıöşü .,\n]{0,40}", 0..20)) {
            let mut s = String::new();
            for (i, b) in bodies.iter().enumerate() {
                s.push_str(&format!("<DOC>\n<DOCNO>D{i}</DOCNO>\n<TEXT>{b}</TEXT>\n</DOC>\n"));
            }
            let docs: Vec<_> = parse(&s).into_iter().map(Result::unwrap).collect();
            prop_assert_eq!(docs.len(), bodies.len());
            for (d, b) in docs.iter().zip(&bodies) {
                prop_assert_eq!(&d.text, b);
            }
        }
    }
}
