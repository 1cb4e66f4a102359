//! SGML-style topic files:
//!
//! ```text
//! <TOPIC>
//! <TOPIC-ID>1001</TOPIC-ID>
//! <DESCRIPTION>Corporate merging</DESCRIPTION>
//! <NARRATIVE>The article describes ...</NARRATIVE>
//! </TOPIC>
//! ```
//!
//! Only metadata is extracted; evaluation never looks at topic text.

use std::io::Read;

use serde::Serialize;

use crate::corpus::ids::QueryId;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TopicMeta {
    pub query: QueryId,
    pub description: String,
    pub narrative: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TopicParseOptions {
    /// Accept topics with a missing or empty description.
    pub lenient: bool,
}

struct Tag<'a> {
    name: &'a str,
    closing: bool,
    offset: usize,
}

struct Scanner<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn line_of(&self, offset: usize) -> usize {
        self.text[..offset].bytes().filter(|&b| b == b'\n').count() + 1
    }

    /// Returns the text preceding the next tag, and the tag itself.
    fn next(&mut self) -> Result<Option<(&'a str, Tag<'a>)>> {
        let rest = &self.text[self.pos..];
        let Some(open) = rest.find('<') else {
            return Ok(None);
        };
        let start = self.pos + open;
        let body_start = start + 1;
        let close = self.text[body_start..]
            .find('>')
            .ok_or_else(|| Error::parse(self.line_of(start), "tag is never closed with '>'"))?;
        let body = self.text[body_start..body_start + close].trim();
        let (closing, body) = match body.strip_prefix('/') {
            Some(b) => (true, b.trim_start()),
            None => (false, body),
        };
        let name = body.split_whitespace().next().unwrap_or("");
        if name.is_empty() {
            return Err(Error::parse(self.line_of(start), "empty tag name"));
        }
        let text = &self.text[self.pos..start];
        self.pos = body_start + close + 1;
        Ok(Some((
            text,
            Tag {
                name,
                closing,
                offset: start,
            },
        )))
    }
}

fn normalize(text: &str) -> String {
    text.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&amp;", "&")
}

#[derive(Default)]
struct PartialTopic {
    id: Option<String>,
    description: Option<String>,
    narrative: Option<String>,
}

/// Parses every `TOPIC` element in document order.
///
/// Unknown child elements are skipped; tags outside any `TOPIC` are ignored.
pub fn parse_topics_str(input: &str, options: TopicParseOptions) -> Result<Vec<TopicMeta>> {
    let mut scanner = Scanner { text: input, pos: 0 };
    let mut topics = Vec::new();
    // (opening offset, fields so far)
    let mut current: Option<(usize, PartialTopic)> = None;
    // (field name, opening offset, accumulated text)
    let mut field: Option<(&str, usize, String)> = None;

    while let Some((text, tag)) = scanner.next()? {
        if let Some((_, _, buf)) = field.as_mut() {
            buf.push_str(text);
        }
        let line = scanner.line_of(tag.offset);
        let is_topic = tag.name.eq_ignore_ascii_case("TOPIC");

        if let Some((name, opened, buf)) = field.take() {
            if tag.closing && tag.name.eq_ignore_ascii_case(name) {
                let (_, topic) = current.as_mut().expect("fields only open inside a topic");
                let value = normalize(&buf);
                let slot = if name.eq_ignore_ascii_case("TOPIC-ID") {
                    Some(&mut topic.id)
                } else if name.eq_ignore_ascii_case("DESCRIPTION") {
                    Some(&mut topic.description)
                } else if name.eq_ignore_ascii_case("NARRATIVE") {
                    Some(&mut topic.narrative)
                } else {
                    None
                };
                if let Some(slot) = slot {
                    if slot.is_some() {
                        return Err(Error::parse(
                            scanner.line_of(opened),
                            format!("<{name}> appears twice in one topic"),
                        ));
                    }
                    *slot = Some(value);
                }
                continue;
            }
            return Err(Error::parse(
                scanner.line_of(opened),
                format!("<{name}> is not closed before <{}{}>", if tag.closing { "/" } else { "" }, tag.name),
            ));
        }

        match (&mut current, is_topic, tag.closing) {
            (None, true, false) => current = Some((tag.offset, PartialTopic::default())),
            (None, true, true) => {
                return Err(Error::parse(line, "</TOPIC> without matching <TOPIC>"));
            }
            (None, false, _) => {}
            (Some((opened, _)), true, false) => {
                return Err(Error::parse(
                    scanner.line_of(*opened),
                    "<TOPIC> is not closed before the next <TOPIC>",
                ));
            }
            (Some(_), true, true) => {
                let (opened, topic) = current.take().expect("matched Some");
                topics.push(finish_topic(topic, scanner.line_of(opened), options)?);
            }
            (Some(_), false, false) => field = Some((tag.name, tag.offset, String::new())),
            (Some(_), false, true) => {
                return Err(Error::parse(
                    line,
                    format!("</{}> without matching opening tag", tag.name),
                ));
            }
        }
    }

    if let Some((name, opened, _)) = field {
        return Err(Error::parse(
            scanner.line_of(opened),
            format!("<{name}> is never closed"),
        ));
    }
    if let Some((opened, _)) = current {
        return Err(Error::parse(scanner.line_of(opened), "<TOPIC> is never closed"));
    }
    Ok(topics)
}

fn finish_topic(topic: PartialTopic, line: usize, options: TopicParseOptions) -> Result<TopicMeta> {
    let id = topic
        .id
        .filter(|id| !id.is_empty())
        .ok_or_else(|| Error::parse(line, "topic has no TOPIC-ID"))?;
    let query = QueryId::new(id).map_err(|e| Error::parse(line, e.to_string()))?;
    let description = topic.description.unwrap_or_default();
    if description.is_empty() && !options.lenient {
        return Err(Error::parse(
            line,
            format!("topic {query} has no DESCRIPTION"),
        ));
    }
    Ok(TopicMeta {
        query,
        description,
        narrative: topic.narrative.unwrap_or_default(),
    })
}

pub fn parse_topics<R: Read>(mut reader: R, options: TopicParseOptions) -> Result<Vec<TopicMeta>> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_topics_str(&text, options)
}
