use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("no <answer> block or JSON object found in model output")]
    NoAnswerFound,
}

const OPEN_TAG: &str = "<answer>";
const CLOSE_TAG: &str = "</answer>";

/// Pulls the layout JSON out of raw model output.
///
/// The first complete `<answer>...</answer>` block wins. Without one, the
/// longest brace-balanced `{...}` span in the text is returned. Surrounding
/// whitespace and markdown code fences are stripped in both cases.
pub fn extract_answer(text: &str) -> Result<String, ExtractError> {
    if let Some(inner) = tagged_block(text) {
        let cleaned = strip_fences(inner);
        if !cleaned.is_empty() {
            return Ok(cleaned.to_string());
        }
    }
    largest_balanced_object(text)
        .map(|s| s.to_string())
        .ok_or(ExtractError::NoAnswerFound)
}

fn tagged_block(text: &str) -> Option<&str> {
    let mut search_from = 0;
    while let Some(rel) = text[search_from..].find(OPEN_TAG) {
        let start = search_from + rel + OPEN_TAG.len();
        match text[start..].find(CLOSE_TAG) {
            Some(end) => return Some(&text[start..start + end]),
            None => search_from = start,
        }
    }
    None
}

fn strip_fences(s: &str) -> &str {
    let mut s = s.trim();
    if let Some(rest) = s.strip_prefix("```") {
        // drop the info string (e.g. "json") up to the first newline
        s = match rest.find('\n') {
            Some(nl) => &rest[nl + 1..],
            None => rest.trim_start_matches(|c: char| c.is_ascii_alphanumeric()),
        };
    }
    let s = s.trim();
    s.strip_suffix("```").unwrap_or(s).trim()
}

/// Longest `{...}` span whose braces balance, ignoring braces inside JSON
/// string literals. Ties go to the earliest span.
fn largest_balanced_object(text: &str) -> Option<&str> {
    let bytes = text.as_bytes();
    let mut best: Option<(usize, usize)> = None;
    let mut covered_until = 0;
    for start in 0..bytes.len() {
        if bytes[start] != b'{' || start < covered_until {
            continue;
        }
        if let Some(end) = match_object(bytes, start) {
            covered_until = end;
            if best.is_none_or(|(s, e)| end - start > e - s) {
                best = Some((start, end));
            }
        }
    }
    best.map(|(s, e)| &text[s..e])
}

/// Returns the exclusive end of the object opening at `start`, if it closes.
fn match_object(bytes: &[u8], start: usize) -> Option<usize> {
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    for (i, &b) in bytes.iter().enumerate().skip(start) {
        if in_string {
            match b {
                _ if escaped => escaped = false,
                b'\\' => escaped = true,
                b'"' => in_string = false,
                _ => {}
            }
            continue;
        }
        match b {
            b'"' => in_string = true,
            b'{' => depth += 1,
            b'}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i + 1);
                }
            }
            _ => {}
        }
    }
    None
}
