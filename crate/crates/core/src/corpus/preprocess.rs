use super::config::LangConfig;
use super::{is_dash_char, is_opening_quote, is_quote, is_word_boundary};
use crate::error::{Error, Result};

/// Decodes raw bytes, reporting the offset of the first invalid sequence.
pub fn decode(bytes: &[u8]) -> Result<&str> {
    std::str::from_utf8(bytes).map_err(|e| Error::Encoding {
        offset: e.valid_up_to(),
    })
}

/// Removes marks that do not delimit sentence structure: abbreviation stops,
/// dialogue-opening dashes, Spanish inverted marks, digit-group commas, and
/// (depending on the rules) intra-word hyphens. Word characters are left alone.
pub fn preprocess(raw_text: &str, config: &LangConfig) -> String {
    let strip = config.strip();
    let chars: Vec<char> = raw_text.chars().collect();
    let n = chars.len();
    let mut out = String::with_capacity(raw_text.len());
    let at = |i: usize| chars.get(i).copied();

    let mut i = 0;
    while i < n {
        let c = chars[i];
        let prev = if i > 0 { Some(chars[i - 1]) } else { None };
        let next = at(i + 1);

        if strip.inverted_marks && (c == '¿' || c == '¡') {
            i += 1;
            continue;
        }

        // 1,000 -> 1000
        if c == ',' && is_digit(prev) && is_digit(next) {
            i += 1;
            continue;
        }

        if c == '-' && is_alnum(prev) {
            // WAISTCOAT-\n   POCKET: a line-break hyphenation is one word.
            if strip.intraword_hyphens {
                let mut j = i + 1;
                let mut saw_newline = false;
                while let Some(w) = at(j) {
                    if w == '\n' {
                        if saw_newline {
                            break;
                        }
                        saw_newline = true;
                    } else if w == '\r' || w == ' ' || w == '\t' {
                    } else {
                        break;
                    }
                    j += 1;
                }
                if saw_newline && is_alnum(at(j)) {
                    out.push('-');
                    i = j;
                    continue;
                }
            } else if is_alnum(next) {
                out.push_str(" - ");
                i += 1;
                continue;
            }
        }

        if strip.quotation_dashes && starts_dash(&chars, i) && opens_quotation(&chars, i) {
            i = dash_end(&chars, i);
            continue;
        }

        if c == '.'
            && prev != Some('.')
            && next != Some('.')
            && !is_alnum(next)
            && config.is_abbreviation(&token_before(&chars, i))
        {
            i += 1;
            continue;
        }

        out.push(c);
        i += 1;
    }
    out
}

fn is_digit(c: Option<char>) -> bool {
    c.is_some_and(|c| c.is_ascii_digit())
}

fn is_alnum(c: Option<char>) -> bool {
    c.is_some_and(char::is_alphanumeric)
}

/// `—`, `–`, `―`, or a run of two or more hyphens, or a lone hyphen followed by a space.
fn starts_dash(chars: &[char], i: usize) -> bool {
    match chars[i] {
        c if is_dash_char(c) => true,
        '-' => {
            let next = chars.get(i + 1).copied();
            next == Some('-') || next.is_none_or(char::is_whitespace)
        }
        _ => false,
    }
}

fn dash_end(chars: &[char], mut i: usize) -> usize {
    while i < chars.len() && (is_dash_char(chars[i]) || chars[i] == '-') {
        i += 1;
    }
    i
}

/// True when the dash is the first thing on its line, or comes right after an opening quote.
fn opens_quotation(chars: &[char], i: usize) -> bool {
    let mut j = i;
    while j > 0 {
        let c = chars[j - 1];
        if c == '\n' {
            return true;
        }
        if c == ' ' || c == '\t' || c == '\r' || c == '\u{a0}' {
            j -= 1;
            continue;
        }
        return is_opening_quote(c);
    }
    true
}

/// The whitespace-delimited token ending right before `i`, without leading quotes or brackets.
fn token_before(chars: &[char], i: usize) -> String {
    let mut start = i;
    while start > 0 && !is_word_boundary(chars[start - 1]) {
        start -= 1;
    }
    let token: String = chars[start..i].iter().collect();
    token
        .trim_start_matches(|c: char| is_quote(c) || matches!(c, '(' | '[' | '{'))
        .to_string()
}
