use serde::{Deserialize, Serialize};

use super::{is_dash_char, is_quote};

/// The ten punctuation marks that delimit intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MarkKind {
    FullStop,
    QuestionMark,
    ExclamationMark,
    Ellipsis,
    Comma,
    Dash,
    Colon,
    Semicolon,
    LeftBracket,
    RightBracket,
}

impl MarkKind {
    pub const ALL: [MarkKind; 10] = [
        MarkKind::FullStop,
        MarkKind::QuestionMark,
        MarkKind::ExclamationMark,
        MarkKind::Ellipsis,
        MarkKind::Comma,
        MarkKind::Dash,
        MarkKind::Colon,
        MarkKind::Semicolon,
        MarkKind::LeftBracket,
        MarkKind::RightBracket,
    ];

    pub fn is_sentence_end(self) -> bool {
        matches!(
            self,
            MarkKind::FullStop | MarkKind::QuestionMark | MarkKind::ExclamationMark | MarkKind::Ellipsis
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    Word(String),
    Mark(MarkKind),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventStream {
    pub events: Vec<Event>,
}

impl EventStream {
    pub fn new(events: Vec<Event>) -> Self {
        EventStream { events }
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.events.iter().filter_map(|e| match e {
            Event::Word(w) => Some(w.as_str()),
            Event::Mark(_) => None,
        })
    }

    pub fn marks(&self) -> impl Iterator<Item = MarkKind> + '_ {
        self.events.iter().filter_map(|e| match e {
            Event::Mark(m) => Some(*m),
            Event::Word(_) => None,
        })
    }
}

/// Splits preprocessed text into words and punctuation marks.
///
/// A word is a maximal run of characters that are neither whitespace, quotes,
/// nor marks, and that contains at least one letter or digit; runs of symbols
/// alone (`* * *`) are dropped. Dots, hyphens, apostrophes and colons flanked
/// by word characters on both sides belong to the word.
pub fn tokenize(clean_text: &str) -> EventStream {
    let chars: Vec<char> = clean_text.chars().collect();
    let n = chars.len();
    let mut events = Vec::new();
    let mut word = String::new();

    let flush = |word: &mut String, events: &mut Vec<Event>| {
        if word.chars().any(char::is_alphanumeric) {
            events.push(Event::Word(std::mem::take(word)));
        } else {
            word.clear();
        }
    };

    let mut i = 0;
    while i < n {
        let c = chars[i];
        let prev = if i > 0 { Some(chars[i - 1]) } else { None };
        let next = chars.get(i + 1).copied();
        let inner = is_alnum(prev) && is_alnum(next);

        let mark = match c {
            '.' => {
                let run = chars[i..].iter().take_while(|&&d| d == '.').count();
                if run >= 3 {
                    i += run - 1;
                    Some(MarkKind::Ellipsis)
                } else if run == 2 {
                    i += 1;
                    Some(MarkKind::FullStop)
                } else if inner {
                    None
                } else {
                    Some(MarkKind::FullStop)
                }
            }
            '…' => Some(MarkKind::Ellipsis),
            '?' => Some(MarkKind::QuestionMark),
            '!' => Some(MarkKind::ExclamationMark),
            ',' => Some(MarkKind::Comma),
            ';' => Some(MarkKind::Semicolon),
            ':' if inner && prev.is_some_and(|p| p.is_ascii_digit()) => None,
            ':' => Some(MarkKind::Colon),
            '(' | '[' | '{' => Some(MarkKind::LeftBracket),
            ')' | ']' | '}' => Some(MarkKind::RightBracket),
            c if is_dash_char(c) => {
                let run = chars[i..].iter().take_while(|&&d| is_dash_char(d) || d == '-').count();
                i += run - 1;
                Some(MarkKind::Dash)
            }
            '-' => {
                let run = chars[i..].iter().take_while(|&&d| d == '-' || is_dash_char(d)).count();
                if run >= 2 {
                    i += run - 1;
                    Some(MarkKind::Dash)
                } else if inner {
                    None
                } else {
                    Some(MarkKind::Dash)
                }
            }
            _ => None,
        };

        if let Some(m) = mark {
            flush(&mut word, &mut events);
            events.push(Event::Mark(m));
        } else if c.is_whitespace() || (is_quote(c) && !(inner && is_apostrophe(c))) {
            flush(&mut word, &mut events);
        } else {
            word.push(c);
        }
        i += 1;
    }
    flush(&mut word, &mut events);
    EventStream { events }
}

fn is_alnum(c: Option<char>) -> bool {
    c.is_some_and(char::is_alphanumeric)
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '’'
}
