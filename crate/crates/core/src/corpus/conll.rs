use super::{Corpus, Mention};
use crate::error::{Error, Result};

/// Column layout of a CoNLL-style file. The entity tag is always the last column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConllFormat {
    /// token, POS, chunk, NE tag (CoNLL-2003).
    FourColumn,
    /// token, NE tag.
    TwoColumn,
}

impl ConllFormat {
    pub fn columns(self) -> usize {
        match self {
            ConllFormat::FourColumn => 4,
            ConllFormat::TwoColumn => 2,
        }
    }

    /// Guesses the layout from the first non-blank, non-separator line.
    pub fn detect(text: &str) -> Option<Self> {
        let line = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with("-DOCSTART-"))?;
        match line.split_whitespace().count() {
            2 => Some(ConllFormat::TwoColumn),
            4 => Some(ConllFormat::FourColumn),
            _ => None,
        }
    }
}

enum Tag<'a> {
    Outside,
    Begin(&'a str),
    Inside(&'a str),
}

fn parse_tag(tag: &str, line: usize) -> Result<Tag<'_>> {
    if tag == "O" {
        return Ok(Tag::Outside);
    }
    let bad = || Error::Parse {
        line,
        message: format!("malformed entity tag {tag:?}"),
    };
    let (prefix, category) = tag.split_once('-').ok_or_else(bad)?;
    if category.is_empty() {
        return Err(bad());
    }
    match prefix {
        "B" => Ok(Tag::Begin(category)),
        "I" => Ok(Tag::Inside(category)),
        _ => Err(bad()),
    }
}

/// Parses BIO-tagged column text into a [`Corpus`].
///
/// One mention is produced per maximal B/I run. An `I-X` tag that does not
/// continue an `X` run opens a new mention, as if it were `B-X`.
/// `-DOCSTART-` lines are skipped.
pub fn parse_conll(text: &str, format: ConllFormat) -> Result<Corpus> {
    let mut sentences: Vec<Vec<String>> = Vec::new();
    let mut mentions = Vec::new();
    let mut tokens: Vec<String> = Vec::new();
    // (start, category) of the run being read
    let mut open: Option<(usize, String)> = None;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            if !tokens.is_empty() {
                close_run(&mut open, sentences.len(), tokens.len(), &mut mentions);
                sentences.push(std::mem::take(&mut tokens));
            }
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols[0] == "-DOCSTART-" {
            continue;
        }
        if cols.len() != format.columns() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected {} columns, found {}", format.columns(), cols.len()),
            });
        }
        let position = tokens.len();
        let sentence = sentences.len();
        match parse_tag(cols[cols.len() - 1], line_no)? {
            Tag::Outside => close_run(&mut open, sentence, position, &mut mentions),
            Tag::Begin(category) => {
                close_run(&mut open, sentence, position, &mut mentions);
                open = Some((position, category.to_string()));
            }
            Tag::Inside(category) => {
                if !matches!(&open, Some((_, c)) if c == category) {
                    close_run(&mut open, sentence, position, &mut mentions);
                    open = Some((position, category.to_string()));
                }
            }
        }
        tokens.push(cols[0].to_string());
    }
    if !tokens.is_empty() {
        close_run(&mut open, sentences.len(), tokens.len(), &mut mentions);
        sentences.push(tokens);
    }
    Corpus::new(sentences, mentions)
}

fn close_run(
    open: &mut Option<(usize, String)>,
    sentence: usize,
    end: usize,
    mentions: &mut Vec<(Mention, String)>,
) {
    if let Some((start, category)) = open.take() {
        mentions.push((Mention { sentence, start, end }, category));
    }
}
