use anyhow::Result;
use serde::Serialize;

use crate::inputs::Sources;
use crate::output::Outputs;

#[derive(Serialize)]
struct OriginRow {
    position: usize,
    symbol: char,
    char: char,
    part: u32,
    stanza: u32,
    line: u32,
    col: u32,
    byte_offset: usize,
}

#[derive(Serialize)]
struct UnknownRow<'a> {
    source_id: &'a str,
    char: char,
    code: String,
    part: u32,
    stanza: u32,
    line: u32,
    col: u32,
}

pub fn run(sources: &Sources) -> Result<Outputs> {
    let mut out = Outputs::default();
    let mut unknown = Vec::new();
    for s in &sources.list {
        let mut vc = s.sequence.to_vc_string();
        vc.push('\n');
        out.add(format!("{}.vc.txt", s.id), vc.into_bytes());

        let (Some(origins), Some(corpus)) = (&s.sequence.origins, &s.corpus) else {
            continue;
        };
        let rows: Vec<OriginRow> = s
            .sequence
            .symbols
            .iter()
            .zip(origins)
            .enumerate()
            .map(|(i, (sym, o))| OriginRow {
                position: i,
                symbol: sym.as_char(),
                char: corpus
                    .find_line(o.part, o.stanza, o.line)
                    .and_then(|l| l.text[o.byte_offset - l.offset..].chars().next())
                    .unwrap_or('\u{fffd}'),
                part: o.part,
                stanza: o.stanza,
                line: o.line,
                col: o.col,
                byte_offset: o.byte_offset,
            })
            .collect();
        out.csv(format!("{}.origins.csv", s.id), &rows)?;
        for u in &s.unknown {
            unknown.push(UnknownRow {
                source_id: &s.id,
                char: u.ch,
                code: format!("U+{:04X}", u.ch as u32),
                part: u.origin.part,
                stanza: u.origin.stanza,
                line: u.origin.line,
                col: u.origin.col,
            });
        }
    }
    if !unknown.is_empty() {
        out.csv("unknown_chars.csv", &unknown)?;
    }
    Ok(out)
}
