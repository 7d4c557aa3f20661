use std::fs;
use std::io::{BufRead, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bootstrap::{System, Trace};
use crate::corpus::{parse_conll, ConllFormat, Corpus, CorpusStats, Pattern};
use crate::error::{Error, Result};
use crate::pools::PoolState;

use super::CurvePoint;

/// Reads a CoNLL file, detecting the two- or four-column layout.
pub fn load_corpus(path: &Path) -> Result<Corpus> {
    let text = fs::read_to_string(path)?;
    let format = ConllFormat::detect(&text).unwrap_or(ConllFormat::FourColumn);
    parse_conll(&text, format)
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

/// One JSON object per snapshot, listing what that epoch added:
/// `{"system", "epoch", "categories": {name: {"entities": [{"surface",
/// "score"}], "patterns": [{"pattern", "score"}]}}}`. Scores carry six
/// decimals.
pub fn write_trace_jsonl<W: Write>(mut out: W, trace: &Trace, stats: &CorpusStats) -> Result<()> {
    for (epoch, pools) in trace.snapshots.iter().enumerate() {
        write!(out, "{{\"system\":{},\"epoch\":{epoch},\"categories\":{{", json_str(trace.system.name()))?;
        for c in 0..pools.n_categories() {
            if c > 0 {
                write!(out, ",")?;
            }
            write!(out, "{}:{{\"entities\":[", json_str(&pools.categories()[c]))?;
            let added = pools.entities(c).iter().filter(|x| x.epoch == epoch);
            for (i, x) in added.enumerate() {
                let sep = if i > 0 { "," } else { "" };
                write!(
                    out,
                    "{sep}{{\"surface\":{},\"score\":{:.6}}}",
                    json_str(stats.entities.surface(x.id)),
                    x.score
                )?;
            }
            write!(out, "],\"patterns\":[")?;
            let added = pools.patterns(c).iter().filter(|x| x.epoch == epoch);
            for (i, x) in added.enumerate() {
                let sep = if i > 0 { "," } else { "" };
                write!(
                    out,
                    "{sep}{{\"pattern\":{},\"score\":{:.6}}}",
                    json_str(stats.patterns.rendered(x.id)),
                    x.score
                )?;
            }
            write!(out, "]}}")?;
        }
        writeln!(out, "}}}}")?;
    }
    Ok(())
}

fn field<'a>(v: &'a Value, key: &str, line: usize) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse {
        line,
        message: format!("missing \"{key}\""),
    })
}

fn as_array<'a>(v: &'a Value, key: &str, line: usize) -> Result<&'a Vec<Value>> {
    field(v, key, line)?.as_array().ok_or_else(|| Error::Parse {
        line,
        message: format!("\"{key}\" is not an array"),
    })
}

fn score(v: &Value, line: usize) -> Result<f64> {
    field(v, "score", line)?.as_f64().ok_or_else(|| Error::Parse {
        line,
        message: "score is not a number".into(),
    })
}

fn text<'a>(v: &'a Value, key: &str, line: usize) -> Result<&'a str> {
    field(v, key, line)?.as_str().ok_or_else(|| Error::Parse {
        line,
        message: format!("\"{key}\" is not a string"),
    })
}

/// Rebuilds a trace written by [`write_trace_jsonl`] against the same corpus.
pub fn read_trace_jsonl<R: BufRead>(input: R, stats: &CorpusStats) -> Result<Trace> {
    let mut snapshots: Vec<PoolState> = Vec::new();
    let mut system = None;
    for (i, raw) in input.lines().enumerate() {
        let line = i + 1;
        let raw = raw?;
        if raw.trim().is_empty() {
            continue;
        }
        let v: Value = serde_json::from_str(&raw).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        let name = text(&v, "system", line)?;
        system = Some(System::from_name(name).ok_or_else(|| Error::Parse {
            line,
            message: format!("unknown system {name}"),
        })?);
        let epoch = snapshots.len();
        if field(&v, "epoch", line)?.as_u64() != Some(epoch as u64) {
            return Err(Error::Parse {
                line,
                message: format!("expected epoch {epoch}"),
            });
        }
        let cats = field(&v, "categories", line)?.as_object().ok_or_else(|| Error::Parse {
            line,
            message: "\"categories\" is not an object".into(),
        })?;
        let mut pools = match snapshots.last() {
            Some(p) => p.clone(),
            None => PoolState::new(cats.keys().cloned().collect()),
        };
        for (name, block) in cats {
            let c = pools.category_index(name).ok_or_else(|| Error::Parse {
                line,
                message: format!("unknown category {name}"),
            })?;
            for x in as_array(block, "entities", line)? {
                let surface = text(x, "surface", line)?;
                let e = stats.entities.id(surface).ok_or_else(|| Error::Parse {
                    line,
                    message: format!("entity {surface} not in corpus"),
                })?;
                pools.add_entity(c, e, epoch, score(x, line)?);
            }
            for x in as_array(block, "patterns", line)? {
                let rendered = text(x, "pattern", line)?;
                let p = rendered
                    .parse::<Pattern>()
                    .ok()
                    .and_then(|p| stats.patterns.id(&p))
                    .ok_or_else(|| Error::Parse {
                        line,
                        message: format!("pattern {rendered} not in corpus"),
                    })?;
                pools.add_pattern(c, p, epoch, score(x, line)?);
            }
        }
        snapshots.push(pools);
    }
    let system = system.ok_or_else(|| Error::Parse {
        line: 0,
        message: "empty trace".into(),
    })?;
    Ok(Trace { system, snapshots })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub system: String,
    pub epoch: usize,
    pub throughput: usize,
    pub precision: f64,
}

/// `system,epoch,throughput,precision`, precision with six decimals.
pub fn write_metrics_csv<W: Write>(out: W, system: System, curve: &[CurvePoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["system", "epoch", "throughput", "precision"])
        .map_err(csv_error)?;
    for p in curve {
        w.write_record([
            system.name().to_string(),
            p.epoch.to_string(),
            p.throughput.to_string(),
            format!("{:.6}", p.precision),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_metrics_csv<R: Read>(input: R) -> Result<Vec<MetricsRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .collect::<std::result::Result<Vec<MetricsRow>, _>>()
        .map_err(csv_error)
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::Parse {
        line,
        message: e.to_string(),
    }
}
