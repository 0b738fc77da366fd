//! Streaming JSONL batch runner.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::pipeline::{OutputRecord, Pipeline};

/// Lines processed in parallel per block; output is written block by block.
const BLOCK_LINES: usize = 512;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    /// Records processed without error.
    pub ok: usize,
    /// Records with at least one replacement.
    pub substituted: usize,
    /// Records with at least one person chunk left as written.
    pub skipped: usize,
    pub failed: usize,
}

impl Summary {
    fn add(&mut self, out: &OutputRecord) {
        self.total += 1;
        if out.is_failed() {
            self.failed += 1;
            return;
        }
        self.ok += 1;
        if !out.replacements.is_empty() {
            self.substituted += 1;
        }
        if !out.skipped.is_empty() {
            self.skipped += 1;
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.failed == 0 {
            ExitCode::Ok as u8
        } else {
            ExitCode::SomeFailed as u8
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum ExitCode {
    Ok = 0,
    SomeFailed = 1,
    Startup = 2,
}

#[derive(Debug, thiserror::Error)]
pub enum BatchError {
    #[error("cannot open input {path}: {source}")]
    Input { path: PathBuf, source: io::Error },
    #[error("cannot create output {path}: {source}")]
    Output { path: PathBuf, source: io::Error },
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}

fn read_line(input: &mut impl BufRead, buf: &mut Vec<u8>) -> io::Result<Option<String>> {
    buf.clear();
    if input.read_until(b'\n', buf)? == 0 {
        return Ok(None);
    }
    if buf.last() == Some(&b'\n') {
        buf.pop();
        if buf.last() == Some(&b'\r') {
            buf.pop();
        }
    }
    // invalid UTF-8 becomes a parse error downstream
    Ok(Some(String::from_utf8_lossy(buf).into_owned()))
}

/// Processes `input` line by line, writing one output line per input line in
/// input order.
pub fn run_batch(pipeline: &Pipeline, mut input: impl BufRead, mut output: impl Write) -> Result<Summary, BatchError> {
    let mut summary = Summary::default();
    let mut buf = Vec::new();
    let mut line_no = 0;
    loop {
        let mut block = Vec::with_capacity(BLOCK_LINES);
        while block.len() < BLOCK_LINES {
            match read_line(&mut input, &mut buf)? {
                Some(text) => {
                    line_no += 1;
                    block.push((line_no, text));
                }
                None => break,
            }
        }
        if block.is_empty() {
            break;
        }
        let outputs: Vec<OutputRecord> = block.par_iter().map(|(n, text)| pipeline.process_line(text, *n)).collect();
        for out in &outputs {
            summary.add(out);
            serde_json::to_writer(&mut output, out).map_err(io::Error::from)?;
            output.write_all(b"\n")?;
        }
    }
    output.flush()?;
    Ok(summary)
}

pub fn run_batch_files(pipeline: &Pipeline, input: &Path, output: &Path) -> Result<Summary, BatchError> {
    let reader = File::open(input).map_err(|source| BatchError::Input { path: input.into(), source })?;
    let writer = File::create(output).map_err(|source| BatchError::Output { path: output.into(), source })?;
    run_batch(pipeline, BufReader::new(reader), BufWriter::new(writer))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;

    #[test]
    fn counts_and_order() {
        let p = Pipeline::new(Config::default()).unwrap();
        let good = |id: &str| {
            format!(
                r#"{{"image_id":"{id}","image_width":100,"image_height":100,"caption":"a man smiles","faces":[{{"name":"N{id}","box":[1,1,5,5],"confidence":0.9}}]}}"#
            )
        };
        let input = format!("{}\n{}\nnot json\r\n{}", good("a"), good("b"), good("c"));
        let mut out = Vec::new();
        let s = run_batch(&p, input.as_bytes(), &mut out).unwrap();
        assert_eq!(s, Summary { total: 4, ok: 3, substituted: 3, skipped: 0, failed: 1 });
        assert_eq!(s.exit_code(), 1);
        let lines: Vec<OutputRecord> =
            String::from_utf8(out).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        let ids: Vec<_> = lines.iter().map(|o| o.image_id.clone()).collect();
        assert_eq!(ids, vec![Some("a".into()), Some("b".into()), None, Some("c".into())]);
        assert_eq!(lines[3].caption, "Nc smiles");
        assert_eq!(lines[2].line, Some(3));
    }

    #[test]
    fn empty_input() {
        let p = Pipeline::new(Config::default()).unwrap();
        let mut out = Vec::new();
        let s = run_batch(&p, &b""[..], &mut out).unwrap();
        assert_eq!(s, Summary::default());
        assert_eq!(s.exit_code(), 0);
        assert!(out.is_empty());
    }

    #[test]
    fn missing_input_file() {
        let p = Pipeline::new(Config::default()).unwrap();
        let err = run_batch_files(&p, Path::new("/nonexistent/in.jsonl"), Path::new("/tmp/x.jsonl")).unwrap_err();
        assert!(matches!(err, BatchError::Input { .. }));
    }
}
