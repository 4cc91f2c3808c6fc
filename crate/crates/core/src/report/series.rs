use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{Read, Write};
use std::path::Path;

use super::{render_real, Cell, ColumnKind, Table};
use crate::error::{Error, Result};
use crate::sondow::{log_sn_reduced, FRecord, Options};

pub const CHECKPOINT_MAGIC: &str = "# irrbase-checkpoint v1";

const FIELDS: [&str; 10] =
    ["n", "status", "precision_bits", "frac", "frac_err", "dist", "dist_err", "F", "F_err", "magnitude"];

/// One rendered point of the `F(n)` series. Every numeric field is already
/// a fixed-digit string, so rows read back from a checkpoint are identical
/// to freshly computed ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FRow {
    pub n: u64,
    /// `ok` or `skip:<reason>`
    pub status: String,
    pub precision_bits: String,
    pub frac: String,
    pub frac_err: String,
    pub dist: String,
    pub dist_err: String,
    pub f: String,
    pub f_err: String,
    pub magnitude: String,
}

impl FRow {
    pub fn from_record(r: &FRecord, digits: usize) -> FRow {
        let (frac, frac_err) = render_real(&r.frac, digits);
        let (dist, dist_err) = render_real(&r.dist, digits);
        let (f, f_err) = render_real(&r.f, digits);
        FRow {
            n: r.n,
            status: "ok".into(),
            precision_bits: r.precision_bits.to_string(),
            frac,
            frac_err,
            dist,
            dist_err,
            f,
            f_err,
            magnitude: r.magnitude.to_string(),
        }
    }

    pub fn skipped(n: u64, reason: &str) -> FRow {
        FRow {
            n,
            status: format!("skip:{reason}"),
            precision_bits: String::new(),
            frac: String::new(),
            frac_err: String::new(),
            dist: String::new(),
            dist_err: String::new(),
            f: String::new(),
            f_err: String::new(),
            magnitude: String::new(),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    /// `F(n)` as `f64`, for plotting and summaries.
    pub fn f_value(&self) -> Option<f64> {
        if self.is_ok() {
            self.f.parse().ok()
        } else {
            None
        }
    }

    fn fields(&self) -> [String; 10] {
        [
            self.n.to_string(),
            self.status.clone(),
            self.precision_bits.clone(),
            self.frac.clone(),
            self.frac_err.clone(),
            self.dist.clone(),
            self.dist_err.clone(),
            self.f.clone(),
            self.f_err.clone(),
            self.magnitude.clone(),
        ]
    }

    fn from_fields(r: &csv::StringRecord) -> Result<FRow> {
        let bad = |detail: String| Error::Format { what: "checkpoint row", detail };
        if r.len() != FIELDS.len() {
            return Err(bad(format!("expected {} fields, got {}", FIELDS.len(), r.len())));
        }
        let n = r[0].parse().map_err(|_| bad(format!("bad n {:?}", &r[0])))?;
        let s = |i: usize| r[i].to_string();
        let row = FRow {
            n,
            status: s(1),
            precision_bits: s(2),
            frac: s(3),
            frac_err: s(4),
            dist: s(5),
            dist_err: s(6),
            f: s(7),
            f_err: s(8),
            magnitude: s(9),
        };
        if !(row.is_ok() || row.status.starts_with("skip:")) {
            return Err(bad(format!("bad status {:?}", row.status)));
        }
        Ok(row)
    }

    fn real_cell(&self, value: &str, err: &str) -> Cell {
        if !self.is_ok() {
            return Cell::Empty;
        }
        Cell::Real {
            value: value.to_string(),
            abs_err: err.to_string(),
            precision_bits: self.precision_bits.parse().unwrap_or(0),
        }
    }

    /// Rows as a table with `frac`, `dist`, `F` as interval columns.
    pub fn table(rows: &[FRow]) -> Table {
        let mut t = Table::new(&[
            ("n", ColumnKind::Plain),
            ("status", ColumnKind::Plain),
            ("precision_bits", ColumnKind::Plain),
            ("frac", ColumnKind::Real),
            ("dist", ColumnKind::Real),
            ("F", ColumnKind::Real),
            ("magnitude", ColumnKind::Plain),
        ]);
        for r in rows {
            let int = |s: &str| s.parse().map(Cell::Int).unwrap_or(Cell::Empty);
            t.push(vec![
                Cell::Int(r.n as i64),
                Cell::text(&r.status),
                int(&r.precision_bits),
                r.real_cell(&r.frac, &r.frac_err),
                r.real_cell(&r.dist, &r.dist_err),
                r.real_cell(&r.f, &r.f_err),
                int(&r.magnitude),
            ]);
        }
        t
    }
}

fn header(digits: usize, parse_id: &str) -> String {
    format!("{CHECKPOINT_MAGIC} digits={digits} parse={parse_id}")
}

/// Rows already stored in a checkpoint. A trailing partial line (from an
/// interrupted write) is cut off the file. A missing file yields no rows.
pub fn load_checkpoint(path: &Path, digits: usize, parse_id: &str) -> Result<Vec<FRow>> {
    let mut text = String::new();
    match File::open(path) {
        Ok(mut f) => f.read_to_string(&mut text).map_err(|e| Error::io(path, e))?,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(Error::io(path, e)),
    };
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let complete = match text.rfind('\n') {
        Some(i) => i + 1,
        None => 0,
    };
    if complete < text.len() {
        let f = OpenOptions::new().write(true).open(path).map_err(|e| Error::io(path, e))?;
        f.set_len(complete as u64).map_err(|e| Error::io(path, e))?;
        text.truncate(complete);
    }
    let mut lines = text.lines();
    let want = header(digits, parse_id);
    match lines.next() {
        Some(h) if h == want => {}
        Some(h) if h.starts_with(CHECKPOINT_MAGIC) => {
            return Err(Error::Format {
                what: "checkpoint header",
                detail: format!("{} was written with {h:?}, this run needs {want:?}", path.display()),
            })
        }
        // only a partial header had been written
        None => return Ok(Vec::new()),
        Some(h) => return Err(Error::Format { what: "checkpoint header", detail: format!("unexpected {h:?}") }),
    }
    let body: String = lines.map(|l| format!("{l}\n")).collect();
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(body.as_bytes());
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Format { what: "checkpoint row", detail: e.to_string() })?;
        out.push(FRow::from_fields(&rec)?);
    }
    Ok(out)
}

fn append_rows(path: &Path, rows: &[FRow], fresh: Option<&str>) -> Result<()> {
    let mut f = OpenOptions::new().create(true).append(true).open(path).map_err(|e| Error::io(path, e))?;
    let mut buf = Vec::new();
    if let Some(h) = fresh {
        writeln!(buf, "{h}").expect("write to memory");
    }
    {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut buf);
        for r in rows {
            w.write_record(r.fields()).expect("write to memory");
        }
        w.flush().expect("write to memory");
    }
    f.write_all(&buf).map_err(|e| Error::io(path, e))?;
    f.sync_data().map_err(|e| Error::io(path, e))
}

/// Knobs of a series run.
#[derive(Debug, Clone)]
pub struct SeriesOptions {
    pub sondow: Options,
    /// Number of `n` computed between checkpoint writes.
    pub batch: usize,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions { sondow: Options::default(), batch: 16 }
    }
}

/// `F(n)` rows for `n_lo..=n_hi`, in order of `n`. With a checkpoint,
/// rows already stored there are reused and new ones appended batch by
/// batch, so an interrupted run resumes where it stopped.
pub fn f_series(
    n_lo: u64,
    n_hi: u64,
    digits: usize,
    checkpoint: Option<&Path>,
    opts: &SeriesOptions,
) -> Result<Vec<FRow>> {
    if n_lo == 0 || n_lo > n_hi {
        return Err(Error::InvalidInput(format!("bad range {n_lo}..{n_hi}")));
    }
    let parse_id = opts.sondow.parse.id();
    let mut done: BTreeMap<u64, FRow> = BTreeMap::new();
    let mut fresh_header = None;
    if let Some(p) = checkpoint {
        let stored = load_checkpoint(p, digits, parse_id)?;
        let empty = std::fs::metadata(p).map(|m| m.len() == 0).unwrap_or(true);
        if empty {
            fresh_header = Some(header(digits, parse_id));
        }
        for r in stored {
            done.insert(r.n, r);
        }
    }
    let todo: Vec<u64> = (n_lo..=n_hi).filter(|n| !done.contains_key(n)).collect();
    for chunk in todo.chunks(opts.batch.max(1)) {
        let results = crate::par_map(chunk, |&n| log_sn_reduced(n, digits, &opts.sondow));
        let mut rows = Vec::with_capacity(chunk.len());
        for (&n, r) in chunk.iter().zip(results) {
            rows.push(match r {
                Ok(rec) => FRow::from_record(&rec, digits),
                Err(Error::PrecisionExhausted { .. }) => FRow::skipped(n, "precision"),
                Err(e) => return Err(e),
            });
        }
        if let Some(p) = checkpoint {
            append_rows(p, &rows, fresh_header.take().as_deref())?;
        }
        for r in rows {
            done.insert(r.n, r);
        }
    }
    Ok(done.range(n_lo..=n_hi).map(|(_, r)| r.clone()).collect())
}
