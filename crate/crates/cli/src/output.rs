use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

/// Renders a float with 17 significant digits so values round-trip exactly.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// CSV file whose first line is `#schema=<name>/<version>`.
pub struct CsvFile {
    path: PathBuf,
    out: csv::Writer<BufWriter<File>>,
}

impl CsvFile {
    pub fn create(path: &Path, schema: &str, header: &[&str]) -> io::Result<Self> {
        let mut raw = BufWriter::new(File::create(path)?);
        writeln!(raw, "#schema={schema}")?;
        let mut out = csv::Writer::from_writer(raw);
        out.write_record(header)?;
        Ok(CsvFile { path: path.to_path_buf(), out })
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) -> io::Result<()> {
        self.out.write_record(fields.iter().map(AsRef::as_ref))?;
        Ok(())
    }

    pub fn finish(mut self) -> io::Result<PathBuf> {
        self.out.flush()?;
        Ok(self.path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 32.0, 1e-300, 2.5e42, -7.25] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(f64::NEG_INFINITY), "-inf");
        assert_eq!(fmt_f64(32.0), "3.2000000000000000e1");
    }

    #[test]
    fn writes_schema_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        let mut csv = CsvFile::create(&path, "test/1", &["a", "b"]).unwrap();
        csv.row(&["1", "2"]).unwrap();
        csv.finish().unwrap();
        assert_eq!(std::fs::read_to_string(path).unwrap(), "#schema=test/1\na,b\n1,2\n");
    }
}
