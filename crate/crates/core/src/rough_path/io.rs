use std::io::{Read, Write};

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Sampled path: times and the rows `X^1..X^d` at each time.
#[derive(Clone, Debug, PartialEq)]
pub struct Samples<T> {
    pub times: Vec<T>,
    pub values: Vec<Vec<T>>,
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidInput(format!("csv: {e}"))
}

/// Read `t,x1,…,xd` CSV with a header row.
pub fn read_samples_csv<T: Scalar, R: Read>(r: R) -> Result<Samples<T>> {
    let mut rd = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let header = rd.headers().map_err(csv_err)?.clone();
    if header.len() < 2 || &header[0] != "t" {
        return invalid("CSV header must be t,x1,…,xd");
    }
    let d = header.len() - 1;
    let mut out = Samples { times: Vec::new(), values: Vec::new() };
    for (line, rec) in rd.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let mut row = Vec::with_capacity(d);
        for (c, cell) in rec.iter().enumerate() {
            let x: f64 = cell.parse().map_err(|_| Error::InvalidInput(format!("row {}: bad number {cell:?}", line + 1)))?;
            if c == 0 {
                out.times.push(T::of(x));
            } else {
                row.push(T::of(x));
            }
        }
        out.values.push(row);
    }
    Ok(out)
}

pub fn write_samples_csv<T: Scalar, W: Write>(w: W, s: &Samples<T>) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    let d = s.values.first().map_or(0, |r| r.len());
    let mut head = vec!["t".to_string()];
    head.extend((1..=d).map(|i| format!("x{i}")));
    wr.write_record(&head).map_err(csv_err)?;
    for (t, row) in s.times.iter().zip(&s.values) {
        let mut rec = vec![format!("{:e}", t.as_f64())];
        rec.extend(row.iter().map(|x| format!("{:e}", x.as_f64())));
        wr.write_record(&rec).map_err(csv_err)?;
    }
    wr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let s = Samples { times: vec![0.0, 0.5, 1.0], values: vec![vec![0.0, 1.0], vec![0.25, -1.0], vec![1.0, 0.1]] };
        let mut buf = Vec::new();
        write_samples_csv(&mut buf, &s).unwrap();
        let back: Samples<f64> = read_samples_csv(buf.as_slice()).unwrap();
        assert_eq!(back, s);
        assert!(read_samples_csv::<f64, _>("x,y\n1,2\n".as_bytes()).is_err());
        assert!(read_samples_csv::<f64, _>("t,x1\n0,abc\n".as_bytes()).is_err());
    }
}
