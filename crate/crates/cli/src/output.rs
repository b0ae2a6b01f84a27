//! Deterministic JSON and CSV writers. Every float is printed as `{:.12e}`.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::Formatter;

struct SciFormatter;

impl Formatter for SciFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        // -0.0 prints as 0
        write!(writer, "{:.12e}", value + 0.0)
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value.serialize(&mut ser)?;
    // the formatter only emits ASCII digits and serde_json's own escapes
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn write_json<T: Serialize + ?Sized>(out: &mut impl Write, value: &T) -> io::Result<()> {
    let text = to_json(value).map_err(io::Error::other)?;
    writeln!(out, "{text}")
}

pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{:.12e}", x + 0.0)
    } else {
        String::from("nan")
    }
}

pub fn csv_row(out: &mut impl Write, fields: &[f64]) -> io::Result<()> {
    let line: Vec<String> = fields.iter().map(|&x| num(x)).collect();
    writeln!(out, "{}", line.join(","))
}

/// Rows of a complex matrix with real and imaginary parts interleaved.
pub fn complex_matrix_csv(out: &mut impl Write, rows: usize, cols: usize, get: impl Fn(usize, usize) -> Complex64) -> io::Result<()> {
    for i in 0..rows {
        let fields: Vec<f64> = (0..cols).flat_map(|j| {
            let z = get(i, j);
            [z.re, z.im]
        }).collect();
        csv_row(out, &fields)?;
    }
    Ok(())
}
