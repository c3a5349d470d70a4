use std::io::Write;

use super::field::{MatrixField, ScalarField};
use crate::Result;

/// 17 significant digits in scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write a scalar field as `x,p,value`, one row per cell, x-major.
pub fn write_scalar_csv<W: Write>(f: &ScalarField, mut w: W) -> Result<()> {
    let g = f.grid();
    let mut buf = String::with_capacity(g.n_cells() * 72 + 16);
    buf.push_str("x,p,value\n");
    for i in 0..g.n_x {
        for j in 0..g.n_p {
            buf.push_str(&fmt_f64(g.x(i)));
            buf.push(',');
            buf.push_str(&fmt_f64(g.p(j)));
            buf.push(',');
            buf.push_str(&fmt_f64(f.get(i, j)));
            buf.push('\n');
        }
    }
    w.write_all(buf.as_bytes())?;
    Ok(())
}

/// Cellwise trace of a matrix field in the same layout as [`write_scalar_csv`].
pub fn write_trace_csv<W: Write>(f: &MatrixField, w: W) -> Result<()> {
    write_scalar_csv(&f.trace_field(), w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::PhaseGrid;

    #[test]
    fn header_and_row_layout() {
        let g = PhaseGrid::square(1.0, 8).unwrap();
        let f = ScalarField::from_fn(g, |x, p| x + 10.0 * p);
        let mut out = Vec::new();
        write_scalar_csv(&f, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,p,value");
        assert_eq!(lines.len(), 65);
        assert!(!text.contains('\r'));
        let first: Vec<f64> = lines[1].split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(first, vec![g.x(0), g.p(0), f.get(0, 0)]);
        let second: Vec<f64> = lines[2].split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(second[1], g.p(1));
        // round trip is exact at 17 digits
        assert_eq!(fmt_f64(0.1).parse::<f64>().unwrap(), 0.1);
    }
}
