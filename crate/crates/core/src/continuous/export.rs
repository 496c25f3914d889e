//! CSV export of snapshots and ensembles.

use std::io::Write;

use crate::error::{Error, Result};

use super::{Ensemble, NelsonFields, WaveFunction};

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::InvalidArgument(format!("csv output failed: {e}"))
}

/// Columns x, re_f, im_f, rho, u, v, b. Undefined fields are written empty.
pub fn write_snapshot_csv<W: Write>(out: W, f: &WaveFunction, fields: &NelsonFields) -> Result<()> {
    let n = f.grid().len();
    if fields.x.len() != n {
        return Err(Error::DimMismatch { left: fields.x.len(), right: n });
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "re_f", "im_f", "rho", "u", "v", "b"]).map_err(csv_error)?;
    let cell = |v: f64| if v.is_finite() { format!("{v:.12e}") } else { String::new() };
    for (i, z) in f.values().iter().enumerate() {
        w.write_record([
            cell(fields.x[i]),
            cell(z.re),
            cell(z.im),
            cell(z.norm_sqr()),
            cell(fields.u[i]),
            cell(fields.v[i]),
            cell(fields.b[i]),
        ])
        .map_err(csv_error)?;
    }
    w.flush().map_err(csv_error)
}

/// Columns path_id, x_final.
pub fn write_ensemble_csv<W: Write>(out: W, ensemble: &Ensemble) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["path_id", "x_final"]).map_err(csv_error)?;
    for (i, x) in ensemble.positions.iter().enumerate() {
        w.write_record([i.to_string(), format!("{x:.12e}")]).map_err(csv_error)?;
    }
    w.flush().map_err(csv_error)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuous::{nelson_fields, Grid1D, Units};

    #[test]
    fn snapshot_layout() {
        let grid = Grid1D::new(-3.0, 3.0, 9).unwrap();
        let f = WaveFunction::harmonic_ground_state(grid, Units::default(), 1.0).unwrap();
        let fl = nelson_fields(&f).unwrap();
        let mut buf = Vec::new();
        write_snapshot_csv(&mut buf, &f, &fl).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,re_f,im_f,rho,u,v,b");
        assert_eq!(lines.len(), 10);
        assert!(lines[1].ends_with(",,,"));
    }

    #[test]
    fn ensemble_layout() {
        let e = Ensemble { positions: vec![0.5, -1.0], time: 1.0, seed: 0, escaped: 0 };
        let mut buf = Vec::new();
        write_ensemble_csv(&mut buf, &e).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(2).unwrap(), "1,-1.000000000000e0");
    }
}
