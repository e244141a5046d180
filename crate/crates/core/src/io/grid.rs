//! Grid output: long-form CSV and binary 8-bit PGM images.

use std::io::Write;
use std::path::Path;

use crate::decoder::FieldGrid;

use super::IoError;

/// Long-form CSV: `x,value` for 1-d grids, `x,y,value` for 2-d, rows in
/// grid order, full round-trip float formatting.
pub fn write_grid_csv(grid: &FieldGrid, path: &Path) -> Result<(), IoError> {
    let mut out = String::new();
    match grid.dim {
        1 => {
            out.push_str("x,value\n");
            for (ix, v) in grid.values.iter().enumerate() {
                out.push_str(&format!("{},{}\n", grid.coordinate(ix), v));
            }
        }
        _ => {
            out.push_str("x,y,value\n");
            let res = grid.resolution;
            for iy in 0..res {
                for ix in 0..res {
                    out.push_str(&format!(
                        "{},{},{}\n",
                        grid.coordinate(ix),
                        grid.coordinate(iy),
                        grid.values[iy * res + ix]
                    ));
                }
            }
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Binary PGM (P5, 8-bit).  Values are linearly rescaled so the grid
/// minimum maps to 0 and the maximum to 255 (a constant grid is all
/// zeros); row 0 is the top of the image (y = 1) so plots read the
/// usual way up.
pub fn write_pgm(grid: &FieldGrid, path: &Path) -> Result<(), IoError> {
    let res = grid.resolution;
    let (rows, cols) = match grid.dim {
        1 => (1usize, res),
        _ => (res, res),
    };
    let min = grid.values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = grid.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    let mut file = std::fs::File::create(path)?;
    write!(file, "P5\n{cols} {rows}\n255\n")?;
    let mut bytes = Vec::with_capacity(rows * cols);
    for row in 0..rows {
        let iy = rows - 1 - row;
        for ix in 0..cols {
            let v = grid.values[iy * cols + ix];
            let byte = if span > 0.0 {
                ((v - min) / span * 255.0).round().clamp(0.0, 255.0) as u8
            } else {
                0
            };
            bytes.push(byte);
        }
    }
    file.write_all(&bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_grid() -> FieldGrid {
        FieldGrid {
            dim: 2,
            resolution: 3,
            values: vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0],
        }
    }

    #[test]
    fn pgm_header_and_scaling() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("grid.pgm");
        write_pgm(&toy_grid(), &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        assert!(bytes.starts_with(b"P5\n3 3\n255\n"));
        let pixels = &bytes[bytes.len() - 9..];
        // Top row of the image is the last grid row.
        assert_eq!(pixels[0], ((6.0 / 8.0) * 255.0f64).round() as u8);
        assert_eq!(pixels[8], ((2.0 / 8.0) * 255.0f64).round() as u8);
        assert_eq!(pixels.len(), 9);
    }

    #[test]
    fn constant_grid_is_black() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("flat.pgm");
        let grid = FieldGrid {
            dim: 2,
            resolution: 2,
            values: vec![3.0; 4],
        };
        write_pgm(&grid, &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(&bytes[bytes.len() - 4..], &[0, 0, 0, 0]);
    }

    #[test]
    fn csv_round_trip_precision() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("grid.csv");
        let grid = FieldGrid {
            dim: 1,
            resolution: 3,
            values: vec![1.0 / 3.0, 0.1 + 0.2, -7.25e-13],
        };
        write_grid_csv(&grid, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "x,value");
        for (line, want) in lines.zip(&grid.values) {
            let value: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
            assert_eq!(value, *want);
        }
    }
}
