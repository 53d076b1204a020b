//! Plain-text CSV matrices: a comma-separated numeric grid, no header.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{AdjacencyMatrix, EdgeProbabilityMatrix};

/// Reads a rectangular numeric grid.
pub fn read_grid<R: Read>(reader: R) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .enumerate()
            .map(|(j, field)| {
                field
                    .parse::<f64>()
                    .map_err(|_| Error::MalformedMatrix(format!("row {i}, column {j}: {field:?} is not a number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if let Some(first) = rows.first() {
        let width = first.len();
        if let Some(i) = rows.iter().position(|r| r.len() != width) {
            return Err(Error::MalformedMatrix(format!(
                "row {i} has {} columns, expected {width}",
                rows[i].len()
            )));
        }
    }
    Ok(rows)
}

pub fn read_grid_file(path: impl AsRef<Path>) -> Result<Vec<Vec<f64>>> {
    read_grid(std::fs::File::open(path)?)
}

pub fn write_grid<W: Write, T: ToString>(writer: W, rows: &[Vec<T>]) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    for row in rows {
        wtr.write_record(row.iter().map(ToString::to_string))?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn adjacency_from_grid(rows: Vec<Vec<f64>>) -> Result<AdjacencyMatrix> {
    let rows = rows
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            row.into_iter()
                .enumerate()
                .map(|(j, v)| match v {
                    0.0 => Ok(0u8),
                    1.0 => Ok(1u8),
                    x => Err(Error::MalformedMatrix(format!("entry ({i}, {j}) = {x} is not binary"))),
                })
                .collect::<Result<Vec<u8>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    AdjacencyMatrix::from_rows(rows)
}

pub fn read_adjacency<R: Read>(reader: R) -> Result<AdjacencyMatrix> {
    adjacency_from_grid(read_grid(reader)?)
}

pub fn read_adjacency_file(path: impl AsRef<Path>) -> Result<AdjacencyMatrix> {
    adjacency_from_grid(read_grid_file(path)?)
}

pub fn write_adjacency<W: Write>(writer: W, a: &AdjacencyMatrix) -> Result<()> {
    write_grid(writer, &a.to_rows())
}

pub fn read_probability<R: Read>(reader: R) -> Result<EdgeProbabilityMatrix> {
    EdgeProbabilityMatrix::from_rows(read_grid(reader)?)
}

pub fn write_probability<W: Write>(writer: W, p: &EdgeProbabilityMatrix) -> Result<()> {
    write_grid(writer, &p.to_rows())
}
