//! Text formats for graphs, partitions, clusters, matrices and point clouds.
//!
//! * Edge lists: one undirected edge per line as `u v [w]`, 0-based ids,
//!   whitespace separated. Lines starting with `#` are comments, except
//!   `# n N`, which fixes the vertex count (otherwise the largest id + 1).
//!   The weight is omitted when it equals 1.
//! * Partitions: CSV rows `vertex,cluster`, no header.
//! * Clusters: one vertex id per line.
//! * Matrices and points: CSV rows of numbers, no header.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::bipartite::NonnegMatrix;
use crate::error::{Error, Result};
use crate::graph::{build_graph, SparseGraph};
use crate::index_set::IndexSet;
use crate::partition::Partition;
use crate::pipeline::PointCloud;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<SparseGraph> {
    let mut n_decl = None;
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(rest) = t.strip_prefix('#') {
            let mut parts = rest.split_whitespace();
            if parts.next() == Some("n") {
                let v = parts.next().ok_or_else(|| parse_err(lineno, "`# n` needs a vertex count"))?;
                n_decl = Some(v.parse::<usize>().map_err(|e| parse_err(lineno, e.to_string()))?);
            }
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(parse_err(lineno, format!("expected `u v [w]`, got {} fields", fields.len())));
        }
        let u = fields[0].parse::<usize>().map_err(|e| parse_err(lineno, e.to_string()))?;
        let v = fields[1].parse::<usize>().map_err(|e| parse_err(lineno, e.to_string()))?;
        let w = match fields.get(2) {
            Some(s) => s.parse::<f64>().map_err(|e| parse_err(lineno, e.to_string()))?,
            None => 1.0,
        };
        edges.push((u, v, w));
    }
    let n = n_decl.unwrap_or_else(|| edges.iter().map(|&(u, v, _)| u.max(v) + 1).max().unwrap_or(0));
    build_graph(n, &edges)
}

pub fn write_edge_list<W: Write>(g: &SparseGraph, mut out: W) -> Result<()> {
    writeln!(out, "# n {}", g.n())?;
    for (u, v, w) in g.edges() {
        if w == 1.0 {
            writeln!(out, "{u} {v}")?;
        } else {
            writeln!(out, "{u} {v} {w}")?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn parse_partition<R: Read>(reader: R) -> Result<Partition> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(reader);
    let mut rows: Vec<(usize, usize)> = Vec::new();
    for (idx, rec) in rdr.deserialize().enumerate() {
        rows.push(rec.map_err(|e| parse_err(idx + 1, e.to_string()))?);
    }
    let n = rows.len();
    let mut labels = vec![None; n];
    for (idx, &(v, c)) in rows.iter().enumerate() {
        let slot = labels.get_mut(v).ok_or(Error::IndexOutOfRange { index: v, n })?;
        if slot.replace(c).is_some() {
            return Err(parse_err(idx + 1, format!("vertex {v} listed twice")));
        }
    }
    let labels: Vec<usize> = labels.into_iter().map(|l| l.expect("n rows, no repeats")).collect();
    let k = labels.iter().max().map_or(0, |m| m + 1);
    Partition::new(labels.clone(), k).or_else(|_| Ok(Partition::from_labels(&labels)))
}

pub fn write_partition<W: Write>(part: &Partition, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for (v, &c) in part.assignment().iter().enumerate() {
        w.serialize((v, c))?;
    }
    w.flush()?;
    Ok(())
}

pub fn parse_cluster<R: BufRead>(reader: R) -> Result<IndexSet> {
    let mut ids = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        ids.push(t.parse::<usize>().map_err(|e| parse_err(idx + 1, e.to_string()))?);
    }
    Ok(IndexSet::from_unsorted(ids))
}

pub fn write_cluster<W: Write>(cluster: &IndexSet, mut out: W) -> Result<()> {
    for v in cluster.iter() {
        writeln!(out, "{v}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn parse_rows<R: Read>(reader: R) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut rows = Vec::new();
    for (idx, rec) in rdr.deserialize::<Vec<f64>>().enumerate() {
        rows.push(rec.map_err(|e| parse_err(idx + 1, e.to_string()))?);
    }
    Ok(rows)
}

pub fn write_rows<W: Write>(rows: &[Vec<f64>], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path)?))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<SparseGraph> {
    parse_edge_list(open(path.as_ref())?)
}

pub fn write_edge_list_file(g: &SparseGraph, path: impl AsRef<Path>) -> Result<()> {
    write_edge_list(g, create(path.as_ref())?)
}

pub fn read_partition(path: impl AsRef<Path>) -> Result<Partition> {
    parse_partition(open(path.as_ref())?)
}

pub fn write_partition_file(part: &Partition, path: impl AsRef<Path>) -> Result<()> {
    write_partition(part, create(path.as_ref())?)
}

pub fn read_cluster(path: impl AsRef<Path>) -> Result<IndexSet> {
    parse_cluster(open(path.as_ref())?)
}

pub fn write_cluster_file(cluster: &IndexSet, path: impl AsRef<Path>) -> Result<()> {
    write_cluster(cluster, create(path.as_ref())?)
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<NonnegMatrix> {
    NonnegMatrix::from_dense(&parse_rows(open(path.as_ref())?)?)
}

pub fn read_points(path: impl AsRef<Path>) -> Result<PointCloud> {
    PointCloud::new(parse_rows(open(path.as_ref())?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    #[test]
    fn edge_list_round_trip() {
        let g = build_graph(5, &[(0, 1, 1.0), (1, 3, 0.1 + 0.2), (2, 3, 1e-300)]).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# n 5\n0 1\n"));
        assert_eq!(parse_edge_list(&buf[..]).unwrap(), g);
    }

    #[test]
    fn edge_list_parsing() {
        let g = parse_edge_list("# comment\n\n0 1\n1 2 2.5\n".as_bytes()).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.weight(1, 2), 2.5);
        assert!(matches!(parse_edge_list("0 1 2 3\n".as_bytes()), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("0 x\n".as_bytes()), Err(Error::Parse { .. })));
        assert!(parse_edge_list("0 1\n1 0\n".as_bytes()).is_err());
        assert!(parse_edge_list("# n 2\n0 3\n".as_bytes()).is_err());
    }

    #[test]
    fn partition_round_trip() {
        let p = Partition::contiguous(&[2, 3]).unwrap();
        let mut buf = Vec::new();
        write_partition(&p, &mut buf).unwrap();
        assert_eq!(std::str::from_utf8(&buf).unwrap(), "0,0\n1,0\n2,1\n3,1\n4,1\n");
        assert_eq!(parse_partition(&buf[..]).unwrap(), p);
        assert!(parse_partition("0,0\n0,1\n".as_bytes()).is_err());
        assert!(parse_partition("0,0\n5,1\n".as_bytes()).is_err());
    }

    #[test]
    fn cluster_round_trip() {
        let c = IndexSet::from_unsorted(vec![4, 0, 9]);
        let mut buf = Vec::new();
        write_cluster(&c, &mut buf).unwrap();
        assert_eq!(parse_cluster(&buf[..]).unwrap(), c);
    }

    #[test]
    fn rows_round_trip() {
        let rows = vec![vec![1.0, 0.0], vec![0.5, 2.0]];
        let mut buf = Vec::new();
        write_rows(&rows, &mut buf).unwrap();
        assert_eq!(parse_rows(&buf[..]).unwrap(), rows);
        assert!(parse_rows("1,a\n".as_bytes()).is_err());
    }
}
