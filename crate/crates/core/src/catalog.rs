//! The experiment's named networks, the x-Ring-y family, and graph files.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, MAX_NODES};

/// Names accepted by [`catalog`], in listing order.
pub const CATALOG_NAMES: [&str; 9] = [
    "1R3", "1R4", "1R5", "2R3", "2R4", "3R3", "N1R3", "N1R4", "N1R5",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Topology fully determined by the x-Ring-y naming scheme.
    Paper,
    /// Topology reconstructed; only the name and non-RPE status are known.
    Reconstructed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub graph: Graph,
    pub provenance: Provenance,
}

/// `rings` cycles of length `ring_size` sharing node 0. Ring `r` uses nodes
/// `1 + r*(ring_size-1) ..` in order, closing back at the hub.
pub fn ring_star(rings: usize, ring_size: usize) -> Result<Graph> {
    if rings == 0 || ring_size < 3 {
        return Err(Error::Schema(format!(
            "ring star needs at least one ring of size >= 3, got {rings}R{ring_size}"
        )));
    }
    let n = rings * (ring_size - 1) + 1;
    if n > MAX_NODES {
        return Err(Error::NodeCount(n));
    }
    let mut edges = Vec::with_capacity(rings * ring_size);
    for r in 0..rings {
        let first = 1 + r * (ring_size - 1);
        let last = first + ring_size - 2;
        edges.push((0, first));
        edges.extend((first..last).map(|v| (v, v + 1)));
        edges.push((last, 0));
    }
    Graph::new(n, &edges)
}

pub fn catalog(name: &str) -> Result<CatalogEntry> {
    let unknown = || Error::UnknownNetwork {
        name: name.to_string(),
        valid: CATALOG_NAMES.iter().map(|s| s.to_string()).collect(),
    };
    let (pendant, spec) = match name.strip_prefix('N') {
        Some(rest) => (true, rest),
        None => (false, name),
    };
    let (rings, size) = spec.split_once('R').ok_or_else(unknown)?;
    let rings: usize = rings.parse().map_err(|_| unknown())?;
    let size: usize = size.parse().map_err(|_| unknown())?;
    let known = if pendant {
        rings == 1 && (3..=5).contains(&size)
    } else {
        matches!((rings, size), (1, 3..=5) | (2, 3) | (2, 4) | (3, 3))
    };
    if !known {
        return Err(unknown());
    }

    let ring = ring_star(rings, size)?;
    let (graph, provenance) = if pendant {
        (with_pendant(&ring, 1)?, Provenance::Reconstructed)
    } else {
        (ring, Provenance::Paper)
    };
    Ok(CatalogEntry {
        name: name.to_string(),
        graph,
        provenance,
    })
}

pub fn full_catalog() -> Vec<CatalogEntry> {
    CATALOG_NAMES
        .iter()
        .map(|name| catalog(name).expect("catalog names resolve"))
        .collect()
}

fn with_pendant(g: &Graph, anchor: usize) -> Result<Graph> {
    let n = g.n() + 1;
    let mut edges: Vec<Edge> = g.edges();
    edges.push((anchor, n - 1));
    Graph::new(n, &edges)
}

/// A network given either by catalog name or inline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NetworkRef {
    Name(String),
    Inline(Graph),
}

impl NetworkRef {
    pub fn resolve(&self) -> Result<Graph> {
        match self {
            NetworkRef::Name(name) => Ok(catalog(name)?.graph),
            NetworkRef::Inline(g) => Ok(g.clone()),
        }
    }

    /// Label used in reports: the catalog name, or the edge list.
    pub fn label(&self) -> String {
        match self {
            NetworkRef::Name(name) => name.clone(),
            NetworkRef::Inline(g) => g.to_string(),
        }
    }
}

impl fmt::Display for NetworkRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    serde_json::from_value(value).map_err(|e| Error::Schema(e.to_string()))
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_graph(&text)
}

pub fn write_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = serde_json::to_string(g)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// A catalog name, or a path to a graph file when no such name exists.
pub fn load_network(spec: &str) -> Result<(NetworkRef, Graph)> {
    match catalog(spec) {
        Ok(entry) => Ok((NetworkRef::Name(entry.name), entry.graph)),
        Err(lookup) => {
            if Path::new(spec).exists() {
                let g = read_graph(spec)?;
                Ok((NetworkRef::Inline(g.clone()), g))
            } else {
                Err(lookup)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_star_shapes() {
        let tri = ring_star(1, 3).unwrap();
        assert_eq!((tri.n(), tri.edge_count()), (3, 3));
        assert!(tri.is_simple_cycle());

        let r33 = ring_star(3, 3).unwrap();
        assert_eq!((r33.n(), r33.edge_count(), r33.degree(0)), (7, 9, 6));

        let r24 = ring_star(2, 4).unwrap();
        assert_eq!((r24.n(), r24.edge_count(), r24.degree(0)), (7, 8, 4));

        assert!(ring_star(0, 3).is_err());
        assert!(ring_star(2, 2).is_err());
        assert!(matches!(ring_star(4, 5), Err(Error::NodeCount(17))));
    }

    #[test]
    fn ring_star_closed_forms() {
        for x in 1..=3 {
            for y in 3..=5 {
                let g = ring_star(x, y).unwrap();
                assert_eq!(g.n(), x * (y - 1) + 1);
                assert_eq!(g.edge_count(), x * y);
                assert_eq!(g.degree(0), 2 * x);
            }
        }
    }

    #[test]
    fn catalog_lookups() {
        let e = catalog("1R5").unwrap();
        assert_eq!(e.provenance, Provenance::Paper);
        assert!(e.graph.is_simple_cycle() && e.graph.n() == 5);

        let n = catalog("N1R3").unwrap();
        assert_eq!(n.provenance, Provenance::Reconstructed);
        assert_eq!(n.graph.edges(), vec![(0, 1), (0, 2), (1, 2), (1, 3)]);

        let err = catalog("7R9").unwrap_err();
        assert!(err.to_string().contains("1R3"));
        assert!(catalog("2R5").is_err());
        assert!(catalog("N2R3").is_err());
    }

    #[test]
    fn file_round_trip_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tri.json");
        let tri = ring_star(1, 3).unwrap();
        write_graph(&tri, &path).unwrap();
        assert_eq!(read_graph(&path).unwrap().mask(), tri.mask());

        let bad = dir.path().join("bad.json");
        fs::write(&bad, "{not json").unwrap();
        assert!(matches!(read_graph(&bad), Err(Error::Json(_))));
        fs::write(&bad, r#"{"n":3,"edges":[[0,3]]}"#).unwrap();
        assert!(matches!(read_graph(&bad), Err(Error::Schema(_))));
        assert!(matches!(
            read_graph(dir.path().join("missing.json")),
            Err(Error::Io { .. })
        ));

        let g = parse_graph(r#"{"n":3,"edges":[[1,0]]}"#).unwrap();
        assert_eq!(g.edges(), vec![(0, 1)]);
    }

    #[test]
    fn network_ref_json_shapes() {
        let by_name: NetworkRef = serde_json::from_str(r#""2R3""#).unwrap();
        assert_eq!(by_name.resolve().unwrap(), ring_star(2, 3).unwrap());
        let inline: NetworkRef = serde_json::from_str(r#"{"n":2,"edges":[[0,1]]}"#).unwrap();
        assert_eq!(inline.resolve().unwrap().edge_count(), 1);
    }
}
