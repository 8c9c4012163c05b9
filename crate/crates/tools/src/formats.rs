//! JSON file formats for fans and presentations.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use toric_core::presentation::NamedRelation;
use toric_core::{Fan, LatticeVector, Presentation, Relation};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: neither a fan (\"max_cones\") nor a presentation (\"relations\")")]
    UnknownShape { path: PathBuf },
    #[error(transparent)]
    Core(#[from] toric_core::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanFile {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl FanFile {
    /// Canonical form: rays in order, each cone ascending, cones lexicographic.
    pub fn from_fan(fan: &Fan) -> Self {
        let mut max_cones: Vec<Vec<usize>> = fan.max_cones().iter().map(|c| c.to_vec()).collect();
        max_cones.sort();
        FanFile {
            dim: fan.dim(),
            rays: fan.rays().iter().map(|r| r.coords().to_vec()).collect(),
            max_cones,
            labels: fan.labels().map(<[String]>::to_vec),
        }
    }

    pub fn to_fan(&self) -> Result<Fan, FormatError> {
        Ok(Fan::new(
            self.dim,
            self.rays.iter().cloned().map(LatticeVector::new).collect(),
            self.max_cones.clone(),
            self.labels.clone(),
        )?)
    }

    /// One ray or cone per line.
    pub fn to_json(&self) -> String {
        let mut s = String::from("{\n");
        s += &format!("  \"dim\": {},\n", self.dim);
        s += "  \"rays\": [\n";
        s += &join_lines(self.rays.iter().map(compact));
        s += "  ],\n  \"max_cones\": [\n";
        s += &join_lines(self.max_cones.iter().map(compact));
        s += "  ]";
        if let Some(labels) = &self.labels {
            s += &format!(",\n  \"labels\": {}", compact(labels));
        }
        s += "\n}\n";
        s
    }
}

fn compact<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

fn join_lines(items: impl Iterator<Item = String>) -> String {
    let items: Vec<String> = items.map(|i| format!("    {i}")).collect();
    if items.is_empty() {
        String::new()
    } else {
        items.join(",\n") + "\n"
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationFile {
    pub lhs: Vec<String>,
    /// `[name, coefficient]` pairs; empty means `= 0`.
    pub rhs: Vec<(String, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationFile {
    pub dim: usize,
    pub rays: Vec<String>,
    pub relations: Vec<RelationFile>,
}

impl PresentationFile {
    pub fn from_presentation(p: &Presentation) -> Self {
        let names = p.names();
        let relation = |r: &Relation| RelationFile {
            lhs: r.lhs.iter().map(|i| names[i].clone()).collect(),
            rhs: r.rhs.iter().map(|&(i, a)| (names[i].clone(), a)).collect(),
        };
        PresentationFile {
            dim: p.dim(),
            rays: names.to_vec(),
            relations: p.relations().iter().map(relation).collect(),
        }
    }

    pub fn to_presentation(&self) -> Result<Presentation, FormatError> {
        let rels: Vec<NamedRelation<'_>> = self
            .relations
            .iter()
            .map(|r| {
                (
                    r.lhs.iter().map(String::as_str).collect(),
                    r.rhs.iter().map(|(n, a)| (n.as_str(), *a)).collect(),
                )
            })
            .collect();
        Ok(Presentation::from_names(self.dim, self.rays.clone(), &rels)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = String::from("{\n");
        s += &format!("  \"dim\": {},\n", self.dim);
        s += &format!("  \"rays\": {},\n", compact(&self.rays));
        s += "  \"relations\": [\n";
        s += &join_lines(
            self.relations
                .iter()
                .map(compact),
        );
        s += "  ]\n}\n";
        s
    }
}

/// Either kind of input file.
#[derive(Clone, Debug)]
pub enum Input {
    Fan(Fan),
    Presentation(Presentation),
}

fn read_to_string(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, v: Value) -> Result<T, FormatError> {
    serde_json::from_value(v).map_err(|source| FormatError::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_value(path: &Path) -> Result<Value, FormatError> {
    serde_json::from_str(&read_to_string(path)?).map_err(|source| FormatError::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a fan or presentation file, telling them apart by their keys.
pub fn read_input(path: &Path) -> Result<Input, FormatError> {
    let v = read_value(path)?;
    if v.get("max_cones").is_some() {
        Ok(Input::Fan(parse::<FanFile>(path, v)?.to_fan()?))
    } else if v.get("relations").is_some() {
        Ok(Input::Presentation(parse::<PresentationFile>(path, v)?.to_presentation()?))
    } else {
        Err(FormatError::UnknownShape {
            path: path.to_path_buf(),
        })
    }
}

pub fn read_presentation(path: &Path) -> Result<Presentation, FormatError> {
    parse::<PresentationFile>(path, read_value(path)?)?.to_presentation()
}

pub fn parse_as<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, FormatError> {
    parse(path, read_value(path)?)
}

/// Writes to `path`, or to stdout when absent.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), FormatError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| FormatError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| FormatError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Fan {
        Fan::new(
            2,
            vec![
                LatticeVector::new(vec![1, 0]),
                LatticeVector::new(vec![0, 1]),
                LatticeVector::new(vec![-1, -1]),
            ],
            vec![vec![1, 2], vec![0, 2], vec![1, 0]],
            None,
        )
        .unwrap()
    }

    #[test]
    fn fan_file_is_canonical() {
        let f = FanFile::from_fan(&p2());
        assert_eq!(f.max_cones, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        let text = f.to_json();
        let back: FanFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_fan().unwrap(), p2());
        assert!(!text.contains("labels"));
        assert_eq!(
            text,
            "{\n  \"dim\": 2,\n  \"rays\": [\n    [1,0],\n    [0,1],\n    [-1,-1]\n  ],\n  \"max_cones\": [\n    [0,1],\n    [0,2],\n    [1,2]\n  ]\n}\n"
        );
    }

    #[test]
    fn presentation_round_trip() {
        let text = r#"{"dim": 2, "rays": ["a", "b", "c"], "relations": [{"lhs": ["a", "b", "c"], "rhs": []}]}"#;
        let f: PresentationFile = serde_json::from_str(text).unwrap();
        let p = f.to_presentation().unwrap();
        assert_eq!(p.relations().len(), 1);
        let again = PresentationFile::from_presentation(&p);
        assert_eq!(again, f);
        let parsed: PresentationFile = serde_json::from_str(&again.to_json()).unwrap();
        assert_eq!(parsed, f);
    }

    #[test]
    fn rhs_pairs_are_arrays() {
        let r = RelationFile {
            lhs: vec!["x1".into(), "x2".into()],
            rhs: vec![("x3".into(), 2)],
        };
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"lhs":["x1","x2"],"rhs":[["x3",2]]}"#);
    }

    #[test]
    fn malformed_inputs_are_reported() {
        let dir = std::env::temp_dir().join(format!("toric-formats-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let p = dir.join("x.json");
        fs::write(&p, r#"{"dim": 2}"#).unwrap();
        assert!(matches!(read_input(&p), Err(FormatError::UnknownShape { .. })));
        fs::write(&p, "{").unwrap();
        assert!(matches!(read_input(&p), Err(FormatError::Json { .. })));
        fs::write(&p, r#"{"dim": 2, "rays": [[2, 0], [0, 1]], "max_cones": [[0, 1]]}"#).unwrap();
        assert!(matches!(read_input(&p), Err(FormatError::Core(_))));
        let _ = fs::remove_dir_all(&dir);
    }
}
