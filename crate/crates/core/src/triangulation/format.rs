//! The `tri-v1` JSON format.

use serde::{Deserialize, Serialize};

use super::{Gluing, Perm, Triangulation};
use crate::error::{Error, Result};

pub const TRI_FORMAT: &str = "tri-v1";

#[derive(Clone, Copy, Debug)]
pub struct ParseOptions {
    /// Reject unglued faces and require a closed oriented manifold.
    pub closed: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { closed: true }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TriFile {
    format: String,
    tetrahedra: usize,
    gluings: Vec<Vec<Option<Entry>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    tet: usize,
    face: u8,
    perm: Vec<u8>,
}

pub fn parse_triangulation(text: &[u8]) -> Result<Triangulation> {
    parse_triangulation_with(text, ParseOptions::default())
}

pub fn parse_triangulation_with(text: &[u8], opts: ParseOptions) -> Result<Triangulation> {
    let file: TriFile =
        serde_json::from_slice(text).map_err(|e| Error::Parse(format!("malformed .tri JSON: {e}")))?;
    if file.format != TRI_FORMAT {
        return Err(Error::Parse(format!(
            "unsupported format {:?}, expected {TRI_FORMAT:?}",
            file.format
        )));
    }
    if file.gluings.len() != file.tetrahedra {
        return Err(Error::Parse(format!(
            "\"tetrahedra\" is {} but \"gluings\" has {} rows",
            file.tetrahedra,
            file.gluings.len()
        )));
    }
    let mut rows = Vec::with_capacity(file.tetrahedra);
    for (t, row) in file.gluings.into_iter().enumerate() {
        if row.len() != 4 {
            return Err(Error::Parse(format!(
                "gluings[{t}] has {} entries, expected 4",
                row.len()
            )));
        }
        let mut out = [None; 4];
        for (f, entry) in row.into_iter().enumerate() {
            let Some(e) = entry else {
                if opts.closed {
                    return Err(Error::Parse(format!(
                        "gluings[{t}][{f}] is null in a closed triangulation"
                    )));
                }
                continue;
            };
            let perm: Perm = e.perm.as_slice().try_into().map_err(|_| {
                Error::Parse(format!(
                    "gluings[{t}][{f}].perm has {} entries, expected 4",
                    e.perm.len()
                ))
            })?;
            out[f] = Some(Gluing { tet: e.tet, face: e.face, perm });
        }
        rows.push(out);
    }
    let located = |e: Error| match e {
        Error::InvalidTriangulation(m) => Error::Parse(m),
        other => other,
    };
    if opts.closed {
        Triangulation::new(rows).map_err(located)
    } else {
        Triangulation::with_boundary(rows).map_err(located)
    }
}

impl Triangulation {
    /// Serializes to `tri-v1`, one tetrahedron per line.
    pub fn to_tri_json(&self) -> String {
        let mut out = format!(
            "{{\n  \"format\": \"{TRI_FORMAT}\",\n  \"tetrahedra\": {},\n  \"gluings\": [\n",
            self.tet_count()
        );
        for (t, row) in self.gluings().iter().enumerate() {
            let cells: Vec<String> = row
                .iter()
                .map(|g| match g {
                    None => "null".to_string(),
                    Some(g) => format!(
                        "{{\"tet\": {}, \"face\": {}, \"perm\": [{}, {}, {}, {}]}}",
                        g.tet, g.face, g.perm[0], g.perm[1], g.perm[2], g.perm[3]
                    ),
                })
                .collect();
            let sep = if t + 1 == self.tet_count() { "" } else { "," };
            out.push_str(&format!("    [{}]{sep}\n", cells.join(", ")));
        }
        out.push_str("  ]\n}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::census;

    #[test]
    fn round_trip_census() {
        for (name, t) in census() {
            let text = t.to_tri_json();
            let back = parse_triangulation(text.as_bytes()).unwrap();
            assert_eq!(&back, t, "{name}");
        }
    }

    #[test]
    fn diagnostics_name_the_entry() {
        let bad = r#"{"format":"tri-v1","tetrahedra":1,"gluings":[[{"tet":3,"face":0,"perm":[0,1,2,3]},null,null,null]]}"#;
        let err = parse_triangulation_with(bad.as_bytes(), ParseOptions { closed: false })
            .unwrap_err()
            .to_string();
        assert!(err.contains("tetrahedron 0 face 0") && err.contains("3"), "{err}");

        let err = parse_triangulation(bad.as_bytes()).unwrap_err().to_string();
        assert!(err.contains("gluings[0][1]"), "{err}");

        let perm = r#"{"format":"tri-v1","tetrahedra":1,"gluings":[[{"tet":0,"face":1,"perm":[1,1,2,3]},{"tet":0,"face":0,"perm":[1,0,2,3]},null,null]]}"#;
        let err = parse_triangulation_with(perm.as_bytes(), ParseOptions { closed: false })
            .unwrap_err()
            .to_string();
        assert!(err.contains("not a permutation"), "{err}");

        assert!(parse_triangulation(b"{not json").is_err());
        let wrong = r#"{"format":"tri-v2","tetrahedra":0,"gluings":[]}"#;
        assert!(parse_triangulation(wrong.as_bytes()).unwrap_err().to_string().contains("tri-v2"));
    }
}
