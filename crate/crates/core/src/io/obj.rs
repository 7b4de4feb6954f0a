use std::fmt::Write;

use super::fmt_f64;
use crate::error::{Error, Result};

/// Triangle mesh with optional texture coordinates (one per vertex).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ObjMesh {
    pub positions: Vec<[f64; 3]>,
    pub texcoords: Vec<[f64; 2]>,
    pub faces: Vec<[usize; 3]>,
}

impl ObjMesh {
    pub fn face_areas(&self) -> Vec<f64> {
        self.faces
            .iter()
            .map(|f| {
                let [a, b, c] = f.map(|i| nalgebra::Vector3::from(self.positions[i]));
                0.5 * (b - a).cross(&(c - a)).norm()
            })
            .collect()
    }
}

/// Reads `v` and `f` records; faces may use `v/vt/vn` forms and negative
/// indices. Polygons are fan-triangulated.
pub fn parse_obj(text: &str) -> Result<ObjMesh> {
    let mut mesh = ObjMesh::default();
    let err = |line: usize, msg: &str| Error::Input(format!("line {line}: {msg}"));
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let mut tok = raw.split_whitespace();
        match tok.next() {
            Some("v") => {
                let c: Vec<f64> = tok
                    .take(3)
                    .map(|t| t.parse::<f64>().map_err(|_| err(line, &format!("bad coordinate {t:?}"))))
                    .collect::<Result<_>>()?;
                if c.len() != 3 {
                    return Err(err(line, "vertex needs three coordinates"));
                }
                mesh.positions.push([c[0], c[1], c[2]]);
            }
            Some("vt") => {
                let c: Vec<f64> = tok
                    .take(2)
                    .map(|t| t.parse::<f64>().map_err(|_| err(line, &format!("bad coordinate {t:?}"))))
                    .collect::<Result<_>>()?;
                if c.len() != 2 {
                    return Err(err(line, "texture coordinate needs two values"));
                }
                mesh.texcoords.push([c[0], c[1]]);
            }
            Some("f") => {
                let idx: Vec<usize> = tok
                    .map(|t| {
                        let i: i64 = t
                            .split('/')
                            .next()
                            .and_then(|s| s.parse().ok())
                            .ok_or_else(|| err(line, &format!("bad face index {t:?}")))?;
                        let k = if i < 0 { mesh.positions.len() as i64 + i } else { i - 1 };
                        if k < 0 || k as usize >= mesh.positions.len() {
                            return Err(err(line, &format!("face index {i} out of range")));
                        }
                        Ok(k as usize)
                    })
                    .collect::<Result<_>>()?;
                if idx.len() < 3 {
                    return Err(err(line, "face needs at least three vertices"));
                }
                for k in 1..idx.len() - 1 {
                    mesh.faces.push([idx[0], idx[k], idx[k + 1]]);
                }
            }
            _ => {}
        }
    }
    if mesh.faces.is_empty() {
        return Err(Error::Input("mesh has no faces".into()));
    }
    Ok(mesh)
}

pub fn write_obj(mesh: &ObjMesh) -> String {
    let mut s = String::new();
    for p in &mesh.positions {
        let _ = writeln!(s, "v {} {} {}", fmt_f64(p[0]), fmt_f64(p[1]), fmt_f64(p[2]));
    }
    for t in &mesh.texcoords {
        let _ = writeln!(s, "vt {} {}", fmt_f64(t[0]), fmt_f64(t[1]));
    }
    let tex = mesh.texcoords.len() == mesh.positions.len() && !mesh.texcoords.is_empty();
    for f in &mesh.faces {
        let [a, b, c] = f.map(|i| i + 1);
        if tex {
            let _ = writeln!(s, "f {a}/{a} {b}/{b} {c}/{c}");
        } else {
            let _ = writeln!(s, "f {a} {b} {c}");
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mesh = ObjMesh {
            positions: vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.1, 1.0 / 3.0, 0.0]],
            texcoords: vec![[0.5, 0.25], [0.0, 0.0], [1.0, 1.0]],
            faces: vec![[0, 1, 2]],
        };
        assert_eq!(parse_obj(&write_obj(&mesh)).unwrap(), mesh);
        assert!((mesh.face_areas()[0] - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn quads_and_errors() {
        let m = parse_obj("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1/1 2/2 3/3 -1\n").unwrap();
        assert_eq!(m.faces, vec![[0, 1, 2], [0, 2, 3]]);
        let e = parse_obj("v 0 0 0\nf 1 2 3\n").unwrap_err();
        assert!(e.to_string().contains("line 2"));
    }
}
