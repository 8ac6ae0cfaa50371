//! Point-cloud ingestion: whitespace `x y z [tag]` text and the vertex part of
//! ASCII PLY.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Vec3;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud {
    pub points: Vec<Vec3>,
    /// Optional per-point section tag, same length as `points` when present.
    pub tags: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloudFormat {
    XyzAscii,
    PlyAscii,
}

impl CloudFormat {
    /// `.ply` is PLY, anything else is treated as xyz text.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("ply") => CloudFormat::PlyAscii,
            _ => CloudFormat::XyzAscii,
        }
    }
}

impl PointCloud {
    pub fn new(points: Vec<Vec3>) -> Self {
        Self { points, tags: None }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_xyz_string(&self) -> String {
        let mut s = String::with_capacity(self.points.len() * 32);
        for (k, p) in self.points.iter().enumerate() {
            let _ = write!(s, "{} {} {}", p.x, p.y, p.z);
            if let Some(tags) = &self.tags {
                let _ = write!(s, " {}", tags[k]);
            }
            s.push('\n');
        }
        s
    }

    pub fn to_ply_string(&self) -> String {
        let mut s = format!(
            "ply\nformat ascii 1.0\nelement vertex {}\nproperty double x\nproperty double y\nproperty double z\nend_header\n",
            self.points.len()
        );
        for p in &self.points {
            let _ = writeln!(s, "{} {} {}", p.x, p.y, p.z);
        }
        s
    }

    pub fn write(&self, path: &Path, format: CloudFormat) -> Result<()> {
        let text = match format {
            CloudFormat::XyzAscii => self.to_xyz_string(),
            CloudFormat::PlyAscii => self.to_ply_string(),
        };
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

pub fn load_point_cloud(path: &Path, format: CloudFormat) -> Result<PointCloud> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let origin = path.display().to_string();
    match format {
        CloudFormat::XyzAscii => parse_xyz(&text, &origin),
        CloudFormat::PlyAscii => parse_ply(&text, &origin),
    }
}

fn parse_coord(tok: Option<&str>, origin: &str, line: u64) -> Result<f64> {
    let tok = tok.ok_or_else(|| Error::parse(origin, line, "expected three coordinates"))?;
    let v: f64 = tok
        .parse()
        .map_err(|_| Error::parse(origin, line, format!("not a number: {tok:?}")))?;
    if !v.is_finite() {
        return Err(Error::parse(origin, line, "non-finite coordinate"));
    }
    Ok(v)
}

pub fn parse_xyz(text: &str, origin: &str) -> Result<PointCloud> {
    let mut points = Vec::new();
    let mut tags: Vec<String> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k as u64 + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut it = body.split_whitespace();
        let p = Vec3::new(
            parse_coord(it.next(), origin, line)?,
            parse_coord(it.next(), origin, line)?,
            parse_coord(it.next(), origin, line)?,
        );
        let tag = it.next();
        if it.next().is_some() {
            return Err(Error::parse(origin, line, "too many columns"));
        }
        match tag {
            Some(t) => {
                if tags.len() != points.len() {
                    return Err(Error::parse(origin, line, "tag column used inconsistently"));
                }
                tags.push(t.to_string());
            }
            None if !tags.is_empty() => {
                return Err(Error::parse(origin, line, "tag column used inconsistently"))
            }
            None => {}
        }
        points.push(p);
    }
    if points.is_empty() {
        return Err(Error::parse(origin, 0, "point cloud is empty"));
    }
    let tags = (!tags.is_empty()).then_some(tags);
    Ok(PointCloud { points, tags })
}

/// Parses ASCII PLY, keeping only the `x`, `y`, `z` vertex properties.
/// Elements declared after `vertex` are skipped.
pub fn parse_ply(text: &str, origin: &str) -> Result<PointCloud> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k as u64 + 1, l.trim()));
    match lines.next() {
        Some((_, "ply")) => {}
        _ => return Err(Error::parse(origin, 1, "missing 'ply' magic")),
    }

    let mut vertex_count: Option<usize> = None;
    let mut in_vertex = false;
    let mut props: Vec<String> = Vec::new();
    let mut trailing_elements = false;
    let mut header_end = None;
    for (line, l) in lines.by_ref() {
        let mut tok = l.split_whitespace();
        match tok.next() {
            Some("format") => {
                if tok.next() != Some("ascii") {
                    return Err(Error::parse(origin, line, "only ascii PLY is supported"));
                }
            }
            Some("comment") | Some("obj_info") => {}
            Some("element") => {
                let name = tok.next().unwrap_or("");
                let count = tok.next().and_then(|c| c.parse::<usize>().ok()).ok_or_else(|| {
                    Error::parse(origin, line, "element needs a name and a count")
                })?;
                if name == "vertex" {
                    if vertex_count.is_some() {
                        return Err(Error::parse(origin, line, "duplicate vertex element"));
                    }
                    vertex_count = Some(count);
                    in_vertex = true;
                } else {
                    if vertex_count.is_none() {
                        return Err(Error::parse(
                            origin,
                            line,
                            "vertex element must come first",
                        ));
                    }
                    in_vertex = false;
                    trailing_elements = trailing_elements || count > 0;
                }
            }
            Some("property") => {
                if in_vertex {
                    let name = tok.last().unwrap_or("");
                    props.push(name.to_string());
                }
            }
            Some("end_header") => {
                header_end = Some(line);
                break;
            }
            _ => return Err(Error::parse(origin, line, format!("unexpected header line {l:?}"))),
        }
    }
    let header_end = header_end.ok_or_else(|| Error::parse(origin, 0, "missing end_header"))?;
    let n = vertex_count.ok_or_else(|| Error::parse(origin, header_end, "no vertex element"))?;
    let col = |name: &str| {
        props
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::parse(origin, header_end, format!("vertex lacks property {name}")))
    };
    let (cx, cy, cz) = (col("x")?, col("y")?, col("z")?);

    let mut points = Vec::with_capacity(n);
    let mut last_line = header_end;
    for (line, l) in lines.by_ref() {
        last_line = line;
        if l.is_empty() {
            continue;
        }
        if points.len() == n {
            if trailing_elements {
                break;
            }
            return Err(Error::parse(
                origin,
                line,
                format!("more vertex lines than the declared {n}"),
            ));
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != props.len() {
            return Err(Error::parse(
                origin,
                line,
                format!("expected {} values, found {}", props.len(), toks.len()),
            ));
        }
        points.push(Vec3::new(
            parse_coord(Some(toks[cx]), origin, line)?,
            parse_coord(Some(toks[cy]), origin, line)?,
            parse_coord(Some(toks[cz]), origin, line)?,
        ));
    }
    if points.len() != n {
        return Err(Error::parse(
            origin,
            last_line,
            format!("header declares {n} vertices but {} were read", points.len()),
        ));
    }
    if points.is_empty() {
        return Err(Error::parse(origin, header_end, "point cloud is empty"));
    }
    Ok(PointCloud { points, tags: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_line_xyz() {
        let c = parse_xyz("0 0 0\n1 2 3\n# comment\n\n-1.5 2e-3 4\n", "t").unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.points[2], Vec3::new(-1.5, 0.002, 4.0));
        assert!(c.tags.is_none());
    }

    #[test]
    fn xyz_tags() {
        let c = parse_xyz("0 0 0 tail\n1 2 3 wing\n", "t").unwrap();
        assert_eq!(c.tags.unwrap(), vec!["tail", "wing"]);
        assert!(parse_xyz("0 0 0 tail\n1 2 3\n", "t").is_err());
    }

    #[test]
    fn xyz_errors_carry_line() {
        match parse_xyz("0 0 0\n1 2\n", "f.xyz") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_xyz("0 0 nan\n", "f"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_xyz("# nothing\n", "f").is_err());
    }

    #[test]
    fn ply_basic_and_extra_props() {
        let text = "ply\nformat ascii 1.0\ncomment made by hand\nelement vertex 2\nproperty float x\nproperty float y\nproperty float z\nproperty uchar red\nelement face 1\nproperty list uchar int vertex_indices\nend_header\n1 2 3 255\n4 5 6 0\n3 0 1 1\n";
        let c = parse_ply(text, "t").unwrap();
        assert_eq!(c.points, vec![Vec3::new(1.0, 2.0, 3.0), Vec3::new(4.0, 5.0, 6.0)]);
    }

    #[test]
    fn ply_count_mismatch() {
        let short = "ply\nformat ascii 1.0\nelement vertex 3\nproperty float x\nproperty float y\nproperty float z\nend_header\n1 2 3\n4 5 6\n";
        assert!(matches!(parse_ply(short, "t"), Err(Error::Parse { .. })));
        let long = "ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\nproperty float y\nproperty float z\nend_header\n1 2 3\n4 5 6\n";
        assert!(matches!(parse_ply(long, "t"), Err(Error::Parse { line: 9, .. })));
    }

    #[test]
    fn ply_rejects_binary() {
        let b = "ply\nformat binary_little_endian 1.0\nelement vertex 0\nend_header\n";
        assert!(parse_ply(b, "t").is_err());
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(CloudFormat::from_path(Path::new("a.PLY")), CloudFormat::PlyAscii);
        assert_eq!(CloudFormat::from_path(Path::new("a.xyz")), CloudFormat::XyzAscii);
    }
}
