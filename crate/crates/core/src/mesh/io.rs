//! JSON surface documents and Wavefront OBJ export.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{ConeSurface, EdgeGluing, MeshError, Triangulation};

/// Surface document.
///
/// `faces[f][i]` indexes into `lengths` and names the length of the edge
/// opposite local vertex `i`; `gluing` pairs oriented edges `3 * f + i`.
/// A third entry `false` in a gluing pair requests an orientation-preserving
/// identification, which is rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceFile {
    pub faces: Vec<[usize; 3]>,
    #[serde(default)]
    pub gluing: Vec<GluingEntry>,
    pub lengths: Vec<f64>,
    /// Optional 3D positions, one per derived vertex, used for export.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<Vec<[f64; 3]>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GluingEntry {
    Pair([usize; 2]),
    Flagged(usize, usize, bool),
}

impl From<GluingEntry> for EdgeGluing {
    fn from(e: GluingEntry) -> Self {
        match e {
            GluingEntry::Pair([a, b]) => EdgeGluing::new(a, b),
            GluingEntry::Flagged(a, b, reversing) => EdgeGluing { a, b, reversing },
        }
    }
}

impl SurfaceFile {
    pub fn from_json(text: &str) -> Result<Self, MeshError> {
        serde_json::from_str(text).map_err(|e| MeshError::BadInput(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("surface documents always serialize")
    }

    pub fn into_surface(self) -> Result<ConeSurface, MeshError> {
        let mut triples = Vec::with_capacity(self.faces.len());
        for (f, face) in self.faces.iter().enumerate() {
            let mut l = [0.0; 3];
            for (i, &k) in face.iter().enumerate() {
                l[i] = *self
                    .lengths
                    .get(k)
                    .ok_or_else(|| MeshError::BadInput(format!("face {f} refers to missing length {k}")))?;
            }
            triples.push(l);
        }
        let gluing: Vec<EdgeGluing> = self.gluing.iter().map(|&g| g.into()).collect();
        let topology = Triangulation::build(self.faces.len(), &gluing)?;
        let surface = ConeSurface::glue(topology, &triples)?;
        match self.embedding {
            Some(e) => surface.with_embedding(e),
            None => Ok(surface),
        }
    }

    /// Document for a surface with one length entry per edge class.
    pub fn from_surface(surface: &ConeSurface) -> Self {
        let topo = surface.topology();
        let mut lengths = vec![0.0; topo.edge_count()];
        let mut faces = Vec::with_capacity(topo.face_count());
        for f in 0..topo.face_count() {
            let mut face = [0; 3];
            for (i, slot) in face.iter_mut().enumerate() {
                let e = topo.edge_of(3 * f + i);
                lengths[e] = surface.length(3 * f + i);
                *slot = e;
            }
            faces.push(face);
        }
        SurfaceFile {
            faces,
            gluing: topo.gluing().into_iter().map(|g| GluingEntry::Pair([g.a, g.b])).collect(),
            lengths,
            embedding: surface.embedding().map(|e| e.to_vec()),
        }
    }
}

/// OBJ text for a surface.
pub trait ObjExport {
    fn to_obj(&self) -> String;
}

impl ObjExport for ConeSurface {
    /// Uses the 3D embedding when present, otherwise lays every face out flat
    /// and separately on a square grid in the z = 0 plane.
    fn to_obj(&self) -> String {
        let mut out = String::new();
        let topo = self.topology();
        match self.embedding() {
            Some(pos) => {
                for p in pos {
                    let _ = writeln!(out, "v {:.9} {:.9} {:.9}", p[0], p[1], p[2]);
                }
                for f in 0..topo.face_count() {
                    let v: Vec<usize> = (0..3).map(|i| topo.vertex_of(super::Corner::new(f, i)) + 1).collect();
                    let _ = writeln!(out, "f {} {} {}", v[0], v[1], v[2]);
                }
            }
            None => {
                let cols = (topo.face_count() as f64).sqrt().ceil() as usize;
                let spacing = (0..topo.face_count()).flat_map(|f| self.face_lengths(f)).fold(0.0f64, f64::max) * 1.25;
                for f in 0..topo.face_count() {
                    let ox = (f % cols) as f64 * spacing;
                    let oy = (f / cols) as f64 * spacing;
                    for p in self.face_layout(f) {
                        let _ = writeln!(out, "v {:.9} {:.9} 0", p[0] + ox, p[1] + oy);
                    }
                }
                for f in 0..topo.face_count() {
                    let _ = writeln!(out, "f {} {} {}", 3 * f + 1, 3 * f + 2, 3 * f + 3);
                }
            }
        }
        out
    }
}
