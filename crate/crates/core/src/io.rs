//! JSON link files: `{ "components": [ { "vertices": [[x,y,z], ...], "closed": bool }, ... ] }`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{GeomError, PolyLink, Vec3};

#[derive(Debug, Error)]
pub enum LinkFileError {
    #[error("invalid link JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("expected exactly 2 components, found {0}")]
    ComponentCount(usize),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentFile {
    pub vertices: Vec<Vec3>,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkFile {
    pub components: Vec<ComponentFile>,
}

impl LinkFile {
    pub fn from_json(text: &str) -> Result<Self, LinkFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("link files always serialize")
    }

    /// Validated two-component link.
    pub fn to_link(&self) -> Result<PolyLink, LinkFileError> {
        let [c1, c2] = self.components.as_slice() else {
            return Err(LinkFileError::ComponentCount(self.components.len()));
        };
        let link = PolyLink::new(
            c1.vertices.clone(),
            c1.closed,
            c2.vertices.clone(),
            c2.closed,
        );
        link.validate()?;
        Ok(link)
    }
}

impl From<&PolyLink> for LinkFile {
    fn from(link: &PolyLink) -> Self {
        LinkFile {
            components: vec![
                ComponentFile {
                    vertices: link.comp1.clone(),
                    closed: link.closed1,
                },
                ComponentFile {
                    vertices: link.comp2.clone(),
                    closed: link.closed2,
                },
            ],
        }
    }
}

/// Parses a link file straight into a validated [`PolyLink`].
pub fn parse_link(text: &str) -> Result<PolyLink, LinkFileError> {
    LinkFile::from_json(text)?.to_link()
}
