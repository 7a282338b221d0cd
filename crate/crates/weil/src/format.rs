//! JSON shapes for algebras, homs and diagrams.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use weil_core::category::Diagram;
use weil_core::rational::to_fraction_string;
use weil_core::{AlgebraError, AlgebraHom, Echelon, Element, WeilAlgebra};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("invalid diagram JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("node '{node}': {source}")]
    Node { node: String, source: AlgebraError },
    #[error("edge {from} -> {to}: {source}")]
    Edge { from: String, to: String, source: AlgebraError },
    #[error(transparent)]
    Diagram(AlgebraError),
}

/// An algebra with its structure constants; `structure[i][j]` is the
/// product of basis elements `i` and `j`, as `"p/q"` strings.
#[derive(Debug, Serialize)]
pub struct AlgebraJson {
    pub presentation: String,
    pub vars: Vec<String>,
    pub relations: Vec<String>,
    pub nil: u32,
    pub dim: usize,
    pub basis: Vec<String>,
    pub structure: Vec<Vec<Vec<String>>>,
}

impl AlgebraJson {
    pub fn new(w: &WeilAlgebra) -> Self {
        let d = w.dim();
        let structure = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let mut dense = vec![String::from("0/1"); d];
                        for (k, c) in w.product_of_basis(i, j) {
                            dense[*k] = to_fraction_string(c);
                        }
                        dense
                    })
                    .collect()
            })
            .collect();
        AlgebraJson {
            presentation: w.presentation().to_string(),
            vars: w.vars().to_vec(),
            relations: w.presentation().relation_strings(),
            nil: w.presentation().nilpotency_bound(),
            dim: d,
            basis: w.basis_labels(),
            structure,
        }
    }
}

/// Human-readable summary: presentation, dimension and basis.
pub fn describe(w: &WeilAlgebra) -> String {
    format!("presentation: {}\ndimension: {}\nbasis: {}", w.presentation(), w.dim(), w.basis_labels().join(", "))
}

/// Generator images of a hom, as `"x ↦ ..."` lines.
pub fn hom_images(h: &AlgebraHom) -> Vec<String> {
    h.src().vars().iter().zip(h.generator_images()).map(|(v, e)| format!("{v} ↦ {}", e.display())).collect()
}

/// Basis vectors of a subspace, written as elements of `w`.
pub fn subspace_elements(w: &Arc<WeilAlgebra>, space: &Echelon) -> Vec<String> {
    space.basis().iter().map(|v| Element::new(w, v.clone()).expect("ambient dimension").display()).collect()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeJson {
    pub id: String,
    pub algebra: String,
}

/// An edge given by the images of the source generators, written in the
/// target's variables.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub from: String,
    pub to: String,
    pub images: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramJson {
    pub nodes: Vec<NodeJson>,
    #[serde(default)]
    pub edges: Vec<EdgeJson>,
}

pub fn parse_diagram(text: &str) -> Result<Diagram, FormatError> {
    let raw: DiagramJson = serde_json::from_str(text)?;
    let mut diagram = Diagram::new();
    for node in &raw.nodes {
        let alg =
            WeilAlgebra::parse(&node.algebra).map_err(|source| FormatError::Node { node: node.id.clone(), source })?;
        diagram.add_node(&node.id, alg).map_err(FormatError::Diagram)?;
    }
    for edge in &raw.edges {
        let err = |source| FormatError::Edge { from: edge.from.clone(), to: edge.to.clone(), source };
        let missing = |id: &str| err(AlgebraError::MalformedDiagram(format!("unknown node '{id}'")));
        let src = diagram.node(&edge.from).ok_or_else(|| missing(&edge.from))?.clone();
        let dst = diagram.node(&edge.to).ok_or_else(|| missing(&edge.to))?.clone();
        let images = edge
            .images
            .iter()
            .map(|t| dst.parse_element(t).map_err(|e| err(e.into())))
            .collect::<Result<Vec<_>, _>>()?;
        let hom = AlgebraHom::from_generator_images(&src, &dst, &images).map_err(err)?;
        diagram.add_edge(&edge.from, &edge.to, hom).map_err(err)?;
    }
    Ok(diagram)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_constants_are_fractions() {
        let d2 = WeilAlgebra::parse("x | x^3 ; nil 3").unwrap();
        let j = AlgebraJson::new(&d2);
        assert_eq!(j.basis, ["1", "x", "x^2"]);
        assert_eq!(j.structure[1][1], ["0/1", "0/1", "1/1"]);
        assert_eq!(j.structure[1][2], ["0/1", "0/1", "0/1"]);
    }

    #[test]
    fn diagram_round_trip() {
        let text = r#"{"nodes": [{"id": "s", "algebra": "x,y | x^2, y^2 ; nil 3"}, {"id": "t", "algebra": "x | x^2 ; nil 2"}],
                       "edges": [{"from": "s", "to": "t", "images": ["0", "x"]}, {"from": "s", "to": "t", "images": ["0", "0"]}]}"#;
        let d = parse_diagram(text).unwrap();
        assert_eq!(d.nodes().len(), 2);
        assert_eq!(d.edges().len(), 2);
        let bad = text.replace(r#"["0", "x"]"#, r#"["1", "x"]"#);
        assert!(matches!(parse_diagram(&bad), Err(FormatError::Edge { .. })));
        assert!(matches!(parse_diagram("{"), Err(FormatError::Json(_))));
    }
}
