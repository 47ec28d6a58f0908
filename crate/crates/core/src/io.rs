//! JSON input and output for modules, Gram assignments and complex diagrams.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cmod::CModule;
use crate::error::{Error, Result};
use crate::ip::WipStructure;
use crate::linalg::{Field, Gram, Matrix, Scalar};
use crate::poset::PosetCategory;
use crate::simplicial::{ComplexDiagram, SimplicialComplex, SimplicialMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum FieldSpec {
    Q,
    Fp { p: u64 },
}

impl FieldSpec {
    pub fn to_field(self) -> Result<Field> {
        match self {
            FieldSpec::Q => Ok(Field::Rational),
            FieldSpec::Fp { p } => Field::prime(p),
        }
    }

    pub fn from_field(f: Field) -> Self {
        match f {
            Field::Rational => FieldSpec::Q,
            Field::Prime(p) => FieldSpec::Fp { p },
        }
    }
}

/// A matrix entry: an integer, or a string such as `"-3/4"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

impl Entry {
    fn from_scalar(s: &Scalar) -> Self {
        let text = s.to_string();
        match text.parse::<i64>() {
            Ok(n) => Entry::Int(n),
            Err(_) => Entry::Text(text),
        }
    }

    fn to_scalar(&self, field: Field) -> Result<Scalar> {
        match self {
            Entry::Int(n) => field.parse(&n.to_string()),
            Entry::Text(s) => field.parse(s),
        }
    }
}

pub type Rows = Vec<Vec<Entry>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub src: String,
    pub dst: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Rows>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub vertices: Vec<String>,
    /// Maximal simplices as vertex-name lists.
    pub simplices: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexMapSpec {
    pub src: String,
    pub dst: String,
    pub vertex_map: BTreeMap<String, String>,
}

/// Top-level input document. A module file carries `dim` on every object and
/// `matrix` on every edge; a diagram file carries `complexes` and
/// `complex_maps` instead.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub field: FieldSpec,
    pub objects: Vec<ObjectSpec>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grams: Option<BTreeMap<String, Rows>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complexes: Option<BTreeMap<String, ComplexSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex_maps: Option<Vec<ComplexMapSpec>>,
}

impl Document {
    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn is_diagram(&self) -> bool {
        self.complexes.is_some()
    }

    pub fn category(&self) -> Result<PosetCategory> {
        let names: Vec<&str> = self.objects.iter().map(|o| o.name.as_str()).collect();
        let edges: Vec<(&str, &str)> = self.edges.iter().map(|e| (e.src.as_str(), e.dst.as_str())).collect();
        PosetCategory::from_hasse(&names, &edges)
    }

    /// The module, unvalidated. Call [`CModule::validate`] for functoriality.
    pub fn module(&self) -> Result<CModule> {
        let field = self.field.to_field()?;
        let cat = self.category()?;
        let mut dims = vec![0; cat.len()];
        for o in &self.objects {
            let d = o.dim.ok_or_else(|| Error::Parse(format!("object `{}` has no dim", o.name)))?;
            dims[cat.index_of(&o.name)?] = d;
        }
        let mut maps: Vec<Option<Matrix>> = vec![None; cat.edges().len()];
        for e in &self.edges {
            let (a, b) = (cat.index_of(&e.src)?, cat.index_of(&e.dst)?);
            let rows = e
                .matrix
                .as_ref()
                .ok_or_else(|| Error::Parse(format!("edge {} -> {} has no matrix", e.src, e.dst)))?;
            let what = format!("edge {} -> {}", e.src, e.dst);
            let idx = cat.edge_index(a, b).expect("edge was declared");
            maps[idx] = Some(matrix_from_rows(field, rows, dims[b], dims[a], &what)?);
        }
        let maps = maps.into_iter().map(|m| m.expect("all edges parsed")).collect();
        CModule::new(cat, field, dims, maps)
    }

    pub fn wip(&self, m: &CModule) -> Result<Option<WipStructure>> {
        let Some(grams) = &self.grams else { return Ok(None) };
        let cat = m.category();
        let mut out: Vec<Option<Gram>> = vec![None; cat.len()];
        for (name, rows) in grams {
            let x = cat.index_of(name)?;
            let d = m.dim(x);
            out[x] = Some(Gram::new(matrix_from_rows(m.field(), rows, d, d, &format!("gram {name}"))?)?);
        }
        let grams = out
            .into_iter()
            .enumerate()
            .map(|(x, g)| g.ok_or_else(|| Error::Parse(format!("no gram for `{}`", cat.name(x)))))
            .collect::<Result<Vec<_>>>()?;
        WipStructure::new(m, grams).map(Some)
    }

    pub fn diagram(&self) -> Result<ComplexDiagram> {
        let cat = self.category()?;
        let specs = self
            .complexes
            .as_ref()
            .ok_or_else(|| Error::Parse("document has no complexes".into()))?;
        let mut complexes = Vec::with_capacity(cat.len());
        for x in 0..cat.len() {
            let s = specs
                .get(cat.name(x))
                .ok_or_else(|| Error::Parse(format!("no complex for `{}`", cat.name(x))))?;
            complexes.push(SimplicialComplex::from_maximal(&s.vertices, &s.simplices)?);
        }
        let mut maps: Vec<Option<SimplicialMap>> = vec![None; cat.edges().len()];
        for f in self.complex_maps.iter().flatten() {
            let (a, b) = (cat.index_of(&f.src)?, cat.index_of(&f.dst)?);
            let e = cat
                .edge_index(a, b)
                .ok_or_else(|| Error::Parse(format!("complex map {} -> {} is not a Hasse edge", f.src, f.dst)))?;
            let pairs: Vec<(&str, &str)> = f.vertex_map.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
            maps[e] = Some(SimplicialMap::from_names(&complexes[a], &complexes[b], &pairs)?);
        }
        let maps = maps
            .into_iter()
            .enumerate()
            .map(|(e, f)| {
                let (a, b) = cat.edges()[e];
                f.ok_or_else(|| Error::Parse(format!("no complex map for {} -> {}", cat.name(a), cat.name(b))))
            })
            .collect::<Result<Vec<_>>>()?;
        ComplexDiagram::new(cat, complexes, maps)
    }

    pub fn from_module(m: &CModule, w: Option<&WipStructure>) -> Self {
        let cat = m.category();
        let objects = (0..cat.len())
            .map(|x| ObjectSpec { name: cat.name(x).to_string(), dim: Some(m.dim(x)) })
            .collect();
        let edges = cat
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(a, b))| EdgeSpec {
                src: cat.name(a).to_string(),
                dst: cat.name(b).to_string(),
                matrix: Some(matrix_to_rows(m.edge_map(e))),
            })
            .collect();
        let grams = w.map(|w| {
            (0..cat.len())
                .map(|x| (cat.name(x).to_string(), matrix_to_rows(w.gram(x).matrix())))
                .collect()
        });
        Document {
            field: FieldSpec::from_field(m.field()),
            objects,
            edges,
            grams,
            complexes: None,
            complex_maps: None,
        }
    }

    pub fn from_diagram(d: &ComplexDiagram, field: Field) -> Self {
        let cat = d.category();
        let objects = (0..cat.len())
            .map(|x| ObjectSpec { name: cat.name(x).to_string(), dim: None })
            .collect();
        let edges = cat
            .edge_names()
            .into_iter()
            .map(|(src, dst)| EdgeSpec { src, dst, matrix: None })
            .collect();
        let complexes = (0..cat.len())
            .map(|x| {
                let c = d.complex(x);
                let v = c.vertices();
                let simplices = c
                    .maximal()
                    .iter()
                    .map(|s| s.iter().map(|&i| v[i].clone()).collect())
                    .collect();
                (cat.name(x).to_string(), ComplexSpec { vertices: v.to_vec(), simplices })
            })
            .collect();
        let complex_maps = cat
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(a, b))| {
                let (src, dst) = (d.complex(a), d.complex(b));
                let vertex_map = d
                    .map(e)
                    .vertex_map
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| (src.vertices()[i].clone(), dst.vertices()[j].clone()))
                    .collect();
                ComplexMapSpec { src: cat.name(a).to_string(), dst: cat.name(b).to_string(), vertex_map }
            })
            .collect();
        Document {
            field: FieldSpec::from_field(field),
            objects,
            edges,
            grams: None,
            complexes: Some(complexes),
            complex_maps: Some(complex_maps),
        }
    }
}

pub fn matrix_to_rows(m: &Matrix) -> Rows {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(Entry::from_scalar).collect())
        .collect()
}

pub fn matrix_from_rows(field: Field, rows: &Rows, nrows: usize, ncols: usize, what: &str) -> Result<Matrix> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Parse(format!("{what}: expected a {nrows}x{ncols} matrix")));
    }
    let data = rows
        .iter()
        .flatten()
        .map(|e| e.to_scalar(field))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_row_major(field, nrows, ncols, data)
}
