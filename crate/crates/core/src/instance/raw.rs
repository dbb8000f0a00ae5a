use std::collections::BTreeMap;

use serde::Deserialize;

/// A scalar written as a string (`"3/2"`, `"1 mod 2"`) or a bare integer.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum RawScalar {
    Int(i64),
    Text(String),
}

pub type RawVector = Vec<RawScalar>;

/// A matrix as a list of rows.
pub type RawMatrix = Vec<Vec<RawScalar>>;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawInstance {
    pub name: String,
    #[serde(default)]
    pub description: Option<String>,
    pub field: String,
    pub algebras: BTreeMap<String, RawAlgebra>,
    #[serde(default)]
    pub extension: Option<RawExtension>,
    pub coring: RawCoring,
    #[serde(default)]
    pub grouplikes: Vec<RawGrouplike>,
    #[serde(default)]
    pub modules: Vec<RawModule>,
    #[serde(default)]
    pub free_basis: Option<Vec<RawVector>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RawAlgebra {
    /// `mult[i][j]` is the product of basis elements `i` and `j`.
    Table {
        #[serde(default)]
        labels: Option<Vec<String>>,
        mult: Vec<Vec<RawVector>>,
        unit: RawVector,
    },
    /// `k[var]/(var^n + low[n-1] var^{n-1} + … + low[0])`.
    Polynomial { var: String, low: RawVector },
    Ground,
    UpperTriangular,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawExtension {
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub matrix: Option<RawMatrix>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RawCoring {
    Trivial {
        ring: String,
    },
    Sweedler,
    Entwining {
        algebra: String,
        coalgebra: RawCoalgebra,
        psi: RawPsi,
    },
    FromDg {
        ring: String,
        omega1: RawBimodule,
        d0: RawMatrix,
        /// A lift of `d: Ω¹ → Ω¹ ⊗_R Ω¹` to `Ω¹ ⊗_k Ω¹`.
        d1_lift: RawMatrix,
    },
    Explicit {
        ring: String,
        dim: usize,
        #[serde(default)]
        labels: Option<Vec<String>>,
        left: Vec<RawMatrix>,
        right: Vec<RawMatrix>,
        delta_lift: RawMatrix,
        counit: RawMatrix,
    },
}

/// Action matrices of the ring's basis elements on a space of dimension `dim`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBimodule {
    pub dim: usize,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    pub left: Vec<RawMatrix>,
    pub right: Vec<RawMatrix>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RawCoalgebra {
    Points {
        labels: Vec<String>,
    },
    Table {
        labels: Vec<String>,
        delta: RawMatrix,
        counit: RawVector,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum RawPsi {
    Named(String),
    Matrix(RawMatrix),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGrouplike {
    pub name: String,
    pub vector: RawVector,
    #[serde(default)]
    pub semi: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawModule {
    pub name: String,
    pub module: RawModuleKind,
    #[serde(default)]
    pub coaction: Option<RawCoaction>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RawModuleKind {
    Regular,
    Free {
        rank: usize,
    },
    Coring,
    Explicit {
        dim: usize,
        right: Vec<RawMatrix>,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum RawCoaction {
    /// `"grouplike"` or `"coproduct"`.
    Named(String),
    /// A lift `M → M ⊗_k C`, `dim M · dim C × dim M`.
    Lift { lift: RawMatrix },
}

/// Parses instance text, naming the field path on failure.
pub fn parse_raw(text: &str) -> Result<RawInstance, String> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            inner.to_string()
        } else {
            format!("{path}: {inner}")
        }
    })
}
