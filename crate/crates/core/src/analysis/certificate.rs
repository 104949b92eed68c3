use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Theorem1,
    Abcd,
    Theorem5,
}

/// `Paper`: Lyapunov quantity negative, damping at the shifted
/// equilibrium positive. `Mirrored`: both signs flipped, which is the
// `Paper` case in reversed time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Paper,
    Mirrored,
}

impl Orientation {
    pub fn flipped(self) -> Orientation {
        match self {
            Orientation::Paper => Orientation::Mirrored,
            Orientation::Mirrored => Orientation::Paper,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">")]
    Greater,
    #[serde(rename = "<")]
    Less,
}

/// `witness relation bound`, evaluated from the stored witness value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub name: String,
    pub witness: String,
    pub relation: Relation,
    pub bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Region {
    /// Small cycle around `center`; the radius is the leading-order amplitude.
    Annulus { center: [f64; 2], radius_estimate: f64 },
    /// Cycle somewhere in `{x > a}`.
    HalfPlane { a: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleCertificate {
    pub kind: CertificateKind,
    pub orientation: Orientation,
    pub witnesses: Vec<Witness>,
    pub inequalities: Vec<Inequality>,
    pub region: Region,
}

impl CycleCertificate {
    pub(crate) fn new(kind: CertificateKind, orientation: Orientation, region: Region) -> Self {
        CycleCertificate { kind, orientation, witnesses: Vec::new(), inequalities: Vec::new(), region }
    }

    pub(crate) fn witness(mut self, name: &str, value: f64) -> Self {
        self.witnesses.push(Witness { name: name.into(), value });
        self
    }

    pub(crate) fn require(mut self, name: &str, witness: &str, relation: Relation, bound: f64) -> Self {
        self.inequalities.push(Inequality {
            name: name.into(),
            witness: witness.into(),
            relation,
            bound,
        });
        self
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.witnesses.iter().find(|w| w.name == name).map(|w| w.value)
    }

    /// Re-evaluates every inequality from the stored witnesses.
    pub fn recheck(&self) -> bool {
        self.inequalities.iter().all(|q| match self.value(&q.witness) {
            Some(v) => match q.relation {
                Relation::Greater => v > q.bound,
                Relation::Less => v < q.bound,
            },
            None => false,
        })
    }
}
