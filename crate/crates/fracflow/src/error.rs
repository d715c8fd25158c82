use thiserror::Error;

/// Errors produced by mesh generation, assembly and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate fracture polygon: {0}")]
    DegeneratePolygon(String),

    #[error("unsupported quadrature rule: {kind} of degree {degree}")]
    UnsupportedQuadrature { kind: &'static str, degree: usize },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("mesh file format error: {0}")]
    MeshFormat(String),

    #[error("point {0:?} lies outside the mesh")]
    PointOutsideMesh([f64; 3]),

    #[error("interface region not covered by the cut-element tiling: {0}")]
    TilingGap(String),

    #[error("factorization breakdown at pivot {pivot}: block `{block}` is not positive definite")]
    FactorizationBreakdown { block: String, pivot: usize },

    #[error("singular system in {0}")]
    SingularSystem(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Tags an error with the pipeline stage it occurred in.
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
