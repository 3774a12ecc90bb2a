//! ingest, distances, optional squaring, agglomeration, optional root of
//! the heights, export.

use wardhc::engine::{agglomerate, detect_inversions, transform_heights, AgglomerateOptions, HeightTransform};
use wardhc::experiments::uniform_data;
use wardhc::export::{self, non_ward_warning, Classification, Format, RunMetadata, Transform};
use wardhc::Dendrogram;

use crate::config::{InputKind, RunConfig, Source};
use crate::ingest::{self, Input};

#[derive(Debug, Clone)]
pub struct ClusterRun {
    pub dendrogram: Dendrogram,
    pub metadata: RunMetadata,
    pub labels: Option<Vec<String>>,
}

pub fn load(config: &RunConfig) -> anyhow::Result<Input> {
    Ok(match (&config.source, config.kind) {
        (Source::Synthetic { n, p }, _) => Input::Data(uniform_data(*n, *p, config.seed)?),
        (Source::File(path), InputKind::DataMatrix) => Input::Data(ingest::parse_data(&ingest::read(path)?)?),
        (Source::File(path), InputKind::Dissimilarity) => {
            let (matrix, labels) = ingest::parse_dissimilarity(&ingest::read(path)?, config.input_scale)?;
            Input::Dissimilarity { matrix, labels }
        }
    })
}

pub fn run_cluster(config: &RunConfig) -> anyhow::Result<ClusterRun> {
    config.validate()?;
    let input = load(config)?;
    let labels = input.labels().map(<[String]>::to_vec);
    let mut transforms = Vec::new();
    let (dissim, input_kind) = match input {
        Input::Data(data) => {
            transforms.push(Transform::EuclideanDistance);
            let d = if config.square_input {
                transforms.push(Transform::SquareInput);
                data.squared_euclidean()
            } else {
                data.euclidean()
            };
            let kind = match config.source {
                Source::Synthetic { .. } => "synthetic-data-matrix",
                Source::File(_) => "data-matrix",
            };
            (d, kind)
        }
        Input::Dissimilarity { matrix, .. } => {
            let d = if config.square_input {
                transforms.push(Transform::SquareInput);
                matrix.squared()?
            } else {
                matrix
            };
            (d, "dissimilarity")
        }
    };

    let method = config.method;
    if config.force_scale && method.required_scale().is_some_and(|s| s != dissim.scale()) {
        transforms.push(Transform::ForcedScale);
    }
    let opts = AgglomerateOptions {
        masses: None,
        force_scale: config.force_scale,
    };
    let mut dendrogram = agglomerate(&dissim, method, config.algorithm, &opts)?;
    let inversions = detect_inversions(&dendrogram);
    if config.sqrt_heights {
        transforms.push(Transform::SqrtHeights);
        dendrogram = transform_heights(&dendrogram, HeightTransform::Sqrt)?;
    }

    let mut warnings: Vec<String> = non_ward_warning(method, dissim.scale()).into_iter().collect();
    if !inversions.is_empty() {
        warnings.push(format!("inversions at steps {inversions:?}"));
    }
    let metadata = RunMetadata {
        method,
        algorithm: config.algorithm,
        input_kind: input_kind.into(),
        agglomeration_scale: dissim.scale(),
        height_scale: dendrogram.height_scale(),
        transforms,
        classification: Classification::of(method, dissim.scale()),
        warnings,
        seed: matches!(config.source, Source::Synthetic { .. }).then_some(config.seed),
    };
    Ok(ClusterRun {
        dendrogram,
        metadata,
        labels,
    })
}

pub fn render(run: &ClusterRun, format: Format) -> String {
    let labels = run.labels.as_deref();
    match format {
        Format::MergeTable => export::merge_table(&run.dendrogram),
        Format::Newick => export::newick(&run.dendrogram, labels) + "\n",
        Format::Json => export::to_json(&run.dendrogram, &run.metadata),
        Format::Svg => {
            let m = &run.metadata;
            let class = match m.classification {
                Classification::Ward => "Ward",
                Classification::NonWard => "NON-WARD",
                Classification::NotWardMethod => "not a Ward method",
            };
            let title = format!("{} on {} dissimilarities ({class})", m.method, m.agglomeration_scale);
            export::svg(&run.dendrogram, labels, &title)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;
    use wardhc::engine::Algorithm;
    use wardhc::{HeightScale, LinkageMethod, Scale};

    fn line_file() -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "0\n1\n10").unwrap();
        f
    }

    fn config(path: &std::path::Path, method: LinkageMethod, square: bool, force: bool) -> RunConfig {
        RunConfig {
            source: Source::File(path.to_path_buf()),
            kind: InputKind::DataMatrix,
            input_scale: Scale::Plain,
            method,
            square_input: square,
            sqrt_heights: false,
            force_scale: force,
            algorithm: Algorithm::Naive,
            seed: 0,
            formats: vec![Format::MergeTable],
        }
    }

    #[test]
    fn ward_d_on_squared_input() {
        let f = line_file();
        let run = run_cluster(&config(f.path(), LinkageMethod::WardD, true, false)).unwrap();
        let h = run.dendrogram.heights();
        assert_eq!(h[0], 1.0);
        assert!((h[1] - 120.333_333_333_333_33).abs() < 1e-9);
        assert_eq!(run.metadata.transforms, vec![Transform::EuclideanDistance, Transform::SquareInput]);
        assert_eq!(run.metadata.classification, Classification::Ward);
    }

    #[test]
    fn ward_d2_on_distances() {
        let f = line_file();
        let run = run_cluster(&config(f.path(), LinkageMethod::WardD2, false, false)).unwrap();
        assert!((run.dendrogram.heights()[1] - 10.969_655).abs() < 1e-5);
        assert!(run.metadata.warnings.is_empty());
    }

    #[test]
    fn forced_ward_d_is_flagged() {
        let f = line_file();
        assert!(run_cluster(&config(f.path(), LinkageMethod::WardD, false, false)).is_err());
        let run = run_cluster(&config(f.path(), LinkageMethod::WardD, false, true)).unwrap();
        assert!((run.dendrogram.heights()[1] - 37.0 / 3.0).abs() < 1e-12);
        assert_eq!(run.metadata.classification, Classification::NonWard);
        assert!(run.metadata.transforms.contains(&Transform::ForcedScale));
        assert!(run.metadata.warnings[0].starts_with("NON-WARD"));
    }

    #[test]
    fn sqrt_heights_are_recorded() {
        let f = line_file();
        let cfg = RunConfig {
            sqrt_heights: true,
            ..config(f.path(), LinkageMethod::WardD, true, false)
        };
        let run = run_cluster(&cfg).unwrap();
        assert_eq!(run.dendrogram.height_scale(), HeightScale::SqrtTransformed);
        assert_eq!(run.metadata.transforms.last(), Some(&Transform::SqrtHeights));
        assert!((run.dendrogram.heights()[1] - 10.969_655).abs() < 1e-5);
    }

    #[test]
    fn centroid_inversions_become_warnings() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "n=3\n4 4 4").unwrap();
        let cfg = RunConfig {
            kind: InputKind::Dissimilarity,
            input_scale: Scale::Squared,
            ..config(f.path(), LinkageMethod::Centroid, false, false)
        };
        let run = run_cluster(&cfg).unwrap();
        assert_eq!(run.metadata.warnings, vec!["inversions at steps [1]".to_string()]);
        assert_eq!(run.metadata.classification, Classification::NotWardMethod);
    }
}
