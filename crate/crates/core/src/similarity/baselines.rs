//! Meta-path and meta-structure baselines: PathSim, BPCRW and BSCSE.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hin::{Hin, ObjectId};
use crate::matrix::product::candidates;
use crate::matrix::relation::{commuting_matrix, CommutingMatrix};
use crate::schema::NetworkSchema;
use crate::similarity::result::{Params, SimilarityResult};
use crate::structure::{MetaPath, MetaStructure};

fn expect_type(hin: &Hin, obj: ObjectId, ty: crate::hin::TypeId) -> Result<()> {
    if obj.index() >= hin.num_objects() {
        return Err(Error::UnknownObject(format!("#{}", obj.0)));
    }
    if hin.type_of(obj) != ty {
        return Err(Error::ObjectTypeMismatch {
            object: hin.object_name(obj).to_string(),
            expected: hin.type_name(ty).to_string(),
            found: hin.type_name(hin.type_of(obj)).to_string(),
        });
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha must lie in [0, 1], got {alpha}"
        )))
    }
}

/// PathSim over a precomputed unnormalized commuting matrix.
pub fn pathsim_from_counts(m: &CommutingMatrix, i: usize, j: usize) -> f64 {
    let d = m.get(i, i) + m.get(j, j);
    if d > 0.0 {
        2.0 * m.get(i, j) / d
    } else {
        log::warn!("pathsim: zero self-counts for ordinals {i} and {j}");
        0.0
    }
}

fn symmetric_counts(hin: &Hin, schema: &NetworkSchema, path: &MetaPath) -> Result<CommutingMatrix> {
    if !path.is_symmetric() {
        return Err(Error::IncompatibleStructure(format!(
            "PathSim needs a symmetric meta path, got {}",
            path.display(hin)
        )));
    }
    commuting_matrix(hin, schema, &path.to_structure(), false)
}

pub fn pathsim(
    hin: &Hin,
    schema: &NetworkSchema,
    path: &MetaPath,
    source: ObjectId,
    target: ObjectId,
) -> Result<f64> {
    let m = symmetric_counts(hin, schema, path)?;
    expect_type(hin, source, path.types[0])?;
    expect_type(hin, target, path.types[0])?;
    Ok(pathsim_from_counts(&m, hin.ordinal(source), hin.ordinal(target)))
}

pub fn pathsim_row(
    hin: &Hin,
    schema: &NetworkSchema,
    path: &MetaPath,
    source: ObjectId,
) -> Result<SimilarityResult> {
    let m = symmetric_counts(hin, schema, path)?;
    let ty = path.types[0];
    expect_type(hin, source, ty)?;
    let s = hin.ordinal(source);
    Ok(SimilarityResult {
        source,
        metric: "pathsim",
        target_type: ty,
        scores: (0..hin.count_of(ty))
            .map(|t| pathsim_from_counts(&m, s, t))
            .collect(),
        params: Params {
            structure: Some(path.display(hin).to_string()),
            ..Params::default()
        },
    })
}

/// Biased path-constrained random walk: the walker's mass is split over
/// the next-type neighbours as `mass / |N|^α`; mass reaching the end of
/// the path is credited to the object it arrives at.
pub fn bpcrw(hin: &Hin, path: &MetaPath, source: ObjectId, alpha: f64) -> Result<SimilarityResult> {
    check_alpha(alpha)?;
    expect_type(hin, source, path.types[0])?;
    let target_type = *path.types.last().unwrap();
    let mut scores = vec![0.0; hin.count_of(target_type)];
    walk(hin, &path.types[1..], source, 1.0, alpha, &mut scores);
    Ok(SimilarityResult {
        source,
        metric: "bpcrw",
        target_type,
        scores,
        params: Params {
            alpha: Some(alpha),
            structure: Some(path.display(hin).to_string()),
            ..Params::default()
        },
    })
}

fn walk(hin: &Hin, rest: &[crate::hin::TypeId], at: ObjectId, mass: f64, alpha: f64, scores: &mut [f64]) {
    let Some((&next, tail)) = rest.split_first() else {
        scores[hin.ordinal(at)] += mass;
        return;
    };
    let nbrs = hin.neighbors_of_type(at, next);
    if nbrs.is_empty() {
        return;
    }
    let share = mass / (nbrs.len() as f64).powf(alpha);
    for &n in nbrs {
        walk(hin, tail, n, share, alpha, scores);
    }
}

/// Biased structure-constrained subgraph expansion. Each instance prefix
/// ending in tuple `σ` is expanded into the tuples of the next layer that
/// are adjacent to `σ`, passing on `mass / |N(σ)|^α`.
pub fn bscse(
    hin: &Hin,
    schema: &NetworkSchema,
    structure: &MetaStructure,
    source: ObjectId,
    alpha: f64,
) -> Result<SimilarityResult> {
    check_alpha(alpha)?;
    structure.validate(schema)?;
    expect_type(hin, source, structure.source_type())?;
    let target_type = structure.target_type();
    let mut scores = vec![0.0; hin.count_of(target_type)];
    expand(hin, schema, &structure.layers()[1..], &[source], 1.0, alpha, &mut scores);
    Ok(SimilarityResult {
        source,
        metric: "bscse",
        target_type,
        scores,
        params: Params {
            alpha: Some(alpha),
            structure: Some(structure.display(schema).to_string()),
            ..Params::default()
        },
    })
}

fn expand(
    hin: &Hin,
    schema: &NetworkSchema,
    rest: &[Vec<crate::hin::TypeId>],
    sigma: &[ObjectId],
    mass: f64,
    alpha: f64,
    scores: &mut [f64],
) {
    let Some((next, tail)) = rest.split_first() else {
        scores[hin.ordinal(sigma[0])] += mass;
        return;
    };
    let cands = candidates(hin, schema, sigma, next);
    let count: usize = cands.iter().map(|c| c.len()).product();
    if count == 0 {
        return;
    }
    let share = mass / (count as f64).powf(alpha);
    // odometer over the candidate lists
    let mut idx = vec![0usize; cands.len()];
    let mut tuple: Vec<ObjectId> = cands.iter().map(|c| c[0]).collect();
    loop {
        expand(hin, schema, tail, &tuple, share, alpha, scores);
        let mut k = cands.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < cands[k].len() {
                tuple[k] = cands[k][idx[k]];
                break;
            }
            idx[k] = 0;
            tuple[k] = cands[k][0];
        }
    }
}

/// Total mass per tuple after each expansion step; used to check that
/// every step conserves mass at α = 1.
pub fn bscse_layer_masses(
    hin: &Hin,
    schema: &NetworkSchema,
    structure: &MetaStructure,
    source: ObjectId,
    alpha: f64,
) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    expect_type(hin, source, structure.source_type())?;
    let mut frontier: BTreeMap<Vec<ObjectId>, f64> = BTreeMap::from([(vec![source], 1.0)]);
    let mut totals = vec![1.0];
    for next in &structure.layers()[1..] {
        let mut out: BTreeMap<Vec<ObjectId>, f64> = BTreeMap::new();
        for (sigma, mass) in &frontier {
            let tuples = crate::matrix::product::adjacent_tuples(hin, schema, sigma, next);
            if tuples.is_empty() {
                continue;
            }
            let share = mass / (tuples.len() as f64).powf(alpha);
            for t in tuples {
                *out.entry(t).or_default() += share;
            }
        }
        totals.push(out.values().sum());
        frontier = out;
    }
    Ok(totals)
}
