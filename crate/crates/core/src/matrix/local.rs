//! Per-source evaluation of the SMS commuting matrix.
//!
//! For every depth `h < 2h0` the term `Ā_h Ā_hᵀ` is exact and independent
//! of λ and of the source, so it is computed once for all sources. The
//! recurrent term is localized: starting from the single source object only
//! tuples reachable along the structure are kept, the layer `h0` tuple set is
//! frozen and the recurrent block `R = W Wᵀ` is built over it.

use ndarray::{Array2, Axis};
use rayon::prelude::*;
use sprs::TriMat;

use crate::error::{Error, Result};
use crate::hin::{Hin, ObjectId, TypeId};
use crate::matrix::lu::Lu;
use crate::matrix::product::{adjacent_tuples, LayerProduct};
use crate::matrix::relation::{row_normalize, row_normalize_dense, SparseMatrix};
use crate::schema::NetworkSchema;
use crate::sms::StratifiedMetaStructure;

/// Decaying factor and per-depth weights `w_0 .. w_{h0-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmsWeights {
    lambda: f64,
    w: Vec<f64>,
}

impl SmsWeights {
    pub fn new(lambda: f64, w: Vec<f64>) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda must lie strictly inside (0, 1), got {lambda}"
            )));
        }
        if w.is_empty() {
            return Err(Error::InvalidWeights("no weights given".into()));
        }
        if let Some(bad) = w.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidWeights(format!("weight {bad} outside [0, 1]")));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidWeights(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self { lambda, w })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    fn check_len(&self, h0: usize) -> Result<()> {
        if self.w.len() != h0 {
            return Err(Error::InvalidWeights(format!(
                "expected {h0} weights (one per depth 2, 4, .., {}), got {}",
                2 * h0,
                self.w.len()
            )));
        }
        Ok(())
    }

    /// Bit-exact key for memoization.
    pub fn key(&self) -> Vec<u64> {
        std::iter::once(self.lambda.to_bits())
            .chain(self.w.iter().map(|v| v.to_bits()))
            .collect()
    }
}

/// Row-normalized product of a chain of layers, enumerated from every object
/// of the first (single-type) layer. Only reachable tuples are indexed.
#[derive(Debug, Clone)]
pub struct HalfChain {
    pub layers: Vec<LayerProduct>,
    /// rows: objects of the root type by ordinal; cols: `layers.last()`
    pub matrix: SparseMatrix,
}

fn step(
    hin: &Hin,
    schema: &NetworkSchema,
    from: &LayerProduct,
    to_types: &[TypeId],
) -> (LayerProduct, SparseMatrix) {
    let adj: Vec<Vec<Vec<ObjectId>>> = from
        .iter()
        .map(|t| adjacent_tuples(hin, schema, t, to_types))
        .collect();
    let next = LayerProduct::from_tuples(to_types.to_vec(), adj.iter().flatten().cloned());
    let mut tri = TriMat::new((from.len(), next.len()));
    for (i, list) in adj.iter().enumerate() {
        for t in list {
            tri.add_triplet(i, next.position(t).unwrap(), 1.0);
        }
    }
    (next, tri.to_csr())
}

pub fn half_chain(hin: &Hin, schema: &NetworkSchema, layers: &[Vec<TypeId>]) -> Result<HalfChain> {
    let root = LayerProduct::full(hin, &layers[0])?;
    let mut products = vec![root];
    let mut acc: Option<SparseMatrix> = None;
    for types in &layers[1..] {
        let (next, w) = step(hin, schema, products.last().unwrap(), types);
        let w = row_normalize(&w)?;
        acc = Some(match acc {
            None => w,
            Some(a) => &a * &w,
        });
        products.push(next);
    }
    let n = products[0].len();
    Ok(HalfChain {
        layers: products,
        matrix: acc.unwrap_or_else(|| SparseMatrix::eye(n)),
    })
}

/// The localized left half of the deepest basic structure for one source,
/// plus the recurrent block over the frozen layer-`h0` tuples.
#[derive(Debug, Clone)]
pub struct LocalChain {
    /// `C_{L_0} ..= C_{L_{h0}}` restricted by locality, then `C_{L_{h0+1}}`.
    pub layers: Vec<LayerProduct>,
    /// 0/1 relation matrices between consecutive entries of `layers`.
    pub relations: Vec<SparseMatrix>,
    /// Normalized left factor over `C_{L_{h0}}`.
    pub left: Vec<f64>,
    /// Row-normalized `W Wᵀ` over `C_{L_{h0}}`.
    pub r_bar: Array2<f64>,
}

pub fn localized_chain(
    hin: &Hin,
    schema: &NetworkSchema,
    sms: &StratifiedMetaStructure,
    source: ObjectId,
) -> Result<LocalChain> {
    check_source(hin, sms, source)?;
    let h0 = sms.h0();
    let structure = sms.structure_layers(2 * h0)?;
    let mut layers = vec![LayerProduct::from_tuples(vec![sms.source_type()], [vec![source]])];
    let mut relations = Vec::new();
    let mut left = vec![1.0];
    for types in &structure[1..=h0] {
        let (next, w) = step(hin, schema, layers.last().unwrap(), types);
        let wn = row_normalize(&w)?;
        let mut v = vec![0.0; next.len()];
        for (&x, (r, c)) in wn.iter() {
            v[c] += left[r] * x;
        }
        left = v;
        relations.push(w);
        layers.push(next);
    }
    let frozen = layers.last().unwrap();
    let (_, rec_types) = sms.recurrent();
    let n = frozen.len();
    let r = if rec_types.is_empty() {
        layers.push(LayerProduct::from_tuples(Vec::new(), []));
        relations.push(SparseMatrix::zero((n, 0)));
        Array2::zeros((n, n))
    } else {
        let (next, w) = step(hin, schema, frozen, rec_types);
        let r = (&w * &w.transpose_view().to_csr()).to_dense();
        layers.push(next);
        relations.push(w);
        r
    };
    Ok(LocalChain {
        layers,
        relations,
        left,
        r_bar: row_normalize_dense(&r)?,
    })
}

fn check_source(hin: &Hin, sms: &StratifiedMetaStructure, source: ObjectId) -> Result<()> {
    if source.index() >= hin.num_objects() {
        return Err(Error::UnknownObject(format!("#{}", source.0)));
    }
    let found = hin.type_of(source);
    if found != sms.source_type() {
        return Err(Error::ObjectTypeMismatch {
            object: hin.object_name(source).to_string(),
            expected: hin.type_name(sms.source_type()).to_string(),
            found: hin.type_name(found).to_string(),
        });
    }
    Ok(())
}

/// `x = ℓ (I - λR̄)⁻¹`, computed as the solution of `(I - λR̄)ᵀ x = ℓᵀ`.
pub fn recurrent_solve(left: &[f64], r_bar: &Array2<f64>, lambda: f64) -> Result<Vec<f64>> {
    let n = left.len();
    let a = Array2::eye(n) - r_bar * lambda;
    Lu::new(&a)?.solve_transpose(left)
}

/// Precomputed λ-independent parts of the SMS commuting matrix for one
/// network and source type.
#[derive(Debug)]
pub struct SmsPipeline<'a> {
    hin: &'a Hin,
    schema: &'a NetworkSchema,
    sms: &'a StratifiedMetaStructure,
    /// `Ā_h Ā_hᵀ` for `h = 2, 4, .., 2h0 - 2`; `None` without a target at `h`.
    basic: Vec<Option<SparseMatrix>>,
    /// `Ā_{2h0}` transposed (middle tuples × targets) and its tuple index.
    right: Option<(LayerProduct, SparseMatrix)>,
}

impl<'a> SmsPipeline<'a> {
    pub fn new(hin: &'a Hin, schema: &'a NetworkSchema, sms: &'a StratifiedMetaStructure) -> Result<Self> {
        let h0 = sms.h0();
        let half = |h: usize| -> Result<Option<HalfChain>> {
            if !sms.target_at(h) {
                return Ok(None);
            }
            let layers = sms.structure_layers(h)?;
            half_chain(hin, schema, &layers[..=h / 2]).map(Some)
        };
        let mut basic = Vec::with_capacity(h0.saturating_sub(1));
        for k in 0..h0.saturating_sub(1) {
            basic.push(half(2 * k + 2)?.map(|c| {
                let t = c.matrix.transpose_view().to_csr();
                &c.matrix * &t
            }));
        }
        let right = half(2 * h0)?.map(|c| {
            let t = c.matrix.transpose_view().to_csr();
            (c.layers.last().unwrap().clone(), t)
        });
        Ok(Self {
            hin,
            schema,
            sms,
            basic,
            right,
        })
    }

    pub fn hin(&self) -> &'a Hin {
        self.hin
    }

    pub fn sms(&self) -> &'a StratifiedMetaStructure {
        self.sms
    }

    pub fn num_objects(&self) -> usize {
        self.hin.count_of(self.sms.source_type())
    }

    pub fn sources(&self) -> &'a [ObjectId] {
        self.hin.objects_of(self.sms.source_type())
    }

    /// Row `source` of `Ā_h Ā_hᵀ` for `h = 2k + 2 < 2h0`.
    pub fn basic_row(&self, k: usize, source: ObjectId) -> Vec<f64> {
        let mut out = vec![0.0; self.num_objects()];
        if let Some(Some(g)) = self.basic.get(k) {
            if let Some(r) = g.outer_view(self.hin.ordinal(source)) {
                for (c, &v) in r.iter() {
                    out[c] = v;
                }
            }
        }
        out
    }

    /// `(1 - λ) ℓ (I - λR̄)⁻¹ Ā^r` for one source.
    pub fn recurrent_row(&self, source: ObjectId, lambda: f64) -> Result<Vec<f64>> {
        check_source(self.hin, self.sms, source)?;
        let mut out = vec![0.0; self.num_objects()];
        let Some((middle, right_t)) = &self.right else {
            return Ok(out);
        };
        let chain = localized_chain(self.hin, self.schema, self.sms, source)?;
        let x = recurrent_solve(&chain.left, &chain.r_bar, lambda)?;
        let frozen = &chain.layers[self.sms.h0()];
        for (i, tuple) in frozen.iter().enumerate() {
            if x[i] == 0.0 {
                continue;
            }
            let g = middle.position(tuple).ok_or_else(|| {
                Error::DimensionMismatch("local tuple missing from the global chain".into())
            })?;
            if let Some(r) = right_t.outer_view(g) {
                for (c, &v) in r.iter() {
                    out[c] += (1.0 - lambda) * x[i] * v;
                }
            }
        }
        Ok(out)
    }

    /// One row of the weighted SMS commuting matrix.
    pub fn row(&self, source: ObjectId, weights: &SmsWeights) -> Result<Vec<f64>> {
        let h0 = self.sms.h0();
        weights.check_len(h0)?;
        let w = weights.weights();
        let mut out = self.recurrent_row(source, weights.lambda())?;
        for v in &mut out {
            *v *= w[h0 - 1];
        }
        for (k, &wk) in w.iter().enumerate().take(h0 - 1) {
            for (o, b) in out.iter_mut().zip(self.basic_row(k, source)) {
                *o += wk * b;
            }
        }
        Ok(out)
    }

    /// Dense `Σ_k w_k Ā Āᵀ` parts, one matrix per depth below `2h0`.
    pub fn basic_matrices(&self) -> Vec<Array2<f64>> {
        let n = self.num_objects();
        self.basic
            .iter()
            .map(|g| g.as_ref().map_or_else(|| Array2::zeros((n, n)), |g| g.to_dense()))
            .collect()
    }

    /// Recurrent term for every source, rows by ordinal. Sources are
    /// processed in parallel on the current rayon pool.
    pub fn recurrent_matrix(&self, lambda: f64) -> Result<Array2<f64>> {
        let rows: Vec<Vec<f64>> = self
            .sources()
            .par_iter()
            .map(|&s| self.recurrent_row(s, lambda))
            .collect::<Result<_>>()?;
        let n = self.num_objects();
        let mut m = Array2::zeros((n, n));
        for (i, r) in rows.into_iter().enumerate() {
            m.row_mut(i).assign(&ndarray::Array1::from(r));
        }
        Ok(m)
    }

    /// The full weighted matrix.
    pub fn matrix(&self, weights: &SmsWeights) -> Result<Array2<f64>> {
        let h0 = self.sms.h0();
        weights.check_len(h0)?;
        Ok(combine(
            &self.basic_matrices(),
            &self.recurrent_matrix(weights.lambda())?,
            weights.weights(),
        ))
    }
}

/// `Σ_k w_k B_k + w_{h0-1} Rec`.
pub fn combine(basic: &[Array2<f64>], recurrent: &Array2<f64>, w: &[f64]) -> Array2<f64> {
    let mut m = recurrent * w[w.len() - 1];
    for (b, &wk) in basic.iter().zip(w) {
        m.scaled_add(wk, b);
    }
    m
}

/// Row of the SMS commuting matrix for `source`.
pub fn sms_commuting_row(
    hin: &Hin,
    schema: &NetworkSchema,
    sms: &StratifiedMetaStructure,
    source: ObjectId,
    weights: &SmsWeights,
) -> Result<Vec<f64>> {
    SmsPipeline::new(hin, schema, sms)?.row(source, weights)
}

/// Diagonal of a square matrix.
pub fn diagonal(m: &Array2<f64>) -> Vec<f64> {
    m.diag().to_vec()
}

/// Sum of every row, handy for mass checks.
pub fn row_sums(m: &Array2<f64>) -> Vec<f64> {
    m.sum_axis(Axis(1)).to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::product::tests::toy;
    use crate::matrix::series::truncated_series;
    use crate::schema::extract_schema;
    use crate::sms::build_sms;

    #[test]
    fn weights_validation() {
        assert!(SmsWeights::new(0.5, vec![0.3, 0.7]).is_ok());
        assert!(SmsWeights::new(1.0, vec![1.0]).is_err());
        assert!(SmsWeights::new(0.0, vec![1.0]).is_err());
        assert!(SmsWeights::new(0.5, vec![0.5, 0.6]).is_err());
        assert!(SmsWeights::new(0.5, vec![-0.5, 1.5]).is_err());
        assert!(SmsWeights::new(0.5, vec![]).is_err());
    }

    #[test]
    fn sun_local_chain_keeps_genclus() {
        let hin = toy();
        let s = extract_schema(&hin);
        let sms = build_sms(&s, hin.type_id("Author").unwrap()).unwrap();
        let sun = hin.object_id("Yizhou Sun").unwrap();
        let chain = localized_chain(&hin, &s, &sms, sun).unwrap();
        let labels = |k: usize| -> Vec<String> {
            (0..chain.layers[k].len())
                .map(|i| chain.layers[k].label(&hin, i))
                .collect()
        };
        assert_eq!(labels(1), ["NetClus", "HeProjI", "PathSim"]);
        assert!(labels(2).contains(&"(VLDB,HIN)".to_string()));
        assert!(labels(3).contains(&"GenClus".to_string()));
        assert!(!labels(1).contains(&"GenClus".to_string()));
        assert_eq!(chain.r_bar.nrows(), chain.layers[2].len());
        let total: f64 = chain.left.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wrong_source_type_is_rejected() {
        let hin = toy();
        let s = extract_schema(&hin);
        let sms = build_sms(&s, hin.type_id("Author").unwrap()).unwrap();
        let paper = hin.object_id("HeteSim").unwrap();
        assert!(matches!(
            localized_chain(&hin, &s, &sms, paper),
            Err(Error::ObjectTypeMismatch { .. })
        ));
    }

    #[test]
    fn closed_form_matches_series() {
        let hin = toy();
        let s = extract_schema(&hin);
        let sms = build_sms(&s, hin.type_id("Author").unwrap()).unwrap();
        for &src in hin.objects_of(sms.source_type()) {
            let chain = localized_chain(&hin, &s, &sms, src).unwrap();
            for lambda in [0.1, 0.5, 0.9] {
                let x = recurrent_solve(&chain.left, &chain.r_bar, lambda).unwrap();
                let n = x.len();
                let l = Array2::from_shape_vec((1, n), chain.left.clone()).unwrap();
                let series = truncated_series(&l, &chain.r_bar, &Array2::eye(n), lambda, 200);
                for i in 0..n {
                    assert!(((1.0 - lambda) * x[i] - series[[0, i]]).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn isolated_source_scores_zero() {
        let mut b = crate::hin::HinBuilder::new();
        let a = b.add_object("a", "A").unwrap();
        let lonely = b.add_object("z", "A").unwrap();
        let p = b.add_object("p", "P").unwrap();
        let v = b.add_object("v", "V").unwrap();
        b.add_link(a, p, None);
        b.add_link(p, v, None);
        let hin = b.build();
        let s = extract_schema(&hin);
        let sms = build_sms(&s, TypeId(0)).unwrap();
        let w = SmsWeights::new(0.5, vec![0.5, 0.5]).unwrap();
        assert_eq!(sms_commuting_row(&hin, &s, &sms, lonely, &w).unwrap(), [0.0, 0.0]);
        let row = sms_commuting_row(&hin, &s, &sms, a, &w).unwrap();
        assert!(row[0] > 0.0 && row[1] == 0.0);
    }

    #[test]
    fn weight_count_must_match_h0() {
        let hin = toy();
        let s = extract_schema(&hin);
        let sms = build_sms(&s, hin.type_id("Author").unwrap()).unwrap();
        let w = SmsWeights::new(0.5, vec![1.0]).unwrap();
        let src = hin.object_id("Chuan Shi").unwrap();
        assert!(matches!(
            sms_commuting_row(&hin, &s, &sms, src, &w),
            Err(Error::InvalidWeights(_))
        ));
    }
}
