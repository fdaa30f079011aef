//! Relation matrices between consecutive layers and the commuting matrices
//! built from them.

use ndarray::Array2;
use sprs::{CsMat, TriMat};

use crate::error::{Error, Result};
use crate::hin::{Hin, TypeId};
use crate::matrix::product::{tuple_adjacent, LayerProduct};
use crate::schema::NetworkSchema;
use crate::structure::MetaStructure;

pub type SparseMatrix = CsMat<f64>;

/// A 0/1 (or normalized) matrix from one layer product to the next.
#[derive(Debug, Clone)]
pub struct RelationMatrix {
    pub rows: LayerProduct,
    pub cols: LayerProduct,
    pub matrix: SparseMatrix,
}

/// Pairwise construction: entry `(s, t)` is 1 iff the tuples are adjacent.
pub fn relation_matrix(
    hin: &Hin,
    schema: &NetworkSchema,
    rows: &LayerProduct,
    cols: &LayerProduct,
) -> RelationMatrix {
    let mut tri = TriMat::new((rows.len(), cols.len()));
    for (i, s) in rows.iter().enumerate() {
        for (j, t) in cols.iter().enumerate() {
            if tuple_adjacent(hin, schema, s, t) {
                tri.add_triplet(i, j, 1.0);
            }
        }
    }
    RelationMatrix {
        rows: rows.clone(),
        cols: cols.clone(),
        matrix: tri.to_csr(),
    }
}

/// Scales every nonzero row to sum 1. Zero rows stay zero.
pub fn row_normalize(m: &SparseMatrix) -> Result<SparseMatrix> {
    let mut out = m.to_csr();
    for (row, mut vec) in out.outer_iterator_mut().enumerate() {
        let mut sum = 0.0;
        for (col, &v) in vec.iter() {
            if v < 0.0 {
                return Err(Error::NegativeEntry { row, col, value: v });
            }
            sum += v;
        }
        if sum > 0.0 {
            for (_, v) in vec.iter_mut() {
                *v /= sum;
            }
        }
    }
    Ok(out)
}

/// Dense counterpart of [`row_normalize`].
pub fn row_normalize_dense(m: &Array2<f64>) -> Result<Array2<f64>> {
    let mut out = m.clone();
    for (row, mut r) in out.rows_mut().into_iter().enumerate() {
        if let Some((col, &value)) = r.iter().enumerate().find(|(_, v)| **v < 0.0) {
            return Err(Error::NegativeEntry { row, col, value });
        }
        let sum: f64 = r.sum();
        if sum > 0.0 {
            r /= sum;
        }
    }
    Ok(out)
}

/// Indices of columns holding at least one nonzero entry.
pub fn nonzero_columns(m: &SparseMatrix) -> Vec<usize> {
    let mut seen = vec![false; m.cols()];
    for (_, (_, c)) in m.iter() {
        seen[c] = true;
    }
    (0..m.cols()).filter(|&c| seen[c]).collect()
}

fn select_columns(m: &SparseMatrix, keep: &[usize]) -> SparseMatrix {
    let mut map = vec![usize::MAX; m.cols()];
    for (new, &old) in keep.iter().enumerate() {
        map[old] = new;
    }
    let mut tri = TriMat::new((m.rows(), keep.len()));
    for (&v, (r, c)) in m.iter() {
        if map[c] != usize::MAX {
            tri.add_triplet(r, map[c], v);
        }
    }
    tri.to_csr()
}

fn select_rows(m: &SparseMatrix, keep: &[usize]) -> SparseMatrix {
    let csr = m.to_csr();
    let mut tri = TriMat::new((keep.len(), m.cols()));
    for (new, &old) in keep.iter().enumerate() {
        if let Some(row) = csr.outer_view(old) {
            for (c, &v) in row.iter() {
                tri.add_triplet(new, c, v);
            }
        }
    }
    tri.to_csr()
}

/// Drops the all-zero columns of `prev` and the matching rows of `next`.
/// Returns the pruned pair and the surviving column indices.
pub fn prune_zero_columns_raw(
    prev: &SparseMatrix,
    next: &SparseMatrix,
) -> Result<(SparseMatrix, SparseMatrix, Vec<usize>)> {
    if prev.cols() != next.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} then {}x{}",
            prev.rows(),
            prev.cols(),
            next.rows(),
            next.cols()
        )));
    }
    let keep = nonzero_columns(prev);
    Ok((select_columns(prev, &keep), select_rows(next, &keep), keep))
}

/// [`prune_zero_columns_raw`] with the shared index set updated as well.
pub fn prune_zero_columns(
    prev: &RelationMatrix,
    next: &RelationMatrix,
) -> Result<(RelationMatrix, RelationMatrix)> {
    let (p, n, keep) = prune_zero_columns_raw(&prev.matrix, &next.matrix)?;
    let mut flags = vec![false; prev.cols.len()];
    for &k in &keep {
        flags[k] = true;
    }
    let mid = prev.cols.retain_indices(|i| flags[i]);
    Ok((
        RelationMatrix {
            rows: prev.rows.clone(),
            cols: mid.clone(),
            matrix: p,
        },
        RelationMatrix {
            rows: mid,
            cols: next.cols.clone(),
            matrix: n,
        },
    ))
}

/// Rows index objects of the source type, columns objects of the target
/// type, both by per-type ordinal.
#[derive(Debug, Clone)]
pub struct CommutingMatrix {
    pub row_type: TypeId,
    pub col_type: TypeId,
    pub matrix: SparseMatrix,
}

impl CommutingMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix.get(i, j).copied().unwrap_or(0.0)
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.matrix.cols()];
        if let Some(r) = self.matrix.outer_view(i) {
            for (c, &v) in r.iter() {
                out[c] = v;
            }
        }
        out
    }

    pub fn to_dense(&self) -> Array2<f64> {
        self.matrix.to_dense()
    }
}

pub fn identity(n: usize) -> SparseMatrix {
    CsMat::eye(n)
}

/// Chain product of the (optionally row-normalized) relation matrices of
/// `structure`, evaluated left to right. Intermediate tuples with no
/// incoming link are pruned before the next relation matrix is built.
pub fn commuting_matrix(
    hin: &Hin,
    schema: &NetworkSchema,
    structure: &MetaStructure,
    normalized: bool,
) -> Result<CommutingMatrix> {
    structure.validate(schema)?;
    let layers = structure.layers();
    let source = structure.source_type();
    if layers.len() == 1 {
        return Ok(CommutingMatrix {
            row_type: source,
            col_type: source,
            matrix: identity(hin.count_of(source)),
        });
    }
    let mut rows = LayerProduct::full(hin, &layers[0])?;
    let mut acc: Option<SparseMatrix> = None;
    for (i, next_types) in layers.iter().enumerate().skip(1) {
        let cols = LayerProduct::full(hin, next_types)?;
        let mut w = relation_matrix(hin, schema, &rows, &cols).matrix;
        if normalized {
            w = row_normalize(&w)?;
        }
        let mut product = match acc {
            None => w,
            Some(a) => &a * &w,
        };
        if i + 1 < layers.len() {
            let keep = nonzero_columns(&product);
            product = select_columns(&product, &keep);
            let mut flags = vec![false; cols.len()];
            for &k in &keep {
                flags[k] = true;
            }
            rows = cols.retain_indices(|j| flags[j]);
        }
        acc = Some(product);
    }
    Ok(CommutingMatrix {
        row_type: source,
        col_type: structure.target_type(),
        matrix: acc.unwrap(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::product::tests::toy;
    use crate::schema::extract_schema;
    use proptest::prelude::*;

    fn dense(rows: &[&[f64]]) -> SparseMatrix {
        let mut tri = TriMat::new((rows.len(), rows[0].len()));
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                if v != 0.0 {
                    tri.add_triplet(i, j, v);
                }
            }
        }
        tri.to_csr()
    }

    #[test]
    fn toy_meta_structure_counts() {
        let hin = toy();
        let s = extract_schema(&hin);
        let ms = MetaStructure::parse("Author,Paper,(Venue,Term),Paper,Author", &s).unwrap();
        let m = commuting_matrix(&hin, &s, &ms, false).unwrap().to_dense();
        let expected = [
            [6., 6., 0., 0., 0.],
            [6., 18., 14., 14., 8.],
            [0., 14., 20., 20., 11.],
            [0., 14., 20., 20., 11.],
            [0., 8., 11., 11., 9.],
        ];
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(m[[i, j]], expected[i][j], "({i},{j})");
            }
        }
    }

    #[test]
    fn toy_author_paper_relation() {
        let hin = toy();
        let s = extract_schema(&hin);
        let a = LayerProduct::full(&hin, &[hin.type_id("Author").unwrap()]).unwrap();
        let p = LayerProduct::full(&hin, &[hin.type_id("Paper").unwrap()]).unwrap();
        let w = relation_matrix(&hin, &s, &a, &p).matrix.to_dense();
        // NetClus HeteSim GenClus PathSelClus HeProjI PathSim
        let expected = [
            [0., 1., 0., 1., 0., 0.],
            [0., 1., 0., 1., 1., 1.],
            [1., 0., 0., 0., 1., 1.],
            [1., 0., 0., 0., 1., 1.],
            [0., 0., 1., 0., 1., 0.],
        ];
        for i in 0..5 {
            for j in 0..6 {
                assert_eq!(w[[i, j]], expected[i][j]);
            }
        }
    }

    #[test]
    fn reverse_structure_gives_transpose() {
        let hin = toy();
        let s = extract_schema(&hin);
        let fwd = MetaStructure::parse("Author,Paper,Venue", &s).unwrap();
        let a = commuting_matrix(&hin, &s, &fwd, false).unwrap().to_dense();
        let b = commuting_matrix(&hin, &s, &fwd.reverse(), false).unwrap().to_dense();
        assert_eq!(a.t(), b);
    }

    #[test]
    fn zero_length_structure_is_identity() {
        let hin = toy();
        let s = extract_schema(&hin);
        let ms = MetaStructure::parse("Author", &s).unwrap();
        let m = commuting_matrix(&hin, &s, &ms, true).unwrap();
        assert_eq!(m.to_dense(), Array2::eye(5));
    }

    #[test]
    fn disconnected_layers_give_zero_matrix() {
        let mut b = crate::hin::HinBuilder::new();
        b.add_object("a", "A").unwrap();
        b.add_object("b", "B").unwrap();
        let hin = b.build();
        let s = NetworkSchema::from_pairs(&["A", "B"], &[(0, 1)]);
        let ra = LayerProduct::full(&hin, &[TypeId(0)]).unwrap();
        let rb = LayerProduct::full(&hin, &[TypeId(1)]).unwrap();
        assert_eq!(relation_matrix(&hin, &s, &ra, &rb).matrix.nnz(), 0);
    }

    #[test]
    fn normalize_examples() {
        let m = dense(&[&[2., 2., 0.], &[0., 0., 0.], &[0., 0., 3.]]);
        let n = row_normalize(&m).unwrap().to_dense();
        assert_eq!(n.row(0).to_vec(), [0.5, 0.5, 0.0]);
        assert_eq!(n.row(1).to_vec(), [0.0, 0.0, 0.0]);
        assert_eq!(n.row(2).to_vec(), [0.0, 0.0, 1.0]);
        let eye = identity(4);
        assert_eq!(row_normalize(&eye).unwrap(), eye);
        let neg = dense(&[&[1., -1.]]);
        assert!(matches!(
            row_normalize(&neg),
            Err(Error::NegativeEntry { row: 0, col: 1, .. })
        ));
    }

    #[test]
    fn prune_without_zero_columns_is_identity() {
        let a = dense(&[&[1., 2.], &[0., 1.]]);
        let b = dense(&[&[1., 0., 1.], &[0., 1., 0.]]);
        let (a2, b2, keep) = prune_zero_columns_raw(&a, &b).unwrap();
        assert_eq!((a2, b2, keep), (a, b, vec![0, 1]));
    }

    #[test]
    fn prune_drops_matching_row() {
        let a = dense(&[&[1., 0., 1.], &[1., 0., 0.]]);
        let b = dense(&[&[1., 0.], &[7., 7.], &[0., 1.]]);
        let (a2, b2, keep) = prune_zero_columns_raw(&a, &b).unwrap();
        assert_eq!(keep, [0, 2]);
        assert_eq!(b2.to_dense(), dense(&[&[1., 0.], &[0., 1.]]).to_dense());
        assert_eq!((&a2 * &b2).to_dense(), (&a * &b).to_dense());
        assert!(prune_zero_columns_raw(&a, &a).is_err());
    }

    fn arb_matrix(r: usize, c: usize) -> impl Strategy<Value = SparseMatrix> {
        prop::collection::vec(prop_oneof![3 => Just(0.0), 1 => 1.0f64..5.0], r * c).prop_map(
            move |vals| {
                let mut tri = TriMat::new((r, c));
                for (k, v) in vals.into_iter().enumerate() {
                    if v != 0.0 {
                        tri.add_triplet(k / c, k % c, v);
                    }
                }
                tri.to_csr()
            },
        )
    }

    proptest! {
        #[test]
        fn prune_preserves_products(
            (a, b) in (1usize..6, 1usize..6, 1usize..6)
                .prop_flat_map(|(r, m, c)| (arb_matrix(r, m), arb_matrix(m, c)))
        ) {
            let (a2, b2, _) = prune_zero_columns_raw(&a, &b).unwrap();
            prop_assert_eq!((&a2 * &b2).to_dense(), (&a * &b).to_dense());
        }

        #[test]
        fn normalize_is_idempotent(m in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| arb_matrix(r, c))) {
            let once = row_normalize(&m).unwrap();
            let twice = row_normalize(&once).unwrap();
            for (x, y) in once.to_dense().iter().zip(twice.to_dense().iter()) {
                prop_assert!((x - y).abs() <= 1e-15);
            }
            for r in once.to_dense().rows() {
                let s = r.sum();
                prop_assert!(s == 0.0 || (s - 1.0).abs() <= 1e-12);
            }
        }
    }
}
