//! Recover row and column blocks of a shuffled binary matrix.

use clusterpursuit::pipeline::partition_accuracy;
use clusterpursuit::pursuit::{cocluster, CoclusterConfig};
use clusterpursuit::random_graphs::{gen_block_matrix, BlockMatrixParams};

fn main() -> clusterpursuit::Result<()> {
    let params = BlockMatrixParams { rows: 600, cols: 300, k: 6, p: 0.5, q: 0.03 };
    let sample = gen_block_matrix(&params, 8, true)?;
    println!("{:?} matrix with {} nonzeros", sample.matrix.shape(), sample.matrix.nnz());
    let res = cocluster(&sample.matrix, &CoclusterConfig::new(100, 6))?;
    println!("row accuracy {}", partition_accuracy(&sample.row_partition, &res.rows)?.accuracy);
    println!("col accuracy {}", partition_accuracy(&sample.col_partition, &res.cols)?.accuracy);
    println!("column block sizes {:?}", res.cols.sizes());
    Ok(())
}
