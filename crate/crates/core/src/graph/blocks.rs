use serde::Serialize;

use super::{Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    /// Vertex sets of the blocks, each sorted; blocks ordered lexicographically.
    pub blocks: Vec<Vec<usize>>,
    pub articulation_points: Vec<usize>,
}

impl BlockDecomposition {
    /// Indices of the blocks containing `v`.
    pub fn blocks_of(&self, v: usize) -> Vec<usize> {
        self.blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| b.binary_search(&v).is_ok())
            .map(|(i, _)| i)
            .collect()
    }
}

/// Hopcroft–Tarjan biconnected components, iterative.
pub fn block_decomposition(h: &Graph) -> Result<BlockDecomposition, GraphError> {
    if !h.is_connected() {
        return Err(GraphError::DisconnectedInput);
    }
    let n = h.vertex_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut is_cut = vec![false; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut timer = 0;

    for root in 0..n {
        if disc[root] != usize::MAX || h.degree(root) == 0 {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        let mut root_children = 0;
        // (vertex, parent, next neighbor index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(top) = stack.last_mut() {
            let (v, parent) = (top.0, top.1);
            if top.2 < h.degree(v) {
                let w = h.neighbors(v)[top.2];
                top.2 += 1;
                if disc[w] == usize::MAX {
                    edge_stack.push((v, w));
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, v, 0));
                } else if w != parent && disc[w] < disc[v] {
                    edge_stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
                continue;
            }
            stack.pop();
            if parent == usize::MAX {
                continue;
            }
            low[parent] = low[parent].min(low[v]);
            if low[v] >= disc[parent] {
                if parent != root {
                    is_cut[parent] = true;
                }
                let mut block = Vec::new();
                while let Some((a, b)) = edge_stack.pop() {
                    block.push(a);
                    block.push(b);
                    if (a, b) == (parent, v) {
                        break;
                    }
                }
                block.sort_unstable();
                block.dedup();
                blocks.push(block);
            }
        }
        if root_children > 1 {
            is_cut[root] = true;
        }
    }
    blocks.sort();
    Ok(BlockDecomposition {
        blocks,
        articulation_points: (0..n).filter(|&v| is_cut[v]).collect(),
    })
}

/// Connected, at least two vertices, and no cut vertex. A single edge counts.
pub fn is_two_connected(h: &Graph) -> bool {
    h.vertex_count() >= 2
        && h.is_connected()
        && block_decomposition(h)
            .map(|d| d.articulation_points.is_empty())
            .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_is_one_block() {
        let d = block_decomposition(&Graph::complete(4)).unwrap();
        assert_eq!(d.blocks, vec![vec![0, 1, 2, 3]]);
        assert!(d.articulation_points.is_empty());
    }

    #[test]
    fn bowtie() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        let d = block_decomposition(&g).unwrap();
        assert_eq!(d.blocks, vec![vec![0, 1, 2], vec![2, 3, 4]]);
        assert_eq!(d.articulation_points, vec![2]);
        assert_eq!(d.blocks_of(2), vec![0, 1]);
    }

    #[test]
    fn path_blocks_are_edges() {
        let d = block_decomposition(&Graph::path(4)).unwrap();
        assert_eq!(d.blocks, vec![vec![0, 1], vec![1, 2], vec![2, 3]]);
        assert_eq!(d.articulation_points, vec![1, 2]);
    }

    #[test]
    fn disconnected_rejected() {
        assert_eq!(
            block_decomposition(&Graph::empty(2)),
            Err(GraphError::DisconnectedInput)
        );
        assert_eq!(block_decomposition(&Graph::empty(1)).unwrap().blocks.len(), 0);
    }

    #[test]
    fn two_connectivity() {
        assert!(is_two_connected(&Graph::cycle(5)));
        assert!(is_two_connected(&Graph::path(2)));
        assert!(!is_two_connected(&Graph::path(3)));
        assert!(!is_two_connected(&Graph::empty(1)));
    }
}
