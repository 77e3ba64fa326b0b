use crate::geom::Aabb;

const LEAF_SIZE: usize = 4;

#[derive(Debug, Clone)]
enum Node {
    Leaf { bounds: Aabb, start: usize, end: usize },
    Inner { bounds: Aabb, left: usize, right: usize },
}

impl Node {
    fn bounds(&self) -> &Aabb {
        match self {
            Node::Leaf { bounds, .. } | Node::Inner { bounds, .. } => bounds,
        }
    }
}

/// Static bounding-volume hierarchy over a slice of boxes, built by median
/// split of box centers along the longest axis.
#[derive(Debug, Clone)]
pub struct Bvh {
    nodes: Vec<Node>,
    items: Vec<usize>,
    boxes: Vec<Aabb>,
}

impl Bvh {
    pub fn build(boxes: &[Aabb]) -> Bvh {
        let mut bvh = Bvh {
            nodes: Vec::new(),
            items: (0..boxes.len()).collect(),
            boxes: boxes.to_vec(),
        };
        if !boxes.is_empty() {
            bvh.build_range(0, boxes.len());
        }
        bvh
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    fn build_range(&mut self, start: usize, end: usize) -> usize {
        let bounds = self.items[start..end]
            .iter()
            .fold(Aabb::empty(), |acc, &i| acc.union(&self.boxes[i]));
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { bounds, start, end });
            return self.nodes.len() - 1;
        }
        let centers = Aabb::from_points(
            self.items[start..end]
                .iter()
                .map(|&i| self.boxes[i].center())
                .collect::<Vec<_>>()
                .iter(),
        );
        let axis = centers.longest_axis();
        let mid = (start + end) / 2;
        let boxes = &self.boxes;
        self.items[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            boxes[a].center()[axis]
                .total_cmp(&boxes[b].center()[axis])
                .then(a.cmp(&b))
        });
        let slot = self.nodes.len();
        self.nodes.push(Node::Leaf { bounds, start, end });
        let left = self.build_range(start, mid);
        let right = self.build_range(mid, end);
        self.nodes[slot] = Node::Inner { bounds, left, right };
        slot
    }

    /// Indices of all boxes overlapping `query`, in increasing order.
    pub fn query(&self, query: &Aabb) -> Vec<usize> {
        let mut out = Vec::new();
        if self.nodes.is_empty() {
            return out;
        }
        let mut stack = vec![0usize];
        while let Some(n) = stack.pop() {
            let node = &self.nodes[n];
            if !node.bounds().overlaps(query) {
                continue;
            }
            match *node {
                Node::Leaf { start, end, .. } => out.extend(
                    self.items[start..end]
                        .iter()
                        .copied()
                        .filter(|&i| self.boxes[i].overlaps(query)),
                ),
                Node::Inner { left, right, .. } => {
                    stack.push(left);
                    stack.push(right);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec3;

    #[test]
    fn query_matches_linear_scan() {
        let boxes: Vec<Aabb> = (0..200)
            .map(|i| {
                let x = (i as f64 * 0.37).sin() * 5.0;
                let y = (i as f64 * 0.11).cos() * 5.0;
                let z = (i % 7) as f64;
                Aabb::from_points(&[Vec3::new(x, y, z), Vec3::new(x + 0.4, y + 0.3, z + 0.2)])
            })
            .collect();
        let bvh = Bvh::build(&boxes);
        for q in boxes.iter().step_by(13) {
            let q = q.inflate(0.5);
            let expected: Vec<usize> = (0..boxes.len()).filter(|&i| boxes[i].overlaps(&q)).collect();
            assert_eq!(bvh.query(&q), expected);
        }
    }

    #[test]
    fn empty_tree() {
        let bvh = Bvh::build(&[]);
        assert!(bvh.is_empty());
        assert!(bvh.query(&Aabb::from_points(&[Vec3::zeros()])).is_empty());
    }
}
