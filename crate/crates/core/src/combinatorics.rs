//! Set partitions and integer compositions.

/// Iterates over all partitions of `{0, .., n-1}` into non-empty blocks.
///
/// Partitions are produced as restricted growth strings in lexicographic
/// order: `a[0] = 0` and `a[i] <= 1 + max(a[..i])`. Each item lists the blocks,
/// with blocks ordered by their smallest element and elements ascending.
pub struct SetPartitions {
    rgs: Vec<usize>,
    // maxima[i] = max(rgs[..i]), with maxima[0] = 0
    maxima: Vec<usize>,
    done: bool,
}

impl SetPartitions {
    pub fn new(n: usize) -> Self {
        SetPartitions {
            rgs: vec![0; n],
            maxima: vec![0; n],
            done: false,
        }
    }

    fn blocks(&self) -> Vec<Vec<usize>> {
        let count = self.rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); count];
        for (i, &b) in self.rgs.iter().enumerate() {
            blocks[b].push(i);
        }
        blocks
    }

    fn advance(&mut self) -> bool {
        let n = self.rgs.len();
        for i in (1..n).rev() {
            if self.rgs[i] <= self.maxima[i] {
                self.rgs[i] += 1;
                let m = self.maxima[i].max(self.rgs[i]);
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.maxima[j] = m;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for SetPartitions {
    type Item = Vec<Vec<usize>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let out = self.blocks();
        if !self.advance() {
            self.done = true;
        }
        Some(out)
    }
}

/// Bell number `B(n)`, via the Bell triangle. Saturates at `u128::MAX`.
pub fn bell(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &r in &row {
            let v = next.last().unwrap().saturating_add(r);
            next.push(v);
        }
        row = next;
    }
    row[0]
}

/// All ordered compositions of `n` into exactly `k` positive parts.
pub fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            if n == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if n < k {
            return;
        }
        for first in 1..=n - (k - 1) {
            prefix.push(first);
            go(n - first, k - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, &mut Vec::new(), &mut out);
    out
}
