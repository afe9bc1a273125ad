//! Dense square boolean matrix packed into `u64` words.

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub(crate) fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    #[inline]
    pub(crate) fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.words + col / 64] >> (col % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, row: usize, col: usize) {
        self.bits[row * self.words + col / 64] |= 1 << (col % 64);
    }

    pub(crate) fn row(&self, row: usize) -> &[u64] {
        &self.bits[row * self.words..(row + 1) * self.words]
    }

    /// `row(dst) |= row(src)`.
    pub(crate) fn or_row_into(&mut self, src: usize, dst: usize) {
        if src == dst {
            return;
        }
        for w in 0..self.words {
            let v = self.bits[src * self.words + w];
            self.bits[dst * self.words + w] |= v;
        }
    }

    /// `row(dst) |= other.row(src)`.
    pub(crate) fn or_row_from(&mut self, dst: usize, other: &BitMatrix, src: usize) {
        let words = self.words;
        for (d, s) in self.bits[dst * words..(dst + 1) * words]
            .iter_mut()
            .zip(other.row(src))
        {
            *d |= s;
        }
    }

    pub(crate) fn row_ones(&self, row: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.n;
        self.row(row)
            .iter()
            .enumerate()
            .flat_map(move |(w, &word)| {
                let mut word = word;
                std::iter::from_fn(move || {
                    if word == 0 {
                        return None;
                    }
                    let b = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(w * 64 + b)
                })
                .filter(move |&c| c < n)
            })
    }

    pub(crate) fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::new(self.n);
        for r in 0..self.n {
            for c in self.row_ones(r).collect::<Vec<_>>() {
                t.set(c, r);
            }
        }
        t
    }
}
