//! Cantor pairing, the single-index numbering used for pairs `(i, j)`.

/// `<i, j> = (i + j)(i + j + 1)/2 + j`.
pub fn cantor_pair(i: u64, j: u64) -> u64 {
    let s = i + j;
    s * (s + 1) / 2 + j
}

/// Inverse of [`cantor_pair`].
pub fn cantor_unpair(n: u64) -> (u64, u64) {
    // Largest s with s(s+1)/2 <= n.
    let mut s = (((8 * n as u128 + 1) as f64).sqrt() as u64).saturating_sub(1) / 2;
    while (s + 1) * (s + 2) / 2 <= n {
        s += 1;
    }
    while s * (s + 1) / 2 > n {
        s -= 1;
    }
    let j = n - s * (s + 1) / 2;
    (s - j, j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_pairs_in_order() {
        let got: Vec<_> = (0..6).map(cantor_unpair).collect();
        assert_eq!(got, vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]);
    }

    #[test]
    fn bijection_on_a_window() {
        for n in 0..5000 {
            let (i, j) = cantor_unpair(n);
            assert_eq!(cantor_pair(i, j), n);
        }
    }
}
