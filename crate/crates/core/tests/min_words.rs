//! Minimum-weight words at n = 2, grouped by form rank and by the histogram
//! of vanishing lines per point. Two groups show up: rank 2 (radical of
//! dimension 3) and rank 4 (radical a single point).
//! Rank is invariant under the orthogonal group, so these are distinct orbits.

use std::collections::BTreeMap;

use polar_grassmann::code::{form_from_message, PolarCode};
use polar_grassmann::FieldCtx;

type Profile = (usize, Vec<usize>);

fn profiles(q: u32) -> (usize, BTreeMap<Profile, usize>) {
    let f = FieldCtx::with_order(q).unwrap();
    let code = PolarCode::standard(&f, 2).unwrap();
    let d = code.params().d_claimed as usize;
    let geom = code.geometry();
    let space = code.message_space();
    let mut words = 0;
    let mut seen = BTreeMap::new();
    for i in 0..space.total() {
        let m = space.message(i);
        let w = code.codeword_of_message(&m).unwrap();
        if w.weight != d {
            assert!(w.weight > d);
            continue;
        }
        words += 1;
        let rank = form_from_message(&f, 5, &m).unwrap().rank(&f);
        let mut hist = vec![0usize; f.q() as usize + 2];
        for p in 0..geom.points().len() {
            let zeros = geom
                .line_indices_through(p)
                .iter()
                .filter(|&&l| w.values[l as usize].is_zero())
                .count();
            hist[zeros] += 1;
        }
        *seen.entry((rank, hist)).or_insert(0) += 1;
    }
    (words, seen)
}

#[test]
fn minimum_words_split_by_rank() {
    let (words, seen) = profiles(3);
    let groups: Vec<_> = seen.into_iter().collect();
    assert_eq!(
        groups.iter().map(|(p, _)| p.clone()).collect::<Vec<_>>(),
        [(2, vec![0, 6, 27, 0, 7]), (4, vec![0, 8, 24, 0, 8])]
    );
    assert_eq!(groups.iter().map(|g| g.1).sum::<usize>(), words);
}

#[test]
fn minimum_words_split_by_rank_at_five() {
    let (_, seen) = profiles(5);
    let keys: Vec<_> = seen.into_keys().collect();
    assert_eq!(
        keys,
        [
            (2, vec![0, 20, 125, 0, 0, 0, 11]),
            (4, vec![0, 24, 120, 0, 0, 0, 12])
        ]
    );
}
