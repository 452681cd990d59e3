use distlab::codec::{width_for, BitString, BitWriter};
use distlab::graph::{Graph, INF};
use distlab::label::{LabelSet, SchemeTag};
use distlab::harness::{encode_graph, EncodeRequest};
use distlab::sparse::split_transform;
use proptest::collection::{btree_set, vec};
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..max_n).prop_flat_map(|n| {
        vec((0..n as u64, 0..n as u64, 0..2u64), 0..3 * n).prop_map(move |raw| {
            let mut seen = std::collections::BTreeSet::new();
            let edges: Vec<(u64, u64, u64)> = raw
                .into_iter()
                .filter(|&(u, v, _)| u != v && seen.insert((u.min(v), u.max(v))))
                .collect();
            Graph::new(n, &edges).unwrap()
        })
    })
}

fn unit(g: &Graph) -> Graph {
    let edges: Vec<(u64, u64, u64)> = g.edges().iter().map(|e| (e.u as u64, e.v as u64, 1)).collect();
    Graph::new(g.n(), &edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn gamma_round_trip(xs in vec(1..u64::MAX, 1..8)) {
        let mut w = BitWriter::new();
        for &x in &xs {
            w.write_gamma(x).unwrap();
        }
        let bits = w.finish();
        let mut c = bits.cursor();
        for &x in &xs {
            prop_assert_eq!(c.read_gamma().unwrap(), x);
        }
        prop_assert_eq!(c.remaining(), 0);
    }

    #[test]
    fn fixed_and_id_sets_round_trip(x in any::<u32>(), ids in btree_set(0..100_000u32, 0..40)) {
        let ids: Vec<u32> = ids.into_iter().collect();
        let width = width_for(x as u64);
        let mut w = BitWriter::new();
        w.write_fixed(x as u64, width).unwrap();
        w.write_id_set(&ids).unwrap();
        let framed = w.finish().to_framed_bytes();
        let bits = BitString::from_framed_bytes(&framed).unwrap();
        let mut c = bits.cursor();
        prop_assert_eq!(c.read_fixed(width).unwrap(), x as u64);
        prop_assert_eq!(c.read_id_set().unwrap(), ids);
        prop_assert_eq!(c.remaining(), 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sssp_satisfies_relaxation(g in graph_strategy(40), s in 0u32..40) {
        let s = s % g.n() as u32;
        let d = g.sssp(s);
        prop_assert_eq!(d[s as usize].weight, 0);
        for e in g.edges() {
            let (a, b) = (d[e.u as usize], d[e.v as usize]);
            prop_assert_eq!(a.is_reachable(), b.is_reachable());
            if a.is_reachable() {
                prop_assert!(b.weight <= a.weight + e.w as u32);
                prop_assert!(a.weight <= b.weight + e.w as u32);
            }
        }
        // every reached node other than the source has a tight predecessor
        for v in 0..g.n() as u32 {
            let dv = d[v as usize];
            if v == s || !dv.is_reachable() {
                continue;
            }
            let tight = g.neighbors(v).iter().any(|&(x, w)| {
                let dx = d[x as usize];
                dx.weight + w as u32 == dv.weight && dx.hops + 1 == dv.hops
            });
            prop_assert!(tight);
        }
    }

    #[test]
    fn split_preserves_distances_and_bounds_degree(g in graph_strategy(30), k in 3u32..6) {
        let g = unit(&g);
        let split = split_transform(&g, k).unwrap();
        prop_assert!(split.gprime.max_degree() <= k as usize);
        for u in 0..g.n() as u32 {
            let a = g.distances_from(u);
            let b = split.gprime.distances_from(split.rep[u as usize]);
            for v in 0..g.n() {
                prop_assert_eq!(a[v], b[split.rep[v] as usize]);
            }
        }
    }

    #[test]
    fn label_files_round_trip(g in graph_strategy(24), seed in any::<u64>(), d in 2u32..6) {
        let g = unit(&g);
        for req in [
            EncodeRequest::new(SchemeTag::Full, seed).threshold(d),
            EncodeRequest::new(SchemeTag::Sparse, seed),
            EncodeRequest::new(SchemeTag::Additive, seed).additive(2, Some(4), Some(d)),
        ] {
            let set = encode_graph(&g, &req).unwrap();
            let bytes = set.to_bytes();
            let back = LabelSet::from_bytes(&bytes).unwrap();
            prop_assert_eq!(&back, &set);
            for u in 0..g.n() as u32 {
                let truth = g.distances_from(u);
                for v in 0..g.n() as u32 {
                    let got = back.distance(u, v).unwrap();
                    prop_assert!(got >= truth[v as usize]);
                    if req.scheme == SchemeTag::Sparse {
                        prop_assert_eq!(got, truth[v as usize]);
                    }
                    if truth[v as usize] == INF {
                        prop_assert_eq!(got, INF);
                    }
                }
            }
        }
    }
}
