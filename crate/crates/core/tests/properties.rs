use proptest::prelude::*;

use gcsurgery::blocks::{instantiate_block, perturb_tori, BlockKind, Geometry, TorusStatus};
use gcsurgery::group::{
    abelianize, enumerate_cosets, simplify_presentation, Budgets, CosetOutcome, FreeWord, GroupTag, Presentation,
    SimplifyConfig,
};
use gcsurgery::group::identify_group;
use gcsurgery::invariants::{betti_from_euler, connected_sum_invariants, Piece};
use gcsurgery::surgery::{finalize_report, torus_surgery, SurgerySpec};

fn word(ngens: u32, max_len: usize) -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((0..ngens, prop::bool::ANY), 0..=max_len)
        .prop_map(|l| FreeWord::from_letters(l.into_iter().map(|(g, pos)| (g, if pos { 1 } else { -1 }))))
}

fn presentation() -> impl Strategy<Value = Presentation> {
    (1u32..=4).prop_flat_map(|n| {
        prop::collection::vec(word(n, 8), 0..=5).prop_map(move |rels| {
            let names = (0..n).map(|i| format!("g{i}")).collect();
            Presentation::new(names, rels).unwrap()
        })
    })
}

/// (e, sigma, b1) of each prime piece, written out independently.
fn piece_oracle(p: Piece) -> (i64, i64, i64) {
    match p {
        Piece::S4 => (2, 0, 0),
        Piece::S2xS2 => (4, 0, 0),
        Piece::CP2 => (3, 1, 0),
        Piece::CP2bar => (3, -1, 0),
        Piece::S3xS1 => (0, 0, 1),
        Piece::T2xS2 => (0, 0, 2),
        _ => unreachable!(),
    }
}

fn catalog_block() -> impl Strategy<Value = BlockKind> {
    prop_oneof![
        Just(BlockKind::ProductSurfaces { g: 2, h: 2, twelve: false }),
        Just(BlockKind::ProductSurfaces { g: 2, h: 3, twelve: false }),
        Just(BlockKind::T2xSigma { g: 2 }),
        Just(BlockKind::FourTorus),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn simplification_preserves_abelianization(p in presentation()) {
        let out = simplify_presentation(&p, SimplifyConfig { budget: 200, relator_cap: 64 });
        prop_assert_eq!(abelianize(&out.presentation), abelianize(&p));
    }

    #[test]
    fn quotients_never_raise_rank(p in presentation(), extra in word(4, 6)) {
        let n = p.generator_count() as u32;
        let extra = extra.map_generators(|g| FreeWord::generator(g % n));
        let q = p.quotient(&[extra]).unwrap();
        prop_assert!(abelianize(&q).free_rank <= abelianize(&p).free_rank);
    }

    #[test]
    fn finite_cyclic_identifications_match_the_coset_index(p in presentation()) {
        let id = identify_group(&p, Budgets { max_cosets: 5000, ..Budgets::default() });
        if let GroupTag::FiniteCyclic(n) = id.tag {
            prop_assert_eq!(abelianize(&p).order(), Some(n));
            prop_assert_eq!(enumerate_cosets(&p, &[], 5000).outcome, CosetOutcome::Index(n));
        }
        if id.tag == GroupTag::Trivial {
            prop_assert!(abelianize(&p).is_trivial());
        }
    }

    #[test]
    fn connected_sums_match_piece_arithmetic(
        counts in prop::collection::vec(0u32..4, 6).prop_filter("nonempty", |c| c.iter().any(|&n| n > 0))
    ) {
        let pieces = [Piece::S4, Piece::S2xS2, Piece::CP2, Piece::CP2bar, Piece::S3xS1, Piece::T2xS2];
        let terms: Vec<(Piece, u32)> = pieces.iter().copied().zip(counts.iter().copied()).collect();
        let (rec, betti) = connected_sum_invariants(&terms).unwrap();
        let k: i64 = counts.iter().map(|&n| n as i64).sum();
        let (mut e, mut s, mut b1) = (-2 * (k - 1), 0, 0);
        for (p, n) in &terms {
            let (pe, ps, pb) = piece_oracle(*p);
            e += *n as i64 * pe;
            s += *n as i64 * ps;
            b1 += *n as i64 * pb;
        }
        prop_assert_eq!((rec.euler, rec.signature, betti.b1 as i64), (e, s, b1));
        prop_assert_eq!(betti.euler(), e);
        prop_assert_eq!(betti.signature(), s);
    }

    #[test]
    fn betti_numbers_satisfy_the_euler_relation(b1 in 0i64..5, bp in 0i64..6, bm in 0i64..6) {
        let e = 2 - 2 * b1 + bp + bm;
        let ab = gcsurgery::group::AbelianInvariants { torsion: vec![], free_rank: b1 as usize };
        let b = betti_from_euler(e, &ab, bp - bm).unwrap();
        prop_assert_eq!((b.b1 as i64, b.b2_plus as i64, b.b2_minus as i64), (b1, bp, bm));
    }

    /// Random surgery sequences keep e and sigma, and the locus count equals
    /// the number of r = 0 surgeries on symplectic tori.
    #[test]
    fn surgeries_keep_euler_and_count_loci(
        kind in catalog_block(),
        perturb_mask in prop::collection::vec(prop::bool::ANY, 12),
        plan in prop::collection::vec((0usize..12, -3i32..4, -3i32..4, -1i32..2), 1..6),
    ) {
        let mut s = instantiate_block(&kind).unwrap();
        let (e0, s0) = (s.record.euler, s.record.signature);
        let lag: Vec<String> = s.tori.iter()
            .filter(|t| t.geometry == Geometry::Lagrangian)
            .zip(&perturb_mask)
            .filter(|(_, &m)| m)
            .map(|(t, _)| t.id.clone())
            .collect();
        if !lag.is_empty() {
            s = perturb_tori(&s, &lag).unwrap().0;
        }
        let mut loci = 0;
        for (i, p, q, r) in plan {
            if (p, q, r) == (0, 0, 0) {
                continue;
            }
            let avail: Vec<_> = s.tori.iter()
                .filter(|t| t.status == TorusStatus::Available && t.genus == 1)
                .collect();
            if avail.is_empty() {
                break;
            }
            let t = avail[i % avail.len()];
            // Only an essential symplectic torus keeps a defined count.
            let counts = r == 0 && t.geometry == Geometry::Symplectic && (p, q) != (0, 0);
            let spec = SurgerySpec::new(t.id.clone(), p, q, r);
            let before_unknown = s.structure.loci().is_none();
            s = torus_surgery(&s, &spec).unwrap();
            prop_assert_eq!((s.record.euler, s.record.signature), (e0, s0));
            if counts {
                loci += 1;
            }
            if before_unknown {
                break;
            }
        }
        if let Some(n) = s.structure.loci() {
            prop_assert_eq!(n, loci);
        }
        let report = finalize_report("X", &s, &[], Budgets { max_cosets: 2000, ..Budgets::default() }).unwrap();
        let b = &report.betti;
        prop_assert_eq!(report.record.euler, 2 - 2 * b.b1 as i64 + b.b2 as i64);
    }
}
