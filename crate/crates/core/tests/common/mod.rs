//! Oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use powerdiag::geometry::{forward_construct_pruned, CellComplex, Domain, Halfspace, PowerDiagramSpec};
use powerdiag::io::ComplexDocument;
use powerdiag::lp::LinearSystem;
use powerdiag::random::{SiteRegion, SpecGenerator};
use powerdiag::scalar::{q, Rational, Scalar, Tolerance};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Complex and domain (inline, or all of R^d) of a fixture.
pub fn load_fixture(name: &str) -> (CellComplex<Rational>, Domain<Rational>) {
    let doc = ComplexDocument::from_json(&fixture_text(name)).unwrap();
    let complex = doc.to_complex(Tolerance::DEFAULT).unwrap();
    let domain = doc.to_domain(Tolerance::DEFAULT).unwrap();
    (complex, domain)
}

pub const FIXTURES: [&str; 6] = [
    "fig1-L.json",
    "fig1-M.json",
    "fig1-R.json",
    "fig2-left.json",
    "fig2-right.json",
    "fig2-right-raw.json",
];

pub fn r(n: i64) -> Rational {
    q(n, 1)
}

pub fn hs(normal: &[i64], offset: Rational) -> Halfspace<Rational> {
    Halfspace::new(normal.iter().map(|&v| r(v)).collect(), offset).unwrap()
}

// ---------------------------------------------------------------------------
// Fourier–Motzkin

type Row = (Vec<Rational>, Rational);

fn normalize(row: Row) -> Option<Row> {
    let scale = row.0.iter().map(|c| c.abs()).max().unwrap();
    if scale.is_zero() {
        return None;
    }
    Some((row.0.iter().map(|c| c / &scale).collect(), row.1 / scale))
}

/// Decides feasibility by substituting equalities away and eliminating the
/// remaining variables one at a time. Returns `None` if the row count
/// exceeds `cap` (inconclusive).
pub fn fm_feasible(sys: &LinearSystem<Rational>, cap: usize) -> Option<bool> {
    let n = sys.num_vars;
    let mut eqs: Vec<Row> = sys
        .equalities
        .iter()
        .map(|c| (c.coeffs.clone(), c.rhs.clone()))
        .collect();
    let mut ineqs: Vec<Row> = sys
        .inequalities
        .iter()
        .map(|c| (c.coeffs.clone(), c.rhs.clone()))
        .collect();
    for (j, lb) in sys.lower_bounds.iter().enumerate() {
        if let Some(l) = lb {
            let mut a = vec![r(0); n];
            a[j] = r(-1);
            ineqs.push((a, -l.clone()));
        }
    }

    while let Some((a, b)) = eqs.pop() {
        let Some(j) = a.iter().position(|c| !c.is_zero()) else {
            if !b.is_zero() {
                return Some(false);
            }
            continue;
        };
        let piv = a[j].clone();
        let subst = |row: &mut Row| {
            if row.0[j].is_zero() {
                return;
            }
            let f = &row.0[j] / &piv;
            for (x, y) in row.0.iter_mut().zip(&a) {
                *x -= &f * y;
            }
            row.1 -= &f * &b;
        };
        eqs.iter_mut().for_each(subst);
        ineqs.iter_mut().for_each(subst);
    }

    // Each row remembers which original inequalities it combines; after `t`
    // eliminations a row built from more than `t + 1` of them is redundant
    // (Chernikov's rule), which keeps the row count manageable.
    let mut rows: BTreeMap<Row, BTreeSet<usize>> = BTreeMap::new();
    for (idx, row) in ineqs.into_iter().enumerate() {
        match normalize(row.clone()) {
            Some(nr) => {
                rows.insert(nr, BTreeSet::from([idx]));
            }
            None if row.1.is_negative() => return Some(false),
            None => {}
        }
    }

    let mut live: BTreeSet<usize> = (0..n).collect();
    let mut eliminated = 0;
    while !live.is_empty() {
        // eliminate the variable producing the fewest new rows
        let j = *live
            .iter()
            .min_by_key(|&&j| {
                let pos = rows.keys().filter(|r| r.0[j].is_positive()).count();
                let neg = rows.keys().filter(|r| r.0[j].is_negative()).count();
                pos * neg
            })
            .unwrap();
        live.remove(&j);
        eliminated += 1;
        let (pos, rest): (Vec<_>, Vec<_>) = rows.into_iter().partition(|(r, _)| r.0[j].is_positive());
        let (neg, zero): (Vec<_>, Vec<_>) = rest.into_iter().partition(|(r, _)| r.0[j].is_negative());
        rows = zero.into_iter().collect();
        for (p, po) in &pos {
            for (m, mo) in &neg {
                let origins: BTreeSet<usize> = po.union(mo).copied().collect();
                if origins.len() > eliminated + 1 {
                    continue;
                }
                let (cp, cm) = (p.0[j].clone(), -m.0[j].clone());
                let a: Vec<Rational> = p.0.iter().zip(&m.0).map(|(x, y)| x * &cm + y * &cp).collect();
                let b = &p.1 * &cm + &m.1 * &cp;
                match normalize((a, b.clone())) {
                    Some(nr) => {
                        let slot = rows.entry(nr).or_insert_with(|| origins.clone());
                        if origins.len() < slot.len() {
                            *slot = origins;
                        }
                    }
                    None if b.is_negative() => return Some(false),
                    None => {}
                }
            }
            if rows.len() > cap {
                return None;
            }
        }
        rows = prune_subsumed(rows);
    }
    Some(true)
}

/// Drops rows whose history strictly contains another row's history.
fn prune_subsumed(rows: BTreeMap<Row, BTreeSet<usize>>) -> BTreeMap<Row, BTreeSet<usize>> {
    let mut by_size: Vec<(Row, BTreeSet<usize>)> = rows.into_iter().collect();
    by_size.sort_by_key(|(_, o)| o.len());
    let mut kept: Vec<(Row, BTreeSet<usize>)> = Vec::with_capacity(by_size.len());
    for (row, origins) in by_size {
        let subsumed = kept
            .iter()
            .any(|(_, k)| k.len() < origins.len() && k.is_subset(&origins));
        if !subsumed {
            kept.push((row, origins));
        }
    }
    kept.into_iter().collect()
}

/// Binomial coefficient, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n.saturating_sub(k));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// `C(m + n, n)` with `m` the number of constraint rows (bounds included).
pub fn pivot_ceiling(sys: &LinearSystem<Rational>) -> u128 {
    let m = sys.equalities.len()
        + sys.inequalities.len()
        + sys.lower_bounds.iter().filter(|b| b.is_some()).count();
    binomial(m + sys.num_vars, sys.num_vars)
}

/// Sparse integer system with up to `max_vars` variables and `max_rows`
/// equality/inequality rows. Half the systems are built around a planted
/// point, so feasible and infeasible cases both appear.
pub fn random_system(seed: u64, max_vars: usize, max_rows: usize) -> LinearSystem<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=max_vars);
    let rows = rng.random_range(1..=max_rows);
    let n_eq = rng.random_range(0..=rows.min(n).min(3));
    let planted: Option<Vec<i64>> = rng
        .random_bool(0.5)
        .then(|| (0..n).map(|_| rng.random_range(-3..=3)).collect());
    let mut sys = LinearSystem::new(n);
    for row in 0..rows {
        let a: Vec<i64> = (0..n)
            .map(|_| if rng.random_bool(0.6) { rng.random_range(-4..=4) } else { 0 })
            .collect();
        let lhs_at = planted
            .as_ref()
            .map(|x| a.iter().zip(x).map(|(u, v)| u * v).sum::<i64>());
        let coeffs = a.iter().map(|&v| r(v)).collect();
        if row < n_eq {
            let b = lhs_at.unwrap_or_else(|| rng.random_range(-6..=6));
            sys.add_equality(coeffs, r(b));
        } else {
            let b = match lhs_at {
                Some(v) => v + rng.random_range(0..=3),
                None => rng.random_range(-6..=6),
            };
            sys.add_inequality(coeffs, r(b));
        }
    }
    for j in 0..n {
        if rng.random_bool(0.4) {
            let lb = match &planted {
                Some(x) => x[j] - rng.random_range(0..=2),
                None => rng.random_range(-2..=2),
            };
            sys.set_lower_bound(j, r(lb));
        }
    }
    sys
}

// ---------------------------------------------------------------------------
// Linear algebra oracle

/// Rank by plain row reduction.
pub fn rank_oracle(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let width = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot_row = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let f = &row[col] / &pivot_row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

// ---------------------------------------------------------------------------
// Instance generators

/// Domain kinds used by the round-trip suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    Full,
    UnitBox,
    Simplex,
}

impl DomainKind {
    pub const ALL: [DomainKind; 3] = [DomainKind::Full, DomainKind::UnitBox, DomainKind::Simplex];

    pub fn domain(self, dim: usize) -> Domain<Rational> {
        match self {
            DomainKind::Full => Domain::full(dim),
            DomainKind::UnitBox => Domain::boxed(&vec![r(0); dim], &vec![r(1); dim]).unwrap(),
            DomainKind::Simplex => powerdiag::projected_simplex(dim + 1).unwrap(),
        }
    }

    pub fn region(self) -> SiteRegion {
        match self {
            DomainKind::Full => SiteRegion::Symmetric,
            DomainKind::UnitBox => SiteRegion::UnitBox,
            DomainKind::Simplex => SiteRegion::Simplex,
        }
    }
}

pub struct RoundTripCase {
    pub seed: u64,
    pub kind: DomainKind,
    pub spec: PowerDiagramSpec<Rational>,
    pub domain: Domain<Rational>,
    pub complex: CellComplex<Rational>,
}

/// Random spec over `kind`, with empty or degenerate cells pruned.
pub fn round_trip_case(seed: u64, dim: usize, k: usize, kind: DomainKind) -> RoundTripCase {
    let raw = SpecGenerator::new(seed).spec(dim, k, kind.region());
    let domain = kind.domain(dim);
    let (complex, spec, _) = forward_construct_pruned(&raw, &domain, Tolerance::DEFAULT).unwrap();
    RoundTripCase {
        seed,
        kind,
        spec,
        domain,
        complex,
    }
}

/// `x -> M x + t` applied to a halfspace `n . x <= o`.
fn push_forward(h: &Halfspace<Rational>, m_inv: &[[Rational; 2]; 2], t: &[Rational; 2]) -> Halfspace<Rational> {
    let n = h.normal();
    let nm: Vec<Rational> = (0..2)
        .map(|c| &n[0] * &m_inv[0][c] + &n[1] * &m_inv[1][c])
        .collect();
    let shift = &nm[0] * &t[0] + &nm[1] * &t[1];
    Halfspace::new(nm, h.offset() + shift).unwrap()
}

/// Three cells in a box: cell A on one side of a line `x1 = a` (its
/// separators to B and C share that normal) and B, C split by `x2 = b`.
/// The layout is moved by a random integer affine map, each separator gets
/// a random positive scale and the labels are permuted.
pub fn three_cell_no_instance(seed: u64) -> (CellComplex<Rational>, Domain<Rational>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = rng.random_range(2..=9i64);
    let h = rng.random_range(2..=9i64);
    let den = rng.random_range(1..=7i64);
    let a = q(rng.random_range(1..w * den), den);
    let b = q(rng.random_range(1..h * den), den);

    let (m, det) = loop {
        let m: [[i64; 2]; 2] = [
            [rng.random_range(-3..=3), rng.random_range(-3..=3)],
            [rng.random_range(-3..=3), rng.random_range(-3..=3)],
        ];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det != 0 {
            break (m, det);
        }
    };
    let m_inv = [
        [q(m[1][1], det), q(-m[0][1], det)],
        [q(-m[1][0], det), q(m[0][0], det)],
    ];
    let t = [r(rng.random_range(-5..=5)), r(rng.random_range(-5..=5))];

    let line = hs(&[1, 0], a);
    let horiz = hs(&[0, -1], -b);
    let mut seps = BTreeMap::new();
    seps.insert((0, 1), line.clone());
    seps.insert((0, 2), line);
    seps.insert((1, 2), horiz);
    let mut mirrored = BTreeMap::new();
    for ((i, j), s) in &seps {
        mirrored.insert((*j, *i), s.negated());
    }
    seps.extend(mirrored);

    let mut perm: Vec<usize> = (0..3).collect();
    for i in (1..3).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let mut out = BTreeMap::new();
    for ((i, j), s) in seps {
        let scale = q(rng.random_range(1..=20), rng.random_range(1..=20));
        out.insert((perm[i], perm[j]), push_forward(&s, &m_inv, &t).scaled(&scale));
    }
    let box_hs = [
        hs(&[-1, 0], r(0)),
        hs(&[1, 0], r(w)),
        hs(&[0, -1], r(0)),
        hs(&[0, 1], r(h)),
    ];
    let domain = Domain::new(2, box_hs.iter().map(|h| push_forward(h, &m_inv, &t)).collect()).unwrap();
    (CellComplex::paired(2, 3, out).unwrap(), domain)
}

/// Whether two paired complexes have the same neighbours and positively
/// proportional separators.
pub fn same_paired_cells(a: &CellComplex<Rational>, b: &CellComplex<Rational>) -> bool {
    if a.k() != b.k() || a.separators().len() != b.separators().len() {
        return false;
    }
    a.separators().iter().all(|(key, h)| {
        b.separators()
            .get(key)
            .is_some_and(|g| h.is_positive_multiple_of(g, Tolerance::DEFAULT))
    })
}

/// Fisher–Yates permutation of `0..k`.
pub fn random_permutation(rng: &mut ChaCha8Rng, k: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    perm
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn positive_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::from_frac(rng.random_range(1..=50), rng.random_range(1..=50))
}
