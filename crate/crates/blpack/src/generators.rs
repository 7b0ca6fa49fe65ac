//! Builders for the adversarial instance families.
//!
//! Each builder returns a [`GeneratedCase`]: the instance, the named
//! orderings that matter for it, hand-built reference layouts where a figure
//! exists for them, and the exact values the family is expected to produce.
//! Reference packings are data, not packer output; they certify optimal
//! heights that the bottom-left rule itself cannot reach.

use std::collections::BTreeMap;
use std::fmt;

use crate::instance::{Instance, Ordering};
use crate::packing::{Packing, Placement};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct GeneratedCase {
    pub name: String,
    pub instance: Instance,
    /// Named orderings; keys like `"decreasing"`, `"reference"`, `"adversarial"`.
    pub orderings: BTreeMap<String, Ordering>,
    /// Named hand-built layouts; keys like `"opt"`, `"bl"`.
    pub reference_packings: BTreeMap<String, Packing>,
    /// Exact expectations. Keys of the form `bl_height_<ordering>` must be
    /// reproduced by packing the named ordering.
    pub expected: BTreeMap<String, Rational>,
    /// Item-id groups by construction role (e.g. `"unit"`, `"capstone"`).
    pub groups: BTreeMap<String, Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenError {
    ParameterOutOfRange(&'static str),
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::ParameterOutOfRange(what) => write!(f, "parameter out of range: {what}"),
        }
    }
}

impl std::error::Error for GenError {}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn qi(n: i64) -> Rational {
    Rational::from_int(n)
}

fn squares(sides: &[Rational]) -> Vec<(Rational, Rational)> {
    sides.iter().map(|s| (s.clone(), s.clone())).collect()
}

fn reference(instance: &Instance, placements: Vec<(usize, Rational, Rational)>) -> Packing {
    let placements = placements
        .into_iter()
        .map(|(id, x, y)| Placement { id, x, y })
        .collect();
    Packing::new(instance.clone(), placements).expect("reference layout places every item once")
}

fn ordering(instance: &Instance, ids: Vec<usize>) -> Ordering {
    Ordering::new(ids, instance.len()).expect("hand-built ordering is a permutation")
}

/// Seven rectangles in a width-7 strip whose best bottom-left height is 4
/// while a slightly-perturbed tight layout of height `3 + eps` stays
/// feasible. Requires `0 < eps <= 1/5`.
pub fn gen_rect_43(eps: &Rational) -> Result<GeneratedCase, GenError> {
    if !eps.is_positive() || eps > &q(1, 5) {
        return Err(GenError::ParameterOutOfRange("eps must be in (0, 1/5]"));
    }
    let wide = qi(3) - eps;
    let tall = qi(1) + eps;
    let instance = Instance::new(
        qi(7),
        vec![
            (wide.clone(), qi(2)),
            (wide.clone(), qi(2)),
            (qi(2), qi(1)),
            (qi(2), qi(1)),
            (qi(2), qi(1)),
            (qi(2), qi(1)),
            (qi(1), tall),
        ],
    )
    .expect("valid by construction");

    let mut orderings = BTreeMap::new();
    orderings.insert(
        "reference".into(),
        ordering(&instance, vec![0, 2, 3, 6, 1, 4, 5]),
    );

    let opt = reference(
        &instance,
        vec![
            (0, qi(0), qi(0)),
            (2, qi(3), qi(0)),
            (3, qi(5), qi(0)),
            (6, qi(3), qi(1)),
            (1, qi(4), qi(1)),
            (4, qi(0), qi(2)),
            (5, qi(2), qi(2) + eps),
        ],
    );
    let mut reference_packings = BTreeMap::new();
    reference_packings.insert("opt".into(), opt);

    let mut expected = BTreeMap::new();
    expected.insert("opt_height".into(), qi(3) + eps);
    expected.insert("bl_best_height".into(), qi(4));
    expected.insert("bl_height_reference".into(), qi(4));

    Ok(GeneratedCase {
        name: format!("rect43(eps={eps})"),
        instance,
        orderings,
        reference_packings,
        expected,
        groups: BTreeMap::new(),
    })
}

/// Integer-scaled variant: two `(4,2h)`, four `(3,h)`, one `(1,h+1)` in a
/// width-10 strip; optimum `3h+1`, best bottom-left `4h`.
pub fn gen_rect_43_integer(h: i64) -> Result<GeneratedCase, GenError> {
    if h < 1 {
        return Err(GenError::ParameterOutOfRange("h must be >= 1"));
    }
    let instance = Instance::new(
        qi(10),
        vec![
            (qi(4), qi(2 * h)),
            (qi(4), qi(2 * h)),
            (qi(3), qi(h)),
            (qi(3), qi(h)),
            (qi(3), qi(h)),
            (qi(3), qi(h)),
            (qi(1), qi(h + 1)),
        ],
    )
    .expect("valid by construction");

    let mut orderings = BTreeMap::new();
    orderings.insert(
        "reference".into(),
        ordering(&instance, vec![0, 2, 3, 6, 1, 4, 5]),
    );

    let opt = reference(
        &instance,
        vec![
            (2, qi(0), qi(0)),
            (3, qi(3), qi(0)),
            (0, qi(6), qi(0)),
            (1, qi(0), qi(h)),
            (6, qi(4), qi(h)),
            (5, qi(7), qi(2 * h)),
            (4, qi(4), qi(2 * h + 1)),
        ],
    );
    let mut reference_packings = BTreeMap::new();
    reference_packings.insert("opt".into(), opt);

    let mut expected = BTreeMap::new();
    expected.insert("opt_height".into(), qi(3 * h + 1));
    expected.insert("bl_height_reference".into(), qi(4 * h));
    if h >= 2 {
        // At h = 1 the 4h/(3h+1) ratio is degenerate; the value is measured
        // rather than asserted there.
        expected.insert("bl_best_height".into(), qi(4 * h));
    }

    Ok(GeneratedCase {
        name: format!("rect43int(h={h})"),
        instance,
        orderings,
        reference_packings,
        expected,
        groups: BTreeMap::new(),
    })
}

/// Squares `3-2eps x2, 2 x4, 1+eps` in a width-7 strip; optimum `5 + eps`,
/// best bottom-left `6 - 4 eps`. Requires `0 < eps <= 1/5`.
pub fn gen_square_65(eps: &Rational) -> Result<GeneratedCase, GenError> {
    if !eps.is_positive() || eps > &q(1, 5) {
        return Err(GenError::ParameterOutOfRange("eps must be in (0, 1/5]"));
    }
    let big = qi(3) - eps - eps;
    let small = qi(1) + eps;
    let instance = Instance::new(
        qi(7),
        squares(&[big.clone(), big.clone(), qi(2), qi(2), qi(2), qi(2), small]),
    )
    .expect("valid by construction");

    let mut orderings = BTreeMap::new();
    orderings.insert(
        "reference".into(),
        ordering(&instance, vec![0, 2, 3, 4, 5, 1, 6]),
    );

    let opt = reference(
        &instance,
        vec![
            (0, qi(0), qi(0)),
            (2, qi(3), qi(0)),
            (3, qi(5), qi(0)),
            (6, qi(3), qi(2)),
            (1, qi(4) + eps, qi(2)),
            (4, qi(0), big.clone()),
            (5, qi(2), qi(3) + eps),
        ],
    );
    let opt_alt = reference(
        &instance,
        vec![
            (2, qi(0), qi(0)),
            (3, qi(2), qi(0)),
            (1, qi(4) + eps, qi(0)),
            (0, qi(0), qi(2)),
            (6, qi(3), qi(2)),
            (5, qi(3), qi(3) + eps),
            (4, qi(5), big.clone()),
        ],
    );
    let bl = reference(
        &instance,
        vec![
            (0, qi(0), qi(0)),
            (2, big.clone(), qi(0)),
            (3, qi(5) - eps - eps, qi(0)),
            (4, big.clone(), qi(2)),
            (5, qi(5) - eps - eps, qi(2)),
            (1, qi(0), big.clone()),
            (6, big.clone(), qi(4)),
        ],
    );
    let mut reference_packings = BTreeMap::new();
    reference_packings.insert("opt".into(), opt);
    reference_packings.insert("opt_alt".into(), opt_alt);
    reference_packings.insert("bl".into(), bl);

    let four_eps = eps + eps + eps + eps;
    let mut expected = BTreeMap::new();
    expected.insert("opt_height".into(), qi(5) + eps);
    expected.insert("bl_best_height".into(), qi(6) - &four_eps);
    expected.insert("bl_height_reference".into(), qi(6) - &four_eps);

    Ok(GeneratedCase {
        name: format!("square65(eps={eps})"),
        instance,
        orderings,
        reference_packings,
        expected,
        groups: BTreeMap::new(),
    })
}

/// The large square family: one `h+eps`, `4h` of `h+1`, `2h` of `2h+1-eps`
/// in a strip of width `4h^2+3h`. Requires `h >= 2` and `0 < eps < 1/(4h)`
/// so every size comparison of the construction stays strict.
///
/// The certified optimum layout has height `3h+2+eps`: a column holding the
/// grown middle square and two `h+1` squares is `3h+2+eps` tall on its own,
/// and no arrangement avoids paying that, so the best layout lifts exactly
/// one small square onto the middle one.
pub fn gen_square_43(h: i64, eps: &Rational) -> Result<GeneratedCase, GenError> {
    if h < 2 {
        return Err(GenError::ParameterOutOfRange("h must be >= 2"));
    }
    if !eps.is_positive() || eps >= &q(1, 4 * h) {
        return Err(GenError::ParameterOutOfRange("eps must be in (0, 1/(4h))"));
    }
    let middle = qi(h) + eps;
    let small = qi(h + 1);
    let big = qi(2 * h + 1) - eps;
    let width = qi(4 * h * h + 3 * h);

    let mut sides = vec![middle];
    for _ in 0..4 * h {
        sides.push(small.clone());
    }
    for _ in 0..2 * h {
        sides.push(big.clone());
    }
    let instance = Instance::new(width.clone(), squares(&sides)).expect("valid by construction");

    let hu = h as usize;
    let small_ids: Vec<usize> = (1..=4 * hu).collect();
    let big_ids: Vec<usize> = (4 * hu + 1..=6 * hu).collect();

    // Bottom-left order that reproduces the stacked two-by-two layout: one
    // big, the bottom small row, the remaining bottom bigs, the stacked
    // small row, the stacked bigs, and the middle square last.
    let mut stacked = vec![big_ids[0]];
    stacked.extend(&small_ids[..2 * hu]);
    stacked.extend(&big_ids[1..hu]);
    stacked.extend(&small_ids[2 * hu..]);
    stacked.extend(&big_ids[hu..]);
    stacked.push(0);

    let mut orderings = BTreeMap::new();
    orderings.insert("reference".into(), ordering(&instance, stacked));
    orderings.insert("decreasing".into(), Ordering::by_decreasing_size(&instance));

    // Optimum layout, height 3h+2+eps.
    let mut opt: Vec<(usize, Rational, Rational)> = Vec::new();
    for j in 0..2 * h {
        opt.push((small_ids[j as usize], qi(j * (h + 1)), qi(0)));
    }
    for j in 0..h {
        opt.push((big_ids[j as usize], &big * qi(j), qi(h + 1)));
    }
    opt.push((0, &big * qi(h), qi(h + 1)));
    for j in 0..h {
        opt.push((big_ids[(h + j) as usize], &width - &big * qi(j + 1), qi(0)));
    }
    // One small rides on the middle square; the rest sit flush right on the
    // bottom-right bigs.
    opt.push((small_ids[2 * hu], qi(2 * h * h + h), qi(2 * h + 1) + eps));
    for j in 0..(2 * h - 1) {
        opt.push((
            small_ids[2 * hu + 1 + j as usize],
            &width - qi((j + 1) * (h + 1)),
            qi(2 * h + 1) - eps,
        ));
    }
    let opt = reference(&instance, opt);

    // Bottom-left layout of the `reference` ordering, height 4h+2-2eps.
    let row2_big = qi(2 * h * h + 4 * h + 1) - eps;
    let mut bl: Vec<(usize, Rational, Rational)> = Vec::new();
    bl.push((big_ids[0], qi(0), qi(0)));
    for j in 0..2 * h {
        bl.push((small_ids[j as usize], &big + qi(j * (h + 1)), qi(0)));
    }
    for j in 0..h - 1 {
        bl.push((big_ids[1 + j as usize], &row2_big + &big * qi(j), qi(0)));
    }
    for j in 0..2 * h {
        bl.push((
            small_ids[(2 * h + j) as usize],
            &big + qi(j * (h + 1)),
            qi(h + 1),
        ));
    }
    bl.push((big_ids[hu], qi(0), big.clone()));
    for j in 0..h - 1 {
        bl.push((
            big_ids[hu + 1 + j as usize],
            &row2_big + &big * qi(j),
            big.clone(),
        ));
    }
    bl.push((0, big.clone(), qi(2 * h + 2)));
    let bl = reference(&instance, bl);

    let mut reference_packings = BTreeMap::new();
    reference_packings.insert("opt".into(), opt);
    reference_packings.insert("bl".into(), bl);

    let bl_height = qi(4 * h + 2) - eps - eps;
    let mut expected = BTreeMap::new();
    expected.insert("opt_height".into(), qi(3 * h + 2) + eps);
    expected.insert("bl_best_height".into(), bl_height.clone());
    expected.insert("bl_height_reference".into(), bl_height);
    expected.insert("bl_height_decreasing".into(), qi(4 * h + 3) - eps);

    let mut groups = BTreeMap::new();
    groups.insert("middle".into(), vec![0]);
    groups.insert("small".into(), small_ids);
    groups.insert("big".into(), big_ids);

    Ok(GeneratedCase {
        name: format!("square43(h={h},eps={eps})"),
        instance,
        orderings,
        reference_packings,
        expected,
        groups,
    })
}

/// Checkerboard epsilon `2 / (m^3 (m^2 + 1))`.
pub fn checkerboard_eps(m: i64) -> Rational {
    q(2, m * m * m * (m * m + 1))
}

/// The m-checkerboard: `m^2` graded squares of size `2 - i eps` that fill
/// the strip bottom exactly, plus `m^3 + m(m-1)/2` unit squares that build
/// `m` staggered rows on top. Decreasing order packs to `m + 2 - eps`.
pub fn gen_checkerboard(m: i64) -> Result<GeneratedCase, GenError> {
    if m < 2 || m % 2 != 0 {
        return Err(GenError::ParameterOutOfRange("m must be even and >= 2"));
    }
    let eps = checkerboard_eps(m);
    let width = q(2 * m * m * m - 1, m);

    let mut sides = Vec::new();
    for i in 1..=m * m {
        sides.push(qi(2) - &eps * qi(i));
    }
    let graded_end = sides.len();
    let unit_count = m * m * m + m * (m - 1) / 2;
    for _ in 0..unit_count {
        sides.push(qi(1));
    }
    debug_assert_eq!(
        sides[..graded_end].iter().sum::<Rational>(),
        width,
        "graded squares tile the strip bottom exactly"
    );
    let instance = Instance::new(width, squares(&sides)).expect("valid by construction");

    let mut orderings = BTreeMap::new();
    orderings.insert("decreasing".into(), Ordering::identity(instance.len()));

    let mut expected = BTreeMap::new();
    expected.insert("bl_height_decreasing".into(), qi(m + 2) - &eps);
    expected.insert("opt_height_upper_bound".into(), q(m, 2) + qi(3));

    let mut groups = BTreeMap::new();
    groups.insert("graded".into(), (0..graded_end).collect());
    groups.insert("unit".into(), (graded_end..instance.len()).collect());

    Ok(GeneratedCase {
        name: format!("checkerboard(m={m})"),
        instance,
        orderings,
        reference_packings: BTreeMap::new(),
        expected,
        groups,
    })
}

/// The reset-row squares for the m-checkerboard, in decreasing placement
/// order: `m+1` squares of `1 + m^2 eps`, one `1 + i eps` for each
/// `m < i < m^2`, and one for each odd `i <= m`.
pub fn gen_reset_row(m: i64) -> Result<Vec<Rational>, GenError> {
    if m < 2 || m % 2 != 0 {
        return Err(GenError::ParameterOutOfRange("m must be even and >= 2"));
    }
    let eps = checkerboard_eps(m);
    let mut sides = Vec::new();
    for _ in 0..=m {
        sides.push(qi(1) + &eps * qi(m * m));
    }
    for i in (m + 1..m * m).rev() {
        sides.push(qi(1) + &eps * qi(i));
    }
    for i in (1..=m).rev().filter(|i| i % 2 == 1) {
        sides.push(qi(1) + &eps * qi(i));
    }
    Ok(sides)
}

/// Checkerboard plus its reset row, packed in one decreasing sequence. For
/// `m >= 4`, packing puts the top face of every reset-row square at exactly
/// `m + 3`.
pub fn gen_checkerboard_with_reset(m: i64) -> Result<GeneratedCase, GenError> {
    let base = gen_checkerboard(m)?;
    let reset = gen_reset_row(m)?;

    let mut sides: Vec<Rational> = base
        .instance
        .items()
        .iter()
        .map(|it| it.width.clone())
        .collect();
    let reset_start = sides.len();
    sides.extend(reset);
    let instance = Instance::new(base.instance.width().clone(), squares(&sides)).expect("valid");

    let mut orderings = BTreeMap::new();
    orderings.insert("decreasing".into(), Ordering::identity(instance.len()));

    let mut expected = BTreeMap::new();
    // At m = 2 the low row is too short for all m+1 reset squares of size
    // 1 + m^2 eps and one of them lands a position higher; from m = 4 on
    // every reset square tops out at exactly m + 3.
    if m >= 4 {
        expected.insert("reset_top_face".into(), qi(m + 3));
    }

    let mut groups = base.groups;
    groups.insert("reset".into(), (reset_start..instance.len()).collect());

    Ok(GeneratedCase {
        name: format!("resetrow(m={m})"),
        instance,
        orderings,
        reference_packings: BTreeMap::new(),
        expected,
        groups,
    })
}

/// The full worst-order construction: checkerboard, reset row, one row of
/// unit/size-2 patterns, then exponentially growing rows `2^j + ...` for
/// `j = 2..n-1`, capped by a single square of size `2^n + 2^(n-1) eps`.
/// The packed height is at least `m + (2^n - 2) + 2^n`.
pub fn gen_ten_thirds(n: u32) -> Result<GeneratedCase, GenError> {
    if n < 2 {
        return Err(GenError::ParameterOutOfRange("n must be >= 2"));
    }
    let mut m = (4 * 2i64.pow(n)) / 3;
    if m % 2 != 0 {
        m -= 1;
    }
    let base = gen_checkerboard_with_reset(m)?;
    let eps = checkerboard_eps(m);
    let width = base.instance.width().clone();

    let mut sides: Vec<Rational> = base
        .instance
        .items()
        .iter()
        .map(|it| it.width.clone())
        .collect();
    let mut groups = base.groups;

    // Row 1: four unit squares then one of size 2 + (a_i + 1) eps, with
    // a_i alternating 1, 0, 1, ...; filler squares of size 2 + eps while at
    // least 4 + 2 eps of row remains.
    let row1_start = sides.len();
    let k1 = i64::try_from(&(&width / &qi(6)).floor_bigint()).expect("row count fits i64");
    let mut consumed = Rational::zero();
    for i in 1..=k1 {
        let a = if i % 2 == 1 { 1 } else { 0 };
        for _ in 0..4 {
            sides.push(qi(1));
        }
        let big = qi(2) + &eps * qi(a + 1);
        consumed = consumed + qi(4) + &big;
        sides.push(big);
    }
    let mut rem = &width - &consumed;
    let threshold1 = qi(4) + &eps + &eps;
    let filler1 = qi(2) + &eps;
    while rem >= threshold1 {
        rem = rem - &filler1;
        sides.push(filler1.clone());
    }
    groups.insert("row1".into(), (row1_start..sides.len()).collect());

    // Rows j = 2 .. n-1; each square implicitly owns a gap of twice its
    // nominal size, so a square-plus-gap slot is 3 * 2^j wide.
    for j in 2..n {
        let row_start = sides.len();
        let sq = 2i64.pow(j);
        let slot = qi(3 * sq);
        let kj = i64::try_from(&(&width / &slot).floor_bigint()).expect("row count fits i64");
        let mut consumed = Rational::zero();
        for i in 1..=kj {
            let a = if i % 2 == 1 { 1 } else { 0 };
            let side = qi(sq) + &eps * qi(a + sq / 2);
            consumed = consumed + &slot;
            sides.push(side);
        }
        let mut rem = &width - &consumed;
        let threshold = qi(2 * sq) + &eps * qi(sq);
        let filler = qi(sq) + &eps * qi(sq / 2);
        while rem > threshold {
            rem = rem - &slot;
            sides.push(filler.clone());
        }
        groups.insert(format!("row{j}"), (row_start..sides.len()).collect());
    }

    let capstone = sides.len();
    let cap = 2i64.pow(n);
    sides.push(qi(cap) + &eps * qi(cap / 2));
    groups.insert("capstone".into(), vec![capstone]);

    let instance = Instance::new(width, squares(&sides)).expect("valid");
    let mut orderings = BTreeMap::new();
    orderings.insert("adversarial".into(), Ordering::identity(instance.len()));

    let mut expected = BTreeMap::new();
    expected.insert("height_floor".into(), qi(m + 2 * cap - 2));
    expected.insert("m_checkerboard".into(), qi(m));

    Ok(GeneratedCase {
        name: format!("tenthirds(n={n})"),
        instance,
        orderings,
        reference_packings: BTreeMap::new(),
        expected,
        groups,
    })
}

/// The k-local-search lower bound family: `2k+4` unit squares and `2k+5`
/// squares of size `k+2` in a strip of width `(2k+4)(k+3)`. The alternating
/// ordering is k-locally optimal at height `2(k+2)`; the optimum is `k+2`.
pub fn gen_local_search(k: i64) -> Result<GeneratedCase, GenError> {
    if k < 1 {
        return Err(GenError::ParameterOutOfRange("k must be >= 1"));
    }
    let unit_count = (2 * k + 4) as usize;
    let big_count = (2 * k + 5) as usize;
    let big = qi(k + 2);
    let width = qi((2 * k + 4) * (k + 3));

    let mut sides = vec![qi(1); unit_count];
    for _ in 0..big_count {
        sides.push(big.clone());
    }
    let instance = Instance::new(width.clone(), squares(&sides)).expect("valid");

    let mut adversarial = Vec::with_capacity(instance.len());
    for i in 0..unit_count {
        adversarial.push(i);
        adversarial.push(unit_count + i);
    }
    adversarial.push(unit_count + big_count - 1);

    let mut orderings = BTreeMap::new();
    orderings.insert("adversarial".into(), ordering(&instance, adversarial));

    let mut opt: Vec<(usize, Rational, Rational)> = Vec::new();
    for j in 0..big_count {
        opt.push((unit_count + j, &big * qi(j as i64), qi(0)));
    }
    let base = &big * qi(big_count as i64);
    for r in 0..unit_count / 2 {
        opt.push((r, base.clone(), qi(r as i64)));
        opt.push((unit_count / 2 + r, &base + qi(1), qi(r as i64)));
    }
    let opt = reference(&instance, opt);
    let mut reference_packings = BTreeMap::new();
    reference_packings.insert("opt".into(), opt);

    let mut expected = BTreeMap::new();
    expected.insert("opt_height".into(), big.clone());
    expected.insert("klocal_height".into(), &big + &big);
    expected.insert("bl_height_adversarial".into(), &big + &big);

    let mut groups = BTreeMap::new();
    groups.insert("unit".into(), (0..unit_count).collect());
    groups.insert("big".into(), (unit_count..unit_count + big_count).collect());

    Ok(GeneratedCase {
        name: format!("localsearch(k={k})"),
        instance,
        orderings,
        reference_packings,
        expected,
        groups,
    })
}

/// The exponential improvement-step family: verticals `(1/k, 2^i)` paired
/// with full-width horizontals `(1, 1/k)` in a unit-width strip. The given
/// order stacks everything for an initial height of `2^k`.
pub fn gen_exponential_steps(k: u32) -> Result<GeneratedCase, GenError> {
    if k < 1 {
        return Err(GenError::ParameterOutOfRange("k must be >= 1"));
    }
    let mut items = Vec::new();
    for i in 0..k {
        items.push((q(1, k as i64), qi(2i64.pow(i))));
        items.push((qi(1), q(1, k as i64)));
    }
    let instance = Instance::new(qi(1), items).expect("valid");

    let mut orderings = BTreeMap::new();
    orderings.insert("reference".into(), Ordering::identity(instance.len()));

    let mut expected = BTreeMap::new();
    expected.insert("bl_height_reference".into(), qi(2i64.pow(k)));

    let mut groups = BTreeMap::new();
    groups.insert("vertical".into(), (0..instance.len()).step_by(2).collect());
    groups.insert(
        "horizontal".into(),
        (1..instance.len()).step_by(2).collect(),
    );

    Ok(GeneratedCase {
        name: format!("expsteps(k={k})"),
        instance,
        orderings,
        reference_packings: BTreeMap::new(),
        expected,
        groups,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{best_exhaustive, pack, DEFAULT_EXHAUSTIVE_CAP};

    /// Shared consistency harness: references are feasible at their expected
    /// heights and every `bl_height_<name>` key is reproduced by packing the
    /// named ordering.
    fn check_case(case: &GeneratedCase) {
        for (name, packing) in &case.reference_packings {
            assert!(
                packing.is_feasible(),
                "{}: reference {name} infeasible: {:?}",
                case.name,
                packing.violations()
            );
        }
        if let Some(opt) = case.reference_packings.get("opt") {
            assert_eq!(
                &opt.height(),
                &case.expected["opt_height"],
                "{}: opt reference height",
                case.name
            );
        }
        for (key, want) in &case.expected {
            if let Some(ord_name) = key.strip_prefix("bl_height_") {
                let ordering = &case.orderings[ord_name];
                let got = pack(&case.instance, ordering).height();
                assert_eq!(&got, want, "{}: pack({ord_name}) height", case.name);
            }
        }
    }

    #[test]
    fn rect43_case() {
        let case = gen_rect_43(&q(1, 5)).unwrap();
        assert_eq!(case.instance.len(), 7);
        check_case(&case);
        let case = gen_rect_43(&q(1, 100)).unwrap();
        check_case(&case);
        assert!(gen_rect_43(&q(1, 1_000_000)).is_ok());
        assert!(gen_rect_43(&Rational::zero()).is_err());
        assert!(gen_rect_43(&q(1, 4)).is_err());
    }

    #[test]
    fn rect43_exhaustive_best_is_four() {
        let case = gen_rect_43(&q(1, 100)).unwrap();
        let best = best_exhaustive(&case.instance, DEFAULT_EXHAUSTIVE_CAP).unwrap();
        assert_eq!(best.orderings_examined, 5040);
        assert_eq!(best.height, case.expected["bl_best_height"]);
    }

    #[test]
    fn rect43_integer_cases() {
        for h in [1, 2, 3] {
            let case = gen_rect_43_integer(h).unwrap();
            check_case(&case);
            assert_eq!(case.expected["opt_height"], qi(3 * h + 1));
        }
        let case = gen_rect_43_integer(2).unwrap();
        let best = best_exhaustive(&case.instance, DEFAULT_EXHAUSTIVE_CAP).unwrap();
        assert_eq!(best.height, qi(8));
    }

    #[test]
    fn square65_case() {
        let case = gen_square_65(&q(1, 10)).unwrap();
        check_case(&case);
        // The bottom-left reference is exactly what the reference ordering packs.
        let packed = pack(&case.instance, &case.orderings["reference"]).final_packing();
        assert_eq!(
            packed.placements(),
            case.reference_packings["bl"].placements()
        );
        assert!(gen_square_65(&q(1, 4)).is_err());
    }

    #[test]
    fn square65_ratio_at_small_eps() {
        let case = gen_square_65(&q(1, 100)).unwrap();
        assert_eq!(case.expected["bl_best_height"], q(149, 25));
        assert_eq!(case.expected["opt_height"], q(501, 100));
        let ratio = &case.expected["bl_best_height"] / case.expected["opt_height"].clone();
        assert_eq!(ratio, q(596, 501));
    }

    #[test]
    fn square43_cases() {
        let case = gen_square_43(2, &q(1, 10)).unwrap();
        assert_eq!(case.instance.len(), 13);
        assert_eq!(case.instance.width(), &qi(22));
        check_case(&case);
        let packed = pack(&case.instance, &case.orderings["reference"]).final_packing();
        assert_eq!(
            packed.placements(),
            case.reference_packings["bl"].placements()
        );
        assert_eq!(case.expected["bl_best_height"], q(49, 5));

        let case = gen_square_43(3, &q(1, 20)).unwrap();
        assert_eq!(case.instance.width(), &qi(45));
        check_case(&case);
        assert_eq!(case.expected["bl_best_height"], qi(14) - q(1, 10));

        assert!(gen_square_43(1, &q(1, 10)).is_err());
        assert!(gen_square_43(2, &q(1, 8)).is_err());
        assert!(gen_square_43(2, &Rational::zero()).is_err());
    }

    #[test]
    fn checkerboard_small() {
        let case = gen_checkerboard(2).unwrap();
        assert_eq!(checkerboard_eps(2), q(1, 20));
        assert_eq!(case.instance.width(), &q(15, 2));
        assert_eq!(case.groups["graded"].len(), 4);
        assert_eq!(case.groups["unit"].len(), 9);
        assert_eq!(case.expected["bl_height_decreasing"], q(79, 20));
        check_case(&case);
        assert!(gen_checkerboard(3).is_err());
        assert!(gen_checkerboard(0).is_err());
    }

    #[test]
    fn checkerboard_m4_counts() {
        let case = gen_checkerboard(4).unwrap();
        assert_eq!(checkerboard_eps(4), q(1, 544));
        assert_eq!(case.instance.width(), &q(127, 4));
        assert_eq!(case.instance.len(), 86);
        assert_eq!(case.expected["bl_height_decreasing"], q(3263, 544));
    }

    #[test]
    fn reset_row_sizes() {
        let eps = checkerboard_eps(2);
        let sides = gen_reset_row(2).unwrap();
        let want: Vec<Rational> = vec![
            qi(1) + &eps * qi(4),
            qi(1) + &eps * qi(4),
            qi(1) + &eps * qi(4),
            qi(1) + &eps * qi(3),
            qi(1) + &eps,
        ];
        assert_eq!(sides, want);
        assert_eq!(gen_reset_row(4).unwrap().len(), 18);
    }

    #[test]
    fn ten_thirds_shape() {
        let case = gen_ten_thirds(2).unwrap();
        assert_eq!(case.expected["m_checkerboard"], qi(4));
        // floor(31.75 / 6) = 5 patterns of five squares, no filler.
        assert_eq!(case.groups["row1"].len(), 25);
        assert_eq!(case.groups["capstone"].len(), 1);
        assert_eq!(case.expected["height_floor"], qi(10));
        assert!(!case.groups.contains_key("row2"));

        let case = gen_ten_thirds(3).unwrap();
        assert_eq!(case.expected["m_checkerboard"], qi(10));
        assert_eq!(case.groups["row1"].len(), 33 * 5);
        assert_eq!(case.groups["row2"].len(), 16);
        assert_eq!(case.expected["height_floor"], qi(24));

        assert!(gen_ten_thirds(1).is_err());
    }

    #[test]
    fn local_search_cases() {
        let case = gen_local_search(3).unwrap();
        assert_eq!(case.instance.len(), 21);
        assert_eq!(case.instance.width(), &qi(60));
        assert_eq!(case.expected["opt_height"], qi(5));
        assert_eq!(case.expected["klocal_height"], qi(10));
        check_case(&case);

        let case = gen_local_search(1).unwrap();
        assert_eq!(case.instance.len(), 13);
        assert_eq!(case.instance.width(), &qi(24));
        assert_eq!(case.expected["opt_height"], qi(3));
        check_case(&case);
    }

    #[test]
    fn exponential_steps_cases() {
        for (k, want) in [(1u32, 2i64), (4, 16), (5, 32)] {
            let case = gen_exponential_steps(k).unwrap();
            assert_eq!(case.instance.len(), 2 * k as usize);
            assert_eq!(case.expected["bl_height_reference"], qi(want));
            check_case(&case);
        }
    }
}
