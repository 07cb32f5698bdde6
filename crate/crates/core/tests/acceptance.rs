//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shadowlab::circle::compose;
use shadowlab::fiber::GraphPoint;
use shadowlab::harness::{run_path_bound_harness, HarnessConfig};
use shadowlab::scalar::Scalar;
use shadowlab::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn q(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Circle map of the given degree with 1..=6 breakpoints on the 1/16 grid
/// and lift offsets in `[-1/8, 1/8]`.
fn random_map(rng: &mut ChaCha8Rng, degree: i64) -> CircleMap {
    let count = rng.gen_range(1..=6);
    let mut grid: Vec<i64> = (0..16).collect();
    let mut picks: Vec<i64> = (0..count).map(|_| grid.swap_remove(rng.gen_range(0..grid.len()))).collect();
    picks.sort();
    let breakpoints: Vec<Rational> = picks.iter().map(|&b| q(b, 16)).collect();
    let lift = breakpoints.iter().map(|t| t * q(degree, 1) + q(rng.gen_range(-2..=2), 16)).collect();
    PlCircleMap::new(breakpoints, lift, degree).expect("valid map")
}

fn max_slope(f: &CircleMap) -> Rational {
    f.pieces()
        .iter()
        .map(|p| ((p.v1.clone() - p.v0.clone()) / (p.t1.clone() - p.t0.clone())).abs())
        .fold(Rational::zero(), Rational::max)
}

/// Degree of `t -> f(g(t))` from circle values only: sample finely enough
/// that consecutive values differ by less than a half turn, then add up the
/// shortest signed steps.
fn sampled_degree(f: &CircleMap, g: &CircleMap) -> i64 {
    let bound = max_slope(f) * max_slope(g) * q(2, 1) + q(1, 1);
    let steps = bound.ceil().to_integer().try_into().unwrap_or(1i64).max(4);
    let value = |j: i64| f.eval(&g.eval(&q(j, steps)));
    let mut total = Rational::zero();
    let mut prev = value(0);
    for j in 1..=steps {
        let next = value(j % steps);
        let mut d = (next.clone() - prev).fract_part();
        if d > q(1, 2) {
            d -= q(1, 1);
        }
        total += d;
        prev = next;
    }
    total.to_integer().try_into().expect("integer winding")
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for d in [3, 4, 5] {
        for n in [3, 6, 32] {
            let c = gen_planar_circle::<Rational>(d, n).map_err(|e| e.to_string())?;
            let tags: Vec<TopologyTag> =
                shadow_classes(&c).map_err(|e| e.to_string())?.iter().map(|c| c.tag()).collect();
            let mut want = vec![TopologyTag::SimplePath; 2];
            want.resize(d, TopologyTag::SimpleClosedCurve);
            check(tags == want, || format!("d={d} n={n}: {tags:?}"))?;
            count += 1;
        }
    }
    let took = start.elapsed();
    check(took < Duration::from_secs(1), || format!("took {took:?}"))?;
    Ok(format!("{count} fixtures exact, {:.2}s", took.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    for (trials, dimension, seed) in [(10_000, 3, 1), (1_000, 4, 2)] {
        let report = run_path_bound_harness(&HarnessConfig { trials, dimension, vertices: 12, seed, threads: None });
        check(report.holds(), || format!("d={dimension}: violations {:?}", report.violations))?;
        check(report.failed.is_empty(), || format!("d={dimension}: generator failures {:?}", report.failed))?;
        let total: usize = report.histogram.values().sum();
        check(total == trials, || format!("d={dimension}: {total} of {trials} classified"))?;
        lines.push(format!("d={dimension}: {:?}", report.histogram));
    }
    let took = start.elapsed();
    check(took < Duration::from_secs(300), || format!("took {took:?}"))?;
    Ok(format!("{}, max <= 2, {:.0}s", lines.join("; "), took.as_secs_f64()))
}

fn criterion_3() -> Outcome {
    let mut ks = Vec::new();
    for (r1, r2) in [(1, 1), (3, 5), (4, 5), (6, 2), (8, 8)] {
        let p1 = TorusCurve::new(PlCircleMap::linear(1, q(0, 1), r1), PlCircleMap::linear(3, q(0, 1), r1));
        let p2 = TorusCurve::new(PlCircleMap::linear(5, q(0, 1), r2), PlCircleMap::linear(2, q(0, 1), r2));
        let out = compose_relation_curves(&p1, &p2).map_err(|e| e.to_string())?;
        let deg = torus_degree(&out.curve);
        check(out.k % 2 == 1 && out.k % 3 == 0 && out.k % 5 == 0, || format!("k = {}", out.k))?;
        check(deg == (out.k / 3, 2 * out.k / 5), || format!("k = {}, degree {deg:?}", out.k))?;
        if out.k == 15 {
            check(deg == (5, 6), || format!("degree {deg:?} at k = 15"))?;
        }
        ks.push(out.k);
    }
    check(ks.contains(&15), || format!("k values {ks:?}"))?;
    Ok(format!("k = {ks:?}, degree (5, 6) at k = 15"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..1000 {
        let (a, b) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        let f = random_map(&mut rng, a);
        let g = random_map(&mut rng, b);
        let h = compose(&f, &g);
        check(degree(&h) == a * b, || format!("pair {i}: degree {} vs {a}*{b}", degree(&h)))?;
        let sampled = sampled_degree(&f, &g);
        check(sampled == a * b, || format!("pair {i}: sampled degree {sampled} vs {a}*{b}"))?;
    }
    let mut found = 0;
    while found < 1000 {
        let d = rng.gen_range(-4..=4);
        if d == 1 {
            continue;
        }
        let f = random_map(&mut rng, d);
        let fixed = f.fixed_points();
        check(!fixed.is_empty(), || format!("degree {d} map without fixed point: {f:?}"))?;
        check(fixed.iter().all(|t| f.eval(t) == *t), || "reported point is not fixed".into())?;
        found += 1;
    }
    Ok("1000 compositions multiply degrees; 1000 maps of degree != 1 have exact fixed points".into())
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut tested = 0;
    while tested < 500 {
        let (a, b) = (rng.gen_range(-4..=4), rng.gen_range(-4..=4));
        if a == b {
            continue;
        }
        let c = TorusCurve::new(random_map(&mut rng, a), random_map(&mut rng, b));
        let hits = diagonal_intersections(&c);
        check(!hits.is_empty(), || format!("degrees ({a}, {b}) missed the diagonal"))?;
        for t in &hits {
            let (x, y) = c.eval(t);
            check(x == y, || format!("t = {t} is not on the diagonal"))?;
        }
        tested += 1;
    }
    for i in 0..500 {
        let d = rng.gen_range(-4..=4);
        let f = random_map(&mut rng, d);
        let shifted =
            PlCircleMap::new(f.breakpoints().to_vec(), f.lift_values().iter().map(|v| v + q(1, 2)).collect(), d)
                .map_err(|e| e.to_string())?;
        let hits = diagonal_intersections(&TorusCurve::new(f, shifted));
        check(hits.is_empty(), || format!("half-turn curve {i} met the diagonal at {hits:?}"))?;
    }
    Ok("500 unequal-degree curves hit the diagonal; 500 half-turn offsets miss it".into())
}

fn random_graph(rng: &mut ChaCha8Rng, circle: bool) -> Graph {
    loop {
        let len = rng.gen_range(2..7);
        let mut values = vec![q(0, 1)];
        for _ in 1..len {
            let step = q(rng.gen_range(1..8), 16) * q(if rng.gen_bool(0.5) { 1 } else { -1 }, 1);
            values.push(values.last().unwrap() + step);
        }
        let graph = if circle {
            MappedGraph::circle_cycle(&values, rng.gen_range(-1..=1))
        } else if rng.gen_bool(0.5) {
            MappedGraph::line_path(values)
        } else {
            let edges = (0..len).map(|i| (i, (i + 1) % len)).collect();
            MappedGraph::line(values, edges)
        };
        if let Ok(g) = graph {
            return g;
        }
    }
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checked = 0;
    for i in 0..500 {
        let circle = i % 3 == 0;
        let g1 = random_graph(&mut rng, circle);
        let g2 = random_graph(&mut rng, circle);
        let product = fiber_product(&g1, &g2).map_err(|e| format!("product {i}: {e}"))?;
        for (v, (p, r)) in product.points.iter().enumerate() {
            let expected = match (p, r) {
                (GraphPoint::Vertex(u), GraphPoint::Edge { .. }) => g1.degree(*u),
                (GraphPoint::Edge { .. }, GraphPoint::Vertex(w)) => g2.degree(*w),
                _ => continue,
            };
            let found = product.graph.degree(v);
            check(found == expected, || format!("product {i}, vertex {v}: degree {found}, factor degree {expected}"))?;
            checked += 1;
        }
    }
    check(checked > 0, || "no vertex had exactly one factor vertex".into())?;
    Ok(format!("500 products, {checked} single-factor vertices match"))
}

fn criterion_7() -> Outcome {
    let eps = q(1, 1000);
    let mut vertices = 0;
    for n in [6, 32] {
        let c = gen_planar_circle::<Rational>(3, n).map_err(|e| e.to_string())?;
        for axis in [0, 1] {
            let split = split_top_bottom(&c, Axis::new(axis)).map_err(|e| e.to_string())?;
            let r = build_relation_curve(&c, &split, &eps).map_err(|e| e.to_string())?;
            let deg = torus_degree(&r.curve);
            check(deg == (1, -1), || format!("n={n} axis {}: degree {deg:?}", axis + 1))?;
            for t in r.curve.breakpoints() {
                let (x, y) = r.curve.eval(t);
                let gap = split.shadow_parameter(&c, &r.curve_parameter(&x))
                    - split.shadow_parameter(&c, &r.curve_parameter(&y));
                check(gap.abs() <= eps, || format!("n={n} axis {}: gap {gap} at t = {t}", axis + 1))?;
                vertices += 1;
            }
        }
    }
    Ok(format!("degree (1, -1) on axes 1 and 2, band bound at {vertices} vertices"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut ks = std::collections::BTreeSet::new();
    for i in 0..20 {
        let psi: [Torus; 3] = std::array::from_fn(|_| {
            let res = rng.gen_range(1..7);
            let x = random_map(&mut rng, 1);
            let y = PlCircleMap::linear(-1, q(rng.gen_range(0..97), 97), res);
            TorusCurve::new(x, y)
        });
        for p in &psi {
            check(torus_degree(p) == (1, -1), || format!("triple {i}: input degree {:?}", torus_degree(p)))?;
        }
        let cert = fixed_point_of_triple(&psi).map_err(|e| format!("triple {i}: {e}"))?;
        let chain = &cert.chain;
        check(chain.inner_degree == (-chain.inner_k, -chain.inner_k), || {
            format!("triple {i}: inner degree {:?}, k {}", chain.inner_degree, chain.inner_k)
        })?;
        check(chain.degree == (chain.k, -chain.k) && chain.k % 2 == 1, || {
            format!("triple {i}: degree {:?}, k {}", chain.degree, chain.k)
        })?;
        check(chain.link_gaps[0].is_zero() && chain.link_gaps[2].is_zero(), || {
            format!("triple {i}: gaps {:?}", chain.link_gaps)
        })?;
        check(chain.link_gaps[1] <= q(1, 1_000_000), || format!("triple {i}: middle gap {}", chain.link_gaps[1]))?;
        ks.insert(chain.k);
    }
    Ok(format!("20 triples: degree (k, -k) with k odd, k in {ks:?}, diagonal point traced back"))
}

fn criterion_9() -> Outcome {
    let c = gen_tree_shadow_curve::<Rational>();
    check(validate_simple(&c), || "fixture is not simple".into())?;
    let tags: Vec<TopologyTag> = shadow_classes(&c).map_err(|e| e.to_string())?.iter().map(|c| c.tag()).collect();
    check(tags == vec![TopologyTag::Tree; 3], || format!("{tags:?}"))?;
    Ok(format!("{} vertices, simple, [Tree, Tree, Tree]", c.len()))
}

fn criterion_10() -> Outcome {
    let mut tested = 0;
    for n in [6, 32] {
        let c = gen_planar_circle::<Rational>(3, n).map_err(|e| e.to_string())?;
        let flips: Vec<CircleMap> =
            (0..2).map(|i| flip_map_demo(&c, Axis::new(i)).map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
        for (i, f) in flips.iter().enumerate() {
            check(f.degree() == -1, || format!("n={n} axis {}: degree {}", i + 1, f.degree()))?;
            let split = split_top_bottom(&c, Axis::new(i)).map_err(|e| e.to_string())?;
            let nn = q(n as i64, 1);
            let mut want = vec![split.a.clone() / nn.clone(), split.a_tilde.clone() / nn];
            want.sort();
            check(f.fixed_points() == want, || format!("n={n} axis {}: fixed points {:?}", i + 1, f.fixed_points()))?;
            let ff = compose(f, f);
            check(ff.breakpoints().iter().all(|t| ff.eval(t) == *t), || {
                format!("n={n} axis {}: not an involution", i + 1)
            })?;
        }
        for word in [&[0][..], &[0, 1], &[1, 0, 1], &[0, 1, 0, 1], &[1, 1, 0, 1, 0]] {
            let mut h = PlCircleMap::identity();
            for &i in word {
                h = compose(&flips[i], &h);
            }
            let want = if word.len() % 2 == 0 { 1 } else { -1 };
            check(degree(&h) == want, || format!("n={n} word {word:?}: degree {}", degree(&h)))?;
            tested += 1;
        }
    }
    Ok(format!(
        "flips on axes 1 and 2 are degree -1 involutions with 2 fixed points; {tested} compositions have degree (-1)^m"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("planar circle shadows", criterion_1),
        ("at most two simple-path shadows (random harness)", criterion_2),
        ("composition degree (1,3) with (5,2)", criterion_3),
        ("degree algebra and fixed points", criterion_4),
        ("torus curves and the diagonal", criterion_5),
        ("fiber product vertex degrees", criterion_6),
        ("relation curves of the planar circle", criterion_7),
        ("synthetic triple composition", criterion_8),
        ("tree-shadow fixture", criterion_9),
        ("flip maps", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("[PASS] {:>2}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2}. {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
