//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` are reported as FAIL without failing
//! the run, provided they fail for exactly the recorded reason.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use frftkit::approx::fiber::{gramian_field, FiberField, FiberGrid, OffsetWindow};
use frftkit::approx::sinc::{display_coefficients, sinc_family_fibers};
use frftkit::approx::sis::{fit_sis, project, SisModel};
use frftkit::frft::{chirp_modulate, frft, frft_direct_oracle, inverse_frft, ChirpSign};
use frftkit::linalg::{hermitian_eig, CMatrix};
use frftkit::multitile::{is_multitile, lattice_offsets, optimal_multitile, partition_multitile, TileSet};
use frftkit::ops::{circular_shift, theta_convolve, theta_dilate, theta_modulate, theta_translate, ShiftVector};
use frftkit::scatter::{
    covariance_bound, covariance_deviation, energy_profile, invariance_bound, invariance_deviation, standard_layers,
    LayerConfig, Nonlinearity, Pooling,
};
use frftkit::{l2_norm, Grid, SampledSignal, ThetaParam};
use frftkit_cli::args::Family;
use frftkit_cli::commands::approx_table;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Criterion = (usize, &'static str, fn() -> Outcome);

/// Criterion number and the marker its failure message must contain.
const KNOWN_FAILURES: &[(usize, &str)] = &[(4, "2D phi_3 coefficient 3")];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Duration, body: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    body()?;
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_complex(r: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

/// Random angle with `|sin θ| ≥ sin 0.3`, either sign.
fn random_theta(r: &mut ChaCha8Rng) -> ThetaParam {
    let t: f64 = r.gen_range(0.3..PI - 0.3);
    ThetaParam::new(if r.gen_bool(0.5) { t } else { -t }).unwrap()
}

/// Gaussian-enveloped random polynomial, small at the grid edge.
fn random_signal(grid: Grid, r: &mut ChaCha8Rng) -> SampledSignal {
    let c: Vec<Complex64> = (0..4).map(|_| random_complex(r)).collect();
    let centre = [r.gen_range(-0.5..0.5), r.gen_range(-0.5..0.5)];
    SampledSignal::from_fn(grid, |[a, b]| {
        let (x, y) = (a - centre[0], b - centre[1]);
        let env = (-PI * (x * x + y * y) / 2.0).exp();
        c.iter()
            .enumerate()
            .map(|(k, &ck)| ck * (x + 0.5 * y).powi(k as i32))
            .sum::<Complex64>()
            * env
    })
}

fn min_matrix(power: i32) -> Vec<Vec<f64>> {
    (1..=4)
        .map(|i| (1..=4).map(|j| (i.min(j) as f64).powi(power)).collect())
        .collect()
}

fn criterion_1() -> Outcome {
    timed(Duration::from_secs(1), || {
        for (n_dims, power) in [(1usize, 1), (2, 2)] {
            for theta in [PI / 3.0, -PI / 4.0, 2.0] {
                let t = ThetaParam::new(theta).unwrap();
                let grid = FiberGrid::new(t, n_dims, 8, OffsetWindow::Symmetric(4)).unwrap();
                let gram = gramian_field(&sinc_family_fibers(4, &grid).unwrap()).unwrap();
                let expected = min_matrix(power);
                for (w, g) in gram.matrices().iter().enumerate() {
                    for (i, row) in expected.iter().enumerate() {
                        for (j, &e) in row.iter().enumerate() {
                            let v = g[(i, j)];
                            ensure((v.re - e).abs() < 1e-10 && v.im.abs() < 1e-10, || {
                                format!("{n_dims}D θ={theta} ω#{w} G[{i}][{j}] = {v}, expected {e}")
                            })?;
                        }
                    }
                }
            }
        }
        Ok(())
    })
}

fn criterion_2() -> Outcome {
    let eig = hermitian_eig(&CMatrix::from_real_rows(&min_matrix(2))).map_err(|e| e.to_string())?;
    for (got, want) in eig.values.iter().zip([23.8417, 3.76815, 1.70448, 0.6857]) {
        ensure(((got - want) / want).abs() < 1e-3, || {
            format!("2D eigenvalue {got}, expected {want}")
        })?;
    }
    // Closed forms evaluated as plain scalars.
    let a = (3f64.sqrt() / 37.0).atan() / 3.0;
    let (s7, s21) = (7f64.sqrt(), 21f64.sqrt());
    let mut oracle = [
        3.0 + 2.0 * s7 * a.cos(),
        1.0,
        3.0 + s21 * a.sin() - s7 * a.cos(),
        3.0 - s21 * a.sin() - s7 * a.cos(),
    ];
    oracle.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let eig = hermitian_eig(&CMatrix::from_real_rows(&min_matrix(1))).map_err(|e| e.to_string())?;
    for (got, want) in eig.values.iter().zip(oracle) {
        ensure((got - want).abs() < 1e-10, || {
            format!("1D eigenvalue {got}, closed form {want}")
        })?;
    }
    let sum: f64 = eig.values.iter().sum();
    ensure((sum - 10.0).abs() < 1e-10, || format!("1D eigenvalue sum {sum}"))
}

fn criterion_3() -> Outcome {
    timed(Duration::from_secs(5), || {
        for (p, q) in [(1, 3), (1, 4)] {
            let t = ThetaParam::from_fraction(p, q).unwrap();
            let csv = approx_table(Family::Sinc2d, 4, &t).map_err(|e| e.to_string())?;
            let rows: Vec<(usize, f64)> = csv
                .lines()
                .skip(1)
                .map(|l| {
                    let (a, b) = l.split_once(',').expect("two columns");
                    (a.parse().unwrap(), b.parse().unwrap())
                })
                .collect();
            ensure(rows.len() == 3, || format!("expected 3 rows, got {}", rows.len()))?;
            let s2 = t.sin_abs().powi(2);
            for ((ell, got), base) in rows.into_iter().zip([6.1583, 2.3902, 0.6857]) {
                let want = base * s2;
                ensure(((got - want) / want).abs() < 1e-3, || {
                    format!("θ={p}π/{q} ℓ={ell}: {got}, expected {want}")
                })?;
            }
        }
        Ok(())
    })
}

fn criterion_4() -> Outcome {
    let displays_1d: [[f64; 4]; 3] = [
        [0.1206, 0.4534, 0.9162, 1.3892],
        [-1.0, -2.0, 0.0, 4.0],
        [2.3473, -1.6304, -6.1925, 6.1284],
    ];
    let displays_2d: [[f64; 4]; 3] = [
        [0.0184, 0.2855, 1.3020, 3.2768],
        [-0.1683, -2.1565, -3.9765, 8.2424],
        [1.0510, 9.4166, 21.4173, 12.2553],
    ];
    let mut mismatches = Vec::new();
    for (n_dims, displays) in [(1usize, displays_1d), (2, displays_2d)] {
        let t = ThetaParam::new(PI / 3.0).unwrap();
        let grid = FiberGrid::new(t, n_dims, 8, OffsetWindow::Symmetric(4)).unwrap();
        let model = fit_sis(&sinc_family_fibers(4, &grid).unwrap(), 3).map_err(|e| e.to_string())?;
        for w in 0..grid.num_omegas() {
            for (i, display) in displays.iter().enumerate() {
                let c = display_coefficients(model.eigen(w), i, n_dims);
                ensure(c.iter().all(|z| z.im.abs() < 1e-9), || {
                    format!("{n_dims}D phi_{} not real: {c:?}", i + 1)
                })?;
                // Global sign per generator: the orientation agreeing on more coefficients.
                let agree = |sign: f64| {
                    c.iter()
                        .zip(display)
                        .filter(|(z, d)| (sign * z.re - *d).abs() < 1e-3)
                        .count()
                };
                let sign = if agree(1.0) >= agree(-1.0) { 1.0 } else { -1.0 };
                for (j, (z, d)) in c.iter().zip(display).enumerate() {
                    let got = sign * z.re;
                    if (got - d).abs() >= 1e-3 {
                        let msg = format!(
                            "{n_dims}D phi_{} coefficient {}: computed {got:.5}, display {d}",
                            i + 1,
                            j + 1
                        );
                        if !mismatches.contains(&msg) {
                            mismatches.push(msg);
                        }
                    }
                }
            }
        }
    }
    ensure(mismatches.is_empty(), || mismatches.join("; "))
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let cases = [
        (Grid::new(1, 256, 8.0).unwrap(), 1e-8),
        (Grid::new(2, 32, 3.0).unwrap(), 1e-8),
    ];
    for (grid, tol) in cases {
        for theta in [PI / 3.0, -2.0 * PI / 5.0, 1.0, 2.5] {
            let t = ThetaParam::new(theta).unwrap();
            let f = random_signal(grid, &mut r);
            let fast = frft(&f, &t);
            let oracle = frft_direct_oracle(&f, &t).map_err(|e| e.to_string())?;
            let d = fast.max_abs_diff(&oracle);
            ensure(d < tol, || format!("{}D θ={theta}: oracle gap {d:e}", grid.n_dims()))?;
            let nf = l2_norm(&f);
            let parseval = (l2_norm(&fast) - nf).abs() / nf;
            ensure(parseval < 1e-8, || {
                format!("{}D θ={theta}: Parseval gap {parseval:e}", grid.n_dims())
            })?;
            let back = inverse_frft(&fast, &t);
            let rt = back.max_abs_diff(&f) / f.max_abs();
            ensure(rt < 1e-8, || {
                format!("{}D θ={theta}: round trip gap {rt:e}", grid.n_dims())
            })?;
        }
    }
    // Quarter turn against a direct Fourier sum and the Gaussian closed form.
    let grid = Grid::new(1, 256, 8.0).unwrap();
    let quarter = ThetaParam::new(PI / 2.0).unwrap();
    let f = random_signal(grid, &mut r);
    let out = frft(&f, &quarter);
    let og = *out.grid();
    for k in 0..og.len() {
        let w = og.point(k)[0];
        let direct: Complex64 = (0..grid.len())
            .map(|j| f.values()[j] * Complex64::cis(-2.0 * PI * w * grid.point(j)[0]))
            .sum::<Complex64>()
            * grid.spacing();
        let gap = (direct - out.values()[k]).norm();
        ensure(gap < 1e-10, || format!("quarter turn ω={w}: gap {gap:e}"))?;
    }
    let gauss = SampledSignal::from_fn(grid, |[x, _]| Complex64::new((-PI * x * x).exp(), 0.0));
    let out = frft(&gauss, &quarter);
    for k in 0..og.len() {
        let w = og.point(k)[0];
        let gap = (out.values()[k] - (-PI * w * w).exp()).norm();
        ensure(gap < 1e-10, || format!("Gaussian transform at ω={w}: gap {gap:e}"))?;
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let grid = Grid::new(1, 256, 8.0).unwrap();
    let fine = Grid::new(1, 1024, 8.0).unwrap();
    for case in 0..50 {
        let t = random_theta(&mut r);
        let f = random_signal(grid, &mut r);
        let g = random_signal(grid, &mut r);
        let s = ShiftVector::from_steps(&grid, &[r.gen_range(-6..=6)]).unwrap();
        let label = |what: &str, gap: f64| format!("case {case} θ={}: {what} gap {gap:e}", t.theta());

        // Chirp relation.
        let lhs = chirp_modulate(&theta_translate(&f, &s, &t).unwrap(), &t, ChirpSign::Forward);
        let rhs = circular_shift(&chirp_modulate(&f, &t, ChirpSign::Forward), &s)
            .unwrap()
            .scale(Complex64::cis(PI * s.norm_sq() * t.cot()));
        let gap = lhs.max_abs_diff(&rhs);
        ensure(gap < 1e-7, || label("chirp relation", gap))?;

        // Convolution theorem.
        let conv = theta_convolve(&f, &g, &t).unwrap();
        let lhs = frft(&conv, &t);
        let (ff, fg) = (frft(&f, &t), frft(&g, &t));
        let og = *lhs.grid();
        let gap = (0..og.len())
            .map(|i| {
                let rhs = Complex64::cis(-PI * og.norm_sq(i) * t.cot()) * ff.values()[i] * fg.values()[i];
                (lhs.values()[i] - rhs).norm()
            })
            .fold(0.0, f64::max);
        ensure(gap < 1e-7, || label("convolution theorem", gap))?;

        // Translation-modulation exchange.
        let lhs = frft(&theta_translate(&f, &s, &t).unwrap(), &t);
        let rhs = theta_modulate(&ff, &s.scaled(-1.0), &t).unwrap();
        let gap = lhs.max_abs_diff(&rhs);
        ensure(gap < 1e-7, || label("translation-modulation exchange", gap))?;

        // Convolution commutes with θ-translation.
        let lhs = theta_translate(&conv, &s, &t).unwrap();
        let rhs = theta_convolve(&theta_translate(&f, &s, &t).unwrap(), &g, &t).unwrap();
        let gap = lhs.max_abs_diff(&rhs);
        ensure(gap < 1e-7, || label("convolution-translation", gap))?;

        // Dilation-translation exchange with t/s on the grid.
        let h = random_signal(fine, &mut r);
        let scale = [2.0, 4.0][r.gen_range(0..2)];
        let step = r.gen_range(-3..=3) * scale as isize;
        let shift = ShiftVector::from_steps(&fine, &[step]).unwrap();
        let small = shift.scaled(1.0 / scale);
        let lhs = theta_dilate(&theta_translate(&h, &shift, &t).unwrap(), scale, &t)
            .unwrap()
            .scale(Complex64::cis(-PI * shift.norm_sq() * t.cot()));
        let rhs = theta_translate(&theta_dilate(&h, scale, &t).unwrap(), &small, &t)
            .unwrap()
            .scale(Complex64::cis(-PI * small.norm_sq() * t.cot()));
        let gap = lhs.max_abs_diff(&rhs);
        ensure(gap < 1e-7, || label("dilation-translation exchange", gap))?;
    }
    Ok(())
}

fn max_k(layers: &[LayerConfig]) -> f64 {
    layers.iter().map(|l| l.decay().k).fold(0.0, f64::max)
}

fn criterion_7() -> Outcome {
    let mut r = rng(7);
    let grid = Grid::new(1, 256, 16.0).unwrap();
    let signals: Vec<SampledSignal> = (0..2).map(|_| random_signal(grid, &mut r)).collect();
    let mut cases = 0;
    for f in &signals {
        let nf = l2_norm(f);
        for theta in [PI / 6.0, PI / 3.0, 2.0 * PI / 5.0] {
            let t = ThetaParam::new(theta).unwrap();
            let layers = standard_layers(&grid, &t, 4, 2.0, Nonlinearity::Shrink(0.01), Pooling::Identity, 0.2)
                .map_err(|e| e.to_string())?;
            let k_const = max_k(&layers);
            for steps in [1isize, 4, 16] {
                let s = ShiftVector::from_steps(&grid, &[steps]).unwrap();
                for k in 1..=3 {
                    let factors = vec![2.0; k];
                    let dev = invariance_deviation(f, &s, &layers, k, &t).map_err(|e| e.to_string())?;
                    let bound = invariance_bound(s.norm(), &factors, k_const, nf, &t);
                    ensure(dev <= bound, || {
                        format!("invariance θ={theta} Δ×{steps} k={k}: {dev:e} > {bound:e}")
                    })?;
                    let dev = covariance_deviation(f, &s, &layers, k, &t).map_err(|e| e.to_string())?;
                    let bound = covariance_bound(s.norm(), &factors, k_const, nf, &t);
                    ensure(dev <= bound, || {
                        format!("covariance θ={theta} Δ×{steps} k={k}: {dev:e} > {bound:e}")
                    })?;
                    cases += 2;
                }
            }
            let profile = energy_profile(f, &layers, 3, &t).map_err(|e| e.to_string())?;
            let level0 = (profile[0] - nf * nf).abs() / (nf * nf);
            ensure(level0 < 1e-12, || format!("level-0 energy off by {level0:e}"))?;
            ensure(profile.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)), || {
                format!("profile increases: {profile:?}")
            })?;
        }
    }
    ensure(cases >= 100, || format!("only {cases} cases"))?;
    // Deviation at depth 1 shrinks as the pooling factor grows.
    let t = ThetaParam::new(PI / 3.0).unwrap();
    let s = ShiftVector::from_steps(&grid, &[8]).unwrap();
    let devs = (1..=6)
        .map(|n| {
            let layers = standard_layers(
                &grid,
                &t,
                2,
                2f64.powi(n),
                Nonlinearity::Identity,
                Pooling::Identity,
                0.2,
            )
            .map_err(|e| e.to_string())?;
            invariance_deviation(&signals[0], &s, &layers, 1, &t).map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<f64>, String>>()?;
    ensure(devs.windows(2).all(|w| w[1] < w[0]), || {
        format!("not decreasing: {devs:?}")
    })?;
    ensure(devs[5] < 1e-3 * devs[0], || format!("weak decrease: {devs:?}"))
}

fn random_instance(r: &mut ChaCha8Rng, m: usize, n_dims: usize, bound: usize) -> Vec<FiberField> {
    let t = random_theta(r);
    let omegas = 8;
    let grid = FiberGrid::new(t, n_dims, omegas, OffsetWindow::Symmetric(bound)).unwrap();
    (0..m)
        .map(|_| {
            let data = (0..grid.num_omegas())
                .map(|_| (0..grid.window_len()).map(|_| random_complex(r)).collect())
                .collect();
            FiberField::new(grid, data).unwrap()
        })
        .collect()
}

fn fiber_energy(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum()
}

/// Orthonormal basis of a random `ell`-dimensional subspace of `C^len`.
fn random_subspace(r: &mut ChaCha8Rng, ell: usize, len: usize) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    while basis.len() < ell {
        let mut v: Vec<Complex64> = (0..len).map(|_| random_complex(r)).collect();
        for q in &basis {
            let c: Complex64 = v.iter().zip(q).map(|(a, b)| a * b.conj()).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= c * qi;
            }
        }
        let n = fiber_energy(&v).sqrt();
        if n > 1e-6 {
            basis.push(v.iter().map(|x| x / n).collect());
        }
    }
    basis
}

fn fitted_models(seed: u64, count: usize) -> Vec<(Vec<FiberField>, SisModel)> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n_dims = r.gen_range(1..=2);
            let bound = if n_dims == 1 { r.gen_range(1..=2) } else { 1 };
            let m = r.gen_range(2..=5);
            let fibers = random_instance(&mut r, m, n_dims, bound);
            let ell = r.gen_range(1..=m.min(fibers[0].grid().window_len()));
            let model = fit_sis(&fibers, ell).unwrap();
            (fibers, model)
        })
        .collect()
}

fn criterion_8() -> Outcome {
    let mut r = rng(88);
    let models = fitted_models(8, 60);
    for (case, (fibers, model)) in models.iter().enumerate() {
        let grid = model.grid();
        let projections: Vec<FiberField> = fibers.iter().map(|f| project(f, model).unwrap()).collect();
        for w in 0..grid.num_omegas() {
            let fitted: f64 = fibers
                .iter()
                .zip(&projections)
                .map(|(f, p)| {
                    f.fiber(w)
                        .iter()
                        .zip(p.fiber(w))
                        .map(|(a, b)| (a - b).norm_sqr())
                        .sum::<f64>()
                })
                .sum();
            let tail = model.tail_sum(w);
            ensure((fitted - tail).abs() < 1e-8, || {
                format!("case {case} ω#{w}: error {fitted} vs tail {tail}")
            })?;
            for _ in 0..200 {
                let basis = random_subspace(&mut r, model.ell(), grid.window_len());
                let err: f64 = fibers
                    .iter()
                    .map(|f| {
                        let x = f.fiber(w);
                        let kept: f64 = basis
                            .iter()
                            .map(|q| x.iter().zip(q).map(|(a, b)| a * b.conj()).sum::<Complex64>().norm_sqr())
                            .sum();
                        fiber_energy(x) - kept
                    })
                    .sum();
                ensure(fitted <= err + 1e-10, || {
                    format!("case {case} ω#{w}: random subspace beats fit, {err} < {fitted}")
                })?;
            }
        }
    }
    Ok(())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

fn criterion_9() -> Outcome {
    let mut r = rng(9);
    let mut instances = 0;
    for n_dims in 1..=2 {
        for bound in 0..=2 {
            for m in 1..=3 {
                for _ in 0..3 {
                    let fibers = random_instance(&mut r, m, n_dims, bound.max(1));
                    let offsets = lattice_offsets(n_dims, bound);
                    let fg = *fibers[0].grid();
                    for ell in 1..=3.min(offsets.len()) {
                        let model = optimal_multitile(&fibers, ell, bound).map_err(|e| e.to_string())?;
                        ensure(is_multitile(&model.tile, ell), || {
                            format!("output is not a {ell}-multi-tile")
                        })?;
                        for w in 0..fg.num_omegas() {
                            let energy: Vec<f64> = offsets
                                .iter()
                                .map(|&k| {
                                    let p = fg.offset_index(k).unwrap();
                                    fibers.iter().map(|f| f.fiber(w)[p].norm_sqr()).sum()
                                })
                                .collect();
                            let captured = |set: &[usize]| set.iter().map(|&i| energy[i]).sum::<f64>();
                            let best = combinations(offsets.len(), ell).into_iter().fold(
                                (f64::NEG_INFINITY, Vec::new()),
                                |acc, c| {
                                    let e = captured(&c);
                                    if e > acc.0 {
                                        (e, c)
                                    } else {
                                        acc
                                    }
                                },
                            );
                            let chosen: Vec<usize> = model.selections[w]
                                .iter()
                                .map(|k| offsets.iter().position(|o| o == k).unwrap())
                                .collect();
                            ensure(captured(&chosen) == best.0, || {
                                format!(
                                    "{n_dims}D N={bound} m={m} ℓ={ell} ω#{w}: {chosen:?} vs exhaustive {:?}",
                                    best.1
                                )
                            })?;
                        }
                        instances += 1;
                    }
                }
            }
        }
    }
    ensure(instances > 0, || "no instances".into())?;
    for case in 0..100 {
        let n_dims = r.gen_range(1..=2);
        let bound = r.gen_range(0..=2);
        let omegas = r.gen_range(1..=4);
        let len = lattice_offsets(n_dims, bound).len();
        let ell = r.gen_range(1..=len.min(4));
        let t = random_theta(&mut r);
        let mut tile = TileSet::empty(t, n_dims, omegas, bound).unwrap();
        let offsets = tile.offsets();
        for cell in 0..tile.num_cells() {
            let picks = rand::seq::index::sample(&mut r, len, ell);
            for i in picks.iter() {
                tile.set(cell, offsets[i], true).unwrap();
            }
        }
        let parts = partition_multitile(&tile, ell).map_err(|e| format!("case {case}: {e}"))?;
        ensure(parts.len() == ell, || format!("case {case}: {} parts", parts.len()))?;
        for (a, pa) in parts.iter().enumerate() {
            ensure(is_multitile(pa, 1), || format!("case {case}: part {a} does not tile"))?;
            for pb in &parts[a + 1..] {
                ensure(pa.is_disjoint(pb), || format!("case {case}: parts overlap"))?;
            }
        }
        let union = parts[1..].iter().try_fold(parts[0].clone(), |u, p| u.union(p)).unwrap();
        ensure(union == tile, || format!("case {case}: parts do not cover the tile"))?;
        let mut broken = tile.clone();
        broken.set(0, tile.cell_offsets(0)[0], false).unwrap();
        ensure(partition_multitile(&broken, ell).is_err(), || {
            format!("case {case}: accepted a non-multi-tile")
        })?;
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    let mut models: Vec<SisModel> = fitted_models(10, 60).into_iter().map(|(_, m)| m).collect();
    for n_dims in 1..=2 {
        let t = ThetaParam::new(PI / 3.0).unwrap();
        let grid = FiberGrid::new(t, n_dims, 8, OffsetWindow::Symmetric(4)).unwrap();
        for ell in 1..=3 {
            models.push(fit_sis(&sinc_family_fibers(4, &grid).unwrap(), ell).unwrap());
        }
    }
    for (case, model) in models.iter().enumerate() {
        for w in 0..model.grid().num_omegas() {
            let s = model.frame_operator(w);
            let idem = s.matmul(&s).sub(&s).frobenius_norm();
            let herm = s.hermitian_defect();
            let rank = model.sigma(w).iter().filter(|&&x| x > 0.0).count() as f64;
            let trace = s.trace();
            ensure(idem < 1e-8 && herm < 1e-8, || {
                format!("case {case} ω#{w}: ‖S²-S‖ = {idem:e}, defect {herm:e}")
            })?;
            ensure((trace.re - rank).abs() < 1e-8 && trace.im.abs() < 1e-8, || {
                format!("case {case} ω#{w}: trace {trace} vs rank {rank}")
            })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "Gramian golden", criterion_1),
        (2, "eigenvalue golden", criterion_2),
        (3, "error table", criterion_3),
        (4, "generator coefficients", criterion_4),
        (5, "transform correctness", criterion_5),
        (6, "operator identities", criterion_6),
        (7, "scattering bounds", criterion_7),
        (8, "Eckart-Young optimality", criterion_8),
        (9, "multi-tile optimality", criterion_9),
        (10, "Parseval frame generators", criterion_10),
    ];
    let mut unexpected = Vec::new();
    for (n, name, run) in criteria {
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == n).map(|(_, marker)| *marker);
        match (run(), known) {
            (Ok(()), None) => println!("criterion {n}: PASS ({name})"),
            (Ok(()), Some(_)) => {
                println!("criterion {n}: PASS ({name}), but it is listed as a known failure");
                unexpected.push(n);
            }
            (Err(msg), Some(marker)) if msg.contains(marker) && !msg.contains("; ") => {
                println!("criterion {n}: FAIL ({name}; known: {msg})");
            }
            (Err(msg), _) => {
                println!("criterion {n}: FAIL ({name}: {msg})");
                unexpected.push(n);
            }
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("unexpected acceptance outcomes: {unexpected:?}");
        ExitCode::FAILURE
    }
}
