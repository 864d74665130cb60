//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vortex_atlas::atlas::{build_diagram, threshold_table, PitchforkKind};
use vortex_atlas::dynamics::{hamiltonian, integrate, momentum_map, vector_field};
use vortex_atlas::equilibria::{
    angular_velocity, angular_velocity_generic, branch_c2v_2R2p, branch_c2v_RRp2p,
    branch_c2v_RmRmp_root, c2v_quartic, make_equatorial_pm_ring, make_family,
    make_tetrahedral_pair, re_residual, ring_angular_velocity, two_ring_phase_test, BranchPoint,
    Family, FamilyDescriptor, RingPhase,
};
use vortex_atlas::sphere::{Configuration, UnitVector3, Vortex};
use vortex_atlas::stability::{
    analyze, analyze_small, block_coupling, full_linearization_oracle, hessian_closed_form,
    hessian_fd, slice_basis, spectrum_mismatch, Verdict,
};

struct Outcome {
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
            notes: Vec::new(),
        }
    }
}

fn ring_families() -> [(Family, usize); 4] {
    [
        (Family::DNh2R, 0),
        (Family::DNdRRp, 0),
        (Family::DNh2R, 2),
        (Family::DNdRRp, 2),
    ]
}

fn sup(v: &[nalgebra::Vector3<f64>]) -> f64 {
    v.iter().map(|w| w.amax()).fold(0.0, f64::max)
}

fn fixed_equilibria() -> Outcome {
    let mut worst = 0.0f64;
    for n in 2..=6 {
        let c = make_equatorial_pm_ring(n).unwrap();
        worst = worst.max(sup(&vector_field(&c).unwrap()));
    }
    worst = worst.max(sup(&vector_field(&make_tetrahedral_pair()).unwrap()));
    Outcome::new(worst < 1e-12, format!("max ‖X_H‖∞ = {worst:.2e} (< 1e-12)"))
}

fn random_configuration(rng: &mut ChaCha8Rng) -> Configuration {
    loop {
        let vs: Vec<Vortex> = (0..6)
            .map(|k| {
                let p = loop {
                    let v = nalgebra::Vector3::new(
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0f64),
                    );
                    if (0.1..1.0).contains(&v.norm()) {
                        break v;
                    }
                };
                Vortex::new(
                    UnitVector3::normalize(p).unwrap(),
                    if k < 3 { 1.0 } else { -1.0 },
                )
            })
            .collect();
        if let Ok(c) = Configuration::new(vs, 0) {
            if c.min_chord_distance().0 > 0.2 {
                return c;
            }
        }
    }
}

fn conservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let (mut dh, mut dphi) = (0.0f64, 0.0f64);
    let mut failures = Vec::new();
    for k in 0..20 {
        let c = random_configuration(&mut rng);
        match integrate(&c, 10.0, 1e-10) {
            Ok(t) => {
                let last = t.last().unwrap();
                dh = dh.max((hamiltonian(last).unwrap() - hamiltonian(&c).unwrap()).abs());
                dphi = dphi.max((momentum_map(last) - momentum_map(&c)).amax());
            }
            Err(e) => failures.push(format!("sample {k}: {e}")),
        }
    }
    let mut o = Outcome::new(
        failures.is_empty() && dh < 1e-8 && dphi < 1e-8,
        format!("20 samples, max |ΔH| = {dh:.2e}, max ‖ΔΦ‖∞ = {dphi:.2e} (< 1e-8)"),
    );
    o.notes = failures;
    o
}

fn angular_velocities() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for (fam, kp) in ring_families() {
        for n in 2..=8 {
            for theta in [0.2, 0.5, 0.8, 1.1, 1.4] {
                let d = FamilyDescriptor::new(fam, n, theta, kp);
                let c = make_family(&d).unwrap();
                let xi = ring_angular_velocity(&d).unwrap();
                for i in 0..2 * n {
                    let g = angular_velocity_generic(&c, i).unwrap();
                    worst = worst.max((g - xi).abs());
                    count += 1;
                }
            }
        }
    }
    Outcome::new(
        worst < 1e-10,
        format!("{count} vortex checks, max |ξ_closed − ξ_i| = {worst:.2e} (< 1e-10)"),
    )
}

fn hessian_oracle() -> Outcome {
    let mut worst = 0.0f64;
    for (fam, kp) in ring_families() {
        for n in 2..=6 {
            for theta in [0.3, 0.7, 1.2] {
                let d = FamilyDescriptor::new(fam, n, theta, kp);
                let c = make_family(&d).unwrap();
                let xi = ring_angular_velocity(&d).unwrap();
                let diff = hessian_closed_form(&d).unwrap() - hessian_fd(&c, xi, 1e-5).unwrap();
                worst = worst.max(diff.amax());
            }
        }
    }
    Outcome::new(
        worst < 1e-6,
        format!("120 cases, max |closed − FD| = {worst:.2e} (< 1e-6)"),
    )
}

fn block_structure() -> Outcome {
    let mut coupling = 0.0f64;
    let mut bad_dims = Vec::new();
    for (fam, kp) in ring_families() {
        for n in 2..=8 {
            let mut thetas = vec![0.3, 0.7, 1.2];
            if fam == Family::DNdRRp && kp == 0 {
                thetas.push(PI / 2.0);
            }
            for theta in thetas {
                let d = FamilyDescriptor::new(fam, n, theta, kp);
                coupling = coupling.max(block_coupling(&d).unwrap());
                let mu_zero = theta == PI / 2.0;
                let expect = match (kp, mu_zero) {
                    (2, _) => 4 * n,
                    (_, false) => 4 * n - 4,
                    (_, true) => 4 * n - 6,
                };
                let got = slice_basis(&d).unwrap().len();
                if got != expect {
                    bad_dims.push(format!("{} θ0={theta}: {got} ≠ {expect}", d.label()));
                }
            }
        }
    }
    let mut o = Outcome::new(
        coupling < 1e-9 && bad_dims.is_empty(),
        format!(
            "max relative cross-block coupling = {coupling:.2e} (< 1e-9), {} dimension mismatches",
            bad_dims.len()
        ),
    );
    o.notes = bad_dims;
    o
}

fn small_members() -> Vec<(String, Configuration)> {
    let mut out = Vec::new();
    for x in [-0.6, 0.1, 0.6] {
        if let Ok(p) = branch_c2v_RmRmp_root(x, 1) {
            out.push((format!("C2v(Rm,Rm') x={x}"), p.configuration().unwrap()));
        }
    }
    for x in [0.2, 0.4, 0.6] {
        if let Ok(p) = branch_c2v_RRp2p(x, 0.0, -1) {
            out.push((format!("C2v(R,R') x={x}"), p.configuration().unwrap()));
        }
    }
    for x in [-0.3, 0.0, 0.3] {
        if let Ok(p) = branch_c2v_2R2p(x, 1.0) {
            out.push((format!("C2v(2R,2p) x={x}"), p.configuration().unwrap()));
        }
    }
    out
}

fn spectrum_oracle() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut notes = Vec::new();
    let mut check =
        |name: String, c: &Configuration, xi: f64, slice: Vec<nalgebra::Complex<f64>>| {
            match full_linearization_oracle(c, xi) {
                Ok(full) => {
                    worst = worst.max(spectrum_mismatch(&slice, &full));
                    count += 1;
                }
                Err(e) => notes.push(format!("{name}: {e}")),
            }
        };
    for (fam, kp) in ring_families() {
        for n in 2..=6 {
            for theta in [0.3, 0.7, 1.1] {
                let d = FamilyDescriptor::new(fam, n, theta, kp);
                let rep = analyze(&d).unwrap();
                check(
                    d.label(),
                    &make_family(&d).unwrap(),
                    rep.xi_z,
                    rep.spectrum(),
                );
            }
        }
    }
    for (name, c) in small_members() {
        let xi = angular_velocity(&c).unwrap();
        let rep = analyze_small(&c, xi).unwrap();
        check(name, &c, xi, rep.spectrum());
    }
    let mut o = Outcome::new(
        notes.is_empty() && worst < 1e-6,
        format!("{count} equilibria, max slice/full mismatch = {worst:.2e} (< 1e-6)"),
    );
    o.notes = notes;
    o
}

fn thresholds() -> Outcome {
    let rows = threshold_table(0.005).unwrap();
    let mut notes = Vec::new();
    let mut ok = 0;
    for r in &rows {
        let pass = r.within_tolerance();
        ok += pass as usize;
        let found = match r.theta() {
            Some(t) => format!("{t:.5}"),
            None => "none".into(),
        };
        notes.push(format!(
            "{} {:<14} {:<13} reference {:<6} computed {:<8} |Δ| {} (≤ {})",
            if pass { "ok  " } else { "FAIL" },
            r.label,
            r.reference.transition.as_str(),
            r.reference.value,
            found,
            r.abs_delta().map_or("-".into(), |d| format!("{d:.4}")),
            r.reference.tol,
        ));
    }
    let mut o = Outcome::new(
        ok == rows.len(),
        format!("{ok}/{} thresholds within tolerance", rows.len()),
    );
    o.notes = notes;
    o
}

fn all_unstable(
    fam: Family,
    ns: std::ops::RangeInclusive<usize>,
    kp: usize,
    stop: f64,
) -> (usize, Vec<String>) {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in ns {
        let mut theta = 0.01;
        while theta < stop {
            let d = FamilyDescriptor::new(fam, n, theta, kp);
            let v = analyze(&d).map(|r| r.verdict);
            count += 1;
            if !matches!(v, Ok(Verdict::LinearlyUnstable)) {
                bad.push(format!("{} θ0={theta:.2}: {v:?}", d.label()));
            }
            theta += 0.01;
        }
    }
    (count, bad)
}

fn blanket_instability() -> Outcome {
    let mut notes = Vec::new();
    let mut count = 0;
    for (fam, ns, kp, stop) in [
        (Family::DNdRRp, 4..=8, 0, PI / 2.0 - 0.005),
        (Family::DNh2R, 7..=10, 0, PI / 2.0 - 0.005),
        (Family::DNh2R, 9..=12, 2, PI - 0.005),
    ] {
        let (c, bad) = all_unstable(fam, ns, kp, stop);
        count += c;
        notes.extend(bad);
    }
    for n in 3..=8 {
        let e = make_equatorial_pm_ring(n).unwrap();
        let v = analyze_small(&e, 0.0).map(|r| r.verdict);
        count += 1;
        if !matches!(v, Ok(Verdict::LinearlyUnstable)) {
            notes.push(format!("D{}h(Re): {v:?}", 2 * n));
        }
    }
    let sq = analyze_small(&make_equatorial_pm_ring(2).unwrap(), 0.0).map(|r| r.verdict);
    if !matches!(sq, Ok(Verdict::LyapunovStable)) {
        notes.push(format!("D4h(Re): {sq:?}"));
    }
    Outcome::new(
        notes.is_empty(),
        format!(
            "{count} points unstable as required, D4h(Re) {sq:?}, {} exceptions",
            notes.len()
        ),
    )
    .with_notes(notes)
}

impl Outcome {
    fn with_notes(mut self, notes: Vec<String>) -> Self {
        self.notes = notes;
        self
    }
}

/// Up to `k` evenly spaced existing members of a branch over `x ∈ (−1, 1)`.
fn sample_branch(k: usize, f: impl Fn(f64) -> Option<BranchPoint>) -> Vec<BranchPoint> {
    let all: Vec<BranchPoint> = (1..400)
        .filter_map(|i| f(-1.0 + i as f64 * 0.005))
        .collect();
    if all.len() <= k {
        return all;
    }
    (0..k).map(|i| all[i * (all.len() - 1) / (k - 1)]).collect()
}

fn small_system_verdicts() -> Outcome {
    let mut notes = Vec::new();
    let mut checked = 0;
    let mut unstable_branch = |name: String, pts: Vec<BranchPoint>| {
        if pts.len() < 10 {
            notes.push(format!("{name}: only {} members", pts.len()));
        }
        for p in pts {
            let c = p.configuration().unwrap();
            let v = analyze_small(&c, angular_velocity(&c).unwrap()).map(|r| r.verdict);
            checked += 1;
            if !matches!(v, Ok(Verdict::LinearlyUnstable)) {
                notes.push(format!("{name} x={:.3}: {v:?}", p.x));
            }
        }
    };
    // both root signs of a family form one sample; for λ_n = ±1 only one of them enters the square
    let either = |lam: f64| {
        sample_branch(10, move |x| {
            branch_c2v_RRp2p(x, lam, 1)
                .or_else(|_| branch_c2v_RRp2p(x, lam, -1))
                .ok()
        })
    };
    unstable_branch("C2v(R,R')".into(), either(0.0));
    for lam in [1.0, -1.0] {
        unstable_branch(format!("C2v(R,R',2p) λ={lam}"), either(lam));
    }
    for lam in [1.0, -1.0] {
        unstable_branch(
            format!("C2v(2R,2p) λ={lam}"),
            sample_branch(10, |x| branch_c2v_2R2p(x, lam).ok()),
        );
    }
    let mut rm = 0;
    for branch in [1, -1] {
        for p in sample_branch(10, |x| branch_c2v_RmRmp_root(x, branch).ok()) {
            // (+)vortices sit at heights x and −y
            let same = p.x * p.y < 0.0;
            let c = p.configuration().unwrap();
            let v = analyze_small(&c, angular_velocity(&c).unwrap()).map(|r| r.verdict);
            rm += 1;
            if matches!(v, Ok(Verdict::LyapunovStable)) != same {
                notes.push(format!("C2v(Rm,Rm') x={:.3} y={:.3}: {v:?}", p.x, p.y));
            }
        }
    }
    Outcome::new(
        notes.is_empty(),
        format!("{checked} low-symmetry members unstable, {rm} C2v(Rm,Rm') members match the hemisphere rule, {} exceptions", notes.len()),
    )
    .with_notes(notes)
}

fn bifurcations() -> Outcome {
    let d = build_diagram(2, 0.005).unwrap();
    let find = |parent: &str, child: &str, mu: f64, kind: PitchforkKind| {
        d.bifurcations.iter().find(|b| {
            b.parent.contains(parent)
                && b.child.contains(child)
                && (b.mu_z - mu).abs() <= 0.02
                && b.kind == kind
        })
    };
    let sub = find("D2d", "C2v(R,R')", 1.66, PitchforkKind::Subcritical);
    let sup = find("D2h", "C2v(Rm", 3.15, PitchforkKind::Supercritical);
    let show = |b: Option<&vortex_atlas::atlas::Bifurcation>| {
        b.map_or("missing".into(), |b| {
            format!("μ = {:.4} {}", b.mu_z, b.kind)
        })
    };
    Outcome::new(
        sub.is_some() && sup.is_some(),
        format!(
            "D2d→C2v(R,R'): {}; D2h→C2v(Rm,Rm'): {}",
            show(sub),
            show(sup)
        ),
    )
}

fn branch_algebra() -> Outcome {
    let mut quartic = 0.0f64;
    let mut residual = 0.0f64;
    let mut notes = Vec::new();
    let mut record = |p: &BranchPoint| {
        let c = p.configuration().unwrap();
        residual = residual.max(re_residual(&c, angular_velocity(&c).unwrap()).unwrap());
    };
    for i in 1..200 {
        let x = -1.0 + i as f64 * 0.01;
        for lam in [0.0, 1.0, -1.0, 0.5] {
            for sign in [1, -1] {
                if let Ok(p) = branch_c2v_RRp2p(x, lam, sign) {
                    quartic = quartic.max(c2v_quartic(p.x, p.y, lam).abs());
                    record(&p);
                }
            }
            if let Ok(p) = branch_c2v_2R2p(x, lam) {
                record(&p);
            }
        }
        for branch in [1, -1] {
            if let Ok(p) = branch_c2v_RmRmp_root(x, branch) {
                record(&p);
            }
        }
    }
    for (fam, kp) in ring_families() {
        let want = if fam == Family::DNh2R {
            RingPhase::InPhase
        } else {
            RingPhase::OutPhaseByPiOverN
        };
        for n in 2..=8 {
            let d = FamilyDescriptor::new(fam, n, 0.9, kp);
            let c = make_family(&d).unwrap();
            residual = residual.max(re_residual(&c, ring_angular_velocity(&d).unwrap()).unwrap());
            let got = two_ring_phase_test(&c);
            if !matches!(&got, Ok(g) if *g == want) {
                notes.push(format!("{}: {got:?}", d.label()));
            }
        }
    }
    Outcome::new(
        quartic < 1e-10 && residual < 1e-8 && notes.is_empty(),
        format!("max quartic residual {quartic:.2e} (< 1e-10), max RE residual {residual:.2e} (< 1e-8), phase test {} mismatches", notes.len()),
    )
    .with_notes(notes)
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("fixed equilibria", Duration::from_secs(1), fixed_equilibria),
        ("conservation", Duration::from_secs(30), conservation),
        (
            "angular-velocity consistency",
            Duration::from_secs(1),
            angular_velocities,
        ),
        ("Hessian oracle", Duration::from_secs(10), hessian_oracle),
        ("block structure", Duration::from_secs(5), block_structure),
        ("spectrum oracle", Duration::from_secs(30), spectrum_oracle),
        ("threshold table", Duration::from_secs(120), thresholds),
        (
            "blanket instability",
            Duration::from_secs(60),
            blanket_instability,
        ),
        (
            "low-symmetry verdicts",
            Duration::from_secs(30),
            small_system_verdicts,
        ),
        ("bifurcations", Duration::from_secs(60), bifurcations),
        ("branch algebra", Duration::from_secs(5), branch_algebra),
    ];
    let mut failed = 0;
    for (k, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let took = start.elapsed();
        let pass = o.pass && took <= *budget;
        failed += !pass as usize;
        println!(
            "{} {:>2} {name}: {} [{:.2}s / {}s]",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            o.detail,
            took.as_secs_f64(),
            budget.as_secs()
        );
        for n in &o.notes {
            println!("        {n}");
        }
    }
    println!(
        "{}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
