//! Seeded verification suites.
//!
//! Every suite item draws from its own ChaCha stream derived from the run
//! seed, the suite and the item index, so items can run in parallel and the
//! merged report does not depend on scheduling.

use std::sync::Arc;

use quiverlab_core::framed::{framed_ext, FramedModule, FramedSetting};
use quiverlab_core::hecke::{hecke_down, hecke_tangent, hecke_up, random_walk, HeckePair, Walk};
use quiverlab_core::moduli::{
    alpha_kernel_check, chain_check, equivalent, make_triple, quad_from_two_quots, quad_from_two_subs, quad_tangent,
    triple_tangent, QuadruplePoint, TriplePoint,
};
use quiverlab_core::piq::{check_module, duality_holds, ext_complex, omega_pairing, LoopModule, Rep};
use quiverlab_core::random::{random_coords, random_dims, random_loop, random_module};
use quiverlab_core::{q, Matrix, PiQModule, Quiver, Rational};
use quiverlab_ktheory::identities::{
    probe_virtual_blowup, verify_canonical_pushforward, verify_discrepancy, verify_dual_basis, verify_serre, verify_vanishing,
    verify_virtual_blowup, CheckKind, IdentityReport,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::files::{format_rational, LoadedModule};
use crate::report::{poly_value, Check, Item, Kind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Euler,
    Stability,
    Hecke,
    Lagrangian,
    Triple,
    Quadruple,
    Ktheory,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Euler,
        Suite::Stability,
        Suite::Hecke,
        Suite::Lagrangian,
        Suite::Triple,
        Suite::Quadruple,
        Suite::Ktheory,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Euler => "euler",
            Suite::Stability => "stability",
            Suite::Hecke => "hecke",
            Suite::Lagrangian => "lagrangian",
            Suite::Triple => "triple",
            Suite::Quadruple => "quadruple",
            Suite::Ktheory => "ktheory",
        }
    }

    pub fn from_name(s: &str) -> Result<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }

    pub fn description(self) -> &'static str {
        match self {
            Suite::Euler => "Euler form, trace duality and the symplectic pairing on random module pairs",
            Suite::Stability => "stability, injectivity/surjectivity and tangent dimensions along Hecke walks",
            Suite::Hecke => "validity, up/down round trips and inclusion recovery of Hecke pairs",
            Suite::Lagrangian => "dimension and isotropy of Hecke tangent spaces",
            Suite::Triple => "tangent dimension, alpha kernels and Hom chains at triples",
            Suite::Quadruple => "diagonal and off-diagonal quadruple tangents and sub/quotient round trips",
            Suite::Ktheory => "projective bundle pushforwards and blow-up identities in Chern roots",
        }
    }

    pub fn default_samples(self) -> usize {
        match self {
            Suite::Euler => 70,
            Suite::Stability | Suite::Hecke | Suite::Lagrangian => 6,
            Suite::Triple | Suite::Quadruple => 4,
            Suite::Ktheory => 1,
        }
    }

    fn stream(self) -> u64 {
        self as u64 + 1
    }
}

/// Parameters shared by all items of a suite.
#[derive(Clone, Debug)]
pub struct Config {
    pub setting: Arc<FramedSetting>,
    pub seed: u64,
    pub samples: usize,
}

fn item_rng(seed: u64, suite: Suite, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((suite.stream() << 32) | index as u64);
    rng
}

pub fn matrix_text(m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|r| m.row(r).iter().map(format_rational).collect::<Vec<_>>().join(","))
        .collect();
    format!("[{}]", rows.join(";"))
}

fn blocks_text(ms: &[Matrix]) -> String {
    ms.iter().map(matrix_text).collect::<Vec<_>>().join(" ")
}

pub fn module_text(m: &PiQModule) -> String {
    format!("dims={:?} B={}", m.dims(), blocks_text(m.action()))
}

pub fn framed_text(b: &FramedModule) -> String {
    format!("v={:?} B={} i={} j={}", b.v(), blocks_text(b.b()), blocks_text(b.i()), blocks_text(b.j()))
}

fn loop_text(x: &LoopModule) -> String {
    format!("x@{}={:?}", x.k, x.x.iter().map(format_rational).collect::<Vec<_>>())
}

fn pair_text(p: &HeckePair) -> String {
    format!("{} < {} by {}", framed_text(&p.b1), framed_text(&p.b2), loop_text(&p.x))
}

fn nonzero(c: &[Rational]) -> bool {
    c.iter().any(|v| *v != q(0))
}

fn nonzero_coords(n: usize, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    loop {
        let c = random_coords(n, rng);
        if nonzero(&c) {
            return c;
        }
    }
}

fn ext1_dim(s: &FramedSetting, x: &LoopModule, b: &FramedModule) -> quiverlab_core::Result<usize> {
    Ok(ext_complex(&s.loop_cb(x)?, &b.to_cb())?.dims()[1])
}

/// Random module with total dimension at most `max_total`.
fn bounded_module(q: &Arc<Quiver>, max_total: usize, rng: &mut ChaCha8Rng) -> PiQModule {
    loop {
        let d = random_dims(q.vertex_count(), max_total, rng);
        if d.iter().sum::<usize>() <= max_total {
            return random_module(q, &d, rng);
        }
    }
}

/// Run the items of `suite`, in parallel, returning checks in item order.
pub fn run_suite(suite: Suite, cfg: &Config) -> Vec<Check> {
    let items: Vec<Vec<Check>> = match suite {
        Suite::Ktheory => ktheory_tasks().into_par_iter().enumerate().map(|(i, t)| ktheory_item(i, t)).collect(),
        _ => (0..cfg.samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = item_rng(cfg.seed, suite, i);
                match suite {
                    Suite::Euler => euler_item(cfg, i, &mut rng),
                    Suite::Stability => stability_item(cfg, i, &mut rng),
                    Suite::Hecke => hecke_item(cfg, i, &mut rng),
                    Suite::Lagrangian => lagrangian_item(cfg, i, &mut rng),
                    Suite::Triple => triple_item(cfg, i, &mut rng),
                    Suite::Quadruple => quadruple_item(cfg, i, &mut rng),
                    Suite::Ktheory => unreachable!("handled above"),
                }
            })
            .collect(),
    };
    items.into_iter().flatten().collect()
}

const EULER: &str = "alternating sum of Ext dimensions equals the Euler form";
const DUALITY: &str = "tau(G,H) is the trace-dual of sigma(H,G)";
const SYMPLECTIC: &str = "trace pairing on Ext1(G,G) is antisymmetric and nondegenerate";

fn euler_item(cfg: &Config, i: usize, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let q = cfg.setting.base().clone();
    // Keep Ext complexes of a comparable size across quivers with many arrows.
    let cap = if q.edges().len() > 1 { 5 } else { 6 };
    let g = bounded_module(&q, cap, rng);
    let h = bounded_module(&q, cap, rng);
    // The pairing needs |Ext1|^2 compositions, so it runs on a smaller module.
    let small = bounded_module(&q, 3, rng);
    let mut it = Item::new("euler", i, &format!("{} | {} | {}", module_text(&g), module_text(&h), module_text(&small)));
    let run = |it: &mut Item| -> quiverlab_core::Result<()> {
        let gh = ext_complex(&g, &h)?;
        let hg = ext_complex(&h, &g)?;
        let [d0, d1, d2] = gh.dims();
        it.eq("euler-form", EULER, q.euler_form(g.dims(), h.dims())?, d0 as i64 - d1 as i64 + d2 as i64);
        it.holds("duality", DUALITY, duality_holds(&gh, &hg));
        let ss = ext_complex(&small, &small)?;
        let m = omega_pairing(&ss, &ss, 1)?;
        let antisym = m.add(&m.transpose()).is_zero();
        let d = ss.dims()[1];
        it.eq("symplectic-form", SYMPLECTIC, format!("antisymmetric=true rank={d}"), format!("antisymmetric={antisym} rank={}", m.rank()));
        Ok(())
    };
    if let Err(e) = run(&mut it) {
        it.error("euler-item", EULER, e);
    }
    it.finish()
}

fn walk_length(q: &Quiver) -> usize {
    if q.vertex_count() == 1 && q.g(0) >= 2 {
        3
    } else {
        4
    }
}

fn walk_for(cfg: &Config, rng: &mut ChaCha8Rng) -> quiverlab_core::Result<Walk> {
    random_walk(&cfg.setting, walk_length(cfg.setting.base()), rng)
}

const STABLE: &str = "Hecke modifications of stable points are stable";
const INJECTIVE: &str = "sigma is injective and tau surjective between stable points";
const TANGENT: &str = "tangent dimension is 2 v.w - <v,v>";
const HILBERT: &str = "Hilbert scheme of v points has tangent dimension 2v";
const PRINTED: &str = "dimension formula <v,v> + 2 v.w as printed";

/// Checks at a single stable point: stability, `σ`/`τ`, tangent dimension.
fn point_checks(it: &mut Item, b: &FramedModule) -> quiverlab_core::Result<()> {
    let s = b.setting();
    it.holds("stable", STABLE, b.is_stable());
    let t = framed_ext(b, b)?;
    it.holds("sigma-tau", INJECTIVE, t.sigma_injective() && t.tau_surjective());
    let expected = s.expected_dim(b.v())?;
    it.eq("tangent-dimension", TANGENT, expected, t.t_dim() as i64);
    let q = s.base();
    if q.vertex_count() == 1 && q.g(0) == 1 && s.w() == [1] {
        it.eq("hilbert-tangent", HILBERT, 2 * b.v()[0] as i64, t.t_dim() as i64);
    }
    let printed = q.euler_form(b.v(), b.v())? + 2 * Quiver::dot(b.v(), s.w());
    let verdict = if printed == t.t_dim() as i64 { "agrees" } else { "differs" };
    it.record("printed-dimension-formula", PRINTED, Kind::Probe, printed.to_string(), format!("{} ({verdict})", t.t_dim()));
    Ok(())
}

fn stability_item(cfg: &Config, i: usize, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let walk = match walk_for(cfg, rng) {
        Ok(w) => w,
        Err(e) => {
            let mut it = Item::new("stability", i, "walk");
            it.error("walk", STABLE, e);
            return it.finish();
        }
    };
    let mut out = Vec::new();
    let mut it = Item::new("stability", i, &format!("walk of {} steps", walk.steps.len()));
    for step in &walk.steps {
        if let quiverlab_core::hecke::WalkStep::Skipped { x } = step {
            it.record("walk-skip", "empty fiber: Ext1(x, B) = 0", Kind::Skipped, "0", "0").context = Some(loop_text(x));
        }
    }
    out.extend(it.finish());
    for (j, b) in walk.points().into_iter().enumerate().skip(1) {
        let mut it = Item::new("stability", i, &framed_text(b));
        if let Err(e) = point_checks(&mut it, b) {
            it.error("point", STABLE, e);
        }
        for mut c in it.finish() {
            c.id = format!("stability/{i:04}/p{j:02}/{}", c.id.rsplit('/').next().unwrap_or_default());
            out.push(c);
        }
    }
    out
}

/// Run `f` on every pair of a fresh walk, tagging ids with the pair index.
fn per_pair(suite: &'static str, cfg: &Config, i: usize, rng: &mut ChaCha8Rng, f: impl Fn(&mut Item, &HeckePair) -> quiverlab_core::Result<()>) -> Vec<Check> {
    let walk = match walk_for(cfg, rng) {
        Ok(w) => w,
        Err(e) => {
            let mut it = Item::new(suite, i, "walk");
            it.error("walk", "walk generation", e);
            return it.finish();
        }
    };
    let mut out = Vec::new();
    for (j, p) in walk.pairs().enumerate() {
        let mut it = Item::new(suite, i, &pair_text(p));
        if let Err(e) = f(&mut it, p) {
            it.error("pair", "pair computation", e);
        }
        for mut c in it.finish() {
            c.id = format!("{suite}/{i:04}/p{j:02}/{}", c.id.rsplit('/').next().unwrap_or_default());
            out.push(c);
        }
    }
    out
}

const PAIR: &str = "a Hecke pair is an inclusion of framed modules with quotient x";
const ROUNDTRIP: &str = "the kernel of the quotient map recovers the submodule";
const RECOVER: &str = "the inclusion is the unique Hom with nonzero framing component";

fn hecke_item(cfg: &Config, i: usize, rng: &mut ChaCha8Rng) -> Vec<Check> {
    per_pair("hecke", cfg, i, rng, |it, p| {
        let s = p.setting();
        it.holds("pair-valid", PAIR, p.validate().is_ok());
        let traces: Vec<Rational> = p.b2.loop_traces(p.x.k).iter().zip(p.b1.loop_traces(p.x.k)).map(|(a, b)| a - b).collect();
        it.holds("trace-shift", "loop traces change by the label of x", traces == p.x.x);
        let hom = ext_complex(&p.b2.to_cb(), &s.loop_cb(&p.x)?)?;
        let coords = hom.coords(&Rep::Hom(p.quotient_map()))?;
        let down = hecke_down(&p.b2, &p.x, &coords)?;
        it.holds("up-down-roundtrip", ROUNDTRIP, down.equivalent(p)?);
        let recovered = HeckePair::from_modules(p.b1.clone(), p.b2.clone())?;
        it.holds("inclusion-recovered", RECOVER, recovered.equivalent(p)?);
        let e = framed_ext(&p.b1, &p.b2)?;
        it.holds("pair-sigma-tau", INJECTIVE, e.sigma_injective() && e.tau_surjective());
        Ok(())
    })
}

const HALF: &str = "Hecke tangent dimension is (dim T1 + dim T2 + 2 g_k) / 2";
const ISOTROPIC: &str = "Hecke tangent space is isotropic for Omega1 - Omega2 + omega_k";

fn lagrangian_item(cfg: &Config, i: usize, rng: &mut ChaCha8Rng) -> Vec<Check> {
    per_pair("lagrangian", cfg, i, rng, |it, p| {
        let t = hecke_tangent(p)?;
        let g = p.setting().base().g(p.x.k);
        it.eq("half-dimension", HALF, t.t1() + t.t2() + 2 * g, 2 * t.dim());
        it.holds("isotropic", ISOTROPIC, t.is_lagrangian()?);
        Ok(())
    })
}

/// Triples from repeating each step's label twice from the step's source.
fn triples_from_walk(cfg: &Config, rng: &mut ChaCha8Rng) -> quiverlab_core::Result<Vec<TriplePoint>> {
    let s = &cfg.setting;
    let walk = random_walk(s, 3, rng)?;
    let mut out = Vec::new();
    for p in walk.pairs() {
        let (x, b0) = (&p.x, &p.b1);
        let c1 = nonzero_coords(ext1_dim(s, x, b0)?, rng);
        let p01 = hecke_up(b0, x, &c1)?;
        let n2 = ext1_dim(s, x, &p01.b2)?;
        if n2 == 0 {
            continue;
        }
        out.push(make_triple(b0, x, &c1, &nonzero_coords(n2, rng))?);
    }
    Ok(out)
}

const TRIPLE: &str = "triple tangent dimension is dim T1 + 2 g_k - 1";
const ALPHA: &str = "both alpha kernels are one-dimensional and spanned by alpha";
const ALPHA_DT: &str = "dt12(alpha, 0) = -alpha_x and dt01(0, alpha) = +alpha_x";
const CHAIN: &str = "Hom(y, B^m) = 0 and Hom(B^a, B^b) is 1 for a <= b, 0 otherwise";

fn per_triple(suite: &'static str, cfg: &Config, i: usize, rng: &mut ChaCha8Rng, f: impl Fn(&mut Item, &TriplePoint) -> quiverlab_core::Result<()>) -> Vec<Check> {
    let triples = match triples_from_walk(cfg, rng) {
        Ok(t) => t,
        Err(e) => {
            let mut it = Item::new(suite, i, "triples");
            it.error("triples", "triple construction", e);
            return it.finish();
        }
    };
    let mut out = Vec::new();
    for (j, t) in triples.iter().enumerate() {
        let mut it = Item::new(suite, i, &format!("{} ; {}", pair_text(&t.p01), pair_text(&t.p12)));
        if let Err(e) = f(&mut it, t) {
            it.error("triple", "triple computation", e);
        }
        for mut c in it.finish() {
            c.id = format!("{suite}/{i:04}/t{j:02}/{}", c.id.rsplit('/').next().unwrap_or_default());
            out.push(c);
        }
    }
    out
}

fn triple_item(cfg: &Config, i: usize, rng: &mut ChaCha8Rng) -> Vec<Check> {
    per_triple("triple", cfg, i, rng, |it, t| {
        let tt = triple_tangent(t)?;
        it.eq("triple-dimension", TRIPLE, tt.expected_dim(), tt.dim() as i64);
        let a = alpha_kernel_check(t)?;
        it.holds("alpha-kernels", ALPHA, a.ok());
        let neg: Vec<Rational> = a.alpha_x.iter().map(|v| -v).collect();
        it.holds("alpha-dt-signs", ALPHA_DT, a.dt_values[0] == neg && a.dt_values[1] == a.alpha_x);
        let x = t.x();
        let shifted = LoopModule::new(x.k, x.x.iter().map(|v| v + q(1)).collect());
        let chain = chain_check(&t.modules(), &[x.clone(), shifted])?;
        it.holds("chain-homs", CHAIN, chain.ok());
        Ok(())
    })
}

const DIAGONAL: &str = "diagonal quadruple tangent is the triple tangent plus one normal direction";
const OFF_DIAGONAL: &str = "off-diagonal quadruple tangent dimension is dim T1 + 2 g_k";
const INJECTIVITY: &str = "off-diagonal quadruple tangent injects into the pair tangents";
const QUAD_ROUNDTRIP: &str = "sub and quotient constructions of quadruples are mutually inverse up to gauge";

fn off_diagonal(cfg: &Config, b0: &FramedModule, k: usize, same_label: bool, rng: &mut ChaCha8Rng) -> quiverlab_core::Result<Option<(HeckePair, HeckePair)>> {
    let s = &cfg.setting;
    let q = s.base();
    let x = random_loop(q, k, rng);
    let y = if same_label && q.g(k) > 0 { x.clone() } else { random_loop(q, k, rng) };
    let (nx, ny) = (ext1_dim(s, &x, b0)?, ext1_dim(s, &y, b0)?);
    if nx == 0 || ny == 0 || (x == y && nx < 2) {
        return Ok(None);
    }
    let p01 = hecke_up(b0, &x, &nonzero_coords(nx, rng))?;
    for _ in 0..32 {
        let p = hecke_up(b0, &y, &nonzero_coords(ny, rng))?;
        if !p.equivalent(&p01)? {
            return Ok(Some((p01, p)));
        }
    }
    Ok(None)
}

fn quadruple_item(cfg: &Config, i: usize, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut out = per_triple("quadruple", cfg, i, rng, |it, t| {
        let qp = QuadruplePoint::diagonal(t);
        qp.validate()?;
        let qt = quad_tangent(&qp)?;
        let triple = triple_tangent(t)?;
        it.eq("diagonal-dimension", DIAGONAL, triple.dim() + 1, qt.dim());
        it.eq("diagonal-normal", DIAGONAL, 1, qt.normal.as_ref().map_or(0, |n| n.dim()));
        Ok(())
    });
    let walk = match walk_for(cfg, rng) {
        Ok(w) => w,
        Err(e) => {
            let mut it = Item::new("quadruple", i, "walk");
            it.error("walk", "walk generation", e);
            out.extend(it.finish());
            return out;
        }
    };
    let n = cfg.setting.base().vertex_count();
    for (j, b0) in walk.points().into_iter().enumerate() {
        let k = j % n;
        let mut it = Item::new("quadruple", i, &framed_text(b0));
        let run = |it: &mut Item, rng: &mut ChaCha8Rng| -> quiverlab_core::Result<()> {
            let Some((p01, p01p)) = off_diagonal(cfg, b0, k, j % 2 == 0, rng)? else {
                return Ok(());
            };
            let qp = quad_from_two_quots(&p01, &p01p)?;
            it.holds("trace-condition", "loop traces of the square agree", qp.trace_condition());
            let qt = quad_tangent(&qp)?;
            it.eq("off-diagonal-dimension", OFF_DIAGONAL, qt.off_diagonal_expected(), qt.dim() as i64);
            it.eq("injectivity-kernel", INJECTIVITY, "0".to_string(), qt.injectivity_kernel.map_or("none".to_string(), |k| k.to_string()));
            let back = quad_from_two_subs(&qp.p12, &qp.p1p2)?;
            let again = quad_from_two_quots(&back.p01, &back.p01p)?;
            let closes = equivalent(back.b0(), b0)? && back.p01.equivalent(&p01)? && equivalent(again.b2(), qp.b2())?;
            it.holds("sub-quot-roundtrip", QUAD_ROUNDTRIP, closes);
            Ok(())
        };
        if let Err(e) = run(&mut it, rng) {
            it.error("quadruple", "quadruple computation", e);
        }
        for mut c in it.finish() {
            c.id = format!("quadruple/{i:04}/q{j:02}/{}", c.id.rsplit('/').next().unwrap_or_default());
            out.push(c);
        }
    }
    out
}

/// One K-theory identity to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KTask {
    Serre { v: usize, l: i32 },
    DualBasis { v: usize, k: usize, l: usize },
    Vanishing { v: usize, w: usize, l: i32 },
    Discrepancy { v: usize, w: usize },
    CanonicalPushforward { v: usize, w: usize },
    VirtualBlowup { v: usize, n: usize },
    /// `r > 0`: the checked entry point must refuse; the probe records the outcome.
    VirtualBlowupOutside { v: usize, n: usize },
}

pub fn ktheory_tasks() -> Vec<KTask> {
    let mut t = Vec::new();
    for v in 1..=4usize {
        for l in -(2 * v as i32)..=(2 * v as i32) {
            t.push(KTask::Serre { v, l });
        }
        for k in 0..v {
            for l in 0..v {
                t.push(KTask::DualBasis { v, k, l });
            }
        }
    }
    for v in 2..=4usize {
        for w in 1..v {
            for l in (-((v - w) as i32) - 1)..=1 {
                t.push(KTask::Vanishing { v, w, l });
            }
            t.push(KTask::CanonicalPushforward { v, w });
        }
    }
    for v in 1..=4 {
        for w in 1..=v {
            t.push(KTask::Discrepancy { v, w });
        }
    }
    for (v, n) in [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3)] {
        t.push(KTask::VirtualBlowup { v, n });
    }
    for (v, n) in [(2, 1), (3, 1), (3, 2)] {
        t.push(KTask::VirtualBlowupOutside { v, n });
    }
    t
}

fn anchor_for(identity: &str) -> &'static str {
    match identity {
        "serre-table" => "pushforward of O(l) from a projective bundle follows the Serre table",
        "dual-basis" => "push(lambda^k(Vbar) u^-l) = (-1)^k delta_kl",
        "vanishing" => "structure sheaf of the blow-up pushes forward to O_Y for -(v-w) < l <= 0",
        "discrepancy" => "canonical class of the blow-up is pr*K_Y twisted by O(w-v+1)",
        "canonical-pushforward" => "canonical class of the blow-up pushes forward to K_Y",
        "virtual-blowup" => "virtual blow-up class pushes forward to [Y] plus the correction sum",
        "filtration-bottom" => "lowest filtration class is O_Y",
        "filtration-top" => "top filtration class is the pushed-forward blow-up",
        "filtration-step" => "filtration quotients give the correction terms",
        _ => "identity",
    }
}

fn push_identity(it: &mut Item, r: &IdentityReport) {
    let anchor = anchor_for(r.identity);
    let name = r.identity;
    let c = match r.kind {
        CheckKind::Theorem => it.eq(name, anchor, poly_value(&r.rhs), poly_value(&r.lhs)),
        CheckKind::Probe => it.record(name, anchor, Kind::Probe, "unconstrained".to_string(), if r.holds { "holds" } else { "fails" }.to_string()),
        CheckKind::Conjectural => it.record(name, anchor, Kind::Conjectural, "unconstrained".to_string(), if r.holds { "holds" } else { "fails" }.to_string()),
    };
    if let Some(t) = r.truncation {
        c.context = Some(format!("lambda truncation degree {t}"));
    }
}

fn ktheory_item(i: usize, task: KTask) -> Vec<Check> {
    let mut it = Item::new("ktheory", i, &format!("{task:?}"));
    let run = |it: &mut Item| -> std::result::Result<(), quiverlab_ktheory::Error> {
        match task {
            KTask::Serre { v, l } => push_identity(it, &verify_serre(v, l)?),
            KTask::DualBasis { v, k, l } => push_identity(it, &verify_dual_basis(v, k, l)?),
            KTask::Vanishing { v, w, l } => push_identity(it, &verify_vanishing(v, w, l)?),
            KTask::Discrepancy { v, w } => push_identity(it, &verify_discrepancy(v, w)?),
            KTask::CanonicalPushforward { v, w } => push_identity(it, &verify_canonical_pushforward(v, w)?),
            KTask::VirtualBlowup { v, n } => {
                for r in verify_virtual_blowup(v, n)? {
                    push_identity(it, &r);
                }
            }
            KTask::VirtualBlowupOutside { v, n } => {
                let refused = matches!(verify_virtual_blowup(v, n), Err(quiverlab_ktheory::Error::Hypothesis(_)));
                it.holds("virtual-blowup-hypothesis", "the virtual blow-up formula assumes r <= 0", refused);
                for r in probe_virtual_blowup(v, n)? {
                    push_identity(it, &r);
                }
            }
        }
        Ok(())
    };
    if let Err(e) = run(&mut it) {
        it.error("ktheory", "identity evaluation", e);
    }
    it.finish()
}

const RELATION: &str = "module satisfies the preprojective relation";

/// Check the relation on modules read from files, citing the file and line on failure.
pub fn module_checks(modules: &[LoadedModule]) -> Vec<Check> {
    let mut out = Vec::new();
    for (i, m) in modules.iter().enumerate() {
        let mut it = Item::new("module", i, &module_text(&m.module));
        let ok = check_module(&m.module);
        let c = it.holds("relation", RELATION, ok);
        if let Some(vertex) = m.module.relation().iter().position(|r| !r.is_zero()) {
            c.context = Some(format!("{} (relation fails at vertex {vertex})", m.location_of_vertex(vertex)));
        } else {
            c.context = Some(m.path.display().to_string());
        }
        out.extend(it.finish());
    }
    out
}
