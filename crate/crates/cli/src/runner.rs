//! Running scenarios and generating walk scenarios.

use std::sync::Arc;

use quiverlab_core::framed::{framed_ext, FramedModule, FramedSetting};
use quiverlab_core::hecke::{hecke_up, random_walk, WalkStep};
use quiverlab_core::piq::{ext_complex, LoopModule, Rep};
use quiverlab_core::Rational;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::files::{format_rational, parse_rational, QuiverSpec, Scenario, ScenarioFile, StepScript, WalkScript};
use crate::report::{Check, Item, Kind, Report};
use crate::suites::{framed_text, module_checks, run_suite, Config, Suite};

/// Command-line overrides for a run.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    /// Sample count for every selected suite.
    pub samples: Option<usize>,
    /// Suites to run instead of the scenario's own selection.
    pub suites: Vec<Suite>,
}

pub fn run(scenario: &Scenario, opts: &RunOptions) -> Result<Report> {
    let f = &scenario.file;
    let seed = opts.seed.unwrap_or(f.seed);
    let suites: Vec<Suite> = if opts.suites.is_empty() {
        f.suites.iter().map(|s| Suite::from_name(s)).collect::<Result<_>>()?
    } else {
        opts.suites.clone()
    };
    let mut checks = module_checks(&scenario.modules);
    for (i, w) in f.walks.iter().enumerate() {
        checks.extend(replay_walk(&scenario.setting, w, i));
    }
    for &s in &suites {
        let samples = opts.samples.or_else(|| f.samples.get(s.name()).copied()).unwrap_or_else(|| s.default_samples());
        let cfg = Config {
            setting: scenario.setting.clone(),
            seed,
            samples,
        };
        checks.extend(run_suite(s, &cfg));
    }
    let q = scenario.setting.base();
    Ok(Report::new(
        f.name.clone(),
        seed,
        quiver_label(&f.quiver, q),
        f.w.clone(),
        q.sign_label(),
        suites.iter().map(|s| s.name().to_string()).collect(),
        checks,
    ))
}

fn quiver_label(spec: &QuiverSpec, q: &quiverlab_core::Quiver) -> String {
    match &spec.preset {
        Some(p) => p.clone(),
        None => format!("{} vertices, edges {:?}", q.vertex_count(), q.edges()),
    }
}

fn parse_all(xs: &[String]) -> std::result::Result<Vec<Rational>, String> {
    xs.iter().map(|s| parse_rational(s)).collect()
}

/// Replay a scripted walk from the empty module, checking every step.
pub fn replay_walk(setting: &Arc<FramedSetting>, script: &WalkScript, index: usize) -> Vec<Check> {
    let mut it = Item::new("walk", index, &format!("{script:?}"));
    let mut current = FramedModule::empty(setting.clone());
    let mut expected_v = vec![0usize; setting.base().vertex_count()];
    for (n, step) in script.steps.iter().enumerate() {
        let res = (|| -> std::result::Result<(), String> {
            let x = LoopModule::new(step.vertex, parse_all(&step.label)?);
            let dim = ext_complex(&setting.loop_cb(&x).map_err(|e| e.to_string())?, &current.to_cb())
                .map_err(|e| e.to_string())?
                .dims()[1];
            if step.skipped {
                if dim == 0 {
                    it.record("skipped-step", "empty fiber: Ext1(x, B) = 0", Kind::Skipped, "0", "0").context = Some(format!("step {n}"));
                } else {
                    it.eq("skipped-step", "empty fiber: Ext1(x, B) = 0", 0, dim).context = Some(format!("step {n}"));
                }
                return Ok(());
            }
            let pair = hecke_up(&current, &x, &parse_all(&step.class)?).map_err(|e| e.to_string())?;
            it.holds("step-valid", "a Hecke pair is an inclusion of framed modules with quotient x", pair.validate().is_ok())
                .context = Some(format!("step {n}"));
            let b = pair.b2;
            it.holds("stable", "Hecke modifications of stable points are stable", b.is_stable()).context = Some(format!("step {n}"));
            let t = framed_ext(&b, &b).map_err(|e| e.to_string())?;
            let exp = setting.expected_dim(b.v()).map_err(|e| e.to_string())?;
            it.eq("tangent-dimension", "tangent dimension is 2 v.w - <v,v>", exp, t.t_dim() as i64).context = Some(format!("step {n}"));
            expected_v[step.vertex] += 1;
            current = b;
            Ok(())
        })();
        if let Err(e) = res {
            it.error("step", "walk replay", e).context = Some(format!("step {n}"));
            break;
        }
    }
    it.eq("final-dimension", "each step adds one dimension at its vertex", format!("{expected_v:?}"), format!("{:?}", current.v()));
    it.record("final-point", "final point of the walk", Kind::Skipped, "-".to_string(), framed_text(&current));
    it.finish()
}

/// A reproducible random Hecke-walk scenario.
pub fn generate(quiver: QuiverSpec, w: Vec<usize>, length: usize, seed: u64) -> Result<ScenarioFile> {
    let q = quiver.build()?;
    if w.len() != q.vertex_count() {
        return Err(Error::Invalid(format!("framing has {} entries, the quiver has {} vertices", w.len(), q.vertex_count())));
    }
    let setting = FramedSetting::new(q, w.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let walk = random_walk(&setting, length, &mut rng)?;
    let mut steps = Vec::with_capacity(walk.steps.len());
    for step in &walk.steps {
        steps.push(match step {
            WalkStep::Skipped { x } => StepScript {
                vertex: x.k,
                label: x.x.iter().map(format_rational).collect(),
                class: Vec::new(),
                skipped: true,
            },
            WalkStep::Up(p) => {
                let ext = ext_complex(&setting.loop_cb(&p.x)?, &p.b1.to_cb())?;
                let coords = ext.coords(&Rep::of_degree(1, p.class()?))?;
                StepScript {
                    vertex: p.x.k,
                    label: p.x.x.iter().map(format_rational).collect(),
                    class: coords.iter().map(format_rational).collect(),
                    skipped: false,
                }
            }
        });
    }
    let label = quiver.preset.clone().unwrap_or_else(|| "custom".into());
    let wl: Vec<String> = w.iter().map(|x| x.to_string()).collect();
    Ok(ScenarioFile {
        name: format!("walk-{label}-w{}-len{length}-seed{seed}", wl.join("_")),
        seed,
        quiver,
        w,
        suites: Vec::new(),
        samples: Default::default(),
        modules: Vec::new(),
        walks: vec![WalkScript { steps }],
    })
}

pub fn scenario_to_toml(f: &ScenarioFile) -> Result<String> {
    toml::to_string(f).map_err(|e| Error::Serialize(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::Path;

    #[test]
    fn generated_walks_replay() {
        let f = generate(QuiverSpec::preset("jordan"), vec![1], 3, 11).unwrap();
        let text = scenario_to_toml(&f).unwrap();
        let s = Scenario::parse(&text, Path::new("gen.toml")).unwrap();
        assert_eq!(s.file, f);
        let r = run(&s, &RunOptions::default()).unwrap();
        assert!(!r.failed(), "{}", r.render(crate::report::Format::Text).unwrap());
        let fin = r.checks_named("final-dimension").next().unwrap();
        assert_eq!(fin.computed, "[3]");
    }

    #[test]
    fn empty_walk_is_the_base_point() {
        let f = generate(QuiverSpec::preset("a2"), vec![1, 0], 0, 1).unwrap();
        assert!(f.walks[0].steps.is_empty());
        let s = Scenario::from_file(f, Path::new("gen.toml")).unwrap();
        let r = run(&s, &RunOptions::default()).unwrap();
        assert_eq!(r.checks_named("final-dimension").next().unwrap().computed, "[0, 0]");
    }
}
