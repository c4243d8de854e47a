//! Scenario and module files.
//!
//! Both are TOML. Rationals are strings such as `"3"` or `"-1/2"`, so
//! values survive serialization exactly.

use std::collections::BTreeMap;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use quiverlab_core::framed::FramedSetting;
use quiverlab_core::{Matrix, PiQModule, Quiver, Rational};
use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::error::{Error, Result};

/// Environment variable naming the default directory for scenario files.
pub const CORPUS_ENV: &str = "QUIVERLAB_CORPUS";

const BUNDLED: &[(&str, &str)] = &[
    ("jordan-w1", include_str!("../scenarios/jordan-w1.toml")),
    ("a2-w21", include_str!("../scenarios/a2-w21.toml")),
    ("two-loop-w1", include_str!("../scenarios/two-loop-w1.toml")),
];

pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverSpec {
    /// `jordan`, `a2` or `two-loop`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<(usize, usize)>,
    /// `ε` on original arrows; defaults to all `+1`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub signs: Vec<i8>,
}

impl QuiverSpec {
    pub fn preset(name: &str) -> Self {
        QuiverSpec {
            preset: Some(name.to_string()),
            ..Default::default()
        }
    }

    pub fn build(&self) -> Result<Quiver> {
        let q = match (&self.preset, self.vertices) {
            (Some(p), None) => match p.as_str() {
                "jordan" => Quiver::jordan(),
                "a2" => Quiver::a2(),
                "two-loop" => Quiver::loops(2),
                other => return Err(Error::UnknownPreset(other.to_string())),
            },
            (None, Some(n)) => {
                let names = (0..n).map(|i| i.to_string()).collect();
                Quiver::new(names, self.edges.clone())?
            }
            _ => return Err(Error::Invalid("a quiver needs exactly one of `preset` or `vertices`".into())),
        };
        if self.signs.is_empty() {
            Ok(q)
        } else {
            Ok(q.with_signs(self.signs.clone())?)
        }
    }
}

/// One step of a scripted Hecke walk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepScript {
    pub vertex: usize,
    /// Loop coordinates of the one-dimensional module `x`.
    pub label: Vec<String>,
    /// Coordinates of the extension class in `Ext¹(x, 𝓑)`; empty when skipped.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub class: Vec<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub skipped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkScript {
    pub steps: Vec<StepScript>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    pub quiver: QuiverSpec,
    pub w: Vec<usize>,
    #[serde(default)]
    pub suites: Vec<String>,
    /// Per-suite sample counts overriding the defaults.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub samples: BTreeMap<String, usize>,
    /// Module files, relative to the scenario file.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modules: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub walks: Vec<WalkScript>,
}

/// A scenario with its quiver built and module files loaded.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub file: ScenarioFile,
    pub source: PathBuf,
    pub setting: Arc<FramedSetting>,
    pub modules: Vec<LoadedModule>,
}

/// A module read from disk, possibly violating the relation.
#[derive(Clone, Debug)]
pub struct LoadedModule {
    pub path: PathBuf,
    pub module: PiQModule,
    /// Line of each action block in the file.
    pub block_lines: Vec<usize>,
}

impl LoadedModule {
    /// `path:line` of the first block whose head is `vertex`.
    pub fn location_of_vertex(&self, vertex: usize) -> String {
        let q = self.module.quiver();
        let line = (0..q.doubled_count())
            .find(|&h| q.head(h) == vertex)
            .map(|h| self.block_lines[h])
            .unwrap_or(1);
        format!("{}:{}", self.path.display(), line)
    }
}

pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    s.trim().parse::<Rational>().map_err(|e| format!("`{s}` is not an exact rational ({e})"))
}

pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

fn line_of(text: &str, span: &Range<usize>) -> usize {
    text[..span.start.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

fn parse_toml<T: serde::de::DeserializeOwned>(text: &str, path: &Path) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.span().map(|s| line_of(text, &s)).unwrap_or(1),
        message: e.message().to_string(),
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixSpec {
    rows: usize,
    cols: usize,
    entries: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleSpec {
    dims: Vec<usize>,
    action: Vec<Spanned<MatrixSpec>>,
}

/// Read a module file over `quiver`: graded dimensions and one row-major
/// matrix per doubled edge (edge `e` at index `2e`, its reverse at `2e + 1`).
/// Shape and parse errors cite the offending line; the relation is not
/// checked here.
pub fn load_module(path: &Path, quiver: &Arc<Quiver>) -> Result<LoadedModule> {
    let text = read(path)?;
    parse_module(&text, path, quiver)
}

pub fn parse_module(text: &str, path: &Path, quiver: &Arc<Quiver>) -> Result<LoadedModule> {
    let spec: ModuleSpec = parse_toml(text, path)?;
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    if spec.dims.len() != quiver.vertex_count() {
        return Err(err(1, format!("`dims` has {} entries, the quiver has {} vertices", spec.dims.len(), quiver.vertex_count())));
    }
    if spec.action.len() != quiver.doubled_count() {
        return Err(err(1, format!("expected {} action matrices, found {}", quiver.doubled_count(), spec.action.len())));
    }
    let mut blocks = Vec::new();
    let mut lines = Vec::new();
    for (h, m) in spec.action.iter().enumerate() {
        let line = line_of(text, &m.span());
        let m = m.get_ref();
        let want = (spec.dims[quiver.head(h)], spec.dims[quiver.tail(h)]);
        if (m.rows, m.cols) != want {
            return Err(err(line, format!("block {h} is {}x{}, expected {}x{}", m.rows, m.cols, want.0, want.1)));
        }
        if m.entries.len() != m.rows * m.cols {
            return Err(err(line, format!("block {h} has {} entries, expected {}", m.entries.len(), m.rows * m.cols)));
        }
        let data = m.entries.iter().map(|s| parse_rational(s).map_err(|e| err(line, e))).collect::<Result<Vec<_>>>()?;
        blocks.push(Matrix::from_vec(m.rows, m.cols, data));
        lines.push(line);
    }
    let module = PiQModule::new(quiver.clone(), spec.dims, blocks).map_err(|e| err(1, e.to_string()))?;
    Ok(LoadedModule {
        path: path.to_path_buf(),
        module,
        block_lines: lines,
    })
}

/// Serialize a module in the format read by [`load_module`].
pub fn module_to_toml(m: &PiQModule) -> String {
    let mut s = format!("dims = {:?}\n", m.dims());
    for b in m.action() {
        let entries: Vec<String> = b.data().iter().map(|x| format!("\"{}\"", format_rational(x))).collect();
        s.push_str(&format!("\n[[action]]\nrows = {}\ncols = {}\nentries = [{}]\n", b.rows(), b.cols(), entries.join(", ")));
    }
    s
}

impl Scenario {
    pub fn parse(text: &str, source: &Path) -> Result<Scenario> {
        let file: ScenarioFile = parse_toml(text, source)?;
        Scenario::from_file(file, source)
    }

    pub fn from_file(file: ScenarioFile, source: &Path) -> Result<Scenario> {
        let quiver = file.quiver.build()?;
        if file.w.len() != quiver.vertex_count() {
            return Err(Error::Invalid(format!("framing has {} entries, the quiver has {} vertices", file.w.len(), quiver.vertex_count())));
        }
        for s in &file.suites {
            crate::suites::Suite::from_name(s)?;
        }
        let setting = FramedSetting::new(quiver, file.w.clone())?;
        let base = source.parent().unwrap_or(Path::new("."));
        let modules = file
            .modules
            .iter()
            .map(|m| load_module(&base.join(m), setting.base()))
            .collect::<Result<_>>()?;
        Ok(Scenario {
            file,
            source: source.to_path_buf(),
            setting,
            modules,
        })
    }

    /// Resolve `name` as a bundled scenario, then a path, then a file in the
    /// corpus directory (with or without the `.toml` extension).
    pub fn load(name: &str) -> Result<Scenario> {
        if let Some((n, text)) = BUNDLED.iter().find(|(n, _)| *n == name) {
            return Scenario::parse(text, Path::new(&format!("<bundled>/{n}.toml")));
        }
        let direct = PathBuf::from(name);
        if direct.is_file() {
            return Scenario::parse(&read(&direct)?, &direct);
        }
        if let Ok(dir) = std::env::var(CORPUS_ENV) {
            for candidate in [PathBuf::from(&dir).join(name), PathBuf::from(&dir).join(format!("{name}.toml"))] {
                if candidate.is_file() {
                    return Scenario::parse(&read(&candidate)?, &candidate);
                }
            }
        }
        Err(Error::ScenarioNotFound(name.to_string()))
    }
}
