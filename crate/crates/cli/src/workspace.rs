//! Workspace files: named algebras, functionals, kernels and homomorphisms.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use starcone_core::correspondence::functional_to_kernel;
use starcone_core::{
    ComplexMatrix, Error, FiniteStarAlgebra, Functional, Kernel, StarHomomorphism, TolerancePolicy, C64,
};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalEntry {
    pub algebra: String,
    pub values: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    pub matrix: ComplexMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomomorphismEntry {
    pub source: String,
    pub target: String,
    pub matrix: ComplexMatrix,
}

/// The on-disk form, exactly as parsed.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceFile {
    #[serde(default)]
    pub algebras: BTreeMap<String, FiniteStarAlgebra>,
    #[serde(default)]
    pub functionals: BTreeMap<String, FunctionalEntry>,
    #[serde(default)]
    pub kernels: BTreeMap<String, KernelEntry>,
    #[serde(default)]
    pub homomorphisms: BTreeMap<String, HomomorphismEntry>,
}

impl WorkspaceFile {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: WorkspaceFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            let inner = e.into_inner();
            CliError::Parse {
                line: inner.line(),
                column: inner.column(),
                field,
                message: inner.to_string(),
            }
        })?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        inline_json(self)
    }
}

/// JSON with one object key per line and arrays kept inline.
pub fn inline_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, InlineArrays::default());
    value.serialize(&mut ser).expect("value serializes");
    String::from_utf8(buf).expect("utf-8 output")
}

#[derive(Default)]
struct InlineArrays {
    depth: usize,
    has_value: bool,
}

impl InlineArrays {
    fn indent<W: ?Sized + std::io::Write>(&self, w: &mut W) -> std::io::Result<()> {
        w.write_all(b"\n")?;
        for _ in 0..self.depth {
            w.write_all(b"  ")?;
        }
        Ok(())
    }
}

impl serde_json::ser::Formatter for InlineArrays {
    fn begin_object<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.depth += 1;
        self.has_value = false;
        w.write_all(b"{")
    }

    fn end_object<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.depth -= 1;
        if self.has_value {
            self.indent(w)?;
        }
        self.has_value = true;
        w.write_all(b"}")
    }

    fn begin_object_key<W: ?Sized + std::io::Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        if !first {
            w.write_all(b",")?;
        }
        self.indent(w)
    }

    fn begin_object_value<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        w.write_all(b": ")
    }

    fn end_object_value<W: ?Sized + std::io::Write>(&mut self, _w: &mut W) -> std::io::Result<()> {
        self.has_value = true;
        Ok(())
    }

    fn begin_array_value<W: ?Sized + std::io::Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }
}

/// A parsed file whose references resolve and whose entities validate.
#[derive(Debug, Clone)]
pub struct Workspace {
    pub file: WorkspaceFile,
    pub kernels: BTreeMap<String, Kernel>,
    pub homomorphisms: BTreeMap<String, StarHomomorphism>,
}

pub fn parse_workspace(path: &Path, pol: &TolerancePolicy) -> CliResult<Workspace> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Workspace::from_file(WorkspaceFile::from_json(&text)?, pol)
}

fn invalid(entity: String, check: &str, magnitude: f64) -> CliError {
    CliError::Validation {
        entity,
        check: check.to_string(),
        magnitude,
    }
}

impl Workspace {
    pub fn from_file(file: WorkspaceFile, pol: &TolerancePolicy) -> CliResult<Self> {
        for (name, alg) in &file.algebras {
            let report = alg.validate(pol);
            if let Some(worst) = report.failures().max_by(|a, b| a.violation.total_cmp(&b.violation)) {
                return Err(invalid(format!("algebra `{name}`"), &worst.name, worst.violation));
            }
        }

        for (name, f) in &file.functionals {
            let alg = lookup(&file.algebras, "algebra", &f.algebra)?;
            if alg.dim() != f.values.len() {
                return Err(invalid(
                    format!("functional `{name}`"),
                    "dimension",
                    alg.dim().abs_diff(f.values.len()) as f64,
                ));
            }
        }

        let mut kernels = BTreeMap::new();
        for (name, k) in &file.kernels {
            let entity = format!("kernel `{name}`");
            if !k.matrix.is_square() {
                return Err(invalid(entity, "square", k.matrix.rows().abs_diff(k.matrix.cols()) as f64));
            }
            if let Some(a) = &k.algebra {
                let alg = lookup(&file.algebras, "algebra", a)?;
                if alg.dim() != k.matrix.rows() {
                    return Err(invalid(entity, "dimension", alg.dim().abs_diff(k.matrix.rows()) as f64));
                }
            }
            let kernel = Kernel::new(k.matrix.clone(), pol).map_err(|e| match e {
                Error::NotHermitian { asymmetry } => invalid(entity.clone(), "hermitian", asymmetry),
                Error::NotPsd { min_eigenvalue } => invalid(entity.clone(), "psd", -min_eigenvalue),
                other => CliError::Domain(other),
            })?;
            kernels.insert(name.clone(), kernel);
        }

        let mut homomorphisms = BTreeMap::new();
        for (name, h) in &file.homomorphisms {
            let source = lookup(&file.algebras, "algebra", &h.source)?.clone();
            let target = lookup(&file.algebras, "algebra", &h.target)?.clone();
            let entity = format!("homomorphism `{name}`");
            let (hom, report) = StarHomomorphism::check(source, target, h.matrix.clone(), pol).map_err(|e| match e {
                Error::ShapeMismatch(_) => invalid(entity.clone(), "shape", 1.0),
                other => CliError::Domain(other),
            })?;
            if let Some(worst) = report.failures().max_by(|a, b| a.violation.total_cmp(&b.violation)) {
                return Err(invalid(entity, &worst.name, worst.violation));
            }
            homomorphisms.insert(name.clone(), hom);
        }

        Ok(Self {
            file,
            kernels,
            homomorphisms,
        })
    }

    pub fn algebra(&self, name: &str) -> CliResult<&FiniteStarAlgebra> {
        lookup(&self.file.algebras, "algebra", name)
    }

    /// The functional and the name of its algebra.
    pub fn functional(&self, name: &str) -> CliResult<(Functional, &str)> {
        let f = lookup(&self.file.functionals, "functional", name)?;
        Ok((Functional::new(f.values.clone()), f.algebra.as_str()))
    }

    /// A functional that must live on the named algebra.
    pub fn functional_on(&self, algebra: &str, name: &str) -> CliResult<Functional> {
        let (f, owner) = self.functional(name)?;
        if owner != algebra {
            return Err(CliError::Usage(format!(
                "functional `{name}` belongs to algebra `{owner}`, not `{algebra}`"
            )));
        }
        Ok(f)
    }

    /// A named kernel, or else the Gram kernel of the functional with that name.
    pub fn kernel(&self, name: &str, pol: &TolerancePolicy) -> CliResult<(Kernel, Option<&str>)> {
        if let Some(k) = self.kernels.get(name) {
            return Ok((k.clone(), self.file.kernels[name].algebra.as_deref()));
        }
        if let Some(f) = self.file.functionals.get(name) {
            let alg = self.algebra(&f.algebra)?;
            let k = functional_to_kernel(alg, &Functional::new(f.values.clone()), pol)?;
            return Ok((k, Some(f.algebra.as_str())));
        }
        Err(CliError::UnknownEntity {
            kind: "kernel",
            name: name.to_string(),
        })
    }

    pub fn homomorphism(&self, name: &str) -> CliResult<&StarHomomorphism> {
        lookup(&self.homomorphisms, "homomorphism", name)
    }
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, kind: &'static str, name: &str) -> CliResult<&'a T> {
    map.get(name).ok_or_else(|| CliError::UnknownEntity {
        kind,
        name: name.to_string(),
    })
}
