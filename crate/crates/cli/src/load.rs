//! Reads input files, resolves nested references and validates everything
//! before a command runs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use vcoalg::coalg::{CoalgHom, Coalgebra};
use vcoalg::finspace::{ContMap, FinSpace, Limits};
use vcoalg::functorlang::{Functor, SpaceEnv};
use vcoalg::json::{self as j, CoalgDoc, HomDoc, MapDoc, SpaceDoc};
use vcoalg::Error;

use crate::error::CliError;

pub struct Loader {
    limits: Limits,
    /// Content hashes in first-read order.
    read: Vec<(PathBuf, [u8; 32])>,
}

fn doc<T: for<'de> Deserialize<'de>>(v: &Value, file: &Path, at: &str, what: &str) -> Result<T, CliError> {
    T::deserialize(v).map_err(|e| CliError::at(file, at, Error::Invalid(format!("{what}: {e}"))))
}

fn join(at: &str, field: &str) -> String {
    if at.is_empty() {
        field.to_string()
    } else {
        format!("{at}.{field}")
    }
}

impl Loader {
    pub fn new(limits: Limits) -> Loader {
        Loader { limits, read: vec![] }
    }

    fn read(&mut self, path: &Path) -> Result<Value, CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        let key = path.canonicalize().unwrap_or_else(|_| path.to_path_buf());
        if !self.read.iter().any(|(p, _)| *p == key) {
            self.read.push((key, Sha256::digest(&bytes).into()));
        }
        serde_json::from_slice(&bytes).map_err(|e| CliError::Json {
            file: path.display().to_string(),
            message: e.to_string(),
        })
    }

    /// SHA-256 over the configuration digest and every file read so far.
    pub fn digest(&self, config_digest: &str) -> String {
        let mut h = Sha256::new();
        h.update(config_digest.as_bytes());
        for (_, d) in &self.read {
            h.update(d);
        }
        hex::encode(h.finalize())
    }

    /// A string is a path relative to the referring file, an object is inline.
    fn resolve(&mut self, v: &Value, file: &Path) -> Result<(Value, PathBuf), CliError> {
        match v {
            Value::String(rel) => {
                let p = file.parent().unwrap_or(Path::new("")).join(rel);
                Ok((self.read(&p)?, p))
            }
            _ => Ok((v.clone(), file.to_path_buf())),
        }
    }

    fn space_value(&mut self, v: &Value, file: &Path, at: &str) -> Result<Arc<FinSpace>, CliError> {
        let at = if v.is_string() { "" } else { at };
        let (v, file) = self.resolve(v, file)?;
        let d: SpaceDoc = doc(&v, &file, at, "space")?;
        d.build().map(Arc::new).map_err(|e| CliError::at(&file, at, e))
    }

    pub fn space(&mut self, path: &Path) -> Result<Arc<FinSpace>, CliError> {
        let v = self.read(path)?;
        self.space_value(&v, path, "")
    }

    pub fn map(&mut self, path: &Path) -> Result<ContMap, CliError> {
        let v = self.read(path)?;
        let d: MapDoc = doc(&v, path, "", "map")?;
        let dom = self.space_value(&d.dom, path, "dom")?;
        let cod = self.space_value(&d.cod, path, "cod")?;
        j::build_map(dom, cod, &d.map).map_err(|e| CliError::at(path, "map", e))
    }

    /// Builtin constants plus `name=file` bindings.
    pub fn env(&mut self, bindings: &[String]) -> Result<SpaceEnv, CliError> {
        let mut spaces = Vec::new();
        for b in bindings {
            let (name, file) = b
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--const expects name=file, got `{b}`")))?;
            spaces.push((name.to_string(), (*self.space(Path::new(file))?).clone()));
        }
        Ok(j::env_with(spaces))
    }

    fn coalg_value(&mut self, v: &Value, file: &Path, at: &str) -> Result<Coalgebra, CliError> {
        let at = if v.is_string() { "" } else { at };
        let (v, file) = self.resolve(v, file)?;
        let d: CoalgDoc = doc(&v, &file, at, "coalgebra")?;
        let mut constants = Vec::new();
        for (name, s) in &d.constants {
            let space = self.space_value(s, &file, &join(at, &format!("constants.{name}")))?;
            constants.push((name.clone(), (*space).clone()));
        }
        let env = Arc::new(j::env_with(constants));
        let functor =
            Functor::parse(&d.functor, env, self.limits).map_err(|e| CliError::at(&file, join(at, "functor"), e))?;
        let carrier = self.space_value(&d.carrier, &file, &join(at, "carrier"))?;
        let structure_at = join(at, "structure");
        for k in d.structure.keys() {
            if carrier.index_of(k).is_none() {
                return Err(CliError::at(&file, &structure_at, Error::UnknownPoint(k.clone())));
            }
        }
        let mut values = Vec::with_capacity(carrier.len());
        for x in carrier.labels() {
            let here = format!("{structure_at}.{x}");
            let v = d
                .structure
                .get(x)
                .ok_or_else(|| CliError::at(&file, &here, Error::Invalid(format!("state `{x}` has no structure value"))))?;
            values.push(j::decode_value(&functor, &carrier, v).map_err(|e| CliError::at(&file, &here, e))?);
        }
        Coalgebra::new(functor, carrier, values).map_err(|e| CliError::at(&file, structure_at, e))
    }

    pub fn coalgebra(&mut self, path: &Path) -> Result<Arc<Coalgebra>, CliError> {
        let v = self.read(path)?;
        self.coalg_value(&v, path, "").map(Arc::new)
    }

    pub fn hom(&mut self, path: &Path) -> Result<CoalgHom, CliError> {
        let v = self.read(path)?;
        let d: HomDoc = doc(&v, path, "", "homomorphism")?;
        let src = Arc::new(self.coalg_value(&d.src, path, "src")?);
        let dst = Arc::new(self.coalg_value(&d.dst, path, "dst")?);
        let f = j::build_map(src.carrier().clone(), dst.carrier().clone(), &d.map)
            .map_err(|e| CliError::at(path, "map", e))?;
        CoalgHom::new(src, dst, f).map_err(|e| CliError::at(path, "map", e))
    }
}

/// Labels of a point table, for reports.
pub fn table_json(f: &ContMap) -> BTreeMap<String, String> {
    (0..f.dom().len())
        .map(|x| (f.dom().label(x).to_string(), f.cod().label(f.apply(x)).to_string()))
        .collect()
}
