use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::Budget;
use crate::error::Result;
use crate::numberfield::embedding::Embedding;
use crate::numberfield::families::{compositum, FieldDescriptor};
use crate::numberfield::NumberField;
use crate::polya::FieldData;

/// K1, K2 and their compositum L with both embeddings.
#[derive(Clone, Debug)]
pub struct Pair {
    pub d1: FieldDescriptor,
    pub d2: FieldDescriptor,
    pub k1: Arc<NumberField>,
    pub k2: Arc<NumberField>,
    pub l: Arc<NumberField>,
    pub emb1: Embedding,
    pub emb2: Embedding,
}

impl Pair {
    pub fn label(&self) -> String {
        format!("{} * {}", self.d1, self.d2)
    }
}

/// Memoizes fields, composita and class groups across checks. Shared between
/// threads; values are computed outside the lock.
#[derive(Debug)]
pub struct FieldCache {
    pub seed: u64,
    pub budget: Budget,
    fields: Mutex<HashMap<String, Arc<NumberField>>>,
    data: Mutex<HashMap<String, Arc<FieldData>>>,
    pairs: Mutex<HashMap<String, Arc<Pair>>>,
}

impl FieldCache {
    pub fn new(seed: u64, budget: Budget) -> Self {
        Self { seed, budget, fields: Mutex::default(), data: Mutex::default(), pairs: Mutex::default() }
    }

    pub fn field(&self, d: &FieldDescriptor) -> Result<Arc<NumberField>> {
        let key = d.to_string();
        if let Some(k) = self.fields.lock().unwrap().get(&key) {
            return Ok(k.clone());
        }
        let k = Arc::new(d.build()?);
        self.fields.lock().unwrap().insert(key, k.clone());
        Ok(k)
    }

    /// Class group data for a field, keyed by its descriptor.
    pub fn data_for(&self, k: &NumberField) -> Result<Arc<FieldData>> {
        let key = k.descriptor().to_string();
        if let Some(d) = self.data.lock().unwrap().get(&key) {
            return Ok(d.clone());
        }
        let d = Arc::new(FieldData::new(k.clone(), self.seed, &self.budget.class_group())?);
        self.data.lock().unwrap().insert(key, d.clone());
        Ok(d)
    }

    pub fn data(&self, d: &FieldDescriptor) -> Result<Arc<FieldData>> {
        let k = self.field(d)?;
        self.data_for(&k)
    }

    pub fn pair(&self, d1: &FieldDescriptor, d2: &FieldDescriptor) -> Result<Arc<Pair>> {
        let key = format!("{d1} * {d2}");
        if let Some(p) = self.pairs.lock().unwrap().get(&key) {
            return Ok(p.clone());
        }
        let k1 = self.field(d1)?;
        let k2 = self.field(d2)?;
        let c = compositum(&k1, &k2)?;
        let mut l = c.field;
        l.set_descriptor(key.clone());
        let p = Arc::new(Pair { d1: d1.clone(), d2: d2.clone(), k1, k2, l: Arc::new(l), emb1: c.emb1, emb2: c.emb2 });
        self.pairs.lock().unwrap().insert(key, p.clone());
        Ok(p)
    }
}
