use std::collections::BTreeMap;
use std::path::Path;

use super::artifact::ModelArtifact;
use super::csv_io::load_csv_file;
use super::table::Table;
use crate::error::{Error, Result};

/// In-memory tables and models, keyed case-insensitively.
#[derive(Debug, Default)]
pub struct Catalog {
    tables: BTreeMap<String, Table>,
    models: BTreeMap<String, ModelArtifact>,
}

fn key(name: &str) -> String {
    name.to_ascii_lowercase()
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register_table(&mut self, table: Table, replace: bool) -> Result<()> {
        let k = key(&table.name);
        if !replace && self.tables.contains_key(&k) {
            return Err(Error::Catalog(format!("table '{}' already exists", table.name)));
        }
        self.tables.insert(k, table);
        Ok(())
    }

    pub fn load_csv(&mut self, path: impl AsRef<Path>, table_name: &str, replace: bool) -> Result<&Table> {
        if !replace && self.tables.contains_key(&key(table_name)) {
            return Err(Error::Catalog(format!("table '{table_name}' already exists")));
        }
        let table = load_csv_file(path, table_name)?;
        self.register_table(table, true)?;
        Ok(&self.tables[&key(table_name)])
    }

    pub fn table(&self, name: &str) -> Result<&Table> {
        self.tables
            .get(&key(name))
            .ok_or_else(|| Error::Name(format!("table '{name}' not found")))
    }

    pub fn drop_table(&mut self, name: &str) -> Option<Table> {
        self.tables.remove(&key(name))
    }

    pub fn tables(&self) -> impl Iterator<Item = &Table> {
        self.tables.values()
    }

    pub fn has_model(&self, name: &str) -> bool {
        self.models.contains_key(&key(name))
    }

    pub fn register_model(&mut self, model: ModelArtifact, replace: bool) -> Result<()> {
        let k = key(&model.name);
        if !replace && self.models.contains_key(&k) {
            return Err(Error::Catalog(format!("model '{}' already exists", model.name)));
        }
        self.models.insert(k, model);
        Ok(())
    }

    pub fn model(&self, name: &str) -> Result<&ModelArtifact> {
        self.models
            .get(&key(name))
            .ok_or_else(|| Error::Name(format!("model '{name}' not found")))
    }

    pub fn models(&self) -> impl Iterator<Item = &ModelArtifact> {
        self.models.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::storage::{Column, ColumnData};

    fn t(name: &str) -> Table {
        Table::new(name, vec![Column::new("a", ColumnData::Int64(vec![Some(1)]))]).unwrap()
    }

    #[test]
    fn duplicate_table_needs_replace() {
        let mut c = Catalog::new();
        c.register_table(t("x"), false).unwrap();
        assert!(matches!(c.register_table(t("X"), false), Err(Error::Catalog(_))));
        c.register_table(t("X"), true).unwrap();
        assert_eq!(c.table("x").unwrap().name, "X");
        assert!(matches!(c.table("nope"), Err(Error::Name(_))));
    }
}
