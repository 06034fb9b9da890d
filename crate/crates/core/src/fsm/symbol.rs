use std::collections::HashMap;

use super::FsmError;

/// Integer id of a symbol within one [`SymbolTable`].
pub type Label = u32;

/// Id reserved for the empty symbol in every table.
pub const EPSILON: Label = 0;

/// Text form of the empty symbol in serialized machines and tables.
pub const EPSILON_LABEL: &str = "<eps>";

/// Bijection between symbol labels and ids for one alphabet.
///
/// Epsilon is always registered with id 0. Labels may not contain tabs,
/// newlines or carriage returns, since the text formats are tab-separated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolTable {
    labels: Vec<String>,
    ids: HashMap<String, Label>,
}

impl Default for SymbolTable {
    fn default() -> Self {
        Self::new()
    }
}

impl SymbolTable {
    pub fn new() -> Self {
        let mut ids = HashMap::new();
        ids.insert(EPSILON_LABEL.to_string(), EPSILON);
        SymbolTable {
            labels: vec![EPSILON_LABEL.to_string()],
            ids,
        }
    }

    /// Builds a table holding `labels` in order, skipping duplicates.
    pub fn from_labels<I, S>(labels: I) -> Result<Self, FsmError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut table = SymbolTable::new();
        for label in labels {
            table.add(label.as_ref())?;
        }
        Ok(table)
    }

    /// Registers `label` if absent and returns its id.
    pub fn add(&mut self, label: &str) -> Result<Label, FsmError> {
        if let Some(&id) = self.ids.get(label) {
            return Ok(id);
        }
        if label.is_empty() || label.contains(['\t', '\n', '\r']) {
            return Err(FsmError::InvalidLabel(label.to_string()));
        }
        let id = Label::try_from(self.labels.len()).map_err(|_| FsmError::TableFull)?;
        self.labels.push(label.to_string());
        self.ids.insert(label.to_string(), id);
        Ok(id)
    }

    pub fn get(&self, label: &str) -> Option<Label> {
        self.ids.get(label).copied()
    }

    pub fn label(&self, id: Label) -> Option<&str> {
        self.labels.get(id as usize).map(String::as_str)
    }

    /// Number of symbols, epsilon included.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// True when only epsilon is registered.
    pub fn is_empty(&self) -> bool {
        self.labels.len() == 1
    }

    /// Iterates over non-epsilon symbols in id order.
    pub fn iter(&self) -> impl Iterator<Item = (Label, &str)> + '_ {
        self.labels
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, s)| (i as Label, s.as_str()))
    }

    /// Looks up every label, failing on the first unknown one.
    pub fn encode<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<Label>, FsmError> {
        labels
            .iter()
            .map(|l| {
                self.get(l.as_ref())
                    .ok_or_else(|| FsmError::UnknownSymbol(l.as_ref().to_string()))
            })
            .collect()
    }

    /// Maps ids back to labels. Unknown ids render as `#<id>`.
    pub fn decode(&self, ids: &[Label]) -> Vec<String> {
        ids.iter()
            .map(|&id| match self.label(id) {
                Some(s) => s.to_string(),
                None => format!("#{id}"),
            })
            .collect()
    }

    /// Serializes as `label<TAB>id` lines, epsilon first.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, label) in self.labels.iter().enumerate() {
            out.push_str(label);
            out.push('\t');
            out.push_str(&i.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the `label<TAB>id` format. Ids must be dense and start at the
    /// epsilon entry.
    pub fn from_text(text: &str) -> Result<Self, FsmError> {
        let mut table = SymbolTable::new();
        for (lineno, line) in text.lines().enumerate() {
            let lineno = lineno + 1;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            let (Some(label), Some(id), None) = (fields.next(), fields.next(), fields.next())
            else {
                return Err(FsmError::parse(lineno, "expected `label<TAB>id`"));
            };
            let id: Label = id
                .trim()
                .parse()
                .map_err(|_| FsmError::parse(lineno, format!("bad symbol id `{id}`")))?;
            if label == EPSILON_LABEL {
                if id != EPSILON {
                    return Err(FsmError::parse(lineno, "epsilon must have id 0"));
                }
                continue;
            }
            if id as usize != table.len() || table.get(label).is_some() {
                return Err(FsmError::parse(
                    lineno,
                    format!("symbol `{label}` has non-sequential or duplicate id {id}"),
                ));
            }
            table
                .add(label)
                .map_err(|e| FsmError::parse(lineno, e.to_string()))?;
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_is_preregistered() {
        let t = SymbolTable::new();
        assert_eq!(t.get(EPSILON_LABEL), Some(EPSILON));
        assert!(t.is_empty());
    }

    #[test]
    fn add_is_idempotent() {
        let mut t = SymbolTable::new();
        let a = t.add("ア").unwrap();
        assert_eq!(t.add("ア").unwrap(), a);
        assert_eq!(t.len(), 2);
        assert_eq!(t.label(a), Some("ア"));
    }

    #[test]
    fn rejects_tabbed_labels() {
        let mut t = SymbolTable::new();
        assert!(t.add("a\tb").is_err());
        assert!(t.add("").is_err());
    }

    #[test]
    fn encode_names_unknown_label() {
        let t = SymbolTable::from_labels(["a"]).unwrap();
        match t.encode(&["a", "zz"]) {
            Err(FsmError::UnknownSymbol(l)) => assert_eq!(l, "zz"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn text_round_trip() {
        let t = SymbolTable::from_labels(["AA", "new york", "ー"]).unwrap();
        assert_eq!(SymbolTable::from_text(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn text_rejects_gaps() {
        assert!(SymbolTable::from_text("<eps>\t0\na\t2\n").is_err());
        assert!(SymbolTable::from_text("<eps>\t3\n").is_err());
    }
}
