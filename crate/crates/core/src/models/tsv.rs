use super::ModelError;

/// Non-blank, non-comment lines split on tabs, with 1-based line numbers.
pub(crate) fn records<'a>(
    resource: &'a str,
    text: &'a str,
    min_fields: usize,
    max_fields: usize,
) -> impl Iterator<Item = Result<(usize, Vec<&'a str>), ModelError>> + 'a {
    text.lines().enumerate().filter_map(move |(i, line)| {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() || line.starts_with('#') {
            return None;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields.len() < min_fields || fields.len() > max_fields {
            return Some(Err(ModelError::parse(
                resource,
                i + 1,
                format!(
                    "expected {} tab-separated fields, found {}",
                    if min_fields == max_fields {
                        min_fields.to_string()
                    } else {
                        format!("{min_fields}-{max_fields}")
                    },
                    fields.len()
                ),
            )));
        }
        Some(Ok((i + 1, fields)))
    })
}

pub(crate) fn probability(resource: &str, line: usize, field: &str) -> Result<f64, ModelError> {
    let p: f64 = field
        .parse()
        .map_err(|_| ModelError::parse(resource, line, format!("bad probability `{field}`")))?;
    if p > 0.0 && p <= 1.0 {
        Ok(p)
    } else {
        Err(ModelError::parse(
            resource,
            line,
            format!("probability {p} outside (0, 1]"),
        ))
    }
}

/// Lowercases and collapses internal whitespace.
pub(crate) fn normalize_word(word: &str) -> String {
    word.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}
