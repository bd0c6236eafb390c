//! CSV rendering with byte-stable float formatting.

/// Shortest round-trip decimal form; identical across runs and thread
/// counts for identical values.
pub fn fmt(x: f64) -> String {
    format!("{x}")
}

pub fn csv_line<I: IntoIterator<Item = String>>(fields: I) -> String {
    let v: Vec<String> = fields.into_iter().collect();
    v.join(",")
}

/// Assembles a complete CSV document (header plus rows, `\n` line ends).
pub fn csv_document(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut doc = String::from(header);
    doc.push('\n');
    for row in rows {
        doc.push_str(&row);
        doc.push('\n');
    }
    doc
}
