use serde_json::Value;

/// Compact JSON, or `key: value` lines for humans when `pretty` is set.
pub fn render(doc: &Value, pretty: bool) -> String {
    if !pretty {
        return doc.to_string();
    }
    match doc {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}"),
                other => format!("{k}: {other}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        other => other.to_string(),
    }
}
