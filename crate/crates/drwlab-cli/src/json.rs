//! Minimal JSON emission for the report schema; values are limited to
//! strings, integers, booleans, arrays, and objects, which covers the whole
//! output surface.

pub enum Json {
    Str(String),
    Int(i64),
    UInt(u64),
    Float(f64),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

impl Json {
    pub fn render(&self) -> String {
        match self {
            Json::Str(s) => format!("\"{}\"", escape(s)),
            Json::Int(v) => v.to_string(),
            Json::UInt(v) => v.to_string(),
            Json::Float(v) => format!("{v:.6}"),
            Json::Arr(items) => {
                let inner: Vec<String> = items.iter().map(|x| x.render()).collect();
                format!("[{}]", inner.join(","))
            }
            Json::Obj(fields) => {
                let inner: Vec<String> = fields
                    .iter()
                    .map(|(k, v)| format!("\"{}\":{}", escape(k), v.render()))
                    .collect();
                format!("{{{}}}", inner.join(","))
            }
        }
    }
}
