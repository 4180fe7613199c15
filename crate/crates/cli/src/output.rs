//! Report formatting. Text output groups related values on one line and adds
//! a little prose; structured output is one `key=value` per line and nothing else.

use clap::ValueEnum;
use rankx_core::{format_matrix, Field, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

pub struct Out {
    format: Format,
    buf: String,
}

impl Out {
    pub fn new(format: Format) -> Self {
        Out {
            format,
            buf: String::new(),
        }
    }

    /// A group of values: one line in text mode, one line each when structured.
    pub fn kv<K: AsRef<str>, V: ToString>(&mut self, pairs: &[(K, V)]) {
        let items: Vec<String> = pairs.iter().map(|(k, v)| format!("{}={}", k.as_ref(), v.to_string())).collect();
        match self.format {
            Format::Text => self.line(&items.join(" ")),
            Format::Structured => items.iter().for_each(|i| self.line(i)),
        }
    }

    /// Prose, shown in text mode only.
    pub fn note(&mut self, text: &str) {
        if self.format == Format::Text {
            self.line(text);
        }
    }

    /// Raw line, identical in both formats.
    pub fn line(&mut self, text: &str) {
        self.buf.push_str(text);
        self.buf.push('\n');
    }

    /// In text mode `name:` followed by the matrix in the input file format, so
    /// the block can be cut out and parsed again. Structured output flattens it to
    /// `name=rows cols field;row;row`.
    pub fn matrix<F: Field>(&mut self, name: &str, m: &Matrix<F>) {
        let text = format_matrix(m);
        match self.format {
            Format::Text => {
                self.line(&format!("{name}:"));
                self.buf.push_str(&text);
            }
            Format::Structured => {
                let flat: Vec<&str> = text.lines().collect();
                self.line(&format!("{name}={}", flat.join(";")));
            }
        }
    }

    pub fn flush(&mut self) {
        print!("{}", self.buf);
        self.buf.clear();
    }
}
