use thiserror::Error;

use super::{Step, StepSet, FULL_MASK};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty model string")]
    Empty,
    #[error("malformed character {ch:?} at position {pos}")]
    BadChar { pos: usize, ch: char },
    #[error("step at position {pos} must have exactly 3 characters, found {len}")]
    BadLength { pos: usize, len: usize },
    #[error("null step \"000\" at position {pos}")]
    NullStep { pos: usize },
    #[error("duplicate step {step} at position {pos}")]
    Duplicate { pos: usize, step: String },
    #[error("invalid hexadecimal mask at position {pos}")]
    BadHex { pos: usize },
    #[error("mask 0x{mask:x} out of range (26 bits)")]
    MaskOutOfRange { mask: u64 },
}

/// Parses a model given as `;`/`,`-separated three-character steps over
/// `{'-','0','+'}` (e.g. `"--0;+00"`) or as a `0x`-prefixed 26-bit mask.
///
/// The empty list (`""` after trimming) is rejected; use `0x0` for the empty set.
pub fn parse_model(text: &str) -> Result<StepSet, ParseError> {
    let trimmed = text.trim();
    if let Some(hex) = trimmed
        .strip_prefix("0x")
        .or_else(|| trimmed.strip_prefix("0X"))
    {
        let offset = text.len() - text.trim_start().len() + 2;
        if let Some((p, _)) = hex.char_indices().find(|(_, c)| !c.is_ascii_hexdigit()) {
            return Err(ParseError::BadHex { pos: offset + p });
        }
        if hex.is_empty() || hex.len() > 16 {
            return Err(ParseError::BadHex { pos: offset });
        }
        let mask = u64::from_str_radix(hex, 16).map_err(|_| ParseError::BadHex { pos: offset })?;
        if mask > FULL_MASK as u64 {
            return Err(ParseError::MaskOutOfRange { mask });
        }
        return Ok(StepSet::from_mask(mask as u32).expect("checked range"));
    }
    if trimmed.is_empty() {
        return Err(ParseError::Empty);
    }

    let mut set = StepSet::EMPTY;
    let mut start = 0usize;
    let bytes: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    for (p, &c) in bytes.iter().enumerate() {
        if c == ';' || c == ',' {
            tokens.push((start, p));
            start = p + 1;
        }
    }
    tokens.push((start, bytes.len()));

    for (s, e) in tokens {
        // skip surrounding whitespace inside the token
        let mut a = s;
        let mut b = e;
        while a < b && bytes[a].is_whitespace() {
            a += 1;
        }
        while b > a && bytes[b - 1].is_whitespace() {
            b -= 1;
        }
        if b - a != 3 {
            return Err(ParseError::BadLength { pos: a, len: b - a });
        }
        let mut coords = [0i8; 3];
        for (n, coord) in coords.iter_mut().enumerate() {
            *coord = match bytes[a + n] {
                '-' => -1,
                '0' => 0,
                '+' => 1,
                ch => return Err(ParseError::BadChar { pos: a + n, ch }),
            };
        }
        let step = Step::from_coords(coords).ok_or(ParseError::NullStep { pos: a })?;
        if set.contains(step) {
            return Err(ParseError::Duplicate {
                pos: a,
                step: step.to_string(),
            });
        }
        set.insert(step);
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_step() {
        let s = parse_model("+00").unwrap();
        assert_eq!(s.steps(), vec![Step::new(1, 0, 0).unwrap()]);
    }

    #[test]
    fn four_step_example() {
        let s = parse_model("---;--+;-+0;+00").unwrap();
        assert_eq!(
            s,
            StepSet::from_triples(&[[-1, -1, -1], [-1, -1, 1], [-1, 1, 0], [1, 0, 0]])
        );
        assert_eq!(s.to_string(), "---;--+;-+0;+00");
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_model("000"), Err(ParseError::NullStep { pos: 0 }));
        assert_eq!(
            parse_model("+00;+x0"),
            Err(ParseError::BadChar { pos: 5, ch: 'x' })
        );
        assert!(matches!(
            parse_model("+00,+00"),
            Err(ParseError::Duplicate { pos: 4, .. })
        ));
        assert!(matches!(parse_model("+0"), Err(ParseError::BadLength { .. })));
        assert!(matches!(
            parse_model("0x4000000"),
            Err(ParseError::MaskOutOfRange { .. })
        ));
        assert!(matches!(parse_model("0x12g"), Err(ParseError::BadHex { pos: 4 })));
    }

    #[test]
    fn hex_roundtrip() {
        let s = parse_model("---;--+;-+0;+00").unwrap();
        assert_eq!(parse_model(&s.code_string()).unwrap(), s);
        assert_eq!(parse_model("0x0").unwrap(), StepSet::EMPTY);
    }
}
