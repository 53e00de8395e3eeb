//! Uncontracted (grade 1) English Braille in Unicode Braille patterns.
//!
//! Follows Unified English Braille conventions for the supported subset:
//! the capital indicator before each upper-case letter, the numeric
//! indicator once per number (a period or comma between digits keeps the
//! number going), and the grade 1 indicator before a letter `a`..`j` that
//! directly follows a number.

use super::RenderError;

const BLANK: u32 = 0x2800;
const CAPITAL: char = '\u{2820}';
const NUMERIC: char = '\u{283C}';
const GRADE1: char = '\u{2830}';

/// Dot patterns of `a`..`z` as offsets from U+2800.
const LETTERS: [u32; 26] = [
    0x01, 0x03, 0x09, 0x19, 0x11, 0x0B, 0x1B, 0x13, 0x0A, 0x1A, // a-j
    0x05, 0x07, 0x0D, 0x1D, 0x15, 0x0F, 0x1F, 0x17, 0x0E, 0x1E, // k-t
    0x25, 0x27, 0x3A, 0x2D, 0x3D, 0x35, // u-z
];

fn cell(offset: u32) -> char {
    char::from_u32(BLANK + offset).expect("offset inside the Braille block")
}

fn punctuation(c: char) -> Option<&'static [u32]> {
    Some(match c {
        '.' => &[0x32],
        ',' => &[0x02],
        ':' => &[0x12],
        '-' => &[0x24],
        '\u{2212}' => &[0x10, 0x24],
        '%' => &[0x28, 0x34],
        '(' => &[0x10, 0x23],
        ')' => &[0x10, 0x1C],
        '/' => &[0x38, 0x0C],
        _ => return None,
    })
}

fn digit_cell(d: char) -> char {
    // 1..9 share a..i, 0 shares j
    let idx = match d {
        '0' => 9,
        _ => d as usize - '1' as usize,
    };
    cell(LETTERS[idx])
}

pub fn to_braille_grade1(text: &str) -> Result<String, RenderError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(chars.len() * 3);
    let mut numeric = false;
    for (i, &c) in chars.iter().enumerate() {
        match c {
            '0'..='9' => {
                if !numeric {
                    out.push(NUMERIC);
                    numeric = true;
                }
                out.push(digit_cell(c));
            }
            '.' | ',' if numeric && chars.get(i + 1).is_some_and(|n| n.is_ascii_digit()) => {
                out.extend(punctuation(c).expect("listed").iter().map(|&o| cell(o)));
            }
            'a'..='z' => {
                if numeric && c <= 'j' {
                    out.push(GRADE1);
                }
                numeric = false;
                out.push(cell(LETTERS[c as usize - 'a' as usize]));
            }
            'A'..='Z' => {
                numeric = false;
                out.push(CAPITAL);
                out.push(cell(LETTERS[c as usize - 'A' as usize]));
            }
            ' ' => {
                numeric = false;
                out.push(cell(0));
            }
            _ => {
                let cells = punctuation(c).ok_or(RenderError::UnsupportedCharacter(c))?;
                numeric = false;
                out.extend(cells.iter().map(|&o| cell(o)));
            }
        }
    }
    Ok(out)
}

/// Number of cells `text` occupies once translated.
pub fn braille_cells(text: &str) -> Result<usize, RenderError> {
    Ok(to_braille_grade1(text)?.chars().count())
}

pub fn is_braille(c: char) -> bool {
    ('\u{2800}'..='\u{28FF}').contains(&c)
}
