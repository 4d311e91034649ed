//! Image rendering and re-parsing for the two stable output layouts.
//!
//! - ASCII: `#` for one, `.` for zero, one grid row per line.
//! - PBM: plain `P1`, a `width height` line, then one grid row per line with
//!   space-separated `0`/`1` digits (`1` marks a one), row 1 on top.

use tomobound_core::image::BinaryImage;

pub fn to_ascii(image: &BinaryImage) -> String {
    let mut out = image.to_string();
    out.push('\n');
    out
}

pub fn to_pbm(image: &BinaryImage) -> String {
    let (m, n) = (image.m(), image.n());
    let mut out = format!("P1\n{n} {m}\n");
    for i in 1..=m {
        for j in 1..=n {
            if j > 1 {
                out.push(' ');
            }
            out.push(if image.get(i, j) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

pub fn parse_ascii(text: &str) -> Result<BinaryImage, String> {
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    if lines.is_empty() {
        return Err("empty ASCII image".into());
    }
    let n = lines[0].chars().count();
    let mut image = BinaryImage::new(lines.len(), n);
    for (i, line) in lines.iter().enumerate() {
        if line.chars().count() != n {
            return Err(format!("row {} has a different width", i + 1));
        }
        for (j, symbol) in line.chars().enumerate() {
            match symbol {
                '#' => image.set(i + 1, j + 1, true),
                '.' => {}
                other => return Err(format!("unexpected symbol {other:?} in row {}", i + 1)),
            }
        }
    }
    Ok(image)
}

pub fn parse_pbm(text: &str) -> Result<BinaryImage, String> {
    let mut tokens = text.split_whitespace();
    match tokens.next() {
        Some("P1") => {}
        other => return Err(format!("expected P1 magic, found {other:?}")),
    }
    let mut dimension = |name: &str| -> Result<usize, String> {
        tokens
            .next()
            .ok_or_else(|| format!("missing {name}"))?
            .parse::<usize>()
            .map_err(|_| format!("invalid {name}"))
    };
    let n = dimension("width")?;
    let m = dimension("height")?;
    if m == 0 || n == 0 {
        return Err("dimensions must be positive".into());
    }
    let mut image = BinaryImage::new(m, n);
    for i in 1..=m {
        for j in 1..=n {
            match tokens.next() {
                Some("1") => image.set(i, j, true),
                Some("0") => {}
                other => return Err(format!("bad raster token {other:?} at ({i}, {j})")),
            }
        }
    }
    if tokens.next().is_some() {
        return Err("trailing raster data".into());
    }
    Ok(image)
}
