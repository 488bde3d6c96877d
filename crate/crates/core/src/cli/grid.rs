//! m grids: `4096`, `1..4096`, `2,4,8,...,4096`, `1,2,3,...,10`, or a plain list.

use crate::error::{Error, Result};

/// Parses a strictly increasing grid of positive integers.
///
/// `a..b` is inclusive. Before `...`, two listed terms continue arithmetically;
/// three or more continue with whichever of a common difference or a common
/// ratio they share. The last term after `...` is the inclusive end.
pub fn parse_grid(s: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    let bad = |why: &str| Error::InvalidSpec(format!("bad m grid '{s}': {why}"));
    let int = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| bad("expected integers"))
    };
    let grid = if let Some((a, b)) = s.split_once("..").filter(|_| !s.contains(',')) {
        let (a, b) = (int(a)?, int(b)?);
        (a..=b).collect()
    } else {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        match parts.iter().position(|t| *t == "...") {
            None => parts.iter().map(|t| int(t)).collect::<Result<Vec<_>>>()?,
            Some(dots) => {
                if dots + 2 != parts.len() || dots < 2 {
                    return Err(bad("'...' needs two leading terms and one end term"));
                }
                let head = parts[..dots]
                    .iter()
                    .map(|t| int(t))
                    .collect::<Result<Vec<_>>>()?;
                let end = int(parts[dots + 1])?;
                extend(&head, end)
                    .ok_or_else(|| bad("terms are neither arithmetic nor geometric"))?
            }
        }
    };
    if grid.is_empty() || grid[0] == 0 {
        return Err(bad("values must be positive"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("values must increase strictly"));
    }
    Ok(grid)
}

fn extend(head: &[u64], end: u64) -> Option<Vec<u64>> {
    let arithmetic = head
        .windows(2)
        .all(|w| w[1] > w[0] && w[1] - w[0] == head[1] - head[0]);
    let geometric = head[0] > 0
        && head[1].is_multiple_of(head[0])
        && head[1] / head[0] >= 2
        && head
            .windows(2)
            .all(|w| w[0].checked_mul(head[1] / head[0]) == Some(w[1]));
    let mut out = head.to_vec();
    let mut last = *head.last()?;
    if head.len() > 2 && geometric && !arithmetic {
        let r = head[1] / head[0];
        while let Some(next) = last.checked_mul(r).filter(|&n| n <= end) {
            out.push(next);
            last = next;
        }
    } else if arithmetic {
        let step = head[1] - head[0];
        while let Some(next) = last.checked_add(step).filter(|&n| n <= end) {
            out.push(next);
            last = next;
        }
    } else {
        return None;
    }
    Some(out)
}

/// 2, 4, 8, ... up to `max`.
pub fn powers_of_two(max: u64) -> Vec<u64> {
    std::iter::successors(Some(2u64), |m| m.checked_mul(2))
        .take_while(|&m| m <= max)
        .collect()
}
