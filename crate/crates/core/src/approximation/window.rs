use std::fmt;

use crate::error::{Error, Result};

/// One interval with independently open or closed ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Shape of an [`EigenvalueWindow`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowKind {
    /// `I_a⁻ = [-1, -1 + a)`.
    LowerTail { a: f64 },
    /// `I_a⁺ = (1 - a, 1]`.
    UpperTail { a: f64 },
    /// `I_a = (center - a, center + a)`.
    Centered { center: f64, a: f64 },
    /// Union of explicit intervals.
    Union,
}

/// Subset of `[-1, 1]` selecting eigenvalues to keep.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueWindow {
    kind: WindowKind,
    intervals: Vec<Interval>,
}

impl EigenvalueWindow {
    pub fn lower_tail(a: f64) -> Result<Self> {
        check_width(a)?;
        Ok(EigenvalueWindow {
            kind: WindowKind::LowerTail { a },
            intervals: vec![Interval {
                lo: -1.0,
                hi: -1.0 + a,
                lo_closed: true,
                hi_closed: false,
            }],
        })
    }

    pub fn upper_tail(a: f64) -> Result<Self> {
        check_width(a)?;
        Ok(EigenvalueWindow {
            kind: WindowKind::UpperTail { a },
            intervals: vec![Interval {
                lo: 1.0 - a,
                hi: 1.0,
                lo_closed: false,
                hi_closed: true,
            }],
        })
    }

    pub fn centered(center: f64, a: f64) -> Result<Self> {
        check_width(a)?;
        if !(-1.0..=1.0).contains(&center) {
            return Err(Error::WindowSpec(format!("center {center} outside [-1, 1]")));
        }
        Ok(EigenvalueWindow {
            kind: WindowKind::Centered { center, a },
            intervals: vec![Interval {
                lo: center - a,
                hi: center + a,
                lo_closed: false,
                hi_closed: false,
            }],
        })
    }

    /// Union of intervals, each inside `[-1, 1]` with `lo <= hi`.
    pub fn union(intervals: Vec<Interval>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::WindowSpec("no intervals".into()));
        }
        for iv in &intervals {
            if !(iv.lo <= iv.hi) || iv.lo < -1.0 || iv.hi > 1.0 {
                return Err(Error::WindowSpec(format!("interval {iv} is not inside [-1, 1]")));
            }
        }
        Ok(EigenvalueWindow {
            kind: WindowKind::Union,
            intervals,
        })
    }

    /// `[-1, 1]`.
    pub fn full() -> Self {
        EigenvalueWindow {
            kind: WindowKind::Union,
            intervals: vec![Interval::closed(-1.0, 1.0)],
        }
    }

    pub fn kind(&self) -> WindowKind {
        self.kind
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains(x))
    }
}

impl fmt::Display for EigenvalueWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str("u")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

fn check_width(a: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::WindowSpec(format!("width a = {a} must be positive")));
    }
    Ok(())
}

/// Parsed window text, resolved against the input's mean value when centered.
///
/// Grammar (whitespace ignored):
///
/// ```text
/// spec     := union | "lower:" A | "upper:" A | "center:" A
/// union    := interval ("u" interval)*
/// interval := ("[" | "(") number "," number ("]" | ")")
/// ```
#[derive(Debug, Clone, PartialEq)]
pub enum WindowSpec {
    Explicit(EigenvalueWindow),
    Lower(f64),
    Upper(f64),
    Centered(f64),
}

impl WindowSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let number = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::WindowSpec(format!("bad number `{v}`")))
        };
        if let Some(a) = s.strip_prefix("lower:") {
            let a = number(a)?;
            check_width(a)?;
            return Ok(WindowSpec::Lower(a));
        }
        if let Some(a) = s.strip_prefix("upper:") {
            let a = number(a)?;
            check_width(a)?;
            return Ok(WindowSpec::Upper(a));
        }
        if let Some(a) = s.strip_prefix("center:") {
            let a = number(a)?;
            check_width(a)?;
            return Ok(WindowSpec::Centered(a));
        }
        if s.is_empty() {
            return Err(Error::WindowSpec("empty window".into()));
        }
        let intervals = s
            .split('u')
            .map(|part| {
                let mut chars = part.chars();
                let open = chars.next();
                let close = chars.next_back();
                let lo_closed = match open {
                    Some('[') => true,
                    Some('(') => false,
                    _ => return Err(Error::WindowSpec(format!("`{part}` must start with [ or ("))),
                };
                let hi_closed = match close {
                    Some(']') => true,
                    Some(')') => false,
                    _ => return Err(Error::WindowSpec(format!("`{part}` must end with ] or )"))),
                };
                let body: &str = chars.as_str();
                let (lo, hi) = body
                    .split_once(',')
                    .ok_or_else(|| Error::WindowSpec(format!("`{part}` needs two endpoints")))?;
                Ok(Interval {
                    lo: number(lo)?,
                    hi: number(hi)?,
                    lo_closed,
                    hi_closed,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WindowSpec::Explicit(EigenvalueWindow::union(intervals)?))
    }

    /// Concrete window for an input with mean value `epsilon`.
    pub fn resolve(&self, epsilon: f64) -> Result<EigenvalueWindow> {
        match self {
            WindowSpec::Explicit(w) => Ok(w.clone()),
            WindowSpec::Lower(a) => EigenvalueWindow::lower_tail(*a),
            WindowSpec::Upper(a) => EigenvalueWindow::upper_tail(*a),
            WindowSpec::Centered(a) => EigenvalueWindow::centered(epsilon, *a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_endpoints_follow_definitions() {
        let lo = EigenvalueWindow::lower_tail(0.5).unwrap();
        assert!(lo.contains(-1.0));
        assert!(lo.contains(-0.51));
        assert!(!lo.contains(-0.5));
        let up = EigenvalueWindow::upper_tail(0.5).unwrap();
        assert!(up.contains(1.0));
        assert!(!up.contains(0.5));
        let c = EigenvalueWindow::centered(0.2, 0.1).unwrap();
        assert!(c.contains(0.2));
        assert!(!c.contains(0.1 + 0.2));
        assert!(EigenvalueWindow::lower_tail(0.0).is_err());
        assert!(EigenvalueWindow::upper_tail(-1.0).is_err());
        assert!(EigenvalueWindow::centered(2.0, 0.1).is_err());
    }

    #[test]
    fn parse_unions() {
        let w = match WindowSpec::parse(" [-1,-0.6] u [-0.2, 0.2]u(0.6,1] ").unwrap() {
            WindowSpec::Explicit(w) => w,
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(w.intervals().len(), 3);
        assert!(w.contains(-1.0) && w.contains(-0.6) && w.contains(0.0) && w.contains(1.0));
        assert!(!w.contains(0.6) && !w.contains(-0.5) && !w.contains(0.3));
        assert_eq!(w.to_string(), "[-1,-0.6]u[-0.2,0.2]u(0.6,1]");
        let full = WindowSpec::parse("[-1,1]").unwrap();
        assert_eq!(full, WindowSpec::Explicit(EigenvalueWindow::full()));
    }

    #[test]
    fn parse_keywords() {
        assert_eq!(WindowSpec::parse("lower:0.3").unwrap(), WindowSpec::Lower(0.3));
        assert_eq!(WindowSpec::parse("upper: 1").unwrap(), WindowSpec::Upper(1.0));
        let c = WindowSpec::parse("center:0.25").unwrap();
        let w = c.resolve(0.5).unwrap();
        assert_eq!(w.kind(), WindowKind::Centered { center: 0.5, a: 0.25 });
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "[0,1", "0,1]", "[1,0]", "[-2,0]", "[a,b]", "[0;1]", "lower:-1", "center:x", "[0,1]u"] {
            assert!(WindowSpec::parse(bad).is_err(), "{bad}");
        }
    }
}
