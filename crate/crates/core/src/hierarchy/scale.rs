//! The 1–9 pairwise judgment scale.
//!
//! A judgment is stored as an integer grade plus a direction flag, so a cell
//! and its mirror always describe the same judgment with the roles swapped
//! and reciprocity holds exactly.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::ModelError;

pub const MIN_GRADE: u8 = 1;
pub const MAX_GRADE: u8 = 9;

/// One pairwise judgment: `grade` when `inverted` is false, `1/grade` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Intensity {
    grade: u8,
    inverted: bool,
}

impl Intensity {
    pub const EQUAL: Intensity = Intensity {
        grade: 1,
        inverted: false,
    };

    pub fn new(grade: u8, inverted: bool) -> Result<Self, ModelError> {
        if !(MIN_GRADE..=MAX_GRADE).contains(&grade) {
            return Err(ModelError::OutOfScale {
                grade: i64::from(grade),
            });
        }
        // 1 and 1/1 are the same judgment; keep a single representation.
        Ok(Self {
            grade,
            inverted: inverted && grade != 1,
        })
    }

    /// Accepts any integer, as it arrives from documents and requests.
    pub fn from_parts(grade: i64, inverted: bool) -> Result<Self, ModelError> {
        let g = u8::try_from(grade).map_err(|_| ModelError::OutOfScale { grade })?;
        Self::new(g, inverted)
    }

    pub fn grade(self) -> u8 {
        self.grade
    }

    pub fn inverted(self) -> bool {
        self.inverted
    }

    pub fn reciprocal(self) -> Self {
        Self {
            grade: self.grade,
            inverted: !self.inverted && self.grade != 1,
        }
    }

    pub fn value(self) -> f64 {
        if self.inverted {
            1.0 / f64::from(self.grade)
        } else {
            f64::from(self.grade)
        }
    }

    /// Nearest scale point to a positive ratio, measured in log space.
    pub fn nearest(ratio: f64) -> Self {
        let (magnitude, inverted) = if ratio >= 1.0 {
            (ratio, false)
        } else {
            (1.0 / ratio, true)
        };
        let ln = magnitude.ln();
        let mut best = 1u8;
        let mut best_dist = f64::INFINITY;
        for g in MIN_GRADE..=MAX_GRADE {
            let d = (f64::from(g).ln() - ln).abs();
            if d < best_dist {
                best = g;
                best_dist = d;
            }
        }
        Self {
            grade: best,
            inverted: inverted && best != 1,
        }
    }
}

impl fmt::Display for Intensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverted {
            write!(f, "1/{}", self.grade)
        } else {
            write!(f, "{}", self.grade)
        }
    }
}

/// Linguistic descriptor attached to a grade.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScaleLabel {
    pub grade: u8,
    pub definition: &'static str,
    pub explanation: &'static str,
    pub intermediate: bool,
}

const LABELS: [(&str, &str); 5] = [
    (
        "Equal Importance",
        "Two activities contribute equally to the objective",
    ),
    (
        "Moderate Importance",
        "Experience and judgment slightly favor one activity over another",
    ),
    (
        "Strong Importance",
        "Experience and judgment strongly favor one activity over another",
    ),
    (
        "Very Strong or Demonstrated Importance",
        "An activity is favored very strongly over another; its dominance demonstrated in practice",
    ),
    (
        "Extreme Importance",
        "The evidence favoring one activity over another is of the highest possible order of affirmation",
    ),
];

pub const INTERMEDIATE_LABEL: &str = "Intermediate between adjacent judgments";

pub fn scale_label(grade: i64) -> Result<ScaleLabel, ModelError> {
    if !(1..=9).contains(&grade) {
        return Err(ModelError::OutOfScale { grade });
    }
    let grade = grade as u8;
    if grade % 2 == 1 {
        let (definition, explanation) = LABELS[usize::from(grade / 2)];
        Ok(ScaleLabel {
            grade,
            definition,
            explanation,
            intermediate: false,
        })
    } else {
        Ok(ScaleLabel {
            grade,
            definition: INTERMEDIATE_LABEL,
            explanation: "The judgment falls between two of the labelled assessments",
            intermediate: true,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_grades_carry_labels() {
        assert_eq!(scale_label(1).unwrap().definition, "Equal Importance");
        assert_eq!(
            scale_label(7).unwrap().definition,
            "Very Strong or Demonstrated Importance"
        );
        assert_eq!(scale_label(9).unwrap().definition, "Extreme Importance");
        assert!(!scale_label(5).unwrap().intermediate);
    }

    #[test]
    fn even_grades_are_intermediate() {
        for g in [2, 4, 6, 8] {
            let l = scale_label(g).unwrap();
            assert!(l.intermediate);
            assert_eq!(l.definition, INTERMEDIATE_LABEL);
        }
    }

    #[test]
    fn out_of_scale() {
        assert!(matches!(scale_label(0), Err(ModelError::OutOfScale { grade: 0 })));
        assert!(matches!(scale_label(10), Err(ModelError::OutOfScale { .. })));
        assert!(Intensity::from_parts(-3, false).is_err());
        assert!(Intensity::new(10, true).is_err());
    }

    #[test]
    fn reciprocal_swaps_direction() {
        let nine = Intensity::new(9, false).unwrap();
        assert_eq!(nine.reciprocal().to_string(), "1/9");
        assert_eq!(nine.reciprocal().reciprocal(), nine);
        assert_eq!(nine.value() * nine.reciprocal().value(), 1.0);
        assert_eq!(Intensity::new(1, true).unwrap(), Intensity::EQUAL);
        assert_eq!(Intensity::EQUAL.reciprocal(), Intensity::EQUAL);
    }

    #[test]
    fn nearest_scale_point() {
        assert_eq!(Intensity::nearest(3.1).to_string(), "3");
        assert_eq!(Intensity::nearest(1.0 / 6.9).to_string(), "1/7");
        assert_eq!(Intensity::nearest(40.0).to_string(), "9");
        assert_eq!(Intensity::nearest(1.05), Intensity::EQUAL);
    }
}
