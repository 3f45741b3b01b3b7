//! Named fixture inputs shipped with the crate.

use crate::diagrams::Diagram;
use crate::frontend::{parse_input, Input};
use crate::presentations::Presentation;

pub const UNKNOTTED_SPHERE: &str = include_str!("../fixtures/unknotted-sphere.txt");
pub const SINGLE_ARC: &str = include_str!("../fixtures/single-arc.txt");
pub const SPUN_TREFOIL: &str = include_str!("../fixtures/spun-trefoil.txt");
pub const SPUN_FIGURE_EIGHT: &str = include_str!("../fixtures/spun-figure-eight.txt");
pub const UNORIENTED_TWISTED: &str = include_str!("../fixtures/unoriented-twisted.txt");

/// Every fixture text, in a fixed order.
pub const ALL: &[&str] = &[
    UNKNOTTED_SPHERE,
    SINGLE_ARC,
    SPUN_TREFOIL,
    SPUN_FIGURE_EIGHT,
    UNORIENTED_TWISTED,
];

pub fn input(text: &str) -> Input {
    parse_input(text).expect("fixtures parse").input
}

pub fn diagram(text: &str) -> Diagram {
    match input(text) {
        Input::Diagram(d) => d,
        Input::Presentation(p) => panic!("fixture `{}` is a presentation", p.name),
    }
}

/// All diagram fixtures, oriented and unoriented.
pub fn diagrams() -> Vec<Diagram> {
    ALL.iter()
        .filter_map(|t| match input(t) {
            Input::Diagram(d) => Some(d),
            Input::Presentation(_) => None,
        })
        .collect()
}

/// Wirtinger-type base presentations of the oriented fixtures, with names.
pub fn oriented_bases() -> Vec<(String, Presentation)> {
    ALL.iter()
        .filter_map(|t| match input(t) {
            Input::Diagram(d) if d.is_oriented() => Some((
                d.name().to_string(),
                d.wirtinger_presentation().expect("oriented"),
            )),
            Input::Diagram(_) => None,
            Input::Presentation(p) => Some((p.name, p.presentation)),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_load() {
        assert_eq!(diagrams().len(), 4);
        let names: Vec<String> = oriented_bases().into_iter().map(|(n, _)| n).collect();
        assert_eq!(
            names,
            [
                "unknotted-sphere",
                "single-arc",
                "spun-trefoil",
                "spun-figure-eight"
            ]
        );
        assert!(!diagram(UNORIENTED_TWISTED).is_oriented());
    }
}
