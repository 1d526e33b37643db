use std::fmt;
use std::str::FromStr;

/// The fixed sort universe. There are no user-defined sorts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Agent,
    ActionType,
    Action,
    Event,
    Moment,
    Fluent,
    Boolean,
    Real,
}

impl Sort {
    pub const ALL: [Sort; 8] = [
        Sort::Agent,
        Sort::ActionType,
        Sort::Action,
        Sort::Event,
        Sort::Moment,
        Sort::Fluent,
        Sort::Boolean,
        Sort::Real,
    ];

    /// `Action ⊑ Event`; every other sort is only a subsort of itself.
    pub fn is_subsort_of(self, other: Sort) -> bool {
        self == other || (self == Sort::Action && other == Sort::Event)
    }

    /// Least common supersort, if any.
    pub fn join(self, other: Sort) -> Option<Sort> {
        if self.is_subsort_of(other) {
            Some(other)
        } else if other.is_subsort_of(self) {
            Some(self)
        } else {
            None
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sort::Agent => "agent",
            Sort::ActionType => "action-type",
            Sort::Action => "action",
            Sort::Event => "event",
            Sort::Moment => "moment",
            Sort::Fluent => "fluent",
            Sort::Boolean => "boolean",
            Sort::Real => "real",
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownSort(pub String);

impl fmt::Display for UnknownSort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown sort `{}`", self.0)
    }
}

impl std::error::Error for UnknownSort {}

impl FromStr for Sort {
    type Err = UnknownSort;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Sort::ALL
            .iter()
            .copied()
            .find(|sort| sort.name() == s)
            .ok_or_else(|| UnknownSort(s.to_string()))
    }
}
