//! Clause-by-clause results of the verification suites.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Violated,
    /// The outcome depends on values below a truncation frontier.
    Undetermined,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Violated => "violated",
            Status::Undetermined => "undetermined",
        })
    }
}

/// The two sides that failed to agree, in canonical text form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub lhs: String,
    pub rhs: String,
    pub inputs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub status: Status,
    /// Number of instances checked.
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Holds => "PASS",
            Status::Violated => "FAIL",
            Status::Undetermined => "UNDETERMINED",
        };
        write!(f, "{tag} {} ({} instances)", self.axiom, self.samples)?;
        if let Some(w) = &self.witness {
            write!(f, "\n  lhs: {}\n  rhs: {}", w.lhs, w.rhs)?;
            for i in &w.inputs {
                write!(f, "\n  input: {i}")?;
            }
        }
        Ok(())
    }
}

/// Accumulates instances of one clause; the first failure is kept as witness.
#[derive(Debug, Clone)]
pub struct Tally {
    axiom: String,
    samples: usize,
    status: Status,
    witness: Option<Witness>,
}

impl Tally {
    pub fn new(axiom: impl Into<String>) -> Self {
        Tally {
            axiom: axiom.into(),
            samples: 0,
            status: Status::Holds,
            witness: None,
        }
    }

    /// Records one instance whose outcome is `status`.
    pub fn record(&mut self, status: Status, witness: impl FnOnce() -> Witness) {
        self.samples += 1;
        // Violated beats undetermined beats holds; keep the first witness of the worst kind.
        let rank = |s: Status| match s {
            Status::Holds => 0,
            Status::Undetermined => 1,
            Status::Violated => 2,
        };
        if rank(status) > rank(self.status) {
            self.status = status;
            self.witness = Some(witness());
        }
    }

    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        self.record(if ok { Status::Holds } else { Status::Violated }, witness);
    }

    /// Compares two rendered sides for structural equality.
    pub fn check_eq<T: PartialEq + fmt::Display>(&mut self, lhs: &T, rhs: &T, inputs: &[&dyn fmt::Display]) {
        let ok = lhs == rhs;
        self.check(ok, || Witness {
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            inputs: inputs.iter().map(|i| i.to_string()).collect(),
        });
    }

    pub fn finish(self) -> AxiomReport {
        AxiomReport {
            axiom: self.axiom,
            status: self.status,
            samples: self.samples,
            witness: self.witness,
        }
    }
}

fn roman(s: &str) -> Option<u32> {
    let digit = |c| match c {
        'i' => Some(1),
        'v' => Some(5),
        'x' => Some(10),
        _ => None,
    };
    let vals: Vec<u32> = s.chars().map(digit).collect::<Option<_>>()?;
    let mut total: i64 = 0;
    for (i, &v) in vals.iter().enumerate() {
        if vals.get(i + 1).is_some_and(|&next| next > v) {
            total -= v as i64;
        } else {
            total += v as i64;
        }
    }
    (total > 0 && !s.is_empty()).then_some(total as u32)
}

/// `"HD.3"` sorts by 3 and `"TL.xiv"` by 14; anything else sorts as text.
fn clause_key(id: &str) -> (String, u32, String) {
    match id.split_once('.') {
        Some((prefix, suffix)) => {
            let (head, tail) = suffix.split_once('.').unwrap_or((suffix, ""));
            let n = head.parse().ok().or_else(|| roman(head)).unwrap_or(u32::MAX);
            (prefix.to_string(), n, tail.to_string())
        }
        None => (id.to_string(), 0, String::new()),
    }
}

pub fn canonicalize(mut reports: Vec<AxiomReport>) -> Vec<AxiomReport> {
    reports.sort_by_cached_key(|r| clause_key(&r.axiom));
    reports
}

pub fn all_hold(reports: &[AxiomReport]) -> bool {
    reports.iter().all(AxiomReport::holds)
}
