use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use super::pairs::Rounding;
use super::{BoxTable, Classifier, Distance, Outcome, Verdict, WitnessDetail};
use crate::error::Result;
use crate::functions::LatticeFunction;
use crate::lattice::{LatticeBox, LatticePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Class {
    Ddm,
    LNatural,
    GlobalDmc,
    LocalDmc,
    IntegrallyConvex,
    Submodular,
    /// `dom f ∩ box` is an integral box, the only domain shape a separable
    /// convex function can have.
    SeparableConvexDomainOnly,
}

impl Class {
    pub const ALL: [Class; 7] = [
        Class::Ddm,
        Class::LNatural,
        Class::GlobalDmc,
        Class::LocalDmc,
        Class::IntegrallyConvex,
        Class::Submodular,
        Class::SeparableConvexDomainOnly,
    ];

    /// Short key used on the command line and in JSON.
    pub fn key(self) -> &'static str {
        match self {
            Class::Ddm => "ddm",
            Class::LNatural => "lnat",
            Class::GlobalDmc => "gdmc",
            Class::LocalDmc => "ldmc",
            Class::IntegrallyConvex => "ic",
            Class::Submodular => "submodular",
            Class::SeparableConvexDomainOnly => "sepdom",
        }
    }

    pub fn from_key(key: &str) -> Option<Class> {
        Class::ALL.into_iter().find(|c| c.key() == key)
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::Ddm => "DDM",
            Class::LNatural => "L-natural",
            Class::GlobalDmc => "globally DMC",
            Class::LocalDmc => "locally DMC",
            Class::IntegrallyConvex => "integrally convex",
            Class::Submodular => "submodular",
            Class::SeparableConvexDomainOnly => "box domain",
        })
    }
}

/// Pairs `(premise, conclusion)` of the inclusion chain.
const IMPLICATIONS: [(Class, Class); 5] = [
    (Class::LNatural, Class::GlobalDmc),
    (Class::GlobalDmc, Class::LocalDmc),
    (Class::LocalDmc, Class::IntegrallyConvex),
    (Class::LNatural, Class::Ddm),
    (Class::Ddm, Class::IntegrallyConvex),
];

/// A report whose verdicts contradict a known inclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicationFailure {
    pub premises: Vec<Class>,
    pub conclusion: Class,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub bx: LatticeBox,
    pub verdicts: BTreeMap<Class, Verdict>,
}

impl ClassificationReport {
    pub fn get(&self, class: Class) -> Option<&Verdict> {
        self.verdicts.get(&class)
    }

    fn holds(&self, class: Class) -> Option<bool> {
        self.verdicts.get(&class).map(|v| v.holds)
    }

    /// Inclusions among the computed classes that the verdicts violate,
    /// including both directions of `L♮ ⇔ integrally convex ∧ submodular`.
    pub fn implication_failures(&self) -> Vec<ImplicationFailure> {
        let mut out = Vec::new();
        for (a, b) in IMPLICATIONS {
            if self.holds(a) == Some(true) && self.holds(b) == Some(false) {
                out.push(ImplicationFailure { premises: alloc::vec![a], conclusion: b });
            }
        }
        if let (Some(l), Some(ic), Some(sub)) =
            (self.holds(Class::LNatural), self.holds(Class::IntegrallyConvex), self.holds(Class::Submodular))
        {
            if ic && sub && !l {
                out.push(ImplicationFailure {
                    premises: alloc::vec![Class::IntegrallyConvex, Class::Submodular],
                    conclusion: Class::LNatural,
                });
            }
            if l && !sub {
                out.push(ImplicationFailure { premises: alloc::vec![Class::LNatural], conclusion: Class::Submodular });
            }
        }
        out
    }
}

impl Classifier {
    pub(crate) fn box_domain_on(&self, t: &BoxTable) -> Result<Verdict> {
        let n = t.dim();
        let mut z = alloc::vec![0; n];
        t.scan(Distance::Any, |x, y, _, _| {
            for i in 0..n {
                if x[i] == y[i] {
                    continue;
                }
                z.copy_from_slice(x);
                z[i] = y[i];
                if t.get(&z).is_infinite() {
                    return Ok(Outcome::Fail(Some(WitnessDetail::Outside(LatticePoint::from(&z[..])))));
                }
            }
            let differing: Vec<usize> = (0..n).filter(|&i| x[i] != y[i]).collect();
            if let [i] = differing[..] {
                if x[i].abs_diff(y[i]) >= 2 {
                    z.copy_from_slice(x);
                    z[i] += (y[i] - x[i]).signum();
                    if t.get(&z).is_infinite() {
                        return Ok(Outcome::Fail(Some(WitnessDetail::Outside(LatticePoint::from(&z[..])))));
                    }
                }
            }
            Ok(Outcome::Pass)
        })
    }

    fn class_on(&self, t: &BoxTable, class: Class) -> Result<Verdict> {
        match class {
            Class::Ddm => self.midpoint_on(t, Distance::Any, Rounding::Directed),
            Class::LNatural => self.midpoint_on(t, Distance::Any, Rounding::Plain),
            Class::GlobalDmc => self.midpoint_on(t, Distance::AtLeast(2), Rounding::Plain),
            Class::LocalDmc => self.local_dmc_on(t),
            Class::IntegrallyConvex => self.integrally_convex_on(t),
            Class::Submodular => self.submodular_on(t),
            Class::SeparableConvexDomainOnly => self.box_domain_on(t),
        }
    }

    /// Runs the requested classes on one tabulation of `f`.
    pub fn classify(&self, f: &LatticeFunction, bx: &LatticeBox, classes: &[Class]) -> Result<ClassificationReport> {
        let t = BoxTable::new(f, bx, self.max_pairs)?;
        let mut verdicts = BTreeMap::new();
        for &c in classes {
            verdicts.insert(c, self.class_on(&t, c)?);
        }
        Ok(ClassificationReport { bx: bx.clone(), verdicts })
    }

    /// The five DDM characterization variants on one tabulation of `f`.
    pub fn ddm_characterizations(&self, f: &LatticeFunction, bx: &LatticeBox) -> Result<[Verdict; 5]> {
        let t = BoxTable::new(f, bx, self.max_pairs)?;
        Ok([
            self.ddm_variant_on(&t, 1)?,
            self.ddm_variant_on(&t, 2)?,
            self.ddm_variant_on(&t, 3)?,
            self.ddm_variant_on(&t, 4)?,
            self.ddm_variant_on(&t, 5)?,
        ])
    }

    /// The four L♮ characterization variants on one tabulation of `f`.
    pub fn lnat_characterizations(&self, f: &LatticeFunction, bx: &LatticeBox) -> Result<[Verdict; 4]> {
        let t = BoxTable::new(f, bx, self.max_pairs)?;
        Ok([
            self.lnat_variant_on(&t, 1)?,
            self.lnat_variant_on(&t, 2)?,
            self.lnat_variant_on(&t, 3)?,
            self.lnat_variant_on(&t, 4)?,
        ])
    }
}

pub fn classify(f: &LatticeFunction, bx: &LatticeBox, classes: &[Class]) -> Result<ClassificationReport> {
    Classifier::default().classify(f, bx, classes)
}
