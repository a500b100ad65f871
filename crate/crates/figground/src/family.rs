//! Embedded family trees and their relationship facts.
//!
//! Two isomorphic 12-person families carry 104 facts over 12 relations; six
//! isomorphic 6-person families carry 22 facts each over 11 relations. A
//! fact reads "figure is the RELATION of ground". Relation names never
//! appear in any network pattern; they are used only to pair facts.

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Father,
    Mother,
    Husband,
    Wife,
    Son,
    Daughter,
    Brother,
    Sister,
    Uncle,
    Aunt,
    Nephew,
    Niece,
    ParentInLaw,
    ChildInLaw,
    SiblingInLaw,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Father => "father",
            Relation::Mother => "mother",
            Relation::Husband => "husband",
            Relation::Wife => "wife",
            Relation::Son => "son",
            Relation::Daughter => "daughter",
            Relation::Brother => "brother",
            Relation::Sister => "sister",
            Relation::Uncle => "uncle",
            Relation::Aunt => "aunt",
            Relation::Nephew => "nephew",
            Relation::Niece => "niece",
            Relation::ParentInLaw => "parent-in-law",
            Relation::ChildInLaw => "child-in-law",
            Relation::SiblingInLaw => "sibling-in-law",
        }
    }
}

/// "figure is the relation of ground"; person ids index the shared
/// localist bank across all families of a corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyFact {
    pub figure: usize,
    pub ground: usize,
    pub relation: Relation,
}

#[derive(Debug, Clone)]
pub struct Family {
    pub name: &'static str,
    pub people: Vec<&'static str>,
    /// Offset of this family's first person in the localist bank.
    pub base: usize,
    pub facts: Vec<FamilyFact>,
}

impl Family {
    pub fn contains(&self, person: usize) -> bool {
        person >= self.base && person < self.base + self.people.len()
    }
}

/// Binary-pattern encoding of a person set over a localist bank.
pub fn encode_people(people: &[usize], size: usize) -> Result<Vec<f64>, Error> {
    let mut v = vec![0.0; size];
    for &p in people {
        if p >= size {
            return Err(Error::Contract(format!("person index {p} exceeds bank size {size}")));
        }
        v[p] = 1.0;
    }
    Ok(v)
}

pub fn decode_people(pattern: &[f64]) -> Vec<usize> {
    pattern
        .iter()
        .enumerate()
        .filter(|(_, &x)| x == 1.0)
        .map(|(i, _)| i)
        .collect()
}

/// Role indices inside a 12-person tree. The structure: couple 0=1 with
/// children 4 and 5; couple 2=3 with children 6 and 7; 4 marries 8;
/// 6 marries 5, their children are 10 and 11; 9 marries 7.
///
/// Uncle and aunt are blood relations only, while nephew and niece extend
/// to in-laws; every (person, relation) question then has exactly one
/// answer, and the list totals 104 facts.
const TREE12: &[(Relation, usize, usize)] = &[
    (Relation::Father, 0, 4),
    (Relation::Father, 0, 5),
    (Relation::Father, 2, 6),
    (Relation::Father, 2, 7),
    (Relation::Father, 6, 10),
    (Relation::Father, 6, 11),
    (Relation::Mother, 1, 4),
    (Relation::Mother, 1, 5),
    (Relation::Mother, 3, 6),
    (Relation::Mother, 3, 7),
    (Relation::Mother, 5, 10),
    (Relation::Mother, 5, 11),
    (Relation::Husband, 0, 1),
    (Relation::Husband, 2, 3),
    (Relation::Husband, 4, 8),
    (Relation::Husband, 6, 5),
    (Relation::Husband, 9, 7),
    (Relation::Wife, 1, 0),
    (Relation::Wife, 3, 2),
    (Relation::Wife, 8, 4),
    (Relation::Wife, 5, 6),
    (Relation::Wife, 7, 9),
    (Relation::Son, 4, 0),
    (Relation::Son, 4, 1),
    (Relation::Son, 6, 2),
    (Relation::Son, 6, 3),
    (Relation::Son, 10, 5),
    (Relation::Son, 10, 6),
    (Relation::Daughter, 5, 0),
    (Relation::Daughter, 5, 1),
    (Relation::Daughter, 7, 2),
    (Relation::Daughter, 7, 3),
    (Relation::Daughter, 11, 5),
    (Relation::Daughter, 11, 6),
    (Relation::Brother, 4, 5),
    (Relation::Brother, 6, 7),
    (Relation::Brother, 10, 11),
    (Relation::Sister, 5, 4),
    (Relation::Sister, 7, 6),
    (Relation::Sister, 11, 10),
    (Relation::Uncle, 4, 10),
    (Relation::Uncle, 4, 11),
    (Relation::Aunt, 7, 10),
    (Relation::Aunt, 7, 11),
    (Relation::Nephew, 10, 4),
    (Relation::Nephew, 10, 8),
    (Relation::Nephew, 10, 7),
    (Relation::Nephew, 10, 9),
    (Relation::Niece, 11, 4),
    (Relation::Niece, 11, 8),
    (Relation::Niece, 11, 7),
    (Relation::Niece, 11, 9),
];

const ENGLISH12: [&str; 12] = [
    "Christopher",
    "Penelope",
    "Andrew",
    "Christine",
    "Arthur",
    "Victoria",
    "James",
    "Jennifer",
    "Margaret",
    "Charles",
    "Colin",
    "Charlotte",
];

const ITALIAN12: [&str; 12] = [
    "Roberto",
    "Maria",
    "Pierro",
    "Francesca",
    "Emilio",
    "Lucia",
    "Marco",
    "Angela",
    "Gina",
    "Tomaso",
    "Alphonso",
    "Sophia",
];

fn instantiate(
    name: &'static str,
    people: &[&'static str],
    base: usize,
    template: &[(Relation, usize, usize)],
) -> Family {
    Family {
        name,
        people: people.to_vec(),
        base,
        facts: template
            .iter()
            .map(|&(relation, f, g)| FamilyFact {
                figure: base + f,
                ground: base + g,
                relation,
            })
            .collect(),
    }
}

/// The two isomorphic 12-person trees with their 104 facts, sharing a
/// 24-unit person bank.
pub fn hinton_families() -> Vec<Family> {
    vec![
        instantiate("english", &ENGLISH12, 0, TREE12),
        instantiate("italian", &ITALIAN12, 12, TREE12),
    ]
}

/// Role indices inside a 6-person family: 0 and 1 are the parents, 2 the
/// son, 3 the daughter, 4 the son's wife, 5 the daughter's husband.
const TREE6: &[(Relation, usize, usize)] = &[
    (Relation::Son, 2, 0),
    (Relation::Son, 2, 1),
    (Relation::Daughter, 3, 0),
    (Relation::Daughter, 3, 1),
    (Relation::Father, 0, 2),
    (Relation::Father, 0, 3),
    (Relation::Mother, 1, 2),
    (Relation::Mother, 1, 3),
    (Relation::Brother, 2, 3),
    (Relation::Sister, 3, 2),
    (Relation::Wife, 4, 2),
    (Relation::Wife, 1, 0),
    (Relation::Wife, 3, 5),
    (Relation::Husband, 0, 1),
    (Relation::Husband, 2, 4),
    (Relation::Husband, 5, 3),
    (Relation::ParentInLaw, 0, 4),
    (Relation::ParentInLaw, 1, 5),
    (Relation::ChildInLaw, 4, 0),
    (Relation::ChildInLaw, 5, 1),
    (Relation::SiblingInLaw, 4, 5),
    (Relation::SiblingInLaw, 5, 4),
];

const SIX_FAMILY_NAMES: [(&str, [&str; 6]); 6] = [
    ("english", ["George", "Emma", "Henry", "Alice", "Rose", "Walter"]),
    ("italian", ["Paolo", "Chiara", "Dario", "Elena", "Silvia", "Franco"]),
    ("nordic", ["Lars", "Ingrid", "Soren", "Astrid", "Freja", "Nils"]),
    ("japanese", ["Kenji", "Yuki", "Haruto", "Aiko", "Mei", "Daichi"]),
    ("spanish", ["Diego", "Carmen", "Mateo", "Pilar", "Rosa", "Javier"]),
    ("african", ["Matope", "Neema", "Bello", "Hadiya", "Kissa", "Kwaku"]),
];

/// Six isomorphic 6-person families (22 facts each, 11 relations) sharing a
/// 36-unit person bank.
pub fn six_families() -> Vec<Family> {
    SIX_FAMILY_NAMES
        .iter()
        .enumerate()
        .map(|(i, (name, people))| instantiate(name, people, i * 6, TREE6))
        .collect()
}
