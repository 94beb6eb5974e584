//! Super-efficiency for efficient DMUs and the full ranking.
//!
//! The super model removes DMU `p` from its own reference set and minimizes
//! the normalized slack sum `SEI` needed for the others to reach it.

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Technology};
use crate::eimil::{
    assess_eimil, build, read_lambda, solve_status, Assessment, BigMConfig, ResolvedBigM, Variant,
};
use crate::error::ModelError;
use crate::interval::SlackPair;
use crate::milp::MilpProblem;

/// Ordering rule written into ranking metadata.
pub const RANKING_CONVENTION: &str = "efficient DMUs first: super-infeasible ones, then by SEI descending; \
inefficient DMUs after, by EI ascending; ties (values equal after rounding to 1e-9) broken by DMU name";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuperStatus {
    Scored,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperSolution {
    /// Score `SEI`.
    pub score: f64,
    /// Zero at the assessed DMU.
    pub lambda: Vec<f64>,
    pub input_slacks: Vec<SlackPair>,
    pub output_slacks: Vec<SlackPair>,
    pub input_switches: Vec<bool>,
    pub output_switches: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperAssessment {
    pub dmu: usize,
    pub big_m: ResolvedBigM,
    /// `None` when the reduced reference set cannot reach the DMU.
    pub solution: Option<SuperSolution>,
}

impl SuperAssessment {
    pub fn status(&self) -> SuperStatus {
        match self.solution {
            Some(_) => SuperStatus::Scored,
            None => SuperStatus::Infeasible,
        }
    }

    pub fn score(&self) -> Option<f64> {
        self.solution.as_ref().map(|s| s.score)
    }
}

fn super_technology(dataset: &Dataset, p: usize) -> Result<Technology, ModelError> {
    let tech = Technology::new(dataset)?;
    tech.check_index(p)?;
    if tech.n() < 2 {
        return Err(ModelError::TooFewDmus(tech.n()));
    }
    Ok(tech)
}

/// The MILP behind [`assess_super`], for inspection.
pub fn build_super_peimil(
    dataset: &Dataset,
    p: usize,
    bigm: &BigMConfig,
) -> Result<MilpProblem, ModelError> {
    let tech = super_technology(dataset, p)?;
    let big_m = bigm.resolve(dataset, p)?;
    Ok(build(&tech, p, &big_m, Variant::Super).problem)
}

/// Super-efficiency of the DMU behind `efficiency`, which must be efficient.
pub fn assess_super(
    dataset: &Dataset,
    efficiency: &Assessment,
    bigm: &BigMConfig,
) -> Result<SuperAssessment, ModelError> {
    let p = efficiency.dmu;
    let tech = super_technology(dataset, p)?;
    if !efficiency.is_efficient() {
        return Err(ModelError::NotEfficient {
            dmu: tech.name(p).to_string(),
            score: efficiency.score,
        });
    }
    let big_m = bigm.resolve(dataset, p)?;
    let model = build(&tech, p, &big_m, Variant::Super);
    let solution = solve_status(&model.problem, tech.name(p))?.map(|sol| {
        let (input_slacks, input_switches) = model.x.iter().map(|c| c.read(&sol)).unzip();
        let (output_slacks, output_switches) = model.y.iter().map(|c| c.read(&sol)).unzip();
        SuperSolution {
            score: sol.objective.max(0.0),
            lambda: read_lambda(&model.lambda, &sol),
            input_slacks,
            output_slacks,
            input_switches,
            output_switches,
        }
    });
    Ok(SuperAssessment {
        dmu: p,
        big_m,
        solution,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    Efficient,
    Inefficient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub dmu: usize,
    pub name: String,
    pub class: Class,
    pub ei: f64,
    pub sei: Option<f64>,
    pub super_status: Option<SuperStatus>,
    pub rank: usize,
}

/// Entries in rank order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingReport {
    pub convention: String,
    pub entries: Vec<RankEntry>,
}

impl RankingReport {
    /// Rank of DMU `dmu`.
    pub fn rank_of(&self, dmu: usize) -> Option<usize> {
        self.entries.iter().find(|e| e.dmu == dmu).map(|e| e.rank)
    }
}

/// Everything computed by [`rank`].
#[derive(Debug, Clone, PartialEq)]
pub struct RankedRun {
    pub assessments: Vec<Assessment>,
    /// Indexed by DMU; `None` for inefficient DMUs.
    pub supers: Vec<Option<SuperAssessment>>,
    pub ranking: RankingReport,
}

fn quantize(v: f64) -> i64 {
    (v / 1e-9).round() as i64
}

/// Ranks (1-based, indexed like the input) from per-DMU scores.
///
/// Each row is `(efficient, score, super)`, where `super` is `None` when no
/// super model ran and `Some(None)` when it was infeasible.
pub fn ranks(names: &[&str], rows: &[(bool, f64, Option<Option<f64>>)]) -> Vec<usize> {
    // Sorted ascending: group 0 super-infeasible, 1 scored efficient, 2 inefficient.
    let key = |&(efficient, score, sup): &(bool, f64, Option<Option<f64>>)| -> (u8, i64) {
        match (efficient, sup) {
            (false, _) => (2, quantize(score)),
            (true, Some(None)) => (0, 0),
            (true, Some(Some(sei))) => (1, -quantize(sei)),
            (true, None) => (1, 0),
        }
    };
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| {
        key(&rows[a])
            .cmp(&key(&rows[b]))
            .then_with(|| names[a].cmp(names[b]))
    });
    let mut out = vec![0; rows.len()];
    for (k, j) in order.into_iter().enumerate() {
        out[j] = k + 1;
    }
    out
}

/// Orders DMUs from already computed assessments.
pub fn rank_assessments(
    dataset: &Dataset,
    assessments: &[Assessment],
    supers: &[Option<SuperAssessment>],
) -> RankingReport {
    let names: Vec<&str> = assessments
        .iter()
        .map(|a| dataset.dmus()[a.dmu].name.as_str())
        .collect();
    let sup = |a: &Assessment| supers.get(a.dmu).and_then(Option::as_ref);
    let rows: Vec<_> = assessments
        .iter()
        .map(|a| (a.is_efficient(), a.score, sup(a).map(|s| s.score())))
        .collect();
    let ranks = ranks(&names, &rows);
    let mut entries: Vec<RankEntry> = assessments
        .iter()
        .zip(&ranks)
        .map(|(a, &rank)| RankEntry {
            dmu: a.dmu,
            name: dataset.dmus()[a.dmu].name.clone(),
            class: if a.is_efficient() {
                Class::Efficient
            } else {
                Class::Inefficient
            },
            ei: a.score,
            sei: sup(a).and_then(SuperAssessment::score),
            super_status: sup(a).map(SuperAssessment::status),
            rank,
        })
        .collect();
    entries.sort_by_key(|e| e.rank);
    RankingReport {
        convention: RANKING_CONVENTION.to_string(),
        entries,
    }
}

/// Efficiency for every DMU, super-efficiency for the efficient ones, and the ranking.
pub fn rank(
    dataset: &Dataset,
    efficiency_bigm: &BigMConfig,
    super_bigm: &BigMConfig,
) -> Result<RankedRun, ModelError> {
    let assessments = (0..dataset.n())
        .map(|p| assess_eimil(dataset, p, efficiency_bigm))
        .collect::<Result<Vec<_>, _>>()?;
    let supers = if dataset.n() < 2 {
        vec![None; dataset.n()]
    } else {
        assessments
            .iter()
            .map(|a| {
                a.is_efficient()
                    .then(|| assess_super(dataset, a, super_bigm))
                    .transpose()
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    let ranking = rank_assessments(dataset, &assessments, &supers);
    Ok(RankedRun {
        assessments,
        supers,
        ranking,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{tourism_fixture, Role};
    use crate::interval::Interval;

    fn run() -> (Dataset, RankedRun) {
        let fx = tourism_fixture();
        let run = rank(&fx, &BigMConfig::default(), &BigMConfig::super_default()).unwrap();
        (fx, run)
    }

    #[test]
    fn attiki_and_sicilia() {
        let (_, run) = run();
        let sei = |p: usize| run.supers[p].as_ref().unwrap().score().unwrap();
        assert!((sei(0) - 4.042).abs() < 0.005);
        assert!((sei(9) - 0.003).abs() < 0.005);
        assert_eq!(
            run.supers[0]
                .as_ref()
                .unwrap()
                .solution
                .as_ref()
                .unwrap()
                .lambda[0],
            0.0
        );
    }

    #[test]
    fn fixture_ranking() {
        let (_, run) = run();
        let names: Vec<&str> = run
            .ranking
            .entries
            .iter()
            .map(|e| e.name.as_str())
            .collect();
        assert_eq!(names[..3], ["Attiki", "Cataluña", "Jadranska Hrvatska"]);
        assert_eq!(
            names[9..],
            [
                "Provence-Alpes-Côte d'Azur",
                "Cyprus",
                "Nisia Aigaiou, Kriti"
            ]
        );
        assert!(run
            .ranking
            .entries
            .iter()
            .take(9)
            .all(|e| e.class == Class::Efficient));
    }

    #[test]
    fn inefficient_dmu_has_no_super_score() {
        let (fx, run) = run();
        let err = assess_super(&fx, &run.assessments[1], &BigMConfig::super_default()).unwrap_err();
        assert!(matches!(err, ModelError::NotEfficient { .. }));
    }

    #[test]
    fn twins_tie_break_by_name() {
        let cell = |v: f64| Interval::degenerate(v);
        let ds = Dataset::new(
            vec![("x".into(), Role::Input), ("y".into(), Role::Output)],
            vec![
                ("b".into(), vec![cell(1.0), cell(1.0)]),
                ("a".into(), vec![cell(1.0), cell(1.0)]),
            ],
        )
        .unwrap();
        let run = rank(&ds, &BigMConfig::default(), &BigMConfig::super_default()).unwrap();
        let e = &run.ranking.entries;
        assert_eq!(
            (e[0].name.as_str(), e[0].rank, e[0].sei),
            ("a", 1, Some(0.0))
        );
        assert_eq!(
            (e[1].name.as_str(), e[1].rank, e[1].sei),
            ("b", 2, Some(0.0))
        );
    }

    #[test]
    fn removing_an_inefficient_dmu_keeps_fixture_scores() {
        let (fx, run) = run();
        let reduced = fx.without_dmu(1).unwrap();
        let again = rank(
            &reduced,
            &BigMConfig::default(),
            &BigMConfig::super_default(),
        )
        .unwrap();
        for (p, sup) in run.supers.iter().enumerate() {
            if let Some(sup) = sup {
                let q = if p > 1 { p - 1 } else { p };
                let before = sup.score().unwrap();
                let after = again.supers[q].as_ref().unwrap().score().unwrap();
                assert!((before - after).abs() < 1e-7, "{p}: {before} vs {after}");
            }
        }
    }

    #[test]
    fn infeasible_super_is_a_status() {
        use crate::eimil::BigMStrategy;
        let cell = |v: f64| Interval::degenerate(v);
        let ds = Dataset::new(
            vec![("x".into(), Role::Input), ("y".into(), Role::Output)],
            vec![
                ("a".into(), vec![cell(1.0), cell(1.0)]),
                ("b".into(), vec![cell(2.0), cell(1.0)]),
            ],
        )
        .unwrap();
        // Reaching a from b needs an input slack of 1; cap every slack at 0.5.
        let tight = BigMConfig::new(
            BigMStrategy::Explicit(
                [("x".to_string(), (0.5, 0.5)), ("y".to_string(), (0.5, 0.5))].into(),
            ),
            1.0,
        );
        let run = rank(&ds, &BigMConfig::default(), &tight).unwrap();
        let a = run.supers[0].as_ref().unwrap();
        assert_eq!(a.status(), SuperStatus::Infeasible);
        assert_eq!(a.score(), None);
        assert_eq!(
            run.ranking.entries[0].super_status,
            Some(SuperStatus::Infeasible)
        );
        assert_eq!(run.ranking.rank_of(0), Some(1));

        let run = rank(&ds, &BigMConfig::default(), &BigMConfig::super_default()).unwrap();
        assert!((run.supers[0].as_ref().unwrap().score().unwrap() - 1.0).abs() < 1e-9);
    }
}
