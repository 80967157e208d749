//! The four subcommands. Each returns serializable tables plus a pass/fail flag.

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use pbwsplit::cache::{CacheStatus, ModuleCache};
use pbwsplit::charzero::{build_hw_module_q_capped, DEFAULT_DIM_CAP};
use pbwsplit::criterion::{check_condition2, check_v0, g2_verify_with, CriterionReport, G2Report};
use pbwsplit::multiindex::MonomialOrder;
use pbwsplit::pbw::{essential_basis_with, g2_essential_table, pbw_filtration, EssentialSet};
use pbwsplit::report::RunStats;
use pbwsplit::rootsys::{CartanData, RootSystem, Weight};
use pbwsplit::tensorfilt::induced_filtration;
use pbwsplit::weylmod::{weyl_module_capped, WeylModuleP};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootRow {
    pub index: usize,
    /// coordinates in the simple roots
    pub root: String,
    pub height: i64,
    /// `<beta, alpha_i^vee>` for each simple root
    pub pairings: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootTable {
    pub type_label: String,
    pub cartan: Vec<Vec<i64>>,
    pub roots: Vec<RootRow>,
    pub jacobi: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<RunStats>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EssentialEntry {
    pub s: String,
    pub degree: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub agrees: bool,
    /// essential but rejected by the inequalities
    pub missing_from_table: Vec<String>,
    /// admitted by the inequalities but not essential
    pub missing_from_sweep: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EssentialTable {
    pub type_label: String,
    pub lambda: Weight,
    /// `0` for the rationals
    pub p: u64,
    pub order: MonomialOrder,
    pub count: usize,
    pub weyl_dimension: String,
    pub entries: Vec<EssentialEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<RunStats>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRow {
    pub n: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiltrationReport {
    pub type_label: String,
    pub lambda: Weight,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Weight>,
    pub p: u64,
    /// `dim` of the `n`-th filtration level
    pub levels: Vec<LevelRow>,
    pub graded: Vec<usize>,
    pub full_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<RunStats>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VerifyReport {
    G2(G2Report),
    Criterion(CriterionReport),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    G2,
    Condition2,
    V0,
}

/// Result of a command: tables to print and whether every verification held.
pub struct Outcome<T> {
    pub tables: Vec<T>,
    pub ok: bool,
}

pub struct Settings {
    pub config: RunConfig,
    pub stats: bool,
}

impl Settings {
    fn cap(&self) -> u128 {
        self.config.cap.map(u128::from).unwrap_or(DEFAULT_DIM_CAP)
    }

    fn order(&self) -> MonomialOrder {
        self.config.order.unwrap_or_default()
    }

    fn stats_since(&self, start: Instant) -> Option<RunStats> {
        self.stats.then(|| RunStats::since(start))
    }

    fn cache(&self) -> Option<ModuleCache> {
        self.config.cache_dir.as_ref().map(ModuleCache::new)
    }

    fn root_system(&self) -> Result<Arc<RootSystem>, CliError> {
        let rs = match (&self.config.type_label, &self.config.cartan) {
            (Some(label), None) => RootSystem::from_label(label)?,
            (None, Some(path)) => RootSystem::build(load_cartan(path)?)?,
            (None, None) => {
                return Err(CliError::Usage(
                    "a root system is required: --type or --cartan".into(),
                ))
            }
            (Some(_), Some(_)) => {
                return Err(CliError::Usage(
                    "give either --type or --cartan, not both".into(),
                ))
            }
        };
        Ok(Arc::new(rs))
    }

    fn weights(&self, rs: &RootSystem) -> Result<Vec<Weight>, CliError> {
        if self.config.weights.is_empty() {
            return Err(CliError::Usage("at least one --weight is required".into()));
        }
        for w in &self.config.weights {
            rs.check_dominant(w)?;
        }
        Ok(self.config.weights.clone())
    }

    fn primes(&self) -> Result<Vec<u64>, CliError> {
        if self.config.primes.is_empty() {
            return Err(CliError::Usage("at least one --p is required".into()));
        }
        Ok(self.config.primes.clone())
    }

    fn module_p(
        &self,
        rs: &Arc<RootSystem>,
        lambda: &Weight,
        p: u64,
    ) -> Result<WeylModuleP, CliError> {
        match self.cache() {
            Some(cache) => {
                let (m, status) = cache.weyl_module(rs, lambda, p, self.cap())?;
                if status != CacheStatus::Hit {
                    log::info!("cache {status:?} for {} {lambda} p={p}", rs.name());
                }
                Ok(m)
            }
            None => Ok(weyl_module_capped(rs, lambda, p, self.cap())?),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CartanFile {
    Bare(Vec<Vec<i64>>),
    Full(CartanData),
}

/// Parses a Cartan matrix given either as a bare array of rows or as
/// `{"matrix": [...], "label": ...}`.
pub fn parse_cartan(text: &str) -> Result<CartanData, CliError> {
    let parsed: CartanFile =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("Cartan matrix: {e}")))?;
    let data = match parsed {
        CartanFile::Bare(m) => CartanData::new(m),
        CartanFile::Full(d) => d,
    };
    data.validate()?;
    Ok(data)
}

fn load_cartan(path: &Path) -> Result<CartanData, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    parse_cartan(&text)
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn cmd_roots(s: &Settings) -> Result<Outcome<RootTable>, CliError> {
    let start = Instant::now();
    let rs = s.root_system()?;
    let roots = (0..rs.num_positive())
        .map(|k| RootRow {
            index: k + 1,
            root: join(&rs.root(k).coords),
            height: rs.root(k).height,
            pairings: join(rs.root_weight(k).coords()),
        })
        .collect();
    let jacobi = rs.chevalley().jacobi_holds();
    let table = RootTable {
        type_label: rs.name(),
        cartan: rs.cartan().matrix.clone(),
        roots,
        jacobi,
        stats: s.stats_since(start),
    };
    Ok(Outcome {
        tables: vec![table],
        ok: jacobi,
    })
}

fn essential_entries(set: &EssentialSet, order: MonomialOrder) -> Vec<EssentialEntry> {
    let mut v: Vec<_> = set.iter().cloned().collect();
    v.sort_by(|a, b| order.compare(a, b));
    v.into_iter()
        .map(|s| EssentialEntry {
            degree: s.degree(),
            s: s.to_string(),
        })
        .collect()
}

pub fn cmd_essential(s: &Settings, oracle: bool) -> Result<Outcome<EssentialTable>, CliError> {
    let rs = s.root_system()?;
    if oracle && !rs.is_g2() {
        return Err(CliError::Usage(
            "--oracle compares against the G2 inequality table and needs type G2".into(),
        ));
    }
    let order = s.order();
    // no prime means the rationals
    let primes: Vec<u64> = if s.config.primes.is_empty() {
        vec![0]
    } else {
        s.config.primes.clone()
    };
    let mut tables = Vec::new();
    let mut ok = true;
    for lambda in s.weights(&rs)? {
        for &p in &primes {
            let start = Instant::now();
            let set = if p == 0 {
                let q = build_hw_module_q_capped(&rs, &lambda, s.cap())?;
                essential_basis_with(q.module(), None, order).set().clone()
            } else {
                let m = s.module_p(&rs, &lambda, p)?;
                essential_basis_with(m.module(), None, order).set().clone()
            };
            let oracle_check = if oracle {
                let c = lambda.coords();
                let table = g2_essential_table(&rs, c[0] as u32, c[1] as u32)?;
                let mut missing_from_table: Vec<_> = set
                    .iter()
                    .filter(|x| !table.contains(x))
                    .map(|x| x.to_string())
                    .collect();
                let mut missing_from_sweep: Vec<_> = table
                    .iter()
                    .filter(|x| !set.contains(x))
                    .map(|x| x.to_string())
                    .collect();
                missing_from_table.sort();
                missing_from_sweep.sort();
                let agrees = missing_from_table.is_empty() && missing_from_sweep.is_empty();
                if !agrees {
                    log::error!(
                        "oracle mismatch for {lambda}: {} extra, {} missing",
                        missing_from_table.len(),
                        missing_from_sweep.len()
                    );
                }
                ok &= agrees;
                Some(OracleCheck {
                    agrees,
                    missing_from_table,
                    missing_from_sweep,
                })
            } else {
                None
            };
            tables.push(EssentialTable {
                type_label: rs.name(),
                lambda: lambda.clone(),
                p,
                order,
                count: set.len(),
                weyl_dimension: rs.weyl_dimension(&lambda).to_string(),
                entries: essential_entries(&set, order),
                oracle: oracle_check,
                stats: s.stats_since(start),
            });
        }
    }
    Ok(Outcome { tables, ok })
}

fn cumulative(graded: &[usize]) -> Vec<LevelRow> {
    let mut acc = 0;
    graded
        .iter()
        .enumerate()
        .map(|(n, &d)| {
            acc += d;
            LevelRow { n, dim: acc }
        })
        .collect()
}

pub fn cmd_filtration(s: &Settings) -> Result<Outcome<FiltrationReport>, CliError> {
    let rs = s.root_system()?;
    let primes: Vec<u64> = if s.config.primes.is_empty() {
        vec![0]
    } else {
        s.config.primes.clone()
    };
    let mu = s.config.tensor.clone();
    if let Some(mu) = &mu {
        rs.check_dominant(mu)?;
    }
    let mut tables = Vec::new();
    for lambda in s.weights(&rs)? {
        for &p in &primes {
            let start = Instant::now();
            let (graded, full_dim) = match (&mu, p) {
                (None, 0) => {
                    let q = build_hw_module_q_capped(&rs, &lambda, s.cap())?;
                    (pbw_filtration(q.module()).graded, q.dim())
                }
                (None, p) => {
                    let m = s.module_p(&rs, &lambda, p)?;
                    (pbw_filtration(m.module()).graded, m.dim())
                }
                (Some(mu), 0) => {
                    let a = build_hw_module_q_capped(&rs, &lambda, s.cap())?;
                    let b = build_hw_module_q_capped(&rs, mu, s.cap())?;
                    let t = induced_filtration(a.module(), b.module(), s.cap())?;
                    (t.graded(), t.full_dim)
                }
                (Some(mu), p) => {
                    let a = s.module_p(&rs, &lambda, p)?;
                    let b = s.module_p(&rs, mu, p)?;
                    let t = induced_filtration(a.module(), b.module(), s.cap())?;
                    (t.graded(), t.full_dim)
                }
            };
            let note = match &mu {
                Some(mu) if mu.coords().iter().all(|&c| c == 0) => {
                    Some(if graded.iter().skip(1).all(|&d| d == 0) {
                        "mu = 0: the filtration is concentrated in degree 0".to_string()
                    } else {
                        "mu = 0 but the filtration is not concentrated in degree 0".to_string()
                    })
                }
                _ => None,
            };
            tables.push(FiltrationReport {
                type_label: rs.name(),
                lambda: lambda.clone(),
                mu: mu.clone(),
                p,
                levels: cumulative(&graded),
                graded,
                full_dim,
                note,
                stats: s.stats_since(start),
            });
        }
    }
    Ok(Outcome { tables, ok: true })
}

pub fn cmd_verify(s: &Settings, check: Check) -> Result<Outcome<VerifyReport>, CliError> {
    let primes = s.primes()?;
    let mut tables = Vec::new();
    let mut ok = true;
    match check {
        Check::G2 => {
            if s.config.cartan.is_some()
                || s.config
                    .type_label
                    .as_deref()
                    .is_some_and(|l| !l.eq_ignore_ascii_case("G2"))
            {
                return Err(CliError::Usage("--g2 runs on type G2 only".into()));
            }
            for p in primes {
                let start = Instant::now();
                let mut r = g2_verify_with(p, s.order())?;
                r.stats = s.stats_since(start);
                if r.exploration {
                    eprintln!("EXPLORATION ONLY: p = {p} < 11, the report certifies nothing");
                } else {
                    ok &= r.overall;
                }
                tables.push(VerifyReport::G2(r));
            }
        }
        Check::Condition2 | Check::V0 => {
            let rs = s.root_system()?;
            for p in primes {
                let start = Instant::now();
                let mut r = match check {
                    Check::Condition2 => check_condition2(&rs, p, s.cap())?,
                    _ => check_v0(&rs, p, s.cap())?,
                };
                r.stats = s.stats_since(start);
                ok &= r.verdict;
                tables.push(VerifyReport::Criterion(r));
            }
        }
    }
    Ok(Outcome { tables, ok })
}
