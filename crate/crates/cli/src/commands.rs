use std::collections::BTreeMap;

use regquot::extensions::{compare_splice, theta_representative, GradedSES, ThetaRepresentative};
use regquot::homology::{freeness_check, koszul_regularity_probe, tor};
use regquot::koszul::verify_identities;
use regquot::resolution::{build_k_ris, default_max_internal, verify_exactness_of, KRIsComplex};
use regquot::spectral::{build_double_complex, collapse_check, d1_support_blocks};
use regquot::{ChainComplex, Field, Polynomial, RegularSequence, Regularity, Scalar, ScalarVisitor};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{ConfigError, RunConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Build,
    Verify,
    Tor,
    Spectral,
    Splice,
}

/// The document every command writes.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: CommandKind,
    pub config: RunConfig,
    pub ok: bool,
    pub checks: BTreeMap<String, bool>,
    pub warnings: Vec<String>,
    pub data: Value,
}

struct Builder {
    checks: BTreeMap<String, bool>,
    warnings: Vec<String>,
    data: serde_json::Map<String, Value>,
}

impl Builder {
    fn new() -> Self {
        Builder { checks: BTreeMap::new(), warnings: Vec::new(), data: serde_json::Map::new() }
    }

    fn check(&mut self, name: &str, ok: bool) {
        self.checks.insert(name.to_string(), ok);
    }

    fn put(&mut self, key: &str, v: impl Serialize) {
        self.data.insert(key.to_string(), serde_json::to_value(v).expect("report data serializes"));
    }

    fn finish(self, command: CommandKind, config: &RunConfig) -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            command,
            config: config.clone(),
            ok: self.checks.values().all(|&b| b),
            checks: self.checks,
            warnings: self.warnings,
            data: Value::Object(self.data),
        }
    }
}

pub fn run(kind: CommandKind, cfg: &RunConfig) -> Result<Report, ConfigError> {
    cfg.field.visit(Dispatch { kind, cfg })?
}

struct Dispatch<'a> {
    kind: CommandKind,
    cfg: &'a RunConfig,
}

impl ScalarVisitor for Dispatch<'_> {
    type Output = Result<Report, ConfigError>;

    fn visit<C: Scalar>(self) -> Self::Output {
        let seq = self.cfg.sequence_over::<C>()?;
        let mut b = Builder::new();
        b.put("sequence", seq.describe());
        b.put("generator_degrees", seq.degrees());
        b.put("regularity", seq.regularity());
        match self.kind {
            CommandKind::Build => build(self.cfg, &seq, &mut b)?,
            CommandKind::Verify => verify(self.cfg, &seq, &mut b)?,
            CommandKind::Tor => tor_cmd(self.cfg, &seq, &mut b)?,
            CommandKind::Spectral => spectral(&seq, self.cfg.s, &mut b)?,
            CommandKind::Splice => splice(&seq, self.cfg.s, &mut b)?,
        }
        Ok(b.finish(self.kind, self.cfg))
    }
}

/// Zeroes the first nonzero entry of `d_1`; the result is no longer a
/// resolution, and for two or more generators no longer a complex.
pub fn corrupt<C: Scalar>(c: &ChainComplex<C>) -> Result<ChainComplex<C>, regquot::Error> {
    let mut ds = c.differentials().to_vec();
    if let Some(d1) = ds.first_mut() {
        if let Some(j) = d1.first_nonzero_column() {
            let i = *d1.column(j).keys().next().expect("nonzero column");
            d1.set_entry(i, j, Polynomial::zero(c.n_vars()));
        }
    }
    ChainComplex::new(c.n_vars(), c.modules().to_vec(), ds)
}

fn resolution<C: Scalar>(cfg: &RunConfig, seq: &RegularSequence<C>) -> Result<KRIsComplex<C>, regquot::Error> {
    let mut k = build_k_ris(seq, cfg.s)?;
    if cfg.corrupt {
        k.complex = corrupt(&k.complex)?;
    }
    Ok(k)
}

fn max_internal<C: Scalar>(cfg: &RunConfig, seq: &RegularSequence<C>) -> u32 {
    cfg.max_internal_degree.unwrap_or_else(|| default_max_internal(seq, cfg.s))
}

fn probe_regularity<C: Scalar>(cfg: &RunConfig, seq: &RegularSequence<C>, b: &mut Builder) {
    if seq.regularity() == Regularity::Certified {
        return;
    }
    let probe = koszul_regularity_probe(seq, max_internal(cfg, seq));
    if !probe.passed {
        let (n, d) = probe.first_failure.expect("failed probe has a witness");
        b.warnings.push(format!("sequence is not regular: Koszul homology H_{n} is nonzero in internal degree {d}"));
    }
    b.put("regularity_probe", probe);
}

fn truncate<T>(v: &mut Vec<T>, max: Option<usize>) {
    if let Some(m) = max {
        v.truncate(m + 1);
    }
}

fn build<C: Scalar>(cfg: &RunConfig, seq: &RegularSequence<C>, b: &mut Builder) -> Result<(), ConfigError> {
    probe_regularity(cfg, seq, b);
    let k = resolution(cfg, seq)?;
    let square = k.complex.verify();
    let identities = verify_identities(seq, cfg.s);
    b.check("d_squared_zero", square.ok);
    b.check("identities", identities.all_ok());
    if !cfg.corrupt {
        b.check("augmentation_kills_boundaries", k.augmentation_kills_boundaries()?);
    }
    b.put("generator_counts", k.complex.ranks());
    b.put("d_squared", square);
    b.put("identity_failures", identities.checks.iter().filter(|c| !c.ok).collect::<Vec<_>>());
    b.put("identity_checks", identities.checks.len());
    b.put("complex", k.complex.serialize_text().lines().collect::<Vec<_>>());
    Ok(())
}

fn verify<C: Scalar>(cfg: &RunConfig, seq: &RegularSequence<C>, b: &mut Builder) -> Result<(), ConfigError> {
    probe_regularity(cfg, seq, b);
    let k = resolution(cfg, seq)?;
    let d = max_internal(cfg, seq);
    let square = k.complex.verify();
    let mut exactness = verify_exactness_of(&k.complex, seq, cfg.s, d)?;
    let identities = verify_identities(seq, cfg.s);
    let freeness = freeness_check(seq, cfg.s)?;
    b.check("d_squared_zero", square.ok);
    b.check("exact", exactness.iter().all(|r| r.ok()));
    b.check("identities", identities.all_ok());
    b.check("freeness", freeness.ok());
    for r in &mut exactness {
        truncate(&mut r.grid, cfg.max_homological_degree);
    }
    b.put("max_internal_degree", d);
    b.put("d_squared", square);
    b.put("exactness", exactness);
    b.put("identity_failures", identities.checks.iter().filter(|c| !c.ok).collect::<Vec<_>>());
    b.put("freeness", freeness);
    Ok(())
}

fn tor_cmd<C: Scalar>(cfg: &RunConfig, seq: &RegularSequence<C>, b: &mut Builder) -> Result<(), ConfigError> {
    probe_regularity(cfg, seq, b);
    let mut report = tor(seq, cfg.s)?;
    b.check("routes_agree", report.routes_agree);
    b.check("torsion_free", report.torsion.iter().all(Vec::is_empty));
    if cfg.s >= 2 {
        b.check("products_zero", report.products.all_zero);
        let m = report.induced_reduction.as_ref().expect("reduction map for s ≥ 2");
        b.check("reduction_trivial", m.zero_in_positive_degrees && m.identity_in_degree_zero);
    }
    let max = cfg.max_homological_degree;
    truncate(&mut report.ranks, max);
    truncate(&mut report.generators, max);
    truncate(&mut report.torsion, max);
    truncate(&mut report.coker_ranks, max);
    truncate(&mut report.e2_ranks, max);
    b.put("tor", report);
    Ok(())
}

#[derive(Serialize)]
struct BlockStats {
    matrices: usize,
    blocks: usize,
    largest_block: (usize, usize),
    cross_entries: usize,
    all_reassemble: bool,
}

fn spectral<C: Scalar>(seq: &RegularSequence<C>, s: usize, b: &mut Builder) -> Result<(), ConfigError> {
    let double = build_double_complex(seq, s)?;
    let dcheck = double.verify();
    let collapse = collapse_check(seq, s)?;
    let n = seq.len();
    let mut stats = BlockStats { matrices: 0, blocks: 0, largest_block: (0, 0), cross_entries: 0, all_reassemble: true };
    for p in 0..s.saturating_sub(1) {
        for q in 1..=n {
            let Some(dec) = d1_support_blocks(n, p, q)? else { continue };
            stats.matrices += 1;
            stats.blocks += dec.blocks.len();
            stats.cross_entries += dec.cross_entries;
            stats.all_reassemble &= dec.ok();
            for blk in &dec.blocks {
                let size = (blk.rows.len(), blk.columns.len());
                if size.0 * size.1 > stats.largest_block.0 * stats.largest_block.1 {
                    stats.largest_block = size;
                }
            }
        }
    }
    b.check("double_complex", dcheck.ok());
    b.check("totalizes_to_resolution", double.total_matches_resolution()?);
    b.check("e2_support", collapse.support_ok);
    b.check("collapse", collapse.e2_equals_einf);
    b.check("totals_match_tor", collapse.totals_match);
    b.check("blocks_reassemble", stats.all_reassemble);
    b.put("e1_grid", collapse.e1.render().lines().collect::<Vec<_>>());
    b.put("e2_grid", collapse.e2.render().lines().collect::<Vec<_>>());
    b.put("e2_support", collapse.e2.support());
    b.put("double_complex", dcheck);
    b.put("blocks", stats);
    b.put("collapse", collapse);
    Ok(())
}

fn theta_demos<F: Field>(seq: &RegularSequence<F>, s: usize) -> Result<(ThetaRepresentative, ThetaRepresentative), regquot::Error> {
    let ses = GradedSES::power_filtration(seq, s)?;
    let p = build_k_ris(seq, s - 1)?;
    let aug: Vec<Vec<Polynomial<F>>> = p.complex.module(0).generators().iter().map(|g| vec![p.tag_value(g)]).collect();
    let nonsplit = theta_representative(&p.complex, &aug, &ses)?;
    let split = theta_representative(&p.complex, &aug, &GradedSES::split(ses.l.clone(), ses.n.clone()))?;
    Ok((nonsplit, split))
}

fn splice<C: Scalar>(seq: &RegularSequence<C>, s: usize, b: &mut Builder) -> Result<(), ConfigError> {
    let cmp = compare_splice(seq, s)?;
    b.check("identical", cmp.identical);
    b.put("reconstruction", &cmp);
    if s >= 2 {
        let (nonsplit, split) = theta_demos(&seq.to_field(), s)?;
        b.check("theta_cocycle", nonsplit.cocycle && split.cocycle);
        b.check("theta_nontrivial", !nonsplit.trivial);
        b.check("split_theta_trivial", split.trivial);
        b.put("theta", json!({
            "verdict": if nonsplit.trivial { "trivial" } else { "nontrivial" },
            "extension": format!("I^{}/I^{s} -> R/I^{s} -> R/I^{}", s - 1, s - 1),
            "representative": nonsplit,
        }));
        b.put("split_theta", json!({
            "verdict": if split.trivial { "trivial" } else { "nontrivial" },
            "representative": split,
        }));
    }
    Ok(())
}
