//! Citation/grant corpus with controlled field mixing and planted effect
//! slopes: grant interdisciplinarity drives paper mixing (positive),
//! grant-level productivity (negative), and the citation-count process
//! favors interdisciplinary papers backed by disciplinary, proximate
//! grants.

use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use rand::seq::SliceRandom;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::files::{GrantOut, LinkOut, PaperOut, write_groundtruth, write_jsonl, write_taxonomy};
use super::pick_weighted;
use crate::error::{Error, Result};
use crate::rng::substream;
use crate::space::cosine_distance;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CitationConfig {
    pub k: usize,
    pub n_papers: usize,
    pub n_grants: usize,
    pub refs_per_paper: usize,
    /// Probability a reference crosses fields (per-paper value shifts with
    /// the supporting grant's interdisciplinarity).
    pub mixing: f64,
    /// Publication years, inclusive; grants share the window.
    pub year_range: (i32, i32),
    /// Papers left without grant support.
    pub unlinked_fraction: f64,
    /// Linked papers that acknowledge a second grant.
    pub multi_grant_fraction: f64,
    /// Planted positive effect of grant RS on paper mixing.
    pub slope_grant_to_paper_rs: f64,
    /// Planted negative effect of grant RS on papers per grant, in [0,1].
    pub slope_grant_rs_productivity: f64,
    pub max_papers_per_grant: usize,
    /// Citation-count drivers (paper RS positive, grant RS and grant
    /// distance negative).
    pub hit_coeff_paper_rs: f64,
    pub hit_coeff_grant_rs: f64,
    pub hit_coeff_grant_distance: f64,
    pub c10_base: f64,
    pub c10_noise: f64,
    /// Cross-field probability for stub citers.
    pub citer_mixing: f64,
    pub seed: u64,
}

impl Default for CitationConfig {
    fn default() -> Self {
        Self {
            k: 5,
            n_papers: 2000,
            n_grants: 200,
            refs_per_paper: 20,
            mixing: 0.3,
            year_range: (1995, 1997),
            unlinked_fraction: 0.2,
            multi_grant_fraction: 0.4,
            slope_grant_to_paper_rs: 0.8,
            slope_grant_rs_productivity: 0.8,
            max_papers_per_grant: 12,
            hit_coeff_paper_rs: 2.0,
            hit_coeff_grant_rs: 1.5,
            hit_coeff_grant_distance: 1.0,
            c10_base: 8.0,
            c10_noise: 0.2,
            citer_mixing: 0.3,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CitationGroundTruth {
    pub seed: u64,
    /// Planted grant field distributions.
    pub grant_theta: BTreeMap<String, Vec<f64>>,
    /// Planted interdisciplinarity level of each grant, in [0,1).
    pub grant_rs_level: BTreeMap<String, f64>,
    /// Realized per-paper cross-field reference probability.
    pub paper_mixing: BTreeMap<String, f64>,
    pub config: CitationConfig,
}

#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub k: usize,
    pub papers: Vec<PaperOut>,
    pub grants: Vec<GrantOut>,
    pub links: Vec<LinkOut>,
    pub groundtruth: CitationGroundTruth,
}

impl SynthCorpus {
    pub fn write_files(&self, dir: &Path) -> Result<()> {
        write_jsonl(&dir.join("papers.jsonl"), &self.papers)?;
        write_jsonl(&dir.join("grants.jsonl"), &self.grants)?;
        write_jsonl(&dir.join("links.jsonl"), &self.links)?;
        write_taxonomy(&dir.join("taxonomy.tsv"), self.k)?;
        write_groundtruth(&dir.join("groundtruth.json"), &self.groundtruth)
    }
}

// ring-distance affinity between fields; nearer fields attract more
// cross-field references
fn affinity(k: usize, i: usize, j: usize) -> f64 {
    let d = (i as i64 - j as i64).unsigned_abs() as usize;
    let ring = d.min(k - d);
    (-(ring as f64) / 2.0).exp()
}

pub fn gen_citation_corpus(config: &CitationConfig) -> Result<SynthCorpus> {
    if config.k < 2 {
        return Err(Error::InvalidParameter("need at least 2 fields".into()));
    }
    if config.n_papers < config.k * 2 || config.n_grants == 0 {
        return Err(Error::InvalidParameter(
            "need at least 2 papers per field and 1 grant".into(),
        ));
    }
    if !(0.0..=1.0).contains(&config.mixing) {
        return Err(Error::InvalidParameter(format!(
            "mixing {} outside [0,1]",
            config.mixing
        )));
    }
    let k = config.k;
    let mut rng = substream(config.seed, "citation-gen");
    let (year_lo, year_hi) = config.year_range;

    // grants with planted interdisciplinarity levels spread over [0,1)
    let mut grant_theta: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut grant_rs_level: BTreeMap<String, f64> = BTreeMap::new();
    let mut grants = Vec::with_capacity(config.n_grants);
    let agencies = ["NSF", "NIH", "ERC"];
    let countries = ["US", "US", "DE"];
    for g in 0..config.n_grants {
        let id = format!("g{g:05}");
        let level = (g as f64 + 0.5) / config.n_grants as f64;
        let home = g % k;
        let spread = 0.75 * level;
        let mut theta = vec![0.0; k];
        theta[home] = 1.0 - spread;
        let weights: Vec<f64> = (0..k)
            .map(|j| if j == home { 0.0 } else { affinity(k, home, j) })
            .collect();
        let wsum: f64 = weights.iter().sum();
        for j in 0..k {
            theta[j] += spread * weights[j] / wsum;
        }

        // interdisciplinary grants tend to be larger, plus noise
        let noise = Normal::new(0.0, 0.3).unwrap().sample(&mut rng);
        let amount = (12.0 + 0.8 * level + noise).exp();
        grants.push(GrantOut {
            id: id.clone(),
            agency: agencies[g % agencies.len()].to_string(),
            country: countries[g % countries.len()].to_string(),
            year: year_lo + (g as i32) % (year_hi - year_lo + 1).max(1),
            amount_usd: Some(amount),
            abstract_text: String::new(),
        });
        grant_theta.insert(id.clone(), theta);
        grant_rs_level.insert(id, level);
    }

    // productivity capacities: high-RS grants support fewer papers
    let mut slots: Vec<usize> = Vec::new();
    for g in 0..config.n_grants {
        let level = (g as f64 + 0.5) / config.n_grants as f64;
        let capacity = (config.max_papers_per_grant as f64
            * (1.0 - config.slope_grant_rs_productivity * level))
            .round()
            .max(1.0) as usize;
        slots.extend(std::iter::repeat_n(g, capacity));
    }
    slots.shuffle(&mut rng);

    // paper skeletons: field round-robin, year uniform
    let n = config.n_papers;
    let fields: Vec<usize> = (0..n).map(|i| i % k).collect();
    let years: Vec<i32> = (0..n)
        .map(|_| rng.random_range(year_lo..=year_hi))
        .collect();
    let ids: Vec<String> = (0..n).map(|i| format!("p{i:06}")).collect();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, &f) in fields.iter().enumerate() {
        members[f].push(i);
    }

    // grant assignment
    let n_unlinked = (config.unlinked_fraction * n as f64).round() as usize;
    let mut paper_order: Vec<usize> = (0..n).collect();
    paper_order.shuffle(&mut rng);
    let linkable = &paper_order[n_unlinked.min(n)..];
    let mut paper_grants: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (&paper, &grant) in linkable.iter().zip(slots.iter()) {
        paper_grants[paper].push(grant);
    }
    for &paper in linkable {
        if !paper_grants[paper].is_empty() && rng.random::<f64>() < config.multi_grant_fraction {
            let extra = rng.random_range(0..config.n_grants);
            if !paper_grants[paper].contains(&extra) {
                paper_grants[paper].push(extra);
            }
        }
    }

    // per-paper mixing from the supporting grants' planted levels
    let grant_level = |g: usize| (g as f64 + 0.5) / config.n_grants as f64;
    let mixing_of: Vec<f64> = (0..n)
        .map(|i| {
            let u = if paper_grants[i].is_empty() {
                0.5
            } else {
                paper_grants[i].iter().map(|&g| grant_level(g)).sum::<f64>()
                    / paper_grants[i].len() as f64
            };
            (config.mixing + config.slope_grant_to_paper_rs * (u - 0.5)).clamp(0.0, 0.95)
        })
        .collect();
    // the pure endpoints stay pure
    let mixing_of: Vec<f64> = if config.mixing == 0.0 && config.slope_grant_to_paper_rs == 0.0 {
        vec![0.0; n]
    } else if config.mixing >= 1.0 && config.slope_grant_to_paper_rs == 0.0 {
        vec![1.0; n]
    } else {
        mixing_of
    };

    // references and mirrored citations
    let mut refs: Vec<Vec<String>> = vec![Vec::new(); n];
    let mut cites: Vec<Vec<(String, i32)>> = vec![Vec::new(); n];
    for i in 0..n {
        let own = fields[i];
        let mut chosen: Vec<usize> = Vec::with_capacity(config.refs_per_paper);
        for _ in 0..config.refs_per_paper {
            let target_field = if rng.random::<f64>() < mixing_of[i] {
                let weights: Vec<f64> = (0..k)
                    .map(|j| if j == own { 0.0 } else { affinity(k, own, j) })
                    .collect();
                pick_weighted(&mut rng, &weights)
            } else {
                own
            };
            let pool = &members[target_field];
            for _ in 0..8 {
                let cand = pool[rng.random_range(0..pool.len())];
                if cand != i && !chosen.contains(&cand) {
                    chosen.push(cand);
                    break;
                }
            }
        }
        for &target in &chosen {
            refs[i].push(ids[target].clone());
            if years[i] >= years[target] {
                cites[target].push((ids[i].clone(), years[i]));
            }
        }
    }

    // stub citers sized by the planted citation-count process
    let noise = Normal::new(0.0, config.c10_noise).unwrap();
    let mut stub_papers: Vec<PaperOut> = Vec::new();
    let mut paper_mixing_truth = BTreeMap::new();
    for i in 0..n {
        let grants_of_i = &paper_grants[i];
        let u_mean = if grants_of_i.is_empty() {
            0.5
        } else {
            grants_of_i.iter().map(|&g| grant_level(g)).sum::<f64>() / grants_of_i.len() as f64
        };
        let pair_distance = if grants_of_i.len() >= 2 {
            let a = &grant_theta[&format!("g{:05}", grants_of_i[0])];
            let b = &grant_theta[&format!("g{:05}", grants_of_i[1])];
            cosine_distance(a, b).unwrap_or(0.0)
        } else {
            0.0
        };
        let score = config.hit_coeff_paper_rs * mixing_of[i]
            - config.hit_coeff_grant_rs * u_mean
            - config.hit_coeff_grant_distance * pair_distance
            + noise.sample(&mut rng);
        let count = (config.c10_base * score.exp()).round().max(1.0) as usize;

        let own = fields[i];
        for c in 0..count {
            let stub_id = format!("c{i:06}x{c:03}");
            let citer_field = if rng.random::<f64>() < config.citer_mixing {
                let weights: Vec<f64> = (0..k)
                    .map(|j| if j == own { 0.0 } else { affinity(k, own, j) })
                    .collect();
                pick_weighted(&mut rng, &weights)
            } else {
                own
            };
            let citing_year = years[i] + 1 + (c as i32 % 9);
            cites[i].push((stub_id.clone(), citing_year));
            stub_papers.push(PaperOut {
                id: stub_id,
                year: citing_year,
                abstract_text: String::new(),
                fields: vec![(citer_field, 1.0)],
                refs: vec![ids[i].clone()],
                cites: Vec::new(),
                n_authors: 1,
                n_institutes: 0,
                max_author_cites: None,
            });
        }
        paper_mixing_truth.insert(ids[i].clone(), mixing_of[i]);
    }

    let mut papers: Vec<PaperOut> = (0..n)
        .map(|i| PaperOut {
            id: ids[i].clone(),
            year: years[i],
            abstract_text: String::new(),
            fields: vec![(fields[i], 1.0)],
            refs: refs[i].clone(),
            cites: cites[i].clone(),
            n_authors: 1 + (i % 8) as u32,
            n_institutes: (i % 4) as u32,
            max_author_cites: Some((i % 1000) as u64 * 10),
        })
        .collect();
    papers.extend(stub_papers);

    let links: Vec<LinkOut> = (0..n)
        .flat_map(|i| {
            paper_grants[i].iter().map(move |&g| LinkOut {
                grant: format!("g{g:05}"),
                paper: format!("p{i:06}"),
            })
        })
        .collect();

    Ok(SynthCorpus {
        k,
        papers,
        grants,
        links,
        groundtruth: CitationGroundTruth {
            seed: config.seed,
            grant_theta,
            grant_rs_level,
            paper_mixing: paper_mixing_truth,
            config: config.clone(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{IngestOptions, ingest_corpus};
    use crate::fieldspace::{VectorBasis, paper_field_vector};

    fn small_config(seed: u64) -> CitationConfig {
        CitationConfig {
            n_papers: 300,
            n_grants: 40,
            refs_per_paper: 10,
            c10_base: 3.0,
            seed,
            ..CitationConfig::default()
        }
    }

    fn ingest(corpus: &SynthCorpus, tag: &str) -> (crate::corpus::CorpusStore, crate::corpus::ValidationReport) {
        let dir = std::env::temp_dir().join(format!("idr-synth-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        corpus.write_files(&dir).unwrap();
        let out = ingest_corpus(
            &dir.join("papers.jsonl"),
            &dir.join("grants.jsonl"),
            &dir.join("links.jsonl"),
            &dir.join("taxonomy.tsv"),
            &IngestOptions {
                window: (1985, 2009),
                analysis_filter: true,
            },
        )
        .unwrap();
        std::fs::remove_dir_all(&dir).ok();
        out
    }

    #[test]
    fn generated_corpus_ingests_with_zero_rejections() {
        let corpus = gen_citation_corpus(&small_config(1)).unwrap();
        let (store, report) = ingest(&corpus, "clean");
        assert!(
            report.rejections.is_empty(),
            "rejections: {:?}",
            &report.rejections[..report.rejections.len().min(5)]
        );
        assert_eq!(store.papers.len(), 300);
        assert_eq!(store.grants.len(), 40);
    }

    #[test]
    fn zero_mixing_yields_unit_reference_vectors() {
        let config = CitationConfig {
            mixing: 0.0,
            slope_grant_to_paper_rs: 0.0,
            ..small_config(2)
        };
        let corpus = gen_citation_corpus(&config).unwrap();
        let (store, _) = ingest(&corpus, "pure");
        for paper in &store.papers {
            let p = paper_field_vector(paper, VectorBasis::References, &store).unwrap();
            let max = p.probs().iter().cloned().fold(0.0, f64::max);
            assert!((max - 1.0).abs() < 1e-12, "paper {} not pure", paper.id);
        }
    }

    #[test]
    fn full_mixing_spreads_reference_mass_off_field() {
        let config = CitationConfig {
            mixing: 1.0,
            slope_grant_to_paper_rs: 0.0,
            ..small_config(3)
        };
        let corpus = gen_citation_corpus(&config).unwrap();
        let (store, _) = ingest(&corpus, "mixed");
        for paper in &store.papers {
            let p = paper_field_vector(paper, VectorBasis::References, &store).unwrap();
            assert!(p.get(paper.primary_field()) < 0.2, "own-field mass too high");
        }
    }

    #[test]
    fn productivity_declines_with_grant_level() {
        let corpus = gen_citation_corpus(&small_config(4)).unwrap();
        let mut link_counts: BTreeMap<&str, usize> = BTreeMap::new();
        for link in &corpus.links {
            *link_counts.entry(link.grant.as_str()).or_insert(0) += 1;
        }
        let (levels, counts): (Vec<f64>, Vec<f64>) = corpus
            .groundtruth
            .grant_rs_level
            .iter()
            .map(|(id, &level)| {
                (
                    level,
                    link_counts.get(id.as_str()).copied().unwrap_or(0) as f64,
                )
            })
            .unzip();
        let r = crate::stats::pearson(&levels, &counts).unwrap();
        assert!(r < -0.5, "productivity correlation {r}");
    }

    #[test]
    fn generation_is_deterministic() {
        let a = gen_citation_corpus(&small_config(5)).unwrap();
        let b = gen_citation_corpus(&small_config(5)).unwrap();
        assert_eq!(
            serde_json::to_vec(&a.groundtruth.grant_theta).unwrap(),
            serde_json::to_vec(&b.groundtruth.grant_theta).unwrap()
        );
        assert_eq!(a.papers.len(), b.papers.len());
        let pa = serde_json::to_vec(&a.papers[0]).unwrap();
        let pb = serde_json::to_vec(&b.papers[0]).unwrap();
        assert_eq!(pa, pb);
    }
}
