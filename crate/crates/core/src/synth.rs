//! Synthetic corpus generation with planted structures.
//!
//! The background mimics the texture of a topical tweet collection: Zipf
//! hashtags whose head co-occurs densely, a heavily co-mentioned celebrity
//! clique, preferential-attachment authorship and same-day reply chains.
//! Planted groups occupy their own calendar days and inject one of three
//! structural patterns:
//!
//! - `DenseCore` — posts co-tagging a tight hashtag set until it is a clique;
//! - `SparseCoreDensePeriphery` — a large sparse ring of users whose
//!   coreness tops the candidate while dense user pods sit below it, the
//!   inverse of the usual dense-core profile;
//! - `PropagativeMention` — a few amplifier users mentioned by every post
//!   alongside fresh leaf users, concentrating current flow and neighbor
//!   degree.

use crate::ingest::PostRecord;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Terms guaranteed to appear in every post; an any-of query over these
/// matches the whole corpus.
pub const UNIVERSE_TERMS: [&str; 5] = ["politics", "news", "today", "people", "american"];

/// First background day, 2021-01-01T00:00:00Z.
const EPOCH_START: i64 = 1_609_459_200;
const BACKGROUND_DAYS: i64 = 20;
const SECONDS_PER_DAY: i64 = 86_400;

const FILLER_VOCAB: usize = 200;
const HASHTAG_VOCAB: usize = 120;
const CELEBRITIES: usize = 15;

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("planted groups need at least 30 posts, got {0}")]
    GroupTooSmall(usize),
    #[error("background needs at least 10 posts, got {0}")]
    BackgroundTooSmall(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Structure {
    DenseCore,
    SparseCoreDensePeriphery,
    PropagativeMention,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedGroup {
    pub size: usize,
    pub topic_terms: Vec<String>,
    pub structure: Structure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthParams {
    pub n_background_posts: usize,
    #[serde(default)]
    pub planted_groups: Vec<PlantedGroup>,
    pub seed: u64,
}

/// Ground-truth labels emitted alongside the corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupLabel {
    pub label: String,
    pub structure: Structure,
    /// Calendar day (UTC) the group's posts occupy, `YYYY-MM-DD`.
    pub date: String,
    pub topic_terms: Vec<String>,
    pub post_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GroundTruth {
    pub seed: u64,
    pub groups: Vec<GroupLabel>,
}

fn zipf_index(rng: &mut ChaCha8Rng, n: usize, exponent: f64) -> usize {
    // inverse-CDF draw over 1..=n with p(r) ~ r^-exponent
    let weights: f64 = (1..=n).map(|r| (r as f64).powf(-exponent)).sum();
    let mut target = rng.gen::<f64>() * weights;
    for r in 1..=n {
        target -= (r as f64).powf(-exponent);
        if target <= 0.0 {
            return r - 1;
        }
    }
    n - 1
}

fn rfc3339(ts: i64) -> String {
    chrono::DateTime::<chrono::Utc>::from_timestamp(ts, 0)
        .expect("valid timestamp")
        .to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

struct Builder {
    rng: ChaCha8Rng,
    records: Vec<PostRecord>,
}

impl Builder {
    fn text(&mut self, topic_terms: &[String]) -> String {
        let mut words = Vec::new();
        let universe = UNIVERSE_TERMS[zipf_index(&mut self.rng, UNIVERSE_TERMS.len(), 1.0)];
        words.push(universe.to_string());
        for term in topic_terms {
            words.push(term.clone());
        }
        let fillers = 3 + self.rng.gen_range(0..3);
        for _ in 0..fillers {
            let w = zipf_index(&mut self.rng, FILLER_VOCAB, 1.2);
            words.push(format!("w{w:03}"));
        }
        words.join(" ")
    }

    fn engagement(&mut self) -> (u64, u64) {
        let favorite = (self.rng.gen::<f64>().powi(3) * 400.0) as u64;
        let repost = (self.rng.gen::<f64>().powi(3) * 150.0) as u64;
        (favorite, repost)
    }
}

fn background_posts(builder: &mut Builder, n: usize) {
    let mut author_posts: Vec<(String, u64)> = Vec::new(); // (author, post count)
    let mut per_day: Vec<Vec<usize>> = vec![Vec::new(); BACKGROUND_DAYS as usize];
    let per_day_seconds = SECONDS_PER_DAY / (n as i64 / BACKGROUND_DAYS + 2).max(1);

    for i in 0..n {
        let day = builder.rng.gen_range(0..BACKGROUND_DAYS) as usize;
        let slot = per_day[day].len() as i64;
        let ts = EPOCH_START + day as i64 * SECONDS_PER_DAY + slot * per_day_seconds.max(1);

        // preferential-attachment authorship
        let author = if !author_posts.is_empty() && builder.rng.gen::<f64>() < 0.7 {
            let total: u64 = author_posts.iter().map(|(_, c)| c).sum();
            let mut target = builder.rng.gen_range(0..total);
            let mut chosen = 0;
            for (idx, (_, c)) in author_posts.iter().enumerate() {
                if target < *c {
                    chosen = idx;
                    break;
                }
                target -= c;
            }
            author_posts[chosen].1 += 1;
            author_posts[chosen].0.clone()
        } else {
            let name = format!("user{:05}", author_posts.len());
            author_posts.push((name.clone(), 1));
            name
        };

        let tag_count = 1 + zipf_index(&mut builder.rng, 4, 1.3);
        let mut hashtags = Vec::new();
        for _ in 0..tag_count {
            let t = zipf_index(&mut builder.rng, HASHTAG_VOCAB, 1.0);
            let tag = format!("tag{t:03}");
            if !hashtags.contains(&tag) {
                hashtags.push(tag);
            }
        }

        let mut mentions = Vec::new();
        let roll = builder.rng.gen::<f64>();
        if roll < 0.5 {
            // co-mention a celebrity pair; the head of the Zipf keeps the
            // celebrity clique dense in every sample
            let a = zipf_index(&mut builder.rng, CELEBRITIES, 0.8);
            let mut b = zipf_index(&mut builder.rng, CELEBRITIES, 0.8);
            if b == a {
                b = (a + 1) % CELEBRITIES;
            }
            mentions.push(format!("celebrity{a:02}"));
            mentions.push(format!("celebrity{b:02}"));
        } else if roll < 0.65 && !author_posts.is_empty() {
            let idx = builder.rng.gen_range(0..author_posts.len());
            mentions.push(author_posts[idx].0.clone());
        }

        let reply_to_id = if !per_day[day].is_empty() && builder.rng.gen::<f64>() < 0.25 {
            let target = per_day[day][builder.rng.gen_range(0..per_day[day].len())];
            Some(format!("bg{target:06}"))
        } else {
            None
        };
        let repost_of_id = if reply_to_id.is_none()
            && !per_day[day].is_empty()
            && builder.rng.gen::<f64>() < 0.1
        {
            let target = per_day[day][builder.rng.gen_range(0..per_day[day].len())];
            Some(format!("bg{target:06}"))
        } else {
            None
        };

        let text = builder.text(&[]);
        let (favorite_count, repost_count) = builder.engagement();
        builder.records.push(PostRecord {
            post_id: format!("bg{i:06}"),
            author_id: author,
            author_profile: String::new(),
            created_at: ts,
            text,
            hashtags,
            mentions,
            urls: Vec::new(),
            reply_to_id,
            repost_of_id,
            favorite_count,
            repost_count,
        });
        per_day[day].push(i);
    }
}

fn planted_post(
    builder: &mut Builder,
    group_idx: usize,
    post_idx: usize,
    ts: i64,
    author: String,
    topic_terms: &[String],
    hashtags: Vec<String>,
    mentions: Vec<String>,
) -> String {
    let post_id = format!("p{group_idx}_{post_idx:04}");
    let text = builder.text(topic_terms);
    let (favorite_count, repost_count) = builder.engagement();
    builder.records.push(PostRecord {
        post_id: post_id.clone(),
        author_id: author,
        author_profile: String::new(),
        created_at: ts,
        text,
        hashtags,
        mentions,
        urls: Vec::new(),
        reply_to_id: None,
        repost_of_id: None,
        favorite_count,
        repost_count,
    });
    post_id
}

/// Dense hashtag core: every post tags 4 of the group's 8 hashtags, driving
/// their co-occurrence toward a clique.
fn plant_dense_core(
    builder: &mut Builder,
    group_idx: usize,
    group: &PlantedGroup,
    day_start: i64,
) -> Vec<String> {
    let tags: Vec<String> = (0..8).map(|t| format!("dense{group_idx}_tag{t}")).collect();
    let step = (SECONDS_PER_DAY / (group.size as i64 + 1)).max(1);
    let mut ids = Vec::new();
    for i in 0..group.size {
        let mut chosen = Vec::new();
        while chosen.len() < 4 {
            let t = builder.rng.gen_range(0..tags.len());
            if !chosen.contains(&tags[t]) {
                chosen.push(tags[t].clone());
            }
        }
        ids.push(planted_post(
            builder,
            group_idx,
            i,
            day_start + i as i64 * step,
            format!("dense{group_idx}_author{i:04}"),
            &group.topic_terms,
            chosen,
            Vec::new(),
        ));
    }
    ids
}

/// Sparse core: ~30% of the posts mention consecutive quads of a user ring,
/// weaving a 6-regular co-mention circulant whose coreness (6) tops the
/// candidate; the rest mention pairs inside 6-user pods, forming dense
/// cliques that stay at coreness 5.
fn plant_sparse_core(
    builder: &mut Builder,
    group_idx: usize,
    group: &PlantedGroup,
    day_start: i64,
) -> Vec<String> {
    let ring_size = (group.size * 3 / 10).max(9);
    let ring: Vec<String> = (0..ring_size)
        .map(|u| format!("sparse{group_idx}_ring{u:03}"))
        .collect();
    let tags: Vec<String> = (0..3).map(|t| format!("sparse{group_idx}_tag{t}")).collect();
    let step = (SECONDS_PER_DAY / (group.size as i64 + 1)).max(1);
    let mut ids = Vec::new();
    let mut post_idx = 0;

    for i in 0..ring_size {
        let mentions: Vec<String> = (0..4).map(|o| ring[(i + o) % ring_size].clone()).collect();
        ids.push(planted_post(
            builder,
            group_idx,
            post_idx,
            day_start + post_idx as i64 * step,
            format!("sparse{group_idx}_author{post_idx:04}"),
            &group.topic_terms,
            vec![tags[post_idx % tags.len()].clone()],
            mentions,
        ));
        post_idx += 1;
    }

    // pods: 15 pair-mention posts complete one K6 clique
    let pod_users = |pod: usize, member: usize, group_idx: usize| {
        format!("sparse{group_idx}_pod{pod}_{member}")
    };
    let mut pod = 0;
    let mut pair = 0;
    let pairs: Vec<(usize, usize)> = (0..6)
        .flat_map(|a| ((a + 1)..6).map(move |b| (a, b)))
        .collect();
    while post_idx < group.size {
        let (a, b) = pairs[pair % pairs.len()];
        let mentions = vec![pod_users(pod, a, group_idx), pod_users(pod, b, group_idx)];
        ids.push(planted_post(
            builder,
            group_idx,
            post_idx,
            day_start + post_idx as i64 * step,
            format!("sparse{group_idx}_author{post_idx:04}"),
            &group.topic_terms,
            vec![tags[post_idx % tags.len()].clone()],
            mentions,
        ));
        post_idx += 1;
        pair += 1;
        if pair % pairs.len() == 0 {
            pod += 1;
        }
    }
    ids
}

/// Propagative mention pattern: every post mentions three of ten amplifier
/// users plus one fresh leaf, concentrating eigenvector mass, current flow
/// and neighbor degree on the amplifiers.
fn plant_propagative(
    builder: &mut Builder,
    group_idx: usize,
    group: &PlantedGroup,
    day_start: i64,
) -> Vec<String> {
    let amplifiers: Vec<String> = (0..10).map(|a| format!("prop{group_idx}_amp{a}")).collect();
    let tags: Vec<String> = (0..2).map(|t| format!("prop{group_idx}_tag{t}")).collect();
    let step = (SECONDS_PER_DAY / (group.size as i64 + 1)).max(1);
    let mut ids = Vec::new();
    for i in 0..group.size {
        let mut mentions: Vec<String> = vec![
            amplifiers[i % 10].clone(),
            amplifiers[(i + 1) % 10].clone(),
            amplifiers[(i + 3) % 10].clone(),
        ];
        mentions.push(format!("prop{group_idx}_leaf{i:04}"));
        ids.push(planted_post(
            builder,
            group_idx,
            i,
            day_start + i as i64 * step,
            format!("prop{group_idx}_author{i:04}"),
            &group.topic_terms,
            vec![tags[i % tags.len()].clone()],
            mentions,
        ));
    }
    ids
}

/// Generate the corpus and its ground truth. Background posts cover twenty
/// calendar days; each planted group takes over a later day of its own.
pub fn generate_synthetic_corpus(
    params: &SynthParams,
) -> Result<(Vec<PostRecord>, GroundTruth), SynthError> {
    if params.n_background_posts < 10 {
        return Err(SynthError::BackgroundTooSmall(params.n_background_posts));
    }
    for group in &params.planted_groups {
        if group.size < 30 {
            return Err(SynthError::GroupTooSmall(group.size));
        }
    }

    let mut builder = Builder {
        rng: ChaCha8Rng::seed_from_u64(params.seed),
        records: Vec::new(),
    };
    background_posts(&mut builder, params.n_background_posts);

    let mut truth = GroundTruth {
        seed: params.seed,
        groups: Vec::new(),
    };
    for (idx, group) in params.planted_groups.iter().enumerate() {
        let day = BACKGROUND_DAYS + 2 + 2 * idx as i64;
        let day_start = EPOCH_START + day * SECONDS_PER_DAY;
        let post_ids = match group.structure {
            Structure::DenseCore => plant_dense_core(&mut builder, idx, group, day_start),
            Structure::SparseCoreDensePeriphery => {
                plant_sparse_core(&mut builder, idx, group, day_start)
            }
            Structure::PropagativeMention => {
                plant_propagative(&mut builder, idx, group, day_start)
            }
        };
        truth.groups.push(GroupLabel {
            label: format!("planted_{idx}"),
            structure: group.structure,
            date: crate::ingest::day_of(day_start),
            topic_terms: group.topic_terms.clone(),
            post_ids,
        });
    }
    Ok((builder.records, truth))
}

/// Serialize records as JSON lines, one post per line, with RFC 3339
/// timestamps as the ingest format expects.
pub fn to_jsonl(records: &[PostRecord]) -> String {
    let mut out = String::new();
    for record in records {
        let mut value = serde_json::to_value(record).expect("record serializes");
        value["created_at"] = serde_json::json!(rfc3339(record.created_at));
        out.push_str(&value.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest;
    use std::collections::BTreeSet;

    fn params(groups: Vec<PlantedGroup>) -> SynthParams {
        SynthParams {
            n_background_posts: 300,
            planted_groups: groups,
            seed: 7,
        }
    }

    #[test]
    fn fixed_seed_is_byte_identical() {
        let p = params(vec![PlantedGroup {
            size: 60,
            topic_terms: vec!["alpha".into()],
            structure: Structure::PropagativeMention,
        }]);
        let (a, _) = generate_synthetic_corpus(&p).unwrap();
        let (b, _) = generate_synthetic_corpus(&p).unwrap();
        assert_eq!(to_jsonl(&a), to_jsonl(&b));
    }

    #[test]
    fn zero_planted_groups_is_pure_background() {
        let (records, truth) = generate_synthetic_corpus(&params(vec![])).unwrap();
        assert_eq!(records.len(), 300);
        assert!(truth.groups.is_empty());
    }

    #[test]
    fn group_sizes_are_validated() {
        let p = params(vec![PlantedGroup {
            size: 5,
            topic_terms: vec![],
            structure: Structure::DenseCore,
        }]);
        assert!(matches!(
            generate_synthetic_corpus(&p),
            Err(SynthError::GroupTooSmall(5))
        ));
    }

    #[test]
    fn every_post_contains_a_universe_term() {
        let (records, _) = generate_synthetic_corpus(&params(vec![])).unwrap();
        for record in &records {
            let tokens: BTreeSet<String> = ingest::tokenize(&record.text).into_iter().collect();
            assert!(
                UNIVERSE_TERMS.iter().any(|t| tokens.contains(*t)),
                "post {} lacks universe terms",
                record.post_id
            );
        }
    }

    #[test]
    fn planted_groups_occupy_their_own_days() {
        let p = params(vec![PlantedGroup {
            size: 60,
            topic_terms: vec![],
            structure: Structure::DenseCore,
        }]);
        let (records, truth) = generate_synthetic_corpus(&p).unwrap();
        let group_date = &truth.groups[0].date;
        for record in &records {
            let day = ingest::day_of(record.created_at);
            let is_planted = record.post_id.starts_with("p0_");
            assert_eq!(&day == group_date, is_planted, "{}", record.post_id);
        }
    }

    #[test]
    fn dense_core_hc_is_much_denser_than_background() {
        let p = params(vec![PlantedGroup {
            size: 80,
            topic_terms: vec!["topic".into()],
            structure: Structure::DenseCore,
        }]);
        let (records, truth) = generate_synthetic_corpus(&p).unwrap();
        let report = ingest::build_base_graph(records).unwrap();
        let planted: BTreeSet<_> = truth.groups[0]
            .post_ids
            .iter()
            .map(|id| report.post_ids[id])
            .collect();
        let background: BTreeSet<_> = report
            .post_ids
            .iter()
            .filter(|(id, _)| id.starts_with("bg"))
            .map(|(_, n)| *n)
            .collect();

        let density = |posts: &BTreeSet<crate::graph::NodeId>| {
            let edges = ingest::build_hashtag_cooccurrence(&report.graph, posts).unwrap();
            let mut nodes = BTreeSet::new();
            for e in &edges {
                nodes.insert(e.tail);
                nodes.insert(e.head);
            }
            let n = nodes.len() as f64;
            if n < 2.0 {
                0.0
            } else {
                2.0 * edges.len() as f64 / (n * (n - 1.0))
            }
        };
        let planted_density = density(&planted);
        let background_density = density(&background);
        assert!(
            planted_density >= 3.0 * background_density,
            "planted {planted_density} vs background {background_density}"
        );
    }

    #[test]
    fn sparse_core_group_has_expected_user_structure() {
        let p = params(vec![PlantedGroup {
            size: 150,
            topic_terms: vec![],
            structure: Structure::SparseCoreDensePeriphery,
        }]);
        let (records, truth) = generate_synthetic_corpus(&p).unwrap();
        let ring_posts = truth.groups[0]
            .post_ids
            .iter()
            .take(45)
            .collect::<Vec<_>>();
        assert_eq!(ring_posts.len(), 45);
        let report = ingest::build_base_graph(records).unwrap();
        // ring users their 6-regular co-mention circulant
        let posts: BTreeSet<_> = report.post_ids.values().copied().collect();
        let comention = ingest::build_user_comention(&report.graph, &posts).unwrap();
        let mut ring_degree: std::collections::BTreeMap<&str, usize> =
            std::collections::BTreeMap::new();
        for edge in &comention {
            for node in [edge.tail, edge.head] {
                if let Some(uid) = report.graph.attr(node, "user_id") {
                    let name = uid.as_text().unwrap();
                    if name.starts_with("sparse0_ring") {
                        *ring_degree.entry(name).or_insert(0) += 1;
                    }
                }
            }
        }
        let degrees: Vec<usize> = ring_degree.values().copied().collect();
        assert_eq!(degrees.len(), 45);
        assert!(degrees.iter().all(|d| *d == 6), "degrees {degrees:?}");
    }
}
