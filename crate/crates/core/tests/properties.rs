mod common;

use common::oracles::{brute_force_assign, naive_nms, tag_letters, GRAMMAR_REGEX};
use namegraft_core::align::{assign_optimal, attention_align, sequential_align, AlignConfig, Identity};
use namegraft_core::geometry::{attention_mass_in_box, iou, nms, AttentionMap, BoundingBox};
use namegraft_core::rewrite::{detokenize, substitute};
use namegraft_core::text::{char_slice, classify_person, matches_grammar, tokenize, Lexicons};
use proptest::prelude::*;
use regex::Regex;

const WORDS: &[&str] = &[
    "a", "the", "two", "three", "young", "old", "tall", "man", "woman", "boys", "girls", "people", "children", "dog",
    "speech", "ball", "is", "plays", "with", "and", "near", "smiling", "Alice", "blorptle", "frobs", "men", "ladies",
    "some", "kid", "player", "12",
];

fn caption() -> impl Strategy<Value = String> {
    prop::collection::vec((prop::sample::select(WORDS), 0u8..10), 0..12).prop_map(|ws| {
        let mut parts: Vec<String> = Vec::new();
        for (w, decor) in ws {
            parts.push(match decor {
                0 => format!("{w}'s"),
                1 => format!("{w},"),
                _ => w.to_string(),
            });
        }
        let mut s = parts.join(" ");
        if !s.is_empty() {
            s.push('.');
        }
        s
    })
}

fn bbox_in(width: u32, height: u32) -> impl Strategy<Value = BoundingBox> {
    (0..width, 0..height)
        .prop_flat_map(move |(x, y)| (Just(x), Just(y), 1..=width - x, 1..=height - y))
        .prop_map(|(x, y, w, h)| BoundingBox::new(x, y, w, h))
}

fn stochastic_rows(cells: usize, rows: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.0f64..1.0, cells), rows).prop_map(|rows| {
        rows.into_iter()
            .map(|mut r| {
                if r.iter().sum::<f64>() == 0.0 {
                    r[0] = 1.0;
                }
                let s: f64 = r.iter().sum();
                r.iter_mut().for_each(|v| *v /= s);
                r
            })
            .collect()
    })
}

fn score_matrix(max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (0..=max, 0..=max).prop_flat_map(|(r, c)| {
        let value = prop_oneof![0.0f64..1.0, prop::sample::select(vec![0.0, 0.25, 0.5, 1.0])];
        prop::collection::vec(prop::collection::vec(value, c), r)
    })
}

fn identities(n: usize) -> impl Strategy<Value = Vec<Identity>> {
    prop::collection::vec(bbox_in(224, 224), n).prop_map(|boxes| {
        boxes.into_iter().enumerate().map(|(i, b)| Identity::new(format!("Zed{i}Q"), b, 0.9).unwrap()).collect()
    })
}

proptest! {
    #[test]
    fn tokenize_round_trips(raw in "[ a-zA-Zé.,!?;:'\"\t]{0,40}") {
        let tokens = tokenize(&raw);
        let chars: Vec<char> = raw.chars().collect();
        let mut rebuilt = String::new();
        let mut at = 0;
        for (i, t) in tokens.iter().enumerate() {
            prop_assert_eq!(t.index, i);
            prop_assert!(t.char_start < t.char_end);
            prop_assert!(t.char_start >= at);
            let gap: String = chars[at..t.char_start].iter().collect();
            prop_assert!(gap.chars().all(char::is_whitespace));
            rebuilt.push_str(&gap);
            prop_assert_eq!(&char_slice(&raw, t.char_start, t.char_end), &t.text);
            rebuilt.push_str(&t.text);
            at = t.char_end;
        }
        let tail: String = chars[at..].iter().collect();
        prop_assert!(tail.chars().all(char::is_whitespace));
        rebuilt.push_str(&tail);
        prop_assert_eq!(rebuilt, raw);
    }

    #[test]
    fn chunks_match_regex_oracle(text in caption()) {
        let lex = Lexicons::builtin();
        let a = lex.analyze(&text);
        let tags: Vec<_> = a.tagged.iter().map(|t| t.tag).collect();
        let letters = tag_letters(&tags);
        let prefix = Regex::new("^D?C?J*N+").unwrap();
        let full = Regex::new(GRAMMAR_REGEX).unwrap();
        let mut expected = Vec::new();
        let mut i = 0;
        while i < letters.len() {
            match prefix.find(&letters[i..]) {
                Some(m) => { expected.push((i, i + m.end())); i += m.end(); }
                None => i += 1,
            }
        }
        let got: Vec<_> = a.chunks.iter().map(|c| (c.span_start, c.span_end)).collect();
        prop_assert_eq!(got, expected);
        for pair in a.chunks.windows(2) {
            prop_assert!(pair[0].span_end <= pair[1].span_start);
        }
        for c in &a.chunks {
            prop_assert!(full.is_match(&letters[c.span_start..c.span_end]));
            prop_assert!(matches_grammar(&tags[c.span_start..c.span_end]));
            prop_assert!(c.span_start <= c.head_index && c.head_index < c.span_end);
        }
    }

    #[test]
    fn analysis_is_deterministic(text in caption()) {
        let lex = Lexicons::builtin();
        prop_assert_eq!(lex.analyze(&text), lex.analyze(&text));
    }

    #[test]
    fn person_lexicon_is_monotone(text in caption(), extra in prop::sample::select(WORDS)) {
        let lex = Lexicons::builtin();
        let a = lex.analyze(&text);
        let mut bigger = lex.people.clone();
        bigger.insert(extra);
        for c in &a.chunks {
            if c.is_person {
                prop_assert!(classify_person(c.clone(), &a.tagged, &bigger).is_person);
            }
        }
    }

    #[test]
    fn assignment_matches_brute_force(s in score_matrix(5)) {
        let got = assign_optimal(&s, 0.0).unwrap();
        let (expected, total) = brute_force_assign(&s);
        prop_assert_eq!(got.pairs, expected);
        prop_assert_eq!(got.objective, total);
    }

    #[test]
    fn assignment_ignores_positive_scale(s in score_matrix(5), scale in 0.001f64..1000.0, pow in -8i32..8) {
        let base = assign_optimal(&s, 0.0).unwrap().pairs;
        let exact: Vec<Vec<f64>> = s.iter().map(|r| r.iter().map(|v| v * 2f64.powi(pow)).collect()).collect();
        prop_assert_eq!(&assign_optimal(&exact, 0.0).unwrap().pairs, &base);
        let continuous = s.iter().all(|r| r.iter().all(|v| ![0.0, 0.25, 0.5, 1.0].contains(v)));
        if continuous {
            let scaled: Vec<Vec<f64>> = s.iter().map(|r| r.iter().map(|v| v * scale).collect()).collect();
            prop_assert_eq!(assign_optimal(&scaled, 0.0).unwrap().pairs, base);
        }
    }

    #[test]
    fn nms_matches_naive(
        boxes in prop::collection::vec((bbox_in(64, 64), prop_oneof![0.0f64..1.0, prop::sample::select(vec![0.5, 0.9])]), 0..=10),
        threshold in 0.05f64..0.95,
    ) {
        let kept = nms(&boxes, threshold);
        prop_assert_eq!(&kept, &naive_nms(&boxes, threshold));
        for (i, a) in kept.iter().enumerate() {
            for b in &kept[i + 1..] {
                prop_assert!(iou(&a.0, &b.0) <= threshold);
            }
        }
        for pair in kept.windows(2) {
            prop_assert!(pair[0].1 >= pair[1].1);
        }
    }

    #[test]
    fn iou_is_symmetric_and_bounded(a in bbox_in(50, 50), b in bbox_in(50, 50)) {
        let v = iou(&a, &b);
        prop_assert_eq!(v, iou(&b, &a));
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert_eq!(iou(&a, &a), 1.0);
    }

    #[test]
    fn whole_image_mass_is_one(rows in stochastic_rows(49, 3), w in 1u32..500, h in 1u32..500) {
        let map = AttentionMap::new(7, rows).unwrap();
        let m = attention_mass_in_box(&map, &[0, 1, 2], &BoundingBox::full(w, h), w, h).unwrap();
        prop_assert!((m - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn partition_masses_sum_to_one(
        rows in stochastic_rows(49, 1),
        w in 2u32..400, h in 2u32..400, fx in 0.01f64..0.99, fy in 0.01f64..0.99,
    ) {
        let map = AttentionMap::new(7, rows).unwrap();
        let sx = ((w as f64 * fx) as u32).clamp(1, w - 1);
        let sy = ((h as f64 * fy) as u32).clamp(1, h - 1);
        let quads = [
            BoundingBox::new(0, 0, sx, sy),
            BoundingBox::new(sx, 0, w - sx, sy),
            BoundingBox::new(0, sy, sx, h - sy),
            BoundingBox::new(sx, sy, w - sx, h - sy),
        ];
        let total: f64 = quads.iter().map(|b| attention_mass_in_box(&map, &[0], b, w, h).unwrap()).sum();
        prop_assert!((total - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn mass_grows_with_box(rows in stochastic_rows(49, 2), inner in bbox_in(224, 224), grow in (0u32..224, 0u32..224, 0u32..224, 0u32..224)) {
        let map = AttentionMap::new(7, rows).unwrap();
        let x = inner.x.saturating_sub(grow.0);
        let y = inner.y.saturating_sub(grow.1);
        let right = (inner.x + inner.w + grow.2).min(224);
        let bottom = (inner.y + inner.h + grow.3).min(224);
        let outer = BoundingBox::new(x, y, right - x, bottom - y);
        prop_assert!(outer.contains(&inner));
        let small = attention_mass_in_box(&map, &[0, 1], &inner, 224, 224).unwrap();
        let big = attention_mass_in_box(&map, &[0, 1], &outer, 224, 224).unwrap();
        prop_assert!(big + 1e-12 >= small);
    }

    #[test]
    fn sequential_alignment_invariants(text in caption(), faces in (0usize..6).prop_flat_map(identities)) {
        let a = Lexicons::builtin().analyze(&text);
        let people = a.person_chunks();
        let r = sequential_align(&people, &faces);
        check_alignment(&r, &people, &faces)?;
    }

    #[test]
    fn sequential_ignores_identity_order(
        text in caption(),
        faces in (0usize..6).prop_flat_map(identities).prop_flat_map(|f| (Just(f.clone()), Just(f).prop_shuffle())),
    ) {
        let a = Lexicons::builtin().analyze(&text);
        let people = a.person_chunks();
        prop_assert_eq!(sequential_align(&people, &faces.0), sequential_align(&people, &faces.1));
    }

    #[test]
    fn attention_alignment_invariants(text in caption(), faces in (0usize..5).prop_flat_map(identities), seed in any::<u64>()) {
        let a = Lexicons::builtin().analyze(&text);
        let people = a.person_chunks();
        let rows = pseudo_rows(seed, a.tokens.len());
        let map = AttentionMap::new(7, rows).unwrap();
        let r = attention_align(&people, &faces, Some(&map), a.tokens.len(), 224, 224, &AlignConfig::default());
        match r {
            Ok(r) => check_alignment(&r, &people, &faces)?,
            Err(e) => prop_assert!(e.to_string().contains("exceeds exhaustive bound")),
        }
    }

    #[test]
    fn substitution_identity_and_idempotence(text in caption()) {
        let a = Lexicons::builtin().analyze(&text);
        let empty = namegraft_core::AlignmentResult::empty(namegraft_core::AlignMode::Sequential);
        let once = substitute(&text, &a.tokens, &a.chunks, &empty).unwrap();
        prop_assert_eq!(&once.rewritten, &text);
        let b = Lexicons::builtin().analyze(&once.rewritten);
        let twice = substitute(&once.rewritten, &b.tokens, &b.chunks, &empty).unwrap();
        prop_assert_eq!(twice.rewritten, text);
    }

    #[test]
    fn substitution_locality_and_names(text in caption(), faces in (0usize..6).prop_flat_map(identities)) {
        let a = Lexicons::builtin().analyze(&text);
        let people = a.person_chunks();
        let r = sequential_align(&people, &faces);
        let out = substitute(&text, &a.tokens, &a.chunks, &r).unwrap();
        for name in r.assigned_names() {
            prop_assert_eq!(out.rewritten.matches(name.as_str()).count(), 1);
        }
        for name in &r.unassigned_names {
            prop_assert!(!out.rewritten.contains(name.as_str()));
        }
        // untouched tokens keep their text and order
        let mut expected: Vec<(String, bool)> = Vec::new();
        let mut replaced: Vec<_> = out.replacements.iter().collect();
        replaced.sort_by_key(|rep| rep.span[0]);
        let mut at = 0;
        for rep in &replaced {
            for t in &a.tokens[at..rep.span[0]] {
                expected.push((t.text.clone(), t.is_punctuation() || t.is_possessive()));
            }
            expected.push((namegraft_core::rewrite::render_name_list(&rep.names).unwrap(), false));
            at = rep.span[1];
        }
        for t in &a.tokens[at..] {
            expected.push((t.text.clone(), t.is_punctuation() || t.is_possessive()));
        }
        prop_assert_eq!(&out.rewritten, &detokenize(&expected));
        if let (Some(first), Some(last)) = (replaced.first(), replaced.last()) {
            let start = a.tokens[first.span[0]].char_start;
            let end = a.tokens[last.span[1] - 1].char_end;
            let prefix = char_slice(&text, 0, start);
            let suffix = char_slice(&text, end, text.chars().count());
            prop_assert!(out.rewritten.starts_with(&prefix));
            prop_assert!(out.rewritten.ends_with(&suffix));
        }
    }
}

fn pseudo_rows(seed: u64, n: usize) -> Vec<Vec<f64>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut r: Vec<f64> = (0..49).map(|_| rng.gen::<f64>().powi(4)).collect();
            let s: f64 = r.iter().sum();
            r.iter_mut().for_each(|v| *v /= s);
            r
        })
        .collect()
}

fn check_alignment(
    r: &namegraft_core::AlignmentResult,
    people: &[namegraft_core::NpChunk],
    faces: &[Identity],
) -> Result<(), TestCaseError> {
    use std::collections::BTreeMap;
    let assigned: Vec<&String> = r.assigned_names().collect();
    let mut seen = std::collections::BTreeSet::new();
    for n in &assigned {
        prop_assert!(seen.insert(*n), "name {} assigned twice", n);
    }
    let mut input: BTreeMap<&str, usize> = BTreeMap::new();
    for f in faces {
        *input.entry(f.name.as_str()).or_default() += 1;
    }
    let mut output: BTreeMap<&str, usize> = BTreeMap::new();
    for n in assigned.iter().copied().chain(&r.unassigned_names) {
        *output.entry(n.as_str()).or_default() += 1;
    }
    prop_assert_eq!(input, output);
    for u in &r.unmatched_chunks {
        prop_assert!(!r.assignments.contains_key(&u.chunk));
    }
    for c in people {
        let assigned = r.assignments.contains_key(&c.id);
        let unmatched = r.unmatched_chunks.iter().any(|u| u.chunk == c.id);
        prop_assert!(assigned != unmatched);
        if let (Some(names), namegraft_core::ChunkCount::Exact(n)) = (r.assignments.get(&c.id), c.count) {
            prop_assert!(names.len() <= n as usize);
        }
    }
    Ok(())
}
