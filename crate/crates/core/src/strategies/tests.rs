use super::*;
use crate::corpus::{Dataset, DatasetMeta};
use crate::lexicon::load_tsv_lexicon;
use crate::rng::instance_rng;

const PINNED: &[u8] = b"tasty\tadjective\tterrible
crispy\tadjective\tsoggy
nice\tadjective\tnasty
light\tadjective\theavy
easy\tadjective\tdifficult
reasonable\tadjective\tunreasonable
poor\tadjective
great\tadjective
change\tverb
";

fn lex() -> AntonymLexicon {
    load_tsv_lexicon(PINNED).unwrap()
}

fn adverbs() -> DegreeAdverbLexicon {
    DegreeAdverbLexicon::from_words(["extremely"])
}

fn burgers() -> Sentence {
    Sentence::new("s1", "Tasty burgers, and crispy fries.")
        .with_aspect("burgers", "burgers", Polarity::Positive)
        .with_opinion("burgers", "Tasty", Polarity::Positive)
        .with_aspect("fries", "fries", Polarity::Positive)
        .with_opinion("fries", "crispy", Polarity::Positive)
}

fn mixed_sentence() -> Sentence {
    Sentence::new("s3", "It has great food and a reasonable price, but the service is poor.")
        .with_aspect("food", "food", Polarity::Positive)
        .with_opinion("food", "great", Polarity::Positive)
        .with_aspect("price", "price", Polarity::Positive)
        .with_opinion("price", "reasonable", Polarity::Positive)
        .with_aspect("service", "service", Polarity::Negative)
        .with_opinion("service", "poor", Polarity::Negative)
}

fn rng() -> rand_chacha::ChaCha8Rng {
    instance_rng(7, &["test"])
}

fn assert_spans_valid(inst: &GeneratedInstance) {
    for a in &inst.aspects {
        assert_eq!(a.term_span.slice(&inst.text), a.term, "{}", inst.text);
    }
    inst.to_sentence().validate().unwrap();
}

#[test]
fn reverse_polarity() {
    assert_eq!(reverse(Polarity::Positive), Ok(Polarity::Negative));
    assert_eq!(reverse(Polarity::Negative), Ok(Polarity::Positive));
    assert_eq!(reverse(Polarity::Neutral), Err(StrategyError::NotReversible));
}

#[test]
fn revtgt_table_one() {
    let out = rev_tgt(&burgers(), "burgers", &lex(), &mut rng()).unwrap();
    assert_eq!(out.text, "Terrible burgers, but crispy fries.");
    assert_eq!(out.gold_label, Polarity::Negative);
    assert_eq!(out.aspects[1].polarity, Polarity::Positive);
    assert_eq!(out.aspects[0].opinions[0].span.slice(&out.text), "Terrible");
    assert_spans_valid(&out);
}

#[test]
fn revtgt_table_two() {
    let s = Sentence::new("s", "It's light and easy to transport.")
        .with_aspect("t", "transport", Polarity::Positive)
        .with_opinion("t", "light", Polarity::Positive)
        .with_opinion("t", "easy", Polarity::Positive);
    let out = rev_tgt(&s, "t", &lex(), &mut rng()).unwrap();
    assert_eq!(out.text, "It's heavy and difficult to transport.");

    let s = Sentence::new("s", "The menu changes seasonally.")
        .with_aspect("m", "menu", Polarity::Positive)
        .with_opinion("m", "changes", Polarity::Positive);
    let out = rev_tgt(&s, "m", &lex(), &mut rng()).unwrap();
    assert_eq!(out.text, "The menu does not change seasonally.");
    assert_eq!(out.aspects[0].opinions[0].span.slice(&out.text), "does not change");

    let s = Sentence::new("s", "The food is good, and the decor is nice.")
        .with_aspect("food", "food", Polarity::Positive)
        .with_opinion("food", "good", Polarity::Positive)
        .with_aspect("decor", "decor", Polarity::Positive)
        .with_opinion("decor", "nice", Polarity::Positive);
    let out = rev_tgt(&s, "decor", &lex(), &mut rng()).unwrap();
    assert_eq!(out.text, "The food is good, but the decor is nasty.");
}

#[test]
fn revtgt_skips() {
    let s = Sentence::new("s", "The bill came.").with_aspect("b", "bill", Polarity::Neutral);
    assert_eq!(rev_tgt(&s, "b", &lex(), &mut rng()), Err(Skip::NeutralTarget));
    let s = Sentence::new("s", "The bill came.").with_aspect("b", "bill", Polarity::Positive);
    assert_eq!(rev_tgt(&s, "b", &lex(), &mut rng()), Err(Skip::NoTargetOpinion));
    assert_eq!(flip_aspect(&s, &s.aspects[0], &lex(), &mut rng()), Err(Skip::NoTargetOpinion));
}

#[test]
fn revnon_table_one_and_three() {
    let out = rev_non(&burgers(), "burgers", &lex(), &adverbs(), &mut rng()).unwrap();
    assert_eq!(out.text, "Tasty burgers, but soggy fries.");
    assert_eq!(out.gold_label, Polarity::Positive);
    assert_eq!(out.aspects[1].polarity, Polarity::Negative);

    let out = rev_non(&mixed_sentence(), "food", &lex(), &adverbs(), &mut rng()).unwrap();
    assert_eq!(
        out.text,
        "It has great food but an unreasonable price, and the service is extremely poor."
    );
    let polarities: Vec<Polarity> = out.aspects.iter().map(|a| a.polarity).collect();
    assert_eq!(polarities, [Polarity::Positive, Polarity::Negative, Polarity::Negative]);
    assert_eq!(out.aspects[2].opinions[0].span.slice(&out.text), "extremely poor");
    assert_spans_valid(&out);
}

#[test]
fn revnon_skips() {
    let single = Sentence::new("s", "Tasty burgers.")
        .with_aspect("b", "burgers", Polarity::Positive)
        .with_opinion("b", "Tasty", Polarity::Positive);
    assert_eq!(rev_non(&single, "b", &lex(), &adverbs(), &mut rng()), Err(Skip::SingleAspect));

    let neutral = Sentence::new("s", "Tasty burgers with fries.")
        .with_aspect("b", "burgers", Polarity::Positive)
        .with_opinion("b", "Tasty", Polarity::Positive)
        .with_aspect("f", "fries", Polarity::Neutral);
    assert_eq!(rev_non(&neutral, "b", &lex(), &adverbs(), &mut rng()), Err(Skip::AllNeutralNontargets));

    let shared = Sentence::new("s", "Tasty burgers and fries.")
        .with_aspect("b", "burgers", Polarity::Positive)
        .with_opinion("b", "Tasty", Polarity::Positive)
        .with_aspect("f", "fries", Polarity::Positive)
        .with_opinion("f", "Tasty", Polarity::Positive);
    assert_eq!(rev_non(&shared, "b", &lex(), &adverbs(), &mut rng()), Err(Skip::Overlap));

    let bare = Sentence::new("s", "Tasty burgers and fries.")
        .with_aspect("b", "burgers", Polarity::Positive)
        .with_aspect("f", "fries", Polarity::Negative);
    assert_eq!(rev_non(&bare, "b", &lex(), &adverbs(), &mut rng()), Err(Skip::NoTargetOpinion));
}

fn negative_pool() -> AspectSet {
    AspectSet::from_tsv(
        "management\tmanagement is less than accommodating\tnegative\n\
         music\tmusic is too heavy\tnegative\n\
         service\tservice is severely slow\tnegative\n\
         staff\tstaff is friendly\tpositive\n",
    )
    .unwrap()
}

#[test]
fn adddiff_three_expressions() {
    let s = Sentence::new("s", "Great food and best of all GREAT beer!")
        .with_aspect("food", "food", Polarity::Positive)
        .with_aspect("beer", "beer", Polarity::Positive);
    let out = add_diff(&s, "food", &negative_pool(), 3, &mut rng()).unwrap();
    assert_eq!(
        out.text,
        "Great food and best of all GREAT beer, but management is less than accommodating, music is too heavy, and service is severely slow!"
    );
    assert_eq!(out.aspects.len(), 5);
    assert!(out.aspects[2..].iter().all(|a| a.polarity == Polarity::Negative));
    assert_spans_valid(&out);

    let pool = AspectSet::from_tsv("service\tpoorest service ever\tnegative\n").unwrap();
    let out = add_diff(&burgers(), "burgers", &pool, 1, &mut rng()).unwrap();
    assert_eq!(out.text, "Tasty burgers, and crispy fries, but poorest service ever.");
    assert_eq!(out.k, Some(1));
    assert_eq!(out.gold_label, Polarity::Positive);
}

#[test]
fn adddiff_pool_rules() {
    let s = Sentence::new("s", "The Service was great")
        .with_aspect("svc", "Service", Polarity::Positive)
        .with_opinion("svc", "great", Polarity::Positive);
    // service is mentioned, staff has the same polarity: two left
    assert_eq!(eligible_pool_size(&s, Polarity::Positive, &negative_pool()), 2);
    assert_eq!(add_diff(&s, "svc", &negative_pool(), 3, &mut rng()), Err(Skip::PoolExhausted));
    let out = add_diff(&s, "svc", &negative_pool(), 2, &mut rng()).unwrap();
    assert_eq!(
        out.text,
        "The Service was great, but management is less than accommodating, and music is too heavy."
    );
    // neutral targets take both polarities
    assert_eq!(eligible_pool_size(&s, Polarity::Neutral, &negative_pool()), 3);
}

#[test]
fn combined_is_sequential() {
    let out = rev_non_add_diff(&mixed_sentence(), "food", &lex(), &adverbs(), &negative_pool(), 1, &mut rng()).unwrap();
    let mut r = rng();
    let first = rev_non(&mixed_sentence(), "food", &lex(), &adverbs(), &mut r).unwrap();
    let second = add_diff(&first.to_sentence(), "food", &negative_pool(), 1, &mut r).unwrap();
    assert_eq!(out.text, second.text);
    assert_eq!(out.strategy, StrategyTag::RevNonAddDiff);
    assert!(out.text.starts_with("It has great food but an unreasonable price, and the service is extremely poor, but "));
    let single = Sentence::new("s", "Tasty burgers.")
        .with_aspect("b", "burgers", Polarity::Positive)
        .with_opinion("b", "Tasty", Polarity::Positive);
    assert_eq!(
        rev_non_add_diff(&single, "b", &lex(), &adverbs(), &negative_pool(), 1, &mut rng()),
        Err(Skip::SingleAspect)
    );
}

fn small_dataset() -> Dataset {
    Dataset::with_sentences(
        &DatasetMeta::default(),
        vec![
            burgers(),
            mixed_sentence(),
            Sentence::new("s4", "The menu changes seasonally.")
                .with_aspect("m", "menu", Polarity::Positive)
                .with_opinion("m", "changes", Polarity::Positive),
            Sentence::new("s5", "The bill came.").with_aspect("b", "bill", Polarity::Neutral),
        ],
    )
    .unwrap()
}

#[test]
fn generate_all_accounting_and_determinism() {
    let ds = small_dataset();
    let mut cfg = GenerateConfig {
        seed: 11,
        ..GenerateConfig::default()
    };
    cfg.strategies.insert(StrategyTag::RevNonAddDiff);
    let (out, report) = generate_all(&ds, &cfg, &lex(), &adverbs(), &negative_pool());
    let units = ds.instance_count();
    for strategy in StrategyTag::ALL {
        let emitted = out.iter().filter(|i| i.strategy == strategy).count();
        assert_eq!(units, emitted + report.skipped(strategy), "{strategy}");
    }
    assert_eq!(report.emitted[&StrategyTag::Source], units);
    assert_eq!(report.count(StrategyTag::RevTgt, Skip::NeutralTarget), 1);
    for inst in &out {
        assert_spans_valid(inst);
        let source = ds.sentence(&inst.source_sentence_id).unwrap().aspect(&inst.target_aspect_id).unwrap();
        match inst.strategy {
            StrategyTag::RevTgt => assert_eq!(Ok(inst.gold_label), reverse(source.polarity)),
            _ => assert_eq!(inst.gold_label, source.polarity),
        }
        assert_eq!(inst.target().unwrap().polarity, inst.gold_label);
    }
    for threads in [1, 4] {
        let again = generate_all(&ds, &GenerateConfig { threads: Some(threads), ..cfg.clone() }, &lex(), &adverbs(), &negative_pool());
        assert_eq!(again.0, out);
        assert_eq!(again.1, report);
    }
    assert!(report.to_tsv().starts_with("strategy\treason\tcount\n"));
}

#[test]
fn generate_fixed_k() {
    let cfg = GenerateConfig {
        seed: 3,
        strategies: [StrategyTag::AddDiff].into(),
        k: KPolicy::Fixed(2),
        threads: None,
    };
    let (out, _) = generate_all(&small_dataset(), &cfg, &lex(), &adverbs(), &negative_pool());
    let adddiff: Vec<_> = out.iter().filter(|i| i.strategy == StrategyTag::AddDiff).collect();
    assert!(!adddiff.is_empty());
    assert!(adddiff.iter().all(|i| i.k == Some(2) && i.new_id.ends_with("#adddiff-k2")));
    assert!(out.iter().all(|i| matches!(i.strategy, StrategyTag::Source | StrategyTag::AddDiff)));
}

#[test]
fn generate_empty() {
    let ds = Dataset::new(&DatasetMeta::default());
    let (out, report) = generate_all(&ds, &GenerateConfig::default(), &lex(), &adverbs(), &negative_pool());
    assert!(out.is_empty());
    assert!(report.counts.is_empty());
}

#[test]
fn enriched_round_trip() {
    let (out, _) = generate_all(&small_dataset(), &GenerateConfig::default(), &lex(), &adverbs(), &negative_pool());
    let bytes = write_enriched(&out);
    assert_eq!(read_enriched(&bytes).unwrap(), out);
    let bad = String::from_utf8(bytes).unwrap().replacen("\"from\":6", "\"from\":7", 1);
    assert!(read_enriched(bad.as_bytes()).is_err());
}
