//! Regenerates the synthetic fixtures under `data/`.
//!
//! ```text
//! cargo run -p arsent-core --example gen_corpus -- data
//! ```
//!
//! Every topic is assembled from words of known polarity, so its gold label
//! is known by construction. One in five sentiment words is withheld from
//! `seed_lexicon.tsv` and made recoverable through `provider.tsv`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::PathBuf;

use arsent_core::eval::{write_corpus, Genre, Topic};
use arsent_core::lexicon::{update_term_frequencies, LexiconEntry, Polarity, SentimentLexicon};
use arsent_core::preprocess::segment;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Words = &'static [(&'static str, &'static str)];

const PO_ADJ: Words = &[
    ("جميل", "beautiful"),
    ("رائع", "wonderful"),
    ("ممتاز", "excellent"),
    ("حلو", "sweet"),
    ("سعيد", "happy"),
    ("جيد", "good"),
    ("عظيم", "great"),
    ("مذهل", "amazing"),
    ("لطيف", "kind"),
    ("نظيف", "clean"),
    ("مريح", "comfortable"),
    ("هادي", "calm"),
    ("مبهر", "dazzling"),
    ("ممتع", "enjoyable"),
    ("مفيد", "useful"),
    ("ناجح", "successful"),
    ("شيك", "elegant"),
    ("فخم", "luxurious"),
    ("مسرور", "delighted"),
    ("فرحان", "pleased"),
    ("مبتهج", "glad"),
    ("كويس", "fine"),
    ("كريم", "generous"),
    ("شاطر", "clever"),
    ("مضحك", "funny"),
    ("بديع", "splendid"),
    ("خلاب", "stunning"),
    ("سريع", "fast"),
];

const PO_NOUN: Words = &[
    ("حب", "love"),
    ("فرح", "joy"),
    ("سعادة", "happiness"),
    ("نجاح", "success"),
    ("متعة", "fun"),
    ("راحة", "comfort"),
    ("امل", "hope"),
    ("روعة", "splendour"),
    ("تميز", "distinction"),
    ("اتقان", "mastery"),
];

const NG_ADJ: Words = &[
    ("سيء", "bad"),
    ("قذر", "dirty"),
    ("ممل", "boring"),
    ("وحش", "awful"),
    ("حزين", "sad"),
    ("فاشل", "failed"),
    ("رديء", "poor"),
    ("مزعج", "annoying"),
    ("غالي", "expensive"),
    ("بطيء", "slow"),
    ("متسخ", "soiled"),
    ("كئيب", "gloomy"),
    ("مقرف", "disgusting"),
    ("سخيف", "silly"),
    ("مستفز", "provoking"),
    ("مخيب", "disappointing"),
    ("بايخ", "lame"),
    ("قبيح", "ugly"),
    ("زفت", "lousy"),
    ("مرهق", "exhausting"),
    ("مؤلم", "painful"),
    ("فظيع", "terrible"),
    ("تعبان", "tired"),
    ("ضايع", "lost"),
    ("معفن", "rotten"),
    ("خايب", "hopeless"),
    ("ناقص", "lacking"),
    ("غبي", "stupid"),
];

const NG_NOUN: Words = &[
    ("ملل", "boredom"),
    ("حزن", "sadness"),
    ("فشل", "failure"),
    ("زحمة", "crowding"),
    ("ضوضاء", "noise"),
    ("غلاء", "high prices"),
    ("كارثة", "disaster"),
    ("خيبة", "letdown"),
    ("قرف", "disgust"),
    ("اهمال", "neglect"),
];

const NU_WORDS: Words = &[
    ("عادي", "ordinary"),
    ("متوسط", "average"),
    ("مقبول", "acceptable"),
    ("طبيعي", "normal"),
    ("معقول", "reasonable"),
];

/// Noun/adjective pairs of opposite polarity. Gold label NG.
const CONFLICTS: &[(&str, &str, Polarity, &str, &str, Polarity)] = &[
    ("خدمة", "service", Polarity::Po, "سيئة", "bad", Polarity::Ng),
    (
        "فساد",
        "corruption",
        Polarity::Ng,
        "اخلاقي",
        "moral",
        Polarity::Po,
    ),
    ("جمال", "beauty", Polarity::Po, "مزيف", "fake", Polarity::Ng),
    (
        "ابداع",
        "creativity",
        Polarity::Po,
        "ضعيف",
        "weak",
        Polarity::Ng,
    ),
];

/// Lexicon-only words used as synonym evidence by the provider.
const EXTRA: &[(&str, &str, Polarity)] = &[
    ("قوي", "strong", Polarity::Po),
    ("عنيف", "violent", Polarity::Ng),
    ("حاد", "keen", Polarity::Po),
    ("تافه", "trivial", Polarity::Ng),
    ("ابله", "idiot", Polarity::Ng),
    ("مستهتر", "reckless", Polarity::Ng),
];

const PO_IDIOMS: &[&str] = &[
    "زي الفل",
    "زي العسل",
    "تحفة فنية",
    "فوق الممتاز",
    "يرفع الراس",
];
const NG_IDIOMS: &[&str] = &[
    "تسليم القط مفتاح الكرار",
    "علي الحديدة",
    "ضحك علي الدقون",
    "خراب بيوت",
    "زي الزفت",
];

const SUBJECTS: [(Genre, [&str; 6]); 4] = [
    (
        Genre::Tweet,
        ["الحكومة", "البلد", "الماتش", "الجو", "الناس", "الدوري"],
    ),
    (
        Genre::Hotel,
        ["الفندق", "الغرفة", "الاستقبال", "المطعم", "الحمام", "الشاطئ"],
    ),
    (
        Genre::Product,
        [
            "الموبايل",
            "الشاشة",
            "البطارية",
            "الكاميرا",
            "الجهاز",
            "الشاحن",
        ],
    ),
    (
        Genre::Tv,
        [
            "المسلسل",
            "البرنامج",
            "الحلقة",
            "المذيع",
            "الفيلم",
            "الممثل",
        ],
    ),
];

const VERBS: &[&str] = &["كان", "يكون", "يبقي", "يفضل", "شاف", "شفت"];
const NOUN_FILLERS: &[&str] = &["الحاجات", "الحاجة", "حد", "مرة", "الوقت", "شوية"];
const TAILS: &[&str] = &["النهارده", "الصراحة", "بجد", "والله", "خالص", "كده"];
const DIALECT_OOV: &[&str] = &["هايف", "بايظ"];
const COS_WORD: &str = "شديد";

const NEGATORS: &[&str] = &["لا", "مش", "ليس", "لن", "لم", "مفيش", "مافيش", "غير"];
const INTENSIFIERS: &[&str] = &["جدا", "اوي", "بشدة", "للغاية"];
const QUESTIONS: &[&str] = &[
    "هل",
    "اين",
    "لماذا",
    "ليه",
    "متي",
    "كيف",
    "فين",
    "ازاي",
    "امتي",
];
const WISHFUL: &[&str] = &["يارب", "يا رب", "اتمني", "ياريت", "ليت", "اللهم", "عسي"];
const STOPWORDS: &[&str] = &[
    "في", "من", "علي", "الي", "عن", "مع", "و", "ده", "دي", "هذا", "هذه", "ان", "انا", "هو", "هي",
    "بعض", "فيه", "لكن", "بس",
];

#[derive(Clone, Copy, PartialEq)]
enum Pos {
    Adj,
    Noun,
}

struct Word {
    word: &'static str,
    gloss: &'static str,
    polarity: Polarity,
    pos: Pos,
    withheld: bool,
}

fn sentiment_words() -> Vec<Word> {
    let groups = [
        (PO_ADJ, Polarity::Po, Pos::Adj),
        (PO_NOUN, Polarity::Po, Pos::Noun),
        (NG_ADJ, Polarity::Ng, Pos::Adj),
        (NG_NOUN, Polarity::Ng, Pos::Noun),
    ];
    let mut out = Vec::new();
    for (words, polarity, pos) in groups {
        for (i, (word, gloss)) in words.iter().enumerate() {
            out.push(Word {
                word,
                gloss,
                polarity,
                pos,
                withheld: i % 5 == 2,
            });
        }
    }
    out
}

struct Gen {
    rng: ChaCha8Rng,
    words: Vec<Word>,
}

impl Gen {
    fn pick(&mut self, items: &[&'static str]) -> &'static str {
        items.choose(&mut self.rng).copied().unwrap()
    }

    fn sentiment(&mut self, polarity: Polarity, pos: Pos) -> &'static str {
        let pool: Vec<&'static str> = self
            .words
            .iter()
            .filter(|w| w.polarity == polarity && w.pos == pos)
            .map(|w| w.word)
            .collect();
        pool.choose(&mut self.rng).copied().unwrap()
    }

    fn adj(&mut self, polarity: Polarity) -> &'static str {
        self.sentiment(polarity, Pos::Adj)
    }

    fn noun(&mut self, polarity: Polarity) -> &'static str {
        self.sentiment(polarity, Pos::Noun)
    }

    fn polarity(&mut self) -> Polarity {
        if self.rng.gen_bool(0.5) {
            Polarity::Po
        } else {
            Polarity::Ng
        }
    }

    fn plain(&mut self, s: &str, p: Polarity) -> String {
        let tail = self.pick(TAILS);
        match self.rng.gen_range(0..5) {
            0 => format!("{s} {}", self.adj(p)),
            1 => {
                let (a, b) = (self.adj(p), self.adj(p));
                format!("{s} كان {a} و {b}")
            }
            2 => format!("بجد {s} {} {tail}", self.adj(p)),
            3 => format!("{s} فيه {} {tail}", self.noun(p)),
            _ => {
                let (a, n) = (self.adj(p), self.noun(p));
                format!("{s} {a}. {n} {tail}")
            }
        }
    }

    fn topic(&mut self, kind: usize, s: &str) -> (String, Polarity) {
        use Polarity::{Ng, Po};
        match kind {
            // plain
            0 => (self.plain(s, Po), Po),
            1 => {
                let mut text = self.plain(s, Ng);
                if self.rng.gen_bool(0.2) {
                    let oov = self.pick(DIALECT_OOV);
                    text = format!("{text} و {oov}");
                } else if self.rng.gen_bool(0.1) {
                    text = format!("{text}. حر {COS_WORD}");
                }
                (text, Ng)
            }
            // negated
            2 => {
                let p = self.polarity();
                let neg = self.pick(&["مش", "ليس", "مش"]);
                let text = match self.rng.gen_range(0..3) {
                    0 => format!("{s} {neg} {}", self.adj(p)),
                    1 => format!("الصراحة {s} {neg} {} خالص", self.adj(p)),
                    _ => format!("{s} {neg} {} زي ما قالوا", self.adj(p)),
                };
                (text, p.flip())
            }
            // intensified
            3 => {
                let p = self.polarity();
                let int = self.pick(&INTENSIFIERS[..3]);
                let text = match self.rng.gen_range(0..3) {
                    0 => format!("{s} {} {int}", self.adj(p)),
                    1 => format!("{s} كان {} {int} بجد", self.adj(p)),
                    _ => format!("والله {s} {} {int}", self.adj(p)),
                };
                (text, p)
            }
            // idiom
            4 => {
                let p = self.polarity();
                let idiom = if p == Po {
                    self.pick(PO_IDIOMS)
                } else {
                    self.pick(NG_IDIOMS)
                };
                let text = if self.rng.gen_bool(0.5) {
                    format!("{s} {idiom}")
                } else {
                    format!("الكلام عن {s} {idiom} {}", self.pick(TAILS))
                };
                (text, p)
            }
            // conflicting noun/adjective pair
            5 => {
                let (n, _, _, a, _, _) = *CONFLICTS.choose(&mut self.rng).unwrap();
                let text = if self.rng.gen_bool(0.5) {
                    format!("{s} فيه {n} {a}")
                } else {
                    format!("للاسف {n} {a} في {s}")
                };
                (text, Ng)
            }
            // early word dominates a later opposite one
            6 => {
                let p = self.polarity();
                let (a, n) = (self.adj(p), self.noun(p.flip()));
                let filler = self.pick(NOUN_FILLERS);
                (format!("{s} {a} لكن فيه {n} في بعض {filler} الصغيرة"), p)
            }
            // question
            7 => {
                let q = self.pick(&["ليه", "هل", "ازاي"]);
                let text = match self.rng.gen_range(0..2) {
                    0 => format!("{q} {s} {} كده؟", self.adj(Ng)),
                    _ => format!("{q} محدش شاف {s} {} ده؟", self.adj(Ng)),
                };
                (text, Ng)
            }
            // wishful
            _ => {
                let w = self.pick(&["يارب", "اتمني", "يا رب", "ياريت"]);
                let v = self.pick(&["يكون", "يبقي", "يفضل"]);
                (format!("{w} {s} {v} {}", self.adj(Po)), Po)
            }
        }
    }
}

/// Topic kinds per genre, in the order used by [`Gen::topic`].
const KIND_COUNTS: [usize; 9] = [10, 10, 6, 6, 6, 4, 2, 3, 3];

fn write_lines(path: PathBuf, lines: impl IntoIterator<Item = String>) {
    let mut text = String::new();
    for l in lines {
        text.push_str(&l);
        text.push('\n');
    }
    fs::write(&path, text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
}

fn main() {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data".into()));
    fs::create_dir_all(&out).unwrap();
    let mut gen = Gen {
        rng: ChaCha8Rng::seed_from_u64(2024),
        words: sentiment_words(),
    };

    let mut corpus = Vec::new();
    for (genre, subjects) in SUBJECTS {
        let mut kinds: Vec<usize> = KIND_COUNTS
            .iter()
            .enumerate()
            .flat_map(|(k, &n)| std::iter::repeat_n(k, n))
            .collect();
        kinds.shuffle(&mut gen.rng);
        for kind in kinds {
            let s = gen.pick(&subjects);
            let (text, label) = gen.topic(kind, s);
            let id = format!("{}-{:03}", genre_key(genre), corpus.len() + 1);
            corpus.push(Topic::new(id, text).labeled(label).with_genre(genre));
        }
    }
    write_corpus(&corpus, out.join("corpus.jsonl")).unwrap();

    let mut full = SentimentLexicon::new();
    let mut seed = SentimentLexicon::new();
    let mut add = |word: &str, gloss: &str, p: Polarity, withheld: bool| {
        let e = LexiconEntry::new(word, p).with_gloss(gloss);
        full.insert(e.clone()).unwrap();
        if !withheld {
            seed.insert(e).unwrap();
        }
    };
    for w in &gen.words {
        add(w.word, w.gloss, w.polarity, w.withheld);
    }
    for (n, ng, np, a, ag, ap) in CONFLICTS {
        add(n, ng, *np, false);
        add(a, ag, *ap, false);
    }
    for (w, g, p) in EXTRA {
        add(w, g, *p, false);
    }
    for (w, g) in NU_WORDS {
        add(w, g, Polarity::Nu, false);
    }

    let mut tags: BTreeMap<String, &str> = BTreeMap::new();
    let mut prevent = BTreeSet::new();
    for w in &gen.words {
        tags.insert(w.word.into(), if w.pos == Pos::Adj { "JJ" } else { "NN" });
    }
    for (n, _, _, a, _, _) in CONFLICTS {
        tags.insert((*n).into(), "NN");
        tags.insert((*a).into(), "JJ");
    }
    for (w, _, _) in EXTRA {
        tags.insert((*w).into(), "JJ");
    }
    for (w, _) in NU_WORDS {
        tags.insert((*w).into(), "JJ");
    }
    for w in DIALECT_OOV.iter().chain([&COS_WORD]) {
        tags.insert((*w).into(), "JJ");
    }
    for (_, subjects) in SUBJECTS {
        for s in subjects {
            tags.insert(s.into(), "NN");
            prevent.insert(s.to_string());
        }
    }
    for w in NOUN_FILLERS.iter().chain(&["الكلام", "حر"]) {
        tags.insert((*w).into(), "NN");
        prevent.insert(w.to_string());
    }
    for w in VERBS.iter().chain(&["قالوا"]) {
        tags.insert((*w).into(), "VB");
        prevent.insert(w.to_string());
    }
    for topic in &corpus {
        for s in segment(&topic.text) {
            for t in s.tokens {
                tags.entry(t.surface).or_insert("OTHER");
            }
        }
    }
    for w in &prevent {
        full.prevent(w).unwrap();
        seed.prevent(w).unwrap();
    }
    update_term_frequencies(&full, &corpus)
        .save(out.join("lexicon.tsv"))
        .unwrap();
    update_term_frequencies(&seed, &corpus)
        .save(out.join("seed_lexicon.tsv"))
        .unwrap();
    write_lines(
        out.join("tags.tsv"),
        tags.iter().map(|(w, t)| format!("{w}\t{t}")),
    );

    // provider rows: withheld words resolve through seed-lexicon synonyms,
    // every third one through an antonym instead
    let mut rows = vec![
        "# word\ttranslation\tsynonyms\tantonyms".to_string(),
        "مسرور\tDelighted\tفرحان:Pleased,سعيد:Happy,مبتهج:Glad\t".into(),
        format!("{COS_WORD}\tIntense\tقوي:strong,عنيف:violent,حاد:keen\t"),
    ];
    let withheld: Vec<&Word> = gen.words.iter().filter(|w| w.withheld).collect();
    for (i, w) in withheld.iter().enumerate() {
        let same: Vec<&Word> = gen
            .words
            .iter()
            .filter(|x| !x.withheld && x.polarity == w.polarity && x.pos == w.pos)
            .collect();
        let opposite: Vec<&Word> = gen
            .words
            .iter()
            .filter(|x| !x.withheld && x.polarity != w.polarity && x.pos == w.pos)
            .collect();
        let syn: Vec<String> = same
            .choose_multiple(&mut gen.rng, 2)
            .map(|x| format!("{}:{}", x.word, x.gloss))
            .collect();
        let (syn, ant) = if i % 3 == 0 {
            let a = opposite.choose(&mut gen.rng).unwrap();
            (syn[..1].join(","), format!("{}:{}", a.word, a.gloss))
        } else {
            (syn.join(","), String::new())
        };
        rows.push(format!("{}\t{}\t{}\t{}", w.word, w.gloss, syn, ant));
    }
    write_lines(out.join("provider.tsv"), rows);

    let mut idioms = vec!["# phrase\tpolarity\tgloss".to_string()];
    idioms.extend(PO_IDIOMS.iter().map(|p| format!("{p}\tPO")));
    idioms.extend(NG_IDIOMS.iter().map(|p| format!("{p}\tNG")));
    idioms[1].push_str("\tas good as jasmine");
    write_lines(out.join("idioms.tsv"), idioms);

    let cue = |name: &str, words: &[&str]| {
        write_lines(out.join(name), words.iter().map(|w| w.to_string()))
    };
    cue("negators.txt", NEGATORS);
    cue("intensifiers.txt", INTENSIFIERS);
    cue("questions.txt", QUESTIONS);
    cue("wishful.txt", WISHFUL);
    cue("stopwords.txt", STOPWORDS);

    let counts = corpus.iter().fold((0, 0), |(po, ng), t| match t.label {
        Some(Polarity::Po) => (po + 1, ng),
        _ => (po, ng + 1),
    });
    println!(
        "{} topics ({} PO, {} NG), {} lexicon words ({} withheld from seed) -> {}",
        corpus.len(),
        counts.0,
        counts.1,
        full.len(),
        withheld.len(),
        out.display()
    );
}

fn genre_key(g: Genre) -> &'static str {
    match g {
        Genre::Tweet => "tw",
        Genre::Hotel => "ho",
        Genre::Product => "pr",
        Genre::Tv => "tv",
    }
}
