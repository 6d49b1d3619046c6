//! Seeded random history scripts.
//!
//! The generator keeps a model of every Java file and emits one script
//! step per commit together with the operations that step must produce.
//! Comments never sit on adjacent lines, code lines are unique, and every
//! comment text is unique, so the expected operations are unambiguous.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::script::{Action, HistoryScript, Step, StepKind};
use crate::tracker::Resolution;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub commits: usize,
    /// Files created by the first commit.
    pub initial_files: usize,
    pub methods_per_file: usize,
    /// SATD comments per method in the first commit.
    pub satd_per_method: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            commits: 12,
            initial_files: 2,
            methods_per_file: 2,
            satd_per_method: 1,
        }
    }
}

#[derive(Debug, Clone)]
enum Line {
    Code(String),
    Comment { text: String, satd: bool },
}

#[derive(Debug, Clone)]
struct Method {
    name: String,
    body: Vec<Line>,
}

#[derive(Debug, Clone)]
struct File {
    path: String,
    class: String,
    methods: Vec<Method>,
}

impl File {
    fn render(&self) -> String {
        let mut out = format!("package synth;\n\npublic class {} {{\n", self.class);
        for (i, m) in self.methods.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&format!("    public void {}() {{\n", m.name));
            for line in &m.body {
                match line {
                    Line::Code(c) => out.push_str(&format!("        {c}\n")),
                    Line::Comment { text, .. } => out.push_str(&format!("        // {text}\n")),
                }
            }
            out.push_str("    }\n");
        }
        out.push_str("}\n");
        out
    }

    fn satd_texts(&self) -> Vec<String> {
        self.methods.iter().flat_map(satd_in).collect()
    }
}

fn satd_in(m: &Method) -> Vec<String> {
    m.body
        .iter()
        .filter_map(|l| match l {
            Line::Comment { text, satd: true } => Some(text.clone()),
            _ => None,
        })
        .collect()
}

type Expected = Vec<(Resolution, String)>;

const MARKERS: [&str; 5] = ["TODO", "FIXME", "HACK:", "XXX", "workaround for"];
const VERBS: [&str; 6] = ["handle", "revisit", "simplify", "validate", "cache", "split"];
const NOUNS: [&str; 8] = ["parser", "timeout", "buffer", "session", "index", "request", "config", "retry"];
const PLAIN_VERBS: [&str; 4] = ["computes", "returns", "stores", "updates"];

struct Generator {
    rng: ChaCha8Rng,
    files: Vec<File>,
    counter: usize,
    file_counter: usize,
    /// Debt comments and files present after the first commit. Removals
    /// turn into additions while the history is below either.
    satd_floor: usize,
    file_floor: usize,
}

impl Generator {
    fn next_id(&mut self) -> usize {
        self.counter += 1;
        self.counter
    }

    fn code(&mut self) -> Line {
        let n = self.next_id();
        Line::Code(format!("int v{n} = {};", n % 97))
    }

    fn satd_text(&mut self) -> String {
        let n = self.next_id();
        let marker = MARKERS.choose(&mut self.rng).expect("non-empty");
        let verb = VERBS.choose(&mut self.rng).expect("non-empty");
        let noun = NOUNS.choose(&mut self.rng).expect("non-empty");
        format!("{marker} {verb} the {noun} {n}")
    }

    fn plain_text(&mut self) -> String {
        let n = self.next_id();
        let verb = PLAIN_VERBS.choose(&mut self.rng).expect("non-empty");
        let noun = NOUNS.choose(&mut self.rng).expect("non-empty");
        format!("{verb} the {noun} {n}")
    }

    fn method(&mut self, satd: usize, expected: &mut Vec<(Resolution, String)>) -> Method {
        let n = self.next_id();
        let mut body = vec![self.code()];
        for _ in 0..satd {
            let text = self.satd_text();
            expected.push((Resolution::SatdAdded, text.clone()));
            body.push(Line::Comment { text, satd: true });
            body.push(self.code());
        }
        if self.rng.gen_bool(0.3) {
            let text = self.plain_text();
            body.push(Line::Comment { text, satd: false });
            body.push(self.code());
        }
        Method {
            name: format!("step{n}"),
            body,
        }
    }

    fn new_file(&mut self, methods: usize, satd: usize, expected: &mut Vec<(Resolution, String)>) -> File {
        self.file_counter += 1;
        let class = format!("Unit{}", self.file_counter);
        let dir = ["src", "lib", "core"].choose(&mut self.rng).expect("non-empty");
        let methods = (0..methods).map(|_| self.method(satd, expected)).collect();
        File {
            path: format!("{dir}/{class}.java"),
            class,
            methods,
        }
    }

    /// Body positions where a comment may go without touching another one.
    fn free_slots(body: &[Line]) -> Vec<usize> {
        (0..=body.len())
            .filter(|&i| {
                let before_ok = i == 0 || matches!(body[i - 1], Line::Code(_));
                let after_ok = i == body.len() || matches!(body[i], Line::Code(_));
                before_ok && after_ok
            })
            .collect()
    }

    /// (file, method, line) of every comment matching `satd`.
    fn comments(&self, satd: bool) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (fi, f) in self.files.iter().enumerate() {
            for (mi, m) in f.methods.iter().enumerate() {
                for (li, l) in m.body.iter().enumerate() {
                    if matches!(l, Line::Comment { satd: s, .. } if *s == satd) {
                        out.push((fi, mi, li));
                    }
                }
            }
        }
        out
    }

    fn pick_method(&mut self, file: usize) -> usize {
        self.rng.gen_range(0..self.files[file].methods.len())
    }

    fn insert_comment(&mut self, file: usize, text: String, satd: bool) {
        let mi = self.pick_method(file);
        let mut slots = Self::free_slots(&self.files[file].methods[mi].body);
        if slots.is_empty() {
            let code = self.code();
            self.files[file].methods[mi].body.push(code);
            slots = Self::free_slots(&self.files[file].methods[mi].body);
        }
        let at = *slots.choose(&mut self.rng).expect("a trailing code line leaves a slot");
        self.files[file].methods[mi].body.insert(at, Line::Comment { text, satd });
    }

    fn comment_text(&self, (fi, mi, li): (usize, usize, usize)) -> String {
        match &self.files[fi].methods[mi].body[li] {
            Line::Comment { text, .. } => text.clone(),
            Line::Code(_) => unreachable!("comment index points at code"),
        }
    }

    fn write(&self, file: usize) -> Action {
        Action::WriteFile {
            path: self.files[file].path.clone(),
            content: self.files[file].render(),
        }
    }

    /// Mutates the model and returns the step, or `None` when the chosen
    /// action does not apply.
    fn step(&mut self, choice: u32) -> Option<(Vec<Action>, Expected)> {
        let mut expected = Vec::new();
        let nfiles = self.files.len();
        let choice = match choice {
            2 | 4 if self.comments(true).len() < self.satd_floor => 1,
            6 if nfiles <= self.file_floor => 0,
            c => c,
        };
        let file = self.rng.gen_range(0..nfiles);
        let actions = match choice {
            0 => {
                let methods = self.rng.gen_range(1..=2);
                let satd = self.rng.gen_range(0..=2);
                let f = self.new_file(methods, satd, &mut expected);
                self.files.push(f);
                vec![self.write(nfiles)]
            }
            1 => {
                let text = self.satd_text();
                expected.push((Resolution::SatdAdded, text.clone()));
                self.insert_comment(file, text, true);
                vec![self.write(file)]
            }
            2..=4 => {
                let all = self.comments(true);
                let &(fi, mi, li) = all.choose(&mut self.rng)?;
                let old = self.comment_text((fi, mi, li));
                let body = &mut self.files[fi].methods[mi].body;
                match choice {
                    2 => {
                        body.remove(li);
                        expected.push((Resolution::SatdRemoved, old));
                    }
                    3 => {
                        let text = self.satd_text();
                        self.files[fi].methods[mi].body[li] = Line::Comment {
                            text: text.clone(),
                            satd: true,
                        };
                        expected.push((Resolution::SatdChanged, text));
                    }
                    _ => {
                        let text = self.plain_text();
                        self.files[fi].methods[mi].body[li] = Line::Comment { text, satd: false };
                        expected.push((Resolution::SatdRemoved, old));
                    }
                }
                vec![self.write(fi)]
            }
            5 => {
                let from = self.files[file].path.clone();
                let n = self.next_id();
                let to = format!("moved{n}/{}.java", self.files[file].class);
                self.files[file].path = to.clone();
                expected.extend(
                    self.files[file]
                        .satd_texts()
                        .into_iter()
                        .map(|t| (Resolution::FilePathChanged, t)),
                );
                vec![Action::RenameFile { from, to }]
            }
            6 => {
                if nfiles < 2 {
                    return None;
                }
                let f = self.files.remove(file);
                expected.extend(f.satd_texts().into_iter().map(|t| (Resolution::FileRemoved, t)));
                vec![Action::DeleteFile { path: f.path }]
            }
            7 => {
                let mi = self.pick_method(file);
                let n = self.next_id();
                let m = &mut self.files[file].methods[mi];
                m.name = format!("renamed{n}");
                expected.extend(satd_in(m).into_iter().map(|t| (Resolution::ClassOrMethodChanged, t)));
                vec![self.write(file)]
            }
            8 => {
                if nfiles < 2 {
                    return None;
                }
                let candidates = self.comments(true);
                let &(fi, mi, li) = candidates.choose(&mut self.rng)?;
                let text = self.comment_text((fi, mi, li));
                self.files[fi].methods[mi].body.remove(li);
                let targets: Vec<usize> = (0..nfiles).filter(|&t| t != fi).collect();
                let target = *targets.choose(&mut self.rng).expect("two files");
                self.insert_comment(target, text.clone(), true);
                expected.push((Resolution::SatdMovedFile, text));
                vec![self.write(fi), self.write(target)]
            }
            9 => {
                let mi = self.pick_method(file);
                let code = self.code();
                let body = &mut self.files[file].methods[mi].body;
                let at = self.rng.gen_range(0..=body.len());
                body.insert(at, code);
                vec![self.write(file)]
            }
            _ => {
                let text = self.plain_text();
                self.insert_comment(file, text, false);
                vec![self.write(file)]
            }
        };
        Some((actions, expected))
    }
}

/// A reproducible random history for `seed`. Each step carries the
/// operations it must produce.
pub fn random_script(seed: u64, config: &GeneratorConfig) -> HistoryScript {
    let mut gen = Generator {
        rng: ChaCha8Rng::seed_from_u64(seed),
        files: Vec::new(),
        counter: 0,
        file_counter: 0,
        satd_floor: 0,
        file_floor: 0,
    };
    let mut steps = Vec::new();

    let mut expected = Vec::new();
    for _ in 0..config.initial_files.max(1) {
        let f = gen.new_file(config.methods_per_file.max(1), config.satd_per_method, &mut expected);
        gen.files.push(f);
    }
    steps.push(Step {
        kind: StepKind::Commit,
        message: "initial import".into(),
        actions: (0..gen.files.len()).map(|i| gen.write(i)).collect(),
        expected,
    });

    gen.satd_floor = gen.comments(true).len();
    gen.file_floor = gen.files.len().saturating_sub(2).max(1);

    // Weighted toward line-level edits.
    const WEIGHTS: [(u32, u32); 11] = [
        (0, 1),
        (1, 4),
        (2, 3),
        (3, 3),
        (4, 2),
        (5, 1),
        (6, 1),
        (7, 1),
        (8, 2),
        (9, 2),
        (10, 1),
    ];
    let total: u32 = WEIGHTS.iter().map(|w| w.1).sum();
    while steps.len() < config.commits.max(1) {
        let mut roll = gen.rng.gen_range(0..total);
        let choice = WEIGHTS
            .iter()
            .find(|(_, w)| {
                if roll < *w {
                    true
                } else {
                    roll -= w;
                    false
                }
            })
            .map(|(c, _)| *c)
            .expect("roll below total");
        if let Some((actions, expected)) = gen.step(choice) {
            steps.push(Step {
                kind: StepKind::Commit,
                message: format!("change {}", steps.len() + 1),
                actions,
                expected,
            });
        }
    }
    HistoryScript {
        patterns: Vec::new(),
        steps,
    }
}
