use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tokenspace::{
    heap_query, Heap, HeapQuery, QueryAnswer, Symbol, SymbolMap, Token, Verdict, Witness,
};
use tokenspace_cli::codec;

use crate::common::{ensure, sym, words_up_to};

const BOUND: usize = 3;
const SAMPLES: usize = 10_000;
const PAIRS: usize = 200;

fn golden() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn json_files(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let mut out: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    out.sort();
    Ok(out)
}

fn document_round_trips(dir: &Path) -> Result<usize, String> {
    let files = json_files(dir)?;
    for path in &files {
        let text = read(path)?;
        let doc = codec::parse_json(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let again = codec::to_text(
            &codec::canonical(&doc).map_err(|e| format!("{}: {e}", path.display()))?,
        );
        ensure(again == text, || {
            format!("{}: printed document differs from file", path.display())
        })?;
    }
    Ok(files.len())
}

fn term_round_trips(dir: &Path) -> Result<usize, String> {
    let text = read(&dir.join("terms.txt"))?;
    let mut n = 0;
    for line in text.lines() {
        let t = codec::parse_term(line).map_err(|e| format!("term {line:?}: {e}"))?;
        let printed = codec::print_term(&t);
        ensure(printed == line, || {
            format!("term {line:?} prints as {printed:?}")
        })?;
        n += 1;
    }
    Ok(n)
}

fn command_goldens(dir: &Path) -> Result<usize, String> {
    let manifest = read(&dir.join("manifest.tsv"))?;
    let mut n = 0;
    for line in manifest.lines().filter(|l| !l.is_empty()) {
        let fields: Vec<&str> = line.split('\t').collect();
        let [out, code, args @ ..] = fields.as_slice() else {
            return Err(format!("malformed manifest line {line:?}"));
        };
        let code: i32 = code
            .parse()
            .map_err(|_| format!("bad exit code in {line:?}"))?;
        let argv: Vec<String> = std::iter::once("tokenspace".to_string())
            .chain(args.iter().map(|a| {
                if a.ends_with(".json") && dir.join(a).exists() {
                    dir.join(a).to_string_lossy().into_owned()
                } else {
                    a.to_string()
                }
            }))
            .collect();
        let expected = read(&dir.join("outputs").join(out))?;
        let first = tokenspace_cli::run(argv.clone());
        let second = tokenspace_cli::run(argv);
        ensure(first == second, || format!("{out}: two runs differ"))?;
        ensure(first.0 == code, || {
            format!("{out}: exit {} instead of {code}", first.0)
        })?;
        ensure(first.1 == expected, || {
            format!("{out}: report differs from golden file")
        })?;
        n += 1;
    }
    Ok(n)
}

fn alphabet() -> Vec<Symbol> {
    vec![sym("a"), sym("b")]
}

fn random_map(rng: &mut ChaCha8Rng, bijective: bool) -> SymbolMap {
    let alpha = alphabet();
    let images: Vec<Symbol> = if bijective {
        let mut v = alpha.clone();
        v.shuffle(rng);
        v
    } else {
        alpha
            .iter()
            .map(|_| alpha[rng.gen_range(0..alpha.len())].clone())
            .collect()
    };
    alpha.into_iter().zip(images).collect()
}

fn random_heap(rng: &mut ChaCha8Rng, depth: usize) -> Heap {
    let alpha = alphabet();
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return if rng.gen_bool(0.6) {
            let pool = words_up_to(&alpha, 2);
            let k = rng.gen_range(0..=3);
            Heap::finite(pool.choose_multiple(rng, k).cloned())
        } else {
            Heap::full(alpha.into_iter().filter(|_| rng.gen_bool(0.7)))
        };
    }
    match rng.gen_range(0..5) {
        0 => Heap::union(random_heap(rng, depth - 1), random_heap(rng, depth - 1)),
        1 => Heap::intersect(random_heap(rng, depth - 1), random_heap(rng, depth - 1)),
        2 => Heap::difference(random_heap(rng, depth - 1), random_heap(rng, depth - 1)),
        3 => Heap::preimage(random_map(rng, false), random_heap(rng, depth - 1)),
        _ => Heap::image_bij(random_map(rng, true), random_heap(rng, depth - 1)),
    }
}

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> Token {
    let alpha = alphabet();
    let len = rng.gen_range(0..=max_len);
    Token(
        (0..len)
            .map(|_| alpha[rng.gen_range(0..alpha.len())].clone())
            .collect(),
    )
}

fn subset_sampling() -> Result<(usize, usize), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut holds, mut fails) = (0, 0);
    for _ in 0..PAIRS {
        let left = random_heap(&mut rng, 3);
        let right = random_heap(&mut rng, 3);
        let QueryAnswer::Subset(v) = heap_query(&HeapQuery::Subset(right.clone(), BOUND), &left)
        else {
            return Err("subset query returned another answer kind".into());
        };
        match v {
            Verdict::Holds => {
                holds += 1;
                let members = left.enumerate(2 * BOUND);
                for _ in 0..SAMPLES {
                    let t = if !members.is_empty() && rng.gen_bool(0.5) {
                        members[rng.gen_range(0..members.len())].clone()
                    } else {
                        random_word(&mut rng, 2 * BOUND)
                    };
                    ensure(!left.contains(&t) || right.contains(&t), || {
                        format!("Holds refuted by {t:?} for {left:?} ⊆ {right:?}")
                    })?;
                }
            }
            Verdict::Fails(Witness::Token(t)) => {
                fails += 1;
                ensure(left.contains(&t) && !right.contains(&t), || {
                    format!("bogus witness {t:?} for {left:?} ⊆ {right:?}")
                })?;
            }
            other => {
                return Err(format!(
                    "unexpected verdict {other:?} for {left:?} ⊆ {right:?}"
                ))
            }
        }
    }
    Ok((holds, fails))
}

pub fn run() -> Result<String, String> {
    let dir = golden();
    let inputs = document_round_trips(&dir.join("inputs"))?;
    let outputs = document_round_trips(&dir.join("outputs"))?;
    let terms = term_round_trips(&dir)?;
    ensure(inputs + outputs + terms >= 50, || {
        format!("only {} round-trip items", inputs + outputs + terms)
    })?;
    let commands = command_goldens(&dir)?;
    let (holds, fails) = subset_sampling()?;
    Ok(format!(
        "{} documents and {terms} terms round trip; {commands} commands byte-identical over two runs; \
         {holds} Holds verdicts survive {SAMPLES} samples each, {fails} Fails witnesses genuine",
        inputs + outputs
    ))
}
