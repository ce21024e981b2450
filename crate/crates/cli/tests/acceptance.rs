//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test -p posheap-cli --test acceptance`.

use std::alloc::{GlobalAlloc, Layout, System};
use std::collections::{BTreeSet, HashMap};
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use posheap_core::ecp::{count_ecp, solve_ecp, validate_cycle};
use posheap_core::gen::{random_ecp_instance, random_text};
use posheap_core::inference::{count_p2, count_p3, count_p4, enum_p2, enum_p3, enum_p4, infer_p1, infer_p3, verify_text};
use posheap_core::invariants::{alphabet_equivariance, demotion_invariance, suffix_link_descent, sigma_residual, trace_cycle_spells_text};
use posheap_core::oracle::{brute_force_oracle, ecp_cycles, for_each_valid_text};
use posheap_core::pht::parse_pht;
use posheap_core::trace::{build_trace_graph, compute_sigma, reconstruct_suffix_links};
use posheap_core::{Alphabet, Flags, HeapSketch, PositionHeap, ProblemKind};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Tracks live and peak heap bytes so the linearity check can measure memory.
struct Counting;

static LIVE: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for Counting {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            let now = LIVE.fetch_add(layout.size(), Ordering::Relaxed) + layout.size();
            PEAK.fetch_max(now, Ordering::Relaxed);
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        LIVE.fetch_sub(layout.size(), Ordering::Relaxed);
    }
}

#[global_allocator]
static ALLOC: Counting = Counting;

/// Peak bytes allocated on top of what was live when `f` started.
fn peak_during<T>(f: impl FnOnce() -> T) -> (T, usize) {
    let base = LIVE.load(Ordering::Relaxed);
    PEAK.store(base, Ordering::Relaxed);
    let out = f();
    (out, PEAK.load(Ordering::Relaxed) - base)
}

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

macro_rules! check {
    ($cond:expr, $($fmt:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($fmt)+));
        }
    };
}

const TEXT: &[u8] = b"abaababc";
const CLASS: [&str; 6] = ["abaababc", "ababaabc", "aaabbabc", "aabbaabc", "baaababc", "baabaabc"];

fn fixture(name: &str) -> HeapSketch {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    parse_pht(&std::fs::read_to_string(&p).expect("fixture")).expect("fixture parses")
}

fn sketch(text: &[u8], numbered: bool, labeled: bool, links: bool) -> HeapSketch {
    let (h, l) = PositionHeap::from_text(text).expect("valid text");
    HeapSketch::from_heap(&h, &l, Flags { numbered, labeled, links })
}

fn strings(set: &BTreeSet<Vec<u8>>) -> BTreeSet<String> {
    set.iter().map(|t| String::from_utf8_lossy(t).into_owned()).collect()
}

fn alphabet(k: usize) -> Alphabet {
    Alphabet::new(&b"abcdefgh"[..k]).unwrap()
}

fn forward_build() -> Verdict {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_posheap")).args(["build", "abaababc"]).output().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check!(out.status.success(), "exit status {}", out.status);
    let s = parse_pht(&String::from_utf8_lossy(&out.stdout)).map_err(|e| e.to_string())?;
    let num = |v: usize| s.number(v).unwrap();
    let edges: BTreeSet<(usize, usize, u8)> =
        (1..s.node_count()).map(|v| (num(s.parent(v).unwrap()), num(v), s.label(v).unwrap())).collect();
    let want: BTreeSet<(usize, usize, u8)> =
        [(0, 1, b'a'), (0, 2, b'b'), (0, 8, b'c'), (1, 3, b'a'), (1, 4, b'b'), (4, 6, b'c'), (2, 5, b'a'), (2, 7, b'c')]
            .into_iter()
            .collect();
    check!(edges == want, "edges {edges:?}");
    let links: BTreeSet<(usize, usize)> = (1..s.node_count()).map(|v| (num(v), num(s.link(v).unwrap()))).collect();
    let want: BTreeSet<(usize, usize)> =
        [(1, 0), (2, 0), (3, 1), (4, 2), (5, 1), (6, 7), (7, 8), (8, 0)].into_iter().collect();
    check!(links == want, "links {links:?}");
    check!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("8 edges and 8 links exact, {elapsed:.0?} including process start"))
}

fn problem1_round_trip() -> Verdict {
    let out = infer_p1(&fixture("numbered_labeled.pht")).map_err(|e| e.to_string())?;
    check!(out.text() == Some(TEXT), "example gave {:?}", out.text().map(String::from_utf8_lossy));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut failures = 0;
    for _ in 0..10_000 {
        let k = rng.gen_range(1..=4);
        let len = if k == 1 { rng.gen_range(0..=1) } else { rng.gen_range(0..=64) };
        let t = random_text(&mut rng, len, &alphabet(k)).unwrap();
        if infer_p1(&sketch(&t, true, true, false)).ok().and_then(|o| o.text().map(<[u8]>::to_vec)) != Some(t) {
            failures += 1;
        }
    }
    check!(failures == 0, "{failures} of 10000 random texts did not round-trip");
    Ok("example + 10000 random texts, 0 failures".into())
}

fn problem3_headline() -> Verdict {
    let start = Instant::now();
    let s = fixture("labeled.pht");
    let count = count_p3(&s).map_err(|e| e.to_string())?;
    let got: BTreeSet<Vec<u8>> = enum_p3(&s).map_err(|e| e.to_string())?.collect();
    let elapsed = start.elapsed();
    check!(count.to_u64() == Some(6), "count {count}");
    let want: BTreeSet<String> = CLASS.iter().map(|s| s.to_string()).collect();
    check!(strings(&got) == want, "enumerated {:?}", strings(&got));
    check!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("count 6, the six expected texts, {elapsed:.0?}"))
}

fn trace_internals() -> Verdict {
    let s = fixture("labeled.pht");
    let links = reconstruct_suffix_links(&s).map_err(|e| e.to_string())?;
    let sigma = compute_sigma(&s, &links).map_err(|e| e.to_string())?;
    let by_value = |x: i64| -> BTreeSet<&str> { (1..s.node_count()).filter(|&v| sigma.get(v) == x).map(|v| s.id(v)).collect() };
    let twos = by_value(2);
    let zeros = by_value(0);
    check!(twos == ["a", "ab"].into_iter().collect(), "σ = 2 on {twos:?}");
    check!(zeros == ["bc", "c"].into_iter().collect(), "σ = 0 on {zeros:?}");
    for v in zeros.iter().map(|id| s.node(id).unwrap()) {
        check!(s.label(v) == Some(b'c') && s.children(v).is_empty(), "{} is not a c-leaf", s.id(v));
    }
    check!(by_value(1).len() == s.node_count() - 1 - 4, "σ outside {{0, 1, 2}}");
    check!(sigma.total() == 8, "Σσ = {}", sigma.total());
    Ok("σ = 2 on {a, ab}, 0 on {bc, c}, 1 elsewhere, Σσ = 8".into())
}

fn ecp_count_consistency() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let a = alphabet(3);
    for _ in 0..500 {
        let len = rng.gen_range(1..=10);
        let t = random_text(&mut rng, len, &a).unwrap();
        let s = sketch(&t, false, true, false);
        let links = reconstruct_suffix_links(&s).map_err(|e| e.to_string())?;
        let sigma = compute_sigma(&s, &links).map_err(|e| e.to_string())?;
        let g = build_trace_graph(&s, &links, &sigma).map_err(|e| e.to_string())?;
        let brute = ecp_cycles(&g.graph, &g.priority, g.root, 1_000_000).map_err(|e| e.to_string())?;
        let fast = count_ecp(&g.graph, &g.priority, g.root);
        check!(fast.to_u64() == Some(brute.len() as u64), "{:?}: count {fast} vs {} cycles", String::from_utf8_lossy(&t), brute.len());
    }
    for case in 0..500 {
        let (g, f, r) = random_ecp_instance(&mut rng, 5, 8, case % 10 == 0);
        let brute = ecp_cycles(&g, &f, r, 1_000_000).map_err(|e| e.to_string())?;
        let fast = count_ecp(&g, &f, r);
        check!(fast.to_u64() == Some(brute.len() as u64), "instance {case}: count {fast} vs {} cycles", brute.len());
    }
    let elapsed = start.elapsed();
    check!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    Ok(format!("500 trace graphs + 500 random instances exact, {elapsed:.1?}"))
}

fn exhaustive_sweep() -> Verdict {
    let start = Instant::now();
    let a = alphabet(3);
    let mut texts = 0;
    let mut mismatches = Vec::new();
    let mut cache: HashMap<Vec<u8>, BTreeSet<Vec<u8>>> = HashMap::new();
    for n in 0..=7 {
        for_each_valid_text(a.letters(), n, |t| {
            texts += 1;
            let s = sketch(t, false, true, false);
            let got: BTreeSet<Vec<u8>> = match enum_p3(&s) {
                Ok(stream) => stream.collect(),
                Err(_) => BTreeSet::new(),
            };
            // one oracle scan per class; every member must reproduce it
            let brute = match cache.get(t) {
                Some(b) => b.clone(),
                None => {
                    let b = brute_force_oracle(&s, ProblemKind::P3, &a, 10).unwrap_or_default();
                    for x in &b {
                        cache.insert(x.clone(), b.clone());
                    }
                    b
                }
            };
            if got != brute || !brute.contains(t) {
                mismatches.push(String::from_utf8_lossy(t).into_owned());
            }
        });
    }
    let elapsed = start.elapsed();
    check!(mismatches.is_empty(), "{} mismatches, first {:?}", mismatches.len(), &mismatches[..mismatches.len().min(5)]);
    check!(elapsed < Duration::from_secs(600), "took {elapsed:?}");
    Ok(format!("{texts} texts over abc up to length 7, 0 mismatches, {elapsed:.1?}"))
}

fn problem2_formula() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut cases = 0;
    for _ in 0..300 {
        let k = rng.gen_range(2..=5);
        let sigma = alphabet(k);
        let len = rng.gen_range(1..=12);
        let t = random_text(&mut rng, len, &sigma).unwrap();
        let s = sketch(&t, true, false, false);
        let delta = s.children(s.root()).len();
        let want: u64 = ((k - delta + 1)..=k).map(|x| x as u64).product();
        let count = count_p2(&s, &sigma).map_err(|e| e.to_string())?;
        check!(count.to_u64() == Some(want), "{:?} over {k}: count {count}, formula {want}", String::from_utf8_lossy(&t));
        let texts: Vec<Vec<u8>> = enum_p2(&s, &sigma).map_err(|e| e.to_string())?.collect();
        let distinct: BTreeSet<&Vec<u8>> = texts.iter().collect();
        check!(distinct.len() == texts.len() && texts.len() as u64 == want, "{} texts, {} distinct", texts.len(), distinct.len());
        for x in &texts {
            check!(verify_text(ProblemKind::P2, &s, x) == Ok(true), "{:?} does not verify", String::from_utf8_lossy(x));
        }
        cases += 1;
    }
    Ok(format!("{cases} random texts, count = |Σ|!/(|Σ|-Δ)! and all enumerated texts verify"))
}

fn problem4_example() -> Verdict {
    let s = fixture("linked.pht");
    let sigma = alphabet(3);
    let count = count_p4(&s, &sigma).map_err(|e| e.to_string())?;
    check!(count.to_u64() == Some(36), "count {count}");
    let texts: Vec<Vec<u8>> = enum_p4(&s, &sigma).map_err(|e| e.to_string())?.collect();
    let distinct: BTreeSet<&Vec<u8>> = texts.iter().collect();
    check!(texts.len() == 36 && distinct.len() == 36, "{} texts, {} distinct", texts.len(), distinct.len());
    for t in &texts {
        check!(verify_text(ProblemKind::P4, &s, t) == Ok(true), "{:?} does not verify", String::from_utf8_lossy(t));
    }
    check!(texts.iter().any(|t| t == TEXT), "source text missing");
    Ok("count 36, 36 distinct texts, all verify by forward build".into())
}

/// Best-of-seven wall time and the peak memory of one build + infer_p1 run.
fn build_and_infer(t: &[u8]) -> Result<(Duration, usize), String> {
    let mut best = Duration::MAX;
    let mut peak = 0;
    for _ in 0..7 {
        let start = Instant::now();
        let (ok, bytes) = peak_during(|| {
            let s = sketch(t, true, true, false);
            infer_p1(&s).map(|o| o.text() == Some(t)).unwrap_or(false)
        });
        best = best.min(start.elapsed());
        peak = bytes;
        check!(ok, "length {} did not round-trip", t.len());
    }
    Ok((best, peak))
}

fn linearity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let a = alphabet(4);
    let small = random_text(&mut rng, 100_000, &a).unwrap();
    let large = random_text(&mut rng, 200_000, &a).unwrap();
    let (t1, m1) = build_and_infer(&small)?;
    let (t2, m2) = build_and_infer(&large)?;
    let time_ratio = t2.as_secs_f64() / t1.as_secs_f64();
    let mem_ratio = m2 as f64 / m1 as f64;
    check!(time_ratio <= 3.0, "time ratio {time_ratio:.2} ({t1:?} vs {t2:?})");
    check!(mem_ratio <= 3.0, "memory ratio {mem_ratio:.2} ({m1} vs {m2} bytes)");

    let s = sketch(&large, false, true, false);
    let start = Instant::now();
    let out = infer_p3(&s).map_err(|e| e.to_string())?;
    let p3 = start.elapsed();
    check!(out.is_solved(), "no text for the length-200000 labeled heap");
    check!(p3 < Duration::from_secs(5), "problem 3 took {p3:?}");
    Ok(format!(
        "time ratio {time_ratio:.2} ({t1:.0?} vs {t2:.0?}), memory ratio {mem_ratio:.2} ({} vs {} MiB), problem 3 on 2e5 in {p3:.0?}",
        m1 >> 20,
        m2 >> 20
    ))
}

fn invariant_suites() -> Verdict {
    const CASES: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_000a);
    let four = b"abcd";
    for i in 0..CASES {
        let k = rng.gen_range(2..=4);
        let len = rng.gen_range(0..=40);
        let t = random_text(&mut rng, len, &alphabet(k)).unwrap();
        let (h, l) = PositionHeap::from_text(&t).unwrap();
        suffix_link_descent(&h, &l).map_err(|v| format!("link descent, case {i}: {v}"))?;

        let s = sketch(&t, false, true, false);
        let links = reconstruct_suffix_links(&s).map_err(|e| e.to_string())?;
        let sigma = compute_sigma(&s, &links).map_err(|e| e.to_string())?;
        sigma_residual(&s, &links, &sigma).map_err(|v| format!("σ residual, case {i}: {v}"))?;

        trace_cycle_spells_text(&t).map_err(|v| format!("trace cycle, case {i}: {v}"))?;

        let mut perm = four.to_vec();
        perm.shuffle(&mut rng);
        let mut rename = [0u8; 256];
        for (j, &c) in four.iter().enumerate() {
            rename[c as usize] = perm[j];
        }
        alphabet_equivariance(&t, &rename).map_err(|v| format!("equivariance, case {i}: {v}"))?;
    }
    for i in 0..CASES {
        let (g, f, r) = random_ecp_instance(&mut rng, 5, 8, i % 10 == 0);
        if let Ok(c) = solve_ecp(&g, &f, r) {
            validate_cycle(&g, &f, r, &c).map_err(|e| format!("cycle validator, instance {i}: {e}"))?;
        }
        demotion_invariance(&g, &f, r, 10_000).map_err(|v| format!("demotion, instance {i}: {v}"))?;
    }
    Ok(format!("link descent, σ residual, trace-cycle validation, equivariance and demotion each on {CASES} cases"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("forward build", forward_build),
        ("problem 1 round trip", problem1_round_trip),
        ("problem 3 headline", problem3_headline),
        ("trace internals", trace_internals),
        ("ECP count consistency", ecp_count_consistency),
        ("exhaustive sweep", exhaustive_sweep),
        ("problem 2 formula", problem2_formula),
        ("problem 4 example", problem4_example),
        ("linearity smoke test", linearity),
        ("invariant suites", invariant_suites),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS  {:>2}. {name} — {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}. {name} — {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
