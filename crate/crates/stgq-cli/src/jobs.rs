//! A small fixed-size worker pool over boxed jobs. Results come back in
//! submission order, so reports stay deterministic regardless of the
//! thread count. STGQ_THREADS caps the parallelism.

use std::sync::Mutex;

use stgq::report::CheckRecord;

pub type Job = Box<dyn FnOnce() -> Vec<CheckRecord> + Send>;

pub fn max_threads() -> usize {
    match std::env::var("STGQ_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        Some(n) if n >= 1 => n,
        _ => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    }
}

pub fn run_jobs(jobs: Vec<Job>, threads: usize) -> Vec<CheckRecord> {
    let n = jobs.len();
    let workers = threads.clamp(1, n.max(1));
    if workers <= 1 || n <= 1 {
        return jobs.into_iter().flat_map(|j| j()).collect();
    }
    let queue: Mutex<Vec<(usize, Job)>> = Mutex::new(jobs.into_iter().enumerate().rev().collect());
    let results: Mutex<Vec<Option<Vec<CheckRecord>>>> = Mutex::new((0..n).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let next = queue.lock().unwrap().pop();
                match next {
                    Some((idx, job)) => {
                        let out = job();
                        results.lock().unwrap()[idx] = Some(out);
                    }
                    None => break,
                }
            });
        }
    });
    results.into_inner().unwrap().into_iter().flatten().flatten().collect()
}
