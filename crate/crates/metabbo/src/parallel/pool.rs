//! A persistent thread pool for task batches.
//!
//! Workers pull boxed jobs from a shared channel; each batch gets its own
//! result channel, and results are reassembled by submission index, so the
//! output order never depends on scheduling. Panics inside a task are caught
//! and reported as messages instead of poisoning the pool.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::thread::JoinHandle;

use crossbeam_channel::{unbounded, Sender};

type Job = Box<dyn FnOnce() + Send + 'static>;

pub struct WorkerPool {
    tx: Option<Sender<Job>>,
    handles: Vec<JoinHandle<()>>,
    workers: usize,
}

/// What happened to one task: its value, or a description of the panic.
pub type TaskOutcome<R> = std::result::Result<R, String>;

impl WorkerPool {
    /// Spawn `workers` threads (at least one).
    pub fn new(workers: usize) -> Self {
        let workers = workers.max(1);
        let (tx, rx) = unbounded::<Job>();
        let handles = (0..workers)
            .map(|_| {
                let rx = rx.clone();
                std::thread::spawn(move || {
                    while let Ok(job) = rx.recv() {
                        job();
                    }
                })
            })
            .collect();
        WorkerPool {
            tx: Some(tx),
            handles,
            workers,
        }
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    /// Run `f` over every input on the pool and return the outcomes in input
    /// order. Blocks until the whole batch is finished.
    pub fn run_batch<T, R, F>(&self, inputs: Vec<T>, f: F) -> Vec<TaskOutcome<R>>
    where
        T: Send + 'static,
        R: Send + 'static,
        F: Fn(T) -> R + Send + Sync + 'static,
    {
        let n = inputs.len();
        let f = Arc::new(f);
        let (result_tx, result_rx) = unbounded::<(usize, TaskOutcome<R>)>();
        let tx = self.tx.as_ref().expect("pool alive");
        for (i, input) in inputs.into_iter().enumerate() {
            let f = Arc::clone(&f);
            let result_tx = result_tx.clone();
            let job: Job = Box::new(move || {
                let outcome = catch_unwind(AssertUnwindSafe(|| f(input)))
                    .map_err(|panic| panic_message(panic.as_ref()));
                let _ = result_tx.send((i, outcome));
            });
            tx.send(job).expect("workers alive");
        }
        drop(result_tx);
        let mut slots: Vec<Option<TaskOutcome<R>>> = (0..n).map(|_| None).collect();
        for _ in 0..n {
            let (i, outcome) = result_rx.recv().expect("worker dropped a result");
            slots[i] = Some(outcome);
        }
        slots.into_iter().map(|s| s.expect("all slots filled")).collect()
    }
}

impl Drop for WorkerPool {
    fn drop(&mut self) {
        self.tx.take(); // close the channel so workers drain and exit
        for handle in self.handles.drain(..) {
            let _ = handle.join();
        }
    }
}

fn panic_message(panic: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = panic.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = panic.downcast_ref::<String>() {
        s.clone()
    } else {
        "task panicked".to_string()
    }
}
