use std::collections::{BTreeMap, HashMap, HashSet};

use super::SatdOccurrence;

type SlotKey = (Option<String>, Option<String>, String, usize);

fn slot_key(o: &SatdOccurrence) -> SlotKey {
    (o.key.class.clone(), o.key.method.clone(), o.key.text.clone(), o.occurrence_index)
}

/// Live SATD instances by file path, and the id counters.
#[derive(Debug, Clone, Default)]
pub struct Ledger {
    live: BTreeMap<String, HashMap<SlotKey, u64>>,
    next_instance_id: u64,
    next_satd_id: u64,
    /// Ids given to occurrences first seen without an addition.
    unborn: HashSet<u64>,
}

impl Ledger {
    pub fn new() -> Self {
        Self::starting_at(1, 1)
    }

    /// Starts the counters at the given ids, e.g. past the ones already
    /// stored for another project.
    pub fn starting_at(instance_id: u64, satd_id: u64) -> Self {
        Self {
            next_instance_id: instance_id,
            next_satd_id: satd_id,
            ..Self::default()
        }
    }

    pub fn lookup(&self, o: &SatdOccurrence) -> Option<u64> {
        self.live.get(o.path()).and_then(|m| m.get(&slot_key(o))).copied()
    }

    pub fn fresh_instance_id(&mut self) -> u64 {
        let id = self.next_instance_id;
        self.next_instance_id += 1;
        id
    }

    pub fn next_satd_id(&mut self) -> u64 {
        let id = self.next_satd_id;
        self.next_satd_id += 1;
        id
    }

    pub(crate) fn mark_unborn(&mut self, id: u64) {
        self.unborn.insert(id);
    }

    /// True the first time an operation touches an id that was never added.
    pub(crate) fn take_unborn(&mut self, id: u64) -> bool {
        self.unborn.remove(&id)
    }

    pub fn forget_path(&mut self, path: &str) {
        self.live.remove(path);
    }

    pub fn insert(&mut self, o: &SatdOccurrence, id: u64) {
        let previous = self.live.entry(o.path().to_string()).or_default().insert(slot_key(o), id);
        debug_assert!(previous.is_none(), "slot {:?} filled twice", slot_key(o));
    }

    pub fn live_count(&self) -> usize {
        self.live.values().map(HashMap::len).sum()
    }

    pub fn live_ids(&self) -> Vec<u64> {
        let mut ids: Vec<u64> = self.live.values().flat_map(|m| m.values().copied()).collect();
        ids.sort_unstable();
        ids
    }
}
