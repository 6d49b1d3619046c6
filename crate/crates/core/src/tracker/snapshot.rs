use std::collections::HashMap;

use log::warn;

use super::{InstanceKey, SatdOccurrence};
use crate::classify::SatdClassifier;
use crate::comments::{self, CommentInstance};

/// Every comment in one file version, split by verdict.
#[derive(Debug, Clone, Default)]
pub struct Snapshot {
    pub satd: Vec<SatdOccurrence>,
    /// Comments the classifier rejected. They can still be the new side of
    /// an edit that stopped reading as debt.
    pub plain: Vec<CommentInstance>,
    /// Classifier failures; the affected comments are in neither list.
    pub errors: Vec<String>,
}

impl Snapshot {
    pub fn take(file_path: &str, text: &str, classifier: &dyn SatdClassifier) -> Self {
        let instances = comments::extract(text, file_path);
        let texts: Vec<&str> = instances.iter().map(|c| c.text()).collect();
        let mut errors = Vec::new();
        let verdicts: Vec<Option<bool>> = match classifier.classify_batch(&texts) {
            Ok(v) => v.into_iter().map(Some).collect(),
            Err(batch_err) => {
                warn!("classifier failed on {file_path}: {batch_err}; retrying per comment");
                texts
                    .iter()
                    .map(|t| match classifier.classify_batch(&[t]) {
                        Ok(v) => Some(v[0]),
                        Err(e) => {
                            errors.push(format!("{file_path}: cannot classify {t:?}: {e}"));
                            None
                        }
                    })
                    .collect()
            }
        };

        let mut seen: HashMap<InstanceKey, usize> = HashMap::new();
        let mut out = Snapshot {
            errors,
            ..Snapshot::default()
        };
        for (instance, verdict) in instances.into_iter().zip(verdicts) {
            match verdict {
                Some(true) => {
                    let key = InstanceKey {
                        file_path: file_path.to_string(),
                        class: instance.containing_class.clone(),
                        method: instance.containing_method.clone(),
                        text: instance.comment.text.clone(),
                    };
                    let slot = seen.entry(key.clone()).or_insert(0);
                    out.satd.push(SatdOccurrence {
                        key,
                        occurrence_index: *slot,
                        comment: instance,
                    });
                    *slot += 1;
                }
                Some(false) => out.plain.push(instance),
                None => {}
            }
        }
        out
    }
}

/// The SATD occurrences of one file version, in document order.
pub fn snapshot(file_path: &str, text: &str, classifier: &dyn SatdClassifier) -> Vec<SatdOccurrence> {
    Snapshot::take(file_path, text, classifier).satd
}
