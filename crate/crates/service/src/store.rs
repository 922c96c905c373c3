use std::collections::HashMap;
use std::sync::Arc;

use dfx_ahp::hierarchy::{HierarchyDocument, JudgmentRecord};
use dfx_ahp::presets::{self, Preset};
use dfx_ahp::{EngineOptions, Model};
use dfx_ahp_api::ContextStatus;
use parking_lot::RwLock;
use uuid::Uuid;

use crate::error::ApiError;
use crate::journal::{Event, Journal};
use crate::session::{Origin, Session};

/// All live sessions. Reads clone an `Arc` snapshot; writes swap in a new
/// snapshot after checking the revision.
#[derive(Debug, Default)]
pub struct SessionStore {
    sessions: RwLock<HashMap<Uuid, Arc<Session>>>,
    journal: Option<Journal>,
}

pub(crate) fn preset_origin(p: &Preset) -> Origin {
    Origin {
        preset: Some(p.name.clone()),
        title: Some(p.title.clone()),
        illustrative: p.illustrative,
    }
}

fn document_origin() -> Origin {
    Origin {
        preset: None,
        title: None,
        illustrative: false,
    }
}

impl SessionStore {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens (or creates) a journal and replays it.
    pub fn with_journal(journal: Journal, options: &EngineOptions) -> std::io::Result<Self> {
        let events = Journal::read(journal.path())?;
        let store = Self {
            sessions: RwLock::default(),
            journal: None,
        };
        for event in events {
            if let Err(err) = store.replay(&event, options) {
                tracing::warn!(%err, ?event, "journal event could not be replayed");
            }
        }
        Ok(Self {
            sessions: store.sessions,
            journal: Some(journal),
        })
    }

    fn replay(&self, event: &Event, options: &EngineOptions) -> Result<(), ApiError> {
        match event {
            Event::Created {
                session,
                preset,
                document,
            } => {
                let s = match (preset, document) {
                    (Some(name), _) => {
                        let p = presets::load_bundled(name)?;
                        Session::new(*session, preset_origin(&p), p.model()?, options)?
                    }
                    (None, Some(doc)) => Session::new(*session, document_origin(), Model::from_document(doc)?, options)?,
                    (None, None) => return Err(ApiError::BadRequest("created event without a source".into())),
                };
                self.sessions.write().insert(*session, Arc::new(s));
            }
            Event::Judged {
                session,
                revision,
                judgments,
            } => {
                self.commit(&session.to_string(), revision - 1, judgments, options)?;
            }
        }
        Ok(())
    }

    fn journal(&self, event: &Event) -> Result<(), ApiError> {
        match &self.journal {
            Some(j) => j.append(event).map_err(|e| ApiError::Journal(e.to_string())),
            None => Ok(()),
        }
    }

    pub fn create_from_preset(&self, name: &str, options: &EngineOptions) -> Result<Arc<Session>, ApiError> {
        let p = presets::load_bundled(name)?;
        let id = Uuid::new_v4();
        let s = Arc::new(Session::new(id, preset_origin(&p), p.model()?, options)?);
        let mut map = self.sessions.write();
        self.journal(&Event::Created {
            session: id,
            preset: Some(p.name.clone()),
            document: None,
        })?;
        map.insert(id, s.clone());
        Ok(s)
    }

    pub fn create_from_document(
        &self,
        doc: HierarchyDocument,
        options: &EngineOptions,
    ) -> Result<Arc<Session>, ApiError> {
        let id = Uuid::new_v4();
        let model = Model::from_document(&doc)?;
        let s = Arc::new(Session::new(id, document_origin(), model, options)?);
        let mut map = self.sessions.write();
        self.journal(&Event::Created {
            session: id,
            preset: None,
            document: Some(doc),
        })?;
        map.insert(id, s.clone());
        Ok(s)
    }

    pub fn get(&self, id: &str) -> Result<Arc<Session>, ApiError> {
        Uuid::parse_str(id)
            .ok()
            .and_then(|u| self.sessions.read().get(&u).cloned())
            .ok_or_else(|| ApiError::UnknownSession(id.to_string()))
    }

    /// Applies judgments if `revision` is current. The solve runs outside the
    /// lock; a concurrent commit in the meantime makes this one stale.
    pub fn commit(
        &self,
        id: &str,
        revision: u64,
        judgments: &[JudgmentRecord],
        options: &EngineOptions,
    ) -> Result<(Arc<Session>, Vec<ContextStatus>), ApiError> {
        let current = self.get(id)?;
        if current.revision != revision {
            return Err(ApiError::StaleRevision {
                given: revision,
                current: current.revision,
            });
        }
        let (next, statuses) = current.apply(judgments, options)?;
        let next = Arc::new(next);
        let mut map = self.sessions.write();
        let latest = map.get(&current.id).expect("sessions are never removed");
        if latest.revision != revision {
            return Err(ApiError::StaleRevision {
                given: revision,
                current: latest.revision,
            });
        }
        self.journal(&Event::Judged {
            session: current.id,
            revision: next.revision,
            judgments: judgments.to_vec(),
        })?;
        map.insert(current.id, next.clone());
        Ok((next, statuses))
    }

    pub fn len(&self) -> usize {
        self.sessions.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
