//! In-memory game sessions: create, protect, undo/redo, export.
//!
//! Each session keeps its move list and the state after every turn, so undo
//! is a pop and the exported trace is a fresh replay of the moves.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use serde::{Deserialize, Serialize};
use uuid::Uuid;

use crate::budget::BudgetSeq;
use crate::error::{Error, Result};
use crate::families::{make, FamilySpec};
use crate::game::{run, FireState, GameTrace, RunOptions, Strategy};
use crate::graph::LazyGraph;
use crate::key::VertexKey;

/// Parses an initial fire: `ball:R`, `ball:R@<key>`, or keys separated by `;`.
pub fn parse_fire(g: &LazyGraph, text: &str) -> Result<Vec<VertexKey>> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("ball:") {
        let (radius, center) = match rest.split_once('@') {
            Some((r, c)) => (r, g.parse_key(c.trim())?),
            None => (rest, g.base().clone()),
        };
        let radius: usize = radius
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad ball radius in `{text}`")))?;
        return Ok(g
            .ball(std::iter::once(&center), radius)?
            .members()
            .into_iter()
            .collect());
    }
    let keys: Vec<VertexKey> = text
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| g.parse_key(s))
        .collect::<Result<_>>()?;
    if keys.is_empty() {
        return Err(Error::InvalidArgument("initial fire must be nonempty".into()));
    }
    Ok(keys)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum FireInput {
    Text(String),
    Keys(Vec<String>),
}

#[derive(Debug, Clone, Deserialize)]
pub struct CreateRequest {
    pub family: String,
    pub x0: FireInput,
    pub budget: BudgetSeq,
    #[serde(default = "one")]
    pub r: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StateView {
    pub id: String,
    pub family: String,
    pub turn: usize,
    pub r: u32,
    pub budget: BudgetSeq,
    /// Budget of the next turn.
    pub next_budget: u64,
    pub burning: Vec<VertexKey>,
    pub protected: Vec<VertexKey>,
    pub frontier: Vec<VertexKey>,
    pub stuck: bool,
    pub can_undo: bool,
    pub can_redo: bool,
}

pub struct Session {
    id: String,
    g: LazyGraph,
    x0: Vec<VertexKey>,
    budget: BudgetSeq,
    r: u32,
    moves: Vec<Vec<VertexKey>>,
    /// `states[n]` is the state after turn `n`.
    states: Vec<FireState>,
    redo: Vec<Vec<VertexKey>>,
}

impl Session {
    pub fn create(id: String, req: &CreateRequest) -> Result<Self> {
        if req.r == 0 {
            return Err(Error::InvalidArgument("spread radius must be positive".into()));
        }
        let spec: FamilySpec = req.family.parse()?;
        let g = make(&spec)?;
        let x0 = match &req.x0 {
            FireInput::Text(t) => parse_fire(&g, t)?,
            FireInput::Keys(keys) => keys.iter().map(|k| g.parse_key(k)).collect::<Result<_>>()?,
        };
        let state = FireState::new(&g, &x0)?;
        let mut x0 = state.burning_sorted();
        x0.dedup();
        Ok(Session {
            id,
            g,
            x0,
            budget: req.budget.clone(),
            r: req.r,
            moves: Vec::new(),
            states: vec![state],
            redo: Vec::new(),
        })
    }

    fn current(&self) -> &FireState {
        self.states.last().expect("at least the initial state")
    }

    pub fn view(&self) -> StateView {
        let state = self.current();
        StateView {
            id: self.id.clone(),
            family: self.g.name().to_string(),
            turn: state.turn(),
            r: self.r,
            budget: self.budget.clone(),
            next_budget: self.budget.value(state.turn() as u64 + 1),
            burning: state.burning_sorted(),
            protected: state.protected_sorted(),
            frontier: state.frontier(&self.g).into_iter().collect(),
            stuck: state.is_stuck(),
            can_undo: !self.moves.is_empty(),
            can_redo: !self.redo.is_empty(),
        }
    }

    fn play(&mut self, w: Vec<VertexKey>) -> Result<()> {
        let state = self.current();
        let turn = state.turn() + 1;
        let budget = self.budget.value(turn as u64);
        if w.len() as u64 > budget {
            return Err(Error::BudgetExceeded {
                turn,
                size: w.len(),
                budget,
            });
        }
        let mut next = state.clone();
        next.advance(&self.g, &w, self.r)?;
        self.states.push(next);
        self.moves.push(w);
        Ok(())
    }

    /// Protects `keys`, then spreads. Rejected moves leave the session unchanged.
    pub fn protect(&mut self, keys: &[String]) -> Result<StateView> {
        let w: Vec<VertexKey> = keys.iter().map(|k| self.g.parse_key(k)).collect::<Result<_>>()?;
        self.play(w)?;
        self.redo.clear();
        Ok(self.view())
    }

    pub fn undo(&mut self) -> Result<StateView> {
        let Some(w) = self.moves.pop() else {
            return Err(Error::InvalidArgument("nothing to undo".into()));
        };
        self.states.pop();
        self.redo.push(w);
        Ok(self.view())
    }

    pub fn redo(&mut self) -> Result<StateView> {
        let Some(w) = self.redo.pop() else {
            return Err(Error::InvalidArgument("nothing to redo".into()));
        };
        self.play(w)?;
        Ok(self.view())
    }

    /// Trace of the moves played so far, produced by a fresh replay.
    pub fn trace(&self) -> Result<GameTrace> {
        let strategy = Strategy {
            r: self.r,
            budget: self.budget.clone(),
            schedule: self.moves.clone(),
        };
        let opts = RunOptions {
            radius_cap: None,
            max_turns: self.moves.len().max(1),
        };
        run(&self.g, &self.x0, &strategy, opts)
    }
}

/// Sessions by id; one writer per session.
#[derive(Clone, Default)]
pub struct SessionStore {
    sessions: Arc<RwLock<HashMap<String, Arc<Mutex<Session>>>>>,
}

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error("no session `{0}`")]
    NotFound(String),
    #[error(transparent)]
    Engine(#[from] Error),
}

impl SessionStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn create(&self, req: &CreateRequest) -> Result<StateView, ServiceError> {
        let id = Uuid::new_v4().simple().to_string();
        let session = Session::create(id.clone(), req)?;
        let view = session.view();
        self.sessions
            .write()
            .expect("session map lock")
            .insert(id, Arc::new(Mutex::new(session)));
        Ok(view)
    }

    pub fn with<T>(&self, id: &str, f: impl FnOnce(&mut Session) -> Result<T>) -> Result<T, ServiceError> {
        let session = self
            .sessions
            .read()
            .expect("session map lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::NotFound(id.to_string()))?;
        let mut guard = session.lock().expect("session lock");
        Ok(f(&mut guard)?)
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("session map lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
